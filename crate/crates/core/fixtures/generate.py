"""Regenerate the fixture JSON files in this directory.

Expected values are computed here from block descriptions, independently of
the Rust library: invariant tuples from the blocks, witnesses as explicit
bases, reflections from the formula x + (x, v) v.
"""

import json
import os
from fractions import Fraction

HERE = os.path.dirname(os.path.abspath(__file__))

E8 = [
    [2, 0, -1, 0, 0, 0, 0, 0],
    [0, 2, 0, -1, 0, 0, 0, 0],
    [-1, 0, 2, -1, 0, 0, 0, 0],
    [0, -1, -1, 2, -1, 0, 0, 0],
    [0, 0, 0, -1, 2, -1, 0, 0],
    [0, 0, 0, 0, -1, 2, -1, 0],
    [0, 0, 0, 0, 0, -1, 2, -1],
    [0, 0, 0, 0, 0, 0, -1, 2],
]


def block_gram(block):
    if "diag" in block:
        return [[block["diag"]]]
    s = block["scale"]
    if block["name"] == "U":
        return [[0, s], [s, 0]]
    return [[s * x for x in row] for row in E8]


def direct_sum(grams):
    n = sum(len(g) for g in grams)
    out = [[0] * n for _ in range(n)]
    k = 0
    for g in grams:
        for i, row in enumerate(g):
            for j, x in enumerate(row):
                out[k + i][k + j] = x
        k += len(g)
    return out


def factor(n):
    n = abs(n)
    out = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def block_invariants(blocks):
    """Rank, signature, det, parity and discriminant invariant factors."""
    rank = p = q = 0
    det = 1
    even = True
    elementary = []
    for b in blocks:
        if "diag" in b:
            k = b["diag"]
            rank += 1
            p += k > 0
            q += k < 0
            det *= k
            even &= k % 2 == 0
            elementary.append(abs(k))
        elif b["name"] == "U":
            s = b["scale"]
            rank += 2
            p += 1
            q += 1
            det *= -s * s
            elementary += [abs(s), abs(s)]
        else:
            s = b["scale"]
            rank += 8
            if s > 0:
                p += 8
            else:
                q += 8
            det *= s ** 8
            elementary += [abs(s)] * 8
    # Recombine elementary divisors into invariant factors d1 | d2 | ...
    by_prime = {}
    for e in elementary:
        for prime, k in factor(e).items():
            by_prime.setdefault(prime, []).append(k)
    length = max((len(v) for v in by_prime.values()), default=0)
    factors = [1] * length
    for prime, exps in by_prime.items():
        exps = sorted(exps)
        for i, k in enumerate(exps):
            factors[length - len(exps) + i] *= prime ** k
    return {
        "rank": rank,
        "signature": [p, q, 0],
        "det": str(det),
        "even": even,
        "discriminant": [str(f) for f in factors],
    }


def k3_gram():
    u = {"name": "U", "scale": 1}
    e = {"name": "E8", "scale": -1}
    return direct_sum([block_gram(b) for b in [u, u, u, e, e]])


def enriques_gram():
    return direct_sum([block_gram({"name": "U", "scale": 1}), block_gram({"name": "E8", "scale": -1})])


def unit(n, i, c=1):
    v = [0] * n
    v[i] = c
    return v


def enriques_pullback_rows(extra=0):
    """Rows (0, a, a, b, b) for the basis of U + E8(-1)."""
    n = 22 + extra
    rows = []
    for k in range(2):
        v = [0] * n
        v[2 + k] = 1
        v[4 + k] = 1
        rows.append(v)
    for k in range(8):
        v = [0] * n
        v[6 + k] = 1
        v[14 + k] = 1
        rows.append(v)
    if extra:
        rows.append(unit(n, 22))
    return rows


def reflection(gram, v):
    n = len(gram)
    gv = [sum(gram[j][k] * v[k] for k in range(n)) for j in range(n)]
    assert sum(v[j] * gv[j] for j in range(n)) == -2
    return [[int(i == j) + v[i] * gv[j] for j in range(n)] for i in range(n)]


def matmul(a, b):
    return [[sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(len(b[0]))] for i in range(len(a))]


def identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def dumps(v, depth):
    """Objects one key per line; arrays of scalars or rows on a single line each."""
    pad = "  " * (depth + 1)
    if isinstance(v, dict):
        items = [pad + json.dumps(k) + ": " + dumps(x, depth + 1) for k, x in v.items()]
        return "{\n" + ",\n".join(items) + "\n" + "  " * depth + "}" if items else "{}"
    if isinstance(v, list) and v and all(isinstance(x, list) for x in v):
        rows = [pad + (dumps(x, depth + 1) if any(isinstance(y, list) for y in x) else json.dumps(x, separators=(",", ":"))) for x in v]
        return "[\n" + ",\n".join(rows) + "\n" + "  " * depth + "]"
    if isinstance(v, list) and any(isinstance(x, dict) for x in v):
        return "[" + ", ".join(json.dumps(x, separators=(", ", ": ")) for x in v) + "]"
    return json.dumps(v, separators=(", ", ": "))


def write(fx):
    path = os.path.join(HERE, fx["name"] + ".json")
    with open(path, "w") as f:
        f.write(dumps(fx, 0) + "\n")


def main():
    U = lambda s: {"name": "U", "scale": s}
    E = lambda s: {"name": "E8", "scale": s}
    D = lambda k: {"diag": k}

    def invariant(name, model, which, blocks, witness, source):
        write({
            "name": name,
            "kind": "invariant",
            "source": source,
            "inputs": {"model": model, "sublattice": which},
            "expected": {"invariants": block_invariants(blocks), "target": blocks, "witness_basis": witness},
        })

    def quotient(name, model, blocks, source):
        write({
            "name": name,
            "kind": "quotient",
            "source": source,
            "inputs": {"model": model},
            "expected": {"invariants": block_invariants(blocks), "target": blocks},
        })

    invariant("enriques-invariant", "enriques", "fixed", [U(2), E(-2)], enriques_pullback_rows(),
              "fixed lattice of the Enriques involution on the K3 lattice")
    quotient("enriques-quotient", "enriques", [U(1), E(-1)], "torsion-free quotient lattice of an Enriques surface")

    for n in (3, 5):
        invariant(f"hilb-n{n}-invariant", f"hilb:{n}", "fixed", [U(2), E(-2), D(-2 * (n - 1))],
                  enriques_pullback_rows(extra=1), f"fixed lattice of iota* + id on K3 + <-{2 * (n - 1)}>")
        quotient(f"hilb-n{n}-quotient", f"hilb:{n}", [U(1), E(-1), D(-(n - 1))],
                 f"quotient lattice for the Hilbert scheme model, n = {n}")

    for d, n in ((2, 1), (2, 3), (3, 2), (4, 3)):
        m = f"kummer:{d}:{n}"
        k = -2 * (n + 1)
        invariant(f"kummer-d{d}-n{n}-invariant", m, "fixed", [U(1), D(k)],
                  [unit(7, 0), unit(7, 1), unit(7, 6)],
                  f"full fixed lattice of the order-{d} action on U^3 + <{k}>")
        invariant(f"kummer-d{d}-n{n}-pullback", m, "pullback", [U(d), D(k)],
                  [unit(7, 0), unit(7, 1, d), unit(7, 6)],
                  f"pullback image U({d}) + <{k}> inside the fixed lattice")
        quotient(f"kummer-d{d}-n{n}-quotient", m, [U(1), D(k // d)],
                 f"quotient lattice U + <{k // d}> for the order-{d} Kummer model")

    for m, d in (("enriques", 2), ("hilb:3", 2), ("hilb:5", 2), ("kummer:2:1", 2), ("kummer:2:3", 2),
                 ("kummer:3:2", 3), ("kummer:4:3", 4)):
        write({
            "name": "transfer-" + m.replace(":", "-"),
            "kind": "transfer",
            "source": f"transfer after pullback is multiplication by {d}",
            "inputs": {"model": m},
            "expected": {"d": d},
        })

    for name, m, dim, sig, iso in (
        ("weight-enriques", "enriques", 12, [2, 10], False),
        ("weight-kummer-d2-n1", "kummer:2:1", 4, [2, 2], False),
        ("weight-kummer-d3-n2", "kummer:3:2", 2, [1, 1], True),
        ("weight-kummer-d4-n3", "kummer:4:3", 2, [1, 1], True),
    ):
        write({
            "name": name,
            "kind": "weight-signature",
            "source": "Hermitian signature of the weight-one eigenspace",
            "inputs": {"model": m},
            "expected": {"dim": dim, "herm_signature": sig, "totally_isotropic": iso},
        })

    k3 = k3_gram()
    s1, s2 = unit(22, 6), unit(22, 14)
    twist = matmul(reflection(k3, s1), reflection(k3, s2))
    write({
        "name": "dehn-twist-nonrealizable",
        "kind": "realize",
        "source": "lift of a root reflection, product of reflections in two orthogonal (-2)-vectors",
        "inputs": {"lattice": "K3", "generators": [twist], "lift": False},
        "expected": {
            "metric": False,
            "complex": False,
            "l_g_rank": 2,
            "l_g_basis": [s1, s2],
            "witnesses": [s1, s2, [-x for x in s1], [-x for x in s2]],
        },
    })
    enr = enriques_gram()
    write({
        "name": "enriques-root-reflection-nonrealizable",
        "kind": "realize",
        "source": "reflection in a (-2)-class of U + E8(-1), lifted through the cover",
        "inputs": {"lattice": "Enriques", "generators": [reflection(enr, unit(10, 2))], "lift": True},
        "expected": {"metric": False, "complex": False, "l_g_rank": 2, "l_g_basis": [s1, s2],
                     "witnesses": [s1, s2, [-x for x in s1], [-x for x in s2]]},
    })
    write({
        "name": "trivial-group-realizable",
        "kind": "realize",
        "source": "trivial group on the K3 lattice",
        "inputs": {"lattice": "K3", "generators": [], "lift": False},
        "expected": {"metric": True, "complex": True, "l_g_rank": 0, "l_g_basis": [], "witnesses": []},
    })
    write({
        "name": "trivial-enriques-realizable",
        "kind": "realize",
        "source": "trivial group on the Enriques lattice, lifted to <iota*>",
        "inputs": {"lattice": "Enriques", "generators": [], "lift": True},
        "expected": {"metric": True, "complex": True, "l_g_rank": 0, "l_g_basis": [], "witnesses": []},
    })
    iota = identity(22)
    for i in range(2):
        iota[i][i] = -1
    for a, b in list(zip(range(2, 4), range(4, 6))) + list(zip(range(6, 14), range(14, 22))):
        iota[a][a] = iota[b][b] = 0
        iota[a][b] = iota[b][a] = 1
    write({
        "name": "iota-realizable",
        "kind": "realize",
        "source": "the Enriques involution on the K3 lattice",
        "inputs": {"lattice": "K3", "generators": [iota], "lift": False},
        "expected": {"metric": True, "complex": True, "l_g_rank": 0, "l_g_basis": [], "witnesses": []},
    })


if __name__ == "__main__":
    main()
