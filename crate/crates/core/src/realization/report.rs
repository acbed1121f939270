//! The realization invariant `L_G` and the two verdicts built on it.

use std::collections::BTreeSet;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde_json::{json, Value};

use super::plane::{find_invariant_positive_3plane, PlaneOptions, PositiveThreePlane};
use crate::enumerate::{short_vectors_with, EnumOptions, ShortVectorSet};
use crate::error::{Error, Result};
use crate::group::characters::CHARACTER_TABLE_CAP;
use crate::group::isotypic::{decompose, Decomposition};
use crate::group::{invariant_sublattice, ActionGroup};
use crate::json::{int_matrix_to_json, int_vec_to_json};
use crate::lattice::{Lattice, Sublattice};
use crate::matrix::{QMatrix, ZMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Metric,
    Complex,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Metric => "metric",
            Mode::Complex => "complex",
        }
    }
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "metric" => Ok(Mode::Metric),
            "complex" => Ok(Mode::Complex),
            _ => Err(Error::Invalid(format!("unknown mode `{s}`"))),
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct ReportOptions {
    pub enumeration: EnumOptions,
    pub plane: PlaneOptions,
}

/// Finite subgroups of `SO(3)` up to conjugacy.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RotationType {
    Cyclic(usize),
    Dihedral(usize),
    Tetrahedral,
    Octahedral,
    Icosahedral,
}

impl RotationType {
    /// From the order and the largest element order.
    pub fn classify(order: usize, max_element_order: usize) -> Option<Self> {
        match (order, max_element_order) {
            (n, m) if n == m => Some(RotationType::Cyclic(n)),
            (n, m) if n == 2 * m => Some(RotationType::Dihedral(m)),
            (12, 3) => Some(RotationType::Tetrahedral),
            (24, 4) => Some(RotationType::Octahedral),
            (60, 5) => Some(RotationType::Icosahedral),
            _ => None,
        }
    }

    pub fn label(&self) -> String {
        match self {
            RotationType::Cyclic(n) => format!("cyclic C{n}"),
            RotationType::Dihedral(n) => format!("dihedral D{n}"),
            RotationType::Tetrahedral => "tetrahedral".into(),
            RotationType::Octahedral => "octahedral".into(),
            RotationType::Icosahedral => "icosahedral".into(),
        }
    }
}

/// Image of the group in `O(P)`.
#[derive(Clone, Debug)]
pub struct PlaneImage {
    pub order: usize,
    pub max_element_order: usize,
    pub orientation_preserving: bool,
    /// Type of the rotation subgroup.
    pub rotation_type: Option<RotationType>,
    pub rotation_order: usize,
}

#[derive(Clone, Debug)]
pub struct RealizationReport {
    pub group: ActionGroup,
    pub plane: PositiveThreePlane,
    /// Real irreducible types occurring in `P`.
    pub types_in_p: Vec<usize>,
    pub type_labels: Vec<String>,
    /// Primitive basis of `I_G ∩ L`.
    pub i_g: Sublattice,
    /// `I_G^perp ∩ L` in ambient coordinates.
    pub l_g_sublattice: Sublattice,
    /// The form restricted to `L_G`.
    pub l_g: Lattice,
    /// Vectors of norm `-2` in `L_G`, in `L_G` coordinates.
    pub minus_two_witnesses: ShortVectorSet,
    /// The same vectors in ambient coordinates.
    pub ambient_witnesses: Vec<Vec<BigInt>>,
    pub trivial_rep_in_l_g_perp: bool,
    pub metric_verdict: bool,
    pub complex_verdict: bool,
    pub plane_image: PlaneImage,
    /// Preservation of a component of the Teichmuller space is not visible
    /// on the lattice and is taken for granted.
    pub component_preservation_assumed: bool,
    pub reasons: Vec<String>,
}

impl RealizationReport {
    pub fn verdict(&self, mode: Mode) -> bool {
        match mode {
            Mode::Metric => self.metric_verdict,
            Mode::Complex => self.complex_verdict,
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "group": self.group.to_json(),
            "plane": self.plane.to_json(),
            "types_in_P": self.types_in_p,
            "type_labels": self.type_labels,
            "I_G_basis": int_matrix_to_json(self.i_g.basis()),
            "L_G_basis": int_matrix_to_json(self.l_g_sublattice.basis()),
            "L_G": self.l_g.invariants().to_json(),
            "L_G_gram": int_matrix_to_json(self.l_g.gram()),
            "minus_two_witnesses": self.ambient_witnesses.iter().map(|v| int_vec_to_json(v)).collect::<Vec<_>>(),
            "trivial_rep_in_L_G_perp": self.trivial_rep_in_l_g_perp,
            "metric_verdict": self.metric_verdict,
            "complex_verdict": self.complex_verdict,
            "plane_image": {
                "order": self.plane_image.order,
                "max_element_order": self.plane_image.max_element_order,
                "orientation_preserving": self.plane_image.orientation_preserving,
                "rotation_order": self.plane_image.rotation_order,
                "rotation_type": self.plane_image.rotation_type.as_ref().map(|t| t.label()),
            },
            "component_preservation_assumed": self.component_preservation_assumed,
            "reasons": self.reasons,
        })
    }
}

/// Restrictions of every group element to `P`, deduplicated.
fn plane_image(g: &ActionGroup, p: &PositiveThreePlane) -> PlaneImage {
    let large = g.order() > CHARACTER_TABLE_CAP;
    let idx: Vec<usize> = match (large, g.cyclic_generator()) {
        (true, Some(c)) => vec![c],
        _ => (0..g.order()).collect(),
    };
    let mut exact_seen: Vec<QMatrix> = Vec::new();
    let mut float_seen: Vec<DMatrix<f64>> = Vec::new();
    let mut dets = Vec::new();
    for i in idx {
        let r = p.restrict(&g.element(i));
        match r.exact {
            Some(m) => {
                if !exact_seen.contains(&m) {
                    dets.push(m.det() > BigRational::zero());
                    exact_seen.push(m);
                }
            }
            None => {
                if !float_seen.iter().any(|s| (s - &r.float).amax() < 1e-6) {
                    dets.push(r.float.determinant() > 0.0);
                    float_seen.push(r.float);
                }
            }
        }
    }
    let order_exact = |m: &QMatrix| {
        let mut k = 1;
        let mut cur = m.clone();
        while !cur.is_identity() {
            cur = cur.mul(m);
            k += 1;
        }
        k
    };
    let order_float = |m: &DMatrix<f64>| {
        let id = DMatrix::<f64>::identity(3, 3);
        let mut k = 1;
        let mut cur = m.clone();
        while (&cur - &id).amax() > 1e-6 && k < 100_000 {
            cur = &cur * m;
            k += 1;
        }
        k
    };
    let orders: Vec<usize> = if exact_seen.is_empty() {
        float_seen.iter().map(order_float).collect()
    } else {
        exact_seen.iter().map(order_exact).collect()
    };
    if large {
        // Cyclic image generated by the one restriction computed.
        let n = orders[0];
        return PlaneImage {
            order: n,
            max_element_order: n,
            orientation_preserving: dets[0],
            rotation_type: Some(RotationType::Cyclic(if dets[0] { n } else { n / 2 })),
            rotation_order: if dets[0] { n } else { n / 2 },
        };
    }
    let order = orders.len();
    let max_element_order = orders.iter().copied().max().unwrap_or(1);
    let rot: Vec<usize> = orders.iter().zip(&dets).filter(|(_, &d)| d).map(|(&o, _)| o).collect();
    let rotation_order = rot.len();
    let rot_max = rot.iter().copied().max().unwrap_or(1);
    PlaneImage {
        order,
        max_element_order,
        orientation_preserving: dets.iter().all(|&d| d),
        rotation_type: RotationType::classify(rotation_order, rot_max),
        rotation_order,
    }
}

/// Real types of `G` occurring in `P`.
fn types_in_plane(g: &ActionGroup, p: &PositiveThreePlane, dec: &Decomposition) -> Result<Vec<usize>> {
    if g.order() <= CHARACTER_TABLE_CAP {
        let t = g.character_table()?;
        let chi_p: Vec<(f64, f64)> = t.class_reps.iter().map(|&i| (p.restrict(&g.element(i)).trace(), 0.0)).collect();
        let mult = t.decompose(&chi_p);
        let found: Vec<usize> =
            dec.real_types.iter().filter(|r| r.characters.iter().any(|&c| mult[c] > 0.5)).map(|r| r.id).collect();
        return Ok(found);
    }
    // Large cyclic group: test each rotation type against the restriction of
    // the generator.
    let gen = g.cyclic_generator().ok_or(Error::OrderCapExceeded { cap: CHARACTER_TABLE_CAP })?;
    let a = p.restrict(&g.element(gen)).float;
    let id = DMatrix::<f64>::identity(3, 3);
    let mut found = Vec::new();
    for r in &dec.real_types {
        let (num, k) = parse_rotation_label(&r.label);
        let test = match k {
            1 => &a - &id,
            2 => &a + &id,
            _ => {
                let c = (2.0 * std::f64::consts::PI * num as f64 / k as f64).cos();
                &a * &a - &a * (2.0 * c) + &id
            }
        };
        let sv = test.svd(false, false).singular_values;
        if sv.iter().any(|&s| s < 1e-8) {
            found.push(r.id);
        }
    }
    Ok(found)
}

fn parse_rotation_label(label: &str) -> (u64, u64) {
    match label {
        "trivial" => (0, 1),
        "sign" => (1, 2),
        _ => {
            let frac = label.trim_start_matches("rot_");
            let mut it = frac.split('/').map(|x| x.parse::<u64>().unwrap_or(1));
            (it.next().unwrap_or(1), it.next().unwrap_or(1))
        }
    }
}

/// `L_G = I_G^perp ∩ L`, where `I_G` is spanned by the isotypic parts of the
/// types occurring in `P`, and the verdicts derived from it.
pub fn realization_invariant(
    g: &ActionGroup,
    p: &PositiveThreePlane,
    opts: &ReportOptions,
) -> Result<RealizationReport> {
    if p.lattice() != g.lattice() {
        return Err(Error::MixedLattices);
    }
    let gens: Vec<ZMatrix> = g.generators().iter().map(|s| s.matrix().clone()).collect();
    if !p.is_invariant(&gens, opts.plane.tolerance.max(1e-10)) {
        return Err(Error::PlaneNotInvariant);
    }
    let l = g.lattice();
    let n = l.rank();
    let dec = decompose(g)?;
    let types_in_p = types_in_plane(g, p, &dec)?;
    let rational: BTreeSet<usize> = types_in_p.iter().map(|&t| dec.real_types[t].rational).collect();
    let mut stacked = ZMatrix::empty(n);
    for c in dec.components.iter().filter(|c| rational.contains(&c.id)) {
        stacked = stacked.vstack(&c.basis);
    }
    let i_g = Sublattice::new(l, stacked)?.saturate();
    let l_g_sub = i_g.orthogonal_complement();
    let l_g = l_g_sub.restrict_form();
    let witnesses = if l_g.rank() == 0 {
        ShortVectorSet { target_norm: -2, collapsed: opts.enumeration.collapse_antipodes, vectors: Vec::new() }
    } else {
        short_vectors_with(&l_g, -2, &opts.enumeration)?
    };
    let ambient_witnesses: Vec<Vec<BigInt>> = witnesses.vectors.iter().map(|v| l_g_sub.to_ambient(v)).collect();

    // dim(L^G ∩ I_G) = dim L^G + dim I_G - dim(L^G + I_G)
    let fixed = invariant_sublattice(g);
    let sum_rank = fixed.basis().vstack(i_g.basis()).rank();
    let trivial = fixed.rank() + i_g.rank() > sum_rank;

    let metric = witnesses.vectors.is_empty();
    let complex = metric && trivial;
    let type_labels = types_in_p.iter().map(|&t| dec.real_types[t].label.clone()).collect();
    let mut reasons = Vec::new();
    if metric {
        reasons.push(format!("L_G has rank {} and contains no (-2)-vectors", l_g.rank()));
    } else {
        reasons.push(format!("L_G contains {} vectors of norm -2", witnesses.vectors.len()));
    }
    if trivial {
        reasons.push("the trivial representation occurs in L_G^perp".into());
    } else {
        reasons.push("the trivial representation does not occur in L_G^perp".into());
    }
    let plane_image = plane_image(g, p);
    Ok(RealizationReport {
        group: g.clone(),
        plane: p.clone(),
        types_in_p,
        type_labels,
        i_g,
        l_g_sublattice: l_g_sub,
        l_g,
        minus_two_witnesses: witnesses,
        ambient_witnesses,
        trivial_rep_in_l_g_perp: trivial,
        metric_verdict: metric,
        complex_verdict: complex,
        plane_image,
        component_preservation_assumed: true,
        reasons,
    })
}

/// Plane search followed by [`realization_invariant`].
pub fn realize_k3(g: &ActionGroup, opts: &ReportOptions) -> Result<RealizationReport> {
    let p = find_invariant_positive_3plane(g, &opts.plane)?;
    realization_invariant(g, &p, opts)
}
