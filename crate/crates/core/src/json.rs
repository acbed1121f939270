//! JSON encoding of exact numbers.
//!
//! Integers are written as JSON numbers when `|x| < 2^53` and as decimal
//! strings otherwise. Rationals are written as integers when integral and as
//! `"p/q"` strings otherwise. Readers accept both spellings.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::matrix::{QMatrix, ZMatrix};

const SAFE: i64 = 1 << 53;

pub fn int_to_json(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) if v.abs() < SAFE => Value::from(v),
        _ => Value::String(x.to_string()),
    }
}

pub fn rat_to_json(x: &BigRational) -> Value {
    if x.is_integer() {
        int_to_json(&x.to_integer())
    } else {
        Value::String(format!("{}/{}", x.numer(), x.denom()))
    }
}

/// Parse a JSON value into an exact rational. Floats are accepted only when
/// they are exactly representable as a short decimal.
pub fn json_to_rat(v: &Value) -> Result<BigRational> {
    match v {
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                return Ok(BigRational::from_integer(BigInt::from(i)));
            }
            if let Some(u) = n.as_u64() {
                return Ok(BigRational::from_integer(BigInt::from(u)));
            }
            parse_decimal(&n.to_string())
        }
        Value::String(s) => parse_rational_str(s),
        other => Err(Error::Invalid(format!("expected a number, got {other}"))),
    }
}

pub fn parse_rational_str(s: &str) -> Result<BigRational> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| Error::Invalid(format!("bad rational `{s}`")))?;
        let q: BigInt = q.trim().parse().map_err(|_| Error::Invalid(format!("bad rational `{s}`")))?;
        if q.is_zero() {
            return Err(Error::Invalid(format!("zero denominator in `{s}`")));
        }
        return Ok(BigRational::new(p, q));
    }
    if s.contains('.') || s.contains('e') || s.contains('E') {
        return parse_decimal(s);
    }
    let p: BigInt = s.parse().map_err(|_| Error::Invalid(format!("bad integer `{s}`")))?;
    Ok(BigRational::from_integer(p))
}

fn parse_decimal(s: &str) -> Result<BigRational> {
    let bad = || Error::Invalid(format!("bad number `{s}`"));
    let (mant, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let neg = mant.starts_with('-');
    let mant = mant.trim_start_matches(['-', '+']);
    let (ip, fp) = mant.split_once('.').unwrap_or((mant, ""));
    let digits: BigInt = format!("{ip}{fp}").parse().map_err(|_| bad())?;
    let scale = exp - fp.len() as i32;
    let ten = BigInt::from(10);
    let mut r = BigRational::from_integer(digits);
    if scale >= 0 {
        r *= BigRational::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        r /= BigRational::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Ok(if neg { -r } else { r })
}

pub fn int_matrix_to_json(m: &ZMatrix) -> Value {
    Value::Array((0..m.rows()).map(|r| Value::Array(m.row(r).iter().map(int_to_json).collect())).collect())
}

pub fn rat_matrix_to_json(m: &QMatrix) -> Value {
    Value::Array((0..m.rows()).map(|r| Value::Array(m.row(r).iter().map(rat_to_json).collect())).collect())
}

pub fn int_vec_to_json(v: &[BigInt]) -> Value {
    Value::Array(v.iter().map(int_to_json).collect())
}

/// Parse a JSON array of arrays into a rational matrix.
pub fn json_to_rat_matrix(v: &Value) -> Result<QMatrix> {
    let rows = v.as_array().ok_or_else(|| Error::Invalid("matrix must be an array of rows".into()))?;
    let mut out = Vec::with_capacity(rows.len());
    for row in rows {
        let row = row.as_array().ok_or_else(|| Error::Invalid("matrix row must be an array".into()))?;
        out.push(row.iter().map(json_to_rat).collect::<Result<Vec<_>>>()?);
    }
    QMatrix::from_rows(out)
}

/// Parse an integer matrix; non-integral entries raise `NonIntegral`.
pub fn json_to_int_matrix(v: &Value) -> Result<ZMatrix> {
    let q = json_to_rat_matrix(v)?;
    for r in 0..q.rows() {
        for c in 0..q.cols() {
            if !q[(r, c)].is_integer() {
                return Err(Error::NonIntegral { row: r, col: c, value: q[(r, c)].to_string() });
            }
        }
    }
    Ok(q.map(|x| x.to_integer()))
}

pub fn json_to_int_vec(v: &Value) -> Result<Vec<BigInt>> {
    let arr = v.as_array().ok_or_else(|| Error::Invalid("vector must be an array".into()))?;
    arr.iter()
        .enumerate()
        .map(|(i, x)| {
            let r = json_to_rat(x)?;
            if r.is_integer() {
                Ok(r.to_integer())
            } else {
                Err(Error::NonIntegral { row: 0, col: i, value: r.to_string() })
            }
        })
        .collect()
}
