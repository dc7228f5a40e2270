//! Parsers for the comma-separated value lists the command line accepts.
//! All of them reject non-finite values and report failures as data, so
//! arbitrary input can never panic the caller.

use nalgebra::{Matrix3, Vector3};

use crate::error::{Error, Result};

/// Comma-separated finite reals; surrounding whitespace per entry is
/// tolerated, empty entries are not.
pub fn parse_real_list(s: &str) -> Result<Vec<f64>> {
    let trimmed = s.trim();
    if trimmed.is_empty() {
        return Err(Error::Parse("empty value list".into()));
    }
    trimmed
        .split(',')
        .map(|entry| {
            let entry = entry.trim();
            if entry.is_empty() {
                return Err(Error::Parse("empty entry in value list".into()));
            }
            let x: f64 = entry
                .parse()
                .map_err(|_| Error::Parse(format!("`{entry}` is not a real number")))?;
            if !x.is_finite() {
                return Err(Error::Parse(format!("`{entry}` is not finite")));
            }
            Ok(x)
        })
        .collect()
}

/// Exactly three comma-separated reals.
pub fn parse_vec3(s: &str) -> Result<Vector3<f64>> {
    let v = parse_real_list(s)?;
    if v.len() != 3 {
        return Err(Error::Parse(format!(
            "expected 3 comma-separated values, got {}",
            v.len()
        )));
    }
    Ok(Vector3::new(v[0], v[1], v[2]))
}

/// A 3x3 matrix as either 3 values (a diagonal) or 9 values (row-major).
pub fn parse_mat3(s: &str) -> Result<Matrix3<f64>> {
    let v = parse_real_list(s)?;
    match v.len() {
        3 => Ok(Matrix3::from_diagonal(&Vector3::new(v[0], v[1], v[2]))),
        9 => Ok(Matrix3::from_row_slice(&v)),
        n => Err(Error::Parse(format!(
            "expected 3 (diagonal) or 9 (row-major) values, got {n}"
        ))),
    }
}

/// Strictly decreasing positive step sizes for a convergence study.
pub fn parse_h_list(s: &str) -> Result<Vec<f64>> {
    let v = parse_real_list(s)?;
    if v.iter().any(|h| *h <= 0.0) {
        return Err(Error::Parse("step sizes must be positive".into()));
    }
    if v.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::Parse(
            "step sizes must be strictly decreasing".into(),
        ));
    }
    Ok(v)
}

/// The elastic moduli pair `lambda,mu`.
pub fn parse_lame(s: &str) -> Result<(f64, f64)> {
    let v = parse_real_list(s)?;
    if v.len() != 2 {
        return Err(Error::Parse(format!(
            "expected `lambda,mu`, got {} values",
            v.len()
        )));
    }
    Ok((v[0], v[1]))
}
