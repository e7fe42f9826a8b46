//! Evaluation of linearized polynomials over `F_{q^m}`, the codeword
//! primitive behind maximum rank distance codes.

use crate::error::{domain, Result};
use crate::field::FieldContext;
use crate::matrix::Matrix;

/// Evaluates the q-linearized polynomial `sum_i c_i x^{q^i}` at the given
/// points of `F_{q^m}` and returns the matrix of base-field coordinate rows
/// (one row per evaluation point, `m` columns).
///
/// The points must be linearly independent over the base field `F_q`. The
/// full code over all coefficient vectors of length `l` has `q^{m*l}`
/// codewords and minimum rank distance `m - l + 1` when evaluated at `m`
/// independent points.
pub fn gabidulin_codeword(
    ext: &FieldContext,
    points: &[u32],
    coeffs: &[u32],
) -> Result<Matrix> {
    let base = ext
        .base()
        .ok_or_else(|| domain("gabidulin evaluation needs an extension field"))?;
    let m = ext.degree_over_base() as usize;
    if points.is_empty() || points.len() > m {
        return Err(domain(format!(
            "need between 1 and {m} evaluation points, got {}",
            points.len()
        )));
    }
    if coeffs.is_empty() {
        return Err(domain("need at least one coefficient"));
    }
    // independence over the base field
    let coord_rows: Vec<Vec<u32>> = points.iter().map(|&p| ext.coordinates(p)).collect();
    let coord_mat = Matrix::from_rows(&coord_rows, m)?;
    if coord_mat.rank(base) != points.len() {
        return Err(domain("evaluation points are linearly dependent over the base field"));
    }
    let q = ext.base_order() as u64;
    let mut rows = Vec::with_capacity(points.len());
    for &p in points {
        let mut acc = 0u32;
        let mut power = p; // p^{q^i}
        for &c in coeffs {
            acc = ext.add(acc, ext.mul(c, power));
            power = ext.pow(power, q);
        }
        rows.push(ext.coordinates(acc));
    }
    Ok(Matrix::from_rows(&rows, m)?)
}

/// Standard basis of `F_{q^m}` over `F_q` in the polynomial representation:
/// `1, x, x^2, ...` truncated to `n` elements.
pub fn polynomial_basis(ext: &FieldContext, n: usize) -> Result<Vec<u32>> {
    let m = ext.degree_over_base() as usize;
    if n > m {
        return Err(domain(format!("basis of length {n} requested from degree {m}")));
    }
    let mut out = Vec::with_capacity(n);
    for j in 0..n {
        let mut coords = vec![0u32; m];
        coords[j] = 1;
        out.push(ext.from_coordinates(&coords)?);
    }
    Ok(out)
}
