//! Per-frequency Sherman-Morrison solvers for the identity-plus-low-rank
//! systems produced by diagonalizing the convolutional operators in the DFT
//! domain. Each spatial frequency contributes an M x M system of the form
//! sigma*I + c_a * a^H a + c_b * b^H b with row vectors a, b.

use crate::error::{CscError, Result};
use num_complex::Complex64;

fn check_sigma(sigma: f64) -> Result<()> {
    if !(sigma > 0.0) {
        return Err(CscError::InvalidParameter(format!(
            "sherman-morrison solve requires sigma > 0, got {sigma}"
        )));
    }
    Ok(())
}

/// Solve (sigma*I + a^H a) x = rhs via the Sherman-Morrison identity:
/// x = (rhs - a^H (a . rhs) / (sigma + a a^H)) / sigma.
pub fn solve_rank1(a_hat: &[Complex64], sigma: f64, rhs: &[Complex64]) -> Result<Vec<Complex64>> {
    check_sigma(sigma)?;
    let a_rhs: Complex64 = a_hat.iter().zip(rhs).map(|(&a, &r)| a * r).sum();
    let a_norm: f64 = a_hat.iter().map(|v| v.norm_sqr()).sum();
    let denom = sigma + a_norm;
    if denom.abs() < 1e-300 {
        return Err(CscError::IllConditioned(format!(
            "rank-1 denominator {denom} below guard threshold"
        )));
    }
    let scale = a_rhs / denom;
    Ok(rhs
        .iter()
        .zip(a_hat)
        .map(|(&r, &a)| (r - a.conj() * scale) / sigma)
        .collect())
}

/// Solve (sigma*I + c_a a^H a + c_b b^H b) x = rhs by two nested
/// Sherman-Morrison applications, eliminating the a term first.
pub fn solve_rank2(
    a_hat: &[Complex64],
    b_hat: &[Complex64],
    sigma: f64,
    c_a: f64,
    c_b: f64,
    rhs: &[Complex64],
) -> Result<Vec<Complex64>> {
    check_sigma(sigma)?;
    if c_a < 0.0 || c_b < 0.0 {
        return Err(CscError::InvalidParameter(format!(
            "rank-term coefficients must be >= 0, got c_a={c_a}, c_b={c_b}"
        )));
    }
    // A1^{-1} r for A1 = sigma*I + c_a a^H a, closed form.
    let a_norm: f64 = a_hat.iter().map(|v| v.norm_sqr()).sum();
    let denom_a = sigma + c_a * a_norm;
    if denom_a.abs() < 1e-300 {
        return Err(CscError::IllConditioned(format!(
            "rank-2 inner denominator {denom_a} below guard threshold"
        )));
    }
    let inv_a1 = |r: &[Complex64]| -> Vec<Complex64> {
        let ar = r
            .iter()
            .zip(a_hat)
            .map(|(&x, &a)| a * x)
            .sum::<Complex64>();
        let scale = ar * (c_a / denom_a);
        r.iter()
            .zip(a_hat)
            .map(|(&x, &a)| (x - a.conj() * scale) / sigma)
            .collect()
    };
    if c_b == 0.0 {
        return Ok(inv_a1(rhs));
    }
    // Second elimination: A = A1 + c_b b^H b,
    // x = A1^{-1} rhs - c_b A1^{-1} b^H (b . A1^{-1} rhs) / (1 + c_b b A1^{-1} b^H).
    let w = inv_a1(rhs);
    let bh: Vec<Complex64> = b_hat.iter().map(|v| v.conj()).collect();
    let z = inv_a1(&bh);
    let b_w = b_hat.iter().zip(&w).map(|(&b, &x)| b * x).sum::<Complex64>();
    let b_z = b_hat.iter().zip(&z).map(|(&b, &x)| b * x).sum::<Complex64>();
    let denom_b = Complex64::new(1.0, 0.0) + c_b * b_z;
    if denom_b.norm() < 1e-300 {
        return Err(CscError::IllConditioned(format!(
            "rank-2 outer denominator {denom_b} below guard threshold"
        )));
    }
    let scale = b_w * (c_b / denom_b);
    Ok(w.iter().zip(&z).map(|(&wi, &zi)| wi - zi * scale).collect())
}

/// Residual ||(sigma*I + c_a a^H a + c_b b^H b) x - rhs|| / ||rhs||; used by
/// tests and the solvers' self-checks.
pub fn relative_residual(
    a_hat: &[Complex64],
    b_hat: Option<&[Complex64]>,
    sigma: f64,
    c_a: f64,
    c_b: f64,
    x: &[Complex64],
    rhs: &[Complex64],
) -> f64 {
    let ax = a_hat.iter().zip(x).map(|(&a, &v)| a * v).sum::<Complex64>();
    let bx = b_hat
        .map(|b| b.iter().zip(x).map(|(&b, &v)| b * v).sum::<Complex64>())
        .unwrap_or_default();
    let mut num = 0.0;
    let mut den = 0.0;
    for i in 0..x.len() {
        let mut fx = sigma * x[i] + c_a * a_hat[i].conj() * ax;
        if let Some(b) = b_hat {
            fx += c_b * b[i].conj() * bx;
        }
        num += (fx - rhs[i]).norm_sqr();
        den += rhs[i].norm_sqr();
    }
    if den == 0.0 {
        num.sqrt()
    } else {
        (num / den).sqrt()
    }
}
