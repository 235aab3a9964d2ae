//! Proximal operators used by the ADMM y-steps: weighted soft thresholding,
//! non-negativity projection, simplex projection, and the prox of the max
//! function and the l2 norm (both with optional positive weights).

use crate::error::{CscError, Result};

fn check_tau(tau: f64) -> Result<()> {
    if !(tau >= 0.0) {
        return Err(CscError::InvalidParameter(format!(
            "prox shrinkage parameter must be >= 0, got {tau}"
        )));
    }
    Ok(())
}

fn check_weights(w: &[f64], n: usize, strict: bool) -> Result<()> {
    if w.len() != n {
        return Err(CscError::DimensionMismatch {
            context: "prox weights",
            left: n.to_string(),
            right: w.len().to_string(),
        });
    }
    for &wi in w {
        if !wi.is_finite() || wi < 0.0 || (strict && wi == 0.0) {
            return Err(CscError::InvalidParameter(format!(
                "prox weight {wi} out of range"
            )));
        }
    }
    Ok(())
}

/// Elementwise soft threshold: sign(v) * max(|v| - tau*w, 0).
pub fn prox_weighted_l1(v: &[f64], tau: f64, w: Option<&[f64]>) -> Result<Vec<f64>> {
    check_tau(tau)?;
    if let Some(w) = w {
        check_weights(w, v.len(), false)?;
    }
    Ok(v.iter()
        .enumerate()
        .map(|(i, &vi)| {
            let t = tau * w.map_or(1.0, |w| w[i]);
            vi.signum() * (vi.abs() - t).max(0.0)
        })
        .collect())
}

/// Elementwise projection onto the non-negative orthant.
pub fn project_nonneg(v: &[f64]) -> Vec<f64> {
    v.iter().map(|&x| x.max(0.0)).collect()
}

/// Euclidean projection onto {z >= 0, sum z = radius} by sort-and-threshold.
pub fn project_simplex(v: &[f64], radius: f64) -> Result<Vec<f64>> {
    if !(radius > 0.0) {
        return Err(CscError::InvalidParameter(format!(
            "simplex radius must be > 0, got {radius}"
        )));
    }
    let mut sorted: Vec<f64> = v.to_vec();
    sorted.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let mut cumsum = 0.0;
    let mut theta = 0.0;
    for (k, &u) in sorted.iter().enumerate() {
        cumsum += u;
        let cand = (cumsum - radius) / (k + 1) as f64;
        if u - cand > 0.0 {
            theta = cand;
        } else {
            break;
        }
    }
    Ok(v.iter().map(|&x| (x - theta).max(0.0)).collect())
}

/// Prox of tau * max_i(w_i x_i).
///
/// Unweighted: Moreau decomposition x = v - tau * proj_simplex(v/tau, 1).
/// Weighted: exact sorted-threshold search on the piecewise-linear
/// stationarity condition sum_{i active} (v_i/w_i - t/w_i^2) = tau, then
/// x_i = min(v_i, t/w_i). Ties in the sort are broken by index order.
pub fn prox_max(v: &[f64], tau: f64, w: Option<&[f64]>) -> Result<Vec<f64>> {
    check_tau(tau)?;
    if let Some(w) = w {
        check_weights(w, v.len(), true)?;
    }
    if tau == 0.0 || v.is_empty() {
        return Ok(v.to_vec());
    }
    match w {
        None => {
            let scaled: Vec<f64> = v.iter().map(|&x| x / tau).collect();
            let p = project_simplex(&scaled, 1.0)?;
            Ok(v.iter().zip(&p).map(|(&x, &pi)| x - tau * pi).collect())
        }
        Some(w) => {
            // breakpoints at t = w_i v_i, descending
            let mut order: Vec<usize> = (0..v.len()).collect();
            order.sort_by(|&i, &j| (w[j] * v[j]).partial_cmp(&(w[i] * v[i])).unwrap().then(i.cmp(&j)));
            let mut s1 = 0.0; // sum v_i / w_i over the active set
            let mut s2 = 0.0; // sum 1 / w_i^2 over the active set
            let mut t = f64::NAN;
            for (k, &i) in order.iter().enumerate() {
                s1 += v[i] / w[i];
                s2 += 1.0 / (w[i] * w[i]);
                let cand = (s1 - tau) / s2;
                let lower = order
                    .get(k + 1)
                    .map(|&j| w[j] * v[j])
                    .unwrap_or(f64::NEG_INFINITY);
                if cand >= lower {
                    t = cand;
                    break;
                }
            }
            debug_assert!(t.is_finite());
            Ok(v.iter()
                .enumerate()
                .map(|(i, &vi)| vi.min(t / w[i]))
                .collect())
        }
    }
}

/// Prox of tau * l2 norm (unweighted) or tau * sqrt(sum w_i x_i^2).
///
/// Unweighted: block shrinkage (1 - tau/||v||)_+ v. Weighted: the shrunk
/// point satisfies x_i = v_i / (1 + tau*w_i/r) with r = sqrt(sum w_i x_i^2);
/// r is found from sum_i w_i v_i^2 / (r + tau*w_i)^2 = 1 by bisection plus a
/// Newton polish to |dr| <= 1e-12. Returns 0 when v lies inside the
/// subdifferential ball at the origin (sum v_i^2/w_i <= tau^2).
pub fn prox_l2(v: &[f64], tau: f64, w: Option<&[f64]>) -> Result<Vec<f64>> {
    check_tau(tau)?;
    if let Some(w) = w {
        check_weights(w, v.len(), true)?;
    }
    if tau == 0.0 || v.is_empty() {
        return Ok(v.to_vec());
    }
    match w {
        None => {
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm <= tau {
                Ok(vec![0.0; v.len()])
            } else {
                let scale = 1.0 - tau / norm;
                Ok(v.iter().map(|&x| scale * x).collect())
            }
        }
        Some(w) => {
            let dual_norm_sq: f64 = v.iter().zip(w).map(|(&vi, &wi)| vi * vi / wi).sum();
            if dual_norm_sq <= tau * tau {
                return Ok(vec![0.0; v.len()]);
            }
            // g(r) = sum w_i v_i^2 / (r + tau w_i)^2 - 1 is strictly decreasing,
            // positive at 0 (zero case excluded above), negative at
            // sqrt(sum w_i v_i^2).
            let g = |r: f64| -> (f64, f64) {
                let mut val = -1.0;
                let mut deriv = 0.0;
                for (&vi, &wi) in v.iter().zip(w) {
                    let d = r + tau * wi;
                    val += wi * vi * vi / (d * d);
                    deriv += -2.0 * wi * vi * vi / (d * d * d);
                }
                (val, deriv)
            };
            let mut lo = 0.0;
            let mut hi = v.iter().zip(w).map(|(&vi, &wi)| wi * vi * vi).sum::<f64>().sqrt();
            let mut r = 0.5 * hi;
            for _ in 0..200 {
                let (val, deriv) = g(r);
                if val > 0.0 {
                    lo = r;
                } else {
                    hi = r;
                }
                let newton = r - val / deriv;
                let next = if newton > lo && newton < hi {
                    newton
                } else {
                    0.5 * (lo + hi)
                };
                if (next - r).abs() <= 1e-12 * r.max(1.0) {
                    r = next;
                    break;
                }
                r = next;
            }
            Ok(v.iter()
                .zip(w)
                .map(|(&vi, &wi)| vi / (1.0 + tau * wi / r))
                .collect())
        }
    }
}
