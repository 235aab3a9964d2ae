//! Data-adaptive weight construction: per-group weights from a local activity
//! measure and per-coefficient l1 weights from the correlation of the
//! dictionary with the highpass signal.

use crate::error::{CscError, Result};
use crate::groups::GroupOperator;
use crate::signal::{apply_dictionary_adjoint, CoefficientMaps, Dictionary, Image};
use ndarray::{Array2, Array3, Axis};

/// Which activity measure drives the group weights.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ActivitySource {
    /// Unit-kernel window sums of the squared analysis maps (D^T s)_m^2,
    /// accumulated over filters.
    Analysis,
    /// Unit-kernel window sums of the squared signal itself.
    ImageEnergy,
}

/// Group and coefficient weights for one denoising run.
#[derive(Debug, Clone)]
pub struct WeightMaps {
    pub group_weights: Option<Array2<f64>>,
    pub l1_weights: Option<Array3<f64>>,
    pub eps_rel: f64,
}

/// Default relative stabilizer added to the activity/correlation measure
/// before inversion.
pub const DEFAULT_EPS_REL: f64 = 1e-5;

/// Default stabilizer for the correlation-based l1 weights. Per-coefficient
/// correlations are noise-dominated (no window averaging), so a much larger
/// floor than `DEFAULT_EPS_REL` keeps the weights from un-penalizing
/// isolated noise responses.
pub const DEFAULT_L1_EPS_REL: f64 = 0.1;

fn check_eps(eps_rel: f64) -> Result<()> {
    if !(eps_rel > 0.0) || !eps_rel.is_finite() {
        return Err(CscError::InvalidParameter(format!(
            "eps_rel must be finite and > 0, got {eps_rel}"
        )));
    }
    Ok(())
}

/// Invert an activity measure into weights: w = 1 / (a + eps_rel * max(a)),
/// then rescale to unit mean. An identically-zero measure yields uniform
/// weights of 1.
fn invert_normalized<D: ndarray::Dimension>(
    a: ndarray::Array<f64, D>,
    eps_rel: f64,
) -> ndarray::Array<f64, D> {
    let max = a.iter().fold(0.0_f64, |acc, &v| acc.max(v));
    if max <= 0.0 {
        return a.mapv(|_| 1.0);
    }
    let eps = eps_rel * max;
    let mut w = a.mapv(|v| 1.0 / (v + eps));
    let mean = w.sum() / w.len() as f64;
    w.mapv_inplace(|v| v / mean);
    w
}

/// Per-group weights: the inverse of a windowed activity measure, so groups
/// overlapping high-energy regions are penalized less. The window matches the
/// group support of `g`; `d` supplies the analysis maps for the
/// `Analysis` source.
pub fn group_weights_from_activity(
    d: &Dictionary,
    g: &GroupOperator,
    s_highpass: &Image,
    source: ActivitySource,
    eps_rel: f64,
) -> Result<Array2<f64>> {
    check_eps(eps_rel)?;
    let h = s_highpass.height();
    let w = s_highpass.width();
    if (g.height(), g.width()) != (h, w) {
        return Err(CscError::DimensionMismatch {
            context: "group_weights_from_activity",
            left: format!("{:?}", (g.height(), g.width())),
            right: format!("{:?}", (h, w)),
        });
    }
    let activity = match source {
        ActivitySource::Analysis => {
            let sd = d.spectra(h, w)?;
            let maps = apply_dictionary_adjoint(&sd, s_highpass)?;
            let sq = CoefficientMaps::new(maps.maps().mapv(|v| v * v))?;
            // window sums over every filter map at once; the unit surrogate
            // ignores any inner-kernel weighting of g on purpose, the
            // activity measure is geometric
            let unit = GroupOperator::unit(g.num_filters(), g.kernel_h(), g.kernel_w(), h, w)?;
            unit.group_sums(&sq, false)?
        }
        ActivitySource::ImageEnergy => {
            let sq = s_highpass.data().mapv(|v| v * v);
            let maps = CoefficientMaps::new(sq.insert_axis(Axis(0)))?;
            let unit = GroupOperator::unit(1, g.kernel_h(), g.kernel_w(), h, w)?;
            unit.group_sums(&maps, false)?
        }
    };
    Ok(invert_normalized(activity, eps_rel))
}

/// Per-coefficient l1 weights: the inverse of the squared analysis
/// coefficients (D^T s)^2, stabilized and normalized to unit mean.
pub fn l1_weights_from_correlation(
    d: &Dictionary,
    s_highpass: &Image,
    eps_rel: f64,
) -> Result<Array3<f64>> {
    check_eps(eps_rel)?;
    let sd = d.spectra(s_highpass.height(), s_highpass.width())?;
    let corr = apply_dictionary_adjoint(&sd, s_highpass)?;
    let sq = corr.maps().mapv(|v| v * v);
    Ok(invert_normalized(sq, eps_rel))
}
