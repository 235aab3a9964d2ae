//! The convolutional group-sum operator G. The group anchored at spatial
//! location p collects, across all filters, the coefficients at locations
//! p + delta for delta in the filter support (circularly), so the forward map
//! is a circular cross-correlation of each map with a per-filter kernel
//! followed by summation over the filter index. Unit kernels give the plain
//! group l1 sums; weighted kernels realize the stripe-normalized inner norm.

use crate::error::{dim_mismatch, CscError, Result};
use crate::fft::{pad_kernel, Fft2};
use crate::signal::{CoefficientMaps, Dictionary};
use ndarray::{Array2, Array3, Axis};
use num_complex::Complex64;

#[derive(Clone)]
pub struct GroupOperator {
    /// M x kernel_h x kernel_w nonnegative kernels.
    kernels: Array3<f64>,
    /// Cached kernel spectra at image size.
    spectra: Array3<Complex64>,
    height: usize,
    width: usize,
    fft: Fft2,
}

impl GroupOperator {
    /// Unit kernels of the given support for every filter.
    pub fn unit(
        num_filters: usize,
        kernel_h: usize,
        kernel_w: usize,
        height: usize,
        width: usize,
    ) -> Result<Self> {
        Self::from_kernels(Array3::ones((num_filters, kernel_h, kernel_w)), height, width)
    }

    /// Build from explicit nonnegative kernels.
    pub fn from_kernels(kernels: Array3<f64>, height: usize, width: usize) -> Result<Self> {
        if kernels.iter().any(|&v| !v.is_finite() || v < 0.0) {
            return Err(CscError::InvalidParameter(
                "group kernels must be finite and >= 0".into(),
            ));
        }
        let (m, kh, kw) = kernels.dim();
        if kh > height || kw > width || m == 0 {
            return dim_mismatch("group kernels", (m, kh, kw), (height, width));
        }
        let fft = Fft2::new(height, width);
        let mut spectra = Array3::zeros((m, height, width));
        for i in 0..m {
            let padded = pad_kernel(&kernels.index_axis(Axis(0), i).to_owned(), height, width);
            spectra
                .index_axis_mut(Axis(0), i)
                .assign(&fft.forward(&padded));
        }
        Ok(Self {
            kernels,
            spectra,
            height,
            width,
            fft,
        })
    }

    pub fn num_filters(&self) -> usize {
        self.kernels.len_of(Axis(0))
    }

    pub fn kernel_h(&self) -> usize {
        self.kernels.len_of(Axis(1))
    }

    pub fn kernel_w(&self) -> usize {
        self.kernels.len_of(Axis(2))
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn kernels(&self) -> &Array3<f64> {
        &self.kernels
    }

    /// Per-frequency row vector of the forward operator: entry m at frequency
    /// (r, c) is conj(khat_m(r, c)).
    pub fn frequency_row(&self, r: usize, c: usize, out: &mut [Complex64]) {
        for m in 0..self.num_filters() {
            out[m] = self.spectra[[m, r, c]].conj();
        }
    }

    fn check_maps(&self, x: &CoefficientMaps, context: &'static str) -> Result<()> {
        if x.num_filters() != self.num_filters()
            || x.height() != self.height
            || x.width() != self.width
        {
            return dim_mismatch(
                context,
                (self.num_filters(), self.height, self.width),
                (x.num_filters(), x.height(), x.width()),
            );
        }
        Ok(())
    }

    /// All group sums at once: out(p) = sum_m sum_delta k_m(delta) x_m(p+delta),
    /// circular; with `absolute` the entries pass through |.| first.
    pub fn group_sums(&self, x: &CoefficientMaps, absolute: bool) -> Result<Array2<f64>> {
        self.check_maps(x, "group_sums")?;
        let mut acc: Array2<Complex64> = Array2::zeros((self.height, self.width));
        for m in 0..self.num_filters() {
            let xm = x.maps().index_axis(Axis(0), m);
            let op = if absolute {
                xm.mapv(f64::abs)
            } else {
                xm.to_owned()
            };
            let xh = self.fft.forward(&op);
            let km = self.spectra.index_axis(Axis(0), m);
            ndarray::Zip::from(&mut acc)
                .and(&xh)
                .and(&km)
                .for_each(|a, &x, &k| *a += k.conj() * x);
        }
        Ok(self.fft.inverse_real(&acc))
    }

    /// Adjoint of `group_sums` (without the absolute value): stamps v back
    /// into each map through the kernel.
    pub fn group_sums_adjoint(&self, v: &Array2<f64>) -> Result<CoefficientMaps> {
        if v.dim() != (self.height, self.width) {
            return dim_mismatch("group_sums_adjoint", (self.height, self.width), v.dim());
        }
        let vh = self.fft.forward(v);
        let m = self.num_filters();
        let mut maps = Array3::zeros((m, self.height, self.width));
        for i in 0..m {
            let km = self.spectra.index_axis(Axis(0), i);
            let prod = ndarray::Zip::from(&vh).and(&km).map_collect(|&v, &k| k * v);
            maps.index_axis_mut(Axis(0), i)
                .assign(&self.fft.inverse_real(&prod));
        }
        CoefficientMaps::new(maps)
    }

    /// l1,inf group norm: max_p (w_p *) group l1 sum at p.
    pub fn norm_l1inf(
        &self,
        x: &CoefficientMaps,
        group_w: Option<&Array2<f64>>,
    ) -> Result<f64> {
        let sums = self.group_sums(x, true)?;
        check_group_weights(group_w, (self.height, self.width))?;
        Ok(match group_w {
            None => sums.iter().fold(0.0_f64, |a, &b| a.max(b)),
            Some(w) => sums
                .iter()
                .zip(w.iter())
                .fold(0.0_f64, |a, (&s, &wi)| a.max(wi * s)),
        })
    }

    /// l1,2 group norm: sqrt(sum_p (w_p) * (group l1 sum at p)^2).
    pub fn norm_l12(&self, x: &CoefficientMaps, group_w: Option<&Array2<f64>>) -> Result<f64> {
        let sums = self.group_sums(x, true)?;
        check_group_weights(group_w, (self.height, self.width))?;
        Ok(match group_w {
            None => sums.iter().map(|&s| s * s).sum::<f64>().sqrt(),
            Some(w) => sums
                .iter()
                .zip(w.iter())
                .map(|(&s, &wi)| wi * s * s)
                .sum::<f64>()
                .sqrt(),
        })
    }
}

fn check_group_weights(w: Option<&Array2<f64>>, dim: (usize, usize)) -> Result<()> {
    if let Some(w) = w {
        if w.dim() != dim {
            return dim_mismatch("group weights", dim, w.dim());
        }
        if w.iter().any(|&v| !v.is_finite() || v <= 0.0) {
            return Err(CscError::InvalidParameter(
                "group weights must be finite and > 0".into(),
            ));
        }
    }
    Ok(())
}

/// Stripe-normalization kernels: entry (m, dr, dc) is the l2 norm of filter m
/// restricted to the (filter_h - dr) x (filter_w - dc) corner that overlaps
/// the group's reference patch at displacement (dr, dc). Requires a
/// normalized dictionary so the zero-displacement weight is 1.
pub fn stripe_weight_kernels(
    d: &Dictionary,
    height: usize,
    width: usize,
) -> Result<GroupOperator> {
    if !d.is_normalized() {
        return Err(CscError::InvalidParameter(
            "stripe weight kernels require a normalized dictionary".into(),
        ));
    }
    let (m, fh, fw) = (d.num_filters(), d.filter_h(), d.filter_w());
    let mut kernels = Array3::zeros((m, fh, fw));
    for i in 0..m {
        let f = d.filter(i);
        for dr in 0..fh {
            for dc in 0..fw {
                let mut acc = 0.0;
                for r in 0..fh - dr {
                    for c in 0..fw - dc {
                        acc += f[[r, c]] * f[[r, c]];
                    }
                }
                kernels[[i, dr, dc]] = acc.sqrt();
            }
        }
    }
    GroupOperator::from_kernels(kernels, height, width)
}
