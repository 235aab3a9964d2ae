//! Core array types: images, convolutional dictionaries, coefficient maps,
//! the dictionary operator D and its adjoint, the Tikhonov lowpass split,
//! Gaussian noise synthesis, and PSNR.
//!
//! All convolutions are circular; filters have their origin at index (0,0)
//! of their support. Images are real-valued with nominal range [0,1] for
//! reference images (highpass residuals may be negative).

use crate::error::{dim_mismatch, CscError, Result};
use crate::fft::{pad_kernel, Fft2};
use ndarray::{Array2, Array3, Axis};
use num_complex::Complex64;

/// 2-D real-valued image, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Image {
    data: Array2<f64>,
}

impl Image {
    pub fn new(data: Array2<f64>) -> Result<Self> {
        if !data.iter().all(|v| v.is_finite()) {
            return Err(CscError::NonFinite("image".into()));
        }
        Ok(Self { data })
    }

    pub fn zeros(height: usize, width: usize) -> Self {
        Self {
            data: Array2::zeros((height, width)),
        }
    }

    pub fn height(&self) -> usize {
        self.data.nrows()
    }

    pub fn width(&self) -> usize {
        self.data.ncols()
    }

    pub fn data(&self) -> &Array2<f64> {
        &self.data
    }

    pub fn into_data(self) -> Array2<f64> {
        self.data
    }
}

/// Stack of M small convolution filters.
#[derive(Debug, Clone)]
pub struct Dictionary {
    /// M x filter_h x filter_w.
    filters: Array3<f64>,
    normalized: bool,
}

impl Dictionary {
    /// Build a dictionary, checking finiteness and (when `normalized`) that
    /// each filter has unit l2 norm to within 1e-8.
    pub fn new(filters: Array3<f64>, normalized: bool) -> Result<Self> {
        if !filters.iter().all(|v| v.is_finite()) {
            return Err(CscError::NonFinite("dictionary filters".into()));
        }
        if normalized {
            for (m, f) in filters.axis_iter(Axis(0)).enumerate() {
                let n = f.iter().map(|v| v * v).sum::<f64>().sqrt();
                if (n - 1.0).abs() > 1e-8 {
                    return Err(CscError::InvalidParameter(format!(
                        "filter {m} declared normalized but has l2 norm {n}"
                    )));
                }
            }
        }
        Ok(Self { filters, normalized })
    }

    /// Normalize every filter to unit l2 norm.
    pub fn normalize(mut self) -> Result<Self> {
        for mut f in self.filters.axis_iter_mut(Axis(0)) {
            let n = f.iter().map(|v| v * v).sum::<f64>().sqrt();
            if n == 0.0 {
                return Err(CscError::InvalidParameter(
                    "cannot normalize an all-zero filter".into(),
                ));
            }
            f.mapv_inplace(|v| v / n);
        }
        self.normalized = true;
        Ok(self)
    }

    pub fn num_filters(&self) -> usize {
        self.filters.len_of(Axis(0))
    }

    pub fn filter_h(&self) -> usize {
        self.filters.len_of(Axis(1))
    }

    pub fn filter_w(&self) -> usize {
        self.filters.len_of(Axis(2))
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn filters(&self) -> &Array3<f64> {
        &self.filters
    }

    pub fn filter(&self, m: usize) -> ndarray::ArrayView2<'_, f64> {
        self.filters.index_axis(Axis(0), m)
    }

    /// Cache the zero-padded filter spectra at the given image size.
    pub fn spectra(&self, height: usize, width: usize) -> Result<SpectralDictionary> {
        if self.filter_h() > height || self.filter_w() > width {
            return dim_mismatch(
                "dictionary spectra",
                (self.filter_h(), self.filter_w()),
                (height, width),
            );
        }
        let fft = Fft2::new(height, width);
        let m = self.num_filters();
        let mut spectra = Array3::zeros((m, height, width));
        for i in 0..m {
            let padded = pad_kernel(&self.filter(i).to_owned(), height, width);
            spectra
                .index_axis_mut(Axis(0), i)
                .assign(&fft.forward(&padded));
        }
        Ok(SpectralDictionary {
            spectra,
            filter_h: self.filter_h(),
            filter_w: self.filter_w(),
            fft,
        })
    }
}

/// Dictionary filter spectra at a fixed image size.
#[derive(Clone)]
pub struct SpectralDictionary {
    /// M x height x width complex spectra of the zero-padded filters.
    spectra: Array3<Complex64>,
    filter_h: usize,
    filter_w: usize,
    fft: Fft2,
}

impl SpectralDictionary {
    pub fn num_filters(&self) -> usize {
        self.spectra.len_of(Axis(0))
    }

    pub fn height(&self) -> usize {
        self.spectra.len_of(Axis(1))
    }

    pub fn width(&self) -> usize {
        self.spectra.len_of(Axis(2))
    }

    pub fn filter_h(&self) -> usize {
        self.filter_h
    }

    pub fn filter_w(&self) -> usize {
        self.filter_w
    }

    pub fn spectra(&self) -> &Array3<Complex64> {
        &self.spectra
    }

    pub fn fft(&self) -> &Fft2 {
        &self.fft
    }
}

/// Stack of M coefficient maps, each the same spatial size as the image.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientMaps {
    /// M x height x width.
    maps: Array3<f64>,
}

impl CoefficientMaps {
    pub fn new(maps: Array3<f64>) -> Result<Self> {
        if !maps.iter().all(|v| v.is_finite()) {
            return Err(CscError::NonFinite("coefficient maps".into()));
        }
        Ok(Self { maps })
    }

    pub fn zeros(num_filters: usize, height: usize, width: usize) -> Self {
        Self {
            maps: Array3::zeros((num_filters, height, width)),
        }
    }

    pub fn num_filters(&self) -> usize {
        self.maps.len_of(Axis(0))
    }

    pub fn height(&self) -> usize {
        self.maps.len_of(Axis(1))
    }

    pub fn width(&self) -> usize {
        self.maps.len_of(Axis(2))
    }

    pub fn maps(&self) -> &Array3<f64> {
        &self.maps
    }

    pub fn maps_mut(&mut self) -> &mut Array3<f64> {
        &mut self.maps
    }

    pub fn into_maps(self) -> Array3<f64> {
        self.maps
    }
}

/// Additive Gaussian noise parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseConfig {
    pub sigma: f64,
    pub seed: u64,
}

/// D x = sum_m d_m * x_m (circular convolution, computed in the DFT domain).
pub fn apply_dictionary(d: &SpectralDictionary, x: &CoefficientMaps) -> Result<Image> {
    if x.num_filters() != d.num_filters()
        || x.height() != d.height()
        || x.width() != d.width()
    {
        return dim_mismatch(
            "apply_dictionary",
            (d.num_filters(), d.height(), d.width()),
            (x.num_filters(), x.height(), x.width()),
        );
    }
    let fft = d.fft();
    let mut acc: Array2<Complex64> = Array2::zeros((d.height(), d.width()));
    for m in 0..d.num_filters() {
        let xm = x.maps().index_axis(Axis(0), m).to_owned();
        let xh = fft.forward(&xm);
        let dm = d.spectra().index_axis(Axis(0), m);
        ndarray::Zip::from(&mut acc).and(&xh).and(&dm).for_each(|a, &x, &d| *a += d * x);
    }
    Image::new(fft.inverse_real(&acc))
}

/// D^T s: map m is the circular correlation of s with d_m.
pub fn apply_dictionary_adjoint(d: &SpectralDictionary, s: &Image) -> Result<CoefficientMaps> {
    if s.height() != d.height() || s.width() != d.width() {
        return dim_mismatch(
            "apply_dictionary_adjoint",
            (d.height(), d.width()),
            (s.height(), s.width()),
        );
    }
    let fft = d.fft();
    let sh = fft.forward(s.data());
    let m = d.num_filters();
    let mut maps = Array3::zeros((m, d.height(), d.width()));
    for i in 0..m {
        let dm = d.spectra().index_axis(Axis(0), i);
        let prod = ndarray::Zip::from(&sh)
            .and(&dm)
            .map_collect(|&s, &d| d.conj() * s);
        maps.index_axis_mut(Axis(0), i)
            .assign(&fft.inverse_real(&prod));
    }
    CoefficientMaps::new(maps)
}

/// Split an image into lowpass and highpass components by solving
/// argmin_l (1/2)||l - s||^2 + (lambda/2)(||grad_r l||^2 + ||grad_c l||^2)
/// with circular first-difference kernels, per frequency.
pub fn tikhonov_lowpass(s: &Image, lambda_lp: f64) -> Result<(Image, Image)> {
    if !(lambda_lp > 0.0) {
        return Err(CscError::InvalidParameter(format!(
            "tikhonov_lowpass requires lambda > 0, got {lambda_lp}"
        )));
    }
    let (h, w) = (s.height(), s.width());
    let fft = Fft2::new(h, w);
    // circular first differences [-1, 1] along rows and columns
    let mut kr = Array2::zeros((h, w));
    kr[[0, 0]] += -1.0;
    kr[[1 % h, 0]] += 1.0;
    let mut kc = Array2::zeros((h, w));
    kc[[0, 0]] += -1.0;
    kc[[0, 1 % w]] += 1.0;
    let grh = fft.forward(&kr);
    let gch = fft.forward(&kc);
    let sh = fft.forward(s.data());
    let lh = ndarray::Zip::from(&sh)
        .and(&grh)
        .and(&gch)
        .map_collect(|&s, &gr, &gc| s / (1.0 + lambda_lp * (gr.norm_sqr() + gc.norm_sqr())));
    let low = fft.inverse_real(&lh);
    let high = s.data() - &low;
    Ok((Image::new(low)?, Image::new(high)?))
}

// Counter-based PRNG for noise synthesis. For pixel k (row-major), two u64
// words are produced as mix(seed + (2k+c+1)*GOLDEN) for c in {0,1}, where
// mix is the splitmix64 finalizer; these become uniforms in (0,1) and one
// standard normal via the Box-Muller transform. Bit-exact for a given
// (sigma, seed, dims) on any platform.
const GOLDEN: u64 = 0x9E3779B97F4A7C15;

fn mix64(mut z: u64) -> u64 {
    z ^= z >> 30;
    z = z.wrapping_mul(0xBF58476D1CE4E5B9);
    z ^= z >> 27;
    z = z.wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

fn counter_uniform(seed: u64, counter: u64) -> f64 {
    let z = mix64(seed.wrapping_add(counter.wrapping_add(1).wrapping_mul(GOLDEN)));
    // 53-bit mantissa, offset by half an ulp so the value is strictly in (0,1)
    ((z >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
}

/// Standard normal deviate for sample index k of the given seed's stream.
pub fn standard_normal(seed: u64, k: u64) -> f64 {
    let u1 = counter_uniform(seed, 2 * k);
    let u2 = counter_uniform(seed, 2 * k + 1);
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

/// Add Gaussian white noise; deterministic in (sigma, seed, dims). The output
/// is not clipped.
pub fn add_gaussian_noise(s: &Image, n: &NoiseConfig) -> Result<Image> {
    if !n.sigma.is_finite() || n.sigma < 0.0 {
        return Err(CscError::InvalidParameter(format!(
            "noise sigma must be finite and >= 0, got {}",
            n.sigma
        )));
    }
    if n.sigma == 0.0 {
        return Ok(s.clone());
    }
    let mut out = s.data().clone();
    for (k, v) in out.iter_mut().enumerate() {
        *v += n.sigma * standard_normal(n.seed, k as u64);
    }
    Image::new(out)
}

/// Peak signal-to-noise ratio in dB with peak fixed at 1.0; +inf when the
/// images are identical.
pub fn psnr(reference: &Image, test: &Image) -> Result<f64> {
    if reference.data().dim() != test.data().dim() {
        return dim_mismatch("psnr", reference.data().dim(), test.data().dim());
    }
    let n = reference.data().len() as f64;
    let mse = reference
        .data()
        .iter()
        .zip(test.data().iter())
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        / n;
    if mse == 0.0 {
        Ok(f64::INFINITY)
    } else {
        Ok(10.0 * (1.0 / mse).log10())
    }
}
