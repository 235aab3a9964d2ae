//! Two-dimensional FFT helpers built on rustfft.
//!
//! All spectral quantities in this crate use the unnormalized forward DFT and
//! a 1/(h*w)-normalized inverse, so `ifft2(fft2(a)) == a` up to roundoff.

use ndarray::Array2;
use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::sync::Arc;

/// Cached FFT plans for one spatial size.
#[derive(Clone)]
pub struct Fft2 {
    height: usize,
    width: usize,
    row_fwd: Arc<dyn Fft<f64>>,
    row_inv: Arc<dyn Fft<f64>>,
    col_fwd: Arc<dyn Fft<f64>>,
    col_inv: Arc<dyn Fft<f64>>,
}

impl Fft2 {
    pub fn new(height: usize, width: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            height,
            width,
            row_fwd: planner.plan_fft_forward(width),
            row_inv: planner.plan_fft_inverse(width),
            col_fwd: planner.plan_fft_forward(height),
            col_inv: planner.plan_fft_inverse(height),
        }
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    fn transform(&self, a: &mut Array2<Complex64>, forward: bool) {
        assert_eq!(a.dim(), (self.height, self.width), "Fft2 size mismatch");
        let (row, col) = if forward {
            (&self.row_fwd, &self.col_fwd)
        } else {
            (&self.row_inv, &self.col_inv)
        };
        let mut buf = vec![Complex64::default(); self.width.max(self.height)];
        for mut r in a.rows_mut() {
            buf[..self.width].copy_from_slice(r.as_slice().expect("row-major layout"));
            row.process(&mut buf[..self.width]);
            r.as_slice_mut().unwrap().copy_from_slice(&buf[..self.width]);
        }
        for mut c in a.columns_mut() {
            for (i, v) in c.iter().enumerate() {
                buf[i] = *v;
            }
            col.process(&mut buf[..self.height]);
            for (i, v) in c.iter_mut().enumerate() {
                *v = buf[i];
            }
        }
    }

    /// Forward DFT of a real array.
    pub fn forward(&self, a: &Array2<f64>) -> Array2<Complex64> {
        let mut c = a.mapv(|x| Complex64::new(x, 0.0));
        self.transform(&mut c, true);
        c
    }

    /// Forward DFT, complex input.
    pub fn forward_c(&self, a: &Array2<Complex64>) -> Array2<Complex64> {
        let mut c = a.clone();
        self.transform(&mut c, true);
        c
    }

    /// Inverse DFT with 1/(h*w) normalization.
    pub fn inverse(&self, a: &Array2<Complex64>) -> Array2<Complex64> {
        let mut c = a.clone();
        self.transform(&mut c, false);
        let scale = 1.0 / (self.height * self.width) as f64;
        c.mapv_inplace(|x| x * scale);
        c
    }

    /// Inverse DFT of a spectrum known to correspond to a real signal; the
    /// imaginary residue is discarded.
    pub fn inverse_real(&self, a: &Array2<Complex64>) -> Array2<f64> {
        self.inverse(a).mapv(|x| x.re)
    }
}

/// Zero-pad a small kernel (origin at index (0,0) of its support) to the given
/// spatial size, for use in circular DFT-domain convolution.
pub fn pad_kernel(kernel: &Array2<f64>, height: usize, width: usize) -> Array2<f64> {
    assert!(kernel.nrows() <= height && kernel.ncols() <= width);
    let mut out = Array2::zeros((height, width));
    out.slice_mut(ndarray::s![..kernel.nrows(), ..kernel.ncols()])
        .assign(kernel);
    out
}
