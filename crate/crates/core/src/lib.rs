//! Convolutional sparse coding with l1 and overlapping-group mixed-norm
//! penalties, solved by ADMM with DFT-domain Sherman-Morrison linear solvers,
//! plus weighting schemes and a Gaussian-denoising pipeline.

pub mod error;
pub mod fft;
pub mod groups;
pub mod io;
pub mod linsolve;
pub mod pipeline;
pub mod prox;
pub mod report;
pub mod signal;
pub mod solvers;
pub mod weighting;

pub use error::{CscError, Result};
