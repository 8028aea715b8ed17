//! Diagnostic instruments: autocorrelation eigenvalue spread, the two-tap
//! error surface and Wiener solution, and STFT spectrograms.

mod eigen;
mod fft;
mod stft;
mod wiener;

pub use eigen::{eigenvalue_spread, sym_eigenvalues, toeplitz_from_autocorr, DEFAULT_EIGEN_TOLERANCE};
pub use fft::{fft_in_place, Complex64};
pub use stft::{stft_spectrogram, Spectrogram, SpectrogramConfig, SpectrogramPreset, DB_FLOOR};
pub use wiener::{autocorr_matrix_2tap, error_surface, wiener_solution, GridAxis, SurfaceGrid};
