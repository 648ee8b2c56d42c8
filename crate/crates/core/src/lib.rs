pub mod error;
pub mod experiments;
pub mod exponents;
pub mod fio;
pub mod grid;
pub mod norms;
pub mod oracles;
pub mod tfa;
pub mod verify;

pub use error::{Error, Result};
pub use grid::{fourier, inner, inverse_fourier, make_grid, Grid1D, Signal};
pub use tfa::{gabor_coefficient, istft, stft, StftMatrix, Window};
pub use norms::{amalgam_norm, mixed_norm, modulation_norm, NormResult, Recip, WeightSpec};
pub use oracles::ChirpedGaussian;
pub use fio::{apply_fio, PhaseId, PhaseSpec, SymbolDescriptor, SymbolGrid};
pub use exponents::{CheckerId, IndexTuple};
pub use experiments::{fit_scaling, ExperimentConfig, ExperimentReport, ScalingFit};
pub use verify::{verify_all, VerifyReport};
