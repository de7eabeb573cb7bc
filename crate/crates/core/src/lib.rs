//! SU(N)-symmetric quasi-probability distributions (Wigner, Q and P functions)
//! over generalized coherent states.
//!
//! The crate is organized bottom-up:
//!
//! * [`algebra`]: generators `Λ_{N,M}(k)`, structure constants and the star product;
//! * [`coherent`]: Euler-angle unitaries, coherent states, the CP^{N-1} measure;
//! * [`quadrature`]: exact product quadrature over the measure;
//! * [`kernels`]: Stratonovich–Weyl kernels `F^s_{N,M}` for `M = 1, 2` and conversions;
//! * [`distributions`]: density matrices, Bloch vectors, `f^s` evaluation and recovery;
//! * [`werner`]: the two-qubit Werner family and its negativity regions;
//! * [`verify`]: the integral-identity suite behind `sunqps verify`;
//! * [`io`]: JSON/CSV formats.

pub mod algebra;
pub mod coherent;
pub mod distributions;
pub mod error;
pub mod io;
pub mod kernels;
pub mod linalg;
pub mod quadrature;
pub mod verify;
pub mod werner;

pub use algebra::{build_basis, build_generators, rep_dimension, GeneratorSet};
pub use coherent::{coherent_state, normalization_constant, volume_weight, CoherentStates, PhasePoint};
pub use distributions::{BlochVector, DensityMatrix};
pub use error::{Error, Result};
pub use kernels::{Kernel, KernelBuilder, SOrder};
pub use linalg::{CMatrix, CVector};
pub use quadrature::QuadratureGrid;
