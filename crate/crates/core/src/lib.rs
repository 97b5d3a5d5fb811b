//! Robustness of asymmetry and robustness of coherence for finite-dimensional
//! quantum states.
//!
//! The crate is `no_std` compatible (it needs `alloc`). Everything here is a
//! pure function of its inputs; IO, file formats and the command-line driver
//! live in the `coherence-forge` companion crate.
//!
//! Layout:
//!
//! - [`linalg`]: dense complex matrices, Hermitian/density-matrix newtypes,
//!   eigendecomposition, Schatten norms.
//! - [`symmetry`]: group representations, the twirl (group average), the
//!   fixed-point subspace, channels and instruments.
//! - [`sdp`]: a small dense primal-dual interior-point SDP solver and the
//!   compilers that map each robustness program onto it.
//! - [`robustness`]: certificates for the robustness of asymmetry/coherence,
//!   closed forms, bounds, and the monotone property checks.
//! - [`discrimination`]: the channel discrimination game.
//! - [`randgen`]: reproducible counter-based sampling of states and channels.
#![cfg_attr(not(feature = "std"), no_std)]
// `!(x <= tol)` is deliberate: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod discrimination;
pub mod error;
pub mod linalg;
pub mod randgen;
pub mod robustness;
pub mod sdp;
pub mod symmetry;

pub use error::{Error, Result};
pub use linalg::{CMatrix, DensityMatrix, EigenDecomposition, HermitianMatrix, SchattenP};
pub use num_complex::Complex64;
pub use robustness::RobustnessCertificate;
pub use sdp::{SdpOptions, SdpProblem, SdpSolution, SdpStatus};
pub use symmetry::{GroupRep, QuantumChannel};
