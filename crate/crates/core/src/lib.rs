//! Low-multilinear-rank approximation under the spiked tensor model.
//!
//! * [`tensor`] and [`matrix`]: dense storage, unfoldings, Kronecker and
//!   multilinear products.
//! * [`linalg`]: Gram-matrix eigensolver, orthonormalization, principal angles.
//! * [`spiked`]: sampling `𝒯 = 𝒫 + 𝒩/√N` with a Tucker signal.
//! * [`theory`]: semicircle law, spike locations and alignments, noise bounds.
//! * [`decomposition`]: truncated MLSVD and HOOI.
//!
//! The crate is `no_std` (with `alloc`) when the default `std` feature is off.

#![cfg_attr(not(feature = "std"), no_std)]
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

extern crate alloc;

mod gemm;

pub mod decomposition;
pub mod error;
pub mod linalg;
pub mod matrix;
pub mod rng;
pub mod spiked;
pub mod tensor;
pub mod theory;

pub use decomposition::{
    core_proportionality_check, hooi, reconstruct, reconstruction_error, truncated_mlsvd, CoreRatios, HooiOptions,
    HooiReport, UpdateOrder,
};
pub use error::{Error, Result};
pub use linalg::{
    dominant_left_subspace, full_gram_spectrum, mean_alignment, orthonormalize, principal_angles, OrthonormalBasis,
    SpectralResult,
};
pub use matrix::{kron, Matrix};
pub use rng::Rng;
pub use spiked::{haar_basis, make_signal, sample_observation, NConvention, SpikedInstance, TuckerFactors};
pub use tensor::{contract, cpd_rank_bounds, fold, frob_inner, frob_norm, outer, tucker_to_full, unfold, DenseTensor};
pub use theory::{ScalePair, SpikePrediction};
