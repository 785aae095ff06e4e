//! Entanglement redistribution of a two-mode squeezed state by the particle
//! creation of a 1+1 dimensional Robertson-Walker expansion.
//!
//! The expansion acts on each field mode as a two-mode squeezing channel
//! with parameter `theta = |beta / alpha|`. Starting from a two-mode squeezed
//! state shared by Alice and Bob, the crate builds the four-mode out-state
//! (Alice, anti-Alice, Bob, anti-Bob), evaluates every Renyi-2 Gaussian
//! entanglement in closed form, cross-checks those against a numerical
//! entanglement-of-formation minimizer, and inverts entanglement data to
//! recover the expansion parameters.

// `!(x > 0.0)` is used on purpose throughout: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cosmology;
pub mod entanglement;
pub mod error;
pub mod figures;
pub mod inverse;
pub mod optim;
pub mod phasespace;
pub mod special;
pub mod validation;

pub use cosmology::{BogoliubovData, ExpansionModel, InitialState, ModeSpec, Parameters};
pub use entanglement::{full_report, report_for, EntanglementReport};
pub use error::{Error, Result};
pub use phasespace::{CovarianceMatrix, ModePartition, SymplecticTransform};
