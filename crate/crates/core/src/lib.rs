//! Conditional preparation of symmetric coherent-state superpositions.
//!
//! Two identical small-separation superpositions `|α⟩ + |α e^{-iφ}⟩` meet on a
//! 50:50 beam splitter; selecting the outcome `X = 0` of a homodyne
//! measurement on one output leaves the other output in a superposition of the
//! vacuum and an even cat state `|β⟩ + |−β⟩` whose separation is larger by √2.
//!
//! * [`cv`] exact coherent-state algebra,
//! * [`fock`] independent truncated Fock-space simulation used as an oracle,
//! * [`protocol`] the preparation scheme as closed-form operations,
//! * [`sweep`] parameter sweeps and optimum search,
//! * [`validate`] closed form vs oracle comparison,
//! * [`cli`] the `catforge` command line.

// `!(x > y)` is used on purpose so NaN falls into the error branch
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod cv;
pub mod error;
pub mod exec;
pub mod fock;
pub mod params;
pub mod protocol;
pub mod quadrature;
pub mod sweep;
pub mod tolerance;
pub mod validate;

pub use error::{Error, Result};
pub use exec::Execution;
pub use params::{HomodyneWindow, ProtocolParams, Separations};
