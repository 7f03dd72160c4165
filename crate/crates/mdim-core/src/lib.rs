//! Finite-scale computations for metric mean dimension and rate distortion.
//!
//! Every quantity lives on a finite carrier: covering numbers and separated
//! sets on explicit metric spaces, orbit metrics on windowed or periodic
//! shifts, entropy and mutual information on finite pmfs, Blahut–Arimoto for
//! finite rate distortion problems, and exact optimal transport on finite
//! supports. Limits in `n` and `ε` are never claimed; every number that
//! stands in for one carries a bound label.
//!
//! The crate is `no_std` and needs only `alloc`. Logarithms are natural, so
//! all information quantities are in nats.
//!
//! Modules:
//! - [`metric`]: finite metric spaces, `#(X,d,ε)`, separated sets, tame growth.
//! - [`dynamics`]: systems, orbit metrics, shift and counterexample systems.
//! - [`info`]: entropy, mutual information and the standard inequalities.
//! - [`rd`]: Blahut–Arimoto, distortion families, block channels, `r(ε)`.
//! - [`transport`]: Wasserstein-1, greedy cyclic coupling, composition.
//! - [`mean_dim`]: growth profiles, slopes, comparison and sandwich reports.
#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(feature = "std")]
extern crate std;

pub mod dynamics;
mod error;
pub mod info;
pub mod mean_dim;
pub mod metric;
pub mod rd;
pub mod tol;
pub mod transport;
mod util;

pub use error::{Error, Result};

/// Crate version, recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
