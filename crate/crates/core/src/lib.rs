//! Genus-two theta constants, Siegel modular forms, the quartic K3 family with
//! its inverse period map, and an exact verifier for the Kummer-side derivation
//! of the parameter identity
//! `[α, β, γ, δ] = [E4, E6, 2^12·3^5·C10, 2^12·3^6·C12]`.

pub mod error;
pub mod exactpoly;
pub mod cli;
pub mod forms;
pub mod k3family;
pub mod kummer;
pub mod numerics;
pub mod sweeps;
pub mod theta;

pub use error::{Error, Result};
