//! Ground states, entanglement spectra, Tsallis entropies and finite-size
//! scaling for spin-S transverse-field Ising chains.
//!
//! The chain Hamiltonian is
//!
//! ```text
//! H = -J1 Σ Sz_i Sz_{i+1} - J2 Σ Sz_i Sz_{i+2} - B Σ Sx_i
//! ```
//!
//! with `B = 1` and the couplings tied to the tuning parameter `λ`
//! (`J1 = λ`, `J2 = r·λ`). A typical pipeline solves the ground state at each
//! `λ` of a grid, reduces it to a single-site or block spectrum, evaluates the
//! Tsallis entropy `S_q` and differentiates it to obtain `Γ_q = dS_q/dλ`.
//!
//! ```
//! use qcrit::{entanglement, entropy, lanczos, spin::ChainSpec};
//!
//! let spec = ChainSpec::nn(1, 8);
//! let gs = lanczos::ground_state(&spec, 1.0, &Default::default()).unwrap();
//! let p = entanglement::block_probabilities(&gs.vector, &spec, 4).unwrap();
//! let s = entropy::tsallis_entropy(&p, entropy::Q_SPECIAL_ISING).unwrap();
//! assert!(s > 0.0);
//! ```

pub mod entanglement;
pub mod entropy;
pub mod error;
pub mod lanczos;
pub mod runner;
pub mod scaling;
pub mod spin;

pub use error::{Error, Result};
