//! Three faces of a single-mode quantum density state — truncated Fock
//! matrices, the diagonal (Glauber–Sudarshan) weight function and the
//! symplectic tomographic probability — with the maps connecting them,
//! the star-product algebra of diagonal symbols, the nonlinear
//! superposition rule for pure states, and bipartite separability tools.
//!
//! The crate keeps two cross-validating backends everywhere:
//!
//! * [`coherent::Span`] — exact finite sums of coherent-state dyads
//!   |α⟩⟨β|, closed under products, adjoints and traces;
//! * [`fock::FockOperator`] — dense truncated number-basis matrices.
//!
//! On top of those sit:
//!
//! * [`tomogram`] — the symplectic tomogram w(X,μ,ν), a genuine
//!   probability density on every ray (μ,ν), with closed-form and
//!   Fourier-quadrature evaluation;
//! * [`diagonal`] — weight functions φ(z) (point atoms plus isotropic
//!   Gaussians), Husimi–Kano functions, and the conversions between
//!   φ, Q, operators and tomograms;
//! * [`star`] — the star product of diagonal symbols realized through
//!   the exact operator algebra;
//! * [`superposition`] — the nonlinear superposition rule for density
//!   states in operator, symbol and tomogram form;
//! * [`bipartite`] — two-mode states, joint tomograms, separable
//!   ensembles with certificates, and the partial-transpose witness;
//! * [`stateio`] — the JSON state-description schema and the CSV/JSON
//!   grid exports used by the `phasetomo` binary.
//!
//! See the crate examples for one runnable walkthrough per capability:
//! `vacuum_tomogram`, `coherent_and_thermal`, `husimi_duality`,
//! `star_products`, `cat_superposition`, `entangled_cat_witness`.

pub mod bipartite;
pub mod cli;
pub mod coherent;
pub mod diagonal;
pub mod error;
pub mod fock;
pub mod star;
pub mod stateio;
pub mod superposition;
pub mod tomogram;

pub use error::{Error, Result};
