//! Confirmation of statistical hypotheses through confidence regions.
//!
//! A confidence function `c` maps evidence `E` to a region of the parameter
//! space. For a null `H₀` with alternative `H₁ = H₀ᶜ`, the region decides
//! one of three modal sentences: `□H₀` when `c(E) ⊆ H₀`, `□H₁` when
//! `c(E) ⊆ H₁`, and `◇H₀ ∧ ◇H₁` otherwise. A hypothesis can be confirmed
//! only if it has nonempty interior, so point nulls never are.
//!
//! Modules:
//!
//! * [`region`]: interval-union regions, complements, interiors, and a
//!   symbolic dense-codense set.
//! * [`confidence`]: evidence, sampling models, Wald rules and rigged rules.
//! * [`verdict`]: the trichotomy and modal evaluation.
//! * [`power`]: classical power, decisive power, indecisiveness, d-values.
//! * [`kripke`]: model checking over (θ, evidence) frames.
//! * [`rigged`]: exact coverage on the finite binomial model.
//! * [`severity`]: severe tests of empirical adequacy.
//! * [`cli`]: the `modal-confirm` command line.
//!
//! ```
//! use modal_confirm::confidence::{ConfidenceRule, Evidence};
//! use modal_confirm::region::{Interval, RegionSet};
//! use modal_confirm::verdict::{run_test, Outcome};
//!
//! let rule = ConfidenceRule::wald_normal(0.05, 1.0).unwrap();
//! let h0 = RegionSet::interval(Interval::real_line(), Interval::closed(-0.2, 0.2).unwrap()).unwrap();
//! let e = Evidence::normal(1.0, vec![0.0; 100]).unwrap();
//! assert_eq!(run_test(&rule, &e, &h0).unwrap().outcome, Outcome::ConfirmNull);
//! ```

pub mod cli;
pub mod confidence;
pub mod error;
pub mod kripke;
pub mod mc;
pub mod normal;
pub mod power;
pub mod region;
pub mod rigged;
pub mod severity;
pub mod verdict;

pub use confidence::{ConfidenceFunction, ConfidenceRule, Evidence, SamplingModel};
pub use error::{Error, Result};
pub use region::{Interval, RegionSet};
pub use verdict::{evaluate, run_test, Outcome, Verdict};
