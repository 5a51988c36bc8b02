//! Belief fusion driven by referee functions.
//!
//! Evidence from several sources comes as basic belief assignments over a
//! shared frame of atomic hypotheses. A combination rule is expressed as a
//! referee function: given one focal proposition per source it returns a
//! probability distribution over fused outcomes, where the empty
//! proposition means the tuple is rejected. Fusing then takes two
//! interchangeable forms, exact enumeration of all focal tuples
//! ([`fuse_exact`]) and Monte Carlo sampling ([`sampler::estimate`]), both
//! driven by the same referee.
//!
//! The catalog in [`rules`] covers the classical rules (conjunctive with
//! normalization, disjunctive, Dubois-Prade, weighted averaging, PCR6) and
//! the partial-consensus family in [`rules::f_pcr_sharp`], which searches
//! for the largest subset of sources whose entries agree. Direct
//! summation-formula implementations in [`closed_form`] cross-check the
//! referee route.
//!
//! ```
//! use reffuse::{Bba, Frame, fuse_exact, rules};
//!
//! let frame = Frame::new(["a", "b", "c"])?;
//! let m1 = Bba::new([
//!     (frame.atom("a")?, 0.4),
//!     (frame.proposition(["a", "b"])?, 0.5),
//!     (frame.universe(), 0.1),
//! ])?;
//! let m2 = Bba::new([
//!     (frame.atom("c")?, 0.4),
//!     (frame.proposition(["b", "c"])?, 0.5),
//!     (frame.universe(), 0.1),
//! ])?;
//! let result = fuse_exact(&[m1, m2], &rules::f_conjunctive())?;
//! assert!((result.rejection_rate - 0.56).abs() < 1e-12);
//! assert!((result.fused.mass(&frame.atom("b")?) - 25.0 / 44.0).abs() < 1e-12);
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```

pub mod belief;
pub mod cli;
pub mod closed_form;
pub mod lattice;
pub mod referee;
pub mod rules;
pub mod sampler;
#[cfg(test)]
mod testutil;

pub use belief::{average, AveragingWeights, Bba, BeliefError, MASS_SUM_TOLERANCE};
pub use lattice::{Frame, LatticeError, Proposition, MAX_ATOMS};
pub use referee::{
    check_normalization, constant_referee, fuse_exact, fuse_exact_with_cap, mix, Arbitrament,
    Branch, FusionResult, Referee, RefereeError, SeparableReferee,
};
pub use rules::{PcrSharpSchedule, RuleSpec, RulesError, RULE_NAMES};
pub use sampler::{
    convergence_series, estimate, estimate_with_workers, sample_once, stderr_bound, FusionEstimate,
    SampleConfig, SampleError,
};
