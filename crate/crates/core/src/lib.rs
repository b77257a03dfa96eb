//! Perfect quadratization of pseudo-Boolean polynomials.
//!
//! The main entry points are [`quadratize_4var`] for a single group of at most
//! four variables and [`quadratize_n`] for arbitrary degree-4 polynomials.
//! [`verify_perfect`] checks any result by exhaustive enumeration.

pub mod baselines;
pub mod exec;
pub mod fixtures;
pub mod oracle;
pub mod partition;
pub mod poly;
pub mod quad4;
pub mod quadratization;

pub use baselines::{metrics, rosenberg, termwise, Metrics};
pub use exec::Exec;
pub use oracle::{synthesize_one_aux, verify_perfect, VerificationReport};
pub use partition::{group_terms, quadratize_n, quadratize_n_with, TermGroup};
pub use poly::{truth_table_to_multilinear, Assignment, Monomial, Polynomial, VarId, VarKind};
pub use quad4::{quadratize_4var, quadratize_4var_with, CasePlan, Coeffs4, Lemma};
pub use quadratization::{Component, Quadratization, Step, Tolerance};
