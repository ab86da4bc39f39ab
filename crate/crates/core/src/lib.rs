//! Wilson- and d'Alembert-type functional equations with an involution on
//! finite groups and on word-length balls of infinite groups.
//!
//! The main equation is
//!
//! ```text
//! f(xy) + χ(y)·f(σ(y)x) = 2·f(x)·g(y)
//! ```
//!
//! with `σ` an involutive automorphism or anti-automorphism and `χ` a
//! character satisfying `χ(xσ(x)) = 1`. The crate enumerates the inputs,
//! evaluates residuals, builds the closed-form solution families, solves the
//! equation directly by linear algebra, and audits the stability inequalities
//! on balls.

pub mod families;
pub mod feq;
pub mod groups;
pub mod linalg;
pub mod morphisms;
pub mod roots;
pub mod solver;
pub mod stability;
pub mod function;
mod par;
pub mod report;
pub mod tolerances;

pub use function::{GroupFunction, C};
pub use par::configure_threads;
pub use groups::{BallDomain, Domain, FiniteGroup, GroupElement, GroupKind, IDENTITY};
