//! Elementary numerosities on concrete set algebras.
//!
//! Values live in the computable non-Archimedean field `Q(a)` (see
//! [`field`]). The real-line algebra ([`realsets`]) and the coin-toss
//! cylinder algebra ([`cointoss`]) carry explicit numerosities whose shadow
//! ratios recover Lebesgue measure and the coin-toss probability. The
//! [`lambda`] module builds finite sample sets whose trace counts match
//! measure ratios to a prescribed tolerance.

#![allow(clippy::result_large_err)]

pub mod algebra;
pub mod approx;
pub mod atoms;
pub mod cointoss;
mod dsl;
pub mod field;
pub mod lambda;
pub mod poly;
pub mod rational;
pub mod realsets;

pub use algebra::{AlgebraError, CoinToss, RealLine, SetAlgebra};
pub use approx::{dirichlet_n, fractional_parts_below, induced_partition, ApproxError, Weight, WeightVector};
pub use atoms::{AtomPoint, AtomSet, AtomSpace};
pub use cointoss::{Coin, CoinError, CoinEvent, CoinOutcome};
pub use field::{FieldElement, FieldError, Shadow};
pub use lambda::{
    build_lambda, verify_lambda, LambdaError, LambdaReport, LambdaRequest, MeasureSpace, SpaceDescription, Verdict,
};
pub use rational::Rational;
pub use realsets::{Interval, RealSet, RealSetError};
