//! Serializable record of a finite-sample construction.
//!
//! Every number is written as an exact decimal string (`"3/4"`, `"120"`),
//! points and sets in their DSL form. The layout is stable so reports can be
//! compared byte for byte.

use serde::{Deserialize, Serialize};

use num_bigint::BigInt;

use crate::rational::Rational;

pub(crate) mod exact {
    use super::*;
    use serde::{de::Error, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&r.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        crate::rational::parse_rational(&s).ok_or_else(|| D::Error::custom(format!("bad rational {s:?}")))
    }

    pub mod int {
        use super::*;

        pub fn serialize<S: Serializer>(n: &BigInt, s: S) -> Result<S::Ok, S::Error> {
            s.serialize_str(&n.to_string())
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
            let s = String::deserialize(d)?;
            s.parse().map_err(|_| D::Error::custom(format!("bad integer {s:?}")))
        }
    }

    pub mod opt {
        use super::*;

        pub fn serialize<S: Serializer>(r: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
            match r {
                Some(r) => s.serialize_some(&r.to_string()),
                None => s.serialize_none(),
            }
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
            let s = Option::<String>::deserialize(d)?;
            s.map(|s| {
                crate::rational::parse_rational(&s).ok_or_else(|| D::Error::custom(format!("bad rational {s:?}")))
            })
            .transpose()
        }
    }
}

/// A piece `B_s` of the partition induced by the subring members.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubringCell {
    pub set: String,
    #[serde(with = "exact")]
    pub measure: Rational,
    /// `M_s = |B_s n D n F|`
    pub m_s: usize,
}

/// A positive-measure cell `C_s` and the sample drawn from it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PositiveCell {
    pub set: String,
    #[serde(with = "exact")]
    pub measure: Rational,
    /// Membership over the refining family `B_1..B_h, A_{l+1}..A_n`.
    pub pattern: Vec<bool>,
    /// Index of the subring piece this cell stands for (`C_s` inside `B_s`).
    pub subring_cell: Option<usize>,
    /// `N_s = floor(N * mu(C_s))`
    #[serde(with = "exact::int")]
    pub n_s: BigInt,
    /// `e_s = frac(N * mu(C_s))`
    #[serde(with = "exact")]
    pub e_s: Rational,
    /// `|lambda_s|`
    pub sample_size: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NullCell {
    pub set: String,
    pub pattern: Vec<bool>,
}

/// Error terms for one input set `A_i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SetTerms {
    pub set: String,
    #[serde(with = "exact")]
    pub measure: Rational,
    pub in_subring: bool,
    /// Positive cells inside `A_i` standing for subring pieces.
    pub g: Vec<usize>,
    /// The remaining positive cells inside `A_i`.
    pub g_prime: Vec<usize>,
    #[serde(with = "exact")]
    pub epsilon: Rational,
    pub eta: usize,
    pub theta: usize,
    #[serde(with = "exact")]
    pub zeta: Rational,
    /// `N * mu(A_i) - epsilon - eta + theta`
    #[serde(with = "exact")]
    pub predicted_trace: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairDeviation {
    pub i: usize,
    pub j: usize,
    /// `| |l n A_i| / |l n A_j| - mu(A_i)/mu(A_j) |`, absent when the
    /// denominator trace is zero.
    #[serde(with = "exact::opt")]
    pub deviation: Option<Rational>,
    pub within_tolerance: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TracePair {
    pub i: usize,
    pub j: usize,
    pub equal: bool,
}

/// Outcome of checking the three sample properties by membership tests.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    /// `|lambda n A_i|` for every input set.
    pub traces: Vec<usize>,
    pub missing_points: Vec<String>,
    pub property1: bool,
    pub subring_pairs: Vec<TracePair>,
    pub property2: bool,
    #[serde(with = "exact")]
    pub tolerance: Rational,
    pub deviations: Vec<PairDeviation>,
    pub property3: bool,
}

impl Verdict {
    pub fn holds(&self) -> bool {
        self.property1 && self.property2 && self.property3
    }
}

/// One audited identity or bound.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub ok: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LambdaReport {
    pub universe: String,
    pub m: u64,
    /// Number of distinct required points.
    pub k: usize,
    pub points: Vec<String>,
    pub lambda: Vec<String>,
    pub subring_cells: Vec<SubringCell>,
    pub positive_cells: Vec<PositiveCell>,
    pub null_cells: Vec<NullCell>,
    /// `mu(A_1 u ... u A_n)`
    #[serde(with = "exact")]
    pub alpha: Rational,
    /// Smallest positive cell measure.
    #[serde(with = "exact")]
    pub c_min: Rational,
    /// `alpha (2m+1)(k+1) / c^2`
    #[serde(with = "exact")]
    pub n_bound: Rational,
    #[serde(with = "exact::int")]
    pub n_min: BigInt,
    /// Fractional-part tolerance `1/p`.
    #[serde(with = "exact")]
    pub eps: Rational,
    pub decimal_weights: bool,
    #[serde(with = "exact::int")]
    pub n: BigInt,
    pub sets: Vec<SetTerms>,
    pub verdict: Verdict,
    pub checks: Vec<Check>,
}

impl LambdaReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(src: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(src)
    }

    pub fn all_ok(&self) -> bool {
        self.verdict.holds() && self.checks.iter().all(|c| c.ok)
    }
}
