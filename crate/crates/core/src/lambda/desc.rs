//! Measure-space description files (JSON) and dispatch over universes.
//!
//! ```json
//! {
//!   "universe": "real-line",
//!   "subring": ["[0,1/2)", "[1/2,1)"],
//!   "points": ["1/4"],
//!   "sets": [
//!     { "set": "[0,1/2)", "in_subring": true },
//!     { "set": "[0,1/3) u {5}" }
//!   ],
//!   "m": 10
//! }
//! ```
//!
//! `universe` is one of `real-line`, `coin-toss` or `atoms`; the `atoms`
//! universe also needs `atom_weights`. `search_ceiling` optionally bounds
//! the decimal-mode search for `N`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{
    audit, build_lambda, verify_lambda, Check, LambdaError, LambdaReport, LambdaRequest, MeasureSpace, Verdict,
};
use crate::algebra::{AlgebraError, CoinToss, RealLine, SetAlgebra};
use crate::approx::DEFAULT_SEARCH_CEILING;
use crate::atoms::AtomSpace;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Universe {
    RealLine,
    CoinToss,
    Atoms,
}

impl Universe {
    pub fn name(self) -> &'static str {
        match self {
            Universe::RealLine => "real-line",
            Universe::CoinToss => "coin-toss",
            Universe::Atoms => "atoms",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SetEntry {
    pub set: String,
    #[serde(default)]
    pub in_subring: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceDescription {
    pub universe: Universe,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub atom_weights: Vec<String>,
    #[serde(default)]
    pub subring: Vec<String>,
    #[serde(default)]
    pub points: Vec<String>,
    pub sets: Vec<SetEntry>,
    pub m: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub search_ceiling: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DescError {
    #[error("description: {0}")]
    Format(String),
    #[error("parse error: {0}")]
    Parse(#[from] AlgebraError),
    #[error(transparent)]
    Lambda(#[from] LambdaError),
}

impl SpaceDescription {
    pub fn from_json(src: &str) -> Result<Self, DescError> {
        serde_json::from_str(src).map_err(|e| DescError::Format(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("description serializes")
    }

    fn instantiate<A: SetAlgebra>(&self, algebra: A) -> Result<(MeasureSpace<A>, LambdaRequest<A>), DescError> {
        let subring = self
            .subring
            .iter()
            .map(|s| algebra.parse_set(s))
            .collect::<Result<Vec<_>, _>>()?;
        let points = self
            .points
            .iter()
            .map(|s| algebra.parse_point(s))
            .collect::<Result<Vec<_>, _>>()?;
        let sets = self
            .sets
            .iter()
            .map(|e| algebra.parse_set(&e.set))
            .collect::<Result<Vec<_>, _>>()?;
        let req = LambdaRequest {
            m: self.m,
            points,
            sets,
            in_subring: self.sets.iter().map(|e| e.in_subring).collect(),
        };
        let mut space = MeasureSpace::new(algebra, subring);
        space.search_ceiling = self.search_ceiling.unwrap_or(DEFAULT_SEARCH_CEILING);
        Ok((space, req))
    }

    fn atom_space(&self) -> Result<AtomSpace, DescError> {
        if self.atom_weights.is_empty() {
            return Err(DescError::Format("atoms universe needs atom_weights".into()));
        }
        Ok(AtomSpace::parse(&self.atom_weights)?)
    }
}

fn build<A: SetAlgebra>(desc: &SpaceDescription, algebra: A) -> Result<LambdaReport, DescError> {
    let (space, req) = desc.instantiate(algebra)?;
    Ok(build_lambda(&space, &req, desc.universe.name())?)
}

pub fn build_from_description(desc: &SpaceDescription) -> Result<LambdaReport, DescError> {
    match desc.universe {
        Universe::RealLine => build(desc, RealLine),
        Universe::CoinToss => build(desc, CoinToss),
        Universe::Atoms => build(desc, desc.atom_space()?),
    }
}

fn verify<A: SetAlgebra>(
    desc: &SpaceDescription,
    algebra: A,
    lambda: &[String],
    recorded: Option<&LambdaReport>,
) -> Result<(Verdict, Vec<Check>), DescError> {
    let (space, req) = desc.instantiate(algebra)?;
    let alg = &space.algebra;
    let points = lambda
        .iter()
        .map(|s| alg.parse_point(s))
        .collect::<Result<Vec<_>, _>>()?;
    let verdict = verify_lambda(alg, &req, &points);
    let checks = match recorded {
        None => Vec::new(),
        Some(report) => {
            let mut checks = vec![Check {
                name: "recorded sets and measures match the description".into(),
                ok: report.m == req.m
                    && report.sets.len() == req.sets.len()
                    && report
                        .sets
                        .iter()
                        .zip(&req.sets)
                        .zip(&req.in_subring)
                        .all(|((t, a), &sub)| t.measure == alg.measure(a) && t.in_subring == sub),
                detail: String::new(),
            }];
            checks.extend(audit(report, &verdict.traces));
            checks
        }
    };
    Ok((verdict, checks))
}

/// Re-checks a sample against a description. With a recorded report the
/// construction's identities are audited against the recounted traces too.
pub fn verify_from_description(
    desc: &SpaceDescription,
    lambda: &[String],
    recorded: Option<&LambdaReport>,
) -> Result<(Verdict, Vec<Check>), DescError> {
    match desc.universe {
        Universe::RealLine => verify(desc, RealLine, lambda, recorded),
        Universe::CoinToss => verify(desc, CoinToss, lambda, recorded),
        Universe::Atoms => verify(desc, desc.atom_space()?, lambda, recorded),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const HALVES: &str = r#"{
        "universe": "real-line",
        "subring": ["[0,1/2)", "[1/2,1)"],
        "points": ["1/4"],
        "sets": [
            { "set": "[0,1/2)", "in_subring": true },
            { "set": "[1/2,1)", "in_subring": true },
            { "set": "[0,1/3) u {5}" }
        ],
        "m": 10
    }"#;

    #[test]
    fn description_round_trip_and_build() {
        let desc = SpaceDescription::from_json(HALVES).unwrap();
        assert_eq!(SpaceDescription::from_json(&desc.to_json()).unwrap(), desc);
        let report = build_from_description(&desc).unwrap();
        assert!(report.all_ok());
        let again = LambdaReport::from_json(&report.to_json()).unwrap();
        assert_eq!(again, report);
        let (verdict, checks) = verify_from_description(&desc, &report.lambda, Some(&report)).unwrap();
        assert!(verdict.holds());
        assert!(checks.iter().all(|c| c.ok), "{checks:#?}");
    }

    #[test]
    fn unknown_fields_and_bad_sets_are_errors() {
        assert!(matches!(
            SpaceDescription::from_json(r#"{"universe":"real-line","sets":[],"m":1,"extra":0}"#),
            Err(DescError::Format(_))
        ));
        let desc = SpaceDescription::from_json(r#"{"universe":"real-line","sets":[{"set":"[0,1"}],"m":1}"#).unwrap();
        assert!(matches!(build_from_description(&desc), Err(DescError::Parse(_))));
        let desc = SpaceDescription::from_json(r#"{"universe":"atoms","sets":[{"set":"A(0)"}],"m":1}"#).unwrap();
        assert!(matches!(build_from_description(&desc), Err(DescError::Format(_))));
    }

    #[test]
    fn tampered_sample_is_flagged() {
        let desc = SpaceDescription::from_json(HALVES).unwrap();
        let report = build_from_description(&desc).unwrap();
        let mut lambda = report.lambda.clone();
        // drop one sampled point from the first subring piece
        let victim = lambda.iter().position(|s| s != "1/4" && s.starts_with("1/")).unwrap();
        lambda.remove(victim);
        let (verdict, checks) = verify_from_description(&desc, &lambda, Some(&report)).unwrap();
        assert!(!verdict.holds() || checks.iter().any(|c| !c.ok));
    }
}
