//! Finite samples whose trace counts reproduce measure ratios.
//!
//! Given a non-atomic finitely additive measure, a subring whose non-empty
//! members all have positive measure, points `x_1..x_k`, sets `A_1..A_n` of
//! finite positive measure and a tolerance `1/m`, [`build_lambda`] returns a
//! finite set `lambda` such that
//!
//! 1. every `x_j` is in `lambda`;
//! 2. subring members of equal measure have equal traces `|lambda n A_i|`;
//! 3. `| |lambda n A_i| / |lambda n A_j| - mu(A_i)/mu(A_j) | < 1/m` whenever
//!    `mu(A_j) > 0`.
//!
//! [`verify_lambda`] re-checks the three properties by membership tests
//! alone, and [`audit`] re-derives every intermediate identity of the
//! construction against those independently counted traces.

mod desc;
mod report;

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::algebra::{AlgebraError, SetAlgebra};
use crate::approx::{dirichlet_n, induced_partition, ApproxError, Weight, WeightVector, DEFAULT_SEARCH_CEILING};
use crate::rational::{floor, frac, Rational};

pub use desc::{build_from_description, verify_from_description, DescError, SetEntry, SpaceDescription, Universe};
pub use report::{
    Check, LambdaReport, NullCell, PairDeviation, PositiveCell, SetTerms, SubringCell, TracePair, Verdict,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LambdaError {
    #[error("invalid request: {0}")]
    InvalidRequest(String),
    #[error("set {0} is marked as a subring member but is not generated by the subring generators")]
    NotInSubring(usize),
    #[error("partition degenerate: {0}")]
    PartitionDegenerate(String),
    #[error("enumeration failure: {0}")]
    EnumerationFailure(String),
    #[error("approximation failure: {0}")]
    Approximation(#[from] ApproxError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// A measure space as seen by the builder: an algebra with its measure,
/// generators of the distinguished subring, and the search budget used
/// when weights are decimal.
#[derive(Debug, Clone)]
pub struct MeasureSpace<A: SetAlgebra> {
    pub algebra: A,
    pub subring_generators: Vec<A::Set>,
    pub search_ceiling: u64,
}

impl<A: SetAlgebra> MeasureSpace<A> {
    pub fn new(algebra: A, subring_generators: Vec<A::Set>) -> Self {
        Self {
            algebra,
            subring_generators,
            search_ceiling: DEFAULT_SEARCH_CEILING,
        }
    }
}

#[derive(Debug, Clone)]
pub struct LambdaRequest<A: SetAlgebra> {
    pub m: u64,
    pub points: Vec<A::Point>,
    pub sets: Vec<A::Set>,
    /// Whether each `A_i` is declared a member of the subring.
    pub in_subring: Vec<bool>,
}

impl<A: SetAlgebra> LambdaRequest<A> {
    fn validate(&self, alg: &A) -> Result<(), LambdaError> {
        if self.m == 0 {
            return Err(LambdaError::InvalidRequest("m must be at least 1".into()));
        }
        if self.sets.is_empty() {
            return Err(LambdaError::InvalidRequest("at least one set is required".into()));
        }
        if self.in_subring.len() != self.sets.len() {
            return Err(LambdaError::InvalidRequest(
                "subring membership must be given for every set".into(),
            ));
        }
        if let Some(i) = self.sets.iter().position(|a| alg.is_empty(a)) {
            return Err(LambdaError::InvalidRequest(format!("set {i} is empty")));
        }
        if self.sets.iter().all(|a| alg.measure(a).is_zero()) {
            return Err(LambdaError::InvalidRequest("all sets are null".into()));
        }
        Ok(())
    }
}

fn union_all<A: SetAlgebra>(alg: &A, sets: &[A::Set]) -> Result<A::Set, AlgebraError> {
    sets.iter().try_fold(alg.empty(), |acc, s| alg.union(&acc, s))
}

/// Checks the subring hypothesis on the generated ring and that every
/// declared member is a union of generator cells.
fn check_subring<A: SetAlgebra>(space: &MeasureSpace<A>, req: &LambdaRequest<A>) -> Result<(), LambdaError> {
    let alg = &space.algebra;
    let gens = induced_partition(alg, &space.subring_generators)?;
    if let Some(cell) = gens.cells.iter().find(|c| alg.measure(&c.set).is_zero()) {
        return Err(LambdaError::PartitionDegenerate(format!(
            "subring generators produce the null piece {}",
            cell.set
        )));
    }
    let cover = union_all(alg, &space.subring_generators)?;
    for (i, a) in req.sets.iter().enumerate() {
        if !req.in_subring[i] {
            continue;
        }
        if !alg.is_subset(a, &cover)? {
            return Err(LambdaError::NotInSubring(i));
        }
        for cell in &gens.cells {
            let inside = alg.intersect(&cell.set, a)?;
            if !alg.is_empty(&inside) && inside != cell.set {
                return Err(LambdaError::NotInSubring(i));
            }
        }
    }
    Ok(())
}

/// Runs the construction and returns the full report, including the
/// independent verification and the identity audit.
pub fn build_lambda<A: SetAlgebra>(
    space: &MeasureSpace<A>,
    req: &LambdaRequest<A>,
    universe: &str,
) -> Result<LambdaReport, LambdaError> {
    let alg = &space.algebra;
    req.validate(alg)?;
    check_subring(space, req)?;

    let f: BTreeSet<A::Point> = req.points.iter().cloned().collect();
    let k = f.len();

    // (i) pieces B_1..B_h of the subring members
    let members: Vec<A::Set> = req
        .sets
        .iter()
        .zip(&req.in_subring)
        .filter(|(_, &b)| b)
        .map(|(a, _)| a.clone())
        .collect();
    let b_cells: Vec<A::Set> = induced_partition(alg, &members)?
        .cells
        .into_iter()
        .map(|c| c.set)
        .collect();
    if let Some(b) = b_cells.iter().find(|b| alg.measure(b).is_zero()) {
        return Err(LambdaError::PartitionDegenerate(format!(
            "subring piece {b} has measure zero"
        )));
    }
    let h = b_cells.len();

    // (ii) refine by the remaining sets into positive cells C_s and null cells D_t
    let mut family = b_cells.clone();
    family.extend(
        req.sets
            .iter()
            .zip(&req.in_subring)
            .filter(|(_, &b)| !b)
            .map(|(a, _)| a.clone()),
    );
    let cells = induced_partition(alg, &family)?.cells;
    let (positive, null): (Vec<_>, Vec<_>) = cells.into_iter().partition(|c| alg.measure(&c.set).is_positive());

    // C_s inside B_s for the first h cells: the first positive cell lying in B_s
    let mut order: Vec<usize> = Vec::with_capacity(positive.len());
    let mut subring_cell: Vec<Option<usize>> = vec![None; positive.len()];
    for s in 0..h {
        let pick = (0..positive.len())
            .find(|&c| positive[c].pattern[s] && !order.contains(&c))
            .ok_or_else(|| LambdaError::PartitionDegenerate(format!("subring piece {s} has no positive cell")))?;
        order.push(pick);
        subring_cell[pick] = Some(s);
    }
    order.extend((0..positive.len()).filter(|c| subring_cell[*c].is_none()));
    let positive: Vec<_> = order.iter().map(|&c| (positive[c].clone(), subring_cell[c])).collect();
    let p = positive.len();
    let measures: Vec<Rational> = positive.iter().map(|(c, _)| alg.measure(&c.set)).collect();

    // (iii) alpha, c and N
    let alpha = alg.measure(&union_all(alg, &req.sets)?);
    let c_min = measures.iter().min().cloned().expect("at least one positive cell");
    let m = Rational::from_integer(BigInt::from(req.m));
    let k1 = Rational::from_integer(BigInt::from(k + 1));
    let two = Rational::from_integer(BigInt::from(2));
    let n_bound = &alpha * (&two * &m + Rational::one()) * &k1 / (&c_min * &c_min);
    let n_min = floor(&n_bound) + 1;
    let eps = Rational::new(BigInt::one(), BigInt::from(p));
    let decimal = alg.decimal_weights();
    let weights = WeightVector::new(
        measures
            .iter()
            .map(|w| {
                if decimal {
                    Weight::Decimal(w.clone())
                } else {
                    Weight::Exact(w.clone())
                }
            })
            .collect(),
    )?;
    let n = dirichlet_n(&weights, &eps, &n_min, space.search_ceiling)?;
    let n_rat = Rational::from_integer(n.clone());

    // (iv) N_s, e_s, M_s
    let n_s: Vec<BigInt> = measures.iter().map(|mu| floor(&(&n_rat * mu))).collect();
    let e_s: Vec<Rational> = measures.iter().map(|mu| frac(&(&n_rat * mu))).collect();
    let k_big = BigInt::from(k);
    for (s, ns) in n_s.iter().enumerate() {
        assert!(ns > &k_big, "N_s > k must hold by the choice of N (cell {s})");
    }
    let null_union = union_all(alg, &null.iter().map(|c| c.set.clone()).collect::<Vec<_>>())?;
    let f_null: BTreeSet<&A::Point> = f.iter().filter(|x| alg.contains(&null_union, x)).collect();
    let m_s: Vec<usize> = b_cells
        .iter()
        .map(|b| f_null.iter().filter(|x| alg.contains(b, x)).count())
        .collect();

    // (v) lambda_s inside C_s, containing C_s n F
    let mut lambda: BTreeSet<A::Point> = f.clone();
    let mut sample_sizes = Vec::with_capacity(p);
    for (s, (cell, b)) in positive.iter().enumerate() {
        let target = match b {
            Some(b) => &n_s[s] - BigInt::from(m_s[*b]),
            None => n_s[s].clone(),
        };
        let target: usize = target
            .try_into()
            .map_err(|_| LambdaError::EnumerationFailure(format!("cell {s} needs more points than can be held")))?;
        let required: BTreeSet<A::Point> = f.iter().filter(|x| alg.contains(&cell.set, x)).cloned().collect();
        let fresh = target - required.len();
        let drawn = alg
            .sample(&cell.set, fresh, &required)
            .ok_or_else(|| LambdaError::EnumerationFailure(format!("cannot enumerate points of cell {}", cell.set)))?;
        if drawn.len() != fresh || drawn.iter().any(|x| !alg.contains(&cell.set, x)) {
            return Err(LambdaError::EnumerationFailure(format!(
                "enumerator returned an unusable sample for cell {}",
                cell.set
            )));
        }
        let before = lambda.len();
        lambda.extend(drawn);
        if lambda.len() - before != fresh {
            return Err(LambdaError::EnumerationFailure(format!(
                "enumerator repeated points in cell {}",
                cell.set
            )));
        }
        sample_sizes.push(target);
    }

    // error terms per input set
    let mut terms = Vec::with_capacity(req.sets.len());
    for (i, a) in req.sets.iter().enumerate() {
        let mut g = Vec::new();
        let mut g_prime = Vec::new();
        for (s, (cell, b)) in positive.iter().enumerate() {
            if alg.is_subset(&cell.set, a)? {
                if b.is_some() {
                    g.push(s);
                } else {
                    g_prime.push(s);
                }
            }
        }
        let epsilon: Rational = g.iter().chain(&g_prime).map(|&s| e_s[s].clone()).sum();
        let eta: usize = g.iter().map(|&s| m_s[positive[s].1.unwrap()]).sum();
        let theta = f_null.iter().filter(|x| alg.contains(a, x)).count();
        let mu = alg.measure(a);
        let eta_r = Rational::from_integer(BigInt::from(eta));
        let theta_r = Rational::from_integer(BigInt::from(theta));
        let zeta = &theta_r - &eta_r - &epsilon;
        let predicted_trace = &n_rat * &mu - &epsilon - &eta_r + &theta_r;
        terms.push(SetTerms {
            set: a.to_string(),
            measure: mu,
            in_subring: req.in_subring[i],
            g,
            g_prime,
            epsilon,
            eta,
            theta,
            zeta,
            predicted_trace,
        });
    }

    let lambda: Vec<A::Point> = lambda.into_iter().collect();
    let verdict = verify_lambda(alg, req, &lambda);
    let mut report = LambdaReport {
        universe: universe.to_string(),
        m: req.m,
        k,
        points: f.iter().map(ToString::to_string).collect(),
        lambda: lambda.iter().map(ToString::to_string).collect(),
        subring_cells: b_cells
            .iter()
            .zip(&m_s)
            .map(|(b, &m_s)| SubringCell {
                set: b.to_string(),
                measure: alg.measure(b),
                m_s,
            })
            .collect(),
        positive_cells: positive
            .iter()
            .enumerate()
            .map(|(s, (cell, b))| PositiveCell {
                set: cell.set.to_string(),
                measure: measures[s].clone(),
                pattern: cell.pattern.clone(),
                subring_cell: *b,
                n_s: n_s[s].clone(),
                e_s: e_s[s].clone(),
                sample_size: sample_sizes[s],
            })
            .collect(),
        null_cells: null
            .iter()
            .map(|c| NullCell {
                set: c.set.to_string(),
                pattern: c.pattern.clone(),
            })
            .collect(),
        alpha,
        c_min,
        n_bound,
        n_min,
        eps,
        decimal_weights: decimal,
        n,
        sets: terms,
        verdict,
        checks: Vec::new(),
    };
    report.checks = audit(&report, &report.verdict.traces);
    Ok(report)
}

/// Checks properties (1)-(3) for `lambda` by counting memberships.
pub fn verify_lambda<A: SetAlgebra>(alg: &A, req: &LambdaRequest<A>, lambda: &[A::Point]) -> Verdict {
    let lambda: BTreeSet<&A::Point> = lambda.iter().collect();
    let traces: Vec<usize> = req
        .sets
        .iter()
        .map(|a| lambda.iter().filter(|x| alg.contains(a, x)).count())
        .collect();
    let missing_points: Vec<String> = req
        .points
        .iter()
        .filter(|x| !lambda.contains(x))
        .map(ToString::to_string)
        .collect();
    let mu: Vec<Rational> = req.sets.iter().map(|a| alg.measure(a)).collect();

    let mut subring_pairs = Vec::new();
    for i in 0..req.sets.len() {
        for j in i + 1..req.sets.len() {
            if req.in_subring[i] && req.in_subring[j] && mu[i] == mu[j] {
                subring_pairs.push(TracePair {
                    i,
                    j,
                    equal: traces[i] == traces[j],
                });
            }
        }
    }

    let tolerance = Rational::new(BigInt::one(), BigInt::from(req.m.max(1)));
    let mut deviations = Vec::new();
    for j in 0..req.sets.len() {
        if mu[j].is_zero() {
            continue;
        }
        for i in 0..req.sets.len() {
            let deviation = (traces[j] > 0).then(|| {
                let observed = Rational::new(BigInt::from(traces[i]), BigInt::from(traces[j]));
                (observed - &mu[i] / &mu[j]).abs()
            });
            let within_tolerance = deviation.as_ref().is_some_and(|d| d < &tolerance);
            deviations.push(PairDeviation {
                i,
                j,
                deviation,
                within_tolerance,
            });
        }
    }

    Verdict {
        property1: missing_points.is_empty(),
        property2: subring_pairs.iter().all(|p| p.equal),
        property3: deviations.iter().all(|d| d.within_tolerance),
        traces,
        missing_points,
        subring_pairs,
        tolerance,
        deviations,
    }
}

fn check(name: &str, ok: bool, detail: String) -> Check {
    Check {
        name: name.to_string(),
        ok,
        detail,
    }
}

/// Re-derives the construction's conditions, bounds and trace identities
/// from the recorded quantities and independently counted `traces`.
pub fn audit(report: &LambdaReport, traces: &[usize]) -> Vec<Check> {
    let n = Rational::from_integer(report.n.clone());
    let k = Rational::from_integer(BigInt::from(report.k));
    let k_big = BigInt::from(report.k);
    let one = Rational::one();
    let cells = &report.positive_cells;
    let p = cells.len();
    let mut out = Vec::new();

    let m = Rational::from_integer(BigInt::from(report.m));
    let k1 = &k + &one;
    let bound = if report.c_min.is_positive() {
        &report.alpha * (Rational::from_integer(BigInt::from(2)) * &m + &one) * &k1 / (&report.c_min * &report.c_min)
    } else {
        Rational::zero()
    };
    out.push(check(
        "condition (a): N > alpha(2m+1)(k+1)/c^2",
        report.c_min.is_positive() && bound == report.n_bound && n > bound,
        format!("N = {}, bound = {}", report.n, bound),
    ));

    let c_min_ok = cells.iter().map(|c| &c.measure).min() == Some(&report.c_min);
    out.push(check(
        "c is the least positive cell measure",
        c_min_ok,
        format!("c = {}", report.c_min),
    ));

    let eps_ok = p > 0 && report.eps == Rational::new(BigInt::one(), BigInt::from(p));
    let fracs_ok = cells.iter().all(|c| frac(&(&n * &c.measure)) < report.eps);
    out.push(check(
        "condition (b): frac(N mu(C_s)) < 1/p",
        eps_ok && fracs_ok,
        format!("p = {p}"),
    ));
    if !report.decimal_weights {
        out.push(check(
            "condition (b) is exact: frac(N mu(C_s)) = 0",
            cells.iter().all(|c| frac(&(&n * &c.measure)).is_zero()),
            "exact weights".into(),
        ));
    }

    let floors_ok = cells.iter().all(|c| {
        let x = &n * &c.measure;
        c.n_s == floor(&x) && c.e_s == &x - Rational::from_integer(c.n_s.clone())
    });
    out.push(check(
        "N_s = floor(N mu(C_s)), e_s = N mu(C_s) - N_s",
        floors_ok,
        String::new(),
    ));
    out.push(check(
        "N_s > k",
        cells.iter().all(|c| c.n_s > k_big),
        format!("k = {}", report.k),
    ));

    let sizes_ok = cells.iter().all(|c| {
        let expected = match c.subring_cell {
            Some(b) => report.subring_cells.get(b).map(|bc| &c.n_s - BigInt::from(bc.m_s)),
            None => Some(c.n_s.clone()),
        };
        expected == Some(BigInt::from(c.sample_size))
    });
    out.push(check(
        "|lambda_s| = N_s - M_s (subring cells) or N_s",
        sizes_ok,
        String::new(),
    ));

    let mut terms_ok = true;
    let mut bounds_ok = true;
    let mut identity_ok = traces.len() == report.sets.len();
    let mut subring_ok = true;
    let mut cover_ok = true;
    let mut failures = Vec::new();
    for (i, t) in report.sets.iter().enumerate() {
        let members: Vec<usize> = t.g.iter().chain(&t.g_prime).copied().collect();
        if members.iter().any(|&s| s >= p) {
            terms_ok = false;
            continue;
        }
        let eps_i: Rational = members.iter().map(|&s| cells[s].e_s.clone()).sum();
        let eta = Rational::from_integer(BigInt::from(t.eta));
        let theta = Rational::from_integer(BigInt::from(t.theta));
        let zeta = &theta - &eta - &t.epsilon;
        let predicted = &n * &t.measure - &t.epsilon - &eta + &theta;
        terms_ok &= eps_i == t.epsilon && zeta == t.zeta && predicted == t.predicted_trace;
        let covered: Rational = members.iter().map(|&s| cells[s].measure.clone()).sum();
        cover_ok &= covered == t.measure;
        bounds_ok &= t.epsilon < one && eta <= k && theta <= k && -(&k1) < zeta && zeta <= k;
        if let Some(&trace) = traces.get(i) {
            if Rational::from_integer(BigInt::from(trace)) != predicted {
                identity_ok = false;
                failures.push(format!("A_{}: trace {trace} vs {predicted}", i + 1));
            }
        }
        if t.in_subring {
            subring_ok &= t.eta == t.theta;
        }
    }
    out.push(check(
        "epsilon_i, zeta_i, predicted traces consistent",
        terms_ok,
        String::new(),
    ));
    out.push(check(
        "positive cells inside A_i carry mu(A_i)",
        cover_ok,
        String::new(),
    ));
    out.push(check(
        "bounds: epsilon_i < 1, eta_i <= k, theta_i <= k, -(k+1) < zeta_i <= k",
        bounds_ok,
        String::new(),
    ));
    out.push(check(
        "trace identity: |lambda n A_i| = N mu(A_i) - epsilon_i - eta_i + theta_i",
        identity_ok,
        failures.join("; "),
    ));
    out.push(check("eta_i = theta_i for subring members", subring_ok, String::new()));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{CoinToss, RealLine};
    use crate::atoms::AtomSpace;
    use crate::rational::ratio;
    use crate::realsets::RealSet;

    fn rs(s: &str) -> RealSet {
        s.parse().unwrap()
    }

    fn request(m: u64, points: &[&str], sets: &[(&str, bool)]) -> LambdaRequest<RealLine> {
        LambdaRequest {
            m,
            points: points.iter().map(|p| RealLine.parse_point(p).unwrap()).collect(),
            sets: sets.iter().map(|(s, _)| rs(s)).collect(),
            in_subring: sets.iter().map(|(_, b)| *b).collect(),
        }
    }

    fn halves() -> MeasureSpace<RealLine> {
        MeasureSpace::new(RealLine, vec![rs("[0,1/2)"), rs("[1/2,1)")])
    }

    #[test]
    fn equal_measure_subring_members_get_equal_traces() {
        let req = request(10, &[], &[("[0,1/2)", true), ("[1/2,1)", true)]);
        let report = build_lambda(&halves(), &req, "real-line").unwrap();
        let t = &report.verdict.traces;
        assert_eq!(t[0], t[1]);
        assert!(report.all_ok(), "{:#?}", report.checks);
    }

    #[test]
    fn single_set_ratio_is_exact() {
        let req = request(7, &["1/3"], &[("[0,1)", false)]);
        let report = build_lambda(&MeasureSpace::new(RealLine, vec![]), &req, "real-line").unwrap();
        let d = &report.verdict.deviations;
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].deviation, Some(Rational::zero()));
        assert!(report.all_ok());
    }

    #[test]
    fn nested_non_subring_sets_match_ratio() {
        let req = request(100, &[], &[("[0,1/3)", false), ("[0,2/3)", false)]);
        let report = build_lambda(&MeasureSpace::new(RealLine, vec![]), &req, "real-line").unwrap();
        let t = &report.verdict.traces;
        // independent exact comparison
        let dev = (Rational::new(BigInt::from(t[0]), BigInt::from(t[1])) - ratio(1, 2)).abs();
        assert!(dev < ratio(1, 100));
        assert!(report.all_ok());
    }

    #[test]
    fn points_in_null_cells_are_accounted_for() {
        // 5 is an isolated point of A_2, 1/4 lies inside the subring piece
        let space = MeasureSpace::new(RealLine, vec![rs("[0,1)"), rs("[1,2)")]);
        let req = request(
            10,
            &["5", "1/4", "3/2"],
            &[("[0,1)", true), ("[1,2)", true), ("[1/2,3/2) u {5}", false)],
        );
        let report = build_lambda(&space, &req, "real-line").unwrap();
        assert!(report.all_ok(), "{:#?}", report.checks);
        assert_eq!(report.sets[2].theta, 1);
        assert_eq!(report.verdict.traces[0], report.verdict.traces[1]);
    }

    #[test]
    fn null_generator_piece_is_rejected() {
        let space = MeasureSpace::new(RealLine, vec![rs("[0,1)"), rs("[0,1) u {7}")]);
        let req = request(10, &[], &[("[0,1)", true)]);
        assert!(matches!(
            build_lambda(&space, &req, "real-line"),
            Err(LambdaError::PartitionDegenerate(_))
        ));
    }

    #[test]
    fn undeclared_subring_member_is_rejected() {
        let req = request(10, &[], &[("[0,1/3)", true)]);
        assert_eq!(
            build_lambda(&halves(), &req, "real-line").unwrap_err(),
            LambdaError::NotInSubring(0)
        );
        let req = request(10, &[], &[("[0,1)", true)]);
        assert!(build_lambda(&MeasureSpace::new(RealLine, vec![]), &req, "real-line").is_err());
    }

    #[test]
    fn degenerate_requests_are_rejected() {
        let space = MeasureSpace::new(RealLine, vec![]);
        let all_null = request(10, &[], &[("{1, 2}", false)]);
        assert!(matches!(
            build_lambda(&space, &all_null, "real-line"),
            Err(LambdaError::InvalidRequest(_))
        ));
        let zero_m = request(0, &[], &[("[0,1)", false)]);
        assert!(matches!(
            build_lambda(&space, &zero_m, "real-line"),
            Err(LambdaError::InvalidRequest(_))
        ));
        let empty = request(10, &[], &[("{}", false)]);
        assert!(matches!(
            build_lambda(&space, &empty, "real-line"),
            Err(LambdaError::InvalidRequest(_))
        ));
    }

    #[test]
    fn verifier_negative_controls() {
        let req = request(10, &["1/4"], &[("[0,1/2)", true), ("[1/2,1)", true)]);
        let report = build_lambda(&halves(), &req, "real-line").unwrap();
        let mut lambda: Vec<Rational> = report.lambda.iter().map(|s| RealLine.parse_point(s).unwrap()).collect();
        lambda.retain(|x| x != &ratio(1, 4));
        let v = verify_lambda(&RealLine, &req, &lambda);
        assert!(!v.property1);
        assert_eq!(v.missing_points, vec!["1/4".to_string()]);
        assert!(!v.property2);
    }

    #[test]
    fn only_required_points_fail_the_ratio_test() {
        let req = request(100, &["1/4", "3/4"], &[("[0,1/3)", false), ("[0,1)", false)]);
        let lambda = vec![ratio(1, 4), ratio(3, 4)];
        let v = verify_lambda(&RealLine, &req, &lambda);
        assert!(v.property1);
        assert!(!v.property3);
        // traces 1 and 2: |1/2 - 1/3| = 1/6 and |2/1 - 3| = 1
        let dev = |i, j| {
            v.deviations
                .iter()
                .find(|d| d.i == i && d.j == j)
                .unwrap()
                .deviation
                .clone()
                .unwrap()
        };
        assert_eq!(dev(0, 1), ratio(1, 6));
        assert_eq!(dev(1, 0), Rational::one());
    }

    #[test]
    fn coin_toss_universe() {
        let space = MeasureSpace::new(
            CoinToss,
            vec![
                CoinToss.parse_set("C(1:H)").unwrap(),
                CoinToss.parse_set("C(1:T)").unwrap(),
            ],
        );
        let req = LambdaRequest {
            m: 10,
            points: vec![CoinToss.parse_point("O(HT|H)").unwrap()],
            sets: ["C(1:H)", "C(1:T)", "C(2:H) u {O(T|T)}"]
                .iter()
                .map(|s| CoinToss.parse_set(s).unwrap())
                .collect(),
            in_subring: vec![true, true, false],
        };
        let report = build_lambda(&space, &req, "coin-toss").unwrap();
        assert!(report.all_ok(), "{:#?}", report.checks);
        assert_eq!(report.verdict.traces[0], report.verdict.traces[1]);
    }

    #[test]
    fn decimal_atoms_use_the_search_path() {
        let space = MeasureSpace::new(AtomSpace::parse(&["0.41421356", "1"]).unwrap(), vec![]);
        let alg = &space.algebra;
        let req = LambdaRequest {
            m: 3,
            points: vec![],
            sets: vec![alg.parse_set("A(0)").unwrap(), alg.parse_set("A(0, 1)").unwrap()],
            in_subring: vec![false, false],
        };
        let report = build_lambda(&space, &req, "atoms").unwrap();
        assert!(report.decimal_weights);
        assert!(report.all_ok(), "{:#?}", report.checks);
        // a multiple of 10^8 would be the exact-mode answer
        assert!(report.n < BigInt::from(100_000_000));
    }
}
