//! Brute-force search for factorizations `I = A'B'` with `A ⊆ A'`,
//! `B ⊆ B'`, written without the colon criterion so it can certify the
//! engine.
//!
//! Quadratic orders: every candidate factor contains `I`, so it is one of the
//! finitely many integral superideals; the search is exhaustive.
//!
//! Valuation rings: a factorization is a pair of cut points `α + β = γ(I)`
//! with kinds whose product kind matches `I`. Each kind combination reduces
//! to finding a point of an interval, possibly required to lie in `G`. A
//! dense group meets every nonempty open interval, so only the endpoints
//! need membership tests.

use std::fmt;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::domain::{IdealArithmetic, QuadraticDomain, ValuationDomain};
use crate::engine::criterion;
use crate::error::{Error, Result};
use crate::exact::{rat, ExactReal};
use crate::quadratic::QuadIdeal;
use crate::report::{CheckReport, Failure, Verdict, Witness};
use crate::valuation::{CutIdeal, CutKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    ExhaustiveLattice,
    CutCaseAnalysis,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::ExhaustiveLattice => "exhaustive-lattice",
            Provenance::CutCaseAnalysis => "cut-case-analysis",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorizationWitness<I> {
    pub a: I,
    pub b: I,
    pub provenance: Provenance,
}

impl<I: fmt::Display> FactorizationWitness<I> {
    pub fn to_witness(&self) -> Witness {
        Witness::Factorization {
            a: self.a.to_string(),
            b: self.b.to_string(),
            provenance: self.provenance.to_string(),
        }
    }
}

pub trait FactorizationOracle: IdealArithmetic {
    /// Integral `A' ⊇ A`, `B' ⊇ B` with `A'B' = I`, or `None` if there are
    /// none. Requires `AB ⊆ I`.
    fn factorization_search(
        &self,
        i: &Self::Ideal,
        a: &Self::Ideal,
        b: &Self::Ideal,
    ) -> Result<Option<FactorizationWitness<Self::Ideal>>>;
}

fn check_precondition<D: IdealArithmetic>(d: &D, i: &D::Ideal, a: &D::Ideal, b: &D::Ideal) -> Result<()> {
    if d.contains(i, &d.mul(a, b)) {
        Ok(())
    } else {
        Err(Error::PreconditionViolated(format!(
            "{a} * {b} is not contained in {i}"
        )))
    }
}

fn validated<D: IdealArithmetic>(
    d: &D,
    i: &D::Ideal,
    a: &D::Ideal,
    b: &D::Ideal,
    w: FactorizationWitness<D::Ideal>,
) -> FactorizationWitness<D::Ideal> {
    let unit = d.unit();
    assert!(
        d.contains(&w.a, a)
            && d.contains(&w.b, b)
            && d.contains(&unit, &w.a)
            && d.contains(&unit, &w.b)
            && d.eq(&d.mul(&w.a, &w.b), i),
        "invalid factorization witness {} * {} for {i}",
        w.a,
        w.b
    );
    w
}

impl QuadraticDomain {
    /// Integral superideals of `a` that also contain `i`.
    fn factor_candidates(&self, i: &QuadIdeal, a: &QuadIdeal) -> Result<Vec<QuadIdeal>> {
        Ok(a.superideals(self.superideal_budget)?
            .into_iter()
            .filter(|c| c.contains(i))
            .collect())
    }
}

impl FactorizationOracle for QuadraticDomain {
    fn factorization_search(
        &self,
        i: &QuadIdeal,
        a: &QuadIdeal,
        b: &QuadIdeal,
    ) -> Result<Option<FactorizationWitness<QuadIdeal>>> {
        check_precondition(self, i, a, b)?;
        let left = self.factor_candidates(i, a)?;
        let right = self.factor_candidates(i, b)?;
        let found = left.iter().find_map(|x| {
            right
                .iter()
                .find(|y| &x.mul(y) == i)
                .map(|y| FactorizationWitness {
                    a: x.clone(),
                    b: y.clone(),
                    provenance: Provenance::ExhaustiveLattice,
                })
        });
        Ok(found.map(|w| validated(self, i, a, b, w)))
    }
}

/// One side of an interval, with whether the endpoint itself is allowed.
struct Bound {
    at: ExactReal,
    closed: bool,
}

impl ValuationDomain {
    /// A point of the interval between `lo` and `hi`, in `G` when
    /// `in_group` is set. Endpoints are preferred, lowest first.
    fn interval_point(&self, lo: &Bound, hi: &Bound, in_group: bool) -> Option<ExactReal> {
        let admissible = |x: &ExactReal| !in_group || self.group.contains(x);
        match lo.at.cmp(&hi.at) {
            std::cmp::Ordering::Greater => None,
            std::cmp::Ordering::Equal => {
                (lo.closed && hi.closed && admissible(&lo.at)).then(|| lo.at.clone())
            }
            std::cmp::Ordering::Less => {
                if lo.closed && admissible(&lo.at) {
                    Some(lo.at.clone())
                } else if hi.closed && admissible(&hi.at) {
                    Some(hi.at.clone())
                } else if in_group {
                    self.group.point_in_open_interval(&lo.at, &hi.at)
                } else {
                    Some((&lo.at + &hi.at).scale(&rat(1, 2)))
                }
            }
        }
    }

    /// Range of the value `x` of one factor `X' ⊇ X` (kind `kx`) when the
    /// other factor `Y' ⊇ Y` (kind `ky`) takes value `γ - x`.
    fn factor_range(&self, gamma: &ExactReal, x: &CutIdeal, kx: CutKind, y: &CutIdeal, ky: CutKind) -> (Bound, Bound) {
        // X' ⊇ X at the shared endpoint needs X strict or X' weak.
        let x_edge = x.kind() == CutKind::Strict || kx == CutKind::Weak;
        let y_edge = y.kind() == CutKind::Strict || ky == CutKind::Weak;
        let zero = ExactReal::zero();
        let from_y = gamma - y.gamma();
        let lo = if from_y >= zero {
            Bound { at: from_y, closed: y_edge }
        } else {
            Bound { at: zero, closed: true }
        };
        let hi = if x.gamma() <= gamma {
            Bound { at: x.gamma().clone(), closed: x_edge }
        } else {
            Bound { at: gamma.clone(), closed: true }
        };
        (lo, hi)
    }

    fn discrete_search(&self, i: &CutIdeal, a: &CutIdeal, b: &CutIdeal) -> Option<(CutIdeal, CutIdeal)> {
        let gamma = i.gamma();
        let top = a.gamma().min(gamma);
        self.group
            .points_between(&ExactReal::zero(), top, 0)
            .into_iter()
            .map(|alpha| {
                let beta = gamma - &alpha;
                (self.cut(alpha, CutKind::Weak), self.cut(beta, CutKind::Weak))
            })
            .find(|(x, y)| {
                self.contains(x, a) && self.contains(y, b) && &self.mul(x, y) == i
            })
    }

    fn dense_search(&self, i: &CutIdeal, a: &CutIdeal, b: &CutIdeal) -> Option<(CutIdeal, CutIdeal)> {
        use CutKind::{Strict, Weak};
        let gamma = i.gamma();
        let combos: &[(CutKind, CutKind)] = match i.kind() {
            Weak => &[(Weak, Weak)],
            Strict => &[(Strict, Strict), (Weak, Strict), (Strict, Weak)],
        };
        for &(ka, kb) in combos {
            // Solve for the factor whose value must lie in G, if any.
            let found = if kb == Weak && ka == Strict {
                let (lo, hi) = self.factor_range(gamma, b, kb, a, ka);
                self.interval_point(&lo, &hi, true).map(|beta| (gamma - &beta, beta))
            } else {
                let (lo, hi) = self.factor_range(gamma, a, ka, b, kb);
                self.interval_point(&lo, &hi, ka == Weak)
                    .map(|alpha| {
                        let beta = gamma - &alpha;
                        (alpha, beta)
                    })
                    .filter(|(_, beta)| kb == Strict || self.group.contains(beta))
            };
            if let Some((alpha, beta)) = found {
                return Some((self.cut(alpha, ka), self.cut(beta, kb)));
            }
        }
        None
    }
}

impl FactorizationOracle for ValuationDomain {
    fn factorization_search(
        &self,
        i: &CutIdeal,
        a: &CutIdeal,
        b: &CutIdeal,
    ) -> Result<Option<FactorizationWitness<CutIdeal>>> {
        check_precondition(self, i, a, b)?;
        let found = if self.group.is_discrete() {
            self.discrete_search(i, a, b)
        } else {
            self.dense_search(i, a, b)
        };
        Ok(found.map(|(x, y)| {
            validated(
                self,
                i,
                a,
                b,
                FactorizationWitness {
                    a: x,
                    b: y,
                    provenance: Provenance::CutCaseAnalysis,
                },
            )
        }))
    }
}

/// Run the factorization oracle on one triple and report it.
pub fn factorization_check<D: FactorizationOracle>(
    d: &D,
    i: &D::Ideal,
    a: &D::Ideal,
    b: &D::Ideal,
) -> Result<CheckReport> {
    let start = Instant::now();
    let inputs = vec![i.to_string(), a.to_string(), b.to_string()];
    let mut report = CheckReport::new(d.descriptor(), "factorization_search", inputs.clone());
    let found = d.factorization_search(i, a, b)?;
    report.verdict = Verdict::from_holds(found.is_some());
    report.stats.pairs_checked = 1;
    match found {
        Some(w) => report.witness = Some(w.to_witness()),
        None => {
            let witness = Witness::NoFactorization {
                i: i.to_string(),
                a: a.to_string(),
                b: b.to_string(),
            };
            report.witness = Some(witness.clone());
            report.stats.failures.push(Failure { inputs, witness });
        }
    }
    report.stats.runtime_ms = start.elapsed().as_millis() as u64;
    Ok(report)
}

/// Result of comparing the criterion engine with the oracle on one universe.
#[derive(Clone, Debug)]
pub struct Equivalence {
    pub report: CheckReport,
    /// All ordered pairs pass the criterion.
    pub engine: Verdict,
    /// All triples with `AB ⊆ I` admit a factorization.
    pub oracle: Verdict,
    pub engine_failures: usize,
    pub oracle_failures: usize,
    pub triples_checked: usize,
}

/// Compare domain-level verdicts of the criterion and the oracle over the
/// same universe, and check failures against each other: a criterion
/// failure at `(I, H)` must leave `(I, I:(I:H), I:H)` without a
/// factorization, and an oracle failure at `(I, A, B)` must make the
/// criterion fail at `(I, A)`. The report holds iff everything agrees; on
/// disagreement the smallest offending instance is the witness.
pub fn equivalence_harness<D: FactorizationOracle>(d: &D, bound: u64) -> Result<Equivalence> {
    let start = Instant::now();
    let universe = d.universe(bound)?;
    let n = universe.len();

    // Engine side.
    let engine_fail: Vec<(usize, usize, D::Ideal, D::Ideal)> = (0..n * n)
        .into_par_iter()
        .filter_map(|k| {
            let (i, h) = (&universe[k / n], &universe[k % n]);
            let c = criterion(d, i, h);
            (!c.holds).then_some((k / n, k % n, c.a, c.b))
        })
        .collect();
    let failing_pairs: std::collections::HashSet<(usize, usize)> =
        engine_fail.iter().map(|(i, h, _, _)| (*i, *h)).collect();

    // Oracle side, over triples with AB ⊆ I.
    let products: Vec<D::Ideal> = (0..n * n)
        .into_par_iter()
        .map(|k| d.mul(&universe[k / n], &universe[k % n]))
        .collect();
    let outcomes: Vec<Result<Option<(usize, usize, usize)>>> = (0..n * n * n)
        .into_par_iter()
        .filter(|&k| d.contains(&universe[k / (n * n)], &products[k % (n * n)]))
        .map(|k| {
            let (i, a, b) = (k / (n * n), (k / n) % n, k % n);
            let found = d.factorization_search(&universe[i], &universe[a], &universe[b])?;
            Ok(found.is_none().then_some((i, a, b)))
        })
        .collect();
    let triples_checked = outcomes.len();
    let mut oracle_fail = Vec::new();
    for o in outcomes {
        if let Some(t) = o? {
            oracle_fail.push(t);
        }
    }

    let show = |idx: &[usize]| idx.iter().map(|&k| universe[k].to_string()).collect::<Vec<_>>();
    let engine = Verdict::from_holds(engine_fail.is_empty());
    let oracle = Verdict::from_holds(oracle_fail.is_empty());
    let mut failures = Vec::new();
    if engine != oracle {
        let instance = match (engine_fail.first(), oracle_fail.first()) {
            (Some((i, h, _, _)), _) => show(&[*i, *h]),
            (_, Some((i, a, b))) => show(&[*i, *a, *b]),
            _ => vec![],
        };
        failures.push(Failure {
            inputs: instance.clone(),
            witness: Witness::Disagreement { instance, engine, oracle },
        });
    }
    for (i, h, a, b) in &engine_fail {
        let found = d.factorization_search(&universe[*i], a, b)?;
        if found.is_some() {
            let instance = vec![universe[*i].to_string(), a.to_string(), b.to_string()];
            failures.push(Failure {
                inputs: show(&[*i, *h]),
                witness: Witness::Disagreement {
                    instance,
                    engine: Verdict::Fails,
                    oracle: Verdict::Holds,
                },
            });
        }
    }
    for &(i, a, b) in &oracle_fail {
        if !failing_pairs.contains(&(i, a)) {
            failures.push(Failure {
                inputs: show(&[i, a, b]),
                witness: Witness::Disagreement {
                    instance: show(&[i, a]),
                    engine: Verdict::Holds,
                    oracle: Verdict::Fails,
                },
            });
        }
    }

    let mut report = CheckReport::new(d.descriptor(), "equivalence_harness", vec![]);
    report.budget = Some(bound);
    report.prediction = Some(d.prediction());
    report.note = Some(format!(
        "criterion {engine} ({} failing pairs), factorization search {oracle} ({} triples without factorization)",
        engine_fail.len(),
        oracle_fail.len()
    ));
    report.verdict = Verdict::from_holds(failures.is_empty());
    report.witness = failures.first().map(|f| f.witness.clone());
    report.stats.failures = failures;
    report.stats.pairs_checked = (n * n + triples_checked) as u64;
    report.stats.universe_size = Some(n);
    report.stats.runtime_ms = start.elapsed().as_millis() as u64;
    Ok(Equivalence {
        report,
        engine,
        oracle,
        engine_failures: engine_fail.len(),
        oracle_failures: oracle_fail.len(),
        triples_checked,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadratic::QuadNum;
    use crate::valuation::ValueGroup;

    fn quad(d: i64) -> QuadraticDomain {
        QuadraticDomain::with_d(d).unwrap()
    }

    fn prime_above_two(d: &QuadraticDomain) -> QuadIdeal {
        d.order
            .ideal(&[QuadNum::from_ints(2, 0), QuadNum::from_ints(1, 1)])
            .unwrap()
    }

    fn dense() -> ValuationDomain {
        ValuationDomain::new(ValueGroup::new(vec![ExactReal::one(), ExactReal::sqrt2()]).unwrap())
    }

    #[test]
    fn quadratic_examples() {
        let d = quad(-5);
        let p = prime_above_two(&d);
        let two = d.principal(&QuadNum::from_ints(2, 0));
        let w = d.factorization_search(&two, &p, &p).unwrap().unwrap();
        assert_eq!((w.a, w.b), (p.clone(), p.clone()));

        let three = d.principal(&QuadNum::from_ints(3, 0));
        let six = two.mul(&three);
        let w = d.factorization_search(&six, &two, &three).unwrap().unwrap();
        assert_eq!((w.a, w.b), (two.clone(), three));

        let d3 = quad(-3);
        let q = prime_above_two(&d3);
        let two3 = d3.principal(&QuadNum::from_ints(2, 0));
        assert_eq!(d3.factorization_search(&two3, &q, &q).unwrap(), None);
        assert!(matches!(
            d3.factorization_search(&two3, &d3.unit(), &q),
            Err(Error::PreconditionViolated(_))
        ));
    }

    #[test]
    fn superideal_budget_is_enforced() {
        let mut d = quad(-5);
        d.superideal_budget = 3;
        let big = d.principal(&QuadNum::from_ints(12, 0));
        assert!(matches!(
            d.factorization_search(&big, &big, &d.unit()),
            Err(Error::NormBoundExceeded { .. })
        ));
    }

    #[test]
    fn dense_cut_examples() {
        let v = dense();
        let four = ExactReal::from_int(4);
        let s3 = ExactReal::sqrt3();
        let i = v.cut(four.clone(), CutKind::Weak);
        let a = v.cut(s3.clone(), CutKind::Strict);
        let b = v.cut(&four - &s3, CutKind::Strict);
        assert_eq!(v.factorization_search(&i, &a, &b).unwrap(), None);

        let m = v.group.maximal_ideal();
        let half = v.cut(s3.scale(&rat(1, 2)), CutKind::Strict);
        let w = v.factorization_search(&m, &half, &half).unwrap().unwrap();
        assert_eq!((w.a, w.b), (m.clone(), m));

        // weak target from non-group strict bounds: the group point 1 lies
        // strictly between sqrt3 - 1 and sqrt3
        let b5 = v.cut(ExactReal::from_int(5) - s3.clone(), CutKind::Strict);
        let w = v.factorization_search(&i, &a, &b5).unwrap().unwrap();
        assert_eq!((w.a.kind(), w.b.kind()), (CutKind::Weak, CutKind::Weak));
        assert!(w.a.gamma() > &(&s3 - &ExactReal::one()) && w.a.gamma() < &s3);
        assert_eq!(v.mul(&w.a, &w.b), i);
    }

    #[test]
    fn discrete_example() {
        let v = ValuationDomain::new(ValueGroup::new(vec![ExactReal::one()]).unwrap());
        let c = |n| v.cut(ExactReal::from_int(n), CutKind::Weak);
        assert!(matches!(
            v.factorization_search(&c(4), &c(1), &c(2)),
            Err(Error::PreconditionViolated(_))
        ));
        let w = v.factorization_search(&c(4), &c(2), &c(2)).unwrap().unwrap();
        assert_eq!((w.a.clone(), w.b.clone()), (c(2), c(2)));
        let w = v.factorization_search(&c(2), &c(1), &c(2)).unwrap().unwrap();
        assert_eq!((w.a, w.b), (c(0), c(2)));
        assert_eq!(w.provenance, Provenance::CutCaseAnalysis);
    }

    #[test]
    fn harness_on_small_universes() {
        let eq = equivalence_harness(&quad(-3), 6).unwrap();
        assert!(eq.report.holds());
        assert_eq!((eq.engine, eq.oracle), (Verdict::Fails, Verdict::Fails));
        let eq = equivalence_harness(&quad(-1), 10).unwrap();
        assert!(eq.report.holds());
        assert_eq!(eq.engine, Verdict::Holds);
    }
}
