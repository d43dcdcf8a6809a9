//! Domain-generic checks of the sharp factorization condition.
//!
//! The central test is the colon criterion: a domain is sharp iff every pair
//! of nonzero ideals `I, H` satisfies `I = [I:(I:H)] (I:H)`, with colons taken
//! inside the domain. Sweeps quantify over a finite enumerated universe, so a
//! passing sweep means "holds on this budget", never "the domain is sharp";
//! theory-derived predictions are attached separately.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::domain::{IdealArithmetic, QuadraticDomain};
use crate::error::{Error, Result};
use crate::quadratic::QuadIdeal;
use crate::report::{CheckReport, Failure, Verdict, Witness};

/// The two colons of the criterion and their product.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Criterion<I> {
    /// `I:(I:H)`
    pub a: I,
    /// `I:H`
    pub b: I,
    pub product: I,
    pub holds: bool,
}

pub fn criterion<D: IdealArithmetic>(d: &D, i: &D::Ideal, h: &D::Ideal) -> Criterion<D::Ideal> {
    let b = d.integral_colon(i, h);
    let a = d.integral_colon(i, &b);
    let product = d.mul(&a, &b);
    let holds = d.eq(&product, i);
    Criterion { a, b, product, holds }
}

fn criterion_witness<I: std::fmt::Display>(i: &I, h: &I, c: &Criterion<I>) -> Witness {
    Witness::Criterion {
        i: i.to_string(),
        h: h.to_string(),
        a: c.a.to_string(),
        b: c.b.to_string(),
        product: c.product.to_string(),
    }
}

fn elapsed_ms(start: Instant) -> u64 {
    start.elapsed().as_millis() as u64
}

/// Finish a report from its failure list: the first failure becomes the
/// witness.
fn conclude(report: &mut CheckReport, failures: Vec<Failure>, start: Instant) {
    report.verdict = Verdict::from_holds(failures.is_empty());
    if let Some(first) = failures.first() {
        report.witness = Some(first.witness.clone());
    }
    report.stats.failures = failures;
    report.stats.runtime_ms = elapsed_ms(start);
}

/// Evaluate the criterion for one pair `(I, H)`.
pub fn sharp_pair_check<D: IdealArithmetic>(d: &D, i: &D::Ideal, h: &D::Ideal) -> CheckReport {
    let start = Instant::now();
    let mut report = CheckReport::new(
        d.descriptor(),
        "sharp_pair_check",
        vec![i.to_string(), h.to_string()],
    );
    let c = criterion(d, i, h);
    report.verdict = Verdict::from_holds(c.holds);
    report.witness = Some(criterion_witness(i, h, &c));
    report.stats.pairs_checked = 1;
    if !c.holds {
        report.stats.failures.push(Failure {
            inputs: report.inputs.clone(),
            witness: criterion_witness(i, h, &c),
        });
    }
    report.stats.runtime_ms = elapsed_ms(start);
    report
}

/// Given `A*B ⊆ I`, try the canonical candidates `A' = I:(I:A)` and
/// `B' = I:A`. Returned pairs always satisfy `A ⊆ A'`, `B ⊆ B'` and
/// `A'*B' = I`.
pub fn factor_witness<D: IdealArithmetic>(
    d: &D,
    i: &D::Ideal,
    a: &D::Ideal,
    b: &D::Ideal,
) -> Result<Option<(D::Ideal, D::Ideal)>> {
    if !d.contains(i, &d.mul(a, b)) {
        return Err(Error::PreconditionViolated(format!(
            "{a} * {b} is not contained in {i}"
        )));
    }
    let b_prime = d.integral_colon(i, a);
    let a_prime = d.integral_colon(i, &b_prime);
    if !d.eq(&d.mul(&a_prime, &b_prime), i) {
        return Ok(None);
    }
    assert!(
        d.contains(&a_prime, a) && d.contains(&b_prime, b),
        "colon candidates must contain the factors"
    );
    Ok(Some((a_prime, b_prime)))
}

fn sweep_report<D: IdealArithmetic>(d: &D, check: &str, bound: u64) -> CheckReport {
    let mut r = CheckReport::new(d.descriptor(), check, vec![]);
    r.budget = Some(bound);
    r.prediction = Some(d.prediction());
    r
}

/// All ordered pairs of `universe`, in row-major order.
fn pairs<I: Sync>(universe: &[I]) -> impl ParallelIterator<Item = (&I, &I)> {
    universe
        .par_iter()
        .flat_map_iter(move |i| universe.iter().map(move |h| (i, h)))
}

fn criterion_failures<D: IdealArithmetic>(d: &D, left: &[D::Ideal], right: &[D::Ideal]) -> Vec<Failure> {
    left.par_iter()
        .flat_map_iter(|i| right.iter().map(move |h| (i, h)))
        .filter_map(|(i, h)| {
            let c = criterion(d, i, h);
            (!c.holds).then(|| Failure {
                inputs: vec![i.to_string(), h.to_string()],
                witness: criterion_witness(i, h, &c),
            })
        })
        .collect()
}

/// Run the criterion on every ordered pair of the enumerated universe.
pub fn sharp_sweep<D: IdealArithmetic>(d: &D, bound: u64) -> Result<CheckReport> {
    let start = Instant::now();
    let universe = d.universe(bound)?;
    let mut report = sweep_report(d, "sharp_sweep", bound);
    let failures = criterion_failures(d, &universe, &universe);
    report.stats.pairs_checked = (universe.len() * universe.len()) as u64;
    report.stats.universe_size = Some(universe.len());
    conclude(&mut report, failures, start);
    Ok(report)
}

/// Every enumerated ideal must have an invertible v-closure.
pub fn pseudo_dedekind_sweep<D: IdealArithmetic>(d: &D, bound: u64) -> Result<CheckReport> {
    let start = Instant::now();
    let universe = d.universe(bound)?;
    let mut report = sweep_report(d, "pseudo_dedekind_sweep", bound);
    let failures: Vec<Failure> = universe
        .par_iter()
        .filter_map(|i| {
            let v = d.v_closure(i);
            if d.is_invertible(&v) {
                return None;
            }
            let product = d.mul(&v, &d.inverse(&v));
            Some(Failure {
                inputs: vec![i.to_string()],
                witness: Witness::NonInvertible {
                    ideal: i.to_string(),
                    v_closure: v.to_string(),
                    product_with_inverse: product.to_string(),
                },
            })
        })
        .collect();
    report.stats.pairs_checked = universe.len() as u64;
    report.stats.universe_size = Some(universe.len());
    conclude(&mut report, failures, start);
    Ok(report)
}

/// Sweep restricted to ideals `I` with `I_v = D`, which decides sharpness
/// for pseudo-Dedekind domains. Refuses domains that fail the
/// pseudo-Dedekind sweep unless `force` is set, in which case the run is
/// labelled diagnostic.
pub fn unit_closure_restricted_sweep<D: IdealArithmetic>(
    d: &D,
    bound: u64,
    force: bool,
) -> Result<CheckReport> {
    let start = Instant::now();
    let pd = pseudo_dedekind_sweep(d, bound)?;
    if !pd.holds() && !force {
        let witness = pd.stats.failures[0].inputs[0].clone();
        return Err(Error::NotPseudoDedekind(witness));
    }
    let universe = d.universe(bound)?;
    let unit = d.unit();
    let restricted: Vec<D::Ideal> = universe
        .iter()
        .filter(|i| d.eq(&d.v_closure(i), &unit))
        .cloned()
        .collect();
    let mut report = sweep_report(d, "unit_closure_restricted_sweep", bound);
    if !pd.holds() {
        report.note = Some(
            "diagnostic run: the domain failed the pseudo-Dedekind sweep, so this restriction is not conclusive".into(),
        );
    }
    let failures = criterion_failures(d, &restricted, &universe);
    report.stats.pairs_checked = (restricted.len() * universe.len()) as u64;
    report.stats.universe_size = Some(restricted.len());
    conclude(&mut report, failures, start);
    Ok(report)
}

/// `xD ∩ yD = xyD`.
pub fn v_coprime<D: IdealArithmetic>(d: &D, x: &D::Element, y: &D::Element) -> bool {
    let (px, py) = (d.principal(x), d.principal(y));
    d.eq(&d.intersect(&px, &py), &d.mul(&px, &py))
}

/// `xD + yD = D`.
pub fn comaximal<D: IdealArithmetic>(d: &D, x: &D::Element, y: &D::Element) -> bool {
    let (px, py) = (d.principal(x), d.principal(y));
    d.eq(&d.add(&px, &py), &d.unit())
}

/// Over all element pairs up to `height`, v-coprime pairs must be comaximal
/// (true in every sharp domain).
pub fn coprime_comaximal_sweep<D: IdealArithmetic>(d: &D, height: u64) -> CheckReport {
    let start = Instant::now();
    let elements = d.elements(height);
    let principals: Vec<D::Ideal> = elements.par_iter().map(|x| d.principal(x)).collect();
    let unit = d.unit();
    let mut report = CheckReport::new(d.descriptor(), "coprime_comaximal_sweep", vec![]);
    report.budget = Some(height);
    report.prediction = Some(d.prediction());
    let n = elements.len();
    let failures: Vec<Failure> = (0..n)
        .into_par_iter()
        .flat_map_iter(|i| (i..n).map(move |j| (i, j)))
        .filter_map(|(i, j)| {
            let (px, py) = (&principals[i], &principals[j]);
            if !d.eq(&d.intersect(px, py), &d.mul(px, py)) {
                return None;
            }
            let sum = d.add(px, py);
            (!d.eq(&sum, &unit)).then(|| Failure {
                inputs: vec![elements[i].to_string(), elements[j].to_string()],
                witness: Witness::NotComaximal {
                    x: elements[i].to_string(),
                    y: elements[j].to_string(),
                    sum: sum.to_string(),
                },
            })
        })
        .collect();
    report.stats.pairs_checked = (n * (n + 1) / 2) as u64;
    conclude(&mut report, failures, start);
    report
}

/// For v-coprime `x, y`: `(x^2, y) : (x, y) = (x, y)`, and, when
/// `expect_square` is set (sharp instances), `(x^2, y) = (x, y)^2`.
pub fn coprime_colon_identity_check<D: IdealArithmetic>(
    d: &D,
    x: &D::Element,
    y: &D::Element,
    expect_square: bool,
) -> Result<CheckReport> {
    if !v_coprime(d, x, y) {
        return Err(Error::PreconditionViolated(format!(
            "{x} and {y} are not v-coprime"
        )));
    }
    let start = Instant::now();
    let (px, py) = (d.principal(x), d.principal(y));
    let x2y = d.add(&d.mul(&px, &px), &py);
    let xy = d.add(&px, &py);
    let mut report = CheckReport::new(
        d.descriptor(),
        "coprime_colon_identity_check",
        vec![x.to_string(), y.to_string()],
    );
    let mut failures = Vec::new();
    let colon = d.integral_colon(&x2y, &xy);
    if !d.eq(&colon, &xy) {
        failures.push(Failure {
            inputs: report.inputs.clone(),
            witness: Witness::Identity {
                name: "(x^2,y):(x,y) = (x,y)".into(),
                lhs: colon.to_string(),
                rhs: xy.to_string(),
            },
        });
    }
    let square = d.mul(&xy, &xy);
    if expect_square && !d.eq(&x2y, &square) {
        failures.push(Failure {
            inputs: report.inputs.clone(),
            witness: Witness::Identity {
                name: "(x^2,y) = (x,y)^2".into(),
                lhs: x2y.to_string(),
                rhs: square.to_string(),
            },
        });
    }
    report.stats.pairs_checked = 1;
    conclude(&mut report, failures, start);
    Ok(report)
}

/// In a maximal order, check `ord_P(A:B) = max(ord_P A - ord_P B, 0)` at
/// each listed invertible prime, with `A:B` the integral colon.
pub fn localization_ord_check(
    d: &QuadraticDomain,
    a: &QuadIdeal,
    b: &QuadIdeal,
    primes: &[QuadIdeal],
) -> Result<CheckReport> {
    let start = Instant::now();
    let mut inputs = vec![a.to_string(), b.to_string()];
    inputs.extend(primes.iter().map(|p| p.to_string()));
    let mut report = CheckReport::new(d.descriptor(), "localization_ord_check", inputs);
    let colon = d.integral_colon(a, b);
    let mut failures = Vec::new();
    for p in primes {
        let (oa, ob, oc) = (a.ord_at(p)?, b.ord_at(p)?, colon.ord_at(p)?);
        let expected = oa.saturating_sub(ob);
        if oc != expected {
            failures.push(Failure {
                inputs: vec![a.to_string(), b.to_string(), p.to_string()],
                witness: Witness::Vanishing {
                    prime: p.to_string(),
                    colon_order: oc,
                    expected,
                },
            });
        }
    }
    report.stats.pairs_checked = primes.len() as u64;
    conclude(&mut report, failures, start);
    Ok(report)
}

/// Maximal invertible ideals of norm at most `bound`.
pub fn invertible_primes(d: &QuadraticDomain, bound: u64) -> Vec<QuadIdeal> {
    d.order
        .ideals_up_to_norm(bound)
        .into_iter()
        .filter(|p| p.is_maximal() && p.is_invertible())
        .collect()
}

/// Identities that hold in every domain, checked on `samples` seeded random
/// pairs from the universe:
/// `I:(I:(I:H)) = I:H` (fractional and integral colons), `I ⊆ I_t ⊆ I_v`,
/// `(I_v)_v = I_v`, `(I:H) H ⊆ I`, and monotonicity of the v-closure.
pub fn identity_suite<D: IdealArithmetic>(
    d: &D,
    bound: u64,
    samples: usize,
    seed: u64,
) -> Result<CheckReport> {
    let start = Instant::now();
    let universe = d.universe(bound)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = universe.len();
    let picks: Vec<(usize, usize)> = (0..samples)
        .map(|_| (rng.gen_range(0..n), rng.gen_range(0..n)))
        .collect();
    let mut report = sweep_report(d, "identity_suite", bound);
    report.inputs = vec![format!("samples={samples}"), format!("seed={seed}")];
    let failures: Vec<Failure> = picks
        .par_iter()
        .flat_map_iter(|&(x, y)| {
            let (i, h) = (&universe[x], &universe[y]);
            let mut out = Vec::new();
            let mut expect = |name: &str, ok: bool, lhs: String, rhs: String| {
                if !ok {
                    out.push(Failure {
                        inputs: vec![i.to_string(), h.to_string()],
                        witness: Witness::Identity {
                            name: name.into(),
                            lhs,
                            rhs,
                        },
                    });
                }
            };
            let ih = d.colon(i, h);
            let triple = d.colon(i, &d.colon(i, &ih));
            expect("I:(I:(I:H)) = I:H", d.eq(&triple, &ih), triple.to_string(), ih.to_string());
            let ihd = d.integral_colon(i, h);
            let triple_d = d.integral_colon(i, &d.integral_colon(i, &ihd));
            expect(
                "integral I:(I:(I:H)) = I:H",
                d.eq(&triple_d, &ihd),
                triple_d.to_string(),
                ihd.to_string(),
            );
            let (t, v) = (d.t_closure(i), d.v_closure(i));
            expect(
                "I ⊆ I_t ⊆ I_v",
                d.contains(&t, i) && d.contains(&v, &t),
                t.to_string(),
                v.to_string(),
            );
            let vv = d.v_closure(&v);
            expect("(I_v)_v = I_v", d.eq(&vv, &v), vv.to_string(), v.to_string());
            let back = d.mul(&ih, h);
            expect("(I:H) H ⊆ I", d.contains(i, &back), back.to_string(), i.to_string());
            if d.contains(h, i) {
                let hv = d.v_closure(h);
                expect("I ⊆ H implies I_v ⊆ H_v", d.contains(&hv, &v), v.to_string(), hv.to_string());
            }
            out
        })
        .collect();
    report.stats.pairs_checked = samples as u64;
    report.stats.universe_size = Some(n);
    conclude(&mut report, failures, start);
    Ok(report)
}

/// Ordered pairs of the universe, exposed for harnesses that need the same
/// iteration order as the sweeps.
pub fn universe_pairs<I: Sync + Clone + Send>(universe: &[I]) -> Vec<(I, I)> {
    pairs(universe).map(|(a, b)| (a.clone(), b.clone())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::ValuationDomain;
    use crate::exact::ExactReal;
    use crate::quadratic::QuadNum;
    use crate::valuation::{CutKind, ValueGroup};

    fn z5() -> QuadraticDomain {
        QuadraticDomain::with_d(-5).unwrap()
    }

    fn principal(d: &QuadraticDomain, x: i64, y: i64) -> QuadIdeal {
        d.principal(&QuadNum::from_ints(x, y))
    }

    fn prime_above_two(d: &QuadraticDomain) -> QuadIdeal {
        d.order
            .ideal(&[QuadNum::from_ints(2, 0), QuadNum::from_ints(1, 1)])
            .unwrap()
    }

    fn val(gens: Vec<ExactReal>) -> ValuationDomain {
        ValuationDomain::new(ValueGroup::new(gens).unwrap())
    }

    #[test]
    fn pair_check_in_dedekind_order() {
        let d = z5();
        let p = prime_above_two(&d);
        let two = principal(&d, 2, 0);
        let c = criterion(&d, &two, &p);
        assert_eq!((c.a.clone(), c.b.clone()), (p.clone(), p.clone()));
        assert!(c.holds);
        assert!(sharp_pair_check(&d, &two, &p).holds());
    }

    #[test]
    fn pair_check_fails_on_dense_cut() {
        let v = val(vec![ExactReal::one(), ExactReal::sqrt2()]);
        let i = v.cut(ExactReal::from_int(4), CutKind::Weak);
        let h = v.cut(ExactReal::sqrt3(), CutKind::Strict);
        let r = sharp_pair_check(&v, &i, &h);
        assert!(!r.holds());
        match r.witness {
            Some(Witness::Criterion { product, .. }) => assert_eq!(product, "cut(4,strict)"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn factor_witness_examples() {
        let d = z5();
        let (two, three, six) = (principal(&d, 2, 0), principal(&d, 3, 0), principal(&d, 6, 0));
        assert_eq!(factor_witness(&d, &six, &two, &three).unwrap(), Some((two.clone(), three)));
        assert!(matches!(
            factor_witness(&d, &two, &d.unit(), &d.unit()),
            Err(Error::PreconditionViolated(_))
        ));

        let d3 = QuadraticDomain::with_d(-3).unwrap();
        let p = prime_above_two(&d3);
        assert_eq!(factor_witness(&d3, &principal(&d3, 2, 0), &p, &p).unwrap(), None);

        let v = val(vec![ExactReal::one()]);
        let c = |n| v.cut(ExactReal::from_int(n), CutKind::Weak);
        // cut(1) * cut(2) = cut(3) is not inside cut(4)
        assert!(matches!(
            factor_witness(&v, &c(4), &c(1), &c(2)),
            Err(Error::PreconditionViolated(_))
        ));
        for (i, a, b) in [(4, 2, 2), (4, 1, 3), (3, 1, 2), (2, 1, 2)] {
            let (x, y) = factor_witness(&v, &c(i), &c(a), &c(b)).unwrap().unwrap();
            assert!(v.contains(&x, &c(a)) && v.contains(&y, &c(b)));
            assert_eq!(v.mul(&x, &y), c(i));
        }
    }

    #[test]
    fn restricted_sweep() {
        let d = z5();
        let full = sharp_sweep(&d, 20).unwrap();
        let restricted = unit_closure_restricted_sweep(&d, 20, false).unwrap();
        assert!(restricted.holds());
        assert!(restricted.stats.universe_size < full.stats.universe_size);

        let v = val(vec![ExactReal::one()]);
        let r = unit_closure_restricted_sweep(&v, 6, false).unwrap();
        assert_eq!(r.stats.universe_size, Some(1));
        assert!(r.holds());

        let dense = val(vec![ExactReal::one(), ExactReal::sqrt2()]);
        assert!(matches!(
            unit_closure_restricted_sweep(&dense, 6, false),
            Err(Error::NotPseudoDedekind(_))
        ));
        let forced = unit_closure_restricted_sweep(&dense, 6, true).unwrap();
        assert!(forced.note.unwrap().starts_with("diagnostic"));
    }

    #[test]
    fn coprimality_examples() {
        let d = z5();
        let (two, three, one_w) = (
            QuadNum::from_ints(2, 0),
            QuadNum::from_ints(3, 0),
            QuadNum::from_ints(1, 1),
        );
        assert!(v_coprime(&d, &two, &three) && comaximal(&d, &two, &three));
        assert!(!v_coprime(&d, &two, &one_w));
        assert!(coprime_colon_identity_check(&d, &two, &three, true).unwrap().holds());
        assert!(matches!(
            coprime_colon_identity_check(&d, &three, &one_w, true),
            Err(Error::PreconditionViolated(_))
        ));

        let v = val(vec![ExactReal::one()]);
        let r = coprime_colon_identity_check(&v, &ExactReal::one(), &ExactReal::zero(), true).unwrap();
        assert!(r.holds());
    }

    #[test]
    fn ord_check_examples() {
        let d = z5();
        let p = prime_above_two(&d);
        let (two, six) = (principal(&d, 2, 0), principal(&d, 6, 0));
        assert!(localization_ord_check(&d, &six, &two, &[p.clone()]).unwrap().holds());
        assert_eq!(d.integral_colon(&six, &two).ord_at(&p).unwrap(), 0);
        assert!(localization_ord_check(&d, &six, &six, &invertible_primes(&d, 11)).unwrap().holds());
        let p2 = p.mul(&p);
        assert_eq!(d.integral_colon(&p2, &p).ord_at(&p).unwrap(), 1);
        assert!(localization_ord_check(&d, &p2, &p, &[p.clone()]).unwrap().holds());

        let d3 = QuadraticDomain::with_d(-3).unwrap();
        let q = prime_above_two(&d3);
        assert!(matches!(
            localization_ord_check(&d3, &q, &q, &[q.clone()]),
            Err(Error::NonInvertiblePrime(_))
        ));
    }

    #[test]
    fn sweeps_report_first_failure() {
        let d3 = QuadraticDomain::with_d(-3).unwrap();
        let r = sharp_sweep(&d3, 10).unwrap();
        assert!(!r.holds());
        assert_eq!(r.stats.failures[0].inputs, ["ideal(2, 2w)", "ideal(2, 1+w)"]);
        assert_eq!(r.witness.as_ref(), Some(&r.stats.failures[0].witness));
        let pd = pseudo_dedekind_sweep(&d3, 10).unwrap();
        assert_eq!(pd.stats.failures[0].inputs, ["ideal(2, 1+w)"]);
    }

    #[test]
    fn identity_suite_is_seeded() {
        let d = z5();
        let a = identity_suite(&d, 10, 50, 3).unwrap();
        let b = identity_suite(&d, 10, 50, 3).unwrap();
        assert!(a.holds());
        assert_eq!(a.stats.failures, b.stats.failures);
        assert_eq!(a.inputs, b.inputs);
    }
}
