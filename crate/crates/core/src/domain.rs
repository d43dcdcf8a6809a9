//! The ideal-arithmetic contract the checks are written against, and its two
//! implementations: quadratic orders and valuation rings.

use std::fmt;
use std::hash::Hash;

use crate::error::{Error, Result};
use crate::exact::{BigRat, ExactReal};
use crate::quadratic::{OrderSpec, QuadIdeal, QuadNum, DEFAULT_SUPERIDEAL_BUDGET};
use crate::report::Prediction;
use crate::valuation::{default_probes, CutIdeal, CutKind, ValueGroup};

/// Largest enumerated universe a sweep accepts.
pub const MAX_UNIVERSE: usize = 10_000;

/// Nonzero-ideal arithmetic of a domain `D`, plus finite enumerators used by
/// the sweeps. `colon` is the fractional colon; the criterion uses
/// [`IdealArithmetic::integral_colon`], which intersects with `D`.
pub trait IdealArithmetic: Sync {
    type Ideal: Clone + Eq + Hash + Ord + fmt::Display + fmt::Debug + Send + Sync;
    type Element: Clone + fmt::Display + fmt::Debug + Send + Sync;

    /// Domain literal, e.g. `quad:d=-5`.
    fn descriptor(&self) -> String;
    fn unit(&self) -> Self::Ideal;
    fn mul(&self, a: &Self::Ideal, b: &Self::Ideal) -> Self::Ideal;
    fn colon(&self, a: &Self::Ideal, b: &Self::Ideal) -> Self::Ideal;
    fn add(&self, a: &Self::Ideal, b: &Self::Ideal) -> Self::Ideal;
    fn intersect(&self, a: &Self::Ideal, b: &Self::Ideal) -> Self::Ideal;
    /// `small ⊆ big`.
    fn contains(&self, big: &Self::Ideal, small: &Self::Ideal) -> bool;
    fn v_closure(&self, a: &Self::Ideal) -> Self::Ideal;
    fn t_closure(&self, a: &Self::Ideal) -> Self::Ideal;
    fn is_invertible(&self, a: &Self::Ideal) -> bool;
    fn principal(&self, x: &Self::Element) -> Self::Ideal;

    /// Integral ideals within the enumeration bound, sorted.
    fn universe(&self, bound: u64) -> Result<Vec<Self::Ideal>>;
    /// Nonzero elements of `D` up to the given height, sorted.
    fn elements(&self, height: u64) -> Vec<Self::Element>;
    /// What the theory predicts about sharpness of this domain.
    fn prediction(&self) -> Prediction;

    fn eq(&self, a: &Self::Ideal, b: &Self::Ideal) -> bool {
        a == b
    }

    fn inverse(&self, a: &Self::Ideal) -> Self::Ideal {
        self.colon(&self.unit(), a)
    }

    /// `{x in D : x*b ⊆ a}`.
    fn integral_colon(&self, a: &Self::Ideal, b: &Self::Ideal) -> Self::Ideal {
        self.intersect(&self.colon(a, b), &self.unit())
    }
}

/// A quadratic order with the superideal budget used by its oracle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticDomain {
    pub order: OrderSpec,
    pub superideal_budget: u64,
}

impl QuadraticDomain {
    pub fn new(order: OrderSpec) -> Self {
        QuadraticDomain {
            order,
            superideal_budget: DEFAULT_SUPERIDEAL_BUDGET,
        }
    }

    pub fn with_d(d: i64) -> Result<Self> {
        Ok(Self::new(OrderSpec::new(d)?))
    }
}

/// Number of normal-form triples examined when listing ideals of norm `<= bound`.
fn lattice_candidates(bound: u64) -> u128 {
    let b = bound as u128;
    (1..)
        .take_while(|c: &u128| c * c <= b)
        .map(|c| {
            let k = b / (c * c);
            k * (k + 1) / 2
        })
        .sum()
}

impl IdealArithmetic for QuadraticDomain {
    type Ideal = QuadIdeal;
    type Element = QuadNum;

    fn descriptor(&self) -> String {
        self.order.to_string()
    }

    fn unit(&self) -> QuadIdeal {
        self.order.unit_ideal()
    }

    fn mul(&self, a: &QuadIdeal, b: &QuadIdeal) -> QuadIdeal {
        a.mul(b)
    }

    fn colon(&self, a: &QuadIdeal, b: &QuadIdeal) -> QuadIdeal {
        a.colon(b)
    }

    fn add(&self, a: &QuadIdeal, b: &QuadIdeal) -> QuadIdeal {
        a.add(b)
    }

    fn intersect(&self, a: &QuadIdeal, b: &QuadIdeal) -> QuadIdeal {
        a.intersect(b)
    }

    fn contains(&self, big: &QuadIdeal, small: &QuadIdeal) -> bool {
        big.contains(small)
    }

    fn v_closure(&self, a: &QuadIdeal) -> QuadIdeal {
        a.v_closure()
    }

    fn t_closure(&self, a: &QuadIdeal) -> QuadIdeal {
        a.t_closure()
    }

    fn is_invertible(&self, a: &QuadIdeal) -> bool {
        a.is_invertible()
    }

    fn inverse(&self, a: &QuadIdeal) -> QuadIdeal {
        a.inverse()
    }

    fn principal(&self, x: &QuadNum) -> QuadIdeal {
        self.order.principal(x).expect("principal ideal of a nonzero element")
    }

    fn universe(&self, bound: u64) -> Result<Vec<QuadIdeal>> {
        let candidates = lattice_candidates(bound);
        if candidates > 50 * MAX_UNIVERSE as u128 {
            return Err(Error::BudgetExceeded {
                size: usize::try_from(candidates).unwrap_or(usize::MAX),
                limit: MAX_UNIVERSE,
            });
        }
        let ideals = self.order.ideals_up_to_norm(bound);
        if ideals.len() > MAX_UNIVERSE {
            return Err(Error::BudgetExceeded {
                size: ideals.len(),
                limit: MAX_UNIVERSE,
            });
        }
        Ok(ideals)
    }

    fn elements(&self, height: u64) -> Vec<QuadNum> {
        let h = height as i64;
        let mut out: Vec<(i64, i64, i64)> = (-h..=h)
            .flat_map(|x| (-h..=h).map(move |y| (x.abs().max(y.abs()), y, x)))
            .filter(|&(m, _, _)| m > 0)
            .collect();
        out.sort();
        out.into_iter().map(|(_, y, x)| QuadNum::from_ints(x, y)).collect()
    }

    fn prediction(&self) -> Prediction {
        if self.order.is_maximal() {
            Prediction {
                sharp: true,
                basis: "maximal quadratic order, a Dedekind domain; Dedekind domains are sharp".into(),
            }
        } else {
            Prediction {
                sharp: false,
                basis: "non-maximal order: Noetherian and not integrally closed, while a sharp Noetherian domain is Dedekind".into(),
            }
        }
    }
}

/// A valuation ring presented by its value group, with the grid used to
/// enumerate ideals: group points with bounded coefficients plus non-group
/// probe points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValuationDomain {
    pub group: ValueGroup,
    pub probes: Vec<ExactReal>,
    pub coeff_bound: u32,
}

pub const DEFAULT_COEFF_BOUND: u32 = 2;

impl ValuationDomain {
    pub fn new(group: ValueGroup) -> Self {
        ValuationDomain {
            group,
            probes: default_probes(),
            coeff_bound: DEFAULT_COEFF_BOUND,
        }
    }

    pub fn with_probes(mut self, probes: Vec<ExactReal>) -> Self {
        self.probes = probes;
        self
    }

    pub fn cut(&self, gamma: ExactReal, kind: CutKind) -> CutIdeal {
        self.group.cut(gamma, kind)
    }
}

impl IdealArithmetic for ValuationDomain {
    type Ideal = CutIdeal;
    /// Elements are represented by their value.
    type Element = ExactReal;

    fn descriptor(&self) -> String {
        self.group.to_string()
    }

    fn unit(&self) -> CutIdeal {
        self.group.unit()
    }

    fn mul(&self, a: &CutIdeal, b: &CutIdeal) -> CutIdeal {
        self.group.mul(a, b)
    }

    fn colon(&self, a: &CutIdeal, b: &CutIdeal) -> CutIdeal {
        self.group.colon(a, b)
    }

    fn add(&self, a: &CutIdeal, b: &CutIdeal) -> CutIdeal {
        self.group.add(a, b)
    }

    fn intersect(&self, a: &CutIdeal, b: &CutIdeal) -> CutIdeal {
        self.group.intersect(a, b)
    }

    fn contains(&self, big: &CutIdeal, small: &CutIdeal) -> bool {
        self.group.includes(big, small)
    }

    fn v_closure(&self, a: &CutIdeal) -> CutIdeal {
        self.group.v_closure(a)
    }

    fn t_closure(&self, a: &CutIdeal) -> CutIdeal {
        self.group.t_closure(a)
    }

    fn is_invertible(&self, a: &CutIdeal) -> bool {
        self.group.is_invertible(a)
    }

    fn principal(&self, x: &ExactReal) -> CutIdeal {
        self.group.principal(x)
    }

    fn universe(&self, bound: u64) -> Result<Vec<CutIdeal>> {
        let top = ExactReal::from_rational(BigRat::from_integer(bound.into()));
        let zero = ExactReal::zero();
        if let Some(step) = self.group.step() {
            let steps = top.floor_div(step);
            if steps > (MAX_UNIVERSE as u64).into() {
                return Err(Error::BudgetExceeded {
                    size: usize::try_from(&steps).unwrap_or(usize::MAX),
                    limit: MAX_UNIVERSE,
                });
            }
        }
        let mut points = self.group.points_between(&zero, &top, self.coeff_bound);
        points.extend(self.probes.iter().filter(|p| **p >= zero && **p <= top).cloned());
        let mut cuts: Vec<CutIdeal> = points
            .into_iter()
            .flat_map(|p| [self.cut(p.clone(), CutKind::Weak), self.cut(p, CutKind::Strict)])
            .filter(|c| c.gamma() <= &top)
            .collect();
        cuts.sort();
        cuts.dedup();
        if cuts.len() > MAX_UNIVERSE {
            return Err(Error::BudgetExceeded {
                size: cuts.len(),
                limit: MAX_UNIVERSE,
            });
        }
        Ok(cuts)
    }

    fn elements(&self, height: u64) -> Vec<ExactReal> {
        let top = ExactReal::from_rational(BigRat::from_integer(height.into()));
        self.group
            .points_between(&ExactReal::zero(), &top, self.coeff_bound)
    }

    fn prediction(&self) -> Prediction {
        if self.group.is_complete() {
            Prediction {
                sharp: true,
                basis: "valuation domain whose value group is cyclic, a complete subgroup of the reals".into(),
            }
        } else {
            Prediction {
                sharp: false,
                basis: "valuation domain whose value group is dense, not a complete subgroup of the reals".into(),
            }
        }
    }
}
