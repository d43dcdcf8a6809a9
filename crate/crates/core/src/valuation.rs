//! Valuation domains with a finitely generated value group `G ⊆ R`.
//!
//! Every nonzero fractional ideal of the valuation ring is a cut of `G`:
//! either `{g >= γ}` (weak) or `{g > γ}` (strict). Cut points live in
//! Q(sqrt2, sqrt3), which is what allows non-principal cuts of a dense group
//! to be written down exactly.
//!
//! A finitely generated subgroup of the reals is either cyclic or dense, and
//! the order-complete ones are exactly the cyclic ones. So completeness is
//! decided by the rational rank: complete iff rank 1.

use std::fmt;

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{common_denominator, scaled_integer, BigRat, ExactReal, IntLattice};

/// Subgroup of the reals generated by finitely many elements of Q(sqrt2, sqrt3).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValueGroup {
    generators: Vec<ExactReal>,
    /// Common denominator of all generator coordinates.
    scale: BigInt,
    /// Lattice of `scale * coordinates` spanned by the generators.
    lattice: IntLattice,
    /// Positive group elements forming a Z-basis.
    basis: Vec<ExactReal>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Topology {
    Discrete,
    Dense,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Completeness {
    Complete,
    Incomplete,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnosis {
    pub rank: usize,
    pub topology: Topology,
    pub completeness: Completeness,
    pub predicted_sharp: bool,
}

impl fmt::Display for Diagnosis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let topo = match self.topology {
            Topology::Discrete => "discrete",
            Topology::Dense => "dense",
        };
        let comp = match self.completeness {
            Completeness::Complete => "complete",
            Completeness::Incomplete => "incomplete",
        };
        write!(f, "{topo}, {comp} (rational rank {})", self.rank)
    }
}

impl ValueGroup {
    pub fn new(generators: Vec<ExactReal>) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::InvalidValueGroup("no generators".into()));
        }
        if let Some(z) = generators.iter().find(|g| g.is_zero()) {
            return Err(Error::InvalidValueGroup(format!("zero generator {z}")));
        }
        let scale = common_denominator(generators.iter().flat_map(|g| g.coeffs().iter()));
        let lattice = IntLattice::hnf(4, generators.iter().map(|g| coordinates(g, &scale)));
        let basis = lattice
            .rows()
            .iter()
            .map(|r| {
                let q: Vec<BigRat> = r
                    .iter()
                    .map(|x| BigRat::new(x.clone(), scale.clone()))
                    .collect();
                ExactReal::new(q[0].clone(), q[1].clone(), q[2].clone(), q[3].clone()).abs()
            })
            .collect();
        Ok(ValueGroup {
            generators,
            scale,
            lattice,
            basis,
        })
    }

    pub fn generators(&self) -> &[ExactReal] {
        &self.generators
    }

    /// Positive Z-basis of the group.
    pub fn basis(&self) -> &[ExactReal] {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.lattice.rank()
    }

    pub fn is_discrete(&self) -> bool {
        self.rank() == 1
    }

    pub fn is_dense(&self) -> bool {
        self.rank() >= 2
    }

    pub fn is_complete(&self) -> bool {
        self.is_discrete()
    }

    /// Positive generator of a cyclic group.
    pub fn step(&self) -> Option<&ExactReal> {
        self.is_discrete().then(|| &self.basis[0])
    }

    /// Whether `x` is an integer combination of the generators.
    pub fn contains(&self, x: &ExactReal) -> bool {
        let scaled = x.scale(&BigRat::from_integer(self.scale.clone()));
        if !scaled.coeffs().iter().all(|q| q.is_integer()) {
            return false;
        }
        let v: Vec<BigInt> = scaled.coeffs().iter().map(|q| q.to_integer()).collect();
        self.lattice.contains(&v)
    }

    pub fn diagnose(&self) -> Diagnosis {
        let complete = self.is_complete();
        Diagnosis {
            rank: self.rank(),
            topology: if self.is_discrete() {
                Topology::Discrete
            } else {
                Topology::Dense
            },
            completeness: if complete {
                Completeness::Complete
            } else {
                Completeness::Incomplete
            },
            predicted_sharp: complete,
        }
    }

    /// Smallest group element `>= x` (discrete groups only).
    pub fn ceil_point(&self, x: &ExactReal) -> Option<ExactReal> {
        let step = self.step()?;
        let n = x.floor_div(step);
        let below = step.scale(&BigRat::from_integer(n.clone()));
        Some(if &below == x {
            below
        } else {
            step.scale(&BigRat::from_integer(n + 1))
        })
    }

    /// Smallest group element `> x` (discrete groups only).
    pub fn next_point(&self, x: &ExactReal) -> Option<ExactReal> {
        let step = self.step()?;
        let n = x.floor_div(step);
        Some(step.scale(&BigRat::from_integer(n + 1)))
    }

    /// A group element strictly between `lo` and `hi`, if any.
    ///
    /// Dense groups meet every nonempty open interval; a witness is built
    /// from a positive element smaller than the width, obtained by running
    /// the Euclidean algorithm on two independent basis elements.
    pub fn point_in_open_interval(&self, lo: &ExactReal, hi: &ExactReal) -> Option<ExactReal> {
        if lo >= hi {
            return None;
        }
        let eps = match self.step() {
            Some(step) => step.clone(),
            None => {
                let width = hi - lo;
                let (mut big, mut small) = (self.basis[0].clone(), self.basis[1].clone());
                if big < small {
                    std::mem::swap(&mut big, &mut small);
                }
                while small >= width {
                    let q = big.floor_div(&small);
                    let rem = &big - &small.scale(&BigRat::from_integer(q));
                    big = small;
                    small = rem;
                }
                small
            }
        };
        let candidate = eps.scale(&BigRat::from_integer(lo.floor_div(&eps) + 1));
        (&candidate < hi).then_some(candidate)
    }

    /// Group elements in `[lo, hi]`. For a cyclic group these are all the
    /// multiples of the step; otherwise every combination whose coefficients
    /// on the later basis elements are bounded by `coeff_bound`, with the
    /// first basis element free. Sorted and duplicate-free.
    pub fn points_between(&self, lo: &ExactReal, hi: &ExactReal, coeff_bound: u32) -> Vec<ExactReal> {
        let mut out = Vec::new();
        if let Some(step) = self.step() {
            let Some(mut p) = self.ceil_point(lo) else {
                return out;
            };
            while &p <= hi {
                out.push(p.clone());
                p = &p + step;
            }
            return out;
        }
        let k = coeff_bound as i64;
        let (first, rest) = self.basis.split_first().expect("nonempty basis");
        let mut coeffs = vec![-k; rest.len()];
        loop {
            let offset = coeffs
                .iter()
                .zip(rest)
                .fold(ExactReal::zero(), |acc, (&c, b)| acc + b.scale(&crate::exact::int(c)));
            // offset + n*first in [lo, hi]
            let mut n = (lo - &offset).floor_div(first);
            loop {
                let value = &offset + &first.scale(&BigRat::from_integer(n.clone()));
                if &value > hi {
                    break;
                }
                if &value >= lo {
                    out.push(value);
                }
                n += 1;
            }
            // odometer over [-k, k]^(rank - 1)
            let mut i = 0;
            loop {
                if i == coeffs.len() {
                    out.sort();
                    out.dedup();
                    return out;
                }
                if coeffs[i] < k {
                    coeffs[i] += 1;
                    break;
                }
                coeffs[i] = -k;
                i += 1;
            }
        }
    }

    pub fn cut(&self, gamma: ExactReal, kind: CutKind) -> CutIdeal {
        self.canonicalize(CutIdeal { gamma, kind })
    }

    pub fn unit(&self) -> CutIdeal {
        CutIdeal {
            gamma: ExactReal::zero(),
            kind: CutKind::Weak,
        }
    }

    pub fn maximal_ideal(&self) -> CutIdeal {
        self.cut(ExactReal::zero(), CutKind::Strict)
    }

    /// The principal ideal of an element of value `v`.
    pub fn principal(&self, v: &ExactReal) -> CutIdeal {
        debug_assert!(self.contains(v));
        self.cut(v.clone(), CutKind::Weak)
    }

    /// Canonical representative: weak cuts sit at group points, and for a
    /// cyclic group every cut is weak.
    fn canonicalize(&self, cut: CutIdeal) -> CutIdeal {
        match self.step() {
            Some(_) => {
                let gamma = match cut.kind {
                    CutKind::Weak => self.ceil_point(&cut.gamma),
                    CutKind::Strict => self.next_point(&cut.gamma),
                }
                .unwrap();
                CutIdeal {
                    gamma,
                    kind: CutKind::Weak,
                }
            }
            None => {
                let kind = if cut.kind == CutKind::Weak && !self.contains(&cut.gamma) {
                    CutKind::Strict
                } else {
                    cut.kind
                };
                CutIdeal { kind, ..cut }
            }
        }
    }

    pub fn mul(&self, i: &CutIdeal, j: &CutIdeal) -> CutIdeal {
        let kind = if i.kind == CutKind::Weak && j.kind == CutKind::Weak {
            CutKind::Weak
        } else {
            CutKind::Strict
        };
        self.cut(&i.gamma + &j.gamma, kind)
    }

    /// Fractional colon `{x : x + J ⊆ I}`.
    pub fn colon(&self, i: &CutIdeal, j: &CutIdeal) -> CutIdeal {
        let kind = if i.kind == CutKind::Strict && j.kind == CutKind::Weak {
            CutKind::Strict
        } else {
            CutKind::Weak
        };
        self.cut(&i.gamma - &j.gamma, kind)
    }

    pub fn inverse(&self, i: &CutIdeal) -> CutIdeal {
        self.colon(&self.unit(), i)
    }

    pub fn v_closure(&self, i: &CutIdeal) -> CutIdeal {
        self.inverse(&self.inverse(i))
    }

    /// Finitely generated ideals of a valuation ring are principal and hence
    /// v-ideals; their union over the subideals of `I` is `I` itself.
    pub fn t_closure(&self, i: &CutIdeal) -> CutIdeal {
        i.clone()
    }

    pub fn is_principal(&self, i: &CutIdeal) -> bool {
        i.kind == CutKind::Weak
    }

    pub fn is_invertible(&self, i: &CutIdeal) -> bool {
        self.mul(i, &self.inverse(i)) == self.unit()
    }

    /// `j ⊆ i`.
    pub fn includes(&self, i: &CutIdeal, j: &CutIdeal) -> bool {
        match j.gamma.cmp(&i.gamma) {
            std::cmp::Ordering::Greater => true,
            std::cmp::Ordering::Less => false,
            std::cmp::Ordering::Equal => j.kind == CutKind::Strict || i.kind == CutKind::Weak,
        }
    }

    pub fn intersect(&self, i: &CutIdeal, j: &CutIdeal) -> CutIdeal {
        if self.includes(i, j) {
            j.clone()
        } else {
            i.clone()
        }
    }

    pub fn add(&self, i: &CutIdeal, j: &CutIdeal) -> CutIdeal {
        if self.includes(i, j) {
            i.clone()
        } else {
            j.clone()
        }
    }
}

impl fmt::Display for ValueGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "val:gens=")?;
        for (k, g) in self.generators.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{g}")?;
        }
        Ok(())
    }
}

fn coordinates(x: &ExactReal, scale: &BigInt) -> Vec<BigInt> {
    x.coeffs().iter().map(|q| scaled_integer(q, scale)).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CutKind {
    Weak,
    Strict,
}

impl fmt::Display for CutKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CutKind::Weak => "weak",
            CutKind::Strict => "strict",
        })
    }
}

/// Nonzero fractional ideal of a valuation ring, as a cut of its value group.
///
/// Construct through [`ValueGroup::cut`], which canonicalizes. Ordering is by
/// cut value, then weak before strict, so larger ideals sort first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CutIdeal {
    gamma: ExactReal,
    kind: CutKind,
}

impl CutIdeal {
    pub fn gamma(&self) -> &ExactReal {
        &self.gamma
    }

    pub fn kind(&self) -> CutKind {
        self.kind
    }

    pub fn is_integral(&self) -> bool {
        self.gamma.signum() >= 0
    }
}

impl fmt::Display for CutIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "cut({},{})", self.gamma, self.kind)
    }
}

/// Convenience for `x / n` with small integers, used for probe points.
pub fn ratio(x: ExactReal, n: i64) -> ExactReal {
    x.scale(&BigRat::new(BigInt::one(), BigInt::from(n)))
}

/// Default non-group probe points: `sqrt3`, `sqrt3/2` and `4 - sqrt3`.
pub fn default_probes() -> Vec<ExactReal> {
    let s3 = ExactReal::sqrt3();
    vec![
        s3.clone(),
        ratio(s3.clone(), 2),
        ExactReal::from_int(4) - s3,
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};

    fn g12() -> ValueGroup {
        ValueGroup::new(vec![ExactReal::one(), ExactReal::sqrt2()]).unwrap()
    }

    fn z() -> ValueGroup {
        ValueGroup::new(vec![ExactReal::one()]).unwrap()
    }

    fn er(q0: i64, q1: i64, q2: i64) -> ExactReal {
        ExactReal::new(int(q0), int(q1), int(q2), int(0))
    }

    #[test]
    fn membership() {
        let g = g12();
        assert!(g.contains(&er(3, -2, 0)));
        assert!(!g.contains(&ExactReal::sqrt3()));
        let half = ValueGroup::new(vec![ExactReal::from_rational(rat(1, 2))]).unwrap();
        assert!(half.contains(&ExactReal::from_rational(rat(7, 2))));
        assert!(!half.contains(&ExactReal::from_rational(rat(1, 3))));
        assert!(ValueGroup::new(vec![]).is_err());
        assert!(ValueGroup::new(vec![ExactReal::zero()]).is_err());
    }

    #[test]
    fn diagnosis() {
        let d = z().diagnose();
        assert_eq!((d.topology, d.completeness, d.predicted_sharp), (Topology::Discrete, Completeness::Complete, true));
        let d = g12().diagnose();
        assert_eq!((d.topology, d.completeness, d.predicted_sharp), (Topology::Dense, Completeness::Incomplete, false));
        let d = ValueGroup::new(vec![ExactReal::from_rational(rat(2, 3))]).unwrap().diagnose();
        assert!(d.predicted_sharp);
        // 2 and 3 sqrt2 and sqrt2 span a rank 2 group; sqrt8 = 2 sqrt2 adds nothing
        let d = ValueGroup::new(vec![er(2, 0, 0), er(0, 3, 0), er(0, 1, 0), er(0, 2, 0)]).unwrap();
        assert_eq!(d.rank(), 2);
    }

    #[test]
    fn canonical_forms() {
        let g = z();
        assert_eq!(g.cut(ExactReal::from_int(3), CutKind::Strict), g.cut(ExactReal::from_int(4), CutKind::Weak));
        assert_eq!(g.cut(ExactReal::sqrt3(), CutKind::Weak), g.cut(ExactReal::from_int(2), CutKind::Weak));
        let d = g12();
        let s3 = d.cut(ExactReal::sqrt3(), CutKind::Weak);
        assert_eq!(s3.kind(), CutKind::Strict);
        assert_eq!(d.cut(ExactReal::sqrt2(), CutKind::Strict).kind(), CutKind::Strict);
    }

    #[test]
    fn products_and_colons() {
        let g = z();
        let w = |n: i64| g.cut(ExactReal::from_int(n), CutKind::Weak);
        assert_eq!(g.mul(&w(3), &w(1)), w(4));
        assert_eq!(g.colon(&w(5), &w(2)), w(3));

        let d = g12();
        let s3 = d.cut(ExactReal::sqrt3(), CutKind::Strict);
        let rest = d.cut(er(4, 0, -1), CutKind::Strict);
        assert_eq!(d.mul(&s3, &rest), d.cut(ExactReal::from_int(4), CutKind::Strict));
        let four = d.cut(ExactReal::from_int(4), CutKind::Weak);
        assert_eq!(d.colon(&four, &s3), rest);
        assert_eq!(d.mul(&d.unit(), &s3), s3);
        assert_eq!(d.colon(&s3, &d.unit()), s3);
    }

    #[test]
    fn closures_and_invertibility() {
        let d = g12();
        let open_at_group = d.cut(ExactReal::sqrt2(), CutKind::Strict);
        assert_eq!(d.v_closure(&open_at_group), d.cut(ExactReal::sqrt2(), CutKind::Weak));
        let s3 = d.cut(ExactReal::sqrt3(), CutKind::Strict);
        assert_eq!(d.v_closure(&s3), s3);
        assert!(!d.is_invertible(&s3));
        assert_eq!(d.mul(&s3, &d.inverse(&s3)), d.maximal_ideal());
        let g = z();
        for n in 0..6 {
            assert!(g.is_invertible(&g.cut(ExactReal::from_int(n), CutKind::Strict)));
        }
    }

    #[test]
    fn lattice_ops_on_cuts() {
        let d = g12();
        let w = d.cut(ExactReal::sqrt2(), CutKind::Weak);
        let s = d.cut(ExactReal::sqrt2(), CutKind::Strict);
        assert_eq!(d.intersect(&w, &s), s);
        assert_eq!(d.add(&w, &s), w);
        assert!(d.includes(&w, &s) && !d.includes(&s, &w));
    }

    #[test]
    fn dense_points() {
        let d = g12();
        let lo = ExactReal::sqrt3();
        let hi = &lo + &ExactReal::from_rational(rat(1, 1000));
        let p = d.point_in_open_interval(&lo, &hi).unwrap();
        assert!(d.contains(&p) && p > lo && p < hi);
        assert!(d.point_in_open_interval(&hi, &lo).is_none());
        let g = z();
        assert!(g.point_in_open_interval(&ExactReal::from_int(1), &ExactReal::from_int(2)).is_none());
        let pts = d.points_between(&ExactReal::zero(), &ExactReal::from_int(2), 1);
        // a + b*sqrt2 with |b| <= 1: 0, sqrt2-1, 2-sqrt2, 1, sqrt2, 3-sqrt2, 2
        assert_eq!(pts.len(), 7);
        assert!(pts.windows(2).all(|w| w[0] < w[1]));
    }
}
