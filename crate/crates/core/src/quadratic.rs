//! Fractional ideals of quadratic orders `Z[w]`, `w = sqrt(d)`.
//!
//! A nonzero fractional ideal is stored as `L / den` where `L` is the
//! integer lattice `aZ + (b + c w)Z` with `a, c > 0`, `0 <= b < a`, and
//! `gcd(den, content(L)) = 1`. This form is unique, so ideal equality is
//! field equality. All lattice work happens in `(w-coordinate, 1-coordinate)`
//! order, where the normal form basis reads `(c, b), (0, a)`.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exact::{common_denominator, scaled_integer, BigRat, IntLattice};

/// Default cap on candidate lattices examined by [`QuadIdeal::superideals`].
pub const DEFAULT_SUPERIDEAL_BUDGET: u64 = 10_000;

/// The order `Z[sqrt(d)]` for squarefree `d` not in {0, 1}.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct OrderSpec {
    d: i64,
}

impl OrderSpec {
    pub fn new(d: i64) -> Result<Self> {
        let invalid = |reason: &str| Error::InvalidOrder {
            d,
            reason: reason.to_string(),
        };
        if d == 0 || d == 1 {
            return Err(invalid("d must not be 0 or 1"));
        }
        if !is_squarefree(d.unsigned_abs()) {
            return Err(invalid("d is not squarefree"));
        }
        Ok(OrderSpec { d })
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    /// `Z[sqrt d]` is the full ring of integers exactly when `d != 1 mod 4`.
    pub fn is_maximal(&self) -> bool {
        self.d.rem_euclid(4) != 1
    }

    pub fn unit_ideal(&self) -> QuadIdeal {
        QuadIdeal {
            d: self.d,
            den: BigInt::one(),
            a: BigInt::one(),
            b: BigInt::zero(),
            c: BigInt::one(),
        }
    }

    pub fn mul_elements(&self, x: &QuadNum, y: &QuadNum) -> QuadNum {
        let d = BigRat::from_integer(BigInt::from(self.d));
        QuadNum {
            x: &x.x * &y.x + d * &x.y * &y.y,
            y: &x.x * &y.y + &x.y * &y.x,
        }
    }

    /// Field norm `x^2 - d y^2`.
    pub fn norm_element(&self, v: &QuadNum) -> BigRat {
        let d = BigRat::from_integer(BigInt::from(self.d));
        &v.x * &v.x - d * &v.y * &v.y
    }

    pub fn inverse_element(&self, v: &QuadNum) -> Option<QuadNum> {
        let n = self.norm_element(v);
        (!n.is_zero()).then(|| QuadNum {
            x: &v.x / &n,
            y: -&v.y / &n,
        })
    }

    /// The fractional ideal generated by `gens`: the lattice spanned by every
    /// `g` and `g*w`.
    pub fn ideal(&self, gens: &[QuadNum]) -> Result<QuadIdeal> {
        let omega = QuadNum::omega();
        let spanning: Vec<QuadNum> = gens
            .iter()
            .filter(|g| !g.is_zero())
            .flat_map(|g| [g.clone(), self.mul_elements(g, &omega)])
            .collect();
        QuadIdeal::from_vectors(self.d, &spanning).ok_or(Error::AllGeneratorsZero)
    }

    pub fn principal(&self, g: &QuadNum) -> Result<QuadIdeal> {
        self.ideal(std::slice::from_ref(g))
    }

    /// Every integral ideal of norm at most `bound`, sorted.
    pub fn ideals_up_to_norm(&self, bound: u64) -> Vec<QuadIdeal> {
        let bound = BigInt::from(bound);
        let mut out = Vec::new();
        let mut c = BigInt::one();
        while &c * &c <= bound {
            let mut a = c.clone();
            while &a * &c <= bound {
                let mut b = BigInt::zero();
                while b < a {
                    let candidate = QuadIdeal {
                        d: self.d,
                        den: BigInt::one(),
                        a: a.clone(),
                        b: b.clone(),
                        c: c.clone(),
                    };
                    if candidate.is_module_closed() {
                        out.push(candidate);
                    }
                    b += &c;
                }
                a += &c;
            }
            c += 1;
        }
        out.sort();
        out
    }
}

impl fmt::Display for OrderSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "quad:d={}", self.d)
    }
}

fn is_squarefree(n: u64) -> bool {
    let mut p = 2u64;
    while p * p <= n {
        if n % (p * p) == 0 {
            return false;
        }
        p += 1;
    }
    true
}

/// Element `x + y w` of the quotient field Q(sqrt d).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct QuadNum {
    pub x: BigRat,
    pub y: BigRat,
}

impl QuadNum {
    pub fn new(x: BigRat, y: BigRat) -> Self {
        QuadNum { x, y }
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        QuadNum::new(
            BigRat::from_integer(BigInt::from(x)),
            BigRat::from_integer(BigInt::from(y)),
        )
    }

    pub fn omega() -> Self {
        QuadNum::from_ints(0, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    /// Largest absolute coordinate, for integral elements.
    pub fn height(&self) -> BigRat {
        self.x.abs().max(self.y.abs())
    }
}

impl fmt::Display for QuadNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.y.is_zero() {
            return write!(f, "{}", self.x);
        }
        if !self.x.is_zero() {
            write!(f, "{}", self.x)?;
            if self.y.is_positive() {
                write!(f, "+")?;
            }
        }
        if self.y.is_one() {
            write!(f, "w")
        } else if (-&self.y).is_one() {
            write!(f, "-w")
        } else {
            write!(f, "{}w", self.y)
        }
    }
}

/// Nonzero fractional ideal of `Z[sqrt d]` in canonical lattice form.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct QuadIdeal {
    d: i64,
    den: BigInt,
    a: BigInt,
    b: BigInt,
    c: BigInt,
}

impl QuadIdeal {
    pub fn order(&self) -> OrderSpec {
        OrderSpec { d: self.d }
    }

    pub fn den(&self) -> &BigInt {
        &self.den
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }

    pub fn b(&self) -> &BigInt {
        &self.b
    }

    pub fn c(&self) -> &BigInt {
        &self.c
    }

    /// Z-basis `a/den, (b + c w)/den`.
    pub fn basis(&self) -> [QuadNum; 2] {
        let q = |n: &BigInt| BigRational::new(n.clone(), self.den.clone());
        [
            QuadNum::new(q(&self.a), BigRat::zero()),
            QuadNum::new(q(&self.b), q(&self.c)),
        ]
    }

    pub fn is_integral(&self) -> bool {
        self.den.is_one()
    }

    pub fn is_unit(&self) -> bool {
        *self == self.order().unit_ideal()
    }

    /// Lattice index `a*c / den^2`; the ideal norm for integral ideals.
    pub fn norm(&self) -> BigRat {
        BigRational::new(&self.a * &self.c, &self.den * &self.den)
    }

    /// Integer lattice `den * I` in `(w, 1)` coordinates.
    fn lattice(&self) -> IntLattice {
        IntLattice::hnf(
            2,
            [
                vec![self.c.clone(), self.b.clone()],
                vec![BigInt::zero(), self.a.clone()],
            ],
        )
    }

    /// Canonical ideal for the Z-span of `vectors`, or `None` when they do
    /// not span a rank-2 lattice. The span must be closed under `w`.
    fn from_vectors(d: i64, vectors: &[QuadNum]) -> Option<QuadIdeal> {
        let den = common_denominator(vectors.iter().flat_map(|v| [&v.x, &v.y]));
        let rows = vectors
            .iter()
            .map(|v| vec![scaled_integer(&v.y, &den), scaled_integer(&v.x, &den)]);
        Self::from_lattice(d, IntLattice::hnf(2, rows), den)
    }

    fn from_lattice(d: i64, lattice: IntLattice, den: BigInt) -> Option<QuadIdeal> {
        if lattice.rank() != 2 {
            return None;
        }
        let rows = lattice.rows();
        let (c, b, a) = (&rows[0][0], &rows[0][1], &rows[1][1]);
        let g = lattice.content().gcd(&den);
        let ideal = QuadIdeal {
            d,
            den: den / &g,
            a: a / &g,
            b: b / &g,
            c: c / &g,
        };
        debug_assert!(ideal.is_module_closed(), "lattice is not a w-module: {ideal:?}");
        Some(ideal)
    }

    /// Whether `w` maps the lattice into itself.
    fn is_module_closed(&self) -> bool {
        let lat = self.lattice();
        let d = BigInt::from(self.d);
        // w*a = a w, w*(b + c w) = c d + b w
        lat.contains(&[self.a.clone(), BigInt::zero()])
            && lat.contains(&[self.b.clone(), &self.c * d])
    }

    pub fn contains_element(&self, v: &QuadNum) -> bool {
        let scaled_x = &v.x * BigRat::from_integer(self.den.clone());
        let scaled_y = &v.y * BigRat::from_integer(self.den.clone());
        if !scaled_x.is_integer() || !scaled_y.is_integer() {
            return false;
        }
        self.lattice().contains(&[scaled_y.to_integer(), scaled_x.to_integer()])
    }

    /// `other ⊆ self`.
    pub fn contains(&self, other: &QuadIdeal) -> bool {
        self.check_order(other);
        other.basis().iter().all(|v| self.contains_element(v))
    }

    fn check_order(&self, other: &QuadIdeal) {
        assert_eq!(self.d, other.d, "ideals belong to different orders");
    }

    pub fn mul(&self, other: &QuadIdeal) -> QuadIdeal {
        self.check_order(other);
        let o = self.order();
        let products: Vec<QuadNum> = self
            .basis()
            .iter()
            .flat_map(|x| other.basis().map(|y| o.mul_elements(x, &y)))
            .collect();
        Self::from_vectors(self.d, &products).expect("product of nonzero ideals is nonzero")
    }

    /// Scale by a nonzero field element.
    pub fn scale(&self, g: &QuadNum) -> QuadIdeal {
        let o = self.order();
        let images: Vec<QuadNum> = self.basis().iter().map(|v| o.mul_elements(v, g)).collect();
        Self::from_vectors(self.d, &images).expect("scaling by zero")
    }

    pub fn add(&self, other: &QuadIdeal) -> QuadIdeal {
        self.check_order(other);
        let gens: Vec<QuadNum> = self.basis().into_iter().chain(other.basis()).collect();
        Self::from_vectors(self.d, &gens).expect("sum of nonzero ideals is nonzero")
    }

    pub fn intersect(&self, other: &QuadIdeal) -> QuadIdeal {
        self.check_order(other);
        let den = self.den.lcm(&other.den);
        let lift = |i: &QuadIdeal| {
            let k = &den / &i.den;
            IntLattice::hnf(
                2,
                i.lattice()
                    .rows()
                    .iter()
                    .map(|r| r.iter().map(|x| x * &k).collect::<Vec<_>>()),
            )
        };
        let meet = lift(self).intersect(&lift(other));
        Self::from_lattice(self.d, meet, den).expect("intersection of nonzero ideals is nonzero")
    }

    /// Fractional colon `{x in K : x * other ⊆ self}`, the intersection of
    /// `g^-1 * self` over the two basis elements `g` of `other`.
    pub fn colon(&self, other: &QuadIdeal) -> QuadIdeal {
        self.check_order(other);
        let o = self.order();
        let [g1, g2] = other.basis();
        let pre = |g: &QuadNum| self.scale(&o.inverse_element(g).expect("basis element is nonzero"));
        pre(&g1).intersect(&pre(&g2))
    }

    /// `self : O`-dual, i.e. `O : self`.
    pub fn inverse(&self) -> QuadIdeal {
        self.order().unit_ideal().colon(self)
    }

    pub fn v_closure(&self) -> QuadIdeal {
        self.inverse().inverse()
    }

    /// Every ideal of a Noetherian order is finitely generated, so the
    /// t-closure is the v-closure of the ideal itself.
    pub fn t_closure(&self) -> QuadIdeal {
        self.v_closure()
    }

    pub fn is_invertible(&self) -> bool {
        self.mul(&self.inverse()).is_unit()
    }

    /// All ideals `L` with `self ⊆ L ⊆ O`, sorted. `self` must be integral.
    ///
    /// Candidates are the normal-form lattices whose index divides the index
    /// of `self`; those containing `self` and closed under `w` are kept.
    pub fn superideals(&self, budget: u64) -> Result<Vec<QuadIdeal>> {
        if !self.is_integral() {
            return Err(Error::NotIntegral(self.to_string()));
        }
        let n = &self.a * &self.c;
        let divisors = divisors(&n);
        let mut count = 0u64;
        for c in &divisors {
            for a in divisors.iter().filter(|a| a.is_multiple_of(c) && n.is_multiple_of(&(*a * c))) {
                count += (a / c).to_u64().unwrap_or(u64::MAX);
            }
        }
        if count > budget {
            return Err(Error::NormBoundExceeded {
                norm: n.to_string(),
                lattices: count,
                budget,
            });
        }
        let mut out = Vec::new();
        for c in &divisors {
            for a in divisors.iter().filter(|a| a.is_multiple_of(c) && n.is_multiple_of(&(*a * c))) {
                let mut b = BigInt::zero();
                while &b < a {
                    let candidate = QuadIdeal {
                        d: self.d,
                        den: BigInt::one(),
                        a: a.clone(),
                        b: b.clone(),
                        c: c.clone(),
                    };
                    if candidate.is_module_closed() && candidate.contains(self) {
                        out.push(candidate);
                    }
                    b += c;
                }
            }
        }
        out.sort();
        Ok(out)
    }

    /// A proper integral ideal with no ideal strictly between it and `O`.
    pub fn is_maximal(&self) -> bool {
        self.is_integral()
            && !self.is_unit()
            && self
                .superideals(DEFAULT_SUPERIDEAL_BUDGET)
                .map(|s| s.len() == 2)
                .unwrap_or(false)
    }

    /// Order of vanishing at an invertible prime `p`: the largest `k` with
    /// `self ⊆ p^k`, found by dividing by `p` while the quotient stays integral.
    pub fn ord_at(&self, p: &QuadIdeal) -> Result<u32> {
        self.check_order(p);
        if !p.is_integral() || p.is_unit() || !p.is_invertible() {
            return Err(Error::NonInvertiblePrime(p.to_string()));
        }
        if !self.is_integral() {
            return Err(Error::NotIntegral(self.to_string()));
        }
        let p_inv = p.inverse();
        let mut k = 0;
        let mut current = self.clone();
        loop {
            let next = current.mul(&p_inv);
            if !next.is_integral() {
                return Ok(k);
            }
            current = next;
            k += 1;
        }
    }

    fn sort_key(&self) -> (i64, &BigInt, BigInt, &BigInt, &BigInt, &BigInt) {
        (self.d, &self.den, &self.a * &self.c, &self.a, &self.b, &self.c)
    }
}

impl PartialOrd for QuadIdeal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Orders by denominator, then lattice index, then the normal-form entries.
impl Ord for QuadIdeal {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

/// Renders as `ideal(a, b+cw)` with a trailing `/den` when fractional; the
/// output parses back to the same ideal.
impl fmt::Display for QuadIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let second = QuadNum::new(
            BigRat::from_integer(self.b.clone()),
            BigRat::from_integer(self.c.clone()),
        );
        write!(f, "ideal({}, {})", self.a, second)?;
        if !self.den.is_one() {
            write!(f, "/{}", self.den)?;
        }
        Ok(())
    }
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut k = BigInt::one();
    while &k * &k <= n {
        if n.is_multiple_of(&k) {
            let other = &n / &k;
            if other != k {
                large.push(other);
            }
            small.push(k.clone());
        }
        k += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ideal(d: i64, gens: &[(i64, i64)]) -> QuadIdeal {
        let o = OrderSpec::new(d).unwrap();
        let gens: Vec<QuadNum> = gens.iter().map(|&(x, y)| QuadNum::from_ints(x, y)).collect();
        o.ideal(&gens).unwrap()
    }

    fn abc(i: &QuadIdeal) -> (i64, i64, i64, i64) {
        let t = |n: &BigInt| n.to_i64().unwrap();
        (t(i.a()), t(i.b()), t(i.c()), t(i.den()))
    }

    #[test]
    fn order_validation() {
        assert!(OrderSpec::new(-5).unwrap().is_maximal());
        assert!(!OrderSpec::new(-3).unwrap().is_maximal());
        assert!(OrderSpec::new(4).is_err());
        assert!(OrderSpec::new(-12).is_err());
        assert!(OrderSpec::new(1).is_err());
        assert!(OrderSpec::new(0).is_err());
    }

    #[test]
    fn generators_to_normal_form() {
        assert_eq!(abc(&ideal(-5, &[(2, 0), (1, 1)])), (2, 1, 1, 1));
        assert_eq!(abc(&ideal(-3, &[(2, 0), (1, 1)])), (2, 1, 1, 1));
        assert_eq!(abc(&ideal(-5, &[(1, 0)])), (1, 0, 1, 1));
        assert_eq!(abc(&ideal(-5, &[(2, 0)])), (2, 0, 2, 1));
        let o = OrderSpec::new(-5).unwrap();
        assert_eq!(o.ideal(&[QuadNum::from_ints(0, 0)]), Err(Error::AllGeneratorsZero));
    }

    #[test]
    fn prime_above_two() {
        let p5 = ideal(-5, &[(2, 0), (1, 1)]);
        let two5 = ideal(-5, &[(2, 0)]);
        assert_eq!(p5.mul(&p5), two5);
        assert!(p5.is_invertible());
        assert_eq!(p5.v_closure(), p5);
        assert_eq!(two5.colon(&p5), p5);

        let p3 = ideal(-3, &[(2, 0), (1, 1)]);
        let two3 = ideal(-3, &[(2, 0)]);
        assert_eq!(p3.mul(&p3), p3.scale(&QuadNum::from_ints(2, 0)));
        assert_ne!(p3.mul(&p3), two3);
        assert_eq!(two3.colon(&p3), p3);
        assert!(!p3.is_invertible());
        assert_eq!(p3.v_closure(), p3);
        // P^-1 = O + ((1+w)/2) O
        let half = BigRat::new(BigInt::from(1), BigInt::from(2));
        let inv = OrderSpec::new(-3)
            .unwrap()
            .ideal(&[QuadNum::from_ints(1, 0), QuadNum::new(half.clone(), half)])
            .unwrap();
        assert_eq!(p3.inverse(), inv);
        assert_eq!(p3.mul(&inv), p3);
    }

    #[test]
    fn norms_and_fractional_display() {
        let p5 = ideal(-5, &[(2, 0), (1, 1)]);
        assert_eq!(p5.norm(), BigRat::from_integer(BigInt::from(2)));
        let inv = p5.inverse();
        assert_eq!(inv.to_string(), "ideal(2, 1+w)/2");
        assert_eq!(p5.to_string(), "ideal(2, 1+w)");
        assert_eq!(ideal(-5, &[(2, 0)]).to_string(), "ideal(2, 2w)");
    }

    #[test]
    fn superideals_of_two() {
        for d in [-5, -3] {
            let two = ideal(d, &[(2, 0)]);
            let p = ideal(d, &[(2, 0), (1, 1)]);
            let unit = OrderSpec::new(d).unwrap().unit_ideal();
            let mut expected = vec![unit.clone(), p, two.clone()];
            expected.sort();
            assert_eq!(two.superideals(DEFAULT_SUPERIDEAL_BUDGET).unwrap(), expected);
            assert_eq!(unit.superideals(DEFAULT_SUPERIDEAL_BUDGET).unwrap(), vec![unit]);
        }
        let big = ideal(-5, &[(1000, 0)]);
        assert!(matches!(big.superideals(100), Err(Error::NormBoundExceeded { .. })));
    }

    #[test]
    fn orders_of_vanishing() {
        let p = ideal(-5, &[(2, 0), (1, 1)]);
        let p3 = ideal(-5, &[(3, 0), (1, 1)]);
        assert_eq!(ideal(-5, &[(2, 0)]).ord_at(&p).unwrap(), 2);
        assert_eq!(ideal(-5, &[(6, 0)]).ord_at(&p3).unwrap(), 1);
        assert_eq!(OrderSpec::new(-5).unwrap().unit_ideal().ord_at(&p).unwrap(), 0);
        let q = ideal(-3, &[(2, 0), (1, 1)]);
        assert!(matches!(
            ideal(-3, &[(2, 0)]).ord_at(&q),
            Err(Error::NonInvertiblePrime(_))
        ));
    }

    #[test]
    fn sums_and_meets() {
        let two = ideal(-5, &[(2, 0)]);
        let three = ideal(-5, &[(3, 0)]);
        assert_eq!(two.intersect(&three), ideal(-5, &[(6, 0)]));
        assert!(two.add(&three).is_unit());
    }
}
