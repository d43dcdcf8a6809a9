use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::BigRat;

/// Element `q0 + q1*sqrt2 + q2*sqrt3 + q3*sqrt6` of the real field Q(sqrt2, sqrt3).
///
/// The four basis numbers are linearly independent over Q, so the value is
/// zero exactly when every coefficient is zero and equality is coefficient
/// equality. Ordering is the real order, decided by [`ExactReal::signum`].
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ExactReal {
    coeffs: [BigRat; 4],
}

/// Radicands of the basis elements, in coefficient order.
const RADICANDS: [u32; 4] = [1, 2, 3, 6];

/// Precision (in bits) of the first interval evaluation in `signum`.
const START_BITS: u64 = 32;

impl ExactReal {
    pub fn new(q0: BigRat, q1: BigRat, q2: BigRat, q3: BigRat) -> Self {
        ExactReal {
            coeffs: [q0, q1, q2, q3],
        }
    }

    pub fn zero() -> Self {
        Self::from_rational(BigRat::zero())
    }

    pub fn one() -> Self {
        Self::from_rational(BigRat::one())
    }

    pub fn from_rational(q: BigRat) -> Self {
        Self::new(q, BigRat::zero(), BigRat::zero(), BigRat::zero())
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(super::int(n))
    }

    /// `q * sqrt(radicand)` for a radicand in {1, 2, 3, 6}.
    pub fn radical(q: BigRat, radicand: u32) -> Option<Self> {
        let slot = RADICANDS.iter().position(|&r| r == radicand)?;
        let mut coeffs = Self::zero().coeffs;
        coeffs[slot] = q;
        Some(ExactReal { coeffs })
    }

    pub fn sqrt2() -> Self {
        Self::radical(BigRat::one(), 2).unwrap()
    }

    pub fn sqrt3() -> Self {
        Self::radical(BigRat::one(), 3).unwrap()
    }

    pub fn sqrt6() -> Self {
        Self::radical(BigRat::one(), 6).unwrap()
    }

    pub fn coeffs(&self) -> &[BigRat; 4] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// The rational value, if the irrational coefficients vanish.
    pub fn as_rational(&self) -> Option<&BigRat> {
        self.coeffs[1..]
            .iter()
            .all(Zero::is_zero)
            .then_some(&self.coeffs[0])
    }

    pub fn scale(&self, q: &BigRat) -> Self {
        ExactReal {
            coeffs: self.coeffs.clone().map(|c| c * q),
        }
    }

    /// Exact sign: -1, 0 or +1.
    ///
    /// Nonzero values are bounded away from zero, so refining the interval
    /// enclosure of the radicals eventually excludes zero.
    pub fn signum(&self) -> i8 {
        if self.is_zero() {
            return 0;
        }
        if let Some(q) = self.as_rational() {
            return if q.is_positive() { 1 } else { -1 };
        }
        let mut bits = START_BITS;
        loop {
            let (lo, hi) = self.enclosure(bits);
            if lo.is_positive() {
                return 1;
            }
            if hi.is_negative() {
                return -1;
            }
            bits *= 2;
        }
    }

    /// Rational interval `[lo, hi]` containing the value, built from
    /// `2^-bits`-wide enclosures of the radicals.
    pub fn enclosure(&self, bits: u64) -> (BigRat, BigRat) {
        let mut lo = self.coeffs[0].clone();
        let mut hi = self.coeffs[0].clone();
        for (q, &n) in self.coeffs.iter().zip(RADICANDS.iter()).skip(1) {
            if q.is_zero() {
                continue;
            }
            let (rlo, rhi) = sqrt_enclosure(n, bits);
            if q.is_positive() {
                lo += q * rlo;
                hi += q * rhi;
            } else {
                lo += q * rhi;
                hi += q * rlo;
            }
        }
        (lo, hi)
    }

    /// Floating-point approximation, for display and search seeding only.
    pub fn to_f64(&self) -> f64 {
        let (lo, hi) = self.enclosure(64);
        ((lo + hi) / BigRat::from_integer(BigInt::from(2)))
            .to_f64()
            .unwrap_or(f64::NAN)
    }

    pub fn abs(&self) -> Self {
        if self.signum() < 0 {
            -self
        } else {
            self.clone()
        }
    }

    /// `floor(self / unit)` for a positive `unit`.
    pub fn floor_div(&self, unit: &ExactReal) -> BigInt {
        assert!(unit.signum() > 0, "floor_div needs a positive unit");
        let approx = (self.to_f64() / unit.to_f64()).floor();
        let mut n = BigInt::from(approx as i128);
        let at = |n: &BigInt| unit.scale(&BigRat::from_integer(n.clone()));
        while &at(&n) > self {
            n -= 1;
        }
        while &at(&(&n + 1)) <= self {
            n += 1;
        }
        n
    }
}

fn sqrt_enclosure(n: u32, bits: u64) -> (BigRational, BigRational) {
    let scale = BigInt::one() << bits;
    let s = (BigInt::from(n) << (2 * bits)).sqrt();
    let lo = BigRational::new(s.clone(), scale.clone());
    let hi = BigRational::new(s + 1, scale);
    (lo, hi)
}

impl Default for ExactReal {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<BigRat> for ExactReal {
    fn from(q: BigRat) -> Self {
        Self::from_rational(q)
    }
}

impl From<i64> for ExactReal {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl PartialOrd for ExactReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExactReal {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self - other).signum() {
            s if s < 0 => Ordering::Less,
            0 => Ordering::Equal,
            _ => Ordering::Greater,
        }
    }
}

impl Neg for &ExactReal {
    type Output = ExactReal;
    fn neg(self) -> ExactReal {
        ExactReal {
            coeffs: self.coeffs.clone().map(|c| -c),
        }
    }
}

impl Neg for ExactReal {
    type Output = ExactReal;
    fn neg(self) -> ExactReal {
        -&self
    }
}

impl Add for &ExactReal {
    type Output = ExactReal;
    fn add(self, rhs: &ExactReal) -> ExactReal {
        let mut coeffs = self.coeffs.clone();
        for (c, r) in coeffs.iter_mut().zip(rhs.coeffs.iter()) {
            *c += r;
        }
        ExactReal { coeffs }
    }
}

impl Sub for &ExactReal {
    type Output = ExactReal;
    fn sub(self, rhs: &ExactReal) -> ExactReal {
        let mut coeffs = self.coeffs.clone();
        for (c, r) in coeffs.iter_mut().zip(rhs.coeffs.iter()) {
            *c -= r;
        }
        ExactReal { coeffs }
    }
}

impl Mul for &ExactReal {
    type Output = ExactReal;
    fn mul(self, rhs: &ExactReal) -> ExactReal {
        let [a0, a1, a2, a3] = &self.coeffs;
        let [b0, b1, b2, b3] = &rhs.coeffs;
        let two = BigRat::from_integer(BigInt::from(2));
        let three = BigRat::from_integer(BigInt::from(3));
        let six = BigRat::from_integer(BigInt::from(6));
        // sqrt2*sqrt3 = sqrt6, sqrt2*sqrt6 = 2 sqrt3, sqrt3*sqrt6 = 3 sqrt2
        let c0 = a0 * b0 + &two * a1 * b1 + &three * a2 * b2 + &six * a3 * b3;
        let c1 = a0 * b1 + a1 * b0 + &three * (a2 * b3 + a3 * b2);
        let c2 = a0 * b2 + a2 * b0 + &two * (a1 * b3 + a3 * b1);
        let c3 = a0 * b3 + a3 * b0 + a1 * b2 + a2 * b1;
        ExactReal::new(c0, c1, c2, c3)
    }
}

macro_rules! forward_owned_binop {
    ($tr:ident, $method:ident) => {
        impl $tr for ExactReal {
            type Output = ExactReal;
            fn $method(self, rhs: ExactReal) -> ExactReal {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&ExactReal> for ExactReal {
            type Output = ExactReal;
            fn $method(self, rhs: &ExactReal) -> ExactReal {
                (&self).$method(rhs)
            }
        }
    };
}

forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);

/// Renders in the literal grammar accepted by the parser, e.g. `4-sqrt3`,
/// `1/2*sqrt3`, `1+2*sqrt2-sqrt6`.
impl fmt::Display for ExactReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (q, &n) in self.coeffs.iter().zip(RADICANDS.iter()) {
            if q.is_zero() {
                continue;
            }
            let negative = q.numer().sign() == Sign::Minus;
            let mag = q.abs();
            if negative {
                write!(f, "-")?;
            } else if !first {
                write!(f, "+")?;
            }
            match (n, mag.is_one()) {
                (1, _) => write!(f, "{mag}")?,
                (_, true) => write!(f, "sqrt{n}")?,
                (_, false) => write!(f, "{mag}*sqrt{n}")?,
            }
            first = false;
        }
        Ok(())
    }
}
