use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::scalar::fmt_rational;
use crate::{Int, Rational};

/// `c0 + c1 sqrt(s) + c2 sqrt(t) + c3 sqrt(st)` with rational `c_i` and
/// nonnegative integer radicands.
///
/// Kept in a canonical form where every radical that is rational (or a
/// rational multiple of another) has been folded away, so the value is zero
/// exactly when all coefficients are.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadScalar {
    s: Int,
    t: Int,
    c: [Rational; 4],
}

fn exact_sqrt(x: &Int) -> Option<Int> {
    let r = x.sqrt();
    (&r * &r == *x).then_some(r)
}

impl QuadScalar {
    pub fn new(s: Int, t: Int, c: [Rational; 4]) -> Self {
        assert!(!s.is_negative() && !t.is_negative(), "radicands must be nonnegative");
        let mut q = Self { s, t, c };
        q.canonicalize();
        q
    }

    pub fn rational(s: &Int, t: &Int, r: Rational) -> Self {
        let z = Rational::zero;
        Self::new(s.clone(), t.clone(), [r, z(), z(), z()])
    }

    pub fn zero(s: &Int, t: &Int) -> Self {
        Self::rational(s, t, Rational::zero())
    }

    pub fn sqrt_s(s: &Int, t: &Int) -> Self {
        let z = Rational::zero;
        Self::new(s.clone(), t.clone(), [z(), Rational::one(), z(), z()])
    }

    pub fn sqrt_t(s: &Int, t: &Int) -> Self {
        let z = Rational::zero;
        Self::new(s.clone(), t.clone(), [z(), z(), Rational::one(), z()])
    }

    pub fn radicands(&self) -> (&Int, &Int) {
        (&self.s, &self.t)
    }

    pub fn coefficients(&self) -> &[Rational; 4] {
        &self.c
    }

    fn canonicalize(&mut self) {
        let [c0, c1, c2, c3] = &mut self.c;
        if let Some(r) = exact_sqrt(&self.s) {
            let r = Rational::from_integer(r);
            *c0 += &*c1 * &r;
            *c2 += &*c3 * &r;
            *c1 = Rational::zero();
            *c3 = Rational::zero();
        }
        if let Some(q) = exact_sqrt(&self.t) {
            let q = Rational::from_integer(q);
            *c0 += &*c2 * &q;
            *c1 += &*c3 * &q;
            *c2 = Rational::zero();
            *c3 = Rational::zero();
        }
        if let Some(k) = exact_sqrt(&(&self.s * &self.t)) {
            // Here s is not a square, so sqrt(t) = k sqrt(s) / s.
            let k = Rational::from_integer(k);
            *c0 += &*c3 * &k;
            *c3 = Rational::zero();
            if !c2.is_zero() {
                *c1 += &*c2 * &k / Rational::from_integer(self.s.clone());
                *c2 = Rational::zero();
            }
        }
    }

    fn compatible(&self, other: &Self) {
        assert!(
            self.s == other.s && self.t == other.t,
            "QuadScalar radicands differ: ({}, {}) vs ({}, {})",
            self.s,
            self.t,
            other.s,
            other.t
        );
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, r: &Rational) -> Self {
        Self { s: self.s.clone(), t: self.t.clone(), c: self.c.clone().map(|x| x * r) }
    }

    /// Exact sign, by refining rational enclosures of the radicals until the
    /// enclosure of the value excludes zero.
    pub fn signum(&self) -> Ordering {
        if self.is_zero() {
            return Ordering::Equal;
        }
        let st = &self.s * &self.t;
        let mut bits = 16u32;
        loop {
            let (lo, hi) = self.enclose(&st, bits);
            if lo.is_positive() {
                return Ordering::Greater;
            }
            if hi.is_negative() {
                return Ordering::Less;
            }
            bits *= 2;
        }
    }

    /// Interval containing the value, with radicals known to `2^-bits`.
    fn enclose(&self, st: &Int, bits: u32) -> (Rational, Rational) {
        let scale = BigInt::one() << bits;
        let root = |x: &Int| {
            let r = (x << (2 * bits)).sqrt();
            let lo = Rational::new(r.clone(), scale.clone());
            let exact = &r * &r == (x << (2 * bits));
            let hi = if exact { lo.clone() } else { Rational::new(r + 1, scale.clone()) };
            (lo, hi)
        };
        let radicals = [root(&self.s), root(&self.t), root(st)];
        let mut lo = self.c[0].clone();
        let mut hi = self.c[0].clone();
        for (c, (rl, rh)) in self.c[1..].iter().zip(radicals) {
            if c.is_positive() {
                lo += c * rl;
                hi += c * rh;
            } else {
                lo += c * rh;
                hi += c * rl;
            }
        }
        (lo, hi)
    }

    /// A floating point approximation, for rendering only.
    pub fn to_f64(&self) -> f64 {
        let (lo, hi) = self.enclose(&(&self.s * &self.t), 64);
        let mid = (lo + hi) / Rational::from_integer(2.into());
        let scale = BigInt::one() << 64u32;
        let n = (mid * Rational::from_integer(scale)).round().to_integer();
        n.to_string().parse::<f64>().unwrap_or(f64::NAN) / 2f64.powi(64)
    }
}

impl PartialOrd for QuadScalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QuadScalar {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.clone() - other.clone()).signum()
    }
}

impl Add for QuadScalar {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self.compatible(&rhs);
        let [a0, a1, a2, a3] = self.c;
        let [b0, b1, b2, b3] = rhs.c;
        Self::new(self.s, self.t, [a0 + b0, a1 + b1, a2 + b2, a3 + b3])
    }
}

impl Neg for QuadScalar {
    type Output = Self;
    fn neg(self) -> Self {
        Self { s: self.s, t: self.t, c: self.c.map(|x| -x) }
    }
}

impl Sub for QuadScalar {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Mul for QuadScalar {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.compatible(&rhs);
        let s = Rational::from_integer(self.s.clone());
        let t = Rational::from_integer(self.t.clone());
        let [a0, a1, a2, a3] = &self.c;
        let [b0, b1, b2, b3] = &rhs.c;
        let c0 = a0 * b0 + &s * a1 * b1 + &t * a2 * b2 + &s * &t * a3 * b3;
        let c1 = a0 * b1 + a1 * b0 + &t * (a2 * b3 + a3 * b2);
        let c2 = a0 * b2 + a2 * b0 + &s * (a1 * b3 + a3 * b1);
        let c3 = a0 * b3 + a3 * b0 + a1 * b2 + a2 * b1;
        Self::new(self.s, self.t, [c0, c1, c2, c3])
    }
}

impl fmt::Display for QuadScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [c0, c1, c2, c3] = &self.c;
        write!(
            f,
            "{} + {}*sqrt({}) + {}*sqrt({}) + {}*sqrt({}*{})",
            fmt_rational(c0),
            fmt_rational(c1),
            self.s,
            fmt_rational(c2),
            self.t,
            fmt_rational(c3),
            self.s,
            self.t
        )
    }
}

/// `x1 y2 - x2 y1`.
pub fn cross(u: &[QuadScalar], v: &[QuadScalar]) -> QuadScalar {
    u[0].clone() * v[1].clone() - u[1].clone() * v[0].clone()
}
