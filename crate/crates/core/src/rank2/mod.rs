//! Rank-2 exchange matrices `[[0, a], [b, 0]]`: the polynomials `P_m`, the
//! g-vector rays of the transpose, limit rays and universal coefficient rows.

mod quad;

pub use quad::{cross, QuadScalar};

use std::cmp::Ordering;

use num_integer::binomial;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::scalar::primitive;
use crate::{Int, IntVec, Rational};

/// `P_m = (-1)^{floor(m/2)} sum_i C(m-i, i) (ab)^{floor(m/2) - i}`.
pub fn p_poly(m: usize, ab: &Int) -> Int {
    p_poly_coefficients(m)
        .iter()
        .rev()
        .fold(Int::zero(), |acc, c| acc * ab + c)
}

/// Coefficients of `P_m` as a polynomial in `ab`, constant term first.
pub fn p_poly_coefficients(m: usize) -> Vec<Int> {
    let h = m / 2;
    let sign = if h.is_multiple_of(2) { Int::one() } else { -Int::one() };
    let mut out = vec![Int::zero(); h + 1];
    for i in 0..=h {
        out[h - i] = &sign * binomial(Int::from(m - i), Int::from(i));
    }
    out
}

/// Checks `P_m = U_m(sqrt(-ab)/2)` for even `m` and
/// `sqrt(-ab) P_m = U_m(sqrt(-ab)/2)` for odd `m`, evaluating the Chebyshev
/// recurrence in exact quadratic arithmetic.
pub fn chebyshev_check(m: usize, ab: &Int) -> bool {
    let s = -ab;
    let t = Int::zero();
    let root = QuadScalar::sqrt_s(&s, &t);
    let mut prev = QuadScalar::rational(&s, &t, Rational::one());
    let mut cur = root.clone();
    for _ in 1..m {
        let next = root.clone() * cur.clone() - prev;
        prev = cur;
        cur = next;
    }
    let u_m = if m == 0 { prev } else { cur };
    let p = QuadScalar::rational(&s, &t, Rational::from_integer(p_poly(m, ab)));
    if m.is_multiple_of(2) {
        u_m == p
    } else {
        u_m == root * p
    }
}

fn sgn(x: &Int) -> Int {
    x.signum()
}

fn ray1(a: &Int, b: &Int, m: usize) -> IntVec {
    let ab = a * b;
    let (p0, p1) = (p_poly(m, &ab), p_poly(m + 1, &ab));
    if m.is_multiple_of(2) {
        vec![sgn(a) * p0, -a * p1]
    } else {
        vec![-b * p0, sgn(b) * p1]
    }
}

fn ray2(a: &Int, b: &Int, m: usize) -> IntVec {
    let ab = a * b;
    let (p0, p1) = (p_poly(m, &ab), p_poly(m + 1, &ab));
    if m.is_multiple_of(2) {
        vec![-b * p1, sgn(b) * p0]
    } else {
        vec![sgn(a) * p1, -a * p0]
    }
}

fn check_signs(a: &Int, b: &Int) -> Result<()> {
    let ok = (a.is_zero() && b.is_zero()) || (a.signum() == -b.signum() && !a.is_zero());
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidSignPattern { a: a.to_string(), b: b.to_string() })
    }
}

fn check_infinite(a: &Int, b: &Int) -> Result<()> {
    check_signs(a, b)?;
    if a * b > Int::from(-4) {
        return Err(Error::Invalid(format!("expected ab <= -4, got a={a}, b={b}")));
    }
    Ok(())
}

/// The four ray families for `ab <= -4`, `count` rays per parity class, each
/// interlaced by `m`: `[family 1 (m = 0, 1, ...), family 2 (m = 0, 1, ...)]`.
pub fn ray_families(a: &Int, b: &Int, count: usize) -> Result<[Vec<IntVec>; 2]> {
    check_infinite(a, b)?;
    let f1 = (0..2 * count).map(|m| ray1(a, b, m)).collect();
    let f2 = (0..2 * count).map(|m| ray2(a, b, m)).collect();
    Ok([f1, f2])
}

/// `±e1, ±e2` followed by the four families (even and odd members of each
/// limit direction), `count` vectors per family.
pub fn rank2_rays(a: &Int, b: &Int, count: usize) -> Result<Vec<IntVec>> {
    let [f1, f2] = ray_families(a, b, count)?;
    let mut out = vec![
        crate::ivec(&[1, 0]),
        crate::ivec(&[0, 1]),
        crate::ivec(&[-1, 0]),
        crate::ivec(&[0, -1]),
    ];
    for fam in [&f1, &f2] {
        out.extend(fam.iter().step_by(2).cloned());
        out.extend(fam.iter().skip(1).step_by(2).cloned());
    }
    Ok(out)
}

/// `v_inf` and `v_-inf` over `Q(sqrt(s), sqrt(t))` with `s = -ab`, `t = -ab - 4`.
pub fn limit_rays(a: &Int, b: &Int) -> Result<(Vec<QuadScalar>, Vec<QuadScalar>)> {
    check_infinite(a, b)?;
    let s = -(a * b);
    let t = &s - 4;
    let rs = QuadScalar::sqrt_s(&s, &t);
    let sum = rs.clone() + QuadScalar::sqrt_t(&s, &t);
    let r = |x: Int| Rational::from_integer(x);
    let two = r(Int::from(2));
    let v_inf = vec![rs.scale(&(two.clone() * r(sgn(a)))), sum.scale(&r(-a))];
    let v_neg = vec![sum.scale(&r(-b)), rs.scale(&(two * r(sgn(b))))];
    Ok((v_inf, v_neg))
}

/// For `ab = -4`, the shortest integer vector on the limit ray.
pub fn affine_limit_row(a: &Int, b: &Int) -> Result<IntVec> {
    check_infinite(a, b)?;
    if a * b != Int::from(-4) {
        return Err(Error::Invalid(format!("not affine: a={a}, b={b}")));
    }
    let v = vec![Rational::from_integer(2 * sgn(a)), Rational::from_integer(-a)];
    Ok(primitive(&v))
}

fn to_quad(v: &[Int], s: &Int, t: &Int) -> Vec<QuadScalar> {
    v.iter()
        .map(|x| QuadScalar::rational(s, t, Rational::from_integer(x.clone())))
        .collect()
}

/// Whether the integer vector `p` lies strictly inside the cone spanned by
/// `u` and `v` (which span a pointed two-dimensional cone).
pub fn strictly_inside(p: &[Int], u: &[QuadScalar], v: &[QuadScalar]) -> bool {
    let (s, t) = u[0].radicands();
    let (s, t) = (s.clone(), t.clone());
    let pq = to_quad(p, &s, &t);
    let orient = cross(u, v).signum();
    orient != Ordering::Equal
        && cross(u, &pq).signum() == orient
        && cross(&pq, v).signum() == orient
}

/// A unimodular integer pair strictly inside `C_inf(a, b)` for `ab <= -5`.
///
/// Integer points are scanned by increasing max-norm, lexicographically
/// within each shell; the first point that completes a unimodular pair with an
/// earlier interior point wins, paired with the earliest such point.
pub fn wild_integer_pair(a: &Int, b: &Int) -> Result<(IntVec, IntVec)> {
    check_infinite(a, b)?;
    if a * b > Int::from(-5) {
        return Err(Error::Invalid(format!("not wild: a={a}, b={b}")));
    }
    let (u, v) = limit_rays(a, b)?;
    let mut inside: Vec<IntVec> = Vec::new();
    for r in 1i64.. {
        for x in -r..=r {
            for y in -r..=r {
                if x.abs().max(y.abs()) != r {
                    continue;
                }
                let p = crate::ivec(&[x, y]);
                if !strictly_inside(&p, &u, &v) {
                    continue;
                }
                for q in &inside {
                    if (&q[0] * &p[1] - &q[1] * &p[0]).abs().is_one() {
                        return Ok((q.clone(), p));
                    }
                }
                inside.push(p);
            }
        }
    }
    unreachable!("the integer search is unbounded")
}

/// Finite, affine or wild rank-2 type.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rank2Kind {
    Finite,
    Affine,
    Wild,
}

/// Universal coefficient rows for `[[0, a], [b, 0]]`.
#[derive(Clone, Debug)]
pub struct Rank2Universal {
    pub a: Int,
    pub b: Int,
    pub kind: Rank2Kind,
    /// Labelled integer rows, including the affine limit row and the wild
    /// integral pair.
    pub rows: Vec<(String, IntVec)>,
    /// Exact limit rays: empty (finite), one (affine) or two (wild).
    pub limit_rows: Vec<Vec<QuadScalar>>,
    pub integral_pair: Option<(IntVec, IntVec)>,
}

impl Rank2Universal {
    pub fn exchange_matrix(&self) -> crate::ExchangeMatrix {
        crate::ExchangeMatrix::rank2(&self.a, &self.b).expect("validated sign pattern")
    }

    pub fn extended(&self) -> crate::ExtendedExchangeMatrix {
        let rows = self
            .rows
            .iter()
            .map(|(l, r)| (l.clone(), crate::scalar::to_rational_vec(r)));
        crate::ExtendedExchangeMatrix::new(self.exchange_matrix(), rows).expect("distinct labels")
    }

    pub fn vectors(&self) -> Vec<IntVec> {
        self.rows.iter().map(|(_, v)| v.clone()).collect()
    }
}

/// Labels `a, b, ..., z, aa, ab, ...`.
pub fn row_label(mut i: usize) -> String {
    let mut out = Vec::new();
    loop {
        out.push(b'a' + (i % 26) as u8);
        if i < 26 {
            break;
        }
        i = i / 26 - 1;
    }
    out.reverse();
    String::from_utf8(out).expect("ascii")
}

/// Finite type rows: `e1, e2, -e1, -e2` then the family of rays
/// `ray1(m)` for `m = 0, 1, ...` up to the first coordinate vector.
fn finite_rows(a: &Int, b: &Int) -> Vec<IntVec> {
    let mut rows = vec![
        crate::ivec(&[1, 0]),
        crate::ivec(&[0, 1]),
        crate::ivec(&[-1, 0]),
        crate::ivec(&[0, -1]),
    ];
    for m in 0.. {
        let v = ray1(a, b, m);
        if v.iter().filter(|x| !x.is_zero()).count() <= 1 {
            break;
        }
        rows.push(v);
    }
    rows
}

/// Universal extended exchange matrix for `[[0, a], [b, 0]]`.
///
/// Finite type gives the complete list of g-vectors of the transpose. In
/// affine and wild type the rows are `-e1, -e2` and family 1, then `e2, e1`
/// and family 2 (each family interlaced by `m` with `count` members per
/// parity), then the affine limit row or the wild integral pair.
pub fn universal_rank2(a: &Int, b: &Int, count: usize) -> Result<Rank2Universal> {
    check_signs(a, b)?;
    let ab = a * b;
    let (kind, vectors, limit_rows, integral_pair) = if ab > Int::from(-4) {
        (Rank2Kind::Finite, finite_rows(a, b), Vec::new(), None)
    } else {
        let [f1, f2] = ray_families(a, b, count)?;
        let mut vs = vec![crate::ivec(&[-1, 0]), crate::ivec(&[0, -1])];
        vs.extend(f1);
        vs.extend([crate::ivec(&[0, 1]), crate::ivec(&[1, 0])]);
        vs.extend(f2);
        let (u, v) = limit_rays(a, b)?;
        if ab == Int::from(-4) {
            vs.push(affine_limit_row(a, b)?);
            (Rank2Kind::Affine, vs, vec![u], None)
        } else {
            let pair = wild_integer_pair(a, b)?;
            vs.extend([pair.0.clone(), pair.1.clone()]);
            (Rank2Kind::Wild, vs, vec![u, v], Some(pair))
        }
    };
    let rows = vectors.into_iter().enumerate().map(|(i, v)| (row_label(i), v)).collect();
    Ok(Rank2Universal { a: a.clone(), b: b.clone(), kind, rows, limit_rows, integral_pair })
}
