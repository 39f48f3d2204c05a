use std::cmp::Ordering;

use num_traits::{One, Signed, Zero};

use crate::error::Result;
use crate::rank2::{affine_limit_row, limit_rays, ray_families, universal_rank2, QuadScalar, Rank2Kind};
use crate::{Int, IntVec, Rational};

/// A ray of an exact rank-2 fan.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FanRay {
    Integer(IntVec),
    /// An irrational limit ray.
    Limit(Vec<QuadScalar>),
}

impl FanRay {
    fn coords(&self, s: &Int, t: &Int) -> [QuadScalar; 2] {
        match self {
            FanRay::Integer(v) => [
                QuadScalar::rational(s, t, Rational::from_integer(v[0].clone())),
                QuadScalar::rational(s, t, Rational::from_integer(v[1].clone())),
            ],
            FanRay::Limit(v) => [v[0].clone(), v[1].clone()],
        }
    }
}

#[derive(Clone, Debug)]
pub struct Rank2Fan {
    pub kind: Rank2Kind,
    /// Counterclockwise starting from `e1`.
    pub rays: Vec<FanRay>,
}

fn upper(x: Ordering, y: Ordering) -> bool {
    y == Ordering::Greater || (y == Ordering::Equal && x == Ordering::Greater)
}

fn angle_cmp(u: &[QuadScalar; 2], v: &[QuadScalar; 2]) -> Ordering {
    let hu = upper(u[0].signum(), u[1].signum());
    let hv = upper(v[0].signum(), v[1].signum());
    if hu != hv {
        return if hu { Ordering::Less } else { Ordering::Greater };
    }
    let cross = u[0].clone() * v[1].clone() - u[1].clone() * v[0].clone();
    cross.signum().reverse()
}

pub(crate) fn sort_counterclockwise(rays: &mut [IntVec]) {
    let one = Int::one();
    let q = |v: &IntVec| FanRay::Integer(v.clone()).coords(&one, &one);
    rays.sort_by(|u, v| angle_cmp(&q(u), &q(v)));
}

/// Rays of the mutation fan of `[[0, a], [b, 0]]` in counterclockwise order.
/// Infinite types list `count` members per parity class of each family plus
/// the limit ray(s).
pub fn rank2_exact_fan(a: &Int, b: &Int, count: usize) -> Result<Rank2Fan> {
    let ab = a * b;
    let (kind, mut rays) = if ab > Int::from(-4) {
        let u = universal_rank2(a, b, count)?;
        (Rank2Kind::Finite, u.vectors().into_iter().map(FanRay::Integer).collect::<Vec<_>>())
    } else {
        let [f1, f2] = ray_families(a, b, count)?;
        let mut rays: Vec<FanRay> = [[1, 0], [0, 1], [-1, 0], [0, -1]]
            .iter()
            .map(|r| FanRay::Integer(crate::ivec(r)))
            .collect();
        rays.extend(f1.into_iter().chain(f2).map(FanRay::Integer));
        if ab == Int::from(-4) {
            rays.push(FanRay::Integer(affine_limit_row(a, b)?));
            (Rank2Kind::Affine, rays)
        } else {
            let (u, v) = limit_rays(a, b)?;
            rays.push(FanRay::Limit(u));
            rays.push(FanRay::Limit(v));
            (Rank2Kind::Wild, rays)
        }
    };
    let (s, t) = if ab.is_negative() { (-&ab, -&ab - 4) } else { (Int::one(), Int::one()) };
    let (s, t) = if t.is_negative() { (Int::one(), Int::one()) } else { (s, t) };
    rays.sort_by(|u, v| angle_cmp(&u.coords(&s, &t), &v.coords(&s, &t)));
    rays.dedup_by(|u, v| {
        let (cu, cv) = (u.coords(&s, &t), v.coords(&s, &t));
        angle_cmp(&cu, &cv) == Ordering::Equal
    });
    debug_assert!(rays.iter().all(|r| !matches!(r, FanRay::Integer(v) if v.iter().all(Zero::is_zero))));
    Ok(Rank2Fan { kind, rays })
}
