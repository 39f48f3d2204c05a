//! Bounded-depth approximation of the mutation fan.
//!
//! A wall is the preimage of a coordinate hyperplane under `eta_seq`. It is
//! computed by starting from the closed coordinate orthants of the hyperplane
//! and pulling each cell back one mutation at a time. Each single step is
//! linear on either side of a coordinate hyperplane, so a cell is split there
//! and each half is mapped through its generators.

mod rank2;
mod svg;

use std::collections::BTreeSet;

use num_integer::Integer;
use num_traits::{Signed, Zero};
use rayon::prelude::*;

pub use rank2::{rank2_exact_fan, FanRay, Rank2Fan};
pub use svg::{reference_circle_crossings, render_stereographic, write_svg, RenderOptions};

use crate::error::{Error, Result};
use crate::exchange::ExchangeMatrix;
use crate::linalg::{dot, nullspace, solve_columns};
use crate::mutmap::{eta_unchecked, reduced_sequences};
use crate::scalar::{primitive, to_rational_vec};
use crate::{Int, IntVec, RatVec, Rational};

/// Divides out the content of a nonzero integer vector.
pub(crate) fn primitive_int(v: &[Int]) -> IntVec {
    let g = v.iter().fold(Int::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return v.to_vec();
    }
    v.iter().map(|x| x / &g).collect()
}

fn sign_normalized(mut v: IntVec) -> IntVec {
    if v.iter().find(|x| !x.is_zero()).is_some_and(Signed::is_negative) {
        v.iter_mut().for_each(|x| *x = -x.clone());
    }
    v
}

/// A codimension-one cone: the generators of a closed cell inside the
/// hyperplane `normal . x = 0`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WallPiece {
    pub normal: IntVec,
    pub cell: Vec<IntVec>,
}

impl WallPiece {
    fn from_generators(mut gens: Vec<IntVec>, n: usize) -> Self {
        gens.sort();
        gens.dedup();
        let rows: Vec<RatVec> = gens.iter().map(|g| to_rational_vec(g)).collect();
        let normal = nullspace(&rows, n)
            .first()
            .map(|v| sign_normalized(primitive(v)))
            .unwrap_or_else(|| vec![Int::zero(); n]);
        Self { normal, cell: gens }
    }

    /// Whether `x` lies in the closed piece.
    pub fn contains(&self, x: &[Rational]) -> bool {
        if !dot(&to_rational_vec(&self.normal), x).is_zero() {
            return false;
        }
        let cols: Vec<RatVec> = self.cell.iter().map(|g| to_rational_vec(g)).collect();
        match solve_columns(&cols, x) {
            Some(c) => c.iter().all(|c| !c.is_negative()),
            None => false,
        }
    }

    /// Whether the segment from `u` to `v` crosses the piece transversally,
    /// with `u` and `v` strictly on opposite sides.
    pub fn strictly_separates(&self, u: &[Rational], v: &[Rational]) -> bool {
        let nu = to_rational_vec(&self.normal);
        let (hu, hv) = (dot(&nu, u), dot(&nu, v));
        if hu.is_zero() || hv.is_zero() || hu.is_positive() == hv.is_positive() {
            return false;
        }
        // x = hu*v - hv*u lies on the hyperplane and on the segment's ray.
        let x: RatVec = u.iter().zip(v).map(|(a, b)| &hu * b - &hv * a).collect();
        let x: RatVec = if hu.is_positive() { x } else { x.into_iter().map(|c| -c).collect() };
        self.contains(&x)
    }
}

/// The pieces of the preimage of `x_j = 0` under `eta_seq`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PulledBackHyperplane {
    pub sequence: Vec<usize>,
    pub coordinate: usize,
    pub pieces: Vec<WallPiece>,
}

#[derive(Clone, Debug)]
pub struct FanApproximation {
    pub depth: usize,
    pub walls: Vec<PulledBackHyperplane>,
    /// For rank 2: the distinct wall rays in counterclockwise order from `e1`.
    pub rank2_rays: Option<Vec<IntVec>>,
}

impl FanApproximation {
    /// Distinct pieces over all walls.
    pub fn distinct_pieces(&self) -> BTreeSet<&WallPiece> {
        self.walls.iter().flat_map(|w| &w.pieces).collect()
    }

    pub fn wall_count(&self) -> usize {
        self.distinct_pieces().len()
    }

    /// All generators of all pieces.
    pub fn rays(&self) -> BTreeSet<&IntVec> {
        self.walls.iter().flat_map(|w| &w.pieces).flat_map(|p| &p.cell).collect()
    }

    pub fn separating_piece(&self, u: &[Rational], v: &[Rational]) -> Option<&WallPiece> {
        self.distinct_pieces().into_iter().find(|p| p.strictly_separates(u, v))
    }

    pub fn piece_containing(&self, x: &[Rational]) -> Option<&WallPiece> {
        self.distinct_pieces().into_iter().find(|p| p.contains(x))
    }
}

/// Splits `cell` along `x_k = 0` and maps both halves through `eta_k^B`.
fn split_and_map(b: &ExchangeMatrix, k: usize, cell: &[IntVec]) -> Vec<Vec<IntVec>> {
    let pos: Vec<&IntVec> = cell.iter().filter(|g| g[k].is_positive()).collect();
    let neg: Vec<&IntVec> = cell.iter().filter(|g| g[k].is_negative()).collect();
    let zero: Vec<&IntVec> = cell.iter().filter(|g| g[k].is_zero()).collect();
    let mut cut: Vec<IntVec> = zero.iter().map(|g| (*g).clone()).collect();
    for p in &pos {
        for q in &neg {
            let r: IntVec = p.iter().zip(q.iter()).map(|(x, y)| &p[k] * y - &q[k] * x).collect();
            cut.push(primitive_int(&r));
        }
    }
    let mut halves = Vec::new();
    for side in [&pos, &neg] {
        if side.is_empty() && !(pos.is_empty() && neg.is_empty()) {
            continue;
        }
        let mut gens: Vec<IntVec> = side.iter().map(|g| (*g).clone()).collect();
        gens.extend(cut.iter().cloned());
        gens.sort();
        gens.dedup();
        halves.push(gens.iter().map(|g| primitive_int(&eta_unchecked(b, k, g))).collect());
        if pos.is_empty() && neg.is_empty() {
            break;
        }
    }
    halves
}

fn orthant_cells(n: usize, j: usize) -> Vec<Vec<IntVec>> {
    let others: Vec<usize> = (0..n).filter(|&i| i != j).collect();
    (0..1usize << others.len())
        .map(|mask| {
            others
                .iter()
                .enumerate()
                .map(|(bit, &i)| {
                    let mut e = vec![Int::zero(); n];
                    e[i] = if mask >> bit & 1 == 1 { Int::from(-1) } else { Int::from(1) };
                    e
                })
                .collect()
        })
        .collect()
}

/// The pulled-back coordinate hyperplanes of one sequence.
pub fn pulled_back_hyperplanes(b: &ExchangeMatrix, seq: &[usize]) -> Result<Vec<PulledBackHyperplane>> {
    let n = b.n();
    let mut mats = vec![b.clone()];
    for &k in seq {
        mats.push(mats.last().expect("nonempty").mutate(k)?);
    }
    let mut out = Vec::with_capacity(n);
    for j in 0..n {
        let mut cells = orthant_cells(n, j);
        for r in (1..=seq.len()).rev() {
            let k = seq[r - 1];
            cells = cells.iter().flat_map(|c| split_and_map(&mats[r], k, c)).collect();
        }
        let pieces: BTreeSet<WallPiece> = cells.into_iter().map(|c| WallPiece::from_generators(c, n)).collect();
        out.push(PulledBackHyperplane { sequence: seq.to_vec(), coordinate: j, pieces: pieces.into_iter().collect() });
    }
    Ok(out)
}

/// Walls for every reduced sequence of length at most `m`.
pub fn approximate_fan(b: &ExchangeMatrix, m: usize) -> Result<FanApproximation> {
    if b.n() < 2 {
        return Err(Error::Invalid("the fan approximation needs rank at least 2".into()));
    }
    let seqs = reduced_sequences(b.n(), m);
    let walls: Vec<Vec<PulledBackHyperplane>> = seqs
        .par_iter()
        .map(|s| pulled_back_hyperplanes(b, s))
        .collect::<Result<_>>()?;
    let mut fan = FanApproximation { depth: m, walls: walls.into_iter().flatten().collect(), rank2_rays: None };
    if b.n() == 2 {
        let mut rays: Vec<IntVec> = fan.rays().into_iter().cloned().collect();
        rank2::sort_counterclockwise(&mut rays);
        fan.rank2_rays = Some(rays);
    }
    Ok(fan)
}

/// The closure of the depth-`m` class of a generic point in rank 3, as a cone
/// in inequality form together with its extreme rays in cyclic order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassCone {
    pub depth: usize,
    pub point: RatVec,
    /// Distinct primitive normals `h` with `h . x >= 0` on the cone.
    pub inequalities: Vec<IntVec>,
    pub rays: Vec<IntVec>,
}

impl ClassCone {
    /// Number of two-dimensional faces, equal to the number of extreme rays.
    pub fn wall_count(&self) -> usize {
        self.rays.len()
    }

    /// Pairs of cyclically adjacent extreme rays.
    pub fn edges(&self) -> Vec<(IntVec, IntVec)> {
        let r = &self.rays;
        (0..r.len()).map(|i| (r[i].clone(), r[(i + 1) % r.len()].clone())).collect()
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        self.inequalities.iter().all(|h| !dot(&to_rational_vec(h), x).is_negative())
    }
}

fn det3(a: &[Int], b: &[Int], c: &[Int]) -> Int {
    dot(a, &crate::linalg::cross3(b, c))
}

/// Keeps the part of the cyclic polygon `rays` where `h . x >= 0`.
fn clip(rays: &[IntVec], h: &[Int]) -> Vec<IntVec> {
    let vals: Vec<Int> = rays.iter().map(|r| dot(h, r)).collect();
    if vals.iter().all(|v| !v.is_negative()) {
        return rays.to_vec();
    }
    let mut out = Vec::new();
    for i in 0..rays.len() {
        let j = (i + 1) % rays.len();
        let (vi, vj) = (&vals[i], &vals[j]);
        if !vi.is_negative() {
            out.push(rays[i].clone());
        }
        if (vi.is_positive() && vj.is_negative()) || (vi.is_negative() && vj.is_positive()) {
            let c: IntVec = rays[i].iter().zip(&rays[j]).map(|(x, y)| vi.abs() * y + vj.abs() * x).collect();
            out.push(primitive_int(&c));
        }
    }
    out
}

fn drop_redundant(mut rays: Vec<IntVec>) -> Vec<IntVec> {
    loop {
        let len = rays.len();
        if len < 3 {
            return rays;
        }
        let redundant = (0..len).find(|&i| {
            let (p, c, nx) = (&rays[(i + len - 1) % len], &rays[i], &rays[(i + 1) % len]);
            c == nx || det3(p, c, nx).is_zero()
        });
        match redundant {
            Some(i) => {
                rays.remove(i);
            }
            None => return rays,
        }
    }
}

/// `x -> eta_k^B(x)` on the closed half-space where `x_k` has sign `s`, as a matrix.
fn eta_piece(b: &ExchangeMatrix, k: usize, positive: bool) -> Vec<IntVec> {
    let n = b.n();
    let mut m = vec![vec![Int::zero(); n]; n];
    for (j, row) in m.iter_mut().enumerate() {
        if j == k {
            row[k] = Int::from(-1);
            continue;
        }
        row[j] = Int::from(1);
        let bkj = b.entry(k, j);
        if positive && bkj.is_positive() {
            row[k] = bkj.clone();
        } else if !positive && bkj.is_negative() {
            row[k] = -bkj.clone();
        }
    }
    m
}

fn mat_mul(a: &[IntVec], b: &[IntVec]) -> Vec<IntVec> {
    let n = b[0].len();
    a.iter()
        .map(|row| (0..n).map(|j| row.iter().zip(b).map(|(x, r)| x * &r[j]).sum()).collect())
        .collect()
}

/// The depth-`m` class cone of `p` for a rank-3 matrix. `p` must be generic:
/// no image of `p` may have a zero coordinate.
pub fn class_cone(b: &ExchangeMatrix, p: &[Rational], m: usize) -> Result<ClassCone> {
    if b.n() != 3 || p.len() != 3 {
        return Err(Error::Invalid("class cones are computed in rank 3 only".into()));
    }
    let identity: Vec<IntVec> = (0..3).map(|i| (0..3).map(|j| Int::from(i32::from(i == j))).collect()).collect();
    let mut normals: BTreeSet<IntVec> = BTreeSet::new();
    let mut generic = true;
    fn visit(
        b: &ExchangeMatrix,
        l: &[IntVec],
        p: &[Rational],
        last: Option<usize>,
        depth: usize,
        normals: &mut BTreeSet<IntVec>,
        generic: &mut bool,
    ) {
        let image: RatVec = l.iter().map(|row| dot(&to_rational_vec(row), p)).collect();
        for (j, row) in l.iter().enumerate() {
            if image[j].is_zero() {
                *generic = false;
                return;
            }
            let h: IntVec = if image[j].is_positive() { row.clone() } else { row.iter().map(|x| -x).collect() };
            normals.insert(primitive_int(&h));
        }
        if depth == 0 {
            return;
        }
        for (k, x) in image.iter().enumerate() {
            if Some(k) == last {
                continue;
            }
            let next = mat_mul(&eta_piece(b, k, x.is_positive()), l);
            visit(&b.mutate_unchecked(k), &next, p, Some(k), depth - 1, normals, generic);
        }
    }
    visit(b, &identity, p, None, m, &mut normals, &mut generic);
    if !generic {
        return Err(Error::Invalid("point lies on a wall of the fan approximation".into()));
    }
    let mut rays: Vec<IntVec> = (0..3)
        .map(|i| {
            let mut e = vec![Int::zero(); 3];
            e[i] = if p[i].is_positive() { Int::from(1) } else { Int::from(-1) };
            e
        })
        .collect();
    if det3(&rays[0], &rays[1], &rays[2]).is_negative() {
        rays.swap(1, 2);
    }
    for h in &normals {
        rays = clip(&rays, h);
    }
    let rays = drop_redundant(rays);
    Ok(ClassCone { depth: m, point: p.to_vec(), inequalities: normals.into_iter().collect(), rays })
}
