//! g-vectors from principal coefficients.
//!
//! A [`PrincipalPattern`] tracks the exchange matrix and the coefficient rows
//! along a path from the initial seed; a [`GVectorFamily`] tracks the
//! g-vectors of the cluster at the same vertex. Each step evaluates both
//! recurrences (with `[b]_+` and with `[-b]_+`) and fails if they disagree.

use std::collections::{BTreeSet, HashSet};

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exchange::{mutate_row, ExchangeMatrix, ExtendedExchangeMatrix};
use crate::linalg::det_int;
use crate::mutmap::{eta_unchecked, sign_coherent};
use crate::scalar::{to_rational_vec, Scalar};
use crate::{Int, IntVec};

fn unit(n: usize, i: usize) -> IntVec {
    (0..n).map(|j| if i == j { Int::one() } else { Int::zero() }).collect()
}

/// The Y-pattern with principal coefficients at the initial seed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrincipalPattern {
    base: ExchangeMatrix,
    current: ExchangeMatrix,
    coefficients: Vec<IntVec>,
    path: Vec<usize>,
}

impl PrincipalPattern {
    pub fn new(base: ExchangeMatrix) -> Self {
        let n = base.n();
        Self {
            current: base.clone(),
            coefficients: (0..n).map(|i| unit(n, i)).collect(),
            base,
            path: Vec::new(),
        }
    }

    pub fn base(&self) -> &ExchangeMatrix {
        &self.base
    }

    pub fn current(&self) -> &ExchangeMatrix {
        &self.current
    }

    /// The bottom rows `b_{n+i, *}` at the current vertex.
    pub fn coefficient_rows(&self) -> &[IntVec] {
        &self.coefficients
    }

    pub fn path(&self) -> &[usize] {
        &self.path
    }

    /// The current extended matrix with rows labelled `"1"`..`"n"`.
    pub fn extended(&self) -> ExtendedExchangeMatrix {
        let rows = self
            .coefficients
            .iter()
            .enumerate()
            .map(|(i, r)| ((i + 1).to_string(), to_rational_vec(r)));
        ExtendedExchangeMatrix::new(self.current.clone(), rows).expect("well-formed rows")
    }

    pub fn mutate(&self, k: usize) -> Result<Self> {
        self.current.check_index(k)?;
        let bk = self.current.row(k);
        let mut path = self.path.clone();
        path.push(k);
        Ok(Self {
            base: self.base.clone(),
            current: self.current.mutate_unchecked(k),
            coefficients: self.coefficients.iter().map(|r| mutate_row(r, k, bk)).collect(),
            path,
        })
    }
}

/// The g-vectors `g_{1;t}, ..., g_{n;t}` at the vertex reached by `path`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GVectorFamily {
    pub vectors: Vec<IntVec>,
    pub path: Vec<usize>,
}

impl GVectorFamily {
    pub fn initial(n: usize) -> Self {
        Self { vectors: (0..n).map(|i| unit(n, i)).collect(), path: Vec::new() }
    }

    /// The vectors as a sorted set, identifying the cluster up to relabelling.
    pub fn key(&self) -> BTreeSet<IntVec> {
        self.vectors.iter().cloned().collect()
    }
}

fn recurrence(fam: &GVectorFamily, pat: &PrincipalPattern, k: usize, flip: bool) -> IntVec {
    let n = fam.vectors.len();
    let part = |x: &Int| if flip { (-x).pos_part() } else { x.pos_part() };
    let mut g: IntVec = fam.vectors[k].iter().map(|x| -x).collect();
    for i in 0..n {
        let c = part(pat.current.entry(i, k));
        if !c.is_zero() {
            for (gj, x) in g.iter_mut().zip(&fam.vectors[i]) {
                *gj += &c * x;
            }
        }
        let c = part(&pat.coefficients[i][k]);
        if !c.is_zero() {
            for (j, gj) in g.iter_mut().enumerate() {
                *gj -= &c * pat.base.entry(j, i);
            }
        }
    }
    g
}

/// One step of the g-vector recurrence along the edge labelled `k`, using the
/// pattern at the same vertex as `fam`.
pub fn step_g_vectors(fam: &GVectorFamily, pat: &PrincipalPattern, k: usize) -> Result<GVectorFamily> {
    pat.current.check_index(k)?;
    if fam.path != pat.path || fam.vectors.len() != pat.current.n() {
        return Err(Error::Invalid("pattern and family are at different vertices".into()));
    }
    let g = recurrence(fam, pat, k, false);
    if g != recurrence(fam, pat, k, true) {
        return Err(Error::RecurrenceMismatch { path: fam.path.clone(), index: k });
    }
    let mut vectors = fam.vectors.clone();
    vectors[k] = g;
    let mut path = fam.path.clone();
    path.push(k);
    Ok(GVectorFamily { vectors, path })
}

/// A pattern and its g-vectors, stepped together.
#[derive(Clone, Debug)]
pub struct GSeed {
    pub pattern: PrincipalPattern,
    pub family: GVectorFamily,
}

impl GSeed {
    pub fn new(b: ExchangeMatrix) -> Self {
        let n = b.n();
        Self { pattern: PrincipalPattern::new(b), family: GVectorFamily::initial(n) }
    }

    pub fn step(&self, k: usize) -> Result<Self> {
        Ok(Self {
            family: step_g_vectors(&self.family, &self.pattern, k)?,
            pattern: self.pattern.mutate(k)?,
        })
    }

    pub fn walk(&self, seq: &[usize]) -> Result<Self> {
        seq.iter().try_fold(self.clone(), |s, &k| s.step(k))
    }
}

/// Distinct g-vector clusters reached by breadth-first search.
#[derive(Clone, Debug)]
pub struct GVectorFan {
    /// Distinct families in discovery order.
    pub families: Vec<GVectorFamily>,
    /// True when another level of search would find new clusters.
    pub truncated: bool,
}

impl GVectorFan {
    /// Distinct g-vectors in discovery order.
    pub fn vectors(&self) -> Vec<IntVec> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for f in &self.families {
            for v in &f.vectors {
                if seen.insert(v.clone()) {
                    out.push(v.clone());
                }
            }
        }
        out
    }
}

/// Breadth-first search of g-vector clusters of the pattern with initial
/// exchange matrix `b` up to `depth` edges from the initial seed.
///
/// The g-vector fan of `b` lives in the mutation fan of `b`ᵀ; pass the
/// transpose of the matrix whose fan is wanted.
pub fn g_vector_fan(b: &ExchangeMatrix, depth: usize) -> Result<GVectorFan> {
    let root = GSeed::new(b.clone());
    let mut seen: HashSet<BTreeSet<IntVec>> = HashSet::from([root.family.key()]);
    let mut families = vec![root.family.clone()];
    let mut frontier = vec![root];
    for _ in 0..depth {
        let mut next = Vec::new();
        for s in &frontier {
            for k in 0..b.n() {
                let t = s.step(k)?;
                if seen.insert(t.family.key()) {
                    families.push(t.family.clone());
                    next.push(t);
                }
            }
        }
        frontier = next;
    }
    let mut truncated = false;
    'outer: for s in &frontier {
        for k in 0..b.n() {
            if !seen.contains(&s.step(k)?.family.key()) {
                truncated = true;
                break 'outer;
            }
        }
    }
    Ok(GVectorFan { families, truncated })
}

/// `|det| = 1` for the matrix whose rows are the family's vectors.
pub fn unimodular_check(fam: &GVectorFamily) -> bool {
    det_int(&fam.vectors).abs().is_one()
}

/// A disagreement found by [`check_transition_law`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransitionMismatch {
    /// Path from the first base vertex.
    pub path: Vec<usize>,
    pub index: usize,
    pub expected: IntVec,
    pub actual: IntVec,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TransitionReport {
    pub vertices: usize,
    pub mismatches: Vec<TransitionMismatch>,
}

/// Compares g-vectors based at `(b0; t0)` with those based at the neighbour
/// `(mu_k(b0); t1)` at every vertex within `depth` of `t0`, against the rule
/// `g^{t1} = eta_k^{b0ᵀ}(g^{t0})`.
pub fn check_transition_law(b0: &ExchangeMatrix, k: usize, depth: usize) -> Result<TransitionReport> {
    b0.check_index(k)?;
    let b0t = b0.transpose();
    let from_t0 = GSeed::new(b0.clone());
    // The vertex t0 seen from t1 is one step along k.
    let from_t1 = GSeed::new(b0.mutate_unchecked(k)).step(k)?;
    let mut report = TransitionReport::default();
    fn go(
        s0: &GSeed,
        s1: &GSeed,
        depth: usize,
        k: usize,
        b0t: &ExchangeMatrix,
        report: &mut TransitionReport,
    ) -> Result<()> {
        report.vertices += 1;
        for (i, (g0, g1)) in s0.family.vectors.iter().zip(&s1.family.vectors).enumerate() {
            let expected = eta_unchecked(b0t, k, g0);
            if &expected != g1 {
                report.mismatches.push(TransitionMismatch {
                    path: s0.family.path.clone(),
                    index: i,
                    expected,
                    actual: g1.clone(),
                });
            }
        }
        if s0.family.path.len() == depth {
            return Ok(());
        }
        for j in 0..b0t.n() {
            if s0.family.path.last() == Some(&j) {
                continue;
            }
            go(&s0.step(j)?, &s1.step(j)?, depth, k, b0t, report)?;
        }
        Ok(())
    }
    go(&from_t0, &from_t1, depth, k, &b0t, &mut report)?;
    Ok(report)
}

/// The first path (within `depth` steps) at which the principal coefficient
/// rows fail to be sign-coherent, if any.
pub fn principal_rows_violation(b: &ExchangeMatrix, depth: usize) -> Result<Option<Vec<usize>>> {
    fn go(p: &PrincipalPattern, depth: usize) -> Result<Option<Vec<usize>>> {
        if !sign_coherent(p.coefficient_rows()) {
            return Ok(Some(p.path.clone()));
        }
        if p.path.len() == depth {
            return Ok(None);
        }
        for k in 0..p.current.n() {
            if p.path.last() == Some(&k) {
                continue;
            }
            if let Some(v) = go(&p.mutate(k)?, depth)? {
                return Ok(Some(v));
            }
        }
        Ok(None)
    }
    go(&PrincipalPattern::new(b.clone()), depth)
}

/// Whether `v` has a negative entry (used to orient rank-2 rays).
pub fn has_negative(v: &[Int]) -> bool {
    v.iter().any(Signed::is_negative)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ivec;

    fn m(rows: &[&[i64]]) -> ExchangeMatrix {
        ExchangeMatrix::from_i64(rows).unwrap()
    }

    fn set(vs: &[&[i64]]) -> BTreeSet<IntVec> {
        vs.iter().map(|v| ivec(v)).collect()
    }

    #[test]
    fn b2_transpose_walk() {
        let bt = m(&[&[0, -2], &[1, 0]]);
        let mut s = GSeed::new(bt);
        let mut seen = BTreeSet::new();
        for i in 0..6 {
            seen.extend(s.family.vectors.iter().cloned());
            s = s.step(i % 2).unwrap();
        }
        assert_eq!(seen, set(&[&[1, 0], &[0, 1], &[-1, 0], &[0, -1], &[1, -1], &[2, -1]]));
        assert_eq!(s.family.key(), GVectorFamily::initial(2).key());
    }

    #[test]
    fn step_twice_is_identity() {
        let s = GSeed::new(m(&[&[0, 2, 0], &[-1, 0, 1], &[0, -2, 0]]));
        for k in 0..3 {
            let back = s.step(k).unwrap().step(k).unwrap();
            assert_eq!(back.family.vectors, s.family.vectors);
            assert_eq!(back.pattern.coefficient_rows(), s.pattern.coefficient_rows());
        }
    }

    #[test]
    fn first_step_formula() {
        // Column k of the coefficient block is e_k, so the second sum is
        // col(k, B) and g_k becomes -e_k + sum_i [-b_ik]_+ e_i.
        let b = m(&[&[0, 2, 0], &[-1, 0, 1], &[0, -2, 0]]);
        let s = GSeed::new(b.clone());
        for k in 0..3 {
            let mut expect: IntVec = (0..3).map(|i| (-b.entry(i, k)).pos_part()).collect();
            expect[k] = Int::from(-1);
            assert_eq!(s.step(k).unwrap().family.vectors[k], expect);
        }
    }

    #[test]
    fn finite_fan_closes() {
        let fan = g_vector_fan(&m(&[&[0, 1], &[-2, 0]]).transpose(), 10).unwrap();
        assert!(!fan.truncated);
        assert_eq!(fan.families.len(), 6);
        let affine = g_vector_fan(&m(&[&[0, 1], &[-4, 0]]).transpose(), 10).unwrap();
        assert!(affine.truncated);
        let vs = affine.vectors();
        for v in [[1, -1], [3, -2], [5, -3]] {
            assert!(vs.contains(&ivec(&v)));
        }
    }

    #[test]
    fn unimodular_families() {
        assert!(unimodular_check(&GVectorFamily::initial(3)));
        let fam = GVectorFamily { vectors: vec![ivec(&[1, -1]), ivec(&[2, -1])], path: vec![] };
        assert!(unimodular_check(&fam));
        let bad = GVectorFamily { vectors: vec![ivec(&[1, 1]), ivec(&[1, -1])], path: vec![] };
        assert!(!unimodular_check(&bad));
    }

    #[test]
    fn transition_law_depth_zero_and_rank2() {
        let b = m(&[&[0, 1], &[-3, 0]]);
        for k in 0..2 {
            let r = check_transition_law(&b, k, 0).unwrap();
            assert_eq!(r.vertices, 1);
            assert!(r.mismatches.is_empty());
            assert!(check_transition_law(&b, k, 6).unwrap().mismatches.is_empty());
        }
    }

    #[test]
    fn principal_rows_stay_coherent() {
        let b = m(&[&[0, 2, 0], &[-1, 0, 1], &[0, -2, 0]]);
        assert_eq!(principal_rows_violation(&b, 6).unwrap(), None);
        let pat = PrincipalPattern::new(b);
        assert_eq!(pat.extended().row("2").unwrap(), &crate::rvec(&[0, 1, 0]));
    }

    #[test]
    fn mismatched_vertices_rejected() {
        let b = m(&[&[0, 1], &[-1, 0]]);
        let pat = PrincipalPattern::new(b).mutate(0).unwrap();
        assert!(step_g_vectors(&GVectorFamily::initial(2), &pat, 1).is_err());
    }
}
