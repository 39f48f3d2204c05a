//! Mutation maps `eta_k^B`, sign vectors along mutation sequences and the
//! bounded-depth B-coherence checker.
//!
//! Sequences never repeat an index twice in a row: `eta_k` of `mu_k(B)` undoes
//! `eta_k` of `B`, so such sequences add nothing. Sequences are visited in
//! lexicographic order, shorter prefixes first.

use std::fmt;
use std::ops::ControlFlow;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exchange::ExchangeMatrix;
use crate::scalar::Scalar;

/// `eta_k^B(a)`.
pub fn eta<T: Scalar>(b: &ExchangeMatrix, k: usize, a: &[T]) -> Result<Vec<T>> {
    b.check_index(k)?;
    if a.len() != b.n() {
        return Err(Error::DimensionMismatch { expected: b.n(), found: a.len() });
    }
    Ok(eta_unchecked(b, k, a))
}

pub(crate) fn eta_unchecked<T: Scalar>(b: &ExchangeMatrix, k: usize, a: &[T]) -> Vec<T> {
    let ak = &a[k];
    let s = ak.sign();
    a.iter()
        .enumerate()
        .map(|(j, aj)| {
            if j == k {
                return -aj.clone();
            }
            let bkj = b.entry(k, j);
            let t = Scalar::sign(bkj);
            if s >= 0 && t >= 0 {
                aj.clone() + ak.clone() * T::from_int(bkj)
            } else if s <= 0 && t <= 0 {
                aj.clone() - ak.clone() * T::from_int(bkj)
            } else {
                aj.clone()
            }
        })
        .collect()
}

/// `eta_seq^B(a)`, applying `seq[0]` first with the intermediate matrices
/// `B_{i+1} = mu_{k_i}(B_i)`.
pub fn eta_seq<T: Scalar>(b: &ExchangeMatrix, seq: &[usize], a: &[T]) -> Result<Vec<T>> {
    let mut cur = b.clone();
    let mut v = a.to_vec();
    for &k in seq {
        v = eta(&cur, k, &v)?;
        cur = cur.mutate_unchecked(k);
    }
    Ok(v)
}

/// Inverse of [`eta_seq`]: the reversed sequence applied from `mu_seq(B)`.
pub fn eta_seq_inverse<T: Scalar>(b: &ExchangeMatrix, seq: &[usize], a: &[T]) -> Result<Vec<T>> {
    let end = b.mutate_seq(seq)?;
    let rev: Vec<usize> = seq.iter().rev().copied().collect();
    eta_seq(&end, &rev, a)
}

/// Entry-wise sign of a vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignVector(pub Vec<i8>);

impl SignVector {
    pub fn of<T: Scalar>(v: &[T]) -> Self {
        Self(v.iter().map(Scalar::sign).collect())
    }

    /// `self ⪯ other`: every nonzero entry of `self` agrees with `other`.
    pub fn precedes(&self, other: &SignVector) -> bool {
        self.0.iter().zip(&other.0).all(|(&x, &y)| x == 0 || x == y)
    }
}

impl fmt::Display for SignVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &s in &self.0 {
            f.write_str(match s {
                1 => "+",
                -1 => "-",
                _ => "0",
            })?;
        }
        Ok(())
    }
}

/// Per coordinate, all entries are `>= 0` or all are `<= 0`.
pub fn sign_coherent<T: Scalar>(vs: &[Vec<T>]) -> bool {
    let Some(n) = vs.first().map(Vec::len) else {
        return true;
    };
    (0..n).all(|j| {
        let pos = vs.iter().any(|v| v[j].is_positive());
        let neg = vs.iter().any(|v| v[j].is_negative());
        !(pos && neg)
    })
}

/// All sequences of length at most `m` with no immediate repeats, in visiting
/// order.
pub fn reduced_sequences(n: usize, m: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    fn go(n: usize, m: usize, seq: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if seq.len() == m {
            return;
        }
        for k in 0..n {
            if seq.last() == Some(&k) {
                continue;
            }
            seq.push(k);
            out.push(seq.clone());
            go(n, m, seq, out);
            seq.pop();
        }
    }
    go(n, m, &mut Vec::new(), &mut out);
    out
}

/// Number of sequences visited by a walk of depth `m` in rank `n`.
pub fn sequence_count(n: usize, m: usize) -> usize {
    let mut total = 1;
    let mut level = 1;
    for d in 0..m {
        level *= if d == 0 { n } else { n.saturating_sub(1) };
        total += level;
    }
    total
}

type Visit<'a, T> = dyn FnMut(&[usize], &ExchangeMatrix, &[Vec<T>]) -> ControlFlow<()> + 'a;

fn dfs<T: Scalar>(
    seq: &mut Vec<usize>,
    b: &ExchangeMatrix,
    vs: &[Vec<T>],
    depth: usize,
    visit: &mut Visit<'_, T>,
) -> ControlFlow<()> {
    visit(seq, b, vs)?;
    if seq.len() == depth {
        return ControlFlow::Continue(());
    }
    for k in 0..b.n() {
        if seq.last() == Some(&k) {
            continue;
        }
        let next_vs: Vec<Vec<T>> = vs.iter().map(|v| eta_unchecked(b, k, v)).collect();
        let next_b = b.mutate_unchecked(k);
        seq.push(k);
        let flow = dfs(seq, &next_b, &next_vs, depth, visit);
        seq.pop();
        flow?;
    }
    ControlFlow::Continue(())
}

/// Visits every reduced sequence of length `<= depth` in order with the
/// mutated matrix and the images of `vectors`. Stops when `visit` breaks.
pub fn walk<T: Scalar>(
    b: &ExchangeMatrix,
    vectors: &[Vec<T>],
    depth: usize,
    mut visit: impl FnMut(&[usize], &ExchangeMatrix, &[Vec<T>]) -> ControlFlow<()>,
) {
    let _ = dfs(&mut Vec::new(), b, vectors, depth, &mut visit);
}

/// Runs `f` on every sequence, evaluating the top-level branches in parallel,
/// and returns the results in visiting order.
pub fn collect_over_sequences<T, R, F>(
    b: &ExchangeMatrix,
    vectors: &[Vec<T>],
    depth: usize,
    f: F,
) -> Vec<R>
where
    T: Scalar,
    R: Send,
    F: Fn(&[usize], &ExchangeMatrix, &[Vec<T>]) -> Option<R> + Sync,
{
    let mut out: Vec<R> = f(&[], b, vectors).into_iter().collect();
    if depth == 0 {
        return out;
    }
    let branches: Vec<Vec<R>> = (0..b.n())
        .into_par_iter()
        .map(|k| {
            let mut acc = Vec::new();
            let vs: Vec<Vec<T>> = vectors.iter().map(|v| eta_unchecked(b, k, v)).collect();
            let mut visit = |s: &[usize], m: &ExchangeMatrix, v: &[Vec<T>]| {
                acc.extend(f(s, m, v));
                ControlFlow::Continue(())
            };
            let _ = dfs(&mut vec![k], &b.mutate_unchecked(k), &vs, depth, &mut visit);
            acc
        })
        .collect();
    out.extend(branches.into_iter().flatten());
    out
}

/// The first sequence (in visiting order) where `f` returns `Some`.
pub fn find_first_sequence<T, R, F>(
    b: &ExchangeMatrix,
    vectors: &[Vec<T>],
    depth: usize,
    f: F,
) -> Option<R>
where
    T: Scalar,
    R: Send,
    F: Fn(&[usize], &ExchangeMatrix, &[Vec<T>]) -> Option<R> + Sync,
{
    if let Some(r) = f(&[], b, vectors) {
        return Some(r);
    }
    if depth == 0 {
        return None;
    }
    let branches: Vec<Option<R>> = (0..b.n())
        .into_par_iter()
        .map(|k| {
            let mut hit = None;
            let vs: Vec<Vec<T>> = vectors.iter().map(|v| eta_unchecked(b, k, v)).collect();
            let mut visit = |s: &[usize], m: &ExchangeMatrix, v: &[Vec<T>]| match f(s, m, v) {
                Some(r) => {
                    hit = Some(r);
                    ControlFlow::Break(())
                }
                None => ControlFlow::Continue(()),
            };
            let _ = dfs(&mut vec![k], &b.mutate_unchecked(k), &vs, depth, &mut visit);
            hit
        })
        .collect();
    branches.into_iter().flatten().next()
}

/// Sign vectors of `eta_seq(a)` over all reduced sequences up to a depth.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DepthClass {
    pub depth: usize,
    pub key: Vec<(Vec<usize>, SignVector)>,
}

pub fn depth_class<T: Scalar>(b: &ExchangeMatrix, a: &[T], m: usize) -> Result<DepthClass> {
    if a.len() != b.n() {
        return Err(Error::DimensionMismatch { expected: b.n(), found: a.len() });
    }
    let key = collect_over_sequences(b, &[a.to_vec()], m, |s, _, v| {
        Some((s.to_vec(), SignVector::of(&v[0])))
    });
    Ok(DepthClass { depth: m, key })
}

/// The first sequence at which the images of `vs` fail to be sign-coherent.
pub fn separating_sequence<T: Scalar>(
    b: &ExchangeMatrix,
    vs: &[Vec<T>],
    m: usize,
) -> Option<Vec<usize>> {
    find_first_sequence(b, vs, m, |s, _, v| (!sign_coherent(v)).then(|| s.to_vec()))
}

/// Whether the images of `vs` stay sign-coherent for every sequence up to
/// length `m`. `false` certifies that no B-cone contains all of `vs`; `true`
/// is only evidence.
pub fn same_cone_up_to_depth<T: Scalar>(b: &ExchangeMatrix, vs: &[Vec<T>], m: usize) -> bool {
    separating_sequence(b, vs, m).is_none()
}

/// A formal expression `sum_i c_i v_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearRelation<T> {
    terms: Vec<(T, Vec<T>)>,
}

impl<T: Scalar> LinearRelation<T> {
    pub fn new(coeffs: Vec<T>, vectors: Vec<Vec<T>>) -> Result<Self> {
        if coeffs.is_empty() || coeffs.len() != vectors.len() {
            return Err(Error::Invalid(format!(
                "relation needs matching nonempty coefficient and vector lists ({} vs {})",
                coeffs.len(),
                vectors.len()
            )));
        }
        let n = vectors[0].len();
        if let Some(v) = vectors.iter().find(|v| v.len() != n) {
            return Err(Error::DimensionMismatch { expected: n, found: v.len() });
        }
        Ok(Self { terms: coeffs.into_iter().zip(vectors).collect() })
    }

    pub fn n(&self) -> usize {
        self.terms[0].1.len()
    }

    pub fn terms(&self) -> &[(T, Vec<T>)] {
        &self.terms
    }

    pub fn coefficients(&self) -> Vec<T> {
        self.terms.iter().map(|(c, _)| c.clone()).collect()
    }

    pub fn vectors(&self) -> Vec<Vec<T>> {
        self.terms.iter().map(|(_, v)| v.clone()).collect()
    }

    /// `sum_i c_i v_i`.
    pub fn evaluate(&self) -> Vec<T> {
        combine(&self.coefficients(), &self.vectors(), |x| x.clone())
    }
}

fn combine<T: Scalar>(coeffs: &[T], vs: &[Vec<T>], g: impl Fn(&T) -> T) -> Vec<T> {
    let n = vs.first().map_or(0, Vec::len);
    (0..n)
        .map(|j| {
            coeffs
                .iter()
                .zip(vs)
                .fold(T::zero(), |acc, (c, v)| acc + c.clone() * g(&v[j]))
        })
        .collect()
}

fn min0<T: Scalar>(x: &T) -> T {
    if x.is_negative() {
        x.clone()
    } else {
        T::zero()
    }
}

/// Which defining condition failed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Condition {
    /// `sum c_i eta(v_i) = 0`.
    Linear,
    /// `sum c_i min(eta(v_i), 0) = 0`.
    Truncated,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoherenceVerdict {
    RefutedAt {
        sequence: Vec<usize>,
        condition: Condition,
        coordinate: usize,
    },
    /// Both conditions hold for every sequence up to this length. This is
    /// evidence, not a proof of coherence.
    HoldsToDepth(usize),
}

impl CoherenceVerdict {
    pub fn is_refuted(&self) -> bool {
        matches!(self, Self::RefutedAt { .. })
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct CoherenceOptions {
    /// Check the truncated condition even when `B` has no zero column.
    pub verify_shortcut: bool,
}

pub fn check_b_coherent<T: Scalar>(
    b: &ExchangeMatrix,
    rel: &LinearRelation<T>,
    m: usize,
) -> Result<CoherenceVerdict> {
    check_b_coherent_with(b, rel, m, CoherenceOptions::default())
}

/// Checks both conditions for every sequence of length `<= m`.
///
/// When `B` has no zero column the truncated condition at `k` for a sequence
/// follows from the linear condition at that sequence and at its extension by
/// `k`. In that case only the linear condition is checked, one level deeper,
/// so the verdict still covers both conditions to depth `m`; a refutation may
/// therefore be reported at length `m + 1`.
pub fn check_b_coherent_with<T: Scalar>(
    b: &ExchangeMatrix,
    rel: &LinearRelation<T>,
    m: usize,
    opts: CoherenceOptions,
) -> Result<CoherenceVerdict> {
    if rel.n() != b.n() {
        return Err(Error::DimensionMismatch { expected: b.n(), found: rel.n() });
    }
    let shortcut = !b.has_zero_column() && !opts.verify_shortcut;
    let depth = if shortcut { m + 1 } else { m };
    let coeffs = rel.coefficients();
    let hit = find_first_sequence(b, &rel.vectors(), depth, |s, _, vs| {
        let lin = combine(&coeffs, vs, Clone::clone);
        if let Some(j) = lin.iter().position(|x| !x.is_zero()) {
            return Some(CoherenceVerdict::RefutedAt {
                sequence: s.to_vec(),
                condition: Condition::Linear,
                coordinate: j,
            });
        }
        if shortcut {
            return None;
        }
        let trunc = combine(&coeffs, vs, min0);
        trunc.iter().position(|x| !x.is_zero()).map(|j| CoherenceVerdict::RefutedAt {
            sequence: s.to_vec(),
            condition: Condition::Truncated,
            coordinate: j,
        })
    });
    Ok(hit.unwrap_or(CoherenceVerdict::HoldsToDepth(m)))
}

/// A term whose image is the only one with a strictly positive (or strictly
/// negative) entry in some coordinate, while its coefficient is nonzero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OneSidedWitness {
    pub sequence: Vec<usize>,
    pub coordinate: usize,
    pub term: usize,
    pub positive: bool,
}

/// Fast refutation: finds a term that must have coefficient zero in any
/// coherent relation but does not. A positive witness at a sequence refutes
/// at that sequence; a negative one refutes at the sequence extended by the
/// witness coordinate.
pub fn one_sided_witness<T: Scalar>(
    b: &ExchangeMatrix,
    rel: &LinearRelation<T>,
    m: usize,
) -> Option<OneSidedWitness> {
    let coeffs = rel.coefficients();
    find_first_sequence(b, &rel.vectors(), m, |s, _, vs| {
        for j in 0..b.n() {
            for positive in [true, false] {
                let side = |x: &T| if positive { x.is_positive() } else { x.is_negative() };
                let mut hits = vs.iter().enumerate().filter(|(_, v)| side(&v[j]));
                let Some((i, _)) = hits.next() else { continue };
                if hits.next().is_some() || coeffs[i].is_zero() {
                    continue;
                }
                return Some(OneSidedWitness {
                    sequence: s.to_vec(),
                    coordinate: j,
                    term: i,
                    positive,
                });
            }
        }
        None
    })
}

/// Evidence that a relation is local: it holds exactly and its vectors share
/// a B-cone up to the recorded depth.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalCertificate {
    pub depth: usize,
}

pub fn local_relation_certificate<T: Scalar>(
    b: &ExchangeMatrix,
    rel: &LinearRelation<T>,
    m: usize,
) -> Option<LocalCertificate> {
    let exact = rel.evaluate().iter().all(|x| x.is_zero());
    (exact && same_cone_up_to_depth(b, &rel.vectors(), m)).then_some(LocalCertificate { depth: m })
}
