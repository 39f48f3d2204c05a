//! Coefficient specialization from a universal extended exchange matrix.
//!
//! Each target row is written as a combination of the universal rows lying in
//! a common cone with it, where cones are approximated by sign compatibility
//! of all mutation-map images up to a fixed depth.

use std::collections::BTreeSet;

use indexmap::IndexMap;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::exchange::ExtendedExchangeMatrix;
use crate::linalg::{rank, solve_columns};
use crate::mutmap::{
    check_b_coherent, find_first_sequence, sequence_count, walk, Condition, LinearRelation,
};
use crate::pattern::Seed;
use crate::scalar::is_zero_vec;
use crate::tropical::TropLinearMap;
use crate::{RatVec, Rational};

#[derive(Clone, Debug)]
pub struct SpecializationProblem {
    pub universal: ExtendedExchangeMatrix,
    pub target: ExtendedExchangeMatrix,
    pub depth: usize,
    /// Reject solutions with a negative coefficient.
    pub require_nonnegative: bool,
    /// Reject solutions with a fractional coefficient. Set by [`Self::new`]
    /// when every input row is integral.
    pub require_integral: bool,
}

impl SpecializationProblem {
    pub fn new(universal: ExtendedExchangeMatrix, target: ExtendedExchangeMatrix, depth: usize) -> Result<Self> {
        if universal.base().rows() != target.base().rows() {
            return Err(Error::Invalid("universal and target exchange matrices differ".into()));
        }
        let integral = universal
            .rows()
            .values()
            .chain(target.rows().values())
            .all(|r| r.iter().all(Rational::is_integer));
        Ok(Self { universal, target, depth, require_nonnegative: false, require_integral: integral })
    }

    pub fn with_nonnegative(mut self, on: bool) -> Self {
        self.require_nonnegative = on;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecializationSolution {
    pub map: TropLinearMap,
    /// For each target row, the universal labels with nonzero coefficient.
    pub per_row_support: IndexMap<String, Vec<(String, Rational)>>,
}

/// Pairwise sign compatibility of all images up to `depth`: two vectors are
/// compatible when no image puts them in strictly opposite signs.
fn compatibility(b: &crate::ExchangeMatrix, vs: &[RatVec], depth: usize) -> Vec<Vec<bool>> {
    let n = vs.len();
    let mut ok = vec![vec![true; n]; n];
    walk(b, vs, depth, |_, _, images| {
        for i in 0..n {
            for j in i + 1..n {
                if ok[i][j] && images[i].iter().zip(&images[j]).any(|(x, y)| x.signum() * y.signum() < Rational::zero()) {
                    ok[i][j] = false;
                    ok[j][i] = false;
                }
            }
        }
        std::ops::ControlFlow::Continue(())
    });
    ok
}

fn maximal_cliques(vertices: &[usize], adj: &[Vec<bool>]) -> Vec<Vec<usize>> {
    fn extend(r: &mut Vec<usize>, p: Vec<usize>, x: Vec<usize>, adj: &[Vec<bool>], out: &mut Vec<Vec<usize>>) {
        if p.is_empty() && x.is_empty() {
            out.push(r.clone());
            return;
        }
        let (mut p, mut x) = (p, x);
        while let Some(v) = p.first().copied() {
            let np = p.iter().copied().filter(|&w| w != v && adj[v][w]).collect();
            let nx = x.iter().copied().filter(|&w| adj[v][w]).collect();
            r.push(v);
            extend(r, np, nx, adj, out);
            r.pop();
            p.remove(0);
            x.push(v);
        }
    }
    let mut out = Vec::new();
    extend(&mut Vec::new(), vertices.to_vec(), Vec::new(), adj, &mut out);
    for c in &mut out {
        c.sort_unstable();
    }
    out.sort();
    out
}

enum Rejection {
    Fractional(String, Rational),
    Negative(String),
    Inconsistent,
    Other,
}

pub fn solve_specialization(p: &SpecializationProblem) -> Result<SpecializationSolution> {
    let b = p.universal.base();
    let u_labels: Vec<&String> = p.universal.rows().keys().collect();
    let u_rows: Vec<RatVec> = p.universal.rows().values().cloned().collect();
    let nu = u_rows.len();
    let mut vectors = u_rows.clone();
    vectors.extend(p.target.rows().values().cloned());
    let compat = compatibility(b, &vectors, p.depth);

    let mut map = TropLinearMap::new(
        u_labels.iter().map(|l| l.to_string()).collect(),
        p.target.labels().map(String::from).collect(),
    );
    let mut per_row_support = IndexMap::new();
    for (k, (row_label, a)) in p.target.rows().iter().enumerate() {
        if is_zero_vec(a) {
            per_row_support.insert(row_label.clone(), Vec::new());
            continue;
        }
        let candidates: Vec<usize> =
            (0..nu).filter(|&i| !is_zero_vec(&u_rows[i]) && compat[i][nu + k]).collect();
        let cliques = maximal_cliques(&candidates, &compat);
        let mut rejections = Vec::new();
        let mut accepted = None;
        for clique in &cliques {
            let cols: Vec<RatVec> = clique.iter().map(|&i| u_rows[i].clone()).collect();
            if rank(&cols) < cols.len() {
                rejections.push(Rejection::Other);
                continue;
            }
            let Some(coeffs) = solve_columns(&cols, a) else {
                rejections.push(Rejection::Inconsistent);
                continue;
            };
            let support: Vec<(String, Rational)> = clique
                .iter()
                .zip(&coeffs)
                .filter(|(_, c)| !c.is_zero())
                .map(|(&i, c)| (u_labels[i].clone(), c.clone()))
                .collect();
            if let Some((l, c)) = support.iter().find(|(_, c)| !c.is_integer()).filter(|_| p.require_integral) {
                rejections.push(Rejection::Fractional(l.clone(), c.clone()));
                continue;
            }
            if let Some((l, _)) = support.iter().find(|(_, c)| c.is_negative()).filter(|_| p.require_nonnegative) {
                rejections.push(Rejection::Negative(l.clone()));
                continue;
            }
            let mut rel_coeffs = coeffs.clone();
            rel_coeffs.push(-Rational::from_integer(1.into()));
            let mut rel_vecs = cols;
            rel_vecs.push(a.clone());
            if check_b_coherent(b, &LinearRelation::new(rel_coeffs, rel_vecs)?, p.depth)?.is_refuted() {
                rejections.push(Rejection::Other);
                continue;
            }
            accepted = Some(support);
            break;
        }
        let Some(support) = accepted else {
            let fractional = rejections.iter().find_map(|r| match r {
                Rejection::Fractional(l, v) => Some((l.clone(), v.clone())),
                _ => None,
            });
            if let Some((label, value)) = fractional {
                return Err(Error::Fractional {
                    row: row_label.clone(),
                    label,
                    value: crate::scalar::fmt_rational(&value),
                });
            }
            if let Some(label) = rejections.iter().find_map(|r| match r {
                Rejection::Negative(l) => Some(l.clone()),
                _ => None,
            }) {
                return Err(Error::NegativeCoefficient { row: row_label.clone(), label });
            }
            if !rejections.is_empty() && rejections.iter().all(|r| matches!(r, Rejection::Inconsistent)) {
                return Err(Error::Inconsistent(row_label.clone()));
            }
            return Err(Error::NoCone {
                row: row_label.clone(),
                depth: p.depth,
                candidates: cliques
                    .iter()
                    .map(|c| c.iter().map(|&i| u_labels[i].clone()).collect())
                    .collect(),
            });
        };
        for (l, c) in &support {
            map.set(l, row_label, c.clone())?;
        }
        per_row_support.insert(row_label.clone(), support);
    }
    Ok(SpecializationSolution { map, per_row_support })
}

/// Maps every coefficient of `seed` through the solution. Cluster variables
/// keep their indices; target rows are the solved combinations of source rows.
pub fn apply_specialization(sol: &SpecializationSolution, seed: &Seed) -> Result<Seed> {
    let labels: BTreeSet<String> = seed.matrix().labels().map(String::from).collect();
    if &labels != sol.map.source() {
        return Err(Error::Invalid("seed labels do not match the specialization source".into()));
    }
    let n = seed.n();
    let rows = sol.per_row_support.iter().map(|(k, support)| {
        let mut row = vec![Rational::zero(); n];
        for (i, c) in support {
            let src = seed.matrix().row(i).expect("label checked above");
            for (r, s) in row.iter_mut().zip(src) {
                *r += c * s;
            }
        }
        (k.clone(), row)
    });
    let matrix = ExtendedExchangeMatrix::new(seed.matrix().base().clone(), rows)?;
    let cluster = (0..n)
        .map(|i| seed.laurent(i).map_coefficients(&sol.map))
        .collect::<Result<Vec<_>>>()?;
    Ok(Seed::from_laurent(cluster, matrix))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecializationFailure {
    pub sequence: Vec<usize>,
    pub row: String,
    pub coordinate: usize,
    pub condition: Condition,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    pub depth: usize,
    /// Number of seeds checked (all of them when there is no failure).
    pub vertices: usize,
    pub failure: Option<SpecializationFailure>,
}

impl VerificationReport {
    pub fn is_ok(&self) -> bool {
        self.failure.is_none()
    }
}

/// Checks `sum p_ik b_i = a_k` and `sum p_ik min(b_i, 0) = min(a_k, 0)`
/// coordinatewise at every seed reachable in at most `walk_depth` steps.
pub fn verify_specialization_conditions(
    sol: &SpecializationSolution,
    p: &SpecializationProblem,
    walk_depth: usize,
) -> Result<VerificationReport> {
    let u_index: IndexMap<&str, usize> = p.universal.labels().enumerate().map(|(i, l)| (l, i)).collect();
    let nu = u_index.len();
    let mut vectors: Vec<RatVec> = p.universal.rows().values().cloned().collect();
    vectors.extend(p.target.rows().values().cloned());
    let mut terms = Vec::new();
    for (k, label) in p.target.labels().enumerate() {
        let support = sol.per_row_support.get(label).ok_or_else(|| Error::UnknownLabel(label.to_string()))?;
        let mut t = Vec::new();
        for (i, c) in support {
            let idx = *u_index.get(i.as_str()).ok_or_else(|| Error::UnknownLabel(i.clone()))?;
            t.push((idx, c.clone()));
        }
        terms.push((label.to_string(), nu + k, t));
    }
    let min0 = |x: &Rational| if x.is_negative() { x.clone() } else { Rational::zero() };
    let b = p.universal.base();
    let failure = find_first_sequence(b, &vectors, walk_depth, |seq, _, images| {
        for (label, a, t) in &terms {
            for (j, x) in images[*a].iter().enumerate() {
                let mut lin = -x.clone();
                let mut trunc = -min0(x);
                for (i, c) in t {
                    lin += c * &images[*i][j];
                    trunc += c * min0(&images[*i][j]);
                }
                let condition = if !lin.is_zero() {
                    Condition::Linear
                } else if !trunc.is_zero() {
                    Condition::Truncated
                } else {
                    continue;
                };
                return Some(SpecializationFailure { sequence: seq.to_vec(), row: label.clone(), coordinate: j, condition });
            }
        }
        None
    });
    let vertices = match &failure {
        None => sequence_count(b.n(), walk_depth),
        Some(_) => 0,
    };
    Ok(VerificationReport { depth: walk_depth, vertices, failure })
}
