//! Exchange matrices and their mutation.
//!
//! Mutation follows the usual rule: `b'_ij = -b_ij` when `i = k` or `j = k`,
//! and `b'_ij = b_ij + sgn(b_kj) [b_ik b_kj]_+` otherwise. Coefficient rows
//! transform by the same rule.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;

use indexmap::IndexMap;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::{Int, IntVec, RatVec, Rational};

/// A skew-symmetrizable integer matrix together with its minimal skew-symmetrizer.
#[derive(Clone, Debug)]
pub struct ExchangeMatrix {
    entries: Vec<IntVec>,
    d: IntVec,
}

impl PartialEq for ExchangeMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.entries == other.entries
    }
}

impl Eq for ExchangeMatrix {}

impl std::hash::Hash for ExchangeMatrix {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.entries.hash(state);
    }
}

/// One entry of a mutated row, for a row other than `k` and a column `j != k`.
fn mutated_entry<T: Scalar>(b_ij: &T, b_ik: &T, b_kj: &T) -> T {
    let p = (b_ik.clone() * b_kj.clone()).pos_part();
    match b_kj.sign() {
        1 => b_ij.clone() + p,
        -1 => b_ij.clone() - p,
        _ => b_ij.clone(),
    }
}

/// Mutates a single row `row` (not the `k`-th principal row) given the `k`-th
/// principal row `bk`.
pub(crate) fn mutate_row<T: Scalar>(row: &[T], k: usize, bk: &[T]) -> Vec<T> {
    row.iter()
        .enumerate()
        .map(|(j, b_ij)| {
            if j == k {
                -b_ij.clone()
            } else {
                mutated_entry(b_ij, &row[k], &bk[j])
            }
        })
        .collect()
}

impl ExchangeMatrix {
    /// Builds a matrix, computing the minimal positive skew-symmetrizer.
    pub fn new(entries: Vec<IntVec>) -> Result<Self> {
        let n = entries.len();
        if n == 0 || entries.iter().any(|r| r.len() != n) {
            return Err(Error::NotSquare);
        }
        let d = skew_symmetrizer(&entries)?;
        Ok(Self { entries, d })
    }

    pub fn from_i64<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self> {
        Self::new(rows.iter().map(|r| crate::ivec(r.as_ref())).collect())
    }

    /// The rank-2 matrix `[[0, a], [b, 0]]`.
    pub fn rank2(a: &Int, b: &Int) -> Result<Self> {
        Self::new(vec![vec![Int::zero(), a.clone()], vec![b.clone(), Int::zero()]])
    }

    pub fn n(&self) -> usize {
        self.entries.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> &Int {
        &self.entries[i][j]
    }

    pub fn rows(&self) -> &[IntVec] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[Int] {
        &self.entries[i]
    }

    pub fn column(&self, j: usize) -> IntVec {
        self.entries.iter().map(|r| r[j].clone()).collect()
    }

    /// Positive integers `d_i` with `d_i b_ij = -d_j b_ji`, minimal on each
    /// connected component.
    pub fn skew_symmetrizer(&self) -> &[Int] {
        &self.d
    }

    pub fn check_index(&self, k: usize) -> Result<()> {
        if k < self.n() {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange { index: k, n: self.n() })
        }
    }

    pub fn mutate(&self, k: usize) -> Result<Self> {
        self.check_index(k)?;
        Ok(self.mutate_unchecked(k))
    }

    pub(crate) fn mutate_unchecked(&self, k: usize) -> Self {
        let bk = &self.entries[k];
        let entries = self
            .entries
            .iter()
            .enumerate()
            .map(|(i, row)| {
                if i == k {
                    row.iter().map(|x| -x).collect()
                } else {
                    mutate_row(row, k, bk)
                }
            })
            .collect();
        Self { entries, d: self.d.clone() }
    }

    /// Applies `seq[0]` first.
    pub fn mutate_seq(&self, seq: &[usize]) -> Result<Self> {
        seq.iter().try_fold(self.clone(), |m, &k| m.mutate(k))
    }

    pub fn transpose(&self) -> Self {
        let n = self.n();
        let entries: Vec<IntVec> = (0..n).map(|j| self.column(j)).collect();
        let d = skew_symmetrizer(&entries).expect("transpose of a skew-symmetrizable matrix");
        Self { entries, d }
    }

    pub fn neg(&self) -> Self {
        Self {
            entries: self.entries.iter().map(|r| r.iter().map(|x| -x).collect()).collect(),
            d: self.d.clone(),
        }
    }

    /// The matrix `B'` with `b'_{p(i) p(j)} = b_ij`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        let n = self.n();
        check_permutation(perm, n)?;
        let mut entries = vec![vec![Int::zero(); n]; n];
        let mut d = vec![Int::zero(); n];
        for i in 0..n {
            d[perm[i]] = self.d[i].clone();
            for j in 0..n {
                entries[perm[i]][perm[j]] = self.entries[i][j].clone();
            }
        }
        Ok(Self { entries, d })
    }

    pub fn has_zero_column(&self) -> bool {
        (0..self.n()).any(|j| self.entries.iter().all(|r| r[j].is_zero()))
    }

    pub fn is_skew_symmetric(&self) -> bool {
        self.d.iter().all(One::is_one)
    }

    /// Diagonal 2, off-diagonal `-|b_ij|`.
    pub fn cartan_companion(&self) -> CartanMatrix {
        let entries = self
            .entries
            .iter()
            .enumerate()
            .map(|(i, row)| {
                row.iter()
                    .enumerate()
                    .map(|(j, x)| if i == j { Int::from(2) } else { -x.abs() })
                    .collect()
            })
            .collect();
        CartanMatrix { entries }
    }

    /// An order `p` of the indices such that `b_ij > 0` implies `i` precedes
    /// `j`, if one exists. Ties are broken by smallest index.
    pub fn acyclic_order(&self) -> Option<Vec<usize>> {
        let n = self.n();
        let mut indeg = vec![0usize; n];
        for row in &self.entries {
            for (j, x) in row.iter().enumerate() {
                if x.is_positive() {
                    indeg[j] += 1;
                }
            }
        }
        let mut ready: BTreeSet<usize> = (0..n).filter(|&j| indeg[j] == 0).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(i) = ready.pop_first() {
            order.push(i);
            for (j, x) in self.entries[i].iter().enumerate() {
                if x.is_positive() {
                    indeg[j] -= 1;
                    if indeg[j] == 0 {
                        ready.insert(j);
                    }
                }
            }
        }
        (order.len() == n).then_some(order)
    }

    pub fn is_acyclic(&self) -> bool {
        self.acyclic_order().is_some()
    }

    /// A positive integer diagonal `sigma` with `other = sigma^-1 self sigma`,
    /// when one exists. Each connected component is scaled to be primitive.
    pub fn rescaling_to(&self, other: &ExchangeMatrix) -> Option<IntVec> {
        let n = self.n();
        if other.n() != n {
            return None;
        }
        for i in 0..n {
            for j in 0..n {
                let (b, c) = (&self.entries[i][j], &other.entries[i][j]);
                if b.signum() != c.signum()
                    || b * &self.entries[j][i] != c * &other.entries[j][i]
                {
                    return None;
                }
            }
        }
        // sigma_i b'_ij = b_ij sigma_j
        let mut sigma: Vec<Option<Rational>> = vec![None; n];
        for comp in self.reducible_components() {
            sigma[comp[0]] = Some(Rational::one());
            let mut queue = VecDeque::from([comp[0]]);
            while let Some(i) = queue.pop_front() {
                let si = sigma[i].clone().unwrap();
                for (j, b) in self.entries[i].iter().enumerate() {
                    if b.is_zero() {
                        continue;
                    }
                    let sj = si.clone() * Rational::new(other.entries[i][j].clone(), b.clone());
                    match &sigma[j] {
                        None => {
                            sigma[j] = Some(sj);
                            queue.push_back(j);
                        }
                        Some(old) if *old != sj => return None,
                        Some(_) => {}
                    }
                }
            }
        }
        let sigma: Vec<Rational> = sigma.into_iter().map(Option::unwrap).collect();
        let mut out = vec![Int::zero(); n];
        for comp in self.reducible_components() {
            let vals: Vec<Rational> = comp.iter().map(|&i| sigma[i].clone()).collect();
            for (&i, v) in comp.iter().zip(crate::scalar::primitive(&vals)) {
                out[i] = v;
            }
        }
        let check = (0..n).all(|i| {
            (0..n).all(|j| {
                Rational::new(&self.entries[i][j] * &out[j], out[i].clone())
                    == Rational::from_integer(other.entries[i][j].clone())
            })
        });
        check.then_some(out)
    }

    /// Connected components of the graph with an edge `i - j` when `b_ij != 0`.
    pub fn reducible_components(&self) -> Vec<Vec<usize>> {
        components(&self.entries)
    }

    /// The lexicographically smallest matrix among all simultaneous
    /// row/column permutations.
    pub fn canonical_up_to_permutation(&self) -> Vec<IntVec> {
        let n = self.n();
        let mut best: Option<Vec<IntVec>> = None;
        for perm in permutations(n) {
            let m = self.permuted(&perm).expect("valid permutation").entries;
            if best.as_ref().is_none_or(|b| m < *b) {
                best = Some(m);
            }
        }
        best.expect("at least one permutation")
    }
}

impl fmt::Display for ExchangeMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_rows(f, &self.entries)
    }
}

fn fmt_rows<T: fmt::Display>(f: &mut fmt::Formatter<'_>, rows: &[Vec<T>]) -> fmt::Result {
    write!(f, "[")?;
    for (i, row) in rows.iter().enumerate() {
        if i > 0 {
            write!(f, ", ")?;
        }
        write!(f, "[")?;
        for (j, x) in row.iter().enumerate() {
            if j > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "]")?;
    }
    write!(f, "]")
}

fn check_permutation(perm: &[usize], n: usize) -> Result<()> {
    let seen: BTreeSet<usize> = perm.iter().copied().collect();
    if perm.len() != n || seen.len() != n || seen.iter().any(|&p| p >= n) {
        return Err(Error::Invalid(format!("not a permutation of 0..{n}: {perm:?}")));
    }
    Ok(())
}

pub(crate) fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                go(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

fn components(entries: &[IntVec]) -> Vec<Vec<usize>> {
    let n = entries.len();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut comp = vec![s];
        let mut stack = vec![s];
        while let Some(i) = stack.pop() {
            for j in 0..n {
                if !seen[j] && (!entries[i][j].is_zero() || !entries[j][i].is_zero()) {
                    seen[j] = true;
                    comp.push(j);
                    stack.push(j);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

fn skew_symmetrizer(entries: &[IntVec]) -> Result<IntVec> {
    let n = entries.len();
    let mut d: Vec<Option<Rational>> = vec![None; n];
    for comp in components(entries) {
        d[comp[0]] = Some(Rational::one());
        let mut queue = VecDeque::from([comp[0]]);
        while let Some(i) = queue.pop_front() {
            let di = d[i].clone().unwrap();
            for j in 0..n {
                let (bij, bji) = (&entries[i][j], &entries[j][i]);
                if bij.is_zero() && bji.is_zero() {
                    continue;
                }
                if bij.is_zero() || bji.is_zero() || bij.signum() == bji.signum() {
                    return Err(Error::NotSkewSymmetrizable(format!(
                        "entries ({i},{j}) and ({j},{i}) are {bij} and {bji}"
                    )));
                }
                let dj = -(di.clone() * Rational::new(bij.clone(), bji.clone()));
                match &d[j] {
                    None => {
                        d[j] = Some(dj);
                        queue.push_back(j);
                    }
                    Some(old) if *old != dj => {
                        return Err(Error::NotSkewSymmetrizable(format!(
                            "inconsistent constraint through ({i},{j})"
                        )))
                    }
                    Some(_) => {}
                }
            }
        }
    }
    if entries.iter().enumerate().any(|(i, r)| !r[i].is_zero()) {
        return Err(Error::NotSkewSymmetrizable("nonzero diagonal".into()));
    }
    let d: Vec<Rational> = d.into_iter().map(Option::unwrap).collect();
    let mut out = vec![Int::zero(); n];
    for comp in components(entries) {
        let lcm = comp.iter().fold(Int::one(), |acc, &i| acc.lcm(d[i].denom()));
        let ints: Vec<Int> = comp.iter().map(|&i| (d[i].clone() * &lcm).to_integer()).collect();
        let g = ints.iter().fold(Int::zero(), |acc, x| acc.gcd(x));
        for (&i, v) in comp.iter().zip(ints) {
            out[i] = v / &g;
        }
    }
    Ok(out)
}

/// Cartan matrix: diagonal 2, nonpositive off-diagonal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CartanMatrix {
    entries: Vec<IntVec>,
}

impl CartanMatrix {
    pub fn rows(&self) -> &[IntVec] {
        &self.entries
    }

    /// The primitive positive integer vector `t` with `A t = 0`, when the
    /// kernel is one-dimensional and spanned by a strictly positive vector.
    /// For an indecomposable matrix this identifies affine type.
    pub fn affine_null_vector(&self) -> Option<IntVec> {
        let rows: Vec<RatVec> = self
            .entries
            .iter()
            .map(|r| crate::scalar::to_rational_vec(r))
            .collect();
        let ns = crate::linalg::nullspace(&rows, self.entries.len());
        if ns.len() != 1 {
            return None;
        }
        let mut t = crate::scalar::primitive(&ns[0]);
        if t.iter().all(|x| x.is_negative()) {
            t = t.into_iter().map(|x| -x).collect();
        }
        t.iter().all(|x| x.is_positive()).then_some(t)
    }
}

impl fmt::Display for CartanMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_rows(f, &self.entries)
    }
}

/// An exchange matrix with labelled rational coefficient rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtendedExchangeMatrix {
    base: ExchangeMatrix,
    rows: IndexMap<String, RatVec>,
}

impl ExtendedExchangeMatrix {
    pub fn new<L: Into<String>>(
        base: ExchangeMatrix,
        rows: impl IntoIterator<Item = (L, RatVec)>,
    ) -> Result<Self> {
        let mut map = IndexMap::new();
        for (label, row) in rows {
            let label = label.into();
            if row.len() != base.n() {
                return Err(Error::DimensionMismatch { expected: base.n(), found: row.len() });
            }
            if map.insert(label.clone(), row).is_some() {
                return Err(Error::DuplicateLabel(label));
            }
        }
        Ok(Self { base, rows: map })
    }

    /// Identity coefficient rows labelled `"1"`, ..., `"n"`.
    pub fn principal(base: ExchangeMatrix) -> Self {
        let n = base.n();
        let rows = (0..n).map(|i| {
            let row = (0..n)
                .map(|j| if i == j { Rational::one() } else { Rational::zero() })
                .collect();
            ((i + 1).to_string(), row)
        });
        Self::new(base, rows).expect("principal rows are well formed")
    }

    pub fn base(&self) -> &ExchangeMatrix {
        &self.base
    }

    pub fn n(&self) -> usize {
        self.base.n()
    }

    pub fn rows(&self) -> &IndexMap<String, RatVec> {
        &self.rows
    }

    pub fn row(&self, label: &str) -> Option<&RatVec> {
        self.rows.get(label)
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.rows.keys().map(String::as_str)
    }

    pub fn mutate(&self, k: usize) -> Result<Self> {
        self.base.check_index(k)?;
        let bk: RatVec = crate::scalar::to_rational_vec(self.base.row(k));
        let rows = self
            .rows
            .iter()
            .map(|(l, r)| (l.clone(), mutate_row(r, k, &bk)))
            .collect();
        Ok(Self { base: self.base.mutate_unchecked(k), rows })
    }

    /// Applies `seq[0]` first.
    pub fn mutate_seq(&self, seq: &[usize]) -> Result<Self> {
        seq.iter().try_fold(self.clone(), |m, &k| m.mutate(k))
    }
}

/// Result of [`mutation_class`].
#[derive(Clone, Debug)]
pub struct MutationClass {
    pub matrices: Vec<ExchangeMatrix>,
    /// False when the cap stopped the search before closure.
    pub complete: bool,
}

impl MutationClass {
    /// Number of classes up to simultaneous row/column permutation.
    pub fn count_up_to_permutation(&self) -> usize {
        self.matrices
            .iter()
            .map(ExchangeMatrix::canonical_up_to_permutation)
            .collect::<HashSet<_>>()
            .len()
    }
}

/// Breadth-first closure under mutation, deduplicated by exact equality, in
/// discovery order. At most `cap` matrices are collected.
pub fn mutation_class(b: &ExchangeMatrix, cap: usize) -> MutationClass {
    let mut seen: HashSet<ExchangeMatrix> = HashSet::from([b.clone()]);
    let mut matrices = vec![b.clone()];
    let mut head = 0;
    while head < matrices.len() {
        let cur = matrices[head].clone();
        head += 1;
        for k in 0..cur.n() {
            let next = cur.mutate_unchecked(k);
            if seen.contains(&next) {
                continue;
            }
            if matrices.len() >= cap {
                return MutationClass { matrices, complete: false };
            }
            seen.insert(next.clone());
            matrices.push(next);
        }
    }
    MutationClass { matrices, complete: true }
}
