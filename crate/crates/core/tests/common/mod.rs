#![allow(dead_code, clippy::needless_range_loop)]

use mutfan::mutmap::{eta, eta_seq, eta_seq_inverse};
use mutfan::{int, rat, ExchangeMatrix, Int, RatVec, Rational};
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

/// Integer skew-symmetric part and positive diagonal of `B = S D`.
#[derive(Clone, Debug)]
pub struct Skew {
    pub s: Vec<Vec<i64>>,
    pub d: Vec<i64>,
}

impl Skew {
    pub fn n(&self) -> usize {
        self.d.len()
    }

    /// `b_ij = s_ij d_j`, skew-symmetrizable with symmetrizer `d`.
    pub fn matrix(&self) -> ExchangeMatrix {
        let n = self.n();
        let rows: Vec<Vec<i64>> =
            (0..n).map(|i| (0..n).map(|j| self.s[i][j] * self.d[j]).collect()).collect();
        ExchangeMatrix::from_i64(&rows).unwrap()
    }
}

pub fn skew(n: usize, bound: i64) -> impl Strategy<Value = Skew> {
    let upper = proptest::collection::vec(-bound..=bound, n * (n - 1) / 2);
    let diag = proptest::collection::vec(1i64..=3, n);
    (upper, diag).prop_map(move |(u, d)| {
        let mut s = vec![vec![0; n]; n];
        let mut it = u.into_iter();
        for i in 0..n {
            for j in i + 1..n {
                let x = it.next().unwrap();
                s[i][j] = x;
                s[j][i] = -x;
            }
        }
        Skew { s, d }
    })
}

pub fn any_skew() -> impl Strategy<Value = Skew> {
    (2usize..=4).prop_flat_map(|n| skew(n, 3))
}

pub fn rational() -> impl Strategy<Value = Rational> {
    (-12i64..=12, 1i64..=4).prop_map(|(p, q)| rat(p, q))
}

pub fn rvector(n: usize) -> impl Strategy<Value = RatVec> {
    proptest::collection::vec(rational(), n)
}

pub fn index(n: usize) -> impl Strategy<Value = usize> {
    0..n
}

pub fn sequence(n: usize, max_len: usize) -> impl Strategy<Value = Vec<usize>> {
    proptest::collection::vec(0..n, 0..=max_len)
}

/// A matrix, a position `k` and a rational vector.
pub fn matrix_index_vector() -> impl Strategy<Value = (Skew, usize, RatVec)> {
    any_skew().prop_flat_map(|s| {
        let n = s.n();
        (Just(s), index(n), rvector(n))
    })
}

pub fn matrix_sequence_vector() -> impl Strategy<Value = (Skew, Vec<usize>, RatVec)> {
    any_skew().prop_flat_map(|s| {
        let n = s.n();
        (Just(s), sequence(n, 6), rvector(n))
    })
}

pub fn matrix_perm_index_vector() -> impl Strategy<Value = (Skew, Vec<usize>, usize, RatVec)> {
    any_skew().prop_flat_map(|s| {
        let n = s.n();
        (Just(s), Just((0..n).collect::<Vec<_>>()).prop_shuffle(), index(n), rvector(n))
    })
}

/// `(C, sigma, k, a)` with `B = sigma C` and `B' = C sigma = sigma^-1 B sigma`.
pub fn rescaling_case() -> impl Strategy<Value = (Skew, Vec<i64>, usize, RatVec)> {
    any_skew().prop_flat_map(|s| {
        let n = s.n();
        (Just(s), proptest::collection::vec(1i64..=4, n), index(n), rvector(n))
    })
}

pub fn rescaled_pair(c: &Skew, sigma: &[i64]) -> (ExchangeMatrix, ExchangeMatrix) {
    let cm = c.matrix();
    let n = c.n();
    let b: Vec<Vec<Int>> =
        (0..n).map(|i| (0..n).map(|j| cm.entry(i, j) * int(sigma[i])).collect()).collect();
    let bp: Vec<Vec<Int>> =
        (0..n).map(|i| (0..n).map(|j| cm.entry(i, j) * int(sigma[j])).collect()).collect();
    (ExchangeMatrix::new(b).unwrap(), ExchangeMatrix::new(bp).unwrap())
}

fn scale_by(a: &[Rational], sigma: &[i64]) -> RatVec {
    a.iter().zip(sigma).map(|(x, &s)| x * rat(s, 1)).collect()
}

/// `eta_k` of `mu_k(B)` undoes `eta_k` of `B`.
pub fn involution(c: &(Skew, usize, RatVec)) -> Result<(), TestCaseError> {
    let (s, k, a) = c;
    let b = s.matrix();
    let image = eta(&b, *k, a).unwrap();
    let back = eta(&b.mutate(*k).unwrap(), *k, &image).unwrap();
    prop_assert_eq!(&back, a);
    Ok(())
}

/// The composite along a sequence is inverted by the reversed sequence.
pub fn inverse(c: &(Skew, Vec<usize>, RatVec)) -> Result<(), TestCaseError> {
    let (s, seq, a) = c;
    let b = s.matrix();
    let image = eta_seq(&b, seq, a).unwrap();
    prop_assert_eq!(&eta_seq_inverse(&b, seq, &image).unwrap(), a);
    let forward = eta_seq_inverse(&b, seq, a).unwrap();
    prop_assert_eq!(&eta_seq(&b, seq, &forward).unwrap(), a);
    Ok(())
}

/// `eta^B(a) = -eta^{-B}(-a)` along a sequence.
pub fn antipodal(c: &(Skew, Vec<usize>, RatVec)) -> Result<(), TestCaseError> {
    let (s, seq, a) = c;
    let b = s.matrix();
    let neg_a: RatVec = a.iter().map(|x| -x).collect();
    let rhs: RatVec = eta_seq(&b.neg(), seq, &neg_a).unwrap().into_iter().map(|x| -x).collect();
    prop_assert_eq!(eta_seq(&b, seq, a).unwrap(), rhs);
    Ok(())
}

/// Relabelling the indices commutes with the mutation map.
pub fn permutation(c: &(Skew, Vec<usize>, usize, RatVec)) -> Result<(), TestCaseError> {
    let (s, perm, k, a) = c;
    let b = s.matrix();
    let n = b.n();
    let move_vec = |v: &[Rational]| {
        let mut out = vec![rat(0, 1); n];
        for i in 0..n {
            out[perm[i]] = v[i].clone();
        }
        out
    };
    let pb = b.permuted(perm).unwrap();
    for i in 0..n {
        for j in 0..n {
            prop_assert_eq!(pb.entry(perm[i], perm[j]), b.entry(i, j));
        }
    }
    let lhs = eta(&pb, perm[*k], &move_vec(a)).unwrap();
    let rhs = move_vec(&eta(&b, *k, a).unwrap());
    prop_assert_eq!(lhs, rhs);
    Ok(())
}

/// With `B' = sigma^-1 B sigma`: `eta^{B'}(a sigma) = eta^B(a) sigma`.
pub fn rescaling(c: &(Skew, Vec<i64>, usize, RatVec)) -> Result<(), TestCaseError> {
    let (s, sigma, k, a) = c;
    let (b, bp) = rescaled_pair(s, sigma);
    let lhs = eta(&bp, *k, &scale_by(a, sigma)).unwrap();
    let rhs = scale_by(&eta(&b, *k, a).unwrap(), sigma);
    prop_assert_eq!(lhs, rhs);
    Ok(())
}
