//! Cluster patterns of geometric type with symbolic cluster variables.
//!
//! Cluster variables are Laurent polynomials in the initial variables with
//! coefficients in the group ring of the tropical semifield on the row labels.

mod poly;

use std::fmt;

use num_traits::{Signed, Zero};

pub use poly::{ClusterVariable, CoefPolynomial, GroupRingElement, XExponent};

use crate::error::{Error, Result};
use crate::exchange::ExtendedExchangeMatrix;
use crate::tropical::TropMonomial;

/// A labelled geometric seed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Seed {
    cluster: Vec<CoefPolynomial>,
    matrix: ExtendedExchangeMatrix,
}

/// The two monomial coefficients of an exchange relation, `y/(y ⊕ 1)` and `1/(y ⊕ 1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExchangeCoefficients {
    pub plus: TropMonomial,
    pub minus: TropMonomial,
}

impl Seed {
    /// The initial seed `(x_1, ..., x_n)` for `matrix`.
    pub fn initial(matrix: ExtendedExchangeMatrix) -> Self {
        let n = matrix.n();
        Self { cluster: (0..n).map(|i| CoefPolynomial::var(n, i)).collect(), matrix }
    }

    pub fn new(cluster: Vec<ClusterVariable>, matrix: ExtendedExchangeMatrix) -> Result<Self> {
        let n = matrix.n();
        if cluster.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: cluster.len() });
        }
        if let Some(v) = cluster.iter().find(|v| v.numerator.n() != n) {
            return Err(Error::DimensionMismatch { expected: n, found: v.numerator.n() });
        }
        Ok(Self { cluster: cluster.iter().map(ClusterVariable::to_laurent).collect(), matrix })
    }

    pub(crate) fn from_laurent(cluster: Vec<CoefPolynomial>, matrix: ExtendedExchangeMatrix) -> Self {
        debug_assert_eq!(cluster.len(), matrix.n());
        Self { cluster, matrix }
    }

    pub fn n(&self) -> usize {
        self.matrix.n()
    }

    pub fn matrix(&self) -> &ExtendedExchangeMatrix {
        &self.matrix
    }

    pub fn laurent(&self, i: usize) -> &CoefPolynomial {
        &self.cluster[i]
    }

    pub fn cluster_variable(&self, i: usize) -> ClusterVariable {
        ClusterVariable::from_laurent(&self.cluster[i])
    }

    pub fn cluster(&self) -> Vec<ClusterVariable> {
        self.cluster.iter().map(ClusterVariable::from_laurent).collect()
    }

    /// `y_j = prod_i u_i^{b_ij}` over the coefficient rows.
    pub fn coefficient(&self, j: usize) -> TropMonomial {
        TropMonomial::from_pairs(self.matrix.rows().iter().map(|(l, r)| (l.clone(), r[j].clone())))
    }

    pub fn exchange_coefficients(&self, k: usize) -> ExchangeCoefficients {
        let (plus, minus) = self.coefficient(k).split();
        ExchangeCoefficients { plus, minus }
    }

    /// The two monomial products `prod x_i^{[b_ik]_+}` and `prod x_i^{[-b_ik]_+}`.
    pub fn exchange_products(&self, k: usize) -> (CoefPolynomial, CoefPolynomial) {
        let n = self.n();
        let b = self.matrix.base();
        let mut plus = CoefPolynomial::one(n);
        let mut minus = CoefPolynomial::one(n);
        for i in 0..n {
            let e = b.entry(i, k);
            let p = u32::try_from(e.abs()).expect("exchange entries fit in u32");
            if e.is_positive() {
                plus = plus.mul(&self.cluster[i].pow(p));
            } else if !e.is_zero() {
                minus = minus.mul(&self.cluster[i].pow(p));
            }
        }
        (plus, minus)
    }

    /// Right-hand side of the exchange relation `x_k x'_k (y_k ⊕ 1) = y_k P+ + P-`.
    pub fn exchange_sum(&self, k: usize) -> CoefPolynomial {
        let (plus, minus) = self.exchange_products(k);
        let y = self.coefficient(k);
        plus.mul_trop(&y).add(&minus)
    }

    pub fn mutate(&self, k: usize) -> Result<Self> {
        self.matrix.base().check_index(k)?;
        let (plus, minus) = self.exchange_products(k);
        let c = self.exchange_coefficients(k);
        let numerator = plus.mul_trop(&c.plus).add(&minus.mul_trop(&c.minus));
        let x = numerator.exact_div(&self.cluster[k]).ok_or(Error::NotLaurent(k))?;
        let mut cluster = self.cluster.clone();
        cluster[k] = x;
        Ok(Self { cluster, matrix: self.matrix.mutate(k)? })
    }
}

impl fmt::Display for Seed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.cluster().iter().enumerate() {
            writeln!(f, "x_{} = {v}", i + 1)?;
        }
        for j in 0..self.n() {
            writeln!(f, "y_{} = {}", j + 1, self.coefficient(j))?;
        }
        write!(f, "{}", self.matrix.base())?;
        for (l, r) in self.matrix.rows() {
            let r: Vec<String> = r.iter().map(crate::scalar::fmt_rational).collect();
            write!(f, "\n{l}: [{}]", r.join(", "))?;
        }
        Ok(())
    }
}

pub fn seed_mutate(s: &Seed, k: usize) -> Result<Seed> {
    s.mutate(k)
}

/// All seeds along the walk, starting with `s` itself.
pub fn walk_pattern(s: &Seed, seq: &[usize]) -> Result<Vec<Seed>> {
    let mut out = vec![s.clone()];
    for &k in seq {
        let next = out.last().expect("walk is nonempty").mutate(k)?;
        out.push(next);
    }
    Ok(out)
}

/// Smallest `p <= max_steps` such that applying `gen` cyclically `p` times
/// returns exactly to `s`.
pub fn detect_period(s: &Seed, gen: &[usize], max_steps: usize) -> Result<Option<usize>> {
    if gen.is_empty() {
        return Ok(None);
    }
    let mut cur = s.clone();
    for step in 1..=max_steps {
        cur = cur.mutate(gen[(step - 1) % gen.len()])?;
        if &cur == s {
            return Ok(Some(step));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{rvec, ExchangeMatrix};

    fn b2_universal() -> Seed {
        let b = ExchangeMatrix::from_i64(&[[0, 1], [-2, 0]]).unwrap();
        let rows = [("a", [1, 0]), ("b", [0, 1]), ("c", [-1, 0]), ("d", [0, -1]), ("e", [1, -1]), ("f", [2, -1])];
        Seed::initial(ExtendedExchangeMatrix::new(b, rows.iter().map(|(l, r)| (*l, rvec(r)))).unwrap())
    }

    fn alternating(len: usize) -> Vec<usize> {
        (0..len).map(|i| i % 2).collect()
    }

    fn cv(s: &str) -> ClusterVariable {
        ClusterVariable::parse(s, 2).unwrap()
    }

    #[test]
    fn universal_cluster_variables() {
        let walk = walk_pattern(&b2_universal(), &alternating(5)).unwrap();
        let t1 = "(x2^2*u_c + u_a*u_e*u_f^2)/x1";
        let t2 = "(x1*u_a*u_b*u_f + x2^2*u_c*u_d + u_a*u_d*u_e*u_f^2)/(x1*x2)";
        let t3 = "(x1^2*u_a*u_b^2 + 2*x1*u_a*u_b*u_d*u_e*u_f + x2^2*u_c*u_d^2*u_e + u_a*u_d^2*u_e^2*u_f^2)/(x1*x2^2)";
        let t4 = "(x1*u_b + u_d*u_e*u_f)/x2";
        let expected = [("x1", "x2"), (t1, "x2"), (t1, t2), (t3, t2), (t3, t4), ("x1", t4)];
        for (seed, (x1, x2)) in walk.iter().zip(expected) {
            assert_eq!(seed.cluster(), vec![cv(x1), cv(x2)]);
        }
    }

    #[test]
    fn universal_coefficients() {
        let walk = walk_pattern(&b2_universal(), &alternating(5)).unwrap();
        let y1 = ["u_a*u_e*u_f^2*u_c^-1", "u_c*u_a^-1*u_e^-1*u_f^-2", "u_a*u_b^2*u_c*u_e^-1"];
        let y2 = ["u_b*u_d^-1*u_e^-1*u_f^-1", "u_a*u_b*u_f*u_d^-1", "u_d*u_a^-1*u_b^-1*u_f^-1"];
        for t in 0..3 {
            assert_eq!(walk[t].coefficient(0), y1[t].parse().unwrap());
            assert_eq!(walk[t].coefficient(1), y2[t].parse().unwrap());
        }
        assert_eq!(walk[5].coefficient(1), "u_d*u_e*u_f*u_b^-1".parse().unwrap());
    }

    #[test]
    fn exchange_relation_uses_matrix_coefficient() {
        for seed in walk_pattern(&b2_universal(), &alternating(7)).unwrap() {
            for k in 0..2 {
                let next = seed.mutate(k).unwrap();
                let y = seed.coefficient(k);
                let lhs = seed.laurent(k).mul(next.laurent(k)).mul_trop(&y.oplus(&TropMonomial::one()));
                assert_eq!(lhs, seed.exchange_sum(k));
            }
        }
    }

    #[test]
    fn involution_and_periods() {
        let s = b2_universal();
        assert_eq!(s.mutate(0).unwrap().mutate(0).unwrap(), s);
        assert_eq!(walk_pattern(&s, &[]).unwrap(), vec![s.clone()]);
        assert_eq!(detect_period(&s, &[0, 1], 20).unwrap(), Some(6));
        let a2 = ExtendedExchangeMatrix::principal(ExchangeMatrix::from_i64(&[[0, 1], [-1, 0]]).unwrap());
        assert_eq!(detect_period(&Seed::initial(a2), &[0, 1], 30).unwrap(), Some(10));
        assert!(s.mutate(2).is_err());
    }

    #[test]
    fn affine_has_no_period() {
        let b = ExchangeMatrix::from_i64(&[[0, 1], [-4, 0]]).unwrap();
        let s = Seed::initial(ExtendedExchangeMatrix::new(b, Vec::<(String, _)>::new()).unwrap());
        assert_eq!(detect_period(&s, &[0, 1], 40).unwrap(), None);
    }
}
