use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::tropical::{TropLinearMap, TropMonomial};
use crate::Int;

/// Exponents of `x_1, ..., x_n`, possibly negative.
pub type XExponent = Vec<i64>;

/// An element of the group ring `ZP`: integer combination of tropical monomials.
pub type GroupRingElement = BTreeMap<TropMonomial, Int>;

/// A Laurent polynomial in `x_1, ..., x_n` with coefficients in `ZP`, stored
/// as a flat map from `(x-exponent, tropical monomial)` to a nonzero integer.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CoefPolynomial {
    n: usize,
    terms: BTreeMap<(XExponent, TropMonomial), Int>,
}

/// Key ordered lexicographically on x-exponents, then on tropical exponents
/// (see [`TropMonomial::group_cmp`]). This is a total order on the monomial
/// group compatible with multiplication, as exact division requires.
#[derive(Clone, Debug, PartialEq, Eq)]
struct GroupKey(XExponent, TropMonomial);

impl Ord for GroupKey {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.cmp(&other.0).then_with(|| self.1.group_cmp(&other.1))
    }
}

impl PartialOrd for GroupKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl GroupKey {
    fn mul(&self, o: &GroupKey) -> GroupKey {
        GroupKey(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect(), self.1.mul(&o.1))
    }

    fn div(&self, o: &GroupKey) -> GroupKey {
        GroupKey(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect(), self.1.div(&o.1))
    }
}

const DIVISION_STEP_LIMIT: usize = 1 << 20;

impl CoefPolynomial {
    pub fn zero(n: usize) -> Self {
        Self { n, terms: BTreeMap::new() }
    }

    pub fn one(n: usize) -> Self {
        Self::monomial(vec![0; n], TropMonomial::one(), Int::one())
    }

    /// The variable `x_i` (0-based).
    pub fn var(n: usize, i: usize) -> Self {
        let mut x = vec![0; n];
        x[i] = 1;
        Self::monomial(x, TropMonomial::one(), Int::one())
    }

    pub fn monomial(x: XExponent, u: TropMonomial, c: Int) -> Self {
        let mut p = Self::zero(x.len());
        p.add_term(x, u, c);
        p
    }

    pub fn from_trop(n: usize, u: TropMonomial) -> Self {
        Self::monomial(vec![0; n], u, Int::one())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&XExponent, &TropMonomial, &Int)> {
        self.terms.iter().map(|((x, u), c)| (x, u, c))
    }

    /// The coefficients grouped by x-exponent.
    pub fn grouped(&self) -> BTreeMap<XExponent, GroupRingElement> {
        let mut out: BTreeMap<XExponent, GroupRingElement> = BTreeMap::new();
        for ((x, u), c) in &self.terms {
            out.entry(x.clone()).or_default().insert(u.clone(), c.clone());
        }
        out
    }

    pub fn add_term(&mut self, x: XExponent, u: TropMonomial, c: Int) {
        debug_assert_eq!(x.len(), self.n);
        if c.is_zero() {
            return;
        }
        let key = (x, u);
        let slot = self.terms.entry(key.clone()).or_insert_with(Int::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for ((x, u), c) in &other.terms {
            out.add_term(x.clone(), u.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        Self { n: self.n, terms: self.terms.iter().map(|(k, c)| (k.clone(), -c)).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.n);
        for ((x1, u1), c1) in &self.terms {
            for ((x2, u2), c2) in &other.terms {
                let x = x1.iter().zip(x2).map(|(a, b)| a + b).collect();
                out.add_term(x, u1.mul(u2), c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(self.n), |acc, _| acc.mul(self))
    }

    pub fn mul_trop(&self, m: &TropMonomial) -> Self {
        Self {
            n: self.n,
            terms: self.terms.iter().map(|((x, u), c)| ((x.clone(), u.mul(m)), c.clone())).collect(),
        }
    }

    /// Coordinate-wise minimum of the x-exponents (zeros for the zero polynomial).
    pub fn min_exponents(&self) -> XExponent {
        let mut out: Option<XExponent> = None;
        for (x, _) in self.terms.keys() {
            out = Some(match out {
                None => x.clone(),
                Some(m) => m.iter().zip(x).map(|(a, b)| *a.min(b)).collect(),
            });
        }
        out.unwrap_or_else(|| vec![0; self.n])
    }

    pub fn shift(&self, by: &[i64]) -> Self {
        Self {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|((x, u), c)| ((x.iter().zip(by).map(|(a, b)| a + b).collect(), u.clone()), c.clone()))
                .collect(),
        }
    }

    /// `self / d` when the quotient is again a Laurent polynomial with
    /// integer coefficients, `None` otherwise.
    pub fn exact_div(&self, d: &Self) -> Option<Self> {
        let dterms: Vec<(GroupKey, Int)> = {
            let mut v: Vec<_> = d.terms.iter().map(|((x, u), c)| (GroupKey(x.clone(), u.clone()), c.clone())).collect();
            v.sort_by(|a, b| a.0.cmp(&b.0));
            v
        };
        let (lead, lead_c) = dterms.last()?.clone();
        let trail = dterms[0].0.clone();
        let mut rem: BTreeMap<GroupKey, Int> = self
            .terms
            .iter()
            .map(|((x, u), c)| (GroupKey(x.clone(), u.clone()), c.clone()))
            .collect();
        let Some(bound) = rem.keys().next().map(|t| t.div(&trail)) else {
            return Some(Self::zero(self.n));
        };
        let mut quotient = Self::zero(self.n);
        for _ in 0..DIVISION_STEP_LIMIT {
            let Some((key, c)) = rem.last_key_value() else {
                return Some(quotient);
            };
            let q = key.div(&lead);
            if q < bound || !c.is_multiple_of(&lead_c) {
                return None;
            }
            let qc = c / &lead_c;
            for (dk, dc) in &dterms {
                let k = q.mul(dk);
                let slot = rem.entry(k.clone()).or_insert_with(Int::zero);
                *slot -= &qc * dc;
                if slot.is_zero() {
                    rem.remove(&k);
                }
            }
            quotient.add_term(q.0, q.1, qc);
        }
        None
    }

    /// Applies a tropical map to every coefficient monomial.
    pub fn map_coefficients(&self, phi: &TropLinearMap) -> Result<Self> {
        let mut out = Self::zero(self.n);
        for ((x, u), c) in &self.terms {
            out.add_term(x.clone(), phi.apply(u)?, c.clone());
        }
        Ok(out)
    }

    /// Parses a polynomial such as `x1^2*u_c + 2*x1*u_a*u_b^-1 - 3`.
    pub fn parse(s: &str, n: usize) -> Result<Self> {
        let mut out = Self::zero(n);
        for (sign, term) in split_terms(s)? {
            let (x, u, c) = parse_term(term, n)?;
            out.add_term(x, u, if sign { c } else { -c });
        }
        Ok(out)
    }
}

/// Splits at top-level `+`/`-` that are not exponent signs.
fn split_terms(s: &str) -> Result<Vec<(bool, &str)>> {
    let s = s.trim();
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    let mut positive = true;
    let bytes = s.as_bytes();
    for (i, &ch) in bytes.iter().enumerate() {
        match ch {
            b'(' => depth += 1,
            b')' => depth -= 1,
            b'+' | b'-' if depth == 0 => {
                let prev = s[..i].trim_end().bytes().last();
                if prev == Some(b'^') {
                    continue;
                }
                let piece = s[start..i].trim();
                if !piece.is_empty() {
                    out.push((positive, piece));
                } else if i != 0 && !out.is_empty() {
                    return Err(Error::Parse(format!("empty term in {s:?}")));
                }
                positive = ch == b'+';
                start = i + 1;
            }
            _ => {}
        }
    }
    let piece = s[start..].trim();
    if piece.is_empty() {
        return Err(Error::Parse(format!("empty term in {s:?}")));
    }
    out.push((positive, piece));
    Ok(out)
}

fn parse_x_index(name: &str, n: usize) -> Result<usize> {
    let digits = name.trim_start_matches('x').trim_start_matches('\'').trim_start_matches('_');
    let i: usize = digits
        .parse()
        .map_err(|_| Error::Parse(format!("bad variable {name:?}")))?;
    if i == 0 || i > n {
        return Err(Error::Parse(format!("variable {name:?} out of range 1..={n}")));
    }
    Ok(i - 1)
}

fn parse_term(term: &str, n: usize) -> Result<(XExponent, TropMonomial, Int)> {
    let mut x = vec![0i64; n];
    let mut u = TropMonomial::one();
    let mut c = Int::one();
    for factor in term.split('*') {
        let factor = factor.trim();
        if factor.starts_with("u_") {
            u = u.mul(&factor.parse()?);
        } else if factor.starts_with('x') {
            let (name, e) = match factor.split_once('^') {
                Some((v, e)) => (v, e.trim_matches(|c| c == '(' || c == ')').parse::<i64>()),
                None => (factor, Ok(1)),
            };
            let e = e.map_err(|_| Error::Parse(format!("bad exponent in {factor:?}")))?;
            x[parse_x_index(name.trim(), n)?] += e;
        } else {
            let v: Int = factor
                .parse()
                .map_err(|_| Error::Parse(format!("bad factor {factor:?}")))?;
            c *= v;
        }
    }
    Ok((x, u, c))
}

fn fmt_x(x: &[i64], prefix: &str) -> Vec<String> {
    x.iter()
        .enumerate()
        .filter(|(_, e)| **e != 0)
        .map(|(i, e)| if *e == 1 { format!("{prefix}{}", i + 1) } else { format!("{prefix}{}^{e}", i + 1) })
        .collect()
}

/// A cluster variable as `numerator / x^denominator` in lowest terms.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ClusterVariable {
    pub numerator: CoefPolynomial,
    pub denominator: XExponent,
}

impl ClusterVariable {
    pub fn from_laurent(p: &CoefPolynomial) -> Self {
        let denominator: XExponent = p.min_exponents().iter().map(|e| (-e).max(0)).collect();
        Self { numerator: p.shift(&denominator), denominator }
    }

    pub fn to_laurent(&self) -> CoefPolynomial {
        let neg: Vec<i64> = self.denominator.iter().map(|e| -e).collect();
        self.numerator.shift(&neg)
    }

    /// Parses `(numerator) / (denominator)` or a bare numerator; the
    /// denominator must be a monomial in the x variables.
    pub fn parse(s: &str, n: usize) -> Result<Self> {
        let s = s.trim();
        let mut depth = 0i32;
        let mut split = None;
        for (i, ch) in s.char_indices() {
            match ch {
                '(' => depth += 1,
                ')' => depth -= 1,
                '/' if depth == 0 => split = Some(i),
                _ => {}
            }
        }
        let strip = |t: &str| {
            let t = t.trim();
            if t.starts_with('(') && t.ends_with(')') {
                t[1..t.len() - 1].to_string()
            } else {
                t.to_string()
            }
        };
        let (num, den) = match split {
            Some(i) => (strip(&s[..i]), Some(strip(&s[i + 1..]))),
            None => (s.to_string(), None),
        };
        let mut p = CoefPolynomial::parse(&num, n)?;
        if let Some(den) = den {
            let d = CoefPolynomial::parse(&den, n)?;
            let mut terms = d.terms();
            let (Some((x, u, c)), None) = (terms.next(), terms.next()) else {
                return Err(Error::Parse(format!("denominator {den:?} is not a monomial")));
            };
            if !u.is_one() || !c.is_one() {
                return Err(Error::Parse(format!("denominator {den:?} is not an x-monomial")));
            }
            let neg: Vec<i64> = x.iter().map(|e| -e).collect();
            p = p.shift(&neg);
        }
        Ok(Self::from_laurent(&p))
    }

    /// Text form with variables named `{prefix}1, {prefix}2, ...`.
    pub fn display_with(&self, prefix: &str) -> String {
        let mut parts: Vec<(bool, String)> = Vec::new();
        let mut terms: Vec<_> = self.numerator.terms().collect();
        terms.sort_by(|a, b| b.0.cmp(a.0).then_with(|| a.1.cmp(b.1)));
        for (x, u, c) in terms {
            let mut factors = Vec::new();
            if !c.abs().is_one() {
                factors.push(c.abs().to_string());
            }
            factors.extend(fmt_x(x, prefix));
            if !u.is_one() {
                factors.push(u.to_string());
            }
            if factors.is_empty() {
                factors.push("1".into());
            }
            parts.push((!c.is_negative(), factors.join(" * ")));
        }
        let mut num = String::new();
        for (i, (pos, t)) in parts.iter().enumerate() {
            match (i, pos) {
                (0, true) => {}
                (0, false) => num.push('-'),
                (_, true) => num.push_str(" + "),
                (_, false) => num.push_str(" - "),
            }
            num.push_str(t);
        }
        if num.is_empty() {
            num.push('0');
        }
        let den = fmt_x(&self.denominator, prefix);
        if den.is_empty() {
            num
        } else {
            let num = if parts.len() > 1 { format!("({num})") } else { num };
            let den = if den.len() > 1 { format!("({})", den.join(" * ")) } else { den.join("") };
            format!("{num} / {den}")
        }
    }
}

impl fmt::Display for ClusterVariable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with("x_"))
    }
}
