//! Tropical semifields: monomials in labelled variables with rational
//! exponents, multiplication by exponent addition and `⊕` by exponent-wise
//! minimum.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::scalar::{fmt_rational, parse_rational};
use crate::Rational;

/// `prod u_i^{a_i}` stored sparsely with no zero exponents.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TropMonomial {
    exps: BTreeMap<String, Rational>,
}

impl TropMonomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn var(label: impl Into<String>) -> Self {
        Self::from_pairs([(label.into(), Rational::one())])
    }

    pub fn from_pairs<L: Into<String>>(pairs: impl IntoIterator<Item = (L, Rational)>) -> Self {
        let mut exps: BTreeMap<String, Rational> = BTreeMap::new();
        for (l, e) in pairs {
            *exps.entry(l.into()).or_insert_with(Rational::zero) += e;
        }
        exps.retain(|_, e| !e.is_zero());
        Self { exps }
    }

    /// Like [`from_pairs`](Self::from_pairs) but rejects non-integer exponents.
    pub fn integral<L: Into<String>>(pairs: impl IntoIterator<Item = (L, Rational)>) -> Result<Self> {
        let m = Self::from_pairs(pairs);
        if !m.is_integral() {
            return Err(Error::NonIntegral(m.to_string()));
        }
        Ok(m)
    }

    /// `prod_i u_{labels[i]}^{v[i]}`.
    pub fn from_vector(labels: &[String], v: &[Rational]) -> Self {
        Self::from_pairs(labels.iter().cloned().zip(v.iter().cloned()))
    }

    pub fn exponent(&self, label: &str) -> Rational {
        self.exps.get(label).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn exponents(&self) -> &BTreeMap<String, Rational> {
        &self.exps
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_empty()
    }

    /// Compares as exponent vectors in lexicographic order over the sorted
    /// union of labels, absent exponents being zero. Unlike the derived
    /// `Ord`, this order is compatible with multiplication.
    pub fn group_cmp(&self, other: &Self) -> std::cmp::Ordering {
        let labels: BTreeSet<&String> = self.exps.keys().chain(other.exps.keys()).collect();
        for l in labels {
            let c = self.exponent(l).cmp(&other.exponent(l));
            if c.is_ne() {
                return c;
            }
        }
        std::cmp::Ordering::Equal
    }

    pub fn is_integral(&self) -> bool {
        self.exps.values().all(|e| e.is_integer())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut exps = self.exps.clone();
        for (l, e) in &other.exps {
            let slot = exps.entry(l.clone()).or_insert_with(Rational::zero);
            *slot += e;
            if slot.is_zero() {
                exps.remove(l);
            }
        }
        Self { exps }
    }

    pub fn inv(&self) -> Self {
        Self { exps: self.exps.iter().map(|(l, e)| (l.clone(), -e)).collect() }
    }

    pub fn div(&self, other: &Self) -> Self {
        self.mul(&other.inv())
    }

    /// Tropical sum: exponent-wise minimum, absent exponents count as 0.
    pub fn oplus(&self, other: &Self) -> Self {
        let labels: BTreeSet<&String> = self.exps.keys().chain(other.exps.keys()).collect();
        Self::from_pairs(labels.into_iter().map(|l| {
            let (a, b) = (self.exponent(l), other.exponent(l));
            (l.clone(), if a < b { a } else { b })
        }))
    }

    /// The action of a scalar: all exponents multiplied by `c`.
    pub fn pow(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::one();
        }
        Self { exps: self.exps.iter().map(|(l, e)| (l.clone(), e * c)).collect() }
    }

    /// Splits into the parts with positive and with negative exponents, as a
    /// numerator/denominator pair of monomials with nonnegative exponents.
    pub fn split(&self) -> (Self, Self) {
        let num = self.exps.iter().filter(|(_, e)| e.is_positive());
        let den = self.exps.iter().filter(|(_, e)| e.is_negative());
        (
            Self { exps: num.map(|(l, e)| (l.clone(), e.clone())).collect() },
            Self { exps: den.map(|(l, e)| (l.clone(), -e)).collect() },
        )
    }
}

fn fmt_exponent(e: &Rational) -> String {
    if e.is_integer() {
        e.numer().to_string()
    } else {
        format!("({})", fmt_rational(e))
    }
}

impl fmt::Display for TropMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exps.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .exps
            .iter()
            .map(|(l, e)| {
                if e.is_one() {
                    format!("u_{l}")
                } else {
                    format!("u_{l}^{}", fmt_exponent(e))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" * "))
    }
}

impl FromStr for TropMonomial {
    type Err = Error;

    /// Parses the text form, e.g. `u_a^2 * u_b^-1`, `u_c^(1/2)` or `1`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "1" {
            return Ok(Self::one());
        }
        let mut pairs = Vec::new();
        for factor in s.split('*') {
            let factor = factor.trim();
            let body = factor
                .strip_prefix("u_")
                .ok_or_else(|| Error::Parse(format!("bad tropical factor {factor:?}")))?;
            let (label, exp) = match body.split_once('^') {
                Some((l, e)) => (l, parse_rational(e.trim_matches(|c| c == '(' || c == ')'))?),
                None => (body, Rational::one()),
            };
            if label.is_empty() {
                return Err(Error::Parse(format!("empty label in {factor:?}")));
            }
            pairs.push((label.to_string(), exp));
        }
        Ok(Self::from_pairs(pairs))
    }
}

/// A linear map between tropical semifields given by exponents `p_ik`:
/// `u_i` is sent to `prod_k v_k^{p_ik}`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TropLinearMap {
    source: BTreeSet<String>,
    target: BTreeSet<String>,
    entries: BTreeMap<(String, String), Rational>,
}

impl TropLinearMap {
    pub fn new(source: BTreeSet<String>, target: BTreeSet<String>) -> Self {
        Self { source, target, entries: BTreeMap::new() }
    }

    pub fn identity<L: Into<String>>(labels: impl IntoIterator<Item = L>) -> Self {
        let labels: BTreeSet<String> = labels.into_iter().map(Into::into).collect();
        let mut map = Self::new(labels.clone(), labels.clone());
        for l in labels {
            map.entries.insert((l.clone(), l), Rational::one());
        }
        map
    }

    /// Builds the map from the images of the source variables.
    pub fn from_images<L: Into<String>>(
        images: impl IntoIterator<Item = (L, TropMonomial)>,
        target: BTreeSet<String>,
    ) -> Result<Self> {
        let mut map = Self::new(BTreeSet::new(), target);
        for (i, m) in images {
            let i = i.into();
            map.source.insert(i.clone());
            for (k, p) in m.exponents() {
                map.set(&i, k, p.clone())?;
            }
        }
        Ok(map)
    }

    pub fn set(&mut self, source: &str, target: &str, p: Rational) -> Result<()> {
        if !self.source.contains(source) {
            return Err(Error::UnknownLabel(source.to_string()));
        }
        if !self.target.contains(target) {
            return Err(Error::UnknownLabel(target.to_string()));
        }
        let key = (source.to_string(), target.to_string());
        if p.is_zero() {
            self.entries.remove(&key);
        } else {
            self.entries.insert(key, p);
        }
        Ok(())
    }

    pub fn entry(&self, source: &str, target: &str) -> Rational {
        self.entries
            .get(&(source.to_string(), target.to_string()))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn source(&self) -> &BTreeSet<String> {
        &self.source
    }

    pub fn target(&self) -> &BTreeSet<String> {
        &self.target
    }

    pub fn entries(&self) -> &BTreeMap<(String, String), Rational> {
        &self.entries
    }

    /// Image of `u_i`.
    pub fn image(&self, source: &str) -> Result<TropMonomial> {
        self.apply(&TropMonomial::var(source))
    }

    pub fn apply(&self, m: &TropMonomial) -> Result<TropMonomial> {
        let mut pairs = Vec::new();
        for (i, a) in m.exponents() {
            if !self.source.contains(i) {
                return Err(Error::UnknownLabel(i.clone()));
            }
            let row = self
                .entries
                .range((i.clone(), String::new())..)
                .take_while(|((s, _), _)| s == i);
            for ((_, k), p) in row {
                pairs.push((k.clone(), p * a));
            }
        }
        Ok(TropMonomial::from_pairs(pairs))
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &TropLinearMap) -> Result<TropLinearMap> {
        let images = self
            .source
            .iter()
            .map(|i| Ok((i.clone(), next.apply(&self.image(i)?)?)))
            .collect::<Result<Vec<_>>>()?;
        let mut out = Self::from_images(images, next.target.clone())?;
        out.source = self.source.clone();
        Ok(out)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.entries.values().all(|p| !p.is_negative())
    }
}
