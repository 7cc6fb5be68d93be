//! Sparse multivariate polynomials with rational coefficients.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::monomial::{Monomial, MonomialOrder};
use crate::rational::{parse_rational, Rational};

pub type Term = (Monomial, Rational);

/// Polynomial in `x0..x{n-1}` over the rationals.
///
/// Terms are kept sorted in descending graded reverse lex order with no zero
/// coefficients, so structural equality is polynomial equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    n: usize,
    terms: Vec<Term>,
}

/// A point of `Q^n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RationalPoint(pub Vec<Rational>);

impl RationalPoint {
    pub fn new(coords: Vec<Rational>) -> Self {
        RationalPoint(coords)
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        RationalPoint(coords.iter().map(|&c| Rational::from_integer(BigInt::from(c))).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// Parses `"(1/2, -3)"`; the parentheses are optional, separators are
    /// commas or whitespace.
    pub fn parse(s: &str) -> Result<Self> {
        let t = s.trim();
        let t = t.strip_prefix('(').map(|r| r.strip_suffix(')')).unwrap_or(Some(t));
        let t = t.ok_or_else(|| Error::Parse { position: 0, message: "unbalanced parenthesis".into() })?;
        let coords = t
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|p| !p.is_empty())
            .map(parse_rational)
            .collect::<Result<Vec<_>>>()?;
        if coords.is_empty() {
            return Err(Error::Parse { position: 0, message: "empty point".into() });
        }
        Ok(RationalPoint(coords))
    }
}

impl fmt::Display for RationalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

fn canonical_cmp(a: &Monomial, b: &Monomial) -> Ordering {
    // descending graded reverse lex
    MonomialOrder::grevlex().cmp(b, a)
}

impl Polynomial {
    pub fn zero(n: usize) -> Self {
        Polynomial { n, terms: Vec::new() }
    }

    pub fn one(n: usize) -> Self {
        Self::constant(n, Rational::one())
    }

    pub fn constant(n: usize, c: Rational) -> Self {
        Self::from_terms(n, vec![(Monomial::one(n), c)])
    }

    pub fn var(n: usize, i: usize) -> Self {
        Polynomial { n, terms: vec![(Monomial::var(n, i), Rational::one())] }
    }

    pub fn monomial(m: Monomial, c: Rational) -> Self {
        let n = m.n_vars();
        Self::from_terms(n, vec![(m, c)])
    }

    /// Builds a polynomial from arbitrary terms: like terms are merged and
    /// zero coefficients dropped.
    pub fn from_terms(n: usize, mut terms: Vec<Term>) -> Self {
        terms.sort_by(|a, b| canonical_cmp(&a.0, &b.0));
        let mut out: Vec<Term> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            debug_assert_eq!(m.n_vars(), n);
            match out.last_mut() {
                Some((lm, lc)) if *lm == m => *lc += c,
                _ => out.push((m, c)),
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        Polynomial { n, terms: out }
    }

    pub fn n_vars(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<Term> {
        self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.degree()).max()
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.iter().map(|(m, _)| m.exponents()[var]).max().unwrap_or(0)
    }

    pub fn variables(&self) -> Vec<bool> {
        let mut used = vec![false; self.n];
        for (m, _) in &self.terms {
            for (u, &e) in used.iter_mut().zip(m.exponents()) {
                *u |= e > 0;
            }
        }
        used
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms
            .iter()
            .find(|(t, _)| t == m)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Rational::zero)
    }

    pub fn leading_term(&self, order: &MonomialOrder) -> Option<&Term> {
        self.terms.iter().max_by(|a, b| order.cmp(&a.0, &b.0))
    }

    fn check_dim(&self, other: &Polynomial) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: other.n });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_dim(other)?;
        Ok(self.merge(other, false))
    }

    pub fn checked_sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_dim(other)?;
        Ok(self.merge(other, true))
    }

    pub fn checked_mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_dim(other)?;
        Ok(self.product(other))
    }

    fn merge(&self, other: &Polynomial, negate: bool) -> Polynomial {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() || j < other.terms.len() {
            let ord = match (self.terms.get(i), other.terms.get(j)) {
                (Some(a), Some(b)) => canonical_cmp(&a.0, &b.0),
                (Some(_), None) => Ordering::Less,
                (None, _) => Ordering::Greater,
            };
            match ord {
                Ordering::Less => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    let (m, c) = &other.terms[j];
                    out.push((m.clone(), if negate { -c } else { c.clone() }));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate {
                        &self.terms[i].1 - &other.terms[j].1
                    } else {
                        &self.terms[i].1 + &other.terms[j].1
                    };
                    if !c.is_zero() {
                        out.push((self.terms[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        Polynomial { n: self.n, terms: out }
    }

    fn product(&self, other: &Polynomial) -> Polynomial {
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                terms.push((ma.mul(mb), ca * cb));
            }
        }
        Polynomial::from_terms(self.n, terms)
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.n);
        }
        Polynomial { n: self.n, terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect() }
    }

    pub fn mul_term(&self, m: &Monomial, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.n);
        }
        // multiplying by a monomial preserves the relative order of terms
        Polynomial { n: self.n, terms: self.terms.iter().map(|(t, k)| (t.mul(m), k * c)).collect() }
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut acc = Polynomial::one(self.n);
        for _ in 0..e {
            acc = acc.product(self);
        }
        acc
    }

    pub fn evaluate(&self, pt: &RationalPoint) -> Result<Rational> {
        if pt.dim() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: pt.dim() });
        }
        Ok(self.eval(&pt.0))
    }

    /// Evaluation without the dimension check.
    pub fn eval(&self, x: &[Rational]) -> Rational {
        let mut powers: Vec<Vec<Rational>> = Vec::with_capacity(self.n);
        for (i, xi) in x.iter().enumerate().take(self.n) {
            let max = self.degree_in(i) as usize;
            let mut p = Vec::with_capacity(max + 1);
            p.push(Rational::one());
            for k in 1..=max {
                let next = &p[k - 1] * xi;
                p.push(next);
            }
            powers.push(p);
        }
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    t *= &powers[i][e as usize];
                }
            }
            acc += t;
        }
        acc
    }

    pub fn eval_f64(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(m, c)| {
                let mut t = crate::rational::to_f64(c);
                for (i, &e) in m.exponents().iter().enumerate() {
                    t *= x[i].powi(e as i32);
                }
                t
            })
            .sum()
    }

    pub fn derivative(&self, var: usize) -> Polynomial {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.exponents()[var] > 0)
            .map(|(m, c)| {
                let mut e = m.exponents().to_vec();
                let k = e[var];
                e[var] -= 1;
                (Monomial::new(e), c * Rational::from_integer(BigInt::from(k)))
            })
            .collect();
        Polynomial::from_terms(self.n, terms)
    }

    /// Substitutes `x_i := images[i]`; all images share one ring.
    pub fn compose(&self, images: &[Polynomial]) -> Result<Polynomial> {
        if images.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: images.len() });
        }
        let target = images.first().map(|p| p.n).unwrap_or(0);
        if let Some(p) = images.iter().find(|p| p.n != target) {
            return Err(Error::DimensionMismatch { expected: target, found: p.n });
        }
        let mut cache: Vec<Vec<Polynomial>> = images.iter().map(|p| vec![Polynomial::one(p.n), p.clone()]).collect();
        let mut acc = Polynomial::zero(target);
        for (m, c) in &self.terms {
            let mut t = Polynomial::constant(target, c.clone());
            for (i, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while cache[i].len() <= e as usize {
                    let next = cache[i].last().unwrap().product(&images[i]);
                    cache[i].push(next);
                }
                t = t.product(&cache[i][e as usize]);
            }
            acc = acc.merge(&t, false);
        }
        Ok(acc)
    }

    /// Same polynomial in a ring with `extra` more trailing variables.
    pub fn extend(&self, extra: usize) -> Polynomial {
        Polynomial {
            n: self.n + extra,
            terms: self.terms.iter().map(|(m, c)| (m.extend(extra), c.clone())).collect(),
        }
    }

    /// Drops trailing variables; `None` if any of them occurs.
    pub fn restrict(&self, n: usize) -> Option<Polynomial> {
        if self.terms.iter().any(|(m, _)| m.exponents()[n..].iter().any(|&e| e > 0)) {
            return None;
        }
        Some(Polynomial::from_terms(n, self.terms.iter().map(|(m, c)| (m.truncate(n), c.clone())).collect()))
    }

    /// Scales so the leading coefficient (under `order`) is one.
    pub fn monic(&self, order: &MonomialOrder) -> Polynomial {
        match self.leading_term(order) {
            Some((_, c)) => self.scale(&c.recip()),
            None => self.clone(),
        }
    }

    /// Integer-coefficient primitive form with positive leading coefficient
    /// in canonical order; used where a canonical scalar multiple is wanted.
    pub fn primitive(&self) -> Polynomial {
        if self.is_zero() {
            return self.clone();
        }
        let mut den = BigInt::one();
        for (_, c) in &self.terms {
            den = num_integer::Integer::lcm(&den, c.denom());
        }
        let mut g = BigInt::zero();
        for (_, c) in &self.terms {
            let v = c.numer() * (&den / c.denom());
            g = num_integer::Integer::gcd(&g, &v);
        }
        let mut s = Rational::new(den, g);
        if self.terms[0].1.is_negative() {
            s = -s;
        }
        self.scale(&s)
    }

    /// Exact quotient `self / d`, if `d` divides `self`.
    pub fn div_exact(&self, d: &Polynomial) -> Option<Polynomial> {
        if d.is_zero() {
            return None;
        }
        let (dm, dc) = d.terms[0].clone();
        let mut rem = self.clone();
        let mut quot = Vec::new();
        while let Some((m, c)) = rem.terms.first().cloned() {
            let q = dm.divide_into(&m)?;
            let qc = &c / &dc;
            rem = rem.merge(&d.mul_term(&q, &qc), true);
            quot.push((q, qc));
        }
        Some(Polynomial::from_terms(self.n, quot))
    }

    /// Parses the text grammar `3/2*x0^2*x1 - x2 + 1` in `n` variables.
    pub fn parse(s: &str, n: usize) -> Result<Polynomial> {
        Parser { src: s.as_bytes(), pos: 0, n: Some(n) }.polynomial()
    }

    /// Parses with the ambient dimension inferred as one past the largest
    /// variable index (at least `min_n`).
    pub fn parse_infer(s: &str, min_n: usize) -> Result<Polynomial> {
        let p = Parser { src: s.as_bytes(), pos: 0, n: None }.polynomial()?;
        let n = p.n.max(min_n);
        Ok(p.with_n(n))
    }

    fn with_n(&self, n: usize) -> Polynomial {
        if n == self.n {
            return self.clone();
        }
        self.extend(n - self.n)
    }

    pub fn render(&self) -> String {
        self.to_string()
    }
}

/// Serialized as its text form. Deserializing infers the ambient dimension
/// from the largest variable index used.
impl Serialize for Polynomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.render())
    }
}

impl<'de> Deserialize<'de> for Polynomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Polynomial::parse_infer(&s, 1).map_err(serde::de::Error::custom)
    }
}

impl Serialize for RationalPoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        crate::serde_rational::vec::serialize(&self.0, s)
    }
}

impl<'de> Deserialize<'de> for RationalPoint {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        crate::serde_rational::vec::deserialize(d).map(RationalPoint)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            if m.is_one() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{a}*{m}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.checked_add(rhs).expect("polynomial dimensions differ")
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.checked_sub(rhs).expect("polynomial dimensions differ")
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.checked_mul(rhs).expect("polynomial dimensions differ")
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(&-Rational::one())
    }
}

const MAX_EXPONENT: u32 = 1 << 16;
const MAX_VARIABLES: usize = 64;

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    n: Option<usize>,
}

impl Parser<'_> {
    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse { position: self.pos, message: message.into() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn digits(&mut self) -> Result<&str> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected digits");
        }
        Ok(std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits"))
    }

    fn small_number(&mut self, what: &str, max: u64) -> Result<u64> {
        let d = self.digits()?;
        match d.parse::<u64>() {
            Ok(v) if v <= max => Ok(v),
            _ => self.err(format!("{what} out of range")),
        }
    }

    fn polynomial(&mut self) -> Result<Polynomial> {
        let mut terms: Vec<(Vec<u32>, Rational)> = Vec::new();
        let mut sign = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                -1
            }
            Some(b'+') => {
                self.pos += 1;
                1
            }
            None => return self.err("empty polynomial"),
            _ => 1,
        };
        loop {
            let (e, mut c) = self.term()?;
            if sign < 0 {
                c = -c;
            }
            terms.push((e, c));
            match self.peek() {
                None => break,
                Some(b'+') => sign = 1,
                Some(b'-') => sign = -1,
                Some(ch) => return self.err(format!("unexpected character {:?}", ch as char)),
            }
            self.pos += 1;
        }
        let max_var = terms.iter().map(|(e, _)| e.len()).max().unwrap_or(0);
        let n = match self.n {
            Some(n) => {
                if max_var > n {
                    return Err(Error::Parse {
                        position: self.pos,
                        message: format!("variable x{} outside ambient dimension {n}", max_var - 1),
                    });
                }
                n
            }
            None => max_var.max(1),
        };
        let terms = terms
            .into_iter()
            .map(|(mut e, c)| {
                e.resize(n, 0);
                (Monomial::new(e), c)
            })
            .collect();
        Ok(Polynomial::from_terms(n, terms))
    }

    fn term(&mut self) -> Result<(Vec<u32>, Rational)> {
        let mut exps: Vec<u32> = Vec::new();
        let mut coef = Rational::one();
        loop {
            match self.peek() {
                Some(b'x') => {
                    self.pos += 1;
                    let idx = self.small_number("variable index", MAX_VARIABLES as u64 - 1)? as usize;
                    let mut e = 1u32;
                    if self.peek() == Some(b'^') {
                        self.pos += 1;
                        e = self.small_number("exponent", MAX_EXPONENT as u64)? as u32;
                    }
                    if exps.len() <= idx {
                        exps.resize(idx + 1, 0);
                    }
                    exps[idx] = exps[idx].saturating_add(e);
                    if exps[idx] > MAX_EXPONENT {
                        return self.err("exponent out of range");
                    }
                }
                Some(c) if c.is_ascii_digit() => {
                    let num: BigInt = self.digits()?.parse().expect("digits");
                    let mut value = Rational::from_integer(num);
                    if self.peek() == Some(b'/') {
                        self.pos += 1;
                        let den: BigInt = self.digits()?.parse().expect("digits");
                        if den.is_zero() {
                            return self.err("zero denominator");
                        }
                        value /= Rational::from_integer(den);
                    }
                    coef *= value;
                }
                _ => return self.err("expected a number or a variable"),
            }
            if self.peek() == Some(b'*') {
                self.pos += 1;
            } else {
                break;
            }
        }
        // strip trailing zero exponents so max_var reflects real usage
        while exps.last() == Some(&0) {
            exps.pop();
        }
        Ok((exps, coef))
    }
}

/// Convenience for tests and fixtures: parses or panics.
pub fn poly(s: &str, n: usize) -> Polynomial {
    Polynomial::parse(s, n).unwrap_or_else(|e| panic!("bad fixture polynomial {s:?}: {e}"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, ratio};

    #[test]
    fn add_examples() {
        let a = poly("x0 + 1", 1);
        let b = poly("-x0", 1);
        assert_eq!(&a + &b, Polynomial::one(1));
        assert_eq!(&a + &Polynomial::zero(1), a);
        assert_eq!(&poly("1/2*x0^2", 1) + &poly("1/3*x0^2", 1), poly("5/6*x0^2", 1));
    }

    #[test]
    fn mul_examples() {
        assert_eq!(&poly("x0 - 1", 1) * &poly("x0 + 1", 1), poly("x0^2 - 1", 1));
        let p = poly("3*x0*x1 - x1^2 + 2", 2);
        assert_eq!(&p * &Polynomial::one(2), p);
    }

    #[test]
    fn evaluate_examples() {
        let c = poly("x0^2 + x1^2 - 1", 2);
        assert_eq!(c.evaluate(&RationalPoint::from_ints(&[1, 0])).unwrap(), rat(0));
        assert_eq!(c.evaluate(&RationalPoint::from_ints(&[0, 0])).unwrap(), rat(-1));
        assert!(c.evaluate(&RationalPoint::from_ints(&[0])).is_err());
    }

    #[test]
    fn dimension_mismatch() {
        assert!(poly("x0", 1).checked_add(&poly("x1", 2)).is_err());
        assert!(poly("x0", 1).checked_mul(&poly("x1", 2)).is_err());
    }

    #[test]
    fn render_examples() {
        let p = poly("3/2*x0^2*x1 - x2 + 1", 3);
        assert_eq!(p.render(), "3/2*x0^2*x1 - x2 + 1");
        assert_eq!(Polynomial::zero(2).render(), "0");
        assert_eq!(poly(" - 2 * x1 ^ 3 + 1/4 ", 2).render(), "-2*x1^3 + 1/4");
    }

    #[test]
    fn parse_errors() {
        assert!(Polynomial::parse("", 2).is_err());
        assert!(Polynomial::parse("x2", 2).is_err());
        assert!(Polynomial::parse("3/0*x0", 2).is_err());
        assert!(Polynomial::parse("x0 +", 2).is_err());
        assert!(Polynomial::parse("x0 ** 2", 2).is_err());
        assert!(Polynomial::parse("x0^99999999999", 2).is_err());
    }

    #[test]
    fn infer_dimension() {
        assert_eq!(Polynomial::parse_infer("x3 + 1", 1).unwrap().n_vars(), 4);
        assert_eq!(Polynomial::parse_infer("7", 1).unwrap().n_vars(), 1);
    }

    #[test]
    fn compose_and_derivative() {
        let f = poly("x1 - x0^2", 2);
        let param = [poly("x0", 1), poly("x0^2", 1)];
        assert!(f.compose(&param).unwrap().is_zero());
        assert_eq!(poly("x0^3*x1 + x1", 2).derivative(0), poly("3*x0^2*x1", 2));
    }

    #[test]
    fn exact_division() {
        let a = poly("x0 - x1", 2);
        let b = poly("x0^2 + x1 + 3", 2);
        assert_eq!((&a * &b).div_exact(&a), Some(b.clone()));
        assert_eq!(b.div_exact(&a), None);
    }

    #[test]
    fn primitive_form() {
        let p = poly("-1/2*x0 + 1/3", 1);
        assert_eq!(p.primitive(), poly("3*x0 - 2", 1));
        assert_eq!(p.scale(&ratio(3, 7)).primitive(), poly("3*x0 - 2", 1));
    }

    #[test]
    fn point_parsing() {
        let p = RationalPoint::parse("(1/2, -3)").unwrap();
        assert_eq!(p.0, vec![ratio(1, 2), rat(-3)]);
        assert!(RationalPoint::parse("(1,").is_err());
        assert!(RationalPoint::parse("()").is_err());
    }
}
