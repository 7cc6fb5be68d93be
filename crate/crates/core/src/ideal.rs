//! Ideals: membership, affine Hilbert functions, dimension and degree,
//! saturation and intersection.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groebner::{buchberger, Budget, GroebnerBasis};
use crate::monomial::{binomial, monomials_of_degree, Monomial, MonomialOrder};
use crate::poly::Polynomial;
use crate::rational::{rat, Rational};

/// An ideal of `Q[x0..x{n-1}]` given by generators, with a write-once cache
/// of its graded reverse lex Gröbner basis.
pub struct Ideal {
    n: usize,
    generators: Vec<Polynomial>,
    budget: Budget,
    cache: OnceLock<GroebnerBasis>,
}

impl Clone for Ideal {
    fn clone(&self) -> Self {
        let cache = OnceLock::new();
        if let Some(gb) = self.cache.get() {
            let _ = cache.set(gb.clone());
        }
        Ideal { n: self.n, generators: self.generators.clone(), budget: self.budget, cache }
    }
}

impl std::fmt::Debug for Ideal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_list().entries(self.generators.iter()).finish()
    }
}

/// Sampled affine Hilbert function and what it implies.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HilbertData {
    pub values: BTreeMap<u32, u64>,
    pub inferred_dim: usize,
    pub inferred_degree: u64,
    /// Minimum of `H(m) / (m^d deg)` over the sampled tail `m >= 2(n-d)delta`.
    #[serde(with = "crate::serde_rational")]
    pub c0_observed: Rational,
    /// The `delta` used for the sampling threshold.
    pub delta_used: u32,
}

impl Ideal {
    pub fn new(n: usize, generators: Vec<Polynomial>) -> Result<Ideal> {
        if let Some(g) = generators.iter().find(|g| g.n_vars() != n) {
            return Err(Error::DimensionMismatch { expected: n, found: g.n_vars() });
        }
        let generators = generators.into_iter().filter(|g| !g.is_zero()).collect();
        Ok(Ideal { n, generators, budget: Budget::default(), cache: OnceLock::new() })
    }

    /// Parses generator strings in `n` variables.
    pub fn parse(n: usize, gens: &[&str]) -> Result<Ideal> {
        let g = gens.iter().map(|s| Polynomial::parse(s, n)).collect::<Result<Vec<_>>>()?;
        Ideal::new(n, g)
    }

    pub fn zero(n: usize) -> Ideal {
        Ideal::new(n, Vec::new()).expect("no generators")
    }

    pub fn unit(n: usize) -> Ideal {
        Ideal::new(n, vec![Polynomial::one(n)]).expect("dimension")
    }

    pub fn with_budget(mut self, budget: Budget) -> Ideal {
        self.budget = budget;
        self
    }

    pub fn budget(&self) -> Budget {
        self.budget
    }

    pub fn n_vars(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    fn derived(&self, generators: Vec<Polynomial>) -> Ideal {
        Ideal { n: self.n, generators, budget: self.budget, cache: OnceLock::new() }
    }

    /// Reduced graded reverse lex basis, computed once.
    pub fn groebner(&self) -> Result<&GroebnerBasis> {
        if let Some(gb) = self.cache.get() {
            return Ok(gb);
        }
        let gb = self.groebner_in(&MonomialOrder::grevlex())?;
        let _ = self.cache.set(gb);
        Ok(self.cache.get().expect("just set"))
    }

    pub fn groebner_in(&self, order: &MonomialOrder) -> Result<GroebnerBasis> {
        if self.generators.is_empty() {
            return Ok(GroebnerBasis { basis: Vec::new(), order: order.clone(), reduced: true, n: self.n });
        }
        buchberger(&self.generators, order, &self.budget)
    }

    pub fn normal_form(&self, p: &Polynomial) -> Result<Polynomial> {
        if p.n_vars() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: p.n_vars() });
        }
        self.groebner()?.normal_form(p)
    }

    pub fn contains(&self, p: &Polynomial) -> Result<bool> {
        Ok(self.normal_form(p)?.is_zero())
    }

    /// `other ⊆ self`
    pub fn contains_ideal(&self, other: &Ideal) -> Result<bool> {
        for g in other.generators() {
            if !self.contains(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn same_as(&self, other: &Ideal) -> Result<bool> {
        Ok(self.contains_ideal(other)? && other.contains_ideal(self)?)
    }

    pub fn is_unit(&self) -> Result<bool> {
        Ok(self.groebner()?.is_unit())
    }

    pub fn is_zero_ideal(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn sum(&self, other: &Ideal) -> Ideal {
        let mut g = self.generators.clone();
        g.extend(other.generators.iter().cloned());
        self.derived(g)
    }

    pub fn with_generator(&self, p: Polynomial) -> Ideal {
        let mut g = self.generators.clone();
        if !p.is_zero() {
            g.push(p);
        }
        self.derived(g)
    }

    pub fn product(&self, other: &Ideal) -> Ideal {
        let mut g = Vec::new();
        for a in &self.generators {
            for b in &other.generators {
                g.push(a * b);
            }
        }
        self.derived(g)
    }

    /// Generators of the reduced basis, which give a tidier presentation.
    pub fn simplified(&self) -> Result<Ideal> {
        let gb = self.groebner()?;
        let out = self.derived(gb.basis.clone());
        let _ = out.cache.set(gb.clone());
        Ok(out)
    }

    pub fn leading_monomials(&self) -> Result<Vec<Monomial>> {
        Ok(self.groebner()?.leading_monomials())
    }

    /// Counts of standard monomials of each exact degree `0..=max`.
    fn standard_counts(&self, max: u32) -> Result<Vec<u64>> {
        let lms = self.leading_monomials()?;
        let mut counts = Vec::with_capacity(max as usize + 1);
        let mut buf = Vec::new();
        for d in 0..=max {
            buf.clear();
            monomials_of_degree(self.n, d, &mut buf);
            let c = buf.iter().filter(|m| !lms.iter().any(|l| l.divides(m))).count();
            counts.push(c as u64);
        }
        Ok(counts)
    }

    /// Standard monomials of degree at most `m`, ascending in grevlex.
    pub fn standard_monomials(&self, m: u32) -> Result<Vec<Monomial>> {
        let lms = self.leading_monomials()?;
        let mut buf = Vec::new();
        for d in 0..=m {
            monomials_of_degree(self.n, d, &mut buf);
        }
        buf.retain(|x| !lms.iter().any(|l| l.divides(x)));
        let order = MonomialOrder::grevlex();
        buf.sort_by(|a, b| order.cmp(a, b));
        Ok(buf)
    }

    /// A basis of `I_{<=m}`: `μ - NF(μ)` for each non-standard monomial `μ`
    /// of degree at most `m`, ascending in grevlex.
    pub fn degree_part_basis(&self, m: u32) -> Result<Vec<Polynomial>> {
        let gb = self.groebner()?;
        let lms = gb.leading_monomials();
        let mut buf = Vec::new();
        for d in 0..=m {
            monomials_of_degree(self.n, d, &mut buf);
        }
        buf.retain(|x| lms.iter().any(|l| l.divides(x)));
        let order = MonomialOrder::grevlex();
        buf.sort_by(|a, b| order.cmp(a, b));
        buf.into_iter()
            .map(|mu| {
                let p = Polynomial::monomial(mu, Rational::from_integer(1.into()));
                Ok(&p - &gb.normal_form(&p)?)
            })
            .collect()
    }

    /// `dim Q[x]_{<=m} / I_{<=m}`, via the leading-term ideal.
    pub fn affine_hilbert(&self, m: u32) -> Result<u64> {
        Ok(self.standard_counts(m)?.iter().sum())
    }

    pub fn hilbert_values(&self, max: u32) -> Result<Vec<u64>> {
        let mut acc = 0;
        Ok(self
            .standard_counts(max)?
            .into_iter()
            .map(|c| {
                acc += c;
                acc
            })
            .collect())
    }

    /// Dimension and degree from the affine Hilbert polynomial, with the
    /// sampling threshold for the observed constant taken from the largest
    /// reduced basis degree.
    pub fn dimension_and_degree(&self) -> Result<(usize, u64, HilbertData)> {
        let delta = self.groebner()?.basis.iter().filter_map(|g| g.total_degree()).max().unwrap_or(1).max(1);
        self.dimension_and_degree_with_delta(delta)
    }

    pub fn dimension_and_degree_with_delta(&self, delta: u32) -> Result<(usize, u64, HilbertData)> {
        let gb = self.groebner()?;
        if gb.is_unit() {
            return Err(Error::PreconditionViolated("dimension of the unit ideal".into()));
        }
        let n = self.n;
        let max_lm = gb.leading_monomials().iter().map(|m| m.degree()).max().unwrap_or(1).max(1);
        // The Hilbert function of a monomial ideal generated in degree <= D
        // is polynomial from n*D on.
        let start = n as u32 * max_lm;
        let limit = (start + 4 * n as u32 + 16).min(self.budget.max_degree.max(start) * 4 + 16);
        let mut top = start + n as u32 + 3;
        loop {
            if top > limit {
                return Err(Error::NotStabilized(limit));
            }
            let values = self.hilbert_values(top)?;
            if let Some((d, deg)) = detect_polynomial(&values) {
                let lo = (2 * (n - d) as u32 * delta).max(1);
                let values = if (lo + 5) as usize >= values.len() { self.hilbert_values(lo + 5)? } else { values };
                let mut c0: Option<Rational> = None;
                for m in lo..=lo + 5 {
                    let denom = rat(m as i64).pow(d as i32) * rat(deg as i64);
                    let r = Rational::from_integer(values[m as usize].into()) / denom;
                    c0 = Some(match c0 {
                        Some(c) if c <= r => c,
                        _ => r,
                    });
                }
                let data = HilbertData {
                    values: values.iter().enumerate().map(|(m, &h)| (m as u32, h)).collect(),
                    inferred_dim: d,
                    inferred_degree: deg,
                    c0_observed: c0.unwrap_or_else(Rational::zero),
                    delta_used: delta,
                };
                return Ok((d, deg, data));
            }
            top += n as u32 + 2;
        }
    }

    /// Dimension only.
    pub fn dimension(&self) -> Result<usize> {
        Ok(self.dimension_and_degree()?.0)
    }

    /// `J : f^∞` by eliminating `y` from `J + (1 - y f)`.
    pub fn saturate_by(&self, f: &Polynomial) -> Result<Ideal> {
        if f.is_zero() {
            return Ok(Ideal::unit(self.n).with_budget(self.budget));
        }
        if f.is_constant() {
            return Ok(self.clone());
        }
        let n = self.n;
        let y = Polynomial::var(n + 1, n);
        let mut gens: Vec<Polynomial> = self.generators.iter().map(|g| g.extend(1)).collect();
        gens.push(&Polynomial::one(n + 1) - &(&y * &f.extend(1)));
        self.eliminate_extra(gens, 1)
    }

    /// Runs an elimination Gröbner basis in `n + extra` variables and keeps
    /// the elements free of the extra ones.
    fn eliminate_extra(&self, gens: Vec<Polynomial>, extra: usize) -> Result<Ideal> {
        let n = self.n;
        let order = MonomialOrder::eliminate_trailing(n + extra, extra);
        let gb = buchberger(&gens, &order, &self.budget)?;
        let kept: Vec<Polynomial> = gb.basis.iter().filter_map(|g| g.restrict(n)).collect();
        Ok(self.derived(kept))
    }

    /// `J : K^∞`, the intersection of the saturations by each generator of
    /// `K`. Saturating by the unit ideal returns `J`; by the zero ideal, the
    /// unit ideal.
    pub fn saturate(&self, k: &Ideal) -> Result<Ideal> {
        if k.n != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: k.n });
        }
        if k.generators.is_empty() {
            return Ok(Ideal::unit(self.n).with_budget(self.budget));
        }
        if self.is_unit()? {
            return Ok(self.clone());
        }
        let mut acc: Option<Ideal> = None;
        for f in k.simplified()?.generators() {
            let s = self.saturate_by(f)?;
            acc = Some(match acc {
                None => s,
                Some(a) => a.intersect(&s)?,
            });
        }
        acc.unwrap_or_else(|| self.clone()).simplified()
    }

    /// `A ∩ B` by eliminating `t` from `t A + (1 - t) B`.
    pub fn intersect(&self, other: &Ideal) -> Result<Ideal> {
        if other.n != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: other.n });
        }
        if self.is_unit()? {
            return Ok(other.clone());
        }
        if other.is_unit()? {
            return Ok(self.clone());
        }
        if self.generators.is_empty() || other.generators.is_empty() {
            return Ok(Ideal::zero(self.n).with_budget(self.budget));
        }
        let n = self.n;
        let t = Polynomial::var(n + 1, n);
        let one_minus_t = &Polynomial::one(n + 1) - &t;
        let mut gens: Vec<Polynomial> = self.generators.iter().map(|g| &t * &g.extend(1)).collect();
        gens.extend(other.generators.iter().map(|g| &one_minus_t * &g.extend(1)));
        self.eliminate_extra(gens, 1)
    }
}

/// Finds `d` such that the `d`-th backward differences are constant and
/// non-zero over the last three values.
fn detect_polynomial(values: &[u64]) -> Option<(usize, u64)> {
    let mut seq: Vec<i128> = values.iter().map(|&v| v as i128).collect();
    for d in 0..values.len().saturating_sub(3) {
        let k = seq.len();
        if k < 3 {
            return None;
        }
        if seq[k - 1] == seq[k - 2] && seq[k - 2] == seq[k - 3] {
            return (seq[k - 1] > 0).then_some((d, seq[k - 1] as u64));
        }
        seq = seq.windows(2).map(|w| w[1] - w[0]).collect();
    }
    None
}

/// Whether the prime `v` is an irreducible component of `Z(j)`.
///
/// Requires `j ⊆ v`. `Z(j : v^∞)` is the closure of `Z(j) \ Z(v)`, so `Z(v)`
/// is a component exactly when that saturation is not contained in `v`.
pub fn is_component(v: &Ideal, j: &Ideal) -> Result<bool> {
    if !v.contains_ideal(j)? {
        return Err(Error::PreconditionViolated("generating set is not contained in I(V)".into()));
    }
    let sat = j.saturate(v)?;
    Ok(!v.contains_ideal(&sat)?)
}

/// Number of monomials of degree at most `m` in `n` variables.
pub fn full_count(n: usize, m: u32) -> u64 {
    binomial(n as u64 + m as u64, n as u64)
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::poly;

    fn twisted_cubic() -> Ideal {
        Ideal::parse(3, &["x1 - x0^2", "x2 - x0^3"]).unwrap()
    }

    #[test]
    fn hilbert_examples() {
        assert_eq!(Ideal::parse(2, &["x0"]).unwrap().affine_hilbert(4).unwrap(), 5);
        assert_eq!(Ideal::parse(2, &["x1 - x0^2"]).unwrap().affine_hilbert(3).unwrap(), 7);
        assert_eq!(Ideal::unit(2).affine_hilbert(10).unwrap(), 0);
        let h: Vec<u64> = (1..=6).map(|m| twisted_cubic().affine_hilbert(m).unwrap()).collect();
        assert_eq!(h, vec![4, 7, 10, 13, 16, 19]);
    }

    #[test]
    fn dimension_degree_examples() {
        let (d, deg, data) = twisted_cubic().dimension_and_degree().unwrap();
        assert_eq!((d, deg), (1, 3));
        assert!(data.c0_observed > Rational::zero());
        let circle = Ideal::parse(2, &["x0^2 + x1^2 - 1"]).unwrap();
        let (d, deg, _) = circle.dimension_and_degree().unwrap();
        assert_eq!((d, deg), (1, 2));
        let pts = Ideal::parse(2, &["x0^2 - x0", "x1^2 - x1"]).unwrap();
        let (d, deg, _) = pts.dimension_and_degree().unwrap();
        assert_eq!((d, deg), (0, 4));
        let (d, deg, _) = Ideal::zero(3).dimension_and_degree().unwrap();
        assert_eq!((d, deg), (3, 1));
        assert!(Ideal::unit(2).dimension_and_degree().is_err());
    }

    #[test]
    fn membership_examples() {
        let tc = twisted_cubic();
        assert!(tc.contains(&poly("x1 - x0^2", 3)).unwrap());
        assert!(tc.contains(&poly("x1^2 - x0*x2", 3)).unwrap());
        let sq = Ideal::parse(1, &["x0^2"]).unwrap();
        assert!(!sq.contains(&poly("x0", 1)).unwrap());
    }

    #[test]
    fn saturation_examples() {
        let j = Ideal::parse(2, &["x0*x1"]).unwrap();
        let s = j.saturate(&Ideal::parse(2, &["x0"]).unwrap()).unwrap();
        assert!(s.same_as(&Ideal::parse(2, &["x1"]).unwrap()).unwrap());
        assert!(j.saturate(&Ideal::unit(2)).unwrap().same_as(&j).unwrap());

        let union = Ideal::parse(3, &["x1 - x0^2", "x0*x2 - x1^2"]).unwrap();
        let line = Ideal::parse(3, &["x0", "x1"]).unwrap();
        let s = union.saturate(&line).unwrap();
        assert!(s.same_as(&twisted_cubic()).unwrap());
    }

    #[test]
    fn intersection_of_axes() {
        let a = Ideal::parse(2, &["x0"]).unwrap();
        let b = Ideal::parse(2, &["x1"]).unwrap();
        assert!(a.intersect(&b).unwrap().same_as(&Ideal::parse(2, &["x0*x1"]).unwrap()).unwrap());
    }

    #[test]
    fn component_examples() {
        let v = twisted_cubic();
        assert!(is_component(&v, &twisted_cubic()).unwrap());
        assert!(!is_component(&v, &Ideal::parse(3, &["x1 - x0^2"]).unwrap()).unwrap());
        let union = Ideal::parse(3, &["x1 - x0^2", "x0*x2 - x1^2"]).unwrap();
        assert!(is_component(&v, &union).unwrap());
        let bad = Ideal::parse(3, &["x0"]).unwrap();
        assert!(matches!(is_component(&v, &bad), Err(Error::PreconditionViolated(_))));
    }

    #[test]
    fn degree_part_dimension() {
        let tc = twisted_cubic();
        for m in 0..5 {
            let b = tc.degree_part_basis(m).unwrap();
            assert_eq!(b.len() as u64, full_count(3, m) - tc.affine_hilbert(m).unwrap());
            assert!(b.iter().all(|p| tc.contains(p).unwrap()));
        }
    }

    #[test]
    fn difference_detection() {
        // 3m + 1
        let v: Vec<u64> = (0..10).map(|m| 3 * m + 1).collect();
        assert_eq!(detect_polynomial(&v), Some((1, 3)));
        let c = vec![4u64; 8];
        assert_eq!(detect_polynomial(&c), Some((0, 4)));
    }
}
