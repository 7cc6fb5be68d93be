//! Irreducible varieties with cached invariants and rational point oracles.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::decompose::{find_graph_form, GraphForm};
use crate::error::{Error, Result};
use crate::ideal::{HilbertData, Ideal};
use crate::poly::{Polynomial, RationalPoint};
use crate::rational::{ratio, Rational};

/// `x_i = numerators[i](t) / denominator(t)` in `k` parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Parameterization {
    pub n_params: usize,
    pub numerators: Vec<Polynomial>,
    pub denominator: Option<Polynomial>,
}

impl Parameterization {
    pub fn polynomial(numerators: Vec<Polynomial>) -> Result<Self> {
        let k = numerators.first().map_or(0, |p| p.n_vars());
        if let Some(p) = numerators.iter().find(|p| p.n_vars() != k) {
            return Err(Error::DimensionMismatch { expected: k, found: p.n_vars() });
        }
        Ok(Parameterization { n_params: k, numerators, denominator: None })
    }

    pub fn rational(numerators: Vec<Polynomial>, denominator: Polynomial) -> Result<Self> {
        let mut p = Self::polynomial(numerators)?;
        if denominator.n_vars() != p.n_params {
            return Err(Error::DimensionMismatch { expected: p.n_params, found: denominator.n_vars() });
        }
        if denominator.is_zero() {
            return Err(Error::PreconditionViolated("zero denominator".into()));
        }
        p.denominator = Some(denominator);
        Ok(p)
    }

    pub fn from_graph(g: &GraphForm) -> Result<Self> {
        let k = g.free.len();
        let n = g.images.len();
        let mut subst = vec![Polynomial::zero(k); n];
        for (j, &v) in g.free.iter().enumerate() {
            subst[v] = Polynomial::var(k, j);
        }
        let nums = g.images.iter().map(|p| p.compose(&subst)).collect::<Result<Vec<_>>>()?;
        Ok(Parameterization { n_params: k, numerators: nums, denominator: None })
    }

    /// The point at `t`, or `None` where the denominator vanishes.
    pub fn point(&self, t: &[Rational]) -> Option<RationalPoint> {
        let den = match &self.denominator {
            Some(d) => {
                let v = d.eval(t);
                if v.is_zero() {
                    return None;
                }
                v
            }
            None => Rational::one(),
        };
        Some(RationalPoint(self.numerators.iter().map(|p| p.eval(t) / &den).collect()))
    }

    /// Whether `g` vanishes identically on the image, checked on
    /// `g(num / den) den^deg(g)` as a polynomial in the parameters.
    pub fn satisfies(&self, g: &Polynomial) -> Result<bool> {
        let k = self.n_params;
        if g.n_vars() != self.numerators.len() {
            return Err(Error::DimensionMismatch { expected: self.numerators.len(), found: g.n_vars() });
        }
        let Some(den) = &self.denominator else {
            return Ok(g.compose(&self.numerators)?.is_zero());
        };
        let e = g.total_degree().unwrap_or(0);
        let mut den_pows = vec![Polynomial::one(k)];
        for _ in 0..e {
            let next = den_pows.last().unwrap() * den;
            den_pows.push(next);
        }
        let mut acc = Polynomial::zero(k);
        for (m, c) in g.terms() {
            let mut t = den_pows[(e - m.degree()) as usize].scale(c);
            for (i, &p) in m.exponents().iter().enumerate() {
                if p > 0 {
                    t = &t * &self.numerators[i].pow(p);
                }
            }
            acc = &acc + &t;
        }
        Ok(acc.is_zero())
    }

    /// `count` points from a triangular grid of small rational parameters.
    /// Every polynomial of degree at most `m` in the parameters that vanishes
    /// on the first `C(k+m, k)` grid points is zero.
    pub fn sample(&self, count: usize) -> Vec<RationalPoint> {
        let k = self.n_params;
        let mut out = Vec::with_capacity(count);
        if k == 0 {
            if let Some(p) = self.point(&[]) {
                out.push(p);
            }
            return out;
        }
        let mut total = 0u32;
        while out.len() < count {
            let mut idx = Vec::new();
            compositions(k, total, &mut Vec::new(), &mut idx);
            for a in idx {
                let t: Vec<Rational> = a.iter().map(|&i| nth_rational(i as usize)).collect();
                if let Some(p) = self.point(&t) {
                    out.push(p);
                    if out.len() == count {
                        break;
                    }
                }
            }
            total += 1;
            if total > 10_000 {
                break;
            }
        }
        out
    }
}

fn compositions(k: usize, total: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if cur.len() + 1 == k {
        cur.push(total);
        out.push(cur.clone());
        cur.pop();
        return;
    }
    for a in (0..=total).rev() {
        cur.push(a);
        compositions(k, total - a, cur, out);
        cur.pop();
    }
}

/// A fixed injective enumeration of small rationals:
/// `0, 1, -1, 2, -2, 1/2, -1/2, 3, -3, 1/3, -1/3, 3/2, ...`.
pub fn nth_rational(i: usize) -> Rational {
    if i == 0 {
        return Rational::zero();
    }
    let mut seen = 0;
    let mut h = 1i64;
    loop {
        // Positive fractions p/q in lowest terms with max(p, q) = h.
        let mut level = Vec::new();
        for q in 1..=h {
            for p in 1..=h {
                if p.max(q) == h && num_integer::gcd(p, q) == 1 {
                    level.push(ratio(p, q));
                }
            }
        }
        level.sort_by(|a, b| b.cmp(a));
        for r in level {
            seen += 1;
            if seen == i {
                return r;
            }
            seen += 1;
            if seen == i {
                return -r;
            }
        }
        h += 1;
    }
}

/// An irreducible variety: its ideal, asserted prime, with dimension and
/// degree computed from the Hilbert function.
#[derive(Debug, Clone)]
pub struct Variety {
    pub ideal: Ideal,
    pub dim: usize,
    pub degree: u64,
    pub hilbert: HilbertData,
    pub parameterization: Option<Parameterization>,
}

impl Variety {
    /// Wraps a prime ideal. A graph-form parameterization is attached when
    /// one is found.
    pub fn new(ideal: Ideal) -> Result<Variety> {
        let ideal = if ideal.is_zero_ideal() { ideal } else { ideal.simplified()? };
        let (dim, degree, hilbert) = ideal.dimension_and_degree()?;
        let parameterization = match find_graph_form(&ideal)? {
            Some(g) => Some(Parameterization::from_graph(&g)?),
            None => None,
        };
        Ok(Variety { ideal, dim, degree, hilbert, parameterization })
    }

    pub fn parse(n: usize, gens: &[&str]) -> Result<Variety> {
        Variety::new(Ideal::parse(n, gens)?)
    }

    /// The whole space.
    pub fn affine_space(n: usize) -> Variety {
        Variety::new(Ideal::zero(n)).expect("zero ideal")
    }

    /// Replaces the point oracle after checking it lies on the variety.
    pub fn with_parameterization(mut self, p: Parameterization) -> Result<Variety> {
        if p.numerators.len() != self.n_vars() {
            return Err(Error::DimensionMismatch { expected: self.n_vars(), found: p.numerators.len() });
        }
        for g in self.ideal.generators() {
            if !p.satisfies(g)? {
                return Err(Error::PreconditionViolated(format!("parameterization does not satisfy {g}")));
            }
        }
        self.parameterization = Some(p);
        Ok(self)
    }

    pub fn n_vars(&self) -> usize {
        self.ideal.n_vars()
    }

    pub fn codim(&self) -> usize {
        self.n_vars() - self.dim
    }

    pub fn affine_hilbert(&self, m: u32) -> Result<u64> {
        self.ideal.affine_hilbert(m)
    }

    pub fn contains_poly(&self, p: &Polynomial) -> Result<bool> {
        self.ideal.contains(p)
    }

    pub fn sample_points(&self, count: usize) -> Result<Vec<RationalPoint>> {
        match &self.parameterization {
            Some(p) => Ok(p.sample(count)),
            None => Err(Error::MissingPointOracle(format!("{:?}", self.ideal))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::poly;

    #[test]
    fn rational_enumeration_is_injective() {
        let v: Vec<Rational> = (0..200).map(nth_rational).collect();
        let set: std::collections::BTreeSet<_> = v.iter().cloned().collect();
        assert_eq!(set.len(), v.len());
        assert_eq!(v[..6], [ratio(0, 1), ratio(1, 1), ratio(-1, 1), ratio(2, 1), ratio(-2, 1), ratio(1, 2)]);
    }

    #[test]
    fn twisted_cubic_invariants() {
        let v = Variety::parse(3, &["x1 - x0^2", "x2 - x0^3"]).unwrap();
        assert_eq!((v.dim, v.degree), (1, 3));
        let pts = v.sample_points(5).unwrap();
        assert_eq!(pts.len(), 5);
        for p in &pts {
            for g in v.ideal.generators() {
                assert!(g.evaluate(p).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn circle_rational_parameterization() {
        let v = Variety::parse(2, &["x0^2 + x1^2 - 1"]).unwrap();
        assert!(v.parameterization.is_none());
        let p = Parameterization::rational(vec![poly("1 - x0^2", 1), poly("2*x0", 1)], poly("1 + x0^2", 1)).unwrap();
        let v = v.with_parameterization(p).unwrap();
        for pt in v.sample_points(8).unwrap() {
            assert!(poly("x0^2 + x1^2 - 1", 2).evaluate(&pt).unwrap().is_zero());
        }
        let bad = Parameterization::polynomial(vec![poly("x0", 1), poly("x0", 1)]).unwrap();
        assert!(Variety::parse(2, &["x0^2 + x1^2 - 1"]).unwrap().with_parameterization(bad).is_err());
    }

    #[test]
    fn plane_samples_a_triangular_grid() {
        let v = Variety::affine_space(2);
        assert_eq!(v.dim, 2);
        let pts = v.sample_points(6).unwrap();
        let set: std::collections::BTreeSet<String> = pts.iter().map(|p| p.to_string()).collect();
        assert_eq!(set.len(), 6);
    }
}
