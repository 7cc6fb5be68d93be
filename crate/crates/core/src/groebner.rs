//! Buchberger's algorithm with the product and chain criteria, and full
//! normal forms.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::time::Instant;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::monomial::{Monomial, MonomialOrder};
use crate::poly::{Polynomial, Term};
use crate::rational::Rational;

/// Guardrails for Gröbner computations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    /// Ceiling on the degree of any S-pair lcm or new basis element.
    pub max_degree: u32,
    /// Ceiling on the number of basis elements.
    pub max_basis: usize,
    #[serde(skip)]
    pub deadline: Option<Instant>,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_degree: 40, max_basis: 500, deadline: None }
    }
}

impl Budget {
    pub fn check_time(&self) -> Result<()> {
        match self.deadline {
            Some(d) if Instant::now() > d => Err(Error::TimeBudgetExceeded),
            _ => Ok(()),
        }
    }
}

/// A reduced Gröbner basis with monic elements, sorted by ascending leading
/// monomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroebnerBasis {
    pub basis: Vec<Polynomial>,
    pub order: MonomialOrder,
    pub reduced: bool,
    pub n: usize,
}

/// Terms sorted descending in a specific order.
#[derive(Clone, Debug)]
struct OPoly(Vec<Term>);

impl OPoly {
    fn from_poly(p: &Polynomial, order: &MonomialOrder) -> OPoly {
        let mut t = p.terms().to_vec();
        t.sort_by(|a, b| order.cmp(&b.0, &a.0));
        OPoly(t)
    }

    fn lm(&self) -> &Monomial {
        &self.0[0].0
    }

    fn lc(&self) -> &Rational {
        &self.0[0].1
    }

    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn make_monic(&mut self) {
        if self.0.is_empty() {
            return;
        }
        let inv = self.0[0].1.recip();
        if inv.is_one() {
            return;
        }
        for (_, c) in &mut self.0 {
            *c *= &inv;
        }
    }

    /// `self - c * m * other`
    fn sub_mul(&self, c: &Rational, m: &Monomial, other: &OPoly, order: &MonomialOrder) -> OPoly {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        let shifted = |k: usize| other.0[k].0.mul(m);
        let mut next_b: Option<Monomial> = other.0.first().map(|_| shifted(0));
        while i < self.0.len() || next_b.is_some() {
            let ord = match (self.0.get(i), &next_b) {
                (Some(a), Some(bm)) => order.cmp(&a.0, bm),
                (Some(_), None) => Ordering::Greater,
                (None, _) => Ordering::Less,
            };
            match ord {
                Ordering::Greater => {
                    out.push(self.0[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    let bm = next_b.take().unwrap();
                    out.push((bm, -(c * &other.0[j].1)));
                    j += 1;
                    next_b = (j < other.0.len()).then(|| shifted(j));
                }
                Ordering::Equal => {
                    let bm = next_b.take().unwrap();
                    let v = &self.0[i].1 - c * &other.0[j].1;
                    if !v.is_zero() {
                        out.push((bm, v));
                    }
                    i += 1;
                    j += 1;
                    next_b = (j < other.0.len()).then(|| shifted(j));
                }
            }
        }
        OPoly(out)
    }

    fn to_poly(&self, n: usize) -> Polynomial {
        Polynomial::from_terms(n, self.0.clone())
    }
}

/// Full reduction of `p` by `basis` (each element non-zero).
fn reduce(p: &OPoly, basis: &[OPoly], order: &MonomialOrder) -> OPoly {
    let mut rem: Vec<Term> = Vec::new();
    let mut cur = p.clone();
    while !cur.is_zero() {
        let (lm, lc) = (cur.lm().clone(), cur.lc().clone());
        let divisor = basis.iter().find(|g| g.lm().divides(&lm));
        match divisor {
            Some(g) => {
                let q = g.lm().divide_into(&lm).expect("divides");
                let c = &lc / g.lc();
                cur = cur.sub_mul(&c, &q, g, order);
            }
            None => {
                rem.push(cur.0.remove(0));
            }
        }
    }
    OPoly(rem)
}

fn s_poly(a: &OPoly, b: &OPoly, order: &MonomialOrder) -> OPoly {
    let l = a.lm().lcm(b.lm());
    let ma = a.lm().divide_into(&l).unwrap();
    let mb = b.lm().divide_into(&l).unwrap();
    let left = OPoly(a.0.iter().map(|(m, c)| (m.mul(&ma), c / a.lc())).collect());
    left.sub_mul(&b.lc().recip(), &mb, b, order)
}

/// Computes the reduced Gröbner basis of the ideal generated by `gens`.
pub fn buchberger(gens: &[Polynomial], order: &MonomialOrder, budget: &Budget) -> Result<GroebnerBasis> {
    let n = gens.first().map(|g| g.n_vars()).unwrap_or(0);
    if let Some(g) = gens.iter().find(|g| g.n_vars() != n) {
        return Err(Error::DimensionMismatch { expected: n, found: g.n_vars() });
    }
    let mut g: Vec<OPoly> = Vec::new();
    let mut pairs: BTreeSet<(u32, usize, usize)> = BTreeSet::new();

    let mut inputs: Vec<OPoly> = gens.iter().filter(|p| !p.is_zero()).map(|p| OPoly::from_poly(p, order)).collect();
    inputs.sort_by(|a, b| order.cmp(a.lm(), b.lm()));

    let add = |h: OPoly, g: &mut Vec<OPoly>, pairs: &mut BTreeSet<(u32, usize, usize)>| -> Result<()> {
        let deg = h.0.iter().map(|(m, _)| m.degree()).max().unwrap_or(0);
        if deg > budget.max_degree {
            return Err(Error::DegreeBudgetExceeded(format!("basis element of degree {deg}")));
        }
        let k = g.len();
        for (i, gi) in g.iter().enumerate() {
            let l = gi.lm().lcm(h.lm());
            pairs.insert((l.degree(), i, k));
        }
        g.push(h);
        if g.len() > budget.max_basis {
            return Err(Error::DegreeBudgetExceeded(format!("basis size above {}", budget.max_basis)));
        }
        Ok(())
    };

    for p in inputs {
        let mut r = reduce(&p, &g, order);
        if r.is_zero() {
            continue;
        }
        r.make_monic();
        add(r, &mut g, &mut pairs)?;
    }

    while let Some(&key) = pairs.iter().next() {
        pairs.remove(&key);
        budget.check_time()?;
        let (ldeg, i, j) = key;
        if ldeg > budget.max_degree {
            return Err(Error::DegreeBudgetExceeded(format!("S-pair lcm of degree {ldeg}")));
        }
        let (a, b) = (&g[i], &g[j]);
        if a.lm().is_coprime(b.lm()) {
            continue;
        }
        let l = a.lm().lcm(b.lm());
        let pending = |x: usize, y: usize, pairs: &BTreeSet<(u32, usize, usize)>| {
            let (x, y) = if x < y { (x, y) } else { (y, x) };
            let d = g[x].lm().lcm(g[y].lm()).degree();
            pairs.contains(&(d, x, y))
        };
        let chain = (0..g.len()).any(|k| {
            k != i && k != j && g[k].lm().divides(&l) && !pending(i, k, &pairs) && !pending(j, k, &pairs)
        });
        if chain {
            continue;
        }
        let s = s_poly(a, b, order);
        let mut r = reduce(&s, &g, order);
        if r.is_zero() {
            continue;
        }
        r.make_monic();
        add(r, &mut g, &mut pairs)?;
    }

    Ok(GroebnerBasis { basis: interreduce(g, order, n), order: order.clone(), reduced: true, n })
}

fn interreduce(g: Vec<OPoly>, order: &MonomialOrder, n: usize) -> Vec<Polynomial> {
    // drop elements whose leading monomial is divisible by another's
    let mut minimal: Vec<OPoly> = Vec::new();
    for (i, p) in g.iter().enumerate() {
        let redundant = g.iter().enumerate().any(|(j, q)| {
            j != i && q.lm().divides(p.lm()) && (q.lm() != p.lm() || j < i)
        });
        if !redundant {
            minimal.push(p.clone());
        }
    }
    let mut out = Vec::with_capacity(minimal.len());
    for i in 0..minimal.len() {
        let others: Vec<OPoly> = minimal.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, q)| q.clone()).collect();
        let head = OPoly(vec![minimal[i].0[0].clone()]);
        let tail = OPoly(minimal[i].0[1..].to_vec());
        let mut r = reduce(&tail, &others, order);
        r.0.insert(0, head.0[0].clone());
        r.make_monic();
        out.push(r);
    }
    out.sort_by(|a, b| order.cmp(a.lm(), b.lm()));
    out.into_iter().map(|p| p.to_poly(n)).collect()
}

impl GroebnerBasis {
    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.basis.iter().map(|p| p.leading_term(&self.order).expect("non-zero").0.clone()).collect()
    }

    pub fn is_unit(&self) -> bool {
        self.basis.iter().any(|p| p.is_constant())
    }

    /// Remainder of `p` with no term divisible by a leading monomial.
    pub fn normal_form(&self, p: &Polynomial) -> Result<Polynomial> {
        if p.n_vars() != self.n && !self.basis.is_empty() {
            return Err(Error::DimensionMismatch { expected: self.n, found: p.n_vars() });
        }
        let basis: Vec<OPoly> = self.basis.iter().map(|b| OPoly::from_poly(b, &self.order)).collect();
        Ok(reduce(&OPoly::from_poly(p, &self.order), &basis, &self.order).to_poly(p.n_vars()))
    }

    pub fn reduces_to_zero(&self, p: &Polynomial) -> Result<bool> {
        Ok(self.normal_form(p)?.is_zero())
    }

    /// Checks that every S-polynomial of the basis reduces to zero.
    pub fn s_pairs_reduce_to_zero(&self) -> bool {
        let basis: Vec<OPoly> = self.basis.iter().map(|b| OPoly::from_poly(b, &self.order)).collect();
        for i in 0..basis.len() {
            for j in i + 1..basis.len() {
                let s = s_poly(&basis[i], &basis[j], &self.order);
                if !reduce(&s, &basis, &self.order).is_zero() {
                    return false;
                }
            }
        }
        true
    }

    /// No leading monomial divides a term of another basis element.
    pub fn is_reduced(&self) -> bool {
        let lms = self.leading_monomials();
        self.basis.iter().enumerate().all(|(i, p)| {
            p.terms().iter().all(|(m, _)| lms.iter().enumerate().all(|(j, l)| j == i || !l.divides(m)))
        })
    }
}
