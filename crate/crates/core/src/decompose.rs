//! Small-instance splitting of an algebraic set into irreducible components.
//!
//! Branches on any basis element that factors, under graded reverse lex and
//! then under elimination orders. A leaf is accepted as prime when some
//! elimination basis puts it in graph form `x_d = g_d(free)`, or when it is
//! principal with a provably irreducible generator. Anything else makes the
//! whole split fail with `DecompositionIncomplete`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::factor::{factor, Factorization};
use crate::groebner::GroebnerBasis;
use crate::ideal::Ideal;
use crate::monomial::{MonomialOrder, OrderKind};
use crate::poly::{Polynomial, RationalPoint};
use crate::rational::Rational;

const MAX_DEPTH: usize = 24;
const MAX_LEAVES: usize = 96;

/// A prime ideal generated by `x_d - g_d` for each dependent variable, with
/// every `g_d` in the free variables only.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphForm {
    pub free: Vec<usize>,
    /// Coordinate images: `x_i` itself for free `i`, `g_i` otherwise.
    pub images: Vec<Polynomial>,
}

impl GraphForm {
    pub fn n_params(&self) -> usize {
        self.free.len()
    }

    pub fn point(&self, params: &[Rational]) -> RationalPoint {
        let n = self.images.len();
        let mut x = vec![Rational::from_integer(0.into()); n];
        for (&v, p) in self.free.iter().zip(params) {
            x[v] = p.clone();
        }
        RationalPoint(self.images.iter().map(|g| g.eval(&x)).collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PrimeEvidence {
    GraphForm,
    IrreducibleHypersurface,
}

/// An irreducible component with its invariants.
#[derive(Debug, Clone)]
pub struct Component {
    pub ideal: Ideal,
    pub dim: usize,
    pub degree: u64,
    pub evidence: PrimeEvidence,
    pub graph: Option<GraphForm>,
}

fn graph_form_of(gb: &GroebnerBasis) -> Option<GraphForm> {
    let n = gb.n;
    let mut dependent = vec![None; n];
    for g in &gb.basis {
        let (lm, _) = g.leading_term(&gb.order)?;
        if lm.degree() != 1 {
            return None;
        }
        let v = lm.exponents().iter().position(|&e| e == 1)?;
        if dependent[v].is_some() {
            return None;
        }
        dependent[v] = Some(g);
    }
    let free: Vec<usize> = (0..n).filter(|&v| dependent[v].is_none()).collect();
    let mut images = Vec::with_capacity(n);
    for v in 0..n {
        images.push(match dependent[v] {
            None => Polynomial::var(n, v),
            Some(g) => {
                let tail = g - &Polynomial::var(n, v);
                if tail.variables().iter().enumerate().any(|(u, &used)| used && dependent[u].is_some()) {
                    return None;
                }
                -&tail
            }
        });
    }
    Some(GraphForm { free, images })
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for v in start..n {
            cur.push(v);
            rec(v + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

fn block_order(n: usize, block: &[usize]) -> MonomialOrder {
    let rest = (0..n).filter(|v| !block.contains(v));
    let priority = block.iter().copied().chain(rest).collect();
    MonomialOrder::with_priority(OrderKind::Elimination { block: block.len() }, priority)
}

/// Runs a Gröbner computation that is only a heuristic probe; a tripped
/// degree or size ceiling just means "no information".
fn probe(j: &Ideal, order: &MonomialOrder) -> Result<Option<GroebnerBasis>> {
    match j.groebner_in(order) {
        Ok(gb) => Ok(Some(gb)),
        Err(Error::DegreeBudgetExceeded(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Graph-form parameterization of a prime ideal, if one exists under some
/// choice of dependent variables.
pub fn find_graph_form(j: &Ideal) -> Result<Option<GraphForm>> {
    if j.is_unit()? {
        return Ok(None);
    }
    let n = j.n_vars();
    if let Some(g) = graph_form_of(j.groebner()?) {
        return Ok(Some(g));
    }
    let codim = n - j.dimension()?;
    for block in subsets(n, codim) {
        if let Some(gb) = probe(j, &block_order(n, &block))? {
            if let Some(g) = graph_form_of(&gb) {
                return Ok(Some(g));
            }
        }
    }
    Ok(None)
}

/// Evidence that `j` is prime, if the heuristics find some.
pub fn recognize_prime(j: &Ideal) -> Result<Option<(PrimeEvidence, Option<GraphForm>)>> {
    if j.is_unit()? {
        return Ok(None);
    }
    if let Some(g) = find_graph_form(j)? {
        return Ok(Some((PrimeEvidence::GraphForm, Some(g))));
    }
    let gb = j.groebner()?;
    if gb.basis.len() == 1 && factor(&gb.basis[0])? == Factorization::Irreducible {
        return Ok(Some((PrimeEvidence::IrreducibleHypersurface, None)));
    }
    Ok(None)
}

/// First basis element, under a growing list of orders, that factors.
fn find_split(j: &Ideal) -> Result<Option<Vec<Polynomial>>> {
    let n = j.n_vars();
    let scan = |gb: &GroebnerBasis| -> Result<Option<Vec<Polynomial>>> {
        for g in &gb.basis {
            if let Factorization::Split(fs) = factor(g)? {
                let mut fresh = false;
                for f in &fs {
                    if !j.contains(f)? {
                        fresh = true;
                    }
                }
                if fresh {
                    return Ok(Some(fs));
                }
            }
        }
        Ok(None)
    };
    if let Some(fs) = scan(j.groebner()?)? {
        return Ok(Some(fs));
    }
    for k in 1..n {
        for block in subsets(n, k) {
            if let Some(gb) = probe(j, &block_order(n, &block))? {
                if let Some(fs) = scan(&gb)? {
                    return Ok(Some(fs));
                }
            }
        }
    }
    Ok(None)
}

enum Leaf {
    Prime(Ideal, PrimeEvidence, Option<GraphForm>),
    Unknown(Ideal),
}

fn split_rec(j: Ideal, depth: usize, leaves: &mut Vec<Leaf>) -> Result<()> {
    if j.is_unit()? {
        return Ok(());
    }
    if leaves.len() >= MAX_LEAVES || depth > MAX_DEPTH {
        return Err(Error::DecompositionIncomplete(format!("branching budget exhausted at depth {depth}")));
    }
    let j = j.simplified()?;
    if let Some((ev, g)) = recognize_prime(&j)? {
        leaves.push(Leaf::Prime(j, ev, g));
        return Ok(());
    }
    match find_split(&j)? {
        Some(factors) => {
            let mut progressed = false;
            for f in factors {
                if j.contains(&f)? {
                    continue;
                }
                progressed = true;
                split_rec(j.with_generator(f), depth + 1, leaves)?;
            }
            if !progressed {
                leaves.push(Leaf::Unknown(j));
            }
        }
        None => leaves.push(Leaf::Unknown(j)),
    }
    Ok(())
}

/// Components of `Z(j)` as prime ideals, minimal and without duplicates.
pub fn split_components(j: &Ideal) -> Result<Vec<Ideal>> {
    Ok(decompose(j)?.into_iter().map(|c| c.ideal).collect())
}

/// Like [`split_components`], with dimensions, degrees and
/// parameterizations where available.
pub fn decompose(j: &Ideal) -> Result<Vec<Component>> {
    if j.is_unit()? {
        return Err(Error::PreconditionViolated("cannot split the unit ideal".into()));
    }
    let mut leaves = Vec::new();
    split_rec(j.clone(), 0, &mut leaves)?;
    let mut primes: Vec<(Ideal, PrimeEvidence, Option<GraphForm>)> = Vec::new();
    let mut unknown = Vec::new();
    for leaf in leaves {
        match leaf {
            Leaf::Prime(p, e, g) => primes.push((p, e, g)),
            Leaf::Unknown(u) => unknown.push(u),
        }
    }
    // Keep only minimal primes: drop P when a kept Q ⊆ P.
    let mut kept: Vec<(Ideal, PrimeEvidence, Option<GraphForm>)> = Vec::new();
    primes.sort_by_key(|(p, _, _)| std::cmp::Reverse(p.dimension().unwrap_or(0)));
    for cand in primes {
        let mut redundant = false;
        for k in &kept {
            if cand.0.contains_ideal(&k.0)? {
                redundant = true;
                break;
            }
        }
        if !redundant {
            kept.push(cand);
        }
    }
    for u in &unknown {
        let mut covered = false;
        for k in &kept {
            if u.contains_ideal(&k.0)? {
                covered = true;
                break;
            }
        }
        if !covered {
            return Err(Error::DecompositionIncomplete(format!("could not split {u:?}")));
        }
    }
    let mut out = Vec::with_capacity(kept.len());
    for (ideal, evidence, graph) in kept {
        let (dim, degree, _) = ideal.dimension_and_degree()?;
        out.push(Component { ideal, dim, degree, evidence, graph });
    }
    Ok(out)
}
