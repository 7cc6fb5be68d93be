use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

/// Exponent vector `x0^e0 * x1^e1 * ...` of fixed length `n`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn one(n: usize) -> Self {
        Monomial(vec![0; n])
    }

    pub fn var(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn n_vars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`, if `self` divides `other`.
    pub fn divide_into(&self, other: &Monomial) -> Option<Monomial> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| b.checked_sub(*a))
            .collect::<Option<Vec<_>>>()
            .map(Monomial)
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Copy with extra trailing variables of exponent zero.
    pub fn extend(&self, extra: usize) -> Monomial {
        let mut e = self.0.clone();
        e.resize(self.0.len() + extra, 0);
        Monomial(e)
    }

    pub fn truncate(&self, n: usize) -> Monomial {
        Monomial(self.0[..n].to_vec())
    }

    pub fn uses_only(&self, vars: &[bool]) -> bool {
        self.0.iter().zip(vars).all(|(&e, &allowed)| e == 0 || allowed)
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let mut first = true;
        for (i, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "x{i}")?;
            } else {
                write!(f, "x{i}^{e}")?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OrderKind {
    GradedReverseLex,
    Lex,
    /// Block order: degree in the first `block` variables (in priority
    /// order) decides first, ties broken by graded reverse lex.
    Elimination { block: usize },
}

/// A monomial order together with the variable priority it uses.
///
/// `priority[0]` is the most significant variable. An empty priority list
/// means the identity `x0 > x1 > ... > x{n-1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MonomialOrder {
    pub kind: OrderKind,
    pub priority: Vec<usize>,
}

impl Default for MonomialOrder {
    fn default() -> Self {
        Self::grevlex()
    }
}

impl MonomialOrder {
    pub fn grevlex() -> Self {
        MonomialOrder { kind: OrderKind::GradedReverseLex, priority: Vec::new() }
    }

    pub fn lex() -> Self {
        MonomialOrder { kind: OrderKind::Lex, priority: Vec::new() }
    }

    pub fn with_priority(kind: OrderKind, priority: Vec<usize>) -> Self {
        MonomialOrder { kind, priority }
    }

    /// Eliminates the trailing `block` variables of an `n`-variable ring.
    pub fn eliminate_trailing(n: usize, block: usize) -> Self {
        let priority = (n - block..n).chain(0..n - block).collect();
        MonomialOrder { kind: OrderKind::Elimination { block }, priority }
    }

    pub fn is_graded(&self) -> bool {
        matches!(self.kind, OrderKind::GradedReverseLex)
    }

    #[inline]
    fn var(&self, rank: usize) -> usize {
        if self.priority.is_empty() {
            rank
        } else {
            self.priority[rank]
        }
    }

    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        let n = a.0.len();
        match self.kind {
            OrderKind::Lex => {
                for r in 0..n {
                    let v = self.var(r);
                    match a.0[v].cmp(&b.0[v]) {
                        Ordering::Equal => continue,
                        o => return o,
                    }
                }
                Ordering::Equal
            }
            OrderKind::GradedReverseLex => self.grevlex_cmp(a, b),
            OrderKind::Elimination { block } => {
                let da: u32 = (0..block).map(|r| a.0[self.var(r)]).sum();
                let db: u32 = (0..block).map(|r| b.0[self.var(r)]).sum();
                da.cmp(&db).then_with(|| self.grevlex_cmp(a, b))
            }
        }
    }

    fn grevlex_cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match a.degree().cmp(&b.degree()) {
            Ordering::Equal => {}
            o => return o,
        }
        for r in (0..a.0.len()).rev() {
            let v = self.var(r);
            match a.0[v].cmp(&b.0[v]) {
                Ordering::Equal => continue,
                o => return o.reverse(),
            }
        }
        Ordering::Equal
    }
}

/// All monomials of total degree at most `m` in `n` variables, ascending in
/// graded reverse lex. There are `C(n+m, n)` of them.
pub fn monomials_up_to(n: usize, m: u32) -> Vec<Monomial> {
    monomials_up_to_in(n, m, &MonomialOrder::grevlex())
}

pub fn monomials_up_to_in(n: usize, m: u32, order: &MonomialOrder) -> Vec<Monomial> {
    let mut out = Vec::new();
    for d in 0..=m {
        monomials_of_degree(n, d, &mut out);
    }
    out.sort_by(|a, b| order.cmp(a, b));
    out
}

/// Pushes every monomial of total degree exactly `d` in `n` variables.
pub fn monomials_of_degree(n: usize, d: u32, out: &mut Vec<Monomial>) {
    fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if i + 1 == cur.len() {
            cur[i] = left;
            out.push(Monomial(cur.clone()));
            return;
        }
        for e in (0..=left).rev() {
            cur[i] = e;
            rec(i + 1, left - e, cur, out);
        }
        cur[i] = 0;
    }
    if n == 0 {
        if d == 0 {
            out.push(Monomial(Vec::new()));
        }
        return;
    }
    let mut cur = vec![0; n];
    rec(0, d, &mut cur, out);
}

pub fn binomial(n: u64, k: u64) -> u64 {
    let k = k.min(n - k.min(n));
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(e: &[u32]) -> Monomial {
        Monomial::new(e.to_vec())
    }

    #[test]
    fn enumeration_counts() {
        let two = monomials_up_to(2, 1);
        assert_eq!(two, vec![m(&[0, 0]), m(&[0, 1]), m(&[1, 0])]);
        assert_eq!(monomials_up_to(3, 2).len(), 10);
        assert_eq!(monomials_up_to(1, 5).len(), 6);
        assert_eq!(binomial(5, 3), 10);
    }

    #[test]
    fn grevlex_degree_two_in_three_vars() {
        let o = MonomialOrder::grevlex();
        // x0^2 > x0x1 > x1^2 > x0x2 > x1x2 > x2^2
        let seq = [m(&[2, 0, 0]), m(&[1, 1, 0]), m(&[0, 2, 0]), m(&[1, 0, 1]), m(&[0, 1, 1]), m(&[0, 0, 2])];
        for w in seq.windows(2) {
            assert_eq!(o.cmp(&w[0], &w[1]), Ordering::Greater, "{:?} vs {:?}", w[0], w[1]);
        }
    }

    #[test]
    fn lex_and_elimination() {
        let lex = MonomialOrder::lex();
        assert_eq!(lex.cmp(&m(&[1, 0]), &m(&[0, 5])), Ordering::Greater);
        let elim = MonomialOrder::eliminate_trailing(3, 1);
        assert_eq!(elim.cmp(&m(&[0, 0, 1]), &m(&[5, 5, 0])), Ordering::Greater);
        assert_eq!(elim.cmp(&m(&[2, 0, 0]), &m(&[0, 1, 0])), Ordering::Greater);
    }

    #[test]
    fn division() {
        assert_eq!(m(&[1, 0]).divide_into(&m(&[2, 1])), Some(m(&[1, 1])));
        assert_eq!(m(&[1, 2]).divide_into(&m(&[2, 1])), None);
        assert_eq!(m(&[1, 2]).lcm(&m(&[2, 1])), m(&[2, 2]));
    }
}
