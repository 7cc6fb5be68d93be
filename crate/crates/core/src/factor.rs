//! Heuristic factoring over the rationals: enough to split the small ideals
//! met in practice, and to prove irreducibility in a few easy shapes.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::Result;
use crate::ideal::Ideal;
use crate::monomial::Monomial;
use crate::poly::Polynomial;
use crate::rational::Rational;

/// What the heuristics could say about a polynomial.
#[derive(Debug, Clone, PartialEq)]
pub enum Factorization {
    /// Non-constant polynomials whose product has the same zero set.
    Split(Vec<Polynomial>),
    /// Proven irreducible over the rationals.
    Irreducible,
    Unknown,
}

/// Greatest common divisor, normalized to integer primitive form. Computed
/// as `a b / lcm(a, b)` where the lcm generates `(a) ∩ (b)`.
pub fn gcd(a: &Polynomial, b: &Polynomial) -> Result<Polynomial> {
    let n = a.n_vars();
    if a.is_zero() {
        return Ok(b.primitive());
    }
    if b.is_zero() {
        return Ok(a.primitive());
    }
    if a.is_constant() || b.is_constant() {
        return Ok(Polynomial::one(n));
    }
    if b.div_exact(a).is_some() {
        return Ok(a.primitive());
    }
    if a.div_exact(b).is_some() {
        return Ok(b.primitive());
    }
    if let (Some(u), Some(v)) = (univariate_var(a), univariate_var(b)) {
        if u == v {
            return Ok(euclid(a, b));
        }
        return Ok(Polynomial::one(n));
    }
    let ia = Ideal::new(n, vec![a.clone()])?;
    let ib = Ideal::new(n, vec![b.clone()])?;
    let both = ia.intersect(&ib)?.simplified()?;
    let lcm = &both.generators()[0];
    let prod = a * b;
    Ok(prod.div_exact(lcm).expect("lcm divides the product").primitive())
}

/// The single variable a non-constant polynomial uses, if only one.
pub fn univariate_var(p: &Polynomial) -> Option<usize> {
    let vars = p.variables();
    let mut it = vars.iter().enumerate().filter(|(_, &u)| u).map(|(i, _)| i);
    let first = it.next()?;
    it.next().is_none().then_some(first)
}

fn euclid(a: &Polynomial, b: &Polynomial) -> Polynomial {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_zero() {
        let r = univariate_rem(&a, &b);
        a = b;
        b = r;
    }
    a.primitive()
}

fn univariate_rem(a: &Polynomial, b: &Polynomial) -> Polynomial {
    let (bm, bc) = b.terms()[0].clone();
    let mut r = a.clone();
    while let Some((m, c)) = r.terms().first().cloned() {
        let Some(q) = bm.divide_into(&m) else { break };
        r = &r - &b.mul_term(&q, &(&c / &bc));
    }
    r
}

/// Coefficients of `p` as a polynomial in `x_var`, indexed by power.
pub fn coefficients_in(p: &Polynomial, var: usize) -> Vec<Polynomial> {
    let n = p.n_vars();
    let deg = p.degree_in(var) as usize;
    let mut buckets: Vec<Vec<(Monomial, Rational)>> = vec![Vec::new(); deg + 1];
    for (m, c) in p.terms() {
        let mut e = m.exponents().to_vec();
        let k = e[var] as usize;
        e[var] = 0;
        buckets[k].push((Monomial::new(e), c.clone()));
    }
    buckets.into_iter().map(|t| Polynomial::from_terms(n, t)).collect()
}

/// Gcd of the coefficients of `p` as a polynomial in `x_var`.
pub fn content_in(p: &Polynomial, var: usize) -> Result<Polynomial> {
    let mut g = Polynomial::zero(p.n_vars());
    for c in coefficients_in(p, var) {
        if c.is_zero() {
            continue;
        }
        g = gcd(&g, &c)?;
        if g.is_constant() {
            break;
        }
    }
    Ok(g)
}

fn monomial_content(p: &Polynomial) -> Monomial {
    let n = p.n_vars();
    let mut e: Option<Vec<u32>> = None;
    for (m, _) in p.terms() {
        e = Some(match e {
            None => m.exponents().to_vec(),
            Some(v) => v.iter().zip(m.exponents()).map(|(a, b)| *a.min(b)).collect(),
        });
    }
    Monomial::new(e.unwrap_or_else(|| vec![0; n]))
}

/// Exact square root, if `p` is the square of a rational polynomial.
pub fn sqrt(p: &Polynomial) -> Option<Polynomial> {
    if p.is_zero() {
        return Some(p.clone());
    }
    let (lm, lc) = p.terms()[0].clone();
    if lm.exponents().iter().any(|e| e % 2 == 1) || lc.is_negative() {
        return None;
    }
    let root_c = rational_sqrt(&lc)?;
    let root_m = Monomial::new(lm.exponents().iter().map(|e| e / 2).collect());
    let lead = (root_m, root_c);
    let mut g = Polynomial::monomial(lead.0.clone(), lead.1.clone());
    let mut r = p - &(&g * &g);
    let two_lead_c = &lead.1 * Rational::from_integer(2.into());
    while let Some((m, c)) = r.terms().first().cloned() {
        let q = lead.0.divide_into(&m)?;
        let t = Polynomial::monomial(q, &c / &two_lead_c);
        let step = &(&g.scale(&Rational::from_integer(2.into())) * &t) + &(&t * &t);
        g = &g + &t;
        r = &r - &step;
    }
    Some(g)
}

fn rational_sqrt(x: &Rational) -> Option<Rational> {
    let s = |v: &BigInt| {
        let r = v.sqrt();
        (&r * &r == *v).then_some(r)
    };
    Some(Rational::new(s(x.numer())?, s(x.denom())?))
}

/// Tries the heuristics in a fixed order.
pub fn factor(p: &Polynomial) -> Result<Factorization> {
    let n = p.n_vars();
    if p.is_constant() {
        return Ok(Factorization::Unknown);
    }
    let mc = monomial_content(p);
    if p.num_terms() == 1 && mc.degree() == 1 {
        return Ok(Factorization::Irreducible);
    }
    if !mc.is_one() {
        let rest = p.div_exact(&Polynomial::monomial(mc.clone(), Rational::one())).expect("monomial content");
        let mut out: Vec<Polynomial> = (0..n).filter(|&i| mc.exponents()[i] > 0).map(|i| Polynomial::var(n, i)).collect();
        if !rest.is_constant() {
            out.push(rest);
        }
        return Ok(Factorization::Split(out));
    }
    let vars: Vec<usize> = (0..n).filter(|&i| p.degree_in(i) > 0).collect();
    if vars.len() == 1 {
        return Ok(factor_univariate(p, vars[0]));
    }
    for &v in &vars {
        let c = content_in(p, v)?;
        if !c.is_constant() {
            let rest = p.div_exact(&c).expect("content divides");
            return Ok(Factorization::Split(vec![c, rest]));
        }
    }
    // Primitive in every variable from here on.
    for &v in &vars {
        let g = gcd(p, &p.derivative(v))?;
        if !g.is_constant() {
            let free = p.div_exact(&g).expect("gcd divides");
            return Ok(Factorization::Split(vec![free.primitive()]));
        }
    }
    let mut proven = false;
    for &v in &vars {
        match p.degree_in(v) {
            1 => proven = true,
            2 => {
                let c = coefficients_in(p, v);
                let (a, b, c0) = (&c[2], &c[1], &c[0]);
                let four = Rational::from_integer(4.into());
                let disc = &(b * b) - &(a * c0).scale(&four);
                match sqrt(&disc) {
                    Some(s) => {
                        let x = Polynomial::var(n, v);
                        let lin = &(&(a * &x).scale(&Rational::from_integer(2.into())) + b) - &s;
                        let f1 = primitive_part_in(&lin, v)?;
                        let f2 = p.div_exact(&f1).expect("quadratic factor divides");
                        return Ok(Factorization::Split(vec![f1.primitive(), f2.primitive()]));
                    }
                    None => proven = true,
                }
            }
            _ => {}
        }
    }
    Ok(if proven { Factorization::Irreducible } else { Factorization::Unknown })
}

fn primitive_part_in(p: &Polynomial, var: usize) -> Result<Polynomial> {
    let c = content_in(p, var)?;
    Ok(if c.is_constant() { p.clone() } else { p.div_exact(&c).expect("content divides") })
}

fn factor_univariate(p: &Polynomial, v: usize) -> Factorization {
    let n = p.n_vars();
    let g = euclid(p, &p.derivative(v));
    if !g.is_constant() {
        let free = p.div_exact(&g).expect("gcd divides");
        return Factorization::Split(vec![free.primitive()]);
    }
    let deg = p.degree_in(v);
    if deg == 1 {
        return Factorization::Irreducible;
    }
    let coeffs = coefficients_in(&p.primitive(), v);
    let ints: Vec<BigInt> = coeffs.iter().map(|c| c.terms().first().map_or(BigInt::zero(), |t| t.1.to_integer())).collect();
    let (a0, an) = (&ints[0], &ints[deg as usize]);
    if a0.is_zero() {
        return Factorization::Split(vec![Polynomial::var(n, v)]);
    }
    let limit = BigInt::from(1_000_000_000_000i64);
    if a0.abs() > limit || an.abs() > limit {
        return Factorization::Unknown;
    }
    let x = Polynomial::var(n, v);
    for pn in divisors(&a0.abs()) {
        for qd in divisors(&an.abs()) {
            for sgn in [1, -1] {
                let r = Rational::new(BigInt::from(sgn) * &pn, qd.clone());
                if p.eval(&point_with(n, v, &r)).is_zero() {
                    let lin = &x - &Polynomial::constant(n, r);
                    let rest = p.div_exact(&lin).expect("root gives a factor");
                    return Factorization::Split(vec![lin.primitive(), rest.primitive()]);
                }
            }
        }
    }
    if deg <= 3 { Factorization::Irreducible } else { Factorization::Unknown }
}

fn point_with(n: usize, v: usize, r: &Rational) -> Vec<Rational> {
    let mut x = vec![Rational::zero(); n];
    x[v] = r.clone();
    x
}

fn divisors(x: &BigInt) -> Vec<BigInt> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= *x {
        if x.is_multiple_of(&d) {
            small.push(d.clone());
            if &d * &d != *x {
                large.push(x / &d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}
