//! Dense exact linear algebra over the rationals.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::rational::Rational;

pub type Matrix = Vec<Vec<Rational>>;

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(a: &mut Matrix) -> Vec<usize> {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut().skip(c) {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                let (top, bottom) = if i < r { let (t, b) = a.split_at_mut(r); (&mut t[i], &b[0]) } else { let (t, b) = a.split_at_mut(i); (&mut b[0], &t[r]) };
                for (x, y) in top.iter_mut().zip(bottom.iter()).skip(c) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(a: &Matrix) -> usize {
    let mut m = a.clone();
    rref(&mut m).len()
}

const PRIME: u64 = (1 << 61) - 1;

fn mul_mod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % PRIME as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a);
        }
        a = mul_mod(a, a);
        e >>= 1;
    }
    r
}

fn reduce(x: &Rational) -> Option<u64> {
    let p = BigInt::from(PRIME);
    let to_u64 = |b: &BigInt| {
        let r = ((b % &p) + &p) % &p;
        r.to_u64_digits().1.first().copied().unwrap_or(0)
    };
    let d = to_u64(x.denom());
    (d != 0).then(|| mul_mod(to_u64(x.numer()), pow_mod(d, PRIME - 2)))
}

/// Rank modulo a large prime. It never exceeds the rational rank, so a
/// full result certifies full rank. `None` when a denominator vanishes.
pub fn rank_mod_p(a: &Matrix) -> Option<usize> {
    let mut m: Vec<Vec<u64>> = a.iter().map(|r| r.iter().map(reduce).collect::<Option<Vec<_>>>()).collect::<Option<_>>()?;
    let cols = m.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| m[i][c] != 0) else { continue };
        m.swap(r, p);
        let inv = pow_mod(m[r][c], PRIME - 2);
        for i in r + 1..m.len() {
            if m[i][c] != 0 {
                let f = mul_mod(m[i][c], inv);
                for j in c..cols {
                    let sub = mul_mod(f, m[r][j]);
                    m[i][j] = (m[i][j] + PRIME - sub) % PRIME;
                }
            }
        }
        r += 1;
        if r == m.len() {
            break;
        }
    }
    Some(r)
}

/// A basis of `{v : A v = 0}`, one vector per free column.
pub fn nullspace(a: &Matrix, cols: usize) -> Vec<Vec<Rational>> {
    let mut m = a.clone();
    let pivots = rref(&mut m);
    let mut is_pivot = vec![None; cols];
    for (r, &c) in pivots.iter().enumerate() {
        is_pivot[c] = Some(r);
    }
    let mut out = Vec::new();
    for free in 0..cols {
        if is_pivot[free].is_some() {
            continue;
        }
        let mut v = vec![Rational::zero(); cols];
        v[free] = Rational::one();
        for (r, &c) in pivots.iter().enumerate() {
            v[c] = -m[r][free].clone();
        }
        out.push(v);
    }
    out
}

/// Scales a rational vector to coprime integers with a positive first
/// non-zero entry.
pub fn integer_normalize(v: &[Rational]) -> Vec<Rational> {
    use num_integer::Integer;
    let mut l = BigInt::one();
    for x in v {
        l = l.lcm(x.denom());
    }
    let ints: Vec<BigInt> = v.iter().map(|x| (x * Rational::from_integer(l.clone())).to_integer()).collect();
    let mut g = BigInt::zero();
    for x in &ints {
        g = g.gcd(x);
    }
    if g.is_zero() {
        return v.to_vec();
    }
    let neg = ints.iter().find(|x| !x.is_zero()).is_some_and(|x| x < &BigInt::zero());
    ints.into_iter()
        .map(|x| {
            let y = Rational::from_integer(x / &g);
            if neg { -y } else { y }
        })
        .collect()
}

/// Determinant of an integer matrix by fraction-free Bareiss elimination.
pub fn det_bareiss(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Vec<Vec<BigInt>> = m.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else { return BigInt::zero() };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Determinant of a rational matrix, clearing denominators row by row.
pub fn det(m: &Matrix) -> Rational {
    use num_integer::Integer;
    let mut scale = Rational::one();
    let rows: Vec<Vec<BigInt>> = m
        .iter()
        .map(|row| {
            let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            scale *= Rational::from_integer(l.clone());
            row.iter().map(|x| (x * Rational::from_integer(l.clone())).to_integer()).collect()
        })
        .collect();
    Rational::from_integer(det_bareiss(&rows)) / scale
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, ratio};

    #[test]
    fn modular_rank_matches_rational_rank() {
        let a: Matrix = vec![vec![ratio(1, 2), rat(1), rat(3)], vec![rat(1), rat(2), rat(6)], vec![rat(0), ratio(1, 3), rat(1)]];
        assert_eq!(rank_mod_p(&a), Some(rank(&a)));
        assert_eq!(rank(&a), 2);
    }

    fn m(rows: &[&[i64]]) -> Matrix {
        rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect()
    }

    #[test]
    fn nullspace_of_rank_one() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6]]);
        assert_eq!(rank(&a), 1);
        let ns = nullspace(&a, 3);
        assert_eq!(ns.len(), 2);
        for v in ns {
            for row in &a {
                let s: Rational = row.iter().zip(&v).map(|(x, y)| x * y).sum();
                assert!(s.is_zero());
            }
        }
    }

    #[test]
    fn determinants_agree() {
        let a = m(&[&[2, 0, 1], &[1, 3, 2], &[1, 1, 1]]);
        assert_eq!(det(&a), rat(2 * (3 - 2) + (1 - 3)));
        let z = m(&[&[0, 1], &[0, 2]]);
        assert!(det(&z).is_zero());
        assert_eq!(det(&m(&[&[0, 1], &[1, 0]])), rat(-1));
    }

    #[test]
    fn normalize_to_integers() {
        let v = vec![crate::rational::ratio(-1, 2), crate::rational::ratio(1, 3)];
        assert_eq!(integer_normalize(&v), vec![rat(3), rat(-2)]);
    }
}
