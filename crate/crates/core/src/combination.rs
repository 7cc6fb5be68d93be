//! Generic linear combinations with small integer coefficients.

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::ideal::Ideal;
use crate::poly::{Polynomial, RationalPoint};
use crate::rational::rat;

/// Attempts made before giving up.
pub const DEFAULT_ATTEMPTS: usize = 64;

/// Returns `Σ c_j polys_j` vanishing on `must_vanish_on` and lying outside
/// every ideal of `must_not_vanish_on`.
///
/// The all-ones vector is tried first. Later attempts draw coefficients from
/// `[-w, w]` with `w = 3` doubling after every eight failures.
pub fn generic_combination(
    polys: &[Polynomial],
    must_vanish_on: &[RationalPoint],
    must_not_vanish_on: &[&Ideal],
    seed: u64,
) -> Result<Polynomial> {
    generic_combination_with(polys, must_vanish_on, must_not_vanish_on, seed, DEFAULT_ATTEMPTS).map(|(p, _)| p)
}

/// Like [`generic_combination`] but also returns the coefficient vector.
pub fn generic_combination_with(
    polys: &[Polynomial],
    must_vanish_on: &[RationalPoint],
    must_not_vanish_on: &[&Ideal],
    seed: u64,
    attempts: usize,
) -> Result<(Polynomial, Vec<i64>)> {
    let Some(first) = polys.first() else {
        return Err(Error::PreconditionViolated("no polynomials to combine".into()));
    };
    let n = first.n_vars();
    for p in polys {
        if p.n_vars() != n {
            return Err(Error::DimensionMismatch { expected: n, found: p.n_vars() });
        }
        for pt in must_vanish_on {
            if !p.evaluate(pt)?.is_zero() {
                return Err(Error::PreconditionViolated(format!("{p} does not vanish at {pt}")));
            }
        }
    }
    for ideal in must_not_vanish_on {
        let mut any = false;
        for p in polys {
            if !ideal.contains(p)? {
                any = true;
                break;
            }
        }
        if !any {
            return Err(Error::PreconditionViolated("every input lies in an excluded ideal".into()));
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut width: i64 = 3;
    for attempt in 0..attempts {
        let coeffs: Vec<i64> = if attempt == 0 {
            vec![1; polys.len()]
        } else {
            if attempt % 8 == 0 {
                width = width.saturating_mul(2);
            }
            (0..polys.len()).map(|_| rng.gen_range(-width..=width)).collect()
        };
        if coeffs.iter().all(|&c| c == 0) {
            continue;
        }
        let mut f = Polynomial::zero(n);
        for (p, &c) in polys.iter().zip(&coeffs) {
            if c != 0 {
                f = &f + &p.scale(&rat(c));
            }
        }
        if f.is_zero() {
            continue;
        }
        // Vanishing holds by linearity; checked anyway.
        let mut ok = true;
        for pt in must_vanish_on {
            if !f.evaluate(pt)?.is_zero() {
                ok = false;
                break;
            }
        }
        if ok {
            for ideal in must_not_vanish_on {
                if ideal.contains(&f)? {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            return Ok((f, coeffs));
        }
    }
    Err(Error::RetriesExhausted(attempts))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::poly;

    #[test]
    fn membership_forces_second_coefficient() {
        let ex = Ideal::parse(2, &["x0"]).unwrap();
        let (f, c) =
            generic_combination_with(&[poly("x0", 2), poly("x1", 2)], &[], &[&ex], 7, DEFAULT_ATTEMPTS).unwrap();
        assert_ne!(c[1], 0);
        assert!(!ex.contains(&f).unwrap());
    }

    #[test]
    fn single_polynomial_is_returned() {
        let ex = Ideal::parse(2, &["x0"]).unwrap();
        let f = generic_combination(&[poly("x1 + x0", 2)], &[], &[&ex], 1).unwrap();
        assert_eq!(f, poly("x1 + x0", 2));
    }

    #[test]
    fn impossible_request_is_rejected() {
        let ex = Ideal::parse(2, &["x0"]).unwrap();
        assert!(generic_combination(&[poly("x0", 2)], &[], &[&ex], 1).is_err());
        let pt = RationalPoint::from_ints(&[1, 1]);
        assert!(generic_combination(&[poly("x0", 2)], &[pt], &[], 1).is_err());
    }

    #[test]
    fn deterministic_given_seed() {
        let ex1 = Ideal::parse(2, &["x0 + x1"]).unwrap();
        let ex2 = Ideal::parse(2, &["x0 - x1"]).unwrap();
        let ps = [poly("x0", 2), poly("x1", 2)];
        let a = generic_combination(&ps, &[], &[&ex1, &ex2], 5).unwrap();
        let b = generic_combination(&ps, &[], &[&ex1, &ex2], 5).unwrap();
        assert_eq!(a, b);
        assert!(!ex1.contains(&a).unwrap() && !ex2.contains(&a).unwrap());
    }
}
