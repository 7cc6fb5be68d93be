//! Minimal-degree polynomials vanishing on given points or subvarieties
//! without vanishing identically on `V`.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ideal::Ideal;
use crate::linalg::{integer_normalize, nullspace, Matrix};
use crate::monomial::{monomials_up_to, Monomial};
use crate::poly::{Polynomial, RationalPoint};
use crate::profile::DeltaProfile;
use crate::rational::{pow_int, pow_upper, to_f64, Rational};
use crate::variety::Variety;

/// Standard monomials of degree at most `m`, used as their own
/// representatives of a basis of the degree-`m` quotient.
#[derive(Debug, Clone, PartialEq)]
pub struct QuotientBasis {
    pub m: u32,
    pub monomials: Vec<Monomial>,
}

impl QuotientBasis {
    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn representatives(&self) -> Vec<Polynomial> {
        self.monomials.iter().map(|m| Polynomial::monomial(m.clone(), Rational::from_integer(1.into()))).collect()
    }
}

pub fn quotient_basis(ideal: &Ideal, m: u32) -> Result<QuotientBasis> {
    Ok(QuotientBasis { m, monomials: ideal.standard_monomials(m)? })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SiegelResult {
    pub polynomial: Polynomial,
    pub degree: u32,
    pub target: String,
    /// Every target was checked exactly: evaluation for points, membership
    /// for varieties.
    pub vanishing_certified: bool,
    pub outside_v: bool,
    pub minimal: bool,
    /// `(deg T / deg V)^{1/(d-l)}` rounded up, when `d > l`.
    pub degree_target: Option<f64>,
    pub samples_used: usize,
}

fn eval_matrix(points: &[RationalPoint], basis: &[Monomial]) -> Matrix {
    points
        .iter()
        .map(|p| basis.iter().map(|m| Polynomial::monomial(m.clone(), Rational::from_integer(1.into())).eval(&p.0)).collect())
        .collect()
}

fn combine(basis: &[Monomial], coeffs: &[Rational], n: usize) -> Polynomial {
    Polynomial::from_terms(n, basis.iter().cloned().zip(coeffs.iter().cloned()).filter(|(_, c)| !c.is_zero()).collect())
}

/// All polynomials of degree at most `m` vanishing on `points`, as a basis.
pub fn vanishing_space(n: usize, m: u32, points: &[RationalPoint]) -> Vec<Polynomial> {
    let mons = monomials_up_to(n, m);
    let a = eval_matrix(points, &mons);
    nullspace(&a, mons.len()).into_iter().map(|v| combine(&mons, &integer_normalize(&v), n)).collect()
}

/// Some member of `space` outside `ideal`, preferring the first basis
/// vector that works.
fn first_outside(space: &[Polynomial], ideal: &Ideal) -> Result<Option<Polynomial>> {
    for p in space {
        if !ideal.contains(p)? {
            return Ok(Some(p.clone()));
        }
    }
    Ok(None)
}

/// Whether some polynomial of degree at most `m` vanishes on `points`
/// without lying in `ideal`, returning one.
pub fn solve_at_degree(ideal: &Ideal, points: &[RationalPoint], m: u32) -> Result<Option<Polynomial>> {
    let n = ideal.n_vars();
    let on_v = points.iter().all(|p| ideal.generators().iter().all(|g| g.eval(&p.0).is_zero()));
    if on_v {
        // Every member of I(V) already vanishes on the points, so the
        // quotient basis suffices.
        let q = quotient_basis(ideal, m)?;
        let a = eval_matrix(points, &q.monomials);
        let ns = nullspace(&a, q.len());
        return Ok(ns.first().map(|v| combine(&q.monomials, &integer_normalize(v), n)));
    }
    first_outside(&vanishing_space(n, m, points), ideal)
}

/// Smallest-degree polynomial vanishing on `points` and not on `V`.
pub fn vanish_on_points(v: &Variety, points: &[RationalPoint]) -> Result<SiegelResult> {
    let n = v.n_vars();
    if let Some(p) = points.iter().find(|p| p.dim() != n) {
        return Err(Error::DimensionMismatch { expected: n, found: p.dim() });
    }
    let cap = v.ideal.budget().max_degree;
    for m in 0..=cap {
        v.ideal.budget().check_time()?;
        if let Some(p) = solve_at_degree(&v.ideal, points, m)? {
            let vanishing = points.iter().all(|s| p.eval(&s.0).is_zero());
            let outside = !v.ideal.contains(&p)?;
            if !(vanishing && outside) {
                return Err(Error::PreconditionViolated("solver produced an invalid polynomial".into()));
            }
            return Ok(SiegelResult {
                polynomial: p,
                degree: m,
                target: format!("{} points", points.len()),
                vanishing_certified: true,
                outside_v: true,
                minimal: true,
                degree_target: None,
                samples_used: points.len(),
            });
        }
    }
    Err(Error::DegreeBudgetExceeded(format!("no vanishing polynomial up to degree {cap}")))
}

fn param_degree(t: &Variety) -> u32 {
    let p = t.parameterization.as_ref().expect("checked by caller");
    let num = p.numerators.iter().filter_map(|q| q.total_degree()).max().unwrap_or(0);
    let den = p.denominator.as_ref().and_then(|d| d.total_degree()).unwrap_or(0);
    num.max(den).max(1)
}

/// Smallest-degree polynomial lying in every `I(t)` and outside `I(V)`.
///
/// Samples propose, membership certifies. At each degree the sample grows
/// until every vanishing polynomial found is certified; past the grid size
/// that pins down the pull-back this always happens.
pub fn vanish_on_varieties(v: &Variety, targets: &[Variety]) -> Result<SiegelResult> {
    let n = v.n_vars();
    for t in targets {
        if t.n_vars() != n {
            return Err(Error::DimensionMismatch { expected: n, found: t.n_vars() });
        }
        if t.parameterization.is_none() {
            return Err(Error::MissingPointOracle(format!("{:?}", t.ideal)));
        }
    }
    let cap = v.ideal.budget().max_degree;
    let mut samples_used = 0;
    for m in 0..=cap {
        v.ideal.budget().check_time()?;
        let mut counts: Vec<usize> =
            targets.iter().map(|t| Ok::<_, Error>(t.affine_hilbert(m)? as usize + 2)).collect::<Result<_>>()?;
        // Grid size after which the pull-back of a degree-m polynomial is
        // determined by its values.
        let caps: Vec<usize> = targets
            .iter()
            .map(|t| {
                let k = t.parameterization.as_ref().unwrap().n_params as u64;
                crate::monomial::binomial(k + (m * param_degree(t)) as u64, k) as usize + 1
            })
            .collect();
        loop {
            let mut pts = Vec::new();
            for (t, &c) in targets.iter().zip(&counts) {
                pts.extend(t.sample_points(c)?);
            }
            samples_used = samples_used.max(pts.len());
            let space = vanishing_space(n, m, &pts);
            let mut certified = true;
            'check: for p in &space {
                for t in targets {
                    if !t.ideal.contains(p)? {
                        certified = false;
                        break 'check;
                    }
                }
            }
            if certified {
                if let Some(p) = first_outside(&space, &v.ideal)? {
                    let deg_t: u64 = targets.iter().map(|t| t.degree).sum();
                    let l = targets.iter().map(|t| t.dim).max().unwrap_or(0);
                    let degree_target = if v.dim > l && deg_t > 0 {
                        let base = Rational::new((deg_t as i64).into(), (v.degree as i64).into());
                        let e = Rational::new(1.into(), ((v.dim - l) as i64).into());
                        Some(to_f64(&pow_upper(&base, &e)?))
                    } else {
                        None
                    };
                    return Ok(SiegelResult {
                        polynomial: p,
                        degree: m,
                        target: format!("{} varieties", targets.len()),
                        vanishing_certified: true,
                        outside_v: true,
                        minimal: true,
                        degree_target,
                        samples_used,
                    });
                }
                break;
            }
            if counts.iter().zip(&caps).all(|(c, k)| c >= k) {
                return Err(Error::PreconditionViolated("sampling did not pin down the targets".into()));
            }
            for (c, k) in counts.iter_mut().zip(&caps) {
                *c = (*c * 2).min(*k).max(*c);
            }
        }
    }
    Err(Error::DegreeBudgetExceeded(format!("no certified polynomial up to degree {cap}")))
}

/// `[τ δ_s^e Δ_s, τ δ_{s+1}^e Δ_s]` with `e = n - (s + l)`; unbounded above
/// when `s = n - d`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegimeInterval {
    pub s: usize,
    #[serde(with = "crate::serde_rational")]
    pub lower: Rational,
    #[serde(with = "crate::serde_rational::option")]
    pub upper: Option<Rational>,
    pub contains: bool,
    /// `(deg T / Δ_s)^{1/e}` rounded up.
    pub degree_target: Option<f64>,
}

/// Which admissible `s` place `deg(T)` in their interval. Every valid `s`
/// is listed; none is preferred when intervals overlap.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegimeReport {
    pub deg_t: u64,
    pub l: usize,
    #[serde(with = "crate::serde_rational")]
    pub tau: Rational,
    pub intervals: Vec<RegimeInterval>,
    pub valid: Vec<usize>,
    /// `τ δ(V)^{d-l} deg(V)`.
    #[serde(with = "crate::serde_rational")]
    pub threshold: Rational,
    pub above_threshold: bool,
}

pub fn classify_regime(profile: &DeltaProfile, deg_t: u64, l: usize, tau: &Rational) -> Result<RegimeReport> {
    let (n, d) = (profile.n, profile.dim);
    if l >= d {
        return Err(Error::PreconditionViolated(format!("target dimension {l} is not below {d}")));
    }
    let r = |x: u64| Rational::from_integer((x as i64).into());
    let delta = |i: usize| if i == 0 { Some(0) } else { profile.deltas.get(i - 1).map(|&x| x as u64) };
    let dt = r(deg_t);
    let mut intervals = Vec::new();
    for &s in &profile.admissible {
        let e = (n - s - l) as u32;
        let big = &profile.big_deltas[s];
        let lower = tau * pow_int(&r(delta(s).unwrap()), e) * big;
        let upper = delta(s + 1).map(|next| tau * pow_int(&r(next), e) * big);
        let contains = lower <= dt && upper.as_ref().is_none_or(|u| &dt <= u);
        let degree_target = if deg_t > 0 {
            Some(to_f64(&pow_upper(&(&dt / big), &Rational::new(1.into(), (e as i64).into()))?))
        } else {
            None
        };
        intervals.push(RegimeInterval { s, lower, upper, contains, degree_target });
    }
    let valid = intervals.iter().filter(|i| i.contains).map(|i| i.s).collect();
    let delta_v = profile.deltas.last().map_or(1, |&x| x as u64);
    let threshold = tau * pow_int(&r(delta_v), (d - l) as u32) * r(profile.degree);
    let above_threshold = dt >= threshold;
    Ok(RegimeReport { deg_t, l, tau: tau.clone(), intervals, valid, threshold, above_threshold })
}
