//! Polynomial partitioning relative to a variety by repeated simultaneous
//! bisection, with an exact sign-class census.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hamsandwich::{discrete_ham_sandwich, Hyperplane, SearchOptions};
use crate::monomial::Monomial;
use crate::poly::{Polynomial, RationalPoint};
use crate::profile::{big_deltas, delta_profile, i_v_of_m, Constants, DeltaProfile, ProfileOptions};
use crate::rational::{ceil_log2, pow_int, rat, Rational};
use crate::siegel::quotient_basis;
use crate::variety::Variety;

pub const DEFAULT_MAX_ROUNDS: u32 = 16;
/// Pencils tried per lift degree before the degree is raised, scaled down
/// as the lift dimension `t` grows.
pub fn pencils_per_degree(t: u64) -> usize {
    (200_000 / (t * t).max(1)).clamp(100, 4000) as usize
}

fn monomial_value(m: &Monomial, x: &[Rational]) -> Rational {
    let mut acc = Rational::one();
    for (e, xi) in m.exponents().iter().zip(x) {
        if *e > 0 {
            acc *= pow_int(xi, *e);
        }
    }
    acc
}

/// Lifts `x` through the non-constant standard monomials.
pub fn lift(basis: &[Monomial], x: &RationalPoint) -> Vec<Rational> {
    basis.iter().map(|m| monomial_value(m, &x.0)).collect()
}

fn pull_back(basis: &[Monomial], h: &Hyperplane, n: usize) -> Polynomial {
    let mut terms: Vec<(Monomial, Rational)> =
        basis.iter().cloned().zip(h.normal.iter().cloned()).filter(|(_, c)| !c.is_zero()).collect();
    if !h.offset.is_zero() {
        terms.push((Monomial::one(n), h.offset.clone()));
    }
    Polynomial::from_terms(n, terms)
}

/// True when at most half of every set is strictly positive and at most
/// half strictly negative under `g`.
pub fn bisects(g: &Polynomial, sets: &[Vec<RationalPoint>]) -> bool {
    sets.iter().all(|s| {
        let (mut p, mut q) = (0, 0);
        for x in s {
            let v = g.eval(&x.0);
            if v.is_positive() {
                p += 1;
            } else if v.is_negative() {
                q += 1;
            }
        }
        2 * p <= s.len() && 2 * q <= s.len()
    })
}

/// A polynomial of degree at most `m`, not in `I(V)`, bisecting every set.
pub fn bisect_sets(v: &Variety, sets: &[Vec<RationalPoint>], m: u32, seed: u64) -> Result<Polynomial> {
    bisect_sets_with(v, sets, m, &SearchOptions { seed, ..SearchOptions::default() })
}

pub fn bisect_sets_with(v: &Variety, sets: &[Vec<RationalPoint>], m: u32, search: &SearchOptions) -> Result<Polynomial> {
    let n = v.n_vars();
    if let Some(p) = sets.iter().flatten().find(|p| p.dim() != n) {
        return Err(Error::DimensionMismatch { expected: n, found: p.dim() });
    }
    let qb = quotient_basis(&v.ideal, m)?;
    let basis: Vec<Monomial> = qb.monomials.into_iter().filter(|m| !m.is_one()).collect();
    if sets.len() > basis.len() {
        return Err(Error::PreconditionViolated(format!(
            "{} sets need more than {} quotient monomials of degree {m}",
            sets.len(),
            basis.len() + 1
        )));
    }
    let lifted: Vec<Vec<Vec<Rational>>> = sets.iter().map(|s| s.iter().map(|x| lift(&basis, x)).collect()).collect();
    let h = discrete_ham_sandwich(&lifted, basis.len(), search)?;
    let g = pull_back(&basis, &h, n);
    if g.is_zero() || v.contains_poly(&g)? || !bisects(&g, sets) {
        return Err(Error::HamSandwichNotFound(format!("pull-back {g} failed verification")));
    }
    Ok(g)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BisectorChain {
    pub n: usize,
    pub rounds: Vec<Polynomial>,
    pub degrees: Vec<u32>,
}

impl BisectorChain {
    pub fn product(&self) -> Polynomial {
        self.rounds.iter().fold(Polynomial::one(self.n), |acc, h| &acc * h)
    }

    pub fn total_degree(&self) -> u32 {
        self.degrees.iter().sum()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoundReport {
    pub round: u32,
    pub classes_bisected: usize,
    /// Degree of the quotient monomials used for the lift.
    pub m: u32,
    /// Set when the minimal `m` failed and a larger one was used.
    pub m_raised: bool,
    pub degree: u32,
    /// Sign vector (`+`/`-` per round) to point count.
    pub census: BTreeMap<String, usize>,
    pub on_zero_set: usize,
    pub max_class: usize,
    pub class_bound: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartitionReport {
    pub n: usize,
    pub points: usize,
    pub big_m: u64,
    pub index: usize,
    pub index_fallback: bool,
    #[serde(with = "crate::serde_rational")]
    pub target: Rational,
    pub rounds_planned: u32,
    /// Rounds after which every class is already a single point are skipped.
    pub rounds_capped: bool,
    pub rounds: Vec<RoundReport>,
    pub total_degree: u32,
    pub degree_ratio: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionOptions {
    pub seed: u64,
    pub max_rounds: u32,
}

impl Default for PartitionOptions {
    fn default() -> Self {
        PartitionOptions { seed: 0, max_rounds: DEFAULT_MAX_ROUNDS }
    }
}

pub fn partition(
    v: &Variety,
    points: &[RationalPoint],
    big_m: u64,
    constants: &Constants,
) -> Result<(BisectorChain, PartitionReport)> {
    let profile = delta_profile(v, &ProfileOptions::default())?;
    partition_with(v, &profile, points, big_m, constants, &PartitionOptions::default())
}

/// `M^{n-s} Δ_s`, where `s = i_V(M)`.
pub fn target_cells(profile: &DeltaProfile, big_m: u64, constants: &Constants) -> (usize, bool, Rational) {
    let choice = i_v_of_m(&profile.deltas, profile.n, big_m, constants);
    let bd = big_deltas(&profile.deltas, profile.degree);
    let s = choice.index.min(bd.len() - 1);
    let r = pow_int(&Rational::from_integer(big_m.into()), (profile.n - s) as u32) * &bd[s];
    (s, choice.fallback, r)
}

fn sign_key(signs: &[i8]) -> String {
    signs.iter().map(|&s| if s > 0 { '+' } else { '-' }).collect()
}

pub fn partition_with(
    v: &Variety,
    profile: &DeltaProfile,
    points: &[RationalPoint],
    big_m: u64,
    constants: &Constants,
    opts: &PartitionOptions,
) -> Result<(BisectorChain, PartitionReport)> {
    if big_m == 0 {
        return Err(Error::PreconditionViolated("M must be at least 1".into()));
    }
    let n = v.n_vars();
    let (s, fallback, target) = target_cells(profile, big_m, constants);
    let planned = ceil_log2(&target);
    let useful = ceil_log2(&rat(points.len().max(1) as i64));
    let rounds = planned.min(useful);
    if rounds > opts.max_rounds {
        return Err(Error::RoundBudgetExceeded { needed: rounds as usize, budget: opts.max_rounds as usize });
    }
    let mut chain = BisectorChain { n, rounds: Vec::new(), degrees: Vec::new() };
    // None once a point lies on the zero set of some bisector.
    let mut signs: Vec<Option<Vec<i8>>> = vec![Some(Vec::new()); points.len()];
    let mut reports = Vec::new();
    for round in 1..=rounds {
        let mut classes: BTreeMap<Vec<i8>, Vec<usize>> = BTreeMap::new();
        for (i, s) in signs.iter().enumerate() {
            if let Some(s) = s {
                classes.entry(s.clone()).or_default().push(i);
            }
        }
        let sets: Vec<Vec<RationalPoint>> =
            classes.values().map(|ix| ix.iter().map(|&i| points[i].clone()).collect()).collect();
        let mut m = 1;
        while v.affine_hilbert(m)? <= sets.len() as u64 {
            m += 1;
        }
        let minimal = m;
        // Raising m always ends: once the lift has room for half of every
        // class, interpolation succeeds directly.
        let h = loop {
            let t = v.affine_hilbert(m)? - 1;
            let search = SearchOptions { seed: opts.seed.wrapping_add(round as u64), max_pencils: pencils_per_degree(t) };
            match bisect_sets_with(v, &sets, m, &search) {
                Ok(h) => break h,
                Err(Error::HamSandwichNotFound(_)) => m += 1,
                Err(e) => return Err(e),
            }
        };
        let degree = h.total_degree().unwrap_or(0);
        for (i, s) in signs.iter_mut().enumerate() {
            if let Some(vec) = s {
                let val = h.eval(&points[i].0);
                if val.is_zero() {
                    *s = None;
                } else {
                    vec.push(if val.is_positive() { 1 } else { -1 });
                }
            }
        }
        let mut census = BTreeMap::new();
        for s in signs.iter().flatten() {
            *census.entry(sign_key(s)).or_insert(0) += 1;
        }
        let on_zero = signs.iter().filter(|s| s.is_none()).count();
        let max_class = census.values().copied().max().unwrap_or(0);
        let class_bound = points.len().div_ceil(1 << round);
        if max_class > class_bound {
            return Err(Error::PreconditionViolated(format!(
                "round {round}: class of {max_class} points exceeds {class_bound}"
            )));
        }
        chain.rounds.push(h);
        chain.degrees.push(degree);
        reports.push(RoundReport {
            round,
            classes_bisected: sets.len(),
            m,
            m_raised: m > minimal,
            degree,
            census,
            on_zero_set: on_zero,
            max_class,
            class_bound,
        });
    }
    let total = chain.total_degree();
    let report = PartitionReport {
        n,
        points: points.len(),
        big_m,
        index: s,
        index_fallback: fallback,
        target,
        rounds_planned: planned,
        rounds_capped: rounds < planned,
        rounds: reports,
        total_degree: total,
        degree_ratio: total as f64 / big_m as f64,
    };
    Ok((chain, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_points(n: usize, count: usize, seed: u64) -> Vec<RationalPoint> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..count).map(|_| RationalPoint((0..n).map(|_| ratio(rng.gen_range(-60..60), rng.gen_range(1..5))).collect())).collect()
    }

    #[test]
    fn two_points_in_the_plane() {
        let v = Variety::affine_space(2);
        let s = vec![vec![RationalPoint::from_ints(&[0, 0]), RationalPoint::from_ints(&[1, 3])]];
        let g = bisect_sets(&v, &s, 1, 0).unwrap();
        assert!(bisects(&g, &s));
        assert_eq!(g.total_degree(), Some(1));
    }

    #[test]
    fn three_sets_by_a_conic() {
        let v = Variety::affine_space(2);
        let pts = random_points(2, 12, 5);
        let sets: Vec<Vec<RationalPoint>> = pts.chunks(4).map(|c| c.to_vec()).collect();
        let g = bisect_sets(&v, &sets, 2, 0).unwrap();
        assert!(bisects(&g, &sets));
        assert!(g.total_degree().unwrap() <= 2);
    }

    #[test]
    fn circle_points_are_bisected_outside_the_ideal() {
        let v = Variety::parse(2, &["x0^2 + x1^2 - 1"]).unwrap();
        let circle = crate::variety::Parameterization::rational(
            vec![crate::poly::poly("1 - x0^2", 1), crate::poly::poly("2*x0", 1)],
            crate::poly::poly("1 + x0^2", 1),
        )
        .unwrap();
        let v = v.with_parameterization(circle).unwrap();
        let pts = v.sample_points(9).unwrap();
        let g = bisect_sets(&v, &[pts.clone()], 1, 0).unwrap();
        assert!(!v.contains_poly(&g).unwrap());
        assert!(bisects(&g, &[pts]));
    }

    #[test]
    fn plane_partition_decays() {
        let v = Variety::affine_space(2);
        let pts = random_points(2, 64, 1);
        // M = 4: r = 16, four rounds.
        let (chain, report) = partition(&v, &pts, 4, &Constants::default()).unwrap();
        assert_eq!(report.rounds.len(), 4);
        assert_eq!(chain.rounds.len(), 4);
        for r in &report.rounds {
            assert_eq!(r.census.values().sum::<usize>() + r.on_zero_set, 64);
            assert!(r.max_class <= r.class_bound);
        }
        assert!(report.rounds.last().unwrap().max_class <= 4);
    }

    #[test]
    fn single_point_needs_no_rounds() {
        let v = Variety::affine_space(2);
        let (chain, report) = partition(&v, &[RationalPoint::from_ints(&[1, 1])], 3, &Constants::default()).unwrap();
        assert!(chain.rounds.is_empty());
        assert!(report.rounds.is_empty());
    }
}
