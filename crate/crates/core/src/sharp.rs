//! Realizes an abstract `(k,b)`-free incidence structure by points on a
//! variety and hypersurfaces through prescribed subsets of them.

use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bounds::main_term;
use crate::error::{Error, Result};
use crate::incidence::{check_kb_free, check_kb_free_abstract, count_incidences, AbstractStructure, IncidenceStructure};
use crate::linalg::{det, integer_normalize, nullspace, Matrix};
use crate::monomial::Monomial;
use crate::poly::{Polynomial, RationalPoint};
use crate::profile::{delta_profile, ProfileOptions};
use crate::rational::{rat, to_f64, Rational};
use crate::variety::Variety;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SharpOptions {
    pub seed: u64,
    pub resample_budget: usize,
    /// Determinants checked before the genericity test gives up on being
    /// exhaustive over the needed minors.
    pub minor_budget: usize,
    /// The constant `c` in `deg(V) δ(V)^d <= c I(X,Y)/|Y|`.
    #[serde(with = "crate::serde_rational")]
    pub size_constant: Rational,
}

impl Default for SharpOptions {
    fn default() -> Self {
        SharpOptions { seed: 0, resample_budget: 256, minor_budget: 200_000, size_constant: rat(1) }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Regularized {
    pub structure: AbstractStructure,
    /// Members below half the average size.
    pub dropped: Vec<usize>,
    #[serde(with = "crate::serde_rational")]
    pub sigma: Rational,
    pub block_size: usize,
    pub chunked: bool,
}

/// Drops members with fewer than `σ/2` points, then cuts the rest into
/// disjoint blocks of a common size. Inputs that are already uniform keep
/// their members whole; otherwise the block size is `⌊σ/4⌋` when that
/// exceeds `k`, and the smallest surviving member size when it does not.
pub fn regularize(x: &AbstractStructure, k: usize) -> Result<Regularized> {
    if x.members.is_empty() {
        return Err(Error::PreconditionViolated("no members to regularize".into()));
    }
    let sigma = Rational::new((x.incidences() as i64).into(), (x.members.len() as i64).into());
    let half = &sigma / rat(2);
    let (mut kept, mut dropped) = (Vec::new(), Vec::new());
    for (i, y) in x.members.iter().enumerate() {
        if Rational::from_integer((y.len() as i64).into()) < half {
            dropped.push(i);
        } else {
            kept.push(y.clone());
        }
    }
    let min = kept.iter().map(|y| y.len()).min().unwrap_or(0);
    if min == 0 {
        return Err(Error::PreconditionViolated("every surviving member is empty".into()));
    }
    if kept.iter().all(|y| y.len() == min) {
        let structure = AbstractStructure::new(x.n_points, kept)?;
        return Ok(Regularized { structure, dropped, sigma, block_size: min, chunked: false });
    }
    let quarter = (&sigma / rat(4)).floor().to_integer().try_into().unwrap_or(0usize);
    let size = if quarter > k { quarter } else { min };
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    for y in &kept {
        for c in y.chunks_exact(size) {
            if !blocks.contains(&c.to_vec()) {
                blocks.push(c.to_vec());
            }
        }
    }
    let structure = AbstractStructure::new(x.n_points, blocks)?;
    Ok(Regularized { structure, dropped, sigma, block_size: size, chunked: true })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SizeCondition {
    #[serde(with = "crate::serde_rational")]
    pub lhs: Rational,
    #[serde(with = "crate::serde_rational")]
    pub rhs: Rational,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SharpReport {
    pub k: usize,
    pub b: usize,
    pub regularized: Regularized,
    pub degree_bound: u32,
    pub quotient_dim: u64,
    /// The quotient of degree `degree_bound` has dimension exactly `K + 1`;
    /// otherwise its first `K + 1` standard monomials are used.
    pub exact_dimension: bool,
    pub basis: Vec<String>,
    pub minors_checked: usize,
    pub minors_exhaustive: bool,
    pub resamples: usize,
    pub structure: IncidenceStructure,
    pub incidences: u64,
    pub graph_equal: bool,
    pub kb_free: bool,
    pub max_degree: u32,
    pub size_condition: SizeCondition,
    /// `I(S,T) / (|S|^α deg(T)^β deg(V)^{1-α})`.
    pub main_term_ratio: f64,
}

fn value_matrix(points: &[RationalPoint], rows: &[usize], basis: &[Polynomial]) -> Matrix {
    rows.iter().map(|&i| basis.iter().map(|g| g.eval(&points[i].0)).collect()).collect()
}

/// Index of a point to resample, or `None` when every needed minor is
/// nonzero. Also returns the number of determinants evaluated.
fn first_degenerate(
    points: &[RationalPoint],
    blocks: &[Vec<usize>],
    basis: &[Polynomial],
    budget: usize,
) -> (Option<usize>, usize, bool) {
    let mut checked = 0;
    for y in blocks {
        let m = value_matrix(points, y, basis);
        if nullspace(&m, basis.len()).len() != 1 {
            return (Some(*y.iter().max().unwrap()), checked, true);
        }
        for s in 0..points.len() {
            if y.contains(&s) {
                continue;
            }
            if checked == budget {
                return (None, checked, false);
            }
            let mut rows = y.clone();
            rows.push(s);
            checked += 1;
            if det(&value_matrix(points, &rows, basis)).is_zero() {
                return (Some(*rows.iter().max().unwrap()), checked, true);
            }
        }
    }
    (None, checked, true)
}

pub fn sharp_construction(x: &AbstractStructure, v: &Variety, k: usize, b: usize, opts: &SharpOptions) -> Result<SharpReport> {
    if !check_kb_free_abstract(x, k, b)?.free {
        return Err(Error::PreconditionViolated(format!("input is not ({k},{b})-free")));
    }
    let param = v
        .parameterization
        .as_ref()
        .ok_or_else(|| Error::MissingPointOracle("sharp construction needs points on V".into()))?;
    let reg = regularize(x, k)?;
    let big_k = reg.block_size;
    let n = v.n_vars();

    let mut degree_bound = 0;
    while v.affine_hilbert(degree_bound)? < big_k as u64 + 1 {
        degree_bound += 1;
        if degree_bound > 64 {
            return Err(Error::DegreeBudgetExceeded(format!("no quotient of dimension {}", big_k + 1)));
        }
    }
    let quotient_dim = v.affine_hilbert(degree_bound)?;
    let mons: Vec<Monomial> = v.ideal.standard_monomials(degree_bound)?;
    let basis: Vec<Polynomial> = mons.into_iter().take(big_k + 1).map(|m| Polynomial::monomial(m, rat(1))).collect();

    // Candidate points: the deterministic sample, reordered by the seed.
    let pool_size = x.n_points + opts.resample_budget;
    let mut pool = param.sample(pool_size);
    pool.dedup();
    pool.shuffle(&mut ChaCha8Rng::seed_from_u64(opts.seed));
    if pool.len() < x.n_points {
        return Err(Error::GenericityExhausted(format!("only {} points available on V", pool.len())));
    }
    let mut points: Vec<RationalPoint> = pool[..x.n_points].to_vec();
    let mut next = x.n_points;
    let mut resamples = 0;
    let blocks = &reg.structure.members;
    let (minors_checked, minors_exhaustive) = loop {
        let (bad, checked, exhaustive) = first_degenerate(&points, blocks, &basis, opts.minor_budget);
        match bad {
            None => break (checked, exhaustive),
            Some(i) => {
                if next == pool.len() || resamples == opts.resample_budget {
                    return Err(Error::GenericityExhausted(format!("{resamples} resamples")));
                }
                points[i] = pool[next].clone();
                next += 1;
                resamples += 1;
            }
        }
    };

    let mut surfaces = Vec::with_capacity(blocks.len());
    for y in blocks {
        let ns = nullspace(&value_matrix(&points, y, &basis), basis.len());
        let c = integer_normalize(&ns[0]);
        let p = basis.iter().zip(&c).fold(Polynomial::zero(n), |acc, (g, a)| &acc + &g.scale(a));
        surfaces.push(p);
    }
    let structure = IncidenceStructure::build(points, surfaces)?;
    let incidences = count_incidences(&structure);
    let graph_equal = structure.to_abstract() == reg.structure;
    let kb_free = check_kb_free(&structure, k, b)?.free;
    let max_degree = structure.degrees.iter().copied().max().unwrap_or(0);

    let delta = delta_profile(v, &ProfileOptions::default())?.deltas.last().copied().unwrap_or(1);
    let lhs = Rational::from_integer(((v.degree as i64) * (delta as i64).pow(v.dim as u32)).into());
    let rhs = &opts.size_constant * Rational::new((x.incidences() as i64).into(), (x.members.len() as i64).into());
    let holds = lhs <= rhs;

    let d = v.dim.max(1) as u64;
    let bare = main_term(structure.points.len() as u64, structure.deg_t, v.degree, d, k as u64, true)?;
    let main_term_ratio = if bare.is_zero() { 0.0 } else { incidences as f64 / to_f64(&bare) };

    Ok(SharpReport {
        k,
        b,
        regularized: reg,
        degree_bound,
        quotient_dim,
        exact_dimension: quotient_dim == big_k as u64 + 1,
        basis: basis.iter().map(|g| g.to_string()).collect(),
        minors_checked,
        minors_exhaustive,
        resamples,
        structure,
        incidences,
        graph_equal,
        kb_free,
        max_degree,
        size_condition: SizeCondition { lhs, rhs, holds },
        main_term_ratio,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::variety;
    use crate::incidence::designs;

    #[test]
    fn disjoint_pairs_on_a_parabola() {
        let x = designs::disjoint_pairs(2);
        let rep = sharp_construction(&x, &variety("parabola").unwrap(), 2, 2, &SharpOptions::default()).unwrap();
        assert_eq!(rep.structure.surfaces.len(), 2);
        assert!(rep.graph_equal && rep.kb_free);
        assert_eq!(rep.incidences, 4);
        assert!(rep.max_degree <= rep.degree_bound);
    }

    #[test]
    fn small_member_is_dropped() {
        let x = AbstractStructure::new(7, vec![vec![0, 1, 2, 3], vec![3, 4, 5, 6], vec![6]]).unwrap();
        let reg = regularize(&x, 2).unwrap();
        assert_eq!(reg.dropped, vec![2]);
        assert_eq!(reg.structure.members.len(), 2);
        let rep = sharp_construction(&x, &variety("plane").unwrap(), 2, 2, &SharpOptions::default()).unwrap();
        assert!(rep.graph_equal);
    }

    #[test]
    fn irregular_members_are_chunked() {
        let x = AbstractStructure::new(12, vec![(0..8).collect(), (4..12).collect(), vec![0, 11, 5, 6, 7, 1]]).unwrap();
        let reg = regularize(&x, 1).unwrap();
        assert!(reg.chunked);
        assert!(reg.structure.members.iter().all(|y| y.len() == reg.block_size));
    }

    #[test]
    fn fano_on_the_twisted_cubic() {
        let rep = sharp_construction(&designs::fano(), &variety("twisted-cubic").unwrap(), 2, 2, &SharpOptions::default()).unwrap();
        assert!(rep.graph_equal && rep.kb_free);
        assert!(rep.main_term_ratio > 0.0);
    }
}
