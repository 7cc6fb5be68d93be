//! Partial-degree profiles `δ_i(V)`, `Δ_i(V)`, admissible indices and the
//! index `i_V(M)`.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::combination::generic_combination;
use crate::decompose::decompose;
use crate::error::{Error, Result};
use crate::ideal::{full_count, Ideal};
use crate::poly::Polynomial;
use crate::rational::{pow_int, rat, Rational};
use crate::variety::Variety;

/// Configurable stand-ins for constants the theory only bounds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Constants {
    #[serde(with = "crate::serde_rational")]
    pub c0: Rational,
    #[serde(with = "crate::serde_rational")]
    pub c1: Rational,
    #[serde(with = "crate::serde_rational")]
    pub incidence_c1: Rational,
    #[serde(with = "crate::serde_rational")]
    pub c2: Rational,
}

impl Default for Constants {
    fn default() -> Self {
        Constants { c0: rat(1), c1: Rational::new(1.into(), 4.into()), incidence_c1: rat(1), c2: rat(1) }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProfileOptions {
    /// Highest degree tried at any stage.
    pub max_degree: u32,
    pub seed: u64,
}

impl Default for ProfileOptions {
    fn default() -> Self {
        ProfileOptions { max_degree: 12, seed: 0 }
    }
}

/// One component of an intermediate zero set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComponentSummary {
    pub generators: Vec<Polynomial>,
    pub dim: usize,
    pub degree: u64,
    pub contains_v: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StageReport {
    pub stage: usize,
    pub degree: u32,
    pub polynomial: Polynomial,
    /// Components of `Z(Q_1..Q_i)`, when the splitter succeeded.
    pub components: Option<Vec<ComponentSummary>>,
    /// Components containing `V` all have dimension `n - i`.
    pub dimension_certified: bool,
    /// No lower degree could have worked.
    pub minimal: bool,
    pub infeasible_degrees: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeltaProfile {
    pub n: usize,
    pub dim: usize,
    pub degree: u64,
    pub deltas: Vec<u32>,
    #[serde(with = "crate::serde_rational::vec")]
    pub big_deltas: Vec<Rational>,
    pub admissible: Vec<usize>,
    pub tuple: Vec<Polynomial>,
    pub certified: bool,
    pub stages: Vec<StageReport>,
}

/// Smallest `m` with a non-zero member of `I(V)` of degree at most `m`.
pub fn delta_1(v: &Variety) -> Result<u32> {
    if v.ideal.is_zero_ideal() {
        return Err(Error::PreconditionViolated("the zero ideal has no δ_1".into()));
    }
    let n = v.n_vars();
    let cap = v.ideal.budget().max_degree;
    for m in 0..=cap {
        if v.affine_hilbert(m)? < full_count(n, m) {
            return Ok(m);
        }
    }
    Err(Error::DegreeBudgetExceeded(format!("δ_1 above {cap}")))
}

/// Summaries of all components of `Z(j)`, or `None` if splitting failed.
fn components_of(j: &Ideal, v: &Variety) -> Result<Option<Vec<ComponentSummary>>> {
    match decompose(j) {
        Ok(cs) => {
            let mut out = Vec::new();
            for c in cs {
                let contains_v = v.ideal.contains_ideal(&c.ideal)?;
                out.push(ComponentSummary {
                    generators: c.ideal.generators().to_vec(),
                    dim: c.dim,
                    degree: c.degree,
                    contains_v,
                });
            }
            Ok(Some(out))
        }
        Err(Error::DecompositionIncomplete(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Greedy construction of `δ_1..δ_{n-d}` and a witnessing tuple.
pub fn delta_profile(v: &Variety, opts: &ProfileOptions) -> Result<DeltaProfile> {
    let n = v.n_vars();
    let codim = v.codim();
    let mut deltas = Vec::new();
    let mut tuple: Vec<Polynomial> = Vec::new();
    let mut stages = Vec::new();
    let mut certified = true;
    for i in 1..=codim {
        let j_prev = Ideal::new(n, tuple.clone())?.with_budget(v.ideal.budget());
        // Top-dimensional components of the previous zero set through V.
        let walls: Option<Vec<Ideal>> = if i == 1 {
            Some(Vec::new())
        } else {
            components_of(&j_prev, v)?.map(|cs| {
                cs.into_iter()
                    .filter(|c| c.contains_v && c.dim == n - i + 1)
                    .map(|c| Ideal::new(n, c.generators).expect("same ring"))
                    .collect()
            })
        };
        let start = if i == 1 { delta_1(v)? } else { *deltas.last().unwrap() };
        let mut infeasible = Vec::new();
        let mut chosen = None;
        for m in start..=opts.max_degree {
            let basis = v.ideal.degree_part_basis(m)?;
            if basis.is_empty() {
                infeasible.push(m);
                continue;
            }
            let seed = opts.seed.wrapping_add((i as u64) << 32).wrapping_add(m as u64);
            match &walls {
                Some(ws) => {
                    let mut blocked = false;
                    for w in ws {
                        let mut all_in = true;
                        for b in &basis {
                            if !w.contains(b)? {
                                all_in = false;
                                break;
                            }
                        }
                        if all_in {
                            blocked = true;
                            break;
                        }
                    }
                    if blocked {
                        infeasible.push(m);
                        continue;
                    }
                    let refs: Vec<&Ideal> = ws.iter().collect();
                    let q = generic_combination(&basis, &[], &refs, seed)?;
                    chosen = Some((m, q, true));
                    break;
                }
                None => {
                    // Without components, accept a cut that is provably
                    // pure of the right dimension.
                    for attempt in 0..8u64 {
                        let q = generic_combination(&basis, &[], &[], seed.wrapping_add(attempt * 7919))?;
                        let jq = j_prev.with_generator(q.clone());
                        if !jq.is_unit()? && jq.dimension()? == n - i {
                            chosen = Some((m, q, true));
                            break;
                        }
                    }
                    if chosen.is_some() {
                        break;
                    }
                }
            }
        }
        let Some((m, q, dim_ok)) = chosen else {
            return Err(Error::DegreeBudgetExceeded(format!("stage {i} needs degree above {}", opts.max_degree)));
        };
        let minimal = i == 1 || m == start || (start..m).all(|k| infeasible.contains(&k));
        let minimal = minimal && (i == 1 || stages.iter().all(|s: &StageReport| s.minimal));
        tuple.push(q.clone());
        let j_now = Ideal::new(n, tuple.clone())?.with_budget(v.ideal.budget());
        let components = if i == 1 && codim == 1 { None } else { components_of(&j_now, v)? };
        let dimension_certified = dim_ok
            && match &components {
                Some(cs) => cs.iter().filter(|c| c.contains_v).all(|c| c.dim == n - i),
                None => i == 1 || j_now.dimension()? == n - i,
            };
        certified &= dimension_certified && minimal;
        deltas.push(m);
        stages.push(StageReport {
            stage: i,
            degree: m,
            polynomial: q,
            components,
            dimension_certified,
            minimal,
            infeasible_degrees: infeasible,
        });
    }
    let big = big_deltas(&deltas, v.degree);
    let admissible = admissible_indices(&deltas);
    Ok(DeltaProfile { n, dim: v.dim, degree: v.degree, deltas, big_deltas: big, admissible, tuple, certified, stages })
}

/// `Δ_i = max(deg(V) / (δ_{i+1} ⋯ δ_{n-d}), 1)` for `i = 0..=n-d`.
pub fn big_deltas(deltas: &[u32], degree: u64) -> Vec<Rational> {
    let k = deltas.len();
    (0..=k)
        .map(|i| {
            let prod: u64 = deltas[i..].iter().map(|&d| d as u64).product();
            let v = Rational::new((degree as i64).into(), (prod as i64).into());
            if v < Rational::one() { Rational::one() } else { v }
        })
        .collect()
}

fn delta_at(deltas: &[u32], i: usize) -> Option<u64> {
    match i {
        0 => Some(0),
        _ if i <= deltas.len() => Some(deltas[i - 1] as u64),
        _ => None,
    }
}

/// Indices `i` in `0..=n-d` with `δ_{i+1} > 2 i δ_i`, where `δ_0 = 0` and
/// `δ_{n-d+1} = ∞`.
pub fn admissible_indices(deltas: &[u32]) -> Vec<usize> {
    (0..=deltas.len())
        .filter(|&i| match delta_at(deltas, i + 1) {
            None => true,
            Some(next) => next > 2 * i as u64 * delta_at(deltas, i).unwrap(),
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndexChoice {
    pub index: usize,
    /// Set when no admissible interval contained `M` and the largest
    /// admissible `i` with `δ_i <= M` was used instead.
    pub fallback: bool,
}

/// Smallest admissible `i` with
/// `c1 δ_i^{n-i} <= M^{n-i} <= (c0/2) δ_{i+1}^{n-i}`.
pub fn i_v_of_m(deltas: &[u32], n: usize, m: u64, constants: &Constants) -> IndexChoice {
    let adm = admissible_indices(deltas);
    let mr = Rational::from_integer(m.into());
    for &i in &adm {
        let e = (n - i) as u32;
        let lhs = &constants.c1 * pow_int(&Rational::from_integer(delta_at(deltas, i).unwrap().into()), e);
        let mid = pow_int(&mr, e);
        if lhs > mid {
            continue;
        }
        let ok = match delta_at(deltas, i + 1) {
            None => true,
            Some(next) => mid <= &constants.c0 / rat(2) * pow_int(&Rational::from_integer(next.into()), e),
        };
        if ok {
            return IndexChoice { index: i, fallback: false };
        }
    }
    let index = adm.iter().copied().filter(|&i| delta_at(deltas, i).unwrap() <= m).max().unwrap_or(0);
    IndexChoice { index, fallback: true }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConverseBezoutReport {
    #[serde(with = "crate::serde_rational")]
    pub ratio: Rational,
    pub bezout_holds: bool,
    /// Per stage: degrees of components through `V` over `δ_1 ⋯ δ_i`.
    pub stage_ratios: Vec<Option<Vec<String>>>,
}

pub fn converse_bezout_report(v: &Variety, profile: &DeltaProfile) -> ConverseBezoutReport {
    let prod: u64 = profile.deltas.iter().map(|&d| d as u64).product();
    let ratio = Rational::new((v.degree as i64).into(), (prod.max(1) as i64).into());
    let mut running = 1u64;
    let stage_ratios = profile
        .stages
        .iter()
        .map(|s| {
            running *= s.degree as u64;
            s.components.as_ref().map(|cs| {
                cs.iter()
                    .filter(|c| c.contains_v)
                    .map(|c| Rational::new((c.degree as i64).into(), (running as i64).into()).to_string())
                    .collect()
            })
        })
        .collect();
    ConverseBezoutReport { bezout_holds: ratio <= Rational::one() && !ratio.is_zero(), ratio, stage_ratios }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    #[test]
    fn delta_1_examples() {
        assert_eq!(delta_1(&Variety::parse(2, &["x0^2 + x1^2 - 1"]).unwrap()).unwrap(), 2);
        assert_eq!(delta_1(&Variety::parse(2, &["x0"]).unwrap()).unwrap(), 1);
        assert_eq!(delta_1(&Variety::parse(3, &["x1 - x0^2", "x2 - x0^3"]).unwrap()).unwrap(), 2);
    }

    #[test]
    fn twisted_cubic_profile() {
        let v = Variety::parse(3, &["x1 - x0^2", "x2 - x0^3"]).unwrap();
        let p = delta_profile(&v, &ProfileOptions::default()).unwrap();
        assert_eq!(p.deltas, vec![2, 2]);
        assert!(p.certified);
        assert_eq!(p.big_deltas, vec![rat(1), ratio(3, 2), rat(3)]);
        assert_eq!(p.admissible, vec![0, 2]);
        assert_eq!(converse_bezout_report(&v, &p).ratio, ratio(3, 4));
    }

    #[test]
    fn admissible_examples() {
        assert_eq!(admissible_indices(&[3]), vec![0, 1]);
        assert_eq!(admissible_indices(&[1, 5]), vec![0, 1, 2]);
    }

    #[test]
    fn index_examples() {
        let c = Constants::default();
        assert_eq!(i_v_of_m(&[2, 2], 3, 1, &Constants { c1: rat(1), ..c.clone() }).index, 0);
        assert_eq!(i_v_of_m(&[2, 2], 3, 2, &c).index, 2);
        for m in 1..20 {
            assert_eq!(i_v_of_m(&[1], 2, m, &c).index, 1);
        }
    }
}
