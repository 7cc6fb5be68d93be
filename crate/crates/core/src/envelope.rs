//! Admissible tuples, envelopes and full covers.

use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::decompose::{decompose, Component};
use crate::error::{Error, Result};
use crate::ideal::{is_component, Ideal};
use crate::poly::Polynomial;
use crate::profile::{delta_profile, ComponentSummary, ProfileOptions};
use crate::rational::{rat, Rational};
use crate::siegel::vanish_on_varieties;
use crate::variety::Variety;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdmissibleTuple {
    pub polys: Vec<Polynomial>,
    #[serde(with = "crate::serde_rational::vec")]
    pub k_bounds: Vec<Rational>,
}

impl AdmissibleTuple {
    /// Tuple with every `K_i = 1`.
    pub fn tight(polys: Vec<Polynomial>) -> Self {
        let k = polys.len();
        AdmissibleTuple { polys, k_bounds: vec![rat(1); k] }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StageCertificate {
    pub stage: usize,
    pub degree_ok: bool,
    pub member_ok: bool,
    /// `None` when the components could not be determined.
    pub dimension_ok: Option<bool>,
    pub minimal_variety_ok: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TupleCertificate {
    pub stages: Vec<StageCertificate>,
    pub certified: bool,
    /// Some stage could not be decided.
    pub incomplete: bool,
}

fn prefix_ideal(v: &Variety, polys: &[Polynomial]) -> Result<Ideal> {
    Ok(Ideal::new(v.n_vars(), polys.to_vec())?.with_budget(v.ideal.budget()))
}

fn try_decompose(j: &Ideal) -> Result<Option<Vec<Component>>> {
    match decompose(j) {
        Ok(c) => Ok(Some(c)),
        Err(Error::DecompositionIncomplete(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Checks the degree, membership, dimension and minimal-variety clauses
/// stage by stage.
pub fn verify_admissible_tuple(v: &Variety, deltas: &[u32], tuple: &AdmissibleTuple) -> Result<TupleCertificate> {
    let n = v.n_vars();
    let codim = v.codim();
    if tuple.polys.len() != codim || deltas.len() != codim || tuple.k_bounds.len() != codim {
        return Err(Error::PreconditionViolated(format!("expected {codim} stages")));
    }
    let mut stages = Vec::new();
    for i in 1..=codim {
        let q = &tuple.polys[i - 1];
        let deg = q.total_degree().unwrap_or(0);
        let degree_ok = rat(deg as i64) <= &tuple.k_bounds[i - 1] * rat(deltas[i - 1] as i64);
        let member_ok = v.ideal.contains(q)?;
        let j = prefix_ideal(v, &tuple.polys[..i])?;
        let target = n - i;
        let comps = if j.is_unit()? { Some(Vec::new()) } else { try_decompose(&j)? };
        let dimension_ok = if !j.is_unit()? && member_ok && j.dimension()? == target {
            // Every component has dimension at least n - i.
            Some(true)
        } else {
            match &comps {
                Some(cs) => {
                    let mut through = Vec::new();
                    for c in cs {
                        if v.ideal.contains_ideal(&c.ideal)? {
                            through.push(c.dim);
                        }
                    }
                    Some(through.iter().max() == Some(&target))
                }
                None => None,
            }
        };
        let minimal_variety_ok = if i == codim {
            if member_ok && !j.is_unit()? {
                let all_in = prefix_ideal(v, &tuple.polys)?;
                Some(is_component(&v.ideal, &all_in)?)
            } else {
                Some(false)
            }
        } else {
            match &comps {
                Some(cs) => {
                    let next = deltas[i];
                    let mut found = false;
                    for c in cs {
                        if c.dim != target || !v.ideal.contains_ideal(&c.ideal)? {
                            continue;
                        }
                        let mut equal = true;
                        for m in 0..next {
                            if c.ideal.affine_hilbert(m)? != v.affine_hilbert(m)? {
                                equal = false;
                                break;
                            }
                        }
                        if equal {
                            found = true;
                            break;
                        }
                    }
                    Some(found)
                }
                None => None,
            }
        };
        stages.push(StageCertificate { stage: i, degree_ok, member_ok, dimension_ok, minimal_variety_ok });
    }
    let incomplete = stages.iter().any(|s| s.dimension_ok.is_none() || s.minimal_variety_ok.is_none());
    let certified = stages.iter().all(|s| {
        s.degree_ok && s.member_ok && s.dimension_ok == Some(true) && s.minimal_variety_ok == Some(true)
    });
    Ok(TupleCertificate { stages, certified, incomplete })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnvelopeStage {
    pub stage: usize,
    /// `None` only for a first stage the splitter could not handle; its
    /// envelope part is empty regardless.
    pub components: Option<Vec<ComponentSummary>>,
    /// Indices into `components` of dimension exactly `n - j`.
    pub s_part: Vec<usize>,
    /// Indices of dimension greater than `n - j`.
    pub e_part: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnvelopeReport {
    pub stages: Vec<EnvelopeStage>,
    /// Envelope components of dimension `n - i` are components at stage `i`.
    pub location_ok: bool,
    /// Per stage, `Σ deg W <= Π deg Q_j`.
    pub degree_sums_ok: bool,
}

impl EnvelopeReport {
    pub fn is_empty(&self) -> bool {
        self.stages.iter().all(|s| s.e_part.is_empty())
    }

    /// Envelope components of the given dimension, across stages and
    /// without repeats.
    pub fn envelope_of_dim(&self, n: usize, dim: usize) -> Result<Vec<Ideal>> {
        let mut out: Vec<Ideal> = Vec::new();
        for s in &self.stages {
            let Some(cs) = &s.components else { continue };
            for &k in &s.e_part {
                if cs[k].dim != dim {
                    continue;
                }
                let id = Ideal::new(n, cs[k].generators.clone())?;
                let mut dup = false;
                for o in &out {
                    if o.same_as(&id)? {
                        dup = true;
                        break;
                    }
                }
                if !dup {
                    out.push(id);
                }
            }
        }
        Ok(out)
    }
}

fn summarize(v: &Variety, cs: &[Component]) -> Result<Vec<ComponentSummary>> {
    cs.iter()
        .map(|c| {
            Ok(ComponentSummary {
                generators: c.ideal.generators().to_vec(),
                dim: c.dim,
                degree: c.degree,
                contains_v: v.ideal.contains_ideal(&c.ideal)?,
            })
        })
        .collect()
}

/// Classifies the components of each `Z(Q_1..Q_j)` by dimension.
pub fn envelope(v: &Variety, tuple: &AdmissibleTuple) -> Result<EnvelopeReport> {
    let n = v.n_vars();
    let mut stages = Vec::new();
    let mut degree_sums_ok = true;
    let mut bezout = 1u64;
    for j in 1..=tuple.polys.len() {
        bezout = bezout.saturating_mul(tuple.polys[j - 1].total_degree().unwrap_or(0) as u64);
        let ideal = prefix_ideal(v, &tuple.polys[..j])?;
        let comps = match try_decompose(&ideal)? {
            Some(cs) => Some(summarize(v, &cs)?),
            None if j == 1 => None,
            None => return Err(Error::DecompositionIncomplete(format!("stage {j} of the tuple"))),
        };
        let (mut s_part, mut e_part) = (Vec::new(), Vec::new());
        if let Some(cs) = &comps {
            for (k, c) in cs.iter().enumerate() {
                if c.dim == n - j {
                    s_part.push(k);
                } else if c.dim > n - j {
                    e_part.push(k);
                }
            }
            degree_sums_ok &= cs.iter().map(|c| c.degree).sum::<u64>() <= bezout;
        }
        stages.push(EnvelopeStage { stage: j, components: comps, s_part, e_part });
    }
    let mut location_ok = true;
    for s in &stages {
        let Some(cs) = &s.components else { continue };
        for &k in &s.e_part {
            let w = Ideal::new(n, cs[k].generators.clone())?;
            let i = n - cs[k].dim;
            let earlier = &stages[i - 1];
            let mut found = false;
            if let Some(ecs) = &earlier.components {
                for &e in &earlier.s_part {
                    if Ideal::new(n, ecs[e].generators.clone())?.same_as(&w)? {
                        found = true;
                        break;
                    }
                }
            } else {
                // A first stage that could not be split: any divisor of Q_1
                // is one of its components.
                found = i == 1;
            }
            location_ok &= found;
        }
    }
    Ok(EnvelopeReport { stages, location_ok, degree_sums_ok })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Killer {
    pub k: usize,
    pub polynomial: Polynomial,
    pub degree: u32,
    /// `deg F_k < δ_k`; guaranteed only for specially built tuples.
    pub below_delta: bool,
}

/// For each `k` with a non-empty dimension-`(n-k)` envelope part, a
/// minimal-degree polynomial vanishing on that part and not on `V`.
pub fn envelope_killers(v: &Variety, deltas: &[u32], report: &EnvelopeReport) -> Result<Vec<Killer>> {
    let n = v.n_vars();
    let mut out = Vec::new();
    for k in 1..=v.codim() {
        let parts = report.envelope_of_dim(n, n - k)?;
        if parts.is_empty() {
            continue;
        }
        let targets = parts.into_iter().map(Variety::new).collect::<Result<Vec<_>>>()?;
        let r = match vanish_on_varieties(v, &targets) {
            Ok(r) => r,
            Err(Error::DegreeBudgetExceeded(m)) => return Err(Error::NotFound(m)),
            Err(e) => return Err(e),
        };
        out.push(Killer { k, below_delta: r.degree < deltas[k - 1], degree: r.degree, polynomial: r.polynomial });
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverOptions {
    /// `ε_i`, indexed from `i = 1`; missing entries continue as `4^{-i}`.
    #[serde(with = "crate::serde_rational::vec")]
    pub epsilon: Vec<Rational>,
    pub max_depth: usize,
    /// Tuples tried per node before settling for the best one.
    pub retries: u64,
    pub profile: ProfileOptions,
}

impl Default for CoverOptions {
    fn default() -> Self {
        CoverOptions { epsilon: Vec::new(), max_depth: 6, retries: 4, profile: ProfileOptions::default() }
    }
}

impl CoverOptions {
    pub fn epsilon(&self, i: usize) -> Rational {
        self.epsilon.get(i - 1).cloned().unwrap_or_else(|| Rational::one() / crate::rational::pow_int(&rat(4), i as u32))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverNode {
    pub generators: Vec<Polynomial>,
    pub dim: usize,
    pub degree: u64,
    pub tuple: Vec<Polynomial>,
    /// Components of the last stage of dimension `dim`.
    pub top: Vec<ComponentSummary>,
    pub children: Vec<CoverNode>,
    /// The chosen tuple kept every envelope part under its threshold.
    pub epsilon_met: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FullCover {
    pub root: CoverNode,
    pub flattened: Vec<ComponentSummary>,
    pub degree_sum: u64,
    #[serde(with = "crate::serde_rational")]
    pub degree_ratio: Rational,
    pub v_is_component: bool,
}

fn envelope_excess(report: &EnvelopeReport, n: usize, deltas: &[u32], opts: &CoverOptions) -> (bool, u64) {
    let mut ok = true;
    let mut total = 0;
    for i in 1..deltas.len() {
        let mut deg = 0u64;
        for s in &report.stages {
            if let Some(cs) = &s.components {
                deg += s.e_part.iter().filter(|&&k| cs[k].dim == n - i).map(|&k| cs[k].degree).sum::<u64>();
            }
        }
        let prod: u64 = deltas[..i].iter().map(|&d| d as u64).product();
        ok &= rat(deg as i64) < opts.epsilon(i) * rat(prod as i64) || deg == 0;
        total += deg;
    }
    (ok, total)
}

fn cover_node(v: &Variety, given: Option<&[Polynomial]>, opts: &CoverOptions, depth: usize) -> Result<CoverNode> {
    if depth > opts.max_depth {
        return Err(Error::RecursionBudgetExceeded(opts.max_depth));
    }
    let n = v.n_vars();
    let summary_self = ComponentSummary {
        generators: v.ideal.generators().to_vec(),
        dim: v.dim,
        degree: v.degree,
        contains_v: true,
    };
    if v.codim() <= 1 {
        return Ok(CoverNode {
            generators: v.ideal.generators().to_vec(),
            dim: v.dim,
            degree: v.degree,
            tuple: v.ideal.generators().iter().take(v.codim()).cloned().collect(),
            top: vec![summary_self],
            children: Vec::new(),
            epsilon_met: true,
        });
    }
    let mut best: Option<(bool, u64, Vec<Polynomial>, EnvelopeReport)> = None;
    let attempts = if given.is_some() { 1 } else { opts.retries.max(1) };
    for attempt in 0..attempts {
        let (tuple, deltas) = match given {
            Some(t) => {
                let p = delta_profile(v, &opts.profile)?;
                (t.to_vec(), p.deltas)
            }
            None => {
                let mut po = opts.profile;
                po.seed = po.seed.wrapping_add(attempt.wrapping_mul(0x9E37_79B9));
                let p = delta_profile(v, &po)?;
                (p.tuple, p.deltas)
            }
        };
        let report = envelope(v, &AdmissibleTuple::tight(tuple.clone()))?;
        let (ok, excess) = envelope_excess(&report, n, &deltas, opts);
        let better = match &best {
            None => true,
            Some((bok, bex, _, _)) => (ok && !bok) || (ok == *bok && excess < *bex),
        };
        if better {
            best = Some((ok, excess, tuple, report));
        }
        if ok {
            break;
        }
    }
    let (epsilon_met, _, tuple, report) = best.expect("at least one attempt");
    let last = report.stages.last().expect("codim >= 2");
    let cs = last.components.as_ref().expect("later stages are always split");
    let top: Vec<ComponentSummary> = last.s_part.iter().map(|&k| cs[k].clone()).collect();
    let mut children = Vec::new();
    let mut seen: Vec<Ideal> = Vec::new();
    for s in &report.stages {
        let Some(cs) = &s.components else { continue };
        for &k in &s.e_part {
            let w = Ideal::new(n, cs[k].generators.clone())?;
            let mut dup = false;
            for o in &seen {
                if o.same_as(&w)? {
                    dup = true;
                    break;
                }
            }
            if dup {
                continue;
            }
            seen.push(w.clone());
            children.push(cover_node(&Variety::new(w)?, None, opts, depth + 1)?);
        }
    }
    Ok(CoverNode {
        generators: v.ideal.generators().to_vec(),
        dim: v.dim,
        degree: v.degree,
        tuple,
        top,
        children,
        epsilon_met,
    })
}

fn flatten(node: &CoverNode, out: &mut Vec<ComponentSummary>) {
    out.extend(node.top.iter().cloned());
    for c in &node.children {
        flatten(c, out);
    }
}

/// Recursive cover: the top components of a tuple for `V` together with
/// covers of every envelope component.
pub fn full_cover(v: &Variety, tuple: Option<&[Polynomial]>, opts: &CoverOptions) -> Result<FullCover> {
    let n = v.n_vars();
    let root = cover_node(v, tuple, opts, 0)?;
    let mut all = Vec::new();
    flatten(&root, &mut all);
    let mut flattened: Vec<ComponentSummary> = Vec::new();
    let mut ideals: Vec<Ideal> = Vec::new();
    for c in all {
        let id = Ideal::new(n, c.generators.clone())?;
        let mut dup = false;
        for o in &ideals {
            if o.same_as(&id)? {
                dup = true;
                break;
            }
        }
        if !dup {
            ideals.push(id);
            flattened.push(c);
        }
    }
    let mut product = Ideal::unit(n).with_budget(v.ideal.budget());
    for id in &ideals {
        product = product.product(id);
    }
    let v_is_component = is_component(&v.ideal, &product)?;
    let degree_sum: u64 = flattened.iter().map(|c| c.degree).sum();
    let degree_ratio = Rational::new((degree_sum as i64).into(), (v.degree.max(1) as i64).into());
    Ok(FullCover { root, flattened, degree_sum, degree_ratio, v_is_component })
}
