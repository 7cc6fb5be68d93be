//! Scenario files in, JSON reports out.

use std::time::{Duration, Instant};

use polymethod::bounds::{kst_bound, main_term, incidence_bound};
use polymethod::envelope::{self, AdmissibleTuple, CoverOptions};
use polymethod::grid::{estimate_components_grid, GridBox};
use polymethod::groebner::Budget;
use polymethod::incidence::{self, check_kb_free, count_incidences, designs, parse_adjacency, AbstractStructure, IncidenceStructure};
use polymethod::partition::{partition_with, PartitionOptions};
use polymethod::profile::{converse_bezout_report, delta_profile, Constants, ProfileOptions};
use polymethod::rational::{parse_rational, rat, to_f64};
use polymethod::sharp::{sharp_construction, SharpOptions};
use polymethod::{fixtures, siegel, Error, Ideal, MonomialOrder, Polynomial, Rational, RationalPoint, Variety};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Hilbert,
    Groebner,
    Profile,
    Siegel,
    Partition,
    Envelope,
    Fullcover,
    Incidence,
    ConstructSharp,
    ComponentsGrid,
    Calibrate,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BudgetSpec {
    pub degree: Option<u32>,
    pub basis: Option<usize>,
    pub time_ms: Option<u64>,
}

/// Either a bundled fixture or explicit generators.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VarietySpec {
    pub fixture: Option<String>,
    pub n: Option<usize>,
    pub generators: Option<Vec<String>>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RandomPoints {
    pub count: usize,
    /// Coordinates are `p/q` with `|p| <= range` and `1 <= q <= 6`.
    pub range: Option<i64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HilbertParams {
    pub max_m: Option<u32>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroebnerParams {
    pub order: Option<String>,
    pub members: Option<Vec<String>>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SiegelParams {
    pub targets: Option<Vec<VarietySpec>>,
    /// Scale of the regime intervals, default `1`.
    pub tau: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartitionParams {
    pub big_m: u64,
    pub max_rounds: Option<u32>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TupleParams {
    pub tuple: Option<Vec<String>>,
    pub max_depth: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IncidenceParams {
    pub surfaces: Vec<String>,
    pub k: usize,
    pub b: usize,
    pub big_m: Option<u64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphSpec {
    /// `fano`, `affine-plane-3`, `sqs8` or `disjoint-pairs`.
    pub design: Option<String>,
    pub pairs: Option<usize>,
    /// Adjacency-list text: one line per member.
    pub adjacency: Option<String>,
    pub n_points: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SharpParams {
    pub graph: GraphSpec,
    pub k: usize,
    pub b: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridParams {
    pub polynomial: String,
    pub n: usize,
    pub lower: Vec<String>,
    pub upper: Vec<String>,
    pub resolution: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CalibrationEntry {
    pub variety: String,
    pub design: Option<String>,
    pub k: Option<usize>,
    pub b: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CalibrateParams {
    pub fixtures: Vec<CalibrationEntry>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub command: Option<Command>,
    pub seed: Option<u64>,
    pub budget: Option<BudgetSpec>,
    pub variety: Option<VarietySpec>,
    /// Explicit points as rational strings.
    pub points: Option<Vec<Vec<String>>>,
    /// Points drawn from the variety's point oracle.
    pub sample: Option<usize>,
    pub random_points: Option<RandomPoints>,
    pub hilbert: Option<HilbertParams>,
    pub groebner: Option<GroebnerParams>,
    pub siegel: Option<SiegelParams>,
    pub partition: Option<PartitionParams>,
    pub envelope: Option<TupleParams>,
    pub fullcover: Option<TupleParams>,
    pub incidence: Option<IncidenceParams>,
    pub sharp: Option<SharpParams>,
    pub grid: Option<GridParams>,
    pub calibrate: Option<CalibrateParams>,
}

impl Scenario {
    pub fn parse(text: &str) -> Result<Scenario, String> {
        toml::from_str(text).map_err(|e| e.to_string())
    }
}

/// Command-line settings layered over the scenario.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub command: Option<Command>,
    pub seed: Option<u64>,
    pub budget_degree: Option<u32>,
    pub budget_time_ms: Option<u64>,
    pub constants: Option<Constants>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorInfo {
    pub code: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub scenario: Option<Scenario>,
    pub command: Option<Command>,
    pub seed: u64,
    pub status: String,
    pub error: Option<ErrorInfo>,
    pub constants: Constants,
    pub budget: BudgetSpec,
    pub result: Option<Value>,
}

impl RunReport {
    pub fn exit_code(&self) -> i32 {
        match self.status.as_str() {
            "ok" => 0,
            "partial" => 2,
            _ => 1,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize") + "\n"
    }

    /// Report for input that never became a scenario.
    pub fn input_error(code: &str, message: String) -> RunReport {
        RunReport {
            scenario: None,
            command: None,
            seed: 0,
            status: "error".into(),
            error: Some(ErrorInfo { code: code.into(), message }),
            constants: Constants::default(),
            budget: BudgetSpec::default(),
            result: None,
        }
    }
}

struct Ctx {
    seed: u64,
    budget: Budget,
    constants: Constants,
}

type Res<T> = polymethod::Result<T>;

fn missing(what: &str) -> Error {
    Error::PreconditionViolated(format!("scenario is missing `{what}`"))
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("results serialize")
}

fn parse_polys(strs: &[String], n: usize) -> Res<Vec<Polynomial>> {
    strs.iter().map(|s| Polynomial::parse(s, n)).collect()
}

fn ideal_of(spec: &VarietySpec, budget: Budget) -> Res<Ideal> {
    match (&spec.fixture, &spec.generators) {
        (Some(name), None) => Ok(fixtures::ideal(name)?.with_budget(budget)),
        (None, Some(gens)) => {
            let n = spec.n.ok_or_else(|| missing("variety.n"))?;
            Ok(Ideal::new(n, parse_polys(gens, n)?)?.with_budget(budget))
        }
        (None, None) => Err(missing("variety.fixture or variety.generators")),
        (Some(_), Some(_)) => Err(Error::PreconditionViolated("give either a fixture or generators".into())),
    }
}

fn variety_of(spec: &VarietySpec, budget: Budget) -> Res<Variety> {
    match &spec.fixture {
        Some(name) if spec.generators.is_none() => fixtures::variety_with(name, budget),
        _ => Variety::new(ideal_of(spec, budget)?),
    }
}

fn scenario_variety(s: &Scenario, ctx: &Ctx) -> Res<Variety> {
    variety_of(s.variety.as_ref().ok_or_else(|| missing("variety"))?, ctx.budget)
}

fn scenario_points(s: &Scenario, v: Option<&Variety>, n: usize, ctx: &Ctx) -> Res<Vec<RationalPoint>> {
    if let Some(pts) = &s.points {
        return pts
            .iter()
            .map(|p| {
                if p.len() != n {
                    return Err(Error::DimensionMismatch { expected: n, found: p.len() });
                }
                Ok(RationalPoint(p.iter().map(|c| parse_rational(c)).collect::<Res<Vec<_>>>()?))
            })
            .collect();
    }
    if let Some(count) = s.sample {
        return v.ok_or_else(|| missing("variety"))?.sample_points(count);
    }
    if let Some(r) = &s.random_points {
        let range = r.range.unwrap_or(100);
        let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
        return Ok((0..r.count)
            .map(|_| RationalPoint((0..n).map(|_| Rational::new(rng.gen_range(-range..=range).into(), rng.gen_range(1..=6i64).into())).collect()))
            .collect());
    }
    Err(missing("points, sample or random_points"))
}

fn design(spec: &GraphSpec) -> Res<AbstractStructure> {
    match (&spec.design, &spec.adjacency) {
        (Some(name), None) => match name.as_str() {
            "fano" => Ok(designs::fano()),
            "affine-plane-3" => Ok(designs::affine_plane_3()),
            "sqs8" => Ok(designs::sqs8()),
            "disjoint-pairs" => Ok(designs::disjoint_pairs(spec.pairs.unwrap_or(2))),
            other => Err(Error::NotFound(format!("design {other}"))),
        },
        (None, Some(text)) => parse_adjacency(text, spec.n_points),
        _ => Err(missing("exactly one of graph.design or graph.adjacency")),
    }
}

fn profile_opts(ctx: &Ctx) -> ProfileOptions {
    ProfileOptions { seed: ctx.seed, ..ProfileOptions::default() }
}

fn hilbert(s: &Scenario, ctx: &Ctx) -> Res<Value> {
    let ideal = ideal_of(s.variety.as_ref().ok_or_else(|| missing("variety"))?, ctx.budget)?;
    let max_m = s.hilbert.as_ref().and_then(|h| h.max_m).unwrap_or(8);
    let values = ideal.hilbert_values(max_m)?;
    let (dim, degree, data) = ideal.dimension_and_degree()?;
    Ok(json!({
        "m": (1..=max_m).collect::<Vec<_>>(),
        "values": values[1..].to_vec(),
        "h0": values[0],
        "dimension": dim,
        "degree": degree,
        "hilbert": to_value(&data),
    }))
}

fn groebner(s: &Scenario, ctx: &Ctx) -> Res<Value> {
    let ideal = ideal_of(s.variety.as_ref().ok_or_else(|| missing("variety"))?, ctx.budget)?;
    let params = s.groebner.clone().unwrap_or_default();
    let order = match params.order.as_deref().unwrap_or("grevlex") {
        "grevlex" => MonomialOrder::grevlex(),
        "lex" => MonomialOrder::lex(),
        other => return Err(Error::PreconditionViolated(format!("unknown order {other}"))),
    };
    let gb = ideal.groebner_in(&order)?;
    let n = ideal.n_vars();
    let mut membership = Vec::new();
    for m in params.members.unwrap_or_default() {
        let p = Polynomial::parse(&m, n)?;
        membership.push(json!({ "polynomial": p.to_string(), "member": gb.reduces_to_zero(&p)? }));
    }
    Ok(json!({
        "order": order,
        "basis": gb.basis.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
        "leading_monomials": gb.leading_monomials().iter().map(|m| m.to_string()).collect::<Vec<_>>(),
        "reduced": gb.is_reduced(),
        "s_pairs_reduce_to_zero": gb.s_pairs_reduce_to_zero(),
        "membership": membership,
    }))
}

fn profile(s: &Scenario, ctx: &Ctx) -> Res<Value> {
    let v = scenario_variety(s, ctx)?;
    let p = delta_profile(&v, &profile_opts(ctx))?;
    let cb = converse_bezout_report(&v, &p);
    Ok(json!({ "profile": to_value(&p), "converse_bezout": to_value(&cb) }))
}

fn siegel_cmd(s: &Scenario, ctx: &Ctx) -> Res<Value> {
    let v = scenario_variety(s, ctx)?;
    let params = s.siegel.clone().unwrap_or_default();
    match params.targets {
        Some(ts) => {
            let ts = ts.iter().map(|t| variety_of(t, ctx.budget)).collect::<Res<Vec<_>>>()?;
            let r = siegel::vanish_on_varieties(&v, &ts)?;
            let tau = params.tau.as_deref().map_or(Ok(rat(1)), parse_rational)?;
            let deg_t = ts.iter().map(|t| t.degree).sum();
            let l = ts.iter().map(|t| t.dim).max().unwrap_or(0);
            let regime = if l < v.dim {
                let p = delta_profile(&v, &profile_opts(ctx))?;
                Some(to_value(&siegel::classify_regime(&p, deg_t, l, &tau)?))
            } else {
                None
            };
            Ok(json!({ "result": to_value(&r), "regime": regime }))
        }
        None => {
            let pts = scenario_points(s, Some(&v), v.n_vars(), ctx)?;
            Ok(json!({ "result": to_value(&siegel::vanish_on_points(&v, &pts)?) }))
        }
    }
}

fn partition_cmd(s: &Scenario, ctx: &Ctx) -> Res<Value> {
    let v = scenario_variety(s, ctx)?;
    let params = s.partition.as_ref().ok_or_else(|| missing("partition"))?;
    let pts = scenario_points(s, Some(&v), v.n_vars(), ctx)?;
    let p = delta_profile(&v, &profile_opts(ctx))?;
    let opts = PartitionOptions { seed: ctx.seed, max_rounds: params.max_rounds.unwrap_or(PartitionOptions::default().max_rounds) };
    let (chain, report) = partition_with(&v, &p, &pts, params.big_m, &ctx.constants, &opts)?;
    Ok(json!({ "chain": to_value(&chain), "report": to_value(&report) }))
}

fn tuple_of(s: &Option<TupleParams>, v: &Variety, fallback: &[Polynomial]) -> Res<Vec<Polynomial>> {
    match s.as_ref().and_then(|t| t.tuple.clone()) {
        Some(t) => parse_polys(&t, v.n_vars()),
        None => Ok(fallback.to_vec()),
    }
}

fn envelope_cmd(s: &Scenario, ctx: &Ctx) -> Res<Value> {
    let v = scenario_variety(s, ctx)?;
    let p = delta_profile(&v, &profile_opts(ctx))?;
    let tuple = AdmissibleTuple::tight(tuple_of(&s.envelope, &v, &p.tuple)?);
    let cert = envelope::verify_admissible_tuple(&v, &p.deltas, &tuple)?;
    let env = envelope::envelope(&v, &tuple)?;
    let killers = envelope::envelope_killers(&v, &p.deltas, &env)?;
    Ok(json!({
        "deltas": p.deltas,
        "tuple": to_value(&tuple),
        "certificate": to_value(&cert),
        "envelope": to_value(&env),
        "killers": to_value(&killers),
    }))
}

fn fullcover_cmd(s: &Scenario, ctx: &Ctx) -> Res<Value> {
    let v = scenario_variety(s, ctx)?;
    let tuple = match s.fullcover.as_ref().and_then(|t| t.tuple.clone()) {
        Some(t) => Some(parse_polys(&t, v.n_vars())?),
        None => None,
    };
    let mut opts = CoverOptions { profile: profile_opts(ctx), ..CoverOptions::default() };
    if let Some(d) = s.fullcover.as_ref().and_then(|t| t.max_depth) {
        opts.max_depth = d;
    }
    Ok(to_value(&envelope::full_cover(&v, tuple.as_deref(), &opts)?))
}

fn incidence_cmd(s: &Scenario, ctx: &Ctx) -> Res<Value> {
    let params = s.incidence.as_ref().ok_or_else(|| missing("incidence"))?;
    let v = match &s.variety {
        Some(spec) => Some(variety_of(spec, ctx.budget)?),
        None => None,
    };
    let n = match (&v, &s.points) {
        (Some(v), _) => v.n_vars(),
        (None, Some(p)) => p.first().map_or(0, |x| x.len()),
        (None, None) => return Err(missing("variety or points")),
    };
    let pts = scenario_points(s, v.as_ref(), n, ctx)?;
    let surfaces = parse_polys(&params.surfaces, n)?;
    let st = IncidenceStructure::build(pts, surfaces)?;
    let count = count_incidences(&st);
    let free = check_kb_free(&st, params.k, params.b)?;
    let (deg_v, d) = v.as_ref().map_or((1, n as u64), |v| (v.degree, v.dim as u64));
    let mut result = json!({
        "points": st.points.len(),
        "surfaces": st.surfaces.len(),
        "deg_t": st.deg_t,
        "incidences": count,
        "freeness": to_value(&free),
        "kst": free.free.then(|| kst_bound(st.points.len() as u64, st.surfaces.len() as u64, params.k as u64, params.b as u64)).transpose()?.map(|r| r.to_string()),
    });
    if d >= 1 {
        let bound = incidence_bound(st.points.len() as u64, st.deg_t, deg_v, d, params.k as u64, params.b as u64, &ctx.constants.incidence_c1)?
            .with_incidences(count, st.surfaces.len() as u64)?;
        result["incidence_bound"] = to_value(&bound);
    }
    if let Some(m) = params.big_m {
        let v = v.unwrap_or_else(|| Variety::affine_space(n));
        result["buckets"] = to_value(&incidence::partitioned_incidence_report(&v, &st, m, &ctx.constants)?);
    }
    Ok(result)
}

fn sharp_cmd(s: &Scenario, ctx: &Ctx) -> Res<Value> {
    let params = s.sharp.as_ref().ok_or_else(|| missing("sharp"))?;
    let v = scenario_variety(s, ctx)?;
    let x = design(&params.graph)?;
    let rep = sharp_construction(&x, &v, params.k, params.b, &SharpOptions { seed: ctx.seed, ..SharpOptions::default() })?;
    let bound = incidence_bound(
        rep.structure.points.len() as u64,
        rep.structure.deg_t,
        v.degree,
        v.dim.max(1) as u64,
        params.k as u64,
        params.b as u64,
        &ctx.constants.incidence_c1,
    )?
    .with_incidences(rep.incidences, rep.structure.surfaces.len() as u64)?;
    Ok(json!({ "construction": to_value(&rep), "incidence_bound": to_value(&bound) }))
}

fn grid_cmd(s: &Scenario) -> Res<Value> {
    let g = s.grid.as_ref().ok_or_else(|| missing("grid"))?;
    let p = Polynomial::parse(&g.polynomial, g.n)?;
    let parse_all = |v: &[String]| v.iter().map(|c| parse_rational(c)).collect::<Res<Vec<_>>>();
    let bx = GridBox { lower: parse_all(&g.lower)?, upper: parse_all(&g.upper)? };
    Ok(to_value(&estimate_components_grid(&p, &bx, g.resolution)?))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixtureMeasurement {
    pub variety: String,
    pub design: Option<String>,
    #[serde(with = "polymethod::serde_rational")]
    pub c0_observed: Rational,
    /// Incidences over the main term, rounded up.
    #[serde(with = "polymethod::serde_rational::option")]
    pub incidence_c1_ratio: Option<Rational>,
    #[serde(with = "polymethod::serde_rational::option")]
    pub c2_needed: Option<Rational>,
}

/// Rounds up to a multiple of `1/1024`.
fn round_up(x: &Rational) -> Rational {
    let scaled = (x * rat(1024)).ceil();
    scaled / rat(1024)
}

fn greedy_free_subset(st: &IncidenceStructure, candidates: &[usize], k: usize, b: usize) -> Res<usize> {
    let mut chosen: Vec<usize> = Vec::new();
    for &c in candidates {
        chosen.push(c);
        let rows: Vec<Vec<bool>> = chosen.iter().map(|&i| st.matrix[i].clone()).collect();
        if !incidence::check_kb_free_matrix(&rows, st.surfaces.len(), k, b, incidence::DEFAULT_MAX_B)?.free {
            chosen.pop();
        }
    }
    Ok(chosen.len())
}

/// The `c2` needed for the rich-point bound on this structure, over all `r >= b`.
fn c2_needed(st: &IncidenceStructure, deg_v: u64, d: u64, k: usize, b: usize) -> Res<Option<Rational>> {
    if k < 2 {
        return Ok(None);
    }
    let richness: Vec<usize> = st.matrix.iter().map(|r| r.iter().filter(|&&x| x).count()).collect();
    let max_r = richness.iter().copied().max().unwrap_or(0);
    let mut need: Option<Rational> = None;
    for r in b..=max_r {
        let rich: Vec<usize> = (0..st.points.len()).filter(|&i| richness[i] >= r).collect();
        let size = greedy_free_subset(st, &rich, k, b)?;
        let gap = Rational::from_integer(((r - b + 1) as i64).into());
        let first = rat(2) * Rational::from_integer((st.deg_t as i64).into()) / &gap;
        let lhs = Rational::from_integer((size as i64).into()) / Rational::from_integer(((k as u64 * deg_v) as i64).into()) - first;
        // Second term without c2, rounded down so the quotient rounds up.
        let unit = polymethod::bounds::rich_points_bound(r as u64, st.deg_t, deg_v, d, k as u64, b as u64, &rat(1))?
            / Rational::from_integer(((k as u64 * deg_v) as i64).into())
            - polymethod::bounds::rich_points_bound(r as u64, st.deg_t, deg_v, d, k as u64, b as u64, &rat(0))?
                / Rational::from_integer(((k as u64 * deg_v) as i64).into());
        if unit > rat(0) && lhs > rat(0) {
            let c = round_up(&(lhs / unit));
            need = Some(need.map_or(c.clone(), |n: Rational| n.max(c)));
        }
    }
    Ok(need.or(Some(rat(0))))
}

fn calibrate(s: &Scenario, ctx: &Ctx) -> Res<(Constants, Vec<FixtureMeasurement>)> {
    let suite = s.calibrate.as_ref().map(|c| c.fixtures.clone()).unwrap_or_default();
    if suite.is_empty() {
        return Err(Error::FixtureFailure("empty fixture suite".into()));
    }
    let fail = |name: &str, e: Error| Error::FixtureFailure(format!("{name}: {e}"));
    let mut measurements = Vec::new();
    for entry in &suite {
        let v = fixtures::variety_with(&entry.variety, ctx.budget).map_err(|e| fail(&entry.variety, e))?;
        let c0 = v.hilbert.c0_observed.clone();
        if c0 <= rat(0) {
            return Err(fail(&entry.variety, Error::PreconditionViolated("c0_observed is not positive".into())));
        }
        let (mut c1_need, mut c2) = (None, None);
        if let Some(name) = &entry.design {
            let (k, b) = (entry.k.unwrap_or(2), entry.b.unwrap_or(2));
            let x = design(&GraphSpec { design: Some(name.clone()), ..GraphSpec::default() })?;
            let rep = sharp_construction(&x, &v, k, b, &SharpOptions { seed: ctx.seed, ..SharpOptions::default() })
                .map_err(|e| fail(name, e))?;
            if !(rep.graph_equal && rep.kb_free) {
                return Err(Error::FixtureFailure(format!("{name} on {}: construction does not match its input", entry.variety)));
            }
            let st = &rep.structure;
            let d = v.dim.max(1) as u64;
            let bare = main_term(st.points.len() as u64, st.deg_t, v.degree, d, k as u64, false)?;
            c1_need = Some(round_up(&(Rational::from_integer((rep.incidences as i64).into()) / bare)));
            c2 = c2_needed(st, v.degree, d, k, b)?;
        }
        measurements.push(FixtureMeasurement {
            variety: entry.variety.clone(),
            design: entry.design.clone(),
            c0_observed: c0,
            incidence_c1_ratio: c1_need,
            c2_needed: c2,
        });
    }
    let c0 = measurements.iter().map(|m| m.c0_observed.clone()).min().expect("suite is nonempty");
    let max_of = |f: &dyn Fn(&FixtureMeasurement) -> Option<Rational>, default: Rational| {
        measurements.iter().filter_map(f).max().unwrap_or(default)
    };
    let constants = Constants {
        c0,
        c1: ctx.constants.c1.clone(),
        incidence_c1: max_of(&|m| m.incidence_c1_ratio.clone(), ctx.constants.incidence_c1.clone()),
        c2: max_of(&|m| m.c2_needed.clone(), ctx.constants.c2.clone()),
    };
    Ok((constants, measurements))
}

pub fn render_constants(c: &Constants) -> String {
    toml::to_string(c).expect("constants serialize")
}

pub fn parse_constants(text: &str) -> Result<Constants, String> {
    toml::from_str(text).map_err(|e| e.to_string())
}

fn dispatch(cmd: Command, s: &Scenario, ctx: &Ctx) -> Res<Value> {
    match cmd {
        Command::Hilbert => hilbert(s, ctx),
        Command::Groebner => groebner(s, ctx),
        Command::Profile => profile(s, ctx),
        Command::Siegel => siegel_cmd(s, ctx),
        Command::Partition => partition_cmd(s, ctx),
        Command::Envelope => envelope_cmd(s, ctx),
        Command::Fullcover => fullcover_cmd(s, ctx),
        Command::Incidence => incidence_cmd(s, ctx),
        Command::ConstructSharp => sharp_cmd(s, ctx),
        Command::ComponentsGrid => grid_cmd(s),
        Command::Calibrate => {
            let (c, m) = calibrate(s, ctx)?;
            Ok(json!({ "constants": to_value(&c), "constants_toml": render_constants(&c), "fixtures": to_value(&m) }))
        }
    }
}

/// Runs one scenario. Never panics on bad input; failures are reported.
pub fn run(scenario: Scenario, ov: &Overrides) -> RunReport {
    let seed = ov.seed.or(scenario.seed).unwrap_or(0);
    let mut spec = scenario.budget.clone().unwrap_or_default();
    if ov.budget_degree.is_some() {
        spec.degree = ov.budget_degree;
    }
    if ov.budget_time_ms.is_some() {
        spec.time_ms = ov.budget_time_ms;
    }
    let defaults = Budget::default();
    let budget = Budget {
        max_degree: spec.degree.unwrap_or(defaults.max_degree),
        max_basis: spec.basis.unwrap_or(defaults.max_basis),
        deadline: spec.time_ms.map(|ms| Instant::now() + Duration::from_millis(ms)),
    };
    let constants = ov.constants.clone().unwrap_or_default();
    let command = ov.command.or(scenario.command);
    let ctx = Ctx { seed, budget, constants: constants.clone() };
    let outcome = match command {
        Some(cmd) => dispatch(cmd, &scenario, &ctx),
        None => Err(missing("command")),
    };
    let (status, error, result) = match outcome {
        Ok(v) => ("ok", None, Some(v)),
        Err(e) => {
            let status = if e.is_budget_like() { "partial" } else { "error" };
            (status, Some(ErrorInfo { code: e.code().into(), message: e.to_string() }), None)
        }
    };
    RunReport { scenario: Some(scenario), command, seed, status: status.into(), error, constants, budget: spec, result }
}

/// Convenience for checks that only need a float view of a rational string.
pub fn rational_str_to_f64(s: &str) -> Option<f64> {
    parse_rational(s).ok().map(|r| to_f64(&r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use polymethod::rational::ratio;

    #[test]
    fn rounding_up_to_a_grid() {
        assert_eq!(round_up(&ratio(1, 3)), ratio(342, 1024));
        assert_eq!(round_up(&rat(2)), rat(2));
    }

    #[test]
    fn designs_by_name() {
        assert_eq!(design(&GraphSpec { design: Some("fano".into()), ..GraphSpec::default() }).unwrap().members.len(), 7);
        let spec = GraphSpec { adjacency: Some("0 1\n2 3\n".into()), ..GraphSpec::default() };
        assert_eq!(design(&spec).unwrap().n_points, 4);
        assert!(design(&GraphSpec::default()).is_err());
    }

    #[test]
    fn missing_command_is_an_input_error() {
        let r = run(Scenario::default(), &Overrides::default());
        assert_eq!((r.status.as_str(), r.exit_code()), ("error", 1));
        assert_eq!(r.error.unwrap().code, "precondition_violated");
    }

    #[test]
    fn overrides_win() {
        let s = Scenario::parse("command = \"hilbert\"\nseed = 3\n[budget]\ndegree = 9\n[variety]\nfixture = \"circle\"\n").unwrap();
        let ov = Overrides { seed: Some(5), budget_degree: Some(20), ..Overrides::default() };
        let r = run(s, &ov);
        assert_eq!((r.seed, r.budget.degree), (5, Some(20)));
    }
}
