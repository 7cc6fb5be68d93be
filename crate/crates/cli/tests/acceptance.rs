//! End-to-end acceptance suite. Prints one line per criterion and exits
//! non-zero when any of them fails.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use num_traits::{One, Signed, Zero};
use polymethod::bounds::{alpha, beta, kst_bound};
use polymethod::grid::{estimate_components_grid, GridBox};
use polymethod::hamsandwich::{discrete_ham_sandwich, Hyperplane, SearchOptions};
use polymethod::incidence::{check_kb_free_matrix, count_matrix, designs, AbstractStructure};
use polymethod::linalg::nullspace;
use polymethod::monomial::monomials_up_to;
use polymethod::partition::partition;
use polymethod::profile::{delta_profile, Constants, ProfileOptions};
use polymethod::rational::ratio;
use polymethod::sharp::{sharp_construction, SharpOptions};
use polymethod::siegel::vanish_on_points;
use polymethod::{fixtures, Ideal, Monomial, MonomialOrder, Polynomial, Rational, RationalPoint, Variety};
use polymethod_cli::{run, Overrides, Scenario};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn q(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

// Arithmetic modulo a prime, for rank oracles.

const P: u64 = 1_000_000_007;

fn mulm(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % P as u128) as u64
}

fn powm(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mulm(r, a);
        }
        a = mulm(a, a);
        e >>= 1;
    }
    r
}

fn rank_mod(mut a: Vec<Vec<u64>>) -> usize {
    let cols = a.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..a.len()).find(|&r| a[r][c] != 0) else { continue };
        a.swap(rank, piv);
        let inv = powm(a[rank][c], P - 2);
        for x in a[rank].iter_mut() {
            *x = mulm(*x, inv);
        }
        let pivot_row = a[rank].clone();
        for (r, row) in a.iter_mut().enumerate() {
            if r != rank && row[c] != 0 {
                let f = row[c];
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x = (*x + P - mulm(f, *y)) % P;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn eval_monomial_mod(m: &Monomial, x: &[u64]) -> u64 {
    m.exponents().iter().zip(x).fold(1, |acc, (&e, &v)| mulm(acc, powm(v, e as u64)))
}

/// Number of linearly independent functions among monomials of degree at
/// most `m` restricted to `points`.
fn evaluation_rank(n: usize, m: u32, points: &[Vec<u64>]) -> usize {
    let mons = monomials_up_to(n, m);
    rank_mod(points.iter().map(|x| mons.iter().map(|mo| eval_monomial_mod(mo, x)).collect()).collect())
}

fn inv(x: u64) -> u64 {
    powm(x, P - 2)
}

/// Points on each bundled fixture, from parameterizations written here.
fn oracle_points(name: &str) -> Vec<Vec<u64>> {
    let ts = 2..202u64;
    match name {
        "twisted-cubic" => ts.map(|t| vec![t, mulm(t, t), powm(t, 3)]).collect(),
        "circle" => ts
            .map(|t| {
                let d = inv((1 + mulm(t, t)) % P);
                vec![mulm((1 + P - mulm(t, t)) % P, d), mulm(2 * t, d)]
            })
            .collect(),
        "line-in-3-space" => ts.map(|t| vec![t, t, (1 + P - t) % P]).collect(),
        "cubic-union-line" => {
            ts.clone().map(|t| vec![t, mulm(t, t), powm(t, 3)]).chain(ts.map(|t| vec![0, 0, t])).collect()
        }
        "four-points" => {
            let m1 = P - 1;
            vec![vec![1, 1], vec![1, m1], vec![m1, 1], vec![m1, m1]]
        }
        "parabola" => ts.map(|t| vec![t, mulm(t, t)]).collect(),
        "plane-conic" => ts.map(|t| vec![t, inv(t)]).collect(),
        "plane-quartic" => ts.map(|t| vec![t, (powm(t, 4) + P - t) % P]).collect(),
        _ => unreachable!(),
    }
}

const ORACLE_FIXTURES: &[&str] =
    &["twisted-cubic", "circle", "line-in-3-space", "cubic-union-line", "four-points", "parabola", "plane-conic", "plane-quartic"];

fn criterion_1() -> Outcome {
    let mut compared = 0;
    for name in ORACLE_FIXTURES {
        let ideal = fixtures::ideal(name).map_err(|e| e.to_string())?;
        let pts = oracle_points(name);
        let values = ideal.hilbert_values(8).map_err(|e| format!("{name}: {e}"))?;
        for m in 0..=8u32 {
            let oracle = evaluation_rank(ideal.n_vars(), m, &pts) as u64;
            check(values[m as usize] == oracle, || format!("{name} m={m}: {} vs oracle {oracle}", values[m as usize]))?;
            compared += 1;
        }
    }
    Ok(format!("{} fixtures, {compared} values equal", ORACLE_FIXTURES.len()))
}

fn random_poly(rng: &mut ChaCha8Rng, n: usize, max_deg: u32, terms: usize) -> Polynomial {
    let mons = monomials_up_to(n, max_deg);
    let t = (0..terms).map(|_| (mons.choose(rng).unwrap().clone(), q(rng.gen_range(-3..=3)))).collect();
    Polynomial::from_terms(n, t)
}

fn rational_points_on(name: &str, count: usize) -> Vec<RationalPoint> {
    let ts = (2..2 + count as i64).map(q);
    match name {
        "twisted-cubic" => ts.map(|t| RationalPoint(vec![t.clone(), &t * &t, &t * &t * &t])).collect(),
        "circle" => ts
            .map(|t| {
                let d = q(1) + &t * &t;
                RationalPoint(vec![(q(1) - &t * &t) / &d, q(2) * &t / &d])
            })
            .collect(),
        "line-in-3-space" => ts.map(|t| RationalPoint(vec![t.clone(), t.clone(), q(1) - t])).collect(),
        "cubic-union-line" => ts.map(|t| RationalPoint(vec![q(0), q(0), t])).collect(),
        "four-points" => vec![RationalPoint::from_ints(&[1, -1])],
        "parabola" => ts.map(|t| RationalPoint(vec![t.clone(), &t * &t])).collect(),
        "plane-conic" => ts.map(|t| RationalPoint(vec![t.clone(), q(1) / t])).collect(),
        "plane-quartic" => ts.map(|t| RationalPoint(vec![t.clone(), &t * &t * &t * &t - &t])).collect(),
        _ => unreachable!(),
    }
}

fn criterion_2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut bases = 0;
    for name in ORACLE_FIXTURES {
        let ideal = fixtures::ideal(name).map_err(|e| e.to_string())?;
        for order in [MonomialOrder::grevlex(), MonomialOrder::lex()] {
            let gb = ideal.groebner_in(&order).map_err(|e| e.to_string())?;
            check(gb.s_pairs_reduce_to_zero(), || format!("{name}: S-pair does not reduce"))?;
            bases += 1;
        }
    }
    for _ in 0..10 {
        let n = rng.gen_range(2..=3);
        let gens: Vec<Polynomial> = (0..2).map(|_| random_poly(&mut rng, n, 2, 3)).collect();
        let gb = Ideal::new(n, gens).unwrap().groebner_in(&MonomialOrder::grevlex()).map_err(|e| e.to_string())?;
        check(gb.s_pairs_reduce_to_zero(), || "random ideal: S-pair does not reduce".into())?;
        bases += 1;
    }
    let (mut members, mut others) = (0, 0);
    for probe in 0..200 {
        let name = ORACLE_FIXTURES[probe % ORACLE_FIXTURES.len()];
        let ideal = fixtures::ideal(name).unwrap();
        let n = ideal.n_vars();
        let mut member = Polynomial::zero(n);
        for g in ideal.generators() {
            member = &member + &(&random_poly(&mut rng, n, 2, 3) * g);
        }
        if probe % 2 == 0 {
            check(ideal.contains(&member).unwrap(), || format!("{name}: constructed member rejected"))?;
            members += 1;
        } else {
            let witness = &rational_points_on(name, 1)[0];
            let mut extra = random_poly(&mut rng, n, 2, 3);
            while extra.eval(&witness.0).is_zero() {
                extra = &extra + &Polynomial::one(n);
            }
            let probe = &member + &extra;
            check(!ideal.contains(&probe).unwrap(), || format!("{name}: {probe} accepted but nonzero at {witness}"))?;
            others += 1;
        }
    }
    Ok(format!("{bases} bases closed under S-pairs, {members} members and {others} non-members classified"))
}

fn criterion_3() -> Outcome {
    let expect: &[(&str, &[u32])] = &[
        ("twisted-cubic", &[2, 2]),
        ("parabola", &[2]),
        ("circle", &[2]),
        ("plane-conic", &[2]),
        ("plane-cubic", &[3]),
        ("plane-quartic", &[4]),
        ("line-in-3-space", &[1, 1]),
    ];
    for (name, deltas) in expect {
        let v = fixtures::variety(name).map_err(|e| e.to_string())?;
        let p = delta_profile(&v, &ProfileOptions::default()).map_err(|e| format!("{name}: {e}"))?;
        check(p.deltas == *deltas, || format!("{name}: {:?}, expected {deltas:?}", p.deltas))?;
        check(p.certified, || format!("{name}: not certified"))?;
        let product: u64 = p.deltas.iter().map(|&d| d as u64).product();
        check(v.degree <= product, || format!("{name}: degree {} exceeds {product}", v.degree))?;
    }
    Ok(format!("{} profiles certified, degree <= product of deltas", expect.len()))
}

fn distinct_points(rng: &mut ChaCha8Rng, count: usize, make: impl Fn(&mut ChaCha8Rng) -> RationalPoint) -> Vec<RationalPoint> {
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    while out.len() < count {
        let p = make(rng);
        if seen.insert(p.to_string()) {
            out.push(p);
        }
    }
    out
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let kinds = ["plane", "circle", "twisted-cubic", "parabola", "space4"];
    for instance in 0..20 {
        let kind = kinds[instance % kinds.len()];
        let (v, cap) = match kind {
            "space4" => (Variety::affine_space(4), 40),
            "twisted-cubic" => (fixtures::variety(kind).unwrap(), 20),
            "circle" => (fixtures::variety(kind).unwrap(), 24),
            _ => (fixtures::variety(kind).unwrap(), 40),
        };
        let size = rng.gen_range(1..=cap);
        let pts = distinct_points(&mut rng, size, |r| {
            let t = ratio(r.gen_range(-40..=40), r.gen_range(1..=4));
            match kind {
                "plane" => RationalPoint::from_ints(&[r.gen_range(-10..=10), r.gen_range(-10..=10)]),
                "space4" => RationalPoint::from_ints(&[(); 4].map(|_| r.gen_range(-6..=6))),
                "circle" => {
                    let d = q(1) + &t * &t;
                    RationalPoint(vec![(q(1) - &t * &t) / &d, q(2) * &t / &d])
                }
                "twisted-cubic" => RationalPoint(vec![t.clone(), &t * &t, &t * &t * &t]),
                _ => RationalPoint(vec![t.clone(), &t * &t]),
            }
        });
        let r = vanish_on_points(&v, &pts).map_err(|e| format!("instance {instance}: {e}"))?;
        check(pts.iter().all(|s| r.polynomial.eval(&s.0).is_zero()), || format!("instance {instance}: not vanishing"))?;
        check(!v.contains_poly(&r.polynomial).unwrap(), || format!("instance {instance}: polynomial lies in I(V)"))?;
        if r.degree > 0 {
            let mons = monomials_up_to(v.n_vars(), r.degree - 1);
            let rows: Vec<Vec<Rational>> =
                pts.iter().map(|s| mons.iter().map(|m| Polynomial::monomial(m.clone(), q(1)).eval(&s.0)).collect()).collect();
            for vec in nullspace(&rows, mons.len()) {
                let p = Polynomial::from_terms(v.n_vars(), mons.iter().cloned().zip(vec).filter(|(_, c)| !c.is_zero()).collect());
                check(v.contains_poly(&p).unwrap(), || format!("instance {instance}: degree {} already feasible", r.degree - 1))?;
            }
        }
        let pigeonhole = (0..).find(|&m| v.affine_hilbert(m).unwrap() > size as u64).unwrap();
        check(r.degree <= pigeonhole, || format!("instance {instance}: degree {} above {pigeonhole}", r.degree))?;
    }
    Ok("20 instances minimal and outside I(V)".into())
}

fn strict_sides(h: &Hyperplane, set: &[Vec<Rational>]) -> (usize, usize) {
    let mut pos = 0;
    let mut neg = 0;
    for y in set {
        let v: Rational = h.normal.iter().zip(y).map(|(a, b)| a * b).sum::<Rational>() + &h.offset;
        if v.is_positive() {
            pos += 1;
        } else if v.is_negative() {
            neg += 1;
        }
    }
    (pos, neg)
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut instances = 0;
    for t in 1..=5usize {
        for k in 1..=t {
            for trial in 0..6 {
                let sets: Vec<Vec<Vec<Rational>>> = (0..k)
                    .map(|_| {
                        let size = rng.gen_range(1..=30);
                        (0..size).map(|_| (0..t).map(|_| ratio(rng.gen_range(-12..=12), rng.gen_range(1..=3))).collect()).collect()
                    })
                    .collect();
                let h = discrete_ham_sandwich(&sets, t, &SearchOptions { seed: trial, ..SearchOptions::default() })
                    .map_err(|e| format!("t={t} k={k} trial {trial}: {e}"))?;
                check(h.normal.iter().any(|c| !c.is_zero()), || format!("t={t} k={k}: degenerate hyperplane"))?;
                for s in &sets {
                    let (pos, neg) = strict_sides(&h, s);
                    check(2 * pos <= s.len() && 2 * neg <= s.len(), || {
                        format!("t={t} k={k} trial {trial}: {pos}+/{neg}- of {}", s.len())
                    })?;
                }
                instances += 1;
            }
        }
    }
    Ok(format!("{instances} instances bisected, 0 failures"))
}

fn criterion_6() -> Outcome {
    let mut lines = Vec::new();
    for name in ["plane", "circle", "twisted-cubic"] {
        let v = fixtures::variety(name).unwrap();
        for size in [64usize, 128] {
            let pts = v.sample_points(size).unwrap();
            check(pts.len() == size, || format!("{name}: only {} sample points", pts.len()))?;
            let (chain, report) = partition(&v, &pts, 4, &Constants::default()).map_err(|e| format!("{name} {size}: {e}"))?;
            check(chain.rounds.len() == report.rounds.len(), || format!("{name} {size}: chain and report disagree"))?;
            for i in 1..=chain.rounds.len() {
                let mut census: BTreeMap<Vec<bool>, usize> = BTreeMap::new();
                for p in &pts {
                    let vals: Vec<Rational> = chain.rounds[..i].iter().map(|g| g.eval(&p.0)).collect();
                    if vals.iter().all(|x| !x.is_zero()) {
                        *census.entry(vals.iter().map(|x| x.is_positive()).collect()).or_insert(0) += 1;
                    }
                }
                let bound = size.div_ceil(1 << i);
                let max = census.values().copied().max().unwrap_or(0);
                check(max <= bound, || format!("{name} {size} round {i}: class of {max} > {bound}"))?;
                let mut ours: Vec<usize> = census.values().copied().collect();
                let mut theirs: Vec<usize> = report.rounds[i - 1].census.values().copied().collect();
                ours.sort();
                theirs.sort();
                check(ours == theirs, || format!("{name} {size} round {i}: census mismatch"))?;
            }
            lines.push(format!("{name}/{size}: {} rounds, degree {}", chain.rounds.len(), chain.total_degree()));
        }
    }
    Ok(format!("M=4; {}", lines.join("; ")))
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut proper = 0;
    let mut tried = 0;
    while proper < 50 {
        tried += 1;
        check(tried < 1000, || "too few proper pairs".into())?;
        let n = rng.gen_range(2..=3);
        let (f_deg, f_terms) = (rng.gen_range(1..=3), rng.gen_range(2..=4));
        let f = random_poly(&mut rng, n, f_deg, f_terms);
        let (g_deg, g_terms) = (rng.gen_range(1..=3), rng.gen_range(2..=4));
        let g = random_poly(&mut rng, n, g_deg, g_terms);
        if f.is_constant() || g.is_constant() {
            continue;
        }
        let ideal = Ideal::new(n, vec![f.clone(), g.clone()]).unwrap();
        if ideal.is_unit().map_err(|e| e.to_string())? {
            continue;
        }
        let (_, degree, _) = ideal.dimension_and_degree().map_err(|e| format!("{f}, {g}: {e}"))?;
        let bound = (f.total_degree().unwrap() * g.total_degree().unwrap()) as u64;
        check(degree <= bound, || format!("({f}, {g}): degree {degree} > {bound}"))?;
        proper += 1;
    }
    Ok(format!("{proper} proper pairs, 0 violations"))
}

fn combos(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Some `k` rows and `b` columns forming an all-true block.
fn brute_witness(m: &[Vec<bool>], cols: usize, k: usize, b: usize) -> Option<(Vec<usize>, Vec<usize>)> {
    for rows in combos(m.len(), k) {
        let common: Vec<usize> = (0..cols).filter(|&c| rows.iter().all(|&r| m[r][c])).collect();
        if common.len() >= b {
            return Some((rows, common[..b].to_vec()));
        }
    }
    None
}

fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Vec<Vec<bool>> {
    let density = rng.gen_range(0.1..0.8);
    (0..rows).map(|_| (0..cols).map(|_| rng.gen_bool(density)).collect()).collect()
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut structures = 0;
    let margins = |m: &[Vec<bool>], cols: usize| -> Result<(), String> {
        let rows: usize = m.iter().map(|r| r.iter().filter(|&&x| x).count()).sum();
        let by_col: usize = (0..cols).map(|c| m.iter().filter(|r| r[c]).count()).sum();
        check(rows == by_col && count_matrix(m, cols) == rows as u64, || "marginal sums differ".into())
    };
    let mut freeness_checks = 0;
    for _ in 0..120 {
        let (rows, cols) = (rng.gen_range(1..=12), rng.gen_range(1..=12));
        let m = random_matrix(&mut rng, rows, cols);
        margins(&m, cols)?;
        structures += 1;
        for k in 1..=3 {
            for b in 1..=3 {
                let lib = check_kb_free_matrix(&m, cols, k, b, 3).map_err(|e| e.to_string())?;
                let brute = brute_witness(&m, cols, k, b);
                check(lib.free == brute.is_none(), || format!("({k},{b})-freeness disagrees on {rows}x{cols}"))?;
                freeness_checks += 1;
            }
        }
    }
    let mut kst_checks = 0;
    for k in 1..=3usize {
        for b in 1..=2usize {
            for _ in 0..100 {
                let (rows, cols) = (rng.gen_range(k..=12), rng.gen_range(b..=12));
                let mut m = random_matrix(&mut rng, rows, cols);
                while let Some((rs, cs)) = brute_witness(&m, cols, k, b) {
                    m[rs[rng.gen_range(0..k)]][cs[rng.gen_range(0..b)]] = false;
                }
                margins(&m, cols)?;
                structures += 1;
                let incidences = count_matrix(&m, cols);
                let bound = kst_bound(rows as u64, cols as u64, k as u64, b as u64).map_err(|e| e.to_string())?;
                check(q(incidences as i64) <= bound, || format!("({k},{b}) {rows}x{cols}: {incidences} > {bound}"))?;
                kst_checks += 1;
            }
        }
    }
    for k in 2..=6u64 {
        for d in 1..=6u64 {
            let a = Rational::new(((k * (d - 1)) as i64).into(), ((d * k - 1) as i64).into());
            let bt = Rational::new(((d * (k - 1)) as i64).into(), ((d * k - 1) as i64).into());
            check(alpha(k, d) == a && beta(k, d) == bt, || format!("exponents differ at k={k} d={d}"))?;
            let one = Rational::one();
            let gap = &one - &a;
            check(gap == &bt / q(d as i64), || format!("1-a != b/d at k={k} d={d}"))?;
            check(&bt / &gap == q(d as i64), || format!("b/(1-a) != d at k={k} d={d}"))?;
            check((&one - &bt) / &gap == ratio(d as i64 - 1, k as i64 - 1), || format!("third identity at k={k} d={d}"))?;
        }
    }
    Ok(format!(
        "{structures} marginal identities, {freeness_checks} freeness checks match enumeration, {kst_checks} KST checks, 30 exponent cells"
    ))
}

fn criterion_9() -> Outcome {
    let cases: Vec<(&str, AbstractStructure, &str, usize, usize)> = vec![
        ("fano", designs::fano(), "twisted-cubic", 2, 2),
        ("affine-plane-3", designs::affine_plane_3(), "plane", 2, 2),
        ("sqs8", designs::sqs8(), "space", 3, 2),
        ("disjoint-pairs", designs::disjoint_pairs(3), "parabola", 2, 2),
    ];
    let mut lines = Vec::new();
    for (name, x, variety, k, b) in cases {
        let v = fixtures::variety(variety).unwrap();
        let r = sharp_construction(&x, &v, k, b, &SharpOptions::default()).map_err(|e| format!("{name}: {e}"))?;
        let st = &r.structure;
        let expected = &r.regularized.structure;
        check(st.points.len() == expected.n_points && st.surfaces.len() == expected.members.len(), || {
            format!("{name}: shape differs")
        })?;
        let mut recount = 0;
        for (j, (surface, member)) in st.surfaces.iter().zip(&expected.members).enumerate() {
            for (i, p) in st.points.iter().enumerate() {
                let on = surface.eval(&p.0).is_zero();
                check(on == member.contains(&i), || format!("{name}: point {i} vs member {j}"))?;
                recount += on as u64;
            }
            check(surface.total_degree().unwrap_or(0) <= r.degree_bound, || format!("{name}: member {j} too high degree"))?;
        }
        check(recount == r.incidences, || format!("{name}: {} incidences reported, {recount} counted", r.incidences))?;
        let matrix: Vec<Vec<bool>> = (0..st.points.len()).map(|i| (0..st.surfaces.len()).map(|j| expected.members[j].contains(&i)).collect()).collect();
        check(brute_witness(&matrix, st.surfaces.len(), k, b).is_none(), || format!("{name}: not ({k},{b})-free"))?;
        check(r.main_term_ratio > 0.0, || format!("{name}: ratio {}", r.main_term_ratio))?;
        lines.push(format!("{name}: D={} ratio {:.3}", r.degree_bound, r.main_term_ratio));
    }
    Ok(lines.join("; "))
}

fn criterion_10() -> Outcome {
    let square = |a: i64| GridBox { lower: vec![q(-a), q(-a)], upper: vec![q(a), q(a)] };
    let cases = [
        ("circle", "x0^2 + x1^2 - 1", square(2), Some(1), 2),
        ("two circles", "(x0^2 + 3*x0 + x1^2 + 5/4)*(x0^2 - 3*x0 + x1^2 + 5/4)", square(3), None, 3),
        ("cross", "x0*x1", square(1), None, 4),
    ];
    let mut lines = Vec::new();
    for (name, text, bx, zero_set, complement) in cases {
        let p = parse_product(text);
        let est = estimate_components_grid(&p, &bx, 64).map_err(|e| format!("{name}: {e}"))?;
        let stable = (est.fine.zero_set, est.fine.complement) == (est.coarse.zero_set, est.coarse.complement);
        check(!est.resolution_too_coarse && stable, || {
            format!("{name}: unstable {:?}", est)
        })?;
        check(est.fine.complement == complement, || format!("{name}: complement {}", est.fine.complement))?;
        if let Some(z) = zero_set {
            check(est.fine.zero_set == z, || format!("{name}: zero set {}", est.fine.zero_set))?;
        }
        lines.push(format!("{name}: {}/{}", est.fine.zero_set, est.fine.complement));
    }
    Ok(lines.join("; "))
}

/// Parses `(a)*(b)*...` by multiplying the parenthesised factors.
fn parse_product(text: &str) -> Polynomial {
    text.split(")*(")
        .map(|f| Polynomial::parse(f.trim_matches(|c| c == '(' || c == ')'), 2).unwrap())
        .fold(Polynomial::one(2), |acc, f| &acc * &f)
}

fn criterion_11() -> Outcome {
    let dir = std::path::PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../scenarios");
    let mut count = 0;
    for entry in std::fs::read_dir(&dir).map_err(|e| e.to_string())? {
        let path = entry.unwrap().path();
        let text = std::fs::read_to_string(&path).unwrap();
        for seed in [None, Some(11)] {
            let ov = Overrides { seed, ..Overrides::default() };
            let a = run(Scenario::parse(&text).unwrap(), &ov).to_json();
            let b = run(Scenario::parse(&text).unwrap(), &ov).to_json();
            check(a == b, || format!("{} differs between runs", path.display()))?;
            count += 1;
        }
    }
    Ok(format!("{count} scenario runs byte-identical"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome, Option<Duration>); 11] = [
        ("Hilbert function matches evaluation rank", criterion_1, Some(Duration::from_secs(30))),
        ("Groebner bases sound, membership correct", criterion_2, Some(Duration::from_secs(60))),
        ("delta profiles on fixtures", criterion_3, None),
        ("Siegel polynomials minimal", criterion_4, Some(Duration::from_secs(120))),
        ("ham-sandwich cuts exact", criterion_5, None),
        ("partition classes halve each round", criterion_6, None),
        ("intersection degree within Bezout bound", criterion_7, None),
        ("incidence counting, freeness and bounds", criterion_8, None),
        ("sharp constructions reproduce their input", criterion_9, None),
        ("grid component counts", criterion_10, None),
        ("reports deterministic", criterion_11, None),
    ];
    let mut failed = 0;
    for (i, (name, f, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let outcome = match (outcome, limit) {
            (Ok(_), Some(l)) if elapsed > *l => Err(format!("took {elapsed:.1?}, limit {l:?}")),
            (o, _) => o,
        };
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name} ({detail}) [{elapsed:.1?}]", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why} [{elapsed:.1?}]", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
