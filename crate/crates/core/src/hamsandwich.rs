//! Discrete ham-sandwich cuts: one hyperplane leaving at most half of every
//! finite set strictly on each side.
//!
//! Any valid cut can be moved, without losing validity, until it passes
//! through `t` affinely independent input points. The search therefore
//! pins `t - 1` points and sweeps the remaining pencil of hyperplanes. A
//! floating point sweep proposes pencils; every accepted cut is recomputed
//! and recounted in exact arithmetic.

use num_traits::{Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{integer_normalize, nullspace, rank_mod_p, Matrix};
use crate::rational::{rat, to_f64, Rational};

/// `normal · y + offset = 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Hyperplane {
    #[serde(with = "crate::serde_rational::vec")]
    pub normal: Vec<Rational>,
    #[serde(with = "crate::serde_rational")]
    pub offset: Rational,
}

impl Hyperplane {
    fn from_vector(v: &[Rational]) -> Hyperplane {
        let v = integer_normalize(v);
        let t = v.len() - 1;
        Hyperplane { normal: v[..t].to_vec(), offset: v[t].clone() }
    }

    pub fn value(&self, y: &[Rational]) -> Rational {
        self.normal.iter().zip(y).map(|(a, b)| a * b).sum::<Rational>() + &self.offset
    }

    pub fn is_trivial(&self) -> bool {
        self.normal.iter().all(|a| a.is_zero())
    }
}

/// `(strictly positive, strictly negative, on)` counts.
pub fn side_counts(h: &Hyperplane, set: &[Vec<Rational>]) -> (usize, usize, usize) {
    let mut c = (0, 0, 0);
    for y in set {
        let v = h.value(y);
        if v.is_positive() {
            c.0 += 1;
        } else if v.is_negative() {
            c.1 += 1;
        } else {
            c.2 += 1;
        }
    }
    c
}

/// Exact check that `h` bisects every set.
pub fn bisects_all(h: &Hyperplane, sets: &[Vec<Vec<Rational>>]) -> bool {
    !h.is_trivial()
        && sets.iter().all(|s| {
            let (p, n, _) = side_counts(h, s);
            2 * p <= s.len() && 2 * n <= s.len()
        })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchOptions {
    pub seed: u64,
    /// Pencils swept before giving up.
    pub max_pencils: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { seed: 0, max_pencils: 200_000 }
    }
}

struct Pt {
    set: usize,
    exact: Vec<Rational>,
    approx: Vec<f64>,
}

fn augmented(y: &[Rational]) -> Vec<Rational> {
    let mut r = y.to_vec();
    r.push(rat(1));
    r
}

fn dot(a: &[Rational], y: &[Rational]) -> Rational {
    let t = y.len();
    a[..t].iter().zip(y).map(|(x, z)| x * z).sum::<Rational>() + &a[t]
}

pub fn discrete_ham_sandwich(sets: &[Vec<Vec<Rational>>], t: usize, opts: &SearchOptions) -> Result<Hyperplane> {
    if sets.len() > t {
        return Err(Error::PreconditionViolated(format!("{} sets in dimension {t}", sets.len())));
    }
    if t == 0 {
        return Err(Error::PreconditionViolated("dimension zero".into()));
    }
    if let Some(p) = sets.iter().flatten().find(|p| p.len() != t) {
        return Err(Error::DimensionMismatch { expected: t, found: p.len() });
    }
    let total: usize = sets.iter().map(|s| s.len()).sum();
    if total == 0 {
        let mut v = vec![rat(0); t + 1];
        v[0] = rat(1);
        return Ok(Hyperplane::from_vector(&v));
    }

    // Through half of every set at once, when there is room.
    let half: usize = sets.iter().map(|s| s.len().div_ceil(2)).sum();
    let all_rows: Matrix = sets.iter().flatten().map(|y| augmented(y)).collect();
    let try_rows = |rows: Matrix| -> Option<Hyperplane> {
        for v in nullspace(&rows, t + 1) {
            let h = Hyperplane::from_vector(&v);
            if bisects_all(&h, sets) {
                return Some(h);
            }
        }
        None
    };
    if half <= t {
        let rows = sets.iter().flat_map(|s| s[..s.len().div_ceil(2)].iter().map(|y| augmented(y))).collect();
        if let Some(h) = try_rows(rows) {
            return Ok(h);
        }
    }
    // Points in a proper affine subspace: a hyperplane through all of them.
    if rank_mod_p(&all_rows) != Some(t + 1) {
        if let Some(h) = try_rows(all_rows) {
            return Ok(h);
        }
    }
    if t == 1 {
        return one_dimensional(sets);
    }

    let pts = flatten(sets, t);
    let sizes: Vec<usize> = sets.iter().map(|s| s.len()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let by_set: Vec<Vec<usize>> =
        (0..sets.len()).map(|i| (0..pts.len()).filter(|&p| pts[p].set == i).collect()).collect();
    let mut tried = std::collections::HashSet::new();
    for attempt in 0..opts.max_pencils {
        let alloc = allocate(&sizes, t - 1, attempt, &mut rng);
        let mut pins = Vec::with_capacity(t - 1);
        for (i, &c) in alloc.iter().enumerate() {
            let mut pool = by_set[i].clone();
            pool.shuffle(&mut rng);
            pins.extend(pool.into_iter().take(c));
        }
        pins.sort_unstable();
        if !tried.insert(pins.clone()) {
            continue;
        }
        if !float_sweep(&pts, &sizes, &pins, t) {
            continue;
        }
        if let Some(h) = exact_sweep(&pts, &sizes, &pins, t) {
            debug_assert!(bisects_all(&h, sets));
            return Ok(h);
        }
    }
    Err(Error::HamSandwichNotFound(format!("{} pencils tried", tried.len())))
}

fn one_dimensional(sets: &[Vec<Vec<Rational>>]) -> Result<Hyperplane> {
    // A single set on a line: cut at its median.
    let mut xs: Vec<Rational> = sets[0].iter().map(|y| y[0].clone()).collect();
    xs.sort();
    let med = xs[(xs.len() - 1) / 2].clone();
    let h = Hyperplane { normal: vec![rat(1)], offset: -med };
    if bisects_all(&h, sets) {
        Ok(h)
    } else {
        Err(Error::HamSandwichNotFound("median failed".into()))
    }
}

fn flatten(sets: &[Vec<Vec<Rational>>], t: usize) -> Vec<Pt> {
    let mut scale = vec![0f64; t];
    for y in sets.iter().flatten() {
        for (s, v) in scale.iter_mut().zip(y) {
            *s = s.max(to_f64(v).abs());
        }
    }
    let mut out = Vec::new();
    for (i, s) in sets.iter().enumerate() {
        for y in s {
            let approx = y.iter().zip(&scale).map(|(v, &c)| if c > 0.0 { to_f64(v) / c } else { 0.0 }).collect();
            out.push(Pt { set: i, exact: y.clone(), approx });
        }
    }
    out
}

fn window_probability(s: usize, c: usize) -> f64 {
    if c > s {
        return 0.0;
    }
    let free = s - c;
    // pos in [s/2 - c, s/2]
    let lo = (s as f64 / 2.0 - c as f64).ceil().max(0.0) as usize;
    let hi = s / 2;
    let mut p = 0.0;
    let mut coef = 1.0f64;
    for k in 0..=free {
        if k > 0 {
            coef = coef * (free - k + 1) as f64 / k as f64;
        }
        if k >= lo && k <= hi {
            p += coef;
        }
    }
    p / 2f64.powi(free as i32)
}

/// Distributes pins over sets greedily by the chance that a random cut in
/// the pencil balances each set. Later attempts perturb the allocation.
fn allocate(sizes: &[usize], pins: usize, attempt: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let k = sizes.len();
    let mut c = vec![0usize; k];
    let score = |i: usize, ci: usize| {
        let p = window_probability(sizes[i], ci);
        // An odd set left unpinned can still be met by the swept point.
        if p == 0.0 { 1e-3 } else { p }
    };
    for _ in 0..pins {
        let noisy = attempt > 0 && rng.gen_bool(0.3);
        let best = (0..k)
            .filter(|&i| c[i] < sizes[i])
            .max_by(|&a, &b| {
                let ga = score(a, c[a] + 1) / score(a, c[a]);
                let gb = score(b, c[b] + 1) / score(b, c[b]);
                ga.partial_cmp(&gb).unwrap().then(b.cmp(&a))
            });
        let pick = if noisy {
            let open: Vec<usize> = (0..k).filter(|&i| c[i] < sizes[i]).collect();
            open.choose(rng).copied()
        } else {
            best
        };
        match pick {
            Some(i) => c[i] += 1,
            None => break,
        }
    }
    c
}

fn float_nullspace(rows: &[Vec<f64>], cols: usize) -> Option<(Vec<f64>, Vec<f64>)> {
    let mut a: Vec<Vec<f64>> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == a.len() {
            break;
        }
        let (p, mx) = (r..a.len()).map(|i| (i, a[i][c].abs())).fold((r, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if mx < 1e-10 {
            continue;
        }
        a.swap(r, p);
        let piv = a[r][c];
        for x in a[r].iter_mut() {
            *x /= piv;
        }
        for i in 0..a.len() {
            if i != r {
                let f = a[i][c];
                if f != 0.0 {
                    for j in 0..cols {
                        a[i][j] -= f * a[r][j];
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if pivots.len() + 2 != cols {
        return None;
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    let vec_for = |f: usize| {
        let mut v = vec![0.0; cols];
        v[f] = 1.0;
        for (row, &c) in pivots.iter().enumerate() {
            v[c] = -a[row][f];
        }
        v
    };
    Some((vec_for(free[0]), vec_for(free[1])))
}

struct Tally {
    pos: Vec<usize>,
    neg: Vec<usize>,
    sizes: Vec<usize>,
    bad: usize,
}

impl Tally {
    fn new(sizes: &[usize]) -> Tally {
        Tally { pos: vec![0; sizes.len()], neg: vec![0; sizes.len()], sizes: sizes.to_vec(), bad: 0 }
    }

    fn violates(&self, i: usize) -> bool {
        2 * self.pos[i] > self.sizes[i] || 2 * self.neg[i] > self.sizes[i]
    }

    fn change(&mut self, i: usize, from: i8, to: i8) {
        let before = self.violates(i);
        match from {
            1 => self.pos[i] -= 1,
            -1 => self.neg[i] -= 1,
            _ => {}
        }
        match to {
            1 => self.pos[i] += 1,
            -1 => self.neg[i] += 1,
            _ => {}
        }
        let after = self.violates(i);
        if before && !after {
            self.bad -= 1;
        } else if !before && after {
            self.bad += 1;
        }
    }
}

/// Optimistic floating point sweep: near-ties count as on the cut.
fn float_sweep(pts: &[Pt], sizes: &[usize], pins: &[usize], t: usize) -> bool {
    let rows: Vec<Vec<f64>> = pins
        .iter()
        .map(|&p| {
            let mut r = pts[p].approx.clone();
            r.push(1.0);
            r
        })
        .collect();
    let Some((h1, h2)) = float_nullspace(&rows, t + 1) else { return false };
    let eval = |h: &[f64], y: &[f64]| h[..t].iter().zip(y).map(|(a, b)| a * b).sum::<f64>() + h[t];
    let mut events: Vec<(f64, usize, i8)> = Vec::new();
    let mut tally = Tally::new(sizes);
    let pi = std::f64::consts::PI;
    for (idx, p) in pts.iter().enumerate() {
        if pins.contains(&idx) {
            continue;
        }
        let g1 = eval(&h1, &p.approx);
        let g2 = eval(&h2, &p.approx);
        if g1.abs() < 1e-12 && g2.abs() < 1e-12 {
            continue;
        }
        let phi = g2.atan2(g1);
        let mut theta = (phi + pi / 2.0).rem_euclid(pi);
        if theta >= pi - 1e-15 {
            theta = 0.0;
        }
        // Sign just after the zero.
        let d = -theta.sin() * g1 + theta.cos() * g2;
        let after: i8 = if d > 0.0 { 1 } else { -1 };
        events.push((theta, p.set, after));
        tally.change(p.set, 0, -after);
    }
    events.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    if tally.bad == 0 {
        return true;
    }
    let mut i = 0;
    while i < events.len() {
        let mut j = i;
        while j < events.len() && events[j].0 - events[i].0 < 1e-9 {
            tally.change(events[j].1, -events[j].2, 0);
            j += 1;
        }
        if tally.bad == 0 {
            return true;
        }
        for e in &events[i..j] {
            tally.change(e.1, 0, e.2);
        }
        if tally.bad == 0 {
            return true;
        }
        i = j;
    }
    false
}

/// Exact sweep of the pencil `e1 + λ e2` (and `e2` itself).
fn exact_sweep(pts: &[Pt], sizes: &[usize], pins: &[usize], t: usize) -> Option<Hyperplane> {
    let rows: Matrix = pins.iter().map(|&p| augmented(&pts[p].exact)).collect();
    let ns = nullspace(&rows, t + 1);
    if ns.len() != 2 {
        return None;
    }
    let (e1, e2) = (&ns[0], &ns[1]);
    let gs: Vec<(Rational, Rational)> = pts.iter().map(|p| (dot(e1, &p.exact), dot(e2, &p.exact))).collect();
    let mut lambdas: Vec<Rational> = gs.iter().filter(|(_, g2)| !g2.is_zero()).map(|(g1, g2)| -(g1 / g2)).collect();
    lambdas.sort();
    lambdas.dedup();
    let mut candidates: Vec<Option<Rational>> = vec![None];
    if let (Some(lo), Some(hi)) = (lambdas.first(), lambdas.last()) {
        candidates.push(Some(lo - rat(1)));
        candidates.push(Some(hi + rat(1)));
    } else {
        candidates.push(Some(rat(0)));
    }
    for w in lambdas.windows(2) {
        candidates.push(Some((&w[0] + &w[1]) / rat(2)));
    }
    candidates.extend(lambdas.iter().cloned().map(Some));
    for cand in candidates {
        let mut pos = vec![0usize; sizes.len()];
        let mut neg = vec![0usize; sizes.len()];
        for (p, (g1, g2)) in pts.iter().zip(&gs) {
            let v = match &cand {
                None => g2.clone(),
                Some(l) => g1 + l * g2,
            };
            if v.is_positive() {
                pos[p.set] += 1;
            } else if v.is_negative() {
                neg[p.set] += 1;
            }
        }
        if (0..sizes.len()).all(|i| 2 * pos[i] <= sizes[i] && 2 * neg[i] <= sizes[i]) {
            let v: Vec<Rational> = match &cand {
                None => e2.clone(),
                Some(l) => e1.iter().zip(e2).map(|(a, b)| a + l * b).collect(),
            };
            let h = Hyperplane::from_vector(&v);
            if !h.is_trivial() {
                return Some(h);
            }
        }
    }
    None
}
