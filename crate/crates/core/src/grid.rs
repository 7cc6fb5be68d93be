//! Approximate connected-component counts on a regular grid.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::rational::{to_f64, Rational};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridBox {
    #[serde(with = "crate::serde_rational::vec")]
    pub lower: Vec<Rational>,
    #[serde(with = "crate::serde_rational::vec")]
    pub upper: Vec<Rational>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridCount {
    pub resolution: usize,
    pub complement: usize,
    pub zero_set: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridEstimate {
    pub fine: GridCount,
    pub coarse: GridCount,
    /// The two resolutions disagree.
    pub resolution_too_coarse: bool,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            self.0[a] = b;
        }
    }
}

fn index(coords: &[usize], r: usize) -> usize {
    coords.iter().rev().fold(0, |acc, &c| acc * r + c)
}

fn coords_of(mut i: usize, r: usize, n: usize) -> Vec<usize> {
    (0..n)
        .map(|_| {
            let c = i % r;
            i /= r;
            c
        })
        .collect()
}

/// Counts at one resolution: sign regions of cell centers joined across
/// faces, and clusters of cells whose corners change sign joined across
/// faces, edges and corners.
pub fn count_at(p: &Polynomial, bx: &GridBox, resolution: usize) -> Result<GridCount> {
    let n = p.n_vars();
    if n == 0 || n > 3 {
        return Err(Error::PreconditionViolated(format!("grid counting needs 1 to 3 variables, got {n}")));
    }
    if bx.lower.len() != n || bx.upper.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: bx.lower.len() });
    }
    if resolution == 0 || bx.lower.iter().zip(&bx.upper).any(|(a, b)| a >= b) {
        return Err(Error::PreconditionViolated("empty box or zero resolution".into()));
    }
    let lo: Vec<f64> = bx.lower.iter().map(to_f64).collect();
    let step: Vec<f64> = bx.lower.iter().zip(&bx.upper).map(|(a, b)| (to_f64(b) - to_f64(a)) / resolution as f64).collect();
    let r = resolution;
    let cells = r.pow(n as u32);
    let sign = |v: f64| if v > 0.0 { 1i8 } else if v < 0.0 { -1 } else { 0 };

    // Corner values on the (r+1)^n vertex lattice.
    let rv = r + 1;
    let vertex: Vec<i8> = (0..rv.pow(n as u32))
        .map(|i| {
            let c = coords_of(i, rv, n);
            let x: Vec<f64> = (0..n).map(|k| lo[k] + step[k] * c[k] as f64).collect();
            sign(p.eval_f64(&x))
        })
        .collect();
    let center: Vec<i8> = (0..cells)
        .map(|i| {
            let c = coords_of(i, r, n);
            let x: Vec<f64> = (0..n).map(|k| lo[k] + step[k] * (c[k] as f64 + 0.5)).collect();
            sign(p.eval_f64(&x))
        })
        .collect();
    let crossing: Vec<bool> = (0..cells)
        .map(|i| {
            let c = coords_of(i, r, n);
            let (mut pos, mut neg, mut zero) = (false, false, false);
            for corner in 0..(1usize << n) {
                let v: Vec<usize> = (0..n).map(|k| c[k] + ((corner >> k) & 1)).collect();
                match vertex[index(&v, rv)] {
                    1 => pos = true,
                    -1 => neg = true,
                    _ => zero = true,
                }
            }
            zero || (pos && neg)
        })
        .collect();

    let mut uf_c = UnionFind((0..cells).collect());
    let mut uf_z = UnionFind((0..cells).collect());
    let offsets: Vec<Vec<i64>> = (0..3usize.pow(n as u32))
        .map(|i| (0..n).map(|k| ((i / 3usize.pow(k as u32)) % 3) as i64 - 1).collect::<Vec<i64>>())
        .filter(|o| o.iter().any(|&x| x != 0))
        .collect();
    for i in 0..cells {
        let c = coords_of(i, r, n);
        for o in &offsets {
            let nb: Option<Vec<usize>> = c
                .iter()
                .zip(o)
                .map(|(&a, &d)| {
                    let v = a as i64 + d;
                    (v >= 0 && v < r as i64).then_some(v as usize)
                })
                .collect();
            let Some(nb) = nb else { continue };
            let j = index(&nb, r);
            let face = o.iter().filter(|&&x| x != 0).count() == 1;
            if face && center[i] != 0 && center[i] == center[j] {
                uf_c.union(i, j);
            }
            if crossing[i] && crossing[j] {
                uf_z.union(i, j);
            }
        }
    }
    let mut roots_c: Vec<usize> = (0..cells).filter(|&i| center[i] != 0).map(|i| uf_c.find(i)).collect();
    roots_c.sort_unstable();
    roots_c.dedup();
    let mut roots_z: Vec<usize> = (0..cells).filter(|&i| crossing[i]).map(|i| uf_z.find(i)).collect();
    roots_z.sort_unstable();
    roots_z.dedup();
    Ok(GridCount { resolution, complement: roots_c.len(), zero_set: roots_z.len() })
}

/// Counts at `resolution` and at half of it, flagging disagreement.
pub fn estimate_components_grid(p: &Polynomial, bx: &GridBox, resolution: usize) -> Result<GridEstimate> {
    let fine = count_at(p, bx, resolution)?;
    let coarse = count_at(p, bx, (resolution / 2).max(1))?;
    let resolution_too_coarse = fine.complement != coarse.complement || fine.zero_set != coarse.zero_set;
    Ok(GridEstimate { fine, coarse, resolution_too_coarse })
}
