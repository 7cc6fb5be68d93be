//! Point/hypersurface incidence structures and `(k,b)`-freeness.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partition::{self, PartitionReport};
use crate::poly::{Polynomial, RationalPoint};
use crate::profile::Constants;
use crate::variety::Variety;

/// Largest `b` for which freeness is checked by subset enumeration.
pub const DEFAULT_MAX_B: usize = 3;

/// Members of `Y` as sets of indices into `X = {0, .., n_points - 1}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbstractStructure {
    pub n_points: usize,
    pub members: Vec<Vec<usize>>,
}

impl AbstractStructure {
    pub fn new(n_points: usize, mut members: Vec<Vec<usize>>) -> Result<Self> {
        for m in &mut members {
            m.sort_unstable();
            m.dedup();
            if let Some(&x) = m.last() {
                if x >= n_points {
                    return Err(Error::PreconditionViolated(format!("index {x} out of range for {n_points} points")));
                }
            }
        }
        Ok(AbstractStructure { n_points, members })
    }

    /// Rows are points, columns are members.
    pub fn matrix(&self) -> Vec<Vec<bool>> {
        let mut m = vec![vec![false; self.members.len()]; self.n_points];
        for (j, y) in self.members.iter().enumerate() {
            for &x in y {
                m[x][j] = true;
            }
        }
        m
    }

    pub fn incidences(&self) -> u64 {
        self.members.iter().map(|y| y.len() as u64).sum()
    }

    /// One line per member, space-separated point indices; `-` for an
    /// empty member.
    pub fn render(&self) -> String {
        self.members
            .iter()
            .map(|y| if y.is_empty() { "-".into() } else { y.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ") })
            .collect::<Vec<_>>()
            .join("\n")
    }
}

/// Parses the adjacency-list format: one line per member listing point
/// indices, or `-` for a member with no points. Blank lines and `#`
/// comments are ignored. The point count is
/// one more than the largest index unless `n_points` is given.
pub fn parse_adjacency(text: &str, n_points: Option<usize>) -> Result<AbstractStructure> {
    let mut members = Vec::new();
    let mut offset = 0;
    for line in text.split_inclusive('\n') {
        let body = line.split('#').next().unwrap_or("");
        if body.trim() == "-" {
            members.push(Vec::new());
        } else if !body.trim().is_empty() {
            let mut member = Vec::new();
            let mut col = 0;
            for tok in body.split(|c: char| c.is_ascii_whitespace()) {
                if !tok.is_empty() {
                    let x: usize = tok.parse().map_err(|_| Error::Parse {
                        position: offset + col,
                        message: format!("expected a point index, found {tok:?}"),
                    })?;
                    member.push(x);
                }
                col += tok.len() + 1;
            }
            members.push(member);
        }
        offset += line.len();
    }
    let max = match members.iter().flatten().max() {
        None => 0,
        Some(&x) => x
            .checked_add(1)
            .ok_or_else(|| Error::Parse { position: text.len(), message: format!("index {x} is too large") })?,
    };
    let n = n_points.unwrap_or(max);
    if n < max {
        return Err(Error::Parse { position: text.len(), message: format!("index {} exceeds point count {n}", max - 1) });
    }
    AbstractStructure::new(n, members)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IncidenceStructure {
    pub points: Vec<RationalPoint>,
    pub surfaces: Vec<Polynomial>,
    pub degrees: Vec<u32>,
    /// `matrix[s][t]` is true iff surface `t` vanishes at point `s`.
    pub matrix: Vec<Vec<bool>>,
    pub deg_t: u64,
}

impl IncidenceStructure {
    pub fn build(points: Vec<RationalPoint>, surfaces: Vec<Polynomial>) -> Result<Self> {
        let n = points.first().map(|p| p.dim());
        for p in &points {
            if Some(p.dim()) != n {
                return Err(Error::DimensionMismatch { expected: n.unwrap_or(0), found: p.dim() });
            }
        }
        let mut matrix = Vec::with_capacity(points.len());
        for p in &points {
            let mut row = Vec::with_capacity(surfaces.len());
            for t in &surfaces {
                row.push(t.evaluate(p)?.is_zero());
            }
            matrix.push(row);
        }
        let degrees: Vec<u32> = surfaces.iter().map(|t| t.total_degree().unwrap_or(0)).collect();
        let deg_t = degrees.iter().map(|&d| d as u64).sum();
        Ok(IncidenceStructure { points, surfaces, degrees, matrix, deg_t })
    }

    /// The bipartite graph as an abstract structure.
    pub fn to_abstract(&self) -> AbstractStructure {
        let members = (0..self.surfaces.len())
            .map(|j| (0..self.points.len()).filter(|&i| self.matrix[i][j]).collect())
            .collect();
        AbstractStructure { n_points: self.points.len(), members }
    }
}

/// `I(S,T)`, counted along both margins.
pub fn count_incidences(s: &IncidenceStructure) -> u64 {
    count_matrix(&s.matrix, s.surfaces.len())
}

pub fn count_matrix(matrix: &[Vec<bool>], columns: usize) -> u64 {
    let by_point: u64 = matrix.iter().map(|r| r.iter().filter(|&&b| b).count() as u64).sum();
    let by_surface: u64 = (0..columns).map(|j| matrix.iter().filter(|r| r[j]).count() as u64).sum();
    assert_eq!(by_point, by_surface, "marginal sums disagree");
    by_point
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Freeness {
    pub free: bool,
    /// `k` points lying on each of `b` members, when not free.
    pub witness: Option<(Vec<usize>, Vec<usize>)>,
}

fn combinations(n: usize, r: usize, mut f: impl FnMut(&[usize]) -> bool) {
    if r > n {
        return;
    }
    let mut idx: Vec<usize> = (0..r).collect();
    loop {
        if !f(&idx) {
            return;
        }
        let Some(i) = (0..r).rev().find(|&i| idx[i] != i + n - r) else { return };
        idx[i] += 1;
        for j in i + 1..r {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Whether no `k` points lie on `b` distinct members (columns).
pub fn check_kb_free_matrix(matrix: &[Vec<bool>], columns: usize, k: usize, b: usize, max_b: usize) -> Result<Freeness> {
    if k == 0 || b == 0 {
        return Err(Error::PreconditionViolated("k and b must be positive".into()));
    }
    if b > max_b {
        return Err(Error::BudgetExceeded(format!("b = {b} exceeds the enumeration limit {max_b}")));
    }
    let words = matrix.len().div_ceil(64);
    let cols: Vec<Vec<u64>> = (0..columns)
        .map(|j| {
            let mut w = vec![0u64; words];
            for (i, r) in matrix.iter().enumerate() {
                if r[j] {
                    w[i / 64] |= 1 << (i % 64);
                }
            }
            w
        })
        .collect();
    let mut witness = None;
    combinations(columns, b, |subset| {
        let mut acc = cols[subset[0]].clone();
        for &j in &subset[1..] {
            for (a, c) in acc.iter_mut().zip(&cols[j]) {
                *a &= c;
            }
        }
        let common: usize = acc.iter().map(|w| w.count_ones() as usize).sum();
        if common >= k {
            let pts: Vec<usize> = (0..matrix.len()).filter(|&i| acc[i / 64] >> (i % 64) & 1 == 1).take(k).collect();
            witness = Some((pts, subset.to_vec()));
            return false;
        }
        true
    });
    Ok(Freeness { free: witness.is_none(), witness })
}

pub fn check_kb_free(s: &IncidenceStructure, k: usize, b: usize) -> Result<Freeness> {
    check_kb_free_matrix(&s.matrix, s.surfaces.len(), k, b, DEFAULT_MAX_B)
}

pub fn check_kb_free_abstract(s: &AbstractStructure, k: usize, b: usize) -> Result<Freeness> {
    check_kb_free_matrix(&s.matrix(), s.members.len(), k, b, DEFAULT_MAX_B)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BucketReport {
    pub partition: PartitionReport,
    /// Sign class of the point to the incidences it takes part in.
    pub buckets: std::collections::BTreeMap<String, u64>,
    /// Incidences at points on the zero set of the partitioning polynomial.
    pub on_zero_set: u64,
    pub in_cells: u64,
    pub total: u64,
}

/// Partitions the points of `s` relative to `v` and buckets incidences by
/// the sign class of their point.
pub fn partitioned_incidence_report(
    v: &Variety,
    s: &IncidenceStructure,
    big_m: u64,
    constants: &Constants,
) -> Result<BucketReport> {
    let (chain, partition) = partition::partition(v, &s.points, big_m, constants)?;
    let mut buckets = std::collections::BTreeMap::new();
    let mut on_zero_set = 0;
    for (i, p) in s.points.iter().enumerate() {
        let inc = s.matrix[i].iter().filter(|&&x| x).count() as u64;
        let mut key = String::new();
        let mut zero = false;
        for h in &chain.rounds {
            let val = h.eval(&p.0);
            if val.is_zero() {
                zero = true;
                break;
            }
            key.push(if val > Zero::zero() { '+' } else { '-' });
        }
        if zero {
            on_zero_set += inc;
        } else {
            *buckets.entry(key).or_insert(0) += inc;
        }
    }
    let in_cells = buckets.values().sum();
    Ok(BucketReport { partition, buckets, on_zero_set, in_cells, total: count_incidences(s) })
}

/// Bundled abstract structures.
pub mod designs {
    use super::AbstractStructure;

    /// Seven points, seven lines of three.
    pub fn fano() -> AbstractStructure {
        let members = (0..7).map(|i| vec![i, (i + 1) % 7, (i + 3) % 7]).collect();
        AbstractStructure::new(7, members).unwrap()
    }

    /// The affine plane of order three: nine points, twelve lines.
    pub fn affine_plane_3() -> AbstractStructure {
        let pt = |x: usize, y: usize| 3 * (x % 3) + (y % 3);
        let mut members = Vec::new();
        for c in 0..3 {
            members.push((0..3).map(|y| pt(c, y)).collect());
        }
        for slope in 0..3 {
            for c in 0..3 {
                members.push((0..3).map(|x| pt(x, slope * x + c)).collect());
            }
        }
        AbstractStructure::new(9, members).unwrap()
    }

    /// Steiner quadruple system on eight points: the planes of AG(3,2).
    pub fn sqs8() -> AbstractStructure {
        let mut members = Vec::new();
        for a in 0..8usize {
            for b in a + 1..8 {
                for c in b + 1..8 {
                    let d = a ^ b ^ c;
                    if d > c {
                        members.push(vec![a, b, c, d]);
                    }
                }
            }
        }
        AbstractStructure::new(8, members).unwrap()
    }

    /// `pairs` disjoint two-element members.
    pub fn disjoint_pairs(pairs: usize) -> AbstractStructure {
        AbstractStructure::new(2 * pairs, (0..pairs).map(|i| vec![2 * i, 2 * i + 1]).collect()).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::poly;

    #[test]
    fn collinear_points() {
        let pts = (0..3).map(|i| RationalPoint::from_ints(&[i, 2 * i])).collect();
        let s = IncidenceStructure::build(pts, vec![poly("x1 - 2*x0", 2)]).unwrap();
        assert_eq!(count_incidences(&s), 3);
        let empty = IncidenceStructure::build(vec![RationalPoint::from_ints(&[0, 0])], vec![]).unwrap();
        assert_eq!(count_incidences(&empty), 0);
    }

    #[test]
    fn shared_line_degeneracy() {
        // Two planes through the x0-axis, three points on it.
        let pts = (0..3).map(|i| RationalPoint::from_ints(&[i, 0, 0])).collect();
        let s = IncidenceStructure::build(pts, vec![poly("x1", 3), poly("x2", 3)]).unwrap();
        assert!(check_kb_free(&s, 3, 3).unwrap().free);
        let f = check_kb_free(&s, 3, 2).unwrap();
        assert!(!f.free);
        assert_eq!(f.witness, Some((vec![0, 1, 2], vec![0, 1])));
    }

    #[test]
    fn repeated_members_count_separately() {
        let pts = vec![RationalPoint::from_ints(&[0, 0]), RationalPoint::from_ints(&[1, 1])];
        let line = poly("x0 - x1", 2);
        let s = IncidenceStructure::build(pts, vec![line.clone(), line]).unwrap();
        assert!(!check_kb_free(&s, 2, 2).unwrap().free);
    }

    #[test]
    fn designs_are_free() {
        assert!(check_kb_free_abstract(&designs::fano(), 2, 2).unwrap().free);
        assert!(!check_kb_free_abstract(&designs::fano(), 1, 3).unwrap().free);
        assert!(check_kb_free_abstract(&designs::affine_plane_3(), 2, 2).unwrap().free);
        let sqs = designs::sqs8();
        assert_eq!(sqs.members.len(), 14);
        assert!(check_kb_free_abstract(&sqs, 3, 2).unwrap().free);
        assert!(!check_kb_free_abstract(&sqs, 2, 2).unwrap().free);
        assert!(matches!(check_kb_free_abstract(&sqs, 2, 4), Err(Error::BudgetExceeded(_))));
    }

    #[test]
    fn buckets_cover_every_incidence() {
        let pts: Vec<RationalPoint> = (0..16).map(|i| RationalPoint::from_ints(&[i % 4, i / 4])).collect();
        let lines = vec![poly("x0", 2), poly("x1 - 1", 2), poly("x0 - x1", 2), poly("x0 + x1 - 3", 2)];
        let s = IncidenceStructure::build(pts, lines).unwrap();
        let v = Variety::affine_space(2);
        let rep = partitioned_incidence_report(&v, &s, 2, &Constants::default()).unwrap();
        assert_eq!(rep.in_cells + rep.on_zero_set, rep.total);
        assert_eq!(rep.total, 16);
        let one = partitioned_incidence_report(&v, &s, 1, &Constants::default()).unwrap();
        assert_eq!(one.buckets.get(""), Some(&16));
        let empty = IncidenceStructure::build(s.points.clone(), vec![]).unwrap();
        let rep = partitioned_incidence_report(&v, &empty, 2, &Constants::default()).unwrap();
        assert!(rep.buckets.values().all(|&c| c == 0) && rep.total == 0);
    }

    #[test]
    fn adjacency_round_trip() {
        let f = designs::fano();
        let back = parse_adjacency(&f.render(), Some(7)).unwrap();
        assert_eq!(back, f);
        let err = parse_adjacency("0 1\n2 x\n", None).unwrap_err();
        assert!(matches!(err, Error::Parse { position: 6, .. }), "{err:?}");
        assert!(parse_adjacency("0 9", Some(3)).is_err());
        assert!(parse_adjacency(&usize::MAX.to_string(), None).is_err());
        let with_empty = parse_adjacency("0 1\n-\n", None).unwrap();
        assert_eq!(with_empty.members, vec![vec![0, 1], vec![]]);
        assert_eq!(with_empty.render(), "0 1\n-");
    }
}
