//! Cover weight via maximum bipartite matching and König's theorem.
//!
//! The support of a matrix is a bipartite graph between rows and columns.
//! A minimum vertex cover of that graph is a minimal set of lines covering
//! every nonzero entry, and its size equals the maximum matching size.

use std::collections::VecDeque;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};
use crate::limits::EnumCap;
use crate::matspace::{Mat, MatrixCode};

/// A set of lines, 0-based rows and columns kept apart.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Cover {
    rows: Vec<usize>,
    cols: Vec<usize>,
}

impl Cover {
    pub fn new(mut rows: Vec<usize>, mut cols: Vec<usize>) -> Cover {
        rows.sort_unstable();
        rows.dedup();
        cols.sort_unstable();
        cols.dedup();
        Cover { rows, cols }
    }

    /// From 1-based line indices: `1..=m` are rows, `m+1..=m+n` columns.
    pub fn from_lines(lines: &[usize], m: usize) -> Cover {
        let rows = lines.iter().filter(|&&l| l <= m).map(|l| l - 1).collect();
        let cols = lines.iter().filter(|&&l| l > m).map(|l| l - m - 1).collect();
        Cover::new(rows, cols)
    }

    pub fn rows(&self) -> &[usize] {
        &self.rows
    }

    pub fn cols(&self) -> &[usize] {
        &self.cols
    }

    pub fn len(&self) -> usize {
        self.rows.len() + self.cols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// 1-based line indices, rows first.
    pub fn lines(&self, m: usize) -> Vec<usize> {
        self.rows
            .iter()
            .map(|r| r + 1)
            .chain(self.cols.iter().map(|c| c + m + 1))
            .collect()
    }

    /// Certificate check: every nonzero entry lies on a chosen line.
    pub fn covers(&self, a: &Mat) -> bool {
        let mut row_in = vec![false; a.rows()];
        let mut col_in = vec![false; a.cols()];
        for &r in &self.rows {
            if r >= a.rows() {
                return false;
            }
            row_in[r] = true;
        }
        for &c in &self.cols {
            if c >= a.cols() {
                return false;
            }
            col_in[c] = true;
        }
        (0..a.rows()).all(|i| {
            row_in[i] || (0..a.cols()).all(|j| col_in[j] || a.get(i, j).is_zero())
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinimalCover {
    pub weight: usize,
    pub cover: Cover,
    /// Whether this is the only cover of size `weight`; filled on request.
    pub unique: Option<bool>,
}

impl MinimalCover {
    /// `(t_x, t_y)`: rows and columns in the returned cover.
    pub fn split(&self) -> (usize, usize) {
        (self.cover.rows.len(), self.cover.cols.len())
    }
}

fn support(a: &Mat) -> Vec<Vec<usize>> {
    (0..a.rows())
        .map(|i| (0..a.cols()).filter(|&j| !a.get(i, j).is_zero()).collect())
        .collect()
}

struct Matching {
    row_mate: Vec<Option<usize>>,
    col_mate: Vec<Option<usize>>,
    size: usize,
}

/// Hopcroft–Karp. Rows are scanned in increasing order and neighbours in
/// increasing column order, so the result depends only on the input.
fn hopcroft_karp(adj: &[Vec<usize>], n_cols: usize) -> Matching {
    let n_rows = adj.len();
    let mut row_mate = vec![None; n_rows];
    let mut col_mate: Vec<Option<usize>> = vec![None; n_cols];
    let mut dist = vec![usize::MAX; n_rows];
    let mut size = 0;

    // Greedy warm start.
    for (u, nbrs) in adj.iter().enumerate() {
        if let Some(&v) = nbrs.iter().find(|&&v| col_mate[v].is_none()) {
            row_mate[u] = Some(v);
            col_mate[v] = Some(u);
            size += 1;
        }
    }

    loop {
        let mut queue = VecDeque::new();
        for u in 0..n_rows {
            if row_mate[u].is_none() {
                dist[u] = 0;
                queue.push_back(u);
            } else {
                dist[u] = usize::MAX;
            }
        }
        let mut found = false;
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                match col_mate[v] {
                    None => found = true,
                    Some(w) if dist[w] == usize::MAX => {
                        dist[w] = dist[u] + 1;
                        queue.push_back(w);
                    }
                    Some(_) => {}
                }
            }
        }
        if !found {
            break;
        }
        let mut next = vec![0usize; n_rows];
        for u in 0..n_rows {
            if row_mate[u].is_none()
                && augment(u, adj, &mut row_mate, &mut col_mate, &mut dist, &mut next)
            {
                size += 1;
            }
        }
    }
    Matching {
        row_mate,
        col_mate,
        size,
    }
}

fn augment(
    u: usize,
    adj: &[Vec<usize>],
    row_mate: &mut [Option<usize>],
    col_mate: &mut [Option<usize>],
    dist: &mut [usize],
    next: &mut [usize],
) -> bool {
    while next[u] < adj[u].len() {
        let v = adj[u][next[u]];
        next[u] += 1;
        let ok = match col_mate[v] {
            None => true,
            Some(w) => {
                dist[w] == dist[u].wrapping_add(1)
                    && augment(w, adj, row_mate, col_mate, dist, next)
            }
        };
        if ok {
            row_mate[u] = Some(v);
            col_mate[v] = Some(u);
            return true;
        }
    }
    dist[u] = usize::MAX;
    false
}

/// König: with `Z` the vertices reachable from free rows by alternating
/// paths, `(rows \ Z) ∪ (cols ∩ Z)` is a minimum vertex cover.
fn koenig_cover(adj: &[Vec<usize>], n_cols: usize, mm: &Matching) -> Cover {
    let n_rows = adj.len();
    let mut row_seen = vec![false; n_rows];
    let mut col_seen = vec![false; n_cols];
    let mut queue: VecDeque<usize> = (0..n_rows).filter(|&u| mm.row_mate[u].is_none()).collect();
    for &u in &queue {
        row_seen[u] = true;
    }
    while let Some(u) = queue.pop_front() {
        for &v in &adj[u] {
            if col_seen[v] || mm.row_mate[u] == Some(v) {
                continue;
            }
            col_seen[v] = true;
            if let Some(w) = mm.col_mate[v] {
                if !row_seen[w] {
                    row_seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    let rows = (0..n_rows).filter(|&u| !row_seen[u] && !adj[u].is_empty()).collect();
    let cols = (0..n_cols).filter(|&v| col_seen[v]).collect();
    Cover::new(rows, cols)
}

/// Minimal cover of `a` together with its size.
pub fn cover_weight(a: &Mat) -> MinimalCover {
    let adj = support(a);
    let mm = hopcroft_karp(&adj, a.cols());
    let cover = koenig_cover(&adj, a.cols(), &mm);
    debug_assert_eq!(cover.len(), mm.size);
    MinimalCover {
        weight: mm.size,
        cover,
        unique: None,
    }
}

/// Cover weight alone; skips building the certificate.
pub fn weight(a: &Mat) -> usize {
    let adj = support(a);
    hopcroft_karp(&adj, a.cols()).size
}

pub fn cover_distance(a: &Mat, b: &Mat) -> Result<usize> {
    Ok(weight(&a.sub(b)?))
}

/// True iff exactly one cover of minimal size exists.
///
/// Any other minimal cover must omit some line of the one we found. For each
/// such line, force it out: its nonzero entries then require the opposite
/// lines, and the remainder is covered minimally. A constrained minimum equal
/// to the weight exhibits a second cover.
pub fn is_unique_minimal_cover(a: &Mat) -> bool {
    let found = cover_weight(a);
    let t = found.weight;
    if t == 0 {
        return true;
    }
    for &r in found.cover.rows() {
        let forced: Vec<usize> = (0..a.cols()).filter(|&j| !a.get(r, j).is_zero()).collect();
        let mut residual = a.clone();
        for j in 0..a.cols() {
            residual.set(r, j, FieldElement::ZERO);
        }
        for &j in &forced {
            for i in 0..a.rows() {
                residual.set(i, j, FieldElement::ZERO);
            }
        }
        if forced.len() + weight(&residual) == t {
            return false;
        }
    }
    for &c in found.cover.cols() {
        let forced: Vec<usize> = (0..a.rows()).filter(|&i| !a.get(i, c).is_zero()).collect();
        let mut residual = a.clone();
        for i in 0..a.rows() {
            residual.set(i, c, FieldElement::ZERO);
        }
        for &i in &forced {
            for j in 0..a.cols() {
                residual.set(i, j, FieldElement::ZERO);
            }
        }
        if forced.len() + weight(&residual) == t {
            return false;
        }
    }
    true
}

/// Minimal cover with the uniqueness flag filled in.
pub fn cover_weight_with_uniqueness(a: &Mat) -> MinimalCover {
    let mut mc = cover_weight(a);
    mc.unique = Some(is_unique_minimal_cover(a));
    mc
}

/// Matrix with index `idx` in base-`q` row-major order (entry 0 least significant).
pub fn matrix_from_index(field: &Field, m: usize, n: usize, mut idx: u64) -> Mat {
    let q = field.order() as u64;
    let data = (0..m * n)
        .map(|_| {
            let d = idx % q;
            idx /= q;
            FieldElement(d as u16)
        })
        .collect();
    Mat::from_entries(field, m, n, data).unwrap()
}

pub fn matrix_index(a: &Mat) -> u64 {
    let q = a.field().order() as u64;
    a.entries()
        .iter()
        .rev()
        .fold(0u64, |acc, x| acc * q + x.0 as u64)
}

/// Counts of matrices by cover weight, `0..=min(m, n)`, by enumerating all
/// of GF(q)^{m x n}.
pub fn weight_distribution(field: &Field, m: usize, n: usize, cap: EnumCap) -> Result<Vec<u64>> {
    let total = cap.check(field.order(), m * n)?;
    let len = m.min(n) + 1;
    let counts = (0..total)
        .into_par_iter()
        .fold(
            || vec![0u64; len],
            |mut acc, idx| {
                acc[weight(&matrix_from_index(field, m, n, idx))] += 1;
                acc
            },
        )
        .reduce(
            || vec![0u64; len],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    Ok(counts)
}

/// `F_C`: number of `m x n` matrices of cover weight exactly `w`.
pub fn sphere_size_exact(field: &Field, m: usize, n: usize, w: usize, cap: EnumCap) -> Result<u64> {
    let dist = weight_distribution(field, m, n, cap)?;
    Ok(dist.get(w).copied().unwrap_or(0))
}

/// `V_C`: number of `m x n` matrices of cover weight at most `w`.
pub fn ball_size_exact(field: &Field, m: usize, n: usize, w: usize, cap: EnumCap) -> Result<u64> {
    let dist = weight_distribution(field, m, n, cap)?;
    Ok(dist.iter().take(w + 1).sum())
}

pub(crate) fn message_from_index(q: usize, k: usize, mut idx: u64) -> Vec<FieldElement> {
    (0..k)
        .map(|_| {
            let d = idx % q as u64;
            idx /= q as u64;
            FieldElement(d as u16)
        })
        .collect()
}

/// Lowest cover weight over nonzero messages of a generator list, which
/// need not be independent. Returns `(weight, message)`; ties go to the
/// smallest message index.
pub(crate) fn min_weight_in_span(
    field: &Field,
    m: usize,
    n: usize,
    generators: &[Mat],
    cap: EnumCap,
) -> Result<Option<(usize, Vec<FieldElement>)>> {
    let k = generators.len();
    let total = cap.check(field.order(), k)?;
    let q = field.order();
    let best = (1..total)
        .into_par_iter()
        .map(|idx| {
            let u = message_from_index(q, k, idx);
            (weight(&combine(field, m, n, generators, &u)), idx)
        })
        .min();
    Ok(best.map(|(w, idx)| (w, message_from_index(q, k, idx))))
}

pub(crate) fn combine(
    field: &Field,
    m: usize,
    n: usize,
    generators: &[Mat],
    u: &[FieldElement],
) -> Mat {
    let mut acc = Mat::zeros(field, m, n);
    for (&c, g) in u.iter().zip(generators) {
        if !c.is_zero() {
            acc.add_scaled_assign(c, g);
        }
    }
    acc
}

/// Minimum cover distance, by exhaustive enumeration of the `q^k` codewords.
pub fn min_distance(code: &MatrixCode, cap: EnumCap) -> Result<usize> {
    match min_weight_in_span(code.field(), code.m(), code.n(), code.generators(), cap)? {
        Some((w, _)) => Ok(w),
        None => Err(Error::TrivialCode),
    }
}
