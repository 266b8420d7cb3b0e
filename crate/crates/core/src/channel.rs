//! Error matrices of prescribed cover weight.
//!
//! Two models: the general model draws uniformly from the sphere of cover
//! weight `t`; the simple model fills `t` random lines with random entries
//! and retries while the cover weight falls short of `t`.

use rand::seq::index::sample;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::cover::{cover_weight, is_unique_minimal_cover, matrix_from_index, weight};
use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};
use crate::limits::EnumCap;
use crate::matspace::Mat;

pub const DEFAULT_MAX_RETRIES: u32 = 1000;

/// Base seed; trial `i` draws from stream `i` of a ChaCha8 generator keyed
/// by the base.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Seed(pub u64);

impl Seed {
    pub fn rng(self) -> ChaCha8Rng {
        self.derive(0)
    }

    pub fn derive(self, trial: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.0);
        rng.set_stream(trial);
        rng
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModelKind {
    General,
    Simple,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ErrorModel {
    pub kind: ModelKind,
    pub t: usize,
    pub max_retries: u32,
}

impl ErrorModel {
    pub fn simple(t: usize) -> ErrorModel {
        ErrorModel {
            kind: ModelKind::Simple,
            t,
            max_retries: DEFAULT_MAX_RETRIES,
        }
    }

    pub fn general(t: usize) -> ErrorModel {
        ErrorModel {
            kind: ModelKind::General,
            t,
            max_retries: DEFAULT_MAX_RETRIES,
        }
    }
}

/// One fill of the simple model before the weight check.
#[derive(Clone, Debug)]
pub struct RawSample {
    pub matrix: Mat,
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

fn check_radius(m: usize, n: usize, t: usize) -> Result<()> {
    if t > m.min(n) {
        return Err(Error::domain(format!("t = {t} exceeds min(m, n) = {}", m.min(n))));
    }
    Ok(())
}

/// Picks a uniform `t`-subset of the `m + n` lines and fills every entry on
/// a picked line uniformly from GF(q), zero included.
pub fn sample_simple_raw<R: Rng + ?Sized>(
    field: &Field,
    m: usize,
    n: usize,
    t: usize,
    rng: &mut R,
) -> RawSample {
    let (rows, cols) = loop {
        let mut picked = sample(rng, m + n, t).into_vec();
        picked.sort_unstable();
        let rows: Vec<usize> = picked.iter().copied().filter(|&l| l < m).collect();
        let cols: Vec<usize> = picked.iter().filter(|&&l| l >= m).map(|l| l - m).collect();
        if rows.len() <= m && cols.len() <= n {
            break (rows, cols);
        }
    };
    let q = field.order() as u16;
    let mut matrix = Mat::zeros(field, m, n);
    let mut on_line = vec![false; m * n];
    for &r in &rows {
        on_line[r * n..(r + 1) * n].iter_mut().for_each(|x| *x = true);
    }
    for &c in &cols {
        for i in 0..m {
            on_line[i * n + c] = true;
        }
    }
    for (pos, _) in on_line.iter().enumerate().filter(|(_, &b)| b) {
        matrix.set(pos / n, pos % n, FieldElement(rng.gen_range(0..q)));
    }
    RawSample { matrix, rows, cols }
}

/// Uniform sampler over the sphere `{A : wt_C(A) = t}`, built by exhaustive
/// enumeration.
#[derive(Clone, Debug)]
pub struct SphereSampler {
    field: Field,
    m: usize,
    n: usize,
    members: Vec<u64>,
}

impl SphereSampler {
    pub fn new(field: &Field, m: usize, n: usize, t: usize, cap: EnumCap) -> Result<SphereSampler> {
        check_radius(m, n, t)?;
        let total = cap.check(field.order(), m * n)?;
        let members: Vec<u64> = (0..total)
            .into_par_iter()
            .filter(|&idx| weight(&matrix_from_index(field, m, n, idx)) == t)
            .collect();
        Ok(SphereSampler {
            field: field.clone(),
            m,
            n,
            members,
        })
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Position of a matrix within the enumerated sphere.
    pub fn position(&self, a: &Mat) -> Option<usize> {
        self.members
            .binary_search(&crate::cover::matrix_index(a))
            .ok()
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Mat {
        let idx = self.members[rng.gen_range(0..self.members.len())];
        matrix_from_index(&self.field, self.m, self.n, idx)
    }
}

/// Draws an error of cover weight exactly `model.t`.
pub fn sample_error<R: Rng + ?Sized>(
    field: &Field,
    m: usize,
    n: usize,
    model: &ErrorModel,
    rng: &mut R,
    cap: EnumCap,
) -> Result<Mat> {
    check_radius(m, n, model.t)?;
    match model.kind {
        ModelKind::General => Ok(SphereSampler::new(field, m, n, model.t, cap)?.sample(rng)),
        ModelKind::Simple => sample_simple(field, m, n, model.t, model.max_retries, rng),
    }
}

pub fn sample_simple<R: Rng + ?Sized>(
    field: &Field,
    m: usize,
    n: usize,
    t: usize,
    max_retries: u32,
    rng: &mut R,
) -> Result<Mat> {
    check_radius(m, n, t)?;
    for _ in 0..=max_retries {
        let raw = sample_simple_raw(field, m, n, t, rng);
        if weight(&raw.matrix) == t {
            return Ok(raw.matrix);
        }
    }
    Err(Error::RetriesExhausted(max_retries))
}

/// Lower bound on the probability that a raw simple-model fill with `t_x`
/// rows and `t_y` columns has a unique minimal cover of size `t`. Factors
/// below zero are clamped to zero.
pub fn unique_cover_lower_bound(q: usize, m: usize, n: usize, t_x: usize, t_y: usize) -> f64 {
    let q = q as f64;
    let t = (t_x + t_y) as i32;
    let (m_f, n_f) = (m as f64, n as f64);
    let row_factor = 1.0
        - (q - 1.0) * (n_f - t as f64) / q.powi(n as i32 - t_y as i32)
        - q.powi(t - n as i32);
    let col_factor = 1.0
        - (q - 1.0) * (m_f - t as f64) / q.powi(m as i32 - t_x as i32)
        - q.powi(t - m as i32);
    row_factor.max(0.0).powi(t_x as i32) * col_factor.max(0.0).powi(t_y as i32)
}

#[derive(Clone, Debug, PartialEq)]
pub struct UniqueCoverReport {
    pub trials: u64,
    pub unique: u64,
    pub rate: f64,
    /// Per-sample lower bound averaged over the drawn splits.
    pub mean_lower_bound: f64,
}

/// Fraction of raw simple-model fills whose minimal cover is unique and of
/// size `t`.
pub fn unique_cover_rate(
    field: &Field,
    m: usize,
    n: usize,
    t: usize,
    trials: u64,
    seed: Seed,
) -> Result<UniqueCoverReport> {
    check_radius(m, n, t)?;
    if trials == 0 {
        return Err(Error::domain("trials must be positive"));
    }
    let q = field.order();
    let (unique, bound_sum) = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = seed.derive(i);
            let raw = sample_simple_raw(field, m, n, t, &mut rng);
            let mc = cover_weight(&raw.matrix);
            let ok = mc.weight == t && is_unique_minimal_cover(&raw.matrix);
            let bound = unique_cover_lower_bound(q, m, n, raw.rows.len(), raw.cols.len());
            (ok as u64, bound)
        })
        .reduce(|| (0, 0.0), |a, b| (a.0 + b.0, a.1 + b.1));
    Ok(UniqueCoverReport {
        trials,
        unique,
        rate: unique as f64 / trials as f64,
        mean_lower_bound: bound_sum / trials as f64,
    })
}
