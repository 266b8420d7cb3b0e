//! Prange-style generic decoder for the cover metric and brute-force oracles.
//!
//! Each iteration erases `t̂_x` rows and `t̂_y` columns at random, looks for an
//! information block in the kept sub-rectangle, re-encodes the received
//! matrix from that block and accepts when the residual has cover weight at
//! most `t`. An iteration succeeds whenever the error vanishes on the kept
//! block.

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use rand::seq::index::sample;
use rand::Rng;

use crate::analysis::binomial;
use crate::channel::Seed;
use crate::cover::{combine, message_from_index, min_weight_in_span, weight};
use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};
use crate::limits::EnumCap;
use crate::matspace::{Mat, MatrixCode};

/// Iteration budget used when the predicted success probability is zero.
pub const FALLBACK_BUDGET: u64 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SplitChoice {
    pub erased_rows: usize,
    pub erased_cols: usize,
}

impl SplitChoice {
    /// Erased columns for a given number of erased rows:
    /// `n - ceil(k / (m - erased_rows))`, or `None` if that is negative.
    pub fn for_rows(m: usize, n: usize, k: usize, erased_rows: usize) -> Option<SplitChoice> {
        if erased_rows >= m {
            return None;
        }
        let kept_rows = m - erased_rows;
        let kept_cols = k.div_ceil(kept_rows);
        (kept_cols <= n).then(|| SplitChoice {
            erased_rows,
            erased_cols: n - kept_cols,
        })
    }

    pub fn erased(&self) -> usize {
        self.erased_rows + self.erased_cols
    }
}

/// Best split: the erased-row count in `0..m` maximising total erased lines,
/// ties to fewer erased rows. Requires `k/n < n <= m`.
pub fn optimal_split(m: usize, n: usize, k: usize) -> Result<SplitChoice> {
    if k == 0 || n > m || k >= n * n {
        return Err(Error::ParameterRegime(format!(
            "need 1 <= k and mR < n <= m (m={m}, n={n}, k={k})"
        )));
    }
    (0..m)
        .filter_map(|r| SplitChoice::for_rows(m, n, k, r))
        .fold(None, |best: Option<SplitChoice>, s| match best {
            Some(b) if b.erased() >= s.erased() => Some(b),
            _ => Some(s),
        })
        .ok_or_else(|| Error::ParameterRegime("no admissible split".into()))
}

/// Predicted per-iteration success `C(t̂_x + t̂_y, t) / C(m + n, t)`.
pub fn predicted_success(m: usize, n: usize, t: usize, split: &SplitChoice) -> f64 {
    let num = binomial(split.erased() as u64, t as u64);
    let den = binomial((m + n) as u64, t as u64);
    ratio_f64(&num, &den)
}

fn ratio_f64(num: &BigUint, den: &BigUint) -> f64 {
    if num.is_zero() {
        return 0.0;
    }
    let shift = den.bits().saturating_sub(60);
    let d = (den >> shift).to_f64().unwrap();
    let n = (num >> shift).to_f64().unwrap_or(f64::INFINITY);
    n / d
}

/// `ceil(100 / P(S))`, or [`FALLBACK_BUDGET`] when `P(S) = 0`.
pub fn default_budget(m: usize, n: usize, t: usize, split: &SplitChoice) -> u64 {
    let p = predicted_success(m, n, t, split);
    if p <= 0.0 {
        FALLBACK_BUDGET
    } else {
        (100.0 / p).ceil() as u64
    }
}

#[derive(Clone, Debug)]
pub struct DecodingInstance {
    pub code: MatrixCode,
    pub received: Mat,
    pub radius: usize,
    /// `(codeword, error)` when the instance was generated with a known answer.
    pub planted: Option<(Mat, Mat)>,
}

impl DecodingInstance {
    pub fn new(code: MatrixCode, received: Mat, radius: usize) -> Result<DecodingInstance> {
        if received.shape() != (code.m(), code.n()) {
            return Err(Error::shape(
                format!("{}x{}", code.m(), code.n()),
                format!("{}x{}", received.rows(), received.cols()),
            ));
        }
        if received.field() != code.field() {
            return Err(Error::FieldMismatch);
        }
        if radius > code.m().min(code.n()) {
            return Err(Error::domain(format!("radius {radius} exceeds min(m, n)")));
        }
        Ok(DecodingInstance {
            code,
            received,
            radius,
            planted: None,
        })
    }

    /// `R = C + E` with radius `wt_C(E)`.
    pub fn planted(code: MatrixCode, codeword: Mat, error: Mat) -> Result<DecodingInstance> {
        if !code.contains(&codeword) {
            return Err(Error::domain("planted codeword is not in the code"));
        }
        let received = codeword.add(&error)?;
        let radius = weight(&error);
        let mut inst = DecodingInstance::new(code, received, radius)?;
        inst.planted = Some((codeword, error));
        Ok(inst)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IterationOutcome {
    /// The kept block is not an information block.
    NoInfoBlock,
    /// Re-encoded candidate at residual cover weight above the radius.
    Rejected { residual_weight: usize },
    Found { codeword: Mat, residual_weight: usize },
}

/// Uniform independent row and column subsets of the kept sizes, sorted.
pub fn sample_block<R: Rng + ?Sized>(
    m: usize,
    n: usize,
    split: &SplitChoice,
    rng: &mut R,
) -> (Vec<usize>, Vec<usize>) {
    let mut rows = sample(rng, m, m - split.erased_rows).into_vec();
    let mut cols = sample(rng, n, n - split.erased_cols).into_vec();
    rows.sort_unstable();
    cols.sort_unstable();
    (rows, cols)
}

/// One decoding attempt on a given kept block.
pub fn attempt_block(inst: &DecodingInstance, rows: &[usize], cols: &[usize]) -> IterationOutcome {
    let code = &inst.code;
    let Some(info) = code.find_info_block(rows, cols) else {
        return IterationOutcome::NoInfoBlock;
    };
    let gs = code.systematic_form(&info);
    let r = inst.received.submatrix(rows, cols).vectorize();
    let r_inner: Vec<FieldElement> = info.inner.iter().map(|&i| r[i]).collect();
    let c_hat = gs.left_mul_vec(&r_inner);
    let candidate = Mat::devectorize(code.field(), code.m(), code.n(), &c_hat).unwrap();
    let residual_weight = weight(&inst.received.sub(&candidate).unwrap());
    if residual_weight <= inst.radius {
        IterationOutcome::Found {
            codeword: candidate,
            residual_weight,
        }
    } else {
        IterationOutcome::Rejected { residual_weight }
    }
}

pub fn prange_iteration<R: Rng + ?Sized>(
    inst: &DecodingInstance,
    split: &SplitChoice,
    rng: &mut R,
) -> IterationOutcome {
    let (rows, cols) = sample_block(inst.code.m(), inst.code.n(), split, rng);
    attempt_block(inst, &rows, &cols)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DecodeStatus {
    Found,
    IterationBudgetExhausted,
}

#[derive(Clone, Debug)]
pub struct DecodeOutcome {
    pub status: DecodeStatus,
    pub codeword: Option<Mat>,
    pub iterations_used: u64,
    /// Residual of the returned codeword, or the smallest residual seen.
    pub residual_weight: Option<usize>,
    pub split: SplitChoice,
}

/// Runs iterations with per-iteration derived seeds until success or budget.
pub fn prange_decode(
    inst: &DecodingInstance,
    max_iterations: Option<u64>,
    seed: Seed,
) -> Result<DecodeOutcome> {
    let code = &inst.code;
    let (m, n, k) = (code.m(), code.n(), code.k());
    let split = if k == 0 {
        SplitChoice {
            erased_rows: m - 1,
            erased_cols: n - 1,
        }
    } else {
        optimal_split(m, n, k)?
    };
    prange_decode_with_split(inst, &split, max_iterations, seed)
}

pub fn prange_decode_with_split(
    inst: &DecodingInstance,
    split: &SplitChoice,
    max_iterations: Option<u64>,
    seed: Seed,
) -> Result<DecodeOutcome> {
    let (m, n) = (inst.code.m(), inst.code.n());
    if split.erased_rows >= m || split.erased_cols >= n {
        return Err(Error::ParameterRegime("split keeps no block".into()));
    }
    if (m - split.erased_rows) * (n - split.erased_cols) < inst.code.k() {
        return Err(Error::ParameterRegime("kept block smaller than k".into()));
    }
    let budget = max_iterations.unwrap_or_else(|| default_budget(m, n, inst.radius, split));
    let mut best: Option<usize> = None;
    for it in 0..budget {
        let mut rng = seed.derive(it);
        match prange_iteration(inst, split, &mut rng) {
            IterationOutcome::Found {
                codeword,
                residual_weight,
            } => {
                return Ok(DecodeOutcome {
                    status: DecodeStatus::Found,
                    codeword: Some(codeword),
                    iterations_used: it + 1,
                    residual_weight: Some(residual_weight),
                    split: *split,
                })
            }
            IterationOutcome::Rejected { residual_weight } => {
                best = Some(best.map_or(residual_weight, |b| b.min(residual_weight)));
            }
            IterationOutcome::NoInfoBlock => {}
        }
    }
    Ok(DecodeOutcome {
        status: DecodeStatus::IterationBudgetExhausted,
        codeword: None,
        iterations_used: budget,
        residual_weight: best,
        split: *split,
    })
}

/// Messages of a generator list whose combination lies within cover
/// distance `t` of `received`, in message-index order.
pub fn decode_in_span(
    field: &Field,
    generators: &[Mat],
    received: &Mat,
    t: usize,
    cap: EnumCap,
) -> Result<Vec<(Vec<FieldElement>, Mat)>> {
    let (m, n) = received.shape();
    let total = cap.check(field.order(), generators.len())?;
    let q = field.order();
    let k = generators.len();
    use rayon::prelude::*;
    let hits: Vec<u64> = (0..total)
        .into_par_iter()
        .filter(|&idx| {
            let c = combine(field, m, n, generators, &message_from_index(q, k, idx));
            weight(&received.sub(&c).unwrap()) <= t
        })
        .collect();
    Ok(hits
        .into_iter()
        .map(|idx| {
            let u = message_from_index(q, k, idx);
            let c = combine(field, m, n, generators, &u);
            (u, c)
        })
        .collect())
}

/// All codewords within the radius, by exhaustive encoding.
pub fn brute_force_decode(inst: &DecodingInstance, cap: EnumCap) -> Result<Vec<Mat>> {
    Ok(decode_in_span(
        inst.code.field(),
        inst.code.generators(),
        &inst.received,
        inst.radius,
        cap,
    )?
    .into_iter()
    .map(|(_, c)| c)
    .collect())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LowWeightCodeword {
    pub weight: usize,
    pub message: Vec<FieldElement>,
    pub codeword: Mat,
}

/// Lowest-weight nonzero-message combination of a generator list.
pub fn lowest_weight_in_span(
    field: &Field,
    m: usize,
    n: usize,
    generators: &[Mat],
    cap: EnumCap,
) -> Result<Option<LowWeightCodeword>> {
    Ok(min_weight_in_span(field, m, n, generators, cap)?.map(|(w, u)| LowWeightCodeword {
        weight: w,
        codeword: combine(field, m, n, generators, &u),
        message: u,
    }))
}

/// A nonzero codeword of minimal cover weight; `None` for the zero code.
pub fn lowest_weight_codeword(code: &MatrixCode, cap: EnumCap) -> Result<Option<LowWeightCodeword>> {
    lowest_weight_in_span(code.field(), code.m(), code.n(), code.generators(), cap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::sample_simple;

    fn gf2() -> Field {
        Field::new(2, 1).unwrap()
    }

    #[test]
    fn split_examples() {
        assert_eq!(
            optimal_split(4, 4, 4).unwrap(),
            SplitChoice { erased_rows: 2, erased_cols: 2 }
        );
        assert_eq!(
            optimal_split(5, 4, 1).unwrap(),
            SplitChoice { erased_rows: 4, erased_cols: 3 }
        );
        let s = optimal_split(6, 6, 9).unwrap();
        assert_eq!(s, SplitChoice { erased_rows: 3, erased_cols: 3 });
        assert_eq!(s.erased(), 6);
        assert!(matches!(optimal_split(4, 4, 16), Err(Error::ParameterRegime(_))));
        assert!(matches!(optimal_split(3, 4, 2), Err(Error::ParameterRegime(_))));
    }

    #[test]
    fn split_scan_against_exhaustive() {
        for m in 2..9 {
            for n in 1..=m {
                for k in 1..n * n {
                    let s = optimal_split(m, n, k).unwrap();
                    // Every admissible split erases no more lines.
                    for r in 0..m {
                        for c in 0..n {
                            if (m - r) * (n - c) >= k {
                                assert!(r + c <= s.erased(), "m={m} n={n} k={k}");
                            }
                        }
                    }
                    assert!((m - s.erased_rows) * (n - s.erased_cols) >= k);
                }
            }
        }
    }

    fn random_instance(seed: u64, q: u64, m: usize, n: usize, k: usize, t: usize) -> DecodingInstance {
        let f = Field::from_order(q).unwrap();
        let mut rng = Seed(seed).rng();
        let code = MatrixCode::random(&f, m, n, k, &mut rng).unwrap();
        let u: Vec<FieldElement> = (0..k)
            .map(|_| FieldElement(rng.gen_range(0..q as u16)))
            .collect();
        let c = code.encode(&u).unwrap();
        let e = sample_simple(&f, m, n, t, 1000, &mut rng).unwrap();
        DecodingInstance::planted(code, c, e).unwrap()
    }

    #[test]
    fn noiseless_decodes_on_first_info_block() {
        let inst = random_instance(1, 2, 5, 5, 4, 0);
        let out = prange_decode(&inst, None, Seed(0)).unwrap();
        assert_eq!(out.status, DecodeStatus::Found);
        assert_eq!(out.codeword.as_ref(), Some(&inst.received));
        for it in 0..out.iterations_used - 1 {
            assert_eq!(
                prange_iteration(&inst, &out.split, &mut Seed(0).derive(it)),
                IterationOutcome::NoInfoBlock
            );
        }
    }

    #[test]
    fn error_in_erased_lines_recovers_planted() {
        let f = gf2();
        let mut rng = Seed(8).rng();
        let code = MatrixCode::random(&f, 4, 4, 4, &mut rng).unwrap();
        let c = code.encode(&[FieldElement(1), FieldElement(0), FieldElement(1), FieldElement(1)]).unwrap();
        let mut e = Mat::zeros(&f, 4, 4);
        for j in 0..4 {
            e.set(0, j, FieldElement::ONE);
        }
        let inst = DecodingInstance::planted(code, c.clone(), e).unwrap();
        // Keep rows {2,3} and columns that avoid nothing in particular: row 0 is erased.
        let blocks = [[1usize, 2], [1, 3], [2, 3]];
        let mut hit = false;
        for rows in blocks {
            for cols in [[0usize, 1], [0, 2], [1, 2], [2, 3], [0, 3], [1, 3]] {
                match attempt_block(&inst, &rows, &cols) {
                    IterationOutcome::Found { codeword, .. } => {
                        assert_eq!(codeword, c);
                        hit = true;
                    }
                    IterationOutcome::NoInfoBlock => {}
                    IterationOutcome::Rejected { .. } => panic!("error-free block must decode"),
                }
            }
        }
        assert!(hit);
    }

    #[test]
    fn block_success_matches_enumeration() {
        // Fraction of Found over random blocks vs the exact fraction over all
        // C(4,2)^2 kept blocks.
        let inst = random_instance(21, 2, 4, 4, 4, 2);
        let split = optimal_split(4, 4, 4).unwrap();
        let pairs: Vec<Vec<usize>> = (0..4)
            .flat_map(|a| ((a + 1)..4).map(move |b| vec![a, b]))
            .collect();
        let mut good = 0;
        for rows in &pairs {
            for cols in &pairs {
                if matches!(attempt_block(&inst, rows, cols), IterationOutcome::Found { .. }) {
                    good += 1;
                }
            }
        }
        let exact = good as f64 / 36.0;
        let trials = 20_000;
        let hits = (0..trials)
            .filter(|&i| {
                matches!(
                    prange_iteration(&inst, &split, &mut Seed(3).derive(i)),
                    IterationOutcome::Found { .. }
                )
            })
            .count();
        let emp = hits as f64 / trials as f64;
        let se = (exact * (1.0 - exact) / trials as f64).sqrt().max(1e-9);
        assert!((emp - exact).abs() <= 4.0 * se + 1e-12, "emp={emp} exact={exact}");
    }

    #[test]
    fn brute_force_examples() {
        let inst = random_instance(4, 2, 3, 3, 3, 0);
        let list = brute_force_decode(&inst, EnumCap(1 << 20)).unwrap();
        assert_eq!(list, vec![inst.received.clone()]);

        let mut wide = inst.clone();
        wide.radius = 3;
        assert_eq!(brute_force_decode(&wide, EnumCap(1 << 20)).unwrap().len(), 8);
    }

    #[test]
    fn lowest_weight_examples() {
        let f = gf2();
        let g1 = Mat::from_rows(&f, &[[1, 0], [0, 0]]).unwrap();
        let g2 = Mat::from_rows(&f, &[[0, 0], [0, 1]]).unwrap();
        let diag = MatrixCode::new(&f, 2, 2, vec![g1, g2]).unwrap();
        assert_eq!(lowest_weight_codeword(&diag, EnumCap(64)).unwrap().unwrap().weight, 1);
        let ones = Mat::from_rows(&f, &[[1, 1], [1, 1]]).unwrap();
        let j = MatrixCode::new(&f, 2, 2, vec![ones]).unwrap();
        assert_eq!(lowest_weight_codeword(&j, EnumCap(64)).unwrap().unwrap().weight, 2);
        let zero = MatrixCode::new(&f, 2, 2, vec![]).unwrap();
        assert!(lowest_weight_codeword(&zero, EnumCap(64)).unwrap().is_none());
    }

    #[test]
    fn decoding_via_lowest_weight_codeword() {
        // Appending R as a generator: the error is the lowest-weight codeword
        // when it is the unique coset leader of weight <= t.
        let mut checked = 0;
        for seed in 0..200 {
            let inst = random_instance(100 + seed, 2, 5, 5, 3, 1);
            let (c, e) = inst.planted.clone().unwrap();
            let cap = EnumCap(1 << 20);
            let within = decode_in_span(
                inst.code.field(),
                inst.code.generators(),
                &inst.received,
                inst.radius,
                cap,
            )
            .unwrap();
            if within.len() != 1 {
                continue;
            }
            let mut gens = inst.code.generators().to_vec();
            gens.push(inst.received.clone());
            let Ok(extended) = MatrixCode::new(inst.code.field(), 5, 5, gens) else {
                continue;
            };
            let low = lowest_weight_codeword(&extended, cap).unwrap().unwrap();
            if low.weight < inst.radius {
                continue;
            }
            // Nonzero last coordinate: the codeword is a multiple of R - C.
            if low.message[3].is_zero() {
                continue;
            }
            let scale = inst.code.field().inv(low.message[3]).unwrap();
            let recovered = low.codeword.scale(scale);
            assert!(inst.code.contains(&inst.received.sub(&recovered).unwrap()));
            assert_eq!(weight(&recovered), weight(&e));
            assert_eq!(inst.received.sub(&recovered).unwrap(), c);
            checked += 1;
        }
        assert!(checked > 10, "checked {checked}");
    }
}
