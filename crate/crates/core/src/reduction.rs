//! Reductions from Hamming-metric codeword and decoding problems to their
//! cover-metric counterparts by stacking each row `t + 1` times, with
//! exhaustive decision oracles for both sides.

use rand::Rng;

use crate::cover::{combine, message_from_index, weight};
use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};
use crate::limits::EnumCap;
use crate::matspace::Mat;
use crate::prange::{decode_in_span, lowest_weight_in_span};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Problem {
    /// Is there a nonzero message whose codeword has weight at most `t`?
    Codeword,
    /// Is the received word within distance `t` of the code?
    Decoding,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HammingInstance {
    pub field: Field,
    /// `k` rows of length `n`.
    pub generators: Vec<Vec<FieldElement>>,
    pub received: Option<Vec<FieldElement>>,
    pub t: usize,
    pub n: usize,
}

impl HammingInstance {
    pub fn new(
        field: &Field,
        n: usize,
        generators: Vec<Vec<FieldElement>>,
        received: Option<Vec<FieldElement>>,
        t: usize,
    ) -> Result<HammingInstance> {
        if t > n {
            return Err(Error::domain(format!("t = {t} exceeds n = {n}")));
        }
        let q = field.order();
        for row in generators.iter().chain(received.iter()) {
            if row.len() != n {
                return Err(Error::shape(n, row.len()));
            }
            if let Some(x) = row.iter().find(|x| x.index() >= q) {
                return Err(Error::InvalidElement { index: x.0 as u64, order: q });
            }
        }
        Ok(HammingInstance {
            field: field.clone(),
            generators,
            received,
            t,
            n,
        })
    }

    pub fn random<R: Rng + ?Sized>(
        field: &Field,
        k: usize,
        n: usize,
        t: usize,
        with_received: bool,
        rng: &mut R,
    ) -> Result<HammingInstance> {
        let q = field.order() as u16;
        let mut row = || (0..n).map(|_| FieldElement(rng.gen_range(0..q))).collect::<Vec<_>>();
        let generators = (0..k).map(|_| row()).collect();
        let received = with_received.then(row);
        HammingInstance::new(field, n, generators, received, t)
    }

    pub fn k(&self) -> usize {
        self.generators.len()
    }

    pub fn encode(&self, u: &[FieldElement]) -> Vec<FieldElement> {
        let f = &self.field;
        let mut acc = vec![FieldElement::ZERO; self.n];
        for (&c, g) in u.iter().zip(&self.generators) {
            for (a, &x) in acc.iter_mut().zip(g) {
                *a = f.add(*a, f.mul(c, x));
            }
        }
        acc
    }
}

pub fn hamming_weight(v: &[FieldElement]) -> usize {
    v.iter().filter(|x| !x.is_zero()).count()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedInstance {
    pub field: Field,
    /// Each generator has `t + 1` identical rows.
    pub generators: Vec<Mat>,
    pub received: Option<Mat>,
    pub t: usize,
    pub n: usize,
}

impl ReducedInstance {
    pub fn m(&self) -> usize {
        self.t + 1
    }

    pub fn n(&self) -> usize {
        self.n
    }
}

fn stack(field: &Field, row: &[FieldElement], copies: usize) -> Mat {
    let entries = (0..copies).flat_map(|_| row.iter().copied()).collect();
    Mat::from_entries(field, copies, row.len(), entries).unwrap()
}

/// Stacks every generator row `t + 1` times. Any received word is dropped.
pub fn reduce_codeword_problem(h: &HammingInstance) -> ReducedInstance {
    ReducedInstance {
        field: h.field.clone(),
        generators: h.generators.iter().map(|g| stack(&h.field, g, h.t + 1)).collect(),
        received: None,
        t: h.t,
        n: h.n,
    }
}

/// As [`reduce_codeword_problem`], also stacking the received word.
pub fn reduce_decoding_problem(h: &HammingInstance) -> Result<ReducedInstance> {
    let r = h
        .received
        .as_ref()
        .ok_or_else(|| Error::domain("decoding reduction needs a received word"))?;
    let mut out = reduce_codeword_problem(h);
    out.received = Some(stack(&h.field, r, h.t + 1));
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HammingAnswer {
    pub yes: bool,
    pub message: Option<Vec<FieldElement>>,
    /// The light codeword, or the error `r - uG`.
    pub witness: Option<Vec<FieldElement>>,
}

/// Exhaustive decision over all `q^k` messages. The codeword problem ranges
/// over nonzero messages; the first hit in message-index order is returned.
pub fn hamming_oracle(h: &HammingInstance, problem: Problem, cap: EnumCap) -> Result<HammingAnswer> {
    let q = h.field.order();
    let k = h.k();
    let total = cap.check(q, k)?;
    let received = match problem {
        Problem::Codeword => None,
        Problem::Decoding => Some(
            h.received
                .as_ref()
                .ok_or_else(|| Error::domain("decoding oracle needs a received word"))?,
        ),
    };
    let start = if received.is_some() { 0 } else { 1 };
    for idx in start..total {
        let u = message_from_index(q, k, idx);
        let c = h.encode(&u);
        let w = match received {
            None => c,
            Some(r) => r.iter().zip(&c).map(|(&a, &b)| h.field.sub(a, b)).collect(),
        };
        if hamming_weight(&w) <= h.t {
            return Ok(HammingAnswer {
                yes: true,
                message: Some(u),
                witness: Some(w),
            });
        }
    }
    Ok(HammingAnswer {
        yes: false,
        message: None,
        witness: None,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverAnswer {
    pub yes: bool,
    pub message: Option<Vec<FieldElement>>,
    /// The light codeword, or the error matrix `R - C`.
    pub witness: Option<Mat>,
}

/// Exhaustive decision for the reduced instance.
pub fn cover_oracle(r: &ReducedInstance, problem: Problem, cap: EnumCap) -> Result<CoverAnswer> {
    let (m, n) = (r.m(), r.n());
    let no = CoverAnswer {
        yes: false,
        message: None,
        witness: None,
    };
    match problem {
        Problem::Codeword => Ok(match lowest_weight_in_span(&r.field, m, n, &r.generators, cap)? {
            Some(low) if low.weight <= r.t => CoverAnswer {
                yes: true,
                message: Some(low.message),
                witness: Some(low.codeword),
            },
            _ => no,
        }),
        Problem::Decoding => {
            let received = r
                .received
                .as_ref()
                .ok_or_else(|| Error::domain("decoding oracle needs a received matrix"))?;
            let hits = decode_in_span(&r.field, &r.generators, received, r.t, cap)?;
            Ok(match hits.into_iter().next() {
                Some((u, c)) => CoverAnswer {
                    yes: true,
                    message: Some(u),
                    witness: Some(received.sub(&c)?),
                },
                None => no,
            })
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionReport {
    pub answer: bool,
    /// Hamming witness recovered from the first row of the cover witness.
    pub mapped_witness: Option<Vec<FieldElement>>,
}

/// Runs both oracles, requires equal answers, and on "yes" maps the cover
/// witness back to a Hamming witness and re-verifies it.
pub fn verify_reduction(h: &HammingInstance, problem: Problem, cap: EnumCap) -> Result<ReductionReport> {
    let reduced = match problem {
        Problem::Codeword => reduce_codeword_problem(h),
        Problem::Decoding => reduce_decoding_problem(h)?,
    };
    let ham = hamming_oracle(h, problem, cap)?;
    let cov = cover_oracle(&reduced, problem, cap)?;
    if ham.yes != cov.yes {
        return Err(Error::MismatchDetected(format!(
            "hamming says {}, cover says {}",
            ham.yes, cov.yes
        )));
    }
    let (Some(wit), Some(u)) = (cov.witness, cov.message) else {
        return Ok(ReductionReport {
            answer: cov.yes,
            mapped_witness: None,
        });
    };
    let first = wit.row(0).to_vec();
    if (1..wit.rows()).any(|i| wit.row(i) != first.as_slice()) {
        return Err(Error::MismatchDetected("witness rows differ".into()));
    }
    if weight(&wit) != hamming_weight(&first) {
        return Err(Error::MismatchDetected("cover weight differs from row weight".into()));
    }
    if hamming_weight(&first) > h.t {
        return Err(Error::MismatchDetected("mapped witness exceeds threshold".into()));
    }
    let c = h.encode(&u);
    let consistent = match problem {
        Problem::Codeword => first == c && u.iter().any(|x| !x.is_zero()),
        Problem::Decoding => {
            let r = h.received.as_ref().unwrap();
            first
                .iter()
                .zip(r.iter().zip(&c))
                .all(|(&e, (&ri, &ci))| e == h.field.sub(ri, ci))
        }
    };
    if !consistent {
        return Err(Error::MismatchDetected("mapped witness does not verify".into()));
    }
    Ok(ReductionReport {
        answer: true,
        mapped_witness: Some(first),
    })
}

/// Codeword of a reduced instance for message `u`.
pub fn reduced_codeword(r: &ReducedInstance, u: &[FieldElement]) -> Mat {
    combine(&r.field, r.m(), r.n(), &r.generators, u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::Seed;
    use crate::cover::cover_weight;
    use crate::matspace::messages;

    fn gf2() -> Field {
        Field::new(2, 1).unwrap()
    }

    fn fe(v: &[u16]) -> Vec<FieldElement> {
        v.iter().map(|&x| FieldElement(x)).collect()
    }

    fn small(t: usize, r: Option<&[u16]>) -> HammingInstance {
        HammingInstance::new(&gf2(), 3, vec![fe(&[1, 0, 1]), fe(&[0, 1, 1])], r.map(fe), t).unwrap()
    }

    #[test]
    fn stacking_shape() {
        let red = reduce_codeword_problem(&small(1, None));
        assert_eq!(red.m(), 2);
        assert_eq!(red.generators.len(), 2);
        assert_eq!(red.generators[0].to_rows(), vec![vec![1, 0, 1], vec![1, 0, 1]]);
        let zero_t = reduce_codeword_problem(&small(0, None));
        assert_eq!(zero_t.generators[1].to_rows(), vec![vec![0, 1, 1]]);
    }

    #[test]
    fn oracle_examples() {
        let cap = EnumCap(1 << 16);
        assert!(!hamming_oracle(&small(1, None), Problem::Codeword, cap).unwrap().yes);
        let yes = hamming_oracle(&small(2, None), Problem::Codeword, cap).unwrap();
        assert!(yes.yes);
        assert_eq!(hamming_weight(yes.witness.as_ref().unwrap()), 2);
        let zero = HammingInstance::new(&gf2(), 4, vec![], Some(fe(&[0, 0, 0, 0])), 0).unwrap();
        let ans = hamming_oracle(&zero, Problem::Decoding, cap).unwrap();
        assert!(ans.yes);
        assert_eq!(ans.witness, Some(fe(&[0, 0, 0, 0])));
    }

    #[test]
    fn decoding_example_codeword_received() {
        let h = small(1, Some(&[1, 1, 1]));
        let rep = verify_reduction(&h, Problem::Decoding, EnumCap(1 << 16)).unwrap();
        assert!(rep.answer);
        // 111 is one flip away from 110 = g1 + g2.
        let w = rep.mapped_witness.unwrap();
        assert_eq!(hamming_weight(&w), 1);
        let member = verify_reduction(&small(1, Some(&[1, 1, 0])), Problem::Decoding, EnumCap(1 << 16)).unwrap();
        assert_eq!(member.mapped_witness, Some(fe(&[0, 0, 0])));
    }

    #[test]
    fn all_ones_single_generator() {
        for n in 2..6 {
            let h = HammingInstance::new(&gf2(), n, vec![vec![FieldElement::ONE; n]], None, n - 1).unwrap();
            let rep = verify_reduction(&h, Problem::Codeword, EnumCap(1 << 16)).unwrap();
            assert!(!rep.answer);
        }
    }

    #[test]
    fn far_received_word_is_no_on_both_sides() {
        // Repetition code of length 7 has distance 7 > 2t + 2 for t = 2;
        // r at distance 3 from the zero codeword and 4 from the ones word.
        let f = gf2();
        let h = HammingInstance::new(&f, 7, vec![vec![FieldElement::ONE; 7]], Some(fe(&[1, 1, 1, 0, 0, 0, 0])), 2)
            .unwrap();
        let rep = verify_reduction(&h, Problem::Decoding, EnumCap(1 << 16)).unwrap();
        assert!(!rep.answer);
    }

    #[test]
    fn zero_threshold_is_membership() {
        let cap = EnumCap(1 << 16);
        assert!(verify_reduction(&small(0, Some(&[1, 1, 0])), Problem::Decoding, cap).unwrap().answer);
        assert!(!verify_reduction(&small(0, Some(&[1, 0, 0])), Problem::Decoding, cap).unwrap().answer);
    }

    #[test]
    fn full_threshold_always_yes() {
        let f = Field::new(3, 1).unwrap();
        let mut rng = Seed(17).rng();
        for _ in 0..20 {
            let h = HammingInstance::random(&f, 2, 4, 4, true, &mut rng).unwrap();
            for p in [Problem::Codeword, Problem::Decoding] {
                assert!(verify_reduction(&h, p, EnumCap(1 << 16)).unwrap().answer);
            }
        }
    }

    #[test]
    fn reduced_codewords_have_identical_rows_and_column_covers() {
        let f = Field::new(3, 1).unwrap();
        let mut rng = Seed(5).rng();
        for _ in 0..10 {
            let h = HammingInstance::random(&f, 3, 5, 2, false, &mut rng).unwrap();
            let red = reduce_codeword_problem(&h);
            for u in messages(&f, 3) {
                let c = reduced_codeword(&red, &u);
                assert!((1..c.rows()).all(|i| c.row(i) == c.row(0)));
                let mc = cover_weight(&c);
                if mc.weight <= h.t {
                    assert!(mc.cover.rows().is_empty());
                }
            }
        }
    }

    #[test]
    fn missing_received_is_an_error() {
        assert!(reduce_decoding_problem(&small(1, None)).is_err());
        assert!(HammingInstance::new(&gf2(), 3, vec![fe(&[1, 0])], None, 1).is_err());
        assert!(HammingInstance::new(&gf2(), 3, vec![], None, 4).is_err());
    }
}
