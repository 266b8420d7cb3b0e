mod common;

use proptest::prelude::*;

use covermetric::analysis::{entropy_q, entropy_q_inverse};
use covermetric::channel::{sample_simple, DEFAULT_MAX_RETRIES};
use covermetric::io::{parse_matrix_file, write_matrix_file};
use covermetric::{cover_distance, cover_weight, is_unique_minimal_cover, Field, FieldElement, Mat, Seed};

const ORDERS: [u64; 6] = [2, 3, 4, 5, 8, 9];

fn matrix(q: u64, m: usize, n: usize, entries: &[u32]) -> Mat {
    let field = Field::from_order(q).unwrap();
    let rows: Vec<Vec<u32>> = (0..m).map(|i| entries[i * n..(i + 1) * n].to_vec()).collect();
    Mat::from_rows(&field, &rows).unwrap()
}

/// `(q, m, n, entries)` with entries in `0..q`; 1 in 3 entries nonzero on
/// average so covers are not always trivial.
fn small_matrix(max: usize) -> impl Strategy<Value = Mat> {
    (prop::sample::select(&ORDERS[..]), 1..=max, 1..=max).prop_flat_map(|(q, m, n)| {
        let entry = prop_oneof![2 => Just(0u32), 1 => 0..q as u32];
        prop::collection::vec(entry, m * n).prop_map(move |e| matrix(q, m, n, &e))
    })
}

fn pair(max: usize) -> impl Strategy<Value = (Mat, Mat, Mat)> {
    (prop::sample::select(&ORDERS[..]), 1..=max, 1..=max).prop_flat_map(|(q, m, n)| {
        let v = || prop::collection::vec(prop_oneof![2 => Just(0u32), 1 => 0..q as u32], m * n);
        (v(), v(), v()).prop_map(move |(a, b, c)| (matrix(q, m, n, &a), matrix(q, m, n, &b), matrix(q, m, n, &c)))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn weight_matches_brute_force(a in small_matrix(4)) {
        let mc = cover_weight(&a);
        prop_assert_eq!(mc.weight, common::brute_cover_weight(&a));
        prop_assert_eq!(mc.cover.len(), mc.weight);
        prop_assert!(mc.cover.covers(&a));
        let (tx, ty) = mc.split();
        prop_assert_eq!(tx + ty, mc.weight);
    }

    #[test]
    fn rank_below_weight_below_min_side(a in small_matrix(6)) {
        let w = cover_weight(&a).weight;
        prop_assert!(a.rank() <= w);
        prop_assert!(w <= a.rows().min(a.cols()));
    }

    #[test]
    fn transpose_and_permutation_invariance(a in small_matrix(5), seed in any::<u64>()) {
        let w = cover_weight(&a).weight;
        prop_assert_eq!(cover_weight(&a.transpose()).weight, w);
        let mut rows: Vec<usize> = (0..a.rows()).collect();
        let mut cols: Vec<usize> = (0..a.cols()).collect();
        use rand::seq::SliceRandom;
        let mut rng = Seed(seed).rng();
        rows.shuffle(&mut rng);
        cols.shuffle(&mut rng);
        prop_assert_eq!(cover_weight(&a.submatrix(&rows, &cols)).weight, w);
    }

    #[test]
    fn nonzero_scaling_preserves_weight(a in small_matrix(5), c in 1u16..256) {
        let c = FieldElement(c % (a.field().order() as u16 - 1) + 1);
        prop_assert_eq!(cover_weight(&a.scale(c)).weight, cover_weight(&a).weight);
    }

    #[test]
    fn distance_is_a_metric((a, b, c) in pair(5)) {
        let ab = cover_distance(&a, &b).unwrap();
        prop_assert_eq!(ab, cover_distance(&b, &a).unwrap());
        prop_assert_eq!(cover_distance(&a, &a).unwrap(), 0);
        prop_assert_eq!(ab == 0, a == b);
        prop_assert!(ab <= cover_distance(&a, &c).unwrap() + cover_distance(&c, &b).unwrap());
    }

    #[test]
    fn uniqueness_matches_enumeration(a in small_matrix(3)) {
        let unique = common::brute_minimal_cover_count(&a) == 1;
        prop_assert_eq!(is_unique_minimal_cover(&a), unique);
    }

    #[test]
    fn matrix_file_round_trip(a in small_matrix(6)) {
        let text = write_matrix_file(&a);
        prop_assert_eq!(parse_matrix_file(&text).unwrap(), a);
    }

    #[test]
    fn simple_model_hits_exact_weight(q in prop::sample::select(&ORDERS[..]), m in 2usize..7, n in 2usize..7, seed in any::<u64>()) {
        let field = Field::from_order(q).unwrap();
        let t = 1 + seed as usize % m.min(n);
        let e = sample_simple(&field, m, n, t, DEFAULT_MAX_RETRIES, &mut Seed(seed).rng()).unwrap();
        prop_assert_eq!(cover_weight(&e).weight, t);
    }

    #[test]
    fn field_axioms(q in prop::sample::select(&[2u64, 3, 4, 7, 8, 9, 16, 25, 27][..]), x in any::<u16>(), y in any::<u16>(), z in any::<u16>()) {
        let f = Field::from_order(q).unwrap();
        let el = |v: u16| FieldElement(v % q as u16);
        let (a, b, c) = (el(x), el(y), el(z));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.add(f.sub(a, b), b), a);
        if !a.is_zero() {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), FieldElement::ONE);
            prop_assert_eq!(f.pow(a, q - 1), FieldElement::ONE);
        }
    }

    #[test]
    fn entropy_inverse_round_trip(q in prop::sample::select(&[2u64, 3, 4, 16][..]), s in 0.001f64..0.999) {
        let p = s * (1.0 - 1.0 / q as f64);
        let y = entropy_q(q, p).unwrap();
        prop_assert!((entropy_q_inverse(q, y).unwrap() - p).abs() < 1e-10);
    }
}
