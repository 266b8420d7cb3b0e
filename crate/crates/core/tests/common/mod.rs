//! Reference implementations used to cross-check the library. Everything
//! here is deliberately naive: exhaustive line subsets, schoolbook
//! binomials, direct enumeration.

#![allow(dead_code)]

use covermetric::{Field, FieldElement, Mat};

/// Bitmask of nonzero columns in each row.
pub fn row_supports(a: &Mat) -> Vec<u32> {
    (0..a.rows())
        .map(|i| {
            (0..a.cols())
                .filter(|&j| !a.get(i, j).is_zero())
                .fold(0u32, |mask, j| mask | (1 << j))
        })
        .collect()
}

/// Does the line set (rows in the low `m` bits, columns above) cover `a`?
pub fn is_cover(supports: &[u32], m: usize, lines: u32) -> bool {
    let cols = lines >> m;
    supports
        .iter()
        .enumerate()
        .all(|(i, &s)| lines & (1 << i) != 0 || s & !cols == 0)
}

/// Minimum size of a line set containing every nonzero entry, found by
/// trying all `2^{m+n}` subsets.
pub fn brute_cover_weight(a: &Mat) -> usize {
    let (m, n) = a.shape();
    let supports = row_supports(a);
    (0u32..1 << (m + n))
        .filter(|&l| is_cover(&supports, m, l))
        .map(|l| l.count_ones() as usize)
        .min()
        .unwrap()
}

/// Number of minimal covers.
pub fn brute_minimal_cover_count(a: &Mat) -> usize {
    let (m, n) = a.shape();
    let supports = row_supports(a);
    let w = brute_cover_weight(a) as u32;
    (0u32..1 << (m + n))
        .filter(|&l| l.count_ones() == w && is_cover(&supports, m, l))
        .count()
}

pub fn binom(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// All `q^{mn}` matrices in lexicographic order of their entries.
pub fn all_matrices(field: &Field, m: usize, n: usize) -> impl Iterator<Item = Mat> + '_ {
    let q = field.order() as u64;
    let total = q.pow((m * n) as u32);
    (0..total).map(move |mut idx| {
        let mut a = Mat::zeros(field, m, n);
        for pos in 0..m * n {
            a.set(pos / n, pos % n, FieldElement((idx % q) as u16));
            idx /= q;
        }
        a
    })
}

/// Cover-weight histogram of all `m x n` matrices.
pub fn brute_weight_histogram(field: &Field, m: usize, n: usize) -> Vec<u64> {
    let mut hist = vec![0u64; m.min(n) + 1];
    for a in all_matrices(field, m, n) {
        hist[brute_cover_weight(&a)] += 1;
    }
    hist
}

pub fn entropy2(p: f64) -> f64 {
    if p <= 0.0 || p >= 1.0 {
        return 0.0;
    }
    -p * p.log2() - (1.0 - p) * (1.0 - p).log2()
}

/// Hamming weight of `v`.
pub fn hamming_weight(v: &[FieldElement]) -> usize {
    v.iter().filter(|x| !x.is_zero()).count()
}
