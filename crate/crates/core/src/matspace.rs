//! Matrices over GF(q), matrix codes and their vector forms.

use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};

/// Dense row-major matrix over a finite field.
#[derive(Clone, PartialEq, Eq)]
pub struct Mat {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<FieldElement>,
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} over {:?}", self.rows, self.cols, self.field)?;
        write!(f, "{self}")
    }
}

impl fmt::Display for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let line: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

impl Mat {
    pub fn zeros(field: &Field, rows: usize, cols: usize) -> Mat {
        Mat {
            field: field.clone(),
            rows,
            cols,
            data: vec![FieldElement::ZERO; rows * cols],
        }
    }

    pub fn identity(field: &Field, size: usize) -> Mat {
        let mut m = Mat::zeros(field, size, size);
        for i in 0..size {
            m.set(i, i, FieldElement::ONE);
        }
        m
    }

    pub fn from_entries(
        field: &Field,
        rows: usize,
        cols: usize,
        data: Vec<FieldElement>,
    ) -> Result<Mat> {
        if data.len() != rows * cols {
            return Err(Error::shape(rows * cols, data.len()));
        }
        if let Some(bad) = data.iter().find(|x| x.index() >= field.order()) {
            return Err(Error::InvalidElement {
                index: bad.0 as u64,
                order: field.order(),
            });
        }
        Ok(Mat {
            field: field.clone(),
            rows,
            cols,
            data,
        })
    }

    /// Matrix from rows of element indices.
    pub fn from_rows<R: AsRef<[u32]>>(field: &Field, rows: &[R]) -> Result<Mat> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(Error::shape(format!("{cols} columns"), r.len()));
            }
            for &x in r {
                data.push(field.element(x as u64)?);
            }
        }
        Ok(Mat {
            field: field.clone(),
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn random<R: Rng + ?Sized>(field: &Field, rows: usize, cols: usize, rng: &mut R) -> Mat {
        let q = field.order() as u16;
        let data = (0..rows * cols)
            .map(|_| FieldElement(rng.gen_range(0..q)))
            .collect();
        Mat {
            field: field.clone(),
            rows,
            cols,
            data,
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> FieldElement {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: FieldElement) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[FieldElement] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[FieldElement] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    /// Element indices as nested rows.
    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|x| x.0 as u32).collect())
            .collect()
    }

    fn check_same(&self, other: &Mat) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        if self.shape() != other.shape() {
            return Err(Error::shape(
                format!("{}x{}", self.rows, self.cols),
                format!("{}x{}", other.rows, other.cols),
            ));
        }
        Ok(())
    }

    pub fn add(&self, other: &Mat) -> Result<Mat> {
        self.check_same(other)?;
        let f = &self.field;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| f.add(a, b))
            .collect();
        Ok(Mat { data, ..self.clone() })
    }

    pub fn sub(&self, other: &Mat) -> Result<Mat> {
        self.check_same(other)?;
        let f = &self.field;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| f.sub(a, b))
            .collect();
        Ok(Mat { data, ..self.clone() })
    }

    /// `self += c * other`, shapes assumed equal.
    pub(crate) fn add_scaled_assign(&mut self, c: FieldElement, other: &Mat) {
        let f = self.field.clone();
        for (a, &b) in self.data.iter_mut().zip(&other.data) {
            *a = f.add(*a, f.mul(c, b));
        }
    }

    pub fn scale(&self, c: FieldElement) -> Mat {
        let f = &self.field;
        let data = self.data.iter().map(|&a| f.mul(c, a)).collect();
        Mat { data, ..self.clone() }
    }

    pub fn mul(&self, other: &Mat) -> Result<Mat> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        if self.cols != other.rows {
            return Err(Error::shape(
                format!("{} rows", self.cols),
                format!("{} rows", other.rows),
            ));
        }
        let f = &self.field;
        let mut out = Mat::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if a.is_zero() {
                    continue;
                }
                let src = other.row(l);
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, &b) in dst.iter_mut().zip(src) {
                    *d = f.add(*d, f.mul(a, b));
                }
            }
        }
        Ok(out)
    }

    pub fn transpose(&self) -> Mat {
        let mut out = Mat::zeros(&self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    pub fn trace(&self) -> FieldElement {
        let f = &self.field;
        (0..self.rows.min(self.cols)).fold(FieldElement::ZERO, |acc, i| f.add(acc, self.get(i, i)))
    }

    /// Trace product `Tr(self * other^T)`.
    pub fn trace_product(&self, other: &Mat) -> Result<FieldElement> {
        self.check_same(other)?;
        Ok(self.mul(&other.transpose())?.trace())
    }

    pub fn submatrix(&self, row_idx: &[usize], col_idx: &[usize]) -> Mat {
        let mut data = Vec::with_capacity(row_idx.len() * col_idx.len());
        for &i in row_idx {
            for &j in col_idx {
                data.push(self.get(i, j));
            }
        }
        Mat {
            field: self.field.clone(),
            rows: row_idx.len(),
            cols: col_idx.len(),
            data,
        }
    }

    pub fn select_columns(&self, col_idx: &[usize]) -> Mat {
        let all: Vec<usize> = (0..self.rows).collect();
        self.submatrix(&all, col_idx)
    }

    /// Row vector form: rows concatenated.
    pub fn vectorize(&self) -> Vec<FieldElement> {
        self.data.clone()
    }

    pub fn devectorize(field: &Field, rows: usize, cols: usize, v: &[FieldElement]) -> Result<Mat> {
        Mat::from_entries(field, rows, cols, v.to_vec())
    }

    /// Reduced row echelon form in place; returns pivot columns in order.
    /// Pivots are the leftmost nonzero column, taken from the first row
    /// holding a nonzero there.
    pub fn rref_in_place(&mut self) -> Vec<usize> {
        self.rref_with(None)
    }

    fn rref_with(&mut self, mut companion: Option<&mut Mat>) -> Vec<usize> {
        let f = self.field.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| !self.get(i, c).is_zero()) else {
                continue;
            };
            if pr != r {
                self.swap_rows(pr, r);
                if let Some(cm) = companion.as_deref_mut() {
                    cm.swap_rows(pr, r);
                }
            }
            let inv = f.inv(self.get(r, c)).expect("pivot is nonzero");
            self.scale_row(r, inv);
            if let Some(cm) = companion.as_deref_mut() {
                cm.scale_row(r, inv);
            }
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let factor = self.get(i, c);
                if factor.is_zero() {
                    continue;
                }
                let neg = f.neg(factor);
                self.axpy_row(i, r, neg);
                if let Some(cm) = companion.as_deref_mut() {
                    cm.axpy_row(i, r, neg);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn scale_row(&mut self, r: usize, c: FieldElement) {
        let f = self.field.clone();
        for x in &mut self.data[r * self.cols..(r + 1) * self.cols] {
            *x = f.mul(c, *x);
        }
    }

    /// row[dst] += c * row[src]
    fn axpy_row(&mut self, dst: usize, src: usize, c: FieldElement) {
        let f = self.field.clone();
        let n = self.cols;
        for j in 0..n {
            let s = self.data[src * n + j];
            if !s.is_zero() {
                let d = &mut self.data[dst * n + j];
                *d = f.add(*d, f.mul(c, s));
            }
        }
    }

    /// Row reduction together with the invertible `U` such that `U * self`
    /// is the returned reduced form.
    pub fn rref_with_transform(&self) -> (Mat, Mat, Vec<usize>) {
        let mut reduced = self.clone();
        let mut u = Mat::identity(&self.field, self.rows);
        let pivots = reduced.rref_with(Some(&mut u));
        (reduced, u, pivots)
    }

    pub fn rank(&self) -> usize {
        self.clone().rref_in_place().len()
    }

    pub fn inverse(&self) -> Option<Mat> {
        if self.rows != self.cols {
            return None;
        }
        let (_, u, pivots) = self.rref_with_transform();
        (pivots.len() == self.rows).then_some(u)
    }

    /// Basis of `{x : self * x^T = 0}`.
    pub fn right_kernel(&self) -> Vec<Vec<FieldElement>> {
        let f = &self.field;
        let mut r = self.clone();
        let pivots = r.rref_in_place();
        let mut is_pivot = vec![None; self.cols];
        for (row, &c) in pivots.iter().enumerate() {
            is_pivot[c] = Some(row);
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| is_pivot[c].is_none()) {
            let mut v = vec![FieldElement::ZERO; self.cols];
            v[free] = FieldElement::ONE;
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(r.get(row, free));
            }
            basis.push(v);
        }
        basis
    }

    /// `v * self` for a row vector `v`.
    pub fn left_mul_vec(&self, v: &[FieldElement]) -> Vec<FieldElement> {
        let f = &self.field;
        let mut out = vec![FieldElement::ZERO; self.cols];
        for (i, &c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (o, &x) in out.iter_mut().zip(self.row(i)) {
                *o = f.add(*o, f.mul(c, x));
            }
        }
        out
    }
}

pub fn dot(field: &Field, a: &[FieldElement], b: &[FieldElement]) -> FieldElement {
    a.iter()
        .zip(b)
        .fold(FieldElement::ZERO, |acc, (&x, &y)| field.add(acc, field.mul(x, y)))
}

/// A `k`-dimensional linear subspace of `m x n` matrices, given by
/// linearly independent generators.
#[derive(Clone, Debug)]
pub struct MatrixCode {
    field: Field,
    m: usize,
    n: usize,
    generators: Vec<Mat>,
    gbar: Mat,
}

/// An information block: a sub-rectangle on which restriction is injective,
/// with the chosen `k` positions `inner` (row-major indices into the block).
#[derive(Clone, Debug)]
pub struct InfoBlock {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub inner: Vec<usize>,
    /// Inverse of the restricted generator matrix on `inner`.
    transform: Mat,
}

impl InfoBlock {
    /// Global `(row, col)` position of each inner index.
    pub fn inner_positions(&self) -> Vec<(usize, usize)> {
        let w = self.cols.len();
        self.inner
            .iter()
            .map(|&i| (self.rows[i / w], self.cols[i % w]))
            .collect()
    }
}

impl MatrixCode {
    pub fn new(field: &Field, m: usize, n: usize, generators: Vec<Mat>) -> Result<MatrixCode> {
        let mut data = Vec::with_capacity(generators.len() * m * n);
        for g in &generators {
            if g.field() != field {
                return Err(Error::FieldMismatch);
            }
            if g.shape() != (m, n) {
                return Err(Error::shape(
                    format!("{m}x{n}"),
                    format!("{}x{}", g.rows(), g.cols()),
                ));
            }
            data.extend_from_slice(g.entries());
        }
        let gbar = Mat::from_entries(field, generators.len(), m * n, data)?;
        if gbar.rank() != generators.len() {
            return Err(Error::DependentGenerators);
        }
        Ok(MatrixCode {
            field: field.clone(),
            m,
            n,
            generators,
            gbar,
        })
    }

    /// `k` uniformly random generators, redrawn until independent.
    pub fn random<R: Rng + ?Sized>(
        field: &Field,
        m: usize,
        n: usize,
        k: usize,
        rng: &mut R,
    ) -> Result<MatrixCode> {
        if k > m * n {
            return Err(Error::domain(format!("dimension {k} exceeds {m}x{n}")));
        }
        loop {
            let gens = (0..k).map(|_| Mat::random(field, m, n, rng)).collect();
            match MatrixCode::new(field, m, n, gens) {
                Err(Error::DependentGenerators) => continue,
                other => return other,
            }
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.generators.len()
    }

    pub fn generators(&self) -> &[Mat] {
        &self.generators
    }

    /// Vector-form generator matrix, `k x mn`.
    pub fn gbar(&self) -> &Mat {
        &self.gbar
    }

    pub fn encode(&self, u: &[FieldElement]) -> Result<Mat> {
        if u.len() != self.k() {
            return Err(Error::shape(self.k(), u.len()));
        }
        let v = self.gbar.left_mul_vec(u);
        Mat::devectorize(&self.field, self.m, self.n, &v)
    }

    /// Basis `H_1..H_{mn-k}` of the trace-product dual.
    pub fn dual_basis(&self) -> Vec<Mat> {
        self.gbar
            .right_kernel()
            .into_iter()
            .map(|v| Mat::devectorize(&self.field, self.m, self.n, &v).unwrap())
            .collect()
    }

    pub fn contains(&self, c: &Mat) -> bool {
        if c.shape() != (self.m, self.n) || c.field() != &self.field {
            return false;
        }
        let mut stacked = self.gbar.entries().to_vec();
        stacked.extend_from_slice(c.entries());
        let s = Mat::from_entries(&self.field, self.k() + 1, self.m * self.n, stacked).unwrap();
        s.rank() == self.k()
    }

    /// Restricted vector-form generator matrix on a block.
    pub fn restrict(&self, rows: &[usize], cols: &[usize]) -> Mat {
        let mut data = Vec::with_capacity(self.k() * rows.len() * cols.len());
        for g in &self.generators {
            data.extend_from_slice(g.submatrix(rows, cols).entries());
        }
        Mat::from_entries(&self.field, self.k(), rows.len() * cols.len(), data).unwrap()
    }

    /// Returns an information block on `rows x cols` if the restriction is
    /// injective. `inner` is the lexicographically smallest full-rank
    /// column subset of the restricted generator matrix.
    pub fn find_info_block(&self, rows: &[usize], cols: &[usize]) -> Option<InfoBlock> {
        if rows.len() * cols.len() < self.k() {
            return None;
        }
        let restricted = self.restrict(rows, cols);
        let (_, u, pivots) = restricted.rref_with_transform();
        if pivots.len() < self.k() {
            return None;
        }
        Some(InfoBlock {
            rows: rows.to_vec(),
            cols: cols.to_vec(),
            inner: pivots,
            transform: u,
        })
    }

    /// Systematic row vector form `G_I^{-1} * Gbar` for an information block.
    pub fn systematic_form(&self, info: &InfoBlock) -> Mat {
        info.transform.mul(&self.gbar).expect("k x k times k x mn")
    }

    /// Iterates over all `q^k` (message, codeword) pairs in odometer order.
    pub fn codewords(&self) -> impl Iterator<Item = (Vec<FieldElement>, Mat)> + '_ {
        messages(&self.field, self.k()).map(move |u| {
            let c = self.encode(&u).unwrap();
            (u, c)
        })
    }
}

/// All vectors in GF(q)^len, first coordinate varying fastest.
pub fn messages(field: &Field, len: usize) -> impl Iterator<Item = Vec<FieldElement>> {
    let q = field.order() as u16;
    let mut cur: Option<Vec<FieldElement>> = Some(vec![FieldElement::ZERO; len]);
    std::iter::from_fn(move || {
        let out = cur.take()?;
        let mut next = out.clone();
        let mut carried = true;
        for x in next.iter_mut() {
            if x.0 + 1 < q {
                x.0 += 1;
                carried = false;
                break;
            }
            x.0 = 0;
        }
        if !carried {
            cur = Some(next);
        }
        Some(out)
    })
}

/// Syndrome `(<H_1, E>, ..., <H_{mn-k}, E>)`.
pub fn syndrome(duals: &[Mat], e: &Mat) -> Result<Vec<FieldElement>> {
    duals
        .iter()
        .map(|h| {
            if h.shape() != e.shape() {
                return Err(Error::shape(
                    format!("{}x{}", h.rows(), h.cols()),
                    format!("{}x{}", e.rows(), e.cols()),
                ));
            }
            Ok(dot(e.field(), h.entries(), e.entries()))
        })
        .collect()
}

/// Row reduction `A' = U * A` with `U` invertible; the nonzero rows of `A'`
/// number exactly `rank(A)`.
pub fn row_reduce_weight(a: &Mat) -> (Mat, Mat) {
    let (reduced, u, _) = a.rref_with_transform();
    (u, reduced)
}

/// A GF(p)-basis of GF(p^m) used to map vectors over the extension field to
/// `m x n` matrices over the prime field.
#[derive(Clone, Debug)]
pub struct BasisEmbedding {
    base: Field,
    ext: Field,
    basis: Vec<FieldElement>,
    /// Maps power-basis coordinates to coordinates in `basis`.
    to_basis: Mat,
}

impl BasisEmbedding {
    pub fn new(base: &Field, ext: &Field, basis: Vec<FieldElement>) -> Result<BasisEmbedding> {
        if !base.is_prime_field() || base.characteristic() != ext.characteristic() {
            return Err(Error::FieldMismatch);
        }
        let m = ext.degree() as usize;
        if basis.len() != m {
            return Err(Error::shape(m, basis.len()));
        }
        // Column j holds the power-basis coordinates of basis[j].
        let mut coords = Mat::zeros(base, m, m);
        for (j, &g) in basis.iter().enumerate() {
            if g.index() >= ext.order() {
                return Err(Error::InvalidElement {
                    index: g.0 as u64,
                    order: ext.order(),
                });
            }
            for (i, c) in ext.coefficients(g).into_iter().enumerate() {
                coords.set(i, j, FieldElement(c as u16));
            }
        }
        let to_basis = coords.inverse().ok_or(Error::DependentBasis)?;
        Ok(BasisEmbedding {
            base: base.clone(),
            ext: ext.clone(),
            basis,
            to_basis,
        })
    }

    /// The power basis `1, a, a^2, ...` of the extension.
    pub fn power_basis(base: &Field, ext: &Field) -> Result<BasisEmbedding> {
        let p = ext.characteristic();
        let basis = (0..ext.degree())
            .map(|i| FieldElement(p.pow(i) as u16))
            .collect();
        BasisEmbedding::new(base, ext, basis)
    }

    pub fn basis(&self) -> &[FieldElement] {
        &self.basis
    }

    /// Column `i` of the result holds the coordinates of `x[i]`.
    pub fn embed(&self, x: &[FieldElement]) -> Result<Mat> {
        let m = self.basis.len();
        let mut out = Mat::zeros(&self.base, m, x.len());
        for (col, &xi) in x.iter().enumerate() {
            if xi.index() >= self.ext.order() {
                return Err(Error::InvalidElement {
                    index: xi.0 as u64,
                    order: self.ext.order(),
                });
            }
            let power: Vec<FieldElement> = self
                .ext
                .coefficients(xi)
                .into_iter()
                .map(|c| FieldElement(c as u16))
                .collect();
            let coords = self.to_basis.transpose().left_mul_vec(&power);
            for (row, c) in coords.into_iter().enumerate() {
                out.set(row, col, c);
            }
        }
        Ok(out)
    }
}
