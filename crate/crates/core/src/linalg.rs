//! Dense exact linear algebra: row reduction, kernels, images, cokernels,
//! linear solving, and fixed/co-fixed spaces of group actions given by
//! generators.

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Field;

/// Rows are eliminated in parallel once a pivot step touches this many entries.
const PARALLEL_ELIMINATION_THRESHOLD: usize = 1 << 16;

/// A dense matrix stored row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix<E> {
    rows: usize,
    cols: usize,
    data: Vec<E>,
}

impl<E: fmt::Debug> fmt::Debug for Matrix<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", &self.data[r * self.cols..(r + 1) * self.cols])?;
        }
        Ok(())
    }
}

impl<E> Matrix<E> {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }
}

impl<E: Clone> Matrix<E> {
    pub fn filled(rows: usize, cols: usize, value: E) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![value; rows * cols],
        }
    }

    pub fn zeros<F: Field<Elem = E>>(field: &F, rows: usize, cols: usize) -> Self {
        Self::filled(rows, cols, field.zero())
    }

    pub fn identity<F: Field<Elem = E>>(field: &F, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    /// Builds a matrix from a row-major buffer.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<E>) -> Self {
        assert_eq!(data.len(), rows * cols, "buffer does not match shape");
        Matrix { rows, cols, data }
    }

    pub fn from_rows(cols: usize, rows: Vec<Vec<E>>) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged row");
            data.extend(r);
        }
        Matrix {
            rows: n,
            cols,
            data,
        }
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns<F: Field<Elem = E>>(field: &F, rows: usize, columns: &[Vec<E>]) -> Self {
        let mut m = Self::zeros(field, rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length does not match row count");
            for (i, v) in col.iter().enumerate() {
                if !field.is_zero(v) {
                    m.set(i, j, v.clone());
                }
            }
        }
        m
    }

    pub fn get(&self, r: usize, c: usize) -> &E {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: E) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[E] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_mut(&mut self, r: usize) -> &mut [E] {
        &mut self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<E> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn into_rows(self) -> Vec<Vec<E>> {
        if self.cols == 0 {
            return vec![Vec::new(); self.rows];
        }
        self.data.chunks(self.cols).map(<[E]>::to_vec).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                data.push(self.get(r, c).clone());
            }
        }
        Matrix {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    /// Keeps the listed columns, in order.
    pub fn select_columns(&self, cols: &[usize]) -> Self {
        let mut data = Vec::with_capacity(self.rows * cols.len());
        for r in 0..self.rows {
            for &c in cols {
                data.push(self.get(r, c).clone());
            }
        }
        Matrix {
            rows: self.rows,
            cols: cols.len(),
            data,
        }
    }

    /// Keeps the listed rows, in order.
    pub fn select_rows(&self, rows: &[usize]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * self.cols);
        for &r in rows {
            data.extend_from_slice(self.row(r));
        }
        Matrix {
            rows: rows.len(),
            cols: self.cols,
            data,
        }
    }

    /// Stacks matrices with equal column counts vertically.
    pub fn vstack(cols: usize, blocks: &[&Matrix<E>]) -> Self {
        let mut data = Vec::new();
        let mut rows = 0;
        for b in blocks {
            assert_eq!(b.cols, cols, "vstack column mismatch");
            data.extend_from_slice(&b.data);
            rows += b.rows;
        }
        Matrix { rows, cols, data }
    }

    /// Places matrices with equal row counts side by side.
    pub fn hstack(rows: usize, blocks: &[&Matrix<E>]) -> Self {
        let cols: usize = blocks.iter().map(|b| b.cols).sum();
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for b in blocks {
                assert_eq!(b.rows, rows, "hstack row mismatch");
                data.extend_from_slice(b.row(r));
            }
        }
        Matrix { rows, cols, data }
    }

    /// Block-diagonal sum.
    pub fn block_diagonal<F: Field<Elem = E>>(field: &F, blocks: &[&Matrix<E>]) -> Self {
        let rows: usize = blocks.iter().map(|b| b.rows).sum();
        let cols: usize = blocks.iter().map(|b| b.cols).sum();
        let mut m = Self::zeros(field, rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for r in 0..b.rows {
                for c in 0..b.cols {
                    m.set(r0 + r, c0 + c, b.get(r, c).clone());
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        m
    }

    pub fn mul<F: Field<Elem = E>>(&self, field: &F, rhs: &Matrix<E>) -> Matrix<E> {
        assert_eq!(self.cols, rhs.rows, "matrix product shape mismatch");
        let mut out = Self::zeros(field, self.rows, rhs.cols);
        for r in 0..self.rows {
            let out_row = &mut out.data[r * rhs.cols..(r + 1) * rhs.cols];
            for k in 0..self.cols {
                let a = self.get(r, k);
                if !field.is_zero(a) {
                    field.axpy(out_row, a, rhs.row(k));
                }
            }
        }
        out
    }

    pub fn mul_vec<F: Field<Elem = E>>(&self, field: &F, v: &[E]) -> Vec<E> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape mismatch");
        let mut out = vec![field.zero(); self.rows];
        for (k, vk) in v.iter().enumerate() {
            if field.is_zero(vk) {
                continue;
            }
            for (r, o) in out.iter_mut().enumerate() {
                let a = self.get(r, k);
                if !field.is_zero(a) {
                    field.add_assign(o, &field.mul(a, vk));
                }
            }
        }
        out
    }

    pub fn add<F: Field<Elem = E>>(&self, field: &F, rhs: &Matrix<E>) -> Matrix<E> {
        assert_eq!(self.shape(), rhs.shape(), "matrix sum shape mismatch");
        let data = self
            .data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| field.add(a, b))
            .collect();
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn sub<F: Field<Elem = E>>(&self, field: &F, rhs: &Matrix<E>) -> Matrix<E> {
        assert_eq!(self.shape(), rhs.shape(), "matrix difference shape mismatch");
        let data = self
            .data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| field.sub(a, b))
            .collect();
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn is_zero<F: Field<Elem = E>>(&self, field: &F) -> bool {
        self.data.iter().all(|x| field.is_zero(x))
    }

    /// Kronecker product `self ⊗ rhs`, row index `i * rhs.rows + k`.
    pub fn kronecker<F: Field<Elem = E>>(&self, field: &F, rhs: &Matrix<E>) -> Matrix<E> {
        let mut out = Self::zeros(field, self.rows * rhs.rows, self.cols * rhs.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if field.is_zero(a) {
                    continue;
                }
                for k in 0..rhs.rows {
                    for l in 0..rhs.cols {
                        let b = rhs.get(k, l);
                        if !field.is_zero(b) {
                            out.set(i * rhs.rows + k, j * rhs.cols + l, field.mul(a, b));
                        }
                    }
                }
            }
        }
        out
    }
}

/// A basis label. Labels are structured so that bases stay readable and
/// orbit bookkeeping is exact.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Label {
    /// A plain index.
    Index(usize),
    /// A pointed map, or the canonical representative of an orbit of maps,
    /// listed by the images of `1..=n`.
    Map(Vec<u8>),
    /// A pure tensor of basis indices; for `L(A, M)` slot 0 is the module slot.
    Tensor(Vec<u32>),
    /// A coordinate function on `{1..n}`.
    Coord(u32),
    /// A wedge of coordinate functions with strictly increasing indices.
    Wedge(Vec<u32>),
    /// Basis element of a tensor product.
    Pair(Box<Label>, Box<Label>),
    /// Basis element of a direct summand.
    Summand(u32, Box<Label>),
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn join<T: fmt::Display>(xs: &[T], sep: &str) -> String {
            xs.iter().map(ToString::to_string).collect::<Vec<_>>().join(sep)
        }
        match self {
            Label::Index(i) => write!(f, "#{i}"),
            Label::Map(im) => write!(f, "<{}>", join(im, ",")),
            Label::Tensor(t) => write!(f, "{}", join(t, "⊗")),
            Label::Coord(i) => write!(f, "φ{i}"),
            Label::Wedge(w) => {
                let parts: Vec<String> = w.iter().map(|i| format!("φ{i}")).collect();
                write!(f, "{}", parts.join("∧"))
            }
            Label::Pair(a, b) => write!(f, "({a} | {b})"),
            Label::Summand(j, l) => write!(f, "[{j}]{l}"),
        }
    }
}

/// A finite-dimensional space with an ordered basis of distinct labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledSpace {
    labels: Arc<Vec<Label>>,
}

impl LabeledSpace {
    pub fn new(labels: Vec<Label>) -> Self {
        debug_assert!(
            {
                let mut s = labels.clone();
                s.sort();
                s.windows(2).all(|w| w[0] != w[1])
            },
            "labels must be distinct"
        );
        LabeledSpace {
            labels: Arc::new(labels),
        }
    }

    pub fn indexed(dim: usize) -> Self {
        LabeledSpace::new((0..dim).map(Label::Index).collect())
    }

    pub fn zero() -> Self {
        LabeledSpace::new(Vec::new())
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &Label {
        &self.labels[i]
    }

    pub fn position(&self, label: &Label) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }
}

/// A linear map between labeled spaces; one matrix column per domain label.
#[derive(Clone, Debug)]
pub struct LinearMap<E> {
    pub domain: LabeledSpace,
    pub codomain: LabeledSpace,
    pub matrix: Matrix<E>,
}

impl<E: Clone> LinearMap<E> {
    pub fn new(domain: LabeledSpace, codomain: LabeledSpace, matrix: Matrix<E>) -> Result<Self> {
        if matrix.shape() != (codomain.dim(), domain.dim()) {
            return Err(Error::MalformedAction(format!(
                "matrix shape {:?} does not match {} x {}",
                matrix.shape(),
                codomain.dim(),
                domain.dim()
            )));
        }
        Ok(LinearMap {
            domain,
            codomain,
            matrix,
        })
    }

    pub fn on_indexed(matrix: Matrix<E>) -> Self {
        LinearMap {
            domain: LabeledSpace::indexed(matrix.cols()),
            codomain: LabeledSpace::indexed(matrix.rows()),
            matrix,
        }
    }

    pub fn is_endomorphism(&self) -> bool {
        self.domain == self.codomain
    }
}

/// Output of row reduction.
#[derive(Clone, Debug)]
pub struct Rref<E> {
    pub reduced: Matrix<E>,
    pub pivots: Vec<usize>,
}

impl<E> Rref<E> {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

/// Reduced row-echelon form. Over `Q` the pivot in each column is the
/// candidate entry of smallest bit size.
pub fn rref<F: Field>(field: &F, m: &Matrix<F::Elem>) -> Rref<F::Elem> {
    let (rows, cols) = m.shape();
    let mut data: Vec<Vec<F::Elem>> = m.clone().into_rows();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let mut best: Option<(usize, u64)> = None;
        for (i, row) in data.iter().enumerate().skip(r) {
            let v = &row[c];
            if !field.is_zero(v) {
                let w = field.pivot_weight(v);
                if best.is_none_or(|(_, bw)| w < bw) {
                    best = Some((i, w));
                    if w == 0 {
                        break;
                    }
                }
            }
        }
        let Some((p, _)) = best else { continue };
        data.swap(r, p);
        let inv = field.inv(&data[r][c]);
        field.scale(&mut data[r][c..], &inv);
        let pivot_row = data[r].clone();
        let eliminate = |i: usize, row: &mut Vec<F::Elem>| {
            if i == r || field.is_zero(&row[c]) {
                return;
            }
            let factor = field.neg(&row[c]);
            field.axpy(&mut row[c..], &factor, &pivot_row[c..]);
        };
        if rows * (cols - c) >= PARALLEL_ELIMINATION_THRESHOLD {
            data.par_iter_mut()
                .enumerate()
                .for_each(|(i, row)| eliminate(i, row));
        } else {
            for (i, row) in data.iter_mut().enumerate() {
                eliminate(i, row);
            }
        }
        pivots.push(c);
        r += 1;
    }
    let reduced = Matrix::from_rows(cols, data);
    Rref { reduced, pivots }
}

pub fn rank<F: Field>(field: &F, m: &Matrix<F::Elem>) -> usize {
    if m.rows() == 0 || m.cols() == 0 {
        return 0;
    }
    // Row reduction cost scales with rows * cols * rank; reduce the shorter side.
    if m.rows() > m.cols() {
        rref(field, &m.transpose()).rank()
    } else {
        rref(field, m).rank()
    }
}

/// Kernel basis read off the reduced form: one vector per free column, with
/// a 1 in that column and zeros in every other free column.
pub fn kernel_from_rref<F: Field>(field: &F, rr: &Rref<F::Elem>) -> Vec<Vec<F::Elem>> {
    let cols = rr.reduced.cols();
    let mut is_pivot = vec![false; cols];
    for &p in &rr.pivots {
        is_pivot[p] = true;
    }
    let mut basis = Vec::new();
    for free in (0..cols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![field.zero(); cols];
        v[free] = field.one();
        for (i, &p) in rr.pivots.iter().enumerate() {
            let a = rr.reduced.get(i, free);
            if !field.is_zero(a) {
                v[p] = field.neg(a);
            }
        }
        basis.push(v);
    }
    basis
}

/// Columns of the domain that are not pivots; the free coordinates of
/// [`kernel_from_rref`].
pub fn free_columns<E>(rr: &Rref<E>) -> Vec<usize> {
    let cols = rr.reduced.cols();
    let mut is_pivot = vec![false; cols];
    for &p in &rr.pivots {
        is_pivot[p] = true;
    }
    (0..cols).filter(|&c| !is_pivot[c]).collect()
}

pub fn kernel_basis<F: Field>(field: &F, m: &Matrix<F::Elem>) -> Vec<Vec<F::Elem>> {
    kernel_from_rref(field, &rref(field, m))
}

/// Linearly independent columns of `m` spanning its image.
pub fn image_basis<F: Field>(field: &F, m: &Matrix<F::Elem>) -> Vec<Vec<F::Elem>> {
    let rr = rref(field, m);
    rr.pivots.iter().map(|&c| m.column(c)).collect()
}

/// A quotient `ambient / relations` with a chosen complement basis.
///
/// The surviving basis is a set of ambient coordinates; `section` embeds
/// them as unit vectors and `projection` expresses any ambient vector in the
/// surviving coordinates modulo the relations.
#[derive(Clone, Debug)]
pub struct QuotientPresentation<E> {
    pub ambient: LabeledSpace,
    pub quotient: LabeledSpace,
    /// Ambient indices of the surviving coordinates, increasing.
    pub survivors: Vec<usize>,
    pub projection: Matrix<E>,
    pub section: Matrix<E>,
}

impl<E: Clone> QuotientPresentation<E> {
    pub fn dim(&self) -> usize {
        self.survivors.len()
    }

    pub fn project<F: Field<Elem = E>>(&self, field: &F, v: &[E]) -> Vec<E> {
        self.projection.mul_vec(field, v)
    }
}

/// Incrementally built echelon basis of a subspace of `K^dim`.
///
/// Each stored row is reduced against all earlier rows, so reducing a vector
/// by the rows in insertion order clears every pivot coordinate.
#[derive(Clone, Debug)]
pub struct Echelon<F: Field> {
    field: F,
    dim: usize,
    rows: Vec<(usize, Vec<F::Elem>)>,
    pivot_of: Vec<Option<usize>>,
    /// Pivot search order; the first nonzero coordinate in this order wins.
    order: Vec<usize>,
}

impl<F: Field> Echelon<F> {
    pub fn new(field: &F, dim: usize) -> Self {
        Self::with_order(field, (0..dim).collect())
    }

    /// Pivots are chosen by scanning coordinates in `order`.
    pub fn with_order(field: &F, order: Vec<usize>) -> Self {
        let dim = order.len();
        Echelon {
            field: field.clone(),
            dim,
            rows: Vec::new(),
            pivot_of: vec![None; dim],
            order,
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn reduce(&self, v: &mut [F::Elem]) {
        for (p, row) in &self.rows {
            if !self.field.is_zero(&v[*p]) {
                let factor = self.field.neg(&v[*p]);
                self.field.axpy(v, &factor, row);
            }
        }
    }

    pub fn contains(&self, v: &[F::Elem]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(|x| self.field.is_zero(x))
    }

    /// Adds `v` to the span; returns false when it was already contained.
    pub fn insert(&mut self, mut v: Vec<F::Elem>) -> bool {
        assert_eq!(v.len(), self.dim, "vector length mismatch");
        self.reduce(&mut v);
        let Some(&p) = self.order.iter().find(|&&i| !self.field.is_zero(&v[i])) else {
            return false;
        };
        let inv = self.field.inv(&v[p]);
        self.field.scale(&mut v, &inv);
        self.pivot_of[p] = Some(self.rows.len());
        self.rows.push((p, v));
        true
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.rows.iter().map(|(p, _)| *p).collect()
    }

    pub fn is_pivot(&self, coord: usize) -> bool {
        self.pivot_of[coord].is_some()
    }

    /// Quotient of `K^dim` by the span, with non-pivot coordinates surviving.
    pub fn quotient(&self, ambient: LabeledSpace) -> QuotientPresentation<F::Elem> {
        let field = &self.field;
        // Fully reduce the stored rows against each other so that every row
        // is zero on all pivots but its own.
        let mut rows: Vec<(usize, Vec<F::Elem>)> = self.rows.clone();
        for k in (0..rows.len()).rev() {
            let (pk, row_k) = rows[k].clone();
            for (_, row) in rows.iter_mut().take(k) {
                if !field.is_zero(&row[pk]) {
                    let factor = field.neg(&row[pk]);
                    field.axpy(row, &factor, &row_k);
                }
            }
        }
        let survivors: Vec<usize> = (0..self.dim).filter(|&c| !self.is_pivot(c)).collect();
        let q = survivors.len();
        let mut projection = Matrix::zeros(field, q, self.dim);
        let mut section = Matrix::zeros(field, self.dim, q);
        for (s_idx, &s) in survivors.iter().enumerate() {
            projection.set(s_idx, s, field.one());
            section.set(s, s_idx, field.one());
            for (p, row) in &rows {
                let a = &row[s];
                if !field.is_zero(a) {
                    projection.set(s_idx, *p, field.neg(a));
                }
            }
        }
        let quotient = LabeledSpace::new(
            survivors
                .iter()
                .map(|&i| ambient.label(i).clone())
                .collect(),
        );
        QuotientPresentation {
            ambient,
            quotient,
            survivors,
            projection,
            section,
        }
    }
}

/// Cokernel of `m`; the surviving basis favors the earliest codomain labels.
pub fn cokernel<F: Field>(field: &F, m: &LinearMap<F::Elem>) -> QuotientPresentation<F::Elem> {
    let n = m.codomain.dim();
    // Pivots are taken from the last coordinates first, so the earliest
    // labels survive.
    let mut ech = Echelon::with_order(field, (0..n).rev().collect());
    for c in 0..m.matrix.cols() {
        ech.insert(m.matrix.column(c));
        if ech.rank() == n {
            break;
        }
    }
    ech.quotient(m.codomain.clone())
}

/// Some `x` with `m x = target`, or `None` when `target` is not in the image.
pub fn solve<F: Field>(
    field: &F,
    m: &Matrix<F::Elem>,
    target: &[F::Elem],
) -> Option<Vec<F::Elem>> {
    assert_eq!(m.rows(), target.len(), "target length mismatch");
    let cols = m.cols();
    let col = Matrix::from_columns(field, m.rows(), &[target.to_vec()]);
    let aug = Matrix::hstack(m.rows(), &[m, &col]);
    let rr = rref(field, &aug);
    if rr.pivots.last() == Some(&cols) {
        return None;
    }
    let mut x = vec![field.zero(); cols];
    for (i, &p) in rr.pivots.iter().enumerate() {
        x[p] = rr.reduced.get(i, cols).clone();
    }
    Some(x)
}

fn check_generators<E: Clone>(dim: usize, generators: &[LinearMap<E>]) -> Result<()> {
    for (i, g) in generators.iter().enumerate() {
        if g.matrix.shape() != (dim, dim) {
            return Err(Error::MalformedAction(format!(
                "generator {i} has shape {:?}, expected {dim}x{dim}",
                g.matrix.shape()
            )));
        }
    }
    Ok(())
}

/// Fixed vectors of every generator: `∩_g Ker(g - id)`.
pub fn invariants<F: Field>(
    field: &F,
    space: &LabeledSpace,
    generators: &[LinearMap<F::Elem>],
) -> Result<Vec<Vec<F::Elem>>> {
    let n = space.dim();
    check_generators(n, generators)?;
    let id = Matrix::identity(field, n);
    let blocks: Vec<Matrix<F::Elem>> = generators
        .iter()
        .map(|g| g.matrix.sub(field, &id))
        .collect();
    if blocks.is_empty() {
        return Ok(kernel_basis(field, &Matrix::zeros(field, 0, n)));
    }
    let refs: Vec<&Matrix<F::Elem>> = blocks.iter().collect();
    let stacked = Matrix::vstack(n, &refs);
    Ok(kernel_basis(field, &stacked))
}

/// Coinvariants: `space / span{g v - v}`.
pub fn coinvariants<F: Field>(
    field: &F,
    space: &LabeledSpace,
    generators: &[LinearMap<F::Elem>],
) -> Result<QuotientPresentation<F::Elem>> {
    let n = space.dim();
    check_generators(n, generators)?;
    let id = Matrix::identity(field, n);
    let blocks: Vec<Matrix<F::Elem>> = generators
        .iter()
        .map(|g| g.matrix.sub(field, &id))
        .collect();
    let refs: Vec<&Matrix<F::Elem>> = blocks.iter().collect();
    let relations = Matrix::hstack(n, &refs);
    let map = LinearMap {
        domain: LabeledSpace::indexed(relations.cols()),
        codomain: space.clone(),
        matrix: relations,
    };
    Ok(cokernel(field, &map))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};
    use proptest::prelude::*;

    fn q_matrix(rows: &[&[i64]]) -> Matrix<crate::field::Rational> {
        let q = Rationals;
        let cols = rows.first().map_or(0, |r| r.len());
        Matrix::from_rows(
            cols,
            rows.iter()
                .map(|r| r.iter().map(|&v| q.from_i64(v)).collect())
                .collect(),
        )
    }

    fn f2_matrix(rows: &[&[u32]]) -> Matrix<u32> {
        let cols = rows.first().map_or(0, |r| r.len());
        Matrix::from_rows(cols, rows.iter().map(|r| r.to_vec()).collect())
    }

    #[test]
    fn rref_examples() {
        let q = Rationals;
        let id = Matrix::identity(&q, 2);
        let rr = rref(&q, &id);
        assert_eq!((rr.rank(), rr.pivots.clone()), (2, vec![0, 1]));
        let z = Matrix::zeros(&q, 2, 2);
        assert_eq!(rref(&q, &z).pivots, Vec::<usize>::new());
        let f2 = PrimeField::new(2).unwrap();
        let m = f2_matrix(&[&[1, 1], &[1, 1]]);
        let rr = rref(&f2, &m);
        assert_eq!((rr.rank(), rr.pivots), (1, vec![0]));
    }

    #[test]
    fn kernel_examples() {
        let q = Rationals;
        assert!(kernel_basis(&q, &Matrix::identity(&q, 3)).is_empty());
        assert_eq!(kernel_basis(&q, &Matrix::zeros(&q, 3, 3)).len(), 3);
        let f2 = PrimeField::new(2).unwrap();
        let k = kernel_basis(&f2, &f2_matrix(&[&[1, 1], &[1, 1]]));
        assert_eq!(k, vec![vec![1, 1]]);
    }

    #[test]
    fn image_examples() {
        let q = Rationals;
        assert_eq!(image_basis(&q, &Matrix::identity(&q, 2)).len(), 2);
        assert!(image_basis(&q, &Matrix::zeros(&q, 2, 2)).is_empty());
        assert_eq!(image_basis(&q, &q_matrix(&[&[2, 4]])).len(), 1);
    }

    #[test]
    fn cokernel_examples() {
        let q = Rationals;
        let id = LinearMap::on_indexed(Matrix::identity(&q, 2));
        assert_eq!(cokernel(&q, &id).dim(), 0);
        let z = LinearMap::on_indexed(Matrix::zeros(&q, 2, 2));
        assert_eq!(cokernel(&q, &z).dim(), 2);
        let e0 = LinearMap::on_indexed(q_matrix(&[&[1], &[0]]));
        let c = cokernel(&q, &e0);
        assert_eq!(c.dim(), 1);
        assert!(c.projection.mul(&q, &e0.matrix).is_zero(&q));
        assert!(c
            .projection
            .mul(&q, &c.section)
            .sub(&q, &Matrix::identity(&q, 1))
            .is_zero(&q));
    }

    #[test]
    fn solve_examples() {
        let q = Rationals;
        let v = vec![q.from_i64(3), q.from_i64(-1)];
        assert_eq!(solve(&q, &Matrix::identity(&q, 2), &v), Some(v.clone()));
        assert_eq!(solve(&q, &Matrix::zeros(&q, 2, 2), &v), None);
        let f2 = PrimeField::new(2).unwrap();
        let m = f2_matrix(&[&[1, 1], &[1, 1]]);
        let x = solve(&f2, &m, &[1, 1]).expect("target is in the image");
        assert_eq!(m.mul_vec(&f2, &x), vec![1, 1]);
        assert_eq!(solve(&f2, &m, &[1, 0]), None);
    }

    fn swap_on_k2<F: Field>(field: &F) -> LinearMap<F::Elem> {
        let mut m = Matrix::zeros(field, 2, 2);
        m.set(0, 1, field.one());
        m.set(1, 0, field.one());
        LinearMap::on_indexed(m)
    }

    /// Σ₂ swapping the tensor factors of (K²)⊗(K²).
    fn tensor_swap<F: Field>(field: &F) -> LinearMap<F::Elem> {
        let mut m = Matrix::zeros(field, 4, 4);
        for i in 0..2 {
            for j in 0..2 {
                m.set(j * 2 + i, i * 2 + j, field.one());
            }
        }
        LinearMap::on_indexed(m)
    }

    #[test]
    fn invariants_examples() {
        let q = Rationals;
        let space = LabeledSpace::indexed(3);
        let id = LinearMap::on_indexed(Matrix::identity(&q, 3));
        assert_eq!(invariants(&q, &space, &[id.clone(), id]).unwrap().len(), 3);
        let inv = invariants(&q, &LabeledSpace::indexed(2), &[swap_on_k2(&q)]).unwrap();
        assert_eq!(inv, vec![vec![q.one(), q.one()]]);
        let inv = invariants(&q, &LabeledSpace::indexed(4), &[tensor_swap(&q)]).unwrap();
        assert_eq!(inv.len(), 3);
        let bad = LinearMap::on_indexed(Matrix::identity(&q, 2));
        assert!(matches!(
            invariants(&q, &space, &[bad]),
            Err(Error::MalformedAction(_))
        ));
    }

    #[test]
    fn coinvariants_examples() {
        let q = Rationals;
        let space = LabeledSpace::indexed(3);
        let id = LinearMap::on_indexed(Matrix::identity(&q, 3));
        assert_eq!(coinvariants(&q, &space, &[id]).unwrap().dim(), 3);
        let c = coinvariants(&q, &LabeledSpace::indexed(2), &[swap_on_k2(&q)]).unwrap();
        assert_eq!(c.dim(), 1);
        assert_eq!(c.survivors, vec![0]);
        let c = coinvariants(&q, &LabeledSpace::indexed(4), &[tensor_swap(&q)]).unwrap();
        assert_eq!(c.dim(), 3);
    }

    fn arb_f5_matrix() -> impl Strategy<Value = Matrix<u32>> {
        (1usize..6, 1usize..6).prop_flat_map(|(r, c)| {
            prop::collection::vec(0u32..5, r * c).prop_map(move |d| Matrix::from_vec(r, c, d))
        })
    }

    fn arb_q_matrix() -> impl Strategy<Value = Matrix<crate::field::Rational>> {
        (1usize..5, 1usize..5).prop_flat_map(|(r, c)| {
            prop::collection::vec(-3i64..4, r * c).prop_map(move |d| {
                Matrix::from_vec(r, c, d.into_iter().map(|v| Rationals.from_i64(v)).collect())
            })
        })
    }

    proptest! {
        #[test]
        fn rank_nullity_and_transpose_f5(m in arb_f5_matrix()) {
            let f = PrimeField::new(5).unwrap();
            let r = rref(&f, &m).rank();
            prop_assert_eq!(r, rref(&f, &m.transpose()).rank());
            let k = kernel_basis(&f, &m);
            prop_assert_eq!(k.len() + r, m.cols());
            for v in &k {
                prop_assert!(m.mul_vec(&f, v).iter().all(|x| *x == 0));
            }
            let c = cokernel(&f, &LinearMap::on_indexed(m.clone()));
            prop_assert_eq!(c.dim(), m.rows() - r);
            prop_assert!(c.projection.mul(&f, &m).is_zero(&f));
        }

        #[test]
        fn rank_nullity_and_transpose_q(m in arb_q_matrix()) {
            let q = Rationals;
            let r = rref(&q, &m).rank();
            prop_assert_eq!(r, rref(&q, &m.transpose()).rank());
            let k = kernel_basis(&q, &m);
            prop_assert_eq!(k.len() + r, m.cols());
            for v in &k {
                prop_assert!(m.mul_vec(&q, v).iter().all(|x| q.is_zero(x)));
            }
            prop_assert_eq!(image_basis(&q, &m).len(), r);
            let c = cokernel(&q, &LinearMap::on_indexed(m.clone()));
            prop_assert!(c.projection.mul(&q, &m).is_zero(&q));
        }

        #[test]
        fn solve_agrees_with_membership(m in arb_f5_matrix(), seed in prop::collection::vec(0u32..5, 6)) {
            let f = PrimeField::new(5).unwrap();
            let x: Vec<u32> = seed.into_iter().cycle().take(m.cols()).collect();
            let b = m.mul_vec(&f, &x);
            let sol = solve(&f, &m, &b).expect("constructed target lies in the image");
            prop_assert_eq!(m.mul_vec(&f, &sol), b);
        }
    }
}
