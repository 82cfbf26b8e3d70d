//! Exact linear algebra over F_p.
//!
//! Vectors cross the public boundary as dense `Vec<u32>` with entries in
//! `[0, p)`. Internally every elimination runs on one of two row backends:
//! packed bit rows for p = 2 and dense word rows for odd p. Pivoting is
//! always "lowest column first" so results are reproducible bit for bit.

use std::fmt::Debug;

use crate::error::{BvhError, Result};
use crate::field::Fp;

pub(crate) trait Row: Clone + Debug + Send + Sync {
    fn zero(len: usize) -> Self;
    fn from_dense(v: &[u32]) -> Self;
    fn from_sparse(len: usize, entries: &[(usize, u32)], f: Fp) -> Self;
    fn to_dense(&self) -> Vec<u32>;
    fn get(&self, i: usize) -> u32;
    fn lead_from(&self, from: usize) -> Option<usize>;
    /// `self += c * other`, touching only positions `>= from`.
    fn axpy(&mut self, c: u32, other: &Self, from: usize, f: Fp);
    fn scale(&mut self, c: u32, f: Fp);
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct BitRow {
    words: Vec<u64>,
    len: usize,
}

impl Row for BitRow {
    fn zero(len: usize) -> Self {
        BitRow {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    fn from_dense(v: &[u32]) -> Self {
        let mut r = Self::zero(v.len());
        for (i, &x) in v.iter().enumerate() {
            if x & 1 == 1 {
                r.words[i / 64] |= 1 << (i % 64);
            }
        }
        r
    }

    fn from_sparse(len: usize, entries: &[(usize, u32)], _f: Fp) -> Self {
        let mut r = Self::zero(len);
        for &(i, x) in entries {
            if x & 1 == 1 {
                r.words[i / 64] ^= 1 << (i % 64);
            }
        }
        r
    }

    fn to_dense(&self) -> Vec<u32> {
        (0..self.len).map(|i| self.get(i)).collect()
    }

    #[inline]
    fn get(&self, i: usize) -> u32 {
        ((self.words[i / 64] >> (i % 64)) & 1) as u32
    }

    fn lead_from(&self, from: usize) -> Option<usize> {
        let mut w = from / 64;
        if w >= self.words.len() {
            return None;
        }
        let first = self.words[w] & (!0u64 << (from % 64));
        if first != 0 {
            return Some(w * 64 + first.trailing_zeros() as usize);
        }
        w += 1;
        while w < self.words.len() {
            let x = self.words[w];
            if x != 0 {
                return Some(w * 64 + x.trailing_zeros() as usize);
            }
            w += 1;
        }
        None
    }

    #[inline]
    fn axpy(&mut self, c: u32, other: &Self, from: usize, _f: Fp) {
        if c & 1 == 0 {
            return;
        }
        let start = from / 64;
        for (a, b) in self.words[start..].iter_mut().zip(&other.words[start..]) {
            *a ^= *b;
        }
    }

    fn scale(&mut self, c: u32, _f: Fp) {
        if c & 1 == 0 {
            self.words.iter_mut().for_each(|w| *w = 0);
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct DenseRow(Vec<u32>);

impl Row for DenseRow {
    fn zero(len: usize) -> Self {
        DenseRow(vec![0; len])
    }

    fn from_dense(v: &[u32]) -> Self {
        DenseRow(v.to_vec())
    }

    fn from_sparse(len: usize, entries: &[(usize, u32)], f: Fp) -> Self {
        let mut r = vec![0; len];
        for &(i, x) in entries {
            r[i] = f.add(r[i], x);
        }
        DenseRow(r)
    }

    fn to_dense(&self) -> Vec<u32> {
        self.0.clone()
    }

    #[inline]
    fn get(&self, i: usize) -> u32 {
        self.0[i]
    }

    fn lead_from(&self, from: usize) -> Option<usize> {
        self.0[from..].iter().position(|&x| x != 0).map(|i| i + from)
    }

    fn axpy(&mut self, c: u32, other: &Self, from: usize, f: Fp) {
        if c == 0 {
            return;
        }
        let p = f.p() as u64;
        let c = c as u64;
        // Barrett reduction, valid since a + c*b < p^2 < 2^32
        let m = (1u64 << 32) / p;
        for (a, &b) in self.0[from..].iter_mut().zip(&other.0[from..]) {
            if b != 0 {
                let s = *a as u64 + c * b as u64;
                let r = s - ((s * m) >> 32) * p;
                *a = if r >= p { r - p } else { r } as u32;
            }
        }
    }

    fn scale(&mut self, c: u32, f: Fp) {
        for a in self.0.iter_mut() {
            *a = f.mul(*a, c);
        }
    }
}

/// Row echelon form with one row per pivot column; the pivot entry is 1.
#[derive(Clone, Debug)]
pub(crate) struct Echelon<R> {
    f: Fp,
    dim: usize,
    rows: Vec<R>,
    leads: Vec<usize>,
    pivot_row: Vec<u32>,
    reduced: bool,
}

const NONE: u32 = u32::MAX;

impl<R: Row> Echelon<R> {
    pub fn new(f: Fp, dim: usize) -> Self {
        Echelon {
            f,
            dim,
            rows: Vec::new(),
            leads: Vec::new(),
            pivot_row: vec![NONE; dim],
            reduced: true,
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduce leading terms only; returns the final lead if nonzero.
    fn reduce_leading(&self, v: &mut R) -> Option<usize> {
        let mut from = 0;
        loop {
            let q = v.lead_from(from)?;
            let r = self.pivot_row[q];
            if r == NONE {
                return Some(q);
            }
            let c = v.get(q);
            v.axpy(self.f.neg(c), &self.rows[r as usize], q, self.f);
            from = q;
        }
    }

    /// Insert without keeping the form reduced. Returns true if `v` was independent.
    pub fn insert(&mut self, mut v: R) -> bool {
        match self.reduce_leading(&mut v) {
            None => false,
            Some(q) => {
                let c = v.get(q);
                if c != 1 {
                    v.scale(self.f.inv(c), self.f);
                }
                self.pivot_row[q] = self.rows.len() as u32;
                self.rows.push(v);
                self.leads.push(q);
                self.reduced = false;
                true
            }
        }
    }

    /// Back-substitute to reduced row echelon form.
    pub fn make_reduced(&mut self) {
        if self.reduced {
            return;
        }
        let mut order: Vec<usize> = (0..self.rows.len()).collect();
        order.sort_by_key(|&i| std::cmp::Reverse(self.leads[i]));
        // rows with larger lead are already reduced when we reach a smaller one
        for &i in &order {
            let lead = self.leads[i];
            let mut row = std::mem::replace(&mut self.rows[i], R::zero(0));
            let mut from = lead + 1;
            while let Some(q) = row.lead_from(from) {
                let r = self.pivot_row[q];
                if r != NONE {
                    let c = row.get(q);
                    row.axpy(self.f.neg(c), &self.rows[r as usize], q, self.f);
                }
                from = q + 1;
            }
            self.rows[i] = row;
        }
        self.reduced = true;
    }

    /// Full reduction against every row; works for reduced or unreduced forms.
    fn reduce_full(&self, v: &mut R) {
        let mut from = 0;
        while let Some(q) = v.lead_from(from) {
            let r = self.pivot_row[q];
            if r != NONE {
                let c = v.get(q);
                v.axpy(self.f.neg(c), &self.rows[r as usize], q, self.f);
            }
            from = q + 1;
        }
    }

    /// Kernel of the matrix whose rows were inserted. Requires reduced form.
    pub fn kernel(&mut self) -> Vec<Vec<u32>> {
        self.make_reduced();
        let f = self.f;
        let mut out = Vec::new();
        for free in 0..self.dim {
            if self.pivot_row[free] != NONE {
                continue;
            }
            let mut v = vec![0u32; self.dim];
            v[free] = 1;
            for (row, &lead) in self.rows.iter().zip(&self.leads) {
                let c = row.get(free);
                if c != 0 {
                    v[lead] = f.neg(c);
                }
            }
            out.push(v);
        }
        out
    }

    /// Rows sorted by pivot column.
    pub fn sorted_rows(&self) -> Vec<(usize, &R)> {
        let mut v: Vec<(usize, &R)> = self.leads.iter().copied().zip(self.rows.iter()).collect();
        v.sort_by_key(|(l, _)| *l);
        v
    }
}

#[derive(Clone, Debug)]
enum Backend {
    Bits(Echelon<BitRow>),
    Dense(Echelon<DenseRow>),
}

macro_rules! dispatch {
    ($self:expr, $e:ident => $body:expr) => {
        match $self {
            Backend::Bits($e) => $body,
            Backend::Dense($e) => $body,
        }
    };
}

impl Backend {
    fn new(f: Fp, dim: usize) -> Self {
        if f.is_two() {
            Backend::Bits(Echelon::new(f, dim))
        } else {
            Backend::Dense(Echelon::new(f, dim))
        }
    }

    fn insert_dense(&mut self, v: &[u32]) -> bool {
        dispatch!(self, e => e.insert(Row::from_dense(v)))
    }

    fn insert_sparse(&mut self, dim: usize, entries: &[(usize, u32)], f: Fp) -> bool {
        dispatch!(self, e => e.insert(Row::from_sparse(dim, entries, f)))
    }

    fn rank(&self) -> usize {
        dispatch!(self, e => e.rank())
    }

    fn make_reduced(&mut self) {
        dispatch!(self, e => e.make_reduced())
    }

    fn kernel(&mut self) -> Vec<Vec<u32>> {
        dispatch!(self, e => e.kernel())
    }

    fn rows_dense(&self) -> Vec<(usize, Vec<u32>)> {
        dispatch!(self, e => e.sorted_rows().into_iter().map(|(l, r)| (l, r.to_dense())).collect())
    }

    fn residual(&self, v: &[u32]) -> Vec<u32> {
        dispatch!(self, e => {
            let mut r = Row::from_dense(v);
            e.reduce_full(&mut r);
            r.to_dense()
        })
    }
}

/// A sparse matrix over F_p stored row by row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    f: Fp,
    rows: usize,
    cols: usize,
    data: Vec<Vec<(usize, u32)>>,
}

impl SparseMatrix {
    pub fn zeros(f: Fp, rows: usize, cols: usize) -> Self {
        SparseMatrix {
            f,
            rows,
            cols,
            data: vec![Vec::new(); rows],
        }
    }

    pub fn identity(f: Fp, n: usize) -> Self {
        let mut m = Self::zeros(f, n, n);
        for i in 0..n {
            m.data[i].push((i, 1));
        }
        m
    }

    /// Build from `(row, col, value)` triplets; duplicates are summed, zeros dropped.
    pub fn from_triplets(
        f: Fp,
        rows: usize,
        cols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, u32)>,
    ) -> Result<Self> {
        let mut dense_rows: Vec<std::collections::BTreeMap<usize, u32>> = vec![Default::default(); rows];
        for (r, c, v) in triplets {
            if r >= rows || c >= cols {
                return Err(BvhError::DimensionMismatch {
                    expected: rows.max(cols),
                    got: r.max(c),
                });
            }
            let e = dense_rows[r].entry(c).or_insert(0);
            *e = f.add(*e, v % f.p());
        }
        let data = dense_rows
            .into_iter()
            .map(|m| m.into_iter().filter(|&(_, v)| v != 0).collect())
            .collect();
        Ok(SparseMatrix { f, rows, cols, data })
    }

    pub fn from_dense(f: Fp, m: &[Vec<u32>], cols: usize) -> Result<Self> {
        let trip = m.iter().enumerate().flat_map(|(r, row)| {
            row.iter().enumerate().map(move |(c, &v)| (r, c, v))
        });
        Self::from_triplets(f, m.len(), cols, trip)
    }

    pub fn field(&self) -> Fp {
        self.f
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[(usize, u32)] {
        &self.data[r]
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(Vec::len).sum()
    }

    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r]
            .iter()
            .find(|(cc, _)| *cc == c)
            .map(|&(_, v)| v)
            .unwrap_or(0)
    }

    pub fn to_dense(&self) -> Vec<Vec<u32>> {
        let mut out = vec![vec![0; self.cols]; self.rows];
        for (r, row) in self.data.iter().enumerate() {
            for &(c, v) in row {
                out[r][c] = v;
            }
        }
        out
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut data = vec![Vec::new(); self.cols];
        for (r, row) in self.data.iter().enumerate() {
            for &(c, v) in row {
                data[c].push((r, v));
            }
        }
        SparseMatrix {
            f: self.f,
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    pub fn mul_vec(&self, v: &[u32]) -> Result<Vec<u32>> {
        if v.len() != self.cols {
            return Err(BvhError::DimensionMismatch {
                expected: self.cols,
                got: v.len(),
            });
        }
        Ok(self
            .data
            .iter()
            .map(|row| {
                row.iter()
                    .fold(0, |acc, &(c, x)| self.f.add(acc, self.f.mul(x, v[c])))
            })
            .collect())
    }

    pub fn mul(&self, other: &SparseMatrix) -> Result<SparseMatrix> {
        if self.cols != other.rows {
            return Err(BvhError::DimensionMismatch {
                expected: self.cols,
                got: other.rows,
            });
        }
        let mut trip = Vec::new();
        for (r, row) in self.data.iter().enumerate() {
            for &(k, a) in row {
                for &(c, b) in &other.data[k] {
                    trip.push((r, c, self.f.mul(a, b)));
                }
            }
        }
        Self::from_triplets(self.f, self.rows, other.cols, trip)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Vec::is_empty)
    }
}

/// Result of [`rank_kernel_image`].
#[derive(Clone, Debug)]
pub struct RankKernelImage {
    pub rank: usize,
    /// Kernel basis, one vector per non-pivot column, in increasing column order.
    pub kernel: Vec<Vec<u32>>,
    /// Columns of the input selected by the pivots of its row echelon form.
    pub pivot_columns: Vec<usize>,
    /// Basis of the column space (reduced echelon form).
    pub image: SubspaceBasis,
}

pub fn rank_kernel_image(m: &SparseMatrix) -> RankKernelImage {
    let f = m.field();
    let (rank, kernel, pivots) = eliminate_rows(f, m.cols(), (0..m.rows()).map(|r| m.row(r).to_vec()));
    let t = m.transpose();
    let image_vectors: Vec<Vec<u32>> = pivots
        .iter()
        .map(|&c| {
            let mut v = vec![0; m.rows()];
            for &(r, x) in t.row(c) {
                v[r] = x;
            }
            v
        })
        .collect();
    let image = SubspaceBasis::from_vectors(f, m.rows(), &image_vectors)
        .expect("image vectors have the ambient dimension");
    RankKernelImage {
        rank,
        kernel,
        pivot_columns: pivots,
        image,
    }
}

/// Streamed elimination of sparse rows: returns `(rank, kernel basis, pivot columns)`.
///
/// Rows are consumed one at a time, so the matrix is never materialised.
pub fn eliminate_rows(
    f: Fp,
    cols: usize,
    rows: impl Iterator<Item = Vec<(usize, u32)>>,
) -> (usize, Vec<Vec<u32>>, Vec<usize>) {
    let mut be = Backend::new(f, cols);
    for row in rows {
        if be.rank() == cols {
            break;
        }
        if !row.is_empty() {
            be.insert_sparse(cols, &row, f);
        }
    }
    let rank = be.rank();
    let kernel = be.kernel();
    let pivots = be.rows_dense().into_iter().map(|(l, _)| l).collect();
    (rank, kernel, pivots)
}

type SparseRow = Vec<(usize, u32)>;

/// Row echelon form over sparse rows, pivoting on the lowest column.
///
/// Suited to very sparse systems such as coboundary matrices, where fill-in stays small.
#[derive(Clone, Debug)]
pub struct SparseKernel {
    f: Fp,
    dim: usize,
    rows: Vec<SparseRow>,
    pivot_row: Vec<u32>,
}

fn sparse_axpy(f: Fp, a: &[(usize, u32)], c: u32, b: &[(usize, u32)], out: &mut SparseRow) {
    out.clear();
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i]);
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            out.push((b[j].0, f.mul(c, b[j].1)));
            j += 1;
        } else {
            let v = f.add(a[i].1, f.mul(c, b[j].1));
            if v != 0 {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
}

impl SparseKernel {
    pub fn new(f: Fp, dim: usize) -> Self {
        SparseKernel {
            f,
            dim,
            rows: Vec::new(),
            pivot_row: vec![NONE; dim],
        }
    }

    /// Eliminate a stream of rows given as `(column, value)` pairs in any order.
    pub fn from_rows(f: Fp, dim: usize, rows: impl Iterator<Item = Vec<(usize, u32)>>) -> Self {
        let mut k = SparseKernel::new(f, dim);
        for row in rows {
            if k.rank() == dim {
                break;
            }
            k.insert(row);
        }
        k
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn nullity(&self) -> usize {
        self.dim - self.rows.len()
    }

    /// Returns true if the row was independent of those already inserted.
    pub fn insert(&mut self, mut row: Vec<(usize, u32)>) -> bool {
        let f = self.f;
        row.sort_unstable_by_key(|e| e.0);
        let mut v: SparseRow = Vec::with_capacity(row.len());
        for (c, x) in row {
            match v.last_mut() {
                Some(last) if last.0 == c => last.1 = f.add(last.1, x),
                _ => v.push((c, x % f.p())),
            }
        }
        v.retain(|e| e.1 != 0);
        let mut scratch = Vec::new();
        while let Some(&(q, c)) = v.first() {
            let r = self.pivot_row[q];
            if r == NONE {
                let inv = f.inv(c);
                for e in v.iter_mut() {
                    e.1 = f.mul(e.1, inv);
                }
                self.pivot_row[q] = self.rows.len() as u32;
                self.rows.push(v);
                return true;
            }
            sparse_axpy(f, &v, f.neg(c), &self.rows[r as usize], &mut scratch);
            std::mem::swap(&mut v, &mut scratch);
        }
        false
    }

    /// Non-pivot columns in increasing order.
    pub fn free_columns(&self) -> Vec<usize> {
        (0..self.dim).filter(|&c| self.pivot_row[c] == NONE).collect()
    }

    /// The kernel vector that is 1 at free column `free` and 0 at every other free column.
    pub fn kernel_vector(&self, free: usize) -> Vec<u32> {
        let f = self.f;
        let mut x = vec![0u32; self.dim];
        x[free] = 1;
        for q in (0..free).rev() {
            let r = self.pivot_row[q];
            if r == NONE {
                continue;
            }
            let mut acc = 0;
            for &(c, v) in &self.rows[r as usize][1..] {
                if x[c] != 0 {
                    acc = f.add(acc, f.mul(v, x[c]));
                }
            }
            x[q] = f.neg(acc);
        }
        x
    }

    /// Kernel basis in the order of [`SparseKernel::free_columns`].
    pub fn kernel_vectors(&self) -> impl Iterator<Item = Vec<u32>> + '_ {
        self.free_columns().into_iter().map(|c| self.kernel_vector(c))
    }
}

/// A subspace of F_p^n held in reduced row echelon form.
#[derive(Clone, Debug)]
pub struct SubspaceBasis {
    f: Fp,
    ambient: usize,
    pivots: Vec<usize>,
    vectors: Vec<Vec<u32>>,
    backend: Backend,
}

impl SubspaceBasis {
    pub fn zero(f: Fp, ambient: usize) -> Self {
        SubspaceBasis {
            f,
            ambient,
            pivots: Vec::new(),
            vectors: Vec::new(),
            backend: Backend::new(f, ambient),
        }
    }

    pub fn full(f: Fp, ambient: usize) -> Self {
        let vs: Vec<Vec<u32>> = (0..ambient)
            .map(|i| {
                let mut v = vec![0; ambient];
                v[i] = 1;
                v
            })
            .collect();
        Self::from_vectors(f, ambient, &vs).expect("unit vectors")
    }

    /// Span of the given vectors.
    pub fn from_vectors(f: Fp, ambient: usize, vs: &[Vec<u32>]) -> Result<Self> {
        let mut be = Backend::new(f, ambient);
        for v in vs {
            if v.len() != ambient {
                return Err(BvhError::DimensionMismatch {
                    expected: ambient,
                    got: v.len(),
                });
            }
            be.insert_dense(v);
        }
        be.make_reduced();
        let rows = be.rows_dense();
        Ok(SubspaceBasis {
            f,
            ambient,
            pivots: rows.iter().map(|(l, _)| *l).collect(),
            vectors: rows.into_iter().map(|(_, v)| v).collect(),
            backend: be,
        })
    }

    /// Span of vectors given as `(index, value)` pairs.
    pub fn from_sparse_rows(f: Fp, ambient: usize, rows: impl Iterator<Item = Vec<(usize, u32)>>) -> Result<Self> {
        let mut be = Backend::new(f, ambient);
        for row in rows {
            if let Some(&(i, _)) = row.iter().find(|e| e.0 >= ambient) {
                return Err(BvhError::DimensionMismatch {
                    expected: ambient,
                    got: i + 1,
                });
            }
            if be.rank() == ambient {
                break;
            }
            if !row.is_empty() {
                be.insert_sparse(ambient, &row, f);
            }
        }
        be.make_reduced();
        let rows = be.rows_dense();
        Ok(SubspaceBasis {
            f,
            ambient,
            pivots: rows.iter().map(|(l, _)| *l).collect(),
            vectors: rows.into_iter().map(|(_, v)| v).collect(),
            backend: be,
        })
    }

    pub fn field(&self) -> Fp {
        self.f
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn vectors(&self) -> &[Vec<u32>] {
        &self.vectors
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Checks the reduced echelon property: each pivot entry is 1 and is the
    /// only nonzero entry in its column, and pivots strictly increase.
    pub fn is_reduced_echelon(&self) -> bool {
        self.pivots.windows(2).all(|w| w[0] < w[1])
            && self.vectors.iter().enumerate().all(|(i, v)| {
                v[..self.pivots[i]].iter().all(|&x| x == 0)
                    && self
                        .pivots
                        .iter()
                        .enumerate()
                        .all(|(j, &q)| v[q] == u32::from(i == j))
            })
    }

    fn check_len(&self, v: &[u32]) -> Result<()> {
        if v.len() != self.ambient {
            return Err(BvhError::DimensionMismatch {
                expected: self.ambient,
                got: v.len(),
            });
        }
        Ok(())
    }

    pub fn contains(&self, v: &[u32]) -> Result<bool> {
        self.check_len(v)?;
        Ok(self.backend.residual(v).iter().all(|&x| x == 0))
    }

    /// Coordinates of `v` in this basis, or `None` when `v` is outside the span.
    pub fn solve_in_span(&self, v: &[u32]) -> Result<Option<Vec<u32>>> {
        self.check_len(v)?;
        if !self.contains(v)? {
            return Ok(None);
        }
        Ok(Some(self.pivots.iter().map(|&q| v[q] % self.f.p()).collect()))
    }

    pub fn combine(&self, coords: &[u32]) -> Vec<u32> {
        let mut out = vec![0; self.ambient];
        for (c, v) in coords.iter().zip(&self.vectors) {
            if *c == 0 {
                continue;
            }
            for (o, x) in out.iter_mut().zip(v) {
                *o = self.f.add(*o, self.f.mul(*c, *x));
            }
        }
        out
    }

    pub fn is_subspace_of(&self, other: &SubspaceBasis) -> Result<bool> {
        for v in &self.vectors {
            if !other.contains(v)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

#[derive(Clone, Debug)]
struct QuotientRows<R> {
    /// Reduced echelon rows of Z, each paired with its complement coefficients.
    rows: Vec<(usize, R, Vec<u32>)>,
}

impl<R: Row> QuotientRows<R> {
    fn push(&mut self, f: Fp, mut v: R, mut c: Vec<u32>) {
        for (lead, row, rc) in self.rows.iter() {
            let a = v.get(*lead);
            if a != 0 {
                let na = f.neg(a);
                v.axpy(na, row, 0, f);
                axpy_dense(f, &mut c, na, rc);
            }
        }
        let Some(lead) = v.lead_from(0) else {
            return;
        };
        let s = f.inv(v.get(lead));
        v.scale(s, f);
        scale_dense(f, &mut c, s);
        for (_, row, rc) in self.rows.iter_mut() {
            let a = row.get(lead);
            if a != 0 {
                let na = f.neg(a);
                row.axpy(na, &v, 0, f);
                axpy_dense(f, rc, na, &c);
            }
        }
        self.rows.push((lead, v, c));
    }

    fn coordinates(&self, f: Fp, v: &[u32], k: usize) -> Option<Vec<u32>> {
        let mut r = R::from_dense(v);
        let mut acc = vec![0; k];
        for (lead, row, c) in &self.rows {
            let a = r.get(*lead);
            if a != 0 {
                r.axpy(f.neg(a), row, 0, f);
                axpy_dense(f, &mut acc, a, c);
            }
        }
        r.lead_from(0).is_none().then_some(acc)
    }
}

#[derive(Clone, Debug)]
enum QuotientBackend {
    Bits(QuotientRows<BitRow>),
    Dense(QuotientRows<DenseRow>),
}

/// Coordinates for Z / B, relative to a fixed set of representatives of a complement.
#[derive(Clone, Debug)]
pub struct QuotientSpace {
    f: Fp,
    ambient: usize,
    representatives: Vec<Vec<u32>>,
    rows: QuotientBackend,
}

impl QuotientSpace {
    /// `z_spanning` spans Z and `b` is a subspace of it. Complement
    /// representatives are the first vectors of `z_spanning` independent modulo B.
    pub fn new(b: &SubspaceBasis, z_spanning: &[Vec<u32>]) -> Result<Self> {
        Self::from_candidates(b, z_spanning.iter().cloned(), None).map(|(q, _)| q)
    }

    /// Like [`QuotientSpace::new`] over a stream of cocycles, stopping once `dim` representatives
    /// are found. Also returns the positions of the chosen candidates.
    pub fn from_candidates(
        b: &SubspaceBasis,
        candidates: impl Iterator<Item = Vec<u32>>,
        dim: Option<usize>,
    ) -> Result<(Self, Vec<usize>)> {
        let f = b.field();
        let ambient = b.ambient();
        let mut be = b.backend.clone();
        let mut reps = Vec::new();
        let mut chosen = Vec::new();
        for (i, z) in candidates.enumerate() {
            if dim == Some(reps.len()) {
                break;
            }
            if z.len() != ambient {
                return Err(BvhError::DimensionMismatch {
                    expected: ambient,
                    got: z.len(),
                });
            }
            if be.insert_dense(&z) {
                reps.push(z);
                chosen.push(i);
            }
        }
        drop(be);
        let k = reps.len();
        fn fill<R: Row>(f: Fp, b: &SubspaceBasis, reps: &[Vec<u32>]) -> QuotientRows<R> {
            let k = reps.len();
            let mut q = QuotientRows { rows: Vec::new() };
            // B rows carry zero coefficients, representatives carry unit vectors
            for v in b.vectors() {
                q.push(f, R::from_dense(v), vec![0; k]);
            }
            for (j, r) in reps.iter().enumerate() {
                let mut c = vec![0; k];
                c[j] = 1;
                q.push(f, R::from_dense(r), c);
            }
            q
        }
        let rows = if f.is_two() {
            QuotientBackend::Bits(fill(f, b, &reps))
        } else {
            QuotientBackend::Dense(fill(f, b, &reps))
        };
        debug_assert_eq!(k, reps.len());
        Ok((
            QuotientSpace {
                f,
                ambient,
                representatives: reps,
                rows,
            },
            chosen,
        ))
    }

    pub fn dim(&self) -> usize {
        self.representatives.len()
    }

    pub fn representatives(&self) -> &[Vec<u32>] {
        &self.representatives
    }

    /// Coordinates of `v + B`; fails with [`BvhError::NotCocycle`] if `v` is outside Z.
    pub fn coordinates(&self, v: &[u32]) -> Result<Vec<u32>> {
        if v.len() != self.ambient {
            return Err(BvhError::DimensionMismatch {
                expected: self.ambient,
                got: v.len(),
            });
        }
        let k = self.dim();
        let out = match &self.rows {
            QuotientBackend::Bits(q) => q.coordinates(self.f, v, k),
            QuotientBackend::Dense(q) => q.coordinates(self.f, v, k),
        };
        out.ok_or(BvhError::NotCocycle)
    }
}

/// Convenience form of [`QuotientSpace::coordinates`].
pub fn quotient_coordinates(z: &SubspaceBasis, b: &SubspaceBasis, v: &[u32]) -> Result<Vec<u32>> {
    QuotientSpace::new(b, z.vectors())?.coordinates(v)
}

pub(crate) fn axpy_dense(f: Fp, y: &mut [u32], a: u32, x: &[u32]) {
    if a == 0 {
        return;
    }
    for (yi, &xi) in y.iter_mut().zip(x) {
        if xi != 0 {
            *yi = f.add(*yi, f.mul(a, xi));
        }
    }
}

fn scale_dense(f: Fp, y: &mut [u32], a: u32) {
    for yi in y.iter_mut() {
        *yi = f.mul(*yi, a);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u32) -> Fp {
        Fp::new(p).unwrap()
    }

    #[test]
    fn identity_has_full_rank() {
        for p in [2, 3] {
            let m = SparseMatrix::identity(f(p), 6);
            let r = rank_kernel_image(&m);
            assert_eq!(r.rank, 6);
            assert!(r.kernel.is_empty());
        }
    }

    #[test]
    fn zero_matrix_kernel_is_everything() {
        let m = SparseMatrix::zeros(f(2), 3, 4);
        let r = rank_kernel_image(&m);
        assert_eq!(r.rank, 0);
        assert_eq!(r.kernel.len(), 4);
        assert_eq!(r.image.dim(), 0);
    }

    #[test]
    fn triplets_merge_duplicates_and_drop_zeros() {
        let m = SparseMatrix::from_triplets(f(3), 2, 2, [(0, 0, 1), (0, 0, 2), (1, 1, 1)]).unwrap();
        assert_eq!(m.nnz(), 1);
        assert_eq!(m.get(1, 1), 1);
    }

    #[test]
    fn solve_in_full_span() {
        let b = SubspaceBasis::full(f(3), 3);
        let c = b.solve_in_span(&[2, 0, 1]).unwrap().unwrap();
        assert_eq!(b.combine(&c), vec![2, 0, 1]);
        assert_eq!(b.solve_in_span(&[0, 0, 0]).unwrap().unwrap(), vec![0, 0, 0]);
    }

    #[test]
    fn outside_one_dimensional_span() {
        let b = SubspaceBasis::from_vectors(f(2), 2, &[vec![1, 1]]).unwrap();
        assert_eq!(b.solve_in_span(&[1, 0]).unwrap(), None);
        assert!(b.solve_in_span(&[1, 0, 0]).is_err());
    }

    #[test]
    fn quotient_trivial_cases() {
        let z = SubspaceBasis::full(f(2), 3);
        let q = QuotientSpace::new(&z, z.vectors()).unwrap();
        assert_eq!(q.dim(), 0);
        assert!(q.coordinates(&[1, 0, 1]).unwrap().is_empty());

        let zero = SubspaceBasis::zero(f(2), 3);
        let q = QuotientSpace::new(&zero, z.vectors()).unwrap();
        assert_eq!(q.coordinates(&[1, 0, 1]).unwrap(), vec![1, 0, 1]);
    }

    #[test]
    fn quotient_rejects_vectors_outside_z() {
        let z = SubspaceBasis::from_vectors(f(3), 3, &[vec![1, 2, 0]]).unwrap();
        let b = SubspaceBasis::zero(f(3), 3);
        let q = QuotientSpace::new(&b, z.vectors()).unwrap();
        assert_eq!(q.coordinates(&[0, 0, 1]), Err(BvhError::NotCocycle));
        assert_eq!(q.coordinates(&[2, 1, 0]).unwrap(), vec![2]);
    }

    #[test]
    fn reduced_echelon_shape() {
        let vs = vec![vec![0, 1, 2, 1], vec![1, 1, 0, 0], vec![1, 2, 2, 1]];
        let b = SubspaceBasis::from_vectors(f(3), 4, &vs).unwrap();
        assert_eq!(b.dim(), 2);
        assert!(b.is_reduced_echelon());
    }
}
