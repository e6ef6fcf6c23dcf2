//! Exact linear algebra over a prime field `F_p`.
//!
//! Every matrix carries its [`Field`], so computations over different primes
//! can run side by side. Elimination is dense and deterministic: the pivot in
//! each column is the first nonzero entry at or below the current row, and all
//! reduced forms are fully reduced. Quotient bases are always complements
//! spanned by standard coordinate vectors at non-pivot positions.

use std::fmt;

use serde::ser::{Serialize, SerializeSeq, Serializer};
use thiserror::Error;

/// A residue in `[0, p)`.
pub type Scalar = u32;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FieldError {
    #[error("modulus {0} is not prime")]
    NotPrime(u32),
    #[error("modulus {0} is too large (must be below 2^31)")]
    TooLarge(u32),
}

/// The prime field `F_p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Field {
    p: u32,
}

impl Field {
    pub const DEFAULT_PRIME: u32 = 101;

    pub fn new(p: u32) -> Result<Self, FieldError> {
        if p >= 1 << 31 {
            return Err(FieldError::TooLarge(p));
        }
        if p < 2 || (2..).take_while(|d| d * d <= p).any(|d| p.is_multiple_of(d)) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(Field { p })
    }

    pub fn p(self) -> u32 {
        self.p
    }

    #[inline]
    pub fn add(self, a: Scalar, b: Scalar) -> Scalar {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: Scalar, b: Scalar) -> Scalar {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(self, a: Scalar) -> Scalar {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(self, a: Scalar, b: Scalar) -> Scalar {
        ((a as u64 * b as u64) % self.p as u64) as Scalar
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn inv(self, a: Scalar) -> Scalar {
        assert!(!a.is_multiple_of(self.p), "inverse of zero in F_{}", self.p);
        // extended Euclid on i64
        let (mut t, mut new_t) = (0i64, 1i64);
        let (mut r, mut new_r) = (self.p as i64, a as i64);
        while new_r != 0 {
            let q = r / new_r;
            (t, new_t) = (new_t, t - q * new_t);
            (r, new_r) = (new_r, r - q * new_r);
        }
        t.rem_euclid(self.p as i64) as Scalar
    }

    pub fn div(self, a: Scalar, b: Scalar) -> Scalar {
        self.mul(a, self.inv(b))
    }

    pub fn from_i64(self, x: i64) -> Scalar {
        x.rem_euclid(self.p as i64) as Scalar
    }

    /// Symmetric lift to `(-p/2, p/2]`, used for printing.
    pub fn to_i64(self, a: Scalar) -> i64 {
        if (a as u64) * 2 > self.p as u64 {
            a as i64 - self.p as i64
        } else {
            a as i64
        }
    }
}

impl Default for Field {
    fn default() -> Self {
        Field {
            p: Self::DEFAULT_PRIME,
        }
    }
}

/// Dense row-major matrix over `F_p`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

/// Result of reducing a matrix to reduced row echelon form.
#[derive(Clone, Debug)]
pub struct Rref {
    /// The fully reduced matrix (same shape as the input).
    pub mat: Mat,
    /// Pivot column of each nonzero row, strictly increasing.
    pub pivots: Vec<usize>,
}

impl Rref {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

/// A quotient of `F_p^n` by a subspace: projection onto a complement spanned
/// by standard basis vectors, and the matching section.
#[derive(Clone, Debug)]
pub struct Quotient {
    /// `dim × n`, full row rank, kills the subspace.
    pub projection: Mat,
    /// `n × dim`, standard injection of the complement; `projection · section = I`.
    pub section: Mat,
    /// Ambient coordinates spanning the complement, in increasing order.
    pub complement: Vec<usize>,
}

impl Quotient {
    pub fn dim(&self) -> usize {
        self.projection.rows
    }
}

impl Mat {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        Mat {
            field,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let mut m = Mat::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn from_fn(
        field: Field,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> Scalar,
    ) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j) % field.p);
            }
        }
        Mat {
            field,
            rows,
            cols,
            data,
        }
    }

    /// Builds a matrix from integer rows, reducing entries mod p.
    pub fn from_i64_rows(field: Field, rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Mat::from_fn(field, r, c, |i, j| field.from_i64(rows[i][j]))
    }

    pub fn from_vec(field: Field, rows: usize, cols: usize, data: Vec<Scalar>) -> Self {
        assert_eq!(rows * cols, data.len());
        Mat {
            field,
            rows,
            cols,
            data: data.into_iter().map(|x| x % field.p).collect(),
        }
    }

    /// Matrix whose columns are the given vectors (each of length `rows`).
    pub fn from_columns(field: Field, rows: usize, columns: &[Vec<Scalar>]) -> Self {
        let mut m = Mat::zeros(field, rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (i, &x) in col.iter().enumerate() {
                m.data[i * m.cols + j] = x % field.p;
            }
        }
        m
    }

    pub fn column_vector(field: Field, v: &[Scalar]) -> Self {
        Mat::from_columns(field, v.len(), &[v.to_vec()])
    }

    pub fn field(&self) -> Field {
        self.field
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

    pub fn data(&self) -> &[Scalar] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Scalar {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v % self.field.p;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Scalar>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows)
                .all(|i| (0..self.cols).all(|j| self.get(i, j) == u32::from(i == j)))
    }

    fn check_field(&self, other: &Mat) {
        assert_eq!(self.field, other.field, "matrices over different fields");
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        self.check_field(other);
        assert_eq!(
            self.cols, other.rows,
            "shape mismatch {}x{} * {}x{}",
            self.rows, self.cols, other.rows, other.cols
        );
        let p = self.field.p as u64;
        let mut out = vec![0u64; self.rows * other.cols];
        for i in 0..self.rows {
            let acc = &mut out[i * other.cols..(i + 1) * other.cols];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k] as u64;
                if a == 0 {
                    continue;
                }
                let brow = &other.data[k * other.cols..(k + 1) * other.cols];
                for (x, &b) in acc.iter_mut().zip(brow) {
                    *x = (*x + a * b as u64) % p;
                }
            }
        }
        Mat {
            field: self.field,
            rows: self.rows,
            cols: other.cols,
            data: out.into_iter().map(|x| x as Scalar).collect(),
        }
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(self.cols, v.len());
        let f = self.field;
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b)))
            })
            .collect()
    }

    pub fn add(&self, other: &Mat) -> Mat {
        self.check_field(other);
        assert_eq!(self.shape(), other.shape());
        let f = self.field;
        Mat {
            field: f,
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f.add(a, b))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Mat {
        self.scale(self.field.neg(1))
    }

    pub fn scale(&self, c: Scalar) -> Mat {
        let f = self.field;
        Mat {
            field: f,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&a| f.mul(a, c)).collect(),
        }
    }

    /// `self += c * other`
    pub fn add_scaled(&mut self, c: Scalar, other: &Mat) {
        self.check_field(other);
        assert_eq!(self.shape(), other.shape());
        if c == 0 {
            return;
        }
        let f = self.field;
        for (a, &b) in self.data.iter_mut().zip(&other.data) {
            *a = f.add(*a, f.mul(c, b));
        }
    }

    pub fn transpose(&self) -> Mat {
        Mat::from_fn(self.field, self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn submatrix(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Mat {
        let c0 = cols.start;
        let r0 = rows.start;
        Mat::from_fn(self.field, rows.len(), cols.len(), |i, j| {
            self.get(r0 + i, c0 + j)
        })
    }

    pub fn select_columns(&self, cols: &[usize]) -> Mat {
        Mat::from_fn(self.field, self.rows, cols.len(), |i, j| self.get(i, cols[j]))
    }

    pub fn select_rows(&self, rows: &[usize]) -> Mat {
        Mat::from_fn(self.field, rows.len(), self.cols, |i, j| self.get(rows[i], j))
    }

    /// Writes `block` with its top-left corner at `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &Mat) {
        self.check_field(block);
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols);
        for i in 0..block.rows {
            let dst = (r0 + i) * self.cols + c0;
            self.data[dst..dst + block.cols].copy_from_slice(block.row(i));
        }
    }

    pub fn hstack(field: Field, rows: usize, blocks: &[&Mat]) -> Mat {
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut m = Mat::zeros(field, rows, cols);
        let mut c0 = 0;
        for b in blocks {
            m.set_block(0, c0, b);
            c0 += b.cols;
        }
        m
    }

    pub fn vstack(field: Field, cols: usize, blocks: &[&Mat]) -> Mat {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let mut m = Mat::zeros(field, rows, cols);
        let mut r0 = 0;
        for b in blocks {
            m.set_block(r0, 0, b);
            r0 += b.rows;
        }
        m
    }

    pub fn block_diag(field: Field, blocks: &[&Mat]) -> Mat {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut m = Mat::zeros(field, rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            m.set_block(r0, c0, b);
            r0 += b.rows;
            c0 += b.cols;
        }
        m
    }

    /// Reduced row echelon form with first-nonzero pivoting.
    pub fn rref(&self) -> Rref {
        let f = self.field;
        let p = f.p as u64;
        let (rows, cols) = (self.rows, self.cols);
        let mut a = self.data.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(pr) = (r..rows).find(|&i| a[i * cols + c] != 0) else {
                continue;
            };
            if pr != r {
                for j in 0..cols {
                    a.swap(pr * cols + j, r * cols + j);
                }
            }
            let inv = f.inv(a[r * cols + c]) as u64;
            for j in c..cols {
                a[r * cols + j] = ((a[r * cols + j] as u64 * inv) % p) as Scalar;
            }
            for i in 0..rows {
                if i == r {
                    continue;
                }
                let factor = a[i * cols + c] as u64;
                if factor == 0 {
                    continue;
                }
                let neg = p - factor;
                for j in c..cols {
                    let pivot_row_entry = a[r * cols + j] as u64;
                    if pivot_row_entry != 0 {
                        a[i * cols + j] =
                            ((a[i * cols + j] as u64 + neg * pivot_row_entry) % p) as Scalar;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        Rref {
            mat: Mat {
                field: f,
                rows,
                cols,
                data: a,
            },
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank()
    }

    /// Basis of the right null space `{v : self · v = 0}`, one vector per free
    /// column, in increasing order of the free column.
    pub fn kernel_basis(&self) -> Vec<Vec<Scalar>> {
        let f = self.field;
        let rref = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &c in &rref.pivots {
            is_pivot[c] = true;
        }
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = vec![0; self.cols];
                v[free] = 1;
                for (r, &pc) in rref.pivots.iter().enumerate() {
                    v[pc] = f.neg(rref.mat.get(r, free));
                }
                v
            })
            .collect()
    }

    /// Kernel basis as the columns of a `cols × nullity` matrix.
    pub fn kernel_matrix(&self) -> Mat {
        Mat::from_columns(self.field, self.cols, &self.kernel_basis())
    }

    /// Some `x` with `self · x = b`, or `None` when the system is inconsistent.
    pub fn solve(&self, b: &[Scalar]) -> Option<Vec<Scalar>> {
        assert_eq!(b.len(), self.rows, "right-hand side has wrong length");
        let rhs = Mat::column_vector(self.field, b);
        self.solve_matrix(&rhs).map(|x| x.column(0))
    }

    /// Some `X` with `self · X = rhs`, or `None` when any column is inconsistent.
    pub fn solve_matrix(&self, rhs: &Mat) -> Option<Mat> {
        self.check_field(rhs);
        assert_eq!(rhs.rows, self.rows);
        let aug = Mat::hstack(self.field, self.rows, &[self, rhs]);
        let rref = aug.rref();
        if rref.pivots.iter().any(|&c| c >= self.cols) {
            return None;
        }
        let mut x = Mat::zeros(self.field, self.cols, rhs.cols);
        for (r, &pc) in rref.pivots.iter().enumerate() {
            for j in 0..rhs.cols {
                x.set(pc, j, rref.mat.get(r, self.cols + j));
            }
        }
        Some(x)
    }

    /// Basis of the column space as the columns of an `rows × rank` matrix,
    /// taken from the reduced echelon form of the transpose.
    pub fn column_space(&self) -> Mat {
        let rref = self.transpose().rref();
        let r = rref.rank();
        Mat::from_fn(self.field, self.rows, r, |i, j| rref.mat.get(j, i))
    }

    /// Quotient of the codomain by the column space.
    pub fn cokernel(&self) -> Quotient {
        let f = self.field;
        let n = self.rows;
        let rref = self.transpose().rref();
        let mut pivot_row = vec![None; n];
        for (r, &c) in rref.pivots.iter().enumerate() {
            pivot_row[c] = Some(r);
        }
        let complement: Vec<usize> = (0..n).filter(|&c| pivot_row[c].is_none()).collect();
        let q = complement.len();
        let mut projection = Mat::zeros(f, q, n);
        let mut section = Mat::zeros(f, n, q);
        for (k, &c) in complement.iter().enumerate() {
            section.set(c, k, 1);
            projection.set(k, c, 1);
        }
        for (c, r) in pivot_row.iter().enumerate() {
            if let Some(r) = *r {
                for (k, &nc) in complement.iter().enumerate() {
                    projection.set(k, c, f.neg(rref.mat.get(r, nc)));
                }
            }
        }
        Quotient {
            projection,
            section,
            complement,
        }
    }

    /// Quotient dimension and projection onto the standard complement of the
    /// column space.
    pub fn cokernel_projection(&self) -> (usize, Mat) {
        let q = self.cokernel();
        (q.dim(), q.projection)
    }

    pub fn inverse(&self) -> Option<Mat> {
        if !self.is_square() {
            return None;
        }
        let x = self.solve_matrix(&Mat::identity(self.field, self.rows))?;
        Some(x)
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }
}

impl fmt::Debug for Mat {
    fn fmt(&self, fmt: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(fmt, "Mat[F_{}; {}x{}](", self.field.p, self.rows, self.cols)?;
        for i in 0..self.rows {
            if i > 0 {
                write!(fmt, "; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            write!(fmt, "{}", row.join(" "))?;
        }
        write!(fmt, ")")
    }
}

impl Serialize for Mat {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.rows))?;
        for i in 0..self.rows {
            seq.serialize_element(self.row(i))?;
        }
        seq.end()
    }
}

/// A subspace of `F_p^n` kept as fully reduced echelon rows; supports
/// incremental insertion and reduction.
#[derive(Clone, Debug)]
pub struct Subspace {
    field: Field,
    ambient: usize,
    rows: Vec<Vec<Scalar>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn new(field: Field, ambient: usize) -> Self {
        Subspace {
            field,
            ambient,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn rows(&self) -> &[Vec<Scalar>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Subtracts the span from `v` so that it vanishes on every pivot.
    pub fn reduce(&self, v: &mut [Scalar]) {
        let f = self.field;
        for (row, &pc) in self.rows.iter().zip(&self.pivots) {
            let c = v[pc];
            if c != 0 {
                let neg = f.neg(c);
                for (x, &r) in v.iter_mut().zip(row) {
                    if r != 0 {
                        *x = f.add(*x, f.mul(neg, r));
                    }
                }
            }
        }
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(|&x| x == 0)
    }

    /// Adds `v` to the span. Returns whether the dimension grew.
    pub fn insert(&mut self, v: &[Scalar]) -> bool {
        assert_eq!(v.len(), self.ambient);
        let f = self.field;
        let mut w = v.to_vec();
        self.reduce(&mut w);
        let Some(pc) = w.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = f.inv(w[pc]);
        for x in w.iter_mut() {
            *x = f.mul(*x, inv);
        }
        for row in self.rows.iter_mut() {
            let c = row[pc];
            if c != 0 {
                let neg = f.neg(c);
                for (x, &r) in row.iter_mut().zip(&w) {
                    if r != 0 {
                        *x = f.add(*x, f.mul(neg, r));
                    }
                }
            }
        }
        let pos = self.pivots.partition_point(|&q| q < pc);
        self.pivots.insert(pos, pc);
        self.rows.insert(pos, w);
        true
    }

    /// Standard coordinates not used as pivots, increasing.
    pub fn complement(&self) -> Vec<usize> {
        let mut used = vec![false; self.ambient];
        for &p in &self.pivots {
            used[p] = true;
        }
        (0..self.ambient).filter(|&c| !used[c]).collect()
    }

    /// Basis vectors as columns of an `ambient × dim` matrix.
    pub fn basis_matrix(&self) -> Mat {
        Mat::from_columns(self.field, self.ambient, &self.rows)
    }
}
