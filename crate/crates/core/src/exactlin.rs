//! Exact dense linear algebra over a prime field `F_p`.
//!
//! Everything downstream (graded pieces, homology, colimit ranks) reduces to
//! rank / kernel / solve / quotient computations on small dense matrices, so
//! this module is deliberately simple: row-major matrices of canonical
//! residues, column echelon reduction with first-nonzero-row pivoting, and a
//! `QuotientSpace` helper that packages projection/lift data for finite
//! dimensional quotients `F^n / span(relations)`.
//!
//! All values are immutable after construction and all operations are pure,
//! so everything here is safe to use from concurrent callers. Pivot choice is
//! deterministic (first nonzero entry in row order), which makes every output
//! reproducible bit for bit.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest modulus accepted; keeps `a*b` for `a, b < p` inside `u64`.
const MAX_PRIME: u64 = (1 << 31) - 1;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FieldError {
    #[error("modulus {0} is not prime")]
    NonPrimeModulus(u64),
    #[error("modulus {0} exceeds the supported bound 2^31 - 1")]
    ModulusTooLarge(u64),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum InducedMapError {
    #[error("map does not carry source relations into destination relations")]
    RelationNotPreserved,
    #[error("dimension mismatch: map is {rows}x{cols}, expected {expected_rows}x{expected_cols}")]
    ShapeMismatch {
        rows: usize,
        cols: usize,
        expected_rows: usize,
        expected_cols: usize,
    },
}

/// A prime field `F_p`, identified by its modulus.
///
/// Scalars are plain `u64` canonical residues in `0..p`; the arithmetic lives
/// here so that matrices and polynomials stay lightweight.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpec {
    p: u64,
}

impl FieldSpec {
    pub const DEFAULT_PRIME: u64 = 32003;

    pub fn new(p: u64) -> Result<Self, FieldError> {
        if p > MAX_PRIME {
            return Err(FieldError::ModulusTooLarge(p));
        }
        if !is_prime(p) {
            return Err(FieldError::NonPrimeModulus(p));
        }
        Ok(FieldSpec { p })
    }

    /// The default field `F_32003`.
    pub fn default_prime() -> Self {
        FieldSpec {
            p: Self::DEFAULT_PRIME,
        }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        a * b % self.p
    }

    pub fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1u64;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse of a nonzero residue.
    pub fn inv(&self, a: u64) -> u64 {
        debug_assert!(a % self.p != 0, "inverse of zero");
        self.pow(a, self.p - 2)
    }

    /// Canonical residue of a signed integer.
    pub fn normalize(&self, a: i64) -> u64 {
        let p = self.p as i64;
        (((a % p) + p) % p) as u64
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Dense matrix over `F_p`, entries stored row-major.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl Mat {
    pub fn new(rows: usize, cols: usize, data: Vec<u64>) -> Self {
        assert_eq!(rows * cols, data.len(), "entry count must be rows*cols");
        Mat { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<u64>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Mat {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        debug_assert!(i < self.rows && j < self.cols);
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        debug_assert!(i < self.rows && j < self.cols);
        self.data[i * self.cols + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn col(&self, j: usize) -> Vec<u64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    /// Builds a matrix from column vectors (all of length `rows`).
    pub fn from_cols(rows: usize, cols: Vec<Vec<u64>>) -> Self {
        let c = cols.len();
        let mut m = Mat::zeros(rows, c);
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length mismatch");
            for (i, &v) in col.iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn mul(&self, other: &Mat, f: &FieldSpec) -> Mat {
        assert_eq!(self.cols, other.rows, "inner dimension mismatch");
        let mut out = Mat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = f.add(out.get(i, j), f.mul(a, other.get(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[u64], f: &FieldSpec) -> Vec<u64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = 0u64;
                for j in 0..self.cols {
                    acc = f.add(acc, f.mul(self.get(i, j), v[j]));
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, other: &Mat, f: &FieldSpec) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| f.add(a, b))
            .collect();
        Mat {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn sub(&self, other: &Mat, f: &FieldSpec) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| f.sub(a, b))
            .collect();
        Mat {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hstack(&self, other: &Mat) -> Mat {
        assert_eq!(self.rows, other.rows);
        let mut out = Mat::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j));
            }
            for j in 0..other.cols {
                out.set(i, self.cols + j, other.get(i, j));
            }
        }
        out
    }

    /// F_p-rank, by column echelon reduction.
    pub fn rank(&self, f: &FieldSpec) -> usize {
        ColEchelon::reduce(self, f).rank()
    }

    /// Columns form a basis of the right kernel; `cols` equals the nullity.
    pub fn kernel_basis(&self, f: &FieldSpec) -> Mat {
        ColEchelon::reduce(self, f).kernel()
    }
}

/// Column echelon form of a matrix together with the transform that produced
/// it: `m * transform = echelon`. Pivots are the first nonzero row of each
/// nonzero echelon column, processed left to right.
#[derive(Debug, Clone)]
pub struct ColEchelon {
    echelon: Mat,
    transform: Mat,
    /// `(pivot_row, echelon_column)` pairs, in processing order.
    pivots: Vec<(usize, usize)>,
    field: FieldSpec,
}

impl ColEchelon {
    pub fn reduce(m: &Mat, f: &FieldSpec) -> Self {
        let mut ech = m.clone();
        let mut tr = Mat::identity(m.cols());
        let mut pivots: Vec<(usize, usize)> = Vec::new();
        for j in 0..ech.cols() {
            // Clear entries in already-pivoted rows using earlier columns.
            for &(prow, pcol) in &pivots {
                let v = ech.get(prow, j);
                if v != 0 {
                    sub_col(&mut ech, j, pcol, v, f);
                    sub_col(&mut tr, j, pcol, v, f);
                }
            }
            // First nonzero row is the new pivot.
            if let Some(prow) = (0..ech.rows()).find(|&i| ech.get(i, j) != 0) {
                let inv = f.inv(ech.get(prow, j));
                scale_col(&mut ech, j, inv, f);
                scale_col(&mut tr, j, inv, f);
                pivots.push((prow, j));
            }
        }
        ColEchelon {
            echelon: ech,
            transform: tr,
            pivots,
            field: *f,
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn echelon(&self) -> &Mat {
        &self.echelon
    }

    /// Basis of the right kernel: the transform columns matching zero echelon
    /// columns.
    pub fn kernel(&self) -> Mat {
        let zero_cols: Vec<usize> = (0..self.echelon.cols())
            .filter(|&j| (0..self.echelon.rows()).all(|i| self.echelon.get(i, j) == 0))
            .collect();
        let cols = zero_cols
            .iter()
            .map(|&j| self.transform.col(j))
            .collect::<Vec<_>>();
        Mat::from_cols(self.transform.rows(), cols)
    }

    /// Solves `m * X = B` column by column; `None` if any column of `B` lies
    /// outside the column span of `m`.
    pub fn solve(&self, b: &Mat) -> Option<Mat> {
        assert_eq!(b.rows(), self.echelon.rows(), "rhs row count mismatch");
        let f = &self.field;
        let mut out = Mat::zeros(self.transform.rows(), b.cols());
        for j in 0..b.cols() {
            let mut rhs = b.col(j);
            // Coefficients of the echelon columns reproducing `rhs`.
            let mut coeffs = vec![0u64; self.echelon.cols()];
            for &(prow, pcol) in &self.pivots {
                let c = rhs[prow];
                if c != 0 {
                    coeffs[pcol] = c;
                    for i in 0..rhs.len() {
                        rhs[i] = f.sub(rhs[i], f.mul(c, self.echelon.get(i, pcol)));
                    }
                }
            }
            if rhs.iter().any(|&v| v != 0) {
                return None;
            }
            // Map back through the transform: x = transform * coeffs.
            let x = self.transform.mul_vec(&coeffs, f);
            for (i, &v) in x.iter().enumerate() {
                out.set(i, j, v);
            }
        }
        Some(out)
    }

    /// True if `v` lies in the column span of the reduced matrix.
    pub fn contains(&self, v: &[u64]) -> bool {
        let b = Mat::from_cols(v.len(), vec![v.to_vec()]);
        self.solve(&b).is_some()
    }
}

fn sub_col(m: &mut Mat, target: usize, source: usize, factor: u64, f: &FieldSpec) {
    for i in 0..m.rows() {
        let v = f.sub(m.get(i, target), f.mul(factor, m.get(i, source)));
        m.set(i, target, v);
    }
}

fn scale_col(m: &mut Mat, col: usize, factor: u64, f: &FieldSpec) {
    for i in 0..m.rows() {
        let v = f.mul(m.get(i, col), factor);
        m.set(i, col, v);
    }
}

/// A finite-dimensional quotient `F^ambient / span(relations)` with a chosen
/// projection and section.
///
/// `projection * lift = id` on the quotient, and `lift * projection - id`
/// lands in the column span of the relations, so quotient coordinates are the
/// non-pivot coordinates of the relation echelon.
#[derive(Debug, Clone)]
pub struct QuotientSpace {
    ambient_dim: usize,
    dim: usize,
    projection: Mat,
    lift: Mat,
    relations: ColEchelon,
}

impl QuotientSpace {
    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `dim x ambient` matrix of the projection.
    pub fn projection(&self) -> &Mat {
        &self.projection
    }

    /// `ambient x dim` matrix choosing representatives.
    pub fn lift(&self) -> &Mat {
        &self.lift
    }

    /// True if the ambient vector lies in the relation span.
    pub fn is_relation(&self, v: &[u64]) -> bool {
        self.relations.contains(v)
    }
}

/// Builds the quotient of `F^ambient_dim` by the column span of `relations`.
pub fn quotient_reduce(ambient_dim: usize, relations: &Mat, f: &FieldSpec) -> QuotientSpace {
    assert_eq!(
        relations.rows(),
        ambient_dim,
        "relations must have ambient_dim rows"
    );
    let ech = ColEchelon::reduce(relations, f);
    let pivot_rows: Vec<usize> = {
        let mut rows: Vec<usize> = ech.pivots.iter().map(|&(r, _)| r).collect();
        rows.sort_unstable();
        rows
    };
    let free_rows: Vec<usize> = (0..ambient_dim)
        .filter(|r| !pivot_rows.contains(r))
        .collect();
    let dim = free_rows.len();

    // projection: reduce against echelon relation columns, then restrict to
    // the free rows.
    let mut projection = Mat::zeros(dim, ambient_dim);
    for j in 0..ambient_dim {
        let mut v = vec![0u64; ambient_dim];
        v[j] = 1;
        for &(prow, pcol) in &ech.pivots {
            let c = v[prow];
            if c != 0 {
                for i in 0..ambient_dim {
                    v[i] = f.sub(v[i], f.mul(c, ech.echelon.get(i, pcol)));
                }
            }
        }
        for (qi, &row) in free_rows.iter().enumerate() {
            projection.set(qi, j, v[row]);
        }
    }

    // lift: place quotient coordinates at the free rows.
    let mut lift = Mat::zeros(ambient_dim, dim);
    for (qi, &row) in free_rows.iter().enumerate() {
        lift.set(row, qi, 1);
    }

    QuotientSpace {
        ambient_dim,
        dim,
        projection,
        lift,
        relations: ech,
    }
}

/// The map induced on quotients by an ambient map `f: src -> dst` that
/// carries source relations into destination relations (checked).
pub fn induced_map(
    map: &Mat,
    src: &QuotientSpace,
    dst: &QuotientSpace,
    f: &FieldSpec,
) -> Result<Mat, InducedMapError> {
    if map.rows() != dst.ambient_dim() || map.cols() != src.ambient_dim() {
        return Err(InducedMapError::ShapeMismatch {
            rows: map.rows(),
            cols: map.cols(),
            expected_rows: dst.ambient_dim(),
            expected_cols: src.ambient_dim(),
        });
    }
    // Every source relation column must land in the destination relation span.
    let src_rel = src.relations.echelon();
    for j in 0..src_rel.cols() {
        let col = src_rel.col(j);
        if col.iter().all(|&v| v == 0) {
            continue;
        }
        let image = map.mul_vec(&col, f);
        if !dst.is_relation(&image) {
            return Err(InducedMapError::RelationNotPreserved);
        }
    }
    Ok(dst.projection().mul(map, f).mul(src.lift(), f))
}
