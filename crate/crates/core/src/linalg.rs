//! Dense exact linear algebra over [`FieldSpec`] fields.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{shape, Result};
use crate::scalar::{FieldSpec, Scalar};

pub type Vector = Vec<Scalar>;

pub fn zero_vec(field: FieldSpec, n: usize) -> Vector {
    vec![Scalar::zero(field); n]
}

pub fn unit_vec(field: FieldSpec, n: usize, i: usize) -> Vector {
    let mut v = zero_vec(field, n);
    v[i] = Scalar::one(field);
    v
}

pub fn is_zero_vec(v: &[Scalar]) -> bool {
    v.iter().all(Scalar::is_zero)
}

pub fn vec_add(a: &[Scalar], b: &[Scalar]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn vec_sub(a: &[Scalar], b: &[Scalar]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn vec_scale(c: &Scalar, a: &[Scalar]) -> Vector {
    a.iter().map(|x| c * x).collect()
}

/// `acc += c * a`, skipping the work when `c` is zero.
pub fn axpy(acc: &mut [Scalar], c: &Scalar, a: &[Scalar]) {
    if c.is_zero() {
        return;
    }
    for (x, y) in acc.iter_mut().zip(a) {
        if !y.is_zero() {
            x.add_mul(c, y);
        }
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Scalar {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Scalar::Q(a), Scalar::Q(b)) => a.cmp(b),
            (Scalar::Fp { v: a, p: pa }, Scalar::Fp { v: b, p: pb }) => (pa, a).cmp(&(pb, b)),
            (Scalar::Q(_), Scalar::Fp { .. }) => Ordering::Less,
            (Scalar::Fp { .. }, Scalar::Q(_)) => Ordering::Greater,
        }
    }
}

/// Row-major dense matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matrix {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(field: FieldSpec, rows: usize, cols: usize) -> Matrix {
        Matrix {
            field,
            rows,
            cols,
            data: vec![Scalar::zero(field); rows * cols],
        }
    }

    pub fn identity(field: FieldSpec, n: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, Scalar::one(field));
        }
        m
    }

    pub fn from_rows(field: FieldSpec, rows: &[Vec<Scalar>]) -> Result<Matrix> {
        let cols = rows.first().map_or(0, Vec::len);
        Matrix::from_rows_with_cols(field, rows, cols)
    }

    /// Like [`Matrix::from_rows`] but keeps the column count when there are no rows.
    pub fn from_rows_with_cols(field: FieldSpec, rows: &[Vec<Scalar>], cols: usize) -> Result<Matrix> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (r, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(shape(format!("row {r} has {} entries, expected {cols}", row.len())));
            }
            for x in row {
                if x.field() != field {
                    return Err(shape(format!("entry in row {r} lies in {}, expected {field}", x.field())));
                }
            }
            data.extend(row.iter().cloned());
        }
        Ok(Matrix {
            field,
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn from_ints(field: FieldSpec, rows: &[Vec<i64>]) -> Matrix {
        let rows: Vec<Vec<Scalar>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| Scalar::from_i64(field, x)).collect())
            .collect();
        Matrix::from_rows(field, &rows).expect("rectangular integer rows")
    }

    /// Builds a matrix whose `j`-th column is `columns[j]`.
    pub fn from_columns(field: FieldSpec, rows: usize, columns: &[Vector]) -> Result<Matrix> {
        let mut m = Matrix::zeros(field, rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            if c.len() != rows {
                return Err(shape(format!("column {j} has length {}, expected {rows}", c.len())));
            }
            for (i, x) in c.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        Ok(m)
    }

    pub fn diagonal(field: FieldSpec, entries: &[Scalar]) -> Matrix {
        let mut m = Matrix::zeros(field, entries.len(), entries.len());
        for (i, x) in entries.iter().enumerate() {
            m.set(i, i, x.clone());
        }
        m
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        self.data[r * self.cols + c] = v;
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn col(&self, c: usize) -> Vector {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vector> {
        (0..self.cols).map(|c| self.col(c)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vector> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    /// Matrix product; panics on incompatible shapes.
    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut out = Matrix::zeros(self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                let start = i * out.cols;
                axpy(&mut out.data[start..start + other.cols], a, other.row(k));
            }
        }
        out
    }

    pub fn apply(&self, v: &[Scalar]) -> Vector {
        assert_eq!(self.cols, v.len(), "matrix-vector shape mismatch");
        let mut out = zero_vec(self.field, self.rows);
        for (k, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (i, o) in out.iter_mut().enumerate() {
                let a = self.get(i, k);
                if !a.is_zero() {
                    o.add_mul(a, x);
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "matrix sum shape mismatch");
        Matrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data: vec_add(&self.data, &other.data),
        }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "matrix difference shape mismatch");
        Matrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data: vec_sub(&self.data, &other.data),
        }
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        Matrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data: vec_scale(c, &self.data),
        }
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, c: &Scalar, other: &Matrix) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "matrix shape mismatch");
        axpy(&mut self.data, c, &other.data);
    }

    pub fn is_zero(&self) -> bool {
        is_zero_vec(&self.data)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|r| {
                (0..self.cols).all(|c| {
                    let x = self.get(r, c);
                    if r == c {
                        x.is_one()
                    } else {
                        x.is_zero()
                    }
                })
            })
    }

    pub fn submatrix(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Matrix {
        let mut m = Matrix::zeros(self.field, rows.len(), cols.len());
        for (i, r) in rows.clone().enumerate() {
            for (j, c) in cols.clone().enumerate() {
                m.set(i, j, self.get(r, c).clone());
            }
        }
        m
    }

    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows, "hstack row mismatch");
        let mut m = Matrix::zeros(self.field, self.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                m.set(r, c, self.get(r, c).clone());
            }
            for c in 0..other.cols {
                m.set(r, self.cols + c, other.get(r, c).clone());
            }
        }
        m
    }

    pub fn vstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols, "vstack column mismatch");
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Matrix {
            field: self.field,
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    /// Reinterprets all entries in another field (rationals reduce modulo p).
    pub fn convert(&self, field: FieldSpec) -> Result<Matrix> {
        let data = self
            .data
            .iter()
            .map(|x| x.convert(field))
            .collect::<Result<Vec<_>>>()?;
        Ok(Matrix {
            field,
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn rref(&self) -> (Matrix, usize, Vec<usize>) {
        rref(self)
    }

    pub fn rank(&self) -> usize {
        rref(self).1
    }

    pub fn kernel_basis(&self) -> SubspaceBasis {
        kernel_basis(self)
    }

    pub fn invert(&self) -> Option<Matrix> {
        invert(self)
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    pub fn pow(&self, e: u32) -> Matrix {
        let mut acc = Matrix::identity(self.field, self.rows);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }
}

impl serde::Serialize for Matrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_rows().serialize(s)
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(r, c))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// Reduced row-echelon form, rank and pivot columns.
pub fn rref(m: &Matrix) -> (Matrix, usize, Vec<usize>) {
    match m.field {
        FieldSpec::Rational => rref_rational(m),
        FieldSpec::Prime { p } => rref_prime(m, p),
    }
}

fn primitive(row: &mut [BigInt]) {
    let mut g = BigInt::zero();
    for x in row.iter() {
        if !x.is_zero() {
            g = g.gcd(x);
            if g.is_one() {
                return;
            }
        }
    }
    if g.is_zero() || g.is_one() {
        return;
    }
    for x in row.iter_mut() {
        if !x.is_zero() {
            *x = &*x / &g;
        }
    }
}

// Fraction-free Gauss-Jordan on integer-cleared rows; entries are divided back
// into rationals only at the end.
fn rref_rational(m: &Matrix) -> (Matrix, usize, Vec<usize>) {
    let (rows, cols) = (m.rows, m.cols);
    let mut a: Vec<Vec<BigInt>> = (0..rows)
        .map(|r| {
            let row = m.row(r);
            let mut l = BigInt::one();
            for x in row {
                let d = x.as_rational().expect("rational matrix").denom();
                if !d.is_one() {
                    l = l.lcm(d);
                }
            }
            let mut ints: Vec<BigInt> = row
                .iter()
                .map(|x| {
                    let q = x.as_rational().expect("rational matrix");
                    q.numer() * (&l / q.denom())
                })
                .collect();
            primitive(&mut ints);
            ints
        })
        .collect();
    let mut rank = 0;
    let mut pivots = Vec::new();
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(pr) = (rank..rows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(rank, pr);
        let pivot_row = a[rank].clone();
        let piv = &pivot_row[col];
        for (r, row) in a.iter_mut().enumerate() {
            if r == rank || row[col].is_zero() {
                continue;
            }
            let g = piv.gcd(&row[col]);
            let pm = piv / &g;
            let fm = &row[col] / &g;
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                let scaled = &*x * &pm;
                *x = if y.is_zero() { scaled } else { scaled - &fm * y };
            }
            primitive(row);
        }
        pivots.push(col);
        rank += 1;
    }
    let mut out = Matrix::zeros(m.field, rows, cols);
    for (i, &pc) in pivots.iter().enumerate() {
        let piv = a[i][pc].clone();
        for c in 0..cols {
            if !a[i][c].is_zero() {
                out.set(i, c, Scalar::Q(BigRational::new(a[i][c].clone(), piv.clone())));
            }
        }
    }
    (out, rank, pivots)
}

fn rref_prime(m: &Matrix, p: u32) -> (Matrix, usize, Vec<usize>) {
    let (rows, cols) = (m.rows, m.cols);
    let p64 = p as u64;
    let mut a: Vec<Vec<u64>> = (0..rows)
        .map(|r| {
            m.row(r)
                .iter()
                .map(|x| match x {
                    Scalar::Fp { v, .. } => *v as u64,
                    Scalar::Q(_) => panic!("field mismatch"),
                })
                .collect()
        })
        .collect();
    let inv = |x: u64| -> u64 {
        match (Scalar::Fp { v: x as u32, p }).inv() {
            Some(Scalar::Fp { v, .. }) => v as u64,
            _ => unreachable!(),
        }
    };
    let mut rank = 0;
    let mut pivots = Vec::new();
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(pr) = (rank..rows).find(|&r| a[r][col] != 0) else {
            continue;
        };
        a.swap(rank, pr);
        let s = inv(a[rank][col]);
        for x in a[rank].iter_mut() {
            *x = *x * s % p64;
        }
        let pivot_row = a[rank].clone();
        for (r, row) in a.iter_mut().enumerate() {
            if r == rank || row[col] == 0 {
                continue;
            }
            let f = p64 - row[col];
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                if *y != 0 {
                    *x = (*x + f * y) % p64;
                }
            }
        }
        pivots.push(col);
        rank += 1;
    }
    let data = a
        .into_iter()
        .flatten()
        .map(|v| Scalar::Fp { v: v as u32, p })
        .collect();
    (
        Matrix {
            field: m.field,
            rows,
            cols,
            data,
        },
        rank,
        pivots,
    )
}

/// A subspace of `K^ambient`, stored as the nonzero rows of its RREF.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SubspaceBasis {
    field: FieldSpec,
    ambient: usize,
    vectors: Vec<Vector>,
    pivots: Vec<usize>,
}

impl SubspaceBasis {
    pub fn zero(field: FieldSpec, ambient: usize) -> SubspaceBasis {
        SubspaceBasis {
            field,
            ambient,
            vectors: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(field: FieldSpec, ambient: usize) -> SubspaceBasis {
        SubspaceBasis {
            field,
            ambient,
            vectors: (0..ambient).map(|i| unit_vec(field, ambient, i)).collect(),
            pivots: (0..ambient).collect(),
        }
    }

    /// The span of arbitrary vectors.
    pub fn span(field: FieldSpec, ambient: usize, vectors: &[Vector]) -> Result<SubspaceBasis> {
        if let Some(v) = vectors.iter().find(|v| v.len() != ambient) {
            return Err(shape(format!("vector of length {} in ambient dimension {ambient}", v.len())));
        }
        if vectors.is_empty() {
            return Ok(SubspaceBasis::zero(field, ambient));
        }
        let m = Matrix::from_rows_with_cols(field, vectors, ambient)?;
        let (r, rank, pivots) = rref(&m);
        Ok(SubspaceBasis {
            field,
            ambient,
            vectors: (0..rank).map(|i| r.row(i).to_vec()).collect(),
            pivots,
        })
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_zero(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[Vector] {
        &self.vectors
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Coordinates not occupied by pivots, in increasing order.
    pub fn complement_coords(&self) -> Vec<usize> {
        (0..self.ambient).filter(|c| !self.pivots.contains(c)).collect()
    }

    /// Remainder of `v` after eliminating the pivot coordinates.
    pub fn reduce(&self, v: &[Scalar]) -> Vector {
        let mut r = v.to_vec();
        for (w, &pc) in self.vectors.iter().zip(&self.pivots) {
            let c = -&r[pc];
            axpy(&mut r, &c, w);
        }
        r
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        v.len() == self.ambient && is_zero_vec(&self.reduce(v))
    }

    /// Coordinates of `v` in the stored basis, when `v` lies in the span.
    pub fn coordinates(&self, v: &[Scalar]) -> Option<Vector> {
        if !self.contains(v) {
            return None;
        }
        Some(self.pivots.iter().map(|&pc| v[pc].clone()).collect())
    }

    pub fn is_subspace_of(&self, other: &SubspaceBasis) -> bool {
        self.vectors.iter().all(|v| other.contains(v))
    }

    pub fn sum(&self, other: &SubspaceBasis) -> SubspaceBasis {
        let mut vs = self.vectors.clone();
        vs.extend(other.vectors.iter().cloned());
        SubspaceBasis::span(self.field, self.ambient, &vs).expect("same ambient")
    }

    /// Basis vectors as the columns of an `ambient × dim` matrix.
    pub fn as_columns(&self) -> Matrix {
        Matrix::from_columns(self.field, self.ambient, &self.vectors).expect("consistent lengths")
    }
}

pub fn kernel_basis(m: &Matrix) -> SubspaceBasis {
    let (r, rank, pivots) = rref(m);
    let field = m.field;
    let free: Vec<usize> = (0..m.cols).filter(|c| !pivots.contains(c)).collect();
    let vectors: Vec<Vector> = free
        .iter()
        .map(|&f| {
            let mut x = zero_vec(field, m.cols);
            x[f] = Scalar::one(field);
            for i in 0..rank {
                x[pivots[i]] = -r.get(i, f);
            }
            x
        })
        .collect();
    SubspaceBasis::span(field, m.cols, &vectors).expect("kernel vectors have matching length")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineSolution {
    pub particular: Vector,
    pub homogeneous: SubspaceBasis,
}

/// Solution set of `a·x = b`, or `None` when inconsistent.
pub fn solve_affine(a: &Matrix, b: &[Scalar]) -> Result<Option<AffineSolution>> {
    if a.rows != b.len() {
        return Err(shape(format!("system has {} rows but right side has {}", a.rows, b.len())));
    }
    let rhs = Matrix::from_columns(a.field, a.rows, &[b.to_vec()])?;
    let (r, rank, pivots) = rref(&a.hstack(&rhs));
    if pivots.last() == Some(&a.cols) {
        return Ok(None);
    }
    let mut x = zero_vec(a.field, a.cols);
    for i in 0..rank {
        x[pivots[i]] = r.get(i, a.cols).clone();
    }
    Ok(Some(AffineSolution {
        particular: x,
        homogeneous: kernel_basis(a),
    }))
}

pub fn invert(m: &Matrix) -> Option<Matrix> {
    if !m.is_square() {
        return None;
    }
    let n = m.rows;
    if n == 0 {
        return Some(m.clone());
    }
    let (r, rank, pivots) = rref(&m.hstack(&Matrix::identity(m.field, n)));
    if rank < n || pivots.get(n - 1).is_some_and(|&c| c >= n) {
        return None;
    }
    Some(r.submatrix(0..n, n..2 * n))
}

/// Reusable solver for many right-hand sides against one coefficient matrix.
#[derive(Clone, Debug)]
pub struct LinearSolver {
    cols: usize,
    rank: usize,
    pivots: Vec<usize>,
    // Row operations E with E·a = rref(a).
    ops: Matrix,
    kernel: SubspaceBasis,
}

impl LinearSolver {
    pub fn new(a: &Matrix) -> LinearSolver {
        let (r, rank, pivots) = rref(&a.hstack(&Matrix::identity(a.field, a.rows)));
        let pivots: Vec<usize> = pivots.into_iter().take_while(|&c| c < a.cols).collect();
        let rank_a = pivots.len();
        debug_assert!(rank_a <= rank);
        LinearSolver {
            cols: a.cols,
            rank: rank_a,
            pivots,
            ops: r.submatrix(0..a.rows, a.cols..a.cols + a.rows),
            kernel: kernel_basis(a),
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn kernel(&self) -> &SubspaceBasis {
        &self.kernel
    }

    /// A particular solution of `a·x = b` with free coordinates set to zero.
    pub fn solve(&self, b: &[Scalar]) -> Option<Vector> {
        let eb = self.ops.apply(b);
        if !is_zero_vec(&eb[self.rank..]) {
            return None;
        }
        let mut x = zero_vec(self.ops.field, self.cols);
        for (i, &pc) in self.pivots.iter().enumerate() {
            x[pc] = eb[i].clone();
        }
        Some(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> FieldSpec {
        FieldSpec::Rational
    }

    #[test]
    fn rref_small_cases() {
        let (r, rank, piv) = rref(&Matrix::identity(q(), 3));
        assert!(r.is_identity());
        assert_eq!((rank, piv), (3, vec![0, 1, 2]));
        let (r, rank, piv) = rref(&Matrix::zeros(q(), 2, 4));
        assert!(r.is_zero());
        assert_eq!((rank, piv), (0, vec![]));
        let (r, rank, _) = rref(&Matrix::from_ints(q(), &[vec![2, 4], vec![1, 2]]));
        assert_eq!(rank, 1);
        assert_eq!(r, Matrix::from_ints(q(), &[vec![1, 2], vec![0, 0]]));
    }

    #[test]
    fn rref_with_fractions() {
        let m = Matrix::from_ints(q(), &[vec![2, 3, 1], vec![4, 1, 5], vec![6, 4, 6]]);
        let (r, rank, piv) = rref(&m);
        assert_eq!(rank, 2);
        assert_eq!(piv, vec![0, 1]);
        assert_eq!(r.get(0, 2).to_string(), "7/5");
        assert_eq!(r.get(1, 2).to_string(), "-3/5");
    }

    #[test]
    fn kernel_cases() {
        assert!(kernel_basis(&Matrix::identity(q(), 4)).is_zero());
        assert_eq!(kernel_basis(&Matrix::zeros(q(), 2, 3)).dim(), 3);
        let k = kernel_basis(&Matrix::from_ints(q(), &[vec![1, 2]]));
        assert_eq!(k.dim(), 1);
        assert_eq!(k.vectors()[0], vec![q().int(1), Scalar::parse(q(), "-1/2").unwrap()]);
        assert!(k.contains(&[q().int(-2), q().int(1)]));
    }

    #[test]
    fn solve_cases() {
        let s = solve_affine(&Matrix::identity(q(), 1), &[q().int(5)]).unwrap().unwrap();
        assert_eq!(s.particular, vec![q().int(5)]);
        assert!(s.homogeneous.is_zero());
        assert!(solve_affine(&Matrix::zeros(q(), 1, 1), &[q().int(1)]).unwrap().is_none());
        let s = solve_affine(&Matrix::from_ints(q(), &[vec![1, 1]]), &[q().int(3)])
            .unwrap()
            .unwrap();
        assert_eq!(s.particular, vec![q().int(3), q().int(0)]);
        assert!(s.homogeneous.contains(&[q().int(-1), q().int(1)]));
        assert_eq!(s.homogeneous.dim(), 1);
    }

    #[test]
    fn invert_cases() {
        assert!(invert(&Matrix::identity(q(), 3)).unwrap().is_identity());
        let swap = Matrix::from_ints(q(), &[vec![0, 1], vec![1, 0]]);
        assert_eq!(invert(&swap).unwrap(), swap);
        assert!(invert(&Matrix::from_ints(q(), &[vec![1, 1], vec![0, 0]])).is_none());
        let f3 = FieldSpec::prime(3).unwrap();
        let m = Matrix::from_ints(f3, &[vec![1, 2], vec![0, 2]]);
        assert!(m.mul(&invert(&m).unwrap()).is_identity());
    }

    #[test]
    fn linear_solver_agrees_with_solve_affine() {
        let a = Matrix::from_ints(q(), &[vec![1, 2, 3], vec![2, 4, 6], vec![1, 0, 1]]);
        let s = LinearSolver::new(&a);
        assert_eq!(s.rank(), 2);
        let b = vec![q().int(1), q().int(2), q().int(3)];
        let x = s.solve(&b).unwrap();
        assert_eq!(a.apply(&x), b);
        assert!(s.solve(&[q().int(1), q().int(3), q().int(0)]).is_none());
    }
}
