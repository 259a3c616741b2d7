//! The Yamaguti cochain complex of a representation: cochains, the coboundary
//! maps `δ` and `δ*`, and the groups `H¹`, `H^(2,3)` and `H^(4,5)`.
//!
//! A 1-cochain `λ: L → V` is an `m × n` matrix. Its coordinate vector in `K^{nm}`
//! lists `λ(e_i)_t` at position `i*m + t`.
//!
//! Each coboundary formula is written once against the [`Source`] trait and
//! evaluated two ways: on concrete cochains, and symbolically, to assemble the
//! matrix rows used for kernels and images.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{shape, Error, Result};
use crate::linalg::{is_zero_vec, solve_affine, zero_vec, LinearSolver, Matrix, SubspaceBasis, Vector};
use crate::representation::Representation;
use crate::scalar::{FieldSpec, Scalar};

/// Default bound on `dim L` for [`h45`].
pub const H45_DIM_GUARD: usize = 5;

fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

fn pair_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j);
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

/// Coordinates of the space of `arity`-linear maps `L^arity → V` that vanish
/// whenever a pair `(x_{2i−1}, x_{2i})` repeats and are skew in each pair.
///
/// Canonical tuples have `x_{2i−1} < x_{2i}` in every pair, with a trailing free
/// slot when `arity` is odd; they are enumerated lexicographically and each
/// contributes `m` coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CochainSpace {
    pub n: usize,
    pub m: usize,
    pub arity: usize,
}

impl CochainSpace {
    pub fn new(n: usize, m: usize, arity: usize) -> CochainSpace {
        CochainSpace { n, m, arity }
    }

    pub fn pairs(&self) -> usize {
        self.arity / 2
    }

    pub fn has_free_slot(&self) -> bool {
        self.arity % 2 == 1
    }

    pub fn tuple_count(&self) -> usize {
        let p = pair_count(self.n).pow(self.pairs() as u32);
        if self.has_free_slot() {
            p * self.n
        } else {
            p
        }
    }

    pub fn dim(&self) -> usize {
        self.tuple_count() * self.m
    }

    pub fn canonical_tuples(&self) -> Vec<Vec<usize>> {
        let n = self.n;
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        let mut out: Vec<Vec<usize>> = vec![Vec::new()];
        for _ in 0..self.pairs() {
            out = out
                .into_iter()
                .flat_map(|t| {
                    pairs.iter().map(move |&(i, j)| {
                        let mut t = t.clone();
                        t.push(i);
                        t.push(j);
                        t
                    })
                })
                .collect();
        }
        if self.has_free_slot() {
            out = out
                .into_iter()
                .flat_map(|t| {
                    (0..n).map(move |k| {
                        let mut t = t.clone();
                        t.push(k);
                        t
                    })
                })
                .collect();
        }
        out
    }

    /// Canonical tuple index of `tuple` and whether the value picks up a sign;
    /// `None` when a pair repeats (the value is forced to zero).
    pub fn locate(&self, tuple: &[usize]) -> Option<(usize, bool)> {
        let n = self.n;
        let pc = pair_count(n);
        let mut idx = 0usize;
        let mut negative = false;
        for k in 0..self.pairs() {
            let (a, b) = (tuple[2 * k], tuple[2 * k + 1]);
            let (i, j) = match a.cmp(&b) {
                std::cmp::Ordering::Less => (a, b),
                std::cmp::Ordering::Greater => {
                    negative = !negative;
                    (b, a)
                }
                std::cmp::Ordering::Equal => return None,
            };
            idx = idx * pc + pair_index(n, i, j);
        }
        if self.has_free_slot() {
            idx = idx * n + tuple[self.arity - 1];
        }
        Some((idx, negative))
    }
}

/// A multilinear map `L^arity → V`, stored densely over all basis tuples.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cochain {
    field: FieldSpec,
    arity: usize,
    n: usize,
    m: usize,
    data: Vec<Scalar>,
}

fn tuple_code(n: usize, tuple: &[usize]) -> usize {
    tuple.iter().fold(0, |acc, &x| acc * n + x)
}

fn decode(n: usize, arity: usize, mut code: usize, out: &mut [usize]) {
    for slot in (0..arity).rev() {
        out[slot] = code % n;
        code /= n;
    }
}

impl Cochain {
    pub fn zero(field: FieldSpec, arity: usize, n: usize, m: usize) -> Cochain {
        Cochain {
            field,
            arity,
            n,
            m,
            data: vec![Scalar::zero(field); n.pow(arity as u32) * m],
        }
    }

    /// Wraps dense data laid out as `code(tuple)*m + t`.
    pub fn from_data(field: FieldSpec, arity: usize, n: usize, m: usize, data: Vec<Scalar>) -> Result<Cochain> {
        if data.len() != n.pow(arity as u32) * m {
            return Err(shape(format!("cochain data of length {} for arity {arity}", data.len())));
        }
        Ok(Cochain {
            field,
            arity,
            n,
            m,
            data,
        })
    }

    /// A 1-cochain from its `m × n` matrix.
    pub fn from_lambda(lam: &Matrix) -> Cochain {
        let (m, n) = (lam.rows(), lam.cols());
        let mut data = Vec::with_capacity(n * m);
        for i in 0..n {
            data.extend(lam.col(i));
        }
        Cochain {
            field: lam.field(),
            arity: 1,
            n,
            m,
            data,
        }
    }

    pub fn to_lambda(&self) -> Matrix {
        assert_eq!(self.arity, 1, "only 1-cochains are matrices");
        let cols: Vec<Vector> = (0..self.n).map(|i| self.at(&[i]).to_vec()).collect();
        Matrix::from_columns(self.field, self.m, &cols).expect("consistent lengths")
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn data(&self) -> &[Scalar] {
        &self.data
    }

    pub fn at(&self, tuple: &[usize]) -> &[Scalar] {
        let s = tuple_code(self.n, tuple) * self.m;
        &self.data[s..s + self.m]
    }

    pub fn set(&mut self, tuple: &[usize], value: &[Scalar]) {
        let s = tuple_code(self.n, tuple) * self.m;
        self.data[s..s + self.m].clone_from_slice(value);
    }

    pub fn is_zero(&self) -> bool {
        is_zero_vec(&self.data)
    }

    pub fn tuples(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        let (n, k) = (self.n, self.arity);
        (0..n.pow(k as u32)).map(move |code| {
            let mut t = vec![0; k];
            decode(n, k, code, &mut t);
            t
        })
    }

    fn zip_with(&self, other: &Cochain, f: impl Fn(&Scalar, &Scalar) -> Scalar) -> Cochain {
        assert_eq!((self.arity, self.n, self.m), (other.arity, other.n, other.m), "cochain shape mismatch");
        Cochain {
            data: self.data.iter().zip(&other.data).map(|(a, b)| f(a, b)).collect(),
            ..self.clone()
        }
    }

    pub fn add(&self, other: &Cochain) -> Cochain {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Cochain) -> Cochain {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, c: &Scalar) -> Cochain {
        Cochain {
            data: self.data.iter().map(|x| c * x).collect(),
            ..self.clone()
        }
    }

    /// Whether values vanish on repeated pairs and flip sign under swapping a pair.
    pub fn satisfies_slot_conditions(&self) -> bool {
        let space = CochainSpace::new(self.n, self.m, self.arity);
        self.tuples().all(|t| match space.locate(&t) {
            None => is_zero_vec(self.at(&t)),
            Some(_) => {
                let canon = canonicalize(&t);
                let (c, neg) = canon;
                let v = self.at(&c);
                if neg {
                    self.at(&t).iter().zip(v).all(|(a, b)| (a + b).is_zero())
                } else {
                    self.at(&t) == v
                }
            }
        })
    }

    /// `f(ψ·, …, ψ·)` for `ψ: K^n → K^n`.
    pub fn compose_inputs(&self, psi: &Matrix) -> Cochain {
        assert_eq!((psi.rows(), psi.cols()), (self.n, self.n), "input map shape mismatch");
        let (n, m, k) = (self.n, self.m, self.arity);
        let mut cur = self.data.clone();
        let mut t = vec![0; k];
        let mut src = vec![0; k];
        for slot in 0..k {
            let mut next = vec![Scalar::zero(self.field); cur.len()];
            for code in 0..n.pow(k as u32) {
                decode(n, k, code, &mut t);
                let out = &mut next[code * m..(code + 1) * m];
                src.clone_from(&t);
                for l in 0..n {
                    let c = psi.get(l, t[slot]);
                    if c.is_zero() {
                        continue;
                    }
                    src[slot] = l;
                    let s = tuple_code(n, &src) * m;
                    crate::linalg::axpy(out, c, &cur[s..s + m]);
                }
            }
            cur = next;
        }
        Cochain {
            data: cur,
            ..self.clone()
        }
    }

    /// `φ ∘ f` for `φ: K^m → K^m`.
    pub fn compose_output(&self, phi: &Matrix) -> Cochain {
        assert_eq!((phi.rows(), phi.cols()), (self.m, self.m), "output map shape mismatch");
        let m = self.m;
        let mut data = Vec::with_capacity(self.data.len());
        for chunk in self.data.chunks(m.max(1)) {
            if m > 0 {
                data.extend(phi.apply(chunk));
            }
        }
        Cochain { data, ..self.clone() }
    }

    pub fn convert(&self, field: FieldSpec) -> Result<Cochain> {
        let data = self.data.iter().map(|x| x.convert(field)).collect::<Result<Vec<_>>>()?;
        Ok(Cochain { field, data, ..self.clone() })
    }
}

/// Sorts each pair of a tuple; returns the sorted tuple and the accumulated sign.
fn canonicalize(t: &[usize]) -> (Vec<usize>, bool) {
    let mut c = t.to_vec();
    let mut neg = false;
    for k in 0..t.len() / 2 {
        if c[2 * k] > c[2 * k + 1] {
            c.swap(2 * k, 2 * k + 1);
            neg = !neg;
        }
    }
    (c, neg)
}

/// An element of `C^(2p, 2p+1)`: `even` has arity `2p`, `odd` arity `2p+1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CochainPair {
    level: usize,
    even: Cochain,
    odd: Cochain,
}

impl CochainPair {
    pub fn zero(field: FieldSpec, level: usize, n: usize, m: usize) -> CochainPair {
        CochainPair {
            level,
            even: Cochain::zero(field, 2 * level, n, m),
            odd: Cochain::zero(field, 2 * level + 1, n, m),
        }
    }

    pub fn new(even: Cochain, odd: Cochain) -> Result<CochainPair> {
        if even.arity % 2 != 0 || odd.arity != even.arity + 1 || even.arity == 0 {
            return Err(shape("cochain pair needs arities (2p, 2p+1) with p >= 1"));
        }
        if (even.n, even.m, even.field) != (odd.n, odd.m, odd.field) {
            return Err(shape("cochain pair parts disagree in shape or field"));
        }
        Ok(CochainPair {
            level: even.arity / 2,
            even,
            odd,
        })
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn even(&self) -> &Cochain {
        &self.even
    }

    pub fn odd(&self) -> &Cochain {
        &self.odd
    }

    pub fn n(&self) -> usize {
        self.even.n
    }

    pub fn m(&self) -> usize {
        self.even.m
    }

    pub fn field(&self) -> FieldSpec {
        self.even.field
    }

    pub fn is_zero(&self) -> bool {
        self.even.is_zero() && self.odd.is_zero()
    }

    pub fn add(&self, other: &CochainPair) -> CochainPair {
        CochainPair {
            level: self.level,
            even: self.even.add(&other.even),
            odd: self.odd.add(&other.odd),
        }
    }

    pub fn sub(&self, other: &CochainPair) -> CochainPair {
        CochainPair {
            level: self.level,
            even: self.even.sub(&other.even),
            odd: self.odd.sub(&other.odd),
        }
    }

    pub fn scale(&self, c: &Scalar) -> CochainPair {
        CochainPair {
            level: self.level,
            even: self.even.scale(c),
            odd: self.odd.scale(c),
        }
    }

    pub fn satisfies_slot_conditions(&self) -> bool {
        self.even.satisfies_slot_conditions() && self.odd.satisfies_slot_conditions()
    }

    pub fn spaces(&self) -> (CochainSpace, CochainSpace) {
        pair_spaces(self.level, self.n(), self.m())
    }

    /// Canonical coordinates: the even part followed by the odd part.
    pub fn coords(&self) -> Vector {
        let (se, so) = self.spaces();
        let mut out = Vec::with_capacity(se.dim() + so.dim());
        for (space, c) in [(se, &self.even), (so, &self.odd)] {
            for t in space.canonical_tuples() {
                out.extend(c.at(&t).iter().cloned());
            }
        }
        out
    }

    pub fn from_coords(field: FieldSpec, level: usize, n: usize, m: usize, coords: &[Scalar]) -> Result<CochainPair> {
        let (se, so) = pair_spaces(level, n, m);
        if coords.len() != se.dim() + so.dim() {
            return Err(shape(format!(
                "{} coordinates for a cochain space of dimension {}",
                coords.len(),
                se.dim() + so.dim()
            )));
        }
        let fill = |space: CochainSpace, offset: usize| -> Cochain {
            let mut c = Cochain::zero(field, space.arity, n, m);
            let mut t = vec![0; space.arity];
            for code in 0..n.pow(space.arity as u32) {
                decode(n, space.arity, code, &mut t);
                if let Some((idx, neg)) = space.locate(&t) {
                    let s = offset + idx * m;
                    let v: Vector = coords[s..s + m]
                        .iter()
                        .map(|x| if neg { -x } else { x.clone() })
                        .collect();
                    c.set(&t, &v);
                }
            }
            c
        };
        Ok(CochainPair {
            level,
            even: fill(se, 0),
            odd: fill(so, se.dim()),
        })
    }

    /// `(f(ψ·,ψ·), g(ψ·,ψ·,ψ·))`.
    pub fn compose_inputs(&self, psi: &Matrix) -> CochainPair {
        CochainPair {
            level: self.level,
            even: self.even.compose_inputs(psi),
            odd: self.odd.compose_inputs(psi),
        }
    }

    /// `(φ∘f, φ∘g)`.
    pub fn compose_output(&self, phi: &Matrix) -> CochainPair {
        CochainPair {
            level: self.level,
            even: self.even.compose_output(phi),
            odd: self.odd.compose_output(phi),
        }
    }

    /// Dense values over all tuples, even part first.
    pub fn flatten(&self) -> Vector {
        let mut v = self.even.data.clone();
        v.extend(self.odd.data.iter().cloned());
        v
    }

    pub fn convert(&self, field: FieldSpec) -> Result<CochainPair> {
        Ok(CochainPair {
            level: self.level,
            even: self.even.convert(field)?,
            odd: self.odd.convert(field)?,
        })
    }
}

pub fn pair_spaces(level: usize, n: usize, m: usize) -> (CochainSpace, CochainSpace) {
    (
        CochainSpace::new(n, m, 2 * level),
        CochainSpace::new(n, m, 2 * level + 1),
    )
}

/// Output pieces of `δ*`, stored as unconstrained tensors of arities 3 and 4.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StarPair {
    pub first: Cochain,
    pub second: Cochain,
}

impl StarPair {
    pub fn is_zero(&self) -> bool {
        self.first.is_zero() && self.second.is_zero()
    }
}

// ---------------------------------------------------------------------------
// Formula engine

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Part {
    Even,
    Odd,
}

trait Expr: Clone + Send {
    fn add_scaled(&mut self, c: &Scalar, other: &Self);
    fn mat_apply(&self, mat: &Matrix) -> Self;
}

impl Expr for Vector {
    fn add_scaled(&mut self, c: &Scalar, other: &Self) {
        crate::linalg::axpy(self, c, other);
    }

    fn mat_apply(&self, mat: &Matrix) -> Self {
        mat.apply(self)
    }
}

/// One sparse linear form over input coordinates per component of `V`.
#[derive(Clone, Debug)]
struct SymVec(Vec<BTreeMap<usize, Scalar>>);

impl Expr for SymVec {
    fn add_scaled(&mut self, c: &Scalar, other: &Self) {
        if c.is_zero() {
            return;
        }
        for (mine, theirs) in self.0.iter_mut().zip(&other.0) {
            for (k, v) in theirs {
                let e = mine.entry(*k).or_insert_with(|| Scalar::zero(c.field()));
                e.add_mul(c, v);
                if e.is_zero() {
                    mine.remove(k);
                }
            }
        }
    }

    fn mat_apply(&self, mat: &Matrix) -> Self {
        let mut out = SymVec(vec![BTreeMap::new(); mat.rows()]);
        for t in 0..mat.rows() {
            for s in 0..mat.cols() {
                let c = mat.get(t, s);
                if c.is_zero() {
                    continue;
                }
                let single = SymVec(vec![self.0[s].clone()]);
                let mut acc = SymVec(vec![std::mem::take(&mut out.0[t])]);
                acc.add_scaled(c, &single);
                out.0[t] = acc.0.pop().expect("one row");
            }
        }
        out
    }
}

trait Source: Sync {
    type E: Expr;
    fn zero(&self) -> Self::E;
    fn leaf(&self, part: Part, tuple: &[usize]) -> Self::E;
}

struct Concrete<'a> {
    even: &'a Cochain,
    odd: Option<&'a Cochain>,
}

impl Source for Concrete<'_> {
    type E = Vector;

    fn zero(&self) -> Vector {
        zero_vec(self.even.field, self.even.m)
    }

    fn leaf(&self, part: Part, tuple: &[usize]) -> Vector {
        match part {
            Part::Even => self.even.at(tuple).to_vec(),
            Part::Odd => self.odd.expect("odd part present").at(tuple).to_vec(),
        }
    }
}

/// Leaves become canonical coordinates of the input space.
struct Symbolic {
    field: FieldSpec,
    m: usize,
    even: CochainSpace,
    odd: Option<CochainSpace>,
}

impl Symbolic {
    fn lambda(field: FieldSpec, n: usize, m: usize) -> Symbolic {
        Symbolic {
            field,
            m,
            even: CochainSpace::new(n, m, 1),
            odd: None,
        }
    }

    fn pair(field: FieldSpec, level: usize, n: usize, m: usize) -> Symbolic {
        let (e, o) = pair_spaces(level, n, m);
        Symbolic {
            field,
            m,
            even: e,
            odd: Some(o),
        }
    }

    fn input_dim(&self) -> usize {
        self.even.dim() + self.odd.map_or(0, |o| o.dim())
    }
}

impl Source for Symbolic {
    type E = SymVec;

    fn zero(&self) -> SymVec {
        SymVec(vec![BTreeMap::new(); self.m])
    }

    fn leaf(&self, part: Part, tuple: &[usize]) -> SymVec {
        let (space, offset) = match part {
            Part::Even => (self.even, 0),
            Part::Odd => (self.odd.expect("odd part present"), self.even.dim()),
        };
        let mut out = self.zero();
        if let Some((idx, neg)) = space.locate(tuple) {
            let sign = if neg {
                Scalar::from_i64(self.field, -1)
            } else {
                Scalar::one(self.field)
            };
            for t in 0..self.m {
                out.0[t].insert(offset + idx * self.m + t, sign.clone());
            }
        }
        out
    }
}

fn sign(field: FieldSpec, negative: bool) -> Scalar {
    if negative {
        Scalar::from_i64(field, -1)
    } else {
        Scalar::one(field)
    }
}

/// Value at `tuple` with slot `slot` replaced by the vector `v`.
fn leaf_with<S: Source>(src: &S, part: Part, tuple: &[usize], slot: usize, v: &[Scalar]) -> S::E {
    let mut acc = src.zero();
    let mut t = tuple.to_vec();
    for (l, c) in v.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        t[slot] = l;
        acc.add_scaled(c, &src.leaf(part, &t));
    }
    acc
}

fn delta_zero_at<S: Source>(r: &Representation, src: &S, part: Part, x: &[usize]) -> S::E {
    let f = r.field();
    let one = Scalar::one(f);
    let neg = Scalar::from_i64(f, -1);
    let l = r.algebra();
    let lam = |i: usize| src.leaf(Part::Even, &[i]);
    let mut acc = src.zero();
    match part {
        Part::Even => {
            let (a, b) = (x[0], x[1]);
            acc.add_scaled(&one, &lam(b).mat_apply(r.rho(a)));
            acc.add_scaled(&neg, &lam(a).mat_apply(r.rho(b)));
            acc.add_scaled(&neg, &leaf_with(src, Part::Even, &[0], 0, l.bracket_basis(a, b)));
        }
        Part::Odd => {
            let (a, b, c) = (x[0], x[1], x[2]);
            acc.add_scaled(&one, &lam(a).mat_apply(r.theta(b, c)));
            acc.add_scaled(&neg, &lam(b).mat_apply(r.theta(a, c)));
            acc.add_scaled(&one, &lam(c).mat_apply(r.d(a, b)));
            acc.add_scaled(&neg, &leaf_with(src, Part::Even, &[0], 0, l.triple_basis(a, b, c)));
        }
    }
    acc
}

fn without(x: &[usize], i0: usize, i1: usize) -> Vec<usize> {
    x.iter()
        .enumerate()
        .filter(|(i, _)| *i != i0 && *i != i1)
        .map(|(_, &v)| v)
        .collect()
}

/// General coboundary `C^(2p,2p+1) → C^(2p+2,2p+3)` at one output tuple (0-based indices).
fn delta_pair_at<S: Source>(r: &Representation, p: usize, src: &S, part: Part, x: &[usize]) -> S::E {
    let f = r.field();
    let neg = Scalar::from_i64(f, -1);
    let sp = sign(f, p % 2 == 1);
    let l = r.algebra();
    let mut acc = src.zero();
    let (leaf_part, pairs_in_sum, len) = match part {
        Part::Even => (Part::Even, p, 2 * p + 2),
        Part::Odd => (Part::Odd, p + 1, 2 * p + 3),
    };
    debug_assert_eq!(x.len(), len);
    match part {
        Part::Even => {
            // (−1)^p [ρ(x_{2p+1}) g(x_1..x_{2p}, x_{2p+2}) − ρ(x_{2p+2}) g(x_1..x_{2p+1})
            //          − g(x_1..x_{2p}, [x_{2p+1}, x_{2p+2}])]
            let (u, v) = (x[2 * p], x[2 * p + 1]);
            let mut head = x[..2 * p].to_vec();
            head.push(v);
            let mut inner = src.leaf(Part::Odd, &head).mat_apply(r.rho(u));
            head[2 * p] = u;
            inner.add_scaled(&neg, &src.leaf(Part::Odd, &head).mat_apply(r.rho(v)));
            inner.add_scaled(&neg, &leaf_with(src, Part::Odd, &head, 2 * p, l.bracket_basis(u, v)));
            acc.add_scaled(&sp, &inner);
        }
        Part::Odd => {
            // (−1)^p [θ(x_{2p+2}, x_{2p+3}) g(x_1..x_{2p+1}) − θ(x_{2p+1}, x_{2p+3}) g(x_1..x_{2p}, x_{2p+2})]
            let (u, v, w) = (x[2 * p], x[2 * p + 1], x[2 * p + 2]);
            let head: Vec<usize> = x[..2 * p + 1].to_vec();
            let mut inner = src.leaf(Part::Odd, &head).mat_apply(r.theta(v, w));
            let mut head2 = x[..2 * p].to_vec();
            head2.push(v);
            inner.add_scaled(&neg, &src.leaf(Part::Odd, &head2).mat_apply(r.theta(u, w)));
            acc.add_scaled(&sp, &inner);
        }
    }
    for k in 1..=pairs_in_sum {
        let (i0, i1) = (2 * k - 2, 2 * k - 1);
        let rest = without(x, i0, i1);
        // (−1)^{k+1} D(x_{2k−1}, x_{2k}) h(x without the pair)
        let sk1 = sign(f, k % 2 == 0);
        acc.add_scaled(&sk1, &src.leaf(leaf_part, &rest).mat_apply(r.d(x[i0], x[i1])));
        // (−1)^k h(..., {x_{2k−1}, x_{2k}, x_j}, ...) for j > 2k
        let sk = sign(f, k % 2 == 1);
        for j0 in 2 * k..len {
            let v = l.triple_basis(x[i0], x[i1], x[j0]);
            acc.add_scaled(&sk, &leaf_with(src, leaf_part, &rest, j0 - 2, v));
        }
    }
    acc
}

fn delta_star_at<S: Source>(r: &Representation, src: &S, part: Part, x: &[usize]) -> S::E {
    let f = r.field();
    let one = Scalar::one(f);
    let neg = Scalar::from_i64(f, -1);
    let l = r.algebra();
    let mut acc = src.zero();
    match part {
        Part::Even => {
            let (a, b, c) = (x[0], x[1], x[2]);
            for (p, q, s) in [(a, b, c), (b, c, a), (c, a, b)] {
                // −ρ(p) f(q, s) + f([p, q], s) + g(p, q, s)
                acc.add_scaled(&neg, &src.leaf(Part::Even, &[q, s]).mat_apply(r.rho(p)));
                acc.add_scaled(&one, &leaf_with(src, Part::Even, &[0, s], 0, l.bracket_basis(p, q)));
                acc.add_scaled(&one, &src.leaf(Part::Odd, &[p, q, s]));
            }
        }
        Part::Odd => {
            let (a, b, c, d) = (x[0], x[1], x[2], x[3]);
            for (p, q, s) in [(a, b, c), (b, c, a), (c, a, b)] {
                // θ(p, d) f(q, s) + g([p, q], s, d)
                acc.add_scaled(&one, &src.leaf(Part::Even, &[q, s]).mat_apply(r.theta(p, d)));
                acc.add_scaled(&one, &leaf_with(src, Part::Odd, &[0, s, d], 0, l.bracket_basis(p, q)));
            }
        }
    }
    acc
}

fn check_lambda(r: &Representation, lam: &Matrix) -> Result<()> {
    if lam.rows() != r.vdim() || lam.cols() != r.n() || lam.field() != r.field() {
        return Err(shape(format!(
            "1-cochain must be {}x{} over {}",
            r.vdim(),
            r.n(),
            r.field()
        )));
    }
    Ok(())
}

fn check_pair(r: &Representation, c: &CochainPair) -> Result<()> {
    if c.n() != r.n() || c.m() != r.vdim() || c.field() != r.field() {
        return Err(shape("cochain pair does not match the representation"));
    }
    Ok(())
}

fn fill<F>(field: FieldSpec, arity: usize, n: usize, m: usize, eval: F) -> Cochain
where
    F: Fn(&[usize]) -> Vector + Sync,
{
    let data: Vec<Scalar> = (0..n.pow(arity as u32))
        .into_par_iter()
        .flat_map_iter(|code| {
            let mut t = vec![0; arity];
            decode(n, arity, code, &mut t);
            eval(&t)
        })
        .collect();
    Cochain::from_data(field, arity, n, m, data).expect("consistent sizes")
}

/// `(δ_I λ, δ_II λ)`.
pub fn delta_zero(r: &Representation, lam: &Matrix) -> Result<CochainPair> {
    check_lambda(r, lam)?;
    let c = Cochain::from_lambda(lam);
    let src = Concrete { even: &c, odd: None };
    let (n, m, f) = (r.n(), r.vdim(), r.field());
    CochainPair::new(
        fill(f, 2, n, m, |t| delta_zero_at(r, &src, Part::Even, t)),
        fill(f, 3, n, m, |t| delta_zero_at(r, &src, Part::Odd, t)),
    )
}

/// The coboundary of a level-`p` pair, a level-`p+1` pair.
pub fn delta_pair(r: &Representation, c: &CochainPair) -> Result<CochainPair> {
    check_pair(r, c)?;
    let p = c.level();
    let src = Concrete {
        even: &c.even,
        odd: Some(&c.odd),
    };
    let (n, m, f) = (r.n(), r.vdim(), r.field());
    CochainPair::new(
        fill(f, 2 * p + 2, n, m, |t| delta_pair_at(r, p, &src, Part::Even, t)),
        fill(f, 2 * p + 3, n, m, |t| delta_pair_at(r, p, &src, Part::Odd, t)),
    )
}

/// `(δ*_I f, δ*_II g)` for a level-1 pair.
pub fn delta_star(r: &Representation, c: &CochainPair) -> Result<StarPair> {
    check_pair(r, c)?;
    if c.level() != 1 {
        return Err(shape("delta_star is defined on level-1 pairs"));
    }
    let src = Concrete {
        even: &c.even,
        odd: Some(&c.odd),
    };
    let (n, m, f) = (r.n(), r.vdim(), r.field());
    Ok(StarPair {
        first: fill(f, 3, n, m, |t| delta_star_at(r, &src, Part::Even, t)),
        second: fill(f, 4, n, m, |t| delta_star_at(r, &src, Part::Odd, t)),
    })
}

pub fn is_cocycle23(r: &Representation, c: &CochainPair) -> Result<bool> {
    if c.level() != 1 {
        return Err(shape("(2,3)-cocycle test needs a level-1 pair"));
    }
    Ok(delta_pair(r, c)?.is_zero() && delta_star(r, c)?.is_zero())
}

fn sym_rows<F>(cols: usize, field: FieldSpec, tuples: Vec<Vec<usize>>, eval: F) -> Vec<Vector>
where
    F: Fn(&[usize]) -> SymVec + Sync,
{
    tuples
        .into_par_iter()
        .flat_map_iter(|t| {
            let s = eval(&t);
            s.0.into_iter().map(|row| {
                let mut dense = zero_vec(field, cols);
                for (k, v) in row {
                    dense[k] = v;
                }
                dense
            })
        })
        .collect()
}

fn all_tuples(n: usize, arity: usize) -> Vec<Vec<usize>> {
    (0..n.pow(arity as u32))
        .map(|code| {
            let mut t = vec![0; arity];
            decode(n, arity, code, &mut t);
            t
        })
        .collect()
}

/// Matrix of `λ ↦ (δ_I λ, δ_II λ)` from `K^{nm}` to dense values on all tuples.
pub fn delta_zero_matrix(r: &Representation) -> Matrix {
    let (n, m, f) = (r.n(), r.vdim(), r.field());
    let src = Symbolic::lambda(f, n, m);
    let cols = src.input_dim();
    let mut rows = sym_rows(cols, f, all_tuples(n, 2), |t| delta_zero_at(r, &src, Part::Even, t));
    rows.extend(sym_rows(cols, f, all_tuples(n, 3), |t| delta_zero_at(r, &src, Part::Odd, t)));
    Matrix::from_rows_with_cols(f, &rows, cols).expect("rows of equal length")
}

/// Matrix of `δ` on `C^(2p,2p+1)` coordinates, with rows on canonical output coordinates.
pub fn delta_pair_matrix(r: &Representation, level: usize) -> Matrix {
    let (n, m, f) = (r.n(), r.vdim(), r.field());
    let src = Symbolic::pair(f, level, n, m);
    let cols = src.input_dim();
    let (oe, oo) = pair_spaces(level + 1, n, m);
    let mut rows = sym_rows(cols, f, oe.canonical_tuples(), |t| {
        delta_pair_at(r, level, &src, Part::Even, t)
    });
    rows.extend(sym_rows(cols, f, oo.canonical_tuples(), |t| {
        delta_pair_at(r, level, &src, Part::Odd, t)
    }));
    Matrix::from_rows_with_cols(f, &rows, cols).expect("rows of equal length")
}

/// Matrix of `δ*` on `C^(2,3)` coordinates, rows on all output tuples.
pub fn delta_star_matrix(r: &Representation) -> Matrix {
    let (n, m, f) = (r.n(), r.vdim(), r.field());
    let src = Symbolic::pair(f, 1, n, m);
    let cols = src.input_dim();
    let mut rows = sym_rows(cols, f, all_tuples(n, 3), |t| delta_star_at(r, &src, Part::Even, t));
    rows.extend(sym_rows(cols, f, all_tuples(n, 4), |t| delta_star_at(r, &src, Part::Odd, t)));
    Matrix::from_rows_with_cols(f, &rows, cols).expect("rows of equal length")
}

pub fn lambda_coords(lam: &Matrix) -> Vector {
    Cochain::from_lambda(lam).data
}

pub fn lambda_from_coords(field: FieldSpec, n: usize, m: usize, coords: &[Scalar]) -> Result<Matrix> {
    Ok(Cochain::from_data(field, 1, n, m, coords.to_vec())?.to_lambda())
}

/// `H¹(L,V) = ker δ` on `C¹`, as a subspace of `K^{nm}`.
pub fn h1_basis(r: &Representation) -> SubspaceBasis {
    delta_zero_matrix(r).kernel_basis()
}

pub fn h1_lambdas(r: &Representation) -> Vec<Matrix> {
    h1_basis(r)
        .vectors()
        .iter()
        .map(|v| lambda_from_coords(r.field(), r.n(), r.vdim(), v).expect("coordinate length nm"))
        .collect()
}

/// Cocycles, coboundaries and a complement of coboundaries in cocycles, in
/// canonical `C^(2p,2p+1)` coordinates.
#[derive(Clone, Debug)]
pub struct CohomologyGroup {
    pub level: usize,
    pub n: usize,
    pub m: usize,
    pub z_dim: usize,
    pub b_dim: usize,
    pub h_dim: usize,
    pub z_basis: SubspaceBasis,
    pub b_basis: SubspaceBasis,
    /// Cocycles whose classes form a basis of the quotient.
    pub h_representatives: Vec<Vector>,
}

impl CohomologyGroup {
    fn assemble(level: usize, n: usize, m: usize, z: SubspaceBasis, b: SubspaceBasis) -> Result<CohomologyGroup> {
        if !b.is_subspace_of(&z) {
            return Err(Error::Internal("coboundaries are not cocycles".into()));
        }
        let mut span = b.clone();
        let mut reps = Vec::new();
        for v in z.vectors() {
            if !span.contains(v) {
                reps.push(v.clone());
                span = span.sum(&SubspaceBasis::span(z.field(), z.ambient_dim(), &[v.clone()])?);
            }
        }
        Ok(CohomologyGroup {
            level,
            n,
            m,
            z_dim: z.dim(),
            b_dim: b.dim(),
            h_dim: z.dim() - b.dim(),
            z_basis: z,
            b_basis: b,
            h_representatives: reps,
        })
    }

    /// The cocycle `Σ a_i h_i` for class coordinates `a`.
    pub fn lift(&self, class: &[Scalar]) -> Result<CochainPair> {
        if class.len() != self.h_dim {
            return Err(shape("class coordinates do not match the cohomology dimension"));
        }
        let f = self.z_basis.field();
        let mut v = zero_vec(f, self.z_basis.ambient_dim());
        for (a, h) in class.iter().zip(&self.h_representatives) {
            crate::linalg::axpy(&mut v, a, h);
        }
        CochainPair::from_coords(f, self.level, self.n, self.m, &v)
    }

    /// Coordinates of the class of a cocycle, or `None` when `c` is not a cocycle.
    pub fn class_of(&self, c: &CochainPair) -> Result<Option<Vector>> {
        let v = c.coords();
        if !self.z_basis.contains(&v) {
            return Ok(None);
        }
        let f = self.z_basis.field();
        let mut cols = self.h_representatives.clone();
        cols.extend(self.b_basis.vectors().iter().cloned());
        let a = Matrix::from_columns(f, v.len(), &cols)?;
        let sol = solve_affine(&a, &v)?.ok_or_else(|| Error::Internal("cocycle outside Z".into()))?;
        Ok(Some(sol.particular[..self.h_dim].to_vec()))
    }

    pub fn is_coboundary(&self, c: &CochainPair) -> bool {
        self.b_basis.contains(&c.coords())
    }
}

/// `H^(2,3)(L,V) = ker(δ, δ*) / im δ|_{C¹}`.
pub fn h23(r: &Representation) -> Result<CohomologyGroup> {
    let (n, m, f) = (r.n(), r.vdim(), r.field());
    let z = delta_pair_matrix(r, 1).vstack(&delta_star_matrix(r)).kernel_basis();
    let b = coboundary_image(r)?;
    debug_assert_eq!(z.field(), f);
    CohomologyGroup::assemble(1, n, m, z, b)
}

/// Image of `δ` on `C¹` in canonical `C^(2,3)` coordinates.
pub fn coboundary_image(r: &Representation) -> Result<SubspaceBasis> {
    let (n, m, f) = (r.n(), r.vdim(), r.field());
    let (se, so) = pair_spaces(1, n, m);
    let mut gens = Vec::with_capacity(n * m);
    for i in 0..n {
        for t in 0..m {
            let mut lam = Matrix::zeros(f, m, n);
            lam.set(t, i, Scalar::one(f));
            let d = delta_zero(r, &lam)?;
            if !d.satisfies_slot_conditions() {
                return Err(Error::Precondition(
                    "coboundaries leave the cochain space; the representation violates its axioms".into(),
                ));
            }
            gens.push(d.coords());
        }
    }
    SubspaceBasis::span(f, se.dim() + so.dim(), &gens)
}

/// `H^(4,5)` for `dim L ≤ guard`.
pub fn h45(r: &Representation, guard: usize) -> Result<CohomologyGroup> {
    let (n, m, f) = (r.n(), r.vdim(), r.field());
    if n > guard {
        return Err(Error::Budget(format!("H^(4,5) limited to dim L <= {guard}, got {n}")));
    }
    let z = delta_pair_matrix(r, 2).kernel_basis();
    let d1 = delta_pair_matrix(r, 1);
    let (oe, oo) = pair_spaces(2, n, m);
    let b = SubspaceBasis::span(f, oe.dim() + oo.dim(), &d1.transpose().to_rows())?;
    CohomologyGroup::assemble(2, n, m, z, b)
}

/// Precomputed linear system for repeated coboundary solves against one representation.
#[derive(Clone, Debug)]
pub struct CoboundarySolver {
    n: usize,
    m: usize,
    field: FieldSpec,
    solver: LinearSolver,
}

impl CoboundarySolver {
    pub fn new(r: &Representation) -> CoboundarySolver {
        CoboundarySolver {
            n: r.n(),
            m: r.vdim(),
            field: r.field(),
            solver: LinearSolver::new(&delta_zero_matrix(r)),
        }
    }

    /// Some `λ` with `δλ = c`, or `None` when `c` is not a coboundary.
    pub fn solve(&self, c: &CochainPair) -> Result<Option<Matrix>> {
        if c.level() != 1 || c.n() != self.n || c.m() != self.m || c.field() != self.field {
            return Err(shape("cochain pair does not match the representation"));
        }
        Ok(self
            .solver
            .solve(&c.flatten())
            .map(|x| lambda_from_coords(self.field, self.n, self.m, &x).expect("length nm")))
    }

    pub fn h1_dim(&self) -> usize {
        self.solver.kernel().dim()
    }
}

pub fn solve_coboundary(r: &Representation, c: &CochainPair) -> Result<Option<Matrix>> {
    CoboundarySolver::new(r).solve(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::LyAlgebra;

    fn q() -> FieldSpec {
        FieldSpec::Rational
    }

    #[test]
    fn space_dimensions_and_locate() {
        let s = CochainSpace::new(3, 2, 3);
        assert_eq!(s.dim(), 3 * 3 * 2);
        let tuples = s.canonical_tuples();
        assert_eq!(tuples.len(), 9);
        for (i, t) in tuples.iter().enumerate() {
            assert_eq!(s.locate(t), Some((i, false)));
        }
        assert_eq!(s.locate(&[1, 0, 2]), Some((s.locate(&[0, 1, 2]).unwrap().0, true)));
        assert_eq!(s.locate(&[1, 1, 0]), None);
    }

    #[test]
    fn coords_round_trip() {
        let f = q();
        let coords: Vector = (0..pair_spaces(1, 3, 2).0.dim() + pair_spaces(1, 3, 2).1.dim())
            .map(|i| f.int(i as i64 - 7))
            .collect();
        let c = CochainPair::from_coords(f, 1, 3, 2, &coords).unwrap();
        assert!(c.satisfies_slot_conditions());
        assert_eq!(c.coords(), coords);
    }

    #[test]
    fn delta_zero_adjoint_identity() {
        let f = q();
        let h = LyAlgebra::heisenberg(f, 1).unwrap();
        let ad = Representation::adjoint(&h);
        let d = delta_zero(&ad, &Matrix::identity(f, 3)).unwrap();
        assert_eq!(d.even().at(&[0, 1]), &[f.zero(), f.zero(), f.one()]);
        assert!(delta_pair(&ad, &d).unwrap().is_zero());
        assert!(delta_star(&ad, &d).unwrap().is_zero());
    }

    #[test]
    fn trivial_abelian_counts() {
        let f = q();
        let a = LyAlgebra::abelian(f, 2);
        let t = Representation::trivial(&a, 1);
        assert_eq!(h1_basis(&t).dim(), 2);
        let h = h23(&t).unwrap();
        assert_eq!((h.z_dim, h.b_dim, h.h_dim), (3, 0, 3));
        let ad = Representation::adjoint(&LyAlgebra::abelian(f, 3));
        assert_eq!(h1_basis(&ad).dim(), 9);
        let h4 = h45(&t, H45_DIM_GUARD).unwrap();
        assert_eq!(h4.b_dim, 0);
    }

    #[test]
    fn star_skew_cancellation() {
        let f = q();
        let a = LyAlgebra::abelian(f, 2);
        let t = Representation::trivial(&a, 1);
        let mut g = Cochain::zero(f, 3, 2, 1);
        g.set(&[0, 1, 0], &[f.one()]);
        g.set(&[1, 0, 0], &[f.int(-1)]);
        let c = CochainPair::new(Cochain::zero(f, 2, 2, 1), g).unwrap();
        let s = delta_star(&t, &c).unwrap();
        assert!(s.first.at(&[0, 1, 0])[0].is_zero());
    }

    #[test]
    fn heisenberg_adjoint_groups() {
        let f = q();
        let h = LyAlgebra::heisenberg(f, 1).unwrap();
        let ad = Representation::adjoint(&h);
        let g = h23(&ad).unwrap();
        assert!(g.b_basis.is_subspace_of(&g.z_basis));
        assert_eq!(g.b_dim, 9 - h1_basis(&ad).dim());
        let g45 = h45(&ad, H45_DIM_GUARD).unwrap();
        assert!(g45.b_basis.is_subspace_of(&g45.z_basis));
        assert_eq!(g45.h_dim, g45.z_dim - g45.b_dim);
    }

    #[test]
    fn solve_round_trip() {
        let f = q();
        let h = LyAlgebra::heisenberg(f, 1).unwrap();
        let ad = Representation::adjoint(&h);
        let lam = Matrix::from_ints(f, &[vec![1, 2, 0], vec![0, -1, 3], vec![4, 0, 1]]);
        let c = delta_zero(&ad, &lam).unwrap();
        let sol = solve_coboundary(&ad, &c).unwrap().unwrap();
        assert_eq!(delta_zero(&ad, &sol).unwrap(), c);
        assert_eq!(solve_coboundary(&ad, &CochainPair::zero(f, 1, 3, 3)).unwrap().map(|m| m.is_zero()), Some(true));
    }

    #[test]
    fn compose_inputs_matches_direct_evaluation() {
        let f = q();
        let coords: Vector = (0..12).map(|i| f.int((i * 5 % 7) as i64 - 3)).collect();
        let c = CochainPair::from_coords(f, 1, 3, 1, &coords).unwrap();
        let psi = Matrix::from_ints(f, &[vec![1, 2, 0], vec![0, 1, 1], vec![3, 0, 1]]);
        let pulled = c.compose_inputs(&psi);
        let cols = psi.columns();
        // g(ψe_0, ψe_1, ψe_2) by expanding trilinearly
        let mut expect = f.zero();
        for a in 0..3 {
            for b in 0..3 {
                for k in 0..3 {
                    let w = &(&cols[0][a] * &cols[1][b]) * &cols[2][k];
                    expect = &expect + &(&w * &c.odd().at(&[a, b, k])[0]);
                }
            }
        }
        assert_eq!(pulled.odd().at(&[0, 1, 2])[0], expect);
    }
}
