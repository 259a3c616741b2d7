//! Lie-Yamaguti algebras given by structure constants.

use std::collections::HashMap;
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{precondition, shape, Error, Result};
use crate::linalg::{axpy, is_zero_vec, unit_vec, vec_add, vec_sub, zero_vec, Matrix, SubspaceBasis, Vector};
use crate::scalar::{FieldSpec, Scalar};

/// A finite-dimensional algebra with a bilinear bracket `[·,·]` and a trilinear
/// bracket `{·,·,·}`, stored densely.
///
/// `binary[(i*n + j)*n + k]` is the `e_k` coordinate of `[e_i, e_j]`, and
/// `ternary[((i*n + j)*n + k)*n + l]` the `e_l` coordinate of `{e_i, e_j, e_k}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LyAlgebra {
    field: FieldSpec,
    dim: usize,
    names: Vec<String>,
    binary: Vec<Scalar>,
    ternary: Vec<Scalar>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Axiom {
    LY1,
    LY2,
    LY3,
    LY4,
    LY5,
    LY6,
}

impl Axiom {
    pub const ALL: [Axiom; 6] = [Axiom::LY1, Axiom::LY2, Axiom::LY3, Axiom::LY4, Axiom::LY5, Axiom::LY6];

    /// Number of basis indices in a witness tuple.
    pub fn arity(self) -> usize {
        match self {
            Axiom::LY1 => 2,
            Axiom::LY2 | Axiom::LY3 => 3,
            Axiom::LY4 | Axiom::LY5 => 4,
            Axiom::LY6 => 5,
        }
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomFailure {
    pub indices: Vec<usize>,
    pub residual: Vector,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomStatus {
    pub axiom: Axiom,
    pub failure: Option<AxiomFailure>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub statuses: Vec<AxiomStatus>,
}

impl AxiomReport {
    pub fn passes(&self) -> bool {
        self.statuses.iter().all(|s| s.failure.is_none())
    }

    pub fn failure(&self, axiom: Axiom) -> Option<&AxiomFailure> {
        self.statuses
            .iter()
            .find(|s| s.axiom == axiom)
            .and_then(|s| s.failure.as_ref())
    }

    pub fn failed_axioms(&self) -> Vec<Axiom> {
        self.statuses
            .iter()
            .filter(|s| s.failure.is_some())
            .map(|s| s.axiom)
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct IdealTests {
    pub is_ideal: bool,
    pub is_abelian_ideal: bool,
}

fn nonzero(v: &[Scalar]) -> impl Iterator<Item = (usize, &Scalar)> {
    v.iter().enumerate().filter(|(_, x)| !x.is_zero())
}

impl LyAlgebra {
    /// The algebra with all brackets zero.
    pub fn abelian(field: FieldSpec, dim: usize) -> LyAlgebra {
        LyAlgebra::from_tensors(
            field,
            default_names(dim),
            vec![Scalar::zero(field); dim.pow(3)],
            vec![Scalar::zero(field); dim.pow(4)],
        )
        .expect("consistent sizes")
    }

    /// Wraps raw tensors without imposing skew symmetry; [`LyAlgebra::check_axioms`]
    /// reports any violation.
    pub fn from_tensors(
        field: FieldSpec,
        names: Vec<String>,
        binary: Vec<Scalar>,
        ternary: Vec<Scalar>,
    ) -> Result<LyAlgebra> {
        let dim = names.len();
        if binary.len() != dim.pow(3) || ternary.len() != dim.pow(4) {
            return Err(shape(format!(
                "structure tensors of sizes {}/{} do not match dimension {dim}",
                binary.len(),
                ternary.len()
            )));
        }
        if binary.iter().chain(&ternary).any(|x| x.field() != field) {
            return Err(shape(format!("structure constants not all in {field}")));
        }
        Ok(LyAlgebra {
            field,
            dim,
            names,
            binary,
            ternary,
        })
    }

    pub fn builder(field: FieldSpec, names: Vec<String>) -> AlgebraBuilder {
        AlgebraBuilder::new(field, names)
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basis_names(&self) -> &[String] {
        &self.names
    }

    pub fn with_names(mut self, names: Vec<String>) -> Result<LyAlgebra> {
        if names.len() != self.dim {
            return Err(shape("basis name count differs from dimension"));
        }
        self.names = names;
        Ok(self)
    }

    /// Coordinates of `[e_i, e_j]`.
    pub fn bracket_basis(&self, i: usize, j: usize) -> &[Scalar] {
        let n = self.dim;
        let s = (i * n + j) * n;
        &self.binary[s..s + n]
    }

    /// Coordinates of `{e_i, e_j, e_k}`.
    pub fn triple_basis(&self, i: usize, j: usize, k: usize) -> &[Scalar] {
        let n = self.dim;
        let s = ((i * n + j) * n + k) * n;
        &self.ternary[s..s + n]
    }

    pub fn binary_tensor(&self) -> &[Scalar] {
        &self.binary
    }

    pub fn ternary_tensor(&self) -> &[Scalar] {
        &self.ternary
    }

    pub fn bracket(&self, x: &[Scalar], y: &[Scalar]) -> Vector {
        let mut out = zero_vec(self.field, self.dim);
        for (i, a) in nonzero(x) {
            for (j, b) in nonzero(y) {
                axpy(&mut out, &(a * b), self.bracket_basis(i, j));
            }
        }
        out
    }

    pub fn triple(&self, x: &[Scalar], y: &[Scalar], z: &[Scalar]) -> Vector {
        let mut out = zero_vec(self.field, self.dim);
        let zs: Vec<(usize, &Scalar)> = nonzero(z).collect();
        for (i, a) in nonzero(x) {
            for (j, b) in nonzero(y) {
                let ab = a * b;
                for &(k, c) in &zs {
                    axpy(&mut out, &(&ab * c), self.triple_basis(i, j, k));
                }
            }
        }
        out
    }

    /// `[x, y]` when `z` is absent, `{x, y, z}` otherwise, with shape and field checks.
    pub fn bracket_eval(&self, x: &[Scalar], y: &[Scalar], z: Option<&[Scalar]>) -> Result<Vector> {
        let all: Vec<&[Scalar]> = [Some(x), Some(y), z].into_iter().flatten().collect();
        for v in &all {
            if v.len() != self.dim {
                return Err(shape(format!("vector of length {} for dimension {}", v.len(), self.dim)));
            }
            if v.iter().any(|s| s.field() != self.field) {
                return Err(shape(format!("vector entries not in {}", self.field)));
            }
        }
        Ok(match z {
            None => self.bracket(x, y),
            Some(z) => self.triple(x, y, z),
        })
    }

    fn unit(&self, i: usize) -> Vector {
        unit_vec(self.field, self.dim, i)
    }

    /// Residual of one axiom at a tuple of basis indices; zero iff the axiom holds there.
    pub fn axiom_residual(&self, axiom: Axiom, idx: &[usize]) -> Vector {
        assert_eq!(idx.len(), axiom.arity(), "wrong witness arity");
        let e = |i: usize| self.unit(i);
        match axiom {
            Axiom::LY1 => {
                let (i, j) = (idx[0], idx[1]);
                if i == j {
                    self.bracket_basis(i, i).to_vec()
                } else {
                    vec_add(self.bracket_basis(i, j), self.bracket_basis(j, i))
                }
            }
            Axiom::LY2 => {
                let (i, j, k) = (idx[0], idx[1], idx[2]);
                if i == j {
                    self.triple_basis(i, i, k).to_vec()
                } else {
                    vec_add(self.triple_basis(i, j, k), self.triple_basis(j, i, k))
                }
            }
            Axiom::LY3 => {
                let (a, b, c) = (idx[0], idx[1], idx[2]);
                let mut out = zero_vec(self.field, self.dim);
                for (x, y, z) in [(a, b, c), (b, c, a), (c, a, b)] {
                    out = vec_add(&out, &self.bracket(self.bracket_basis(x, y), &e(z)));
                    out = vec_add(&out, self.triple_basis(x, y, z));
                }
                out
            }
            Axiom::LY4 => {
                let (a, b, c, x) = (idx[0], idx[1], idx[2], idx[3]);
                let mut out = zero_vec(self.field, self.dim);
                for (p, q, r) in [(a, b, c), (b, c, a), (c, a, b)] {
                    out = vec_add(&out, &self.triple(self.bracket_basis(p, q), &e(r), &e(x)));
                }
                out
            }
            Axiom::LY5 => {
                let (a, b, x, y) = (idx[0], idx[1], idx[2], idx[3]);
                let lhs = self.triple(&e(a), &e(b), self.bracket_basis(x, y));
                let r1 = self.bracket(self.triple_basis(a, b, x), &e(y));
                let r2 = self.bracket(&e(x), self.triple_basis(a, b, y));
                vec_sub(&vec_sub(&lhs, &r1), &r2)
            }
            Axiom::LY6 => {
                let (a, b, x, y, z) = (idx[0], idx[1], idx[2], idx[3], idx[4]);
                let lhs = self.triple(&e(a), &e(b), self.triple_basis(x, y, z));
                let r1 = self.triple(self.triple_basis(a, b, x), &e(y), &e(z));
                let r2 = self.triple(&e(x), self.triple_basis(a, b, y), &e(z));
                let r3 = self.triple(&e(x), &e(y), self.triple_basis(a, b, z));
                vec_sub(&vec_sub(&vec_sub(&lhs, &r1), &r2), &r3)
            }
        }
    }

    fn first_failure(&self, axiom: Axiom) -> Option<AxiomFailure> {
        let n = self.dim;
        let rest = axiom.arity() - 1;
        (0..n).into_par_iter().find_map_first(|first| {
            let mut idx = vec![0usize; rest + 1];
            idx[0] = first;
            let total = n.pow(rest as u32);
            for code in 0..total {
                let mut c = code;
                for slot in (1..=rest).rev() {
                    idx[slot] = c % n;
                    c /= n;
                }
                let r = self.axiom_residual(axiom, &idx);
                if !is_zero_vec(&r) {
                    return Some(AxiomFailure {
                        indices: idx.clone(),
                        residual: r,
                    });
                }
            }
            None
        })
    }

    /// Evaluates LY1–LY6 on all basis tuples; the first failing tuple in
    /// lexicographic order is reported for each axiom.
    pub fn check_axioms(&self) -> AxiomReport {
        AxiomReport {
            statuses: Axiom::ALL
                .iter()
                .map(|&axiom| AxiomStatus {
                    axiom,
                    failure: self.first_failure(axiom),
                })
                .collect(),
        }
    }

    pub fn is_abelian(&self) -> bool {
        is_zero_vec(&self.binary) && is_zero_vec(&self.ternary)
    }

    pub fn center(&self) -> SubspaceBasis {
        let n = self.dim;
        let mut rows: Vec<Vector> = Vec::new();
        for j in 0..n {
            for l in 0..n {
                rows.push((0..n).map(|i| self.bracket_basis(i, j)[l].clone()).collect());
            }
        }
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    rows.push((0..n).map(|i| self.triple_basis(i, j, k)[l].clone()).collect());
                    rows.push((0..n).map(|i| self.triple_basis(j, k, i)[l].clone()).collect());
                }
            }
        }
        let m = Matrix::from_rows_with_cols(self.field, &rows, n).expect("rows of length n");
        m.kernel_basis()
    }

    /// Products of `w` with basis elements that must stay in an ideal containing `w`.
    fn ideal_products(&self, w: &[Scalar]) -> Vec<Vector> {
        let n = self.dim;
        let mut out = Vec::new();
        for j in 0..n {
            let ej = self.unit(j);
            out.push(self.bracket(w, &ej));
            for k in 0..n {
                let ek = self.unit(k);
                out.push(self.triple(w, &ej, &ek));
                out.push(self.triple(&ej, &ek, w));
            }
        }
        out
    }

    pub fn ideal_tests(&self, w: &SubspaceBasis) -> Result<IdealTests> {
        if w.ambient_dim() != self.dim {
            return Err(shape("subspace ambient dimension differs from algebra dimension"));
        }
        let is_ideal = w
            .vectors()
            .iter()
            .all(|v| self.ideal_products(v).iter().all(|p| w.contains(p)));
        let mut abelian = is_ideal;
        if abelian {
            'outer: for u in w.vectors() {
                for v in w.vectors() {
                    if !is_zero_vec(&self.bracket(u, v)) {
                        abelian = false;
                        break 'outer;
                    }
                    for k in 0..self.dim {
                        let ek = self.unit(k);
                        if !is_zero_vec(&self.triple(u, v, &ek))
                            || !is_zero_vec(&self.triple(u, &ek, v))
                            || !is_zero_vec(&self.triple(&ek, u, v))
                        {
                            abelian = false;
                            break 'outer;
                        }
                    }
                }
            }
        }
        Ok(IdealTests {
            is_ideal,
            is_abelian_ideal: abelian,
        })
    }

    /// Quotient by an ideal, on the complement (non-pivot) coordinates of `w`.
    /// Returns the quotient and the projection matrix `dim(L/W) × dim(L)`.
    pub fn quotient(&self, w: &SubspaceBasis) -> Result<(LyAlgebra, Matrix)> {
        if !self.ideal_tests(w)?.is_ideal {
            return Err(precondition("subspace is not an ideal"));
        }
        let keep = w.complement_coords();
        let q = keep.len();
        let mut proj = Matrix::zeros(self.field, q, self.dim);
        for (r, &c) in keep.iter().enumerate() {
            proj.set(r, c, Scalar::one(self.field));
        }
        for (v, &pc) in w.vectors().iter().zip(w.pivots()) {
            for (r, &c) in keep.iter().enumerate() {
                proj.set(r, pc, -&v[c]);
            }
        }
        let mut binary = Vec::with_capacity(q.pow(3));
        for &i in &keep {
            for &j in &keep {
                binary.extend(proj.apply(self.bracket_basis(i, j)));
            }
        }
        let mut ternary = Vec::with_capacity(q.pow(4));
        for &i in &keep {
            for &j in &keep {
                for &k in &keep {
                    ternary.extend(proj.apply(self.triple_basis(i, j, k)));
                }
            }
        }
        let names = keep.iter().map(|&c| self.names[c].clone()).collect();
        Ok((LyAlgebra::from_tensors(self.field, names, binary, ternary)?, proj))
    }

    /// `L^(0) = L`, `L^(k+1) = [L^(k), L] + {L^(k), L, L} + {L, L, L^(k)}`.
    ///
    /// The series stops at the first zero term (the nilpotency index is its
    /// position) or when it stabilizes at a nonzero term (index absent).
    pub fn lower_central_series(&self) -> (Vec<SubspaceBasis>, Option<usize>) {
        let mut terms = vec![SubspaceBasis::full(self.field, self.dim)];
        loop {
            let last = terms.last().expect("nonempty");
            if last.is_zero() {
                let k = terms.len() - 1;
                return (terms, Some(k.max(1)));
            }
            let gens: Vec<Vector> = last
                .vectors()
                .iter()
                .flat_map(|w| self.ideal_products(w))
                .collect();
            let next = SubspaceBasis::span(self.field, self.dim, &gens).expect("ambient matches");
            if next.dim() == last.dim() {
                return (terms, None);
            }
            terms.push(next);
        }
    }

    pub fn nilpotency_index(&self) -> Option<usize> {
        self.lower_central_series().1
    }

    /// `m` maps `K^dim(self) → K^dim(target)`; checks bracket preservation on basis tuples.
    pub fn is_morphism(&self, target: &LyAlgebra, m: &Matrix) -> Result<bool> {
        if m.rows() != target.dim || m.cols() != self.dim || m.field() != self.field {
            return Err(shape(format!(
                "map of shape {}x{} between algebras of dimensions {} and {}",
                m.rows(),
                m.cols(),
                self.dim,
                target.dim
            )));
        }
        let cols = m.columns();
        let n = self.dim;
        for i in 0..n {
            for j in 0..n {
                if m.apply(self.bracket_basis(i, j)) != target.bracket(&cols[i], &cols[j]) {
                    return Ok(false);
                }
            }
        }
        let ok = (0..n).into_par_iter().all(|i| {
            for j in 0..n {
                for k in 0..n {
                    if m.apply(self.triple_basis(i, j, k)) != target.triple(&cols[i], &cols[j], &cols[k]) {
                        return false;
                    }
                }
            }
            true
        });
        Ok(ok)
    }

    pub fn is_automorphism(&self, m: &Matrix) -> Result<bool> {
        Ok(self.is_morphism(self, m)? && m.is_invertible())
    }

    /// Structure constants in the basis given by the columns of `t`:
    /// the result is isomorphic to `self` via `t`.
    pub fn change_basis(&self, t: &Matrix) -> Result<LyAlgebra> {
        let n = self.dim;
        if t.rows() != n || t.cols() != n || t.field() != self.field {
            return Err(shape(format!("basis change must be {n}x{n} over {}", self.field)));
        }
        let tinv = t.invert().ok_or_else(|| Error::Invalid("basis change is singular".into()))?;
        let cols = t.columns();
        let mut binary = Vec::with_capacity(n.pow(3));
        let mut ternary = Vec::with_capacity(n.pow(4));
        for i in 0..n {
            for j in 0..n {
                binary.extend(tinv.apply(&self.bracket(&cols[i], &cols[j])));
                for k in 0..n {
                    ternary.extend(tinv.apply(&self.triple(&cols[i], &cols[j], &cols[k])));
                }
            }
        }
        LyAlgebra::from_tensors(self.field, self.names.clone(), binary, ternary)
    }

    /// Reinterprets the structure constants in another field.
    pub fn convert(&self, field: FieldSpec) -> Result<LyAlgebra> {
        let conv = |v: &[Scalar]| v.iter().map(|x| x.convert(field)).collect::<Result<Vec<_>>>();
        LyAlgebra::from_tensors(field, self.names.clone(), conv(&self.binary)?, conv(&self.ternary)?)
    }

    /// The Heisenberg algebra `h_n`: basis `e_1..e_2n, e` with
    /// `[e_i, e_{n+i}] = e = {e_i, e_{n+i}, e_i}`.
    pub fn heisenberg(field: FieldSpec, n: usize) -> Result<LyAlgebra> {
        if n == 0 {
            return Err(Error::Invalid("heisenberg algebra needs n >= 1".into()));
        }
        let dim = 2 * n + 1;
        let mut names: Vec<String> = (1..=2 * n).map(|i| format!("e{i}")).collect();
        names.push("e".into());
        let mut b = AlgebraBuilder::new(field, names);
        let e = unit_vec(field, dim, 2 * n);
        for i in 0..n {
            b.set_binary(i, n + i, e.clone())?;
            b.set_ternary(i, n + i, i, e.clone())?;
        }
        Ok(b.build())
    }

    /// The algebra `G_n` of dimension `2n+2`: basis `e_1..e_{2n+1}, e`.
    pub fn generalized_heisenberg(field: FieldSpec, n: usize) -> Result<LyAlgebra> {
        if n == 0 {
            return Err(Error::Invalid("generalized heisenberg algebra needs n >= 1".into()));
        }
        let dim = 2 * n + 2;
        let mut names: Vec<String> = (1..=2 * n + 1).map(|i| format!("e{i}")).collect();
        names.push("e".into());
        let mut b = AlgebraBuilder::new(field, names);
        let e = unit_vec(field, dim, 2 * n + 1);
        for i in 0..n {
            b.set_binary(i, n + 1 + i, e.clone())?;
            b.set_ternary(i, n + 1 + i, i, e.clone())?;
        }
        b.set_ternary(n, 2 * n, n, e)?;
        Ok(b.build())
    }

    pub fn from_classical(kind: ClassicalKind, data: &ClassicalData) -> Result<LyAlgebra> {
        from_classical(kind, data)
    }
}

pub(crate) fn default_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("e{i}")).collect()
}

/// Collects structure constants entry by entry, completing skew images and
/// rejecting contradictory entries.
#[derive(Clone, Debug)]
pub struct AlgebraBuilder {
    field: FieldSpec,
    names: Vec<String>,
    binary: HashMap<(usize, usize), (Vector, String)>,
    ternary: HashMap<(usize, usize, usize), (Vector, String)>,
}

impl AlgebraBuilder {
    pub fn new(field: FieldSpec, names: Vec<String>) -> AlgebraBuilder {
        AlgebraBuilder {
            field,
            names,
            binary: HashMap::new(),
            ternary: HashMap::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    fn check_value(&self, value: &[Scalar], what: &str) -> Result<()> {
        if value.len() != self.dim() {
            return Err(shape(format!("{what}: value of length {} for dimension {}", value.len(), self.dim())));
        }
        if value.iter().any(|x| x.field() != self.field) {
            return Err(shape(format!("{what}: value not in {}", self.field)));
        }
        Ok(())
    }

    pub fn set_binary(&mut self, i: usize, j: usize, value: Vector) -> Result<()> {
        let label = format!("binary entry ({i},{j})");
        self.set_binary_labeled(i, j, value, label)
    }

    /// Records `[e_i, e_j] = value`; `label` names the entry in conflict messages.
    pub fn set_binary_labeled(&mut self, i: usize, j: usize, value: Vector, label: String) -> Result<()> {
        let n = self.dim();
        if i >= n || j >= n {
            return Err(Error::Invalid(format!("{label}: index out of range for dimension {n}")));
        }
        self.check_value(&value, &label)?;
        if i == j {
            if is_zero_vec(&value) {
                return Ok(());
            }
            return Err(Error::SkewConflict(format!("{label}: [x,x] must vanish")));
        }
        let (key, v) = if i < j {
            ((i, j), value)
        } else {
            ((j, i), value.iter().map(|x| -x).collect())
        };
        match self.binary.get(&key) {
            Some((old, old_label)) if *old != v => Err(Error::SkewConflict(format!(
                "{label} contradicts {old_label}"
            ))),
            Some(_) => Ok(()),
            None => {
                self.binary.insert(key, (v, label));
                Ok(())
            }
        }
    }

    pub fn set_ternary(&mut self, i: usize, j: usize, k: usize, value: Vector) -> Result<()> {
        let label = format!("ternary entry ({i},{j},{k})");
        self.set_ternary_labeled(i, j, k, value, label)
    }

    pub fn set_ternary_labeled(&mut self, i: usize, j: usize, k: usize, value: Vector, label: String) -> Result<()> {
        let n = self.dim();
        if i >= n || j >= n || k >= n {
            return Err(Error::Invalid(format!("{label}: index out of range for dimension {n}")));
        }
        self.check_value(&value, &label)?;
        if i == j {
            if is_zero_vec(&value) {
                return Ok(());
            }
            return Err(Error::SkewConflict(format!("{label}: {{x,x,z}} must vanish")));
        }
        let (key, v) = if i < j {
            ((i, j, k), value)
        } else {
            ((j, i, k), value.iter().map(|x| -x).collect())
        };
        match self.ternary.get(&key) {
            Some((old, old_label)) if *old != v => Err(Error::SkewConflict(format!(
                "{label} contradicts {old_label}"
            ))),
            Some(_) => Ok(()),
            None => {
                self.ternary.insert(key, (v, label));
                Ok(())
            }
        }
    }

    pub fn build(self) -> LyAlgebra {
        let n = self.dim();
        let field = self.field;
        let mut binary = vec![Scalar::zero(field); n.pow(3)];
        let mut ternary = vec![Scalar::zero(field); n.pow(4)];
        for ((i, j), (v, _)) in self.binary {
            for (l, x) in v.iter().enumerate() {
                binary[(i * n + j) * n + l] = x.clone();
                binary[(j * n + i) * n + l] = -x;
            }
        }
        for ((i, j, k), (v, _)) in self.ternary {
            for (l, x) in v.iter().enumerate() {
                ternary[((i * n + j) * n + k) * n + l] = x.clone();
                ternary[((j * n + i) * n + k) * n + l] = -x;
            }
        }
        LyAlgebra {
            field,
            dim: n,
            names: self.names,
            binary,
            ternary,
        }
    }
}

/// Input classes for the classical constructions of LY algebras.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ClassicalKind {
    /// `{a,b,c} = [[a,b],c]`.
    Lie,
    /// `[a,b] = a·b − b·a`, `{a,b,c} = −(a·b)·c`.
    Leibniz,
    /// `{x,y,z} = ⟨x,⟨y,z⟩⟩ − ⟨y,⟨x,z⟩⟩ + ⟨⟨x,y⟩,z⟩`.
    Malcev,
    /// Lie algebra `G ⊕ H` with the first `g_dim` coordinates spanning `G`;
    /// the result lives on `H`.
    Reductive { g_dim: usize },
}

/// A bilinear product table: `product[(i*n + j)*n + k]` is the `e_k` coordinate of `e_i · e_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassicalData {
    pub field: FieldSpec,
    pub names: Vec<String>,
    pub product: Vec<Scalar>,
}

impl ClassicalData {
    pub fn new(field: FieldSpec, names: Vec<String>, product: Vec<Scalar>) -> Result<ClassicalData> {
        let n = names.len();
        if product.len() != n.pow(3) {
            return Err(shape(format!("product table of size {} for dimension {n}", product.len())));
        }
        Ok(ClassicalData { field, names, product })
    }

    fn dim(&self) -> usize {
        self.names.len()
    }

    fn basis(&self, i: usize, j: usize) -> &[Scalar] {
        let n = self.dim();
        &self.product[(i * n + j) * n..(i * n + j + 1) * n]
    }

    fn mul(&self, x: &[Scalar], y: &[Scalar]) -> Vector {
        let mut out = zero_vec(self.field, self.dim());
        for (i, a) in nonzero(x) {
            for (j, b) in nonzero(y) {
                axpy(&mut out, &(a * b), self.basis(i, j));
            }
        }
        out
    }

    fn is_skew(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| {
            is_zero_vec(self.basis(i, i))
                && (0..n).all(|j| is_zero_vec(&vec_add(self.basis(i, j), self.basis(j, i))))
        })
    }

    fn satisfies_jacobi(&self) -> bool {
        let n = self.dim();
        let e = |i| unit_vec(self.field, n, i);
        (0..n).all(|a| {
            (0..n).all(|b| {
                (0..n).all(|c| {
                    let t1 = self.mul(self.basis(a, b), &e(c));
                    let t2 = self.mul(self.basis(b, c), &e(a));
                    let t3 = self.mul(self.basis(c, a), &e(b));
                    is_zero_vec(&vec_add(&vec_add(&t1, &t2), &t3))
                })
            })
        })
    }
}

fn from_classical(kind: ClassicalKind, data: &ClassicalData) -> Result<LyAlgebra> {
    let field = data.field;
    let n = data.dim();
    let e = |i| unit_vec(field, n, i);
    let built = match kind {
        ClassicalKind::Lie | ClassicalKind::Malcev => {
            if !data.is_skew() {
                return Err(Error::Invalid(format!("{kind:?} input product is not skew-symmetric")));
            }
            let mut binary = Vec::with_capacity(n.pow(3));
            let mut ternary = Vec::with_capacity(n.pow(4));
            for i in 0..n {
                for j in 0..n {
                    binary.extend(data.basis(i, j).iter().cloned());
                    for k in 0..n {
                        let t = match kind {
                            ClassicalKind::Lie => data.mul(data.basis(i, j), &e(k)),
                            _ => {
                                let t1 = data.mul(&e(i), data.basis(j, k));
                                let t2 = data.mul(&e(j), data.basis(i, k));
                                let t3 = data.mul(data.basis(i, j), &e(k));
                                vec_add(&vec_sub(&t1, &t2), &t3)
                            }
                        };
                        ternary.extend(t);
                    }
                }
            }
            LyAlgebra::from_tensors(field, data.names.clone(), binary, ternary)?
        }
        ClassicalKind::Leibniz => {
            let mut binary = Vec::with_capacity(n.pow(3));
            let mut ternary = Vec::with_capacity(n.pow(4));
            for i in 0..n {
                for j in 0..n {
                    binary.extend(vec_sub(data.basis(i, j), data.basis(j, i)));
                    for k in 0..n {
                        ternary.extend(data.mul(data.basis(i, j), &e(k)).iter().map(|x| -x));
                    }
                }
            }
            LyAlgebra::from_tensors(field, data.names.clone(), binary, ternary)?
        }
        ClassicalKind::Reductive { g_dim } => {
            if g_dim > n {
                return Err(Error::Invalid("reductive split exceeds dimension".into()));
            }
            if !data.is_skew() || !data.satisfies_jacobi() {
                return Err(Error::Invalid("reductive input is not a Lie algebra".into()));
            }
            let in_g = |v: &[Scalar]| v[g_dim..].iter().all(Scalar::is_zero);
            let in_h = |v: &[Scalar]| v[..g_dim].iter().all(Scalar::is_zero);
            for i in 0..g_dim {
                for j in 0..n {
                    let v = data.basis(i, j);
                    if j < g_dim && !in_g(v) {
                        return Err(Error::Invalid(format!("[G,G] not inside G at ({i},{j})")));
                    }
                    if j >= g_dim && !in_h(v) {
                        return Err(Error::Invalid(format!("[G,H] not inside H at ({i},{j})")));
                    }
                }
            }
            let h = n - g_dim;
            let mut binary = Vec::with_capacity(h.pow(3));
            let mut ternary = Vec::with_capacity(h.pow(4));
            for a in g_dim..n {
                for b in g_dim..n {
                    let ab = data.basis(a, b);
                    binary.extend(ab[g_dim..].iter().cloned());
                    let mut g_part = ab.to_vec();
                    for x in g_part[g_dim..].iter_mut() {
                        *x = Scalar::zero(field);
                    }
                    for c in g_dim..n {
                        ternary.extend(data.mul(&g_part, &e(c))[g_dim..].iter().cloned());
                    }
                }
            }
            LyAlgebra::from_tensors(field, data.names[g_dim..].to_vec(), binary, ternary)?
        }
    };
    let report = built.check_axioms();
    if !report.passes() {
        return Err(Error::Invalid(format!(
            "{kind:?} construction violates {:?}",
            report.failed_axioms()
        )));
    }
    Ok(built)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> FieldSpec {
        FieldSpec::Rational
    }

    fn cross_product() -> ClassicalData {
        let f = q();
        let mut product = vec![f.zero(); 27];
        let mut put = |i: usize, j: usize, k: usize, s: i64| product[(i * 3 + j) * 3 + k] = f.int(s);
        put(0, 1, 2, 1);
        put(1, 0, 2, -1);
        put(1, 2, 0, 1);
        put(2, 1, 0, -1);
        put(2, 0, 1, 1);
        put(0, 2, 1, -1);
        ClassicalData::new(f, default_names(3), product).unwrap()
    }

    #[test]
    fn heisenberg_constants() {
        let h = LyAlgebra::heisenberg(q(), 1).unwrap();
        let e = |i| unit_vec(q(), 3, i);
        assert_eq!(h.bracket_eval(&e(0), &e(1), None).unwrap(), e(2));
        assert_eq!(h.bracket_eval(&e(0), &e(1), Some(&e(0))).unwrap(), e(2));
        assert_eq!(h.bracket(&e(1), &e(0)), vec_scale_neg(&e(2)));
        let h2 = LyAlgebra::heisenberg(q(), 2).unwrap();
        let e5 = |i| unit_vec(q(), 5, i);
        assert_eq!(h2.bracket(&e5(0), &e5(2)), e5(4));
        assert_eq!(h2.bracket(&e5(1), &e5(3)), e5(4));
        assert_eq!(h2.triple(&e5(1), &e5(3), &e5(1)), e5(4));
        assert!(h2.check_axioms().passes());
    }

    fn vec_scale_neg(v: &[Scalar]) -> Vector {
        v.iter().map(|x| -x).collect()
    }

    #[test]
    fn perturbed_heisenberg_fails_ly3() {
        let h = LyAlgebra::heisenberg(q(), 1).unwrap();
        let mut t = h.ternary_tensor().to_vec();
        // Only T[0][1][0] changes; with a skew-consistent change the cyclic sum would cancel.
        t[((0 * 3 + 1) * 3 + 0) * 3 + 2] = q().int(2);
        let bad = LyAlgebra::from_tensors(q(), default_names(3), h.binary_tensor().to_vec(), t).unwrap();
        let report = bad.check_axioms();
        let w = report.failure(Axiom::LY3).expect("LY3 must fail");
        assert_eq!(w.indices, vec![0, 0, 1]);
        assert!(!is_zero_vec(&bad.axiom_residual(Axiom::LY3, &w.indices)));
        assert!(report.failure(Axiom::LY1).is_none());
        assert!(report.failure(Axiom::LY2).is_some());
    }

    #[test]
    fn centers_and_series() {
        for n in 1..=3 {
            let h = LyAlgebra::heisenberg(q(), n).unwrap();
            let z = h.center();
            assert_eq!(z.dim(), 1);
            assert!(z.contains(&unit_vec(q(), 2 * n + 1, 2 * n)));
            let (series, idx) = h.lower_central_series();
            assert_eq!(idx, Some(2));
            assert_eq!(series.len(), 3);
            assert_eq!(series[1], z);
            let g = LyAlgebra::generalized_heisenberg(q(), n).unwrap();
            assert_eq!(g.center().dim(), 1);
            assert_eq!(g.nilpotency_index(), Some(2));
        }
        let a = LyAlgebra::abelian(q(), 3);
        assert_eq!(a.center().dim(), 3);
        assert_eq!(a.nilpotency_index(), Some(1));
    }

    #[test]
    fn ideals_and_quotients() {
        let h = LyAlgebra::heisenberg(q(), 1).unwrap();
        let z = h.center();
        assert_eq!(h.ideal_tests(&z).unwrap(), IdealTests { is_ideal: true, is_abelian_ideal: true });
        let full = SubspaceBasis::full(q(), 3);
        assert_eq!(h.ideal_tests(&full).unwrap(), IdealTests { is_ideal: true, is_abelian_ideal: false });
        let e1 = SubspaceBasis::span(q(), 3, &[unit_vec(q(), 3, 0)]).unwrap();
        assert!(!h.ideal_tests(&e1).unwrap().is_ideal);
        assert!(h.quotient(&e1).is_err());

        let (quo, proj) = h.quotient(&z).unwrap();
        assert_eq!(quo.dim(), 2);
        assert!(quo.is_abelian());
        assert_eq!(proj, Matrix::from_ints(q(), &[vec![1, 0, 0], vec![0, 1, 0]]));
        assert_eq!(h.quotient(&full).unwrap().0.dim(), 0);
        let (same, _) = h.quotient(&SubspaceBasis::zero(q(), 3)).unwrap();
        assert_eq!(same, h);
    }

    #[test]
    fn morphisms() {
        let f = q();
        let h = LyAlgebra::heisenberg(f, 1).unwrap();
        assert!(h.is_automorphism(&Matrix::identity(f, 3)).unwrap());
        let k = 5;
        let g = Matrix::from_ints(f, &[vec![1, 0, 0], vec![0, k, 0], vec![0, 0, k]]);
        assert!(h.is_automorphism(&g).unwrap());
        let swap = Matrix::from_ints(f, &[vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, 1]]);
        assert!(!h.is_morphism(&h, &swap).unwrap());
        assert!(h.is_morphism(&h, &Matrix::identity(f, 2)).is_err());

        for n in 1..=3 {
            let hn = LyAlgebra::heisenberg(f, n).unwrap();
            let gn = LyAlgebra::generalized_heisenberg(f, n).unwrap();
            let mut phi = Matrix::zeros(f, 2 * n + 2, 2 * n + 1);
            for i in 0..n {
                phi.set(i, i, f.one());
                phi.set(n + 1 + i, n + i, f.one());
            }
            phi.set(2 * n + 1, 2 * n, f.one());
            assert!(hn.is_morphism(&gn, &phi).unwrap(), "embedding for n={n}");
        }
    }

    #[test]
    fn classical_constructions() {
        let cross = cross_product();
        let lie = LyAlgebra::from_classical(ClassicalKind::Lie, &cross).unwrap();
        let e = |i| unit_vec(q(), 3, i);
        assert_eq!(lie.triple(&e(0), &e(1), &e(0)), lie.bracket(&lie.bracket(&e(0), &e(1)), &e(0)));
        let (series, idx) = lie.lower_central_series();
        assert_eq!((series.len(), idx), (1, None));

        let f = q();
        let mut product = vec![f.zero(); 8];
        product[1] = f.one(); // x·x = y
        let leib = ClassicalData::new(f, vec!["x".into(), "y".into()], product).unwrap();
        assert!(LyAlgebra::from_classical(ClassicalKind::Leibniz, &leib).unwrap().is_abelian());
        assert!(LyAlgebra::from_classical(ClassicalKind::Lie, &leib).is_err());

        let malcev = LyAlgebra::from_classical(ClassicalKind::Malcev, &cross).unwrap();
        assert!(malcev.check_axioms().passes());

        // sl2 = span{h} ⊕ span{x, y}: [G,H] ⊆ H but [H,H] meets G.
        let mut product = vec![f.zero(); 27];
        let mut put = |i: usize, j: usize, k: usize, s: i64| {
            product[(i * 3 + j) * 3 + k] = f.int(s);
            product[(j * 3 + i) * 3 + k] = f.int(-s);
        };
        put(0, 1, 1, 2);
        put(0, 2, 2, -2);
        put(1, 2, 0, 1);
        let sl2 = ClassicalData::new(f, vec!["h".into(), "x".into(), "y".into()], product).unwrap();
        let red = LyAlgebra::from_classical(ClassicalKind::Reductive { g_dim: 1 }, &sl2).unwrap();
        assert_eq!(red.dim(), 2);
        let u = |i| unit_vec(f, 2, i);
        assert!(is_zero_vec(&red.bracket(&u(0), &u(1))));
        assert_eq!(red.triple(&u(0), &u(1), &u(0)), vec![f.int(2), f.zero()]);
        assert!(LyAlgebra::from_classical(ClassicalKind::Reductive { g_dim: 2 }, &sl2).is_err());
    }

    #[test]
    fn imaginary_octonions_are_malcev() {
        let f = q();
        let triples = [(1, 2, 3), (1, 4, 5), (1, 7, 6), (2, 4, 6), (2, 5, 7), (3, 4, 7), (3, 6, 5)];
        let mut product = vec![f.zero(); 7usize.pow(3)];
        for &(a, b, c) in &triples {
            for (x, y, z) in [(a, b, c), (b, c, a), (c, a, b)] {
                let (x, y, z) = (x - 1, y - 1, z - 1);
                product[(x * 7 + y) * 7 + z] = f.int(2);
                product[(y * 7 + x) * 7 + z] = f.int(-2);
            }
        }
        let data = ClassicalData::new(f, default_names(7), product).unwrap();
        let m = LyAlgebra::from_classical(ClassicalKind::Malcev, &data).unwrap();
        assert!(!m.is_abelian());
        // not a Lie algebra, so the Lie construction must be rejected
        assert!(LyAlgebra::from_classical(ClassicalKind::Lie, &data).is_err());
    }

    #[test]
    fn builder_rejects_conflicts() {
        let f = q();
        let mut b = AlgebraBuilder::new(f, default_names(2));
        b.set_binary(0, 1, vec![f.one(), f.zero()]).unwrap();
        b.set_binary(1, 0, vec![f.int(-1), f.zero()]).unwrap();
        let err = b.set_binary(1, 0, vec![f.one(), f.zero()]).unwrap_err();
        assert!(matches!(err, Error::SkewConflict(ref m) if m.contains("(1,0)") && m.contains("(0,1)")));
        assert!(b.set_binary(1, 1, vec![f.one(), f.zero()]).is_err());
        assert!(b.set_ternary(0, 0, 1, vec![f.one(), f.zero()]).is_err());
    }
}
