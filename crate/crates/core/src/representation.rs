//! Representations `(ρ, D, θ; V)` of an LY algebra.

use std::fmt;

use serde::Serialize;

use crate::algebra::LyAlgebra;
use crate::error::{shape, Error, Result};
use crate::linalg::Matrix;
use crate::scalar::{FieldSpec, Scalar};

/// `rho[i] = ρ(e_i)`, `dmap[i*n + j] = D(e_i, e_j)`, `theta[i*n + j] = θ(e_i, e_j)`,
/// all `m × m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Representation {
    algebra: LyAlgebra,
    vdim: usize,
    rho: Vec<Matrix>,
    dmap: Vec<Matrix>,
    theta: Vec<Matrix>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum RepAxiom {
    R1,
    R2,
    R3,
    R4,
    R5,
    R6,
    R7,
}

impl RepAxiom {
    pub const ALL: [RepAxiom; 7] = [
        RepAxiom::R1,
        RepAxiom::R2,
        RepAxiom::R3,
        RepAxiom::R4,
        RepAxiom::R5,
        RepAxiom::R6,
        RepAxiom::R7,
    ];

    pub fn arity(self) -> usize {
        match self {
            RepAxiom::R1 => 2,
            RepAxiom::R2 | RepAxiom::R3 | RepAxiom::R5 | RepAxiom::R7 => 3,
            RepAxiom::R4 | RepAxiom::R6 => 4,
        }
    }
}

impl fmt::Display for RepAxiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RepFailure {
    pub indices: Vec<usize>,
    pub residual: Matrix,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RepStatus {
    pub axiom: RepAxiom,
    pub failure: Option<RepFailure>,
}

/// Outcome of [`Representation::check`]. R7 follows from R1–R6 and is reported
/// separately; it does not enter [`RepReport::passes`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RepReport {
    pub statuses: Vec<RepStatus>,
}

impl RepReport {
    pub fn passes(&self) -> bool {
        self.statuses
            .iter()
            .filter(|s| s.axiom != RepAxiom::R7)
            .all(|s| s.failure.is_none())
    }

    pub fn derived_r7_holds(&self) -> bool {
        self.failure(RepAxiom::R7).is_none()
    }

    pub fn failure(&self, axiom: RepAxiom) -> Option<&RepFailure> {
        self.statuses
            .iter()
            .find(|s| s.axiom == axiom)
            .and_then(|s| s.failure.as_ref())
    }

    pub fn failed_axioms(&self) -> Vec<RepAxiom> {
        self.statuses
            .iter()
            .filter(|s| s.failure.is_some())
            .map(|s| s.axiom)
            .collect()
    }
}

fn commutator(a: &Matrix, b: &Matrix) -> Matrix {
    a.mul(b).sub(&b.mul(a))
}

impl Representation {
    pub fn new(
        algebra: LyAlgebra,
        vdim: usize,
        rho: Vec<Matrix>,
        dmap: Vec<Matrix>,
        theta: Vec<Matrix>,
    ) -> Result<Representation> {
        let n = algebra.dim();
        if rho.len() != n || dmap.len() != n * n || theta.len() != n * n {
            return Err(shape(format!(
                "expected {n} rho and {} D/theta matrices, got {}/{}/{}",
                n * n,
                rho.len(),
                dmap.len(),
                theta.len()
            )));
        }
        for m in rho.iter().chain(&dmap).chain(&theta) {
            if m.rows() != vdim || m.cols() != vdim {
                return Err(shape(format!(
                    "representation matrix is {}x{}, expected {vdim}x{vdim}",
                    m.rows(),
                    m.cols()
                )));
            }
            if m.field() != algebra.field() {
                return Err(shape("representation matrices over a different field"));
            }
        }
        Ok(Representation {
            algebra,
            vdim,
            rho,
            dmap,
            theta,
        })
    }

    pub fn trivial(algebra: &LyAlgebra, vdim: usize) -> Representation {
        let n = algebra.dim();
        let z = Matrix::zeros(algebra.field(), vdim, vdim);
        Representation {
            algebra: algebra.clone(),
            vdim,
            rho: vec![z.clone(); n],
            dmap: vec![z.clone(); n * n],
            theta: vec![z; n * n],
        }
    }

    /// `ρ(a)b = [a,b]`, `D(a,b)c = {a,b,c}`, `θ(a,b)c = {c,a,b}`.
    pub fn adjoint(algebra: &LyAlgebra) -> Representation {
        let n = algebra.dim();
        let f = algebra.field();
        let mut rho = Vec::with_capacity(n);
        for i in 0..n {
            let mut m = Matrix::zeros(f, n, n);
            for c in 0..n {
                for (r, x) in algebra.bracket_basis(i, c).iter().enumerate() {
                    m.set(r, c, x.clone());
                }
            }
            rho.push(m);
        }
        let mut dmap = Vec::with_capacity(n * n);
        let mut theta = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut d = Matrix::zeros(f, n, n);
                let mut t = Matrix::zeros(f, n, n);
                for c in 0..n {
                    for r in 0..n {
                        d.set(r, c, algebra.triple_basis(i, j, c)[r].clone());
                        t.set(r, c, algebra.triple_basis(c, i, j)[r].clone());
                    }
                }
                dmap.push(d);
                theta.push(t);
            }
        }
        Representation {
            algebra: algebra.clone(),
            vdim: n,
            rho,
            dmap,
            theta,
        }
    }

    pub fn algebra(&self) -> &LyAlgebra {
        &self.algebra
    }

    pub fn field(&self) -> FieldSpec {
        self.algebra.field()
    }

    pub fn n(&self) -> usize {
        self.algebra.dim()
    }

    pub fn vdim(&self) -> usize {
        self.vdim
    }

    pub fn rho(&self, i: usize) -> &Matrix {
        &self.rho[i]
    }

    pub fn d(&self, i: usize, j: usize) -> &Matrix {
        &self.dmap[i * self.n() + j]
    }

    pub fn theta(&self, i: usize, j: usize) -> &Matrix {
        &self.theta[i * self.n() + j]
    }

    pub fn rho_all(&self) -> &[Matrix] {
        &self.rho
    }

    pub fn d_all(&self) -> &[Matrix] {
        &self.dmap
    }

    pub fn theta_all(&self) -> &[Matrix] {
        &self.theta
    }

    pub fn is_trivial(&self) -> bool {
        self.rho.iter().chain(&self.dmap).chain(&self.theta).all(Matrix::is_zero)
    }

    fn zero(&self) -> Matrix {
        Matrix::zeros(self.field(), self.vdim, self.vdim)
    }

    /// `ρ(x)` for a coordinate vector `x`.
    pub fn rho_of(&self, x: &[Scalar]) -> Matrix {
        let mut out = self.zero();
        for (i, a) in x.iter().enumerate() {
            if !a.is_zero() {
                out.add_scaled(a, &self.rho[i]);
            }
        }
        out
    }

    fn pair_of(&self, maps: &[Matrix], x: &[Scalar], y: &[Scalar]) -> Matrix {
        let n = self.n();
        let mut out = self.zero();
        for (i, a) in x.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in y.iter().enumerate() {
                if !b.is_zero() {
                    out.add_scaled(&(a * b), &maps[i * n + j]);
                }
            }
        }
        out
    }

    pub fn d_of(&self, x: &[Scalar], y: &[Scalar]) -> Matrix {
        self.pair_of(&self.dmap, x, y)
    }

    pub fn theta_of(&self, x: &[Scalar], y: &[Scalar]) -> Matrix {
        self.pair_of(&self.theta, x, y)
    }

    /// Residual of one representation axiom at basis indices.
    pub fn axiom_residual(&self, axiom: RepAxiom, idx: &[usize]) -> Matrix {
        assert_eq!(idx.len(), axiom.arity(), "wrong witness arity");
        let l = &self.algebra;
        let br = |i: usize, j: usize| l.bracket_basis(i, j);
        let tr = |i: usize, j: usize, k: usize| l.triple_basis(i, j, k);
        let unit = |i: usize| crate::linalg::unit_vec(self.field(), self.n(), i);
        match axiom {
            RepAxiom::R1 => {
                let (a, b) = (idx[0], idx[1]);
                let lhs = self.d(a, b).add(self.theta(a, b)).sub(self.theta(b, a));
                let rhs = commutator(self.rho(a), self.rho(b)).sub(&self.rho_of(br(a, b)));
                lhs.sub(&rhs)
            }
            RepAxiom::R2 => {
                let (a, b, c) = (idx[0], idx[1], idx[2]);
                self.theta_of(&unit(a), br(b, c))
                    .sub(&self.rho(b).mul(self.theta(a, c)))
                    .add(&self.rho(c).mul(self.theta(a, b)))
            }
            RepAxiom::R3 => {
                let (a, b, c) = (idx[0], idx[1], idx[2]);
                self.theta_of(br(a, b), &unit(c))
                    .sub(&self.theta(a, c).mul(self.rho(b)))
                    .add(&self.theta(b, c).mul(self.rho(a)))
            }
            RepAxiom::R4 => {
                let (a, b, c, d) = (idx[0], idx[1], idx[2], idx[3]);
                self.theta(c, d)
                    .mul(self.theta(a, b))
                    .sub(&self.theta(b, d).mul(self.theta(a, c)))
                    .sub(&self.theta_of(&unit(a), tr(b, c, d)))
                    .add(&self.d(b, c).mul(self.theta(a, d)))
            }
            RepAxiom::R5 => {
                let (a, b, c) = (idx[0], idx[1], idx[2]);
                commutator(self.d(a, b), self.rho(c)).sub(&self.rho_of(tr(a, b, c)))
            }
            RepAxiom::R6 => {
                let (a, b, c, d) = (idx[0], idx[1], idx[2], idx[3]);
                commutator(self.d(a, b), self.theta(c, d))
                    .sub(&self.theta_of(tr(a, b, c), &unit(d)))
                    .sub(&self.theta_of(&unit(c), tr(a, b, d)))
            }
            RepAxiom::R7 => {
                let (a, b, c) = (idx[0], idx[1], idx[2]);
                self.d_of(br(a, b), &unit(c))
                    .add(&self.d_of(br(b, c), &unit(a)))
                    .add(&self.d_of(br(c, a), &unit(b)))
            }
        }
    }

    fn first_failure(&self, axiom: RepAxiom) -> Option<RepFailure> {
        let n = self.n();
        let k = axiom.arity();
        let total = n.pow(k as u32);
        let mut idx = vec![0usize; k];
        for code in 0..total {
            let mut c = code;
            for slot in (0..k).rev() {
                idx[slot] = c % n;
                c /= n;
            }
            let r = self.axiom_residual(axiom, &idx);
            if !r.is_zero() {
                return Some(RepFailure {
                    indices: idx,
                    residual: r,
                });
            }
        }
        None
    }

    /// Evaluates R1–R7 on all basis tuples.
    pub fn check(&self) -> RepReport {
        RepReport {
            statuses: RepAxiom::ALL
                .iter()
                .map(|&axiom| RepStatus {
                    axiom,
                    failure: self.first_failure(axiom),
                })
                .collect(),
        }
    }

    /// The semidirect product on `K^(n+m)`: first `n` coordinates are `L`, last `m` are `V`.
    ///
    /// `[a+u, b+v] = [a,b] + ρ(a)v − ρ(b)u` and
    /// `{a+u, b+v, c+w} = {a,b,c} + D(a,b)w + θ(b,c)u − θ(a,c)v`.
    pub fn semidirect(&self) -> LyAlgebra {
        let zero_pair = |_: usize, _: usize| None;
        let zero_triple = |_: usize, _: usize, _: usize| None;
        self.total_algebra(&zero_pair, &zero_triple)
    }

    /// Semidirect layout plus optional cocycle values on `L × L` and `L × L × L`.
    pub(crate) fn total_algebra(
        &self,
        alpha: &dyn Fn(usize, usize) -> Option<Vec<Scalar>>,
        beta: &dyn Fn(usize, usize, usize) -> Option<Vec<Scalar>>,
    ) -> LyAlgebra {
        let l = &self.algebra;
        let (n, m) = (self.n(), self.vdim);
        let t = n + m;
        let f = self.field();
        let mut binary = vec![Scalar::zero(f); t.pow(3)];
        let mut ternary = vec![Scalar::zero(f); t.pow(4)];
        let bidx = |i: usize, j: usize, k: usize| (i * t + j) * t + k;
        let tidx = |i: usize, j: usize, k: usize, l: usize| ((i * t + j) * t + k) * t + l;
        for i in 0..n {
            for j in 0..n {
                for (k, x) in l.bracket_basis(i, j).iter().enumerate() {
                    binary[bidx(i, j, k)] = x.clone();
                }
                if let Some(a) = alpha(i, j) {
                    for (s, x) in a.iter().enumerate() {
                        binary[bidx(i, j, n + s)] = x.clone();
                    }
                }
            }
            for v in 0..m {
                for s in 0..m {
                    let x = self.rho[i].get(s, v);
                    binary[bidx(i, n + v, n + s)] = x.clone();
                    binary[bidx(n + v, i, n + s)] = -x;
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for (q, x) in l.triple_basis(i, j, k).iter().enumerate() {
                        ternary[tidx(i, j, k, q)] = x.clone();
                    }
                    if let Some(b) = beta(i, j, k) {
                        for (s, x) in b.iter().enumerate() {
                            ternary[tidx(i, j, k, n + s)] = x.clone();
                        }
                    }
                }
                for v in 0..m {
                    for s in 0..m {
                        // {a, b, w}
                        ternary[tidx(i, j, n + v, n + s)] = self.d(i, j).get(s, v).clone();
                        // {u, b, c} with b = e_i, c = e_j
                        ternary[tidx(n + v, i, j, n + s)] = self.theta(i, j).get(s, v).clone();
                        // {a, v, c} with a = e_i, c = e_j
                        ternary[tidx(i, n + v, j, n + s)] = -self.theta(i, j).get(s, v);
                    }
                }
            }
        }
        let mut names: Vec<String> = l.basis_names().to_vec();
        names.extend((1..=m).map(|i| format!("v{i}")));
        LyAlgebra::from_tensors(f, names, binary, ternary).expect("consistent sizes")
    }

    /// `ρ'(a) = ρ(ψa)`, `D'(a,b) = D(ψa,ψb)`, `θ'(a,b) = θ(ψa,ψb)`.
    pub fn twist(&self, psi: &Matrix) -> Result<Representation> {
        if psi.rows() != self.n() || psi.cols() != self.n() {
            return Err(shape("twisting matrix must be n x n"));
        }
        if !self.algebra.is_automorphism(psi)? {
            return Err(Error::Precondition("twisting matrix is not an automorphism".into()));
        }
        Ok(self.twist_unchecked(psi))
    }

    pub(crate) fn twist_unchecked(&self, psi: &Matrix) -> Representation {
        let n = self.n();
        let cols = psi.columns();
        let rho = cols.iter().map(|c| self.rho_of(c)).collect();
        let mut dmap = Vec::with_capacity(n * n);
        let mut theta = Vec::with_capacity(n * n);
        for a in &cols {
            for b in &cols {
                dmap.push(self.d_of(a, b));
                theta.push(self.theta_of(a, b));
            }
        }
        Representation {
            algebra: self.algebra.clone(),
            vdim: self.vdim,
            rho,
            dmap,
            theta,
        }
    }

    /// Checks `φρ(e_i) = ρ'(e_i)φ` and likewise for `D` and `θ`.
    pub fn is_morphism_to(&self, other: &Representation, phi: &Matrix) -> Result<bool> {
        if other.n() != self.n() || other.algebra != self.algebra {
            return Err(shape("representations over different algebras"));
        }
        if phi.rows() != other.vdim || phi.cols() != self.vdim {
            return Err(shape("intertwiner has the wrong shape"));
        }
        let pairs = self
            .rho
            .iter()
            .zip(&other.rho)
            .chain(self.dmap.iter().zip(&other.dmap))
            .chain(self.theta.iter().zip(&other.theta));
        for (a, b) in pairs {
            if phi.mul(a) != b.mul(phi) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn convert(&self, field: FieldSpec) -> Result<Representation> {
        let conv = |ms: &[Matrix]| ms.iter().map(|m| m.convert(field)).collect::<Result<Vec<_>>>();
        Representation::new(
            self.algebra.convert(field)?,
            self.vdim,
            conv(&self.rho)?,
            conv(&self.dmap)?,
            conv(&self.theta)?,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::unit_vec;

    fn q() -> FieldSpec {
        FieldSpec::Rational
    }

    #[test]
    fn adjoint_heisenberg() {
        let h = LyAlgebra::heisenberg(q(), 1).unwrap();
        let ad = Representation::adjoint(&h);
        assert!(ad.check().passes());
        assert!(ad.check().derived_r7_holds());
        let e = |i| unit_vec(q(), 3, i);
        assert_eq!(ad.d(0, 1).apply(&e(0)), e(2));
        assert!(ad.d(0, 1).apply(&e(1)).iter().all(Scalar::is_zero));
        // θ(a,b)c = {c,a,b}
        assert_eq!(ad.theta(1, 0).apply(&e(0)), e(2));
        assert_eq!(ad.theta(0, 0).apply(&e(1)), vec![q().zero(), q().zero(), q().int(-1)]);
        assert!(ad.semidirect().check_axioms().passes());
    }

    #[test]
    fn corrupted_theta_breaks_r1() {
        let h = LyAlgebra::heisenberg(q(), 1).unwrap();
        let ad = Representation::adjoint(&h);
        let two = q().int(2);
        let theta = ad.theta_all().iter().map(|t| t.scale(&two)).collect();
        let bad = Representation::new(h, 3, ad.rho_all().to_vec(), ad.d_all().to_vec(), theta).unwrap();
        let report = bad.check();
        assert!(report.failure(RepAxiom::R1).is_some());
        assert!(!bad.semidirect().check_axioms().passes());
    }

    #[test]
    fn trivial_and_abelian() {
        let a = LyAlgebra::abelian(q(), 2);
        let t = Representation::trivial(&a, 1);
        assert!(t.check().passes());
        assert_eq!(Representation::adjoint(&a), Representation::trivial(&a, 2));
        let s = t.semidirect();
        assert!(s.is_abelian());
        assert_eq!(s.dim(), 3);
        let psi = Matrix::from_ints(q(), &[vec![1, 1], vec![0, 1]]);
        assert_eq!(t.twist(&psi).unwrap(), t);
        assert!(t.is_morphism_to(&t, &Matrix::from_ints(q(), &[vec![3]])).unwrap());
    }

    #[test]
    fn twist_is_right_action() {
        let f = q();
        let h = LyAlgebra::heisenberg(f, 1).unwrap();
        let ad = Representation::adjoint(&h);
        let p1 = Matrix::from_ints(f, &[vec![1, 0, 0], vec![2, 3, 0], vec![1, -1, 3]]);
        let p2 = Matrix::from_ints(f, &[vec![1, 0, 0], vec![-1, 2, 0], vec![0, 4, 2]]);
        assert!(h.is_automorphism(&p1).unwrap() && h.is_automorphism(&p2).unwrap());
        assert_eq!(ad.twist(&Matrix::identity(f, 3)).unwrap(), ad);
        let lhs = ad.twist(&p1.mul(&p2)).unwrap();
        let rhs = ad.twist(&p1).unwrap().twist(&p2).unwrap();
        assert_eq!(lhs, rhs);
        let back = ad.twist(&p1).unwrap().twist(&p1.invert().unwrap()).unwrap();
        assert_eq!(back, ad);
        assert!(!ad.is_morphism_to(&ad.twist(&p1).unwrap(), &Matrix::identity(f, 3)).unwrap());
        let swap = Matrix::from_ints(f, &[vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, 1]]);
        assert!(ad.twist(&swap).is_err());
    }
}
