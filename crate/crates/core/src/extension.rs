//! Abelian extensions `0 → V → L̃ → L → 0`, built from a cocycle or read off a
//! total algebra with a chosen abelian ideal.

use crate::algebra::LyAlgebra;
use crate::cohomology::{delta_zero, is_cocycle23, solve_coboundary, Cochain, CochainPair};
use crate::error::{precondition, shape, Error, Result};
use crate::linalg::{Matrix, SubspaceBasis};
use crate::representation::Representation;
use crate::scalar::{FieldSpec, Scalar};

/// An abelian extension with its structural maps.
///
/// `inclusion` is `N×m`, `projection` is `n×N`, `section` is `N×n` and
/// `retraction` is `m×N`, where `N = n + m`. They satisfy
/// `i r + s p = I`, `p i = 0`, `p s = I`, `r i = I` and `r s = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianExtension {
    base: LyAlgebra,
    rep: Representation,
    cocycle: CochainPair,
    total: LyAlgebra,
    inclusion: Matrix,
    projection: Matrix,
    section: Matrix,
    retraction: Matrix,
}

impl AbelianExtension {
    pub fn base(&self) -> &LyAlgebra {
        &self.base
    }

    pub fn rep(&self) -> &Representation {
        &self.rep
    }

    pub fn cocycle(&self) -> &CochainPair {
        &self.cocycle
    }

    pub fn total(&self) -> &LyAlgebra {
        &self.total
    }

    pub fn inclusion(&self) -> &Matrix {
        &self.inclusion
    }

    pub fn projection(&self) -> &Matrix {
        &self.projection
    }

    pub fn section(&self) -> &Matrix {
        &self.section
    }

    pub fn retraction(&self) -> &Matrix {
        &self.retraction
    }

    pub fn field(&self) -> FieldSpec {
        self.base.field()
    }

    /// `dim L`.
    pub fn n(&self) -> usize {
        self.base.dim()
    }

    /// `dim V`.
    pub fn m(&self) -> usize {
        self.rep.vdim()
    }

    pub fn total_dim(&self) -> usize {
        self.total.dim()
    }

    /// Whether the stored cocycle is zero, so the canonical section is a morphism.
    pub fn is_split(&self) -> bool {
        self.cocycle.is_zero()
    }

    /// The image of `V` in the total algebra.
    pub fn ideal(&self) -> SubspaceBasis {
        SubspaceBasis::span(self.field(), self.total_dim(), &self.inclusion.columns()).expect("ambient matches")
    }

    /// Recomputes the cocycle for another section `t` (with `p t = I`).
    pub fn cocycle_for_section(&self, t: &Matrix) -> Result<CochainPair> {
        self.check_section(t)?;
        let r = self.retraction_for(t);
        Ok(induced_cocycle(&self.total, &r, t, self.n(), self.m()))
    }

    fn check_section(&self, t: &Matrix) -> Result<()> {
        if t.rows() != self.total_dim() || t.cols() != self.n() {
            return Err(shape("section must be (n+m) x n"));
        }
        if !self.projection.mul(t).is_identity() {
            return Err(precondition("matrix is not a section of the projection"));
        }
        Ok(())
    }

    /// `x ↦` V-coordinates of `x − t p x`.
    fn retraction_for(&self, t: &Matrix) -> Matrix {
        let f = self.field();
        let nn = self.total_dim();
        let id = Matrix::identity(f, nn);
        self.retraction.mul(&id.sub(&t.mul(&self.projection)))
    }

    pub fn convert(&self, field: FieldSpec) -> Result<AbelianExtension> {
        Ok(AbelianExtension {
            base: self.base.convert(field)?,
            rep: self.rep.convert(field)?,
            cocycle: self.cocycle.convert(field)?,
            total: self.total.convert(field)?,
            inclusion: self.inclusion.convert(field)?,
            projection: self.projection.convert(field)?,
            section: self.section.convert(field)?,
            retraction: self.retraction.convert(field)?,
        })
    }
}

/// `α(a,b) = r[t a, t b]`, `β(a,b,c) = r{t a, t b, t c}` on basis tuples.
///
/// Since `p` is a morphism, `[t a, t b] − t[a,b]` lies in `V` and `r t = 0`, so
/// the `t[a,b]` term drops out after applying `r`.
fn induced_cocycle(total: &LyAlgebra, r: &Matrix, t: &Matrix, n: usize, m: usize) -> CochainPair {
    let f = total.field();
    let cols = t.columns();
    let mut alpha = Cochain::zero(f, 2, n, m);
    let mut beta = Cochain::zero(f, 3, n, m);
    for a in 0..n {
        for b in 0..n {
            alpha.set(&[a, b], &r.apply(&total.bracket(&cols[a], &cols[b])));
            for c in 0..n {
                beta.set(&[a, b, c], &r.apply(&total.triple(&cols[a], &cols[b], &cols[c])));
            }
        }
    }
    CochainPair::new(alpha, beta).expect("arities 2 and 3")
}

fn block_maps(f: FieldSpec, n: usize, m: usize) -> (Matrix, Matrix, Matrix, Matrix) {
    let nn = n + m;
    let mut i = Matrix::zeros(f, nn, m);
    let mut r = Matrix::zeros(f, m, nn);
    for t in 0..m {
        i.set(n + t, t, Scalar::one(f));
        r.set(t, n + t, Scalar::one(f));
    }
    let mut p = Matrix::zeros(f, n, nn);
    let mut s = Matrix::zeros(f, nn, n);
    for a in 0..n {
        p.set(a, a, Scalar::one(f));
        s.set(a, a, Scalar::one(f));
    }
    (i, p, s, r)
}

/// Builds `L ⊕ V` with the cocycle added to the semidirect brackets, rejecting non-cocycles.
pub fn build_extension(rep: &Representation, cocycle: &CochainPair) -> Result<AbelianExtension> {
    if cocycle.level() != 1 {
        return Err(shape("extension cocycle must be a (2,3)-cochain"));
    }
    if !cocycle.satisfies_slot_conditions() {
        return Err(Error::Invalid("cocycle violates the skew conditions of a (2,3)-cochain".into()));
    }
    if !is_cocycle23(rep, cocycle)? {
        return Err(Error::Invalid("pair is not a (2,3)-cocycle".into()));
    }
    build_extension_raw(rep, cocycle)
}

/// Same as [`build_extension`] without the cocycle precondition.
pub fn build_extension_raw(rep: &Representation, cocycle: &CochainPair) -> Result<AbelianExtension> {
    let (n, m, f) = (rep.n(), rep.vdim(), rep.field());
    if cocycle.n() != n || cocycle.m() != m || cocycle.field() != f || cocycle.level() != 1 {
        return Err(shape("cocycle does not match the representation"));
    }
    let alpha = |i: usize, j: usize| Some(cocycle.even().at(&[i, j]).to_vec());
    let beta = |i: usize, j: usize, k: usize| Some(cocycle.odd().at(&[i, j, k]).to_vec());
    let total = rep.total_algebra(&alpha, &beta);
    let (inclusion, projection, section, retraction) = block_maps(f, n, m);
    Ok(AbelianExtension {
        base: rep.algebra().clone(),
        rep: rep.clone(),
        cocycle: cocycle.clone(),
        total,
        inclusion,
        projection,
        section,
        retraction,
    })
}

/// Reads off base, induced representation and cocycle from an abelian ideal `v` of `total`,
/// using the complement-coordinate section.
pub fn from_total(total: &LyAlgebra, v: &SubspaceBasis) -> Result<AbelianExtension> {
    let f = total.field();
    let tests = total.ideal_tests(v)?;
    if !tests.is_abelian_ideal {
        return Err(precondition("subspace is not an abelian ideal"));
    }
    let (base, projection) = total.quotient(v)?;
    let nn = total.dim();
    let keep = v.complement_coords();
    let n = keep.len();
    let m = v.dim();
    let mut section = Matrix::zeros(f, nn, n);
    for (r, &c) in keep.iter().enumerate() {
        section.set(c, r, Scalar::one(f));
    }
    let inclusion = Matrix::from_columns(f, nn, v.vectors())?;
    // V is in reduced row echelon form: coordinate t of a vector of V is its pivot entry.
    let mut pick = Matrix::zeros(f, m, nn);
    for (t, &pc) in v.pivots().iter().enumerate() {
        pick.set(t, pc, Scalar::one(f));
    }
    let retraction = pick.mul(&Matrix::identity(f, nn).sub(&section.mul(&projection)));

    let rep = induced_rep(total, &base, &inclusion, &section, &retraction)?;
    let cocycle = induced_cocycle(total, &retraction, &section, n, m);
    Ok(AbelianExtension {
        base,
        rep,
        cocycle,
        total: total.clone(),
        inclusion,
        projection,
        section,
        retraction,
    })
}

/// `ρ(a)u = r[s a, i u]`, `D(a,b)u = r{s a, s b, i u}`, `θ(a,b)u = r{i u, s a, s b}`.
fn induced_rep(total: &LyAlgebra, base: &LyAlgebra, inclusion: &Matrix, section: &Matrix, retraction: &Matrix) -> Result<Representation> {
    let f = total.field();
    let m = inclusion.cols();
    let scols = section.columns();
    let icols = inclusion.columns();
    let op = |g: &dyn Fn(&[Scalar]) -> Vec<Scalar>| -> Matrix {
        let cols: Vec<Vec<Scalar>> = icols.iter().map(|u| retraction.apply(&g(u))).collect();
        Matrix::from_columns(f, m, &cols).expect("m rows")
    };
    let rho: Vec<Matrix> = scols.iter().map(|a| op(&|u| total.bracket(a, u))).collect();
    let n = scols.len();
    let mut dmap = Vec::with_capacity(n * n);
    let mut theta = Vec::with_capacity(n * n);
    for a in &scols {
        for b in &scols {
            dmap.push(op(&|u| total.triple(a, b, u)));
            theta.push(op(&|u| total.triple(u, a, b)));
        }
    }
    Representation::new(base.clone(), m, rho, dmap, theta)
}

/// Reassembles a stored extension, checking every structural identity and
/// that the representation and cocycle are the ones induced by the maps.
#[allow(clippy::too_many_arguments)]
pub fn from_parts(
    base: LyAlgebra,
    rep: Representation,
    cocycle: CochainPair,
    total: LyAlgebra,
    inclusion: Matrix,
    projection: Matrix,
    section: Matrix,
    retraction: Matrix,
) -> Result<AbelianExtension> {
    let f = total.field();
    let (n, m, nn) = (base.dim(), rep.vdim(), total.dim());
    if n + m != nn {
        return Err(shape("dim total must equal dim base + dim V"));
    }
    let dims = [
        (&inclusion, nn, m, "inclusion"),
        (&projection, n, nn, "projection"),
        (&section, nn, n, "section"),
        (&retraction, m, nn, "retraction"),
    ];
    for (mat, r, c, name) in dims {
        if (mat.rows(), mat.cols()) != (r, c) || mat.field() != f {
            return Err(shape(format!("{name} must be {r}x{c} over {f}")));
        }
    }
    if base.field() != f || rep.field() != f || cocycle.field() != f {
        return Err(shape("parts live over different fields"));
    }
    if rep.algebra() != &base {
        return Err(Error::Invalid("representation is not over the stored base".into()));
    }
    let id = |k| Matrix::identity(f, k);
    let identities = projection.mul(&inclusion).is_zero()
        && projection.mul(&section) == id(n)
        && retraction.mul(&inclusion) == id(m)
        && retraction.mul(&section).is_zero()
        && inclusion.mul(&retraction).add(&section.mul(&projection)) == id(nn);
    if !identities {
        return Err(Error::Invalid("structural maps violate i r + s p = I and its companions".into()));
    }
    if !total.is_morphism(&base, &projection)? {
        return Err(Error::Invalid("projection is not a morphism onto the base".into()));
    }
    let v = SubspaceBasis::span(f, nn, &inclusion.columns())?;
    if !total.ideal_tests(&v)?.is_abelian_ideal {
        return Err(Error::Invalid("image of the inclusion is not an abelian ideal".into()));
    }
    if induced_rep(&total, &base, &inclusion, &section, &retraction)? != rep {
        return Err(Error::Invalid("stored representation differs from the induced one".into()));
    }
    if induced_cocycle(&total, &retraction, &section, n, m) != cocycle {
        return Err(Error::Invalid("stored cocycle differs from the induced one".into()));
    }
    Ok(AbelianExtension {
        base,
        rep,
        cocycle,
        total,
        inclusion,
        projection,
        section,
        retraction,
    })
}

/// `λ = r(s − t)`, checked against `δλ = c_s − c_t`.
pub fn section_shift_witness(e: &AbelianExtension, t: &Matrix) -> Result<Matrix> {
    let other = e.cocycle_for_section(t)?;
    let lam = e.retraction.mul(&e.section.sub(t));
    let d = delta_zero(&e.rep, &lam)?;
    if d != e.cocycle.sub(&other) {
        return Err(Error::Internal("section change is not the coboundary of s - t".into()));
    }
    Ok(lam)
}

/// An equivalence `φ: L̃₁ → L̃₂` with `φ i₁ = i₂` and `p₂ φ = p₁`, when one exists.
///
/// Both extensions must share the base and carry identical representation matrices.
pub fn are_equivalent(e1: &AbelianExtension, e2: &AbelianExtension) -> Result<Option<Matrix>> {
    if e1.base != e2.base || e1.m() != e2.m() {
        return Err(precondition("extensions have different bases or fibre dimensions"));
    }
    if e1.rep != e2.rep {
        return Err(precondition("extensions induce different representation matrices"));
    }
    let diff = e1.cocycle.sub(&e2.cocycle);
    let Some(lam) = solve_coboundary(&e1.rep, &diff)? else {
        return Ok(None);
    };
    // φ(v + s₁a) = v + λ(a) + s₂a
    let phi = e2
        .inclusion
        .mul(&e1.retraction)
        .add(&e2.inclusion.mul(&lam).add(&e2.section).mul(&e1.projection));
    if !e1.total.is_morphism(&e2.total, &phi)? || !phi.is_invertible() {
        return Err(Error::Internal("constructed equivalence is not an isomorphism".into()));
    }
    Ok(Some(phi))
}

/// `0 → Z(L) → L → L/Z(L) → 0`.
pub fn central_extension(l: &LyAlgebra) -> Result<AbelianExtension> {
    let z = l.center();
    if z.is_zero() {
        return Err(precondition("algebra has trivial center"));
    }
    let e = from_total(l, &z)?;
    if l.nilpotency_index() == Some(2) && !e.rep.is_trivial() {
        return Err(Error::Internal("index-2 nilpotent algebra induced a nontrivial representation".into()));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> FieldSpec {
        FieldSpec::Rational
    }

    #[test]
    fn heisenberg_center() {
        let f = q();
        let h = LyAlgebra::heisenberg(f, 1).unwrap();
        let e = central_extension(&h).unwrap();
        assert_eq!((e.n(), e.m()), (2, 1));
        assert!(e.rep().is_trivial());
        assert!(e.base().is_abelian());
        assert_eq!(e.cocycle().even().at(&[0, 1]), &[f.one()]);
        assert_eq!(e.cocycle().odd().at(&[0, 1, 0]), &[f.one()]);
        assert_eq!(e.cocycle().odd().at(&[0, 1, 1]), &[f.zero()]);
        assert!(is_cocycle23(e.rep(), e.cocycle()).unwrap());
    }

    #[test]
    fn generalized_center_constants() {
        let f = q();
        let g = LyAlgebra::generalized_heisenberg(f, 1).unwrap();
        let e = central_extension(&g).unwrap();
        assert_eq!((e.n(), e.m()), (3, 1));
        assert_eq!(e.cocycle().even().at(&[0, 2]), &[f.one()]);
        assert_eq!(e.cocycle().odd().at(&[0, 2, 0]), &[f.one()]);
        assert_eq!(e.cocycle().odd().at(&[1, 2, 1]), &[f.one()]);
    }

    #[test]
    fn build_recovers_heisenberg() {
        let f = q();
        let base = LyAlgebra::abelian(f, 2);
        let rep = Representation::trivial(&base, 1);
        let mut c = CochainPair::zero(f, 1, 2, 1);
        let coords = {
            let mut v = c.coords();
            v[0] = f.one(); // α(ē1,ē2)
            v[1] = f.one(); // β(ē1,ē2,ē1)
            v
        };
        c = CochainPair::from_coords(f, 1, 2, 1, &coords).unwrap();
        let e = build_extension(&rep, &c).unwrap();
        let h = LyAlgebra::heisenberg(f, 1).unwrap();
        assert_eq!(e.total().binary_tensor(), h.binary_tensor());
        assert_eq!(e.total().ternary_tensor(), h.ternary_tensor());
        let back = from_total(e.total(), &e.ideal()).unwrap();
        assert_eq!(back.rep(), &rep);
        assert_eq!(back.cocycle(), &c);
    }

    #[test]
    fn split_case_and_shift() {
        let f = q();
        let h = LyAlgebra::heisenberg(f, 1).unwrap();
        let ad = Representation::adjoint(&h);
        let e = build_extension(&ad, &CochainPair::zero(f, 1, 3, 3)).unwrap();
        assert_eq!(e.total(), &ad.semidirect());
        assert!(e.total().check_axioms().passes());
        let mut t = e.section().clone();
        t.set(3, 0, f.int(2));
        t.set(5, 1, f.int(-1));
        let lam = section_shift_witness(&e, &t).unwrap();
        assert!(!lam.is_zero());
        assert!(section_shift_witness(&e, e.section()).unwrap().is_zero());
    }

    #[test]
    fn heisenberg_section_shift() {
        let f = q();
        let e = central_extension(&LyAlgebra::heisenberg(f, 1).unwrap()).unwrap();
        let mut t = e.section().clone();
        t.set(2, 0, f.one());
        let lam = section_shift_witness(&e, &t).unwrap();
        assert_eq!(lam.get(0, 0), &f.int(-1));
    }

    #[test]
    fn equivalence_round_trip() {
        let f = q();
        let e = central_extension(&LyAlgebra::heisenberg(f, 1).unwrap()).unwrap();
        assert!(are_equivalent(&e, &e).unwrap().unwrap().is_identity());
        // trivial rep over an abelian base: δ vanishes, so a different class is never equivalent
        let other = build_extension(e.rep(), &e.cocycle().scale(&f.int(2))).unwrap();
        assert!(are_equivalent(&e, &other).unwrap().is_none());

        let ad = Representation::adjoint(&LyAlgebra::heisenberg(f, 1).unwrap());
        let lam0 = Matrix::from_ints(f, &[vec![1, 0, 2], vec![0, 3, 0], vec![1, 1, 1]]);
        let split = build_extension(&ad, &CochainPair::zero(f, 1, 3, 3)).unwrap();
        let shifted = build_extension(&ad, &delta_zero(&ad, &lam0).unwrap()).unwrap();
        let phi = are_equivalent(&split, &shifted).unwrap().unwrap();
        assert!(split.total().is_morphism(shifted.total(), &phi).unwrap());
    }

    #[test]
    fn abelian_center_is_everything() {
        let f = q();
        let e = central_extension(&LyAlgebra::abelian(f, 2)).unwrap();
        assert_eq!((e.n(), e.m()), (0, 2));
    }
}
