//! Lifting automorphism pairs `(φ, ψ) ∈ Aut(V) × Aut(L)` to automorphisms of
//! the total algebra, the Wells obstruction, and `Aut^{V,L}(L̃) ≅ H¹(L,V)`.

use serde::Serialize;

use crate::cohomology::{delta_zero, CoboundarySolver, CochainPair};
use crate::error::{precondition, shape, Error, Result};
use crate::extension::AbelianExtension;
use crate::linalg::Matrix;

/// `φ` acts on `V` (any invertible matrix, `V` being abelian); `ψ` is an automorphism of the base.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct AutPair {
    pub phi: Matrix,
    pub psi: Matrix,
}

impl AutPair {
    pub fn new(phi: Matrix, psi: Matrix) -> AutPair {
        AutPair { phi, psi }
    }

    pub fn identity(e: &AbelianExtension) -> AutPair {
        AutPair {
            phi: Matrix::identity(e.field(), e.m()),
            psi: Matrix::identity(e.field(), e.n()),
        }
    }

    /// Shapes, invertibility, and `ψ ∈ Aut(L)`.
    pub fn validate(&self, e: &AbelianExtension) -> Result<()> {
        if (self.phi.rows(), self.phi.cols()) != (e.m(), e.m()) || (self.psi.rows(), self.psi.cols()) != (e.n(), e.n()) {
            return Err(shape(format!(
                "pair must be ({m}x{m}, {n}x{n})",
                m = e.m(),
                n = e.n()
            )));
        }
        if self.phi.field() != e.field() || self.psi.field() != e.field() {
            return Err(shape("pair lives over a different field"));
        }
        if !self.phi.is_invertible() {
            return Err(precondition("phi is not invertible"));
        }
        if !e.base().is_automorphism(&self.psi)? {
            return Err(precondition("psi is not an automorphism of the base"));
        }
        Ok(())
    }

    pub fn compose(&self, other: &AutPair) -> AutPair {
        AutPair {
            phi: self.phi.mul(&other.phi),
            psi: self.psi.mul(&other.psi),
        }
    }
}

/// Membership of an automorphism `γ` of the total algebra in the lift subgroups.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AutClassification {
    /// `γ(V) = V`.
    pub in_aut_v: bool,
    /// `τ(γ) = (γ|_V, p γ s)` when `γ(V) = V`.
    pub pair: Option<AutPair>,
    /// `γ̄ = id`.
    pub in_aut_v_l: bool,
    /// `γ|_V = id`.
    pub in_aut_upper_v: bool,
    /// Both.
    pub in_aut_vl: bool,
}

pub fn classify_automorphism(e: &AbelianExtension, gamma: &Matrix) -> Result<AutClassification> {
    let nn = e.total_dim();
    if (gamma.rows(), gamma.cols()) != (nn, nn) {
        return Err(shape("gamma must be square of the total dimension"));
    }
    if !gamma.is_invertible() || !e.total().is_morphism(e.total(), gamma)? {
        return Err(precondition("gamma is not an automorphism of the total algebra"));
    }
    Ok(classify_unchecked(e, gamma))
}

pub(crate) fn classify_unchecked(e: &AbelianExtension, gamma: &Matrix) -> AutClassification {
    let gi = gamma.mul(e.inclusion());
    let in_aut_v = e.projection().mul(&gi).is_zero();
    if !in_aut_v {
        return AutClassification {
            in_aut_v,
            pair: None,
            in_aut_v_l: false,
            in_aut_upper_v: false,
            in_aut_vl: false,
        };
    }
    let pair = tau_unchecked(e, gamma);
    let base_id = pair.psi.is_identity();
    let fibre_id = pair.phi.is_identity();
    AutClassification {
        in_aut_v,
        pair: Some(pair),
        in_aut_v_l: base_id,
        in_aut_upper_v: fibre_id,
        in_aut_vl: base_id && fibre_id,
    }
}

/// `τ(γ) = (r γ i, p γ s)` for `γ` preserving `V`.
pub(crate) fn tau_unchecked(e: &AbelianExtension, gamma: &Matrix) -> AutPair {
    AutPair {
        phi: e.retraction().mul(gamma).mul(e.inclusion()),
        psi: e.projection().mul(gamma).mul(e.section()),
    }
}

/// `φρ(a)φ⁻¹ = ρ(ψa)` and likewise for `D`, `θ`.
pub fn is_compatible(e: &AbelianExtension, pr: &AutPair) -> Result<bool> {
    pr.validate(e)?;
    Ok(compatible_unchecked(e, pr))
}

pub(crate) fn compatible_unchecked(e: &AbelianExtension, pr: &AutPair) -> bool {
    let twisted = e.rep().twist_unchecked(&pr.psi);
    e.rep().is_morphism_to(&twisted, &pr.phi).expect("shapes validated")
}

/// `(φα(ψ⁻¹·,ψ⁻¹·) − α, φβ(ψ⁻¹·,ψ⁻¹·,ψ⁻¹·) − β)`.
pub fn wells_cocycle(e: &AbelianExtension, pr: &AutPair) -> Result<CochainPair> {
    if !is_compatible(e, pr)? {
        return Err(precondition("pair is not compatible"));
    }
    Ok(wells_cocycle_unchecked(e, pr))
}

pub(crate) fn wells_cocycle_unchecked(e: &AbelianExtension, pr: &AutPair) -> CochainPair {
    let psi_inv = pr.psi.invert().expect("psi invertible");
    e.cocycle()
        .compose_inputs(&psi_inv)
        .compose_output(&pr.phi)
        .sub(e.cocycle())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WellsClass {
    pub trivial: bool,
    /// Some `λ` with `δλ` equal to the Wells cocycle.
    pub witness: Option<Matrix>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NotInducible {
    Incompatible,
    NontrivialClass,
}

impl std::fmt::Display for NotInducible {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            NotInducible::Incompatible => "incompatible",
            NotInducible::NontrivialClass => "nontrivial_class",
        })
    }
}

/// `γ(v + s(a)) = φ(v) + λ(ψa) + sψ(a)`, with `λ` the Wells witness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LiftCertificate {
    pub gamma: Matrix,
    pub lambda: Matrix,
}

/// Holds an extension together with a reusable coboundary solver for many pair queries.
#[derive(Clone, Debug)]
pub struct Inducibility {
    ext: AbelianExtension,
    solver: CoboundarySolver,
}

impl Inducibility {
    pub fn new(ext: &AbelianExtension) -> Inducibility {
        Inducibility {
            solver: CoboundarySolver::new(ext.rep()),
            ext: ext.clone(),
        }
    }

    pub fn extension(&self) -> &AbelianExtension {
        &self.ext
    }

    pub fn h1_dim(&self) -> usize {
        self.solver.h1_dim()
    }

    pub fn wells_class(&self, pr: &AutPair) -> Result<WellsClass> {
        if !is_compatible(&self.ext, pr)? {
            return Err(precondition("pair is not compatible"));
        }
        Ok(self.wells_class_unchecked(pr))
    }

    fn wells_class_unchecked(&self, pr: &AutPair) -> WellsClass {
        let c = wells_cocycle_unchecked(&self.ext, pr);
        let witness = self.solver.solve(&c).expect("shapes agree");
        WellsClass {
            trivial: witness.is_some(),
            witness,
        }
    }

    /// A verified lift of `pr`, or the reason none exists.
    pub fn decide(&self, pr: &AutPair) -> Result<std::result::Result<LiftCertificate, NotInducible>> {
        pr.validate(&self.ext)?;
        if !compatible_unchecked(&self.ext, pr) {
            return Ok(Err(NotInducible::Incompatible));
        }
        let class = self.wells_class_unchecked(pr);
        let Some(lambda) = class.witness else {
            return Ok(Err(NotInducible::NontrivialClass));
        };
        let e = &self.ext;
        let gamma = e
            .inclusion()
            .mul(&pr.phi)
            .mul(e.retraction())
            .add(&e.inclusion().mul(&lambda).add(e.section()).mul(&pr.psi).mul(e.projection()));
        let cert = LiftCertificate { gamma, lambda };
        self.verify(pr, &cert)?;
        Ok(Ok(cert))
    }

    /// Checks that the certificate is an automorphism preserving `V` with `τ(γ) = (φ, ψ)`.
    pub fn verify(&self, pr: &AutPair, cert: &LiftCertificate) -> Result<()> {
        let e = &self.ext;
        if !cert.gamma.is_invertible() || !e.total().is_morphism(e.total(), &cert.gamma)? {
            return Err(Error::Internal("lift is not an automorphism of the total algebra".into()));
        }
        let cls = classify_unchecked(e, &cert.gamma);
        if cls.pair.as_ref() != Some(pr) {
            return Err(Error::Internal("lift does not restrict to the requested pair".into()));
        }
        if !compatible_unchecked(e, pr) {
            return Err(Error::Internal("inducible pair failed the compatibility test".into()));
        }
        Ok(())
    }

    /// `λ₁(φ) = [(φα − α, φβ − β)]` for `φ` with `(φ, 1)` compatible.
    pub fn lambda1(&self, phi: &Matrix) -> Result<WellsClass> {
        self.wells_class(&AutPair::new(phi.clone(), Matrix::identity(self.ext.field(), self.ext.n())))
    }

    /// `λ₂(ψ) = [(α(ψ⁻¹,ψ⁻¹) − α, β(ψ⁻¹,ψ⁻¹,ψ⁻¹) − β)]` for `ψ` with `(1, ψ)` compatible.
    pub fn lambda2(&self, psi: &Matrix) -> Result<WellsClass> {
        self.wells_class(&AutPair::new(Matrix::identity(self.ext.field(), self.ext.m()), psi.clone()))
    }
}

pub fn wells_class(e: &AbelianExtension, pr: &AutPair) -> Result<WellsClass> {
    Inducibility::new(e).wells_class(pr)
}

pub fn decide_inducible(
    e: &AbelianExtension,
    pr: &AutPair,
) -> Result<std::result::Result<LiftCertificate, NotInducible>> {
    Inducibility::new(e).decide(pr)
}

/// `γ = I + i λ p`, an element of `Aut^{V,L}` for `δ`-closed `λ`.
pub fn h1_aut_iso(e: &AbelianExtension, lam: &Matrix) -> Result<Matrix> {
    if (lam.rows(), lam.cols()) != (e.m(), e.n()) {
        return Err(shape("lambda must be m x n"));
    }
    if !delta_zero(e.rep(), lam)?.is_zero() {
        return Err(precondition("lambda is not a 1-cocycle"));
    }
    let f = e.field();
    let gamma = Matrix::identity(f, e.total_dim()).add(&e.inclusion().mul(lam).mul(e.projection()));
    if !e.total().is_morphism(e.total(), &gamma)? {
        return Err(Error::Internal("1-cocycle did not give an automorphism".into()));
    }
    Ok(gamma)
}

/// `χ(γ)(a) = γ s(a) − s(a)` in V-coordinates.
pub fn chi(e: &AbelianExtension, gamma: &Matrix) -> Result<Matrix> {
    let cls = classify_automorphism(e, gamma)?;
    if !cls.in_aut_vl {
        return Err(precondition("gamma does not fix V and the base pointwise"));
    }
    Ok(e.retraction().mul(gamma).mul(e.section()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::LyAlgebra;
    use crate::extension::{build_extension, central_extension};
    use crate::representation::Representation;
    use crate::scalar::FieldSpec;

    fn h1_ext(f: FieldSpec) -> AbelianExtension {
        central_extension(&LyAlgebra::heisenberg(f, 1).unwrap()).unwrap()
    }

    #[test]
    fn identity_pair() {
        let f = FieldSpec::Rational;
        let e = h1_ext(f);
        let id = AutPair::identity(&e);
        assert!(wells_cocycle(&e, &id).unwrap().is_zero());
        let cert = decide_inducible(&e, &id).unwrap().unwrap();
        assert!(cert.gamma.is_identity());
        let cls = classify_automorphism(&e, &cert.gamma).unwrap();
        assert!(cls.in_aut_vl && cls.in_aut_v_l && cls.in_aut_upper_v);
    }

    #[test]
    fn scaling_pair_lifts() {
        let f = FieldSpec::Rational;
        let e = h1_ext(f);
        let k = f.int(5);
        let pr = AutPair::new(
            Matrix::diagonal(f, &[k.clone()]),
            Matrix::diagonal(f, &[f.one(), k.clone()]),
        );
        let cert = decide_inducible(&e, &pr).unwrap().unwrap();
        assert_eq!(cert.gamma, Matrix::diagonal(f, &[f.one(), k.clone(), k]));
    }

    #[test]
    fn obstructed_pairs() {
        let f = FieldSpec::Rational;
        let e = h1_ext(f);
        let pr = AutPair::new(Matrix::identity(f, 1), Matrix::diagonal(f, &[f.int(2), f.int(2)]));
        assert_eq!(decide_inducible(&e, &pr).unwrap(), Err(NotInducible::NontrivialClass));
        let swap = AutPair::new(Matrix::identity(f, 1), Matrix::from_ints(f, &[vec![0, 1], vec![1, 0]]));
        assert_eq!(wells_cocycle(&e, &swap).unwrap().even().at(&[0, 1]), &[f.int(-2)]);
        assert!(!wells_class(&e, &swap).unwrap().trivial);
        let ind = Inducibility::new(&e);
        assert!(!ind.lambda1(&Matrix::diagonal(f, &[f.int(3)])).unwrap().trivial);
        assert!(ind.lambda1(&Matrix::identity(f, 1)).unwrap().trivial);
    }

    #[test]
    fn h1_isomorphism() {
        let f = FieldSpec::Rational;
        let e = h1_ext(f);
        let lam = Matrix::from_ints(f, &[vec![1, 0]]);
        let g = h1_aut_iso(&e, &lam).unwrap();
        assert_eq!(g.get(2, 0), &f.one());
        assert_eq!(chi(&e, &g).unwrap(), lam);
        let lam2 = Matrix::from_ints(f, &[vec![0, 3]]);
        let g2 = h1_aut_iso(&e, &lam2).unwrap();
        assert_eq!(h1_aut_iso(&e, &lam.add(&lam2)).unwrap(), g.mul(&g2));
    }

    #[test]
    fn split_adjoint_incompatible_scaling() {
        let f = FieldSpec::Rational;
        let h = LyAlgebra::heisenberg(f, 1).unwrap();
        let ad = Representation::adjoint(&h);
        let e = build_extension(&ad, &CochainPair::zero(f, 1, 3, 3)).unwrap();
        let psi = Matrix::diagonal(f, &[f.one(), f.int(2), f.int(2)]);
        let pr = AutPair::new(Matrix::identity(f, 3), psi.clone());
        assert!(!is_compatible(&e, &pr).unwrap());
        assert_eq!(decide_inducible(&e, &pr).unwrap(), Err(NotInducible::Incompatible));
        // φ = ψ is compatible for the adjoint representation and lifts on a split extension
        let pr = AutPair::new(psi.clone(), psi);
        assert!(decide_inducible(&e, &pr).unwrap().is_ok());
    }
}
