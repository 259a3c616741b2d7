//! Seeded random objects for property sweeps and cross-checks.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::LyAlgebra;
use crate::cohomology::{pair_spaces, CochainPair};
use crate::linalg::{Matrix, SubspaceBasis, Vector};
use crate::representation::Representation;
use crate::scalar::{FieldSpec, Scalar};

pub type SampleRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform residue over `𝔽_p`; an integer in `[-bound, bound]` over `ℚ`.
pub fn scalar(field: FieldSpec, rng: &mut SampleRng, bound: i64) -> Scalar {
    match field.modulus() {
        Some(p) => Scalar::from_i64(field, rng.gen_range(0..p as i64)),
        None => Scalar::from_i64(field, rng.gen_range(-bound..=bound)),
    }
}

pub fn vector(field: FieldSpec, rng: &mut SampleRng, len: usize, bound: i64) -> Vector {
    (0..len).map(|_| scalar(field, rng, bound)).collect()
}

pub fn matrix(field: FieldSpec, rng: &mut SampleRng, rows: usize, cols: usize, bound: i64) -> Matrix {
    let data: Vec<Vector> = (0..rows).map(|_| vector(field, rng, cols, bound)).collect();
    Matrix::from_rows_with_cols(field, &data, cols).expect("rectangular")
}

pub fn invertible(field: FieldSpec, rng: &mut SampleRng, n: usize, bound: i64) -> Matrix {
    loop {
        let m = matrix(field, rng, n, n, bound);
        if m.is_invertible() {
            return m;
        }
    }
}

/// A level-`level` pair from uniformly random canonical coordinates.
pub fn cochain_pair(field: FieldSpec, rng: &mut SampleRng, level: usize, n: usize, m: usize, bound: i64) -> CochainPair {
    let (e, o) = pair_spaces(level, n, m);
    let coords = vector(field, rng, e.dim() + o.dim(), bound);
    CochainPair::from_coords(field, level, n, m, &coords).expect("coordinate count")
}

/// Small algebras that pass the axioms, with `dim ≤ max_dim`.
pub fn algebra_zoo(field: FieldSpec, max_dim: usize) -> Vec<LyAlgebra> {
    let mut out = vec![LyAlgebra::abelian(field, 1), LyAlgebra::abelian(field, 2)];
    let push = |out: &mut Vec<LyAlgebra>, a: crate::Result<LyAlgebra>| {
        if let Ok(a) = a {
            out.push(a);
        }
    };
    push(&mut out, LyAlgebra::heisenberg(field, 1));
    push(&mut out, LyAlgebra::generalized_heisenberg(field, 1));
    push(&mut out, cross_product_lie(field));
    push(&mut out, triple_system_from_cross(field));
    out.retain(|a| a.dim() <= max_dim);
    out
}

/// `ℝ³` with the cross product as a Lie algebra and zero ternary bracket.
fn cross_product_lie(field: FieldSpec) -> crate::Result<LyAlgebra> {
    let names = crate::algebra::default_names(3);
    let mut b = LyAlgebra::builder(field, names);
    let u = |i| crate::linalg::unit_vec(field, 3, i);
    b.set_binary(0, 1, u(2))?;
    b.set_binary(1, 2, u(0))?;
    b.set_binary(2, 0, u(1))?;
    let a = b.build();
    if a.check_axioms().passes() {
        Ok(a)
    } else {
        Err(crate::Error::Invalid("cross product algebra failed the axioms".into()))
    }
}

/// The cross product Lie algebra viewed through `{x,y,z} = [[x,y],z]` with zero binary bracket.
fn triple_system_from_cross(field: FieldSpec) -> crate::Result<LyAlgebra> {
    let lie = cross_product_lie(field)?;
    let n: usize = 3;
    let mut ternary = Vec::with_capacity(n.pow(4));
    for i in 0..n {
        for j in 0..n {
            let ij = lie.bracket_basis(i, j).to_vec();
            for k in 0..n {
                let ek = crate::linalg::unit_vec(field, n, k);
                ternary.extend(lie.bracket(&ij, &ek));
            }
        }
    }
    let a = LyAlgebra::from_tensors(
        field,
        crate::algebra::default_names(n),
        vec![Scalar::zero(field); n.pow(3)],
        ternary,
    )?;
    if a.check_axioms().passes() {
        Ok(a)
    } else {
        Err(crate::Error::Invalid("triple system failed the axioms".into()))
    }
}

/// `φ ρ(·) φ⁻¹` and likewise for `D`, `θ`.
pub fn conjugate(rep: &Representation, p: &Matrix) -> Representation {
    let pinv = p.invert().expect("invertible conjugator");
    let conj = |ms: &[Matrix]| ms.iter().map(|m| p.mul(m).mul(&pinv)).collect::<Vec<_>>();
    Representation::new(
        rep.algebra().clone(),
        rep.vdim(),
        conj(rep.rho_all()),
        conj(rep.d_all()),
        conj(rep.theta_all()),
    )
    .expect("shapes preserved")
}

/// Block sum of two representations of the same algebra.
pub fn direct_sum(a: &Representation, b: &Representation) -> Representation {
    let (ma, mb) = (a.vdim(), b.vdim());
    let f = a.field();
    let sum = |x: &Matrix, y: &Matrix| {
        let top = x.hstack(&Matrix::zeros(f, ma, mb));
        let bottom = Matrix::zeros(f, mb, ma).hstack(y);
        top.vstack(&bottom)
    };
    let zip = |xs: &[Matrix], ys: &[Matrix]| xs.iter().zip(ys).map(|(x, y)| sum(x, y)).collect::<Vec<_>>();
    Representation::new(
        a.algebra().clone(),
        ma + mb,
        zip(a.rho_all(), b.rho_all()),
        zip(a.d_all(), b.d_all()),
        zip(a.theta_all(), b.theta_all()),
    )
    .expect("shapes agree")
}

/// Representations induced on abelian ideals spanned by trailing coordinate vectors.
fn ideal_reps(total: &LyAlgebra) -> Vec<Representation> {
    let f = total.field();
    let n = total.dim();
    let mut out = Vec::new();
    for k in 1..n {
        let vs: Vec<Vector> = (n - k..n).map(|i| crate::linalg::unit_vec(f, n, i)).collect();
        let w = SubspaceBasis::span(f, n, &vs).expect("ambient matches");
        if let Ok(e) = crate::extension::from_total(total, &w) {
            out.push(e.rep().clone());
        }
    }
    out
}

/// Representations that satisfy R1–R6, with `dim L ≤ max_n` and `dim V ≤ max_m`.
///
/// Sources: adjoint and trivial representations, representations induced on
/// abelian ideals, direct sums, conjugates and twists by known automorphisms.
pub fn valid_representations(field: FieldSpec, rng: &mut SampleRng, max_n: usize, max_m: usize, count: usize) -> Vec<Representation> {
    let mut pool: Vec<Representation> = Vec::new();
    let mut totals = algebra_zoo(field, max_n + max_m);
    if let Ok(h) = LyAlgebra::heisenberg(field, 2) {
        totals.push(h);
    }
    for a in &totals {
        if a.dim() <= max_n {
            pool.push(Representation::adjoint(a));
            for m in 1..=max_m {
                pool.push(Representation::trivial(a, m));
            }
        }
        pool.extend(ideal_reps(a));
    }
    pool.retain(|r| r.n() <= max_n && r.vdim() <= max_m && r.vdim() > 0 && r.n() > 0);
    let base = pool.clone();
    for r in &base {
        for s in &base {
            if r.algebra() == s.algebra() && r.vdim() + s.vdim() <= max_m {
                pool.push(direct_sum(r, s));
            }
        }
    }
    let mut out = Vec::with_capacity(count);
    let mut i = 0usize;
    while out.len() < count {
        let r = &pool[i % pool.len()];
        i += 1;
        let p = invertible(field, rng, r.vdim(), 3);
        let mut c = conjugate(r, &p);
        let psi = invertible(field, rng, r.n(), 2);
        if r.algebra().is_automorphism(&psi).unwrap_or(false) {
            c = c.twist(&psi).expect("automorphism");
        }
        debug_assert!(c.check().passes());
        out.push(c);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zoo_and_reps_are_valid() {
        for f in [FieldSpec::Rational, FieldSpec::prime(3).unwrap()] {
            for a in algebra_zoo(f, 4) {
                assert!(a.check_axioms().passes());
            }
            let mut r = rng(7);
            let reps = valid_representations(f, &mut r, 4, 2, 30);
            assert_eq!(reps.len(), 30);
            for rep in &reps {
                assert!(rep.check().passes());
            }
            assert!(reps.iter().any(|r| !r.is_trivial()));
        }
    }
}
