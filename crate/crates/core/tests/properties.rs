use std::sync::OnceLock;

use lyat_core::cohomology::{delta_pair, delta_star, delta_zero, h23, is_cocycle23, CochainPair};
use lyat_core::extension::{build_extension, build_extension_raw, from_total, section_shift_witness};
use lyat_core::nilpotent::{Poly, Var};
use lyat_core::representation::Representation;
use lyat_core::sample;
use lyat_core::{FieldSpec, LyAlgebra, Matrix, Scalar, SubspaceBasis};
use proptest::prelude::*;
use rand::Rng;
use std::sync::Arc;

fn f3() -> FieldSpec {
    FieldSpec::prime(3).unwrap()
}

fn pool(field: FieldSpec) -> Vec<Representation> {
    let mut r = sample::rng(2024);
    sample::valid_representations(field, &mut r, 3, 2, 24)
}

fn reps(field: FieldSpec) -> &'static [Representation] {
    static Q: OnceLock<Vec<Representation>> = OnceLock::new();
    static P: OnceLock<Vec<Representation>> = OnceLock::new();
    if field.is_prime_field() {
        P.get_or_init(|| pool(f3()))
    } else {
        Q.get_or_init(|| pool(FieldSpec::Rational))
    }
}

fn field_of(flag: bool) -> FieldSpec {
    if flag {
        f3()
    } else {
        FieldSpec::Rational
    }
}

/// A random cocycle: a random combination of `H^(2,3)` representatives plus a coboundary.
fn random_cocycle(rep: &Representation, rng: &mut sample::SampleRng) -> CochainPair {
    let f = rep.field();
    let g = h23(rep).unwrap();
    let lam = sample::matrix(f, rng, rep.vdim(), rep.n(), 3);
    let mut c = delta_zero(rep, &lam).unwrap();
    for h in &g.h_representatives {
        let k = sample::scalar(f, rng, 2);
        let rep_pair = CochainPair::from_coords(f, 1, rep.n(), rep.vdim(), h.as_slice()).unwrap();
        c = c.add(&rep_pair.scale(&k));
    }
    c
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn complex_squares_to_zero(seed in any::<u64>(), prime in any::<bool>()) {
        let f = field_of(prime);
        let rs = reps(f);
        let mut rng = sample::rng(seed);
        let rep = &rs[rng.gen_range(0..rs.len())];
        let lam = sample::matrix(f, &mut rng, rep.vdim(), rep.n(), 4);
        let d = delta_zero(rep, &lam).unwrap();
        prop_assert!(delta_pair(rep, &d).unwrap().is_zero());
        prop_assert!(delta_star(rep, &d).unwrap().is_zero());
    }

    #[test]
    fn coboundary_is_linear(seed in any::<u64>(), prime in any::<bool>()) {
        let f = field_of(prime);
        let rs = reps(f);
        let mut rng = sample::rng(seed);
        let rep = &rs[rng.gen_range(0..rs.len())];
        let (n, m) = (rep.n(), rep.vdim());
        let a = sample::cochain_pair(f, &mut rng, 1, n, m, 3);
        let b = sample::cochain_pair(f, &mut rng, 1, n, m, 3);
        let k = sample::scalar(f, &mut rng, 5);
        let lhs = delta_pair(rep, &a.add(&b.scale(&k))).unwrap();
        let rhs = delta_pair(rep, &a).unwrap().add(&delta_pair(rep, &b).unwrap().scale(&k));
        prop_assert_eq!(lhs, rhs);
        let l1 = sample::matrix(f, &mut rng, m, n, 3);
        let l2 = sample::matrix(f, &mut rng, m, n, 3);
        let lhs = delta_zero(rep, &l1.add(&l2.scale(&k))).unwrap();
        let rhs = delta_zero(rep, &l1).unwrap().add(&delta_zero(rep, &l2).unwrap().scale(&k));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn cocycle_iff_total_satisfies_axioms(seed in any::<u64>(), prime in any::<bool>(), closed in any::<bool>()) {
        let f = field_of(prime);
        let rs = reps(f);
        let mut rng = sample::rng(seed);
        let rep = &rs[rng.gen_range(0..rs.len())];
        let c = if closed {
            random_cocycle(rep, &mut rng)
        } else {
            sample::cochain_pair(f, &mut rng, 1, rep.n(), rep.vdim(), 2)
        };
        let e = build_extension_raw(rep, &c).unwrap();
        prop_assert_eq!(e.total().check_axioms().passes(), is_cocycle23(rep, &c).unwrap());
        if closed {
            prop_assert!(is_cocycle23(rep, &c).unwrap());
        }
    }

    #[test]
    fn extension_round_trips_through_total(seed in any::<u64>(), prime in any::<bool>()) {
        let f = field_of(prime);
        let rs = reps(f);
        let mut rng = sample::rng(seed);
        let rep = &rs[rng.gen_range(0..rs.len())];
        let c = random_cocycle(rep, &mut rng);
        let e = build_extension(rep, &c).unwrap();
        let back = from_total(e.total(), &e.ideal()).unwrap();
        prop_assert_eq!(back.rep(), rep);
        prop_assert_eq!(back.cocycle(), &c);
    }

    #[test]
    fn induced_data_is_section_independent_up_to_coboundary(seed in any::<u64>(), prime in any::<bool>()) {
        let f = field_of(prime);
        let rs = reps(f);
        let mut rng = sample::rng(seed);
        let rep = &rs[rng.gen_range(0..rs.len())];
        let e = build_extension(rep, &random_cocycle(rep, &mut rng)).unwrap();
        let (n, m) = (e.n(), e.m());
        let mu = sample::matrix(f, &mut rng, m, n, 3);
        let t = e.section().add(&e.inclusion().mul(&mu));
        let lam = section_shift_witness(&e, &t).unwrap();
        prop_assert_eq!(lam, mu.scale(&Scalar::from_i64(f, -1)));
        // Move the section into the coordinates: Q = [t | i] makes t the canonical section.
        let q = t.hstack(e.inclusion());
        let moved = e.total().change_basis(&q).unwrap();
        let v = SubspaceBasis::span(f, n + m, &e.ideal().vectors().to_vec()).unwrap();
        let other = from_total(&moved, &v).unwrap();
        prop_assert_eq!(other.rep(), e.rep());
    }

    #[test]
    fn representation_iff_semidirect(seed in any::<u64>(), corrupt in any::<bool>()) {
        let f = f3();
        let rs = reps(f);
        let mut rng = sample::rng(seed);
        let rep = &rs[rng.gen_range(0..rs.len())];
        let cand = if corrupt { corrupted(rep, &mut rng) } else { rep.clone() };
        prop_assert_eq!(cand.check().passes(), cand.semidirect().check_axioms().passes());
    }

    #[test]
    fn poly_eval_is_a_ring_map(seed in any::<u64>()) {
        let f = FieldSpec::Rational;
        let mut rng = sample::rng(seed);
        let vars = Arc::new(vec![Var::Psi(1, 1), Var::Psi(1, 2), Var::Kappa]);
        let rand_poly = |rng: &mut sample::SampleRng| {
            let mut p = Poly::zero(f, vars.clone());
            for _ in 0..4 {
                let mono = (0..3).map(|_| rng.gen_range(0..3u32)).collect();
                p.add_term(lyat_core::nilpotent::Monomial(mono), sample::scalar(f, rng, 5));
            }
            p
        };
        let (p, q) = (rand_poly(&mut rng), rand_poly(&mut rng));
        let pt = sample::vector(f, &mut rng, 3, 4);
        let (ep, eq) = (p.eval(&pt).unwrap(), q.eval(&pt).unwrap());
        prop_assert_eq!(p.mul(&q).eval(&pt).unwrap(), &ep * &eq);
        prop_assert_eq!(p.add(&q).eval(&pt).unwrap(), &ep + &eq);
        let terms: Vec<_> = p.terms().map(|(m, _)| m.clone()).collect();
        prop_assert!(terms.windows(2).all(|w| w[0] > w[1]));
    }
}

/// Adds a random nonzero scalar to one entry of one structure map.
pub fn corrupted(rep: &Representation, rng: &mut sample::SampleRng) -> Representation {
    let f = rep.field();
    let m = rep.vdim();
    let mut rho = rep.rho_all().to_vec();
    let mut d = rep.d_all().to_vec();
    let mut theta = rep.theta_all().to_vec();
    let bump = |mats: &mut Vec<Matrix>, rng: &mut sample::SampleRng| {
        let which = rng.gen_range(0..mats.len());
        let (r, c) = (rng.gen_range(0..m), rng.gen_range(0..m));
        let v = mats[which].get(r, c) + &Scalar::one(f);
        mats[which].set(r, c, v);
    };
    match rng.gen_range(0..3) {
        0 => bump(&mut rho, rng),
        1 => bump(&mut d, rng),
        _ => bump(&mut theta, rng),
    }
    Representation::new(rep.algebra().clone(), m, rho, d, theta).unwrap()
}

#[test]
fn heisenberg_axioms_hold_and_center_is_abelian_ideal() {
    for f in [FieldSpec::Rational, f3()] {
        for n in 1..=2 {
            for l in [LyAlgebra::heisenberg(f, n).unwrap(), LyAlgebra::generalized_heisenberg(f, n).unwrap()] {
                assert!(l.check_axioms().passes());
                let z = l.center();
                assert!(l.ideal_tests(&z).unwrap().is_abelian_ideal);
                let (q, _) = l.quotient(&z).unwrap();
                assert!(q.is_abelian());
            }
        }
    }
}
