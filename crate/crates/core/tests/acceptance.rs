//! Acceptance suite: one line per criterion, nonzero exit if any fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::time::{Duration, Instant};

use lyat_core::cohomology::{delta_pair, delta_star, delta_zero, h23, is_cocycle23, CochainPair};
use lyat_core::enumeration::{compare_inducibility, enumerate_lift_subgroups, verify_exact_sequences, EnumBudget};
use lyat_core::extension::{build_extension, central_extension, from_total, section_shift_witness, AbelianExtension};
use lyat_core::inducibility::{decide_inducible, AutPair};
use lyat_core::io::to_pretty;
use lyat_core::nilpotent::{
    crosscheck, direct_check, evaluate_relations, generate_relations, heisenberg_family, Poly, RelationSet, Var,
};
use lyat_core::representation::Representation;
use lyat_core::sample::{self, SampleRng};
use lyat_core::{FieldSpec, LyAlgebra, Scalar, SubspaceBasis};
use rand::Rng;
use std::sync::Arc;

type Outcome = Result<String, String>;

fn fp(p: u32) -> FieldSpec {
    FieldSpec::prime(p).unwrap()
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn secs(d: Duration) -> String {
    format!("{:.2}s", d.as_secs_f64())
}

fn corrupt(rep: &Representation, rng: &mut SampleRng) -> Representation {
    let f = rep.field();
    let m = rep.vdim();
    let mut maps = [rep.rho_all().to_vec(), rep.d_all().to_vec(), rep.theta_all().to_vec()];
    let which = rng.gen_range(0..3);
    let slot = rng.gen_range(0..maps[which].len());
    let (r, c) = (rng.gen_range(0..m), rng.gen_range(0..m));
    let v = maps[which][slot].get(r, c) + &Scalar::one(f);
    maps[which][slot].set(r, c, v);
    let [rho, d, theta] = maps;
    Representation::new(rep.algebra().clone(), m, rho, d, theta).unwrap()
}

/// Extensions read off abelian ideals spanned by trailing coordinates, plus the center.
fn ideal_extensions(total: &LyAlgebra) -> Vec<AbelianExtension> {
    let f = total.field();
    let n = total.dim();
    let mut out: Vec<AbelianExtension> = Vec::new();
    let mut spaces = vec![total.center()];
    for k in 1..n {
        let vs: Vec<Vec<Scalar>> = (n - k..n).map(|i| lyat_core::linalg::unit_vec(f, n, i)).collect();
        spaces.push(SubspaceBasis::span(f, n, &vs).unwrap());
    }
    for v in spaces {
        if v.is_zero() || v.dim() == n {
            continue;
        }
        if let Ok(e) = from_total(total, &v) {
            if !out.contains(&e) {
                out.push(e);
            }
        }
    }
    out
}

fn random_cocycle(rep: &Representation, rng: &mut SampleRng) -> CochainPair {
    let f = rep.field();
    let g = h23(rep).unwrap();
    let lam = sample::matrix(f, rng, rep.vdim(), rep.n(), 3);
    let mut c = delta_zero(rep, &lam).unwrap();
    for h in &g.h_representatives {
        let k = sample::scalar(f, rng, 2);
        c = c.add(&CochainPair::from_coords(f, 1, rep.n(), rep.vdim(), h).unwrap().scale(&k));
    }
    c
}

/// Central extensions of `𝔥_1` and the 4-dimensional `𝔊_1` instances with `n + m ≤ 4`.
fn small_corpus(p: u32) -> Vec<(String, AbelianExtension)> {
    let f = fp(p);
    let mut out = vec![(
        "h1 central".to_string(),
        central_extension(&LyAlgebra::heisenberg(f, 1).unwrap()).unwrap(),
    )];
    let g1 = LyAlgebra::generalized_heisenberg(f, 1).unwrap();
    for (i, e) in ideal_extensions(&g1).into_iter().enumerate() {
        out.push((format!("G1 ideal #{i} (n={}, m={})", e.n(), e.m()), e));
    }
    out
}

fn split_corpus() -> Vec<(String, AbelianExtension)> {
    let f = fp(2);
    let h = LyAlgebra::heisenberg(f, 1).unwrap();
    let mut reps = vec![("adjoint".to_string(), Representation::adjoint(&h))];
    for m in 1..=2 {
        reps.push((format!("trivial m={m}"), Representation::trivial(&h, m)));
    }
    reps.into_iter()
        .map(|(name, r)| {
            let e = build_extension(&r, &CochainPair::zero(f, 1, r.n(), r.vdim())).unwrap();
            (format!("h1 ⋉ {name}"), e)
        })
        .collect()
}

fn c1_axioms() -> Outcome {
    let mut worst = Duration::ZERO;
    for n in 1..=3 {
        for (name, l) in [
            ("h", LyAlgebra::heisenberg(FieldSpec::Rational, n).unwrap()),
            ("G", LyAlgebra::generalized_heisenberg(FieldSpec::Rational, n).unwrap()),
        ] {
            let t = Instant::now();
            let rep = l.check_axioms();
            let dt = t.elapsed();
            worst = worst.max(dt);
            ensure(rep.passes(), format!("{name}_{n} fails {:?}", rep.failed_axioms()))?;
            ensure(dt < Duration::from_secs(30), format!("{name}_{n} took {}", secs(dt)))?;
        }
    }
    Ok(format!("h_n, G_n (n=1..3) pass LY1-LY6; slowest {}", secs(worst)))
}

fn c2_rep_iff_semidirect() -> Outcome {
    let f = fp(3);
    let t = Instant::now();
    let mut rng = sample::rng(2);
    let valid = sample::valid_representations(f, &mut rng, 3, 3, 200);
    let mut agree = 0;
    let mut invalid = 0;
    for (i, r) in valid.iter().enumerate() {
        let cand = if i % 2 == 1 { corrupt(r, &mut rng) } else { r.clone() };
        let a = cand.check().passes();
        invalid += !a as usize;
        agree += (a == cand.semidirect().check_axioms().passes()) as usize;
    }
    let dt = t.elapsed();
    ensure(agree == valid.len(), format!("{agree}/{} agree", valid.len()))?;
    ensure(dt < Duration::from_secs(60), format!("took {}", secs(dt)))?;
    Ok(format!("{agree}/{} agree ({invalid} invalid candidates) in {}", valid.len(), secs(dt)))
}

fn c3_complex() -> Outcome {
    let t = Instant::now();
    let mut total = 0;
    let mut reps_used = 0;
    for (seed, f) in [(3u64, FieldSpec::Rational), (4, fp(3))] {
        let mut rng = sample::rng(seed);
        let reps = sample::valid_representations(f, &mut rng, 3, 3, 24);
        reps_used += reps.len();
        for i in 0..500 {
            let r = &reps[i % reps.len()];
            let lam = sample::matrix(f, &mut rng, r.vdim(), r.n(), 5);
            let d = delta_zero(r, &lam).unwrap();
            ensure(delta_pair(r, &d).unwrap().is_zero(), format!("δδ ≠ 0 on sample {i} over {f}"))?;
            ensure(delta_star(r, &d).unwrap().is_zero(), format!("δ*δ ≠ 0 on sample {i} over {f}"))?;
            total += 1;
        }
    }
    let dt = t.elapsed();
    ensure(dt < Duration::from_secs(60), format!("took {}", secs(dt)))?;
    Ok(format!("{total} cochains over {reps_used} representations, all zero, {}", secs(dt)))
}

fn c4_induced_cocycles() -> Outcome {
    let mut corpus: Vec<AbelianExtension> = Vec::new();
    for f in [FieldSpec::Rational, fp(3)] {
        let mut rng = sample::rng(5);
        for r in sample::valid_representations(f, &mut rng, 3, 2, 12) {
            let c = random_cocycle(&r, &mut rng);
            corpus.push(build_extension(&r, &c).unwrap());
        }
        for n in 1..=2 {
            for l in [LyAlgebra::heisenberg(f, n).unwrap(), LyAlgebra::generalized_heisenberg(f, n).unwrap()] {
                corpus.push(central_extension(&l).unwrap());
                corpus.extend(ideal_extensions(&l));
            }
        }
    }
    let mut rng = sample::rng(6);
    let mut sections = 0;
    for (idx, e) in corpus.iter().enumerate() {
        ensure(is_cocycle23(e.rep(), e.cocycle()).unwrap(), format!("extension #{idx}: induced pair is not a cocycle"))?;
        for _ in 0..50 {
            let mu = sample::matrix(e.field(), &mut rng, e.m(), e.n(), 4);
            let t = e.section().add(&e.inclusion().mul(&mu));
            let lam = section_shift_witness(e, &t).map_err(|err| format!("extension #{idx}: {err}"))?;
            let d = delta_zero(e.rep(), &lam).unwrap();
            ensure(
                d == e.cocycle().sub(&e.cocycle_for_section(&t).unwrap()),
                format!("extension #{idx}: section shift identity fails"),
            )?;
            sections += 1;
        }
    }
    Ok(format!("{} extensions cocycles; {sections} alternative sections verified", corpus.len()))
}

fn c5_inducibility() -> Outcome {
    let t = Instant::now();
    let budget = EnumBudget::default();
    let mut lines = Vec::new();
    let mut pairs = 0;
    for p in [2, 3] {
        for (name, e) in small_corpus(p) {
            ensure(e.n() + e.m() <= 4, format!("{name} too large"))?;
            let rep = compare_inducibility(&e, &budget).map_err(|err| format!("{name}/F{p}: {err}"))?;
            ensure(rep.passes(), format!("{name}/F{p}: {} disagreements", rep.disagreements.len()))?;
            pairs += rep.pairs;
            lines.push(format!("{name}/F{p}: {}/{} inducible", rep.inducible, rep.pairs));
        }
    }
    let dt = t.elapsed();
    ensure(dt < Duration::from_secs(300), format!("took {}", secs(dt)))?;
    Ok(format!("{pairs} pairs, 100% agreement in {} [{}]", secs(dt), lines.join("; ")))
}

fn c6_wells_exactness() -> Outcome {
    let budget = EnumBudget::default();
    let mut n = 0;
    for p in [2, 3] {
        for (name, e) in small_corpus(p) {
            let rep = verify_exact_sequences(&e, &budget).map_err(|err| format!("{name}/F{p}: {err}"))?;
            ensure(rep.passes(), format!("{name}/F{p}: {rep:?}"))?;
            n += 1;
        }
    }
    let e = central_extension(&LyAlgebra::heisenberg(fp(3), 1).unwrap()).unwrap();
    let subs = enumerate_lift_subgroups(&e, &budget).map_err(|err| err.to_string())?;
    let vl = subs.aut_vl().len();
    let rep = verify_exact_sequences(&e, &budget).map_err(|err| err.to_string())?;
    ensure(vl == 9 && rep.h1_dim == 2, format!("h1/F3: |Aut^(V,L)| = {vl}, dim H1 = {}", rep.h1_dim))?;
    Ok(format!("{n} extensions exact; h1/F3 |Aut^(V,L)| = {vl} = 3^{}", rep.h1_dim))
}

fn c7_split_inducible() -> Outcome {
    let budget = EnumBudget::default();
    let mut parts = Vec::new();
    for (name, e) in split_corpus() {
        let rep = compare_inducibility(&e, &budget).map_err(|err| format!("{name}: {err}"))?;
        ensure(rep.passes(), format!("{name}: oracle disagreement"))?;
        let missing = rep.compatible - rep.inducible;
        ensure(missing == 0, format!("{name}: {missing} compatible pairs not inducible"))?;
        parts.push(format!("{name}: {}/{} compatible inducible", rep.inducible, rep.compatible));
    }
    Ok(format!("0 counterexamples [{}]", parts.join("; ")))
}

fn c8_factorizations() -> Outcome {
    let budget = EnumBudget::default();
    let mut parts = Vec::new();
    for (name, e) in split_corpus() {
        let rep = verify_exact_sequences(&e, &budget).map_err(|err| format!("{name}: {err}"))?;
        let s = rep.split.as_ref().ok_or(format!("{name}: not detected as split"))?;
        ensure(s.passes() && rep.passes(), format!("{name}: {s:?}"))?;
        parts.push(format!(
            "{name}: {}={}x{}, {}={}x{}",
            s.aut_v_l, s.aut_rep, s.aut_vl, s.aut_upper_v, s.aut_inv, s.aut_vl
        ));
    }
    Ok(format!("eta/eta' split [{}]", parts.join("; ")))
}

fn artifacts_dir() -> PathBuf {
    let d = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../artifacts");
    std::fs::create_dir_all(&d).unwrap();
    d.canonicalize().unwrap()
}

fn c9_block_condition_crosscheck() -> Outcome {
    let mut reports = Vec::new();
    let mut parts = Vec::new();
    for f in [FieldSpec::Rational, fp(5)] {
        for n in 1..=3 {
            let rep = crosscheck(f, n, 500, 9).map_err(|err| err.to_string())?;
            parts.push(format!(
                "{f} n={n}: corrected {}/{}, as-stated {}/{}",
                rep.corrected_agree, rep.samples, rep.as_stated_agree, rep.samples
            ));
            ensure(rep.passes(), format!("{f} n={n}: {}", parts.last().unwrap()))?;
            reports.push(rep);
        }
    }
    let path = artifacts_dir().join("condition_crosscheck.json");
    std::fs::write(&path, to_pretty(&reports)).map_err(|e| e.to_string())?;
    let witnesses: usize = reports.iter().map(|r| r.disagreements.len()).sum();
    Ok(format!(
        "{}; {witnesses} as-stated witnesses verified, all confined to (4c); report {}",
        parts.join("; "),
        path.display()
    ))
}

fn expected_h1(rs: &RelationSet) -> Vec<Poly> {
    let f = rs.field();
    let vars = Arc::new(rs.vars().to_vec());
    let x = |r, c| Poly::var(f, vars.clone(), &Var::Psi(r, c)).unwrap();
    let k = Poly::var(f, vars.clone(), &Var::Kappa).unwrap();
    let det = x(1, 1).mul(&x(2, 2)).sub(&x(2, 1).mul(&x(1, 2)));
    vec![det.sub(&k), x(1, 1).mul(&det).sub(&k), x(1, 2).mul(&det)]
}

fn expected_g(rs: &RelationSet, n: usize) -> Poly {
    let f = rs.field();
    let vars = Arc::new(rs.vars().to_vec());
    let x = |r: usize, c: usize| Poly::var(f, vars.clone(), &Var::Psi(r, c)).unwrap();
    let (a, j) = (n + 1, 2 * n + 1);
    // m_{r,·} ↦ x[r][·], b_{r,n} ↦ x[r][2n+1], d_{r,n} ↦ x[n+1+r][2n+1].
    let mut p = Poly::var(f, vars.clone(), &Var::Kappa).unwrap().neg();
    for r in 1..=n {
        let minor = x(r, a).mul(&x(n + 1 + r, j)).sub(&x(n + 1 + r, a).mul(&x(r, j)));
        p = p.add(&x(r, a).mul(&minor));
    }
    let last = x(a, a).mul(&x(j, j)).sub(&x(a, j).mul(&x(j, a)));
    p.add(&x(a, a).mul(&last))
}

fn c10_relations() -> Outcome {
    let q = FieldSpec::Rational;
    let rs = generate_relations(&LyAlgebra::heisenberg(q, 1).unwrap()).unwrap();
    let mut got: Vec<Poly> = rs.relations().iter().map(|r| r.poly.normalized()).collect();
    let mut want: Vec<Poly> = expected_h1(&rs).iter().map(Poly::normalized).collect();
    got.sort_by_key(|p| p.to_text());
    want.sort_by_key(|p| p.to_text());
    ensure(got == want, format!("h1 relations: {:?}", got.iter().map(|p| p.to_text()).collect::<Vec<_>>()))?;
    for n in 1..=2 {
        let rs = generate_relations(&LyAlgebra::generalized_heisenberg(q, n).unwrap()).unwrap();
        let r = rs
            .find(&[n + 1, 2 * n + 1, n + 1], 1)
            .ok_or(format!("G{n}: no relation at the displayed tuple"))?;
        ensure(
            r.poly == expected_g(&rs, n).normalized(),
            format!("G{n}: relation {} differs from the hand expansion", r.poly),
        )?;
    }

    let mut checked = 0;
    let mut positives = 0;
    let mut rng = sample::rng(10);
    for f in [q, fp(3), fp(5)] {
        for (name, l) in [
            ("h1", LyAlgebra::heisenberg(f, 1).unwrap()),
            ("h2", LyAlgebra::heisenberg(f, 2).unwrap()),
            ("G1", LyAlgebra::generalized_heisenberg(f, 1).unwrap()),
            ("G2", LyAlgebra::generalized_heisenberg(f, 2).unwrap()),
        ] {
            let e = central_extension(&l).unwrap();
            let rs = generate_relations(&l).unwrap();
            let mut pairs: Vec<AutPair> = Vec::new();
            if let Some(n) = name.strip_prefix('h').and_then(|s| s.parse::<usize>().ok()) {
                for _ in 0..40 {
                    let kappa = loop {
                        let k = sample::scalar(f, &mut rng, 3);
                        if !k.is_zero() {
                            break k;
                        }
                    };
                    let mut perm: Vec<usize> = (0..n).collect();
                    if n == 2 && rng.gen_bool(0.5) {
                        perm.swap(0, 1);
                    }
                    let s: Vec<Scalar> = (0..n).map(|_| sample::scalar(f, &mut rng, 3)).collect();
                    pairs.push(heisenberg_family(f, n, &kappa, &perm, &s).unwrap());
                }
            }
            if name == "G1" && f == fp(3) {
                let subs = enumerate_lift_subgroups(&e, &EnumBudget::default()).map_err(|err| err.to_string())?;
                pairs.extend(subs.image_of_tau().into_iter().take(40));
            }
            pairs.push(AutPair::identity(&e));
            while pairs.len() < 90 {
                let phi = sample::invertible(f, &mut rng, e.m(), 3);
                let psi = sample::invertible(f, &mut rng, e.n(), 2);
                pairs.push(AutPair::new(phi, psi));
            }
            for pr in &pairs {
                let direct = direct_check(&e, pr).unwrap();
                let symbolic = evaluate_relations(&rs, pr).unwrap();
                let decided = decide_inducible(&e, pr).unwrap().is_ok();
                ensure(
                    direct == symbolic && direct == decided,
                    format!("{name}/{f}: direct {direct}, relations {symbolic}, decide {decided} at {pr:?}"),
                )?;
                checked += 1;
                positives += direct as usize;
            }
        }
    }
    ensure(checked >= 1000, format!("only {checked} pairs"))?;
    Ok(format!(
        "h1 set exact, G1/G2 displayed relation matches; relations = direct check = decide on {checked} pairs ({positives} inducible)"
    ))
}

fn main() {
    let criteria: Vec<(&str, fn() -> Outcome)> = vec![
        ("axiom certification", c1_axioms),
        ("representation iff semidirect", c2_rep_iff_semidirect),
        ("complex property", c3_complex),
        ("induced-cocycle soundness", c4_induced_cocycles),
        ("inducibility completeness", c5_inducibility),
        ("Wells exactness", c6_wells_exactness),
        ("split extensions inducible", c7_split_inducible),
        ("split factorizations", c8_factorizations),
        ("block-condition cross-check", c9_block_condition_crosscheck),
        ("relation generator fidelity", c10_relations),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let id = (i + 1).to_string();
        if !filter.is_empty() && !filter.iter().any(|f| f == &id) {
            continue;
        }
        let t = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            Err(e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into()))
        });
        let dt = secs(t.elapsed());
        match result {
            Ok(msg) => println!("PASS criterion {id:>2} {name} ({dt}): {msg}"),
            Err(msg) => {
                failed += 1;
                println!("FAIL criterion {id:>2} {name} ({dt}): {msg}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
