//! Exhaustive search over `𝔽_p`: automorphism groups, lifts of pairs, and the
//! exactness statements relating them to cohomology.
//!
//! Every `γ ∈ Aut_V(L̃)` has the block form `γ = iφr + (iμ + sψ)p` with
//! `φ = γ|_V`, `ψ = pγs` and `μ = rγs ∈ Hom(L,V)`, so lifts of a fixed pair are
//! searched over `μ` alone.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::LyAlgebra;
use crate::cohomology::{h23, CohomologyGroup};
use crate::error::{precondition, Error, Result};
use crate::extension::AbelianExtension;
use crate::inducibility::{chi, compatible_unchecked, h1_aut_iso, tau_unchecked, AutPair, Inducibility};
use crate::linalg::Matrix;
use crate::scalar::{FieldSpec, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct EnumBudget {
    pub max_field_size: u32,
    pub max_total_dim: usize,
    /// Cap on search nodes visited (partial maps plus complete candidates).
    pub max_candidates: u64,
}

impl Default for EnumBudget {
    fn default() -> Self {
        EnumBudget {
            max_field_size: 5,
            max_total_dim: 6,
            max_candidates: 200_000_000,
        }
    }
}

impl EnumBudget {
    pub fn admit(&self, field: FieldSpec, dim: usize) -> Result<u64> {
        let p = field
            .modulus()
            .ok_or_else(|| precondition("enumeration needs a prime field"))?;
        if p > self.max_field_size {
            return Err(Error::Budget(format!("field size {p} exceeds budget {}", self.max_field_size)));
        }
        if dim > self.max_total_dim {
            return Err(Error::Budget(format!("dimension {dim} exceeds budget {}", self.max_total_dim)));
        }
        Ok(p as u64)
    }
}

fn residue(x: &Scalar) -> u64 {
    match x {
        Scalar::Fp { v, .. } => *v as u64,
        Scalar::Q(_) => unreachable!("prime field checked"),
    }
}

type Sparse = Vec<(usize, u64)>;

/// Structure constants mod `p`, with the lists of nonzero products.
struct FpAlg {
    p: u64,
    n: usize,
    bin: Vec<Sparse>,
    ter: Vec<Sparse>,
    bin_nz: Vec<(usize, usize)>,
    ter_nz: Vec<(usize, usize, usize)>,
}

impl FpAlg {
    fn new(l: &LyAlgebra, p: u64) -> FpAlg {
        let n = l.dim();
        let sparse = |v: &[Scalar]| -> Sparse {
            v.iter()
                .enumerate()
                .filter(|(_, x)| !x.is_zero())
                .map(|(k, x)| (k, residue(x)))
                .collect()
        };
        let mut bin = Vec::with_capacity(n * n);
        let mut bin_nz = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let s = sparse(l.bracket_basis(i, j));
                if !s.is_empty() {
                    bin_nz.push((i, j));
                }
                bin.push(s);
            }
        }
        let mut ter = Vec::with_capacity(n * n * n);
        let mut ter_nz = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let s = sparse(l.triple_basis(i, j, k));
                    if !s.is_empty() {
                        ter_nz.push((i, j, k));
                    }
                    ter.push(s);
                }
            }
        }
        FpAlg {
            p,
            n,
            bin,
            ter,
            bin_nz,
            ter_nz,
        }
    }

    fn apply_sparse(&self, cols: &[Vec<u64>], s: &Sparse, out: &mut [u64]) {
        out.iter_mut().for_each(|x| *x = 0);
        for &(l, c) in s {
            for (o, g) in out.iter_mut().zip(&cols[l]) {
                *o = (*o + c * g) % self.p;
            }
        }
    }

    fn bracket(&self, u: &[u64], v: &[u64], out: &mut [u64]) {
        out.iter_mut().for_each(|x| *x = 0);
        let n = self.n;
        for &(a, b) in &self.bin_nz {
            let w = u[a] * v[b] % self.p;
            if w == 0 {
                continue;
            }
            for &(k, c) in &self.bin[a * n + b] {
                out[k] = (out[k] + w * c) % self.p;
            }
        }
    }

    fn triple(&self, u: &[u64], v: &[u64], x: &[u64], out: &mut [u64]) {
        out.iter_mut().for_each(|y| *y = 0);
        let n = self.n;
        for &(a, b, c) in &self.ter_nz {
            let w = u[a] * v[b] % self.p * x[c] % self.p;
            if w == 0 {
                continue;
            }
            for &(k, t) in &self.ter[(a * n + b) * n + c] {
                out[k] = (out[k] + w * t) % self.p;
            }
        }
    }
}

#[derive(Clone, Debug)]
enum Constraint {
    Bin(usize, usize),
    Ter(usize, usize, usize),
}

/// Column-by-column search for morphisms `γ: L → L` (columns `γ e_j`).
struct Search<'a> {
    alg: &'a FpAlg,
    /// Basis indices in the order their columns are chosen.
    order: Vec<usize>,
    /// Candidate columns for each basis index.
    candidates: Vec<Vec<Vec<u64>>>,
    /// Constraints checked once the column at each depth is fixed.
    at_depth: Vec<Vec<Constraint>>,
    require_invertible: bool,
    visited: AtomicU64,
    cap: u64,
}

impl<'a> Search<'a> {
    fn new(alg: &'a FpAlg, order: Vec<usize>, candidates: Vec<Vec<Vec<u64>>>, require_invertible: bool, cap: u64) -> Search<'a> {
        let n = alg.n;
        let mut pos = vec![0; n];
        for (d, &j) in order.iter().enumerate() {
            pos[j] = d;
        }
        let mut at_depth = vec![Vec::new(); n];
        let support_pos = |s: &Sparse| s.iter().map(|&(k, _)| pos[k]).max().unwrap_or(0);
        for i in 0..n {
            for j in 0..n {
                let d = pos[i].max(pos[j]).max(support_pos(&alg.bin[i * n + j]));
                at_depth[d].push(Constraint::Bin(i, j));
                for k in 0..n {
                    let d = pos[i]
                        .max(pos[j])
                        .max(pos[k])
                        .max(support_pos(&alg.ter[(i * n + j) * n + k]));
                    at_depth[d].push(Constraint::Ter(i, j, k));
                }
            }
        }
        Search {
            alg,
            order,
            candidates,
            at_depth,
            require_invertible,
            visited: AtomicU64::new(0),
            cap,
        }
    }

    fn tick(&self) -> Result<()> {
        let v = self.visited.fetch_add(1, Ordering::Relaxed);
        if v >= self.cap {
            return Err(Error::Budget(format!("search exceeded {} nodes", self.cap)));
        }
        Ok(())
    }

    fn satisfied(&self, depth: usize, cols: &[Vec<u64>]) -> bool {
        let n = self.alg.n;
        let mut lhs = vec![0u64; n];
        let mut rhs = vec![0u64; n];
        for c in &self.at_depth[depth] {
            match *c {
                Constraint::Bin(i, j) => {
                    self.alg.apply_sparse(cols, &self.alg.bin[i * n + j], &mut lhs);
                    self.alg.bracket(&cols[i], &cols[j], &mut rhs);
                }
                Constraint::Ter(i, j, k) => {
                    self.alg.apply_sparse(cols, &self.alg.ter[(i * n + j) * n + k], &mut lhs);
                    self.alg.triple(&cols[i], &cols[j], &cols[k], &mut rhs);
                }
            }
            if lhs != rhs {
                return false;
            }
        }
        true
    }

    /// Rank test for the chosen columns, by elimination mod p.
    fn independent(&self, chosen: &[&Vec<u64>]) -> bool {
        let p = self.alg.p;
        let mut rows: Vec<Vec<u64>> = chosen.iter().map(|c| (*c).clone()).collect();
        let n = self.alg.n;
        let mut rank = 0;
        for col in 0..n {
            let Some(piv) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else {
                continue;
            };
            rows.swap(rank, piv);
            let inv = modinv(rows[rank][col], p);
            for x in rows[rank].iter_mut() {
                *x = *x * inv % p;
            }
            for r in 0..rows.len() {
                if r != rank && rows[r][col] != 0 {
                    let f = rows[r][col];
                    for c in 0..n {
                        rows[r][c] = (rows[r][c] + p * p - f * rows[rank][c] % p) % p;
                    }
                }
            }
            rank += 1;
        }
        rank == rows.len()
    }

    fn extend(&self, depth: usize, cols: &mut Vec<Vec<u64>>, out: &mut Vec<Vec<Vec<u64>>>, first_only: bool) -> Result<()> {
        let n = self.alg.n;
        if depth == n {
            out.push(cols.clone());
            return Ok(());
        }
        let j = self.order[depth];
        for cand in &self.candidates[j] {
            self.tick()?;
            cols[j] = cand.clone();
            if self.require_invertible {
                let chosen: Vec<&Vec<u64>> = self.order[..=depth].iter().map(|&k| &cols[k]).collect();
                if !self.independent(&chosen) {
                    continue;
                }
            }
            if !self.satisfied(depth, cols) {
                continue;
            }
            self.extend(depth + 1, cols, out, first_only)?;
            if first_only && !out.is_empty() {
                return Ok(());
            }
        }
        Ok(())
    }

    fn run(&self, first_only: bool) -> Result<Vec<Vec<Vec<u64>>>> {
        let n = self.alg.n;
        if n == 0 {
            return Ok(vec![Vec::new()]);
        }
        // Split on the first column with more than one candidate.
        let split = self
            .order
            .iter()
            .position(|&j| self.candidates[j].len() > 1)
            .unwrap_or(n - 1);
        let mut prefix: Vec<Vec<u64>> = vec![vec![0; n]; n];
        for d in 0..split {
            let j = self.order[d];
            let Some(c) = self.candidates[j].first() else {
                return Ok(Vec::new());
            };
            prefix[j] = c.clone();
            if self.require_invertible {
                let chosen: Vec<&Vec<u64>> = self.order[..=d].iter().map(|&k| &prefix[k]).collect();
                if !self.independent(&chosen) {
                    return Ok(Vec::new());
                }
            }
            if !self.satisfied(d, &prefix) {
                return Ok(Vec::new());
            }
        }
        let j = self.order[split];
        let branch = |cand: &Vec<u64>| -> Result<Vec<Vec<Vec<u64>>>> {
            self.tick()?;
            let mut cols = prefix.clone();
            cols[j] = cand.clone();
            let mut out = Vec::new();
            if self.require_invertible {
                let chosen: Vec<&Vec<u64>> = self.order[..=split].iter().map(|&k| &cols[k]).collect();
                if !self.independent(&chosen) {
                    return Ok(out);
                }
            }
            if self.satisfied(split, &cols) {
                self.extend(split + 1, &mut cols, &mut out, first_only)?;
            }
            Ok(out)
        };
        if first_only {
            let found = self.candidates[j]
                .par_iter()
                .map(branch)
                .find_map_first(|r| match r {
                    Ok(v) if v.is_empty() => None,
                    other => Some(other),
                });
            return found.unwrap_or(Ok(Vec::new()));
        }
        let parts: Vec<Result<Vec<Vec<Vec<u64>>>>> = self.candidates[j].par_iter().map(branch).collect();
        let mut out = Vec::new();
        for p in parts {
            out.extend(p?);
        }
        Ok(out)
    }
}

fn modinv(a: u64, p: u64) -> u64 {
    let mut r = 1u64;
    let mut b = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

/// All vectors of `𝔽_p^n` in lexicographic order.
fn all_vectors(p: u64, n: usize) -> Vec<Vec<u64>> {
    let total = (p as usize).pow(n as u32);
    (0..total)
        .map(|mut code| {
            let mut v = vec![0u64; n];
            for slot in (0..n).rev() {
                v[slot] = (code % p as usize) as u64;
                code /= p as usize;
            }
            v
        })
        .collect()
}

fn to_matrix(field: FieldSpec, cols: &[Vec<u64>], rows: usize) -> Matrix {
    let cols: Vec<Vec<Scalar>> = cols
        .iter()
        .map(|c| c.iter().map(|&x| Scalar::from_i64(field, x as i64)).collect())
        .collect();
    Matrix::from_columns(field, rows, &cols).expect("consistent column length")
}

fn columns_u64(m: &Matrix) -> Vec<Vec<u64>> {
    m.columns().iter().map(|c| c.iter().map(residue).collect()).collect()
}

/// Column order placing coordinates that occur in products first, so that
/// bracket constraints become checkable early.
fn pruning_order(alg: &FpAlg) -> Vec<usize> {
    let n = alg.n;
    let mut weight = vec![0usize; n];
    for s in alg.bin.iter().chain(&alg.ter) {
        for &(k, _) in s {
            weight[k] += 1;
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&k| (std::cmp::Reverse(weight[k]), k));
    order
}

/// The automorphism group of `l` over `𝔽_p`, sorted.
pub fn enumerate_automorphisms(l: &LyAlgebra, budget: &EnumBudget) -> Result<Vec<Matrix>> {
    let p = budget.admit(l.field(), l.dim())?;
    let alg = FpAlg::new(l, p);
    let n = l.dim();
    let all = all_vectors(p, n);
    let cands = vec![all; n];
    let search = Search::new(&alg, pruning_order(&alg), cands, true, budget.max_candidates);
    let mut out: Vec<Matrix> = search
        .run(false)?
        .iter()
        .map(|cols| to_matrix(l.field(), cols, n))
        .collect();
    out.sort();
    Ok(out)
}

/// Closure, inverses and identity for a finite set of matrices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GroupCheck {
    pub has_identity: bool,
    pub closed: bool,
    pub inverses: bool,
}

impl GroupCheck {
    pub fn passes(&self) -> bool {
        self.has_identity && self.closed && self.inverses
    }
}

pub fn check_group(elems: &[Matrix]) -> GroupCheck {
    let set: BTreeSet<&Matrix> = elems.iter().collect();
    let has_identity = elems.iter().any(|g| g.is_identity());
    let closed = elems
        .par_iter()
        .all(|a| elems.iter().all(|b| set.contains(&a.mul(b))));
    let inverses = elems
        .par_iter()
        .all(|a| a.invert().map(|i| set.contains(&i)).unwrap_or(false));
    GroupCheck {
        has_identity,
        closed,
        inverses,
    }
}

/// Elements of `Aut_V(L̃)` with their images under `τ`.
#[derive(Clone, Debug, Serialize)]
pub struct LiftSubgroups {
    pub aut_v: Vec<(Matrix, AutPair)>,
    pub gl_v: Vec<Matrix>,
    pub aut_base: Vec<Matrix>,
}

impl LiftSubgroups {
    /// `Aut_V^L`: `γ̄ = id`.
    pub fn aut_v_l(&self) -> Vec<&Matrix> {
        self.aut_v.iter().filter(|(_, pr)| pr.psi.is_identity()).map(|(g, _)| g).collect()
    }

    /// `Aut^V`: `γ|_V = id`.
    pub fn aut_upper_v(&self) -> Vec<&Matrix> {
        self.aut_v.iter().filter(|(_, pr)| pr.phi.is_identity()).map(|(g, _)| g).collect()
    }

    /// `Aut^{V,L}`: both.
    pub fn aut_vl(&self) -> Vec<&Matrix> {
        self.aut_v
            .iter()
            .filter(|(_, pr)| pr.phi.is_identity() && pr.psi.is_identity())
            .map(|(g, _)| g)
            .collect()
    }

    pub fn image_of_tau(&self) -> BTreeSet<AutPair> {
        self.aut_v.iter().map(|(_, pr)| pr.clone()).collect()
    }
}

struct LiftEngine<'a> {
    e: &'a AbelianExtension,
    p: u64,
    cap: u64,
}

impl<'a> LiftEngine<'a> {
    fn new(e: &'a AbelianExtension, budget: &EnumBudget) -> Result<LiftEngine<'a>> {
        let p = budget.admit(e.field(), e.total_dim())?;
        Ok(LiftEngine {
            e,
            p,
            cap: budget.max_candidates,
        })
    }

    /// Lifts `γ = iφr + (iμ + sψ)p` of `(φ, ψ)`, in lexicographic order of `μ` (column by column).
    fn lifts(&self, pr: &AutPair, first_only: bool) -> Result<Vec<(Matrix, Matrix)>> {
        let e = self.e;
        let (n, m, nn) = (e.n(), e.m(), e.total_dim());
        let f = e.field();
        let mus = all_vectors(self.p, m);
        // Search in the basis adapted to T = [s | i], where γ' = T⁻¹γT has
        // columns (ψe_a, μ_a) at base positions and (0, φe_t) at V positions.
        let t = e.section().hstack(e.inclusion());
        let tinv = t.invert().ok_or_else(|| Error::Internal("section and inclusion do not span".into()))?;
        let adapted = FpAlg::new(&e.total().change_basis(&t)?, self.p);
        let psi_cols = columns_u64(&pr.psi);
        let phi_cols = columns_u64(&pr.phi);
        let mut cands: Vec<Vec<Vec<u64>>> = Vec::with_capacity(nn);
        for a in 0..n {
            cands.push(
                mus.iter()
                    .map(|mu| {
                        let mut c = psi_cols[a].clone();
                        c.extend(mu.iter().copied());
                        c
                    })
                    .collect(),
            );
        }
        for tcol in 0..m {
            let mut c = vec![0u64; n];
            c.extend(phi_cols[tcol].iter().copied());
            cands.push(vec![c]);
        }
        let order: Vec<usize> = (n..nn).chain(0..n).collect();
        let search = Search::new(&adapted, order, cands, false, self.cap);
        let found = search.run(first_only)?;
        Ok(found
            .iter()
            .map(|cols| {
                let gp = to_matrix(f, cols, nn);
                let gamma = t.mul(&gp).mul(&tinv);
                let mu_cols: Vec<Vec<u64>> = cols[..n].iter().map(|c| c[n..].to_vec()).collect();
                (to_matrix(f, &mu_cols, m), gamma)
            })
            .collect())
    }
}

/// A lift found by exhaustive search over `μ ∈ Hom(L,V)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BruteLift {
    pub mu: Matrix,
    pub gamma: Matrix,
}

/// First `μ` (lexicographic, column by column) making `γ = iφr + (iμ + sψ)p` an automorphism.
pub fn brute_force_inducible(e: &AbelianExtension, pr: &AutPair, budget: &EnumBudget) -> Result<Option<BruteLift>> {
    pr.validate(e)?;
    let engine = LiftEngine::new(e, budget)?;
    Ok(engine
        .lifts(pr, true)?
        .into_iter()
        .next()
        .map(|(mu, gamma)| BruteLift { mu, gamma }))
}

/// `Aut_V(L̃)` by block form over `GL(V) × Aut(L) × Hom(L,V)`.
pub fn enumerate_lift_subgroups(e: &AbelianExtension, budget: &EnumBudget) -> Result<LiftSubgroups> {
    let f = e.field();
    let gl_v = enumerate_automorphisms(&LyAlgebra::abelian(f, e.m()), budget)?;
    let aut_base = enumerate_automorphisms(e.base(), budget)?;
    let engine = LiftEngine::new(e, budget)?;
    let pairs: Vec<AutPair> = gl_v
        .iter()
        .flat_map(|phi| aut_base.iter().map(move |psi| AutPair::new(phi.clone(), psi.clone())))
        .collect();
    let found: Vec<Result<Vec<(Matrix, AutPair)>>> = pairs
        .par_iter()
        .map(|pr| {
            Ok(engine
                .lifts(pr, false)?
                .into_iter()
                .map(|(_, g)| (g, pr.clone()))
                .collect())
        })
        .collect();
    let mut aut_v = Vec::new();
    for r in found {
        aut_v.extend(r?);
    }
    aut_v.sort();
    Ok(LiftSubgroups {
        aut_v,
        gl_v,
        aut_base,
    })
}

/// Agreement of the cohomological decision with exhaustive lift search on all of `GL(V) × Aut(L)`.
#[derive(Clone, Debug, Serialize)]
pub struct InducibilityAgreement {
    pub pairs: usize,
    pub inducible: usize,
    pub compatible: usize,
    pub agree: usize,
    pub disagreements: Vec<AutPair>,
}

impl InducibilityAgreement {
    pub fn passes(&self) -> bool {
        self.disagreements.is_empty() && self.agree == self.pairs
    }
}

pub fn compare_inducibility(e: &AbelianExtension, budget: &EnumBudget) -> Result<InducibilityAgreement> {
    let f = e.field();
    let gl_v = enumerate_automorphisms(&LyAlgebra::abelian(f, e.m()), budget)?;
    let aut_base = enumerate_automorphisms(e.base(), budget)?;
    let ind = Inducibility::new(e);
    let engine = LiftEngine::new(e, budget)?;
    let pairs: Vec<AutPair> = gl_v
        .iter()
        .flat_map(|phi| aut_base.iter().map(move |psi| AutPair::new(phi.clone(), psi.clone())))
        .collect();
    let verdicts: Vec<Result<(bool, bool, bool)>> = pairs
        .par_iter()
        .map(|pr| {
            let decided = ind.decide(pr)?;
            let brute = !engine.lifts(pr, true)?.is_empty();
            Ok((decided.is_ok(), brute, compatible_unchecked(e, pr)))
        })
        .collect();
    let mut report = InducibilityAgreement {
        pairs: pairs.len(),
        inducible: 0,
        compatible: 0,
        agree: 0,
        disagreements: Vec::new(),
    };
    for (pr, v) in pairs.iter().zip(verdicts) {
        let (d, b, c) = v?;
        report.inducible += b as usize;
        report.compatible += c as usize;
        if d == b {
            report.agree += 1;
        } else {
            report.disagreements.push(pr.clone());
        }
    }
    Ok(report)
}

#[derive(Clone, Debug, Serialize)]
pub struct SequenceCheck {
    /// `|𝒞₁|` or `|𝒞₂|`.
    pub compatible: usize,
    pub image: usize,
    pub kernel: usize,
    pub exact: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SplitCheck {
    pub aut_rep: usize,
    pub aut_inv: usize,
    pub aut_v_l: usize,
    pub aut_upper_v: usize,
    pub aut_vl: usize,
    /// `|Aut_V^L| = |Aut_rep(V)| · |Aut^{V,L}|`.
    pub first_factorization: bool,
    /// `|Aut^V| = |Aut^inv(L)| · |Aut^{V,L}|`.
    pub second_factorization: bool,
    /// `η(φ) = s p + iφr` lands in `Aut_V^L`, is multiplicative and `τ₁ η = id`.
    pub eta_splits: bool,
    /// `η'(ψ) = sψp + i r` lands in `Aut^V`, is multiplicative and `τ₂ η' = id`.
    pub eta_prime_splits: bool,
}

impl SplitCheck {
    pub fn passes(&self) -> bool {
        self.first_factorization && self.second_factorization && self.eta_splits && self.eta_prime_splits
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ExactnessReport {
    pub p: u32,
    pub aut_v: usize,
    pub aut_v_group: GroupCheck,
    pub tau_homomorphism: bool,
    pub h1_dim: usize,
    pub aut_vl: usize,
    /// `|Ker τ| = |Aut^{V,L}| = p^{dim H¹}`.
    pub kernel_matches_h1: bool,
    /// `χ` is a bijection `Aut^{V,L} → Z¹` inverse to `λ ↦ I + iλp`.
    pub chi_bijective: bool,
    pub compatible_pairs: usize,
    pub image_of_tau: usize,
    pub kernel_of_wells: usize,
    /// `Ker 𝒲 = Im τ` as sets.
    pub wells_exact: bool,
    pub sequence_a: SequenceCheck,
    pub sequence_b: SequenceCheck,
    pub split: Option<SplitCheck>,
}

impl ExactnessReport {
    pub fn passes(&self) -> bool {
        self.aut_v_group.passes()
            && self.tau_homomorphism
            && self.kernel_matches_h1
            && self.chi_bijective
            && self.wells_exact
            && self.sequence_a.exact
            && self.sequence_b.exact
            && self.split.as_ref().map_or(true, |s| s.passes())
    }
}

/// Checks the exactness statements by exhaustive set computation.
pub fn verify_exact_sequences(e: &AbelianExtension, budget: &EnumBudget) -> Result<ExactnessReport> {
    let f = e.field();
    let p = f.modulus().ok_or_else(|| precondition("enumeration needs a prime field"))?;
    let subs = enumerate_lift_subgroups(e, budget)?;
    let ind = Inducibility::new(e);
    let mats: Vec<Matrix> = subs.aut_v.iter().map(|(g, _)| g.clone()).collect();
    let aut_v_group = check_group(&mats);
    let by_gamma: BTreeMap<&Matrix, &AutPair> = subs.aut_v.iter().map(|(g, pr)| (g, pr)).collect();
    let tau_homomorphism = subs.aut_v.par_iter().all(|(g1, p1)| {
        subs.aut_v.iter().all(|(g2, p2)| {
            let g = g1.mul(g2);
            by_gamma.get(&g).map_or(false, |pr| **pr == p1.compose(p2)) && tau_unchecked(e, &g) == p1.compose(p2)
        })
    });

    let h1_dim = ind.h1_dim();
    let vl = subs.aut_vl();
    let kernel_matches_h1 = (vl.len() as u128) == (p as u128).pow(h1_dim as u32);
    let mut chis = BTreeSet::new();
    let mut chi_ok = true;
    for g in &vl {
        let lam = chi(e, g)?;
        chi_ok &= h1_aut_iso(e, &lam).map(|back| &back == *g).unwrap_or(false);
        chis.insert(lam);
    }
    let chi_bijective = chi_ok && chis.len() == vl.len();

    let all_pairs: Vec<AutPair> = subs
        .gl_v
        .iter()
        .flat_map(|phi| subs.aut_base.iter().map(move |psi| AutPair::new(phi.clone(), psi.clone())))
        .collect();
    let compatible: Vec<AutPair> = all_pairs
        .into_par_iter()
        .filter(|pr| compatible_unchecked(e, pr))
        .collect();
    let kernel: BTreeSet<AutPair> = compatible
        .par_iter()
        .filter(|pr| ind.wells_class(pr).map(|c| c.trivial).unwrap_or(false))
        .cloned()
        .collect();
    let image = subs.image_of_tau();
    let wells_exact = kernel == image;

    let id_v = Matrix::identity(f, e.m());
    let id_l = Matrix::identity(f, e.n());
    let seq = |fixed_phi: bool| -> SequenceCheck {
        let comp: Vec<&AutPair> = compatible
            .iter()
            .filter(|pr| if fixed_phi { pr.phi == id_v } else { pr.psi == id_l })
            .collect();
        let img: BTreeSet<&AutPair> = image
            .iter()
            .filter(|pr| if fixed_phi { pr.phi == id_v } else { pr.psi == id_l })
            .collect();
        let ker: BTreeSet<&AutPair> = comp.iter().copied().filter(|pr| kernel.contains(*pr)).collect();
        SequenceCheck {
            compatible: comp.len(),
            image: img.len(),
            kernel: ker.len(),
            exact: img == ker,
        }
    };
    // (A) fixes ψ = 1 and varies φ; (B) fixes φ = 1 and varies ψ.
    let sequence_a = seq(false);
    let sequence_b = seq(true);

    let split = if e.is_split() {
        let aut_rep: Vec<&Matrix> = compatible.iter().filter(|pr| pr.psi == id_l).map(|pr| &pr.phi).collect();
        let aut_inv: Vec<&Matrix> = compatible.iter().filter(|pr| pr.phi == id_v).map(|pr| &pr.psi).collect();
        let avl = subs.aut_v_l();
        let auv = subs.aut_upper_v();
        let sp = e.section().mul(e.projection());
        let ir = e.inclusion().mul(e.retraction());
        let eta = |phi: &Matrix| sp.add(&e.inclusion().mul(phi).mul(e.retraction()));
        let eta_p = |psi: &Matrix| e.section().mul(psi).mul(e.projection()).add(&ir);
        let avl_set: BTreeSet<&Matrix> = avl.iter().copied().collect();
        let auv_set: BTreeSet<&Matrix> = auv.iter().copied().collect();
        let eta_splits = aut_rep.iter().all(|phi| {
            let g = eta(phi);
            avl_set.contains(&g) && tau_unchecked(e, &g).phi == **phi
        }) && aut_rep
            .iter()
            .all(|a| aut_rep.iter().all(|b| eta(&a.mul(b)) == eta(a).mul(&eta(b))));
        let eta_prime_splits = aut_inv.iter().all(|psi| {
            let g = eta_p(psi);
            auv_set.contains(&g) && tau_unchecked(e, &g).psi == **psi
        }) && aut_inv
            .iter()
            .all(|a| aut_inv.iter().all(|b| eta_p(&a.mul(b)) == eta_p(a).mul(&eta_p(b))));
        Some(SplitCheck {
            aut_rep: aut_rep.len(),
            aut_inv: aut_inv.len(),
            aut_v_l: avl.len(),
            aut_upper_v: auv.len(),
            aut_vl: vl.len(),
            first_factorization: avl.len() == aut_rep.len() * vl.len(),
            second_factorization: auv.len() == aut_inv.len() * vl.len(),
            eta_splits,
            eta_prime_splits,
        })
    } else {
        None
    };

    Ok(ExactnessReport {
        p,
        aut_v: subs.aut_v.len(),
        aut_v_group,
        tau_homomorphism,
        h1_dim,
        aut_vl: vl.len(),
        kernel_matches_h1,
        chi_bijective,
        compatible_pairs: compatible.len(),
        image_of_tau: image.len(),
        kernel_of_wells: kernel.len(),
        wells_exact,
        sequence_a,
        sequence_b,
        split,
    })
}

/// A pair of compatible pairs on which the Wells map fails to be additive.
#[derive(Clone, Debug, Serialize)]
pub struct WellsHomWitness {
    pub first: AutPair,
    pub second: AutPair,
    pub class_first: Vec<Scalar>,
    pub class_second: Vec<Scalar>,
    pub class_product: Vec<Scalar>,
}

#[derive(Clone, Debug, Serialize)]
pub struct WellsHomProbe {
    pub compatible_pairs: usize,
    pub products_checked: usize,
    pub h23_dim: usize,
    pub witnesses: Vec<WellsHomWitness>,
}

/// Searches compatible pairs `x, y` with `𝒲(xy) ≠ 𝒲(x) + 𝒲(y)` in `H^(2,3)`.
pub fn wells_hom_probe(e: &AbelianExtension, budget: &EnumBudget, max_witnesses: usize) -> Result<WellsHomProbe> {
    budget.admit(e.field(), e.total_dim())?;
    let f = e.field();
    let gl_v = enumerate_automorphisms(&LyAlgebra::abelian(f, e.m()), budget)?;
    let aut_base = enumerate_automorphisms(e.base(), budget)?;
    let compatible: Vec<AutPair> = gl_v
        .iter()
        .flat_map(|phi| aut_base.iter().map(move |psi| AutPair::new(phi.clone(), psi.clone())))
        .filter(|pr| compatible_unchecked(e, pr))
        .collect();
    let group: CohomologyGroup = h23(e.rep())?;
    let ind = Inducibility::new(e);
    let class = |pr: &AutPair| -> Result<Vec<Scalar>> {
        let c = crate::inducibility::wells_cocycle(ind.extension(), pr)?;
        group
            .class_of(&c)?
            .ok_or_else(|| Error::Internal("Wells cocycle is not a cocycle".into()))
    };
    let classes: Vec<Vec<Scalar>> = compatible.iter().map(&class).collect::<Result<_>>()?;
    let index: BTreeMap<&AutPair, usize> = compatible.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let mut witnesses = Vec::new();
    let mut checked = 0usize;
    'outer: for (i, x) in compatible.iter().enumerate() {
        for (j, y) in compatible.iter().enumerate() {
            let xy = x.compose(y);
            let Some(&k) = index.get(&xy) else {
                return Err(Error::Internal("compatible pairs are not closed under composition".into()));
            };
            checked += 1;
            let sum: Vec<Scalar> = classes[i].iter().zip(&classes[j]).map(|(a, b)| a + b).collect();
            if sum != classes[k] {
                witnesses.push(WellsHomWitness {
                    first: x.clone(),
                    second: y.clone(),
                    class_first: classes[i].clone(),
                    class_second: classes[j].clone(),
                    class_product: classes[k].clone(),
                });
                if witnesses.len() >= max_witnesses {
                    break 'outer;
                }
            }
        }
    }
    Ok(WellsHomProbe {
        compatible_pairs: compatible.len(),
        products_checked: checked,
        h23_dim: group.h_dim,
        witnesses,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohomology::CochainPair;
    use crate::extension::{build_extension, central_extension};
    use crate::representation::Representation;

    fn fp(p: u32) -> FieldSpec {
        FieldSpec::prime(p).unwrap()
    }

    #[test]
    fn gl2_over_f2() {
        let a = LyAlgebra::abelian(fp(2), 2);
        let auts = enumerate_automorphisms(&a, &EnumBudget::default()).unwrap();
        assert_eq!(auts.len(), 6);
        assert!(check_group(&auts).passes());
    }

    #[test]
    fn heisenberg_automorphisms_preserve_center() {
        let h = LyAlgebra::heisenberg(fp(2), 1).unwrap();
        let auts = enumerate_automorphisms(&h, &EnumBudget::default()).unwrap();
        assert!(check_group(&auts).passes());
        let z = h.center();
        for g in &auts {
            assert!(h.is_automorphism(g).unwrap());
            for v in z.vectors() {
                assert!(z.contains(&g.apply(v)));
            }
        }
    }

    #[test]
    fn block_form_matches_full_enumeration() {
        for p in [2, 3] {
            let h = LyAlgebra::heisenberg(fp(p), 1).unwrap();
            let e = central_extension(&h).unwrap();
            let b = EnumBudget::default();
            let full = enumerate_automorphisms(&h, &b).unwrap();
            let subs = enumerate_lift_subgroups(&e, &b).unwrap();
            let block: Vec<Matrix> = subs.aut_v.iter().map(|(g, _)| g.clone()).collect();
            let mut sorted = block.clone();
            sorted.sort();
            assert_eq!(sorted, full);
        }
    }

    #[test]
    fn heisenberg_f3_counts() {
        let e = central_extension(&LyAlgebra::heisenberg(fp(3), 1).unwrap()).unwrap();
        let b = EnumBudget::default();
        let subs = enumerate_lift_subgroups(&e, &b).unwrap();
        assert_eq!(subs.aut_vl().len(), 9);
        let pr = AutPair::new(Matrix::identity(fp(3), 1), Matrix::diagonal(fp(3), &[fp(3).int(2), fp(3).int(2)]));
        assert!(brute_force_inducible(&e, &pr, &b).unwrap().is_none());
        let id = AutPair::identity(&e);
        assert!(brute_force_inducible(&e, &id, &b).unwrap().unwrap().mu.is_zero());
        let rep = verify_exact_sequences(&e, &b).unwrap();
        assert!(rep.passes(), "{rep:?}");
    }

    #[test]
    fn split_adjoint_f2() {
        let f = fp(2);
        let ad = Representation::adjoint(&LyAlgebra::heisenberg(f, 1).unwrap());
        let e = build_extension(&ad, &CochainPair::zero(f, 1, 3, 3)).unwrap();
        let rep = verify_exact_sequences(&e, &EnumBudget::default()).unwrap();
        assert!(rep.passes(), "{rep:?}");
        assert!(rep.split.is_some());
    }
}
