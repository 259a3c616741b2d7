//! JSON documents for algebras, representations, cochains, extensions, pairs
//! and polynomial relations.
//!
//! Basis indices are 0-based. Scalars are strings (`"3"`, `"-7/2"`), matrices
//! are row-major arrays of scalar strings. Writers emit only nonzero canonical
//! entries (`i < j` in skew slots), so a written file reloads and rewrites to
//! the same bytes.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::algebra::LyAlgebra;
use crate::cohomology::{Cochain, CochainPair};
use crate::error::{Error, Result};
use crate::extension::{from_parts, AbelianExtension};
use crate::inducibility::{AutPair, LiftCertificate};
use crate::linalg::Matrix;
use crate::nilpotent::{Poly, RelationKind, RelationSet};
use crate::representation::Representation;
use crate::scalar::{FieldSpec, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FieldJson {
    Rational,
    Prime { p: u32 },
}

impl FieldJson {
    pub fn to_spec(self) -> Result<FieldSpec> {
        match self {
            FieldJson::Rational => Ok(FieldSpec::Rational),
            FieldJson::Prime { p } => FieldSpec::prime(p),
        }
    }

    pub fn from_spec(f: FieldSpec) -> FieldJson {
        match f.modulus() {
            Some(p) => FieldJson::Prime { p },
            None => FieldJson::Rational,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoefJson {
    pub k: usize,
    pub c: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairEntryJson {
    pub i: usize,
    pub j: usize,
    pub value: Vec<CoefJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TripleEntryJson {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub value: Vec<CoefJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraJson {
    pub field: FieldJson,
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<Vec<String>>,
    #[serde(default)]
    pub binary: Vec<PairEntryJson>,
    #[serde(default)]
    pub ternary: Vec<TripleEntryJson>,
}

/// An inline algebra or a path to an algebra file, resolved against the referring file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AlgebraRef {
    Inline(AlgebraJson),
    Path(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RepresentationJson {
    pub algebra: AlgebraRef,
    pub vdim: usize,
    pub rho: Vec<Vec<Vec<String>>>,
    #[serde(rename = "D")]
    pub d: Vec<Vec<Vec<Vec<String>>>>,
    pub theta: Vec<Vec<Vec<Vec<String>>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CochainJson {
    pub field: FieldJson,
    pub n: usize,
    pub m: usize,
    #[serde(default)]
    pub f: Vec<PairEntryJson>,
    #[serde(default)]
    pub g: Vec<TripleEntryJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExtensionJson {
    pub base: AlgebraJson,
    pub rep: RepresentationJson,
    pub cocycle: CochainJson,
    pub total: AlgebraJson,
    pub inclusion: Vec<Vec<String>>,
    pub projection: Vec<Vec<String>>,
    pub section: Vec<Vec<String>>,
    pub retraction: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairJson {
    pub phi: Vec<Vec<String>>,
    pub psi: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateJson {
    pub gamma: Vec<Vec<String>>,
    pub lambda: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub exps: BTreeMap<String, u32>,
    pub c: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyJson {
    pub vars: Vec<String>,
    pub terms: Vec<TermJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationJson {
    pub kind: RelationKind,
    pub tuple: Vec<usize>,
    pub component: usize,
    pub text: String,
    pub poly: PolyJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationSetJson {
    pub field: FieldJson,
    pub n: usize,
    pub m: usize,
    pub vars: Vec<String>,
    pub relations: Vec<RelationJson>,
}

fn parse_err(what: &str, e: impl std::fmt::Display) -> Error {
    Error::Parse(format!("{what}: {e}"))
}

fn scalar(f: FieldSpec, s: &str, what: &str) -> Result<Scalar> {
    Scalar::parse(f, s).map_err(|e| parse_err(what, e))
}

fn sparse_value(f: FieldSpec, len: usize, value: &[CoefJson], what: &str) -> Result<Vec<Scalar>> {
    let mut v = vec![Scalar::zero(f); len];
    let mut seen = vec![false; len];
    for (t, c) in value.iter().enumerate() {
        if c.k >= len {
            return Err(parse_err(&format!("{what}.value[{t}].k"), format!("index {} out of range 0..{len}", c.k)));
        }
        if seen[c.k] {
            return Err(parse_err(&format!("{what}.value[{t}].k"), format!("duplicate index {}", c.k)));
        }
        seen[c.k] = true;
        v[c.k] = scalar(f, &c.c, &format!("{what}.value[{t}].c"))?;
    }
    Ok(v)
}

fn dense_to_sparse(v: &[Scalar]) -> Vec<CoefJson> {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(k, x)| CoefJson { k, c: x.to_string() })
        .collect()
}

pub fn matrix_from_json(f: FieldSpec, rows: &[Vec<String>], expect: (usize, usize), what: &str) -> Result<Matrix> {
    if rows.len() != expect.0 {
        return Err(parse_err(what, format!("expected {} rows, got {}", expect.0, rows.len())));
    }
    let mut data = Vec::with_capacity(rows.len());
    for (r, row) in rows.iter().enumerate() {
        if row.len() != expect.1 {
            return Err(parse_err(&format!("{what}[{r}]"), format!("expected {} entries, got {}", expect.1, row.len())));
        }
        let parsed: Vec<Scalar> = row
            .iter()
            .enumerate()
            .map(|(c, s)| scalar(f, s, &format!("{what}[{r}][{c}]")))
            .collect::<Result<_>>()?;
        data.push(parsed);
    }
    Matrix::from_rows_with_cols(f, &data, expect.1)
}

pub fn matrix_to_json(m: &Matrix) -> Vec<Vec<String>> {
    m.to_rows()
        .iter()
        .map(|r| r.iter().map(Scalar::to_string).collect())
        .collect()
}

pub fn algebra_from_json(j: &AlgebraJson) -> Result<LyAlgebra> {
    let f = j.field.to_spec()?;
    let n = j.dim;
    let names = match &j.basis {
        Some(b) if b.len() != n => return Err(parse_err("basis", format!("expected {n} names, got {}", b.len()))),
        Some(b) => b.clone(),
        None => crate::algebra::default_names(n),
    };
    let mut b = LyAlgebra::builder(f, names);
    for (t, e) in j.binary.iter().enumerate() {
        let what = format!("binary[{t}]");
        let v = sparse_value(f, n, &e.value, &what)?;
        b.set_binary_labeled(e.i, e.j, v, what)?;
    }
    for (t, e) in j.ternary.iter().enumerate() {
        let what = format!("ternary[{t}]");
        let v = sparse_value(f, n, &e.value, &what)?;
        b.set_ternary_labeled(e.i, e.j, e.k, v, what)?;
    }
    Ok(b.build())
}

pub fn algebra_to_json(l: &LyAlgebra) -> AlgebraJson {
    let n = l.dim();
    let mut binary = Vec::new();
    let mut ternary = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let v = dense_to_sparse(l.bracket_basis(i, j));
            if !v.is_empty() {
                binary.push(PairEntryJson { i, j, value: v });
            }
            for k in 0..n {
                let v = dense_to_sparse(l.triple_basis(i, j, k));
                if !v.is_empty() {
                    ternary.push(TripleEntryJson { i, j, k, value: v });
                }
            }
        }
    }
    let default = crate::algebra::default_names(n);
    AlgebraJson {
        field: FieldJson::from_spec(l.field()),
        dim: n,
        basis: (l.basis_names() != default.as_slice()).then(|| l.basis_names().to_vec()),
        binary,
        ternary,
    }
}

fn resolve_algebra(r: &AlgebraRef, base_dir: Option<&Path>) -> Result<LyAlgebra> {
    match r {
        AlgebraRef::Inline(a) => algebra_from_json(a),
        AlgebraRef::Path(p) => {
            let path: PathBuf = match base_dir {
                Some(d) => d.join(p),
                None => PathBuf::from(p),
            };
            let text = std::fs::read_to_string(&path).map_err(|e| parse_err(&format!("algebra {}", path.display()), e))?;
            parse_algebra(&text)
        }
    }
}

pub fn representation_from_json(j: &RepresentationJson, base_dir: Option<&Path>) -> Result<Representation> {
    let alg = resolve_algebra(&j.algebra, base_dir)?;
    let (f, n, m) = (alg.field(), alg.dim(), j.vdim);
    if j.rho.len() != n {
        return Err(parse_err("rho", format!("expected {n} matrices, got {}", j.rho.len())));
    }
    let rho: Vec<Matrix> = j
        .rho
        .iter()
        .enumerate()
        .map(|(a, x)| matrix_from_json(f, x, (m, m), &format!("rho[{a}]")))
        .collect::<Result<_>>()?;
    let grid = |g: &[Vec<Vec<Vec<String>>>], name: &str| -> Result<Vec<Matrix>> {
        if g.len() != n {
            return Err(parse_err(name, format!("expected {n} rows of matrices, got {}", g.len())));
        }
        let mut out = Vec::with_capacity(n * n);
        for (a, row) in g.iter().enumerate() {
            if row.len() != n {
                return Err(parse_err(&format!("{name}[{a}]"), format!("expected {n} matrices, got {}", row.len())));
            }
            for (b, x) in row.iter().enumerate() {
                out.push(matrix_from_json(f, x, (m, m), &format!("{name}[{a}][{b}]"))?);
            }
        }
        Ok(out)
    };
    let d = grid(&j.d, "D")?;
    let theta = grid(&j.theta, "theta")?;
    Representation::new(alg, m, rho, d, theta)
}

pub fn representation_to_json(r: &Representation) -> RepresentationJson {
    let n = r.n();
    let grid = |get: &dyn Fn(usize, usize) -> Vec<Vec<String>>| -> Vec<Vec<Vec<Vec<String>>>> {
        (0..n).map(|a| (0..n).map(|b| get(a, b)).collect()).collect()
    };
    RepresentationJson {
        algebra: AlgebraRef::Inline(algebra_to_json(r.algebra())),
        vdim: r.vdim(),
        rho: r.rho_all().iter().map(matrix_to_json).collect(),
        d: grid(&|a, b| matrix_to_json(r.d(a, b))),
        theta: grid(&|a, b| matrix_to_json(r.theta(a, b))),
    }
}

/// Loads a level-1 pair `(f, g)`; skew images are completed and conflicting entries rejected.
pub fn cochain_from_json(j: &CochainJson) -> Result<CochainPair> {
    let field = j.field.to_spec()?;
    let (n, m) = (j.n, j.m);
    let mut f = Cochain::zero(field, 2, n, m);
    let mut g = Cochain::zero(field, 3, n, m);
    let set = |c: &mut Cochain, idx: &[usize], swapped: &[usize], v: Vec<Scalar>, what: &str| -> Result<()> {
        if idx.iter().any(|&x| x >= n) {
            return Err(parse_err(what, format!("index out of range 0..{n}")));
        }
        if idx[0] == idx[1] {
            if v.iter().any(|x| !x.is_zero()) {
                return Err(Error::SkewConflict(format!("{what}: repeated skew index must vanish")));
            }
            return Ok(());
        }
        let neg: Vec<Scalar> = v.iter().map(|x| -x).collect();
        for (t, val) in [(idx, &v), (swapped, &neg)] {
            let old = c.at(t);
            if old.iter().any(|x| !x.is_zero()) && old != val.as_slice() {
                return Err(Error::SkewConflict(format!("{what}: conflicts with an earlier entry")));
            }
        }
        c.set(idx, &v);
        c.set(swapped, &neg);
        Ok(())
    };
    for (t, e) in j.f.iter().enumerate() {
        let what = format!("f[{t}]");
        let v = sparse_value(field, m, &e.value, &what)?;
        set(&mut f, &[e.i, e.j], &[e.j, e.i], v, &what)?;
    }
    for (t, e) in j.g.iter().enumerate() {
        let what = format!("g[{t}]");
        let v = sparse_value(field, m, &e.value, &what)?;
        set(&mut g, &[e.i, e.j, e.k], &[e.j, e.i, e.k], v, &what)?;
    }
    CochainPair::new(f, g)
}

pub fn cochain_to_json(c: &CochainPair) -> Result<CochainJson> {
    if c.level() != 1 {
        return Err(Error::Invalid("only (2,3)-cochains have a JSON form".into()));
    }
    let n = c.n();
    let mut f = Vec::new();
    let mut g = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let v = dense_to_sparse(c.even().at(&[i, j]));
            if !v.is_empty() {
                f.push(PairEntryJson { i, j, value: v });
            }
            for k in 0..n {
                let v = dense_to_sparse(c.odd().at(&[i, j, k]));
                if !v.is_empty() {
                    g.push(TripleEntryJson { i, j, k, value: v });
                }
            }
        }
    }
    Ok(CochainJson {
        field: FieldJson::from_spec(c.field()),
        n,
        m: c.m(),
        f,
        g,
    })
}

pub fn extension_to_json(e: &AbelianExtension) -> ExtensionJson {
    ExtensionJson {
        base: algebra_to_json(e.base()),
        rep: representation_to_json(e.rep()),
        cocycle: cochain_to_json(e.cocycle()).expect("extension cocycles are (2,3)-cochains"),
        total: algebra_to_json(e.total()),
        inclusion: matrix_to_json(e.inclusion()),
        projection: matrix_to_json(e.projection()),
        section: matrix_to_json(e.section()),
        retraction: matrix_to_json(e.retraction()),
    }
}

pub fn extension_from_json(j: &ExtensionJson, base_dir: Option<&Path>) -> Result<AbelianExtension> {
    let base = algebra_from_json(&j.base)?;
    let rep = representation_from_json(&j.rep, base_dir)?;
    let cocycle = cochain_from_json(&j.cocycle)?;
    let total = algebra_from_json(&j.total)?;
    let f = total.field();
    let (n, m, nn) = (base.dim(), rep.vdim(), total.dim());
    from_parts(
        base,
        rep,
        cocycle,
        total,
        matrix_from_json(f, &j.inclusion, (nn, m), "inclusion")?,
        matrix_from_json(f, &j.projection, (n, nn), "projection")?,
        matrix_from_json(f, &j.section, (nn, n), "section")?,
        matrix_from_json(f, &j.retraction, (m, nn), "retraction")?,
    )
}

pub fn pair_to_json(pr: &AutPair) -> PairJson {
    PairJson {
        phi: matrix_to_json(&pr.phi),
        psi: matrix_to_json(&pr.psi),
    }
}

/// Reads a pair shaped for `e`.
pub fn pair_from_json(j: &PairJson, e: &AbelianExtension) -> Result<AutPair> {
    let f = e.field();
    Ok(AutPair::new(
        matrix_from_json(f, &j.phi, (e.m(), e.m()), "phi")?,
        matrix_from_json(f, &j.psi, (e.n(), e.n()), "psi")?,
    ))
}

pub fn certificate_to_json(c: &LiftCertificate) -> CertificateJson {
    CertificateJson {
        gamma: matrix_to_json(&c.gamma),
        lambda: matrix_to_json(&c.lambda),
    }
}

pub fn certificate_from_json(j: &CertificateJson, e: &AbelianExtension) -> Result<LiftCertificate> {
    let f = e.field();
    Ok(LiftCertificate {
        gamma: matrix_from_json(f, &j.gamma, (e.total_dim(), e.total_dim()), "gamma")?,
        lambda: matrix_from_json(f, &j.lambda, (e.m(), e.n()), "lambda")?,
    })
}

pub fn poly_to_json(p: &Poly) -> PolyJson {
    let names: Vec<String> = p.vars().iter().map(|v| v.json_name()).collect();
    PolyJson {
        terms: p
            .terms()
            .map(|(mono, c)| TermJson {
                exps: mono
                    .0
                    .iter()
                    .zip(&names)
                    .filter(|(e, _)| **e > 0)
                    .map(|(e, n)| (n.clone(), *e))
                    .collect(),
                c: c.to_string(),
            })
            .collect(),
        vars: names,
    }
}

pub fn relations_to_json(rs: &RelationSet) -> RelationSetJson {
    RelationSetJson {
        field: FieldJson::from_spec(rs.field()),
        n: rs.n(),
        m: rs.m(),
        vars: rs.vars().iter().map(|v| v.json_name()).collect(),
        relations: rs
            .relations()
            .iter()
            .map(|r| RelationJson {
                kind: r.kind,
                tuple: r.tuple.clone(),
                component: r.component,
                text: r.poly.to_text(),
                poly: poly_to_json(&r.poly),
            })
            .collect(),
    }
}

pub fn parse_algebra(text: &str) -> Result<LyAlgebra> {
    let j: AlgebraJson = serde_json::from_str(text).map_err(|e| parse_err("algebra", e))?;
    algebra_from_json(&j)
}

pub fn parse_representation(text: &str, base_dir: Option<&Path>) -> Result<Representation> {
    let j: RepresentationJson = serde_json::from_str(text).map_err(|e| parse_err("representation", e))?;
    representation_from_json(&j, base_dir)
}

pub fn parse_cochain(text: &str) -> Result<CochainPair> {
    let j: CochainJson = serde_json::from_str(text).map_err(|e| parse_err("cochain", e))?;
    cochain_from_json(&j)
}

pub fn parse_extension(text: &str, base_dir: Option<&Path>) -> Result<AbelianExtension> {
    let j: ExtensionJson = serde_json::from_str(text).map_err(|e| parse_err("extension", e))?;
    extension_from_json(&j, base_dir)
}

pub fn parse_pair(text: &str, e: &AbelianExtension) -> Result<AutPair> {
    let j: PairJson = serde_json::from_str(text).map_err(|e| parse_err("pair", e))?;
    pair_from_json(&j, e)
}

/// Pretty JSON with a trailing newline.
pub fn to_pretty<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extension::central_extension;

    #[test]
    fn algebra_round_trip_is_byte_stable() {
        for f in [FieldSpec::Rational, FieldSpec::prime(3).unwrap()] {
            let g = LyAlgebra::generalized_heisenberg(f, 2).unwrap();
            let text = to_pretty(&algebra_to_json(&g));
            let back = parse_algebra(&text).unwrap();
            assert_eq!(back, g);
            assert_eq!(to_pretty(&algebra_to_json(&back)), text);
        }
    }

    #[test]
    fn extension_round_trip() {
        let e = central_extension(&LyAlgebra::heisenberg(FieldSpec::Rational, 1).unwrap()).unwrap();
        let text = to_pretty(&extension_to_json(&e));
        let back = parse_extension(&text, None).unwrap();
        assert_eq!(back, e);
        assert_eq!(to_pretty(&extension_to_json(&back)), text);
    }

    #[test]
    fn schema_errors_name_the_entry() {
        let bad = r#"{"field":{"kind":"rational"},"dim":2,"ternary":[{"i":0,"j":5,"k":0,"value":[]}]}"#;
        let msg = parse_algebra(bad).unwrap_err().to_string();
        assert!(msg.contains("ternary[0]"), "{msg}");
        let zero = r#"{"field":{"kind":"rational"},"dim":2,"binary":[{"i":0,"j":1,"value":[{"k":0,"c":"1/0"}]}]}"#;
        assert!(matches!(parse_algebra(zero), Err(Error::Parse(_))));
        let conflict = r#"{"field":{"kind":"rational"},"dim":2,"binary":[
            {"i":0,"j":1,"value":[{"k":0,"c":"1"}]},{"i":1,"j":0,"value":[{"k":0,"c":"1"}]}]}"#;
        let msg = parse_algebra(conflict).unwrap_err().to_string();
        assert!(msg.contains("binary[0]") && msg.contains("binary[1]"), "{msg}");
    }
}
