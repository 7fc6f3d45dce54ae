//! JSON workspace files: geometry, truncation, invariant tables and an
//! optional cohomology ring with an integral K-basis.
//!
//! Rationals are strings (`"3"`, `"-1/8"`); there are no floats anywhere.
//! [`normalize`] puts a file into canonical form: entries sorted by curve
//! class, rationals reduced, ring data sorted. Serializing a normalized file
//! is byte-stable.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;
use std::sync::Arc;

use gvint_core::ring::{self, BasisClass};
use gvint_core::{
    CurveClass, GeometryModel, GradedRing, InvariantKind, InvariantTable, KClassModel, Rational, RingElement,
    Truncation,
};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WorkspaceFile {
    pub format: u32,
    pub geometry: GeometryBlock,
    pub truncation: TruncationBlock,
    #[serde(default)]
    pub tables: Vec<TableBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ring: Option<RingBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_model: Option<KModelBlock>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometryBlock {
    pub label: String,
    pub rank: usize,
    pub dim: u32,
    /// `K_X . e_i` for the lattice generators.
    pub canonical_pairing: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TruncationBlock {
    pub weights: Vec<u64>,
    pub cutoff: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableBlock {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub kind: String,
    pub n: u32,
    /// Real cohomological degrees; each must be even.
    pub insertion_degrees: Vec<u32>,
    pub entries: Vec<(Vec<u64>, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RingBlock {
    Builtin(BuiltinRing),
    Explicit(ExplicitRing),
}

/// `P1` .. `P8`, `quintic`, or `cy3` with `degree`, `c2_h` and `euler`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BuiltinRing {
    pub builtin: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c2_h: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub euler: Option<i64>,
}

/// Sparse ring element: basis class name to rational coefficient.
pub type ElementBlock = BTreeMap<String, String>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExplicitRing {
    pub label: String,
    pub dim: u32,
    pub basis: Vec<BasisBlock>,
    /// Unlisted products are zero, except products with the unit.
    pub products: Vec<ProductBlock>,
    pub top: String,
    /// `c_1 .. c_dim` of the tangent bundle.
    pub chern: Vec<ElementBlock>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasisBlock {
    pub name: String,
    /// Complex degree.
    pub degree: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProductBlock {
    pub left: String,
    pub right: String,
    pub value: ElementBlock,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum KModelBlock {
    /// `"projective"` or `"cy3"`, matching the built-in rings.
    Builtin { builtin: String },
    Explicit(ExplicitKModel),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExplicitKModel {
    pub label: String,
    pub classes: Vec<KClassBlock>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KClassBlock {
    pub name: String,
    /// Chern character of the class.
    pub ch: ElementBlock,
}

/// One validation failure, located by a short path such as `tables[2]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Issue {
    pub location: String,
    pub message: String,
}

impl Issue {
    fn new(location: impl Into<String>, message: impl fmt::Display) -> Self {
        Issue {
            location: location.into(),
            message: message.to_string(),
        }
    }
}

impl fmt::Display for Issue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.location, self.message)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum LoadError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("parse error: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("{} validation error(s); first: {}", .0.len(), .0[0])]
    Invalid(Vec<Issue>),
}

#[derive(Clone, Debug)]
pub struct LabeledTable {
    pub label: String,
    pub table: InvariantTable,
}

/// A validated workspace.
#[derive(Clone, Debug)]
pub struct Workspace {
    pub geometry: Arc<GeometryModel>,
    pub truncation: Truncation,
    pub tables: Vec<LabeledTable>,
    pub ring: Option<GradedRing>,
    pub k_model: Option<KClassModel>,
}

/// Strict rational parser: an integer, or `p/q` in lowest terms with `q > 1`.
pub fn parse_rational(s: &str) -> Result<Rational, String> {
    let parse_int = |t: &str| -> Result<BigInt, String> {
        let digits = t.strip_prefix('-').unwrap_or(t);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(format!("{s:?} is not an exact rational"));
        }
        t.parse::<BigInt>().map_err(|e| format!("{s:?}: {e}"))
    };
    match s.split_once('/') {
        None => Ok(Rational::from_integer(parse_int(s)?)),
        Some((p, q)) => {
            if q.starts_with('-') {
                return Err(format!("{s:?}: the sign belongs on the numerator"));
            }
            let (p, q) = (parse_int(p)?, parse_int(q)?);
            if q.is_zero() {
                return Err(format!("{s:?} has a zero denominator"));
            }
            let r = Rational::new(p.clone(), q.clone());
            if q.is_one() || *r.numer() != p || *r.denom() != q {
                return Err(format!("{s:?} is not in lowest terms (write {})", format_rational(&r)));
            }
            Ok(r)
        }
    }
}

pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn class_coords(beta: &CurveClass) -> Vec<u64> {
    beta.coords()
        .iter()
        .map(|c| u64::try_from(c).expect("curve class coordinates fit in u64"))
        .collect()
}

pub fn parse_str(text: &str) -> Result<WorkspaceFile, LoadError> {
    Ok(serde_json::from_str(text)?)
}

pub fn read_file(path: &Path) -> Result<WorkspaceFile, LoadError> {
    let text = std::fs::read_to_string(path).map_err(|source| LoadError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_str(&text)
}

/// Pretty JSON with a trailing newline.
pub fn to_string(file: &WorkspaceFile) -> String {
    let mut s = serde_json::to_string_pretty(file).expect("workspace serializes");
    s.push('\n');
    s
}

/// Reads, validates and builds the workspace.
pub fn load(path: &Path) -> Result<(WorkspaceFile, Workspace), LoadError> {
    let file = read_file(path)?;
    let ws = build(&file).map_err(LoadError::Invalid)?;
    Ok((file, ws))
}

fn normalize_element(e: &ElementBlock) -> Result<ElementBlock, String> {
    let mut out = BTreeMap::new();
    for (name, v) in e {
        let r = parse_rational(v)?;
        if !r.is_zero() {
            out.insert(name.clone(), format_rational(&r));
        }
    }
    Ok(out)
}

/// Canonical form of a file: the same data with entries sorted by curve
/// class, zero ring coefficients dropped and ring products sorted.
pub fn normalize(file: &WorkspaceFile) -> Result<WorkspaceFile, Vec<Issue>> {
    let mut issues = Vec::new();
    let mut out = file.clone();
    for (i, t) in out.tables.iter_mut().enumerate() {
        let loc = format!("tables[{i}]");
        let mut entries = Vec::with_capacity(t.entries.len());
        for (coords, v) in &t.entries {
            match parse_rational(v) {
                Ok(r) => entries.push((coords.clone(), format_rational(&r))),
                Err(e) => {
                    issues.push(Issue::new(&loc, e));
                    break;
                }
            }
        }
        entries.sort();
        t.entries = entries;
        if let Some(kind) = InvariantKind::parse(&t.kind) {
            t.kind = kind.as_str().to_string();
        }
    }
    if let Some(RingBlock::Explicit(r)) = &mut out.ring {
        let position: BTreeMap<&str, usize> = r.basis.iter().enumerate().map(|(i, b)| (b.name.as_str(), i)).collect();
        let mut products = Vec::with_capacity(r.products.len());
        for p in &r.products {
            let value = match normalize_element(&p.value) {
                Ok(v) => v,
                Err(e) => {
                    issues.push(Issue::new("ring.products", e));
                    continue;
                }
            };
            let (mut left, mut right) = (p.left.clone(), p.right.clone());
            if position.get(left.as_str()) > position.get(right.as_str()) {
                std::mem::swap(&mut left, &mut right);
            }
            products.push(ProductBlock { left, right, value });
        }
        products.sort_by_key(|p| (position.get(p.left.as_str()).copied(), position.get(p.right.as_str()).copied()));
        products.dedup();
        r.products = products;
        let chern: Result<Vec<_>, _> = r.chern.iter().map(normalize_element).collect();
        match chern {
            Ok(c) => r.chern = c,
            Err(e) => issues.push(Issue::new("ring.chern", e)),
        }
    }
    if let Some(KModelBlock::Explicit(k)) = &mut out.k_model {
        for c in &mut k.classes {
            match normalize_element(&c.ch) {
                Ok(v) => c.ch = v,
                Err(e) => issues.push(Issue::new(format!("k_model.{}", c.name), e)),
            }
        }
    }
    if issues.is_empty() {
        Ok(out)
    } else {
        Err(issues)
    }
}

/// Validates a parsed file. Geometry and truncation errors stop validation;
/// after that each table, the ring and the K-model report their first
/// failure.
pub fn build(file: &WorkspaceFile) -> Result<Workspace, Vec<Issue>> {
    if file.format != FORMAT_VERSION {
        return Err(vec![Issue::new(
            "format",
            format!("unsupported format {} (expected {FORMAT_VERSION})", file.format),
        )]);
    }
    let g = &file.geometry;
    if g.rank != g.canonical_pairing.len() {
        return Err(vec![Issue::new(
            "geometry",
            format!("rank is {} but canonical_pairing has {} entries", g.rank, g.canonical_pairing.len()),
        )]);
    }
    let geometry = GeometryModel::from_i64s(g.label.clone(), g.dim, &g.canonical_pairing)
        .map_err(|e| vec![Issue::new("geometry", e)])?;
    let geometry = Arc::new(geometry);
    let truncation = Truncation::new(file.truncation.weights.clone(), file.truncation.cutoff)
        .map_err(|e| vec![Issue::new("truncation", e)])?;
    if truncation.rank() != geometry.rank() {
        return Err(vec![Issue::new(
            "truncation",
            format!("{} weights for a rank-{} lattice", truncation.rank(), geometry.rank()),
        )]);
    }

    let mut issues = Vec::new();
    let mut tables = Vec::new();
    let mut labels = BTreeSet::new();
    for (i, block) in file.tables.iter().enumerate() {
        let label = block
            .label
            .clone()
            .unwrap_or_else(|| format!("{}-n{}-{i}", block.kind.to_ascii_lowercase(), block.n));
        let loc = format!("tables[{i}] ({label})");
        if !labels.insert(label.clone()) {
            issues.push(Issue::new(&loc, "duplicate table label"));
            continue;
        }
        match build_table(block, &geometry, &truncation) {
            Ok(table) => tables.push(LabeledTable { label, table }),
            Err(e) => issues.push(Issue::new(&loc, e)),
        }
    }

    let ring = match &file.ring {
        None => None,
        Some(block) => match build_ring(block) {
            Ok(r) => Some(r),
            Err(e) => {
                issues.push(Issue::new("ring", e));
                None
            }
        },
    };
    let k_model = match (&file.k_model, &ring) {
        (None, _) => None,
        (Some(_), None) => {
            if file.ring.is_none() {
                issues.push(Issue::new("k_model", "a K-model needs a ring block"));
            }
            None
        }
        (Some(block), Some(r)) => match build_k_model(block, r) {
            Ok(k) => Some(k),
            Err(e) => {
                issues.push(Issue::new("k_model", e));
                None
            }
        },
    };

    if issues.is_empty() {
        Ok(Workspace {
            geometry,
            truncation,
            tables,
            ring,
            k_model,
        })
    } else {
        Err(issues)
    }
}

fn build_table(
    block: &TableBlock,
    geometry: &Arc<GeometryModel>,
    truncation: &Truncation,
) -> Result<InvariantTable, String> {
    let kind = InvariantKind::parse(&block.kind).ok_or_else(|| format!("unknown kind {:?}", block.kind))?;
    let mut degrees = Vec::with_capacity(block.insertion_degrees.len());
    for &d in &block.insertion_degrees {
        if d % 2 != 0 {
            return Err(format!("odd insertion degree {d}: only even cohomology is supported"));
        }
        if d > 2 * geometry.dim() {
            return Err(format!("insertion degree {d} exceeds 2 * dim = {}", 2 * geometry.dim()));
        }
        degrees.push(d / 2);
    }
    let mut entries = BTreeMap::new();
    for (coords, value) in &block.entries {
        let beta = CurveClass::from_u64s(coords).map_err(|e| format!("class {coords:?}: {e}"))?;
        if beta.rank() != geometry.rank() {
            return Err(format!("class {beta} has rank {}, lattice has rank {}", beta.rank(), geometry.rank()));
        }
        let v = parse_rational(value).map_err(|e| format!("entry {beta}: {e}"))?;
        if entries.insert(beta.clone(), v).is_some() {
            return Err(format!("duplicate entry {beta}"));
        }
    }
    let table = InvariantTable::new(kind, block.n, degrees, geometry.clone(), truncation.clone(), entries)
        .map_err(|e| e.to_string())?;
    table.validate().map_err(|e| e.to_string())?;
    Ok(table)
}

fn element(names: &BTreeMap<&str, usize>, size: usize, block: &ElementBlock) -> Result<Vec<Rational>, String> {
    let mut v = vec![Rational::zero(); size];
    for (name, value) in block {
        let &i = names.get(name.as_str()).ok_or_else(|| format!("unknown basis class {name:?}"))?;
        v[i] = parse_rational(value)?;
    }
    Ok(v)
}

pub fn build_ring(block: &RingBlock) -> Result<GradedRing, String> {
    match block {
        RingBlock::Builtin(b) => builtin_ring(b),
        RingBlock::Explicit(r) => {
            let names: BTreeMap<&str, usize> = r.basis.iter().enumerate().map(|(i, b)| (b.name.as_str(), i)).collect();
            if names.len() != r.basis.len() {
                return Err("duplicate basis class name".into());
            }
            let size = r.basis.len();
            let basis = r.basis.iter().map(|b| BasisClass::new(b.name.clone(), b.degree)).collect();
            let mut products = Vec::with_capacity(r.products.len());
            for p in &r.products {
                let index = |n: &str| names.get(n).copied().ok_or_else(|| format!("unknown basis class {n:?}"));
                products.push((index(&p.left)?, index(&p.right)?, element(&names, size, &p.value)?));
            }
            let top = *names
                .get(r.top.as_str())
                .ok_or_else(|| format!("unknown top class {:?}", r.top))?;
            let chern = r
                .chern
                .iter()
                .map(|c| element(&names, size, c))
                .collect::<Result<Vec<_>, _>>()?;
            GradedRing::new(r.label.clone(), r.dim, basis, products, top, chern).map_err(|e| e.to_string())
        }
    }
}

fn builtin_ring(b: &BuiltinRing) -> Result<GradedRing, String> {
    let no_params = b.degree.is_none() && b.c2_h.is_none() && b.euler.is_none();
    match b.builtin.as_str() {
        "quintic" if no_params => Ok(ring::quintic()),
        "cy3" => match (b.degree, b.c2_h, b.euler) {
            (Some(d), Some(c2), Some(e)) if d > 0 => Ok(ring::calabi_yau_threefold(d, c2, e)),
            _ => Err("builtin cy3 needs degree > 0, c2_h and euler".into()),
        },
        name if no_params => match name.strip_prefix('P').and_then(|n| n.parse::<u32>().ok()) {
            Some(n @ 1..=8) => Ok(ring::projective_space(n)),
            _ => Err(format!("unknown builtin ring {name:?} (P1..P8, quintic, cy3)")),
        },
        name => Err(format!("builtin ring {name:?} takes no parameters")),
    }
}

pub fn build_k_model(block: &KModelBlock, ring: &GradedRing) -> Result<KClassModel, String> {
    match block {
        KModelBlock::Builtin { builtin } => match builtin.as_str() {
            "projective" => {
                if !is_projective_space(ring) {
                    return Err("the projective K-model needs a projective-space ring".into());
                }
                Ok(ring::projective_space_k_model(ring))
            }
            "cy3" => {
                let degrees: Vec<u32> = ring.basis().iter().map(|b| b.degree).collect();
                if ring.dim() != 3 || degrees != [0, 1, 2, 3] {
                    return Err("the cy3 K-model needs a ring with basis degrees 0, 1, 2, 3".into());
                }
                ring::calabi_yau_k_model(ring).map_err(|e| e.to_string())
            }
            other => Err(format!("unknown builtin K-model {other:?} (projective, cy3)")),
        },
        KModelBlock::Explicit(k) => {
            let names: BTreeMap<&str, usize> = ring
                .basis()
                .iter()
                .enumerate()
                .map(|(i, b)| (b.name.as_str(), i))
                .collect();
            let classes = k
                .classes
                .iter()
                .map(|c| Ok((c.name.clone(), RingElement(element(&names, ring.basis().len(), &c.ch)?))))
                .collect::<Result<Vec<_>, String>>()?;
            KClassModel::new(k.label.clone(), classes, ring).map_err(|e| e.to_string())
        }
    }
}

/// True when the ring is the cohomology of `P^n` up to renaming: one class
/// per degree, `H^n` integrating to 1 and `c(T) = (1 + H)^(n+1)`.
pub fn is_projective_space(ring: &GradedRing) -> bool {
    let n = ring.dim();
    let degrees: BTreeSet<u32> = ring.basis().iter().map(|b| b.degree).collect();
    if ring.basis().len() != n as usize + 1 || degrees.len() != n as usize + 1 {
        return false;
    }
    let Some(h) = hyperplane(ring) else { return false };
    if ring.integrate(&ring.pow(&h, n)) != Rational::one() {
        return false;
    }
    let mut binom = BigInt::one();
    for i in 1..=n {
        binom = binom * BigInt::from(n + 2 - i) / BigInt::from(i);
        let expected = ring.scale(&ring.pow(&h, i), &Rational::from_integer(binom.clone()));
        if ring.chern_classes()[i as usize - 1] != expected {
            return false;
        }
    }
    true
}

/// The unique degree-1 basis class, if there is exactly one.
pub fn hyperplane(ring: &GradedRing) -> Option<RingElement> {
    let mut ones = ring.basis().iter().enumerate().filter(|(_, b)| b.degree == 1);
    match (ones.next(), ones.next()) {
        (Some((i, _)), None) => Some(ring.basis_element(i)),
        _ => None,
    }
}

impl Workspace {
    pub fn table(&self, label: &str) -> Option<&LabeledTable> {
        self.tables.iter().find(|t| t.label == label)
    }
}

/// Serializable block of an in-memory table, in canonical form.
pub fn table_block(label: Option<String>, table: &InvariantTable) -> TableBlock {
    TableBlock {
        label,
        kind: table.kind().as_str().to_string(),
        n: table.n(),
        insertion_degrees: table.insertion_degrees().iter().map(|d| 2 * d).collect(),
        entries: table
            .entries()
            .iter()
            .map(|(b, v)| (class_coords(b), format_rational(v)))
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals_are_strict() {
        assert_eq!(parse_rational("3").unwrap(), Rational::from_integer(3.into()));
        assert_eq!(parse_rational("-1/8").unwrap(), Rational::new((-1).into(), 8.into()));
        for bad in ["2/4", "1/1", "1/0", "1/-2", "0.5", "", "-", "+1", "1e3", "1/ 2"] {
            assert!(parse_rational(bad).is_err(), "{bad:?} accepted");
        }
    }

    #[test]
    fn format_roundtrips() {
        for s in ["0", "-7", "9/8", "-1/27", "10000000000000000000000000001/3"] {
            assert_eq!(format_rational(&parse_rational(s).unwrap()), s);
        }
    }

    #[test]
    fn builtin_rings_recognized() {
        for n in 1..=4 {
            assert!(is_projective_space(&ring::projective_space(n)));
        }
        assert!(!is_projective_space(&ring::quintic()));
    }
}
