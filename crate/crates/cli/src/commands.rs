//! The `validate`, `transform`, `check` and `hrr` commands. Each returns an
//! [`Outcome`]; printing and the process exit code are left to the binary.

use std::fmt::Write as _;
use std::path::Path;

use gvint_core::arith::{cyclotomic_norm_product, divisors, euler_phi, mobius, primitive_root_sum};
use gvint_core::transforms::{
    self, integrality_audit, remark_leg_identity_check, Branch, Relation, TransformReport,
};
use gvint_core::{
    Direction, GradedRing, InvariantKind, InvariantTable, PositiveInt, Rational, RingElement, TransformError,
};
use num_bigint::BigInt;
use num_traits::One;
use serde_json::{json, Value};

use crate::workspace::{self, class_coords, format_rational, table_block, Issue, LoadError, Workspace, WorkspaceFile};

/// Process exit status.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Success,
    /// Invalid input, refused transform, or a failed integrality audit.
    Validation,
    /// A mathematical identity that should always hold did not.
    Contract,
    Io,
}

impl Status {
    pub fn code(self) -> i32 {
        match self {
            Status::Success => 0,
            Status::Validation => 1,
            Status::Contract => 2,
            Status::Io => 3,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub status: Status,
    /// Human-readable summary.
    pub human: String,
    /// Machine-readable verdict.
    pub json: Value,
    /// Primary data for stdout (a transformed workspace) when not written to a file.
    pub data: Option<String>,
}

impl Outcome {
    fn new(status: Status, human: String, json: Value) -> Self {
        Outcome {
            status,
            human,
            json,
            data: None,
        }
    }

    fn load_failure(command: &str, err: LoadError) -> Self {
        let (status, issues) = match &err {
            LoadError::Io { .. } => (Status::Io, vec![Issue { location: "file".into(), message: err.to_string() }]),
            LoadError::Parse(e) => (Status::Validation, vec![Issue { location: "file".into(), message: e.to_string() }]),
            LoadError::Invalid(list) => (Status::Validation, list.clone()),
        };
        let mut human = String::new();
        for i in &issues {
            let _ = writeln!(human, "error: {i}");
        }
        Outcome::new(status, human, json!({ "command": command, "ok": false, "errors": issues }))
    }

    fn failure(command: &str, status: Status, message: String, extra: Value) -> Self {
        let mut j = json!({ "command": command, "ok": false, "error": message });
        if let (Value::Object(map), Value::Object(more)) = (&mut j, extra) {
            map.extend(more);
        }
        Outcome::new(status, format!("error: {message}\n"), j)
    }
}

fn coords_json(beta: &gvint_core::CurveClass) -> Value {
    json!(class_coords(beta))
}

pub fn validate(path: &Path) -> Outcome {
    let (_, ws) = match workspace::load(path) {
        Ok(x) => x,
        Err(e) => return Outcome::load_failure("validate", e),
    };
    let tables: Vec<Value> = ws
        .tables
        .iter()
        .map(|t| {
            json!({
                "label": t.label,
                "kind": t.table.kind().as_str(),
                "n": t.table.n(),
                "entries": t.table.len(),
            })
        })
        .collect();
    let mut human = format!(
        "ok: {} (rank {}, dim {}), {} table(s)",
        ws.geometry.label(),
        ws.geometry.rank(),
        ws.geometry.dim(),
        ws.tables.len()
    );
    if let Some(r) = &ws.ring {
        let _ = write!(human, ", ring {}", r.label());
    }
    if let Some(k) = &ws.k_model {
        let _ = write!(human, ", K-model {}", k.label());
    }
    human.push('\n');
    Outcome::new(
        Status::Success,
        human,
        json!({
            "command": "validate",
            "ok": true,
            "errors": [],
            "tables": tables,
            "ring": ws.ring.as_ref().map(|r| r.label().to_string()),
            "k_model": ws.k_model.as_ref().map(|k| k.label().to_string()),
        }),
    )
}

fn relation_name(direction: Direction, n: u32) -> String {
    let relation = match direction {
        Direction::GvToGw | Direction::GwToGv => Relation::MultipleCover,
        _ => match n {
            1 => Relation::QkOnePoint,
            2 => Relation::QkTwoPoint,
            _ => Relation::QkMultiPoint,
        },
    };
    relation.describe(n)
}

fn target_label(source: &str, direction: Direction) -> String {
    let from = direction.source().as_str().to_ascii_lowercase();
    let to = direction.target().as_str().to_ascii_lowercase();
    match source.strip_prefix(&from) {
        Some(rest) => format!("{to}{rest}"),
        None => format!("{to}-{source}"),
    }
}

fn transform_error_json(e: &TransformError) -> Value {
    match e {
        TransformError::DegreeHypothesisViolated { class, reason } => {
            json!({ "class": coords_json(class), "reason": reason })
        }
        TransformError::NotDivisorClosed { missing, of } => {
            json!({ "class": coords_json(of), "missing": coords_json(missing) })
        }
        TransformError::InconsistentCanonicalBranch { class } | TransformError::OutOfTruncation(class) => {
            json!({ "class": coords_json(class) })
        }
        _ => json!({}),
    }
}

/// Text rendering of a transform report, one block per curve class.
pub fn report_text(label: &str, report: &TransformReport) -> String {
    let from = report.from_kind();
    let mut s = format!(
        "{} -> {}  table {label} (n = {}): {}\n",
        from,
        report.to_kind(),
        report.n,
        report.relation.describe(report.n)
    );
    for e in &report.entries {
        let branch = match e.branch {
            Branch::CalabiYau => "K.beta = 0",
            Branch::Fano => "K.beta < 0, identity",
        };
        let _ = writeln!(s, "  {}  [{branch}]  = {}", e.class, format_rational(&e.value));
        for c in &e.contributions {
            let _ = writeln!(
                s,
                "      r = {}: {} * {}{} = {} * {} = {}",
                c.r,
                format_rational(&c.coefficient),
                from,
                c.source,
                format_rational(&c.coefficient),
                format_rational(&c.source_value),
                format_rational(&c.term)
            );
        }
    }
    s
}

pub fn report_json(label: &str, report: &TransformReport) -> Value {
    json!({
        "table": label,
        "from": report.from_kind().as_str(),
        "to": report.to_kind().as_str(),
        "n": report.n,
        "relation": report.relation.describe(report.n),
        "entries": report.entries.iter().map(|e| json!({
            "class": coords_json(&e.class),
            "branch": match e.branch { Branch::CalabiYau => "calabi-yau", Branch::Fano => "fano" },
            "value": format_rational(&e.value),
            "integral": e.integral,
            "contributions": e.contributions.iter().map(|c| json!({
                "r": c.r.to_string(),
                "coefficient": format_rational(&c.coefficient),
                "source": coords_json(&c.source),
                "source_value": format_rational(&c.source_value),
                "term": format_rational(&c.term),
            })).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
    })
}

pub struct TransformArgs<'a> {
    pub path: &'a Path,
    pub from: InvariantKind,
    pub to: InvariantKind,
    pub table: Option<&'a str>,
    pub out: Option<&'a Path>,
    pub report: Option<&'a Path>,
}

/// Transforms every table of the source kind (or the one named by `table`)
/// and writes a workspace holding the results.
pub fn transform(args: &TransformArgs<'_>) -> Outcome {
    const CMD: &str = "transform";
    let (file, ws) = match workspace::load(args.path) {
        Ok(x) => x,
        Err(e) => return Outcome::load_failure(CMD, e),
    };
    let Some(direction) = Direction::from_kinds(args.from, args.to) else {
        return Outcome::failure(
            CMD,
            Status::Validation,
            format!("unsupported direction {} -> {} (GV->GW, GW->GV, GV->QK, QK->GV)", args.from, args.to),
            json!({}),
        );
    };
    let selected: Vec<_> = ws
        .tables
        .iter()
        .filter(|t| match args.table {
            Some(label) => t.label == label,
            None => t.table.kind() == args.from,
        })
        .collect();
    if selected.is_empty() {
        let what = match args.table {
            Some(label) => format!("no table labelled {label:?}"),
            None => format!("no {} table in the workspace", args.from),
        };
        return Outcome::failure(CMD, Status::Validation, what, json!({}));
    }

    let mut blocks = Vec::new();
    let mut summaries = Vec::new();
    let mut text_reports = String::new();
    let mut json_reports = Vec::new();
    for t in selected {
        match transforms::transform(&t.table, direction) {
            Ok((out, report)) => {
                if !report.is_consistent() {
                    return Outcome::failure(
                        CMD,
                        Status::Contract,
                        format!("table {}: report does not sum to its entries", t.label),
                        json!({ "table": t.label }),
                    );
                }
                let label = target_label(&t.label, direction);
                summaries.push(json!({
                    "source": t.label,
                    "target": label,
                    "relation": report.relation.describe(report.n),
                    "entries": out.len(),
                    "integral": integrality_audit(&out).is_clean(),
                }));
                text_reports.push_str(&report_text(&t.label, &report));
                json_reports.push(report_json(&t.label, &report));
                blocks.push(table_block(Some(label), &out));
            }
            Err(e) => {
                let relation = relation_name(direction, t.table.n());
                let mut extra = transform_error_json(&e);
                extra["table"] = json!(t.label);
                if !matches!(e, TransformError::UnsupportedN) {
                    extra["relation"] = json!(relation);
                }
                let message = match &e {
                    TransformError::UnsupportedN => format!("table {}: {e}", t.label),
                    _ => format!("table {}: {e} ({relation})", t.label),
                };
                return Outcome::failure(CMD, Status::Validation, message, extra);
            }
        }
    }

    let out_file = WorkspaceFile {
        tables: blocks,
        ..file
    };
    let out_file = match workspace::normalize(&out_file) {
        Ok(f) => f,
        Err(issues) => {
            return Outcome::failure(CMD, Status::Contract, format!("output does not normalize: {}", issues[0]), json!({}))
        }
    };
    let text = workspace::to_string(&out_file);

    if let Some(path) = args.report {
        let body = if path.extension().is_some_and(|e| e == "json") {
            let mut s = serde_json::to_string_pretty(&Value::Array(json_reports.clone())).expect("report serializes");
            s.push('\n');
            s
        } else {
            text_reports.clone()
        };
        if let Err(e) = std::fs::write(path, body) {
            return Outcome::failure(CMD, Status::Io, format!("cannot write {}: {e}", path.display()), json!({}));
        }
    }

    let mut human = String::new();
    for s in &summaries {
        let _ = writeln!(
            human,
            "{} -> {}: {} entries ({})",
            s["source"].as_str().unwrap_or_default(),
            s["target"].as_str().unwrap_or_default(),
            s["entries"],
            s["relation"].as_str().unwrap_or_default()
        );
    }
    let mut j = json!({
        "command": CMD,
        "ok": true,
        "direction": format!("{}->{}", args.from, args.to),
        "tables": summaries,
        "out": args.out.map(|p| p.display().to_string()),
    });
    let mut outcome = Outcome::new(Status::Success, String::new(), Value::Null);
    match args.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                return Outcome::failure(CMD, Status::Io, format!("cannot write {}: {e}", path.display()), json!({}));
            }
            let _ = writeln!(human, "wrote {}", path.display());
        }
        None => {
            j["workspace"] = serde_json::from_str(&text).expect("valid JSON");
            outcome.data = Some(text);
        }
    }
    outcome.human = human;
    outcome.json = j;
    outcome
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckMode {
    Integrality,
    Roundtrip,
    RemarkIdentity,
    ArithIdentities,
}

impl CheckMode {
    fn name(self) -> &'static str {
        match self {
            CheckMode::Integrality => "integrality",
            CheckMode::Roundtrip => "roundtrip",
            CheckMode::RemarkIdentity => "remark-identity",
            CheckMode::ArithIdentities => "arith-identities",
        }
    }
}

/// `limit` bounds `r` for the arithmetic identities.
pub fn check(path: Option<&Path>, mode: CheckMode, limit: u64) -> Outcome {
    const CMD: &str = "check";
    if mode == CheckMode::ArithIdentities {
        return arith_identities(limit);
    }
    let Some(path) = path else {
        return Outcome::failure(CMD, Status::Validation, format!("--{} needs a workspace file", mode.name()), json!({}));
    };
    let (file, ws) = match workspace::load(path) {
        Ok(x) => x,
        Err(e) => return Outcome::load_failure(CMD, e),
    };
    match mode {
        CheckMode::Integrality => integrality(&ws),
        CheckMode::Roundtrip => roundtrip(&file, &ws),
        CheckMode::RemarkIdentity => remark_identity(&ws),
        CheckMode::ArithIdentities => unreachable!(),
    }
}

fn integrality(ws: &Workspace) -> Outcome {
    let mut offenders = Vec::new();
    let mut human = String::new();
    for t in &ws.tables {
        for (beta, v) in integrality_audit(&t.table).offenders {
            let _ = writeln!(human, "{}: {} {} = {} is not an integer", t.label, t.table.kind(), beta, format_rational(&v));
            offenders.push(json!({ "table": t.label, "class": coords_json(&beta), "value": format_rational(&v) }));
        }
    }
    let ok = offenders.is_empty();
    if ok {
        let _ = writeln!(human, "ok: every entry of {} table(s) is an integer", ws.tables.len());
    }
    Outcome::new(
        if ok { Status::Success } else { Status::Validation },
        human,
        json!({ "command": "check", "check": "integrality", "ok": ok, "offenders": offenders }),
    )
}

fn leg(table: &InvariantTable, there: Direction, back: Direction) -> Result<bool, TransformError> {
    let (mid, _) = transforms::transform(table, there)?;
    let (again, _) = transforms::transform(&mid, back)?;
    Ok(again.entries() == table.entries() && again.kind() == table.kind())
}

fn roundtrip(file: &WorkspaceFile, ws: &Workspace) -> Outcome {
    let mut status = Status::Success;
    let mut human = String::new();
    let mut tables = Vec::new();
    for t in &ws.tables {
        let legs: &[(Direction, Direction)] = match t.table.kind() {
            InvariantKind::Gv => &[(Direction::GvToGw, Direction::GwToGv), (Direction::GvToQk, Direction::QkToGv)],
            InvariantKind::Gw => &[(Direction::GwToGv, Direction::GvToGw)],
            InvariantKind::Qk => &[(Direction::QkToGv, Direction::GvToQk)],
        };
        let mut results = Vec::new();
        for &(there, back) in legs {
            let name = format!("{}->{}->{}", there.source(), there.target(), back.target());
            let (verdict, reason) = match leg(&t.table, there, back) {
                Ok(true) => ("ok", None),
                Ok(false) => {
                    status = Status::Contract;
                    ("mismatch", None)
                }
                Err(e @ (TransformError::UnsupportedN | TransformError::DegreeHypothesisViolated { .. })) => {
                    ("skipped", Some(e.to_string()))
                }
                Err(e) => {
                    if status == Status::Success {
                        status = Status::Validation;
                    }
                    ("error", Some(e.to_string()))
                }
            };
            let _ = write!(human, "{}: {name} {verdict}", t.label);
            if let Some(r) = &reason {
                let _ = write!(human, " ({r})");
            }
            human.push('\n');
            results.push(json!({ "leg": name, "status": verdict, "reason": reason }));
        }
        tables.push(json!({ "table": t.label, "legs": results }));
    }

    // load -> serialize -> load must be the identity on the normalized file
    let serialization = match workspace::normalize(file) {
        Ok(norm) => {
            let first = workspace::to_string(&norm);
            let second = workspace::parse_str(&first)
                .ok()
                .and_then(|f| workspace::normalize(&f).ok())
                .map(|f| workspace::to_string(&f));
            let rebuilt = workspace::parse_str(&first).ok().and_then(|f| workspace::build(&f).ok());
            let same_tables = rebuilt.is_some_and(|w| {
                w.tables.len() == ws.tables.len()
                    && w.tables.iter().zip(&ws.tables).all(|(a, b)| a.table == b.table && a.label == b.label)
            });
            if second.as_deref() == Some(first.as_str()) && same_tables {
                "ok"
            } else {
                "mismatch"
            }
        }
        Err(_) => "mismatch",
    };
    if serialization != "ok" {
        status = Status::Contract;
    }
    let _ = writeln!(human, "serialization round trip {serialization}");
    Outcome::new(
        status,
        human,
        json!({
            "command": "check",
            "check": "roundtrip",
            "ok": status == Status::Success,
            "tables": tables,
            "serialization": serialization,
        }),
    )
}

fn remark_identity(ws: &Workspace) -> Outcome {
    let rank = ws.geometry.rank();
    // coordinate divisors, plus the truncation weights as one more test divisor
    let mut divisors: Vec<Vec<BigInt>> = (0..rank)
        .map(|i| (0..rank).map(|j| BigInt::from(u8::from(i == j))).collect())
        .collect();
    divisors.push(ws.truncation.weights().iter().map(|&w| BigInt::from(w)).collect());
    let d_max = ws.truncation.cutoff();

    let mut cases = 0usize;
    let mut failures = Vec::new();
    let mut checked_tables = Vec::new();
    for t in ws.tables.iter().filter(|t| t.table.kind() == InvariantKind::Gv && t.table.n() == 0) {
        let gw = match transforms::gw_from_gv(&t.table) {
            Ok(g) => g,
            Err(e) => return Outcome::failure("check", Status::Validation, format!("table {}: {e}", t.label), json!({})),
        };
        for phi in &divisors {
            let report = match remark_leg_identity_check(&t.table, &gw, phi, d_max) {
                Ok(r) => r,
                Err(e) => {
                    return Outcome::failure("check", Status::Validation, format!("table {}: {e}", t.label), json!({}))
                }
            };
            cases += report.cases.len();
            for f in report.failures() {
                failures.push(json!({
                    "table": t.label,
                    "divisor": phi.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                    "class": coords_json(&f.beta),
                    "d": f.d,
                    "power_sum_side": format_rational(&f.power_sum_side),
                    "divisor_equation_side": format_rational(&f.divisor_equation_side),
                }));
            }
        }
        checked_tables.push(t.label.clone());
    }
    if checked_tables.is_empty() {
        return Outcome::failure(
            "check",
            Status::Validation,
            "the leg identity needs a GV table with n = 0".into(),
            json!({ "check": "remark-identity" }),
        );
    }
    let ok = failures.is_empty();
    let human = if ok {
        format!("ok: leg identity holds in {cases} case(s) over {} table(s)\n", checked_tables.len())
    } else {
        let mut s = String::new();
        for f in &failures {
            let _ = writeln!(
                s,
                "{}: class {} d = {} divisor {}: {} != {}",
                f["table"], f["class"], f["d"], f["divisor"], f["power_sum_side"], f["divisor_equation_side"]
            );
        }
        s
    };
    Outcome::new(
        if ok { Status::Success } else { Status::Contract },
        human,
        json!({
            "command": "check",
            "check": "remark-identity",
            "ok": ok,
            "tables": checked_tables,
            "cases": cases,
            "failures": failures,
        }),
    )
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Divisor-sum identities of the totient and Möbius functions, and the
/// root-of-unity sums and cyclotomic norms, for every `r <= limit`.
pub fn arith_identities(limit: u64) -> Outcome {
    const TOL: f64 = 1e-9;
    let mut failures = Vec::new();
    for r in 1..=limit {
        let rp = PositiveInt::from_u64(r);
        let divs = divisors(&rp);
        let phi_sum: u64 = divs.iter().map(|k| euler_phi(k).to_u64().expect("small")).sum();
        if phi_sum != r {
            failures.push(json!({ "identity": "sum of phi over divisors", "r": r }));
        }
        let mu_sum: i64 = divs.iter().map(|k| i64::from(mobius(k))).sum();
        if mu_sum != i64::from(r == 1) {
            failures.push(json!({ "identity": "sum of mu over divisors", "r": r }));
        }
        let primitive_count = (1..=r).filter(|&k| gcd(k, r) == 1).count() as u64;
        if euler_phi(&rp).to_u64() != Some(primitive_count) {
            failures.push(json!({ "identity": "count of primitive roots", "r": r }));
        }
        let s = primitive_root_sum(&rp, 1);
        if (s - f64::from(mobius(&rp))).norm() >= TOL {
            failures.push(json!({ "identity": "sum of primitive roots", "r": r }));
        }
        if r >= 2 {
            let p = cyclotomic_norm_product(&rp).expect("r >= 2");
            if (p - r as f64).norm() / r as f64 >= TOL {
                failures.push(json!({ "identity": "product of (1 - zeta^k)", "r": r }));
            }
        }
    }
    let ok = failures.is_empty();
    let human = if ok {
        format!("ok: arithmetic identities hold for r <= {limit}\n")
    } else {
        failures.iter().map(|f| format!("failed: {} at r = {}\n", f["identity"], f["r"])).collect()
    };
    Outcome::new(
        if ok { Status::Success } else { Status::Contract },
        human,
        json!({ "command": "check", "check": "arith-identities", "ok": ok, "limit": limit, "failures": failures }),
    )
}

/// `C(n + k, n)`, extended to all integers `k` as the polynomial
/// `(k + 1)(k + 2) ... (k + n) / n!`.
pub fn binomial_oracle(n: u32, k: i64) -> Rational {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 1..=i64::from(n) {
        num *= BigInt::from(k + i);
        den *= BigInt::from(i);
    }
    Rational::new(num, den)
}

/// Riemann-Roch written out in low dimension, independent of the Todd
/// class code: `chi(L)` from intersection numbers of `L = c_1(L)`, `c_1`,
/// `c_2`.
fn closed_form_rr(ring: &GradedRing, l: &RingElement) -> Option<Rational> {
    let c = |i: usize| ring.chern_classes().get(i - 1).cloned().unwrap_or_else(|| ring.zero());
    let int = |e: RingElement| ring.integrate(&e);
    let q = |a: i64, b: i64| Rational::new(a.into(), b.into());
    let mul = |a: &RingElement, b: &RingElement| ring.mul(a, b);
    match ring.dim() {
        1 => Some(int(l.clone()) + q(1, 2) * int(c(1))),
        2 => {
            let l2 = int(mul(l, l)) * q(1, 2);
            let c1l = int(mul(&c(1), l)) * q(1, 2);
            let td2 = (int(mul(&c(1), &c(1))) + int(c(2))) * q(1, 12);
            Some(l2 + c1l + td2)
        }
        3 => {
            let l2 = mul(l, l);
            let c1 = c(1);
            Some(
                int(mul(&l2, l)) * q(1, 6)
                    + int(mul(&c1, &l2)) * q(1, 4)
                    + int(mul(&ring.add(&mul(&c1, &c1), &c(2)), l)) * q(1, 12)
                    + int(mul(&c1, &c(2))) * q(1, 24),
            )
        }
        _ => None,
    }
}

/// `chi(X, O(k D))` by the K-pairing, cross-checked against the binomial
/// oracle on projective spaces and closed-form Riemann-Roch up to dimension 3.
pub fn hrr(path: &Path, k: i64, class: Option<&str>) -> Outcome {
    const CMD: &str = "hrr";
    let (_, ws) = match workspace::load(path) {
        Ok(x) => x,
        Err(e) => return Outcome::load_failure(CMD, e),
    };
    let Some(ring) = &ws.ring else {
        return Outcome::failure(CMD, Status::Validation, "workspace has no ring block".into(), json!({}));
    };
    let divisor = match class {
        Some(name) => match ring.index_of(name) {
            Some(i) if ring.basis()[i].degree == 1 => ring.basis_element(i),
            Some(_) => {
                return Outcome::failure(CMD, Status::Validation, format!("class {name:?} is not of degree 1"), json!({}))
            }
            None => return Outcome::failure(CMD, Status::Validation, format!("no basis class {name:?}"), json!({})),
        },
        None => match workspace::hyperplane(ring) {
            Some(h) => h,
            None => {
                return Outcome::failure(
                    CMD,
                    Status::Validation,
                    "ring has no unique degree-1 class; pass --class".into(),
                    json!({}),
                )
            }
        },
    };
    let l = ring.scale(&divisor, &Rational::from_integer(k.into()));
    let chi = ring
        .ch_exp(&l)
        .and_then(|ch| ring.k_pairing(&ch, &ring.unit()))
        .expect("degree-1 class has a Chern character");

    let (oracle, expected) = if workspace::is_projective_space(ring) {
        ("binomial", Some(binomial_oracle(ring.dim(), k)))
    } else {
        match closed_form_rr(ring, &l) {
            Some(v) => ("closed-form Riemann-Roch", Some(v)),
            None => ("none", None),
        }
    };
    let ok = expected.as_ref().is_none_or(|e| *e == chi);
    let mut human = format!("chi({}, O({k})) = {}", ring.label(), format_rational(&chi));
    match &expected {
        Some(e) => {
            let verdict = if ok { "ok" } else { "MISMATCH" };
            let _ = write!(human, "  ({oracle} oracle: {}, {verdict})", format_rational(e));
        }
        None => human.push_str("  (no independent oracle for this ring)"),
    }
    human.push('\n');
    Outcome::new(
        if ok { Status::Success } else { Status::Contract },
        human,
        json!({
            "command": CMD,
            "ok": ok,
            "ring": ring.label(),
            "bundle": k,
            "chi": format_rational(&chi),
            "oracle": oracle,
            "expected": expected.as_ref().map(format_rational),
        }),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use gvint_core::ring::{calabi_yau_threefold, projective_space};
    use num_traits::Zero;

    #[test]
    fn binomial_oracle_values() {
        assert_eq!(binomial_oracle(2, 1), Rational::from_integer(3.into()));
        assert_eq!(binomial_oracle(1, 0), Rational::one());
        assert_eq!(binomial_oracle(3, -4), Rational::from_integer((-1).into()));
        assert_eq!(binomial_oracle(3, -2), Rational::zero());
    }

    #[test]
    fn closed_form_matches_pairing() {
        let rings = [projective_space(1), projective_space(2), projective_space(3), calabi_yau_threefold(5, 50, -200)];
        for ring in &rings {
            let h = ring.basis_element(1);
            for k in -4..=4 {
                let l = ring.scale(&h, &Rational::from_integer(k.into()));
                let chi = ring.k_pairing(&ring.ch_exp(&l).unwrap(), &ring.unit()).unwrap();
                assert_eq!(closed_form_rr(ring, &l), Some(chi), "{} k={k}", ring.label());
            }
        }
    }

    #[test]
    fn target_labels() {
        assert_eq!(target_label("gv-n1", Direction::GvToQk), "qk-n1");
        assert_eq!(target_label("seed", Direction::GvToGw), "gw-seed");
    }
}
