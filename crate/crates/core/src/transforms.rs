//! Transforms among genus-zero GW, GV and QK invariant tables.
//!
//! Every transform is a divisor sum over `r | ind(beta)` on classes with
//! `K_X . beta = 0` and the identity on classes with `K_X . beta < 0`:
//!
//! | relation            | forward coefficient | inverse coefficient   |
//! |---------------------|---------------------|-----------------------|
//! | GV -> GW (any `n`)  | `r^(n-3)`           | `mu(r) r^(n-3)`       |
//! | GV -> QK, `n = 1`   | `r`                 | `mu(r) r`             |
//! | GV -> QK, `n = 2`   | `1`                 | `mu(r)`               |
//! | GV -> QK, `n >= 3`  | `r^(n-3)`           | `mu(r) r^(n-3)`       |
//!
//! Insertions enter only through their count and complex degrees; the
//! coefficients depend on nothing else. The QK relations need the degree
//! hypotheses checked by [`degree_check`] and start at one insertion.
//!
//! Inverse coefficients are integers, which is the arithmetic half of GV
//! integrality: integral QK tables always invert to integral GV tables.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use crate::arith::{divisors, mobius, PositiveInt};
use crate::error::TransformError;
use crate::lattice::{CurveClass, GeometryModel, Truncation};
use crate::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum InvariantKind {
    Gw,
    Gv,
    Qk,
}

impl InvariantKind {
    pub fn as_str(self) -> &'static str {
        match self {
            InvariantKind::Gw => "GW",
            InvariantKind::Gv => "GV",
            InvariantKind::Qk => "QK",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_uppercase().as_str() {
            "GW" => Some(InvariantKind::Gw),
            "GV" => Some(InvariantKind::Gv),
            "QK" => Some(InvariantKind::Qk),
            _ => None,
        }
    }
}

impl fmt::Display for InvariantKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Genus-zero invariants of one insertion signature, keyed by curve class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantTable {
    kind: InvariantKind,
    n: u32,
    insertion_degrees: Vec<u32>,
    geometry: Arc<GeometryModel>,
    truncation: Truncation,
    entries: BTreeMap<CurveClass, Rational>,
}

impl InvariantTable {
    /// Checks ranks, the insertion count and that every key lies within the
    /// truncation. Divisor-closure is checked by [`InvariantTable::validate`]
    /// and by every transform.
    ///
    /// `insertion_degrees` are complex degrees: `gamma_i` in `H^{2 d_i}(X)`.
    pub fn new(
        kind: InvariantKind,
        n: u32,
        insertion_degrees: Vec<u32>,
        geometry: Arc<GeometryModel>,
        truncation: Truncation,
        entries: BTreeMap<CurveClass, Rational>,
    ) -> Result<Self, TransformError> {
        if insertion_degrees.len() != n as usize {
            return Err(TransformError::InsertionCount {
                n,
                got: insertion_degrees.len(),
            });
        }
        if geometry.rank() != truncation.rank() {
            return Err(TransformError::RankMismatch {
                geometry: geometry.rank(),
                truncation: truncation.rank(),
            });
        }
        for beta in entries.keys() {
            if !truncation.contains(beta)? {
                return Err(TransformError::OutOfTruncation(beta.clone()));
            }
        }
        Ok(InvariantTable {
            kind,
            n,
            insertion_degrees,
            geometry,
            truncation,
            entries,
        })
    }

    pub fn kind(&self) -> InvariantKind {
        self.kind
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn insertion_degrees(&self) -> &[u32] {
        &self.insertion_degrees
    }

    pub fn geometry(&self) -> &Arc<GeometryModel> {
        &self.geometry
    }

    pub fn truncation(&self) -> &Truncation {
        &self.truncation
    }

    pub fn entries(&self) -> &BTreeMap<CurveClass, Rational> {
        &self.entries
    }

    pub fn get(&self, beta: &CurveClass) -> Option<&Rational> {
        self.entries.get(beta)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    fn with_entries(&self, kind: InvariantKind, entries: BTreeMap<CurveClass, Rational>) -> Self {
        InvariantTable {
            kind,
            n: self.n,
            insertion_degrees: self.insertion_degrees.clone(),
            geometry: self.geometry.clone(),
            truncation: self.truncation.clone(),
            entries,
        }
    }

    /// Divisor-closure on the `K_X . beta = 0` branch, and agreement of the
    /// branch along every divisor chain.
    pub fn validate(&self) -> Result<(), TransformError> {
        for beta in self.entries.keys() {
            let k = self.geometry.canonical_degree(beta)?;
            if !k.is_zero() {
                continue;
            }
            for r in divisors(&beta.index()) {
                let quotient = beta.divide(&r)?;
                if !self.geometry.canonical_degree(&quotient)?.is_zero() {
                    return Err(TransformError::InconsistentCanonicalBranch { class: beta.clone() });
                }
                if !self.entries.contains_key(&quotient) {
                    return Err(TransformError::NotDivisorClosed {
                        missing: quotient,
                        of: beta.clone(),
                    });
                }
            }
        }
        Ok(())
    }
}

/// Which of the divisor-sum relations a transform applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    /// GW/GV multiple cover formula, coefficient `r^(n-3)`.
    MultipleCover,
    /// One-point QK/GV relation, coefficient `r`.
    QkOnePoint,
    /// Two-point QK/GV relation, coefficient `1`.
    QkTwoPoint,
    /// QK/GV relation for three or more insertions, where QK equals GW.
    QkMultiPoint,
}

impl Relation {
    fn for_qk(n: u32) -> Result<Self, TransformError> {
        match n {
            0 => Err(TransformError::UnsupportedN),
            1 => Ok(Relation::QkOnePoint),
            2 => Ok(Relation::QkTwoPoint),
            _ => Ok(Relation::QkMultiPoint),
        }
    }

    /// Forward coefficient `c(r)` for `n` insertions.
    pub fn coefficient(self, r: &PositiveInt, n: u32) -> Rational {
        let r = BigInt::from(r.get().clone());
        match self {
            Relation::QkOnePoint => Rational::from_integer(r),
            Relation::QkTwoPoint => Rational::one(),
            Relation::MultipleCover | Relation::QkMultiPoint => int_power(&r, n as i64 - 3),
        }
    }

    pub fn describe(self, n: u32) -> String {
        match self {
            Relation::MultipleCover => format!("multiple cover formula, coefficient r^({n}-3)"),
            Relation::QkOnePoint => "one-point QK/GV relation, coefficient r".into(),
            Relation::QkTwoPoint => "two-point QK/GV relation, coefficient 1".into(),
            Relation::QkMultiPoint => format!("{n}-point QK/GV relation (QK = GW), coefficient r^({n}-3)"),
        }
    }
}

fn int_power(base: &BigInt, exponent: i64) -> Rational {
    let e = exponent.unsigned_abs() as u32;
    let p = Rational::from_integer(num_traits::pow::pow(base.clone(), e as usize));
    if exponent >= 0 {
        p
    } else {
        p.recip()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    GvToGw,
    GwToGv,
    GvToQk,
    QkToGv,
}

impl Direction {
    pub fn from_kinds(from: InvariantKind, to: InvariantKind) -> Option<Self> {
        use InvariantKind::*;
        match (from, to) {
            (Gv, Gw) => Some(Direction::GvToGw),
            (Gw, Gv) => Some(Direction::GwToGv),
            (Gv, Qk) => Some(Direction::GvToQk),
            (Qk, Gv) => Some(Direction::QkToGv),
            _ => None,
        }
    }

    pub fn source(self) -> InvariantKind {
        match self {
            Direction::GvToGw | Direction::GvToQk => InvariantKind::Gv,
            Direction::GwToGv => InvariantKind::Gw,
            Direction::QkToGv => InvariantKind::Qk,
        }
    }

    pub fn target(self) -> InvariantKind {
        match self {
            Direction::GwToGv | Direction::QkToGv => InvariantKind::Gv,
            Direction::GvToGw => InvariantKind::Gw,
            Direction::GvToQk => InvariantKind::Qk,
        }
    }

    fn is_inverse(self) -> bool {
        matches!(self, Direction::GwToGv | Direction::QkToGv)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    /// `K_X . beta = 0`: the divisor sum applies.
    CalabiYau,
    /// `K_X . beta < 0`: all relations are the identity.
    Fano,
}

/// One term `coefficient * source_value` of a divisor sum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Contribution {
    pub r: PositiveInt,
    pub coefficient: Rational,
    pub source: CurveClass,
    pub source_value: Rational,
    pub term: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EntryReport {
    pub class: CurveClass,
    pub branch: Branch,
    pub contributions: Vec<Contribution>,
    pub value: Rational,
    pub integral: bool,
}

/// Audit trail of a transform, ordered by class and then by `r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransformReport {
    pub direction: Direction,
    pub relation: Relation,
    pub n: u32,
    pub entries: Vec<EntryReport>,
}

impl TransformReport {
    pub fn from_kind(&self) -> InvariantKind {
        self.direction.source()
    }

    pub fn to_kind(&self) -> InvariantKind {
        self.direction.target()
    }

    /// True when every entry equals the sum of its contributions.
    pub fn is_consistent(&self) -> bool {
        self.entries.iter().all(|e| {
            let sum = e.contributions.iter().fold(Rational::zero(), |acc, c| acc + &c.term);
            sum == e.value && e.contributions.iter().all(|c| c.coefficient.clone() * &c.source_value == c.term)
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DegreeVerdict {
    Ok,
    Violated(String),
}

impl DegreeVerdict {
    pub fn is_ok(&self) -> bool {
        matches!(self, DegreeVerdict::Ok)
    }
}

/// Degree hypotheses of the QK/GV relations for dimension `m` and
/// `K_X . beta = k_beta`. Degrees are complex degrees.
///
/// * `n = 1`: `deg gamma_1 = m - K_X.beta - 2`
/// * `n = 2`: `deg gamma_1 + deg gamma_2 = m - K_X.beta - 1`
/// * `n >= 3`: no hypothesis
pub fn degree_check_at(n: u32, insertion_degrees: &[u32], m: u32, k_beta: &BigInt) -> DegreeVerdict {
    if insertion_degrees.len() != n as usize {
        return DegreeVerdict::Violated(format!(
            "{} insertion degrees given for n = {n}",
            insertion_degrees.len()
        ));
    }
    let m = BigInt::from(m);
    match n {
        0 => DegreeVerdict::Violated("no QK/GV relation without insertions".into()),
        1 => {
            let want = &m - k_beta - 2;
            let got = BigInt::from(insertion_degrees[0]);
            if got == want {
                DegreeVerdict::Ok
            } else {
                DegreeVerdict::Violated(format!("one-point relation needs deg gamma = {want}, got {got}"))
            }
        }
        2 => {
            let want = &m - k_beta - 1;
            let got = BigInt::from(insertion_degrees[0]) + insertion_degrees[1];
            if got == want {
                DegreeVerdict::Ok
            } else {
                DegreeVerdict::Violated(format!(
                    "two-point relation needs deg gamma_1 + deg gamma_2 = {want}, got {got}"
                ))
            }
        }
        _ => DegreeVerdict::Ok,
    }
}

pub fn degree_check(
    n: u32,
    insertion_degrees: &[u32],
    geometry: &GeometryModel,
    beta: &CurveClass,
) -> Result<DegreeVerdict, TransformError> {
    let k = geometry.canonical_degree(beta)?;
    Ok(degree_check_at(n, insertion_degrees, geometry.dim(), &k))
}

/// True when `deg gamma_1 >= m - K_X.beta - 1`, which forces any (twisted)
/// invariant with that first insertion to vanish for dimension reasons.
pub fn vanishing_by_dimension(m: u32, k_beta: &BigInt, deg_gamma1: u32) -> bool {
    BigInt::from(deg_gamma1) >= BigInt::from(m) - k_beta - 1
}

/// Constant term `r^{-(n - K_X.beta)}` of the normal-bundle twisting on an
/// order-`r` stratum.
pub fn kawasaki_constant(r: &PositiveInt, n: u32, k_beta: &BigInt) -> Rational {
    let exponent = BigInt::from(n) - k_beta;
    let e = exponent.to_i64().expect("exponent fits in i64");
    int_power(&BigInt::from(r.get().clone()), -e)
}

fn expect_kind(table: &InvariantTable, kind: InvariantKind) -> Result<(), TransformError> {
    if table.kind != kind {
        return Err(TransformError::KindMismatch {
            expected: kind.as_str(),
            got: table.kind.as_str(),
        });
    }
    Ok(())
}

/// Applies `direction` to `table`, returning the new table and the per-class
/// breakdown of every divisor sum.
pub fn transform(
    table: &InvariantTable,
    direction: Direction,
) -> Result<(InvariantTable, TransformReport), TransformError> {
    expect_kind(table, direction.source())?;
    let relation = match direction {
        Direction::GvToGw | Direction::GwToGv => Relation::MultipleCover,
        Direction::GvToQk | Direction::QkToGv => Relation::for_qk(table.n)?,
    };
    table.validate()?;
    if relation != Relation::MultipleCover {
        for beta in table.entries.keys() {
            if let DegreeVerdict::Violated(reason) =
                degree_check(table.n, &table.insertion_degrees, &table.geometry, beta)?
            {
                return Err(TransformError::DegreeHypothesisViolated {
                    class: beta.clone(),
                    reason,
                });
            }
        }
    }

    let mut out = BTreeMap::new();
    let mut reports = Vec::with_capacity(table.len());
    for (beta, value) in &table.entries {
        let branch = if table.geometry.canonical_degree(beta)?.is_zero() {
            Branch::CalabiYau
        } else {
            Branch::Fano
        };
        let mut contributions = Vec::new();
        match branch {
            Branch::Fano => contributions.push(Contribution {
                r: PositiveInt::one(),
                coefficient: Rational::one(),
                source: beta.clone(),
                source_value: value.clone(),
                term: value.clone(),
            }),
            Branch::CalabiYau => {
                for r in divisors(&beta.index()) {
                    let mut coefficient = relation.coefficient(&r, table.n);
                    if direction.is_inverse() {
                        coefficient *= Rational::from_integer(BigInt::from(mobius(&r)));
                    }
                    if coefficient.is_zero() {
                        continue;
                    }
                    let source = beta.divide(&r)?;
                    // validate() guarantees presence
                    let source_value = table.entries[&source].clone();
                    let term = &coefficient * &source_value;
                    contributions.push(Contribution {
                        r,
                        coefficient,
                        source,
                        source_value,
                        term,
                    });
                }
            }
        }
        let total = contributions.iter().fold(Rational::zero(), |acc, c| acc + &c.term);
        reports.push(EntryReport {
            class: beta.clone(),
            branch,
            contributions,
            integral: total.is_integer(),
            value: total.clone(),
        });
        out.insert(beta.clone(), total);
    }
    let report = TransformReport {
        direction,
        relation,
        n: table.n,
        entries: reports,
    };
    Ok((table.with_entries(direction.target(), out), report))
}

/// `GW_beta = sum_{r | ind beta} r^(n-3) GV_{beta/r}` when `K_X.beta = 0`,
/// `GW_beta = GV_beta` otherwise.
pub fn gw_from_gv(gv: &InvariantTable) -> Result<InvariantTable, TransformError> {
    transform(gv, Direction::GvToGw).map(|(t, _)| t)
}

/// Möbius inverse of [`gw_from_gv`].
pub fn gv_from_gw(gw: &InvariantTable) -> Result<InvariantTable, TransformError> {
    transform(gw, Direction::GwToGv).map(|(t, _)| t)
}

pub fn qk_from_gv(gv: &InvariantTable) -> Result<InvariantTable, TransformError> {
    transform(gv, Direction::GvToQk).map(|(t, _)| t)
}

/// `GV_beta = QK_beta + delta_{K.beta,0} sum_{r | ind beta, r > 1} mu(r) c(r) QK_{beta/r}`
/// with `c(r) = r, 1, r^(n-3)` for one, two and more insertions.
pub fn gv_from_qk(qk: &InvariantTable) -> Result<InvariantTable, TransformError> {
    transform(qk, Direction::QkToGv).map(|(t, _)| t)
}

/// `GV^{(exponent)}_{d beta} = sum_{k | d} (d/k)^exponent GV_{d beta / k}`
/// for primitive `beta`.
pub fn gv_power_sum(
    gv: &InvariantTable,
    exponent: u32,
    d: &PositiveInt,
    beta_primitive: &CurveClass,
) -> Result<Rational, TransformError> {
    expect_kind(gv, InvariantKind::Gv)?;
    if !beta_primitive.is_primitive() {
        return Err(TransformError::NotPrimitive(beta_primitive.clone()));
    }
    let top = beta_primitive.scale(d);
    let mut sum = Rational::zero();
    for k in divisors(d) {
        let quotient = top.divide(&k)?;
        let value = gv.get(&quotient).ok_or_else(|| TransformError::NotDivisorClosed {
            missing: quotient.clone(),
            of: top.clone(),
        })?;
        let multiple = BigInt::from(d.get() / k.get());
        sum += int_power(&multiple, exponent as i64) * value;
    }
    Ok(sum)
}

/// Both sides of the leg-coefficient identity at one `(beta, d)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LegIdentityCase {
    pub beta: CurveClass,
    pub d: u64,
    pub power_sum_side: Rational,
    pub divisor_equation_side: Rational,
}

impl LegIdentityCase {
    pub fn holds(&self) -> bool {
        self.power_sum_side == self.divisor_equation_side
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LegIdentityReport {
    pub cases: Vec<LegIdentityCase>,
}

impl LegIdentityReport {
    pub fn is_ok(&self) -> bool {
        self.cases.iter().all(LegIdentityCase::holds)
    }

    pub fn failures(&self) -> impl Iterator<Item = &LegIdentityCase> {
        self.cases.iter().filter(|c| !c.holds())
    }
}

/// Checks, for every primitive `beta` with `K_X.beta = 0` in `gv` and every
/// `d <= d_max` with `d beta` in `gv`,
///
/// `(beta.phi) (GV^(1)_{d beta} - GV^(3)_{d beta} / d^2)
///     = sum_{k | d} GV_{d beta/k}(phi) - GW_{d beta}(phi)`
///
/// where one-point invariants with the divisor `phi` are expanded by the
/// divisor equation, `I_alpha(phi) = (alpha.phi) I_alpha`. The left side is
/// computed from power sums of `gv`; the right side reads `gw` directly.
pub fn remark_leg_identity_check(
    gv: &InvariantTable,
    gw: &InvariantTable,
    divisor: &[BigInt],
    d_max: u64,
) -> Result<LegIdentityReport, TransformError> {
    expect_kind(gv, InvariantKind::Gv)?;
    expect_kind(gw, InvariantKind::Gw)?;
    if gv.n != 0 || gw.n != 0 || gv.geometry != gw.geometry || gv.truncation != gw.truncation {
        return Err(TransformError::IncompatibleTables);
    }
    let mut cases = Vec::new();
    for beta in gv.entries.keys() {
        if !beta.is_primitive() || !gv.geometry.canonical_degree(beta)?.is_zero() {
            continue;
        }
        let beta_phi = Rational::from_integer(beta.dot(divisor)?);
        for d in 1..=d_max {
            let dp = PositiveInt::from_u64(d);
            let top = beta.scale(&dp);
            if !gv.entries.contains_key(&top) {
                continue;
            }
            let d_rat = Rational::from_integer(BigInt::from(d));
            let gv1 = gv_power_sum(gv, 1, &dp, beta)?;
            let gv3 = gv_power_sum(gv, 3, &dp, beta)?;
            let power_sum_side = &beta_phi * (gv1 - gv3 / (&d_rat * &d_rat));

            let mut divisor_equation_side = Rational::zero();
            for k in divisors(&dp) {
                let quotient = top.divide(&k)?;
                let pairing = Rational::from_integer(quotient.dot(divisor)?);
                divisor_equation_side += pairing * &gv.entries[&quotient];
            }
            let gw_top = gw.get(&top).ok_or_else(|| TransformError::NotDivisorClosed {
                missing: top.clone(),
                of: top.clone(),
            })?;
            divisor_equation_side -= Rational::from_integer(top.dot(divisor)?) * gw_top;
            cases.push(LegIdentityCase {
                beta: beta.clone(),
                d,
                power_sum_side,
                divisor_equation_side,
            });
        }
    }
    Ok(LegIdentityReport { cases })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegralityReport {
    pub kind: InvariantKind,
    pub offenders: Vec<(CurveClass, Rational)>,
}

impl IntegralityReport {
    pub fn is_clean(&self) -> bool {
        self.offenders.is_empty()
    }
}

/// Lists every entry whose reduced denominator is not 1.
pub fn integrality_audit(table: &InvariantTable) -> IntegralityReport {
    IntegralityReport {
        kind: table.kind,
        offenders: table
            .entries
            .iter()
            .filter(|(_, v)| !v.is_integer())
            .map(|(b, v)| (b.clone(), v.clone()))
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn cls(c: &[u64]) -> CurveClass {
        CurveClass::from_u64s(c).unwrap()
    }

    fn table(
        kind: InvariantKind,
        n: u32,
        degrees: Vec<u32>,
        pairing: &[i64],
        entries: &[(&[u64], Rational)],
    ) -> InvariantTable {
        let geom = Arc::new(GeometryModel::from_i64s("test", 3, pairing).unwrap());
        let trunc = Truncation::new(vec![1; pairing.len()], 12).unwrap();
        let entries = entries.iter().map(|(c, v)| (cls(c), v.clone())).collect();
        InvariantTable::new(kind, n, degrees, geom, trunc, entries).unwrap()
    }

    use InvariantKind::*;

    #[test]
    fn gw_from_gv_examples() {
        let gv = table(Gv, 0, vec![], &[0], &[(&[1], q(1, 1)), (&[2], q(0, 1))]);
        let gw = gw_from_gv(&gv).unwrap();
        assert_eq!(gw.get(&cls(&[1])), Some(&q(1, 1)));
        assert_eq!(gw.get(&cls(&[2])), Some(&q(1, 8)));
        assert_eq!(gw.kind(), Gw);

        let (a, b) = (q(7, 1), q(-3, 1));
        let gv = table(Gv, 3, vec![0, 0, 0], &[0], &[(&[1], a.clone()), (&[2], b.clone())]);
        assert_eq!(gw_from_gv(&gv).unwrap().get(&cls(&[2])), Some(&(b + a)));

        let gv = table(Gv, 0, vec![], &[-1], &[(&[1], q(7, 1))]);
        assert_eq!(gw_from_gv(&gv).unwrap().get(&cls(&[1])), Some(&q(7, 1)));
    }

    #[test]
    fn gv_from_gw_examples() {
        let gw = table(Gw, 0, vec![], &[0], &[(&[1], q(1, 1)), (&[2], q(9, 8))]);
        let gv = gv_from_gw(&gw).unwrap();
        assert_eq!(gv.get(&cls(&[2])), Some(&q(1, 1)));

        let (a, c) = (q(4, 1), q(11, 1));
        let gw = table(Gw, 3, vec![1, 1, 1], &[0], &[(&[1], a.clone()), (&[2], c.clone())]);
        assert_eq!(gv_from_gw(&gw).unwrap().get(&cls(&[2])), Some(&(c - a)));

        let gw = table(Gw, 0, vec![], &[0, 0], &[(&[1, 2], q(5, 3))]);
        assert_eq!(gv_from_gw(&gw).unwrap().get(&cls(&[1, 2])), Some(&q(5, 3)));
    }

    #[test]
    fn qk_from_gv_examples() {
        let (a, b) = (q(3, 1), q(5, 1));
        let entries: &[(&[u64], Rational)] = &[(&[1], a.clone()), (&[2], b.clone())];
        // m = 3, K.beta = 0: n = 1 needs degree 1; n = 2 needs degrees summing to 2
        let qk1 = qk_from_gv(&table(Gv, 1, vec![1], &[0], entries)).unwrap();
        assert_eq!(qk1.get(&cls(&[2])), Some(&(b.clone() + q(2, 1) * &a)));
        let qk2 = qk_from_gv(&table(Gv, 2, vec![1, 1], &[0], entries)).unwrap();
        assert_eq!(qk2.get(&cls(&[2])), Some(&(b.clone() + &a)));
        let qk4 = qk_from_gv(&table(Gv, 4, vec![0, 1, 2, 3], &[0], entries)).unwrap();
        assert_eq!(qk4.get(&cls(&[2])), Some(&(b + q(2, 1) * a)));
    }

    #[test]
    fn gv_from_qk_examples() {
        let (q1, q2) = (q(6, 1), q(20, 1));
        let entries: &[(&[u64], Rational)] = &[(&[1], q1.clone()), (&[2], q2.clone())];
        let gv1 = gv_from_qk(&table(Qk, 1, vec![1], &[0], entries)).unwrap();
        assert_eq!(gv1.get(&cls(&[2])), Some(&(q2.clone() - q(2, 1) * &q1)));
        let gv2 = gv_from_qk(&table(Qk, 2, vec![0, 2], &[0], entries)).unwrap();
        assert_eq!(gv2.get(&cls(&[2])), Some(&(q2 - q1)));
        // K.beta = -2 and n = 1: degree must be 3 - (-2) - 2 = 3
        let gv = gv_from_qk(&table(Qk, 1, vec![3], &[-1], &[(&[2], q(9, 1))])).unwrap();
        assert_eq!(gv.get(&cls(&[2])), Some(&q(9, 1)));
    }

    #[test]
    fn qk_errors() {
        let t = table(Gv, 0, vec![], &[0], &[(&[1], q(1, 1))]);
        assert_eq!(qk_from_gv(&t), Err(TransformError::UnsupportedN));
        let t = table(Qk, 0, vec![], &[0], &[(&[1], q(1, 1))]);
        assert_eq!(gv_from_qk(&t), Err(TransformError::UnsupportedN));
        let t = table(Gv, 1, vec![2], &[0], &[(&[1], q(1, 1))]);
        assert!(matches!(
            qk_from_gv(&t),
            Err(TransformError::DegreeHypothesisViolated { .. })
        ));
        let t = table(Gw, 1, vec![1], &[0], &[(&[1], q(1, 1))]);
        assert!(matches!(qk_from_gv(&t), Err(TransformError::KindMismatch { .. })));
    }

    #[test]
    fn missing_divisor_is_an_error() {
        let t = table(Gv, 0, vec![], &[0, 0], &[(&[2, 4], q(1, 1))]);
        assert_eq!(
            gw_from_gv(&t),
            Err(TransformError::NotDivisorClosed {
                missing: cls(&[1, 2]),
                of: cls(&[2, 4])
            })
        );
        // Fano classes need no divisors.
        let t = table(Gv, 0, vec![], &[0, -1], &[(&[2, 4], q(1, 1))]);
        assert!(gw_from_gv(&t).is_ok());
    }

    #[test]
    fn table_construction_errors() {
        let geom = Arc::new(GeometryModel::from_i64s("g", 3, &[0]).unwrap());
        let trunc = Truncation::new(vec![1], 2).unwrap();
        let entries: BTreeMap<_, _> = [(cls(&[3]), q(1, 1))].into_iter().collect();
        assert_eq!(
            InvariantTable::new(Gv, 0, vec![], geom.clone(), trunc.clone(), entries),
            Err(TransformError::OutOfTruncation(cls(&[3])))
        );
        assert_eq!(
            InvariantTable::new(Gv, 2, vec![1], geom, trunc, BTreeMap::new()),
            Err(TransformError::InsertionCount { n: 2, got: 1 })
        );
    }

    #[test]
    fn report_breakdown() {
        let gv = table(
            Gv,
            0,
            vec![],
            &[0],
            &[(&[1], q(2, 1)), (&[2], q(3, 1)), (&[3], q(5, 1)), (&[6], q(7, 1))],
        );
        let (gw, report) = transform(&gv, Direction::GvToGw).unwrap();
        assert!(report.is_consistent());
        let six = report.entries.iter().find(|e| e.class == cls(&[6])).unwrap();
        let rs: Vec<u64> = six.contributions.iter().map(|c| c.r.to_u64().unwrap()).collect();
        assert_eq!(rs, [1, 2, 3, 6]);
        // 7 + 5/8 + 3/27 + 2/216
        assert_eq!(gw.get(&cls(&[6])), Some(&(q(7, 1) + q(5, 8) + q(3, 27) + q(2, 216))));
        assert!(!six.integral);

        // mu(4) = 0 terms are omitted from the inverse breakdown.
        let gw = table(Gw, 0, vec![], &[0], &[(&[1], q(1, 1)), (&[2], q(1, 1)), (&[4], q(1, 1))]);
        let (_, report) = transform(&gw, Direction::GwToGv).unwrap();
        let four = report.entries.iter().find(|e| e.class == cls(&[4])).unwrap();
        assert_eq!(four.contributions.len(), 2);
        assert_eq!(report.relation, Relation::MultipleCover);
    }

    #[test]
    fn degree_check_examples() {
        let zero = BigInt::zero();
        assert!(degree_check_at(1, &[1], 3, &zero).is_ok());
        assert!(!degree_check_at(1, &[2], 3, &zero).is_ok());
        assert!(degree_check_at(2, &[1, 1], 3, &zero).is_ok());
        assert!(degree_check_at(5, &[0, 0, 3, 3, 3], 3, &zero).is_ok());
        assert!(!degree_check_at(0, &[], 3, &zero).is_ok());
        assert!(!degree_check_at(2, &[1], 3, &zero).is_ok());
    }

    #[test]
    fn vanishing_examples() {
        assert!(vanishing_by_dimension(3, &BigInt::zero(), 2));
        assert!(!vanishing_by_dimension(3, &BigInt::zero(), 1));
        assert!(vanishing_by_dimension(5, &BigInt::from(-2), 6));
        assert!(!vanishing_by_dimension(5, &BigInt::from(-2), 5));
    }

    #[test]
    fn kawasaki_examples() {
        let two = PositiveInt::from_u64(2);
        assert_eq!(kawasaki_constant(&two, 1, &BigInt::zero()), q(1, 2));
        assert_eq!(kawasaki_constant(&PositiveInt::from_u64(3), 2, &BigInt::zero()), q(1, 9));
        assert_eq!(kawasaki_constant(&two, 0, &BigInt::from(-3)), q(1, 8));
    }

    #[test]
    fn kawasaki_matches_cyclotomic_product() {
        // (prod 1/(1 - zeta^k))^(n - K.beta) = r^-(n - K.beta), numerically
        for r in 2..=12u64 {
            let pr = PositiveInt::from_u64(r);
            let norm = crate::arith::cyclotomic_norm_product(&pr).unwrap();
            for (n, k) in [(0u32, -1i64), (1, 0), (2, -2), (3, 0)] {
                let e = (n as i64 - k) as i32;
                let numeric = (num_complex::Complex64::new(1.0, 0.0) / norm).powi(e);
                let exact = kawasaki_constant(&pr, n, &BigInt::from(k));
                let exact = exact.numer().to_f64().unwrap() / exact.denom().to_f64().unwrap();
                assert!((numeric.re - exact).abs() < 1e-9 && numeric.im.abs() < 1e-9);
            }
        }
    }

    #[test]
    fn power_sum_examples() {
        let (a, b) = (q(3, 1), q(-2, 1));
        let gv = table(Gv, 0, vec![], &[0, 0], &[(&[1, 1], a.clone()), (&[2, 2], b.clone())]);
        let beta = cls(&[1, 1]);
        let one = PositiveInt::one();
        let two = PositiveInt::from_u64(2);
        assert_eq!(gv_power_sum(&gv, 7, &one, &beta).unwrap(), a);
        // (d/k)^e weights: k = 1 carries d^e on GV_{d beta}, k = d carries 1 on GV_beta
        assert_eq!(gv_power_sum(&gv, 1, &two, &beta).unwrap(), q(2, 1) * &b + &a);
        assert_eq!(gv_power_sum(&gv, 3, &two, &beta).unwrap(), q(8, 1) * &b + &a);
        assert_eq!(
            gv_power_sum(&gv, 1, &two, &cls(&[2, 2])),
            Err(TransformError::NotPrimitive(cls(&[2, 2])))
        );
        assert!(matches!(
            gv_power_sum(&gv, 1, &PositiveInt::from_u64(3), &beta),
            Err(TransformError::NotDivisorClosed { .. })
        ));
    }

    #[test]
    fn leg_identity_examples() {
        let gv = table(Gv, 0, vec![], &[0, 0], &[(&[1, 0], q(1, 1)), (&[2, 0], q(0, 1))]);
        let gw = gw_from_gv(&gv).unwrap();
        let phi = [BigInt::from(1), BigInt::from(0)];
        let report = remark_leg_identity_check(&gv, &gw, &phi, 6).unwrap();
        assert!(report.is_ok());
        assert_eq!(report.cases.len(), 2);
        // d = 2: GV^(1) = 2*0 + 1, GV^(3) = 8*0 + 1, so 1 - 1/4; the other side is
        // (beta.phi) GV_beta - (2 beta.phi) GW_{2 beta} = 1 - 2/8.
        assert_eq!(report.cases[1].power_sum_side, q(3, 4));
        assert_eq!(report.cases[1].divisor_equation_side, q(3, 4));
        // d = 1: both sides vanish
        assert_eq!(report.cases[0].power_sum_side, q(0, 1));
        assert_eq!(report.cases[0].divisor_equation_side, q(0, 1));

        // A corrupted GW entry is caught.
        let mut bad = gw.entries().clone();
        bad.insert(cls(&[2, 0]), q(1, 1));
        let bad = gw.with_entries(Gw, bad);
        assert!(!remark_leg_identity_check(&gv, &bad, &phi, 6).unwrap().is_ok());
    }

    #[test]
    fn integrality_examples() {
        let gv = table(Gv, 0, vec![], &[0], &[(&[1], q(3, 1)), (&[2], q(-5, 1))]);
        assert!(integrality_audit(&gv).is_clean());
        let gw = table(Gw, 0, vec![], &[0], &[(&[1], q(1, 1)), (&[2], q(9, 8))]);
        let report = integrality_audit(&gw);
        assert_eq!(report.offenders, [(cls(&[2]), q(9, 8))]);
    }

    #[test]
    fn fano_tables_are_fixed() {
        let entries: &[(&[u64], Rational)] = &[(&[1, 1], q(3, 2)), (&[2, 2], q(-1, 3)), (&[0, 3], q(4, 1))];
        for n in 0..5u32 {
            let degrees = vec![0; n as usize];
            let gv = table(Gv, n, degrees.clone(), &[-1, -1], entries);
            assert_eq!(gw_from_gv(&gv).unwrap().entries(), gv.entries());
            let gw = table(Gw, n, degrees, &[-1, -1], entries);
            assert_eq!(gv_from_gw(&gw).unwrap().entries(), gw.entries());
        }
        // n >= 3 has no degree hypothesis
        let gv = table(Gv, 3, vec![0, 0, 0], &[-1, -1], entries);
        assert_eq!(qk_from_gv(&gv).unwrap().entries(), gv.entries());
        let qk = table(Qk, 4, vec![0; 4], &[-1, -1], entries);
        assert_eq!(gv_from_qk(&qk).unwrap().entries(), qk.entries());
    }

    #[test]
    fn qk_multi_point_agrees_with_gw() {
        let entries: &[(&[u64], Rational)] = &[(&[1], q(2, 1)), (&[2], q(3, 1)), (&[4], q(-1, 1))];
        for n in 3..6u32 {
            let gv = table(Gv, n, vec![1; n as usize], &[0], entries);
            assert_eq!(qk_from_gv(&gv).unwrap().entries(), gw_from_gv(&gv).unwrap().entries());
        }
    }
}
