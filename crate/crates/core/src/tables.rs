//! Ingestion of tabulated class-group data along Z_ℓ-towers and the
//! verification report built on top of it.
//!
//! Input is either a JSON array of rows or a CSV file with one line per
//! layer and the columns `ell,d,tower,n,clog,clog_ell,clp`; group factors
//! are `;`-separated in CSV (`9;3`), and both formats accept bracket lists
//! such as `"[9, 3]"`. In CSV an empty optional cell means "not given".

use std::fmt;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::classgroups::{cl_prime, splitting, AbelianLGroup, ClassGroupError, Splitting};
use crate::growth::{
    fit_invariants, fit_with_known_mu, gold_lambda_at, GrowthError, InvariantTriple, Stabilization,
};

#[derive(Debug, Error)]
pub enum TableError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("parse error ({context}): {message}")]
    Parse { context: String, message: String },
    #[error("row {row}, field {field}: factor {factor} is not a power of {ell}")]
    InvalidGroupShape { row: usize, field: String, ell: u64, factor: u64 },
    #[error("row {row}: layer indices must run 0, 1, 2, … (found {found:?})")]
    NonContiguousLayers { row: usize, found: Vec<u32> },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tower {
    Cyclotomic,
    Anticyclotomic,
}

impl fmt::Display for Tower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Tower::Cyclotomic => "cyclotomic",
            Tower::Anticyclotomic => "anticyclotomic",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Layer {
    pub n: u32,
    pub clog: AbelianLGroup,
    pub clog_ell: Option<AbelianLGroup>,
    pub clp: Option<AbelianLGroup>,
}

/// Printed invariants: μ, λ̃, ν̃ of the logarithmic tower, the classical
/// λ, ν, and the listed differences e′_n − e′_{n−1}.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Expected {
    pub mu: Option<i64>,
    pub lambda: Option<i64>,
    pub nu: Option<i64>,
    pub lambda_classical: Option<i64>,
    pub nu_classical: Option<i64>,
    pub e_diffs: Option<Vec<i64>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TableRow {
    pub table: Option<String>,
    pub ell: u64,
    pub d: i64,
    pub tower: Tower,
    pub layers: Vec<Layer>,
    pub expected: Option<Expected>,
}

impl TableRow {
    /// Exponents of |Cl̃_n|.
    pub fn clog_exponents(&self) -> Vec<i64> {
        self.layers.iter().map(|l| l.clog.exponent() as i64).collect()
    }

    /// Exponents of |Cl′_n| if every layer lists Cl′.
    pub fn clp_exponents(&self) -> Option<Vec<i64>> {
        self.layers.iter().map(|l| l.clp.as_ref().map(|g| g.exponent() as i64)).collect()
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawGroup {
    List(Vec<u64>),
    Text(String),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawLayer {
    n: u32,
    clog: RawGroup,
    clog_ell: Option<RawGroup>,
    clp: Option<RawGroup>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRow {
    table: Option<String>,
    ell: u64,
    d: i64,
    tower: Tower,
    layers: Vec<RawLayer>,
    expected: Option<Expected>,
}

fn parse_factor_list(text: &str) -> Result<Vec<u64>, String> {
    let inner = text.trim().trim_start_matches('[').trim_end_matches(']');
    inner
        .split([',', ';'])
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<u64>().map_err(|_| format!("'{s}' is not a positive integer")))
        .collect()
}

fn to_group(raw: &RawGroup, ell: u64, row: usize, field: &str) -> Result<AbelianLGroup, TableError> {
    let factors = match raw {
        RawGroup::List(v) => v.clone(),
        RawGroup::Text(s) => parse_factor_list(s).map_err(|message| TableError::Parse {
            context: format!("row {row}, field {field}"),
            message,
        })?,
    };
    AbelianLGroup::from_factors(ell, &factors).map_err(|e| match e {
        ClassGroupError::InvalidGroupShape { factor, .. } => {
            TableError::InvalidGroupShape { row, field: field.to_string(), ell, factor }
        }
        other => TableError::Parse { context: format!("row {row}, field {field}"), message: other.to_string() },
    })
}

fn build_row(raw: RawRow, row: usize) -> Result<TableRow, TableError> {
    let ell = raw.ell;
    if !crate::arith::is_prime(ell) || ell == 2 {
        return Err(TableError::Parse { context: format!("row {row}, field ell"), message: format!("{ell} is not an odd prime") });
    }
    let found: Vec<u32> = raw.layers.iter().map(|l| l.n).collect();
    if found.iter().enumerate().any(|(i, &n)| n as usize != i) {
        return Err(TableError::NonContiguousLayers { row, found });
    }
    let layers = raw
        .layers
        .iter()
        .map(|l| {
            Ok(Layer {
                n: l.n,
                clog: to_group(&l.clog, ell, row, &format!("layers[{}].clog", l.n))?,
                clog_ell: l
                    .clog_ell
                    .as_ref()
                    .map(|g| to_group(g, ell, row, &format!("layers[{}].clog_ell", l.n)))
                    .transpose()?,
                clp: l.clp.as_ref().map(|g| to_group(g, ell, row, &format!("layers[{}].clp", l.n))).transpose()?,
            })
        })
        .collect::<Result<Vec<_>, TableError>>()?;
    Ok(TableRow { table: raw.table, ell, d: raw.d, tower: raw.tower, layers, expected: raw.expected })
}

/// Parses a JSON array of rows.
pub fn parse_json(text: &str) -> Result<Vec<TableRow>, TableError> {
    let raw: Vec<RawRow> = serde_json::from_str(text).map_err(|e| TableError::Parse {
        context: format!("line {}, column {}", e.line(), e.column()),
        message: e.to_string(),
    })?;
    raw.into_iter().enumerate().map(|(i, r)| build_row(r, i)).collect()
}

#[derive(Deserialize)]
struct CsvRecord {
    ell: u64,
    d: i64,
    tower: Tower,
    n: u32,
    clog: String,
    clog_ell: Option<String>,
    clp: Option<String>,
}

/// Parses CSV with one line per layer; consecutive lines with the same
/// (ell, d, tower) form one row.
pub fn parse_csv(text: &str) -> Result<Vec<TableRow>, TableError> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let mut raws: Vec<RawRow> = Vec::new();
    for (i, rec) in reader.deserialize::<CsvRecord>().enumerate() {
        let rec = rec.map_err(|e| TableError::Parse { context: format!("CSV record {}", i + 1), message: e.to_string() })?;
        let opt = |s: Option<String>| s.filter(|s| !s.is_empty()).map(RawGroup::Text);
        let layer = RawLayer { n: rec.n, clog: RawGroup::Text(rec.clog), clog_ell: opt(rec.clog_ell), clp: opt(rec.clp) };
        match raws.last_mut() {
            Some(r) if r.ell == rec.ell && r.d == rec.d && r.tower == rec.tower => r.layers.push(layer),
            _ => raws.push(RawRow { table: None, ell: rec.ell, d: rec.d, tower: rec.tower, layers: vec![layer], expected: None }),
        }
    }
    raws.into_iter().enumerate().map(|(i, r)| build_row(r, i)).collect()
}

/// Parses a file, choosing JSON or CSV by its first non-blank character.
pub fn parse_tables(path: &Path) -> Result<Vec<TableRow>, TableError> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| TableError::Io { path: path.display().to_string(), source })?;
    parse_str(&text)
}

pub fn parse_str(text: &str) -> Result<Vec<TableRow>, TableError> {
    match text.trim_start().chars().next() {
        Some('[') | None => {
            if text.trim().is_empty() {
                Ok(Vec::new())
            } else {
                parse_json(text)
            }
        }
        _ => parse_csv(text),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
    Info,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skipped => "skipped",
            Status::Info => "info",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    /// Source of the check: GrowthLaw, Gold, OrderIdentity, FW, ClPrimeOracle.
    pub tag: &'static str,
    pub name: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub computed: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    fn new(tag: &'static str, name: impl Into<String>, status: Status) -> Self {
        Check { tag, name: name.into(), status, expected: None, computed: None, detail: None }
    }

    fn compare(tag: &'static str, name: impl Into<String>, expected: String, computed: String) -> Self {
        let status = if expected == computed { Status::Pass } else { Status::Fail };
        Check { expected: Some(expected), computed: Some(computed), ..Check::new(tag, name, status) }
    }

    fn detail(mut self, d: impl Into<String>) -> Self {
        self.detail = Some(d.into());
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RowReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub table: Option<String>,
    pub ell: String,
    pub d: String,
    pub tower: Tower,
    /// The fitted triple, when a fit was possible.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fit: Option<FitSummary>,
    pub checks: Vec<Check>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FitSummary {
    pub route: String,
    pub mu: String,
    pub lambda: String,
    pub nu: String,
    pub n0: String,
}

/// Counts; serialized as decimal strings like every other number in a report.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    #[serde(serialize_with = "decimal")]
    pub rows: usize,
    #[serde(serialize_with = "decimal")]
    pub pass: usize,
    #[serde(serialize_with = "decimal")]
    pub fail: usize,
    #[serde(serialize_with = "decimal")]
    pub skipped: usize,
    #[serde(serialize_with = "decimal")]
    pub info: usize,
}

fn decimal<S: serde::Serializer>(v: &usize, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub rows: Vec<RowReport>,
    pub summary: Summary,
}

impl VerificationReport {
    pub fn failures(&self) -> usize {
        self.summary.fail
    }
}

/// How the growth law was fitted to a row.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FitRoute {
    ThreePoint,
    KnownMuDetected,
    KnownMuFromZero,
}

impl fmt::Display for FitRoute {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FitRoute::ThreePoint => "three-point fit",
            FitRoute::KnownMuDetected => "known mu, stabilization detected",
            FitRoute::KnownMuFromZero => "known mu, stable from layer 0",
        })
    }
}

/// Fits the Cl̃ exponents of a row. Cyclotomic towers of abelian fields have
/// μ̃ = 0, which is used when three layers are not yet on the asymptotic
/// curve or only two layers are given; anticyclotomic rows use the printed μ
/// and assume the formula holds from layer 0.
pub fn fit_row(row: &TableRow) -> Result<(FitRoute, InvariantTriple), GrowthError> {
    let e = row.clog_exponents();
    match row.tower {
        Tower::Cyclotomic => {
            if e.len() >= 3 {
                match fit_invariants(&e, row.ell) {
                    Ok(t) => return Ok((FitRoute::ThreePoint, t)),
                    Err(GrowthError::InconsistentSequence(_)) => {}
                    Err(other) => return Err(other),
                }
            }
            fit_with_known_mu(&e, row.ell, 0, Stabilization::Detect).map(|t| (FitRoute::KnownMuDetected, t))
        }
        Tower::Anticyclotomic => {
            let mu = row.expected.as_ref().and_then(|x| x.mu).ok_or_else(|| {
                GrowthError::InconsistentSequence("no μ given for a non-cyclotomic tower".into())
            })?;
            fit_with_known_mu(&e, row.ell, mu, Stabilization::AssumeFromZero).map(|t| (FitRoute::KnownMuFromZero, t))
        }
    }
}

fn growth_checks(row: &TableRow, checks: &mut Vec<Check>) -> Option<FitSummary> {
    let exp = row.expected.as_ref().filter(|x| x.lambda.is_some() && x.nu.is_some());
    let Some(exp) = exp else {
        checks.push(Check::new("GrowthLaw", "fit lambda, nu", Status::Skipped).detail("insufficient data"));
        if row.tower == Tower::Cyclotomic {
            checks.push(Check::new("FW", "fitted mu = 0", Status::Skipped).detail("insufficient data"));
        }
        return None;
    };
    let (route, t) = match fit_row(row) {
        Ok(v) => v,
        Err(e) => {
            checks.push(
                Check::compare("GrowthLaw", "fit lambda, nu", format!("{}, {}", exp.lambda.unwrap(), exp.nu.unwrap()), "none".into())
                    .detail(e.to_string()),
            );
            return None;
        }
    };
    checks.push(
        Check::compare("GrowthLaw", "fit lambda", exp.lambda.unwrap().to_string(), t.lambda.to_string())
            .detail(route.to_string()),
    );
    checks.push(Check::compare("GrowthLaw", "fit nu", exp.nu.unwrap().to_string(), t.nu.to_string()).detail(route.to_string()));
    if row.tower == Tower::Cyclotomic {
        let c = match route {
            FitRoute::ThreePoint => Check::compare("FW", "fitted mu = 0", "0".into(), t.mu.to_string()),
            _ => Check::new("FW", "fitted mu = 0", Status::Skipped)
                .detail("mu not determined by the data; the fit assumed mu = 0"),
        };
        checks.push(c);
    }
    Some(FitSummary {
        route: route.to_string(),
        mu: t.mu.to_string(),
        lambda: t.lambda.to_string(),
        nu: t.nu.to_string(),
        n0: t.n0.to_string(),
    })
}

fn gold_checks(row: &TableRow, checks: &mut Vec<Check>) {
    if row.tower != Tower::Cyclotomic {
        return;
    }
    let Some(ep) = row.clp_exponents() else { return };
    if ep.len() < 2 {
        return;
    }
    let expected = row.expected.as_ref();
    if let Some(diffs) = expected.and_then(|x| x.e_diffs.as_ref()) {
        let computed: Vec<String> = ep.windows(2).map(|w| (w[1] - w[0]).to_string()).collect();
        let printed: Vec<String> = diffs.iter().map(|d| d.to_string()).collect();
        checks.push(Check::compare("Gold", "e' differences", printed.join(", "), computed.join(", ")));
    }
    if row.d > 0 {
        checks.push(Check::new("Gold", "lambda' by Gold's criterion", Status::Skipped).detail("base field is not imaginary quadratic"));
        return;
    }
    let fired = gold_lambda_at(&ep, row.ell);
    match (expected.and_then(|x| x.lambda), fired) {
        (Some(l), Some((n, lp))) => checks.push(
            Check::compare("Gold", "lambda' by Gold's criterion", l.to_string(), lp.to_string())
                .detail(format!("criterion fires at n = {n}")),
        ),
        (Some(l), None) => checks.push(
            Check::compare("Gold", "lambda' by Gold's criterion", l.to_string(), "none".into())
                .detail("criterion does not fire on the given layers"),
        ),
        (None, Some((n, lp))) => {
            let mut c = Check::new("Gold", "lambda' by Gold's criterion", Status::Info).detail(format!("criterion fires at n = {n}"));
            c.computed = Some(lp.to_string());
            checks.push(c);
        }
        (None, None) => checks.push(
            Check::new("Gold", "lambda' by Gold's criterion", Status::Info).detail("criterion does not fire on the given layers"),
        ),
    }
}

fn order_identity_checks(row: &TableRow, checks: &mut Vec<Check>) {
    for l in &row.layers {
        if let (Some(ce), Some(cp)) = (&l.clog_ell, &l.clp) {
            checks.push(
                Check::compare(
                    "OrderIdentity",
                    format!("layer {}: |Cl~| = |Cl~[l]| * |Cl'|", l.n),
                    (ce.exponent() + cp.exponent()).to_string(),
                    l.clog.exponent().to_string(),
                )
                .detail("exponents of l"),
            );
        }
    }
}

fn cl_prime_checks(row: &TableRow, checks: &mut Vec<Check>) {
    if row.tower != Tower::Cyclotomic || row.d >= 0 {
        return;
    }
    let Some(printed) = row.layers.first().and_then(|l| l.clp.as_ref()) else { return };
    let c = match cl_prime(row.d, row.ell) {
        Ok(g) => Check::compare("ClPrimeOracle", "layer 0 Cl' from quadratic forms", printed.to_string(), g.to_string()),
        Err(e) => Check::compare("ClPrimeOracle", "layer 0 Cl' from quadratic forms", printed.to_string(), "error".into())
            .detail(e.to_string()),
    };
    checks.push(c);
}

fn splitting_tag(row: &TableRow, checks: &mut Vec<Check>) {
    if row.tower != Tower::Cyclotomic {
        return;
    }
    let s = splitting(row.d, row.ell);
    let name = match s {
        Splitting::Split => "split",
        Splitting::Inert => "inert",
        Splitting::Ramified => "ramified",
    };
    let mut c = Check::new("ClPrimeOracle", "decomposition of l in Q(sqrt d)", Status::Info);
    c.computed = Some(name.to_string());
    checks.push(c);
}

pub fn verify_row(row: &TableRow) -> RowReport {
    let mut checks = Vec::new();
    let fit = growth_checks(row, &mut checks);
    gold_checks(row, &mut checks);
    cl_prime_checks(row, &mut checks);
    splitting_tag(row, &mut checks);
    order_identity_checks(row, &mut checks);
    RowReport {
        table: row.table.clone(),
        ell: row.ell.to_string(),
        d: row.d.to_string(),
        tower: row.tower,
        fit,
        checks,
    }
}

/// Runs every applicable check on every row; rows are processed in parallel
/// and reported in input order.
pub fn verify(rows: &[TableRow]) -> VerificationReport {
    let reports: Vec<RowReport> = rows.par_iter().map(verify_row).collect();
    let mut summary = Summary { rows: reports.len(), ..Summary::default() };
    for c in reports.iter().flat_map(|r| &r.checks) {
        match c.status {
            Status::Pass => summary.pass += 1,
            Status::Fail => summary.fail += 1,
            Status::Skipped => summary.skipped += 1,
            Status::Info => summary.info += 1,
        }
    }
    VerificationReport { rows: reports, summary }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_single_row() {
        let rows = parse_json(
            r#"[{"ell":3,"d":-74,"tower":"cyclotomic","layers":[{"n":0,"clog":[9]},{"n":1,"clog":[27]},{"n":2,"clog":[81]}]}]"#,
        )
        .unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].clog_exponents(), vec![2, 3, 4]);
    }

    #[test]
    fn empty_inputs() {
        assert!(parse_json("[]").unwrap().is_empty());
        assert!(parse_str("").unwrap().is_empty());
    }

    #[test]
    fn rejects_non_power_factor() {
        let err = parse_json(r#"[{"ell":3,"d":-5,"tower":"cyclotomic","layers":[{"n":0,"clog":[10]}]}]"#).unwrap_err();
        assert!(matches!(err, TableError::InvalidGroupShape { factor: 10, ell: 3, .. }));
    }

    #[test]
    fn rejects_gaps_in_layers() {
        let err = parse_json(r#"[{"ell":3,"d":-5,"tower":"cyclotomic","layers":[{"n":0,"clog":[]},{"n":2,"clog":[]}]}]"#).unwrap_err();
        assert!(matches!(err, TableError::NonContiguousLayers { .. }));
    }

    #[test]
    fn bracket_strings_and_csv() {
        let rows = parse_json(r#"[{"ell":3,"d":-41,"tower":"cyclotomic","layers":[{"n":0,"clog":"[27]","clp":"[]"}]}]"#).unwrap();
        assert_eq!(rows[0].layers[0].clog.factors(), &[27]);
        let csv = "ell,d,tower,n,clog,clog_ell,clp\n3,-41,cyclotomic,0,27,27,\n3,-41,cyclotomic,1,81;3,27,3;3\n5,-51,cyclotomic,0,125,,[]\n";
        let rows = parse_csv(csv).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0].layers[1].clog.factors(), &[81, 3]);
        assert_eq!(rows[0].layers[0].clp, None);
        assert_eq!(rows[1].layers[0].clp, Some(AbelianLGroup::trivial(5)));
    }

    #[test]
    fn tampering_is_reported() {
        let text = r#"[{"ell":3,"d":-74,"tower":"cyclotomic","layers":[{"n":0,"clog":[9],"clp":[]},{"n":1,"clog":[27],"clp":[3]},{"n":2,"clog":[27],"clp":[9]}],"expected":{"mu":0,"lambda":1,"nu":2}}]"#;
        let report = verify(&parse_json(text).unwrap());
        assert!(report.failures() > 0);
    }
}
