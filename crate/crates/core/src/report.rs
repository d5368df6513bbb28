//! Verification reports and their serializations.

use std::fmt;
use std::str::FromStr;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

/// Every identity the tool can check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum IdentityId {
    #[serde(rename = "eq1")]
    Eq1,
    #[serde(rename = "eq2")]
    Eq2,
    #[serde(rename = "eq3")]
    Eq3,
    #[serde(rename = "eq4")]
    Eq4,
    #[serde(rename = "eq5")]
    Eq5,
    #[serde(rename = "eq6")]
    Eq6,
    #[serde(rename = "prop2")]
    Prop2,
    #[serde(rename = "ratio")]
    Ratio,
    #[serde(rename = "minv")]
    Minv,
    #[serde(rename = "binom_transform")]
    BinomTransform,
    #[serde(rename = "cvstep")]
    CvStep,
    #[serde(rename = "gamma_xform")]
    GammaXform,
    #[serde(rename = "qlimit")]
    QLimit,
}

impl IdentityId {
    pub const ALL: [IdentityId; 13] = [
        IdentityId::Eq1,
        IdentityId::Eq2,
        IdentityId::Eq3,
        IdentityId::Eq4,
        IdentityId::Eq5,
        IdentityId::Eq6,
        IdentityId::Prop2,
        IdentityId::Ratio,
        IdentityId::Minv,
        IdentityId::BinomTransform,
        IdentityId::CvStep,
        IdentityId::GammaXform,
        IdentityId::QLimit,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            IdentityId::Eq1 => "eq1",
            IdentityId::Eq2 => "eq2",
            IdentityId::Eq3 => "eq3",
            IdentityId::Eq4 => "eq4",
            IdentityId::Eq5 => "eq5",
            IdentityId::Eq6 => "eq6",
            IdentityId::Prop2 => "prop2",
            IdentityId::Ratio => "ratio",
            IdentityId::Minv => "minv",
            IdentityId::BinomTransform => "binom_transform",
            IdentityId::CvStep => "cvstep",
            IdentityId::GammaXform => "gamma_xform",
            IdentityId::QLimit => "qlimit",
        }
    }

    /// Whether the identity is decided in floating point (and so takes a
    /// tolerance) rather than exactly.
    pub fn is_numeric(self) -> bool {
        matches!(
            self,
            IdentityId::Eq1 | IdentityId::Eq2 | IdentityId::GammaXform | IdentityId::QLimit
        )
    }

    /// Equation label and the statement being checked.
    pub fn description(self) -> (&'static str, &'static str) {
        match self {
            IdentityId::Eq1 => (
                "(1)",
                "Watson: 3F2(a,b,c; (a+b+1)/2, 2c; 1) equals its Gamma-ratio closed form",
            ),
            IdentityId::Eq2 => (
                "(2)",
                "cos-ratio limit = truncated sum value + sin-ratio tail value",
            ),
            IdentityId::Eq3 => (
                "(3)",
                "first m+1 terms of 3F2(a,b,-m; (a+b+1)/2, -2m; 1) = closed Pochhammer product",
            ),
            IdentityId::Eq4 => (
                "(4)",
                "3F2(-m,2a,2b; a+b+1/2, 2c; 1) = 4F3(a,b,2c+m,-m; a+b+1/2, c, c+1/2; 1), m+1 terms",
            ),
            IdentityId::Eq5 => (
                "(5)",
                "c -> -m chain through Pfaff-Saalschutz, and a -> a/2, b -> b/2 recovering (3)",
            ),
            IdentityId::Eq6 => (
                "(6)",
                "truncated 4phi3(a^2,b^2,-q^-N,q^-N; ab*sqrt(q),-ab*sqrt(q),q^-2N; q; q)_N product form",
            ),
            IdentityId::Prop2 => ("(7)", "S(m,n) direct double sum = both closed forms"),
            IdentityId::Ratio => ("(7)", "S(m,n)/S(m-1,n+1) = 2m(n+1)/((2n+1)(n+2m+1))"),
            IdentityId::Minv => ("(7)", "binomial matrix M_ij = C(i,j)(-1)^j satisfies M*M = I"),
            IdentityId::BinomTransform => ("(7)", "B_nk = sum_i M_ki A_ni and its inversion"),
            IdentityId::CvStep => (
                "(7)",
                "sum_i C(k,i)(-1)^i/(i+j+1/2) = k!/(j+1/2)_{k+1} (Chu-Vandermonde)",
            ),
            IdentityId::GammaXform => (
                "(1)-(2)",
                "Gamma(a-m) and Gamma(1/2+t)Gamma(1/2-t-m) transformation identities",
            ),
            IdentityId::QLimit => ("(6)->(3)", "q -> 1 degeneration of the q-analogue"),
        }
    }
}

impl fmt::Display for IdentityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for IdentityId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        IdentityId::ALL
            .into_iter()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| format!("unknown identity `{s}`"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Error => "error",
        }
    }
}

/// Outcome of checking one identity at one parameter point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub identity_id: IdentityId,
    pub params: IndexMap<String, String>,
    pub lhs: String,
    pub rhs: String,
    pub status: Status,
    pub error_kind: Option<String>,
    pub elapsed_micros: u64,
}

impl VerificationReport {
    pub fn new(identity_id: IdentityId) -> Self {
        VerificationReport {
            identity_id,
            params: IndexMap::new(),
            lhs: String::new(),
            rhs: String::new(),
            status: Status::Error,
            error_kind: None,
            elapsed_micros: 0,
        }
    }

    pub fn param(mut self, name: &str, value: impl fmt::Display) -> Self {
        self.params.insert(name.to_string(), value.to_string());
        self
    }

    /// Records both sides and sets pass/fail from `equal`.
    pub fn compared(mut self, lhs: impl fmt::Display, rhs: impl fmt::Display, equal: bool) -> Self {
        self.lhs = lhs.to_string();
        self.rhs = rhs.to_string();
        self.status = if equal { Status::Pass } else { Status::Fail };
        self
    }

    /// Records a failure reason alongside a fail status.
    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        if self.status != Status::Pass {
            self.error_kind = Some(detail.into());
        }
        self
    }

    pub fn errored(mut self, kind: impl fmt::Display) -> Self {
        self.status = Status::Error;
        self.error_kind = Some(kind.to_string());
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    fn params_flat(&self) -> String {
        self.params
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(";")
    }
}

/// Worst status across a batch (`Pass` for an empty batch).
pub fn worst_status(reports: &[VerificationReport]) -> Status {
    reports
        .iter()
        .map(|r| r.status)
        .max()
        .unwrap_or(Status::Pass)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ReportFormat {
    #[default]
    Text,
    Json,
    Csv,
}

impl FromStr for ReportFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "text" => Ok(ReportFormat::Text),
            "json" => Ok(ReportFormat::Json),
            "csv" => Ok(ReportFormat::Csv),
            _ => Err(format!("unknown format `{s}` (expected text, json or csv)")),
        }
    }
}

const TEXT_SIDE_LIMIT: usize = 96;

fn abbreviate(s: &str) -> String {
    if s.len() <= TEXT_SIDE_LIMIT {
        return s.to_string();
    }
    let mut cut = TEXT_SIDE_LIMIT;
    while !s.is_char_boundary(cut) {
        cut -= 1;
    }
    format!("{}... [{} chars]", &s[..cut], s.len())
}

/// Serializes reports deterministically: equal inputs give identical bytes.
///
/// Text output abbreviates long symbolic sides; JSON and CSV carry them in
/// full.
pub fn emit_report(reports: &[VerificationReport], format: ReportFormat) -> String {
    match format {
        ReportFormat::Json => serde_json::to_string_pretty(reports).expect("reports serialize"),
        ReportFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record([
                "identity_id",
                "params",
                "lhs",
                "rhs",
                "status",
                "error_kind",
                "elapsed_micros",
            ])
            .expect("in-memory write");
            for r in reports {
                w.write_record([
                    r.identity_id.as_str(),
                    &r.params_flat(),
                    &r.lhs,
                    &r.rhs,
                    r.status.as_str(),
                    r.error_kind.as_deref().unwrap_or(""),
                    &r.elapsed_micros.to_string(),
                ])
                .expect("in-memory write");
            }
            String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 input")
        }
        ReportFormat::Text => {
            let mut out = String::new();
            for r in reports {
                out.push_str(&format!(
                    "{:<5} {:<15} {}\n",
                    r.status.as_str().to_uppercase(),
                    r.identity_id.as_str(),
                    r.params_flat()
                ));
                out.push_str(&format!("      lhs = {}\n", abbreviate(&r.lhs)));
                out.push_str(&format!("      rhs = {}\n", abbreviate(&r.rhs)));
                if let Some(kind) = &r.error_kind {
                    out.push_str(&format!("      error: {kind}\n"));
                }
            }
            let pass = reports.iter().filter(|r| r.passed()).count();
            out.push_str(&format!("{pass}/{} passed\n", reports.len()));
            out
        }
    }
}
