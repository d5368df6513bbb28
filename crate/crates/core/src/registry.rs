//! One check per identity id, built from named string parameters.

use std::str::FromStr;
use std::time::Instant;

use indexmap::IndexMap;
use thiserror::Error;

use crate::analytic::{self, GammaSample, NumericTolerance, WatsonParams};
use crate::doublesum::{self, DoubleSumPoint};
use crate::exact::Rational;
use crate::hyper;
use crate::qseries;
use crate::report::{IdentityId, VerificationReport};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParamError {
    #[error("missing parameter '{0}'")]
    Missing(String),
    #[error("invalid value '{value}' for parameter '{name}'")]
    Invalid { name: String, value: String },
    #[error("identity {id} does not take parameter '{name}'")]
    Unexpected { id: IdentityId, name: String },
    #[error("identity {0} is exact and does not accept a tolerance")]
    TolOnExact(IdentityId),
    #[error("{0}")]
    OutOfRange(String),
    #[error("invalid grid: {0}")]
    Grid(String),
}

/// Parameter names taken by an identity: `(required, optional)`.
pub fn param_names(id: IdentityId) -> (&'static [&'static str], &'static [&'static str]) {
    match id {
        IdentityId::Eq1 => (&["a", "b", "c"], &["tol"]),
        IdentityId::Eq2 => (&["a", "b", "m"], &["tol"]),
        IdentityId::Eq3 => (&["m"], &["a", "b"]),
        IdentityId::Eq4 | IdentityId::Eq5 => (&["m"], &[]),
        IdentityId::Eq6 => (&["N"], &[]),
        IdentityId::Prop2 | IdentityId::Ratio => (&["m", "n"], &[]),
        IdentityId::Minv => (&["size"], &[]),
        IdentityId::BinomTransform => (&["n", "k"], &[]),
        IdentityId::CvStep => (&["k", "j"], &[]),
        IdentityId::GammaXform => (&["a", "t", "m"], &["tol"]),
        IdentityId::QLimit => (&["a", "b", "m"], &["h", "tol"]),
    }
}

/// Default step for the q-limit check.
pub const DEFAULT_QLIMIT_H: f64 = 1e-3;

/// A fully parsed verification task.
#[derive(Debug, Clone, PartialEq)]
pub enum Check {
    Watson { params: WatsonParams, tol: NumericTolerance },
    Eq2 { a: f64, b: f64, m: usize, tol: NumericTolerance },
    Eq3Symbolic { m: usize },
    Eq3Point { a: Rational, b: Rational, m: usize },
    Bailey { m: usize },
    Eq5Chain { m: usize },
    Eq6 { big_n: usize },
    Prop2 { m: usize, n: usize },
    Ratio { m: usize, n: usize },
    Minv { size: usize },
    BinomTransform { n: usize, k: usize },
    CvStep { k: usize, j: usize },
    GammaXform { sample: GammaSample, tol: NumericTolerance },
    QLimit { a: Rational, b: Rational, m: usize, h: f64, budget: f64 },
}

struct Params<'a> {
    id: IdentityId,
    map: &'a IndexMap<String, String>,
}

impl Params<'_> {
    fn raw(&self, name: &str) -> Result<&str, ParamError> {
        self.map
            .get(name)
            .map(String::as_str)
            .ok_or_else(|| ParamError::Missing(name.to_string()))
    }

    fn parsed<T: FromStr>(&self, name: &str) -> Result<T, ParamError> {
        let raw = self.raw(name)?;
        raw.trim().parse().map_err(|_| invalid(name, raw))
    }

    fn int(&self, name: &str) -> Result<usize, ParamError> {
        self.parsed(name)
    }

    fn rational(&self, name: &str) -> Result<Rational, ParamError> {
        self.parsed(name)
    }

    fn real(&self, name: &str) -> Result<f64, ParamError> {
        let raw = self.raw(name)?;
        parse_real(raw).ok_or_else(|| invalid(name, raw))
    }

    fn tol(&self) -> Result<NumericTolerance, ParamError> {
        if !self.map.contains_key("tol") {
            return Ok(NumericTolerance::default());
        }
        let tol = self.real("tol")?;
        if tol > 0.0 {
            Ok(NumericTolerance::with_tol(tol))
        } else {
            Err(ParamError::OutOfRange("tol must be positive".into()))
        }
    }

    fn at_least(&self, name: &str, min: usize) -> Result<usize, ParamError> {
        let v = self.int(name)?;
        if v < min {
            return Err(ParamError::OutOfRange(format!(
                "{} requires {name} >= {min}",
                self.id
            )));
        }
        Ok(v)
    }
}

fn invalid(name: &str, value: &str) -> ParamError {
    ParamError::Invalid {
        name: name.to_string(),
        value: value.to_string(),
    }
}

/// Reads a decimal or `p/q` value.
pub fn parse_real(s: &str) -> Option<f64> {
    let s = s.trim();
    if s.contains('/') {
        return s.parse::<Rational>().ok().map(|r| r.to_f64());
    }
    s.parse::<f64>().ok().filter(|x| x.is_finite())
}

impl Check {
    /// Builds the check for `id` from named values. Rejects unknown names,
    /// and `tol` for exact identities.
    pub fn from_params(id: IdentityId, map: &IndexMap<String, String>) -> Result<Check, ParamError> {
        let (required, optional) = param_names(id);
        for name in map.keys() {
            if required.contains(&name.as_str()) || optional.contains(&name.as_str()) {
                continue;
            }
            if name == "tol" {
                return Err(ParamError::TolOnExact(id));
            }
            return Err(ParamError::Unexpected {
                id,
                name: name.clone(),
            });
        }
        let p = Params { id, map };
        Ok(match id {
            IdentityId::Eq1 => Check::Watson {
                params: WatsonParams {
                    a: p.real("a")?,
                    b: p.real("b")?,
                    c: p.real("c")?,
                },
                tol: p.tol()?,
            },
            IdentityId::Eq2 => Check::Eq2 {
                a: p.real("a")?,
                b: p.real("b")?,
                m: p.int("m")?,
                tol: p.tol()?,
            },
            IdentityId::Eq3 => match (map.contains_key("a"), map.contains_key("b")) {
                (false, false) => Check::Eq3Symbolic { m: p.int("m")? },
                _ => Check::Eq3Point {
                    a: p.rational("a")?,
                    b: p.rational("b")?,
                    m: p.int("m")?,
                },
            },
            IdentityId::Eq4 => Check::Bailey { m: p.int("m")? },
            IdentityId::Eq5 => Check::Eq5Chain { m: p.int("m")? },
            IdentityId::Eq6 => Check::Eq6 {
                big_n: p.at_least("N", 1)?,
            },
            IdentityId::Prop2 => Check::Prop2 {
                m: p.int("m")?,
                n: p.int("n")?,
            },
            IdentityId::Ratio => Check::Ratio {
                m: p.at_least("m", 1)?,
                n: p.int("n")?,
            },
            IdentityId::Minv => Check::Minv { size: p.int("size")? },
            IdentityId::BinomTransform => Check::BinomTransform {
                n: p.int("n")?,
                k: p.int("k")?,
            },
            IdentityId::CvStep => Check::CvStep {
                k: p.int("k")?,
                j: p.int("j")?,
            },
            IdentityId::GammaXform => Check::GammaXform {
                sample: GammaSample {
                    a: p.real("a")?,
                    t: p.real("t")?,
                    m: p.parsed("m")?,
                },
                tol: p.tol()?,
            },
            IdentityId::QLimit => Check::QLimit {
                a: p.rational("a")?,
                b: p.rational("b")?,
                m: p.at_least("m", 1)?,
                h: if map.contains_key("h") { p.real("h")? } else { DEFAULT_QLIMIT_H },
                budget: if map.contains_key("tol") {
                    p.tol()?.abs_tol
                } else {
                    qseries::INSTABILITY_BUDGET
                },
            },
        })
    }

    pub fn id(&self) -> IdentityId {
        match self {
            Check::Watson { .. } => IdentityId::Eq1,
            Check::Eq2 { .. } => IdentityId::Eq2,
            Check::Eq3Symbolic { .. } | Check::Eq3Point { .. } => IdentityId::Eq3,
            Check::Bailey { .. } => IdentityId::Eq4,
            Check::Eq5Chain { .. } => IdentityId::Eq5,
            Check::Eq6 { .. } => IdentityId::Eq6,
            Check::Prop2 { .. } => IdentityId::Prop2,
            Check::Ratio { .. } => IdentityId::Ratio,
            Check::Minv { .. } => IdentityId::Minv,
            Check::BinomTransform { .. } => IdentityId::BinomTransform,
            Check::CvStep { .. } => IdentityId::CvStep,
            Check::GammaXform { .. } => IdentityId::GammaXform,
            Check::QLimit { .. } => IdentityId::QLimit,
        }
    }

    pub fn run(&self) -> VerificationReport {
        match self {
            Check::Watson { params, tol } => analytic::verify_watson(params, tol),
            Check::Eq2 { a, b, m, tol } => analytic::eq2_consistency(*a, *b, *m, tol),
            Check::Eq3Symbolic { m } => hyper::verify_eq3_symbolic(*m),
            Check::Eq3Point { a, b, m } => hyper::verify_eq3_point(a, b, *m),
            Check::Bailey { m } => hyper::verify_bailey(*m),
            Check::Eq5Chain { m } => hyper::verify_eq5_chain(*m),
            Check::Eq6 { big_n } => qseries::verify_eq6(*big_n),
            Check::Prop2 { m, n } => doublesum::verify_prop2(DoubleSumPoint::new(*m, *n)),
            Check::Ratio { m, n } => doublesum::ratio_check(*m, *n),
            Check::Minv { size } => doublesum::binomial_matrix_self_inverse(*size),
            Check::BinomTransform { n, k } => doublesum::binomial_transform_check(*n, *k),
            Check::CvStep { k, j } => doublesum::verify_cvstep(*k, *j),
            Check::GammaXform { sample, tol } => analytic::gamma_transform_check(sample, tol),
            Check::QLimit { a, b, m, h, budget } => {
                qseries::q_limit_check_with_budget(a, b, *m, *h, *budget)
            }
        }
    }

    /// Runs the check; with `timings` the wall-clock time is recorded,
    /// otherwise `elapsed_micros` stays 0 so output is reproducible.
    pub fn run_timed(&self, timings: bool) -> VerificationReport {
        if !timings {
            return self.run();
        }
        let start = Instant::now();
        let mut report = self.run();
        report.elapsed_micros = start.elapsed().as_micros() as u64;
        report
    }
}
