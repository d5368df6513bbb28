//! Single-point evaluation of the individual quantities behind the checks.

use indexmap::IndexMap;
use thiserror::Error;

use crate::analytic::{self, WatsonParams};
use crate::doublesum::{self, DoubleSumPoint};
use crate::exact::Rational;
use crate::hyper::{self, pochhammer};
use crate::qseries;
use crate::registry::{parse_real, ParamError};

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("unknown quantity '{0}'")]
    Unknown(String),
    #[error(transparent)]
    Param(#[from] ParamError),
    #[error("{quantity} does not take parameter '{name}'")]
    Unexpected { quantity: String, name: String },
    #[error("{0}")]
    Failed(String),
}

/// `(name, parameters, description)` for every quantity.
pub const QUANTITIES: &[(&str, &[&str], &str)] = &[
    ("dblsum", &["m", "n"], "double sum S(m,n), term by term"),
    ("dblsum_closed", &["m", "n"], "factorial closed form of S(m,n)"),
    ("a_inner", &["n", "i"], "inner sum A(n,i)"),
    ("b_inner", &["n", "k"], "closed inner value B(n,k)"),
    ("binomial", &["n", "k"], "binomial coefficient"),
    ("pochhammer", &["t", "k"], "rising factorial (t)_k"),
    ("eq3_lhs", &["m", "a?", "b?"], "truncated 3F2 sum; symbolic in a, b when omitted"),
    ("eq3_rhs", &["m", "a?", "b?"], "Pochhammer product; symbolic in a, b when omitted"),
    ("eq6_lhs", &["N"], "q-series side, rational function in A, B, q"),
    ("eq6_rhs", &["N"], "q-product side, rational function in A, B, q"),
    ("gamma", &["x"], "Gamma function"),
    ("watson_series", &["a", "b", "c"], "Watson's 3F2 at argument 1, summed"),
    ("watson_rhs", &["a", "b", "c"], "Watson's Gamma ratio"),
];

fn get<'a>(params: &'a IndexMap<String, String>, name: &str) -> Result<&'a str, ParamError> {
    params
        .get(name)
        .map(String::as_str)
        .ok_or_else(|| ParamError::Missing(name.to_string()))
}

fn int(params: &IndexMap<String, String>, name: &str) -> Result<usize, ParamError> {
    let raw = get(params, name)?;
    raw.trim().parse().map_err(|_| ParamError::Invalid {
        name: name.into(),
        value: raw.into(),
    })
}

fn rational(params: &IndexMap<String, String>, name: &str) -> Result<Rational, ParamError> {
    let raw = get(params, name)?;
    raw.trim().parse().map_err(|_| ParamError::Invalid {
        name: name.into(),
        value: raw.into(),
    })
}

fn real(params: &IndexMap<String, String>, name: &str) -> Result<f64, ParamError> {
    let raw = get(params, name)?;
    parse_real(raw).ok_or_else(|| ParamError::Invalid {
        name: name.into(),
        value: raw.into(),
    })
}

fn failed(e: impl std::fmt::Display) -> EvalError {
    EvalError::Failed(e.to_string())
}

/// Evaluates `quantity` at the named parameters. Exact values print in
/// canonical form, floating-point ones with 16 significant digits.
pub fn evaluate(quantity: &str, params: &IndexMap<String, String>) -> Result<String, EvalError> {
    let (_, names, _) = QUANTITIES
        .iter()
        .find(|(q, _, _)| *q == quantity)
        .ok_or_else(|| EvalError::Unknown(quantity.to_string()))?;
    if let Some(extra) = params
        .keys()
        .find(|k| !names.iter().any(|n| n.trim_end_matches('?') == k.as_str()))
    {
        return Err(EvalError::Unexpected {
            quantity: quantity.to_string(),
            name: extra.clone(),
        });
    }
    let point = || -> Result<DoubleSumPoint, ParamError> {
        Ok(DoubleSumPoint::new(int(params, "m")?, int(params, "n")?))
    };
    let watson = || -> Result<WatsonParams, ParamError> {
        Ok(WatsonParams {
            a: real(params, "a")?,
            b: real(params, "b")?,
            c: real(params, "c")?,
        })
    };
    let float = |x: f64| format!("{x:.15e}");
    Ok(match quantity {
        "dblsum" => doublesum::s_direct(point()?).to_string(),
        "dblsum_closed" => doublesum::s_closed(point()?).to_string(),
        "a_inner" => doublesum::a_inner(int(params, "n")?, int(params, "i")?).to_string(),
        "b_inner" => doublesum::b_inner(int(params, "n")?, int(params, "k")?).to_string(),
        "binomial" => doublesum::binomial(int(params, "n")?, int(params, "k")?).to_string(),
        "pochhammer" => pochhammer(&rational(params, "t")?, int(params, "k")?).to_string(),
        "eq3_lhs" | "eq3_rhs" => {
            let m = int(params, "m")?;
            let lhs = quantity == "eq3_lhs";
            if params.contains_key("a") || params.contains_key("b") {
                let (a, b) = (rational(params, "a")?, rational(params, "b")?);
                let v = if lhs { hyper::eq3_lhs(&a, &b, m) } else { hyper::eq3_rhs(&a, &b, m) };
                v.map_err(failed)?.to_string()
            } else {
                let (_, a, b) = hyper::ab_symbols();
                let v = if lhs { hyper::eq3_lhs(&a, &b, m) } else { hyper::eq3_rhs(&a, &b, m) };
                v.map_err(failed)?.to_string()
            }
        }
        "eq6_lhs" => qseries::eq6_lhs(int(params, "N")?).map_err(failed)?.to_string(),
        "eq6_rhs" => qseries::eq6_rhs(int(params, "N")?).map_err(failed)?.to_string(),
        "gamma" => float(analytic::gamma(real(params, "x")?).map_err(failed)?),
        "watson_series" => float(
            analytic::watson_series(&watson()?, &analytic::NumericTolerance::default()).map_err(failed)?,
        ),
        "watson_rhs" => float(analytic::watson_rhs(&watson()?).map_err(failed)?),
        _ => unreachable!("listed in QUANTITIES"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eval(q: &str, pairs: &[(&str, &str)]) -> Result<String, EvalError> {
        let map = pairs.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect();
        evaluate(q, &map)
    }

    #[test]
    fn exact_values() {
        assert_eq!(eval("dblsum", &[("m", "1"), ("n", "0")]).unwrap(), "16/9");
        assert_eq!(eval("dblsum_closed", &[("m", "1"), ("n", "0")]).unwrap(), "16/9");
        assert_eq!(eval("binomial", &[("n", "5"), ("k", "2")]).unwrap(), "10");
        assert_eq!(eval("pochhammer", &[("t", "1/2"), ("k", "2")]).unwrap(), "3/4");
        assert_eq!(eval("eq3_rhs", &[("a", "1"), ("b", "1"), ("m", "1")]).unwrap(), "4/3");
    }

    #[test]
    fn symbolic_values() {
        let lhs = eval("eq3_lhs", &[("m", "1")]).unwrap();
        assert!(lhs.contains('a') && lhs.contains('b'), "{lhs}");
        assert!(eval("eq6_rhs", &[("N", "1")]).unwrap().contains('q'));
    }

    #[test]
    fn floating_values() {
        let g: f64 = eval("gamma", &[("x", "5")]).unwrap().parse().unwrap();
        assert!((g - 24.0).abs() < 1e-12);
        let w: f64 = eval("watson_rhs", &[("a", "0"), ("b", "0"), ("c", "1")]).unwrap().parse().unwrap();
        assert!((w - 1.0).abs() < 1e-14);
    }

    #[test]
    fn errors() {
        assert!(matches!(eval("nope", &[]), Err(EvalError::Unknown(_))));
        assert!(matches!(eval("dblsum", &[("m", "1")]), Err(EvalError::Param(_))));
        assert!(matches!(
            eval("dblsum", &[("m", "1"), ("n", "0"), ("z", "1")]),
            Err(EvalError::Unexpected { .. })
        ));
        assert!(matches!(eval("gamma", &[("x", "-2")]), Err(EvalError::Failed(_))));
        assert!(matches!(eval("eq6_rhs", &[("N", "0")]), Err(EvalError::Failed(_))));
    }
}
