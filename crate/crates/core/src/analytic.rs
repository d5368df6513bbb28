//! Floating-point checks of the non-terminating statements: Watson's
//! `3F2` evaluation, the cosine/sine decomposition of its `c -> -m` limit,
//! and the two Gamma transformation identities.
//!
//! Series at argument 1 converge only algebraically (terms decay like
//! `k^-(1+s)` with excess `s = sum(lower) - sum(upper)`), so partial sums
//! are completed with an asymptotic tail: the term ratio gives the
//! large-`k` expansion of the terms in powers of `1/k`, and each power is
//! summed with a Hurwitz zeta value.

use std::f64::consts::PI;

use thiserror::Error;

use crate::exact::Rational;
use crate::hyper::{eq3_rhs, pochhammer};
use crate::report::{IdentityId, VerificationReport};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalyticError {
    #[error("PoleAtNonPositiveInteger({factor} at {arg})")]
    PoleAtNonPositiveInteger { factor: &'static str, arg: f64 },
    #[error("InvalidParams({0})")]
    InvalidParams(String),
    #[error("NoConvergence(tail estimate {tail_estimate:e} after {terms} terms)")]
    NoConvergence { terms: usize, tail_estimate: f64 },
    #[error("DegenerateTrig({0})")]
    DegenerateTrig(&'static str),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NumericTolerance {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_terms: usize,
}

impl Default for NumericTolerance {
    fn default() -> Self {
        NumericTolerance {
            abs_tol: 1e-10,
            rel_tol: 1e-10,
            max_terms: 100_000,
        }
    }
}

impl NumericTolerance {
    pub fn with_tol(tol: f64) -> Self {
        NumericTolerance {
            abs_tol: tol,
            rel_tol: tol,
            ..Default::default()
        }
    }

    fn accepts(&self, lhs: f64, rhs: f64) -> bool {
        (lhs - rhs).abs() <= self.abs_tol + self.rel_tol * rhs.abs()
    }
}

/// Parameters of `3F2(a, b, c; (a+b+1)/2, 2c; 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WatsonParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl WatsonParams {
    pub fn validate(&self) -> Result<(), AnalyticError> {
        let WatsonParams { a, b, c } = *self;
        if !(a.is_finite() && b.is_finite() && c.is_finite()) {
            return Err(AnalyticError::InvalidParams("non-finite parameter".into()));
        }
        if 2.0 * c + 1.0 - a - b <= 0.0 {
            return Err(AnalyticError::InvalidParams("2c + 1 - a - b must be positive".into()));
        }
        if is_nonpositive_integer(2.0 * c) || is_nonpositive_integer((a + b + 1.0) / 2.0) {
            return Err(AnalyticError::InvalidParams(
                "2c and (a+b+1)/2 must avoid 0, -1, -2, ...".into(),
            ));
        }
        Ok(())
    }
}

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.round()
}

/// `sin(pi x)` with the argument reduced mod 2 first; exact zeros at integers.
pub fn sin_pi(x: f64) -> f64 {
    let r = x.rem_euclid(2.0);
    if r == 0.0 || r == 1.0 {
        return 0.0;
    }
    // Reflect into [-1/2, 1/2] where sin is best conditioned.
    let (r, sign) = if r > 1.0 { (r - 1.0, -1.0) } else { (r, 1.0) };
    let r = if r > 0.5 { 1.0 - r } else { r };
    sign * (PI * r).sin()
}

/// `cos(pi x)` with the argument reduced mod 2 first; exact zeros at
/// half-integers.
pub fn cos_pi(x: f64) -> f64 {
    let r = x.rem_euclid(2.0);
    if r == 0.5 || r == 1.5 {
        return 0.0;
    }
    sin_pi(x + 0.5)
}

const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)]
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Gamma function: Lanczos approximation for `x >= 1/2`, reflection below.
pub fn gamma(x: f64) -> Result<f64, AnalyticError> {
    if is_nonpositive_integer(x) {
        return Err(AnalyticError::PoleAtNonPositiveInteger { factor: "gamma", arg: x });
    }
    Ok(gamma_unchecked(x))
}

fn gamma_unchecked(x: f64) -> f64 {
    if x < 0.5 {
        return PI / (sin_pi(x) * gamma_unchecked(1.0 - x));
    }
    let x = x - 1.0;
    let mut series = LANCZOS_COEFFS[0];
    for (i, &coef) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        series += coef / (x + i as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    // t^(x+1/2) e^-t, split in halves to stay in range for large x.
    let half_pow = t.powf((x + 0.5) / 2.0);
    (2.0 * PI).sqrt() * half_pow * (half_pow * (-t).exp()) * series
}

// Bernoulli numbers B_0 .. B_20 (odd ones past B_1 vanish).
const BERNOULLI: [f64; 21] = [
    1.0,
    -0.5,
    1.0 / 6.0,
    0.0,
    -1.0 / 30.0,
    0.0,
    1.0 / 42.0,
    0.0,
    -1.0 / 30.0,
    0.0,
    5.0 / 66.0,
    0.0,
    -691.0 / 2730.0,
    0.0,
    7.0 / 6.0,
    0.0,
    -3617.0 / 510.0,
    0.0,
    43867.0 / 798.0,
    0.0,
    -174611.0 / 330.0,
];

fn binom_f64(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn bernoulli_poly(n: usize, x: f64) -> f64 {
    (0..=n)
        .map(|k| binom_f64(n, k) * BERNOULLI[k] * x.powi((n - k) as i32))
        .sum()
}

/// `zeta(s, x) = sum_{k>=0} (x+k)^-s` for `s > 1` and large `x`, by
/// Euler-Maclaurin.
fn hurwitz_zeta_large(s: f64, x: f64) -> f64 {
    let mut acc = x.powf(1.0 - s) / (s - 1.0) + 0.5 * x.powf(-s);
    let mut rising = s; // s (s+1) ... (s+2j-2)
    let mut fact = 2.0; // (2j)!
    for j in 1..=8usize {
        if j > 1 {
            rising *= (s + 2.0 * j as f64 - 3.0) * (s + 2.0 * j as f64 - 2.0);
            fact *= (2 * j - 1) as f64 * (2 * j) as f64;
        }
        acc += BERNOULLI[2 * j] / fact * rising * x.powf(-s - 2.0 * j as f64 + 1.0);
    }
    acc
}

const TAIL_ORDER: usize = 12;

/// `sum_{k>=0} prod (upper)_k / (k! prod (lower)_k)` for a series at
/// argument 1 with `upper.len() == lower.len() + 1`.
///
/// Terminating series are summed exactly. Otherwise the first `K` terms are
/// added directly and the rest via the asymptotic expansion; `K` doubles
/// until the expansion's truncation error is below `tol.abs_tol`.
pub fn sum_at_unit_argument(
    upper: &[f64],
    lower: &[f64],
    tol: &NumericTolerance,
) -> Result<f64, AnalyticError> {
    assert_eq!(upper.len(), lower.len() + 1, "series must be balanced p = q + 1");
    if lower.iter().any(|&l| is_nonpositive_integer(l)) {
        return Err(AnalyticError::InvalidParams("lower parameter in 0, -1, -2, ...".into()));
    }
    let excess: f64 = lower.iter().sum::<f64>() - upper.iter().sum::<f64>();
    let terminates = upper.iter().any(|&u| is_nonpositive_integer(u));
    if !terminates && excess <= 0.0 {
        return Err(AnalyticError::InvalidParams("series diverges at argument 1".into()));
    }

    let term_ratio = |k: f64| -> f64 {
        let num: f64 = upper.iter().map(|u| u + k).product();
        let den: f64 = lower.iter().map(|l| l + k).product::<f64>() * (k + 1.0);
        num / den
    };

    if terminates {
        let mut sum = 0.0;
        let mut term = 1.0;
        let mut k = 0usize;
        while term != 0.0 {
            sum += term;
            term *= term_ratio(k as f64);
            k += 1;
        }
        return Ok(sum);
    }

    let scale = upper
        .iter()
        .chain(lower)
        .fold(1.0f64, |m, p| m.max(p.abs()));
    // The expansion is only trusted once k is well past every parameter.
    let min_cutoff = (20.0 + 4.0 * scale).ceil() as usize;
    if tol.max_terms < min_cutoff {
        return Err(AnalyticError::NoConvergence {
            terms: 0,
            tail_estimate: f64::INFINITY,
        });
    }
    let mut cutoff = ((200.0 + 20.0 * scale).ceil() as usize).min(tol.max_terms);
    let p = 1.0 + excess;

    // e_n of log R(x) = -p ln x + sum e_n x^-n + const.
    let e: Vec<f64> = (1..=TAIL_ORDER)
        .map(|n| {
            let b = |x: f64| bernoulli_poly(n + 1, x);
            let s = upper.iter().map(|&u| b(u)).sum::<f64>()
                - b(1.0)
                - lower.iter().map(|&l| b(l)).sum::<f64>();
            let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
            sign * s / (n * (n + 1)) as f64
        })
        .collect();
    // exp(sum e_n y^n) = sum c_j y^j
    let mut c = [1.0f64; TAIL_ORDER + 1];
    for j in 1..=TAIL_ORDER {
        c[j] = (1..=j).map(|n| n as f64 * e[n - 1] * c[j - n]).sum::<f64>() / j as f64;
    }

    let mut sum = 0.0;
    let mut term = 1.0;
    let mut k = 0usize;
    loop {
        while k < cutoff {
            sum += term;
            term *= term_ratio(k as f64);
            k += 1;
        }
        let kf = k as f64;
        let log_corr: f64 = e
            .iter()
            .enumerate()
            .map(|(n, en)| en * kf.powi(-(n as i32 + 1)))
            .sum();
        let d = term * kf.powf(p) * (-log_corr).exp();
        let pieces: Vec<f64> = c
            .iter()
            .enumerate()
            .map(|(j, cj)| d * cj * hurwitz_zeta_large(p + j as f64, kf))
            .collect();
        let tail: f64 = pieces.iter().sum();
        let estimate = pieces[TAIL_ORDER].abs() + pieces[TAIL_ORDER - 1].abs();
        if estimate <= tol.abs_tol * 1e-2 {
            return Ok(sum + tail);
        }
        if cutoff * 2 > tol.max_terms {
            return Err(AnalyticError::NoConvergence {
                terms: k,
                tail_estimate: estimate,
            });
        }
        cutoff *= 2;
    }
}

/// Left side of Watson's formula, `3F2(a, b, c; (a+b+1)/2, 2c; 1)`.
pub fn watson_series(p: &WatsonParams, tol: &NumericTolerance) -> Result<f64, AnalyticError> {
    p.validate()?;
    sum_at_unit_argument(&[p.a, p.b, p.c], &[(p.a + p.b + 1.0) / 2.0, 2.0 * p.c], tol)
}

/// Right side of Watson's formula, the Gamma ratio.
pub fn watson_rhs(p: &WatsonParams) -> Result<f64, AnalyticError> {
    let WatsonParams { a, b, c } = *p;
    let factor = |name: &'static str, x: f64| -> Result<f64, AnalyticError> {
        if is_nonpositive_integer(x) {
            Err(AnalyticError::PoleAtNonPositiveInteger { factor: name, arg: x })
        } else {
            Ok(gamma_unchecked(x))
        }
    };
    let num = factor("Gamma(1/2)", 0.5)?
        * factor("Gamma(1/2+c)", 0.5 + c)?
        * factor("Gamma(1/2+a/2+b/2)", 0.5 + a / 2.0 + b / 2.0)?
        * factor("Gamma(1/2-a/2-b/2+c)", 0.5 - a / 2.0 - b / 2.0 + c)?;
    let den = factor("Gamma(1/2+a/2)", 0.5 + a / 2.0)?
        * factor("Gamma(1/2+b/2)", 0.5 + b / 2.0)?
        * factor("Gamma(1/2-a/2+c)", 0.5 - a / 2.0 + c)?
        * factor("Gamma(1/2-b/2+c)", 0.5 - b / 2.0 + c)?;
    Ok(num / den)
}

/// Compares Watson's series with its Gamma-ratio value.
pub fn verify_watson(p: &WatsonParams, tol: &NumericTolerance) -> VerificationReport {
    let report = VerificationReport::new(IdentityId::Eq1)
        .param("a", p.a)
        .param("b", p.b)
        .param("c", p.c)
        .param("tol", format!("{:e}", tol.abs_tol));
    let values = watson_series(p, tol).and_then(|l| Ok((l, watson_rhs(p)?)));
    match values {
        Ok((lhs, rhs)) => report.compared(
            format!("{lhs:.15e}"),
            format!("{rhs:.15e}"),
            (lhs - rhs).abs() <= tol.abs_tol * (1.0 + rhs.abs()),
        ),
        Err(e) => report.errored(e),
    }
}

/// Exact rational value of a double (every finite double is a dyadic
/// rational).
fn rational_from_f64(x: f64) -> Result<Rational, AnalyticError> {
    num_rational::BigRational::from_float(x)
        .map(Rational::from)
        .ok_or_else(|| AnalyticError::InvalidParams(format!("non-finite value {x}")))
}

/// Ingredients of the `c -> -m` decomposition, with
/// `P = ((a+1)/2)_m ((b+1)/2)_m / ((1/2)_m ((a+b+1)/2)_m)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Eq2Pieces {
    /// `cos(pi a/2) cos(pi b/2)`
    pub cos_prod: f64,
    /// `sin(pi a/2) sin(pi b/2)`
    pub sin_prod: f64,
    /// `cos(pi (a+b)/2)`
    pub cos_sum: f64,
    /// `P` in floating point.
    pub product: f64,
    /// The truncated sum, evaluated exactly and then rounded.
    pub truncated: f64,
}

/// Below this `|cos(pi (a+b)/2)|` the ratios are not formed.
pub const COS_SUM_FLOOR: f64 = 1e-12;

impl Eq2Pieces {
    /// Cosine-ratio limit value, if the denominator is nonzero.
    pub fn limit(&self) -> Option<f64> {
        (self.cos_sum.abs() >= COS_SUM_FLOOR).then(|| self.cos_prod / self.cos_sum * self.product)
    }

    /// Sine-ratio tail value, if the denominator is nonzero.
    pub fn tail(&self) -> Option<f64> {
        (self.cos_sum.abs() >= COS_SUM_FLOOR).then(|| self.sin_prod / self.cos_sum * self.product)
    }
}

pub fn eq2_pieces(a: f64, b: f64, m: usize) -> Result<Eq2Pieces, AnalyticError> {
    if a.rem_euclid(2.0) == 1.0 || b.rem_euclid(2.0) == 1.0 {
        return Err(AnalyticError::DegenerateTrig("a or b is an odd integer"));
    }
    let lower = (a + b + 1.0) / 2.0;
    if is_nonpositive_integer(lower) && -lower < m as f64 {
        return Err(AnalyticError::InvalidParams(
            "(a+b+1)/2 in {0, -1, ..., 1-m}".into(),
        ));
    }
    let exact = eq3_rhs(&rational_from_f64(a)?, &rational_from_f64(b)?, m)
        .map_err(|e| AnalyticError::InvalidParams(e.to_string()))?;
    let poch_f = |t: f64| -> f64 { (0..m).map(|i| t + i as f64).product() };
    Ok(Eq2Pieces {
        cos_prod: cos_pi(a / 2.0) * cos_pi(b / 2.0),
        sin_prod: sin_pi(a / 2.0) * sin_pi(b / 2.0),
        cos_sum: cos_pi((a + b) / 2.0),
        product: poch_f((a + 1.0) / 2.0) * poch_f((b + 1.0) / 2.0) / (poch_f(0.5) * poch_f(lower)),
        truncated: exact.to_f64(),
    })
}

/// Checks that the cosine-ratio limit equals the exact truncated sum plus
/// the sine-ratio tail value.
///
/// Where `cos(pi (a+b)/2)` vanishes both ratios are infinite; there the
/// relation is checked multiplied through by that cosine,
/// `cos cos * P = cos(pi (a+b)/2) * T + sin sin * P`, and the report gets
/// `form=cleared`. The truncated value `T` drops out of that form.
pub fn eq2_consistency(a: f64, b: f64, m: usize, tol: &NumericTolerance) -> VerificationReport {
    let report = VerificationReport::new(IdentityId::Eq2)
        .param("a", a)
        .param("b", b)
        .param("m", m)
        .param("tol", format!("{:e}", tol.abs_tol));
    let p = match eq2_pieces(a, b, m) {
        Ok(p) => p,
        Err(e) => return report.errored(e),
    };
    let (lhs, rhs, report) = match (p.limit(), p.tail()) {
        (Some(limit), Some(tail)) => (limit, p.truncated + tail, report),
        _ => (
            p.cos_prod * p.product,
            p.cos_sum * p.truncated + p.sin_prod * p.product,
            report.param("form", "cleared"),
        ),
    };
    report.compared(format!("{lhs:.15e}"), format!("{rhs:.15e}"), tol.accepts(lhs, rhs))
}

/// One sample for the Gamma transformation identities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaSample {
    pub a: f64,
    pub t: f64,
    pub m: u32,
}

fn rising_f64(x: f64, m: u32) -> f64 {
    (0..m).map(|i| x + i as f64).product()
}

/// Relative errors of
/// `Gamma(a-m) = (-1)^m Gamma(a) / (1-a)_m` and
/// `Gamma(1/2+t) Gamma(1/2-t-m) = (-1)^m pi / ((1/2+t)_m cos(pi t))`.
pub fn gamma_transform_errors(s: &GammaSample) -> Result<(f64, f64), AnalyticError> {
    let sign = if s.m.is_multiple_of(2) { 1.0 } else { -1.0 };
    let first_lhs = gamma(s.a - s.m as f64)?;
    let first_rhs = sign * gamma(s.a)? / rising_f64(1.0 - s.a, s.m);
    let cos_t = cos_pi(s.t);
    if cos_t == 0.0 {
        return Err(AnalyticError::DegenerateTrig("cos(pi t) vanishes"));
    }
    let second_lhs = gamma(0.5 + s.t)? * gamma(0.5 - s.t - s.m as f64)?;
    let second_rhs = sign * PI / (rising_f64(0.5 + s.t, s.m) * cos_t);
    let rel = |l: f64, r: f64| (l - r).abs() / r.abs().max(f64::MIN_POSITIVE);
    Ok((rel(first_lhs, first_rhs), rel(second_lhs, second_rhs)))
}

/// Checks both transformation identities at one sample.
pub fn gamma_transform_check(s: &GammaSample, tol: &NumericTolerance) -> VerificationReport {
    let report = VerificationReport::new(IdentityId::GammaXform)
        .param("a", s.a)
        .param("t", s.t)
        .param("m", s.m)
        .param("tol", format!("{:e}", tol.rel_tol));
    match gamma_transform_errors(s) {
        Ok((e1, e2)) => report
            .compared(format!("{e1:.3e}; {e2:.3e}"), format!("<= {:e}", tol.rel_tol), e1.max(e2) <= tol.rel_tol),
        Err(e) => report.errored(e),
    }
}

/// Checks both identities over all samples; the report carries the worst
/// relative error.
pub fn gamma_transform_checks(samples: &[GammaSample], tol: &NumericTolerance) -> VerificationReport {
    let report = VerificationReport::new(IdentityId::GammaXform)
        .param("samples", samples.len())
        .param("tol", format!("{:e}", tol.rel_tol));
    let mut worst = 0.0f64;
    for s in samples {
        match gamma_transform_errors(s) {
            Ok((e1, e2)) => worst = worst.max(e1).max(e2),
            Err(e) => return report.errored(e),
        }
    }
    report.compared(format!("{worst:.3e}"), format!("<= {:e}", tol.rel_tol), worst <= tol.rel_tol)
}

/// `(c)_k / (2c)_k` in floating point, for probing the `c -> -m` limit.
pub fn pochhammer_ratio_f64(c: f64, k: usize) -> f64 {
    (0..k).map(|i| (c + i as f64) / (2.0 * c + i as f64)).product()
}

/// The termwise limit `(-m)_k / (-2m)_k`, exactly.
pub fn termwise_limit(m: usize, k: usize) -> Rational {
    let num = pochhammer(&Rational::from(-(m as i64)), k);
    let den = pochhammer(&Rational::from(-2 * m as i64), k);
    num / den
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hyper::{truncated_sum, SeriesSpec, TermPolicy};

    fn tol() -> NumericTolerance {
        NumericTolerance::default()
    }

    #[test]
    fn gamma_known_values() {
        assert!((gamma(0.5).unwrap() - PI.sqrt()).abs() < 1e-14);
        assert!((gamma(5.0).unwrap() - 24.0).abs() < 1e-12);
        assert!((gamma(1.0).unwrap() - 1.0).abs() < 1e-14);
        assert!((gamma(-0.5).unwrap() + 2.0 * PI.sqrt()).abs() < 1e-13);
        let mut f = 1.0f64;
        for n in 1..=50u32 {
            let g = gamma(n as f64).unwrap();
            assert!((g - f).abs() / f < 1e-12, "n={n} {g} {f}");
            f *= n as f64;
        }
        // Gamma(n + 1/2) = (2n)! sqrt(pi) / (4^n n!)
        for n in 0..=40u32 {
            let exact = PI.sqrt() * rising_f64(0.5, n);
            let g = gamma(n as f64 + 0.5).unwrap();
            assert!((g - exact).abs() / exact < 1e-12, "n={n}");
        }
    }

    #[test]
    fn gamma_poles() {
        for x in [0.0, -1.0, -7.0] {
            assert!(matches!(gamma(x), Err(AnalyticError::PoleAtNonPositiveInteger { .. })));
        }
    }

    #[test]
    fn gamma_functional_equation() {
        let mut x = 0.1;
        while x < 20.0 {
            let r = gamma(x + 1.0).unwrap() / gamma(x).unwrap();
            assert!((r - x).abs() / x < 1e-12, "x={x}");
            x += 0.173;
        }
    }

    #[test]
    fn trig_reduction() {
        assert_eq!(cos_pi(0.5), 0.0);
        assert_eq!(cos_pi(-1.5), 0.0);
        assert_eq!(sin_pi(4.0), 0.0);
        assert!((cos_pi(1000.0 + 1.0 / 3.0) - 0.5).abs() < 1e-12);
        assert!((sin_pi(0.25) - 0.5f64.sqrt()).abs() < 1e-15);
        assert!((sin_pi(-0.25) + 0.5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn watson_trivial_and_terminating() {
        let p = WatsonParams { a: 0.0, b: 0.4, c: 1.2 };
        assert_eq!(watson_series(&p, &tol()).unwrap(), 1.0);
        let p = WatsonParams { a: 0.0, b: 0.0, c: 1.0 };
        assert!((watson_rhs(&p).unwrap() - 1.0).abs() < 1e-14);
        let p = WatsonParams { a: -2.0, b: 0.5, c: 1.5 };
        let l = watson_series(&p, &tol()).unwrap();
        let r = watson_rhs(&p).unwrap();
        assert!((l - r).abs() < 1e-12, "{l} {r}");
    }

    #[test]
    fn watson_generic_points() {
        for (a, b, c) in [(0.3, 0.4, 1.2), (0.5, 0.5, 2.0)] {
            let p = WatsonParams { a, b, c };
            let l = watson_series(&p, &tol()).unwrap();
            let r = watson_rhs(&p).unwrap();
            assert!((l - r).abs() < 1e-10 * (1.0 + r.abs()), "{a} {b} {c}: {l} {r}");
        }
    }

    #[test]
    fn watson_invalid_params() {
        let bad = WatsonParams { a: 2.0, b: 2.0, c: 1.0 };
        assert!(matches!(watson_series(&bad, &tol()), Err(AnalyticError::InvalidParams(_))));
        let bad = WatsonParams { a: 0.3, b: 0.4, c: -1.0 };
        assert!(matches!(bad.validate(), Err(AnalyticError::InvalidParams(_))));
        let p = WatsonParams { a: -1.0, b: 0.5, c: 1.5 };
        assert!(matches!(
            watson_rhs(&p),
            Err(AnalyticError::PoleAtNonPositiveInteger { factor: "Gamma(1/2+a/2)", .. })
        ));
    }

    #[test]
    fn no_convergence_is_reported() {
        let tight = NumericTolerance {
            max_terms: 10,
            ..NumericTolerance::default()
        };
        let p = WatsonParams { a: 0.7, b: 0.7, c: 1.0 };
        assert!(matches!(
            watson_series(&p, &tight),
            Err(AnalyticError::NoConvergence { .. })
        ));
    }

    #[test]
    fn terminating_watson_matches_exact_sum() {
        for n in 1..=4i64 {
            for (b, c) in [((1, 3), (5, 4)), ((2, 5), (7, 3))] {
                let a = Rational::from(-2 * n);
                let b = Rational::new(b.0, b.1).unwrap();
                let c = Rational::new(c.0, c.1).unwrap();
                let half = Rational::new(1, 2).unwrap();
                let spec = SeriesSpec::unit(
                    vec![a.clone(), b.clone(), c.clone()],
                    vec![(&a + &b + Rational::one()) * half, &c * Rational::from(2)],
                    (2 * n + 1) as usize,
                );
                let exact = truncated_sum(&spec, TermPolicy::Strict).unwrap().to_f64();
                let p = WatsonParams {
                    a: a.to_f64(),
                    b: b.to_f64(),
                    c: c.to_f64(),
                };
                let series = watson_series(&p, &tol()).unwrap();
                assert!((series - exact).abs() < 1e-12, "n={n}: {series} {exact}");
            }
        }
    }

    #[test]
    fn eq2_examples() {
        for (a, b) in [(0.0, 0.3), (0.6, 0.0)] {
            let p = eq2_pieces(a, b, 3).unwrap();
            assert_eq!(p.tail(), Some(0.0));
            assert!((p.limit().unwrap() - p.truncated).abs() < 1e-12);
        }
        assert!(eq2_consistency(0.3, 0.4, 2, &tol()).passed());
        assert!(eq2_consistency(0.5, 0.3, 1, &tol()).passed());
    }

    #[test]
    fn eq2_degenerate_inputs() {
        let r = eq2_consistency(1.0, 0.3, 2, &tol());
        assert_eq!(r.status, crate::report::Status::Error);
        assert!(r.error_kind.unwrap().starts_with("DegenerateTrig"));
        // cos(pi (a+b)/2) = 0 at a + b = 1: no finite ratio, cleared form.
        let p = eq2_pieces(0.25, 0.75, 2).unwrap();
        assert_eq!(p.limit(), None);
        let r = eq2_consistency(0.25, 0.75, 2, &tol());
        assert!(r.passed());
        assert_eq!(r.params["form"], "cleared");
    }

    #[test]
    fn gamma_transform_examples() {
        let samples = [
            GammaSample { a: 2.5, t: 0.3, m: 3 },
            GammaSample { a: 0.7, t: 0.25, m: 2 },
            GammaSample { a: 1.3, t: 0.1, m: 0 },
        ];
        for s in &samples {
            assert!(gamma_transform_check(s, &tol()).passed(), "{s:?}");
        }
        assert!(gamma_transform_checks(&samples, &tol()).passed());
        let pole = GammaSample { a: 2.0, t: 0.2, m: 3 };
        assert_eq!(gamma_transform_check(&pole, &tol()).status, crate::report::Status::Error);
        let degenerate = GammaSample { a: 2.5, t: 0.5, m: 1 };
        assert!(matches!(gamma_transform_errors(&degenerate), Err(AnalyticError::DegenerateTrig(_))));
    }

    #[test]
    fn termwise_limit_near_negative_integer() {
        for m in 1..=4usize {
            let c = -(m as f64) + 1e-6;
            for k in 0..=2 * m {
                let approx = pochhammer_ratio_f64(c, k);
                let exact = termwise_limit(m, k).to_f64();
                assert!((approx - exact).abs() < 1e-4, "m={m} k={k}: {approx} {exact}");
                if k > m {
                    assert_eq!(exact, 0.0);
                }
            }
        }
    }
}
