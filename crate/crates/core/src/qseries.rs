//! q-Pochhammer products and the truncated `4phi3` summation
//!
//! ```text
//! 4phi3(a^2, b^2, -q^-N, q^-N; ab sqrt(q), -ab sqrt(q), q^-2N; q; q)_N
//!     = (a^2 q; q^2)_N (b^2 q; q^2)_N / ((a^2 b^2 q; q^2)_N (q; q^2)_N)
//! ```
//!
//! checked as an identity of rational functions in `A = a^2`, `B = b^2` and
//! `q`. Parameters that come in `x, -x` pairs only ever enter through
//! `(x; q)_n (-x; q)_n = (x^2; q^2)_n`, so no square root of `q` is needed.
//! Negative powers of `q` are plain rational-function reciprocals.

use thiserror::Error;

use crate::exact::{ratfn_eq, ExactError, ExactField, RatFn, Rational, SymbolSet};
use crate::hyper::{eq3_rhs, HyperError};
use crate::report::{IdentityId, VerificationReport};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QSeriesError {
    #[error("InvalidParams({0})")]
    InvalidParams(String),
    #[error("TruncationExceeded(requested {requested} terms, series has {allowed})")]
    TruncationExceeded { requested: usize, allowed: usize },
    #[error("DenominatorZero({0})")]
    DenominatorZero(usize),
    #[error("NumericInstability(estimated relative error {0:e})")]
    NumericInstability(f64),
    #[error(transparent)]
    Hyper(#[from] HyperError),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// Symbol set `{A, B, q}` with its generators.
pub fn q_symbols() -> (SymbolSet, RatFn, RatFn, RatFn) {
    let s = SymbolSet::new(&["A", "B", "q"]).expect("valid symbols");
    let a = RatFn::var(&s, "A").unwrap();
    let b = RatFn::var(&s, "B").unwrap();
    let q = RatFn::var(&s, "q").unwrap();
    (s, a, b, q)
}

fn q_power(symbols: &SymbolSet, exp: i64) -> Result<RatFn, ExactError> {
    let e = i32::try_from(exp).map_err(|_| ExactError::InvalidSymbol("q".into()))?;
    RatFn::var_pow(symbols, "q", e)
}

/// `(x; q^step)_n = prod_{i<n} (1 - x q^(step*i))`. The symbol set of `x`
/// must contain `q`.
pub fn q_pochhammer(x: &RatFn, q_power_step: u32, n: usize) -> Result<RatFn, ExactError> {
    let s = x.symbols();
    let mut acc = x.one();
    for i in 0..n {
        let shifted = x.times(&q_power(s, i as i64 * q_power_step as i64)?);
        acc = acc.times(&x.one().minus(&shifted));
    }
    Ok(acc)
}

/// `(x^2; q^2)_n`, the product `(x; q)_n (-x; q)_n` written without `x`.
pub fn paired_q_pochhammer(x_squared: &RatFn, n: usize) -> Result<RatFn, ExactError> {
    q_pochhammer(x_squared, 2, n)
}

/// A `(x; q)_n (-x; q)_n` pair with `x^2 = base_squared * q^shift` and
/// `x = sqrt(base_squared) * q^(shift/2)`; the half-integer exponent of `x`
/// is stored as its numerator over 2.
#[derive(Debug, Clone)]
pub struct QPochSpec {
    pub base_squared: RatFn,
    pub shift_exponent_half: i64,
    pub length: usize,
}

impl QPochSpec {
    /// The `i`-th factor `1 - x^2 q^(2i)` of the paired product.
    pub fn factor(&self, i: usize) -> Result<RatFn, ExactError> {
        let s = self.base_squared.symbols();
        let x_sq = self
            .base_squared
            .times(&q_power(s, self.shift_exponent_half + 2 * i as i64)?);
        Ok(x_sq.one().minus(&x_sq))
    }

    pub fn value(&self) -> Result<RatFn, ExactError> {
        let mut acc = self.base_squared.one();
        for i in 0..self.length {
            acc = acc.times(&self.factor(i)?);
        }
        Ok(acc)
    }
}

/// The first `term_count` terms of the `4phi3` series with parameter `N`.
/// The series is truncated after `N + 1` terms; asking for more is an
/// error.
pub fn eq6_partial_sum(big_n: usize, term_count: usize) -> Result<RatFn, QSeriesError> {
    if big_n == 0 {
        return Err(QSeriesError::InvalidParams("N >= 1 required".into()));
    }
    if term_count > big_n + 1 {
        return Err(QSeriesError::TruncationExceeded {
            requested: term_count,
            allowed: big_n + 1,
        });
    }
    let (s, a_sq, b_sq, q) = q_symbols();
    let n2 = 2 * big_n as i64;
    let q_neg_2n = q_power(&s, -n2)?;
    let one = q.one();
    // Pairs: (-q^-N, q^-N) -> (q^-2N; q^2), (ab sqrt(q), -ab sqrt(q)) -> (ABq; q^2).
    let q_neg_n_pair = QPochSpec {
        base_squared: one.clone(),
        shift_exponent_half: -n2,
        length: big_n,
    };
    let ab_sqrt_q_pair = QPochSpec {
        base_squared: a_sq.times(&b_sq),
        shift_exponent_half: 1,
        length: big_n,
    };

    let mut sum = q.zero();
    let mut num = one.clone();
    let mut den = one.clone();
    for k in 0..term_count {
        if k > 0 {
            let i = (k - 1) as i64;
            let qi = q_power(&s, i)?;
            num = num
                .times(&one.minus(&a_sq.times(&qi)))
                .times(&one.minus(&b_sq.times(&qi)))
                .times(&q_neg_n_pair.factor(k - 1)?)
                .times(&q);
            let factors = [
                one.minus(&q.times(&qi)),
                ab_sqrt_q_pair.factor(k - 1)?,
                one.minus(&q_neg_2n.times(&qi)),
            ];
            if factors.iter().any(|f| f.is_zero()) {
                return Err(QSeriesError::DenominatorZero(k));
            }
            for f in &factors {
                den = den.times(f);
            }
        }
        sum = sum.plus(&num.divide(&den)?);
    }
    Ok(sum)
}

/// Left side: the series cut to its `N + 1` terms.
pub fn eq6_lhs(big_n: usize) -> Result<RatFn, QSeriesError> {
    eq6_partial_sum(big_n, big_n + 1)
}

/// Right side: `(Aq; q^2)_N (Bq; q^2)_N / ((ABq; q^2)_N (q; q^2)_N)`.
pub fn eq6_rhs(big_n: usize) -> Result<RatFn, QSeriesError> {
    if big_n == 0 {
        return Err(QSeriesError::InvalidParams("N >= 1 required".into()));
    }
    let (_, a_sq, b_sq, q) = q_symbols();
    let num = paired_q_pochhammer(&a_sq.times(&q), big_n)?
        .times(&paired_q_pochhammer(&b_sq.times(&q), big_n)?);
    let den = paired_q_pochhammer(&a_sq.times(&b_sq).times(&q), big_n)?
        .times(&paired_q_pochhammer(&q, big_n)?);
    Ok(num.divide(&den)?)
}

/// Exact rational-function comparison of both sides for one `N`.
pub fn verify_eq6(big_n: usize) -> VerificationReport {
    let report = VerificationReport::new(IdentityId::Eq6).param("N", big_n);
    match eq6_lhs(big_n).and_then(|l| Ok((l, eq6_rhs(big_n)?))) {
        Ok((lhs, rhs)) => {
            let equal = ratfn_eq(&lhs, &rhs).unwrap_or(false);
            report.compared(&lhs, &rhs, equal)
        }
        Err(e) => report.errored(e),
    }
}

fn qpoch_f64(x: f64, q: f64, step: i32, n: usize) -> f64 {
    (0..n).map(|i| 1.0 - x * q.powi(step * i as i32)).product()
}

/// Both sides of the identity in floating point at `A`, `B`, `q`, with a
/// cancellation estimate `sum |t_k| / |sum t_k|` for the series side.
fn eq6_f64(a_sq: f64, b_sq: f64, q: f64, big_n: usize) -> (f64, f64, f64) {
    let q_neg_2n = q.powi(-2 * big_n as i32);
    let mut sum = 0.0;
    let mut abs_sum = 0.0;
    for k in 0..=big_n {
        let t = qpoch_f64(a_sq, q, 1, k) * qpoch_f64(b_sq, q, 1, k) * qpoch_f64(q_neg_2n, q, 2, k)
            / (qpoch_f64(q, q, 1, k) * qpoch_f64(a_sq * b_sq * q, q, 2, k) * qpoch_f64(q_neg_2n, q, 1, k))
            * q.powi(k as i32);
        sum += t;
        abs_sum += t.abs();
    }
    let rhs = qpoch_f64(a_sq * q, q, 2, big_n) * qpoch_f64(b_sq * q, q, 2, big_n)
        / (qpoch_f64(a_sq * b_sq * q, q, 2, big_n) * qpoch_f64(q, q, 2, big_n));
    let cond = if sum == 0.0 { f64::INFINITY } else { abs_sum / sum.abs() };
    (sum, rhs, cond)
}

/// Deviation of the q-side from its `q -> 1` limit at two step sizes.
#[derive(Debug, Clone, PartialEq)]
pub struct QLimitOutcome {
    /// The `q -> 1` limit: the truncated sum at `(2a, 2b)`, since `A = a^2`
    /// becomes `q^(2a)`.
    pub target: Rational,
    /// `(h, lhs, rhs, deviation)` for `h` and `h/2`.
    pub samples: [(f64, f64, f64, f64); 2],
    /// `deviation(h/2) / deviation(h)`.
    pub ratio: f64,
    /// Observed convergence order `log2(1 / ratio)`.
    pub order: f64,
}

/// Default largest tolerated relative rounding error in the floating-point
/// sides.
pub const INSTABILITY_BUDGET: f64 = 1e-6;

/// Evaluates both sides at `q = 1 - h` and `q = 1 - h/2` with
/// `A = q^(2a)`, `B = q^(2b)`, `N = m`, and measures how fast they approach
/// the exact limit.
pub fn q_limit_outcome(a: &Rational, b: &Rational, m: usize, h: f64) -> Result<QLimitOutcome, QSeriesError> {
    q_limit_outcome_with_budget(a, b, m, h, INSTABILITY_BUDGET)
}

/// [`q_limit_outcome`] with an explicit rounding-error budget.
pub fn q_limit_outcome_with_budget(
    a: &Rational,
    b: &Rational,
    m: usize,
    h: f64,
    budget: f64,
) -> Result<QLimitOutcome, QSeriesError> {
    if m == 0 {
        return Err(QSeriesError::InvalidParams("m >= 1 required".into()));
    }
    if !(h > 0.0 && h < 0.5) {
        return Err(QSeriesError::InvalidParams("0 < h < 1/2 required".into()));
    }
    let two = Rational::from(2);
    let target = eq3_rhs(&(&two * a), &(&two * b), m)?;
    let t = target.to_f64();
    let (af, bf) = (a.to_f64(), b.to_f64());
    let mut samples = [(0.0, 0.0, 0.0, 0.0); 2];
    for (slot, step) in samples.iter_mut().zip([h, h / 2.0]) {
        let q = 1.0 - step;
        let (lhs, rhs, cond) = eq6_f64(q.powf(2.0 * af), q.powf(2.0 * bf), q, m);
        // Each factor 1 - q^x loses about log10(1/h) digits.
        let est = cond * (6 * m + 2) as f64 * f64::EPSILON / step;
        if !lhs.is_finite() || !rhs.is_finite() || est > budget {
            return Err(QSeriesError::NumericInstability(est));
        }
        let dev = (lhs - t).abs().max((rhs - t).abs());
        *slot = (step, lhs, rhs, dev);
    }
    let ratio = samples[1].3 / samples[0].3;
    Ok(QLimitOutcome {
        target,
        samples,
        ratio,
        order: (1.0 / ratio).log2(),
    })
}

/// Largest halving ratio still counted as convergence.
pub const CONVERGENT_RATIO_MAX: f64 = 0.7;

/// Report form of [`q_limit_outcome`]: passes when the deviation shrinks by
/// at least a factor `1/CONVERGENT_RATIO_MAX` as `h` halves. The observed
/// ratio and order are appended to the parameters.
pub fn q_limit_check(a: &Rational, b: &Rational, m: usize, h: f64) -> VerificationReport {
    q_limit_check_with_budget(a, b, m, h, INSTABILITY_BUDGET)
}

/// [`q_limit_check`] with an explicit rounding-error budget.
pub fn q_limit_check_with_budget(a: &Rational, b: &Rational, m: usize, h: f64, budget: f64) -> VerificationReport {
    let report = VerificationReport::new(IdentityId::QLimit)
        .param("a", a)
        .param("b", b)
        .param("m", m)
        .param("h", format!("{h:e}"));
    match q_limit_outcome_with_budget(a, b, m, h, budget) {
        Ok(o) => {
            let (_, lhs, _, dev) = o.samples[1];
            let converging = o.samples[0].3 == 0.0
                || (dev.is_finite() && o.ratio <= CONVERGENT_RATIO_MAX);
            report
                .param("observed_ratio", format!("{:.6}", o.ratio))
                .param("observed_order", format!("{:.3}", o.order))
                .compared(format!("{lhs:.15e}"), format!("{:.15e}", o.target.to_f64()), converging)
                .with_detail(format!("deviation not shrinking (ratio {:.4})", o.ratio))
        }
        Err(e) => report.errored(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, MultiPoly};

    fn sub(r: &RatFn, a: Rational, b: Rational, q: Rational) -> Result<Rational, ExactError> {
        r.evaluate(&[a, b, q])
    }

    #[test]
    fn q_pochhammer_examples() {
        let (_, a_sq, _, q) = q_symbols();
        assert_eq!(q_pochhammer(&q, 1, 0).unwrap(), q.one());
        let expected = q.one().minus(&q).times(&q.one().minus(&q.times(&q).times(&q)));
        assert_eq!(q_pochhammer(&q, 2, 2).unwrap(), expected);
        assert_eq!(
            q_pochhammer(&a_sq.times(&q), 2, 1).unwrap(),
            q.one().minus(&a_sq.times(&q))
        );
    }

    #[test]
    fn paired_examples() {
        let (s, a_sq, b_sq, q) = q_symbols();
        let abq = a_sq.times(&b_sq).times(&q);
        assert_eq!(paired_q_pochhammer(&abq, 1).unwrap(), q.one().minus(&abq));
        let q_m2 = RatFn::var_pow(&s, "q", -2).unwrap();
        assert_eq!(paired_q_pochhammer(&q_m2, 1).unwrap(), q.one().minus(&q_m2));
        assert_eq!(paired_q_pochhammer(&abq, 0).unwrap(), q.one());
        let spec = QPochSpec {
            base_squared: a_sq.times(&b_sq),
            shift_exponent_half: 1,
            length: 3,
        };
        assert_eq!(spec.value().unwrap(), paired_q_pochhammer(&abq, 3).unwrap());
    }

    #[test]
    fn pairing_matches_product_of_signed_factors() {
        // Temporary symbol x with x^2 -> X.
        let s = SymbolSet::new(&["x", "X", "q"]).unwrap();
        let x = RatFn::var(&s, "x").unwrap();
        let big_x = RatFn::var(&s, "X").unwrap();
        for n in 0..=8 {
            let product = q_pochhammer(&x, 1, n)
                .unwrap()
                .times(&q_pochhammer(&x.negate(), 1, n).unwrap());
            let paired = paired_q_pochhammer(&big_x, n).unwrap();
            let product_in_x_sq = reduce_x_squared(&product);
            assert_eq!(product_in_x_sq, paired, "n={n}");
        }
    }

    /// Rewrites a polynomial in x (even powers only) with x^2 -> X.
    fn reduce_x_squared(r: &RatFn) -> RatFn {
        assert!(r.denom().as_constant().is_some());
        let s = r.symbols().clone();
        let terms = r.numer().terms().map(|(m, c)| {
            assert_eq!(m.0[0] % 2, 0, "odd power of x survived");
            let mut e = m.0;
            e[1] += e[0] / 2;
            e[0] = 0;
            (crate::exact::Monomial(e), c.clone())
        });
        let num = MultiPoly::from_terms(&s, terms.collect::<Vec<_>>());
        RatFn::new(num, r.denom().clone()).unwrap()
    }

    #[test]
    fn eq6_n1_hand_expansion() {
        let (_, a_sq, b_sq, q) = q_symbols();
        let one = q.one();
        let expected = one.plus(
            &one.minus(&a_sq)
                .times(&one.minus(&b_sq))
                .times(&q)
                .divide(&one.minus(&q).times(&one.minus(&a_sq.times(&b_sq).times(&q))))
                .unwrap(),
        );
        assert_eq!(eq6_lhs(1).unwrap(), expected);
        let rhs = one
            .minus(&a_sq.times(&q))
            .times(&one.minus(&b_sq.times(&q)))
            .divide(&one.minus(&a_sq.times(&b_sq).times(&q)).times(&one.minus(&q)))
            .unwrap();
        assert_eq!(eq6_rhs(1).unwrap(), rhs);
        assert!(verify_eq6(1).passed());
        assert!(verify_eq6(2).passed());
    }

    #[test]
    fn eq6_specializations() {
        let lhs = eq6_lhs(3).unwrap();
        let rhs = eq6_rhs(3).unwrap();
        let q0 = rat(2, 3).unwrap();
        // A = 1 kills every k >= 1 term.
        for b in [rat(1, 5).unwrap(), rat(-3, 2).unwrap()] {
            assert_eq!(sub(&lhs, Rational::one(), b.clone(), q0.clone()).unwrap(), Rational::one());
            assert_eq!(sub(&rhs, Rational::one(), b, q0.clone()).unwrap(), Rational::one());
        }
        // A = B = 0: both sides reduce to 1/(q; q^2)_N.
        let at_zero = sub(&lhs, Rational::zero(), Rational::zero(), q0.clone()).unwrap();
        let expected: Rational = (0..3)
            .map(|i| Rational::one() - q0.pow(2 * i + 1).unwrap())
            .product::<Rational>()
            .recip()
            .unwrap();
        assert_eq!(at_zero, expected);
        assert_eq!(sub(&rhs, Rational::zero(), Rational::zero(), q0).unwrap(), expected);
    }

    #[test]
    fn eq6_a_equals_b_specialization() {
        let (_, _, b_sq, q) = q_symbols();
        let diag = [b_sq.clone(), b_sq, q];
        for n in 1..=3 {
            let l = eq6_lhs(n).unwrap().compose(&diag).unwrap();
            let r = eq6_rhs(n).unwrap().compose(&diag).unwrap();
            assert_eq!(l, r, "N={n}");
        }
    }

    #[test]
    fn truncation_is_mandatory() {
        assert!(matches!(
            eq6_partial_sum(2, 4),
            Err(QSeriesError::TruncationExceeded { requested: 4, allowed: 3 })
        ));
        assert!(eq6_partial_sum(2, 3).is_ok());
        assert!(matches!(eq6_lhs(0), Err(QSeriesError::InvalidParams(_))));
        assert_eq!(verify_eq6(0).status, crate::report::Status::Error);
    }

    #[test]
    fn q_limit_targets_doubled_parameters() {
        let one = Rational::one();
        let o = q_limit_outcome(&one, &one, 1, 1e-3).unwrap();
        assert_eq!(o.target, rat(9, 5).unwrap());
        assert!(o.samples[0].3 < 1e-2);
        assert!(o.samples[1].3 < o.samples[0].3);

        let h = rat(1, 2).unwrap();
        let o = q_limit_outcome(&h, &h, 2, 1e-4).unwrap();
        assert_eq!(o.target, eq3_rhs(&one, &one, 2).unwrap());
        assert!(o.samples[1].3 < 1e-7);
    }

    #[test]
    fn q_limit_a_zero_is_exact() {
        let o = q_limit_outcome(&Rational::zero(), &rat(3, 4).unwrap(), 2, 1e-2).unwrap();
        assert_eq!(o.target, Rational::one());
        assert!(o.samples.iter().all(|s| (s.1 - 1.0).abs() < 1e-12 && (s.2 - 1.0).abs() < 1e-12));
        assert!(q_limit_check(&Rational::zero(), &Rational::one(), 2, 1e-2).passed());
    }

    #[test]
    fn q_limit_error_monotone_in_h() {
        for a in [rat(1, 4).unwrap(), rat(1, 2).unwrap(), Rational::one()] {
            for b in [rat(1, 3).unwrap(), rat(3, 2).unwrap()] {
                for m in 1..=3 {
                    let devs: Vec<f64> = [1e-2, 1e-3, 1e-4]
                        .iter()
                        .map(|&h| q_limit_outcome(&a, &b, m, h).unwrap().samples[0].3)
                        .collect();
                    assert!(devs[0] > devs[1] && devs[1] > devs[2], "{a} {b} {m}: {devs:?}");
                }
            }
        }
    }

    #[test]
    fn q_limit_rejects_bad_inputs() {
        let one = Rational::one();
        assert!(matches!(q_limit_outcome(&one, &one, 1, 0.6), Err(QSeriesError::InvalidParams(_))));
        assert!(matches!(q_limit_outcome(&one, &one, 0, 0.1), Err(QSeriesError::InvalidParams(_))));
        // (2a+2b+1)/2 = 0 is an excluded point of the limit.
        let r = q_limit_check(&rat(-1, 4).unwrap(), &rat(-1, 4).unwrap(), 1, 1e-3);
        assert_eq!(r.status, crate::report::Status::Error);
        // Absurdly small h is flagged rather than trusted.
        assert!(matches!(
            q_limit_outcome(&one, &one, 3, 1e-13),
            Err(QSeriesError::NumericInstability(_))
        ));
    }
}
