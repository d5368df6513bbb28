//! Pochhammer symbols, explicitly truncated hypergeometric sums, and the
//! single-sum identities built from them.
//!
//! A series is always summed over an explicit number of terms. Terminating
//! parameters are never used to infer where a sum stops: the truncated
//! `3F2(a, b, -m; (a+b+1)/2, -2m; 1)` means the first `m + 1` terms even
//! though `(-2m)_k` stays nonzero up to `k = 2m`.

use thiserror::Error;

use crate::exact::{ratfn_eq, ExactError, ExactField, RatFn, Rational, SymbolSet};
use crate::report::{IdentityId, VerificationReport};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HyperError {
    /// A lower-parameter Pochhammer factor vanishes at this term index.
    #[error("DenominatorZero({0})")]
    DenominatorZero(usize),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// How a term whose denominator vanishes is treated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TermPolicy {
    /// Any vanishing lower Pochhammer factor at an included index is an error.
    #[default]
    Strict,
    /// A term whose numerator product is exactly zero contributes zero and its
    /// denominator is never divided by.
    SkipZeroNumerator,
}

/// A hypergeometric series `pFq(upper; lower; argument)` cut to its first
/// `term_count` terms (indices `0..term_count`).
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesSpec<F> {
    pub upper: Vec<F>,
    pub lower: Vec<F>,
    pub argument: F,
    pub term_count: usize,
}

impl<F: ExactField> SeriesSpec<F> {
    /// Series at argument 1, which is the only argument the identities use.
    pub fn unit(upper: Vec<F>, lower: Vec<F>, term_count: usize) -> Self {
        let argument = upper
            .first()
            .or(lower.first())
            .expect("at least one parameter")
            .one();
        SeriesSpec {
            upper,
            lower,
            argument,
            term_count,
        }
    }
}

/// Rising factorial `t (t+1) ... (t+k-1)`; `(t)_0 = 1`.
pub fn pochhammer<F: ExactField>(t: &F, k: usize) -> F {
    let mut acc = t.one();
    let mut factor = t.clone();
    for i in 0..k {
        if i > 0 {
            factor = factor.plus_int(1);
        }
        acc = acc.times(&factor);
    }
    acc
}

/// `k!`, computed as `(1)_k`.
pub fn factorial<F: ExactField>(proto: &F, k: usize) -> F {
    pochhammer(&proto.one(), k)
}

/// The individual terms `prod (upper)_k / (k! prod (lower)_k) z^k` for
/// `k = 0..term_count`.
pub fn series_terms<F: ExactField>(
    spec: &SeriesSpec<F>,
    policy: TermPolicy,
) -> Result<Vec<F>, HyperError> {
    let proto = &spec.argument;
    let one = proto.one();
    let mut terms = Vec::with_capacity(spec.term_count);
    let mut num = one.clone();
    let mut den = one.clone();
    // Shifted parameters: the factor contributed at step k is (p + k - 1).
    let mut up: Vec<F> = spec.upper.clone();
    // k! rides along as the lower parameter 1.
    let mut low: Vec<F> = std::iter::once(one.clone())
        .chain(spec.lower.iter().cloned())
        .collect();
    let mut den_zero_at: Option<usize> = None;

    for k in 0..spec.term_count {
        if k > 0 {
            for u in &up {
                num = num.times(u);
            }
            num = num.times(&spec.argument);
            for l in &low {
                if den_zero_at.is_none() && l.is_zero() {
                    den_zero_at = Some(k);
                }
                den = den.times(l);
            }
            for p in up.iter_mut().chain(low.iter_mut()) {
                *p = p.plus(&one);
            }
        }
        if let Some(at) = den_zero_at {
            let suppressed = policy == TermPolicy::SkipZeroNumerator && num.is_zero();
            if !suppressed {
                return Err(HyperError::DenominatorZero(at));
            }
            terms.push(proto.zero());
            continue;
        }
        terms.push(num.divide(&den)?);
    }
    Ok(terms)
}

/// Exact sum of the first `spec.term_count` terms.
pub fn truncated_sum<F: ExactField>(spec: &SeriesSpec<F>, policy: TermPolicy) -> Result<F, HyperError> {
    let terms = series_terms(spec, policy)?;
    Ok(terms
        .iter()
        .fold(spec.argument.zero(), |acc, t| acc.plus(t)))
}

/// `(a+b+1)/2`, the lower parameter of the truncated sum.
fn half_sum_plus_half<F: ExactField>(a: &F, b: &F) -> F {
    a.plus(b).plus_int(1).scale_rational(&Rational::new(1, 2).unwrap())
}

fn eq3_spec<F: ExactField>(a: &F, b: &F, m: usize) -> SeriesSpec<F> {
    let mi = m as i64;
    SeriesSpec::unit(
        vec![a.clone(), b.clone(), a.embed_int(-mi)],
        vec![half_sum_plus_half(a, b), a.embed_int(-2 * mi)],
        m + 1,
    )
}

/// `sum_{k=0}^{m} (a)_k (b)_k (-m)_k / (k! ((a+b+1)/2)_k (-2m)_k)`.
pub fn eq3_lhs<F: ExactField>(a: &F, b: &F, m: usize) -> Result<F, HyperError> {
    truncated_sum(&eq3_spec(a, b, m), TermPolicy::Strict)
}

/// `((a+1)/2)_m ((b+1)/2)_m / ((1/2)_m ((a+b+1)/2)_m)`.
pub fn eq3_rhs<F: ExactField>(a: &F, b: &F, m: usize) -> Result<F, HyperError> {
    let half = Rational::new(1, 2).unwrap();
    let num = pochhammer(&a.plus_int(1).scale_rational(&half), m)
        .times(&pochhammer(&b.plus_int(1).scale_rational(&half), m));
    let den = pochhammer(&a.embed_rational(&half), m).times(&pochhammer(&half_sum_plus_half(a, b), m));
    if den.is_zero() {
        return Err(HyperError::DenominatorZero(first_vanishing_index(&half_sum_plus_half(a, b), m)));
    }
    Ok(num.divide(&den)?)
}

/// Smallest k <= m with (t)_k = 0, or m if none.
fn first_vanishing_index<F: ExactField>(t: &F, m: usize) -> usize {
    let mut f = t.clone();
    for k in 1..=m {
        if f.is_zero() {
            return k;
        }
        f = f.plus_int(1);
    }
    m
}

/// Symbol set `{a, b}` and the two generators.
pub fn ab_symbols() -> (SymbolSet, RatFn, RatFn) {
    let s = SymbolSet::new(&["a", "b"]).expect("valid symbols");
    let a = RatFn::var(&s, "a").unwrap();
    let b = RatFn::var(&s, "b").unwrap();
    (s, a, b)
}

fn symbolic_report(id: IdentityId, m: usize, lhs: &RatFn, rhs: &RatFn) -> VerificationReport {
    let equal = ratfn_eq(lhs, rhs).unwrap_or(false);
    VerificationReport::new(id)
        .param("m", m)
        .compared(lhs, rhs, equal)
}

/// Checks the truncated-sum identity as an identity of rational functions
/// in `a, b`.
pub fn verify_eq3_symbolic(m: usize) -> VerificationReport {
    let (_, a, b) = ab_symbols();
    match eq3_lhs(&a, &b, m).and_then(|l| Ok((l, eq3_rhs(&a, &b, m)?))) {
        Ok((lhs, rhs)) => symbolic_report(IdentityId::Eq3, m, &lhs, &rhs),
        Err(e) => VerificationReport::new(IdentityId::Eq3).param("m", m).errored(e),
    }
}

/// Checks the truncated-sum identity exactly at a rational point.
pub fn verify_eq3_point(a: &Rational, b: &Rational, m: usize) -> VerificationReport {
    let report = VerificationReport::new(IdentityId::Eq3)
        .param("a", a)
        .param("b", b)
        .param("m", m);
    match eq3_lhs(a, b, m).and_then(|l| Ok((l, eq3_rhs(a, b, m)?))) {
        Ok((lhs, rhs)) => {
            let equal = lhs == rhs;
            report.compared(lhs, rhs, equal)
        }
        Err(e) => report.errored(e),
    }
}

/// Both sides of the Pfaff-Saalschutz evaluation used at the end of the
/// `c -> -m` chain, plus their comparison.
#[derive(Debug, Clone)]
pub struct PfaffSaalschutz<F> {
    pub lhs: F,
    pub rhs: F,
    pub report: VerificationReport,
}

/// `3F2(a, b, -m; a+b+1/2, -m+1/2; 1)` to `m+1` terms against
/// `(a+1/2)_m (b+1/2)_m / ((a+b+1/2)_m (1/2)_m)`.
pub fn pfaff_saalschutz<F: ExactField>(
    a: &F,
    b: &F,
    m: usize,
) -> Result<PfaffSaalschutz<F>, HyperError> {
    let lhs = truncated_sum(&saalschutz_spec(a, b, m), TermPolicy::Strict)?;
    let rhs = saalschutz_closed(a, b, m)?;
    let report = VerificationReport::new(IdentityId::Eq5)
        .param("a", a)
        .param("b", b)
        .param("m", m)
        .compared(&lhs, &rhs, lhs == rhs);
    Ok(PfaffSaalschutz { lhs, rhs, report })
}

fn saalschutz_spec<F: ExactField>(a: &F, b: &F, m: usize) -> SeriesSpec<F> {
    let half = Rational::new(1, 2).unwrap();
    let mi = m as i64;
    SeriesSpec::unit(
        vec![a.clone(), b.clone(), a.embed_int(-mi)],
        vec![
            a.plus(b).plus(&a.embed_rational(&half)),
            a.embed_rational(&(Rational::from(-mi) + &half)),
        ],
        m + 1,
    )
}

fn saalschutz_closed<F: ExactField>(a: &F, b: &F, m: usize) -> Result<F, HyperError> {
    let half = a.embed_rational(&Rational::new(1, 2).unwrap());
    let num = pochhammer(&a.plus(&half), m).times(&pochhammer(&b.plus(&half), m));
    let lower = a.plus(b).plus(&half);
    let den = pochhammer(&lower, m).times(&pochhammer(&half, m));
    if den.is_zero() {
        return Err(HyperError::DenominatorZero(first_vanishing_index(&lower, m)));
    }
    Ok(num.divide(&den)?)
}

/// Checks the two-series transformation in `a, b, c`:
/// `3F2(-m, 2a, 2b; a+b+1/2, 2c; 1) = 4F3(a, b, 2c+m, -m; a+b+1/2, c, c+1/2; 1)`,
/// both cut to `m + 1` terms.
pub fn verify_bailey(m: usize) -> VerificationReport {
    let s = SymbolSet::new(&["a", "b", "c"]).expect("valid symbols");
    let a = RatFn::var(&s, "a").unwrap();
    let b = RatFn::var(&s, "b").unwrap();
    let c = RatFn::var(&s, "c").unwrap();
    let half = Rational::new(1, 2).unwrap();
    let mi = m as i64;
    let ab_half = a.plus(&b).plus(&a.embed_rational(&half));
    let lhs_spec = SeriesSpec::unit(
        vec![a.embed_int(-mi), a.plus(&a), b.plus(&b)],
        vec![ab_half.clone(), c.plus(&c)],
        m + 1,
    );
    let rhs_spec = SeriesSpec::unit(
        vec![a.clone(), b.clone(), c.plus(&c).plus_int(mi), a.embed_int(-mi)],
        vec![ab_half, c.clone(), c.plus(&c.embed_rational(&half))],
        m + 1,
    );
    let sums = truncated_sum(&lhs_spec, TermPolicy::Strict)
        .and_then(|l| Ok((l, truncated_sum(&rhs_spec, TermPolicy::Strict)?)));
    match sums {
        Ok((lhs, rhs)) => symbolic_report(IdentityId::Eq4, m, &lhs, &rhs),
        Err(e) => VerificationReport::new(IdentityId::Eq4).param("m", m).errored(e),
    }
}

/// Checks, in `a, b`, the chain
/// `sum (-m)_k (2a)_k (2b)_k / (k! (a+b+1/2)_k (-2m)_k)`
/// `= 4F3(a, b, -m, -m; a+b+1/2, -m, -m+1/2; 1)` (the `c = -m` form)
/// `= 3F2(a, b, -m; a+b+1/2, -m+1/2; 1)`
/// `= (a+1/2)_m (b+1/2)_m / ((a+b+1/2)_m (1/2)_m)`,
/// all to `m + 1` terms, and that `a -> a/2, b -> b/2` turns the first sum
/// into the truncated `3F2` termwise and the product into its closed form.
pub fn verify_eq5_chain(m: usize) -> VerificationReport {
    let report = VerificationReport::new(IdentityId::Eq5).param("m", m);
    match eq5_chain_links(m) {
        Ok(chain) => {
            let failed: Vec<&str> = chain
                .links
                .iter()
                .filter(|(_, ok)| !ok)
                .map(|(name, _)| *name)
                .collect();
            report
                .compared(&chain.first, &chain.closed, failed.is_empty())
                .with_detail(format!("mismatch: {}", failed.join(",")))
        }
        Err(e) => report.errored(e),
    }
}

struct Eq5Chain {
    first: RatFn,
    closed: RatFn,
    links: Vec<(&'static str, bool)>,
}

fn eq5_chain_links(m: usize) -> Result<Eq5Chain, HyperError> {
    let (_, a, b) = ab_symbols();
    let half = Rational::new(1, 2).unwrap();
    let mi = m as i64;
    let neg_m = a.embed_int(-mi);
    let ab_half = a.plus(&b).plus(&a.embed_rational(&half));

    let first_spec = SeriesSpec::unit(
        vec![neg_m.clone(), a.plus(&a), b.plus(&b)],
        vec![ab_half.clone(), a.embed_int(-2 * mi)],
        m + 1,
    );
    let first_terms = series_terms(&first_spec, TermPolicy::Strict)?;
    let first = first_terms.iter().fold(a.zero(), |acc, t| acc.plus(t));

    let limit_spec = SeriesSpec::unit(
        vec![a.clone(), b.clone(), neg_m.clone(), neg_m.clone()],
        vec![
            ab_half.clone(),
            neg_m.clone(),
            a.embed_rational(&(Rational::from(-mi) + &half)),
        ],
        m + 1,
    );
    let at_limit = truncated_sum(&limit_spec, TermPolicy::Strict)?;
    let ps = pfaff_saalschutz(&a, &b, m)?;

    let halve = [a.scale_rational(&half), b.scale_rational(&half)];
    let eq3_terms = series_terms(&eq3_spec(&a, &b, m), TermPolicy::Strict)?;
    let mut termwise = first_terms.len() == eq3_terms.len();
    for (t5, t3) in first_terms.iter().zip(&eq3_terms) {
        termwise &= t5.compose(&halve)? == *t3;
    }
    let closed_halved = ps.rhs.compose(&halve)? == eq3_rhs(&a, &b, m)?;

    Ok(Eq5Chain {
        links: vec![
            ("c->-m", first == at_limit),
            ("cancel", at_limit == ps.lhs),
            ("pfaff-saalschutz", ps.report.passed()),
            ("halve-terms", termwise),
            ("halve-closed", closed_halved),
        ],
        first,
        closed: ps.rhs,
    })
}
