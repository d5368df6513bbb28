use std::collections::HashMap;
use std::fmt;

use super::field::ExactField;
use super::poly::{Monomial, MultiPoly, SymbolSet};
use super::{ExactError, Rational};

/// Quotient of two polynomials over the same symbol set.
///
/// No gcd normalization is performed; equality is decided by
/// cross-multiplication. Construction only strips common monomial factors
/// and makes the denominator's leading coefficient 1, which keeps
/// intermediate sizes down.
#[derive(Clone)]
pub struct RatFn {
    num: MultiPoly,
    den: MultiPoly,
}

/// True iff `r1.num * r2.den - r2.num * r1.den` is the zero polynomial.
pub fn ratfn_eq(r1: &RatFn, r2: &RatFn) -> Result<bool, ExactError> {
    r1.num.check_symbols(&r2.num)?;
    if r1.den == r2.den {
        return Ok(r1.num == r2.num);
    }
    let lhs = r1.num.mul_unchecked(&r2.den);
    let rhs = r2.num.mul_unchecked(&r1.den);
    Ok(lhs == rhs)
}

impl RatFn {
    pub fn new(num: MultiPoly, den: MultiPoly) -> Result<Self, ExactError> {
        num.check_symbols(&den)?;
        if den.is_zero() {
            return Err(ExactError::ZeroDenominator);
        }
        Ok(Self::normalized(num, den))
    }

    fn normalized(num: MultiPoly, den: MultiPoly) -> Self {
        if num.is_zero() {
            let one = MultiPoly::one(num.symbols());
            return RatFn { num, den: one };
        }
        let g = num.monomial_content().gcd(&den.monomial_content());
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_monomial(&g), den.div_monomial(&g))
        };
        let lc = den.leading_term().unwrap().1.clone();
        if lc.is_one() {
            return RatFn { num, den };
        }
        let inv = lc.recip().expect("nonzero leading coefficient");
        RatFn {
            num: num.scale(&inv),
            den: den.scale(&inv),
        }
    }

    pub fn from_poly(p: MultiPoly) -> Self {
        let den = MultiPoly::one(p.symbols());
        RatFn { num: p, den }
    }

    pub fn constant(symbols: &SymbolSet, c: Rational) -> Self {
        Self::from_poly(MultiPoly::constant(symbols, c))
    }

    pub fn var(symbols: &SymbolSet, name: &str) -> Result<Self, ExactError> {
        Ok(Self::from_poly(MultiPoly::var(symbols, name)?))
    }

    /// `symbol^exp` for any integer exponent.
    pub fn var_pow(symbols: &SymbolSet, name: &str, exp: i32) -> Result<Self, ExactError> {
        let i = symbols
            .index_of(name)
            .ok_or_else(|| ExactError::UnknownSymbol(name.to_string()))?;
        let m = MultiPoly::monomial(symbols, Monomial::var(i, exp.unsigned_abs()), Rational::one());
        let one = MultiPoly::one(symbols);
        Ok(if exp >= 0 {
            RatFn { num: m, den: one }
        } else {
            RatFn { num: one, den: m }
        })
    }

    pub fn symbols(&self) -> &SymbolSet {
        self.num.symbols()
    }

    pub fn numer(&self) -> &MultiPoly {
        &self.num
    }

    pub fn denom(&self) -> &MultiPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// The exact value when both numerator and denominator are constant.
    pub fn as_rational(&self) -> Option<Rational> {
        let n = self.num.as_constant()?;
        let d = self.den.as_constant()?;
        n.checked_div(&d).ok()
    }

    pub fn try_add(&self, rhs: &RatFn) -> Result<RatFn, ExactError> {
        self.num.check_symbols(&rhs.num)?;
        Ok(self.add_unchecked(rhs, false))
    }

    pub fn try_sub(&self, rhs: &RatFn) -> Result<RatFn, ExactError> {
        self.num.check_symbols(&rhs.num)?;
        Ok(self.add_unchecked(rhs, true))
    }

    pub fn try_mul(&self, rhs: &RatFn) -> Result<RatFn, ExactError> {
        self.num.check_symbols(&rhs.num)?;
        Ok(self.mul_unchecked(rhs))
    }

    pub fn try_div(&self, rhs: &RatFn) -> Result<RatFn, ExactError> {
        self.num.check_symbols(&rhs.num)?;
        if rhs.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        let inv = RatFn::normalized(rhs.den.clone(), rhs.num.clone());
        Ok(self.mul_unchecked(&inv))
    }

    fn add_unchecked(&self, rhs: &RatFn, subtract: bool) -> RatFn {
        if rhs.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return if subtract { rhs.negated() } else { rhs.clone() };
        }
        let (den, f1, f2) = common_denominator(&self.den, &rhs.den);
        let n1 = scaled(&self.num, f1.as_ref());
        let n2 = scaled(&rhs.num, f2.as_ref());
        RatFn::normalized(n1.add_unchecked(&n2, subtract), den)
    }

    fn mul_unchecked(&self, rhs: &RatFn) -> RatFn {
        if self.is_zero() || rhs.is_zero() {
            return RatFn::from_poly(MultiPoly::zero(self.symbols()));
        }
        // Cancel a denominator against the other numerator when it divides
        // exactly; this is what keeps products of Pochhammer ratios small.
        let (mut n1, mut d1) = (self.num.clone(), self.den.clone());
        let (mut n2, mut d2) = (rhs.num.clone(), rhs.den.clone());
        cancel_if_divides(&mut n1, &mut d2);
        cancel_if_divides(&mut n2, &mut d1);
        RatFn::normalized(n1.mul_unchecked(&n2), d1.mul_unchecked(&d2))
    }

    fn negated(&self) -> RatFn {
        RatFn {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    /// Exact value at a rational point given by symbol name.
    pub fn substitute(&self, assignment: &HashMap<String, Rational>) -> Result<Rational, ExactError> {
        let point = self
            .symbols()
            .names()
            .iter()
            .map(|n| {
                assignment
                    .get(n)
                    .cloned()
                    .ok_or_else(|| ExactError::UnassignedSymbol(n.clone()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        self.evaluate(&point)
    }

    /// Exact value at a rational point given positionally.
    pub fn evaluate(&self, point: &[Rational]) -> Result<Rational, ExactError> {
        if point.len() != self.symbols().len() {
            return Err(ExactError::SymbolMismatch);
        }
        let d = self.den.evaluate(point);
        if d.is_zero() {
            return Err(ExactError::DenominatorVanishes);
        }
        Ok(self.num.evaluate(point) / d)
    }

    /// Replaces each symbol by a rational function (possibly over another
    /// symbol set).
    pub fn compose(&self, values: &[RatFn]) -> Result<RatFn, ExactError> {
        if values.len() != self.symbols().len() || values.is_empty() {
            return Err(ExactError::SymbolMismatch);
        }
        let target = values[0].symbols();
        if values.iter().any(|v| v.symbols() != target) {
            return Err(ExactError::SymbolMismatch);
        }
        let proto = &values[0];
        let n = self.num.eval_in(values, proto);
        let d = self.den.eval_in(values, proto);
        n.try_div(&d).map_err(|_| ExactError::DenominatorVanishes)
    }
}

fn scaled(p: &MultiPoly, f: Option<&MultiPoly>) -> MultiPoly {
    match f {
        None => p.clone(),
        Some(f) => p.mul_unchecked(f),
    }
}

fn cancel_if_divides(num: &mut MultiPoly, den: &mut MultiPoly) {
    if den.as_constant().is_some() || num.is_zero() {
        return;
    }
    if num.total_degree() < den.total_degree() {
        return;
    }
    if let Some(q) = num.div_exact(den) {
        *num = q;
        *den = MultiPoly::one(num.symbols());
    }
}

/// Finds `L = d1 * f1 = d2 * f2` using monomial content and exact division
/// before falling back to `L = d1 * d2`. `None` factors mean 1.
fn common_denominator(
    d1: &MultiPoly,
    d2: &MultiPoly,
) -> (MultiPoly, Option<MultiPoly>, Option<MultiPoly>) {
    if d1 == d2 {
        return (d1.clone(), None, None);
    }
    let symbols = d1.symbols();
    let (m1, m2) = (d1.monomial_content(), d2.monomial_content());
    let (p1, p2) = (d1.div_monomial(&m1), d2.div_monomial(&m2));
    let l = m1.lcm(&m2);
    let mono = |m: &Monomial| MultiPoly::monomial(symbols, m.quotient_of(&l), Rational::one());
    if p1 == p2 {
        return (p1.mul_monomial(&l), Some(mono(&m1)), Some(mono(&m2)));
    }
    if p2.total_degree() >= p1.total_degree() {
        if let Some(q) = p2.div_exact(&p1) {
            return (p2.mul_monomial(&l), Some(mono(&m1).mul_unchecked(&q)), Some(mono(&m2)));
        }
    }
    if p1.total_degree() > p2.total_degree() {
        if let Some(q) = p1.div_exact(&p2) {
            return (p1.mul_monomial(&l), Some(mono(&m1)), Some(mono(&m2).mul_unchecked(&q)));
        }
    }
    (d1.mul_unchecked(d2), Some(d2.clone()), Some(d1.clone()))
}

impl PartialEq for RatFn {
    /// Mathematical equality; values over different symbol sets compare
    /// unequal.
    fn eq(&self, other: &Self) -> bool {
        ratfn_eq(self, other).unwrap_or(false)
    }
}

impl fmt::Display for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.den.as_constant() {
            Some(c) if c.is_one() => write!(f, "{}", self.num),
            _ => write!(f, "({})/({})", self.num, self.den),
        }
    }
}

impl fmt::Debug for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFn({self})")
    }
}

/// Field operations; mixing symbol sets is a programming error and panics.
impl ExactField for RatFn {
    fn zero(&self) -> Self {
        RatFn::from_poly(MultiPoly::zero(self.symbols()))
    }

    fn one(&self) -> Self {
        RatFn::from_poly(MultiPoly::one(self.symbols()))
    }

    fn embed_int(&self, n: i64) -> Self {
        RatFn::constant(self.symbols(), Rational::from(n))
    }

    fn embed_rational(&self, r: &Rational) -> Self {
        RatFn::constant(self.symbols(), r.clone())
    }

    fn plus(&self, rhs: &Self) -> Self {
        self.try_add(rhs).expect("symbol sets differ")
    }

    fn minus(&self, rhs: &Self) -> Self {
        self.try_sub(rhs).expect("symbol sets differ")
    }

    fn times(&self, rhs: &Self) -> Self {
        self.try_mul(rhs).expect("symbol sets differ")
    }

    fn divide(&self, rhs: &Self) -> Result<Self, ExactError> {
        self.try_div(rhs)
    }

    fn negate(&self) -> Self {
        self.negated()
    }

    fn is_zero(&self) -> bool {
        RatFn::is_zero(self)
    }
}
