use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use super::field::ExactField;
use super::{ExactError, Rational};

/// Maximum number of symbols active in one computation.
pub const MAX_SYMBOLS: usize = 4;

/// Ordered list of symbol names shared by every polynomial of a computation.
#[derive(Clone)]
pub struct SymbolSet(Arc<[String]>);

impl SymbolSet {
    pub fn new(names: &[&str]) -> Result<Self, ExactError> {
        if names.len() > MAX_SYMBOLS {
            return Err(ExactError::TooManySymbols(names.len()));
        }
        for (i, n) in names.iter().enumerate() {
            if n.is_empty() || names[..i].contains(n) {
                return Err(ExactError::InvalidSymbol(n.to_string()));
            }
        }
        Ok(SymbolSet(names.iter().map(|s| s.to_string()).collect()))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.0.iter().position(|s| s == name)
    }
}

impl PartialEq for SymbolSet {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Eq for SymbolSet {}

impl fmt::Debug for SymbolSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.0.join(", "))
    }
}

/// Dense exponent vector, one slot per symbol of the owning [`SymbolSet`].
/// Ordered graded-lexicographically.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, Debug)]
pub struct Monomial(pub [u32; MAX_SYMBOLS]);

impl Monomial {
    pub fn one() -> Self {
        Monomial([0; MAX_SYMBOLS])
    }

    pub fn var(index: usize, exp: u32) -> Self {
        let mut e = [0; MAX_SYMBOLS];
        e[index] = exp;
        Monomial(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0 == [0; MAX_SYMBOLS]
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut e = self.0;
        for (x, y) in e.iter_mut().zip(other.0.iter()) {
            *x = x.checked_add(*y).expect("exponent overflow");
        }
        Monomial(e)
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(x, y)| x <= y)
    }

    /// `other / self`, assuming `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        let mut e = other.0;
        for (x, y) in e.iter_mut().zip(self.0.iter()) {
            *x -= *y;
        }
        Monomial(e)
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        let mut e = self.0;
        for (x, y) in e.iter_mut().zip(other.0.iter()) {
            *x = (*x).min(*y);
        }
        Monomial(e)
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        let mut e = self.0;
        for (x, y) in e.iter_mut().zip(other.0.iter()) {
            *x = (*x).max(*y);
        }
        Monomial(e)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PolyOp {
    Add,
    Sub,
    Mul,
}

/// Multivariate polynomial with rational coefficients.
///
/// Terms are kept in a map keyed by monomial; zero coefficients are never
/// stored, so the zero polynomial has no terms.
#[derive(Clone, PartialEq, Eq)]
pub struct MultiPoly {
    symbols: SymbolSet,
    terms: BTreeMap<Monomial, Rational>,
}

/// `p op q`, failing when the operands live over different symbol sets.
pub fn poly_arith(p: &MultiPoly, q: &MultiPoly, op: PolyOp) -> Result<MultiPoly, ExactError> {
    p.check_symbols(q)?;
    Ok(match op {
        PolyOp::Add => p.add_unchecked(q, false),
        PolyOp::Sub => p.add_unchecked(q, true),
        PolyOp::Mul => p.mul_unchecked(q),
    })
}

impl MultiPoly {
    pub fn zero(symbols: &SymbolSet) -> Self {
        MultiPoly {
            symbols: symbols.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(symbols: &SymbolSet) -> Self {
        Self::constant(symbols, Rational::one())
    }

    pub fn constant(symbols: &SymbolSet, c: Rational) -> Self {
        Self::monomial(symbols, Monomial::one(), c)
    }

    pub fn monomial(symbols: &SymbolSet, m: Monomial, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        MultiPoly {
            symbols: symbols.clone(),
            terms,
        }
    }

    pub fn var(symbols: &SymbolSet, name: &str) -> Result<Self, ExactError> {
        let i = symbols
            .index_of(name)
            .ok_or_else(|| ExactError::UnknownSymbol(name.to_string()))?;
        Ok(Self::monomial(symbols, Monomial::var(i, 1), Rational::one()))
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs, merging
    /// repeated monomials.
    pub fn from_terms(
        symbols: &SymbolSet,
        terms: impl IntoIterator<Item = (Monomial, Rational)>,
    ) -> Self {
        let mut map: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for (m, c) in terms {
            debug_assert!(m.0[symbols.len()..].iter().all(|&e| e == 0));
            *map.entry(m).or_default() += &c;
        }
        map.retain(|_, c| !c.is_zero());
        MultiPoly {
            symbols: symbols.clone(),
            terms: map,
        }
    }

    pub fn symbols(&self) -> &SymbolSet {
        &self.symbols
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in descending graded-lexicographic order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter().rev()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.leading_term().map(|(m, _)| m.degree())
    }

    /// The value if this is a constant polynomial (zero included).
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn check_symbols(&self, other: &MultiPoly) -> Result<(), ExactError> {
        if self.symbols == other.symbols {
            Ok(())
        } else {
            Err(ExactError::SymbolMismatch)
        }
    }

    pub fn try_add(&self, other: &MultiPoly) -> Result<MultiPoly, ExactError> {
        poly_arith(self, other, PolyOp::Add)
    }

    pub fn try_sub(&self, other: &MultiPoly) -> Result<MultiPoly, ExactError> {
        poly_arith(self, other, PolyOp::Sub)
    }

    pub fn try_mul(&self, other: &MultiPoly) -> Result<MultiPoly, ExactError> {
        poly_arith(self, other, PolyOp::Mul)
    }

    pub(crate) fn add_unchecked(&self, other: &MultiPoly, subtract: bool) -> MultiPoly {
        let (mut out, rhs, flip) = if self.terms.len() >= other.terms.len() {
            (self.terms.clone(), &other.terms, subtract)
        } else if subtract {
            // a - b = -(b - a)
            let mut r = other.add_unchecked(self, true);
            r.negate_in_place();
            return r;
        } else {
            (other.terms.clone(), &self.terms, false)
        };
        for (m, c) in rhs {
            match out.get_mut(m) {
                Some(v) => {
                    if flip {
                        *v -= c;
                    } else {
                        *v += c;
                    }
                    if v.is_zero() {
                        out.remove(m);
                    }
                }
                None => {
                    out.insert(*m, if flip { -c } else { c.clone() });
                }
            }
        }
        MultiPoly {
            symbols: self.symbols.clone(),
            terms: out,
        }
    }

    pub(crate) fn mul_unchecked(&self, other: &MultiPoly) -> MultiPoly {
        if self.is_zero() || other.is_zero() {
            return MultiPoly::zero(&self.symbols);
        }
        if let Some(c) = other.as_constant() {
            return self.scale(&c);
        }
        if let Some(c) = self.as_constant() {
            return other.scale(&c);
        }
        let mut acc: HashMap<Monomial, Rational> =
            HashMap::with_capacity(self.terms.len() * other.terms.len());
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let prod = c1 * c2;
                acc.entry(m1.mul(m2))
                    .and_modify(|v| *v += &prod)
                    .or_insert(prod);
            }
        }
        MultiPoly {
            symbols: self.symbols.clone(),
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero(&self.symbols);
        }
        MultiPoly {
            symbols: self.symbols.clone(),
            terms: self.terms.iter().map(|(m, v)| (*m, v * c)).collect(),
        }
    }

    pub fn neg(&self) -> MultiPoly {
        let mut r = self.clone();
        r.negate_in_place();
        r
    }

    fn negate_in_place(&mut self) {
        for v in self.terms.values_mut() {
            *v = -&*v;
        }
    }

    pub fn pow(&self, exp: u32) -> MultiPoly {
        let mut result = MultiPoly::one(&self.symbols);
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul_unchecked(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_unchecked(&base);
            }
        }
        result
    }

    pub fn mul_monomial(&self, m: &Monomial) -> MultiPoly {
        MultiPoly {
            symbols: self.symbols.clone(),
            terms: self.terms.iter().map(|(k, v)| (k.mul(m), v.clone())).collect(),
        }
    }

    /// Divides every term by `m`, which must divide each of them.
    pub(crate) fn div_monomial(&self, m: &Monomial) -> MultiPoly {
        MultiPoly {
            symbols: self.symbols.clone(),
            terms: self
                .terms
                .iter()
                .map(|(k, v)| {
                    debug_assert!(m.divides(k));
                    (m.quotient_of(k), v.clone())
                })
                .collect(),
        }
    }

    /// Largest monomial dividing every term (1 for the zero polynomial).
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.keys();
        match it.next() {
            None => Monomial::one(),
            Some(first) => it.fold(*first, |g, m| g.gcd(m)),
        }
    }

    /// Exact quotient `self / divisor`, or `None` when the division leaves a
    /// remainder.
    pub fn div_exact(&self, divisor: &MultiPoly) -> Option<MultiPoly> {
        if divisor.is_zero() || self.symbols != divisor.symbols {
            return None;
        }
        if self.is_zero() {
            return Some(self.clone());
        }
        if let Some(c) = divisor.as_constant() {
            return Some(self.scale(&c.recip().ok()?));
        }
        let (dlm, dlc) = divisor.leading_term().unwrap();
        let (dlm, dlc_inv) = (*dlm, dlc.recip().ok()?);
        if self.total_degree()? < dlm.degree() {
            return None;
        }
        let mut rem = self.terms.clone();
        let mut quot = BTreeMap::new();
        while let Some((rm, rc)) = rem.iter().next_back() {
            if !dlm.divides(rm) {
                return None;
            }
            let qm = dlm.quotient_of(rm);
            let qc = rc * &dlc_inv;
            for (m, c) in &divisor.terms {
                let key = m.mul(&qm);
                let delta = c * &qc;
                match rem.get_mut(&key) {
                    Some(v) => {
                        *v -= &delta;
                        if v.is_zero() {
                            rem.remove(&key);
                        }
                    }
                    None => {
                        rem.insert(key, -delta);
                    }
                }
            }
            quot.insert(qm, qc);
        }
        Some(MultiPoly {
            symbols: self.symbols.clone(),
            terms: quot,
        })
    }

    /// Evaluates the polynomial with each symbol replaced by a field element.
    pub fn eval_in<F: ExactField>(&self, values: &[F], proto: &F) -> F {
        assert_eq!(values.len(), self.symbols.len(), "one value per symbol");
        let mut powers: Vec<Vec<F>> = values.iter().map(|v| vec![proto.one(), v.clone()]).collect();
        let mut acc = proto.zero();
        for (m, c) in &self.terms {
            let mut t = proto.embed_rational(c);
            for (i, &e) in m.0[..values.len()].iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let p = &mut powers[i];
                while p.len() <= e as usize {
                    let next = p.last().unwrap().times(&values[i]);
                    p.push(next);
                }
                t = t.times(&p[e as usize]);
            }
            acc = acc.plus(&t);
        }
        acc
    }

    /// Exact value at a rational point.
    pub fn evaluate(&self, point: &[Rational]) -> Rational {
        self.eval_in(point, &Rational::zero())
    }
}

impl fmt::Display for MultiPoly {
    /// Canonical sum-of-monomials in descending graded-lex order, e.g.
    /// `a^2 - 1/2*a*b + 3`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            let mut factors: Vec<String> = Vec::new();
            for (name, &e) in self.symbols.names().iter().zip(m.0.iter()) {
                match e {
                    0 => {}
                    1 => factors.push(name.clone()),
                    _ => factors.push(format!("{name}^{e}")),
                }
            }
            if factors.is_empty() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{abs}*{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiPoly({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn ab() -> SymbolSet {
        SymbolSet::new(&["a", "b"]).unwrap()
    }

    #[test]
    fn add_sub_mul_examples() {
        let s = ab();
        let a = MultiPoly::var(&s, "a").unwrap();
        let b = MultiPoly::var(&s, "b").unwrap();
        let sum = poly_arith(&a.try_add(&b).unwrap(), &a.try_sub(&b).unwrap(), PolyOp::Add).unwrap();
        assert_eq!(sum, a.scale(&Rational::from(2)));
        assert_eq!(sum.to_string(), "2*a");

        let qs = SymbolSet::new(&["q"]).unwrap();
        let q = MultiPoly::var(&qs, "q").unwrap();
        let one = MultiPoly::one(&qs);
        let prod = one.try_sub(&q).unwrap().try_mul(&one.try_add(&q).unwrap()).unwrap();
        assert_eq!(prod.to_string(), "-q^2 + 1");

        let p = a.try_mul(&b).unwrap().try_add(&a).unwrap();
        let z = p.try_sub(&p).unwrap();
        assert!(z.is_zero());
        assert_eq!(z.num_terms(), 0);
    }

    #[test]
    fn symbol_mismatch() {
        let a = MultiPoly::var(&ab(), "a").unwrap();
        let other = SymbolSet::new(&["a", "c"]).unwrap();
        let c = MultiPoly::var(&other, "a").unwrap();
        assert_eq!(a.try_add(&c), Err(ExactError::SymbolMismatch));
        assert_eq!(
            poly_arith(&a, &c, PolyOp::Mul),
            Err(ExactError::SymbolMismatch)
        );
    }

    #[test]
    fn symbol_set_validation() {
        assert!(SymbolSet::new(&["a", "b", "c", "q", "A"]).is_err());
        assert!(SymbolSet::new(&["a", "a"]).is_err());
        assert!(SymbolSet::new(&[]).is_ok());
    }

    #[test]
    fn canonical_printing_is_grlex() {
        let s = ab();
        let a = MultiPoly::var(&s, "a").unwrap();
        let b = MultiPoly::var(&s, "b").unwrap();
        let p = a
            .pow(2)
            .try_sub(&a.try_mul(&b).unwrap().scale(&rat(1, 2).unwrap()))
            .unwrap()
            .try_add(&b.pow(3))
            .unwrap()
            .try_add(&MultiPoly::constant(&s, Rational::from(3)))
            .unwrap();
        assert_eq!(p.to_string(), "b^3 + a^2 - 1/2*a*b + 3");
    }

    #[test]
    fn exact_division() {
        let s = ab();
        let a = MultiPoly::var(&s, "a").unwrap();
        let b = MultiPoly::var(&s, "b").unwrap();
        let f = a.try_add(&b).unwrap().try_add(&MultiPoly::one(&s)).unwrap();
        let g = a.try_sub(&b.scale(&Rational::from(3))).unwrap();
        let fg = f.try_mul(&g).unwrap();
        assert_eq!(fg.div_exact(&f).unwrap(), g);
        assert_eq!(fg.div_exact(&g).unwrap(), f);
        assert!(fg.try_add(&MultiPoly::one(&s)).unwrap().div_exact(&f).is_none());
        assert!(a.div_exact(&b).is_none());
    }

    #[test]
    fn evaluation() {
        let s = ab();
        let a = MultiPoly::var(&s, "a").unwrap();
        let b = MultiPoly::var(&s, "b").unwrap();
        let p = a.try_mul(&b).unwrap().try_add(&a.pow(2)).unwrap();
        let v = p.evaluate(&[Rational::from(3), rat(1, 3).unwrap()]);
        assert_eq!(v, Rational::from(10));
    }
}
