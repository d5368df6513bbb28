//! The terminating double sum
//!
//! ```text
//! S(m,n) = sum_{i=0}^{m} (-m)_i (n+1)_i / (i! (m+n+2)_i)
//!          * sum_{j=0}^{n} (-n)_j (1/2-n)_j / (j! (1/2)_j) * 1/(i+j+1/2)
//! ```
//!
//! its closed forms, and every intermediate quantity of the evaluation:
//! the inner sums `A(n, i)`, their binomial transforms `B(n, k)`, the
//! alternating binomial sum handled by Chu-Vandermonde, and the self-inverse
//! matrix `M_ij = C(i,j) (-1)^j` linking `A` and `B`.
//!
//! The direct double sum is the ground truth; closed forms are only ever
//! reported against it.

use crate::exact::Rational;
use crate::hyper::{factorial, pochhammer};
use crate::report::{IdentityId, VerificationReport};

/// Grid point `(m, n)` of the double sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DoubleSumPoint {
    pub m: usize,
    pub n: usize,
}

impl DoubleSumPoint {
    pub fn new(m: usize, n: usize) -> Self {
        DoubleSumPoint { m, n }
    }
}

fn q(n: i64) -> Rational {
    Rational::from(n)
}

fn half() -> Rational {
    Rational::new(1, 2).unwrap()
}

fn poch(t: &Rational, k: usize) -> Rational {
    pochhammer(t, k)
}

fn fact(k: usize) -> Rational {
    factorial(&Rational::one(), k)
}

fn sign(k: usize) -> Rational {
    if k.is_multiple_of(2) {
        Rational::one()
    } else {
        -Rational::one()
    }
}

/// `C(n, k)` as an exact rational.
pub fn binomial(n: usize, k: usize) -> Rational {
    if k > n {
        return Rational::zero();
    }
    let k = k.min(n - k);
    let mut acc = Rational::one();
    for i in 0..k {
        acc = acc * q((n - i) as i64) / q(i as i64 + 1);
    }
    acc
}

/// `1/(i + j + 1/2)`, evaluated directly.
fn shifted_reciprocal(i: usize, j: usize) -> Rational {
    (q((i + j) as i64) + half()).recip().expect("i + j + 1/2 > 0")
}

/// Outer coefficient `(-m)_i (n+1)_i / (i! (m+n+2)_i)`.
fn outer_coeff(m: usize, n: usize, i: usize) -> Rational {
    poch(&q(-(m as i64)), i) * poch(&q(n as i64 + 1), i) / (fact(i) * poch(&q((m + n + 2) as i64), i))
}

/// Inner coefficient `(-n)_j (1/2-n)_j / (j! (1/2)_j)`.
fn inner_coeff(n: usize, j: usize) -> Rational {
    poch(&q(-(n as i64)), j) * poch(&(half() - q(n as i64)), j) / (fact(j) * poch(&half(), j))
}

/// The double sum evaluated term by term.
pub fn s_direct(p: DoubleSumPoint) -> Rational {
    let inner: Vec<Rational> = (0..=p.n).map(|j| inner_coeff(p.n, j)).collect();
    (0..=p.m)
        .map(|i| {
            let a: Rational = inner
                .iter()
                .enumerate()
                .map(|(j, c)| c * shifted_reciprocal(i, j))
                .sum();
            outer_coeff(p.m, p.n, i) * a
        })
        .sum()
}

/// `2^(2m+2n) m! (m+n)! (m+n+1)! (1/2)_n / (n! (n+2m+1)! (1/2)_(m+n+1))`.
pub fn s_closed(p: DoubleSumPoint) -> Rational {
    let DoubleSumPoint { m, n } = p;
    let pow4 = q(4).pow((m + n) as i32).unwrap();
    pow4 * fact(m) * fact(m + n) * fact(m + n + 1) * poch(&half(), n)
        / (fact(n) * fact(n + 2 * m + 1) * poch(&half(), m + n + 1))
}

/// `2^(2m+2n) m! (n+1)_m / ((n+m+2)_m (n+1/2)_(m+1))`.
pub fn s_closed_alt(p: DoubleSumPoint) -> Rational {
    let DoubleSumPoint { m, n } = p;
    let pow4 = q(4).pow((m + n) as i32).unwrap();
    pow4 * fact(m) * poch(&q(n as i64 + 1), m)
        / (poch(&q((n + m + 2) as i64), m) * poch(&(q(n as i64) + half()), m + 1))
}

/// Inner sum `A(n, i) = sum_j (-n)_j (1/2-n)_j / (j! (1/2)_j (i+j+1/2))`.
pub fn a_inner(n: usize, i: usize) -> Rational {
    (0..=n).map(|j| inner_coeff(n, j) * shifted_reciprocal(i, j)).sum()
}

/// `B(n, k) = k! (k+n+1)_n / (1/2)_(k+n+1)`.
pub fn b_inner(n: usize, k: usize) -> Rational {
    fact(k) * poch(&q((k + n + 1) as i64), n) / poch(&half(), k + n + 1)
}

/// Both sides of `sum_{i=0}^{k} C(k,i) (-1)^i / (i+j+1/2) = k! / (j+1/2)_(k+1)`.
pub fn chu_vandermonde_step(k: usize, j: usize) -> (Rational, Rational) {
    let lhs = (0..=k)
        .map(|i| binomial(k, i) * sign(i) * shifted_reciprocal(i, j))
        .sum();
    let rhs = fact(k) / poch(&(q(j as i64) + half()), k + 1);
    (lhs, rhs)
}

pub fn verify_cvstep(k: usize, j: usize) -> VerificationReport {
    let (lhs, rhs) = chu_vandermonde_step(k, j);
    VerificationReport::new(IdentityId::CvStep)
        .param("k", k)
        .param("j", j)
        .compared(&lhs, &rhs, lhs == rhs)
}

/// Lower-triangular `M_ij = C(i,j) (-1)^j`, `0 <= i, j < size`.
pub fn binomial_matrix(size: usize) -> Vec<Vec<Rational>> {
    (0..size)
        .map(|i| (0..size).map(|j| binomial(i, j) * sign(j)).collect())
        .collect()
}

/// Checks `M * M = I` by exact triangular multiplication.
pub fn binomial_matrix_self_inverse(size: usize) -> VerificationReport {
    let m = binomial_matrix(size);
    let mut mismatches = 0usize;
    let mut first_bad = None;
    for i in 0..size {
        for j in 0..=i {
            // Entries above the diagonal are zero in both factors.
            let v: Rational = (j..=i).map(|l| &m[i][l] * &m[l][j]).sum();
            let expected = if i == j { Rational::one() } else { Rational::zero() };
            if v != expected {
                mismatches += 1;
                first_bad.get_or_insert((i, j, v));
            }
        }
    }
    let report = VerificationReport::new(IdentityId::Minv).param("size", size);
    match first_bad {
        None => report.compared("M*M", "I", true),
        Some((i, j, v)) => report
            .compared(format!("(M*M)[{i}][{j}] = {v}"), "I", false)
            .with_detail(format!("{mismatches} entries differ from the identity")),
    }
}

/// Checks `B(n,k) = sum_{i<=k} M_ki A(n,i)` and the inverse relation
/// `A(n,k) = sum_{i<=k} C(k,i) (-1)^i B(n,i)`.
pub fn binomial_transform_check(n: usize, k: usize) -> VerificationReport {
    let a: Vec<Rational> = (0..=k).map(|i| a_inner(n, i)).collect();
    let b: Vec<Rational> = (0..=k).map(|i| b_inner(n, i)).collect();
    let forward: Rational = (0..=k).map(|i| binomial(k, i) * sign(i) * &a[i]).sum();
    let inverse: Rational = (0..=k).map(|i| binomial(k, i) * sign(i) * &b[i]).sum();
    let fwd_ok = forward == b[k];
    let inv_ok = inverse == a[k];
    let mut failed = Vec::new();
    if !fwd_ok {
        failed.push("forward");
    }
    if !inv_ok {
        failed.push("inverse");
    }
    VerificationReport::new(IdentityId::BinomTransform)
        .param("n", n)
        .param("k", k)
        .compared(
            format!("{forward}; {inverse}"),
            format!("{}; {}", b[k], a[k]),
            fwd_ok && inv_ok,
        )
        .with_detail(format!("mismatch: {}", failed.join(",")))
}

/// Checks `S(m,n) / S(m-1,n+1) = 2m(n+1) / ((2n+1)(n+2m+1))` with both
/// values from the direct sum.
pub fn ratio_check(m: usize, n: usize) -> VerificationReport {
    let report = VerificationReport::new(IdentityId::Ratio)
        .param("m", m)
        .param("n", n);
    if m == 0 {
        return report.errored("InvalidParams(m >= 1 required)");
    }
    let num = s_direct(DoubleSumPoint::new(m, n));
    let den = s_direct(DoubleSumPoint::new(m - 1, n + 1));
    let lhs = num / den;
    let (mi, ni) = (m as i64, n as i64);
    let rhs = q(2 * mi * (ni + 1)) / q((2 * ni + 1) * (ni + 2 * mi + 1));
    report.compared(&lhs, &rhs, lhs == rhs)
}

/// Checks `S_direct = S_closed = S_closed_alt` exactly.
pub fn verify_prop2(p: DoubleSumPoint) -> VerificationReport {
    let direct = s_direct(p);
    let closed = s_closed(p);
    let alt = s_closed_alt(p);
    let mut failed = Vec::new();
    if direct != closed {
        failed.push("closed");
    }
    if direct != alt {
        failed.push("closed_alt");
    }
    let rhs = if closed == alt {
        closed.to_string()
    } else {
        format!("{closed}; {alt}")
    };
    VerificationReport::new(IdentityId::Prop2)
        .param("m", p.m)
        .param("n", p.n)
        .compared(&direct, rhs, failed.is_empty())
        .with_detail(format!("mismatch: {}", failed.join(",")))
}
