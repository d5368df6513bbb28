//! Exact evaluation of truncated hypergeometric series and mechanical
//! verification of the summation identities built on them.
//!
//! - [`exact`]: rationals, polynomials, rational functions
//! - [`hyper`]: Pochhammer symbols, truncated `pFq` sums, single-sum identities
//! - [`doublesum`]: the double sum `S(m, n)` and its closed forms
//! - [`qseries`]: q-Pochhammer products and the truncated `4phi3` identity
//! - [`analytic`]: floating-point checks of the non-terminating statements
//! - [`report`] / [`registry`] / [`sweep`]: verification reports and batch runs
//! - [`quantity`]: single-point evaluation by name

pub mod exact;
pub mod hyper;
pub mod report;
pub mod doublesum;
pub mod qseries;
pub mod analytic;
pub mod registry;
pub mod sweep;
pub mod quantity;
