//! Acceptance run: one line per criterion, non-zero exit if any fails.

use std::process::ExitCode;
use std::time::Instant;

use hypersum::analytic::{
    eq2_consistency, gamma_transform_checks, verify_watson, GammaSample, NumericTolerance, WatsonParams,
};
use hypersum::doublesum::{
    binomial_matrix_self_inverse, binomial_transform_check, ratio_check, verify_cvstep, verify_prop2,
    DoubleSumPoint,
};
use hypersum::exact::Rational;
use hypersum::hyper::{eq3_lhs, eq3_rhs, verify_bailey, verify_eq3_symbolic, verify_eq5_chain};
use hypersum::qseries::{q_limit_outcome, verify_eq6};
use hypersum::registry::Check;
use hypersum::report::{emit_report, IdentityId, ReportFormat, VerificationReport};
use hypersum::sweep::{run_checks, Grid, SweepOptions};
use indexmap::IndexMap;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

const SEED: u64 = 0x05ee_d2f1;

const EQ3_SYMBOLIC_M: std::ops::RangeInclusive<usize> = 1..=20;
const EQ3_POINTS: usize = 200;
const EQ3_POINT_MAX_M: usize = 15;
const BAILEY_M: std::ops::RangeInclusive<usize> = 1..=8;
const CHAIN_M: std::ops::RangeInclusive<usize> = 1..=15;
const DOUBLE_SUM_MAX: usize = 25;
const RATIO_MAX_SUM: usize = 25;
const MATRIX_MAX_SIZE: usize = 64;
const TRANSFORM_MAX: usize = 12;
const CV_MAX: usize = 20;
const Q_SERIES_N: std::ops::RangeInclusive<usize> = 1..=6;
const Q_LIMIT_H: f64 = 1e-2;
const Q_LIMIT_RATIO_BAND: (f64, f64) = (0.3, 0.7);
const WATSON_TOL: f64 = 1e-10;
const EQ2_TOL: f64 = 1e-10;
const GAMMA_REL_TOL: f64 = 1e-10;
const GAMMA_SAMPLES: usize = 50;

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    ok: bool,
    detail: String,
}

impl Outcome {
    fn from_reports(reports: &[VerificationReport]) -> Outcome {
        let bad: Vec<String> = reports
            .iter()
            .filter(|r| !r.passed())
            .map(|r| {
                let params: Vec<String> = r.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
                format!("{} [{}] {}", r.identity_id, params.join(","), r.status.as_str())
            })
            .collect();
        Outcome {
            ok: bad.is_empty(),
            detail: if bad.is_empty() {
                format!("{} checks", reports.len())
            } else {
                format!("{} of {} not passing: {}", bad.len(), reports.len(), bad.join("; "))
            },
        }
    }
}

fn truncated_symbolic() -> Outcome {
    let reports: Vec<_> = EQ3_SYMBOLIC_M.into_par_iter().map(verify_eq3_symbolic).collect();
    Outcome::from_reports(&reports)
}

fn rational_in(rng: &mut ChaCha8Rng) -> Rational {
    Rational::new(rng.gen_range(-40..=40), rng.gen_range(1..=12)).unwrap()
}

/// `(a+b+1)/2` must avoid `0, -1, ..., 1-m` so the lower parameter never
/// vanishes inside the first `m + 1` terms.
fn admissible(a: &Rational, b: &Rational, m: usize) -> bool {
    let lower = (a + b + Rational::one()) * Rational::new(1, 2).unwrap();
    !(lower.is_nonpositive_integer() && lower > Rational::from(-(m as i64)))
}

fn truncated_random_points() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut points = Vec::with_capacity(EQ3_POINTS);
    while points.len() < EQ3_POINTS {
        let (a, b) = (rational_in(&mut rng), rational_in(&mut rng));
        let m = rng.gen_range(1..=EQ3_POINT_MAX_M);
        if admissible(&a, &b, m) {
            points.push((a, b, m));
        }
    }
    let mismatches: Vec<String> = points
        .par_iter()
        .filter_map(|(a, b, m)| match (eq3_lhs(a, b, *m), eq3_rhs(a, b, *m)) {
            (Ok(l), Ok(r)) if l == r => None,
            (l, r) => Some(format!("a={a} b={b} m={m}: {l:?} vs {r:?}")),
        })
        .collect();
    Outcome {
        ok: mismatches.is_empty(),
        detail: format!("{} points, {} mismatches {}", points.len(), mismatches.len(), mismatches.join("; ")),
    }
}

fn bailey() -> Outcome {
    let reports: Vec<_> = BAILEY_M.into_par_iter().map(verify_bailey).collect();
    Outcome::from_reports(&reports)
}

fn chain() -> Outcome {
    let reports: Vec<_> = CHAIN_M.into_par_iter().map(verify_eq5_chain).collect();
    Outcome::from_reports(&reports)
}

fn double_sum() -> Outcome {
    let points: Vec<_> = (0..=DOUBLE_SUM_MAX)
        .flat_map(|m| (0..=DOUBLE_SUM_MAX).map(move |n| DoubleSumPoint::new(m, n)))
        .collect();
    let reports: Vec<_> = points.into_par_iter().map(verify_prop2).collect();
    Outcome::from_reports(&reports)
}

fn ratio() -> Outcome {
    let points: Vec<_> = (1..=RATIO_MAX_SUM)
        .flat_map(|m| (0..=RATIO_MAX_SUM - m).map(move |n| (m, n)))
        .collect();
    let reports: Vec<_> = points.into_par_iter().map(|(m, n)| ratio_check(m, n)).collect();
    Outcome::from_reports(&reports)
}

fn proof_internals() -> Outcome {
    let mut reports: Vec<_> = (1..=MATRIX_MAX_SIZE)
        .into_par_iter()
        .map(binomial_matrix_self_inverse)
        .collect();
    for n in 0..=TRANSFORM_MAX {
        for k in 0..=TRANSFORM_MAX {
            reports.push(binomial_transform_check(n, k));
        }
    }
    for k in 0..=CV_MAX {
        for j in 0..=CV_MAX {
            reports.push(verify_cvstep(k, j));
        }
    }
    Outcome::from_reports(&reports)
}

fn q_series() -> Outcome {
    let reports: Vec<_> = Q_SERIES_N.into_par_iter().map(verify_eq6).collect();
    Outcome::from_reports(&reports)
}

fn q_limit_halving() -> Outcome {
    let values = [Rational::new(1, 2).unwrap(), Rational::one()];
    let mut ok = true;
    let mut ratios = Vec::new();
    for a in &values {
        for b in &values {
            for m in 1..=3 {
                match q_limit_outcome(a, b, m, Q_LIMIT_H) {
                    Ok(o) => {
                        ok &= o.ratio >= Q_LIMIT_RATIO_BAND.0 && o.ratio <= Q_LIMIT_RATIO_BAND.1;
                        ratios.push(format!("{:.4}", o.ratio));
                    }
                    Err(e) => {
                        ok = false;
                        ratios.push(format!("error {e}"));
                    }
                }
            }
        }
    }
    Outcome {
        ok,
        detail: format!(
            "deviation ratios at h={Q_LIMIT_H} -> h/2, required in [{}, {}]: {}",
            Q_LIMIT_RATIO_BAND.0,
            Q_LIMIT_RATIO_BAND.1,
            ratios.join(" ")
        ),
    }
}

fn watson_grid() -> Outcome {
    let tol = NumericTolerance::with_tol(WATSON_TOL);
    let values = [0.1, 0.3, 0.7];
    let mut reports = Vec::new();
    for a in values {
        for b in values {
            for c in [1.0, 1.5, 2.5] {
                reports.push(verify_watson(&WatsonParams { a, b, c }, &tol));
            }
        }
    }
    Outcome::from_reports(&reports)
}

fn limit_decomposition() -> Outcome {
    let tol = NumericTolerance::with_tol(EQ2_TOL);
    let values = [0.1, 0.3, 0.5, 0.7];
    let mut reports = Vec::new();
    for a in values {
        for b in values {
            for m in [1, 2, 3, 5] {
                reports.push(eq2_consistency(a, b, m, &tol));
            }
        }
    }
    Outcome::from_reports(&reports)
}

fn away_from_integers(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    loop {
        let x: f64 = rng.gen_range(lo..hi);
        if (x - x.round()).abs() > 0.05 {
            return x;
        }
    }
}

fn gamma_transforms() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 0x9a);
    let samples: Vec<GammaSample> = (0..GAMMA_SAMPLES)
        .map(|_| GammaSample {
            a: away_from_integers(&mut rng, -4.0, 6.0),
            t: rng.gen_range(-0.45..0.45),
            m: rng.gen_range(0..=8),
        })
        .collect();
    let tol = NumericTolerance {
        rel_tol: GAMMA_REL_TOL,
        ..NumericTolerance::default()
    };
    let report = gamma_transform_checks(&samples, &tol);
    Outcome {
        ok: report.passed(),
        detail: format!("{} samples, worst relative error {}", samples.len(), report.lhs),
    }
}

fn determinism() -> Outcome {
    let grids: [(IdentityId, &str); 3] = [
        (IdentityId::Prop2, "m=0..12,n=0..12"),
        (IdentityId::Eq3, "a=1/2|1|-7/3,b=1/3|5,m=1..6"),
        (IdentityId::Eq1, "a=0.1|0.3,b=0.7,c=1|2.5"),
    ];
    let mut ok = true;
    let mut total = 0;
    for (id, spec) in grids {
        let grid: Grid = spec.parse().unwrap();
        let checks: Vec<Check> = grid.checks(id, &IndexMap::new()).unwrap();
        total += checks.len();
        let emit = |jobs| {
            let reports = run_checks(&checks, SweepOptions { jobs, timings: false });
            (emit_report(&reports, ReportFormat::Json), emit_report(&reports, ReportFormat::Csv))
        };
        let serial = emit(1);
        ok &= serial == emit(8) && serial == emit(1);
    }
    Outcome {
        ok,
        detail: format!("{total} checks compared at 1 and 8 threads"),
    }
}

fn main() -> ExitCode {
    let criteria: [Criterion; 13] = [
        ("truncated 3F2 = Pochhammer product, symbolic in a,b, m=1..20", truncated_symbolic),
        ("truncated 3F2 = Pochhammer product at 200 random rational points", truncated_random_points),
        ("3F2 -> 4F3 transformation, symbolic in a,b,c, m=1..8", bailey),
        ("c -> -m chain and halving substitution, m=1..15", chain),
        ("double sum closed forms, 0 <= m,n <= 25", double_sum),
        ("double sum ratio recurrence, 1 <= m, m+n <= 25", ratio),
        ("binomial matrix, binomial transform, Chu-Vandermonde step", proof_internals),
        ("q-analogue as rational functions in A,B,q, N=1..6", q_series),
        ("q -> 1 deviation halves when h halves", q_limit_halving),
        ("Watson sum against Gamma ratio, 27 points, 1e-10", watson_grid),
        ("cos-ratio limit = truncated value + sin-ratio tail, 1e-10", limit_decomposition),
        ("Gamma transformations on 50 random samples, 1e-10 relative", gamma_transforms),
        ("sweep output independent of thread count", determinism),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let status = if outcome.ok { "PASS" } else { "FAIL" };
        failed += usize::from(!outcome.ok);
        println!(
            "{status} [{:>2}] {name} ({:.2?}): {}",
            i + 1,
            start.elapsed(),
            outcome.detail
        );
    }
    println!("{}/{} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
