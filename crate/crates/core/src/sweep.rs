//! Parameter grids and ordered parallel execution.
//!
//! A grid spec is a comma-separated list of axes `name=values`, where values
//! are a single value, an inclusive integer range `lo..hi`, or alternatives
//! joined by `|` (each of which may itself be a range):
//!
//! ```text
//! m=0..25,n=0..25
//! a=1/2|1,b=1/2|1,m=1..3
//! ```
//!
//! Points are enumerated with the first axis varying slowest, and reports
//! come back in that order whatever the thread count.

use std::str::FromStr;

use indexmap::IndexMap;
use rayon::prelude::*;

use crate::registry::{Check, ParamError};
use crate::report::{IdentityId, VerificationReport};

/// Largest number of points a single grid may expand to.
pub const MAX_POINTS: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Axis {
    pub name: String,
    pub values: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Grid {
    pub axes: Vec<Axis>,
}

/// Expands `lo..hi`, `v1|v2|...` or a single value.
pub fn axis_values(spec: &str) -> Result<Vec<String>, ParamError> {
    let mut out = Vec::new();
    for alt in spec.split('|') {
        let alt = alt.trim();
        if alt.is_empty() {
            return Err(ParamError::Grid(format!("empty value in '{spec}'")));
        }
        match alt.split_once("..") {
            Some((lo, hi)) => {
                let parse = |s: &str| {
                    s.trim()
                        .parse::<i64>()
                        .map_err(|_| ParamError::Grid(format!("range bounds must be integers: '{alt}'")))
                };
                let (lo, hi) = (parse(lo)?, parse(hi)?);
                if lo > hi {
                    return Err(ParamError::Grid(format!("empty range '{alt}'")));
                }
                if (hi - lo) as u64 >= MAX_POINTS as u64 {
                    return Err(ParamError::Grid(format!("range '{alt}' too large")));
                }
                out.extend((lo..=hi).map(|v| v.to_string()));
            }
            None => out.push(alt.to_string()),
        }
    }
    Ok(out)
}

impl FromStr for Grid {
    type Err = ParamError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut grid = Grid::default();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (name, values) = part
                .split_once('=')
                .ok_or_else(|| ParamError::Grid(format!("expected name=values, got '{part}'")))?;
            grid.push(name.trim(), axis_values(values)?)?;
        }
        if grid.axes.is_empty() {
            return Err(ParamError::Grid("no axes".into()));
        }
        Ok(grid)
    }
}

impl Grid {
    pub fn push(&mut self, name: &str, values: Vec<String>) -> Result<(), ParamError> {
        if name.is_empty() {
            return Err(ParamError::Grid("empty axis name".into()));
        }
        if self.axes.iter().any(|a| a.name == name) {
            return Err(ParamError::Grid(format!("axis '{name}' given twice")));
        }
        self.axes.push(Axis {
            name: name.to_string(),
            values,
        });
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.axes
            .iter()
            .fold(1usize, |n, a| n.saturating_mul(a.values.len()))
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// All points, first axis slowest.
    pub fn points(&self) -> Result<Vec<IndexMap<String, String>>, ParamError> {
        if self.len() > MAX_POINTS {
            return Err(ParamError::Grid(format!("more than {MAX_POINTS} points")));
        }
        let mut points = vec![IndexMap::new()];
        for axis in &self.axes {
            points = points
                .into_iter()
                .flat_map(|p| {
                    axis.values.iter().map(move |v| {
                        let mut q = p.clone();
                        q.insert(axis.name.clone(), v.clone());
                        q
                    })
                })
                .collect();
        }
        Ok(points)
    }

    /// One check per point; `fixed` values apply to every point and may not
    /// repeat an axis.
    pub fn checks(&self, id: IdentityId, fixed: &IndexMap<String, String>) -> Result<Vec<Check>, ParamError> {
        if let Some(name) = fixed.keys().find(|k| self.axes.iter().any(|a| &&a.name == k)) {
            return Err(ParamError::Grid(format!("'{name}' is both fixed and swept")));
        }
        self.points()?
            .into_iter()
            .map(|mut point| {
                point.extend(fixed.iter().map(|(k, v)| (k.clone(), v.clone())));
                Check::from_params(id, &point)
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SweepOptions {
    /// Worker threads; 0 lets the pool pick.
    pub jobs: usize,
    /// Record wall-clock time per check.
    pub timings: bool,
}

/// Runs every check on a pool of `opts.jobs` threads; reports keep the
/// order of `checks`.
pub fn run_checks(checks: &[Check], opts: SweepOptions) -> Vec<VerificationReport> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.jobs)
        .build()
        .expect("thread pool");
    pool.install(|| {
        checks
            .par_iter()
            .map(|c| c.run_timed(opts.timings))
            .collect()
    })
}

/// Expands `grid`, builds the checks and runs them.
pub fn sweep(
    id: IdentityId,
    grid: &Grid,
    fixed: &IndexMap<String, String>,
    opts: SweepOptions,
) -> Result<Vec<VerificationReport>, ParamError> {
    Ok(run_checks(&grid.checks(id, fixed)?, opts))
}
