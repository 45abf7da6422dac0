//! Wall-clock timings for tensor construction, exact Jacobian rank and
//! orbit recovery.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;
use std::time::Instant;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::groups::{self, GroupTable};
use crate::recovery::{random_generic_vector, recover_orbit, RecoveryInput, RecoveryOptions};
use crate::representations::regular;
use crate::scalar::{Rational, ScalarKind};
use crate::tensors::invariant_tensor;
use crate::transcendence::{jacobian_rank_at, TABLE1};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Tensors,
    Rank,
    Recovery,
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tensors" => Ok(Suite::Tensors),
            "rank" => Ok(Suite::Rank),
            "recovery" => Ok(Suite::Recovery),
            _ => Err(Error::Parse(format!("unknown bench suite `{s}`"))),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::Tensors => "tensors",
            Suite::Rank => "rank",
            Suite::Recovery => "recovery",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRecord {
    pub case: String,
    pub group_order: usize,
    pub dim: usize,
    pub wall_ms: f64,
    pub scalar: ScalarKind,
}

/// Median wall time in milliseconds over at least three runs after one
/// discarded warm-up.
pub fn time_median(reps: usize, mut f: impl FnMut()) -> f64 {
    f();
    let mut times: Vec<f64> = (0..reps.max(MIN_REPS))
        .map(|_| {
            let start = Instant::now();
            f();
            (start.elapsed().as_secs_f64() * 1e3).max(1e-6)
        })
        .collect();
    times.sort_by(f64::total_cmp);
    let mid = times.len() / 2;
    if times.len() % 2 == 1 {
        times[mid]
    } else {
        0.5 * (times[mid - 1] + times[mid])
    }
}

const MIN_REPS: usize = 3;

fn tensor_groups() -> Vec<GroupTable> {
    vec![
        groups::dihedral(3).expect("D3"),
        groups::dihedral(4).expect("D4"),
        groups::dihedral(6).expect("D6"),
        groups::symmetric(4).expect("S4"),
    ]
}

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

/// Runs one suite sequentially; records come back sorted by group order.
pub fn run_bench(suite: Suite, reps: usize) -> Result<Vec<BenchRecord>> {
    let mut records = Vec::new();
    match suite {
        Suite::Tensors => {
            for g in tensor_groups() {
                let name = g.name().to_string();
                let rep = regular::<Rational>(Arc::new(g))?;
                let x = random_generic_vector::<Rational>(rep.dim(), 1, 50);
                let wall_ms = time_median(reps, || {
                    invariant_tensor(&rep, &x, 3).expect("degree-3 tensor");
                });
                records.push(BenchRecord {
                    case: format!("T3 regular:{name}"),
                    group_order: rep.order(),
                    dim: rep.dim(),
                    wall_ms,
                    scalar: ScalarKind::Rational,
                });
            }
        }
        Suite::Rank => {
            for &(n, d, _) in &TABLE1 {
                let wall_ms = time_median(reps, || {
                    jacobian_rank_at(n, d, 3, 1, 3);
                });
                records.push(BenchRecord {
                    case: format!("jacobian rank S{n} on {n}x{d}"),
                    group_order: factorial(n),
                    dim: n * d,
                    wall_ms,
                    scalar: ScalarKind::Rational,
                });
            }
        }
        Suite::Recovery => {
            let rep = regular::<Rational>(Arc::new(groups::symmetric(4)?))?;
            let x = random_generic_vector::<Rational>(rep.dim(), 1, 50);
            let t2 = invariant_tensor(&rep, &x, 2)?;
            let t3 = invariant_tensor(&rep, &x, 3)?;
            let input = RecoveryInput {
                rep: &rep,
                t2: &t2,
                t3: &t3,
            };
            recover_orbit(&input, &RecoveryOptions::with_seed(1))?;
            let wall_ms = time_median(reps, || {
                recover_orbit(&input, &RecoveryOptions::with_seed(1)).expect("recovery succeeded above");
            });
            records.push(BenchRecord {
                case: "recover regular:S4".into(),
                group_order: rep.order(),
                dim: rep.dim(),
                wall_ms,
                scalar: ScalarKind::Rational,
            });
        }
    }
    records.sort_by_key(|r| r.group_order);
    Ok(records)
}

/// Least-squares slope of `log(wall_ms)` against `log(dim)`.
pub fn log_log_slope(records: &[BenchRecord]) -> Option<f64> {
    if records.len() < 2 {
        return None;
    }
    let pts: Vec<(f64, f64)> = records
        .iter()
        .map(|r| ((r.dim as f64).ln(), r.wall_ms.ln()))
        .collect();
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    Some(sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn warm_up_and_minimum_reps() {
        let mut calls = 0;
        time_median(1, || calls += 1);
        assert_eq!(calls, 4);
        calls = 0;
        time_median(4, || calls += 1);
        assert_eq!(calls, 5);
    }

    #[test]
    fn slope_of_power_law() {
        let recs: Vec<BenchRecord> = [4usize, 8, 16]
            .iter()
            .map(|&d| BenchRecord {
                case: String::new(),
                group_order: d,
                dim: d,
                wall_ms: (d as f64).powi(3),
                scalar: ScalarKind::Rational,
            })
            .collect();
        assert!((log_log_slope(&recs).unwrap() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn tensor_suite_shape() {
        let recs = run_bench(Suite::Tensors, 1).unwrap();
        assert_eq!(recs.len(), 4);
        assert!(recs.windows(2).all(|w| w[0].group_order <= w[1].group_order));
        assert!(recs.iter().all(|r| r.wall_ms > 0.0));
        assert_eq!("rank".parse::<Suite>().unwrap(), Suite::Rank);
    }
}
