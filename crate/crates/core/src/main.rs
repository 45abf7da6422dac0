use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::{json, Map, Value};

use orbitkit::bench::{log_log_slope, run_bench, Suite};
use orbitkit::error::Error;
use orbitkit::linalg::Vector;
use orbitkit::multisym::{enumerate_power_sums, power_sum_count};
use orbitkit::recovery::{random_generic_vector, recover_orbit, same_multiset, RecoveryInput, RecoveryOptions};
use orbitkit::representations::{RepDescriptor, Representation};
use orbitkit::scalar::{Rational, Scalar, DEFAULT_RANK_TOL, DEFAULT_TOL};
use orbitkit::separation::dihedral_cmf_counterexample;
use orbitkit::tensors::{invariant_tensor, moment_tensor};
use orbitkit::transcendence::{conjecture_scan, reproduce_table1_with, DEFAULT_SAMPLES};

#[derive(Parser, Debug)]
#[command(name = "orbitkit", version, about = "Invariant tensors, orbit recovery and transcendence checks")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = OutFormat::Json)]
    out: OutFormat,
    /// Comparison tolerance on the f64 path.
    #[arg(long, global = true, default_value_t = DEFAULT_TOL)]
    tolerance: f64,
    /// Relative pivot threshold on the f64 path.
    #[arg(long, global = true, default_value_t = DEFAULT_RANK_TOL)]
    rank_tol: f64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum OutFormat {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ScalarArg {
    Exact,
    F64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum TensorKind {
    Invariant,
    Moment,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sample x, form T2 and T3, recover the orbit and compare.
    Recover {
        #[arg(long, value_parser = parse_rep)]
        rep: RepDescriptor,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Defaults to exact, or f64 for complex representations.
        #[arg(long, value_enum)]
        scalar: Option<ScalarArg>,
        #[arg(long, default_value_t = 50)]
        range: u64,
        #[arg(long, default_value_t = 10)]
        max_retries: usize,
    },
    /// Jacobian ranks for the eight (n, d) rows of the reference table.
    Table1 {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
    },
    /// List the power sums of degree at most max-degree.
    Invariants {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 3)]
        max_degree: usize,
    },
    /// Count inequality against the Jacobian verdict for 2 <= n <= n-max.
    Conjecture {
        #[arg(long, default_value_t = 8)]
        n_max: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
    },
    /// Sign-flip pair in the dihedral CMF representation.
    CheckDihedralCmf {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Invariant or moment tensor of a given vector.
    Tensor {
        #[arg(long, value_parser = parse_rep)]
        rep: RepDescriptor,
        /// Comma-separated coordinates.
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long)]
        degree: usize,
        #[arg(long, value_enum, default_value_t = TensorKind::Invariant)]
        kind: TensorKind,
        #[arg(long, value_enum)]
        scalar: Option<ScalarArg>,
    },
    /// Timing suites.
    Bench {
        #[arg(long, value_parser = parse_suite)]
        suite: Suite,
        #[arg(long, default_value_t = 3)]
        reps: usize,
    },
}

fn parse_rep(s: &str) -> Result<RepDescriptor, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Rejected input, reported against the flag that carried it.
struct Usage {
    flag: &'static str,
    error: Error,
}

fn usage(flag: &'static str) -> impl FnOnce(Error) -> Usage {
    move |error| Usage { flag, error }
}

struct Report {
    doc: Value,
    ok: bool,
}

fn status_name(e: &Error) -> &'static str {
    match e {
        Error::LinearlyDependentOrbit { .. } => "linearly_dependent_orbit",
        Error::DegenerateContraction { .. } => "degenerate_contraction",
        Error::InconsistentScale(_) => "inconsistent_scale",
        Error::VerificationFailed(_) => "verification_failed",
        Error::DegenerateSample(_) => "degenerate_sample",
        _ => "error",
    }
}

fn resolve_scalar(arg: Option<ScalarArg>, rep: &RepDescriptor) -> ScalarArg {
    arg.unwrap_or(if rep.requires_complex() { ScalarArg::F64 } else { ScalarArg::Exact })
}

fn vector_json<F: Scalar>(v: &Vector<F>) -> Value {
    Value::Array(v.entries.iter().map(Scalar::to_json).collect())
}

fn recover_with<F: Scalar>(desc: &RepDescriptor, seed: u64, range: u64, opts: RecoveryOptions) -> Result<Map<String, Value>, Usage> {
    let rep: Representation<F> = desc.build().map_err(usage("--rep"))?;
    if range == 0 {
        return Err(Usage {
            flag: "--range",
            error: Error::OutOfRange("range must be at least 1".into()),
        });
    }
    let x = random_generic_vector::<F>(rep.dim(), seed, range);
    let t2 = invariant_tensor(&rep, &x, 2).map_err(usage("--rep"))?;
    let t3 = invariant_tensor(&rep, &x, 3).map_err(usage("--rep"))?;
    let input = RecoveryInput {
        rep: &rep,
        t2: &t2,
        t3: &t3,
    };
    let mut doc = Map::new();
    doc.insert("x".into(), vector_json(&x));
    match recover_orbit(&input, &opts) {
        Ok(res) => {
            let truth = rep.orbit(&x).map_err(usage("--rep"))?;
            let matches = same_multiset(&res.recovered_orbit, &truth, opts.tol);
            doc.insert("status".into(), json!(if matches { "ok" } else { "mismatch" }));
            doc.insert(
                "orbit".into(),
                Value::Array(res.recovered_orbit.iter().map(vector_json).collect()),
            );
            doc.insert("retries_used".into(), json!(res.retries_used));
            doc.insert("scale".into(), res.scale.to_json());
        }
        Err(e) => {
            doc.insert("status".into(), json!(status_name(&e)));
            doc.insert("error".into(), json!(e.to_string()));
            doc.insert("orbit".into(), Value::Null);
            doc.insert("retries_used".into(), Value::Null);
            doc.insert("scale".into(), Value::Null);
        }
    }
    Ok(doc)
}

fn parse_point<F: Scalar>(x: &str) -> Result<Vector<F>, Usage> {
    x.split(',')
        .map(F::parse)
        .collect::<Result<Vec<F>, Error>>()
        .map(Vector::new)
        .map_err(usage("--x"))
}

fn tensor_with<F: Scalar>(desc: &RepDescriptor, x: &str, degree: usize, kind: TensorKind) -> Result<Value, Usage> {
    let rep: Representation<F> = desc.build().map_err(usage("--rep"))?;
    let point = parse_point::<F>(x)?;
    if point.dim() != rep.dim() {
        return Err(Usage {
            flag: "--x",
            error: Error::DimensionMismatch {
                op: "tensor",
                expected: rep.dim(),
                got: point.dim(),
            },
        });
    }
    let tensor = match kind {
        TensorKind::Invariant => invariant_tensor(&rep, &point, degree).map(|t| t.to_json()),
        TensorKind::Moment => moment_tensor(&rep, &point, degree).map(|t| t.to_json()),
    }
    .map_err(usage("--degree"))?;
    Ok(json!({ "x": vector_json(&point), "tensor": tensor }))
}

fn run(cli: &Cli) -> Result<Report, Usage> {
    match &cli.command {
        Command::Recover {
            rep,
            seed,
            scalar,
            range,
            max_retries,
        } => {
            let scalar = resolve_scalar(*scalar, rep);
            let opts = RecoveryOptions {
                seed: *seed,
                max_retries: *max_retries,
                rank_tol: cli.rank_tol,
                tol: cli.tolerance,
                ..RecoveryOptions::default()
            };
            let mut doc = match scalar {
                ScalarArg::Exact => recover_with::<Rational>(rep, *seed, *range, opts)?,
                ScalarArg::F64 => recover_with::<Complex64>(rep, *seed, *range, opts)?,
            };
            let ok = doc["status"] == "ok";
            doc.insert("command".into(), json!("recover"));
            doc.insert("rep".into(), json!(rep.to_string()));
            doc.insert("seed".into(), json!(seed));
            doc.insert("scalar".into(), json!(scalar_name(scalar)));
            Ok(Report {
                doc: Value::Object(doc),
                ok,
            })
        }
        Command::Table1 { seed, samples } => {
            let rows = reproduce_table1_with(*seed, *samples);
            let ok = rows.iter().all(|r| r.matches);
            Ok(Report {
                doc: json!({
                    "command": "table1",
                    "seed": seed,
                    "samples": samples,
                    "rows": rows,
                    "all_match": ok,
                }),
                ok,
            })
        }
        Command::Invariants { n, d, max_degree } => {
            if *d == 0 || *n == 0 {
                return Err(Usage {
                    flag: if *n == 0 { "--n" } else { "--d" },
                    error: Error::OutOfRange("n and d must be positive".into()),
                });
            }
            let polys = enumerate_power_sums(*n, *d, *max_degree);
            let by_degree: Vec<usize> = (1..=*max_degree)
                .map(|k| polys.iter().filter(|p| p.degree() == k).count())
                .collect();
            let list: Vec<Value> = polys
                .iter()
                .map(|p| {
                    json!({
                        "label": p.label(),
                        "name": p.label().to_string(),
                        "degree": p.degree(),
                        "polynomial": p.to_string(),
                    })
                })
                .collect();
            let expected = power_sum_count(*d, *max_degree);
            Ok(Report {
                doc: json!({
                    "command": "invariants",
                    "n": n,
                    "d": d,
                    "max_degree": max_degree,
                    "count": polys.len(),
                    "expected_count": expected.to_string(),
                    "count_by_degree": by_degree,
                    "invariants": list,
                }),
                ok: true,
            })
        }
        Command::Conjecture { n_max, seed, samples } => {
            let cells = conjecture_scan(*n_max, *seed, *samples);
            let ok = cells.iter().all(|c| c.agree);
            Ok(Report {
                doc: json!({
                    "command": "conjecture",
                    "n_max": n_max,
                    "seed": seed,
                    "samples": samples,
                    "cells": cells,
                    "all_agree": ok,
                }),
                ok,
            })
        }
        Command::CheckDihedralCmf { n, seed } => {
            let w = dihedral_cmf_counterexample(*n, *seed).map_err(usage("--n"))?;
            let ok = w.holds;
            let mut doc = serde_json::to_value(&w).expect("witness serializes");
            doc["command"] = json!("check-dihedral-cmf");
            doc["rep"] = json!(RepDescriptor::DihedralCmf(*n).to_string());
            Ok(Report { doc, ok })
        }
        Command::Tensor {
            rep,
            x,
            degree,
            kind,
            scalar,
        } => {
            let scalar = match (kind, scalar) {
                (TensorKind::Moment, None) => ScalarArg::F64,
                (TensorKind::Moment, Some(ScalarArg::Exact)) => {
                    return Err(Usage {
                        flag: "--scalar",
                        error: Error::ScalarKindMismatch {
                            expected: "f64",
                            got: "exact",
                        },
                    })
                }
                _ => resolve_scalar(*scalar, rep),
            };
            let mut doc = match scalar {
                ScalarArg::Exact => tensor_with::<Rational>(rep, x, *degree, *kind)?,
                ScalarArg::F64 => tensor_with::<Complex64>(rep, x, *degree, *kind)?,
            };
            doc["command"] = json!("tensor");
            doc["rep"] = json!(rep.to_string());
            doc["scalar"] = json!(scalar_name(scalar));
            doc["kind"] = json!(match kind {
                TensorKind::Invariant => "invariant",
                TensorKind::Moment => "moment",
            });
            doc["degree"] = json!(degree);
            Ok(Report { doc, ok: true })
        }
        Command::Bench { suite, reps } => {
            let records = run_bench(*suite, *reps).map_err(usage("--suite"))?;
            let slope = log_log_slope(&records);
            Ok(Report {
                doc: json!({
                    "command": "bench",
                    "suite": suite,
                    "reps": reps,
                    "records": records,
                    "log_log_slope": slope,
                }),
                ok: true,
            })
        }
    }
}

fn scalar_name(s: ScalarArg) -> &'static str {
    match s {
        ScalarArg::Exact => "exact",
        ScalarArg::F64 => "f64",
    }
}

fn render_text(v: &Value, prefix: &str, out: &mut String) {
    match v {
        Value::Object(map) => {
            for (k, child) in map {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                render_text(child, &key, out);
            }
        }
        Value::Array(items) if items.iter().any(Value::is_object) => {
            for (i, child) in items.iter().enumerate() {
                render_text(child, &format!("{prefix}[{i}]"), out);
            }
        }
        Value::String(s) => out.push_str(&format!("{prefix} = {s}\n")),
        other => out.push_str(&format!("{prefix} = {other}\n")),
    }
}

fn configure_threads() {
    let Ok(raw) = std::env::var("ORBITKIT_THREADS") else {
        return;
    };
    match raw.trim().parse::<usize>() {
        Ok(n) if n > 0 => {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
        _ => eprintln!("warning: ignoring ORBITKIT_THREADS={raw}"),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    configure_threads();
    match run(&cli) {
        Ok(report) => {
            let text = match cli.out {
                OutFormat::Json => serde_json::to_string_pretty(&report.doc).expect("json") + "\n",
                OutFormat::Text => {
                    let mut s = String::new();
                    render_text(&report.doc, "", &mut s);
                    s
                }
            };
            let _ = std::io::stdout().lock().write_all(text.as_bytes());
            if report.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Usage { flag, error }) => {
            eprintln!("error: invalid value for {flag}: {error}");
            ExitCode::from(2)
        }
    }
}
