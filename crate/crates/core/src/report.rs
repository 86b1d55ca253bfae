//! Machine-readable run reports: JSON per run, CSV per bench sweep.

use std::io::{Read, Write};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::admm::{solve_with_callback, AffineMethod, Progress, Residuals, SolveOutcome, SolveStatus, SolverOptions};
use crate::assembly::ConicProblem;
use crate::error::{Result, SosError};
use crate::experiments::GeneratedProblem;
use crate::scalar::Scalar;

pub const REPORT_SCHEMA: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dims {
    /// Order of the largest PSD block.
    #[serde(rename = "N")]
    pub n_psd: usize,
    pub m: usize,
    pub t: usize,
    pub lowrank_width: usize,
    pub num_cols: usize,
}

impl Dims {
    pub fn of<T: Scalar>(problem: &ConicProblem<T>) -> Self {
        Dims {
            n_psd: problem.max_psd_order(),
            m: problem.m(),
            t: problem.t(),
            lowrank_width: problem.lowrank_width(),
            num_cols: problem.num_cols(),
        }
    }
}

/// Wall-clock seconds per phase.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseTimes {
    pub assembly_s: f64,
    pub cache_s: f64,
    pub iterate_s: f64,
}

impl PhaseTimes {
    pub fn total(&self) -> f64 {
        self.assembly_s + self.cache_s + self.iterate_s
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema: u32,
    pub family: String,
    pub n: usize,
    pub seed: Option<u64>,
    pub dims: Dims,
    pub status: SolveStatus,
    /// Objective of the modelled problem (for the quartic family, the bound γ).
    pub objective: Option<f64>,
    /// `cᵀξ/τ` as minimized by the solver.
    pub conic_objective: Option<f64>,
    pub iterations: usize,
    /// Absent when the final iterate has `τ = 0`.
    pub residuals: Option<Residuals>,
    pub times: PhaseTimes,
    pub method: AffineMethod,
    pub tol: f64,
    pub max_iters: usize,
    pub factorizations: usize,
}

impl RunReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let report: RunReport =
            serde_json::from_str(text).map_err(|e| SosError::InvalidSpec(format!("bad report JSON: {e}")))?;
        if report.schema != REPORT_SCHEMA {
            return Err(SosError::InvalidSpec(format!("unsupported report schema {}", report.schema)));
        }
        Ok(report)
    }

    pub fn bench_row(&self) -> BenchRow {
        BenchRow {
            n: self.n,
            n_psd: self.dims.n_psd,
            m: self.dims.m,
            t: self.dims.lowrank_width,
            time_s: self.times.total(),
            iters: self.iterations,
            objective: self.objective,
            status: self.status,
        }
    }
}

/// Identifies a run in its report.
#[derive(Clone, Debug, PartialEq)]
pub struct RunLabel {
    pub family: String,
    pub n: usize,
    pub seed: Option<u64>,
}

/// Assemble, solve and report one generated instance.
pub fn run_generated<T: Scalar>(
    label: &RunLabel,
    generated: &GeneratedProblem<T>,
    options: &SolverOptions,
    callback: impl FnMut(&Progress),
) -> Result<(RunReport, SolveOutcome<T>)> {
    let start = Instant::now();
    let problem = generated.assemble()?;
    let assembly_s = start.elapsed().as_secs_f64();
    let outcome = solve_with_callback(&problem, options, callback)?;
    let finite = |r: Residuals| r.max().is_finite();
    let report = RunReport {
        schema: REPORT_SCHEMA,
        family: label.family.clone(),
        n: label.n,
        seed: label.seed,
        dims: Dims::of(&problem),
        status: outcome.status,
        objective: outcome.objective.map(|v| generated.model_objective(v).as_f64()),
        conic_objective: outcome.objective.map(Scalar::as_f64),
        iterations: outcome.iterations,
        residuals: Some(outcome.residuals).filter(|r| finite(*r)),
        times: PhaseTimes {
            assembly_s,
            cache_s: outcome.setup_time.as_secs_f64(),
            iterate_s: outcome.iterate_time.as_secs_f64(),
        },
        method: options.affine_method,
        tol: options.tol,
        max_iters: options.max_iters,
        factorizations: outcome.stats.factorizations,
    };
    Ok((report, outcome))
}

/// One line of a bench sweep. `t` is the order of the factorized small
/// system (free variables plus multiplier Gram entries).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub n: usize,
    #[serde(rename = "N")]
    pub n_psd: usize,
    pub m: usize,
    pub t: usize,
    pub time_s: f64,
    pub iters: usize,
    pub objective: Option<f64>,
    pub status: SolveStatus,
}

pub const BENCH_COLUMNS: [&str; 8] = ["n", "N", "m", "t", "time_s", "iters", "objective", "status"];

pub fn write_bench_csv<W: Write>(rows: &[BenchRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row).map_err(|e| SosError::InvalidSpec(format!("CSV write failed: {e}")))?;
    }
    if rows.is_empty() {
        w.write_record(BENCH_COLUMNS)
            .map_err(|e| SosError::InvalidSpec(format!("CSV write failed: {e}")))?;
    }
    w.flush().map_err(|e| SosError::InvalidSpec(format!("CSV write failed: {e}")))?;
    Ok(())
}

pub fn read_bench_csv<R: Read>(input: R) -> Result<Vec<BenchRow>> {
    let mut r = csv::Reader::from_reader(input);
    let headers = r
        .headers()
        .map_err(|e| SosError::InvalidSpec(format!("CSV read failed: {e}")))?
        .clone();
    if headers.iter().ne(BENCH_COLUMNS) {
        return Err(SosError::InvalidSpec(format!("unexpected CSV columns: {headers:?}")));
    }
    r.deserialize()
        .map(|row| row.map_err(|e| SosError::InvalidSpec(format!("CSV read failed: {e}"))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> RunReport {
        RunReport {
            schema: REPORT_SCHEMA,
            family: "pop".into(),
            n: 10,
            seed: None,
            dims: Dims {
                n_psd: 66,
                m: 1001,
                t: 1,
                lowrank_width: 122,
                num_cols: 4478,
            },
            status: SolveStatus::Optimal,
            objective: Some(-9.136474551392381),
            conic_objective: Some(9.136474551392381),
            iterations: 100,
            residuals: Some(Residuals {
                primal: 1.0 / 3.0,
                dual: 2e-4,
                gap: 0.1 + 0.2,
            }),
            times: PhaseTimes {
                assembly_s: 0.01,
                cache_s: 0.002,
                iterate_s: 0.04,
            },
            method: AffineMethod::LowRank,
            tol: 1e-3,
            max_iters: 2000,
            factorizations: 1,
        }
    }

    #[test]
    fn json_round_trip_is_exact() {
        let r = sample();
        let text = r.to_json();
        assert!(text.contains("\"schema\": 1"));
        assert!(text.contains("\"N\": 66"));
        assert_eq!(RunReport::from_json(&text).unwrap(), r);
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let mut rows = vec![sample().bench_row()];
        rows.push(BenchRow {
            objective: None,
            status: SolveStatus::Inconclusive,
            ..rows[0].clone()
        });
        let mut buf = Vec::new();
        write_bench_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert_eq!(text.lines().next().unwrap(), BENCH_COLUMNS.join(","));
        assert_eq!(read_bench_csv(buf.as_slice()).unwrap(), rows);
    }

    #[test]
    fn rejects_other_schema() {
        let text = sample().to_json().replace("\"schema\": 1", "\"schema\": 2");
        assert!(RunReport::from_json(&text).is_err());
    }
}
