use std::time::Instant;

use hsvd::factory::table_scale;
use hsvd::{drive, generate_instance, orthonormality_distance, SolverConfig, SpectrumSpec};
use serde::Serialize;

use crate::args::BenchArgs;
use crate::commands::max_relative_error;
use crate::{csv_err, CliError, Result};

/// One solver run of the benchmark table.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchRow {
    pub n: usize,
    pub p: usize,
    pub sign_fraction: f64,
    pub sorting_enabled: bool,
    pub repeat: usize,
    pub sweeps: usize,
    pub stop_reason: String,
    pub wall_time: f64,
    pub max_rel_eig_err: f64,
    #[serde(rename = "dU")]
    pub d_u: f64,
    pub rotations: usize,
    pub skips: usize,
}

impl BenchRow {
    /// The columns that must not change between repeats.
    pub fn accuracy_key(&self) -> (usize, usize, u64, u64) {
        (
            self.sweeps,
            self.rotations,
            self.max_rel_eig_err.to_bits(),
            self.d_u.to_bits(),
        )
    }
}

fn positives(n: usize, fraction: f64) -> usize {
    let p = (fraction * n as f64).round() as usize;
    if fraction > 0.0 { p.max(1) } else { p }.min(n)
}

/// Runs every (order, sign fraction) instance with sorting on and off,
/// `repeats` times each. One instance is generated per (order, fraction).
pub fn cmd_bench(args: &BenchArgs) -> Result<Vec<BenchRow>> {
    if args.repeats == 0 || args.workers == 0 {
        return Err(CliError::Usage("--repeats and --workers must be positive".into()));
    }
    if let Some(&n) = args.orders.iter().find(|&&n| n < 2 || n % 2 == 1) {
        return Err(CliError::Usage(format!("orders must be even and at least 2, got {n}")));
    }
    if let Some(f) = args.signs.iter().find(|f| !(0.0..=1.0).contains(*f)) {
        return Err(CliError::Usage(format!("sign fractions must lie in [0, 1], got {f}")));
    }

    let mut rows = Vec::new();
    for &n in &args.orders {
        let a = args.a.unwrap_or_else(|| table_scale(n));
        for &fraction in &args.signs {
            let p = positives(n, fraction);
            let spec = SpectrumSpec::new(n, a, args.seed).with_positives(p);
            let inst = generate_instance::<f64>(&spec)?;
            for sort in [true, false] {
                let cfg = SolverConfig {
                    sort,
                    workers: args.workers,
                    ..SolverConfig::default()
                };
                for repeat in 0..args.repeats {
                    let start = Instant::now();
                    let res = drive(&inst.factor.g, &inst.factor.j, &cfg)?;
                    let wall_time = start.elapsed().as_secs_f64();
                    rows.push(BenchRow {
                        n,
                        p,
                        sign_fraction: fraction,
                        sorting_enabled: sort,
                        repeat,
                        sweeps: res.sweeps_used,
                        stop_reason: res.stop_reason.as_str().to_string(),
                        wall_time,
                        max_rel_eig_err: max_relative_error(&inst.lambda_true, &res.lambda)?,
                        d_u: orthonormality_distance(&res.u),
                        rotations: res.rotations(),
                        skips: res.skips(),
                    });
                }
            }
        }
    }
    if let Some(path) = &args.out {
        let mut w = csv::Writer::from_path(path).map_err(csv_err(path))?;
        for row in &rows {
            w.serialize(row).map_err(csv_err(path))?;
        }
        w.flush().map_err(|e| hsvd::HsvdError::io(path, e))?;
    }
    Ok(rows)
}

/// The table as CSV text.
pub fn bench_csv(rows: &[BenchRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row).map_err(csv_err("<stdout>"))?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| CliError::Usage(format!("cannot render table: {e}")))?;
    Ok(String::from_utf8_lossy(&bytes).into_owned())
}
