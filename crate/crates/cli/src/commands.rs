use std::fmt;
use std::fs;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};
use std::time::Instant;

use hsvd::factory::table_scale;
use hsvd::io::{read_gjh1, read_vector_csv, write_gjh1, write_vector_csv};
use hsvd::solver::{BorderStrip, HsvdResult, SweepStats};
use hsvd::strategy::{enumerate_modified_modulus, validate_coverage, weakly_equivalent_modulus_rowcyclic};
use hsvd::{
    border, bunch_parlett_factor, drive, generate_instance, orthonormality_distance, qr_shorten,
    recover_v, FactorPair64, HsvdError, Matrix, SignatureVector, SolverConfig, SpectrumSpec,
};
use serde::{Deserialize, Serialize};

use crate::args::{CheckArgs, FactorArgs, GenArgs, RunArgs};
use crate::{csv_err, CliError, Result};

/// File layout of a generated test problem.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bundle {
    pub dir: PathBuf,
}

impl Bundle {
    pub fn at(dir: impl Into<PathBuf>) -> Self {
        Self { dir: dir.into() }
    }

    pub fn matrix(&self) -> PathBuf {
        self.dir.join("M.gjh")
    }

    pub fn factor(&self) -> PathBuf {
        self.dir.join("G.gjh")
    }

    pub fn lambda_true(&self) -> PathBuf {
        self.dir.join("lambda_true.csv")
    }

    pub fn manifest(&self) -> PathBuf {
        self.dir.join("manifest.csv")
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
struct Manifest {
    seed: u64,
    n: usize,
    a: f64,
    p: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GenOutput {
    pub bundle: Bundle,
    pub a: f64,
    /// Positive eigenvalue count.
    pub p: usize,
}

fn create_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| HsvdError::io(dir, e).into())
}

fn write_rows<S: Serialize>(path: &Path, rows: &[S]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(csv_err(path))?;
    for row in rows {
        w.serialize(row).map_err(csv_err(path))?;
    }
    w.flush().map_err(|e| HsvdError::io(path, e))?;
    Ok(())
}

pub fn cmd_gen(args: &GenArgs) -> Result<GenOutput> {
    if args.n < 2 {
        return Err(CliError::Usage(format!("--n must be at least 2, got {}", args.n)));
    }
    let a = args.a.unwrap_or_else(|| table_scale(args.n));
    if !(a > 0.0) {
        return Err(CliError::Usage(format!("--a must be positive, got {a}")));
    }
    if args.positives.is_some_and(|p| p > args.n) {
        return Err(CliError::Usage("--positives exceeds --n".into()));
    }
    let mut spec = SpectrumSpec::new(args.n, a, args.seed);
    spec.positives = args.positives;
    let inst = generate_instance::<f64>(&spec)?;
    let p = inst.positive_count();

    let bundle = Bundle::at(&args.out);
    create_dir(&bundle.dir)?;
    write_gjh1(bundle.matrix(), &inst.m, p)?;
    write_gjh1(bundle.factor(), &inst.factor.g, inst.factor.j.p())?;
    write_vector_csv(bundle.lambda_true(), &inst.lambda_true)?;
    write_rows(
        &bundle.manifest(),
        &[Manifest {
            seed: args.seed,
            n: args.n,
            a,
            p,
        }],
    )?;
    Ok(GenOutput { bundle, a, p })
}

pub fn cmd_factor(args: &FactorArgs) -> Result<FactorPair64> {
    let m = read_gjh1(&args.input)?.matrix;
    let f = bunch_parlett_factor(&m)?;
    write_gjh1(&args.out, &f.g, f.j.p())?;
    Ok(f)
}

/// One line of `record.csv`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunRecord {
    pub n: usize,
    pub r: usize,
    pub p: usize,
    pub sweeps: usize,
    pub stop_reason: String,
    /// Seconds spent in the solver, excluding I/O and setup.
    pub wall_time: f64,
    /// Empty when no reference spectrum is available.
    pub max_rel_eig_err: Option<f64>,
    #[serde(rename = "dU")]
    pub d_u: f64,
    pub rotations: usize,
    pub skips: usize,
    pub sorting_enabled: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunOutput {
    pub record: RunRecord,
    pub result: HsvdResult<f64>,
    pub out_dir: PathBuf,
}

impl RunOutput {
    pub fn converged(&self) -> bool {
        self.result.converged()
    }
}

/// Largest `|l_i - l'_i| / |l_i|` after sorting both.
pub fn max_relative_error(truth: &[f64], computed: &[f64]) -> Result<f64> {
    if truth.len() != computed.len() {
        return Err(HsvdError::shape(format!(
            "{} reference eigenvalues for {} computed",
            truth.len(),
            computed.len()
        ))
        .into());
    }
    let mut t = truth.to_vec();
    let mut c = computed.to_vec();
    t.sort_by(f64::total_cmp);
    c.sort_by(f64::total_cmp);
    Ok(t.iter()
        .zip(&c)
        .map(|(a, b)| ((a - b) / a).abs())
        .fold(0.0, f64::max))
}

struct Prepared {
    g: Matrix,
    j: SignatureVector,
    strip: Option<BorderStrip>,
    q: Option<Matrix>,
}

fn prepare(args: &RunArgs, g: Matrix, j: SignatureVector) -> Result<Prepared> {
    let (g, q) = if args.shorten && g.rows() > g.cols() {
        let (r, q) = qr_shorten(&g)?;
        (r, Some(q))
    } else {
        (g, None)
    };
    let odd = g.cols() % 2 == 1;
    if odd && matches!(args.schedule, crate::ScheduleArg::Modulus) {
        if !args.border {
            return Err(CliError::Usage(format!(
                "{} columns: the modulus schedule needs an even count, pass --border",
                g.cols()
            )));
        }
        let b = border(&g, &j, g.cols() + 1, g.rows() + 1)?;
        return Ok(Prepared {
            g: b.g,
            j: b.j,
            strip: Some(b.strip),
            q,
        });
    }
    Ok(Prepared {
        g,
        j,
        strip: None,
        q,
    })
}

#[derive(Serialize)]
struct TelemetryRow {
    sweep: usize,
    rotations: usize,
    skips: usize,
    max_abs_t: f64,
}

impl From<&SweepStats<f64>> for TelemetryRow {
    fn from(s: &SweepStats<f64>) -> Self {
        Self {
            sweep: s.sweep,
            rotations: s.rotations,
            skips: s.skips,
            max_abs_t: s.max_abs_t,
        }
    }
}

fn run(args: &RunArgs, write_v: bool) -> Result<RunOutput> {
    if args.workers == 0 {
        return Err(CliError::Usage("--workers must be at least 1".into()));
    }
    let (factor_path, truth_path, default_out) = if args.input.is_dir() {
        let b = Bundle::at(&args.input);
        let truth = args
            .truth
            .clone()
            .or_else(|| b.lambda_true().exists().then(|| b.lambda_true()));
        (b.factor(), truth, b.dir)
    } else {
        let parent = args
            .input
            .parent()
            .map(Path::to_path_buf)
            .unwrap_or_default();
        (args.input.clone(), args.truth.clone(), parent)
    };
    let out_dir = args.out.clone().unwrap_or(default_out);

    let file = read_gjh1(&factor_path)?;
    let j = file.signature()?;
    let g = file.matrix;
    let (n, r, p) = (g.rows(), g.cols(), j.p());
    let truth = truth_path.map(read_vector_csv).transpose()?;

    let prep = prepare(args, g, j.clone())?;
    let cfg = SolverConfig {
        max_sweeps: args.max_sweeps,
        accumulate_v: !args.no_accumulate_v,
        sort: !args.no_sort,
        workers: args.workers,
        schedule: args.schedule.into(),
        ..SolverConfig::default()
    };
    let start = Instant::now();
    let res = drive(&prep.g, &prep.j, &cfg)?;
    let wall_time = start.elapsed().as_secs_f64();

    let mut res = match prep.strip {
        Some(s) => s.strip(res),
        None => res,
    };
    if let Some(q) = &prep.q {
        res.u = q.matmul(&res.u)?;
    }
    let max_rel_eig_err = truth
        .as_deref()
        .map(|t| max_relative_error(t, &res.lambda))
        .transpose()?;
    let record = RunRecord {
        n,
        r,
        p,
        sweeps: res.sweeps_used,
        stop_reason: res.stop_reason.as_str().to_string(),
        wall_time,
        max_rel_eig_err,
        d_u: orthonormality_distance(&res.u),
        rotations: res.rotations(),
        skips: res.skips(),
        sorting_enabled: cfg.sort,
    };

    create_dir(&out_dir)?;
    write_vector_csv(out_dir.join("sigma.csv"), &res.sigma)?;
    write_vector_csv(out_dir.join("lambda.csv"), &res.lambda)?;
    write_gjh1(out_dir.join("U.gjh"), &res.u, p)?;
    if write_v {
        if let Some(vt) = &res.vinv_t {
            write_gjh1(out_dir.join("V.gjh"), &recover_v(vt, &j)?, p)?;
        }
    }
    write_rows(&out_dir.join("record.csv"), std::slice::from_ref(&record))?;
    if let Some(path) = &args.telemetry {
        let rows: Vec<TelemetryRow> = res.telemetry.iter().map(TelemetryRow::from).collect();
        write_rows(path, &rows)?;
    }
    Ok(RunOutput {
        record,
        result: res,
        out_dir,
    })
}

/// HSVD of the factor: `sigma.csv`, `U.gjh`, `V.gjh`, `lambda.csv`, `record.csv`.
pub fn cmd_hsvd(args: &RunArgs) -> Result<RunOutput> {
    run(args, true)
}

/// Eigenpairs of `G J G^T`: `lambda.csv`, `sigma.csv`, `U.gjh`, `record.csv`.
pub fn cmd_eig(args: &RunArgs) -> Result<RunOutput> {
    run(args, false)
}

/// Parses `N`, `A..B` or `A..=B` (both inclusive) with even endpoints.
pub fn parse_even_range(s: &str) -> Result<RangeInclusive<usize>> {
    let bad = || CliError::Usage(format!("expected an even order or range A..B, got `{s}`"));
    let num = |t: &str| t.trim().parse::<usize>().map_err(|_| bad());
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (num(a)?, num(b.trim_start_matches('='))?),
        None => {
            let v = num(s)?;
            (v, v)
        }
    };
    if lo < 2 || lo > hi {
        return Err(bad());
    }
    if lo % 2 == 1 || hi % 2 == 1 {
        return Err(CliError::Usage(format!(
            "orders must be even, got {lo}..{hi}"
        )));
    }
    Ok(lo..=hi)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckLine {
    pub n: usize,
    pub coverage: bool,
    pub doubles: Vec<(usize, usize)>,
    pub weak_equivalence: bool,
    pub failures: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckReport {
    pub lines: Vec<CheckLine>,
}

impl CheckReport {
    pub fn failed(&self) -> usize {
        self.lines.iter().filter(|l| !l.failures.is_empty()).count()
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.lines {
            let status = if l.failures.is_empty() { "ok" } else { "FAIL" };
            write!(
                f,
                "n={:<3} {status} coverage={} weak_equivalence={} doubles=",
                l.n, l.coverage, l.weak_equivalence
            )?;
            let d: Vec<String> = l.doubles.iter().map(|(i, j)| format!("({i},{j})")).collect();
            writeln!(f, "{}", d.join(""))?;
            for msg in &l.failures {
                writeln!(f, "    {msg}")?;
            }
        }
        Ok(())
    }
}

pub fn cmd_check_strategy(args: &CheckArgs) -> Result<CheckReport> {
    let range = parse_even_range(&args.n)?;
    let mut lines = Vec::new();
    for n in range.step_by(2) {
        let o = enumerate_modified_modulus(n, 1)?;
        let cov = validate_coverage(&o, n / 2);
        let weak = weakly_equivalent_modulus_rowcyclic(n);
        let mut failures: Vec<String> = cov.failures.iter().map(ToString::to_string).collect();
        failures.extend(weak.diagnostics.iter().cloned());
        if !weak.holds && weak.diagnostics.is_empty() {
            failures.push("weak equivalence does not hold".into());
        }
        lines.push(CheckLine {
            n,
            coverage: cov.passed(),
            doubles: cov.doubles,
            weak_equivalence: weak.holds,
            failures,
        });
    }
    Ok(CheckReport { lines })
}
