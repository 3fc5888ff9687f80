use std::process::ExitCode;

use clap::Parser;
use hsvd_cli::{
    bench_csv, cmd_bench, cmd_check_strategy, cmd_eig, cmd_factor, cmd_gen, cmd_hsvd, exit, Cli,
    CliError, Command, RunOutput,
};

fn report_run(out: &RunOutput) -> i32 {
    let r = &out.record;
    println!(
        "n={} r={} p={} sweeps={} stop={} time={:.3}s dU={:.3e} max_rel_eig_err={}",
        r.n,
        r.r,
        r.p,
        r.sweeps,
        r.stop_reason,
        r.wall_time,
        r.d_u,
        r.max_rel_eig_err
            .map_or_else(|| "n/a".to_string(), |e| format!("{e:.3e}"))
    );
    println!("results in {}", out.out_dir.display());
    if out.converged() {
        exit::OK
    } else {
        eprintln!("error: no convergence within the sweep budget");
        exit::NOT_CONVERGED
    }
}

fn run(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Gen(a) => {
            let out = cmd_gen(&a)?;
            println!(
                "wrote {} (n={}, a={}, p={})",
                out.bundle.dir.display(),
                a.n,
                out.a,
                out.p
            );
            Ok(exit::OK)
        }
        Command::Factor(a) => {
            let f = cmd_factor(&a)?;
            println!("wrote {} (p={} of {})", a.out.display(), f.j.p(), f.j.len());
            Ok(exit::OK)
        }
        Command::Hsvd(a) => Ok(report_run(&cmd_hsvd(&a)?)),
        Command::Eig(a) => Ok(report_run(&cmd_eig(&a)?)),
        Command::CheckStrategy(a) => {
            let rep = cmd_check_strategy(&a)?;
            print!("{rep}");
            match rep.failed() {
                0 => Ok(exit::OK),
                k => Err(CliError::CheckFailed(k)),
            }
        }
        Command::Bench(a) => {
            let rows = cmd_bench(&a)?;
            print!("{}", bench_csv(&rows)?);
            Ok(exit::OK)
        }
    }
}

fn main() -> ExitCode {
    let code = match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    ExitCode::from(code as u8)
}
