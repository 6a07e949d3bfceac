use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::Parser;
use hdm::config::{DomainArg, Format, MethodArg, ProblemArg, Settings, SolverArg};
use hdm::output::write_markdown;

/// Solve a fourth-order problem on successive refinement levels and report
/// errors, observed orders and Newton statistics.
#[derive(Parser, Debug)]
#[command(name = "hdm", version)]
struct Cli {
    /// `key = value` settings file; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_enum)]
    problem: Option<ProblemArg>,
    #[arg(long, value_enum)]
    method: Option<MethodArg>,
    #[arg(long, value_enum)]
    domain: Option<DomainArg>,
    /// Number of meshes, starting from the coarse one.
    #[arg(long)]
    levels: Option<usize>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Newton stops once the increment norm is at most this.
    #[arg(long)]
    newton_tol: Option<f64>,
    #[arg(long)]
    max_iter: Option<usize>,
    #[arg(long, value_enum)]
    linear_solver: Option<SolverArg>,
    /// Also compute the discretisation property measures on every level.
    #[arg(long)]
    properties: bool,
    /// Allow GR and Navier–Stokes on the L-shaped domain.
    #[arg(long)]
    allow_extension: bool,
    /// Worker threads for assembly; 0 uses every core.
    #[arg(long)]
    threads: Option<usize>,
    /// Write each level's mesh as text next to the reports.
    #[arg(long)]
    dump_mesh: bool,
}

impl Cli {
    fn settings(&self) -> anyhow::Result<Settings> {
        let mut s = Settings::default();
        if let Some(path) = &self.config {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            s.apply_file(&text).with_context(|| format!("in {}", path.display()))?;
        }
        macro_rules! take {
            ($($f:ident),*) => {$(if let Some(v) = self.$f.clone() { s.$f = v; })*};
        }
        take!(problem, method, domain, levels, out, format, newton_tol, max_iter, linear_solver, threads);
        s.properties |= self.properties;
        s.allow_extension |= self.allow_extension;
        s.dump_mesh |= self.dump_mesh;
        Ok(s)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let settings = match cli.settings() {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    if let Err(e) = settings.study_config().validate() {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    match hdm::run(&settings) {
        Ok(outcome) => {
            print!("{}", write_markdown(&outcome.report));
            for p in &outcome.written {
                println!("wrote {}", p.display());
            }
            if outcome.report.all_converged() {
                ExitCode::SUCCESS
            } else {
                eprintln!("newton did not converge on every level");
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(3)
        }
    }
}
