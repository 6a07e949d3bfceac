//! Convergence studies from the command line: settings, threaded cell
//! execution and the report files.

pub mod config;
pub mod dump;
pub mod exec;
pub mod output;

use std::fs;
use std::path::PathBuf;

use anyhow::Context;
use hdm_core::exec::Sequential;
use hdm_core::study::{run_study_with, ConvergenceReport};

use crate::config::Settings;
use crate::exec::Threaded;

pub struct Outcome {
    pub report: ConvergenceReport,
    pub written: Vec<PathBuf>,
}

pub fn run_study_threads(settings: &Settings) -> hdm_core::Result<ConvergenceReport> {
    let cfg = settings.study_config();
    if settings.threads == 1 {
        run_study_with(&cfg, Sequential)
    } else {
        run_study_with(&cfg, Threaded::new(settings.threads))
    }
}

/// Runs the study and writes every requested file under `settings.out`.
pub fn run(settings: &Settings) -> anyhow::Result<Outcome> {
    let cfg = settings.study_config();
    cfg.validate()?;
    let report = run_study_threads(settings)?;
    fs::create_dir_all(&settings.out).with_context(|| format!("creating {}", settings.out.display()))?;
    let stem = settings.stem();
    let mut written = Vec::new();
    let mut put = |name: String, bytes: &[u8]| -> anyhow::Result<()> {
        let path = settings.out.join(name);
        fs::write(&path, bytes).with_context(|| format!("writing {}", path.display()))?;
        written.push(path);
        Ok(())
    };
    if settings.format.csv() {
        put(format!("{stem}.csv"), &output::write_csv(&report)?)?;
    }
    if settings.format.markdown() {
        put(format!("{stem}.md"), output::write_markdown(&report).as_bytes())?;
    }
    if settings.properties {
        put(format!("{stem}_properties.csv"), &output::write_properties_csv(&report)?)?;
    }
    if settings.dump_mesh {
        for level in 0..cfg.levels {
            let mesh = cfg.method.mesh(cfg.domain, level);
            put(format!("{stem}_mesh_l{level}.txt"), dump::mesh_text(&mesh).as_bytes())?;
        }
    }
    Ok(Outcome { report, written })
}
