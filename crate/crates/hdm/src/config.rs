//! Run settings and the `key = value` config file.
//!
//! ```text
//! # comments and blank lines are ignored
//! problem = vk
//! method = adini
//! domain = lshape
//! levels = 5
//! out = results
//! format = both
//! newton_tol = 1e-9
//! max_iter = 20
//! linear_solver = direct
//! properties = false
//! allow_extension = false
//! threads = 1
//! dump_mesh = false
//! ```
//!
//! Keys may also be written with dashes (`newton-tol`). Command-line flags
//! override values from the file.

use std::path::PathBuf;

use clap::ValueEnum;
use hdm_core::discretisation::Method;
use hdm_core::mesh::Domain;
use hdm_core::problems::Problem;
use hdm_core::solver::{LinearSolver, NewtonConfig};
use hdm_core::study::StudyConfig;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum ConfigError {
    #[error("line {line}: expected `key = value`")]
    Syntax { line: usize },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: invalid value `{value}` for `{key}`")]
    BadValue { line: usize, key: String, value: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ProblemArg {
    Ns,
    Vk,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Morley,
    Adini,
    Gr,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum DomainArg {
    Square,
    Lshape,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Markdown,
    Both,
}

impl Format {
    pub fn csv(self) -> bool {
        matches!(self, Format::Csv | Format::Both)
    }

    pub fn markdown(self) -> bool {
        matches!(self, Format::Markdown | Format::Both)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum SolverArg {
    #[default]
    Direct,
    Iterative,
}

impl From<ProblemArg> for Problem {
    fn from(p: ProblemArg) -> Self {
        match p {
            ProblemArg::Ns => Problem::NavierStokes,
            ProblemArg::Vk => Problem::VonKarman,
        }
    }
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Morley => Method::Morley,
            MethodArg::Adini => Method::Adini,
            MethodArg::Gr => Method::Gr,
        }
    }
}

impl From<DomainArg> for Domain {
    fn from(d: DomainArg) -> Self {
        match d {
            DomainArg::Square => Domain::Square,
            DomainArg::Lshape => Domain::LShape,
        }
    }
}

impl From<SolverArg> for LinearSolver {
    fn from(s: SolverArg) -> Self {
        match s {
            SolverArg::Direct => LinearSolver::Direct,
            SolverArg::Iterative => LinearSolver::Iterative,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Settings {
    pub problem: ProblemArg,
    pub method: MethodArg,
    pub domain: DomainArg,
    pub levels: usize,
    pub out: PathBuf,
    pub format: Format,
    pub newton_tol: f64,
    pub max_iter: usize,
    pub linear_solver: SolverArg,
    pub properties: bool,
    pub allow_extension: bool,
    /// `0` uses every core.
    pub threads: usize,
    pub dump_mesh: bool,
}

impl Default for Settings {
    fn default() -> Self {
        let newton = NewtonConfig::default();
        Settings {
            problem: ProblemArg::Ns,
            method: MethodArg::Morley,
            domain: DomainArg::Square,
            levels: 4,
            out: PathBuf::from("."),
            format: Format::Csv,
            newton_tol: newton.tol_increment,
            max_iter: newton.max_iter,
            linear_solver: SolverArg::Direct,
            properties: false,
            allow_extension: false,
            threads: 1,
            dump_mesh: false,
        }
    }
}

fn parse_bool(v: &str) -> Option<bool> {
    match v.to_ascii_lowercase().as_str() {
        "true" | "yes" | "on" | "1" => Some(true),
        "false" | "no" | "off" | "0" => Some(false),
        _ => None,
    }
}

impl Settings {
    pub fn study_config(&self) -> StudyConfig {
        StudyConfig {
            problem: self.problem.into(),
            method: self.method.into(),
            domain: self.domain.into(),
            levels: self.levels,
            newton: NewtonConfig {
                tol_increment: self.newton_tol,
                max_iter: self.max_iter,
                linear_solver: self.linear_solver.into(),
            },
            properties: self.properties,
            allow_extension: self.allow_extension,
        }
    }

    /// File stem shared by every output of this run.
    pub fn stem(&self) -> String {
        let c = self.study_config();
        format!("{}_{}_{}", c.problem, c.method, c.domain)
    }

    fn set(&mut self, line: usize, key: &str, value: &str) -> Result<(), ConfigError> {
        let bad = || ConfigError::BadValue { line, key: key.to_string(), value: value.to_string() };
        let norm = key.replace('-', "_");
        match norm.as_str() {
            "problem" => self.problem = ProblemArg::from_str(value, true).map_err(|_| bad())?,
            "method" => self.method = MethodArg::from_str(value, true).map_err(|_| bad())?,
            "domain" => self.domain = DomainArg::from_str(value, true).map_err(|_| bad())?,
            "format" => self.format = Format::from_str(value, true).map_err(|_| bad())?,
            "linear_solver" => self.linear_solver = SolverArg::from_str(value, true).map_err(|_| bad())?,
            "levels" => self.levels = value.parse().map_err(|_| bad())?,
            "max_iter" => self.max_iter = value.parse().map_err(|_| bad())?,
            "threads" => self.threads = value.parse().map_err(|_| bad())?,
            "newton_tol" => self.newton_tol = value.parse().map_err(|_| bad())?,
            "out" => self.out = PathBuf::from(value),
            "properties" => self.properties = parse_bool(value).ok_or_else(bad)?,
            "allow_extension" => self.allow_extension = parse_bool(value).ok_or_else(bad)?,
            "dump_mesh" => self.dump_mesh = parse_bool(value).ok_or_else(bad)?,
            _ => return Err(ConfigError::UnknownKey { line, key: key.to_string() }),
        }
        Ok(())
    }

    /// Applies every assignment in `text` on top of the current values.
    pub fn apply_file(&mut self, text: &str) -> Result<(), ConfigError> {
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (k, v) = content.split_once('=').ok_or(ConfigError::Syntax { line })?;
            let (k, v) = (k.trim(), v.trim());
            if k.is_empty() || v.is_empty() {
                return Err(ConfigError::Syntax { line });
            }
            self.set(line, k, v)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_values_and_comments() {
        let mut s = Settings::default();
        s.apply_file("# run\nproblem = vk\nmethod=Adini  # trailing\n\nnewton-tol = 1e-8\nproperties = yes\n").unwrap();
        assert_eq!(s.problem, ProblemArg::Vk);
        assert_eq!(s.method, MethodArg::Adini);
        assert_eq!(s.newton_tol, 1e-8);
        assert!(s.properties);
        assert_eq!(s.stem(), "vk_adini_square");
    }

    #[test]
    fn errors_name_the_line() {
        let mut s = Settings::default();
        assert_eq!(s.apply_file("levels = 3\nbogus\n"), Err(ConfigError::Syntax { line: 2 }));
        assert_eq!(s.apply_file("colour = red"), Err(ConfigError::UnknownKey { line: 1, key: "colour".into() }));
        assert!(matches!(s.apply_file("levels = many"), Err(ConfigError::BadValue { line: 1, .. })));
        assert_eq!(s.levels, 3);
    }
}
