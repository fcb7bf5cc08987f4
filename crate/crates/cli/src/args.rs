//! Command-line flags. Flags override values from `--config`.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::commands::Command;
use crate::config::{Format, RunConfig};
use crate::CliError;

#[derive(Debug, Parser)]
#[command(name = "hbarcon", version, about = "Exact ħ-constraint analysis on extended phase space")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Sub,
    #[command(flatten)]
    pub options: Options,
}

#[derive(Debug, Subcommand)]
pub enum Sub {
    /// Evaluate pb, epb or moyal of two expressions.
    Bracket {
        #[arg(value_parser = ["pb", "epb", "moyal"])]
        kind: String,
        #[arg(allow_hyphen_values = true)]
        f: String,
        #[arg(allow_hyphen_values = true)]
        g: String,
    },
    /// Lift H to extended phase space, with its ħ-series.
    Lift,
    /// Run the constraint iteration and report the Dirac analysis.
    Dirac,
    /// Compare constrained evolution with Moyal evolution.
    Compare,
    /// Solve for the ħ-series coefficients.
    Coeffs,
    /// Wigner transform checks for an oscillator eigenstate.
    Wigner,
}

impl Sub {
    pub fn to_command(&self) -> Command {
        match self {
            Sub::Bracket { kind, f, g } => Command::Bracket {
                kind: kind.clone(),
                f: f.clone(),
                g: g.clone(),
            },
            Sub::Lift => Command::Lift,
            Sub::Dirac => Command::Dirac,
            Sub::Compare => Command::Compare,
            Sub::Coeffs => Command::Coeffs,
            Sub::Wigner => Command::Wigner,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Switch {
    On,
    Off,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Json,
    Text,
    Csv,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Json => Format::Json,
            FormatArg::Text => Format::Text,
            FormatArg::Csv => Format::Csv,
        }
    }
}

#[derive(Debug, Default, Args)]
pub struct Options {
    /// JSON run configuration.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Degrees of freedom.
    #[arg(long, global = true)]
    pub n: Option<usize>,
    /// Rows of ω separated by `;`, entries by `,`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub omega: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub hamiltonian: Option<String>,
    /// `symbolic` or a positive number.
    #[arg(long, global = true)]
    pub hbar: Option<String>,
    /// Truncation order in ħ.
    #[arg(long, global = true)]
    pub order: Option<u32>,
    #[arg(long, global = true, value_enum)]
    pub ghosts: Option<Switch>,
    /// Comma-separated observables.
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true)]
    pub observables: Option<Vec<String>>,
    /// Comma-separated ξ coefficients.
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true)]
    pub xi: Option<Vec<String>>,
    #[arg(long, global = true)]
    pub max_stages: Option<usize>,
    #[arg(long, global = true)]
    pub basis_degree: Option<u32>,
    /// Hermite level for `wigner`.
    #[arg(long, global = true)]
    pub level: Option<usize>,
    #[arg(long, global = true)]
    pub nq: Option<usize>,
    #[arg(long, global = true)]
    pub np: Option<usize>,
    #[arg(long, global = true)]
    pub half_width: Option<f64>,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<FormatArg>,
}

fn parse_omega(text: &str) -> Vec<Vec<String>> {
    text.split(';')
        .map(|row| row.split(',').map(|e| e.trim().to_string()).collect())
        .collect()
}

impl Options {
    /// The config file, if any, with flags applied on top.
    pub fn resolve(&self) -> Result<RunConfig, CliError> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::from_json(&std::fs::read_to_string(path)?)?,
            None => RunConfig::default(),
        };
        if let Some(n) = self.n {
            cfg.n = n;
        }
        if let Some(o) = &self.omega {
            cfg.omega = Some(parse_omega(o));
        }
        if let Some(h) = &self.hamiltonian {
            cfg.hamiltonian = Some(h.clone());
        }
        if let Some(h) = &self.hbar {
            cfg.hbar = h.clone();
        }
        if self.order.is_some() {
            cfg.order = self.order;
        }
        if let Some(g) = self.ghosts {
            cfg.ghosts = g == Switch::On;
        }
        if let Some(o) = &self.observables {
            cfg.observables = o.clone();
        }
        if let Some(x) = &self.xi {
            cfg.xi = Some(x.clone());
        }
        if let Some(m) = self.max_stages {
            cfg.max_stages = m;
        }
        if self.basis_degree.is_some() {
            cfg.basis_degree = self.basis_degree;
        }
        if let Some(l) = self.level {
            cfg.grid.level = l;
        }
        if let Some(nq) = self.nq {
            cfg.grid.nq = nq;
        }
        if let Some(np) = self.np {
            cfg.grid.np = np;
        }
        if self.half_width.is_some() {
            cfg.grid.half_width = self.half_width;
        }
        if self.out.is_some() {
            cfg.out = self.out.clone();
        }
        if let Some(f) = self.format {
            cfg.format = f.into();
        }
        Ok(cfg)
    }
}
