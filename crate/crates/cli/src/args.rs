//! Command-line syntax.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use quasiherm_core::{MetricParams, PencilFamily};

use crate::config::{
    parse_bracket, parse_family, parse_params, parse_real, parse_state, Grid, Overrides,
};

// an alias keeps clap from reading the field as a repeated flag
type Amplitudes = Vec<Complex64>;

#[derive(Debug, Parser)]
#[command(
    name = "quasiherm",
    version,
    about = "Parameter sweeps over four-site quasi-Hermitian lattice models, written as CSV"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Spectrum,
    Metric,
    Ep,
    Hermitize,
    Evolve,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Eigenvalues along the grid: param, ReE1..ReE4, ImE1..ImE4, reality_flag
    Spectrum {
        #[command(flatten)]
        shared: Shared,
    },
    /// Metric eigenvalues along the grid: param, theta_eig1..theta_eig4, is_pd
    Metric {
        #[command(flatten)]
        shared: Shared,
        /// Metric family parameters (default 0,0,1,0, the diagonal metric)
        #[arg(long, value_name = "c,d,f,g", value_parser = parse_params, allow_hyphen_values = true)]
        params: Option<MetricParams>,
    },
    /// Exceptional points: param_value, kind, level_pair, residual_gap
    Ep {
        #[command(flatten)]
        shared: Shared,
        /// Search only this bracket instead of scanning the grid
        #[arg(long, value_name = "LO:HI", value_parser = parse_bracket, allow_hyphen_values = true)]
        bracket: Option<(f64, f64)>,
        /// Offset used to classify the kind of each exceptional point
        #[arg(long, value_name = "R", value_parser = parse_real)]
        kind_probe: Option<f64>,
    },
    /// Dyson-map diagnostics: param, hermiticity_defect, isospectral_defect, theta_condition_number
    Hermitize {
        #[command(flatten)]
        shared: Shared,
    },
    /// Norm histories: t, theta_norm, naive_norm, mapped_norm
    Evolve {
        #[command(flatten)]
        shared: Shared,
        /// Coupling of the evolved Hamiltonian
        #[arg(long, value_name = "R", value_parser = parse_real, allow_hyphen_values = true)]
        eta: Option<f64>,
        /// Initial amplitudes (default 1,0,0,0)
        #[arg(long, value_name = "c1,c2,c3,c4", value_parser = parse_state, allow_hyphen_values = true)]
        state: Option<Amplitudes>,
        /// Final time (default 10)
        #[arg(long, value_name = "R", value_parser = parse_real)]
        tmax: Option<f64>,
        /// Number of time steps (default 100)
        #[arg(long, value_name = "N")]
        steps: Option<usize>,
    },
}

#[derive(Debug, Args)]
pub struct Shared {
    /// hermitian, nonhermitian or unified (default nonhermitian)
    #[arg(long, value_parser = parse_family)]
    pub family: Option<PencilFamily>,
    /// Interaction shape (default 1)
    #[arg(long, value_name = "R", value_parser = parse_real, allow_hyphen_values = true)]
    pub lambda: Option<f64>,
    /// Coupling grid (default -2:2:81)
    #[arg(long, value_name = "START:STOP:COUNT", allow_hyphen_values = true)]
    pub grid: Option<Grid>,
    /// Numerical tolerance (default 1e-9)
    #[arg(long, value_name = "R", value_parser = parse_real)]
    pub tol: Option<f64>,
    /// Write the table here instead of standard output
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// key = value file; flags take precedence over it
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Worker threads (default: available parallelism)
    #[arg(long, value_name = "N")]
    pub threads: Option<usize>,
    /// Also write a gnuplot script next to the --out file
    #[arg(long)]
    pub gnuplot: bool,
}

impl Command {
    pub fn kind(&self) -> CommandKind {
        match self {
            Command::Spectrum { .. } => CommandKind::Spectrum,
            Command::Metric { .. } => CommandKind::Metric,
            Command::Ep { .. } => CommandKind::Ep,
            Command::Hermitize { .. } => CommandKind::Hermitize,
            Command::Evolve { .. } => CommandKind::Evolve,
        }
    }

    pub fn shared(&self) -> &Shared {
        match self {
            Command::Spectrum { shared }
            | Command::Metric { shared, .. }
            | Command::Ep { shared, .. }
            | Command::Hermitize { shared }
            | Command::Evolve { shared, .. } => shared,
        }
    }

    /// The settings given on the command line.
    pub fn overrides(&self) -> Overrides {
        let s = self.shared();
        let mut o = Overrides {
            family: s.family,
            lambda: s.lambda,
            grid: s.grid,
            tol: s.tol,
            out: s.out.clone(),
            threads: s.threads,
            gnuplot: s.gnuplot.then_some(true),
            ..Default::default()
        };
        match self {
            Command::Metric { params, .. } => o.params = *params,
            Command::Ep {
                bracket,
                kind_probe,
                ..
            } => {
                o.bracket = *bracket;
                o.kind_probe = *kind_probe;
            }
            Command::Evolve {
                eta,
                state,
                tmax,
                steps,
                ..
            } => {
                o.eta = *eta;
                o.state.clone_from(state);
                o.tmax = *tmax;
                o.steps = *steps;
            }
            Command::Spectrum { .. } | Command::Hermitize { .. } => {}
        }
        o
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn clap_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn negative_values_are_accepted() {
        let cli = Cli::try_parse_from([
            "quasiherm",
            "evolve",
            "--grid",
            "-2:2:5",
            "--lambda",
            "-1",
            "--eta",
            "-0.5",
            "--state",
            "-i,0,0,1",
        ])
        .unwrap();
        let o = cli.command.overrides();
        assert_eq!(o.grid.unwrap().start, -2.0);
        assert_eq!(o.lambda, Some(-1.0));
        assert_eq!(o.eta, Some(-0.5));
        assert_eq!(o.state.unwrap()[0], Complex64::new(0.0, -1.0));
    }

    #[test]
    fn unset_flags_stay_unset() {
        let cli = Cli::try_parse_from(["quasiherm", "spectrum"]).unwrap();
        assert_eq!(cli.command.overrides(), Overrides::default());
    }
}
