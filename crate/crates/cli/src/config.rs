//! Sweep configuration: built-in defaults, `key = value` files and flags.

use std::collections::HashSet;
use std::path::PathBuf;
use std::str::FromStr;

use num_complex::Complex64;
use quasiherm_core::{linspace, MetricParams, PencilFamily, DEFAULT_KIND_PROBE, DEFAULT_TOL};

use crate::error::CliError;

/// `count` evenly spaced points on `[start, stop]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl Grid {
    pub fn points(&self) -> Vec<f64> {
        linspace(self.start, self.stop, self.count)
    }
}

impl FromStr for Grid {
    type Err = String;

    /// `START:STOP:COUNT`.
    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').map(str::trim).collect();
        let [start, stop, count] = parts[..] else {
            return Err(format!("grid `{s}` is not START:STOP:COUNT"));
        };
        Ok(Grid {
            start: parse_real(start)?,
            stop: parse_real(stop)?,
            count: count
                .parse()
                .map_err(|_| format!("grid count `{count}` is not a non-negative integer"))?,
        })
    }
}

/// Everything a command needs, after merging defaults, config file and flags.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub family: PencilFamily,
    pub lambda: f64,
    pub grid: Grid,
    pub tol: f64,
    pub out: Option<PathBuf>,
    /// Worker count; `None` uses the available parallelism.
    pub threads: Option<usize>,
    pub gnuplot: bool,
    /// `metric`: parameters of the general metric.
    pub params: MetricParams,
    /// `ep`: explicit bracket instead of a scan over the grid.
    pub bracket: Option<(f64, f64)>,
    /// `ep`: offset used to tell first from second kind.
    pub kind_probe: f64,
    /// `evolve`: coupling of the evolved Hamiltonian.
    pub eta: f64,
    /// `evolve`: initial state; `None` is the first basis vector.
    pub state: Option<Vec<Complex64>>,
    pub tmax: f64,
    /// `evolve`: number of time intervals, giving `steps + 1` samples.
    pub steps: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            family: PencilFamily::NonHermitian,
            lambda: 1.0,
            grid: Grid {
                start: -2.0,
                stop: 2.0,
                count: 81,
            },
            tol: DEFAULT_TOL,
            out: None,
            threads: None,
            gnuplot: false,
            params: MetricParams::interface(),
            bracket: None,
            kind_probe: DEFAULT_KIND_PROBE,
            eta: 0.5,
            state: None,
            tmax: 10.0,
            steps: 100,
        }
    }
}

/// A partial configuration, as read from one source.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub family: Option<PencilFamily>,
    pub lambda: Option<f64>,
    pub grid: Option<Grid>,
    pub tol: Option<f64>,
    pub out: Option<PathBuf>,
    pub threads: Option<usize>,
    pub gnuplot: Option<bool>,
    pub params: Option<MetricParams>,
    pub bracket: Option<(f64, f64)>,
    pub kind_probe: Option<f64>,
    pub eta: Option<f64>,
    pub state: Option<Vec<Complex64>>,
    pub tmax: Option<f64>,
    pub steps: Option<usize>,
}

impl SweepConfig {
    /// Defaults, then `file`, then `flags`; the result is validated.
    pub fn resolve(file: Option<&Overrides>, flags: &Overrides) -> Result<Self, CliError> {
        let mut cfg = SweepConfig::default();
        if let Some(file) = file {
            cfg.apply(file);
        }
        cfg.apply(flags);
        cfg.validate()?;
        Ok(cfg)
    }

    fn apply(&mut self, o: &Overrides) {
        macro_rules! take {
            ($($field:ident),*) => {
                $(if let Some(v) = &o.$field {
                    self.$field = v.clone();
                })*
            };
        }
        take!(family, lambda, grid, tol, gnuplot, params, kind_probe, eta, tmax, steps);
        if o.out.is_some() {
            self.out.clone_from(&o.out);
        }
        if o.threads.is_some() {
            self.threads = o.threads;
        }
        if o.bracket.is_some() {
            self.bracket = o.bracket;
        }
        if o.state.is_some() {
            self.state.clone_from(&o.state);
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |msg: String| Err(CliError::Config(msg));
        let Grid { start, stop, count } = self.grid;
        if count < 2 {
            return bad(format!("grid count must be at least 2, got {count}"));
        }
        if !(start.is_finite() && stop.is_finite() && start < stop) {
            return bad(format!(
                "grid needs finite start < stop, got {start}:{stop}"
            ));
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return bad(format!("tol must be positive, got {}", self.tol));
        }
        if !self.lambda.is_finite() {
            return bad("lambda must be finite".into());
        }
        if self.threads == Some(0) {
            return bad("threads must be at least 1".into());
        }
        if !(self.kind_probe > 0.0 && self.kind_probe.is_finite()) {
            return bad(format!(
                "kind_probe must be positive, got {}",
                self.kind_probe
            ));
        }
        if let Some((lo, hi)) = self.bracket {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return bad(format!("bracket needs finite lo < hi, got {lo}:{hi}"));
            }
        }
        if !self.eta.is_finite() {
            return bad("eta must be finite".into());
        }
        if !(self.tmax > 0.0 && self.tmax.is_finite()) {
            return bad(format!("tmax must be positive, got {}", self.tmax));
        }
        if self.steps == 0 {
            return bad("steps must be at least 1".into());
        }
        if self.gnuplot && self.out.is_none() {
            return bad("gnuplot output needs --out".into());
        }
        Ok(())
    }

    /// Evaluation times `0, tmax/steps, …, tmax` of `evolve`.
    pub fn times(&self) -> Vec<f64> {
        linspace(0.0, self.tmax, self.steps + 1)
    }
}

/// Parses a config file: one `key = value` per line, `#` starts a comment.
pub fn parse_config(text: &str) -> Result<Overrides, CliError> {
    let mut o = Overrides::default();
    let mut seen = HashSet::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| CliError::Config(format!("line {}: {msg}", n + 1));
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| err(format!("expected `key = value`, got `{line}`")))?;
        let (key, value) = (key.trim(), value.trim());
        if !seen.insert(key.to_string()) {
            return Err(err(format!("duplicate key `{key}`")));
        }
        set_key(&mut o, key, value).map_err(err)?;
    }
    Ok(o)
}

fn set_key(o: &mut Overrides, key: &str, value: &str) -> Result<(), String> {
    match key {
        "family" => o.family = Some(parse_family(value)?),
        "lambda" => o.lambda = Some(parse_real(value)?),
        "grid" => o.grid = Some(value.parse()?),
        "tol" => o.tol = Some(parse_real(value)?),
        "out" => o.out = Some(PathBuf::from(value)),
        "threads" => {
            o.threads = Some(
                value
                    .parse()
                    .map_err(|_| format!("threads `{value}` is not an integer"))?,
            )
        }
        "gnuplot" => {
            o.gnuplot = Some(
                value
                    .parse()
                    .map_err(|_| format!("gnuplot `{value}` is not true or false"))?,
            )
        }
        "params" => o.params = Some(parse_params(value)?),
        "bracket" => o.bracket = Some(parse_bracket(value)?),
        "kind_probe" => o.kind_probe = Some(parse_real(value)?),
        "eta" => o.eta = Some(parse_real(value)?),
        "state" => o.state = Some(parse_state(value)?),
        "tmax" => o.tmax = Some(parse_real(value)?),
        "steps" => {
            o.steps = Some(
                value
                    .parse()
                    .map_err(|_| format!("steps `{value}` is not an integer"))?,
            )
        }
        other => return Err(format!("unknown key `{other}`")),
    }
    Ok(())
}

pub fn parse_real(s: &str) -> Result<f64, String> {
    let x: f64 = s
        .trim()
        .parse()
        .map_err(|_| format!("`{s}` is not a number"))?;
    if x.is_finite() {
        Ok(x)
    } else {
        Err(format!("`{s}` is not finite"))
    }
}

pub fn parse_family(s: &str) -> Result<PencilFamily, String> {
    s.parse().map_err(|e: quasiherm_core::Error| e.to_string())
}

/// `c,d,f,g`.
pub fn parse_params(s: &str) -> Result<MetricParams, String> {
    let xs = s
        .split(',')
        .map(parse_real)
        .collect::<Result<Vec<_>, _>>()?;
    match xs[..] {
        [c, d, f, g] => Ok(MetricParams::new(c, d, f, g)),
        _ => Err(format!("params `{s}` must be four numbers c,d,f,g")),
    }
}

/// `LO:HI`.
pub fn parse_bracket(s: &str) -> Result<(f64, f64), String> {
    match s.split_once(':') {
        Some((lo, hi)) => Ok((parse_real(lo)?, parse_real(hi)?)),
        None => Err(format!("bracket `{s}` is not LO:HI")),
    }
}

/// Comma separated complex amplitudes such as `1`, `0.5-0.25i`, `-i`, `2e-3i`.
pub fn parse_state(s: &str) -> Result<Vec<Complex64>, String> {
    s.split(',').map(parse_complex).collect()
}

pub fn parse_complex(s: &str) -> Result<Complex64, String> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || format!("`{s}` is not a complex number");
    let Some(body) = t.strip_suffix(['i', 'j']) else {
        return Ok(Complex64::new(parse_real(&t).map_err(|_| bad())?, 0.0));
    };
    // split before the last sign that is not leading and not an exponent sign
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => "1",
        "-" => "-1",
        other => other,
    };
    let re = parse_real(re).map_err(|_| bad())?;
    let im = parse_real(im).map_err(|_| bad())?;
    Ok(Complex64::new(re, im))
}
