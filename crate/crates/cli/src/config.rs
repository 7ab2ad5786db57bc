//! Command-line definition and flat `key=value` config files.

use std::ffi::OsString;
use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::CliError;

#[derive(Debug, Parser, Serialize)]
#[command(name = "mwbody", version, about = "Mean width bodies, affine surface areas and cone-measure entropies")]
#[command(args_override_self = true)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Serialize)]
pub struct Global {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Output file; stdout when omitted.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Flat key=value file supplying defaults for any long flag.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Worker threads for parallel sections; results do not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Log verbosity (-v info, -vv debug).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    #[serde(skip)]
    pub verbose: u8,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Square,
    Ball,
    Discriminate,
}

fn parse_point(s: &str) -> Result<[f64; 2], String> {
    let (x, y) = s.split_once(',').ok_or("expected <x>,<y>")?;
    let parse = |v: &str| v.trim().parse::<f64>().map_err(|e| format!("'{v}': {e}"));
    Ok([parse(x)?, parse(y)?])
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(tag = "subcommand", rename_all = "lowercase")]
pub enum Command {
    /// Polar body, volumes and the polar radial function.
    Polar {
        #[arg(long)]
        body: String,
        #[arg(long, default_value_t = 360)]
        grid: usize,
    },
    /// f-weighted width w_f(x) and the ray limit along x.
    Wf {
        #[arg(long)]
        body: String,
        #[arg(long)]
        weight: String,
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        point: [f64; 2],
    },
    /// Sampled mean width body K_f[t].
    Mwbody {
        #[arg(long)]
        body: String,
        #[arg(long)]
        weight: String,
        #[arg(long)]
        t: f64,
        #[arg(long, default_value_t = 720)]
        grid: usize,
        /// Also run the convexity test.
        #[arg(long)]
        convexity: bool,
        /// Candidate nonconvexity witness for the convexity test.
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        witness: Option<[f64; 2]>,
    },
    /// W_f(M) − W_f(K) from the spherical and the region formulas.
    Widthdiff {
        #[arg(long)]
        body: String,
        #[arg(long)]
        outer: String,
        #[arg(long)]
        weight: String,
    },
    /// Entropy identity for nested bodies K ⊆ M.
    Entcheck {
        #[arg(long)]
        body: String,
        #[arg(long)]
        outer: String,
        #[arg(long, default_value_t = 4096)]
        grid: usize,
    },
    /// L_p-affine surface areas.
    Asp {
        #[arg(long)]
        body: String,
        #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true, action = clap::ArgAction::Set)]
        p: Vec<f64>,
        #[arg(long, default_value_t = 4096)]
        grid: usize,
    },
    /// Cone-measure divergences, Ω_K, Ω_{K°} and the identity residuals.
    Entropy {
        #[arg(long)]
        body: String,
        #[arg(long, default_value_t = 4096.0)]
        pmax: f64,
        #[arg(long, default_value_t = 4096)]
        grid: usize,
        #[arg(long, default_value_t = 1e-3)]
        tol: f64,
    },
    /// Ω_K extrapolated over p = pmin, 2 pmin, ..., pmax.
    Omega {
        #[arg(long)]
        body: String,
        #[arg(long, default_value_t = 16.0)]
        pmin: f64,
        #[arg(long, default_value_t = 4096.0)]
        pmax: f64,
        #[arg(long, default_value_t = 4096)]
        grid: usize,
    },
    /// Volume expansion of K_f[t] against its predicted limit.
    Converge {
        #[arg(long)]
        body: String,
        #[arg(long)]
        weight: String,
        #[arg(long, default_value_t = 1e-7)]
        tmin: f64,
        #[arg(long, default_value_t = 1e-4)]
        tmax: f64,
        #[arg(long, default_value_t = 4)]
        steps: usize,
        #[arg(long, default_value_t = 2048)]
        grid: usize,
        /// Keep the initial grid instead of doubling to convergence.
        #[arg(long)]
        no_refine: bool,
        /// Allowed relative error of the extrapolated limit.
        #[arg(long, default_value_t = 0.02)]
        tol: f64,
    },
    /// Worked examples with closed-form answers.
    Gallery {
        #[arg(value_enum, default_value_t = Suite::Square)]
        suite: Suite,
        #[arg(long, default_value_t = 2.0)]
        r: f64,
        #[arg(long, default_value_t = 3.0, allow_negative_numbers = true)]
        beta: f64,
        #[arg(long, default_value_t = 1e-7)]
        tmin: f64,
        #[arg(long, default_value_t = 1e-4)]
        tmax: f64,
        #[arg(long, default_value_t = 4)]
        steps: usize,
        #[arg(long, default_value_t = 2048)]
        grid: usize,
        #[arg(long, default_value_t = 0.02)]
        tol: f64,
    },
    /// Pointwise volume ratio at one boundary point.
    Probe {
        #[arg(long)]
        body: String,
        #[arg(long)]
        weight: String,
        /// Outer normal angle of the boundary point.
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        theta: f64,
        #[arg(long, default_value_t = 1e-8)]
        tmin: f64,
        #[arg(long, default_value_t = 1e-3)]
        tmax: f64,
        #[arg(long, default_value_t = 6)]
        steps: usize,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Polar { .. } => "polar",
            Command::Wf { .. } => "wf",
            Command::Mwbody { .. } => "mwbody",
            Command::Widthdiff { .. } => "widthdiff",
            Command::Entcheck { .. } => "entcheck",
            Command::Asp { .. } => "asp",
            Command::Entropy { .. } => "entropy",
            Command::Omega { .. } => "omega",
            Command::Converge { .. } => "converge",
            Command::Gallery { .. } => "gallery",
            Command::Probe { .. } => "probe",
        }
    }
}

const SUBCOMMANDS: [&str; 11] = [
    "polar", "wf", "mwbody", "widthdiff", "entcheck", "asp", "entropy", "omega", "converge", "gallery", "probe",
];

fn config_path(args: &[OsString]) -> Option<PathBuf> {
    let mut iter = args.iter().skip(1);
    while let Some(a) = iter.next() {
        let s = a.to_string_lossy();
        if s == "--config" {
            return iter.next().map(PathBuf::from);
        }
        if let Some(p) = s.strip_prefix("--config=") {
            return Some(PathBuf::from(p));
        }
    }
    None
}

/// `key=value` lines become `--key=value`; `key=true` becomes `--key` and
/// `key=false` is dropped. Blank lines and `#` comments are skipped.
pub fn parse_config_file(text: &str) -> Result<Vec<OsString>, CliError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| CliError::Validation(format!("config line {}: expected key=value, got '{line}'", i + 1)))?;
        let (key, value) = (key.trim(), value.trim());
        if key.is_empty() || key == "config" {
            return Err(CliError::Validation(format!("config line {}: invalid key '{key}'", i + 1)));
        }
        let flag = key.replace('_', "-");
        match value {
            "true" => out.push(format!("--{flag}").into()),
            "false" => {}
            _ => out.push(format!("--{flag}={value}").into()),
        }
    }
    Ok(out)
}

/// Inserts config-file flags right after the subcommand, so explicit flags
/// given on the command line override them.
pub fn expand_args(args: Vec<OsString>) -> Result<Vec<OsString>, CliError> {
    let Some(path) = config_path(&args) else {
        return Ok(args);
    };
    let text = fs::read_to_string(&path).map_err(|e| CliError::io(&path, e))?;
    let extra = parse_config_file(&text)?;
    let pos = args
        .iter()
        .skip(1)
        .position(|a| SUBCOMMANDS.contains(&a.to_string_lossy().as_ref()))
        .map(|i| i + 1)
        .ok_or_else(|| CliError::Validation("a subcommand is required".into()))?;
    let mut out = args[..=pos].to_vec();
    out.extend(extra);
    out.extend_from_slice(&args[pos + 1..]);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn os(v: &[&str]) -> Vec<OsString> {
        v.iter().map(OsString::from).collect()
    }

    #[test]
    fn config_lines_become_flags() {
        let flags = parse_config_file("# run\nbody = ball:r=1\nno_refine=true\nconvexity=false\n\n").unwrap();
        assert_eq!(flags, os(&["--body=ball:r=1", "--no-refine"]));
        assert!(parse_config_file("body").is_err());
    }

    #[test]
    fn command_line_overrides_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.cfg");
        fs::write(&path, "body=ball:r=1\np=0,1\n").unwrap();
        let args = os(&["mwbody", "asp", "--config", path.to_str().unwrap(), "--p", "2"]);
        let expanded = expand_args(args).unwrap();
        let cli = Cli::try_parse_from(expanded).unwrap();
        match cli.command {
            Command::Asp { body, p, .. } => {
                assert_eq!(body, "ball:r=1");
                assert_eq!(p, vec![2.0]);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn negative_values_parse() {
        let cli = Cli::try_parse_from(os(&["mwbody", "asp", "--body", "ball:r=1", "--p", "-1,1,inf"])).unwrap();
        let Command::Asp { p, .. } = cli.command else { panic!() };
        assert_eq!(p, vec![-1.0, 1.0, f64::INFINITY]);
        let cli = Cli::try_parse_from(os(&["mwbody", "wf", "--body", "ball:r=1", "--weight", "const:1", "--point", "-2,0.5"])).unwrap();
        let Command::Wf { point, .. } = cli.command else { panic!() };
        assert_eq!(point, [-2.0, 0.5]);
    }
}
