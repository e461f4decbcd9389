//! Command-line front end for the `spinboson` library: configuration,
//! experiment runners and result tables.

pub mod config;
pub mod experiments;
pub mod table;

use std::path::PathBuf;

use clap::Parser;

use config::{parse_schemes, ExperimentConfig, Format, KeyValues, Mode};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Model(#[from] spinboson::Error),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    /// 2 for configuration or input problems, 3 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Model(e) if e.is_numerical() => 3,
            _ => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Preset {
    Fig1a,
    Fig1b,
    Fig1c,
    Fig2,
}

impl Preset {
    pub fn text(self) -> &'static str {
        match self {
            Preset::Fig1a => include_str!("../presets/fig1a.conf"),
            Preset::Fig1b => include_str!("../presets/fig1b.conf"),
            Preset::Fig1c => include_str!("../presets/fig1c.conf"),
            Preset::Fig2 => include_str!("../presets/fig2.conf"),
        }
    }

    pub fn config(self) -> ExperimentConfig {
        ExperimentConfig::parse(self.text()).expect("shipped presets are valid")
    }
}

/// Spectrum, deviation and dynamics experiments for a two-state system coupled
/// to a damped oscillator.
#[derive(Debug, Parser)]
#[command(name = "spinboson", version)]
pub struct Args {
    pub mode: Mode,
    /// Flat `key = value` file or JSON; overrides the preset.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output file (stdout if absent).
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long, value_enum)]
    pub preset: Option<Preset>,
    /// Comma-separated schemes: exact18, simple, simple6, simple8, dsr.
    #[arg(long)]
    pub scheme: Option<String>,
    #[arg(long)]
    pub no_lamb_shift: bool,
}

/// Merge preset, config file and flags into one configuration.
pub fn resolve(args: &Args) -> Result<ExperimentConfig, CliError> {
    if args.config.is_none() && args.preset.is_none() {
        return Err(CliError::Config("one of --config or --preset is required".into()));
    }
    let mut kv = KeyValues::default();
    if let Some(p) = args.preset {
        kv.merge(KeyValues::parse(p.text())?);
    }
    if let Some(path) = &args.config {
        kv.merge(ExperimentConfig::load(path)?);
    }
    let declared = kv.get("mode").map(str::to_string);
    if let Some(m) = declared {
        if m != args.mode.name() {
            return Err(CliError::Config(format!(
                "mode '{}' requested but the configuration declares '{m}'",
                args.mode.name()
            )));
        }
    }
    kv.set("mode", args.mode.name());
    if let Some(list) = &args.scheme {
        parse_schemes(list)?;
        kv.set("schemes", list.clone());
    }
    if args.no_lamb_shift {
        kv.set("lamb_shift", "false");
    }
    if let Some(f) = args.format {
        kv.set("format", f.name());
    }
    if let Some(out) = &args.out {
        kv.set("out", out.display().to_string());
    }
    ExperimentConfig::from_key_values(&kv)
}

/// Render the outcome in the configured format.
pub fn render(config: &ExperimentConfig, outcome: &experiments::Outcome) -> String {
    match config.format {
        Format::Csv => outcome.table.to_csv(),
        Format::Json => {
            if let Some(rec) = &outcome.sidecar {
                let mut doc: serde_json::Value =
                    serde_json::from_str(&outcome.table.to_json()).expect("table JSON parses");
                doc["sidecar"] = serde_json::to_value(rec).expect("record serialises");
                let mut s = serde_json::to_string_pretty(&doc).expect("document serialises");
                s.push('\n');
                s
            } else {
                outcome.table.to_json()
            }
        }
    }
}

fn write(path: &PathBuf, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|source| CliError::Io {
        path: path.clone(),
        source,
    })
}

/// Run one invocation; returns the rendered output when no `--out` is given.
pub fn execute(args: &Args) -> Result<Option<String>, CliError> {
    let config = resolve(args)?;
    let outcome = experiments::run(&config)?;
    let text = render(&config, &outcome);
    match &config.out {
        None => Ok(Some(text)),
        Some(path) => {
            write(path, &text)?;
            if let Some(rec) = &outcome.sidecar {
                let mut json = serde_json::to_string_pretty(rec).expect("record serialises");
                json.push('\n');
                write(&path.with_extension("rates.json"), &json)?;
            }
            Ok(None)
        }
    }
}
