//! Scenario files, report files and the text rendering used by the
//! `tanbundle` binary.

use std::fmt::Write as _;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use tanbundle::paperlib::{CheckRecord, Report, ScenarioSpec, Summary};

pub const TOOL: &str = "tanbundle";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Engine(#[from] tanbundle::Error),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl CliError {
    /// 2 for malformed input, 3 for evaluation at a bad point.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Engine(e) if e.is_domain_error() => 3,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

pub fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn write(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Parses a TOML scenario. A missing `name` defaults to `default_name`.
pub fn parse_scenario(text: &str, default_name: &str) -> Result<ScenarioSpec> {
    let mut table: toml::Table = text.parse().map_err(|e: toml::de::Error| CliError::Parse(e.to_string()))?;
    table
        .entry("name")
        .or_insert_with(|| toml::Value::String(default_name.to_string()));
    table
        .try_into()
        .map_err(|e: toml::de::Error| CliError::Parse(e.to_string()))
}

pub fn load_scenario(path: &Path) -> Result<ScenarioSpec> {
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("scenario");
    parse_scenario(&read(path)?, stem).map_err(|e| match e {
        CliError::Parse(msg) => CliError::Parse(format!("{}: {msg}", path.display())),
        other => other,
    })
}

pub fn scenario_to_toml(spec: &ScenarioSpec) -> Result<String> {
    toml::to_string(spec).map_err(|e| CliError::Parse(e.to_string()))
}

/// Hex SHA-256 of the scenario's canonical JSON.
pub fn scenario_hash(spec: &ScenarioSpec) -> String {
    let json = serde_json::to_string(spec).expect("scenario serialises");
    hex::encode(Sha256::digest(json.as_bytes()))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub tool: String,
    pub version: String,
    /// Scenario name, or `suite`.
    pub scenario: String,
    pub scenario_sha256: String,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub filter: Option<String>,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportFile {
    pub metadata: Metadata,
    pub records: Vec<CheckRecord>,
    pub summary: Summary,
}

fn now() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
}

impl ReportFile {
    pub fn for_scenario(spec: &ScenarioSpec, seed: u64, report: Report) -> Self {
        Self::new(spec.name.clone(), scenario_hash(spec), seed, None, report)
    }

    pub fn for_suite(seed: u64, filter: Option<&str>, report: Report) -> Self {
        let key = format!("suite:{seed}:{}", filter.unwrap_or(""));
        let hash = hex::encode(Sha256::digest(key.as_bytes()));
        Self::new("suite".into(), hash, seed, filter.map(str::to_string), report)
    }

    fn new(scenario: String, scenario_sha256: String, seed: u64, filter: Option<String>, report: Report) -> Self {
        ReportFile {
            metadata: Metadata {
                tool: TOOL.into(),
                version: VERSION.into(),
                scenario,
                scenario_sha256,
                seed,
                filter,
                timestamp: now(),
            },
            records: report.records,
            summary: report.summary,
        }
    }

    pub fn ok(&self) -> bool {
        self.records.iter().all(|r| r.pass || !r.gating)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let m = &self.metadata;
        let _ = writeln!(out, "{} {}  scenario {}  seed {}", m.tool, m.version, m.scenario, m.seed);
        let width = self.records.iter().map(|r| r.id.len()).max().unwrap_or(0);
        for r in &self.records {
            let _ = writeln!(
                out,
                "{:<8} {:<width$}  {:.3e} {} {:.1e}",
                r.status(),
                r.id,
                r.residual,
                r.comparison.symbol(),
                r.tolerance
            );
        }
        let s = &self.summary;
        for c in &s.classifications {
            let _ = writeln!(
                out,
                "verdict {}: {}  (max ‖τ‖ {:.3e}, max ‖τ₂‖ {:.3e}, {} samples)",
                c.map, c.result.verdict, c.result.max_tension, c.result.max_bitension, c.result.samples
            );
        }
        for f in &s.findings {
            let _ = writeln!(out, "finding {}: {}", f.topic, f.outcome);
        }
        let _ = writeln!(
            out,
            "{} checks: {} passed, {} failed, {} mismatches (non-gating)",
            s.checks, s.passed, s.failed, s.mismatches
        );
        out
    }
}

/// Parses `1.5,0` into coordinates.
pub fn parse_point(text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|e| CliError::Parse(format!("bad coordinate `{t}`: {e}")))
        })
        .collect()
}

pub fn format_vector(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{:.10}", x + 0.0)).collect();
    format!("({})", parts.join(", "))
}

#[cfg(test)]
mod tests {
    use super::*;
    use tanbundle::paperlib::{example, verify, EXAMPLES};

    #[test]
    fn shipped_scenario_matches_builtin() {
        let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios/ex4_1.toml");
        assert_eq!(load_scenario(&path).unwrap(), example("ex4_1").unwrap());
    }

    #[test]
    fn builtin_scenarios_survive_toml() {
        for name in EXAMPLES {
            let spec = example(name).unwrap();
            let text = scenario_to_toml(&spec).unwrap();
            assert_eq!(parse_scenario(&text, "x").unwrap(), spec, "{name}");
        }
    }

    #[test]
    fn missing_name_defaults() {
        let s = parse_scenario("[base]\nmetric = \"sphere\"\n[function]\nvalue = \"theta\"\n[map]\nselector = \"pi_alpha\"\n", "dflt").unwrap();
        assert_eq!(s.name, "dflt");
        assert_eq!(s.samples.count, 4);
    }

    #[test]
    fn unknown_selector_is_rejected() {
        assert!(parse_scenario("[map]\nselector = \"nope\"\n", "x").is_err());
    }

    #[test]
    fn report_round_trip() {
        let spec = example("ex5_2").unwrap();
        let s = spec.build().unwrap();
        let file = ReportFile::for_scenario(&spec, s.seed, verify(&s).unwrap());
        let back = ReportFile::from_json(&file.to_json()).unwrap();
        assert_eq!(back, file);
        assert_eq!(back.summary, file.summary);
    }

    #[test]
    fn hash_tracks_content() {
        let a = example("ex5_1").unwrap();
        let mut b = a.clone();
        assert_eq!(scenario_hash(&a), scenario_hash(&b));
        b.function.constants.insert("a1".into(), 2.0);
        assert_ne!(scenario_hash(&a), scenario_hash(&b));
        assert_eq!(scenario_hash(&a).len(), 64);
    }

    #[test]
    fn points_parse() {
        assert_eq!(parse_point("1.5, -2").unwrap(), vec![1.5, -2.0]);
        assert!(parse_point("1,,2").is_err());
        assert_eq!(format_vector(&[-0.0, 1.0]), "(0.0000000000, 1.0000000000)");
    }
}
