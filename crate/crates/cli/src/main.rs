use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use tanbundle::bundle::lift::{mus_gradient_metric, mus_sasaki_metric, sasaki_metric};
use tanbundle::paperlib::{cubic_ode_sides, example, map_fields, max_curvature, suite, verify, MapSelector, Scenario, ScenarioSpec, DEFAULT_SEED};
use tanbundle_cli::{format_vector, load_scenario, parse_point, write, CliError, ReportFile, Result};

#[derive(Parser)]
#[command(name = "tanbundle", version, about = "Checks closed-form tangent-bundle geometry against a generic jet engine")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every applicable check for a scenario
    Verify {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        output: Output,
    },
    /// Print τ at sample points, generic and closed form
    Tension {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        points: Points,
    },
    /// Print τ₂ at sample points, generic and closed form
    Bitension {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        points: Points,
    },
    /// Print max|R| of a lifted metric at sample points
    Curvature {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        points: Points,
        #[arg(long, value_enum, default_value_t = Lifted::MusGradient)]
        metric: Lifted,
        /// Flatness threshold on max|R|
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Run the builtin battery with a fixed seed
    Suite {
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Keep only checks whose id starts with this prefix
        #[arg(long)]
        filter: Option<String>,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Args)]
struct Input {
    /// Builtin example: ex4_1, ex4_2, ex5_1, ex5_2
    #[arg(long, conflicts_with = "scenario", required_unless_present = "scenario")]
    example: Option<String>,
    /// TOML scenario file
    #[arg(long)]
    scenario: Option<PathBuf>,
    /// Overrides the scenario's sampling seed
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    tol_harmonic: Option<f64>,
    #[arg(long)]
    tol_biharmonic: Option<f64>,
}

#[derive(Args)]
struct Output {
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args)]
struct Points {
    /// Comma-separated base or bundle coordinates; repeatable
    #[arg(long = "point")]
    points: Vec<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Machine,
}

#[derive(Clone, Copy, ValueEnum)]
enum Lifted {
    Sasaki,
    MusGradient,
    MusSasaki,
}

impl Input {
    fn spec(&self) -> Result<ScenarioSpec> {
        let mut spec = match (&self.example, &self.scenario) {
            (Some(name), _) => example(name)?,
            (None, Some(path)) => load_scenario(path)?,
            (None, None) => return Err(CliError::Parse("pass --example or --scenario".into())),
        };
        if let Some(t) = self.tol_harmonic {
            spec.tolerances.harmonic = t;
        }
        if let Some(t) = self.tol_biharmonic {
            spec.tolerances.biharmonic = t;
        }
        Ok(spec)
    }

    fn build(&self, points: Option<&Points>) -> Result<(ScenarioSpec, Scenario)> {
        let mut spec = self.spec()?;
        if let Some(p) = points.filter(|p| !p.points.is_empty()) {
            spec.samples.points = p.points.iter().map(|s| parse_point(s)).collect::<Result<_>>()?;
            spec.samples.count = 0;
        }
        let seed = self.seed.unwrap_or(spec.samples.seed);
        let s = spec.build_with_seed(seed)?;
        Ok((spec, s))
    }
}

fn emit(report: &ReportFile, output: &Output) -> Result<u8> {
    let text = match output.format {
        Format::Text => report.to_text(),
        Format::Machine => report.to_json(),
    };
    print!("{text}");
    if matches!(output.format, Format::Machine) {
        println!();
    }
    if let Some(path) = &output.out {
        write(path, &text)?;
    }
    Ok(if report.ok() { 0 } else { 1 })
}

fn fields(input: &Input, points: &Points, bitension: bool) -> Result<u8> {
    let (_, s) = input.build(Some(points))?;
    for p in &s.samples {
        for f in map_fields(&s, p)? {
            let (generic, norm, closed) = if bitension {
                (&f.bitension, f.bitension_norm, &f.closed_bitension)
            } else {
                (&f.tension, f.tension_norm, &f.closed_tension)
            };
            let name = if bitension { "τ₂" } else { "τ" };
            println!("{} at {}", f.map, format_vector(&f.point));
            println!("  {name} generic {}  ‖{name}‖ = {norm:.10e}", format_vector(generic));
            if let Some(c) = closed {
                println!("  {name} closed  {}", format_vector(c));
            }
        }
        if bitension && s.selector() == MapSelector::IdHatF {
            let m = s.dim() as f64;
            let o = cubic_ode_sides(&s.f, m, &p.x, 0)?;
            println!("  f‴ = {:+.10e}   (m/4)((f′)²)′ = {:+.10e}", o.lhs, o.rhs);
        }
    }
    Ok(0)
}

fn curvature(input: &Input, points: &Points, which: Lifted, tol: f64) -> Result<u8> {
    let (_, s) = input.build(Some(points))?;
    let (name, metric) = match which {
        Lifted::Sasaki => ("sasaki", sasaki_metric(&s.base)),
        Lifted::MusGradient => ("mus_gradient", mus_gradient_metric(&s.base, &s.f)),
        Lifted::MusSasaki => ("mus_sasaki", mus_sasaki_metric(&s.base, &s.f.clone().positive())?),
    };
    let mut worst = 0.0f64;
    for p in &s.samples {
        let c = p.coords();
        let r: f64 = max_curvature(&metric, &c)?;
        worst = worst.max(r);
        println!("{name} at {}  max|R| = {r:.6e}", format_vector(&c));
    }
    println!("{name}: {} at tolerance {tol:.1e}", if worst <= tol { "flat" } else { "non-flat" });
    Ok(0)
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Verify { input, output } => {
            let (spec, s) = input.build(None)?;
            let report = verify(&s)?;
            emit(&ReportFile::for_scenario(&spec, s.seed, report), &output)
        }
        Command::Tension { input, points } => fields(&input, &points, false),
        Command::Bitension { input, points } => fields(&input, &points, true),
        Command::Curvature {
            input,
            points,
            metric,
            tol,
        } => curvature(&input, &points, metric, tol),
        Command::Suite { seed, filter, output } => {
            let report = suite(seed, filter.as_deref())?;
            emit(&ReportFile::for_suite(seed, filter.as_deref(), report), &output)
        }
    }
}

fn exit_code(cli: Cli) -> u8 {
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code() as u8
        }
    }
}

fn main() -> ExitCode {
    ExitCode::from(exit_code(Cli::parse()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn code(args: &[&str]) -> u8 {
        let mut full = vec!["tanbundle"];
        full.extend_from_slice(args);
        exit_code(Cli::try_parse_from(full).unwrap())
    }

    fn scratch(name: &str, text: &str) -> PathBuf {
        let p = std::env::temp_dir().join(format!("tanbundle-{}-{name}", std::process::id()));
        std::fs::write(&p, text).unwrap();
        p
    }

    #[test]
    fn verify_ex4_1_passes() {
        assert_eq!(code(&["verify", "--example", "ex4_1"]), 0);
    }

    #[test]
    fn failing_claims_exit_one() {
        assert_eq!(code(&["verify", "--example", "ex5_1"]), 1);
        assert_eq!(code(&["verify", "--example", "ex4_2", "--format", "machine"]), 1);
    }

    #[test]
    fn unknown_example_is_a_parse_error() {
        assert_eq!(code(&["verify", "--example", "ex9_9"]), 2);
    }

    #[test]
    fn malformed_scenario_exits_two() {
        let p = scratch("bad.toml", "[base\nmetric = 1");
        assert_eq!(code(&["verify", "--scenario", p.to_str().unwrap()]), 2);
        let p = scratch("expr.toml", "[base]\nmetric = \"euclidean\"\ndim = 1\n[function]\nvalue = \"x1 +\"\n[map]\nselector = \"pi_alpha\"\n");
        assert_eq!(code(&["verify", "--scenario", p.to_str().unwrap()]), 2);
    }

    #[test]
    fn indefinite_metric_exits_three() {
        let p = scratch(
            "spd.toml",
            "[base]\nbounds = [{ lo = -2.0, hi = -1.0 }, {}]\nmetric = [[\"1\", \"0\"], [\"0\", \"x1\"]]\n\
             [function]\nvalue = \"x1\"\n[map]\nselector = \"pi_alpha\"\n",
        );
        assert_eq!(code(&["verify", "--scenario", p.to_str().unwrap()]), 3);
    }

    #[test]
    fn report_is_written_and_reads_back() {
        let out = std::env::temp_dir().join(format!("tanbundle-{}-report.json", std::process::id()));
        let o = out.to_str().unwrap();
        assert_eq!(code(&["verify", "--example", "ex4_1", "--format", "machine", "--out", o]), 0);
        let r = ReportFile::from_json(&std::fs::read_to_string(&out).unwrap()).unwrap();
        assert_eq!(r.metadata.seed, 41);
        assert!(r.ok());
        assert_eq!(r.summary.classifications[0].result.verdict.to_string(), "proper_biharmonic");
    }

    #[test]
    fn field_commands_run() {
        assert_eq!(code(&["tension", "--example", "ex4_1", "--point", "2,0"]), 0);
        assert_eq!(code(&["bitension", "--example", "ex5_2", "--point", "1,0"]), 0);
        assert_eq!(code(&["curvature", "--example", "ex4_1", "--metric", "sasaki"]), 0);
        assert_eq!(code(&["tension", "--example", "ex4_1", "--point", "0.5,0"]), 3);
    }

    #[test]
    fn filtered_suite_passes() {
        assert_eq!(code(&["suite", "--filter", "sasaki", "--seed", "7"]), 0);
    }
}
