use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use finhopf::cohomology::Budget;
use finhopf::scenario::{self, betti_checks, Level, MethodSel, Overrides, Task, TaskReport, Verdict, FIXTURES};

#[derive(Parser)]
#[command(name = "finhopf", version, about = "Build and verify finite-dimensional Hopf algebras over finite fields")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(clap::Args, Clone, Default)]
struct Common {
    /// scenario file or bundled fixture name
    #[arg(long)]
    config: Option<String>,
    #[arg(long)]
    max_degree: Option<usize>,
    #[arg(long)]
    budget_mb: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// write the JSON report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_parser = parse_level)]
    level: Option<Level>,
    #[arg(long, value_parser = parse_method)]
    method: Option<MethodSel>,
}

#[derive(Subcommand)]
enum Cmd {
    /// run every task of a scenario
    Run {
        scenario: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    ListFixtures,
    /// Betti numbers of a presentation file or of a scenario's [betti] block
    Betti {
        #[arg(long)]
        algebra: String,
        /// also write the table as CSV
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        sign_invariants: bool,
        #[command(flatten)]
        common: Common,
    },
    TwistCheck {
        #[command(flatten)]
        common: Common,
    },
    VerifyExtension {
        #[command(flatten)]
        common: Common,
    },
    /// print the presentation of 𝓑(V) (or of its bosonization) as TOML
    EmitPresentation {
        #[arg(long)]
        bosonization: bool,
        #[command(flatten)]
        common: Common,
    },
}

fn parse_level(s: &str) -> Result<Level, String> {
    match s {
        "exact" => Ok(Level::Exact),
        "cleft" => Ok(Level::Cleft),
        "split" => Ok(Level::Split),
        _ => Err(format!("unknown level {s}; use exact, cleft or split")),
    }
}

fn parse_method(s: &str) -> Result<MethodSel, String> {
    match s {
        "bar" => Ok(MethodSel::Bar),
        "minimal" => Ok(MethodSel::Minimal),
        "both" => Ok(MethodSel::Both),
        _ => Err(format!("unknown method {s}; use bar, minimal or both")),
    }
}

impl Common {
    fn overrides(&self, tasks: Option<Vec<Task>>) -> Overrides {
        Overrides { max_degree: self.max_degree, budget_mb: self.budget_mb, seed: self.seed, level: self.level, method: self.method, tasks }
    }

    fn emit(&self, json: &str) -> Result<(), String> {
        match &self.out {
            Some(p) => std::fs::write(p, json).map_err(|e| format!("{}: {e}", p.display())),
            None => {
                println!("{json}");
                Ok(())
            }
        }
    }
}

fn run(common: &Common, spec: Option<&str>, tasks: Option<Vec<Task>>) -> Result<Verdict, String> {
    let spec = spec.or(common.config.as_deref()).ok_or("no scenario given (pass a file, a fixture name or --config)")?;
    let (text, base) = scenario::load(spec).map_err(|e| e.to_string())?;
    let report = scenario::run_scenario(&text, base.as_deref(), &common.overrides(tasks)).map_err(|e| e.to_string())?;
    for t in &report.tasks {
        eprintln!("{:<18} {:?} ({} ms)", t.task, t.verdict, t.elapsed_ms);
        for c in t.checks.iter().filter(|c| !c.pass) {
            eprintln!("  FAIL {}: {}", c.name, c.witness.as_deref().unwrap_or(""));
        }
    }
    common.emit(&report.to_json())?;
    Ok(report.verdict)
}

fn betti(common: &Common, algebra: &str, csv: Option<&PathBuf>, sign: bool) -> Result<Verdict, String> {
    let (text, _) = scenario::load(algebra).map_err(|e| e.to_string())?;
    if text.contains("[scenario]") {
        return run(common, Some(algebra), Some(vec![Task::Betti]));
    }
    let alg = scenario::algebra_from_presentation(&text).map_err(|e| e.to_string())?;
    let started = Instant::now();
    let mut tr = TaskReport::new(Task::Betti);
    let budget = common.budget_mb.map(Budget::from_mb).unwrap_or_default();
    let method = common.method.unwrap_or_default();
    if let Err(e) = betti_checks(&alg, method, common.max_degree.unwrap_or(4), budget, sign, &mut tr) {
        return Err(e.to_string());
    }
    tr.finish(started);
    if let Some(p) = csv {
        let mut s = String::from("method,n,betti\n");
        for t in &tr.betti {
            for (n, b) in t.values.iter().enumerate() {
                s.push_str(&format!("{:?},{n},{b}\n", t.method).to_lowercase());
            }
        }
        std::fs::write(p, s).map_err(|e| format!("{}: {e}", p.display()))?;
    }
    common.emit(&serde_json::to_string_pretty(&tr).expect("serializes"))?;
    Ok(tr.verdict)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match &cli.cmd {
        Cmd::Run { scenario, common } => run(common, scenario.as_deref(), None),
        Cmd::ListFixtures => {
            for f in FIXTURES {
                println!("{:<20} {}", f.name, f.anchor());
            }
            Ok(Verdict::Pass)
        }
        Cmd::Betti { algebra, csv, sign_invariants, common } => betti(common, algebra, csv.as_ref(), *sign_invariants),
        Cmd::TwistCheck { common } => run(common, None, Some(vec![Task::TwistCheck])),
        Cmd::VerifyExtension { common } => run(common, None, Some(vec![Task::Build, Task::VerifyExtension])),
        Cmd::EmitPresentation { bosonization, common } => (|| {
            let spec = common.config.as_deref().ok_or("--config is required")?;
            let (text, _) = scenario::load(spec).map_err(|e| e.to_string())?;
            let out = scenario::emit_presentation(&text, *bosonization).map_err(|e| e.to_string())?;
            common.emit(&out)?;
            Ok(Verdict::Pass)
        })(),
    };
    match res {
        Ok(v) => ExitCode::from(v.exit_code() as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
