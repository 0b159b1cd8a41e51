use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use gueloop_core::exact::rational::format_rational;
use gueloop_core::exact::series::mono_vec;
use gueloop_core::exact::ExactSeries;
use gueloop_core::jet::{
    compare_with_ribbon, dilaton_jet_check, genus_one, genus_one_corrupted, loop_residuals, solve_g2, JetFunctional,
    LoopCertificate, LoopSystem,
};
use gueloop_core::ribbon::{self, ValenceProfile};
use gueloop_core::suites::{run_suite, SuiteConfig, SuiteReport};
use gueloop_core::{Error, Result};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "gueloop", version, about = "Exact checks of GUE loop equations and Virasoro constraints")]
struct Cli {
    /// s-weight cap
    #[arg(long, global = true, default_value_t = 8, value_parser = clap::value_parser!(i32).range(0..=14))]
    weight: i32,
    /// genus cap
    #[arg(long, global = true, default_value_t = 2)]
    genus: u32,
    /// order in 1/lambda for the loop-operator identities
    #[arg(long = "lambda-order", global = true, default_value_t = 10)]
    lambda_order: i32,
    /// highest jet index available to the loop equation
    #[arg(long = "jet-order", global = true, default_value_t = 4)]
    jet_order: usize,
    /// valence tuple "j1,j2,..." for agtable
    #[arg(long, global = true)]
    profile: Option<String>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// seed for the sampled checks
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// a_g(j) for |j| <= weight, at most three vertices, g <= genus
    Agtable,
    /// truncated GUE free energy from ribbon graphs
    FreeEnergy {
        /// emit the partition function instead
        #[arg(long)]
        exp: bool,
    },
    /// run a verification suite
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        /// perturb the inputs (negative control)
        #[arg(long)]
        corrupt: bool,
    },
    /// loop-equation residual certificates for both loop systems
    LoopResidual {
        #[arg(long)]
        corrupt: bool,
    },
    /// solve the genus-two loop equation and certify the result
    SolveG2,
}

struct Out {
    format: Format,
    buf: Vec<u8>,
}

impl Out {
    fn json(&mut self, v: &Value) {
        let _ = writeln!(self.buf, "{}", serde_json::to_string_pretty(v).expect("json"));
    }

    fn csv(&mut self, header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<()> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::Resource(e.to_string());
        w.write_record(header).map_err(io)?;
        for r in rows {
            w.write_record(&r).map_err(io)?;
        }
        self.buf.extend(w.into_inner().map_err(|e| Error::Resource(e.to_string()))?);
        Ok(())
    }

    fn line(&mut self, s: impl AsRef<str>) {
        let _ = writeln!(self.buf, "{}", s.as_ref());
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = Out { format: cli.format, buf: Vec::new() };
    let res = run(&cli, &mut out);
    let _ = io::stdout().write_all(&out.buf);
    match res {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn config(cli: &Cli, corrupt: bool) -> SuiteConfig {
    SuiteConfig {
        weight: cli.weight,
        genus: cli.genus,
        lambda_order: cli.lambda_order,
        jet_order: cli.jet_order,
        seed: cli.seed,
        corrupt,
    }
}

fn run(cli: &Cli, out: &mut Out) -> Result<bool> {
    match &cli.command {
        Command::Agtable => agtable(cli, out),
        Command::FreeEnergy { exp } => free_energy(cli, *exp, out),
        Command::Verify { suite, corrupt } => verify(suite, &config(cli, *corrupt), out),
        Command::LoopResidual { corrupt } => loop_residual(cli, *corrupt, out),
        Command::SolveG2 => solve(cli, out),
    }
}

fn agtable(cli: &Cli, out: &mut Out) -> Result<bool> {
    let rows: Vec<(Vec<u32>, u32, String)> = match &cli.profile {
        Some(p) => {
            let prof = ValenceProfile::parse(p)?;
            let kf = gueloop_core::exact::rational::factorial_q(prof.vertices() as u64);
            ribbon::genus_counts(&prof)?
                .into_iter()
                .filter(|(g, c)| *g <= cli.genus && *c > 0)
                .map(|(g, c)| (prof.valences().to_vec(), g, format_rational(&(gueloop_core::exact::rational::int(c as i64) / &kf))))
                .collect()
        }
        None => ribbon::a_table(cli.weight as u32, 3, cli.genus)?
            .into_iter()
            .map(|r| (r.profile, r.genus, format_rational(&r.a)))
            .collect(),
    };
    match out.format {
        Format::Json => {
            let v: Vec<Value> = rows.iter().map(|(p, g, a)| json!({"profile": p, "genus": g, "a": a})).collect();
            out.json(&Value::Array(v));
        }
        Format::Csv => out.csv(
            &["profile", "genus", "a"],
            rows.iter().map(|(p, g, a)| vec![join(p), g.to_string(), a.clone()]),
        )?,
        Format::Text => {
            for (p, g, a) in &rows {
                out.line(format!("({}) g={g} {a}", join(p)));
            }
        }
    }
    Ok(true)
}

fn join(p: &[u32]) -> String {
    p.iter().map(|j| j.to_string()).collect::<Vec<_>>().join(",")
}

fn series_rows(s: &ExactSeries) -> Vec<Vec<String>> {
    let mut rows = Vec::new();
    for (m, c) in s.terms() {
        for (a, r) in c.terms() {
            let sv = mono_vec(*m).iter().map(|e| e.to_string()).collect::<Vec<_>>().join(" ");
            rows.push(vec![sv, a.x.to_string(), a.eps.to_string(), a.logx.to_string(), a.zeta.to_string(), format_rational(r)]);
        }
    }
    rows
}

fn emit_series(out: &mut Out, label: &str, s: &ExactSeries) -> Result<()> {
    match out.format {
        Format::Json => out.json(&s.to_json()),
        Format::Csv => out.csv(&["s", "x", "eps", "logx", "zeta", "val"], series_rows(s))?,
        Format::Text => {
            out.line(format!("{label} (weight <= {}):", s.cap()));
            for (m, c) in s.terms() {
                out.line(format!("  {}: {c}", gueloop_core::exact::series::format_mono(*m)));
            }
        }
    }
    Ok(())
}

fn free_energy(cli: &Cli, exp: bool, out: &mut Out) -> Result<bool> {
    let f = ribbon::free_energy(cli.weight, cli.genus)?;
    if !exp {
        emit_series(out, "F", &f)?;
        return Ok(true);
    }
    let z = ribbon::PartitionFunction::from_free_energy(&f)?;
    let bg = ExactSeries::constant(0, z.background.clone());
    match out.format {
        Format::Json => out.json(&json!({"background": bg.to_json(), "series": z.series.to_json()})),
        Format::Csv => out.csv(&["s", "x", "eps", "logx", "zeta", "val"], series_rows(&z.series))?,
        Format::Text => {
            out.line(format!("Z = exp({}) * series", z.background));
            emit_series(out, "series", &z.series)?;
        }
    }
    Ok(true)
}

fn emit_reports(out: &mut Out, reports: &[SuiteReport]) -> Result<()> {
    match out.format {
        Format::Json => out.json(&serde_json::to_value(reports).expect("json")),
        Format::Csv => out.csv(
            &["suite", "check", "passed", "detail"],
            reports.iter().flat_map(|r| {
                r.checks.iter().map(|c| {
                    vec![r.suite.clone(), c.name.clone(), c.passed.to_string(), c.detail.clone().unwrap_or_default()]
                })
            }),
        )?,
        Format::Text => {
            for r in reports {
                out.line(format!("[{}] {}", if r.passed { "PASS" } else { "FAIL" }, r.suite));
                for c in &r.checks {
                    let mark = if c.passed { "ok  " } else { "FAIL" };
                    match &c.detail {
                        Some(d) => out.line(format!("  {mark} {}: {d}", c.name)),
                        None => out.line(format!("  {mark} {}", c.name)),
                    }
                }
            }
        }
    }
    Ok(())
}

fn verify(suite: &str, cfg: &SuiteConfig, out: &mut Out) -> Result<bool> {
    let reports = run_suite(suite, cfg)?;
    emit_reports(out, &reports)?;
    let first_failure = reports.iter().flat_map(|r| r.checks.iter().map(move |c| (r, c))).find(|(_, c)| !c.passed);
    if let Some((r, c)) = first_failure {
        eprintln!("{}: {} failed{}", r.suite, c.name, c.detail.as_ref().map(|d| format!(": {d}")).unwrap_or_default());
        return Ok(false);
    }
    Ok(true)
}

fn emit_certs(out: &mut Out, certs: &[LoopCertificate]) -> Result<()> {
    match out.format {
        Format::Json => out.json(&serde_json::to_value(certs).expect("json")),
        Format::Csv => out.csv(
            &["equation", "genus", "residual_zero", "term_count", "max_jet"],
            certs.iter().map(|c| {
                vec![c.equation.clone(), c.genus.to_string(), c.residual_zero.to_string(), c.term_count.to_string(), c.max_jet.to_string()]
            }),
        )?,
        Format::Text => {
            for c in certs {
                out.line(format!(
                    "{} genus {}: residual {} (terms {}, max jet {})",
                    c.equation,
                    c.genus,
                    if c.residual_zero { "zero" } else { "NONZERO" },
                    c.term_count,
                    c.max_jet
                ));
                if let Some(r) = &c.residual {
                    out.line(format!("  {r}"));
                }
            }
        }
    }
    Ok(())
}

fn functionals(cli: &Cli, corrupt: bool) -> Result<Vec<JetFunctional>> {
    let f1 = if corrupt { genus_one_corrupted() } else { genus_one() };
    let mut fs = vec![f1];
    if cli.genus >= 2 {
        fs.push(solve_g2(4, cli.seed)?.functional);
    }
    Ok(fs)
}

fn loop_residual(cli: &Cli, corrupt: bool, out: &mut Out) -> Result<bool> {
    if cli.genus == 0 || cli.genus > 2 {
        return Err(Error::Config(format!("loop residuals are available for genus 1 and 2, not {}", cli.genus)));
    }
    let need = gueloop_core::jet::required_jet_order(cli.genus as usize);
    if cli.jet_order < need {
        return Err(Error::InsufficientJetOrder { required: need, have: cli.jet_order });
    }
    let fs = functionals(cli, corrupt)?;
    let mut certs = Vec::new();
    for system in [LoopSystem::NlsLoop, LoopSystem::GueLoop] {
        certs.extend(loop_residuals(system, &fs, cli.jet_order)?.1);
    }
    emit_certs(out, &certs)?;
    Ok(certs.iter().all(|c| c.residual_zero))
}

fn solve(cli: &Cli, out: &mut Out) -> Result<bool> {
    let sol = solve_g2(4, cli.seed)?;
    let f2 = &sol.functional;
    let value = f2.value.as_ref().expect("solver stores the value");
    let fs = [genus_one(), f2.clone()];
    let mut certs = Vec::new();
    for system in [LoopSystem::NlsLoop, LoopSystem::GueLoop] {
        certs.extend(loop_residuals(system, &fs, cli.jet_order.max(4))?.1);
    }
    let dil = dilaton_jet_check(f2);
    let cmp = compare_with_ribbon(f2, cli.weight.max(8))?;
    let ok = certs.iter().all(|c| c.residual_zero) && dil.ok() && cmp.matches;
    match out.format {
        Format::Json => out.json(&json!({
            "f2": value.to_string(),
            "q_power": sol.q_power,
            "terms": sol.terms,
            "attempts": sol.attempts,
            "residuals": certs,
            "dilaton": dil,
            "ribbon": cmp,
        })),
        Format::Csv => out.csv(
            &["check", "passed"],
            certs
                .iter()
                .map(|c| vec![format!("{} genus {}", c.equation, c.genus), c.residual_zero.to_string()])
                .chain([vec!["jet dilaton".into(), dil.ok().to_string()], vec![format!("ribbon genus 2 to weight {}", cmp.weight), cmp.matches.to_string()]]),
        )?,
        Format::Text => {
            out.line(format!("F_2 ({} terms) = {value}", sol.terms));
            for a in &sol.attempts {
                out.line(format!("  Q^{} ansatz, {} unknowns: {}", a.q_power, a.unknowns, a.outcome));
            }
            emit_certs(out, &certs)?;
            out.line(format!("jet dilaton: {}", if dil.ok() { "holds" } else { "FAILS" }));
            out.line(format!(
                "ribbon genus 2 to weight {}: {}",
                cmp.weight,
                cmp.first_difference.clone().unwrap_or_else(|| "match".into())
            ));
        }
    }
    Ok(ok)
}
