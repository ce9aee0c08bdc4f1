use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};

use fracnorm::domain::{build_domain, distance_to_boundary, sci, write_summary};
use fracnorm::harness::{
    run_suite, run_suites, write_outputs, ExperimentConfig, Suite, SuiteOutput, DEFAULT_OUT_DIR,
};
use fracnorm::kfunctional::{interpolation_norm_from_curve, KFunctionalCurve, KParams, SolverBudget};
use fracnorm::norms::{FracParams, NormReport};
use fracnorm::whitney::whitney_decompose;
use fracnorm::Result;

#[derive(Parser)]
#[command(name = "fracnorm", version, about = "Distance-weighted fractional Sobolev norms on planar grid domains")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// JSON experiment configuration
    #[arg(long)]
    config: PathBuf,
    /// Output directory (overrides the config)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Seed for random sampling (overrides the config)
    #[arg(long)]
    seed: Option<u64>,
    /// Run suites in parallel
    #[arg(long)]
    parallel: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Distance field and grid summary
    Domain(Common),
    /// Weighted norms and fractional seminorms of every configured function
    Seminorm(Common),
    /// Whitney decomposition with its property check
    Whitney(Common),
    /// K-functional curves and interpolation norms
    Kfunc(Common),
    /// Run the configured verification suites
    Verify(Common),
    /// Limit diagnostic as s approaches 1
    Bbm(Common),
}

fn load(c: &Common) -> Result<(ExperimentConfig, PathBuf)> {
    let mut cfg = ExperimentConfig::load(&c.config)?;
    if let Some(seed) = c.seed {
        cfg.seed = seed;
    }
    if let Some(out) = &c.out {
        cfg.out_dir = Some(out.clone());
    }
    cfg.parallel |= c.parallel;
    let out = cfg
        .out_dir
        .clone()
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT_DIR));
    std::fs::create_dir_all(&out)?;
    Ok((cfg, out))
}

fn domain(cfg: &ExperimentConfig, out: &Path) -> Result<bool> {
    for n in cfg.resolutions() {
        let dom = build_domain(&cfg.domain.spec, n)?;
        let d = distance_to_boundary(&dom);
        d.write_csv(&dom, &out.join(format!("domain_n{n}.csv")))?;
        write_summary(&dom, &mut std::io::stdout())?;
    }
    Ok(true)
}

fn seminorm(cfg: &ExperimentConfig, out: &Path) -> Result<bool> {
    let mut w = csv::Writer::from_path(out.join("seminorm.csv"))?;
    let mut header = vec!["function"];
    header.extend(NormReport::CSV_HEADER);
    w.write_record(&header)?;
    for n in cfg.resolutions() {
        let dom = Arc::new(build_domain(&cfg.domain.spec, n)?);
        let d = distance_to_boundary(&dom);
        for tf in cfg.test_functions()? {
            let f = tf.sample(&dom)?;
            for &p in &cfg.p {
                for &s in &cfg.s {
                    for &a in &cfg.alpha {
                        for &t in &cfg.tau {
                            let params = FracParams::matched(s, p, a)?.with_tau(t)?;
                            let report = NormReport::compute(&f, &d, &params)?;
                            let mut row = vec![tf.id().to_string()];
                            row.extend(report.csv_row(&dom));
                            w.write_record(&row)?;
                        }
                    }
                }
            }
        }
    }
    w.flush()?;
    Ok(true)
}

fn whitney(cfg: &ExperimentConfig, out: &Path) -> Result<bool> {
    let mut ok = true;
    for n in cfg.resolutions() {
        let dom = build_domain(&cfg.domain.spec, n)?;
        let w = whitney_decompose(&dom);
        w.write_csv(&out.join(format!("whitney_n{n}.csv")))?;
        let r = w.check(&dom);
        println!(
            "n={n}: {} cubes ({} subgrid), uncovered {}, overlaps {}, size violations {}/{}, neighbor violations {}/{}, maximality violations {}",
            r.cubes,
            r.subgrid_cubes,
            r.uncovered_nodes,
            r.interior_overlaps,
            r.size_violations,
            r.size_checked,
            r.neighbor_violations,
            r.touching_pairs,
            r.maximality_violations
        );
        ok &= r.all_pass();
    }
    Ok(ok)
}

fn kfunc(cfg: &ExperimentConfig, out: &Path) -> Result<bool> {
    let budget = SolverBudget::default();
    let mut w = csv::Writer::from_path(out.join("interp_norm.csv"))?;
    w.write_record([
        "resolution", "function", "s", "p", "alpha", "value", "body", "head_upper", "head_lower", "tail",
    ])?;
    for n in cfg.resolutions() {
        let dom = Arc::new(build_domain(&cfg.domain.spec, n)?);
        let d = distance_to_boundary(&dom);
        let lambdas = cfg.lambda_grid.values(&dom)?;
        for tf in cfg.test_functions()? {
            let f = tf.sample(&dom)?;
            for &p in &cfg.p {
                for &a in &cfg.alpha {
                    let curve = KFunctionalCurve::variational(&f, &d, &lambdas, KParams::new(p, a)?, &budget)?;
                    curve.write_csv(&out.join(format!("kfunc_n{n}_{}_p{p}_a{a}.csv", tf.id())))?;
                    for &s in &cfg.s {
                        let v = interpolation_norm_from_curve(&curve, s)?;
                        w.write_record([
                            n.to_string(),
                            tf.id().to_string(),
                            sci(s),
                            sci(p),
                            sci(a),
                            sci(v.value),
                            sci(v.body),
                            sci(v.head_upper),
                            sci(v.head_lower),
                            sci(v.tail),
                        ])?;
                    }
                }
            }
        }
    }
    w.flush()?;
    Ok(true)
}

fn report(outputs: &[SuiteOutput]) -> bool {
    for o in outputs {
        let failed = o.assertions.iter().filter(|a| !a.pass).count();
        println!(
            "{:<14} {} ({} assertions, {} failed)",
            o.suite.name(),
            if o.all_pass() { "PASS" } else { "FAIL" },
            o.assertions.len(),
            failed
        );
        for a in o.assertions.iter().filter(|a| !a.pass) {
            println!("    {}: {} {} {}", a.name, sci(a.measured), a.relation.symbol(), sci(a.bound));
        }
    }
    outputs.iter().all(SuiteOutput::all_pass)
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Domain(c) => {
            let (cfg, out) = load(&c)?;
            domain(&cfg, &out)
        }
        Command::Seminorm(c) => {
            let (cfg, out) = load(&c)?;
            seminorm(&cfg, &out)
        }
        Command::Whitney(c) => {
            let (cfg, out) = load(&c)?;
            whitney(&cfg, &out)
        }
        Command::Kfunc(c) => {
            let (cfg, out) = load(&c)?;
            kfunc(&cfg, &out)
        }
        Command::Verify(c) => {
            let (cfg, _) = load(&c)?;
            let outcome = run_suite(&cfg)?;
            Ok(report(&outcome.outputs))
        }
        Command::Bbm(c) => {
            let (cfg, out) = load(&c)?;
            let outputs = run_suites(&cfg, &[Suite::Bbm])?;
            write_outputs(&outputs, &out)?;
            Ok(report(&outputs))
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
