//! `zoll`: command-line driver for sweeps, orbit censuses, section
//! identities and the disc-map suite.

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use log::info;

use zoll_core::forms3d::Generator;
use zoll_core::harness::{
    discmap_suite, emit, exit_code, run_sweep, sweep::build_form, verify_reduction, ExperimentConfig, Perturbation,
    Report, ResultRecord,
};
use zoll_core::reebflow::find_orbits;

#[derive(Debug, Parser)]
#[command(name = "zoll", version, about = "Reeb dynamics near Zoll contact forms on S3 and L(p,1)")]
struct Cli {
    /// JSON experiment configuration; defaults apply to missing keys.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Output directory (overrides `output.dir`).
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Seed for randomized suites and loop sampling.
    #[arg(long, global = true, value_name = "N")]
    seed: Option<u64>,
    /// Lens order p of L(p,1).
    #[arg(long, global = true, value_name = "N")]
    p: Option<u32>,
    /// Comma-separated amplitude schedule, e.g. `-0.05,0,0.05`.
    #[arg(long, global = true, value_name = "LIST", value_delimiter = ',', allow_hyphen_values = true)]
    eps: Option<Vec<f64>>,
    /// Named perturbation profile: hopf_height, hopf_tilt or mixed.
    #[arg(long, global = true, value_name = "NAME")]
    generator: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Systolic and diastolic ratios per amplitude.
    Ratio,
    /// Periodic orbit census per amplitude.
    Orbits,
    /// Return-map identities and the fixed-point reduction per amplitude.
    Section,
    /// Randomized generating-function suite.
    Discmap,
    /// Full sweep with report files.
    Sweep,
}

fn parse_generator(name: &str) -> Result<Generator> {
    Generator::ALL
        .into_iter()
        .find(|g| g.name() == name)
        .with_context(|| format!("unknown generator `{name}` (expected hopf_height, hopf_tilt or mixed)"))
}

fn resolve(cli: &Cli) -> Result<ExperimentConfig> {
    let mut cfg = match &cli.config {
        Some(p) => ExperimentConfig::load(p).with_context(|| format!("reading {}", p.display()))?,
        None => ExperimentConfig::default(),
    };
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if let Some(p) = cli.p {
        cfg.lens_order = p;
    }
    if let Some(e) = &cli.eps {
        cfg.amplitudes = e.clone();
    }
    if let Some(g) = &cli.generator {
        cfg.perturbation = Perturbation::Generator(parse_generator(g)?);
    }
    if let Some(o) = &cli.out {
        cfg.output.dir = o.clone();
    }
    cfg.validate()?;
    Ok(cfg)
}

fn print_records(records: &[ResultRecord]) {
    println!(
        "{:>8} {:>14} {:>14} {:>14} {:>14} {:>14} {:>10}  verdict",
        "eps", "t_min", "t_max", "volume", "rho_sys", "rho_dia", "1/t_sigma"
    );
    for r in records {
        println!(
            "{:>8} {:>14.10} {:>14.10} {:>14.10} {:>14.10} {:>14.10} {:>10.6}  {}{}",
            r.eps,
            r.t_min,
            r.t_max,
            r.volume,
            r.rho_sys,
            r.rho_dia,
            r.inv_t_sigma,
            r.verdict,
            if r.note.is_empty() { String::new() } else { format!(" ({})", r.note) }
        );
    }
}

fn print_identities(records: &[ResultRecord]) {
    println!(
        "{:>8} {:>11} {:>11} {:>11} {:>11} {:>11} {:>11} {:>11}",
        "eps", "loop", "vol_id", "boundary", "calabi_id", "return_disp", "closure", "period"
    );
    for r in records {
        println!(
            "{:>8} {:>11.3e} {:>11.3e} {:>11.3e} {:>11.3e} {:>11.3e} {:>11.3e} {:>11.3e}",
            r.eps,
            r.loop_residual,
            r.volume_identity,
            r.boundary_residual,
            r.calabi_identity,
            r.return_displacement,
            r.fixed_closure,
            r.period_defect
        );
    }
}

fn code(c: i32) -> ExitCode {
    ExitCode::from(c as u8)
}

fn run(cli: Cli) -> Result<ExitCode> {
    let mut cfg = resolve(&cli)?;
    match cli.command {
        Command::Ratio => {
            cfg.section.enabled = false;
            let sweep = run_sweep(&cfg)?;
            print_records(&sweep.records);
            if cli.out.is_some() {
                emit(&cfg.output.dir, &cfg, Report { records: &sweep.records, ..Default::default() })?;
            }
            Ok(code(exit_code(&sweep.records)))
        }
        Command::Orbits => {
            for &eps in &cfg.amplitudes {
                let census = find_orbits(&build_form(&cfg, eps), &cfg.orbits, cfg.integrator)?;
                println!(
                    "eps = {eps}: {} orbits from {} seeds ({} dropped)",
                    census.orbits.len(),
                    census.seeds,
                    census.dropped
                );
                for o in &census.orbits {
                    println!(
                        "  period {:.12}  class_h {}  winding {}  closure {:.2e}",
                        o.period, o.class_h, o.lift_winding, o.closure_residual
                    );
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Section => {
            cfg.section.enabled = true;
            let sweep = run_sweep(&cfg)?;
            print_identities(&sweep.records);
            let mut reports = Vec::new();
            for &eps in &cfg.amplitudes {
                if eps.abs() > cfg.thresholds.amplitude_max {
                    continue;
                }
                let rep = verify_reduction(&cfg, eps)?;
                if rep.vacuous {
                    println!("eps = {eps}: return map is the identity; reduction is vacuous");
                }
                for b in rep.systolic.iter().chain(&rep.diastolic) {
                    let w = b.witness.as_ref();
                    println!(
                        "eps = {eps}: {:?} T_ref {:.10} CAL {:+.6e} witness sigma {} period {} in census {} consistent {}",
                        b.normalization,
                        b.t_ref,
                        b.calabi,
                        w.map_or("none".into(), |w| format!("{:+.6e}", w.sigma)),
                        w.map_or("none".into(), |w| format!("{:.10}", w.original_period)),
                        b.witness_in_census,
                        b.consistent
                    );
                }
                for d in &rep.discrepancies {
                    println!("eps = {eps}: discrepancy: {d}");
                }
                reports.push(rep);
            }
            if cli.out.is_some() {
                emit(
                    &cfg.output.dir,
                    &cfg,
                    Report {
                        records: &sweep.records,
                        sections: &sweep.grids,
                        reduction: Some(reports),
                        ..Default::default()
                    },
                )?;
            }
            Ok(code(exit_code(&sweep.records)))
        }
        Command::Discmap => {
            let (rep, functions) = discmap_suite(&cfg)?;
            let n = rep.trials;
            println!("{} random G at norm {} (seed {})", n, rep.norm, rep.seed);
            for (name, t) in [
                ("round trip G", rep.round_trip),
                ("round trip map", rep.map_round_trip),
                ("Hamilton-Jacobi", rep.hamilton_jacobi),
                ("quasi-autonomy", rep.quasi_autonomy),
                ("Calabi", rep.calabi),
                ("Calabi inverse", rep.calabi_antisymmetry),
            ] {
                println!("  {name:<16} {:>4}/{n}  worst {:.3e}", t.passed, t.worst);
            }
            println!("  radial HJ        {:.3e}", rep.radial_hj);
            println!(
                "  witnesses        negative {}/{}  positive {}/{}",
                rep.witness_negative.found,
                rep.witness_negative.attempts,
                rep.witness_positive.found,
                rep.witness_positive.attempts
            );
            let rot_ok = rep.rotation.iter().filter(|r| r.pass).count();
            println!("  rotation table   {rot_ok}/{}", rep.rotation.len());
            for f in &rep.failures {
                println!("  failure: {f}");
            }
            let ok = rep.all_passed();
            if cli.out.is_some() {
                emit(
                    &cfg.output.dir,
                    &cfg,
                    Report { functions: &functions, discmap: Some(rep), ..Default::default() },
                )?;
            }
            if !ok {
                bail!("disc-map suite had failures");
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Sweep => {
            let sweep = run_sweep(&cfg)?;
            print_records(&sweep.records);
            let out = emit(
                &cfg.output.dir,
                &cfg,
                Report { records: &sweep.records, sections: &sweep.grids, ..Default::default() },
            )?;
            info!("wrote {} and {} grid files", out.summary.display(), out.grids.len());
            Ok(code(exit_code(&sweep.records)))
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
