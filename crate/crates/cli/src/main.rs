use std::path::PathBuf;
use std::process::ExitCode;

use rbflow_cli::config::{Mode, RunConfig};
use rbflow_cli::error::RunError;
use rbflow_cli::runner::{run, RunContext};

const USAGE: &str = "\
rbflow - warped-product Ricci-Bourguignon flow toolkit

USAGE:
  rbflow catalog list
  rbflow catalog show <name>
  rbflow simulate        [--config <path>] [--scenario <name>] [OPTIONS]
  rbflow verify-ansatz   --scenario <name> [--config <path>] [OPTIONS]
  rbflow verify-flow     --scenario <name> [--config <path>] [OPTIONS]
  rbflow verify-estimate [--scenario heat|hyperbolic-immortal] [OPTIONS]
  rbflow identity-check  [--config <path>] [OPTIONS]
  rbflow classify        --scenario <name> [--config <path>] [OPTIONS]

OPTIONS:
  --config <path>    TOML run configuration (schema_version = 1)
  --out <dir>        output directory (default: rbflow-out; RBFLOW_OUT
                     overrides the default)
  --seed <u64>       sample-selection seed (default: 42)
  --scenario <name>  scenario name; catalog names plus \"heat\" for the
                     solver suites and \"static-product\" for the classifier

EXIT CODES:
  0 success, 1 validation error, 2 numerical failure (floor breach, CFL
  violation), 3 property-check failure (residual above tolerance).

Each run writes CSV artifacts and a summary.toml into the output directory;
re-running an identical configuration and seed reproduces the files byte
for byte.";

struct CliArgs {
    mode: Option<Mode>,
    catalog_action: Option<(String, Option<String>)>,
    config_path: Option<PathBuf>,
    out_dir: Option<PathBuf>,
    seed: Option<u64>,
    scenario: Option<String>,
}

fn parse_args(argv: &[String]) -> Result<CliArgs, String> {
    if argv.is_empty() {
        return Err("missing subcommand".into());
    }
    let mut args = CliArgs {
        mode: None,
        catalog_action: None,
        config_path: None,
        out_dir: None,
        seed: None,
        scenario: None,
    };
    let mut it = argv.iter();
    let sub = it.next().unwrap().as_str();
    match sub {
        "catalog" => {
            let action = it
                .next()
                .ok_or_else(|| "catalog needs `list` or `show <name>`".to_string())?;
            match action.as_str() {
                "list" => args.catalog_action = Some(("list".into(), None)),
                "show" => {
                    let name = it
                        .next()
                        .ok_or_else(|| "catalog show needs a scenario name".to_string())?;
                    args.catalog_action = Some(("show".into(), Some(name.clone())));
                }
                other => return Err(format!("unknown catalog action {other:?}")),
            }
            return Ok(args);
        }
        "simulate" => args.mode = Some(Mode::Simulate),
        "verify-ansatz" => args.mode = Some(Mode::VerifyAnsatz),
        "verify-flow" => args.mode = Some(Mode::VerifyFlow),
        "verify-estimate" => args.mode = Some(Mode::VerifyEstimate),
        "identity-check" => args.mode = Some(Mode::IdentityCheck),
        "classify" => args.mode = Some(Mode::Classify),
        "--help" | "-h" | "help" => return Err(String::new()),
        other => return Err(format!("unknown subcommand {other:?}")),
    }
    let rest: Vec<&String> = it.collect();
    let mut k = 0usize;
    while k < rest.len() {
        let flag = rest[k].as_str();
        let need = |k: usize, what: &str| -> Result<String, String> {
            rest.get(k + 1)
                .map(|s| (*s).clone())
                .ok_or_else(|| format!("{what} needs a value"))
        };
        match flag {
            "--config" => args.config_path = Some(PathBuf::from(need(k, "--config")?)),
            "--out" => args.out_dir = Some(PathBuf::from(need(k, "--out")?)),
            "--seed" => {
                args.seed = Some(
                    need(k, "--seed")?
                        .parse()
                        .map_err(|e| format!("--seed: {e}"))?,
                )
            }
            "--scenario" => args.scenario = Some(need(k, "--scenario")?),
            other => return Err(format!("unknown flag {other:?}")),
        }
        k += 2;
    }
    Ok(args)
}

fn catalog_command(action: &str, name: Option<&str>) -> Result<(), RunError> {
    match action {
        "list" => {
            for name in rbflow_core::ansatz::CATALOG_NAMES {
                println!("{name}");
            }
            Ok(())
        }
        "show" => {
            let name = name.unwrap();
            let sc = if name == "static-product" {
                rbflow_core::ansatz::static_product_scenario()
            } else {
                rbflow_core::ansatz::catalog(name)?
            };
            println!("name = {:?}", sc.name);
            println!("rho = {}", sc.params.rho);
            println!("base_dim = {}", sc.params.n);
            println!("fiber_dim = {}", sc.params.m);
            println!("sigma = {}", sc.params.sigma);
            println!("regime = {:?}", sc.params.regime);
            println!("c0 = {}", sc.constants.c0);
            println!("c1_over_c2 = {}", sc.constants.c1_over_c2);
            println!("self_similar = {}", sc.constants.is_self_similar());
            println!(
                "time_domain = ({}, {})",
                sc.time_domain.lo, sc.time_domain.hi
            );
            println!(
                "spatial_window = ({}, {})",
                sc.spatial_window.lo, sc.spatial_window.hi
            );
            println!("fiber_scalar_curvature = {}", sc.fiber.s_fiber);
            println!("fiber_einstein_coeff = {}", sc.fiber.einstein_coeff);
            println!("complete = {}", sc.complete);
            match sc.expected_class {
                Some(c) => println!("expected_class = {c}"),
                None => println!("expected_class = unset"),
            }
            println!("notes = {:?}", sc.notes);
            Ok(())
        }
        _ => unreachable!(),
    }
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().skip(1).collect();
    let args = match parse_args(&argv) {
        Ok(a) => a,
        Err(msg) => {
            if msg.is_empty() {
                println!("{USAGE}");
                return ExitCode::SUCCESS;
            }
            eprintln!("error: {msg}\n\n{USAGE}");
            return ExitCode::from(1);
        }
    };

    if let Some((action, name)) = &args.catalog_action {
        return match catalog_command(action, name.as_deref()) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(e.exit_code() as u8)
            }
        };
    }

    let mode = args.mode.expect("subcommand parsing sets the mode");
    let out_dir = args
        .out_dir
        .clone()
        .or_else(|| std::env::var_os("RBFLOW_OUT").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("rbflow-out"));

    let result = (|| -> Result<(), RunError> {
        let mut cfg = match &args.config_path {
            Some(p) => RunConfig::from_path(p)?,
            None => RunConfig::default(),
        };
        if let Some(cfg_mode) = cfg.mode {
            if cfg_mode != mode {
                return Err(RunError::Validation(format!(
                    "config mode {:?} conflicts with the {:?} subcommand",
                    cfg_mode.name(),
                    mode.name()
                )));
            }
        }
        if let Some(name) = &args.scenario {
            let kind = if name == "heat" { "heat" } else { "catalog" };
            cfg.scenario = Some(rbflow_cli::config::ScenarioRef {
                kind: kind.into(),
                name: Some(name.clone()),
            });
        }
        let seed = args.seed.or(cfg.seed).unwrap_or(42);
        let ctx = RunContext {
            out_dir: out_dir.clone(),
            seed,
        };
        let summary = run(mode, &cfg, &ctx)?;
        println!(
            "{}: {} ({} checks, seed {seed}) -> {}",
            summary.mode,
            if summary.passed { "pass" } else { "FAIL" },
            summary.checks.len(),
            ctx.out_dir.join("summary.toml").display()
        );
        Ok(())
    })();

    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
