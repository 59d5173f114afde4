//! Command-line driver: `io` prints IO-equations and the identifiable field,
//! `reparametrize` emits a locally identifiable reparametrization with its
//! transform artifact, `verify` cross-validates the pair numerically.
//!
//! Exit codes: 0 success, 1 parse/usage, 2 budget exceeded, 3 no
//! specialization found, 4 transform unavailable (observability condition
//! false without --reduce; the specialized model is still written), 5 numeric
//! verification failure.

use clap::{Parser, Subcommand};
use reparam_core::error::Error;
use reparam_core::model::Model;
use reparam_core::pipeline::{self, PipelineOptions};
use reparam_core::verify::{cross_validate, SimConfig};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "reparam", version, about = "Locally identifiable reparametrizations of rational ODE models")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Compute the IO-equations and the identifiable field of a model
    Io {
        /// Path to the `.ode` model file
        model: PathBuf,
        /// Emit the report as JSON
        #[arg(long)]
        json: bool,
        /// Seed for the randomized steps
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Wall-clock budget per symbolic stage, seconds
        #[arg(long, default_value_t = 600)]
        budget: u64,
    },
    /// Produce a locally identifiable reparametrization of the same shape
    Reparametrize {
        model: PathBuf,
        /// Output directory (defaults to the model's directory)
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        json: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 600)]
        budget: u64,
        /// Reduce the dimension first when the observability condition fails
        #[arg(long)]
        reduce: bool,
        /// Randomized rank trials
        #[arg(long, default_value_t = 3)]
        trials: usize,
    },
    /// Numerically cross-validate a reparametrization
    Verify {
        /// Source model
        old: PathBuf,
        /// Reparametrized model
        new: PathBuf,
        /// Transform artifact produced by `reparametrize`
        transform: PathBuf,
        /// Maximum allowed output deviation
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        #[arg(long)]
        json: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of random parameter samples
        #[arg(long, default_value_t = 10)]
        trials: usize,
    },
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::Parse(_) | Error::Validation(_) => 1,
        Error::BudgetExceeded(_) => 2,
        Error::NoSolutionFound => 3,
        _ => 1,
    }
}

fn read_model(path: &Path) -> Result<(String, Model), Error> {
    let src = std::fs::read_to_string(path)
        .map_err(|e| Error::Validation(format!("cannot read {}: {e}", path.display())))?;
    let m = Model::parse(&src)?;
    Ok((src, m))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.cmd {
        Cmd::Io {
            model,
            json,
            seed,
            budget,
        } => {
            let (_, m) = read_model(&model)?;
            let opts = PipelineOptions {
                seed,
                budget_secs: budget,
                ..Default::default()
            };
            let report = pipeline::run_io_report(&m, &opts)?;
            if json {
                println!("{}", serde_json::to_string_pretty(&report).unwrap());
            } else {
                println!("model: {} ({} states)", report.model.name, report.model.states.len());
                for eq in &report.io_equations {
                    println!("io-equation [{}, order {}]:", eq.output, eq.order);
                    println!("  {} = 0", eq.text);
                }
                println!("identifiable field (raw): {{{}}}", report.identifiable_field.raw.join(", "));
                println!(
                    "identifiable field (simplified): {{{}}}",
                    report.identifiable_field.simplified.join(", ")
                );
                println!(
                    "observability condition: {} (sum of orders {} vs dimension {})",
                    report.observability.holds,
                    report.observability.sum_orders,
                    report.observability.dimension
                );
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Reparametrize {
            model,
            out,
            json,
            seed,
            budget,
            reduce,
            trials,
        } => {
            let (_, m) = read_model(&model)?;
            let opts = PipelineOptions {
                seed,
                budget_secs: budget,
                reduce,
                rank_trials: trials,
            };
            let outcome = pipeline::run_full(&m, &opts)?;
            let dir = out
                .or_else(|| model.parent().map(|p| p.to_path_buf()))
                .unwrap_or_else(|| PathBuf::from("."));
            std::fs::create_dir_all(&dir)
                .map_err(|e| Error::Validation(format!("cannot create {}: {e}", dir.display())))?;
            let stem = model
                .file_stem()
                .map(|s| s.to_string_lossy().to_string())
                .unwrap_or_else(|| "model".into());

            let write = |name: String, text: &str| -> Result<PathBuf, Error> {
                let p = dir.join(name);
                std::fs::write(&p, text)
                    .map_err(|e| Error::Validation(format!("cannot write {}: {e}", p.display())))?;
                Ok(p)
            };
            let mut written = Vec::new();
            if let Some(ode) = &outcome.reparametrized_ode {
                written.push(write(format!("{stem}_reparam.ode"), ode)?);
            }
            if let Some(art) = &outcome.transform_artifact {
                written.push(write(
                    format!("{stem}_transform.json"),
                    &serde_json::to_string_pretty(art).unwrap(),
                )?);
            }
            written.push(write(
                format!("{stem}_report.json"),
                &serde_json::to_string_pretty(&outcome.report).unwrap(),
            )?);

            if json {
                println!("{}", serde_json::to_string_pretty(&outcome.report).unwrap());
            } else {
                let r = &outcome.report;
                for eq in &r.io_equations {
                    println!("io-equation [{}]: {} = 0", eq.output, eq.text);
                }
                println!(
                    "identifiable field: {{{}}}",
                    r.identifiable_field.simplified.join(", ")
                );
                if let Some(spec) = &r.specialization {
                    for v in &spec.values {
                        match &v.alpha_rep {
                            Some(rep) if rep != &v.expr => {
                                println!("  {} -> {} (= {})", v.param, v.expr, rep)
                            }
                            _ => println!("  {} -> {}", v.param, v.expr),
                        }
                    }
                    if spec.locally_not_globally {
                        println!(
                            "note: specialization is locally but not globally identifiable \
                             (formal roots of degree >= 2)"
                        );
                    }
                }
                if let Some(t) = &r.transform {
                    for e in &t.entries {
                        match &e.solved {
                            Some(h) => println!("  {} = {}", e.state, h),
                            None => println!("  {}: {} = 0", e.state, e.defining),
                        }
                    }
                    println!(
                        "closure: {:?}, input-independent: {}",
                        t.closure, t.u_independent
                    );
                }
                println!("same io-equations: {:?}", r.verification.same_io);
                for p in &written {
                    println!("wrote {}", p.display());
                }
            }
            if outcome.transform_unavailable {
                eprintln!(
                    "transform unavailable: observability condition false; \
                     rerun with --reduce for a lower-dimensional realization"
                );
                return Ok(ExitCode::from(4));
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Verify {
            old,
            new,
            transform,
            tol,
            json,
            seed,
            trials,
        } => {
            let (old_src, _) = read_model(&old)?;
            let (new_src, _) = read_model(&new)?;
            let artifact_text = std::fs::read_to_string(&transform).map_err(|e| {
                Error::Validation(format!("cannot read {}: {e}", transform.display()))
            })?;
            let artifact: serde_json::Value = serde_json::from_str(&artifact_text)
                .map_err(|e| Error::Validation(format!("bad transform artifact: {e}")))?;
            let setup = pipeline::verify_setup(&old_src, &new_src, &artifact)?;
            let cfg = SimConfig {
                samples: trials,
                seed,
                ..Default::default()
            };
            let report = cross_validate(
                &setup.old,
                &setup.new,
                &setup.new_param_exprs,
                &setup.solved,
                &setup.avoid,
                &cfg,
            )?;
            let pass = report.worst() < tol;
            if json {
                println!(
                    "{}",
                    serde_json::json!({
                        "max_deviation": report.max_deviation,
                        "samples": report.samples,
                        "failures": report.failures,
                        "tolerance": tol,
                        "pass": pass,
                    })
                );
            } else {
                for (i, d) in report.max_deviation.iter().enumerate() {
                    println!("output {}: max deviation {d:.3e}", i + 1);
                }
                println!(
                    "verdict: {} (tolerance {tol:.1e}, {} samples)",
                    if pass { "PASS" } else { "FAIL" },
                    report.samples
                );
            }
            if pass {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(5))
            }
        }
    }
}
