use fracdiffusion::cli::{self, ConfigOverlay, StudyConfig};
use fracdiffusion::Error;
use std::path::PathBuf;
use std::process::ExitCode;

const USAGE: &str = "\
usage: fracdiffusion <subcommand> [flags]

subcommands:
  solve          run one solve and write solution.csv
  convergence    run the (N, gamma) sweep and write table.csv
  nodal-errors   write nodal_errors_<gamma>.csv for each gamma at one N
  mlf <alpha> <x>  print E_alpha(-x) to 15 significant digits
  selftest       run the diagnostic suite (exit 2 on accuracy failure)

flags (study subcommands):
  --example {1|2|custom}   benchmark problem (default 1)
  --alpha A                fractional order in (0,1]
  --gamma G                mesh grading exponent, repeatable
  --n N                    number of time steps, repeatable
  --m M                    spatial subintervals (default 2048)
  --terms K                reference series truncation (default 60)
  --out DIR                output directory (default .)
  --config FILE            flat key=value config file; flags override it
";

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    match dispatch(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            match err {
                Error::Accuracy(_) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}

fn dispatch(args: &[String]) -> fracdiffusion::Result<()> {
    let Some(cmd) = args.first() else {
        eprint!("{USAGE}");
        return Err(Error::Config {
            field: "subcommand".into(),
            reason: "missing".into(),
        });
    };
    match cmd.as_str() {
        "solve" => {
            let cfg = study_config(&args[1..])?;
            let path = cli::cmd_solve(&cfg)?;
            println!("wrote {}", path.display());
        }
        "convergence" => {
            let cfg = study_config(&args[1..])?;
            let path = cli::cmd_convergence(&cfg)?;
            println!("wrote {}", path.display());
        }
        "nodal-errors" => {
            let cfg = study_config(&args[1..])?;
            for path in cli::cmd_nodal_errors(&cfg)? {
                println!("wrote {}", path.display());
            }
        }
        "mlf" => {
            let [alpha, x] = positional_pair(&args[1..])?;
            let value = cli::cmd_mlf(alpha, x)?;
            println!("{value:.14e}");
        }
        "selftest" => cli::cmd_selftest()?,
        "help" | "--help" | "-h" => print!("{USAGE}"),
        other => {
            eprint!("{USAGE}");
            return Err(Error::Config {
                field: "subcommand".into(),
                reason: format!("unknown subcommand `{other}`"),
            });
        }
    }
    Ok(())
}

fn positional_pair(args: &[String]) -> fracdiffusion::Result<[f64; 2]> {
    if args.len() != 2 {
        return Err(Error::Config {
            field: "mlf".into(),
            reason: format!("expected `mlf <alpha> <x>`, got {} arguments", args.len()),
        });
    }
    let alpha = args[0].parse().map_err(|_| Error::Config {
        field: "alpha".into(),
        reason: format!("cannot parse `{}`", args[0]),
    })?;
    let x = args[1].parse().map_err(|_| Error::Config {
        field: "x".into(),
        reason: format!("cannot parse `{}`", args[1]),
    })?;
    Ok([alpha, x])
}

fn study_config(args: &[String]) -> fracdiffusion::Result<StudyConfig> {
    let mut flags = ConfigOverlay::default();
    let mut config_path: Option<PathBuf> = None;
    let mut gammas: Vec<f64> = Vec::new();
    let mut ns: Vec<usize> = Vec::new();

    let mut iter = args.iter();
    while let Some(flag) = iter.next() {
        let mut value_for = |field: &str| -> fracdiffusion::Result<&String> {
            iter.next().ok_or_else(|| Error::Config {
                field: field.into(),
                reason: "missing value".into(),
            })
        };
        match flag.as_str() {
            "--example" => flags.example = Some(value_for("example")?.clone()),
            "--alpha" => {
                let raw = value_for("alpha")?;
                flags.alpha = Some(raw.parse().map_err(|_| Error::Config {
                    field: "alpha".into(),
                    reason: format!("cannot parse `{raw}`"),
                })?);
            }
            "--gamma" => {
                let raw = value_for("gamma")?;
                gammas.push(raw.parse().map_err(|_| Error::Config {
                    field: "gamma".into(),
                    reason: format!("cannot parse `{raw}`"),
                })?);
            }
            "--n" => {
                let raw = value_for("n")?;
                ns.push(raw.parse().map_err(|_| Error::Config {
                    field: "n".into(),
                    reason: format!("cannot parse `{raw}`"),
                })?);
            }
            "--m" => {
                let raw = value_for("m")?;
                flags.m = Some(raw.parse().map_err(|_| Error::Config {
                    field: "m".into(),
                    reason: format!("cannot parse `{raw}`"),
                })?);
            }
            "--terms" => {
                let raw = value_for("terms")?;
                flags.terms = Some(raw.parse().map_err(|_| Error::Config {
                    field: "terms".into(),
                    reason: format!("cannot parse `{raw}`"),
                })?);
            }
            "--out" => flags.out = Some(PathBuf::from(value_for("out")?)),
            "--config" => config_path = Some(PathBuf::from(value_for("config")?)),
            "--kappa" => flags.kappa = Some(value_for("kappa")?.clone()),
            "--u0" => flags.u0 = Some(value_for("u0")?.clone()),
            "--source" => flags.source = Some(value_for("source")?.clone()),
            other => {
                return Err(Error::Config {
                    field: "flags".into(),
                    reason: format!("unknown flag `{other}`"),
                })
            }
        }
    }
    if !gammas.is_empty() {
        flags.gammas = Some(gammas);
    }
    if !ns.is_empty() {
        flags.ns = Some(ns);
    }
    let base = match config_path {
        Some(path) => ConfigOverlay::from_file(&path)?,
        None => ConfigOverlay::default(),
    };
    base.merge(flags).resolve()
}
