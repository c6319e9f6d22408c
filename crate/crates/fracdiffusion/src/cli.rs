//! Run configuration, the benchmark subcommand implementations and their
//! CSV outputs, and the diagnostic selftest.
//!
//! Configuration comes from flags plus an optional flat `key=value` config
//! file (flags override the file). CSV files use a comma separator, `.`
//! decimal point, a header row and LF line endings; table entries carry 4
//! significant digits like the printed benchmark tables, plot data full
//! precision. Identical configurations produce byte-identical files.

use crate::exact::{self, SeriesSolution};
use crate::fem::SpatialGrid;
use crate::kernel::GradedMesh;
use crate::metrics::{self, ConvergenceReport};
use crate::mlf;
use crate::stepper::{self, ProblemSpec};
use crate::{analysis, Error, Result, SpaceFn, SpaceTimeFn};
use rand::Rng;
use rand::SeedableRng;
use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

/// Which benchmark problem a study runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExampleChoice {
    /// κ ≡ 1, f ≡ 0, u₀ = x(1−x), α defaults to 0.5.
    One,
    /// κ ≡ 1, f ≡ 0, u₀ = 1 − 2|x−½|, α defaults to 0.7.
    Two,
    /// Problem data picked from the named registry (solve only; no
    /// closed-form reference).
    Custom,
}

/// Named problem data for `--example custom`, selected by config keys.
#[derive(Debug, Clone)]
pub struct CustomProblem {
    /// `one` | `linear`
    pub kappa: String,
    /// `zero` | `parabola` | `hat`
    pub u0: String,
    /// `zero` | `one` | `tx`
    pub source: String,
}

impl Default for CustomProblem {
    fn default() -> Self {
        CustomProblem {
            kappa: "one".into(),
            u0: "zero".into(),
            source: "zero".into(),
        }
    }
}

/// Fully resolved study configuration.
#[derive(Debug, Clone)]
pub struct StudyConfig {
    pub example: ExampleChoice,
    pub alpha: f64,
    pub gammas: Vec<f64>,
    pub ns: Vec<usize>,
    pub m: usize,
    pub terms: usize,
    pub out_dir: PathBuf,
    pub custom: CustomProblem,
}

/// Partially specified configuration, as read from flags or a config file.
/// Later overlays win field by field.
#[derive(Debug, Clone, Default)]
pub struct ConfigOverlay {
    pub example: Option<String>,
    pub alpha: Option<f64>,
    pub gammas: Option<Vec<f64>>,
    pub ns: Option<Vec<usize>>,
    pub m: Option<usize>,
    pub terms: Option<usize>,
    pub out: Option<PathBuf>,
    pub kappa: Option<String>,
    pub u0: Option<String>,
    pub source: Option<String>,
}

fn config_err(field: &str, reason: impl Into<String>) -> Error {
    Error::Config {
        field: field.into(),
        reason: reason.into(),
    }
}

fn parse_list<T: std::str::FromStr>(field: &str, raw: &str) -> Result<Vec<T>> {
    raw.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<T>()
                .map_err(|_| config_err(field, format!("cannot parse `{s}`")))
        })
        .collect()
}

impl ConfigOverlay {
    /// Read a flat `key = value` file; `#` starts a comment line.
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| {
            Error::Io(std::io::Error::new(
                e.kind(),
                format!("{}: {e}", path.display()),
            ))
        })?;
        let mut overlay = ConfigOverlay::default();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(config_err(
                    "config",
                    format!("{}:{}: expected key=value", path.display(), lineno + 1),
                ));
            };
            let key = key.trim();
            let value = value.trim();
            match key {
                "example" => overlay.example = Some(value.to_string()),
                "alpha" => {
                    overlay.alpha = Some(
                        value
                            .parse()
                            .map_err(|_| config_err("alpha", format!("cannot parse `{value}`")))?,
                    )
                }
                "gamma" => overlay.gammas = Some(parse_list("gamma", value)?),
                "n" => overlay.ns = Some(parse_list("n", value)?),
                "m" => {
                    overlay.m = Some(
                        value
                            .parse()
                            .map_err(|_| config_err("m", format!("cannot parse `{value}`")))?,
                    )
                }
                "terms" => {
                    overlay.terms = Some(
                        value
                            .parse()
                            .map_err(|_| config_err("terms", format!("cannot parse `{value}`")))?,
                    )
                }
                "out" => overlay.out = Some(PathBuf::from(value)),
                "kappa" => overlay.kappa = Some(value.to_string()),
                "u0" => overlay.u0 = Some(value.to_string()),
                "source" => overlay.source = Some(value.to_string()),
                other => {
                    return Err(config_err(
                        "config",
                        format!("{}:{}: unknown key `{other}`", path.display(), lineno + 1),
                    ))
                }
            }
        }
        Ok(overlay)
    }

    /// Apply `over` on top of `self`.
    pub fn merge(mut self, over: ConfigOverlay) -> ConfigOverlay {
        macro_rules! take {
            ($($f:ident),*) => { $( if over.$f.is_some() { self.$f = over.$f; } )* };
        }
        take!(example, alpha, gammas, ns, m, terms, out, kappa, u0, source);
        self
    }

    /// Fill in defaults and validate.
    pub fn resolve(self) -> Result<StudyConfig> {
        let example = match self.example.as_deref().unwrap_or("1") {
            "1" => ExampleChoice::One,
            "2" => ExampleChoice::Two,
            "custom" => ExampleChoice::Custom,
            other => {
                return Err(config_err(
                    "example",
                    format!("expected 1, 2 or custom, got `{other}`"),
                ))
            }
        };
        let alpha = self.alpha.unwrap_or(match example {
            ExampleChoice::One | ExampleChoice::Custom => 0.5,
            ExampleChoice::Two => 0.7,
        });
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(config_err("alpha", format!("must lie in (0,1], got {alpha}")));
        }
        let gammas = self.gammas.unwrap_or_else(|| vec![1.0, 2.0, 3.0, 4.0]);
        if gammas.is_empty() {
            return Err(config_err("gamma", "need at least one value"));
        }
        if let Some(g) = gammas.iter().find(|g| !(**g >= 1.0)) {
            return Err(config_err("gamma", format!("must be >= 1, got {g}")));
        }
        let ns = self.ns.unwrap_or_else(|| vec![8, 16, 32, 64, 128]);
        if ns.is_empty() {
            return Err(config_err("n", "need at least one value"));
        }
        if ns.contains(&0) {
            return Err(config_err("n", "step counts must be positive"));
        }
        let m = self.m.unwrap_or(2048);
        if m < 2 {
            return Err(config_err("m", format!("need at least 2 subintervals, got {m}")));
        }
        if example == ExampleChoice::Two && m % 2 != 0 {
            return Err(config_err(
                "m",
                "must be even for example 2 (the initial-data kink must sit on a grid node)",
            ));
        }
        let terms = self.terms.unwrap_or(60);
        if terms == 0 {
            return Err(config_err("terms", "need at least one series term"));
        }
        let custom = CustomProblem {
            kappa: self.kappa.unwrap_or_else(|| "one".into()),
            u0: self.u0.unwrap_or_else(|| "zero".into()),
            source: self.source.unwrap_or_else(|| "zero".into()),
        };
        match custom.kappa.as_str() {
            "one" | "linear" => {}
            other => return Err(config_err("kappa", format!("unknown diffusivity `{other}`"))),
        }
        match custom.u0.as_str() {
            "zero" | "parabola" | "hat" => {}
            other => return Err(config_err("u0", format!("unknown initial data `{other}`"))),
        }
        match custom.source.as_str() {
            "zero" | "one" | "tx" => {}
            other => return Err(config_err("source", format!("unknown source `{other}`"))),
        }
        Ok(StudyConfig {
            example,
            alpha,
            gammas,
            ns,
            m,
            terms,
            out_dir: self.out.unwrap_or_else(|| PathBuf::from(".")),
            custom,
        })
    }
}

/// Problem data for the configured example.
pub fn problem(cfg: &StudyConfig) -> Result<ProblemSpec> {
    match cfg.example {
        ExampleChoice::One => exact::example1_problem(cfg.alpha),
        ExampleChoice::Two => exact::example2_problem(cfg.alpha),
        ExampleChoice::Custom => {
            let kappa: SpaceFn = match cfg.custom.kappa.as_str() {
                "one" => Arc::new(|_| 1.0),
                _ => Arc::new(|x| 1.0 + x),
            };
            let (u0, u0_prime): (SpaceFn, SpaceFn) = match cfg.custom.u0.as_str() {
                "zero" => (Arc::new(|_| 0.0), Arc::new(|_| 0.0)),
                "parabola" => (
                    Arc::new(|x: f64| x * (1.0 - x)),
                    Arc::new(|x: f64| 1.0 - 2.0 * x),
                ),
                _ => (
                    Arc::new(|x: f64| 1.0 - 2.0 * (x - 0.5).abs()),
                    Arc::new(|x: f64| if x < 0.5 { 2.0 } else { -2.0 }),
                ),
            };
            let source: SpaceTimeFn = match cfg.custom.source.as_str() {
                "zero" => Arc::new(|_, _| 0.0),
                "one" => Arc::new(|_, _| 1.0),
                _ => Arc::new(|x, t| t * x),
            };
            if cfg.custom.u0 == "hat" && cfg.m % 2 != 0 {
                return Err(config_err("m", "must be even when u0 = hat"));
            }
            ProblemSpec::new(cfg.alpha, 1.0, kappa, source, u0, u0_prime)
        }
    }
}

/// Series reference for the configured example; custom problems have none.
pub fn reference(cfg: &StudyConfig) -> Result<SeriesSolution> {
    match cfg.example {
        ExampleChoice::One => exact::example1(cfg.alpha, cfg.terms),
        ExampleChoice::Two => exact::example2(cfg.alpha, cfg.terms),
        ExampleChoice::Custom => Err(config_err(
            "example",
            "custom problems have no closed-form reference; use example 1 or 2",
        )),
    }
}

fn create(path: &Path) -> Result<BufWriter<fs::File>> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir).map_err(|e| {
                Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", dir.display())))
            })?;
        }
    }
    let file = fs::File::create(path).map_err(|e| {
        Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display())))
    })?;
    Ok(BufWriter::new(file))
}

fn single<T: Copy>(field: &str, values: &[T]) -> Result<T> {
    if values.len() == 1 {
        Ok(values[0])
    } else {
        Err(config_err(
            field,
            format!("this command needs exactly one value, got {}", values.len()),
        ))
    }
}

/// Run one solve and write `solution.csv` (`t,x,value`, one row per time
/// level per grid node). Returns the file path.
pub fn cmd_solve(cfg: &StudyConfig) -> Result<PathBuf> {
    let gamma = single("gamma", &cfg.gammas)?;
    let n = single("n", &cfg.ns)?;
    let spec = problem(cfg)?;
    let mesh = GradedMesh::new(spec.t_final, n, gamma)?;
    let grid = SpatialGrid::new(cfg.m)?;
    let traj = stepper::run(&spec, &mesh, &grid)?;

    let path = cfg.out_dir.join("solution.csv");
    let mut out = create(&path)?;
    writeln!(out, "t,x,value")?;
    for (level, coeffs) in traj.u.iter().enumerate() {
        let t = mesh.t[level];
        for (i, &x) in grid.x.iter().enumerate() {
            let value = if i == 0 || i == grid.m { 0.0 } else { coeffs[i - 1] };
            writeln!(out, "{t:e},{x:e},{value:e}")?;
        }
    }
    out.flush()?;
    Ok(path)
}

/// Run the (N, γ) sweep and write `table.csv`
/// (`N,gamma,E_tau,CR,E_L2,CR_L2`, rates blank on the first N of each γ).
pub fn cmd_convergence(cfg: &StudyConfig) -> Result<PathBuf> {
    for w in cfg.ns.windows(2) {
        if w[1] != 2 * w[0] {
            return Err(config_err(
                "n",
                format!("rate computation needs a doubling sequence, got {} after {}", w[1], w[0]),
            ));
        }
    }
    let sol = reference(cfg)?;
    let spec = problem(cfg)?;
    let grid = SpatialGrid::new(cfg.m)?;
    let mut entries = Vec::new();
    for &gamma in &cfg.gammas {
        for &n in &cfg.ns {
            let mesh = GradedMesh::new(spec.t_final, n, gamma)?;
            let traj = stepper::run(&spec, &mesh, &grid)?;
            let e_tau = metrics::linf_l2_error(&traj, &sol)?;
            let e_l2 = metrics::l2_l2_error(&traj, &sol)?;
            entries.push((n, gamma, e_tau, e_l2));
        }
    }
    let report = ConvergenceReport::from_errors(&entries)?;

    let path = cfg.out_dir.join("table.csv");
    let mut out = create(&path)?;
    writeln!(out, "N,gamma,E_tau,CR,E_L2,CR_L2")?;
    for row in &report.rows {
        let cr = row.cr.map(|v| format!("{v:.3}")).unwrap_or_default();
        let cr_l2 = row.cr_l2.map(|v| format!("{v:.3}")).unwrap_or_default();
        writeln!(
            out,
            "{},{},{:.3e},{cr},{:.3e},{cr_l2}",
            row.n_steps, row.gamma, row.e_tau, row.e_l2
        )?;
    }
    out.flush()?;
    Ok(path)
}

/// For each γ, run at the single configured N and write
/// `nodal_errors_<gamma>.csv` (`t_n,error`). Returns the file paths.
pub fn cmd_nodal_errors(cfg: &StudyConfig) -> Result<Vec<PathBuf>> {
    let n = single("n", &cfg.ns)?;
    let sol = reference(cfg)?;
    let spec = problem(cfg)?;
    let grid = SpatialGrid::new(cfg.m)?;
    let mut paths = Vec::new();
    for &gamma in &cfg.gammas {
        let mesh = GradedMesh::new(spec.t_final, n, gamma)?;
        let traj = stepper::run(&spec, &mesh, &grid)?;
        let errors = metrics::nodal_l2_errors(&traj, &sol)?;
        let path = cfg.out_dir.join(format!("nodal_errors_{gamma}.csv"));
        let mut out = create(&path)?;
        writeln!(out, "t_n,error")?;
        for (k, err) in errors.iter().enumerate() {
            writeln!(out, "{:e},{err:e}", mesh.t[k + 1])?;
        }
        out.flush()?;
        paths.push(path);
    }
    Ok(paths)
}

/// Spot evaluation of E_α(−x).
pub fn cmd_mlf(alpha: f64, x: f64) -> Result<f64> {
    mlf::mlf_neg(alpha, x)
}

/// Deterministic diagnostic suite over the analysis module. Prints one
/// line per check; returns an accuracy error if any tolerance is missed.
pub fn cmd_selftest() -> Result<()> {
    let mut failures = Vec::new();

    // implicit interpolant: slab averages preserved to 1e−12 relative
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(101);
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let n = rng.gen_range(1..=40usize);
        let mesh =
            GradedMesh::new(rng.gen_range(0.5..3.0), n, rng.gen_range(1.0..5.0)).unwrap();
        let ints: Vec<f64> = (0..n)
            .map(|j| rng.gen_range(-2.0..2.0) * mesh.tau[j])
            .collect();
        let v0 = rng.gen_range(-1.0..1.0);
        let hat = analysis::implicit_interpolant(&mesh, &ints, v0)?;
        for j in 1..=n {
            let avg = 0.5 * (hat.values[j - 1] + hat.values[j]) * mesh.tau[j - 1];
            worst = worst.max((avg - ints[j - 1]).abs() / ints[j - 1].abs().max(1.0));
        }
    }
    report(&mut failures, "implicit-interpolant average preservation", worst, 1e-12);

    // alternating-sum identity over 100 random smooth cases
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(103);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let n_steps = rng.gen_range(1..=12usize);
        let mesh =
            GradedMesh::new(rng.gen_range(0.5..2.0), n_steps, rng.gen_range(1.0..4.0)).unwrap();
        let (a, b, c, d, w) = (
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-0.5..0.5),
            rng.gen_range(0.5..4.0),
        );
        let v = move |t: f64| a + b * t + c * t * t + d * (w * t).sin();
        let n = rng.gen_range(1..=n_steps);
        let (lhs, rhs) = analysis::psi_alternating_sum(&mesh, v, n);
        worst = worst.max((lhs - rhs).abs());
    }
    report(&mut failures, "alternating-sum identity", worst, 1e-8);

    // fractional energy nonnegative over 1000 random cases
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(107);
    let mut min_energy = f64::INFINITY;
    for _ in 0..1000 {
        let n = rng.gen_range(1..=50usize);
        let mesh =
            GradedMesh::new(rng.gen_range(0.5..2.0), n, rng.gen_range(1.0..5.0)).unwrap();
        let alpha = rng.gen_range(0.02f64..=1.0);
        let nodal: Vec<f64> = (0..=n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        min_energy = min_energy.min(analysis::frac_energy(&mesh, alpha, &nodal));
    }
    report(
        &mut failures,
        "fractional energy positivity",
        (-min_energy).max(0.0),
        1e-12,
    );

    if failures.is_empty() {
        Ok(())
    } else {
        Err(Error::Accuracy(format!(
            "selftest failed: {}",
            failures.join(", ")
        )))
    }
}

fn report(failures: &mut Vec<String>, name: &str, defect: f64, tol: f64) {
    if defect <= tol {
        println!("selftest {name}: ok (defect {defect:.2e} <= {tol:.0e})");
    } else {
        println!("selftest {name}: FAIL (defect {defect:.2e} > {tol:.0e})");
        failures.push(name.to_string());
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_match_the_benchmark_setup() {
        let cfg = ConfigOverlay::default().resolve().unwrap();
        assert_eq!(cfg.example, ExampleChoice::One);
        assert_eq!(cfg.alpha, 0.5);
        assert_eq!(cfg.gammas, vec![1.0, 2.0, 3.0, 4.0]);
        assert_eq!(cfg.ns, vec![8, 16, 32, 64, 128]);
        assert_eq!(cfg.m, 2048);
        assert_eq!(cfg.terms, 60);

        let two = ConfigOverlay {
            example: Some("2".into()),
            ..Default::default()
        }
        .resolve()
        .unwrap();
        assert_eq!(two.alpha, 0.7);
    }

    #[test]
    fn validation_names_the_offending_field() {
        let bad = ConfigOverlay {
            alpha: Some(1.5),
            ..Default::default()
        }
        .resolve();
        match bad {
            Err(Error::Config { field, .. }) => assert_eq!(field, "alpha"),
            other => panic!("expected config error, got {other:?}"),
        }

        let bad = ConfigOverlay {
            example: Some("2".into()),
            m: Some(129),
            ..Default::default()
        }
        .resolve();
        match bad {
            Err(Error::Config { field, .. }) => assert_eq!(field, "m"),
            other => panic!("expected config error, got {other:?}"),
        }

        let bad = ConfigOverlay {
            gammas: Some(vec![0.5]),
            ..Default::default()
        }
        .resolve();
        assert!(matches!(bad, Err(Error::Config { .. })));
    }

    #[test]
    fn overlays_merge_with_flag_priority() {
        let file = ConfigOverlay {
            alpha: Some(0.3),
            m: Some(64),
            ..Default::default()
        };
        let flags = ConfigOverlay {
            alpha: Some(0.9),
            ..Default::default()
        };
        let cfg = file.merge(flags).resolve().unwrap();
        assert_eq!(cfg.alpha, 0.9);
        assert_eq!(cfg.m, 64);
    }

    #[test]
    fn selftest_passes() {
        cmd_selftest().unwrap();
    }
}
