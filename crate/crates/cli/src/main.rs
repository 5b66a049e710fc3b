//! `genbound`: bound tables, cover diagnostics, stability audits and
//! verification runs.
//!
//! Exit status: 0 on success, 1 when a check fails, 2 on bad input or when an
//! enumeration would exceed the type cap.

mod table;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use genbound::bounds::{asymptotic_report, best_bound, catalog, gen_error_from_mi, information_bounds, pac_bayes_gen_bound, BoundId};
use genbound::covering::{
    build_full_grid_cover, build_simplex_grid_cover, build_typical_cover, verify_cover, CoverKind,
};
use genbound::oracle::{exact_expected_gen_error, mc_expected_gen_error, run_verification, ExperimentConfig};
use genbound::privacy::{gaussian_mechanism_neighbor_kl, kl_stability_bound, verify_kl_stability, Mechanism, PrivacyParams};
use genbound::types::{SourceDistribution, TypeCap};
use genbound::Error;

use table::{Cell, Format, Table};

/// Monte-Carlo agreement band, in standard errors.
const MC_SIGMAS: f64 = 4.0;

#[derive(Parser)]
#[command(name = "genbound", version, about = "Information-theoretic generalization bounds on finite alphabets")]
struct Cli {
    /// Report format.
    #[arg(long, value_enum, default_value = "csv", global = true)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct PrivacyArgs {
    /// ε of an ε-DP guarantee.
    #[arg(long, conflicts_with = "mu")]
    epsilon: Option<f64>,
    /// μ of a μ-GDP guarantee.
    #[arg(long)]
    mu: Option<f64>,
}

impl PrivacyArgs {
    fn get(self) -> genbound::Result<PrivacyParams> {
        match (self.epsilon, self.mu) {
            (Some(e), None) => PrivacyParams::epsilon_dp(e),
            (None, Some(m)) => PrivacyParams::mu_gdp(m),
            (None, None) => Ok(PrivacyParams::None),
            (Some(_), Some(_)) => Err(Error::Input("--epsilon and --mu are mutually exclusive".into())),
        }
    }
}

#[derive(Args, Clone, Copy)]
struct SpaceArgs {
    /// |Z|, at least 2.
    #[arg(long)]
    alphabet_size: usize,
    /// Dataset size N, at least 1.
    #[arg(long)]
    n: u64,
}

impl SpaceArgs {
    fn check(self) -> genbound::Result<()> {
        if self.alphabet_size < 2 {
            return Err(Error::Input(format!("--alphabet-size must be >= 2, got {}", self.alphabet_size)));
        }
        if self.n < 1 {
            return Err(Error::Input("--n must be >= 1".into()));
        }
        Ok(())
    }
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate every bound at the given parameters.
    Bounds {
        #[command(flatten)]
        space: SpaceArgs,
        #[command(flatten)]
        privacy: PrivacyArgs,
        /// Sub-Gaussian parameter of the loss; enables generalization-error columns.
        #[arg(long)]
        sigma: Option<f64>,
        /// Failure probability of the high-probability bound.
        #[arg(long)]
        beta: Option<f64>,
    },
    /// Build a cover and verify its radius exhaustively.
    Cover {
        #[command(flatten)]
        space: SpaceArgs,
        /// Cells per dimension.
        #[arg(long)]
        t: u64,
        /// full_grid, simplex_grid or typical_grid.
        #[arg(long, default_value = "simplex_grid")]
        kind: CoverKind,
        /// Comma-separated source distribution for typical covers (default uniform).
        #[arg(long)]
        source: Option<String>,
    },
    /// Audit the KL stability envelope of a mechanism.
    Stability {
        #[command(flatten)]
        space: SpaceArgs,
        #[command(flatten)]
        privacy: PrivacyArgs,
        /// Mechanism kernel CSV; defaults to the exponential mechanism for --epsilon
        /// and the closed-form Gaussian mechanism for --mu.
        #[arg(long)]
        mechanism: Option<PathBuf>,
        /// Also save the audited mechanism here.
        #[arg(long)]
        save_mechanism: Option<PathBuf>,
    },
    /// Check every applicable bound against the exact mutual information.
    VerifyMi {
        /// Experiment config file.
        #[arg(long)]
        config: PathBuf,
    },
    /// Compare a Monte-Carlo estimate of the generalization error with its exact value.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        /// Overrides the config seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Overrides the config sample count.
        #[arg(long)]
        mc_samples: Option<u64>,
    },
    /// List every bound with its formula and regime.
    Catalog,
}

/// A report plus whether every check in it passed.
struct Outcome {
    table: Table,
    pass: bool,
    failure: Option<String>,
}

fn ok(table: Table) -> Outcome {
    Outcome {
        table,
        pass: true,
        failure: None,
    }
}

fn bounds(space: SpaceArgs, privacy: PrivacyParams, sigma: Option<f64>, beta: Option<f64>) -> genbound::Result<Outcome> {
    space.check()?;
    let (k, n) = (space.alphabet_size, space.n);
    if let Some(s) = sigma {
        if !(s >= 0.0 && s.is_finite()) {
            return Err(Error::Input(format!("--sigma must be >= 0, got {s}")));
        }
    }
    if let Some(b) = beta {
        if !(b > 0.0 && b < 1.0) {
            return Err(Error::Input(format!("--beta must lie in (0, 1), got {b}")));
        }
    }
    let mut t = Table::new(vec!["bound_id", "value_nats", "gen_error_value", "applicable", "asymptotic_only", "regime_note"]);
    let mut row = |id: BoundId, value: Cell, gen: Cell, applicable: bool, note: String| {
        t.push(vec![
            Cell::from(id.as_str()),
            value,
            gen,
            Cell::Bool(applicable),
            Cell::Bool(id.is_asymptotic()),
            Cell::Text(note),
        ]);
    };
    for r in information_bounds(privacy, k, n)? {
        let gen = sigma.map(|s| gen_error_from_mi(s, n, r.value)).transpose()?;
        row(r.id, Cell::Num(r.value), Cell::opt(gen), r.applicable, r.regime_note);
    }
    if let Some(s) = sigma {
        let best = best_bound(privacy, s, k, n)?;
        let w = &best.winner;
        row(BoundId::GenErrorFromMi, Cell::Num(w.value), Cell::Num(best.gen_error), true, w.regime_note.clone());
        if let Some(b) = beta {
            let g = pac_bayes_gen_bound(s, n, w.value, b)?;
            row(BoundId::PacBayes, Cell::Num(w.value), Cell::Num(g), true, format!("with probability 1 - {b}; KL from {}", w.id));
        }
        if n >= 2 {
            let gamma = privacy.value();
            for r in asymptotic_report(s, gamma.unwrap_or(1.0), k, n)? {
                let private = matches!(r.id, BoundId::GenPrivateTypical | BoundId::GenPrivateCover);
                if private && gamma.is_none() {
                    continue;
                }
                let (value, gen) = if r.id == BoundId::MultinomialEntropy {
                    (Cell::Num(r.value), Cell::Empty)
                } else {
                    (Cell::Empty, Cell::Num(r.value))
                };
                row(r.id, value, gen, r.applicable, r.regime_note);
            }
        }
    }
    Ok(ok(t))
}

fn cover(space: SpaceArgs, t: u64, kind: CoverKind, source: Option<String>, cap: TypeCap) -> genbound::Result<Outcome> {
    space.check()?;
    let (k, n) = (space.alphabet_size, space.n);
    let built = match kind {
        CoverKind::FullGrid => build_full_grid_cover(k, n, t, cap)?,
        CoverKind::SimplexGrid => build_simplex_grid_cover(k, n, t, cap)?,
        CoverKind::TypicalGrid => {
            let src = match source {
                Some(text) => SourceDistribution::new(parse_list(&text)?)?,
                None => SourceDistribution::uniform(k)?,
            };
            if src.dim() != k {
                return Err(Error::Input(format!("--source has {} entries, expected {k}", src.dim())));
            }
            build_typical_cover(&src, n, t, cap)?
        }
    };
    let check = verify_cover(&built, cap)?;
    let mut table = Table::new(vec![
        "kind",
        "alphabet_size",
        "n",
        "t",
        "center_count",
        "analytic_radius",
        "achieved_radius",
        "verified",
    ]);
    table.push(vec![
        Cell::from(kind.as_str()),
        Cell::Int(k as u64),
        Cell::Int(n),
        Cell::Int(t),
        Cell::Int(built.centers.len() as u64),
        Cell::Num(built.certified_radius),
        Cell::Int(check.achieved_radius),
        Cell::Bool(check.verified),
    ]);
    Ok(Outcome {
        table,
        pass: check.verified,
        failure: (!check.verified).then(|| format!("achieved radius {} exceeds {}", check.achieved_radius, built.certified_radius)),
    })
}

fn parse_list(text: &str) -> genbound::Result<Vec<f64>> {
    text.split(',')
        .map(|v| v.trim().parse::<f64>().map_err(|e| Error::Input(format!("bad number {v:?}: {e}"))))
        .collect()
}

fn stability(
    space: SpaceArgs,
    privacy: PrivacyParams,
    mechanism: Option<PathBuf>,
    save: Option<PathBuf>,
    cap: TypeCap,
) -> genbound::Result<Outcome> {
    space.check()?;
    let (k, n) = (space.alphabet_size, space.n);
    let mut table = Table::new(vec!["k", "max_kl", "bound", "pass"]);
    let mech = match (mechanism, privacy) {
        (_, PrivacyParams::None) => return Err(Error::Input("stability needs --epsilon or --mu".into())),
        (Some(path), p) => {
            let m = Mechanism::load(&path)?;
            if m.alphabet_size() != k || m.n() != n {
                return Err(Error::Input(format!(
                    "mechanism is for |Z| = {}, N = {}, not |Z| = {k}, N = {n}",
                    m.alphabet_size(),
                    m.n()
                )));
            }
            Some(m.with_privacy(p))
        }
        (None, PrivacyParams::EpsilonDp(e)) => Some(Mechanism::exponential(k, n, e, cap)?),
        (None, PrivacyParams::MuGdp(_)) => None,
    };
    let mut pass = true;
    match mech {
        Some(m) => {
            if let Some(path) = save {
                m.save(&path)?;
            }
            for r in verify_kl_stability(&m, cap)? {
                pass &= r.pass;
                table.push(vec![Cell::Int(r.k), Cell::Num(r.max_kl), Cell::Num(r.bound), Cell::Bool(r.pass)]);
            }
        }
        None => {
            if save.is_some() {
                return Err(Error::Input("the Gaussian mechanism has no finite kernel to save".into()));
            }
            let mu = privacy.value().expect("mu present");
            for d in 1..=n {
                let kl = gaussian_mechanism_neighbor_kl(mu, d)?;
                let bound = kl_stability_bound(privacy, d)?;
                let ok = kl <= bound + genbound::privacy::STABILITY_TOLERANCE;
                pass &= ok;
                table.push(vec![Cell::Int(d), Cell::Num(kl), Cell::Num(bound), Cell::Bool(ok)]);
            }
        }
    }
    Ok(Outcome {
        table,
        pass,
        failure: (!pass).then(|| "KL exceeds the stability envelope".to_string()),
    })
}

fn verify_mi(config: PathBuf, cap: TypeCap) -> genbound::Result<Outcome> {
    let cfg = ExperimentConfig::from_file(&config, cap)?;
    let rep = run_verification(&cfg, cap)?;
    let mut table = Table::new(vec![
        "record",
        "bound_id",
        "value",
        "compared",
        "slack",
        "pointwise_slack",
        "cover_centers",
        "applicable",
        "pass",
    ]);
    for c in &rep.checks {
        table.push(vec![
            Cell::from("bound"),
            Cell::from(c.id.as_str()),
            Cell::Num(c.value),
            Cell::Num(c.compared),
            Cell::Num(c.slack),
            Cell::opt(c.pointwise_slack),
            c.cover_centers.map_or(Cell::Empty, |v| Cell::Int(v as u64)),
            Cell::Bool(c.applicable),
            Cell::Bool(c.pass),
        ]);
    }
    let gen_pass = rep.gen_slack >= -genbound::oracle::EXACT_TOLERANCE;
    table.push(vec![
        Cell::from("gen_error"),
        Cell::from(BoundId::GenErrorFromMi.as_str()),
        Cell::Num(rep.gen_bound),
        Cell::Num(rep.exact_gen_error.abs()),
        Cell::Num(rep.gen_slack),
        Cell::Empty,
        Cell::Empty,
        Cell::Bool(true),
        Cell::Bool(gen_pass),
    ]);
    table.push(vec![
        Cell::from("summary"),
        Cell::from("exact_mi"),
        Cell::Num(rep.exact_mi),
        Cell::Num(rep.sigma),
        Cell::Empty,
        Cell::Empty,
        Cell::Empty,
        Cell::Bool(true),
        Cell::Bool(rep.all_pass),
    ]);
    let failure = (!rep.all_pass).then(|| {
        let mut ids: Vec<&str> = rep.violations().iter().map(|id| id.as_str()).collect();
        if !gen_pass {
            ids.push(BoundId::GenErrorFromMi.as_str());
        }
        format!("violated: {}", ids.join(" "))
    });
    Ok(Outcome {
        table,
        pass: rep.all_pass,
        failure,
    })
}

fn simulate(config: PathBuf, seed: Option<u64>, mc: Option<u64>, cap: TypeCap) -> genbound::Result<Outcome> {
    let mut cfg = ExperimentConfig::from_file(&config, cap)?;
    if seed.is_some() || mc.is_some() {
        let (s, m) = (seed.unwrap_or(cfg.seed()), mc.unwrap_or(cfg.mc_samples()));
        cfg = cfg.with_mc(s, m);
    }
    let exact = exact_expected_gen_error(&cfg)?;
    let est = mc_expected_gen_error(&cfg)?;
    let dev = est.estimate - exact;
    let z = if est.standard_error > 0.0 {
        dev / est.standard_error
    } else if dev == 0.0 {
        0.0
    } else {
        f64::INFINITY
    };
    let pass = z.abs() <= MC_SIGMAS;
    let mut table = Table::new(vec!["seed", "mc_samples", "estimate", "standard_error", "exact", "z_score", "pass"]);
    table.push(vec![
        Cell::Int(cfg.seed()),
        Cell::Int(est.samples),
        Cell::Num(est.estimate),
        Cell::Num(est.standard_error),
        Cell::Num(exact),
        Cell::Num(z),
        Cell::Bool(pass),
    ]);
    Ok(Outcome {
        table,
        pass,
        failure: (!pass).then(|| format!("estimate is {z:.3} standard errors from the exact value")),
    })
}

fn catalog_table() -> Outcome {
    let mut t = Table::new(vec!["bound_id", "quantity", "formula", "regime", "asymptotic"]);
    for e in catalog() {
        t.push(vec![
            Cell::from(e.id.as_str()),
            Cell::from(e.quantity),
            Cell::from(e.formula),
            Cell::from(e.regime),
            Cell::Bool(e.asymptotic),
        ]);
    }
    ok(t)
}

fn run(cli: Cli) -> genbound::Result<Outcome> {
    let cap = TypeCap::from_env()?;
    match cli.command {
        Command::Bounds { space, privacy, sigma, beta } => bounds(space, privacy.get()?, sigma, beta),
        Command::Cover { space, t, kind, source } => cover(space, t, kind, source, cap),
        Command::Stability {
            space,
            privacy,
            mechanism,
            save_mechanism,
        } => stability(space, privacy.get()?, mechanism, save_mechanism, cap),
        Command::VerifyMi { config } => verify_mi(config, cap),
        Command::Simulate { config, seed, mc_samples } => simulate(config, seed, mc_samples, cap),
        Command::Catalog => Ok(catalog_table()),
    }
}

fn emit(table: &Table, format: Format, output: Option<&PathBuf>) -> io::Result<()> {
    match output {
        Some(path) => table.write(format, BufWriter::new(File::create(path)?)),
        None => table.write(format, io::stdout().lock()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (format, output) = (cli.format, cli.output.clone());
    let outcome = match run(cli) {
        Ok(o) => o,
        Err(e) => {
            let kind = match e {
                Error::Resource { .. } => "resource",
                _ => "input",
            };
            eprintln!("{}", serde_json::json!({ "status": "error", "kind": kind, "message": e.to_string() }));
            return ExitCode::from(2);
        }
    };
    if let Err(e) = emit(&outcome.table, format, output.as_ref()) {
        eprintln!("{}", serde_json::json!({ "status": "error", "kind": "io", "message": e.to_string() }));
        return ExitCode::from(2);
    }
    if outcome.pass {
        ExitCode::SUCCESS
    } else {
        let msg = outcome.failure.unwrap_or_default();
        let _ = writeln!(io::stderr(), "{}", serde_json::json!({ "status": "fail", "message": msg }));
        ExitCode::from(1)
    }
}
