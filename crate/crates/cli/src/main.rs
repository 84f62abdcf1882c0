//! `patrol-games`: values, bounds, strategies and oracle brackets for
//! patrolling and hiding games.
//!
//! Exit codes: 0 on success, 2 when the game is outside every implemented
//! regime, 1 on anything else (bad flags, unreadable files).

mod game;
mod output;
mod verbs;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::Parser;

use game::Instance;
use output::{Format, Record};
use verbs::{Opts, Point, Verb};

#[derive(Debug, Parser)]
#[command(name = "patrol-games", version, about = "Patrolling and hiding games on networks and planar regions")]
struct Cli {
    verb: Verb,
    /// One of N1, N2, circle, unit-interval, cantor, disc, unit-square.
    #[arg(long, conflicts_with = "game", required_unless_present = "game")]
    preset: Option<String>,
    /// JSON file `{"space": {...}, "m": .., "r": ..}`; with `m` it is a
    /// patrolling game, without a hiding game.
    #[arg(long)]
    game: Option<PathBuf>,
    /// Attack duration, a number or `start:step:stop`.
    #[arg(long)]
    m: Option<String>,
    /// Detection radius, a number or `start:step:stop`.
    #[arg(long)]
    r: Option<String>,
    /// Strategy shifts, oracle grid points per unit length, or extra
    /// verification points, depending on the verb.
    #[arg(long)]
    resolution: Option<usize>,
    #[arg(long, default_value_t = 1e-7)]
    tol: f64,
    /// Double-oracle iteration cap for `oracle`.
    #[arg(long, default_value_t = 200)]
    max_iter: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Defaults to csv when `--out` ends in `.csv`, json otherwise.
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long)]
    threads: Option<usize>,
}

fn points(inst: &Instance, cli: &Cli) -> Result<Vec<(Option<f64>, f64)>> {
    let ms = match (&cli.m, inst.m) {
        (Some(s), _) => Some(game::parse_range(s)?),
        (None, Some(m)) => Some(vec![m]),
        (None, None) => None,
    };
    let rs = match (&cli.r, inst.r) {
        (Some(s), _) => game::parse_range(s)?,
        (None, Some(r)) => vec![r],
        (None, None) => match &inst.space {
            patrol_games::SearchSpace::Network(_) => vec![0.0],
            _ => bail!("--r is required for a {} space", inst.space.kind()),
        },
    };
    if matches!(inst.space, patrol_games::SearchSpace::Network(_)) && ms.is_none() {
        bail!("network games are patrolling games; pass --m");
    }
    Ok(match ms {
        Some(ms) => ms.iter().flat_map(|&m| rs.iter().map(move |&r| (Some(m), r))).collect(),
        None => rs.into_iter().map(|r| (None, r)).collect(),
    })
}

fn run(cli: &Cli) -> Result<()> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().context("configuring the thread pool")?;
    }
    let inst = match (&cli.preset, &cli.game) {
        (Some(name), _) => game::preset(name)?,
        (None, Some(path)) => game::load(path)?,
        (None, None) => bail!("pass --preset or --game"),
    };
    let grid = points(&inst, cli)?;
    if cli.verb == Verb::Sweep && grid.len() < 2 {
        bail!("sweep needs a range, e.g. --m 0:0.1:5");
    }
    let opts = Opts { resolution: cli.resolution, tol: cli.tol, max_iter: cli.max_iter, seed: cli.seed };
    let mut records: Vec<Record> = Vec::new();
    for (m, r) in grid {
        let p = Point { inst: &inst, m, r };
        log::info!("{:?} at m={m:?} r={r}", cli.verb);
        records.extend(match cli.verb {
            Verb::Value => verbs::value(&p, &opts)?,
            Verb::Bounds | Verb::Sweep => verbs::bounds(&p, &opts)?,
            Verb::Strategy => verbs::strategy(&p, &opts)?,
            Verb::Oracle => verbs::oracle(&p, &opts)?,
            Verb::VerifyEqualizing => verbs::verify_equalizing(&p, &opts)?,
        });
    }
    let format = cli.format.unwrap_or(match &cli.out {
        Some(path) if path.extension().is_some_and(|e| e == "csv") => Format::Csv,
        _ => Format::Json,
    });
    match &cli.out {
        Some(path) => {
            let f = std::fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
            let mut w = std::io::BufWriter::new(f);
            output::write(&mut w, &records, format)?;
            w.flush()?;
        }
        None => output::write(std::io::stdout().lock(), &records, format)?,
    }
    Ok(())
}

fn is_domain_error(e: &anyhow::Error) -> bool {
    use patrol_games::Error as E;
    e.chain().any(|c| {
        matches!(
            c.downcast_ref::<E>(),
            Some(E::UnsupportedRegime(_) | E::UnsupportedGeometry(_) | E::NotEulerian(_) | E::BudgetExceeded { .. })
        )
    })
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter("PATROL_GAMES_LOG")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(if is_domain_error(&e) { 2 } else { 1 })
        }
    }
}
