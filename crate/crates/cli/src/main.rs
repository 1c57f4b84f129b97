use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context as _, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use fbcode::cache::{self, FoptCache};
use fbcode::constructions::{self, BuildSpec, Channel};
use fbcode::formats;
use fbcode::tables::{self, Context};
use fbcode_core::bounds::{BoundProblem, RefinedRange};
use fbcode_core::games::{Game, Oracle};
use fbcode_core::search::{SearchLimit, ZSpace};
use fbcode_core::strategy::{
    assemble_one_feedback, best_one_feedback_bsc_plan, corollary1_best, example_family_11, example_family_8,
    example_family_9, example_weight_family_9, m_ad, theorem2_count, BscCodeBook,
};
use fbcode_core::verify::{verify_strategy, AdversaryAction};

#[derive(Parser)]
#[command(name = "fbcode", version, about = "Single-error-correcting codes with feedback")]
struct Cli {
    /// Directory holding fopt_cache.tsv (default: $FBCODE_CACHE_DIR or ./cache).
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Recompute a published table and compare cell by cell.
    Reproduce {
        #[arg(value_parser = clap::value_parser!(u8).range(1..=5))]
        table: u8,
    },
    /// Construct a strategy and print its summary.
    Build {
        #[command(flatten)]
        spec: BuildArgs,
        /// Write the strategy as JSON.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Run the exhaustive single-error check on the result.
        #[arg(long)]
        verify: bool,
    },
    /// Closed-form message counts.
    Count {
        #[command(subcommand)]
        what: CountCmd,
    },
    /// Check a strategy file against every single error.
    Verify { file: PathBuf },
    /// Upper bound on the free points of a Z-channel code.
    Bound {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: u64,
        #[arg(long, default_value_t = 1)]
        t: usize,
        #[arg(long, value_enum, default_value_t = Refined::Sound)]
        refined: Refined,
    },
    /// Exact complete-feedback game values.
    Oracle {
        #[arg(long, value_enum)]
        game: GameArg,
        #[arg(long)]
        n: usize,
        /// Report whether this many messages can be sent.
        #[arg(long)]
        check: Option<u64>,
    },
    /// Search Z-channel codes with many free points.
    Search {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        m: Option<u64>,
        /// Search the largest code only and derive smaller ones by deletion.
        #[arg(long)]
        nested: bool,
        /// Build the standard cache (every cardinality to length 8, nested at 9).
        #[arg(long)]
        all: bool,
        /// Merge the results into the cache file.
        #[arg(long)]
        write_cache: bool,
    },
    /// Write a code, strategy or stored family as JSON.
    Export {
        #[command(subcommand)]
        what: ExportCmd,
    },
}

#[derive(Args, Clone, Copy)]
struct BuildArgs {
    #[arg(long, value_enum)]
    channel: Channel,
    #[arg(long)]
    feedbacks: usize,
    #[arg(long)]
    n: usize,
    /// Hamming parameter for the one-feedback binary construction.
    #[arg(long)]
    k: Option<usize>,
}

impl From<BuildArgs> for BuildSpec {
    fn from(a: BuildArgs) -> Self {
        BuildSpec {
            channel: a.channel,
            feedbacks: a.feedbacks,
            n: a.n,
            k: a.k,
        }
    }
}

#[derive(Subcommand)]
enum CountCmd {
    /// Optimum with complete feedback, binary symmetric channel.
    Mad {
        #[arg(long)]
        n: usize,
    },
    /// Best one-feedback construction, binary symmetric channel.
    M1 {
        #[arg(long)]
        n: usize,
    },
    /// Messages after one double-and-delete lift.
    Lift {
        #[arg(long)]
        prev: u128,
        #[arg(long)]
        n: usize,
    },
}

#[derive(Subcommand)]
enum ExportCmd {
    /// A cached Z-channel code.
    Code {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// A constructed strategy.
    Strategy {
        #[command(flatten)]
        spec: BuildArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The strategy of a stored Z-channel family.
    Family {
        #[arg(value_enum)]
        name: FamilyName,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyName {
    Length8,
    Length9,
    Length9Weights,
    Length11,
}

#[derive(Clone, Copy, ValueEnum)]
enum Refined {
    Sound,
    Literal,
    Off,
}

#[derive(Clone, Copy, ValueEnum)]
enum GameArg {
    Symmetric,
    Halflie,
}

fn emit(out: Option<&PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(p) => Ok(formats::write_text(p, text)?),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    let dir = cli.cache_dir.clone().unwrap_or_else(cache::cache_dir);
    let load_cache = || FoptCache::load(&dir);
    match cli.command {
        Command::Reproduce { table } => {
            let cache = if table == 1 || table == 5 { None } else { Some(load_cache()?) };
            let mut ctx = Context::new(cache);
            let report = tables::reproduce(table, &mut ctx)?;
            print!("{}", report.to_tsv());
            for line in report.diff() {
                eprintln!("{line}");
            }
            return Ok(if report.passed() { ExitCode::SUCCESS } else { ExitCode::FAILURE });
        }
        Command::Build { spec, out, verify } => {
            let cache = load_cache().ok();
            let s = constructions::build(spec.into(), cache.as_ref(), &mut BscCodeBook::default())?;
            println!("n\tfeedbacks\tblock_lengths\tmessages");
            let blocks: Vec<String> = s.block_lengths().iter().map(usize::to_string).collect();
            println!("{}\t{}\t{}\t{}", s.n(), s.feedbacks(), blocks.join("+"), s.len());
            if let Some(p) = out {
                formats::write_text(&p, &formats::strategy_to_json(&s))?;
            }
            if verify {
                let r = verify_strategy(&s);
                eprintln!("verified {} cases, {} failures", r.total_cases, r.failures.len());
                if !r.passed() {
                    return Ok(ExitCode::FAILURE);
                }
            }
        }
        Command::Count { what } => match what {
            CountCmd::Mad { n } => println!("{}", m_ad(n)),
            CountCmd::M1 { n } => {
                let choice = best_one_feedback_bsc_plan(n, &mut BscCodeBook::default())?;
                let hamming = corollary1_best(n).map_or(0, |c| c.1);
                println!("n\tbest\thamming_only\tconstruction");
                println!("{n}\t{}\t{hamming}\t{:?}", choice.count, choice.construction);
            }
            CountCmd::Lift { prev, n } => println!("{}", theorem2_count(prev, n)),
        },
        Command::Verify { file } => {
            let s = formats::strategy_from_json(&formats::read_text(&file)?)?;
            let r = verify_strategy(&s);
            println!("message\tposition\tsymbol\treceived\tdecoded");
            for f in &r.failures {
                let (pos, sym) = match f.action {
                    AdversaryAction::NoError => ("-".to_string(), "-".to_string()),
                    AdversaryAction::Replace { position, symbol } => (position.to_string(), symbol.to_string()),
                };
                let received = f.received.map_or("-".to_string(), |w| w.to_string());
                let decoded = f.decoded.map_or("-".to_string(), |m| m.to_string());
                println!("{}\t{pos}\t{sym}\t{received}\t{decoded}", f.message);
            }
            eprintln!(
                "{} messages, {} cases, {} failures, cloud sizes {:?}",
                r.messages,
                r.total_cases,
                r.failures.len(),
                r.cloud_census
            );
            return Ok(if r.passed() { ExitCode::SUCCESS } else { ExitCode::FAILURE });
        }
        Command::Bound { n, m, t, refined } => {
            let range = match refined {
                Refined::Sound => RefinedRange::Sound,
                Refined::Literal => RefinedRange::Literal,
                Refined::Off => RefinedRange::Off,
            };
            let p = BoundProblem::new(n, m, t)?.with_refined(range);
            let r = p.upper_bound()?;
            println!("n\tM\tt\tbound\tdistribution\trefined_binding");
            println!("{n}\t{m}\t{t}\t{}\t{}\t{}", r.free_points, r.distribution, r.refined_binding);
        }
        Command::Oracle { game, n, check } => {
            let game = match game {
                GameArg::Symmetric => Game::Symmetric,
                GameArg::Halflie => Game::HalfLie,
            };
            let mut o = Oracle::new(game);
            let best = o.max_messages(n);
            match check {
                Some(m) => {
                    let ok = m <= best;
                    println!("n\tM\twinnable");
                    println!("{n}\t{m}\t{ok}");
                }
                None => {
                    println!("n\tmax_messages");
                    println!("{n}\t{best}");
                }
            }
        }
        Command::Search {
            n,
            m,
            nested,
            all,
            write_cache,
        } => {
            let limit = SearchLimit::default();
            let found = if all {
                cache::build_standard_cache(limit)?
            } else {
                let Some(n) = n else { bail!("give --n or --all") };
                let entries = match (m, nested) {
                    (_, true) => cache::search_nested(n, limit)?,
                    (Some(m), false) => vec![fbcode_core::search::search_f_optimal(n, m, 1, limit)?],
                    (None, false) => cache::search_length(n, limit)?,
                };
                if let Some(m) = m {
                    if let Some(e) = entries.iter().find(|e| e.m == m) {
                        let space = ZSpace::new(n)?;
                        let ext = space.extensions(&e.values().iter().map(|&v| v as usize).collect::<Vec<_>>());
                        eprintln!(
                            "({n}, {m}): bound {} optimal {} proven {} augmentable {}",
                            e.bound,
                            e.optimal_flag,
                            e.proven,
                            !ext.is_empty()
                        );
                    }
                }
                let mut c = FoptCache::new();
                for e in entries.iter().filter(|e| m.is_none_or(|m| e.m == m)) {
                    c.insert(e.into()).map_err(anyhow::Error::msg)?;
                }
                c
            };
            print!("{}", found.to_tsv());
            if write_cache {
                let mut merged = FoptCache::load(&dir).unwrap_or_default();
                merged.merge(found);
                let path = merged.save(&dir)?;
                eprintln!("wrote {}", path.display());
            }
        }
        Command::Export { what } => match what {
            ExportCmd::Code { n, m, out } => {
                let c = load_cache()?;
                let e = c.get(n, m).with_context(|| format!("no cached code for ({n}, {m})"))?;
                emit(out.as_ref(), &formats::code_to_json(&e.code()))?;
            }
            ExportCmd::Strategy { spec, out } => {
                let cache = load_cache().ok();
                let s = constructions::build(spec.into(), cache.as_ref(), &mut BscCodeBook::default())?;
                emit(out.as_ref(), &formats::strategy_to_json(&s))?;
            }
            ExportCmd::Family { name, out } => {
                let family = match name {
                    FamilyName::Length8 => example_family_8(),
                    FamilyName::Length9 => example_family_9(),
                    FamilyName::Length9Weights => example_weight_family_9(),
                    FamilyName::Length11 => example_family_11(),
                };
                let s = assemble_one_feedback(&family)?;
                emit(out.as_ref(), &formats::strategy_to_json(&s))?;
            }
        },
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
