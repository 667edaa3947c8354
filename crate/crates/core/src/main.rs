use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use ammatch::associated::{build_associated_market, OneToOneMarket};
use ammatch::axioms::{check_lad, check_path_independence};
use ammatch::da::{da_firm_proposing, da_worker_proposing, DaOptions};
use ammatch::generate::{gen_loaded, GenParams};
use ammatch::io::{LoadedMarket, MarketFile};
use ammatch::iso::{rural_hospital_check, verify_isomorphism};
use ammatch::limits::Limits;
use ammatch::render;
use ammatch::stability::{
    enumerate_stable_classical_11_with, enumerate_stable_m1, enumerate_stable_star_with, Pruning,
};
use ammatch::Error;

const EXIT_INPUT: u8 = 1;
const EXIT_AXIOM: u8 = 2;
const EXIT_VERIFY: u8 = 3;
const EXIT_CAP: u8 = 4;

#[derive(Parser)]
#[command(name = "ammatch", version, about = "Many-to-one matching via copy markets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check path independence and the law of aggregate demand per firm.
    Validate { market: PathBuf },
    /// Print each firm's decomposition into linear orders.
    Decompose { market: PathBuf },
    /// Run deferred acceptance on the copy market.
    Solve {
        market: PathBuf,
        #[arg(long, value_enum, default_value = "firms")]
        proposing: Side,
        /// Emit one JSON line per stage before the final matching.
        #[arg(long)]
        trace: bool,
        /// Firm-copies proposing: an unauthorized copy leaves the pool for
        /// good instead of re-checking authorization later.
        #[arg(long)]
        no_reauthorize: bool,
    },
    /// List every matching satisfying a stability concept.
    Enumerate {
        market: PathBuf,
        #[arg(long, value_enum)]
        concept: Concept,
        /// Search every candidate matching instead of the pruned space.
        #[arg(long)]
        unpruned: bool,
    },
    /// Check the stable/stable* bijection and the rural-hospital invariants.
    Verify { market: PathBuf },
    /// Write a random market file.
    Gen {
        #[arg(long)]
        workers: usize,
        #[arg(long)]
        firms: usize,
        #[arg(long)]
        jmax: usize,
        #[arg(long, default_value_t = 1.0)]
        density: f64,
        #[arg(long)]
        seed: u64,
        /// Output path; standard output when omitted.
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Side {
    Firms,
    Workers,
}

#[derive(Clone, Copy, ValueEnum)]
enum Concept {
    Stable,
    StableStar,
    Classical,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let limits = Limits::from_env();
    match run(cli.command, &limits) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Validation(_) | Error::Inconsistent(_) | Error::NotFirmRational(_) => EXIT_INPUT,
        Error::Axiom { .. } => EXIT_AXIOM,
        Error::CapExceeded { .. } => EXIT_CAP,
        Error::Internal(_) => EXIT_VERIFY,
    }
}

fn print(value: &Value) {
    println!("{}", serde_json::to_string_pretty(value).expect("json"));
}

fn copy_market(loaded: &LoadedMarket, limits: &Limits) -> ammatch::Result<OneToOneMarket> {
    let d = loaded.decompose(limits)?;
    build_associated_market(&loaded.market, &d, limits)
}

fn run(command: Command, limits: &Limits) -> ammatch::Result<u8> {
    match command {
        Command::Validate { market } => {
            let loaded = MarketFile::load(market)?;
            let m1 = &loaded.market;
            let mut firms = Map::new();
            let mut ok = true;
            for f in m1.firm_ids() {
                let cf = m1.choice(f);
                let pi = check_path_independence(cf, limits)?;
                let lad = check_lad(cf, limits)?;
                ok &= pi.holds;
                firms.insert(
                    m1.firm_label(f).to_owned(),
                    json!({
                        "path_independence": render::axiom_report(m1, &pi),
                        "lad": render::axiom_report(m1, &lad),
                    }),
                );
            }
            print(&json!({ "ok": ok, "firms": firms }));
            Ok(if ok { 0 } else { EXIT_AXIOM })
        }
        Command::Decompose { market } => {
            let loaded = MarketFile::load(market)?;
            let d = loaded.decompose(limits)?;
            print(&render::decomposition(&loaded.market, &d));
            Ok(0)
        }
        Command::Solve {
            market,
            proposing,
            trace,
            no_reauthorize,
        } => {
            let loaded = MarketFile::load(market)?;
            let m = copy_market(&loaded, limits)?;
            let (matching, stages) = match proposing {
                Side::Firms => da_firm_proposing(
                    &m,
                    DaOptions {
                        reauthorize: !no_reauthorize,
                    },
                )?,
                Side::Workers => da_worker_proposing(&m)?,
            };
            let result = json!({
                "proposing": match proposing { Side::Firms => "firms", Side::Workers => "workers" },
                "stages": stages.stages.len(),
                "matching": render::matching_11(&m, &matching),
            });
            if trace {
                for line in stages.json_lines(&m) {
                    println!("{line}");
                }
                println!("{result}");
            } else {
                print(&result);
            }
            Ok(0)
        }
        Command::Enumerate {
            market,
            concept,
            unpruned,
        } => {
            let loaded = MarketFile::load(market)?;
            let pruning = if unpruned {
                Pruning::None
            } else {
                Pruning::Acceptable
            };
            let (name, list): (&str, Vec<Value>) = match concept {
                Concept::Stable => {
                    let m1 = &loaded.market;
                    let found = enumerate_stable_m1(m1, limits)?;
                    ("stable", found.iter().map(|mu| render::matching_m1(m1, mu)).collect())
                }
                Concept::StableStar => {
                    let m = copy_market(&loaded, limits)?;
                    let found = enumerate_stable_star_with(&m, pruning, limits)?;
                    ("stable-star", found.iter().map(|l| render::matching_11(&m, l)).collect())
                }
                Concept::Classical => {
                    let m = copy_market(&loaded, limits)?;
                    let found = enumerate_stable_classical_11_with(&m, pruning, limits)?;
                    ("classical", found.iter().map(|l| render::matching_11(&m, l)).collect())
                }
            };
            print(&json!({ "concept": name, "count": list.len(), "matchings": list }));
            Ok(0)
        }
        Command::Verify { market } => {
            let loaded = MarketFile::load(market)?;
            let m1 = &loaded.market;
            let m = copy_market(&loaded, limits)?;
            let iso = verify_isomorphism(m1, &m, limits)?;
            let rht = rural_hospital_check(m1, &m, limits)?;
            let ok = iso.holds && rht.holds();
            print(&json!({
                "ok": ok,
                "isomorphism": render::isomorphism(m1, &m, &iso),
                "rural_hospital": render::rural_hospital(m1, &rht),
            }));
            Ok(if ok { 0 } else { EXIT_VERIFY })
        }
        Command::Gen {
            workers,
            firms,
            jmax,
            density,
            seed,
            out,
        } => {
            let loaded = gen_loaded(&GenParams {
                workers,
                firms,
                jmax,
                density,
                seed,
            })?;
            let text = MarketFile::from_market(&loaded).to_json();
            match out {
                Some(path) => std::fs::write(&path, text + "\n")
                    .map_err(|e| Error::Validation(format!("cannot write {}: {e}", path.display())))?,
                None => println!("{text}"),
            }
            Ok(0)
        }
    }
}
