use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use pdcontract::contracts::{
    apply_losing, default_ladder, flat_epsilons, lemma1_amounts, telescoping_amounts,
    theorem1_amounts, verify_theorem1, verify_theorem2, ContractError, ContractFile, Ladder,
    ReducedGame, Scheme, TildeContract,
};
use pdcontract::equilibrium::{all_nash, is_strong_nash, nash_report};
use pdcontract::game::{Game, GameView};
use pdcontract::generator::{gen_random_pd, trial_seed, GeneratorConfig};
use pdcontract::pd::{
    check_lemma3, check_lemma4, check_lemma5, check_lemma6, check_lemma7, is_pd_flat,
    is_pd_recursive, remark3, LemmaOutcome,
};
use pdcontract::public_goods::{
    build_pgg, gen_symmetric, theorem3_amounts, validate_order_c, verify_theorem3,
};
use pdcontract::reproduce::{section3, section4, TableCheck};
use pdcontract::suite::{run_suite, Suite};
use pdcontract::{fixtures, rational, ContributionSchedule, Rational};

const EXIT_FAIL: u8 = 3;
const EXIT_INPUT: u8 = 4;

#[derive(Parser)]
#[command(name = "pdcontract", version, about = "Losing contracts for n-player prisoner's dilemmas")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Output::Json)]
    output: Output,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Output {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum SchemeArg {
    Lemma1,
    Theorem1,
    #[value(name = "theorem2-reduced")]
    Theorem2Reduced,
    Tilde,
}

#[derive(Subcommand)]
enum Cmd {
    /// Decide whether a game is a prisoner's dilemma.
    ValidatePd {
        game: PathBuf,
        /// Cross-check against the recursive definition.
        #[arg(long)]
        recursive_oracle: bool,
        /// Also run the structural lemma checkers.
        #[arg(long)]
        lemmas: bool,
        #[arg(long)]
        max_fixed: Option<usize>,
    },
    /// Check a profile for (strong) Nash equilibrium.
    CheckEq {
        game: PathBuf,
        /// 1-based strategies, e.g. 1,1,2.
        #[arg(long, value_delimiter = ',', required = true)]
        profile: Vec<usize>,
        #[arg(long)]
        strong: bool,
        /// Weak blocking: a coalition blocks only by strictly gaining.
        #[arg(long, requires = "strong")]
        non_strict: bool,
        /// List every pure Nash equilibrium as well.
        #[arg(long)]
        all_nash: bool,
    },
    /// Compute a contract for a game.
    MakeContract {
        game: PathBuf,
        #[arg(long, value_enum)]
        scheme: SchemeArg,
        /// `default` (ε = k − 1), `flat:<q>`, or a JSON file of per-player
        /// epsilons for strategies 2..k.
        #[arg(long, default_value = "default")]
        eps_ladder: String,
    },
    /// Apply a contract file and print the resulting game.
    Apply {
        game: PathBuf,
        contract: PathBuf,
        /// Use reduced amounts with compensation.
        #[arg(long)]
        reduced: bool,
    },
    /// Verify the contract theorems on one game.
    VerifyTheorems {
        game: PathBuf,
        #[arg(long)]
        max_fixed: Option<usize>,
        /// 1, 2 or 3; 1 and 2 when omitted.
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
        theorem: Option<u8>,
        /// Contract file; the default-ladder amounts otherwise.
        #[arg(long)]
        contract: Option<PathBuf>,
    },
    /// Generate games and schedules.
    #[command(subcommand)]
    Gen(GenCmd),
    /// Run a seeded property suite.
    RunSuite {
        #[arg(value_parser = ["lemmas", "theorem1", "theorem2", "theorem3", "section4", "all"])]
        name: String,
        #[arg(long, default_value_t = 50)]
        trials: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
    /// Regenerate the worked tables and diff them against the bundled ones.
    ReproducePaper {
        #[arg(long, value_parser = ["3", "4", "all"], default_value = "all")]
        section: String,
    },
}

#[derive(Subcommand)]
enum GenCmd {
    /// A random dilemma.
    Pd {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Emit this many games, one compact JSON line each.
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long, value_delimiter = ',', default_value = "2,3,4")]
        players: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_value = "2,3,4")]
        strategies: Vec<usize>,
        /// Exact strategy counts; overrides --players and --strategies.
        #[arg(long, value_delimiter = ',')]
        counts: Option<Vec<usize>>,
        #[arg(long, default_value = "1/12")]
        noise: String,
        #[arg(long, default_value = "0")]
        temptation: String,
        #[arg(long)]
        tied_max: bool,
    },
    /// The threshold public goods game of a schedule file.
    Pgg {
        #[arg(long)]
        schedule: PathBuf,
        /// Print the order-c validation report instead of the game.
        #[arg(long)]
        check_order: bool,
        #[arg(long)]
        max_fixed: Option<usize>,
    },
    /// A random symmetric schedule.
    SymmetricPgg {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_delimiter = ',', default_value = "3,4")]
        players: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_value = "2,3")]
        strategies: Vec<usize>,
    },
    /// A bundled game by key.
    Fixture {
        /// table-1, tables-5-6, table-9, tables-12-13, tables-18-19, table-2,
        /// tables-7-8, table-11 or tables-16-17.
        key: String,
    },
}

/// Input problems exit with 4, everything else that goes wrong with 3.
struct InputError(anyhow::Error);

impl<E: Into<anyhow::Error>> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.into())
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_game(path: &Path) -> Result<Game> {
    Game::from_json(&read(path)?).with_context(|| format!("parsing game {}", path.display()))
}

fn load_contract(path: &Path) -> Result<ContractFile> {
    ContractFile::from_json(&read(path)?)
        .with_context(|| format!("parsing contract {}", path.display()))
}

fn parse_q(s: &str) -> Result<Rational> {
    rational::parse(s).map_err(|e| anyhow!("{s:?}: {e}"))
}

fn load_ladder(arg: &str, counts: &[usize]) -> Result<Ladder> {
    if arg == "default" {
        return Ok(default_ladder(counts));
    }
    if let Some(q) = arg.strip_prefix("flat:") {
        return Ok(flat_epsilons(counts, parse_q(q)?));
    }
    let rows: Vec<Vec<rational::Q>> = serde_json::from_str(&read(Path::new(arg))?)
        .with_context(|| format!("parsing epsilon ladder {arg}"))?;
    Ok(rows
        .into_iter()
        .map(|row| {
            std::iter::once(Rational::default())
                .chain(row.into_iter().map(|q| q.0))
                .collect()
        })
        .collect())
}

fn default_max_fixed(g: &Game, given: Option<usize>) -> usize {
    given.unwrap_or(g.n().saturating_sub(2))
}

fn lemma_json(o: &LemmaOutcome) -> Value {
    match o {
        LemmaOutcome::Holds => json!({"holds": true}),
        LemmaOutcome::Violated(d) => json!({"holds": false, "detail": d}),
        LemmaOutcome::NotPd(v) => json!({"holds": false, "not_pd": v}),
        LemmaOutcome::Inapplicable(why) => json!({"holds": false, "inapplicable": why}),
    }
}

fn game_text(g: &Game) -> String {
    g.profiles()
        .map(|s| {
            let u: Vec<String> = g.utilities(&s).iter().map(rational::format).collect();
            format!("{s}\t{}\n", u.join("\t"))
        })
        .collect()
}

struct Emit {
    json: Value,
    text: String,
    ok: bool,
}

impl Emit {
    fn new(ok: bool, json: Value, text: impl Into<String>) -> Self {
        Emit {
            json,
            text: text.into(),
            ok,
        }
    }
}

fn contract_failure(e: ContractError) -> std::result::Result<Emit, InputError> {
    match e {
        ContractError::NotPd(_) | ContractError::InvalidEpsilon(_) => Ok(Emit::new(
            false,
            json!({"error": e.to_string()}),
            format!("error: {e}\n"),
        )),
        other => Err(InputError(other.into())),
    }
}

fn validate_pd(
    path: &Path,
    recursive: bool,
    lemmas: bool,
    max_fixed: Option<usize>,
) -> std::result::Result<Emit, InputError> {
    let g = load_game(path)?;
    let flat = is_pd_flat(&g);
    let mut ok = flat.is_pd;
    let mut out = json!({"is_pd": flat.is_pd, "first_violation": flat.first_violation});
    let mut text = if flat.is_pd {
        "prisoner's dilemma\n".to_string()
    } else {
        format!(
            "not a prisoner's dilemma: {}\n",
            serde_json::to_string(&flat.first_violation).expect("serializable")
        )
    };
    if recursive {
        let rec = is_pd_recursive(&g);
        let agree = rec.is_pd == flat.is_pd;
        ok &= agree;
        out["recursive"] = json!({"is_pd": rec.is_pd, "agrees": agree});
        text += &format!("recursive oracle: {}\n", if agree { "agrees" } else { "DISAGREES" });
    }
    if lemmas && flat.is_pd {
        let mf = default_max_fixed(&g, max_fixed);
        let (single, full) = remark3(&g);
        let results = [
            ("lemma3", check_lemma3(&g)),
            ("lemma4", check_lemma4(&g)),
            ("lemma5", check_lemma5(&g)),
            ("lemma6", check_lemma6(&g, mf)),
            ("lemma7", check_lemma7(&g)),
        ];
        let mut obj = serde_json::Map::new();
        for (name, o) in &results {
            // Lemma 4 only speaks about games with a unique largest strategy set.
            let counts = !matches!(o, LemmaOutcome::Inapplicable(_));
            ok &= o.holds() || !counts;
            obj.insert(name.to_string(), lemma_json(o));
            text += &format!("{name}: {}\n", lemma_json(o));
        }
        ok &= single == full;
        obj.insert(
            "remark3".into(),
            json!({"single_deviation": single, "pareto": full, "agree": single == full}),
        );
        text += &format!("remark3: single-deviation {single}, pareto {full}\n");
        out["lemmas"] = Value::Object(obj);
    }
    Ok(Emit::new(ok, out, text))
}

fn check_eq(
    path: &Path,
    profile: &[usize],
    strong: bool,
    non_strict: bool,
    list: bool,
) -> std::result::Result<Emit, InputError> {
    let g = load_game(path)?;
    g.check_profile(profile)?;
    let report = if strong {
        is_strong_nash(&g, profile, !non_strict)
    } else {
        nash_report(&g, profile)
    };
    let ok = if strong { report.is_strong } else { report.is_nash };
    let mut out = serde_json::to_value(&report).expect("serializable");
    let mut text = format!(
        "{}: nash {}, unique {}, strong {}\n",
        report.profile, report.is_nash, report.is_unique_nash, report.is_strong
    );
    if let Some(c) = &report.counterexample {
        text += &format!(
            "counterexample: coalition {:?} to {} ({} -> {})\n",
            c.coalition.members().map(|i| i + 1).collect::<Vec<_>>(),
            c.deviation,
            c.before,
            c.after
        );
    }
    if list {
        let all = all_nash(&g);
        text += &format!(
            "all nash: {}\n",
            all.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(" ")
        );
        out["all_nash"] = serde_json::to_value(all).expect("serializable");
    }
    Ok(Emit::new(ok, out, text))
}

fn make_contract(path: &Path, scheme: SchemeArg, eps: &str) -> std::result::Result<Emit, InputError> {
    let g = load_game(path)?;
    let ladder = load_ladder(eps, g.strategy_counts())?;
    let file = match scheme {
        SchemeArg::Tilde => match TildeContract::from_ladder(g.strategy_counts(), &ladder) {
            Ok(t) => ContractFile::from_tilde(&t),
            Err(e) => return contract_failure(e),
        },
        _ => {
            let (s, made) = match scheme {
                SchemeArg::Lemma1 => (Scheme::Lemma1, lemma1_amounts(&g, &ladder)),
                SchemeArg::Theorem1 => (Scheme::Theorem1, theorem1_amounts(&g, &ladder)),
                // Threshold games are not dilemmas overall, so no check here.
                _ => (Scheme::Theorem2Reduced, telescoping_amounts(&g, &ladder)),
            };
            match made {
                Ok(c) => ContractFile::from_losing(s, &c),
                Err(e) => return contract_failure(e),
            }
        }
    };
    let json = serde_json::to_value(&file).expect("serializable");
    let text = file.to_json_pretty() + "\n";
    Ok(Emit::new(true, json, text))
}

fn apply(game: &Path, contract: &Path, reduced: bool) -> std::result::Result<Emit, InputError> {
    let g = load_game(game)?;
    let file = load_contract(contract)?;
    let out = if file.scheme == Scheme::Tilde {
        if reduced {
            return Err(anyhow!("--reduced needs fixed amounts; tilde contracts have none").into());
        }
        TildeContract::from_ladder(g.strategy_counts(), &file.ladder())?.apply(&g)
    } else {
        let c = file.to_losing()?;
        if reduced {
            ReducedGame::new(&g, &c)?.materialize()
        } else {
            apply_losing(&g, &c)?
        }
    };
    let json: Value = serde_json::from_str(&out.to_json()).expect("valid json");
    Ok(Emit::new(true, json, game_text(&out)))
}

fn verify_theorems(
    path: &Path,
    max_fixed: Option<usize>,
    theorem: Option<u8>,
    contract: Option<&Path>,
) -> std::result::Result<Emit, InputError> {
    let g = load_game(path)?;
    let mf = default_max_fixed(&g, max_fixed);
    let c = match contract {
        Some(p) => load_contract(p)?.to_losing()?,
        None => {
            let made = if theorem == Some(3) {
                theorem3_amounts(&g)
            } else {
                theorem1_amounts(&g, &default_ladder(g.strategy_counts()))
            };
            match made {
                Ok(c) => c,
                Err(e) => return contract_failure(e),
            }
        }
    };
    c.check_shape(&g)?;
    let mut reports = Vec::new();
    let mut ok = true;
    let mut text = String::new();
    let line = |t: u8, passed: bool, v: &Value| {
        let f = &v["failure"];
        let f = if passed {
            String::new()
        } else {
            format!(" at {}: {}", f["check"], f["detail"])
        };
        format!("theorem {t}: {}{f}\n", if passed { "PASS" } else { "FAIL" })
    };
    for t in theorem.map_or(vec![1, 2], |t| vec![t]) {
        let (passed, v) = match t {
            1 => {
                let r = verify_theorem1(&g, &c, mf);
                (r.passed, serde_json::to_value(r).expect("serializable"))
            }
            2 => {
                let r = verify_theorem2(&g, &c, mf);
                (r.passed, serde_json::to_value(r).expect("serializable"))
            }
            _ => {
                let r = verify_theorem3(&g, &c, mf);
                let passed = r.passed;
                let mut v = serde_json::to_value(r).expect("serializable");
                v["failure"] = v["theorem"]["failure"].take();
                (passed, v)
            }
        };
        ok &= passed;
        text += &line(t, passed, &v);
        reports.push(v);
    }
    Ok(Emit::new(ok, json!({"max_fixed": mf, "reports": reports}), text))
}

fn gen(cmd: GenCmd) -> std::result::Result<Emit, InputError> {
    match cmd {
        GenCmd::Pd {
            seed,
            trials,
            players,
            strategies,
            counts,
            noise,
            temptation,
            tied_max,
        } => {
            let mut cfg = GeneratorConfig::new(seed);
            cfg.players = players;
            cfg.strategies = strategies;
            cfg.counts = counts;
            cfg.noise = parse_q(&noise)?;
            cfg.temptation = parse_q(&temptation)?;
            cfg.tied_max = tied_max;
            let Some(n) = trials else {
                return match gen_random_pd(&cfg) {
                    Ok(g) => Ok(Emit::new(
                        true,
                        serde_json::from_str(&g.to_json()).expect("valid json"),
                        game_text(&g),
                    )),
                    Err(e) => Ok(Emit::new(false, json!({"error": e.to_string()}), format!("error: {e}\n"))),
                };
            };
            let mut games = Vec::with_capacity(n);
            for i in 0..n {
                cfg.seed = trial_seed(seed, i);
                match gen_random_pd(&cfg) {
                    Ok(g) => games.push(g),
                    Err(e) => {
                        return Ok(Emit::new(
                            false,
                            json!({"error": e.to_string(), "trial": i}),
                            format!("error in trial {i}: {e}\n"),
                        ))
                    }
                }
            }
            let lines: String = games.iter().map(|g| g.to_json() + "\n").collect();
            let json = Value::Array(
                games
                    .iter()
                    .map(|g| serde_json::from_str(&g.to_json()).expect("valid json"))
                    .collect(),
            );
            Ok(Emit::new(true, json, lines))
        }
        GenCmd::Pgg {
            schedule,
            check_order,
            max_fixed,
        } => {
            let sched = ContributionSchedule::from_json(&read(&schedule)?)?;
            let g = build_pgg(&sched);
            if check_order {
                let r = validate_order_c(&sched, &g, default_max_fixed(&g, max_fixed));
                let text = format!(
                    "order c: {} ({} restricted games checked, {} skipped, {} blocks)\n{}",
                    if r.passed { "PASS" } else { "FAIL" },
                    r.restrictions_checked,
                    r.restrictions_skipped,
                    r.blocks_checked,
                    r.failure_text.as_deref().map(|f| f.to_string() + "\n").unwrap_or_default()
                );
                return Ok(Emit::new(r.passed, serde_json::to_value(&r).expect("serializable"), text));
            }
            Ok(Emit::new(
                true,
                serde_json::from_str(&g.to_json()).expect("valid json"),
                game_text(&g),
            ))
        }
        GenCmd::SymmetricPgg {
            seed,
            players,
            strategies,
        } => {
            if players.iter().any(|&n| n < 2) || strategies.iter().any(|&k| k < 2) {
                return Err(anyhow!("need at least 2 players and 2 strategies").into());
            }
            let s = gen_symmetric(seed, &players, &strategies);
            let text = s.to_json();
            Ok(Emit::new(true, serde_json::from_str(&text).expect("valid json"), text + "\n"))
        }
        GenCmd::Fixture { key } => {
            let g = fixtures::by_key(&key).ok_or_else(|| anyhow!("no fixture named {key:?}"))?;
            Ok(Emit::new(
                true,
                serde_json::from_str(&g.to_json()).expect("valid json"),
                game_text(&g),
            ))
        }
    }
}

fn suites(name: &str, trials: usize, seed: u64) -> Result<Emit> {
    let Some(which) = Suite::parse(name) else {
        bail!("unknown suite {name:?}");
    };
    let reports: Vec<_> = which.into_iter().map(|s| run_suite(s, trials, seed)).collect();
    let ok = reports.iter().all(|r| r.ok());
    let mut text = String::new();
    for r in &reports {
        text += &format!("{}: {}/{} passed\n", r.suite.name(), r.passed, r.passed + r.failed);
        if let Some(f) = r.first_failure() {
            text += &format!("  first failure: trial {} (seed {}): {}\n", f.index, f.seed, f.detail);
        }
    }
    let json = if reports.len() == 1 {
        serde_json::to_value(&reports[0])
    } else {
        serde_json::to_value(&reports)
    }
    .expect("serializable");
    Ok(Emit::new(ok, json, text))
}

fn reproduce(section: &str) -> Emit {
    let checks: Vec<TableCheck> = match section {
        "3" => section3(),
        "4" => section4(),
        _ => section3().into_iter().chain(section4()).collect(),
    };
    let ok = checks.iter().all(|c| c.matches);
    let mut text = String::new();
    for c in &checks {
        text += &format!("{}: {}\n", c.table, if c.matches { "match" } else { "DIFF" });
        for d in &c.diff {
            text += &format!("  {d}\n");
        }
    }
    Emit::new(ok, serde_json::to_value(&checks).expect("serializable"), text)
}

fn run(cmd: Cmd) -> std::result::Result<Emit, InputError> {
    match cmd {
        Cmd::ValidatePd {
            game,
            recursive_oracle,
            lemmas,
            max_fixed,
        } => validate_pd(&game, recursive_oracle, lemmas, max_fixed),
        Cmd::CheckEq {
            game,
            profile,
            strong,
            non_strict,
            all_nash,
        } => check_eq(&game, &profile, strong, non_strict, all_nash),
        Cmd::MakeContract {
            game,
            scheme,
            eps_ladder,
        } => make_contract(&game, scheme, &eps_ladder),
        Cmd::Apply {
            game,
            contract,
            reduced,
        } => apply(&game, &contract, reduced),
        Cmd::VerifyTheorems {
            game,
            max_fixed,
            theorem,
            contract,
        } => verify_theorems(&game, max_fixed, theorem, contract.as_deref()),
        Cmd::Gen(g) => gen(g),
        Cmd::RunSuite { name, trials, seed } => Ok(suites(&name, trials, seed)?),
        Cmd::ReproducePaper { section } => Ok(reproduce(&section)),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(e) => {
            match cli.output {
                Output::Json => println!("{}", serde_json::to_string_pretty(&e.json).expect("serializable")),
                Output::Text => print!("{}", e.text),
            }
            if e.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_FAIL)
            }
        }
        Err(InputError(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}
