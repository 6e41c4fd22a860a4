use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use abmv::campaign::{self, CampaignOptions, Report, Suite};
use abmv::control::{ControlInstance, ControlSolution, ControlType};
use abmv::io::{parse_json, rule_name, to_json, ElectionFile, SourceFile};
use abmv::manipulation::{BallotProfile, Variant};
use abmv::model::{candidate_scores, committee_score, Score};
use abmv::random::rng;
use abmv::reductions::{generate_with, random_source, GenerateOptions, ReductionKind};
use abmv::solve::{solve_control, solve_jcc, solve_manipulation, ControlAlgo, JccChoice, ManipAlgo};
use abmv::winners::{winning_committees, Strategy};
use abmv::{Election, Error, Rule};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

const EXIT_YES: u8 = 0;
const EXIT_NO: u8 = 1;
const EXIT_INVALID: u8 = 2;
const EXIT_CAP: u8 = 3;

/// Approval-based multiwinner voting: winners, manipulation and control.
#[derive(Parser)]
#[command(name = "abmv", version)]
struct Cli {
    /// Print a machine-readable JSON result.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List all winning k-committees.
    Winners(WinnersArgs),
    /// Candidate scores, or the score of one committee.
    Score(ScoreArgs),
    /// Is J contained in every winning k-committee? Exit 0 for yes, 1 for no.
    Jcc(JccArgs),
    /// Decide a coalition manipulation instance.
    SolveManip(ManipArgs),
    /// Decide a constructive control instance.
    SolveControl(ControlArgs),
    /// Generate a strategic instance from a hardness source.
    Gen(GenArgs),
    /// Run seeded verification campaigns.
    Verify(VerifyArgs),
}

fn parse_rule(s: &str) -> Result<Rule, String> {
    Rule::parse(s).map_err(|e| e.to_string())
}

#[derive(Args)]
struct WinnersArgs {
    #[arg(long, value_parser = parse_rule)]
    rule: Option<Rule>,
    #[arg(short)]
    k: Option<usize>,
    #[arg(long, value_enum, default_value_t = WinnersAlgo::Auto)]
    algo: WinnersAlgo,
    file: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum WinnersAlgo {
    Auto,
    Exhaustive,
    Partition,
}

#[derive(Args)]
struct ScoreArgs {
    #[arg(long, value_parser = parse_rule)]
    rule: Option<Rule>,
    /// Score this committee instead of listing candidate scores.
    #[arg(long, value_delimiter = ',')]
    committee: Option<Vec<String>>,
    file: PathBuf,
}

#[derive(Args)]
struct JccArgs {
    #[arg(long, value_parser = parse_rule)]
    rule: Option<Rule>,
    #[arg(short)]
    k: Option<usize>,
    /// Candidates that must be in every winning committee.
    #[arg(long = "J", value_delimiter = ',')]
    j: Option<Vec<String>>,
    #[arg(long, default_value = "auto", value_parser = |s: &str| s.parse::<JccChoice>().map_err(|e| e.to_string()))]
    algo: JccChoice,
    file: PathBuf,
}

#[derive(Args)]
struct ManipArgs {
    #[arg(long, value_parser = parse_rule)]
    rule: Option<Rule>,
    #[arg(short)]
    k: Option<usize>,
    /// cbcm, sbcm or sdcm.
    #[arg(long, value_parser = |s: &str| Variant::parse(s).map_err(|e| e.to_string()))]
    variant: Option<Variant>,
    #[arg(long, default_value = "auto", value_parser = |s: &str| s.parse::<ManipAlgo>().map_err(|e| e.to_string()))]
    algo: ManipAlgo,
    file: PathBuf,
}

#[derive(Args)]
struct ControlArgs {
    #[arg(long, value_parser = parse_rule)]
    rule: Option<Rule>,
    /// ccav, ccdv, ccac, ccdc, ccadv or ccadc.
    #[arg(long = "type", value_parser = |s: &str| ControlType::parse(s).map_err(|e| e.to_string()))]
    kind: Option<ControlType>,
    #[arg(short)]
    k: Option<usize>,
    #[arg(long = "J", value_delimiter = ',')]
    j: Option<Vec<String>>,
    /// Budget for every modification the type allows.
    #[arg(long)]
    budget: Option<usize>,
    #[arg(long)]
    budget_add: Option<usize>,
    #[arg(long)]
    budget_delete: Option<usize>,
    #[arg(long, default_value = "auto", value_parser = |s: &str| s.parse::<ControlAlgo>().map_err(|e| e.to_string()))]
    algo: ControlAlgo,
    /// Seed for randomized color coding.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    file: PathBuf,
}

#[derive(Args)]
struct GenArgs {
    /// Reduction to apply, e.g. ccdv-sav-rx3c.
    #[arg(long, value_parser = |s: &str| s.parse::<ReductionKind>().map_err(|e| e.to_string()))]
    kind: ReductionKind,
    /// Graph or RX3C source file.
    #[arg(long, conflicts_with = "seed", required_unless_present = "seed")]
    source: Option<PathBuf>,
    /// Draw a random source instead of reading one.
    #[arg(long)]
    seed: Option<u64>,
    /// Also write the source instance to this file.
    #[arg(long)]
    source_out: Option<PathBuf>,
    #[arg(long, value_parser = |s: &str| Variant::parse(s).map_err(|e| e.to_string()))]
    variant: Option<Variant>,
    /// Thiele rule for the Thiele constructions.
    #[arg(long, value_parser = parse_rule)]
    thiele: Option<Rule>,
}

#[derive(Args)]
struct VerifyArgs {
    /// lemma1, lemma2, manipulation, control, jcc, immunity, reductions or all.
    #[arg(long, default_value = "all")]
    suite: String,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads; results do not depend on this.
    #[arg(long)]
    workers: Option<usize>,
    /// Include reduction kinds that take seconds per instance.
    #[arg(long)]
    heavy: bool,
}

/// A command failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if matches!(e, Error::CapExceeded(_)) { EXIT_CAP } else { EXIT_INVALID };
        Failure { code, message: e.to_string() }
    }
}

fn invalid(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_INVALID, message: message.into() }
}

/// What a command prints and how it exits.
struct Output {
    code: u8,
    text: String,
    json: Value,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_INVALID } else { EXIT_YES });
        }
    };
    match run(&cli.command) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            let body = if cli.json { to_json(&out.json) } else { out.text };
            let _ = writeln!(stdout, "{}", body.trim_end());
            ExitCode::from(out.code)
        }
        Err(f) => {
            if cli.json {
                println!("{}", to_json(&json!({ "error": f.message, "exit_code": f.code })));
            }
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(command: &Command) -> Result<Output, Failure> {
    match command {
        Command::Winners(a) => winners(a),
        Command::Score(a) => score(a),
        Command::Jcc(a) => jcc(a),
        Command::SolveManip(a) => solve_manip(a),
        Command::SolveControl(a) => control(a),
        Command::Gen(a) => gen(a),
        Command::Verify(a) => verify(a),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| invalid(format!("cannot read {}: {e}", path.display())))
}

fn load(path: &Path) -> Result<ElectionFile, Failure> {
    Ok(parse_json(&read(path)?)?)
}

fn rule_of(flag: &Option<Rule>, file: &ElectionFile) -> Result<Rule, Failure> {
    match (flag, &file.rule) {
        (Some(r), _) => Ok(r.clone()),
        (None, Some(s)) => Ok(Rule::parse(s)?),
        (None, None) => Err(invalid("no rule given: pass --rule or set `rule` in the file")),
    }
}

fn k_of(flag: Option<usize>, file: &ElectionFile) -> Result<usize, Failure> {
    flag.or(file.k).ok_or_else(|| invalid("no committee size given: pass -k or set `k` in the file"))
}

fn rational(s: &Score) -> String {
    s.to_string()
}

fn set_text(labels: &[String]) -> String {
    format!("{{{}}}", labels.join(","))
}

fn verdict_word(yes: bool) -> &'static str {
    if yes {
        "YES"
    } else {
        "NO"
    }
}

fn winners(a: &WinnersArgs) -> Result<Output, Failure> {
    let file = load(&a.file)?;
    let e = file.election()?;
    let rule = rule_of(&a.rule, &file)?;
    let k = k_of(a.k, &file)?;
    let (strategy, algo) = match a.algo {
        WinnersAlgo::Auto if rule.is_additive() => (Strategy::Partition, "partition"),
        WinnersAlgo::Auto | WinnersAlgo::Exhaustive => (Strategy::Exhaustive, "exhaustive"),
        WinnersAlgo::Partition => (Strategy::Partition, "partition"),
    };
    let ws = winning_committees(&rule, &e, k, strategy)?;
    let committees: Vec<Vec<String>> = ws.committees.iter().map(|w| e.labels_of(w.members())).collect();
    let text = committees.iter().map(|w| set_text(w)).collect::<Vec<_>>().join("\n");
    let json = json!({
        "command": "winners",
        "rule": rule_name(&rule),
        "k": k,
        "algo": algo,
        "optimum": rational(&ws.optimum),
        "committees": committees,
    });
    Ok(Output { code: EXIT_YES, text, json })
}

fn score(a: &ScoreArgs) -> Result<Output, Failure> {
    let file = load(&a.file)?;
    let e = file.election()?;
    let rule = rule_of(&a.rule, &file)?;
    if let Some(labels) = &a.committee {
        let w = e.committee(labels)?;
        let s = committee_score(&rule, &e, &w)?;
        let text = format!("{} {}", e.format_set(w.members()), rational(&s));
        let json = json!({
            "command": "score",
            "rule": rule_name(&rule),
            "committee": e.labels_of(w.members()),
            "score": rational(&s),
        });
        return Ok(Output { code: EXIT_YES, text, json });
    }
    if !rule.is_additive() {
        return Err(invalid(format!("{rule} scores committees, not candidates; pass --committee")));
    }
    let scores = candidate_scores(&rule, &e)?;
    let text = (0..e.num_candidates())
        .map(|c| format!("{} {}", e.label(c), rational(&scores[c])))
        .collect::<Vec<_>>()
        .join("\n");
    let map: serde_json::Map<String, Value> =
        (0..e.num_candidates()).map(|c| (e.label(c).to_string(), Value::String(rational(&scores[c])))).collect();
    let json = json!({ "command": "score", "rule": rule_name(&rule), "scores": map });
    Ok(Output { code: EXIT_YES, text, json })
}

fn jcc(a: &JccArgs) -> Result<Output, Failure> {
    let file = load(&a.file)?;
    let rule = rule_of(&a.rule, &file)?;
    let inst = file.jcc(a.k, a.j.as_deref())?;
    let (answer, algo) = solve_jcc(&rule, &inst, a.algo)?;
    let json = json!({
        "command": "jcc",
        "rule": rule_name(&rule),
        "k": inst.k,
        "J": inst.election.labels_of(&inst.j),
        "algo": algo,
        "answer": answer,
    });
    Ok(Output { code: if answer { EXIT_YES } else { EXIT_NO }, text: verdict_word(answer).into(), json })
}

fn solve_manip(a: &ManipArgs) -> Result<Output, Failure> {
    let file = load(&a.file)?;
    let rule = a.rule.clone().map(Ok).unwrap_or_else(|| rule_of(&None, &file))?;
    let inst = file.manipulation(Some(&rule), a.k, a.variant)?;
    let solved = solve_manipulation(&inst, a.algo)?;
    let e = &inst.election;
    let witness = solved
        .verdict
        .witness()
        .map(|p: &BallotProfile| p.replacements.iter().map(|b| e.labels_of(b.as_slice())).collect::<Vec<_>>());
    let mut text = verdict_word(solved.verdict.is_yes()).to_string();
    if let Some(w) = &witness {
        for (i, b) in w.iter().enumerate() {
            text.push_str(&format!("\nmanipulator {i}: {}", set_text(b)));
        }
    }
    let json = json!({
        "command": "solve-manip",
        "rule": rule_name(&inst.rule),
        "variant": inst.variant.name().to_ascii_lowercase(),
        "k": inst.k,
        "algo": solved.algo,
        "answer": solved.verdict.is_yes(),
        "witness": witness,
    });
    Ok(Output { code: if solved.verdict.is_yes() { EXIT_YES } else { EXIT_NO }, text, json })
}

fn control(a: &ControlArgs) -> Result<Output, Failure> {
    let mut file = load(&a.file)?;
    if a.budget.is_some() || a.budget_add.is_some() || a.budget_delete.is_some() {
        file.budget = a.budget.or(file.budget);
        file.budget_add = a.budget_add.or(if a.budget.is_some() { None } else { file.budget_add });
        file.budget_delete = a.budget_delete.or(if a.budget.is_some() { None } else { file.budget_delete });
    }
    let inst = file.control(a.kind, a.rule.as_ref(), a.k, a.j.as_deref())?;
    let solved = solve_control(&inst, a.algo, a.seed)?;
    let yes = solved.verdict.is_yes();
    let witness = solved.verdict.witness().map(|s| describe_solution(&inst, s));
    let mut text = verdict_word(yes).to_string();
    if let Some(Value::Object(w)) = &witness {
        for (key, value) in w {
            text.push_str(&format!("\n{key}: {value}"));
        }
    }
    let json = json!({
        "command": "solve-control",
        "rule": rule_name(&inst.rule),
        "type": inst.kind.name().to_ascii_lowercase(),
        "k": inst.k,
        "J": inst.election.labels_of(&inst.j),
        "algo": solved.algo,
        "answer": yes,
        "witness": witness,
    });
    Ok(Output { code: if yes { EXIT_YES } else { EXIT_NO }, text, json })
}

fn describe_solution(inst: &ControlInstance, s: &ControlSolution) -> Value {
    let e: &Election = &inst.election;
    let ballots = |idx: &[usize], pool: &[abmv::Ballot]| -> Vec<Value> {
        idx.iter().map(|&i| json!({ "index": i, "ballot": e.labels_of(pool[i].as_slice()) })).collect()
    };
    json!({
        "added_votes": ballots(&s.added_votes, &inst.unregistered_votes),
        "deleted_votes": ballots(&s.deleted_votes, e.votes()),
        "added_candidates": e.labels_of(&s.added_candidates),
        "deleted_candidates": e.labels_of(&s.deleted_candidates),
    })
}

fn gen(a: &GenArgs) -> Result<Output, Failure> {
    let source = match (&a.source, a.seed) {
        (Some(path), _) => parse_json::<SourceFile>(&read(path)?)?.source()?,
        (None, Some(seed)) => random_source(&mut rng(seed), a.kind)?,
        (None, None) => return Err(invalid("pass --source or --seed")),
    };
    if let Some(path) = &a.source_out {
        fs::write(path, to_json(&SourceFile::from_source(&source)) + "\n")
            .map_err(|e| invalid(format!("cannot write {}: {e}", path.display())))?;
    }
    let mut opts = GenerateOptions::default();
    if let Some(v) = a.variant {
        opts.variant = v;
    }
    if let Some(r) = &a.thiele {
        opts.thiele = r.clone();
    }
    let inst = generate_with(a.kind, &source, &opts)?;
    let body = to_json(&ElectionFile::from_strategic(&inst));
    let json: Value = serde_json::from_str(&body).expect("generated JSON parses");
    Ok(Output { code: EXIT_YES, text: body, json })
}

fn verify(a: &VerifyArgs) -> Result<Output, Failure> {
    let suites: Vec<Suite> = if a.suite == "all" { Suite::ALL.to_vec() } else { vec![a.suite.parse::<Suite>()?] };
    let workers = a.workers.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    let opts = CampaignOptions { trials: a.trials, seed: a.seed, workers, heavy: a.heavy };
    let reports: Vec<Report> = suites.iter().map(|&s| campaign::run(s, &opts)).collect();
    let mut text = String::new();
    for r in &reports {
        text.push_str(&format!(
            "{}: {} trials, {} yes, {} mismatches, {} uncertified, {} errors, {} capped: {}\n",
            r.suite,
            r.trials,
            r.yes,
            r.mismatches,
            r.uncertified,
            r.errors,
            r.capped,
            if r.passed() { "PASS" } else { "FAIL" }
        ));
        for f in &r.failures {
            text.push_str(&format!(
                "  trial {} (seed {}): {}{}\n",
                f.index,
                f.seed,
                f.label,
                f.error.as_ref().map(|e| format!(": {e}")).unwrap_or_default()
            ));
        }
    }
    let broken = reports.iter().any(|r| r.mismatches + r.uncertified + r.errors > 0);
    let capped = reports.iter().any(|r| r.capped > 0);
    let code = if broken {
        EXIT_NO
    } else if capped {
        EXIT_CAP
    } else {
        EXIT_YES
    };
    let json = json!({ "command": "verify", "seed": a.seed, "trials": a.trials, "passed": code == EXIT_YES, "reports": reports });
    Ok(Output { code, text, json })
}
