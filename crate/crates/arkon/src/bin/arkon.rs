//! Command-line front end: generate benchmark cases, reason over theory
//! files, render them as sentences, evaluate a chat model, and report.

use std::error::Error;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{ArgGroup, Args, Parser, Subcommand};

use arkon::generate::{
    emit_case, standard_matrix, CaseSetting, Family, FamilySpec, Polarity, SentenceOrder,
};
use arkon::harness::{
    build_report, load_cases, load_config, run_cases, write_records, ChatBackend, CueLexicon,
    FixtureBackend, HttpBackend, RunOptions,
};
use arkon::parser::parse_theory;
use arkon::reasoner::{conclusions, explain, ConclusionSet, TagState};
use arkon::selftest::run_selftest;
use arkon::theory::{Literal, Theory};
use arkon::translate::{render_theory, RenderConfig};

#[derive(Parser)]
#[command(
    name = "arkon",
    version,
    about = "Defeasible logic benchmark toolkit",
    subcommand_required = true,
    arg_required_else_help = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write benchmark case directories (theory, sentences, metadata)
    Generate(GenerateArgs),
    /// Compute tagged conclusions for a theory file
    Reason(ReasonArgs),
    /// Render a theory file as natural-language sentences
    Translate(TranslateArgs),
    /// Run generated cases against a chat model and grade the answers
    Eval(EvalArgs),
    /// Aggregate run records into an accuracy table
    Report(ReportArgs),
    /// Run the built-in consistency suite
    Selftest,
}

#[derive(Args)]
#[command(group(ArgGroup::new("source").required(true).args(["preset", "family"])))]
struct GenerateArgs {
    /// Emit a whole case matrix instead of a single case
    #[arg(long, value_parser = ["standard"])]
    preset: Option<String>,
    /// Theory family (chain, chains, circle, circles, dag, levels-, levels,
    /// hierarchies)
    #[arg(long, value_parser = parse_family, requires = "n")]
    family: Option<Family>,
    /// Chain length, level count, or tree depth
    #[arg(long, requires = "family")]
    n: Option<u32>,
    /// Branching factor (dag and hierarchies only)
    #[arg(long, requires = "family")]
    k: Option<u32>,
    /// Whether the query atom should come out provable
    #[arg(long, value_parser = parse_polarity, default_value = "plus")]
    polarity: Polarity,
    /// Sentence order in the rendered knowledge
    #[arg(long, value_parser = parse_ordering, default_value = "seq")]
    ordering: SentenceOrder,
    /// Shuffle seed; with --preset, the base each case offsets from
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Directory receiving one subdirectory per case
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ReasonArgs {
    /// Theory file in `.dfl` syntax
    file: PathBuf,
    /// Literal to report on (prefix `-` for the negation)
    #[arg(long, allow_hyphen_values = true)]
    query: Option<String>,
    /// Print a replayable derivation for the queried literal
    #[arg(long, requires = "query", conflicts_with = "json")]
    explain: bool,
    /// Emit JSON instead of tag lines
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct TranslateArgs {
    /// Theory file in `.dfl` syntax
    file: PathBuf,
    /// Category noun used in the sentences
    #[arg(long, default_value = "Arkon")]
    noun: String,
    /// Indefinite article placed before the noun
    #[arg(long, default_value = "an")]
    article: String,
}

#[derive(Args)]
struct EvalArgs {
    /// Directory of generated case subdirectories
    #[arg(long)]
    cases: PathBuf,
    /// TOML file with endpoint and run settings
    #[arg(long)]
    config: PathBuf,
    /// Replay stored transcripts from this directory instead of calling
    /// the endpoint
    #[arg(long)]
    offline: Option<PathBuf>,
    /// Directory receiving records.jsonl and report.csv
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ReportArgs {
    /// Directory holding records.jsonl from a previous eval
    #[arg(long)]
    run: PathBuf,
    /// Print comma-separated values instead of the aligned table
    #[arg(long)]
    csv: bool,
}

fn parse_family(s: &str) -> Result<Family, String> {
    s.parse().map_err(|e: arkon::generate::GenerateError| e.to_string())
}

fn parse_polarity(s: &str) -> Result<Polarity, String> {
    s.parse().map_err(|e: arkon::generate::GenerateError| e.to_string())
}

fn parse_ordering(s: &str) -> Result<SentenceOrder, String> {
    s.parse().map_err(|e: arkon::generate::GenerateError| e.to_string())
}

fn main() {
    // Die silently on a closed pipe (`arkon generate ... | head`) instead
    // of panicking mid-write like the Rust default.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            std::process::exit(code);
        }
    };
    if let Err(err) = run(cli.command) {
        eprintln!("error: {err}");
        std::process::exit(2);
    }
}

fn run(command: Command) -> Result<(), Box<dyn Error>> {
    match command {
        Command::Generate(args) => cmd_generate(args),
        Command::Reason(args) => cmd_reason(args),
        Command::Translate(args) => cmd_translate(args),
        Command::Eval(args) => cmd_eval(args),
        Command::Report(args) => cmd_report(args),
        Command::Selftest => cmd_selftest(),
    }
}

fn cmd_generate(args: GenerateArgs) -> Result<(), Box<dyn Error>> {
    std::fs::create_dir_all(&args.out)?;
    if args.preset.is_some() {
        for (spec, setting) in standard_matrix(args.seed) {
            let (_, dir) = emit_case(&spec, &setting, &args.out)?;
            println!("{}", dir.display());
        }
        return Ok(());
    }
    let family = args.family.expect("the source group guarantees a family");
    let n = args.n.expect("--family requires --n");
    let spec = match args.k {
        Some(k) => FamilySpec::with_branching(family, n, k),
        None => FamilySpec::new(family, n),
    };
    let setting = CaseSetting {
        polarity: args.polarity,
        ordering: args.ordering,
        shuffle_seed: args.seed,
    };
    let (_, dir) = emit_case(&spec, &setting, &args.out)?;
    println!("{}", dir.display());
    Ok(())
}

fn load_theory(path: &Path) -> Result<Theory, Box<dyn Error>> {
    let text =
        std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse_theory(&text).map_err(|diagnostics| {
        let mut message = format!("{}: theory does not parse", path.display());
        for diagnostic in diagnostics {
            message.push_str("\n  ");
            message.push_str(&diagnostic.to_string());
        }
        message.into()
    })
}

fn delta_symbol(state: TagState) -> &'static str {
    match state {
        TagState::ProvedPositive => "+D",
        TagState::ProvedNegative => "-D",
        TagState::Undetermined => "?D",
    }
}

fn partial_symbol(state: TagState) -> &'static str {
    match state {
        TagState::ProvedPositive => "+d",
        TagState::ProvedNegative => "-d",
        TagState::Undetermined => "?d",
    }
}

fn print_tag_lines(set: &ConclusionSet, lit: &Literal) {
    // A literal foreign to the theory has no fact and no rule, which is
    // exactly the vacuous case of both negative conditions.
    let delta = set.delta(lit).unwrap_or(TagState::ProvedNegative);
    let partial = set.partial(lit).unwrap_or(TagState::ProvedNegative);
    println!("{} {lit}", delta_symbol(delta));
    println!("{} {lit}", partial_symbol(partial));
}

fn cmd_reason(args: ReasonArgs) -> Result<(), Box<dyn Error>> {
    let theory = load_theory(&args.file)?;
    let set = conclusions(&theory);
    let Some(query_text) = &args.query else {
        if args.json {
            println!("{}", serde_json::to_string_pretty(&set.to_json())?);
        } else {
            for lit in set.universe() {
                print_tag_lines(&set, lit);
            }
        }
        return Ok(());
    };
    let lit: Literal = query_text
        .parse()
        .map_err(|e| format!("invalid query literal {query_text:?}: {e}"))?;
    if args.explain {
        let trace = explain(&theory, &lit)?;
        println!("{}", trace.render());
        return Ok(());
    }
    if args.json {
        let value = serde_json::json!({
            "literal": lit.to_string(),
            "delta": set.delta(&lit).unwrap_or(TagState::ProvedNegative),
            "partial": set.partial(&lit).unwrap_or(TagState::ProvedNegative),
            "verdict": set.verdict(&lit),
        });
        println!("{}", serde_json::to_string_pretty(&value)?);
    } else {
        print_tag_lines(&set, &lit);
    }
    Ok(())
}

fn cmd_translate(args: TranslateArgs) -> Result<(), Box<dyn Error>> {
    let theory = load_theory(&args.file)?;
    let config = RenderConfig {
        noun: args.noun,
        article: args.article,
    };
    let rendering = render_theory(&theory, &config);
    for warning in &rendering.warnings {
        eprintln!("warning: {warning}");
    }
    for sentence in &rendering.sentences {
        println!("{sentence}");
    }
    Ok(())
}

fn cmd_eval(args: EvalArgs) -> Result<(), Box<dyn Error>> {
    let config = load_config(&args.config)?;
    let lexicon = match &config.run.cues {
        Some(path) => CueLexicon::from_path(path)?,
        None => CueLexicon::builtin(),
    };
    let cases = load_cases(&args.cases)?;
    let options = RunOptions {
        grading: config.run.grading,
        lexicon,
        parallelism: config.run.parallelism,
        timestamps: args.offline.is_none(),
    };
    let records = match &args.offline {
        Some(dir) => run_cases(&cases, &FixtureBackend::new(dir), &options),
        None => {
            let backend = HttpBackend::new(config.endpoint)?;
            eprintln!(
                "running {} cases against {} ({} in flight)",
                cases.len(),
                backend.model_name(),
                options.parallelism.max(1)
            );
            run_cases(&cases, &backend, &options)
        }
    };
    std::fs::create_dir_all(&args.out)?;
    write_records(&args.out.join("records.jsonl"), &records)?;
    let report = build_report(&records);
    std::fs::write(args.out.join("report.csv"), report.to_csv())?;
    print!("{}", report.to_text());
    Ok(())
}

fn cmd_report(args: ReportArgs) -> Result<(), Box<dyn Error>> {
    let records = arkon::harness::read_records(&args.run.join("records.jsonl"))?;
    let report = build_report(&records);
    if args.csv {
        print!("{}", report.to_csv());
    } else {
        print!("{}", report.to_text());
    }
    Ok(())
}

fn cmd_selftest() -> Result<(), Box<dyn Error>> {
    let results = run_selftest();
    let mut failed = 0usize;
    for result in &results {
        if result.passed {
            println!("ok   {}", result.name);
        } else {
            println!("FAIL {}: {}", result.name, result.details);
            failed += 1;
        }
    }
    if failed > 0 {
        return Err(format!("{failed} of {} checks failed", results.len()).into());
    }
    println!("all {} checks passed", results.len());
    Ok(())
}
