//! Command-line front end. `run` parses arguments, dispatches, prints the
//! report and returns the process exit code: 0 on success, 1 when a
//! verification fails, 2 on usage errors.

use std::ffi::OsString;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::analysis::{classify_eca, classify_swap, EcaClass, SwapVerdict};
use crate::bitcore::BitWord;
use crate::cyclic::{parity_row, MAX_RING, project_formula, project_periodic, CyclicPerm};
use crate::gates::{evaluate_expr, GateExpr, GeneratorDict, GroupElement, DEFAULT_WINDOW_CAP};
use crate::grammar::{cancel_repeats, verify_on_ring, verify_semantics, Nonterminal, Slg};
use crate::search::{parse_bytes, parse_generator, search, SearchConfig, SearchOutcome, Strategy};
use crate::synth::{synthesize_nct, NctGate};
use crate::verify::{run_all, VerifyOptions, REPORT_SCHEMA_VERSION};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "gatecalc", version, about = "Reversible gates on the binary full shift")]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,

    /// Widest table built while evaluating expressions.
    #[arg(long, global = true, env = "GATECALC_WINDOW_CAP", default_value_t = DEFAULT_WINDOW_CAP)]
    window_cap: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate an expression and print its canonical form.
    Gate(GateArgs),
    /// Universality verdicts for word swaps and ECA rules.
    #[command(subcommand)]
    Classify(ClassifyCommand),
    /// Programs for c1, rc1, s and c2 from the flip and one word swap.
    Synthesize(SynthArgs),
    /// Permutation induced on the ring of size n.
    Project(ProjectArgs),
    /// Necklace counts and the parity of the ring rotation.
    Parity(ParityArgs),
    /// Straight-line grammar for the standard gates.
    #[command(subcommand)]
    Grammar(GrammarCommand),
    /// Search for a word over generators that equals a target.
    Search(SearchArgs),
    /// Run the whole verification suite.
    VerifyAll(VerifyArgs),
}

#[derive(Args, Debug)]
struct GateArgs {
    /// Atoms such as `e57@-1 c0@2 swap`; the leftmost acts last.
    #[arg(required = true, num_args = 1..)]
    expr: Vec<String>,
    /// Apply the result to this word.
    #[arg(long)]
    apply: Option<BitWord>,
    /// Coordinate of the first letter of `--apply`.
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    anchor: i64,
}

#[derive(Subcommand, Debug)]
enum ClassifyCommand {
    /// Is {c0, f_uv, sigma} universal?
    Swap {
        #[arg(long)]
        u: BitWord,
        #[arg(long)]
        v: BitWord,
        /// Also synthesize and check the NCT programs for universal pairs.
        #[arg(long)]
        verify: bool,
    },
    /// Is {e^rule, sigma} universal?
    Eca {
        #[arg(long, required_unless_present = "all", conflicts_with = "all")]
        rule: Option<u32>,
        /// Classify all 256 rules.
        #[arg(long)]
        all: bool,
    },
}

#[derive(Args, Debug)]
struct SynthArgs {
    #[arg(long)]
    u: BitWord,
    #[arg(long)]
    v: BitWord,
    #[arg(long, value_enum, default_value_t = GateChoice::All)]
    gate: GateChoice,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum GateChoice {
    C1,
    Rc1,
    S,
    C2,
    All,
}

#[derive(Args, Debug)]
struct ProjectArgs {
    /// Expression, as for `gate`.
    #[arg(required = true, num_args = 1..)]
    expr: Vec<String>,
    #[arg(long)]
    n: u32,
    #[arg(long, value_enum, default_value_t = Method::Formula)]
    method: Method,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Method {
    Formula,
    Periodic,
    /// Compute both and compare.
    Both,
}

#[derive(Args, Debug)]
struct ParityArgs {
    #[arg(long, default_value_t = 16, value_parser = clap::value_parser!(u32).range(1..=62))]
    max_n: u32,
}

#[derive(Subcommand, Debug)]
enum GrammarCommand {
    /// Print the derived string.
    Expand {
        #[arg(long)]
        start: Nonterminal,
        /// Read each production left to right instead of in application order.
        #[arg(long)]
        as_written: bool,
    },
    /// Check that the derived program computes its gate.
    Verify {
        #[arg(long)]
        start: Nonterminal,
        /// Check on the ring of this size instead of the full shift.
        #[arg(long)]
        ring: Option<u32>,
    },
}

#[derive(Args, Debug)]
struct SearchArgs {
    /// Comma-separated generators, e.g. `e57@1,e57@0,e57@-1`.
    #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
    gen: Vec<String>,
    #[arg(long)]
    target: String,
    #[arg(long, default_value_t = Strategy::Bfs)]
    strategy: Strategy,
    #[arg(long, default_value_t = 10)]
    max_depth: usize,
    /// Memory budget such as `512M` or `8G`.
    #[arg(long, env = "GATECALC_MEM", default_value = "2G")]
    mem: String,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Memory budget for the search check.
    #[arg(long, env = "GATECALC_MEM", default_value = "2G")]
    mem: String,
}

/// Outcome of one command: a value for `--json`, text for humans, and
/// whether everything checked out.
struct Report {
    command: &'static str,
    data: serde_json::Value,
    text: String,
    ok: bool,
}

impl Report {
    fn new(command: &'static str, data: impl Serialize, text: String, ok: bool) -> Result<Self, String> {
        Ok(Self {
            command,
            data: serde_json::to_value(data).map_err(|e| e.to_string())?,
            text,
            ok,
        })
    }
}

/// Parses `argv` (program name first), runs the command and returns the
/// exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match dispatch(&cli) {
        Ok(report) => {
            if cli.json {
                let doc = json!({
                    "schema_version": REPORT_SCHEMA_VERSION,
                    "command": report.command,
                    "ok": report.ok,
                    "result": report.data,
                });
                println!("{}", serde_json::to_string_pretty(&doc).expect("json value"));
            } else {
                print!("{}", report.text);
            }
            if report.ok {
                EXIT_OK
            } else {
                EXIT_FAILED
            }
        }
        Err(msg) => {
            eprintln!("error: {msg}");
            EXIT_USAGE
        }
    }
}

fn dispatch(cli: &Cli) -> Result<Report, String> {
    match &cli.command {
        Command::Gate(args) => gate(args, cli.window_cap),
        Command::Classify(ClassifyCommand::Swap { u, v, verify }) => classify_swap_cmd(u, v, *verify),
        Command::Classify(ClassifyCommand::Eca { rule, all }) => classify_eca_cmd(*rule, *all),
        Command::Synthesize(args) => synthesize(args),
        Command::Project(args) => project(args, cli.window_cap),
        Command::Parity(args) => parity(args),
        Command::Grammar(GrammarCommand::Expand { start, as_written }) => grammar_expand(*start, *as_written),
        Command::Grammar(GrammarCommand::Verify { start, ring }) => grammar_verify(*start, *ring),
        Command::Search(args) => search_cmd(args),
        Command::VerifyAll(args) => verify_all(args),
    }
}

/// Evaluates an expression whose atom names are gate names (`c0`, `rc1`,
/// `swap`, ...) or ECA rules (`e57`).
pub fn evaluate_named_expr(text: &str, window_cap: usize) -> Result<GroupElement, String> {
    let expr: GateExpr = text.parse().map_err(|e| format!("{e}"))?;
    let mut dict = GeneratorDict::new().with_window_cap(window_cap);
    for atom in expr.atoms() {
        if dict.get(&atom.name).is_none() {
            let g = if atom.name == "sigma" {
                GroupElement::sigma(1)
            } else {
                parse_generator(&atom.name).map_err(|e| e.to_string())?
            };
            dict.insert(atom.name.clone(), g);
        }
    }
    evaluate_expr(&expr, &dict).map_err(|e| e.to_string())
}

fn gate(args: &GateArgs, cap: usize) -> Result<Report, String> {
    let g = evaluate_named_expr(&args.expr.join(" "), cap)?;
    let mut text = format!("{g}\n");
    let inert = g.inert();
    text += &format!(
        "shift power {}, window {}, strong radius {}\n",
        g.shift_power(),
        inert.window().map_or("none".into(), |(lo, hi)| format!("[{lo}, {hi}]")),
        inert.strong_radius()
    );
    let mut applied = None;
    if let Some(w) = &args.apply {
        let (image, anchor) = g.apply(w, args.anchor).map_err(|e| e.to_string())?;
        text += &format!("{w} @ {} -> {image} @ {anchor}\n", args.anchor);
        applied = Some(json!({"input": w, "anchor": args.anchor, "output": image, "output_anchor": anchor}));
    }
    Report::new("gate", json!({"gate": g.to_record(), "applied": applied}), text, true)
}

fn classify_swap_cmd(u: &BitWord, v: &BitWord, verify: bool) -> Result<Report, String> {
    let class = classify_swap(u, v).map_err(|e| e.to_string())?;
    let mut text = format!("d({u}, {v}) = {}: {:?}", class.diff, class.verdict);
    if let Some(w) = &class.witness {
        text += &format!(" (witness {w:?} verified)");
    }
    text.push('\n');
    let mut programs = None;
    if verify && class.verdict == SwapVerdict::Universal {
        let progs = synthesize_nct(u, v).map_err(|e| e.to_string())?;
        for (g, e) in &progs {
            text += &format!("{g}: {} atoms, verified\n", e.len());
        }
        programs = Some(progs.iter().map(|(g, e)| (g.name(), e.len())).collect::<Vec<_>>());
    }
    Report::new("classify swap", json!({"class": class, "programs": programs}), text, true)
}

fn eca_line(b: u32, class: &EcaClass) -> String {
    match class {
        EcaClass::NotBijective => format!("{b}: not bijective"),
        EcaClass::NonUniversal { reason } => format!("{b}: NonUniversal ({})", serde_json::to_value(reason).expect("enum").as_str().unwrap_or("")),
        EcaClass::Universal(cert) => format!(
            "{b}: Universal (certificate verified)\n    flip word evaluates to c0 under {:?} letters; c0 . e = f_{{{},{}}}",
            cert.convention, cert.swap_u, cert.swap_v
        ),
    }
}

fn classify_eca_cmd(rule: Option<u32>, all: bool) -> Result<Report, String> {
    let rules: Vec<u32> = if all { (0..256).collect() } else { rule.into_iter().collect() };
    let mut text = String::new();
    let mut rows = Vec::new();
    for b in rules {
        let class = classify_eca(b).map_err(|e| e.to_string())?;
        text += &eca_line(b, &class);
        text.push('\n');
        rows.push(json!({"rule": b, "class": class}));
    }
    Report::new("classify eca", rows, text, true)
}

fn synthesize(args: &SynthArgs) -> Result<Report, String> {
    let progs = synthesize_nct(&args.u, &args.v).map_err(|e| e.to_string())?;
    let wanted: Vec<NctGate> = match args.gate {
        GateChoice::All => NctGate::ALL.to_vec(),
        GateChoice::C1 => vec![NctGate::C1],
        GateChoice::Rc1 => vec![NctGate::Rc1],
        GateChoice::S => vec![NctGate::S],
        GateChoice::C2 => vec![NctGate::C2],
    };
    let mut text = String::new();
    let mut out = serde_json::Map::new();
    for g in wanted {
        let e = &progs[&g];
        text += &format!("{g} ({} atoms): {e}\n", e.len());
        out.insert(g.name().into(), json!(e.to_string()));
    }
    Report::new("synthesize", out, text, true)
}

fn perm_summary(p: &CyclicPerm) -> serde_json::Value {
    json!({"n": p.n(), "table": p.table(), "sign": p.sign(), "cycles": p.cycle_notation()})
}

fn project(args: &ProjectArgs, cap: usize) -> Result<Report, String> {
    let g = evaluate_named_expr(&args.expr.join(" "), cap)?;
    let formula = || project_formula(&g, args.n).map_err(|e| e.to_string());
    let periodic = || project_periodic(&g, args.n).map_err(|e| e.to_string());
    let (p, ok) = match args.method {
        Method::Formula => (formula()?, true),
        Method::Periodic => (periodic()?, true),
        Method::Both => {
            let p = formula()?;
            let ok = p == periodic()?;
            (p, ok)
        }
    };
    let mut text = format!("{} on n = {}: {}\nsign: {}\n", g, args.n, p.cycle_notation(), p.sign());
    if matches!(args.method, Method::Both) {
        text += &format!("formula and simulation {}\n", if ok { "agree" } else { "DISAGREE" });
    }
    Report::new("project", perm_summary(&p), text, ok)
}

fn parity(args: &ParityArgs) -> Result<Report, String> {
    let mut text = format!(
        "{:>3} {:>20} {:>10} {:>6} {:>8}\n",
        "n", "p_n (formula)", "p_n (orb)", "parity", "sign σ_n"
    );
    let mut rows = Vec::new();
    let mut ok = true;
    for n in 1..=args.max_n {
        let row = parity_row(n, n <= MAX_RING).map_err(|e| e.to_string())?;
        ok &= row.necklaces_orbits.is_none_or(|o| o == row.necklaces_formula)
            && row.rotation_sign.is_none_or(|s| s == row.predicted_sign);
        text += &format!(
            "{:>3} {:>20} {:>10} {:>6} {:>8}\n",
            n,
            row.necklaces_formula,
            row.necklaces_orbits.map_or("-".into(), |o| o.to_string()),
            if row.necklaces_formula % 2 == 0 { "even" } else { "odd" },
            row.rotation_sign.map_or("-".into(), |s| s.to_string())
        );
        rows.push(row);
    }
    Report::new("parity", rows, text, ok)
}

fn grammar_expand(start: Nonterminal, as_written: bool) -> Result<Report, String> {
    let slg = Slg::standard().map_err(|e| e.to_string())?;
    let s = if as_written { slg.expand_as_written(start) } else { slg.expand(start) }.map_err(|e| e.to_string())?;
    Report::new("grammar expand", json!({"start": start, "length": s.len(), "string": s}), format!("{s}\n"), true)
}

fn grammar_verify(start: Nonterminal, ring: Option<u32>) -> Result<Report, String> {
    let slg = Slg::standard().map_err(|e| e.to_string())?;
    let target = start.target().map_err(|e| e.to_string())?;
    match ring {
        None => {
            let r = verify_semantics(&slg, start, &target).map_err(|e| e.to_string())?;
            let s = slg.expand(start).map_err(|e| e.to_string())?;
            let (removable, _) = cancel_repeats(&s);
            let mut text = String::new();
            for o in &r.orders {
                text += &format!(
                    "{start} ({} letters), {:?}: {}\n",
                    r.length,
                    o.order,
                    o.anchor.map_or("no match in cells 0..=8".into(), |a| format!("equals the target at cell {a}"))
                );
            }
            if removable > 0 {
                text += &format!("{removable} letters cancel against neighbours\n");
            }
            text += if r.passed() { "pass\n" } else { "FAIL\n" };
            Report::new("grammar verify", json!({"report": r, "removable_letters": removable}), text, r.passed())
        }
        Some(n) => {
            let r = verify_on_ring(&slg, start, &target, n).map_err(|e| e.to_string())?;
            let text = format!(
                "{start} on ring n = {n} at cell {}: {}\n",
                r.anchor,
                if r.holds { "pass" } else { "FAIL" }
            );
            Report::new("grammar verify", &r, text, r.holds)
        }
    }
}

fn search_cmd(args: &SearchArgs) -> Result<Report, String> {
    let gens = args
        .gen
        .iter()
        .map(|g| parse_generator(g.trim()).map_err(|e| e.to_string()))
        .collect::<Result<Vec<_>, _>>()?;
    let target = parse_generator(args.target.trim()).map_err(|e| e.to_string())?;
    let cfg = SearchConfig::new(gens, target)
        .labels(args.gen.iter().map(|g| g.trim().to_string()).collect())
        .strategy(args.strategy)
        .max_depth(args.max_depth)
        .memory_budget(parse_bytes(&args.mem).map_err(|e| e.to_string())?);
    let outcome = search(&cfg).map_err(|e| e.to_string())?;
    let stats = outcome.stats();
    let mut text = format!("{} states, ~{} bytes\n", stats.states, stats.bytes);
    let ok = match &outcome {
        SearchOutcome::Found { word, expr, minimal, .. } => {
            text += &format!(
                "found {} letters{}: {expr}\n",
                word.len(),
                if *minimal { " (no shorter word exists)" } else { "" }
            );
            true
        }
        SearchOutcome::NotFoundWithinDepth { .. } => {
            text += &format!("not found within depth {}\n", args.max_depth);
            false
        }
        SearchOutcome::BudgetExceeded { stats } => {
            text += &format!("memory budget exceeded after radius {}\n", stats.depth_reached);
            false
        }
    };
    Report::new("search", &outcome, text, ok)
}

fn verify_all(args: &VerifyArgs) -> Result<Report, String> {
    let opts = VerifyOptions {
        memory_budget: parse_bytes(&args.mem).map_err(|e| e.to_string())?,
        ..VerifyOptions::default()
    };
    let report = run_all(&opts);
    let mut text = String::new();
    for c in &report.checks {
        text += &format!(
            "{} {:>2} {:<58} {:>8.3}s  {}\n",
            if c.passed { "PASS" } else { "FAIL" },
            c.id,
            c.title,
            c.seconds,
            c.detail
        );
    }
    let passed = report.checks.iter().filter(|c| c.passed).count();
    text += &format!("{passed}/{} passed\n", report.checks.len());
    let ok = report.all_passed();
    Report::new("verify-all", &report, text, ok)
}
