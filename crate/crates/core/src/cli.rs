//! The `psync` command line.
//!
//! [`run`] parses arguments and returns a [`CommandOutcome`] instead of
//! printing, so the binary and the tests share one code path.
//!
//! Exit codes: 0 success or positive answer, 1 negative answer, 2 usage or
//! input error, 3 internal error.

use std::fmt::Write as _;
use std::panic::{catch_unwind, AssertUnwindSafe};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::automaton::{PartialDfa, Word};
use crate::codes::{
    literal_automaton, literal_reset_word, log_rank_bound, log_rank_word, primitive_root, validate_code,
    weinbaum_conjugate, LiteralAutomaton, PrefixCode,
};
use crate::constructions::{collecting, collecting_tree, duplicating, fixing, induced};
use crate::equivalence::inseparability_partition;
use crate::error::Error;
use crate::format::{parse_code_lines, parse_dfa_with, write_dfa, write_dfa_with_comments, ParseOptions};
use crate::generators::{gen_cerny, gen_oneword_code, gen_random_partial, gen_random_prefix_code};
use crate::oracle::{duplicating_identity_check, extremal_search, subset_bfs, SearchProfile};
use crate::synchronization::{
    greedy_min_rank, is_synchronizing, min_rank_word_via_fixing, rank_target_word, reset_word_via_collecting,
    RankMode,
};
use crate::verify::run_all;

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommandOutcome {
    pub code: i32,
    /// What the binary prints on stdout, already in the requested format.
    pub stdout: String,
    /// Diagnostics for stderr.
    pub stderr: String,
    /// `key=value` pairs describing the result, independent of the format.
    pub summary: Vec<(String, String)>,
}

#[derive(Debug, Parser)]
#[command(name = "psync", version, about = "Synchronization of strongly connected partial DFAs")]
struct Cli {
    /// Output style: readable text or stable key=value lines.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,
    /// Accept the reserved letter `@g` in automaton files.
    #[arg(long, global = true)]
    allow_reserved: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Text,
    Summary,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the inseparability classes.
    Classes { file: String },
    /// Emit a constructed automaton.
    #[command(subcommand)]
    Build(BuildCmd),
    /// Reset words and the synchronization test.
    #[command(subcommand)]
    Sync(SyncCmd),
    /// Words of small non-zero rank.
    #[command(subcommand)]
    Rank(RankCmd),
    /// Prefix codes and their literal automata.
    #[command(subcommand)]
    Code(CodeCmd),
    /// Shortest word of every reachable rank, by subset search.
    Oracle { file: String },
    /// Self-checks against the subset-search oracle.
    #[command(subcommand)]
    Verify(VerifyCmd),
    /// Search for slowly synchronizing automata.
    #[command(subcommand)]
    Search(SearchCmd),
    /// Generate automata and codes.
    #[command(subcommand)]
    Gen(GenCmd),
}

#[derive(Debug, Subcommand)]
enum BuildCmd {
    Fixing { file: String },
    /// Collecting automaton for the tree rooted at the smallest class.
    Collecting { file: String },
    Duplicating { file: String },
    /// Word lists are comma-separated; letters inside a word are space-separated, `-` is the empty word.
    Induced {
        file: String,
        #[arg(long)]
        w1: String,
        #[arg(long)]
        w2: String,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SyncMethod {
    Greedy,
    Fixing,
    Collecting,
    Oracle,
}

#[derive(Debug, Subcommand)]
enum SyncCmd {
    /// Exit 0 if synchronizing, 1 otherwise.
    Check { file: String },
    Word {
        file: String,
        #[arg(long, value_enum, default_value_t = SyncMethod::Greedy)]
        method: SyncMethod,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RankMethod {
    Greedy,
    Oracle,
}

#[derive(Debug, Subcommand)]
enum RankCmd {
    /// A word of minimal non-zero rank.
    Min { file: String },
    /// A word of non-zero rank at most the target.
    Word {
        file: String,
        #[arg(long)]
        target: usize,
        #[arg(long, value_enum, default_value_t = RankMethod::Greedy)]
        method: RankMethod,
    },
}

#[derive(Debug, Subcommand)]
enum CodeCmd {
    /// Exit 0 for a valid finite prefix code, 1 otherwise.
    Validate { file: String },
    /// Emit the literal automaton.
    Literal { file: String },
    /// Short word of logarithmic rank.
    Logrank { file: String },
    Reset { file: String },
    /// Rank and reset data of the one-word code `{word}`.
    Oneword { word: String },
}

#[derive(Debug, Subcommand)]
enum VerifyCmd {
    Duplicating {
        file: String,
    },
    /// Run every built-in check.
    All {
        #[arg(long, default_value_t = 8)]
        size_cap: usize,
    },
}

#[derive(Debug, Subcommand)]
enum SearchCmd {
    /// Longest reset threshold among binary automata with one deficient state.
    Extremal(ExtremalArgs),
}

#[derive(Debug, Args)]
struct ExtremalArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, conflicts_with_all = ["seed", "trials"])]
    exhaustive: bool,
    #[arg(long, requires = "trials")]
    seed: Option<u64>,
    #[arg(long, requires = "seed")]
    trials: Option<u64>,
}

#[derive(Debug, Subcommand)]
enum GenCmd {
    Cerny {
        #[arg(long)]
        n: usize,
    },
    Oneword {
        #[arg(long)]
        k: usize,
    },
    RandomDfa {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        alpha: usize,
        #[arg(long, default_value_t = 0.8)]
        density: f64,
        #[arg(long)]
        seed: u64,
    },
    RandomCode {
        #[arg(long)]
        count: usize,
        #[arg(long)]
        maxlen: usize,
        #[arg(long, default_value_t = 2)]
        alpha: usize,
        #[arg(long)]
        seed: u64,
    },
}

/// Handler output before formatting.
struct Out {
    code: i32,
    text: String,
    summary: Vec<(String, String)>,
}

impl Out {
    fn new(code: i32) -> Self {
        Out { code, text: String::new(), summary: Vec::new() }
    }

    fn line(mut self, s: impl AsRef<str>) -> Self {
        self.text.push_str(s.as_ref());
        self.text.push('\n');
        self
    }

    fn kv(mut self, k: &str, v: impl ToString) -> Self {
        self.summary.push((k.to_string(), v.to_string()));
        self
    }

    /// The standard two-line word report.
    fn word(code: i32, dfa: &PartialDfa, w: &[usize]) -> Self {
        let rank = dfa.rank(w);
        Out::new(code)
            .line(dfa.render_word(w))
            .line(format!("rank={rank} len={}", w.len()))
            .kv("word", dfa.render_word(w))
            .kv("rank", rank)
            .kv("len", w.len())
    }
}

fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::NotSynchronizing { .. } | Error::RankUnreachable { .. } => EXIT_NEGATIVE,
        Error::Internal(_) => EXIT_INTERNAL,
        _ => EXIT_USAGE,
    }
}

struct Ctx {
    opts: ParseOptions,
}

impl Ctx {
    fn read(&self, path: &str) -> Result<String, Error> {
        std::fs::read_to_string(path).map_err(|e| Error::Precondition(format!("cannot read {path}: {e}")))
    }

    fn dfa(&self, path: &str) -> Result<PartialDfa, Error> {
        let text = self.read(path)?;
        parse_dfa_with(&text, self.opts).map_err(|e| match e {
            Error::Parse { line, message } => Error::Parse { line, message: format!("{path}: {message}") },
            other => other,
        })
    }

    fn code(&self, path: &str) -> Result<PrefixCode, Error> {
        validate_code(&parse_code_lines(&self.read(path)?)?)
    }
}

/// Runs `psync` with `argv` (program name first).
pub fn run<I, T>(argv: I) -> CommandOutcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let (stdout, stderr) = if code == EXIT_OK { (rendered, String::new()) } else { (String::new(), rendered) };
            return CommandOutcome { code, stdout, stderr, summary: Vec::new() };
        }
    };
    let ctx = Ctx { opts: ParseOptions { allow_reserved: cli.allow_reserved } };
    let format = cli.format;
    let result = catch_unwind(AssertUnwindSafe(|| dispatch(&ctx, cli.command)));
    let out = match result {
        Ok(Ok(out)) => out,
        Ok(Err(err)) => {
            return CommandOutcome {
                code: exit_code_for(&err),
                stdout: match format {
                    OutputFormat::Text => String::new(),
                    OutputFormat::Summary => format!("error={err}\n"),
                },
                stderr: format!("error: {err}\n"),
                summary: vec![("error".into(), err.to_string())],
            };
        }
        Err(panic) => {
            let msg = panic
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "unknown panic".into());
            return CommandOutcome {
                code: EXIT_INTERNAL,
                stdout: String::new(),
                stderr: format!("internal error: {msg}\n"),
                summary: vec![("error".into(), msg)],
            };
        }
    };
    let stdout = match format {
        OutputFormat::Text => out.text,
        OutputFormat::Summary => out.summary.iter().fold(String::new(), |mut s, (k, v)| {
            let _ = writeln!(s, "{k}={v}");
            s
        }),
    };
    CommandOutcome { code: out.code, stdout, stderr: String::new(), summary: out.summary }
}

fn dispatch(ctx: &Ctx, cmd: Command) -> Result<Out, Error> {
    match cmd {
        Command::Classes { file } => classes(&ctx.dfa(&file)?),
        Command::Build(b) => build(ctx, b),
        Command::Sync(s) => sync(ctx, s),
        Command::Rank(r) => rank(ctx, r),
        Command::Code(c) => code(ctx, c),
        Command::Oracle { file } => oracle(&ctx.dfa(&file)?),
        Command::Verify(v) => verify(ctx, v),
        Command::Search(SearchCmd::Extremal(args)) => extremal(args),
        Command::Gen(g) => gen(g),
    }
}

fn classes(dfa: &PartialDfa) -> Result<Out, Error> {
    let part = inseparability_partition(dfa);
    let mut out = Out::new(EXIT_OK).line(format!("kappa={}", part.num_classes())).kv("classes", part.num_classes());
    for (i, c) in part.classes().iter().enumerate() {
        out = out.line(c.to_string()).kv(&format!("class.{i}"), c);
    }
    Ok(out)
}

fn dfa_out(dfa: &PartialDfa, comments: &[String]) -> Out {
    Out::new(EXIT_OK)
        .line(write_dfa_with_comments(dfa, comments).trim_end())
        .kv("states", dfa.num_states())
        .kv("letters", dfa.num_letters())
        .kv("complete", dfa.is_complete())
        .kv("strongly_connected", dfa.is_strongly_connected())
}

fn parse_word_list(dfa: &PartialDfa, list: &str) -> Result<Vec<Word>, Error> {
    list.split(',').map(|w| dfa.parse_word(w)).collect()
}

fn build(ctx: &Ctx, cmd: BuildCmd) -> Result<Out, Error> {
    match cmd {
        BuildCmd::Fixing { file } => Ok(dfa_out(&fixing(&ctx.dfa(&file)?), &[])),
        BuildCmd::Collecting { file } => {
            let dfa = ctx.dfa(&file)?;
            let red = crate::synchronization::reduction_to_complete(&dfa)?;
            let tree = collecting_tree(&dfa, &red.classes, red.tree.root_class)?;
            let coll = collecting(&dfa, &red.classes, &tree)?;
            let mut comments = vec![format!("root class {}", red.classes.members(tree.root_class))];
            for (c, a, p) in tree.edges() {
                comments.push(format!(
                    "tree {} -{}-> {}",
                    red.classes.members(c),
                    dfa.alphabet()[a],
                    red.classes.members(p)
                ));
            }
            Ok(dfa_out(&coll, &comments))
        }
        BuildCmd::Duplicating { file } => Ok(dfa_out(&duplicating(&ctx.dfa(&file)?)?, &[])),
        BuildCmd::Induced { file, w1, w2 } => {
            let dfa = ctx.dfa(&file)?;
            let ind = induced(&dfa, &parse_word_list(&dfa, &w1)?, &parse_word_list(&dfa, &w2)?)?;
            let comments: Vec<String> =
                ind.states().iter().enumerate().map(|(i, q)| format!("state {i} = base state {q}")).collect();
            Ok(dfa_out(ind.dfa(), &comments))
        }
    }
}

fn sync(ctx: &Ctx, cmd: SyncCmd) -> Result<Out, Error> {
    match cmd {
        SyncCmd::Check { file } => {
            let dfa = ctx.dfa(&file)?;
            if is_synchronizing(&dfa)? {
                Ok(Out::new(EXIT_OK).line("synchronizing").kv("synchronizing", true).kv("min_rank", 1))
            } else {
                let r = greedy_min_rank(&dfa)?.final_rank;
                Ok(Out::new(EXIT_NEGATIVE)
                    .line(format!("not synchronizing: minimal non-zero rank {r}"))
                    .kv("synchronizing", false)
                    .kv("min_rank", r))
            }
        }
        SyncCmd::Word { file, method } => {
            let dfa = ctx.dfa(&file)?;
            let word = match method {
                SyncMethod::Greedy => greedy_min_rank(&dfa)?.word,
                SyncMethod::Fixing => min_rank_word_via_fixing(&dfa)?.word,
                SyncMethod::Collecting => reset_word_via_collecting(&dfa)?.word,
                SyncMethod::Oracle => {
                    if !dfa.is_strongly_connected() {
                        return Err(Error::NotStronglyConnected);
                    }
                    let report = subset_bfs(&dfa)?;
                    match report.witness(1) {
                        Some(w) => w.clone(),
                        None => {
                            let r = report.min_nonzero_rank().unwrap_or(0);
                            return Err(Error::RankUnreachable { target: 1, min_rank: r });
                        }
                    }
                }
            };
            let code = if dfa.rank(&word) == 1 { EXIT_OK } else { EXIT_NEGATIVE };
            Ok(Out::word(code, &dfa, &word))
        }
    }
}

fn rank(ctx: &Ctx, cmd: RankCmd) -> Result<Out, Error> {
    match cmd {
        RankCmd::Min { file } => {
            let dfa = ctx.dfa(&file)?;
            let res = greedy_min_rank(&dfa)?;
            Ok(Out::word(EXIT_OK, &dfa, &res.word))
        }
        RankCmd::Word { file, target, method } => {
            let dfa = ctx.dfa(&file)?;
            let mode = match method {
                RankMethod::Greedy => RankMode::Greedy,
                RankMethod::Oracle => RankMode::Oracle,
            };
            let w = rank_target_word(&dfa, target, mode)?;
            Ok(Out::word(EXIT_OK, &dfa, &w))
        }
    }
}

fn literal_comments(lit: &LiteralAutomaton) -> Vec<String> {
    let mut comments = vec![format!("root 0, height {}", lit.height())];
    for q in 0..lit.num_states() {
        let p = lit.code().render(lit.prefix(q));
        comments.push(format!("state {q} = {}", if p.is_empty() { "ε".to_string() } else { p }));
    }
    comments
}

fn code(ctx: &Ctx, cmd: CodeCmd) -> Result<Out, Error> {
    match cmd {
        CodeCmd::Validate { file } => {
            let words = parse_code_lines(&ctx.read(&file)?)?;
            match validate_code(&words) {
                Ok(code) => {
                    let lit = literal_automaton(&code);
                    Ok(Out::new(EXIT_OK)
                        .line(format!(
                            "valid: {} codewords, height {}, {} states",
                            code.len(),
                            lit.height(),
                            lit.num_states()
                        ))
                        .kv("valid", true)
                        .kv("words", code.len())
                        .kv("height", lit.height())
                        .kv("states", lit.num_states()))
                }
                Err(Error::InvalidCode(msg)) => {
                    Ok(Out::new(EXIT_NEGATIVE).line(format!("invalid: {msg}")).kv("valid", false).kv("reason", msg))
                }
                Err(e) => Err(e),
            }
        }
        CodeCmd::Literal { file } => {
            let lit = literal_automaton(&ctx.code(&file)?);
            Ok(dfa_out(lit.dfa(), &literal_comments(&lit)).kv("height", lit.height()))
        }
        CodeCmd::Logrank { file } => {
            let lit = literal_automaton(&ctx.code(&file)?);
            let res = log_rank_word(&lit)?;
            let bound = log_rank_bound(&lit);
            Ok(Out::word(EXIT_OK, lit.dfa(), &res.word)
                .line(format!("bound={bound} height={}", lit.height()))
                .kv("bound", bound)
                .kv("height", lit.height()))
        }
        CodeCmd::Reset { file } => {
            let lit = literal_automaton(&ctx.code(&file)?);
            let w = literal_reset_word(&lit)?;
            Ok(Out::word(EXIT_OK, lit.dfa(), &w))
        }
        CodeCmd::Oneword { word } => {
            let code = validate_code(&[word.as_str()])?;
            let lit = literal_automaton(&code);
            let x = &code.words()[0];
            let (y, k) = primitive_root(x);
            let mut out = Out::new(EXIT_OK)
                .line(format!("root={} k={k}", code.render(&y)))
                .line(format!("rank={k}"))
                .kv("root", code.render(&y))
                .kv("k", k)
                .kv("rank", k);
            if k == 1 {
                let (u, v) = weinbaum_conjugate(x, &lit)?;
                let reset = if u.len() <= v.len() { u.clone() } else { v.clone() };
                out = out
                    .line(format!("conjugate={} | {}", code.render(&u), code.render(&v)))
                    .line(format!("reset={} len={}", code.render(&reset), reset.len()))
                    .kv("conjugate", format!("{}|{}", code.render(&u), code.render(&v)))
                    .kv("reset", code.render(&reset))
                    .kv("len", reset.len());
            }
            Ok(out)
        }
    }
}

fn oracle(dfa: &PartialDfa) -> Result<Out, Error> {
    let report = subset_bfs(dfa)?;
    let mut out = Out::new(EXIT_OK);
    for (r, e) in report.entries() {
        let w = dfa.render_word(&e.word);
        out = out.line(format!("r={r} len={} word={w}", e.len)).kv(&format!("rt.{r}"), e.len);
    }
    Ok(out)
}

fn verify(ctx: &Ctx, cmd: VerifyCmd) -> Result<Out, Error> {
    match cmd {
        VerifyCmd::Duplicating { file } => {
            let report = duplicating_identity_check(&ctx.dfa(&file)?)?;
            let mut out = Out::new(if report.holds() { EXIT_OK } else { EXIT_NEGATIVE });
            for row in &report.rows {
                let dup = row.duplicated.map_or("none".to_string(), |d| d.to_string());
                let status = if row.holds() { "ok" } else { "MISMATCH" };
                out = out
                    .line(format!("r={} base={} duplicated={dup} {status}", row.rank, row.base))
                    .kv(&format!("rt.{}", row.rank), format!("{}/{dup}", row.base));
            }
            Ok(out.line(format!("holds={}", report.holds())).kv("holds", report.holds()))
        }
        VerifyCmd::All { size_cap } => {
            let results = run_all(size_cap);
            let passed = results.iter().all(|r| r.passed);
            let mut out = Out::new(if passed { EXIT_OK } else { EXIT_NEGATIVE });
            for r in &results {
                let status = if r.passed { "PASS" } else { "FAIL" };
                out = out.line(format!("{status} {}: {}", r.name, r.detail)).kv(r.name, status);
            }
            Ok(out)
        }
    }
}

fn extremal(args: ExtremalArgs) -> Result<Out, Error> {
    let profile = match (args.exhaustive, args.seed, args.trials) {
        (_, Some(seed), Some(trials)) => SearchProfile::Random { seed, trials },
        _ => SearchProfile::Exhaustive,
    };
    let report = extremal_search(args.n, profile)?;
    let best = report.best_rt.map_or("none".to_string(), |b| b.to_string());
    let mut out = Out::new(EXIT_OK)
        .line(format!(
            "n={} target={} best_rt={best} attained={} examined={} synchronizing={}",
            report.n,
            report.target,
            report.attained(),
            report.examined,
            report.synchronizing
        ))
        .kv("n", report.n)
        .kv("target", report.target)
        .kv("best_rt", &best)
        .kv("attained", report.attained())
        .kv("examined", report.examined)
        .kv("synchronizing", report.synchronizing);
    if let Some(dfa) = &report.best {
        out = out.line(write_dfa(dfa).trim_end());
    }
    Ok(out)
}

fn gen(cmd: GenCmd) -> Result<Out, Error> {
    let code_out = |code: PrefixCode| {
        Out::new(EXIT_OK)
            .line(code.to_text().trim_end())
            .kv("words", code.len())
            .kv("total_length", code.total_length())
    };
    Ok(match cmd {
        GenCmd::Cerny { n } => dfa_out(&gen_cerny(n)?, &[]),
        GenCmd::Oneword { k } => code_out(gen_oneword_code(k)?),
        GenCmd::RandomDfa { n, alpha, density, seed } => dfa_out(
            &gen_random_partial(n, alpha, density, seed)?,
            &[format!("random-dfa n={n} alpha={alpha} density={density} seed={seed}")],
        ),
        GenCmd::RandomCode { count, maxlen, alpha, seed } => {
            code_out(gen_random_prefix_code(count, maxlen, alpha, seed)?)
        }
    })
}
