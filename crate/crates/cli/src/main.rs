use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use lambridge::acg::tree_to_abstract_term;
use lambridge::axioms::level_with;
use lambridge::compare::WordDiff;
use lambridge::{
    cfg_to_acg, compare, to_cfg, AxiomSet, Budget, Cfg, CompareOptions, Grammar, LevelOptions, ParseTree, Prover,
    SearchError, Symbol,
};
use serde_json::json;

const MAX_LEN_CAP: usize = 8;
const TREE_CAP: usize = 100;

#[derive(Parser)]
#[command(
    name = "lambridge",
    version,
    about = "Lambek grammars to context-free and abstract categorial grammars"
)]
struct Cli {
    #[command(flatten)]
    opts: Opts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Opts {
    /// Leveling rounds.
    #[arg(long, short = 'n', global = true, default_value_t = 3, env = "LAMBRIDGE_ITERATIONS")]
    iterations: usize,
    /// Longest word enumerated by `compare`.
    #[arg(long, global = true, default_value_t = 5, env = "LAMBRIDGE_MAX_LEN")]
    max_len: usize,
    /// Keep axioms the accessibility filter would drop.
    #[arg(long, global = true, env = "LAMBRIDGE_NO_FILTER")]
    no_filter: bool,
    /// Machine-readable output.
    #[arg(long, global = true, env = "LAMBRIDGE_JSON")]
    json: bool,
    #[arg(long, global = true, env = "LAMBRIDGE_BUDGET_DEPTH")]
    budget_depth: Option<usize>,
    #[arg(long, global = true, env = "LAMBRIDGE_BUDGET_NODES")]
    budget_nodes: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Decide a sentence with the natural-deduction prover.
    Check { grammar: PathBuf, sentence: String },
    /// Print the proper axioms after the given number of rounds.
    Level {
        grammar: PathBuf,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Print the extracted context-free grammar as BNF.
    ExportCfg {
        grammar: PathBuf,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Print the abstract categorial grammar built from the CFG.
    ExportAcg {
        grammar: PathBuf,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Parse a sentence with the extracted CFG, or with a BNF file.
    ParseCfg {
        grammar: PathBuf,
        sentence: String,
        /// Use this BNF file instead of extracting the CFG.
        #[arg(long)]
        cfg: Option<PathBuf>,
    },
    /// Compare the prover and the CFG on every short word.
    Compare { grammar: PathBuf },
    /// Nesting depth of the first derivation's term.
    Nesting { grammar: PathBuf, sentence: String },
}

impl Opts {
    fn budget(&self) -> Budget {
        let d = Budget::default();
        Budget {
            max_depth: self.budget_depth.unwrap_or(d.max_depth),
            max_nodes: self.budget_nodes.unwrap_or(d.max_nodes),
        }
    }

    fn level(&self) -> LevelOptions {
        LevelOptions {
            iterations: self.iterations,
            filter: !self.no_filter,
        }
    }
}

fn load(path: &Path) -> Result<Grammar> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    text.parse().with_context(|| format!("parsing {}", path.display()))
}

fn emit(text: &str, output: Option<&Path>) -> Result<()> {
    match output {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn pretty(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).expect("json") + "\n"
}

fn axioms(g: &Grammar, opts: &Opts) -> Result<AxiomSet> {
    let mut prover = Prover::with_budget(g, opts.budget());
    Ok(level_with(g, opts.level(), &mut prover)?)
}

/// Tokens of the sentence, or the exit code for an unknown token.
fn tokens(g: &Grammar, sentence: &str, opts: &Opts) -> Result<Vec<String>, ExitCode> {
    let toks = Grammar::tokenize(sentence);
    if let Some(t) = g.unknown_token(&toks) {
        if opts.json {
            print!("{}", pretty(&json!({ "status": "unknown-token", "token": t })));
        } else {
            println!("unknown token: {t}");
        }
        return Err(ExitCode::from(3));
    }
    if toks.is_empty() {
        println!("empty sentence");
        return Err(ExitCode::from(3));
    }
    Ok(toks)
}

fn budget_exhausted(e: &SearchError, opts: &Opts) -> ExitCode {
    if opts.json {
        print!(
            "{}",
            pretty(&json!({ "status": "budget-exhausted", "error": e.to_string() }))
        );
    } else {
        println!("{e}");
    }
    ExitCode::from(2)
}

fn check(path: &Path, sentence: &str, opts: &Opts) -> Result<ExitCode> {
    let g = load(path)?;
    let toks = match tokens(&g, sentence, opts) {
        Ok(t) => t,
        Err(code) => return Ok(code),
    };
    let found = match Prover::with_budget(&g, opts.budget()).prove_ie_first(&toks) {
        Ok(d) => d,
        Err(e) => return Ok(budget_exhausted(&e, opts)),
    };
    match found {
        Some(d) => {
            if opts.json {
                print!(
                    "{}",
                    pretty(&json!({
                        "status": "derivable",
                        "term": d.term().to_string(),
                        "derivation": d.to_sexpr(),
                    }))
                );
            } else {
                println!("derivable");
                println!("term: {}", d.term());
                println!("{}", d.to_sexpr());
            }
            Ok(ExitCode::SUCCESS)
        }
        None => {
            if opts.json {
                print!("{}", pretty(&json!({ "status": "not-derivable" })));
            } else {
                println!("not derivable");
            }
            Ok(ExitCode::from(1))
        }
    }
}

fn level_cmd(path: &Path, output: Option<&Path>, opts: &Opts) -> Result<()> {
    let g = load(path)?;
    let set = axioms(&g, opts)?;
    let previous = match opts.iterations {
        0 => None,
        n => {
            let mut p = Prover::with_budget(&g, opts.budget());
            let o = LevelOptions {
                iterations: n - 1,
                ..opts.level()
            };
            Some(level_with(&g, o, &mut p)?)
        }
    };
    let grows = previous.as_ref().map(|p| p.is_subset(&set));
    let text = if opts.json {
        pretty(&json!({
            "iterations": opts.iterations,
            "filter": !opts.no_filter,
            "generation_counts": set.generation_counts(),
            "superset_of_previous": grows,
            "axioms": set.iter().collect::<Vec<_>>(),
        }))
    } else {
        let mut out = format!("# {} axioms after {} rounds\n", set.len(), opts.iterations);
        for (i, c) in set.generation_counts().iter().enumerate() {
            out.push_str(&format!("# generation {i}: {c}\n"));
        }
        if let (Some(grows), Some(p)) = (grows, &previous) {
            let verdict = if grows { "superset of" } else { "NOT a superset of" };
            out.push_str(&format!(
                "# {verdict} the {} axioms of round {}\n",
                p.len(),
                opts.iterations - 1
            ));
        }
        out + &set.to_text()
    };
    emit(&text, output)
}

fn export_cfg(path: &Path, output: Option<&Path>, opts: &Opts) -> Result<()> {
    let g = load(path)?;
    let cfg = to_cfg(&axioms(&g, opts)?, &g);
    let text = if opts.json {
        pretty(&serde_json::to_value(&cfg)?)
    } else {
        cfg.to_bnf()
    };
    emit(&text, output)
}

fn export_acg(path: &Path, output: Option<&Path>, opts: &Opts) -> Result<()> {
    let g = load(path)?;
    let cfg = to_cfg(&axioms(&g, opts)?, &g);
    let acg = cfg_to_acg(&cfg);
    if let Err(e) = acg.validate() {
        bail!("generated lexicon is ill-typed: {e}");
    }
    let text = if opts.json {
        pretty(&serde_json::to_value(&acg)?)
    } else {
        acg.to_text()
    };
    emit(&text, output)
}

fn bracketed(cfg: &Cfg, tree: &ParseTree) -> String {
    let p = &cfg.productions[tree.production];
    let mut out = format!("[{}", p.lhs);
    let mut kids = tree.children.iter();
    for s in &p.rhs {
        out.push(' ');
        match s {
            Symbol::Terminal(t) => out.push_str(t),
            Symbol::Nonterminal(_) => out.push_str(&bracketed(cfg, kids.next().expect("child per nonterminal"))),
        }
    }
    out.push(']');
    out
}

fn parse_cfg(path: &Path, sentence: &str, bnf: Option<&Path>, opts: &Opts) -> Result<ExitCode> {
    let g = load(path)?;
    let toks = match tokens(&g, sentence, opts) {
        Ok(t) => t,
        Err(code) => return Ok(code),
    };
    let cfg = match bnf {
        Some(p) => {
            let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            Cfg::from_bnf(&text).with_context(|| format!("parsing {}", p.display()))?
        }
        None => to_cfg(&axioms(&g, opts)?, &g),
    };
    let trees = cfg.parse(&toks, TREE_CAP);
    let acg = bnf.is_none().then(|| cfg_to_acg(&cfg));
    let rows: Vec<(String, Option<String>)> = trees
        .iter()
        .map(|t| {
            (
                bracketed(&cfg, t),
                acg.as_ref().map(|_| tree_to_abstract_term(&cfg, t).to_string()),
            )
        })
        .collect();
    if opts.json {
        let trees: Vec<_> = rows
            .iter()
            .map(|(b, a)| json!({ "tree": b, "abstract_term": a }))
            .collect();
        print!("{}", pretty(&json!({ "accepted": !trees.is_empty(), "trees": trees })));
    } else if rows.is_empty() {
        println!("not in the language");
    } else {
        println!("{} parse tree(s)", rows.len());
        for (b, a) in &rows {
            println!("{b}");
            if let Some(a) = a {
                println!("  {a}");
            }
        }
    }
    Ok(if rows.is_empty() {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    })
}

fn diff_lines(title: &str, diffs: &[WordDiff]) -> String {
    let mut out = format!("{title}: {}\n", diffs.len());
    for d in diffs {
        let side = if d.derivable {
            "derivable, not in CFG"
        } else {
            "in CFG, not derivable"
        };
        out.push_str(&format!("  {}  ({side})\n", d.word.join(" ")));
    }
    out
}

fn compare_cmd(path: &Path, opts: &Opts) -> Result<ExitCode> {
    if opts.max_len > MAX_LEN_CAP {
        bail!("--max-len is capped at {MAX_LEN_CAP}");
    }
    let g = load(path)?;
    let options = CompareOptions {
        level: opts.level(),
        max_len: opts.max_len,
        budget: opts.budget(),
    };
    let report = match compare(&g, options) {
        Ok(r) => r,
        Err(e) => return Ok(budget_exhausted(&e, opts)),
    };
    if opts.json {
        print!("{}", pretty(&serde_json::to_value(&report)?));
    } else {
        println!(
            "{} words up to length {}, {} in the CFG ({} axioms, {} productions, {} rounds)",
            report.words, report.max_len, report.accepted_by_cfg, report.axioms, report.productions, report.iterations
        );
        print!("{}", diff_lines("derivable vs CFG", &report.full));
        print!(
            "{}",
            diff_lines(&format!("nesting <= {} vs CFG", report.iterations), &report.bounded)
        );
    }
    Ok(if report.agrees() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn nesting(path: &Path, sentence: &str, opts: &Opts) -> Result<ExitCode> {
    let g = load(path)?;
    let toks = match tokens(&g, sentence, opts) {
        Ok(t) => t,
        Err(code) => return Ok(code),
    };
    let d = match Prover::with_budget(&g, opts.budget()).prove_ie_first(&toks) {
        Ok(Some(d)) => d,
        Ok(None) => {
            println!("not derivable");
            return Ok(ExitCode::from(1));
        }
        Err(e) => return Ok(budget_exhausted(&e, opts)),
    };
    let n = d.term().nesting_depth()?;
    if opts.json {
        print!("{}", pretty(&json!({ "term": d.term().to_string(), "nesting": n })));
    } else {
        println!("{n}\t{}", d.term());
    }
    Ok(ExitCode::SUCCESS)
}

fn run(cli: Cli) -> Result<ExitCode> {
    let opts = &cli.opts;
    match &cli.command {
        Command::Check { grammar, sentence } => check(grammar, sentence, opts),
        Command::Level { grammar, output } => level_cmd(grammar, output.as_deref(), opts).map(|_| ExitCode::SUCCESS),
        Command::ExportCfg { grammar, output } => {
            export_cfg(grammar, output.as_deref(), opts).map(|_| ExitCode::SUCCESS)
        }
        Command::ExportAcg { grammar, output } => {
            export_acg(grammar, output.as_deref(), opts).map(|_| ExitCode::SUCCESS)
        }
        Command::ParseCfg { grammar, sentence, cfg } => parse_cfg(grammar, sentence, cfg.as_deref(), opts),
        Command::Compare { grammar } => compare_cmd(grammar, opts),
        Command::Nesting { grammar, sentence } => nesting(grammar, sentence, opts),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(4)
        }
    }
}
