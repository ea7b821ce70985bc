//! The `boundsearch` command line.
//!
//! Exit status is 0 on success, 1 for domain errors (invalid corpus, bad
//! pattern, unknown facet, server failure) and 2 for usage errors
//! (bad flags, unreadable corpus path).

use crate::corpus::{validate_corpus, Corpus, SearchField};
use crate::index::{build_index, FacetSelection};
use crate::regex::{MatchSpan, ScanTrace};
use crate::search::{
    build_field_pattern, execute_search, hit_records, Anchoring, SearchError, SearchMode,
    SearchQuery, DEFAULT_LIMIT,
};
use crate::service::{start_service, ServiceConfig, CORPUS_ENV};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use std::ffi::OsString;
use std::fs::File;
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Width of the clipped snippet in human search output.
const HUMAN_SNIPPET_WIDTH: usize = 60;

#[derive(Debug, Parser)]
#[command(name = "boundsearch", version, about = "Faceted regex search over listing corpora")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Human)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Records,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a corpus file and report every problem found.
    Validate { corpus: PathBuf },
    /// Run a search against a corpus file.
    Search(SearchArgs),
    /// Show the automaton's state sets while scanning an input.
    Trace(TraceArgs),
    /// Serve the HTTP API.
    Serve(ServeArgs),
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    pub corpus: PathBuf,
    /// Boundary as name=value; repeat for several facets.
    #[arg(long = "facet", value_name = "NAME=VALUE")]
    pub facets: Vec<String>,
    #[arg(long, default_value = "")]
    pub pattern: String,
    #[arg(long, value_parser = parse_mode, default_value = "literal")]
    pub mode: SearchMode,
    #[arg(long)]
    pub case_sensitive: bool,
    /// Comma-separated field names, searched in order.
    #[arg(long)]
    pub fields: Option<String>,
    #[arg(long, default_value_t = DEFAULT_LIMIT)]
    pub limit: usize,
    #[arg(long, default_value_t = 0)]
    pub offset: usize,
}

#[derive(Debug, Args)]
pub struct TraceArgs {
    #[arg(long)]
    pub pattern: String,
    #[arg(long)]
    pub input: String,
    #[arg(long, value_parser = parse_mode, default_value = "literal")]
    pub mode: SearchMode,
}

#[derive(Debug, Args)]
pub struct ServeArgs {
    /// Corpus file; `BOUNDSEARCH_CORPUS` overrides it.
    #[arg(long)]
    pub corpus: Option<PathBuf>,
    #[arg(long, default_value = "127.0.0.1:8080")]
    pub bind: String,
    #[arg(long)]
    pub allow_reload: bool,
}

fn parse_mode(s: &str) -> Result<SearchMode, String> {
    s.parse()
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(rendered.as_bytes())
            } else {
                out.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    let result = match cli.command {
        Command::Validate { corpus } => cmd_validate(&corpus, cli.format, out, err),
        Command::Search(args) => cmd_search(&args, cli.format, out, err),
        Command::Trace(args) => cmd_trace(&args, cli.format, out, err),
        Command::Serve(args) => cmd_serve(&args, out, err),
    };
    result.unwrap_or_else(|e| {
        let _ = writeln!(err, "error: cannot write output: {e}");
        EXIT_DOMAIN
    })
}

type CmdResult = std::io::Result<i32>;

fn open_corpus(path: &Path, err: &mut dyn Write) -> std::io::Result<Result<File, i32>> {
    match File::open(path) {
        Ok(f) => Ok(Ok(f)),
        Err(e) => {
            writeln!(err, "error: cannot open corpus {}: {e}", path.display())?;
            writeln!(err, "usage: boundsearch <COMMAND> <CORPUS> ...")?;
            Ok(Err(EXIT_USAGE))
        }
    }
}

pub fn cmd_validate(path: &Path, format: Format, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    let file = match open_corpus(path, err)? {
        Ok(f) => f,
        Err(code) => return Ok(code),
    };
    match validate_corpus(BufReader::new(file)) {
        Ok(corpus) => {
            match format {
                Format::Human => {
                    writeln!(out, "{} listings, schema OK", corpus.len())?;
                    for (facet, values) in corpus.schema().iter() {
                        writeln!(out, "  {facet}: {}", values.join(", "))?;
                    }
                }
                Format::Records => {
                    let line = json!({ "listings": corpus.len(), "schema": corpus.schema() });
                    writeln!(out, "{line}")?;
                }
            }
            Ok(EXIT_OK)
        }
        Err(errors) => {
            for e in &errors {
                match format {
                    Format::Human => writeln!(err, "{}: {e}", path.display())?,
                    Format::Records => {
                        writeln!(out, "{}", json!({ "line": e.line(), "error": e.to_string() }))?
                    }
                }
            }
            if format == Format::Human {
                writeln!(err, "{} error(s)", errors.len())?;
            }
            Ok(EXIT_DOMAIN)
        }
    }
}

fn load_for_command(path: &Path, err: &mut dyn Write) -> std::io::Result<Result<Corpus, i32>> {
    let file = match open_corpus(path, err)? {
        Ok(f) => f,
        Err(code) => return Ok(Err(code)),
    };
    match validate_corpus(BufReader::new(file)) {
        Ok(c) => Ok(Ok(c)),
        Err(errors) => {
            for e in errors {
                writeln!(err, "{}: {e}", path.display())?;
            }
            Ok(Err(EXIT_DOMAIN))
        }
    }
}

fn report_search_error(e: &SearchError, err: &mut dyn Write) -> CmdResult {
    let offset = match e {
        SearchError::PatternSyntax(p) => format!(" (offset {})", p.offset()),
        _ => String::new(),
    };
    writeln!(err, "error [{}]: {e}{offset}", e.code())?;
    Ok(EXIT_DOMAIN)
}

/// Builds the query the search flags describe.
pub fn query_from_args(args: &SearchArgs) -> Result<SearchQuery, String> {
    let mut boundaries = FacetSelection::new();
    for spec in &args.facets {
        let (name, value) = spec
            .split_once('=')
            .ok_or_else(|| format!("--facet expects NAME=VALUE, got {spec:?}"))?;
        if boundaries.insert(name, value).is_some() {
            return Err(format!("facet {name} given more than once"));
        }
    }
    let fields = match &args.fields {
        None => SearchField::ALL.to_vec(),
        Some(csv) => csv
            .split(',')
            .map(|f| SearchField::from_name(f.trim()).map_err(|e| e.to_string()))
            .collect::<Result<_, _>>()?,
    };
    if args.limit == 0 {
        return Err("--limit must be at least 1".into());
    }
    Ok(SearchQuery {
        boundaries,
        pattern_text: args.pattern.clone(),
        mode: args.mode,
        case_sensitive: args.case_sensitive,
        fields,
        limit: args.limit,
        offset: args.offset,
    })
}

pub fn cmd_search(args: &SearchArgs, format: Format, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    let query = match query_from_args(args) {
        Ok(q) => q,
        Err(msg) => {
            writeln!(err, "error: {msg}")?;
            return Ok(EXIT_USAGE);
        }
    };
    let corpus = match load_for_command(&args.corpus, err)? {
        Ok(c) => c,
        Err(code) => return Ok(code),
    };
    let index = build_index(&corpus);
    let page = match execute_search(&corpus, &index, &query) {
        Ok(p) => p,
        Err(e) => return report_search_error(&e, err),
    };
    match format {
        Format::Records => {
            let records = match hit_records(&corpus, &page) {
                Ok(r) => r,
                Err(e) => return report_search_error(&e, err),
            };
            for r in records {
                writeln!(out, "{}", serde_json::to_string(&r).expect("serializable hit"))?;
            }
        }
        Format::Human => {
            let shown = page.hits.len();
            if shown == 0 {
                writeln!(out, "{} hits", page.total)?;
            } else {
                writeln!(
                    out,
                    "{} hits, showing {}-{}",
                    page.total,
                    query.offset + 1,
                    query.offset + shown
                )?;
            }
            for (i, hit) in page.hits.iter().enumerate() {
                let listing = &corpus.listings()[hit.corpus_position];
                let text = listing.text(hit.matched_field);
                writeln!(
                    out,
                    "{:>3}. {}  {}  [{}]  {}",
                    query.offset + i + 1,
                    hit.id,
                    listing.title,
                    hit.matched_field,
                    bracketed_snippet(text, hit.span, HUMAN_SNIPPET_WIDTH)
                )?;
            }
        }
    }
    Ok(EXIT_OK)
}

/// Renders `text` around `span` within roughly `width` characters, with
/// the match in brackets and `…` marking clipped ends. The match itself is
/// never cut.
pub fn bracketed_snippet(text: &str, span: MatchSpan, width: usize) -> String {
    let chars: Vec<char> = text.chars().collect();
    let len = chars.len();
    let budget = width.saturating_sub(span.len());
    let after_room = len - span.end;
    let mut before = (budget / 2).min(span.start);
    let after = (budget - before).min(after_room);
    // Hand context unused after the match back to the left side.
    before = (budget - after).min(span.start);
    let from = span.start - before;
    let to = span.end + after;

    let mut s = String::new();
    if from > 0 {
        s.push('…');
    }
    s.extend(&chars[from..span.start]);
    s.push('[');
    s.extend(&chars[span.start..span.end]);
    s.push(']');
    s.extend(&chars[span.end..to]);
    if to < len {
        s.push('…');
    }
    s
}

pub fn cmd_trace(args: &TraceArgs, format: Format, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    // Trace is case-exact: it shows the automaton as written.
    let query = SearchQuery {
        pattern_text: args.pattern.clone(),
        mode: args.mode,
        case_sensitive: true,
        ..SearchQuery::default()
    };
    let pattern = match build_field_pattern(&query) {
        Ok(p) => p,
        Err(e) => return report_search_error(&e, err),
    };
    let compiled = pattern.compile();
    let nfa = compiled.nfa();
    let trace = match pattern.anchoring {
        Anchoring::Substring => nfa.trace_scan(&args.input),
        Anchoring::Whole => nfa.trace_full(&args.input),
    };
    match format {
        Format::Human => write_trace_human(&args.pattern, &args.input, nfa, &trace, out)?,
        Format::Records => write_trace_records(&trace, out)?,
    }
    Ok(EXIT_OK)
}

fn state_set(states: &[usize]) -> String {
    let inner: Vec<String> = states.iter().map(usize::to_string).collect();
    format!("{{{}}}", inner.join(","))
}

fn write_trace_human(
    pattern: &str,
    input: &str,
    nfa: &crate::regex::Nfa,
    trace: &ScanTrace,
    out: &mut dyn Write,
) -> std::io::Result<()> {
    writeln!(
        out,
        "pattern {pattern:?}: {} states, start {}, accept {}",
        nfa.state_count(),
        nfa.start(),
        nfa.accept()
    )?;
    writeln!(out, "input {input:?}")?;
    for attempt in &trace.attempts {
        writeln!(out, "start {}: {}", attempt.start, state_set(&attempt.initial))?;
        for step in &attempt.steps {
            let mark = if step.accepting { "  accepting" } else { "" };
            writeln!(
                out,
                "  read {:?} at {} -> {}{mark}",
                step.symbol,
                step.offset,
                state_set(&step.active)
            )?;
        }
        match attempt.accepted_end {
            Some(end) => writeln!(out, "  accepted [{}, {})", attempt.start, end)?,
            None => writeln!(out, "  non-acceptance")?,
        }
    }
    match trace.result {
        Some(span) => {
            let text: String = input.chars().skip(span.start).take(span.len()).collect();
            writeln!(out, "match [{}, {}) {text:?}", span.start, span.end)
        }
        None => writeln!(out, "no match"),
    }
}

fn write_trace_records(trace: &ScanTrace, out: &mut dyn Write) -> std::io::Result<()> {
    for attempt in &trace.attempts {
        let steps: Vec<_> = attempt
            .steps
            .iter()
            .map(|s| {
                json!({
                    "offset": s.offset,
                    "symbol": s.symbol.to_string(),
                    "active": s.active,
                    "accepting": s.accepting,
                })
            })
            .collect();
        let line = json!({
            "start": attempt.start,
            "initial": attempt.initial,
            "steps": steps,
            "accepted_end": attempt.accepted_end,
        });
        writeln!(out, "{line}")?;
    }
    let result = trace.result.map(|s| json!({ "start": s.start, "end": s.end }));
    writeln!(out, "{}", json!({ "result": result }))
}

pub fn cmd_serve(args: &ServeArgs, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    let corpus_path = match (&args.corpus, std::env::var_os(CORPUS_ENV)) {
        (_, Some(env)) => PathBuf::from(env),
        (Some(path), None) => path.clone(),
        (None, None) => {
            writeln!(err, "error: no corpus given; pass --corpus or set {CORPUS_ENV}")?;
            return Ok(EXIT_USAGE);
        }
    };
    let config = ServiceConfig {
        corpus_path,
        bind_address: args.bind.clone(),
        allow_reload: args.allow_reload,
        ..ServiceConfig::new("")
    };
    let runtime = match tokio::runtime::Runtime::new() {
        Ok(rt) => rt,
        Err(e) => {
            writeln!(err, "error: cannot start runtime: {e}")?;
            return Ok(EXIT_DOMAIN);
        }
    };
    runtime.block_on(async {
        let handle = match start_service(config).await {
            Ok(h) => h,
            Err(e) => {
                writeln!(err, "error: {e}")?;
                return Ok(EXIT_DOMAIN);
            }
        };
        writeln!(out, "listening on http://{}", handle.local_addr())?;
        out.flush()?;
        let _ = tokio::signal::ctrl_c().await;
        match handle.shutdown().await {
            Ok(()) => Ok(EXIT_OK),
            Err(e) => {
                writeln!(err, "error: server failed: {e}")?;
                Ok(EXIT_DOMAIN)
            }
        }
    })
}
