//! Command-line front end. `run` is what the binary calls; `run_with` takes
//! explicit output sinks so the commands can be exercised in tests.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::calculus::{check, check_with, CheckError, CheckOptions, Mode};
use crate::elaborator::{expand_derived, translate, ElabError, Expand};
use crate::normalizer::{audit, find_maximal, kind_of, normalize_with, rank_of, NormalizeError, NormalizeOptions};
use crate::parser::{parse_proof, serialize_script, NamedProof, ProofScript};
use crate::proof::path_string;

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 1;
pub const EXIT_CHECK: i32 = 2;
pub const EXIT_STEPS: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "iota-nd", version, about = "Check, normalize and elaborate natural deduction proofs with definite descriptions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Logic {
    I,
    Inf,
    InfPrime,
}

impl From<Logic> for Mode {
    fn from(l: Logic) -> Mode {
        match l {
            Logic::I => Mode::I,
            Logic::Inf => Mode::Inf,
            Logic::InfPrime => Mode::InfPrime,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ExpandArg {
    Efq,
    #[value(name = "eqE")]
    EqE,
}

#[derive(Args, Debug)]
struct LogicArg {
    /// Proof system to check against
    #[arg(long, value_enum)]
    logic: Logic,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check every proof in the given files
    Check {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[command(flatten)]
        logic: LogicArg,
    },
    /// Normalize every proof in a file
    Normalize {
        file: PathBuf,
        #[command(flatten)]
        logic: LogicArg,
        /// Write the reduction trace here
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Write the normalized script here instead of standard output
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 1_000_000)]
        max_steps: usize,
        /// Remove IotaI/IotaE2A detours through the identity of the two instances
        #[arg(long)]
        iota2a_via_identity: bool,
    },
    /// Translate between inf and inf-prime, or expand derived rules
    Elaborate {
        file: PathBuf,
        #[arg(long, value_enum, requires = "logic_to", conflicts_with_all = ["logic", "expand"])]
        logic_from: Option<Logic>,
        #[arg(long, value_enum, requires = "logic_from")]
        logic_to: Option<Logic>,
        #[arg(long, value_enum, requires = "expand")]
        logic: Option<Logic>,
        #[arg(long, value_enum, requires = "logic")]
        expand: Option<ExpandArg>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the rank and the maximal segments of every proof
    Rank {
        file: PathBuf,
        #[command(flatten)]
        logic: LogicArg,
    },
    /// Replay a normalization trace
    Audit {
        file: PathBuf,
        #[command(flatten)]
        logic: LogicArg,
        #[arg(long)]
        trace: PathBuf,
    },
}

struct Io<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
    color: bool,
}

impl Io<'_> {
    fn error(&mut self, at: &str, msg: impl std::fmt::Display) {
        let tag = if self.color { "\x1b[31merror\x1b[0m" } else { "error" };
        let _ = writeln!(self.err, "{at}: {tag}: {msg}");
    }

    fn emit(&mut self, dest: &Option<PathBuf>, text: &str) -> i32 {
        match dest {
            Some(p) => match std::fs::write(p, text) {
                Ok(()) => EXIT_OK,
                Err(e) => {
                    self.error(&p.display().to_string(), e);
                    EXIT_PARSE
                }
            },
            None => {
                let _ = self.out.write_all(text.as_bytes());
                EXIT_OK
            }
        }
    }
}

pub fn run() -> i32 {
    let color = std::env::var("IOTA_ND_COLOR").is_ok_and(|v| v == "1");
    let (mut out, mut err) = (std::io::stdout().lock(), std::io::stderr().lock());
    run_with(std::env::args_os(), &mut out, &mut err, color)
}

pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write, color: bool) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let shown = matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion);
            let _ = if shown { write!(out, "{}", e.render()) } else { write!(err, "{}", e.render()) };
            return if shown { EXIT_OK } else { EXIT_PARSE };
        }
    };
    let mut io = Io { out, err, color };
    match cli.command {
        Command::Check { files, logic } => cmd_check(&mut io, &files, logic.logic.into()),
        Command::Normalize { file, logic, trace, out, max_steps, iota2a_via_identity } => {
            let opts = NormalizeOptions { iota2a_via_identity, max_steps };
            cmd_normalize(&mut io, &file, logic.logic.into(), &trace, &out, &opts)
        }
        Command::Elaborate { file, logic_from, logic_to, logic, expand, out } => {
            let job = match (logic_from, logic_to, logic, expand) {
                (Some(a), Some(b), _, _) => Job::Translate(a.into(), b.into()),
                (_, _, Some(m), Some(x)) => {
                    Job::Expand(m.into(), if x == ExpandArg::Efq { Expand::Efq } else { Expand::EqE })
                }
                _ => {
                    io.error("iota-nd", "elaborate needs --logic-from/--logic-to or --logic with --expand");
                    return EXIT_PARSE;
                }
            };
            cmd_elaborate(&mut io, &file, job, &out)
        }
        Command::Rank { file, logic } => cmd_rank(&mut io, &file, logic.logic.into()),
        Command::Audit { file, logic, trace } => cmd_audit(&mut io, &file, logic.logic.into(), &trace),
    }
}

fn load(io: &mut Io, file: &Path) -> Result<ProofScript, i32> {
    let name = file.display().to_string();
    let text = std::fs::read_to_string(file).map_err(|e| {
        io.error(&name, e);
        EXIT_PARSE
    })?;
    parse_proof(&text).map_err(|e| {
        io.error(&format!("{name}:{}:{}", e.line, e.col), &e.message);
        EXIT_PARSE
    })
}

fn line_of(p: &NamedProof, e: &CheckError) -> usize {
    // nearest node with a recorded line, walking towards the root
    let mut path = e.path.clone();
    loop {
        if let Some(l) = p.lines.get(&path) {
            return *l;
        }
        if path.pop().is_none() {
            return 0;
        }
    }
}

fn report(io: &mut Io, file: &Path, p: &NamedProof, errors: &[CheckError]) {
    for e in errors {
        let at = format!("{}:{}", file.display(), line_of(p, e));
        io.error(&at, format!("proof {}: {e}", p.name));
    }
}

/// Checks every proof of the script, reporting failures; true if all pass.
fn check_script(io: &mut Io, file: &Path, s: &ProofScript, mode: Mode, opts: CheckOptions) -> bool {
    let mut ok = true;
    for p in &s.proofs {
        let errors = check_with(&p.deduction, mode, opts);
        if !errors.is_empty() {
            report(io, file, p, &errors);
            ok = false;
        }
    }
    ok
}

fn cmd_check(io: &mut Io, files: &[PathBuf], mode: Mode) -> i32 {
    let mut code = EXIT_OK;
    for f in files {
        match load(io, f) {
            Err(c) => code = code.max(c),
            Ok(s) => {
                if !check_script(io, f, &s, mode, CheckOptions::default()) {
                    code = code.max(EXIT_CHECK);
                }
            }
        }
    }
    code
}

fn cmd_normalize(
    io: &mut Io,
    file: &Path,
    mode: Mode,
    trace: &Option<PathBuf>,
    out: &Option<PathBuf>,
    opts: &NormalizeOptions,
) -> i32 {
    let mut s = match load(io, file) {
        Ok(s) => s,
        Err(c) => return c,
    };
    if !check_script(io, file, &s, mode, CheckOptions::default()) {
        return EXIT_CHECK;
    }
    let mut lines = String::new();
    for p in &mut s.proofs {
        match normalize_with(&p.deduction, opts) {
            Ok((d, steps)) => {
                lines.push_str(&format!("# {}\n", p.name));
                for (i, st) in steps.iter().enumerate() {
                    lines.push_str(&st.line(i + 1));
                    lines.push('\n');
                }
                p.deduction = d;
                p.lines.clear();
            }
            Err(e) => {
                io.error(&format!("{}: proof {}", file.display(), p.name), &e);
                return if matches!(e, NormalizeError::StepLimit(_)) { EXIT_STEPS } else { EXIT_CHECK };
            }
        }
    }
    s.mode = Some(mode);
    if trace.is_some() {
        let c = io.emit(trace, &lines);
        if c != EXIT_OK {
            return c;
        }
    }
    io.emit(out, &serialize_script(&s))
}

enum Job {
    Translate(Mode, Mode),
    Expand(Mode, Expand),
}

fn cmd_elaborate(io: &mut Io, file: &Path, job: Job, out: &Option<PathBuf>) -> i32 {
    let mut s = match load(io, file) {
        Ok(s) => s,
        Err(c) => return c,
    };
    let target = match job {
        Job::Translate(_, to) => to,
        Job::Expand(m, _) => m,
    };
    for p in &mut s.proofs {
        let r = match job {
            Job::Translate(from, to) => translate(&p.deduction, from, to),
            Job::Expand(m, x) => expand_derived(&p.deduction, x, m),
        };
        match r {
            Ok(d) => {
                p.deduction = d;
                p.lines.clear();
            }
            Err(e) => {
                io.error(&format!("{}: proof {}", file.display(), p.name), &e);
                return match e {
                    ElabError::ModeMismatch { .. } | ElabError::NotFreeFor { .. } => EXIT_CHECK,
                    ElabError::BadInput(_) => EXIT_PARSE,
                };
            }
        }
        // the output must be kernel-only and check in the target system
        let errors = check(&p.deduction, target);
        if !errors.is_empty() {
            report(io, file, p, &errors);
            return EXIT_CHECK;
        }
    }
    s.mode = Some(target);
    io.emit(out, &serialize_script(&s))
}

fn cmd_rank(io: &mut Io, file: &Path, mode: Mode) -> i32 {
    let s = match load(io, file) {
        Ok(s) => s,
        Err(c) => return c,
    };
    if !check_script(io, file, &s, mode, CheckOptions::default()) {
        return EXIT_CHECK;
    }
    let mut text = String::new();
    for p in &s.proofs {
        let segs = find_maximal(&p.deduction);
        text.push_str(&format!("{} {}\n", p.name, rank_of(&segs)));
        for seg in &segs {
            let kind = kind_of(&p.deduction, seg);
            let paths: Vec<String> = seg.formulas.iter().map(|q| path_string(q)).collect();
            text.push_str(&format!("  {kind} degree {} length {} at {}\n", seg.degree, seg.len(), paths.join(" ")));
        }
    }
    io.emit(&None, &text)
}

/// Splits a trace file into per-proof sections headed by `# name` lines.
fn trace_sections(text: &str) -> Vec<(Option<String>, String)> {
    let mut out: Vec<(Option<String>, String)> = Vec::new();
    for line in text.lines() {
        if let Some(name) = line.trim().strip_prefix('#') {
            out.push((Some(name.trim().to_string()), String::new()));
        } else {
            if out.is_empty() {
                out.push((None, String::new()));
            }
            let last = &mut out.last_mut().unwrap().1;
            last.push_str(line);
            last.push('\n');
        }
    }
    out
}

fn cmd_audit(io: &mut Io, file: &Path, mode: Mode, trace: &Path) -> i32 {
    let s = match load(io, file) {
        Ok(s) => s,
        Err(c) => return c,
    };
    if !check_script(io, file, &s, mode, CheckOptions::default()) {
        return EXIT_CHECK;
    }
    let text = match std::fs::read_to_string(trace) {
        Ok(t) => t,
        Err(e) => {
            io.error(&trace.display().to_string(), e);
            return EXIT_PARSE;
        }
    };
    let sections = trace_sections(&text);
    let opts = NormalizeOptions::default();
    let mut code = EXIT_OK;
    for (i, p) in s.proofs.iter().enumerate() {
        let section = sections
            .iter()
            .find(|(n, _)| n.as_deref() == Some(p.name.as_str()))
            .or_else(|| sections.get(i).filter(|(n, _)| n.is_none()));
        let body = section.map(|(_, b)| b.as_str()).unwrap_or("");
        match audit(&p.deduction, body, &opts) {
            Ok(_) => {
                let _ = writeln!(io.out, "{} ok", p.name);
            }
            Err(e) => {
                io.error(&format!("{}: proof {}", trace.display(), p.name), e);
                code = EXIT_CHECK;
            }
        }
    }
    code
}
