//! The `slt` command line: check, lighten, list traces, compare and render
//! `.lgt` protocol files.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use slt_core::lightener::{dedup, lighten_at, lighten_fully};
use slt_core::redundancy::ContextPath;
use slt_core::scribble;
use slt_core::semantics::{lang_eq, traces, Side};
use slt_core::{print, well_formed, Code, Declarations, Diagnostic, LightType, Location, Severity};

/// Process exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitStatus {
    Success,
    /// Error diagnostics were reported, or two protocols differ.
    Diagnostics,
    /// Bad arguments or an unusable file system path.
    Usage,
}

impl ExitStatus {
    pub fn code(self) -> u8 {
        match self {
            ExitStatus::Success => 0,
            ExitStatus::Diagnostics => 1,
            ExitStatus::Usage => 2,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "slt", version, about = "Light global session types")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse a file and report well-formedness diagnostics.
    Check { file: PathBuf },
    /// Remove redundant interactions and print the resulting file.
    Lighten {
        file: PathBuf,
        /// Prefix of generated declaration names.
        #[arg(long, default_value = "L")]
        prefix: String,
        /// Share generated declarations with alpha-equal bodies.
        #[arg(long)]
        dedup: bool,
        /// Eliminate only the redundant interaction of `main` at this label path (`l1/l2/...`).
        #[arg(long)]
        at: Option<String>,
    },
    /// Print the trace language, one sorted trace per line.
    Traces { file: PathBuf },
    /// Exit 0 iff both files generate the same traces.
    Verify { left: PathBuf, right: PathBuf },
    /// Render the protocols in Scribble style.
    EmitScribble {
        file: PathBuf,
        /// Write one `<protocol>.scr` file per protocol into this directory.
        #[arg(long)]
        out_dir: Option<PathBuf>,
        /// Protocol name used for `main`.
        #[arg(long, default_value = "Main")]
        name: String,
    },
}

/// Output streams plus presentation settings.
pub struct Io<'a> {
    pub out: &'a mut dyn Write,
    pub err: &'a mut dyn Write,
    /// Colour severities in diagnostics.
    pub color: bool,
}

impl Io<'_> {
    fn report(&mut self, file: &Path, diag: &Diagnostic) {
        let severity = match (self.color, diag.severity) {
            (true, Severity::Error) => format!("\x1b[1;31m{}\x1b[0m", diag.severity),
            (true, Severity::Warning) => format!("\x1b[1;33m{}\x1b[0m", diag.severity),
            (false, s) => s.to_string(),
        };
        let location = match &diag.location {
            Location::Source(span) => format!("{}:{}:", file.display(), span),
            Location::Node(path) => format!("{}: {}:", file.display(), path),
            Location::Unknown => format!("{}:", file.display()),
        };
        let _ = writeln!(
            self.err,
            "{location} {severity} {}: {}",
            diag.code, diag.message
        );
    }

    fn usage(&mut self, message: impl std::fmt::Display) -> ExitStatus {
        let _ = writeln!(self.err, "slt: {message}");
        ExitStatus::Usage
    }
}

/// Decides whether diagnostics are coloured from `SLT_COLOR` (`never` or `auto`).
pub fn color_enabled(setting: Option<&str>, stderr_is_terminal: bool) -> bool {
    match setting {
        Some("never") => false,
        _ => stderr_is_terminal,
    }
}

/// A checked input file.
struct Loaded {
    main: LightType,
    decls: Declarations,
}

/// Reads, parses and checks `file`. `Err` carries the exit status after
/// diagnostics have been printed.
fn load(file: &Path, io: &mut Io<'_>) -> Result<Loaded, ExitStatus> {
    let bytes = fs::read(file)
        .map_err(|e| io.usage(format_args!("cannot read {}: {e}", file.display())))?;
    let Ok(text) = String::from_utf8(bytes) else {
        let diag = Diagnostic::error(
            Code::Syntax,
            "file is not valid UTF-8",
            Location::Source(slt_core::Span { line: 1, col: 1 }),
        );
        io.report(file, &diag);
        return Err(ExitStatus::Diagnostics);
    };
    let parsed = slt_core::parse(&text).map_err(|diags| {
        diags.iter().for_each(|d| io.report(file, d));
        ExitStatus::Diagnostics
    })?;
    let diags: Vec<Diagnostic> = well_formed(&parsed.main, &parsed.decls)
        .into_iter()
        .map(|d| parsed.spans.resolve(d))
        .collect();
    diags.iter().for_each(|d| io.report(file, d));
    if diags.iter().any(Diagnostic::is_error) {
        return Err(ExitStatus::Diagnostics);
    }
    Ok(Loaded {
        main: parsed.main,
        decls: parsed.decls,
    })
}

fn failed(file: &Path, io: &mut Io<'_>, err: slt_core::Error) -> ExitStatus {
    io.report(file, &err.to_diagnostic());
    ExitStatus::Diagnostics
}

fn check(file: &Path, io: &mut Io<'_>) -> ExitStatus {
    match load(file, io) {
        Ok(_) => ExitStatus::Success,
        Err(status) => status,
    }
}

fn lighten(
    file: &Path,
    prefix: &str,
    share: bool,
    at: Option<&str>,
    io: &mut Io<'_>,
) -> ExitStatus {
    let input = match load(file, io) {
        Ok(l) => l,
        Err(status) => return status,
    };
    let result = match at {
        None => lighten_fully(&input.main, &input.decls, prefix),
        Some(path) => match path.parse::<ContextPath>() {
            Ok(path) => lighten_at(&input.main, &input.decls, &path, prefix),
            Err(_) => Err(slt_core::Error::SiteStale(path.to_string())),
        },
    };
    let mut out = match result {
        Ok(out) => out,
        Err(e) => return failed(file, io, e),
    };
    if share {
        out = dedup(out);
    }
    // Soundness gate: never print a decomposition with a different language.
    match lang_eq(&input.main, &input.decls, &out.main, &out.decls) {
        Ok(r) if r.equal => {}
        Ok(r) => {
            let witness = r.witness.map(|w| w.trace.to_string()).unwrap_or_default();
            let diag = Diagnostic::error(
                Code::LangMismatch,
                format!("lightened protocol changes the trace language (witness: {witness})"),
                Location::Unknown,
            );
            io.report(file, &diag);
            return ExitStatus::Diagnostics;
        }
        Err(e) => return failed(file, io, e),
    }
    let _ = io.out.write_all(print(&out.main, &out.decls).as_bytes());
    ExitStatus::Success
}

fn list_traces(file: &Path, io: &mut Io<'_>) -> ExitStatus {
    let input = match load(file, io) {
        Ok(l) => l,
        Err(status) => return status,
    };
    match traces(&input.main, &input.decls) {
        Ok(lang) => {
            for line in lang.render_lines() {
                let _ = writeln!(io.out, "{line}");
            }
            ExitStatus::Success
        }
        Err(e) => failed(file, io, e),
    }
}

fn verify(left: &Path, right: &Path, io: &mut Io<'_>) -> ExitStatus {
    let (a, b) = match (load(left, io), load(right, io)) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(s), _) | (_, Err(s)) => return s,
    };
    match lang_eq(&a.main, &a.decls, &b.main, &b.decls) {
        Ok(r) => match r.witness {
            None => ExitStatus::Success,
            Some(w) => {
                let file = match w.only_in {
                    Side::Left => left,
                    Side::Right => right,
                };
                let _ = writeln!(io.out, "only-in: {}: {}", file.display(), w.trace);
                ExitStatus::Diagnostics
            }
        },
        Err(e) => failed(left, io, e),
    }
}

fn emit_scribble(file: &Path, out_dir: Option<&Path>, name: &str, io: &mut Io<'_>) -> ExitStatus {
    let input = match load(file, io) {
        Ok(l) => l,
        Err(status) => return status,
    };
    let docs = match scribble::emit(name, &input.main, &input.decls) {
        Ok(docs) => docs,
        Err(e) => return failed(file, io, e),
    };
    match out_dir {
        None => {
            let text: Vec<String> = docs.iter().map(ToString::to_string).collect();
            let _ = io.out.write_all(text.join("\n").as_bytes());
        }
        Some(dir) => {
            if let Err(e) = fs::create_dir_all(dir) {
                return io.usage(format_args!("cannot create {}: {e}", dir.display()));
            }
            for doc in &docs {
                let path = dir.join(format!("{}.scr", doc.name));
                if let Err(e) = fs::write(&path, doc.to_string()) {
                    return io.usage(format_args!("cannot write {}: {e}", path.display()));
                }
            }
        }
    }
    ExitStatus::Success
}

/// Runs one `slt` invocation. `args` includes the program name.
pub fn run<I, T>(args: I, io: &mut Io<'_>) -> ExitStatus
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            return if e.use_stderr() {
                let _ = write!(io.err, "{}", e.render());
                ExitStatus::Usage
            } else {
                let _ = write!(io.out, "{}", e.render());
                ExitStatus::Success
            };
        }
    };
    match cli.command {
        Command::Check { file } => check(&file, io),
        Command::Lighten {
            file,
            prefix,
            dedup,
            at,
        } => lighten(&file, &prefix, dedup, at.as_deref(), io),
        Command::Traces { file } => list_traces(&file, io),
        Command::Verify { left, right } => verify(&left, &right, io),
        Command::EmitScribble {
            file,
            out_dir,
            name,
        } => emit_scribble(&file, out_dir.as_deref(), &name, io),
    }
}

/// Runs with the process streams.
pub fn run_stdio<I, T>(args: I, color: bool) -> ExitStatus
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = io::stdout();
    let stderr = io::stderr();
    let mut out = stdout.lock();
    let mut err = stderr.lock();
    let status = run(
        args,
        &mut Io {
            out: &mut out,
            err: &mut err,
            color,
        },
    );
    let _ = out.flush();
    status
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn color_setting() {
        assert!(!color_enabled(Some("never"), true));
        assert!(color_enabled(Some("auto"), true));
        assert!(!color_enabled(Some("auto"), false));
        assert!(color_enabled(None, true));
    }

    #[test]
    fn exit_codes() {
        assert_eq!(ExitStatus::Success.code(), 0);
        assert_eq!(ExitStatus::Diagnostics.code(), 1);
        assert_eq!(ExitStatus::Usage.code(), 2);
    }

    #[test]
    fn unknown_subcommand_is_usage_error() {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let status = run(
            ["slt", "frobnicate"],
            &mut Io {
                out: &mut out,
                err: &mut err,
                color: false,
            },
        );
        assert_eq!(status, ExitStatus::Usage);
        assert!(!err.is_empty());
    }
}
