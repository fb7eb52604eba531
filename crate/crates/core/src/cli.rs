//! Batch command surface. [`run`] never touches the process: it returns the
//! exit code and output so the binary and the tests share one code path.
//!
//! Exit codes: 0 success, 1 domain error, 2 usage error.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::cipher::{
    bytes_to_digits, decrypt_stream, derive_scheme_from_key, digits_to_bytes, encrypt_stream,
    KeySpec, SchemeDerivation,
};
use crate::combinatorics::{
    count_additions_general, count_compositions, count_partitions, enumerate_compositions,
    enumerate_twist_units, DEFAULT_ENUMERATION_BUDGET,
};
use crate::digits::{digits_to_text, Base, DigitVector, MAX_TEXT_BASE};
use crate::error::Error;
use crate::schemes::{AdditionScheme, DEFAULT_TABLE_CAP};
use crate::verify::{
    census_distinct_tables, check_group_axioms, classify_all, render_axiom_report,
};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommandResult {
    pub exit_code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl CommandResult {
    fn ok(stdout: String) -> Self {
        CommandResult {
            exit_code: 0,
            stdout,
            stderr: String::new(),
        }
    }

    fn domain_error(message: String) -> Self {
        CommandResult {
            exit_code: 1,
            stdout: String::new(),
            stderr: format!("error: {message}\n"),
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "digitadd",
    version,
    about = "Carry and carryless additions on digit vectors"
)]
struct Cli {
    /// Largest b^m for which an operation table is materialized.
    #[arg(long, global = true, default_value_t = DEFAULT_TABLE_CAP)]
    cap: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Add two digit vectors under a scheme.
    Add {
        scheme: String,
        x: String,
        y: String,
    },
    /// Find x with add(x, y) = z.
    Solve {
        scheme: String,
        z: String,
        y: String,
    },
    /// Print the Cayley table on integer labels.
    Table { scheme: String },
    /// Check the abelian group axioms by brute force.
    Verify { scheme: String },
    /// Count distinct operation tables over all schemes.
    Census {
        base: u32,
        m: usize,
        #[arg(long)]
        twists: bool,
    },
    /// Exact counts.
    Count {
        base: u32,
        m: usize,
        #[command(flatten)]
        what: CountKind,
    },
    /// Group compositions by partition and compare element-order profiles.
    Classify { base: u32, m: usize },
    /// Derive a scheme from a hex key.
    Derive {
        base: u32,
        m: usize,
        #[arg(long)]
        key: String,
        /// Print which key bits and bytes chose what.
        #[arg(long)]
        transcript: bool,
    },
    /// Combine data with a keystream under the key's scheme.
    Encrypt(StreamArgs),
    /// Invert `encrypt`.
    Decrypt(StreamArgs),
    /// List all compositions of m in box-counter order.
    ListCompositions { m: usize },
    /// List the units modulo b^t.
    ListUnits { base: u32, t: usize },
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct CountKind {
    #[arg(long)]
    compositions: bool,
    #[arg(long)]
    partitions: bool,
    #[arg(long)]
    schemes: bool,
}

#[derive(Debug, Args)]
struct StreamArgs {
    base: u32,
    m: usize,
    #[arg(long)]
    key: String,
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    keystream: PathBuf,
    /// Write here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Raw bytes, one per block (requires b=2, m=8).
    #[arg(long)]
    raw: bool,
}

type CmdResult = std::result::Result<String, String>;
type StreamOp = fn(&SchemeDerivation, &[u32], &[u32]) -> crate::error::Result<Vec<u32>>;

pub fn run<I, T>(args: I) -> CommandResult
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                CommandResult {
                    exit_code: 2,
                    stdout: String::new(),
                    stderr: rendered,
                }
            } else {
                CommandResult::ok(rendered)
            };
        }
    };
    match dispatch(cli.command, cli.cap) {
        Ok(out) => CommandResult::ok(out),
        Err(message) => CommandResult::domain_error(message),
    }
}

fn dispatch(command: Command, cap: usize) -> CmdResult {
    match command {
        Command::Add { scheme, x, y } => {
            let s = parse_scheme(&scheme)?;
            let (x, y) = (parse_vector(&s, &x)?, parse_vector(&s, &y)?);
            let z = s.add(&x, &y).map_err(display)?;
            Ok(format!("{}\n", z.to_text()))
        }
        Command::Solve { scheme, z, y } => {
            let s = parse_scheme(&scheme)?;
            let (z, y) = (parse_vector(&s, &z)?, parse_vector(&s, &y)?);
            let x = s.solve(&z, &y).map_err(display)?;
            Ok(format!("{}\n", x.to_text()))
        }
        Command::Table { scheme } => {
            let s = parse_scheme(&scheme)?;
            let table = s.operation_table(cap).map_err(display)?;
            let mut out = String::new();
            for i in 0..table.size() {
                let row: Vec<String> = table.row(i).iter().map(|e| e.to_string()).collect();
                let _ = writeln!(out, "{}", row.join(" "));
            }
            Ok(out)
        }
        Command::Verify { scheme } => {
            let s = parse_scheme(&scheme)?;
            let report = check_group_axioms(&s, cap).map_err(display)?;
            Ok(render_axiom_report(&s, &report))
        }
        Command::Census { base, m, twists } => {
            let base = parse_base(base)?;
            check_length(m)?;
            census_distinct_tables(base, m, twists, cap, DEFAULT_ENUMERATION_BUDGET)
                .map(|r| r.render())
                .map_err(display)
        }
        Command::Count { base, m, what } => {
            let base = parse_base(base)?;
            check_length(m)?;
            let n = if what.compositions {
                count_compositions(m)
            } else if what.partitions {
                count_partitions(m)
            } else {
                count_additions_general(base, m)
            };
            Ok(format!("{n}\n"))
        }
        Command::Classify { base, m } => {
            let base = parse_base(base)?;
            check_length(m)?;
            classify_all(base, m, cap, DEFAULT_ENUMERATION_BUDGET)
                .map(|c| c.render())
                .map_err(display)
        }
        Command::Derive {
            base,
            m,
            key,
            transcript,
        } => {
            let d = derive(base, m, &key)?;
            if transcript {
                Ok(d.render_transcript())
            } else {
                Ok(format!("{}\n", d.scheme))
            }
        }
        Command::Encrypt(args) => stream(args, encrypt_stream),
        Command::Decrypt(args) => stream(args, decrypt_stream),
        Command::ListCompositions { m } => {
            check_length(m)?;
            let comps = enumerate_compositions(m, DEFAULT_ENUMERATION_BUDGET).map_err(display)?;
            Ok(comps.iter().map(|c| format!("{c}\n")).collect())
        }
        Command::ListUnits { base, t } => {
            let base = parse_base(base)?;
            check_length(t)?;
            let units =
                enumerate_twist_units(base, t, DEFAULT_ENUMERATION_BUDGET).map_err(display)?;
            Ok(units.iter().map(|u| format!("{u}\n")).collect())
        }
    }
}

fn display(e: Error) -> String {
    e.to_string()
}

fn parse_base(b: u32) -> std::result::Result<Base, String> {
    Base::new(b).map_err(display)
}

fn check_length(m: usize) -> std::result::Result<(), String> {
    if m == 0 {
        return Err("length must be at least 1".into());
    }
    Ok(())
}

fn parse_scheme(line: &str) -> std::result::Result<AdditionScheme, String> {
    line.parse()
        .map_err(|e: Error| format!("scheme {line:?}: {e}"))
}

fn parse_vector(s: &AdditionScheme, token: &str) -> std::result::Result<DigitVector, String> {
    let v =
        DigitVector::from_text(s.base(), token).map_err(|e| format!("vector {token:?}: {e}"))?;
    if v.len() != s.length() {
        return Err(format!(
            "vector {token:?}: expected {} digits, got {}",
            s.length(),
            v.len()
        ));
    }
    Ok(v)
}

fn derive(base: u32, m: usize, key_hex: &str) -> std::result::Result<SchemeDerivation, String> {
    let base = parse_base(base)?;
    check_length(m)?;
    let key = hex::decode(key_hex.trim()).map_err(|e| format!("key {key_hex:?}: {e}"))?;
    let spec = KeySpec::new(key, base, m).map_err(display)?;
    derive_scheme_from_key(&spec).map_err(display)
}

fn read_digits(path: &Path, base: Base, raw: bool) -> std::result::Result<Vec<u32>, String> {
    let bytes = fs::read(path).map_err(|e| format!("{}: {e}", path.display()))?;
    if raw {
        return Ok(bytes_to_digits(&bytes));
    }
    let text = String::from_utf8(bytes).map_err(|_| format!("{}: not UTF-8", path.display()))?;
    text.chars()
        .filter(|c| !c.is_whitespace())
        .map(|c| {
            c.to_digit(36)
                .filter(|&d| d < base.get() && !c.is_ascii_uppercase())
                .ok_or_else(|| format!("{}: invalid base-{base} digit {c:?}", path.display()))
        })
        .collect()
}

fn stream(args: StreamArgs, op: StreamOp) -> CmdResult {
    if args.raw && (args.base != 2 || args.m != 8) {
        return Err("--raw requires b=2 and m=8".into());
    }
    if !args.raw && args.base > MAX_TEXT_BASE {
        return Err(format!(
            "base {} cannot be written as digit text",
            args.base
        ));
    }
    let d = derive(args.base, args.m, &args.key)?;
    let base = d.scheme.base();
    let data = read_digits(&args.input, base, args.raw)?;
    let keystream = read_digits(&args.keystream, base, args.raw)?;
    let out = op(&d, &data, &keystream).map_err(display)?;

    let payload: Vec<u8> = if args.raw {
        digits_to_bytes(&out)
    } else {
        format!("{}\n", digits_to_text(&out)).into_bytes()
    };
    match args.output {
        Some(path) => {
            fs::write(&path, &payload).map_err(|e| format!("{}: {e}", path.display()))?;
            Ok(String::new())
        }
        None if args.raw => Err("--raw output needs --output".into()),
        None => Ok(String::from_utf8(payload).expect("digit text is ASCII")),
    }
}
