use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use ivl_core::{catalog, close, sqrt_symbol, FieldDescriptor, FieldElem, Point};
use ivl_ledger::dsl::ast::{Expr, ExprKind};
use ivl_ledger::dsl::{format_diagnostics, parse, parse_expr};
use ivl_ledger::{build_ledger, claims_of, run, Env, LedgerReport, Mode, Section};
use num_rational::BigRational;

#[derive(Parser)]
#[command(name = "ivl", version, about = "Check invariant-field computations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the built-in claim ledger.
    Ledger {
        #[arg(long, default_value = "all", value_parser = parse_section)]
        section: Section,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long, value_enum, default_value_t = RunMode::Exact)]
        mode: RunMode,
    },
    /// Check the asserts of a script file.
    Verify {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long, value_enum, default_value_t = RunMode::Exact)]
        mode: RunMode,
    },
    /// Print the order and element-order histogram of a catalog group.
    Group { name: String },
    /// Evaluate an expression at a rational point.
    Eval {
        expr: String,
        /// Comma-separated `VAR=RAT` assignments.
        #[arg(long, default_value = "")]
        at: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum RunMode {
    Exact,
    Fast,
}

fn parse_section(s: &str) -> Result<Section, String> {
    s.parse()
}

const FAIL: u8 = 1;
const USAGE: u8 = 2;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Ledger { section, format, mode } => report(&run(&build_ledger(section), mode.into()), format),
        Command::Verify { file, format, mode } => verify(&file, format, mode.into()),
        Command::Group { name } => group(&name),
        Command::Eval { expr, at } => eval(&expr, &at),
    };
    ExitCode::from(code)
}

impl From<RunMode> for Mode {
    fn from(m: RunMode) -> Mode {
        match m {
            RunMode::Exact => Mode::Exact,
            RunMode::Fast => Mode::Fast,
        }
    }
}

fn report(r: &LedgerReport, format: Format) -> u8 {
    match format {
        Format::Text => print!("{}", r.to_text()),
        Format::Json => println!("{}", r.to_json()),
    }
    if r.all_passed() {
        0
    } else {
        FAIL
    }
}

fn verify(file: &PathBuf, format: Format, mode: Mode) -> u8 {
    let src = match std::fs::read_to_string(file) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("{}: {e}", file.display());
            return USAGE;
        }
    };
    let (script, diags) = parse(&src);
    let claims = if diags.is_empty() { claims_of(&script) } else { Err(diags) };
    match claims {
        Ok(c) => report(&run(&c, mode), format),
        Err(d) => {
            for line in format_diagnostics(&d).lines() {
                eprintln!("{}:{line}", file.display());
            }
            USAGE
        }
    }
}

fn group(name: &str) -> u8 {
    let Some(gens) = catalog::group_generators(name) else {
        eprintln!("unknown group `{name}`; known: {}", catalog::GROUP_NAMES.join(", "));
        return USAGE;
    };
    match close(&gens, ivl_core::matgroup::DEFAULT_CAP) {
        Ok(g) => {
            println!("{name}: order {}", g.order());
            for (k, n) in g.order_histogram() {
                println!("  elements of order {k}: {n}");
            }
            0
        }
        Err(e) => {
            eprintln!("{name}: {e}");
            FAIL
        }
    }
}

fn radicands(e: &Expr, out: &mut Vec<i64>) {
    match &e.kind {
        ExprKind::Sqrt(d) => out.push(*d),
        ExprKind::Neg(x) | ExprKind::Pow(x, _) | ExprKind::Apply(_, x) | ExprKind::At(x, _) => radicands(x, out),
        ExprKind::Bin(_, a, b) => {
            radicands(a, out);
            radicands(b, out);
        }
        ExprKind::Int(_) | ExprKind::Ident(_) => {}
    }
}

/// Smallest field over which every `sqrt` literal in `e` is representable.
fn field_for(e: &Expr) -> Result<FieldDescriptor, String> {
    let mut ds = Vec::new();
    radicands(e, &mut ds);
    let mut field = FieldDescriptor::RATIONALS;
    let mut adj: Vec<i64> = Vec::new();
    for d in ds {
        if sqrt_symbol(d, field).is_ok() {
            continue;
        }
        let mut core = d;
        let mut k = 2i64;
        while k * k <= core.abs() {
            while core % (k * k) == 0 {
                core /= k * k;
            }
            k += 1;
        }
        adj.push(core);
        field = FieldDescriptor::new(&adj).map_err(|e| e.to_string())?;
    }
    Ok(field)
}

fn eval(src: &str, at: &str) -> u8 {
    let e = match parse_expr(src) {
        Ok(e) => e,
        Err(d) => {
            eprintln!("{}", format_diagnostics(&d));
            return USAGE;
        }
    };
    let field = match field_for(&e) {
        Ok(f) => f,
        Err(m) => {
            eprintln!("{m}");
            return USAGE;
        }
    };
    let mut assigned = Vec::new();
    for part in at.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let Some((name, val)) = part.split_once('=') else {
            eprintln!("bad assignment `{part}`; expected VAR=RAT");
            return USAGE;
        };
        let Ok(q) = val.trim().parse::<BigRational>() else {
            eprintln!("bad rational `{}`", val.trim());
            return USAGE;
        };
        assigned.push((name.trim().to_string(), q));
    }
    let mut names: BTreeSet<String> = assigned.iter().map(|(n, _)| n.clone()).collect();
    let mut idents = Vec::new();
    e.idents(&mut idents);
    names.extend(idents.into_iter().map(|(n, _)| n));
    let names: Vec<&str> = names.iter().map(String::as_str).collect();
    let env = Env::standalone(field, &names);
    let point: Point = assigned
        .iter()
        .map(|(n, q)| (env.vars().get(n).expect("declared"), FieldElem::from_rational(field, q.clone())))
        .collect();
    let value = env.eval(&e).and_then(|f| Ok(f.eval(&point)?));
    match value {
        Ok(v) => {
            println!("{v}");
            0
        }
        Err(err) => {
            eprintln!("{err}");
            USAGE
        }
    }
}
