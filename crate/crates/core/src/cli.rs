//! Command-line front end. `run` returns the process exit code:
//! 0 on success, 1 when a verification fails, 2 on usage errors.

use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use crate::lattice::{orm1_check, orm2_matrix, torus_matrix};
use crate::matrix::IntMatrix;
use crate::report::{build_entry, records, render_table, table_rows, to_json, ReportEntry};
use crate::smith::{determinant, invariant_factors, smith_normal_form};
use crate::theory::{canonical_invariants, evaluate, is_prime_power, theorem_decomposition, torus_order};
use crate::weyl::{enumerate_classes, Sign, SignedCycleType};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "spin-tori", version, about = "Maximal tori of Spin±2l(q): closed forms and Smith normal forms")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FormArg {
    Plus,
    Minus,
}

impl FormArg {
    fn sign(self) -> Sign {
        match self {
            FormArg::Plus => Sign::Plus,
            FormArg::Minus => Sign::Minus,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the torus classes of Spin±2l(q).
    Enumerate {
        #[arg(long)]
        l: usize,
        #[arg(long, value_enum)]
        form: FormArg,
    },
    /// Structure of one torus, optionally evaluated at q.
    Structure {
        #[arg(long)]
        l: usize,
        #[arg(long, value_enum)]
        form: FormArg,
        /// Type literal such as "2,1,-3" or "2,2:+".
        #[arg(long = "type", allow_hyphen_values = true)]
        class_type: String,
        #[arg(long)]
        q: Option<u64>,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Cross-check closed forms against Smith normal forms for all classes.
    Verify {
        #[arg(long)]
        l_max: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        q: Vec<u64>,
    },
    /// Print the table of torus structures for rank l.
    Table {
        #[arg(long)]
        l: usize,
        #[arg(long, value_enum)]
        form: Option<FormArg>,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Smith normal form of a matrix file ("rows cols" header, then rows).
    Snf {
        path: PathBuf,
        /// Also print the unimodular witnesses P and Q.
        #[arg(long)]
        witnesses: bool,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
}

/// Runs a parsed command, writing results to `out` and diagnostics to `err`.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = match cli.command {
        Command::Enumerate { l, form } => cmd_enumerate(l, form.sign(), out),
        Command::Structure {
            l,
            form,
            class_type,
            q,
            format,
        } => cmd_structure(l, form.sign(), &class_type, q, format, out, err),
        Command::Verify { l_max, q } => cmd_verify(l_max, &q, out, err),
        Command::Table { l, form, format } => cmd_table(l, form.map(FormArg::sign), format, out),
        Command::Snf {
            path,
            witnesses,
            format,
        } => cmd_snf(&path, witnesses, format, out),
    };
    match result {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Io(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_FAILURE
        }
    }
}

enum Failure {
    Usage(String),
    Io(std::io::Error),
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

type CmdResult = Result<i32, Failure>;

fn check_l(l: usize) -> Result<(), Failure> {
    if l < 2 {
        return Err(usage(format!("l must be at least 2, got {l}")));
    }
    Ok(())
}

fn check_q(q: u64, err: &mut dyn Write) -> Result<(), Failure> {
    if q < 2 {
        return Err(usage(format!("q must be at least 2, got {q}")));
    }
    if !is_prime_power(q) {
        writeln!(err, "warning: q = {q} is not a prime power; results are formal")?;
    }
    Ok(())
}

fn form_name(form: Sign) -> &'static str {
    match form {
        Sign::Plus => "plus",
        Sign::Minus => "minus",
    }
}

fn cmd_enumerate(l: usize, form: Sign, out: &mut dyn Write) -> CmdResult {
    let classes = enumerate_classes(l, form).map_err(usage)?;
    for t in &classes {
        writeln!(out, "{t}")?;
    }
    writeln!(out, "{} classes", classes.len())?;
    Ok(EXIT_OK)
}

fn cmd_structure(
    l: usize,
    form: Sign,
    literal: &str,
    q: Option<u64>,
    format: Format,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CmdResult {
    check_l(l)?;
    let t: SignedCycleType = literal.parse().map_err(usage)?;
    if t.rank() != l {
        return Err(usage(format!("type {t} is a partition of {}, not of {l}", t.rank())));
    }
    if t.form() != form {
        return Err(usage(format!(
            "type {t} has {} negative parts and belongs to form {}",
            t.negative_count(),
            form_name(t.form())
        )));
    }
    let qs: Vec<u64> = q.into_iter().collect();
    for &q in &qs {
        check_q(q, err)?;
    }
    let entry = build_entry(&t, &qs).map_err(usage)?;
    match format {
        Format::Json => write!(out, "{}", to_json(&records(std::slice::from_ref(&entry))))?,
        Format::Text => write!(out, "{}", structure_text(&entry))?,
    }
    Ok(if entry.all_match() { EXIT_OK } else { EXIT_FAILURE })
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
}

fn structure_text(e: &ReportEntry) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "type: {}", e.class_type);
    let _ = writeln!(s, "form: {}", form_name(e.form));
    let _ = writeln!(s, "case: ({})", e.case);
    let _ = writeln!(s, "structure: {}", e.symbolic);
    for r in &e.results {
        let _ = writeln!(s, "q = {}", r.q);
        let _ = writeln!(s, "  orders: [{}]", join(&r.orders));
        let _ = writeln!(s, "  invariants: ({})", join(&r.invariants));
        let _ = writeln!(s, "  oracle: ({})", join(&r.oracle_invariants));
        let _ = writeln!(s, "  {}", if r.matched { "MATCH" } else { "MISMATCH" });
    }
    s
}

fn table_title(l: usize, form: Sign) -> String {
    format!("Spin{}_{}(q)", form.symbol(), 2 * l)
}

fn cmd_table(l: usize, form: Option<Sign>, format: Format, out: &mut dyn Write) -> CmdResult {
    check_l(l)?;
    let forms = match form {
        Some(f) => vec![f],
        None => vec![Sign::Plus, Sign::Minus],
    };
    let mut all = Vec::new();
    for (n, &f) in forms.iter().enumerate() {
        let entries = enumerate_classes(l, f)
            .map_err(usage)?
            .iter()
            .map(|t| build_entry(t, &[]))
            .collect::<Result<Vec<_>, _>>()
            .map_err(usage)?;
        if format == Format::Text {
            if n > 0 {
                writeln!(out)?;
            }
            write!(out, "{}", render_table(&table_title(l, f), &table_rows(&entries)))?;
        }
        all.extend(entries);
    }
    if format == Format::Json {
        write!(out, "{}", to_json(&records(&all)))?;
    }
    Ok(EXIT_OK)
}

/// One item of the verification sweep.
#[derive(Clone, Debug)]
enum Check {
    Theorem(SignedCycleType, u64),
    Pipeline(SignedCycleType, u64),
}

fn run_check(c: &Check) -> Result<(), String> {
    match c {
        Check::Theorem(t, q) => {
            let d = theorem_decomposition(t);
            let orders = evaluate(&d, *q);
            let closed = canonical_invariants(&orders);
            let a = torus_matrix(t, *q).map_err(|e| e.to_string())?;
            let oracle = invariant_factors(&a);
            if closed != oracle {
                return Err(format!("closed form {closed} but SNF gives {oracle}"));
            }
            let order = torus_order(t, *q);
            let det = determinant(&a).map_err(|e| e.to_string())?;
            if closed.order().as_ref() != Some(&order) || det.magnitude() != order.magnitude() {
                return Err(format!("order law: {order} vs |det| {}", det.magnitude()));
            }
            Ok(())
        }
        Check::Pipeline(t, q) => {
            if !orm1_check(t, *q).map_err(|e| e.to_string())? {
                return Err("orm1 identity fails".into());
            }
            let reduced = invariant_factors(&orm2_matrix(t, *q).map_err(|e| e.to_string())?);
            let main = invariant_factors(&torus_matrix(t, *q).map_err(|e| e.to_string())?);
            if reduced != main {
                return Err(format!("bordered matrix gives {reduced}, torus matrix {main}"));
            }
            Ok(())
        }
    }
}

fn describe(c: &Check) -> String {
    match c {
        Check::Theorem(t, q) => format!("theorem {t} q={q}"),
        Check::Pipeline(t, q) => format!("pipeline {t} q={q}"),
    }
}

fn cmd_verify(l_max: usize, qs: &[u64], out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    check_l(l_max)?;
    for &q in qs {
        check_q(q, err)?;
    }
    let mut checks = Vec::new();
    for l in 2..=l_max {
        for form in [Sign::Plus, Sign::Minus] {
            for t in enumerate_classes(l, form).map_err(usage)? {
                for &q in qs {
                    checks.push(Check::Theorem(t.clone(), q));
                    if l <= 6 && t.parts().len() > 1 {
                        checks.push(Check::Pipeline(t.clone(), q));
                    }
                }
            }
        }
    }
    let mut failures: Vec<String> = checks
        .par_iter()
        .filter_map(|c| run_check(c).err().map(|e| format!("FAIL {}: {e}", describe(c))))
        .collect();
    failures.sort();
    for f in &failures {
        writeln!(out, "{f}")?;
    }
    writeln!(out, "{} checks, {} failures", checks.len(), failures.len())?;
    Ok(if failures.is_empty() { EXIT_OK } else { EXIT_FAILURE })
}

fn matrix_json(m: &IntMatrix) -> serde_json::Value {
    let rows: Vec<serde_json::Value> = (0..m.rows())
        .map(|i| {
            m.row(i)
                .iter()
                .map(|v| serde_json::Value::Number(v.to_string().parse().expect("integer literal")))
                .collect()
        })
        .collect();
    serde_json::Value::Array(rows)
}

fn cmd_snf(path: &PathBuf, witnesses: bool, format: Format, out: &mut dyn Write) -> CmdResult {
    let text = std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    let a = IntMatrix::parse_text(&text).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    let snf = smith_normal_form(&a);
    if !snf.verify(&a) {
        return Ok(EXIT_FAILURE);
    }
    let inv = invariant_factors(&a);
    match format {
        Format::Text => {
            writeln!(out, "invariants: {inv}")?;
            write!(out, "D:\n{}", snf.d.to_text())?;
            if witnesses {
                write!(out, "P:\n{}", snf.p.to_text())?;
                write!(out, "Q:\n{}", snf.q.to_text())?;
            }
        }
        Format::Json => {
            let mut obj = serde_json::Map::new();
            let factors = inv.factors().iter().map(|d| matrix_entry(d)).collect();
            obj.insert("invariants".into(), serde_json::Value::Array(factors));
            obj.insert("free_rank".into(), inv.free_rank().into());
            obj.insert("d".into(), matrix_json(&snf.d));
            if witnesses {
                obj.insert("p".into(), matrix_json(&snf.p));
                obj.insert("q".into(), matrix_json(&snf.q));
            }
            let s = serde_json::to_string_pretty(&serde_json::Value::Object(obj)).expect("json");
            writeln!(out, "{s}")?;
        }
    }
    Ok(EXIT_OK)
}

fn matrix_entry(v: &num_bigint::BigInt) -> serde_json::Value {
    serde_json::Value::Number(v.to_string().parse().expect("integer literal"))
}
