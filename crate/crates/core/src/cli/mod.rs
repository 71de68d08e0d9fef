//! Batch command-line front end.
//!
//! Every verb builds a JSON report; `--format text` flattens it to
//! `key: value` lines and `--format csv` is accepted by `table` only.
//! Exit codes: 0 success, 1 failed verification, 2 usage or refused input,
//! 3 a resource bound was hit.

mod table;

use std::ffi::OsString;
use std::io::Write;
use std::path::Path;
use std::sync::Arc;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use crate::certify::{self, Recipe, SoSecond};
use crate::detect::{
    classify, type_c_pair_search, type_c_seeded_search, type_c_subrack_exhaustive, type_d_pair_search, type_f_search,
    verify_certificate, Certificate, ClassRack, Kind, SearchOpts,
};
use crate::gfq::{make_field, Field};
use crate::grp::{class_bound, conj_class, twist_data, Family, GroupCtx};
use crate::matq::{charpoly, is_regular, is_semisimple, poly_is_irreducible, Mat, MatJson};
use crate::numtheory::prime_power;
use crate::weyl;
use crate::{Error, Result};

pub use table::{kthulhu, psl2_small, TableRow};

#[derive(Parser, Debug)]
#[command(name = "collapse-lab", version, about = "Type C/D/F detection and certification for classes of finite classical groups")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Args, Debug)]
struct Global {
    /// Output format; csv is only available for `table`.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Seed for a randomized scan order (default: canonical order).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads for data-parallel scans.
    #[arg(long, default_value_t = 1, global = true)]
    threads: usize,
    /// Omit the `meta` block (tool version and timestamp).
    #[arg(long, global = true)]
    no_meta: bool,
    /// Pair budget for bounded searches.
    #[arg(long, global = true)]
    budget: Option<u64>,
    /// Largest subgroup or inner-group closure a search may build.
    #[arg(long, global = true)]
    max_closure: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    Gl,
    Sl,
    Sp,
    So,
}

/// Group selection. For `sp`, `--n` is the rank (matrices of size 2n);
/// otherwise it is the matrix size.
#[derive(Args, Debug, Clone)]
struct GroupArgs {
    #[arg(long, value_enum)]
    family: Option<FamilyArg>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    q: Option<u64>,
    /// Work modulo the centre.
    #[arg(long)]
    projective: bool,
    /// Restrict SO to Ω (the spinor-norm kernel).
    #[arg(long)]
    derived: bool,
}

#[derive(Subcommand, Debug)]
enum Verb {
    /// Structure of GF(q).
    FieldInfo {
        #[arg(long)]
        q: u64,
    },
    /// Size and invariants of the class of `--rep`.
    ClassInfo {
        #[command(flatten)]
        group: GroupArgs,
        /// Matrix: a file path or inline JSON.
        #[arg(long)]
        rep: String,
    },
    /// Runs the searches on a class, or re-verifies a certificate.
    Detect {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long)]
        rep: Option<String>,
        #[arg(long, value_enum, default_value_t = KindArg::All)]
        kind: KindArg,
        /// Certificate file to re-verify instead of searching.
        #[arg(long)]
        verify: Option<String>,
        /// Also write the certificate (without meta) to this file.
        #[arg(long)]
        out: Option<String>,
    },
    /// Runs an explicit construction.
    Certify {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long)]
        recipe: String,
        /// The class element (x, or A for irrk, or A1 for somixed).
        #[arg(long)]
        rep: Option<String>,
        /// Cuspidal blocks, one matrix per flag.
        #[arg(long = "blocks")]
        blocks: Vec<String>,
        #[arg(long, allow_hyphen_values = true)]
        lambda: Option<i64>,
        #[arg(long, allow_hyphen_values = true)]
        z: Option<i64>,
        /// Prime divisor c of n for pslcomposite.
        #[arg(long)]
        c: Option<usize>,
        /// Scalar second block for somixed.
        #[arg(long, allow_hyphen_values = true)]
        scalar: Option<i64>,
        /// Matrix second block for somixed.
        #[arg(long)]
        second: Option<String>,
        #[arg(long)]
        out: Option<String>,
    },
    /// Signed permutations: Coxeter elements, cuspidal classes, torus orders.
    Weyl {
        #[arg(long = "type", value_enum, default_value_t = WeylType::B)]
        kind: WeylType,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        list_cuspidal: bool,
        #[arg(long)]
        q: Option<u64>,
    },
    /// Small-parameter rows of the PSL_2 and kthulhu tables.
    Table {
        #[arg(long, value_enum)]
        which: Which,
        #[arg(long, default_value_t = 9)]
        qmax: u64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum KindArg {
    C,
    D,
    F,
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum WeylType {
    A,
    B,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Which {
    Psl2Small,
    Kthulhu,
}

/// Default search budget per table row: rows with no witness inside it
/// are settled by the exhaustive sober and austere checks or marked
/// `bounded`.
const TABLE_BUDGET: u64 = 2_000;

/// What a verb produced before formatting.
enum Output {
    Report(Value),
    Rows(Vec<TableRow>),
}

/// A verb failure that still printed a report (failed re-verification).
struct Failed(Value);

/// Parses `argv` (including the program name), runs the verb and returns
/// the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let global = &cli.global;
    let result = execute(&cli.verb, global);
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match result {
        Ok(Ok(output)) => match render(&output, global) {
            Ok(text) => {
                let _ = out.write_all(text.as_bytes());
                0
            }
            Err(e) => report_error(&e),
        },
        Ok(Err(Failed(v))) => {
            let _ = out.write_all(render_value(&with_meta(v, global), global.format).as_bytes());
            1
        }
        Err(e) => report_error(&e),
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::BoundExceeded { .. } => 3,
        Error::Verification(_) => 1,
        _ => 2,
    }
}

fn report_error(e: &Error) -> i32 {
    eprintln!("error: {e}");
    exit_code(e)
}

fn opts(g: &Global) -> SearchOpts {
    let mut o = SearchOpts { threads: g.threads.max(1), seed: g.seed, ..SearchOpts::default() };
    if let Some(b) = g.budget {
        o.budget = b;
    }
    if let Some(m) = g.max_closure {
        o.max_closure = m;
    }
    o
}

fn execute(verb: &Verb, g: &Global) -> Result<std::result::Result<Output, Failed>> {
    if g.format == Format::Csv && !matches!(verb, Verb::Table { .. }) {
        return Err(Error::Invalid("csv output is only available for `table`".into()));
    }
    let report = match verb {
        Verb::FieldInfo { q } => field_info(*q)?,
        Verb::ClassInfo { group, rep } => class_info(group, rep)?,
        Verb::Detect { group, rep, kind, verify, out } => {
            if let Some(path) = verify {
                return verify_file(path);
            }
            let rep = rep.as_deref().ok_or_else(|| Error::Invalid("detect needs --rep or --verify".into()))?;
            detect(group, rep, *kind, out.as_deref(), g)?
        }
        Verb::Certify { group, recipe, rep, blocks, lambda, z, c, scalar, second, out } => {
            let ctx = build_group(group)?;
            let inputs = RecipeInputs {
                rep: rep.as_deref(),
                blocks,
                lambda: *lambda,
                z: *z,
                c: *c,
                scalar: *scalar,
                second: second.as_deref(),
            };
            let cert = certify_with(&ctx, recipe.parse()?, &inputs)?;
            if let Some(path) = out {
                write_file(path, &cert.to_json())?;
            }
            serde_json::to_value(&cert).expect("certificates serialize")
        }
        Verb::Weyl { kind, n, list_cuspidal, q } => weyl_report(*kind, *n, *list_cuspidal, *q)?,
        Verb::Table { which, qmax } => {
            let mut o = opts(g);
            if g.budget.is_none() {
                o.budget = TABLE_BUDGET;
            }
            let rows = match which {
                Which::Psl2Small => psl2_small(*qmax, &o)?,
                Which::Kthulhu => kthulhu(*qmax, &o)?,
            };
            return Ok(Ok(Output::Rows(rows)));
        }
    };
    Ok(Ok(Output::Report(report)))
}

fn field(q: u64) -> Result<Arc<Field>> {
    let (p, m) = prime_power(q).ok_or_else(|| Error::Invalid(format!("q = {q} is not a prime power")))?;
    make_field(p, m)
}

fn build_group(g: &GroupArgs) -> Result<GroupCtx> {
    let family = g.family.ok_or_else(|| Error::Invalid("--family is required".into()))?;
    let n = g.n.ok_or_else(|| Error::Invalid("--n is required".into()))?;
    let q = g.q.ok_or_else(|| Error::Invalid("--q is required".into()))?;
    let f = field(q)?;
    let (family, size) = match family {
        FamilyArg::Gl => (Family::GL, n),
        FamilyArg::Sl => (Family::SL, n),
        FamilyArg::Sp => (Family::Sp, 2 * n),
        FamilyArg::So => (Family::SO, n),
    };
    GroupCtx::new(family, size, &f, g.projective, g.derived)
}

/// Reads a matrix from a file path or inline JSON: either the serialized
/// matrix object or nested integer arrays (integers are reduced into the
/// prime field; non-negative values below q are element codes).
fn parse_matrix(src: &str, f: &Arc<Field>) -> Result<Mat> {
    let text = if Path::new(src).is_file() {
        std::fs::read_to_string(src).map_err(|e| Error::Invalid(format!("{src}: {e}")))?
    } else {
        src.to_string()
    };
    let v: Value = serde_json::from_str(&text).map_err(|e| Error::Invalid(format!("matrix JSON: {e}")))?;
    if v.is_object() {
        let j: MatJson = serde_json::from_value(v).map_err(|e| Error::Invalid(format!("matrix JSON: {e}")))?;
        return Mat::from_json_in(&j, f);
    }
    let rows: Vec<Vec<i64>> =
        serde_json::from_value(v).map_err(|e| Error::Invalid(format!("matrix must be a list of integer rows: {e}")))?;
    let q = f.order() as i64;
    let rows: Vec<Vec<u32>> = rows
        .iter()
        .map(|r| r.iter().map(|&a| if (0..q).contains(&a) { a as u32 } else { f.from_i64(a) }).collect())
        .collect();
    Mat::from_rows(f, &rows)
}

fn show_matrix(m: &Mat) -> Value {
    let f = m.field();
    Value::Array((0..m.n()).map(|i| Value::Array((0..m.n()).map(|j| json!(f.display(m.get(i, j)))).collect())).collect())
}

fn field_info(q: u64) -> Result<Value> {
    let f = field(q)?;
    let prime = make_field(f.characteristic() as u64, 1)?;
    Ok(json!({
        "q": q,
        "p": f.characteristic(),
        "m": f.degree(),
        "modulus": f.modulus().display(&prime),
        "primitive_element": f.display(f.primitive_element()),
    }))
}

fn class_info(g: &GroupArgs, rep: &str) -> Result<Value> {
    let ctx = build_group(g)?;
    let x = parse_matrix(rep, ctx.field())?;
    if !ctx.contains(&x) {
        return Err(Error::NotMember(ctx.name()));
    }
    let f = ctx.field();
    let class = conj_class(&ctx, &x, class_bound())?;
    let semisimple = is_semisimple(&x);
    let cp = charpoly(&x);
    let twist = if ctx.family() == Family::SL && semisimple {
        serde_json::to_value(twist_data(&ctx, &x)?).expect("serializable")
    } else {
        Value::Null
    };
    Ok(json!({
        "group": ctx.name(),
        "representative": show_matrix(&ctx.canonicalize(&x)),
        "class_size": class.len(),
        "central": ctx.is_central(&x),
        "semisimple": semisimple,
        "regular": is_regular(&x),
        "charpoly": cp.display(f),
        "irreducible": poly_is_irreducible(&cp, f),
        "order": ctx.element_order(&x)?,
        "twist": twist,
    }))
}

fn detect(g: &GroupArgs, rep: &str, kind: KindArg, out: Option<&str>, global: &Global) -> Result<Value> {
    let ctx = build_group(g)?;
    let x = parse_matrix(rep, ctx.field())?;
    if !ctx.contains(&x) {
        return Err(Error::NotMember(ctx.name()));
    }
    let class = conj_class(&ctx, &x, class_bound())?;
    let t = ClassRack::from_class(&class);
    let o = opts(global);
    let cert = match kind {
        KindArg::All => {
            let v = classify(&t, &o)?;
            return Ok(json!({ "group": ctx.name(), "verdict": v.label(), "detail": v }));
        }
        KindArg::C if t.size() <= o.exhaustive_bound => type_c_subrack_exhaustive(&t, &o)?,
        KindArg::C => {
            let c = type_c_pair_search(&t, &o);
            if c.kind == Kind::TypeC { c } else { type_c_seeded_search(&t, &o) }
        }
        KindArg::D => type_d_pair_search(&t, &o),
        KindArg::F => type_f_search(&t, &o),
    };
    if let Some(path) = out {
        write_file(path, &cert.to_json())?;
    }
    Ok(serde_json::to_value(&cert).expect("certificates serialize"))
}

fn verify_file(path: &str) -> Result<std::result::Result<Output, Failed>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Invalid(format!("{path}: {e}")))?;
    let cert = Certificate::from_json(&text)?;
    let report = verify_certificate(&cert)?;
    let v = json!({
        "ok": report.ok,
        "kind": cert.kind,
        "checks": report.checks,
        "mismatches": report.mismatches,
    });
    Ok(if report.ok { Ok(Output::Report(v)) } else { Err(Failed(v)) })
}

struct RecipeInputs<'a> {
    rep: Option<&'a str>,
    blocks: &'a [String],
    lambda: Option<i64>,
    z: Option<i64>,
    c: Option<usize>,
    scalar: Option<i64>,
    second: Option<&'a str>,
}

fn certify_with(ctx: &GroupCtx, recipe: Recipe, i: &RecipeInputs) -> Result<Certificate> {
    let f = ctx.field();
    let rep = || -> Result<Mat> {
        let src = i.rep.ok_or_else(|| Error::Invalid(format!("recipe {recipe} needs --rep")))?;
        parse_matrix(src, f)
    };
    match recipe {
        Recipe::Split => certify::split_certificate(ctx, &rep()?),
        Recipe::IrrK => certify::irr_k_certificate(ctx, &rep()?),
        Recipe::Coxeter => certify::coxeter_certificate(ctx, &rep()?),
        Recipe::Cuspidal => {
            let blocks = i.blocks.iter().map(|b| parse_matrix(b, f)).collect::<Result<Vec<_>>>()?;
            certify::cuspidal_product_certificate(ctx, &blocks)
        }
        Recipe::Sp4Levi => {
            let (lambda, z) = match (i.lambda, i.z) {
                (Some(l), Some(z)) => (f.from_i64(l), f.from_i64(z)),
                (None, None) => certify::sp4_levi_parameters(f)
                    .ok_or_else(|| Error::Refused("no irreducible X² − zX + 1 over this field".into()))?,
                _ => return Err(Error::Invalid("give both --lambda and --z, or neither".into())),
            };
            certify::sp4_levi_certificate(ctx, lambda, z)
        }
        Recipe::PslComposite => {
            let c = i.c.ok_or_else(|| Error::Invalid("pslcomposite needs --c".into()))?;
            let x = i.rep.map(|s| parse_matrix(s, f)).transpose()?;
            certify::psl_composite_certificate(ctx, c, x.as_ref())
        }
        Recipe::SoMixed => {
            let second = match (i.scalar, i.second) {
                (Some(c), None) => SoSecond::Scalar(f.from_i64(c)),
                (None, Some(m)) => SoSecond::Block(parse_matrix(m, f)?),
                _ => return Err(Error::Invalid("somixed needs exactly one of --scalar, --second".into())),
            };
            certify::so_mixed_certificate(ctx, &rep()?, second)
        }
    }
}

fn weyl_report(kind: WeylType, n: usize, list_cuspidal: bool, q: Option<u64>) -> Result<Value> {
    if n == 0 {
        return Err(Error::Invalid("--n must be positive".into()));
    }
    if let Some(q) = q {
        if prime_power(q).is_none() {
            return Err(Error::Invalid(format!("q = {q} is not a prime power")));
        }
    }
    match kind {
        WeylType::B => {
            let describe = |label: String, w: &weyl::SignedPerm| {
                let mut v = json!({
                    "class": label,
                    "signed_cycle_type": w.signed_cycle_type().iter().map(|&(len, neg)| format!("{len}{}", if neg { "-" } else { "+" })).collect::<Vec<_>>(),
                    "absolute_length": weyl::absolute_length(w),
                    "cuspidal": weyl::is_cuspidal(w),
                });
                if let Some(q) = q {
                    v["torus_order"] = json!(weyl::torus_order(w, q).to_string());
                }
                v
            };
            let cox = weyl::coxeter_b(n);
            let mut report = json!({ "type": format!("B{n}"), "coxeter": describe(format!("({n})"), &cox) });
            if list_cuspidal {
                let reps = weyl::cuspidal_representatives(n);
                report["cuspidal_count"] = json!(reps.len());
                report["cuspidal"] = Value::Array(reps.iter().map(|(l, w)| describe(l.to_string(), w)).collect());
            }
            Ok(report)
        }
        WeylType::A => {
            let cycle: Vec<usize> = (1..n).chain(std::iter::once(0)).collect();
            let mut cox = json!({ "class": format!("({n})"), "cuspidal": weyl::type_a_cuspidal_check(&cycle)? });
            if let Some(q) = q {
                cox["torus_order"] = json!(weyl::torus_order_type_a(&cycle, q)?.to_string());
            }
            let mut report = json!({ "type": format!("A{}", n - 1), "coxeter": cox.clone() });
            if list_cuspidal {
                report["cuspidal_count"] = json!(1);
                report["cuspidal"] = json!([cox]);
            }
            Ok(report)
        }
    }
}

fn write_file(path: &str, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::Invalid(format!("{path}: {e}")))
}

fn with_meta(v: Value, g: &Global) -> Value {
    if g.no_meta {
        return v;
    }
    let secs = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    let meta = json!({ "tool": "collapse-lab", "version": env!("CARGO_PKG_VERSION"), "timestamp": secs });
    match v {
        Value::Object(mut m) => {
            m.insert("meta".into(), meta);
            Value::Object(m)
        }
        other => json!({ "meta": meta, "result": other }),
    }
}

fn render(output: &Output, g: &Global) -> Result<String> {
    match output {
        Output::Report(v) => Ok(render_value(&with_meta(v.clone(), g), g.format)),
        Output::Rows(rows) => match g.format {
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                for r in rows {
                    w.serialize(r).map_err(|e| Error::Invalid(format!("csv: {e}")))?;
                }
                let bytes = w.into_inner().map_err(|e| Error::Invalid(format!("csv: {e}")))?;
                Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
            }
            Format::Json => {
                let v = with_meta(json!({ "rows": rows }), g);
                Ok(render_value(&v, Format::Json))
            }
            Format::Text => Ok(text_table(rows)),
        },
    }
}

fn render_value(v: &Value, format: Format) -> String {
    match format {
        Format::Text => {
            let mut s = String::new();
            if let Value::Object(m) = v {
                flatten("", m, &mut s);
            } else {
                s.push_str(&v.to_string());
                s.push('\n');
            }
            s
        }
        _ => serde_json::to_string_pretty(v).expect("JSON values serialize") + "\n",
    }
}

fn flatten(prefix: &str, m: &Map<String, Value>, out: &mut String) {
    for (k, v) in m {
        let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
        match v {
            Value::Object(inner) if !inner.is_empty() => flatten(&key, inner, out),
            Value::String(s) => out.push_str(&format!("{key}: {s}\n")),
            other => out.push_str(&format!("{key}: {other}\n")),
        }
    }
}

fn text_table(rows: &[TableRow]) -> String {
    let header = ["group", "class", "label", "size", "verdict", "expected", "status"];
    let cells: Vec<[String; 7]> = rows
        .iter()
        .map(|r| {
            [
                r.group.clone(),
                r.class.clone(),
                r.label.clone(),
                r.size.to_string(),
                r.verdict.clone(),
                r.expected.clone(),
                r.status.clone(),
            ]
        })
        .collect();
    let mut widths = header.map(|h| h.chars().count());
    for row in &cells {
        for (w, c) in widths.iter_mut().zip(row) {
            *w = (*w).max(c.chars().count());
        }
    }
    let line = |items: Vec<&str>| {
        let padded: Vec<String> = items.iter().zip(&widths).map(|(c, &w)| format!("{c:<w$}")).collect();
        padded.join("  ").trim_end().to_string() + "\n"
    };
    let mut s = line(header.to_vec());
    for row in &cells {
        s.push_str(&line(row.iter().map(String::as_str).collect()));
    }
    s
}
