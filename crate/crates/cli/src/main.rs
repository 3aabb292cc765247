use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use jetwitt::greenberg::{comparison_v, greenberg_transform, GreenbergContext};
use jetwitt::jet::adjunction::Adjunction;
use jetwitt::jet::localization::localization_check;
use jetwitt::jet::{jet_algebra, BaseSequence, PFamily};
use jetwitt::json::{
    finite_ring_from_arg, parse_poly, presentation_to_json, read_presentation, table_from_json, table_to_json,
    to_canonical_string, triple_from_arg, TableCache,
};
use jetwitt::presentation::AlgebraPresentation;
use jetwitt::report::Report;
use jetwitt::verify::{run_suite, Matrix, Suite, Tables, DEFAULT_ENUM_CAP, DEFAULT_SAMPLES};
use jetwitt::witt::{DrinfeldMap, WittRing, WittTable, DEFAULT_FEASIBILITY_CAP};
use jetwitt::{BaseTriple, Error, FiniteRing, Ring};

#[derive(Parser, Debug)]
#[command(name = "jetwitt", version, about = "pi-typical Witt vectors, arithmetic jets and Greenberg transforms")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Base triple: a name (Z2, Z3, Z5, GAUSS, EISEN), inline JSON or a JSON file.
    #[arg(long, global = true)]
    triple: Option<String>,
    /// Witt level n (or Greenberg length m).
    #[arg(long, global = true)]
    level: Option<usize>,
    /// Feasibility cap on q^n for table builds.
    #[arg(long, global = true, default_value_t = DEFAULT_FEASIBILITY_CAP)]
    cap: u64,
    /// Cap on hom-set enumeration.
    #[arg(long, global = true, default_value_t = DEFAULT_ENUM_CAP)]
    enum_cap: u64,
    /// Table cache directory; tables live in <dir>/witt/<hash>.json.
    #[arg(long, global = true, default_value = "cache")]
    cache: PathBuf,
    /// Build tables in memory only.
    #[arg(long, global = true)]
    no_cache: bool,
    /// Skip re-verification of cached tables.
    #[arg(long, global = true)]
    trust_cache: bool,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build or load the universal table and dump it as canonical JSON.
    WittTable {
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Arithmetic on W_n(B).
    WittOp(WittOpArgs),
    /// Jet algebras.
    #[command(subcommand)]
    Jet(JetCommand),
    /// Check Hom(A, W_n(B)) = Hom(J_n A, B) by enumeration.
    AdjointCheck(AdjointArgs),
    /// Compare points of J_n(A_s) and (J_n A)_t.
    LocalizeCheck(LocalizeArgs),
    /// Greenberg transform and comparison.
    #[command(subcommand)]
    Greenberg(GreenbergCommand),
    /// Run a verification suite.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum WittOp {
    Add,
    Mul,
    Neg,
    Ghost,
    Frobenius,
    Verschiebung,
    Delta,
    Teichmuller,
    Truncate,
    Drinfeld,
}

#[derive(Args, Debug)]
struct WittOpArgs {
    #[arg(value_enum)]
    op: WittOp,
    /// Coefficient ring B, e.g. F2, F4, Z4, F2[e] or {"m":..,"tower":..}.
    #[arg(long)]
    ring: String,
    /// First operand: JSON list of components, each an integer or a
    /// coefficient list.
    #[arg(long)]
    x: String,
    #[arg(long)]
    y: Option<String>,
}

#[derive(Subcommand, Debug)]
enum JetCommand {
    /// Emit the presentation of J_n A.
    Present {
        #[arg(long)]
        algebra: PathBuf,
        /// `constant` or `truncated:K` for O/pi^K -> O/pi^(K-1) -> ...
        #[arg(long, default_value = "constant")]
        base: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Same as the top-level adjoint-check.
    AdjointCheck(AdjointArgs),
}

#[derive(Args, Debug)]
struct AdjointArgs {
    #[arg(long)]
    algebra: PathBuf,
    #[arg(long)]
    ring: String,
    #[arg(long, default_value = "constant")]
    base: String,
}

#[derive(Args, Debug)]
struct LocalizeArgs {
    #[arg(long)]
    algebra: PathBuf,
    /// Element to invert, written in the generators.
    #[arg(long)]
    s: String,
    #[arg(long)]
    ring: String,
}

#[derive(Subcommand, Debug)]
enum GreenbergCommand {
    /// Emit gr(A) over the residue field.
    Transform {
        #[arg(long)]
        algebra: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the comparison map against the jet special fiber.
    Compare {
        #[arg(long)]
        algebra: PathBuf,
        /// Comma-separated test rings.
        #[arg(long, default_value = "F2,F4,F2[e]")]
        rings: String,
    },
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long)]
    suite: String,
    /// Comma-separated test rings; defaults depend on the suite.
    #[arg(long)]
    rings: Option<String>,
    /// Comma-separated levels; defaults depend on the suite.
    #[arg(long)]
    levels: Option<String>,
    /// Comma-separated triples; overrides --triple.
    #[arg(long)]
    triples: Option<String>,
    /// Use this table file (unverified) for its triple.
    #[arg(long)]
    table: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    samples: usize,
}

/// Process exit codes.
const EXIT_FAIL: u8 = 1;
const EXIT_CAP: u8 = 2;
const EXIT_INTEGRALITY: u8 = 3;
const EXIT_USAGE: u8 = 4;

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(Error::SizeCap { .. } | Error::FeasibilityCap(_)) => EXIT_CAP,
        Some(Error::NotDivisible(_)) => EXIT_INTEGRALITY,
        Some(Error::RelationViolation(_) | Error::IllDefined(_)) => EXIT_FAIL,
        _ => EXIT_USAGE,
    }
}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    Error::Usage(msg.into()).into()
}

struct Ctx {
    g: Global,
}

impl Ctx {
    fn triple(&self) -> Result<Arc<BaseTriple>> {
        let arg = self.g.triple.as_deref().unwrap_or("Z2");
        Ok(triple_from_arg(arg)?)
    }

    fn table_cache(&self) -> Option<TableCache> {
        (!self.g.no_cache).then(|| TableCache::new(&self.g.cache, self.g.trust_cache))
    }

    fn tables(&self) -> Tables {
        let t = Tables::new(self.g.cap);
        match self.table_cache() {
            Some(c) => t.with_cache(c),
            None => t,
        }
    }

    fn table(&self, triple: Arc<BaseTriple>, n: usize) -> Result<WittTable> {
        Ok(match self.table_cache() {
            Some(c) => c.get(triple, n, self.g.cap)?.0,
            None => WittTable::build(triple, n, self.g.cap)?,
        })
    }

    /// Reads a presentation; `--triple`, if given, must agree with it.
    fn algebra(&self, path: &Path) -> Result<AlgebraPresentation> {
        let a = read_presentation(path).with_context(|| format!("reading {}", path.display()))?;
        if self.g.triple.is_some() && **a.base.triple() != *self.triple()? {
            return Err(usage("--triple differs from the algebra's base triple"));
        }
        Ok(a)
    }

    fn emit_report(&self, report: &Report) -> u8 {
        match self.g.format {
            Format::Json => print!("{}", to_canonical_string(&report.to_json())),
            Format::Text => print!("{}", report.to_text()),
        }
        if report.pass {
            0
        } else {
            EXIT_FAIL
        }
    }

    fn emit_value(&self, v: &Value, out: Option<&Path>) -> Result<u8> {
        let s = to_canonical_string(v);
        match out {
            Some(p) => fs::write(p, s).with_context(|| format!("writing {}", p.display()))?,
            None => print!("{s}"),
        }
        Ok(0)
    }
}

fn parse_base(spec: &str, triple: Arc<BaseTriple>) -> Result<BaseSequence> {
    if spec == "constant" {
        return Ok(BaseSequence::Constant(triple));
    }
    if let Some(k) = spec.strip_prefix("truncated:") {
        let top: u32 = k.parse().map_err(|_| usage(format!("bad truncation {k:?}")))?;
        return Ok(BaseSequence::Truncated { triple, top });
    }
    Err(usage(format!("--base must be `constant` or `truncated:K`, got {spec:?}")))
}

fn split_list(s: &str) -> Vec<String> {
    s.split(',').map(str::trim).filter(|x| !x.is_empty()).map(String::from).collect()
}

fn parse_rings(s: &str) -> Result<Vec<FiniteRing>> {
    split_list(s).iter().map(|r| Ok(finite_ring_from_arg(r)?)).collect()
}

/// A Witt vector given as a JSON list of components.
fn parse_vector(src: &str, b: &FiniteRing, len: usize) -> Result<Vec<u32>> {
    let v: Value = serde_json::from_str(src).map_err(|e| usage(format!("vector {src:?}: {e}")))?;
    let comps = v.as_array().ok_or_else(|| usage("a Witt vector is a JSON list"))?;
    if comps.len() != len {
        return Err(usage(format!("expected {len} components, got {}", comps.len())));
    }
    comps
        .iter()
        .map(|c| {
            if let Some(n) = c.as_i64() {
                Ok(b.from_i64(n))
            } else if let Some(arr) = c.as_array() {
                let coeffs = arr
                    .iter()
                    .map(|x| x.as_i64().map(|n| n.rem_euclid(b.characteristic() as i64) as u64))
                    .collect::<Option<Vec<u64>>>()
                    .ok_or_else(|| usage(format!("bad component {c}")))?;
                Ok(b.from_coefficients(&coeffs))
            } else {
                Err(usage(format!("bad component {c}")))
            }
        })
        .collect()
}

fn vector_json(b: &FiniteRing, v: &[u32]) -> Value {
    json!(v.iter().map(|&a| json!(b.coefficients(a))).collect::<Vec<_>>())
}

fn cmd_witt_table(ctx: &Ctx, out: Option<&Path>) -> Result<u8> {
    let triple = ctx.triple()?;
    let n = ctx.g.level.unwrap_or(1);
    let table = ctx.table(triple, n)?;
    if ctx.g.format == Format::Text {
        let mut s = format!("{} n={n}\n", table.triple.describe());
        for (name, polys) in [("S", &table.sum), ("M", &table.prod), ("N", &table.neg), ("F", &table.frob), ("D", &table.delta)] {
            for (i, p) in polys.iter().enumerate() {
                s.push_str(&format!("{name}{i} = {p}\n"));
            }
        }
        match out {
            Some(p) => fs::write(p, s)?,
            None => print!("{s}"),
        }
        return Ok(0);
    }
    ctx.emit_value(&table_to_json(&table), out)
}

fn cmd_witt_op(ctx: &Ctx, args: &WittOpArgs) -> Result<u8> {
    let triple = ctx.triple()?;
    let n = ctx.g.level.unwrap_or(1);
    let b = finite_ring_from_arg(&args.ring)?.for_triple(&triple)?;
    let table = Arc::new(ctx.table(triple.clone(), n)?);
    let w = WittRing::new(table, n, b.clone())?;
    let lower = || -> Result<WittRing<FiniteRing>> {
        if n == 0 {
            return Err(usage(format!("{:?} needs level at least 1", args.op)));
        }
        Ok(w.lower()?)
    };
    let y = || -> Result<Vec<u32>> {
        let src = args.y.as_deref().ok_or_else(|| usage("this operation needs --y"))?;
        parse_vector(src, &b, n + 1)
    };
    let result = match args.op {
        WittOp::Verschiebung => {
            let x = parse_vector(&args.x, &b, n)?;
            w.verschiebung(&x)
        }
        WittOp::Teichmuller => {
            let x = parse_vector(&args.x, &b, 1)?;
            w.teichmuller(&x[0])
        }
        op => {
            let x = parse_vector(&args.x, &b, n + 1)?;
            match op {
                WittOp::Add => w.add(&x, &y()?),
                WittOp::Mul => w.mul(&x, &y()?),
                WittOp::Neg => w.neg(&x),
                WittOp::Ghost => w.ghost(&x),
                WittOp::Frobenius => {
                    lower()?;
                    w.frobenius(&x)
                }
                WittOp::Delta => {
                    lower()?;
                    w.delta(&x)
                }
                WittOp::Truncate => {
                    lower()?;
                    w.truncate(&x, n - 1)
                }
                WittOp::Drinfeld => {
                    let pt = BaseTriple::p_typical(triple.p())?;
                    let source_table = Arc::new(ctx.table(pt.clone(), n)?);
                    let source = WittRing::new(source_table, n, b.for_triple(&pt)?)?;
                    DrinfeldMap::new(source, w.clone())?.apply(&x)
                }
                WittOp::Verschiebung | WittOp::Teichmuller => unreachable!(),
            }
        }
    };
    let v = json!({
        "op": format!("{:?}", args.op).to_lowercase(),
        "triple": triple.describe(),
        "ring": b.name(),
        "level": n,
        "result": vector_json(&b, &result),
    });
    match ctx.g.format {
        Format::Json => ctx.emit_value(&v, None),
        Format::Text => {
            println!("{}", b.format_vec(&result).join(" "));
            Ok(0)
        }
    }
}

fn adjoint_check(ctx: &Ctx, args: &AdjointArgs) -> Result<u8> {
    let a = ctx.algebra(&args.algebra)?;
    let triple = a.base.triple().clone();
    let n = ctx.g.level.unwrap_or(1);
    let seq = parse_base(&args.base, triple.clone())?;
    let a = a.change_base(seq.ring(0)?);
    let b = finite_ring_from_arg(&args.ring)?;
    let table = Arc::new(ctx.table(triple.clone(), n.max(1))?);
    let family = PFamily::build(triple, n.max(1), ctx.g.cap)?;
    let adj = Adjunction::new(&a, &seq, n, &b, table, &family)?;
    let report = adj.check(&family, ctx.g.enum_cap)?.with_seed(ctx.g.seed);
    Ok(ctx.emit_report(&report))
}

fn cmd_jet(ctx: &Ctx, cmd: &JetCommand) -> Result<u8> {
    match cmd {
        JetCommand::Present { algebra, base, out } => {
            let a = ctx.algebra(algebra)?;
            let n = ctx.g.level.unwrap_or(1);
            let seq = parse_base(base, a.base.triple().clone())?;
            let a = a.change_base(seq.ring(0)?);
            let jet = jet_algebra(&a, &seq, n)?;
            if ctx.g.format == Format::Text {
                println!("{}", jet.presentation);
                return Ok(0);
            }
            ctx.emit_value(&presentation_to_json(&jet.presentation, n), out.as_deref())
        }
        JetCommand::AdjointCheck(args) => adjoint_check(ctx, args),
    }
}

fn cmd_localize(ctx: &Ctx, args: &LocalizeArgs) -> Result<u8> {
    let a = ctx.algebra(&args.algebra)?;
    let n = ctx.g.level.unwrap_or(1);
    let s = parse_poly(&args.s, &a.poly_ring(), &a.generators)?;
    let seq = BaseSequence::Constant(a.base.triple().clone());
    let b = finite_ring_from_arg(&args.ring)?;
    let report = localization_check(&a, &s, &seq, n, &b, ctx.g.enum_cap)?.with_seed(ctx.g.seed);
    Ok(ctx.emit_report(&report))
}

fn cmd_greenberg(ctx: &Ctx, cmd: &GreenbergCommand) -> Result<u8> {
    let m = ctx.g.level.unwrap_or(1);
    if m == 0 {
        return Err(usage("greenberg needs --level m >= 1"));
    }
    let (path, out, rings) = match cmd {
        GreenbergCommand::Transform { algebra, out } => (algebra, out.as_deref(), None),
        GreenbergCommand::Compare { algebra, rings } => (algebra, None, Some(rings)),
    };
    let a = ctx.algebra(path)?;
    let gctx = GreenbergContext::new(a.base.triple().clone(), m, ctx.g.cap)?;
    let a = a.change_base(gctx.base_ring());
    match rings {
        None => {
            let gr = greenberg_transform(&a, &gctx)?;
            if ctx.g.format == Format::Text {
                println!("{}", gr.presentation);
                return Ok(0);
            }
            let mut v = presentation_to_json(&gr.presentation, 0);
            v["context"] = json!(gctx.describe());
            ctx.emit_value(&v, out)
        }
        Some(rings) => {
            let rings = parse_rings(rings)?;
            if rings.is_empty() {
                return Err(usage("empty matrix: no test rings"));
            }
            let report = comparison_v(&a, &gctx, &rings, ctx.g.enum_cap)?.with_seed(ctx.g.seed);
            Ok(ctx.emit_report(&report))
        }
    }
}

fn cmd_verify(ctx: &Ctx, args: &VerifyArgs) -> Result<u8> {
    let suite = Suite::parse(&args.suite)?;
    let mut matrix = Matrix::default_for(suite, ctx.g.seed);
    matrix.samples = args.samples;
    matrix.enum_cap = ctx.g.enum_cap;
    if let Some(t) = &args.triples {
        matrix.triples = split_list(t).iter().map(|x| triple_from_arg(x)).collect::<jetwitt::Result<_>>()?;
    } else if let Some(t) = &ctx.g.triple {
        matrix.triples = vec![triple_from_arg(t)?];
    }
    if let Some(r) = &args.rings {
        matrix.rings = parse_rings(r)?;
    }
    if let Some(l) = &args.levels {
        let levels = split_list(l)
            .iter()
            .map(|x| x.parse().map_err(|_| usage(format!("bad level {x:?}"))))
            .collect::<Result<Vec<usize>>>()?;
        matrix.levels = Some(levels);
    } else if let Some(n) = ctx.g.level {
        matrix.levels = Some(vec![n]);
    }
    let mut tables = ctx.tables();
    if let Some(path) = &args.table {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let table = table_from_json(&serde_json::from_str(&text).map_err(Error::from)?)?;
        tables = tables.with_override(table);
    }
    let report = run_suite(suite, &matrix, &tables)?;
    Ok(ctx.emit_report(&report))
}

fn run(cli: Cli) -> Result<u8> {
    let ctx = Ctx { g: cli.global };
    if ctx.g.cap == 0 || ctx.g.enum_cap == 0 {
        bail!(usage("caps must be positive"));
    }
    // Validate the triple before doing anything else.
    if ctx.g.triple.is_some() {
        ctx.triple()?;
    }
    match &cli.command {
        Command::WittTable { out } => cmd_witt_table(&ctx, out.as_deref()),
        Command::WittOp(args) => cmd_witt_op(&ctx, args),
        Command::Jet(cmd) => cmd_jet(&ctx, cmd),
        Command::AdjointCheck(args) => adjoint_check(&ctx, args),
        Command::LocalizeCheck(args) => cmd_localize(&ctx, args),
        Command::Greenberg(cmd) => cmd_greenberg(&ctx, cmd),
        Command::Verify(args) => cmd_verify(&ctx, args),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn error_classes_map_to_exit_codes() {
        let code = |e: Error| exit_code(&anyhow::Error::from(e));
        assert_eq!(code(Error::SizeCap { needed: "9".into(), cap: 1 }), EXIT_CAP);
        assert_eq!(code(Error::FeasibilityCap("q^n".into())), EXIT_CAP);
        assert_eq!(code(Error::NotDivisible("x".into())), EXIT_INTEGRALITY);
        assert_eq!(code(Error::Usage("x".into())), EXIT_USAGE);
        assert_eq!(code(Error::Parse("x".into())), EXIT_USAGE);
        let wrapped = anyhow::Error::from(Error::NotDivisible("x".into())).context("building table");
        assert_eq!(exit_code(&wrapped), EXIT_INTEGRALITY);
    }

    #[test]
    fn vectors_parse_from_integers_and_coefficient_lists() {
        let f4 = FiniteRing::named("F4").unwrap();
        let v = parse_vector("[1, [0, 1]]", &f4, 2).unwrap();
        assert_eq!(v, vec![f4.one(), f4.generator(0)]);
        assert!(parse_vector("[1]", &f4, 2).is_err());
    }

    #[test]
    fn base_sequences() {
        let z2 = BaseTriple::named("Z2").unwrap();
        assert!(matches!(parse_base("truncated:3", z2.clone()), Ok(BaseSequence::Truncated { top: 3, .. })));
        assert!(parse_base("sideways", z2).is_err());
    }
}
