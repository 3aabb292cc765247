//! Verification suites driven by `jetwitt verify`.
//!
//! Each suite runs over a matrix of triples, test rings and levels and
//! returns one [`Report`] with a part per matrix cell. Cells whose ring
//! cannot be made an algebra over the triple are skipped and listed under
//! `skipped`.

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex};

use serde_json::json;

use crate::error::{Error, Result};
use crate::finite::FiniteRing;
use crate::greenberg::{check_sections, comparison_v, GreenbergContext};
use crate::jet::adjunction::{check_universal_property, Adjunction};
use crate::jet::localization::localization_check;
use crate::jet::{BaseSequence, PFamily};
use crate::json::{parse_poly, TableCache};
use crate::number::{BaseRing, BaseTriple};
use crate::poly::{JetVar, PolyRing};
use crate::presentation::AlgebraPresentation;
use crate::prolong::{
    all_pairs, check_pi_derivation, check_sequence, check_w1_correspondence, sample_o, sampled_pairs, BaseDelta,
    PresentedSequence, Prolongation, WittDelta,
};
use crate::report::Report;
use crate::ring::{ring_axiom_violation, Enumerable, Ring};
use crate::witt::{DrinfeldMap, WittRing, WittTable};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    WittAxioms,
    Operators,
    PDeriv,
    Adjunction,
    Localization,
    Greenberg,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::WittAxioms,
        Suite::Operators,
        Suite::PDeriv,
        Suite::Adjunction,
        Suite::Localization,
        Suite::Greenberg,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::WittAxioms => "witt-axioms",
            Suite::Operators => "operators",
            Suite::PDeriv => "pderiv",
            Suite::Adjunction => "adjunction",
            Suite::Localization => "localization",
            Suite::Greenberg => "greenberg",
        }
    }

    pub fn parse(s: &str) -> Result<Suite> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Usage(format!("unknown suite {s:?}")))
    }
}

/// A small algebra given by generator names and relation strings; it is
/// instantiated over each triple of the matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraSpec {
    pub generators: Vec<String>,
    pub relations: Vec<String>,
}

impl AlgebraSpec {
    pub fn new(generators: &[&str], relations: &[&str]) -> Self {
        AlgebraSpec {
            generators: generators.iter().map(|s| s.to_string()).collect(),
            relations: relations.iter().map(|s| s.to_string()).collect(),
        }
    }

    pub fn build(&self, base: BaseRing) -> Result<AlgebraPresentation> {
        let gens: Vec<JetVar> = self.generators.iter().map(|g| JetVar::new(g, 0, 0)).collect();
        let ring = PolyRing::new(base.clone());
        let rels = self
            .relations
            .iter()
            .map(|r| parse_poly(r, &ring, &gens))
            .collect::<Result<Vec<_>>>()?;
        AlgebraPresentation::new(base, gens, rels)
    }

    /// `Z[x]`, `Z[x]/(x^2)`, `Z[x]/(x^2 - 1)`, `Z[x,y]/(xy)`.
    pub fn default_matrix() -> Vec<AlgebraSpec> {
        vec![
            AlgebraSpec::new(&["x"], &[]),
            AlgebraSpec::new(&["x"], &["x^2"]),
            AlgebraSpec::new(&["x"], &["x^2 - 1"]),
            AlgebraSpec::new(&["x", "y"], &["x*y"]),
        ]
    }
}

/// Where Witt tables come from. Tables are memoized per `(triple, n)`; an
/// override table (for fixtures) is used for its own triple at every level
/// it covers.
pub struct Tables {
    pub cap: u64,
    pub cache: Option<TableCache>,
    pub override_table: Option<Arc<WittTable>>,
    memo: Mutex<BTreeMap<(String, usize), Arc<WittTable>>>,
}

impl Tables {
    pub fn new(cap: u64) -> Self {
        Tables {
            cap,
            cache: None,
            override_table: None,
            memo: Mutex::new(BTreeMap::new()),
        }
    }

    pub fn with_cache(mut self, cache: TableCache) -> Self {
        self.cache = Some(cache);
        self
    }

    pub fn with_override(mut self, table: WittTable) -> Self {
        self.override_table = Some(Arc::new(table));
        self
    }

    pub fn get(&self, triple: &Arc<BaseTriple>, n: usize) -> Result<Arc<WittTable>> {
        if let Some(t) = &self.override_table {
            if *t.triple == **triple && t.n >= n {
                return Ok(t.clone());
            }
        }
        let key = (triple.describe(), n);
        if let Some(t) = self.memo.lock().unwrap().get(&key) {
            return Ok(t.clone());
        }
        let table = match &self.cache {
            Some(c) => c.get(triple.clone(), n, self.cap)?.0,
            None => WittTable::build(triple.clone(), n, self.cap)?,
        };
        let table = Arc::new(table);
        self.memo.lock().unwrap().insert(key, table.clone());
        Ok(table)
    }
}

/// The test matrix. `levels = None` picks per-suite defaults.
#[derive(Clone, Debug)]
pub struct Matrix {
    pub triples: Vec<Arc<BaseTriple>>,
    pub rings: Vec<FiniteRing>,
    pub levels: Option<Vec<usize>>,
    pub algebras: Vec<AlgebraSpec>,
    /// Random samples used where exhaustive scans are too large.
    pub samples: usize,
    pub seed: u64,
    /// Enumeration cap for hom-sets.
    pub enum_cap: u64,
}

pub const DEFAULT_SAMPLES: usize = 10_000;
pub const DEFAULT_ENUM_CAP: u64 = 5_000_000;
/// Rings with at most this many elements get all triples checked.
const EXHAUSTIVE_LIMIT: u128 = 64;

fn named_triples(names: &[&str]) -> Vec<Arc<BaseTriple>> {
    names.iter().map(|n| BaseTriple::named(n).expect("built-in triple")).collect()
}

fn named_rings(names: &[&str]) -> Vec<FiniteRing> {
    names.iter().map(|n| FiniteRing::named(n).expect("built-in ring")).collect()
}

impl Matrix {
    /// The default matrix of a suite.
    pub fn default_for(suite: Suite, seed: u64) -> Matrix {
        let (triples, rings): (Vec<Arc<BaseTriple>>, Vec<FiniteRing>) = match suite {
            Suite::WittAxioms | Suite::Operators | Suite::PDeriv => (
                named_triples(&["Z2", "Z3", "GAUSS", "EISEN"]),
                named_rings(&["F2", "F4", "Z4", "F3", "F9"]),
            ),
            Suite::Adjunction => (named_triples(&["Z2"]), named_rings(&["F2", "F4", "Z4", "F2[e]"])),
            Suite::Localization => (named_triples(&["Z2"]), named_rings(&["F2", "F3", "Z4"])),
            Suite::Greenberg => (named_triples(&["Z2", "GAUSS"]), named_rings(&["F2", "F4", "F2[e]"])),
        };
        let algebras = match suite {
            Suite::Localization => vec![AlgebraSpec::new(&["x"], &[])],
            Suite::Greenberg => vec![AlgebraSpec::new(&["x"], &["x^2"])],
            _ => AlgebraSpec::default_matrix(),
        };
        Matrix {
            triples,
            rings,
            levels: None,
            algebras,
            samples: DEFAULT_SAMPLES,
            seed,
            enum_cap: DEFAULT_ENUM_CAP,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.triples.is_empty() {
            return Err(Error::Usage("empty matrix: no triples".into()));
        }
        if self.rings.is_empty() {
            return Err(Error::Usage("empty matrix: no test rings".into()));
        }
        if self.levels.as_ref().is_some_and(|l| l.is_empty()) {
            return Err(Error::Usage("empty matrix: no levels".into()));
        }
        if self.algebras.is_empty() {
            return Err(Error::Usage("empty matrix: no algebras".into()));
        }
        Ok(())
    }

    /// Levels for a triple: the explicit list, or `1, 2` for `q = 2` and
    /// `1` otherwise.
    fn witt_levels(&self, triple: &BaseTriple) -> Vec<usize> {
        match &self.levels {
            Some(l) => l.clone(),
            None if triple.q() == 2 => vec![1, 2],
            None => vec![1],
        }
    }

    fn levels_or(&self, default: &[usize]) -> Vec<usize> {
        self.levels.clone().unwrap_or_else(|| default.to_vec())
    }
}

/// Rings of the matrix that make sense for a triple: same residue
/// characteristic, and an image of `t` exists.
fn compatible_rings(rings: &[FiniteRing], triple: &BaseTriple, skipped: &mut Vec<String>) -> Vec<FiniteRing> {
    let p = triple.p();
    let mut out = Vec::new();
    for r in rings {
        let mut c = r.characteristic();
        while c % p == 0 {
            c /= p;
        }
        if c != 1 {
            skipped.push(format!("{} over {}: characteristic not a power of {p}", r.name(), triple.describe()));
            continue;
        }
        match r.for_triple(triple) {
            Ok(b) => out.push(b),
            Err(e) => skipped.push(format!("{} over {}: {e}", r.name(), triple.describe())),
        }
    }
    out
}

fn finish(mut report: Report, skipped: Vec<String>, seed: u64) -> Report {
    if !skipped.is_empty() {
        report.detail("skipped", skipped);
    }
    report.with_seed(seed)
}

pub fn run_suite(suite: Suite, matrix: &Matrix, tables: &Tables) -> Result<Report> {
    matrix.validate()?;
    match suite {
        Suite::WittAxioms => witt_axioms(matrix, tables),
        Suite::Operators => operators(matrix, tables),
        Suite::PDeriv => pderiv(matrix, tables),
        Suite::Adjunction => adjunction(matrix, tables),
        Suite::Localization => localization(matrix, tables),
        Suite::Greenberg => greenberg(matrix, tables),
    }
}

/// Element triples for an axiom scan: all of them for small rings,
/// otherwise `samples` seeded draws.
fn axiom_triples<E: Clone>(elems: &[E], samples: usize, seed: u64) -> (Vec<(E, E, E)>, bool) {
    if elems.len() as u128 <= EXHAUSTIVE_LIMIT {
        let mut out = Vec::with_capacity(elems.len().pow(3));
        for a in elems {
            for b in elems {
                for c in elems {
                    out.push((a.clone(), b.clone(), c.clone()));
                }
            }
        }
        return (out, true);
    }
    let pairs = sampled_pairs(elems, samples, seed);
    let thirds = sampled_pairs(elems, samples, seed ^ 0x9e37_79b9_7f4a_7c15);
    let out = pairs.into_iter().zip(thirds).map(|((a, b), (c, _))| (a, b, c)).collect();
    (out, false)
}

/// Commutative ring axioms on `W_n(B)`, plus truncation, Frobenius and the
/// ghost map being additive and multiplicative.
pub fn check_witt_ring(w: &WittRing<FiniteRing>, samples: usize, seed: u64) -> Report {
    let b = w.base();
    let n = w.level();
    let mut report = Report::new(format!("W_{n}({}) over {}", b.name(), w.table().triple.describe()));
    let elems = w.elements();
    let (triples, exhaustive) = axiom_triples(&elems, samples, seed);
    report.detail("elements", elems.len());
    report.detail("exhaustive", exhaustive);
    let fmt = |x: &Vec<u32>| b.format_vec(x);
    for (x, y, z) in &triples {
        let v = ring_axiom_violation(w, x, y, z);
        report.check(v.is_none(), || json!({"axiom": v, "a": fmt(x), "b": fmt(y), "c": fmt(z)}));
    }
    let lower = if n > 0 { w.lower().ok() } else { None };
    let pairs: Vec<_> = triples.iter().map(|(x, y, _)| (x.clone(), y.clone())).collect();
    for (x, y) in &pairs {
        let (s, p) = (w.add(x, y), w.mul(x, y));
        if let Some(l) = &lower {
            let t = |v: &Vec<u32>| w.truncate(v, n - 1);
            report.check(t(&s) == l.add(&t(x), &t(y)) && t(&p) == l.mul(&t(x), &t(y)), || {
                json!({"map": "truncate", "x": fmt(x), "y": fmt(y)})
            });
            let f = |v: &Vec<u32>| w.frobenius(v);
            report.check(f(&s) == l.add(&f(x), &f(y)) && f(&p) == l.mul(&f(x), &f(y)), || {
                json!({"map": "frobenius", "x": fmt(x), "y": fmt(y)})
            });
        }
        let (gx, gy) = (w.ghost(x), w.ghost(y));
        let gsum: Vec<u32> = gx.iter().zip(&gy).map(|(a, c)| b.add(a, c)).collect();
        let gprod: Vec<u32> = gx.iter().zip(&gy).map(|(a, c)| b.mul(a, c)).collect();
        report.check(w.ghost(&s) == gsum && w.ghost(&p) == gprod, || {
            json!({"map": "ghost", "x": fmt(x), "y": fmt(y)})
        });
    }
    report
}

fn witt_axioms(matrix: &Matrix, tables: &Tables) -> Result<Report> {
    let mut report = Report::new("witt-axioms");
    let mut skipped = Vec::new();
    for triple in &matrix.triples {
        let levels = matrix.witt_levels(triple);
        let top = *levels.iter().max().unwrap();
        let table = tables.get(triple, top)?;
        for b in compatible_rings(&matrix.rings, triple, &mut skipped) {
            for &n in &levels {
                let w = WittRing::new(table.clone(), n, b.clone())?;
                report.push(check_witt_ring(&w, matrix.samples, matrix.seed));
            }
        }
    }
    Ok(finish(report, skipped, matrix.seed))
}

/// `FV = pi`, `x V(y) = V(F(x) y)`, additivity and `O`-linearity of `V`,
/// multiplicativity of `[.]`, `F[b] = [b^q]` and `F(x) = x^q + pi Delta(x)`
/// on `W_n(B)`.
pub fn check_operators(w: &WittRing<FiniteRing>, samples: usize, seed: u64) -> Result<Report> {
    let b = w.base();
    let n = w.level();
    let triple = w.table().triple.clone();
    let q = triple.q();
    let mut report = Report::new(format!("operators W_{n}({}) over {}", b.name(), triple.describe()));
    let fmt = |x: &Vec<u32>| b.format_vec(x);
    let bs = b.elements();
    for x in &bs {
        for y in &bs {
            let lhs = w.mul(&w.teichmuller(x), &w.teichmuller(y));
            report.check(lhs == w.teichmuller(&b.mul(x, y)), || json!({"law": "[a][b] = [ab]", "a": x, "b": y}));
        }
    }
    if n == 0 {
        return Ok(report);
    }
    let lower = w.lower()?;
    for x in &bs {
        let f = w.frobenius(&w.teichmuller(x));
        report.check(f == lower.teichmuller(&b.pow(x, q)), || json!({"law": "F[b] = [b^q]", "b": x}));
    }
    let big = w.elements();
    let small = lower.elements();
    let pi = triple.pi().clone();
    let scalars = {
        let mut s = triple.residue_representatives();
        s.push(pi.clone());
        s.push(triple.from_int(&(-1).into()));
        s
    };
    for y in &small {
        let vy = w.verschiebung(y);
        report.check(w.frobenius(&vy) == lower.scalar(&pi, y), || json!({"law": "FV = pi", "x": fmt(y)}));
        for c in &scalars {
            report.check(w.verschiebung(&lower.scalar(c, y)) == w.scalar(c, &vy), || {
                json!({"law": "V(cx) = cV(x)", "c": format!("{c:?}"), "x": fmt(y)})
            });
        }
    }
    let pairs_small = if (small.len() as u128).pow(2) <= EXHAUSTIVE_LIMIT.pow(2) {
        all_pairs(&small)
    } else {
        sampled_pairs(&small, samples, seed)
    };
    for (x, y) in &pairs_small {
        let lhs = w.verschiebung(&lower.add(x, y));
        let rhs = w.add(&w.verschiebung(x), &w.verschiebung(y));
        report.check(lhs == rhs, || json!({"law": "V additive", "x": fmt(x), "y": fmt(y)}));
    }
    let mixed: Vec<(Vec<u32>, Vec<u32>)> = if big.len() * small.len() <= 4096 {
        big.iter().flat_map(|x| small.iter().map(move |y| (x.clone(), y.clone()))).collect()
    } else {
        let xs = sampled_pairs(&big, samples, seed);
        let ys = sampled_pairs(&small, samples, seed.wrapping_add(1));
        xs.into_iter().zip(ys).map(|((x, _), (y, _))| (x, y)).collect()
    };
    for (x, y) in &mixed {
        let lhs = w.mul(x, &w.verschiebung(y));
        let rhs = w.verschiebung(&lower.mul(&w.frobenius(x), y));
        report.check(lhs == rhs, || json!({"law": "xV(y) = V(F(x)y)", "x": fmt(x), "y": fmt(y)}));
    }
    for x in &big {
        let t = w.truncate(x, n - 1);
        let rhs = lower.add(&lower.pow(&t, q), &lower.scalar(&pi, &w.delta(x)));
        report.check(w.frobenius(x) == rhs, || json!({"law": "F(x) = x^q + pi Delta(x)", "x": fmt(x)}));
    }
    Ok(report)
}

/// The three defining conditions of Drinfeld's map on every source vector,
/// the ring-map property on sampled pairs, and injectivity/surjectivity.
///
/// Bijectivity is required only when `B` is a field and the target is
/// unramified; for `e > 1` the bijection is the sum map `u~` of the
/// Greenberg side, not `u` itself.
pub fn check_drinfeld(u: &DrinfeldMap<FiniteRing>, samples: usize, seed: u64) -> Result<Report> {
    let src = u.source();
    let tgt = u.target();
    let b = src.base().clone();
    let n = src.level();
    let l = tgt.level();
    let e = u.target_triple().e() as usize;
    let r = u.r() as usize;
    let mut report = Report::new(format!(
        "drinfeld W_{n}({}) -> W_{l} over {}",
        b.name(),
        u.target_triple().describe()
    ));
    let fmt = |x: &[u32]| b.format_vec(x);
    for x in b.elements() {
        report.check(u.apply(&src.teichmuller(&x)) == tgt.teichmuller(&x), || json!({"law": "u([b]) = [b]", "b": x}));
    }
    let elems = src.elements();
    // u(F^r x) = F(u(x)) compared at the highest level both sides know.
    if n >= r && l >= 1 {
        let level = (l - 1).min((n + 1 - r) * e - 1);
        let t = u.target_at(level);
        for x in &elems {
            let mut y = x.clone();
            for k in 0..r {
                y = src.at_level(n - k)?.frobenius(&y);
            }
            let lhs = u.apply_at(&y, level);
            let rhs = t.truncate(&tgt.frobenius(&u.apply(x)), level);
            report.check(lhs == rhs, || json!({"law": "u(F^r x) = F(u(x))", "x": fmt(x)}));
        }
    }
    // u(V x) = (p / pi') V(u(F^(r-1) x)).
    if n >= 1 {
        let level = l.min((n + 1).saturating_sub(r) * e);
        let t = u.target_at(level);
        let lower_src = src.lower()?;
        for x in &lower_src.elements() {
            let lhs = t.truncate(&u.apply_at(&src.verschiebung(x), level), level);
            let rhs = if level == 0 {
                t.zero()
            } else {
                let mut y = x.clone();
                for k in 0..r - 1 {
                    y = src.at_level(n - 1 - k)?.frobenius(&y);
                }
                t.scalar(u.c(), &t.verschiebung(&u.apply_at(&y, level - 1)))
            };
            report.check(lhs == rhs, || json!({"law": "u(Vx) = (p/pi') V(u(F^(r-1) x))", "x": fmt(x)}));
        }
    }
    let pairs = if (elems.len() as u128) <= EXHAUSTIVE_LIMIT {
        all_pairs(&elems)
    } else {
        sampled_pairs(&elems, samples.min(2000), seed)
    };
    for (x, y) in &pairs {
        let (ux, uy) = (u.apply(x), u.apply(y));
        let ok = u.apply(&src.add(x, y)) == tgt.add(&ux, &uy) && u.apply(&src.mul(x, y)) == tgt.mul(&ux, &uy);
        report.check(ok, || json!({"law": "u ring map", "x": fmt(x), "y": fmt(y)}));
    }
    let mut seen: BTreeMap<Vec<u32>, Vec<u32>> = BTreeMap::new();
    let mut collision = None;
    for x in &elems {
        if let Some(prev) = seen.insert(u.apply(x), x.clone()) {
            collision.get_or_insert((prev, x.clone()));
        }
    }
    let injective = collision.is_none();
    let surjective = seen.len() as u128 == tgt.cardinality();
    report.detail("injective", injective);
    report.detail("surjective", surjective);
    if let Some((a, c)) = &collision {
        report.detail("witness", json!({"x": fmt(a), "y": fmt(c), "u": fmt(&u.apply(a))}));
    }
    if b.is_field() && e == 1 && src.cardinality() == tgt.cardinality() {
        report.check(injective && surjective, || json!({"law": "bijective on a field"}));
    }
    Ok(report)
}

fn operators(matrix: &Matrix, tables: &Tables) -> Result<Report> {
    let mut report = Report::new("operators");
    let mut skipped = Vec::new();
    for triple in &matrix.triples {
        let levels = matrix.witt_levels(triple);
        let top = *levels.iter().max().unwrap();
        let table = tables.get(triple, top)?;
        let rings = compatible_rings(&matrix.rings, triple, &mut skipped);
        for b in &rings {
            for &n in &levels {
                let w = WittRing::new(table.clone(), n, b.clone())?;
                report.push(check_operators(&w, matrix.samples, matrix.seed)?);
            }
        }
        // Drinfeld's map needs B of characteristic p containing F_q.
        let p_typical = BaseTriple::p_typical(triple.p())?;
        let source_table = tables.get(&p_typical, top)?;
        for b in rings.iter().filter(|b| b.characteristic() == triple.p()) {
            for &n in &levels {
                let source = WittRing::new(source_table.clone(), n, b.for_triple(&p_typical)?)?;
                let target = WittRing::new(table.clone(), n, b.clone())?;
                let u = DrinfeldMap::new(source, target)?;
                report.push(check_drinfeld(&u, matrix.samples, matrix.seed)?);
            }
        }
    }
    Ok(finish(report, skipped, matrix.seed))
}

fn pderiv(matrix: &Matrix, tables: &Tables) -> Result<Report> {
    let mut report = Report::new("pderiv");
    let mut skipped = Vec::new();
    for triple in &matrix.triples {
        let sample = sample_o(triple, 40, 20, matrix.seed);
        let mut part = check_pi_derivation(&BaseDelta::new(triple.clone()), &all_pairs(&sample))?;
        part.name = format!("delta on {}", triple.describe());
        report.push(part);

        let levels: Vec<usize> = matrix.witt_levels(triple).into_iter().filter(|&n| n >= 1).collect();
        if let Some(&top) = levels.iter().max() {
            let table = tables.get(triple, top)?;
            for b in compatible_rings(&matrix.rings, triple, &mut skipped) {
                for &n in &levels {
                    let w = WittRing::new(table.clone(), n, b.clone())?;
                    let elems = w.elements();
                    let pairs = if elems.len() <= 64 {
                        all_pairs(&elems)
                    } else {
                        sampled_pairs(&elems, matrix.samples, matrix.seed)
                    };
                    let mut part = check_pi_derivation(&WittDelta::new(w)?, &pairs)?;
                    part.name = format!("Delta on W_{n}({}) over {}", b.name(), triple.describe());
                    report.push(part);
                }
            }
        }

        let base = BaseRing::integral(triple.clone());
        let mut seq = check_sequence(&PresentedSequence::constant(triple.clone(), 2))?;
        seq.name = format!("constant sequence over {}", triple.describe());
        report.push(seq);
        for spec in &matrix.algebras {
            let a = spec.build(base.clone())?;
            let mut part = check_sequence(&PresentedSequence::jets(&a, 2)?)?;
            part.name = format!("jet sequence of {a}");
            report.push(part);
        }
        if let Some(b) = compatible_rings(&matrix.rings, triple, &mut Vec::new()).first() {
            let w1 = WittRing::new(tables.get(triple, 1)?, 1, b.clone())?;
            for spec in &matrix.algebras {
                let a = spec.build(base.clone())?;
                report.push(w1_round_trips(&a, &w1, matrix.enum_cap)?);
            }
        }
    }
    Ok(finish(report, skipped, matrix.seed))
}

/// Every map `A -> W_1(B)` read as a prolongation `A -> B` must be well
/// defined and map back to itself.
fn w1_round_trips(a: &AlgebraPresentation, w1: &WittRing<FiniteRing>, cap: u64) -> Result<Report> {
    let b = w1.base().clone();
    let mut report = Report::new(format!("prolongations A -> {} for A={a}", b.name()));
    for g in crate::hom::enumerate_homs(a, w1, cap)? {
        let u = g.images.iter().map(|v| v[0]).collect();
        let d = g.images.iter().map(|v| v[1]).collect();
        let p = Prolongation::new(a.clone(), b.clone(), u, d)?;
        let mut part = check_w1_correspondence(&p, w1)?;
        if let Err(e) = p.ensure_well_defined(|x| b.is_zero(x)) {
            part.check(false, || json!({"error": e.to_string()}));
        }
        report.push(part);
    }
    report.parts.clear();
    Ok(report)
}

fn adjunction(matrix: &Matrix, tables: &Tables) -> Result<Report> {
    let mut report = Report::new("adjunction");
    let mut skipped = Vec::new();
    let levels = matrix.levels_or(&[0, 1, 2]);
    let top = *levels.iter().max().unwrap();
    for triple in &matrix.triples {
        let table = tables.get(triple, top.max(1))?;
        let family = PFamily::build(triple.clone(), top.max(1), tables.cap)?;
        let seq = BaseSequence::Constant(triple.clone());
        let base = BaseRing::integral(triple.clone());
        let rings = compatible_rings(&matrix.rings, triple, &mut skipped);
        for spec in &matrix.algebras {
            let a = spec.build(base.clone())?;
            for b in &rings {
                for &n in &levels {
                    let adj = Adjunction::new(&a, &seq, n, b, table.clone(), &family)?;
                    report.push(adj.check(&family, matrix.enum_cap)?);
                }
                report.push(check_universal_property(&a, table.clone(), b, matrix.enum_cap)?);
            }
        }
        // Non-constant base O/pi^3 -> O/pi^2 at level 1.
        let truncated = BaseSequence::Truncated { triple: triple.clone(), top: 3 };
        let r0 = truncated.ring(0)?;
        let a = AlgebraSpec::new(&["x"], &["x^2"]).build(r0)?;
        for b in rings.iter().filter(|b| b.characteristic() as u128 <= triple.p() as u128 * triple.p() as u128) {
            let adj = Adjunction::new(&a, &truncated, 1, b, table.clone(), &family)?;
            let mut part = adj.check(&family, matrix.enum_cap)?;
            part.name = format!("{} [{}]", part.name, truncated.describe());
            report.push(part);
        }
    }
    Ok(finish(report, skipped, matrix.seed))
}

fn localization(matrix: &Matrix, _tables: &Tables) -> Result<Report> {
    let mut report = Report::new("localization");
    let mut skipped = Vec::new();
    let levels = matrix.levels_or(&[1]);
    for triple in &matrix.triples {
        let base = BaseRing::integral(triple.clone());
        let seq = BaseSequence::Constant(triple.clone());
        let rings = compatible_rings_any(&matrix.rings, triple, &mut skipped);
        for spec in &matrix.algebras {
            let a = spec.build(base.clone())?;
            let ring = a.poly_ring();
            let s = ring.var(a.generators[0].clone());
            for b in &rings {
                for &n in &levels {
                    report.push(localization_check(&a, &s, &seq, n, b, matrix.enum_cap)?);
                }
            }
        }
    }
    Ok(finish(report, skipped, matrix.seed))
}

/// Like [`compatible_rings`] but without the characteristic filter: the
/// localization identity holds over any ring receiving `O`.
fn compatible_rings_any(rings: &[FiniteRing], triple: &BaseTriple, skipped: &mut Vec<String>) -> Vec<FiniteRing> {
    rings
        .iter()
        .filter_map(|r| match r.for_triple(triple) {
            Ok(b) => Some(b),
            Err(e) => {
                skipped.push(format!("{} over {}: {e}", r.name(), triple.describe()));
                None
            }
        })
        .collect()
}

fn greenberg(matrix: &Matrix, tables: &Tables) -> Result<Report> {
    let mut report = Report::new("greenberg");
    let mut skipped = Vec::new();
    let ms = matrix.levels.clone();
    for triple in &matrix.triples {
        let default_ms: Vec<usize> = if triple.e() == 1 { vec![1, 2] } else { vec![1] };
        let rings = compatible_rings(&matrix.rings, triple, &mut skipped);
        let rings: Vec<FiniteRing> = rings.into_iter().filter(|b| b.characteristic() == triple.p()).collect();
        if rings.is_empty() {
            continue;
        }
        for &m in ms.as_ref().unwrap_or(&default_ms) {
            if m == 0 {
                return Err(Error::Usage("greenberg needs m >= 1".into()));
            }
            let ctx = GreenbergContext::new(triple.clone(), m, tables.cap)?;
            for spec in &matrix.algebras {
                let a = spec.build(ctx.base_ring())?;
                report.push(comparison_v(&a, &ctx, &rings, matrix.enum_cap)?);
            }
            for b in &rings {
                let size = ctx.sections(b.clone())?.cardinality();
                if size <= 16 {
                    report.push(check_sections(&ctx, b)?);
                }
            }
        }
    }
    Ok(finish(report, skipped, matrix.seed))
}
