//! JSON formats for triples, finite rings, polynomials, presentations and
//! Witt tables, plus the on-disk table cache.
//!
//! Integers are written as JSON numbers when they fit in `i64` and as
//! decimal strings otherwise; both forms are accepted on input.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::finite::FiniteRing;
use crate::number::{BaseRing, BaseTriple, NumberRingElement};
use crate::poly::{JetVar, Monomial, MultiPoly, PolyRing};
use crate::presentation::AlgebraPresentation;
use crate::ring::Ring;
use crate::witt::WittTable;

pub const FORMAT_VERSION: u64 = 1;

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

pub fn int_to_json(n: &BigInt) -> Value {
    match n.to_i64() {
        Some(x) => json!(x),
        None => json!(n.to_string()),
    }
}

pub fn int_from_json(v: &Value) -> Result<BigInt> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .ok_or_else(|| parse_err(format!("{n} is not an integer"))),
        Value::String(s) => s.parse().map_err(|_| parse_err(format!("{s:?} is not an integer"))),
        other => Err(parse_err(format!("expected an integer, got {other}"))),
    }
}

fn ints_from_json(v: &Value) -> Result<Vec<BigInt>> {
    v.as_array()
        .ok_or_else(|| parse_err(format!("expected an integer list, got {v}")))?
        .iter()
        .map(int_from_json)
        .collect()
}

fn u64_field(obj: &Value, key: &str) -> Result<u64> {
    obj.get(key)
        .and_then(Value::as_u64)
        .ok_or_else(|| parse_err(format!("missing or invalid field {key:?}")))
}

pub fn element_to_json(c: &NumberRingElement) -> Value {
    Value::Array(c.0.iter().map(int_to_json).collect())
}

/// `{"g": [c0, ..., 1], "pi": [...], "q": N}`.
pub fn triple_to_json(t: &BaseTriple) -> Value {
    json!({
        "g": t.g().iter().map(int_to_json).collect::<Vec<_>>(),
        "pi": element_to_json(t.pi()),
        "q": t.q(),
    })
}

/// Accepts the object form or a built-in name such as `"GAUSS"`.
pub fn triple_from_json(v: &Value) -> Result<Arc<BaseTriple>> {
    if let Some(name) = v.as_str() {
        return BaseTriple::named(name);
    }
    let g = ints_from_json(v.get("g").ok_or_else(|| parse_err("triple needs \"g\""))?)?;
    let pi = ints_from_json(v.get("pi").ok_or_else(|| parse_err("triple needs \"pi\""))?)?;
    let q = u64_field(v, "q")?;
    Ok(Arc::new(BaseTriple::validate(&g, &pi, q)?))
}

/// A triple given by name, inline JSON or a path to a JSON file.
pub fn triple_from_arg(arg: &str) -> Result<Arc<BaseTriple>> {
    let trimmed = arg.trim();
    if trimmed.starts_with('{') {
        return triple_from_json(&serde_json::from_str(trimmed)?);
    }
    if Path::new(trimmed).is_file() {
        return triple_from_json(&serde_json::from_str(&fs::read_to_string(trimmed)?)?);
    }
    BaseTriple::named(trimmed)
}

/// `{"m": N, "tower": [[[..], ..], ..]}` or a name such as `"F4"`.
pub fn finite_ring_from_json(v: &Value) -> Result<FiniteRing> {
    if let Some(name) = v.as_str() {
        return FiniteRing::named(name);
    }
    let m = u64_field(v, "m")?;
    let tower = match v.get("tower") {
        None => Vec::new(),
        Some(t) => serde_json::from_value::<Vec<Vec<Vec<i64>>>>(t.clone())?,
    };
    FiniteRing::new(m, tower)
}

pub fn finite_ring_from_arg(arg: &str) -> Result<FiniteRing> {
    let trimmed = arg.trim();
    if trimmed.starts_with('{') {
        return finite_ring_from_json(&serde_json::from_str(trimmed)?);
    }
    FiniteRing::named(trimmed)
}

pub fn var_to_json(v: &JetVar) -> Value {
    json!([v.family.as_ref(), v.gamma, v.order])
}

pub fn var_from_json(v: &Value) -> Result<JetVar> {
    let arr = v.as_array().filter(|a| a.len() == 3);
    let (family, gamma, order) = match arr {
        Some(a) => (a[0].as_str(), a[1].as_u64(), a[2].as_u64()),
        None => return Err(parse_err(format!("variable must be [family, gamma, order], got {v}"))),
    };
    match (family, gamma, order) {
        (Some(f), Some(g), Some(o)) => Ok(JetVar::new(f, g as u32, o as u32)),
        _ => Err(parse_err(format!("bad variable {v}"))),
    }
}

/// `{"vars": [...], "terms": [[[e1, e2, ...], [c0, ...]], ...]}` with the
/// variables sorted and the terms in descending order.
pub fn poly_to_json(p: &MultiPoly) -> Value {
    let vars: Vec<JetVar> = p.variables().into_iter().collect();
    let terms: Vec<Value> = p
        .terms()
        .rev()
        .map(|(m, c)| {
            let exps: Vec<u32> = vars.iter().map(|v| m.exponent(v)).collect();
            json!([exps, element_to_json(c)])
        })
        .collect();
    json!({
        "vars": vars.iter().map(var_to_json).collect::<Vec<_>>(),
        "terms": terms,
    })
}

pub fn poly_from_json(v: &Value, ring: &PolyRing) -> Result<MultiPoly> {
    let vars = v
        .get("vars")
        .and_then(Value::as_array)
        .ok_or_else(|| parse_err("polynomial needs \"vars\""))?
        .iter()
        .map(var_from_json)
        .collect::<Result<Vec<_>>>()?;
    let terms = v
        .get("terms")
        .and_then(Value::as_array)
        .ok_or_else(|| parse_err("polynomial needs \"terms\""))?;
    let mut out = Vec::with_capacity(terms.len());
    for t in terms {
        let pair = t
            .as_array()
            .filter(|a| a.len() == 2)
            .ok_or_else(|| parse_err(format!("term must be [exponents, coefficient], got {t}")))?;
        let exps = pair[0]
            .as_array()
            .ok_or_else(|| parse_err("exponent vector must be a list"))?;
        if exps.len() != vars.len() {
            return Err(parse_err(format!(
                "exponent vector of length {} for {} variables",
                exps.len(),
                vars.len()
            )));
        }
        let mut factors = Vec::new();
        for (var, e) in vars.iter().zip(exps) {
            let e = e.as_u64().ok_or_else(|| parse_err("exponents must be non-negative"))?;
            if e > 0 {
                factors.push((var.clone(), e as u32));
            }
        }
        let coeff = ring.base().reduce(&NumberRingElement(ints_from_json(&pair[1])?));
        out.push((Monomial::from_pairs(factors), coeff));
    }
    Ok(MultiPoly::from_terms(ring, out))
}

/// `{"triple": {...}, "pi_power": k | null}`.
pub fn base_to_json(b: &BaseRing) -> Value {
    json!({
        "triple": triple_to_json(b.triple()),
        "pi_power": b.pi_power(),
    })
}

pub fn base_from_json(v: &Value) -> Result<BaseRing> {
    let triple = triple_from_json(v.get("triple").unwrap_or(v))?;
    let k = match v.get("pi_power") {
        None | Some(Value::Null) => None,
        Some(k) => Some(k.as_u64().ok_or_else(|| parse_err("pi_power must be a number"))? as u32),
    };
    Ok(BaseRing::with_power(triple, k))
}

/// Header `{base, level, generators}` followed by the relations.
pub fn presentation_to_json(p: &AlgebraPresentation, level: usize) -> Value {
    json!({
        "base": base_to_json(&p.base),
        "level": level,
        "generators": p.generators.iter().map(var_to_json).collect::<Vec<_>>(),
        "relations": p.relations.iter().map(poly_to_json).collect::<Vec<_>>(),
    })
}

/// Relations may be polynomial objects or strings such as `"x^2 - 1"`.
/// Generators may be given as `[family, gamma, order]` or as plain names.
pub fn presentation_from_json(v: &Value) -> Result<AlgebraPresentation> {
    let base = base_from_json(v.get("base").ok_or_else(|| parse_err("presentation needs \"base\""))?)?;
    let generators = v
        .get("generators")
        .and_then(Value::as_array)
        .ok_or_else(|| parse_err("presentation needs \"generators\""))?
        .iter()
        .map(|g| match g.as_str() {
            Some(name) => Ok(JetVar::new(name, 0, 0)),
            None => var_from_json(g),
        })
        .collect::<Result<Vec<_>>>()?;
    let ring = PolyRing::new(base.clone());
    let relations = match v.get("relations") {
        None => Vec::new(),
        Some(rels) => rels
            .as_array()
            .ok_or_else(|| parse_err("\"relations\" must be a list"))?
            .iter()
            .map(|r| match r.as_str() {
                Some(s) => parse_poly(s, &ring, &generators),
                None => poly_from_json(r, &ring),
            })
            .collect::<Result<Vec<_>>>()?,
    };
    AlgebraPresentation::new(base, generators, relations)
}

pub fn read_presentation(path: &Path) -> Result<AlgebraPresentation> {
    presentation_from_json(&serde_json::from_str(&fs::read_to_string(path)?)?)
}

/// Parses integer-coefficient expressions in the generators:
/// `+`, `-`, `*`, `^` with non-negative integer exponents and parentheses.
pub fn parse_poly(src: &str, ring: &PolyRing, generators: &[JetVar]) -> Result<MultiPoly> {
    let mut parser = Parser { chars: src.chars().filter(|c| !c.is_whitespace()).collect(), pos: 0, ring, generators };
    let p = parser.expr()?;
    if parser.pos != parser.chars.len() {
        return Err(parse_err(format!("unexpected {:?} in {src:?}", parser.chars[parser.pos])));
    }
    Ok(p)
}

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    ring: &'a PolyRing,
    generators: &'a [JetVar],
}

impl Parser<'_> {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<MultiPoly> {
        let r = self.ring;
        let mut acc = if self.peek() == Some('-') {
            self.pos += 1;
            r.neg(&self.term()?)
        } else {
            self.term()?
        };
        while let Some(c) = self.peek() {
            match c {
                '+' => {
                    self.pos += 1;
                    acc = r.add(&acc, &self.term()?);
                }
                '-' => {
                    self.pos += 1;
                    acc = r.sub(&acc, &self.term()?);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<MultiPoly> {
        let mut acc = self.factor()?;
        while self.peek() == Some('*') {
            self.pos += 1;
            acc = self.ring.mul(&acc, &self.factor()?);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<MultiPoly> {
        let base = self.atom()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            let e = self.number()?;
            let e = e.to_u64().ok_or_else(|| parse_err("exponent too large"))?;
            return Ok(self.ring.pow(&base, e));
        }
        Ok(base)
    }

    fn number(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(parse_err(format!("expected a number at position {start}")));
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        Ok(s.parse().expect("digits parse"))
    }

    fn atom(&mut self) -> Result<MultiPoly> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let p = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(parse_err("missing ')'"));
                }
                self.pos += 1;
                Ok(p)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.number()?;
                Ok(self.ring.from_int(&n))
            }
            Some(c) if c.is_alphabetic() => {
                let start = self.pos;
                while self.peek().is_some_and(|c| c.is_alphanumeric() || c == '_' || c == '\'') {
                    self.pos += 1;
                }
                let name: String = self.chars[start..self.pos].iter().collect();
                let var = self
                    .generators
                    .iter()
                    .find(|g| g.to_string() == name)
                    .ok_or_else(|| parse_err(format!("unknown generator {name:?}")))?;
                Ok(self.ring.var(var.clone()))
            }
            other => Err(parse_err(format!("unexpected {other:?}"))),
        }
    }
}

/// Cache key: sha256 over the canonical `(g, pi, q, n)` header.
pub fn table_hash(triple: &BaseTriple, n: usize) -> String {
    let header = json!({"triple": triple_to_json(triple), "n": n, "version": FORMAT_VERSION});
    let digest = Sha256::digest(header.to_string().as_bytes());
    hex::encode(digest)
}

pub fn table_to_json(t: &WittTable) -> Value {
    let polys = |v: &[MultiPoly]| v.iter().map(poly_to_json).collect::<Vec<_>>();
    let mut obj = Map::new();
    obj.insert("version".into(), json!(FORMAT_VERSION));
    obj.insert("hash".into(), json!(table_hash(&t.triple, t.n)));
    obj.insert("triple".into(), triple_to_json(&t.triple));
    obj.insert("n".into(), json!(t.n));
    obj.insert("sum".into(), json!(polys(&t.sum)));
    obj.insert("prod".into(), json!(polys(&t.prod)));
    obj.insert("neg".into(), json!(polys(&t.neg)));
    obj.insert("frob".into(), json!(polys(&t.frob)));
    obj.insert("delta".into(), json!(polys(&t.delta)));
    Value::Object(obj)
}

/// Reads a table without checking it; see [`WittTable::verify`].
pub fn table_from_json(v: &Value) -> Result<WittTable> {
    let triple = triple_from_json(v.get("triple").ok_or_else(|| parse_err("table needs \"triple\""))?)?;
    let n = u64_field(v, "n")? as usize;
    let ring = PolyRing::new(BaseRing::integral(triple.clone()));
    let polys = |key: &str| -> Result<Vec<MultiPoly>> {
        v.get(key)
            .and_then(Value::as_array)
            .ok_or_else(|| parse_err(format!("table needs {key:?}")))?
            .iter()
            .map(|p| poly_from_json(p, &ring))
            .collect()
    };
    Ok(WittTable {
        triple,
        n,
        sum: polys("sum")?,
        prod: polys("prod")?,
        neg: polys("neg")?,
        frob: polys("frob")?,
        delta: polys("delta")?,
    })
}

/// Pretty-printed canonical JSON with a trailing newline.
pub fn to_canonical_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

/// Where a table came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CacheOutcome {
    Built,
    Loaded,
    LoadedUnverified,
}

/// Tables stored as `<dir>/witt/<hash>.json`.
#[derive(Clone, Debug)]
pub struct TableCache {
    pub dir: PathBuf,
    pub trust: bool,
}

impl TableCache {
    pub fn new(dir: impl Into<PathBuf>, trust: bool) -> Self {
        TableCache { dir: dir.into(), trust }
    }

    pub fn path(&self, triple: &BaseTriple, n: usize) -> PathBuf {
        self.dir.join("witt").join(format!("{}.json", table_hash(triple, n)))
    }

    /// Loads the table (re-verifying unless trusted) or builds and stores
    /// it. A cached file that fails to parse or verify is an error, not a
    /// silent rebuild.
    pub fn get(&self, triple: Arc<BaseTriple>, n: usize, cap: u64) -> Result<(WittTable, CacheOutcome)> {
        let path = self.path(&triple, n);
        if path.is_file() {
            let v: Value = serde_json::from_str(&fs::read_to_string(&path)?)?;
            let table = table_from_json(&v)?;
            if *table.triple != *triple || table.n != n {
                return Err(Error::Invalid(format!("{} holds a different table", path.display())));
            }
            if self.trust {
                return Ok((table, CacheOutcome::LoadedUnverified));
            }
            table.verify()?;
            return Ok((table, CacheOutcome::Loaded));
        }
        let table = WittTable::build(triple, n, cap)?;
        self.store(&table)?;
        Ok((table, CacheOutcome::Built))
    }

    pub fn store(&self, table: &WittTable) -> Result<PathBuf> {
        let path = self.path(&table.triple, table.n);
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent)?;
        }
        let tmp = path.with_extension("json.tmp");
        fs::write(&tmp, to_canonical_string(&table_to_json(table)))?;
        fs::rename(&tmp, &path)?;
        Ok(path)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triple_round_trip() {
        for name in ["Z2", "GAUSS", "EISEN"] {
            let t = BaseTriple::named(name).unwrap();
            let back = triple_from_json(&triple_to_json(&t)).unwrap();
            assert_eq!(*back, *t);
        }
        let inline = triple_from_arg(r#"{"g":[0,1],"pi":[3],"q":3}"#).unwrap();
        assert_eq!(inline.p(), 3);
        assert!(triple_from_arg(r#"{"g":[0,1],"pi":[4],"q":4}"#).is_err());
    }

    #[test]
    fn poly_format_is_exponent_vectors() {
        let t = BaseTriple::named("Z2").unwrap();
        let r = PolyRing::new(BaseRing::integral(t));
        let x = JetVar::new("x", 0, 1);
        let p = r.sub(&r.pow(&r.var(x.clone()), 2), &r.from_i64(3));
        let v = poly_to_json(&p);
        assert_eq!(v, json!({"vars": [["x", 0, 1]], "terms": [[[2], [1]], [[0], [-3]]]}));
        assert_eq!(poly_from_json(&v, &r).unwrap(), p);
    }

    #[test]
    fn big_coefficients_survive() {
        let t = BaseTriple::named("Z2").unwrap();
        let r = PolyRing::new(BaseRing::integral(t));
        let big = r.pow(&r.from_i64(10), 30);
        let v = poly_to_json(&big);
        assert!(v["terms"][0][1][0].is_string());
        assert_eq!(poly_from_json(&v, &r).unwrap(), big);
    }

    #[test]
    fn parse_string_relations() {
        let v = json!({
            "base": {"triple": "Z2", "pi_power": null},
            "generators": ["x", "y"],
            "relations": ["x*y", "x^2 - 1", "-(x + 2)^2"]
        });
        let a = presentation_from_json(&v).unwrap();
        let r = a.poly_ring();
        let x = r.var(JetVar::new("x", 0, 0));
        assert_eq!(a.relations[1], r.sub(&r.pow(&x, 2), &r.one()));
        assert_eq!(a.relations[2], r.neg(&r.pow(&r.add(&x, &r.from_i64(2)), 2)));
        let back = presentation_from_json(&presentation_to_json(&a, 0)).unwrap();
        assert_eq!(back.relations, a.relations);
        assert!(parse_poly("x^", &r, &a.generators).is_err());
        assert!(parse_poly("z", &r, &a.generators).is_err());
    }

    #[test]
    fn cache_round_trip_and_tamper_detection() {
        let dir = tempfile::tempdir().unwrap();
        let cache = TableCache::new(dir.path(), false);
        let t = BaseTriple::named("GAUSS").unwrap();
        let (built, how) = cache.get(t.clone(), 1, 64).unwrap();
        assert_eq!(how, CacheOutcome::Built);
        let (loaded, how) = cache.get(t.clone(), 1, 64).unwrap();
        assert_eq!(how, CacheOutcome::Loaded);
        assert_eq!(loaded, built);

        let path = cache.path(&t, 1);
        let mut v: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
        v["sum"][1] = v["sum"][0].clone();
        fs::write(&path, v.to_string()).unwrap();
        assert!(cache.get(t.clone(), 1, 64).is_err());
        let trusting = TableCache::new(dir.path(), true);
        assert_eq!(trusting.get(t, 1, 64).unwrap().1, CacheOutcome::LoadedUnverified);
    }
}
