//! Greenberg algebras of `R = O~/pi^(me)` and the comparison with jets.
//!
//! For a `k'`-algebra `B` the sections are
//! `R(B) = W_{m-1}(B) + W_{m-1}(B) pi + ... + W_{m-1}(B) pi^(e-1)`
//! with p-typical Witt vectors and `pi^e` rewritten through the Eisenstein
//! relation. The Greenberg transform `gr(A)` represents `B -> Hom_R(A, R(B))`.

use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde_json::json;

use crate::error::{Error, Result};
use crate::finite::FiniteRing;
use crate::hom::{enumerate_homs, Hom};
use crate::jet::adjunction::Adjunction;
use crate::jet::{BaseSequence, PFamily};
use crate::number::{BaseRing, BaseTriple, NumberRingElement};
use crate::poly::{JetVar, PolyRing};
use crate::presentation::AlgebraPresentation;
use crate::report::Report;
use crate::ring::{Enumerable, OAlgebra, Ring};
use crate::witt::{DrinfeldMap, WittRing, WittTable};

/// How elements of `O~` act on `R(B)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoefficientMap {
    /// `O~ = Z`, `pi = p`.
    Integer,
    /// `O~ = Z[t]/(E)` with `E` Eisenstein and `pi = t`.
    Uniformizer,
    /// `O~ = Z[t]/(g)` unramified with `pi = p`; `t` acts through the
    /// Teichmüller lift of its residue.
    Teichmuller,
}

#[derive(Clone, Debug)]
pub struct GreenbergContext {
    pub triple: Arc<BaseTriple>,
    pub m: usize,
    pub e: usize,
    pub p: u64,
    /// `c_0, ..., c_(e-1)` with `E = pi^e + sum c_i pi^i`.
    pub eisenstein: Vec<BigInt>,
    pub coefficients: CoefficientMap,
    /// p-typical table of level `m - 1`.
    pub witt_table: Arc<WittTable>,
}

fn is_t(x: &NumberRingElement) -> bool {
    x.0.len() >= 2 && x.0[1].is_one() && x.0.iter().enumerate().all(|(i, c)| i == 1 || c.is_zero())
}

impl GreenbergContext {
    pub fn new(triple: Arc<BaseTriple>, m: usize, cap: u64) -> Result<Self> {
        if m == 0 {
            return Err(Error::Invalid("Greenberg length m must be at least 1".into()));
        }
        let p = triple.p();
        let e = triple.e() as usize;
        let d = triple.degree();
        let pi = triple.pi();
        let p_big = BigInt::from(p);
        let (coefficients, eisenstein) = if d == 1 {
            if pi.0[0] != p_big {
                return Err(Error::Invalid("for O~ = Z the uniformizer must be p".into()));
            }
            (CoefficientMap::Integer, vec![-p_big.clone()])
        } else if e == 1 && *pi == triple.from_u64(p) {
            (CoefficientMap::Teichmuller, vec![-p_big.clone()])
        } else if e == d && is_t(pi) {
            let g = triple.g();
            let p2 = &p_big * &p_big;
            let eisenstein_ok = g[..e].iter().all(|c| c.is_multiple_of(&p_big)) && !g[0].is_multiple_of(&p2);
            if !eisenstein_ok {
                return Err(Error::Invalid(format!("{} is not Eisenstein at {p}", triple.describe())));
            }
            (CoefficientMap::Uniformizer, g[..e].to_vec())
        } else {
            return Err(Error::Invalid(format!(
                "{} is neither unramified with pi = p nor Eisenstein with pi = t",
                triple.describe()
            )));
        };
        let witt_table = Arc::new(WittTable::build(BaseTriple::p_typical(p)?, m - 1, cap)?);
        Ok(GreenbergContext {
            triple,
            m,
            e,
            p,
            eisenstein,
            coefficients,
            witt_table,
        })
    }

    /// `R = O~/pi^(me)`.
    pub fn base_ring(&self) -> BaseRing {
        BaseRing::quotient(self.triple.clone(), (self.m * self.e) as u32)
    }

    /// `k' = O~/pi`.
    pub fn residue(&self) -> BaseRing {
        BaseRing::quotient(self.triple.clone(), 1)
    }

    pub fn sections<R: OAlgebra + Clone>(&self, base: R) -> Result<GreenbergRing<R>> {
        GreenbergRing::new(Arc::new(self.clone()), base)
    }

    pub fn describe(&self) -> String {
        format!("{} m={} e={}", self.triple.describe(), self.m, self.e)
    }
}

/// `R(B)`; elements are `e` Witt vectors of length `m`.
#[derive(Clone)]
pub struct GreenbergRing<R: OAlgebra + Clone> {
    ctx: Arc<GreenbergContext>,
    witt: WittRing<R>,
    /// `[t]` for the Teichmüller coefficient map.
    teich_t: Option<Vec<R::Elem>>,
}

impl<R: OAlgebra + Clone> std::fmt::Debug for GreenbergRing<R> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "R({})", self.ctx.describe())
    }
}

impl<R: OAlgebra + Clone> GreenbergRing<R> {
    pub fn new(ctx: Arc<GreenbergContext>, base: R) -> Result<Self> {
        let witt = WittRing::new(ctx.witt_table.clone(), ctx.m - 1, base)?;
        let p = witt.base().from_i64(ctx.p as i64);
        if !witt.base().is_zero(&p) {
            return Err(Error::NotCharP(ctx.p));
        }
        let teich_t = match ctx.coefficients {
            CoefficientMap::Teichmuller => {
                let t = witt.base().from_o(&ctx.triple.t());
                Some(witt.teichmuller(&t))
            }
            _ => None,
        };
        Ok(GreenbergRing { ctx, witt, teich_t })
    }

    pub fn context(&self) -> &GreenbergContext {
        &self.ctx
    }

    pub fn witt(&self) -> &WittRing<R> {
        &self.witt
    }

    /// `pi^i` times the Witt vector `w`.
    pub fn monomial(&self, w: Vec<R::Elem>, i: usize) -> Vec<Vec<R::Elem>> {
        let mut out = self.zero();
        out[i] = w;
        out
    }
}

impl<R: OAlgebra + Clone> Ring for GreenbergRing<R> {
    type Elem = Vec<Vec<R::Elem>>;

    fn zero(&self) -> Self::Elem {
        vec![self.witt.zero(); self.ctx.e]
    }

    fn one(&self) -> Self::Elem {
        self.monomial(self.witt.one(), 0)
    }

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        a.iter().zip(b).map(|(x, y)| self.witt.add(x, y)).collect()
    }

    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        a.iter().map(|x| self.witt.neg(x)).collect()
    }

    /// Convolution in `pi`, then `pi^k -> -sum c_i pi^(k-e+i)` from the top.
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let e = self.ctx.e;
        let w = &self.witt;
        let mut prod = vec![w.zero(); 2 * e - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                prod[i + j] = w.add(&prod[i + j], &w.mul(x, y));
            }
        }
        for k in (e..2 * e - 1).rev() {
            let top = std::mem::replace(&mut prod[k], w.zero());
            for (i, c) in self.ctx.eisenstein.iter().enumerate() {
                let term = w.mul(&w.from_int(c), &top);
                prod[k - e + i] = w.sub(&prod[k - e + i], &term);
            }
        }
        prod.truncate(e);
        prod
    }

    fn from_int(&self, n: &BigInt) -> Self::Elem {
        self.monomial(self.witt.from_int(n), 0)
    }

    fn is_zero(&self, a: &Self::Elem) -> bool {
        a.iter().all(|x| self.witt.is_zero(x))
    }
}

impl<R: OAlgebra + Clone> OAlgebra for GreenbergRing<R> {
    fn from_o(&self, c: &NumberRingElement) -> Self::Elem {
        if c.0.len() == 1 {
            return self.from_int(&c.0[0]);
        }
        let w = &self.witt;
        match self.ctx.coefficients {
            CoefficientMap::Integer => self.from_int(&c.0[0]),
            CoefficientMap::Uniformizer => c.0.iter().map(|x| w.from_int(x)).collect(),
            CoefficientMap::Teichmuller => {
                let t = self.teich_t.as_ref().expect("Teichmüller coefficients need [t]");
                let mut acc = w.zero();
                for x in c.0.iter().rev() {
                    acc = w.add(&w.mul(&acc, t), &w.from_int(x));
                }
                self.monomial(acc, 0)
            }
        }
    }
}

impl<R: OAlgebra + Enumerable + Clone> Enumerable for GreenbergRing<R> {
    fn cardinality(&self) -> u128 {
        self.witt.cardinality().saturating_pow(self.ctx.e as u32)
    }

    fn elements(&self) -> Vec<Self::Elem> {
        let slots = self.witt.elements();
        let mut out: Vec<Self::Elem> = vec![Vec::new()];
        for _ in 0..self.ctx.e {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    slots.iter().map(move |s| {
                        let mut v = prefix.clone();
                        v.push(s.clone());
                        v
                    })
                })
                .collect();
        }
        out
    }
}

/// `gr(A)` over `k'`, with `coordinates[gamma][i][j]` the `j`-th Witt
/// component of the `pi^i` slot of generator `gamma`.
#[derive(Clone, Debug)]
pub struct GreenbergTransform {
    pub presentation: AlgebraPresentation,
    pub coordinates: Vec<Vec<Vec<JetVar>>>,
}

impl GreenbergTransform {
    /// A point of `gr(A)` as the corresponding point of `A` in `R(B)`.
    pub fn section<E: Clone>(&self, h: &Hom<E>) -> Hom<Vec<Vec<E>>> {
        let index: HashMap<&JetVar, usize> = self
            .presentation
            .generators
            .iter()
            .enumerate()
            .map(|(i, g)| (g, i))
            .collect();
        let images = self
            .coordinates
            .iter()
            .map(|slots| {
                slots
                    .iter()
                    .map(|comps| comps.iter().map(|v| h.images[index[v]].clone()).collect())
                    .collect()
            })
            .collect();
        Hom { images }
    }
}

fn coordinate(g: &JetVar, i: usize, j: usize) -> JetVar {
    JetVar::new(&format!("{}_{i}_{j}", g.family), g.gamma, 0)
}

/// Evaluates each relation of `A` on symbolic sections and keeps the
/// nonzero Witt components as relations over `k'`.
pub fn greenberg_transform(a: &AlgebraPresentation, ctx: &GreenbergContext) -> Result<GreenbergTransform> {
    if !a.base.same_as(&ctx.base_ring()) {
        return Err(Error::Invalid(format!(
            "algebra is over {} but the Greenberg base is {}",
            a.base.describe(),
            ctx.base_ring().describe()
        )));
    }
    let k = ctx.residue();
    let ring = PolyRing::new(k.clone());
    let sections = ctx.sections(ring.clone())?;
    let coordinates: Vec<Vec<Vec<JetVar>>> = a
        .generators
        .iter()
        .map(|g| {
            (0..ctx.e)
                .map(|i| (0..ctx.m).map(|j| coordinate(g, i, j)).collect())
                .collect()
        })
        .collect();
    let symbolic: Vec<Vec<Vec<_>>> = coordinates
        .iter()
        .map(|slots| {
            slots
                .iter()
                .map(|comps| comps.iter().map(|v| ring.var(v.clone())).collect())
                .collect()
        })
        .collect();
    let src = a.poly_ring();
    let mut relations = Vec::new();
    for f in &a.relations {
        let value = src.compile(f, &sections, &a.generators)?.eval(&sections, &symbolic);
        relations.extend(value.into_iter().flatten().filter(|r| !r.is_zero()));
    }
    let generators = coordinates.iter().flatten().flatten().cloned().collect();
    Ok(GreenbergTransform {
        presentation: AlgebraPresentation::new(k, generators, relations)?,
        coordinates,
    })
}

/// `u~(sum w_i pi^i) = sum u(w_i) pi^i` into `W_{pi,q,me-1}(B)`.
pub struct DrinfeldTilde<R: OAlgebra + Clone> {
    pub sections: GreenbergRing<R>,
    pub u: DrinfeldMap<R>,
    pi_powers: Vec<Vec<R::Elem>>,
}

impl<R: OAlgebra + Clone> DrinfeldTilde<R> {
    pub fn new(sections: GreenbergRing<R>, target_table: Arc<WittTable>) -> Result<Self> {
        let ctx = sections.context().clone();
        if *target_table.triple != *ctx.triple {
            return Err(Error::Invalid("target Witt table is for a different triple".into()));
        }
        let base = sections.witt().base().clone();
        let level = ctx.m * ctx.e - 1;
        let target = WittRing::new(target_table, level, base)?;
        let u = DrinfeldMap::new(sections.witt().clone(), target)?;
        let t = u.target();
        let pi_powers = (0..ctx.e as u32).map(|i| t.from_o(&ctx.triple.pi_pow(i))).collect();
        Ok(DrinfeldTilde { sections, u, pi_powers })
    }

    pub fn target(&self) -> &WittRing<R> {
        self.u.target()
    }

    pub fn apply(&self, x: &[Vec<R::Elem>]) -> Vec<R::Elem> {
        let t = self.u.target();
        let mut acc = t.zero();
        for (w, pi_i) in x.iter().zip(&self.pi_powers) {
            acc = t.add(&acc, &t.mul(pi_i, &self.u.apply(w)));
        }
        acc
    }
}

/// The point map `Hom(gr(A), B) -> Hom(J_{me-1} A, B)`,
/// `h -> Phi(u~ . section(h))`, for each test ring, plus the adjunction
/// count `|Hom_R(A, R(B))| = |Hom(gr(A), B)|`.
///
/// Bijectivity is required when `B` is perfect, and for every `B` when
/// `q = p` and `e = 1`. Elsewhere the outcome is recorded, not judged.
pub fn comparison_v(a: &AlgebraPresentation, ctx: &GreenbergContext, rings: &[FiniteRing], cap: u64) -> Result<Report> {
    if rings.is_empty() {
        return Err(Error::Invalid("no test rings given".into()));
    }
    let gr = greenberg_transform(a, ctx)?;
    let n = ctx.m * ctx.e - 1;
    let triple = ctx.triple.clone();
    let table = Arc::new(WittTable::build(triple.clone(), n, cap.min(u32::MAX as u64))?);
    let family = PFamily::build(triple.clone(), n, cap.min(u32::MAX as u64))?;
    let seq = BaseSequence::Truncated { triple: triple.clone(), top: (ctx.m * ctx.e) as u32 };
    let always_bijective = triple.q() == triple.p() && ctx.e == 1;
    let mut report = Report::new(format!("greenberg comparison {} A={a}", ctx.describe()));
    report.detail("gr_relations", gr.presentation.relations.len());
    if ctx.m == 1 && ctx.e == 1 {
        report.push(check_identity_case(a, ctx, &gr)?);
    }
    for b in rings {
        let b = b.for_triple(&triple)?;
        let mut part = Report::new(format!("B={}", b.name()));
        let sections = ctx.sections(b.clone())?;
        let gr_points = enumerate_homs(&gr.presentation, &b, cap)?;
        let a_points = enumerate_homs(a, &sections, cap)?;
        part.detail("gr_points", gr_points.len());
        part.detail("R(B)_points", a_points.len());
        part.check(gr_points.len() == a_points.len(), || {
            json!({"gr_points": gr_points.len(), "R(B)_points": a_points.len()})
        });
        let tilde = DrinfeldTilde::new(sections.clone(), table.clone())?;
        let adj = Adjunction::new(a, &seq, n, &b, table.clone(), &family)?;
        let jet_points = enumerate_homs(&adj.jet.presentation, &b, cap)?;
        part.detail("jet_points", jet_points.len());
        let mut images: HashMap<Vec<u32>, Vec<u32>> = HashMap::new();
        let mut well_defined = true;
        let mut collision = None;
        for h in &gr_points {
            let g = gr.section(h);
            let ug = Hom { images: g.images.iter().map(|x| tilde.apply(x)).collect() };
            match adj.phi(&ug) {
                Ok(v) => {
                    if let Some(prev) = images.insert(v.images.clone(), h.images.clone()) {
                        collision.get_or_insert((prev, h.images.clone(), v.images));
                    }
                }
                Err(_) => {
                    well_defined = false;
                }
            }
        }
        let injective = collision.is_none() && well_defined;
        let surjective = jet_points.iter().all(|j| images.contains_key(&j.images));
        let perfect = b.is_perfect();
        part.detail("well_defined", well_defined);
        part.detail("injective", injective);
        part.detail("surjective", surjective);
        part.detail("perfect", perfect);
        let witness = collision
            .as_ref()
            .map(|(x, y, v)| json!({"gr_points": [x, y], "same_image": v}));
        if let Some(w) = &witness {
            part.detail("witness", w.clone());
        }
        if perfect || always_bijective {
            part.check(well_defined && injective && surjective, || {
                witness.clone().unwrap_or(json!({"well_defined": well_defined, "surjective": surjective}))
            });
        }
        report.push(part);
    }
    Ok(report)
}

/// For `m = e = 1`, `gr(A)` is `A` over `k'` with `x -> x_0_0`, and the
/// jet side `J_0 A` is the same presentation.
fn check_identity_case(a: &AlgebraPresentation, ctx: &GreenbergContext, gr: &GreenbergTransform) -> Result<Report> {
    let mut report = Report::new("m = e = 1 gives the identity");
    let reduced = a.change_base(ctx.residue());
    let renamed = reduced.rename(|g| coordinate(g, 0, 0));
    report.check(renamed.generators == gr.presentation.generators, || {
        json!({"generators": format!("{:?}", gr.presentation.generators)})
    });
    report.check(renamed.relations == gr.presentation.relations, || {
        json!({"expected": renamed.to_string(), "gr": gr.presentation.to_string()})
    });
    Ok(report)
}

/// Ring axioms and the ring-map property of `u~` on all pairs of `R(B)`.
pub fn check_sections(ctx: &GreenbergContext, b: &FiniteRing) -> Result<Report> {
    let b = b.for_triple(&ctx.triple)?;
    let sections = ctx.sections(b.clone())?;
    let elems = sections.elements();
    let mut report = Report::new(format!("sections {} B={}", ctx.describe(), b.name()));
    for a in &elems {
        for b in &elems {
            for c in &elems {
                let v = crate::ring::ring_axiom_violation(&sections, a, b, c);
                report.check(v.is_none(), || json!({"axiom": v, "a": format!("{a:?}"), "b": format!("{b:?}"), "c": format!("{c:?}")}));
            }
        }
    }
    let n = ctx.m * ctx.e - 1;
    let table = Arc::new(WittTable::build(ctx.triple.clone(), n, u32::MAX as u64)?);
    let tilde = DrinfeldTilde::new(sections.clone(), table)?;
    let t = tilde.target();
    for x in &elems {
        for y in &elems {
            let ux = tilde.apply(x);
            let uy = tilde.apply(y);
            let ok = tilde.apply(&sections.add(x, y)) == t.add(&ux, &uy)
                && tilde.apply(&sections.mul(x, y)) == t.mul(&ux, &uy);
            report.check(ok, || json!({"x": format!("{x:?}"), "y": format!("{y:?}")}));
        }
    }
    Ok(report)
}
