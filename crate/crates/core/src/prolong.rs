//! pi-derivations and prolongation sequences.
//!
//! A prolongation `C -> C'` is a ring map `u` with a set map `delta`
//! satisfying
//!
//! ```text
//! delta(x + y) = delta(x) + delta(y) + C_pi(u(x), u(y))
//! delta(x y)   = u(x)^q delta(y) + u(y)^q delta(x) + pi delta(x) delta(y)
//! ```
//!
//! Concrete derivations are checked pointwise through [`PiDerivation`];
//! presented algebras carry `delta` on generators only ([`Prolongation`])
//! and extend it by structural recursion.

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use rand::{Rng as _, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::error::{Error, Result};
use crate::hom::{CompiledRelations, Hom};
use crate::number::{BaseRing, BaseTriple, NumberRingElement};
use crate::poly::{CompiledPoly, JetVar, MultiPoly, PolyRing};
use crate::presentation::AlgebraPresentation;
use crate::report::Report;
use crate::ring::{OAlgebra, Ring};
use crate::witt::table::{x_var, y_var};
use crate::witt::WittRing;

pub const DEFAULT_SAMPLE_PAIRS: usize = 100;

/// `C_pi(X, Y)` compiled against a target ring.
pub fn compiled_c_pi<T: OAlgebra>(triple: &Arc<BaseTriple>, target: &T) -> Result<CompiledPoly<T::Elem>> {
    let ring = PolyRing::new(BaseRing::integral(triple.clone()));
    let (x, y) = (x_var(0), y_var(0));
    let c = ring.c_pi(&ring.var(x.clone()), &ring.var(y.clone()))?;
    ring.compile(&c, target, &[x, y])
}

/// A pair `(u, delta)` between two concrete rings.
pub trait PiDerivation {
    type Source: Ring;
    type Target: OAlgebra;

    fn source(&self) -> &Self::Source;
    fn target(&self) -> &Self::Target;
    fn triple(&self) -> &Arc<BaseTriple>;
    fn u(&self, x: &<Self::Source as Ring>::Elem) -> <Self::Target as Ring>::Elem;
    fn delta(&self, x: &<Self::Source as Ring>::Elem) -> <Self::Target as Ring>::Elem;
}

/// Checks that `u` is a ring map and that `delta` obeys the sum and product
/// rules on every given pair.
pub fn check_pi_derivation<D: PiDerivation>(
    d: &D,
    pairs: &[(<D::Source as Ring>::Elem, <D::Source as Ring>::Elem)],
) -> Result<Report> {
    let s = d.source();
    let t = d.target();
    let q = d.triple().q();
    let pi = t.from_o(d.triple().pi());
    let c_pi = compiled_c_pi(d.triple(), t)?;
    let mut report = Report::new("pi-derivation");
    for (x, y) in pairs {
        let (ux, uy) = (d.u(x), d.u(y));
        let (dx, dy) = (d.delta(x), d.delta(y));
        let sum = s.add(x, y);
        let prod = s.mul(x, y);
        let ring_map = d.u(&sum) == t.add(&ux, &uy) && d.u(&prod) == t.mul(&ux, &uy);
        report.check(ring_map, || json!({"rule": "u ring map", "x": format!("{x:?}"), "y": format!("{y:?}")}));
        let expected_sum = t.add(&t.add(&dx, &dy), &c_pi.eval(t, &[ux.clone(), uy.clone()]));
        let got_sum = d.delta(&sum);
        report.check(got_sum == expected_sum, || {
            json!({"rule": "sum", "x": format!("{x:?}"), "y": format!("{y:?}"),
                   "delta(x+y)": format!("{got_sum:?}"), "expected": format!("{expected_sum:?}")})
        });
        let expected_prod = t.add(
            &t.add(&t.mul(&t.pow(&ux, q), &dy), &t.mul(&t.pow(&uy, q), &dx)),
            &t.mul(&pi, &t.mul(&dx, &dy)),
        );
        let got_prod = d.delta(&prod);
        report.check(got_prod == expected_prod, || {
            json!({"rule": "product", "x": format!("{x:?}"), "y": format!("{y:?}"),
                   "delta(xy)": format!("{got_prod:?}"), "expected": format!("{expected_prod:?}")})
        });
    }
    Ok(report)
}

/// All ordered pairs of a list.
pub fn all_pairs<E: Clone>(elements: &[E]) -> Vec<(E, E)> {
    elements
        .iter()
        .flat_map(|x| elements.iter().map(move |y| (x.clone(), y.clone())))
        .collect()
}

/// `count` pairs drawn uniformly with a seeded generator.
pub fn sampled_pairs<E: Clone>(elements: &[E], count: usize, seed: u64) -> Vec<(E, E)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let i = rng.gen_range(0..elements.len());
            let j = rng.gen_range(0..elements.len());
            (elements[i].clone(), elements[j].clone())
        })
        .collect()
}

/// Elements of `O` with power-basis coefficients in `[-bound, bound]`.
pub fn sample_o(triple: &BaseTriple, count: usize, bound: i64, seed: u64) -> Vec<NumberRingElement> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let coeffs: Vec<i64> = (0..triple.degree()).map(|_| rng.gen_range(-bound..=bound)).collect();
            NumberRingElement::from_i64s(&coeffs)
        })
        .collect()
}

/// `delta(x) = (x - x^q) / pi` on `O`, with `u = id`.
pub struct BaseDelta {
    ring: BaseRing,
}

impl BaseDelta {
    pub fn new(triple: Arc<BaseTriple>) -> Self {
        BaseDelta { ring: BaseRing::integral(triple) }
    }
}

impl PiDerivation for BaseDelta {
    type Source = BaseRing;
    type Target = BaseRing;

    fn source(&self) -> &BaseRing {
        &self.ring
    }
    fn target(&self) -> &BaseRing {
        &self.ring
    }
    fn triple(&self) -> &Arc<BaseTriple> {
        self.ring.triple()
    }
    fn u(&self, x: &NumberRingElement) -> NumberRingElement {
        x.clone()
    }
    fn delta(&self, x: &NumberRingElement) -> NumberRingElement {
        self.ring
            .triple()
            .delta(x)
            .expect("x - x^q is divisible by pi for a valid triple")
    }
}

/// `W_n(B) -> W_{n-1}(B)` with `u` the truncation and `delta = Delta`.
pub struct WittDelta<R: OAlgebra + Clone> {
    source: WittRing<R>,
    target: WittRing<R>,
}

impl<R: OAlgebra + Clone> WittDelta<R> {
    pub fn new(source: WittRing<R>) -> Result<Self> {
        if source.level() == 0 {
            return Err(Error::Invalid("Delta needs level at least 1".into()));
        }
        let target = source.lower()?;
        Ok(WittDelta { source, target })
    }
}

impl<R: OAlgebra + Clone> PiDerivation for WittDelta<R> {
    type Source = WittRing<R>;
    type Target = WittRing<R>;

    fn source(&self) -> &WittRing<R> {
        &self.source
    }
    fn target(&self) -> &WittRing<R> {
        &self.target
    }
    fn triple(&self) -> &Arc<BaseTriple> {
        &self.source.table().triple
    }
    fn u(&self, x: &Vec<R::Elem>) -> Vec<R::Elem> {
        self.source.truncate(x, self.source.level() - 1)
    }
    fn delta(&self, x: &Vec<R::Elem>) -> Vec<R::Elem> {
        self.source.delta(x)
    }
}

/// An arbitrary pair of maps on one ring; used for negative controls.
pub struct MapDelta<R: OAlgebra, U, D> {
    ring: R,
    triple: Arc<BaseTriple>,
    u: U,
    delta: D,
}

impl<R, U, D> MapDelta<R, U, D>
where
    R: OAlgebra,
    U: Fn(&R::Elem) -> R::Elem,
    D: Fn(&R::Elem) -> R::Elem,
{
    pub fn new(ring: R, triple: Arc<BaseTriple>, u: U, delta: D) -> Self {
        MapDelta { ring, triple, u, delta }
    }
}

impl<R, U, D> PiDerivation for MapDelta<R, U, D>
where
    R: OAlgebra,
    U: Fn(&R::Elem) -> R::Elem,
    D: Fn(&R::Elem) -> R::Elem,
{
    type Source = R;
    type Target = R;

    fn source(&self) -> &R {
        &self.ring
    }
    fn target(&self) -> &R {
        &self.ring
    }
    fn triple(&self) -> &Arc<BaseTriple> {
        &self.triple
    }
    fn u(&self, x: &R::Elem) -> R::Elem {
        (self.u)(x)
    }
    fn delta(&self, x: &R::Elem) -> R::Elem {
        (self.delta)(x)
    }
}

/// A prolongation out of a presented algebra `A`, given by `u` and `delta`
/// on generators. Values on other elements are recomputed on demand.
pub struct Prolongation<T: OAlgebra> {
    pub source: AlgebraPresentation,
    pub target: T,
    pub u_gen: Vec<T::Elem>,
    pub delta_gen: Vec<T::Elem>,
    c_pi: CompiledPoly<T::Elem>,
    pi: T::Elem,
    q: u64,
}

impl<T: OAlgebra> Prolongation<T> {
    pub fn new(source: AlgebraPresentation, target: T, u_gen: Vec<T::Elem>, delta_gen: Vec<T::Elem>) -> Result<Self> {
        let k = source.generators.len();
        if u_gen.len() != k || delta_gen.len() != k {
            return Err(Error::Invalid(format!(
                "prolongation data has {} u-images and {} delta-images for {k} generators",
                u_gen.len(),
                delta_gen.len()
            )));
        }
        let triple = source.base.triple().clone();
        let c_pi = compiled_c_pi(&triple, &target)?;
        let pi = target.from_o(triple.pi());
        let q = triple.q();
        Ok(Prolongation { source, target, u_gen, delta_gen, c_pi, pi, q })
    }

    fn add_pairs(&self, a: (T::Elem, T::Elem), b: (T::Elem, T::Elem)) -> (T::Elem, T::Elem) {
        let t = &self.target;
        let c = self.c_pi.eval(t, &[a.0.clone(), b.0.clone()]);
        (t.add(&a.0, &b.0), t.add(&t.add(&a.1, &b.1), &c))
    }

    fn mul_pairs(&self, a: &(T::Elem, T::Elem), b: &(T::Elem, T::Elem)) -> (T::Elem, T::Elem) {
        let t = &self.target;
        let d = t.add(
            &t.add(&t.mul(&t.pow(&a.0, self.q), &b.1), &t.mul(&t.pow(&b.0, self.q), &a.1)),
            &t.mul(&self.pi, &t.mul(&a.1, &b.1)),
        );
        (t.mul(&a.0, &b.0), d)
    }

    /// `(u(a), delta(a))` for `a` a polynomial in the generators: constants
    /// use `delta` of `O` on a lift, monomials the product rule, sums the
    /// sum rule.
    pub fn extend(&self, a: &MultiPoly) -> Result<(T::Elem, T::Elem)> {
        let t = &self.target;
        let triple = self.source.base.triple();
        let index: HashMap<&JetVar, usize> =
            self.source.generators.iter().enumerate().map(|(i, g)| (g, i)).collect();
        let mut acc = (t.zero(), t.zero());
        for (m, c) in a.terms() {
            let mut term = (t.from_o(c), t.from_o(&triple.delta(c)?));
            for (v, e) in m.factors() {
                let i = *index
                    .get(v)
                    .ok_or_else(|| Error::MissingAssignment(v.to_string()))?;
                let gen = (self.u_gen[i].clone(), self.delta_gen[i].clone());
                for _ in 0..*e {
                    term = self.mul_pairs(&term, &gen);
                }
            }
            acc = self.add_pairs(acc, term);
        }
        Ok(acc)
    }

    pub fn extend_delta(&self, a: &MultiPoly) -> Result<T::Elem> {
        Ok(self.extend(a)?.1)
    }

    pub fn apply_u(&self, a: &MultiPoly) -> Result<T::Elem> {
        Ok(self.extend(a)?.0)
    }

    /// Every relation must go to `(0, 0)` under `vanishes`, and `a` and
    /// `a + m r` must give the same value for sampled corpus elements `a`,
    /// multipliers `m` and relations `r`.
    pub fn check_well_defined(
        &self,
        vanishes: impl Fn(&T::Elem) -> bool,
        samples: usize,
        seed: u64,
    ) -> Result<Report> {
        let mut report = Report::new("delta well-defined").with_seed(seed);
        for (i, r) in self.source.relations.iter().enumerate() {
            let (u, d) = self.extend(r)?;
            report.check(vanishes(&u) && vanishes(&d), || {
                json!({"relation": i, "polynomial": r.to_string(), "u": format!("{u:?}"), "delta": format!("{d:?}")})
            });
        }
        if self.source.relations.is_empty() {
            return Ok(report);
        }
        let ring = self.source.poly_ring();
        let corpus = small_corpus(&ring, &self.source.generators);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = &self.target;
        for _ in 0..samples {
            let a = &corpus[rng.gen_range(0..corpus.len())];
            let m = &corpus[rng.gen_range(0..corpus.len())];
            let r = &self.source.relations[rng.gen_range(0..self.source.relations.len())];
            let b = ring.add(a, &ring.mul(m, r));
            let (ua, da) = self.extend(a)?;
            let (ub, db) = self.extend(&b)?;
            let ok = vanishes(&t.sub(&ua, &ub)) && vanishes(&t.sub(&da, &db));
            report.check(ok, || json!({"a": a.to_string(), "a + m r": b.to_string()}));
        }
        Ok(report)
    }

    /// Fails with `IllDefined` when the generator data does not respect the
    /// relations.
    pub fn ensure_well_defined(&self, vanishes: impl Fn(&T::Elem) -> bool) -> Result<()> {
        let report = self.check_well_defined(vanishes, DEFAULT_SAMPLE_PAIRS, 0)?;
        if report.pass {
            Ok(())
        } else {
            Err(Error::IllDefined(
                report.counterexample.map(|c| c.to_string()).unwrap_or_default(),
            ))
        }
    }
}

/// Generators, small sums and products and a couple of constants.
pub fn small_corpus(ring: &PolyRing, gens: &[JetVar]) -> Vec<MultiPoly> {
    let xs: Vec<MultiPoly> = gens.iter().map(|g| ring.var(g.clone())).collect();
    let mut out = vec![ring.one(), ring.from_i64(3), ring.from_i64(-2)];
    out.extend(xs.iter().cloned());
    for (i, a) in xs.iter().enumerate() {
        out.push(ring.add(&ring.pow(a, 2), &ring.from_i64(1)));
        for b in &xs[i..] {
            out.push(ring.mul(a, b));
            out.push(ring.sub(a, b));
        }
    }
    out
}

/// `a -> (u(a), delta(a))` as a map `A -> W_1(B)`, given by its generator
/// images.
pub fn prolongation_to_w1<R: OAlgebra + Clone>(p: &Prolongation<R>, w1: &WittRing<R>) -> Result<Hom<Vec<R::Elem>>> {
    if w1.level() != 1 {
        return Err(Error::Invalid("prolongations correspond to maps into W_1".into()));
    }
    let images: Vec<Vec<R::Elem>> = p
        .u_gen
        .iter()
        .zip(&p.delta_gen)
        .map(|(u, d)| vec![u.clone(), d.clone()])
        .collect();
    let rels = CompiledRelations::new(&p.source, w1)?;
    if !rels.holds(w1, &images) {
        return Err(Error::RelationViolation(
            "(u, delta) does not kill the relations in W_1(B)".into(),
        ));
    }
    Ok(Hom { images })
}

/// The inverse: a map `A -> W_1(B)` read as a prolongation `A -> B`.
pub fn w1_to_prolongation<R: OAlgebra + Clone>(
    source: &AlgebraPresentation,
    b: &R,
    g: &Hom<Vec<R::Elem>>,
) -> Result<Prolongation<R>> {
    let u = g.images.iter().map(|w| w[0].clone()).collect();
    let d = g.images.iter().map(|w| w[1].clone()).collect();
    Prolongation::new(source.clone(), b.clone(), u, d)
}

/// Checks the correspondence with `W_1(B)` for one prolongation: the
/// generator images define a map into `W_1(B)`, evaluating corpus elements
/// through it agrees with `(u, delta)`, and the inverse recovers the data.
pub fn check_w1_correspondence<R: OAlgebra + Clone>(p: &Prolongation<R>, w1: &WittRing<R>) -> Result<Report> {
    let mut report = Report::new("prolongation <-> W_1");
    let g = match prolongation_to_w1(p, w1) {
        Ok(g) => g,
        Err(e) => {
            report.check(false, || json!({"error": e.to_string()}));
            return Ok(report);
        }
    };
    let ring = p.source.poly_ring();
    for a in small_corpus(&ring, &p.source.generators) {
        let via_w = ring.compile(&a, w1, &p.source.generators)?.eval(w1, &g.images);
        let (u, d) = p.extend(&a)?;
        report.check(via_w == vec![u.clone(), d.clone()], || {
            json!({"a": a.to_string(), "W_1": format!("{via_w:?}"), "(u, delta)": format!("{:?}", (u, d))})
        });
    }
    let back = w1_to_prolongation(&p.source, &p.target, &g)?;
    report.check(back.u_gen == p.u_gen && back.delta_gen == p.delta_gen, || json!({"round_trip": "generator data changed"}));
    Ok(report)
}

/// A truncated sequence `C_0 -> C_1 -> ... -> C_N` of presented algebras.
/// Step `n` sends each generator of `C_n` to polynomials over `O` in the
/// generators of `C_{n+1}`.
#[derive(Clone, Debug)]
pub struct PresentedSequence {
    pub levels: Vec<AlgebraPresentation>,
    pub u: Vec<Vec<MultiPoly>>,
    pub delta: Vec<Vec<MultiPoly>>,
}

impl PresentedSequence {
    /// `O -> O -> ...`, no generators.
    pub fn constant(triple: Arc<BaseTriple>, length: usize) -> Self {
        let base = BaseRing::integral(triple);
        PresentedSequence {
            levels: vec![AlgebraPresentation::free(base, Vec::new()); length + 1],
            u: vec![Vec::new(); length],
            delta: vec![Vec::new(); length],
        }
    }

    /// `J_0 A -> J_1 A -> ... -> J_N A` with inclusions and
    /// `x^(i) -> x^(i+1)`.
    pub fn jets(a: &AlgebraPresentation, length: usize) -> Result<Self> {
        let triple = a.base.triple().clone();
        let seq = crate::jet::BaseSequence::Constant(triple.clone());
        let levels = (0..=length)
            .map(|n| crate::jet::jet_algebra(a, &seq, n).map(|j| j.presentation))
            .collect::<Result<Vec<_>>>()?;
        let over_o = PolyRing::new(BaseRing::integral(triple));
        let u = levels[..length]
            .iter()
            .map(|l| l.generators.iter().map(|g| over_o.var(g.clone())).collect())
            .collect();
        let delta = levels[..length]
            .iter()
            .map(|l| l.generators.iter().map(|g| over_o.var(g.prime())).collect())
            .collect();
        Ok(PresentedSequence { levels, u, delta })
    }

    pub fn len(&self) -> usize {
        self.u.len()
    }

    pub fn is_empty(&self) -> bool {
        self.u.is_empty()
    }

    fn over_o(&self) -> PolyRing {
        PolyRing::new(BaseRing::integral(self.levels[0].base.triple().clone()))
    }

    /// Step `n` as a [`Prolongation`] into polynomials over `O`.
    pub fn step(&self, n: usize) -> Result<Prolongation<PolyRing>> {
        let src = self.levels[n].clone();
        let src = AlgebraPresentation {
            base: BaseRing::integral(src.base.triple().clone()),
            ..src
        };
        let (_, lifted) = self.levels[n].lifted_relations();
        let src = AlgebraPresentation { relations: lifted, ..src };
        Prolongation::new(src, self.over_o(), self.u[n].clone(), self.delta[n].clone())
    }

    /// Relations of `C_{n+1}` lifted to `O`, for literal membership tests.
    fn relation_set(&self, n: usize) -> HashSet<MultiPoly> {
        let (_, lifted) = self.levels[n].lifted_relations();
        lifted.into_iter().collect()
    }
}

/// Axioms and the compatibility `u_{n+1} delta_n = delta_{n+1} u_n`.
///
/// Each step is checked symbolically: relations of `C_n` must be sent to
/// zero or to a relation of `C_{n+1}` (literally). The derivation axioms
/// then hold because extension is by the sum and product rules; they are
/// replayed on a corpus as a cross-check. Compatibility is checked as a
/// literal polynomial identity on generators and the corpus.
pub fn check_sequence(seq: &PresentedSequence) -> Result<Report> {
    let mut report = Report::new(format!("prolongation sequence of length {}", seq.len()));
    let over_o = seq.over_o();
    let steps = (0..seq.len()).map(|n| seq.step(n)).collect::<Result<Vec<_>>>()?;
    for (n, step) in steps.iter().enumerate() {
        let rels = seq.relation_set(n + 1);
        let vanishes = |p: &MultiPoly| p.is_zero() || rels.contains(p) || rels.contains(&over_o.neg(p));
        let mut part = step.check_well_defined(vanishes, 0, 0)?;
        part.name = format!("step {n} well-defined");
        report.push(part);
        let corpus = small_corpus(&step.source.poly_ring(), &step.source.generators);
        let mut axioms = Report::new(format!("step {n} axioms"));
        for a in &corpus {
            for b in &corpus {
                let (ua, da) = step.extend(a)?;
                let (ub, db) = step.extend(b)?;
                let sum = step.extend(&over_o.add(a, b))?;
                let expected = over_o.add(&over_o.add(&da, &db), &over_o.c_pi(&ua, &ub)?);
                axioms.check(sum.1 == expected, || json!({"rule": "sum", "x": a.to_string(), "y": b.to_string()}));
            }
        }
        report.push(axioms);
    }
    for n in 0..seq.len().saturating_sub(1) {
        let (lower, upper) = (&steps[n], &steps[n + 1]);
        let mut part = Report::new(format!("compatibility at level {n}"));
        let corpus = small_corpus(&lower.source.poly_ring(), &lower.source.generators);
        for a in &corpus {
            let lhs = upper.apply_u(&lower.extend_delta(a)?)?;
            let rhs = upper.extend_delta(&lower.apply_u(a)?)?;
            part.check(lhs == rhs, || {
                json!({"element": a.to_string(), "u(delta a)": lhs.to_string(), "delta(u a)": rhs.to_string()})
            });
        }
        report.push(part);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite::FiniteRing;
    use crate::jet::pfamily::t_var;
    use crate::ring::Enumerable;
    use crate::witt::WittTable;

    fn z2() -> Arc<BaseTriple> {
        BaseTriple::named("Z2").unwrap()
    }

    #[test]
    fn base_delta_passes() {
        for name in ["Z2", "Z3", "GAUSS", "EISEN"] {
            let t = BaseTriple::named(name).unwrap();
            let sample = sample_o(&t, 12, 6, 1);
            let r = check_pi_derivation(&BaseDelta::new(t), &all_pairs(&sample)).unwrap();
            assert!(r.pass, "{name}: {}", r.to_text());
        }
    }

    #[test]
    fn witt_delta_on_w2_f2_passes() {
        let table = Arc::new(WittTable::build(z2(), 2, 64).unwrap());
        let w2 = WittRing::new(table, 2, FiniteRing::named("F2").unwrap()).unwrap();
        let elems = w2.elements();
        let d = WittDelta::new(w2).unwrap();
        let r = check_pi_derivation(&d, &all_pairs(&elems)).unwrap();
        assert!(r.pass, "{}", r.to_text());
        assert_eq!(r.checked, 3 * 64);
    }

    #[test]
    fn identity_is_not_a_pi_derivation_on_f2() {
        let f2 = FiniteRing::named("F2").unwrap();
        let d = MapDelta::new(f2.clone(), z2(), |x: &u32| *x, |x: &u32| *x);
        let r = check_pi_derivation(&d, &[(1, 1)]).unwrap();
        assert!(!r.pass);
        // delta(1 * 1) = 1, but u(1)^2 delta(1) + u(1)^2 delta(1) + 2 delta(1)^2 = 0
        let rhs = f2.add(&f2.add(&1, &1), &f2.mul(&f2.from_i64(2), &1));
        assert_ne!(d.delta(&f2.mul(&1, &1)), rhs);
    }

    #[test]
    fn extension_matches_q_delta() {
        let t = z2();
        let ring = PolyRing::new(BaseRing::integral(t.clone()));
        let gens: Vec<JetVar> = (0..3).map(t_var).collect();
        let a = AlgebraPresentation::free(BaseRing::integral(t), gens.clone());
        let u = gens.iter().map(|g| ring.var(g.clone())).collect();
        let d = gens.iter().map(|g| ring.var(g.prime())).collect();
        let p = Prolongation::new(a, ring.clone(), u, d).unwrap();
        let x = ring.var(t_var(0));
        let y = ring.var(t_var(1));
        for f in [
            ring.pow(&x, 2),
            ring.add(&ring.mul(&x, &y), &ring.from_i64(5)),
            ring.sub(&ring.pow(&y, 3), &ring.mul(&ring.from_i64(2), &x)),
        ] {
            assert_eq!(p.extend_delta(&f).unwrap(), ring.q_delta(&f).unwrap(), "{f}");
        }
    }

    #[test]
    fn three_goes_to_three_minus_three() {
        let t = z2();
        let o = BaseRing::integral(t.clone());
        let a = AlgebraPresentation::free(o.clone(), Vec::new());
        let p = Prolongation::new(a, o.clone(), Vec::new(), Vec::new()).unwrap();
        let ring = p.source.poly_ring();
        let (u, d) = p.extend(&ring.from_i64(3)).unwrap();
        assert_eq!((u, d), (o.from_i64(3), o.from_i64(-3)));
        let table = Arc::new(WittTable::build(t, 1, 64).unwrap());
        let w1 = WittRing::new(table, 1, o.clone()).unwrap();
        assert_eq!(w1.from_i64(3), vec![o.from_i64(3), o.from_i64(-3)]);
        assert!(check_w1_correspondence(&p, &w1).unwrap().pass);
    }

    #[test]
    fn ill_defined_data_is_caught() {
        let t = z2();
        let base = BaseRing::integral(t.clone());
        let ring = PolyRing::new(base.clone());
        let x = JetVar::new("x", 0, 0);
        let a = AlgebraPresentation::new(base, vec![x.clone()], vec![ring.pow(&ring.var(x), 2)]).unwrap();
        let z4 = FiniteRing::named("Z4").unwrap();
        let ok = |e: &u32| *e == 0;
        // u(x) = 1 does not kill x^2
        let bad_u = Prolongation::new(a.clone(), z4.clone(), vec![1], vec![0]).unwrap();
        assert!(matches!(bad_u.ensure_well_defined(ok), Err(Error::IllDefined(_))));
        // delta(x^2) = 2^2 + 2^2 + 2 = 2 in Z/4 when delta(x) = 1
        let bad_delta = Prolongation::new(a.clone(), z4.clone(), vec![2], vec![1]).unwrap();
        assert!(bad_delta.ensure_well_defined(ok).is_err());
        let good = Prolongation::new(a, z4, vec![2], vec![0]).unwrap();
        assert!(good.check_well_defined(ok, 50, 3).unwrap().pass);
    }

    #[test]
    fn sequences() {
        let t = z2();
        assert!(check_sequence(&PresentedSequence::constant(t.clone(), 2)).unwrap().pass);
        let base = BaseRing::integral(t);
        let ring = PolyRing::new(base.clone());
        let x = JetVar::new("x", 0, 0);
        let a = AlgebraPresentation::new(base, vec![x.clone()], vec![ring.pow(&ring.var(x.clone()), 2)]).unwrap();
        let jets = PresentedSequence::jets(&a, 2).unwrap();
        let r = check_sequence(&jets).unwrap();
        assert!(r.pass, "{}", r.to_text());
        let mut broken = jets.clone();
        let x1 = x.with_order(1);
        let pos = broken.levels[1].generators.iter().position(|g| *g == x1).unwrap();
        broken.delta[1][pos] = ring.add(&ring.var(x.with_order(2)), &ring.var(x));
        assert!(!check_sequence(&broken).unwrap().pass);
    }

}
