//! Jets commute with localization: `J_n(A_s) = (J_n A)_t` with
//! `t = s phi(s) ... phi^n(s)`.

use serde_json::json;

use crate::error::{Error, Result};
use crate::finite::FiniteRing;
use crate::hom::{enumerate_homs, CompiledRelations};
use crate::jet::{jet_algebra, BaseSequence, JetPresentation};
use crate::poly::{JetVar, MultiPoly, PolyRing};
use crate::presentation::AlgebraPresentation;
use crate::report::Report;
use crate::ring::Ring;

fn inverse_var() -> JetVar {
    JetVar::new("y", 0, 0)
}

fn denominator_var() -> JetVar {
    JetVar::new("z", 0, 0)
}

/// `A[y] / (relations, y s - 1)`.
pub fn localize(a: &AlgebraPresentation, s: &MultiPoly) -> Result<AlgebraPresentation> {
    let y = inverse_var();
    if a.generators.contains(&y) {
        return Err(Error::Invalid(format!("generator name {y} is reserved for 1/s")));
    }
    let ring = a.poly_ring();
    let mut generators = a.generators.clone();
    generators.push(y.clone());
    let mut relations = a.relations.clone();
    relations.push(ring.sub(&ring.mul(&ring.var(y), s), &ring.one()));
    AlgebraPresentation::new(a.base.clone(), generators, relations)
}

/// `s, phi(s), ..., phi^n(s)` over `O`.
fn phi_powers(ring: &PolyRing, s: &MultiPoly, n: usize) -> Vec<MultiPoly> {
    let mut out = vec![s.clone()];
    for _ in 0..n {
        let next = ring.phi(out.last().unwrap());
        out.push(next);
    }
    out
}

/// `(J_n A)[z] / (relations, z t - 1)`.
pub fn localized_jets(jet: &JetPresentation, s: &MultiPoly) -> Result<AlgebraPresentation> {
    let z = denominator_var();
    if jet.presentation.generators.iter().any(|g| g.family == z.family) {
        return Err(Error::Invalid(format!("generator name {z} is reserved for 1/t")));
    }
    let over_o = jet.ring_over_o();
    let lifted = jet.source.poly_ring().change_base(s, &over_o);
    let t = phi_powers(&over_o, &lifted, jet.level)
        .iter()
        .fold(over_o.one(), |acc, f| over_o.mul(&acc, f));
    let target = jet.presentation.poly_ring();
    let t = over_o.change_base(&t, &target);
    let mut generators = jet.presentation.generators.clone();
    generators.push(z.clone());
    let mut relations = jet.presentation.relations.clone();
    relations.push(target.sub(&target.mul(&target.var(z), &t), &target.one()));
    AlgebraPresentation::new(jet.presentation.base.clone(), generators, relations)
}

/// Compares `B`-points of `J_n(A_s)` and `(J_n A)_t`. A point `h` of the
/// former maps to `x^(i) -> h(x^(i))`, `z -> h(y phi(y) ... phi^n(y))`; the
/// image must be a point, the map injective and both sides of equal size.
pub fn localization_check(
    a: &AlgebraPresentation,
    s: &MultiPoly,
    seq: &BaseSequence,
    n: usize,
    b: &FiniteRing,
    cap: u64,
) -> Result<Report> {
    let b = b.for_triple(seq.triple())?;
    let a_s = localize(a, s)?;
    let jet_of_loc = jet_algebra(&a_s, seq, n)?;
    let jet = jet_algebra(a, seq, n)?;
    let loc_of_jet = localized_jets(&jet, s)?;
    let mut report = Report::new(format!("localization n={n} A={a} s={s} B={}", b.name()));

    let lhs = enumerate_homs(&jet_of_loc.presentation, &b, cap)?;
    let rhs = enumerate_homs(&loc_of_jet, &b, cap)?;
    report.detail("jets_of_localization", lhs.len());
    report.detail("localized_jets", rhs.len());
    report.check(lhs.len() == rhs.len(), || json!({"lhs": lhs.len(), "rhs": rhs.len()}));

    let over_o = jet.ring_over_o();
    let y = over_o.var(inverse_var());
    let z_image = phi_powers(&over_o, &y, n)
        .iter()
        .fold(over_o.one(), |acc, f| over_o.mul(&acc, f));
    let z_image = over_o.compile(&z_image, &b, &jet_of_loc.presentation.generators)?;
    let k = a_s.generators.len();
    let target_rels = CompiledRelations::new(&loc_of_jet, &b)?;
    let mut seen = std::collections::HashSet::new();
    for h in &lhs {
        let mut images: Vec<u32> = Vec::with_capacity((n + 1) * (k - 1) + 1);
        for i in 0..=n {
            images.extend_from_slice(&h.images[i * k..i * k + k - 1]);
        }
        images.push(z_image.eval(&b, &h.images));
        report.check(target_rels.holds(&b, &images), || json!({"point": h.images, "image": images}));
        let fresh = seen.insert(images.clone());
        report.check(fresh, || json!({"collision": images}));
    }
    Ok(report)
}
