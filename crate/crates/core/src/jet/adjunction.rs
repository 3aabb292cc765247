//! The bijection `Hom_{R_0}(A, W_n(B)) = Hom_{R_n}(J_n A, B)` on finite `B`.

use std::collections::HashSet;
use std::sync::Arc;

use serde_json::json;

use crate::error::{Error, Result};
use crate::finite::FiniteRing;
use crate::hom::{enumerate_homs, CompiledRelations, Hom};
use crate::jet::pfamily::{t_var, PFamily};
use crate::jet::{jet_algebra, BaseSequence, JetPresentation};
use crate::poly::{CompiledPoly, MultiPoly};
use crate::presentation::AlgebraPresentation;
use crate::report::Report;
use crate::ring::Ring;
use crate::witt::{WittRing, WittTable};

/// Everything needed to move points across the adjunction for one
/// `(A, B, n)`.
pub struct Adjunction {
    pub jet: JetPresentation,
    pub witt: WittRing<FiniteRing>,
    pub b: FiniteRing,
    /// `S_{i-1}` in `T, ..., T^(i-1)`, for `i = 1..=n`.
    tails: Vec<CompiledPoly<u32>>,
    /// `P_i` in `T, ..., T^(i)`.
    ps: Vec<CompiledPoly<u32>>,
    source_relations: CompiledRelations<Vec<u32>>,
    jet_relations: CompiledRelations<u32>,
}

impl Adjunction {
    pub fn new(
        a: &AlgebraPresentation,
        seq: &BaseSequence,
        n: usize,
        b: &FiniteRing,
        table: Arc<WittTable>,
        family: &PFamily,
    ) -> Result<Self> {
        let triple = seq.triple().clone();
        let b = b.for_triple(&triple)?;
        let jet = jet_algebra(a, seq, n)?;
        let witt = WittRing::new(table, n, b.clone())?;
        let ring = family.ring();
        let tvars: Vec<_> = (0..=n as u32).map(t_var).collect();
        let tails = family.s[..n]
            .iter()
            .map(|s| ring.compile(s, &b, &tvars))
            .collect::<Result<Vec<_>>>()?;
        let ps = family.p[..=n]
            .iter()
            .map(|p| ring.compile(p, &b, &tvars))
            .collect::<Result<Vec<_>>>()?;
        let source_relations = CompiledRelations::new(a, &witt)?;
        let jet_relations = CompiledRelations::new(&jet.presentation, &b)?;
        Ok(Adjunction {
            jet,
            witt,
            b,
            tails,
            ps,
            source_relations,
            jet_relations,
        })
    }

    fn gens(&self) -> usize {
        self.jet.source.generators.len()
    }

    /// `Phi(g)`: solve `P_i(x^(0..i)) = b_i` upwards,
    /// `x^(i) = b_i - S_{i-1}(x, ..., x^(i-1))`.
    pub fn phi(&self, g: &Hom<Vec<u32>>) -> Result<Hom<u32>> {
        let n = self.jet.level;
        let k = self.gens();
        let mut images = vec![0u32; (n + 1) * k];
        for (gamma, w) in g.images.iter().enumerate() {
            let mut vals: Vec<u32> = Vec::with_capacity(n + 1);
            for i in 0..=n {
                let v = if i == 0 {
                    w[0]
                } else {
                    let tail = self.tails[i - 1].eval(&self.b, &vals);
                    self.b.sub(&w[i], &tail)
                };
                vals.push(v);
                images[i * k + gamma] = v;
            }
        }
        if let Some(idx) = self.jet_relations.first_failure(&self.b, &images) {
            return Err(Error::RelationViolation(format!(
                "Phi(g) does not kill jet relation {idx}"
            )));
        }
        Ok(Hom { images })
    }

    /// `Phi^{-1}(h)`: `x_gamma -> (h(P_0(x_gamma)), ..., h(P_n(x_gamma)))`.
    pub fn phi_inv(&self, h: &Hom<u32>) -> Result<Hom<Vec<u32>>> {
        let n = self.jet.level;
        let k = self.gens();
        let mut images = Vec::with_capacity(k);
        for gamma in 0..k {
            let jets: Vec<u32> = (0..=n).map(|i| h.images[i * k + gamma]).collect();
            images.push(self.ps.iter().map(|p| p.eval(&self.b, &jets)).collect::<Vec<u32>>());
        }
        if !self.source_relations.holds(&self.witt, &images) {
            return Err(Error::RelationViolation(
                "Phi^-1(h) does not kill the relations of A".into(),
            ));
        }
        Ok(Hom { images })
    }

    /// Checks the bijection by full enumeration of both sides, plus
    /// naturality against `exp_n` on a corpus of elements of `A`.
    pub fn check(&self, family: &PFamily, cap: u64) -> Result<Report> {
        let mut report = Report::new(format!(
            "adjunction n={} A={} B={}",
            self.jet.level,
            self.jet.source,
            self.b.name()
        ));
        let witt_side = enumerate_homs(&self.jet.source, &self.witt, cap)?;
        let jet_side = enumerate_homs(&self.jet.presentation, &self.b, cap)?;
        report.detail("witt_side", witt_side.len());
        report.detail("jet_side", jet_side.len());
        report.check(witt_side.len() == jet_side.len(), || {
            json!({"witt_side": witt_side.len(), "jet_side": jet_side.len()})
        });
        let jet_set: HashSet<&Hom<u32>> = jet_side.iter().collect();
        for g in &witt_side {
            let h = match self.phi(g) {
                Ok(h) => h,
                Err(e) => {
                    report.check(false, || json!({"g": g.images, "error": e.to_string()}));
                    continue;
                }
            };
            report.check(jet_set.contains(&h), || json!({"g": g.images, "phi_g_missing": h.images}));
            let back = self.phi_inv(&h);
            report.check(back.as_ref() == Ok(g), || json!({"g": g.images, "round_trip": format!("{back:?}")}));
        }
        for h in &jet_side {
            match self.phi_inv(h) {
                Ok(g) => {
                    let again = self.phi(&g);
                    report.check(again.as_ref() == Ok(h), || json!({"h": h.images, "round_trip": format!("{again:?}")}));
                }
                Err(e) => {
                    report.check(false, || json!({"h": h.images, "error": e.to_string()}));
                }
            }
        }
        self.check_naturality(family, &witt_side, &mut report)?;
        Ok(report)
    }

    /// For each `g` and each corpus element `a`, mapping `exp_n(a)` through
    /// `Phi(g)` componentwise must give `g(a)` computed in `W_n(B)`.
    fn check_naturality(&self, family: &PFamily, homs: &[Hom<Vec<u32>>], report: &mut Report) -> Result<()> {
        let src = self.jet.source.poly_ring();
        let gens = &self.jet.source.generators;
        let mut corpus: Vec<MultiPoly> = gens.iter().map(|g| src.var(g.clone())).collect();
        let all_sum = corpus.iter().fold(src.one(), |acc, x| src.add(&acc, x));
        let all_prod = corpus.iter().fold(src.one(), |acc, x| src.mul(&acc, x));
        corpus.push(all_sum);
        corpus.push(all_prod);
        if let Some(g0) = gens.first() {
            let x = src.var(g0.clone());
            corpus.push(src.sub(&src.pow(&x, 3), &src.from_i64(2)));
        }
        let jring = self.jet.presentation.poly_ring();
        for a in &corpus {
            let over_w = src.compile(a, &self.witt, gens)?;
            let exp = self.jet.exp(family, a)?;
            let comps = exp
                .iter()
                .map(|c| jring.compile(c, &self.b, &self.jet.presentation.generators))
                .collect::<Result<Vec<_>>>()?;
            for g in homs {
                let lhs = over_w.eval(&self.witt, &g.images);
                let h = self.phi(g)?;
                let rhs: Vec<u32> = comps.iter().map(|c| c.eval(&self.b, &h.images)).collect();
                report.check(lhs == rhs, || json!({"a": a.to_string(), "g": g.images, "g(a)": lhs, "Phi(g)(exp(a))": rhs}));
            }
        }
        Ok(())
    }
}

/// Truncated universal property of `J_* A`: a morphism of prolongation
/// sequences `(J_0 A -> J_1 A) -> (W_1(B) -> B)`, the target carrying
/// truncation and `Delta`, is the same as a map `A -> W_1(B)`.
///
/// Every pair `(h_0, h_1)` of homomorphisms compatible with `u` and `delta`
/// on generators is enumerated; each `h_0` must extend in exactly one way,
/// and compatibility is then confirmed on a corpus of non-generator
/// elements.
pub fn check_universal_property(
    a: &AlgebraPresentation,
    table: Arc<WittTable>,
    b: &FiniteRing,
    cap: u64,
) -> Result<Report> {
    let triple = table.triple.clone();
    let b = b.for_triple(&triple)?;
    let seq = BaseSequence::Constant(triple.clone());
    let j1 = jet_algebra(a, &seq, 1)?;
    let w1 = WittRing::new(table, 1, b.clone())?;
    let mut report = Report::new(format!("universal property A={a} B={}", b.name()));
    let level0 = enumerate_homs(a, &w1, cap)?;
    let level1 = enumerate_homs(&j1.presentation, &b, cap)?;
    let k = a.generators.len();
    let corpus = {
        let r = a.poly_ring();
        let xs: Vec<MultiPoly> = a.generators.iter().map(|g| r.var(g.clone())).collect();
        let mut c = Vec::new();
        if let Some(x) = xs.first() {
            c.push(r.add(&r.pow(x, 2), &r.from_i64(3)));
        }
        c.push(xs.iter().fold(r.one(), |acc, x| r.mul(&acc, x)));
        c.push(xs.iter().fold(r.from_i64(5), |acc, x| r.add(&acc, x)));
        c
    };
    let over_o = j1.ring_over_o();
    let src = a.poly_ring();
    let mut pairs = 0usize;
    for h0 in &level0 {
        let matches: Vec<&Hom<u32>> = level1
            .iter()
            .filter(|h1| {
                (0..k).all(|g| {
                    let w = &h0.images[g];
                    h1.images[g] == w[0] && h1.images[k + g] == w1.delta(w)[0]
                })
            })
            .collect();
        pairs += matches.len();
        report.check(matches.len() == 1, || json!({"h0": h0.images, "extensions": matches.len()}));
        for h1 in matches {
            for c in &corpus {
                let lifted = src.change_base(c, &over_o);
                let dc = over_o.q_delta(&lifted)?;
                let w = src.compile(c, &w1, &a.generators)?.eval(&w1, &h0.images);
                let jet_gens = &j1.presentation.generators;
                let via_jets = over_o.compile(&dc, &b, jet_gens)?.eval(&b, &h1.images);
                let u_ok = over_o.compile(&lifted, &b, jet_gens)?.eval(&b, &h1.images) == w[0];
                report.check(u_ok && via_jets == w1.delta(&w)[0], || {
                    json!({"h0": h0.images, "element": c.to_string()})
                });
            }
        }
    }
    report.detail("homs_A_W1B", level0.len());
    report.detail("sequence_morphisms", pairs);
    Ok(report)
}
