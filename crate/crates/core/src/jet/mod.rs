//! Arithmetic jet algebras `J_n A` and the maps around them.

pub mod adjunction;
pub mod localization;
pub mod pfamily;

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::number::{BaseRing, BaseTriple};
use crate::poly::{JetVar, MultiPoly, PolyRing};
use crate::presentation::AlgebraPresentation;
use crate::ring::Ring;

pub use pfamily::PFamily;

/// The base prolongation sequence `R_0 -> R_1 -> ...`.
#[derive(Clone, Debug)]
pub enum BaseSequence {
    /// `O -> O -> ...` with `delta(x) = (x - x^q) / pi`.
    Constant(Arc<BaseTriple>),
    /// `O/pi^k -> O/pi^(k-1) -> ...`: reduction maps and the induced
    /// pi-derivations.
    Truncated { triple: Arc<BaseTriple>, top: u32 },
}

impl BaseSequence {
    pub fn triple(&self) -> &Arc<BaseTriple> {
        match self {
            BaseSequence::Constant(t) => t,
            BaseSequence::Truncated { triple, .. } => triple,
        }
    }

    /// `R_i`.
    pub fn ring(&self, i: usize) -> Result<BaseRing> {
        match self {
            BaseSequence::Constant(t) => Ok(BaseRing::integral(t.clone())),
            BaseSequence::Truncated { triple, top } => {
                if i as u32 >= *top {
                    return Err(Error::Invalid(format!(
                        "R_{i} of the sequence O/pi^{top} -> ... would be zero"
                    )));
                }
                Ok(BaseRing::quotient(triple.clone(), top - i as u32))
            }
        }
    }

    pub fn describe(&self) -> String {
        match self {
            BaseSequence::Constant(t) => format!("constant {}", t.describe()),
            BaseSequence::Truncated { triple, top } => {
                format!("O/pi^{top} -> O/pi^{} -> ... over {}", top - 1, triple.describe())
            }
        }
    }
}

/// `J_n A = R_n[x, ..., x^(n)] / (f, delta f, ..., delta^n f)`.
#[derive(Clone, Debug)]
pub struct JetPresentation {
    pub level: usize,
    pub source: AlgebraPresentation,
    pub sequence: BaseSequence,
    pub presentation: AlgebraPresentation,
    /// `relation_index[k] = (i, j)` when relation `k` is `delta^i f_j`.
    pub relation_index: Vec<(usize, usize)>,
}

fn check_source(a: &AlgebraPresentation) -> Result<()> {
    if a.generators.iter().any(|g| g.order != 0) {
        return Err(Error::Invalid(
            "jet algebras need generators of jet order 0".into(),
        ));
    }
    Ok(())
}

/// Generators `x^(i)_gamma` in order-major order.
pub fn jet_generators(gens: &[JetVar], n: usize) -> Vec<JetVar> {
    (0..=n as u32)
        .flat_map(|i| gens.iter().map(move |g| g.with_order(i)))
        .collect()
}

/// Builds `J_n A`. Relations are lifted to `O`, differentiated there with
/// `q_delta` and reduced into `R_n`; the result does not depend on the
/// lift.
pub fn jet_algebra(a: &AlgebraPresentation, seq: &BaseSequence, n: usize) -> Result<JetPresentation> {
    check_source(a)?;
    let r0 = seq.ring(0)?;
    if !a.base.same_as(&r0) {
        return Err(Error::Invalid(format!(
            "algebra is over {} but the sequence starts at {}",
            a.base.describe(),
            r0.describe()
        )));
    }
    let rn = seq.ring(n)?;
    let (over_o, lifted) = a.lifted_relations();
    let target = PolyRing::new(rn.clone());
    let mut relations = Vec::new();
    let mut relation_index = Vec::new();
    let mut current = lifted;
    for i in 0..=n {
        for (j, f) in current.iter().enumerate() {
            relations.push(over_o.change_base(f, &target));
            relation_index.push((i, j));
        }
        if i < n {
            current = current
                .iter()
                .map(|f| over_o.q_delta(f))
                .collect::<Result<_>>()?;
        }
    }
    Ok(JetPresentation {
        level: n,
        source: a.clone(),
        sequence: seq.clone(),
        presentation: AlgebraPresentation {
            base: rn,
            generators: jet_generators(&a.generators, n),
            relations,
        },
        relation_index,
    })
}

impl JetPresentation {
    pub fn ring_over_o(&self) -> PolyRing {
        PolyRing::new(BaseRing::integral(self.sequence.triple().clone()))
    }

    /// `exp_n(a) = (P_0(a), ..., P_n(a))` with components in `R_n[x, ..., x^(n)]`.
    pub fn exp(&self, family: &PFamily, a: &MultiPoly) -> Result<Vec<MultiPoly>> {
        let over_o = self.ring_over_o();
        let src = self.source.poly_ring();
        let a = src.change_base(a, &over_o);
        let comps = exp_over_o(&over_o, family, &a, self.level)?;
        let target = self.presentation.poly_ring();
        Ok(comps.iter().map(|c| over_o.change_base(c, &target)).collect())
    }

    /// The special fiber: coefficients reduced modulo pi.
    pub fn reduce_mod_pi(&self) -> AlgebraPresentation {
        let k = BaseRing::quotient(self.sequence.triple().clone(), 1);
        self.presentation.change_base(k)
    }
}

/// `P_i(a, delta a, ..., delta^i a)` over `O`, for `i = 0..=n`.
pub fn exp_over_o(ring: &PolyRing, family: &PFamily, a: &MultiPoly, n: usize) -> Result<Vec<MultiPoly>> {
    if family.level() < n {
        return Err(Error::Invalid(format!(
            "P-family of level {} used at level {n}",
            family.level()
        )));
    }
    let mut deltas = vec![a.clone()];
    for _ in 0..n {
        let next = ring.q_delta(deltas.last().unwrap())?;
        deltas.push(next);
    }
    let map: HashMap<JetVar, MultiPoly> = deltas
        .iter()
        .enumerate()
        .map(|(k, d)| (pfamily::t_var(k as u32), d.clone()))
        .collect();
    Ok(family.p[..=n]
        .iter()
        .map(|p| ring.substitute(p, &map))
        .collect())
}

/// `phi(a) = a^q + pi delta(a)`, over `O`.
pub fn phi_map(ring: &PolyRing, a: &MultiPoly) -> Result<MultiPoly> {
    let q = ring.base().triple().q();
    let d = ring.q_delta(a)?;
    Ok(ring.add(&ring.pow(a, q), &ring.scale(&d, &ring.pi())))
}

/// `J_n A` in the coordinates `y^(i) = P_i(x)`.
#[derive(Clone, Debug)]
pub struct AltPresentation {
    pub presentation: AlgebraPresentation,
    /// `y^(i)_gamma -> P_i(x_gamma)`.
    pub y_in_x: HashMap<JetVar, MultiPoly>,
    /// `x^(i)_gamma -> y^(i)_gamma - S_{i-1}(...)`, solved upwards.
    pub x_in_y: HashMap<JetVar, MultiPoly>,
}

pub fn p_coordinate(v: &JetVar) -> JetVar {
    JetVar {
        family: Arc::from(format!("P{}", v.family).as_str()),
        gamma: v.gamma,
        order: v.order,
    }
}

/// Rewrites `J_n A` with generators `P_i(x_gamma)` and relations
/// `P_i(f_j)`, which generate the same ideal.
pub fn alt_presentation(jet: &JetPresentation, family: &PFamily) -> Result<AltPresentation> {
    let n = jet.level;
    let over_o = jet.ring_over_o();
    let mut y_in_x = HashMap::new();
    let mut x_in_y: HashMap<JetVar, MultiPoly> = HashMap::new();
    for g in &jet.source.generators {
        let comps = exp_over_o(&over_o, family, &over_o.var(g.clone()), n)?;
        for (i, c) in comps.into_iter().enumerate() {
            y_in_x.insert(p_coordinate(&g.with_order(i as u32)), c);
        }
        for i in 0..=n {
            let x_i = g.with_order(i as u32);
            let y_i = over_o.var(p_coordinate(&x_i));
            let expr = if i == 0 {
                y_i
            } else {
                let tail = substitute_t(&over_o, &family.s[i - 1], g, i);
                let tail_in_y = over_o.substitute(&tail, &x_in_y);
                over_o.sub(&y_i, &tail_in_y)
            };
            x_in_y.insert(x_i, expr);
        }
    }
    let (_, lifted) = jet.source.lifted_relations();
    let target = jet.presentation.poly_ring();
    let mut relations = Vec::new();
    for f in &lifted {
        let comps = exp_over_o(&over_o, family, f, n)?;
        for c in comps {
            let in_y = over_o.substitute(&c, &x_in_y);
            relations.push(over_o.change_base(&in_y, &target));
        }
    }
    let generators = jet
        .presentation
        .generators
        .iter()
        .map(p_coordinate)
        .collect();
    let to_target = |m: HashMap<JetVar, MultiPoly>| {
        m.into_iter()
            .map(|(k, v)| (k, over_o.change_base(&v, &target)))
            .collect::<HashMap<_, _>>()
    };
    Ok(AltPresentation {
        presentation: AlgebraPresentation {
            base: jet.presentation.base.clone(),
            generators,
            relations,
        },
        y_in_x: to_target(y_in_x),
        x_in_y: to_target(x_in_y),
    })
}

/// A polynomial in `T, T', ...` rewritten in the jets of `g` up to order `n`.
pub fn substitute_t(ring: &PolyRing, p: &MultiPoly, g: &JetVar, n: usize) -> MultiPoly {
    let map: HashMap<JetVar, MultiPoly> = (0..=n as u32)
        .map(|k| (pfamily::t_var(k), ring.var(g.with_order(k))))
        .collect();
    ring.substitute(p, &map)
}

impl AltPresentation {
    /// Substituting one coordinate system into the other and back gives the
    /// identity on every generator.
    pub fn round_trip_ok(&self, ring: &PolyRing) -> bool {
        let xs_ok = self.x_in_y.iter().all(|(x, e)| ring.substitute(e, &self.y_in_x) == ring.var(x.clone()));
        let ys_ok = self.y_in_x.iter().all(|(y, e)| ring.substitute(e, &self.x_in_y) == ring.var(y.clone()));
        xs_ok && ys_ok
    }
}
