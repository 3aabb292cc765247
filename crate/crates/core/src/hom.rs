//! Brute-force enumeration of algebra homomorphisms into finite rings.

use crate::error::{Error, Result};
use crate::poly::CompiledPoly;
use crate::presentation::AlgebraPresentation;
use crate::ring::{Enumerable, OAlgebra, Ring};

pub const DEFAULT_SIZE_CAP: u64 = 1_000_000;

/// A homomorphism out of a presented algebra, given by the images of the
/// generators in declaration order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Hom<E> {
    pub images: Vec<E>,
}

/// Relations compiled against a target ring, grouped by the number of
/// leading generators they depend on.
pub struct CompiledRelations<E> {
    by_depth: Vec<Vec<CompiledPoly<E>>>,
}

impl<E: Clone> CompiledRelations<E> {
    pub fn new<R: OAlgebra<Elem = E>>(pres: &AlgebraPresentation, target: &R) -> Result<Self> {
        check_base(pres, target)?;
        let ring = pres.poly_ring();
        let k = pres.generators.len();
        let mut by_depth = vec![Vec::new(); k + 1];
        for r in &pres.relations {
            let compiled = ring.compile(r, target, &pres.generators)?;
            by_depth[compiled.arity()].push(compiled);
        }
        Ok(CompiledRelations { by_depth })
    }

    /// Whether all relations vanish at the given generator images.
    pub fn holds<R: Ring<Elem = E>>(&self, target: &R, images: &[E]) -> bool {
        self.by_depth
            .iter()
            .flatten()
            .all(|r| target.is_zero(&r.eval(target, images)))
    }

    /// The first relation index (in depth order) failing at `images`.
    pub fn first_failure<R: Ring<Elem = E>>(&self, target: &R, images: &[E]) -> Option<usize> {
        self.by_depth
            .iter()
            .flatten()
            .position(|r| !target.is_zero(&r.eval(target, images)))
    }
}

/// A quotient base `O/pi^k` only acts on targets killed by `pi^k`.
pub fn check_base<R: OAlgebra>(pres: &AlgebraPresentation, target: &R) -> Result<()> {
    if let Some(k) = pres.base.pi_power() {
        let pik = pres.base.triple().pi_pow(k);
        if !target.is_zero(&target.from_o(&pik)) {
            return Err(Error::Invalid(format!(
                "target is not an algebra over O/pi^{k}"
            )));
        }
    }
    Ok(())
}

pub fn search_space<R: Enumerable>(pres: &AlgebraPresentation, target: &R) -> u128 {
    target
        .cardinality()
        .saturating_pow(pres.generators.len() as u32)
}

/// Every generator assignment under which all relations vanish, in
/// lexicographic order of the element enumeration.
pub fn enumerate_homs<R>(
    pres: &AlgebraPresentation,
    target: &R,
    cap: u64,
) -> Result<Vec<Hom<R::Elem>>>
where
    R: OAlgebra + Enumerable,
{
    let space = search_space(pres, target);
    if space > cap as u128 {
        return Err(Error::SizeCap {
            needed: space.to_string(),
            cap,
        });
    }
    let rels = CompiledRelations::new(pres, target)?;
    let elements = target.elements();
    let k = pres.generators.len();
    let mut out = Vec::new();
    if k == 0 {
        if rels.holds(target, &[]) {
            out.push(Hom { images: Vec::new() });
        }
        return Ok(out);
    }
    let zero = target.zero();
    let mut images = vec![zero; k];
    let mut idx = vec![0usize; k];
    // Depth-first search, pruning as soon as a relation's generators are
    // all assigned.
    let mut depth = 0;
    loop {
        if idx[depth] == elements.len() {
            if depth == 0 {
                break;
            }
            idx[depth] = 0;
            depth -= 1;
            idx[depth] += 1;
            continue;
        }
        images[depth] = elements[idx[depth]].clone();
        let ok = rels.by_depth[depth + 1]
            .iter()
            .all(|r| target.is_zero(&r.eval(target, &images)))
            && (depth > 0 || rels.by_depth[0].iter().all(|r| target.is_zero(&r.eval(target, &images))));
        if ok {
            if depth + 1 == k {
                out.push(Hom {
                    images: images.clone(),
                });
                idx[depth] += 1;
            } else {
                depth += 1;
            }
        } else {
            idx[depth] += 1;
        }
    }
    Ok(out)
}

/// Whether the assignment kills every relation.
pub fn is_hom<R: OAlgebra>(pres: &AlgebraPresentation, target: &R, images: &[R::Elem]) -> Result<bool> {
    Ok(CompiledRelations::new(pres, target)?.holds(target, images))
}
