//! Drinfeld's comparison map from p-typical Witt vectors to
//! `(pi', q')`-typical ones over `F_q'`-algebras.
//!
//! With `q' = p^r` and `c = p / pi'`, the map is pinned down by
//! `u([b]) = [b]`, `u(F^r x) = F(u(x))` and `u(V x) = c V(u(F^(r-1) x))`.
//! Writing `x = sum_i V^i [x_i]`, the last rule together with `FV = p`
//! and `F[b] = [b^p]` determines every `u(V^i [b])` recursively.

use crate::error::{Error, Result};
use crate::number::{BaseTriple, NumberRingElement};
use crate::ring::{OAlgebra, Ring};
use crate::witt::vector::WittRing;

pub struct DrinfeldMap<R: OAlgebra + Clone> {
    /// `W_{p,p,n}(B)`.
    source: WittRing<R>,
    /// `W_{pi',q',k}(B)` for `k = 0..=n'`.
    targets: Vec<WittRing<R>>,
    p: u64,
    r: u32,
    c: NumberRingElement,
    p_elem: NumberRingElement,
}

impl<R: OAlgebra + Clone> DrinfeldMap<R> {
    /// `source` must be a p-typical Witt ring (`O = Z`, `pi = q = p`) and
    /// `target` a Witt ring over the same `B` for a triple with residue
    /// characteristic `p`. The target level must be at most
    /// `(n + 1) e - 1` for the source level `n`.
    pub fn new(source: WittRing<R>, target: WittRing<R>) -> Result<Self> {
        let st = source.table().triple.clone();
        let tt = target.table().triple.clone();
        if st.degree() != 1 || st.q() != st.p() || st.pi().0[0] != num_bigint::BigInt::from(st.p()) {
            return Err(Error::Invalid("source must be the p-typical triple".into()));
        }
        if tt.p() != st.p() {
            return Err(Error::Invalid("source and target residue characteristics differ".into()));
        }
        let max_level = (source.level() + 1) * tt.e() as usize - 1;
        if target.level() > max_level {
            return Err(Error::Invalid(format!(
                "target level {} exceeds (n+1)e-1 = {max_level}",
                target.level()
            )));
        }
        let base = source.base();
        let p = st.p();
        if !base.is_zero(&base.from_int(&p.into())) {
            return Err(Error::NotCharP(p));
        }
        let p_elem = tt.from_u64(p);
        let c = tt.exact_div_pi(&p_elem)?;
        let targets = (0..=target.level())
            .map(|k| target.at_level(k))
            .collect::<Result<Vec<_>>>()?;
        Ok(DrinfeldMap {
            source,
            targets,
            p,
            r: tt.h(),
            c,
            p_elem,
        })
    }

    pub fn source(&self) -> &WittRing<R> {
        &self.source
    }

    pub fn target(&self) -> &WittRing<R> {
        self.targets.last().unwrap()
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    /// `pi / pi'` with `pi = p`, as an element of the target `O'`.
    pub fn c(&self) -> &NumberRingElement {
        &self.c
    }

    pub fn target_triple(&self) -> &BaseTriple {
        &self.target().table().triple
    }

    /// `u(V^i [b])` in the target ring of level `level`.
    fn image_of_digit(&self, i: usize, b: &R::Elem, level: usize) -> Vec<R::Elem> {
        let w = &self.targets[level];
        if i == 0 {
            return w.teichmuller(b);
        }
        if level == 0 {
            return w.zero();
        }
        let lower = &self.targets[level - 1];
        let r = self.r as usize;
        let inner = if i >= r {
            let y = self.image_of_digit(i - r, b, level - 1);
            self.times_p_power(lower, &y, r - 1)
        } else {
            let base = self.source.base();
            let bp = base.pow(b, self.p.pow((r - i) as u32));
            self.times_p_power(lower, &lower.teichmuller(&bp), i - 1)
        };
        w.scalar(&self.c, &w.verschiebung(&inner))
    }

    fn times_p_power(&self, w: &WittRing<R>, x: &[R::Elem], k: usize) -> Vec<R::Elem> {
        let mut y = x.to_vec();
        for _ in 0..k {
            y = w.scalar(&self.p_elem, &y);
        }
        y
    }

    /// `u(x)` at the full target level.
    pub fn apply(&self, x: &[R::Elem]) -> Vec<R::Elem> {
        self.apply_at(x, self.targets.len() - 1)
    }

    /// `u(x)` truncated to target level `level`; `x` may have any length.
    pub fn apply_at(&self, x: &[R::Elem], level: usize) -> Vec<R::Elem> {
        let w = &self.targets[level];
        let mut acc = w.zero();
        for (i, b) in x.iter().enumerate() {
            if self.source.base().is_zero(b) {
                continue;
            }
            acc = w.add(&acc, &self.image_of_digit(i, b, level));
        }
        acc
    }

    pub fn target_at(&self, level: usize) -> &WittRing<R> {
        &self.targets[level]
    }
}
