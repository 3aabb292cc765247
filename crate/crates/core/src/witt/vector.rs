//! Truncated Witt vectors over an arbitrary `O`-algebra, evaluated from a
//! universal table.

use std::sync::Arc;

use num_bigint::BigInt;

use crate::error::Result;
use crate::number::NumberRingElement;
use crate::poly::CompiledPoly;
use crate::ring::{Enumerable, OAlgebra, Ring};
use crate::witt::table::{x_var, y_var, WittTable};

/// `W_n(B)`: vectors of `n + 1` components in `B`.
#[derive(Clone)]
pub struct WittRing<R: OAlgebra> {
    table: Arc<WittTable>,
    level: usize,
    base: R,
    sum: Vec<CompiledPoly<R::Elem>>,
    prod: Vec<CompiledPoly<R::Elem>>,
    neg: Vec<CompiledPoly<R::Elem>>,
    frob: Vec<CompiledPoly<R::Elem>>,
    delta: Vec<CompiledPoly<R::Elem>>,
    pi_powers: Vec<R::Elem>,
}

impl<R: OAlgebra> std::fmt::Debug for WittRing<R> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "W_{}[{}]", self.level, self.table.triple.describe())
    }
}

impl<R: OAlgebra + Clone> WittRing<R> {
    pub fn new(table: Arc<WittTable>, level: usize, base: R) -> Result<Self> {
        assert!(level <= table.n, "table of level {} used at level {level}", table.n);
        let ring = crate::poly::PolyRing::new(crate::number::BaseRing::integral(table.triple.clone()));
        let xs: Vec<_> = (0..=level).map(x_var).collect();
        let xys: Vec<_> = (0..=level).map(x_var).chain((0..=level).map(y_var)).collect();
        let compile = |ps: &[crate::poly::MultiPoly], vars: &[crate::poly::JetVar]| {
            ps.iter()
                .map(|p| ring.compile(p, &base, vars))
                .collect::<Result<Vec<_>>>()
        };
        let sum = compile(&table.sum[..=level], &xys)?;
        let prod = compile(&table.prod[..=level], &xys)?;
        let neg = compile(&table.neg[..=level], &xs)?;
        let frob = compile(&table.frob[..level], &xs)?;
        let delta = compile(&table.delta[..level], &xs)?;
        let pi_powers = (0..=level as u32)
            .map(|k| base.from_o(&table.triple.pi_pow(k)))
            .collect();
        Ok(WittRing {
            table,
            level,
            base,
            sum,
            prod,
            neg,
            frob,
            delta,
            pi_powers,
        })
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn base(&self) -> &R {
        &self.base
    }

    pub fn table(&self) -> &Arc<WittTable> {
        &self.table
    }

    /// `W_k(B)` for `k <= level`, sharing the table.
    pub fn at_level(&self, k: usize) -> Result<Self> {
        Self::new(self.table.clone(), k, self.base.clone())
    }

    pub fn lower(&self) -> Result<Self> {
        self.at_level(self.level - 1)
    }

    fn pair(&self, a: &[R::Elem], b: &[R::Elem]) -> Vec<R::Elem> {
        let mut v = Vec::with_capacity(a.len() + b.len());
        v.extend_from_slice(a);
        v.extend_from_slice(b);
        v
    }

    pub fn ghost(&self, x: &[R::Elem]) -> Vec<R::Elem> {
        let q = self.table.triple.q();
        let b = &self.base;
        (0..=self.level)
            .map(|i| {
                let mut acc = b.zero();
                for (j, xj) in x.iter().enumerate().take(i + 1) {
                    let mut pw = xj.clone();
                    for _ in 0..(i - j) {
                        pw = b.pow(&pw, q);
                    }
                    acc = b.add(&acc, &b.mul(&self.pi_powers[j], &pw));
                }
                acc
            })
            .collect()
    }

    pub fn teichmuller(&self, b: &R::Elem) -> Vec<R::Elem> {
        let mut v = vec![self.base.zero(); self.level + 1];
        v[0] = b.clone();
        v
    }

    /// `V: W_{n-1}(B) -> W_n(B)`, the shift `(x_0, ...) -> (0, x_0, ...)`.
    pub fn verschiebung(&self, x: &[R::Elem]) -> Vec<R::Elem> {
        let mut v = Vec::with_capacity(self.level + 1);
        v.push(self.base.zero());
        v.extend(x.iter().take(self.level).cloned());
        v.resize(self.level + 1, self.base.zero());
        v
    }

    /// `F: W_n(B) -> W_{n-1}(B)`.
    pub fn frobenius(&self, x: &[R::Elem]) -> Vec<R::Elem> {
        self.frob.iter().map(|p| p.eval(&self.base, x)).collect()
    }

    /// `Delta: W_n(B) -> W_{n-1}(B)`.
    pub fn delta(&self, x: &[R::Elem]) -> Vec<R::Elem> {
        self.delta.iter().map(|p| p.eval(&self.base, x)).collect()
    }

    pub fn truncate(&self, x: &[R::Elem], k: usize) -> Vec<R::Elem> {
        x[..=k].to_vec()
    }

    /// Multiplication by an element of `O`.
    pub fn scalar(&self, c: &NumberRingElement, x: &[R::Elem]) -> Vec<R::Elem> {
        self.mul(&self.from_o(c), &x.to_vec())
    }

    /// Applies a ring map `B -> C` componentwise.
    pub fn map_components<C, F>(&self, x: &[R::Elem], f: F) -> Vec<C>
    where
        F: Fn(&R::Elem) -> C,
    {
        x.iter().map(f).collect()
    }
}

impl<R: OAlgebra + Clone> Ring for WittRing<R> {
    type Elem = Vec<R::Elem>;

    fn zero(&self) -> Self::Elem {
        vec![self.base.zero(); self.level + 1]
    }

    fn one(&self) -> Self::Elem {
        self.teichmuller(&self.base.one())
    }

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let inputs = self.pair(a, b);
        self.sum.iter().map(|p| p.eval(&self.base, &inputs)).collect()
    }

    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        self.neg.iter().map(|p| p.eval(&self.base, a)).collect()
    }

    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let inputs = self.pair(a, b);
        self.prod.iter().map(|p| p.eval(&self.base, &inputs)).collect()
    }

    fn from_int(&self, n: &BigInt) -> Self::Elem {
        self.from_o(&self.table.triple.from_int(n))
    }

    fn is_zero(&self, a: &Self::Elem) -> bool {
        a.iter().all(|x| self.base.is_zero(x))
    }
}

impl<R: OAlgebra + Clone> OAlgebra for WittRing<R> {
    /// The structure map `O -> W_n(O) -> W_n(B)`.
    fn from_o(&self, c: &NumberRingElement) -> Self::Elem {
        let triple = &self.table.triple;
        let c = if c.0.len() == 1 && triple.degree() != 1 {
            triple.from_int(&c.0[0])
        } else {
            c.clone()
        };
        let comps = self
            .table
            .structure_vector_at(&c, self.level)
            .expect("ghost inversion of a constant vector is integral");
        comps.iter().map(|x| self.base.from_o(x)).collect()
    }
}

impl<R: OAlgebra + Enumerable + Clone> Enumerable for WittRing<R> {
    fn cardinality(&self) -> u128 {
        self.base
            .cardinality()
            .saturating_pow(self.level as u32 + 1)
    }

    fn elements(&self) -> Vec<Self::Elem> {
        let base = self.base.elements();
        let mut out: Vec<Vec<R::Elem>> = vec![Vec::new()];
        for _ in 0..=self.level {
            let mut next = Vec::with_capacity(out.len() * base.len());
            for prefix in &out {
                for b in &base {
                    let mut v = prefix.clone();
                    v.push(b.clone());
                    next.push(v);
                }
            }
            out = next;
        }
        out
    }
}
