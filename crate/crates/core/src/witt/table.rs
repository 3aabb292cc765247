//! Universal Witt polynomials, obtained by inverting the ghost map over the
//! torsion-free ring `O[X, Y]`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::number::{BaseRing, BaseTriple, NumberRingElement};
use crate::poly::{JetVar, MultiPoly, PolyRing};
use crate::ring::Ring;

/// Default bound on `q^n`: polynomial degrees grow like `q^n`.
pub const DEFAULT_FEASIBILITY_CAP: u64 = 64;

pub fn x_var(j: usize) -> JetVar {
    JetVar::new(&format!("X{j}"), 0, 0)
}

pub fn y_var(j: usize) -> JetVar {
    JetVar::new(&format!("Y{j}"), 0, 0)
}

/// The polynomials defining the ring operations of `W_n` for one triple.
///
/// A table of level `n` also serves every lower level: component `i` of each
/// operation only involves inputs of index at most `i` (at most `i + 1` for
/// Frobenius and `Delta`).
#[derive(Clone, Debug, PartialEq)]
pub struct WittTable {
    pub triple: Arc<BaseTriple>,
    pub n: usize,
    pub sum: Vec<MultiPoly>,
    pub prod: Vec<MultiPoly>,
    pub neg: Vec<MultiPoly>,
    /// `n` polynomials: Frobenius `W_n -> W_{n-1}`.
    pub frob: Vec<MultiPoly>,
    /// `n` polynomials: `Delta: W_n -> W_{n-1}` with
    /// `F(x) = x^q + pi Delta(x)` in `W_{n-1}`.
    pub delta: Vec<MultiPoly>,
}

/// Polynomial arithmetic over `O` specialised to ghost computations.
pub struct GhostCalculus {
    pub ring: PolyRing,
    q: u64,
    pi_powers: Vec<NumberRingElement>,
}

impl GhostCalculus {
    pub fn new(triple: Arc<BaseTriple>, n: usize) -> Self {
        let pi_powers = (0..=n as u32 + 1).map(|k| triple.pi_pow(k)).collect();
        let q = triple.q();
        GhostCalculus {
            ring: PolyRing::new(BaseRing::integral(triple)),
            q,
            pi_powers,
        }
    }

    /// `w_i(c) = sum_j pi^j c_j^(q^(i-j))`.
    pub fn ghost_component(&self, comps: &[MultiPoly], i: usize) -> MultiPoly {
        let r = &self.ring;
        let mut acc = r.zero();
        for (j, c) in comps.iter().enumerate().take(i + 1) {
            let mut pw = c.clone();
            for _ in 0..(i - j) {
                pw = r.pow(&pw, self.q);
            }
            acc = r.add(&acc, &r.scale(&pw, &self.pi_powers[j]));
        }
        acc
    }

    pub fn ghost(&self, comps: &[MultiPoly]) -> Vec<MultiPoly> {
        (0..comps.len()).map(|i| self.ghost_component(comps, i)).collect()
    }

    /// Solves `w(c) = rhs` triangularly. Each step divides by `pi^i`; a
    /// failed division means the right-hand side is not a ghost vector.
    pub fn invert_ghost(&self, rhs: &[MultiPoly]) -> Result<Vec<MultiPoly>> {
        let r = &self.ring;
        // chains[j][k] = c_j^(q^k)
        let mut chains: Vec<Vec<MultiPoly>> = Vec::with_capacity(rhs.len());
        let mut out = Vec::with_capacity(rhs.len());
        for (i, target) in rhs.iter().enumerate() {
            let mut rest = target.clone();
            for (j, chain) in chains.iter_mut().enumerate() {
                let k = i - j;
                while chain.len() <= k {
                    let next = r.pow(chain.last().unwrap(), self.q);
                    chain.push(next);
                }
                rest = r.sub(&rest, &r.scale(&chain[k], &self.pi_powers[j]));
            }
            let mut c = rest;
            for _ in 0..i {
                c = r.exact_div_pi(&c).map_err(|e| match e {
                    Error::NotDivisible(s) => {
                        Error::NotDivisible(format!("ghost inversion at component {i}: {s}"))
                    }
                    other => other,
                })?;
            }
            chains.push(vec![c.clone()]);
            out.push(c);
        }
        Ok(out)
    }
}

impl WittTable {
    /// Builds and verifies the table, refusing levels with `q^n` above `cap`.
    pub fn build(triple: Arc<BaseTriple>, n: usize, cap: u64) -> Result<Self> {
        check_feasible(&triple, n, cap)?;
        let gc = GhostCalculus::new(triple.clone(), n);
        let r = &gc.ring;
        let xs: Vec<MultiPoly> = (0..=n).map(|j| r.var(x_var(j))).collect();
        let ys: Vec<MultiPoly> = (0..=n).map(|j| r.var(y_var(j))).collect();
        let wx = gc.ghost(&xs);
        let wy = gc.ghost(&ys);

        let rhs_sum: Vec<_> = wx.iter().zip(&wy).map(|(a, b)| r.add(a, b)).collect();
        let rhs_prod: Vec<_> = wx.iter().zip(&wy).map(|(a, b)| r.mul(a, b)).collect();
        let rhs_neg: Vec<_> = wx.iter().map(|a| r.neg(a)).collect();
        let rhs_frob: Vec<_> = wx[1..].to_vec();
        let mut rhs_delta = Vec::with_capacity(n);
        for i in 0..n {
            let diff = r.sub(&wx[i + 1], &r.pow(&wx[i], triple.q()));
            rhs_delta.push(r.exact_div_pi(&diff)?);
        }

        let table = WittTable {
            triple: triple.clone(),
            n,
            sum: gc.invert_ghost(&rhs_sum)?,
            prod: gc.invert_ghost(&rhs_prod)?,
            neg: gc.invert_ghost(&rhs_neg)?,
            frob: gc.invert_ghost(&rhs_frob)?,
            delta: gc.invert_ghost(&rhs_delta)?,
        };
        table.verify()?;
        Ok(table)
    }

    /// Re-checks every defining identity symbolically:
    /// ghost compatibility of sum, product and negation, the Frobenius
    /// shift, the `Delta` relation and `F_i = X_i^q mod pi`.
    pub fn verify(&self) -> Result<()> {
        let n = self.n;
        let shape_ok = self.sum.len() == n + 1
            && self.prod.len() == n + 1
            && self.neg.len() == n + 1
            && self.frob.len() == n
            && self.delta.len() == n;
        if !shape_ok {
            return Err(Error::RelationViolation("table has the wrong shape".into()));
        }
        let gc = GhostCalculus::new(self.triple.clone(), n);
        let r = &gc.ring;
        let xs: Vec<MultiPoly> = (0..=n).map(|j| r.var(x_var(j))).collect();
        let ys: Vec<MultiPoly> = (0..=n).map(|j| r.var(y_var(j))).collect();
        let wx = gc.ghost(&xs);
        let wy = gc.ghost(&ys);
        let ws = gc.ghost(&self.sum);
        let wm = gc.ghost(&self.prod);
        let wn = gc.ghost(&self.neg);
        let wf = gc.ghost(&self.frob);
        let wd = gc.ghost(&self.delta);
        let pi = self.triple.pi().clone();
        let fail = |what: &str, i: usize| {
            Err(Error::RelationViolation(format!(
                "{what} ghost identity fails in component {i}"
            )))
        };
        for i in 0..=n {
            if ws[i] != r.add(&wx[i], &wy[i]) {
                return fail("sum", i);
            }
            if wm[i] != r.mul(&wx[i], &wy[i]) {
                return fail("product", i);
            }
            if !r.add(&wn[i], &wx[i]).is_zero() {
                return fail("negation", i);
            }
        }
        for i in 0..n {
            if wf[i] != wx[i + 1] {
                return fail("Frobenius", i);
            }
            let lhs = r.scale(&wd[i], &pi);
            if lhs != r.sub(&wx[i + 1], &r.pow(&wx[i], self.triple.q())) {
                return fail("Delta", i);
            }
            let diff = r.sub(&self.frob[i], &r.pow(&xs[i], self.triple.q()));
            if r.exact_div_pi(&diff).is_err() {
                return Err(Error::RelationViolation(format!(
                    "F_{i} is not congruent to X_{i}^q modulo pi"
                )));
            }
        }
        Ok(())
    }

    /// The Witt vector `exp_delta(c)` in `W_n(O)`: the unique vector with
    /// ghost components `(c, c, ..., c)`.
    pub fn structure_vector(&self, c: &NumberRingElement) -> Result<Vec<NumberRingElement>> {
        self.structure_vector_at(c, self.n)
    }

    pub fn structure_vector_at(
        &self,
        c: &NumberRingElement,
        level: usize,
    ) -> Result<Vec<NumberRingElement>> {
        let gc = GhostCalculus::new(self.triple.clone(), level);
        let constant = gc.ring.constant(c);
        let comps = gc.invert_ghost(&vec![constant; level + 1])?;
        Ok(comps
            .iter()
            .map(|p| p.as_constant().filter(|c| !c.0.is_empty()).unwrap_or_else(|| self.triple.zero()))
            .collect())
    }

    /// The same table cut down to a lower level.
    pub fn truncated(&self, level: usize) -> WittTable {
        assert!(level <= self.n);
        WittTable {
            triple: self.triple.clone(),
            n: level,
            sum: self.sum[..=level].to_vec(),
            prod: self.prod[..=level].to_vec(),
            neg: self.neg[..=level].to_vec(),
            frob: self.frob[..level].to_vec(),
            delta: self.delta[..level].to_vec(),
        }
    }

    pub fn total_terms(&self) -> usize {
        [&self.sum, &self.prod, &self.neg, &self.frob, &self.delta]
            .iter()
            .flat_map(|v| v.iter().map(MultiPoly::len))
            .sum()
    }
}

pub fn check_feasible(triple: &BaseTriple, n: usize, cap: u64) -> Result<()> {
    let size = (triple.q() as u128).checked_pow(n as u32);
    match size {
        Some(s) if s <= cap as u128 => Ok(()),
        _ => Err(Error::FeasibilityCap(format!(
            "q^n = {}^{} exceeds the cap {cap}",
            triple.q(),
            n
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::poly_from_int_terms;

    #[test]
    fn level_zero_is_the_identity() {
        let t = WittTable::build(BaseTriple::named("Z2").unwrap(), 0, 64).unwrap();
        let r = PolyRing::new(BaseRing::integral(t.triple.clone()));
        assert_eq!(t.sum[0], r.add(&r.var(x_var(0)), &r.var(y_var(0))));
        assert_eq!(t.prod[0], r.mul(&r.var(x_var(0)), &r.var(y_var(0))));
        assert!(t.frob.is_empty());
    }

    #[test]
    fn two_typical_level_one() {
        let t = WittTable::build(BaseTriple::named("Z2").unwrap(), 1, 64).unwrap();
        let r = PolyRing::new(BaseRing::integral(t.triple.clone()));
        let (x0, x1, y0, y1) = (x_var(0), x_var(1), y_var(0), y_var(1));
        let s1 = poly_from_int_terms(
            &r,
            &[
                (1, vec![(x1.clone(), 1)]),
                (1, vec![(y1.clone(), 1)]),
                (-1, vec![(x0.clone(), 1), (y0.clone(), 1)]),
            ],
        );
        assert_eq!(t.sum[1], s1);
        let m1 = poly_from_int_terms(
            &r,
            &[
                (1, vec![(x0.clone(), 2), (y1.clone(), 1)]),
                (1, vec![(y0.clone(), 2), (x1.clone(), 1)]),
                (2, vec![(x1.clone(), 1), (y1.clone(), 1)]),
            ],
        );
        assert_eq!(t.prod[1], m1);
        let f0 = poly_from_int_terms(&r, &[(1, vec![(x0.clone(), 2)]), (2, vec![(x1, 1)])]);
        assert_eq!(t.frob[0], f0);
    }

    #[test]
    fn structure_vector_of_three() {
        let t = WittTable::build(BaseTriple::named("Z2").unwrap(), 1, 64).unwrap();
        let v = t.structure_vector(&NumberRingElement::from_i64s(&[3])).unwrap();
        assert_eq!(v, vec![NumberRingElement::from_i64s(&[3]), NumberRingElement::from_i64s(&[-3])]);
    }

    #[test]
    fn feasibility_cap() {
        let err = WittTable::build(BaseTriple::named("Z3").unwrap(), 4, 64).unwrap_err();
        assert!(matches!(err, Error::FeasibilityCap(_)));
    }

    #[test]
    fn corrupted_table_is_rejected() {
        let mut t = WittTable::build(BaseTriple::named("Z2").unwrap(), 1, 64).unwrap();
        let r = PolyRing::new(BaseRing::integral(t.triple.clone()));
        t.sum[1] = r.add(&t.sum[1], &r.var(x_var(0)));
        assert!(matches!(t.verify(), Err(Error::RelationViolation(_))));
    }
}
