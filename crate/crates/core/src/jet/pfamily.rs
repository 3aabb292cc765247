//! The polynomials `P_n` giving the Witt components of `exp_delta`.

use std::sync::Arc;

use crate::arith::binomial;
use crate::error::{Error, Result};
use crate::number::{BaseRing, BaseTriple};
use crate::poly::{JetVar, MultiPoly, PolyRing};
use crate::ring::Ring;
use crate::witt::table::{check_feasible, GhostCalculus};

pub fn t_var(order: u32) -> JetVar {
    JetVar::new("T", 0, order)
}

/// `P_0, ..., P_n` in `O[T, T', ..., T^(n)]` and the tails
/// `S_{i-1} = P_i - T^(i)`.
#[derive(Clone, Debug)]
pub struct PFamily {
    pub triple: Arc<BaseTriple>,
    pub p: Vec<MultiPoly>,
    /// `s[i]` is `S_i = P_{i+1} - T^(i+1)`.
    pub s: Vec<MultiPoly>,
}

impl PFamily {
    /// Runs the recursion
    /// `P_n = P_{n-1}^delta + sum_{i <= n-2} sum_j c_ij P_i^(q(q^(n-1-i)-j)) (P_i^delta)^j`
    /// with `c_ij = pi^(i+j-n) binom(q^(n-1-i), j)`. Negative powers of pi
    /// are exact divisions of the binomial coefficient; a failure there is
    /// reported as `NotDivisible`.
    pub fn build(triple: Arc<BaseTriple>, n: usize, cap: u64) -> Result<Self> {
        check_feasible(&triple, n, cap)?;
        let ring = PolyRing::new(BaseRing::integral(triple.clone()));
        let q = triple.q();
        let mut p: Vec<MultiPoly> = vec![ring.var(t_var(0))];
        let mut p_delta: Vec<MultiPoly> = Vec::new();
        for level in 1..=n {
            p_delta.push(ring.q_delta(&p[level - 1])?);
            let mut next = p_delta[level - 1].clone();
            for i in 0..level.saturating_sub(1) {
                let big = q.pow((level - 1 - i) as u32);
                for j in 1..=big {
                    let c = coefficient(&triple, i, j, level)?;
                    let term = ring.mul(
                        &ring.pow(&p[i], q * (big - j)),
                        &ring.pow(&p_delta[i], j),
                    );
                    next = ring.add(&next, &ring.scale(&term, &c));
                }
            }
            p.push(next);
        }
        let s = (1..=n)
            .map(|i| ring.sub(&p[i], &ring.var(t_var(i as u32))))
            .collect();
        let family = PFamily { triple, p, s };
        family.verify()?;
        Ok(family)
    }

    pub fn level(&self) -> usize {
        self.p.len() - 1
    }

    pub fn ring(&self) -> PolyRing {
        PolyRing::new(BaseRing::integral(self.triple.clone()))
    }

    /// `P_0 = T`, `P_1 = T'`, `S_{i-1}` only involves orders below `i`, and
    /// the ghost identity `w(P_0, ..., P_n) = (T, phi T, ..., phi^n T)`.
    pub fn verify(&self) -> Result<()> {
        let ring = self.ring();
        let fail = |msg: String| Err(Error::RelationViolation(msg));
        if self.p[0] != ring.var(t_var(0)) {
            return fail("P_0 is not T".into());
        }
        if self.p.len() > 1 && self.p[1] != ring.var(t_var(1)) {
            return fail("P_1 is not T'".into());
        }
        for (i, s) in self.s.iter().enumerate() {
            if s.variables().iter().any(|v| v.order as usize > i) {
                return fail(format!("S_{i} involves T^({})", i + 1));
            }
        }
        let gc = GhostCalculus::new(self.triple.clone(), self.level());
        let expected = phi_iterates(&ring, self.level());
        let ghost = gc.ghost(&self.p);
        for (i, (g, e)) in ghost.iter().zip(&expected).enumerate() {
            if g != e {
                return fail(format!("ghost component {i} of exp differs from phi^{i}(T)"));
            }
        }
        Ok(())
    }
}

/// `T, phi(T), ..., phi^n(T)` with `phi = phi_A`.
pub fn phi_iterates(ring: &PolyRing, n: usize) -> Vec<MultiPoly> {
    let mut out = vec![ring.var(t_var(0))];
    for _ in 0..n {
        let next = ring.phi(out.last().unwrap());
        out.push(next);
    }
    out
}

/// The independent oracle: ghost inversion of `(T, phi T, ..., phi^n T)`.
pub fn p_by_ghost_inversion(triple: Arc<BaseTriple>, n: usize) -> Result<Vec<MultiPoly>> {
    let gc = GhostCalculus::new(triple, n);
    let rhs = phi_iterates(&gc.ring, n);
    gc.invert_ghost(&rhs)
}

fn coefficient(
    triple: &BaseTriple,
    i: usize,
    j: u64,
    n: usize,
) -> Result<crate::number::NumberRingElement> {
    let binom = binomial(triple.q().pow((n - 1 - i) as u32), j);
    let mut c = triple.from_int(&binom);
    let exponent = i as i64 + j as i64 - n as i64;
    if exponent >= 0 {
        c = triple.mul(&c, &triple.pi_pow(exponent as u32));
    } else {
        for _ in 0..(-exponent) {
            c = triple.exact_div_pi(&c).map_err(|_| {
                Error::NotDivisible(format!(
                    "c_({i},{j}) = pi^({exponent}) * {binom} is not integral"
                ))
            })?;
        }
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::poly_from_int_terms;

    #[test]
    fn two_typical_p2() {
        let fam = PFamily::build(BaseTriple::named("Z2").unwrap(), 2, 64).unwrap();
        let r = fam.ring();
        let expected = poly_from_int_terms(
            &r,
            &[
                (1, vec![(t_var(2), 1)]),
                (1, vec![(t_var(0), 2), (t_var(1), 1)]),
                (1, vec![(t_var(1), 2)]),
            ],
        );
        assert_eq!(fam.p[2], expected);
    }

    #[test]
    fn three_typical_p2() {
        let fam = PFamily::build(BaseTriple::named("Z3").unwrap(), 2, 64).unwrap();
        let r = fam.ring();
        let expected = poly_from_int_terms(
            &r,
            &[
                (1, vec![(t_var(2), 1)]),
                (1, vec![(t_var(0), 6), (t_var(1), 1)]),
                (3, vec![(t_var(0), 3), (t_var(1), 2)]),
                (3, vec![(t_var(1), 3)]),
            ],
        );
        assert_eq!(fam.p[2], expected);
    }

    #[test]
    fn recursion_matches_ghost_inversion() {
        for (name, n) in [("Z2", 3), ("Z3", 2), ("GAUSS", 3), ("EISEN", 2)] {
            let t = BaseTriple::named(name).unwrap();
            let fam = PFamily::build(t.clone(), n, 64).unwrap();
            assert_eq!(fam.p, p_by_ghost_inversion(t, n).unwrap(), "{name}");
        }
    }
}
