//! Sparse multivariate polynomials over `O` or `O/pi^k`, in jet-indexed
//! variables, together with the Frobenius lift `phi_A` and the derivation
//! `Q -> Q^delta` on polynomial rings.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::number::{BaseRing, NumberRingElement};
use crate::ring::{OAlgebra, Ring};

/// A variable `x_gamma^(order)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct JetVar {
    pub family: Arc<str>,
    pub gamma: u32,
    pub order: u32,
}

impl JetVar {
    pub fn new(family: &str, gamma: u32, order: u32) -> Self {
        JetVar {
            family: Arc::from(family),
            gamma,
            order,
        }
    }

    /// The same variable one jet order higher.
    pub fn prime(&self) -> Self {
        self.with_order(self.order + 1)
    }

    pub fn with_order(&self, order: u32) -> Self {
        JetVar {
            family: self.family.clone(),
            gamma: self.gamma,
            order,
        }
    }

    /// Same family and index, ignoring the jet order.
    pub fn same_base(&self, other: &JetVar) -> bool {
        self.family == other.family && self.gamma == other.gamma
    }
}

impl fmt::Display for JetVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.family)?;
        if self.gamma != 0 {
            write!(f, "{}", self.gamma)?;
        }
        match self.order {
            0 => Ok(()),
            1 => write!(f, "'"),
            2 => write!(f, "''"),
            3 => write!(f, "'''"),
            k => write!(f, "^({k})"),
        }
    }
}

/// A monomial: variables with positive exponents, sorted by variable.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Monomial(Vec<(JetVar, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: JetVar) -> Self {
        Monomial(vec![(v, 1)])
    }

    pub fn from_pairs(mut pairs: Vec<(JetVar, u32)>) -> Self {
        pairs.retain(|(_, e)| *e > 0);
        pairs.sort_by(|a, b| a.0.cmp(&b.0));
        let mut out: Vec<(JetVar, u32)> = Vec::with_capacity(pairs.len());
        for (v, e) in pairs {
            match out.last_mut() {
                Some((w, f)) if *w == v => *f += e,
                _ => out.push((v, e)),
            }
        }
        Monomial(out)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn factors(&self) -> &[(JetVar, u32)] {
        &self.0
    }

    pub fn exponent(&self, v: &JetVar) -> u32 {
        self.0
            .iter()
            .find(|(w, _)| w == v)
            .map(|(_, e)| *e)
            .unwrap_or(0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j].clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push((a[i].0.clone(), a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }
}

// Graded lexicographic: total degree first, then the sorted factor lists.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(v, e)| {
                if *e == 1 {
                    v.to_string()
                } else {
                    format!("{v}^{e}")
                }
            })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

/// A polynomial with coefficients in the power basis of `O`. The
/// coefficient ring itself is carried by [`PolyRing`]; coefficients are
/// always stored reduced and nonzero.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct MultiPoly {
    terms: BTreeMap<Monomial, NumberRingElement>,
}

impl MultiPoly {
    pub fn zero() -> Self {
        MultiPoly {
            terms: BTreeMap::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &NumberRingElement)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> Option<&NumberRingElement> {
        self.terms.get(m)
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn variables(&self) -> BTreeSet<JetVar> {
        self.terms
            .keys()
            .flat_map(|m| m.0.iter().map(|(v, _)| v.clone()))
            .collect()
    }

    /// Highest jet order among the variables (0 for constants).
    pub fn max_order(&self) -> u32 {
        self.variables().iter().map(|v| v.order).max().unwrap_or(0)
    }

    /// Constant term, if the polynomial is a constant.
    pub fn as_constant(&self) -> Option<NumberRingElement> {
        match self.terms.len() {
            0 => Some(NumberRingElement(Vec::new())),
            1 => self
                .terms
                .iter()
                .next()
                .filter(|(m, _)| m.is_one())
                .map(|(_, c)| c.clone()),
            _ => None,
        }
    }

    /// Builds a polynomial from raw terms; the caller guarantees the
    /// coefficients are reduced for the intended ring.
    pub fn from_terms(ring: &PolyRing, terms: Vec<(Monomial, NumberRingElement)>) -> Self {
        let mut p = MultiPoly::zero();
        for (m, c) in terms {
            ring.add_term(&mut p, m, &c);
        }
        p
    }

    /// Writes the polynomial with a chosen coefficient formatter.
    pub fn display_with(&self, coeff: impl Fn(&NumberRingElement) -> String) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let mut cs = coeff(c);
            let negative = cs.starts_with('-');
            if negative {
                cs.remove(0);
            }
            if k == 0 {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            if m.is_one() {
                out.push_str(&cs);
            } else if cs == "1" {
                out.push_str(&m.to_string());
            } else {
                out.push_str(&format!("{cs}*{m}"));
            }
        }
        out
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_with(|c| c.to_string()))
    }
}

/// Polynomials over a [`BaseRing`].
#[derive(Clone, Debug)]
pub struct PolyRing {
    base: BaseRing,
}

impl PolyRing {
    pub fn new(base: BaseRing) -> Self {
        PolyRing { base }
    }

    pub fn base(&self) -> &BaseRing {
        &self.base
    }

    fn add_term(&self, p: &mut MultiPoly, m: Monomial, c: &NumberRingElement) {
        use std::collections::btree_map::Entry;
        match p.terms.entry(m) {
            Entry::Vacant(v) => {
                let c = self.base.reduce(c);
                if !c.is_zero() {
                    v.insert(c);
                }
            }
            Entry::Occupied(mut o) => {
                let s = self.base.add(o.get(), c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn var(&self, v: JetVar) -> MultiPoly {
        MultiPoly::from_terms(self, vec![(Monomial::var(v), self.base.one())])
    }

    pub fn constant(&self, c: &NumberRingElement) -> MultiPoly {
        MultiPoly::from_terms(self, vec![(Monomial::one(), c.clone())])
    }

    pub fn monomial(&self, m: Monomial, c: &NumberRingElement) -> MultiPoly {
        MultiPoly::from_terms(self, vec![(m, c.clone())])
    }

    pub fn scale(&self, p: &MultiPoly, c: &NumberRingElement) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for (m, d) in &p.terms {
            self.add_term(&mut out, m.clone(), &self.base.mul(c, d));
        }
        out
    }

    /// Multiplies every term by a monomial.
    pub fn shift(&self, p: &MultiPoly, m: &Monomial) -> MultiPoly {
        MultiPoly {
            terms: p.terms.iter().map(|(k, c)| (k.mul(m), c.clone())).collect(),
        }
    }

    /// Simultaneous substitution. Variables missing from the map are kept.
    pub fn substitute(&self, p: &MultiPoly, map: &HashMap<JetVar, MultiPoly>) -> MultiPoly {
        let mut powers: HashMap<(JetVar, u32), MultiPoly> = HashMap::new();
        let mut out = MultiPoly::zero();
        for (m, c) in &p.terms {
            let mut term = self.constant(c);
            let mut kept = Vec::new();
            for (v, e) in &m.0 {
                match map.get(v) {
                    Some(image) => {
                        let pw = powers
                            .entry((v.clone(), *e))
                            .or_insert_with(|| self.pow(image, *e as u64))
                            .clone();
                        term = self.mul(&term, &pw);
                    }
                    None => kept.push((v.clone(), *e)),
                }
            }
            if !kept.is_empty() {
                term = self.shift(&term, &Monomial::from_pairs(kept));
            }
            out = self.add(&out, &term);
        }
        out
    }

    /// Evaluates `p` in an `O`-algebra.
    pub fn evaluate<R: OAlgebra>(
        &self,
        p: &MultiPoly,
        target: &R,
        assignment: &HashMap<JetVar, R::Elem>,
    ) -> Result<R::Elem> {
        let mut acc = target.zero();
        for (m, c) in &p.terms {
            let mut term = target.from_o(c);
            for (v, e) in &m.0 {
                let x = assignment
                    .get(v)
                    .ok_or_else(|| Error::MissingAssignment(v.to_string()))?;
                term = target.mul(&term, &target.pow(x, *e as u64));
            }
            acc = target.add(&acc, &term);
        }
        Ok(acc)
    }

    /// Coefficients re-read in another base ring (lifting canonical
    /// representatives to `O`, or reducing modulo a power of pi).
    pub fn change_base(&self, p: &MultiPoly, target: &PolyRing) -> MultiPoly {
        MultiPoly::from_terms(
            target,
            p.terms.iter().map(|(m, c)| (m.clone(), c.clone())).collect(),
        )
    }

    /// Coefficientwise exact division by pi; only over `O` itself.
    pub fn exact_div_pi(&self, p: &MultiPoly) -> Result<MultiPoly> {
        let mut terms = BTreeMap::new();
        for (m, c) in &p.terms {
            terms.insert(m.clone(), self.base.exact_div_pi(c)?);
        }
        Ok(MultiPoly { terms })
    }

    pub fn pi(&self) -> NumberRingElement {
        self.base.reduce(self.base.triple().pi())
    }

    /// `phi_A`: every variable `T^(i)` goes to `(T^(i))^q + pi T^(i+1)`,
    /// coefficients fixed.
    pub fn phi(&self, p: &MultiPoly) -> MultiPoly {
        let q = self.base.triple().q();
        let pi = self.pi();
        let map: HashMap<JetVar, MultiPoly> = p
            .variables()
            .into_iter()
            .map(|v| {
                let image = self.add(
                    &self.pow(&self.var(v.clone()), q),
                    &self.scale(&self.var(v.prime()), &pi),
                );
                (v, image)
            })
            .collect();
        self.substitute(p, &map)
    }

    /// `Q^delta = (phi_A(Q) - Q^q) / pi`. Raises the top jet order by one.
    pub fn q_delta(&self, p: &MultiPoly) -> Result<MultiPoly> {
        let q = self.base.triple().q();
        let diff = self.sub(&self.phi(p), &self.pow(p, q));
        self.exact_div_pi(&diff)
    }

    pub fn iterate_q_delta(&self, p: &MultiPoly, k: u32) -> Result<MultiPoly> {
        let mut cur = p.clone();
        for _ in 0..k {
            cur = self.q_delta(&cur)?;
        }
        Ok(cur)
    }

    /// `C_pi(a, b) = (a^q + b^q - (a + b)^q) / pi`, over `O`.
    pub fn c_pi(&self, a: &MultiPoly, b: &MultiPoly) -> Result<MultiPoly> {
        let q = self.base.triple().q();
        let s = self.add(&self.pow(a, q), &self.pow(b, q));
        let diff = self.sub(&s, &self.pow(&self.add(a, b), q));
        self.exact_div_pi(&diff)
    }

    /// Compiles `p` against an ordered list of variables for repeated
    /// evaluation in a fixed target ring.
    pub fn compile<R: OAlgebra>(
        &self,
        p: &MultiPoly,
        target: &R,
        vars: &[JetVar],
    ) -> Result<CompiledPoly<R::Elem>> {
        let index: HashMap<&JetVar, usize> = vars.iter().enumerate().map(|(i, v)| (v, i)).collect();
        let mut terms = Vec::with_capacity(p.len());
        for (m, c) in &p.terms {
            let coeff = target.from_o(c);
            if target.is_zero(&coeff) {
                continue;
            }
            let mut factors = Vec::with_capacity(m.0.len());
            for (v, e) in &m.0 {
                let i = *index
                    .get(v)
                    .ok_or_else(|| Error::MissingAssignment(v.to_string()))?;
                factors.push((i, *e));
            }
            terms.push((coeff, factors));
        }
        Ok(CompiledPoly { terms })
    }
}

impl Ring for PolyRing {
    type Elem = MultiPoly;

    fn zero(&self) -> MultiPoly {
        MultiPoly::zero()
    }

    fn one(&self) -> MultiPoly {
        self.constant(&self.base.one())
    }

    fn add(&self, a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
        let (big, small) = if a.len() >= b.len() { (a, b) } else { (b, a) };
        let mut out = big.clone();
        for (m, c) in &small.terms {
            self.add_term(&mut out, m.clone(), c);
        }
        out
    }

    fn neg(&self, a: &MultiPoly) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for (m, c) in &a.terms {
            self.add_term(&mut out, m.clone(), &self.base.neg(c));
        }
        out
    }

    fn mul(&self, a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
        let mut acc: HashMap<Monomial, NumberRingElement> = HashMap::new();
        let triple = self.base.triple();
        for (ma, ca) in &a.terms {
            for (mb, cb) in &b.terms {
                let c = triple.mul(ca, cb);
                let m = ma.mul(mb);
                match acc.get_mut(&m) {
                    Some(x) => *x = triple.add(x, &c),
                    None => {
                        acc.insert(m, c);
                    }
                }
            }
        }
        let mut out = MultiPoly::zero();
        for (m, c) in acc {
            let c = self.base.reduce(&c);
            if !c.is_zero() {
                out.terms.insert(m, c);
            }
        }
        out
    }

    fn from_int(&self, n: &BigInt) -> MultiPoly {
        self.constant(&self.base.from_int(n))
    }

    fn is_zero(&self, a: &MultiPoly) -> bool {
        a.is_zero()
    }

    fn pow(&self, a: &MultiPoly, e: u64) -> MultiPoly {
        if e == 0 {
            return self.one();
        }
        // Repeated multiplication keeps intermediate sizes small for the
        // sparse inputs we meet; squaring only pays off for large exponents.
        if e <= 4 {
            let mut acc = a.clone();
            for _ in 1..e {
                acc = self.mul(&acc, a);
            }
            return acc;
        }
        let half = self.pow(a, e / 2);
        let sq = self.mul(&half, &half);
        if e % 2 == 1 {
            self.mul(&sq, a)
        } else {
            sq
        }
    }
}

impl OAlgebra for PolyRing {
    fn from_o(&self, c: &NumberRingElement) -> MultiPoly {
        if c.0.len() == 1 && self.base.triple().degree() != 1 {
            return self.from_int(&c.0[0]);
        }
        self.constant(c)
    }
}

/// A polynomial with coefficients already mapped into a target ring and
/// variables replaced by positions in an input slice.
#[derive(Clone, Debug)]
pub struct CompiledPoly<E> {
    terms: Vec<(E, Vec<(usize, u32)>)>,
}

impl<E: Clone> CompiledPoly<E> {
    pub fn eval<R: Ring<Elem = E>>(&self, ring: &R, inputs: &[E]) -> E {
        let mut acc = ring.zero();
        for (c, factors) in &self.terms {
            let mut t = c.clone();
            for (i, e) in factors {
                let x = &inputs[*i];
                t = if *e == 1 {
                    ring.mul(&t, x)
                } else {
                    ring.mul(&t, &ring.pow(x, *e as u64))
                };
            }
            acc = ring.add(&acc, &t);
        }
        acc
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Largest input position used, plus one.
    pub fn arity(&self) -> usize {
        self.terms
            .iter()
            .flat_map(|(_, f)| f.iter().map(|(i, _)| i + 1))
            .max()
            .unwrap_or(0)
    }
}

/// Convenience constructor for small integer polynomials in tests and
/// fixtures: each term is a coefficient and a list of `(var, exponent)`.
pub fn poly_from_int_terms(ring: &PolyRing, terms: &[(i64, Vec<(JetVar, u32)>)]) -> MultiPoly {
    MultiPoly::from_terms(
        ring,
        terms
            .iter()
            .map(|(c, pairs)| {
                (
                    Monomial::from_pairs(pairs.clone()),
                    ring.base().from_int(&BigInt::from(*c)),
                )
            })
            .collect(),
    )
}

pub fn is_unit_coefficient(c: &NumberRingElement) -> bool {
    c.0.first().map(One::is_one).unwrap_or(false) && c.0.iter().skip(1).all(Zero::is_zero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::number::BaseTriple;

    fn z2() -> PolyRing {
        PolyRing::new(BaseRing::integral(BaseTriple::named("Z2").unwrap()))
    }

    fn t(order: u32) -> JetVar {
        JetVar::new("T", 0, order)
    }

    #[test]
    fn binomial_square() {
        let r = z2();
        let x = r.var(JetVar::new("X", 0, 0));
        let y = r.var(JetVar::new("Y", 0, 0));
        let lhs = r.pow(&r.add(&x, &y), 2);
        let rhs = poly_from_int_terms(
            &r,
            &[
                (1, vec![(JetVar::new("X", 0, 0), 2)]),
                (2, vec![(JetVar::new("X", 0, 0), 1), (JetVar::new("Y", 0, 0), 1)]),
                (1, vec![(JetVar::new("Y", 0, 0), 2)]),
            ],
        );
        assert_eq!(lhs, rhs);
        assert_eq!(r.add(&lhs, &r.zero()), lhs);
        assert_eq!(r.mul(&lhs, &r.one()), lhs);
    }

    #[test]
    fn phi_and_q_delta_on_t_squared() {
        let r = z2();
        let tt = r.pow(&r.var(t(0)), 2);
        let expect_phi = poly_from_int_terms(
            &r,
            &[
                (1, vec![(t(0), 4)]),
                (4, vec![(t(0), 2), (t(1), 1)]),
                (4, vec![(t(1), 2)]),
            ],
        );
        assert_eq!(r.phi(&tt), expect_phi);
        let expect_delta = poly_from_int_terms(
            &r,
            &[(2, vec![(t(0), 2), (t(1), 1)]), (2, vec![(t(1), 2)])],
        );
        assert_eq!(r.q_delta(&tt).unwrap(), expect_delta);
    }

    #[test]
    fn q_delta_of_a_variable_is_its_prime() {
        for name in ["Z2", "Z3", "GAUSS", "EISEN"] {
            let r = PolyRing::new(BaseRing::integral(BaseTriple::named(name).unwrap()));
            assert_eq!(r.q_delta(&r.var(t(0))).unwrap(), r.var(t(1)));
            assert_eq!(r.iterate_q_delta(&r.var(t(0)), 2).unwrap(), r.var(t(2)));
            assert!(r.q_delta(&r.one()).unwrap().is_zero());
        }
    }

    #[test]
    fn substitution_and_evaluation() {
        let r = z2();
        let x = t(0);
        let p = r.pow(&r.var(x.clone()), 2);
        let map = HashMap::from([(x.clone(), r.add(&r.var(x.clone()), &r.one()))]);
        let expected = poly_from_int_terms(
            &r,
            &[(1, vec![(x.clone(), 2)]), (2, vec![(x.clone(), 1)]), (1, vec![])],
        );
        assert_eq!(r.substitute(&p, &map), expected);

        let f2 = crate::finite::FiniteRing::named("F2").unwrap();
        let assignment = HashMap::from([(x.clone(), 1u32)]);
        // x^2 + 2x + 1 at x = 1 is 4 = 0 in F_2
        assert_eq!(r.evaluate(&expected, &f2, &assignment).unwrap(), 0);
        let compiled = r.compile(&expected, &f2, &[x]).unwrap();
        assert_eq!(compiled.eval(&f2, &[1]), 0);
        assert_eq!(compiled.eval(&f2, &[0]), 1);
    }

    #[test]
    fn quotient_coefficients_reduce() {
        let base = BaseRing::quotient(BaseTriple::named("Z2").unwrap(), 2);
        let r = PolyRing::new(base);
        let x = r.var(t(0));
        let p = r.scale(&x, &NumberRingElement::from_i64s(&[6]));
        assert_eq!(p, r.scale(&x, &NumberRingElement::from_i64s(&[2])));
        assert!(r.scale(&x, &NumberRingElement::from_i64s(&[4])).is_zero());
    }

    #[test]
    fn display_uses_primes() {
        let r = z2();
        let p = r.sub(&r.var(t(2)), &r.mul(&r.var(t(0)), &r.var(t(1))));
        assert_eq!(p.to_string(), "-T*T' + T''");
    }
}
