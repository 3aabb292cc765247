//! Monogenic number rings `O = Z[t]/(g)`, base triples `(O, pi, q)` and the
//! finite quotients `O/pi^k`.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{self, Lattice, Matrix};
use crate::error::{Error, Result};
use crate::ring::{Enumerable, OAlgebra, Ring};

/// An element of `O` in the power basis `1, t, ..., t^(d-1)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct NumberRingElement(pub Vec<BigInt>);

impl NumberRingElement {
    pub fn from_i64s(v: &[i64]) -> Self {
        NumberRingElement(v.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.0
    }
}

impl fmt::Display for NumberRingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (i, c) in self.0.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            parts.push(match i {
                0 => c.to_string(),
                1 if c.is_one() => "t".to_string(),
                1 => format!("{c}*t"),
                _ if c.is_one() => format!("t^{i}"),
                _ => format!("{c}*t^{i}"),
            });
        }
        if parts.is_empty() {
            write!(f, "0")
        } else if parts.len() == 1 {
            write!(f, "{}", parts[0])
        } else {
            write!(f, "({})", parts.join(" + "))
        }
    }
}

/// The data `(O, pi, q)`: a monogenic number ring, a generator of a prime
/// ideal of residue cardinality `q = p^h`, and everything derived from it.
#[derive(Debug)]
pub struct BaseTriple {
    name: Option<String>,
    g: Vec<BigInt>,
    pi: NumberRingElement,
    q: u64,
    p: u64,
    h: u32,
    e: u32,
    mult_by_pi: Matrix,
    adj_pi: Matrix,
    det_pi: BigInt,
    residue: Lattice,
}

impl BaseTriple {
    /// Validates `(g, pi, q)`. `g` lists coefficients from the constant term
    /// up to the leading `1`.
    pub fn validate(g: &[BigInt], pi: &[BigInt], q: u64) -> Result<BaseTriple> {
        if g.len() < 2 || !g.last().unwrap().is_one() {
            return Err(Error::Invalid("g must be monic of degree >= 1".into()));
        }
        let d = g.len() - 1;
        if pi.len() > d {
            return Err(Error::Invalid(format!(
                "pi has {} coefficients but O has rank {d}",
                pi.len()
            )));
        }
        let mut pi_v = pi.to_vec();
        pi_v.resize(d, BigInt::zero());
        let (p, h) = arith::prime_power(q).ok_or(Error::NotPrimePower(q))?;
        let g = g.to_vec();
        let pi = reduce_mod_g(&g, pi_v);
        if pi.iter().all(Zero::is_zero) {
            return Err(Error::Invalid("pi must be nonzero".into()));
        }

        // Column j of the matrix is pi * t^j.
        let mut columns = Vec::with_capacity(d);
        for j in 0..d {
            let mut tj = vec![BigInt::zero(); d];
            tj[j] = BigInt::one();
            columns.push(mul_mod_g(&g, &pi, &tj));
        }
        let mult_by_pi: Matrix = (0..d)
            .map(|r| (0..d).map(|c| columns[c][r].clone()).collect())
            .collect();
        let det_pi = arith::determinant(&mult_by_pi);
        if det_pi.abs() != BigInt::from(q) {
            return Err(Error::WrongResidueSize {
                det: det_pi.to_string(),
                q,
            });
        }
        let residue = Lattice::from_columns(columns).expect("nonzero determinant");
        let adj_pi = arith::adjugate(&mult_by_pi);
        let mut triple = BaseTriple {
            name: None,
            g,
            pi: NumberRingElement(pi),
            q,
            p,
            h,
            e: 0,
            mult_by_pi,
            adj_pi,
            det_pi,
            residue,
        };

        let reps = triple.residue_representatives();
        for a in reps.iter().filter(|a| !a.is_zero()) {
            for b in reps.iter().filter(|b| !b.is_zero()) {
                if triple.reduce_mod_pi(&triple.mul(a, b)).is_zero() {
                    return Err(Error::QuotientNotField(format!("{a} * {b} lies in pi O")));
                }
            }
        }

        let mut x = triple.from_u64(p);
        let mut e = 0;
        while let Ok(y) = triple.exact_div_pi(&x) {
            e += 1;
            x = y;
        }
        if e == 0 {
            return Err(Error::PiNotDividingP(p));
        }
        triple.e = e;
        Ok(triple)
    }

    pub fn validate_i64(g: &[i64], pi: &[i64], q: u64) -> Result<BaseTriple> {
        let g: Vec<BigInt> = g.iter().map(|&x| BigInt::from(x)).collect();
        let pi: Vec<BigInt> = pi.iter().map(|&x| BigInt::from(x)).collect();
        Self::validate(&g, &pi, q)
    }

    /// Built-in triples: `Z2`, `Z3`, `Z5`, `GAUSS` (`Z[i]`, `1+i`, 2) and
    /// `EISEN` (`Z[w]`, 2, 4).
    pub fn named(name: &str) -> Result<Arc<BaseTriple>> {
        let mut t = match name.to_ascii_uppercase().as_str() {
            "Z2" => Self::validate_i64(&[0, 1], &[2], 2)?,
            "Z3" => Self::validate_i64(&[0, 1], &[3], 3)?,
            "Z5" => Self::validate_i64(&[0, 1], &[5], 5)?,
            "GAUSS" => Self::validate_i64(&[2, -2, 1], &[0, 1], 2)?,
            "EISEN" => Self::validate_i64(&[1, 1, 1], &[2, 0], 4)?,
            other => return Err(Error::Invalid(format!("unknown triple {other}"))),
        };
        t.name = Some(name.to_ascii_uppercase());
        Ok(Arc::new(t))
    }

    /// The p-typical triple `(Z, p, p)`.
    pub fn p_typical(p: u64) -> Result<Arc<BaseTriple>> {
        let mut t = Self::validate_i64(&[0, 1], &[p as i64], p)?;
        t.name = Some(format!("Z{p}"));
        Ok(Arc::new(t))
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn degree(&self) -> usize {
        self.g.len() - 1
    }

    pub fn g(&self) -> &[BigInt] {
        &self.g
    }

    pub fn pi(&self) -> &NumberRingElement {
        &self.pi
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn h(&self) -> u32 {
        self.h
    }

    /// Ramification index: `p = pi^e * unit`.
    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn mult_by_pi(&self) -> &Matrix {
        &self.mult_by_pi
    }

    /// A short identifier used in artifact headers.
    pub fn describe(&self) -> String {
        let coeffs = |v: &[BigInt]| {
            v.iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        format!(
            "g=[{}];pi=[{}];q={}",
            coeffs(&self.g),
            coeffs(&self.pi.0),
            self.q
        )
    }

    pub fn zero(&self) -> NumberRingElement {
        NumberRingElement(vec![BigInt::zero(); self.degree()])
    }

    pub fn one(&self) -> NumberRingElement {
        self.from_int(&BigInt::one())
    }

    pub fn from_int(&self, n: &BigInt) -> NumberRingElement {
        let mut v = vec![BigInt::zero(); self.degree()];
        v[0] = n.clone();
        NumberRingElement(v)
    }

    pub fn from_u64(&self, n: u64) -> NumberRingElement {
        self.from_int(&BigInt::from(n))
    }

    /// The generator `t` of `O` over `Z`.
    pub fn t(&self) -> NumberRingElement {
        let mut v = vec![BigInt::zero(); self.degree()];
        if self.degree() > 1 {
            v[1] = BigInt::one();
            NumberRingElement(v)
        } else {
            // O = Z[t]/(t + c): t equals -c
            v[0] = -self.g[0].clone();
            NumberRingElement(v)
        }
    }

    pub fn add(&self, a: &NumberRingElement, b: &NumberRingElement) -> NumberRingElement {
        NumberRingElement(a.0.iter().zip(&b.0).map(|(x, y)| x + y).collect())
    }

    pub fn sub(&self, a: &NumberRingElement, b: &NumberRingElement) -> NumberRingElement {
        NumberRingElement(a.0.iter().zip(&b.0).map(|(x, y)| x - y).collect())
    }

    pub fn neg(&self, a: &NumberRingElement) -> NumberRingElement {
        NumberRingElement(a.0.iter().map(|x| -x).collect())
    }

    pub fn mul(&self, a: &NumberRingElement, b: &NumberRingElement) -> NumberRingElement {
        NumberRingElement(mul_mod_g(&self.g, &a.0, &b.0))
    }

    pub fn pow(&self, a: &NumberRingElement, mut e: u64) -> NumberRingElement {
        let mut result = self.one();
        let mut base = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(&result, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        result
    }

    pub fn pi_pow(&self, k: u32) -> NumberRingElement {
        self.pow(&self.pi, k as u64)
    }

    /// The unique `y` with `pi * y = x`, found by solving the
    /// multiplication-by-pi system with the adjugate and checking integrality.
    pub fn exact_div_pi(&self, x: &NumberRingElement) -> Result<NumberRingElement> {
        let num = arith::mat_vec(&self.adj_pi, &x.0);
        let mut out = Vec::with_capacity(num.len());
        for c in num {
            if !(&c % &self.det_pi).is_zero() {
                return Err(Error::NotDivisible(x.to_string()));
            }
            out.push(c / &self.det_pi);
        }
        Ok(NumberRingElement(out))
    }

    pub fn is_divisible_by_pi(&self, x: &NumberRingElement) -> bool {
        self.residue.contains(&x.0)
    }

    /// `delta(x) = (x - x^q) / pi`, the pi-derivation of `O` lifting the
    /// identity.
    pub fn delta(&self, x: &NumberRingElement) -> Result<NumberRingElement> {
        let xq = self.pow(x, self.q);
        self.exact_div_pi(&self.sub(x, &xq))
    }

    /// Canonical representative of `x` modulo `pi O`.
    pub fn reduce_mod_pi(&self, x: &NumberRingElement) -> NumberRingElement {
        let mut v = x.0.clone();
        self.residue.reduce(&mut v);
        NumberRingElement(v)
    }

    /// The `q` canonical representatives of `O/pi O`.
    pub fn residue_representatives(&self) -> Vec<NumberRingElement> {
        self.residue
            .representatives()
            .into_iter()
            .map(NumberRingElement)
            .collect()
    }

    /// `pi'-adic` style valuation: the largest `k` with `pi^k | x`
    /// (`None` for zero).
    pub fn valuation(&self, x: &NumberRingElement) -> Option<u32> {
        if x.is_zero() {
            return None;
        }
        let mut k = 0;
        let mut y = x.clone();
        while let Ok(z) = self.exact_div_pi(&y) {
            y = z;
            k += 1;
        }
        Some(k)
    }
}

impl PartialEq for BaseTriple {
    fn eq(&self, other: &Self) -> bool {
        self.g == other.g && self.pi == other.pi && self.q == other.q
    }
}

impl Eq for BaseTriple {}

fn reduce_mod_g(g: &[BigInt], mut v: Vec<BigInt>) -> Vec<BigInt> {
    let d = g.len() - 1;
    while v.len() > d {
        let top = v.pop().unwrap();
        if top.is_zero() {
            continue;
        }
        let shift = v.len() - d;
        for (i, gi) in g.iter().take(d).enumerate() {
            v[shift + i] -= &top * gi;
        }
    }
    v.resize(d, BigInt::zero());
    v
}

fn mul_mod_g(g: &[BigInt], a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.len() == 1 && b.len() == 1 && g.len() == 2 {
        return vec![&a[0] * &b[0]];
    }
    let mut prod = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            prod[i + j] += x * y;
        }
    }
    reduce_mod_g(g, prod)
}

/// `O/pi^k` for finite `k`, or `O` itself. This is the coefficient ring of
/// every polynomial in the crate.
#[derive(Clone)]
pub struct BaseRing(Arc<BaseRingData>);

struct BaseRingData {
    triple: Arc<BaseTriple>,
    pi_power: Option<u32>,
    lattice: Option<Lattice>,
}

impl BaseRing {
    pub fn integral(triple: Arc<BaseTriple>) -> Self {
        BaseRing(Arc::new(BaseRingData {
            triple,
            pi_power: None,
            lattice: None,
        }))
    }

    /// `O/pi^k`.
    pub fn quotient(triple: Arc<BaseTriple>, k: u32) -> Self {
        let d = triple.degree();
        let pik = triple.pi_pow(k);
        let columns = (0..d)
            .map(|j| {
                let mut tj = vec![BigInt::zero(); d];
                tj[j] = BigInt::one();
                triple.mul(&pik, &NumberRingElement(tj)).0
            })
            .collect();
        let lattice = Lattice::from_columns(columns).expect("pi is not a zero divisor");
        BaseRing(Arc::new(BaseRingData {
            triple,
            pi_power: Some(k),
            lattice: Some(lattice),
        }))
    }

    pub fn with_power(triple: Arc<BaseTriple>, k: Option<u32>) -> Self {
        match k {
            None => Self::integral(triple),
            Some(k) => Self::quotient(triple, k),
        }
    }

    pub fn triple(&self) -> &Arc<BaseTriple> {
        &self.0.triple
    }

    pub fn pi_power(&self) -> Option<u32> {
        self.0.pi_power
    }

    pub fn is_integral(&self) -> bool {
        self.0.pi_power.is_none()
    }

    pub fn reduce(&self, x: &NumberRingElement) -> NumberRingElement {
        match &self.0.lattice {
            None => x.clone(),
            Some(l) => {
                let mut v = x.0.clone();
                l.reduce(&mut v);
                NumberRingElement(v)
            }
        }
    }

    pub fn same_as(&self, other: &BaseRing) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (*self.0.triple == *other.0.triple && self.0.pi_power == other.0.pi_power)
    }

    pub fn describe(&self) -> String {
        match self.0.pi_power {
            None => self.0.triple.describe(),
            Some(k) => format!("{};mod_pi^{k}", self.0.triple.describe()),
        }
    }

    /// Exact division by pi, available only on `O` itself.
    pub fn exact_div_pi(&self, x: &NumberRingElement) -> Result<NumberRingElement> {
        if !self.is_integral() {
            return Err(Error::Invalid("exact division by pi needs the base O".into()));
        }
        self.0.triple.exact_div_pi(x)
    }
}

impl fmt::Debug for BaseRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BaseRing({})", self.describe())
    }
}

impl Ring for BaseRing {
    type Elem = NumberRingElement;

    fn zero(&self) -> NumberRingElement {
        self.0.triple.zero()
    }

    fn one(&self) -> NumberRingElement {
        self.reduce(&self.0.triple.one())
    }

    fn add(&self, a: &NumberRingElement, b: &NumberRingElement) -> NumberRingElement {
        self.reduce(&self.0.triple.add(a, b))
    }

    fn neg(&self, a: &NumberRingElement) -> NumberRingElement {
        self.reduce(&self.0.triple.neg(a))
    }

    fn mul(&self, a: &NumberRingElement, b: &NumberRingElement) -> NumberRingElement {
        self.reduce(&self.0.triple.mul(a, b))
    }

    fn from_int(&self, n: &BigInt) -> NumberRingElement {
        self.reduce(&self.0.triple.from_int(n))
    }

    fn sub(&self, a: &NumberRingElement, b: &NumberRingElement) -> NumberRingElement {
        self.reduce(&self.0.triple.sub(a, b))
    }

    fn is_zero(&self, a: &NumberRingElement) -> bool {
        a.is_zero()
    }
}

impl OAlgebra for BaseRing {
    fn from_o(&self, c: &NumberRingElement) -> NumberRingElement {
        if c.0.len() == 1 && self.0.triple.degree() != 1 {
            return self.from_int(&c.0[0]);
        }
        self.reduce(c)
    }
}

impl Enumerable for BaseRing {
    fn cardinality(&self) -> u128 {
        match &self.0.lattice {
            None => u128::MAX,
            Some(l) => l.index().to_u128().unwrap_or(u128::MAX),
        }
    }

    fn elements(&self) -> Vec<NumberRingElement> {
        match &self.0.lattice {
            None => panic!("O is infinite"),
            Some(l) => l.representatives().into_iter().map(NumberRingElement).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(v: &[i64]) -> NumberRingElement {
        NumberRingElement::from_i64s(v)
    }

    #[test]
    fn integers_mod_two() {
        let t = BaseTriple::named("Z2").unwrap();
        assert_eq!(t.degree(), 1);
        assert_eq!(t.e(), 1);
        assert_eq!((t.p(), t.h()), (2, 1));
    }

    #[test]
    fn gaussian_integers() {
        let t = BaseTriple::named("GAUSS").unwrap();
        assert_eq!(t.e(), 2);
        assert_eq!(t.q(), 2);
        assert_eq!(arith::determinant(t.mult_by_pi()).abs(), BigInt::from(2));
        let reps = t.residue_representatives();
        assert_eq!(reps.len(), 2);
    }

    #[test]
    fn eisenstein_integers() {
        let t = BaseTriple::named("EISEN").unwrap();
        assert_eq!(t.e(), 1);
        assert_eq!(t.h(), 2);
        assert_eq!(t.residue_representatives().len(), 4);
    }

    #[test]
    fn rejects_bad_triples() {
        let err = BaseTriple::validate_i64(&[0, 1], &[4], 4).unwrap_err();
        assert!(matches!(
            err,
            Error::WrongResidueSize { .. } | Error::QuotientNotField(_)
        ));
        assert_eq!(
            BaseTriple::validate_i64(&[0, 1], &[6], 6).unwrap_err(),
            Error::NotPrimePower(6)
        );
        assert!(matches!(
            BaseTriple::validate_i64(&[0, 1], &[3], 2).unwrap_err(),
            Error::WrongResidueSize { .. }
        ));
        // pi = 2 in Z[i] has |det| = 4 but Z[i]/2 is not a field
        assert!(matches!(
            BaseTriple::validate_i64(&[1, 0, 1], &[2, 0], 4).unwrap_err(),
            Error::QuotientNotField(_)
        ));
    }

    #[test]
    fn exact_division() {
        let z = BaseTriple::named("Z2").unwrap();
        assert_eq!(z.exact_div_pi(&el(&[6])).unwrap(), el(&[3]));
        assert!(matches!(z.exact_div_pi(&el(&[3])), Err(Error::NotDivisible(_))));

        // In the basis t = 1 + i: 1 - i = 2 - t.
        let g = BaseTriple::named("GAUSS").unwrap();
        let y = g.exact_div_pi(&el(&[2, 0])).unwrap();
        assert_eq!(y, el(&[2, -1]));
        assert_eq!(g.mul(g.pi(), &y), el(&[2, 0]));
    }

    #[test]
    fn base_delta() {
        let z = BaseTriple::named("Z2").unwrap();
        assert_eq!(z.delta(&el(&[0])).unwrap(), el(&[0]));
        assert_eq!(z.delta(&el(&[1])).unwrap(), el(&[0]));
        assert_eq!(z.delta(&el(&[3])).unwrap(), el(&[-3]));
        let e = BaseTriple::named("EISEN").unwrap();
        // w^4 = w, so delta(w) = 0
        assert_eq!(e.delta(&el(&[0, 1])).unwrap(), el(&[0, 0]));
    }

    #[test]
    fn quotient_rings() {
        let z = BaseTriple::named("Z2").unwrap();
        let r = BaseRing::quotient(z, 3);
        assert_eq!(r.cardinality(), 8);
        assert_eq!(r.from_i64(11), el(&[3]));
        assert_eq!(r.from_i64(-1), el(&[7]));
        let g = BaseTriple::named("GAUSS").unwrap();
        let r = BaseRing::quotient(g, 2);
        assert_eq!(r.cardinality(), 4);
        assert!(r.is_zero(&r.from_i64(2)));
    }
}
