//! Finite test rings: towers of monic extensions over `Z/m`.
//!
//! Elements are stored as `u32` indices into the mixed-radix list of
//! coefficient tuples, so that enumeration, hashing and table lookups stay
//! cheap. Rings with at most [`TABLE_LIMIT`] elements precompute their
//! addition and multiplication tables.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::arith;
use crate::error::{Error, Result};
use crate::number::{BaseTriple, NumberRingElement};
use crate::ring::{Enumerable, OAlgebra, Ring};

pub const TABLE_LIMIT: usize = 256;
/// Largest ring we are willing to index with `u32`.
pub const SIZE_LIMIT: u64 = 1 << 24;

/// A finite commutative ring `Z/m[a_1][a_2].../(f_1, f_2, ...)`.
#[derive(Clone)]
pub struct FiniteRing(Arc<FiniteData>);

struct FiniteData {
    name: String,
    m: u64,
    /// `tower[k]` is the monic polynomial adjoining `a_{k+1}`, with
    /// coefficients (constant first, leading 1 omitted) given as flat
    /// coefficient vectors of the previous level.
    tower: Vec<Vec<Vec<u64>>>,
    degrees: Vec<usize>,
    dim: usize,
    size: usize,
    add_table: Option<Vec<u32>>,
    mul_table: Option<Vec<u32>>,
    /// Image of the generator `t` of `O`, when `O` has rank above one.
    t_image: Option<u32>,
}

impl FiniteRing {
    /// `Z/m`.
    pub fn zmod(m: u64) -> Result<Self> {
        Self::new(m, Vec::new())
    }

    /// Builds a tower. Each polynomial lists its coefficients from the
    /// constant term up to the leading 1; every coefficient is a flat
    /// coefficient vector of the ring built so far (shorter vectors are
    /// zero padded).
    pub fn new(m: u64, tower: Vec<Vec<Vec<i64>>>) -> Result<Self> {
        Self::with_name(m, tower, None)
    }

    fn with_name(m: u64, tower: Vec<Vec<Vec<i64>>>, name: Option<String>) -> Result<Self> {
        if m < 2 {
            return Err(Error::Invalid("modulus must be at least 2".into()));
        }
        let mut degrees = Vec::new();
        let mut reduced_tower = Vec::new();
        let mut dim = 1usize;
        let mut size: u64 = m;
        for poly in &tower {
            if poly.len() < 2 {
                return Err(Error::Invalid("tower polynomials need degree >= 1".into()));
            }
            let lead = poly.last().unwrap();
            let lead_is_one = lead.first().map(|&c| c.rem_euclid(m as i64) == 1).unwrap_or(false)
                && lead.iter().skip(1).all(|&c| c.rem_euclid(m as i64) == 0);
            if !lead_is_one {
                return Err(Error::Invalid("tower polynomials must be monic".into()));
            }
            let mut coeffs = Vec::new();
            for c in &poly[..poly.len() - 1] {
                if c.len() > dim {
                    return Err(Error::Invalid(format!(
                        "coefficient {c:?} is longer than the ring dimension {dim}"
                    )));
                }
                let mut v: Vec<u64> = c.iter().map(|&x| x.rem_euclid(m as i64) as u64).collect();
                v.resize(dim, 0);
                coeffs.push(v);
            }
            let d = poly.len() - 1;
            size = size
                .checked_pow(d as u32)
                .filter(|&s| s <= SIZE_LIMIT)
                .ok_or_else(|| Error::SizeCap {
                    needed: "ring too large".into(),
                    cap: SIZE_LIMIT,
                })?;
            degrees.push(d);
            reduced_tower.push(coeffs);
            dim *= d;
        }
        if size > SIZE_LIMIT {
            return Err(Error::SizeCap {
                needed: size.to_string(),
                cap: SIZE_LIMIT,
            });
        }
        let name = name.unwrap_or_else(|| {
            if tower.is_empty() {
                format!("Z/{m}")
            } else {
                format!("Z/{m}{:?}", tower)
            }
        });
        let mut data = FiniteData {
            name,
            m,
            tower: reduced_tower,
            degrees,
            dim,
            size: size as usize,
            add_table: None,
            mul_table: None,
            t_image: None,
        };
        if data.size <= TABLE_LIMIT {
            let n = data.size;
            let mut add = vec![0u32; n * n];
            let mut mul = vec![0u32; n * n];
            for a in 0..n {
                let va = data.unpack(a as u32);
                for b in a..n {
                    let vb = data.unpack(b as u32);
                    let s = data.pack(&data.add_vec(&va, &vb));
                    let p = data.pack(&data.mul_vec(data.tower.len(), &va, &vb));
                    add[a * n + b] = s;
                    add[b * n + a] = s;
                    mul[a * n + b] = p;
                    mul[b * n + a] = p;
                }
            }
            data.add_table = Some(add);
            data.mul_table = Some(mul);
        }
        Ok(FiniteRing(Arc::new(data)))
    }

    /// Short names used by the CLI and the test matrices: `F2`, `F3`, `F5`,
    /// `F4`, `Z4`, `Z8`, `Z9`, `F2[e]` (`F_2[e]/(e^2)`), `F4[e]`, `Z4[e]`.
    pub fn named(name: &str) -> Result<Self> {
        let (m, tower): (u64, Vec<Vec<Vec<i64>>>) = match name {
            "F2" => (2, vec![]),
            "F3" => (3, vec![]),
            "F5" => (5, vec![]),
            "F4" => (2, vec![vec![vec![1], vec![1], vec![1]]]),
            "F2[e]" => (2, vec![vec![vec![0], vec![0], vec![1]]]),
            "F4[e]" => (
                2,
                vec![
                    vec![vec![1], vec![1], vec![1]],
                    vec![vec![0, 0], vec![0, 0], vec![1, 0]],
                ],
            ),
            "F9" => (3, vec![vec![vec![1], vec![0], vec![1]]]),
            other => {
                if let Some(rest) = other.strip_prefix('Z') {
                    if let Some(m) = rest.strip_suffix("[e]") {
                        let m = m.parse().map_err(|_| unknown_ring(other))?;
                        (m, vec![vec![vec![0], vec![0], vec![1]]])
                    } else {
                        (rest.parse().map_err(|_| unknown_ring(other))?, vec![])
                    }
                } else {
                    return Err(unknown_ring(other));
                }
            }
        };
        Self::with_name(m, tower, Some(name.to_string()))
    }

    pub fn name(&self) -> &str {
        &self.0.name
    }

    pub fn modulus(&self) -> u64 {
        self.0.m
    }

    pub fn size(&self) -> usize {
        self.0.size
    }

    pub fn dim(&self) -> usize {
        self.0.dim
    }

    pub fn degrees(&self) -> &[usize] {
        &self.0.degrees
    }

    /// The `k`-th tower generator `a_{k+1}` as an element.
    pub fn generator(&self, k: usize) -> u32 {
        let stride: usize = self.0.degrees[..k].iter().product();
        let mut v = vec![0u64; self.0.dim];
        v[stride] = 1;
        self.0.pack(&v)
    }

    pub fn coefficients(&self, a: u32) -> Vec<u64> {
        self.0.unpack(a)
    }

    pub fn from_coefficients(&self, v: &[u64]) -> u32 {
        let mut w: Vec<u64> = v.iter().map(|x| x % self.0.m).collect();
        w.resize(self.0.dim, 0);
        self.0.pack(&w)
    }

    pub fn format_elem(&self, a: u32) -> String {
        let v = self.0.unpack(a);
        if v.len() == 1 {
            v[0].to_string()
        } else {
            format!("{v:?}")
        }
    }

    pub fn format_vec(&self, v: &[u32]) -> Vec<String> {
        v.iter().map(|&a| self.format_elem(a)).collect()
    }

    /// The characteristic, which is always the modulus of the prime ring.
    pub fn characteristic(&self) -> u64 {
        self.0.m
    }

    /// Whether every nonzero element is a unit.
    pub fn is_field(&self) -> bool {
        let n = self.0.size as u32;
        let one = self.one();
        (1..n).all(|a| (1..n).any(|b| self.mul(&a, &b) == one))
    }

    /// Prime characteristic `p` with `x -> x^p` bijective.
    pub fn is_perfect(&self) -> bool {
        let p = self.0.m;
        if arith::prime_power(p) != Some((p, 1)) {
            return false;
        }
        let mut seen = vec![false; self.0.size];
        for a in 0..self.0.size as u32 {
            let b = self.pow(&a, p) as usize;
            if seen[b] {
                return false;
            }
            seen[b] = true;
        }
        true
    }

    /// Equips the ring with the structure of an `O`-algebra. For `O = Z`
    /// nothing is needed. Otherwise the image of `t` is a root of `g`; roots
    /// sending `pi` to a nilpotent are preferred, so that residue field
    /// algebras get their natural `O/pi`-structure.
    pub fn for_triple(&self, triple: &BaseTriple) -> Result<Self> {
        if triple.degree() == 1 {
            return Ok(self.clone());
        }
        let mut roots = Vec::new();
        for r in 0..self.0.size as u32 {
            let mut acc = self.zero();
            for c in triple.g().iter().rev() {
                acc = self.add(&self.mul(&acc, &r), &self.from_int(c));
            }
            if acc == self.zero() {
                roots.push(r);
            }
        }
        if roots.is_empty() {
            return Err(Error::Invalid(format!(
                "{} admits no map from O = Z[t]/(g)",
                self.name()
            )));
        }
        let eval_pi = |r: u32| {
            let mut acc = self.zero();
            let mut tp = self.one();
            for c in &triple.pi().0 {
                acc = self.add(&acc, &self.mul(&self.from_int(c), &tp));
                tp = self.mul(&tp, &r);
            }
            acc
        };
        let nilpotent = |x: u32| self.pow(&x, self.0.size as u64) == self.zero();
        let chosen = roots
            .iter()
            .copied()
            .find(|&r| nilpotent(eval_pi(r)))
            .unwrap_or(roots[0]);
        let mut data = FiniteData {
            name: self.0.name.clone(),
            m: self.0.m,
            tower: self.0.tower.clone(),
            degrees: self.0.degrees.clone(),
            dim: self.0.dim,
            size: self.0.size,
            add_table: self.0.add_table.clone(),
            mul_table: self.0.mul_table.clone(),
            t_image: Some(chosen),
        };
        data.name = self.0.name.clone();
        Ok(FiniteRing(Arc::new(data)))
    }

    pub fn t_image(&self) -> Option<u32> {
        self.0.t_image
    }
}

fn unknown_ring(name: &str) -> Error {
    Error::Invalid(format!("unknown finite ring {name}"))
}

impl FiniteData {
    fn unpack(&self, mut a: u32) -> Vec<u64> {
        let m = self.m as u32;
        let mut v = Vec::with_capacity(self.dim);
        for _ in 0..self.dim {
            v.push((a % m) as u64);
            a /= m;
        }
        v
    }

    fn pack(&self, v: &[u64]) -> u32 {
        let mut a: u64 = 0;
        for &x in v.iter().rev() {
            a = a * self.m + x;
        }
        a as u32
    }

    fn add_vec(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter().zip(b).map(|(x, y)| (x + y) % self.m).collect()
    }

    /// Product of two flat vectors living at tower level `level`.
    fn mul_vec(&self, level: usize, a: &[u64], b: &[u64]) -> Vec<u64> {
        if level == 0 {
            return vec![(a[0] * b[0]) % self.m];
        }
        let d = self.degrees[level - 1];
        let sub: usize = a.len() / d;
        let zero = vec![0u64; sub];
        let mut prod = vec![zero.clone(); 2 * d - 1];
        for i in 0..d {
            let ai = &a[i * sub..(i + 1) * sub];
            if ai.iter().all(|&x| x == 0) {
                continue;
            }
            for j in 0..d {
                let bj = &b[j * sub..(j + 1) * sub];
                if bj.iter().all(|&x| x == 0) {
                    continue;
                }
                let c = self.mul_vec(level - 1, ai, bj);
                prod[i + j] = self.add_vec(&prod[i + j], &c);
            }
        }
        let f = &self.tower[level - 1];
        for s in (d..2 * d - 1).rev() {
            let top = std::mem::replace(&mut prod[s], zero.clone());
            if top.iter().all(|&x| x == 0) {
                continue;
            }
            for (i, fi) in f.iter().enumerate() {
                let c = self.mul_vec(level - 1, &top, &fi[..sub]);
                let neg: Vec<u64> = c.iter().map(|x| (self.m - x) % self.m).collect();
                prod[s - d + i] = self.add_vec(&prod[s - d + i], &neg);
            }
        }
        prod.truncate(d);
        prod.concat()
    }
}

impl fmt::Debug for FiniteRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteRing({})", self.0.name)
    }
}

impl Ring for FiniteRing {
    type Elem = u32;

    fn zero(&self) -> u32 {
        0
    }

    fn one(&self) -> u32 {
        1
    }

    fn add(&self, a: &u32, b: &u32) -> u32 {
        match &self.0.add_table {
            Some(t) => t[*a as usize * self.0.size + *b as usize],
            None => {
                let d = &self.0;
                d.pack(&d.add_vec(&d.unpack(*a), &d.unpack(*b)))
            }
        }
    }

    fn neg(&self, a: &u32) -> u32 {
        let d = &self.0;
        let v: Vec<u64> = d.unpack(*a).iter().map(|x| (d.m - x) % d.m).collect();
        d.pack(&v)
    }

    fn mul(&self, a: &u32, b: &u32) -> u32 {
        match &self.0.mul_table {
            Some(t) => t[*a as usize * self.0.size + *b as usize],
            None => {
                let d = &self.0;
                d.pack(&d.mul_vec(d.tower.len(), &d.unpack(*a), &d.unpack(*b)))
            }
        }
    }

    fn from_int(&self, n: &BigInt) -> u32 {
        n.mod_floor(&BigInt::from(self.0.m)).to_u32().unwrap()
    }

    fn is_zero(&self, a: &u32) -> bool {
        *a == 0
    }
}

impl OAlgebra for FiniteRing {
    fn from_o(&self, c: &NumberRingElement) -> u32 {
        if c.0.len() == 1 {
            return self.from_int(&c.0[0]);
        }
        let t = self
            .0
            .t_image
            .expect("finite ring used as an O-algebra without FiniteRing::for_triple");
        let mut acc = self.zero();
        for x in c.0.iter().rev() {
            acc = self.add(&self.mul(&acc, &t), &self.from_int(x));
        }
        acc
    }
}

impl Enumerable for FiniteRing {
    fn cardinality(&self) -> u128 {
        self.0.size as u128
    }

    fn elements(&self) -> Vec<u32> {
        (0..self.0.size as u32).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::ring_axiom_violation;

    #[test]
    fn sizes_follow_the_tower() {
        assert_eq!(FiniteRing::named("F2").unwrap().size(), 2);
        assert_eq!(FiniteRing::named("Z4").unwrap().size(), 4);
        assert_eq!(FiniteRing::named("F4").unwrap().size(), 4);
        assert_eq!(FiniteRing::named("F4[e]").unwrap().size(), 16);
        assert_eq!(FiniteRing::zmod(7).unwrap().elements().len(), 7);
    }

    #[test]
    fn f4_is_a_field() {
        let f4 = FiniteRing::named("F4").unwrap();
        assert!(f4.is_field());
        assert!(f4.is_perfect());
        let a = f4.generator(0);
        // a^2 = a + 1
        assert_eq!(f4.mul(&a, &a), f4.add(&a, &1));
        assert_eq!(f4.pow(&a, 3), 1);
    }

    #[test]
    fn dual_numbers_are_not_perfect() {
        let r = FiniteRing::named("F2[e]").unwrap();
        assert!(!r.is_field());
        assert!(!r.is_perfect());
        let e = r.generator(0);
        assert_eq!(r.mul(&e, &e), 0);
        let r = FiniteRing::named("F4[e]").unwrap();
        let e = r.generator(1);
        assert_eq!(r.mul(&e, &e), 0);
        assert!(!r.is_perfect());
    }

    #[test]
    fn axioms_hold_in_tower_rings() {
        for name in ["F4", "F2[e]", "Z4", "F9"] {
            let r = FiniteRing::named(name).unwrap();
            let els = r.elements();
            for a in &els {
                for b in &els {
                    for c in &els {
                        assert_eq!(ring_axiom_violation(&r, a, b, c), None, "{name}");
                    }
                }
            }
        }
    }

    #[test]
    fn untabled_arithmetic_matches_tables() {
        // F4[e] has 16 elements (tabled); the same ring built as a larger
        // tower exercises the on-the-fly path.
        let big = FiniteRing::new(
            2,
            vec![
                vec![vec![1], vec![1], vec![1]],
                vec![vec![0, 0], vec![0, 0], vec![1, 0]],
                vec![vec![0, 0, 0, 0], vec![0, 0, 0, 0], vec![0, 0, 0, 0], vec![1, 0, 0, 0]],
            ],
        )
        .unwrap();
        assert_eq!(big.size(), 4096);
        let small = FiniteRing::named("F4[e]").unwrap();
        for a in 0..16u32 {
            for b in 0..16u32 {
                assert_eq!(big.mul(&a, &b), small.mul(&a, &b));
            }
        }
    }

    #[test]
    fn eisenstein_structure_on_f4() {
        let eisen = BaseTriple::named("EISEN").unwrap();
        let f4 = FiniteRing::named("F4").unwrap().for_triple(&eisen).unwrap();
        let w = f4.from_o(&eisen.t());
        assert_ne!(w, 1);
        assert_eq!(f4.pow(&w, 3), 1);
        assert!(FiniteRing::named("F2").unwrap().for_triple(&eisen).is_err());

        let gauss = BaseTriple::named("GAUSS").unwrap();
        let f2 = FiniteRing::named("F2").unwrap().for_triple(&gauss).unwrap();
        assert_eq!(f2.from_o(gauss.pi()), 0);
    }
}
