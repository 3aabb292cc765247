//! Ring abstractions shared by every coefficient domain in the crate.
//!
//! A [`Ring`] is a context object; its elements are plain values of the
//! associated type. Number rings, finite test rings, polynomial rings,
//! truncated Witt vectors and Greenberg sections all implement it, so the
//! universal Witt polynomials and hom enumeration are written once.

use std::fmt::Debug;
use std::hash::Hash;

use num_bigint::BigInt;

use crate::number::NumberRingElement;

pub trait Ring {
    type Elem: Clone + Eq + Hash + Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// The image of an integer under the unique map from `Z`.
    fn from_int(&self, n: &BigInt) -> Self::Elem;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn is_zero(&self, a: &Self::Elem) -> bool {
        *a == self.zero()
    }

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
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

    fn from_i64(&self, n: i64) -> Self::Elem {
        self.from_int(&BigInt::from(n))
    }

    fn sum<'a, I>(&self, items: I) -> Self::Elem
    where
        I: IntoIterator<Item = &'a Self::Elem>,
        Self::Elem: 'a,
    {
        items
            .into_iter()
            .fold(self.zero(), |acc, x| self.add(&acc, x))
    }
}

/// A ring together with a structure map from the number ring `O` of the
/// active base triple.
///
/// Elements of `O` arrive in the power basis. When the basis has length
/// one the map is forced and implementors may route through
/// [`Ring::from_int`].
pub trait OAlgebra: Ring {
    fn from_o(&self, c: &NumberRingElement) -> Self::Elem;
}

/// Rings whose elements can be listed exhaustively.
pub trait Enumerable: Ring {
    fn cardinality(&self) -> u128;
    /// Every element exactly once, in a deterministic order.
    fn elements(&self) -> Vec<Self::Elem>;
}

/// Checks the commutative ring axioms on one triple of elements and
/// returns the name of the first failing law.
pub fn ring_axiom_violation<R: Ring>(
    ring: &R,
    a: &R::Elem,
    b: &R::Elem,
    c: &R::Elem,
) -> Option<&'static str> {
    let add = |x: &R::Elem, y: &R::Elem| ring.add(x, y);
    let mul = |x: &R::Elem, y: &R::Elem| ring.mul(x, y);
    if add(&add(a, b), c) != add(a, &add(b, c)) {
        return Some("additive associativity");
    }
    if add(a, b) != add(b, a) {
        return Some("additive commutativity");
    }
    if mul(&mul(a, b), c) != mul(a, &mul(b, c)) {
        return Some("multiplicative associativity");
    }
    if mul(a, b) != mul(b, a) {
        return Some("multiplicative commutativity");
    }
    if mul(a, &add(b, c)) != add(&mul(a, b), &mul(a, c)) {
        return Some("distributivity");
    }
    if add(a, &ring.zero()) != *a {
        return Some("additive identity");
    }
    if mul(a, &ring.one()) != *a {
        return Some("multiplicative identity");
    }
    if !ring.is_zero(&add(a, &ring.neg(a))) {
        return Some("additive inverse");
    }
    None
}
