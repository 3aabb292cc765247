use std::sync::Arc;

use proptest::prelude::*;

use jetwitt::ring::ring_axiom_violation;
use jetwitt::witt::{WittRing, WittTable};
use jetwitt::{BaseRing, BaseTriple, Enumerable, FiniteRing, NumberRingElement, Ring};

fn witt(triple: &str, n: usize, ring: &str) -> WittRing<FiniteRing> {
    let t = BaseTriple::named(triple).unwrap();
    let table = Arc::new(WittTable::build(t.clone(), n, 64).unwrap());
    let b = FiniteRing::named(ring).unwrap().for_triple(&t).unwrap();
    WittRing::new(table, n, b).unwrap()
}

/// The rings exercised below: `(triple, level, B)`.
const CELLS: &[(&str, usize, &str)] = &[
    ("Z2", 2, "F4"),
    ("Z2", 2, "Z4"),
    ("Z2", 1, "Z8"),
    ("Z2", 1, "F2[e]"),
    ("Z3", 1, "F9"),
    ("Z3", 1, "Z9"),
    ("GAUSS", 2, "F2"),
    ("GAUSS", 1, "F4[e]"),
    ("EISEN", 1, "F4"),
];

fn vector(w: &WittRing<FiniteRing>, seed: &[u32]) -> Vec<u32> {
    let size = w.base().size() as u32;
    (0..=w.level()).map(|i| seed[i] % size).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn ring_laws_hold(cell in 0..CELLS.len(), a in prop::collection::vec(any::<u32>(), 3),
                      b in prop::collection::vec(any::<u32>(), 3), c in prop::collection::vec(any::<u32>(), 3)) {
        let (t, n, r) = CELLS[cell];
        let w = witt(t, n, r);
        let (a, b, c) = (vector(&w, &a), vector(&w, &b), vector(&w, &c));
        prop_assert_eq!(ring_axiom_violation(&w, &a, &b, &c), None);
    }

    #[test]
    fn frobenius_and_truncation_are_ring_maps(cell in 0..CELLS.len(), a in prop::collection::vec(any::<u32>(), 3),
                                             b in prop::collection::vec(any::<u32>(), 3)) {
        let (t, n, r) = CELLS[cell];
        let w = witt(t, n, r);
        let lower = w.lower().unwrap();
        let (a, b) = (vector(&w, &a), vector(&w, &b));
        let f = |x: &[u32]| w.frobenius(x);
        prop_assert_eq!(f(&w.add(&a, &b)), lower.add(&f(&a), &f(&b)));
        prop_assert_eq!(f(&w.mul(&a, &b)), lower.mul(&f(&a), &f(&b)));
        let tr = |x: &[u32]| w.truncate(x, n - 1);
        prop_assert_eq!(tr(&w.mul(&a, &b)), lower.mul(&tr(&a), &tr(&b)));
    }

    #[test]
    fn verschiebung_identities(cell in 0..CELLS.len(), a in prop::collection::vec(any::<u32>(), 3),
                               b in prop::collection::vec(any::<u32>(), 3)) {
        let (t, n, r) = CELLS[cell];
        let w = witt(t, n, r);
        let lower = w.lower().unwrap();
        let x = vector(&w, &a);
        let y = vector(&lower, &b);
        // F V = pi on W_{n-1}.
        let pi = w.table().triple.pi().clone();
        prop_assert_eq!(w.frobenius(&w.verschiebung(&y)), lower.scalar(&pi, &y));
        // x V(y) = V(F(x) y).
        prop_assert_eq!(w.mul(&x, &w.verschiebung(&y)), w.verschiebung(&lower.mul(&w.frobenius(&x), &y)));
    }

    #[test]
    fn teichmuller_is_multiplicative(cell in 0..CELLS.len(), a in any::<u32>(), b in any::<u32>()) {
        let (t, n, r) = CELLS[cell];
        let w = witt(t, n, r);
        let size = w.base().size() as u32;
        let (a, b) = (a % size, b % size);
        let ab = w.base().mul(&a, &b);
        prop_assert_eq!(w.mul(&w.teichmuller(&a), &w.teichmuller(&b)), w.teichmuller(&ab));
    }

    /// Over `O` itself the ghost map is a ring map into `O^(n+1)`.
    #[test]
    fn ghost_is_additive_and_multiplicative_over_o(
        name in prop::sample::select(vec!["Z2", "Z3", "GAUSS", "EISEN"]),
        xs in prop::collection::vec(-9i64..=9, 6), ys in prop::collection::vec(-9i64..=9, 6),
    ) {
        let t = BaseTriple::named(name).unwrap();
        let n = 1;
        let table = Arc::new(WittTable::build(t.clone(), n, 64).unwrap());
        let o = BaseRing::integral(t.clone());
        let w = WittRing::new(table, n, o.clone()).unwrap();
        let d = t.degree();
        let elem = |v: &[i64], i: usize| NumberRingElement::from_i64s(&v[i * d..(i + 1) * d]);
        let x: Vec<_> = (0..=n).map(|i| elem(&xs, i)).collect();
        let y: Vec<_> = (0..=n).map(|i| elem(&ys, i)).collect();
        let (gx, gy) = (w.ghost(&x), w.ghost(&y));
        let gs: Vec<_> = gx.iter().zip(&gy).map(|(a, b)| o.add(a, b)).collect();
        let gp: Vec<_> = gx.iter().zip(&gy).map(|(a, b)| o.mul(a, b)).collect();
        prop_assert_eq!(w.ghost(&w.add(&x, &y)), gs);
        prop_assert_eq!(w.ghost(&w.mul(&x, &y)), gp);
    }
}

/// `W_n(F_p)` is `Z/p^(n+1)`: the map from `Z` is onto with the right kernel.
#[test]
fn witt_vectors_of_prime_field_are_cyclic() {
    for (t, n, r, p) in [("Z2", 2, "F2", 2u64), ("Z3", 1, "F3", 3), ("Z5", 1, "F5", 5)] {
        let w = witt(t, n, r);
        let order = p.pow(n as u32 + 1) as i64;
        let images: std::collections::HashSet<_> = (0..order).map(|k| w.from_i64(k)).collect();
        assert_eq!(images.len() as i64, order, "{t} {r}");
        assert!(w.is_zero(&w.from_i64(order)));
        for a in 0..order {
            for b in 0..order {
                assert_eq!(w.mul(&w.from_i64(a), &w.from_i64(b)), w.from_i64(a * b));
            }
        }
    }
}

#[test]
fn cardinality_is_size_to_the_level() {
    for &(t, n, r) in CELLS {
        let w = witt(t, n, r);
        let size = w.base().size() as u128;
        assert_eq!(w.cardinality(), size.pow(n as u32 + 1));
        assert_eq!(w.elements().len() as u128, w.cardinality());
    }
}

#[test]
fn level_zero_is_the_base_ring() {
    let w = witt("GAUSS", 0, "F4");
    let b = w.base().clone();
    for x in b.elements() {
        for y in b.elements() {
            assert_eq!(w.add(&vec![x], &vec![y]), vec![b.add(&x, &y)]);
            assert_eq!(w.mul(&vec![x], &vec![y]), vec![b.mul(&x, &y)]);
        }
    }
}
