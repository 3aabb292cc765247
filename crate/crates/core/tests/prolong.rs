use std::sync::Arc;

use jetwitt::prolong::{
    all_pairs, check_pi_derivation, check_sequence, sample_o, BaseDelta, MapDelta, PresentedSequence, WittDelta,
};
use jetwitt::verify::AlgebraSpec;
use jetwitt::witt::{WittRing, WittTable};
use jetwitt::{BaseRing, BaseTriple, Enumerable, FiniteRing, Ring};

#[test]
fn delta_on_o_is_a_pi_derivation() {
    for name in ["Z2", "Z3", "Z5", "GAUSS", "EISEN"] {
        let t = BaseTriple::named(name).unwrap();
        let sample = sample_o(&t, 25, 15, 11);
        let r = check_pi_derivation(&BaseDelta::new(t.clone()), &all_pairs(&sample)).unwrap();
        assert!(r.pass, "{name}: {}", r.to_text());
        // delta(x) = (x - x^q) / pi, recomputed by hand.
        for x in &sample {
            let num = t.sub(x, &t.pow(x, t.q()));
            assert_eq!(t.mul(t.pi(), &t.delta(x).unwrap()), num);
        }
    }
}

#[test]
fn witt_delta_is_a_pi_derivation() {
    for (name, n, b) in [("Z2", 2, "F2"), ("Z2", 1, "F4"), ("Z2", 1, "F2[e]"), ("EISEN", 1, "F4"), ("GAUSS", 1, "F2")] {
        let t = BaseTriple::named(name).unwrap();
        let table = Arc::new(WittTable::build(t.clone(), n, 64).unwrap());
        let b = FiniteRing::named(b).unwrap().for_triple(&t).unwrap();
        let w = WittRing::new(table, n, b).unwrap();
        let pairs = all_pairs(&w.elements());
        let r = check_pi_derivation(&WittDelta::new(w).unwrap(), &pairs).unwrap();
        assert!(r.pass, "{name}: {}", r.to_text());
    }
}

#[test]
fn zero_map_is_not_a_pi_derivation() {
    let t = BaseTriple::named("Z2").unwrap();
    let z4 = FiniteRing::named("Z4").unwrap();
    let zero = z4.zero();
    let d = MapDelta::new(z4.clone(), t, |x: &u32| *x, move |_: &u32| zero);
    let r = check_pi_derivation(&d, &all_pairs(&z4.elements())).unwrap();
    assert!(!r.pass);
    assert!(r.counterexample.is_some());
}

#[test]
fn witt_delta_needs_positive_level() {
    let t = BaseTriple::named("Z2").unwrap();
    let table = Arc::new(WittTable::build(t, 0, 64).unwrap());
    let w = WittRing::new(table, 0, FiniteRing::named("F2").unwrap()).unwrap();
    assert!(WittDelta::new(w).is_err());
}

#[test]
fn constant_and_jet_sequences_are_prolongation_sequences() {
    let t = BaseTriple::named("Z2").unwrap();
    let r = check_sequence(&PresentedSequence::constant(t.clone(), 3)).unwrap();
    assert!(r.pass, "{}", r.to_text());
    for spec in AlgebraSpec::default_matrix() {
        let a = spec.build(BaseRing::integral(t.clone())).unwrap();
        let r = check_sequence(&PresentedSequence::jets(&a, 2).unwrap()).unwrap();
        assert!(r.pass, "{}", r.to_text());
    }
}
