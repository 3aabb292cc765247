use std::fs;

use proptest::prelude::*;

use jetwitt::json::{
    parse_poly, poly_from_json, poly_to_json, presentation_from_json, presentation_to_json, table_from_json,
    table_hash, table_to_json, to_canonical_string, CacheOutcome, TableCache,
};
use jetwitt::presentation::AlgebraPresentation;
use jetwitt::witt::WittTable;
use jetwitt::{BaseRing, BaseTriple, JetVar, MultiPoly, PolyRing, Ring};

fn z2_ring() -> PolyRing {
    PolyRing::new(BaseRing::integral(BaseTriple::named("Z2").unwrap()))
}

fn gens() -> Vec<JetVar> {
    vec![JetVar::new("x", 0, 0), JetVar::new("y", 0, 0), JetVar::new("x", 0, 1)]
}

/// Random polynomials as sums of `c * x^a y^b x'^c` terms.
fn poly_strategy() -> impl Strategy<Value = MultiPoly> {
    prop::collection::vec((-20i64..=20, 0u32..4, 0u32..4, 0u32..3), 0..6).prop_map(|terms| {
        let r = z2_ring();
        let g = gens();
        terms.into_iter().fold(r.zero(), |acc, (c, a, b, d)| {
            let m = r.mul(
                &r.mul(&r.pow(&r.var(g[0].clone()), a as u64), &r.pow(&r.var(g[1].clone()), b as u64)),
                &r.pow(&r.var(g[2].clone()), d as u64),
            );
            r.add(&acc, &r.mul(&r.from_i64(c), &m))
        })
    })
}

proptest! {
    #[test]
    fn poly_json_round_trip(p in poly_strategy()) {
        let r = z2_ring();
        let back = poly_from_json(&poly_to_json(&p), &r).unwrap();
        prop_assert_eq!(back, p);
    }

    #[test]
    fn printed_polys_parse_back(p in poly_strategy()) {
        let r = z2_ring();
        let back = parse_poly(&p.to_string(), &r, &gens()).unwrap();
        prop_assert_eq!(back, p);
    }

    #[test]
    fn presentation_round_trip(rels in prop::collection::vec(poly_strategy(), 0..3)) {
        let base = BaseRing::quotient(BaseTriple::named("Z2").unwrap(), 3);
        let r = PolyRing::new(base.clone());
        let rels: Vec<_> = rels.iter().map(|p| z2_ring().change_base(p, &r)).filter(|p| !p.is_zero()).collect();
        let a = AlgebraPresentation::new(base, gens(), rels).unwrap();
        let back = presentation_from_json(&presentation_to_json(&a, 0)).unwrap();
        prop_assert_eq!(back.generators, a.generators);
        prop_assert_eq!(back.relations, a.relations);
        prop_assert!(back.base.same_as(&a.base));
    }
}

#[test]
fn parser_handles_precedence_and_parentheses() {
    let r = z2_ring();
    let g = gens();
    let parse = |s: &str| parse_poly(s, &r, &g).unwrap();
    assert_eq!(parse("(x+y)^2"), parse("x^2 + 2*x*y + y^2"));
    assert_eq!(parse("-x^2"), r.neg(&parse("x*x")));
    assert_eq!(parse("x - (y - 1)"), parse("1 + x - y"));
    assert!(parse_poly("x +", &r, &g).is_err());
    assert!(parse_poly("w", &r, &g).is_err());
}

#[test]
fn tables_survive_a_json_round_trip() {
    for (name, n) in [("Z2", 2), ("GAUSS", 1), ("EISEN", 1)] {
        let t = WittTable::build(BaseTriple::named(name).unwrap(), n, 64).unwrap();
        let text = to_canonical_string(&table_to_json(&t));
        let back = table_from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back, t);
        back.verify().unwrap();
        // Canonical output is stable.
        assert_eq!(to_canonical_string(&table_to_json(&back)), text);
    }
}

#[test]
fn table_hash_depends_on_triple_and_level() {
    let z2 = BaseTriple::named("Z2").unwrap();
    let gauss = BaseTriple::named("GAUSS").unwrap();
    assert_eq!(table_hash(&z2, 1), table_hash(&z2, 1));
    assert_ne!(table_hash(&z2, 1), table_hash(&z2, 2));
    assert_ne!(table_hash(&z2, 1), table_hash(&gauss, 1));
}

#[test]
fn cache_builds_then_loads_and_rejects_tampering() {
    let dir = tempfile::tempdir().unwrap();
    let triple = BaseTriple::named("Z2").unwrap();
    let cache = TableCache::new(dir.path(), false);
    let (built, how) = cache.get(triple.clone(), 1, 64).unwrap();
    assert_eq!(how, CacheOutcome::Built);
    let (loaded, how) = cache.get(triple.clone(), 1, 64).unwrap();
    assert_eq!(how, CacheOutcome::Loaded);
    assert_eq!(built, loaded);

    // Swap S_1 for P_1: the file still parses but no longer verifies.
    let path = cache.path(&triple, 1);
    let mut v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    v["sum"][1] = v["prod"][1].clone();
    fs::write(&path, to_canonical_string(&v)).unwrap();
    assert!(cache.get(triple.clone(), 1, 64).is_err());
    let trusting = TableCache::new(dir.path(), true);
    let (_, how) = trusting.get(triple, 1, 64).unwrap();
    assert_eq!(how, CacheOutcome::LoadedUnverified);
}
