use jetwitt::greenberg::{check_sections, comparison_v, greenberg_transform, GreenbergContext};
use jetwitt::verify::AlgebraSpec;
use jetwitt::{BaseTriple, Enumerable, FiniteRing, Ring};

fn ctx(name: &str, m: usize) -> GreenbergContext {
    GreenbergContext::new(BaseTriple::named(name).unwrap(), m, 64).unwrap()
}

fn rings(names: &[&str]) -> Vec<FiniteRing> {
    names.iter().map(|n| FiniteRing::named(n).unwrap()).collect()
}

#[test]
fn square_zero_over_z_mod_4() {
    let c = ctx("Z2", 2);
    let a = AlgebraSpec::new(&["x"], &["x^2"]).build(c.base_ring()).unwrap();
    let gr = greenberg_transform(&a, &c).unwrap();
    let names: Vec<String> = gr.presentation.generators.iter().map(|g| g.to_string()).collect();
    assert_eq!(names, ["x_0_0", "x_0_1"]);
    // The second Witt component of x^2 is 2(x0^2 x1 + x1^2), zero over F2.
    assert_eq!(gr.presentation.relations.len(), 1);
    assert_eq!(gr.presentation.relations[0].to_string(), "x_0_0^2");
}

#[test]
fn identity_when_m_and_e_are_one() {
    let c = ctx("Z2", 1);
    for spec in AlgebraSpec::default_matrix() {
        let a = spec.build(c.base_ring()).unwrap();
        let gr = greenberg_transform(&a, &c).unwrap();
        assert_eq!(gr.presentation.generators.len(), a.generators.len());
        let r = comparison_v(&a, &c, &rings(&["F2", "F4"]), 100_000).unwrap();
        assert!(r.pass, "{}", r.to_text());
    }
}

#[test]
fn unramified_comparison_is_bijective_everywhere() {
    let c = ctx("Z2", 2);
    for spec in AlgebraSpec::default_matrix() {
        let a = spec.build(c.base_ring()).unwrap();
        let r = comparison_v(&a, &c, &rings(&["F2", "F4", "F2[e]"]), 1_000_000).unwrap();
        assert!(r.pass, "{}", r.to_text());
        for part in &r.parts {
            assert_eq!(part.details["injective"], true, "{}", part.name);
            assert_eq!(part.details["surjective"], true, "{}", part.name);
        }
    }
}

#[test]
fn ramified_comparison_fails_injectivity_off_perfect_rings() {
    let c = ctx("GAUSS", 1);
    let a = AlgebraSpec::new(&["x"], &["x^2"]).build(c.base_ring()).unwrap();
    let r = comparison_v(&a, &c, &rings(&["F2", "F4", "F2[e]"]), 1_000_000).unwrap();
    assert!(r.pass, "{}", r.to_text());
    let by_name = |n: &str| r.parts.iter().find(|p| p.name == format!("B={n}")).unwrap();
    for b in ["F2", "F4"] {
        assert_eq!(by_name(b).details["injective"], true);
        assert_eq!(by_name(b).details["surjective"], true);
    }
    let dual = by_name("F2[e]");
    assert_eq!(dual.details["injective"], false);
    assert!(dual.details.contains_key("witness"));
}

#[test]
fn sections_form_a_ring_of_the_right_size() {
    for (name, m, b) in [("Z2", 2, "F2"), ("GAUSS", 1, "F2"), ("GAUSS", 1, "F4")] {
        let c = ctx(name, m);
        let r = check_sections(&c, &FiniteRing::named(b).unwrap()).unwrap();
        assert!(r.pass, "{}", r.to_text());
        let sections = c.sections(FiniteRing::named(b).unwrap().for_triple(&c.triple).unwrap()).unwrap();
        let size = FiniteRing::named(b).unwrap().size() as u128;
        assert_eq!(sections.cardinality(), size.pow((m * c.e) as u32));
        assert!(sections.is_zero(&sections.from_i64(1 << (m * c.e))));
    }
}
