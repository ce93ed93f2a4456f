//! Small hand-checked examples for each module, one assertion block per case.

use std::collections::BTreeMap;

use sigma_core::catalog::catalog;
use sigma_core::character::make_character;
use sigma_core::dsl::{ParseErrorKind, Workspace};
use sigma_core::group::validate_finiteness;
use sigma_core::lab::renz::Clause;
use sigma_core::lab::*;
use sigma_core::omega::{omega1, prop1_hypothesis, reidemeister_conclusions, Cardinality, Omega1Description, ReidKind};
use sigma_core::rational::{q, qvec};

fn lab(ws: &Workspace, name: &str) -> ConcreteGroup {
    let def = ws.group(name).unwrap();
    match &def.gens {
        Some(n) => ConcreteGroup::with_names(&def.expr, &n.iter().map(String::as_str).collect::<Vec<_>>()).unwrap(),
        None => ConcreteGroup::new(&def.expr).unwrap(),
    }
}

fn pos(i: i64) -> Elem {
    Elem::Abelian(vec![i])
}

#[test]
fn lamplighter_word_lights_two_lamps() {
    let g = lab(&catalog(), "lamp2");
    let e = g.evaluate_word("a s a s⁻¹").unwrap();
    let expected = Elem::Wreath {
        lamps: BTreeMap::from([(pos(0), Elem::Cyclic(1)), (pos(1), Elem::Cyclic(1))]),
        top: Box::new(pos(0)),
    };
    assert_eq!(e, expected);
    assert!(g.evaluate_word("").unwrap().is_identity());
    assert!(matches!(g.evaluate_word("a q"), Err(LabError::UnknownLetter { .. })));
}

#[test]
fn conjugated_lamp_sits_at_position_one() {
    let g = lab(&catalog(), "zwrz");
    let e = g.evaluate_word("z h z⁻¹").unwrap();
    let expected = Elem::Wreath {
        lamps: BTreeMap::from([(pos(1), Elem::Abelian(vec![1]))]),
        top: Box::new(pos(0)),
    };
    assert_eq!(e, expected);
}

#[test]
fn valuations_on_the_extended_alphabet() {
    let ws = catalog();
    let g = lab(&ws, "zwrz");
    let t = g.parse_word("z h z⁻¹").unwrap();
    let ext = g.extend("t", &t).unwrap();
    let chi = make_character(&ws.group("zwrz").unwrap().expr, qvec(&[1, 0])).unwrap();
    let w = ext.parse_word("z t z⁻¹ t⁻¹ z").unwrap();
    assert_eq!(ext.v_chi(&chi, &w).unwrap(), q(0));
    let w = ext.parse_word("t⁻¹ z t").unwrap();
    assert_eq!(ext.v_chi(&chi, &w).unwrap(), q(-1));
    assert_eq!(ext.v_chi(&chi, &[]).unwrap(), q(0));
}

#[test]
fn small_ball_sizes() {
    let ws = catalog();
    assert_eq!(ball(&lab(&ws, "z1"), 3).unwrap().vertex_count(), 7);
    assert_eq!(ball(&lab(&ws, "f2"), 2).unwrap().vertex_count(), 17);
    // Spheres of radius 0, 1, 2 for {a, s}: {e}, {a, s, s⁻¹}, {as, as⁻¹, sa, s², s⁻¹a, s⁻²};
    // a is an involution, so a and a⁻¹ are one vertex.
    let b = ball(&lab(&ws, "lamp2"), 2).unwrap();
    assert_eq!(b.sphere_sizes(), vec![1, 3, 6]);
    assert_eq!(b.vertex_count(), 10);
}

#[test]
fn evidence_examples() {
    let ws = catalog();
    let lamp = lab(&ws, "lamp2");
    let theta = ws.character("theta").unwrap().character.clone();
    assert!(connectivity_evidence(&ball(&lamp, 8).unwrap(), &theta, 2)
        .unwrap()
        .is_disconnection());

    let zz = lab(&ws, "zwrz");
    let eta = ws.character("eta1").unwrap().character.clone();
    assert!(!connectivity_evidence(&ball(&zz, 8).unwrap(), &eta, 2)
        .unwrap()
        .is_disconnection());

    let plane = Workspace::parse("group P = Z(2)").unwrap();
    let p = lab(&plane, "P");
    let b = ball(&p, 6).unwrap();
    for c in [[1, 0], [0, -1], [2, -3], [-1, -1]] {
        let chi = make_character(&plane.group("P").unwrap().expr, qvec(&c)).unwrap();
        assert!(!connectivity_evidence(&b, &chi, 2).unwrap().is_disconnection(), "{c:?}");
    }
    assert!(matches!(
        connectivity_evidence(
            &b,
            &make_character(&plane.group("P").unwrap().expr, qvec(&[1, 0])).unwrap(),
            6
        ),
        Err(LabError::BadMargin { .. })
    ));
}

#[test]
fn certificate_clauses() {
    let ws = catalog();
    let g = lab(&ws, "zwrz");
    let chi = ws.character("eta1").unwrap().character.clone();
    let good = RenzCertificate::from_json(
        r#"{"t": "z h z⁻¹", "t_letter": "t", "rewrites": [{"x": "h", "w": "h"}, {"x": "z", "w": "z t z⁻¹ t⁻¹ z"}]}"#,
    )
    .unwrap();
    assert!(verify_renz_certificate(&g, &chi, &good).unwrap().valid);

    let bad = RenzCertificate::from_json(
        r#"{"t": "z h z⁻¹", "t_letter": "t", "rewrites": [{"x": "h", "w": "h"}, {"x": "z", "w": "z"}]}"#,
    )
    .unwrap();
    let check = verify_renz_certificate(&g, &chi, &bad).unwrap();
    assert!(!check.valid);
    assert_eq!(check.failures[0].clause, Clause::Equality);
    assert_eq!(check.failures[0].generator.as_deref(), Some("z"));

    let flat =
        RenzCertificate::from_json(r#"{"t": "z", "t_letter": "z", "rewrites": [{"x": "h", "w": "h"}]}"#).unwrap();
    let check = verify_renz_certificate(&g, &chi, &flat).unwrap();
    assert_eq!(check.failures[0].clause, Clause::Positivity);

    // Round trip through JSON keeps the verdict.
    let again = RenzCertificate::from_json(&good.to_json()).unwrap();
    assert_eq!(again, good);
}

#[test]
fn search_examples() {
    let ws = catalog();
    let z = lab(&ws, "z1");
    let chi = make_character(&ws.group("z1").unwrap().expr, qvec(&[1])).unwrap();
    match find_renz_certificate(&z, &chi, 1, 2).unwrap() {
        SearchOutcome::Found { certificate } => {
            assert_eq!(certificate.t, "g1");
            assert!(certificate.rewrites.is_empty());
        }
        other => panic!("{other:?}"),
    }
    let lamp = lab(&ws, "lamp2");
    let theta = ws.character("theta").unwrap().character.clone();
    assert!(matches!(
        find_renz_certificate(&lamp, &theta, 4, 8).unwrap(),
        SearchOutcome::NotFound { .. }
    ));
    assert!(matches!(
        find_renz_certificate(&z, &chi, 0, 2),
        Err(LabError::BadBounds)
    ));
}

#[test]
fn omega_examples() {
    let ws = catalog();
    let expr = |n: &str| ws.group(n).unwrap().expr.clone();
    assert!(prop1_hypothesis(&expr("lamp2")).unwrap().is_certified());
    assert!(prop1_hypothesis(&expr("zwrz")).unwrap().is_certified());
    let card = |n: &str| match omega1(&expr(n)).unwrap() {
        Omega1Description::Certified { cardinality, .. } => cardinality,
        other => panic!("{n}: {other:?}"),
    };
    assert_eq!(card("zwrz"), Cardinality::TwoPoints);
    assert_eq!(card("lamp2"), Cardinality::Empty);
    assert_eq!(card("z2wrz"), Cardinality::PositiveDimensional { dimension: 1 });

    let kinds = |n: &str| {
        reidemeister_conclusions(&expr(n))
            .unwrap()
            .into_iter()
            .map(|c| c.kind)
            .collect::<Vec<_>>()
    };
    let zz = kinds("zwrz");
    assert!(zz.contains(&ReidKind::IndexTwoSubgroupRInfinity) && zz.contains(&ReidKind::FiniteIndexSubgroupRInfinity));
    assert_eq!(kinds("lamp2"), vec![ReidKind::FiniteIndexSubgroupRInfinity]);
    assert!(kinds("f2wrc3").is_empty());

    let singleton = Workspace::parse(
        "group S = wreath(base=Z(1), top=Z(1), orbits=[{size=1, stab=Z(1), stabmap=[[1]]}, {size=inf, stab=Z(0), stabmap=[]}])",
    )
    .unwrap();
    assert!(!prop1_hypothesis(&singleton.group("S").unwrap().expr)
        .unwrap()
        .is_certified());
}

#[test]
fn workspace_examples() {
    let ws = Workspace::parse(
        "group L = wreath(base=cyclic(2), top=Z(1), orbits=[{size=inf, stab=Z(0), stabmap=[]}])\nchar c on L = [1]\n",
    )
    .unwrap();
    assert_eq!(ws.character("c").unwrap().character.coords(), &qvec(&[1])[..]);
    let err = Workspace::parse(
        "group L = wreath(base=cyclic(2), top=Z(1), orbits=[{size=inf, stab=Z(0), stabmap=[]}])\nchar c on L = [1,2]\n",
    )
    .unwrap_err();
    assert_eq!(err.line, 2);
    assert!(matches!(
        err.kind,
        ParseErrorKind::DimensionMismatch { expected: 1, got: 2 }
    ));
}

#[test]
fn finiteness_examples() {
    let ws = catalog();
    let r = validate_finiteness(&ws.group("lamp2").unwrap().expr).unwrap();
    assert!(r.fg && r.fp);
    let w = Workspace::parse(
        "group W = wreath(base=Z(1), top=free(2), orbits=[{size=inf, stab=Z(0), stabmap=[], fg=false}], pairs=[])",
    )
    .unwrap();
    let r = validate_finiteness(&w.group("W").unwrap().expr).unwrap();
    assert!(r.fg && !r.fp, "{r:?}");
    assert!(!r.reasons.is_empty());
}
