use proptest::prelude::*;

use sigma_core::catalog::catalog;
use sigma_core::dsl::Workspace;

fn atom() -> impl Strategy<Value = String> {
    prop_oneof![
        (1u32..=3).prop_map(|n| format!("Z({n})")),
        (1u32..=3).prop_map(|k| format!("free({k})")),
        (2u64..=6).prop_map(|m| format!("cyclic({m})")),
    ]
}

fn top() -> impl Strategy<Value = String> {
    prop_oneof![
        (1u32..=2).prop_map(|n| format!("Z({n})")),
        (2u64..=4).prop_map(|m| format!("cyclic({m})")),
        Just("free(2)".to_string()),
    ]
}

fn expr() -> impl Strategy<Value = String> {
    prop_oneof![
        atom(),
        prop::collection::vec(atom(), 2..=3).prop_map(|fs| format!("product({})", fs.join(", "))),
        (atom(), top()).prop_map(|(b, t)| format!("regular({b}, {t})")),
        (2u64..=5).prop_map(|m| format!("lamplighter({m})")),
    ]
}

fn rational() -> impl Strategy<Value = String> {
    (-9i64..=9, 1i64..=5).prop_map(|(p, q)| if q == 1 { p.to_string() } else { format!("{p}/{q}") })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn printed_workspaces_reparse(exprs in prop::collection::vec(expr(), 1..5), coords in prop::collection::vec(rational(), 8)) {
        let mut text = String::new();
        for (i, e) in exprs.iter().enumerate() {
            text.push_str(&format!("group g{i} = {e}\n"));
        }
        let ws = Workspace::parse(&text).unwrap();
        // One character per group of positive rank, first coordinate nonzero.
        for (i, def) in ws.groups.clone().iter().enumerate() {
            let rank = def.expr.abelianization().free_rank;
            if rank == 0 || rank > coords.len() {
                continue;
            }
            let mut cs: Vec<String> = coords[..rank].to_vec();
            cs[0] = "1".into();
            text.push_str(&format!("char c{i} on g{i} = [{}]\n", cs.join(", ")));
        }
        let ws = Workspace::parse(&text).unwrap();
        let printed = ws.to_text();
        let again = Workspace::parse(&printed).unwrap();
        prop_assert_eq!(&again, &ws);
        prop_assert_eq!(again.to_text(), printed);
    }
}

#[test]
fn catalog_text_is_a_fixed_point() {
    let ws = catalog();
    let text = ws.to_text();
    assert_eq!(Workspace::parse(&text).unwrap(), ws);
    assert_eq!(Workspace::parse(&text).unwrap().to_text(), text);
}

#[test]
fn errors_carry_positions() {
    let e = Workspace::parse("group a = Z(1)\ngroup b = frobnicate(2)\n").unwrap_err();
    assert_eq!(e.line, 2);
    let e = Workspace::parse("group a = Z(1)\ngroup a = Z(2)\n").unwrap_err();
    assert_eq!(e.line, 2);
    let e = Workspace::parse("char c on nowhere = [1]\n").unwrap_err();
    assert_eq!((e.line, e.column > 1), (1, true));
}
