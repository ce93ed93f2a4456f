use sigma_core::catalog::catalog;
use sigma_core::engine::{ray_grid, sigma1, Status};
use sigma_core::group::GroupExpr;
use sigma_core::omega::{omega1, prop1_hypothesis, reidemeister_conclusions, Omega1Description};
use sigma_core::rational::q;

fn wreaths() -> Vec<(String, GroupExpr)> {
    catalog()
        .groups
        .into_iter()
        .filter(|d| d.expr.as_wreath().is_some())
        .map(|d| (d.name, d.expr))
        .collect()
}

#[test]
fn omega_region_lies_in_sigma1() {
    let mut checked = 0;
    for (name, expr) in wreaths() {
        let Omega1Description::Certified { .. } = omega1(&expr).unwrap() else {
            continue;
        };
        let w = expr.as_wreath().unwrap();
        for ray in ray_grid(expr.abelianization().free_rank, 3) {
            let chi = ray.character();
            if chi.coords()[w.top_block()].iter().any(|x| *x != q(0)) {
                continue;
            }
            assert_eq!(
                sigma1(&expr, &chi).unwrap().status,
                Status::In,
                "{name} {:?}",
                chi.coords()
            );
            checked += 1;
        }
    }
    assert!(checked > 0);
}

#[test]
fn pair_data_does_not_matter() {
    for (name, expr) in wreaths() {
        let mut stripped = expr.clone();
        if let GroupExpr::Wreath(w) = &mut stripped {
            w.gset.pairs = None;
        }
        assert_eq!(
            prop1_hypothesis(&expr).unwrap(),
            prop1_hypothesis(&stripped).unwrap(),
            "{name}"
        );
        assert_eq!(omega1(&expr).unwrap(), omega1(&stripped).unwrap(), "{name}");
        assert_eq!(
            reidemeister_conclusions(&expr).unwrap(),
            reidemeister_conclusions(&stripped).unwrap(),
            "{name}"
        );
    }
}

#[test]
fn non_wreaths_are_rejected() {
    let ws = catalog();
    assert!(omega1(&ws.group("f2xz").unwrap().expr).is_err());
    assert!(reidemeister_conclusions(&ws.group("z1").unwrap().expr).is_err());
}
