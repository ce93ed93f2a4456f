use std::collections::HashMap;

use proptest::prelude::*;

use sigma_core::catalog::catalog;
use sigma_core::character::make_character;
use sigma_core::lab::word::inverse_word;
use sigma_core::lab::{ball, find_renz_certificate, verify_renz_certificate, ConcreteGroup, SearchOutcome, Word};
use sigma_core::rational::{q, qvec};

const GROUPS: [&str; 6] = ["zwrz", "lamp2", "f2xz", "zwr_z2_line", "f2wrc3", "z2wrz"];

fn group(i: usize) -> ConcreteGroup {
    let ws = catalog();
    ConcreteGroup::new(&ws.group(GROUPS[i]).unwrap().expr).unwrap()
}

fn word(g: &ConcreteGroup, picks: &[usize]) -> Word {
    let letters = g.letters();
    picks.iter().map(|&p| letters[p % letters.len()]).collect()
}

fn character(g: &ConcreteGroup, raw: &[i64]) -> Option<sigma_core::character::Character> {
    let dim = g.expr().abelianization().free_rank;
    let coords: Vec<i64> = raw.iter().copied().cycle().take(dim).collect();
    if coords.iter().all(|&x| x == 0) {
        return None;
    }
    make_character(g.expr(), qvec(&coords)).ok()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn evaluation_respects_concatenation(gi in 0..GROUPS.len(), u in prop::collection::vec(0usize..64, 0..12), v in prop::collection::vec(0usize..64, 0..12)) {
        let g = group(gi);
        let (u, v) = (word(&g, &u), word(&g, &v));
        let uv: Word = u.iter().chain(&v).copied().collect();
        prop_assert_eq!(g.evaluate(&uv), g.multiply(&g.evaluate(&u), &g.evaluate(&v)));
        prop_assert_eq!(g.evaluate(&inverse_word(&u)), g.inverse(&g.evaluate(&u)));
        let back: Word = u.iter().copied().chain(inverse_word(&u)).collect();
        prop_assert!(g.evaluate(&back).is_identity());
    }

    #[test]
    fn prefix_minimum_splits(gi in 0..GROUPS.len(), u in prop::collection::vec(0usize..64, 1..10), v in prop::collection::vec(0usize..64, 1..10), raw in prop::collection::vec(-3i64..=3, 3)) {
        let g = group(gi);
        let Some(chi) = character(&g, &raw) else { return Ok(()) };
        let (u, v) = (word(&g, &u), word(&g, &v));
        let uv: Word = u.iter().chain(&v).copied().collect();
        let chi_u = g.chi_value(&chi, &g.evaluate(&u)).unwrap();
        let split = std::cmp::min(g.v_chi(&chi, &u).unwrap(), chi_u + g.v_chi(&chi, &v).unwrap());
        prop_assert_eq!(g.v_chi(&chi, &uv).unwrap(), split);
    }

    #[test]
    fn character_is_a_homomorphism(gi in 0..GROUPS.len(), u in prop::collection::vec(0usize..64, 0..10), v in prop::collection::vec(0usize..64, 0..10), raw in prop::collection::vec(-3i64..=3, 3)) {
        let g = group(gi);
        let Some(chi) = character(&g, &raw) else { return Ok(()) };
        let (a, b) = (g.evaluate(&word(&g, &u)), g.evaluate(&word(&g, &v)));
        let lhs = g.chi_value(&chi, &g.multiply(&a, &b)).unwrap();
        prop_assert_eq!(lhs, g.chi_value(&chi, &a).unwrap() + g.chi_value(&chi, &b).unwrap());
        prop_assert_eq!(g.chi_value(&chi, &g.identity()).unwrap(), q(0));
    }
}

#[test]
fn balls_grow_by_extension() {
    for (gi, name) in GROUPS.iter().enumerate() {
        let g = group(gi);
        let mut prev: Option<HashMap<_, u32>> = None;
        for r in 0..=5 {
            let b = ball(&g, r).unwrap();
            let depth: HashMap<_, u32> = b
                .vertices()
                .iter()
                .cloned()
                .enumerate()
                .map(|(i, e)| (e, b.depth(i)))
                .collect();
            if let Some(p) = &prev {
                assert!(depth.len() >= p.len());
                for (e, d) in p {
                    assert_eq!(depth.get(e), Some(d), "{name} R={r}");
                }
            }
            // Every non-identity vertex has a neighbour one step closer.
            let mut closer = vec![false; b.vertex_count()];
            closer[0] = true;
            for &(u, v, _) in b.edges() {
                if b.depth(u) + 1 == b.depth(v) {
                    closer[v] = true;
                }
                if b.depth(v) + 1 == b.depth(u) {
                    closer[u] = true;
                }
            }
            assert!(closer.iter().all(|&c| c), "{name} R={r}");
            // Vertices really are the words that name them.
            for (i, e) in b.vertices().iter().enumerate() {
                assert_eq!(&g.evaluate(&b.word_to(i)), e);
                assert_eq!(b.word_to(i).len() as u32, b.depth(i));
            }
            prev = Some(depth);
        }
    }
}

#[test]
fn searched_certificates_verify() {
    let mut found = 0;
    for gi in [0usize, 2, 3, 5] {
        let g = group(gi);
        let dim = g.expr().abelianization().free_rank;
        for ray in sigma_core::engine::ray_grid(dim, 2) {
            let chi = ray.character();
            if let SearchOutcome::Found { certificate } = find_renz_certificate(&g, &chi, 2, 4).unwrap() {
                let check = verify_renz_certificate(&g, &chi, &certificate).unwrap();
                assert!(check.valid, "{}: {:?}", GROUPS[gi], check.failures);
                found += 1;
            }
        }
    }
    assert!(found > 0);
}

#[test]
fn search_is_deterministic() {
    let g = group(0);
    let chi = make_character(g.expr(), qvec(&[2, -3])).unwrap();
    let a = find_renz_certificate(&g, &chi, 3, 5).unwrap();
    let b = find_renz_certificate(&g, &chi, 3, 5).unwrap();
    assert_eq!(a, b);
}
