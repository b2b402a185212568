mod oracle;

use proptest::prelude::*;

use ptmc::constructions::build_thm2;
use ptmc::cover::{eds_instance, enumerate, solve, ExactCoverInstance, SearchConfig};
use ptmc::gamma2::{canonical_vertex, gamma_truncated_distance, Axis, GammaVertex, TersquareAddress, Word};
use ptmc::lattice::{inflate_code, verify_pds, verify_t_ptmc};
use ptmc::metric::truncated_distance;
use ptmc::{Ambient, Graph, Point};

fn word() -> impl Strategy<Value = Word> {
    prop::collection::vec(0u8..3, 0..6).prop_map(|raw| {
        let mut w = Word::empty();
        for s in raw {
            if w.last() != Some(s) {
                w = w.glue(s);
            }
        }
        w
    })
}

fn address() -> impl Strategy<Value = TersquareAddress> {
    (word(), word()).prop_map(|(x, y)| TersquareAddress::new(x, y))
}

fn vertex() -> impl Strategy<Value = GammaVertex> {
    (address(), 0u8..3, 0u8..3).prop_map(|(j, a, b)| canonical_vertex(&j, a, b))
}

fn torus_pair() -> impl Strategy<Value = (Vec<i64>, Vec<i64>, Vec<i64>)> {
    prop::collection::vec(3i64..8, 1..5).prop_flat_map(|m| {
        let coords = |m: &Vec<i64>| m.iter().map(|&x| 0..x).collect::<Vec<_>>();
        (Just(m.clone()), coords(&m), coords(&m))
    })
}

proptest! {
    #[test]
    fn truncated_distance_matches_oracle((m, u, v) in torus_pair()) {
        let a = Ambient::torus(m.clone()).unwrap();
        let d = truncated_distance(&Point(u.clone()), &Point(v.clone()), &a).unwrap();
        prop_assert_eq!(d, oracle::trunc_dist(&u, &v, Some(&m)));
        prop_assert_eq!(d, truncated_distance(&Point(v.clone()), &Point(u.clone()), &a).unwrap());
        prop_assert!(d <= m.len() + 1);
        prop_assert_eq!(d == 0, u == v);
    }

    #[test]
    fn box_codes_survive_translation_and_inflation(
        c in prop::collection::vec(2i64..5, 1..4),
        shift in prop::collection::vec(-5i64..5, 3),
        mult in prop::collection::vec(1i64..3, 3),
    ) {
        let n = c.len();
        let k = vec![1; n];
        let (s, _) = build_thm2(&c, &k).unwrap();
        prop_assert!(verify_t_ptmc(&s, n).unwrap().is_pass());
        let moved = s.translate(&Point(shift[..n].to_vec())).unwrap();
        prop_assert!(verify_t_ptmc(&moved, n).unwrap().is_pass());
        let big = inflate_code(&s, &mult[..n]).unwrap();
        prop_assert!(verify_t_ptmc(&big, n).unwrap().is_pass());
    }

    #[test]
    fn glue_is_an_involution(j in address(), s in 0u8..3, y in any::<bool>()) {
        let axis = if y { Axis::Y } else { Axis::X };
        prop_assert_eq!(j.glue(axis, s).glue(axis, s), j);
    }

    #[test]
    fn canonical_form_is_stable(j in address(), a in 0u8..3, b in 0u8..3) {
        let v = canonical_vertex(&j, a, b);
        prop_assert_eq!(canonical_vertex(&v.address, v.a, v.b), v.clone());
        for t in v.tersquares() {
            prop_assert_eq!(canonical_vertex(&t, a, b), v.clone());
        }
        prop_assert_eq!(v.id().parse::<GammaVertex>().unwrap(), v);
    }

    #[test]
    fn adjacency_is_symmetric(v in vertex()) {
        let n = v.neighbors();
        prop_assert_eq!(n.len(), 8);
        for u in &n {
            prop_assert!(u.neighbors().contains(&v));
        }
    }

    #[test]
    fn gamma_distance_properties(u in vertex(), v in vertex()) {
        let d = gamma_truncated_distance(&u, &v);
        prop_assert_eq!(d, gamma_truncated_distance(&v, &u));
        prop_assert!(d <= 3);
        prop_assert_eq!(d == 1, u.neighbors().contains(&v));
    }

    #[test]
    fn cover_agrees_with_subsets(
        n in 1usize..9,
        raw in prop::collection::vec(prop::collection::vec(0usize..9, 1..4), 0..14),
    ) {
        let sets: Vec<Vec<usize>> = raw
            .into_iter()
            .map(|s| {
                let mut s: Vec<usize> = s.into_iter().map(|c| c % n).collect();
                s.sort_unstable();
                s.dedup();
                s
            })
            .collect();
        let inst = ExactCoverInstance::from_sets(n, &sets).unwrap();
        let e = enumerate(&inst, None, SearchConfig::default());
        prop_assert_eq!(&e.solutions, &oracle::exact_covers(n, &sets));
        for s in &e.solutions {
            prop_assert!(inst.is_exact_cover(s));
        }
        let first = solve(&inst, SearchConfig::default());
        prop_assert_eq!(first.solution().is_some(), !e.solutions.is_empty());
    }
}

#[test]
fn eds_solutions_are_isolated_pds() {
    for g in [Graph::grid(4, 4), Graph::cycle(9), Graph::path(7), Graph::complete(3)] {
        let e = enumerate(&eds_instance(&g), None, SearchConfig::default());
        assert!(!e.solutions.is_empty());
        for s in &e.solutions {
            let r = verify_pds(s, &g, true);
            assert!(r.is_pass() && r.isolated == Some(true));
        }
    }
}

#[test]
fn grid_4x4_matches_subset_count() {
    let e = enumerate(&eds_instance(&Graph::grid(4, 4)), None, SearchConfig::default());
    assert_eq!(e.solutions.len(), oracle::grid_eds_count(4, 4));
}
