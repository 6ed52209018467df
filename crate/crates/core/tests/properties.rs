use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use geoq::constructions::{blowup, ssg};
use geoq::diagram::{basic_diagram, direct_sum_check, is_pure, no_triangle_theorem_check};
use geoq::format::{
    parse_geometry, parse_graph, parse_group, parse_partition, serialize_geometry, serialize_graph, serialize_group,
    serialize_partition,
};
use geoq::geometry::{Flag, Pregeometry, TypeId};
use geoq::iso::{automorphism_group, isomorphic};
use geoq::perm::{PermGroup, DEFAULT_GROUP_CAP};
use geoq::quotient::{Partition, Projection};
use geoq::random::{
    random_far_partition, random_flag, random_geometry, random_graph, random_partition, random_subgroup,
};
use geoq::tits::OrbitQuotient;

fn geometry(seed: u64) -> (ChaCha8Rng, Pregeometry) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rank = rng.gen_range(1..=4);
    let g = random_geometry(&mut rng, rank, 4);
    (rng, g)
}

fn orbit_instance(seed: u64) -> (Pregeometry, PermGroup) {
    let (mut rng, g) = geometry(seed);
    let aut = automorphism_group(&g, DEFAULT_GROUP_CAP).expect("small geometries have small groups");
    let sub = random_subgroup(&mut rng, &aut, 2).expect("subgroups of a finite group");
    (g, sub)
}

fn config() -> ProptestConfig {
    ProptestConfig {
        cases: 64,
        ..ProptestConfig::default()
    }
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn geometry_files_round_trip(seed in any::<u64>()) {
        let (_, g) = geometry(seed);
        let text = serialize_geometry(&g);
        let back = parse_geometry(&text).unwrap();
        prop_assert_eq!(serialize_geometry(&back), text);
        prop_assert!(isomorphic(&g, &back));
    }

    #[test]
    fn partition_and_group_files_round_trip(seed in any::<u64>()) {
        let (mut rng, g) = geometry(seed);
        let part = random_partition(&mut rng, &g);
        let back = parse_partition(&g, &serialize_partition(&g, &part)).unwrap();
        prop_assert_eq!(back.blocks(), part.blocks());
        let aut = automorphism_group(&g, DEFAULT_GROUP_CAP).unwrap();
        let sub = random_subgroup(&mut rng, &aut, 2).unwrap();
        let parsed = parse_group(&g, &serialize_group(&g, &sub), DEFAULT_GROUP_CAP).unwrap();
        prop_assert_eq!(parsed.order().unwrap(), sub.order().unwrap());
        prop_assert_eq!(parsed.orbits(), sub.orbits());
    }

    #[test]
    fn graph_files_round_trip(seed in any::<u64>(), n in 1usize..8) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let graph = random_graph(&mut rng, n, 0.5);
        let back = parse_graph(&serialize_graph(&graph)).unwrap();
        prop_assert_eq!(back.edges().collect::<Vec<_>>(), graph.edges().collect::<Vec<_>>());
    }

    #[test]
    fn residues_and_truncations_of_geometries_are_geometries(seed in any::<u64>()) {
        let (mut rng, g) = geometry(seed);
        prop_assert!(g.is_geometry().holds());
        let f = random_flag(&mut rng, &g);
        let res = g.residue(&f).unwrap();
        prop_assert_eq!(res.geometry.rank() + f.rank(), g.rank());
        prop_assert!(res.geometry.is_geometry().holds());
        let types = g.all_types().subsets().filter(|s| !s.is_empty()).nth(rng.gen_range(0..(1usize << g.rank()) - 1)).unwrap();
        prop_assert!(g.truncation(types).unwrap().geometry.is_geometry().holds());
    }

    #[test]
    fn flags_are_pairwise_incident_with_distinct_types(seed in any::<u64>()) {
        let (_, g) = geometry(seed);
        prop_assert!(g.flags().contains(&Flag::empty()));
        for f in g.flags() {
            prop_assert_eq!(g.flag_type(f).len(), f.rank());
            for a in f.iter() {
                for b in f.iter() {
                    prop_assert!(g.incident(a, b));
                }
            }
        }
    }

    #[test]
    fn group_closure_contains_identity_and_inverses(seed in any::<u64>()) {
        let (g, a) = orbit_instance(seed);
        let elements = a.elements().unwrap();
        prop_assert!(elements.iter().any(|p| p.is_identity()));
        for p in elements {
            prop_assert!(a.contains(&p.inverse()).unwrap());
        }
        prop_assert!(Partition::from_orbits(&g, &a).unwrap().is_invariant_under(&a));
    }

    #[test]
    fn orbit_quotients_are_corank1_surjective(seed in any::<u64>()) {
        let (g, a) = orbit_instance(seed);
        let p = Projection::orbit_quotient(&g, &a).unwrap();
        prop_assert!(p.corank1_surjective().holds());
    }

    #[test]
    fn distance_three_blocks_are_corank1_injective(seed in any::<u64>()) {
        let (mut rng, g) = geometry(seed);
        let part = random_far_partition(&mut rng, &g, 3);
        let p = Projection::new(&g, part).unwrap();
        prop_assume!(p.min_block_distance().is_at_least(3));
        prop_assert!(p.corank1_injective().holds());
    }

    #[test]
    fn tits_axioms_imply_pq1_and_each_other(seed in any::<u64>()) {
        let (g, a) = orbit_instance(seed);
        let oq = OrbitQuotient::new(&g, a).unwrap();
        let tq2p = oq.check_tq2prime().unwrap().holds();
        let tq2pp = oq.check_tq2doubleprime().holds();
        let flagslift = oq.projection().check_flagslift().holds();
        if tq2p && tq2pp {
            prop_assert!(oq.projection().check_pq1().holds());
        }
        if flagslift && tq2p {
            prop_assert!(tq2pp);
        }
        prop_assert_eq!(oq.check_tq1().unwrap().holds(), tq2p && tq2pp);
    }

    #[test]
    fn direct_sum_and_no_triangle_are_never_violated(seed in any::<u64>()) {
        let (_, g) = geometry(seed);
        prop_assert!(direct_sum_check(&g).unwrap().consistent());
        prop_assert!(no_triangle_theorem_check(&g).unwrap().consistent());
    }

    #[test]
    fn non_adjacent_types_stay_non_adjacent_in_residues(seed in any::<u64>()) {
        let (_, g) = geometry(seed);
        let d = basic_diagram(&g).unwrap();
        for e in g.elements() {
            let res = g.residue(&Flag::new(vec![e])).unwrap();
            let rd = basic_diagram(&res.geometry).unwrap();
            let parent = |t: TypeId| res.types[t.0];
            for (i, j) in rd.edges() {
                prop_assert!(d.adjacent(parent(i), parent(j)));
            }
        }
    }

    #[test]
    fn flag_transitive_geometries_are_pure_iff_every_residue_agrees(seed in any::<u64>()) {
        let (g, a) = orbit_instance(seed);
        prop_assume!(geoq::perm::is_flag_transitive(&a, &g).unwrap());
        prop_assert!(is_pure(&g).unwrap().holds());
    }

    #[test]
    fn blowup_of_connected_by_connected_non_bipartite_is_connected(seed in any::<u64>(), n in 3usize..7) {
        let (mut rng, g) = geometry(seed);
        prop_assume!(g.rank() >= 2 && g.is_connected());
        let delta = random_graph(&mut rng, n, 0.6);
        prop_assume!(delta.is_connected() && !delta.is_bipartite());
        prop_assert!(blowup(&g, &delta).unwrap().geometry.is_connected());
    }
}

#[test]
fn subset_geometries_have_path_diagrams() {
    for (v, k) in [(3, 2), (4, 3), (5, 3), (5, 4)] {
        let d = basic_diagram(&ssg(v, k).unwrap()).unwrap();
        let path: Vec<(TypeId, TypeId)> = (1..k).map(|i| (TypeId(i - 1), TypeId(i))).collect();
        assert_eq!(d.edges(), path, "ssg({v},{k})");
    }
}
