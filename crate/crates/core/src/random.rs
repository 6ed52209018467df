//! Seeded generators for randomized checks. `GEOQ_SEED` overrides the
//! default seed; each suite derives its own stream from a label so suites
//! stay reproducible independently of each other.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::coset::{coset_pregeometry, overgroup_partition, CosetGeometry, FiniteGroup, Subgroup};
use crate::error::Result;
use crate::geometry::{ElementId, Flag, Pregeometry, PregeometryBuilder, TypeId, Verdict};
use crate::graph::SimpleGraph;
use crate::perm::{PermGroup, Permutation};
use crate::quotient::Partition;

pub const DEFAULT_SEED: u64 = 20_240_917;

/// The seed from `GEOQ_SEED` (decimal or `0x` hex), else [`DEFAULT_SEED`].
pub fn seed() -> u64 {
    std::env::var("GEOQ_SEED")
        .ok()
        .and_then(|s| {
            let s = s.trim();
            match s.strip_prefix("0x") {
                Some(hex) => u64::from_str_radix(hex, 16).ok(),
                None => s.parse().ok(),
            }
        })
        .unwrap_or(DEFAULT_SEED)
}

/// A generator for the stream named `label`.
pub fn rng_for(label: &str) -> ChaCha8Rng {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in label.bytes() {
        h = (h ^ b as u64).wrapping_mul(0x0100_0000_01b3);
    }
    ChaCha8Rng::seed_from_u64(seed() ^ h)
}

fn build(rank: usize, sizes: &[usize], pairs: &[(usize, usize)]) -> Pregeometry {
    let mut b = PregeometryBuilder::new();
    let types: Vec<TypeId> = (0..rank).map(|t| b.add_type(t.to_string())).collect();
    for (t, &n) in sizes.iter().enumerate() {
        for k in 0..n {
            b.add_element(format!("{t}.{k}"), types[t]);
        }
    }
    for &(x, y) in pairs {
        b.incidence(ElementId(x), ElementId(y));
    }
    b.build().expect("generated ids are in range")
}

/// A random geometry with `rank` types and 1..=`max_per_type` elements of
/// each type. Chambers are added at random, then every maximal flag that is
/// not a chamber is completed to one until the result is a geometry.
pub fn random_geometry(rng: &mut impl Rng, rank: usize, max_per_type: usize) -> Pregeometry {
    let sizes: Vec<usize> = (0..rank).map(|_| rng.gen_range(1..=max_per_type)).collect();
    let offsets: Vec<usize> = sizes
        .iter()
        .scan(0, |acc, &n| {
            let o = *acc;
            *acc += n;
            Some(o)
        })
        .collect();
    let total: usize = sizes.iter().sum();
    let mut pairs = Vec::new();
    let add_chamber = |pairs: &mut Vec<(usize, usize)>, fixed: &[usize], rng: &mut dyn rand::RngCore| {
        let chamber: Vec<usize> = (0..rank)
            .map(|t| {
                fixed
                    .iter()
                    .copied()
                    .find(|&e| e >= offsets[t] && e < offsets[t] + sizes[t])
                    .unwrap_or_else(|| offsets[t] + rng.gen_range(0..sizes[t]))
            })
            .collect();
        for (i, &x) in chamber.iter().enumerate() {
            for &y in &chamber[i + 1..] {
                pairs.push((x, y));
            }
        }
    };
    for e in 0..total {
        add_chamber(&mut pairs, &[e], rng);
    }
    for _ in 0..rng.gen_range(0..=total) {
        add_chamber(&mut pairs, &[], rng);
    }
    loop {
        let g = build(rank, &sizes, &pairs);
        match g.is_geometry() {
            Verdict::Holds => return g,
            Verdict::Fails(flag) => {
                let fixed: Vec<usize> = flag.iter().map(|e| e.0).collect();
                add_chamber(&mut pairs, &fixed, rng);
            }
        }
    }
}

/// Each type class is cut into a random number of random blocks.
pub fn random_partition(rng: &mut impl Rng, geom: &Pregeometry) -> Partition {
    let mut blocks = Vec::new();
    for t in geom.type_ids() {
        let members = geom.elements_of_type(t);
        if members.is_empty() {
            continue;
        }
        let k = rng.gen_range(1..=members.len());
        let mut parts = vec![Vec::new(); k];
        for &e in members {
            parts[rng.gen_range(0..k)].push(e);
        }
        blocks.extend(parts.into_iter().filter(|p| !p.is_empty()));
    }
    Partition::new(geom, blocks).expect("blocks stay inside type classes")
}

/// Random merges that keep distinct members of a block at incidence
/// distance at least `min_distance`.
pub fn random_far_partition(rng: &mut impl Rng, geom: &Pregeometry, min_distance: usize) -> Partition {
    let dist: Vec<_> = geom.elements().map(|e| geom.distances_from(e)).collect();
    let mut blocks: Vec<Vec<ElementId>> = Vec::new();
    let mut order: Vec<ElementId> = geom.elements().collect();
    order.shuffle(rng);
    for e in order {
        let mut fits: Vec<usize> = blocks
            .iter()
            .enumerate()
            .filter(|(_, b)| {
                geom.type_of(b[0]) == geom.type_of(e) && b.iter().all(|&x| dist[x.0][e.0].is_at_least(min_distance))
            })
            .map(|(k, _)| k)
            .collect();
        fits.push(usize::MAX);
        match *fits.choose(rng).expect("nonempty") {
            usize::MAX => blocks.push(vec![e]),
            k => blocks[k].push(e),
        }
    }
    Partition::new(geom, blocks).expect("blocks stay inside type classes")
}

/// A subgroup generated by up to `max_gens` random elements of `group`.
pub fn random_subgroup(rng: &mut impl Rng, group: &PermGroup, max_gens: usize) -> Result<PermGroup> {
    let elements = group.elements()?;
    let gens = (0..rng.gen_range(1..=max_gens.max(1)))
        .map(|_| elements.choose(rng).expect("groups are nonempty").clone())
        .collect();
    PermGroup::new(group.degree(), gens, group.cap())
}

/// A random permutation of `0..n` that is a product of a few random
/// transpositions, so that generated groups vary in size.
pub fn random_sparse_permutation(rng: &mut impl Rng, n: usize) -> Permutation {
    let mut images: Vec<usize> = (0..n).collect();
    for _ in 0..rng.gen_range(1..=n.max(1)) {
        let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
        images.swap(a, b);
    }
    Permutation::from_images(images).expect("swaps keep a permutation")
}

pub fn random_graph(rng: &mut impl Rng, n: usize, p: f64) -> SimpleGraph {
    let names = (0..n).map(|v| format!("v{v}")).collect();
    let edges: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
        .filter(|_| rng.gen_bool(p))
        .collect();
    SimpleGraph::new(names, edges).expect("edges are in range")
}

/// A `Z_k` voltage lift of a rank-2 pregeometry: elements `(α, i)` with
/// `(α, i) * (β, i + v)` for a random voltage `v` on each incidence `α < β`.
/// The cyclic shift acts semiregularly and its orbit-quotient is `base`.
pub fn voltage_lift(rng: &mut impl Rng, base: &Pregeometry, k: usize) -> (Pregeometry, PermGroup) {
    let n = base.num_elements();
    let mut b = PregeometryBuilder::new();
    for t in base.type_ids() {
        b.add_type(base.type_name(t));
    }
    for e in base.elements() {
        for i in 0..k {
            b.add_element(format!("{}~{i}", base.name(e)), base.type_of(e));
        }
    }
    let id = |e: ElementId, i: usize| ElementId(e.0 * k + i % k);
    for (x, y) in base.incidences() {
        let v = rng.gen_range(0..k);
        for i in 0..k {
            b.incidence(id(x, i), id(y, i + v));
        }
    }
    let lift = b.build().expect("generated ids are in range");
    let shift = Permutation::from_images((0..n * k).map(|z| (z / k) * k + (z % k + 1) % k).collect())
        .expect("a shift is a permutation");
    let group = PermGroup::new(n * k, vec![shift], k.max(1)).expect("the shift generates Z_k");
    (lift, group)
}

/// Small groups for coset instances.
pub fn small_groups() -> Vec<FiniteGroup> {
    let z = |n| FiniteGroup::cyclic(n).expect("cyclic groups exist");
    vec![
        z(4),
        z(6),
        FiniteGroup::power(&z(2), 2).expect("Z2^2"),
        FiniteGroup::power(&z(2), 3).expect("Z2^3"),
        FiniteGroup::symmetric(3).expect("S3"),
        FiniteGroup::dihedral(4).expect("D4"),
        FiniteGroup::dihedral(5).expect("D5"),
        FiniteGroup::direct_product(&z(2), &FiniteGroup::symmetric(3).expect("S3")),
        FiniteGroup::symmetric(4).expect("S4"),
    ]
}

/// A coset pregeometry of a random small group with random subgroups, each
/// generated by one or two random elements, together with a `G`-invariant
/// partition from random overgroups.
pub struct CosetInstance {
    pub group: FiniteGroup,
    pub subgroups: Vec<Subgroup>,
    pub coset: CosetGeometry,
    pub partition: Partition,
}

pub fn random_coset_instance(rng: &mut impl Rng, max_rank: usize) -> Result<CosetInstance> {
    let groups = small_groups();
    let group = groups.choose(rng).expect("nonempty").clone();
    let rank = rng.gen_range(2..=max_rank.max(2));
    let random_sub = |rng: &mut dyn rand::RngCore, base: &[usize]| {
        let extra = (0..rng.gen_range(0..=2)).map(|_| rng.gen_range(0..group.order()));
        group.generated(base.iter().copied().chain(extra))
    };
    let subgroups: Vec<Subgroup> = (0..rank).map(|_| random_sub(rng, &[])).collect();
    let overgroups: Vec<Subgroup> = subgroups.iter().map(|h| random_sub(rng, h.members())).collect();
    let coset = coset_pregeometry(&group, &subgroups, None, 100_000)?;
    let partition = overgroup_partition(&coset, &group, &subgroups, &overgroups)?;
    Ok(CosetInstance {
        group,
        subgroups,
        coset,
        partition,
    })
}

/// A random flag of `geom`, grown greedily from a random element.
pub fn random_flag(rng: &mut impl Rng, geom: &Pregeometry) -> Flag {
    let mut flag = Flag::empty();
    let mut order: Vec<ElementId> = geom.elements().collect();
    order.shuffle(rng);
    for e in order {
        if rng.gen_bool(0.5) && geom.is_flag(&flag.with(e)) {
            flag = flag.with(e);
        }
    }
    flag
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quotient::Projection;

    #[test]
    fn random_geometries_are_geometries() {
        let mut rng = rng_for("unit-geometry");
        for _ in 0..30 {
            let rank = rng.gen_range(1..=4);
            let g = random_geometry(&mut rng, rank, 4);
            assert!(g.validate().is_ok());
            assert!(g.is_geometry().holds());
        }
    }

    #[test]
    fn streams_are_reproducible() {
        let a = random_geometry(&mut rng_for("same"), 3, 4);
        let b = random_geometry(&mut rng_for("same"), 3, 4);
        assert_eq!(a, b);
    }

    #[test]
    fn voltage_lifts_cover_their_base() {
        let mut rng = rng_for("unit-voltage");
        for _ in 0..10 {
            let base = random_geometry(&mut rng, 2, 4);
            let (lift, group) = voltage_lift(&mut rng, &base, 3);
            let p = Projection::orbit_quotient(&lift, &group).unwrap();
            assert!(p.is_cover().holds());
            assert!(crate::iso::isomorphic(p.quotient(), &base));
        }
    }

    #[test]
    fn far_partitions_respect_distance() {
        let mut rng = rng_for("unit-far");
        let g = random_geometry(&mut rng, 3, 5);
        let part = random_far_partition(&mut rng, &g, 4);
        assert!(crate::quotient::min_block_distance(&g, &part).is_at_least(4));
    }

    #[test]
    fn coset_instances_build() {
        let mut rng = rng_for("unit-coset");
        for _ in 0..10 {
            let inst = random_coset_instance(&mut rng, 3).unwrap();
            assert!(inst.partition.is_invariant_under(&inst.coset.action));
        }
    }
}
