//! Type-refining partitions, quotient pregeometries and the projection map.
//!
//! The deciders here enumerate flags of the source or the quotient and
//! report the least failing flag in (rank, lexicographic) order.

use std::collections::{BTreeSet, HashSet};

use crate::error::{GeoError, Result};
use crate::geometry::{Distance, ElementId, Flag, Pregeometry, TypeId, Verdict};
use crate::perm::{PermGroup, Permutation};

/// A partition of the element set whose blocks each lie inside one type.
/// Blocks are kept sorted and ordered by `(type, least member)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    blocks: Vec<Vec<ElementId>>,
    block_of: Vec<usize>,
}

impl Partition {
    /// Validates and normalises `blocks` against `geom`.
    pub fn new(geom: &Pregeometry, blocks: Vec<Vec<ElementId>>) -> Result<Self> {
        let n = geom.num_elements();
        let mut owner = vec![usize::MAX; n];
        let mut blocks: Vec<Vec<ElementId>> = blocks
            .into_iter()
            .map(|mut b| {
                b.sort_unstable();
                b
            })
            .collect();
        for (k, block) in blocks.iter().enumerate() {
            let Some(&first) = block.first() else {
                return Err(GeoError::InvalidPartition("empty block".into()));
            };
            for &e in block {
                if e.0 >= n {
                    return Err(GeoError::UnknownElement(e.0.to_string()));
                }
                if owner[e.0] != usize::MAX {
                    return Err(GeoError::InvalidPartition(format!(
                        "element `{}` lies in two blocks",
                        geom.name(e)
                    )));
                }
                owner[e.0] = k;
                if geom.type_of(e) != geom.type_of(first) {
                    return Err(GeoError::NotTypeRefining(format!(
                        "`{}` and `{}` share a block but not a type",
                        geom.name(first),
                        geom.name(e)
                    )));
                }
            }
        }
        if let Some(e) = owner.iter().position(|&o| o == usize::MAX) {
            return Err(GeoError::InvalidPartition(format!(
                "element `{}` is in no block",
                geom.name(ElementId(e))
            )));
        }
        blocks.sort_by_key(|b| (geom.type_of(b[0]), b[0]));
        let mut block_of = vec![0; n];
        for (k, block) in blocks.iter().enumerate() {
            for e in block {
                block_of[e.0] = k;
            }
        }
        Ok(Partition { blocks, block_of })
    }

    pub fn singletons(geom: &Pregeometry) -> Self {
        Partition::new(geom, geom.elements().map(|e| vec![e]).collect())
            .expect("singletons always form a type-refining partition")
    }

    /// The partition into classes of equal type.
    pub fn by_type(geom: &Pregeometry) -> Self {
        Partition::new(
            geom,
            geom.type_ids()
                .map(|t| geom.elements_of_type(t).to_vec())
                .filter(|b| !b.is_empty())
                .collect(),
        )
        .expect("type classes are type-refining")
    }

    /// Orbits of `group`, after checking that it acts by automorphisms.
    pub fn from_orbits(geom: &Pregeometry, group: &PermGroup) -> Result<Self> {
        group.check_automorphisms(geom)?;
        let blocks = group
            .orbits()
            .into_iter()
            .map(|o| o.into_iter().map(ElementId).collect())
            .collect();
        Partition::new(geom, blocks)
    }

    pub fn blocks(&self) -> &[Vec<ElementId>] {
        &self.blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn block(&self, k: usize) -> &[ElementId] {
        &self.blocks[k]
    }

    pub fn block_of(&self, e: ElementId) -> usize {
        self.block_of[e.0]
    }

    pub fn is_singletons(&self) -> bool {
        self.blocks.iter().all(|b| b.len() == 1)
    }

    /// Every group element maps blocks onto blocks.
    pub fn is_invariant_under(&self, group: &PermGroup) -> bool {
        group.generators().iter().all(|g| {
            self.blocks.iter().all(|b| {
                let target = self.block_of[g.apply(b[0].0)];
                b.iter().all(|e| self.block_of[g.apply(e.0)] == target)
            })
        })
    }
}

/// Minimum incidence-graph distance between distinct members of a block,
/// or `Infinite` when every block is a singleton or no such pair is joined.
pub fn min_block_distance(geom: &Pregeometry, part: &Partition) -> Distance {
    let mut best = Distance::Infinite;
    for block in part.blocks().iter().filter(|b| b.len() > 1) {
        for (i, &a) in block.iter().enumerate() {
            let dist = geom.distances_from(a);
            for &b in &block[i + 1..] {
                best = best.min(dist[b.0]);
            }
        }
    }
    best
}

/// Why the restriction of the projection to a residue is not an
/// isomorphism onto the quotient residue.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoverDefect {
    /// Two residue elements land in the same block.
    NotInjective(ElementId, ElementId),
    /// A quotient residue block has no preimage in the residue.
    NotSurjective(ElementId),
    /// A residue element whose image lies outside the quotient residue.
    OutsideTarget(ElementId),
    /// Incident source elements with nonincident images (never happens
    /// for a genuine quotient; checked anyway).
    IncidenceNotPreserved(ElementId, ElementId),
    /// Nonincident source elements with incident images.
    IncidenceNotReflected(ElementId, ElementId),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverWitness {
    pub flag: Flag,
    pub defect: CoverDefect,
}

impl CoverWitness {
    pub fn describe(&self, p: &Projection) -> String {
        let (s, q) = (p.source(), p.quotient());
        let detail = match self.defect {
            CoverDefect::NotInjective(a, b) => format!("{} and {} share a block", s.name(a), s.name(b)),
            CoverDefect::NotSurjective(b) => format!("misses {}", q.name(b)),
            CoverDefect::OutsideTarget(a) => format!("{} maps outside the quotient residue", s.name(a)),
            CoverDefect::IncidenceNotPreserved(a, b) => {
                format!("{} and {} are incident but their blocks are not", s.name(a), s.name(b))
            }
            CoverDefect::IncidenceNotReflected(a, b) => {
                format!("{} and {} are not incident but their blocks are", s.name(a), s.name(b))
            }
        };
        format!("residue of {}: {detail}", s.describe_flag(&self.flag))
    }
}

/// A quotient `Γ/B` together with its source and the projection `π`.
#[derive(Clone, Debug)]
pub struct Projection {
    source: Pregeometry,
    quotient: Pregeometry,
    partition: Partition,
}

impl Projection {
    /// Builds `Γ/B`: one element per block, labelled by the sorted list of
    /// member names, with blocks incident when some members are.
    pub fn new(source: &Pregeometry, partition: Partition) -> Result<Self> {
        if partition.block_of.len() != source.num_elements() {
            return Err(GeoError::InvalidPartition(
                "partition does not match the element set".into(),
            ));
        }
        for block in partition.blocks() {
            let t = source.type_of(block[0]);
            if block.iter().any(|&e| source.type_of(e) != t) {
                return Err(GeoError::NotTypeRefining(format!(
                    "block of `{}` is not type-refining",
                    source.name(block[0])
                )));
            }
        }
        let elements = partition
            .blocks()
            .iter()
            .map(|b| {
                let names: Vec<&str> = b.iter().map(|&e| source.name(e)).collect();
                (format!("{{{}}}", names.join(",")), source.type_of(b[0]))
            })
            .collect();
        let mut pairs = BTreeSet::new();
        for (a, b) in source.incidences() {
            let (x, y) = (partition.block_of(a), partition.block_of(b));
            pairs.insert((x.min(y), x.max(y)));
        }
        let quotient = Pregeometry::new(
            source.type_names().to_vec(),
            elements,
            pairs.into_iter().map(|(x, y)| (ElementId(x), ElementId(y))),
        )?;
        Ok(Projection {
            source: source.clone(),
            quotient,
            partition,
        })
    }

    pub fn orbit_quotient(source: &Pregeometry, group: &PermGroup) -> Result<Self> {
        Projection::new(source, Partition::from_orbits(source, group)?)
    }

    pub fn source(&self) -> &Pregeometry {
        &self.source
    }

    pub fn quotient(&self) -> &Pregeometry {
        &self.quotient
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn project(&self, e: ElementId) -> ElementId {
        ElementId(self.partition.block_of(e))
    }

    pub fn block(&self, b: ElementId) -> &[ElementId] {
        self.partition.block(b.0)
    }

    /// The action of `group` on the blocks. The partition must be
    /// invariant under `group`.
    pub fn induced_group(&self, group: &PermGroup) -> Result<PermGroup> {
        if group.degree() != self.source.num_elements() {
            return Err(GeoError::DegreeMismatch {
                expected: self.source.num_elements(),
                found: group.degree(),
            });
        }
        if !self.partition.is_invariant_under(group) {
            return Err(GeoError::Hypothesis(
                "the partition is not invariant under the group".into(),
            ));
        }
        let gens = group
            .generators()
            .iter()
            .map(|g| {
                Permutation::from_images(
                    self.partition
                        .blocks()
                        .iter()
                        .map(|b| self.partition.block_of(g.image(b[0])))
                        .collect(),
                )
            })
            .collect::<Result<Vec<_>>>()?;
        PermGroup::new(self.quotient.num_elements(), gens, group.cap())
    }

    pub fn project_flag(&self, flag: &Flag) -> Result<Flag> {
        self.source.check_flag(flag)?;
        Ok(Flag::new(flag.iter().map(|e| self.project(e)).collect()))
    }

    fn image_set(&self, elements: &[ElementId]) -> BTreeSet<ElementId> {
        elements.iter().map(|&e| self.project(e)).collect()
    }

    fn lifts(&self, blocks: &[ElementId], chosen: &mut Vec<ElementId>, stop_at_first: bool, out: &mut Vec<Flag>) {
        if blocks.is_empty() {
            out.push(Flag::new(chosen.clone()));
            return;
        }
        for &e in self.block(blocks[0]) {
            if chosen.iter().all(|&c| self.source.incident(c, e)) {
                chosen.push(e);
                self.lifts(&blocks[1..], chosen, stop_at_first, out);
                chosen.pop();
                if stop_at_first && !out.is_empty() {
                    return;
                }
            }
        }
    }

    fn ordered_blocks(&self, flag: &Flag) -> Vec<ElementId> {
        let mut blocks = flag.elements().to_vec();
        blocks.sort_by_key(|&b| (self.quotient.type_of(b), b));
        blocks
    }

    /// Whether some source flag projects onto `flag`.
    pub fn has_lift(&self, flag: &Flag) -> Result<bool> {
        self.quotient.check_flag(flag)?;
        let mut out = Vec::new();
        self.lifts(&self.ordered_blocks(flag), &mut Vec::new(), true, &mut out);
        Ok(!out.is_empty())
    }

    /// Every source flag projecting onto `flag`, sorted.
    pub fn all_lifts(&self, flag: &Flag) -> Result<Vec<Flag>> {
        self.quotient.check_flag(flag)?;
        let mut out = Vec::new();
        self.lifts(&self.ordered_blocks(flag), &mut Vec::new(), false, &mut out);
        out.sort();
        Ok(out)
    }

    /// The lexicographically least lift of a quotient flag, if any.
    pub fn lift_flag(&self, flag: &Flag) -> Result<Option<Flag>> {
        Ok(self.all_lifts(flag)?.into_iter().next())
    }

    /// FlagsLift: every quotient flag has a lift.
    pub fn check_flagslift(&self) -> Verdict<Flag> {
        for flag in self.quotient.flags() {
            if !self.has_lift(flag).expect("enumerated flags are flags") {
                return Verdict::Fails(flag.clone());
            }
        }
        Verdict::Holds
    }

    /// Every quotient flag of type `J` has a lift.
    pub fn check_jflags_lift(&self, types: crate::geometry::TypeSet) -> Result<Verdict<Flag>> {
        for flag in self.quotient.flags_of_type(types)? {
            if !self.has_lift(&flag)? {
                return Ok(Verdict::Fails(flag));
            }
        }
        Ok(Verdict::Holds)
    }

    fn surjective_at(&self, flag: &Flag) -> bool {
        let image = self.image_set(&self.source.residue_elements(flag));
        let projected = Flag::new(flag.iter().map(|e| self.project(e)).collect());
        let target: BTreeSet<ElementId> = self.quotient.residue_elements(&projected).into_iter().collect();
        image == target
    }

    /// `π(Γ_F) = (Γ/B)_{π(F)}` for every flag `F` of the source.
    pub fn residual_surjectivity(&self) -> Verdict<Flag> {
        for flag in self.source.flags() {
            if !self.surjective_at(flag) {
                return Verdict::Fails(flag.clone());
            }
        }
        Verdict::Holds
    }

    /// Residual surjectivity restricted to rank-1 flags.
    pub fn corank1_surjective(&self) -> Verdict<ElementId> {
        for e in self.source.elements() {
            if !self.surjective_at(&Flag::new(vec![e])) {
                return Verdict::Fails(e);
            }
        }
        Verdict::Holds
    }

    /// `π` is injective on every `Γ_α`.
    pub fn corank1_injective(&self) -> Verdict<ElementId> {
        for e in self.source.elements() {
            let res = self.source.neighbours(e);
            if self.image_set(res).len() != res.len() {
                return Verdict::Fails(e);
            }
        }
        Verdict::Holds
    }

    pub fn min_block_distance(&self) -> Distance {
        min_block_distance(&self.source, &self.partition)
    }

    /// Whether `π` restricted to `domain` is an isomorphism onto `target`.
    fn isomorphic_onto(&self, domain: &[ElementId], target: &[ElementId]) -> Option<CoverDefect> {
        let mut seen: Vec<Option<ElementId>> = vec![None; self.quotient.num_elements()];
        for &a in domain {
            let b = self.project(a);
            if let Some(prev) = seen[b.0] {
                return Some(CoverDefect::NotInjective(prev, a));
            }
            seen[b.0] = Some(a);
        }
        let target_set: HashSet<ElementId> = target.iter().copied().collect();
        for &a in domain {
            if !target_set.contains(&self.project(a)) {
                return Some(CoverDefect::OutsideTarget(a));
            }
        }
        for &b in target {
            if seen[b.0].is_none() {
                return Some(CoverDefect::NotSurjective(b));
            }
        }
        for (i, &a) in domain.iter().enumerate() {
            for &c in &domain[i + 1..] {
                let up = self.source.incident(a, c);
                let down = self.quotient.incident(self.project(a), self.project(c));
                if up && !down {
                    return Some(CoverDefect::IncidenceNotPreserved(a, c));
                }
                if down && !up {
                    return Some(CoverDefect::IncidenceNotReflected(a, c));
                }
            }
        }
        None
    }

    fn cover_at_corank(&self, corank: usize) -> Verdict<CoverWitness> {
        let rank = self.source.rank() - corank;
        for flag in self.source.flags().iter().filter(|f| f.rank() == rank) {
            let domain = self.source.residue_elements(flag);
            let projected = Flag::new(flag.iter().map(|e| self.project(e)).collect());
            let target = self.quotient.residue_elements(&projected);
            if let Some(defect) = self.isomorphic_onto(&domain, &target) {
                return Verdict::Fails(CoverWitness {
                    flag: flag.clone(),
                    defect,
                });
            }
        }
        Verdict::Holds
    }

    /// `π` restricts to an isomorphism on every residue of a corank-`m`
    /// flag. Requires `1 ≤ m ≤ |I| - 1`.
    pub fn is_m_cover(&self, m: usize) -> Result<Verdict<CoverWitness>> {
        let rank = self.source.rank();
        if m == 0 || m + 1 > rank {
            return Err(GeoError::InvalidParameter(format!(
                "m must lie in 1..={} for rank {rank}",
                rank.saturating_sub(1)
            )));
        }
        Ok(self.cover_at_corank(m))
    }

    /// Cover: isomorphism on every element residue. Vacuous in rank 1.
    pub fn is_cover(&self) -> Verdict<CoverWitness> {
        let rank = self.source.rank();
        if rank <= 1 {
            return Verdict::Holds;
        }
        self.cover_at_corank(rank - 1)
    }

    /// The incidence graph of the source covers that of the quotient:
    /// `π` maps the neighbours of each vertex bijectively onto the
    /// neighbours of its image.
    pub fn is_graph_cover(&self) -> Verdict<ElementId> {
        for e in self.source.elements() {
            let image = self.image_set(self.source.neighbours(e));
            let target: BTreeSet<ElementId> = self.quotient.neighbours(self.project(e)).iter().copied().collect();
            if image.len() != self.source.degree(e) || image != target {
                return Verdict::Fails(e);
            }
        }
        Verdict::Holds
    }

    /// The condition of the total-order lifting theorem: for every `α`,
    /// `π` maps `{β ∈ Γ_α : t(β) ≥ t(α)}` isomorphically onto the
    /// corresponding part of the quotient residue. `order` lists the types
    /// from least to greatest.
    pub fn total_order_flagslift(&self, order: &[TypeId]) -> Result<Verdict<ElementId>> {
        let rank = self.source.rank();
        let mut position = vec![usize::MAX; rank];
        for (k, t) in order.iter().enumerate() {
            if t.0 >= rank || position[t.0] != usize::MAX {
                return Err(GeoError::InvalidParameter(
                    "order must list every type exactly once".into(),
                ));
            }
            position[t.0] = k;
        }
        if order.len() != rank {
            return Err(GeoError::InvalidParameter(
                "order must list every type exactly once".into(),
            ));
        }
        for e in self.source.elements() {
            let level = position[self.source.type_of(e).0];
            let above = |g: &Pregeometry, x: &ElementId| position[g.type_of(*x).0] >= level;
            let domain: Vec<ElementId> = self
                .source
                .neighbours(e)
                .iter()
                .filter(|x| above(&self.source, x))
                .copied()
                .collect();
            let target: Vec<ElementId> = self
                .quotient
                .neighbours(self.project(e))
                .iter()
                .filter(|x| above(&self.quotient, x))
                .copied()
                .collect();
            if self.isomorphic_onto(&domain, &target).is_some() {
                return Ok(Verdict::Fails(e));
            }
        }
        Ok(Verdict::Holds)
    }

    /// PQ1, decided literally: for every flag `F` and block `B` of a type
    /// outside `t(F)` such that each member of `F` has a neighbour in `B`'s
    /// image class, some element of `B` is incident with all of `F`.
    /// The witness is the least such `(F, B)`.
    pub fn check_pq1(&self) -> Verdict<(Flag, ElementId)> {
        for flag in self.source.flags() {
            let used = self.source.flag_type(flag);
            for b in self.quotient.elements() {
                if used.contains(self.quotient.type_of(b)) {
                    continue;
                }
                let hypothesis = flag.iter().all(|alpha| {
                    let class = self.project(alpha);
                    self.block(b)
                        .iter()
                        .any(|&beta| self.source.neighbours(beta).iter().any(|&g| self.project(g) == class))
                });
                if !hypothesis {
                    continue;
                }
                let met = self
                    .block(b)
                    .iter()
                    .any(|&y| flag.iter().all(|a| self.source.incident(a, y)));
                if !met {
                    return Verdict::Fails((flag.clone(), b));
                }
            }
        }
        Verdict::Holds
    }

    /// PQ2: every residue of rank 1 meets at least two blocks.
    pub fn check_pq2(&self) -> Verdict<Flag> {
        let rank = self.source.rank();
        for flag in self.source.flags().iter().filter(|f| f.rank() + 1 == rank) {
            if self.image_set(&self.source.residue_elements(flag)).len() < 2 {
                return Verdict::Fails(flag.clone());
            }
        }
        Verdict::Holds
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::PregeometryBuilder;

    fn cycle(len: usize, types: usize) -> Pregeometry {
        let mut b = PregeometryBuilder::new();
        let ts: Vec<TypeId> = (0..types).map(|i| b.add_type(format!("T{i}"))).collect();
        let es: Vec<ElementId> = (0..len)
            .map(|i| b.add_element(format!("x{i}"), ts[i % types]))
            .collect();
        for i in 0..len {
            b.incidence(es[i], es[(i + 1) % len]);
        }
        b.build().unwrap()
    }

    fn antipodal(g: &Pregeometry) -> Partition {
        let n = g.num_elements();
        Partition::new(
            g,
            (0..n / 2).map(|i| vec![ElementId(i), ElementId(i + n / 2)]).collect(),
        )
        .unwrap()
    }

    #[test]
    fn hexagon_quotient_is_a_triangle() {
        let g = cycle(6, 3);
        let p = Projection::new(&g, antipodal(&g)).unwrap();
        let q = p.quotient();
        assert_eq!(q.num_elements(), 3);
        assert_eq!(q.incidences().count(), 3);
        assert_eq!(p.min_block_distance(), Distance::Finite(3));
        let Verdict::Fails(w) = p.check_flagslift() else {
            panic!()
        };
        assert_eq!(w.rank(), 3);
        assert!(!p.is_cover().holds());
        assert!(p.is_graph_cover().holds());
        assert!(p.corank1_injective().holds());
        assert_eq!(q.name(ElementId(0)), "{x0,x3}");
    }

    #[test]
    fn octagon_antipodal_distance_four() {
        let g = cycle(8, 2);
        let p = Projection::new(&g, antipodal(&g)).unwrap();
        assert_eq!(p.min_block_distance(), Distance::Finite(4));
        assert!(p.quotient().is_generalized_digon().unwrap());
    }

    #[test]
    fn singleton_partition_is_trivial_cover() {
        let g = cycle(8, 2);
        let p = Projection::new(&g, Partition::singletons(&g)).unwrap();
        assert!(p.check_flagslift().holds());
        assert!(p.is_m_cover(1).unwrap().holds());
        assert_eq!(p.min_block_distance(), Distance::Infinite);
        assert!(p.check_pq1().holds());
        assert!(p.total_order_flagslift(&[TypeId(0), TypeId(1)]).unwrap().holds());
        assert!(p.is_m_cover(2).is_err());
    }

    #[test]
    fn non_type_refining_blocks_are_rejected() {
        let g = cycle(6, 3);
        let err = Partition::new(&g, vec![vec![ElementId(0), ElementId(1)]]).unwrap_err();
        assert!(matches!(err, GeoError::NotTypeRefining(_)));
        let err = Partition::new(&g, vec![vec![ElementId(0)]]).unwrap_err();
        assert!(matches!(err, GeoError::InvalidPartition(_)));
    }

    #[test]
    fn pq1_counterexample_with_flagslift() {
        let mut b = PregeometryBuilder::new();
        let x = b.add_type("X1");
        let y = b.add_type("X2");
        let alpha = b.add_element("alpha", x);
        let alpha2 = b.add_element("alpha2", x);
        let b1 = b.add_element("b1", y);
        let b2 = b.add_element("b2", y);
        b.incidence(alpha2, b1);
        let g = b.build().unwrap();
        let part = Partition::new(&g, vec![vec![alpha, alpha2], vec![b1, b2]]).unwrap();
        let p = Projection::new(&g, part).unwrap();
        assert!(p.check_flagslift().holds());
        let Verdict::Fails((flag, block)) = p.check_pq1() else {
            panic!()
        };
        assert_eq!(flag, Flag::new(vec![alpha]));
        assert_eq!(p.block(block), &[b1, b2]);
        assert!(!p.residual_surjectivity().holds());
    }
}
