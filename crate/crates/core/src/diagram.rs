//! Basic diagrams and the results that use them: purity, the direct sum
//! property, tree placement of flags and chamber lifting for geometries
//! whose diagram is a forest.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use crate::error::{GeoError, Result};
use crate::geometry::{ElementId, Flag, Pregeometry, TypeId, Verdict};
use crate::tits::OrbitQuotient;

/// What the cotype-`{i,j}` residues look like.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PairEvidence {
    /// Number of flags of cotype `{i,j}`.
    pub flags: usize,
    /// The least flag whose residue is not a generalised digon.
    pub non_digon: Option<Flag>,
    /// The least flag whose residue is a generalised digon.
    pub digon: Option<Flag>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagram {
    rank: usize,
    evidence: BTreeMap<(TypeId, TypeId), PairEvidence>,
}

impl Diagram {
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn evidence(&self, i: TypeId, j: TypeId) -> &PairEvidence {
        &self.evidence[&(i.min(j), i.max(j))]
    }

    pub fn adjacent(&self, i: TypeId, j: TypeId) -> bool {
        i != j && self.evidence(i, j).non_digon.is_some()
    }

    pub fn edges(&self) -> Vec<(TypeId, TypeId)> {
        self.evidence
            .iter()
            .filter(|(_, e)| e.non_digon.is_some())
            .map(|(&p, _)| p)
            .collect()
    }

    /// Type pairs with no flag of cotype `{i,j}` at all.
    pub fn pairs_without_flags(&self) -> Vec<(TypeId, TypeId)> {
        self.evidence
            .iter()
            .filter(|(_, e)| e.flags == 0)
            .map(|(&p, _)| p)
            .collect()
    }

    pub fn neighbours(&self, i: TypeId) -> Vec<TypeId> {
        (0..self.rank).map(TypeId).filter(|&j| self.adjacent(i, j)).collect()
    }

    pub fn components(&self) -> Vec<Vec<TypeId>> {
        let mut seen = vec![false; self.rank];
        let mut out = Vec::new();
        for s in 0..self.rank {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![TypeId(s)];
            let mut i = 0;
            while i < comp.len() {
                for j in self.neighbours(comp[i]) {
                    if !seen[j.0] {
                        seen[j.0] = true;
                        comp.push(j);
                    }
                }
                i += 1;
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// No cycles: every component with `c` types has `c - 1` edges.
    pub fn is_forest(&self) -> bool {
        self.edges().len() + self.components().len() == self.rank
    }

    /// A triangle `i ~ j ~ k ~ i`, if there is one.
    pub fn triangle(&self) -> Option<(TypeId, TypeId, TypeId)> {
        let r = self.rank;
        for i in 0..r {
            for j in i + 1..r {
                for k in j + 1..r {
                    let (a, b, c) = (TypeId(i), TypeId(j), TypeId(k));
                    if self.adjacent(a, b) && self.adjacent(b, c) && self.adjacent(a, c) {
                        return Some((a, b, c));
                    }
                }
            }
        }
        None
    }

    /// Paths `i ~ j ~ k` with `i < k`, listed by middle type.
    pub fn paths_of_length_two(&self) -> Vec<(TypeId, TypeId, TypeId)> {
        let mut out = Vec::new();
        for j in 0..self.rank {
            let around = self.neighbours(TypeId(j));
            for (x, &i) in around.iter().enumerate() {
                for &k in &around[x + 1..] {
                    out.push((i, TypeId(j), k));
                }
            }
        }
        out
    }

    /// The edges of the diagram restricted to `types`.
    pub fn restricted_edges(&self, types: &[TypeId]) -> Vec<(TypeId, TypeId)> {
        self.edges()
            .into_iter()
            .filter(|(a, b)| types.contains(a) && types.contains(b))
            .collect()
    }
}

impl fmt::Display for Diagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let edges: Vec<String> = self.edges().iter().map(|(a, b)| format!("{}-{}", a.0, b.0)).collect();
        write!(f, "[{}]", edges.join(" "))
    }
}

/// The basic diagram: `i ~ j` when some flag of cotype `{i,j}` has a
/// residue that is not a generalised digon.
pub fn basic_diagram(geom: &Pregeometry) -> Result<Diagram> {
    geom.require_geometry()?;
    let full = geom.all_types();
    let mut evidence = BTreeMap::new();
    for i in 0..geom.rank() {
        for j in i + 1..geom.rank() {
            let (a, b) = (TypeId(i), TypeId(j));
            let cotype = full.without(a).without(b);
            let mut ev = PairEvidence::default();
            for flag in geom.flags_of_type(cotype)? {
                ev.flags += 1;
                let residue = geom.residue(&flag)?;
                let slot = if residue.geometry.is_generalized_digon()? {
                    &mut ev.digon
                } else {
                    &mut ev.non_digon
                };
                if slot.is_none() {
                    *slot = Some(flag);
                }
            }
            evidence.insert((a, b), ev);
        }
    }
    Ok(Diagram {
        rank: geom.rank(),
        evidence,
    })
}

/// Pure: along every diagram edge, no residue of that cotype is a digon.
pub fn is_pure(geom: &Pregeometry) -> Result<Verdict<Flag>> {
    let d = basic_diagram(geom)?;
    for (a, b) in d.edges() {
        if let Some(f) = &d.evidence(a, b).digon {
            return Ok(Verdict::Fails(f.clone()));
        }
    }
    Ok(Verdict::Holds)
}

/// Outcome of a check whose conclusion is only claimed under hypotheses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Conditional<W> {
    Holds,
    HypothesesUnmet(String),
    Violated(W),
}

impl<W> Conditional<W> {
    /// True unless the conclusion was violated.
    pub fn consistent(&self) -> bool {
        !matches!(self, Conditional::Violated(_))
    }
}

fn residually_connected_hypothesis(geom: &Pregeometry) -> Option<String> {
    if let Verdict::Fails(f) = geom.is_geometry() {
        return Some(format!(
            "not a geometry: {} is a maximal non-chamber",
            geom.describe_flag(&f)
        ));
    }
    if let Verdict::Fails(f) = geom.is_residually_connected() {
        return Some(format!("not residually connected at {}", geom.describe_flag(&f)));
    }
    None
}

/// For types in different diagram components, every element of one type
/// is incident with every element of the other.
pub fn direct_sum_check(geom: &Pregeometry) -> Result<Conditional<(ElementId, ElementId)>> {
    if let Some(reason) = residually_connected_hypothesis(geom) {
        return Ok(Conditional::HypothesesUnmet(reason));
    }
    let d = basic_diagram(geom)?;
    let comps = d.components();
    let component_of = |t: TypeId| comps.iter().position(|c| c.contains(&t));
    for x in geom.elements() {
        for y in geom.elements().filter(|&y| y > x) {
            let (s, t) = (geom.type_of(x), geom.type_of(y));
            if component_of(s) != component_of(t) && !geom.incident(x, y) {
                return Ok(Conditional::Violated((x, y)));
            }
        }
    }
    Ok(Conditional::Holds)
}

fn check_tree(types: &[TypeId], edges: &[(TypeId, TypeId)]) -> Result<()> {
    let set: BTreeSet<TypeId> = types.iter().copied().collect();
    if set.len() != types.len() {
        return Err(GeoError::InvalidParameter("repeated type in the tree".into()));
    }
    if edges
        .iter()
        .any(|(a, b)| !set.contains(a) || !set.contains(b) || a == b)
    {
        return Err(GeoError::InvalidParameter("tree edge outside the flag's types".into()));
    }
    if edges.len() + 1 != types.len().max(1) {
        return Err(GeoError::InvalidParameter("a tree on t types has t - 1 edges".into()));
    }
    let mut reached = BTreeSet::from([types[0]]);
    let mut queue = VecDeque::from([types[0]]);
    while let Some(x) = queue.pop_front() {
        for &(a, b) in edges {
            for (p, q) in [(a, b), (b, a)] {
                if p == x && reached.insert(q) {
                    queue.push_back(q);
                }
            }
        }
    }
    if reached.len() != types.len() {
        return Err(GeoError::InvalidParameter("the edges do not form a tree".into()));
    }
    Ok(())
}

/// Chooses `α_j ∈ B_j` for every block of a quotient flag so that tree
/// edges become incidences, starting from `α_k` in the root block and
/// moving outwards with group elements.
pub fn place_tree_flag(
    oq: &OrbitQuotient,
    flag: &Flag,
    tree: &[(TypeId, TypeId)],
    root: TypeId,
    alpha: ElementId,
) -> Result<BTreeMap<TypeId, ElementId>> {
    let proj = oq.projection();
    let q = proj.quotient();
    q.check_flag(flag)?;
    let block_of_type: BTreeMap<TypeId, ElementId> = flag.iter().map(|b| (q.type_of(b), b)).collect();
    let types: Vec<TypeId> = block_of_type.keys().copied().collect();
    if types.is_empty() {
        return Err(GeoError::InvalidParameter("the flag is empty".into()));
    }
    check_tree(&types, tree)?;
    let Some(&root_block) = block_of_type.get(&root) else {
        return Err(GeoError::InvalidParameter("the root type is not in the flag".into()));
    };
    if proj.project(alpha) != root_block {
        return Err(GeoError::InvalidParameter(
            "the root element is not in the root block".into(),
        ));
    }
    let source = proj.source();
    let elements = oq.group().elements()?;
    let mut placed = BTreeMap::from([(root, alpha)]);
    let mut queue = VecDeque::from([root]);
    while let Some(l) = queue.pop_front() {
        for &(a, b) in tree {
            for (from, to) in [(a, b), (b, a)] {
                if from != l || placed.contains_key(&to) {
                    continue;
                }
                let anchor = placed[&l];
                // Some incident pair (β_l, β_to) exists because the blocks
                // are incident; move it onto the anchor.
                let (beta_l, beta_to) = proj
                    .block(block_of_type[&l])
                    .iter()
                    .flat_map(|&x| proj.block(block_of_type[&to]).iter().map(move |&y| (x, y)))
                    .find(|&(x, y)| source.incident(x, y))
                    .ok_or_else(|| GeoError::Internal("incident blocks without incident members".into()))?;
                let a = elements
                    .iter()
                    .find(|g| g.image(beta_l) == anchor)
                    .ok_or_else(|| GeoError::Internal("the group is not transitive on a block".into()))?;
                placed.insert(to, a.image(beta_to));
                queue.push_back(to);
            }
        }
    }
    for &(a, b) in tree {
        if !source.incident(placed[&a], placed[&b]) {
            return Err(GeoError::Internal("tree placement broke an edge".into()));
        }
    }
    Ok(placed)
}

/// Lifts a quotient chamber to a chamber when the source is a residually
/// connected geometry whose diagram is a forest, following tree placement
/// within each diagram component and the direct sum across components.
pub fn lift_chamber_forest(oq: &OrbitQuotient, chamber: &Flag) -> Result<Flag> {
    let source = oq.source();
    if let Some(reason) = residually_connected_hypothesis(source) {
        return Err(GeoError::Hypothesis(reason));
    }
    let d = basic_diagram(source)?;
    if !d.is_forest() {
        return Err(GeoError::Hypothesis(format!("the diagram {d} has a cycle")));
    }
    let q = oq.quotient();
    q.check_flag(chamber)?;
    if chamber.rank() != q.rank() {
        return Err(GeoError::InvalidParameter("not a chamber of the quotient".into()));
    }
    let mut elements = Vec::new();
    for comp in d.components() {
        let blocks: Vec<ElementId> = chamber.iter().filter(|&b| comp.contains(&q.type_of(b))).collect();
        let sub = Flag::new(blocks);
        let root = comp[0];
        let root_block = sub
            .iter()
            .find(|&b| q.type_of(b) == root)
            .expect("a chamber has every type");
        let alpha = oq.projection().block(root_block)[0];
        let placed = place_tree_flag(oq, &sub, &d.restricted_edges(&comp), root, alpha)?;
        let part: Vec<ElementId> = placed.values().copied().collect();
        for (i, &x) in part.iter().enumerate() {
            for &y in &part[i + 1..] {
                if !source.incident(x, y) {
                    return Err(GeoError::Internal(format!(
                        "{} and {} are not incident although the diagram is a forest",
                        source.name(x),
                        source.name(y)
                    )));
                }
            }
        }
        elements.extend(part);
    }
    let flag = Flag::new(elements);
    if !source.is_flag(&flag) {
        return Err(GeoError::Internal("components do not combine into a flag".into()));
    }
    Ok(flag)
}

/// Along every diagram path `i ~ j ~ k`, incidences `α_i * α_j * α_k`
/// force `α_i * α_k`. Returns a failing triple otherwise.
pub fn star_transitive_on_paths(geom: &Pregeometry) -> Result<Verdict<(ElementId, ElementId, ElementId)>> {
    let d = basic_diagram(geom)?;
    for (i, j, k) in d.paths_of_length_two() {
        for &b in geom.elements_of_type(j) {
            let left: Vec<ElementId> = geom
                .neighbours(b)
                .iter()
                .copied()
                .filter(|&x| geom.type_of(x) == i)
                .collect();
            let right: Vec<ElementId> = geom
                .neighbours(b)
                .iter()
                .copied()
                .filter(|&x| geom.type_of(x) == k)
                .collect();
            for &a in &left {
                for &c in &right {
                    if !geom.incident(a, c) {
                        return Ok(Verdict::Fails((a, b, c)));
                    }
                }
            }
        }
    }
    Ok(Verdict::Holds)
}

/// In a pure geometry that is `*`-transitive on paths, the diagram has no
/// triangle.
pub fn no_triangle_theorem_check(geom: &Pregeometry) -> Result<Conditional<(TypeId, TypeId, TypeId)>> {
    if let Some(reason) = geom.is_geometry().witness().map(|f| format!("not a geometry at {f}")) {
        return Ok(Conditional::HypothesesUnmet(reason));
    }
    if let Verdict::Fails(f) = is_pure(geom)? {
        return Ok(Conditional::HypothesesUnmet(format!("not pure at {f}")));
    }
    if let Verdict::Fails(w) = star_transitive_on_paths(geom)? {
        return Ok(Conditional::HypothesesUnmet(format!(
            "not *-transitive on paths at {:?}",
            w
        )));
    }
    Ok(match basic_diagram(geom)?.triangle() {
        Some(t) => Conditional::Violated(t),
        None => Conditional::Holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{eight_cycle, hexagon, ssg, ssg_symmetric_group};
    use crate::perm::PermGroup;
    use crate::quotient::Projection;

    #[test]
    fn eight_cycle_and_its_quotient() {
        let (g, a) = eight_cycle();
        let d = basic_diagram(&g).unwrap();
        assert_eq!(d.edges(), vec![(TypeId(0), TypeId(1))]);
        let q = Projection::orbit_quotient(&g, &a).unwrap();
        assert!(basic_diagram(q.quotient()).unwrap().edges().is_empty());
    }

    #[test]
    fn ssg_diagram_is_a_path() {
        let d = basic_diagram(&ssg(5, 3).unwrap()).unwrap();
        assert_eq!(d.edges(), vec![(TypeId(0), TypeId(1)), (TypeId(1), TypeId(2))]);
        assert!(d.is_forest());
        assert!(is_pure(&ssg(4, 3).unwrap()).unwrap().holds());
    }

    #[test]
    fn ssg_chambers_lift() {
        let g = ssg(4, 3).unwrap();
        let full = ssg_symmetric_group(4, 3, 1000).unwrap();
        let sub = PermGroup::new(g.num_elements(), vec![full.generators()[0].clone()], 1000).unwrap();
        let oq = OrbitQuotient::new(&g, sub).unwrap();
        for c in oq.quotient().chambers() {
            let lift = lift_chamber_forest(&oq, &c).unwrap();
            assert_eq!(oq.projection().project_flag(&lift).unwrap(), c);
        }
    }

    #[test]
    fn hexagon_tree_placement() {
        let (g, a) = hexagon();
        let oq = OrbitQuotient::new(&g, a).unwrap();
        let chamber = oq.quotient().chambers()[0].clone();
        let tree = [(TypeId(0), TypeId(1)), (TypeId(0), TypeId(2))];
        let alpha = oq.projection().block(chamber.elements()[0])[0];
        let placed = place_tree_flag(&oq, &chamber, &tree, TypeId(0), alpha).unwrap();
        assert_eq!(placed.len(), 3);
        assert!(!oq.projection().has_lift(&chamber).unwrap());
    }

    #[test]
    fn non_tree_is_rejected() {
        let (g, a) = hexagon();
        let oq = OrbitQuotient::new(&g, a).unwrap();
        let chamber = oq.quotient().chambers()[0].clone();
        let cycle = [(TypeId(0), TypeId(1)), (TypeId(1), TypeId(2)), (TypeId(0), TypeId(2))];
        let alpha = oq.projection().block(chamber.elements()[0])[0];
        assert!(place_tree_flag(&oq, &chamber, &cycle, TypeId(0), alpha).is_err());
    }
}
