//! Permutation groups acting on the elements of a pregeometry.
//!
//! Permutations act on the right: `x^g` is `g.apply(x)` and the product
//! `g * h` first applies `g`, then `h`. A [`PermGroup`] is stored as a list
//! of generators; its full element list is produced on demand by plain
//! closure and cached. Orbit computations never need the closure.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use once_cell::sync::OnceCell;

use crate::error::{GeoError, Result};
use crate::geometry::{ElementId, Flag, Pregeometry, TypeId, TypeSet, Verdict};

pub const DEFAULT_GROUP_CAP: usize = 200_000;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation(Vec<u32>);

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation((0..degree as u32).collect())
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n || seen[x] {
                return Err(GeoError::InvalidPermutation(format!(
                    "image list is not a bijection on 0..{n}"
                )));
            }
            seen[x] = true;
        }
        Ok(Permutation(images.into_iter().map(|x| x as u32).collect()))
    }

    /// Builds a permutation from disjoint cycles over `0..degree`.
    pub fn from_cycles(degree: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let mut images: Vec<usize> = (0..degree).collect();
        let mut moved = vec![false; degree];
        for cycle in cycles {
            for (k, &x) in cycle.iter().enumerate() {
                if x >= degree {
                    return Err(GeoError::InvalidPermutation(format!("point {x} out of range")));
                }
                if moved[x] {
                    return Err(GeoError::InvalidPermutation(format!("point {x} appears twice")));
                }
                moved[x] = true;
                images[x] = cycle[(k + 1) % cycle.len()];
            }
        }
        Permutation::from_images(images)
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn apply(&self, x: usize) -> usize {
        self.0[x] as usize
    }

    pub fn image(&self, e: ElementId) -> ElementId {
        ElementId(self.apply(e.0))
    }

    pub fn images(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().map(|&x| x as usize)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i == x as usize)
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &Permutation) -> Permutation {
        Permutation(self.0.iter().map(|&x| other.0[x as usize]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u32; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x as usize] = i as u32;
        }
        Permutation(inv)
    }

    /// `g^-1 * self * g`.
    pub fn conjugate_by(&self, g: &Permutation) -> Permutation {
        g.inverse().then(self).then(g)
    }

    pub fn fixes(&self, x: usize) -> bool {
        self.apply(x) == x
    }

    pub fn apply_flag(&self, flag: &Flag) -> Flag {
        Flag::new(flag.iter().map(|e| self.image(e)).collect())
    }

    /// Nontrivial cycles, each starting at its least point, in order of
    /// that point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for start in 0..self.degree() {
            if seen[start] || self.fixes(start) {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut x = self.apply(start);
            while x != start {
                seen[x] = true;
                cycle.push(x);
                x = self.apply(x);
            }
            out.push(cycle);
        }
        out
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            let parts: Vec<String> = c.iter().map(|x| x.to_string()).collect();
            write!(f, "({})", parts.join(" "))?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Permutation>,
    cap: usize,
    elements: OnceCell<Vec<Permutation>>,
}

impl PermGroup {
    pub fn new(degree: usize, generators: Vec<Permutation>, cap: usize) -> Result<Self> {
        for g in &generators {
            if g.degree() != degree {
                return Err(GeoError::DegreeMismatch {
                    expected: degree,
                    found: g.degree(),
                });
            }
        }
        let generators = generators.into_iter().filter(|g| !g.is_identity()).collect();
        Ok(PermGroup {
            degree,
            generators,
            cap,
            elements: OnceCell::new(),
        })
    }

    pub fn trivial(degree: usize) -> Self {
        PermGroup::new(degree, Vec::new(), DEFAULT_GROUP_CAP).expect("no generators")
    }

    /// Closure of `gens`, enumerated eagerly so that a cap violation is
    /// reported immediately.
    pub fn closure(degree: usize, gens: Vec<Permutation>, cap: usize) -> Result<Self> {
        let g = PermGroup::new(degree, gens, cap)?;
        g.elements()?;
        Ok(g)
    }

    /// A group known to consist of exactly `elements`. A small generating
    /// set is extracted greedily.
    pub(crate) fn from_elements(degree: usize, elements: Vec<Permutation>, cap: usize) -> Self {
        let mut gens: Vec<Permutation> = Vec::new();
        let mut span: HashSet<Permutation> = HashSet::from([Permutation::identity(degree)]);
        for e in &elements {
            if span.contains(e) {
                continue;
            }
            gens.push(e.clone());
            span = closure_set(degree, &gens, usize::MAX).expect("uncapped");
        }
        let mut sorted = elements;
        sorted.sort();
        sorted.dedup();
        let cell = OnceCell::new();
        let _ = cell.set(sorted);
        PermGroup {
            degree,
            generators: gens,
            cap,
            elements: cell,
        }
    }

    pub fn with_cap(mut self, cap: usize) -> Self {
        self.cap = cap;
        self.elements = OnceCell::new();
        self
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    /// Every element, sorted (so the identity comes first).
    pub fn elements(&self) -> Result<&[Permutation]> {
        self.elements
            .get_or_try_init(|| {
                let set = closure_set(self.degree, &self.generators, self.cap)?;
                let mut v: Vec<Permutation> = set.into_iter().collect();
                v.sort();
                Ok(v)
            })
            .map(|v| v.as_slice())
    }

    pub fn order(&self) -> Result<usize> {
        Ok(self.elements()?.len())
    }

    pub fn contains(&self, p: &Permutation) -> Result<bool> {
        Ok(p.degree() == self.degree && self.elements()?.binary_search(p).is_ok())
    }

    pub fn is_trivial(&self) -> bool {
        self.generators.is_empty()
    }

    fn union_find_orbits(&self, gens: &[Permutation]) -> Vec<Vec<usize>> {
        let mut parent: Vec<usize> = (0..self.degree).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for g in gens {
            for x in 0..self.degree {
                let (a, b) = (find(&mut parent, x), find(&mut parent, g.apply(x)));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
        let mut by_root: HashMap<usize, Vec<usize>> = HashMap::new();
        for x in 0..self.degree {
            let r = find(&mut parent, x);
            by_root.entry(r).or_default().push(x);
        }
        let mut orbits: Vec<Vec<usize>> = by_root.into_values().collect();
        orbits.sort();
        orbits
    }

    /// Orbits on `0..degree`, each sorted, ordered by least point.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        self.union_find_orbits(&self.generators)
    }

    pub fn orbit_of(&self, x: usize) -> Vec<usize> {
        let mut seen = vec![false; self.degree];
        seen[x] = true;
        let mut out = vec![x];
        let mut i = 0;
        while i < out.len() {
            let y = out[i];
            i += 1;
            for g in &self.generators {
                let z = g.apply(y);
                if !seen[z] {
                    seen[z] = true;
                    out.push(z);
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Orbit of a flag under the group, computed from the generators.
    pub fn flag_orbit(&self, flag: &Flag) -> HashSet<Flag> {
        let mut seen = HashSet::from([flag.clone()]);
        let mut queue = VecDeque::from([flag.clone()]);
        while let Some(f) = queue.pop_front() {
            for g in &self.generators {
                let h = g.apply_flag(&f);
                if seen.insert(h.clone()) {
                    queue.push_back(h);
                }
            }
        }
        seen
    }

    /// Setwise stabilizer of a set of points.
    pub fn set_stabilizer(&self, points: &[ElementId]) -> Result<PermGroup> {
        let set: HashSet<usize> = points.iter().map(|e| e.0).collect();
        let elements: Vec<Permutation> = self
            .elements()?
            .iter()
            .filter(|g| set.iter().all(|&x| set.contains(&g.apply(x))))
            .cloned()
            .collect();
        Ok(PermGroup::from_elements(self.degree, elements, self.cap))
    }

    /// `A_F`. Elements of `A` are type-preserving in every use, so setwise
    /// and pointwise flag stabilizers agree.
    pub fn stabilizer(&self, flag: &Flag) -> Result<PermGroup> {
        self.set_stabilizer(flag.elements())
    }

    pub fn is_subgroup_of(&self, other: &PermGroup) -> Result<bool> {
        for g in &self.generators {
            if !other.contains(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn is_normal_in(&self, overgroup: &PermGroup) -> Result<bool> {
        if !self.is_subgroup_of(overgroup)? {
            return Ok(false);
        }
        for n in &self.generators {
            for g in overgroup.generators() {
                if !self.contains(&n.conjugate_by(g))? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Smallest normal subgroup of `self` containing `sub`.
    pub fn normal_closure(&self, sub: &PermGroup) -> Result<PermGroup> {
        if sub.degree != self.degree {
            return Err(GeoError::DegreeMismatch {
                expected: self.degree,
                found: sub.degree,
            });
        }
        for g in sub.generators() {
            if !self.contains(g)? {
                return Err(GeoError::NotInGroup);
            }
        }
        let mut gens = sub.generators.clone();
        let mut elements = closure_set(self.degree, &gens, self.cap)?;
        let mut k = 0;
        while k < gens.len() {
            let n = gens[k].clone();
            k += 1;
            for g in &self.generators {
                let c = n.conjugate_by(g);
                if !elements.contains(&c) {
                    gens.push(c);
                    elements = closure_set(self.degree, &gens, self.cap)?;
                }
            }
        }
        PermGroup::new(self.degree, gens, self.cap)
    }

    /// Every nonidentity element fixes no point.
    pub fn is_semiregular(&self) -> Result<bool> {
        Ok(self
            .elements()?
            .iter()
            .filter(|g| !g.is_identity())
            .all(|g| (0..self.degree).all(|x| !g.fixes(x))))
    }

    /// Least point fixed by a nonidentity element, with that element.
    pub fn semiregularity_witness(&self) -> Result<Option<(usize, Permutation)>> {
        for x in 0..self.degree {
            if let Some(g) = self.elements()?.iter().find(|g| !g.is_identity() && g.fixes(x)) {
                return Ok(Some((x, g.clone())));
            }
        }
        Ok(None)
    }

    /// Checks that every generator preserves type and incidence.
    pub fn check_automorphisms(&self, geom: &Pregeometry) -> Result<()> {
        if self.degree != geom.num_elements() {
            return Err(GeoError::DegreeMismatch {
                expected: geom.num_elements(),
                found: self.degree,
            });
        }
        for (index, g) in self.generators.iter().enumerate() {
            if let Err(reason) = automorphism_defect(geom, g) {
                return Err(GeoError::NotAutomorphism { index, reason });
            }
        }
        Ok(())
    }
}

/// `Err` describes the first way `g` fails to be an automorphism.
pub fn automorphism_defect(geom: &Pregeometry, g: &Permutation) -> std::result::Result<(), String> {
    for e in geom.elements() {
        let img = g.image(e);
        if geom.type_of(img) != geom.type_of(e) {
            return Err(format!(
                "{} is mapped to {} of a different type",
                geom.name(e),
                geom.name(img)
            ));
        }
    }
    for (a, b) in geom.incidences() {
        if !geom.incident(g.image(a), g.image(b)) {
            return Err(format!("incidence {}*{} is not preserved", geom.name(a), geom.name(b)));
        }
    }
    Ok(())
}

pub fn is_automorphism(geom: &Pregeometry, g: &Permutation) -> bool {
    g.degree() == geom.num_elements() && automorphism_defect(geom, g).is_ok()
}

fn closure_set(degree: usize, gens: &[Permutation], cap: usize) -> Result<HashSet<Permutation>> {
    let id = Permutation::identity(degree);
    let mut seen = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = x.then(g);
            if !seen.contains(&y) {
                if seen.len() >= cap {
                    return Err(GeoError::GroupOrderExceeded { cap });
                }
                seen.insert(y.clone());
                queue.push_back(y);
            }
        }
    }
    Ok(seen)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Transitivity {
    Vertex,
    Incidence,
    Flags(TypeSet),
    Chamber,
    Flag,
}

/// Two flags of the same type lying in different orbits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransitivityWitness {
    pub types: TypeSet,
    pub first: Flag,
    pub other: Flag,
}

fn transitive_on(group: &PermGroup, geom: &Pregeometry, types: TypeSet) -> Result<Verdict<TransitivityWitness>> {
    let flags = geom.flags_of_type(types)?;
    let Some(first) = flags.first() else {
        return Ok(Verdict::Holds);
    };
    let orbit = group.flag_orbit(first);
    match flags.iter().find(|f| !orbit.contains(*f)) {
        None => Ok(Verdict::Holds),
        Some(other) => Ok(Verdict::Fails(TransitivityWitness {
            types,
            first: first.clone(),
            other: other.clone(),
        })),
    }
}

/// Decides the requested transitivity. Types with no flags at all count
/// as transitive. For `Flag`, every nonempty type set is examined in
/// increasing (size, bitmask) order.
pub fn transitivity(
    group: &PermGroup,
    geom: &Pregeometry,
    kind: &Transitivity,
) -> Result<Verdict<TransitivityWitness>> {
    group.check_automorphisms(geom)?;
    let full = geom.all_types();
    let mut sets: Vec<TypeSet> = match kind {
        Transitivity::Vertex => geom.type_ids().map(TypeSet::singleton).collect(),
        Transitivity::Incidence => full.subsets().filter(|s| s.len() == 2).collect(),
        Transitivity::Flags(j) => vec![*j],
        Transitivity::Chamber => vec![full],
        Transitivity::Flag => full.subsets().filter(|s| !s.is_empty()).collect(),
    };
    sets.sort_by_key(|s| (s.len(), s.bits()));
    for j in sets {
        if let Verdict::Fails(w) = transitive_on(group, geom, j)? {
            return Ok(Verdict::Fails(w));
        }
    }
    Ok(Verdict::Holds)
}

pub fn is_flag_transitive(group: &PermGroup, geom: &Pregeometry) -> Result<bool> {
    Ok(transitivity(group, geom, &Transitivity::Flag)?.holds())
}

/// Number of orbits of the group on chambers.
pub fn chamber_orbit_count(group: &PermGroup, geom: &Pregeometry) -> usize {
    let mut remaining: HashSet<Flag> = geom.chambers().into_iter().collect();
    let mut count = 0;
    while let Some(c) = remaining.iter().next().cloned() {
        for f in group.flag_orbit(&c) {
            remaining.remove(&f);
        }
        count += 1;
    }
    count
}

/// Why a multicover array does not exist.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MulticoverFailure {
    /// Two incident pairs of the same types see different counts.
    NotConstant {
        types: (TypeId, TypeId),
        first: (ElementId, ElementId, usize),
        second: (ElementId, ElementId, usize),
    },
    /// The full automorphism group lacks the required transitivity.
    Hypothesis(TransitivityWitness),
}

/// `K[i][j]` is the number of elements of `β^N` incident with `α`, for any
/// incident `α ∈ X_i`, `β ∈ X_j`; `None` where no such pair exists. The
/// transitivity hypothesis is checked against `aut` (normally the full
/// automorphism group).
pub fn multicover_array(
    geom: &Pregeometry,
    normal: &PermGroup,
    aut: &PermGroup,
) -> Result<std::result::Result<Vec<Vec<Option<usize>>>, MulticoverFailure>> {
    normal.check_automorphisms(geom)?;
    for kind in [Transitivity::Vertex, Transitivity::Incidence] {
        if let Verdict::Fails(w) = transitivity(aut, geom, &kind)? {
            return Ok(Err(MulticoverFailure::Hypothesis(w)));
        }
    }
    let orbit_of: Vec<usize> = {
        let mut v = vec![0; geom.num_elements()];
        for (k, orbit) in normal.orbits().iter().enumerate() {
            for &x in orbit {
                v[x] = k;
            }
        }
        v
    };
    let rank = geom.rank();
    let mut k: Vec<Vec<Option<(ElementId, ElementId, usize)>>> = vec![vec![None; rank]; rank];
    for a in geom.elements() {
        for &b in geom.neighbours(a) {
            let count = geom
                .neighbours(a)
                .iter()
                .filter(|c| orbit_of[c.0] == orbit_of[b.0])
                .count();
            let (i, j) = (geom.type_of(a), geom.type_of(b));
            match k[i.0][j.0] {
                None => k[i.0][j.0] = Some((a, b, count)),
                Some(first) if first.2 != count => {
                    return Ok(Err(MulticoverFailure::NotConstant {
                        types: (i, j),
                        first,
                        second: (a, b, count),
                    }))
                }
                Some(_) => {}
            }
        }
    }
    Ok(Ok(k
        .into_iter()
        .map(|row| row.into_iter().map(|c| c.map(|t| t.2)).collect())
        .collect()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(degree: usize, cycles: &[&[usize]]) -> Permutation {
        let cycles: Vec<Vec<usize>> = cycles.iter().map(|c| c.to_vec()).collect();
        Permutation::from_cycles(degree, &cycles).unwrap()
    }

    #[test]
    fn closure_orders() {
        let g = PermGroup::closure(6, vec![p(6, &[&[0, 1], &[2, 3], &[4, 5]])], 100).unwrap();
        assert_eq!(g.order().unwrap(), 2);
        assert_eq!(PermGroup::trivial(4).order().unwrap(), 1);
        let g = PermGroup::closure(4, vec![p(4, &[&[0, 1]]), p(4, &[&[2, 3]])], 100).unwrap();
        assert_eq!(g.order().unwrap(), 4);
    }

    #[test]
    fn cap_is_enforced() {
        let s5 = vec![p(5, &[&[0, 1]]), p(5, &[&[0, 1, 2, 3, 4]])];
        assert_eq!(
            PermGroup::closure(5, s5.clone(), 119).unwrap_err(),
            GeoError::GroupOrderExceeded { cap: 119 }
        );
        assert_eq!(PermGroup::closure(5, s5, 120).unwrap().order().unwrap(), 120);
    }

    #[test]
    fn degree_mismatch_is_rejected() {
        let err = PermGroup::new(4, vec![Permutation::identity(3)], 10).unwrap_err();
        assert_eq!(err, GeoError::DegreeMismatch { expected: 4, found: 3 });
    }

    #[test]
    fn product_is_left_to_right() {
        let a = p(3, &[&[0, 1]]);
        let b = p(3, &[&[1, 2]]);
        // 0 -a-> 1 -b-> 2
        assert_eq!(a.then(&b).apply(0), 2);
        assert!(a.then(&a.inverse()).is_identity());
    }

    #[test]
    fn orbits_and_stabilizers() {
        let g = PermGroup::new(5, vec![p(5, &[&[0, 1, 2]])], 100).unwrap();
        assert_eq!(g.orbits(), vec![vec![0, 1, 2], vec![3], vec![4]]);
        assert_eq!(g.orbit_of(1), vec![0, 1, 2]);
        let s = g.set_stabilizer(&[ElementId(0)]).unwrap();
        assert_eq!(s.order().unwrap(), 1);
        let s = g.set_stabilizer(&[]).unwrap();
        assert_eq!(s.order().unwrap(), 3);
    }

    #[test]
    fn normal_closure_of_transposition_in_s3() {
        let s3 = PermGroup::new(3, vec![p(3, &[&[0, 1]]), p(3, &[&[0, 1, 2]])], 100).unwrap();
        let t = PermGroup::new(3, vec![p(3, &[&[0, 1]])], 100).unwrap();
        assert_eq!(s3.normal_closure(&t).unwrap().order().unwrap(), 6);
        let a3 = PermGroup::new(3, vec![p(3, &[&[0, 1, 2]])], 100).unwrap();
        assert_eq!(s3.normal_closure(&a3).unwrap().order().unwrap(), 3);
        assert!(a3.is_normal_in(&s3).unwrap());
        assert!(!t.is_normal_in(&s3).unwrap());
    }

    #[test]
    fn semiregularity() {
        let g = PermGroup::new(4, vec![p(4, &[&[0, 1], &[2, 3]])], 10).unwrap();
        assert!(g.is_semiregular().unwrap());
        let h = PermGroup::new(4, vec![p(4, &[&[0, 1]])], 10).unwrap();
        assert!(!h.is_semiregular().unwrap());
        assert_eq!(h.semiregularity_witness().unwrap().unwrap().0, 2);
        assert!(PermGroup::trivial(3).is_semiregular().unwrap());
    }

    #[test]
    fn from_elements_recovers_group() {
        let g = PermGroup::new(4, vec![p(4, &[&[0, 1, 2, 3]]), p(4, &[&[0, 2]])], 100).unwrap();
        let els = g.elements().unwrap().to_vec();
        let h = PermGroup::from_elements(4, els.clone(), 100);
        assert!(h.generators().len() <= 3);
        let recomputed = PermGroup::new(4, h.generators().to_vec(), 100).unwrap();
        assert_eq!(recomputed.elements().unwrap(), els.as_slice());
    }

    #[test]
    fn display_uses_cycles() {
        assert_eq!(p(4, &[&[2, 3], &[0, 1]]).to_string(), "(0 1)(2 3)");
        assert_eq!(Permutation::identity(2).to_string(), "()");
    }
}
