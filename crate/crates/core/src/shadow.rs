//! Shadows, shadowable geometries and the lift `Γ^{n,j}`.
//!
//! Type 0 is always the base type. The shadowability test takes the strict
//! reading: `σ₀` must be injective, constant in size on each type with
//! distinct sizes on distinct types, and two elements of different types
//! are incident exactly when one shadow properly contains the other.

use std::collections::{BTreeMap, HashMap};

use crate::error::{GeoError, Result};
use crate::geometry::{ElementId, Flag, Pregeometry, PregeometryBuilder, TypeId, Verdict};
use crate::perm::{PermGroup, Permutation};

/// `σ_i(α)`: the elements of type `i` incident with `α`.
pub fn shadow(geom: &Pregeometry, t: TypeId, alpha: ElementId) -> Vec<ElementId> {
    geom.elements_of_type(t)
        .iter()
        .copied()
        .filter(|&x| geom.incident(x, alpha))
        .collect()
}

/// Why `σ₀` is not an embedding.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ShadowFailure {
    NotAGeometry(Flag),
    /// Two elements with the same shadow.
    NotInjective(ElementId, ElementId),
    /// Two elements of one type with shadows of different sizes.
    UnevenType(ElementId, ElementId),
    /// Two types whose shadows have the same size.
    SharedSize(TypeId, TypeId),
    /// Incidence and proper containment of shadows disagree.
    Incidence(ElementId, ElementId),
}

pub fn is_shadowable(geom: &Pregeometry) -> Verdict<ShadowFailure> {
    if let Verdict::Fails(f) = geom.is_geometry() {
        return Verdict::Fails(ShadowFailure::NotAGeometry(f));
    }
    let base = TypeId(0);
    let shadows: Vec<Vec<ElementId>> = geom.elements().map(|e| shadow(geom, base, e)).collect();
    let mut seen: HashMap<&Vec<ElementId>, ElementId> = HashMap::new();
    for e in geom.elements() {
        if let Some(&other) = seen.get(&shadows[e.0]) {
            return Verdict::Fails(ShadowFailure::NotInjective(other, e));
        }
        seen.insert(&shadows[e.0], e);
    }
    let mut size_of_type: Vec<Option<(ElementId, usize)>> = vec![None; geom.rank()];
    for e in geom.elements() {
        let t = geom.type_of(e).0;
        let len = shadows[e.0].len();
        match size_of_type[t] {
            None => size_of_type[t] = Some((e, len)),
            Some((first, l)) if l != len => return Verdict::Fails(ShadowFailure::UnevenType(first, e)),
            Some(_) => {}
        }
    }
    for s in 0..geom.rank() {
        for t in s + 1..geom.rank() {
            if let (Some((_, a)), Some((_, b))) = (size_of_type[s], size_of_type[t]) {
                if a == b {
                    return Verdict::Fails(ShadowFailure::SharedSize(TypeId(s), TypeId(t)));
                }
            }
        }
    }
    let proper = |a: &[ElementId], b: &[ElementId]| a.len() < b.len() && a.iter().all(|x| b.contains(x));
    for x in geom.elements() {
        for y in geom.elements().filter(|&y| y > x && geom.type_of(y) != geom.type_of(x)) {
            let (sx, sy) = (&shadows[x.0], &shadows[y.0]);
            if geom.incident(x, y) != (proper(sx, sy) || proper(sy, sx)) {
                return Verdict::Fails(ShadowFailure::Incidence(x, y));
            }
        }
    }
    Verdict::Holds
}

/// The geometry `Γ^{n,j}` together with its structure.
#[derive(Clone, Debug)]
pub struct ShadowLift {
    pub geometry: Pregeometry,
    /// `S_n^v`, permuting the positions inside each part.
    pub normal: PermGroup,
    /// For every element: the element of `Γ` it lies over and, per label
    /// in its shadow, the chosen positions as a bitmask.
    keys: Vec<(ElementId, Vec<(ElementId, u32)>)>,
    lookup: HashMap<(ElementId, Vec<(ElementId, u32)>), usize>,
    n: usize,
}

impl ShadowLift {
    /// The element of `Γ` below each element of the lift.
    pub fn base_element(&self, e: ElementId) -> ElementId {
        self.keys[e.0].0
    }

    /// `S_n ≀ H` for `H ≤ Aut(Γ)`: `S_n^v` together with `H` permuting the
    /// parts by its action on type-0 elements.
    pub fn wreath_action(&self, h: &PermGroup) -> Result<PermGroup> {
        let mut gens = self.normal.generators().to_vec();
        for g in h.generators() {
            gens.push(self.relabel(|x| g.image(x), |_, mask| mask)?);
        }
        PermGroup::new(self.geometry.num_elements(), gens, h.cap().max(self.normal.cap()))
    }

    fn relabel(
        &self,
        base: impl Fn(ElementId) -> ElementId,
        positions: impl Fn(ElementId, u32) -> u32,
    ) -> Result<Permutation> {
        let images = self
            .keys
            .iter()
            .map(|(alpha, parts)| {
                let mut moved: Vec<(ElementId, u32)> = parts.iter().map(|&(l, m)| (base(l), positions(l, m))).collect();
                moved.sort_unstable();
                self.lookup
                    .get(&(base(*alpha), moved))
                    .copied()
                    .ok_or_else(|| GeoError::NotAutomorphism {
                        index: 0,
                        reason: "the permutation does not preserve shadows".into(),
                    })
            })
            .collect::<Result<Vec<_>>>()?;
        Permutation::from_images(images)
    }

    pub fn n(&self) -> usize {
        self.n
    }
}

fn masks(n: usize, size: usize) -> Vec<u32> {
    (0u32..(1 << n)).filter(|m| m.count_ones() as usize == size).collect()
}

fn mask_name(mask: u32, n: usize) -> String {
    (0..n)
        .filter(|p| mask & (1 << p) != 0)
        .map(|p| p.to_string())
        .collect::<Vec<_>>()
        .join(".")
}

/// The lift of a shadowable geometry: type-0 elements are the vertices of
/// the complete multipartite graph with one part of size `n` per type-0
/// element of `Γ`; a type-`i` element is a choice of `j` positions in each
/// part labelled by `σ₀(α)` for some type-`i` element `α`. Incidence is
/// inclusion.
pub fn shadowable_lift(gamma: &Pregeometry, n: usize, j: usize) -> Result<ShadowLift> {
    if n <= 2 || j <= 1 || j >= n || n > 16 {
        return Err(GeoError::InvalidParameter(format!(
            "the lift needs n > 2 and 1 < j < n (n ≤ 16 supported), got n={n}, j={j}"
        )));
    }
    if let Verdict::Fails(w) = is_shadowable(gamma) {
        return Err(GeoError::Hypothesis(format!("the geometry is not shadowable: {w:?}")));
    }
    let base = TypeId(0);
    let mut b = PregeometryBuilder::new();
    for t in gamma.type_ids() {
        b.add_type(gamma.type_name(t));
    }
    let mut keys: Vec<(ElementId, Vec<(ElementId, u32)>)> = Vec::new();
    for &u in gamma.elements_of_type(base) {
        for p in 0..n {
            b.add_element(format!("{}:{p}", gamma.name(u)), base);
            keys.push((u, vec![(u, 1 << p)]));
        }
    }
    let choices = masks(n, j);
    for t in gamma.type_ids().skip(1) {
        for &alpha in gamma.elements_of_type(t) {
            let labels = shadow(gamma, base, alpha);
            let mut counter = vec![0usize; labels.len()];
            loop {
                let parts: Vec<(ElementId, u32)> =
                    labels.iter().zip(&counter).map(|(&l, &c)| (l, choices[c])).collect();
                let name: Vec<String> = parts.iter().map(|&(_, m)| mask_name(m, n)).collect();
                b.add_element(format!("{}:{}", gamma.name(alpha), name.join("|")), t);
                keys.push((alpha, parts));
                let mut k = 0;
                while k < counter.len() {
                    counter[k] += 1;
                    if counter[k] < choices.len() {
                        break;
                    }
                    counter[k] = 0;
                    k += 1;
                }
                if k == counter.len() {
                    break;
                }
            }
        }
    }
    let part_map: Vec<BTreeMap<ElementId, u32>> =
        keys.iter().map(|(_, parts)| parts.iter().copied().collect()).collect();
    for x in 0..keys.len() {
        for y in 0..keys.len() {
            let (px, py) = (&part_map[x], &part_map[y]);
            if x == y || gamma.type_of(keys[x].0) == gamma.type_of(keys[y].0) || px.len() >= py.len() {
                continue;
            }
            let included = px.iter().all(|(l, &m)| py.get(l).is_some_and(|&o| o & m == m));
            if included {
                b.incidence(ElementId(x), ElementId(y));
            }
        }
    }
    let geometry = b.build()?;
    let lookup = keys.iter().cloned().enumerate().map(|(i, k)| (k, i)).collect();
    let mut lift = ShadowLift {
        geometry,
        normal: PermGroup::trivial(0),
        keys,
        lookup,
        n,
    };
    let mut gens = Vec::new();
    for &u in gamma.elements_of_type(base) {
        let swap = |l: ElementId, m: u32| if l == u { swap_bits(m, 0, 1) } else { m };
        let rotate = |l: ElementId, m: u32| if l == u { rotate_bits(m, n) } else { m };
        gens.push(lift.relabel(|x| x, swap)?);
        gens.push(lift.relabel(|x| x, rotate)?);
    }
    lift.normal = PermGroup::new(lift.geometry.num_elements(), gens, crate::perm::DEFAULT_GROUP_CAP)?;
    Ok(lift)
}

fn swap_bits(m: u32, a: u32, b: u32) -> u32 {
    let (x, y) = ((m >> a) & 1, (m >> b) & 1);
    if x == y {
        m
    } else {
        m ^ ((1 << a) | (1 << b))
    }
}

fn rotate_bits(m: u32, n: usize) -> u32 {
    let top = (m >> (n - 1)) & 1;
    ((m << 1) | top) & ((1 << n) - 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{affine_geometry, hexagon, ssg};
    use crate::iso::isomorphic;
    use crate::quotient::Projection;

    #[test]
    fn subset_geometries_are_shadowable() {
        for (v, k) in [(3, 2), (4, 3), (5, 2)] {
            assert!(is_shadowable(&ssg(v, k).unwrap()).holds());
        }
        assert!(is_shadowable(&affine_geometry(3, 2).unwrap().geometry).holds());
        assert!(matches!(
            is_shadowable(&hexagon().0),
            Verdict::Fails(ShadowFailure::NotAGeometry(_))
        ));
    }

    #[test]
    fn lift_of_ssg32() {
        let g = ssg(3, 2).unwrap();
        let lift = shadowable_lift(&g, 3, 2).unwrap();
        assert_eq!(lift.geometry.num_elements(), 9 + 27);
        assert!(lift.geometry.is_geometry().holds());
        let proj = Projection::orbit_quotient(&lift.geometry, &lift.normal).unwrap();
        assert!(isomorphic(proj.quotient(), &g));
    }

    #[test]
    fn rank_one_lift_is_the_vertex_set() {
        let g = ssg(3, 1).unwrap();
        let lift = shadowable_lift(&g, 3, 2).unwrap();
        assert_eq!(lift.geometry.num_elements(), 9);
        assert_eq!(lift.geometry.incidences().count(), 0);
    }

    #[test]
    fn bad_parameters() {
        let g = ssg(3, 2).unwrap();
        assert!(shadowable_lift(&g, 2, 1).is_err());
        assert!(shadowable_lift(&g, 3, 3).is_err());
    }
}
