//! Abstract finite groups given by multiplication tables, and coset
//! pregeometries `Γ(G, {G_i})`.
//!
//! Elements of `Γ(G, {G_i})` of type `i` are the right cosets `G_i x`; two
//! cosets are incident when they intersect. A right coset is identified by
//! its least member, and incidence is read off in one pass: for every `g`,
//! the cosets of the different `G_i` containing `g` are pairwise incident.

use std::collections::{BTreeSet, HashMap};

use crate::error::{GeoError, Result};
use crate::geometry::{ElementId, Flag, Pregeometry, PregeometryBuilder, TypeId, Verdict};
use crate::iso::isomorphism;
use crate::perm::{transitivity, PermGroup, Permutation, Transitivity, TransitivityWitness};
use crate::quotient::Partition;

/// A finite group with an explicit Cayley table. Element 0 is not assumed
/// to be the identity; see [`FiniteGroup::identity`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    names: Vec<String>,
    table: Vec<u32>,
    inverse: Vec<u32>,
    identity: usize,
}

/// Beyond this order associativity is checked on a sample of triples.
const EXHAUSTIVE_ASSOCIATIVITY: usize = 100;

impl FiniteGroup {
    /// Validates a multiplication table given row by row: `table[a][b] = ab`.
    pub fn from_table(names: Vec<String>, table: Vec<Vec<usize>>) -> Result<Self> {
        let n = names.len();
        if n == 0 {
            return Err(GeoError::InvalidGroup("a group has at least one element".into()));
        }
        if table.len() != n || table.iter().any(|row| row.len() != n) {
            return Err(GeoError::InvalidGroup("table must be square".into()));
        }
        if table.iter().flatten().any(|&x| x >= n) {
            return Err(GeoError::InvalidGroup("table entry out of range".into()));
        }
        let flat: Vec<u32> = table.iter().flatten().map(|&x| x as u32).collect();
        let mul = |a: usize, b: usize| flat[a * n + b] as usize;
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| mul(e, x) == x && mul(x, e) == x))
            .ok_or_else(|| GeoError::InvalidGroup("no identity element".into()))?;
        let mut inverse = vec![0u32; n];
        for (a, inv) in inverse.iter_mut().enumerate() {
            let b = (0..n)
                .find(|&b| mul(a, b) == identity && mul(b, a) == identity)
                .ok_or_else(|| GeoError::InvalidGroup(format!("`{}` has no inverse", names[a])))?;
            *inv = b as u32;
        }
        let triples: Box<dyn Iterator<Item = (usize, usize, usize)>> = if n <= EXHAUSTIVE_ASSOCIATIVITY {
            Box::new((0..n).flat_map(move |a| (0..n).flat_map(move |b| (0..n).map(move |c| (a, b, c)))))
        } else {
            Box::new((0..20_000usize).map(move |k| {
                let h = k.wrapping_mul(2_654_435_761);
                (h % n, (h / n) % n, (h / (n * n)) % n)
            }))
        };
        for (a, b, c) in triples {
            if mul(mul(a, b), c) != mul(a, mul(b, c)) {
                return Err(GeoError::InvalidGroup(format!(
                    "not associative at ({}, {}, {})",
                    names[a], names[b], names[c]
                )));
            }
        }
        Ok(FiniteGroup {
            names,
            table: flat,
            inverse,
            identity,
        })
    }

    /// `Z_n` with elements `0..n`.
    pub fn cyclic(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(GeoError::InvalidParameter("cyclic group of order 0".into()));
        }
        FiniteGroup::from_table(
            (0..n).map(|i| i.to_string()).collect(),
            (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect(),
        )
    }

    /// `A × B`, elements named `a.b`.
    pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> Self {
        let (na, nb) = (a.order(), b.order());
        let n = na * nb;
        let names = (0..n)
            .map(|x| format!("{}.{}", a.names[x / nb], b.names[x % nb]))
            .collect();
        let table = (0..n)
            .flat_map(|x| (0..n).map(move |y| a.mul(x / nb, y / nb) * nb + b.mul(x % nb, y % nb)))
            .map(|z| z as u32)
            .collect();
        let inverse = (0..n).map(|x| (a.inv(x / nb) * nb + b.inv(x % nb)) as u32).collect();
        FiniteGroup {
            names,
            table,
            inverse,
            identity: a.identity * nb + b.identity,
        }
    }

    /// `A^k` for `k ≥ 1`.
    pub fn power(a: &FiniteGroup, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(GeoError::InvalidParameter("power must be positive".into()));
        }
        let mut g = a.clone();
        for _ in 1..k {
            g = FiniteGroup::direct_product(&g, a);
        }
        Ok(g)
    }

    /// The abstract group of a permutation group, with elements in the
    /// sorted order of [`PermGroup::elements`]. Also returns that list.
    pub fn from_perm_group(group: &PermGroup) -> Result<(Self, Vec<Permutation>)> {
        let elements = group.elements()?.to_vec();
        let index: HashMap<&Permutation, usize> = elements.iter().enumerate().map(|(k, p)| (p, k)).collect();
        let n = elements.len();
        let mut table = Vec::with_capacity(n * n);
        for a in &elements {
            for b in &elements {
                table.push(index[&a.then(b)] as u32);
            }
        }
        let inverse = elements.iter().map(|p| index[&p.inverse()] as u32).collect();
        let identity = index[&Permutation::identity(group.degree())];
        let names = (0..n).map(|k| format!("g{k}")).collect();
        Ok((
            FiniteGroup {
                names,
                table,
                inverse,
                identity,
            },
            elements,
        ))
    }

    pub fn symmetric(n: usize) -> Result<Self> {
        let mut gens = Vec::new();
        if n >= 2 {
            gens.push(Permutation::from_cycles(n, &[vec![0, 1]])?);
            gens.push(Permutation::from_cycles(n, &[(0..n).collect()])?);
        }
        Ok(FiniteGroup::from_perm_group(&PermGroup::new(n, gens, usize::MAX)?)?.0)
    }

    /// Dihedral group of order `2n`.
    pub fn dihedral(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(GeoError::InvalidParameter("dihedral group needs n ≥ 3".into()));
        }
        let rotation = Permutation::from_cycles(n, &[(0..n).collect()])?;
        let reflection = Permutation::from_images((0..n).map(|i| (n - i) % n).collect())?;
        Ok(FiniteGroup::from_perm_group(&PermGroup::new(n, vec![rotation, reflection], usize::MAX)?)?.0)
    }

    pub fn order(&self) -> usize {
        self.names.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn name(&self, x: usize) -> &str {
        &self.names[x]
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order() + b] as usize
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a] as usize
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order()).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup {
            members: (0..self.order()).collect(),
        }
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        Subgroup {
            members: vec![self.identity],
        }
    }

    /// Checks closure and returns the subgroup with the given members.
    pub fn subgroup(&self, members: impl IntoIterator<Item = usize>) -> Result<Subgroup> {
        let set: BTreeSet<usize> = members.into_iter().collect();
        if set.iter().any(|&x| x >= self.order()) {
            return Err(GeoError::InvalidSubgroup("member out of range".into()));
        }
        if !set.contains(&self.identity) {
            return Err(GeoError::InvalidSubgroup("identity missing".into()));
        }
        for &a in &set {
            if !set.contains(&self.inv(a)) {
                return Err(GeoError::InvalidSubgroup(format!(
                    "not closed under inverses at `{}`",
                    self.name(a)
                )));
            }
            for &b in &set {
                if !set.contains(&self.mul(a, b)) {
                    return Err(GeoError::InvalidSubgroup(format!(
                        "not closed at `{}`·`{}`",
                        self.name(a),
                        self.name(b)
                    )));
                }
            }
        }
        Ok(Subgroup {
            members: set.into_iter().collect(),
        })
    }

    /// The subgroup generated by `gens`.
    pub fn generated(&self, gens: impl IntoIterator<Item = usize>) -> Subgroup {
        let gens: Vec<usize> = gens.into_iter().collect();
        let mut seen = vec![false; self.order()];
        seen[self.identity] = true;
        let mut members = vec![self.identity];
        let mut i = 0;
        while i < members.len() {
            let x = members[i];
            i += 1;
            for &g in &gens {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    members.push(y);
                }
            }
        }
        members.sort_unstable();
        Subgroup { members }
    }

    /// A small generating set, chosen greedily in element order.
    pub fn generating_set(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut span = self.generated([]);
        for x in 0..self.order() {
            if !span.contains(x) {
                gens.push(x);
                span = self.generated(gens.iter().copied());
            }
        }
        gens
    }

    pub fn product(&self, a: &BTreeSet<usize>, b: &BTreeSet<usize>) -> BTreeSet<usize> {
        a.iter().flat_map(|&x| b.iter().map(move |&y| self.mul(x, y))).collect()
    }

    /// The right coset `H x`.
    pub fn right_coset(&self, h: &Subgroup, x: usize) -> BTreeSet<usize> {
        h.members.iter().map(|&m| self.mul(m, x)).collect()
    }

    /// The permutation of `0..order` given by right multiplication by `g`.
    pub fn right_regular(&self, g: usize) -> Permutation {
        Permutation::from_images((0..self.order()).map(|x| self.mul(x, g)).collect())
            .expect("rows of a group table are permutations")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subgroup {
    members: Vec<usize>,
}

impl Subgroup {
    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.members.binary_search(&x).is_ok()
    }

    pub fn as_set(&self) -> BTreeSet<usize> {
        self.members.iter().copied().collect()
    }

    pub fn intersection(&self, other: &Subgroup) -> Subgroup {
        Subgroup {
            members: self.members.iter().copied().filter(|&x| other.contains(x)).collect(),
        }
    }
}

/// `Γ(G, {G_i})` with the right-multiplication action of `G`.
#[derive(Clone, Debug)]
pub struct CosetGeometry {
    pub geometry: Pregeometry,
    /// `coset_of[i][g]` is the element for `G_i g`.
    pub coset_of: Vec<Vec<ElementId>>,
    /// Least member of each coset, per element.
    pub representative: Vec<usize>,
    /// The action of a generating set of `G` by right multiplication.
    pub action: PermGroup,
    /// The group elements whose action is listed in `action`.
    pub generators: Vec<usize>,
}

impl CosetGeometry {
    /// The permutation of the elements induced by right multiplication by `g`.
    pub fn action_of(&self, group: &FiniteGroup, g: usize) -> Permutation {
        let images = (0..self.geometry.num_elements())
            .map(|e| {
                let t = self.geometry.type_of(ElementId(e)).0;
                self.coset_of[t][group.mul(self.representative[e], g)].0
            })
            .collect();
        Permutation::from_images(images).expect("right multiplication permutes cosets")
    }

    /// The permutation group induced by a subgroup of `G`.
    pub fn action_of_subgroup(&self, group: &FiniteGroup, sub: &Subgroup, cap: usize) -> Result<PermGroup> {
        let gens = group
            .generated([])
            .members
            .iter()
            .copied()
            .chain(subgroup_generators(group, sub))
            .map(|g| self.action_of(group, g))
            .collect();
        PermGroup::new(self.geometry.num_elements(), gens, cap)
    }

    /// The flag `{G_i : i ∈ types}`.
    pub fn base_flag(&self, group: &FiniteGroup, types: &[TypeId]) -> Flag {
        Flag::new(types.iter().map(|t| self.coset_of[t.0][group.identity()]).collect())
    }
}

fn subgroup_generators(group: &FiniteGroup, sub: &Subgroup) -> Vec<usize> {
    let mut gens = Vec::new();
    let mut span = group.generated([]);
    for &x in sub.members() {
        if !span.contains(x) {
            gens.push(x);
            span = group.generated(gens.iter().copied());
        }
    }
    gens
}

/// Builds `Γ(G, {G_i})`. Types are named `G1`, `G2`, ... unless names are
/// supplied.
pub fn coset_pregeometry(
    group: &FiniteGroup,
    subgroups: &[Subgroup],
    type_names: Option<Vec<String>>,
    cap: usize,
) -> Result<CosetGeometry> {
    if subgroups.is_empty() {
        return Err(GeoError::InvalidSubgroup("need at least one subgroup".into()));
    }
    for h in subgroups {
        group.subgroup(h.members.iter().copied())?;
    }
    let type_names = type_names.unwrap_or_else(|| (1..=subgroups.len()).map(|i| format!("G{i}")).collect());
    if type_names.len() != subgroups.len() {
        return Err(GeoError::InvalidParameter("one type name per subgroup".into()));
    }
    let n = group.order();
    let mut b = PregeometryBuilder::new();
    let types: Vec<TypeId> = type_names.iter().map(|t| b.add_type(t.clone())).collect();
    let mut coset_of = vec![vec![ElementId(usize::MAX); n]; subgroups.len()];
    let mut representative = Vec::new();
    for (i, h) in subgroups.iter().enumerate() {
        for x in 0..n {
            if coset_of[i][x].0 != usize::MAX {
                continue;
            }
            let coset = group.right_coset(h, x);
            let rep = *coset.iter().next().expect("cosets are nonempty");
            let e = b.add_element(format!("{}@{}", type_names[i], group.name(rep)), types[i]);
            representative.push(rep);
            for y in coset {
                coset_of[i][y] = e;
            }
        }
    }
    let mut pairs = BTreeSet::new();
    for g in 0..n {
        for (i, ci) in coset_of.iter().enumerate() {
            for cj in &coset_of[i + 1..] {
                pairs.insert((ci[g], cj[g]));
            }
        }
    }
    for (x, y) in pairs {
        b.incidence(x, y);
    }
    let geometry = b.build()?;
    let generators = group.generating_set();
    let mut cg = CosetGeometry {
        geometry,
        coset_of,
        representative,
        action: PermGroup::trivial(0),
        generators: generators.clone(),
    };
    let perms = generators.iter().map(|&g| cg.action_of(group, g)).collect();
    cg.action = PermGroup::new(cg.geometry.num_elements(), perms, cap)?;
    cg.action.check_automorphisms(&cg.geometry)?;
    Ok(cg)
}

/// The `G`-invariant partition of `Γ(G, {G_i})` whose type-`i` blocks are
/// the right cosets of an overgroup `K_i ≥ G_i`.
pub fn overgroup_partition(
    cg: &CosetGeometry,
    group: &FiniteGroup,
    subgroups: &[Subgroup],
    overgroups: &[Subgroup],
) -> Result<Partition> {
    if subgroups.len() != overgroups.len() {
        return Err(GeoError::InvalidParameter("one overgroup per subgroup".into()));
    }
    let mut blocks = Vec::new();
    for (i, (h, k)) in subgroups.iter().zip(overgroups).enumerate() {
        if !h.members().iter().all(|&x| k.contains(x)) {
            return Err(GeoError::InvalidSubgroup(format!(
                "overgroup {} does not contain G{}",
                i + 1,
                i + 1
            )));
        }
        let mut seen = vec![false; group.order()];
        for x in 0..group.order() {
            if seen[x] {
                continue;
            }
            let coset = group.right_coset(k, x);
            let mut block: Vec<ElementId> = coset.iter().map(|&y| cg.coset_of[i][y]).collect();
            block.sort_unstable();
            block.dedup();
            for y in coset {
                seen[y] = true;
            }
            blocks.push(block);
        }
    }
    Partition::new(&cg.geometry, blocks)
}

/// `⟨G_i, G_j⟩ = G`.
pub fn rank2_connectivity(group: &FiniteGroup, gi: &Subgroup, gj: &Subgroup) -> bool {
    group
        .generated(gi.members.iter().chain(gj.members.iter()).copied())
        .order()
        == group.order()
}

/// `⋂_k (A B_k) = A (⋂_k B_k)`.
pub fn product_condition(group: &FiniteGroup, a: &Subgroup, bs: &[&Subgroup]) -> bool {
    let aset = a.as_set();
    let mut left: Option<BTreeSet<usize>> = None;
    for b in bs {
        let p = group.product(&aset, &b.as_set());
        left = Some(match left {
            None => p,
            Some(l) => l.intersection(&p).copied().collect(),
        });
    }
    let mut meet = group.whole();
    for b in bs {
        meet = meet.intersection(b);
    }
    let right = group.product(&aset, &meet.as_set());
    left.unwrap_or_else(|| group.whole().as_set()) == right
}

/// Both set-product forms of the rank-3 flag-transitivity condition.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Rank3Condition {
    /// `(G1 G2) ∩ (G1 G3) = G1 (G2 ∩ G3)`.
    pub product_form: bool,
    /// `(G1 ∩ G2)(G1 ∩ G3) = G1 ∩ (G2 G3)`.
    pub intersection_form: bool,
}

impl Rank3Condition {
    pub fn holds(&self) -> bool {
        self.product_form && self.intersection_form
    }
}

pub fn rank3_ft_condition(group: &FiniteGroup, g1: &Subgroup, g2: &Subgroup, g3: &Subgroup) -> Rank3Condition {
    let product_form = product_condition(group, g1, &[g2, g3]);
    let left = group.product(&g1.intersection(g2).as_set(), &g1.intersection(g3).as_set());
    let right: BTreeSet<usize> = group
        .product(&g2.as_set(), &g3.as_set())
        .into_iter()
        .filter(|&x| g1.contains(x))
        .collect();
    Rank3Condition {
        product_form,
        intersection_form: left == right,
    }
}

/// The rank-4 example built from an abelian group `A`.
#[derive(Clone, Debug)]
pub struct CosetExample {
    pub a: FiniteGroup,
    /// `G = A³`.
    pub group: FiniteGroup,
    /// `G_1, ..., G_4`.
    pub subgroups: Vec<Subgroup>,
    /// The diagonal subgroup.
    pub diagonal: Subgroup,
    pub coset: CosetGeometry,
    /// Action of the diagonal on the elements of the coset geometry.
    pub normal: PermGroup,
}

impl CosetExample {
    /// The index in `G` of `(x, y, z)`.
    pub fn element(&self, x: usize, y: usize, z: usize) -> usize {
        let n = self.a.order();
        (x * n + y) * n + z
    }

    /// The coset `N G_3 (a, b, b)` lifted to the quotient: the block
    /// containing `G_3 (a, b, b)`.
    pub fn g3_coset(&self, a: usize, b: usize) -> ElementId {
        self.coset.coset_of[2][self.element(a, b, b)]
    }

    /// The rank-3 truncation `Σ` to the types of `G_1, G_2, G_3`.
    pub fn sigma(&self, cap: usize) -> Result<CosetGeometry> {
        coset_pregeometry(
            &self.group,
            &self.subgroups[..3],
            Some(vec!["1".into(), "2".into(), "3".into()]),
            cap,
        )
    }

    /// The diagonal acting on `Σ`.
    pub fn sigma_normal(&self, sigma: &CosetGeometry, cap: usize) -> Result<PermGroup> {
        sigma.action_of_subgroup(&self.group, &self.diagonal, cap)
    }
}

/// `G = A³` with `G_1 = {(x,1,x)}`, `G_2 = {(x,1,1)}`, `G_3 = {(x,x,1)}`,
/// `G_4 = 1` and the diagonal `N = {(x,x,x)}`. Types are named 1 to 4.
pub fn coseteg_family(a: &FiniteGroup, cap: usize) -> Result<CosetExample> {
    if !a.is_abelian() {
        return Err(GeoError::NotAbelian);
    }
    if a.order() < 2 {
        return Err(GeoError::InvalidParameter("A must have at least two elements".into()));
    }
    let n = a.order();
    let group = FiniteGroup::power(a, 3)?;
    let id = a.identity();
    let at = |x: usize, y: usize, z: usize| (x * n + y) * n + z;
    let g1 = group.subgroup((0..n).map(|x| at(x, id, x)))?;
    let g2 = group.subgroup((0..n).map(|x| at(x, id, id)))?;
    let g3 = group.subgroup((0..n).map(|x| at(x, x, id)))?;
    let g4 = group.trivial_subgroup();
    let diagonal = group.subgroup((0..n).map(|x| at(x, x, x)))?;
    let subgroups = vec![g1, g2, g3, g4];
    let coset = coset_pregeometry(
        &group,
        &subgroups,
        Some(vec!["1".into(), "2".into(), "3".into(), "4".into()]),
        cap,
    )?;
    let normal = coset.action_of_subgroup(&group, &diagonal, cap)?;
    Ok(CosetExample {
        a: a.clone(),
        group,
        subgroups,
        diagonal,
        coset,
        normal,
    })
}

/// The five product conditions for `G_1, ..., G_4`, in the order
/// `(1;2,3)`, `(1;2,4)`, `(1;3,4)`, `(2;3,4)`, `(1;2,3,4)`.
pub fn five_product_conditions(group: &FiniteGroup, s: &[Subgroup]) -> Result<[bool; 5]> {
    if s.len() != 4 {
        return Err(GeoError::InvalidParameter("need exactly four subgroups".into()));
    }
    Ok([
        product_condition(group, &s[0], &[&s[1], &s[2]]),
        product_condition(group, &s[0], &[&s[1], &s[3]]),
        product_condition(group, &s[0], &[&s[2], &s[3]]),
        product_condition(group, &s[1], &[&s[2], &s[3]]),
        product_condition(group, &s[0], &[&s[1], &s[2], &s[3]]),
    ])
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NotCoset {
    NoChamber,
    Transitivity(TransitivityWitness),
}

/// Decides whether `group` realises `geom` as a coset pregeometry: `geom`
/// has a chamber and `group` is vertex- and incidence-transitive. When it
/// does, the subgroups are reconstructed as the stabilizers of a chamber's
/// elements and the isomorphism with `Γ(G, {G_i})` is verified.
pub fn is_coset_pregeometry(geom: &Pregeometry, group: &PermGroup) -> Result<Verdict<NotCoset>> {
    let Some(chamber) = geom.chambers().into_iter().next() else {
        return Ok(Verdict::Fails(NotCoset::NoChamber));
    };
    for kind in [Transitivity::Vertex, Transitivity::Incidence] {
        if let Verdict::Fails(w) = transitivity(group, geom, &kind)? {
            return Ok(Verdict::Fails(NotCoset::Transitivity(w)));
        }
    }
    let (abstract_group, perms) = FiniteGroup::from_perm_group(group)?;
    let mut subgroups = Vec::new();
    for t in geom.type_ids() {
        let alpha = chamber
            .iter()
            .find(|&e| geom.type_of(e) == t)
            .expect("a chamber has every type");
        subgroups.push(
            abstract_group.subgroup(
                perms
                    .iter()
                    .enumerate()
                    .filter(|(_, p)| p.image(alpha) == alpha)
                    .map(|(k, _)| k),
            )?,
        );
    }
    let rebuilt = coset_pregeometry(
        &abstract_group,
        &subgroups,
        Some(geom.type_names().to_vec()),
        group.cap(),
    )?;
    // The map α ↦ G_i x where x sends the chamber element of type i to α.
    let mut map = vec![ElementId(usize::MAX); geom.num_elements()];
    for (k, p) in perms.iter().enumerate() {
        for alpha in chamber.iter() {
            let t = geom.type_of(alpha).0;
            map[p.image(alpha).0] = rebuilt.coset_of[t][k];
        }
    }
    let consistent = map.iter().all(|e| e.0 != usize::MAX)
        && geom.elements().all(|x| {
            geom.elements()
                .all(|y| geom.incident(x, y) == rebuilt.geometry.incident(map[x.0], map[y.0]))
        });
    if !consistent || isomorphism(geom, &rebuilt.geometry).is_none() {
        return Err(GeoError::Internal(
            "coset reconstruction does not reproduce the pregeometry".into(),
        ));
    }
    Ok(Verdict::Holds)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_and_products() {
        let z2 = FiniteGroup::cyclic(2).unwrap();
        let g = FiniteGroup::power(&z2, 3).unwrap();
        assert_eq!(g.order(), 8);
        assert!(g.is_abelian());
        assert_eq!(g.name(5), "1.0.1");
        let s3 = FiniteGroup::symmetric(3).unwrap();
        assert_eq!(s3.order(), 6);
        assert!(!s3.is_abelian());
        assert_eq!(FiniteGroup::dihedral(4).unwrap().order(), 8);
    }

    #[test]
    fn bad_tables_are_rejected() {
        let err = FiniteGroup::from_table(vec!["a".into(), "b".into()], vec![vec![0, 0], vec![0, 0]]);
        assert!(err.is_err());
    }

    #[test]
    fn subgroup_closure_is_checked() {
        let z4 = FiniteGroup::cyclic(4).unwrap();
        assert!(z4.subgroup([0, 2]).is_ok());
        assert!(z4.subgroup([0, 1]).is_err());
        assert_eq!(z4.generated([1]).order(), 4);
    }

    #[test]
    fn z2_with_whole_and_trivial() {
        let z2 = FiniteGroup::cyclic(2).unwrap();
        let cg = coset_pregeometry(&z2, &[z2.whole(), z2.trivial_subgroup()], None, 100).unwrap();
        let g = &cg.geometry;
        assert_eq!(g.num_elements(), 3);
        assert_eq!(g.incidences().count(), 2);
        assert!(rank2_connectivity(&z2, &z2.whole(), &z2.trivial_subgroup()));
    }

    #[test]
    fn all_whole_gives_one_chamber() {
        let z3 = FiniteGroup::cyclic(3).unwrap();
        let cg = coset_pregeometry(&z3, &[z3.whole(), z3.whole(), z3.whole()], None, 100).unwrap();
        assert_eq!(cg.geometry.num_elements(), 3);
        assert_eq!(cg.geometry.chambers().len(), 1);
    }

    #[test]
    fn s3_point_stabilisers_generate() {
        let s3 = FiniteGroup::symmetric(3).unwrap();
        let (_, perms) = FiniteGroup::from_perm_group(
            &PermGroup::new(
                3,
                vec![
                    Permutation::from_cycles(3, &[vec![0, 1]]).unwrap(),
                    Permutation::from_cycles(3, &[vec![0, 1, 2]]).unwrap(),
                ],
                100,
            )
            .unwrap(),
        )
        .unwrap();
        let stab = |pt: usize| {
            s3.subgroup(perms.iter().enumerate().filter(|(_, p)| p.fixes(pt)).map(|(k, _)| k))
                .unwrap()
        };
        assert!(rank2_connectivity(&s3, &stab(0), &stab(1)));
    }

    #[test]
    fn coseteg_z2_counts() {
        let ex = coseteg_family(&FiniteGroup::cyclic(2).unwrap(), 1000).unwrap();
        let g = &ex.coset.geometry;
        let counts: Vec<usize> = g.type_ids().map(|t| g.elements_of_type(t).len()).collect();
        assert_eq!(counts, vec![4, 4, 4, 8]);
        assert_eq!(five_product_conditions(&ex.group, &ex.subgroups).unwrap(), [true; 5]);
    }

    #[test]
    fn non_abelian_is_rejected() {
        let s3 = FiniteGroup::symmetric(3).unwrap();
        assert_eq!(coseteg_family(&s3, 100).unwrap_err(), GeoError::NotAbelian);
    }
}
