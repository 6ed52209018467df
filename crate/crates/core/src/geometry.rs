//! Finite pregeometries and their basic structural queries.
//!
//! A [`Pregeometry`] is a finite set of typed elements together with a
//! symmetric incidence relation. Self-incidence is implicit and never stored.
//! Element and type identifiers are dense indices; every collection returned
//! by this module is ordered by index so that results are reproducible.
//!
//! Flag enumeration is plain backtracking over the types in index order. The
//! worst case is exponential in the rank (a complete multipartite incidence
//! graph has `∏ |X_i|` chambers), which is fine for the intended scale of a
//! few hundred elements and at most six or so types.

use std::collections::VecDeque;
use std::fmt;

use once_cell::sync::OnceCell;

use crate::error::{GeoError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TypeId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ElementId(pub usize);

impl fmt::Display for TypeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t{}", self.0)
    }
}

impl fmt::Display for ElementId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}

/// A set of types, stored as a bitmask. Ranks above 64 are rejected at
/// construction time.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TypeSet(u64);

impl TypeSet {
    pub const fn empty() -> Self {
        TypeSet(0)
    }

    /// `{0, 1, ..., rank - 1}`.
    pub fn full(rank: usize) -> Self {
        assert!(rank <= 64);
        if rank == 64 {
            TypeSet(u64::MAX)
        } else {
            TypeSet((1u64 << rank) - 1)
        }
    }

    pub fn singleton(t: TypeId) -> Self {
        TypeSet(1u64 << t.0)
    }

    pub fn from_bits(bits: u64) -> Self {
        TypeSet(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn contains(self, t: TypeId) -> bool {
        t.0 < 64 && self.0 & (1u64 << t.0) != 0
    }

    pub fn insert(&mut self, t: TypeId) {
        self.0 |= 1u64 << t.0;
    }

    pub fn with(mut self, t: TypeId) -> Self {
        self.insert(t);
        self
    }

    pub fn without(self, t: TypeId) -> Self {
        TypeSet(self.0 & !(1u64 << t.0))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, other: TypeSet) -> Self {
        TypeSet(self.0 | other.0)
    }

    pub fn intersection(self, other: TypeSet) -> Self {
        TypeSet(self.0 & other.0)
    }

    pub fn difference(self, other: TypeSet) -> Self {
        TypeSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: TypeSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = TypeId> {
        let bits = self.0;
        (0..64).filter(move |i| bits & (1u64 << i) != 0).map(TypeId)
    }

    /// All subsets of `self`, in increasing bitmask order.
    pub fn subsets(self) -> impl Iterator<Item = TypeSet> {
        let full = self.0;
        let mut next = Some(0u64);
        std::iter::from_fn(move || {
            let cur = next?;
            next = if cur == full {
                None
            } else {
                Some((cur.wrapping_sub(full)) & full)
            };
            Some(TypeSet(cur))
        })
    }
}

impl FromIterator<TypeId> for TypeSet {
    fn from_iter<I: IntoIterator<Item = TypeId>>(iter: I) -> Self {
        let mut set = TypeSet::empty();
        for t in iter {
            set.insert(t);
        }
        set
    }
}

impl fmt::Display for TypeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, t) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", t.0)?;
        }
        write!(f, "}}")
    }
}

/// A set of pairwise incident elements of pairwise distinct types, kept
/// sorted by element index. The empty flag is a flag.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Flag(Vec<ElementId>);

impl Flag {
    pub fn empty() -> Self {
        Flag(Vec::new())
    }

    /// Builds a flag from any collection of element ids. Whether the result
    /// really is a flag of some geometry is checked by
    /// [`Pregeometry::is_flag`], not here.
    pub fn new(mut elements: Vec<ElementId>) -> Self {
        elements.sort_unstable();
        elements.dedup();
        Flag(elements)
    }

    pub fn elements(&self) -> &[ElementId] {
        &self.0
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, e: ElementId) -> bool {
        self.0.binary_search(&e).is_ok()
    }

    pub fn with(&self, e: ElementId) -> Flag {
        let mut v = self.0.clone();
        if let Err(pos) = v.binary_search(&e) {
            v.insert(pos, e);
        }
        Flag(v)
    }

    pub fn without(&self, e: ElementId) -> Flag {
        Flag(self.0.iter().copied().filter(|&x| x != e).collect())
    }

    pub fn is_subset(&self, other: &Flag) -> bool {
        self.0.iter().all(|&e| other.contains(e))
    }

    pub fn iter(&self) -> impl Iterator<Item = ElementId> + '_ {
        self.0.iter().copied()
    }

    /// Sort key giving the (rank, lexicographic) order used for witnesses.
    pub fn rank_lex_key(&self) -> (usize, &[ElementId]) {
        (self.0.len(), &self.0)
    }
}

impl fmt::Display for Flag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, e) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", e.0)?;
        }
        write!(f, "}}")
    }
}

/// Outcome of a decision procedure that produces a witness on failure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict<W> {
    Holds,
    Fails(W),
}

impl<W> Verdict<W> {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds)
    }

    pub fn witness(&self) -> Option<&W> {
        match self {
            Verdict::Holds => None,
            Verdict::Fails(w) => Some(w),
        }
    }

    pub fn map<V>(self, f: impl FnOnce(W) -> V) -> Verdict<V> {
        match self {
            Verdict::Holds => Verdict::Holds,
            Verdict::Fails(w) => Verdict::Fails(f(w)),
        }
    }
}

/// Graph distance with an explicit unbounded value. `Finite` orders below
/// `Infinite`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Distance {
    Finite(usize),
    Infinite,
}

impl Distance {
    pub fn is_at_least(self, bound: usize) -> bool {
        match self {
            Distance::Finite(d) => d >= bound,
            Distance::Infinite => true,
        }
    }
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Distance::Finite(d) => write!(f, "{d}"),
            Distance::Infinite => write!(f, "inf"),
        }
    }
}

/// A first violated pregeometry invariant, with witnesses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    SameTypeIncidence(ElementId, ElementId),
    EmptyType(TypeId),
    DuplicateTypeName(String),
    DuplicateElementName(String),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::SameTypeIncidence(a, b) => {
                write!(f, "same-type incidence between {} and {}", a.0, b.0)
            }
            Violation::EmptyType(t) => write!(f, "type {} has no elements", t.0),
            Violation::DuplicateTypeName(n) => write!(f, "duplicate type name `{n}`"),
            Violation::DuplicateElementName(n) => write!(f, "duplicate element name `{n}`"),
        }
    }
}

/// Witness for a non-firm geometry: a corank-1 flag lying in a single chamber.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FirmnessWitness {
    pub flag: Flag,
    pub chamber: Flag,
}

/// A pregeometry carved out of a parent one (a residue or a truncation),
/// together with the maps back to the parent's ids.
#[derive(Clone, Debug)]
pub struct Embedded {
    pub geometry: Pregeometry,
    /// `elements[child] = parent` element id.
    pub elements: Vec<ElementId>,
    /// `types[child] = parent` type id.
    pub types: Vec<TypeId>,
}

impl Embedded {
    pub fn parent_element(&self, e: ElementId) -> ElementId {
        self.elements[e.0]
    }

    pub fn child_element(&self, parent: ElementId) -> Option<ElementId> {
        self.elements.binary_search(&parent).ok().map(ElementId)
    }
}

#[derive(Clone, Debug)]
pub struct Pregeometry {
    type_names: Vec<String>,
    names: Vec<String>,
    types: Vec<TypeId>,
    neighbours: Vec<Vec<ElementId>>,
    matrix: Vec<bool>,
    by_type: Vec<Vec<ElementId>>,
    flags: OnceCell<Vec<Flag>>,
}

impl PartialEq for Pregeometry {
    fn eq(&self, other: &Self) -> bool {
        self.type_names == other.type_names
            && self.names == other.names
            && self.types == other.types
            && self.neighbours == other.neighbours
    }
}

impl Eq for Pregeometry {}

impl Pregeometry {
    /// Assembles a pregeometry. Incidences are symmetrised and self-pairs
    /// dropped; out-of-range ids are the only hard error. The remaining
    /// invariants are reported by [`Pregeometry::validate`] so that broken
    /// inputs can still be represented and diagnosed.
    pub fn new(
        type_names: Vec<String>,
        elements: Vec<(String, TypeId)>,
        incidences: impl IntoIterator<Item = (ElementId, ElementId)>,
    ) -> Result<Self> {
        if type_names.len() > 64 {
            return Err(GeoError::TooManyTypes);
        }
        let n = elements.len();
        let mut names = Vec::with_capacity(n);
        let mut types = Vec::with_capacity(n);
        let mut by_type = vec![Vec::new(); type_names.len()];
        for (idx, (name, t)) in elements.into_iter().enumerate() {
            if t.0 >= type_names.len() {
                return Err(GeoError::UnknownType(format!("{}", t.0)));
            }
            by_type[t.0].push(ElementId(idx));
            names.push(name);
            types.push(t);
        }
        let mut matrix = vec![false; n * n];
        for (a, b) in incidences {
            if a.0 >= n {
                return Err(GeoError::UnknownElement(format!("{}", a.0)));
            }
            if b.0 >= n {
                return Err(GeoError::UnknownElement(format!("{}", b.0)));
            }
            if a != b {
                matrix[a.0 * n + b.0] = true;
                matrix[b.0 * n + a.0] = true;
            }
        }
        let neighbours = (0..n)
            .map(|a| (0..n).filter(|&b| matrix[a * n + b]).map(ElementId).collect())
            .collect();
        Ok(Pregeometry {
            type_names,
            names,
            types,
            neighbours,
            matrix,
            by_type,
            flags: OnceCell::new(),
        })
    }

    pub fn rank(&self) -> usize {
        self.type_names.len()
    }

    pub fn num_elements(&self) -> usize {
        self.names.len()
    }

    pub fn all_types(&self) -> TypeSet {
        TypeSet::full(self.rank())
    }

    pub fn type_ids(&self) -> impl Iterator<Item = TypeId> {
        (0..self.rank()).map(TypeId)
    }

    pub fn elements(&self) -> impl Iterator<Item = ElementId> {
        (0..self.num_elements()).map(ElementId)
    }

    pub fn type_name(&self, t: TypeId) -> &str {
        &self.type_names[t.0]
    }

    pub fn type_names(&self) -> &[String] {
        &self.type_names
    }

    pub fn name(&self, e: ElementId) -> &str {
        &self.names[e.0]
    }

    pub fn type_of(&self, e: ElementId) -> TypeId {
        self.types[e.0]
    }

    /// `X_t`, in index order.
    pub fn elements_of_type(&self, t: TypeId) -> &[ElementId] {
        &self.by_type[t.0]
    }

    pub fn neighbours(&self, e: ElementId) -> &[ElementId] {
        &self.neighbours[e.0]
    }

    pub fn degree(&self, e: ElementId) -> usize {
        self.neighbours[e.0].len()
    }

    pub fn element_by_name(&self, name: &str) -> Option<ElementId> {
        self.names.iter().position(|n| n == name).map(ElementId)
    }

    pub fn type_by_name(&self, name: &str) -> Option<TypeId> {
        self.type_names.iter().position(|n| n == name).map(TypeId)
    }

    /// Reflexive incidence.
    pub fn incident(&self, a: ElementId, b: ElementId) -> bool {
        a == b || self.matrix[a.0 * self.num_elements() + b.0]
    }

    /// Unordered incident pairs `a < b` (the edges of the incidence graph).
    pub fn incidences(&self) -> impl Iterator<Item = (ElementId, ElementId)> + '_ {
        self.elements().flat_map(move |a| {
            self.neighbours[a.0]
                .iter()
                .copied()
                .filter(move |&b| a < b)
                .map(move |b| (a, b))
        })
    }

    pub fn type_set_of(&self, elements: &[ElementId]) -> TypeSet {
        elements.iter().map(|&e| self.type_of(e)).collect()
    }

    pub fn flag_type(&self, flag: &Flag) -> TypeSet {
        self.type_set_of(flag.elements())
    }

    pub fn validate(&self) -> std::result::Result<(), Violation> {
        let mut seen = std::collections::HashSet::new();
        for name in &self.type_names {
            if !seen.insert(name.as_str()) {
                return Err(Violation::DuplicateTypeName(name.clone()));
            }
        }
        let mut seen = std::collections::HashSet::new();
        for name in &self.names {
            if !seen.insert(name.as_str()) {
                return Err(Violation::DuplicateElementName(name.clone()));
            }
        }
        for (a, b) in self.incidences() {
            if self.type_of(a) == self.type_of(b) {
                return Err(Violation::SameTypeIncidence(a, b));
            }
        }
        for t in self.type_ids() {
            if self.by_type[t.0].is_empty() {
                return Err(Violation::EmptyType(t));
            }
        }
        Ok(())
    }

    /// True when `elements` is pairwise incident with pairwise distinct types.
    pub fn is_flag(&self, flag: &Flag) -> bool {
        let els = flag.elements();
        if els.iter().any(|e| e.0 >= self.num_elements()) {
            return false;
        }
        for (i, &a) in els.iter().enumerate() {
            for &b in &els[i + 1..] {
                if self.type_of(a) == self.type_of(b) || !self.incident(a, b) {
                    return false;
                }
            }
        }
        true
    }

    pub(crate) fn check_flag(&self, flag: &Flag) -> Result<()> {
        if self.is_flag(flag) {
            Ok(())
        } else {
            Err(GeoError::NotAFlag(flag.clone()))
        }
    }

    fn check_types(&self, types: TypeSet) -> Result<()> {
        if types.is_subset(self.all_types()) {
            Ok(())
        } else {
            let bad = types.difference(self.all_types()).iter().next().unwrap();
            Err(GeoError::UnknownType(format!("{}", bad.0)))
        }
    }

    fn incident_with_all(&self, e: ElementId, chosen: &[ElementId]) -> bool {
        chosen.iter().all(|&c| self.incident(e, c))
    }

    fn extend_over(
        &self,
        order: &[TypeId],
        pos: usize,
        optional: bool,
        current: &mut Vec<ElementId>,
        out: &mut Vec<Flag>,
    ) {
        if pos == order.len() {
            out.push(Flag::new(current.clone()));
            return;
        }
        if optional {
            self.extend_over(order, pos + 1, optional, current, out);
        }
        for &e in &self.by_type[order[pos].0] {
            if self.incident_with_all(e, current) {
                current.push(e);
                self.extend_over(order, pos + 1, optional, current, out);
                current.pop();
            }
        }
    }

    /// Every flag `F` with `t(F) = types`, in lexicographic order.
    pub fn flags_of_type(&self, types: TypeSet) -> Result<Vec<Flag>> {
        self.check_types(types)?;
        let order: Vec<TypeId> = types.iter().collect();
        let mut out = Vec::new();
        self.extend_over(&order, 0, false, &mut Vec::new(), &mut out);
        out.sort();
        Ok(out)
    }

    /// Every flag of the pregeometry (the empty flag included), sorted by
    /// rank and then lexicographically. Computed once and cached.
    pub fn flags(&self) -> &[Flag] {
        self.flags.get_or_init(|| {
            let order: Vec<TypeId> = self.type_ids().collect();
            let mut out = Vec::new();
            self.extend_over(&order, 0, true, &mut Vec::new(), &mut out);
            out.sort_by(|a, b| a.rank_lex_key().cmp(&b.rank_lex_key()));
            out
        })
    }

    /// Fails with [`GeoError::FlagCountExceeded`] when there are more than `cap` flags.
    pub fn require_flags_at_most(&self, cap: usize) -> Result<usize> {
        self.count_flags_up_to(cap).ok_or(GeoError::FlagCountExceeded { cap })
    }

    /// Counts flags, giving up once `cap` is exceeded.
    pub fn count_flags_up_to(&self, cap: usize) -> Option<usize> {
        fn walk(g: &Pregeometry, t: usize, current: &mut Vec<ElementId>, count: &mut usize, cap: usize) -> bool {
            if t == g.rank() {
                *count += 1;
                return *count <= cap;
            }
            if !walk(g, t + 1, current, count, cap) {
                return false;
            }
            for &e in &g.by_type[t] {
                if g.incident_with_all(e, current) {
                    current.push(e);
                    let ok = walk(g, t + 1, current, count, cap);
                    current.pop();
                    if !ok {
                        return false;
                    }
                }
            }
            true
        }
        let mut count = 0;
        if walk(self, 0, &mut Vec::new(), &mut count, cap) {
            Some(count)
        } else {
            None
        }
    }

    pub fn chambers(&self) -> Vec<Flag> {
        self.flags_of_type(self.all_types())
            .expect("full type set is always valid")
    }

    /// Elements incident with every member of `flag` whose type lies
    /// outside `t(flag)`. The caller guarantees `flag` is a flag.
    pub fn residue_elements(&self, flag: &Flag) -> Vec<ElementId> {
        let used = self.flag_type(flag);
        match flag.elements().first() {
            None => self.elements().collect(),
            Some(&first) => self.neighbours[first.0]
                .iter()
                .copied()
                .filter(|&e| !used.contains(self.type_of(e)))
                .filter(|&e| self.incident_with_all(e, flag.elements()))
                .collect(),
        }
    }

    /// Chambers containing `flag`.
    pub fn chambers_through(&self, flag: &Flag) -> Vec<Flag> {
        let used = self.flag_type(flag);
        let rest: Vec<TypeId> = self.all_types().difference(used).iter().collect();
        let mut out = Vec::new();
        let mut current = flag.elements().to_vec();
        self.extend_over(&rest, 0, false, &mut current, &mut out);
        out.sort();
        out
    }

    pub fn is_maximal_flag(&self, flag: &Flag) -> bool {
        self.residue_elements(flag).is_empty()
    }

    /// Decides whether every maximal flag is a chamber. The witness is the
    /// least maximal non-chamber flag in (rank, lexicographic) order.
    pub fn is_geometry(&self) -> Verdict<Flag> {
        let rank = self.rank();
        for flag in self.flags() {
            if flag.rank() < rank && self.is_maximal_flag(flag) {
                return Verdict::Fails(flag.clone());
            }
        }
        Verdict::Holds
    }

    pub(crate) fn require_geometry(&self) -> Result<()> {
        match self.is_geometry() {
            Verdict::Holds => Ok(()),
            Verdict::Fails(f) => Err(GeoError::NotAGeometry(f)),
        }
    }

    /// Every corank-1 flag lies in at least two chambers.
    pub fn is_firm(&self) -> Result<Verdict<FirmnessWitness>> {
        self.require_geometry()?;
        let rank = self.rank();
        for flag in self.flags().iter().filter(|f| f.rank() + 1 == rank) {
            let chambers = self.chambers_through(flag);
            if chambers.len() < 2 {
                let chamber = chambers
                    .into_iter()
                    .next()
                    .ok_or_else(|| GeoError::Internal("flag of a geometry in no chamber".into()))?;
                return Ok(Verdict::Fails(FirmnessWitness {
                    flag: flag.clone(),
                    chamber,
                }));
            }
        }
        Ok(Verdict::Holds)
    }

    fn induced(&self, keep: &[ElementId], types: &[TypeId]) -> Embedded {
        let mut type_index = vec![usize::MAX; self.rank()];
        for (k, t) in types.iter().enumerate() {
            type_index[t.0] = k;
        }
        let mut element_index = vec![usize::MAX; self.num_elements()];
        for (k, e) in keep.iter().enumerate() {
            element_index[e.0] = k;
        }
        let elements = keep
            .iter()
            .map(|&e| (self.names[e.0].clone(), TypeId(type_index[self.type_of(e).0])))
            .collect();
        let incidences: Vec<(ElementId, ElementId)> = keep
            .iter()
            .flat_map(|&a| {
                self.neighbours[a.0]
                    .iter()
                    .filter(|b| element_index[b.0] != usize::MAX && a < **b)
                    .map(|b| (ElementId(element_index[a.0]), ElementId(element_index[b.0])))
                    .collect::<Vec<_>>()
            })
            .collect();
        let geometry = Pregeometry::new(
            types.iter().map(|t| self.type_names[t.0].clone()).collect(),
            elements,
            incidences,
        )
        .expect("induced structure is well-formed");
        Embedded {
            geometry,
            elements: keep.to_vec(),
            types: types.to_vec(),
        }
    }

    /// The residue `Γ_F` over the cotype of `flag`, with maps back to `self`.
    pub fn residue(&self, flag: &Flag) -> Result<Embedded> {
        self.check_flag(flag)?;
        let keep = self.residue_elements(flag);
        let types: Vec<TypeId> = self.all_types().difference(self.flag_type(flag)).iter().collect();
        Ok(self.induced(&keep, &types))
    }

    /// The `J`-truncation: elements with type in `J` and inherited incidence.
    pub fn truncation(&self, types: TypeSet) -> Result<Embedded> {
        if types.is_empty() {
            return Err(GeoError::EmptyTypeSet);
        }
        self.check_types(types)?;
        let keep: Vec<ElementId> = self.elements().filter(|&e| types.contains(self.type_of(e))).collect();
        let order: Vec<TypeId> = types.iter().collect();
        Ok(self.induced(&keep, &order))
    }

    /// Breadth-first distances from `from` in the incidence graph.
    pub fn distances_from(&self, from: ElementId) -> Vec<Distance> {
        let mut dist = vec![Distance::Infinite; self.num_elements()];
        dist[from.0] = Distance::Finite(0);
        let mut queue = VecDeque::from([from]);
        while let Some(x) = queue.pop_front() {
            let Distance::Finite(d) = dist[x.0] else { unreachable!() };
            for &y in &self.neighbours[x.0] {
                if dist[y.0] == Distance::Infinite {
                    dist[y.0] = Distance::Finite(d + 1);
                    queue.push_back(y);
                }
            }
        }
        dist
    }

    pub fn incidence_distance(&self, a: ElementId, b: ElementId) -> Distance {
        self.distances_from(a)[b.0]
    }

    /// Connected components of the incidence graph, each sorted, ordered by
    /// least member.
    pub fn components(&self) -> Vec<Vec<ElementId>> {
        let mut seen = vec![false; self.num_elements()];
        let mut out = Vec::new();
        for start in self.elements() {
            if seen[start.0] {
                continue;
            }
            let mut comp = vec![start];
            seen[start.0] = true;
            let mut i = 0;
            while i < comp.len() {
                let x = comp[i];
                i += 1;
                for &y in &self.neighbours[x.0] {
                    if !seen[y.0] {
                        seen[y.0] = true;
                        comp.push(y);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Nonempty with a connected incidence graph.
    pub fn is_connected(&self) -> bool {
        self.components().len() == 1
    }

    /// Every flag of corank at least two has a nonempty, connected residue.
    /// The witness is the least offending flag.
    pub fn is_residually_connected(&self) -> Verdict<Flag> {
        let rank = self.rank();
        for flag in self.flags() {
            if flag.rank() + 2 > rank {
                continue;
            }
            let keep = self.residue_elements(flag);
            if keep.is_empty() || !self.induced_connected(&keep) {
                return Verdict::Fails(flag.clone());
            }
        }
        Verdict::Holds
    }

    fn induced_connected(&self, keep: &[ElementId]) -> bool {
        let mut inside = vec![false; self.num_elements()];
        for &e in keep {
            inside[e.0] = true;
        }
        let mut seen = vec![false; self.num_elements()];
        let mut stack = vec![keep[0]];
        seen[keep[0].0] = true;
        let mut count = 1;
        while let Some(x) = stack.pop() {
            for &y in &self.neighbours[x.0] {
                if inside[y.0] && !seen[y.0] {
                    seen[y.0] = true;
                    count += 1;
                    stack.push(y);
                }
            }
        }
        count == keep.len()
    }

    /// Rank-2 pregeometry whose incidence graph is complete bipartite with
    /// both sides nonempty.
    pub fn is_generalized_digon(&self) -> Result<bool> {
        if self.rank() != 2 {
            return Err(GeoError::WrongRank {
                expected: 2,
                found: self.rank(),
            });
        }
        let (left, right) = (&self.by_type[0], &self.by_type[1]);
        if left.is_empty() || right.is_empty() {
            return Ok(false);
        }
        Ok(left.iter().all(|&a| right.iter().all(|&b| self.incident(a, b))))
    }

    /// The same structure with elements reordered by `(type, index)`, the
    /// canonical order used for serialisation.
    pub fn canonical(&self) -> (Pregeometry, Vec<ElementId>) {
        let mut order: Vec<ElementId> = self.elements().collect();
        order.sort_by_key(|&e| (self.type_of(e), e));
        let mut position = vec![0; self.num_elements()];
        for (k, e) in order.iter().enumerate() {
            position[e.0] = k;
        }
        let elements = order
            .iter()
            .map(|&e| (self.names[e.0].clone(), self.type_of(e)))
            .collect();
        let incidences: Vec<_> = self
            .incidences()
            .map(|(a, b)| (ElementId(position[a.0]), ElementId(position[b.0])))
            .collect();
        let g = Pregeometry::new(self.type_names.clone(), elements, incidences)
            .expect("reordering preserves well-formedness");
        (g, order)
    }

    /// Renders a flag with element names instead of indices.
    pub fn describe_flag(&self, flag: &Flag) -> String {
        let names: Vec<&str> = flag.iter().map(|e| self.name(e)).collect();
        format!("{{{}}}", names.join(","))
    }
}

/// Incremental construction with name lookups, used by the generators.
#[derive(Debug, Default)]
pub struct PregeometryBuilder {
    type_names: Vec<String>,
    elements: Vec<(String, TypeId)>,
    incidences: Vec<(ElementId, ElementId)>,
}

impl PregeometryBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_type(&mut self, name: impl Into<String>) -> TypeId {
        self.type_names.push(name.into());
        TypeId(self.type_names.len() - 1)
    }

    pub fn add_element(&mut self, name: impl Into<String>, t: TypeId) -> ElementId {
        self.elements.push((name.into(), t));
        ElementId(self.elements.len() - 1)
    }

    pub fn incidence(&mut self, a: ElementId, b: ElementId) {
        self.incidences.push((a, b));
    }

    pub fn num_elements(&self) -> usize {
        self.elements.len()
    }

    pub fn build(self) -> Result<Pregeometry> {
        Pregeometry::new(self.type_names, self.elements, self.incidences)
    }
}
