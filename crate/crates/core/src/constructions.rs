//! Generators for the standard families and the named example catalogue.

use std::collections::{BTreeSet, HashMap};

use crate::error::{GeoError, Result};
use crate::geometry::{ElementId, Pregeometry, PregeometryBuilder, TypeId};
use crate::graph::SimpleGraph;
use crate::perm::{PermGroup, Permutation, DEFAULT_GROUP_CAP};
use crate::quotient::Partition;

fn subset_name(set: &[usize]) -> String {
    let parts: Vec<String> = set.iter().map(|x| (x + 1).to_string()).collect();
    format!("{{{}}}", parts.join(","))
}

fn subsets_of_size(v: usize, size: usize) -> Vec<Vec<usize>> {
    fn grow(v: usize, size: usize, from: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for x in from..v {
            cur.push(x);
            grow(v, size, x + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    grow(v, size, 0, &mut Vec::new(), &mut out);
    out
}

fn is_subset(a: &[usize], b: &[usize]) -> bool {
    a.iter().all(|x| b.contains(x))
}

/// The subset geometry on `{1..v}`: type `i` holds the `(i+1)`-subsets and
/// incidence is inclusion. Elements are named like `{1,3}`.
pub fn ssg(v: usize, k: usize) -> Result<Pregeometry> {
    if v < 2 || k == 0 || k >= v {
        return Err(GeoError::InvalidParameter(format!(
            "ssg needs v > 1 and 0 < k < v, got v={v}, k={k}"
        )));
    }
    Ok(ssg_with_subsets(v, k).0)
}

/// Also returns the subset behind every element.
pub fn ssg_with_subsets(v: usize, k: usize) -> (Pregeometry, Vec<Vec<usize>>) {
    let mut b = PregeometryBuilder::new();
    let mut sets = Vec::new();
    for i in 0..k {
        let t = b.add_type(i.to_string());
        for s in subsets_of_size(v, i + 1) {
            b.add_element(subset_name(&s), t);
            sets.push(s);
        }
    }
    for x in 0..sets.len() {
        for y in x + 1..sets.len() {
            if sets[x].len() < sets[y].len() && is_subset(&sets[x], &sets[y]) {
                b.incidence(ElementId(x), ElementId(y));
            }
        }
    }
    (b.build().expect("generated ids are in range"), sets)
}

/// The permutation of `ssg(v, k)` induced by a permutation of `{0..v-1}`.
pub fn ssg_induced(v: usize, k: usize, points: &Permutation) -> Result<Permutation> {
    if points.degree() != v {
        return Err(GeoError::DegreeMismatch {
            expected: v,
            found: points.degree(),
        });
    }
    let (_, sets) = ssg_with_subsets(v, k);
    let index: HashMap<&Vec<usize>, usize> = sets.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let images = sets
        .iter()
        .map(|s| {
            let mut t: Vec<usize> = s.iter().map(|&x| points.apply(x)).collect();
            t.sort_unstable();
            index[&t]
        })
        .collect();
    Permutation::from_images(images)
}

/// The action of `Sym(v)` on `ssg(v, k)`.
pub fn ssg_symmetric_group(v: usize, k: usize, cap: usize) -> Result<PermGroup> {
    let mut gens = vec![ssg_induced(v, k, &Permutation::from_cycles(v, &[vec![0, 1]])?)?];
    if v > 2 {
        gens.push(ssg_induced(v, k, &Permutation::from_cycles(v, &[(0..v).collect()])?)?);
    }
    let n = gens[0].degree();
    PermGroup::new(n, gens, cap)
}

/// `AG(d, q)` for prime `q`, with its translation group.
#[derive(Clone, Debug)]
pub struct Affine {
    pub geometry: Pregeometry,
    pub translations: PermGroup,
    /// The points of each element, as indices into the point list.
    pub point_sets: Vec<Vec<usize>>,
    pub d: usize,
    pub q: usize,
}

/// Affine `i`-flats for `i < d`, with type `i` named `i`. Flats are stored
/// as sorted point sets, which is a canonical form at this scale.
pub fn affine_geometry(d: usize, q: usize) -> Result<Affine> {
    if !(2..=3).contains(&d) || !(q == 2 || q == 3) {
        return Err(GeoError::InvalidParameter(format!(
            "affine geometry supports d in {{2, 3}} and q in {{2, 3}}, got d={d}, q={q}"
        )));
    }
    let npoints = q.pow(d as u32);
    let coords = |p: usize| -> Vec<usize> { (0..d).map(|c| (p / q.pow(c as u32)) % q).collect() };
    let index = |v: &[usize]| -> usize { v.iter().enumerate().map(|(c, &x)| x * q.pow(c as u32)).sum() };
    let add = |a: usize, b: usize| -> usize {
        let (x, y) = (coords(a), coords(b));
        index(&x.iter().zip(&y).map(|(s, t)| (s + t) % q).collect::<Vec<_>>())
    };
    let scale = |s: usize, a: usize| -> usize { index(&coords(a).iter().map(|x| (x * s) % q).collect::<Vec<_>>()) };

    // Linear subspaces of each dimension, by spanning sets.
    let mut subspaces: Vec<BTreeSet<Vec<usize>>> = vec![BTreeSet::new(); d];
    subspaces[0].insert(vec![0]);
    for dim in 1..d {
        let lower: Vec<Vec<usize>> = subspaces[dim - 1].iter().cloned().collect();
        for w in lower {
            for p in 0..npoints {
                if w.contains(&p) {
                    continue;
                }
                let mut span: BTreeSet<usize> = BTreeSet::new();
                for &x in &w {
                    for s in 0..q {
                        span.insert(add(x, scale(s, p)));
                    }
                }
                subspaces[dim].insert(span.into_iter().collect());
            }
        }
    }
    let mut b = PregeometryBuilder::new();
    let mut point_sets: Vec<Vec<usize>> = Vec::new();
    for (dim, spaces) in subspaces.iter().enumerate() {
        let t = b.add_type(dim.to_string());
        let mut flats: BTreeSet<Vec<usize>> = BTreeSet::new();
        for w in spaces {
            for x in 0..npoints {
                let mut f: Vec<usize> = w.iter().map(|&y| add(y, x)).collect();
                f.sort_unstable();
                flats.insert(f);
            }
        }
        for (k, f) in flats.into_iter().enumerate() {
            let name = if dim == 0 {
                let c: Vec<String> = coords(f[0]).iter().map(|x| x.to_string()).collect();
                format!("p{}", c.join(""))
            } else {
                format!("f{dim}.{k}")
            };
            b.add_element(name, t);
            point_sets.push(f);
        }
    }
    for x in 0..point_sets.len() {
        for y in x + 1..point_sets.len() {
            if point_sets[x].len() < point_sets[y].len() && is_subset(&point_sets[x], &point_sets[y]) {
                b.incidence(ElementId(x), ElementId(y));
            }
        }
    }
    let geometry = b.build()?;
    let lookup: HashMap<&Vec<usize>, usize> = point_sets.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let mut gens = Vec::new();
    for c in 0..d {
        let shift = q.pow(c as u32);
        let images = point_sets
            .iter()
            .map(|f| {
                let mut g: Vec<usize> = f.iter().map(|&p| add(p, shift)).collect();
                g.sort_unstable();
                lookup[&g]
            })
            .collect();
        gens.push(Permutation::from_images(images)?);
    }
    let translations = PermGroup::new(geometry.num_elements(), gens, DEFAULT_GROUP_CAP)?;
    Ok(Affine {
        geometry,
        translations,
        point_sets,
        d,
        q,
    })
}

/// The Fano plane as points and lines of the difference set `{0, 1, 3}`
/// modulo 7.
pub fn fano_plane() -> Pregeometry {
    let mut b = PregeometryBuilder::new();
    let p = b.add_type("point");
    let l = b.add_type("line");
    let points: Vec<ElementId> = (0..7).map(|i| b.add_element(format!("P{i}"), p)).collect();
    for i in 0..7 {
        let line = b.add_element(format!("L{i}"), l);
        for d in [0, 1, 3] {
            b.incidence(line, points[(i + d) % 7]);
        }
    }
    b.build().expect("generated ids are in range")
}

/// `Γ × Δ` with elements `(α, δ)` at index `α·|V Δ| + δ`.
#[derive(Clone, Debug)]
pub struct Blowup {
    pub geometry: Pregeometry,
    /// The fibres `{(α, δ) : δ ∈ V Δ}`, one block per element of `Γ`.
    pub fibres: Partition,
    vertices: usize,
}

impl Blowup {
    pub fn element(&self, alpha: ElementId, delta: usize) -> ElementId {
        ElementId(alpha.0 * self.vertices + delta)
    }

    /// `G × H` acting coordinatewise, from actions on `Γ` and `Δ`.
    pub fn product_action(&self, g: &PermGroup, h: &PermGroup) -> Result<PermGroup> {
        let base = self.geometry.num_elements() / self.vertices.max(1);
        if g.degree() != base {
            return Err(GeoError::DegreeMismatch {
                expected: base,
                found: g.degree(),
            });
        }
        if h.degree() != self.vertices {
            return Err(GeoError::DegreeMismatch {
                expected: self.vertices,
                found: h.degree(),
            });
        }
        let n = self.geometry.num_elements();
        let mut gens = Vec::new();
        for p in g.generators() {
            gens.push(Permutation::from_images(
                (0..n)
                    .map(|x| p.apply(x / self.vertices) * self.vertices + x % self.vertices)
                    .collect(),
            )?);
        }
        for p in h.generators() {
            gens.push(Permutation::from_images(
                (0..n)
                    .map(|x| (x / self.vertices) * self.vertices + p.apply(x % self.vertices))
                    .collect(),
            )?);
        }
        PermGroup::new(n, gens, g.cap().max(h.cap()))
    }

    /// `1 × H`.
    pub fn fibre_action(&self, h: &PermGroup) -> Result<PermGroup> {
        let base = self.geometry.num_elements() / self.vertices.max(1);
        self.product_action(&PermGroup::trivial(base).with_cap(h.cap()), h)
    }
}

/// The blow-up of a geometry by a graph: `(α,δ) * (β,δ')` iff `α * β` and
/// either the pairs are equal or `α ≠ β` and `δ ~ δ'`.
pub fn blowup(gamma: &Pregeometry, delta: &SimpleGraph) -> Result<Blowup> {
    gamma.require_geometry()?;
    let v = delta.num_vertices();
    if v == 0 {
        return Err(GeoError::InvalidParameter("the graph has no vertices".into()));
    }
    let mut b = PregeometryBuilder::new();
    for t in gamma.type_ids() {
        b.add_type(gamma.type_name(t));
    }
    for a in gamma.elements() {
        for d in 0..v {
            b.add_element(format!("{}@{}", gamma.name(a), delta.name(d)), gamma.type_of(a));
        }
    }
    for (a, c) in gamma.incidences() {
        for (d, e) in delta.edges() {
            b.incidence(ElementId(a.0 * v + d), ElementId(c.0 * v + e));
            b.incidence(ElementId(a.0 * v + e), ElementId(c.0 * v + d));
        }
    }
    let geometry = b.build()?;
    let fibres = Partition::new(
        &geometry,
        gamma
            .elements()
            .map(|a| (0..v).map(|d| ElementId(a.0 * v + d)).collect())
            .collect(),
    )?;
    Ok(Blowup {
        geometry,
        fibres,
        vertices: v,
    })
}

/// The vertex/edge/`K_{i,i}` geometry on the complete multipartite graph
/// with `m` parts of size `n`.
#[derive(Clone, Debug)]
pub struct Multipartite {
    pub geometry: Pregeometry,
    /// `S_n^m`, permuting each part independently.
    pub normal: PermGroup,
    /// `S_n ≀ S_m`.
    pub full: PermGroup,
    pub m: usize,
    pub n: usize,
    pub i: usize,
}

pub fn multipartite(m: usize, n: usize, i: usize) -> Result<Multipartite> {
    if m < 2 || i < 2 || i >= n {
        return Err(GeoError::InvalidParameter(format!(
            "multipartite needs m ≥ 2 and 1 < i < n, got m={m}, n={n}, i={i}"
        )));
    }
    let vertex = |part: usize, k: usize| part * n + k;
    let mut b = PregeometryBuilder::new();
    let tv = b.add_type("vertex");
    let te = b.add_type("edge");
    let tk = b.add_type("K");
    // Vertex sets of every element, as (part, index) pairs flattened.
    let mut sets: Vec<Vec<usize>> = Vec::new();
    for part in 0..m {
        for k in 0..n {
            b.add_element(format!("v{part}.{k}"), tv);
            sets.push(vec![vertex(part, k)]);
        }
    }
    for p in 0..m {
        for q in p + 1..m {
            for x in 0..n {
                for y in 0..n {
                    b.add_element(format!("e{p}.{x}-{q}.{y}"), te);
                    sets.push(vec![vertex(p, x), vertex(q, y)]);
                }
            }
        }
    }
    let choices = subsets_of_size(n, i);
    for p in 0..m {
        for q in p + 1..m {
            for s in &choices {
                for t in &choices {
                    let ls: Vec<String> = s.iter().map(|x| x.to_string()).collect();
                    let lt: Vec<String> = t.iter().map(|x| x.to_string()).collect();
                    b.add_element(format!("k{p}.{}-{q}.{}", ls.join(""), lt.join("")), tk);
                    let mut set: Vec<usize> = s.iter().map(|&x| vertex(p, x)).collect();
                    set.extend(t.iter().map(|&y| vertex(q, y)));
                    sets.push(set);
                }
            }
        }
    }
    for x in 0..sets.len() {
        for y in x + 1..sets.len() {
            if sets[x].len() < sets[y].len() && is_subset(&sets[x], &sets[y]) {
                b.incidence(ElementId(x), ElementId(y));
            }
        }
    }
    let geometry = b.build()?;
    let lookup: HashMap<Vec<usize>, usize> = sets
        .iter()
        .enumerate()
        .map(|(e, s)| {
            let mut s = s.clone();
            s.sort_unstable();
            (s, e)
        })
        .collect();
    let induced = |f: &dyn Fn(usize) -> usize| -> Result<Permutation> {
        Permutation::from_images(
            sets.iter()
                .map(|s| {
                    let mut t: Vec<usize> = s.iter().map(|&x| f(x)).collect();
                    t.sort_unstable();
                    lookup[&t]
                })
                .collect(),
        )
    };
    let mut normal_gens = Vec::new();
    for part in 0..m {
        let swap = move |x: usize| {
            if x == vertex(part, 0) {
                vertex(part, 1)
            } else if x == vertex(part, 1) {
                vertex(part, 0)
            } else {
                x
            }
        };
        let rotate = move |x: usize| {
            if x / n == part {
                vertex(part, (x % n + 1) % n)
            } else {
                x
            }
        };
        normal_gens.push(induced(&swap)?);
        normal_gens.push(induced(&rotate)?);
    }
    let mut full_gens = normal_gens.clone();
    full_gens.push(induced(&|x: usize| {
        let p = x / n;
        let q = if p == 0 {
            1
        } else if p == 1 {
            0
        } else {
            p
        };
        vertex(q, x % n)
    })?);
    full_gens.push(induced(&|x: usize| vertex((x / n + 1) % m, x % n))?);
    let ne = geometry.num_elements();
    Ok(Multipartite {
        normal: PermGroup::new(ne, normal_gens, DEFAULT_GROUP_CAP)?,
        full: PermGroup::new(ne, full_gens, DEFAULT_GROUP_CAP)?,
        geometry,
        m,
        n,
        i,
    })
}

/// The complement of the 3×3 grid: elements `i.j` of type `i`, incident
/// when both coordinates differ. Returns the partition that merges
/// `i.1` with `i.2`.
pub fn grid_complement() -> (Pregeometry, Partition) {
    let mut b = PregeometryBuilder::new();
    let ts: Vec<TypeId> = (1..=3).map(|i| b.add_type(i.to_string())).collect();
    let mut es = Vec::new();
    for i in 1..=3 {
        for j in 1..=3 {
            es.push(((i, j), b.add_element(format!("{i}.{j}"), ts[i - 1])));
        }
    }
    for &((i, j), x) in &es {
        for &((h, k), y) in &es {
            if x < y && i != h && j != k {
                b.incidence(x, y);
            }
        }
    }
    let g = b.build().expect("generated ids are in range");
    let at = |i: usize, j: usize| es[(i - 1) * 3 + (j - 1)].1;
    let blocks = (1..=3)
        .flat_map(|i| [vec![at(i, 1), at(i, 2)], vec![at(i, 3)]])
        .collect();
    let part = Partition::new(&g, blocks).expect("the blocks refine the types");
    (g, part)
}

fn cycle_geometry(len: usize, type_names: &[&str], prefix: &str) -> Pregeometry {
    let mut b = PregeometryBuilder::new();
    let ts: Vec<TypeId> = type_names.iter().map(|t| b.add_type(*t)).collect();
    let es: Vec<ElementId> = (0..len)
        .map(|i| b.add_element(format!("{prefix}{i}"), ts[i % ts.len()]))
        .collect();
    for i in 0..len {
        b.incidence(es[i], es[(i + 1) % len]);
    }
    b.build().expect("generated ids are in range")
}

fn rotation(len: usize, by: usize, extra: usize) -> Permutation {
    Permutation::from_images((0..len).map(|i| (i + by) % len).chain(len..len + extra).collect())
        .expect("a rotation is a permutation")
}

/// Six elements on a cycle, element `i` of type `i mod 3`, with the
/// antipodal involution.
pub fn hexagon() -> (Pregeometry, PermGroup) {
    let g = cycle_geometry(6, &["A", "B", "C"], "x");
    let a = PermGroup::new(6, vec![rotation(6, 3, 0)], DEFAULT_GROUP_CAP).expect("order 2");
    (g, a)
}

/// A cycle of length `2m` as a rank-2 geometry, with the rotation by `m`.
pub fn polygon(m: usize) -> Result<(Pregeometry, PermGroup)> {
    if m < 2 {
        return Err(GeoError::InvalidParameter("polygon needs m ≥ 2".into()));
    }
    let g = cycle_geometry(2 * m, &["0", "1"], "");
    let a = PermGroup::new(2 * m, vec![rotation(2 * m, m, 0)], DEFAULT_GROUP_CAP)?;
    Ok((g, a))
}

/// The 8-cycle with `x ↦ x + 4`.
pub fn eight_cycle() -> (Pregeometry, PermGroup) {
    polygon(4).expect("m = 4 is valid")
}

/// The hexagon with one element of the third type added on every edge:
/// a rank-3 geometry whose involution quotient is a geometry with a
/// chamber that does not lift.
pub fn hexagon_geometry() -> (Pregeometry, PermGroup) {
    let (g, _) = hexagon_with_triangles(false);
    let n = g.num_elements();
    let images = (0..n)
        .map(|i| if i < 6 { (i + 3) % 6 } else { 6 + (i - 6 + 3) % 6 })
        .collect();
    let a = PermGroup::new(
        n,
        vec![Permutation::from_images(images).expect("bijection")],
        DEFAULT_GROUP_CAP,
    )
    .expect("order 2");
    (g, a)
}

fn hexagon_with_triangles(with_d: bool) -> (Pregeometry, Vec<ElementId>) {
    let mut b = PregeometryBuilder::new();
    let mut ts: Vec<TypeId> = ["A", "B", "C"].iter().map(|t| b.add_type(*t)).collect();
    let xs: Vec<ElementId> = (0..6).map(|i| b.add_element(format!("x{i}"), ts[i % 3])).collect();
    let letters = ["a", "b", "c"];
    let mut thirds = Vec::new();
    for i in 0..6 {
        let j = (i + 1) % 6;
        let t = (i + 2) % 3;
        thirds.push(b.add_element(format!("{}{i}{j}", letters[t]), ts[t]));
    }
    for i in 0..6 {
        let j = (i + 1) % 6;
        b.incidence(xs[i], xs[j]);
        b.incidence(thirds[i], xs[i]);
        b.incidence(thirds[i], xs[j]);
    }
    let mut ds = Vec::new();
    if with_d {
        ts.push(b.add_type("D"));
        for i in 0..6 {
            let d = b.add_element(format!("d{i}"), ts[3]);
            b.incidence(d, xs[i]);
            b.incidence(d, xs[(i + 1) % 6]);
            b.incidence(d, thirds[i]);
            ds.push(d);
        }
    }
    (b.build().expect("generated ids are in range"), ds)
}

/// The previous geometry with a fourth type, one element per chamber:
/// a rank-4 geometry whose involution quotient is not a geometry.
pub fn rank4_geometry() -> (Pregeometry, PermGroup) {
    let (g, _) = hexagon_with_triangles(true);
    let n = g.num_elements();
    let images = (0..n).map(|i| (i / 6) * 6 + (i % 6 + 3) % 6).collect();
    let a = PermGroup::new(
        n,
        vec![Permutation::from_images(images).expect("bijection")],
        DEFAULT_GROUP_CAP,
    )
    .expect("order 2");
    (g, a)
}

/// A rank-3 geometry with connected rank-2 truncations that is not
/// residually connected: the residue of `p` is two disjoint digons.
pub fn not_residually_connected() -> Pregeometry {
    let mut b = PregeometryBuilder::new();
    let tp = b.add_type("P");
    let tl = b.add_type("L");
    let tq = b.add_type("Q");
    let p = b.add_element("p", tp);
    let p3 = b.add_element("p3", tp);
    let p4 = b.add_element("p4", tp);
    let l1 = b.add_element("l1", tl);
    let l2 = b.add_element("l2", tl);
    let l3 = b.add_element("l3", tl);
    let q1 = b.add_element("q1", tq);
    let q2 = b.add_element("q2", tq);
    for (x, y) in [
        (p, l1),
        (p, l2),
        (p, q1),
        (p, q2),
        (p3, l3),
        (p3, q1),
        (p3, l1),
        (p4, l3),
        (p4, q2),
        (p4, l2),
        (l1, q1),
        (l2, q2),
        (l3, q1),
        (l3, q2),
    ] {
        b.incidence(x, y);
    }
    b.build().expect("generated ids are in range")
}

/// A rank-2 pregeometry whose two-block quotient satisfies FlagsLift but
/// not PQ1: `α` meets nothing, `α₂` meets `b₁`.
pub fn pq1_counterexample() -> (Pregeometry, Partition) {
    let mut b = PregeometryBuilder::new();
    let t1 = b.add_type("1");
    let t2 = b.add_type("2");
    let a = b.add_element("a", t1);
    let a2 = b.add_element("a2", t1);
    let b1 = b.add_element("b1", t2);
    let b2 = b.add_element("b2", t2);
    b.incidence(a2, b1);
    let g = b.build().expect("generated ids are in range");
    let part = Partition::new(&g, vec![vec![a, a2], vec![b1, b2]]).expect("type-refining");
    (g, part)
}

/// Two elements per type in rank 3, all cross-type pairs incident, with
/// the group generated by `(a0 a0')(a1 a1')` and `(a0 a0')(a2 a2')`.
pub fn tq1_counterexample() -> (Pregeometry, PermGroup) {
    let mut b = PregeometryBuilder::new();
    let ts: Vec<TypeId> = (0..3).map(|i| b.add_type(i.to_string())).collect();
    let mut es = Vec::new();
    for (i, &t) in ts.iter().enumerate() {
        es.push(b.add_element(format!("a{i}"), t));
        es.push(b.add_element(format!("a{i}'"), t));
    }
    for x in 0..6 {
        for y in x + 1..6 {
            if x / 2 != y / 2 {
                b.incidence(es[x], es[y]);
            }
        }
    }
    let g = b.build().expect("generated ids are in range");
    let gens = vec![
        Permutation::from_cycles(6, &[vec![0, 1], vec![2, 3]]).expect("valid cycles"),
        Permutation::from_cycles(6, &[vec![0, 1], vec![4, 5]]).expect("valid cycles"),
    ];
    (g, PermGroup::new(6, gens, DEFAULT_GROUP_CAP).expect("order 4"))
}

/// A named example with the group or partition it comes with.
#[derive(Clone, Debug)]
pub struct CatalogueEntry {
    pub name: &'static str,
    pub geometry: Pregeometry,
    pub group: Option<PermGroup>,
    pub partition: Option<Partition>,
}

pub const CATALOGUE: &[&str] = &[
    "hexagon",
    "hexagon-geometry",
    "rank4",
    "not-residually-connected",
    "pq1",
    "tq1",
    "eight-cycle",
    "grid-complement",
    "multipartite",
];

pub fn catalogue(name: &str) -> Result<CatalogueEntry> {
    let (geometry, group, partition) = match name {
        "hexagon" => {
            let (g, a) = hexagon();
            (g, Some(a), None)
        }
        "hexagon-geometry" => {
            let (g, a) = hexagon_geometry();
            (g, Some(a), None)
        }
        "rank4" => {
            let (g, a) = rank4_geometry();
            (g, Some(a), None)
        }
        "not-residually-connected" => (not_residually_connected(), None, None),
        "pq1" => {
            let (g, p) = pq1_counterexample();
            (g, None, Some(p))
        }
        "tq1" => {
            let (g, a) = tq1_counterexample();
            (g, Some(a), None)
        }
        "eight-cycle" => {
            let (g, a) = eight_cycle();
            (g, Some(a), None)
        }
        "grid-complement" => {
            let (g, p) = grid_complement();
            (g, None, Some(p))
        }
        "multipartite" => {
            let mp = multipartite(2, 4, 2)?;
            (mp.geometry, Some(mp.normal), None)
        }
        _ => {
            return Err(GeoError::InvalidParameter(format!(
                "unknown catalogue entry `{name}`; known: {}",
                CATALOGUE.join(", ")
            )))
        }
    };
    let name = CATALOGUE.iter().find(|n| **n == name).copied().expect("matched above");
    Ok(CatalogueEntry {
        name,
        geometry,
        group,
        partition,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quotient::Projection;

    #[test]
    fn ssg_counts() {
        let g = ssg(3, 2).unwrap();
        assert_eq!(g.num_elements(), 6);
        assert_eq!(g.chambers().len(), 6);
        assert_eq!(ssg(5, 1).unwrap().rank(), 1);
        assert!(ssg(3, 3).is_err());
        assert_eq!(ssg_symmetric_group(4, 3, 1000).unwrap().order().unwrap(), 24);
    }

    #[test]
    fn affine_counts() {
        let ag = affine_geometry(3, 2).unwrap();
        let counts: Vec<usize> = ag
            .geometry
            .type_ids()
            .map(|t| ag.geometry.elements_of_type(t).len())
            .collect();
        assert_eq!(counts, vec![8, 28, 14]);
        assert_eq!(ag.translations.order().unwrap(), 8);
        let ag = affine_geometry(2, 2).unwrap();
        assert_eq!(ag.geometry.num_elements(), 10);
        let ag = affine_geometry(2, 3).unwrap();
        assert_eq!(ag.geometry.num_elements(), 9 + 12);
        assert!(affine_geometry(4, 2).is_err());
    }

    #[test]
    fn fano_is_a_projective_plane() {
        let f = fano_plane();
        assert!(f.elements().all(|e| f.degree(e) == 3));
        let points = f.elements_of_type(TypeId(0));
        for (i, &x) in points.iter().enumerate() {
            for &y in &points[i + 1..] {
                let common = f.neighbours(x).iter().filter(|l| f.incident(**l, y)).count();
                assert_eq!(common, 1);
            }
        }
    }

    #[test]
    fn grid_complement_flag_in_one_chamber() {
        let (g, part) = grid_complement();
        let proj = Projection::new(&g, part).unwrap();
        let q = proj.quotient();
        let a = q.element_by_name("{1.1,1.2}").unwrap();
        let b = q.element_by_name("{2.3}").unwrap();
        assert_eq!(q.chambers_through(&crate::Flag::new(vec![a, b])).len(), 1);
    }

    #[test]
    fn catalogue_entries_validate() {
        for name in CATALOGUE {
            let entry = catalogue(name).unwrap();
            assert!(entry.geometry.validate().is_ok(), "{name}");
            if let Some(a) = &entry.group {
                a.check_automorphisms(&entry.geometry).unwrap();
            }
        }
        assert!(catalogue("nope").is_err());
    }

    #[test]
    fn multipartite_groups_act() {
        let mp = multipartite(2, 4, 2).unwrap();
        assert_eq!(mp.normal.order().unwrap(), 24 * 24);
        assert_eq!(mp.full.order().unwrap(), 24 * 24 * 2);
        mp.full.check_automorphisms(&mp.geometry).unwrap();
    }
}
