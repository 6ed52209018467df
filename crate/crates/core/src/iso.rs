//! Isomorphism and automorphism search by backtracking.
//!
//! Both pregeometries and plain graphs are reduced to a coloured graph
//! (colour = type). Elements are matched in breadth-first order so that
//! almost every candidate is constrained by an already-mapped neighbour,
//! and candidates are filtered by a colour/degree invariant.

use crate::error::{GeoError, Result};
use crate::geometry::{ElementId, Pregeometry};
use crate::graph::SimpleGraph;
use crate::perm::{PermGroup, Permutation};

type Invariant = (usize, usize, Vec<(usize, usize)>);

struct Coloured {
    colours: Vec<usize>,
    neighbours: Vec<Vec<usize>>,
    adjacency: Vec<bool>,
}

impl Coloured {
    fn from_geometry(g: &Pregeometry) -> Self {
        let n = g.num_elements();
        Coloured {
            colours: g.elements().map(|e| g.type_of(e).0).collect(),
            neighbours: g
                .elements()
                .map(|e| g.neighbours(e).iter().map(|x| x.0).collect())
                .collect(),
            adjacency: (0..n * n)
                .map(|k| k / n != k % n && g.incident(ElementId(k / n), ElementId(k % n)))
                .collect(),
        }
    }

    fn from_graph(g: &SimpleGraph) -> Self {
        let n = g.num_vertices();
        Coloured {
            colours: vec![0; n],
            neighbours: (0..n).map(|v| g.neighbours(v).collect()).collect(),
            adjacency: (0..n * n).map(|k| g.adjacent(k / n, k % n)).collect(),
        }
    }

    fn len(&self) -> usize {
        self.colours.len()
    }

    fn adjacent(&self, a: usize, b: usize) -> bool {
        self.adjacency[a * self.len() + b]
    }

    /// Colour, degree and the sorted multiset of neighbour (colour, degree).
    fn invariants(&self) -> Vec<Invariant> {
        (0..self.len())
            .map(|x| {
                let mut around: Vec<(usize, usize)> = self.neighbours[x]
                    .iter()
                    .map(|&y| (self.colours[y], self.neighbours[y].len()))
                    .collect();
                around.sort_unstable();
                (self.colours[x], self.neighbours[x].len(), around)
            })
            .collect()
    }

    /// Breadth-first order, each component started at a vertex of
    /// maximum degree.
    fn search_order(&self) -> Vec<usize> {
        let n = self.len();
        let mut seen = vec![false; n];
        let mut order = Vec::with_capacity(n);
        let mut starts: Vec<usize> = (0..n).collect();
        starts.sort_by_key(|&x| (std::cmp::Reverse(self.neighbours[x].len()), x));
        for s in starts {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let first = order.len();
            order.push(s);
            let mut i = first;
            while i < order.len() {
                let x = order[i];
                i += 1;
                for &y in &self.neighbours[x] {
                    if !seen[y] {
                        seen[y] = true;
                        order.push(y);
                    }
                }
            }
        }
        order
    }
}

struct Search<'a> {
    a: &'a Coloured,
    b: &'a Coloured,
    order: Vec<usize>,
    /// For each position, an earlier-mapped neighbour in `a`, if any.
    anchor: Vec<Option<usize>>,
    compatible: Vec<Vec<bool>>,
    map: Vec<usize>,
    used: Vec<bool>,
}

impl<'a> Search<'a> {
    fn new(a: &'a Coloured, b: &'a Coloured) -> Option<Self> {
        if a.len() != b.len() {
            return None;
        }
        let (ia, ib) = (a.invariants(), b.invariants());
        let mut sa = ia.clone();
        let mut sb = ib.clone();
        sa.sort();
        sb.sort();
        if sa != sb {
            return None;
        }
        let compatible = ia.iter().map(|x| ib.iter().map(|y| x == y).collect()).collect();
        let order = a.search_order();
        let mut position = vec![0; a.len()];
        for (k, &x) in order.iter().enumerate() {
            position[x] = k;
        }
        let anchor = order
            .iter()
            .enumerate()
            .map(|(k, &x)| {
                a.neighbours[x]
                    .iter()
                    .copied()
                    .filter(|&y| position[y] < k)
                    .min_by_key(|&y| position[y])
            })
            .collect();
        Some(Search {
            a,
            b,
            order,
            anchor,
            compatible,
            map: vec![usize::MAX; a.len()],
            used: vec![false; a.len()],
        })
    }

    fn consistent(&self, depth: usize, x: usize, y: usize) -> bool {
        self.order[..depth].iter().all(|&p| {
            let q = self.map[p];
            self.a.adjacent(x, p) == self.b.adjacent(y, q)
        })
    }

    /// Visits every isomorphism; the callback returns `false` to stop.
    fn run(&mut self, depth: usize, visit: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        if depth == self.order.len() {
            return visit(&self.map);
        }
        let x = self.order[depth];
        let candidates: Vec<usize> = match self.anchor[depth] {
            Some(p) => self.b.neighbours[self.map[p]].clone(),
            None => (0..self.b.len()).collect(),
        };
        for y in candidates {
            if self.used[y] || !self.compatible[x][y] || !self.consistent(depth, x, y) {
                continue;
            }
            self.map[x] = y;
            self.used[y] = true;
            let go_on = self.run(depth + 1, visit);
            self.used[y] = false;
            self.map[x] = usize::MAX;
            if !go_on {
                return false;
            }
        }
        true
    }
}

fn first_map(a: &Coloured, b: &Coloured) -> Option<Vec<usize>> {
    let mut search = Search::new(a, b)?;
    let mut found = None;
    search.run(0, &mut |m| {
        found = Some(m.to_vec());
        false
    });
    found
}

fn all_maps(c: &Coloured, degree: usize, cap: usize) -> Result<PermGroup> {
    let mut search = Search::new(c, c).expect("a structure matches itself");
    let mut elements = Vec::new();
    let mut overflow = false;
    search.run(0, &mut |m| {
        if elements.len() >= cap {
            overflow = true;
            return false;
        }
        elements.push(Permutation::from_images(m.to_vec()).expect("search yields bijections"));
        true
    });
    if overflow {
        return Err(GeoError::GroupOrderExceeded { cap });
    }
    Ok(PermGroup::from_elements(degree, elements, cap))
}

/// A type-preserving incidence isomorphism `a → b` (as the image of each
/// element of `a`), if one exists. Types are matched by index.
pub fn isomorphism(a: &Pregeometry, b: &Pregeometry) -> Option<Vec<ElementId>> {
    if a.rank() != b.rank()
        || a.type_ids()
            .any(|t| a.elements_of_type(t).len() != b.elements_of_type(t).len())
    {
        return None;
    }
    first_map(&Coloured::from_geometry(a), &Coloured::from_geometry(b)).map(|m| m.into_iter().map(ElementId).collect())
}

pub fn isomorphic(a: &Pregeometry, b: &Pregeometry) -> bool {
    isomorphism(a, b).is_some()
}

/// The full group of type-preserving automorphisms. Every automorphism is
/// enumerated, so `cap` bounds the work as well as the order.
pub fn automorphism_group(geom: &Pregeometry, cap: usize) -> Result<PermGroup> {
    all_maps(&Coloured::from_geometry(geom), geom.num_elements(), cap)
}

pub fn graph_isomorphism(a: &SimpleGraph, b: &SimpleGraph) -> Option<Vec<usize>> {
    first_map(&Coloured::from_graph(a), &Coloured::from_graph(b))
}

pub fn graph_automorphism_group(g: &SimpleGraph, cap: usize) -> Result<PermGroup> {
    all_maps(&Coloured::from_graph(g), g.num_vertices(), cap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{PregeometryBuilder, TypeId};
    use crate::perm::is_automorphism;

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

    /// Counts automorphisms by trying every type-preserving bijection.
    fn brute_force_aut_order(g: &Pregeometry) -> usize {
        fn extend(g: &Pregeometry, k: usize, map: &mut Vec<usize>, used: &mut Vec<bool>) -> usize {
            let n = g.num_elements();
            if k == n {
                let p = Permutation::from_images(map.clone()).unwrap();
                return usize::from(is_automorphism(g, &p));
            }
            let mut total = 0;
            for y in 0..n {
                if !used[y] && g.type_of(ElementId(y)) == g.type_of(ElementId(k)) {
                    used[y] = true;
                    map.push(y);
                    total += extend(g, k + 1, map, used);
                    map.pop();
                    used[y] = false;
                }
            }
            total
        }
        extend(g, 0, &mut Vec::new(), &mut vec![false; g.num_elements()])
    }

    #[test]
    fn hexagon_has_two_automorphisms() {
        let g = cycle(6, 3);
        let aut = automorphism_group(&g, 100).unwrap();
        assert_eq!(aut.order().unwrap(), 2);
        assert_eq!(brute_force_aut_order(&g), 2);
    }

    #[test]
    fn k22_has_four_automorphisms() {
        let g = cycle(4, 2);
        assert_eq!(automorphism_group(&g, 100).unwrap().order().unwrap(), 4);
        assert_eq!(brute_force_aut_order(&g), 4);
    }

    #[test]
    fn octagon_matches_brute_force() {
        let g = cycle(8, 2);
        assert_eq!(
            automorphism_group(&g, 100).unwrap().order().unwrap(),
            brute_force_aut_order(&g)
        );
    }

    #[test]
    fn relabelled_copy_is_isomorphic() {
        let g = cycle(6, 3);
        let mut b = PregeometryBuilder::new();
        let ts: Vec<TypeId> = (0..3).map(|i| b.add_type(format!("U{i}"))).collect();
        let order = [3usize, 0, 4, 1, 5, 2];
        let es: Vec<ElementId> = order
            .iter()
            .map(|&i| b.add_element(format!("y{i}"), ts[i % 3]))
            .collect();
        let at = |i: usize| es[order.iter().position(|&o| o == i).unwrap()];
        for i in 0..6 {
            b.incidence(at(i), at((i + 1) % 6));
        }
        let h = b.build().unwrap();
        let map = isomorphism(&g, &h).unwrap();
        for (x, y) in g.incidences() {
            assert!(h.incident(map[x.0], map[y.0]));
        }
    }

    #[test]
    fn six_cycle_is_not_two_triangles() {
        let c6 = SimpleGraph::cycle(6);
        let two_k3 = SimpleGraph::new(
            (0..6).map(|i| i.to_string()).collect(),
            [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)],
        )
        .unwrap();
        assert!(graph_isomorphism(&c6, &two_k3).is_none());
        assert_eq!(graph_automorphism_group(&c6, 100).unwrap().order().unwrap(), 12);
    }

    #[test]
    fn cap_applies_to_automorphisms() {
        let k5 = SimpleGraph::complete(5);
        assert!(graph_automorphism_group(&k5, 119).is_err());
    }

    #[test]
    fn single_chamber_is_rigid() {
        let mut b = PregeometryBuilder::new();
        let es: Vec<ElementId> = (0..4)
            .map(|i| {
                let t = b.add_type(format!("t{i}"));
                b.add_element(format!("e{i}"), t)
            })
            .collect();
        for i in 0..4 {
            for j in i + 1..4 {
                b.incidence(es[i], es[j]);
            }
        }
        let g = b.build().unwrap();
        assert_eq!(automorphism_group(&g, 10).unwrap().order().unwrap(), 1);
    }
}
