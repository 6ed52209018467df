//! Simple undirected graphs, used as the second factor of blow-ups.

use std::collections::BTreeSet;

use crate::error::{GeoError, Result};
use crate::geometry::Pregeometry;
use crate::perm::PermGroup;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimpleGraph {
    names: Vec<String>,
    adjacency: Vec<BTreeSet<usize>>,
}

impl SimpleGraph {
    pub fn new(names: Vec<String>, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let n = names.len();
        let mut adjacency = vec![BTreeSet::new(); n];
        for (a, b) in edges {
            if a >= n || b >= n {
                return Err(GeoError::InvalidParameter(format!("edge ({a}, {b}) out of range")));
            }
            if a == b {
                return Err(GeoError::InvalidParameter(format!("loop at vertex {a}")));
            }
            adjacency[a].insert(b);
            adjacency[b].insert(a);
        }
        Ok(SimpleGraph { names, adjacency })
    }

    fn numbered(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        SimpleGraph::new((0..n).map(|i| format!("v{i}")).collect(), edges).expect("generated edges are in range")
    }

    pub fn complete(n: usize) -> Self {
        Self::numbered(n, (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))))
    }

    /// The path with `n` vertices.
    pub fn path(n: usize) -> Self {
        Self::numbered(n, (1..n).map(|i| (i - 1, i)))
    }

    pub fn cycle(n: usize) -> Self {
        Self::numbered(n, (0..n).map(|i| (i, (i + 1) % n)))
    }

    /// `k` disjoint edges.
    pub fn matching(k: usize) -> Self {
        Self::numbered(2 * k, (0..k).map(|i| (2 * i, 2 * i + 1)))
    }

    /// `k<n>` complete, `p<n>` path, `c<n>` cycle, `<k>k2` matching.
    pub fn named(name: &str) -> Option<Self> {
        let num = |s: &str| s.parse::<usize>().ok().filter(|&n| n > 0);
        if let Some(k) = name.strip_suffix("k2").and_then(num) {
            return Some(Self::matching(k));
        }
        let (kind, rest) = name.split_at(name.char_indices().nth(1)?.0);
        let n = num(rest)?;
        match kind {
            "k" => Some(Self::complete(n)),
            "p" => Some(Self::path(n)),
            "c" if n >= 3 => Some(Self::cycle(n)),
            _ => None,
        }
    }

    pub fn num_vertices(&self) -> usize {
        self.names.len()
    }

    pub fn name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn vertex_by_name(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.adjacency[a].contains(&b)
    }

    pub fn neighbours(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adjacency[v].iter().copied()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.num_vertices()).flat_map(move |a| self.neighbours(a).filter(move |&b| a < b).map(move |b| (a, b)))
    }

    pub fn is_connected(&self) -> bool {
        let n = self.num_vertices();
        if n == 0 {
            return false;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for w in self.neighbours(v) {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub fn is_bipartite(&self) -> bool {
        let n = self.num_vertices();
        let mut colour: Vec<Option<bool>> = vec![None; n];
        for start in 0..n {
            if colour[start].is_some() {
                continue;
            }
            colour[start] = Some(false);
            let mut stack = vec![start];
            while let Some(v) = stack.pop() {
                let c = colour[v].unwrap();
                for w in self.neighbours(v) {
                    match colour[w] {
                        None => {
                            colour[w] = Some(!c);
                            stack.push(w);
                        }
                        Some(d) if d == c => return false,
                        Some(_) => {}
                    }
                }
            }
        }
        true
    }

    /// The incidence graph of a pregeometry, with element names.
    pub fn incidence_graph(geom: &Pregeometry) -> Self {
        let names = geom.elements().map(|e| geom.name(e).to_string()).collect();
        SimpleGraph::new(names, geom.incidences().map(|(a, b)| (a.0, b.0))).expect("incidences are between elements")
    }

    /// Whether `group`, acting on the vertices, is transitive on ordered
    /// cliques of `size` vertices. With no such cliques this holds vacuously.
    pub fn transitive_on_ordered_cliques(&self, group: &PermGroup, size: usize) -> Result<bool> {
        let all = self.ordered_cliques(size);
        let Some(first) = all.first() else {
            return Ok(true);
        };
        let orbit: BTreeSet<Vec<usize>> = group
            .elements()?
            .iter()
            .map(|g| first.iter().map(|&v| g.apply(v)).collect())
            .collect();
        Ok(orbit.len() == all.len())
    }

    /// Every vertex has exactly one neighbour.
    pub fn is_matching(&self) -> bool {
        (0..self.num_vertices()).all(|v| self.degree(v) == 1)
    }

    /// All cliques with exactly `size` vertices, as sorted vertex lists.
    pub fn cliques(&self, size: usize) -> Vec<Vec<usize>> {
        fn grow(g: &SimpleGraph, size: usize, from: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if cur.len() == size {
                out.push(cur.clone());
                return;
            }
            for v in from..g.num_vertices() {
                if cur.iter().all(|&u| g.adjacent(u, v)) {
                    cur.push(v);
                    grow(g, size, v + 1, cur, out);
                    cur.pop();
                }
            }
        }
        let mut out = Vec::new();
        grow(self, size, 0, &mut Vec::new(), &mut out);
        out
    }

    /// Cliques of `size` vertices listed in every order.
    pub fn ordered_cliques(&self, size: usize) -> Vec<Vec<usize>> {
        fn permute(rest: &mut Vec<usize>, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if rest.is_empty() {
                out.push(cur.clone());
                return;
            }
            for k in 0..rest.len() {
                let v = rest.remove(k);
                cur.push(v);
                permute(rest, cur, out);
                cur.pop();
                rest.insert(k, v);
            }
        }
        let mut out = Vec::new();
        for mut c in self.cliques(size) {
            permute(&mut c, &mut Vec::new(), &mut out);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_families() {
        assert_eq!(SimpleGraph::complete(3).edges().count(), 3);
        assert!(SimpleGraph::path(3).is_bipartite());
        assert!(!SimpleGraph::cycle(5).is_bipartite());
        assert!(SimpleGraph::matching(2).is_matching());
        assert!(!SimpleGraph::matching(2).is_connected());
        assert!(SimpleGraph::complete(2).is_matching());
    }

    #[test]
    fn clique_counts() {
        let k4 = SimpleGraph::complete(4);
        assert_eq!(k4.cliques(3).len(), 4);
        assert_eq!(k4.ordered_cliques(3).len(), 24);
        assert_eq!(SimpleGraph::cycle(5).cliques(3).len(), 0);
        assert_eq!(SimpleGraph::cycle(5).cliques(0), vec![Vec::<usize>::new()]);
    }

    #[test]
    fn loops_are_rejected() {
        assert!(SimpleGraph::new(vec!["a".into()], [(0, 0)]).is_err());
    }
}
