//! Line-oriented text formats for geometries, partitions, groups and graphs.
//!
//! Geometry: `type <name>`, `elem <name> <type>`, `inc <a> <b>`.
//! Partition: `block <name> <elem>...`; unlisted elements are singletons.
//! Group: `gen (a b c)(d e)` over element names; an empty file is the
//! trivial group. Graph: `vert <name>`, `edge <a> <b>`.
//! `#` starts a comment everywhere. Names are nonempty and contain no
//! whitespace, parentheses or `#`.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use crate::error::{GeoError, Result};
use crate::geometry::{ElementId, Pregeometry, TypeId};
use crate::graph::SimpleGraph;
use crate::perm::{PermGroup, Permutation};
use crate::quotient::Partition;

pub fn is_valid_name(name: &str) -> bool {
    !name.is_empty() && !name.chars().any(|c| c.is_whitespace() || matches!(c, '(' | ')' | '#'))
}

/// Non-blank lines with comments stripped, numbered from 1.
fn records(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let body = line.split('#').next().unwrap_or("");
        let words: Vec<&str> = body.split_whitespace().collect();
        (!words.is_empty()).then_some((i + 1, words))
    })
}

fn arity(line: usize, words: &[&str], n: usize) -> Result<()> {
    if words.len() != n + 1 {
        return Err(GeoError::parse(
            line,
            format!("`{}` takes {n} argument(s), found {}", words[0], words.len() - 1),
        ));
    }
    Ok(())
}

fn name_check(line: usize, name: &str) -> Result<()> {
    if !is_valid_name(name) {
        return Err(GeoError::parse(line, format!("invalid name `{name}`")));
    }
    Ok(())
}

pub fn serialize_geometry(geom: &Pregeometry) -> String {
    let mut out = String::new();
    for t in geom.type_ids() {
        writeln!(out, "type {}", geom.type_name(t)).unwrap();
    }
    for e in geom.elements() {
        writeln!(out, "elem {} {}", geom.name(e), geom.type_name(geom.type_of(e))).unwrap();
    }
    for (a, b) in geom.incidences() {
        writeln!(out, "inc {} {}", geom.name(a), geom.name(b)).unwrap();
    }
    out
}

/// Parses the geometry format. Incidences between elements of one type are
/// kept so that [`Pregeometry::validate`] can report them.
pub fn parse_geometry(text: &str) -> Result<Pregeometry> {
    let mut types: Vec<String> = Vec::new();
    let mut type_ids: HashMap<String, TypeId> = HashMap::new();
    let mut elements: Vec<(String, TypeId)> = Vec::new();
    let mut element_ids: HashMap<String, ElementId> = HashMap::new();
    let mut incidences = BTreeSet::new();
    let mut seen_any = false;
    for (line, words) in records(text) {
        seen_any = true;
        match words[0] {
            "type" => {
                arity(line, &words, 1)?;
                name_check(line, words[1])?;
                if !elements.is_empty() {
                    return Err(GeoError::parse(line, "types must precede elements"));
                }
                if type_ids.insert(words[1].to_string(), TypeId(types.len())).is_some() {
                    return Err(GeoError::parse(line, format!("duplicate type `{}`", words[1])));
                }
                if types.len() == 64 {
                    return Err(GeoError::parse(line, "at most 64 types are supported"));
                }
                types.push(words[1].to_string());
            }
            "elem" => {
                arity(line, &words, 2)?;
                name_check(line, words[1])?;
                let t = *type_ids
                    .get(words[2])
                    .ok_or_else(|| GeoError::parse(line, format!("unknown type `{}`", words[2])))?;
                if !incidences.is_empty() {
                    return Err(GeoError::parse(line, "elements must precede incidences"));
                }
                if element_ids
                    .insert(words[1].to_string(), ElementId(elements.len()))
                    .is_some()
                {
                    return Err(GeoError::parse(line, format!("duplicate element `{}`", words[1])));
                }
                elements.push((words[1].to_string(), t));
            }
            "inc" => {
                arity(line, &words, 2)?;
                let lookup = |w: &str| {
                    element_ids
                        .get(w)
                        .copied()
                        .ok_or_else(|| GeoError::parse(line, format!("unknown element `{w}`")))
                };
                let (a, b) = (lookup(words[1])?, lookup(words[2])?);
                if a == b {
                    return Err(GeoError::parse(line, "self-incidence is implicit"));
                }
                if !incidences.insert((a.min(b), a.max(b))) {
                    return Err(GeoError::parse(line, "duplicate incidence"));
                }
            }
            other => return Err(GeoError::parse(line, format!("unknown record `{other}`"))),
        }
    }
    if !seen_any {
        return Err(GeoError::parse(1, "empty geometry file"));
    }
    Pregeometry::new(types, elements, incidences)
}

/// Writes the blocks with more than one element, named `b0`, `b1`, ...
pub fn serialize_partition(geom: &Pregeometry, part: &Partition) -> String {
    let mut out = String::new();
    for (k, block) in part.blocks().iter().filter(|b| b.len() > 1).enumerate() {
        let names: Vec<&str> = block.iter().map(|&e| geom.name(e)).collect();
        writeln!(out, "block b{k} {}", names.join(" ")).unwrap();
    }
    out
}

pub fn parse_partition(geom: &Pregeometry, text: &str) -> Result<Partition> {
    let mut blocks: Vec<Vec<ElementId>> = Vec::new();
    let mut used = vec![false; geom.num_elements()];
    let mut block_names = BTreeSet::new();
    for (line, words) in records(text) {
        if words[0] != "block" {
            return Err(GeoError::parse(line, format!("unknown record `{}`", words[0])));
        }
        if words.len() < 3 {
            return Err(GeoError::parse(line, "a block needs a name and at least one element"));
        }
        name_check(line, words[1])?;
        if !block_names.insert(words[1]) {
            return Err(GeoError::parse(line, format!("duplicate block `{}`", words[1])));
        }
        let mut block = Vec::new();
        for w in &words[2..] {
            let e = geom
                .element_by_name(w)
                .ok_or_else(|| GeoError::parse(line, format!("unknown element `{w}`")))?;
            if std::mem::replace(&mut used[e.0], true) {
                return Err(GeoError::parse(line, format!("element `{w}` is already in a block")));
            }
            if let Some(&first) = block.first() {
                if geom.type_of(first) != geom.type_of(e) {
                    return Err(GeoError::NotTypeRefining(format!(
                        "line {line}: `{}` and `{w}` have different types",
                        geom.name(first)
                    )));
                }
            }
            block.push(e);
        }
        blocks.push(block);
    }
    blocks.extend(geom.elements().filter(|e| !used[e.0]).map(|e| vec![e]));
    Partition::new(geom, blocks)
}

fn cycle_notation(perm: &Permutation, name: impl Fn(usize) -> String) -> String {
    perm.cycles()
        .iter()
        .map(|c| format!("({})", c.iter().map(|&x| name(x)).collect::<Vec<_>>().join(" ")))
        .collect()
}

/// One `gen` line per nonidentity generator.
pub fn serialize_group(geom: &Pregeometry, group: &PermGroup) -> String {
    let mut out = String::new();
    for g in group.generators() {
        let cycles = cycle_notation(g, |x| geom.name(ElementId(x)).to_string());
        if !cycles.is_empty() {
            writeln!(out, "gen {cycles}").unwrap();
        }
    }
    out
}

fn parse_cycles(line: usize, rest: &str, lookup: impl Fn(&str) -> Option<usize>) -> Result<Vec<Vec<usize>>> {
    let mut cycles = Vec::new();
    let mut chars = rest.trim();
    while !chars.is_empty() {
        let Some(body) = chars.strip_prefix('(') else {
            return Err(GeoError::parse(line, format!("expected `(` at `{chars}`")));
        };
        let close = body.find(')').ok_or_else(|| GeoError::parse(line, "unclosed cycle"))?;
        let cycle = body[..close]
            .split_whitespace()
            .map(|w| lookup(w).ok_or_else(|| GeoError::parse(line, format!("unknown element `{w}`"))))
            .collect::<Result<Vec<_>>>()?;
        if !cycle.is_empty() {
            cycles.push(cycle);
        }
        chars = body[close + 1..].trim_start();
    }
    Ok(cycles)
}

fn gen_body(line: usize, raw: &str) -> Result<&str> {
    let body = raw.split('#').next().unwrap_or("").trim();
    body.strip_prefix("gen")
        .filter(|r| r.is_empty() || r.starts_with(char::is_whitespace) || r.starts_with('('))
        .ok_or_else(|| GeoError::parse(line, format!("unknown record `{body}`")))
}

/// Parses generators and checks that each is an automorphism of `geom`.
pub fn parse_group(geom: &Pregeometry, text: &str, cap: usize) -> Result<PermGroup> {
    let n = geom.num_elements();
    let mut gens = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        if raw.split('#').next().unwrap_or("").trim().is_empty() {
            continue;
        }
        let cycles = parse_cycles(line, gen_body(line, raw)?, |w| geom.element_by_name(w).map(|e| e.0))?;
        let perm = Permutation::from_cycles(n, &cycles)
            .map_err(|e| GeoError::parse(line, format!("not a permutation: {e}")))?;
        gens.push(perm);
    }
    let group = PermGroup::new(n, gens, cap)?;
    group.check_automorphisms(geom)?;
    Ok(group)
}

pub fn serialize_graph(graph: &SimpleGraph) -> String {
    let mut out = String::new();
    for v in 0..graph.num_vertices() {
        writeln!(out, "vert {}", graph.name(v)).unwrap();
    }
    for (a, b) in graph.edges() {
        writeln!(out, "edge {} {}", graph.name(a), graph.name(b)).unwrap();
    }
    out
}

pub fn parse_graph(text: &str) -> Result<SimpleGraph> {
    let mut names: Vec<String> = Vec::new();
    let mut ids: HashMap<String, usize> = HashMap::new();
    let mut edges = BTreeSet::new();
    for (line, words) in records(text) {
        match words[0] {
            "vert" => {
                arity(line, &words, 1)?;
                name_check(line, words[1])?;
                if !edges.is_empty() {
                    return Err(GeoError::parse(line, "vertices must precede edges"));
                }
                if ids.insert(words[1].to_string(), names.len()).is_some() {
                    return Err(GeoError::parse(line, format!("duplicate vertex `{}`", words[1])));
                }
                names.push(words[1].to_string());
            }
            "edge" => {
                arity(line, &words, 2)?;
                let lookup = |w: &str| {
                    ids.get(w)
                        .copied()
                        .ok_or_else(|| GeoError::parse(line, format!("unknown vertex `{w}`")))
                };
                let (a, b) = (lookup(words[1])?, lookup(words[2])?);
                if a == b {
                    return Err(GeoError::parse(line, "loops are not allowed"));
                }
                if !edges.insert((a.min(b), a.max(b))) {
                    return Err(GeoError::parse(line, "duplicate edge"));
                }
            }
            other => return Err(GeoError::parse(line, format!("unknown record `{other}`"))),
        }
    }
    if names.is_empty() {
        return Err(GeoError::parse(1, "empty graph file"));
    }
    SimpleGraph::new(names, edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{grid_complement, hexagon, ssg};

    #[test]
    fn geometry_round_trip() {
        let g = ssg(4, 2).unwrap();
        let text = serialize_geometry(&g);
        let back = parse_geometry(&text).unwrap();
        assert_eq!(back, g);
        assert_eq!(serialize_geometry(&back), text);
    }

    #[test]
    fn parse_errors_carry_lines() {
        assert!(matches!(parse_geometry(""), Err(GeoError::Parse { line: 1, .. })));
        assert!(matches!(parse_geometry("# only\n\n"), Err(GeoError::Parse { .. })));
        let bad = "type a\nelem x a\ninc x y\n";
        assert!(matches!(parse_geometry(bad), Err(GeoError::Parse { line: 3, .. })));
        assert!(matches!(
            parse_geometry("type a\nelem x b\n"),
            Err(GeoError::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_geometry("node a\n"),
            Err(GeoError::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn same_type_incidence_is_kept_for_diagnosis() {
        let g = parse_geometry("type a\nelem x a\nelem y a\ninc x y\n").unwrap();
        assert!(g.validate().is_err());
    }

    #[test]
    fn partition_round_trip() {
        let (g, part) = grid_complement();
        let text = serialize_partition(&g, &part);
        assert_eq!(text.lines().count(), 3);
        let back = parse_partition(&g, &text).unwrap();
        assert_eq!(back.blocks(), part.blocks());
        assert_eq!(serialize_partition(&g, &back), text);
        assert!(parse_partition(&g, "block b 1.1 2.1\n").is_err());
    }

    #[test]
    fn group_round_trip() {
        let (g, a) = hexagon();
        let text = serialize_group(&g, &a);
        assert_eq!(text, "gen (x0 x3)(x1 x4)(x2 x5)\n");
        let back = parse_group(&g, &text, 100).unwrap();
        assert_eq!(back.order().unwrap(), 2);
        assert_eq!(parse_group(&g, "", 100).unwrap().order().unwrap(), 1);
        assert!(parse_group(&g, "gen (x0 x1)\n", 100).is_err());
        assert!(matches!(
            parse_group(&g, "\ngen (x0 zz)\n", 100),
            Err(GeoError::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn graph_round_trip() {
        let c = SimpleGraph::cycle(5);
        let text = serialize_graph(&c);
        assert_eq!(serialize_graph(&parse_graph(&text).unwrap()), text);
        assert!(parse_graph("").is_err());
    }
}
