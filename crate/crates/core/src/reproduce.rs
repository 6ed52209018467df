//! The example scenarios behind `geoq reproduce`: each builds an example,
//! runs the deciders, and compares against the expected values.

use std::path::{Path, PathBuf};

use crate::constructions::{
    affine_geometry, blowup, catalogue, eight_cycle, fano_plane, grid_complement, hexagon, multipartite, ssg,
    ssg_symmetric_group, tq1_counterexample, CATALOGUE,
};
use crate::coset::{coseteg_family, five_product_conditions, FiniteGroup};
use crate::diagram::basic_diagram;
use crate::error::{GeoError, Result};
use crate::format::{serialize_geometry, serialize_group, serialize_partition};
use crate::geometry::{Flag, Pregeometry, TypeId, TypeSet};
use crate::graph::SimpleGraph;
use crate::iso::{graph_automorphism_group, graph_isomorphism, isomorphic};
use crate::perm::{chamber_orbit_count, is_flag_transitive, DEFAULT_GROUP_CAP};
use crate::quotient::{Partition, Projection};
use crate::report::Report;
use crate::shadow::shadowable_lift;
use crate::suites::{DEFAULT_INSTANCES, SUITES};
use crate::tits::{OrbitQuotient, Tq1Defect};

#[derive(Clone, Debug)]
pub struct Config {
    pub golden_dir: PathBuf,
    pub instances: usize,
    pub cap: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            golden_dir: default_golden_dir(),
            instances: DEFAULT_INSTANCES,
            cap: DEFAULT_GROUP_CAP,
        }
    }
}

pub fn default_golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("golden")
}

pub struct Scenario {
    pub name: &'static str,
    pub title: &'static str,
    run: fn(&Config) -> Result<Report>,
}

pub static SCENARIOS: &[Scenario] = &[
    Scenario {
        name: "hexagon",
        title: "antipodal quotient of the hexagon",
        run: hexagon_scenario,
    },
    Scenario {
        name: "coseteg",
        title: "coset geometry of A^3 for A = Z2, Z3",
        run: coseteg_scenario,
    },
    Scenario {
        name: "affine",
        title: "translation quotient of AG(3,2)",
        run: affine_scenario,
    },
    Scenario {
        name: "notfirm",
        title: "multipartite geometry with a non-firm normal quotient",
        run: notfirm_scenario,
    },
    Scenario {
        name: "grid",
        title: "complement of the 3x3 grid",
        run: grid_scenario,
    },
    Scenario {
        name: "eight-cycle",
        title: "8-cycle and its quotient K_{2,2}",
        run: eight_cycle_scenario,
    },
    Scenario {
        name: "lemmas",
        title: "randomized lemma suites",
        run: lemma_scenario,
    },
    Scenario {
        name: "blowup",
        title: "blow-ups of subset geometries by small graphs",
        run: blowup_scenario,
    },
    Scenario {
        name: "liftshadowable",
        title: "lift of ssg(3,2) with n=3, j=2",
        run: lift_scenario,
    },
    Scenario {
        name: "tq1",
        title: "TQ1 fails while the projection is residually surjective",
        run: tq1_scenario,
    },
    Scenario {
        name: "golden",
        title: "catalogue files match the golden copies",
        run: golden_scenario,
    },
];

pub struct Outcome {
    pub name: &'static str,
    pub title: &'static str,
    pub report: Report,
}

impl Outcome {
    pub fn passed(&self) -> bool {
        self.report.all_ok()
    }
}

/// Runs the named scenarios, or all of them when `names` is empty.
pub fn run(names: &[String], cfg: &Config) -> Result<Vec<Outcome>> {
    for n in names {
        if !SCENARIOS.iter().any(|s| s.name == n) {
            let known: Vec<&str> = SCENARIOS.iter().map(|s| s.name).collect();
            return Err(GeoError::InvalidParameter(format!(
                "unknown scenario `{n}`; known: {}",
                known.join(", ")
            )));
        }
    }
    Ok(SCENARIOS
        .iter()
        .filter(|s| names.is_empty() || names.iter().any(|n| n == s.name))
        .map(|s| {
            let report = (s.run)(cfg).unwrap_or_else(|e| {
                let mut r = Report::new();
                r.fail("error", e);
                r
            });
            Outcome {
                name: s.name,
                title: s.title,
                report,
            }
        })
        .collect())
}

/// One `PASS name` or `FAIL name` line per outcome, with failing entries
/// listed below their scenario.
pub fn summary(outcomes: &[Outcome]) -> String {
    let mut out = String::new();
    for o in outcomes {
        out.push_str(&format!(
            "{} {:<15} {}\n",
            if o.passed() { "PASS" } else { "FAIL" },
            o.name,
            o.title
        ));
        for e in o.report.entries().iter().filter(|e| !e.ok) {
            out.push_str(&format!("     {} = {}", e.key, e.value));
            if let Some(w) = &e.witness {
                out.push_str(&format!(" ({w})"));
            }
            out.push('\n');
        }
    }
    out
}

fn type_set_names(geom: &Pregeometry, types: TypeSet) -> String {
    let names: Vec<&str> = types.iter().map(|t| geom.type_name(t)).collect();
    format!("{{{}}}", names.join(","))
}

fn types(ids: &[usize]) -> TypeSet {
    ids.iter().map(|&i| TypeId(i)).collect()
}

fn hexagon_scenario(_: &Config) -> Result<Report> {
    let mut r = Report::new();
    let (g, a) = hexagon();
    let p = Projection::orbit_quotient(&g, &a)?;
    r.expect(
        "min_block_distance",
        p.min_block_distance().to_string(),
        "3".to_string(),
    );
    r.expect("is_cover", p.is_cover().holds(), false);
    let triangle = graph_isomorphism(&SimpleGraph::incidence_graph(p.quotient()), &SimpleGraph::cycle(3));
    r.expect("quotient_is_triangle", triangle.is_some(), true);
    let fl = p.check_flagslift();
    r.expect("flagslift", fl.holds(), false);
    r.expect("flagslift_witness_rank", fl.witness().map_or(0, Flag::rank), 3);
    r.expect("flag_transitive_source", is_flag_transitive(&a, &g)?, true);
    let induced = p.induced_group(&a)?;
    r.expect(
        "flag_transitive_quotient",
        is_flag_transitive(&induced, p.quotient())?,
        true,
    );
    Ok(r)
}

fn coseteg_one(n: usize, cap: usize) -> Result<Report> {
    let mut r = Report::new();
    let ex = coseteg_family(&FiniteGroup::cyclic(n)?, cap)?;
    let g = &ex.coset.geometry;
    r.expect("geometry", g.is_geometry().holds(), true);
    let conditions = five_product_conditions(&ex.group, &ex.subgroups)?;
    r.expect("product_conditions", conditions.iter().filter(|&&c| c).count(), 5);
    r.expect("chamber_orbits", chamber_orbit_count(&ex.coset.action, g), 1);
    let disconnected = (0..4)
        .flat_map(|i| (i + 1..4).map(move |j| (i, j)))
        .filter(|&(i, j)| {
            g.truncation(types(&[i, j]))
                .map(|t| !t.geometry.is_connected())
                .unwrap_or(false)
        })
        .count();
    r.expect("disconnected_rank2_truncations", disconnected, 6);
    let pn = Projection::orbit_quotient(g, &ex.normal)?;
    let v = pn.quotient().is_geometry();
    r.expect("normal_quotient_geometry", v.holds(), false);
    let witness_type = v
        .witness()
        .map(|f| type_set_names(pn.quotient(), pn.quotient().flag_type(f)))
        .unwrap_or_default();
    r.expect("normal_quotient_witness_type", witness_type, "{1,2,3}".to_string());
    let sigma = ex.sigma(cap)?;
    let ps = Projection::orbit_quotient(&sigma.geometry, &ex.sigma_normal(&sigma, cap)?)?;
    r.expect("sigma_quotient_geometry", ps.quotient().is_geometry().holds(), true);
    r.expect("sigma_flagslift", ps.check_flagslift().holds(), false);
    r.expect(
        "sigma_flag_transitive",
        is_flag_transitive(&sigma.action, &sigma.geometry)?,
        true,
    );
    let induced = ps.induced_group(&sigma.action)?;
    r.expect(
        "sigma_quotient_flag_transitive",
        is_flag_transitive(&induced, ps.quotient())?,
        false,
    );
    Ok(r)
}

fn coseteg_scenario(cfg: &Config) -> Result<Report> {
    let mut r = Report::new();
    for n in [2, 3] {
        r.absorb(&format!("z{n}"), coseteg_one(n, cfg.cap)?);
    }
    Ok(r)
}

fn per_type<T: ToString>(geom: &Pregeometry, f: impl Fn(TypeId) -> T) -> String {
    geom.type_ids().map(|t| f(t).to_string()).collect::<Vec<_>>().join(",")
}

fn affine_scenario(_: &Config) -> Result<Report> {
    let mut r = Report::new();
    let af = affine_geometry(3, 2)?;
    let g = &af.geometry;
    r.expect(
        "element_counts",
        per_type(g, |t| g.elements_of_type(t).len()),
        "8,28,14".into(),
    );
    let orbits = Partition::from_orbits(g, &af.translations)?;
    let blocks_of = |t: TypeId| {
        orbits
            .blocks()
            .iter()
            .filter(|b| g.type_of(b[0]) == t)
            .collect::<Vec<_>>()
    };
    r.expect("orbit_counts", per_type(g, |t| blocks_of(t).len()), "1,7,7".into());
    let lengths = per_type(g, |t| {
        let mut ls: Vec<usize> = blocks_of(t).iter().map(|b| b.len()).collect();
        ls.dedup();
        ls.iter().map(|l| l.to_string()).collect::<Vec<_>>().join("/")
    });
    r.expect("orbit_lengths", lengths, "8,4,2".into());
    let p = Projection::orbit_quotient(g, &af.translations)?;
    let q = p.quotient();
    let rest = q.truncation(types(&[1, 2]))?;
    r.expect(
        "quotient_without_points_is_fano",
        isomorphic(&rest.geometry, &fano_plane()),
        true,
    );
    let x0 = q.elements_of_type(TypeId(0));
    let universal = x0.len() == 1 && q.elements().filter(|&e| e != x0[0]).all(|e| q.incident(e, x0[0]));
    r.expect("point_block_incident_with_all", universal, true);
    r.expect("is_cover", p.is_cover().holds(), false);
    let order = [TypeId(0), TypeId(1), TypeId(2)];
    r.expect("total_order_flagslift", p.total_order_flagslift(&order)?.holds(), true);
    r.expect("quotient_geometry", q.is_geometry().holds(), true);
    Ok(r)
}

/// Distinct chamber counts over the flags of the given cotype.
fn chambers_through_cotype(geom: &Pregeometry, cotype: TypeId) -> Result<String> {
    let mut counts: Vec<usize> = geom
        .flags_of_type(geom.all_types().without(cotype))?
        .iter()
        .map(|f| geom.chambers_through(f).len())
        .collect();
    counts.sort_unstable();
    counts.dedup();
    Ok(counts.iter().map(|c| c.to_string()).collect::<Vec<_>>().join("/"))
}

fn notfirm_scenario(_: &Config) -> Result<Report> {
    let mut r = Report::new();
    let mp = multipartite(2, 4, 2)?;
    let g = &mp.geometry;
    let (v, e, k) = (TypeId(0), TypeId(1), TypeId(2));
    r.expect(
        "chambers_through.vertex_edge",
        chambers_through_cotype(g, k)?,
        "9".into(),
    );
    r.expect("chambers_through.edge_k", chambers_through_cotype(g, v)?, "2".into());
    r.expect("chambers_through.vertex_k", chambers_through_cotype(g, e)?, "2".into());
    r.expect("geometry", g.is_geometry().holds(), true);
    r.expect("firm", g.is_firm()?.holds(), true);
    let components =
        |geom: &Pregeometry| -> Result<usize> { Ok(geom.truncation(types(&[1, 2]))?.geometry.components().len()) };
    r.expect("edge_k_components.m2", components(g)?, 1);
    r.expect("edge_k_components.m3", components(&multipartite(3, 4, 2)?.geometry)?, 3);
    let p = Projection::orbit_quotient(g, &mp.normal)?;
    let q = p.quotient();
    r.expect("quotient_geometry", q.is_geometry().holds(), true);
    r.expect("quotient_firm", q.is_firm()?.holds(), false);
    r.expect(
        "quotient_chambers_through.vertex_edge",
        chambers_through_cotype(q, k)?,
        "1".into(),
    );
    r.expect(
        "quotient_chambers_through.edge_k",
        chambers_through_cotype(q, v)?,
        "2".into(),
    );
    r.expect(
        "quotient_chambers_through.vertex_k",
        chambers_through_cotype(q, e)?,
        "1".into(),
    );
    Ok(r)
}

fn grid_scenario(_: &Config) -> Result<Report> {
    let mut r = Report::new();
    let (g, part) = grid_complement();
    let p = Projection::new(&g, part)?;
    let block = |name: &str| -> Result<_> {
        let e = g
            .element_by_name(name)
            .ok_or_else(|| GeoError::UnknownElement(name.into()))?;
        Ok(p.project(e))
    };
    let flag = Flag::new(vec![block("1.1")?, block("2.3")?]);
    r.expect("is_flag", p.quotient().is_flag(&flag), true);
    r.expect("same_block_1.1_1.2", block("1.1")? == block("1.2")?, true);
    let chambers = p.quotient().chambers_through(&flag);
    r.expect("chambers_through_flag", chambers.len(), 1);
    let b31 = block("3.1")?;
    let third = chambers.first().is_some_and(|c| c.contains(b31));
    r.expect("chamber_contains_3.1", third, true);
    Ok(r)
}

fn eight_cycle_scenario(_: &Config) -> Result<Report> {
    let mut r = Report::new();
    let (g, a) = eight_cycle();
    r.expect("firm", g.is_firm()?.holds(), true);
    r.expect("residually_connected", g.is_residually_connected().holds(), true);
    r.expect("diagram_edges", basic_diagram(&g)?.edges().len(), 1);
    let p = Projection::orbit_quotient(&g, &a)?;
    let k22 = graph_isomorphism(&SimpleGraph::incidence_graph(p.quotient()), &SimpleGraph::cycle(4));
    r.expect("quotient_is_k22", k22.is_some(), true);
    r.expect("quotient_diagram_edges", basic_diagram(p.quotient())?.edges().len(), 0);
    Ok(r)
}

fn lemma_scenario(cfg: &Config) -> Result<Report> {
    let mut r = Report::new();
    for s in SUITES {
        let out = s.run(cfg.instances);
        r.flag(s.name, out.passed()).witness = out
            .violation
            .clone()
            .or_else(|| (out.nonvacuous == 0).then(|| "no instance met the hypotheses".to_string()));
        r.value(format!("{}.instances", s.name), out.instances);
        r.value(format!("{}.nonvacuous", s.name), out.nonvacuous);
    }
    Ok(r)
}

/// Every corank-1 flag lies in at least two chambers. Unlike
/// [`Pregeometry::is_firm`] this does not require a geometry.
pub fn firm_pregeometry(geom: &Pregeometry) -> bool {
    let rank = geom.rank();
    geom.flags()
        .iter()
        .filter(|f| f.rank() + 1 == rank)
        .all(|f| geom.chambers_through(f).len() >= 2)
}

pub fn blowup_graphs() -> Vec<(&'static str, SimpleGraph)> {
    ["k2", "k3", "p3", "2k2", "c5"]
        .into_iter()
        .map(|n| (n, SimpleGraph::named(n).expect("known graph name")))
        .collect()
}

fn blowup_one(v: usize, k: usize, delta: &SimpleGraph, cap: usize) -> Result<Report> {
    let mut r = Report::new();
    let gamma = ssg(v, k)?;
    let n = gamma.rank();
    let b = blowup(&gamma, delta)?;
    let g = &b.geometry;

    let connected = g.is_connected();
    let premise = gamma.is_connected() && delta.is_connected() && !delta.is_bipartite();
    r.value("connected", connected);
    r.flag("part1", !premise || connected);

    let proj = Projection::new(g, b.fibres.clone())?;
    let cover = proj.is_cover();
    r.value("graph_cover", proj.is_graph_cover().holds());
    let part2 = r.expect("part2", cover.holds(), delta.is_matching());
    if let Some(w) = cover.witness() {
        part2.witness = Some(format!(
            "{}; {}",
            part2.witness.take().unwrap_or_else(|| "not a cover".into()),
            w.describe(&proj)
        ));
    }

    let in_big_clique = |c: &Vec<usize>| {
        delta
            .cliques(n)
            .iter()
            .filter(|big| c.iter().all(|x| big.contains(x)))
            .count()
    };
    let predicted_geometry = (1..=n).all(|s| delta.cliques(s).iter().all(|c| in_big_clique(c) >= 1));
    r.expect("part3", g.is_geometry().holds(), predicted_geometry);

    let firm_a = firm_pregeometry(&gamma) && !delta.cliques(n).is_empty();
    let firm_b = (1..n).all(|s| delta.cliques(s).iter().all(|c| in_big_clique(c) >= 2));
    r.expect("part4", firm_pregeometry(g), firm_a || firm_b);

    let aut_gamma = ssg_symmetric_group(v, k, cap)?;
    let aut_delta = graph_automorphism_group(delta, cap)?;
    let product = b.product_action(&aut_gamma, &aut_delta)?;
    let mut predicted = is_flag_transitive(&aut_gamma, &gamma)?;
    for s in 1..=n {
        predicted &= delta.transitive_on_ordered_cliques(&aut_delta, s)?;
    }
    r.expect("part5", is_flag_transitive(&product, g)?, predicted);

    if delta.transitive_on_ordered_cliques(&aut_delta, 1)? {
        let fibre = b.fibre_action(&aut_delta)?;
        let q = Projection::orbit_quotient(g, &fibre)?;
        r.expect("fibre_quotient_is_gamma", isomorphic(q.quotient(), &gamma), true);
    }
    Ok(r)
}

fn blowup_scenario(cfg: &Config) -> Result<Report> {
    let mut r = Report::new();
    for (v, k) in [(3, 2), (4, 3)] {
        for (name, delta) in blowup_graphs() {
            r.absorb(&format!("ssg{v}{k}.{name}"), blowup_one(v, k, &delta, cfg.cap)?);
        }
    }
    Ok(r)
}

fn lift_scenario(cfg: &Config) -> Result<Report> {
    let mut r = Report::new();
    let gamma = ssg(3, 2)?;
    let lift = shadowable_lift(&gamma, 3, 2)?;
    let g = &lift.geometry;
    r.expect("elements", g.num_elements(), 36);
    r.expect("geometry", g.is_geometry().holds(), true);
    let wreath = lift.wreath_action(&ssg_symmetric_group(3, 2, cfg.cap)?)?;
    r.expect("wreath_order", wreath.order()?, 1296);
    r.expect("wreath_flag_transitive", is_flag_transitive(&wreath, g)?, true);
    r.expect("normal_order", lift.normal.order()?, 216);
    let p = Projection::orbit_quotient(g, &lift.normal)?;
    r.expect("quotient_isomorphic_to_gamma", isomorphic(p.quotient(), &gamma), true);
    Ok(r)
}

fn tq1_scenario(_: &Config) -> Result<Report> {
    let mut r = Report::new();
    let (g, a) = tq1_counterexample();
    let oq = OrbitQuotient::new(&g, a)?;
    r.expect("geometry", g.is_geometry().holds(), true);
    r.expect(
        "residually_surjective",
        oq.projection().residual_surjectivity().holds(),
        true,
    );
    r.expect("tq2prime", oq.check_tq2prime()?.holds(), false);
    let tq1 = oq.check_tq1()?;
    r.expect("tq1", tq1.holds(), false);
    r.expect("tq1_witness_rank", tq1.witness().map_or(0, |w| w.flag.rank()), 2);
    let named = |s: &str| g.element_by_name(s).ok_or_else(|| GeoError::UnknownElement(s.into()));
    let f = Flag::new(vec![named("a1")?, named("a2")?]);
    let defect = oq.tq1_defect(&f)?;
    r.expect(
        "tq1_fails_at_a1_a2",
        matches!(defect, Some(Tq1Defect::NotInjective(..))),
        true,
    );
    Ok(r)
}

/// The golden files: for each catalogue entry, its geometry and, where
/// present, its group and partition.
pub fn golden_files() -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for name in CATALOGUE {
        let entry = catalogue(name)?;
        out.push((format!("{name}.geom"), serialize_geometry(&entry.geometry)));
        if let Some(g) = &entry.group {
            out.push((format!("{name}.group"), serialize_group(&entry.geometry, g)));
        }
        if let Some(p) = &entry.partition {
            out.push((format!("{name}.part"), serialize_partition(&entry.geometry, p)));
        }
    }
    Ok(out)
}

fn unified_diff(expected: &str, actual: &str, name: &str) -> String {
    similar::TextDiff::from_lines(expected, actual)
        .unified_diff()
        .header(&format!("golden/{name}"), "generated")
        .to_string()
}

/// Compares every golden file with freshly generated content.
pub fn golden_check(dir: &Path) -> Result<Report> {
    let mut r = Report::new();
    for (name, content) in golden_files()? {
        match std::fs::read_to_string(dir.join(&name)) {
            Ok(on_disk) if on_disk == content => {
                r.flag(name, true);
            }
            Ok(on_disk) => {
                r.flag(name.clone(), false).witness = Some(unified_diff(&on_disk, &content, &name));
            }
            Err(e) => {
                r.fail(name, format!("cannot read {}: {e}", dir.display()));
            }
        }
    }
    Ok(r)
}

fn golden_scenario(cfg: &Config) -> Result<Report> {
    golden_check(&cfg.golden_dir)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_scenarios_are_rejected() {
        assert!(run(&["nope".into()], &Config::default()).is_err());
    }

    #[test]
    fn subset_runs_only_named() {
        let out = run(&["grid".into(), "tq1".into()], &Config::default()).unwrap();
        let names: Vec<&str> = out.iter().map(|o| o.name).collect();
        assert_eq!(names, ["grid", "tq1"]);
        assert!(out.iter().all(Outcome::passed), "{}", summary(&out));
    }
}
