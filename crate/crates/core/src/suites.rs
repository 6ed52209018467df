//! Randomized suites for the quotient lemmas. Each suite draws instances
//! from its own seeded stream, counts how many satisfy the hypotheses, and
//! stops at the first instance that contradicts the conclusion.

use once_cell::sync::Lazy;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::constructions::{
    affine_geometry, blowup, hexagon_geometry, multipartite, rank4_geometry, ssg, ssg_induced, ssg_symmetric_group,
    tq1_counterexample,
};
use crate::coset::is_coset_pregeometry;
use crate::diagram::{basic_diagram, lift_chamber_forest};
use crate::error::Result;
use crate::geometry::{Pregeometry, Verdict};
use crate::graph::SimpleGraph;
use crate::iso::automorphism_group;
use crate::perm::{is_flag_transitive, PermGroup};
use crate::quotient::Projection;
use crate::random::{
    random_coset_instance, random_far_partition, random_geometry, random_partition, random_sparse_permutation,
    random_subgroup, rng_for, voltage_lift,
};
use crate::shadow::{is_shadowable, shadowable_lift};
use crate::tits::OrbitQuotient;

pub const DEFAULT_INSTANCES: usize = 200;
const CAP: usize = 50_000;
const AUT_CAP: usize = 5_000;

/// What one instance showed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Case {
    /// The hypotheses did not hold.
    Vacuous,
    Holds,
    Violated(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteOutcome {
    pub name: &'static str,
    pub instances: usize,
    /// Instances whose hypotheses held.
    pub nonvacuous: usize,
    pub violation: Option<String>,
}

impl SuiteOutcome {
    pub fn passed(&self) -> bool {
        self.violation.is_none() && self.nonvacuous > 0
    }
}

pub struct Suite {
    pub name: &'static str,
    pub statement: &'static str,
    step: fn(&mut ChaCha8Rng) -> Result<Case>,
}

pub static SUITES: &[Suite] = &[
    Suite {
        name: "rank3",
        statement: "quotients of geometries of rank at most 3 are geometries",
        step: rank3,
    },
    Suite {
        name: "flagslift",
        statement: "FlagsLift implies the quotient is a geometry",
        step: flagslift,
    },
    Suite {
        name: "cover",
        statement: "a cover satisfies FlagsLift, and firmness passes to the quotient",
        step: cover,
    },
    Suite {
        name: "semiregular",
        statement: "a connected cover of an orbit-quotient has a semiregular group",
        step: semiregular,
    },
    Suite {
        name: "iscovering",
        statement: "corank-1 surjectivity with block distance at least 4 gives a cover",
        step: iscovering,
    },
    Suite {
        name: "tq1-equivalence",
        statement: "TQ1 holds exactly when TQ2' and TQ2'' hold",
        step: tq1_equivalence,
    },
    Suite {
        name: "tits-chain",
        statement: "TQ3 implies TQ1 implies PQ1 implies FlagsLift, and TQ2' with TQ2'' implies PQ1",
        step: tits_chain,
    },
    Suite {
        name: "tq2doubleprime",
        statement: "FlagsLift with TQ2' implies TQ2''",
        step: tq2doubleprime,
    },
    Suite {
        name: "coset-quotient",
        statement: "invariant quotients of coset pregeometries are coset pregeometries",
        step: coset_quotient,
    },
    Suite {
        name: "shadowable",
        statement: "orbit-quotients of shadowable geometries are geometries, flag-transitive under a normalising flag-transitive group",
        step: shadowable,
    },
    Suite {
        name: "forest-lift",
        statement: "with a forest diagram every quotient chamber lifts, agreeing with exhaustive search",
        step: forest_lift,
    },
];

pub fn suite(name: &str) -> Option<&'static Suite> {
    SUITES.iter().find(|s| s.name == name)
}

impl Suite {
    pub fn run(&self, instances: usize) -> SuiteOutcome {
        let mut rng = rng_for(self.name);
        let mut nonvacuous = 0;
        for k in 0..instances {
            let case = (self.step)(&mut rng).unwrap_or_else(|e| Case::Violated(format!("error: {e}")));
            match case {
                Case::Vacuous => {}
                Case::Holds => nonvacuous += 1,
                Case::Violated(why) => {
                    return SuiteOutcome {
                        name: self.name,
                        instances: k + 1,
                        nonvacuous,
                        violation: Some(format!("instance {k}: {why}")),
                    }
                }
            }
        }
        SuiteOutcome {
            name: self.name,
            instances,
            nonvacuous,
            violation: None,
        }
    }
}

fn violated_unless(holds: bool, why: impl FnOnce() -> String) -> Case {
    if holds {
        Case::Holds
    } else {
        Case::Violated(why())
    }
}

fn describe<W: std::fmt::Debug>(v: &Verdict<W>) -> String {
    format!("{:?}", v.witness())
}

fn aut_subgroup(rng: &mut ChaCha8Rng, g: &Pregeometry) -> Result<PermGroup> {
    match automorphism_group(g, AUT_CAP) {
        Ok(aut) => random_subgroup(rng, &aut, 2),
        Err(e) if e.is_cap_exceeded() => Ok(PermGroup::trivial(g.num_elements())),
        Err(e) => Err(e),
    }
}

/// Fixed examples with their full automorphism groups.
static FIXED: Lazy<Vec<(Pregeometry, PermGroup)>> = Lazy::new(|| {
    let mut out = Vec::new();
    let mut push = |g: Pregeometry| {
        if g.is_geometry().holds() {
            let aut = automorphism_group(&g, CAP).expect("small examples have small groups");
            out.push((g, aut));
        }
    };
    push(tq1_counterexample().0);
    push(hexagon_geometry().0);
    push(rank4_geometry().0);
    push(affine_geometry(2, 2).expect("AG(2,2)").geometry);
    push(affine_geometry(2, 3).expect("AG(2,3)").geometry);
    out.push({
        let mp = multipartite(2, 3, 2).expect("valid parameters");
        (mp.geometry, mp.full)
    });
    out
});

fn random_ssg_instance(rng: &mut ChaCha8Rng) -> Result<(Pregeometry, PermGroup)> {
    let v = rng.gen_range(3..=6);
    let k = rng.gen_range(1..v);
    let g = ssg(v, k)?;
    let gens = (0..rng.gen_range(1..=2))
        .map(|_| ssg_induced(v, k, &random_sparse_permutation(rng, v)))
        .collect::<Result<Vec<_>>>()?;
    let group = PermGroup::new(g.num_elements(), gens, CAP)?;
    Ok((g, group))
}

fn random_voltage_instance(rng: &mut ChaCha8Rng) -> Result<(Pregeometry, PermGroup)> {
    let base = random_geometry(rng, 2, 5);
    let k = rng.gen_range(2..=4);
    let (lift, shift) = voltage_lift(rng, &base, k);
    if rng.gen_bool(0.5) {
        Ok((lift, shift))
    } else {
        let group = aut_subgroup(rng, &lift)?;
        Ok((lift, group))
    }
}

/// A geometry with a group of automorphisms, drawn from several families.
pub fn random_orbit_instance(rng: &mut ChaCha8Rng) -> Result<(Pregeometry, PermGroup)> {
    match rng.gen_range(0..5) {
        0 => random_ssg_instance(rng),
        1 => {
            let inst = random_coset_instance(rng, 3)?;
            if inst.coset.geometry.is_geometry().holds() {
                let group = random_subgroup(rng, &inst.coset.action, 2)?;
                Ok((inst.coset.geometry, group))
            } else {
                random_ssg_instance(rng)
            }
        }
        2 => random_voltage_instance(rng),
        3 => {
            let rank = rng.gen_range(2..=4);
            let g = random_geometry(rng, rank, 4);
            let group = aut_subgroup(rng, &g)?;
            Ok((g, group))
        }
        _ => {
            let (g, aut) = FIXED.choose(rng).expect("nonempty");
            Ok((g.clone(), random_subgroup(rng, aut, 2)?))
        }
    }
}

fn rank3(rng: &mut ChaCha8Rng) -> Result<Case> {
    let rank = rng.gen_range(1..=3);
    let g = random_geometry(rng, rank, 4);
    let p = Projection::new(&g, random_partition(rng, &g))?;
    let v = p.quotient().is_geometry();
    Ok(violated_unless(v.holds(), || {
        format!("quotient not a geometry at {}", describe(&v))
    }))
}

fn flagslift(rng: &mut ChaCha8Rng) -> Result<Case> {
    let p = if rng.gen_bool(0.5) {
        let rank = rng.gen_range(2..=4);
        let g = random_geometry(rng, rank, 3);
        Projection::new(&g, random_partition(rng, &g))?
    } else {
        let (g, a) = random_orbit_instance(rng)?;
        Projection::orbit_quotient(&g, &a)?
    };
    if !p.check_flagslift().holds() {
        return Ok(Case::Vacuous);
    }
    let v = p.quotient().is_geometry();
    Ok(violated_unless(v.holds(), || {
        format!("quotient not a geometry at {}", describe(&v))
    }))
}

fn cover(rng: &mut ChaCha8Rng) -> Result<Case> {
    let p = match rng.gen_range(0..3) {
        0 => {
            let (g, a) = random_voltage_instance(rng)?;
            Projection::orbit_quotient(&g, &a)?
        }
        1 => {
            let rank = rng.gen_range(2..=3);
            let g = random_geometry(rng, rank, 3);
            let b = blowup(&g, &SimpleGraph::matching(rng.gen_range(1..=2)))?;
            Projection::new(&b.geometry, b.fibres)?
        }
        _ => {
            let rank = rng.gen_range(2..=3);
            let g = random_geometry(rng, rank, 4);
            let part = random_far_partition(rng, &g, 3);
            Projection::new(&g, part)?
        }
    };
    if !p.is_cover().holds() {
        return Ok(Case::Vacuous);
    }
    if let Verdict::Fails(f) = p.check_flagslift() {
        return Ok(Case::Violated(format!("cover without FlagsLift at {f}")));
    }
    let source_firm = p.source().is_firm()?.holds();
    if source_firm {
        if let Verdict::Fails(f) = p.quotient().is_geometry() {
            return Ok(Case::Violated(format!("quotient of a cover not a geometry at {f}")));
        }
        let q = p.quotient().is_firm()?;
        return Ok(violated_unless(q.holds(), || {
            format!("firm cover with non-firm quotient: {}", describe(&q))
        }));
    }
    Ok(Case::Holds)
}

fn semiregular(rng: &mut ChaCha8Rng) -> Result<Case> {
    let (g, a) = if rng.gen_bool(0.5) {
        random_voltage_instance(rng)?
    } else {
        random_orbit_instance(rng)?
    };
    let p = Projection::orbit_quotient(&g, &a)?;
    if !g.is_connected() || !p.is_cover().holds() {
        return Ok(Case::Vacuous);
    }
    let w = a.semiregularity_witness()?;
    Ok(violated_unless(w.is_none(), || {
        format!("point {:?} has a nontrivial stabilizer", w.map(|x| x.0))
    }))
}

fn iscovering(rng: &mut ChaCha8Rng) -> Result<Case> {
    let p = match rng.gen_range(0..3) {
        0 => {
            let rank = rng.gen_range(2..=3);
            let g = random_geometry(rng, rank, 4);
            let part = random_far_partition(rng, &g, 4);
            Projection::new(&g, part)?
        }
        1 => {
            let (g, _) = random_voltage_instance(rng)?;
            let part = random_far_partition(rng, &g, 4);
            Projection::new(&g, part)?
        }
        _ => {
            let (g, a) = random_orbit_instance(rng)?;
            Projection::orbit_quotient(&g, &a)?
        }
    };
    if !p.min_block_distance().is_at_least(4) || !p.corank1_surjective().holds() {
        return Ok(Case::Vacuous);
    }
    let c = p.is_cover();
    Ok(violated_unless(c.holds(), || format!("not a cover: {}", describe(&c))))
}

struct Axioms {
    flagslift: bool,
    pq1: bool,
    tq1: bool,
    tq2p: bool,
    tq2pp: bool,
    tq3: bool,
}

fn random_axioms(rng: &mut ChaCha8Rng) -> Result<Axioms> {
    let (g, a) = random_orbit_instance(rng)?;
    let oq = OrbitQuotient::new(&g, a)?;
    let p = oq.projection();
    Ok(Axioms {
        flagslift: p.check_flagslift().holds(),
        pq1: p.check_pq1().holds(),
        tq1: oq.check_tq1()?.holds(),
        tq2p: oq.check_tq2prime()?.holds(),
        tq2pp: oq.check_tq2doubleprime().holds(),
        tq3: oq.check_tq3().holds(),
    })
}

fn tq1_equivalence(rng: &mut ChaCha8Rng) -> Result<Case> {
    let x = random_axioms(rng)?;
    Ok(violated_unless(x.tq1 == (x.tq2p && x.tq2pp), || {
        format!("tq1={} tq2'={} tq2''={}", x.tq1, x.tq2p, x.tq2pp)
    }))
}

fn tits_chain(rng: &mut ChaCha8Rng) -> Result<Case> {
    let x = random_axioms(rng)?;
    if !(x.tq3 || x.tq1 || x.pq1 || (x.tq2p && x.tq2pp)) {
        return Ok(Case::Vacuous);
    }
    let ok = (!x.tq3 || x.tq1) && (!x.tq1 || x.pq1) && (!x.pq1 || x.flagslift) && (!(x.tq2p && x.tq2pp) || x.pq1);
    Ok(violated_unless(ok, || {
        format!(
            "tq3={} tq1={} pq1={} flagslift={} tq2'={} tq2''={}",
            x.tq3, x.tq1, x.pq1, x.flagslift, x.tq2p, x.tq2pp
        )
    }))
}

fn tq2doubleprime(rng: &mut ChaCha8Rng) -> Result<Case> {
    let x = random_axioms(rng)?;
    if !(x.flagslift && x.tq2p) {
        return Ok(Case::Vacuous);
    }
    Ok(violated_unless(x.tq2pp, || {
        "FlagsLift and TQ2' hold but TQ2'' fails".into()
    }))
}

fn coset_quotient(rng: &mut ChaCha8Rng) -> Result<Case> {
    let inst = random_coset_instance(rng, 3)?;
    let p = Projection::new(&inst.coset.geometry, inst.partition)?;
    let induced = p.induced_group(&inst.coset.action)?;
    let v = is_coset_pregeometry(p.quotient(), &induced)?;
    Ok(violated_unless(v.holds(), || {
        format!("quotient is not a coset pregeometry: {}", describe(&v))
    }))
}

static AFFINE_AUT: Lazy<Vec<(Pregeometry, PermGroup)>> = Lazy::new(|| {
    [(2, 2), (2, 3), (3, 2)]
        .into_iter()
        .map(|(d, q)| {
            let g = affine_geometry(d, q).expect("valid parameters").geometry;
            let aut = automorphism_group(&g, CAP).expect("affine groups are below the cap");
            (g, aut)
        })
        .collect()
});

static LIFT: Lazy<(Pregeometry, PermGroup)> = Lazy::new(|| {
    let lift = shadowable_lift(&ssg(3, 2).expect("ssg(3,2)"), 3, 2).expect("valid parameters");
    let h = ssg_symmetric_group(3, 2, CAP).expect("S3");
    let g = lift.wreath_action(&h).expect("S3 acts on ssg(3,2)");
    (lift.geometry, g)
});

fn shadowable(rng: &mut ChaCha8Rng) -> Result<Case> {
    let (g, full) = match rng.gen_range(0..3) {
        0 => {
            let v = rng.gen_range(3..=5);
            let k = rng.gen_range(1..v);
            (ssg(v, k)?, ssg_symmetric_group(v, k, CAP)?)
        }
        1 => AFFINE_AUT.choose(rng).expect("nonempty").clone(),
        _ => LIFT.clone(),
    };
    if let Verdict::Fails(w) = is_shadowable(&g) {
        return Err(crate::error::GeoError::Internal(format!(
            "generator produced a non-shadowable geometry: {w:?}"
        )));
    }
    let a = random_subgroup(rng, &full, 2)?;
    let normal = rng.gen_bool(0.5);
    let a = if normal { full.normal_closure(&a)? } else { a };
    let p = Projection::orbit_quotient(&g, &a)?;
    if let Verdict::Fails(f) = p.quotient().is_geometry() {
        return Ok(Case::Violated(format!("orbit-quotient not a geometry at {f}")));
    }
    if normal && is_flag_transitive(&full, &g)? {
        let induced = p.induced_group(&full)?;
        if !is_flag_transitive(&induced, p.quotient())? {
            return Ok(Case::Violated("flag-transitivity lost on a normal quotient".into()));
        }
    }
    Ok(Case::Holds)
}

fn forest_lift(rng: &mut ChaCha8Rng) -> Result<Case> {
    let (g, a) = random_orbit_instance(rng)?;
    if !g.is_residually_connected().holds() || !basic_diagram(&g)?.is_forest() {
        return Ok(Case::Vacuous);
    }
    let oq = OrbitQuotient::new(&g, a)?;
    for c in oq.quotient().chambers() {
        let lift = lift_chamber_forest(&oq, &c)?;
        if oq.projection().project_flag(&lift)? != c || !g.is_flag(&lift) {
            return Ok(Case::Violated(format!("bad lift of {c}")));
        }
        if !oq.projection().has_lift(&c)? {
            return Ok(Case::Violated(format!("exhaustive search finds no lift of {c}")));
        }
    }
    Ok(Case::Holds)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_suite_runs_a_few_instances() {
        for s in SUITES {
            let out = s.run(8);
            assert!(out.violation.is_none(), "{}: {:?}", s.name, out.violation);
        }
    }
}
