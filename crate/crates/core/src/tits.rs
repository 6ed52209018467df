//! Tits' quotient axioms for orbit-quotients, decided by enumeration.
//!
//! For a group `A` of automorphisms, `A_F` is the stabilizer of a flag `F`
//! and `Γ_F` its residue. Every decider walks the flags of the source in
//! (rank, lexicographic) order and returns the first failure.
//!
//! TQ2″ is read with `F` "incident to" an element meaning that the element
//! lies in the residue `Γ_F`.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use crate::error::Result;
use crate::geometry::{ElementId, Flag, Pregeometry, Verdict};
use crate::perm::PermGroup;
use crate::quotient::{Partition, Projection};

/// An orbit-quotient `Γ/A` together with the group.
#[derive(Clone, Debug)]
pub struct OrbitQuotient {
    projection: Projection,
    group: PermGroup,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tq2PrimeWitness {
    pub flag: Flag,
    /// Two residue elements in one `A`-orbit but different `A_F`-orbits.
    pub pair: (ElementId, ElementId),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tq2DoublePrimeWitness {
    pub flag: Flag,
    /// An incident pair whose orbits both meet `Γ_F` but no image of which
    /// lies entirely in `Γ_F`.
    pub pair: (ElementId, ElementId),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tq1Defect {
    /// Two distinct `A_F`-orbits, represented by these elements, lie in
    /// the same `A`-orbit.
    NotInjective(ElementId, ElementId),
    /// This quotient block lies in the quotient residue but meets no
    /// element of `Γ_F`.
    NotSurjective(ElementId),
    /// Incidence between these two `A_F`-orbits differs from incidence
    /// between their images.
    IncidenceMismatch(ElementId, ElementId),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tq1Witness {
    pub flag: Flag,
    pub defect: Tq1Defect,
}

impl OrbitQuotient {
    pub fn new(geom: &Pregeometry, group: PermGroup) -> Result<Self> {
        let partition = Partition::from_orbits(geom, &group)?;
        Ok(OrbitQuotient {
            projection: Projection::new(geom, partition)?,
            group,
        })
    }

    pub fn projection(&self) -> &Projection {
        &self.projection
    }

    pub fn source(&self) -> &Pregeometry {
        self.projection.source()
    }

    pub fn quotient(&self) -> &Pregeometry {
        self.projection.quotient()
    }

    pub fn group(&self) -> &PermGroup {
        &self.group
    }

    fn orbit(&self, e: ElementId) -> ElementId {
        self.projection.project(e)
    }

    /// For each residue element, a label of its `A_F`-orbit.
    fn stabilizer_orbits(&self, flag: &Flag, residue: &[ElementId]) -> Result<HashMap<ElementId, usize>> {
        let stab = self.group.stabilizer(flag)?;
        let mut label = vec![usize::MAX; self.source().num_elements()];
        for orbit in stab.orbits() {
            for &x in &orbit {
                label[x] = orbit[0];
            }
        }
        Ok(residue.iter().map(|&e| (e, label[e.0])).collect())
    }

    /// TQ3: distinct elements of one orbit are at distance at least 4.
    /// The witness is the closest such pair.
    pub fn check_tq3(&self) -> Verdict<(ElementId, ElementId)> {
        let mut worst: Option<(usize, ElementId, ElementId)> = None;
        for block in self.projection.partition().blocks().iter().filter(|b| b.len() > 1) {
            for (i, &a) in block.iter().enumerate() {
                let dist = self.source().distances_from(a);
                for &b in &block[i + 1..] {
                    if let crate::geometry::Distance::Finite(d) = dist[b.0] {
                        if d < 4 && worst.is_none_or(|w| d < w.0) {
                            worst = Some((d, a, b));
                        }
                    }
                }
            }
        }
        match worst {
            None => Verdict::Holds,
            Some((_, a, b)) => Verdict::Fails((a, b)),
        }
    }

    /// TQ2′: within every residue, each `A`-orbit meets a single
    /// `A_F`-orbit.
    pub fn check_tq2prime(&self) -> Result<Verdict<Tq2PrimeWitness>> {
        for flag in self.source().flags() {
            let residue = self.source().residue_elements(flag);
            let labels = self.stabilizer_orbits(flag, &residue)?;
            let mut seen: HashMap<ElementId, ElementId> = HashMap::new();
            for &e in &residue {
                let o = self.orbit(e);
                match seen.get(&o) {
                    None => {
                        seen.insert(o, e);
                    }
                    Some(&first) if labels[&first] != labels[&e] => {
                        return Ok(Verdict::Fails(Tq2PrimeWitness {
                            flag: flag.clone(),
                            pair: (first, e),
                        }));
                    }
                    Some(_) => {}
                }
            }
        }
        Ok(Verdict::Holds)
    }

    /// The conjugacy form of TQ2′: flags with equal projection are
    /// `A`-conjugate. The witness is the least non-conjugate pair.
    pub fn check_projection_conjugacy(&self) -> Result<Verdict<(Flag, Flag)>> {
        let mut classes: HashMap<Flag, Vec<&Flag>> = HashMap::new();
        for flag in self.source().flags() {
            classes
                .entry(self.projection.project_flag(flag)?)
                .or_default()
                .push(flag);
        }
        let mut failures = Vec::new();
        for members in classes.values() {
            let orbit = self.group.flag_orbit(members[0]);
            if let Some(other) = members.iter().find(|f| !orbit.contains(**f)) {
                failures.push((members[0].clone(), (*other).clone()));
            }
        }
        failures
            .sort_by(|x, y| (x.0.rank_lex_key(), x.1.rank_lex_key()).cmp(&(y.0.rank_lex_key(), y.1.rank_lex_key())));
        Ok(match failures.into_iter().next() {
            None => Verdict::Holds,
            Some(w) => Verdict::Fails(w),
        })
    }

    /// Orbits of `A` on ordered incident pairs of distinct elements,
    /// labelled by their least member.
    fn pair_orbits(&self) -> HashMap<(ElementId, ElementId), (ElementId, ElementId)> {
        let mut label = HashMap::new();
        let mut pairs: Vec<(ElementId, ElementId)> =
            self.source().incidences().flat_map(|(a, b)| [(a, b), (b, a)]).collect();
        pairs.sort();
        for &start in &pairs {
            if label.contains_key(&start) {
                continue;
            }
            label.insert(start, start);
            let mut queue = VecDeque::from([start]);
            while let Some((a, b)) = queue.pop_front() {
                for g in self.group.generators() {
                    let img = (g.image(a), g.image(b));
                    if let std::collections::hash_map::Entry::Vacant(v) = label.entry(img) {
                        v.insert(start);
                        queue.push_back(img);
                    }
                }
            }
        }
        label
    }

    /// TQ2″: if `α * β` and `Γ_F` meets both `α^A` and `β^A`, then some
    /// `a ∈ A` puts both `α^a` and `β^a` in `Γ_F`.
    pub fn check_tq2doubleprime(&self) -> Verdict<Tq2DoublePrimeWitness> {
        let labels = self.pair_orbits();
        let mut reps: Vec<(ElementId, ElementId)> = labels.values().copied().collect();
        reps.sort();
        reps.dedup();
        for flag in self.source().flags() {
            let residue = self.source().residue_elements(flag);
            let inside: HashSet<ElementId> = residue.iter().copied().collect();
            let orbits_met: HashSet<ElementId> = residue.iter().map(|&e| self.orbit(e)).collect();
            let mut present = HashSet::new();
            for &a in &residue {
                for &b in self.source().neighbours(a) {
                    if inside.contains(&b) {
                        present.insert(labels[&(a, b)]);
                    }
                }
            }
            for &(a, b) in &reps {
                if orbits_met.contains(&self.orbit(a))
                    && orbits_met.contains(&self.orbit(b))
                    && !present.contains(&(a, b))
                {
                    return Verdict::Fails(Tq2DoublePrimeWitness {
                        flag: flag.clone(),
                        pair: (a, b),
                    });
                }
            }
        }
        Verdict::Holds
    }

    /// TQ1: for every flag `F`, `α^{A_F} ↦ α^A` is an isomorphism from
    /// `(Γ_F)/A_F` onto `(Γ/A)_{π(F)}`.
    pub fn check_tq1(&self) -> Result<Verdict<Tq1Witness>> {
        for flag in self.source().flags() {
            if let Some(defect) = self.tq1_defect(flag)? {
                return Ok(Verdict::Fails(Tq1Witness {
                    flag: flag.clone(),
                    defect,
                }));
            }
        }
        Ok(Verdict::Holds)
    }

    /// The TQ1 failure at one particular flag, if any.
    pub fn tq1_defect(&self, flag: &Flag) -> Result<Option<Tq1Defect>> {
        self.source().check_flag(flag)?;
        let residue = self.source().residue_elements(flag);
        let labels = self.stabilizer_orbits(flag, &residue)?;
        // Representative (least element) of each A_F-orbit in the residue.
        let mut reps: Vec<ElementId> = Vec::new();
        let mut rep_of: HashMap<usize, ElementId> = HashMap::new();
        for &e in &residue {
            rep_of.entry(labels[&e]).or_insert_with(|| {
                reps.push(e);
                e
            });
        }
        let mut image_of: HashMap<ElementId, ElementId> = HashMap::new();
        for &r in &reps {
            if let Some(&prev) = image_of.get(&self.orbit(r)) {
                return Ok(Some(Tq1Defect::NotInjective(prev, r)));
            }
            image_of.insert(self.orbit(r), r);
        }
        let projected = self.projection.project_flag(flag)?;
        let target: BTreeSet<ElementId> = self.quotient().residue_elements(&projected).into_iter().collect();
        for &b in &target {
            if !image_of.contains_key(&b) {
                return Ok(Some(Tq1Defect::NotSurjective(b)));
            }
        }
        // Incidence between A_F-orbits: some members incident.
        let mut orbit_incident: HashSet<(usize, usize)> = HashSet::new();
        for &a in &residue {
            for &b in self.source().neighbours(a) {
                if let Some(&lb) = labels.get(&b) {
                    orbit_incident.insert((labels[&a], lb));
                }
            }
        }
        for (i, &r) in reps.iter().enumerate() {
            for &s in &reps[i + 1..] {
                let up = orbit_incident.contains(&(labels[&r], labels[&s]));
                let down = self.quotient().incident(self.orbit(r), self.orbit(s));
                if up != down {
                    return Ok(Some(Tq1Defect::IncidenceMismatch(r, s)));
                }
            }
        }
        Ok(None)
    }
}

/// Every axiom and related property of one orbit-quotient, with rendered
/// witnesses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomSummary {
    pub rows: Vec<(&'static str, Verdict<String>)>,
}

impl AxiomSummary {
    pub fn evaluate(oq: &OrbitQuotient) -> Result<Self> {
        let src = oq.source();
        let quo = oq.quotient();
        let p = oq.projection();
        let flag = |f: &Flag| src.describe_flag(f);
        let qflag = |f: &Flag| quo.describe_flag(f);
        let el = |e: ElementId| src.name(e).to_string();
        let rows = vec![
            ("flagslift", p.check_flagslift().map(|f| qflag(&f))),
            (
                "pq1",
                p.check_pq1()
                    .map(|(f, b)| format!("flag {} block {}", flag(&f), quo.name(b))),
            ),
            ("pq2", p.check_pq2().map(|f| flag(&f))),
            (
                "tq1",
                oq.check_tq1()?.map(|w| {
                    let detail = match w.defect {
                        Tq1Defect::NotInjective(a, b) => format!("not injective at {} {}", el(a), el(b)),
                        Tq1Defect::NotSurjective(b) => format!("misses {}", quo.name(b)),
                        Tq1Defect::IncidenceMismatch(a, b) => {
                            format!("incidence differs at {} {}", el(a), el(b))
                        }
                    };
                    format!("flag {} {}", flag(&w.flag), detail)
                }),
            ),
            (
                "tq2prime",
                oq.check_tq2prime()?
                    .map(|w| format!("flag {} pair {} {}", flag(&w.flag), el(w.pair.0), el(w.pair.1))),
            ),
            (
                "tq2doubleprime",
                oq.check_tq2doubleprime()
                    .map(|w| format!("flag {} pair {} {}", flag(&w.flag), el(w.pair.0), el(w.pair.1))),
            ),
            ("tq3", oq.check_tq3().map(|(a, b)| format!("{} {}", el(a), el(b)))),
            ("residually_surjective", p.residual_surjectivity().map(|f| flag(&f))),
            ("cover", p.is_cover().map(|w| flag(&w.flag))),
        ];
        Ok(AxiomSummary { rows })
    }

    pub fn get(&self, name: &str) -> Option<&Verdict<String>> {
        self.rows.iter().find(|(n, _)| *n == name).map(|(_, v)| v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{PregeometryBuilder, TypeId};
    use crate::perm::Permutation;

    /// Two elements per type, all cross-type pairs incident, with the group
    /// swapping the type-0 pair together with the type-1 or type-2 pair.
    fn counterexample() -> (Pregeometry, PermGroup) {
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
        let g = b.build().unwrap();
        let gens = vec![
            Permutation::from_cycles(6, &[vec![0, 1], vec![2, 3]]).unwrap(),
            Permutation::from_cycles(6, &[vec![0, 1], vec![4, 5]]).unwrap(),
        ];
        (g, PermGroup::new(6, gens, 100).unwrap())
    }

    #[test]
    fn tq1_fails_but_residually_surjective() {
        let (g, a) = counterexample();
        let oq = OrbitQuotient::new(&g, a).unwrap();
        assert!(oq.projection().residual_surjectivity().holds());
        let Verdict::Fails(w) = oq.check_tq2prime().unwrap() else {
            panic!()
        };
        assert_eq!(w.flag.rank(), 2);
        let Verdict::Fails(w) = oq.check_tq1().unwrap() else {
            panic!()
        };
        assert!(matches!(w.defect, Tq1Defect::NotInjective(..)));
        assert!(!oq.check_projection_conjugacy().unwrap().holds());
    }

    #[test]
    fn trivial_group_satisfies_everything() {
        let (g, _) = counterexample();
        let oq = OrbitQuotient::new(&g, PermGroup::trivial(6)).unwrap();
        assert!(oq.check_tq1().unwrap().holds());
        assert!(oq.check_tq2prime().unwrap().holds());
        assert!(oq.check_tq2doubleprime().holds());
        assert!(oq.check_tq3().holds());
        let summary = AxiomSummary::evaluate(&oq).unwrap();
        assert!(summary.rows.iter().all(|(_, v)| v.holds()));
    }
}
