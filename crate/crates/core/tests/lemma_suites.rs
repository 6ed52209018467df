use geoq::suites::{DEFAULT_INSTANCES, SUITES};

#[test]
fn lemma_suites_find_no_violation() {
    for s in SUITES {
        let start = std::time::Instant::now();
        let out = s.run(DEFAULT_INSTANCES);
        println!(
            "{:<16} instances={} nonvacuous={} {:.2}s",
            out.name,
            out.instances,
            out.nonvacuous,
            start.elapsed().as_secs_f64()
        );
        assert!(out.violation.is_none(), "{}: {:?}", s.name, out.violation);
        assert!(out.nonvacuous > 0, "{} never met its hypotheses", s.name);
    }
}
