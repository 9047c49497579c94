use proptest::prelude::*;
use sched_reduce::cli::format::*;
use sched_reduce::fixtures::{example_umps, example_schedule};
use sched_reduce::generators::{gen_fractional, gen_jobshop, gen_kpartite_yes, gen_random_umps_with_lengths};
use sched_reduce::model::trivial_serial_schedule;
use sched_reduce::rational::Rational;
use sched_reduce::reductions::{forward_map_related, umps_to_commdelay, umps_to_related};
use sched_reduce::rounding::standard_gamma;
use sched_reduce::solvers::{solve_umps_exact, SolveLimits};

fn reparse(doc: &Document) -> Document {
    let text = doc.render();
    let back = Document::parse(&text).unwrap();
    assert_eq!(back.render(), text);
    back
}

#[test]
fn example_uses_one_based_indices() {
    let doc = Document::Umps(UmpsDoc::from_model(&example_umps()));
    let v: serde_json::Value = serde_json::from_str(&doc.render()).unwrap();
    assert_eq!(v["kind"], "umps");
    assert_eq!(v["n"], 8);
    assert!(v["home"].as_array().unwrap().iter().all(|h| (1..=3).contains(&h.as_u64().unwrap())));
    assert_eq!(reparse(&doc).into_umps().unwrap(), example_umps());

    let sched = Document::Schedule(ScheduleDoc::from_model(&example_schedule()));
    let v: serde_json::Value = serde_json::from_str(&sched.render()).unwrap();
    assert_eq!(v["horizon"], "5/1");
    assert_eq!(v["entries"][0]["job"], 1);
    assert_eq!(reparse(&sched).into_schedule().unwrap(), example_schedule());
}

#[test]
fn artifacts_round_trip() {
    let art = umps_to_commdelay(&example_umps()).unwrap();
    let doc = CommDelayArtifactDoc::from_model(&art);
    assert_eq!(doc.c_infinity, 64);
    match reparse(&Document::CommdelayArtifact(doc)) {
        Document::CommdelayArtifact(d) => assert_eq!(d.to_model().unwrap(), art),
        other => panic!("{}", other.kind()),
    }
    let art = umps_to_related(&example_umps(), None).unwrap();
    match reparse(&Document::RelatedArtifact(RelatedArtifactDoc::from_model(&art))) {
        Document::RelatedArtifact(d) => assert_eq!(d.to_model().unwrap(), art),
        other => panic!("{}", other.kind()),
    }
    let gs = forward_map_related(&art, &example_schedule()).unwrap();
    match reparse(&Document::GroupedSchedule(GroupedScheduleDoc::from_model(&gs))) {
        Document::GroupedSchedule(d) => assert_eq!(d.to_model().unwrap(), gs),
        other => panic!("{}", other.kind()),
    }
}

#[test]
fn rejects_zero_index_and_bad_horizon() {
    let text = r#"{"kind":"umps","n":1,"m":1,"lengths":[1],"home":[0],"dag":{"node_count":1,"edges":[]}}"#;
    assert!(Document::parse(text).unwrap().into_umps().is_err());
    let text = r#"{"kind":"schedule","entries":[{"job":1,"machine":1,"start":"0","end":"1"}],"horizon":"2"}"#;
    assert!(Document::parse(text).unwrap().into_schedule().is_err());
    assert!(Document::parse(r#"{"kind":"nonsense"}"#).is_err());
}

#[test]
fn commdelay_needs_one_delay_per_edge() {
    let text = r#"{"kind":"commdelay","n_total":2,"lengths":[1,1],"delays":[],
        "dag":{"node_count":2,"edges":[[1,2]]},"machines":"unbounded"}"#;
    match Document::parse(text).unwrap() {
        Document::Commdelay(d) => assert!(d.to_model().is_err()),
        other => panic!("{}", other.kind()),
    }
    let text = r#"{"kind":"commdelay","n_total":2,"lengths":[1,1],"delays":[[1,2,3]],
        "dag":{"node_count":2,"edges":[[1,2]]},"machines":{"bounded":2}}"#;
    match Document::parse(text).unwrap() {
        Document::Commdelay(d) => assert_eq!(d.to_model().unwrap().delays(), &[3]),
        other => panic!("{}", other.kind()),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(80))]

    #[test]
    fn instances_round_trip(n in 1usize..=7, m in 1usize..=3, p in 0i128..=4, len in 1u64..=3, seed: u64) {
        let inst = gen_random_umps_with_lengths(n, m, Rational::new(p, 4), len, seed).unwrap();
        let doc = reparse(&Document::Umps(UmpsDoc::from_model(&inst)));
        prop_assert_eq!(doc.into_umps().unwrap(), inst.clone());

        if n >= 2 {
            let out = umps_to_commdelay(&inst).unwrap().output;
            match reparse(&Document::Commdelay(CommDelayDoc::from_model(&out))) {
                Document::Commdelay(d) => prop_assert_eq!(d.to_model().unwrap(), out),
                _ => prop_assert!(false),
            }
        }

        let js = gen_jobshop(n, m, 2, seed).unwrap();
        match reparse(&Document::Jobshop(JobShopDoc::from_model(&js))) {
            Document::Jobshop(d) => prop_assert_eq!(d.to_model().unwrap(), js),
            _ => prop_assert!(false),
        }

        let r = solve_umps_exact(&inst, &SolveLimits::default()).unwrap();
        match reparse(&Document::SolveResult(SolveResultDoc::from_model(&r))) {
            Document::SolveResult(d) => prop_assert_eq!(d.to_model().unwrap(), r),
            _ => prop_assert!(false),
        }
    }

    #[test]
    fn fractional_and_kpartite_round_trip(cell in 1usize..=2, k in 1usize..=3, n in 1usize..=5, seed: u64) {
        let (g, cert) = gen_kpartite_yes(cell * k, k, seed).unwrap();
        let (g2, cert2) = reparse(&Document::Kpartite(KPartiteDoc::from_model(&g, Some(&cert)))).into_kpartite().unwrap();
        prop_assert_eq!(g2, g);
        prop_assert_eq!(cert2, Some(cert));

        let inst = gen_random_umps_with_lengths(n, 2, Rational::new(1, 2), 1, seed).unwrap();
        let fs = gen_fractional(&inst, &trivial_serial_schedule(&inst), standard_gamma(n), Rational::new(1, 2), seed).unwrap();
        match reparse(&Document::Fractional(FractionalDoc::from_model(&fs))) {
            Document::Fractional(d) => prop_assert_eq!(d.to_model().unwrap(), fs),
            _ => prop_assert!(false),
        }
    }
}
