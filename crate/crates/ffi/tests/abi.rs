use std::ffi::{c_char, CStr, CString};
use std::ptr;

use sched_reduce::cli::format::{Document, UmpsDoc};
use sched_reduce::fixtures::example_umps;
use sched_reduce_ffi::*;

fn example_json() -> CString {
    CString::new(Document::Umps(UmpsDoc::from_model(&example_umps())).render()).unwrap()
}

unsafe fn take(s: *mut c_char) -> String {
    let out = CStr::from_ptr(s).to_str().unwrap().to_string();
    sr_string_free(s);
    out
}

unsafe fn last_error() -> String {
    CStr::from_ptr(sr_last_error()).to_string_lossy().into_owned()
}

#[test]
fn solve_example_through_handles() {
    unsafe {
        let mut inst = ptr::null_mut();
        assert_eq!(sr_umps_from_json(example_json().as_ptr(), &mut inst), SrStatus::Ok);
        let (mut n, mut m) = (0, 0);
        assert_eq!(sr_umps_size(inst, &mut n, &mut m), SrStatus::Ok);
        assert_eq!((n, m), (8, 3));

        let mut res = ptr::null_mut();
        assert_eq!(sr_umps_solve_exact(inst, 10, 0, &mut res), SrStatus::Ok);
        let (mut num, mut den) = (0, 0);
        assert_eq!(sr_solve_result_optimum(res, &mut num, &mut den), SrStatus::Ok);
        assert_eq!((num, den), (5, 1));
        assert_eq!(sr_solve_result_proven(res), 1);

        let mut sched = ptr::null_mut();
        assert_eq!(sr_solve_result_schedule_json(res, &mut sched), SrStatus::Ok);
        let sched = CString::new(take(sched)).unwrap();
        let mut feasible = -1;
        assert_eq!(sr_verify_json(example_json().as_ptr(), sched.as_ptr(), &mut feasible), SrStatus::Ok);
        assert_eq!(feasible, 1);

        let mut text = ptr::null_mut();
        assert_eq!(sr_umps_to_json(inst, &mut text), SrStatus::Ok);
        assert_eq!(take(text), example_json().to_str().unwrap());

        sr_solve_result_free(res);
        sr_umps_free(inst);
    }
}

#[test]
fn commdelay_artifact_and_row() {
    unsafe {
        let mut inst = ptr::null_mut();
        assert_eq!(sr_umps_from_json(example_json().as_ptr(), &mut inst), SrStatus::Ok);
        let mut art = ptr::null_mut();
        assert_eq!(sr_umps_to_commdelay(inst, &mut art), SrStatus::Ok);
        assert_eq!(sr_commdelay_artifact_c_infinity(art), 64);
        let mut out = ptr::null_mut();
        assert_eq!(sr_commdelay_artifact_output_json(art, &mut out), SrStatus::Ok);
        assert!(take(out).contains("\"n_total\": 11"));

        let id = CString::new("example_umps").unwrap();
        let mut row = ptr::null_mut();
        assert_eq!(sr_roundtrip_commdelay(inst, id.as_ptr(), 11, &mut row), SrStatus::Ok);
        assert!(take(row).starts_with("example_umps,8,3,5/1,6/1,sandwich_plus_one,true,"));

        sr_commdelay_artifact_free(art);
        sr_umps_free(inst);
    }
}

#[test]
fn errors_are_reported() {
    unsafe {
        let mut inst = ptr::null_mut();
        let bad = CString::new("{\"kind\": \"umps\"").unwrap();
        assert_eq!(sr_umps_from_json(bad.as_ptr(), &mut inst), SrStatus::Format);
        assert!(inst.is_null());
        assert!(!last_error().is_empty());

        let wrong = CString::new(r#"{"kind":"schedule","entries":[],"horizon":"0"}"#).unwrap();
        assert_eq!(sr_umps_from_json(wrong.as_ptr(), &mut inst), SrStatus::WrongKind);

        assert_eq!(sr_umps_from_json(ptr::null(), &mut inst), SrStatus::NullArgument);
        assert_eq!(sr_umps_to_json(ptr::null(), &mut ptr::null_mut()), SrStatus::NullArgument);
        assert_eq!(sr_solve_result_proven(ptr::null()), -1);
        sr_string_free(ptr::null_mut());
        sr_umps_free(ptr::null_mut());

        let cyc = CString::new(
            r#"{"kind":"umps","n":2,"m":1,"lengths":[1,1],"home":[1,1],"dag":{"node_count":2,"edges":[[1,2],[2,1]]}}"#,
        )
        .unwrap();
        assert_eq!(sr_umps_from_json(cyc.as_ptr(), &mut inst), SrStatus::InvalidInstance);
    }
}

#[test]
fn infeasible_schedule_reports_witness() {
    unsafe {
        // job 5 succeeds job 1 but runs first
        let sched = CString::new(
            r#"{"kind":"schedule","entries":[
                {"job":1,"machine":1,"start":"0","end":"1"},{"job":2,"machine":1,"start":"1","end":"2"},
                {"job":3,"machine":1,"start":"2","end":"3"},{"job":4,"machine":2,"start":"1","end":"2"},
                {"job":5,"machine":2,"start":"0","end":"1"},{"job":6,"machine":2,"start":"2","end":"3"},
                {"job":7,"machine":3,"start":"0","end":"1"},{"job":8,"machine":3,"start":"1","end":"2"}],
                "horizon":"3"}"#,
        )
        .unwrap();
        let mut feasible = -1;
        assert_eq!(sr_verify_json(example_json().as_ptr(), sched.as_ptr(), &mut feasible), SrStatus::Ok);
        assert_eq!(feasible, 0);
        assert!(last_error().contains("precedence (1, 5)"), "{}", last_error());
    }
}

#[test]
fn budget_is_not_an_error() {
    unsafe {
        let mut inst = ptr::null_mut();
        assert_eq!(sr_umps_from_json(example_json().as_ptr(), &mut inst), SrStatus::Ok);
        let mut res = ptr::null_mut();
        assert_eq!(sr_umps_solve_exact(inst, 10, 1, &mut res), SrStatus::Ok);
        assert!(sr_solve_result_states(res) >= 1);
        sr_solve_result_free(res);
        let mut res = ptr::null_mut();
        assert_eq!(sr_umps_solve_exact(inst, 3, 0, &mut res), SrStatus::TooLarge);
        sr_umps_free(inst);
    }
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/sched_reduce.h")).unwrap();
    let src = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/src/lib.rs")).unwrap();
    let exports: Vec<&str> = src
        .lines()
        .filter_map(|l| l.split("extern \"C\" fn ").nth(1))
        .map(|l| l.split('(').next().unwrap())
        .collect();
    assert!(exports.len() >= 15);
    for f in exports {
        assert!(header.contains(&format!("{f}(")), "{f} missing from header");
    }
}
