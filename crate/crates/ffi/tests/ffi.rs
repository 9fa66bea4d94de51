use metacirc_ffi::*;
use std::ffi::{CStr, CString};
use std::ptr;

fn mp(m: u64, n: u64, s: u64, t: u64) -> *mut McGraph {
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { mc_graph_mp(m, n, s, t, &mut g) }, McStatus::Ok);
    g
}

#[test]
fn mp_graph_round_trip() {
    let g = mp(27, 3, 9, 4);
    unsafe {
        assert_eq!(mc_graph_order(g), 81);
        assert_eq!(mc_graph_edge_count(g), 324);
        let text = mc_graph_to_edge_list(g);
        assert!(CStr::from_ptr(text).to_str().unwrap().starts_with("n 81 m 324\n"));
        let mut h = ptr::null_mut();
        assert_eq!(mc_graph_parse_edge_list(text, &mut h), McStatus::Ok);
        let mut iso = -5;
        assert_eq!(mc_graphs_isomorphic(g, h, 512, &mut iso), McStatus::Ok);
        assert_eq!(iso, 1);
        mc_string_free(text);
        mc_graph_free(h);
        mc_graph_free(g);
    }
}

#[test]
fn bad_parameters_set_the_message() {
    let mut g = ptr::null_mut();
    let status = unsafe { mc_graph_mp(27, 3, 9, 3, &mut g) };
    assert_eq!(status, McStatus::InvalidArgument);
    assert!(g.is_null());
    let msg = unsafe { CStr::from_ptr(mc_last_error()) }.to_str().unwrap();
    assert!(msg.contains("gcd"), "{msg}");
}

#[test]
fn null_handles_are_rejected() {
    unsafe {
        assert_eq!(mc_graph_petersen(5, 2, ptr::null_mut()), McStatus::NullPointer);
        assert_eq!(mc_graph_order(ptr::null()), 0);
        assert_eq!(mc_report_flag(ptr::null(), McFlag::Cayley), MC_UNDECIDED);
        let mut out = ptr::null_mut();
        assert_eq!(mc_classify(ptr::null(), 0, ptr::null(), &mut out), McStatus::NullPointer);
        mc_graph_free(ptr::null_mut());
        mc_string_free(ptr::null_mut());
    }
}

#[test]
fn truncated_edge_list_is_a_parse_error() {
    let text = CString::new("n 4 m 3\n0 1\n1 2\n").unwrap();
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { mc_graph_parse_edge_list(text.as_ptr(), &mut g) }, McStatus::ParseError);
}

#[test]
fn classify_petersen_and_circulant() {
    unsafe {
        let mut pg = ptr::null_mut();
        assert_eq!(mc_graph_petersen(5, 2, &mut pg), McStatus::Ok);
        let mut r = ptr::null_mut();
        assert_eq!(mc_classify(pg, 0, ptr::null(), &mut r), McStatus::Ok);
        assert_eq!(mc_report_flag(r, McFlag::VertexTransitive), 1);
        assert_eq!(mc_report_flag(r, McFlag::Cayley), 0);
        assert_eq!(mc_report_flag(r, McFlag::Metacirculant), 1);
        mc_report_free(r);
        mc_graph_free(pg);

        let conn = [1usize, 26];
        let mut c = ptr::null_mut();
        assert_eq!(mc_graph_circulant(27, conn.as_ptr(), conn.len(), &mut c), McStatus::Ok);
        let budgets = McBudgets { seed: 3, ..Default::default() };
        let mut r = ptr::null_mut();
        assert_eq!(mc_classify(c, 3, &budgets, &mut r), McStatus::Ok);
        assert_eq!(mc_report_flag(r, McFlag::WeakMetacirculantCayley), 1);
        let json = mc_report_to_json(r);
        assert!(CStr::from_ptr(json).to_str().unwrap().contains("\"weak_metacirculant_cayley\": true"));
        mc_string_free(json);
        mc_report_free(r);
        mc_graph_free(c);
    }
}

#[test]
fn classify_rejects_wrong_prime() {
    let g = mp(9, 3, 3, 2);
    let mut r = ptr::null_mut();
    assert_eq!(unsafe { mc_classify(g, 5, ptr::null(), &mut r) }, McStatus::PreconditionFailed);
    unsafe { mc_graph_free(g) };
}

#[test]
fn scenario_by_id() {
    let id = CString::new("mp-petersen-equivalence").unwrap();
    let mut out = -1;
    assert_eq!(unsafe { mc_verify_scenario(id.as_ptr(), 0, &mut out) }, McStatus::Ok);
    assert_eq!(out, MC_SCENARIO_PASS);
    let bad = CString::new("nonsense").unwrap();
    assert_eq!(unsafe { mc_verify_scenario(bad.as_ptr(), 0, &mut out) }, McStatus::InvalidArgument);
}

#[test]
fn header_is_valid_c() {
    let header = concat!(env!("CARGO_MANIFEST_DIR"), "/include/metacirc.h");
    let text = std::fs::read_to_string(header).expect("build script writes the header");
    for f in ["mc_graph_mp", "mc_classify", "mc_report_flag", "mc_last_error", "McStatus_Ok"] {
        assert!(text.contains(f), "{f} missing from header");
    }
    // syntax-check with the system compiler when one is installed
    let Ok(out) = std::process::Command::new("cc").args(["-fsyntax-only", "-x", "c", header]).output() else {
        return;
    };
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}
