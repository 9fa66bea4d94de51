//! C ABI over `metacirc`. Graphs and classification reports cross the
//! boundary as opaque handles; every call returns an [`McStatus`], and the
//! message of the last failure on the calling thread is available from
//! [`mc_last_error`].

use metacirc::analysis::{classify, ClassificationReport, ClassifyOptions, SearchOptions};
use metacirc::aut::are_isomorphic;
use metacirc::graph::{circulant, generalized_petersen, multilayer_generalized_petersen, Graph, MPParams};
use metacirc::scenarios::{run_scenario, Status};
use metacirc::Error;
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum McStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    ParseError = 3,
    CapExceeded = 4,
    BudgetExceeded = 5,
    PreconditionFailed = 6,
    Panic = 7,
}

/// Flags readable from a report.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum McFlag {
    VertexTransitive = 0,
    Cayley = 1,
    WeakMetacirculant = 2,
    SplitWeakMetacirculant = 3,
    Metacirculant = 4,
    WeakMetacirculantCayley = 5,
}

/// 1 = true, 0 = false, -1 = undecided within the budgets.
pub const MC_UNDECIDED: i32 = -1;

/// Scenario outcomes reported by [`mc_verify_scenario`].
pub const MC_SCENARIO_PASS: i32 = 0;
pub const MC_SCENARIO_FAIL: i32 = 1;
pub const MC_SCENARIO_INCONCLUSIVE: i32 = 2;

pub struct McGraph(Graph);

pub struct McReport(ClassificationReport);

/// Budgets for [`mc_classify`]; zero fields take the library defaults.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct McBudgets {
    pub max_group_order: u64,
    pub max_aut_degree: usize,
    pub search_nodes: u64,
    pub seed: u64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> McStatus {
    match e {
        Error::Parse(_) => McStatus::ParseError,
        Error::CapExceeded { .. } | Error::BoundExceeded { .. } | Error::OrderOverflow => McStatus::CapExceeded,
        Error::SearchBudgetExceeded { .. } => McStatus::BudgetExceeded,
        Error::Precondition(_) | Error::Intransitive | Error::NotAPGroup { .. } => McStatus::PreconditionFailed,
        _ => McStatus::InvalidArgument,
    }
}

/// Runs `f`, turning errors and panics into a status plus a stored message.
fn guard(f: impl FnOnce() -> Result<(), (McStatus, String)>) -> McStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => McStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            McStatus::Panic
        }
    }
}

fn lib(e: Error) -> (McStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (McStatus, String) {
    (McStatus::NullPointer, format!("{what} is null"))
}

unsafe fn put<T>(out: *mut *mut T, value: T) -> Result<(), (McStatus, String)> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

unsafe fn graph_ref<'a>(g: *const McGraph) -> Result<&'a Graph, (McStatus, String)> {
    g.as_ref().map(|g| &g.0).ok_or_else(|| null("graph handle"))
}

fn to_c_string(s: String) -> *mut c_char {
    CString::new(s).map(CString::into_raw).unwrap_or(std::ptr::null_mut())
}

/// Message of the last failed call on this thread, or null. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn mc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(std::ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn mc_graph_mp(m: u64, n: u64, s: u64, t: u64, out: *mut *mut McGraph) -> McStatus {
    guard(|| {
        let g = MPParams::new(m, n, s, t).and_then(multilayer_generalized_petersen).map_err(lib)?;
        put(out, McGraph(g))
    })
}

/// # Safety
/// `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn mc_graph_petersen(n: usize, t: usize, out: *mut *mut McGraph) -> McStatus {
    guard(|| put(out, McGraph(generalized_petersen(n, t).map_err(lib)?)))
}

/// # Safety
/// `connection` must point to `len` readable values; `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn mc_graph_circulant(
    n: usize,
    connection: *const usize,
    len: usize,
    out: *mut *mut McGraph,
) -> McStatus {
    guard(|| {
        if connection.is_null() && len > 0 {
            return Err(null("connection"));
        }
        let conn = if len == 0 { &[][..] } else { std::slice::from_raw_parts(connection, len) };
        put(out, McGraph(circulant(n, conn).map_err(lib)?))
    })
}

/// Parses the `n <V> m <E>` edge-list format.
///
/// # Safety
/// `text` must be a nul-terminated string; `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn mc_graph_parse_edge_list(text: *const c_char, out: *mut *mut McGraph) -> McStatus {
    guard(|| {
        if text.is_null() {
            return Err(null("text"));
        }
        let s = CStr::from_ptr(text).to_str().map_err(|e| (McStatus::ParseError, e.to_string()))?;
        put(out, McGraph(Graph::parse_edge_list(s).map_err(lib)?))
    })
}

/// # Safety
/// `g` must be null or a handle from this library.
#[no_mangle]
pub unsafe extern "C" fn mc_graph_order(g: *const McGraph) -> usize {
    g.as_ref().map_or(0, |g| g.0.order())
}

/// # Safety
/// `g` must be null or a handle from this library.
#[no_mangle]
pub unsafe extern "C" fn mc_graph_edge_count(g: *const McGraph) -> usize {
    g.as_ref().map_or(0, |g| g.0.edge_count())
}

/// The graph in edge-list form; release with [`mc_string_free`]. Null on error.
///
/// # Safety
/// `g` must be null or a handle from this library.
#[no_mangle]
pub unsafe extern "C" fn mc_graph_to_edge_list(g: *const McGraph) -> *mut c_char {
    match g.as_ref() {
        Some(g) => to_c_string(g.0.to_edge_list()),
        None => {
            set_error("graph handle is null".into());
            std::ptr::null_mut()
        }
    }
}

/// # Safety
/// `g` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mc_graph_free(g: *mut McGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Writes 1 to `out` when the graphs are isomorphic, else 0.
///
/// # Safety
/// `a` and `b` must be graph handles; `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn mc_graphs_isomorphic(
    a: *const McGraph,
    b: *const McGraph,
    bound: usize,
    out: *mut i32,
) -> McStatus {
    guard(|| {
        let (a, b) = (graph_ref(a)?, graph_ref(b)?);
        if out.is_null() {
            return Err(null("output pointer"));
        }
        *out = are_isomorphic(a, b, bound).map_err(lib)?.is_some() as i32;
        Ok(())
    })
}

fn options(b: Option<&McBudgets>) -> ClassifyOptions {
    let mut opts = ClassifyOptions::default();
    let Some(b) = b else { return opts };
    if b.max_group_order > 0 {
        opts.search.max_group_order = b.max_group_order as u128;
    }
    if b.max_aut_degree > 0 {
        opts.max_aut_degree = b.max_aut_degree;
    }
    if b.search_nodes > 0 {
        opts.search.search_nodes = b.search_nodes;
    }
    opts.search = SearchOptions { seed: b.seed, ..opts.search };
    opts
}

/// Classifies `g`; `p = 0` infers the prime from the order. `budgets` may
/// be null for the defaults.
///
/// # Safety
/// `g` must be a graph handle, `budgets` null or readable, `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn mc_classify(
    g: *const McGraph,
    p: u64,
    budgets: *const McBudgets,
    out: *mut *mut McReport,
) -> McStatus {
    guard(|| {
        let g = graph_ref(g)?;
        let report = classify(g, (p > 0).then_some(p), &options(budgets.as_ref())).map_err(lib)?;
        put(out, McReport(report))
    })
}

/// 1, 0, or [`MC_UNDECIDED`]; [`MC_UNDECIDED`] also for a null report.
///
/// # Safety
/// `r` must be null or a report handle.
#[no_mangle]
pub unsafe extern "C" fn mc_report_flag(r: *const McReport, flag: McFlag) -> i32 {
    let Some(r) = r.as_ref() else { return MC_UNDECIDED };
    let f = &r.0.flags;
    let v = match flag {
        McFlag::VertexTransitive => f.vertex_transitive,
        McFlag::Cayley => f.cayley,
        McFlag::WeakMetacirculant => f.weak_metacirculant,
        McFlag::SplitWeakMetacirculant => f.split_weak_metacirculant,
        McFlag::Metacirculant => f.metacirculant,
        McFlag::WeakMetacirculantCayley => f.weak_metacirculant_cayley,
    };
    v.map_or(MC_UNDECIDED, |b| b as i32)
}

/// The report as JSON; release with [`mc_string_free`].
///
/// # Safety
/// `r` must be null or a report handle.
#[no_mangle]
pub unsafe extern "C" fn mc_report_to_json(r: *const McReport) -> *mut c_char {
    match r.as_ref() {
        Some(r) => to_c_string(r.0.to_json()),
        None => {
            set_error("report handle is null".into());
            std::ptr::null_mut()
        }
    }
}

/// # Safety
/// `r` must be null or a report handle, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mc_report_free(r: *mut McReport) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// Runs one verification scenario with default budgets and the given seed;
/// writes one of the `MC_SCENARIO_*` values to `out`.
///
/// # Safety
/// `id` must be a nul-terminated string; `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn mc_verify_scenario(id: *const c_char, seed: u64, out: *mut i32) -> McStatus {
    guard(|| {
        if id.is_null() {
            return Err(null("id"));
        }
        if out.is_null() {
            return Err(null("output pointer"));
        }
        let id = CStr::from_ptr(id).to_str().map_err(|e| (McStatus::ParseError, e.to_string()))?;
        let opts = metacirc::scenarios::VerifyOptions { seed, ..Default::default() };
        let r = run_scenario(id, &opts).map_err(lib)?;
        *out = match r.status {
            Status::Pass => MC_SCENARIO_PASS,
            Status::Fail => MC_SCENARIO_FAIL,
            Status::Inconclusive => MC_SCENARIO_INCONCLUSIVE,
        };
        Ok(())
    })
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
