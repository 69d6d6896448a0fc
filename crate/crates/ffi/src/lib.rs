//! C ABI over wedgekit. Objects are opaque handles released with their
//! `_free` function; every call returns a `WkStatus` and leaves a message
//! for `wk_last_error` on failure.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use wedgekit::dataset::{Dataset, DatasetError};
use wedgekit::ged::{self, ArrangementDeletion, CostModel, ExactOptions, GedError};
use wedgekit::graph::{CuneiformGraph, GlyphType, GraphError, WedgeSpec};
use wedgekit::nn::{checkpoint, NetError, SplineNet};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WkStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    MalformedWedge = 3,
    NonFinite = 4,
    Io = 5,
    Parse = 6,
    SizeBound = 7,
    Infeasible = 8,
    Internal = 9,
    Panic = 10,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WkMethod {
    Apx1 = 0,
    Apx2 = 1,
    Exact = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WkGlyph {
    Vertical = 0,
    Horizontal = 1,
    Winkelhaken = 2,
}

/// One wedge: a `WkGlyph` value and points as `x, y` pairs in depth, tail,
/// right, left order.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct WkWedge {
    pub glyph: u32,
    pub points: [f64; 8],
}

#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct WkCostModel {
    pub alpha: f64,
    pub del_cost: f64,
    /// Non-zero makes arrangement edges lost with a wedge free.
    pub free_arrangement_deletion: u8,
    /// Combined wedge bound for the exact method.
    pub max_wedges: usize,
}

pub struct WkGraph(CuneiformGraph);
pub struct WkDataset(Dataset);
pub struct WkModel(SplineNet);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let s = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(s).unwrap_or_default());
}

struct Fail(WkStatus, String);

type FfiResult = Result<(), Fail>;

fn fail(status: WkStatus, msg: impl Into<String>) -> Fail {
    Fail(status, msg.into())
}

impl From<GraphError> for Fail {
    fn from(e: GraphError) -> Self {
        let status = match e {
            GraphError::NonFiniteCoordinate { .. } => WkStatus::NonFinite,
            _ => WkStatus::MalformedWedge,
        };
        Fail(status, e.to_string())
    }
}

impl From<GedError> for Fail {
    fn from(e: GedError) -> Self {
        let status = match &e {
            GedError::SizeBoundExceeded { .. } => WkStatus::SizeBound,
            GedError::InvalidCostModel => WkStatus::InvalidArgument,
            GedError::Assignment(_) => WkStatus::Infeasible,
            GedError::Pair { .. } => WkStatus::Internal,
        };
        Fail(status, e.to_string())
    }
}

impl From<DatasetError> for Fail {
    fn from(e: DatasetError) -> Self {
        let status = match e {
            DatasetError::MissingFile(_) | DatasetError::Io(_) => WkStatus::Io,
            _ => WkStatus::Parse,
        };
        Fail(status, e.to_string())
    }
}

impl From<NetError> for Fail {
    fn from(e: NetError) -> Self {
        let status = match e {
            NetError::Io(_) => WkStatus::Io,
            NetError::Checkpoint(_) => WkStatus::Parse,
            _ => WkStatus::InvalidArgument,
        };
        Fail(status, e.to_string())
    }
}

fn guard(f: impl FnOnce() -> FfiResult) -> WkStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => WkStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("panic inside wedgekit");
            WkStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| fail(WkStatus::NullPointer, format!("{what} is null")))
}

unsafe fn out_ptr<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or_else(|| fail(WkStatus::NullPointer, format!("{what} is null")))
}

unsafe fn string(p: *const c_char, what: &str) -> Result<String, Fail> {
    if p.is_null() {
        return Err(fail(WkStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map(str::to_owned)
        .map_err(|_| fail(WkStatus::InvalidArgument, format!("{what} is not UTF-8")))
}

/// Message of the last failed call on this thread; valid until the next call.
#[no_mangle]
pub extern "C" fn wk_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version, a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn wk_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

#[no_mangle]
pub extern "C" fn wk_cost_model_default() -> WkCostModel {
    let cm = CostModel::default();
    WkCostModel {
        alpha: cm.alpha,
        del_cost: cm.del_cost,
        free_arrangement_deletion: 0,
        max_wedges: ged::DEFAULT_MAX_WEDGES,
    }
}

/// Builds a validated graph from `count` wedges.
///
/// # Safety
/// `id` is a NUL-terminated string, `wedges` points to `count` wedges (may be
/// null when `count` is 0) and `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn wk_graph_from_wedges(
    id: *const c_char,
    label: usize,
    wedges: *const WkWedge,
    count: usize,
    out: *mut *mut WkGraph,
) -> WkStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = ptr::null_mut();
        let id = string(id, "id")?;
        let ws: &[WkWedge] = if count == 0 {
            &[]
        } else if wedges.is_null() {
            return Err(fail(WkStatus::NullPointer, "wedges is null"));
        } else {
            std::slice::from_raw_parts(wedges, count)
        };
        let specs: Vec<WedgeSpec> = ws
            .iter()
            .enumerate()
            .map(|(i, w)| {
                let glyph = match w.glyph {
                    g if g == WkGlyph::Vertical as u32 => GlyphType::Vertical,
                    g if g == WkGlyph::Horizontal as u32 => GlyphType::Horizontal,
                    g if g == WkGlyph::Winkelhaken as u32 => GlyphType::Winkelhaken,
                    g => return Err(fail(WkStatus::MalformedWedge, format!("wedge {i}: unknown glyph {g}"))),
                };
                let p = w.points;
                Ok(WedgeSpec::new(glyph, [[p[0], p[1]], [p[2], p[3]], [p[4], p[5]], [p[6], p[7]]]))
            })
            .collect::<Result<_, _>>()?;
        let g = CuneiformGraph::build_from_wedges(id, label, &specs)?;
        *out = Box::into_raw(Box::new(WkGraph(g)));
        Ok(())
    })
}

/// # Safety
/// `g` is null or a graph from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn wk_graph_free(g: *mut WkGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// # Safety
/// `g` is a live graph and `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn wk_graph_vertex_count(g: *const WkGraph, out: *mut usize) -> WkStatus {
    guard(|| {
        *out_ptr(out, "out")? = deref(g, "graph")?.0.vertices().len();
        Ok(())
    })
}

/// # Safety
/// `g` is a live graph and `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn wk_graph_edge_count(g: *const WkGraph, out: *mut usize) -> WkStatus {
    guard(|| {
        *out_ptr(out, "out")? = deref(g, "graph")?.0.edges().len();
        Ok(())
    })
}

/// # Safety
/// `g` is a live graph and `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn wk_graph_label(g: *const WkGraph, out: *mut usize) -> WkStatus {
    guard(|| {
        *out_ptr(out, "out")? = deref(g, "graph")?.0.label;
        Ok(())
    })
}

/// Loads a benchmark directory or JSON file.
///
/// # Safety
/// `path` is a NUL-terminated string and `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn wk_dataset_load(path: *const c_char, out: *mut *mut WkDataset) -> WkStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = ptr::null_mut();
        let path = string(path, "path")?;
        let d = Dataset::load(Path::new(&path))?;
        *out = Box::into_raw(Box::new(WkDataset(d)));
        Ok(())
    })
}

/// # Safety
/// `d` is null or a dataset from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn wk_dataset_free(d: *mut WkDataset) {
    if !d.is_null() {
        drop(Box::from_raw(d));
    }
}

/// # Safety
/// `d` is a live dataset and `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn wk_dataset_len(d: *const WkDataset, out: *mut usize) -> WkStatus {
    guard(|| {
        *out_ptr(out, "out")? = deref(d, "dataset")?.0.len();
        Ok(())
    })
}

/// Copies graph `index` into a new handle owned by the caller.
///
/// # Safety
/// `d` is a live dataset and `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn wk_dataset_get_graph(d: *const WkDataset, index: usize, out: *mut *mut WkGraph) -> WkStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = ptr::null_mut();
        let d = &deref(d, "dataset")?.0;
        let g = d.graphs.get(index).ok_or_else(|| {
            fail(WkStatus::InvalidArgument, format!("index {index} out of range for {} graphs", d.len()))
        })?;
        *out = Box::into_raw(Box::new(WkGraph(g.clone())));
        Ok(())
    })
}

/// Edit distance from `g` to `h` with a `WkMethod` value. A null `cost` uses
/// the defaults.
///
/// # Safety
/// `g` and `h` are live graphs, `cost` is null or readable, `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn wk_distance(
    g: *const WkGraph,
    h: *const WkGraph,
    method: u32,
    cost: *const WkCostModel,
    out: *mut f64,
) -> WkStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let (g, h) = (&deref(g, "g")?.0, &deref(h, "h")?.0);
        let c = if cost.is_null() { wk_cost_model_default() } else { *cost };
        let cm = CostModel {
            alpha: c.alpha,
            del_cost: c.del_cost,
            arrangement_deletion: if c.free_arrangement_deletion != 0 {
                ArrangementDeletion::Free
            } else {
                ArrangementDeletion::PerEdge
            },
        };
        if !cm.is_valid() {
            return Err(GedError::InvalidCostModel.into());
        }
        let opts = ExactOptions { max_wedges: c.max_wedges };
        *out = match method {
            m if m == WkMethod::Apx1 as u32 => ged::apx1(g, h, &cm)?,
            m if m == WkMethod::Apx2 as u32 => ged::apx2(g, h, &cm)?.0,
            m if m == WkMethod::Exact as u32 => ged::exact(g, h, &cm, &opts)?.0,
            m => return Err(fail(WkStatus::InvalidArgument, format!("unknown method {m}"))),
        };
        Ok(())
    })
}

/// # Safety
/// `path` is a NUL-terminated string and `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn wk_model_load(path: *const c_char, out: *mut *mut WkModel) -> WkStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = ptr::null_mut();
        let path = string(path, "path")?;
        let net = checkpoint::load(Path::new(&path))?;
        *out = Box::into_raw(Box::new(WkModel(net)));
        Ok(())
    })
}

/// # Safety
/// `m` is null or a model from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn wk_model_free(m: *mut WkModel) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// # Safety
/// `m` is a live model and `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn wk_model_classes(m: *const WkModel, out: *mut usize) -> WkStatus {
    guard(|| {
        *out_ptr(out, "out")? = deref(m, "model")?.0.config.classes;
        Ok(())
    })
}

/// Class probabilities for `g` written to `probs` (`len` must equal the class
/// count) and the argmax class to `class_out`. Either output may be null.
///
/// # Safety
/// `m` and `g` are live, `probs` is null or has room for `len` values.
#[no_mangle]
pub unsafe extern "C" fn wk_model_predict(
    m: *const WkModel,
    g: *const WkGraph,
    probs: *mut f64,
    len: usize,
    class_out: *mut usize,
) -> WkStatus {
    guard(|| {
        let net = &deref(m, "model")?.0;
        let g = &deref(g, "graph")?.0;
        if !probs.is_null() && len != net.config.classes {
            return Err(fail(
                WkStatus::InvalidArgument,
                format!("probability buffer holds {len}, model has {} classes", net.config.classes),
            ));
        }
        let p = net.predict(std::slice::from_ref(g))?.remove(0);
        if !probs.is_null() {
            std::slice::from_raw_parts_mut(probs, len).copy_from_slice(&p.probabilities);
        }
        if let Some(c) = class_out.as_mut() {
            *c = p.class;
        }
        Ok(())
    })
}
