//! C ABI over `vsa-core`.
//!
//! Every fallible call returns a [`VsaStatus`]; on failure the message is
//! kept per thread and read back with [`vsa_last_error_message`]. Objects
//! cross the boundary as opaque handles owned by the caller and released
//! with the matching `_free` function. Strings returned by the library are
//! NUL-terminated and released with [`vsa_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use vsa_core::hv::{bind, bundle, permute, random_hv, similarity, HyperVector, Metric, Repr};
use vsa_core::imc::{estimate, run_workload, Architecture, MemoryConfig, TechNode, TechTable, Workload};
use vsa_core::learning::ClassifierModel;
use vsa_core::Error;

/// Result code of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VsaStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    DimensionMismatch = 3,
    Io = 4,
    Format = 5,
    Config = 6,
    UnsupportedNode = 7,
    Model = 8,
    Panic = 9,
}

/// Element representation for [`vsa_hv_random`].
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VsaRepr {
    Binary = 0,
    Bipolar = 1,
}

/// Similarity metric for [`vsa_hv_similarity`].
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VsaMetric {
    NormalizedHamming = 0,
    Cosine = 1,
    Dot = 2,
}

/// Opaque hypervector.
pub struct VsaHv(HyperVector);

/// Opaque trained classifier.
pub struct VsaModel(ClassifierModel);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> VsaStatus {
    match e {
        Error::InvalidDimension(_) | Error::Shape(_) => VsaStatus::DimensionMismatch,
        Error::Io { .. } => VsaStatus::Io,
        Error::Format(_) | Error::Json(_) | Error::Csv(_) => VsaStatus::Format,
        Error::Config(_) | Error::IncompleteTable(_) | Error::Mapping(_) => VsaStatus::Config,
        Error::UnsupportedNode(_) => VsaStatus::UnsupportedNode,
        Error::ModelState(_) | Error::DegenerateClass(_) => VsaStatus::Model,
        _ => VsaStatus::InvalidArgument,
    }
}

/// Runs `f`, converting errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), (VsaStatus, String)>) -> VsaStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            VsaStatus::Ok
        }
        Ok(Err((s, msg))) => {
            set_error(msg);
            s
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("internal panic: {msg}"));
            VsaStatus::Panic
        }
    }
}

trait Lift<T> {
    fn lift(self) -> Result<T, (VsaStatus, String)>;
}

impl<T> Lift<T> for vsa_core::Result<T> {
    fn lift(self) -> Result<T, (VsaStatus, String)> {
        self.map_err(|e| (status_of(&e), e.to_string()))
    }
}

fn null(what: &str) -> (VsaStatus, String) {
    (VsaStatus::NullPointer, format!("{what} is null"))
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, (VsaStatus, String)> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, (VsaStatus, String)> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| (VsaStatus::InvalidArgument, format!("{what} is not UTF-8")))
}

unsafe fn put<T>(out: *mut *mut T, v: T) -> Result<(), (VsaStatus, String)> {
    if out.is_null() {
        return Err(null("out"));
    }
    *out = Box::into_raw(Box::new(v));
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), (VsaStatus, String)> {
    if out.is_null() {
        return Err(null("out"));
    }
    let c = CString::new(s).map_err(|_| (VsaStatus::Format, "string contains NUL".to_string()))?;
    *out = c.into_raw();
    Ok(())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn vsa_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Copies the calling thread's last error message into `buf` (truncated,
/// always NUL-terminated when `len > 0`). Returns the full message length
/// in bytes excluding the terminator, or 0 when there is no error.
///
/// # Safety
/// `buf` must be null or point to `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn vsa_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let e = e.borrow();
        let Some(msg) = e.as_ref() else {
            if !buf.is_null() && len > 0 {
                *buf = 0;
            }
            return 0;
        };
        let bytes = msg.as_bytes();
        if !buf.is_null() && len > 0 {
            let n = bytes.len().min(len - 1);
            ptr::copy_nonoverlapping(bytes.as_ptr().cast(), buf, n);
            *buf.add(n) = 0;
        }
        bytes.len()
    })
}

/// Seeded random hypervector for `symbol` in codebook `codebook`; `repr`
/// is a [`VsaRepr`] value.
///
/// # Safety
/// String arguments must be valid NUL-terminated strings; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn vsa_hv_random(
    codebook: *const c_char,
    symbol: *const c_char,
    seed: u64,
    dim: usize,
    repr: u32,
    out: *mut *mut VsaHv,
) -> VsaStatus {
    guard(|| {
        let cb = str_arg(codebook, "codebook")?;
        let sym = str_arg(symbol, "symbol")?;
        let r = match repr {
            x if x == VsaRepr::Binary as u32 => Repr::Binary,
            x if x == VsaRepr::Bipolar as u32 => Repr::Bipolar,
            _ => return Err((VsaStatus::InvalidArgument, format!("unknown repr {repr}"))),
        };
        put(out, VsaHv(random_hv(cb, sym, seed, dim, r).lift()?))
    })
}

/// # Safety
/// `a`, `b` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn vsa_hv_bind(a: *const VsaHv, b: *const VsaHv, out: *mut *mut VsaHv) -> VsaStatus {
    guard(|| {
        let v = bind(&deref(a, "a")?.0, &deref(b, "b")?.0).lift()?;
        put(out, VsaHv(v))
    })
}

/// Majority bundle of `n` vectors; ties are broken by `tie_seed`.
///
/// # Safety
/// `items` must point to `n` live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn vsa_hv_bundle(
    items: *const *const VsaHv,
    n: usize,
    tie_seed: u64,
    out: *mut *mut VsaHv,
) -> VsaStatus {
    guard(|| {
        if items.is_null() {
            return Err(null("items"));
        }
        let hvs = std::slice::from_raw_parts(items, n)
            .iter()
            .map(|&p| deref(p, "items[i]").map(|h| h.0.clone()))
            .collect::<Result<Vec<_>, _>>()?;
        put(out, VsaHv(bundle(&hvs, tie_seed).lift()?.binarized))
    })
}

/// Cyclic shift by `k` positions (negative shifts left).
///
/// # Safety
/// `a` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn vsa_hv_permute(a: *const VsaHv, k: i64, out: *mut *mut VsaHv) -> VsaStatus {
    guard(|| put(out, VsaHv(permute(&deref(a, "a")?.0, k))))
}

/// Similarity under `metric`, a [`VsaMetric`] value.
///
/// # Safety
/// `a`, `b` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn vsa_hv_similarity(
    a: *const VsaHv,
    b: *const VsaHv,
    metric: u32,
    out: *mut f64,
) -> VsaStatus {
    guard(|| {
        let m = match metric {
            x if x == VsaMetric::NormalizedHamming as u32 => Metric::NormalizedHamming,
            x if x == VsaMetric::Cosine as u32 => Metric::Cosine,
            x if x == VsaMetric::Dot as u32 => Metric::Dot,
            _ => return Err((VsaStatus::InvalidArgument, format!("unknown metric {metric}"))),
        };
        let s = similarity(&deref(a, "a")?.0, &deref(b, "b")?.0, m).lift()?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = s.value;
        Ok(())
    })
}

/// Dimension of `a`, or 0 for a null handle.
///
/// # Safety
/// `a` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn vsa_hv_dim(a: *const VsaHv) -> usize {
    a.as_ref().map_or(0, |h| h.0.dim())
}

/// Element `i` as a number (0/1 for binary, ±1 for bipolar).
///
/// # Safety
/// `a` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn vsa_hv_get(a: *const VsaHv, i: usize, out: *mut i64) -> VsaStatus {
    guard(|| {
        let h = deref(a, "a")?;
        if i >= h.0.dim() {
            return Err((VsaStatus::InvalidArgument, format!("index {i} out of range {}", h.0.dim())));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        *out = h.0.get(i);
        Ok(())
    })
}

/// # Safety
/// `a` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn vsa_hv_free(a: *mut VsaHv) {
    if !a.is_null() {
        drop(Box::from_raw(a));
    }
}

/// Loads a model saved by `vsa train` (the stem without extension).
///
/// # Safety
/// `stem` must be a NUL-terminated path; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn vsa_model_load(stem: *const c_char, out: *mut *mut VsaModel) -> VsaStatus {
    guard(|| {
        let p = str_arg(stem, "stem")?;
        put(out, VsaModel(ClassifierModel::load(Path::new(p)).lift()?))
    })
}

/// Predicts the class label of `n` raw features.
///
/// # Safety
/// `model` must be live; `features` must point to `n` doubles; `label`
/// must be writable. Free the label with [`vsa_string_free`].
#[no_mangle]
pub unsafe extern "C" fn vsa_model_predict(
    model: *const VsaModel,
    features: *const f64,
    n: usize,
    label: *mut *mut c_char,
) -> VsaStatus {
    guard(|| {
        let m = deref(model, "model")?;
        if features.is_null() && n > 0 {
            return Err(null("features"));
        }
        let x = if n == 0 { &[][..] } else { std::slice::from_raw_parts(features, n) };
        put_string(label, m.0.predict(x).lift()?)
    })
}

/// # Safety
/// `model` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn vsa_model_free(model: *mut VsaModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Runs `workload` (e.g. `"perception"`) at dimension `dim`, maps it onto
/// the template architecture with `memory` (e.g. `"MRAM/SRAM"`) at `node`
/// (`"65"`, `"40_45"`, `"22"`) using the shipped technology table, and
/// returns the cost report as JSON.
///
/// # Safety
/// String arguments must be NUL-terminated; `json` must be writable. Free
/// the result with [`vsa_string_free`].
#[no_mangle]
pub unsafe extern "C" fn vsa_cost_estimate(
    workload: *const c_char,
    memory: *const c_char,
    node: *const c_char,
    dim: usize,
    seed: u64,
    json: *mut *mut c_char,
) -> VsaStatus {
    guard(|| {
        let w = Workload::by_name(str_arg(workload, "workload")?).lift()?.with_dim(dim);
        let mem = MemoryConfig::parse(str_arg(memory, "memory")?).lift()?;
        let node: TechNode = str_arg(node, "node")?.parse().lift()?;
        let techs = TechTable::builtin().at_node(node).lift()?;
        let run = run_workload(&w, seed).lift()?;
        let report = estimate(&run, &Architecture::template(mem), &techs).lift()?;
        put_string(json, serde_json::to_string(&report).map_err(|e| (VsaStatus::Format, e.to_string()))?)
    })
}

/// # Safety
/// `s` must be null or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn vsa_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
