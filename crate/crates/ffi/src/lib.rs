//! C ABI for orientcalc.
//!
//! Every fallible call returns an [`OcStatus`]; on failure the message is
//! available from [`oc_last_error`] on the same thread. Handles are opaque and
//! owned by the caller, who releases them with the matching `*_free`.
//! Strings returned through `char **` are freed with [`oc_string_free`].
//! Integer outputs are `int64_t`; values that do not fit report
//! `OC_STATUS_OUT_OF_RANGE` (the CLI entry point has no such limit).

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use orientcalc::cli::{self, CliError, Format, JobKind};
use orientcalc::fgab::{snf_decompose, FgAbGroup, IntMatrix};
use orientcalc::index::{EulerForm, OperatorDescriptor, OperatorKind};
use orientcalc::omega::{OmegaElement, OmegaGroup, Sign};
use orientcalc::orientability::{evaluate, GroupDescriptor, Status, Verdict};
use orientcalc::skeleton::{self, SimplicialComplex};
use orientcalc::topology::ManifoldModel;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    /// Malformed input text.
    Parse = 3,
    /// Well-formed input rejected by the library.
    Domain = 4,
    OutOfRange = 5,
    Internal = 6,
}

/// Orientability verdict codes, ordered from weakest to strongest.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OcVerdictStatus {
    NotOrientable = 0,
    Unknown = 1,
    Orientable = 2,
    Canonical = 3,
}

/// A finitely generated abelian group in split form.
pub struct OcGroup(FgAbGroup);
/// An orientation group with its Euler form and Ξ.
pub struct OcOmega(OmegaGroup);
pub struct OcVerdict(Verdict);
pub struct OcComplex(SimplicialComplex);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let s = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(s).unwrap_or_default());
}

struct Fail(OcStatus, String);

impl Fail {
    fn new(status: OcStatus, msg: impl ToString) -> Self {
        Fail(status, msg.to_string())
    }
}

impl From<CliError> for Fail {
    fn from(e: CliError) -> Self {
        let status = match e {
            CliError::Domain { .. } => OcStatus::Domain,
            CliError::Parse { .. } | CliError::Io(_) => OcStatus::Parse,
        };
        Fail(status, e.to_string())
    }
}

macro_rules! domain {
    ($($t:ty),*) => {$(
        impl From<$t> for Fail {
            fn from(e: $t) -> Self {
                Fail(OcStatus::Domain, format!("{}: {e}", e.name()))
            }
        }
    )*};
}

domain!(orientcalc::fgab::FgabError, orientcalc::index::IndexError, orientcalc::omega::OmegaError, orientcalc::topology::TopologyError);

impl From<skeleton::SkeletonError> for Fail {
    fn from(e: skeleton::SkeletonError) -> Self {
        let status = if matches!(e, skeleton::SkeletonError::Parse { .. }) { OcStatus::Parse } else { OcStatus::Domain };
        Fail(status, format!("{}: {e}", e.name()))
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> OcStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => OcStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            OcStatus::Internal
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail::new(OcStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Fail::new(OcStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn slice<'a, T>(p: *const T, len: usize, what: &str) -> Result<&'a [T], Fail> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(Fail::new(OcStatus::NullPointer, format!("{what} is null")));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| Fail::new(OcStatus::NullPointer, format!("{what} is null")))
}

unsafe fn put<T>(out: *mut T, v: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail::new(OcStatus::NullPointer, "output pointer is null"));
    }
    out.write(v);
    Ok(())
}

fn small(v: &BigInt) -> Result<i64, Fail> {
    v.to_i64().ok_or_else(|| Fail::new(OcStatus::OutOfRange, format!("{v} does not fit in int64_t")))
}

fn owned_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).unwrap_or_default().into_raw()
}

/// Copies the last error message into `buf` (NUL-terminated, truncated to
/// `len`). Returns the full message length excluding the terminator.
///
/// # Safety
/// `buf` must be null or point to `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn oc_last_error(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let bytes = e.borrow();
        let bytes = bytes.as_bytes();
        if !buf.is_null() && len > 0 {
            let n = bytes.len().min(len - 1);
            ptr::copy_nonoverlapping(bytes.as_ptr().cast::<c_char>(), buf, n);
            *buf.add(n) = 0;
        }
        bytes.len()
    })
}

/// # Safety
/// `s` must be null or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn oc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Cokernel of a `rows × cols` row-major integer matrix.
///
/// # Safety
/// `entries` must point to `rows * cols` values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn oc_group_from_presentation(entries: *const i64, rows: usize, cols: usize, out: *mut *mut OcGroup) -> OcStatus {
    guard(|| {
        let n = rows.checked_mul(cols).ok_or_else(|| Fail::new(OcStatus::OutOfRange, "matrix too large"))?;
        let m = IntMatrix::from_i64(rows, cols, slice(entries, n, "entries")?)?;
        put(out, Box::into_raw(Box::new(OcGroup(snf_decompose(&m).group))))
    })
}

/// Parses `Z^2 x Z_4`, `Z × Z_2`, `0` and the like.
///
/// # Safety
/// `spec` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn oc_group_parse(spec: *const c_char, out: *mut *mut OcGroup) -> OcStatus {
    guard(|| {
        let g = cli::parse_group_spec(text(spec, "spec")?).map_err(|(col, m)| Fail::new(OcStatus::Parse, format!("column {}: {m}", col + 1)))?;
        put(out, Box::into_raw(Box::new(OcGroup(g))))
    })
}

/// # Safety
/// `g` must be a live group handle or null.
#[no_mangle]
pub unsafe extern "C" fn oc_group_free_rank(g: *const OcGroup) -> usize {
    g.as_ref().map_or(0, |g| g.0.free_rank())
}

/// Order of the torsion subgroup.
///
/// # Safety
/// `g` must be a live group handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn oc_group_torsion_order(g: *const OcGroup, out: *mut i64) -> OcStatus {
    guard(|| put(out, small(&handle(g, "group")?.0.torsion_order())?))
}

/// The group as text, e.g. `Z × Z_2 × Z_3`.
///
/// # Safety
/// `g` must be a live group handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn oc_group_describe(g: *const OcGroup, out: *mut *mut c_char) -> OcStatus {
    guard(|| put(out, owned_string(handle(g, "group")?.0.to_string())))
}

/// # Safety
/// `g` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn oc_group_free(g: *mut OcGroup) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Orientation group over `k0` (see [`oc_group_parse`]). `chi` is the
/// row-major Euler form on the free part; `xi` holds one sign (+1 or −1) per
/// 2-primary generator, or may be empty for all +1.
///
/// # Safety
/// Pointers must reference the stated lengths; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn oc_omega_new(
    k0: *const c_char,
    chi: *const i64,
    chi_len: usize,
    xi: *const i8,
    xi_len: usize,
    out: *mut *mut OcOmega,
) -> OcStatus {
    guard(|| {
        let g = cli::parse_group_spec(text(k0, "k0")?).map_err(|(col, m)| Fail::new(OcStatus::Parse, format!("column {}: {m}", col + 1)))?;
        let r = g.free_rank();
        if chi_len != r * r {
            return Err(Fail::new(OcStatus::Domain, format!("chi needs {} entries, got {chi_len}", r * r)));
        }
        let form = EulerForm::new(g.clone(), IntMatrix::from_i64(r, r, slice(chi, chi_len, "chi")?)?)?;
        let signs = slice(xi, xi_len, "xi")?
            .iter()
            .map(|&s| Sign::from_i64(s as i64).ok_or_else(|| Fail::new(OcStatus::Domain, format!("sign must be +1 or -1, got {s}"))))
            .collect::<Result<Vec<_>, _>>()?;
        let signs = if signs.is_empty() { vec![Sign::Plus; g.two_primary().len()] } else { signs };
        put(out, Box::into_raw(Box::new(OcOmega(OmegaGroup::new(form, signs)?))))
    })
}

/// Coordinates per element: free, then 2-primary, then odd.
///
/// # Safety
/// `w` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn oc_omega_coord_count(w: *const OcOmega) -> usize {
    w.as_ref().map_or(0, |w| {
        let g = w.0.k0();
        g.free_rank() + g.two_primary().len() + g.odd_orders().len()
    })
}

unsafe fn omega_element(w: &OmegaGroup, coords: *const i64, sign: i8) -> Result<OmegaElement, Fail> {
    let g = w.k0();
    let n = g.free_rank() + g.two_primary().len() + g.odd_orders().len();
    let c = slice(coords, n, "coords")?;
    let (free, rest) = c.split_at(g.free_rank());
    let (two, odd) = rest.split_at(g.two_primary().len());
    let big = |v: &[i64]| v.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
    let x = g.element_reduced(big(free), big(two), big(odd))?;
    let s = Sign::from_i64(sign as i64).ok_or_else(|| Fail::new(OcStatus::Domain, format!("sign must be +1 or -1, got {sign}")))?;
    Ok(w.element(x, s)?)
}

unsafe fn write_element(x: &OmegaElement, coords: *mut i64, sign: *mut i8) -> Result<(), Fail> {
    let all: Vec<&BigInt> = x.coords.free_coords.iter().chain(&x.coords.two_coords).chain(&x.coords.odd_coords).collect();
    let vals = all.into_iter().map(small).collect::<Result<Vec<_>, _>>()?;
    if !vals.is_empty() && coords.is_null() {
        return Err(Fail::new(OcStatus::NullPointer, "output coords is null"));
    }
    for (i, v) in vals.into_iter().enumerate() {
        coords.add(i).write(v);
    }
    put(sign, x.sign.to_i8())
}

/// `out = a · b`. Coordinate arrays hold [`oc_omega_coord_count`] entries;
/// signs are +1 or −1.
///
/// # Safety
/// Pointers must reference arrays of the coordinate count.
#[no_mangle]
pub unsafe extern "C" fn oc_omega_multiply(
    w: *const OcOmega,
    a: *const i64,
    a_sign: i8,
    b: *const i64,
    b_sign: i8,
    out: *mut i64,
    out_sign: *mut i8,
) -> OcStatus {
    guard(|| {
        let w = &handle(w, "omega")?.0;
        let x = omega_element(w, a, a_sign)?;
        let y = omega_element(w, b, b_sign)?;
        write_element(&w.multiply(&x, &y)?, out, out_sign)
    })
}

/// # Safety
/// As for [`oc_omega_multiply`].
#[no_mangle]
pub unsafe extern "C" fn oc_omega_inverse(w: *const OcOmega, a: *const i64, a_sign: i8, out: *mut i64, out_sign: *mut i8) -> OcStatus {
    guard(|| {
        let w = &handle(w, "omega")?.0;
        let x = omega_element(w, a, a_sign)?;
        write_element(&w.inverse(&x)?, out, out_sign)
    })
}

/// `out = a^n`, any integer `n`.
///
/// # Safety
/// As for [`oc_omega_multiply`].
#[no_mangle]
pub unsafe extern "C" fn oc_omega_power(w: *const OcOmega, a: *const i64, a_sign: i8, n: i64, out: *mut i64, out_sign: *mut i8) -> OcStatus {
    guard(|| {
        let w = &handle(w, "omega")?.0;
        let x = omega_element(w, a, a_sign)?;
        write_element(&w.power(&x, &BigInt::from(n))?, out, out_sign)
    })
}

/// # Safety
/// `w` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn oc_omega_free(w: *mut OcOmega) {
    if !w.is_null() {
        drop(Box::from_raw(w));
    }
}

/// Orientability verdict for `operator` on `model` with structure group
/// `group`, e.g. ("CP^2", "signature", "U(2)").
///
/// # Safety
/// Strings must be NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn oc_orientability_evaluate(
    model: *const c_char,
    operator: *const c_char,
    group: *const c_char,
    complex_structure: bool,
    out: *mut *mut OcVerdict,
) -> OcStatus {
    guard(|| {
        let model = Arc::new(ManifoldModel::parse(text(model, "model")?)?);
        let kind: OperatorKind = text(operator, "operator")?.parse()?;
        let op = OperatorDescriptor::with_structure(kind, &model, complex_structure)?;
        let gs = text(group, "group")?;
        let g: GroupDescriptor = gs.parse().map_err(|_| Fail::new(OcStatus::Parse, format!("invalid group descriptor {gs:?}")))?;
        put(out, Box::into_raw(Box::new(OcVerdict(evaluate(&op, &g)))))
    })
}

/// # Safety
/// `v` must be a live verdict handle.
#[no_mangle]
pub unsafe extern "C" fn oc_verdict_status(v: *const OcVerdict) -> OcVerdictStatus {
    match v.as_ref().map(|v| v.0.status) {
        Some(Status::NotOrientable) => OcVerdictStatus::NotOrientable,
        Some(Status::Orientable) => OcVerdictStatus::Orientable,
        Some(Status::Canonical) => OcVerdictStatus::Canonical,
        Some(Status::Unknown) | None => OcVerdictStatus::Unknown,
    }
}

/// # Safety
/// `v` must be a live verdict handle or null.
#[no_mangle]
pub unsafe extern "C" fn oc_verdict_trail_len(v: *const OcVerdict) -> usize {
    v.as_ref().map_or(0, |v| v.0.trail.len())
}

/// Rule id and group of trail entry `i`, as `rule@group`.
///
/// # Safety
/// `v` must be a live verdict handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn oc_verdict_trail_entry(v: *const OcVerdict, i: usize, out: *mut *mut c_char) -> OcStatus {
    guard(|| {
        let v = &handle(v, "verdict")?.0;
        let t = v.trail.get(i).ok_or_else(|| Fail::new(OcStatus::OutOfRange, format!("trail has {} entries", v.trail.len())))?;
        put(out, owned_string(format!("{}@{}", t.rule.id, t.group)))
    })
}

/// # Safety
/// `v` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn oc_verdict_free(v: *mut OcVerdict) {
    if !v.is_null() {
        drop(Box::from_raw(v));
    }
}

/// Parses the line-oriented complex format.
///
/// # Safety
/// `src` must be NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn oc_complex_parse(src: *const c_char, out: *mut *mut OcComplex) -> OcStatus {
    guard(|| put(out, Box::into_raw(Box::new(OcComplex(skeleton::parse_complex(text(src, "src")?)?)))))
}

/// One of the named library complexes (`octahedron`, `icosahedron`, ...).
///
/// # Safety
/// `name` must be NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn oc_complex_library(name: *const c_char, out: *mut *mut OcComplex) -> OcStatus {
    guard(|| {
        let name = text(name, "name")?;
        let k = skeleton::library()
            .into_iter()
            .find(|(n, _)| *n == name)
            .map(|(_, k)| k)
            .ok_or_else(|| Fail::new(OcStatus::Domain, format!("unknown library complex {name:?}")))?;
        put(out, Box::into_raw(Box::new(OcComplex(k))))
    })
}

/// # Safety
/// `k` must be a live complex handle or null.
#[no_mangle]
pub unsafe extern "C" fn oc_complex_dim(k: *const OcComplex) -> usize {
    k.as_ref().map_or(0, |k| k.0.dim())
}

/// Number of faces of dimension `d`.
///
/// # Safety
/// `k` must be a live complex handle or null.
#[no_mangle]
pub unsafe extern "C" fn oc_complex_face_count(k: *const OcComplex, d: usize) -> usize {
    k.as_ref().map_or(0, |k| k.0.f_vector().get(d).copied().unwrap_or(0))
}

/// Counts for the codimension-`d` dual skeleton: its simplices in the
/// barycentric subdivision, and whether it misses the primal
/// (n−d)-skeleton.
///
/// # Safety
/// `k` must be a live complex handle; outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn oc_skeleton_dual(k: *const OcComplex, d: usize, simplices: *mut usize, disjoint: *mut bool) -> OcStatus {
    guard(|| {
        let k = &handle(k, "complex")?.0;
        let sd = skeleton::barycentric_subdivision(k);
        let c = skeleton::dual_skeleton(k, &sd, d)?;
        let y = sd.embed(&skeleton::relative_skeleton(k, k.dim() - d)?);
        put(simplices, c.simplices.len())?;
        put(disjoint, c.is_disjoint_from(&y))
    })
}

/// Top cells of the prism triangulation of `k × [0,1]`.
///
/// # Safety
/// `k` must be a live complex handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn oc_prism_top_cells(k: *const OcComplex, out: *mut usize) -> OcStatus {
    guard(|| {
        let k = &handle(k, "complex")?.0;
        put(out, skeleton::prism_triangulation(k)?.complex.maximal().len())
    })
}

/// # Safety
/// `k` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn oc_complex_free(k: *mut OcComplex) {
    if !k.is_null() {
        drop(Box::from_raw(k));
    }
}

/// Runs a job config file exactly as `orient-calc <job> --config <path>` does
/// and returns the report text (structured = JSON).
///
/// # Safety
/// Strings must be NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn oc_run_config(job: *const c_char, path: *const c_char, structured: bool, out: *mut *mut c_char) -> OcStatus {
    guard(|| {
        let j = text(job, "job")?;
        let kind: JobKind = j.parse().map_err(|_| Fail::new(OcStatus::Parse, format!("unknown job {j:?}")))?;
        let report = cli::run_config(Path::new(text(path, "path")?), Some(kind))?;
        let format = if structured { Format::Structured } else { Format::Text };
        put(out, owned_string(report.emit(format)))
    })
}
