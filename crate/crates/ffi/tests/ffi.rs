use std::ffi::{c_char, CStr, CString};
use std::ptr;

use emzv::doc::{from_json, DecompositionDoc, LieRelationsDoc};
use emzv::EPoly;
use emzv_ffi::*;

fn take(s: *mut c_char) -> String {
    let out = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
    unsafe { emzv_string_free(s) };
    out
}

fn last_error() -> String {
    let p = emzv_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned()
}

struct Ctx(*mut EmzvContext);

impl Ctx {
    fn new() -> Self {
        let mut p = ptr::null_mut();
        assert_eq!(unsafe { emzv_context_new(&mut p) }, EmzvStatus::Ok);
        Ctx(p)
    }
}

impl Drop for Ctx {
    fn drop(&mut self) {
        unsafe { emzv_context_free(self.0) };
    }
}

#[test]
fn decompose_round_trip() {
    let ctx = Ctx::new();
    let idx = CString::new("0,1,0,0").unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { emzv_decompose(ctx.0, idx.as_ptr(), &mut out) }, EmzvStatus::Ok);
    assert!(emzv_last_error().is_null());
    let d: DecompositionDoc = from_json(&take(out)).unwrap();
    let d = d.to_decomposition().unwrap();
    assert_eq!(d.epoly, EPoly::parse("-3*pi*z3 + 6*pi*e(0,0,4) + 1/40*pi*e(0,0,0)").unwrap());

    let mut g = ptr::null_mut();
    assert_eq!(unsafe { emzv_gamma(ctx.0, idx.as_ptr(), &mut g) }, EmzvStatus::Ok);
    assert_eq!(take(g), "-3*pi*z3");
}

#[test]
fn qexp_document() {
    let ctx = Ctx::new();
    let idx = CString::new("3,0").unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { emzv_qexp(ctx.0, idx.as_ptr(), 5, &mut out) }, EmzvStatus::Ok);
    assert!(take(out).contains("qexp/v1"));
}

#[test]
fn error_codes() {
    let ctx = Ctx::new();
    let mut out = ptr::null_mut();
    let big = CString::new("5,5,5").unwrap();
    assert_eq!(unsafe { emzv_decompose(ctx.0, big.as_ptr(), &mut out) }, EmzvStatus::TableOverflow);
    assert!(out.is_null());
    assert!(last_error().starts_with("TableOverflow"));

    let bad = CString::new("1,x").unwrap();
    assert_eq!(unsafe { emzv_decompose(ctx.0, bad.as_ptr(), &mut out) }, EmzvStatus::ParseError);
    assert_eq!(unsafe { emzv_decompose(ptr::null(), bad.as_ptr(), &mut out) }, EmzvStatus::NullArgument);
    assert_eq!(unsafe { emzv_decompose(ctx.0, ptr::null(), &mut out) }, EmzvStatus::NullArgument);
    let not_utf8 = [0xffu8, 0];
    assert_eq!(unsafe { emzv_decompose(ctx.0, not_utf8.as_ptr().cast(), &mut out) }, EmzvStatus::InvalidUtf8);

    let name = unsafe { CStr::from_ptr(emzv_status_name(EmzvStatus::TableOverflow)) };
    assert_eq!(name.to_str().unwrap(), "TableOverflow");

    let missing = CString::new("/nonexistent/table.toml").unwrap();
    let mut c = ptr::null_mut();
    assert_ne!(unsafe { emzv_context_from_table(missing.as_ptr(), &mut c) }, EmzvStatus::Ok);
    assert!(c.is_null());
}

#[test]
fn string_free_queries() {
    let ctx = Ctx::new();
    let mut w = 0u32;
    assert_eq!(unsafe { emzv_table_max_weight(ctx.0, &mut w) }, EmzvStatus::Ok);
    assert_eq!(w, 8);

    let mut flag = -1;
    let good = CString::new("e(10,4) + e(4,10)").unwrap();
    let bad = CString::new("e(10,4)").unwrap();
    assert_eq!(unsafe { emzv_membership(good.as_ptr(), 16, &mut flag) }, EmzvStatus::Ok);
    assert_eq!(flag, 1);
    assert_eq!(unsafe { emzv_membership(bad.as_ptr(), 16, &mut flag) }, EmzvStatus::Ok);
    assert_eq!(flag, 0);

    let fourier = CString::new("e(0,4) + 1/240*e(0,0)").unwrap();
    assert_eq!(unsafe { emzv_fourier_check(fourier.as_ptr(), 10, &mut flag) }, EmzvStatus::Ok);
    assert_eq!(flag, 1);
    let not = CString::new("e(0,0)").unwrap();
    assert_eq!(unsafe { emzv_fourier_check(not.as_ptr(), 10, &mut flag) }, EmzvStatus::Ok);
    assert_eq!(flag, 0);
}

#[test]
fn derlie_relations_weight_14() {
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { emzv_derlie_relations(14, 2, 2, 16, &mut out) }, EmzvStatus::Ok);
    let d: LieRelationsDoc = from_json(&take(out)).unwrap();
    // [e2,e12] vanishes on its own; the other relation is Ihara-Takao
    assert_eq!(d.candidates, ["[e2,e12]", "[e4,e10]", "[e6,e8]"]);
    assert_eq!(d.kernel, [["1", "0", "0"], ["0", "1", "-3"]]);
}

#[test]
fn header_is_generated() {
    let h = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/emzv.h")).unwrap();
    for name in ["EmzvContext", "EMZV_STATUS_TABLE_OVERFLOW", "emzv_decompose", "emzv_last_error", "emzv_string_free"] {
        assert!(h.contains(name), "{name}");
    }
}
