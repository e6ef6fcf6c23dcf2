//! JSON reports and the certificates embedded in them.
//!
//! Every certificate carries a `subject`: the module it speaks about, given
//! by its action matrices and an algebra role. Roles are `R` (the input
//! algebra), `corner:LABELS` (the corner at those vertices), `T:LABELS`
//! (the triangular matrix algebra of the split with those vertices on the
//! first side), each optionally suffixed with `^op`.

use std::sync::Arc;

use gdefect_core::gproj::{CmFreeVerdict, GprojRefutation, GprojVerdict, GprojWitness};
use gdefect_core::homalg::{DimValue, GorensteinVerdict, PeriodicityCertificate, Settings, Side};
use gdefect_core::modcat::Module;
use gdefect_core::quivalg::Algebra;
use serde_json::{json, Value};

use crate::load::Loaded;

pub const SCHEMA_VERSION: u32 = 1;

pub fn envelope(loaded: &Loaded, file_name: &str, command: Value, results: Value) -> Value {
    json!({
        "schema_version": SCHEMA_VERSION,
        "tool": {"name": "gdefect", "version": env!("CARGO_PKG_VERSION")},
        "command": command,
        "input": {"file": file_name, "sha256": loaded.sha256},
        "field_p": loaded.field.p(),
        "bounds": {
            "bound": loaded.settings.bound,
            "length_cap": loaded.length_cap,
            "samples": loaded.settings.samples,
        },
        "seed": loaded.settings.seed,
        "results": results,
    })
}

/// Pretty JSON with sorted keys and a trailing newline.
pub fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}

pub fn op_role(role: &str) -> String {
    match role.strip_suffix("^op") {
        Some(base) => base.to_string(),
        None => format!("{role}^op"),
    }
}

pub fn subject(role: &str, m: &Module) -> Value {
    json!({"algebra": role, "dims": m.dims(), "actions": m.actions()})
}

fn periodic(role: &str, m: &Module, claim: &str, c: &PeriodicityCertificate) -> Value {
    json!({
        "kind": "periodic",
        "claim": claim,
        "subject": subject(role, m),
        "i": c.i,
        "j": c.j,
        "witness": c.witness.blocks(),
    })
}

#[derive(Clone, Copy, PartialEq, Eq)]
pub enum DimKind {
    Projective,
    Gorenstein,
}

/// A dimension value about `m`, with a certificate for finite projective
/// dimension and for infinite values.
pub fn dim(role: &str, m: &Module, kind: DimKind, value: &DimValue) -> Value {
    match (value, kind) {
        (DimValue::Finite(n), DimKind::Projective) => json!({
            "verdict": value.verdict(),
            "certificate": {"kind": "finite_resolution", "subject": subject(role, m), "pd": n},
        }),
        (DimValue::Finite(n), DimKind::Gorenstein) => json!({
            "verdict": value.verdict(),
            "certificate": {"kind": "gpd_replay", "subject": subject(role, m), "gpd": n},
        }),
        (DimValue::Infinite(c), DimKind::Projective) => json!({
            "verdict": value.verdict(),
            "certificate": periodic(role, m, "pd_infinite", c),
        }),
        (DimValue::Infinite(c), DimKind::Gorenstein) => json!({
            "verdict": value.verdict(),
            "certificate": periodic(role, m, "gpd_infinite", c),
        }),
        (DimValue::Unknown { bound }, _) => json!({"verdict": value.verdict(), "bound": bound}),
    }
}

/// A dimension value with no certificate, for values derived from others
/// in the same report.
pub fn plain_dim(value: &DimValue) -> Value {
    match value {
        DimValue::Unknown { bound } => json!({"verdict": value.verdict(), "bound": bound}),
        DimValue::Infinite(c) => json!({"verdict": value.verdict(), "period": [c.i, c.j]}),
        DimValue::Finite(_) => json!({"verdict": value.verdict()}),
    }
}

pub fn gproj_certificate(role: &str, m: &Module, v: &GprojVerdict) -> Option<Value> {
    Some(match v {
        GprojVerdict::Yes(GprojWitness::Projective) => json!({"kind": "projective", "subject": subject(role, m)}),
        GprojVerdict::Yes(GprojWitness::Periodic(c)) => periodic(role, m, "gproj", c),
        GprojVerdict::No(GprojRefutation::ExtNonzero { degree, dim }) => json!({
            "kind": "ext_nonzero",
            "subject": subject(role, m),
            "degree": degree,
            "dim": dim,
        }),
        GprojVerdict::No(GprojRefutation::NotReflexive) => json!({"kind": "not_reflexive", "subject": subject(role, m)}),
        GprojVerdict::Unknown { .. } => return None,
    })
}

pub fn gproj(role: &str, m: &Module, v: &GprojVerdict) -> Value {
    match (gproj_certificate(role, m, v), v) {
        (Some(c), _) => json!({"verdict": v.verdict(), "certificate": c}),
        (None, GprojVerdict::Unknown { bound }) => json!({"verdict": "unknown", "bound": bound}),
        (None, _) => unreachable!("certified verdicts carry certificates"),
    }
}

/// `R` is Gorenstein: both regular modules have finite injective dimension.
/// The left one is the projective dimension of `D(R)` over `R^op`, the
/// right one that of `D(R^op)` over `R`.
pub fn gorenstein(role: &str, alg: &Arc<Algebra>, v: &GorensteinVerdict, settings: &Settings) -> Value {
    let op = Arc::new(alg.opposite());
    let op_name = op_role(role);
    let left = Module::regular(alg.clone()).dual(op.clone()).expect("opposite algebra");
    let right = Module::regular(op.clone()).dual(alg.clone()).expect("opposite algebra");
    match v {
        GorensteinVerdict::Yes { left: l, right: r } => json!({
            "verdict": "yes",
            "left_self_injective_dim": l,
            "right_self_injective_dim": r,
            "certificate": {
                "kind": "all",
                "parts": [
                    {"kind": "finite_resolution", "subject": subject(&op_name, &left), "pd": l},
                    {"kind": "finite_resolution", "subject": subject(role, &right), "pd": r},
                ],
            },
        }),
        GorensteinVerdict::No { side, certificate } => {
            let c = match side {
                Side::Left => periodic(&op_name, &left, "pd_infinite", certificate),
                Side::Right => periodic(role, &right, "pd_infinite", certificate),
            };
            json!({"verdict": "no", "side": side, "certificate": c})
        }
        GorensteinVerdict::Unknown { .. } => json!({"verdict": "unknown", "bound": settings.bound}),
    }
}

pub fn cm_free(role: &str, v: &CmFreeVerdict, settings: &Settings) -> Value {
    match v {
        CmFreeVerdict::Certified { reason } => json!({
            "verdict": "yes",
            "kind": v.kind(),
            "certificate": {"kind": "structural", "algebra": role, "reason": reason},
        }),
        CmFreeVerdict::Evidence { test_set_size } => json!({
            "verdict": "unknown",
            "kind": v.kind(),
            "test_set_size": test_set_size,
            "bound": settings.bound,
        }),
        CmFreeVerdict::Refuted { witness } => {
            let g = gdefect_core::gproj::gproj_check(witness, settings);
            json!({
                "verdict": "no",
                "kind": v.kind(),
                "certificate": {
                    "kind": "all",
                    "parts": [
                        {"kind": "not_projective", "subject": subject(role, witness)},
                        gproj_certificate(role, witness, &g).expect("test set modules are certified"),
                    ],
                },
            })
        }
    }
}

/// Conditions and conclusions serialize to `holds`/`fails`/`unknown` and
/// `holds`/`fails`/`inconclusive`.
pub fn word(s: &str) -> Value {
    Value::String(s.to_string())
}
