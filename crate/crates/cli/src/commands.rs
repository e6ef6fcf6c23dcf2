//! The analysis pipelines behind each subcommand. Each returns the
//! `results` object of a report.

use std::sync::Arc;

use gdefect_core::gproj::{cm_free_check, gproj_test_set, ExtProfile};
use gdefect_core::homalg::{gorenstein_check, is_self_injective, pd, DimValue, Outcome, Settings};
use gdefect_core::modcat::{random_module, Module};
use gdefect_core::quivalg::Algebra;
use gdefect_core::schur::{schur_report, schur_s, schur_t, DimCondition, Idempotent, TorVanishing};
use gdefect_core::trimat::{
    check_at_a, check_at_b, compatibility_check, left_gpd_check, random_triple, right_gpd_check,
    triple_gproj_check, CompatibilityReport, CornerReport, TriMat, TriMatError,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

use crate::load::Loaded;
use crate::report::{self, subject, DimKind};
use crate::roles::{corner_role, trimat_role};
use crate::CliError;

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

/// Structural data and the standard homological checks of an algebra.
pub fn algebra_summary(role: &str, alg: &Arc<Algebra>, settings: &Settings) -> Value {
    let op = Arc::new(alg.opposite());
    let radical_profile: Option<Vec<usize>> = alg.radical_powers().map(|p| p.iter().map(|s| s.dim()).collect());
    let mut pds = Vec::new();
    let simples: Vec<Value> = Module::simples(alg)
        .iter()
        .enumerate()
        .map(|(v, s)| {
            let profile = ExtProfile::new(s, settings);
            let pd_value = gdefect_core::homalg::pd_of(&profile.resolution);
            pds.push((s.clone(), pd_value.clone()));
            json!({
                "vertex": alg.vertex_labels()[v],
                "pd": report::dim(role, s, DimKind::Projective, &pd_value),
                "gproj": report::gproj(role, s, &gdefect_core::gproj::verdict_from_profile(s, &profile, settings)),
            })
        })
        .collect();
    let projectives: Vec<Value> = (0..alg.num_vertices())
        .map(|v| {
            let p = Module::projective(alg.clone(), v);
            json!({"vertex": alg.vertex_labels()[v], "dim": p.dim(), "dims": p.dims()})
        })
        .collect();
    json!({
        "role": role,
        "dim": alg.dim(),
        "vertices": alg.vertex_labels(),
        "basis": alg.labels(),
        "radical_profile": radical_profile,
        "loewy_length": alg.loewy_length(),
        "semisimple": alg.is_semisimple(),
        "radical_square_zero": alg.is_radical_square_zero(),
        "connected": alg.is_connected(),
        "self_injective": yes_no(is_self_injective(alg, &op)),
        "simples": simples,
        "projectives": projectives,
        "global_dim": global_dim(role, &pds),
        "gorenstein": report::gorenstein(role, alg, &gorenstein_check(alg, &op, settings), settings),
        "cm_free": report::cm_free(role, &cm_free_check(alg, settings), settings),
    })
}

/// The global dimension as the supremum over the simples: a finite value
/// is certified by every simple's resolution, an infinite one by a
/// periodic simple.
fn global_dim(role: &str, pds: &[(Module, DimValue)]) -> Value {
    let value = pds.iter().map(|(_, d)| d.clone()).fold(DimValue::Finite(0), DimValue::sup);
    let mut out = report::plain_dim(&value);
    match &value {
        DimValue::Finite(_) => {
            let parts: Vec<Value> = pds
                .iter()
                .map(|(s, d)| report::dim(role, s, DimKind::Projective, d)["certificate"].clone())
                .collect();
            out["certificate"] = json!({"kind": "all", "parts": parts});
        }
        DimValue::Infinite(_) => {
            if let Some((s, d)) = pds.iter().find(|(_, d)| matches!(d, DimValue::Infinite(_))) {
                out["certificate"] = report::dim(role, s, DimKind::Projective, d)["certificate"].clone();
            }
        }
        DimValue::Unknown { .. } => {}
    }
    out
}

pub fn module_summary(role: &str, m: &Module, settings: &Settings) -> Value {
    let profile = ExtProfile::new(m, settings);
    let pd_value = gdefect_core::homalg::pd_of(&profile.resolution);
    let periodicity = match &profile.resolution.outcome {
        Outcome::Periodic(c) => json!({"i": c.i, "j": c.j, "period": c.period()}),
        _ => Value::Null,
    };
    json!({
        "dim": m.dim(),
        "dims": m.dims(),
        "pd": report::dim(role, m, DimKind::Projective, &pd_value),
        "gpd": report::dim(role, m, DimKind::Gorenstein, &gdefect_core::gproj::gpd_from_profile(&profile, settings)),
        "gproj": report::gproj(role, m, &gdefect_core::gproj::verdict_from_profile(m, &profile, settings)),
        "ext_to_regular": profile.values.iter().skip(1).collect::<Vec<_>>(),
        "periodicity": periodicity,
    })
}

pub fn info(loaded: &Loaded) -> Result<Value, CliError> {
    let s = &loaded.settings;
    let mut corners = Map::new();
    for (name, verts) in &loaded.file.idempotents {
        let c = loaded
            .algebra
            .corner(verts)
            .map_err(|e| CliError::Validation(e.to_string()))?;
        corners.insert(name.clone(), algebra_summary(&corner_role(loaded, verts), &Arc::new(c.algebra), s));
    }
    let modules: Map<String, Value> = loaded
        .modules
        .iter()
        .map(|(name, m)| (name.clone(), module_summary("R", m, s)))
        .collect();
    Ok(json!({
        "algebra": algebra_summary("R", &loaded.algebra, s),
        "corners": corners,
        "modules": modules,
    }))
}

/// Which module `gproj` should look at.
#[derive(Clone, Debug)]
pub enum ModuleChoice {
    Named(String),
    Simple(String),
    Projective(String),
}

pub fn gproj(loaded: &Loaded, choice: &ModuleChoice, corner: Option<&str>) -> Result<Value, CliError> {
    let s = &loaded.settings;
    let (role, alg, e) = match corner {
        Some(spec) => {
            let verts = loaded.vertex_set(spec)?;
            let e = Idempotent::new(loaded.algebra.clone(), &verts).map_err(|e| CliError::Validation(e.to_string()))?;
            (corner_role(loaded, &verts), e.corner().clone(), Some(e))
        }
        None => ("R".to_string(), loaded.algebra.clone(), None),
    };
    let vertex = |label: &str| {
        alg.vertex_index(label)
            .ok_or_else(|| CliError::Validation(format!("unknown vertex `{label}` in {role}")))
    };
    let (description, m) = match choice {
        ModuleChoice::Named(name) => {
            let m = loaded
                .modules
                .get(name)
                .ok_or_else(|| CliError::Validation(format!("unknown module `{name}`")))?;
            let m = match &e {
                Some(e) => schur_s(e, m),
                None => m.clone(),
            };
            (format!("module {name}"), m)
        }
        ModuleChoice::Simple(v) => (format!("simple {v}"), Module::simple(alg.clone(), vertex(v)?)),
        ModuleChoice::Projective(v) => (format!("projective {v}"), Module::projective(alg.clone(), vertex(v)?)),
    };
    Ok(json!({
        "algebra": role,
        "module": description,
        "summary": module_summary(&role, &m, s),
    }))
}

fn dim_condition(role: &str, c: &DimCondition, kind: DimKind, value_role: &str, value_module: impl Fn(&Module) -> Module) -> Value {
    let checks: Vec<Value> = c
        .checks
        .iter()
        .map(|check| {
            json!({
                "module": subject(role, &check.module),
                "value": report::dim(value_role, &value_module(&check.module), kind, &check.value),
            })
        })
        .collect();
    json!({"condition": c.condition.verdict(), "checks": checks})
}

pub fn schur(loaded: &Loaded, spec: &str) -> Result<Value, CliError> {
    let s = &loaded.settings;
    let verts = loaded.vertex_set(spec)?;
    let e = Idempotent::new(loaded.algebra.clone(), &verts).map_err(|e| CliError::Validation(e.to_string()))?;
    let r = schur_report(&e, s).map_err(|e| CliError::Internal(e.to_string()))?;
    let corner = corner_role(loaded, &verts);
    let tor: Vec<Value> = r
        .tor
        .checks
        .iter()
        .map(|(g, v)| {
            let mut out = json!({"module": subject(&corner, g), "result": v, "condition": v.condition().verdict()});
            if let TorVanishing::Unknown { bound } = v {
                out["bound"] = json!(bound);
            }
            out
        })
        .collect();
    let c2_modules = |g: &Module| schur_t(&e, g).expect("checked in the report").module;
    Ok(json!({
        "idempotent": loaded.vertex_labels(&verts),
        "corner": {"role": corner, "dim": e.corner().dim()},
        "test_sets": {"ambient": r.ambient_test_set, "corner": r.corner_test_set},
        "tor": {"condition": r.tor.condition.verdict(), "checks": tor},
        "c1": dim_condition("R", &r.c1, DimKind::Gorenstein, &corner, |f| schur_s(&e, f)),
        "c2": dim_condition(&corner, &r.c2, DimKind::Gorenstein, "R", c2_modules),
        "c3": dim_condition("R", &r.c3, DimKind::Gorenstein, "R", Module::clone),
        "c3_strict": {
            "condition": r.c3_strict.condition.verdict(),
            "simples": dim_condition("R", &r.c3_strict.simples, DimKind::Projective, "R", Module::clone),
            "er_pd": report::dim(&corner, &e.er_left(), DimKind::Projective, &r.c3_strict.er_pd),
        },
        "conclusions": {
            "defect_equivalence": r.defect_equivalence.verdict(),
            "full_diagram": r.full_diagram.verdict(),
        },
        "unknown_count": r.unknown_count(),
    }))
}

fn trimat_error(e: TriMatError) -> CliError {
    match e {
        TriMatError::Internal(_) => CliError::Internal(e.to_string()),
        _ => CliError::Validation(e.to_string()),
    }
}

struct Split {
    tm: TriMat,
    a_role: String,
    b_role: String,
    t_role: String,
    a_vertices: Vec<usize>,
    b_vertices: Vec<usize>,
    matching: Vec<usize>,
}

fn split(loaded: &Loaded, spec: &str) -> Result<Split, CliError> {
    let a_vertices = loaded.vertex_set(spec)?;
    let b_vertices: Vec<usize> = (0..loaded.algebra.num_vertices())
        .filter(|v| !a_vertices.contains(v))
        .collect();
    let (tm, matching) = TriMat::from_split(&loaded.algebra, &a_vertices).map_err(trimat_error)?;
    Ok(Split {
        a_role: corner_role(loaded, &a_vertices),
        b_role: corner_role(loaded, &b_vertices),
        t_role: trimat_role(loaded, &a_vertices),
        tm,
        a_vertices,
        b_vertices,
        matching,
    })
}

fn build_section(loaded: &Loaded, sp: &Split) -> Value {
    let s = &loaded.settings;
    let tm = &sp.tm;
    let m_left = tm.m_left();
    let m_right = tm.m_right();
    json!({
        "a_vertices": loaded.vertex_labels(&sp.a_vertices),
        "b_vertices": loaded.vertex_labels(&sp.b_vertices),
        "dims": {"t": tm.t().dim(), "a": tm.a().dim(), "m": tm.bimodule().dim(), "b": tm.b().dim()},
        "t_basis": tm.t().labels(),
        "matching": sp.matching.iter().map(|&i| loaded.algebra.label(i)).collect::<Vec<_>>(),
        "m_left_pd": report::dim(&sp.a_role, &m_left, DimKind::Projective, &pd(&m_left, s)),
        "m_right_pd": report::dim(&report::op_role(&sp.b_role), &m_right, DimKind::Projective, &pd(&m_right, s)),
    })
}

pub fn trimat_build(loaded: &Loaded, spec: &str) -> Result<Value, CliError> {
    let sp = split(loaded, spec)?;
    Ok(json!({"build": build_section(loaded, &sp)}))
}

fn compatibility_json(sp: &Split, c: &CompatibilityReport) -> Value {
    let tensor: Vec<Value> = c
        .tensor_part
        .iter()
        .map(|t| {
            json!({
                "module": subject(&sp.b_role, &t.module),
                "tor": t.tor,
                "periodic_tensor_exact": t.periodic_exact,
                "condition": t.condition.verdict(),
            })
        })
        .collect();
    let ext: Vec<Value> = c
        .ext_part
        .iter()
        .map(|x| json!({"module": subject(&sp.a_role, &x.module), "ext1": x.ext1}))
        .collect();
    json!({"condition": c.condition.verdict(), "tensor": tensor, "ext": ext})
}

fn corner_json(r: &CornerReport) -> Value {
    json!({
        "corner": r.corner,
        "hypotheses": r.hypotheses.iter().map(|h| json!({"name": h.name, "verdict": h.verdict, "condition": h.condition.verdict()})).collect::<Vec<_>>(),
        "defect_equivalence": r.defect_equivalence.verdict(),
        "full_diagram": r.full_diagram.verdict(),
        "case": r.case(),
        "transfers": r.transfers,
    })
}

/// Options of `trimat check`.
#[derive(Clone, Copy, Debug)]
pub struct OracleOptions {
    pub triples: usize,
    pub max_dim: usize,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions { triples: 50, max_dim: 4 }
    }
}

/// Modules over `alg` for dimension comparisons: simples, projectives, the
/// Gorenstein projective test set and seeded random modules, deduplicated
/// by action data.
pub fn module_corpus(alg: &Arc<Algebra>, settings: &Settings, random: usize, max_dim: usize) -> Vec<Module> {
    let mut out: Vec<Module> = Module::simples(alg);
    out.extend((0..alg.num_vertices()).map(|v| Module::projective(alg.clone(), v)));
    out.extend(gproj_test_set(alg, settings));
    let mut rng = ChaCha8Rng::seed_from_u64(settings.seed);
    out.extend((0..random).map(|_| random_module(alg, max_dim, &mut rng)));
    let mut seen: Vec<Module> = Vec::new();
    for m in out {
        if !m.is_zero() && !seen.iter().any(|x| x.dims() == m.dims() && x.actions() == m.actions()) {
            seen.push(m);
        }
    }
    seen
}

pub fn trimat_check(loaded: &Loaded, spec: &str, oracle: OracleOptions) -> Result<Value, CliError> {
    let s = &loaded.settings;
    let sp = split(loaded, spec)?;
    let tm = &sp.tm;
    let compat = compatibility_check(tm, s);
    let at_a = check_at_a(tm, compat.condition, s);
    let at_b = check_at_b(tm, compat.condition, s);
    let mut results = json!({
        "build": build_section(loaded, &sp),
        "compatibility": compatibility_json(&sp, &compat),
        "schur_at_a": corner_json(&at_a),
        "schur_at_b": corner_json(&at_b),
    });
    if compat.condition != gdefect_core::schur::Condition::Holds {
        let skipped = json!({"skipped": "hypothesis unmet: the bimodule is not certified compatible"});
        results["triple_criterion"] = skipped.clone();
        results["left_gpd"] = skipped.clone();
        results["right_gpd"] = skipped;
        return Ok(results);
    }
    results["triple_criterion"] = triple_suite(&sp, compat.condition, oracle, s)?;

    let corpus_a = module_corpus(tm.a(), s, 10, oracle.max_dim);
    let mut left = Vec::new();
    for x in &corpus_a {
        let r = left_gpd_check(tm, x, compat.condition, s).map_err(trimat_error)?;
        left.push(json!({
            "module": subject(&sp.a_role, x),
            "over_t": report::plain_dim(&r.over_t),
            "over_a": report::plain_dim(&r.over_a),
            "agree": r.agree.map(yes_no).unwrap_or("unknown"),
        }));
    }
    let left_agree = left.iter().filter(|v| v["agree"] == "yes").count();
    results["left_gpd"] = json!({"modules": left, "agree": left_agree, "total": corpus_a.len()});

    let corpus_b = module_corpus(tm.b(), s, 0, oracle.max_dim);
    let mut right = Vec::new();
    for y in &corpus_b {
        let r = right_gpd_check(tm, y, compat.condition, s).map_err(trimat_error)?;
        right.push(json!({
            "module": subject(&sp.b_role, y),
            "hypothesis": r.hypothesis.verdict(),
            "over_t": report::plain_dim(&r.over_t),
            "over_b": report::plain_dim(&r.over_b),
            "finiteness_agrees": r.agree.map(yes_no).unwrap_or("unknown"),
        }));
    }
    results["right_gpd"] = json!({"modules": right});
    Ok(results)
}

fn triple_suite(
    sp: &Split,
    compat: gdefect_core::schur::Condition,
    oracle: OracleOptions,
    s: &Settings,
) -> Result<Value, CliError> {
    let tm = &sp.tm;
    let pool = gproj_test_set(tm.b(), s);
    let mut rng = ChaCha8Rng::seed_from_u64(s.seed);
    let (mut certified, mut agree) = (0usize, 0usize);
    let mut unknown = 0usize;
    let mut disagreements = Vec::new();
    for k in 0..oracle.triples {
        let tr = random_triple(tm, &pool, oracle.max_dim, &mut rng).map_err(trimat_error)?;
        let r = triple_gproj_check(tm, &tr, compat, s).map_err(trimat_error)?;
        match r.agree {
            Some(true) => {
                certified += 1;
                agree += 1;
            }
            Some(false) => {
                certified += 1;
                let n = tm.triple_to_module(&tr).map_err(trimat_error)?;
                disagreements.push(json!({
                    "index": k,
                    "criterion": r.criterion,
                    "direct": report::gproj(&sp.t_role, &n, &r.direct),
                }));
            }
            None => unknown += 1,
        }
    }
    Ok(json!({
        "samples": oracle.triples,
        "max_dim": oracle.max_dim,
        "certified_pairs": certified,
        "agree": agree,
        "unknown": unknown,
        "disagreements": disagreements,
        "verdict": if disagreements.is_empty() { "holds" } else { "fails" },
    }))
}
