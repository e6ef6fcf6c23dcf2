//! Invariant suites over the shipped algebras at fixed seeds.

use std::collections::BTreeMap;
use std::sync::Arc;

use gdefect_core::exactfield::Mat;
use gdefect_core::gproj::{audit_periodic, gpd, gproj_check, ExtProfile, GprojVerdict};
use gdefect_core::homalg::{
    cone, cone_with_wrong_sign, in_fgp, min_resolution, ChainComplex, ChainMap, DimValue, Outcome, Settings,
};
use gdefect_core::modcat::{hom_dim, hom_space, random_combination, random_module, Module, Morphism};
use gdefect_core::quivalg::Algebra;
use gdefect_core::schur::{quotient_inflation, schur_l, schur_s, schur_t, Idempotent};
use gdefect_core::trimat::{random_triple, TriMat};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::load::{load, Loaded, Overrides};

pub const SHIPPED: [(&str, &str); 5] = [
    ("a2", include_str!("../../../algebras/a2.alg")),
    ("dual_numbers", include_str!("../../../algebras/dual_numbers.alg")),
    ("cycle_tails", include_str!("../../../algebras/cycle_tails.alg")),
    ("hereditary_corner", include_str!("../../../algebras/hereditary_corner.alg")),
    ("selfinjective_corner", include_str!("../../../algebras/selfinjective_corner.alg")),
];

/// Splits used by the triangular suites, as in the shipped files.
const SPLITS: [(&str, &str); 3] = [("cycle_tails", "A"), ("hereditary_corner", "A"), ("selfinjective_corner", "A")];

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Fault {
    #[default]
    None,
    /// Build cones with `+d_X` in place of `-d_X`.
    ConeSign,
}

type SuiteResult = Result<usize, String>;

fn check(ok: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

fn field_suite(loaded: &[(&str, Loaded)], rng: &mut ChaCha8Rng) -> SuiteResult {
    let mut cases = 0;
    for (_, l) in loaded.iter().take(1) {
        let f = l.field;
        for _ in 0..40 {
            let (r, c) = (rng.gen_range(1..6), rng.gen_range(1..6));
            let m = Mat::from_fn(f, r, c, |_, _| rng.gen_range(0..f.p()));
            let rank = m.rank();
            check(rank + m.kernel_basis().len() == c, || format!("rank-nullity fails for {m:?}"))?;
            for v in m.kernel_basis() {
                check(m.mul_vec(&v).iter().all(|&x| x == 0), || "kernel vector not annihilated".into())?;
            }
            if r == c {
                if let Some(inv) = m.inverse() {
                    check(inv.mul(&m).is_identity(), || "inverse is not an inverse".into())?;
                } else {
                    check(rank < r, || "full-rank matrix without inverse".into())?;
                }
            }
            cases += 1;
        }
    }
    Ok(cases)
}

fn algebra_suite(loaded: &[(&str, Loaded)]) -> SuiteResult {
    let mut cases = 0;
    for (name, l) in loaded {
        let a = &l.algebra;
        check(a.is_associative(), || format!("{name}: not associative"))?;
        check(a.opposite().opposite() == **a, || format!("{name}: opposite is not an involution"))?;
        let total: usize = (0..a.num_vertices()).map(|v| Module::projective(a.clone(), v).dim()).sum();
        check(total == a.dim(), || format!("{name}: projectives do not add up to the algebra"))?;
        cases += 1;
    }
    Ok(cases)
}

fn module_suite(loaded: &[(&str, Loaded)], rng: &mut ChaCha8Rng) -> SuiteResult {
    let mut cases = 0;
    for (name, l) in loaded {
        let a = &l.algebra;
        for _ in 0..4 {
            let m = random_module(a, 6, rng);
            m.validate().map_err(|e| format!("{name}: random module invalid: {e}"))?;
            for v in 0..a.num_vertices() {
                let p = Module::projective(a.clone(), v);
                let h = hom_dim(&p, &m).map_err(|e| e.to_string())?;
                check(h == m.dims()[v], || format!("{name}: dim Hom(P({v}), M) ≠ dim e_v M"))?;
            }
            let homs = hom_space(&m, &m).map_err(|e| e.to_string())?;
            let f = random_combination(&homs, rng);
            let (k, c) = (f.kernel().module.dim(), f.cokernel().module.dim());
            check(k == c, || format!("{name}: endomorphism with dim ker ≠ dim coker"))?;
            cases += 1;
        }
    }
    Ok(cases)
}

fn resolution_suite(loaded: &[(&str, Loaded)], s: &Settings) -> SuiteResult {
    let mut cases = 0;
    for (name, l) in loaded {
        for m in Module::simples(&l.algebra) {
            let res = min_resolution(&m, s);
            check(res.is_exact(), || format!("{name}: resolution not exact"))?;
            check(res.is_minimal(), || format!("{name}: resolution not minimal"))?;
            if let Outcome::Periodic(c) = &res.outcome {
                check(c.verify(&res.syzygies), || format!("{name}: periodicity witness rejected"))?;
            }
            cases += 1;
        }
    }
    Ok(cases)
}

/// A two-term complex `P → Q` of projectives from a random map.
fn two_term(alg: &Arc<Algebra>, rng: &mut ChaCha8Rng) -> Option<ChainComplex> {
    for _ in 0..8 {
        let p = Module::projective(alg.clone(), rng.gen_range(0..alg.num_vertices()));
        let q = Module::projective(alg.clone(), rng.gen_range(0..alg.num_vertices()));
        let homs = hom_space(&p, &q).ok()?;
        if homs.is_empty() {
            continue;
        }
        let d = random_combination(&homs, rng);
        if d.is_zero() {
            continue;
        }
        return ChainComplex::new(alg.clone(), -1, vec![p, q], vec![d]).ok();
    }
    None
}

fn cone_suite(loaded: &[(&str, Loaded)], rng: &mut ChaCha8Rng, fault: Fault) -> SuiteResult {
    let build = |f: &ChainMap| match fault {
        Fault::None => cone(f),
        Fault::ConeSign => cone_with_wrong_sign(f),
    };
    let mut cases = 0;
    for (name, l) in loaded {
        let Some(x) = two_term(&l.algebra, rng) else {
            continue;
        };
        let maps = (x.start()..=x.end()).map(|n| Morphism::identity(x.term(n))).collect();
        let id = ChainMap::new(x.clone(), x.clone(), x.start(), maps).map_err(|e| e.to_string())?;
        let c = build(&id);
        c.revalidate().map_err(|e| format!("{name}: cone of the identity: {e}"))?;
        check(c.is_exact(), || format!("{name}: cone of the identity is not exact"))?;
        // cone of X → 0 is X shifted by one
        let nothing = ChainComplex::new(l.algebra.clone(), 0, vec![], vec![]).map_err(|e| e.to_string())?;
        let zero = ChainMap::zero(&x, &nothing);
        let c = build(&zero);
        c.revalidate().map_err(|e| format!("{name}: cone of a zero map: {e}"))?;
        for n in x.start() - 1..=x.end() {
            check(c.homology_dim(n) == x.homology_dim(n + 1), || format!("{name}: cone of X → 0 is not X[1]"))?;
        }
        // stalk maps: H^{-1} = ker f, H^0 = coker f
        let m = random_module(&l.algebra, 5, rng);
        let homs = hom_space(&m, &m).map_err(|e| e.to_string())?;
        let f = random_combination(&homs, rng);
        let sm = ChainMap::new(ChainComplex::stalk(&m, 0), ChainComplex::stalk(&m, 0), 0, vec![f.clone()])
            .map_err(|e| e.to_string())?;
        let c = build(&sm);
        c.revalidate().map_err(|e| format!("{name}: cone of a module map: {e}"))?;
        check(c.homology_dim(-1) == f.kernel().module.dim() && c.homology_dim(0) == f.cokernel().module.dim(), || {
            format!("{name}: cone homology is not kernel and cokernel")
        })?;
        cases += 3;
    }
    Ok(cases)
}

fn gproj_suite(loaded: &[(&str, Loaded)], s: &Settings) -> SuiteResult {
    let mut cases = 0;
    for (name, l) in loaded {
        let a = &l.algebra;
        let mut corpus = Module::simples(a);
        corpus.extend((0..a.num_vertices()).map(|v| Module::projective(a.clone(), v)));
        for m in corpus {
            let profile = ExtProfile::new(&m, s);
            let v = gproj_check(&m, s);
            let g = gpd(&m, s);
            match &v {
                GprojVerdict::Yes(_) => check(g.finite() == Some(0), || format!("{name}: Gproj with gpd {}", g.verdict()))?,
                GprojVerdict::No(_) => check(g.finite() != Some(0), || format!("{name}: not Gproj but gpd 0"))?,
                GprojVerdict::Unknown { .. } => {}
            }
            if m.is_projective() {
                check(v.is_yes(), || format!("{name}: projective not certified"))?;
            }
            if let Outcome::Periodic(c) = &profile.resolution.outcome {
                check(audit_periodic(&profile.resolution, c) == (v.is_yes() || profile.cycle_is_gproj(c)), || {
                    format!("{name}: periodic audit disagrees with the Ext profile")
                })?;
            }
            // the stalk complex lies in fgp exactly when gpd is finite
            let fgp = in_fgp(&ChainComplex::stalk(&m, 0), s);
            match &g {
                DimValue::Finite(_) => check(fgp.is_yes(), || format!("{name}: finite gpd outside fgp"))?,
                DimValue::Infinite(_) => check(fgp.is_no(), || format!("{name}: infinite gpd inside fgp"))?,
                DimValue::Unknown { .. } => {}
            }
            cases += 1;
        }
    }
    Ok(cases)
}

fn schur_suite(loaded: &[(&str, Loaded)], rng: &mut ChaCha8Rng) -> SuiteResult {
    let mut cases = 0;
    for (name, l) in loaded {
        for verts in l.file.idempotents.values() {
            let e = Idempotent::new(l.algebra.clone(), verts).map_err(|e| format!("{name}: {e}"))?;
            let corner = e.corner().clone();
            let mut gs = Module::simples(&corner);
            gs.extend((0..corner.num_vertices()).map(|v| Module::projective(corner.clone(), v)));
            gs.push(random_module(&corner, 4, rng));
            for g in &gs {
                let t = schur_t(&e, g).map_err(|err| format!("{name}: T_e: {err}"))?;
                let lg = schur_l(&e, g).map_err(|err| format!("{name}: L_e: {err}"))?;
                check(t.counit.is_iso() && lg.unit.is_iso(), || format!("{name}: S_e T_e or S_e L_e is not the identity"))?;
                let m = random_module(&l.algebra, 5, rng);
                let sm = schur_s(&e, &m);
                let lhs = hom_dim(&t.module, &m).map_err(|e| e.to_string())?;
                let rhs = hom_dim(g, &sm).map_err(|e| e.to_string())?;
                check(lhs == rhs, || format!("{name}: Hom(T_e G, M) ≠ Hom(G, S_e M)"))?;
                let lhs = hom_dim(&m, &lg.module).map_err(|e| e.to_string())?;
                let rhs = hom_dim(&sm, g).map_err(|e| e.to_string())?;
                check(lhs == rhs, || format!("{name}: Hom(M, L_e G) ≠ Hom(S_e M, G)"))?;
                cases += 1;
            }
            let q = quotient_inflation(&e).map_err(|err| format!("{name}: {err}"))?;
            for n in q.simples() {
                check(schur_s(&e, &n).is_zero(), || format!("{name}: S_e does not kill an R/ReR-module"))?;
                cases += 1;
            }
        }
    }
    Ok(cases)
}

fn trimat_suite(loaded: &[(&str, Loaded)], s: &Settings, rng: &mut ChaCha8Rng) -> SuiteResult {
    let mut cases = 0;
    for (file, idem) in SPLITS {
        let Some((_, l)) = loaded.iter().find(|(n, _)| *n == file) else {
            continue;
        };
        let verts = &l.file.idempotents[idem];
        let (tm, _) = TriMat::from_split(&l.algebra, verts).map_err(|e| format!("{file}: {e}"))?;
        let pool = gdefect_core::gproj::gproj_test_set(tm.b(), s);
        for _ in 0..5 {
            let tr = random_triple(&tm, &pool, 4, rng).map_err(|e| format!("{file}: {e}"))?;
            let n = tm.triple_to_module(&tr).map_err(|e| format!("{file}: {e}"))?;
            let back = tm.module_to_triple(&n).map_err(|e| format!("{file}: {e}"))?;
            check(
                back.x.actions() == tr.x.actions() && back.y.actions() == tr.y.actions() && back.phi.flatten() == tr.phi.flatten(),
                || format!("{file}: triple round trip changed the data"),
            )?;
            cases += 1;
        }
    }
    Ok(cases)
}

/// Runs every suite; `prime` overrides the characteristic of the shipped
/// files.
pub fn run(prime: Option<u32>, seed: u64, fault: Fault) -> Value {
    let overrides = Overrides {
        prime,
        bound: None,
        seed: Some(seed),
    };
    let mut loaded = Vec::new();
    let mut suites = BTreeMap::new();
    for (name, text) in SHIPPED {
        match load(text, overrides) {
            Ok(l) => loaded.push((name, l)),
            Err(e) => {
                suites.insert(format!("load:{name}"), Err(e.to_string()));
            }
        }
    }
    let s = loaded.first().map(|(_, l)| l.settings).unwrap_or_default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    suites.insert("exactfield".into(), field_suite(&loaded, &mut rng));
    suites.insert("quivalg".into(), algebra_suite(&loaded));
    suites.insert("modcat".into(), module_suite(&loaded, &mut rng));
    suites.insert("resolutions".into(), resolution_suite(&loaded, &s));
    suites.insert("cone".into(), cone_suite(&loaded, &mut rng, fault));
    suites.insert("gproj".into(), gproj_suite(&loaded, &s));
    suites.insert("schur".into(), schur_suite(&loaded, &mut rng));
    suites.insert("trimat".into(), trimat_suite(&loaded, &s, &mut rng));
    let all_pass = suites.values().all(Result::is_ok);
    let suites: serde_json::Map<String, Value> = suites
        .into_iter()
        .map(|(k, v)| {
            let v = match v {
                Ok(cases) => json!({"status": "pass", "cases": cases}),
                Err(msg) => json!({"status": "fail", "failure": msg}),
            };
            (k, v)
        })
        .collect();
    json!({
        "field_p": prime.unwrap_or(gdefect_core::exactfield::Field::DEFAULT_PRIME),
        "seed": seed,
        "suites": suites,
        "verdict": if all_pass { "holds" } else { "fails" },
    })
}
