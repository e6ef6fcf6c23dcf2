//! Membership of bounded complexes in the subcategory of complexes of
//! finite Gorenstein projective dimension.

use std::sync::Arc;

use gdefect_core::exactfield::{Field, Mat};
use gdefect_core::gproj::{gpd, gproj_test_set};
use gdefect_core::homalg::{in_fgp, ChainComplex, DimValue, FgpVerdict, Settings};
use gdefect_core::modcat::{hom_space, random_combination, random_module, Module, Morphism};
use gdefect_core::quivalg::{build_algebra, Algebra, Quiver, Relation};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn algebra(vertices: &[&str], arrows: &[(&str, &str, &str)], rels: &[&[(i64, &str)]]) -> Arc<Algebra> {
    let mut q = Quiver::new(vertices.iter().copied()).unwrap();
    for (a, s, t) in arrows {
        q.add_arrow(*a, *s, *t).unwrap();
    }
    let rels: Vec<Relation> = rels
        .iter()
        .map(|terms| Relation::new(&q, terms.iter().map(|(c, p)| (*c, q.parse_path(p).unwrap())).collect()).unwrap())
        .collect();
    Arc::new(build_algebra(Field::default(), &q, &rels, 12).unwrap().into_algebra())
}

/// Algebras of each flavour: self-injective, CM-free of infinite global
/// dimension, Gorenstein but not self-injective, hereditary.
fn algebras() -> Vec<Arc<Algebra>> {
    vec![
        algebra(&["1"], &[("x", "1", "1")], &[&[(1, "x*x")]]),
        algebra(
            &["1", "2", "3", "4"],
            &[("alpha", "1", "2"), ("beta", "2", "3"), ("gamma", "3", "2"), ("delta", "3", "4")],
            &[&[(1, "beta*gamma")], &[(1, "gamma*beta")], &[(1, "delta*beta")]],
        ),
        algebra(
            &["1", "2"],
            &[("a", "1", "2"), ("b", "2", "1")],
            &[&[(1, "b*a")]],
        ),
        algebra(&["1", "2", "3"], &[("a", "1", "2"), ("b", "2", "3")], &[]),
    ]
}

fn two_term(f: &Morphism) -> ChainComplex {
    let alg = f.source().algebra_arc().clone();
    ChainComplex::new(alg, -1, vec![f.source().clone(), f.target().clone()], vec![f.clone()]).unwrap()
}

fn sum_complex(x: &ChainComplex, y: &ChainComplex) -> ChainComplex {
    let alg = x.algebra().clone();
    let field = alg.field();
    let start = x.start().min(y.start());
    let end = x.end().max(y.end());
    let terms: Vec<Module> = (start..=end)
        .map(|n| Module::direct_sum(&[x.term(n), y.term(n)]).unwrap().module)
        .collect();
    let diffs = (start..end)
        .map(|n| {
            let (dx, dy) = (x.diff(n), y.diff(n));
            let blocks = (0..alg.num_vertices())
                .map(|v| Mat::block_diag(field, &[dx.block(v), dy.block(v)]))
                .collect();
            let k = (n - start) as usize;
            Morphism::new(terms[k].clone(), terms[k + 1].clone(), blocks).unwrap()
        })
        .collect();
    ChainComplex::new(alg, start, terms, diffs).unwrap()
}

fn random_map(m: &Module, n: &Module, rng: &mut ChaCha8Rng) -> Morphism {
    let basis = hom_space(m, n).unwrap();
    if basis.is_empty() {
        Morphism::zero(m.clone(), n.clone())
    } else {
        random_combination(&basis, rng)
    }
}

fn finite_gpd_pool(alg: &Arc<Algebra>, s: &Settings, rng: &mut ChaCha8Rng) -> Vec<Module> {
    let mut pool = gproj_test_set(alg, s);
    pool.extend(Module::simples(alg));
    pool.extend((0..4).map(|_| random_module(alg, 3, rng)));
    pool.retain(|m| !m.is_zero() && gpd(m, s).finite().is_some());
    pool
}

#[test]
fn shipped_flavours_have_no_unknowns_at_bound_twenty() {
    let s = Settings::with_bound(20);
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for alg in algebras() {
        let mut corpus = Module::simples(&alg);
        corpus.extend((0..6).map(|_| random_module(&alg, 4, &mut rng)));
        for m in corpus.iter().filter(|m| !m.is_zero()) {
            assert!(!matches!(gpd(m, &s), DimValue::Unknown { .. }), "dims {:?}", m.dims());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn stalk_in_fgp_iff_finite_gpd(which in 0usize..4, seed in any::<u64>(), degree in -2i64..3) {
        let alg = algebras().swap_remove(which);
        let s = Settings::default();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_module(&alg, 4, &mut rng);
        let v = in_fgp(&ChainComplex::stalk(&m, degree), &s);
        match gpd(&m, &s) {
            _ if m.is_zero() => prop_assert!(matches!(v, FgpVerdict::Exact)),
            DimValue::Finite(_) => prop_assert!(v.is_yes()),
            DimValue::Infinite(_) => prop_assert!(v.is_no()),
            DimValue::Unknown { .. } => {}
        }
    }

    #[test]
    fn complexes_of_finite_gpd_terms_lie_in_fgp(which in 0usize..4, seed in any::<u64>()) {
        let alg = algebras().swap_remove(which);
        let s = Settings::default();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pool = finite_gpd_pool(&alg, &s, &mut rng);
        let (i, j) = (seed as usize % pool.len(), (seed >> 8) as usize % pool.len());
        let f = random_map(&pool[i], &pool[j], &mut rng);
        let v = in_fgp(&two_term(&f), &s);
        prop_assert!(!v.is_no(), "finite-gpd terms gave {}", v.verdict());
    }

    #[test]
    fn fgp_is_closed_under_sums_and_summands(which in 0usize..4, seed in any::<u64>()) {
        let alg = algebras().swap_remove(which);
        let s = Settings::default();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (m1, n1) = (random_module(&alg, 3, &mut rng), random_module(&alg, 3, &mut rng));
        let (m2, n2) = (random_module(&alg, 3, &mut rng), random_module(&alg, 3, &mut rng));
        let x = two_term(&random_map(&m1, &n1, &mut rng));
        let y = two_term(&random_map(&m2, &n2, &mut rng));
        let (vx, vy) = (in_fgp(&x, &s), in_fgp(&y, &s));
        let vs = in_fgp(&sum_complex(&x, &y), &s);
        if vs.is_yes() {
            prop_assert!(!vx.is_no() && !vy.is_no());
        }
        if vx.is_yes() && vy.is_yes() {
            prop_assert!(!vs.is_no());
        }
        if vx.is_no() || vy.is_no() {
            prop_assert!(!vs.is_yes());
        }
    }
}
