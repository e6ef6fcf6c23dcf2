//! Gorenstein projectivity with certificates, Gorenstein projective
//! dimension, a finite test set of Gorenstein projective modules, and
//! CM-freeness.
//!
//! A periodic minimal resolution `Ω^i(M) ≅ Ω^j(M)` splices into a
//! doubly infinite exact complex of projectives. Its `Hom(−, R)`-dual is
//! exact iff `Ext^t(M, R) = 0` for `i < t ≤ j`, in which case `Ω^i(M)` is
//! Gorenstein projective. For a module of finite Gorenstein projective
//! dimension, that dimension is the largest `t` with `Ext^t(M, R) ≠ 0`.

use std::sync::Arc;

use serde::Serialize;

use crate::exactfield::{Mat, Scalar};
use crate::homalg::{
    ext_from, is_self_injective, min_resolution, DimValue, Outcome, PeriodicityCertificate,
    Resolution, Settings,
};
use crate::modcat::{hom_space, is_isomorphic, IsoVerdict, Module, Morphism};
use crate::quivalg::Algebra;

/// Reason attached to a negative answer. Both kinds are re-checkable.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GprojRefutation {
    /// `dim Ext^degree(M, R) = dim ≠ 0`.
    ExtNonzero { degree: usize, dim: usize },
    /// The evaluation map `M → M††` is not bijective.
    NotReflexive,
}

#[derive(Clone, Debug)]
pub enum GprojWitness {
    Projective,
    /// `Ω^i(M)` lies on a totally acyclic periodic complex and
    /// `Ext^t(M, R) = 0` for `1 ≤ t ≤ j`.
    Periodic(PeriodicityCertificate),
}

#[derive(Clone, Debug)]
pub enum GprojVerdict {
    Yes(GprojWitness),
    No(GprojRefutation),
    Unknown { bound: usize },
}

impl GprojVerdict {
    pub fn verdict(&self) -> &'static str {
        match self {
            GprojVerdict::Yes(_) => "yes",
            GprojVerdict::No(_) => "no",
            GprojVerdict::Unknown { .. } => "unknown",
        }
    }

    pub fn is_yes(&self) -> bool {
        matches!(self, GprojVerdict::Yes(_))
    }

    pub fn is_no(&self) -> bool {
        matches!(self, GprojVerdict::No(_))
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self, GprojVerdict::Unknown { .. })
    }
}

/// A resolution together with `dim Ext^t(M, R)` for every degree it
/// determines.
#[derive(Clone, Debug)]
pub struct ExtProfile {
    pub resolution: Resolution,
    /// `values[t] = dim Ext^t(M, R)`, for `0 ≤ t ≤ last determined degree`.
    pub values: Vec<usize>,
}

impl ExtProfile {
    pub fn new(m: &Module, settings: &Settings) -> ExtProfile {
        let resolution = min_resolution(m, settings);
        let regular = Module::regular(m.algebra_arc().clone());
        let last = match &resolution.outcome {
            Outcome::Finite { pd } => *pd,
            Outcome::Periodic(c) => c.j,
            Outcome::Truncated { bound } => *bound,
        };
        let values = (0..=last)
            .map(|t| ext_from(&resolution, &regular, t).unwrap_or(0))
            .collect();
        ExtProfile { resolution, values }
    }

    /// First `t` in `lo..=hi` with nonzero `Ext^t(M, R)`.
    fn first_nonzero(&self, lo: usize, hi: usize) -> Option<usize> {
        (lo..=hi.min(self.values.len().saturating_sub(1))).find(|&t| self.values[t] != 0)
    }

    pub fn cycle_is_gproj(&self, c: &PeriodicityCertificate) -> bool {
        self.first_nonzero(c.i + 1, c.j).is_none()
    }

    /// Certified status of `Ω^s(M)`: `Some(true)` Gorenstein projective,
    /// `Some(false)` not, `None` undecided.
    pub fn syzygy_status(&self, s: usize) -> Option<bool> {
        match &self.resolution.outcome {
            Outcome::Finite { pd } => Some(s >= *pd),
            Outcome::Periodic(c) => {
                if !self.cycle_is_gproj(c) {
                    Some(false)
                } else {
                    Some(self.first_nonzero(s + 1, c.i).is_none())
                }
            }
            Outcome::Truncated { .. } => {
                if self.first_nonzero(s + 1, usize::MAX).is_some() {
                    Some(false)
                } else {
                    None
                }
            }
        }
    }
}

/// Decides whether `m` is Gorenstein projective.
pub fn gproj_check(m: &Module, settings: &Settings) -> GprojVerdict {
    let profile = ExtProfile::new(m, settings);
    verdict_from_profile(m, &profile, settings)
}

pub fn verdict_from_profile(m: &Module, profile: &ExtProfile, settings: &Settings) -> GprojVerdict {
    let refute = |t: usize| {
        GprojVerdict::No(GprojRefutation::ExtNonzero {
            degree: t,
            dim: profile.values[t],
        })
    };
    match &profile.resolution.outcome {
        Outcome::Finite { pd: 0 } => GprojVerdict::Yes(GprojWitness::Projective),
        Outcome::Finite { pd } => refute(profile.first_nonzero(1, *pd).expect("Ext^pd(M, R) ≠ 0")),
        Outcome::Periodic(c) => match profile.first_nonzero(1, c.j) {
            Some(t) => refute(t),
            None => {
                debug_assert!(audit_periodic(&profile.resolution, c));
                GprojVerdict::Yes(GprojWitness::Periodic(c.clone()))
            }
        },
        Outcome::Truncated { bound } => match profile.first_nonzero(1, *bound) {
            Some(t) => refute(t),
            None if !is_reflexive(m) => GprojVerdict::No(GprojRefutation::NotReflexive),
            None => GprojVerdict::Unknown {
                bound: settings.bound,
            },
        },
    }
}

/// Gorenstein projective dimension.
pub fn gpd(m: &Module, settings: &Settings) -> DimValue {
    gpd_from_profile(&ExtProfile::new(m, settings), settings)
}

pub fn gpd_from_profile(profile: &ExtProfile, settings: &Settings) -> DimValue {
    match &profile.resolution.outcome {
        Outcome::Finite { pd } => DimValue::Finite(*pd),
        Outcome::Periodic(c) => {
            if profile.cycle_is_gproj(c) {
                let top = (1..=c.i).rev().find(|&t| profile.values[t] != 0);
                DimValue::Finite(top.unwrap_or(0))
            } else {
                DimValue::Infinite(c.clone())
            }
        }
        Outcome::Truncated { .. } => DimValue::Unknown {
            bound: settings.bound,
        },
    }
}

/// One period of the spliced complex of projectives: `maps[k]` is
/// `P_{i+k+1} → P_{i+k}`, where the last map `P_i → P_{j-1}` goes through
/// the periodicity isomorphism `Ω^i ≅ Ω^j`.
pub fn periodic_segment(res: &Resolution, cert: &PeriodicityCertificate) -> Vec<Morphism> {
    let d = cert.period();
    (0..d)
        .map(|k| {
            let s = cert.i + k;
            let incl = &res.inclusions[s].inclusion;
            if k + 1 < d {
                incl.compose(&res.covers[s + 1].epi)
            } else {
                incl.compose(&cert.witness.compose(&res.covers[cert.i].epi))
            }
        })
        .collect()
}

/// The spliced periodic complex (one period) is exact and stays exact
/// after applying `Hom(−, R)`.
pub fn audit_periodic(res: &Resolution, cert: &PeriodicityCertificate) -> bool {
    if !cert.verify(&res.syzygies) || cert.witness.source().is_zero() {
        return false;
    }
    let d = cert.period();
    let proj = |k: usize| res.projective(cert.i + k).clone();
    let maps = periodic_segment(res, cert);
    let regular = Module::regular(res.target.algebra_arc().clone());
    for k in 0..d {
        let incoming = &maps[k]; // P_{k+1} → P_k
        let outgoing = &maps[(k + d - 1) % d]; // P_k → P_{k-1}
        let p = proj(k);
        if !outgoing.compose(incoming).is_zero() || incoming.rank() + outgoing.rank() != p.dim() {
            return false;
        }
        let hom_p = hom_space(&p, &regular).expect("same algebra");
        let pullback = |f: &Morphism, basis_src: &Module| -> usize {
            let images: Vec<Vec<Scalar>> = hom_space(basis_src, &regular)
                .expect("same algebra")
                .iter()
                .map(|h| h.compose(f).flatten())
                .collect();
            if images.is_empty() || images[0].is_empty() {
                0
            } else {
                Mat::from_columns(p.field(), images[0].len(), &images).rank()
            }
        };
        // Hom(P_{k-1}, R) → Hom(P_k, R) → Hom(P_{k+1}, R)
        let r_in = pullback(outgoing, outgoing.target());
        let r_out = pullback(incoming, &p);
        if r_in + r_out != hom_p.len() {
            return false;
        }
    }
    true
}

/// `Hom_R(M, R)` as a module over `target` (the opposite algebra), with
/// the chosen basis of `Hom_R(M, R e_v)` at each vertex `v`.
pub struct HomDual {
    pub module: Module,
    pub bases: Vec<Vec<Morphism>>,
}

fn solve_in_basis(basis: &[Vec<Scalar>], v: &[Scalar], field: crate::exactfield::Field) -> Vec<Scalar> {
    if basis.is_empty() {
        debug_assert!(v.iter().all(|&x| x == 0));
        return Vec::new();
    }
    Mat::from_columns(field, v.len(), basis)
        .solve(v)
        .expect("element of the span")
}

/// `M† = Hom_R(M, R)`; `target` must be the opposite of `M`'s algebra.
pub fn hom_dual(m: &Module, target: Arc<Algebra>) -> HomDual {
    let alg = m.algebra_arc().clone();
    let field = m.field();
    let nv = alg.num_vertices();
    let projectives: Vec<Module> = (0..nv).map(|v| Module::projective(alg.clone(), v)).collect();
    let bases: Vec<Vec<Morphism>> = projectives
        .iter()
        .map(|p| hom_space(m, p).expect("same algebra"))
        .collect();
    let flat: Vec<Vec<Vec<Scalar>>> = bases
        .iter()
        .map(|b| b.iter().map(Morphism::flatten).collect())
        .collect();
    let dims: Vec<usize> = bases.iter().map(Vec::len).collect();
    // target element b has source vertex `l` and target vertex `r` where
    // b has grade (l, r) in `alg`; it acts by f ↦ (x ↦ x·b) ∘ f
    let actions = (0..alg.dim())
        .map(|b| {
            let (l, r) = alg.grade(b);
            let blocks: Vec<Mat> = (0..nv)
                .map(|u| {
                    let src = alg.block(u, l);
                    let dst = alg.block(u, r);
                    let mut rho = Mat::zeros(field, dst.len(), src.len());
                    for (j, &x) in src.iter().enumerate() {
                        for &(k, c) in alg.mul_basis(x, b) {
                            let i = dst.iter().position(|&y| y == k).expect("graded product");
                            rho.set(i, j, c);
                        }
                    }
                    rho
                })
                .collect();
            let cols: Vec<Vec<Scalar>> = bases[l]
                .iter()
                .map(|f| {
                    let image: Vec<Scalar> = (0..nv)
                        .flat_map(|u| blocks[u].mul(f.block(u)).data().to_vec())
                        .collect();
                    solve_in_basis(&flat[r], &image, field)
                })
                .collect();
            Mat::from_columns(field, dims[r], &cols)
        })
        .collect();
    HomDual {
        module: Module::new(target, dims, actions).expect("dual module is valid"),
        bases,
    }
}

/// Whether the evaluation `M → Hom(Hom(M, R), R)` is bijective.
pub fn is_reflexive(m: &Module) -> bool {
    let alg = m.algebra_arc().clone();
    let op = Arc::new(alg.opposite());
    let field = m.field();
    let first = hom_dual(m, op);
    let second = hom_dual(&first.module, alg.clone());
    let nv = alg.num_vertices();
    for u in 0..nv {
        let flat: Vec<Vec<Scalar>> = second.bases[u].iter().map(Morphism::flatten).collect();
        if flat.len() != m.dims()[u] {
            return false;
        }
        if flat.is_empty() {
            continue;
        }
        // ev(x) for x ∈ M_u sends f ∈ Hom(M, R e_l) to f(x) ∈ e_u R e_l
        let cols: Vec<Vec<Scalar>> = (0..m.dims()[u])
            .map(|k| {
                let mut x = vec![0; m.dims()[u]];
                x[k] = 1;
                let image: Vec<Scalar> = (0..nv)
                    .flat_map(|l| {
                        first.bases[l]
                            .iter()
                            .flat_map(|f| f.block(u).mul_vec(&x))
                            .collect::<Vec<_>>()
                    })
                    .collect();
                // flatten order of a morphism into P^op(u) is block by block
                let image = reorder_by_vertex(&first.bases, u, &image, &alg);
                solve_in_basis(&flat, &image, field)
            })
            .collect();
        if !Mat::from_columns(field, flat.len(), &cols).is_invertible() {
            return false;
        }
    }
    true
}

/// Rearranges `[f(x) for f in bases[l]]` (for each `l`) into the flattened
/// layout of a morphism `M† → P^op(u)`: for each vertex `l` a
/// `|e_u R e_l| × dim M†_l` block in row-major order.
fn reorder_by_vertex(bases: &[Vec<Morphism>], u: usize, image: &[Scalar], alg: &Algebra) -> Vec<Scalar> {
    let mut out = Vec::with_capacity(image.len());
    let mut pos = 0;
    for (l, basis) in bases.iter().enumerate() {
        let rows = alg.block(u, l).len();
        let cols = basis.len();
        // image holds column-major data for this block: column f is f(x)
        let block = &image[pos..pos + rows * cols];
        for i in 0..rows {
            for j in 0..cols {
                out.push(block[j * rows + i]);
            }
        }
        pos += rows * cols;
    }
    out
}

/// Modules certified Gorenstein projective: the indecomposable projectives
/// and the certified syzygies of the simples, up to isomorphism. A proxy
/// for the whole class, not a classification.
pub fn gproj_test_set(alg: &Arc<Algebra>, settings: &Settings) -> Vec<Module> {
    let mut found: Vec<Module> = (0..alg.num_vertices())
        .map(|v| Module::projective(alg.clone(), v))
        .collect();
    for s in Module::simples(alg) {
        let profile = ExtProfile::new(&s, settings);
        for (n, omega) in profile.resolution.syzygies.iter().enumerate() {
            if omega.is_zero() || profile.syzygy_status(n) != Some(true) {
                continue;
            }
            let seen = found.iter().any(|g| {
                matches!(
                    is_isomorphic(g, omega, settings.samples, settings.seed),
                    Ok(IsoVerdict::Yes(_))
                )
            });
            if !seen {
                found.push(omega.clone());
            }
        }
    }
    found
}

#[derive(Clone, Debug)]
pub enum CmFreeVerdict {
    Certified { reason: &'static str },
    /// No non-projective Gorenstein projective module in a test set of the
    /// given size.
    Evidence { test_set_size: usize },
    Refuted { witness: Module },
}

impl CmFreeVerdict {
    pub fn verdict(&self) -> &'static str {
        match self {
            CmFreeVerdict::Certified { .. } => "yes",
            CmFreeVerdict::Evidence { .. } => "unknown",
            CmFreeVerdict::Refuted { .. } => "no",
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CmFreeVerdict::Certified { .. } => "certified",
            CmFreeVerdict::Evidence { .. } => "evidence",
            CmFreeVerdict::Refuted { .. } => "refuted",
        }
    }
}

/// Every Gorenstein projective module projective? Certified for semisimple
/// algebras and for connected radical square zero algebras that are not
/// self-injective.
pub fn cm_free_check(alg: &Arc<Algebra>, settings: &Settings) -> CmFreeVerdict {
    if alg.is_semisimple() {
        return CmFreeVerdict::Certified {
            reason: "semisimple",
        };
    }
    let op = Arc::new(alg.opposite());
    if alg.is_radical_square_zero() && alg.is_connected() && !is_self_injective(alg, &op) {
        return CmFreeVerdict::Certified {
            reason: "connected radical square zero, not self-injective",
        };
    }
    let set = gproj_test_set(alg, settings);
    match set.iter().find(|g| !g.is_projective()) {
        Some(g) => CmFreeVerdict::Refuted { witness: g.clone() },
        None => CmFreeVerdict::Evidence {
            test_set_size: set.len(),
        },
    }
}
