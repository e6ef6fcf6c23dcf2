//! Triangular matrix algebras `T = (A M; 0 B)` and their modules, written
//! as triples `(X, Y, φ)` with `φ: M ⊗_B Y → X`.
//!
//! `T` is assembled as an ordinary [`Algebra`] whose vertices are those of
//! `A` followed by those of `B`, so all generic machinery applies to it.
//! The triple calculus is a view on `T`-modules.

use std::sync::Arc;

use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::exactfield::{Mat, Scalar};
use crate::gproj::{cm_free_check, gpd, gproj_check, gproj_test_set, periodic_segment, GprojVerdict};
use crate::homalg::{
    ext, global_dim, gorenstein_check, min_resolution, pd, tor_from, DimValue, Outcome, Settings,
};
use crate::modcat::{
    hom_space, random_combination, random_module, same_algebra, Bimodule, Module, ModuleError,
    Morphism, TensorProduct,
};
use crate::quivalg::{Algebra, AlgebraData, AlgebraError};
use crate::schur::{Condition, Conclusion, Idempotent, SchurError};

#[derive(Debug, Error)]
pub enum TriMatError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Module(#[from] ModuleError),
    #[error(transparent)]
    Schur(#[from] SchurError),
    #[error("bimodule invalid: {0}")]
    BimoduleInvalid(String),
    #[error("not triangular: a nonzero element goes from the first part to the second")]
    NotTriangular,
    #[error("the vertex split must be a nonempty proper subset")]
    BadSplit,
    #[error("hypothesis unmet: {0}")]
    HypothesisUnmet(&'static str),
    #[error("internal check failed: {0}")]
    Internal(&'static str),
}

/// `T = (A M; 0 B)` with basis `basis(A) ⊔ basis(M) ⊔ basis(B)`.
#[derive(Clone, Debug)]
pub struct TriMat {
    a: Arc<Algebra>,
    b: Arc<Algebra>,
    m: Bimodule,
    t: Arc<Algebra>,
    e_a: Idempotent,
    e_b: Idempotent,
}

fn disambiguate(first: &[String], second: &[String]) -> (Vec<String>, Vec<String>) {
    if first.iter().any(|x| second.contains(x)) {
        (
            first.iter().map(|x| format!("A.{x}")).collect(),
            second.iter().map(|x| format!("B.{x}")).collect(),
        )
    } else {
        (first.to_vec(), second.to_vec())
    }
}

impl TriMat {
    pub fn build(a: Arc<Algebra>, b: Arc<Algebra>, m: Bimodule) -> Result<TriMat, TriMatError> {
        if !same_algebra(m.left_algebra(), &a) || !same_algebra(m.right_algebra(), &b) {
            return Err(TriMatError::Module(ModuleError::AlgebraMismatch));
        }
        m.validate().map_err(|e| TriMatError::BimoduleInvalid(e.to_string()))?;
        let (da, dm, db) = (a.dim(), m.dim(), b.dim());
        let na = a.num_vertices();
        let n = da + dm + db;
        let (va, vb) = disambiguate(a.vertex_labels(), b.vertex_labels());
        let la: Vec<String> = (0..da).map(|i| a.label(i).to_string()).collect();
        let lb: Vec<String> = (0..db).map(|i| b.label(i).to_string()).collect();
        let (la, lb) = disambiguate(&la, &lb);
        let mut labels = la;
        labels.extend((0..dm).map(|i| format!("m{i}")));
        labels.extend(lb);
        let mut grade: Vec<(usize, usize)> = a.grades().to_vec();
        grade.extend(m.grade().iter().map(|&(x, w)| (x, na + w)));
        grade.extend(b.grades().iter().map(|&(l, r)| (na + l, na + r)));
        let mut idem: Vec<usize> = a.idempotents().to_vec();
        idem.extend(b.idempotents().iter().map(|&e| da + dm + e));
        let mut table = vec![Vec::new(); n * n];
        let column = |mat: &Mat, j: usize| -> Vec<(usize, Scalar)> {
            (0..mat.rows())
                .filter(|&k| mat.get(k, j) != 0)
                .map(|k| (da + k, mat.get(k, j)))
                .collect()
        };
        for x in 0..da {
            for y in 0..da {
                table[x * n + y] = a.mul_basis(x, y).to_vec();
            }
            for j in 0..dm {
                table[x * n + da + j] = column(m.left_action(x), j);
            }
        }
        for i in 0..dm {
            for c in 0..db {
                table[(da + i) * n + da + dm + c] = column(m.right_action(c), i);
            }
        }
        for x in 0..db {
            for y in 0..db {
                table[(da + dm + x) * n + da + dm + y] =
                    b.mul_basis(x, y).iter().map(|&(k, c)| (da + dm + k, c)).collect();
            }
        }
        let mut vertex_labels = va;
        vertex_labels.extend(vb);
        let t = Arc::new(Algebra::new(AlgebraData {
            field: a.field(),
            vertex_labels,
            labels,
            idem,
            grade,
            table,
        })?);
        let e_a = Idempotent::new(t.clone(), &(0..na).collect::<Vec<_>>())?;
        let e_b = Idempotent::new(t.clone(), &(na..t.num_vertices()).collect::<Vec<_>>())?;
        let tm = TriMat {
            a,
            b,
            m,
            t,
            e_a,
            e_b,
        };
        if !tm.corners_match() {
            return Err(TriMatError::Internal("corner algebras differ from A and B"));
        }
        Ok(tm)
    }

    /// `e_A T e_A = A` and `e_B T e_B = B` with the identity on bases.
    fn corners_match(&self) -> bool {
        let same = |x: &Algebra, y: &Algebra| {
            x.dim() == y.dim()
                && x.grades() == y.grades()
                && (0..x.dim()).all(|i| (0..x.dim()).all(|j| x.mul_basis(i, j) == y.mul_basis(i, j)))
        };
        same(self.e_a.corner(), &self.a) && same(self.e_b.corner(), &self.b)
    }

    /// Splits `alg` at a vertex set: `A` is the corner at `a_vertices`, `B`
    /// the corner at the remaining vertices and `M = e_A · alg · e_B`.
    /// Requires `e_B · alg · e_A = 0`. Also returns, for each basis element
    /// of `T`, the basis element of `alg` it corresponds to; the two
    /// multiplication tables are checked to agree under this matching.
    pub fn from_split(alg: &Arc<Algebra>, a_vertices: &[usize]) -> Result<(TriMat, Vec<usize>), TriMatError> {
        let nv = alg.num_vertices();
        let mut in_a = vec![false; nv];
        for &v in a_vertices {
            if v >= nv {
                return Err(TriMatError::BadSplit);
            }
            in_a[v] = true;
        }
        let b_vertices: Vec<usize> = (0..nv).filter(|&v| !in_a[v]).collect();
        if b_vertices.is_empty() || b_vertices.len() == nv {
            return Err(TriMatError::BadSplit);
        }
        if alg.grades().iter().any(|&(l, r)| !in_a[l] && in_a[r]) {
            return Err(TriMatError::NotTriangular);
        }
        let ca = alg.corner(a_vertices)?;
        let cb = alg.corner(&b_vertices)?;
        let a = Arc::new(ca.algebra.clone());
        let b = Arc::new(cb.algebra.clone());
        let m = Bimodule::from_ambient(alg, &ca, a.clone(), &cb, b.clone());
        let tm = TriMat::build(a, b, m)?;
        let m_basis = (0..alg.dim()).filter(|&x| {
            let (l, r) = alg.grade(x);
            in_a[l] && !in_a[r]
        });
        let matching: Vec<usize> = ca.embedding.iter().copied().chain(m_basis).chain(cb.embedding.iter().copied()).collect();
        let n = tm.t.dim();
        if matching.len() != n || n != alg.dim() {
            return Err(TriMatError::Internal("dimension mismatch after splitting"));
        }
        for x in 0..n {
            for y in 0..n {
                let mut lhs: Vec<(usize, Scalar)> = tm.t.mul_basis(x, y).iter().map(|&(k, c)| (matching[k], c)).collect();
                lhs.sort_unstable();
                let mut rhs = alg.mul_basis(matching[x], matching[y]).to_vec();
                rhs.sort_unstable();
                if lhs != rhs {
                    return Err(TriMatError::Internal("multiplication tables differ"));
                }
            }
        }
        Ok((tm, matching))
    }

    pub fn a(&self) -> &Arc<Algebra> {
        &self.a
    }

    pub fn b(&self) -> &Arc<Algebra> {
        &self.b
    }

    pub fn bimodule(&self) -> &Bimodule {
        &self.m
    }

    pub fn t(&self) -> &Arc<Algebra> {
        &self.t
    }

    pub fn e_a(&self) -> &Idempotent {
        &self.e_a
    }

    pub fn e_b(&self) -> &Idempotent {
        &self.e_b
    }

    /// `_A M` as a left `A`-module.
    pub fn m_left(&self) -> Module {
        self.m.as_left_module()
    }

    /// `M_B` as a left module over the opposite of `B`.
    pub fn m_right(&self) -> Module {
        self.m
            .as_right_module(Arc::new(self.b.opposite()))
            .expect("opposite algebra has the same dimension")
    }

    fn a_offset(&self) -> usize {
        self.a.dim()
    }

    fn b_offset(&self) -> usize {
        self.a.dim() + self.m.dim()
    }

    /// The triple `(X, Y, φ)` as a `T`-module.
    pub fn triple_to_module(&self, tr: &TripleModule) -> Result<Module, TriMatError> {
        let field = self.t.field();
        let na = self.a.num_vertices();
        let mut dims = tr.x.dims().to_vec();
        dims.extend_from_slice(tr.y.dims());
        let phi = tr.phi.matrix();
        let actions = (0..self.t.dim())
            .map(|c| {
                if c < self.a_offset() {
                    tr.x.action(c).clone()
                } else if c >= self.b_offset() {
                    tr.y.action(c - self.b_offset()).clone()
                } else {
                    let i = c - self.a_offset();
                    let (xa, w) = self.m.grade()[i];
                    let off = tr.x.offset(xa);
                    let cols: Vec<Vec<Scalar>> = (0..tr.y.dims()[w])
                        .map(|t| {
                            let mut y = vec![0; tr.y.dims()[w]];
                            y[t] = 1;
                            let image = phi.mul_vec(&self.m.tensor_element(&tr.tensor, i, &y));
                            image[off..off + tr.x.dims()[xa]].to_vec()
                        })
                        .collect();
                    let _ = na;
                    Mat::from_columns(field, tr.x.dims()[xa], &cols)
                }
            })
            .collect();
        Ok(Module::new(self.t.clone(), dims, actions)?)
    }

    /// `(e_A N, e_B N, m ⊗ y ↦ m·y)`.
    pub fn module_to_triple(&self, n: &Module) -> Result<TripleModule, TriMatError> {
        let na = self.a.num_vertices();
        let nv = self.t.num_vertices();
        let x = n.restrict(self.a.clone(), &(0..na).collect::<Vec<_>>(), &(0..self.a_offset()).collect::<Vec<_>>());
        let y = n.restrict(
            self.b.clone(),
            &(na..nv).collect::<Vec<_>>(),
            &(self.b_offset()..self.t.dim()).collect::<Vec<_>>(),
        );
        let tensor = self.m.tensor(&y)?;
        let phi = self
            .m
            .tensor_lift(&tensor, &x, |i, t| n.action(self.a_offset() + i).column(t))?;
        Ok(TripleModule { x, y, tensor, phi })
    }

    /// `(X, 0, 0)`.
    pub fn left_triple(&self, x: &Module) -> Result<TripleModule, TriMatError> {
        let y = Module::zero(self.b.clone());
        let tensor = self.m.tensor(&y)?;
        let phi = Morphism::zero(tensor.module.clone(), x.clone());
        Ok(TripleModule {
            x: x.clone(),
            y,
            tensor,
            phi,
        })
    }

    /// `(0, Y, 0)`.
    pub fn right_triple(&self, y: &Module) -> Result<TripleModule, TriMatError> {
        let tensor = self.m.tensor(y)?;
        let x = Module::zero(self.a.clone());
        let phi = Morphism::zero(tensor.module.clone(), x.clone());
        Ok(TripleModule {
            x,
            y: y.clone(),
            tensor,
            phi,
        })
    }

    /// `(M ⊗ Y, Y, id)`.
    pub fn induced_triple(&self, y: &Module) -> Result<TripleModule, TriMatError> {
        let tensor = self.m.tensor(y)?;
        let x = tensor.module.clone();
        let phi = Morphism::identity(x.clone());
        Ok(TripleModule {
            x,
            y: y.clone(),
            tensor,
            phi,
        })
    }

    /// `(X, Y, φ)` for `φ` given by per-vertex blocks `M ⊗ Y → X`.
    pub fn triple(&self, x: &Module, y: &Module, phi: Vec<Mat>) -> Result<TripleModule, TriMatError> {
        let tensor = self.m.tensor(y)?;
        let phi = Morphism::new(tensor.module.clone(), x.clone(), phi)?;
        Ok(TripleModule {
            x: x.clone(),
            y: y.clone(),
            tensor,
            phi,
        })
    }

    /// `(f, g)` as a `T`-morphism between the modules of two triples.
    pub fn triple_morphism(
        &self,
        source: &TripleModule,
        target: &TripleModule,
        f: &Morphism,
        g: &Morphism,
    ) -> Result<Morphism, TriMatError> {
        // f ∘ φ = φ' ∘ (M ⊗ g)
        let lhs = f.compose(&source.phi);
        let rhs = target.phi.compose(&self.m.tensor_map(&source.tensor, &target.tensor, g));
        if lhs.flatten() != rhs.flatten() {
            return Err(TriMatError::Module(ModuleError::NotIntertwining("triple compatibility".into())));
        }
        let mut blocks = f.blocks().to_vec();
        blocks.extend_from_slice(g.blocks());
        Ok(Morphism::new(
            self.triple_to_module(source)?,
            self.triple_to_module(target)?,
            blocks,
        )?)
    }
}

/// A `T`-module as `(X, Y, φ)`: `X` over `A`, `Y` over `B`, and an
/// `A`-morphism `φ: M ⊗_B Y → X`.
#[derive(Clone, Debug)]
pub struct TripleModule {
    pub x: Module,
    pub y: Module,
    pub tensor: TensorProduct,
    pub phi: Morphism,
}

impl TripleModule {
    pub fn dim(&self) -> usize {
        self.x.dim() + self.y.dim()
    }
}

fn exact_at(f: &Morphism, g: &Morphism) -> bool {
    f.is_injective()
        && g.is_surjective()
        && g.compose(f).is_zero()
        && f.source().dim() + g.target().dim() == f.target().dim()
}

/// Exactness of `0 → U → V → W → 0` over `T`, and of its `X`- and
/// `Y`-components.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SesReport {
    pub t_level: bool,
    pub x_level: bool,
    pub y_level: bool,
}

impl SesReport {
    /// Exactness over `T` is equivalent to exactness of both components.
    pub fn consistent(&self) -> bool {
        self.t_level == (self.x_level && self.y_level)
    }
}

/// `first = (f1, g1): U → V`, `second = (f2, g2): V → W`.
pub fn ses_check(
    tm: &TriMat,
    modules: [&TripleModule; 3],
    first: (&Morphism, &Morphism),
    second: (&Morphism, &Morphism),
) -> Result<SesReport, TriMatError> {
    let alpha = tm.triple_morphism(modules[0], modules[1], first.0, first.1)?;
    let beta = tm.triple_morphism(modules[1], modules[2], second.0, second.1)?;
    Ok(SesReport {
        t_level: exact_at(&alpha, &beta),
        x_level: exact_at(first.0, second.0),
        y_level: exact_at(first.1, second.1),
    })
}

/// Tor and periodic-complex checks for one Gorenstein projective `B`-module.
#[derive(Clone, Debug)]
pub struct TorCheck {
    pub module: Module,
    /// `(i, dim Tor_i^B(M, G))` for the degrees computed.
    pub tor: Vec<(usize, usize)>,
    /// `M ⊗ −` of the periodic complex through `G` is exact (if `G` has one).
    pub periodic_exact: Option<bool>,
    pub condition: Condition,
}

#[derive(Clone, Debug)]
pub struct ExtCheck {
    pub module: Module,
    pub ext1: Option<usize>,
}

/// Whether `_A M_B` is compatible, evaluated on test sets: `M ⊗_B −`
/// keeps the periodic totally acyclic complexes exact and kills higher
/// Tor against Gorenstein projective `B`-modules, and
/// `Ext^1_A(G, M) = 0` for Gorenstein projective `A`-modules `G`.
#[derive(Clone, Debug)]
pub struct CompatibilityReport {
    pub condition: Condition,
    pub tensor_part: Vec<TorCheck>,
    pub ext_part: Vec<ExtCheck>,
}

fn tensor_exact_over_period(m: &Bimodule, g: &Module, settings: &Settings) -> Option<bool> {
    let res = min_resolution(g, settings);
    let Outcome::Periodic(cert) = &res.outcome else {
        return None;
    };
    let maps = periodic_segment(&res, cert);
    let d = maps.len();
    let tensors: Vec<TensorProduct> = (0..d)
        .map(|k| m.tensor(res.projective(cert.i + k)).expect("same algebra"))
        .collect();
    // maps[k]: P_{k+1} → P_k, indices mod d
    let induced: Vec<Morphism> = (0..d)
        .map(|k| {
            let src = if k + 1 < d { &tensors[k + 1] } else { &tensors[0] };
            m.tensor_map(src, &tensors[k], &maps[k])
        })
        .collect();
    Some((0..d).all(|k| {
        let incoming = &induced[k];
        let outgoing = &induced[(k + d - 1) % d];
        outgoing.compose(incoming).is_zero()
            && incoming.rank() + outgoing.rank() == tensors[k].module.dim()
    }))
}

pub fn compatibility_check(tm: &TriMat, settings: &Settings) -> CompatibilityReport {
    let tensor_part: Vec<TorCheck> = gproj_test_set(&tm.b, settings)
        .into_iter()
        .map(|g| {
            let res = min_resolution(&g, settings);
            let top = match &res.outcome {
                Outcome::Finite { pd } => *pd,
                Outcome::Periodic(c) => c.j,
                Outcome::Truncated { bound } => *bound,
            };
            let values: Vec<Option<usize>> = (1..=top.min(settings.bound).max(1))
                .map(|i| tor_from(&tm.m, &res, i))
                .collect();
            let tor: Vec<(usize, usize)> = values
                .iter()
                .enumerate()
                .filter_map(|(k, v)| v.map(|v| (k + 1, v)))
                .collect();
            let periodic_exact = tensor_exact_over_period(&tm.m, &g, settings);
            let condition = if tor.iter().any(|&(_, v)| v != 0) || periodic_exact == Some(false) {
                Condition::Fails
            } else if values.iter().any(Option::is_none) || matches!(res.outcome, Outcome::Truncated { .. }) {
                Condition::Unknown
            } else {
                Condition::Holds
            };
            TorCheck {
                module: g,
                tor,
                periodic_exact,
                condition,
            }
        })
        .collect();
    let m_left = tm.m_left();
    let ext_part: Vec<ExtCheck> = gproj_test_set(&tm.a, settings)
        .into_iter()
        .map(|g| ExtCheck {
            ext1: ext(&g, &m_left, 1, settings),
            module: g,
        })
        .collect();
    let ext_condition = Condition::all(ext_part.iter().map(|c| match c.ext1 {
        Some(0) => Condition::Holds,
        Some(_) => Condition::Fails,
        None => Condition::Unknown,
    }));
    CompatibilityReport {
        condition: Condition::all(tensor_part.iter().map(|c| c.condition)).and(ext_condition),
        tensor_part,
        ext_part,
    }
}

/// The triple-side criterion for Gorenstein projectivity: `Y` Gorenstein
/// projective, `φ` injective, and `coker φ` Gorenstein projective.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", content = "reason", rename_all = "snake_case")]
pub enum Criterion {
    Yes,
    No(&'static str),
    Unknown,
}

impl Criterion {
    pub fn verdict(&self) -> &'static str {
        match self {
            Criterion::Yes => "yes",
            Criterion::No(_) => "no",
            Criterion::Unknown => "unknown",
        }
    }
}

#[derive(Clone, Debug)]
pub struct TripleGprojReport {
    pub criterion: Criterion,
    pub direct: GprojVerdict,
    /// Present when both answers are certified.
    pub agree: Option<bool>,
}

/// Compares the triple criterion with a direct check over `T`. Requires a
/// compatible bimodule.
pub fn triple_gproj_check(
    tm: &TriMat,
    tr: &TripleModule,
    compatibility: Condition,
    settings: &Settings,
) -> Result<TripleGprojReport, TriMatError> {
    if compatibility != Condition::Holds {
        return Err(TriMatError::HypothesisUnmet("the bimodule is not certified compatible"));
    }
    let y = gproj_check(&tr.y, settings);
    let criterion = if y.is_no() {
        Criterion::No("Y is not Gorenstein projective")
    } else if !tr.phi.is_injective() {
        Criterion::No("phi is not injective")
    } else {
        let c = gproj_check(&tr.phi.cokernel().module, settings);
        if c.is_no() {
            Criterion::No("coker phi is not Gorenstein projective")
        } else if y.is_yes() && c.is_yes() {
            Criterion::Yes
        } else {
            Criterion::Unknown
        }
    };
    let direct = gproj_check(&tm.triple_to_module(tr)?, settings);
    let agree = match (&criterion, direct.is_unknown()) {
        (Criterion::Unknown, _) | (_, true) => None,
        (Criterion::Yes, false) => Some(direct.is_yes()),
        (Criterion::No(_), false) => Some(direct.is_no()),
    };
    Ok(TripleGprojReport {
        criterion,
        direct,
        agree,
    })
}

/// Agreement of two dimension values when both are certified.
pub fn dims_agree(x: &DimValue, y: &DimValue) -> Option<bool> {
    match (x, y) {
        (DimValue::Finite(a), DimValue::Finite(b)) => Some(a == b),
        (DimValue::Infinite(_), DimValue::Infinite(_)) => Some(true),
        (DimValue::Unknown { .. }, _) | (_, DimValue::Unknown { .. }) => None,
        _ => Some(false),
    }
}

#[derive(Clone, Debug)]
pub struct LeftGpdReport {
    /// `Gpd_T (X, 0)`.
    pub over_t: DimValue,
    /// `Gpd_A X`.
    pub over_a: DimValue,
    pub agree: Option<bool>,
}

/// `Gpd_T (X, 0) = Gpd_A X` for a compatible bimodule.
pub fn left_gpd_check(
    tm: &TriMat,
    x: &Module,
    compatibility: Condition,
    settings: &Settings,
) -> Result<LeftGpdReport, TriMatError> {
    if compatibility != Condition::Holds {
        return Err(TriMatError::HypothesisUnmet("the bimodule is not certified compatible"));
    }
    let over_t = gpd(&tm.triple_to_module(&tm.left_triple(x)?)?, settings);
    let over_a = gpd(x, settings);
    let agree = dims_agree(&over_t, &over_a);
    Ok(LeftGpdReport {
        over_t,
        over_a,
        agree,
    })
}

#[derive(Clone, Debug)]
pub struct RightGpdReport {
    /// `Gpd_A (M ⊗ G)` finite for all test-set `G` over `B`.
    pub hypothesis: Condition,
    /// `Gpd_T (0, Y)`.
    pub over_t: DimValue,
    /// `Gpd_B Y`.
    pub over_b: DimValue,
    /// Finiteness of the two sides agrees.
    pub agree: Option<bool>,
}

/// `Gpd_T (0, Y)` finite iff `Gpd_B Y` finite, under compatibility and
/// finiteness of `Gpd_A (M ⊗ G)` on the test set.
pub fn right_gpd_check(
    tm: &TriMat,
    y: &Module,
    compatibility: Condition,
    settings: &Settings,
) -> Result<RightGpdReport, TriMatError> {
    if compatibility != Condition::Holds {
        return Err(TriMatError::HypothesisUnmet("the bimodule is not certified compatible"));
    }
    let hypothesis = tensor_gpd_condition(tm, settings);
    let over_t = gpd(&tm.triple_to_module(&tm.right_triple(y)?)?, settings);
    let over_b = gpd(y, settings);
    let agree = match (over_t.is_unknown(), over_b.is_unknown()) {
        (false, false) => Some(over_t.is_finite() == over_b.is_finite()),
        _ => None,
    };
    Ok(RightGpdReport {
        hypothesis,
        over_t,
        over_b,
        agree,
    })
}

/// `Gpd_A (M ⊗_B G) < ∞` for every `G` in the test set of `B`.
pub fn tensor_gpd_condition(tm: &TriMat, settings: &Settings) -> Condition {
    Condition::all(gproj_test_set(&tm.b, settings).iter().map(|g| {
        let t = tm.m.tensor(g).expect("same algebra");
        Condition::of_dim(&gpd(&t.module, settings))
    }))
}

/// A named hypothesis with its verdict string.
#[derive(Clone, Debug, Serialize)]
pub struct Hypothesis {
    pub name: &'static str,
    pub verdict: String,
    pub condition: Condition,
}

/// A property of `T` granted by an equivalence: `T` has it iff the corner
/// algebra has it.
#[derive(Clone, Debug, Serialize)]
pub struct Transfer {
    pub property: &'static str,
    pub corner: &'static str,
    pub corner_verdict: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct CornerReport {
    pub corner: &'static str,
    pub compatibility: Condition,
    pub hypotheses: Vec<Hypothesis>,
    /// `D_def(T) ≃ D_def(corner)` via the Schur functor.
    pub defect_equivalence: Conclusion,
    /// The singularity, stable Gorenstein projective and defect categories
    /// all correspond.
    pub full_diagram: Conclusion,
    pub transfers: Vec<Transfer>,
}

impl CornerReport {
    /// `full_diagram`, `defect_only`, `neither` or `inconclusive`.
    pub fn case(&self) -> &'static str {
        match (self.full_diagram, self.defect_equivalence) {
            (Conclusion::Holds, _) => "full_diagram",
            (Conclusion::Fails, Conclusion::Holds) => "defect_only",
            (Conclusion::Fails, Conclusion::Fails) => "neither",
            _ => "inconclusive",
        }
    }
}

fn gorenstein_hypothesis(name: &'static str, alg: &Arc<Algebra>, settings: &Settings) -> Hypothesis {
    let op = Arc::new(alg.opposite());
    let v = gorenstein_check(alg, &op, settings);
    let condition = match v.verdict() {
        "yes" => Condition::Holds,
        "no" => Condition::Fails,
        _ => Condition::Unknown,
    };
    Hypothesis {
        name,
        verdict: v.verdict().to_string(),
        condition,
    }
}

fn dim_hypothesis(name: &'static str, d: DimValue) -> Hypothesis {
    Hypothesis {
        name,
        verdict: d.verdict(),
        condition: Condition::of_dim(&d),
    }
}

fn transfers(
    corner: &'static str,
    alg: &Arc<Algebra>,
    defect: Conclusion,
    diagram: Conclusion,
    settings: &Settings,
) -> Vec<Transfer> {
    let mut out = Vec::new();
    if defect == Conclusion::Holds {
        let op = Arc::new(alg.opposite());
        out.push(Transfer {
            property: "gorenstein",
            corner,
            corner_verdict: gorenstein_check(alg, &op, settings).verdict().to_string(),
        });
    }
    if diagram == Conclusion::Holds {
        out.push(Transfer {
            property: "cm_free",
            corner,
            corner_verdict: cm_free_check(alg, settings).verdict().to_string(),
        });
    }
    out
}

/// The Schur functor at `e_A`: the defect categories of `T` and `A` agree
/// iff `B` is Gorenstein and `Gpd_A (M ⊗ G) < ∞` for Gorenstein projective
/// `G`; the full diagram exists iff moreover `gldim B < ∞` and
/// `pd_A M < ∞` (replacing the Gorenstein condition).
pub fn check_at_a(tm: &TriMat, compatibility: Condition, settings: &Settings) -> CornerReport {
    let b_gor = gorenstein_hypothesis("B gorenstein", &tm.b, settings);
    let tensor = tensor_gpd_condition(tm, settings);
    let tensor_h = Hypothesis {
        name: "gpd_A(M ⊗ G) finite on test set",
        verdict: tensor.verdict().to_string(),
        condition: tensor,
    };
    let gl_b = dim_hypothesis("gldim B", global_dim(&tm.b, settings));
    let pd_m = dim_hypothesis("pd_A M", pd(&tm.m_left(), settings));
    let defect = Conclusion::from_conditions(compatibility, &[b_gor.condition, tensor]);
    let diagram = Conclusion::from_conditions(compatibility, &[gl_b.condition, pd_m.condition, tensor]);
    CornerReport {
        corner: "A",
        compatibility,
        transfers: transfers("A", &tm.a, defect, diagram, settings),
        hypotheses: vec![b_gor, tensor_h, gl_b, pd_m],
        defect_equivalence: defect,
        full_diagram: diagram,
    }
}

/// The Schur functor at `e_B`: the defect categories of `T` and `B` agree
/// iff `A` is Gorenstein; the full diagram exists iff `gldim A < ∞`.
pub fn check_at_b(tm: &TriMat, compatibility: Condition, settings: &Settings) -> CornerReport {
    let a_gor = gorenstein_hypothesis("A gorenstein", &tm.a, settings);
    let gl_a = dim_hypothesis("gldim A", global_dim(&tm.a, settings));
    let defect = Conclusion::from_conditions(compatibility, &[a_gor.condition]);
    let diagram = Conclusion::from_conditions(compatibility, &[gl_a.condition]);
    CornerReport {
        corner: "B",
        compatibility,
        transfers: transfers("B", &tm.b, defect, diagram, settings),
        hypotheses: vec![a_gor, gl_a],
        defect_equivalence: defect,
        full_diagram: diagram,
    }
}

/// A random triple with `X`, `Y` of dimension at most `max_dim`. Half the
/// time `Y` is drawn from `y_pool` and `X = (M ⊗ Y) ⊕ Z` with `φ` the
/// inclusion, so that the criterion can come out positive.
pub fn random_triple<R: Rng>(
    tm: &TriMat,
    y_pool: &[Module],
    max_dim: usize,
    rng: &mut R,
) -> Result<TripleModule, TriMatError> {
    let small: Vec<&Module> = y_pool.iter().filter(|g| g.dim() <= max_dim).collect();
    if !small.is_empty() && rng.gen_bool(0.5) {
        let y = small[rng.gen_range(0..small.len())].clone();
        let tensor = tm.m.tensor(&y)?;
        let z = random_module(&tm.a, max_dim, rng);
        let sum = Module::direct_sum(&[tensor.module.clone(), z])?;
        return Ok(TripleModule {
            x: sum.module.clone(),
            y,
            tensor,
            phi: sum.injections[0].clone(),
        });
    }
    let x = random_module(&tm.a, max_dim, rng);
    let y = random_module(&tm.b, max_dim, rng);
    let tensor = tm.m.tensor(&y)?;
    let homs = hom_space(&tensor.module, &x)?;
    let phi = if homs.is_empty() {
        Morphism::zero(tensor.module.clone(), x.clone())
    } else {
        random_combination(&homs, rng)
    };
    Ok(TripleModule { x, y, tensor, phi })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homalg::tests::{a2, algebra};
    use crate::modcat::is_isomorphic;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn ground() -> Arc<Algebra> {
        Arc::new(Algebra::ground(crate::exactfield::Field::default()))
    }

    fn settings() -> Settings {
        Settings::default()
    }

    /// `α: 1 → 2, γ: 3 → 1, δ: 4 → 2, β: 3 → 4, β': 4 → 3, θ: 4 → 5` with
    /// `β'β, ββ', θβ` and `αγ − δβ`, optionally with `α': 2 → 1` and the
    /// relations `α'α, αα', α'δ − γβ'`.
    fn thirteen(extended: bool) -> Arc<Algebra> {
        use crate::exactfield::Field;
        use crate::quivalg::{build_algebra, Quiver, Relation};
        let mut q = Quiver::new(["1", "2", "3", "4", "5"]).unwrap();
        for (a, s, t) in [("al", "1", "2"), ("ga", "3", "1"), ("de", "4", "2"), ("be", "3", "4"), ("bp", "4", "3"), ("th", "4", "5")] {
            q.add_arrow(a, s, t).unwrap();
        }
        if extended {
            q.add_arrow("ap", "2", "1").unwrap();
        }
        let mono = |q: &Quiver, s: &str| Relation::monomial(q, q.parse_path(s).unwrap()).unwrap();
        let diff = |q: &Quiver, x: &str, y: &str| {
            Relation::new(q, vec![(1, q.parse_path(x).unwrap()), (-1, q.parse_path(y).unwrap())]).unwrap()
        };
        let mut rels = vec![mono(&q, "bp*be"), mono(&q, "be*bp"), mono(&q, "th*be"), diff(&q, "al*ga", "de*be")];
        if extended {
            rels.extend([mono(&q, "ap*al"), mono(&q, "al*ap"), diff(&q, "ap*de", "ga*bp")]);
        }
        Arc::new(build_algebra(Field::default(), &q, &rels, 12).unwrap().into_algebra())
    }

    fn k_bimodule(a: &Arc<Algebra>, b: &Arc<Algebra>) -> Bimodule {
        let f = a.field();
        Bimodule::new(a.clone(), b.clone(), vec![(0, 0)], vec![Mat::identity(f, 1)], vec![Mat::identity(f, 1)]).unwrap()
    }

    #[test]
    fn upper_triangular_over_k() {
        let k = ground();
        let tm = TriMat::build(k.clone(), k.clone(), k_bimodule(&k, &k)).unwrap();
        assert_eq!(tm.t().dim(), 3);
        assert!(!tm.t().is_semisimple());
        assert!(tm.t().is_radical_square_zero());
        // same multiplication as the path algebra of A2
        let (other, _) = TriMat::from_split(&a2(), &[1]).unwrap();
        assert_eq!(other.t().dim(), 3);
        assert_eq!(other.a().dim(), 1);
        assert_eq!(other.bimodule().dim(), 1);
    }

    #[test]
    fn zero_bimodule_gives_product() {
        let k = ground();
        let zero = Bimodule::new(k.clone(), k.clone(), vec![], vec![Mat::zeros(k.field(), 0, 0)], vec![Mat::zeros(k.field(), 0, 0)]).unwrap();
        let tm = TriMat::build(k.clone(), k.clone(), zero).unwrap();
        assert_eq!(tm.t().dim(), 2);
        assert!(tm.t().is_semisimple());
    }

    #[test]
    fn splits() {
        let alg = thirteen(false);
        assert_eq!(alg.dim(), 13);
        let (tm, matching) = TriMat::from_split(&alg, &[0, 1]).unwrap();
        assert_eq!((tm.a().dim(), tm.bimodule().dim(), tm.b().dim()), (3, 4, 6));
        assert_eq!(matching.len(), 13);
        assert!(matches!(TriMat::from_split(&alg, &[2, 3, 4]), Err(TriMatError::NotTriangular)));
        assert!(matches!(TriMat::from_split(&alg, &[]), Err(TriMatError::BadSplit)));
        let ext = thirteen(true);
        assert_eq!(ext.dim(), 14);
        let (tm, _) = TriMat::from_split(&ext, &[0, 1]).unwrap();
        assert_eq!(tm.a().dim(), 4);
    }

    #[test]
    fn triples_round_trip() {
        let (tm, _) = TriMat::from_split(&thirteen(true), &[0, 1]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let pool = gproj_test_set(tm.b(), &settings());
        for _ in 0..10 {
            let tr = random_triple(&tm, &pool, 4, &mut rng).unwrap();
            let n = tm.triple_to_module(&tr).unwrap();
            let back = tm.module_to_triple(&n).unwrap();
            assert_eq!(back.x.actions(), tr.x.actions());
            assert_eq!(back.y.actions(), tr.y.actions());
            assert_eq!(back.phi.flatten(), tr.phi.flatten());
        }
        let zero = tm.triple_to_module(&tm.left_triple(&Module::zero(tm.a().clone())).unwrap()).unwrap();
        assert!(zero.is_zero());
    }

    #[test]
    fn projective_triples() {
        let (tm, _) = TriMat::from_split(&thirteen(false), &[0, 1]).unwrap();
        let na = tm.a().num_vertices();
        for v in 0..na {
            let p = Module::projective(tm.a().clone(), v);
            let n = tm.triple_to_module(&tm.left_triple(&p).unwrap()).unwrap();
            assert!(n.is_projective());
            assert!(is_isomorphic(&n, &Module::projective(tm.t().clone(), v), 32, 0).unwrap().is_yes());
        }
        for w in 0..tm.b().num_vertices() {
            let q = Module::projective(tm.b().clone(), w);
            let n = tm.triple_to_module(&tm.induced_triple(&q).unwrap()).unwrap();
            assert!(is_isomorphic(&n, &Module::projective(tm.t().clone(), na + w), 32, 0).unwrap().is_yes());
        }
    }

    #[test]
    fn short_exact_sequences() {
        let (tm, _) = TriMat::from_split(&thirteen(false), &[0, 1]).unwrap();
        let q = Module::projective(tm.b().clone(), 1);
        let left = tm.left_triple(&tm.bimodule().tensor(&q).unwrap().module).unwrap();
        let mid = tm.induced_triple(&q).unwrap();
        let right = tm.right_triple(&q).unwrap();
        let id_x = Morphism::identity(left.x.clone());
        let zero_y = Morphism::zero(left.y.clone(), q.clone());
        let zero_x = Morphism::zero(mid.x.clone(), right.x.clone());
        let id_y = Morphism::identity(q.clone());
        let r = ses_check(&tm, [&left, &mid, &right], (&id_x, &zero_y), (&zero_x, &id_y)).unwrap();
        assert!(r.t_level && r.consistent());
        // dropping the middle Y breaks exactness in the Y-component
        let mid_bad = tm.left_triple(&mid.x).unwrap();
        let zero_y2 = Morphism::zero(mid_bad.y.clone(), q.clone());
        let r = ses_check(&tm, [&left, &mid_bad, &right], (&id_x, &Morphism::zero(left.y.clone(), mid_bad.y.clone())), (&zero_x, &zero_y2)).unwrap();
        assert!(!r.t_level && !r.y_level && r.consistent());
    }

    #[test]
    fn extended_example_checks() {
        let (tm, _) = TriMat::from_split(&thirteen(true), &[0, 1]).unwrap();
        let compat = compatibility_check(&tm, &settings());
        assert_eq!(compat.condition, Condition::Holds);
        let r = check_at_b(&tm, compat.condition, &settings());
        assert_eq!(r.case(), "defect_only");
        for s in Module::simples(tm.a()) {
            let l = left_gpd_check(&tm, &s, compat.condition, &settings()).unwrap();
            assert_eq!(l.agree, Some(true));
            assert_eq!(l.over_a.finite(), Some(0));
        }
    }

    #[test]
    fn basic_example_checks() {
        let (tm, _) = TriMat::from_split(&thirteen(false), &[0, 1]).unwrap();
        let compat = compatibility_check(&tm, &settings());
        assert_eq!(compat.condition, Condition::Holds);
        let r = check_at_b(&tm, compat.condition, &settings());
        assert_eq!(r.case(), "full_diagram");
        assert!(r.transfers.iter().any(|t| t.property == "cm_free"));
    }

    #[test]
    fn nine_dimensional_split() {
        let alg = algebra(
            &["1", "2", "3", "4"],
            &[("a", "1", "2"), ("b", "2", "3"), ("c", "3", "2"), ("d", "3", "4")],
            &["b*c", "c*b", "d*b"],
        );
        let (tm, _) = TriMat::from_split(&alg, &[1, 2, 3]).unwrap();
        assert_eq!((tm.a().dim(), tm.bimodule().dim(), tm.b().dim()), (6, 2, 1));
        assert!(tm.m_left().is_projective());
        let compat = compatibility_check(&tm, &settings());
        assert_eq!(compat.condition, Condition::Holds);
        let r = check_at_a(&tm, compat.condition, &settings());
        assert_eq!(r.case(), "full_diagram");
        let y = Module::simple(tm.b().clone(), 0);
        let rr = right_gpd_check(&tm, &y, compat.condition, &settings()).unwrap();
        assert_eq!(rr.agree, Some(true));
    }

    #[test]
    fn criterion_agrees_with_direct_check() {
        let (tm, _) = TriMat::from_split(&thirteen(true), &[0, 1]).unwrap();
        let s = settings();
        let compat = compatibility_check(&tm, &s).condition;
        let pool = gproj_test_set(tm.b(), &s);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..8 {
            let tr = random_triple(&tm, &pool, 4, &mut rng).unwrap();
            let r = triple_gproj_check(&tm, &tr, compat, &s).unwrap();
            assert_ne!(r.agree, Some(false), "{r:?}");
        }
        // (0, S3) with S3 not Gorenstein projective
        let s3 = Module::simple(tm.b().clone(), 0);
        let r = triple_gproj_check(&tm, &tm.right_triple(&s3).unwrap(), compat, &s).unwrap();
        assert!(matches!(r.criterion, Criterion::No(_)));
        assert_eq!(r.agree, Some(true));
    }
}
