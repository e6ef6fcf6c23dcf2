//! Finitely generated left modules and their morphisms.
//!
//! A module over a split basic algebra is stored vertex by vertex: `M_v = e_v M`
//! has dimension `dims[v]`, and each algebra basis element `b` of grade
//! `(l, r)` acts by a `dims[l] × dims[r]` block. Morphisms are families of
//! per-vertex blocks.

mod bimodule;
mod hom;
mod iso;

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::exactfield::{Field, Mat, Scalar};
use crate::quivalg::{Algebra, QuiverAlgebra};

pub use bimodule::{Bimodule, TensorProduct};
pub use hom::{hom_dim, hom_space, random_combination, random_module};
pub use iso::{is_isomorphic, IsoObstruction, IsoVerdict, DEFAULT_SAMPLES};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModuleError {
    #[error("algebra mismatch")]
    AlgebraMismatch,
    #[error("wrong number of {what}: expected {expected}, got {got}")]
    Count {
        what: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("block for `{0}` has the wrong shape")]
    BlockShape(String),
    #[error("action violates the module law at ({0}, {1})")]
    ModuleLaw(String, String),
    #[error("idempotent `{0}` does not act as the identity on its vertex")]
    Idempotent(String),
    #[error("linear map does not commute with the action of `{0}`")]
    NotIntertwining(String),
    #[error("vectors do not span a submodule")]
    NotSubmodule,
    #[error("bimodule invalid: {0}")]
    BimoduleInvalid(String),
}

struct ModuleInner {
    alg: Arc<Algebra>,
    dims: Vec<usize>,
    offsets: Vec<usize>,
    actions: Vec<Mat>,
}

/// A finitely generated left module. Cheap to clone.
#[derive(Clone)]
pub struct Module(Arc<ModuleInner>);

impl fmt::Debug for Module {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Module{:?}", self.0.dims)
    }
}

pub(crate) fn same_algebra(a: &Arc<Algebra>, b: &Arc<Algebra>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl Module {
    /// Builds a module from per-basis-element action blocks, validating the
    /// module laws.
    pub fn new(alg: Arc<Algebra>, dims: Vec<usize>, actions: Vec<Mat>) -> Result<Self, ModuleError> {
        if dims.len() != alg.num_vertices() {
            return Err(ModuleError::Count {
                what: "vertex dimensions",
                expected: alg.num_vertices(),
                got: dims.len(),
            });
        }
        if actions.len() != alg.dim() {
            return Err(ModuleError::Count {
                what: "action blocks",
                expected: alg.dim(),
                got: actions.len(),
            });
        }
        for (b, a) in actions.iter().enumerate() {
            let (l, r) = alg.grade(b);
            if a.shape() != (dims[l], dims[r]) || a.field() != alg.field() {
                return Err(ModuleError::BlockShape(alg.label(b).to_string()));
            }
        }
        let m = Module::assemble(alg, dims, actions);
        m.validate()?;
        Ok(m)
    }

    pub(crate) fn from_parts(alg: Arc<Algebra>, dims: Vec<usize>, actions: Vec<Mat>) -> Self {
        let m = Module::assemble(alg, dims, actions);
        debug_assert!(m.validate().is_ok(), "internal module construction broke the module laws");
        m
    }

    fn assemble(alg: Arc<Algebra>, dims: Vec<usize>, actions: Vec<Mat>) -> Self {
        let mut offsets = Vec::with_capacity(dims.len());
        let mut total = 0;
        for &d in &dims {
            offsets.push(total);
            total += d;
        }
        Module(Arc::new(ModuleInner {
            alg,
            dims,
            offsets,
            actions,
        }))
    }

    /// Checks `A(b)A(b') = A(bb')` on all composable basis pairs and that the
    /// idempotents act as identities.
    pub fn validate(&self) -> Result<(), ModuleError> {
        let alg = self.algebra();
        for (v, &e) in alg.idempotents().iter().enumerate() {
            if !self.action(e).is_identity() {
                return Err(ModuleError::Idempotent(alg.vertex_labels()[v].clone()));
            }
        }
        let n = alg.dim();
        for i in alg.radical().iter().copied() {
            for j in alg.radical().iter().copied() {
                let (li, ri) = alg.grade(i);
                let (lj, rj) = alg.grade(j);
                if ri != lj {
                    continue;
                }
                let lhs = self.action(i).mul(self.action(j));
                let mut rhs = Mat::zeros(alg.field(), self.dims()[li], self.dims()[rj]);
                for &(k, c) in alg.mul_basis(i, j) {
                    rhs.add_scaled(c, self.action(k));
                }
                if lhs != rhs {
                    return Err(ModuleError::ModuleLaw(
                        alg.label(i).to_string(),
                        alg.label(j).to_string(),
                    ));
                }
            }
        }
        debug_assert!(n == self.0.actions.len());
        Ok(())
    }

    pub fn algebra(&self) -> &Algebra {
        &self.0.alg
    }

    pub fn algebra_arc(&self) -> &Arc<Algebra> {
        &self.0.alg
    }

    pub fn field(&self) -> Field {
        self.0.alg.field()
    }

    pub fn dims(&self) -> &[usize] {
        &self.0.dims
    }

    pub fn dim(&self) -> usize {
        self.0.dims.iter().sum()
    }

    pub fn offset(&self, v: usize) -> usize {
        self.0.offsets[v]
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    /// Action block of basis element `b`.
    pub fn action(&self, b: usize) -> &Mat {
        &self.0.actions[b]
    }

    pub fn actions(&self) -> &[Mat] {
        &self.0.actions
    }

    /// Action of basis element `b` on the whole space.
    pub fn full_action(&self, b: usize) -> Mat {
        let (l, r) = self.algebra().grade(b);
        let mut m = Mat::zeros(self.field(), self.dim(), self.dim());
        m.set_block(self.offset(l), self.offset(r), self.action(b));
        m
    }

    /// Action of an arbitrary algebra element on the whole space.
    pub fn element_action(&self, x: &[Scalar]) -> Mat {
        let mut m = Mat::zeros(self.field(), self.dim(), self.dim());
        for (b, &c) in x.iter().enumerate() {
            if c != 0 {
                m.add_scaled(c, &self.full_action(b));
            }
        }
        m
    }

    pub fn same_algebra(&self, other: &Module) -> bool {
        same_algebra(&self.0.alg, &other.0.alg)
    }

    pub(crate) fn check_same_algebra(&self, other: &Module) -> Result<(), ModuleError> {
        if self.same_algebra(other) {
            Ok(())
        } else {
            Err(ModuleError::AlgebraMismatch)
        }
    }

    /// The same module structure over an equal algebra given by another
    /// handle (for example a corner rebuilt from the same data).
    pub fn rebind(&self, alg: Arc<Algebra>) -> Result<Module, ModuleError> {
        if !same_algebra(&alg, &self.0.alg) {
            return Err(ModuleError::AlgebraMismatch);
        }
        Ok(Module::from_parts(alg, self.0.dims.clone(), self.0.actions.clone()))
    }

    pub fn zero(alg: Arc<Algebra>) -> Module {
        let dims = vec![0; alg.num_vertices()];
        Module::with_action(alg, dims, |_, _| unreachable!())
    }

    /// Builds a module whose action blocks come from `f(b, shape)`.
    fn with_action(
        alg: Arc<Algebra>,
        dims: Vec<usize>,
        mut f: impl FnMut(usize, (usize, usize)) -> Mat,
    ) -> Module {
        let field = alg.field();
        let actions = (0..alg.dim())
            .map(|b| {
                let (l, r) = alg.grade(b);
                let shape = (dims[l], dims[r]);
                if shape.0 == 0 || shape.1 == 0 {
                    Mat::zeros(field, shape.0, shape.1)
                } else {
                    f(b, shape)
                }
            })
            .collect();
        Module::from_parts(alg, dims, actions)
    }

    /// The simple module at vertex `v`.
    pub fn simple(alg: Arc<Algebra>, v: usize) -> Module {
        let mut dims = vec![0; alg.num_vertices()];
        dims[v] = 1;
        let e = alg.idempotent(v);
        let field = alg.field();
        Module::with_action(alg, dims, |b, (r, c)| {
            if b == e {
                Mat::identity(field, 1)
            } else {
                Mat::zeros(field, r, c)
            }
        })
    }

    pub fn simples(alg: &Arc<Algebra>) -> Vec<Module> {
        (0..alg.num_vertices())
            .map(|v| Module::simple(alg.clone(), v))
            .collect()
    }

    /// The direct sum `⊕ R·e_v` over the listed vertices (with repetition),
    /// summands in the given order.
    pub fn free(alg: Arc<Algebra>, summands: &[usize]) -> Module {
        let nv = alg.num_vertices();
        // coordinates at vertex u: for each summand c, the basis of e_u R e_{v_c}
        let blocks: Vec<Vec<Vec<usize>>> = summands
            .iter()
            .map(|&v| (0..nv).map(|u| alg.block(u, v)).collect())
            .collect();
        let dims: Vec<usize> = (0..nv)
            .map(|u| blocks.iter().map(|b| b[u].len()).sum())
            .collect();
        let field = alg.field();
        let alg2 = alg.clone();
        Module::with_action(alg, dims, |b, (rows, cols)| {
            let (l, r) = alg2.grade(b);
            let mut m = Mat::zeros(field, rows, cols);
            let (mut r0, mut c0) = (0, 0);
            for blk in &blocks {
                let src = &blk[r];
                let dst = &blk[l];
                for (j, &y) in src.iter().enumerate() {
                    for &(k, c) in alg2.mul_basis(b, y) {
                        let i = dst.iter().position(|&d| d == k).expect("graded product");
                        m.set(r0 + i, c0 + j, c);
                    }
                }
                r0 += dst.len();
                c0 += src.len();
            }
            m
        })
    }

    /// The indecomposable projective `R·e_v`.
    pub fn projective(alg: Arc<Algebra>, v: usize) -> Module {
        Module::free(alg, &[v])
    }

    /// The left regular module `R = ⊕_v R·e_v`.
    pub fn regular(alg: Arc<Algebra>) -> Module {
        let summands: Vec<usize> = (0..alg.num_vertices()).collect();
        Module::free(alg, &summands)
    }

    /// A module over a bound quiver algebra from per-arrow matrices; the
    /// matrix of arrow `u -> v` is `dims[v] × dims[u]`.
    pub fn from_representation(
        qa: &QuiverAlgebra,
        alg: Arc<Algebra>,
        dims: Vec<usize>,
        arrow_maps: &[Mat],
    ) -> Result<Module, ModuleError> {
        if *alg != *qa.algebra() {
            return Err(ModuleError::AlgebraMismatch);
        }
        let q = qa.quiver();
        if arrow_maps.len() != q.arrows().len() {
            return Err(ModuleError::Count {
                what: "arrow matrices",
                expected: q.arrows().len(),
                got: arrow_maps.len(),
            });
        }
        if dims.len() != q.vertices().len() {
            return Err(ModuleError::Count {
                what: "vertex dimensions",
                expected: q.vertices().len(),
                got: dims.len(),
            });
        }
        for (a, m) in arrow_maps.iter().enumerate() {
            let arrow = &q.arrows()[a];
            if m.shape() != (dims[arrow.target], dims[arrow.source]) {
                return Err(ModuleError::BlockShape(arrow.label.clone()));
            }
        }
        let field = alg.field();
        let actions = qa
            .basis_paths()
            .iter()
            .map(|p| {
                if p.is_trivial() {
                    Mat::identity(field, dims[p.source])
                } else {
                    p.arrows[1..]
                        .iter()
                        .fold(arrow_maps[p.arrows[0]].clone(), |acc, &a| arrow_maps[a].mul(&acc))
                }
            })
            .collect();
        Module::new(alg, dims, actions)
    }

    /// Per-vertex dimensions of the top `M / rad M`.
    pub fn top_dims(&self) -> Vec<usize> {
        let rad = self.radical_of();
        self.dims()
            .iter()
            .zip(rad.module.dims())
            .map(|(a, b)| a - b)
            .collect()
    }

    /// The submodule spanned by columns of the given per-vertex matrices.
    /// Fails unless the span is closed under the action.
    pub fn submodule(&self, spans: &[Mat]) -> Result<Sub, ModuleError> {
        let field = self.field();
        let bases: Vec<Mat> = spans.iter().map(|s| s.column_space()).collect();
        let alg = self.algebra();
        let mut actions = Vec::with_capacity(alg.dim());
        for b in 0..alg.dim() {
            let (l, r) = alg.grade(b);
            let image = self.action(b).mul(&bases[r]);
            let block = if bases[l].cols() == 0 {
                if !image.is_zero() {
                    return Err(ModuleError::NotSubmodule);
                }
                Mat::zeros(field, 0, bases[r].cols())
            } else {
                bases[l].solve_matrix(&image).ok_or(ModuleError::NotSubmodule)?
            };
            actions.push(block);
        }
        let dims = bases.iter().map(|b| b.cols()).collect();
        let module = Module::from_parts(self.0.alg.clone(), dims, actions);
        let inclusion = Morphism::from_parts(module.clone(), self.clone(), bases);
        Ok(Sub { module, inclusion })
    }

    /// The quotient by the submodule spanned by the given per-vertex columns
    /// (assumed closed under the action).
    pub fn quotient(&self, spans: &[Mat]) -> Quot {
        let alg = self.algebra();
        let quotients: Vec<_> = spans.iter().map(|s| s.cokernel()).collect();
        let actions = (0..alg.dim())
            .map(|b| {
                let (l, r) = alg.grade(b);
                quotients[l]
                    .projection
                    .mul(self.action(b))
                    .mul(&quotients[r].section)
            })
            .collect();
        let dims = quotients.iter().map(|q| q.dim()).collect();
        let module = Module::from_parts(self.0.alg.clone(), dims, actions);
        let projection = Morphism::from_parts(
            self.clone(),
            module.clone(),
            quotients.iter().map(|q| q.projection.clone()).collect(),
        );
        Quot {
            module,
            projection,
            section: quotients.into_iter().map(|q| q.section).collect(),
        }
    }

    /// `rad M`, the span of the radical acting on `M`.
    pub fn radical_of(&self) -> Sub {
        let alg = self.algebra();
        let field = self.field();
        let spans: Vec<Mat> = (0..alg.num_vertices())
            .map(|v| {
                let blocks: Vec<&Mat> = alg
                    .generators()
                    .iter()
                    .filter(|&&g| alg.grade(g).0 == v)
                    .map(|&g| self.action(g))
                    .collect();
                Mat::hstack(field, self.dims()[v], &blocks)
            })
            .collect();
        self.submodule(&spans).expect("the radical is a submodule")
    }

    pub fn top(&self) -> Quot {
        let rad = self.radical_of();
        self.quotient(rad.inclusion.blocks())
    }

    /// Minimal projective cover `⊕ P(v)^{t_v} → M`, where `t_v` is the
    /// multiplicity of the simple at `v` in the top of `M`.
    pub fn projective_cover(&self) -> Cover {
        let top = self.top();
        let alg = self.algebra_arc().clone();
        let mut summands = Vec::new();
        let mut generators: Vec<Vec<Scalar>> = Vec::new();
        for v in 0..alg.num_vertices() {
            for k in 0..top.module.dims()[v] {
                summands.push(v);
                generators.push(top.section[v].column(k));
            }
        }
        let projective = Module::free(alg.clone(), &summands);
        let epi = self.map_from_free(&projective, &summands, &generators);
        Cover {
            projective,
            epi,
            summands,
            generators,
        }
    }

    /// The map `⊕ R e_{v_c} → M` sending the idempotent generator of summand
    /// `c` to `generators[c] ∈ M_{v_c}`.
    pub fn map_from_free(
        &self,
        free: &Module,
        summands: &[usize],
        generators: &[Vec<Scalar>],
    ) -> Morphism {
        let alg = self.algebra();
        let field = self.field();
        let nv = alg.num_vertices();
        let mut blocks: Vec<Mat> = (0..nv)
            .map(|u| Mat::zeros(field, self.dims()[u], free.dims()[u]))
            .collect();
        let mut col = vec![0; nv];
        for (&v, g) in summands.iter().zip(generators) {
            for (u, block) in blocks.iter_mut().enumerate() {
                for b in alg.block(u, v) {
                    let image = self.action(b).mul_vec(g);
                    for (i, x) in image.into_iter().enumerate() {
                        block.set(i, col[u], x);
                    }
                    col[u] += 1;
                }
            }
        }
        Morphism::from_parts(free.clone(), self.clone(), blocks)
    }

    /// Exact test: `M` is projective iff its projective cover has the same
    /// dimension.
    pub fn is_projective(&self) -> bool {
        self.projective_cover().projective.dim() == self.dim()
    }

    /// The `k`-dual as a module over the opposite algebra.
    pub fn dual(&self, opposite: Arc<Algebra>) -> Result<Module, ModuleError> {
        let alg = self.algebra();
        if opposite.dim() != alg.dim()
            || (0..alg.dim()).any(|b| {
                let (l, r) = alg.grade(b);
                opposite.grade(b) != (r, l)
            })
        {
            return Err(ModuleError::AlgebraMismatch);
        }
        let actions = self.0.actions.iter().map(Mat::transpose).collect();
        Ok(Module::from_parts(opposite, self.0.dims.clone(), actions))
    }

    /// Direct sum with canonical injections and projections.
    pub fn direct_sum(parts: &[Module]) -> Result<DirectSum, ModuleError> {
        let first = parts.first().expect("direct sum of an empty list");
        for p in parts {
            first.check_same_algebra(p)?;
        }
        let alg = first.algebra_arc().clone();
        let field = alg.field();
        let nv = alg.num_vertices();
        let dims: Vec<usize> = (0..nv)
            .map(|v| parts.iter().map(|p| p.dims()[v]).sum())
            .collect();
        let actions = (0..alg.dim())
            .map(|b| {
                let blocks: Vec<&Mat> = parts.iter().map(|p| p.action(b)).collect();
                Mat::block_diag(field, &blocks)
            })
            .collect();
        let module = Module::from_parts(alg, dims.clone(), actions);
        let mut starts = vec![0; nv];
        let mut injections = Vec::new();
        let mut projections = Vec::new();
        for p in parts {
            let inj: Vec<Mat> = (0..nv)
                .map(|v| {
                    let mut m = Mat::zeros(field, dims[v], p.dims()[v]);
                    m.set_block(starts[v], 0, &Mat::identity(field, p.dims()[v]));
                    m
                })
                .collect();
            let proj: Vec<Mat> = inj.iter().map(Mat::transpose).collect();
            for v in 0..nv {
                starts[v] += p.dims()[v];
            }
            injections.push(Morphism::from_parts(p.clone(), module.clone(), inj));
            projections.push(Morphism::from_parts(module.clone(), p.clone(), proj));
        }
        Ok(DirectSum {
            module,
            injections,
            projections,
        })
    }

    /// The restriction of the action to the given algebra basis subset, as a
    /// module over `sub` whose basis element `i` is `embedding[i]` here and
    /// whose vertices are `vertices` here.
    pub fn restrict(&self, sub: Arc<Algebra>, vertices: &[usize], embedding: &[usize]) -> Module {
        let dims = vertices.iter().map(|&v| self.dims()[v]).collect();
        let actions = embedding.iter().map(|&b| self.action(b).clone()).collect();
        Module::from_parts(sub, dims, actions)
    }
}

/// A submodule with its inclusion.
#[derive(Clone, Debug)]
pub struct Sub {
    pub module: Module,
    pub inclusion: Morphism,
}

/// A quotient with its projection and a linear (not module) section.
#[derive(Clone, Debug)]
pub struct Quot {
    pub module: Module,
    pub projection: Morphism,
    pub section: Vec<Mat>,
}

/// Projective cover `P → M` with the vertex of each indecomposable summand
/// and the image in `M_v` of that summand's idempotent generator.
#[derive(Clone, Debug)]
pub struct Cover {
    pub projective: Module,
    pub epi: Morphism,
    pub summands: Vec<usize>,
    pub generators: Vec<Vec<Scalar>>,
}

#[derive(Clone, Debug)]
pub struct DirectSum {
    pub module: Module,
    pub injections: Vec<Morphism>,
    pub projections: Vec<Morphism>,
}

/// A module homomorphism given by per-vertex blocks
/// (`target.dims[v] × source.dims[v]`).
#[derive(Clone)]
pub struct Morphism {
    source: Module,
    target: Module,
    blocks: Vec<Mat>,
}

impl fmt::Debug for Morphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Morphism{:?}", self.blocks)
    }
}

impl Morphism {
    /// Validates shapes and the intertwining equations.
    pub fn new(source: Module, target: Module, blocks: Vec<Mat>) -> Result<Self, ModuleError> {
        source.check_same_algebra(&target)?;
        let nv = source.algebra().num_vertices();
        if blocks.len() != nv {
            return Err(ModuleError::Count {
                what: "vertex blocks",
                expected: nv,
                got: blocks.len(),
            });
        }
        for (v, b) in blocks.iter().enumerate() {
            if b.shape() != (target.dims()[v], source.dims()[v]) {
                return Err(ModuleError::BlockShape(source.algebra().vertex_labels()[v].clone()));
            }
        }
        let f = Morphism {
            source,
            target,
            blocks,
        };
        f.validate()?;
        Ok(f)
    }

    pub(crate) fn from_parts(source: Module, target: Module, blocks: Vec<Mat>) -> Self {
        let f = Morphism {
            source,
            target,
            blocks,
        };
        debug_assert!(f.validate().is_ok(), "internal morphism construction is not A-linear");
        f
    }

    /// Splits a full `dim target × dim source` matrix into vertex blocks;
    /// fails if it mixes vertices or is not A-linear.
    pub fn from_matrix(source: Module, target: Module, m: &Mat) -> Result<Self, ModuleError> {
        let nv = source.algebra().num_vertices();
        let mut blocks = Vec::with_capacity(nv);
        for v in 0..nv {
            blocks.push(m.submatrix(
                target.offset(v)..target.offset(v) + target.dims()[v],
                source.offset(v)..source.offset(v) + source.dims()[v],
            ));
        }
        let f = Morphism::new(source, target, blocks)?;
        if f.matrix() != *m {
            return Err(ModuleError::NotIntertwining("vertex idempotents".into()));
        }
        Ok(f)
    }

    pub fn validate(&self) -> Result<(), ModuleError> {
        let alg = self.source.algebra();
        for &g in alg.generators() {
            let (l, r) = alg.grade(g);
            let lhs = self.blocks[l].mul(self.source.action(g));
            let rhs = self.target.action(g).mul(&self.blocks[r]);
            if lhs != rhs {
                return Err(ModuleError::NotIntertwining(alg.label(g).to_string()));
            }
        }
        Ok(())
    }

    pub fn source(&self) -> &Module {
        &self.source
    }

    pub fn target(&self) -> &Module {
        &self.target
    }

    pub fn blocks(&self) -> &[Mat] {
        &self.blocks
    }

    pub fn block(&self, v: usize) -> &Mat {
        &self.blocks[v]
    }

    /// Full block-diagonal matrix.
    pub fn matrix(&self) -> Mat {
        let field = self.source.field();
        let mut m = Mat::zeros(field, self.target.dim(), self.source.dim());
        for (v, b) in self.blocks.iter().enumerate() {
            m.set_block(self.target.offset(v), self.source.offset(v), b);
        }
        m
    }

    /// Concatenated entries of all blocks, used to compare morphisms as
    /// vectors.
    pub fn flatten(&self) -> Vec<Scalar> {
        self.blocks.iter().flat_map(|b| b.data().iter().copied()).collect()
    }

    pub fn zero(source: Module, target: Module) -> Morphism {
        let field = source.field();
        let blocks = (0..source.algebra().num_vertices())
            .map(|v| Mat::zeros(field, target.dims()[v], source.dims()[v]))
            .collect();
        Morphism::from_parts(source, target, blocks)
    }

    pub fn identity(m: Module) -> Morphism {
        let field = m.field();
        let blocks = m.dims().iter().map(|&d| Mat::identity(field, d)).collect();
        Morphism::from_parts(m.clone(), m, blocks)
    }

    /// `self ∘ before`.
    pub fn compose(&self, before: &Morphism) -> Morphism {
        assert_eq!(before.target.dims(), self.source.dims(), "composition shape mismatch");
        let blocks = self
            .blocks
            .iter()
            .zip(&before.blocks)
            .map(|(a, b)| a.mul(b))
            .collect();
        Morphism::from_parts(before.source.clone(), self.target.clone(), blocks)
    }

    pub fn add(&self, other: &Morphism) -> Morphism {
        let blocks = self
            .blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| a.add(b))
            .collect();
        Morphism::from_parts(self.source.clone(), self.target.clone(), blocks)
    }

    pub fn scale(&self, c: Scalar) -> Morphism {
        let blocks = self.blocks.iter().map(|a| a.scale(c)).collect();
        Morphism::from_parts(self.source.clone(), self.target.clone(), blocks)
    }

    pub fn neg(&self) -> Morphism {
        self.scale(self.source.field().neg(1))
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.iter().all(Mat::is_zero)
    }

    pub fn rank(&self) -> usize {
        self.blocks.iter().map(Mat::rank).sum()
    }

    pub fn is_injective(&self) -> bool {
        self.rank() == self.source.dim()
    }

    pub fn is_surjective(&self) -> bool {
        self.rank() == self.target.dim()
    }

    pub fn is_iso(&self) -> bool {
        self.source.dims() == self.target.dims() && self.is_injective()
    }

    pub fn inverse(&self) -> Option<Morphism> {
        if !self.is_iso() {
            return None;
        }
        let blocks = self
            .blocks
            .iter()
            .map(|b| b.inverse())
            .collect::<Option<Vec<_>>>()?;
        Some(Morphism::from_parts(self.target.clone(), self.source.clone(), blocks))
    }

    pub fn kernel(&self) -> Sub {
        let spans: Vec<Mat> = self.blocks.iter().map(Mat::kernel_matrix).collect();
        self.source.submodule(&spans).expect("kernels are submodules")
    }

    /// Image submodule of the target, with the corestriction from the source.
    pub fn image(&self) -> (Sub, Morphism) {
        let sub = self
            .target
            .submodule(&self.blocks.to_vec())
            .expect("images are submodules");
        let blocks = sub
            .inclusion
            .blocks()
            .iter()
            .zip(&self.blocks)
            .map(|(inc, f)| {
                if inc.cols() == 0 {
                    Mat::zeros(f.field(), 0, f.cols())
                } else {
                    inc.solve_matrix(f).expect("f lands in its image")
                }
            })
            .collect();
        let corestriction = Morphism::from_parts(self.source.clone(), sub.module.clone(), blocks);
        (sub, corestriction)
    }

    pub fn cokernel(&self) -> Quot {
        self.target.quotient(&self.blocks)
    }

    /// Induced map on submodules `f|: A → B` where `self` maps into the
    /// ambient of `b` and `a` sits in the source.
    pub fn restrict(&self, a: &Sub, b: &Sub) -> Option<Morphism> {
        let composite = self.compose(&a.inclusion);
        let blocks = b
            .inclusion
            .blocks()
            .iter()
            .zip(composite.blocks())
            .map(|(inc, f)| {
                if inc.cols() == 0 {
                    f.is_zero().then(|| Mat::zeros(f.field(), 0, f.cols()))
                } else {
                    inc.solve_matrix(f)
                }
            })
            .collect::<Option<Vec<_>>>()?;
        Some(Morphism::from_parts(a.module.clone(), b.module.clone(), blocks))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quivalg::{build_algebra, Quiver, Relation};

    pub(crate) fn a2() -> Arc<Algebra> {
        let mut q = Quiver::new(["1", "2"]).unwrap();
        q.add_arrow("a", "1", "2").unwrap();
        Arc::new(build_algebra(Field::default(), &q, &[], 4).unwrap().into_algebra())
    }

    pub(crate) fn dual_numbers() -> Arc<Algebra> {
        let mut q = Quiver::new(["1"]).unwrap();
        q.add_arrow("x", "1", "1").unwrap();
        let rel = Relation::monomial(&q, q.parse_path("x*x").unwrap()).unwrap();
        Arc::new(build_algebra(Field::default(), &q, &[rel], 3).unwrap().into_algebra())
    }

    #[test]
    fn simples_and_projectives_over_a2() {
        let alg = a2();
        let s = Module::simples(&alg);
        assert_eq!(s.len(), 2);
        assert!(s.iter().all(|m| m.dim() == 1));
        let p1 = Module::projective(alg.clone(), 0);
        assert_eq!(p1.dims(), &[1, 1]);
        assert_eq!(p1.radical_of().module.dim(), 1);
        assert_eq!(Module::regular(alg.clone()).dim(), 3);
        assert!(s[1].is_projective());
        assert!(!s[0].is_projective());
    }

    #[test]
    fn dual_numbers_simple_has_zero_action() {
        let alg = dual_numbers();
        let s = Module::simples(&alg);
        assert_eq!(s.len(), 1);
        assert!(s[0].action(1).is_zero());
        assert_eq!(Module::projective(alg, 0).dim(), 2);
    }

    #[test]
    fn cover_of_simple_has_simple_kernel() {
        let alg = a2();
        let s1 = Module::simple(alg.clone(), 0);
        let cover = s1.projective_cover();
        assert_eq!(cover.summands, vec![0]);
        assert!(cover.epi.is_surjective());
        let ker = cover.epi.kernel();
        assert_eq!(ker.module.dims(), &[0, 1]);
        let zero = Module::zero(alg.clone()).projective_cover();
        assert_eq!(zero.projective.dim(), 0);
        let p = Module::projective(alg, 0);
        let c = p.projective_cover();
        assert!(c.epi.is_iso());
    }

    #[test]
    fn kernel_image_cokernel() {
        let alg = a2();
        let p = Module::projective(alg.clone(), 0);
        let id = Morphism::identity(p.clone());
        assert!(id.kernel().module.is_zero());
        let z = Morphism::zero(p.clone(), p.clone());
        assert_eq!(z.cokernel().module.dims(), p.dims());
        let f = p.top().projection;
        let (img, _) = f.image();
        assert_eq!(f.kernel().module.dim() + img.module.dim(), p.dim());
    }

    #[test]
    fn dual_is_an_involution_on_dimensions() {
        let alg = a2();
        let op = Arc::new(alg.opposite());
        let p = Module::projective(alg.clone(), 0);
        let d = p.dual(op.clone()).unwrap();
        assert_eq!(d.dim(), 2);
        let dd = d.dual(alg).unwrap();
        assert_eq!(dd.actions(), p.actions());
    }

    #[test]
    fn representation_checks_relations() {
        let mut q = Quiver::new(["1"]).unwrap();
        q.add_arrow("x", "1", "1").unwrap();
        let rel = Relation::monomial(&q, q.parse_path("x*x").unwrap()).unwrap();
        let qa = build_algebra(Field::default(), &q, &[rel], 3).unwrap();
        let alg = Arc::new(qa.algebra().clone());
        let f = Field::default();
        let nilpotent = Mat::from_i64_rows(f, &[vec![0, 0], vec![1, 0]]);
        assert!(Module::from_representation(&qa, alg.clone(), vec![2], &[nilpotent]).is_ok());
        let bad = Mat::identity(f, 2);
        assert!(matches!(
            Module::from_representation(&qa, alg, vec![2], &[bad]),
            Err(ModuleError::ModuleLaw(_, _))
        ));
    }
}
