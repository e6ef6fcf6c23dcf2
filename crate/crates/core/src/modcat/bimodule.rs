//! Bimodules and tensor products over a basic algebra.

use std::sync::Arc;

use super::{same_algebra, Module, ModuleError, Morphism};
use crate::exactfield::{Mat, Scalar};
use crate::quivalg::{Algebra, Corner};

/// An `A`-`B`-bimodule. Each basis vector `m` is homogeneous with grade
/// `(a, w)`, meaning `m = e_a · m · e_w`. Actions are stored as full matrices:
/// `left[c]` is `m ↦ c·m` and `right[b]` is `m ↦ m·b`.
#[derive(Clone, Debug)]
pub struct Bimodule {
    left: Arc<Algebra>,
    right: Arc<Algebra>,
    grade: Vec<(usize, usize)>,
    left_action: Vec<Mat>,
    right_action: Vec<Mat>,
}

impl Bimodule {
    pub fn new(
        left: Arc<Algebra>,
        right: Arc<Algebra>,
        grade: Vec<(usize, usize)>,
        left_action: Vec<Mat>,
        right_action: Vec<Mat>,
    ) -> Result<Self, ModuleError> {
        let b = Bimodule {
            left,
            right,
            grade,
            left_action,
            right_action,
        };
        b.validate()?;
        Ok(b)
    }

    pub fn validate(&self) -> Result<(), ModuleError> {
        let n = self.dim();
        let field = self.left.field();
        let invalid = |s: &str| Err(ModuleError::BimoduleInvalid(s.to_string()));
        if self.left_action.len() != self.left.dim() || self.right_action.len() != self.right.dim() {
            return invalid("wrong number of action matrices");
        }
        if self.left_action.iter().chain(&self.right_action).any(|m| m.shape() != (n, n)) {
            return invalid("action matrix has the wrong shape");
        }
        if self
            .grade
            .iter()
            .any(|&(a, w)| a >= self.left.num_vertices() || w >= self.right.num_vertices())
        {
            return invalid("grade out of range");
        }
        for (v, &e) in self.left.idempotents().iter().enumerate() {
            let proj = Mat::from_fn(field, n, n, |i, j| u32::from(i == j && self.grade[i].0 == v));
            if self.left_action[e] != proj {
                return invalid("left idempotents do not match the grading");
            }
        }
        for (w, &e) in self.right.idempotents().iter().enumerate() {
            let proj = Mat::from_fn(field, n, n, |i, j| u32::from(i == j && self.grade[i].1 == w));
            if self.right_action[e] != proj {
                return invalid("right idempotents do not match the grading");
            }
        }
        for i in 0..self.left.dim() {
            for j in 0..self.left.dim() {
                let mut rhs = Mat::zeros(field, n, n);
                for &(k, c) in self.left.mul_basis(i, j) {
                    rhs.add_scaled(c, &self.left_action[k]);
                }
                if self.left_action[i].mul(&self.left_action[j]) != rhs {
                    return invalid("left action is not a module action");
                }
            }
        }
        for i in 0..self.right.dim() {
            for j in 0..self.right.dim() {
                // (m·j)·i = m·(j i)
                let mut rhs = Mat::zeros(field, n, n);
                for &(k, c) in self.right.mul_basis(j, i) {
                    rhs.add_scaled(c, &self.right_action[k]);
                }
                if self.right_action[i].mul(&self.right_action[j]) != rhs {
                    return invalid("right action is not a module action");
                }
            }
        }
        for l in &self.left_action {
            for r in &self.right_action {
                if l.mul(r) != r.mul(l) {
                    return invalid("left and right actions do not commute");
                }
            }
        }
        Ok(())
    }

    /// `e_L · R · e_R` as a bimodule over the two corner algebras, where
    /// `left_alg`/`right_alg` are the algebras of the given corners.
    pub fn from_ambient(
        ambient: &Algebra,
        left: &Corner,
        left_alg: Arc<Algebra>,
        right: &Corner,
        right_alg: Arc<Algebra>,
    ) -> Bimodule {
        let nv = ambient.num_vertices();
        let index_in = |c: &Corner| {
            let mut idx = vec![usize::MAX; nv];
            for (i, &v) in c.vertices.iter().enumerate() {
                idx[v] = i;
            }
            idx
        };
        let (li, ri) = (index_in(left), index_in(right));
        let basis: Vec<usize> = (0..ambient.dim())
            .filter(|&b| {
                let (l, r) = ambient.grade(b);
                li[l] != usize::MAX && ri[r] != usize::MAX
            })
            .collect();
        let mut pos = vec![usize::MAX; ambient.dim()];
        for (i, &b) in basis.iter().enumerate() {
            pos[b] = i;
        }
        let n = basis.len();
        let field = ambient.field();
        let left_action = left
            .embedding
            .iter()
            .map(|&c| {
                let mut m = Mat::zeros(field, n, n);
                for (j, &b) in basis.iter().enumerate() {
                    for &(k, x) in ambient.mul_basis(c, b) {
                        m.set(pos[k], j, x);
                    }
                }
                m
            })
            .collect();
        let right_action = right
            .embedding
            .iter()
            .map(|&c| {
                let mut m = Mat::zeros(field, n, n);
                for (j, &b) in basis.iter().enumerate() {
                    for &(k, x) in ambient.mul_basis(b, c) {
                        m.set(pos[k], j, x);
                    }
                }
                m
            })
            .collect();
        let grade = basis
            .iter()
            .map(|&b| {
                let (l, r) = ambient.grade(b);
                (li[l], ri[r])
            })
            .collect();
        let bm = Bimodule {
            left: left_alg,
            right: right_alg,
            grade,
            left_action,
            right_action,
        };
        debug_assert!(bm.validate().is_ok());
        bm
    }

    /// A right module, given as a left module over the opposite algebra, seen
    /// as a bimodule over the ground field on the left.
    pub fn from_right_module(right: Arc<Algebra>, m: &Module) -> Result<Bimodule, ModuleError> {
        let op = m.algebra();
        if op.dim() != right.dim() {
            return Err(ModuleError::AlgebraMismatch);
        }
        let ground = Arc::new(Algebra::ground(right.field()));
        let field = right.field();
        let n = m.dim();
        let mut grade = Vec::with_capacity(n);
        for (w, &d) in m.dims().iter().enumerate() {
            grade.extend(std::iter::repeat_n((0, w), d));
        }
        let right_action = (0..right.dim()).map(|b| m.full_action(b)).collect();
        Bimodule::new(ground, right, grade, vec![Mat::identity(field, n)], right_action)
    }

    pub fn left_algebra(&self) -> &Arc<Algebra> {
        &self.left
    }

    pub fn right_algebra(&self) -> &Arc<Algebra> {
        &self.right
    }

    pub fn dim(&self) -> usize {
        self.grade.len()
    }

    pub fn grade(&self) -> &[(usize, usize)] {
        &self.grade
    }

    pub fn left_action(&self, c: usize) -> &Mat {
        &self.left_action[c]
    }

    pub fn right_action(&self, b: usize) -> &Mat {
        &self.right_action[b]
    }

    fn indices_by(&self, pick: impl Fn((usize, usize)) -> usize, nv: usize) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); nv];
        for (i, &g) in self.grade.iter().enumerate() {
            out[pick(g)].push(i);
        }
        out
    }

    /// The underlying left module over the left algebra.
    pub fn as_left_module(&self) -> Module {
        let idx = self.indices_by(|g| g.0, self.left.num_vertices());
        let actions = (0..self.left.dim())
            .map(|c| {
                let (l, r) = self.left.grade(c);
                self.left_action[c].select_rows(&idx[l]).select_columns(&idx[r])
            })
            .collect();
        Module::from_parts(self.left.clone(), idx.iter().map(Vec::len).collect(), actions)
    }

    /// The underlying right module, as a left module over `opposite`.
    pub fn as_right_module(&self, opposite: Arc<Algebra>) -> Result<Module, ModuleError> {
        if opposite.dim() != self.right.dim() {
            return Err(ModuleError::AlgebraMismatch);
        }
        let idx = self.indices_by(|g| g.1, self.right.num_vertices());
        let actions = (0..self.right.dim())
            .map(|b| {
                let (l, r) = self.right.grade(b);
                self.right_action[b].select_rows(&idx[r]).select_columns(&idx[l])
            })
            .collect();
        Ok(Module::from_parts(opposite, idx.iter().map(Vec::len).collect(), actions))
    }

    /// `M ⊗_B N` as a left module over the left algebra.
    pub fn tensor(&self, n: &Module) -> Result<TensorProduct, ModuleError> {
        if !same_algebra(&self.right, n.algebra_arc()) {
            return Err(ModuleError::AlgebraMismatch);
        }
        let field = self.left.field();
        let na = self.left.num_vertices();
        // product coordinates per left vertex: (m basis index, N local index)
        let mut coords: Vec<Vec<(usize, usize)>> = vec![Vec::new(); na];
        let mut start = vec![0; self.dim()];
        for (i, &(a, w)) in self.grade.iter().enumerate() {
            start[i] = coords[a].len();
            for t in 0..n.dims()[w] {
                coords[a].push((i, t));
            }
        }
        // relations (m·b)⊗n − m⊗(b·n) for generators b
        let mut relations: Vec<Vec<Vec<Scalar>>> = vec![Vec::new(); na];
        let right = &self.right;
        for (i, &(a, u)) in self.grade.iter().enumerate() {
            for &b in right.generators() {
                let (bl, bw) = right.grade(b);
                if bl != u {
                    continue;
                }
                let rb = &self.right_action[b];
                let nb = n.action(b);
                for t in 0..n.dims()[bw] {
                    let mut v = vec![0; coords[a].len()];
                    for j in 0..self.dim() {
                        let c = rb.get(j, i);
                        if c != 0 {
                            let k = start[j] + t;
                            v[k] = field.add(v[k], c);
                        }
                    }
                    for s in 0..n.dims()[u] {
                        let c = nb.get(s, t);
                        if c != 0 {
                            let k = start[i] + s;
                            v[k] = field.sub(v[k], c);
                        }
                    }
                    relations[a].push(v);
                }
            }
        }
        let quotients: Vec<_> = (0..na)
            .map(|a| Mat::from_columns(field, coords[a].len(), &relations[a]).cokernel())
            .collect();
        let actions = (0..self.left.dim())
            .map(|c| {
                let (l, r) = self.left.grade(c);
                let lc = &self.left_action[c];
                let mut big = Mat::zeros(field, coords[l].len(), coords[r].len());
                for (col, &(i, t)) in coords[r].iter().enumerate() {
                    for j in 0..self.dim() {
                        let x = lc.get(j, i);
                        if x != 0 {
                            big.set(start[j] + t, col, x);
                        }
                    }
                }
                quotients[l].projection.mul(&big).mul(&quotients[r].section)
            })
            .collect();
        let module = Module::from_parts(
            self.left.clone(),
            quotients.iter().map(|q| q.dim()).collect(),
            actions,
        );
        Ok(TensorProduct {
            module,
            coords,
            start,
            projection: quotients.iter().map(|q| q.projection.clone()).collect(),
            section: quotients.into_iter().map(|q| q.section).collect(),
        })
    }

    /// `M ⊗ g : M ⊗ N → M ⊗ N'` for `g : N → N'`, between the given tensor
    /// products (computed by [`Bimodule::tensor`] from `g`'s source and target).
    pub fn tensor_map(
        &self,
        source: &TensorProduct,
        target: &TensorProduct,
        g: &Morphism,
    ) -> Morphism {
        let field = self.left.field();
        let blocks = (0..self.left.num_vertices())
            .map(|a| {
                let mut big = Mat::zeros(field, target.coords[a].len(), source.coords[a].len());
                for (col, &(i, t)) in source.coords[a].iter().enumerate() {
                    let w = self.grade[i].1;
                    let gw = g.block(w);
                    for s in 0..gw.rows() {
                        let x = gw.get(s, t);
                        if x != 0 {
                            big.set(target.start[i] + s, col, x);
                        }
                    }
                }
                target.projection[a].mul(&big).mul(&source.section[a])
            })
            .collect();
        Morphism::from_parts(source.module.clone(), target.module.clone(), blocks)
    }

    /// The linear map `M ⊗ N → X` given on pure tensors: `value(i, t)` is
    /// the image of `m_i ⊗ n_t` in `X_a`, where `n_t` is the `t`-th basis
    /// vector of `N_w` and `(a, w)` the grade of `m_i`. The values must be
    /// balanced; `A`-linearity of the result is checked.
    pub fn tensor_lift(
        &self,
        tp: &TensorProduct,
        target: &Module,
        value: impl Fn(usize, usize) -> Vec<Scalar>,
    ) -> Result<Morphism, ModuleError> {
        let field = self.left.field();
        let blocks = (0..self.left.num_vertices())
            .map(|a| {
                let cols: Vec<Vec<Scalar>> = tp.coords[a].iter().map(|&(i, t)| value(i, t)).collect();
                Mat::from_columns(field, target.dims()[a], &cols).mul(&tp.section[a])
            })
            .collect();
        Morphism::new(tp.module.clone(), target.clone(), blocks)
    }

    /// The class of `m_i ⊗ n` in the tensor product, `n` a vector of `N_w`.
    pub fn tensor_element(&self, tp: &TensorProduct, i: usize, n: &[Scalar]) -> Vec<Scalar> {
        let a = self.grade[i].0;
        let mut big = vec![0; tp.coords[a].len()];
        for (t, &x) in n.iter().enumerate() {
            big[tp.start[i] + t] = x;
        }
        let local = tp.projection[a].mul_vec(&big);
        let mut out = vec![0; tp.module.dim()];
        let off = tp.module.offset(a);
        out[off..off + local.len()].copy_from_slice(&local);
        out
    }
}

/// A tensor product `M ⊗_B N` with the data needed to induce maps.
#[derive(Clone, Debug)]
pub struct TensorProduct {
    pub module: Module,
    coords: Vec<Vec<(usize, usize)>>,
    start: Vec<usize>,
    projection: Vec<Mat>,
    section: Vec<Mat>,
}
