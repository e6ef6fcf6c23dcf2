//! Quivers, relations, and finite-dimensional algebras given by structure
//! constants.
//!
//! Paths compose in function order: `a*b` means "first `b`, then `a`". A path
//! from `s` to `t` is the element `e_t · p · e_s`, so left modules see an arrow
//! `u -> v` as a linear map from the `u`-space to the `v`-space.
//!
//! Every [`Algebra`] is kept in split basic form: its basis consists of the
//! primitive idempotents `e_v` followed by a basis of the radical, and every
//! basis element `b` is homogeneous with a grade `(l, r)` meaning
//! `b = e_l · b · e_r`.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::exactfield::{Field, Mat, Scalar, Subspace};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QuiverError {
    #[error("duplicate vertex label `{0}`")]
    DuplicateVertex(String),
    #[error("duplicate arrow label `{0}`")]
    DuplicateArrow(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("unknown arrow `{0}`")]
    UnknownArrow(String),
    #[error("arrows `{after}` and `{before}` are not composable")]
    NotComposable { after: String, before: String },
    #[error("relation is not admissible: term `{0}` has length < 2")]
    NotAdmissible(String),
    #[error("relation terms are not parallel: `{0}` and `{1}`")]
    NotParallel(String, String),
    #[error("relation has no terms")]
    EmptyRelation,
    #[error("length cap must be at least 2, got {0}")]
    CapTooSmall(usize),
    #[error("cap exceeded: path `{0}` of length {1} is nonzero modulo the ideal")]
    CapExceeded(String, usize),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("multiplication table has wrong size")]
    TableShape,
    #[error("basis element {0} is listed with an out-of-range vertex")]
    BadGrade(usize),
    #[error("product of `{0}` and `{1}` violates the grading")]
    GradeViolation(String, String),
    #[error("associativity fails on ({0}, {1}, {2})")]
    NotAssociative(String, String, String),
    #[error("idempotent `{0}` is not a primitive orthogonal idempotent")]
    BadIdempotent(String),
    #[error("radical is not a nilpotent two-sided ideal")]
    BadRadical,
    #[error("vertex subset is empty or contains unknown vertices")]
    BadVertexSubset,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrow {
    pub label: String,
    pub source: usize,
    pub target: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Quiver {
    vertices: Vec<String>,
    arrows: Vec<Arrow>,
}

impl Quiver {
    pub fn new<S: Into<String>>(vertices: impl IntoIterator<Item = S>) -> Result<Self, QuiverError> {
        let mut q = Quiver::default();
        for v in vertices {
            q.add_vertex(v)?;
        }
        Ok(q)
    }

    pub fn add_vertex(&mut self, label: impl Into<String>) -> Result<usize, QuiverError> {
        let label = label.into();
        if self.vertices.contains(&label) {
            return Err(QuiverError::DuplicateVertex(label));
        }
        self.vertices.push(label);
        Ok(self.vertices.len() - 1)
    }

    pub fn add_arrow(
        &mut self,
        label: impl Into<String>,
        source: &str,
        target: &str,
    ) -> Result<usize, QuiverError> {
        let label = label.into();
        if self.arrows.iter().any(|a| a.label == label) || self.vertices.contains(&label) {
            return Err(QuiverError::DuplicateArrow(label));
        }
        let source = self.vertex(source)?;
        let target = self.vertex(target)?;
        self.arrows.push(Arrow {
            label,
            source,
            target,
        });
        Ok(self.arrows.len() - 1)
    }

    pub fn vertex(&self, label: &str) -> Result<usize, QuiverError> {
        self.vertices
            .iter()
            .position(|v| v == label)
            .ok_or_else(|| QuiverError::UnknownVertex(label.to_string()))
    }

    pub fn arrow(&self, label: &str) -> Result<usize, QuiverError> {
        self.arrows
            .iter()
            .position(|a| a.label == label)
            .ok_or_else(|| QuiverError::UnknownArrow(label.to_string()))
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    /// Parses `a*b*c` (function order) or a vertex label / `e<vertex>` for a
    /// trivial path.
    pub fn parse_path(&self, text: &str) -> Result<Path, QuiverError> {
        let names: Vec<&str> = text.split('*').map(str::trim).collect();
        if names.len() == 1 {
            let name = names[0];
            if let Ok(a) = self.arrow(name) {
                return Ok(Path::arrow(self, a));
            }
            if let Ok(v) = self.vertex(name) {
                return Ok(Path::trivial(v));
            }
            if let Some(v) = name.strip_prefix('e').and_then(|rest| self.vertex(rest).ok()) {
                return Ok(Path::trivial(v));
            }
            return Err(QuiverError::UnknownArrow(name.to_string()));
        }
        let mut arrows = Vec::with_capacity(names.len());
        for name in names.iter().rev() {
            arrows.push(self.arrow(name)?);
        }
        Path::from_arrows(self, arrows)
    }
}

/// A path, stored with its arrows in application order (first arrow first).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path {
    pub source: usize,
    pub target: usize,
    pub arrows: Vec<usize>,
}

impl Path {
    pub fn trivial(v: usize) -> Self {
        Path {
            source: v,
            target: v,
            arrows: Vec::new(),
        }
    }

    pub fn arrow(q: &Quiver, a: usize) -> Self {
        Path {
            source: q.arrows[a].source,
            target: q.arrows[a].target,
            arrows: vec![a],
        }
    }

    /// Builds a path from arrows in application order.
    pub fn from_arrows(q: &Quiver, arrows: Vec<usize>) -> Result<Self, QuiverError> {
        assert!(!arrows.is_empty());
        for w in arrows.windows(2) {
            if q.arrows[w[0]].target != q.arrows[w[1]].source {
                return Err(QuiverError::NotComposable {
                    after: q.arrows[w[1]].label.clone(),
                    before: q.arrows[w[0]].label.clone(),
                });
            }
        }
        Ok(Path {
            source: q.arrows[arrows[0]].source,
            target: q.arrows[*arrows.last().unwrap()].target,
            arrows,
        })
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.arrows.is_empty()
    }

    /// `self * before`: first `before`, then `self`.
    pub fn after(&self, before: &Path) -> Option<Path> {
        if before.target != self.source {
            return None;
        }
        let mut arrows = before.arrows.clone();
        arrows.extend_from_slice(&self.arrows);
        Some(Path {
            source: before.source,
            target: self.target,
            arrows,
        })
    }

    pub fn label(&self, q: &Quiver) -> String {
        if self.arrows.is_empty() {
            format!("e{}", q.vertices[self.source])
        } else {
            self.arrows
                .iter()
                .rev()
                .map(|&a| q.arrows[a].label.as_str())
                .collect::<Vec<_>>()
                .join("*")
        }
    }
}

/// A linear combination of parallel paths of length at least two.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub terms: Vec<(i64, Path)>,
}

impl Relation {
    pub fn new(q: &Quiver, terms: Vec<(i64, Path)>) -> Result<Self, QuiverError> {
        let Some((_, first)) = terms.first() else {
            return Err(QuiverError::EmptyRelation);
        };
        for (_, p) in &terms {
            if p.len() < 2 {
                return Err(QuiverError::NotAdmissible(p.label(q)));
            }
            if p.source != first.source || p.target != first.target {
                return Err(QuiverError::NotParallel(first.label(q), p.label(q)));
            }
        }
        Ok(Relation { terms })
    }

    /// A monomial relation.
    pub fn monomial(q: &Quiver, p: Path) -> Result<Self, QuiverError> {
        Relation::new(q, vec![(1, p)])
    }

    fn source(&self) -> usize {
        self.terms[0].1.source
    }

    fn target(&self) -> usize {
        self.terms[0].1.target
    }

    fn min_len(&self) -> usize {
        self.terms.iter().map(|(_, p)| p.len()).min().unwrap_or(0)
    }

    fn max_len(&self) -> usize {
        self.terms.iter().map(|(_, p)| p.len()).max().unwrap_or(0)
    }
}

/// A finite-dimensional basic algebra in split form (see the module docs).
#[derive(Clone, PartialEq, Eq)]
pub struct Algebra {
    field: Field,
    vertex_labels: Vec<String>,
    labels: Vec<String>,
    idem: Vec<usize>,
    grade: Vec<(usize, usize)>,
    radical: Vec<usize>,
    table: Vec<Vec<(usize, Scalar)>>,
    generators: Vec<usize>,
}

impl fmt::Debug for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Algebra")
            .field("p", &self.field.p())
            .field("vertices", &self.vertex_labels)
            .field("basis", &self.labels)
            .finish()
    }
}

/// Raw data for [`Algebra::new`].
#[derive(Clone, Debug)]
pub struct AlgebraData {
    pub field: Field,
    pub vertex_labels: Vec<String>,
    pub labels: Vec<String>,
    /// Basis index of `e_v` for each vertex `v`.
    pub idem: Vec<usize>,
    pub grade: Vec<(usize, usize)>,
    /// Row-major `dim × dim` table of sparse products.
    pub table: Vec<Vec<(usize, Scalar)>>,
}

impl Algebra {
    /// Assembles and validates an algebra: grading, associativity, unit,
    /// idempotents, and that the non-idempotent basis spans a nilpotent ideal.
    pub fn new(data: AlgebraData) -> Result<Self, AlgebraError> {
        let n = data.labels.len();
        let nv = data.vertex_labels.len();
        if data.table.len() != n * n || data.grade.len() != n || data.idem.len() != nv {
            return Err(AlgebraError::TableShape);
        }
        for (i, &(l, r)) in data.grade.iter().enumerate() {
            if l >= nv || r >= nv {
                return Err(AlgebraError::BadGrade(i));
            }
        }
        let mut is_idem = vec![false; n];
        for (v, &b) in data.idem.iter().enumerate() {
            if b >= n || is_idem[b] || data.grade[b] != (v, v) {
                return Err(AlgebraError::BadIdempotent(format!("{v}")));
            }
            is_idem[b] = true;
        }
        let radical: Vec<usize> = (0..n).filter(|&b| !is_idem[b]).collect();
        let mut table = data.table;
        for entry in table.iter_mut() {
            entry.retain(|&(_, c)| c % data.field.p() != 0);
            entry.sort_unstable();
        }
        let mut alg = Algebra {
            field: data.field,
            vertex_labels: data.vertex_labels,
            labels: data.labels,
            idem: data.idem,
            grade: data.grade,
            radical,
            table,
            generators: Vec::new(),
        };
        alg.validate()?;
        alg.generators = alg.compute_generators();
        Ok(alg)
    }

    /// The ground field as a one-vertex algebra.
    pub fn ground(field: Field) -> Algebra {
        Algebra::new(AlgebraData {
            field,
            vertex_labels: vec!["k".to_string()],
            labels: vec!["ek".to_string()],
            idem: vec![0],
            grade: vec![(0, 0)],
            table: vec![vec![(0, 1)]],
        })
        .expect("the ground field is an algebra")
    }

    fn validate(&self) -> Result<(), AlgebraError> {
        let n = self.dim();
        let f = self.field;
        // grading
        for i in 0..n {
            for j in 0..n {
                let (li, ri) = self.grade[i];
                let (lj, rj) = self.grade[j];
                let prod = self.mul_basis(i, j);
                if ri != lj && !prod.is_empty() {
                    return Err(AlgebraError::GradeViolation(
                        self.labels[i].clone(),
                        self.labels[j].clone(),
                    ));
                }
                if prod.iter().any(|&(k, _)| self.grade[k] != (li, rj)) {
                    return Err(AlgebraError::GradeViolation(
                        self.labels[i].clone(),
                        self.labels[j].clone(),
                    ));
                }
            }
        }
        // idempotents act as the identity on their graded pieces
        for (v, &e) in self.idem.iter().enumerate() {
            for b in 0..n {
                let (l, r) = self.grade[b];
                let left = self.mul_basis(e, b);
                let right = self.mul_basis(b, e);
                let expect_left: &[(usize, Scalar)] = if l == v { &[(b, 1)] } else { &[] };
                let expect_right: &[(usize, Scalar)] = if r == v { &[(b, 1)] } else { &[] };
                if left != expect_left || right != expect_right {
                    return Err(AlgebraError::BadIdempotent(self.vertex_labels[v].clone()));
                }
            }
        }
        // associativity on basis triples, skipping triples killed by the grading
        for i in 0..n {
            for j in 0..n {
                if self.grade[i].1 != self.grade[j].0 {
                    continue;
                }
                let ij = self.basis_vec_sparse(i, j);
                for k in 0..n {
                    if self.grade[j].1 != self.grade[k].0 {
                        continue;
                    }
                    let mut left = vec![0; n];
                    for &(a, c) in &ij {
                        for &(b, d) in self.mul_basis(a, k) {
                            left[b] = f.add(left[b], f.mul(c, d));
                        }
                    }
                    let mut right = vec![0; n];
                    for &(a, c) in self.mul_basis(j, k) {
                        for &(b, d) in self.mul_basis(i, a) {
                            right[b] = f.add(right[b], f.mul(c, d));
                        }
                    }
                    if left != right {
                        return Err(AlgebraError::NotAssociative(
                            self.labels[i].clone(),
                            self.labels[j].clone(),
                            self.labels[k].clone(),
                        ));
                    }
                }
            }
        }
        // radical: products involving a radical element stay in the radical,
        // and the radical is nilpotent
        let is_idem = self.idempotent_mask();
        for &r in &self.radical {
            for b in 0..n {
                if self.mul_basis(r, b).iter().any(|&(k, _)| is_idem[k])
                    || self.mul_basis(b, r).iter().any(|&(k, _)| is_idem[k])
                {
                    return Err(AlgebraError::BadRadical);
                }
            }
        }
        if self.loewy_length().is_none() {
            return Err(AlgebraError::BadRadical);
        }
        Ok(())
    }

    fn basis_vec_sparse(&self, i: usize, j: usize) -> Vec<(usize, Scalar)> {
        self.mul_basis(i, j).to_vec()
    }

    fn idempotent_mask(&self) -> Vec<bool> {
        let mut mask = vec![false; self.dim()];
        for &e in &self.idem {
            mask[e] = true;
        }
        mask
    }

    /// Spans of `rad^k` as subspaces of the algebra, `k = 1, 2, ...` until zero.
    /// Returns `None` if the powers stop shrinking before reaching zero.
    pub fn radical_powers(&self) -> Option<Vec<Subspace>> {
        let n = self.dim();
        let mut rad = Subspace::new(self.field, n);
        for &r in &self.radical {
            rad.insert(&self.basis_vec(r));
        }
        let mut powers = vec![rad];
        loop {
            let last = powers.last().unwrap();
            if last.dim() == 0 {
                return Some(powers);
            }
            let mut next = Subspace::new(self.field, n);
            for x in last.rows() {
                for &r in &self.radical {
                    next.insert(&self.mul(x, &self.basis_vec(r)));
                }
            }
            if next.dim() >= last.dim() {
                return None;
            }
            powers.push(next);
        }
    }

    /// Smallest `k` with `rad^k = 0`.
    pub fn loewy_length(&self) -> Option<usize> {
        self.radical_powers().map(|p| p.len())
    }

    /// Radical basis elements spanning a complement of `rad²` in `rad`.
    fn compute_generators(&self) -> Vec<usize> {
        let n = self.dim();
        let mut span = Subspace::new(self.field, n);
        for &a in &self.radical {
            for &b in &self.radical {
                span.insert(&self.mul(&self.basis_vec(a), &self.basis_vec(b)));
            }
        }
        let mut gens = Vec::new();
        for &r in &self.radical {
            if span.insert(&self.basis_vec(r)) {
                gens.push(r);
            }
        }
        gens
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn num_vertices(&self) -> usize {
        self.vertex_labels.len()
    }

    pub fn vertex_labels(&self) -> &[String] {
        &self.vertex_labels
    }

    pub fn vertex_index(&self, label: &str) -> Option<usize> {
        self.vertex_labels.iter().position(|v| v == label)
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, b: usize) -> &str {
        &self.labels[b]
    }

    /// Basis index of the idempotent `e_v`.
    pub fn idempotent(&self, v: usize) -> usize {
        self.idem[v]
    }

    pub fn idempotents(&self) -> &[usize] {
        &self.idem
    }

    pub fn grade(&self, b: usize) -> (usize, usize) {
        self.grade[b]
    }

    pub fn grades(&self) -> &[(usize, usize)] {
        &self.grade
    }

    pub fn radical(&self) -> &[usize] {
        &self.radical
    }

    /// Radical basis elements which generate the radical as an algebra.
    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    #[inline]
    pub fn mul_basis(&self, i: usize, j: usize) -> &[(usize, Scalar)] {
        &self.table[i * self.dim() + j]
    }

    pub fn basis_vec(&self, i: usize) -> Vec<Scalar> {
        let mut v = vec![0; self.dim()];
        v[i] = 1;
        v
    }

    pub fn unit(&self) -> Vec<Scalar> {
        let mut v = vec![0; self.dim()];
        for &e in &self.idem {
            v[e] = 1;
        }
        v
    }

    pub fn mul(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        let f = self.field;
        let n = self.dim();
        let mut out = vec![0; n];
        for i in (0..n).filter(|&i| x[i] != 0) {
            for j in (0..n).filter(|&j| y[j] != 0) {
                let c = f.mul(x[i], y[j]);
                for &(k, d) in self.mul_basis(i, j) {
                    out[k] = f.add(out[k], f.mul(c, d));
                }
            }
        }
        out
    }

    /// Basis elements of `e_l · R · e_r`.
    pub fn block(&self, l: usize, r: usize) -> Vec<usize> {
        (0..self.dim()).filter(|&b| self.grade[b] == (l, r)).collect()
    }

    /// Matrix of `y ↦ x·y` on the whole algebra.
    pub fn left_mult(&self, x: &[Scalar]) -> Mat {
        let n = self.dim();
        let cols: Vec<Vec<Scalar>> = (0..n).map(|j| self.mul(x, &self.basis_vec(j))).collect();
        Mat::from_columns(self.field, n, &cols)
    }

    /// Matrix of `y ↦ y·x` on the whole algebra.
    pub fn right_mult(&self, x: &[Scalar]) -> Mat {
        let n = self.dim();
        let cols: Vec<Vec<Scalar>> = (0..n).map(|j| self.mul(&self.basis_vec(j), x)).collect();
        Mat::from_columns(self.field, n, &cols)
    }

    pub fn is_radical_square_zero(&self) -> bool {
        self.radical
            .iter()
            .all(|&a| self.radical.iter().all(|&b| self.mul_basis(a, b).is_empty()))
    }

    pub fn is_semisimple(&self) -> bool {
        self.radical.is_empty()
    }

    /// Whether the graph with an edge `u - v` whenever `e_u R e_v ≠ 0` is
    /// connected. The zero algebra counts as disconnected.
    pub fn is_connected(&self) -> bool {
        let nv = self.num_vertices();
        if nv == 0 {
            return false;
        }
        let mut adj = vec![Vec::new(); nv];
        for &(l, r) in &self.grade {
            if l != r {
                adj[l].push(r);
                adj[r].push(l);
            }
        }
        let mut seen = vec![false; nv];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(u) = stack.pop() {
            for &w in &adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// The opposite algebra on the same basis.
    pub fn opposite(&self) -> Algebra {
        let n = self.dim();
        let mut table = vec![Vec::new(); n * n];
        for i in 0..n {
            for j in 0..n {
                table[i * n + j] = self.mul_basis(j, i).to_vec();
            }
        }
        Algebra {
            field: self.field,
            vertex_labels: self.vertex_labels.clone(),
            labels: self.labels.clone(),
            idem: self.idem.clone(),
            grade: self.grade.iter().map(|&(l, r)| (r, l)).collect(),
            radical: self.radical.clone(),
            table,
            generators: self.generators.clone(),
        }
    }

    /// The corner algebra `eRe` for `e` the sum of the idempotents at the
    /// given vertices.
    pub fn corner(&self, vertices: &[usize]) -> Result<Corner, AlgebraError> {
        let mut verts = vertices.to_vec();
        verts.sort_unstable();
        verts.dedup();
        if verts.is_empty() || verts.iter().any(|&v| v >= self.num_vertices()) {
            return Err(AlgebraError::BadVertexSubset);
        }
        let mut new_vertex = vec![usize::MAX; self.num_vertices()];
        for (i, &v) in verts.iter().enumerate() {
            new_vertex[v] = i;
        }
        let embedding: Vec<usize> = (0..self.dim())
            .filter(|&b| {
                let (l, r) = self.grade[b];
                new_vertex[l] != usize::MAX && new_vertex[r] != usize::MAX
            })
            .collect();
        let mut new_index = vec![usize::MAX; self.dim()];
        for (i, &b) in embedding.iter().enumerate() {
            new_index[b] = i;
        }
        let m = embedding.len();
        let mut table = vec![Vec::new(); m * m];
        for (i, &a) in embedding.iter().enumerate() {
            for (j, &b) in embedding.iter().enumerate() {
                table[i * m + j] = self
                    .mul_basis(a, b)
                    .iter()
                    .map(|&(k, c)| (new_index[k], c))
                    .collect();
            }
        }
        let algebra = Algebra::new(AlgebraData {
            field: self.field,
            vertex_labels: verts.iter().map(|&v| self.vertex_labels[v].clone()).collect(),
            labels: embedding.iter().map(|&b| self.labels[b].clone()).collect(),
            idem: verts.iter().map(|&v| new_index[self.idem[v]]).collect(),
            grade: embedding
                .iter()
                .map(|&b| {
                    let (l, r) = self.grade[b];
                    (new_vertex[l], new_vertex[r])
                })
                .collect(),
            table,
        })?;
        Ok(Corner {
            algebra,
            vertices: verts,
            embedding,
        })
    }

    /// Checks `(ab)c = a(bc)` for all basis triples; used by tests and the
    /// self-test suite.
    pub fn is_associative(&self) -> bool {
        self.validate().is_ok()
    }

    /// Vertex subsets given by labels.
    pub fn vertex_subset(&self, labels: &[&str]) -> Result<Vec<usize>, AlgebraError> {
        labels
            .iter()
            .map(|l| self.vertex_index(l).ok_or(AlgebraError::BadVertexSubset))
            .collect()
    }
}

/// A corner algebra together with its embedding into the ambient algebra.
#[derive(Clone, Debug)]
pub struct Corner {
    pub algebra: Algebra,
    /// Ambient vertices, increasing; corner vertex `i` is `vertices[i]`.
    pub vertices: Vec<usize>,
    /// Ambient basis index of each corner basis element.
    pub embedding: Vec<usize>,
}

/// An algebra presented as a bound quiver algebra `kQ/I`.
#[derive(Clone, Debug)]
pub struct QuiverAlgebra {
    quiver: Quiver,
    relations: Vec<Relation>,
    length_cap: usize,
    algebra: Algebra,
    basis_paths: Vec<Path>,
    path_index: HashMap<Path, usize>,
    /// Normal forms of every non-basis path shorter than the cap.
    reductions: HashMap<Path, Vec<(usize, Scalar)>>,
}

impl QuiverAlgebra {
    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn length_cap(&self) -> usize {
        self.length_cap
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn into_algebra(self) -> Algebra {
        self.algebra
    }

    pub fn basis_paths(&self) -> &[Path] {
        &self.basis_paths
    }

    /// Basis index of an arrow (arrows are never reduced away).
    pub fn arrow_basis(&self, a: usize) -> usize {
        self.path_index[&Path::arrow(&self.quiver, a)]
    }

    /// Coordinates of a path in the algebra basis.
    pub fn path_element(&self, p: &Path) -> Vec<Scalar> {
        let mut v = vec![0; self.algebra.dim()];
        if p.len() >= self.length_cap {
            return v;
        }
        if let Some(&i) = self.path_index.get(p) {
            v[i] = 1;
        } else if let Some(red) = self.reductions.get(p) {
            for &(i, c) in red {
                v[i] = c;
            }
        }
        v
    }

    pub fn relation_element(&self, rel: &Relation) -> Vec<Scalar> {
        let f = self.algebra.field;
        let mut v = vec![0; self.algebra.dim()];
        for (c, p) in &rel.terms {
            let c = f.from_i64(*c);
            for (x, y) in v.iter_mut().zip(self.path_element(p)) {
                *x = f.add(*x, f.mul(c, y));
            }
        }
        v
    }
}

/// All paths from `source` of length at most `max_len`, by increasing length,
/// each length in lexicographic order of arrow indices.
fn paths_from(q: &Quiver, source: usize, max_len: usize) -> Vec<Path> {
    let mut out = vec![Path::trivial(source)];
    let mut frontier = vec![Path::trivial(source)];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for p in &frontier {
            for (a, arrow) in q.arrows.iter().enumerate() {
                if arrow.source == p.target {
                    let mut arrows = p.arrows.clone();
                    arrows.push(a);
                    next.push(Path {
                        source,
                        target: arrow.target,
                        arrows,
                    });
                }
            }
        }
        next.sort();
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// Builds `kQ/I` where `I` is generated by `relations`, certifying that every
/// path of length `length_cap` lies in `I`.
pub fn build_algebra(
    field: Field,
    quiver: &Quiver,
    relations: &[Relation],
    length_cap: usize,
) -> Result<QuiverAlgebra, QuiverError> {
    if length_cap < 2 {
        return Err(QuiverError::CapTooSmall(length_cap));
    }
    for rel in relations {
        Relation::new(quiver, rel.terms.clone())?;
    }
    let nv = quiver.vertices.len();
    let all_paths: Vec<Vec<Path>> = (0..nv).map(|s| paths_from(quiver, s, length_cap)).collect();

    let mut basis_paths: Vec<Path> = Vec::new();
    let mut reductions_local: Vec<(Path, Vec<(Path, Scalar)>)> = Vec::new();

    for s in 0..nv {
        for t in 0..nv {
            // columns: paths s -> t of length <= cap, longest first
            let mut cols: Vec<&Path> = all_paths[s].iter().filter(|p| p.target == t).collect();
            cols.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
            if cols.is_empty() {
                continue;
            }
            let col_of: HashMap<&Path, usize> = cols.iter().enumerate().map(|(i, p)| (*p, i)).collect();
            let ncols = cols.len();

            // Every u·ρ·w landing in this block. `full` keeps products whose
            // terms all fit under the cap (for certification), `truncated`
            // drops terms of length >= cap (for normal forms).
            let mut full = Subspace::new(field, ncols);
            let mut truncated = Subspace::new(field, ncols);
            for rel in relations {
                for w in all_paths[s].iter().filter(|w| w.target == rel.source()) {
                    for u in all_paths[rel.target()].iter().filter(|u| u.target == t) {
                        let pad = u.len() + w.len();
                        if pad + rel.min_len() > length_cap {
                            continue;
                        }
                        let mut v_full = vec![0; ncols];
                        let mut v_trunc = vec![0; ncols];
                        for (c, p) in &rel.terms {
                            let padded = u.after(&p.after(w).unwrap()).unwrap();
                            let c = field.from_i64(*c);
                            if padded.len() <= length_cap {
                                let k = col_of[&padded];
                                v_full[k] = field.add(v_full[k], c);
                                if padded.len() < length_cap {
                                    v_trunc[k] = field.add(v_trunc[k], c);
                                }
                            }
                        }
                        if pad + rel.max_len() <= length_cap {
                            full.insert(&v_full);
                        }
                        truncated.insert(&v_trunc);
                    }
                }
            }
            for (k, p) in cols.iter().enumerate() {
                if p.len() == length_cap {
                    let mut e = vec![0; ncols];
                    e[k] = 1;
                    if !full.contains(&e) {
                        return Err(QuiverError::CapExceeded(p.label(quiver), length_cap));
                    }
                }
            }

            // Normal forms modulo the truncated span, for paths below the cap.
            let pivot_row: HashMap<usize, usize> = truncated
                .pivots()
                .iter()
                .enumerate()
                .map(|(r, &c)| (c, r))
                .collect();
            let free: Vec<usize> = (0..ncols)
                .filter(|&k| cols[k].len() < length_cap && !pivot_row.contains_key(&k))
                .collect();
            for &k in &free {
                basis_paths.push(cols[k].clone());
            }
            for (&k, &r) in &pivot_row {
                let row = &truncated.rows()[r];
                let expansion: Vec<(Path, Scalar)> = free
                    .iter()
                    .filter(|&&fc| row[fc] != 0)
                    .map(|&fc| (cols[fc].clone(), field.neg(row[fc])))
                    .collect();
                reductions_local.push((cols[k].clone(), expansion));
            }
        }
    }

    // Deterministic basis order: trivial paths by vertex, then by length, then
    // lexicographically by arrows.
    basis_paths.sort_by(|a, b| {
        a.len()
            .cmp(&b.len())
            .then_with(|| a.arrows.cmp(&b.arrows))
            .then_with(|| a.source.cmp(&b.source))
    });
    let path_index: HashMap<Path, usize> = basis_paths
        .iter()
        .enumerate()
        .map(|(i, p)| (p.clone(), i))
        .collect();
    let reductions: HashMap<Path, Vec<(usize, Scalar)>> = reductions_local
        .into_iter()
        .map(|(p, exp)| {
            let mut e: Vec<(usize, Scalar)> =
                exp.into_iter().map(|(q, c)| (path_index[&q], c)).collect();
            e.sort_unstable();
            (p, e)
        })
        .collect();

    let n = basis_paths.len();
    let mut table = vec![Vec::new(); n * n];
    for (i, a) in basis_paths.iter().enumerate() {
        for (j, b) in basis_paths.iter().enumerate() {
            let Some(prod) = a.after(b) else { continue };
            if prod.len() >= length_cap {
                continue;
            }
            table[i * n + j] = match path_index.get(&prod) {
                Some(&k) => vec![(k, 1)],
                None => reductions.get(&prod).cloned().unwrap_or_default(),
            };
        }
    }
    let algebra = Algebra::new(AlgebraData {
        field,
        vertex_labels: quiver.vertices.clone(),
        labels: basis_paths.iter().map(|p| p.label(quiver)).collect(),
        idem: (0..nv).map(|v| path_index[&Path::trivial(v)]).collect(),
        grade: basis_paths.iter().map(|p| (p.target, p.source)).collect(),
        table,
    })?;
    Ok(QuiverAlgebra {
        quiver: quiver.clone(),
        relations: relations.to_vec(),
        length_cap,
        algebra,
        basis_paths,
        path_index,
        reductions,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f() -> Field {
        Field::default()
    }

    fn a2() -> QuiverAlgebra {
        let mut q = Quiver::new(["1", "2"]).unwrap();
        q.add_arrow("a", "1", "2").unwrap();
        build_algebra(f(), &q, &[], 4).unwrap()
    }

    fn dual_numbers() -> QuiverAlgebra {
        let mut q = Quiver::new(["1"]).unwrap();
        q.add_arrow("x", "1", "1").unwrap();
        let rel = Relation::monomial(&q, q.parse_path("x*x").unwrap()).unwrap();
        build_algebra(f(), &q, &[rel], 3).unwrap()
    }

    fn example_nine() -> QuiverAlgebra {
        let mut q = Quiver::new(["1", "2", "3", "4"]).unwrap();
        q.add_arrow("alpha", "1", "2").unwrap();
        q.add_arrow("beta", "2", "3").unwrap();
        q.add_arrow("gamma", "3", "2").unwrap();
        q.add_arrow("delta", "3", "4").unwrap();
        let rels: Vec<Relation> = ["beta*gamma", "gamma*beta", "delta*beta"]
            .iter()
            .map(|s| Relation::monomial(&q, q.parse_path(s).unwrap()).unwrap())
            .collect();
        build_algebra(f(), &q, &rels, 4).unwrap()
    }

    #[test]
    fn a2_has_three_paths() {
        let alg = a2();
        assert_eq!(alg.algebra().labels(), &["e1", "e2", "a"]);
        assert_eq!(alg.algebra().generators(), &[2]);
    }

    #[test]
    fn dual_numbers_square_to_zero() {
        let alg = dual_numbers();
        let a = alg.algebra();
        assert_eq!(a.dim(), 2);
        let x = alg.arrow_basis(0);
        assert!(a.mul_basis(x, x).is_empty());
        assert!(a.is_radical_square_zero());
    }

    #[test]
    fn monomial_example_has_dimension_nine() {
        let alg = example_nine();
        assert_eq!(alg.algebra().dim(), 9);
        assert!(alg.algebra().labels().contains(&"beta*alpha".to_string()));
        let a = alg.algebra().corner(&[1, 2, 3]).unwrap();
        assert_eq!(a.algebra.dim(), 6);
        assert!(a.algebra.is_radical_square_zero());
        assert_eq!(alg.algebra().corner(&[0]).unwrap().algebra.dim(), 1);
    }

    #[test]
    fn full_corner_is_identity() {
        let alg = example_nine();
        let c = alg.algebra().corner(&[0, 1, 2, 3]).unwrap();
        assert_eq!(&c.algebra, alg.algebra());
    }

    #[test]
    fn relations_vanish() {
        let alg = example_nine();
        for rel in alg.relations() {
            assert!(alg.relation_element(rel).iter().all(|&c| c == 0));
        }
    }

    #[test]
    fn commutativity_relation() {
        // square 1 -> 2 -> 4 and 1 -> 3 -> 4 with b*a - d*c
        let mut q = Quiver::new(["1", "2", "3", "4"]).unwrap();
        q.add_arrow("a", "1", "2").unwrap();
        q.add_arrow("b", "2", "4").unwrap();
        q.add_arrow("c", "1", "3").unwrap();
        q.add_arrow("d", "3", "4").unwrap();
        let rel = Relation::new(
            &q,
            vec![(1, q.parse_path("b*a").unwrap()), (-1, q.parse_path("d*c").unwrap())],
        )
        .unwrap();
        let alg = build_algebra(f(), &q, &[rel.clone()], 4).unwrap();
        assert_eq!(alg.algebra().dim(), 9);
        assert!(alg.relation_element(&rel).iter().all(|&c| c == 0));
        let ba = alg.path_element(&q.parse_path("b*a").unwrap());
        let dc = alg.path_element(&q.parse_path("d*c").unwrap());
        assert_eq!(ba, dc);
        assert!(ba.iter().any(|&c| c != 0));
    }

    #[test]
    fn rejects_short_and_nonparallel_terms() {
        let mut q = Quiver::new(["1", "2"]).unwrap();
        q.add_arrow("a", "1", "2").unwrap();
        q.add_arrow("b", "2", "1").unwrap();
        let short = Relation::monomial(&q, q.parse_path("a").unwrap());
        assert!(matches!(short, Err(QuiverError::NotAdmissible(_))));
        let bad = Relation::new(
            &q,
            vec![(1, q.parse_path("b*a").unwrap()), (1, q.parse_path("a*b").unwrap())],
        );
        assert!(matches!(bad, Err(QuiverError::NotParallel(_, _))));
        assert!(matches!(
            q.parse_path("a*a"),
            Err(QuiverError::NotComposable { .. })
        ));
    }

    #[test]
    fn uncapped_loop_is_rejected() {
        let mut q = Quiver::new(["1"]).unwrap();
        q.add_arrow("x", "1", "1").unwrap();
        let err = build_algebra(f(), &q, &[], 5).unwrap_err();
        assert!(matches!(err, QuiverError::CapExceeded(_, 5)));
        let rel = Relation::monomial(&q, q.parse_path("x*x*x").unwrap()).unwrap();
        assert_eq!(build_algebra(f(), &q, &[rel], 5).unwrap().algebra().dim(), 3);
    }

    #[test]
    fn opposite_is_an_involution() {
        let alg = example_nine();
        let a = alg.algebra();
        assert_eq!(&a.opposite().opposite(), a);
        let d = dual_numbers();
        assert_eq!(&d.algebra().opposite(), d.algebra());
        let a2 = a2();
        let op = a2.algebra().opposite();
        assert_eq!(op.block(0, 0).len(), a2.algebra().block(0, 0).len());
        assert_eq!(op.block(0, 1), a2.algebra().block(1, 0));
        assert!(op.is_associative());
    }

    #[test]
    fn relation_order_does_not_matter() {
        let alg = example_nine();
        let mut rels = alg.relations().to_vec();
        rels.reverse();
        let again = build_algebra(f(), alg.quiver(), &rels, 4).unwrap();
        assert_eq!(again.algebra(), alg.algebra());
    }

    #[test]
    fn corner_dimension_is_sum_of_blocks() {
        let alg = example_nine();
        let a = alg.algebra();
        let subset = [1, 3];
        let expected: usize = subset
            .iter()
            .flat_map(|&u| subset.iter().map(move |&v| (u, v)))
            .map(|(u, v)| a.block(u, v).len())
            .sum();
        assert_eq!(a.corner(&subset).unwrap().algebra.dim(), expected);
    }

    #[test]
    fn connectivity() {
        assert!(example_nine().algebra().is_connected());
        let q = Quiver::new(["1", "2"]).unwrap();
        assert!(!build_algebra(f(), &q, &[], 2).unwrap().algebra().is_connected());
    }
}
