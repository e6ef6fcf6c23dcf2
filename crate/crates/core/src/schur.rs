//! Idempotent subalgebras `eRe`, the Schur functor `S_e = e·−` with its
//! adjoints `T_e = Re ⊗_{eRe} −` and `L_e = Hom_{eRe}(eR, −)`, and checks
//! of when `S_e` identifies Gorenstein defect categories.
//!
//! Conditions quantified over all Gorenstein projective modules are
//! evaluated on [`gproj_test_set`], so a positive answer means "holds on the
//! test set". For the conditions on `R/ReR`-modules the simples suffice:
//! finiteness of (Gorenstein) projective dimension is closed under
//! extensions, and every module has a finite composition series.

use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::exactfield::{Mat, Scalar, Subspace};
use crate::gproj::{gpd, gproj_test_set};
use crate::homalg::{min_resolution, pd, tor_from, DimValue, Outcome, Settings};
use crate::modcat::{hom_space, Bimodule, Module, ModuleError, Morphism};
use crate::quivalg::{Algebra, AlgebraData, AlgebraError, Corner};

#[derive(Debug, Error)]
pub enum SchurError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Module(#[from] ModuleError),
    #[error("e·e ≠ e")]
    NotIdempotent,
    #[error("the {0} map is not an isomorphism")]
    NotIso(&'static str),
}

/// `e = Σ_{v ∈ vertices} e_v` with its corner algebra and the bimodule `Re`.
#[derive(Clone, Debug)]
pub struct Idempotent {
    alg: Arc<Algebra>,
    corner: Corner,
    corner_alg: Arc<Algebra>,
    re: Bimodule,
}

impl Idempotent {
    pub fn new(alg: Arc<Algebra>, vertices: &[usize]) -> Result<Idempotent, SchurError> {
        let corner = alg.corner(vertices)?;
        let mut e = vec![0; alg.dim()];
        for &v in &corner.vertices {
            e[alg.idempotent(v)] = 1;
        }
        if alg.mul(&e, &e) != e {
            return Err(SchurError::NotIdempotent);
        }
        let corner_alg = Arc::new(corner.algebra.clone());
        let all: Vec<usize> = (0..alg.num_vertices()).collect();
        let whole = alg.corner(&all)?;
        let re = Bimodule::from_ambient(&alg, &whole, alg.clone(), &corner, corner_alg.clone());
        Ok(Idempotent {
            alg,
            corner,
            corner_alg,
            re,
        })
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.alg
    }

    /// `eRe`.
    pub fn corner(&self) -> &Arc<Algebra> {
        &self.corner_alg
    }

    pub fn vertices(&self) -> &[usize] {
        &self.corner.vertices
    }

    /// Vertices outside `e`, which index the simple `R/ReR`-modules.
    pub fn complement(&self) -> Vec<usize> {
        (0..self.alg.num_vertices())
            .filter(|v| !self.corner.vertices.contains(v))
            .collect()
    }

    /// `Re` as an `R`-`eRe`-bimodule.
    pub fn re(&self) -> &Bimodule {
        &self.re
    }

    /// `e R e_w` as a left `eRe`-module.
    fn column(&self, w: usize) -> Module {
        let alg = &self.alg;
        let field = alg.field();
        let rows: Vec<Vec<usize>> = self.corner.vertices.iter().map(|&v| alg.block(v, w)).collect();
        let actions = self
            .corner
            .embedding
            .iter()
            .map(|&c| {
                let (l, r) = alg.grade(c);
                let (li, ri) = (self.local(l), self.local(r));
                let mut m = Mat::zeros(field, rows[li].len(), rows[ri].len());
                for (j, &x) in rows[ri].iter().enumerate() {
                    for &(k, s) in alg.mul_basis(c, x) {
                        let i = rows[li].iter().position(|&y| y == k).expect("graded product");
                        m.set(i, j, s);
                    }
                }
                m
            })
            .collect();
        Module::from_parts(self.corner_alg.clone(), rows.iter().map(Vec::len).collect(), actions)
    }

    fn local(&self, v: usize) -> usize {
        self.corner.vertices.iter().position(|&u| u == v).expect("vertex of e")
    }

    /// `eR` as a left `eRe`-module, the sum of the columns `eRe_w`.
    pub fn er_left(&self) -> Module {
        let cols: Vec<Module> = (0..self.alg.num_vertices()).map(|w| self.column(w)).collect();
        Module::direct_sum(&cols).expect("same algebra").module
    }
}

/// `S_e(M) = eM` as an `eRe`-module.
pub fn schur_s(e: &Idempotent, m: &Module) -> Module {
    m.restrict(e.corner_alg.clone(), &e.corner.vertices, &e.corner.embedding)
}

/// `T_e(G)` with the isomorphism `G → S_e T_e(G)`, `g ↦ e ⊗ g`.
pub struct Induced {
    pub module: Module,
    pub counit: Morphism,
}

pub fn schur_t(e: &Idempotent, g: &Module) -> Result<Induced, SchurError> {
    let tp = e.re.tensor(g)?;
    let module = tp.module.clone();
    let restricted = schur_s(e, &module);
    let field = g.field();
    // position of e_v among the basis of Re
    let re_basis: Vec<usize> = (0..e.alg.dim())
        .filter(|&b| e.corner.vertices.contains(&e.alg.grade(b).1))
        .collect();
    let blocks = e
        .corner
        .vertices
        .iter()
        .enumerate()
        .map(|(w, &v)| {
            let i = re_basis.iter().position(|&b| b == e.alg.idempotent(v)).expect("e_v ∈ Re");
            let off = module.offset(v);
            let cols: Vec<Vec<Scalar>> = (0..g.dims()[w])
                .map(|t| {
                    let mut x = vec![0; g.dims()[w]];
                    x[t] = 1;
                    let full = e.re.tensor_element(&tp, i, &x);
                    full[off..off + module.dims()[v]].to_vec()
                })
                .collect();
            Mat::from_columns(field, module.dims()[v], &cols)
        })
        .collect();
    let counit = Morphism::new(g.clone(), restricted, blocks)?;
    if !counit.is_iso() {
        return Err(SchurError::NotIso("counit"));
    }
    Ok(Induced { module, counit })
}

/// `L_e(G)` with the isomorphism `S_e L_e(G) → G`, `φ ↦ φ(e)`.
pub struct Coinduced {
    pub module: Module,
    pub unit: Morphism,
}

pub fn schur_l(e: &Idempotent, g: &Module) -> Result<Coinduced, SchurError> {
    let alg = &e.alg;
    let field = alg.field();
    let nv = alg.num_vertices();
    let columns: Vec<Module> = (0..nv).map(|w| e.column(w)).collect();
    let bases: Vec<Vec<Morphism>> = columns
        .iter()
        .map(|c| hom_space(c, g))
        .collect::<Result<_, _>>()?;
    let flat: Vec<Vec<Vec<Scalar>>> = bases
        .iter()
        .map(|b| b.iter().map(Morphism::flatten).collect())
        .collect();
    let dims: Vec<usize> = bases.iter().map(Vec::len).collect();
    // r of grade (l, s) sends φ ∈ Hom(eRe_s, G) to φ ∘ (x ↦ x·r) on eRe_l
    let actions = (0..alg.dim())
        .map(|r| {
            let (l, s) = alg.grade(r);
            let rho: Vec<Mat> = e
                .corner
                .vertices
                .iter()
                .map(|&v| {
                    let src = alg.block(v, l);
                    let dst = alg.block(v, s);
                    let mut m = Mat::zeros(field, dst.len(), src.len());
                    for (j, &x) in src.iter().enumerate() {
                        for &(k, c) in alg.mul_basis(x, r) {
                            let i = dst.iter().position(|&y| y == k).expect("graded product");
                            m.set(i, j, c);
                        }
                    }
                    m
                })
                .collect();
            let cols: Vec<Vec<Scalar>> = bases[s]
                .iter()
                .map(|phi| {
                    let image: Vec<Scalar> = phi
                        .blocks()
                        .iter()
                        .zip(&rho)
                        .flat_map(|(b, p)| b.mul(p).data().to_vec())
                        .collect();
                    if flat[l].is_empty() {
                        Vec::new()
                    } else {
                        Mat::from_columns(field, image.len(), &flat[l])
                            .solve(&image)
                            .expect("image lies in the hom space")
                    }
                })
                .collect();
            Mat::from_columns(field, dims[l], &cols)
        })
        .collect();
    let module = Module::new(alg.clone(), dims, actions)?;
    let restricted = schur_s(e, &module);
    let blocks = e
        .corner
        .vertices
        .iter()
        .enumerate()
        .map(|(w, &v)| {
            let pos = alg
                .block(v, v)
                .iter()
                .position(|&b| b == alg.idempotent(v))
                .expect("e_v ∈ e_v R e_v");
            let cols: Vec<Vec<Scalar>> = bases[v].iter().map(|phi| phi.block(w).column(pos)).collect();
            Mat::from_columns(field, g.dims()[w], &cols)
        })
        .collect();
    let unit = Morphism::new(restricted, g.clone(), blocks)?;
    if !unit.is_iso() {
        return Err(SchurError::NotIso("unit"));
    }
    Ok(Coinduced { module, unit })
}

/// `R/ReR` together with the inflation of its modules to `R`.
#[derive(Clone, Debug)]
pub struct QuotientInflation {
    /// `None` when `e = 1`, so that the quotient is zero.
    pub algebra: Option<Arc<Algebra>>,
    /// Vertices of `R` that survive, in order.
    pub vertices: Vec<usize>,
    /// Each basis element of `R` reduced modulo `ReR`, in quotient coordinates.
    reduction: Vec<Vec<(usize, Scalar)>>,
    ambient: Arc<Algebra>,
}

impl QuotientInflation {
    pub fn inflate(&self, n: &Module) -> Module {
        let alg = &self.ambient;
        let field = alg.field();
        let mut dims = vec![0; alg.num_vertices()];
        for (i, &v) in self.vertices.iter().enumerate() {
            dims[v] = n.dims()[i];
        }
        let actions = (0..alg.dim())
            .map(|b| {
                let (l, r) = alg.grade(b);
                let mut m = Mat::zeros(field, dims[l], dims[r]);
                for &(k, c) in &self.reduction[b] {
                    m.add_scaled(c, n.action(k));
                }
                m
            })
            .collect();
        Module::from_parts(alg.clone(), dims, actions)
    }

    pub fn simples(&self) -> Vec<Module> {
        match &self.algebra {
            Some(q) => Module::simples(q).iter().map(|s| self.inflate(s)).collect(),
            None => Vec::new(),
        }
    }
}

/// `R/ReR`, with `ReR` spanned by the products `b·b'` through vertices of `e`.
pub fn quotient_inflation(e: &Idempotent) -> Result<QuotientInflation, SchurError> {
    let alg = &e.alg;
    let field = alg.field();
    let n = alg.dim();
    let mut ideal = Subspace::new(field, n);
    for &v in e.vertices() {
        for &(l, _) in alg.grades().iter().filter(|g| g.1 == v) {
            for a in alg.block(l, v) {
                for r in 0..alg.num_vertices() {
                    for b in alg.block(v, r) {
                        ideal.insert(&alg.mul(&alg.basis_vec(a), &alg.basis_vec(b)));
                    }
                }
            }
        }
    }
    let survivors = ideal.complement();
    let vertices = e.complement();
    let mut index = vec![usize::MAX; n];
    for (i, &b) in survivors.iter().enumerate() {
        index[b] = i;
    }
    let reduce = |v: &[Scalar]| -> Vec<(usize, Scalar)> {
        let mut v = v.to_vec();
        ideal.reduce(&mut v);
        v.iter()
            .enumerate()
            .filter(|&(_, &c)| c != 0)
            .map(|(k, &c)| (index[k], c))
            .collect()
    };
    let reduction: Vec<_> = (0..n).map(|b| reduce(&alg.basis_vec(b))).collect();
    let algebra = if vertices.is_empty() {
        None
    } else {
        let mut new_vertex = vec![usize::MAX; alg.num_vertices()];
        for (i, &v) in vertices.iter().enumerate() {
            new_vertex[v] = i;
        }
        let m = survivors.len();
        let mut table = vec![Vec::new(); m * m];
        for (i, &a) in survivors.iter().enumerate() {
            for (j, &b) in survivors.iter().enumerate() {
                table[i * m + j] = reduce(&alg.mul(&alg.basis_vec(a), &alg.basis_vec(b)));
            }
        }
        let data = AlgebraData {
            field,
            vertex_labels: vertices.iter().map(|&v| alg.vertex_labels()[v].clone()).collect(),
            labels: survivors.iter().map(|&b| alg.label(b).to_string()).collect(),
            idem: vertices.iter().map(|&v| index[alg.idempotent(v)]).collect(),
            grade: survivors
                .iter()
                .map(|&b| {
                    let (l, r) = alg.grade(b);
                    (new_vertex[l], new_vertex[r])
                })
                .collect(),
            table,
        };
        Some(Arc::new(Algebra::new(data)?))
    };
    Ok(QuotientInflation {
        algebra,
        vertices,
        reduction,
        ambient: alg.clone(),
    })
}

/// Outcome of one of the conditions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Condition {
    Holds,
    Fails,
    Unknown,
}

impl Condition {
    pub fn verdict(self) -> &'static str {
        match self {
            Condition::Holds => "holds",
            Condition::Fails => "fails",
            Condition::Unknown => "unknown",
        }
    }

    /// Conjunction: any failure fails, otherwise any unknown is unknown.
    pub fn and(self, other: Condition) -> Condition {
        match (self, other) {
            (Condition::Fails, _) | (_, Condition::Fails) => Condition::Fails,
            (Condition::Unknown, _) | (_, Condition::Unknown) => Condition::Unknown,
            _ => Condition::Holds,
        }
    }

    pub fn all(items: impl IntoIterator<Item = Condition>) -> Condition {
        items.into_iter().fold(Condition::Holds, Condition::and)
    }

    /// "Finite" holds, "infinite" fails.
    pub fn of_dim(d: &DimValue) -> Condition {
        match d {
            DimValue::Finite(_) => Condition::Holds,
            DimValue::Infinite(_) => Condition::Fails,
            DimValue::Unknown { .. } => Condition::Unknown,
        }
    }
}

/// A dimension computed for one module of a test set.
#[derive(Clone, Debug)]
pub struct DimCheck {
    pub module: Module,
    pub value: DimValue,
}

#[derive(Clone, Debug)]
pub struct DimCondition {
    pub condition: Condition,
    pub checks: Vec<DimCheck>,
}

impl DimCondition {
    fn from_checks(checks: Vec<DimCheck>) -> DimCondition {
        DimCondition {
            condition: Condition::all(checks.iter().map(|c| Condition::of_dim(&c.value))),
            checks,
        }
    }
}

/// Eventual vanishing of `Tor_i^{eRe}(Re, G)` for one module `G`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TorVanishing {
    /// Zero for every `i ≥ from`; `tail` says how the tail is covered.
    Vanishes { from: usize, tail: TorTail },
    /// Nonzero at `i` on the periodic tail, hence for arbitrarily large `i`.
    FailsAt { i: usize, dim: usize },
    Unknown { bound: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TorTail {
    FiniteResolution,
    Periodic,
    /// Zero for all degrees up to the bound.
    Bound,
}

impl TorVanishing {
    pub fn condition(&self) -> Condition {
        match self {
            TorVanishing::Vanishes { .. } => Condition::Holds,
            TorVanishing::FailsAt { .. } => Condition::Fails,
            TorVanishing::Unknown { .. } => Condition::Unknown,
        }
    }
}

/// `Tor_i^{eRe}(Re, G)` for large `i`. A finite resolution vanishes
/// eventually; a periodic one vanishes iff it does on one period; a
/// truncated one counts as vanishing when every degree up to the bound is
/// zero.
pub fn tor_vanishing(e: &Idempotent, g: &Module, settings: &Settings) -> TorVanishing {
    let res = min_resolution(g, settings);
    let tor = |i: usize| tor_from(&e.re, &res, i).unwrap_or(0);
    let last_nonzero = |hi: usize| (1..=hi).rev().find(|&i| tor(i) != 0);
    match &res.outcome {
        Outcome::Finite { pd } => TorVanishing::Vanishes {
            from: last_nonzero(*pd).map_or(1, |i| i + 1),
            tail: TorTail::FiniteResolution,
        },
        Outcome::Periodic(c) => {
            if let Some(i) = (c.i + 1..=c.j).find(|&i| tor(i) != 0) {
                return TorVanishing::FailsAt { i, dim: tor(i) };
            }
            TorVanishing::Vanishes {
                from: last_nonzero(c.i).map_or(1, |i| i + 1),
                tail: TorTail::Periodic,
            }
        }
        Outcome::Truncated { bound } => {
            if (1..=*bound).all(|i| tor(i) == 0) {
                TorVanishing::Vanishes {
                    from: 1,
                    tail: TorTail::Bound,
                }
            } else {
                TorVanishing::Unknown { bound: *bound }
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct TorCondition {
    pub condition: Condition,
    pub checks: Vec<(Module, TorVanishing)>,
}

/// The Tor hypothesis over the test set of `eRe`.
pub fn tor_condition(e: &Idempotent, settings: &Settings) -> TorCondition {
    let checks: Vec<(Module, TorVanishing)> = gproj_test_set(&e.corner_alg, settings)
        .into_iter()
        .map(|g| {
            let v = tor_vanishing(e, &g, settings);
            (g, v)
        })
        .collect();
    TorCondition {
        condition: Condition::all(checks.iter().map(|(_, v)| v.condition())),
        checks,
    }
}

/// `Gpd_{eRe} S_e(F)` finite for every `F` in the test set of `R`.
pub fn check_c1(e: &Idempotent, settings: &Settings) -> DimCondition {
    let checks = gproj_test_set(&e.alg, settings)
        .into_iter()
        .map(|f| {
            let s = schur_s(e, &f);
            DimCheck {
                value: gpd(&s, settings),
                module: f,
            }
        })
        .collect();
    DimCondition::from_checks(checks)
}

/// `Gpd_R T_e(G)` finite for every `G` in the test set of `eRe`.
pub fn check_c2(e: &Idempotent, settings: &Settings) -> Result<DimCondition, SchurError> {
    let checks = gproj_test_set(&e.corner_alg, settings)
        .into_iter()
        .map(|g| {
            let t = schur_t(e, &g)?;
            Ok(DimCheck {
                value: gpd(&t.module, settings),
                module: g,
            })
        })
        .collect::<Result<_, SchurError>>()?;
    Ok(DimCondition::from_checks(checks))
}

/// Every `R/ReR`-module has finite Gorenstein projective dimension over `R`.
pub fn check_c3_gorenstein(e: &Idempotent, settings: &Settings) -> DimCondition {
    let checks = e
        .complement()
        .into_iter()
        .map(|v| {
            let s = Module::simple(e.alg.clone(), v);
            DimCheck {
                value: gpd(&s, settings),
                module: s,
            }
        })
        .collect();
    DimCondition::from_checks(checks)
}

/// Every `R/ReR`-module has finite projective dimension over `R`, and
/// `pd_{eRe} eR` is finite.
#[derive(Clone, Debug)]
pub struct StrictCondition {
    pub condition: Condition,
    pub simples: DimCondition,
    pub er_pd: DimValue,
}

pub fn check_c3_strict(e: &Idempotent, settings: &Settings) -> StrictCondition {
    let checks = e
        .complement()
        .into_iter()
        .map(|v| {
            let s = Module::simple(e.alg.clone(), v);
            DimCheck {
                value: pd(&s, settings),
                module: s,
            }
        })
        .collect();
    let simples = DimCondition::from_checks(checks);
    let er_pd = pd(&e.er_left(), settings);
    StrictCondition {
        condition: simples.condition.and(Condition::of_dim(&er_pd)),
        simples,
        er_pd,
    }
}

/// Whether a conclusion of the form "under the Tor hypothesis, X iff the
/// conditions hold" can be drawn.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Conclusion {
    Holds,
    Fails,
    Inconclusive,
}

impl Conclusion {
    pub fn verdict(self) -> &'static str {
        match self {
            Conclusion::Holds => "holds",
            Conclusion::Fails => "fails",
            Conclusion::Inconclusive => "inconclusive",
        }
    }

    /// Under a hypothesis, a conclusion equivalent to the conjunction of
    /// `conditions`.
    pub fn from_conditions(hypothesis: Condition, conditions: &[Condition]) -> Conclusion {
        if hypothesis != Condition::Holds {
            return Conclusion::Inconclusive;
        }
        match Condition::all(conditions.iter().copied()) {
            Condition::Holds => Conclusion::Holds,
            Condition::Fails => Conclusion::Fails,
            Condition::Unknown => Conclusion::Inconclusive,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SchurReport {
    pub vertices: Vec<usize>,
    pub tor: TorCondition,
    pub c1: DimCondition,
    pub c2: DimCondition,
    pub c3: DimCondition,
    pub c3_strict: StrictCondition,
    pub ambient_test_set: usize,
    pub corner_test_set: usize,
    pub bound: usize,
    /// `S_e` induces an equivalence of Gorenstein defect categories.
    pub defect_equivalence: Conclusion,
    /// `S_e` induces compatible equivalences of singularity, stable
    /// Gorenstein projective and Gorenstein defect categories.
    pub full_diagram: Conclusion,
}

impl SchurReport {
    pub fn unknown_count(&self) -> usize {
        let dims = |c: &DimCondition| c.checks.iter().filter(|x| x.value.is_unknown()).count();
        self.tor
            .checks
            .iter()
            .filter(|(_, v)| v.condition() == Condition::Unknown)
            .count()
            + dims(&self.c1)
            + dims(&self.c2)
            + dims(&self.c3)
            + dims(&self.c3_strict.simples)
            + usize::from(self.c3_strict.er_pd.is_unknown())
    }
}

pub fn schur_report(e: &Idempotent, settings: &Settings) -> Result<SchurReport, SchurError> {
    let tor = tor_condition(e, settings);
    let c1 = check_c1(e, settings);
    let c2 = check_c2(e, settings)?;
    let c3 = check_c3_gorenstein(e, settings);
    let c3_strict = check_c3_strict(e, settings);
    let defect_equivalence =
        Conclusion::from_conditions(tor.condition, &[c1.condition, c2.condition, c3.condition]);
    let full_diagram = Conclusion::from_conditions(
        tor.condition,
        &[c1.condition, c2.condition, c3_strict.condition],
    );
    Ok(SchurReport {
        vertices: e.vertices().to_vec(),
        ambient_test_set: c1.checks.len(),
        corner_test_set: c2.checks.len(),
        tor,
        c1,
        c2,
        c3,
        c3_strict,
        bound: settings.bound,
        defect_equivalence,
        full_diagram,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homalg::tests::{a2, algebra, b_three, dual_numbers};
    use crate::modcat::{hom_dim, is_isomorphic, random_combination};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn settings() -> Settings {
        Settings::default()
    }

    /// The algebra with `α: 1 → 2, β: 2 → 3, γ: 3 → 2, δ: 3 → 4` and
    /// relations `βγ, γβ, δβ`.
    fn nine() -> Arc<Algebra> {
        algebra(
            &["1", "2", "3", "4"],
            &[("a", "1", "2"), ("b", "2", "3"), ("c", "3", "2"), ("d", "3", "4")],
            &["b*c", "c*b", "d*b"],
        )
    }

    fn random_module(alg: &Arc<Algebra>, seed: u64) -> Module {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let nv = alg.num_vertices();
        let summands: Vec<usize> = (0..nv).flat_map(|v| std::iter::repeat(v).take(1 + (seed as usize + v) % 2)).collect();
        let free = Module::free(alg.clone(), &summands);
        let f = random_combination(&hom_space(&free, &free).unwrap(), &mut rng);
        f.cokernel().module
    }

    #[test]
    fn schur_s_of_regular_and_projectives() {
        let alg = nine();
        assert_eq!(alg.dim(), 9);
        let e = Idempotent::new(alg.clone(), &[1, 2, 3]).unwrap();
        let p1 = Module::projective(alg.clone(), 0);
        assert_eq!(schur_s(&e, &p1).dim(), 2);
        let r = schur_s(&e, &Module::regular(alg.clone()));
        let expected: usize = e.vertices().iter().map(|&v| (0..4).map(|w| alg.block(v, w).len()).sum::<usize>()).sum();
        assert_eq!(r.dim(), expected);
    }

    #[test]
    fn induction_and_coinduction_are_sections() {
        for alg in [nine(), b_three(), a2()] {
            let nv = alg.num_vertices();
            for subset in 1..(1usize << nv) {
                let verts: Vec<usize> = (0..nv).filter(|v| subset >> v & 1 == 1).collect();
                let e = Idempotent::new(alg.clone(), &verts).unwrap();
                for g in Module::simples(e.corner()).into_iter().chain([Module::regular(e.corner().clone())]) {
                    let t = schur_t(&e, &g).unwrap();
                    assert!(t.counit.is_iso());
                    let l = schur_l(&e, &g).unwrap();
                    assert!(l.unit.is_iso());
                }
            }
        }
    }

    #[test]
    fn induced_regular_is_re() {
        let alg = nine();
        let e = Idempotent::new(alg.clone(), &[1, 2, 3]).unwrap();
        let t = schur_t(&e, &Module::regular(e.corner().clone())).unwrap();
        let re = e.re().as_left_module();
        assert!(is_isomorphic(&t.module, &re, 32, 0).unwrap().is_yes());
        assert!(schur_l(&e, &Module::zero(e.corner().clone())).unwrap().module.is_zero());
    }

    #[test]
    fn adjunction_dimensions() {
        let alg = nine();
        let e = Idempotent::new(alg.clone(), &[1, 2, 3]).unwrap();
        let corner = e.corner().clone();
        for seed in 0..6 {
            let m = random_module(&alg, seed);
            let g = random_module(&corner, seed + 100);
            let sm = schur_s(&e, &m);
            let t = schur_t(&e, &g).unwrap().module;
            let l = schur_l(&e, &g).unwrap().module;
            assert_eq!(hom_dim(&t, &m).unwrap(), hom_dim(&g, &sm).unwrap());
            assert_eq!(hom_dim(&sm, &g).unwrap(), hom_dim(&m, &l).unwrap());
        }
    }

    #[test]
    fn quotient_by_corner_ideal() {
        let alg = nine();
        let e = Idempotent::new(alg.clone(), &[1, 2, 3]).unwrap();
        let q = quotient_inflation(&e).unwrap();
        let qa = q.algebra.clone().unwrap();
        assert_eq!(qa.dim(), 1);
        for s in q.simples() {
            assert!(s.validate().is_ok());
            assert!(schur_s(&e, &s).is_zero());
        }
        let full = Idempotent::new(alg.clone(), &[0, 1, 2, 3]).unwrap();
        let q = quotient_inflation(&full).unwrap();
        assert!(q.algebra.is_none());
        assert!(q.simples().is_empty());
        // every arrow of B touches vertex 4, so only e_3 and e_5 survive
        let b = b_three();
        let e = Idempotent::new(b.clone(), &[1]).unwrap();
        let q = quotient_inflation(&e).unwrap();
        assert_eq!(q.algebra.as_ref().unwrap().dim(), 2);
        let r = q.inflate(&Module::regular(q.algebra.clone().unwrap()));
        assert!(r.validate().is_ok());
        assert!(schur_s(&e, &r).is_zero());
    }

    #[test]
    fn trivial_idempotent_passes_everything() {
        for alg in [a2(), dual_numbers(), b_three()] {
            let all: Vec<usize> = (0..alg.num_vertices()).collect();
            let e = Idempotent::new(alg, &all).unwrap();
            let r = schur_report(&e, &settings()).unwrap();
            assert_eq!(r.c1.condition, Condition::Holds, "{:?}", r.c1);
            assert_eq!(r.c2.condition, Condition::Holds);
            assert_eq!(r.c3.condition, Condition::Holds);
            assert_eq!(r.c3_strict.condition, Condition::Holds);
            assert_eq!(r.defect_equivalence, Conclusion::Holds);
            assert_eq!(r.full_diagram, Conclusion::Holds);
        }
    }

    #[test]
    fn nine_dimensional_example_full_diagram() {
        let e = Idempotent::new(nine(), &[1, 2, 3]).unwrap();
        let r = schur_report(&e, &settings()).unwrap();
        assert_eq!(r.unknown_count(), 0);
        assert_eq!(r.full_diagram, Conclusion::Holds);
        assert_eq!(r.defect_equivalence, Conclusion::Holds);
    }

    #[test]
    fn tor_vanishes_for_projective_re() {
        let alg = a2();
        let e = Idempotent::new(alg, &[1]).unwrap();
        let t = tor_condition(&e, &settings());
        assert_eq!(t.condition, Condition::Holds);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]

        #[test]
        fn schur_s_is_exact(seed in 0u64..500, verts in 1usize..15) {
            let alg = nine();
            let chosen: Vec<usize> = (0..4).filter(|v| verts >> v & 1 == 1).collect();
            let e = Idempotent::new(alg.clone(), &chosen).unwrap();
            let m = random_module(&alg, seed);
            let p = m.projective_cover();
            let k = p.epi.kernel();
            prop_assert_eq!(
                schur_s(&e, &p.projective).dim(),
                schur_s(&e, &k.module).dim() + schur_s(&e, &m).dim()
            );
        }
    }
}
