//! Minimal projective resolutions, Ext and Tor, homological dimensions, and
//! bounded cochain complexes.
//!
//! Infinite dimensions are only ever reported with a periodicity
//! certificate: an explicit isomorphism `Ω^i(M) ≅ Ω^j(M)` between nonzero
//! syzygies of a minimal resolution. Running out of the step bound yields
//! [`DimValue::Unknown`].

mod complex;

use std::sync::Arc;

use serde::Serialize;

use crate::modcat::{hom_space, is_isomorphic, Bimodule, Cover, IsoVerdict, Module, Morphism, Sub};
use crate::quivalg::Algebra;

pub use complex::{cone, cone_with_wrong_sign, in_fgp, resolve_complex, ChainComplex, ChainMap, FgpVerdict, ResolvedComplex};

pub const DEFAULT_BOUND: usize = 20;

/// Search limits shared by every bounded procedure.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Settings {
    /// Maximal number of syzygy steps.
    pub bound: usize,
    /// Random samples per isomorphism search.
    pub samples: usize,
    pub seed: u64,
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            bound: DEFAULT_BOUND,
            samples: crate::modcat::DEFAULT_SAMPLES,
            seed: 0,
        }
    }
}

impl Settings {
    pub fn with_bound(bound: usize) -> Self {
        Settings {
            bound,
            ..Settings::default()
        }
    }
}

/// Witnessed isomorphism `Ω^i(M) ≅ Ω^j(M)`, `i < j`.
#[derive(Clone, Debug)]
pub struct PeriodicityCertificate {
    pub i: usize,
    pub j: usize,
    pub witness: Morphism,
}

impl PeriodicityCertificate {
    pub fn period(&self) -> usize {
        self.j - self.i
    }

    /// Re-checks the witness against the given syzygies.
    pub fn verify(&self, syzygies: &[Module]) -> bool {
        self.i < self.j
            && self.j < syzygies.len()
            && self.witness.source().dims() == syzygies[self.i].dims()
            && self.witness.target().dims() == syzygies[self.j].dims()
            && self.witness.source().actions() == syzygies[self.i].actions()
            && self.witness.target().actions() == syzygies[self.j].actions()
            && !syzygies[self.i].is_zero()
            && self.witness.validate().is_ok()
            && self.witness.is_iso()
    }
}

#[derive(Clone, Debug)]
pub enum Outcome {
    /// `Ω^{pd+1} = 0`.
    Finite { pd: usize },
    Periodic(PeriodicityCertificate),
    /// Neither happened within `bound` steps.
    Truncated { bound: usize },
}

/// A minimal projective resolution `… → P_1 → P_0 → M → 0`.
///
/// `syzygies[s] = Ω^s(M)`, `covers[s] : P_s → Ω^s`, and
/// `inclusions[s] : Ω^{s+1} → P_s` is the kernel of `covers[s]`.
#[derive(Clone, Debug)]
pub struct Resolution {
    pub target: Module,
    pub syzygies: Vec<Module>,
    pub covers: Vec<Cover>,
    pub inclusions: Vec<Sub>,
    pub outcome: Outcome,
    pub bound: usize,
}

impl Resolution {
    pub fn projective(&self, s: usize) -> &Module {
        &self.covers[s].projective
    }

    /// `d_s = ι_{s-1} ∘ ε_s : P_s → P_{s-1}` for `s ≥ 1`.
    pub fn differential(&self, s: usize) -> Morphism {
        self.inclusions[s - 1].inclusion.compose(&self.covers[s].epi)
    }

    pub fn periodicity(&self) -> Option<&PeriodicityCertificate> {
        match &self.outcome {
            Outcome::Periodic(c) => Some(c),
            _ => None,
        }
    }

    /// Maps an index `t ≥ 1` of a shifted invariant onto the computed range
    /// using the periodicity `Ω^{t} ≅ Ω^{t-d}` for `t > j`. Returns `None`
    /// past a truncated resolution; `Some(None)` when `Ω^t = 0`.
    fn reduce_index(&self, t: usize) -> Option<Option<usize>> {
        match &self.outcome {
            Outcome::Finite { pd } => Some((t <= *pd + 1).then_some(t)),
            Outcome::Periodic(c) => {
                let mut t = t;
                while t > c.j {
                    t -= c.period();
                }
                Some(Some(t))
            }
            Outcome::Truncated { bound } => (t <= *bound).then_some(Some(t)),
        }
    }

    /// Syzygy `Ω^t` for any `t`, using periodicity; `None` when unknown.
    pub fn syzygy(&self, t: usize) -> Option<Module> {
        match self.reduce_index(t)? {
            Some(s) if s < self.syzygies.len() => Some(self.syzygies[s].clone()),
            _ => Some(Module::zero(self.target.algebra_arc().clone())),
        }
    }

    /// Minimality: every differential lands in the radical.
    pub fn is_minimal(&self) -> bool {
        (0..self.inclusions.len()).all(|s| {
            let rad = self.projective(s).radical_of();
            let inc = &self.inclusions[s].inclusion;
            inc.restrict(
                &Sub {
                    module: inc.source().clone(),
                    inclusion: Morphism::identity(inc.source().clone()),
                },
                &rad,
            )
            .is_some()
        })
    }

    /// Exactness of every computed step.
    pub fn is_exact(&self) -> bool {
        self.covers.iter().enumerate().all(|(s, c)| {
            c.epi.is_surjective()
                && self.inclusions[s].inclusion.is_injective()
                && c.epi.compose(&self.inclusions[s].inclusion).is_zero()
                && self.inclusions[s].module.dim() + self.syzygies[s].dim() == c.projective.dim()
        })
    }
}

/// Minimal projective resolution of `m`, stopping at a zero syzygy, a
/// periodicity, or after `settings.bound` steps.
pub fn min_resolution(m: &Module, settings: &Settings) -> Resolution {
    let mut syzygies = vec![m.clone()];
    let mut covers = Vec::new();
    let mut inclusions: Vec<Sub> = Vec::new();
    let outcome = loop {
        let s = syzygies.len() - 1;
        let current = syzygies[s].clone();
        if current.is_zero() {
            break Outcome::Finite { pd: s.saturating_sub(1) };
        }
        if let Some(cert) = find_period(&syzygies, settings) {
            break Outcome::Periodic(cert);
        }
        if s == settings.bound {
            break Outcome::Truncated {
                bound: settings.bound,
            };
        }
        let cover = current.projective_cover();
        let kernel = cover.epi.kernel();
        syzygies.push(kernel.module.clone());
        covers.push(cover);
        inclusions.push(kernel);
    };
    Resolution {
        target: m.clone(),
        syzygies,
        covers,
        inclusions,
        outcome,
        bound: settings.bound,
    }
}

fn find_period(syzygies: &[Module], settings: &Settings) -> Option<PeriodicityCertificate> {
    let j = syzygies.len() - 1;
    let last = &syzygies[j];
    for (i, earlier) in syzygies[..j].iter().enumerate() {
        if earlier.dims() != last.dims() {
            continue;
        }
        let seed = settings.seed ^ ((i as u64) << 32 | j as u64);
        if let Ok(IsoVerdict::Yes(witness)) = is_isomorphic(earlier, last, settings.samples, seed) {
            return Some(PeriodicityCertificate { i, j, witness });
        }
    }
    None
}

/// A homological dimension with its evidence.
#[derive(Clone, Debug)]
pub enum DimValue {
    Finite(usize),
    Infinite(PeriodicityCertificate),
    Unknown { bound: usize },
}

impl DimValue {
    pub fn is_finite(&self) -> bool {
        matches!(self, DimValue::Finite(_))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, DimValue::Infinite(_))
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self, DimValue::Unknown { .. })
    }

    pub fn finite(&self) -> Option<usize> {
        match self {
            DimValue::Finite(n) => Some(*n),
            _ => None,
        }
    }

    /// Verdict string: `finite:n`, `infinite` or `unknown`.
    pub fn verdict(&self) -> String {
        match self {
            DimValue::Finite(n) => format!("finite:{n}"),
            DimValue::Infinite(_) => "infinite".into(),
            DimValue::Unknown { .. } => "unknown".into(),
        }
    }

    /// Maximum in the order `finite < unknown < infinite`, as used for
    /// suprema over a family: any certified infinite value wins, otherwise
    /// any unknown makes the supremum unknown.
    pub fn sup(self, other: DimValue) -> DimValue {
        match (self, other) {
            (DimValue::Infinite(c), _) | (_, DimValue::Infinite(c)) => DimValue::Infinite(c),
            (DimValue::Unknown { bound }, _) | (_, DimValue::Unknown { bound }) => {
                DimValue::Unknown { bound }
            }
            (DimValue::Finite(a), DimValue::Finite(b)) => DimValue::Finite(a.max(b)),
        }
    }
}

pub fn pd_of(res: &Resolution) -> DimValue {
    match &res.outcome {
        Outcome::Finite { pd } => DimValue::Finite(*pd),
        Outcome::Periodic(c) => DimValue::Infinite(c.clone()),
        Outcome::Truncated { bound } => DimValue::Unknown { bound: *bound },
    }
}

pub fn pd(m: &Module, settings: &Settings) -> DimValue {
    pd_of(&min_resolution(m, settings))
}

/// `dim Ext^t(M, N)` from a resolution of `M`; `None` when `t` lies beyond a
/// truncated resolution.
pub fn ext_from(res: &Resolution, n: &Module, t: usize) -> Option<usize> {
    if t == 0 {
        return Some(hom_space(&res.target, n).expect("same algebra").len());
    }
    let Some(s) = res.reduce_index(t)? else {
        return Some(0);
    };
    if s >= res.syzygies.len() || res.syzygies[s].is_zero() {
        return Some(0);
    }
    // Ext^s(M, N) = coker(Hom(P_{s-1}, N) → Hom(Ω^s, N))
    let iota = &res.inclusions[s - 1].inclusion;
    let hom_omega = hom_space(&res.syzygies[s], n).expect("same algebra");
    if hom_omega.is_empty() {
        return Some(0);
    }
    let restricted: Vec<Vec<u32>> = hom_space(res.projective(s - 1), n)
        .expect("same algebra")
        .iter()
        .map(|h| h.compose(iota).flatten())
        .collect();
    let field = n.field();
    let rank = if restricted.is_empty() {
        0
    } else {
        crate::exactfield::Mat::from_columns(field, restricted[0].len(), &restricted).rank()
    };
    Some(hom_omega.len() - rank)
}

pub fn ext(m: &Module, n: &Module, t: usize, settings: &Settings) -> Option<usize> {
    ext_from(&min_resolution(m, settings), n, t)
}

/// `dim Tor_t(M, N)` for a bimodule `M` (the left structure only matters
/// for the module structure of the result) from a resolution of `N`.
pub fn tor_from(m: &Bimodule, res: &Resolution, t: usize) -> Option<usize> {
    if t == 0 {
        return Some(m.tensor(&res.target).expect("same algebra").module.dim());
    }
    let Some(s) = res.reduce_index(t)? else {
        return Some(0);
    };
    if s >= res.syzygies.len() || res.syzygies[s].is_zero() {
        return Some(0);
    }
    // Tor_s(M, N) = ker(M ⊗ Ω^s → M ⊗ P_{s-1})
    let iota = &res.inclusions[s - 1].inclusion;
    let src = m.tensor(iota.source()).expect("same algebra");
    let tgt = m.tensor(iota.target()).expect("same algebra");
    let induced = m.tensor_map(&src, &tgt, iota);
    Some(src.module.dim() - induced.rank())
}

pub fn tor(m: &Bimodule, n: &Module, t: usize, settings: &Settings) -> Option<usize> {
    tor_from(m, &min_resolution(n, settings), t)
}

/// Injective dimension of `m`, computed as the projective dimension of its
/// dual over `opposite`.
pub fn injective_dim(m: &Module, opposite: &Arc<Algebra>, settings: &Settings) -> DimValue {
    pd(&m.dual(opposite.clone()).expect("opposite algebra"), settings)
}

/// Supremum of the projective dimensions of the simples.
pub fn global_dim(alg: &Arc<Algebra>, settings: &Settings) -> DimValue {
    Module::simples(alg)
        .iter()
        .map(|s| pd(s, settings))
        .fold(DimValue::Finite(0), DimValue::sup)
}

#[derive(Clone, Debug)]
pub enum GorensteinVerdict {
    /// Both self-injective dimensions are finite.
    Yes { left: usize, right: usize },
    /// One side certified infinite.
    No { side: Side, certificate: PeriodicityCertificate },
    Unknown { left: DimValue, right: DimValue },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Left,
    Right,
}

impl GorensteinVerdict {
    pub fn verdict(&self) -> &'static str {
        match self {
            GorensteinVerdict::Yes { .. } => "yes",
            GorensteinVerdict::No { .. } => "no",
            GorensteinVerdict::Unknown { .. } => "unknown",
        }
    }

    pub fn is_yes(&self) -> bool {
        matches!(self, GorensteinVerdict::Yes { .. })
    }
}

/// Self-injective dimensions of both regular modules: the left one is
/// `id(_R R) = pd(D(R))` over `R^op`, the right one is `id(R_R)` computed as
/// the projective dimension over `R` of the dual of the regular `R^op`-module.
pub fn self_injective_dims(
    alg: &Arc<Algebra>,
    opposite: &Arc<Algebra>,
    settings: &Settings,
) -> (DimValue, DimValue) {
    let left = injective_dim(&Module::regular(alg.clone()), opposite, settings);
    let right = injective_dim(&Module::regular(opposite.clone()), alg, settings);
    (left, right)
}

pub fn gorenstein_check(alg: &Arc<Algebra>, opposite: &Arc<Algebra>, settings: &Settings) -> GorensteinVerdict {
    let (left, right) = self_injective_dims(alg, opposite, settings);
    match (left, right) {
        (DimValue::Finite(l), DimValue::Finite(r)) => GorensteinVerdict::Yes { left: l, right: r },
        (DimValue::Infinite(c), _) => GorensteinVerdict::No {
            side: Side::Left,
            certificate: c,
        },
        (_, DimValue::Infinite(c)) => GorensteinVerdict::No {
            side: Side::Right,
            certificate: c,
        },
        (left, right) => GorensteinVerdict::Unknown { left, right },
    }
}

/// Whether the algebra is self-injective (the regular module is injective).
pub fn is_self_injective(alg: &Arc<Algebra>, opposite: &Arc<Algebra>) -> bool {
    Module::regular(alg.clone())
        .dual(opposite.clone())
        .expect("opposite algebra")
        .is_projective()
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::exactfield::Field;
    use crate::quivalg::{build_algebra, Quiver, Relation};

    pub(crate) fn algebra(vertices: &[&str], arrows: &[(&str, &str, &str)], rels: &[&str]) -> Arc<Algebra> {
        let mut q = Quiver::new(vertices.iter().copied()).unwrap();
        for (a, s, t) in arrows {
            q.add_arrow(*a, s, t).unwrap();
        }
        let rels: Vec<Relation> = rels
            .iter()
            .map(|r| Relation::monomial(&q, q.parse_path(r).unwrap()).unwrap())
            .collect();
        Arc::new(build_algebra(Field::default(), &q, &rels, 12).unwrap().into_algebra())
    }

    pub(crate) fn a2() -> Arc<Algebra> {
        algebra(&["1", "2"], &[("a", "1", "2")], &[])
    }

    pub(crate) fn dual_numbers() -> Arc<Algebra> {
        algebra(&["1"], &[("x", "1", "1")], &["x*x"])
    }

    /// The algebra on vertices 3, 4, 5 with β: 3→4, β': 4→3, θ: 4→5 and
    /// relations β'β, ββ', θβ.
    pub(crate) fn b_three() -> Arc<Algebra> {
        algebra(
            &["3", "4", "5"],
            &[("b", "3", "4"), ("b'", "4", "3"), ("t", "4", "5")],
            &["b'*b", "b*b'", "t*b"],
        )
    }

    #[test]
    fn projectives_have_pd_zero() {
        let alg = a2();
        let res = min_resolution(&Module::projective(alg, 0), &Settings::default());
        assert!(matches!(res.outcome, Outcome::Finite { pd: 0 }));
        assert_eq!(res.syzygies.len(), 2);
        assert!(res.syzygies[1].is_zero());
    }

    #[test]
    fn simple_over_a2() {
        let alg = a2();
        let s1 = Module::simple(alg.clone(), 0);
        let res = min_resolution(&s1, &Settings::default());
        assert!(matches!(res.outcome, Outcome::Finite { pd: 1 }));
        assert_eq!(res.syzygies[1].dims(), &[0, 1]);
        assert!(res.is_exact() && res.is_minimal());
        assert_eq!(global_dim(&alg, &Settings::default()).finite(), Some(1));
        let s2 = Module::simple(alg, 1);
        assert_eq!(ext(&s1, &s2, 1, &Settings::default()), Some(1));
        assert_eq!(ext(&s1, &s1, 1, &Settings::default()), Some(0));
        assert_eq!(ext(&s2, &s1, 1, &Settings::default()), Some(0));
    }

    #[test]
    fn dual_numbers_simple_is_periodic() {
        let alg = dual_numbers();
        let s = Module::simple(alg.clone(), 0);
        let res = min_resolution(&s, &Settings::default());
        let cert = res.periodicity().expect("periodic");
        assert_eq!((cert.i, cert.j), (0, 1));
        assert!(cert.verify(&res.syzygies));
        assert!(pd(&s, &Settings::default()).is_infinite());
        for t in 1..6 {
            assert_eq!(ext(&s, &s, t, &Settings::default()), Some(1));
        }
        let op = Arc::new(alg.opposite());
        let s_op = Module::simple(op, 0);
        let right = Bimodule::from_right_module(alg.clone(), &s_op).unwrap();
        for t in 1..6 {
            assert_eq!(tor(&right, &s, t, &Settings::default()), Some(1));
        }
    }

    #[test]
    fn tor_against_projectives_vanishes() {
        let alg = b_three();
        let op = Arc::new(alg.opposite());
        for v in 0..3 {
            let p = Module::projective(alg.clone(), v);
            for w in 0..3 {
                let right = Bimodule::from_right_module(alg.clone(), &Module::simple(op.clone(), w)).unwrap();
                for t in 1..4 {
                    assert_eq!(tor(&right, &p, t, &Settings::default()), Some(0));
                }
            }
        }
    }

    #[test]
    fn self_injective_and_gorenstein() {
        let alg = dual_numbers();
        let op = Arc::new(alg.opposite());
        assert!(is_self_injective(&alg, &op));
        assert_eq!(injective_dim(&Module::regular(alg.clone()), &op, &Settings::default()).finite(), Some(0));
        assert!(gorenstein_check(&alg, &op, &Settings::default()).is_yes());
        let a = a2();
        let aop = Arc::new(a.opposite());
        assert!(!is_self_injective(&a, &aop));
        assert!(matches!(
            gorenstein_check(&a, &aop, &Settings::default()),
            GorensteinVerdict::Yes { left: 1, right: 1 }
        ));
    }

    #[test]
    fn radical_square_zero_cycle() {
        // Ω S3 = S4, Ω S4 = S3 ⊕ S5, so Ω² S3 ≠ Ω⁰ S3 but the pair (1, 3) repeats
        let alg = b_three();
        let s3 = Module::simple(alg.clone(), 0);
        let res = min_resolution(&s3, &Settings::default());
        assert_eq!(res.syzygies[1].dims(), &[0, 1, 0]);
        assert_eq!(res.syzygies[2].dims(), &[1, 0, 1]);
        let cert = res.periodicity().unwrap();
        assert_eq!((cert.i, cert.j), (1, 3));
        // Hom(Ω², B) has dimension 3 while Hom(P_1, B) has dimension 2
        let b = Module::regular(alg.clone());
        assert_eq!(ext(&s3, &b, 1, &Settings::default()), Some(0));
        assert!(ext(&s3, &b, 2, &Settings::default()).unwrap() > 0);
        assert!(global_dim(&alg, &Settings::default()).is_infinite());
    }

    #[test]
    fn zero_module_has_pd_zero() {
        let alg = a2();
        assert_eq!(pd(&Module::zero(alg), &Settings::default()).finite(), Some(0));
    }
}
