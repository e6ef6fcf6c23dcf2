//! Bounded cochain complexes `X^n → X^{n+1}`, chain maps, cones, homology,
//! and projective replacements.

use std::sync::Arc;

use thiserror::Error;

use super::{DimValue, PeriodicityCertificate, Settings};
use crate::exactfield::{Mat, Scalar};
use crate::modcat::{Module, Morphism, Sub};
use crate::quivalg::Algebra;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ComplexError {
    #[error("differential {0} has the wrong source or target")]
    Shape(i64),
    #[error("d∘d ≠ 0 at degree {0}")]
    NotComplex(i64),
    #[error("not a chain map: square at degree {0} does not commute")]
    NotChainMap(i64),
    #[error("algebra mismatch")]
    AlgebraMismatch,
}

fn same_module(a: &Module, b: &Module) -> bool {
    a.dims() == b.dims() && a.actions() == b.actions()
}

/// A bounded cochain complex with terms in degrees `start ..= start + len - 1`.
#[derive(Clone, Debug)]
pub struct ChainComplex {
    alg: Arc<Algebra>,
    start: i64,
    terms: Vec<Module>,
    diffs: Vec<Morphism>,
}

impl ChainComplex {
    /// `diffs[k] : terms[k] → terms[k+1]`.
    pub fn new(
        alg: Arc<Algebra>,
        start: i64,
        terms: Vec<Module>,
        diffs: Vec<Morphism>,
    ) -> Result<Self, ComplexError> {
        if diffs.len() + 1 != terms.len().max(1) {
            return Err(ComplexError::Shape(start));
        }
        for t in &terms {
            if !Module::zero(alg.clone()).same_algebra(t) {
                return Err(ComplexError::AlgebraMismatch);
            }
        }
        for (k, d) in diffs.iter().enumerate() {
            if !same_module(d.source(), &terms[k]) || !same_module(d.target(), &terms[k + 1]) {
                return Err(ComplexError::Shape(start + k as i64));
            }
        }
        for (k, pair) in diffs.windows(2).enumerate() {
            if !pair[1].compose(&pair[0]).is_zero() {
                return Err(ComplexError::NotComplex(start + k as i64));
            }
        }
        Ok(ChainComplex {
            alg,
            start,
            terms,
            diffs,
        })
    }

    /// Re-runs the checks of [`ChainComplex::new`] on a complex assembled
    /// elsewhere.
    pub fn revalidate(&self) -> Result<(), ComplexError> {
        ChainComplex::new(self.alg.clone(), self.start, self.terms.clone(), self.diffs.clone()).map(|_| ())
    }

    pub fn stalk(m: &Module, degree: i64) -> ChainComplex {
        ChainComplex {
            alg: m.algebra_arc().clone(),
            start: degree,
            terms: vec![m.clone()],
            diffs: Vec::new(),
        }
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.alg
    }

    pub fn start(&self) -> i64 {
        self.start
    }

    /// Last degree with a stored term.
    pub fn end(&self) -> i64 {
        self.start + self.terms.len() as i64 - 1
    }

    pub fn term(&self, n: i64) -> Module {
        if n < self.start || n > self.end() {
            Module::zero(self.alg.clone())
        } else {
            self.terms[(n - self.start) as usize].clone()
        }
    }

    /// `d^n : X^n → X^{n+1}`.
    pub fn diff(&self, n: i64) -> Morphism {
        if n >= self.start && n < self.end() {
            self.diffs[(n - self.start) as usize].clone()
        } else {
            Morphism::zero(self.term(n), self.term(n + 1))
        }
    }

    /// Number of nonzero terms.
    pub fn length(&self) -> usize {
        self.terms.iter().filter(|t| !t.is_zero()).count()
    }

    pub fn cycles(&self, n: i64) -> Sub {
        self.diff(n).kernel()
    }

    /// `H^n = Z^n / B^n` with the deterministic quotient basis.
    pub fn homology(&self, n: i64) -> Module {
        let z = self.cycles(n);
        let incoming = self.diff(n - 1);
        let blocks: Vec<Mat> = z
            .inclusion
            .blocks()
            .iter()
            .zip(incoming.blocks())
            .map(|(inc, d)| {
                if inc.cols() == 0 {
                    Mat::zeros(d.field(), 0, d.cols())
                } else {
                    inc.solve_matrix(d).expect("boundaries are cycles")
                }
            })
            .collect();
        z.module.quotient(&blocks).module
    }

    pub fn homology_dim(&self, n: i64) -> usize {
        self.diff(n).kernel().module.dim() - self.diff(n - 1).rank()
    }

    pub fn is_exact(&self) -> bool {
        (self.start..=self.end()).all(|n| self.homology_dim(n) == 0)
    }

    /// Lowest degree with nonzero homology.
    pub fn lowest_homology(&self) -> Option<i64> {
        (self.start..=self.end()).find(|&n| self.homology_dim(n) != 0)
    }

    /// Brutal truncation keeping degrees `≥ n`.
    pub fn truncate_geq(&self, n: i64) -> ChainComplex {
        if n <= self.start {
            return self.clone();
        }
        if n > self.end() {
            return ChainComplex {
                alg: self.alg.clone(),
                start: n,
                terms: Vec::new(),
                diffs: Vec::new(),
            };
        }
        let k = (n - self.start) as usize;
        ChainComplex {
            alg: self.alg.clone(),
            start: n,
            terms: self.terms[k..].to_vec(),
            diffs: self.diffs[k..].to_vec(),
        }
    }

    /// `X[s]`: the term in degree `n` is `X^{n+s}`, differentials negated
    /// when `s` is odd.
    pub fn shift(&self, s: i64) -> ChainComplex {
        let diffs = if s % 2 == 0 {
            self.diffs.clone()
        } else {
            self.diffs.iter().map(Morphism::neg).collect()
        };
        ChainComplex {
            alg: self.alg.clone(),
            start: self.start - s,
            terms: self.terms.clone(),
            diffs,
        }
    }

    pub fn terms(&self) -> &[Module] {
        &self.terms
    }
}

/// A family of morphisms `f^n : X^n → Y^n` commuting with the differentials.
#[derive(Clone, Debug)]
pub struct ChainMap {
    source: ChainComplex,
    target: ChainComplex,
    start: i64,
    maps: Vec<Morphism>,
}

impl ChainMap {
    /// `maps[k]` is the component in degree `start + k`; degrees outside are
    /// zero.
    pub fn new(
        source: ChainComplex,
        target: ChainComplex,
        start: i64,
        maps: Vec<Morphism>,
    ) -> Result<Self, ComplexError> {
        let f = ChainMap {
            source,
            target,
            start,
            maps,
        };
        for n in f.degrees() {
            let m = f.map(n);
            if !same_module(m.source(), &f.source.term(n)) || !same_module(m.target(), &f.target.term(n)) {
                return Err(ComplexError::Shape(n));
            }
        }
        for n in f.degrees() {
            let lhs = f.map(n + 1).compose(&f.source.diff(n));
            let rhs = f.target.diff(n).compose(&f.map(n));
            if lhs.flatten() != rhs.flatten() {
                return Err(ComplexError::NotChainMap(n));
            }
        }
        Ok(f)
    }

    pub fn identity(x: &ChainComplex) -> ChainMap {
        ChainMap {
            source: x.clone(),
            target: x.clone(),
            start: x.start,
            maps: x.terms.iter().map(|t| Morphism::identity(t.clone())).collect(),
        }
    }

    pub fn zero(source: &ChainComplex, target: &ChainComplex) -> ChainMap {
        ChainMap {
            source: source.clone(),
            target: target.clone(),
            start: source.start,
            maps: Vec::new(),
        }
    }

    fn degrees(&self) -> std::ops::RangeInclusive<i64> {
        let lo = self.source.start.min(self.target.start) - 1;
        let hi = self.source.end().max(self.target.end()) + 1;
        lo..=hi
    }

    pub fn source(&self) -> &ChainComplex {
        &self.source
    }

    pub fn target(&self) -> &ChainComplex {
        &self.target
    }

    pub fn map(&self, n: i64) -> Morphism {
        let k = n - self.start;
        if k >= 0 && (k as usize) < self.maps.len() {
            self.maps[k as usize].clone()
        } else {
            Morphism::zero(self.source.term(n), self.target.term(n))
        }
    }
}

/// Mapping cone: `Cone^n = X^{n+1} ⊕ Y^n` with
/// `d = [[-d_X, 0], [f, d_Y]]`.
pub fn cone(f: &ChainMap) -> ChainComplex {
    cone_signed(f, true)
}

/// The cone with `+d_X` in place of `-d_X`. Not a complex in general; kept
/// as a negative control for the self-test.
#[doc(hidden)]
pub fn cone_with_wrong_sign(f: &ChainMap) -> ChainComplex {
    cone_signed(f, false)
}

fn cone_signed(f: &ChainMap, negate: bool) -> ChainComplex {
    let (x, y) = (&f.source, &f.target);
    let lo = (x.start - 1).min(y.start);
    let hi = (x.end() - 1).max(y.end());
    let sums: Vec<_> = (lo..=hi + 1)
        .map(|n| Module::direct_sum(&[x.term(n + 1), y.term(n)]).expect("same algebra"))
        .collect();
    let diffs = (lo..hi)
        .map(|n| {
            let k = (n - lo) as usize;
            let (here, next) = (&sums[k], &sums[k + 1]);
            let (px, py) = (&here.projections[0], &here.projections[1]);
            let (ix, iy) = (&next.injections[0], &next.injections[1]);
            let dx = if negate { x.diff(n + 1).neg() } else { x.diff(n + 1) };
            ix.compose(&dx.compose(px))
                .add(&iy.compose(&f.map(n + 1).compose(px)))
                .add(&iy.compose(&y.diff(n).compose(py)))
        })
        .collect();
    ChainComplex {
        alg: x.alg.clone(),
        start: lo,
        terms: sums[..sums.len() - 1].iter().map(|s| s.module.clone()).collect(),
        diffs,
    }
}

/// A projective complex `P` with a quasi-isomorphism `P → X`.
#[derive(Clone, Debug)]
pub struct ResolvedComplex {
    pub complex: ChainComplex,
    pub map: ChainMap,
    /// True when `P` is known to vanish below its lowest stored degree.
    /// Otherwise the lowest stored degree carries spurious homology.
    pub complete: bool,
}

/// Projective replacement of a bounded complex, built from the top degree
/// down by projective covers, continuing `settings.bound` degrees below the
/// lowest term of `X` (or until it stops).
pub fn resolve_complex(x: &ChainComplex, settings: &Settings) -> ResolvedComplex {
    resolve_down_to(x, x.start - settings.bound as i64)
}

fn resolve_down_to(x: &ChainComplex, floor: i64) -> ResolvedComplex {
    if x.terms.iter().all(Module::is_projective) {
        return ResolvedComplex {
            complex: x.clone(),
            map: ChainMap::identity(x),
            complete: true,
        };
    }
    let alg = x.alg.clone();
    let top = x.end();
    // built top-down; index 0 holds degree `top + 2`
    let zero = Module::zero(alg.clone());
    let mut p_terms: Vec<Module> = vec![zero.clone(), zero.clone()];
    let mut p_diffs: Vec<Morphism> = vec![Morphism::zero(zero.clone(), zero.clone())];
    let mut q_maps: Vec<Morphism> = vec![Morphism::zero(zero.clone(), x.term(top + 1))];
    let mut complete = false;
    let mut n = top;
    loop {
        let p1 = p_terms[p_terms.len() - 1].clone(); // P^{n+1}
        let p2 = p_terms[p_terms.len() - 2].clone(); // P^{n+2}
        let d1 = p_diffs[p_diffs.len() - 1].clone(); // d_P^{n+1}
        let q1 = q_maps[q_maps.len() - 1].clone(); // q^{n+1}
        let here = Module::direct_sum(&[p1.clone(), x.term(n)]).expect("same algebra");
        let next = Module::direct_sum(&[p2.clone(), x.term(n + 1)]).expect("same algebra");
        let (pp, px) = (&here.projections[0], &here.projections[1]);
        let (jp, jx) = (&next.injections[0], &next.injections[1]);
        let d_cone = jp
            .compose(&d1.neg().compose(pp))
            .add(&jx.compose(&q1.compose(pp)))
            .add(&jx.compose(&x.diff(n).compose(px)));
        let z = d_cone.kernel();
        let incoming = here.injections[1].compose(&x.diff(n - 1));
        let boundary: Vec<Mat> = z
            .inclusion
            .blocks()
            .iter()
            .zip(incoming.blocks())
            .map(|(inc, g)| {
                if inc.cols() == 0 {
                    Mat::zeros(g.field(), 0, g.cols())
                } else {
                    inc.solve_matrix(g).expect("boundaries lie in the cycles")
                }
            })
            .collect();
        let quot = z.module.quotient(&boundary);
        let cover = quot.module.projective_cover();
        let gens: Vec<Vec<Scalar>> = cover
            .summands
            .iter()
            .zip(&cover.generators)
            .map(|(&v, g)| {
                let in_z = quot.section[v].mul_vec(g);
                z.inclusion.block(v).mul_vec(&in_z)
            })
            .collect();
        let phi = here.module.map_from_free(&cover.projective, &cover.summands, &gens);
        let d_here = pp.compose(&phi).neg();
        let q_here = px.compose(&phi);
        p_terms.push(cover.projective.clone());
        p_diffs.push(d_here);
        q_maps.push(q_here);
        if n < x.start && cover.projective.is_zero() {
            complete = true;
            break;
        }
        if n <= floor {
            break;
        }
        n -= 1;
    }
    // reverse into increasing degree; drop the two zero padding terms above top
    let low = n;
    let mut terms: Vec<Module> = p_terms[2..].to_vec();
    terms.reverse();
    let mut diffs: Vec<Morphism> = p_diffs[2..].to_vec();
    diffs.reverse();
    let mut maps: Vec<Morphism> = q_maps[1..].to_vec();
    maps.reverse();
    let complex = ChainComplex {
        alg,
        start: low,
        terms,
        diffs,
    };
    let map = ChainMap {
        source: complex.clone(),
        target: x.clone(),
        start: low,
        maps,
    };
    debug_assert!(ChainMap::new(complex.clone(), x.clone(), low, map.maps.clone()).is_ok());
    ResolvedComplex {
        complex,
        map,
        complete,
    }
}

/// Membership of a bounded complex in the subcategory of complexes of
/// finite Gorenstein projective dimension.
#[derive(Clone, Debug)]
pub enum FgpVerdict {
    /// The complex is exact.
    Exact,
    /// `Z^t` of the projective replacement has finite Gorenstein projective
    /// dimension `gpd`.
    Yes { threshold: i64, gpd: usize },
    No {
        threshold: i64,
        certificate: PeriodicityCertificate,
    },
    Unknown { threshold: i64, bound: usize },
}

impl FgpVerdict {
    pub fn verdict(&self) -> &'static str {
        match self {
            FgpVerdict::Exact | FgpVerdict::Yes { .. } => "yes",
            FgpVerdict::No { .. } => "no",
            FgpVerdict::Unknown { .. } => "unknown",
        }
    }

    pub fn is_yes(&self) -> bool {
        matches!(self, FgpVerdict::Exact | FgpVerdict::Yes { .. })
    }

    pub fn is_no(&self) -> bool {
        matches!(self, FgpVerdict::No { .. })
    }
}

/// Decides whether `x` lies in the fgp subcategory: with `t` one below the
/// lowest nonzero homology degree, `x` belongs iff the cycle module `Z^t`
/// of its projective replacement has finite Gorenstein projective
/// dimension.
pub fn in_fgp(x: &ChainComplex, settings: &Settings) -> FgpVerdict {
    let Some(h) = x.lowest_homology() else {
        return FgpVerdict::Exact;
    };
    let t = h - 1;
    let resolved = resolve_down_to(x, t);
    let cycles = resolved.complex.cycles(t).module;
    match crate::gproj::gpd(&cycles, settings) {
        DimValue::Finite(g) => FgpVerdict::Yes {
            threshold: t,
            gpd: g,
        },
        DimValue::Infinite(c) => FgpVerdict::No {
            threshold: t,
            certificate: c,
        },
        DimValue::Unknown { bound } => FgpVerdict::Unknown {
            threshold: t,
            bound,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::super::tests::{a2, b_three, dual_numbers};
    use super::*;
    use crate::homalg::min_resolution;

    fn two_term(m: &Morphism) -> ChainComplex {
        ChainComplex::new(
            m.source().algebra_arc().clone(),
            0,
            vec![m.source().clone(), m.target().clone()],
            vec![m.clone()],
        )
        .unwrap()
    }

    #[test]
    fn cone_of_identity_is_exact() {
        let alg = a2();
        let p1 = Module::projective(alg.clone(), 0);
        let x = two_term(&p1.top().projection);
        let c = cone(&ChainMap::identity(&x));
        assert!(c.is_exact());
        assert!(!x.is_exact());
    }

    #[test]
    fn cone_of_zero_map_is_shift() {
        let alg = a2();
        let p1 = Module::projective(alg.clone(), 0);
        let x = two_term(&p1.top().projection);
        let zero = ChainComplex::stalk(&Module::zero(alg), 0);
        let c = cone(&ChainMap::zero(&x, &zero));
        let shifted = x.shift(1);
        for n in -2..3 {
            assert_eq!(c.term(n).dims(), shifted.term(n).dims());
            assert_eq!(c.homology_dim(n), shifted.homology_dim(n));
        }
    }

    #[test]
    fn truncation_and_length() {
        let alg = a2();
        let p1 = Module::projective(alg.clone(), 0);
        let x = two_term(&p1.top().projection);
        assert_eq!(x.length(), 2);
        assert_eq!(x.truncate_geq(-5).length(), 2);
        assert_eq!(x.truncate_geq(1).length(), 1);
        assert_eq!(x.truncate_geq(1).term(0).dim(), 0);
    }

    #[test]
    fn stalk_resolution_matches_minimal_resolution() {
        let alg = a2();
        let s1 = Module::simple(alg.clone(), 0);
        let r = resolve_complex(&ChainComplex::stalk(&s1, 0), &Settings::default());
        assert!(r.complete);
        let res = min_resolution(&s1, &Settings::default());
        assert_eq!(r.complex.term(0).dims(), res.projective(0).dims());
        assert_eq!(r.complex.term(-1).dims(), res.projective(1).dims());
        assert!(r.complex.term(-2).is_zero());
        assert_eq!(r.complex.homology_dim(0), 1);
        assert!(cone(&r.map).is_exact());
    }

    #[test]
    fn periodic_stalk_resolution() {
        let alg = dual_numbers();
        let s = Module::simple(alg, 0);
        let r = resolve_complex(&ChainComplex::stalk(&s, 0), &Settings::with_bound(5));
        assert!(!r.complete);
        for n in -5..0 {
            assert_eq!(r.complex.term(n).dim(), 2);
        }
        // the lowest stored degree is cut off, so only degrees above it are exact
        for n in -4..0 {
            assert_eq!(r.complex.homology_dim(n), 0);
        }
        assert_eq!(r.complex.homology_dim(0), 1);
    }

    #[test]
    fn quasi_isomorphism_cone_is_acyclic() {
        // P(2) → P(1) with cokernel S(1), mapped onto the stalk S(1)
        let alg = a2();
        let s1 = Module::simple(alg.clone(), 0);
        let x = ChainComplex::stalk(&s1, 0);
        let r = resolve_complex(&x, &Settings::default());
        let c = cone(&r.map);
        assert!(c.is_exact());
        let ok = ChainMap::new(r.map.source().clone(), x.clone(), r.map.source().start(), (r.map.source().start()..=0).map(|n| r.map.map(n)).collect());
        assert!(ok.is_ok());
    }

    #[test]
    fn fgp_membership_of_stalks() {
        let alg = a2();
        for s in Module::simples(&alg) {
            assert!(in_fgp(&ChainComplex::stalk(&s, 0), &Settings::default()).is_yes());
        }
        let d = dual_numbers();
        assert!(in_fgp(&ChainComplex::stalk(&Module::simple(d, 0), 0), &Settings::default()).is_yes());
        let b = b_three();
        assert!(in_fgp(&ChainComplex::stalk(&Module::simple(b, 0), 0), &Settings::default()).is_no());
    }

    #[test]
    fn non_chain_map_is_rejected() {
        let alg = a2();
        let p1 = Module::projective(alg.clone(), 0);
        let x = two_term(&p1.top().projection);
        let bad = ChainMap::new(x.clone(), x, 0, vec![Morphism::identity(p1)]);
        assert!(matches!(bad, Err(ComplexError::NotChainMap(_))));
    }
}
