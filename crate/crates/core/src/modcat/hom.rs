//! Hom spaces by solving the intertwining equations.

use std::sync::Arc;

use rand::Rng;

use super::{Module, ModuleError, Morphism};
use crate::exactfield::{Mat, Scalar};
use crate::quivalg::Algebra;

/// Basis of `Hom(M, N)`.
///
/// Unknowns are the entries of the per-vertex blocks `F_v`; for every
/// generator `b` of grade `(l, r)` the equations are
/// `F_l · A_M(b) = A_N(b) · F_r`. Idempotent compatibility is automatic.
pub fn hom_space(m: &Module, n: &Module) -> Result<Vec<Morphism>, ModuleError> {
    m.check_same_algebra(n)?;
    let alg = m.algebra();
    let field = m.field();
    let nv = alg.num_vertices();
    let mut var_offset = Vec::with_capacity(nv);
    let mut nvars = 0;
    for v in 0..nv {
        var_offset.push(nvars);
        nvars += n.dims()[v] * m.dims()[v];
    }
    if nvars == 0 {
        return Ok(Vec::new());
    }
    let var = |v: usize, i: usize, k: usize| var_offset[v] + i * m.dims()[v] + k;
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    for &g in alg.generators() {
        let (l, r) = alg.grade(g);
        let am = m.action(g);
        let an = n.action(g);
        for i in 0..n.dims()[l] {
            for j in 0..m.dims()[r] {
                let mut row = vec![0; nvars];
                for k in 0..m.dims()[l] {
                    let c = am.get(k, j);
                    if c != 0 {
                        let x = var(l, i, k);
                        row[x] = field.add(row[x], c);
                    }
                }
                for k in 0..n.dims()[r] {
                    let c = an.get(i, k);
                    if c != 0 {
                        let x = var(r, k, j);
                        row[x] = field.sub(row[x], c);
                    }
                }
                if row.iter().any(|&x| x != 0) {
                    rows.push(row);
                }
            }
        }
    }
    let system = if rows.is_empty() {
        Mat::zeros(field, 0, nvars)
    } else {
        Mat::from_vec(field, rows.len(), nvars, rows.concat())
    };
    Ok(system
        .kernel_basis()
        .into_iter()
        .map(|sol| {
            let blocks = (0..nv)
                .map(|v| {
                    let (rr, cc) = (n.dims()[v], m.dims()[v]);
                    Mat::from_vec(field, rr, cc, sol[var_offset[v]..var_offset[v] + rr * cc].to_vec())
                })
                .collect();
            Morphism::from_parts(m.clone(), n.clone(), blocks)
        })
        .collect())
}

pub fn hom_dim(m: &Module, n: &Module) -> Result<usize, ModuleError> {
    hom_space(m, n).map(|b| b.len())
}

/// A uniformly random element of the span of `basis` (which must be
/// nonempty).
pub fn random_combination<R: Rng>(basis: &[Morphism], rng: &mut R) -> Morphism {
    let field = basis[0].source().field();
    let mut acc = basis[0].scale(rng.gen_range(0..field.p()));
    for f in &basis[1..] {
        acc = acc.add(&f.scale(rng.gen_range(0..field.p())));
    }
    acc
}

/// A random module of dimension at most `max_dim` (and at least 1 when
/// `max_dim ≥ 1`): the cokernel of a random endomorphism of one or two
/// indecomposable projectives, with bottom radical layers cut off until it
/// is small enough.
pub fn random_module<R: Rng>(alg: &Arc<Algebra>, max_dim: usize, rng: &mut R) -> Module {
    assert!(max_dim >= 1, "random modules are nonzero");
    let nv = alg.num_vertices();
    let count = rng.gen_range(1..=2);
    let summands: Vec<usize> = (0..count).map(|_| rng.gen_range(0..nv)).collect();
    let free = Module::free(alg.clone(), &summands);
    let ends = hom_space(&free, &free).expect("same algebra");
    let mut m = if rng.gen_bool(0.5) {
        random_combination(&ends, rng).cokernel().module
    } else {
        free
    };
    if m.is_zero() {
        m = Module::simple(alg.clone(), summands[0]);
    }
    while m.dim() > max_dim {
        // the last nonzero radical power is a submodule of m
        let mut low = m.radical_of();
        loop {
            let next = low.module.radical_of();
            if next.module.is_zero() {
                break;
            }
            low.inclusion = low.inclusion.compose(&next.inclusion);
            low.module = next.module;
        }
        if low.module.is_zero() {
            // semisimple and still too large: keep one simple summand
            let v = (0..nv).find(|&v| m.dims()[v] > 0).expect("nonzero module");
            m = Module::simple(alg.clone(), v);
        } else {
            m = m.quotient(low.inclusion.blocks()).module;
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::super::tests::{a2, dual_numbers};
    use super::*;

    #[test]
    fn hom_from_regular_is_the_module() {
        for alg in [a2(), dual_numbers()] {
            let r = Module::regular(alg.clone());
            for s in Module::simples(&alg).into_iter().chain([r.clone()]) {
                assert_eq!(hom_dim(&r, &s).unwrap(), s.dim());
            }
        }
    }

    #[test]
    fn simple_homs_over_a2() {
        let alg = a2();
        let s = Module::simples(&alg);
        assert_eq!(hom_dim(&s[0], &s[1]).unwrap(), 0);
        // Hom(P(1), S(2)) ≅ e_1 S(2) = 0
        let p1 = Module::projective(alg.clone(), 0);
        assert_eq!(hom_dim(&p1, &s[1]).unwrap(), 0);
        assert_eq!(hom_dim(&p1, &s[0]).unwrap(), 1);
        // P(2) = S(2) embeds in P(1)
        let p2 = Module::projective(alg, 1);
        assert_eq!(hom_dim(&p2, &p1).unwrap(), 1);
        assert_eq!(hom_dim(&p1, &p2).unwrap(), 0);
    }

    #[test]
    fn basis_elements_intertwine() {
        let alg = dual_numbers();
        let r = Module::regular(alg.clone());
        let basis = hom_space(&r, &r).unwrap();
        assert_eq!(basis.len(), 2);
        for f in &basis {
            assert!(f.validate().is_ok());
        }
    }
}
