//! Isomorphism detection with sound answers in both directions.
//!
//! A positive answer always carries an invertible intertwiner. A negative
//! answer is only given for a certified invariant mismatch; failing to find
//! an isomorphism by search yields [`IsoVerdict::Undetermined`].

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::hom::{hom_space, random_combination};
use super::{Module, ModuleError, Morphism};
use crate::exactfield::Mat;

pub const DEFAULT_SAMPLES: usize = 32;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum IsoObstruction {
    DimensionVector { left: Vec<usize>, right: Vec<usize> },
    TopDimensions { left: Vec<usize>, right: Vec<usize> },
    NoMapsForward,
    NoMapsBackward,
    HomDimensions {
        end_left: usize,
        hom_forward: usize,
        hom_backward: usize,
        end_right: usize,
    },
}

#[derive(Clone, Debug)]
pub enum IsoVerdict {
    Yes(Morphism),
    No(IsoObstruction),
    Undetermined { samples: usize },
}

impl IsoVerdict {
    pub fn is_yes(&self) -> bool {
        matches!(self, IsoVerdict::Yes(_))
    }

    pub fn is_no(&self) -> bool {
        matches!(self, IsoVerdict::No(_))
    }

    pub fn witness(&self) -> Option<&Morphism> {
        match self {
            IsoVerdict::Yes(f) => Some(f),
            _ => None,
        }
    }
}

fn is_semisimple(m: &Module) -> bool {
    m.algebra().radical().iter().all(|&b| m.action(b).is_zero())
}

fn block_rank(f: &Morphism) -> usize {
    f.blocks().iter().map(Mat::rank).sum()
}

/// Decides whether `m ≅ n`. `samples` random elements of `Hom(m, n)` are
/// tried after the basis elements, followed by a rank-increasing local
/// search. The search is deterministic for a fixed `seed`.
pub fn is_isomorphic(
    m: &Module,
    n: &Module,
    samples: usize,
    seed: u64,
) -> Result<IsoVerdict, ModuleError> {
    m.check_same_algebra(n)?;
    if m.dims() != n.dims() {
        return Ok(IsoVerdict::No(IsoObstruction::DimensionVector {
            left: m.dims().to_vec(),
            right: n.dims().to_vec(),
        }));
    }
    if m.is_zero() {
        return Ok(IsoVerdict::Yes(Morphism::zero(m.clone(), n.clone())));
    }
    let (tm, tn) = (m.top_dims(), n.top_dims());
    if tm != tn {
        return Ok(IsoVerdict::No(IsoObstruction::TopDimensions {
            left: tm,
            right: tn,
        }));
    }
    let forward = hom_space(m, n)?;
    if forward.is_empty() {
        return Ok(IsoVerdict::No(IsoObstruction::NoMapsForward));
    }
    let backward = hom_space(n, m)?;
    if backward.is_empty() {
        return Ok(IsoVerdict::No(IsoObstruction::NoMapsBackward));
    }
    let end_left = hom_space(m, m)?.len();
    let end_right = hom_space(n, n)?.len();
    let dims = [end_left, forward.len(), backward.len(), end_right];
    if dims.iter().any(|&d| d != end_left) {
        return Ok(IsoVerdict::No(IsoObstruction::HomDimensions {
            end_left,
            hom_forward: forward.len(),
            hom_backward: backward.len(),
            end_right,
        }));
    }
    if is_semisimple(m) && is_semisimple(n) {
        let field = m.field();
        let blocks = m.dims().iter().map(|&d| Mat::identity(field, d)).collect();
        return Ok(IsoVerdict::Yes(Morphism::new(m.clone(), n.clone(), blocks)?));
    }
    if let Some(f) = forward.iter().find(|f| f.is_iso()) {
        return Ok(IsoVerdict::Yes(f.clone()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let f = random_combination(&forward, &mut rng);
        if f.is_iso() {
            return Ok(IsoVerdict::Yes(f));
        }
    }
    if let Some(f) = climb(&forward, m.dim(), &mut rng) {
        return Ok(IsoVerdict::Yes(f));
    }
    Ok(IsoVerdict::Undetermined { samples })
}

/// Greedy search for a full-rank element: repeatedly add scalar multiples of
/// basis morphisms when that raises the rank. Matters mostly over tiny
/// fields, where random sampling misses invertible elements often.
fn climb<R: Rng>(basis: &[Morphism], full: usize, rng: &mut R) -> Option<Morphism> {
    let field = basis[0].source().field();
    let p = field.p();
    let scalars: Vec<u32> = if p <= 7 {
        (1..p).collect()
    } else {
        (0..4).map(|_| rng.gen_range(1..p)).collect()
    };
    for _restart in 0..4 {
        let mut current = random_combination(basis, rng);
        let mut rank = block_rank(&current);
        loop {
            if rank == full {
                return Some(current);
            }
            let mut improved = false;
            'moves: for h in basis {
                for &c in &scalars {
                    let candidate = current.add(&h.scale(c));
                    let r = block_rank(&candidate);
                    if r > rank {
                        current = candidate;
                        rank = r;
                        improved = true;
                        break 'moves;
                    }
                }
            }
            if !improved {
                // pairs of moves, for plateaus where single steps do not help
                'pairs: for (i, h1) in basis.iter().enumerate() {
                    for h2 in &basis[i + 1..] {
                        for &c1 in &scalars {
                            for &c2 in &scalars {
                                let candidate = current.add(&h1.scale(c1)).add(&h2.scale(c2));
                                let r = block_rank(&candidate);
                                if r > rank {
                                    current = candidate;
                                    rank = r;
                                    improved = true;
                                    break 'pairs;
                                }
                            }
                        }
                    }
                }
            }
            if !improved {
                break;
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::super::tests::{a2, dual_numbers};
    use super::*;
    use crate::exactfield::Field;
    use crate::quivalg::{build_algebra, Quiver, Relation};
    use std::sync::Arc;

    #[test]
    fn self_iso_and_dimension_mismatch() {
        let alg = a2();
        let p = Module::projective(alg.clone(), 0);
        let v = is_isomorphic(&p, &p, DEFAULT_SAMPLES, 0).unwrap();
        assert!(v.witness().unwrap().is_iso());
        let s = Module::simple(alg, 0);
        assert!(matches!(
            is_isomorphic(&p, &s, DEFAULT_SAMPLES, 0).unwrap(),
            IsoVerdict::No(IsoObstruction::DimensionVector { .. })
        ));
    }

    #[test]
    fn radical_of_dual_numbers_is_the_simple() {
        let alg = dual_numbers();
        let r = Module::regular(alg.clone()).radical_of().module;
        let s = Module::simple(alg, 0);
        assert!(is_isomorphic(&r, &s, DEFAULT_SAMPLES, 1).unwrap().is_yes());
    }

    #[test]
    fn over_f2_local_search_finds_isomorphisms() {
        // k[x,y]/(x,y)^2 regular module vs a base-changed copy, over F_2
        let f2 = Field::new(2).unwrap();
        let mut q = Quiver::new(["1"]).unwrap();
        q.add_arrow("x", "1", "1").unwrap();
        q.add_arrow("y", "1", "1").unwrap();
        let rels: Vec<Relation> = ["x*x", "x*y", "y*x", "y*y"]
            .iter()
            .map(|s| Relation::monomial(&q, q.parse_path(s).unwrap()).unwrap())
            .collect();
        let qa = build_algebra(f2, &q, &rels, 3).unwrap();
        let alg = Arc::new(qa.algebra().clone());
        let m = Module::regular(alg.clone());
        let g = Mat::from_i64_rows(f2, &[vec![1, 0, 1], vec![1, 1, 0], vec![0, 0, 1]]);
        let gi = g.inverse().unwrap();
        let actions = m.actions().iter().map(|a| g.mul(a).mul(&gi)).collect();
        let n = Module::new(alg, m.dims().to_vec(), actions).unwrap();
        let v = is_isomorphic(&m, &n, 0, 7).unwrap();
        assert!(v.witness().unwrap().is_iso());
    }

    #[test]
    fn non_isomorphic_same_dimension() {
        // P(1) over A2 versus S(1) ⊕ S(2): same dimension vector, different tops
        let alg = a2();
        let p = Module::projective(alg.clone(), 0);
        let s = Module::direct_sum(&Module::simples(&alg)).unwrap().module;
        assert!(is_isomorphic(&p, &s, DEFAULT_SAMPLES, 0).unwrap().is_no());
    }
}
