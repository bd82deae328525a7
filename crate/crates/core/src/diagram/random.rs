//! Seeded generators for complexes, chain maps and commuting cubical diagrams.
//!
//! Diagrams are built from small "parts": a part `A_T` lives on every vertex above `T`, a part
//! `B_T` on every vertex below `T`. Along an edge a part either persists, acted on by a
//! polynomial in one fixed chain endomorphism (so all faces commute), or is dropped. The
//! result is then conjugated vertexwise and degreewise by small unimodular matrices. Samples
//! whose entries would leave the configured bound are not conjugated.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;

use super::morphism::DiagramMorphism;
use super::CubicalDiagram;
use crate::complex::{ChainMap, ZComplex};
use crate::cube::{CubeIndex, CubeVertex};
use crate::zmod::{inverse_unimodular, IntMatrix};

#[derive(Clone, Debug)]
pub struct DiagramBounds {
    /// Maximum total rank of a vertex complex.
    pub max_rank: usize,
    pub lo: i64,
    pub hi: i64,
    /// Bound on the absolute value of every matrix entry.
    pub max_entry: i64,
}

impl Default for DiagramBounds {
    fn default() -> Self {
        DiagramBounds {
            max_rank: 3,
            lo: -2,
            hi: 2,
            max_entry: 3,
        }
    }
}

/// Unimodular `n x n` matrix with its inverse, a product of a few elementary moves.
pub fn random_unimodular<R: Rng>(rng: &mut R, n: usize) -> (IntMatrix, IntMatrix) {
    let mut p = IntMatrix::identity(n);
    if n > 0 {
        for _ in 0..rng.gen_range(0..=2) {
            let i = rng.gen_range(0..n);
            let j = rng.gen_range(0..n);
            match rng.gen_range(0..3) {
                0 if i != j => {
                    let c = if rng.gen_bool(0.5) { 1 } else { -1 };
                    p.add_row_multiple(i, j, &c.into());
                }
                1 => p.swap_rows(i, j),
                _ => p.negate_row(i),
            }
        }
    }
    let inv = inverse_unimodular(&p).expect("elementary product is unimodular");
    (p, inv)
}

fn random_multiplier<R: Rng>(rng: &mut R, max_entry: i64) -> i64 {
    let c = rng.gen_range(1..=max_entry.max(1));
    if rng.gen_bool(0.5) {
        c
    } else {
        -c
    }
}

/// Elementary complex: `Z` in one degree, or `Z --c--> Z` across two adjacent degrees.
fn random_piece<R: Rng>(rng: &mut R, b: &DiagramBounds, room: usize) -> ZComplex {
    if room >= 2 && b.hi > b.lo && rng.gen_bool(0.5) {
        let top = rng.gen_range(b.lo + 1..=b.hi);
        let c = random_multiplier(rng, b.max_entry);
        ZComplex::two_term(top, IntMatrix::from_i64(&[&[c]]))
    } else {
        ZComplex::concentrated(rng.gen_range(b.lo..=b.hi), 1)
    }
}

/// Random complex of total rank at most `b.max_rank`, conjugated degreewise.
pub fn random_complex<R: Rng>(rng: &mut R, b: &DiagramBounds) -> ZComplex {
    let mut parts = Vec::new();
    let mut used = 0;
    while used < b.max_rank && rng.gen_bool(0.7) {
        let p = random_piece(rng, b, b.max_rank - used);
        used += p.total_rank();
        parts.push(p);
    }
    let refs: Vec<&ZComplex> = parts.iter().collect();
    let c = ZComplex::direct_sum_all(&refs);
    let (conj, _) = conjugate_complex(rng, &c);
    if within_bound(conj.lo()..=conj.hi(), |m| conj.diff(m), b.max_entry) {
        conj
    } else {
        c
    }
}

fn within_bound(
    degrees: std::ops::RangeInclusive<i64>,
    f: impl Fn(i64) -> IntMatrix,
    max_entry: i64,
) -> bool {
    degrees.into_iter().all(|m| {
        let mx = f(m).max_abs();
        mx <= max_entry.into()
    })
}

/// `P C P^{-1}` for random unimodular `P` per degree, with the isomorphism `C -> P C P^{-1}`.
pub fn conjugate_complex<R: Rng>(rng: &mut R, c: &ZComplex) -> (ZComplex, ChainMap) {
    let (lo, hi) = (c.lo(), c.hi());
    let mats: BTreeMap<i64, (IntMatrix, IntMatrix)> = (lo..=hi)
        .map(|m| (m, random_unimodular(rng, c.rank(m))))
        .collect();
    let p = |m: i64| {
        mats.get(&m)
            .map(|x| x.0.clone())
            .unwrap_or_else(|| IntMatrix::identity(c.rank(m)))
    };
    let pinv = |m: i64| {
        mats.get(&m)
            .map(|x| x.1.clone())
            .unwrap_or_else(|| IntMatrix::identity(c.rank(m)))
    };
    let conj = ZComplex::from_fn(lo, hi, |m| c.rank(m), |m| p(m - 1).mul(&c.diff(m)).mul(&pinv(m)))
        .expect("conjugate of a valid complex");
    let iso = ChainMap::from_fn(c, &conj, p).expect("conjugation is a chain map");
    (conj, iso)
}

/// `h: C_m -> C_{m+1}` with entries in `{-1, 0, 1}`; returns `Dh + hD`.
fn random_nullhomotopic<R: Rng>(rng: &mut R, c: &ZComplex) -> ChainMap {
    let h: BTreeMap<i64, IntMatrix> = (c.lo() - 1..=c.hi())
        .map(|m| {
            let (r, s) = (c.rank(m + 1), c.rank(m));
            let mut x = IntMatrix::zeros(r, s);
            for i in 0..r {
                for j in 0..s {
                    x[(i, j)] = rng.gen_range(-1..=1).into();
                }
            }
            (m, x)
        })
        .collect();
    let hm = |m: i64| {
        h.get(&m)
            .cloned()
            .unwrap_or_else(|| IntMatrix::zeros(c.rank(m + 1), c.rank(m)))
    };
    ChainMap::from_fn(c, c, |m| {
        c.diff(m + 1).mul(&hm(m)).add(&hm(m - 1).mul(&c.diff(m)))
    })
    .expect("Dh + hD is a chain map")
}

struct Part {
    complex: ZComplex,
    anchor: CubeVertex,
    upward: bool,
    phi: ChainMap,
    /// Per coordinate: `a * id + b * phi`.
    coeffs: Vec<(i64, i64)>,
}

impl Part {
    fn present(&self, v: CubeVertex) -> bool {
        if self.upward {
            self.anchor.le(v)
        } else {
            v.le(self.anchor)
        }
    }

    fn action(&self, k: usize) -> ChainMap {
        let (a, b) = self.coeffs[k];
        let c = &self.complex;
        ChainMap::from_fn(c, c, |m| {
            IntMatrix::scalar(c.rank(m), a).add(&self.phi.component(m).scale(&b.into()))
        })
        .expect("polynomial in a chain endomorphism")
    }
}

/// Random commuting diagram over `index` (augmented or not).
pub fn random_diagram<R: Rng>(rng: &mut R, index: CubeIndex, b: &DiagramBounds) -> CubicalDiagram {
    let verts = index.vertices();
    let mut load: BTreeMap<CubeVertex, usize> = verts.iter().map(|&v| (v, 0)).collect();
    let mut candidates: Vec<(CubeVertex, bool)> =
        verts.iter().flat_map(|&v| [(v, true), (v, false)]).collect();
    candidates.shuffle(rng);
    let mut parts = Vec::new();
    for (anchor, upward) in candidates {
        if !rng.gen_bool(0.45) {
            continue;
        }
        let covered: Vec<CubeVertex> = verts
            .iter()
            .copied()
            .filter(|&v| if upward { anchor.le(v) } else { v.le(anchor) })
            .collect();
        let room = covered
            .iter()
            .map(|v| b.max_rank - load[v])
            .min()
            .unwrap_or(0);
        if room == 0 {
            continue;
        }
        let sub = DiagramBounds {
            max_rank: room.min(2),
            ..b.clone()
        };
        let complex = random_piece(rng, &sub, sub.max_rank);
        for v in &covered {
            *load.get_mut(v).unwrap() += complex.total_rank();
        }
        let mut phi = random_nullhomotopic(rng, &complex);
        if !within_bound(complex.lo()..=complex.hi(), |m| phi.component(m), 1) {
            phi = ChainMap::zero(&complex, &complex);
        }
        let coeffs = (0..index.width())
            .map(|_| (rng.gen_range(-1..=2), rng.gen_range(-1..=1)))
            .collect();
        parts.push(Part {
            complex,
            anchor,
            upward,
            phi,
            coeffs,
        });
    }
    let x = assemble(index, &parts);
    let bounded = |d: &CubicalDiagram| {
        d.vertex_complexes()
            .iter()
            .all(|c| within_bound(c.lo()..=c.hi(), |m| c.diff(m), b.max_entry))
            && index.edges().iter().all(|(a, c)| {
                let f = d.edge(*a, c.k);
                within_bound(f.source().lo() - 1..=f.source().hi() + 1, |m| f.component(m), b.max_entry)
            })
    };
    let x = if bounded(&x) {
        x
    } else {
        // drop the endomorphism twist, keeping only scalar actions
        let plain: Vec<Part> = parts
            .into_iter()
            .map(|p| Part {
                phi: ChainMap::zero(&p.complex, &p.complex),
                ..p
            })
            .collect();
        assemble(index, &plain)
    };
    let (y, _) = conjugate_diagram(rng, &x);
    if bounded(&y) {
        y
    } else {
        x
    }
}

fn assemble(index: CubeIndex, parts: &[Part]) -> CubicalDiagram {
    let at = |v: CubeVertex| -> Vec<usize> {
        (0..parts.len()).filter(|&i| parts[i].present(v)).collect()
    };
    let vertex = |v: CubeVertex| {
        let cs: Vec<&ZComplex> = at(v).into_iter().map(|i| &parts[i].complex).collect();
        ZComplex::direct_sum_all(&cs)
    };
    let edge = |a: CubeVertex, k: usize| {
        let b = a.with(k, true);
        let src = vertex(a);
        let tgt = vertex(b);
        let (sa, sb) = (at(a), at(b));
        let actions: Vec<(usize, ChainMap)> = sa
            .iter()
            .filter(|i| sb.contains(i))
            .map(|&i| (i, parts[i].action(k)))
            .collect();
        ChainMap::from_fn(&src, &tgt, |m| {
            let mut f = IntMatrix::zeros(tgt.rank(m), src.rank(m));
            for (i, g) in &actions {
                let off = |list: &[usize]| -> usize {
                    list.iter()
                        .take_while(|j| *j != i)
                        .map(|&j| parts[j].complex.rank(m))
                        .sum()
                };
                let block = g.component(m);
                if block.rows() > 0 {
                    f.set_block(off(&sb), off(&sa), &block);
                }
            }
            f
        })
        .expect("part actions assemble to a chain map")
    };
    CubicalDiagram::from_fn(index, vertex, edge).expect("part diagrams commute")
}

/// Vertexwise conjugate of `x` together with the isomorphism `x -> conjugate`.
pub fn conjugate_diagram<R: Rng>(rng: &mut R, x: &CubicalDiagram) -> (CubicalDiagram, DiagramMorphism) {
    let idx = x.index();
    let conj: Vec<(ZComplex, ChainMap)> = x
        .vertex_complexes()
        .iter()
        .map(|c| conjugate_complex(rng, c))
        .collect();
    let inverse = |i: usize| -> ChainMap {
        let (c, p) = &conj[i];
        ChainMap::from_fn(c, p.source(), |m| {
            inverse_unimodular(&p.component(m)).expect("unimodular conjugation")
        })
        .expect("inverse conjugation")
    };
    let y = CubicalDiagram::from_fn(
        idx,
        |v| conj[idx.position(v).unwrap()].0.clone(),
        |a, k| {
            let (ia, ib) = (idx.position(a).unwrap(), idx.position(a.with(k, true)).unwrap());
            conj[ib]
                .1
                .compose(&x.edge(a, k).compose(&inverse(ia)).unwrap())
                .unwrap()
        },
    )
    .expect("conjugated diagram commutes");
    let maps = conj.into_iter().map(|(_, p)| p).collect();
    let iso = DiagramMorphism::vertexwise(x.clone(), y.clone(), maps).expect("conjugation is natural");
    (y, iso)
}

/// `x -> x ⊕ cone(id_C)` vertexwise, with `C` random and zero edge maps on the cone part;
/// a vertexwise quasi-isomorphism.
pub fn pad_with_acyclic<R: Rng>(rng: &mut R, x: &CubicalDiagram, b: &DiagramBounds) -> DiagramMorphism {
    let idx = x.index();
    let small = DiagramBounds {
        max_rank: 1,
        ..b.clone()
    };
    let pads: Vec<ZComplex> = idx
        .vertices()
        .into_iter()
        .map(|_| {
            let c = random_complex(rng, &small);
            ChainMap::identity(&c).cone()
        })
        .collect();
    let y = CubicalDiagram::from_fn(
        idx,
        |v| x.vertex(v).direct_sum(&pads[idx.position(v).unwrap()]),
        |a, k| {
            let pa = &pads[idx.position(a).unwrap()];
            let pb = &pads[idx.position(a.with(k, true)).unwrap()];
            x.edge(a, k).direct_sum(&ChainMap::zero(pa, pb))
        },
    )
    .expect("padded diagram commutes");
    let maps = idx
        .vertices()
        .into_iter()
        .map(|v| {
            let src = x.vertex(v);
            let tgt = y.vertex(v);
            let pad = &pads[idx.position(v).unwrap()];
            ChainMap::from_fn(src, tgt, |m| {
                IntMatrix::identity(src.rank(m)).vstack(&IntMatrix::zeros(pad.rank(m), src.rank(m)))
            })
            .expect("inclusion of a summand")
        })
        .collect();
    DiagramMorphism::vertexwise(x.clone(), y, maps).expect("inclusion is natural")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generated_diagrams_respect_bounds() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let b = DiagramBounds::default();
        for n in 0..3 {
            for aug in [false, true] {
                let idx = CubeIndex::new(n, aug).unwrap();
                for _ in 0..5 {
                    let x = random_diagram(&mut rng, idx, &b);
                    for c in x.vertex_complexes() {
                        assert!(c.total_rank() <= 3);
                        if let Some((lo, hi)) = c.support() {
                            assert!(lo >= -2 && hi <= 2);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn generation_is_deterministic() {
        let idx = CubeIndex::new(2, false).unwrap();
        let b = DiagramBounds::default();
        let x = random_diagram(&mut ChaCha8Rng::seed_from_u64(5), idx, &b);
        let y = random_diagram(&mut ChaCha8Rng::seed_from_u64(5), idx, &b);
        assert_eq!(x, y);
    }
}
