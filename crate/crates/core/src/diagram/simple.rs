//! The simple functor: total complex of a cubical diagram.
//!
//! `s(X)_m = ⊕_α (X_α)_{m+|α|-1}` with differential `(-1)^{|α|-1} d + Σ_k ε(α,k) X(α -> α+e_k)`,
//! summands in cube vertex order.

use std::ops::Range;

use super::total::{signed_block_map, total_complex, Block, Link, Summand};
use super::CubicalDiagram;
use crate::complex::{ChainMap, ZComplex};
use crate::cube::{CubeIndex, CubeVertex};
use crate::{Error, Result};

fn parity_sign(w: usize) -> i32 {
    if w % 2 == 0 {
        1
    } else {
        -1
    }
}

pub(crate) fn summands(x: &CubicalDiagram) -> Vec<Summand<'_>> {
    x.index()
        .vertices()
        .into_iter()
        .map(|v| Summand {
            complex: x.vertex(v),
            shift: v.weight() as i64 - 1,
            sign: parity_sign(v.weight() + 1),
        })
        .collect()
}

pub(crate) fn links(x: &CubicalDiagram) -> Vec<Link<'_>> {
    let idx = x.index();
    idx.edges()
        .into_iter()
        .map(|(a, c)| Link {
            from: idx.position(a).unwrap(),
            to: idx.position(c.target).unwrap(),
            map: x.edge(a, c.k),
            sign: c.sign,
        })
        .collect()
}

fn require_plain(x: &CubicalDiagram) -> Result<()> {
    if x.index().augmented() {
        return Err(Error::invalid(
            "cube",
            "simple of an augmented diagram: use simple_augmented",
        ));
    }
    Ok(())
}

fn require_augmented(x: &CubicalDiagram) -> Result<()> {
    if !x.index().augmented() {
        return Err(Error::invalid("cube", "diagram is not augmented"));
    }
    Ok(())
}

pub fn simple(x: &CubicalDiagram) -> Result<ZComplex> {
    require_plain(x)?;
    total_complex(&summands(x), &links(x))
}

/// Where each vertex sits inside the simple complex.
#[derive(Clone, Debug)]
pub struct SimpleLayout {
    index: CubeIndex,
    ranks: Vec<Vec<(i64, usize)>>,
}

impl SimpleLayout {
    pub fn new(x: &CubicalDiagram) -> Self {
        let ranks = x
            .index()
            .vertices()
            .into_iter()
            .map(|v| {
                let c = x.vertex(v);
                (c.lo()..=c.hi()).map(|m| (m, c.rank(m))).collect()
            })
            .collect();
        SimpleLayout {
            index: x.index(),
            ranks,
        }
    }

    fn vertex_rank(&self, i: usize, internal: i64) -> usize {
        self.ranks[i]
            .iter()
            .find(|(m, _)| *m == internal)
            .map_or(0, |(_, r)| *r)
    }

    pub fn index(&self) -> CubeIndex {
        self.index
    }

    /// Coordinates of `(X_v)_{m+|v|-1}` inside `s(X)_m`.
    pub fn block(&self, v: CubeVertex, m: i64) -> Range<usize> {
        let pos = self.index.position(v).expect("vertex of the cube");
        let mut start = 0;
        for (i, u) in self.index.vertices().into_iter().enumerate() {
            let r = self.vertex_rank(i, m + u.weight() as i64 - 1);
            if i == pos {
                return start..start + r;
            }
            start += r;
        }
        unreachable!()
    }

    pub fn rank(&self, m: i64) -> usize {
        self.index
            .vertices()
            .into_iter()
            .enumerate()
            .map(|(i, u)| self.vertex_rank(i, m + u.weight() as i64 - 1))
            .sum()
    }
}

/// `λ: X_0 -> s(X)`, the sum of the edge maps out of the augmentation vertex, each placed
/// with coefficient `+1` in its weight-one summand.
pub fn augmentation_map(x: &CubicalDiagram) -> Result<ChainMap> {
    require_augmented(x)?;
    let plain = x.without_augmentation();
    let s = simple(&plain)?;
    let x0 = x.augmentation_vertex();
    let src = [Summand {
        complex: x0,
        shift: 0,
        sign: 1,
    }];
    let tgt = summands(&plain);
    let zero = CubeVertex::zero(x.index().width());
    let blocks: Vec<Block> = zero
        .cofaces()
        .into_iter()
        .map(|c| Block {
            from: 0,
            to: plain.index().position(c.target).unwrap(),
            sign: 1,
            map: Some(x.edge(zero, c.k)),
        })
        .collect();
    signed_block_map(x0, &src, &s, &tgt, &blocks)
}

/// `fiber(λ)`.
pub fn simple_augmented(x: &CubicalDiagram) -> Result<ZComplex> {
    Ok(augmentation_map(x)?.fiber())
}

/// Total fiber computed one coordinate at a time: split off the last coordinate, take
/// vertexwise fibers of the resulting map of `□_{n-1}⁺` diagrams, repeat.
pub fn simple_augmented_iterated(x: &CubicalDiagram) -> Result<ZComplex> {
    require_augmented(x)?;
    let n = x.index().n();
    if n == 0 {
        let zero = CubeVertex::zero(1);
        return Ok(x.edge(zero, 0).fiber());
    }
    let idx = CubeIndex::new(n - 1, true)?;
    let low = |v: CubeVertex| CubeVertex::from_bits(v.bits(), n + 1);
    let high = |v: CubeVertex| CubeVertex::from_bits(v.bits() | 1 << n, n + 1);
    let along = |v: CubeVertex| x.edge(low(v), n);
    let y = CubicalDiagram::from_fn(
        idx,
        |v| along(v).fiber(),
        |v, k| {
            along(v)
                .fiber_map(
                    along(v.with(k, true)),
                    x.edge(low(v), k),
                    x.edge(high(v), k),
                )
                .expect("fibers of a commuting square")
        },
    )?;
    simple_augmented_iterated(&y)
}

/// `X⁺` is acyclic: its total fiber has no homology.
pub fn is_acyclic(x: &CubicalDiagram) -> Result<bool> {
    Ok(simple_augmented_iterated(x)?.is_acyclic())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zmod::{FgAbGroup, IntMatrix};

    fn z(rank: usize) -> ZComplex {
        ZComplex::concentrated(0, rank)
    }

    fn map(src: &ZComplex, tgt: &ZComplex, m: &[&[i64]]) -> ChainMap {
        ChainMap::from_fn(src, tgt, |d| {
            if d == 0 {
                IntMatrix::from_i64(m)
            } else {
                IntMatrix::zeros(tgt.rank(d), src.rank(d))
            }
        })
        .unwrap()
    }

    fn v(s: &str) -> CubeVertex {
        s.parse().unwrap()
    }

    /// X̃ = Z², Y = Z, Ỹ = Z² with the nodal restriction maps; the augmentation vertex is
    /// Z² with zero maps.
    fn nodal(aug: bool) -> CubicalDiagram {
        let idx = CubeIndex::new(1, aug).unwrap();
        CubicalDiagram::from_fn(
            idx,
            |x| match x.to_string().as_str() {
                "00" => z(2),
                "10" => z(2),
                "01" => z(1),
                _ => z(2),
            },
            |a, k| match (a.to_string().as_str(), k) {
                ("10", _) => map(&z(2), &z(2), &[&[1, 1], &[1, 1]]),
                ("01", _) => map(&z(1), &z(2), &[&[1], &[1]]),
                (_, 0) => ChainMap::zero(&z(2), &z(2)),
                _ => ChainMap::zero(&z(2), &z(1)),
            },
        )
        .unwrap()
    }

    #[test]
    fn pullback_square() {
        let idx = CubeIndex::new(1, false).unwrap();
        let x = CubicalDiagram::constant(idx, &z(1));
        let s = simple(&x).unwrap();
        assert_eq!(s.homology(0), FgAbGroup::free(1));
        assert!(s.homology(-1).is_trivial());
    }

    #[test]
    fn zero_diagram_has_zero_simple() {
        let x = CubicalDiagram::zero(CubeIndex::new(2, false).unwrap());
        assert!(simple(&x).unwrap().is_zero());
    }

    #[test]
    fn nodal_simple() {
        let s = simple(&nodal(false)).unwrap();
        assert_eq!(s.homology(0), FgAbGroup::free(2));
        assert_eq!(s.homology(-1), FgAbGroup::free(1));
        assert_eq!(s.rank(0), 3);
        assert_eq!(s.rank(-1), 2);
        let layout = SimpleLayout::new(&nodal(false));
        assert_eq!(layout.block(v("01"), 0), 2..3);
        assert_eq!(layout.block(v("11"), -1), 0..2);
    }

    #[test]
    fn identity_augmented_is_acyclic() {
        for n in 0..3 {
            let idx = CubeIndex::new(n, true).unwrap();
            let c = ZComplex::two_term(1, IntMatrix::from_i64(&[&[2]]));
            let x = CubicalDiagram::constant(idx, &c);
            assert!(is_acyclic(&x).unwrap());
            assert!(augmentation_map(&x).unwrap().is_quasi_iso());
            assert!(simple_augmented(&x).unwrap().is_acyclic());
        }
    }

    #[test]
    fn point_augmentation_gives_loop_of_simple() {
        let plain = nodal(false);
        let idx = CubeIndex::new(1, true).unwrap();
        let x = CubicalDiagram::from_fn(
            idx,
            |u| {
                if u.is_zero() {
                    ZComplex::zero()
                } else {
                    plain.vertex(u).clone()
                }
            },
            |a, k| {
                if a.is_zero() {
                    ChainMap::zero(&ZComplex::zero(), plain.vertex(a.with(k, true)))
                } else {
                    plain.edge(a, k).clone()
                }
            },
        )
        .unwrap();
        assert!(augmentation_map(&x).unwrap().is_zero());
        assert_eq!(
            simple_augmented(&x).unwrap(),
            simple(&plain).unwrap().loop_space()
        );
    }

    #[test]
    fn times_two_square_is_not_acyclic() {
        let idx = CubeIndex::new(0, true).unwrap();
        let x = CubicalDiagram::from_fn(idx, |_| z(1), |_, _| map(&z(1), &z(1), &[&[2]]))
            .unwrap();
        assert!(!is_acyclic(&x).unwrap());
        assert_eq!(
            simple_augmented(&x).unwrap().homology(-1).to_string(),
            "Z/2"
        );
    }

    #[test]
    fn nodal_augmentation_assembly() {
        let x = nodal(true);
        let lam = augmentation_map(&x).unwrap();
        assert_eq!(lam.component(0).shape(), (3, 2));
        let iter = simple_augmented_iterated(&x).unwrap();
        let fib = simple_augmented(&x).unwrap();
        for q in -3..3 {
            assert_eq!(iter.homology(q), fib.homology(q));
        }
    }
}
