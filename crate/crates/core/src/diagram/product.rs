//! Diagrams over products of cubes and the factorisation isomorphism.
//!
//! A diagram over `□_a × □_b` is stored as a diagram over the cube of concatenated
//! coordinates, `□_{a+b+1}`; only vertices whose two halves are both nonzero take part.
//!
//! Two total complexes are compared:
//! * the flat one, with summand `X_{αβ}` in shift `|α|+|β|-2`, internal sign `(-1)^{|α|+|β|}`
//!   and edge signs taken in the concatenated cube;
//! * the iterated one `s_α(s_β X)`, built by running the simple functor twice.
//!
//! `μ` (flat to iterated) is the diagonal sign `(-1)^{|β|-1}`, and the transposition
//! `s_α s_β X -> s_β s_α X^T` is the diagonal sign `(-1)^{(|α|-1)(|β|-1)}` after reordering.

use super::morphism::DiagramMorphism;
use super::simple::simple;
use super::total::{signed_block_map, total_complex, Block, Link, Summand};
use super::CubicalDiagram;
use crate::complex::{ChainMap, ZComplex};
use crate::cube::{cube_product, CubeIndex, CubeVertex, ProductIndex};
use crate::{Error, Result};

#[derive(Clone, Debug)]
pub struct ProductDiagram {
    shape: ProductIndex,
    big: CubicalDiagram,
}

fn parity(w: usize) -> i32 {
    if w % 2 == 0 {
        1
    } else {
        -1
    }
}

impl ProductDiagram {
    pub fn new(first: CubeIndex, second: CubeIndex, big: CubicalDiagram) -> Result<Self> {
        let shape = cube_product(first, second)?;
        let expected = CubeIndex::new(first.width() + second.width() - 1, false)?;
        if big.index() != expected {
            return Err(Error::invalid(
                "cube",
                "product diagram must live on the cube of concatenated coordinates",
            ));
        }
        Ok(ProductDiagram { shape, big })
    }

    pub fn shape(&self) -> &ProductIndex {
        &self.shape
    }

    fn a_width(&self) -> usize {
        self.shape.first.width()
    }

    pub fn vertex(&self, a: CubeVertex, b: CubeVertex) -> &ZComplex {
        self.big.vertex(a.concat(b))
    }

    /// Pairs in flat order (second factor outermost).
    pub fn pairs(&self) -> Vec<(CubeVertex, CubeVertex)> {
        self.shape.vertices()
    }

    /// Pairs in iterated order (first factor outermost).
    fn iterated_pairs(&self) -> Vec<(CubeVertex, CubeVertex)> {
        let bs = self.shape.second.vertices();
        self.shape
            .first
            .vertices()
            .into_iter()
            .flat_map(|a| bs.iter().map(move |&b| (a, b)))
            .collect()
    }

    fn atomic(&self, pairs: &[(CubeVertex, CubeVertex)]) -> Vec<Summand<'_>> {
        pairs
            .iter()
            .map(|&(a, b)| Summand {
                complex: self.vertex(a, b),
                shift: (a.weight() + b.weight()) as i64 - 2,
                sign: parity(a.weight() + b.weight()),
            })
            .collect()
    }

    pub fn flat_simple(&self) -> Result<ZComplex> {
        let pairs = self.pairs();
        let summands = self.atomic(&pairs);
        let pos = |g: CubeVertex| pairs.iter().position(|&(a, b)| a.concat(b) == g);
        let mut links = Vec::new();
        for (i, &(a, b)) in pairs.iter().enumerate() {
            let g = a.concat(b);
            for c in g.cofaces() {
                links.push(Link {
                    from: i,
                    to: pos(c.target).expect("cofaces stay in the product"),
                    map: self.big.edge(g, c.k),
                    sign: c.sign,
                });
            }
        }
        total_complex(&summands, &links)
    }

    /// The diagram `β -> X_{αβ}` over the second factor.
    fn row(&self, a: CubeVertex) -> CubicalDiagram {
        let off = self.a_width();
        CubicalDiagram::from_fn(
            self.shape.second,
            |b| self.vertex(a, b).clone(),
            |b, k| self.big.edge(a.concat(b), off + k).clone(),
        )
        .expect("rows of a product diagram commute")
    }

    /// `s_α(s_β X)`, built by applying the simple functor twice.
    pub fn iterated_simple(&self) -> Result<ZComplex> {
        let outer = self.outer_diagram()?;
        simple(&outer)
    }

    fn outer_diagram(&self) -> Result<CubicalDiagram> {
        let rows: Vec<CubicalDiagram> = self
            .shape
            .first
            .vertices()
            .into_iter()
            .map(|a| self.row(a))
            .collect();
        let first = self.shape.first;
        let row_of = |a: CubeVertex| &rows[first.position(a).unwrap()];
        let simples: Vec<ZComplex> = rows.iter().map(simple).collect::<Result<_>>()?;
        CubicalDiagram::from_fn(
            first,
            |a| simples[first.position(a).unwrap()].clone(),
            |a, k| {
                let src = row_of(a);
                let tgt = row_of(a.with(k, true));
                let maps = self
                    .shape
                    .second
                    .vertices()
                    .into_iter()
                    .map(|b| self.big.edge(a.concat(b), k).clone())
                    .collect();
                DiagramMorphism::vertexwise(src.clone(), tgt.clone(), maps)
                    .and_then(|m| m.simple_map())
                    .expect("edges of a product diagram are natural")
            },
        )
    }

    /// `X^T` over `□_b × □_a`.
    pub fn transpose(&self) -> ProductDiagram {
        let (aw, bw) = (self.a_width(), self.shape.second.width());
        let idx = CubeIndex::new(aw + bw - 1, false).expect("same size cube");
        let swap = |v: CubeVertex| {
            let (b, a) = v.split(bw);
            a.concat(b)
        };
        let big = CubicalDiagram::from_fn(
            idx,
            |v| self.big.vertex(swap(v)).clone(),
            |v, k| {
                let k2 = if k < bw { aw + k } else { k - bw };
                self.big.edge(swap(v), k2).clone()
            },
        )
        .expect("transposed diagram commutes");
        ProductDiagram::new(self.shape.second, self.shape.first, big).expect("transposed shape")
    }
}

/// `μ: flat -> s_α s_β`, the diagonal sign `(-1)^{|β|-1}`; validated as a chain map.
pub fn factorisation_map(x: &ProductDiagram) -> Result<ChainMap> {
    let flat = x.flat_simple()?;
    let iter = x.iterated_simple()?;
    let fp = x.pairs();
    let ip = x.iterated_pairs();
    let src = x.atomic(&fp);
    let tgt = x.atomic(&ip);
    let blocks: Vec<Block> = fp
        .iter()
        .enumerate()
        .map(|(i, &(a, b))| Block {
            from: i,
            to: ip.iter().position(|&p| p == (a, b)).unwrap(),
            sign: parity(b.weight() + 1),
            map: None,
        })
        .collect();
    signed_block_map(&flat, &src, &iter, &tgt, &blocks)
}

/// `s_α s_β X -> s_β s_α X^T`, the diagonal sign `(-1)^{(|α|-1)(|β|-1)}` after reordering.
pub fn transposition_map(x: &ProductDiagram) -> Result<ChainMap> {
    let t = x.transpose();
    let src_c = x.iterated_simple()?;
    let tgt_c = t.iterated_simple()?;
    let sp = x.iterated_pairs();
    let tp = t.iterated_pairs();
    let src = x.atomic(&sp);
    let tgt = t.atomic(&tp);
    let blocks: Vec<Block> = sp
        .iter()
        .enumerate()
        .map(|(i, &(a, b))| Block {
            from: i,
            to: tp.iter().position(|&p| p == (b, a)).unwrap(),
            sign: parity((a.weight() - 1) * (b.weight() - 1)),
            map: None,
        })
        .collect();
    signed_block_map(&src_c, &src, &tgt_c, &tgt, &blocks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::random::{random_diagram, DiagramBounds};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn factorisation_is_a_signed_permutation_isomorphism() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for (a, b) in [(0, 0), (1, 0), (0, 1), (1, 1)] {
            let fa = CubeIndex::new(a, false).unwrap();
            let fb = CubeIndex::new(b, false).unwrap();
            let big_idx = CubeIndex::new(a + b + 1, false).unwrap();
            for _ in 0..5 {
                let big = random_diagram(&mut rng, big_idx, &DiagramBounds::default());
                let x = ProductDiagram::new(fa, fb, big).unwrap();
                let mu = factorisation_map(&x).unwrap();
                assert!(mu.is_isomorphism());
                let tau = transposition_map(&x).unwrap();
                assert!(tau.is_isomorphism());
            }
        }
    }

    #[test]
    fn single_vertex_product_is_the_vertex() {
        let c = ZComplex::concentrated(1, 2);
        let idx = CubeIndex::new(1, false).unwrap();
        let big = CubicalDiagram::constant(idx, &c);
        let p = CubeIndex::new(0, false).unwrap();
        let x = ProductDiagram::new(p, p, big).unwrap();
        assert_eq!(x.flat_simple().unwrap(), c);
        assert_eq!(x.iterated_simple().unwrap(), c);
    }
}
