//! Morphisms of cubical diagrams and the chain maps they induce on simples.
//!
//! A morphism `X -> Y` from a diagram over `□` to one over `□'` is a coordinate embedding
//! `δ: □' -> □` (coordinate `j` of `□'` goes to coordinate `δ(j)` of `□`, coordinates outside
//! the image are zero) together with maps `X_{δβ} -> Y_β` natural in `β`. Only
//! order-preserving embeddings are accepted: they carry edge signs to edge signs, which is
//! what makes the induced map on simples a chain map.

use super::simple::{simple, summands};
use super::total::{signed_block_map, Block};
use super::CubicalDiagram;
use crate::complex::ChainMap;
use crate::cube::CubeVertex;
use crate::{Error, Result};

#[derive(Clone, Debug)]
pub struct DiagramMorphism {
    source: CubicalDiagram,
    target: CubicalDiagram,
    delta: Vec<usize>,
    /// Indexed by target vertex order.
    maps: Vec<ChainMap>,
}

impl DiagramMorphism {
    pub fn new(
        source: CubicalDiagram,
        target: CubicalDiagram,
        delta: Vec<usize>,
        maps: Vec<ChainMap>,
    ) -> Result<Self> {
        let (si, ti) = (source.index(), target.index());
        if si.augmented() != ti.augmented() {
            return Err(Error::invalid("delta", "cannot mix augmented and plain diagrams"));
        }
        if delta.len() != ti.width() {
            return Err(Error::invalid(
                "delta",
                format!("expected {} coordinates, found {}", ti.width(), delta.len()),
            ));
        }
        if delta.windows(2).any(|w| w[0] >= w[1]) || delta.iter().any(|&j| j >= si.width()) {
            return Err(Error::invalid(
                "delta",
                "coordinate map must be strictly increasing into the source cube",
            ));
        }
        if maps.len() != ti.vertex_count() {
            return Err(Error::invalid("maps", "one map per target vertex is required"));
        }
        let m = DiagramMorphism {
            source,
            target,
            delta,
            maps,
        };
        for (i, b) in ti.vertices().into_iter().enumerate() {
            let f = &m.maps[i];
            if f.source() != m.source.vertex(m.delta_vertex(b)) || f.target() != m.target.vertex(b)
            {
                return Err(Error::invalid(format!("maps.{b}"), "map ends do not match"));
            }
        }
        for (b, c) in ti.edges() {
            let left = m.target.edge(b, c.k).compose(m.map(b))?;
            let right = m
                .map(c.target)
                .compose(m.source.edge(m.delta_vertex(b), m.delta[c.k]))?;
            if left != right {
                return Err(Error::invalid(
                    format!("maps.{b}->{}", c.target),
                    "naturality square does not commute",
                ));
            }
        }
        Ok(m)
    }

    /// Identity-coordinate morphism given by vertexwise maps.
    pub fn vertexwise(
        source: CubicalDiagram,
        target: CubicalDiagram,
        maps: Vec<ChainMap>,
    ) -> Result<Self> {
        let delta = (0..target.index().width()).collect();
        DiagramMorphism::new(source, target, delta, maps)
    }

    pub fn identity(x: &CubicalDiagram) -> Self {
        let maps = x
            .vertex_complexes()
            .iter()
            .map(ChainMap::identity)
            .collect();
        DiagramMorphism::vertexwise(x.clone(), x.clone(), maps).expect("identity morphism")
    }

    /// Restriction of `x` to the face picked out by `delta`, with identity maps.
    pub fn restriction(x: &CubicalDiagram, delta: Vec<usize>, target_n: usize) -> Result<Self> {
        let idx = crate::cube::CubeIndex::new(target_n, x.index().augmented())?;
        if delta.len() != idx.width() {
            return Err(Error::invalid("delta", "length does not match the target cube"));
        }
        let embed = |b: CubeVertex| embed_vertex(&delta, b, x.index().width());
        let y = CubicalDiagram::from_fn(
            idx,
            |b| x.vertex(embed(b)).clone(),
            |b, k| x.edge(embed(b), delta[k]).clone(),
        )?;
        let maps = idx
            .vertices()
            .into_iter()
            .map(|b| ChainMap::identity(y.vertex(b)))
            .collect();
        DiagramMorphism::new(x.clone(), y, delta, maps)
    }

    pub fn source(&self) -> &CubicalDiagram {
        &self.source
    }

    pub fn target(&self) -> &CubicalDiagram {
        &self.target
    }

    pub fn delta_vertex(&self, b: CubeVertex) -> CubeVertex {
        embed_vertex(&self.delta, b, self.source.index().width())
    }

    pub fn map(&self, b: CubeVertex) -> &ChainMap {
        &self.maps[self.target.index().position(b).expect("target vertex")]
    }

    /// `s(X) -> s(Y)`: project onto the summands in the image of `δ`, then apply the
    /// vertex maps.
    pub fn simple_map(&self) -> Result<ChainMap> {
        let sx = simple(&self.source)?;
        let sy = simple(&self.target)?;
        let src = summands(&self.source);
        let tgt = summands(&self.target);
        let si = self.source.index();
        let blocks: Vec<Block> = self
            .target
            .index()
            .vertices()
            .into_iter()
            .enumerate()
            .map(|(j, b)| Block {
                from: si.position(self.delta_vertex(b)).unwrap(),
                to: j,
                sign: 1,
                map: Some(&self.maps[j]),
            })
            .collect();
        signed_block_map(&sx, &src, &sy, &tgt, &blocks)
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &DiagramMorphism) -> Result<DiagramMorphism> {
        if next.source != self.target {
            return Err(Error::Dimension("morphisms are not composable".into()));
        }
        let delta: Vec<usize> = next.delta.iter().map(|&j| self.delta[j]).collect();
        let maps = next
            .target
            .index()
            .vertices()
            .into_iter()
            .map(|c| next.map(c).compose(self.map(next.delta_vertex(c))))
            .collect::<Result<Vec<_>>>()?;
        DiagramMorphism::new(self.source.clone(), next.target.clone(), delta, maps)
    }
}

fn embed_vertex(delta: &[usize], b: CubeVertex, width: usize) -> CubeVertex {
    let mut bits = 0u32;
    for (j, &t) in delta.iter().enumerate() {
        if b.coord(j) {
            bits |= 1 << t;
        }
    }
    CubeVertex::from_bits(bits, width)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::ZComplex;
    use crate::cube::CubeIndex;
    use crate::diagram::random::{random_diagram, DiagramBounds};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn face_restriction_and_composition() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let idx = CubeIndex::new(2, false).unwrap();
        for _ in 0..10 {
            let x = random_diagram(&mut rng, idx, &DiagramBounds::default());
            let f = DiagramMorphism::restriction(&x, vec![0, 2], 1).unwrap();
            let g = DiagramMorphism::restriction(f.target(), vec![1], 0).unwrap();
            let gf = f.then(&g).unwrap();
            let composed = g.simple_map().unwrap().compose(&f.simple_map().unwrap()).unwrap();
            assert_eq!(gf.simple_map().unwrap(), composed);
        }
    }

    #[test]
    fn decreasing_delta_is_rejected() {
        let idx = CubeIndex::new(1, false).unwrap();
        let x = CubicalDiagram::constant(idx, &ZComplex::concentrated(0, 1));
        let maps = vec![ChainMap::identity(&ZComplex::concentrated(0, 1)); 3];
        assert!(DiagramMorphism::new(x.clone(), x, vec![1, 0], maps).is_err());
    }
}
