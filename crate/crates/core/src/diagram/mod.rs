//! Cubical diagrams of complexes and their simple (total) complexes.

mod axioms;
mod morphism;
mod product;
pub mod random;
mod simple;
mod total;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::complex::{ChainMap, ChainMapDoc, ComplexDoc, ZComplex};
use crate::cube::{build_cube, CubeIndex, CubeVertex};
use crate::{Error, Result};

pub use axioms::{verify_descent_axioms, AxiomBounds, AxiomCheck, AxiomReport};
pub use morphism::DiagramMorphism;
pub use product::{factorisation_map, transposition_map, ProductDiagram};
pub use simple::{
    augmentation_map, is_acyclic, simple, simple_augmented, simple_augmented_iterated,
    SimpleLayout,
};

/// Complexes on the vertices of a cube and chain maps on its edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CubicalDiagram {
    index: CubeIndex,
    vertices: Vec<ZComplex>,
    /// Keyed by source vertex and flipped coordinate.
    edges: BTreeMap<(CubeVertex, usize), ChainMap>,
}

impl CubicalDiagram {
    /// Builds and validates a diagram. `vertices` follows the index order; edges that are
    /// not supplied are zero maps.
    pub fn new(
        index: CubeIndex,
        vertices: Vec<ZComplex>,
        mut edges: BTreeMap<(CubeVertex, usize), ChainMap>,
    ) -> Result<Self> {
        if vertices.len() != index.vertex_count() {
            return Err(Error::invalid(
                "vertices",
                format!(
                    "expected {} vertices, found {}",
                    index.vertex_count(),
                    vertices.len()
                ),
            ));
        }
        for (a, c) in index.edges() {
            let src = &vertices[index.position(a).unwrap()];
            let tgt = &vertices[index.position(c.target).unwrap()];
            match edges.get(&(a, c.k)) {
                Some(f) => {
                    if f.source() != src || f.target() != tgt {
                        return Err(Error::invalid(
                            format!("edges.{a}->{}", c.target),
                            "edge map does not match its vertex complexes",
                        ));
                    }
                }
                None => {
                    edges.insert((a, c.k), ChainMap::zero(src, tgt));
                }
            }
        }
        if edges.len() != index.edges().len() {
            let stray = edges
                .keys()
                .find(|(a, k)| !index.contains(*a) || a.coord(*k))
                .map(|(a, k)| format!("{a} flip {k}"))
                .unwrap_or_default();
            return Err(Error::invalid(
                format!("edges.{stray}"),
                "edge is not an edge of the cube",
            ));
        }
        let d = CubicalDiagram {
            index,
            vertices,
            edges,
        };
        d.check_faces()?;
        Ok(d)
    }

    /// Builds from callbacks; convenient for generated diagrams.
    pub fn from_fn(
        index: CubeIndex,
        vertex: impl Fn(CubeVertex) -> ZComplex,
        edge: impl Fn(CubeVertex, usize) -> ChainMap,
    ) -> Result<Self> {
        let vertices = index.vertices().into_iter().map(&vertex).collect();
        let edges = index
            .edges()
            .into_iter()
            .map(|(a, c)| ((a, c.k), edge(a, c.k)))
            .collect();
        CubicalDiagram::new(index, vertices, edges)
    }

    fn check_faces(&self) -> Result<()> {
        for a in self.index.vertices() {
            for k in 0..a.len() {
                for l in k + 1..a.len() {
                    if a.coord(k) || a.coord(l) {
                        continue;
                    }
                    let ak = a.with(k, true);
                    let al = a.with(l, true);
                    let top = ak.with(l, true);
                    let via_k = self.edge(ak, l).compose(self.edge(a, k))?;
                    let via_l = self.edge(al, k).compose(self.edge(a, l))?;
                    if via_k != via_l {
                        return Err(Error::invalid(
                            format!("face {a}->{top}"),
                            format!("paths through {ak} and {al} differ"),
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn index(&self) -> CubeIndex {
        self.index
    }

    pub fn vertex(&self, v: CubeVertex) -> &ZComplex {
        &self.vertices[self.index.position(v).expect("vertex of the cube")]
    }

    pub fn vertex_complexes(&self) -> &[ZComplex] {
        &self.vertices
    }

    /// Edge map `X(α -> α + e_k)`.
    pub fn edge(&self, a: CubeVertex, k: usize) -> &ChainMap {
        &self.edges[&(a, k)]
    }

    /// Composite `X(α -> β)` along any monotone path (all agree because faces commute).
    pub fn path(&self, a: CubeVertex, b: CubeVertex) -> ChainMap {
        assert!(a.le(b));
        let mut f = ChainMap::identity(self.vertex(a));
        let mut cur = a;
        for k in 0..a.len() {
            if b.coord(k) && !a.coord(k) {
                f = self.edge(cur, k).compose(&f).expect("composable path");
                cur = cur.with(k, true);
            }
        }
        f
    }

    /// The diagram over `□_n` obtained by dropping the augmentation vertex.
    pub fn without_augmentation(&self) -> CubicalDiagram {
        assert!(self.index.augmented());
        let idx = self.index.with_augmentation(false);
        CubicalDiagram::from_fn(
            idx,
            |v| self.vertex(v).clone(),
            |a, k| self.edge(a, k).clone(),
        )
        .expect("restriction of a valid diagram")
    }

    /// `X_0` of an augmented diagram.
    pub fn augmentation_vertex(&self) -> &ZComplex {
        assert!(self.index.augmented());
        self.vertex(CubeVertex::zero(self.index.width()))
    }

    /// Vertexwise direct sum of two diagrams on the same cube.
    pub fn direct_sum(&self, other: &CubicalDiagram) -> Result<CubicalDiagram> {
        if self.index != other.index {
            return Err(Error::Dimension("direct sum of diagrams on different cubes".into()));
        }
        CubicalDiagram::from_fn(
            self.index,
            |v| self.vertex(v).direct_sum(other.vertex(v)),
            |a, k| self.edge(a, k).direct_sum(other.edge(a, k)),
        )
    }

    /// Constant diagram with identity edges.
    pub fn constant(index: CubeIndex, c: &ZComplex) -> CubicalDiagram {
        CubicalDiagram::from_fn(index, |_| c.clone(), |_, _| ChainMap::identity(c))
            .expect("constant diagram")
    }

    /// Diagram of zero complexes.
    pub fn zero(index: CubeIndex) -> CubicalDiagram {
        CubicalDiagram::constant(index, &ZComplex::zero())
    }

    pub fn to_doc(&self) -> DiagramDoc {
        DiagramDoc {
            cube: self.index.n() as i64,
            augmented: self.index.augmented(),
            vertices: self
                .index
                .vertices()
                .into_iter()
                .map(|v| (v.to_string(), self.vertex(v).to_doc()))
                .collect(),
            edges: self
                .index
                .edges()
                .into_iter()
                .filter(|(a, c)| !self.edge(*a, c.k).is_zero())
                .map(|(a, c)| (format!("{a}->{}", c.target), self.edge(a, c.k).to_doc()))
                .collect(),
        }
    }

    pub fn from_doc(doc: &DiagramDoc) -> Result<Self> {
        let index = build_cube(doc.cube, doc.augmented)?;
        let vertex_docs: BTreeMap<String, &ComplexDoc> =
            doc.vertices.iter().map(|(k, v)| (k.clone(), v)).collect();
        read_diagram(index, &vertex_docs, &doc.edges)
    }
}

/// Parses an edge key `"<bits>-><bits>"` into source vertex and flipped coordinate.
pub(crate) fn parse_edge_key(key: &str, index: CubeIndex) -> Result<(CubeVertex, usize)> {
    let loc = format!("edges.{key}");
    let (a, b) = key
        .split_once("->")
        .ok_or_else(|| Error::invalid(&loc, "edge key must look like 10->11"))?;
    let a: CubeVertex = a.trim().parse().map_err(|e: Error| e.within(&loc))?;
    let b: CubeVertex = b.trim().parse().map_err(|e: Error| e.within(&loc))?;
    if !index.contains(a) || !index.contains(b) {
        return Err(Error::invalid(loc, "endpoint is not a vertex of the cube"));
    }
    let diff = b.bits() ^ a.bits();
    if !a.le(b) || diff.count_ones() != 1 {
        return Err(Error::invalid(loc, "endpoints must differ in exactly one coordinate, upward"));
    }
    Ok((a, diff.trailing_zeros() as usize))
}

pub(crate) fn read_diagram(
    index: CubeIndex,
    vertex_docs: &BTreeMap<String, &ComplexDoc>,
    edge_docs: &BTreeMap<String, ChainMapDoc>,
) -> Result<CubicalDiagram> {
    let mut vertices = Vec::new();
    for v in index.vertices() {
        let key = v.to_string();
        let doc = vertex_docs
            .get(&key)
            .ok_or_else(|| Error::invalid(format!("vertices.{key}"), "missing vertex"))?;
        vertices.push(ZComplex::from_doc(doc).map_err(|e| e.within(&format!("vertices.{key}")))?);
    }
    for key in vertex_docs.keys() {
        let v: CubeVertex = key
            .parse()
            .map_err(|e: Error| e.within("vertices"))?;
        if !index.contains(v) {
            return Err(Error::invalid(
                format!("vertices.{key}"),
                "not a vertex of the cube",
            ));
        }
    }
    let mut edges = BTreeMap::new();
    for (key, doc) in edge_docs {
        let (a, k) = parse_edge_key(key, index)?;
        let src = &vertices[index.position(a).unwrap()];
        let tgt = &vertices[index.position(a.with(k, true)).unwrap()];
        let f = ChainMap::from_doc(src, tgt, doc).map_err(|e| e.within(&format!("edges.{key}")))?;
        edges.insert((a, k), f);
    }
    CubicalDiagram::new(index, vertices, edges)
}

/// Serialized diagram.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagramDoc {
    pub cube: i64,
    #[serde(default)]
    pub augmented: bool,
    pub vertices: BTreeMap<String, ComplexDoc>,
    #[serde(default)]
    pub edges: BTreeMap<String, ChainMapDoc>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zmod::IntMatrix;

    fn z() -> ZComplex {
        ZComplex::concentrated(0, 1)
    }

    fn scalar(c: i64) -> ChainMap {
        ChainMap::from_fn(&z(), &z(), |_| IntMatrix::from_i64(&[&[c]])).unwrap()
    }

    #[test]
    fn non_commuting_face_is_rejected_with_location() {
        let idx = CubeIndex::new(1, true).unwrap();
        let err = CubicalDiagram::from_fn(
            idx,
            |_| z(),
            |a, _| {
                if a.is_zero() {
                    ChainMap::identity(&z())
                } else if a.coord(0) {
                    scalar(2)
                } else {
                    ChainMap::identity(&z())
                }
            },
        )
        .unwrap_err();
        assert!(err.to_string().contains("face 00->11"), "{err}");
    }

    #[test]
    fn doc_round_trip() {
        let idx = CubeIndex::new(1, false).unwrap();
        let d = CubicalDiagram::constant(idx, &z());
        let doc = d.to_doc();
        let json = serde_json::to_string(&doc).unwrap();
        let back: DiagramDoc = serde_json::from_str(&json).unwrap();
        assert_eq!(CubicalDiagram::from_doc(&back).unwrap(), d);
    }

    #[test]
    fn bad_edge_keys() {
        let idx = CubeIndex::new(1, false).unwrap();
        assert!(parse_edge_key("10->01", idx).is_err());
        assert!(parse_edge_key("10-11", idx).is_err());
        assert_eq!(parse_edge_key("10->11", idx).unwrap().1, 1);
    }
}
