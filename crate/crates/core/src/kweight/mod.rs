//! Descent K-theory from cubical hyperresolution documents.
//!
//! Each vertex of a document carries a surrogate complex whose homology in degree `q` stands
//! for `K_q` of the smooth piece; edges carry the pullback maps. `KD(X)` is the simple of that
//! diagram and its weight filtration comes from [`crate::spectral`].

mod blowup;
mod compact;
pub mod corpus;
pub mod generators;
mod square;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::complex::{ChainMap, ChainMapDoc, ComplexDoc, ZComplex};
use crate::cube::{build_cube, CubeIndex, CubeVertex};
use crate::diagram::{
    augmentation_map, is_acyclic, read_diagram, simple, CubicalDiagram,
    DiagramMorphism,
};
use crate::spectral::FilteredComplex;
use crate::zmod::FgAbGroup;
use crate::{Error, Result};

pub use blowup::{blowup_model, BlowupData, BlowupDoc, BlowupModel, BlowupReport, SesRow};
pub use compact::{
    assemble_compact_support, CompactSupport, CompactSupportDoc, RestrictionDoc,
};
pub use square::{acyclic_square_sequence, SquareSequence, SquareSequenceRow};

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexDoc {
    pub label: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dimension: Option<i64>,
    pub complex: ComplexDoc,
}

/// `G(X)` with its maps to the weight-one vertices, keyed by vertex bits.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AugmentationDoc {
    pub complex: ComplexDoc,
    #[serde(default)]
    pub maps: BTreeMap<String, ChainMapDoc>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HyperresolutionDoc {
    pub name: String,
    pub dimension: i64,
    pub cube: i64,
    pub vertices: BTreeMap<String, VertexDoc>,
    #[serde(default)]
    pub edges: BTreeMap<String, ChainMapDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub augmentation: Option<AugmentationDoc>,
}

/// A validated hyperresolution document.
#[derive(Clone, Debug)]
pub struct Hyperresolution {
    pub name: String,
    /// Dimension of the variety.
    pub dimension: i64,
    pub labels: BTreeMap<CubeVertex, (String, Option<i64>)>,
    pub diagram: CubicalDiagram,
    /// The diagram augmented by `G(X)`, when the document supplies it.
    pub augmented: Option<CubicalDiagram>,
}

impl Hyperresolution {
    pub fn from_doc(doc: &HyperresolutionDoc) -> Result<Self> {
        if doc.dimension < 0 {
            return Err(Error::invalid("dimension", "must be non-negative"));
        }
        let index = build_cube(doc.cube, false).map_err(|e| e.within("cube"))?;
        if doc.cube > doc.dimension.max(0) && doc.cube > 0 {
            return Err(Error::invalid(
                "cube",
                format!("cube dimension {} exceeds the variety dimension {}", doc.cube, doc.dimension),
            ));
        }
        let vertex_docs: BTreeMap<String, &ComplexDoc> =
            doc.vertices.iter().map(|(k, v)| (k.clone(), &v.complex)).collect();
        let diagram = read_diagram(index, &vertex_docs, &doc.edges)?;
        let mut labels = BTreeMap::new();
        for (k, v) in &doc.vertices {
            let vertex: CubeVertex = k.parse().map_err(|e: Error| e.within("vertices"))?;
            labels.insert(vertex, (v.label.clone(), v.dimension));
        }
        let augmented = match &doc.augmentation {
            None => None,
            Some(a) => Some(augment(&diagram, a).map_err(|e| e.within("augmentation"))?),
        };
        Ok(Hyperresolution {
            name: doc.name.clone(),
            dimension: doc.dimension,
            labels,
            diagram,
            augmented,
        })
    }

    /// Document with generic labels for a diagram.
    pub fn from_diagram(name: &str, dimension: i64, diagram: CubicalDiagram) -> Self {
        let labels = diagram
            .index()
            .vertices()
            .into_iter()
            .map(|v| (v, (format!("X_{v}"), None)))
            .collect();
        Hyperresolution {
            name: name.to_string(),
            dimension,
            labels,
            diagram,
            augmented: None,
        }
    }

    pub fn with_augmentation(mut self, augmented: CubicalDiagram) -> Result<Self> {
        if augmented.without_augmentation() != self.diagram {
            return Err(Error::invalid("augmentation", "does not extend the diagram"));
        }
        self.augmented = Some(augmented);
        Ok(self)
    }

    pub fn cube(&self) -> CubeIndex {
        self.diagram.index()
    }

    pub fn to_doc(&self) -> HyperresolutionDoc {
        let d = self.diagram.to_doc();
        let vertices = self
            .cube()
            .vertices()
            .into_iter()
            .map(|v| {
                let (label, dimension) = self.labels.get(&v).cloned().unwrap_or_default();
                (
                    v.to_string(),
                    VertexDoc {
                        label,
                        dimension,
                        complex: self.diagram.vertex(v).to_doc(),
                    },
                )
            })
            .collect();
        let augmentation = self.augmented.as_ref().map(|a| {
            let zero = CubeVertex::zero(a.index().width());
            AugmentationDoc {
                complex: a.augmentation_vertex().to_doc(),
                maps: zero
                    .cofaces()
                    .into_iter()
                    .filter(|c| !a.edge(zero, c.k).is_zero())
                    .map(|c| (c.target.to_string(), a.edge(zero, c.k).to_doc()))
                    .collect(),
            }
        });
        HyperresolutionDoc {
            name: self.name.clone(),
            dimension: self.dimension,
            cube: d.cube,
            vertices,
            edges: d.edges,
            augmentation,
        }
    }
}

fn augment(x: &CubicalDiagram, a: &AugmentationDoc) -> Result<CubicalDiagram> {
    let g = ZComplex::from_doc(&a.complex).map_err(|e| e.within("complex"))?;
    let idx = x.index().with_augmentation(true);
    let zero = CubeVertex::zero(idx.width());
    let mut maps = BTreeMap::new();
    for (key, doc) in &a.maps {
        let v: CubeVertex = key.parse().map_err(|e: Error| e.within(&format!("maps.{key}")))?;
        if !x.index().contains(v) || v.weight() != 1 {
            return Err(Error::invalid(format!("maps.{key}"), "must be a weight-one vertex"));
        }
        let f = ChainMap::from_doc(&g, x.vertex(v), doc).map_err(|e| e.within(&format!("maps.{key}")))?;
        maps.insert(v, f);
    }
    CubicalDiagram::from_fn(
        idx,
        |v| if v.is_zero() { g.clone() } else { x.vertex(v).clone() },
        |s, k| {
            if s.is_zero() {
                let t = zero.with(k, true);
                maps.get(&t).cloned().unwrap_or_else(|| ChainMap::zero(&g, x.vertex(t)))
            } else {
                x.edge(s, k).clone()
            }
        },
    )
}

/// Parses and validates a document from JSON text.
pub fn parse_hyperresolution(text: &str) -> Result<Hyperresolution> {
    let doc: HyperresolutionDoc = serde_json::from_str(text)?;
    Hyperresolution::from_doc(&doc)
}

/// `KD(X) = s(K(X_•))`.
pub fn assemble_kd(h: &Hyperresolution) -> Result<ZComplex> {
    simple(&h.diagram)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeightEntry {
    pub p: i64,
    pub group: FgAbGroup,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KdRow {
    pub n: i64,
    pub group: FgAbGroup,
    /// Nonzero graded pieces `gr_p KD_n`.
    pub weights: Vec<WeightEntry>,
}

#[derive(Clone, Debug, Serialize)]
pub struct KdTable {
    pub name: String,
    pub dimension: i64,
    pub cube: usize,
    pub rows: Vec<KdRow>,
    /// `KD_n = 0` for every `n < -dimension`.
    pub vanishing_below_dimension: bool,
    /// When every vertex complex lives in degrees `>= 0`: `KD_n = 0` for `n < -cube`.
    pub vanishing_below_cube: Option<bool>,
    /// `gr_p KD_n = 0` for `p > cube`.
    pub weight_bound: bool,
    /// `E_∞` agrees with the graded abutment filtration in every degree.
    pub convergence: bool,
}

impl KdTable {
    pub fn row(&self, n: i64) -> Option<&KdRow> {
        self.rows.iter().find(|r| r.n == n)
    }

    pub fn properties_hold(&self) -> bool {
        self.vanishing_below_dimension
            && self.vanishing_below_cube.unwrap_or(true)
            && self.weight_bound
            && self.convergence
    }
}

pub fn kd_groups_and_weights(h: &Hyperresolution, lo: i64, hi: i64) -> Result<KdTable> {
    let f = FilteredComplex::from_diagram(&h.diagram)?;
    let kd = f.complex();
    let n_cube = h.cube().n() as i64;
    let weights_of = |n: i64| -> Vec<WeightEntry> {
        f.abutment_filtration(n)
            .pieces
            .into_iter()
            .filter(|x| !x.graded.is_trivial())
            .map(|x| WeightEntry {
                p: x.p,
                group: x.graded,
            })
            .collect()
    };
    let rows = (lo..=hi)
        .map(|n| KdRow {
            n,
            group: kd.homology(n),
            weights: weights_of(n),
        })
        .collect();
    let (a, b) = kd.homology_range();
    let vanishing_below_dimension = (a..=b).filter(|&n| n < -h.dimension).all(|n| kd.homology(n).is_trivial());
    let nonnegative = h
        .diagram
        .vertex_complexes()
        .iter()
        .all(|c| c.support().map_or(true, |(lo, _)| lo >= 0));
    let vanishing_below_cube = nonnegative
        .then(|| (a..=b).filter(|&n| n < -n_cube).all(|n| kd.homology(n).is_trivial()));
    let weight_bound = (a..=b).all(|n| weights_of(n).iter().all(|w| w.p <= n_cube));
    let convergence = (a..=b).all(|n| f.convergence_certificate(n));
    Ok(KdTable {
        name: h.name.clone(),
        dimension: h.dimension,
        cube: h.cube().n(),
        rows,
        vanishing_below_dimension,
        vanishing_below_cube,
        weight_bound,
        convergence,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeightComparison {
    pub p: i64,
    pub first: FgAbGroup,
    pub second: FgAbGroup,
    pub isomorphic: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComparisonRow {
    pub n: i64,
    pub first: FgAbGroup,
    pub second: FgAbGroup,
    pub isomorphic: bool,
    pub weights: Vec<WeightComparison>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ComparisonReport {
    pub first: String,
    pub second: String,
    pub rows: Vec<ComparisonRow>,
    pub all_isomorphic: bool,
    /// `(n, p)` spots that differ; `p` is absent when the groups themselves differ.
    pub mismatches: Vec<(i64, Option<i64>)>,
}

/// KD groups and weight graded pieces of two documents, compared by normal forms.
pub fn compare_hyperresolutions(
    h1: &Hyperresolution,
    h2: &Hyperresolution,
    lo: i64,
    hi: i64,
) -> Result<ComparisonReport> {
    let f1 = FilteredComplex::from_diagram(&h1.diagram)?;
    let f2 = FilteredComplex::from_diagram(&h2.diagram)?;
    let max_p = (h1.cube().n().max(h2.cube().n()) + 1) as i64;
    let mut rows = Vec::new();
    let mut mismatches = Vec::new();
    for n in lo..=hi {
        let (g1, g2) = (f1.complex().homology(n), f2.complex().homology(n));
        if g1 != g2 {
            mismatches.push((n, None));
        }
        let (w1, w2) = (f1.abutment_filtration(n), f2.abutment_filtration(n));
        let weights: Vec<WeightComparison> = (0..=max_p)
            .map(|p| {
                let (a, b) = (w1.graded(p), w2.graded(p));
                WeightComparison {
                    p,
                    isomorphic: a == b,
                    first: a,
                    second: b,
                }
            })
            .filter(|w| !(w.first.is_trivial() && w.second.is_trivial()))
            .collect();
        for w in &weights {
            if !w.isomorphic {
                mismatches.push((n, Some(w.p)));
            }
        }
        rows.push(ComparisonRow {
            n,
            isomorphic: g1 == g2,
            first: g1,
            second: g2,
            weights,
        });
    }
    Ok(ComparisonReport {
        first: h1.name.clone(),
        second: h2.name.clone(),
        all_isomorphic: mismatches.is_empty(),
        rows,
        mismatches,
    })
}

/// Adds a redundant last coordinate duplicating coordinate 0: the new diagram is the
/// pullback along `(a_0, ..., a_n, c) ↦ (a_0 ∨ c, a_1, ..., a_n)`, so the face spanned by
/// coordinates 0 and `n+1` is linked by identities.
pub fn inflate_identity_face(h: &Hyperresolution) -> Result<Hyperresolution> {
    let x = &h.diagram;
    let n = x.index().n();
    let idx = CubeIndex::new(n + 1, false)?;
    let sigma = |v: CubeVertex| {
        let c = v.coord(n + 1);
        v.truncate_last().with(0, v.coord(0) || c)
    };
    let y = CubicalDiagram::from_fn(
        idx,
        |v| x.vertex(sigma(v)).clone(),
        |a, k| {
            let (s, t) = (sigma(a), sigma(a.with(k, true)));
            if s == t {
                ChainMap::identity(x.vertex(s))
            } else {
                x.path(s, t)
            }
        },
    )?;
    let labels = idx
        .vertices()
        .into_iter()
        .map(|v| (v, h.labels.get(&sigma(v)).cloned().unwrap_or_default()))
        .collect();
    Ok(Hyperresolution {
        name: format!("{} (inflated)", h.name),
        dimension: h.dimension.max(n as i64 + 1),
        labels,
        diagram: y,
        augmented: None,
    })
}

/// Vertexwise direct sum of two documents on the same cube.
pub fn disjoint_union(a: &Hyperresolution, b: &Hyperresolution) -> Result<Hyperresolution> {
    let diagram = a.diagram.direct_sum(&b.diagram)?;
    let labels = a
        .labels
        .iter()
        .map(|(v, (l, d))| {
            let (l2, d2) = b.labels.get(v).cloned().unwrap_or_default();
            let dim = match (d, d2) {
                (Some(x), Some(y)) => Some((*x).max(y)),
                (x, y) => x.or(y),
            };
            (*v, (format!("{l} ⊔ {l2}"), dim))
        })
        .collect();
    Ok(Hyperresolution {
        name: format!("{} ⊔ {}", a.name, b.name),
        dimension: a.dimension.max(b.dimension),
        labels,
        diagram,
        augmented: None,
    })
}

/// `G(X) -> KD(X)` for a document carrying `G(X)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AugmentationReport {
    pub acyclic: bool,
    pub quasi_isomorphism: bool,
    /// A quasi-isomorphism whenever the augmented diagram is acyclic.
    pub consistent: bool,
}

pub fn augmentation_comparison(h: &Hyperresolution) -> Result<Option<AugmentationReport>> {
    let Some(a) = &h.augmented else {
        return Ok(None);
    };
    let acyclic = is_acyclic(a)?;
    let quasi_isomorphism = augmentation_map(a)?.is_quasi_iso();
    Ok(Some(AugmentationReport {
        acyclic,
        quasi_isomorphism,
        consistent: !acyclic || quasi_isomorphism,
    }))
}

/// Inputs of a Mayer–Vietoris check: four diagrams on one cube and vertexwise restrictions
/// `X -> U`, `X -> V`, `U -> W`, `V -> W` with `W` standing for `U ∩ V`.
#[derive(Clone, Debug)]
pub struct Cover {
    pub x: CubicalDiagram,
    pub u: CubicalDiagram,
    pub v: CubicalDiagram,
    pub w: CubicalDiagram,
    pub xu: Vec<ChainMap>,
    pub xv: Vec<ChainMap>,
    pub uw: Vec<ChainMap>,
    pub vw: Vec<ChainMap>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MayerVietorisReport {
    /// Every vertex square `X_α, U_α, V_α, W_α` is acyclic.
    pub vertex_squares_acyclic: bool,
    /// The square `KD(X), KD(U), KD(V), KD(W)` is acyclic.
    pub kd_square_acyclic: bool,
}

pub fn mayer_vietoris(c: &Cover) -> Result<MayerVietorisReport> {
    let idx = c.x.index();
    let sq = CubeIndex::new(1, true)?;
    let square = |o: &ZComplex, a: &ZComplex, b: &ZComplex, t: &ZComplex, maps: [&ChainMap; 4]| {
        CubicalDiagram::from_fn(
            sq,
            |v| match v.bits() {
                0 => o.clone(),
                1 => a.clone(),
                2 => b.clone(),
                _ => t.clone(),
            },
            |s, k| match (s.bits(), k) {
                (0, 0) => maps[0].clone(),
                (0, _) => maps[1].clone(),
                (1, _) => maps[2].clone(),
                _ => maps[3].clone(),
            },
        )
    };
    let mut vertex_squares_acyclic = true;
    for (i, v) in idx.vertices().into_iter().enumerate() {
        let s = square(
            c.x.vertex(v),
            c.u.vertex(v),
            c.v.vertex(v),
            c.w.vertex(v),
            [&c.xu[i], &c.xv[i], &c.uw[i], &c.vw[i]],
        )
        .map_err(|e| e.within(&format!("vertex {v}")))?;
        vertex_squares_acyclic &= is_acyclic(&s)?;
    }
    let sm = |s: &CubicalDiagram, t: &CubicalDiagram, maps: &[ChainMap]| {
        DiagramMorphism::vertexwise(s.clone(), t.clone(), maps.to_vec())?.simple_map()
    };
    let (xu, xv) = (sm(&c.x, &c.u, &c.xu)?, sm(&c.x, &c.v, &c.xv)?);
    let (uw, vw) = (sm(&c.u, &c.w, &c.uw)?, sm(&c.v, &c.w, &c.vw)?);
    let kd = square(
        xu.source(),
        xu.target(),
        xv.target(),
        uw.target(),
        [&xu, &xv, &uw, &vw],
    )?;
    Ok(MayerVietorisReport {
        vertex_squares_acyclic,
        kd_square_acyclic: is_acyclic(&kd)?,
    })
}

/// Reads a restriction between two diagrams: maps keyed by target vertex, missing ones zero.
pub(crate) fn read_restriction(
    source: &CubicalDiagram,
    target: &CubicalDiagram,
    doc: &RestrictionDoc,
) -> Result<DiagramMorphism> {
    let ti = target.index();
    let delta = doc.delta.clone().unwrap_or_else(|| (0..ti.width()).collect());
    if delta.len() != ti.width() || delta.iter().any(|&j| j >= source.index().width()) {
        return Err(Error::invalid("delta", "does not embed the target cube into the source cube"));
    }
    let lift = |b: CubeVertex| {
        let mut bits = 0u32;
        for (j, &d) in delta.iter().enumerate() {
            if b.coord(j) {
                bits |= 1 << d;
            }
        }
        CubeVertex::from_bits(bits, source.index().width())
    };
    for key in doc.maps.keys() {
        let b: CubeVertex = key.parse().map_err(|e: Error| e.within(&format!("maps.{key}")))?;
        if !ti.contains(b) {
            return Err(Error::invalid(format!("maps.{key}"), "not a vertex of the target cube"));
        }
    }
    let maps = ti
        .vertices()
        .into_iter()
        .map(|b| {
            let (s, t) = (source.vertex(lift(b)), target.vertex(b));
            match doc.maps.get(&b.to_string()) {
                Some(m) => ChainMap::from_doc(s, t, m).map_err(|e| e.within(&format!("maps.{b}"))),
                None => Ok(ChainMap::zero(s, t)),
            }
        })
        .collect::<Result<_>>()?;
    DiagramMorphism::new(source.clone(), target.clone(), delta, maps)
}

#[cfg(test)]
mod tests {
    use super::generators::{cusp, nodal, point, projective_space, smooth};
    use super::*;
    use crate::zmod::IntMatrix;

    #[test]
    fn nodal_kd_and_weights() {
        let t = kd_groups_and_weights(&nodal(), -2, 1).unwrap();
        assert_eq!(t.row(0).unwrap().group, FgAbGroup::free(2));
        assert_eq!(t.row(-1).unwrap().group, FgAbGroup::free(1));
        assert!(t.row(-2).unwrap().group.is_trivial());
        assert_eq!(
            t.row(-1).unwrap().weights,
            vec![WeightEntry {
                p: 1,
                group: FgAbGroup::free(1)
            }]
        );
        assert_eq!(
            t.row(0).unwrap().weights,
            vec![WeightEntry {
                p: 0,
                group: FgAbGroup::free(2)
            }]
        );
        assert!(t.properties_hold());
    }

    #[test]
    fn cusp_kd() {
        let kd = assemble_kd(&cusp()).unwrap();
        assert_eq!(kd.homology(0), FgAbGroup::free(2));
        assert!(kd.homology(-1).is_trivial());
    }

    #[test]
    fn smooth_weights_are_trivial() {
        let h = smooth("P2", 2, &projective_space(2));
        let t = kd_groups_and_weights(&h, -1, 1).unwrap();
        assert_eq!(t.row(0).unwrap().group, FgAbGroup::free(3));
        assert!(t.rows.iter().all(|r| r.weights.iter().all(|w| w.p == 0)));
    }

    #[test]
    fn disjoint_union_adds_groups() {
        let pt = generators::constant_cube("pt", 0, &point(), 1);
        let u = disjoint_union(&nodal(), &pt).unwrap();
        let kd = assemble_kd(&u).unwrap();
        assert_eq!(kd.homology(0), FgAbGroup::free(3));
        assert_eq!(kd.homology(-1), FgAbGroup::free(1));
    }

    #[test]
    fn inflated_nodal_is_indistinguishable() {
        let h = nodal();
        let big = inflate_identity_face(&h).unwrap();
        assert_eq!(big.cube().n(), 2);
        let r = compare_hyperresolutions(&h, &big, -2, 1).unwrap();
        assert!(r.all_isomorphic, "{:?}", r.mismatches);
        let same = compare_hyperresolutions(&h, &h, -2, 1).unwrap();
        assert!(same.all_isomorphic);
        let other = compare_hyperresolutions(&h, &cusp(), -2, 1).unwrap();
        assert!(other.mismatches.contains(&(-1, None)));
    }

    #[test]
    fn doc_round_trip_keeps_labels() {
        let h = nodal();
        let json = serde_json::to_string(&h.to_doc()).unwrap();
        let back = parse_hyperresolution(&json).unwrap();
        assert_eq!(back.diagram, h.diagram);
        assert_eq!(back.labels, h.labels);
    }

    #[test]
    fn oversized_cube_is_rejected() {
        let mut doc = nodal().to_doc();
        doc.dimension = 0;
        let err = Hyperresolution::from_doc(&doc).unwrap_err();
        assert!(err.to_string().contains("cube"), "{err}");
    }

    #[test]
    fn identity_cover_satisfies_mayer_vietoris() {
        let x = nodal().diagram;
        let ids: Vec<ChainMap> = x.vertex_complexes().iter().map(ChainMap::identity).collect();
        let c = Cover {
            x: x.clone(),
            u: x.clone(),
            v: x.clone(),
            w: x.clone(),
            xu: ids.clone(),
            xv: ids.clone(),
            uw: ids.clone(),
            vw: ids,
        };
        let r = mayer_vietoris(&c).unwrap();
        assert!(r.vertex_squares_acyclic && r.kd_square_acyclic);
    }

    #[test]
    fn augmentation_of_nodal_by_its_kd_groups() {
        // G(X) = Z² in degree 0 mapping diagonally: not acyclic, since KD_{-1} = Z is missed
        let h = nodal();
        let g = ZComplex::concentrated(0, 2);
        let idx = h.cube().with_augmentation(true);
        let aug = CubicalDiagram::from_fn(
            idx,
            |v| if v.is_zero() { g.clone() } else { h.diagram.vertex(v).clone() },
            |a, k| {
                if a.is_zero() {
                    let t = a.with(k, true);
                    let m = if k == 0 {
                        IntMatrix::identity(2)
                    } else {
                        IntMatrix::from_i64(&[&[1, 0]])
                    };
                    let (s, t) = (&g, h.diagram.vertex(t));
                    ChainMap::from_fn(s, t, |d| if d == 0 { m.clone() } else { IntMatrix::zeros(t.rank(d), s.rank(d)) }).unwrap()
                } else {
                    h.diagram.edge(a, k).clone()
                }
            },
        );
        // the restriction to Ỹ differs along the two paths, so this is rejected
        assert!(aug.is_err());
    }

    /// Projection of `A ⊕ B ⊕ C` onto the summands flagged in `keep`.
    fn projection(parts: [&ZComplex; 3], keep: [bool; 3]) -> ChainMap {
        let src = ZComplex::direct_sum_all(&parts);
        let kept: Vec<&ZComplex> = parts.iter().zip(keep).filter(|(_, k)| *k).map(|(c, _)| *c).collect();
        let tgt = ZComplex::direct_sum_all(&kept);
        ChainMap::from_fn(&src, &tgt, |m| {
            let blocks: Vec<IntMatrix> = parts
                .iter()
                .zip(keep)
                .map(|(c, k)| if k { IntMatrix::identity(c.rank(m)) } else { IntMatrix::zeros(0, c.rank(m)) })
                .collect();
            IntMatrix::block_diag(&blocks)
        })
        .unwrap()
    }

    #[test]
    fn split_cover_satisfies_mayer_vietoris() {
        use crate::diagram::random::{random_diagram, DiagramBounds};
        use rand::SeedableRng;
        let (a, b) = (nodal().diagram, cusp().diagram);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let c = random_diagram(&mut rng, a.index(), &DiagramBounds::default());
        let x = a.direct_sum(&b).unwrap().direct_sum(&c).unwrap();
        let u = a.direct_sum(&c).unwrap();
        let v = b.direct_sum(&c).unwrap();
        let w = c.clone();
        let maps = |keep_from: [bool; 3], keep_to: [bool; 3]| -> Vec<ChainMap> {
            a.index()
                .vertices()
                .into_iter()
                .map(|q| {
                    let parts = [a.vertex(q), b.vertex(q), c.vertex(q)];
                    let sub: Vec<&ZComplex> = parts.iter().zip(keep_from).filter(|(_, k)| *k).map(|(c, _)| *c).collect();
                    if keep_from == [true; 3] {
                        projection(parts, keep_to)
                    } else {
                        // from a two-summand vertex down to C
                        projection([sub[0], &ZComplex::zero(), sub[1]], [false, false, true])
                    }
                })
                .collect()
        };
        let cover = Cover {
            xu: maps([true; 3], [true, false, true]),
            xv: maps([true; 3], [false, true, true]),
            uw: maps([true, false, true], [false, false, true]),
            vw: maps([false, true, true], [false, false, true]),
            x,
            u,
            v,
            w,
        };
        let r = mayer_vietoris(&cover).unwrap();
        assert!(r.vertex_squares_acyclic && r.kd_square_acyclic);
    }

    #[test]
    fn augmentation_by_an_acyclic_square_is_a_quasi_isomorphism() {
        let m = blowup_model(&generators::projective_blowup(2, 0)).unwrap();
        let h = Hyperresolution::from_diagram("P2 at a point", 2, m.front.without_augmentation())
            .with_augmentation(m.front.clone())
            .unwrap();
        let r = augmentation_comparison(&h).unwrap().unwrap();
        assert!(r.acyclic && r.quasi_isomorphism && r.consistent);
        let json = serde_json::to_string(&h.to_doc()).unwrap();
        let back = parse_hyperresolution(&json).unwrap();
        assert_eq!(back.augmented.as_ref(), Some(&m.front));
        let s = acyclic_square_sequence(&h).unwrap();
        assert!(s.exact && s.rows.iter().all(|r| r.delta_zero));
    }
}
