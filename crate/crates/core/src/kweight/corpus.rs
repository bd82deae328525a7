//! Built-in example documents and the square corpus for the (F2) criterion.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use crate::complex::{ChainMap, ZComplex};
use crate::cube::{CubeIndex, CubeVertex};
use crate::diagram::random::{conjugate_diagram, random_complex, DiagramBounds};
use crate::diagram::{CubicalDiagram, DiagramDoc};
use crate::{Error, Result};

use super::generators::projective_blowup;
use super::{
    blowup_model, BlowupData, BlowupDoc, CompactSupportDoc, Hyperresolution, HyperresolutionDoc,
};

/// `(name, file contents)` of every shipped document.
pub const DOCUMENTS: &[(&str, &str)] = &[
    ("nodal", include_str!("../../corpus/nodal.json")),
    ("cusp", include_str!("../../corpus/cusp.json")),
    ("nodal_inflated", include_str!("../../corpus/nodal_inflated.json")),
    ("smooth_p2", include_str!("../../corpus/smooth_p2.json")),
    ("disjoint", include_str!("../../corpus/disjoint.json")),
    ("blowup_p2_point", include_str!("../../corpus/blowup_p2_point.json")),
    ("blowup_p3_line", include_str!("../../corpus/blowup_p3_line.json")),
    ("compact_a1", include_str!("../../corpus/compact_a1.json")),
    ("compact_two_points", include_str!("../../corpus/compact_two_points.json")),
    ("compact_empty", include_str!("../../corpus/compact_empty.json")),
    ("bad", include_str!("../../corpus/bad.json")),
];

/// Text of a built-in document; the `.json` suffix is optional.
pub fn builtin(name: &str) -> Option<&'static str> {
    let key = name.strip_suffix(".json").unwrap_or(name);
    DOCUMENTS.iter().find(|(n, _)| *n == key).map(|(_, t)| *t)
}

/// A parsed document of any supported kind.
#[derive(Clone, Debug)]
pub enum Document {
    Diagram(CubicalDiagram),
    Hyperresolution(Hyperresolution),
    Blowup(BlowupData),
    Compact(CompactSupportDoc),
}

impl Document {
    pub fn kind(&self) -> &'static str {
        match self {
            Document::Diagram(_) => "diagram",
            Document::Hyperresolution(_) => "hyperresolution",
            Document::Blowup(_) => "blowup",
            Document::Compact(_) => "compact-support",
        }
    }

    /// Plain diagrams whose filtered simples this document gives rise to.
    pub fn diagrams(&self) -> Result<Vec<CubicalDiagram>> {
        Ok(match self {
            Document::Diagram(x) if x.index().augmented() => vec![x.without_augmentation()],
            Document::Diagram(x) => vec![x.clone()],
            Document::Hyperresolution(h) => vec![h.diagram.clone()],
            Document::Blowup(b) => {
                let m = blowup_model(b)?;
                vec![m.front.without_augmentation(), m.cube.without_augmentation()]
            }
            Document::Compact(c) => vec![
                Hyperresolution::from_doc(&c.compactification)?.diagram,
                Hyperresolution::from_doc(&c.boundary)?.diagram,
            ],
        })
    }
}

/// Detects the document kind from its top-level keys and validates it.
pub fn parse_document(text: &str) -> Result<Document> {
    let value: Value = serde_json::from_str(text)?;
    let obj = value
        .as_object()
        .ok_or_else(|| Error::invalid("$", "expected a JSON object"))?;
    if obj.contains_key("compactification") {
        let doc: CompactSupportDoc = serde_json::from_value(value)?;
        Hyperresolution::from_doc(&doc.compactification).map_err(|e| e.within("compactification"))?;
        Hyperresolution::from_doc(&doc.boundary).map_err(|e| e.within("boundary"))?;
        doc.assemble()?;
        Ok(Document::Compact(doc))
    } else if obj.contains_key("L") {
        let doc: BlowupDoc = serde_json::from_value(value)?;
        let b = BlowupData::from_doc(&doc)?;
        blowup_model(&b)?;
        Ok(Document::Blowup(b))
    } else if obj.contains_key("dimension") {
        let doc: HyperresolutionDoc = serde_json::from_value(value)?;
        Ok(Document::Hyperresolution(Hyperresolution::from_doc(&doc)?))
    } else {
        let doc: DiagramDoc = serde_json::from_value(value)?;
        Ok(Document::Diagram(CubicalDiagram::from_doc(&doc)?))
    }
}

fn vertex(s: &str) -> CubeVertex {
    s.parse().expect("vertex")
}

/// Augmented square from its four complexes and four edge maps.
fn square(
    o: &ZComplex,
    a: &ZComplex,
    b: &ZComplex,
    t: &ZComplex,
    [oa, ob, at, bt]: [ChainMap; 4],
) -> Result<CubicalDiagram> {
    let idx = CubeIndex::new(1, true)?;
    CubicalDiagram::from_fn(
        idx,
        |v| match v.bits() {
            0 => o.clone(),
            1 => a.clone(),
            2 => b.clone(),
            _ => t.clone(),
        },
        |s, k| match (s.bits(), k) {
            (0, 0) => oa.clone(),
            (0, _) => ob.clone(),
            (1, _) => at.clone(),
            _ => bt.clone(),
        },
    )
}

fn scaled(f: &ChainMap, c: i64) -> ChainMap {
    ChainMap::from_fn(f.source(), f.target(), |m| f.component(m).scale(&c.into()))
        .expect("multiple of a chain map")
}

/// Replaces the augmentation vertex by `X ⊕ X` mapping through both summands.
fn doubled(x: &CubicalDiagram) -> Result<CubicalDiagram> {
    let o = x.vertex(vertex("00"));
    let oo = o.direct_sum(o);
    let twice = |f: &ChainMap| {
        ChainMap::from_fn(&oo, f.target(), |m| f.component(m).hstack(&f.component(m)))
            .expect("codiagonal")
    };
    square(
        &oo,
        x.vertex(vertex("10")),
        x.vertex(vertex("01")),
        x.vertex(vertex("11")),
        [
            twice(x.edge(vertex("00"), 0)),
            twice(x.edge(vertex("00"), 1)),
            x.edge(vertex("10"), 1).clone(),
            x.edge(vertex("01"), 0).clone(),
        ],
    )
}

/// The augmentation maps replaced by zero.
fn detached(x: &CubicalDiagram) -> Result<CubicalDiagram> {
    let o = x.vertex(vertex("00"));
    let (a, b) = (x.vertex(vertex("10")), x.vertex(vertex("01")));
    square(
        o,
        a,
        b,
        x.vertex(vertex("11")),
        [
            ChainMap::zero(o, a),
            ChainMap::zero(o, b),
            x.edge(vertex("10"), 1).clone(),
            x.edge(vertex("01"), 0).clone(),
        ],
    )
}

/// The augmentation maps multiplied by 2.
fn doubled_augmentation(x: &CubicalDiagram) -> Result<CubicalDiagram> {
    square(
        x.vertex(vertex("00")),
        x.vertex(vertex("10")),
        x.vertex(vertex("01")),
        x.vertex(vertex("11")),
        [
            scaled(x.edge(vertex("00"), 0), 2),
            scaled(x.edge(vertex("00"), 1), 2),
            x.edge(vertex("10"), 1).clone(),
            x.edge(vertex("01"), 0).clone(),
        ],
    )
}

/// Fifty augmented squares: blow-up models, conjugated blow-up models, identity squares and
/// four families of broken squares.
pub fn f2_corpus() -> Vec<(String, CubicalDiagram)> {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let blowups: Vec<(String, CubicalDiagram)> = (1..=4usize)
        .flat_map(|n| (0..n).map(move |k| (n, k)))
        .map(|(n, k)| {
            let b = projective_blowup(n, k);
            (b.name.clone(), blowup_model(&b).expect("projective model").front)
        })
        .collect();
    let mut out = blowups.clone();
    for (name, x) in &blowups {
        out.push((format!("{name}, conjugated"), conjugate_diagram(&mut rng, x).0));
    }
    let bounds = DiagramBounds::default();
    let idx = CubeIndex::new(1, true).expect("square");
    for i in 0..10 {
        let c = random_complex(&mut rng, &bounds);
        out.push((format!("identity square {i}"), CubicalDiagram::constant(idx, &c)));
    }
    let broken: [(&str, fn(&CubicalDiagram) -> Result<CubicalDiagram>); 3] = [
        ("augmentation doubled", doubled_augmentation),
        ("augmentation detached", detached),
        ("augmentation repeated", doubled),
    ];
    for (label, f) in broken {
        for (name, x) in blowups.iter().step_by(2) {
            out.push((format!("{name}, {label}"), f(x).expect("broken square commutes")));
        }
    }
    for i in 0..5 {
        let c = random_complex(&mut rng, &bounds).direct_sum(&ZComplex::concentrated(0, 1));
        let id = ChainMap::identity(&c);
        let x = square(&c, &c, &c, &c, [scaled(&id, 2), scaled(&id, 2), id.clone(), id])
            .expect("scaled constant square");
        out.push((format!("doubled constant square {i}"), x));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kweight::generators::{
        constant_cube, cusp, nodal, point, projective_blowup, projective_space, smooth,
    };
    use crate::kweight::{disjoint_union, inflate_identity_face, RestrictionDoc};
    use crate::json::matrix_to_raw;
    use crate::towers::f2_tower_criterion;
    use crate::zmod::IntMatrix;
    use std::collections::BTreeMap;

    fn compact(name: &str, boundary: Hyperresolution, m: Option<&[&[i64]]>) -> CompactSupportDoc {
        let p1 = smooth("P1", 1, &projective_space(1));
        let maps = m
            .map(|m| {
                BTreeMap::from([(
                    "1".to_string(),
                    BTreeMap::from([(0, matrix_to_raw(&IntMatrix::from_i64(m)))]),
                )])
            })
            .unwrap_or_default();
        CompactSupportDoc {
            name: name.into(),
            compactification: p1.to_doc(),
            boundary: boundary.to_doc(),
            restriction: RestrictionDoc { delta: None, maps },
        }
    }

    fn bad() -> Value {
        let mut doc = serde_json::to_value(nodal().to_doc()).unwrap();
        doc["name"] = "nodal cubic with a non-commuting augmentation".into();
        doc["augmentation"] = serde_json::json!({
            "complex": {"lo": 0, "hi": 0, "ranks": [1]},
            "maps": {"10": {"0": [[1], [1]]}, "01": {"0": [[1]]}}
        });
        doc
    }

    fn to<T: serde::Serialize>(v: &T) -> Value {
        serde_json::to_value(v).unwrap()
    }

    fn generated() -> Vec<(&'static str, Value)> {
        let pt = constant_cube("pt", 0, &point(), 1);
        vec![
            ("nodal", to(&nodal().to_doc())),
            ("cusp", to(&cusp().to_doc())),
            ("nodal_inflated", to(&inflate_identity_face(&nodal()).unwrap().to_doc())),
            ("smooth_p2", to(&smooth("P2", 2, &projective_space(2)).to_doc())),
            ("disjoint", to(&disjoint_union(&nodal(), &pt).unwrap().to_doc())),
            ("blowup_p2_point", to(&projective_blowup(2, 0).to_doc())),
            ("blowup_p3_line", to(&projective_blowup(3, 1).to_doc())),
            (
                "compact_a1",
                to(&compact("A1 = P1 ∖ pt", smooth("pt", 0, &point()), Some(&[&[1, 1]]))),
            ),
            (
                "compact_two_points",
                to(&compact(
                    "P1 ∖ (pt ⊔ pt)",
                    smooth("pt ⊔ pt", 0, &ZComplex::concentrated(0, 2)),
                    Some(&[&[1, 1], &[1, 1]]),
                )),
            ),
            (
                "compact_empty",
                to(&compact("P1 ∖ ∅", smooth("∅", 0, &ZComplex::zero()), None)),
            ),
            ("bad", bad()),
        ]
    }

    /// Set `KDESCENT_BLESS=1` to rewrite the shipped files from the generators.
    #[test]
    fn shipped_documents_match_generators() {
        let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus");
        let bless = std::env::var_os("KDESCENT_BLESS").is_some();
        for (name, value) in generated() {
            let text = serde_json::to_string_pretty(&value).unwrap() + "\n";
            if bless {
                std::fs::write(dir.join(format!("{name}.json")), &text).unwrap();
                continue;
            }
            let shipped: Value = serde_json::from_str(builtin(name).unwrap()).unwrap();
            assert_eq!(shipped, value, "{name}");
        }
        assert_eq!(generated().len(), DOCUMENTS.len());
    }

    #[test]
    fn every_good_document_parses() {
        for (name, text) in DOCUMENTS {
            let parsed = parse_document(text);
            if *name == "bad" {
                let err = parsed.unwrap_err().to_string();
                assert!(err.contains("face 00->11"), "{err}");
            } else {
                assert!(parsed.is_ok(), "{name}: {:?}", parsed.err());
            }
        }
        assert!(builtin("nodal.json").is_some());
        assert!(builtin("missing").is_none());
    }

    #[test]
    fn corpus_has_fifty_agreeing_squares() {
        let c = f2_corpus();
        assert_eq!(c.len(), 50);
        let mut exact = 0;
        for (name, x) in &c {
            let v = f2_tower_criterion(x).unwrap();
            assert!(v.agree, "{name}: {v:?}");
            exact += v.exact as usize;
        }
        assert_eq!(exact, 30);
    }
}
