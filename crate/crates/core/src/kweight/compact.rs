//! `K^c(X ∖ Y)` as the fiber of `KD(X̄) -> KD(Y)`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::complex::{fiber_sequence_exactness, ChainMapDoc, ExactnessNode, ZComplex};
use crate::zmod::FgAbGroup;
use crate::Result;

use super::{read_restriction, Hyperresolution, HyperresolutionDoc};

/// Vertex maps keyed by target vertex; `delta` embeds the target cube into the source cube
/// and defaults to the identity prefix.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RestrictionDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<Vec<usize>>,
    #[serde(default)]
    pub maps: BTreeMap<String, ChainMapDoc>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompactSupportDoc {
    pub name: String,
    pub compactification: HyperresolutionDoc,
    pub boundary: HyperresolutionDoc,
    pub restriction: RestrictionDoc,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompactRow {
    pub n: i64,
    pub compact: FgAbGroup,
    pub whole: FgAbGroup,
    pub boundary: FgAbGroup,
}

#[derive(Clone, Debug, Serialize)]
pub struct CompactSupport {
    pub name: String,
    #[serde(skip)]
    pub complex: ZComplex,
    pub rows: Vec<CompactRow>,
    pub nodes: Vec<ExactnessNode>,
    pub exact: bool,
}

impl CompactSupport {
    pub fn group(&self, n: i64) -> FgAbGroup {
        self.complex.homology(n)
    }
}

pub fn assemble_compact_support(
    hbar: &Hyperresolution,
    hy: &Hyperresolution,
    restriction: &RestrictionDoc,
) -> Result<CompactSupport> {
    let m = read_restriction(&hbar.diagram, &hy.diagram, restriction)
        .map_err(|e| e.within("restriction"))?;
    let r = m.simple_map()?;
    let complex = r.fiber();
    let (lo, hi) = complex.homology_range();
    let rows = (lo..=hi)
        .map(|n| CompactRow {
            n,
            compact: complex.homology(n),
            whole: r.source().homology(n),
            boundary: r.target().homology(n),
        })
        .collect();
    let nodes = fiber_sequence_exactness(&r, lo, hi);
    Ok(CompactSupport {
        name: format!("{} ∖ {}", hbar.name, hy.name),
        exact: nodes.iter().all(|x| x.exact),
        complex,
        rows,
        nodes,
    })
}

impl CompactSupportDoc {
    pub fn assemble(&self) -> Result<CompactSupport> {
        let hbar = Hyperresolution::from_doc(&self.compactification)
            .map_err(|e| e.within("compactification"))?;
        let hy = Hyperresolution::from_doc(&self.boundary).map_err(|e| e.within("boundary"))?;
        let mut c = assemble_compact_support(&hbar, &hy, &self.restriction)?;
        c.name = self.name.clone();
        Ok(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::json::matrix_to_raw;
    use crate::kweight::assemble_kd;
    use crate::kweight::generators::{point, projective_space, smooth};
    use crate::zmod::IntMatrix;

    fn restriction(m: &[&[i64]]) -> RestrictionDoc {
        RestrictionDoc {
            delta: None,
            maps: BTreeMap::from([(
                "1".to_string(),
                BTreeMap::from([(0, matrix_to_raw(&IntMatrix::from_i64(m)))]),
            )]),
        }
    }

    #[test]
    fn affine_line() {
        let p1 = smooth("P1", 1, &projective_space(1));
        let pt = smooth("pt", 0, &point());
        let c = assemble_compact_support(&p1, &pt, &restriction(&[&[1, 1]])).unwrap();
        assert_eq!(c.group(0), FgAbGroup::free(1));
        assert!(c.group(-1).is_trivial());
        assert!(c.exact);
    }

    #[test]
    fn line_minus_two_points() {
        let p1 = smooth("P1", 1, &projective_space(1));
        let two = smooth("pt ⊔ pt", 0, &ZComplex::concentrated(0, 2));
        let c = assemble_compact_support(&p1, &two, &restriction(&[&[1, 1], &[1, 1]])).unwrap();
        assert_eq!(c.group(0), FgAbGroup::free(1));
        assert_eq!(c.group(-1), FgAbGroup::free(1));
        assert!(c.exact);
    }

    #[test]
    fn empty_boundary_gives_kd() {
        let p1 = smooth("P1", 1, &projective_space(1));
        let empty = smooth("∅", 0, &ZComplex::zero());
        let c = assemble_compact_support(&p1, &empty, &RestrictionDoc::default()).unwrap();
        let kd = assemble_kd(&p1).unwrap();
        for n in -2..=2 {
            assert_eq!(c.group(n), kd.homology(n));
        }
    }

    #[test]
    fn mismatched_restriction_is_rejected() {
        let p1 = smooth("P1", 1, &projective_space(1));
        let pt = smooth("pt", 0, &point());
        let err = assemble_compact_support(&p1, &pt, &restriction(&[&[1, 1, 1]])).unwrap_err();
        assert!(err.to_string().contains("restriction"), "{err}");
    }
}
