//! The long exact sequence of a square `X̃ -> Ỹ <- Y`.

use serde::Serialize;

use crate::complex::{fiber_sequence_exactness, union_window, ChainMap, ExactnessNode, ZComplex};
use crate::cube::CubeVertex;
use crate::diagram::CubicalDiagram;
use crate::zmod::FgAbGroup;
use crate::{Error, Result};

use super::{augmentation_comparison, AugmentationReport, Hyperresolution};

fn vertex(s: &str) -> CubeVertex {
    s.parse().expect("vertex")
}

/// `h = [-f, g] : X_10 ⊕ X_01 -> X_11`. Its fiber is the simple of the square.
pub(crate) fn square_map(x: &CubicalDiagram) -> Result<ChainMap> {
    if x.index().n() != 1 {
        return Err(Error::invalid("cube", "expected a square"));
    }
    let (a, b, t) = (vertex("10"), vertex("01"), vertex("11"));
    let (f, g) = (x.edge(a, 1), x.edge(b, 0));
    let mid = x.vertex(a).direct_sum(x.vertex(b));
    ChainMap::from_fn(&mid, x.vertex(t), |m| f.component(m).neg().hstack(&g.component(m)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SquareSequenceRow {
    pub n: i64,
    pub kd: FgAbGroup,
    /// `H_n(X_10) ⊕ H_n(X_01)`.
    pub middle: FgAbGroup,
    /// `H_n(X_11)`.
    pub top: FgAbGroup,
    /// `δ : H_{n+1}(X_11) -> KD_n` vanishes.
    pub delta_zero: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SquareSequence {
    pub name: String,
    pub rows: Vec<SquareSequenceRow>,
    pub nodes: Vec<ExactnessNode>,
    pub exact: bool,
    pub augmentation: Option<AugmentationReport>,
}

/// `... -> KD_n -> H_n(X̃) ⊕ H_n(Y) -> H_n(Ỹ) -> KD_{n-1} -> ...`, checked node by node.
pub fn acyclic_square_sequence(h: &Hyperresolution) -> Result<SquareSequence> {
    let sq = square_map(&h.diagram)?;
    let window = union_window(
        h.diagram
            .vertex_complexes()
            .iter()
            .filter_map(ZComplex::support),
    );
    let (lo, hi) = window.map_or((0, 0), |(a, b)| (a - 1, b + 1));
    let fib = sq.fiber();
    let inc = sq.fiber_inclusion();
    let rows = (lo..=hi)
        .map(|n| {
            let conn = sq
                .target()
                .homology_subquotient(n + 1)
                .induced_map(&inc.component(n), &fib.homology_subquotient(n))?;
            Ok(SquareSequenceRow {
                n,
                kd: fib.homology(n),
                middle: sq.source().homology(n),
                top: sq.target().homology(n),
                delta_zero: conn.is_zero(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let nodes = fiber_sequence_exactness(&sq, lo, hi);
    Ok(SquareSequence {
        name: h.name.clone(),
        exact: nodes.iter().all(|x| x.exact),
        rows,
        nodes,
        augmentation: augmentation_comparison(h)?,
    })
}
