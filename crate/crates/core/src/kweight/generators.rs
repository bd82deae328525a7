//! Standard pieces: points, projective spaces, the nodal and cuspidal cubics, blow-ups of
//! projective spaces along linear subspaces.
//!
//! `K_0(P^n)` uses the basis `1, x, ..., x^n` with `x = [O(-1)]` and `(1 - x)^{n+1} = 0`.

use std::collections::BTreeMap;

use num_bigint::BigInt;

use crate::complex::{ChainMap, ZComplex};
use crate::cube::{CubeIndex, CubeVertex};
use crate::diagram::CubicalDiagram;
use crate::zmod::IntMatrix;

use super::{BlowupData, Hyperresolution};

pub fn point() -> ZComplex {
    ZComplex::concentrated(0, 1)
}

pub fn projective_space(n: usize) -> ZComplex {
    ZComplex::concentrated(0, n + 1)
}

fn binomial(n: usize, k: usize) -> BigInt {
    (0..k).fold(BigInt::from(1), |acc, i| acc * (n - i) / (i + 1))
}

/// Multiplication by `x` on `Z[x]/(x - 1)^d` in the basis `1, ..., x^{d-1}`.
pub fn companion(d: usize) -> IntMatrix {
    let mut m = IntMatrix::zeros(d, d);
    for i in 1..d {
        m[(i, i - 1)] = BigInt::from(1);
    }
    for j in 0..d {
        // x^d = -sum_j C(d, j) (-1)^{d-j} x^j
        let sign = if (d - j) % 2 == 0 { -1 } else { 1 };
        m[(j, d - 1)] = binomial(d, j) * sign;
    }
    m
}

/// `K_0(P^n) -> K_0(P^k)` for a linear `P^k ⊂ P^n`: column `j` holds `x^j` reduced.
pub fn projective_restriction(n: usize, k: usize) -> IntMatrix {
    assert!(k <= n);
    let c = companion(k + 1);
    let mut col = IntMatrix::zeros(k + 1, 1);
    col[(0, 0)] = BigInt::from(1);
    let mut cols = Vec::new();
    for _ in 0..=n {
        cols.push(col.column(0));
        col = c.mul(&col);
    }
    IntMatrix::from_columns(k + 1, &cols)
}

fn degree_zero_map(s: &ZComplex, t: &ZComplex, m: &IntMatrix) -> ChainMap {
    ChainMap::from_fn(s, t, |d| {
        if d == 0 {
            m.clone()
        } else {
            IntMatrix::zeros(t.rank(d), s.rank(d))
        }
    })
    .expect("degree-zero map between complexes with zero differential")
}

/// A smooth variety as a one-vertex document.
pub fn smooth(name: &str, dimension: i64, k: &ZComplex) -> Hyperresolution {
    constant_cube(name, dimension, k, 0)
}

/// Constant `□_n` diagram with identity edges.
pub fn constant_cube(name: &str, dimension: i64, k: &ZComplex, n: usize) -> Hyperresolution {
    let idx = CubeIndex::new(n, false).expect("small cube");
    let mut h = Hyperresolution::from_diagram(name, dimension, CubicalDiagram::constant(idx, k));
    for (l, _) in h.labels.values_mut() {
        *l = name.to_string();
    }
    h
}

/// Square `X̃ -> Ỹ <- Y` with all pieces in degree 0.
fn curve_square(name: &str, top_points: usize, restriction: IntMatrix) -> Hyperresolution {
    let idx = CubeIndex::new(1, false).expect("square");
    let (xt, y, yt) = (projective_space(1), point(), ZComplex::concentrated(0, top_points));
    let g = IntMatrix::from_columns(top_points, &[vec![BigInt::from(1); top_points]]);
    let diagram = CubicalDiagram::from_fn(
        idx,
        |v| match v.to_string().as_str() {
            "10" => xt.clone(),
            "01" => y.clone(),
            _ => yt.clone(),
        },
        |a, _| {
            if a.coord(0) {
                degree_zero_map(&xt, &yt, &restriction)
            } else {
                degree_zero_map(&y, &yt, &g)
            }
        },
    )
    .expect("curve square commutes");
    let mut h = Hyperresolution::from_diagram(name, 1, diagram);
    let v = |s: &str| s.parse::<CubeVertex>().expect("vertex");
    h.labels.insert(v("10"), ("P1".into(), Some(1)));
    h.labels.insert(v("01"), ("singular point".into(), Some(0)));
    h.labels.insert(
        v("11"),
        (if top_points == 1 { "pt" } else { "pt ⊔ pt" }.into(), Some(0)),
    );
    h
}

/// Nodal cubic: `P¹` normalisation, the node below, two preimages above.
pub fn nodal() -> Hyperresolution {
    curve_square("nodal cubic", 2, IntMatrix::from_i64(&[&[1, 1], &[1, 1]]))
}

/// Cuspidal cubic: one preimage of the cusp.
pub fn cusp() -> Hyperresolution {
    curve_square("cuspidal cubic", 1, IntMatrix::from_i64(&[&[1, 1]]))
}

/// Blow-up of `P^n` along a linear `P^k`, codimension `d = n - k`.
pub fn projective_blowup(n: usize, k: usize) -> BlowupData {
    assert!(k < n);
    let d = n - k;
    let name = if k == 0 {
        format!("P{n} blown up at a point")
    } else {
        format!("P{n} blown up along P{k}")
    };
    BlowupData::new(
        &name,
        d,
        BTreeMap::from([(0, n + 1)]),
        BTreeMap::from([(0, k + 1)]),
        BTreeMap::from([(0, projective_restriction(n, k))]),
        companion(d),
        None,
    )
    .expect("projective blow-up data")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn companion_matrices() {
        assert_eq!(companion(1), IntMatrix::from_i64(&[&[1]]));
        assert_eq!(companion(2), IntMatrix::from_i64(&[&[0, -1], &[1, 2]]));
        // (x - 1)^3 = x^3 - 3x^2 + 3x - 1
        assert_eq!(
            companion(3),
            IntMatrix::from_i64(&[&[0, 0, 1], &[1, 0, -3], &[0, 1, 3]])
        );
    }

    #[test]
    fn restriction_to_a_line() {
        assert_eq!(
            projective_restriction(3, 1),
            IntMatrix::from_i64(&[&[1, 0, -1, -2], &[0, 1, 2, 3]])
        );
        assert_eq!(projective_restriction(2, 0), IntMatrix::from_i64(&[&[1, 1, 1]]));
        assert!(projective_restriction(3, 3).is_identity());
    }
}
