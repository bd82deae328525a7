//! Blow-up squares `Ỹ -> X̃`, `Y -> X` along a regular embedding of codimension `d`.
//!
//! Coordinates: `K(Ỹ) = K(Y)^d` with component `i` holding `ℓ^{-i} g^* y`, and
//! `K(X̃) = K(X) ⊕ K(Y)^{d-1}` with `(x, y_1, ..)` standing for `f^*x + Σ j_*(ℓ^{-i} g^* y_i)`.
//! In these coordinates `g^*` is the inclusion of component 0, `f^*` the inclusion of the
//! first summand, and the self-intersection formula gives
//! `j^* j_*(ℓ^{-i} g^* y) = (L - 1) L^{i-1} g^* y`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::complex::{union_window, ChainMap, ZComplex};
use crate::cube::{CubeIndex, CubeVertex};
use crate::diagram::{is_acyclic, CubicalDiagram};
use crate::json::{matrix_to_raw, raw_to_matrix, RawMatrix};
use crate::towers::square_sequence_exact_at;
use crate::zmod::{inverse_unimodular, FgAbGroup, IntMatrix};
use crate::{Error, Result};

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlowupDoc {
    pub name: String,
    pub d: usize,
    pub kx: BTreeMap<i64, usize>,
    pub ky: BTreeMap<i64, usize>,
    #[serde(default)]
    pub istar: BTreeMap<i64, RawMatrix>,
    #[serde(rename = "L")]
    pub l: RawMatrix,
    #[serde(rename = "lambdaN", default, skip_serializing_if = "Option::is_none")]
    pub lambda_n: Option<RawMatrix>,
}

/// Validated blow-up data. `lambda_n` has one column per `y_i`, `i = 1..d-1`, expressed in
/// the components of `K(Y)^d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlowupData {
    pub name: String,
    pub d: usize,
    pub kx: BTreeMap<i64, usize>,
    pub ky: BTreeMap<i64, usize>,
    pub istar: BTreeMap<i64, IntMatrix>,
    pub l: IntMatrix,
    pub lambda_n: IntMatrix,
}

fn power(m: &IntMatrix, e: usize) -> IntMatrix {
    (0..e).fold(IntMatrix::identity(m.rows()), |acc, _| m.mul(&acc))
}

/// `a ⊗ I_k`, block `(i, j)` equal to `a[i][j] · I_k`.
fn kron_identity(a: &IntMatrix, k: usize) -> IntMatrix {
    let mut out = IntMatrix::zeros(a.rows() * k, a.cols() * k);
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            out.set_block(i * k, j * k, &IntMatrix::scalar(k, a[(i, j)].clone()));
        }
    }
    out
}

fn unit(d: usize) -> IntMatrix {
    let mut e = IntMatrix::zeros(d, 1);
    if d > 0 {
        e[(0, 0)] = 1.into();
    }
    e
}

/// Columns `(L - 1) L^{i-1} e_0` for `i = 1..d-1`.
fn self_intersection(l: &IntMatrix) -> IntMatrix {
    let d = l.rows();
    let lm1 = l.sub(&IntMatrix::identity(d));
    let cols: Vec<_> = (1..d)
        .map(|i| lm1.mul(&power(l, i - 1)).mul(&unit(d)).column(0))
        .collect();
    IntMatrix::from_columns(d, &cols)
}

impl BlowupData {
    pub fn new(
        name: &str,
        d: usize,
        kx: BTreeMap<i64, usize>,
        ky: BTreeMap<i64, usize>,
        istar: BTreeMap<i64, IntMatrix>,
        l: IntMatrix,
        lambda_n: Option<IntMatrix>,
    ) -> Result<Self> {
        if d == 0 {
            return Err(Error::invalid("d", "codimension must be at least 1"));
        }
        if l.shape() != (d, d) {
            return Err(Error::invalid("L", format!("expected a {d}x{d} matrix")));
        }
        for (n, m) in &istar {
            let want = (ky.get(n).copied().unwrap_or(0), kx.get(n).copied().unwrap_or(0));
            if m.shape() != want {
                return Err(Error::invalid(
                    format!("istar.{n}"),
                    format!("expected {}x{}, found {}x{}", want.0, want.1, m.rows(), m.cols()),
                ));
            }
        }
        let lambda_n = match lambda_n {
            Some(m) if m.shape() != (d, d - 1) => {
                return Err(Error::invalid("lambdaN", format!("expected a {d}x{} matrix", d - 1)));
            }
            Some(m) => m,
            None => self_intersection(&l),
        };
        Ok(BlowupData {
            name: name.to_string(),
            d,
            kx,
            ky,
            istar,
            l,
            lambda_n,
        })
    }

    pub fn from_doc(doc: &BlowupDoc) -> Result<Self> {
        let istar = doc
            .istar
            .iter()
            .map(|(n, raw)| {
                let rows = doc.ky.get(n).copied().unwrap_or(0);
                let cols = doc.kx.get(n).copied().unwrap_or(0);
                Ok((*n, raw_to_matrix(raw, rows, cols, &format!("istar.{n}"))?))
            })
            .collect::<Result<_>>()?;
        let l = raw_to_matrix(&doc.l, doc.d, doc.d, "L")?;
        let lambda_n = doc
            .lambda_n
            .as_ref()
            .map(|raw| raw_to_matrix(raw, doc.d, doc.d.saturating_sub(1), "lambdaN"))
            .transpose()?;
        BlowupData::new(&doc.name, doc.d, doc.kx.clone(), doc.ky.clone(), istar, l, lambda_n)
    }

    pub fn to_doc(&self) -> BlowupDoc {
        BlowupDoc {
            name: self.name.clone(),
            d: self.d,
            kx: self.kx.clone(),
            ky: self.ky.clone(),
            istar: self.istar.iter().map(|(n, m)| (*n, matrix_to_raw(m))).collect(),
            l: matrix_to_raw(&self.l),
            lambda_n: Some(matrix_to_raw(&self.lambda_n)),
        }
    }

    fn window(&self) -> (i64, i64) {
        union_window(self.kx.keys().chain(self.ky.keys()).map(|&n| (n, n))).unwrap_or((0, 0))
    }

    fn rank_x(&self, n: i64) -> usize {
        self.kx.get(&n).copied().unwrap_or(0)
    }

    fn rank_y(&self, n: i64) -> usize {
        self.ky.get(&n).copied().unwrap_or(0)
    }

    fn istar_at(&self, n: i64) -> IntMatrix {
        self.istar
            .get(&n)
            .cloned()
            .unwrap_or_else(|| IntMatrix::zeros(self.rank_y(n), self.rank_x(n)))
    }
}

/// The verified square and 3-cube of a blow-up.
#[derive(Clone, Debug)]
pub struct BlowupModel {
    pub data: BlowupData,
    /// `X -> X̃, Y -> Ỹ` as an augmented square, coordinate 0 along `f`.
    pub front: CubicalDiagram,
    /// `X, X ⊕ Y^{d-1}, Y, Y^d` with `j'`.
    pub back: CubicalDiagram,
    /// Back square, front square and the comparison `Φ`, `Ψ` along coordinate 2.
    pub cube: CubicalDiagram,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SesRow {
    pub n: i64,
    pub x: FgAbGroup,
    pub middle: FgAbGroup,
    pub top: FgAbGroup,
    pub exact: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BlowupReport {
    pub name: String,
    pub d: usize,
    pub commutes: bool,
    pub psi_invertible: bool,
    pub cube_acyclic: bool,
    pub front_acyclic: bool,
    pub back_acyclic: bool,
    pub sequences: Vec<SesRow>,
    pub short_exact: bool,
}

impl BlowupReport {
    pub fn passed(&self) -> bool {
        self.commutes
            && self.psi_invertible
            && self.cube_acyclic
            && self.front_acyclic
            && self.back_acyclic
            && self.short_exact
    }
}

struct Pieces {
    kx: ZComplex,
    ky: ZComplex,
    kxt: ZComplex,
    kyt: ZComplex,
}

fn graded(lo: i64, hi: i64, rank: impl Fn(i64) -> usize) -> ZComplex {
    ZComplex::from_fn(lo, hi, &rank, |m| IntMatrix::zeros(rank(m - 1), rank(m)))
        .expect("zero differential")
}

fn degreewise(s: &ZComplex, t: &ZComplex, f: impl Fn(i64) -> IntMatrix) -> ChainMap {
    ChainMap::from_fn(s, t, f).expect("maps between complexes with zero differential")
}

/// Builds the model and rejects data whose square does not commute.
pub fn blowup_model(b: &BlowupData) -> Result<BlowupModel> {
    let d = b.d;
    let (lo, hi) = b.window();
    let p = Pieces {
        kx: graded(lo, hi, |n| b.rank_x(n)),
        ky: graded(lo, hi, |n| b.rank_y(n)),
        kxt: graded(lo, hi, |n| b.rank_x(n) + (d - 1) * b.rank_y(n)),
        kyt: graded(lo, hi, |n| d * b.rank_y(n)),
    };
    let e0 = unit(d);
    let lj = self_intersection(&b.l);
    let psi_small = {
        let cols: Vec<_> = (0..d).map(|i| power(&b.l, i).mul(&e0).column(0)).collect();
        IntMatrix::from_columns(d, &cols)
    };
    let first = |n: i64| IntMatrix::identity(b.rank_x(n)).vstack(&IntMatrix::zeros((d - 1) * b.rank_y(n), b.rank_x(n)));
    let g = |n: i64| kron_identity(&e0, b.rank_y(n));
    // j^*: g^* i^* on x, self-intersection on the y_i
    let jstar = |n: i64| {
        let ky = b.rank_y(n);
        g(n).mul(&b.istar_at(n)).hstack(&kron_identity(&lj, ky))
    };
    let jprime = |n: i64| {
        let ky = b.rank_y(n);
        g(n).mul(&b.istar_at(n)).hstack(&kron_identity(&b.lambda_n, ky))
    };
    let psi = |n: i64| kron_identity(&psi_small, b.rank_y(n));
    for n in lo..=hi {
        if jstar(n) != psi(n).mul(&jprime(n)) {
            return Err(Error::invalid(
                "lambdaN",
                format!("square does not commute in degree {n}: j^* Φ differs from Ψ j'"),
            ));
        }
    }

    let sq = CubeIndex::new(1, true)?;
    let v = |s: &str| s.parse::<CubeVertex>().expect("vertex");
    let build_square = |mid: &ZComplex, top: &ZComplex, j: &dyn Fn(i64) -> IntMatrix| {
        CubicalDiagram::from_fn(
            sq,
            |x| match x.to_string().as_str() {
                "00" => p.kx.clone(),
                "10" => mid.clone(),
                "01" => p.ky.clone(),
                _ => top.clone(),
            },
            |a, k| match (a.to_string().as_str(), k) {
                ("00", 0) => degreewise(&p.kx, mid, first),
                ("00", _) => degreewise(&p.kx, &p.ky, |n| b.istar_at(n)),
                ("10", _) => degreewise(mid, top, j),
                _ => degreewise(&p.ky, top, g),
            },
        )
    };
    let front = build_square(&p.kxt, &p.kyt, &jstar)?;
    let back = build_square(&p.kxt, &p.kyt, &jprime)?;

    let c3 = CubeIndex::new(2, true)?;
    let cube = CubicalDiagram::from_fn(
        c3,
        |x| {
            let (face, _) = x.split(2);
            let src = if x.coord(2) { &front } else { &back };
            src.vertex(face).clone()
        },
        |a, k| {
            let (face, _) = a.split(2);
            if k == 2 {
                let c = front.vertex(face);
                if face == v("11") {
                    degreewise(c, c, psi)
                } else {
                    // Φ is the identity in the chosen coordinates
                    ChainMap::identity(c)
                }
            } else if a.coord(2) {
                front.edge(face, k).clone()
            } else {
                back.edge(face, k).clone()
            }
        },
    )?;
    Ok(BlowupModel {
        data: b.clone(),
        front,
        back,
        cube,
    })
}

impl BlowupModel {
    pub fn report(&self) -> Result<BlowupReport> {
        let b = &self.data;
        let (lo, hi) = b.window();
        let v = |s: &str| s.parse::<CubeVertex>().expect("vertex");
        let sequences: Vec<SesRow> = (lo..=hi)
            .map(|n| SesRow {
                n,
                x: self.front.vertex(v("00")).homology(n),
                middle: self
                    .front
                    .vertex(v("10"))
                    .homology(n)
                    .direct_sum(&self.front.vertex(v("01")).homology(n)),
                top: self.front.vertex(v("11")).homology(n),
                exact: square_sequence_exact_at(&self.front, n),
            })
            .collect();
        Ok(BlowupReport {
            name: b.name.clone(),
            d: b.d,
            commutes: true,
            psi_invertible: inverse_unimodular(&{
                let cols: Vec<_> = (0..b.d)
                    .map(|i| power(&b.l, i).mul(&unit(b.d)).column(0))
                    .collect();
                IntMatrix::from_columns(b.d, &cols)
            })
            .is_some(),
            cube_acyclic: is_acyclic(&self.cube)?,
            front_acyclic: is_acyclic(&self.front)?,
            back_acyclic: is_acyclic(&self.back)?,
            short_exact: sequences.iter().all(|r| r.exact),
            sequences,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kweight::generators::{companion, projective_blowup};
    use crate::zmod::snf;

    #[test]
    fn p2_at_a_point() {
        let b = projective_blowup(2, 0);
        assert_eq!(b.lambda_n, IntMatrix::from_i64(&[&[-1], &[1]]));
        let r = blowup_model(&b).unwrap().report().unwrap();
        assert!(r.passed(), "{r:?}");
        let s = &r.sequences[0];
        assert_eq!(
            (s.x.clone(), s.middle.clone(), s.top.clone()),
            (FgAbGroup::free(3), FgAbGroup::free(5), FgAbGroup::free(2))
        );
    }

    #[test]
    fn p3_along_a_line() {
        let r = blowup_model(&projective_blowup(3, 1)).unwrap().report().unwrap();
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.sequences[0].middle, FgAbGroup::free(8));
        assert_eq!(r.sequences[0].top, FgAbGroup::free(4));
    }

    #[test]
    fn trivial_blowup_is_identity() {
        let b = projective_blowup(2, 1);
        assert_eq!(b.d, 1);
        let m = blowup_model(&b).unwrap();
        assert!(m.report().unwrap().passed());
        let v = |s: &str| s.parse::<CubeVertex>().unwrap();
        assert_eq!(m.front.vertex(v("00")), m.front.vertex(v("10")));
        assert!(m.front.edge(v("00"), 0).is_isomorphism());
    }

    #[test]
    fn higher_codimension_models_pass() {
        for (n, k) in [(3, 0), (4, 0), (4, 1), (4, 2)] {
            let r = blowup_model(&projective_blowup(n, k)).unwrap().report().unwrap();
            assert!(r.passed(), "P{n} along P{k}: {r:?}");
        }
    }

    #[test]
    fn wrong_lambda_is_rejected() {
        let mut b = projective_blowup(2, 0);
        b.lambda_n = IntMatrix::from_i64(&[&[1], &[1]]);
        let err = blowup_model(&b).unwrap_err();
        assert!(err.to_string().contains("lambdaN"), "{err}");
    }

    #[test]
    fn middle_map_has_unit_invariant_factors() {
        // oracle: [f^* ; i^*] is split injective, so its Smith form has only units
        let b = projective_blowup(2, 0);
        let m = blowup_model(&b).unwrap();
        let v = |s: &str| s.parse::<CubeVertex>().unwrap();
        let into = m.front.edge(v("00"), 0).component(0).vstack(&m.front.edge(v("00"), 1).component(0));
        assert!(snf(&into).diagonal().iter().all(|x| *x == 1.into()));
        assert_eq!(companion(2), b.l);
    }

    #[test]
    fn doc_round_trip() {
        let b = projective_blowup(3, 1);
        let json = serde_json::to_string(&b.to_doc()).unwrap();
        let doc: BlowupDoc = serde_json::from_str(&json).unwrap();
        assert_eq!(BlowupData::from_doc(&doc).unwrap(), b);
    }
}
