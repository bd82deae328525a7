//! Spectral sequences of filtered complexes and the weight filtration of a simple.
//!
//! A [`FilteredComplex`] is a complex with a filtration level attached to each basis vector;
//! `K_p` is the span of the basis vectors of level `≥ p` and must be a subcomplex. Pages are
//! computed from the lattices
//!
//! `Z_r^p(m) = { x ∈ K_p(m) : Dx ∈ K_{p+r} }`,
//! `E_r^p(m) = Z_r^p(m) / (Z_{r-1}^{p+1}(m) + D Z_{r-1}^{p-r+1}(m+1))`,
//!
//! with `d_r [x] = [Dx]`, so `d_r : E_r^{p,q} -> E_r^{p+r,q+r-1}` where `q = m + p`. Higher
//! differentials come from these representatives directly, no derived couples involved.
//!
//! For a cubical diagram the level of the summand `X_α` of the simple is `|α| - 1`, which
//! makes `E_1^{p,q} = ⊕_{|α|=p+1} H_q(X_α)`.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::complex::ZComplex;
use crate::cube::CubeIndex;
use crate::diagram::{simple, CubicalDiagram, SimpleLayout};
use crate::json::{matrix_to_raw, RawMatrix};
use crate::towers::Tower;
use crate::zmod::{
    homology_at, kernel_basis, FgAbGroup, FgMap, IntMatrix, IntVector, Presentation, Subquotient,
};
use crate::{Error, Result};

/// Complex with a decreasing filtration by coordinate subcomplexes.
#[derive(Clone, Debug)]
pub struct FilteredComplex {
    complex: ZComplex,
    /// Level of each basis vector, per degree.
    levels: BTreeMap<i64, Vec<i64>>,
    min_level: i64,
    max_level: i64,
}

impl FilteredComplex {
    pub fn new(complex: ZComplex, levels: BTreeMap<i64, Vec<i64>>) -> Result<Self> {
        for m in complex.lo()..=complex.hi() {
            let n = levels.get(&m).map_or(0, |l| l.len());
            if n != complex.rank(m) {
                return Err(Error::invalid(
                    format!("levels.{m}"),
                    format!("{n} levels for rank {}", complex.rank(m)),
                ));
            }
        }
        let all = levels.values().flatten();
        let min_level = all.clone().copied().min().unwrap_or(0);
        let max_level = all.copied().max().unwrap_or(0);
        let f = FilteredComplex {
            complex,
            levels,
            min_level,
            max_level,
        };
        for m in f.complex.lo() + 1..=f.complex.hi() {
            let d = f.complex.diff(m);
            for j in 0..d.cols() {
                for i in 0..d.rows() {
                    if !d[(i, j)].eq(&0.into()) && f.level(m - 1, i) < f.level(m, j) {
                        return Err(Error::invalid(
                            format!("d.{m}"),
                            "differential lowers the filtration level",
                        ));
                    }
                }
            }
        }
        Ok(f)
    }

    /// The simple of `x` filtered by weight: summand `X_α` has level `|α| - 1`.
    pub fn from_diagram(x: &CubicalDiagram) -> Result<Self> {
        let s = simple(x)?;
        let layout = SimpleLayout::new(x);
        let idx = x.index();
        let mut levels = BTreeMap::new();
        for m in s.lo()..=s.hi() {
            let mut l = vec![0; s.rank(m)];
            for v in idx.vertices() {
                for i in layout.block(v, m) {
                    l[i] = v.weight() as i64 - 1;
                }
            }
            levels.insert(m, l);
        }
        FilteredComplex::new(s, levels)
    }

    /// Widens the level range to include `[lo, hi]`.
    pub fn widen(mut self, lo: i64, hi: i64) -> Self {
        self.min_level = self.min_level.min(lo);
        self.max_level = self.max_level.max(hi);
        self
    }

    pub fn complex(&self) -> &ZComplex {
        &self.complex
    }

    pub fn level_range(&self) -> (i64, i64) {
        (self.min_level, self.max_level)
    }

    fn level(&self, m: i64, i: usize) -> i64 {
        self.levels[&m][i]
    }

    fn levels_at(&self, m: i64) -> &[i64] {
        self.levels.get(&m).map_or(&[], |v| v.as_slice())
    }

    /// Coordinates spanning `K_p` in degree `m`.
    fn selected(&self, p: i64, m: i64) -> Vec<usize> {
        self.levels_at(m)
            .iter()
            .enumerate()
            .filter(|(_, &l)| l >= p)
            .map(|(i, _)| i)
            .collect()
    }

    /// Basis of `K_p` in degree `m`, as columns.
    pub fn k_lattice(&self, p: i64, m: i64) -> IntMatrix {
        let n = self.complex.rank(m);
        let cols: Vec<usize> = self.selected(p, m);
        IntMatrix::identity(n).select_columns(&cols)
    }

    /// `Z_r^p(m)`; for `r = 0` this is `K_p(m)`.
    pub fn z_lattice(&self, p: i64, r: i64, m: i64) -> IntMatrix {
        let n = self.complex.rank(m);
        let sel = self.selected(p, m);
        let basis = IntMatrix::identity(n).select_columns(&sel);
        if r <= 0 {
            return basis;
        }
        let d = self.complex.diff(m);
        let low_rows: Vec<usize> = self
            .levels_at(m - 1)
            .iter()
            .enumerate()
            .filter(|(_, &l)| l < p + r)
            .map(|(i, _)| i)
            .collect();
        let constraint = d.select(&low_rows, &sel);
        basis.mul(&kernel_basis(&constraint))
    }

    /// `E_r^p` in total degree `m` as a subquotient of the degree-`m` lattice.
    pub fn term(&self, r: i64, p: i64, m: i64) -> Subquotient {
        let n = self.complex.rank(m);
        let num = self.z_lattice(p, r, m);
        let low = self.z_lattice(p + 1, r - 1, m);
        let from_above = self
            .complex
            .diff(m + 1)
            .mul(&self.z_lattice(p - r + 1, r - 1, m + 1));
        Subquotient::new(n, &num, &low.hstack(&from_above))
            .expect("page denominators lie in the numerator")
    }

    /// `d_r : E_r^p(m) -> E_r^{p+r}(m-1)`.
    pub fn differential(&self, r: i64, p: i64, m: i64) -> FgMap {
        let src = self.term(r, p, m);
        let tgt = self.term(r, p + r, m - 1);
        src.induced_map(&self.complex.diff(m), &tgt)
            .expect("d_r carries Z_r^p into Z_r^{p+r}")
    }

    fn degrees(&self) -> std::ops::RangeInclusive<i64> {
        self.complex.lo()..=self.complex.hi()
    }

    /// Page `r` (`r >= 1`).
    pub fn page(&self, r: i64) -> SSPage {
        let mut entries = Vec::new();
        let mut differentials = Vec::new();
        for m in self.degrees() {
            for p in self.min_level..=self.max_level {
                let t = self.term(r, p, m);
                entries.push(PageEntry {
                    p,
                    q: m + p,
                    group: t.group(),
                });
                if p + r <= self.max_level {
                    let d = self.differential(r, p, m);
                    if !d.is_zero() {
                        differentials.push(PageDifferential {
                            from: (p, m + p),
                            to: (p + r, m + p + r - 1),
                            matrix: d.matrix,
                        });
                    }
                }
            }
        }
        SSPage {
            r,
            entries,
            differentials,
        }
    }

    /// Pages `1..=r_max`.
    pub fn pages(&self, r_max: i64) -> Vec<SSPage> {
        (1..=r_max.max(1)).map(|r| self.page(r)).collect()
    }

    /// First page index from which every later page is equal.
    pub fn stable_page(&self) -> i64 {
        self.max_level - self.min_level + 1
    }

    pub fn e_infinity(&self) -> SSPage {
        self.page(self.stable_page().max(1) + 1)
    }

    /// `E_{r+1} ≅ H(E_r, d_r)` at every spot, by presentation algebra.
    pub fn next_page_is_homology(&self, r: i64) -> bool {
        for m in self.degrees() {
            for p in self.min_level..=self.max_level {
                let here = self.term(r, p, m);
                let incoming = if p - r >= self.min_level {
                    self.differential(r, p - r, m + 1)
                } else {
                    FgMap::zero(Presentation::default(), here.presentation().clone())
                };
                let outgoing = if p + r <= self.max_level {
                    self.differential(r, p, m)
                } else {
                    FgMap::zero(here.presentation().clone(), Presentation::default())
                };
                let h = homology_at(&incoming, &outgoing).expect("d_r squares to zero");
                if h != self.term(r + 1, p, m).group() {
                    return false;
                }
            }
        }
        true
    }

    /// `G_p = im(H_m(K_p) -> H_m)`, for every level, with generators in the abutment presentation.
    pub fn abutment_filtration(&self, m: i64) -> WeightFiltration {
        let c = &self.complex;
        let n = c.rank(m);
        let abut = c.homology_subquotient(m);
        let boundaries = c.diff(m + 1);
        let cycles_in = |p: i64| -> IntMatrix {
            let z = self.z_lattice(p, i64::MAX / 4, m);
            z.hstack(&boundaries)
        };
        let mut pieces = Vec::new();
        for p in self.min_level..=self.max_level + 1 {
            let gp = Subquotient::new(n, &cycles_in(p), &boundaries).expect("boundaries in G_p");
            let gr = Subquotient::new(n, &cycles_in(p), &cycles_in(p + 1)).expect("G_{p+1} in G_p");
            let generators = (0..gp.generators().cols())
                .map(|j| {
                    abut.coords(&gp.generators().column(j))
                        .expect("filtration classes are cycles")
                })
                .collect();
            pieces.push(WeightPiece {
                p,
                group: gp.group(),
                graded: gr.group(),
                generators,
            });
        }
        WeightFiltration {
            degree: m,
            abutment: abut.group(),
            pieces,
        }
    }

    /// `⊕_p E_∞^{p, m+p}` agrees, piece by piece, with the graded abutment filtration.
    pub fn convergence_certificate(&self, m: i64) -> bool {
        let r = self.stable_page().max(1) + 1;
        let f = self.abutment_filtration(m);
        f.pieces.iter().all(|piece| {
            let e = if piece.p > self.max_level {
                FgAbGroup::trivial()
            } else {
                self.term(r, piece.p, m).group()
            };
            e == piece.graded
        })
    }
}

/// One group of a page, at `(p, q)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PageEntry {
    pub p: i64,
    pub q: i64,
    pub group: FgAbGroup,
}

/// A nonzero differential between presented groups.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PageDifferential {
    pub from: (i64, i64),
    pub to: (i64, i64),
    pub matrix: IntMatrix,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SSPage {
    pub r: i64,
    pub entries: Vec<PageEntry>,
    pub differentials: Vec<PageDifferential>,
}

impl SSPage {
    pub fn get(&self, p: i64, q: i64) -> FgAbGroup {
        self.entries
            .iter()
            .find(|e| e.p == p && e.q == q)
            .map(|e| e.group.clone())
            .unwrap_or_default()
    }

    pub fn nonzero(&self) -> Vec<&PageEntry> {
        self.entries.iter().filter(|e| !e.group.is_trivial()).collect()
    }

    pub fn report(&self) -> PageReport {
        let mut entries: Vec<EntryReport> = self
            .nonzero()
            .into_iter()
            .map(|e| EntryReport {
                p: e.p,
                q: e.q,
                rank: e.group.rank,
                torsion: e.group.torsion.iter().map(|t| t.to_string()).collect(),
            })
            .collect();
        entries.sort_by_key(|e| (e.p, e.q));
        let mut d: Vec<DiffReport> = self
            .differentials
            .iter()
            .map(|x| DiffReport {
                from: [x.from.0, x.from.1],
                to: [x.to.0, x.to.1],
                matrix: matrix_to_raw(&x.matrix),
            })
            .collect();
        d.sort_by_key(|x| (x.from, x.to));
        PageReport {
            r: self.r,
            entries,
            d,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EntryReport {
    pub p: i64,
    pub q: i64,
    pub rank: usize,
    pub torsion: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DiffReport {
    pub from: [i64; 2],
    pub to: [i64; 2],
    pub matrix: RawMatrix,
}

#[derive(Clone, Debug, Serialize)]
pub struct PageReport {
    pub r: i64,
    pub entries: Vec<EntryReport>,
    pub d: Vec<DiffReport>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightPiece {
    pub p: i64,
    /// `G_p`.
    pub group: FgAbGroup,
    /// `G_p / G_{p+1}`.
    pub graded: FgAbGroup,
    /// Generators of `G_p` in coordinates of the abutment presentation.
    pub generators: Vec<IntVector>,
}

/// Decreasing filtration `G_p` of `H_m`, by weight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightFiltration {
    pub degree: i64,
    pub abutment: FgAbGroup,
    pub pieces: Vec<WeightPiece>,
}

impl WeightFiltration {
    pub fn graded(&self, p: i64) -> FgAbGroup {
        self.pieces
            .iter()
            .find(|x| x.p == p)
            .map(|x| x.graded.clone())
            .unwrap_or_default()
    }

    pub fn piece(&self, p: i64) -> FgAbGroup {
        if let Some(x) = self.pieces.iter().find(|x| x.p == p) {
            return x.group.clone();
        }
        match self.pieces.first() {
            Some(first) if p < first.p => self.abutment.clone(),
            _ => FgAbGroup::trivial(),
        }
    }

    /// Weights with a nonzero graded piece.
    pub fn weights(&self) -> Vec<i64> {
        self.pieces
            .iter()
            .filter(|x| !x.graded.is_trivial())
            .map(|x| x.p)
            .collect()
    }
}

/// `F^p X`: the diagram with vertices of weight `> p + 1` replaced by zero.
pub fn truncation(x: &CubicalDiagram, p: i64) -> CubicalDiagram {
    let keep = |w: usize| (w as i64) <= p + 1;
    CubicalDiagram::from_fn(
        x.index(),
        |v| {
            if keep(v.weight()) {
                x.vertex(v).clone()
            } else {
                ZComplex::zero()
            }
        },
        |a, k| {
            let b = a.with(k, true);
            if keep(b.weight()) {
                x.edge(a, k).clone()
            } else {
                let src = if keep(a.weight()) {
                    x.vertex(a).clone()
                } else {
                    ZComplex::zero()
                };
                crate::complex::ChainMap::zero(&src, &ZComplex::zero())
            }
        },
    )
    .expect("truncation of a valid diagram")
}

/// Truncations, subcomplexes and quotient tower of the weight filtration.
#[derive(Clone, Debug)]
pub struct FiltrationPieces {
    /// `(p, F^p X)` for `p = -1..=n`.
    pub truncations: Vec<(i64, CubicalDiagram)>,
    /// `(p, K_p)` with `K_p` spanned by the summands of weight `≥ p + 1`, per degree.
    pub subcomplexes: Vec<(i64, BTreeMap<i64, IntMatrix>)>,
    /// Stage `p` is `s(F^{p-1} X)`, for `p = 0..=n+1`; maps are the quotient projections.
    pub tower: Tower,
}

pub fn filtration_pieces(x: &CubicalDiagram) -> Result<FiltrationPieces> {
    let n = x.index().n() as i64;
    let f = FilteredComplex::from_diagram(x)?;
    let s = f.complex();
    let truncations: Vec<(i64, CubicalDiagram)> =
        (-1..=n).map(|p| (p, truncation(x, p))).collect();
    let subcomplexes = (0..=n + 1)
        .map(|p| {
            let lat = (s.lo()..=s.hi()).map(|m| (m, f.k_lattice(p, m))).collect();
            (p, lat)
        })
        .collect();
    let stages: Vec<ZComplex> = truncations
        .iter()
        .map(|(_, t)| simple(t))
        .collect::<Result<_>>()?;
    let layouts: Vec<SimpleLayout> = truncations.iter().map(|(_, t)| SimpleLayout::new(t)).collect();
    let idx: CubeIndex = x.index();
    let mut maps = Vec::new();
    for p in 1..stages.len() {
        let (src, tgt) = (&stages[p], &stages[p - 1]);
        let (ls, lt) = (&layouts[p], &layouts[p - 1]);
        let map = crate::complex::ChainMap::from_fn(src, tgt, |m| {
            let mut mat = IntMatrix::zeros(tgt.rank(m), src.rank(m));
            for v in idx.vertices() {
                let (rs, rt) = (ls.block(v, m), lt.block(v, m));
                if rt.len() == rs.len() {
                    for (i, j) in rt.zip(rs) {
                        mat[(i, j)] = 1.into();
                    }
                }
            }
            mat
        })?;
        maps.push(map);
    }
    let len = stages.len() - 1;
    let tower = Tower::new(stages, maps, len)?;
    Ok(FiltrationPieces {
        truncations,
        subcomplexes,
        tower,
    })
}

/// `E_1^{p,q} = ⊕_{|α|=p+1} H_q(X_α)` with `d_1 = Σ ε(α,k) H_q(X(α -> α+e_k))`, assembled
/// directly from vertex homology.
pub fn e1_page(x: &CubicalDiagram) -> Result<SSPage> {
    if x.index().augmented() {
        return Err(Error::invalid("cube", "E_1 of an augmented diagram"));
    }
    let idx = x.index();
    let n = idx.n() as i64;
    let (lo, hi) = vertex_window(x);
    let mut entries = Vec::new();
    let mut differentials = Vec::new();
    for q in lo..=hi {
        for p in 0..=n {
            let (pres, _) = e1_column(x, p, q);
            entries.push(PageEntry {
                p,
                q,
                group: pres.group(),
            });
            if p < n {
                let d = e1_differential(x, p, q);
                if !d.is_zero() {
                    differentials.push(PageDifferential {
                        from: (p, q),
                        to: (p + 1, q),
                        matrix: d.matrix,
                    });
                }
            }
        }
    }
    Ok(SSPage {
        r: 1,
        entries,
        differentials,
    })
}

fn vertex_window(x: &CubicalDiagram) -> (i64, i64) {
    crate::complex::union_window(x.vertex_complexes().iter().filter_map(|c| c.support()))
        .unwrap_or((0, -1))
}

fn e1_column(x: &CubicalDiagram, p: i64, q: i64) -> (Presentation, Vec<Subquotient>) {
    let verts = x.index().vertices_of_weight((p + 1) as usize);
    let subs: Vec<Subquotient> = verts
        .iter()
        .map(|&v| x.vertex(v).homology_subquotient(q))
        .collect();
    let parts: Vec<Presentation> = subs.iter().map(|s| s.presentation().clone()).collect();
    (Presentation::direct_sum(&parts), subs)
}

/// `d_1 : E_1^{p,q} -> E_1^{p+1,q}` from induced maps on vertex homology.
pub fn e1_differential(x: &CubicalDiagram, p: i64, q: i64) -> FgMap {
    let idx = x.index();
    let src_v = idx.vertices_of_weight((p + 1) as usize);
    let tgt_v = idx.vertices_of_weight((p + 2) as usize);
    let (_, src_s) = e1_column(x, p, q);
    let (_, tgt_s) = e1_column(x, p + 1, q);
    let blocks: Vec<Vec<Option<IntMatrix>>> = tgt_v
        .iter()
        .map(|&b| {
            src_v
                .iter()
                .map(|&a| {
                    if !a.le(b) {
                        return None;
                    }
                    let k = (a.bits() ^ b.bits()).trailing_zeros() as usize;
                    let sa = &src_s[src_v.iter().position(|&u| u == a).unwrap()];
                    let sb = &tgt_s[tgt_v.iter().position(|&u| u == b).unwrap()];
                    let f = sa
                        .induced_map(&x.edge(a, k).component(q), sb)
                        .expect("edge maps carry cycles to cycles");
                    let m = f.matrix;
                    Some(if a.sign(k) < 0 { m.neg() } else { m })
                })
                .collect()
        })
        .collect();
    let sp: Vec<Presentation> = src_s.iter().map(|s| s.presentation().clone()).collect();
    let tp: Vec<Presentation> = tgt_s.iter().map(|s| s.presentation().clone()).collect();
    FgMap::from_blocks(&sp, &tp, &blocks)
}

/// `E_2` from the directly assembled `E_1` (homology of `d_1`).
pub fn e2_from_e1(x: &CubicalDiagram, p: i64, q: i64) -> FgAbGroup {
    let n = x.index().n() as i64;
    let (here, _) = e1_column(x, p, q);
    let incoming = if p >= 1 {
        e1_differential(x, p - 1, q)
    } else {
        FgMap::zero(Presentation::default(), here.clone())
    };
    let outgoing = if p < n {
        e1_differential(x, p, q)
    } else {
        FgMap::zero(here, Presentation::default())
    };
    homology_at(&incoming, &outgoing).expect("d_1 squares to zero")
}
