//! Towers of fibrations modeled by degreewise-surjective chain maps.
//!
//! A tower `X(L) -> X(L-1) -> ... -> X(0)` has fibers `F(p) = ker(X(p) -> X(p-1))` (with
//! `F(0) = X(0)`), and its spectral sequence has `E_1^{p,q} = H_{q-p}(F(p))`. The limit `X(L)`
//! is filtered by `K_p = ker(X(L) -> X(p-1))`; in a basis adapted to that filtration the pages
//! come from [`FilteredComplex`], with the same `(p, q)` bookkeeping.

use std::collections::BTreeMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::complex::{ChainMap, ChainMapDoc, ComplexDoc, ZComplex};
use crate::cube::{CubeIndex, CubeVertex};
use crate::diagram::random::{random_diagram, DiagramBounds};
use crate::diagram::{augmentation_map, simple, CubicalDiagram, DiagramMorphism, SimpleLayout};
use crate::spectral::{FilteredComplex, PageDifferential, PageEntry, SSPage};
use crate::zmod::{
    exact_at, homology_at, inverse_unimodular, is_surjective, kernel_basis, solve_in_lattice,
    ColumnEchelon, FgMap, IntMatrix, IntVector, Presentation, Subquotient,
};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tower {
    stages: Vec<ZComplex>,
    /// `maps[p - 1]: X(p) -> X(p-1)`.
    maps: Vec<ChainMap>,
    stab: usize,
}

fn window_of(c: &ZComplex) -> (i64, i64) {
    (c.lo(), c.hi())
}

impl Tower {
    pub fn new(stages: Vec<ZComplex>, maps: Vec<ChainMap>, stab: usize) -> Result<Self> {
        if stages.is_empty() {
            return Err(Error::invalid("stages", "a tower needs at least one stage"));
        }
        let len = stages.len() - 1;
        if maps.len() != len {
            return Err(Error::invalid(
                "maps",
                format!("expected {len} structure maps, found {}", maps.len()),
            ));
        }
        if stab > len {
            return Err(Error::invalid("stab", format!("{stab} exceeds the length {len}")));
        }
        for (i, f) in maps.iter().enumerate() {
            let p = i + 1;
            let loc = format!("maps.{i}");
            if f.source() != &stages[p] || f.target() != &stages[p - 1] {
                return Err(Error::invalid(loc, format!("must map stage {p} to stage {}", p - 1)));
            }
            let (lo, hi) = window_of(f.target());
            for m in lo..=hi {
                if !is_surjective(&f.component(m)) {
                    return Err(Error::invalid(loc, format!("not surjective in degree {m}")));
                }
            }
            if p > stab && *f != ChainMap::identity(&stages[p]) {
                return Err(Error::invalid(loc, format!("must be the identity past stab = {stab}")));
            }
        }
        Ok(Tower { stages, maps, stab })
    }

    /// Like [`Tower::new`] with the smallest admissible stabilization index.
    pub fn with_minimal_stab(stages: Vec<ZComplex>, maps: Vec<ChainMap>) -> Result<Self> {
        let stab = maps
            .iter()
            .enumerate()
            .filter(|(_, f)| f.source() != f.target() || **f != ChainMap::identity(f.source()))
            .map(|(i, _)| i + 1)
            .max()
            .unwrap_or(0);
        Tower::new(stages, maps, stab)
    }

    /// `C = C = ... = C` with `length + 1` stages.
    pub fn constant(c: &ZComplex, length: usize) -> Tower {
        Tower {
            stages: vec![c.clone(); length + 1],
            maps: vec![ChainMap::identity(c); length],
            stab: 0,
        }
    }

    /// Stage `p` is the quotient `σ_{≥ t_p} C`; `thresholds` must be non-increasing.
    pub fn stupid_truncations(c: &ZComplex, thresholds: &[i64]) -> Result<Tower> {
        if thresholds.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::invalid("thresholds", "must be non-increasing"));
        }
        let stages: Vec<ZComplex> = thresholds.iter().map(|&t| quotient_above(c, t)).collect();
        let maps = (1..stages.len())
            .map(|p| {
                ChainMap::from_fn(&stages[p], &stages[p - 1], |m| {
                    let (r, s) = (stages[p - 1].rank(m), stages[p].rank(m));
                    if r == s {
                        IntMatrix::identity(r)
                    } else {
                        IntMatrix::zeros(r, s)
                    }
                })
            })
            .collect::<Result<_>>()?;
        Tower::with_minimal_stab(stages, maps)
    }

    pub fn length(&self) -> usize {
        self.stages.len() - 1
    }

    pub fn stab(&self) -> usize {
        self.stab
    }

    /// `X(p)`; stages past the length repeat the last one.
    pub fn stage(&self, p: usize) -> &ZComplex {
        &self.stages[p.min(self.length())]
    }

    pub fn stages(&self) -> &[ZComplex] {
        &self.stages
    }

    /// `X(p) -> X(p-1)` for `p >= 1`.
    pub fn structure(&self, p: usize) -> ChainMap {
        assert!(p >= 1);
        if p > self.length() {
            ChainMap::identity(self.stage(p))
        } else {
            self.maps[p - 1].clone()
        }
    }

    pub fn limit(&self) -> &ZComplex {
        self.stage(self.length())
    }

    /// The same tower with identity stages appended up to `len`.
    pub fn extended(&self, len: usize) -> Tower {
        let mut t = self.clone();
        while t.length() < len {
            let top = t.limit().clone();
            t.maps.push(ChainMap::identity(&top));
            t.stages.push(top);
        }
        t
    }

    /// `X[n]`: `∗` below stage `n`, `X(p - n)` from there on.
    pub fn shift(&self, n: usize) -> Tower {
        if n == 0 {
            return self.clone();
        }
        let zero = ZComplex::zero();
        let mut stages = vec![zero.clone(); n];
        stages.extend(self.stages.iter().cloned());
        let mut maps = vec![ChainMap::zero(&zero, &zero); n - 1];
        maps.push(ChainMap::zero(&self.stages[0], &zero));
        maps.extend(self.maps.iter().cloned());
        Tower {
            stages,
            maps,
            stab: self.stab + n,
        }
    }

    /// `X(L)_m -> X(p)_m`.
    pub fn projection(&self, p: usize, m: i64) -> IntMatrix {
        let mut f = IntMatrix::identity(self.limit().rank(m));
        for k in (p + 1..=self.length()).rev() {
            f = self.maps[k - 1].component(m).mul(&f);
        }
        f
    }

    /// Basis of `F(p)_m` inside `X(p)_m`, as columns.
    pub fn fiber_basis(&self, p: usize, m: i64) -> IntMatrix {
        if p > self.length() {
            return IntMatrix::zeros(self.limit().rank(m), 0);
        }
        if p == 0 {
            return IntMatrix::identity(self.stages[0].rank(m));
        }
        kernel_basis(&self.maps[p - 1].component(m))
    }

    pub fn fiber(&self, p: usize) -> Fiber {
        let x = self.stage(p);
        let basis = (x.lo()..=x.hi()).map(|m| (m, self.fiber_basis(p, m))).collect();
        Fiber::from_basis(x, basis)
    }

    /// `E_1^{p,q}` as a subquotient of the fiber lattice.
    pub fn e1_term(&self, p: usize, q: i64) -> Subquotient {
        self.fiber(p).complex.homology_subquotient(q - p as i64)
    }

    /// `d_1: E_1^{p,q} -> E_1^{p+1,q}`, the connecting map of `F(p+1) -> X(p+1) -> X(p)`.
    pub fn d1(&self, p: usize, q: i64) -> FgMap {
        connecting_map(self, p, q, &self.fiber(p), &self.fiber(p + 1))
    }

    /// `X(L)` in a basis adapted to `K_p = ker(X(L) -> X(p-1))`, filtered by `p`.
    pub fn filtered(&self) -> TowerFiltration {
        let x = self.limit();
        let mut basis = BTreeMap::new();
        let mut levels = BTreeMap::new();
        for m in x.lo()..=x.hi() {
            let mut cols = Vec::new();
            let mut lv = Vec::new();
            for p in 0..=self.length() {
                let proj = self.projection(p, m);
                let fb = self.fiber_basis(p, m);
                for j in 0..fb.cols() {
                    let lift = solve_in_lattice(&proj, &fb.column(j))
                        .expect("dimensions agree")
                        .expect("projections of a tower are surjective");
                    cols.push(lift);
                    lv.push(p as i64);
                }
            }
            basis.insert(m, IntMatrix::from_columns(x.rank(m), &cols));
            levels.insert(m, lv);
        }
        let inverse: BTreeMap<i64, IntMatrix> = basis
            .iter()
            .map(|(&m, b)| (m, inverse_unimodular(b).expect("adapted basis is a basis")))
            .collect();
        let complex = ZComplex::from_fn(
            x.lo(),
            x.hi(),
            |m| x.rank(m),
            |m| inverse[&(m - 1)].mul(&x.diff(m)).mul(&basis[&m]),
        )
        .expect("change of basis keeps d∘d = 0");
        let filtered = FilteredComplex::new(complex, levels)
            .expect("tower filtration is preserved by d")
            .widen(0, self.length() as i64);
        TowerFiltration {
            filtered,
            basis,
            inverse,
        }
    }

    /// `E_1` from fibers and connecting maps, `E_2` from the adapted filtration.
    pub fn tower_e2(&self) -> TowerE2 {
        let mut entries = Vec::new();
        let mut differentials = Vec::new();
        for p in 0..=self.length() {
            let f = self.fiber(p);
            for m in f.complex.lo()..=f.complex.hi() {
                let q = m + p as i64;
                entries.push(PageEntry {
                    p: p as i64,
                    q,
                    group: f.complex.homology(m),
                });
                if p < self.length() {
                    let d = self.d1(p, q);
                    if !d.is_zero() {
                        differentials.push(PageDifferential {
                            from: (p as i64, q),
                            to: (p as i64 + 1, q),
                            matrix: d.matrix,
                        });
                    }
                }
            }
        }
        TowerE2 {
            e1: SSPage {
                r: 1,
                entries,
                differentials,
            },
            e2: self.filtered().filtered.page(2),
        }
    }

    pub fn to_doc(&self) -> TowerDoc {
        TowerDoc {
            length: self.length(),
            stab: self.stab,
            stages: self.stages.iter().map(ZComplex::to_doc).collect(),
            maps: self.maps.iter().map(ChainMap::to_doc).collect(),
        }
    }

    pub fn from_doc(doc: &TowerDoc) -> Result<Self> {
        if doc.stages.len() != doc.length + 1 {
            return Err(Error::invalid(
                "stages",
                format!("length {} needs {} stages", doc.length, doc.length + 1),
            ));
        }
        let stages: Vec<ZComplex> = doc
            .stages
            .iter()
            .enumerate()
            .map(|(i, d)| ZComplex::from_doc(d).map_err(|e| e.within(&format!("stages.{i}"))))
            .collect::<Result<_>>()?;
        if doc.maps.len() != doc.length {
            return Err(Error::invalid("maps", format!("expected {} maps", doc.length)));
        }
        let maps = doc
            .maps
            .iter()
            .enumerate()
            .map(|(i, d)| {
                ChainMap::from_doc(&stages[i + 1], &stages[i], d)
                    .map_err(|e| e.within(&format!("maps.{i}")))
            })
            .collect::<Result<_>>()?;
        Tower::new(stages, maps, doc.stab)
    }
}

/// `σ_{≥t} C`, the quotient of `C` by its degrees below `t`.
fn quotient_above(c: &ZComplex, t: i64) -> ZComplex {
    let lo = c.lo().max(t);
    ZComplex::from_fn(lo, c.hi(), |m| c.rank(m), |m| c.diff(m)).expect("quotient complex")
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TowerDoc {
    pub length: usize,
    pub stab: usize,
    pub stages: Vec<ComplexDoc>,
    pub maps: Vec<ChainMapDoc>,
}

/// Kernel complex with the basis it was computed in.
#[derive(Clone, Debug)]
pub struct Fiber {
    pub complex: ZComplex,
    /// Columns spanning the fiber inside the stage, per degree.
    pub basis: BTreeMap<i64, IntMatrix>,
}

impl Fiber {
    /// Restricts the differential of `x` to the lattice spanned by `basis`, which must be a
    /// subcomplex.
    pub fn from_basis(x: &ZComplex, basis: BTreeMap<i64, IntMatrix>) -> Fiber {
        let solvers: BTreeMap<i64, ColumnEchelon> =
            basis.iter().map(|(&m, b)| (m, ColumnEchelon::new(b))).collect();
        let cols = |m: i64| basis.get(&m).map_or(0, |b| b.cols());
        let complex = ZComplex::from_fn(x.lo(), x.hi(), cols, |m| {
            let b = &basis[&m];
            let d = x.diff(m).mul(b);
            let coords: Vec<IntVector> = (0..b.cols())
                .map(|j| {
                    solvers[&(m - 1)]
                        .solve(&d.column(j))
                        .expect("fiber basis spans a subcomplex")
                })
                .collect();
            IntMatrix::from_columns(cols(m - 1), &coords)
        })
        .expect("restriction of a complex");
        Fiber { complex, basis }
    }

    pub fn coords(&self, m: i64, v: &[num_bigint::BigInt]) -> Option<IntVector> {
        match self.basis.get(&m) {
            Some(b) => ColumnEchelon::new(b).solve(v),
            None if v.iter().all(|x| x.sign() == num_bigint::Sign::NoSign) => Some(Vec::new()),
            None => None,
        }
    }
}

/// Lifts cycles of `F(p)` to `X(p+1)` and applies `d`; the result lies in `F(p+1)`.
fn connecting_map(t: &Tower, p: usize, q: i64, src: &Fiber, tgt: &Fiber) -> FgMap {
    let m = q - p as i64;
    let s = src.complex.homology_subquotient(m);
    let ts = tgt.complex.homology_subquotient(m - 1);
    if p >= t.length() {
        return FgMap::zero(s.presentation().clone(), ts.presentation().clone());
    }
    let up = t.structure(p + 1).component(m);
    let d = t.stage(p + 1).diff(m);
    let gens = s.generators();
    let cols: Vec<IntVector> = (0..gens.cols())
        .map(|j| {
            let v = src.basis[&m].mul_vec(&gens.column(j));
            let u = solve_in_lattice(&up, &v)
                .expect("dimensions agree")
                .expect("structure maps are surjective");
            let w = d.mul_vec(&u);
            let y = tgt.coords(m - 1, &w).expect("boundary of a lift lies in the fiber");
            ts.coords(&y).expect("boundary of a lift is a fiber cycle")
        })
        .collect();
    FgMap::new(
        s.presentation().clone(),
        ts.presentation().clone(),
        IntMatrix::from_columns(ts.presentation().len(), &cols),
    )
}

#[derive(Clone, Debug)]
pub struct TowerFiltration {
    pub filtered: FilteredComplex,
    /// Adapted basis of `X(L)_m`, as columns.
    pub basis: BTreeMap<i64, IntMatrix>,
    pub inverse: BTreeMap<i64, IntMatrix>,
}

#[derive(Clone, Debug)]
pub struct TowerE2 {
    pub e1: SSPage,
    pub e2: SSPage,
}

/// Stagewise chain maps commuting with the structure maps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TowerMap {
    source: Tower,
    target: Tower,
    maps: Vec<ChainMap>,
}

impl TowerMap {
    pub fn new(source: Tower, target: Tower, maps: Vec<ChainMap>) -> Result<Self> {
        if source.length() != target.length() || maps.len() != source.length() + 1 {
            return Err(Error::invalid("maps", "tower maps need equal lengths and one map per stage"));
        }
        for (p, f) in maps.iter().enumerate() {
            if f.source() != source.stage(p) || f.target() != target.stage(p) {
                return Err(Error::invalid(format!("maps.{p}"), "map ends do not match the stages"));
            }
            if p >= 1 {
                let left = target.structure(p).compose(f)?;
                let right = maps[p - 1].compose(&source.structure(p))?;
                if left != right {
                    return Err(Error::invalid(
                        format!("maps.{p}"),
                        "does not commute with the structure maps",
                    ));
                }
            }
        }
        Ok(TowerMap {
            source,
            target,
            maps,
        })
    }

    pub fn identity(t: &Tower) -> TowerMap {
        let maps = t.stages.iter().map(ChainMap::identity).collect();
        TowerMap::new(t.clone(), t.clone(), maps).expect("identity")
    }

    /// The constant tower map of `f`.
    pub fn constant(f: &ChainMap, length: usize) -> TowerMap {
        TowerMap::new(
            Tower::constant(f.source(), length),
            Tower::constant(f.target(), length),
            vec![f.clone(); length + 1],
        )
        .expect("constant maps commute with identities")
    }

    pub fn source(&self) -> &Tower {
        &self.source
    }

    pub fn target(&self) -> &Tower {
        &self.target
    }

    /// Component at stage `p`; past the length the last one repeats.
    pub fn component(&self, p: usize) -> &ChainMap {
        &self.maps[p.min(self.maps.len() - 1)]
    }

    pub fn extended(&self, len: usize) -> TowerMap {
        let maps = (0..=len.max(self.source.length()))
            .map(|p| self.component(p).clone())
            .collect();
        TowerMap {
            source: self.source.extended(len),
            target: self.target.extended(len),
            maps,
        }
    }

    pub fn compose(&self, first: &TowerMap) -> Result<TowerMap> {
        let maps = self
            .maps
            .iter()
            .zip(&first.maps)
            .map(|(g, f)| g.compose(f))
            .collect::<Result<_>>()?;
        TowerMap::new(first.source.clone(), self.target.clone(), maps)
    }

    /// The map on `E_r^{p}` in total degree `m`, through the adapted bases.
    pub fn on_page(&self, r: i64, p: i64, m: i64) -> FgMap {
        let (a, b) = (self.source.filtered(), self.target.filtered());
        self.on_page_with(&a, &b, r, p, m)
    }

    fn on_page_with(&self, a: &TowerFiltration, b: &TowerFiltration, r: i64, p: i64, m: i64) -> FgMap {
        let f = self.maps.last().unwrap().component(m);
        let conj = match (b.inverse.get(&m), a.basis.get(&m)) {
            (Some(bi), Some(ab)) => bi.mul(&f).mul(ab),
            _ => IntMatrix::zeros(
                self.target.limit().rank(m),
                self.source.limit().rank(m),
            ),
        };
        a.filtered
            .term(r, p, m)
            .induced_map(&conj, &b.filtered.term(r, p, m))
            .expect("filtered maps carry Z_r^p into Z_r^p")
    }
}

/// Every `E_2^{p,q}(f)` is an isomorphism.
pub fn is_e2_weak_equivalence(f: &TowerMap) -> bool {
    let (a, b) = (f.source.filtered(), f.target.filtered());
    let (sx, tx) = (f.source.limit(), f.target.limit());
    let lo = sx.lo().min(tx.lo());
    let hi = sx.hi().max(tx.hi());
    let len = f.source.length() as i64;
    (lo..=hi).all(|m| (0..=len).all(|p| f.on_page_with(&a, &b, 2, p, m).is_isomorphism()))
}

/// Cubical diagram of towers of a common length.
#[derive(Clone, Debug)]
pub struct TowerDiagram {
    index: CubeIndex,
    towers: Vec<Tower>,
    edges: BTreeMap<(CubeVertex, usize), TowerMap>,
}

impl TowerDiagram {
    pub fn new(
        index: CubeIndex,
        towers: Vec<Tower>,
        edges: BTreeMap<(CubeVertex, usize), TowerMap>,
    ) -> Result<Self> {
        if towers.len() != index.vertex_count() {
            return Err(Error::invalid("towers", "one tower per vertex is required"));
        }
        let len = towers[0].length();
        if towers.iter().any(|t| t.length() != len) {
            return Err(Error::invalid("towers", "towers must share one length"));
        }
        for (a, c) in index.edges() {
            let f = edges
                .get(&(a, c.k))
                .ok_or_else(|| Error::invalid(format!("edges.{a}->{}", c.target), "missing edge"))?;
            if f.source() != &towers[index.position(a).unwrap()]
                || f.target() != &towers[index.position(c.target).unwrap()]
            {
                return Err(Error::invalid(
                    format!("edges.{a}->{}", c.target),
                    "edge does not match its vertex towers",
                ));
            }
        }
        let x = TowerDiagram {
            index,
            towers,
            edges,
        };
        for p in 0..=len {
            x.try_stage(p).map_err(|e| e.within(&format!("stage {p}")))?;
        }
        Ok(x)
    }

    /// Constant towers of length 0 on every vertex.
    pub fn constant(x: &CubicalDiagram) -> TowerDiagram {
        let idx = x.index();
        let towers = idx
            .vertices()
            .into_iter()
            .map(|v| Tower::constant(x.vertex(v), 0))
            .collect();
        let edges = idx
            .edges()
            .into_iter()
            .map(|(a, c)| ((a, c.k), TowerMap::constant(x.edge(a, c.k), 0)))
            .collect();
        TowerDiagram::new(idx, towers, edges).expect("constant towers of a valid diagram")
    }

    pub fn index(&self) -> CubeIndex {
        self.index
    }

    pub fn length(&self) -> usize {
        self.towers[0].length()
    }

    pub fn tower(&self, v: CubeVertex) -> &Tower {
        &self.towers[self.index.position(v).expect("vertex of the cube")]
    }

    pub fn edge(&self, a: CubeVertex, k: usize) -> &TowerMap {
        &self.edges[&(a, k)]
    }

    fn try_stage(&self, p: usize) -> Result<CubicalDiagram> {
        CubicalDiagram::from_fn(
            self.index,
            |v| self.tower(v).stage(p).clone(),
            |a, k| self.edge(a, k).component(p).clone(),
        )
    }

    /// The diagram of stage-`p` complexes.
    pub fn stage(&self, p: usize) -> CubicalDiagram {
        self.try_stage(p).expect("validated on construction")
    }

    /// Structure maps, stage `p` to stage `p - 1`.
    pub fn structure(&self, p: usize) -> DiagramMorphism {
        let maps = self
            .index
            .vertices()
            .into_iter()
            .map(|v| self.tower(v).structure(p))
            .collect();
        DiagramMorphism::vertexwise(self.stage(p), self.stage(p - 1), maps)
            .expect("structure maps are natural")
    }

    pub fn without_augmentation(&self) -> TowerDiagram {
        assert!(self.index.augmented());
        let idx = self.index.with_augmentation(false);
        let towers = idx.vertices().into_iter().map(|v| self.tower(v).clone()).collect();
        let edges = idx
            .edges()
            .into_iter()
            .map(|(a, c)| ((a, c.k), self.edge(a, c.k).clone()))
            .collect();
        TowerDiagram::new(idx, towers, edges).expect("restriction of a valid diagram")
    }
}

/// `(dX)_α = X_α[|α| - 1]`, all towers extended to length `L + n`.
pub fn d_construction(x: &TowerDiagram) -> Result<TowerDiagram> {
    if x.index.augmented() {
        return Err(Error::invalid("cube", "d-construction of an augmented diagram"));
    }
    let n = x.index.n();
    let total = x.length() + n;
    let shifted = |v: CubeVertex| {
        let s = v.weight() - 1;
        x.tower(v).extended(total - s).shift(s)
    };
    let towers: Vec<Tower> = x.index.vertices().into_iter().map(shifted).collect();
    let mut edges = BTreeMap::new();
    for (a, c) in x.index.edges() {
        let (src, tgt) = (shifted(a), shifted(c.target));
        let w = a.weight();
        let f = x.edge(a, c.k);
        let maps = (0..=total)
            .map(|p| {
                // X_α(p - w + 1) -> X_α(p - w) -> X_β(p - w)
                if p < w {
                    ChainMap::zero(src.stage(p), tgt.stage(p))
                } else {
                    let down = x.tower(a).structure(p - w + 1);
                    f.component(p - w).compose(&down).expect("composable")
                }
            })
            .collect();
        edges.insert((a, c.k), TowerMap::new(src, tgt, maps)?);
    }
    TowerDiagram::new(x.index, towers, edges)
}

/// `s_2(X)(p) = s(dX(p))`.
pub fn s2_simple(x: &TowerDiagram) -> Result<Tower> {
    let d = d_construction(x)?;
    let stages: Vec<ZComplex> = (0..=d.length())
        .map(|p| simple(&d.stage(p)))
        .collect::<Result<_>>()?;
    let maps = (1..=d.length())
        .map(|p| d.structure(p).simple_map())
        .collect::<Result<_>>()?;
    Tower::with_minimal_stab(stages, maps)
}

/// `λ: X_0 -> s_2(X)` for an augmented diagram of towers, stage by stage.
pub fn s2_augmentation(x: &TowerDiagram) -> Result<TowerMap> {
    if !x.index.augmented() {
        return Err(Error::invalid("cube", "diagram is not augmented"));
    }
    let plain = x.without_augmentation();
    let d = d_construction(&plain)?;
    let target = s2_simple(&plain)?;
    let len = d.length();
    let zero = CubeVertex::zero(x.index.width());
    let x0 = x.tower(zero).extended(len);
    let maps = (0..=len)
        .map(|p| {
            let stage = d.stage(p);
            let aug = CubicalDiagram::from_fn(
                x.index,
                |v| {
                    if v.is_zero() {
                        x0.stage(p).clone()
                    } else {
                        stage.vertex(v).clone()
                    }
                },
                |a, k| {
                    if a.is_zero() {
                        x.edge(a, k).component(p).clone()
                    } else {
                        stage.edge(a, k).clone()
                    }
                },
            )?;
            augmentation_map(&aug)
        })
        .collect::<Result<_>>()?;
    TowerMap::new(x0, target, maps)
}

/// One `(p, q)` spot of the comparison between `E_1(s_2 X)` and the total complex of the
/// vertexwise `E_1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComparisonSpot {
    pub p: i64,
    pub q: i64,
    /// The block inclusion is an isomorphism of groups.
    pub isomorphic: bool,
    /// It intertwines `d_1` of `s_2 X` with the total differential.
    pub commutes: bool,
}

struct VertexPiece {
    v: CubeVertex,
    /// Stage of the vertex tower.
    stage: usize,
    sub: Subquotient,
}

/// Checks, at every `(p, q)`, that `⊕_{α} E_1^{p-|α|+1, q}(X_α) -> E_1^{p,q}(s_2 X)` induced by
/// the block inclusion of fibers is an isomorphism commuting with the differentials, where the
/// total differential is `(-1)^{|α|-1} d_1(X_α) + Σ ε(α,k) E_1(X(α -> α+e_k))`.
pub fn comparison_lemma(x: &TowerDiagram) -> Result<Vec<ComparisonSpot>> {
    let s2 = s2_simple(x)?;
    let d = d_construction(x)?;
    let idx = x.index;
    let len = x.length();
    let fibers: Vec<Fiber> = (0..=s2.length() + 1).map(|p| s2_fiber(x, &d, &s2, p)).collect();
    let pieces = |p: usize, q: i64| -> Vec<VertexPiece> {
        idx.vertices()
            .into_iter()
            .filter_map(|v| {
                let st = (p + 1).checked_sub(v.weight())?;
                if st > len {
                    return None;
                }
                Some(VertexPiece {
                    v,
                    stage: st,
                    sub: x.tower(v).e1_term(st, q),
                })
            })
            .collect()
    };
    let mut out = Vec::new();
    for p in 0..=s2.length() {
        let st = s2.stage(p);
        for m in st.lo()..=st.hi() {
            let q = m + p as i64;
            let here = pieces(p, q);
            let next = pieces(p + 1, q);
            let phi = inclusion_map(x, &fibers[p], p, q, &here);
            let phi_next = inclusion_map(x, &fibers[p + 1], p + 1, q, &next);
            let total = total_differential(x, &here, &next, q);
            let d1 = connecting_map(&s2, p, q, &fibers[p], &fibers[p + 1]);
            out.push(ComparisonSpot {
                p: p as i64,
                q,
                isomorphic: phi.is_isomorphism(),
                commutes: d1.compose(&phi) == phi_next.compose(&total),
            });
        }
    }
    Ok(out)
}

pub fn comparison_lemma_holds(x: &TowerDiagram) -> Result<bool> {
    Ok(comparison_lemma(x)?.iter().all(|s| s.isomorphic && s.commutes))
}

/// Blockwise basis of the fiber of `s_2 X` at stage `p`, one block per vertex fiber.
fn s2_fiber(x: &TowerDiagram, d: &TowerDiagram, s2: &Tower, p: usize) -> Fiber {
    let stage = s2.stage(p);
    let dx = d.stage(p.min(d.length()));
    let layout = SimpleLayout::new(&dx);
    let idx = x.index;
    let mut basis = BTreeMap::new();
    for m in stage.lo()..=stage.hi() {
        let mut cols: Vec<IntVector> = Vec::new();
        for v in idx.vertices() {
            let block = layout.block(v, m);
            let inner = m + v.weight() as i64 - 1;
            let fb = match (p + 1).checked_sub(v.weight()) {
                Some(st) if p <= d.length() => x.tower(v).fiber_basis(st, inner),
                _ => IntMatrix::zeros(block.len(), 0),
            };
            assert_eq!(fb.rows(), block.len());
            for j in 0..fb.cols() {
                let mut col = vec![num_bigint::BigInt::from(0); stage.rank(m)];
                for (i, r) in block.clone().enumerate() {
                    col[r] = fb[(i, j)].clone();
                }
                cols.push(col);
            }
        }
        basis.insert(m, IntMatrix::from_columns(stage.rank(m), &cols));
    }
    Fiber::from_basis(stage, basis)
}

/// Block inclusion `⊕ E_1(X_α) -> E_1(s_2 X)` at `(p, q)`.
fn inclusion_map(x: &TowerDiagram, fiber: &Fiber, p: usize, q: i64, pieces: &[VertexPiece]) -> FgMap {
    let m = q - p as i64;
    let target = fiber.complex.homology_subquotient(m);
    let offsets = block_offsets(x, p, m);
    let mut cols = Vec::new();
    for piece in pieces {
        let off = offsets[&piece.v];
        let gens = piece.sub.generators();
        for j in 0..gens.cols() {
            let mut y = vec![num_bigint::BigInt::from(0); fiber.complex.rank(m)];
            for (i, g) in gens.column(j).into_iter().enumerate() {
                y[off + i] = g;
            }
            cols.push(target.coords(&y).expect("vertex cycles are s_2 fiber cycles"));
        }
    }
    let src = Presentation::direct_sum(
        &pieces.iter().map(|x| x.sub.presentation().clone()).collect::<Vec<_>>(),
    );
    FgMap::new(
        src,
        target.presentation().clone(),
        IntMatrix::from_columns(target.presentation().len(), &cols),
    )
}

/// Column offset of each vertex block in the `s_2` fiber basis at `(p, m)`.
fn block_offsets(x: &TowerDiagram, p: usize, m: i64) -> BTreeMap<CubeVertex, usize> {
    let mut out = BTreeMap::new();
    let mut off = 0;
    for v in x.index.vertices() {
        out.insert(v, off);
        if let Some(st) = (p + 1).checked_sub(v.weight()) {
            off += x.tower(v).fiber_basis(st, m + v.weight() as i64 - 1).cols();
        }
    }
    out
}

fn total_differential(x: &TowerDiagram, here: &[VertexPiece], next: &[VertexPiece], q: i64) -> FgMap {
    let blocks: Vec<Vec<Option<IntMatrix>>> = next
        .iter()
        .map(|b| {
            here.iter()
                .map(|a| {
                    if a.v == b.v {
                        let t = x.tower(a.v);
                        let f = t.d1(a.stage, q).matrix;
                        Some(if a.v.weight() % 2 == 0 { f.neg() } else { f })
                    } else if a.v.le(b.v) && b.v.weight() == a.v.weight() + 1 {
                        let k = (a.v.bits() ^ b.v.bits()).trailing_zeros() as usize;
                        let f = edge_on_e1(x, a, b, k, q).matrix;
                        Some(if a.v.sign(k) < 0 { f.neg() } else { f })
                    } else {
                        None
                    }
                })
                .collect()
        })
        .collect();
    let sp: Vec<Presentation> = here.iter().map(|x| x.sub.presentation().clone()).collect();
    let tp: Vec<Presentation> = next.iter().map(|x| x.sub.presentation().clone()).collect();
    FgMap::from_blocks(&sp, &tp, &blocks)
}

/// `E_1^{s,q}(X_α) -> E_1^{s,q}(X_β)` induced by the edge map on fibers.
fn edge_on_e1(x: &TowerDiagram, a: &VertexPiece, b: &VertexPiece, k: usize, q: i64) -> FgMap {
    let s = a.stage;
    let m = q - s as i64;
    let (ta, tb) = (x.tower(a.v), x.tower(b.v));
    let (ba, bb) = (ta.fiber_basis(s, m), tb.fiber_basis(s, m));
    let f = x.edge(a.v, k).component(s).component(m);
    let solver = ColumnEchelon::new(&bb);
    let gens = a.sub.generators();
    let cols: Vec<IntVector> = (0..gens.cols())
        .map(|j| {
            let w = f.mul(&ba).mul_vec(&gens.column(j));
            let y = solver.solve(&w).expect("edge maps carry fibers to fibers");
            b.sub.coords(&y).expect("edge maps carry cycles to cycles")
        })
        .collect();
    FgMap::new(
        a.sub.presentation().clone(),
        b.sub.presentation().clone(),
        IntMatrix::from_columns(b.sub.presentation().len(), &cols),
    )
}

/// Random diagram of towers: stupid truncations of a random diagram, plus a constant part.
pub fn random_tower_diagram<R: Rng>(
    rng: &mut R,
    index: CubeIndex,
    max_length: usize,
    b: &DiagramBounds,
) -> TowerDiagram {
    let x = random_diagram(rng, index, b);
    let y = random_diagram(rng, index, b);
    let len = rng.gen_range(1..=max_length.max(1));
    let mut cuts = vec![b.lo; len + 1];
    for t in cuts.iter_mut().take(len) {
        *t = rng.gen_range(b.lo..=b.hi + 1);
    }
    cuts.sort_unstable_by(|a, b| b.cmp(a));
    let tower = |v: CubeVertex| {
        let t = Tower::stupid_truncations(x.vertex(v), &cuts).expect("non-increasing cuts");
        direct_sum_towers(&t, &Tower::constant(y.vertex(v), len))
    };
    let towers: Vec<Tower> = index.vertices().into_iter().map(tower).collect();
    let mut edges = BTreeMap::new();
    for (a, c) in index.edges() {
        let (src, tgt) = (tower(a), tower(c.target));
        let maps = (0..=len)
            .map(|p| {
                let f = x.edge(a, c.k);
                let (s, t) = (quotient_above(f.source(), cuts[p]), quotient_above(f.target(), cuts[p]));
                let fp = ChainMap::from_fn(&s, &t, |m| {
                    if m >= cuts[p] {
                        f.component(m)
                    } else {
                        IntMatrix::zeros(t.rank(m), s.rank(m))
                    }
                })
                .expect("truncation is functorial");
                fp.direct_sum(y.edge(a, c.k))
            })
            .collect();
        edges.insert((a, c.k), TowerMap::new(src, tgt, maps).expect("natural in the tower"));
    }
    TowerDiagram::new(index, towers, edges).expect("random tower diagram")
}

fn direct_sum_towers(a: &Tower, b: &Tower) -> Tower {
    let stages = a
        .stages
        .iter()
        .zip(&b.stages)
        .map(|(x, y)| x.direct_sum(y))
        .collect();
    let maps = a.maps.iter().zip(&b.maps).map(|(f, g)| f.direct_sum(g)).collect();
    Tower::with_minimal_stab(stages, maps).expect("sum of towers")
}

/// Verdicts of the (F2) criterion on one augmented square.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct F2Verdict {
    /// `X_0 -> s_2` of the constant-tower square is an `E_2`-weak equivalence.
    pub e2_acyclic: bool,
    /// `0 -> H_n(X) -> H_n(X̃) ⊕ H_n(Y) -> H_n(Ỹ) -> 0` is exact for all `n`.
    pub exact: bool,
    pub agree: bool,
}

pub fn f2_tower_criterion(square: &CubicalDiagram) -> Result<F2Verdict> {
    let idx = square.index();
    if !idx.augmented() || idx.n() != 1 {
        return Err(Error::invalid("cube", "the (F2) criterion takes an augmented square"));
    }
    let lam = s2_augmentation(&TowerDiagram::constant(square))?;
    let e2_acyclic = is_e2_weak_equivalence(&lam);
    let exact = square_sequences_exact(square);
    Ok(F2Verdict {
        e2_acyclic,
        exact,
        agree: e2_acyclic == exact,
    })
}

/// Short exactness of `0 -> H_n(X_0) -> H_n(X_10) ⊕ H_n(X_01) -> H_n(X_11) -> 0`.
pub fn square_sequences_exact(square: &CubicalDiagram) -> bool {
    let window = crate::complex::union_window(
        square.vertex_complexes().iter().filter_map(|c| c.support()),
    );
    let Some((lo, hi)) = window else {
        return true;
    };
    (lo..=hi).all(|n| square_sequence_exact_at(square, n))
}

/// [`square_sequences_exact`] in the single degree `n`.
pub fn square_sequence_exact_at(square: &CubicalDiagram, n: i64) -> bool {
    let v = |s: &str| s.parse::<CubeVertex>().expect("vertex");
    let (o, a, b, t) = (v("00"), v("10"), v("01"), v("11"));
    {
        let sq = |x: CubeVertex| square.vertex(x).homology_subquotient(n);
        let (so, sa, sb, st) = (sq(o), sq(a), sq(b), sq(t));
        let h = |x: CubeVertex, k: usize, s: &Subquotient, t: &Subquotient| {
            s.induced_map(&square.edge(x, k).component(n), t).expect("chain maps")
        };
        let mid = [sa.presentation().clone(), sb.presentation().clone()];
        let one = [so.presentation().clone()];
        let top = [st.presentation().clone()];
        let into = FgMap::from_blocks(
            &one,
            &mid,
            &[vec![Some(h(o, 0, &so, &sa).matrix)], vec![Some(h(o, 1, &so, &sb).matrix)]],
        );
        let out = FgMap::from_blocks(
            &mid,
            &top,
            &[vec![Some(h(a, 1, &sa, &st).matrix.neg()), Some(h(b, 0, &sb, &st).matrix)]],
        );
        let zero_in = FgMap::zero(Presentation::default(), into.source.clone());
        let zero_out = FgMap::zero(out.target.clone(), Presentation::default());
        exact_at(&zero_in, &into) && exact_at(&into, &out) && exact_at(&out, &zero_out)
    }
}

/// `H(E_1, d_1)` at `(p, q)` from the direct `E_1` of a tower.
pub fn e2_from_fibers(t: &Tower, p: usize, q: i64) -> crate::zmod::FgAbGroup {
    let here = t.e1_term(p, q).presentation().clone();
    let incoming = if p >= 1 {
        t.d1(p - 1, q)
    } else {
        FgMap::zero(Presentation::default(), here.clone())
    };
    let outgoing = if p < t.length() {
        t.d1(p, q)
    } else {
        FgMap::zero(here, Presentation::default())
    };
    homology_at(&incoming, &outgoing).expect("d_1 squares to zero")
}
