//! Bounded chain complexes of finitely generated free abelian groups.
//!
//! Indexing is homological: `d_m : C_m -> C_{m-1}`, and `H_q` plays the role of `π_q`.
//! A complex is stored on a degree window `[lo, hi]`; ranks outside the window are zero.
//! Equality ignores zero-rank padding of the window.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::json::{matrix_to_raw, raw_to_matrix, RawMatrix};
use crate::zmod::{
    exact_at, kernel_basis, FgAbGroup, FgMap, IntMatrix, Subquotient,
};
use crate::{Error, Result};

#[derive(Clone, Debug)]
pub struct ZComplex {
    lo: i64,
    ranks: Vec<usize>,
    /// `d[i]` is `d_{lo + i}`; `d[0]` has zero rows.
    d: Vec<IntMatrix>,
}

impl ZComplex {
    /// `ranks[i]` is the rank in degree `lo + i`; `diffs` maps degree `m` to `d_m`.
    pub fn new(lo: i64, ranks: Vec<usize>, diffs: BTreeMap<i64, IntMatrix>) -> Result<Self> {
        let hi = lo + ranks.len() as i64 - 1;
        let rank_at = |m: i64| -> usize {
            if m < lo || m > hi {
                0
            } else {
                ranks[(m - lo) as usize]
            }
        };
        let mut d = Vec::with_capacity(ranks.len());
        for (i, &r) in ranks.iter().enumerate() {
            let m = lo + i as i64;
            d.push(IntMatrix::zeros(rank_at(m - 1), r));
        }
        for (m, mat) in diffs {
            let loc = format!("d.{m}");
            if mat.shape() != (rank_at(m - 1), rank_at(m)) {
                if mat.is_zero() && (m < lo || m > hi) {
                    continue;
                }
                return Err(Error::invalid(
                    loc,
                    format!(
                        "differential has shape {:?}, expected {:?}",
                        mat.shape(),
                        (rank_at(m - 1), rank_at(m))
                    ),
                ));
            }
            if m >= lo && m <= hi {
                d[(m - lo) as usize] = mat;
            } else if !mat.is_zero() {
                return Err(Error::invalid(loc, "differential outside the degree range"));
            }
        }
        let c = ZComplex { lo, ranks, d };
        c.check_square_zero()?;
        Ok(c)
    }

    fn check_square_zero(&self) -> Result<()> {
        for m in self.lo + 1..=self.hi() {
            if !self.diff(m - 1).mul(&self.diff(m)).is_zero() {
                return Err(Error::invalid(
                    format!("d.{m}"),
                    format!("d_{} ∘ d_{m} is not zero", m - 1),
                ));
            }
        }
        Ok(())
    }

    /// The zero complex.
    pub fn zero() -> Self {
        ZComplex {
            lo: 0,
            ranks: vec![0],
            d: vec![IntMatrix::zeros(0, 0)],
        }
    }

    /// `Z^rank` in a single degree.
    pub fn concentrated(degree: i64, rank: usize) -> Self {
        ZComplex {
            lo: degree,
            ranks: vec![rank],
            d: vec![IntMatrix::zeros(0, rank)],
        }
    }

    /// Two-term complex `Z^cols -> Z^rows` with the map in degree `top`.
    pub fn two_term(top: i64, m: IntMatrix) -> Self {
        let mut diffs = BTreeMap::new();
        let ranks = vec![m.rows(), m.cols()];
        diffs.insert(top, m);
        ZComplex::new(top - 1, ranks, diffs).expect("two-term complex is valid")
    }

    /// Complex on the window `[lo, hi]` from a differential callback; validated.
    pub fn from_fn(
        lo: i64,
        hi: i64,
        rank: impl Fn(i64) -> usize,
        diff: impl Fn(i64) -> IntMatrix,
    ) -> Result<Self> {
        if hi < lo {
            return Ok(ZComplex::zero());
        }
        let ranks: Vec<usize> = (lo..=hi).map(&rank).collect();
        let diffs = (lo + 1..=hi).map(|m| (m, diff(m))).collect();
        ZComplex::new(lo, ranks, diffs)
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.ranks.len() as i64 - 1
    }

    pub fn rank(&self, m: i64) -> usize {
        if m < self.lo || m > self.hi() {
            0
        } else {
            self.ranks[(m - self.lo) as usize]
        }
    }

    pub fn total_rank(&self) -> usize {
        self.ranks.iter().sum()
    }

    /// `d_m : C_m -> C_{m-1}`, zero outside the window.
    pub fn diff(&self, m: i64) -> IntMatrix {
        if m < self.lo || m > self.hi() {
            IntMatrix::zeros(self.rank(m - 1), self.rank(m))
        } else {
            self.d[(m - self.lo) as usize].clone()
        }
    }

    /// Degrees with nonzero rank, as a (possibly empty) window.
    pub fn support(&self) -> Option<(i64, i64)> {
        let first = self.ranks.iter().position(|&r| r > 0)?;
        let last = self.ranks.iter().rposition(|&r| r > 0)?;
        Some((self.lo + first as i64, self.lo + last as i64))
    }

    /// Same complex on the smallest window (degree 0 when empty).
    pub fn trimmed(&self) -> ZComplex {
        match self.support() {
            None => ZComplex::zero(),
            Some((a, b)) => {
                let diffs = (a + 1..=b).map(|m| (m, self.diff(m))).collect();
                ZComplex::new(a, (a..=b).map(|m| self.rank(m)).collect(), diffs)
                    .expect("restriction of a valid complex")
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.total_rank() == 0
    }

    /// Cycles and boundaries in degree `q`.
    pub fn homology_subquotient(&self, q: i64) -> Subquotient {
        let cycles = kernel_basis(&self.diff(q));
        let boundaries = self.diff(q + 1);
        Subquotient::new(self.rank(q), &cycles, &boundaries).expect("boundaries are cycles")
    }

    pub fn homology(&self, q: i64) -> FgAbGroup {
        if self.rank(q) == 0 {
            return FgAbGroup::trivial();
        }
        self.homology_subquotient(q).group()
    }

    /// Homology window that can be nonzero.
    pub fn homology_range(&self) -> (i64, i64) {
        self.support().unwrap_or((0, -1))
    }

    pub fn is_acyclic(&self) -> bool {
        let (a, b) = self.homology_range();
        (a..=b).all(|q| self.homology(q).is_trivial())
    }

    pub fn euler_characteristic(&self) -> i64 {
        (self.lo..=self.hi())
            .map(|m| {
                let r = self.rank(m) as i64;
                if m.rem_euclid(2) == 0 {
                    r
                } else {
                    -r
                }
            })
            .sum()
    }

    pub fn direct_sum(&self, other: &ZComplex) -> ZComplex {
        Self::direct_sum_all(&[self, other])
    }

    pub fn direct_sum_all(parts: &[&ZComplex]) -> ZComplex {
        let Some((lo, hi)) = union_window(parts.iter().map(|c| (c.lo, c.hi()))) else {
            return ZComplex::zero();
        };
        ZComplex::from_fn(
            lo,
            hi,
            |m| parts.iter().map(|c| c.rank(m)).sum(),
            |m| {
                let blocks: Vec<IntMatrix> = parts.iter().map(|c| c.diff(m)).collect();
                IntMatrix::block_diag(&blocks)
            },
        )
        .expect("direct sum of valid complexes")
    }

    /// `loop(C)_m = C_{m+1}` with differential `-d`.
    pub fn loop_space(&self) -> ZComplex {
        self.shifted_down(1)
    }

    /// `n`-fold loop: `C_{m+n}` in degree `m`, differential `(-1)^n d`.
    pub fn shifted_down(&self, n: i64) -> ZComplex {
        let sign_odd = n.rem_euclid(2) == 1;
        ZComplex::from_fn(
            self.lo - n,
            self.hi() - n,
            |m| self.rank(m + n),
            |m| {
                let d = self.diff(m + n);
                if sign_odd {
                    d.neg()
                } else {
                    d
                }
            },
        )
        .expect("shift of a valid complex")
    }

    pub fn to_doc(&self) -> ComplexDoc {
        let t = self.trimmed();
        let hi = t.hi();
        ComplexDoc {
            lo: t.lo,
            hi,
            ranks: t.ranks.clone(),
            d: (t.lo + 1..=hi)
                .filter(|&m| !t.diff(m).is_zero())
                .map(|m| (m, matrix_to_raw(&t.diff(m))))
                .collect(),
        }
    }

    pub fn from_doc(doc: &ComplexDoc) -> Result<Self> {
        if doc.hi < doc.lo {
            if doc.ranks.iter().all(|&r| r == 0) {
                return Ok(ZComplex::zero());
            }
            return Err(Error::invalid("hi", "hi is below lo"));
        }
        let expected = (doc.hi - doc.lo + 1) as usize;
        if doc.ranks.len() != expected {
            return Err(Error::invalid(
                "ranks",
                format!("expected {expected} ranks for [{}, {}]", doc.lo, doc.hi),
            ));
        }
        let rank_at = |m: i64| -> usize {
            if m < doc.lo || m > doc.hi {
                0
            } else {
                doc.ranks[(m - doc.lo) as usize]
            }
        };
        let mut diffs = BTreeMap::new();
        for (&m, raw) in &doc.d {
            let mat = raw_to_matrix(raw, rank_at(m - 1), rank_at(m), &format!("d.{m}"))?;
            diffs.insert(m, mat);
        }
        ZComplex::new(doc.lo, doc.ranks.clone(), diffs)
    }
}

impl PartialEq for ZComplex {
    fn eq(&self, other: &Self) -> bool {
        let lo = self.lo.min(other.lo);
        let hi = self.hi().max(other.hi());
        (lo..=hi).all(|m| self.rank(m) == other.rank(m))
            && (lo..=hi + 1).all(|m| self.diff(m) == other.diff(m))
    }
}

impl Eq for ZComplex {}

pub(crate) fn union_window(ws: impl Iterator<Item = (i64, i64)>) -> Option<(i64, i64)> {
    ws.fold(None, |acc, (a, b)| match acc {
        None => Some((a, b)),
        Some((x, y)) => Some((x.min(a), y.max(b))),
    })
}

/// Serialized form of a complex.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexDoc {
    pub lo: i64,
    pub hi: i64,
    pub ranks: Vec<usize>,
    #[serde(default)]
    pub d: BTreeMap<i64, RawMatrix>,
}

/// Serialized chain map: degree to matrix, missing degrees are zero.
pub type ChainMapDoc = BTreeMap<i64, RawMatrix>;

/// Degreewise map `f_m : A_m -> B_m` commuting with the differentials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainMap {
    source: ZComplex,
    target: ZComplex,
    maps: BTreeMap<i64, IntMatrix>,
}

impl ChainMap {
    pub fn new(
        source: ZComplex,
        target: ZComplex,
        maps: BTreeMap<i64, IntMatrix>,
    ) -> Result<Self> {
        let mut clean = BTreeMap::new();
        for (m, f) in maps {
            let shape = (target.rank(m), source.rank(m));
            if f.shape() != shape {
                if f.is_zero() && (shape.0 == 0 || shape.1 == 0) {
                    continue;
                }
                return Err(Error::invalid(
                    format!("{m}"),
                    format!("map has shape {:?}, expected {:?}", f.shape(), shape),
                ));
            }
            if !f.is_zero() {
                clean.insert(m, f);
            }
        }
        let f = ChainMap {
            source,
            target,
            maps: clean,
        };
        f.check_commutes()?;
        Ok(f)
    }

    fn check_commutes(&self) -> Result<()> {
        let Some((lo, hi)) = union_window(
            [
                (self.source.lo, self.source.hi()),
                (self.target.lo, self.target.hi()),
            ]
            .into_iter(),
        ) else {
            return Ok(());
        };
        for m in lo..=hi + 1 {
            let left = self.component(m - 1).mul(&self.source.diff(m));
            let right = self.target.diff(m).mul(&self.component(m));
            if left != right {
                return Err(Error::invalid(
                    format!("{m}"),
                    format!("f_{} ∘ d_{m} differs from d_{m} ∘ f_{m}", m - 1),
                ));
            }
        }
        Ok(())
    }

    pub fn from_fn(
        source: &ZComplex,
        target: &ZComplex,
        f: impl Fn(i64) -> IntMatrix,
    ) -> Result<Self> {
        let maps = match union_window(
            [(source.lo, source.hi()), (target.lo, target.hi())].into_iter(),
        ) {
            None => BTreeMap::new(),
            Some((lo, hi)) => (lo..=hi).map(|m| (m, f(m))).collect(),
        };
        ChainMap::new(source.clone(), target.clone(), maps)
    }

    pub fn identity(c: &ZComplex) -> Self {
        ChainMap::from_fn(c, c, |m| IntMatrix::identity(c.rank(m))).expect("identity")
    }

    pub fn zero(source: &ZComplex, target: &ZComplex) -> Self {
        ChainMap {
            source: source.clone(),
            target: target.clone(),
            maps: BTreeMap::new(),
        }
    }

    pub fn source(&self) -> &ZComplex {
        &self.source
    }

    pub fn target(&self) -> &ZComplex {
        &self.target
    }

    pub fn component(&self, m: i64) -> IntMatrix {
        self.maps
            .get(&m)
            .cloned()
            .unwrap_or_else(|| IntMatrix::zeros(self.target.rank(m), self.source.rank(m)))
    }

    pub fn is_zero(&self) -> bool {
        self.maps.is_empty()
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &ChainMap) -> Result<ChainMap> {
        if first.target != self.source {
            return Err(Error::Dimension(
                "composition of chain maps with mismatched middle complex".into(),
            ));
        }
        ChainMap::from_fn(&first.source, &self.target, |m| {
            self.component(m).mul(&first.component(m))
        })
    }

    pub fn add(&self, other: &ChainMap) -> Result<ChainMap> {
        if self.source != other.source || self.target != other.target {
            return Err(Error::Dimension("sum of chain maps with different ends".into()));
        }
        ChainMap::from_fn(&self.source, &self.target, |m| {
            self.component(m).add(&other.component(m))
        })
    }

    pub fn neg(&self) -> ChainMap {
        ChainMap {
            source: self.source.clone(),
            target: self.target.clone(),
            maps: self.maps.iter().map(|(&m, f)| (m, f.neg())).collect(),
        }
    }

    pub fn direct_sum(&self, other: &ChainMap) -> ChainMap {
        let s = self.source.direct_sum(&other.source);
        let t = self.target.direct_sum(&other.target);
        ChainMap::from_fn(&s, &t, |m| {
            IntMatrix::block_diag(&[self.component(m), other.component(m)])
        })
        .expect("sum of chain maps")
    }

    /// `cone(f)_m = A_{m-1} + B_m`, `D(a, b) = (-da, f a + db)`.
    pub fn cone(&self) -> ZComplex {
        let (a, b) = (&self.source, &self.target);
        let lo = (a.lo + 1).min(b.lo);
        let hi = (a.hi() + 1).max(b.hi());
        ZComplex::from_fn(
            lo,
            hi,
            |m| a.rank(m - 1) + b.rank(m),
            |m| {
                let mut d = IntMatrix::zeros(a.rank(m - 2) + b.rank(m - 1), a.rank(m - 1) + b.rank(m));
                d.set_block(0, 0, &a.diff(m - 1).neg());
                d.set_block(a.rank(m - 2), 0, &self.component(m - 1));
                d.set_block(a.rank(m - 2), a.rank(m - 1), &b.diff(m));
                d
            },
        )
        .expect("cone of a chain map")
    }

    /// `fiber(f)_m = A_m + B_{m+1}`, `D(a, b) = (da, f a - db)`.
    pub fn fiber(&self) -> ZComplex {
        let (a, b) = (&self.source, &self.target);
        let lo = a.lo.min(b.lo - 1);
        let hi = a.hi().max(b.hi() - 1);
        ZComplex::from_fn(
            lo,
            hi,
            |m| a.rank(m) + b.rank(m + 1),
            |m| {
                let mut d = IntMatrix::zeros(a.rank(m - 1) + b.rank(m), a.rank(m) + b.rank(m + 1));
                d.set_block(0, 0, &a.diff(m));
                d.set_block(a.rank(m - 1), 0, &self.component(m));
                d.set_block(a.rank(m - 1), a.rank(m), &b.diff(m + 1).neg());
                d
            },
        )
        .expect("fiber of a chain map")
    }

    /// Projection `fiber(f) -> A`.
    pub fn fiber_projection(&self) -> ChainMap {
        let fib = self.fiber();
        let a = &self.source;
        ChainMap::from_fn(&fib, a, |m| {
            IntMatrix::identity(a.rank(m)).hstack(&IntMatrix::zeros(a.rank(m), self.target.rank(m + 1)))
        })
        .expect("fiber projection")
    }

    /// Inclusion `loop(B) -> fiber(f)`; on homology it is the connecting map `H_{m+1}(B) -> H_m(fiber)`.
    pub fn fiber_inclusion(&self) -> ChainMap {
        let fib = self.fiber();
        let b = &self.target;
        let lb = b.loop_space();
        ChainMap::from_fn(&lb, &fib, |m| {
            IntMatrix::zeros(self.source.rank(m), b.rank(m + 1)).vstack(&IntMatrix::identity(b.rank(m + 1)))
        })
        .expect("fiber inclusion")
    }

    /// Map of fibers induced by a commuting square `a: A -> A'`, `b: B -> B'` over
    /// `self: A -> B` and `other: A' -> B'`: `(x, y) -> (a x, b y)`.
    pub fn fiber_map(&self, other: &ChainMap, a: &ChainMap, b: &ChainMap) -> Result<ChainMap> {
        let src = self.fiber();
        let tgt = other.fiber();
        ChainMap::from_fn(&src, &tgt, |m| {
            IntMatrix::block_diag(&[a.component(m), b.component(m + 1)])
        })
    }

    /// Matrix of `H_q(f)` between the canonical presentations of source and target homology.
    pub fn on_homology(&self, q: i64) -> FgMap {
        let s = self.source.homology_subquotient(q);
        let t = self.target.homology_subquotient(q);
        s.induced_map(&self.component(q), &t)
            .expect("chain maps carry cycles to cycles")
    }

    pub fn homology_window(&self) -> (i64, i64) {
        union_window(
            [self.source.homology_range(), self.target.homology_range()]
                .into_iter()
                .filter(|(a, b)| a <= b),
        )
        .unwrap_or((0, -1))
    }

    /// `cone(f)` is acyclic.
    pub fn is_quasi_iso(&self) -> bool {
        self.cone().is_acyclic()
    }

    /// Every `H_q(f)` is an isomorphism; independent of the cone construction.
    pub fn induces_homology_isos(&self) -> bool {
        let (a, b) = self.homology_window();
        (a..=b).all(|q| self.on_homology(q).is_isomorphism())
    }

    /// Chain isomorphism: every component square and invertible over the integers.
    pub fn is_isomorphism(&self) -> bool {
        let (a, b) = self.homology_window();
        (a..=b).all(|m| {
            let f = self.component(m);
            f.rows() == f.cols() && crate::zmod::inverse_unimodular(&f).is_some()
        })
    }

    pub fn to_doc(&self) -> ChainMapDoc {
        self.maps
            .iter()
            .map(|(&m, f)| (m, matrix_to_raw(f)))
            .collect()
    }

    pub fn from_doc(source: &ZComplex, target: &ZComplex, doc: &ChainMapDoc) -> Result<Self> {
        let mut maps = BTreeMap::new();
        for (&m, raw) in doc {
            let mat = raw_to_matrix(raw, target.rank(m), source.rank(m), &format!("{m}"))?;
            maps.insert(m, mat);
        }
        ChainMap::new(source.clone(), target.clone(), maps)
    }
}

/// One node of a long exact sequence and whether it is exact there.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExactnessNode {
    pub node: String,
    pub degree: i64,
    pub exact: bool,
}

/// Checks `... -> H_m(fib f) -> H_m(A) -> H_m(B) -> H_{m-1}(fib f) -> ...` node by node for
/// `m` in `[lo, hi]`.
pub fn fiber_sequence_exactness(f: &ChainMap, lo: i64, hi: i64) -> Vec<ExactnessNode> {
    let p = f.fiber_projection();
    let i = f.fiber_inclusion();
    let mut out = Vec::new();
    for m in lo..=hi {
        // at H_m(fiber): loop(B) -> fiber -> A
        out.push(ExactnessNode {
            node: "fiber".into(),
            degree: m,
            exact: exact_at(&i.on_homology(m), &p.on_homology(m)),
        });
        out.push(ExactnessNode {
            node: "source".into(),
            degree: m,
            exact: exact_at(&p.on_homology(m), &f.on_homology(m)),
        });
        // connecting map H_m(B) -> H_{m-1}(fiber), b -> (0, b)
        let fm = f.on_homology(m);
        let conn = f
            .target
            .homology_subquotient(m)
            .induced_map(&i.component(m - 1), &i.target.homology_subquotient(m - 1))
            .expect("connecting map is well defined");
        out.push(ExactnessNode {
            node: "target".into(),
            degree: m,
            exact: exact_at(&fm, &conn),
        });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn times(c: i64) -> ZComplex {
        ZComplex::two_term(1, IntMatrix::from_i64(&[&[c]]))
    }

    fn scalar_map(c: i64) -> ChainMap {
        let z = ZComplex::concentrated(0, 1);
        ChainMap::from_fn(&z, &z, |m| {
            if m == 0 {
                IntMatrix::from_i64(&[&[c]])
            } else {
                IntMatrix::zeros(z.rank(m), z.rank(m))
            }
        })
        .unwrap()
    }

    #[test]
    fn homology_examples() {
        let z = ZComplex::concentrated(0, 1);
        assert_eq!(z.homology(0), FgAbGroup::free(1));
        assert!(z.homology(1).is_trivial());
        let c = times(2);
        assert_eq!(c.homology(0).to_string(), "Z/2");
        assert!(c.homology(1).is_trivial());
        let c0 = times(0);
        assert_eq!(c0.homology(0), FgAbGroup::free(1));
        assert_eq!(c0.homology(1), FgAbGroup::free(1));
    }

    #[test]
    fn invalid_differential_reports_degree() {
        let mut diffs = BTreeMap::new();
        diffs.insert(1, IntMatrix::from_i64(&[&[1]]));
        diffs.insert(2, IntMatrix::from_i64(&[&[1]]));
        let err = ZComplex::new(0, vec![1, 1, 1], diffs).unwrap_err();
        assert!(err.to_string().contains("d.2"), "{err}");
    }

    #[test]
    fn fiber_examples() {
        let c = times(3);
        assert!(ChainMap::identity(&c).fiber().is_acyclic());
        let zero = ChainMap::zero(&ZComplex::zero(), &c);
        assert_eq!(zero.fiber(), c.loop_space());
        let f = scalar_map(2).fiber();
        assert!(f.homology(0).is_trivial());
        assert_eq!(f.homology(-1).to_string(), "Z/2");
    }

    #[test]
    fn cone_examples() {
        let c = times(3);
        assert!(ChainMap::identity(&c).cone().is_acyclic());
        assert_eq!(ChainMap::zero(&ZComplex::zero(), &c).cone(), c);
        assert_eq!(scalar_map(2).cone().homology(0).to_string(), "Z/2");
    }

    #[test]
    fn loop_examples() {
        let l = ZComplex::concentrated(0, 1).loop_space();
        assert_eq!(l, ZComplex::concentrated(-1, 1));
        assert!(ChainMap::identity(&times(1)).cone().loop_space().is_acyclic());
        assert_eq!(times(2).loop_space().homology(-1).to_string(), "Z/2");
    }

    #[test]
    fn quasi_iso_examples() {
        let c = times(2);
        assert!(ChainMap::identity(&c).is_quasi_iso());
        assert!(!scalar_map(2).is_quasi_iso());
        // C -> C + cone(id_D)
        let d = ZComplex::concentrated(0, 2);
        let acyclic = ChainMap::identity(&d).cone();
        let big = c.direct_sum(&acyclic);
        let incl = ChainMap::from_fn(&c, &big, |m| {
            IntMatrix::identity(c.rank(m)).vstack(&IntMatrix::zeros(acyclic.rank(m), c.rank(m)))
        })
        .unwrap();
        assert!(incl.is_quasi_iso());
        assert!(incl.induces_homology_isos());
    }

    #[test]
    fn non_commuting_map_rejected() {
        let c = times(1);
        let mut maps = BTreeMap::new();
        maps.insert(1, IntMatrix::from_i64(&[&[1]]));
        assert!(ChainMap::new(c.clone(), c, maps).is_err());
    }

    #[test]
    fn long_exact_sequence_of_times_two() {
        let f = scalar_map(2);
        assert!(fiber_sequence_exactness(&f, -2, 2).iter().all(|n| n.exact));
    }

    #[test]
    fn doc_round_trip() {
        let c = times(2);
        let json = serde_json::to_string(&c.to_doc()).unwrap();
        assert_eq!(json, r#"{"lo":0,"hi":1,"ranks":[1,1],"d":{"1":[[2]]}}"#);
        let back: ComplexDoc = serde_json::from_str(&json).unwrap();
        assert_eq!(ZComplex::from_doc(&back).unwrap(), c);
    }
}
