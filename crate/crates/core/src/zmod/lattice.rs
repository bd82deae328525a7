//! Subquotients of free lattices and homomorphisms between their presentations.
//!
//! Every group the engine reads off (homology, spectral sequence terms, abutment filtration
//! pieces) is a quotient `N / R` of two sublattices `R <= N <= Z^n`. A [`Subquotient`] fixes a
//! Smith-adapted basis of `N` so that classes get canonical coordinates in a [`Presentation`]
//! `Z/m_1 + ... + Z/m_k` (torsion first, then free summands with `m_i = 0`). Maps between such
//! groups are then plain integer matrices, see [`FgMap`].

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::echelon::{image_basis, kernel_basis, ColumnEchelon};
use super::group::FgAbGroup;
use super::matrix::{IntMatrix, IntVector};
use super::snf::snf;
use crate::{Error, Result};

/// `Z/m_1 + ... + Z/m_k`, no `m_i` equal to one; zero moduli are free summands.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Presentation {
    pub moduli: Vec<BigInt>,
}

impl Presentation {
    pub fn free(n: usize) -> Self {
        Presentation {
            moduli: vec![BigInt::zero(); n],
        }
    }

    pub fn len(&self) -> usize {
        self.moduli.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moduli.is_empty()
    }

    pub fn group(&self) -> FgAbGroup {
        FgAbGroup::from_cyclic(&self.moduli)
    }

    /// Diagonal relation matrix; its columns generate the relation lattice.
    pub fn relations(&self) -> IntMatrix {
        let n = self.len();
        let mut r = IntMatrix::zeros(n, n);
        for (i, m) in self.moduli.iter().enumerate() {
            r[(i, i)] = m.clone();
        }
        r
    }

    pub fn reduce(&self, v: &mut [BigInt]) {
        for (x, m) in v.iter_mut().zip(&self.moduli) {
            if !m.is_zero() {
                *x = x.mod_floor(m);
            }
        }
    }

    pub fn direct_sum(parts: &[Presentation]) -> Presentation {
        Presentation {
            moduli: parts.iter().flat_map(|p| p.moduli.iter().cloned()).collect(),
        }
    }
}

/// The group `N / R` for lattices `R <= N <= Z^ambient`.
#[derive(Clone, Debug)]
pub struct Subquotient {
    ambient: usize,
    num_solver: ColumnEchelon,
    /// Rows of the Smith row transform restricted to the kept coordinates.
    coord_rows: IntMatrix,
    generators: IntMatrix,
    presentation: Presentation,
}

impl Subquotient {
    /// `num` and `den` hold generators as columns; `den` must lie inside `num`.
    pub fn new(ambient: usize, num: &IntMatrix, den: &IntMatrix) -> Result<Self> {
        assert_eq!(num.rows(), ambient);
        assert_eq!(den.rows(), ambient);
        let basis = image_basis(num);
        let num_solver = ColumnEchelon::new(&basis);
        let k = basis.cols();
        let mut rel_cols = Vec::with_capacity(den.cols());
        for j in 0..den.cols() {
            let g = den.column(j);
            match num_solver.solve(&g) {
                Some(c) => rel_cols.push(c[..k].to_vec()),
                None => {
                    return Err(Error::Internal(
                        "denominator lattice is not contained in numerator".into(),
                    ))
                }
            }
        }
        let rel = IntMatrix::from_columns(k, &rel_cols);
        let s = snf(&rel);
        let mut keep = Vec::new();
        let mut moduli = Vec::new();
        for i in 0..k {
            let d = if i < s.rank {
                s.d[(i, i)].clone()
            } else {
                BigInt::zero()
            };
            if !d.is_one() {
                keep.push(i);
                moduli.push(d);
            }
        }
        let all: Vec<usize> = (0..k).collect();
        let coord_rows = s.u.select(&keep, &all);
        let generators = basis.mul(&s.u_inv.select(&all, &keep));
        Ok(Subquotient {
            ambient,
            num_solver,
            coord_rows,
            generators,
            presentation: Presentation { moduli },
        })
    }

    /// `Z^ambient / R`.
    pub fn quotient(ambient: usize, den: &IntMatrix) -> Result<Self> {
        Self::new(ambient, &IntMatrix::identity(ambient), den)
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn group(&self) -> FgAbGroup {
        self.presentation.group()
    }

    /// Representatives in `Z^ambient` of the presentation generators, as columns.
    pub fn generators(&self) -> &IntMatrix {
        &self.generators
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.num_solver.solve(v).is_some()
    }

    /// Coordinates of the class of `v`, or `None` when `v` is not in the numerator.
    pub fn coords(&self, v: &[BigInt]) -> Option<IntVector> {
        let c = self.num_solver.solve(v)?;
        let k = self.coord_rows.cols();
        let mut y = self.coord_rows.mul_vec(&c[..k]);
        self.presentation.reduce(&mut y);
        Some(y)
    }

    pub fn is_zero_class(&self, v: &[BigInt]) -> Option<bool> {
        self.coords(v).map(|c| c.iter().all(Zero::is_zero))
    }

    /// Matrix of the map induced by `f: Z^ambient -> Z^target.ambient` on classes.
    pub fn induced_map(&self, f: &IntMatrix, target: &Subquotient) -> Result<FgMap> {
        assert_eq!(f.cols(), self.ambient);
        assert_eq!(f.rows(), target.ambient);
        let mut cols = Vec::with_capacity(self.generators.cols());
        for j in 0..self.generators.cols() {
            let image = f.mul_vec(&self.generators.column(j));
            let c = target.coords(&image).ok_or_else(|| {
                Error::Internal("map does not carry numerator into target numerator".into())
            })?;
            cols.push(c);
        }
        Ok(FgMap::new(
            self.presentation.clone(),
            target.presentation.clone(),
            IntMatrix::from_columns(target.presentation.len(), &cols),
        ))
    }
}

/// Homomorphism between presented groups, given on generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FgMap {
    pub source: Presentation,
    pub target: Presentation,
    pub matrix: IntMatrix,
}

impl FgMap {
    pub fn new(source: Presentation, target: Presentation, mut matrix: IntMatrix) -> Self {
        assert_eq!(matrix.shape(), (target.len(), source.len()));
        for j in 0..matrix.cols() {
            for (i, m) in target.moduli.iter().enumerate() {
                if !m.is_zero() {
                    let v = matrix[(i, j)].mod_floor(m);
                    matrix[(i, j)] = v;
                }
            }
        }
        FgMap {
            source,
            target,
            matrix,
        }
    }

    pub fn zero(source: Presentation, target: Presentation) -> Self {
        let m = IntMatrix::zeros(target.len(), source.len());
        FgMap::new(source, target, m)
    }

    pub fn identity(p: Presentation) -> Self {
        let m = IntMatrix::identity(p.len());
        FgMap::new(p.clone(), p, m)
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }

    pub fn compose(&self, first: &FgMap) -> FgMap {
        assert_eq!(first.target, self.source, "composition of incompatible maps");
        FgMap::new(
            first.source.clone(),
            self.target.clone(),
            self.matrix.mul(&first.matrix),
        )
    }

    /// `{x in Z^a : M x in R_target}`, a lattice containing the source relations.
    pub fn kernel_lattice(&self) -> IntMatrix {
        let a = self.source.len();
        let stacked = self.matrix.hstack(&self.target.relations());
        let k = kernel_basis(&stacked);
        let rows: Vec<usize> = (0..a).collect();
        let cols: Vec<usize> = (0..k.cols()).collect();
        let proj = k.select(&rows, &cols);
        image_basis(&proj.hstack(&self.source.relations()))
    }

    /// `M Z^a + R_target`.
    pub fn image_lattice(&self) -> IntMatrix {
        image_basis(&self.matrix.hstack(&self.target.relations()))
    }

    pub fn kernel(&self) -> FgAbGroup {
        Subquotient::new(
            self.source.len(),
            &self.kernel_lattice(),
            &self.source.relations(),
        )
        .expect("relations lie in kernel lattice")
        .group()
    }

    pub fn cokernel(&self) -> FgAbGroup {
        Subquotient::quotient(self.target.len(), &self.image_lattice())
            .expect("quotient of the whole lattice")
            .group()
    }

    pub fn image(&self) -> FgAbGroup {
        Subquotient::new(
            self.target.len(),
            &self.image_lattice(),
            &self.target.relations(),
        )
        .expect("relations lie in image lattice")
        .group()
    }

    pub fn is_isomorphism(&self) -> bool {
        self.kernel().is_trivial() && self.cokernel().is_trivial()
    }

    /// Some `x` with `M x = y` in the target group.
    pub fn preimage(&self, y: &[BigInt]) -> Option<IntVector> {
        let a = self.source.len();
        let stacked = self.matrix.hstack(&self.target.relations());
        let z = ColumnEchelon::new(&stacked).solve(y)?;
        let mut x = z[..a].to_vec();
        self.source.reduce(&mut x);
        Some(x)
    }

    /// Inverse of an isomorphism.
    pub fn inverse(&self) -> Option<FgMap> {
        if !self.is_isomorphism() {
            return None;
        }
        let n = self.target.len();
        let mut cols = Vec::with_capacity(n);
        for j in 0..n {
            let mut e = vec![BigInt::zero(); n];
            e[j] = BigInt::one();
            cols.push(self.preimage(&e)?);
        }
        Some(FgMap::new(
            self.target.clone(),
            self.source.clone(),
            IntMatrix::from_columns(self.source.len(), &cols),
        ))
    }

    /// Block map `A_1 + ... -> B_1 + ...` from a grid of blocks indexed `[target][source]`.
    pub fn from_blocks(sources: &[Presentation], targets: &[Presentation], blocks: &[Vec<Option<IntMatrix>>]) -> FgMap {
        let src = Presentation::direct_sum(sources);
        let tgt = Presentation::direct_sum(targets);
        let mut m = IntMatrix::zeros(tgt.len(), src.len());
        let mut r0 = 0;
        for (ti, t) in targets.iter().enumerate() {
            let mut c0 = 0;
            for (si, s) in sources.iter().enumerate() {
                if let Some(b) = &blocks[ti][si] {
                    assert_eq!(b.shape(), (t.len(), s.len()));
                    m.add_block(r0, c0, b);
                }
                c0 += s.len();
            }
            r0 += t.len();
        }
        FgMap::new(src, tgt, m)
    }
}

/// Two lattices given by generators are equal.
pub fn same_lattice(a: &IntMatrix, b: &IntMatrix) -> bool {
    let ea = ColumnEchelon::new(a);
    let eb = ColumnEchelon::new(b);
    (0..a.cols()).all(|j| eb.solve(&a.column(j)).is_some())
        && (0..b.cols()).all(|j| ea.solve(&b.column(j)).is_some())
}

/// Homology `ker(outgoing) / im(incoming)` at the middle of `A -> B -> C`.
pub fn homology_at(incoming: &FgMap, outgoing: &FgMap) -> Result<FgAbGroup> {
    assert_eq!(incoming.target, outgoing.source);
    let b = outgoing.source.len();
    Ok(Subquotient::new(b, &outgoing.kernel_lattice(), &incoming.image_lattice())?.group())
}

/// Exactness of `A -> B -> C` at `B`, by comparing image and kernel lattices.
pub fn exact_at(incoming: &FgMap, outgoing: &FgMap) -> bool {
    assert_eq!(incoming.target, outgoing.source);
    same_lattice(&incoming.image_lattice(), &outgoing.kernel_lattice())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(xs: &[i64]) -> IntVector {
        xs.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn homology_of_times_two() {
        // Z --2--> Z: cycles in degree 0 are everything, boundaries 2Z.
        let sq = Subquotient::quotient(1, &IntMatrix::from_i64(&[&[2]])).unwrap();
        assert_eq!(sq.group().to_string(), "Z/2");
        assert_eq!(sq.coords(&iv(&[3])), Some(iv(&[1])));
        assert_eq!(sq.is_zero_class(&iv(&[4])), Some(true));
    }

    #[test]
    fn denominator_outside_numerator_is_rejected() {
        let num = IntMatrix::from_i64(&[&[2]]);
        let den = IntMatrix::from_i64(&[&[1]]);
        assert!(Subquotient::new(1, &num, &den).is_err());
    }

    #[test]
    fn map_kernel_and_cokernel() {
        // Z --2--> Z
        let f = FgMap::new(
            Presentation::free(1),
            Presentation::free(1),
            IntMatrix::from_i64(&[&[2]]),
        );
        assert!(f.kernel().is_trivial());
        assert_eq!(f.cokernel().to_string(), "Z/2");
        assert!(!f.is_isomorphism());
        // Z/4 --2--> Z/4 has kernel Z/2 and cokernel Z/2
        let p = Presentation {
            moduli: vec![BigInt::from(4)],
        };
        let g = FgMap::new(p.clone(), p, IntMatrix::from_i64(&[&[2]]));
        assert_eq!(g.kernel().to_string(), "Z/2");
        assert_eq!(g.cokernel().to_string(), "Z/2");
    }

    #[test]
    fn inverse_of_automorphism_of_z6() {
        let p = Presentation {
            moduli: vec![BigInt::from(6)],
        };
        let f = FgMap::new(p.clone(), p.clone(), IntMatrix::from_i64(&[&[5]]));
        let inv = f.inverse().unwrap();
        assert_eq!(inv.compose(&f), FgMap::identity(p));
    }

    #[test]
    fn short_exact_sequence() {
        // 0 -> Z --(1,1)--> Z^2 --(1,-1)--> Z -> 0
        let f = FgMap::new(
            Presentation::free(1),
            Presentation::free(2),
            IntMatrix::from_i64(&[&[1], &[1]]),
        );
        let g = FgMap::new(
            Presentation::free(2),
            Presentation::free(1),
            IntMatrix::from_i64(&[&[1, -1]]),
        );
        assert!(exact_at(&f, &g));
        let twice = FgMap::new(
            Presentation::free(1),
            Presentation::free(2),
            IntMatrix::from_i64(&[&[2], &[2]]),
        );
        assert!(!exact_at(&twice, &g));
        assert_eq!(homology_at(&twice, &g).unwrap().to_string(), "Z/2");
    }
}
