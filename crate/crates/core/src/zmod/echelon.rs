use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::matrix::{is_zero_vector, IntMatrix, IntVector};

/// Column Hermite form `H = M * W` with `W` unimodular.
///
/// The first `rank` columns of `H` are in echelon form (pivot rows strictly increasing, pivots
/// positive, entries left of a pivot reduced into `[0, pivot)`); the remaining columns are zero,
/// so the trailing columns of `W` are a basis of the integer kernel.
#[derive(Clone, Debug)]
pub struct ColumnEchelon {
    pub h: IntMatrix,
    pub w: IntMatrix,
    pub rank: usize,
    pub pivot_rows: Vec<usize>,
}

impl ColumnEchelon {
    pub fn new(m: &IntMatrix) -> Self {
        let (r, c) = m.shape();
        let mut h = m.clone();
        let mut w = IntMatrix::identity(c);
        let mut k = 0;
        let mut pivot_rows = Vec::new();
        for i in 0..r {
            if k == c {
                break;
            }
            let mut found = false;
            loop {
                let mut best: Option<(usize, BigInt)> = None;
                for j in k..c {
                    let v = &h[(i, j)];
                    if !v.is_zero() && best.as_ref().map_or(true, |(_, b)| v.abs() < *b) {
                        best = Some((j, v.abs()));
                    }
                }
                let Some((j, _)) = best else { break };
                found = true;
                h.swap_cols(k, j);
                w.swap_cols(k, j);
                let pivot = h[(i, k)].clone();
                let mut clean = true;
                for j2 in k + 1..c {
                    if h[(i, j2)].is_zero() {
                        continue;
                    }
                    let (q, rem) = h[(i, j2)].div_rem(&pivot);
                    let q = -q;
                    h.add_col_multiple(j2, k, &q);
                    w.add_col_multiple(j2, k, &q);
                    clean &= rem.is_zero();
                }
                if clean {
                    break;
                }
            }
            if !found {
                continue;
            }
            if h[(i, k)].is_negative() {
                h.negate_col(k);
                w.negate_col(k);
            }
            let pivot = h[(i, k)].clone();
            for j in 0..k {
                let q = h[(i, j)].div_floor(&pivot);
                if !q.is_zero() {
                    let q = -q;
                    h.add_col_multiple(j, k, &q);
                    w.add_col_multiple(j, k, &q);
                }
            }
            pivot_rows.push(i);
            k += 1;
        }
        ColumnEchelon {
            h,
            w,
            rank: k,
            pivot_rows,
        }
    }

    /// Basis of the column lattice of `M`, as columns.
    pub fn image_basis(&self) -> IntMatrix {
        let idx: Vec<usize> = (0..self.rank).collect();
        self.h.select_columns(&idx)
    }

    /// Basis of `{x : M x = 0}`, as columns.
    pub fn kernel_basis(&self) -> IntMatrix {
        let idx: Vec<usize> = (self.rank..self.w.cols()).collect();
        self.w.select_columns(&idx)
    }

    /// Integer solution of `M x = v`, if any.
    pub fn solve(&self, v: &[BigInt]) -> Option<IntVector> {
        assert_eq!(v.len(), self.h.rows(), "right-hand side has wrong length");
        let mut residual = v.to_vec();
        let mut y = vec![BigInt::zero(); self.w.cols()];
        for (j, &p) in self.pivot_rows.iter().enumerate() {
            if residual[..p].iter().any(|x| !x.is_zero()) {
                return None;
            }
            let (q, rem) = residual[p].div_rem(&self.h[(p, j)]);
            if !rem.is_zero() {
                return None;
            }
            if !q.is_zero() {
                for (i, r) in residual.iter_mut().enumerate().skip(p) {
                    let hij = &self.h[(i, j)];
                    if !hij.is_zero() {
                        *r -= &q * hij;
                    }
                }
            }
            y[j] = q;
        }
        if !is_zero_vector(&residual) {
            return None;
        }
        Some(self.w.mul_vec(&y))
    }
}

/// Basis of `ker M`.
pub fn kernel_basis(m: &IntMatrix) -> IntMatrix {
    ColumnEchelon::new(m).kernel_basis()
}

/// Basis of the lattice spanned by the columns of `m`.
pub fn image_basis(m: &IntMatrix) -> IntMatrix {
    ColumnEchelon::new(m).image_basis()
}

pub fn rank(m: &IntMatrix) -> usize {
    ColumnEchelon::new(m).rank
}

/// Returns `x` with `M x = v` when one exists over the integers.
pub fn solve_in_lattice(m: &IntMatrix, v: &[BigInt]) -> crate::Result<Option<IntVector>> {
    if v.len() != m.rows() {
        return Err(crate::Error::Dimension(format!(
            "matrix has {} rows but vector has length {}",
            m.rows(),
            v.len()
        )));
    }
    Ok(ColumnEchelon::new(m).solve(v))
}

/// Inverse of a unimodular matrix.
pub fn inverse_unimodular(m: &IntMatrix) -> Option<IntMatrix> {
    if m.rows() != m.cols() {
        return None;
    }
    let e = ColumnEchelon::new(m);
    if e.h.is_identity() {
        Some(e.w)
    } else {
        None
    }
}

/// True when the columns of `m` span all of `Z^rows`.
pub fn is_surjective(m: &IntMatrix) -> bool {
    let e = ColumnEchelon::new(m);
    e.rank == m.rows() && (0..e.rank).all(|j| e.h[(j, j)] == BigInt::from(1))
}
