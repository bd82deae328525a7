use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::matrix::IntMatrix;

/// Smith decomposition `U * M * V = D`.
///
/// `D` is diagonal with `d_1 | d_2 | ... | d_rank`, all positive; `U` and `V` are unimodular
/// and their inverses are tracked alongside so `M = U^-1 * D * V^-1` can be rebuilt exactly.
#[derive(Clone, Debug)]
pub struct Smith {
    pub u: IntMatrix,
    pub u_inv: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
    pub rank: usize,
}

impl Smith {
    /// Nonzero diagonal entries in order.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.rank).map(|i| self.d[(i, i)].clone()).collect()
    }
}

/// Position of the nonzero entry of least absolute value in the lower-right block starting at
/// `(t, t)`, scanning row-major so ties go to the lowest index.
fn smallest_pivot(d: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<((usize, usize), BigInt)> = None;
    for i in t..d.rows() {
        for j in t..d.cols() {
            let v = &d[(i, j)];
            if v.is_zero() {
                continue;
            }
            let a = v.abs();
            if best.as_ref().map_or(true, |(_, b)| a < *b) {
                best = Some(((i, j), a));
            }
        }
    }
    best.map(|(p, _)| p)
}

struct SmithState {
    d: IntMatrix,
    u: IntMatrix,
    u_inv: IntMatrix,
    v: IntMatrix,
    v_inv: IntMatrix,
}

impl SmithState {
    fn swap_rows(&mut self, a: usize, b: usize) {
        self.d.swap_rows(a, b);
        self.u.swap_rows(a, b);
        self.u_inv.swap_cols(a, b);
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        self.d.swap_cols(a, b);
        self.v.swap_cols(a, b);
        self.v_inv.swap_rows(a, b);
    }

    /// row[dst] += c * row[src]
    fn row_op(&mut self, dst: usize, src: usize, c: &BigInt) {
        self.d.add_row_multiple(dst, src, c);
        self.u.add_row_multiple(dst, src, c);
        self.u_inv.add_col_multiple(src, dst, &-c);
    }

    /// col[dst] += c * col[src]
    fn col_op(&mut self, dst: usize, src: usize, c: &BigInt) {
        self.d.add_col_multiple(dst, src, c);
        self.v.add_col_multiple(dst, src, c);
        self.v_inv.add_row_multiple(src, dst, &-c);
    }

    fn negate_row(&mut self, i: usize) {
        self.d.negate_row(i);
        self.u.negate_row(i);
        self.u_inv.negate_col(i);
    }

    fn move_pivot(&mut self, t: usize, (i, j): (usize, usize)) {
        self.swap_rows(t, i);
        self.swap_cols(t, j);
    }
}

pub fn snf(m: &IntMatrix) -> Smith {
    let (r, c) = m.shape();
    let mut st = SmithState {
        d: m.clone(),
        u: IntMatrix::identity(r),
        u_inv: IntMatrix::identity(r),
        v: IntMatrix::identity(c),
        v_inv: IntMatrix::identity(c),
    };
    let mut t = 0;
    while t < r.min(c) {
        let Some(p) = smallest_pivot(&st.d, t) else {
            break;
        };
        st.move_pivot(t, p);
        loop {
            let pivot = st.d[(t, t)].clone();
            let mut clean = true;
            for i in t + 1..r {
                if st.d[(i, t)].is_zero() {
                    continue;
                }
                let (q, rem) = st.d[(i, t)].div_rem(&pivot);
                st.row_op(i, t, &-q);
                clean &= rem.is_zero();
            }
            for j in t + 1..c {
                if st.d[(t, j)].is_zero() {
                    continue;
                }
                let (q, rem) = st.d[(t, j)].div_rem(&pivot);
                st.col_op(j, t, &-q);
                clean &= rem.is_zero();
            }
            if !clean {
                // Remainders are strictly smaller than the pivot, so this terminates.
                let p = smallest_pivot(&st.d, t).expect("nonzero remainder present");
                st.move_pivot(t, p);
                continue;
            }
            let offender = (t + 1..r)
                .flat_map(|i| (t + 1..c).map(move |j| (i, j)))
                .find(|&(i, j)| !(&st.d[(i, j)] % &pivot).is_zero());
            match offender {
                Some((i, _)) => st.row_op(t, i, &BigInt::from(1)),
                None => break,
            }
        }
        if st.d[(t, t)].is_negative() {
            st.negate_row(t);
        }
        t += 1;
    }
    Smith {
        u: st.u,
        u_inv: st.u_inv,
        d: st.d,
        v: st.v,
        v_inv: st.v_inv,
        rank: t,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(m: &IntMatrix) -> Smith {
        let s = snf(m);
        assert_eq!(s.u.mul(m).mul(&s.v), s.d);
        assert_eq!(s.u_inv.mul(&s.d).mul(&s.v_inv), *m);
        assert!(s.u.mul(&s.u_inv).is_identity());
        assert!(s.v.mul(&s.v_inv).is_identity());
        let diag = s.diagonal();
        for w in diag.windows(2) {
            assert!((&w[1] % &w[0]).is_zero());
        }
        s
    }

    #[test]
    fn single_entry() {
        let s = check(&IntMatrix::from_i64(&[&[2]]));
        assert_eq!(s.diagonal(), vec![BigInt::from(2)]);
    }

    #[test]
    fn nodal_restriction_matrix_has_rank_one() {
        let s = check(&IntMatrix::from_i64(&[&[1, 1, -1], &[1, 1, -1]]));
        assert_eq!(s.rank, 1);
        assert_eq!(s.diagonal(), vec![BigInt::from(1)]);
        assert!(s.d.block(1, 0, 1, 3).is_zero());
    }

    #[test]
    fn zero_matrix() {
        let s = check(&IntMatrix::zeros(2, 3));
        assert_eq!(s.rank, 0);
        assert!(s.d.is_zero());
    }

    #[test]
    fn divisibility_repair() {
        // diag(2, 3) is not in normal form: expect diag(1, 6).
        let s = check(&IntMatrix::from_i64(&[&[2, 0], &[0, 3]]));
        assert_eq!(s.diagonal(), vec![BigInt::from(1), BigInt::from(6)]);
    }

    #[test]
    fn deterministic() {
        let m = IntMatrix::from_i64(&[&[4, -6, 2], &[3, 9, -3], &[0, 2, 8]]);
        let a = snf(&m);
        let b = snf(&m);
        assert_eq!(a.u, b.u);
        assert_eq!(a.v, b.v);
    }
}
