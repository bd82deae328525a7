use std::fmt;

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use super::matrix::IntMatrix;
use super::snf::snf;

/// Finitely generated abelian group `Z^rank + Z/d_1 + ... + Z/d_k` with `d_1 | ... | d_k`,
/// every `d_i >= 2`. This is the unique normal form, so `==` is isomorphism.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct FgAbGroup {
    pub rank: usize,
    #[serde(with = "crate::json::bigint_vec")]
    pub torsion: Vec<BigInt>,
}

impl FgAbGroup {
    pub fn trivial() -> Self {
        Self::default()
    }

    pub fn free(rank: usize) -> Self {
        FgAbGroup {
            rank,
            torsion: Vec::new(),
        }
    }

    /// Builds the normal form from arbitrary cyclic factors `Z/m_i` (`m_i = 0` means `Z`).
    pub fn from_cyclic(factors: &[BigInt]) -> Self {
        let n = factors.len();
        let mut m = IntMatrix::zeros(n, n);
        for (i, f) in factors.iter().enumerate() {
            m[(i, i)] = f.clone();
        }
        cokernel(&m)
    }

    pub fn is_trivial(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    pub fn direct_sum(&self, other: &FgAbGroup) -> FgAbGroup {
        let mut factors: Vec<BigInt> = self.torsion.clone();
        factors.extend(other.torsion.iter().cloned());
        let mut g = FgAbGroup::from_cyclic(&factors);
        g.rank = self.rank + other.rank;
        g
    }

    /// Order of the torsion subgroup.
    pub fn torsion_order(&self) -> BigInt {
        self.torsion.iter().fold(BigInt::one(), |a, b| a * b)
    }
}

impl fmt::Display for FgAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        // Group equal invariant factors: Z/2 + Z/2 -> (Z/2)^2
        let mut i = 0;
        while i < self.torsion.len() {
            let d = &self.torsion[i];
            let mut j = i;
            while j < self.torsion.len() && self.torsion[j] == *d {
                j += 1;
            }
            if j - i == 1 {
                parts.push(format!("Z/{d}"));
            } else {
                parts.push(format!("(Z/{d})^{}", j - i));
            }
            i = j;
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// `Z^rows / im M` in normal form.
pub fn cokernel(m: &IntMatrix) -> FgAbGroup {
    let s = snf(m);
    let torsion: Vec<BigInt> = s
        .diagonal()
        .into_iter()
        .filter(|d| *d > BigInt::one())
        .collect();
    FgAbGroup {
        rank: m.rows() - s.rank,
        torsion,
    }
}

/// Sum of a list of groups.
pub fn direct_sum_all<'a>(groups: impl IntoIterator<Item = &'a FgAbGroup>) -> FgAbGroup {
    groups
        .into_iter()
        .fold(FgAbGroup::trivial(), |acc, g| acc.direct_sum(g))
}
