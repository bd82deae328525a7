//! Cubical index categories.
//!
//! A vertex of `□_n` is a 0/1 tuple of length `n + 1` with at least one 1; the augmented
//! cube `□_n⁺` also admits the all-zero tuple. Vertices are stored as bit sets (coordinate
//! `k` is bit `k`) and written as bitstrings whose `k`-th character is coordinate `k`.
//!
//! Enumeration order is by the integer value of the bit set, so `□_1` lists `10, 01, 11`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::{Error, Result};

/// Largest supported tuple length.
pub const MAX_COORDS: usize = 24;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CubeVertex {
    bits: u32,
    len: u8,
}

/// One edge `α -> β` leaving a vertex: `β` is `α` with coordinate `k` switched on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Coface {
    pub target: CubeVertex,
    pub k: usize,
    pub sign: i32,
}

impl CubeVertex {
    pub fn new(coords: &[u8]) -> Result<Self> {
        if coords.is_empty() || coords.len() > MAX_COORDS {
            return Err(Error::invalid(
                "vertex",
                format!("tuple length must be in 1..={MAX_COORDS}"),
            ));
        }
        let mut bits = 0u32;
        for (k, &c) in coords.iter().enumerate() {
            match c {
                0 => {}
                1 => bits |= 1 << k,
                _ => return Err(Error::invalid("vertex", format!("coordinate {k} is {c}"))),
            }
        }
        Ok(CubeVertex {
            bits,
            len: coords.len() as u8,
        })
    }

    pub fn from_bits(bits: u32, len: usize) -> Self {
        assert!(len >= 1 && len <= MAX_COORDS && bits >> len == 0);
        CubeVertex {
            bits,
            len: len as u8,
        }
    }

    pub fn zero(len: usize) -> Self {
        Self::from_bits(0, len)
    }

    pub fn bits(self) -> u32 {
        self.bits
    }

    /// Tuple length `n + 1`.
    pub fn len(self) -> usize {
        self.len as usize
    }

    pub fn coord(self, k: usize) -> bool {
        self.bits >> k & 1 == 1
    }

    pub fn coords(self) -> Vec<u8> {
        (0..self.len()).map(|k| self.coord(k) as u8).collect()
    }

    /// `|α|`, the number of ones.
    pub fn weight(self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_zero(self) -> bool {
        self.bits == 0
    }

    /// `α <= β` coordinatewise.
    pub fn le(self, other: CubeVertex) -> bool {
        self.len == other.len && self.bits & !other.bits == 0
    }

    pub fn with(self, k: usize, on: bool) -> CubeVertex {
        assert!(k < self.len());
        let bits = if on {
            self.bits | 1 << k
        } else {
            self.bits & !(1 << k)
        };
        CubeVertex { bits, ..self }
    }

    /// `(−1)^{#{j < k : α_j = 1}}`.
    pub fn sign(self, k: usize) -> i32 {
        let below = (self.bits & ((1u32 << k) - 1)).count_ones();
        if below % 2 == 0 {
            1
        } else {
            -1
        }
    }

    pub fn cofaces(self) -> Vec<Coface> {
        (0..self.len())
            .filter(|&k| !self.coord(k))
            .map(|k| Coface {
                target: self.with(k, true),
                k,
                sign: self.sign(k),
            })
            .collect()
    }

    /// The vertex with the coordinates of `self` followed by those of `other`.
    pub fn concat(self, other: CubeVertex) -> CubeVertex {
        Self::from_bits(self.bits | other.bits << self.len, self.len() + other.len())
    }

    /// Splits off the first `len` coordinates.
    pub fn split(self, len: usize) -> (CubeVertex, CubeVertex) {
        assert!(len >= 1 && len < self.len());
        (
            Self::from_bits(self.bits & ((1 << len) - 1), len),
            Self::from_bits(self.bits >> len, self.len() - len),
        )
    }

    /// Drops the last coordinate.
    pub fn truncate_last(self) -> CubeVertex {
        assert!(self.len() >= 2);
        Self::from_bits(self.bits & ((1 << (self.len() - 1)) - 1), self.len() - 1)
    }

    pub fn to_bitstring(self) -> String {
        (0..self.len())
            .map(|k| if self.coord(k) { '1' } else { '0' })
            .collect()
    }
}

impl FromStr for CubeVertex {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let coords: Option<Vec<u8>> = s
            .chars()
            .map(|c| match c {
                '0' => Some(0),
                '1' => Some(1),
                _ => None,
            })
            .collect();
        match coords {
            Some(c) => CubeVertex::new(&c),
            None => Err(Error::invalid(s, "vertex must be a bitstring of 0 and 1")),
        }
    }
}

impl fmt::Display for CubeVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_bitstring())
    }
}

impl fmt::Debug for CubeVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CubeVertex({self})")
    }
}

impl Serialize for CubeVertex {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_bitstring())
    }
}

impl<'de> Deserialize<'de> for CubeVertex {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// `□_n` or `□_n⁺`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CubeIndex {
    n: usize,
    augmented: bool,
}

impl CubeIndex {
    pub fn new(n: usize, augmented: bool) -> Result<Self> {
        if n + 1 > MAX_COORDS {
            return Err(Error::invalid("cube", format!("dimension {n} too large")));
        }
        Ok(CubeIndex { n, augmented })
    }

    pub fn n(self) -> usize {
        self.n
    }

    pub fn augmented(self) -> bool {
        self.augmented
    }

    /// Tuple length `n + 1`.
    pub fn width(self) -> usize {
        self.n + 1
    }

    /// The same cube with or without the augmentation vertex.
    pub fn with_augmentation(self, augmented: bool) -> CubeIndex {
        CubeIndex { augmented, ..self }
    }

    pub fn vertex_count(self) -> usize {
        (1usize << self.width()) - 1 + self.augmented as usize
    }

    pub fn vertices(self) -> Vec<CubeVertex> {
        let start = if self.augmented { 0 } else { 1 };
        (start..1u32 << self.width())
            .map(|b| CubeVertex::from_bits(b, self.width()))
            .collect()
    }

    /// Position of `v` in [`vertices`](Self::vertices).
    pub fn position(self, v: CubeVertex) -> Option<usize> {
        if !self.contains(v) {
            return None;
        }
        Some(v.bits as usize - (!self.augmented) as usize)
    }

    pub fn contains(self, v: CubeVertex) -> bool {
        v.len() == self.width() && (self.augmented || !v.is_zero())
    }

    /// All edges `(α, coface)` in vertex order, then by flipped position.
    pub fn edges(self) -> Vec<(CubeVertex, Coface)> {
        self.vertices()
            .into_iter()
            .flat_map(|a| a.cofaces().into_iter().map(move |c| (a, c)))
            .collect()
    }

    pub fn vertices_of_weight(self, w: usize) -> Vec<CubeVertex> {
        self.vertices()
            .into_iter()
            .filter(|v| v.weight() == w)
            .collect()
    }
}

/// `build_cube` with a signed dimension, as read from documents and command lines.
pub fn build_cube(n: i64, augmented: bool) -> Result<CubeIndex> {
    if n < 0 {
        return Err(Error::invalid("cube", format!("negative dimension {n}")));
    }
    CubeIndex::new(n as usize, augmented)
}

/// The index `□_a × □_b`; vertices are pairs ordered with the first factor varying fastest.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductIndex {
    pub first: CubeIndex,
    pub second: CubeIndex,
}

impl ProductIndex {
    pub fn vertices(&self) -> Vec<(CubeVertex, CubeVertex)> {
        let a = self.first.vertices();
        self.second
            .vertices()
            .into_iter()
            .flat_map(|b| a.iter().map(move |&x| (x, b)))
            .collect()
    }

    pub fn weight(&(a, b): &(CubeVertex, CubeVertex)) -> usize {
        a.weight() + b.weight()
    }
}

pub fn cube_product(a: CubeIndex, b: CubeIndex) -> Result<ProductIndex> {
    if a.augmented() || b.augmented() {
        return Err(Error::invalid(
            "cube_product",
            "augmented factors are not supported",
        ));
    }
    Ok(ProductIndex {
        first: a,
        second: b,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> CubeVertex {
        s.parse().unwrap()
    }

    #[test]
    fn small_cubes() {
        let c0 = build_cube(0, false).unwrap();
        assert_eq!(c0.vertices(), vec![v("1")]);
        let c1 = build_cube(1, false).unwrap();
        let names: Vec<String> = c1.vertices().iter().map(|x| x.to_string()).collect();
        assert_eq!(names, ["10", "01", "11"]);
        let weights: Vec<usize> = c1.vertices().iter().map(|x| x.weight()).collect();
        assert_eq!(weights, [1, 1, 2]);
        let c1a = build_cube(1, true).unwrap();
        assert_eq!(c1a.vertex_count(), 4);
        assert_eq!(c1a.vertices()[0], v("00"));
        assert!(build_cube(-1, false).is_err());
    }

    #[test]
    fn vertex_counts() {
        for n in 0..5 {
            let c = CubeIndex::new(n, false).unwrap();
            assert_eq!(c.vertices().len(), (1 << (n + 1)) - 1);
            for (i, x) in c.vertices().into_iter().enumerate() {
                assert_eq!(c.position(x), Some(i));
            }
        }
    }

    #[test]
    fn coface_signs() {
        assert_eq!(
            v("10").cofaces(),
            vec![Coface {
                target: v("11"),
                k: 1,
                sign: -1
            }]
        );
        assert_eq!(
            v("01").cofaces(),
            vec![Coface {
                target: v("11"),
                k: 0,
                sign: 1
            }]
        );
        assert!(v("11").cofaces().is_empty());
    }

    #[test]
    fn squares_anticommute() {
        for n in 0..4 {
            let c = CubeIndex::new(n, true).unwrap();
            for a in c.vertices() {
                for k in 0..a.len() {
                    for l in k + 1..a.len() {
                        if a.coord(k) || a.coord(l) {
                            continue;
                        }
                        let via_k = a.sign(k) * a.with(k, true).sign(l);
                        let via_l = a.sign(l) * a.with(l, true).sign(k);
                        assert_eq!(via_k, -via_l);
                    }
                }
            }
        }
    }

    #[test]
    fn products() {
        let c0 = CubeIndex::new(0, false).unwrap();
        let c1 = CubeIndex::new(1, false).unwrap();
        let p = cube_product(c0, c0).unwrap();
        assert_eq!(p.vertices().len(), 1);
        assert_eq!(ProductIndex::weight(&p.vertices()[0]), 2);
        let p = cube_product(c1, c0).unwrap();
        let w: Vec<usize> = p.vertices().iter().map(ProductIndex::weight).collect();
        assert_eq!(w, [2, 2, 3]);
        assert_eq!(cube_product(c1, c1).unwrap().vertices().len(), 9);
        assert!(cube_product(c1.with_augmentation(true), c0).is_err());
    }

    #[test]
    fn bitstring_round_trip() {
        let x = v("0110");
        assert_eq!(x.to_string(), "0110");
        assert!(x.coord(1) && x.coord(2) && !x.coord(0));
        assert_eq!(serde_json::to_string(&x).unwrap(), "\"0110\"");
        assert!("012".parse::<CubeVertex>().is_err());
        assert_eq!(v("10").concat(v("1")), v("101"));
        assert_eq!(v("101").split(2), (v("10"), v("1")));
    }
}
