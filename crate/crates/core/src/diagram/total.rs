//! Assembly of signed total complexes from shifted summands.
//!
//! Every total complex in the crate (simples, product simples, iterated simples) is a direct
//! sum of shifted complexes with a differential made of signed internal differentials and
//! signed links between summands. This module does the block bookkeeping once.

use crate::complex::{union_window, ChainMap, ZComplex};
use crate::zmod::IntMatrix;
use crate::Result;

/// `complex_{m + shift}` placed in total degree `m`, with internal differential `sign * d`.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Summand<'a> {
    pub complex: &'a ZComplex,
    pub shift: i64,
    pub sign: i32,
}

/// `sign * map` from summand `from` to summand `to`; requires `shift(to) = shift(from) + 1`,
/// so the map lowers the total degree by one.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Link<'a> {
    pub from: usize,
    pub to: usize,
    pub map: &'a ChainMap,
    pub sign: i32,
}

fn rank_at(s: &Summand, m: i64) -> usize {
    s.complex.rank(m + s.shift)
}

/// Offsets of each summand inside total degree `m`, plus the total rank.
pub(crate) fn offsets(summands: &[Summand], m: i64) -> (Vec<usize>, usize) {
    let mut out = Vec::with_capacity(summands.len());
    let mut acc = 0;
    for s in summands {
        out.push(acc);
        acc += rank_at(s, m);
    }
    (out, acc)
}

pub(crate) fn window(summands: &[Summand]) -> Option<(i64, i64)> {
    union_window(
        summands
            .iter()
            .filter_map(|s| s.complex.support().map(|(a, b)| (a - s.shift, b - s.shift))),
    )
}

fn signed(m: IntMatrix, sign: i32) -> IntMatrix {
    if sign < 0 {
        m.neg()
    } else {
        m
    }
}

pub(crate) fn total_complex(summands: &[Summand], links: &[Link]) -> Result<ZComplex> {
    for l in links {
        assert_eq!(
            summands[l.to].shift,
            summands[l.from].shift + 1,
            "link must lower total degree by one"
        );
    }
    let Some((lo, hi)) = window(summands) else {
        return Ok(ZComplex::zero());
    };
    ZComplex::from_fn(
        lo,
        hi,
        |m| offsets(summands, m).1,
        |m| {
            let (src_off, src_n) = offsets(summands, m);
            let (tgt_off, tgt_n) = offsets(summands, m - 1);
            let mut d = IntMatrix::zeros(tgt_n, src_n);
            for (i, s) in summands.iter().enumerate() {
                if rank_at(s, m) == 0 || rank_at(s, m - 1) == 0 {
                    continue;
                }
                let block = signed(s.complex.diff(m + s.shift), s.sign);
                d.add_block(tgt_off[i], src_off[i], &block);
            }
            for l in links {
                let s = &summands[l.from];
                let deg = m + s.shift;
                let f = l.map.component(deg);
                if f.rows() == 0 || f.cols() == 0 {
                    continue;
                }
                d.add_block(tgt_off[l.to], src_off[l.from], &signed(f, l.sign));
            }
            d
        },
    )
}

/// A block of a map between two total complexes: `sign * map` (identity when `map` is `None`)
/// from source summand `from` to target summand `to`, which must carry the same shift.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Block<'a> {
    pub from: usize,
    pub to: usize,
    pub sign: i32,
    pub map: Option<&'a ChainMap>,
}

pub(crate) fn signed_block_map(
    source: &ZComplex,
    src: &[Summand],
    target: &ZComplex,
    tgt: &[Summand],
    blocks: &[Block],
) -> Result<ChainMap> {
    for b in blocks {
        assert_eq!(src[b.from].shift, tgt[b.to].shift, "blocks preserve the shift");
    }
    ChainMap::from_fn(source, target, |m| {
        let (so, sn) = offsets(src, m);
        let (to, tn) = offsets(tgt, m);
        let mut f = IntMatrix::zeros(tn, sn);
        for b in blocks {
            let deg = m + src[b.from].shift;
            let block = match b.map {
                Some(g) => g.component(deg),
                None => IntMatrix::identity(src[b.from].complex.rank(deg)),
            };
            if block.rows() == 0 || block.cols() == 0 {
                continue;
            }
            f.add_block(to[b.to], so[b.from], &signed(block, b.sign));
        }
        f
    })
}
