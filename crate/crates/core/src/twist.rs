//! Structure constants of the doubling algebras on the basis `{e_p}`.
//!
//! `e_p e_q = c(p, q) e_{p ^ q}` where `c(p, q)` is a sign times a product of
//! a subset of the doubling parameters. The coefficient is tracked
//! symbolically as a [`TwistCoefficient`] by descending through the stages,
//! one index bit per stage, applying the convention's doubling formula to the
//! two halves a basis vector lives in.
//!
//! With every parameter equal to -1 the coefficient collapses to the twist
//! sign. The full sign table is produced by a doubling recurrence
//! ([`build_table`]) and splits into aligned 2x2 blocks of five shapes
//! ([`partition_blocks`]).

use std::collections::BTreeMap;
use std::fmt;

use num_traits::One;
use rayon::prelude::*;

use crate::algebra::{AlgebraSignature, Convention};
use crate::error::{Error, Result};
use crate::rational::Rational;

/// Default cap on the depth of a materialized table (`4^12` entries).
pub const DEFAULT_MAX_TABLE_DEPTH: usize = 12;

/// Hard cap imposed by the 16-bit mask storage of [`TwistTable`].
pub const ABSOLUTE_MAX_TABLE_DEPTH: usize = 16;

/// A basis index read as an element of `Z_2^t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BasisIndex(pub u64);

impl BasisIndex {
    /// Product index `p ^ q`.
    pub fn combine(self, other: BasisIndex) -> BasisIndex {
        BasisIndex(self.0 ^ other.0)
    }
}

impl From<u64> for BasisIndex {
    fn from(p: u64) -> Self {
        BasisIndex(p)
    }
}

impl fmt::Display for BasisIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// `sign · prod_{i in mask} gamma_i`. Bit `i - 1` of `gamma_mask` marks stage `i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TwistCoefficient {
    pub negative: bool,
    pub gamma_mask: u64,
}

impl TwistCoefficient {
    pub const UNIT: TwistCoefficient = TwistCoefficient {
        negative: false,
        gamma_mask: 0,
    };

    pub fn sign(self) -> i8 {
        if self.negative {
            -1
        } else {
            1
        }
    }

    /// The coefficient once every parameter is set to -1.
    pub fn real_sign(self) -> i8 {
        let flips = self.negative as u32 + self.gamma_mask.count_ones();
        if flips.is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    /// The exact coefficient in the algebra `sig`.
    pub fn value(self, sig: &AlgebraSignature) -> Rational {
        let mut v = Rational::one();
        for stage in 1..=sig.depth() {
            if self.gamma_mask >> (stage - 1) & 1 == 1 {
                v *= sig.gamma(stage);
            }
        }
        if self.negative {
            -v
        } else {
            v
        }
    }

    /// `d_1 d_2 ... d_t` as a string of `0`/`1`.
    pub fn mask_string(self, t: usize) -> String {
        (1..=t)
            .map(|stage| {
                if self.gamma_mask >> (stage - 1) & 1 == 1 {
                    '1'
                } else {
                    '0'
                }
            })
            .collect()
    }
}

fn conj_flip(p: u64) -> bool {
    // conj(e_p) = -e_p except for the unit
    p != 0
}

fn check_index(p: u64, t: usize) -> Result<()> {
    if t >= 64 {
        return Err(Error::InvalidParameter(format!("depth {t} exceeds 63")));
    }
    if p >> t != 0 {
        return Err(Error::IndexOutOfRange {
            index: p,
            dimension: 1u64 << t,
        });
    }
    Ok(())
}

/// Symbolic coefficient of `e_p e_q` in a depth-`t` algebra. Indices must be
/// in range.
fn coefficient(mut p: u64, mut q: u64, t: usize, conv: Convention) -> TwistCoefficient {
    let mut negative = false;
    let mut mask = 0u64;
    for stage in (1..=t).rev() {
        let (pl, ql) = (p & 1 == 1, q & 1 == 1);
        p >>= 1;
        q >>= 1;
        match (conv, pl, ql) {
            (_, false, false) => {}
            (Convention::Eq11, false, true) | (Convention::Eq31, true, false) => {
                std::mem::swap(&mut p, &mut q);
            }
            // Eq11: a2 conj(b1)
            (Convention::Eq11, true, false) => negative ^= conj_flip(q),
            // Eq31: conj(a1) b2
            (Convention::Eq31, false, true) => negative ^= conj_flip(p),
            // Eq11: gamma conj(b2) a2; Eq31: gamma b2 conj(a2)
            (Convention::Eq11, true, true) => {
                negative ^= conj_flip(q);
                mask |= 1 << (stage - 1);
                std::mem::swap(&mut p, &mut q);
            }
            (Convention::Eq31, true, true) => {
                negative ^= conj_flip(p);
                mask |= 1 << (stage - 1);
                std::mem::swap(&mut p, &mut q);
            }
        }
    }
    TwistCoefficient {
        negative,
        gamma_mask: mask,
    }
}

/// `e_p e_q = c · e_{p ^ q}` in the algebra `sig`.
pub fn basis_product(
    p: BasisIndex,
    q: BasisIndex,
    sig: &AlgebraSignature,
) -> Result<(TwistCoefficient, BasisIndex)> {
    let t = sig.depth();
    check_index(p.0, t)?;
    check_index(q.0, t)?;
    Ok((coefficient(p.0, q.0, t, sig.convention()), p.combine(q)))
}

/// Twist sign of `(p, q)` when every parameter is -1. O(t), no table.
pub fn twist_sign(p: BasisIndex, q: BasisIndex, t: usize, convention: Convention) -> Result<i8> {
    check_index(p.0, t)?;
    check_index(q.0, t)?;
    Ok(coefficient(p.0, q.0, t, convention).real_sign())
}

/// Full `2^t x 2^t` table of structure coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwistTable {
    depth: usize,
    convention: Convention,
    negative: Vec<bool>,
    masks: Vec<u16>,
}

impl TwistTable {
    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    pub fn size(&self) -> usize {
        1 << self.depth
    }

    /// Coefficient of `e_p e_q`. Panics when out of range.
    pub fn entry(&self, p: usize, q: usize) -> TwistCoefficient {
        let k = p * self.size() + q;
        TwistCoefficient {
            negative: self.negative[k],
            gamma_mask: self.masks[k] as u64,
        }
    }

    /// Twist sign of `(p, q)` (all parameters -1).
    pub fn sign(&self, p: usize, q: usize) -> i8 {
        self.entry(p, q).real_sign()
    }
}

pub fn build_table(t: usize, convention: Convention) -> Result<TwistTable> {
    build_table_with_limit(t, convention, DEFAULT_MAX_TABLE_DEPTH)
}

/// Builds the table by doubling: the depth-`d` table is filled from the
/// depth-`d - 1` table using the convention's formula on each parity pair of
/// rows and columns. Rows of each level are filled in parallel; the result
/// does not depend on scheduling.
pub fn build_table_with_limit(
    t: usize,
    convention: Convention,
    max_depth: usize,
) -> Result<TwistTable> {
    let max = max_depth.min(ABSOLUTE_MAX_TABLE_DEPTH);
    if t > max {
        return Err(Error::ResourceLimit { depth: t, max });
    }
    let mut negative = vec![false];
    let mut masks = vec![0u16];
    for stage in 1..=t {
        let old = 1usize << (stage - 1);
        let n = old << 1;
        let bit = 1u16 << (stage - 1);
        let mut next_neg = vec![false; n * n];
        let mut next_mask = vec![0u16; n * n];
        next_neg
            .par_chunks_mut(n)
            .zip(next_mask.par_chunks_mut(n))
            .enumerate()
            .for_each(|(row, (neg_row, mask_row))| {
                let (p, pl) = (row >> 1, row & 1 == 1);
                for col in 0..n {
                    let (q, ql) = (col >> 1, col & 1 == 1);
                    let at = |a: usize, b: usize| (negative[a * old + b], masks[a * old + b]);
                    let (neg, mask) = match (convention, pl, ql) {
                        (_, false, false) => at(p, q),
                        (Convention::Eq11, false, true) | (Convention::Eq31, true, false) => {
                            at(q, p)
                        }
                        (Convention::Eq11, true, false) => {
                            let (s, m) = at(p, q);
                            (s ^ (q != 0), m)
                        }
                        (Convention::Eq31, false, true) => {
                            let (s, m) = at(p, q);
                            (s ^ (p != 0), m)
                        }
                        (Convention::Eq11, true, true) => {
                            let (s, m) = at(q, p);
                            (s ^ (q != 0), m | bit)
                        }
                        (Convention::Eq31, true, true) => {
                            let (s, m) = at(q, p);
                            (s ^ (p != 0), m | bit)
                        }
                    };
                    neg_row[col] = neg;
                    mask_row[col] = mask;
                }
            });
        negative = next_neg;
        masks = next_mask;
    }
    Ok(TwistTable {
        depth: t,
        convention,
        negative,
        masks,
    })
}

/// Shapes of the 2x2 sign blocks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BlockKind {
    /// The block holding the unit row and column; equals `A`.
    A0,
    A,
    B,
    C,
    NegB,
    NegC,
}

impl BlockKind {
    pub fn matrix(self) -> [[i8; 2]; 2] {
        match self {
            BlockKind::A0 | BlockKind::A => [[1, 1], [1, -1]],
            BlockKind::B => [[1, -1], [1, 1]],
            BlockKind::C => [[1, -1], [-1, -1]],
            BlockKind::NegB => [[-1, 1], [-1, -1]],
            BlockKind::NegC => [[-1, 1], [1, 1]],
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            BlockKind::A0 => "A0",
            BlockKind::A => "A",
            BlockKind::B => "B",
            BlockKind::C => "C",
            BlockKind::NegB => "-B",
            BlockKind::NegC => "-C",
        }
    }
}

impl fmt::Display for BlockKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Classifies a non-corner block. `-A` and `+-` transposed shapes are not
/// among the admissible kinds.
pub fn classify_block(entries: [[i8; 2]; 2]) -> Option<BlockKind> {
    [
        BlockKind::A,
        BlockKind::B,
        BlockKind::C,
        BlockKind::NegB,
        BlockKind::NegC,
    ]
    .into_iter()
    .find(|k| k.matrix() == entries)
}

/// How a block is read out of the table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockOrientation {
    /// Row index is the left factor: block entry `(a, b)` is `sign(2i+a, 2j+b)`.
    LeftFactorRows,
    /// Row index is the right factor: block entry `(a, b)` is `sign(2j+b, 2i+a)`.
    RightFactorRows,
}

impl BlockOrientation {
    /// The orientation in which the five block shapes appear. `Eq31` reads
    /// rows as left factors. `Eq11` is the opposite algebra of `Eq31`, so its
    /// sign table is the transpose and is read with rows as right factors.
    pub fn for_convention(conv: Convention) -> Self {
        match conv {
            Convention::Eq31 => BlockOrientation::LeftFactorRows,
            Convention::Eq11 => BlockOrientation::RightFactorRows,
        }
    }
}

/// Result of tiling a table into aligned 2x2 blocks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockPartition {
    pub depth: usize,
    pub orientation: BlockOrientation,
    /// Blocks per side, `2^{t-1}`.
    pub side: usize,
    /// Row-major; `None` for a block that matches no admissible kind.
    pub kinds: Vec<Option<BlockKind>>,
    /// Entries of every block, row-major, as read in `orientation`.
    pub entries: Vec<[[i8; 2]; 2]>,
}

impl BlockPartition {
    pub fn kind(&self, row: usize, col: usize) -> Option<BlockKind> {
        self.kinds[row * self.side + col]
    }

    pub fn block_count(&self) -> usize {
        self.kinds.len()
    }

    /// Positions of blocks that failed to classify.
    pub fn failures(&self) -> Vec<(usize, usize)> {
        self.kinds
            .iter()
            .enumerate()
            .filter(|(_, k)| k.is_none())
            .map(|(n, _)| (n / self.side, n % self.side))
            .collect()
    }

    pub fn counts(&self) -> BTreeMap<BlockKind, usize> {
        let mut out = BTreeMap::new();
        for k in self.kinds.iter().flatten() {
            *out.entry(*k).or_insert(0) += 1;
        }
        out
    }
}

/// Tiles the table in an explicit orientation and classifies every block.
/// Unclassifiable blocks are recorded as `None`.
pub fn classify_blocks(
    table: &TwistTable,
    orientation: BlockOrientation,
) -> Result<BlockPartition> {
    if table.depth() == 0 {
        return Err(Error::InvalidParameter(
            "block partition needs t >= 1".into(),
        ));
    }
    let side = table.size() / 2;
    let mut kinds = Vec::with_capacity(side * side);
    let mut entries = Vec::with_capacity(side * side);
    for i in 0..side {
        for j in 0..side {
            let mut block = [[0i8; 2]; 2];
            for (a, row) in block.iter_mut().enumerate() {
                for (b, e) in row.iter_mut().enumerate() {
                    *e = match orientation {
                        BlockOrientation::LeftFactorRows => table.sign(2 * i + a, 2 * j + b),
                        BlockOrientation::RightFactorRows => table.sign(2 * j + b, 2 * i + a),
                    };
                }
            }
            let kind = if i == 0 && j == 0 {
                (block == BlockKind::A0.matrix()).then_some(BlockKind::A0)
            } else {
                classify_block(block)
            };
            kinds.push(kind);
            entries.push(block);
        }
    }
    Ok(BlockPartition {
        depth: table.depth(),
        orientation,
        side,
        kinds,
        entries,
    })
}

/// Tiles the table into aligned 2x2 blocks (anchored at even indices) and
/// classifies each as `A0` (the unit corner), `A`, `B`, `C`, `-B` or `-C`.
///
/// Fails with [`Error::TheoremViolation`] on the first block that matches none.
pub fn partition_blocks(table: &TwistTable) -> Result<BlockPartition> {
    let partition = classify_blocks(table, BlockOrientation::for_convention(table.convention()))?;
    if let Some(&(row, col)) = partition.failures().first() {
        return Err(Error::TheoremViolation {
            row,
            col,
            entries: partition.entries[row * partition.side + col],
        });
    }
    Ok(partition)
}

/// One symbol of a shuffled pair of bit strings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BitPair {
    pub left: u8,
    pub right: u8,
}

impl BitPair {
    pub fn new(left: u8, right: u8) -> Self {
        BitPair { left, right }
    }
}

impl fmt::Display for BitPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.left, self.right)
    }
}

/// Interleaves the `t`-bit expansions of `p` and `q`, most significant bit
/// first: `p_{t-1} q_{t-1}, p_{t-2} q_{t-2}, ...`. Bits above `t` are ignored.
pub fn shuffle(p: BasisIndex, q: BasisIndex, t: usize) -> Vec<BitPair> {
    (0..t)
        .rev()
        .map(|b| BitPair::new((p.0 >> b & 1) as u8, (q.0 >> b & 1) as u8))
        .collect()
}

/// Space-separated rendering, e.g. `"10 01"`.
pub fn format_pairs(pairs: &[BitPair]) -> String {
    pairs
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

/// One of the four products checked by [`prop33_check`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Prop33Cell {
    pub left: u64,
    pub right: u64,
    pub claimed_sign: i8,
    pub actual_sign: i8,
    pub actual_index: u64,
    /// Index claimed under the statement's `M = 2^k ^ T` (`M` or `M + 1`).
    pub statement_index: u64,
    /// Index claimed under the proof's `M = 2^{k-r+1} ^ T`.
    pub proof_index: u64,
    pub walk: Vec<BitPair>,
}

impl Prop33Cell {
    pub fn sign_holds(&self) -> bool {
        self.claimed_sign == self.actual_sign
    }
}

/// Oracle verdicts for the 2x2 product table around `e_{2^{k-r+1}}` and `e_T`
/// in the depth-`t` algebra with all parameters -1 and the `Eq31` product.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Prop33Report {
    pub r: usize,
    pub k: usize,
    pub i: usize,
    pub t: usize,
    /// `2^{k-r+1}`.
    pub s: u64,
    /// Bit `i` and bits `r..=k` set.
    pub target: u64,
    pub m_statement: u64,
    pub m_proof: u64,
    /// Cells in the order `(s, T)`, `(s, T+1)`, `(s+1, T)`, `(s+1, T+1)`.
    pub cells: [Prop33Cell; 4],
    /// `(-1)^{k-r+1}`, the sign the proof's walk concludes for `(s, T)`.
    pub proof_walk_sign: i8,
    /// The shuffle printed in the proof for `(s, T)`, when its group sizes
    /// are non-negative.
    pub displayed_walk: Option<Vec<BitPair>>,
}

impl Prop33Report {
    pub fn signs_hold(&self) -> bool {
        self.cells.iter().all(Prop33Cell::sign_holds)
    }

    pub fn statement_reading_holds(&self) -> bool {
        self.cells
            .iter()
            .all(|c| c.statement_index == c.actual_index)
    }

    pub fn proof_reading_holds(&self) -> bool {
        self.cells.iter().all(|c| c.proof_index == c.actual_index)
    }

    pub fn proof_walk_sign_holds(&self) -> bool {
        self.cells[0].actual_sign == self.proof_walk_sign
    }

    pub fn displayed_walk_matches(&self) -> Option<bool> {
        self.displayed_walk
            .as_ref()
            .map(|w| *w == shuffle(BasisIndex(self.s), BasisIndex(self.target), self.i + 1))
    }
}

fn pow_neg_one(e: usize) -> i8 {
    if e.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// The pair string the proof displays for `(s, T)`: `01` then `i-k-1` times
/// `00`; `k-2r-1` times `01`; `11` then `r+1` times `01`; `r` times `00`.
fn displayed_walk(r: usize, k: usize, i: usize) -> Option<Vec<BitPair>> {
    let ones = k.checked_sub(2 * r + 1)?;
    let mut w = Vec::new();
    if i > k {
        w.push(BitPair::new(0, 1));
        w.extend(std::iter::repeat_n(BitPair::new(0, 0), i - k - 1));
    }
    w.extend(std::iter::repeat_n(BitPair::new(0, 1), ones));
    w.push(BitPair::new(1, 1));
    w.extend(std::iter::repeat_n(BitPair::new(0, 1), r + 1));
    w.extend(std::iter::repeat_n(BitPair::new(0, 0), r));
    Some(w)
}

/// Evaluates the four products of the `e_{2^{k-r+1}}, e_T` table against the
/// claimed signs `±(-1)^{r+2}` and both readings of the index `M`.
///
/// Requires `1 <= r < k <= i < t`.
pub fn prop33_check(r: usize, k: usize, i: usize, t: usize) -> Result<Prop33Report> {
    if !(r >= 1 && r < k && k <= i && i < t) {
        return Err(Error::ConstraintViolation(format!(
            "need 1 <= r < k <= i < t, got r={r} k={k} i={i} t={t}"
        )));
    }
    if t >= 64 {
        return Err(Error::ConstraintViolation(format!("depth {t} exceeds 63")));
    }
    let s = 1u64 << (k - r + 1);
    let target = (1u64 << i) | ((r..=k).fold(0u64, |acc, b| acc | 1 << b));
    let m_statement = (1u64 << k) ^ target;
    let m_proof = s ^ target;
    let c = pow_neg_one(r + 2);
    // (left, right, claimed sign, offset added to M)
    let layout = [
        (s, target, c, 0),
        (s, target + 1, -c, 1),
        (s + 1, target, -c, 1),
        (s + 1, target + 1, -c, 0),
    ];
    let cells = layout.map(|(left, right, claimed_sign, off)| {
        let coef = coefficient(left, right, t, Convention::Eq31);
        Prop33Cell {
            left,
            right,
            claimed_sign,
            actual_sign: coef.real_sign(),
            actual_index: left ^ right,
            statement_index: m_statement + off,
            proof_index: m_proof + off,
            walk: shuffle(BasisIndex(left), BasisIndex(right), t),
        }
    });
    Ok(Prop33Report {
        r,
        k,
        i,
        t,
        s,
        target,
        m_statement,
        m_proof,
        cells,
        proof_walk_sign: pow_neg_one(k - r + 1),
        displayed_walk: displayed_walk(r, k, i),
    })
}

/// Which reading of `M` the oracle supports across a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MReading {
    Statement,
    Proof,
    Both,
    Neither,
}

impl fmt::Display for MReading {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MReading::Statement => "statement (M = 2^k xor T)",
            MReading::Proof => "proof (M = 2^(k-r+1) xor T)",
            MReading::Both => "both",
            MReading::Neither => "neither",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Prop33Sweep {
    pub t: usize,
    pub reports: Vec<Prop33Report>,
}

impl Prop33Sweep {
    /// The reading that holds for every admissible triple.
    pub fn supported_reading(&self) -> MReading {
        let st = self
            .reports
            .iter()
            .all(Prop33Report::statement_reading_holds);
        let pr = self.reports.iter().all(Prop33Report::proof_reading_holds);
        match (st, pr) {
            (true, true) => MReading::Both,
            (true, false) => MReading::Statement,
            (false, true) => MReading::Proof,
            (false, false) => MReading::Neither,
        }
    }
}

/// Runs [`prop33_check`] over every admissible `(r, k, i)` for depth `t`.
pub fn prop33_sweep(t: usize) -> Result<Prop33Sweep> {
    let mut reports = Vec::new();
    for r in 1..t {
        for k in r + 1..t {
            for i in k..t {
                reports.push(prop33_check(r, k, i, t)?);
            }
        }
    }
    Ok(Prop33Sweep { t, reports })
}
