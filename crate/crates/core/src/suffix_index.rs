//! Text preprocessing: suffix array, LCP array and constant-time LCP queries
//! between arbitrary suffixes.
//!
//! Public ranks and text positions are 1-based. Rank `r` names the `r`-th
//! smallest suffix; position `p` names the suffix that starts at the `p`-th
//! symbol of the text. Symbols are bytes ordered numerically, and no
//! terminator is appended: a proper prefix sorts before any extension of it.
//!
//! ```
//! use qsa::{QueryLedger, Text, TextIndex};
//!
//! let mut ledger = QueryLedger::new();
//! let index = TextIndex::build(Text::new(b"banana".to_vec())?, &mut ledger);
//! assert_eq!(index.suffix_array().to_positions(), vec![6, 4, 2, 1, 5, 3]);
//! assert_eq!(index.lcp_array().values(), &[1, 3, 0, 0, 2]);
//! assert_eq!(index.lcp_suf(2, 3)?, 3); // "ana" vs "anana"
//! # Ok::<(), qsa::Error>(())
//! ```

use std::cell::Cell;
use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::ledger::QueryLedger;

/// A non-empty byte string.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Text(Vec<u8>);

impl Text {
    pub fn new(symbols: Vec<u8>) -> Result<Self> {
        if symbols.is_empty() {
            return Err(Error::invalid("text must contain at least one symbol"));
        }
        Ok(Text(symbols))
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// Always false; kept for API symmetry with slices.
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.0
    }
}

impl AsRef<[u8]> for Text {
    fn as_ref(&self) -> &[u8] {
        &self.0
    }
}

/// Suffix start positions in lexicographic order of the suffixes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuffixArray {
    // 0-based start offsets, indexed by 0-based rank
    order: Vec<usize>,
}

impl SuffixArray {
    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// 1-based start position of the suffix with 1-based rank `rank`.
    ///
    /// Panics if `rank` is outside `1..=n`.
    pub fn position(&self, rank: usize) -> usize {
        self.order[rank - 1] + 1
    }

    /// The whole array as 1-based positions.
    pub fn to_positions(&self) -> Vec<usize> {
        self.order.iter().map(|&p| p + 1).collect()
    }

    pub(crate) fn offsets(&self) -> &[usize] {
        &self.order
    }

    /// Builds from 1-based positions, checking that they form a permutation.
    pub fn from_positions(positions: &[usize]) -> Result<Self> {
        let n = positions.len();
        let mut seen = vec![false; n];
        let mut order = Vec::with_capacity(n);
        for &p in positions {
            if p == 0 || p > n || seen[p - 1] {
                return Err(Error::invalid(format!(
                    "suffix array is not a permutation of 1..={n}"
                )));
            }
            seen[p - 1] = true;
            order.push(p - 1);
        }
        Ok(SuffixArray { order })
    }
}

/// `values()[k - 1]` is the LCP of the suffixes at ranks `k` and `k + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LcpArray {
    values: Vec<usize>,
}

impl LcpArray {
    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn from_values(values: Vec<usize>) -> Self {
        LcpArray { values }
    }
}

/// Sparse table over an [`LcpArray`]: `O(n log n)` words, `O(1)` range minimum.
#[derive(Debug, Clone)]
pub struct RmqTable {
    // levels[k][i] = min(lcp[i .. i + 2^k])
    levels: Vec<Vec<u32>>,
}

impl RmqTable {
    /// Number of LCP entries covered.
    pub fn len(&self) -> usize {
        self.levels.first().map_or(0, Vec::len)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Minimum over the 1-based inclusive entry range `first..=last`.
    pub fn min(&self, first: usize, last: usize) -> Result<usize> {
        if first == 0 || first > last || last > self.len() {
            return Err(Error::invalid(format!(
                "RMQ range {first}..={last} outside 1..={}",
                self.len()
            )));
        }
        Ok(self.min0(first - 1, last - 1))
    }

    /// Minimum over the 0-based inclusive range `lo..=hi`; requires `lo <= hi < len`.
    #[inline]
    pub(crate) fn min0(&self, lo: usize, hi: usize) -> usize {
        let k = (usize::BITS - 1 - (hi - lo + 1).leading_zeros()) as usize;
        let level = &self.levels[k];
        level[lo].min(level[hi + 1 - (1 << k)]) as usize
    }
}

/// Immutable preprocessed text shared by every border search.
#[derive(Debug, Clone)]
pub struct TextIndex {
    text: Text,
    sa: SuffixArray,
    lcp: LcpArray,
    rmq: RmqTable,
}

impl TextIndex {
    /// Builds the suffix array, LCP array and RMQ table, charging text reads
    /// to `ledger`.
    pub fn build(text: Text, ledger: &mut QueryLedger) -> Self {
        let sa = build_suffix_array(&text, ledger);
        let lcp = build_lcp_array(&text, &sa, ledger).expect("suffix array built from this text");
        let rmq = build_rmq(&lcp);
        TextIndex { text, sa, lcp, rmq }
    }

    pub fn text(&self) -> &Text {
        &self.text
    }

    pub fn len(&self) -> usize {
        self.text.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn suffix_array(&self) -> &SuffixArray {
        &self.sa
    }

    pub fn lcp_array(&self) -> &LcpArray {
        &self.lcp
    }

    pub fn rmq(&self) -> &RmqTable {
        &self.rmq
    }

    /// The suffix with 1-based rank `rank`.
    pub fn suffix(&self, rank: usize) -> &[u8] {
        self.suffix0(rank - 1)
    }

    #[inline]
    pub(crate) fn suffix0(&self, rank: usize) -> &[u8] {
        &self.text.as_bytes()[self.sa.order[rank]..]
    }

    /// LCP of the suffixes at 1-based ranks `i` and `j`, answered from the
    /// RMQ table without touching the text.
    pub fn lcp_suf(&self, i: usize, j: usize) -> Result<usize> {
        let n = self.len();
        if i == 0 || j == 0 || i > n || j > n {
            return Err(Error::invalid(format!(
                "rank pair ({i}, {j}) outside 1..={n}"
            )));
        }
        Ok(self.lcp_suf0(i - 1, j - 1))
    }

    #[inline]
    pub(crate) fn lcp_suf0(&self, i: usize, j: usize) -> usize {
        match i.cmp(&j) {
            Ordering::Equal => self.len() - self.sa.order[i],
            Ordering::Less => self.rmq.min0(i, j - 1),
            Ordering::Greater => self.rmq.min0(j, i - 1),
        }
    }
}

/// Reference LCP by linear scan.
pub fn naive_lcp(u: &[u8], v: &[u8]) -> usize {
    u.iter().zip(v).take_while(|(a, b)| a == b).count()
}

/// Sorts all suffixes of `text` with SA-IS, charging every text symbol
/// access to `ledger`.
pub fn build_suffix_array(text: &Text, ledger: &mut QueryLedger) -> SuffixArray {
    let counted = CountedBytes {
        bytes: text.as_bytes(),
        reads: Cell::new(0),
    };
    let order = sa_is(&counted, u8::MAX as usize);
    ledger.charge_classical(counted.reads.get());
    SuffixArray { order }
}

/// Kasai's algorithm. Each symbol comparison charges two reads.
pub fn build_lcp_array(
    text: &Text,
    sa: &SuffixArray,
    ledger: &mut QueryLedger,
) -> Result<LcpArray> {
    let s = text.as_bytes();
    let n = s.len();
    if sa.len() != n {
        return Err(Error::invalid(format!(
            "suffix array has {} entries but text has {n} symbols",
            sa.len()
        )));
    }
    let mut rank = vec![0usize; n];
    for (r, &p) in sa.order.iter().enumerate() {
        rank[p] = r;
    }
    let mut values = vec![0usize; n.saturating_sub(1)];
    let mut reads = 0u64;
    let mut h = 0usize;
    for i in 0..n {
        if rank[i] == 0 {
            h = 0;
            continue;
        }
        let j = sa.order[rank[i] - 1];
        while i + h < n && j + h < n {
            reads += 2;
            if s[i + h] != s[j + h] {
                break;
            }
            h += 1;
        }
        values[rank[i] - 1] = h;
        h = h.saturating_sub(1);
    }
    ledger.charge_classical(reads);
    Ok(LcpArray { values })
}

pub fn build_rmq(lcp: &LcpArray) -> RmqTable {
    let base: Vec<u32> = lcp.values.iter().map(|&v| v as u32).collect();
    let n = base.len();
    let mut levels = vec![base];
    let mut width = 1;
    while 2 * width <= n {
        let prev = levels.last().unwrap();
        let next: Vec<u32> = (0..=n - 2 * width)
            .map(|i| prev[i].min(prev[i + width]))
            .collect();
        levels.push(next);
        width *= 2;
    }
    RmqTable { levels }
}

trait Symbols {
    fn len(&self) -> usize;
    fn at(&self, i: usize) -> usize;
}

struct CountedBytes<'a> {
    bytes: &'a [u8],
    reads: Cell<u64>,
}

impl Symbols for CountedBytes<'_> {
    fn len(&self) -> usize {
        self.bytes.len()
    }

    #[inline]
    fn at(&self, i: usize) -> usize {
        self.reads.set(self.reads.get() + 1);
        self.bytes[i] as usize
    }
}

impl Symbols for [usize] {
    fn len(&self) -> usize {
        <[usize]>::len(self)
    }

    #[inline]
    fn at(&self, i: usize) -> usize {
        self[i]
    }
}

const NONE: usize = usize::MAX;

/// Induced sorting with an implicit sentinel smaller than every symbol.
/// `upper` is the largest symbol value that may occur.
fn sa_is<S: Symbols + ?Sized>(s: &S, upper: usize) -> Vec<usize> {
    let n = s.len();
    match n {
        0 => return Vec::new(),
        1 => return vec![0],
        2 => {
            return if s.at(0) < s.at(1) {
                vec![0, 1]
            } else {
                vec![1, 0]
            }
        }
        _ => {}
    }

    // is_s[i]: suffix i is S-type (smaller than suffix i + 1)
    let mut is_s = vec![false; n];
    for i in (0..n - 1).rev() {
        let (a, b) = (s.at(i), s.at(i + 1));
        is_s[i] = if a == b { is_s[i + 1] } else { a < b };
    }

    // sum_l[c]: start of bucket c; sum_s[c]: start of the S-part of bucket c
    let mut sum_l = vec![0usize; upper + 2];
    let mut sum_s = vec![0usize; upper + 2];
    for (i, &s_type) in is_s.iter().enumerate() {
        let c = s.at(i);
        if s_type {
            sum_l[c + 1] += 1;
        } else {
            sum_s[c] += 1;
        }
    }
    for c in 0..=upper {
        sum_s[c] += sum_l[c];
        sum_l[c + 1] += sum_s[c];
    }

    let is_lms = |i: usize| i > 0 && !is_s[i - 1] && is_s[i];
    let lms: Vec<usize> = (1..n).filter(|&i| is_lms(i)).collect();
    let mut lms_id = vec![NONE; n];
    for (k, &p) in lms.iter().enumerate() {
        lms_id[p] = k;
    }

    let mut sa = vec![NONE; n];
    let induce = |sa: &mut Vec<usize>, seeds: &[usize]| {
        sa.fill(NONE);
        let mut buf = sum_s.clone();
        for &d in seeds {
            let c = s.at(d);
            sa[buf[c]] = d;
            buf[c] += 1;
        }
        buf.copy_from_slice(&sum_l);
        let c = s.at(n - 1);
        sa[buf[c]] = n - 1;
        buf[c] += 1;
        for i in 0..n {
            let v = sa[i];
            if v != NONE && v >= 1 && !is_s[v - 1] {
                let c = s.at(v - 1);
                sa[buf[c]] = v - 1;
                buf[c] += 1;
            }
        }
        buf.copy_from_slice(&sum_l);
        for i in (0..n).rev() {
            let v = sa[i];
            if v != NONE && v >= 1 && is_s[v - 1] {
                let c = s.at(v - 1) + 1;
                buf[c] -= 1;
                sa[buf[c]] = v - 1;
            }
        }
    };

    induce(&mut sa, &lms);

    let m = lms.len();
    if m > 0 {
        let sorted_lms: Vec<usize> = sa.iter().copied().filter(|&v| lms_id[v] != NONE).collect();
        let mut names = vec![0usize; m];
        let mut name = 0;
        names[lms_id[sorted_lms[0]]] = 0;
        for w in sorted_lms.windows(2) {
            let (mut l, mut r) = (w[0], w[1]);
            let end_l = lms.get(lms_id[l] + 1).copied().unwrap_or(n);
            let end_r = lms.get(lms_id[r] + 1).copied().unwrap_or(n);
            let mut same = end_l - l == end_r - r;
            if same {
                while l < end_l && s.at(l) == s.at(r) {
                    l += 1;
                    r += 1;
                }
                if l == n || s.at(l) != s.at(r) {
                    same = false;
                }
            }
            if !same {
                name += 1;
            }
            names[lms_id[w[1]]] = name;
        }

        let rec = sa_is(names.as_slice(), name);
        let seeds: Vec<usize> = rec.iter().map(|&k| lms[k]).collect();
        induce(&mut sa, &seeds);
    }
    sa
}

#[cfg(test)]
mod tests {
    use super::*;

    fn index(s: &[u8]) -> TextIndex {
        TextIndex::build(Text::new(s.to_vec()).unwrap(), &mut QueryLedger::new())
    }

    fn brute_sa(s: &[u8]) -> Vec<usize> {
        let mut v: Vec<usize> = (1..=s.len()).collect();
        v.sort_by(|&a, &b| s[a - 1..].cmp(&s[b - 1..]));
        v
    }

    #[test]
    fn empty_text_rejected() {
        assert!(matches!(Text::new(Vec::new()), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn banana() {
        let idx = index(b"banana");
        assert_eq!(idx.suffix_array().to_positions(), vec![6, 4, 2, 1, 5, 3]);
        assert_eq!(idx.lcp_array().values(), &[1, 3, 0, 0, 2]);
        assert_eq!(idx.lcp_suf(2, 3).unwrap(), 3);
        assert_eq!(idx.lcp_suf(4, 4).unwrap(), 6);
        assert_eq!(idx.lcp_suf(1, 6).unwrap(), 0);
        assert_eq!(idx.lcp_suf(6, 1).unwrap(), 0);
    }

    #[test]
    fn single_symbol_and_runs() {
        let idx = index(b"a");
        assert_eq!(idx.suffix_array().to_positions(), vec![1]);
        assert!(idx.lcp_array().is_empty());
        assert_eq!(idx.lcp_suf(1, 1).unwrap(), 1);

        let idx = index(b"aaa");
        assert_eq!(idx.suffix_array().to_positions(), vec![3, 2, 1]);
        assert_eq!(idx.lcp_array().values(), &[1, 2]);
    }

    #[test]
    fn rmq_examples() {
        let rmq = build_rmq(&LcpArray::from_values(vec![1, 3, 0, 0, 2]));
        assert_eq!(rmq.min(1, 2).unwrap(), 1);
        assert_eq!(rmq.min(2, 2).unwrap(), 3);
        assert_eq!(rmq.min(2, 5).unwrap(), 0);
        assert!(rmq.min(0, 2).is_err());
        assert!(rmq.min(3, 2).is_err());
        assert!(rmq.min(1, 6).is_err());
    }

    #[test]
    fn lcp_suf_rejects_bad_ranks() {
        let idx = index(b"banana");
        assert!(idx.lcp_suf(0, 1).is_err());
        assert!(idx.lcp_suf(1, 7).is_err());
    }

    #[test]
    fn lcp_rejects_mismatched_suffix_array() {
        let text = Text::new(b"abc".to_vec()).unwrap();
        let sa = SuffixArray::from_positions(&[1, 2]).unwrap();
        assert!(build_lcp_array(&text, &sa, &mut QueryLedger::new()).is_err());
        assert!(SuffixArray::from_positions(&[1, 1]).is_err());
    }

    #[test]
    fn naive_lcp_examples() {
        assert_eq!(naive_lcp(b"abc", b"abd"), 2);
        assert_eq!(naive_lcp(b"abc", b"abc"), 3);
        assert_eq!(naive_lcp(b"x", b"y"), 0);
    }

    #[test]
    fn full_byte_range() {
        let s: Vec<u8> = (0..=255u8)
            .rev()
            .chain(0..=255u8)
            .chain([0, 0, 255])
            .collect();
        assert_eq!(index(&s).suffix_array().to_positions(), brute_sa(&s));
    }

    #[test]
    fn construction_reads_are_linear() {
        for s in [&b"abracadabra"[..], b"aaaaaaaaaaaaaaaaaaaaaaaa", b"ab"] {
            let mut ledger = QueryLedger::new();
            TextIndex::build(Text::new(s.to_vec()).unwrap(), &mut ledger);
            assert!(ledger.classical_reads() <= 64 * s.len() as u64);
            assert_eq!(ledger.quantum_queries(), 0);
        }
    }
}
