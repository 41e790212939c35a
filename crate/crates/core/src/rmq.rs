//! Range-minimum, previous-smaller-value and next-smaller-value queries.
//!
//! Positions are 1-based throughout, matching the suffix arrays they
//! operate on. The [`SparseTable`] stores leftmost argmins for every
//! power-of-two block, `O(n log n)` words, and answers `rmq` in `O(1)`.
//! `psv`/`nsv` descend over the same blocks in `O(log n)`.

use std::fmt;

use crate::error::{Error, Result};

/// A closed interval `[lo..=hi]` of 1-based ranks. Never empty.
#[allow(clippy::len_without_is_empty)]
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Interval {
    pub lo: usize,
    pub hi: usize,
}

impl Interval {
    pub fn new(lo: usize, hi: usize) -> Interval {
        debug_assert!(lo <= hi);
        Interval { lo, hi }
    }

    pub fn len(&self) -> usize {
        self.hi - self.lo + 1
    }

    pub fn is_singleton(&self) -> bool {
        self.lo == self.hi
    }

    pub fn iter(&self) -> std::ops::RangeInclusive<usize> {
        self.lo..=self.hi
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.lo, self.hi)
    }
}

/// Per-query instrumentation counters.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct QueryStats {
    pub rmq_calls: u64,
    pub psv_calls: u64,
    pub nsv_calls: u64,
    pub sa_accesses: u64,
}

impl QueryStats {
    pub fn reset(&mut self) {
        *self = QueryStats::default();
    }

    /// `rmq_calls + psv_calls + nsv_calls`.
    pub fn range_queries(&self) -> u64 {
        self.rmq_calls + self.psv_calls + self.nsv_calls
    }
}

/// Range queries over a frozen integer array indexed `1..=n`.
pub trait RangeQueries {
    /// Number of entries `n`.
    fn len(&self) -> usize;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// The array value at `i`.
    fn value(&self, i: usize) -> usize;

    /// Leftmost position of the minimum in `[i..=j]`.
    fn rmq(&self, i: usize, j: usize, stats: &mut QueryStats) -> Result<usize>;

    /// Largest `q < p` with `value(q) < d`, or 0.
    fn psv(&self, p: usize, d: usize, stats: &mut QueryStats) -> Result<usize>;

    /// Smallest `q > p` with `value(q) < d`, or `n + 1`.
    fn nsv(&self, p: usize, d: usize, stats: &mut QueryStats) -> Result<usize>;

    /// Splits `range` into maximal subintervals that start at `range.lo` and
    /// at each position in `(lo..=hi]` holding a value below `t`.
    ///
    /// Runs the 3-sided recursion (take the minimum, stop if it is `>= t`,
    /// otherwise report it and recurse on both sides) over `(lo..=hi]`, so
    /// a result of `k` parts costs at most `2k - 1` rmq calls.
    fn partition(
        &self,
        range: Interval,
        t: usize,
        stats: &mut QueryStats,
    ) -> Result<Vec<Interval>> {
        let n = self.len();
        if range.lo == 0 || range.lo > range.hi || range.hi > n {
            return Err(Error::InvalidRange {
                lo: range.lo,
                hi: range.hi,
                n,
            });
        }

        enum Step {
            Scan(usize, usize),
            Emit(usize),
        }
        let mut starts = vec![range.lo];
        let mut stack = vec![Step::Scan(range.lo + 1, range.hi)];
        while let Some(step) = stack.pop() {
            match step {
                Step::Scan(s, e) if s <= e => {
                    let p = self.rmq(s, e, stats)?;
                    if self.value(p) < t {
                        stack.push(Step::Scan(p + 1, e));
                        stack.push(Step::Emit(p));
                        stack.push(Step::Scan(s, p - 1));
                    }
                }
                Step::Scan(..) => {}
                Step::Emit(p) => starts.push(p),
            }
        }

        let mut parts = Vec::with_capacity(starts.len());
        for (k, &s) in starts.iter().enumerate() {
            let e = starts.get(k + 1).map_or(range.hi, |&next| next - 1);
            parts.push(Interval::new(s, e));
        }
        Ok(parts)
    }
}

/// Sparse table of leftmost argmins.
#[derive(Clone, Debug)]
pub struct SparseTable {
    // values[0] is a placeholder so positions index directly.
    values: Vec<usize>,
    // levels[k][i] = argmin of values[i..i + 2^k], for 1 <= i <= n + 1 - 2^k.
    levels: Vec<Vec<u32>>,
}

impl SparseTable {
    /// Builds the table over `values[0..n]`, exposed as positions `1..=n`.
    pub fn new(values: &[usize]) -> Result<SparseTable> {
        let n = values.len();
        if n == 0 {
            return Err(Error::EmptyArray);
        }
        assert!(n < u32::MAX as usize, "array too long for 32-bit positions");
        let mut padded = Vec::with_capacity(n + 1);
        padded.push(0);
        padded.extend_from_slice(values);

        let mut levels: Vec<Vec<u32>> = vec![(0..=n as u32).collect()];
        let mut width = 1usize;
        while 2 * width <= n {
            let prev = levels.last().unwrap();
            let next: Vec<u32> = (0..=n + 1 - 2 * width)
                .map(|i| {
                    if i == 0 {
                        return 0;
                    }
                    let (a, b) = (prev[i], prev[i + width]);
                    if padded[a as usize] <= padded[b as usize] {
                        a
                    } else {
                        b
                    }
                })
                .collect();
            levels.push(next);
            width *= 2;
        }
        Ok(SparseTable {
            values: padded,
            levels,
        })
    }

    /// The array positions `1..=n` as a slice of length `n`.
    pub fn values(&self) -> &[usize] {
        &self.values[1..]
    }

    fn check_pos(&self, pos: usize, lo: usize, hi: usize) -> Result<()> {
        if pos < lo || pos > hi {
            return Err(Error::InvalidPosition { pos, n: self.len() });
        }
        Ok(())
    }

    #[inline]
    fn block_min(&self, k: usize, start: usize) -> usize {
        self.values[self.levels[k][start] as usize]
    }

    #[inline]
    fn argmin(&self, i: usize, j: usize) -> usize {
        let k = (usize::BITS - 1 - (j - i + 1).leading_zeros()) as usize;
        let a = self.levels[k][i] as usize;
        let b = self.levels[k][j + 1 - (1 << k)] as usize;
        if self.values[a] <= self.values[b] {
            a
        } else {
            b
        }
    }
}

impl RangeQueries for SparseTable {
    fn len(&self) -> usize {
        self.values.len() - 1
    }

    fn value(&self, i: usize) -> usize {
        self.values[i]
    }

    fn rmq(&self, i: usize, j: usize, stats: &mut QueryStats) -> Result<usize> {
        let n = self.len();
        if i == 0 || i > j || j > n {
            return Err(Error::InvalidRange { lo: i, hi: j, n });
        }
        stats.rmq_calls += 1;
        Ok(self.argmin(i, j))
    }

    fn psv(&self, p: usize, d: usize, stats: &mut QueryStats) -> Result<usize> {
        self.check_pos(p, 1, self.len() + 1)?;
        stats.psv_calls += 1;
        // Skip the longest run ending at q whose values are all >= d.
        let mut q = p - 1;
        for k in (0..self.levels.len()).rev() {
            let w = 1 << k;
            if q >= w && self.block_min(k, q + 1 - w) >= d {
                q -= w;
            }
        }
        Ok(q)
    }

    fn nsv(&self, p: usize, d: usize, stats: &mut QueryStats) -> Result<usize> {
        let n = self.len();
        self.check_pos(p, 0, n)?;
        stats.nsv_calls += 1;
        let mut q = p + 1;
        for k in (0..self.levels.len()).rev() {
            let w = 1 << k;
            if q + w - 1 <= n && self.block_min(k, q) >= d {
                q += w;
            }
        }
        Ok(q)
    }
}
