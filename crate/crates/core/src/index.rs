//! The queryable index: suffix ensembles of `T` and `T^rev`, the `C`
//! array linking them, and range-query structures over the LCP arrays and
//! `C`.

use crate::corpus::{Symbol, Text};
use crate::error::Result;
use crate::query::{self, ContextAccess, ContextMatch, MappingStrategy, QueryTrace};
use crate::rmq::{Interval, QueryStats, SparseTable};
use crate::suffix::SuffixEnsemble;

/// Marker stored in `C` at the one rank whose reverse suffix is `$`.
pub const UNDEFINED: usize = usize::MAX;

/// BWT run counts of the text and its reverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RunStats {
    /// Runs in the BWT of `T`.
    pub r: usize,
    /// Runs in the BWT of `T^rev`.
    pub r_rev: usize,
}

impl RunStats {
    /// `max(r, r_rev)`.
    pub fn r_bar(&self) -> usize {
        self.r.max(self.r_rev)
    }
}

#[derive(Clone, Debug)]
pub struct CpmIndex {
    fwd: SuffixEnsemble,
    rev: SuffixEnsemble,
    c: Vec<usize>,
    rmq_fwd: SparseTable,
    rmq_rev: SparseTable,
    rmq_c: SparseTable,
}

/// `C[i] = isa[n - rev.sa[i]]`, 1-based, [`UNDEFINED`] where `rev.sa[i] = n`.
pub(crate) fn build_c_array(fwd: &SuffixEnsemble, rev: &SuffixEnsemble) -> Vec<usize> {
    let n = fwd.n();
    let mut c = vec![0; n + 1];
    for (slot, &p) in c.iter_mut().zip(rev.sa()).skip(1) {
        *slot = match n - p {
            0 => UNDEFINED,
            j => fwd.isa()[j],
        };
    }
    c
}

impl CpmIndex {
    pub fn build(text: Text) -> Result<CpmIndex> {
        let rev = SuffixEnsemble::build(text.reversed());
        let fwd = SuffixEnsemble::build(text);
        let c = build_c_array(&fwd, &rev);
        CpmIndex::assemble(fwd, rev, c)
    }

    /// Builds the range-query structures over already validated arrays.
    pub(crate) fn assemble(
        fwd: SuffixEnsemble,
        rev: SuffixEnsemble,
        c: Vec<usize>,
    ) -> Result<CpmIndex> {
        let rmq_fwd = SparseTable::new(&fwd.lcp()[1..])?;
        let rmq_rev = SparseTable::new(&rev.lcp()[1..])?;
        let rmq_c = SparseTable::new(&c[1..])?;
        Ok(CpmIndex {
            fwd,
            rev,
            c,
            rmq_fwd,
            rmq_rev,
            rmq_c,
        })
    }

    pub fn text(&self) -> &Text {
        self.fwd.text()
    }

    pub fn n(&self) -> usize {
        self.fwd.n()
    }

    pub fn forward(&self) -> &SuffixEnsemble {
        &self.fwd
    }

    pub fn reverse(&self) -> &SuffixEnsemble {
        &self.rev
    }

    /// The 1-based `C` array (entry 0 unused).
    pub fn c_array(&self) -> &[usize] {
        &self.c
    }

    pub fn runs(&self) -> RunStats {
        RunStats {
            r: self.fwd.bwt_runs(),
            r_rev: self.rev.bwt_runs(),
        }
    }

    /// Contextual pattern matching: one match per distinct padded context
    /// `XPY` with `|X| = |Y| = ell`.
    pub fn query(
        &self,
        pattern: &[Symbol],
        ell: usize,
        strategy: MappingStrategy,
        stats: &mut QueryStats,
    ) -> Result<Vec<ContextMatch>> {
        query::query(self, pattern, ell, strategy, stats)
    }

    /// [`CpmIndex::query`] that also records the intermediate ranges.
    pub fn query_traced(
        &self,
        pattern: &[Symbol],
        ell: usize,
        strategy: MappingStrategy,
        stats: &mut QueryStats,
    ) -> Result<(Vec<ContextMatch>, QueryTrace)> {
        query::query_traced(self, pattern, ell, strategy, stats)
    }

    /// Byte-level convenience: patterns with bytes outside the alphabet
    /// have no occurrences.
    pub fn query_bytes(
        &self,
        pattern: &[u8],
        ell: usize,
        strategy: MappingStrategy,
        stats: &mut QueryStats,
    ) -> Result<Vec<ContextMatch>> {
        if pattern.is_empty() {
            return Err(crate::Error::EmptyPattern);
        }
        match self.text().encode_pattern(pattern) {
            Some(p) => self.query(&p, ell, strategy, stats),
            None => Ok(Vec::new()),
        }
    }

    /// Text positions of every occurrence of `P` grouped under `mch`.
    pub fn enumerate_occurrences(&self, mch: &ContextMatch) -> Vec<usize> {
        query::enumerate_occurrences(self, mch)
    }

    pub fn extract_context(&self, pos: usize, m: usize, ell: usize) -> Vec<Symbol> {
        query::extract_context(self, pos, m, ell)
    }
}

impl ContextAccess for CpmIndex {
    type Ranges = SparseTable;

    fn n(&self) -> usize {
        self.fwd.n()
    }

    fn symbol(&self, pos: usize) -> Symbol {
        self.fwd.text().symbol(pos)
    }

    fn reverse_range(&self, rev_pattern: &[Symbol]) -> Result<Option<Interval>> {
        self.rev.find_pattern_range(rev_pattern)
    }

    fn sa(&self, i: usize) -> usize {
        self.fwd.sa()[i]
    }

    fn isa(&self, pos: usize) -> usize {
        self.fwd.isa()[pos]
    }

    fn rev_sa(&self, i: usize) -> usize {
        self.rev.sa()[i]
    }

    fn fwd_lcp(&self) -> &SparseTable {
        &self.rmq_fwd
    }

    fn rev_lcp(&self) -> &SparseTable {
        &self.rmq_rev
    }

    fn c_ranges(&self) -> &SparseTable {
        &self.rmq_c
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn figure_c_array() {
        let ix = CpmIndex::build(Text::from_bytes(b"alabaralalabarda").unwrap()).unwrap();
        assert_eq!(ix.c_array()[1], UNDEFINED);
        assert_eq!(
            &ix.c_array()[2..],
            &[5, 8, 9, 2, 3, 4, 6, 7, 10, 11, 12, 13, 14, 15, 16, 17]
        );
    }

    #[test]
    fn minimal_index() {
        let ix = CpmIndex::build(Text::from_bytes(b"a").unwrap()).unwrap();
        assert_eq!(ix.n(), 2);
        assert_eq!(&ix.forward().sa()[1..], &[2, 1]);
    }

    #[test]
    fn c_array_matches_definition_on_random_texts() {
        let mut x = 88172645463325252u64;
        for len in 1..200usize {
            let raw: Vec<u8> = (0..len)
                .map(|_| {
                    x ^= x << 13;
                    x ^= x >> 7;
                    x ^= x << 17;
                    b'a' + (x % 4) as u8
                })
                .collect();
            let ix = CpmIndex::build(Text::from_bytes(&raw).unwrap()).unwrap();
            let n = ix.n();
            let mut seen = vec![false; n + 1];
            for i in 1..=n {
                let pos = n - ix.reverse().sa()[i];
                let c = ix.c_array()[i];
                if pos == 0 {
                    assert_eq!(c, UNDEFINED);
                } else {
                    assert_eq!(c, ix.forward().isa()[pos]);
                    assert!(!seen[c]);
                    seen[c] = true;
                }
            }
        }
    }

    #[test]
    fn figure_runs() {
        let ix = CpmIndex::build(Text::from_bytes(b"alabaralalabarda").unwrap()).unwrap();
        let runs = ix.runs();
        assert_eq!(runs.r, 10);
        assert_eq!(runs.r_bar(), runs.r.max(runs.r_rev));
    }
}
