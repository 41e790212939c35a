//! Brute-force contextual matching by scanning every text position.
//!
//! Shares nothing with the index beyond [`Text`]; it is the reference the
//! property and acceptance suites compare against.

use std::collections::BTreeMap;

use crate::corpus::{Symbol, Text};

/// Distinct padded contexts mapped to the sorted start positions of `P`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OracleResult {
    pub contexts: BTreeMap<Vec<Symbol>, Vec<usize>>,
}

impl OracleResult {
    pub fn total_occurrences(&self) -> usize {
        self.contexts.values().map(Vec::len).sum()
    }
}

pub fn oracle_contexts(t: &Text, pattern: &[Symbol], ell: usize) -> OracleResult {
    let mut out = OracleResult::default();
    let n = t.n();
    let m = pattern.len();
    if m == 0 {
        return out;
    }
    for i in 1..n {
        if i + m > n || &t.symbols()[i..i + m] != pattern {
            continue;
        }
        let from = i as isize - ell as isize;
        let context: Vec<Symbol> = (0..m + 2 * ell)
            .map(|k| t.padded_symbol(from + k as isize))
            .collect();
        out.contexts.entry(context).or_default().push(i);
    }
    out
}
