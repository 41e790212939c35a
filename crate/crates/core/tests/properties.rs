use std::collections::BTreeMap;

use cpm_core::query::{self, ContextAccess};
use cpm_core::{
    oracle_contexts, CpmIndex, Interval, MappingStrategy, QueryStats, SparseTable, Symbol, Text,
};
use proptest::prelude::*;

fn text_strategy(max_len: usize) -> impl Strategy<Value = Vec<u8>> {
    prop_oneof![Just(2u8), Just(3u8), Just(4u8), Just(26u8)]
        .prop_flat_map(move |sigma| proptest::collection::vec(b'a'..b'a' + sigma, 1..max_len))
}

fn pattern_from(t: &Text, start: prop::sample::Index, len: usize) -> Vec<Symbol> {
    let n = t.n();
    let from = 1 + start.index(n - 1);
    t.symbols()[from..(from + len).min(n)].to_vec()
}

/// An access layer built independently of `SuffixEnsemble`: suffix arrays
/// by plain sorting, `C` recomputed on the fly.
struct SortedAccess {
    text: Text,
    sa: Vec<usize>,
    isa: Vec<usize>,
    rev_sa: Vec<usize>,
    lcp: SparseTable,
    rev_lcp: SparseTable,
    c: SparseTable,
}

fn sorted_arrays(t: &Text) -> (Vec<usize>, Vec<usize>) {
    let s = t.symbols();
    let mut sa: Vec<usize> = (1..=t.n()).collect();
    sa.sort_by(|&a, &b| s[a..].cmp(&s[b..]));
    let lcp: Vec<usize> = (0..sa.len())
        .map(|i| {
            if i == 0 {
                0
            } else {
                s[sa[i - 1]..]
                    .iter()
                    .zip(&s[sa[i]..])
                    .take_while(|(a, b)| a == b)
                    .count()
            }
        })
        .collect();
    sa.insert(0, 0);
    (sa, lcp)
}

impl SortedAccess {
    fn new(text: Text) -> SortedAccess {
        let n = text.n();
        let (sa, lcp) = sorted_arrays(&text);
        let (rev_sa, rev_lcp) = sorted_arrays(&text.reversed());
        let mut isa = vec![0; n + 1];
        for i in 1..=n {
            isa[sa[i]] = i;
        }
        let c: Vec<usize> = (1..=n)
            .map(|i| match n - rev_sa[i] {
                0 => usize::MAX,
                j => isa[j],
            })
            .collect();
        SortedAccess {
            lcp: SparseTable::new(&lcp).unwrap(),
            rev_lcp: SparseTable::new(&rev_lcp).unwrap(),
            c: SparseTable::new(&c).unwrap(),
            text,
            sa,
            isa,
            rev_sa,
        }
    }
}

impl ContextAccess for SortedAccess {
    type Ranges = SparseTable;

    fn n(&self) -> usize {
        self.text.n()
    }

    fn symbol(&self, pos: usize) -> Symbol {
        self.text.symbol(pos)
    }

    fn reverse_range(&self, rev_pattern: &[Symbol]) -> cpm_core::Result<Option<Interval>> {
        let u = self.text.reversed();
        let hits: Vec<usize> = (1..=self.n())
            .filter(|&i| u.symbols()[self.rev_sa[i]..].starts_with(rev_pattern))
            .collect();
        Ok(hits
            .first()
            .map(|&lo| Interval::new(lo, *hits.last().unwrap())))
    }

    fn sa(&self, i: usize) -> usize {
        self.sa[i]
    }

    fn isa(&self, pos: usize) -> usize {
        self.isa[pos]
    }

    fn rev_sa(&self, i: usize) -> usize {
        self.rev_sa[i]
    }

    fn fwd_lcp(&self) -> &SparseTable {
        &self.lcp
    }

    fn rev_lcp(&self) -> &SparseTable {
        &self.rev_lcp
    }

    fn c_ranges(&self) -> &SparseTable {
        &self.c
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn matches_oracle(
        raw in text_strategy(120),
        start in any::<prop::sample::Index>(),
        len in 1usize..5,
        ell in 0usize..8,
        strategy in prop_oneof![Just(MappingStrategy::PsvNsv), Just(MappingStrategy::CMin)],
    ) {
        let t = Text::from_bytes(&raw).unwrap();
        let ix = CpmIndex::build(t.clone()).unwrap();
        let p = pattern_from(&t, start, len);
        let got = ix.query(&p, ell, strategy, &mut QueryStats::default()).unwrap();
        let mut map = BTreeMap::new();
        for mch in &got {
            prop_assert_eq!(mch.context.len(), p.len() + 2 * ell);
            prop_assert_eq!(mch.count, mch.range.len());
            let mut pos = ix.enumerate_occurrences(mch);
            prop_assert!(pos.contains(&mch.rep_position));
            prop_assert_eq!(ix.extract_context(mch.rep_position, p.len(), ell), mch.context.clone());
            pos.sort_unstable();
            prop_assert!(map.insert(mch.context.clone(), pos).is_none(), "duplicate context");
        }
        prop_assert_eq!(map, oracle_contexts(&t, &p, ell).contexts);
    }

    #[test]
    fn interior_ranges_are_exact(
        raw in text_strategy(150),
        start in any::<prop::sample::Index>(),
        len in 1usize..4,
        ell in 0usize..5,
    ) {
        let t = Text::from_bytes(&raw).unwrap();
        let ix = CpmIndex::build(t.clone()).unwrap();
        let p = pattern_from(&t, start, len);
        let depth = p.len() + 2 * ell;
        let s = t.symbols();
        let sa = ix.forward().sa();
        let prefix = |rank: usize| -> Vec<Symbol> {
            (0..depth).map(|k| t.padded_symbol((sa[rank] + k) as isize)).collect()
        };
        let got = ix.query(&p, ell, MappingStrategy::CMin, &mut QueryStats::default()).unwrap();
        for mch in got.iter().filter(|m| m.p_offset == ell && m.count > 1) {
            let head = prefix(mch.range.lo);
            prop_assert!(!head.contains(&0));
            for r in mch.range.iter() {
                prop_assert_eq!(&prefix(r), &head);
                prop_assert_eq!(&s[sa[r]..sa[r] + depth], &head[..]);
            }
            if mch.range.lo > 1 {
                prop_assert_ne!(prefix(mch.range.lo - 1), head.clone());
            }
            if mch.range.hi < t.n() {
                prop_assert_ne!(prefix(mch.range.hi + 1), head);
            }
        }
    }

    #[test]
    fn engine_runs_on_another_access_layer(
        raw in text_strategy(80),
        start in any::<prop::sample::Index>(),
        len in 1usize..4,
        ell in 0usize..6,
    ) {
        let t = Text::from_bytes(&raw).unwrap();
        let ix = CpmIndex::build(t.clone()).unwrap();
        let alt = SortedAccess::new(t.clone());
        let p = pattern_from(&t, start, len);
        for strategy in [MappingStrategy::PsvNsv, MappingStrategy::CMin] {
            let want = ix.query(&p, ell, strategy, &mut QueryStats::default()).unwrap();
            let got = query::query(&alt, &p, ell, strategy, &mut QueryStats::default()).unwrap();
            prop_assert_eq!(&got, &want);
        }
    }

    #[test]
    fn stats_envelope_and_reset(
        raw in text_strategy(300),
        start in any::<prop::sample::Index>(),
        len in 1usize..4,
        ell in 0usize..6,
    ) {
        let t = Text::from_bytes(&raw).unwrap();
        let ix = CpmIndex::build(t.clone()).unwrap();
        let p = pattern_from(&t, start, len);
        let mut stats = QueryStats::default();
        let got = ix.query(&p, ell, MappingStrategy::PsvNsv, &mut stats).unwrap();
        prop_assert!(stats.range_queries() <= 6 * got.len() as u64 + 8);
        stats.reset();
        prop_assert_eq!(stats, QueryStats::default());
    }
}

#[test]
fn huge_context_on_tiny_text() {
    let t = Text::from_bytes(b"aab").unwrap();
    let ix = CpmIndex::build(t.clone()).unwrap();
    let p = t.encode_pattern(b"a").unwrap();
    for ell in [3, 4, 10, 100] {
        for strategy in [MappingStrategy::PsvNsv, MappingStrategy::CMin] {
            let got = ix
                .query(&p, ell, strategy, &mut QueryStats::default())
                .unwrap();
            assert_eq!(got.len(), 2);
            assert!(got.iter().all(|m| m.count == 1));
        }
    }
}

#[test]
fn concurrent_queries_share_one_index() {
    let raw: Vec<u8> = b"abracadabra".repeat(50);
    let ix = CpmIndex::build(Text::from_bytes(&raw).unwrap()).unwrap();
    let want = ix
        .query_bytes(
            b"abra",
            2,
            MappingStrategy::PsvNsv,
            &mut QueryStats::default(),
        )
        .unwrap();
    std::thread::scope(|scope| {
        for _ in 0..4 {
            scope.spawn(|| {
                let mut stats = QueryStats::default();
                let got = ix
                    .query_bytes(b"abra", 2, MappingStrategy::PsvNsv, &mut stats)
                    .unwrap();
                assert_eq!(got, want);
            });
        }
    });
}
