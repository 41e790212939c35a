//! Contextual pattern matching over any suffix-array access layer.
//!
//! A query `(P, ell)` runs in five steps:
//!
//! 1. find the range of `P^rev` in the suffix array of `T^rev`;
//! 2. split it where the reverse LCP drops below `m + ell`, one part per
//!    distinct left context `X`;
//! 3. map each part to the forward range of suffixes starting with `XP`;
//! 4. split that range where the forward LCP drops below `m + 2 ell`, one
//!    subinterval per right context `Y`;
//! 5. report every subinterval as a [`ContextMatch`].
//!
//! Parts whose `X` runs past the left end of `T` are singletons (the
//! sentinel `T[0]` occurs once) and are emitted directly after step 2.
//!
//! The engine only needs the operations of [`ContextAccess`], so an index
//! that stores `SA`, `SA^-1` and `SA'` differently can reuse it unchanged.

use crate::corpus::{Symbol, SENTINEL};
use crate::error::{Error, Result};
use crate::rmq::{Interval, QueryStats, RangeQueries};

/// Cell access needed to answer contextual queries.
///
/// Ranks are 1-based; text positions run over `0..=n`.
pub trait ContextAccess {
    type Ranges: RangeQueries;

    /// The length index `n` of `T[0..=n]`.
    fn n(&self) -> usize;

    /// `T[pos]` for `0 <= pos <= n`.
    fn symbol(&self, pos: usize) -> Symbol;

    /// Range of suffixes of `T^rev` starting with `rev_pattern`.
    fn reverse_range(&self, rev_pattern: &[Symbol]) -> Result<Option<Interval>>;

    /// `SA[i]`.
    fn sa(&self, i: usize) -> usize;

    /// `SA^-1[pos]`, for `1 <= pos <= n`.
    fn isa(&self, pos: usize) -> usize;

    /// `SA'[i]`, the suffix array of `T^rev`.
    fn rev_sa(&self, i: usize) -> usize;

    /// Range queries over `LCP`.
    fn fwd_lcp(&self) -> &Self::Ranges;

    /// Range queries over `LCP'`.
    fn rev_lcp(&self) -> &Self::Ranges;

    /// Range-minimum queries over `C[i] = SA^-1[n - SA'[i]]`.
    fn c_ranges(&self) -> &Self::Ranges;
}

/// How step 3 turns a reverse part into a forward range.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum MappingStrategy {
    /// Translate one suffix through `SA^-1`, then widen with PSV/NSV.
    #[default]
    PsvNsv,
    /// Translate the suffix at the minimum of `C`; the width is known.
    CMin,
}

/// One distinct context `XPY`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ContextMatch {
    /// `m + 2 ell` symbols, sentinel-padded at the text ends.
    pub context: Vec<Symbol>,
    /// Ranks `[ds..=de]` in the forward suffix array.
    pub range: Interval,
    pub count: usize,
    /// Start of `P` in `T` for one occurrence, always in `1..n`.
    pub rep_position: usize,
    /// Offset of `P` inside each suffix of `range`: `ell` for interior
    /// contexts, 0 for a context crossing the left end.
    pub p_offset: usize,
}

/// One step-2 part and where it went.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PartTrace {
    /// Ranks in the reverse suffix array.
    pub part: Interval,
    /// The context crosses the left text boundary.
    pub boundary: bool,
    /// Forward range after step 3 (for boundary parts, the emitted range).
    pub mapped: Interval,
}

/// Intermediate ranges of one query.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct QueryTrace {
    pub rev_range: Option<Interval>,
    pub parts: Vec<PartTrace>,
}

impl QueryTrace {
    /// First rank of each step-2 part.
    pub fn part_starts(&self) -> Vec<usize> {
        self.parts.iter().map(|p| p.part.lo).collect()
    }

    pub fn mapped_ranges(&self) -> Vec<Interval> {
        self.parts.iter().map(|p| p.mapped).collect()
    }
}

/// Where the context `XP` of a reverse part starts in `T`, or `None` when
/// it starts at or before `T[0]`.
fn context_start<A: ContextAccess + ?Sized>(
    ix: &A,
    part: Interval,
    m: usize,
    ell: usize,
    stats: &mut QueryStats,
) -> Option<usize> {
    stats.sa_accesses += 1;
    let after = ix.n() - ix.rev_sa(part.lo);
    let reach = (m + ell).saturating_sub(1);
    after.checked_sub(reach).filter(|&j| j > 0)
}

/// Step 3 via one `SA^-1` lookup and PSV/NSV on the forward LCP.
pub fn map_via_psv_nsv<A: ContextAccess + ?Sized>(
    ix: &A,
    part: Interval,
    m: usize,
    ell: usize,
    stats: &mut QueryStats,
) -> Result<Interval> {
    let j = context_start(ix, part, m, ell, stats).ok_or(Error::BoundaryPart(part))?;
    let t = m.saturating_add(ell);
    stats.sa_accesses += 1;
    let p = ix.isa(j);
    let lcp = ix.fwd_lcp();
    // PSV is strict (q < p); p itself may already start the range.
    let ds = if lcp.value(p) < t {
        p
    } else {
        lcp.psv(p, t, stats)?
    };
    let de = lcp.nsv(p, t, stats)? - 1;
    Ok(Interval::new(ds, de))
}

/// Step 3 via the minimum of `C` over the part.
pub fn map_via_cmin<A: ContextAccess + ?Sized>(
    ix: &A,
    part: Interval,
    m: usize,
    ell: usize,
    stats: &mut QueryStats,
) -> Result<Interval> {
    context_start(ix, part, m, ell, stats).ok_or(Error::BoundaryPart(part))?;
    let best = ix.c_ranges().rmq(part.lo, part.hi, stats)?;
    let j = context_start(ix, Interval::new(best, best), m, ell, stats)
        .ok_or(Error::BoundaryPart(part))?;
    stats.sa_accesses += 1;
    let ds = ix.isa(j);
    Ok(Interval::new(ds, ds + (part.hi - part.lo)))
}

/// Emits the single context of a part whose `X` crosses the left end.
pub fn emit_boundary_context<A: ContextAccess + ?Sized>(
    ix: &A,
    part: Interval,
    m: usize,
    ell: usize,
    stats: &mut QueryStats,
) -> Result<ContextMatch> {
    if !part.is_singleton() {
        return Err(Error::NonSingletonBoundary(part));
    }
    stats.sa_accesses += 2;
    let pos = ix.n() + 1 - ix.rev_sa(part.lo) - m;
    let rank = ix.isa(pos);
    Ok(ContextMatch {
        context: extract_context(ix, pos, m, ell),
        range: Interval::new(rank, rank),
        count: 1,
        rep_position: pos,
        p_offset: 0,
    })
}

/// Start positions of `P` for every occurrence grouped under `mch`, in
/// suffix-array order.
pub fn enumerate_occurrences<A: ContextAccess + ?Sized>(ix: &A, mch: &ContextMatch) -> Vec<usize> {
    mch.range.iter().map(|p| ix.sa(p) + mch.p_offset).collect()
}

/// `T[pos - ell .. pos + m + ell)` with virtual sentinel padding.
pub fn extract_context<A: ContextAccess + ?Sized>(
    ix: &A,
    pos: usize,
    m: usize,
    ell: usize,
) -> Vec<Symbol> {
    let n = ix.n() as isize;
    let from = pos as isize - ell as isize;
    (0..m + 2 * ell)
        .map(|k| {
            let i = from + k as isize;
            if (0..=n).contains(&i) {
                ix.symbol(i as usize)
            } else {
                SENTINEL
            }
        })
        .collect()
}

pub fn query<A: ContextAccess + ?Sized>(
    ix: &A,
    pattern: &[Symbol],
    ell: usize,
    strategy: MappingStrategy,
    stats: &mut QueryStats,
) -> Result<Vec<ContextMatch>> {
    run(ix, pattern, ell, strategy, stats, None)
}

pub fn query_traced<A: ContextAccess + ?Sized>(
    ix: &A,
    pattern: &[Symbol],
    ell: usize,
    strategy: MappingStrategy,
    stats: &mut QueryStats,
) -> Result<(Vec<ContextMatch>, QueryTrace)> {
    let mut trace = QueryTrace::default();
    let matches = run(ix, pattern, ell, strategy, stats, Some(&mut trace))?;
    Ok((matches, trace))
}

fn run<A: ContextAccess + ?Sized>(
    ix: &A,
    pattern: &[Symbol],
    ell: usize,
    strategy: MappingStrategy,
    stats: &mut QueryStats,
    mut trace: Option<&mut QueryTrace>,
) -> Result<Vec<ContextMatch>> {
    if pattern.is_empty() {
        return Err(Error::EmptyPattern);
    }
    if pattern.contains(&SENTINEL) {
        return Err(Error::SentinelInPattern);
    }
    let m = pattern.len();
    let rev_pattern: Vec<Symbol> = pattern.iter().rev().copied().collect();

    let Some(range) = ix.reverse_range(&rev_pattern)? else {
        return Ok(Vec::new());
    };
    if let Some(tr) = trace.as_deref_mut() {
        tr.rev_range = Some(range);
    }

    let left_depth = m.saturating_add(ell);
    let full_depth = left_depth.saturating_add(ell);
    let parts = ix.rev_lcp().partition(range, left_depth, stats)?;

    let mut out = Vec::new();
    for part in parts {
        if context_start(ix, part, m, ell, stats).is_none() {
            let mch = emit_boundary_context(ix, part, m, ell, stats)?;
            if let Some(tr) = trace.as_deref_mut() {
                tr.parts.push(PartTrace {
                    part,
                    boundary: true,
                    mapped: mch.range,
                });
            }
            out.push(mch);
            continue;
        }

        let mapped = match strategy {
            MappingStrategy::PsvNsv => map_via_psv_nsv(ix, part, m, ell, stats)?,
            MappingStrategy::CMin => map_via_cmin(ix, part, m, ell, stats)?,
        };
        debug_assert_eq!(mapped.len(), part.len());
        if let Some(tr) = trace.as_deref_mut() {
            tr.parts.push(PartTrace {
                part,
                boundary: false,
                mapped,
            });
        }

        for sub in ix.fwd_lcp().partition(mapped, full_depth, stats)? {
            stats.sa_accesses += 1;
            let rep_position = ix.sa(sub.lo) + ell;
            out.push(ContextMatch {
                context: extract_context(ix, rep_position, m, ell),
                range: sub,
                count: sub.len(),
                rep_position,
                p_offset: ell,
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::Text;
    use crate::index::CpmIndex;

    fn figure() -> CpmIndex {
        CpmIndex::build(Text::from_bytes(b"alabaralalabarda").unwrap()).unwrap()
    }

    fn enc(ix: &CpmIndex, s: &[u8]) -> Vec<Symbol> {
        ix.text().encode_pattern(s).unwrap()
    }

    fn spell(ix: &CpmIndex, s: &[Symbol]) -> String {
        s.iter()
            .map(|&c| ix.text().alphabet().decode(c).map_or('$', char::from))
            .collect()
    }

    #[test]
    fn figure_query_both_strategies() {
        let ix = figure();
        let p = enc(&ix, b"a");
        for strategy in [MappingStrategy::PsvNsv, MappingStrategy::CMin] {
            let mut stats = QueryStats::default();
            let (got, trace) = ix.query_traced(&p, 1, strategy, &mut stats).unwrap();
            let ranges: Vec<(usize, usize)> =
                got.iter().map(|c| (c.range.lo, c.range.hi)).collect();
            assert_eq!(
                ranges,
                vec![(5, 5), (10, 11), (12, 12), (13, 14), (15, 15), (16, 16)]
            );
            let contexts: Vec<String> = got.iter().map(|c| spell(&ix, &c.context)).collect();
            assert_eq!(contexts, ["$al", "bar", "da$", "lab", "lal", "ral"]);
            assert_eq!(trace.rev_range, Some(Interval::new(2, 9)));
            assert_eq!(trace.part_starts(), vec![2, 3, 5, 6, 9]);
            let mapped: Vec<(usize, usize)> =
                trace.mapped_ranges().iter().map(|r| (r.lo, r.hi)).collect();
            assert_eq!(mapped, vec![(5, 5), (10, 11), (12, 12), (13, 15), (16, 16)]);
        }
    }

    #[test]
    fn zero_context_collapses() {
        let ix = figure();
        let got = ix
            .query(
                &enc(&ix, b"a"),
                0,
                MappingStrategy::PsvNsv,
                &mut QueryStats::default(),
            )
            .unwrap();
        assert_eq!(got.len(), 1);
        assert_eq!(got[0].count, 8);
        assert_eq!(got[0].range, Interval::new(2, 9));
    }

    #[test]
    fn absent_pattern() {
        let ix = figure();
        let got = ix
            .query_bytes(
                b"zz",
                3,
                MappingStrategy::PsvNsv,
                &mut QueryStats::default(),
            )
            .unwrap();
        assert!(got.is_empty());
        let got = ix
            .query(
                &enc(&ix, b"bb"),
                3,
                MappingStrategy::CMin,
                &mut QueryStats::default(),
            )
            .unwrap();
        assert!(got.is_empty());
    }

    #[test]
    fn bad_patterns() {
        let ix = figure();
        let s = &mut QueryStats::default();
        assert!(matches!(
            ix.query(&[], 1, MappingStrategy::PsvNsv, s),
            Err(Error::EmptyPattern)
        ));
        assert!(matches!(
            ix.query(&[1, 0, 1], 1, MappingStrategy::PsvNsv, s),
            Err(Error::SentinelInPattern)
        ));
    }

    #[test]
    fn abab() {
        let ix = CpmIndex::build(Text::from_bytes(b"abab").unwrap()).unwrap();
        let got = ix
            .query(
                &enc(&ix, b"ab"),
                1,
                MappingStrategy::PsvNsv,
                &mut QueryStats::default(),
            )
            .unwrap();
        let summary: Vec<(String, usize)> = got
            .iter()
            .map(|c| (spell(&ix, &c.context), c.count))
            .collect();
        assert_eq!(
            summary,
            vec![("$aba".to_string(), 1), ("bab$".to_string(), 1)]
        );
    }

    #[test]
    fn mapping_examples() {
        let ix = figure();
        let s = &mut QueryStats::default();
        assert_eq!(
            map_via_psv_nsv(&ix, Interval::new(6, 8), 1, 1, s).unwrap(),
            Interval::new(13, 15)
        );
        assert_eq!(
            map_via_psv_nsv(&ix, Interval::new(3, 4), 1, 1, s).unwrap(),
            Interval::new(10, 11)
        );
        assert_eq!(
            map_via_cmin(&ix, Interval::new(3, 4), 1, 1, s).unwrap(),
            Interval::new(10, 11)
        );
        assert_eq!(
            map_via_cmin(&ix, Interval::new(9, 9), 1, 1, s).unwrap(),
            Interval::new(16, 16)
        );
        assert!(matches!(
            map_via_psv_nsv(&ix, Interval::new(2, 2), 1, 1, s),
            Err(Error::BoundaryPart(_))
        ));
        assert!(matches!(
            map_via_cmin(&ix, Interval::new(2, 2), 1, 1, s),
            Err(Error::BoundaryPart(_))
        ));
    }

    #[test]
    fn psv_nsv_singleton_without_extension() {
        // "da" occurs once; its part maps to a single rank.
        let ix = figure();
        let s = &mut QueryStats::default();
        let part = ix
            .reverse()
            .find_pattern_range(&enc(&ix, b"ad"))
            .unwrap()
            .unwrap();
        let mapped = map_via_psv_nsv(&ix, part, 1, 1, s).unwrap();
        assert!(mapped.is_singleton());
        assert_eq!(mapped, Interval::new(12, 12));
    }

    #[test]
    fn boundary_emission() {
        let ix = figure();
        let s = &mut QueryStats::default();
        let mch = emit_boundary_context(&ix, Interval::new(2, 2), 1, 1, s).unwrap();
        assert_eq!(mch.rep_position, 1);
        assert_eq!(mch.range, Interval::new(5, 5));
        assert_eq!(spell(&ix, &mch.context), "$al");
        assert_eq!(ix.enumerate_occurrences(&mch), vec![1]);

        // P = "al", ell = 2: the reverse suffix "la$" is the boundary part.
        let part = ix
            .reverse()
            .find_pattern_range(&enc(&ix, b"la"))
            .unwrap()
            .unwrap();
        let la_end = part
            .iter()
            .find(|&i| ix.reverse().sa()[i] == 15)
            .map(|i| Interval::new(i, i))
            .unwrap();
        let mch = emit_boundary_context(&ix, la_end, 2, 2, s).unwrap();
        assert_eq!(mch.rep_position, 1);
        assert_eq!(mch.range, Interval::new(5, 5));
        assert_eq!(spell(&ix, &mch.context), "$$alab");
        assert_eq!(mch.count, 1);

        assert!(matches!(
            emit_boundary_context(&ix, Interval::new(2, 3), 1, 1, s),
            Err(Error::NonSingletonBoundary(_))
        ));
    }

    #[test]
    fn enumerate_and_extract() {
        let ix = figure();
        let got = ix
            .query(
                &enc(&ix, b"a"),
                1,
                MappingStrategy::PsvNsv,
                &mut QueryStats::default(),
            )
            .unwrap();
        let lab = got
            .iter()
            .find(|c| spell(&ix, &c.context) == "lab")
            .unwrap();
        assert_eq!(lab.p_offset, 1);
        let mut pos = ix.enumerate_occurrences(lab);
        pos.sort();
        assert_eq!(pos, vec![3, 11]);
        for c in got.iter().filter(|c| c.count == 1) {
            assert_eq!(ix.enumerate_occurrences(c), vec![c.rep_position]);
        }

        assert_eq!(spell(&ix, &ix.extract_context(16, 1, 1)), "da$");
        assert_eq!(spell(&ix, &ix.extract_context(1, 1, 2)), "$$ala");
        assert_eq!(spell(&ix, &ix.extract_context(4, 3, 0)), "bar");
    }

    #[test]
    fn stats_stay_within_envelope_on_figure() {
        let ix = figure();
        let mut stats = QueryStats::default();
        let got = ix
            .query(&enc(&ix, b"a"), 1, MappingStrategy::PsvNsv, &mut stats)
            .unwrap();
        assert!(stats.range_queries() <= 6 * got.len() as u64 + 8);
        assert!(stats.sa_accesses > 0);
    }
}
