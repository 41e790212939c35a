//! Suffix array, inverse suffix array and LCP array of a [`Text`].
//!
//! All arrays use 1-based ranks: entry 0 is an unused placeholder, so
//! `sa[i]` for `1 <= i <= n` lists the suffixes `T[i..=n]` with `i >= 1`
//! in lexicographic order. The suffix starting at `T[0]` is never ranked.
//! `isa` is indexed by text position and `isa[0]` is 0.

use std::cmp::Ordering;

use crate::corpus::{Symbol, Text, SENTINEL};
use crate::error::{Error, Result};
use crate::rmq::Interval;

const EMPTY: usize = usize::MAX;

/// Suffix array of `T[1..=n]`, 1-based.
pub fn build_suffix_array(t: &Text) -> Vec<usize> {
    let n = t.n();
    let s: Vec<usize> = t.symbols()[1..].iter().map(|&c| c as usize).collect();
    let mut sa = Vec::with_capacity(n + 1);
    sa.push(0);
    sa.extend(sais(&s, t.sigma() + 1).into_iter().map(|p| p + 1));
    sa
}

/// Inverse of a 1-based permutation: `isa[sa[i]] = i`.
pub fn build_inverse(sa: &[usize]) -> Vec<usize> {
    let mut isa = vec![0; sa.len()];
    for (i, &p) in sa.iter().enumerate().skip(1) {
        isa[p] = i;
    }
    isa
}

/// LCP array by the inverse-permutation scan (Kasai et al.), linear time.
pub fn build_lcp(t: &Text, sa: &[usize], isa: &[usize]) -> Vec<usize> {
    let n = t.n();
    let s = t.symbols();
    let mut lcp = vec![0; n + 1];
    let mut h = 0usize;
    for i in 1..=n {
        let r = isa[i];
        if r > 1 {
            let j = sa[r - 1];
            // The lone sentinel at T[n] stops the scan before running off the end.
            while s[i + h] == s[j + h] {
                h += 1;
            }
            lcp[r] = h;
            h = h.saturating_sub(1);
        } else {
            h = 0;
        }
    }
    lcp
}

/// Induced sorting. `s` must end with a unique 0 and use symbols `< k`.
fn sais(s: &[usize], k: usize) -> Vec<usize> {
    let n = s.len();
    debug_assert_eq!(s[n - 1], 0);
    if n == 1 {
        return vec![0];
    }

    // true = S-type
    let mut stype = vec![false; n];
    stype[n - 1] = true;
    for i in (0..n - 1).rev() {
        stype[i] = s[i] < s[i + 1] || (s[i] == s[i + 1] && stype[i + 1]);
    }
    let is_lms = |i: usize| i > 0 && stype[i] && !stype[i - 1];

    let mut counts = vec![0usize; k];
    for &c in s {
        counts[c] += 1;
    }
    let heads = |counts: &[usize]| {
        let mut acc = 0;
        counts
            .iter()
            .map(|&c| {
                let h = acc;
                acc += c;
                h
            })
            .collect::<Vec<_>>()
    };
    let tails = |counts: &[usize]| {
        let mut acc = 0;
        counts
            .iter()
            .map(|&c| {
                acc += c;
                acc
            })
            .collect::<Vec<_>>()
    };

    let induce = |sa: &mut [usize], lms_order: &[usize]| {
        sa.fill(EMPTY);
        let mut tail = tails(&counts);
        for &p in lms_order.iter().rev() {
            tail[s[p]] -= 1;
            sa[tail[s[p]]] = p;
        }
        let mut head = heads(&counts);
        for i in 0..n {
            let j = sa[i];
            if j != EMPTY && j > 0 && !stype[j - 1] {
                let c = s[j - 1];
                sa[head[c]] = j - 1;
                head[c] += 1;
            }
        }
        let mut tail = tails(&counts);
        for i in (0..n).rev() {
            let j = sa[i];
            if j != EMPTY && j > 0 && stype[j - 1] {
                let c = s[j - 1];
                tail[c] -= 1;
                sa[tail[c]] = j - 1;
            }
        }
    };

    let lms: Vec<usize> = (1..n).filter(|&i| is_lms(i)).collect();
    let mut sa = vec![EMPTY; n];
    induce(&mut sa, &lms);

    // Name the LMS substrings in their induced order.
    let lms_equal = |a: usize, b: usize| -> bool {
        if a == n - 1 || b == n - 1 {
            return a == b;
        }
        let mut i = 0;
        loop {
            if s[a + i] != s[b + i] || stype[a + i] != stype[b + i] {
                return false;
            }
            if i > 0 {
                let (ea, eb) = (is_lms(a + i), is_lms(b + i));
                if ea || eb {
                    return ea && eb;
                }
            }
            i += 1;
        }
    };
    let mut names = vec![EMPTY; n];
    let mut name = 0usize;
    let mut prev = EMPTY;
    for &p in sa.iter().filter(|&&p| is_lms(p)) {
        if prev != EMPTY && !lms_equal(prev, p) {
            name += 1;
        }
        names[p] = name;
        prev = p;
    }
    let reduced: Vec<usize> = lms.iter().map(|&p| names[p]).collect();

    let sorted_lms: Vec<usize> = if name + 1 < lms.len() {
        sais(&reduced, name + 1)
            .into_iter()
            .map(|r| lms[r])
            .collect()
    } else {
        let mut order = vec![0; lms.len()];
        for (r, &nm) in reduced.iter().enumerate() {
            order[nm] = lms[r];
        }
        order
    };
    induce(&mut sa, &sorted_lms);
    sa
}

/// Number of maximal equal-symbol runs in `BWT[i] = T[sa[i] - 1]`, `i = 1..=n`.
pub fn count_bwt_runs(t: &Text, sa: &[usize]) -> usize {
    let s = t.symbols();
    let mut runs = 0;
    let mut last: Option<Symbol> = None;
    for &p in &sa[1..] {
        let c = s[p - 1];
        if last != Some(c) {
            runs += 1;
            last = Some(c);
        }
    }
    runs
}

/// Suffix array, its inverse and the LCP array of one text.
#[derive(Clone, Debug)]
pub struct SuffixEnsemble {
    text: Text,
    sa: Vec<usize>,
    isa: Vec<usize>,
    lcp: Vec<usize>,
}

impl SuffixEnsemble {
    pub fn build(text: Text) -> SuffixEnsemble {
        let sa = build_suffix_array(&text);
        let isa = build_inverse(&sa);
        let lcp = build_lcp(&text, &sa, &isa);
        SuffixEnsemble { text, sa, isa, lcp }
    }

    /// Assembles an ensemble from stored arrays, checking that `sa` is a
    /// permutation of `1..=n` and that `lcp` has the right shape. With
    /// `verify`, also checks suffix order and every LCP value.
    pub(crate) fn from_parts(
        text: Text,
        sa: Vec<usize>,
        lcp: Vec<usize>,
        verify: bool,
        sections: (&'static str, &'static str),
    ) -> Result<SuffixEnsemble> {
        let n = text.n();
        let (sa_section, lcp_section) = sections;
        let corrupt = |section, reason: String| Error::CorruptSection { section, reason };
        if sa.len() != n + 1 {
            return Err(corrupt(sa_section, format!("expected {} entries", n)));
        }
        if lcp.len() != n + 1 {
            return Err(corrupt(lcp_section, format!("expected {} entries", n)));
        }
        let mut isa = vec![0; n + 1];
        for (i, &p) in sa.iter().enumerate().skip(1) {
            if p == 0 || p > n || isa[p] != 0 {
                return Err(corrupt(
                    sa_section,
                    format!("entry {} = {} breaks the permutation", i, p),
                ));
            }
            isa[p] = i;
        }
        if lcp[1] != 0 {
            return Err(corrupt(lcp_section, "lcp[1] must be 0".into()));
        }
        let ensemble = SuffixEnsemble { text, sa, isa, lcp };
        if verify {
            let fresh = SuffixEnsemble::build(ensemble.text.clone());
            if fresh.sa != ensemble.sa {
                return Err(corrupt(
                    sa_section,
                    "suffixes are not in lexicographic order".into(),
                ));
            }
            if fresh.lcp != ensemble.lcp {
                return Err(corrupt(
                    lcp_section,
                    "LCP values disagree with the text".into(),
                ));
            }
        }
        Ok(ensemble)
    }

    pub fn text(&self) -> &Text {
        &self.text
    }

    pub fn n(&self) -> usize {
        self.text.n()
    }

    /// The 1-based suffix array (entry 0 unused).
    pub fn sa(&self) -> &[usize] {
        &self.sa
    }

    /// The inverse suffix array, indexed by text position (entry 0 unused).
    pub fn isa(&self) -> &[usize] {
        &self.isa
    }

    /// The 1-based LCP array (entry 0 unused).
    pub fn lcp(&self) -> &[usize] {
        &self.lcp
    }

    /// Compares the first `q.len()` symbols of the suffix at `pos` with `q`.
    fn cmp_prefix(&self, pos: usize, q: &[Symbol]) -> Ordering {
        let s = &self.text.symbols()[pos..];
        let k = q.len().min(s.len());
        match s[..k].cmp(&q[..k]) {
            Ordering::Equal if k < q.len() => Ordering::Less,
            ord => ord,
        }
    }

    /// The maximal range of ranks whose suffixes start with `q`, by two
    /// binary searches over the suffix array.
    pub fn find_pattern_range(&self, q: &[Symbol]) -> Result<Option<Interval>> {
        if q.is_empty() {
            return Err(Error::EmptyPattern);
        }
        if q.contains(&SENTINEL) {
            return Err(Error::SentinelInPattern);
        }
        let ranks = &self.sa[1..];
        let lo = ranks.partition_point(|&p| self.cmp_prefix(p, q) == Ordering::Less);
        let hi = ranks.partition_point(|&p| self.cmp_prefix(p, q) != Ordering::Greater);
        Ok((lo < hi).then(|| Interval::new(lo + 1, hi)))
    }

    /// Number of equal-letter runs in the BWT of this text.
    pub fn bwt_runs(&self) -> usize {
        count_bwt_runs(&self.text, &self.sa)
    }
}
