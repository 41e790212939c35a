//! Binary index files.
//!
//! Layout, all integers little-endian with no padding anywhere:
//!
//! ```text
//! magic   "CPMX"                       4 bytes
//! version u32                          4 bytes
//! n       u64
//! sigma   u64
//! table   8 x (offset u64, count u64)  byte offset from file start,
//!                                      count of u64 entries
//! alphabet  sigma entries              byte with code k + 1
//! text      n + 1 entries              T[0..=n]
//! fwd.sa    n entries                  SA[1..=n]
//! fwd.isa   n entries                  SA^-1[1..=n]
//! fwd.lcp   n entries
//! rev.sa    n entries
//! rev.lcp   n entries
//! c         n entries                  2^64 - 1 where undefined
//! ```
//!
//! Range-query tables are rebuilt on load.

use std::io::{Read, Write};

use crate::corpus::{Alphabet, Text};
use crate::error::{Error, Result};
use crate::index::{build_c_array, CpmIndex, UNDEFINED};
use crate::suffix::SuffixEnsemble;

pub const MAGIC: [u8; 4] = *b"CPMX";
pub const VERSION: u32 = 1;

const SECTIONS: [&str; 8] = [
    "alphabet", "text", "fwd.sa", "fwd.isa", "fwd.lcp", "rev.sa", "rev.lcp", "c",
];
const HEADER_LEN: usize = 4 + 4 + 8 + 8 + SECTIONS.len() * 16;

fn encode_c(v: usize) -> u64 {
    if v == UNDEFINED {
        u64::MAX
    } else {
        v as u64
    }
}

/// Writes `ix` to `sink` and returns the number of bytes written.
pub fn save_index<W: Write>(ix: &CpmIndex, mut sink: W) -> Result<u64> {
    let n = ix.n();
    let text = ix.text();
    let sections: [Vec<u64>; 8] = [
        text.alphabet().bytes().iter().map(|&b| b as u64).collect(),
        text.symbols().iter().map(|&s| s as u64).collect(),
        ix.forward().sa()[1..].iter().map(|&v| v as u64).collect(),
        ix.forward().isa()[1..].iter().map(|&v| v as u64).collect(),
        ix.forward().lcp()[1..].iter().map(|&v| v as u64).collect(),
        ix.reverse().sa()[1..].iter().map(|&v| v as u64).collect(),
        ix.reverse().lcp()[1..].iter().map(|&v| v as u64).collect(),
        ix.c_array()[1..].iter().map(|&v| encode_c(v)).collect(),
    ];

    let total = HEADER_LEN + 8 * sections.iter().map(Vec::len).sum::<usize>();
    let mut buf = Vec::with_capacity(total);
    buf.extend_from_slice(&MAGIC);
    buf.extend_from_slice(&VERSION.to_le_bytes());
    buf.extend_from_slice(&(n as u64).to_le_bytes());
    buf.extend_from_slice(&(text.sigma() as u64).to_le_bytes());
    let mut offset = HEADER_LEN as u64;
    for s in &sections {
        buf.extend_from_slice(&offset.to_le_bytes());
        buf.extend_from_slice(&(s.len() as u64).to_le_bytes());
        offset += 8 * s.len() as u64;
    }
    for s in &sections {
        for v in s {
            buf.extend_from_slice(&v.to_le_bytes());
        }
    }
    debug_assert_eq!(buf.len(), total);
    sink.write_all(&buf)?;
    sink.flush()?;
    Ok(buf.len() as u64)
}

/// Reads an index, checking the structural invariants of every section.
pub fn load_index<R: Read>(source: R) -> Result<CpmIndex> {
    load(source, false)
}

/// Like [`load_index`], and additionally rebuilds the suffix and LCP arrays
/// from the stored text to confirm every stored value.
pub fn load_index_verified<R: Read>(source: R) -> Result<CpmIndex> {
    load(source, true)
}

fn corrupt(section: &'static str, reason: impl Into<String>) -> Error {
    Error::CorruptSection {
        section,
        reason: reason.into(),
    }
}

struct Cursor<'a> {
    bytes: &'a [u8],
    at: usize,
}

impl Cursor<'_> {
    fn u64(&mut self, section: &'static str) -> Result<u64> {
        let end = self.at + 8;
        let chunk = self
            .bytes
            .get(self.at..end)
            .ok_or_else(|| corrupt(section, "truncated"))?;
        self.at = end;
        Ok(u64::from_le_bytes(chunk.try_into().unwrap()))
    }
}

fn to_usize(v: u64, section: &'static str) -> Result<usize> {
    usize::try_from(v).map_err(|_| corrupt(section, format!("value {} out of range", v)))
}

fn load<R: Read>(mut source: R, verify: bool) -> Result<CpmIndex> {
    let mut bytes = Vec::new();
    source.read_to_end(&mut bytes)?;
    if bytes.len() < 8 {
        return Err(corrupt("header", "truncated"));
    }
    if bytes[..4] != MAGIC {
        return Err(Error::BadMagic);
    }
    let version = u32::from_le_bytes(bytes[4..8].try_into().unwrap());
    if version != VERSION {
        return Err(Error::UnsupportedVersion(version));
    }
    let mut cur = Cursor {
        bytes: &bytes,
        at: 8,
    };
    let n = to_usize(cur.u64("header")?, "header")?;
    let sigma = to_usize(cur.u64("header")?, "header")?;
    if n < 2 || sigma == 0 || sigma > 255 {
        return Err(corrupt(
            "header",
            format!("implausible n = {}, sigma = {}", n, sigma),
        ));
    }

    let mut expected_offset = HEADER_LEN as u64;
    let mut counts = Vec::with_capacity(SECTIONS.len());
    for (k, &name) in SECTIONS.iter().enumerate() {
        let offset = cur.u64("header")?;
        let count = cur.u64("header")?;
        let want = match k {
            0 => sigma,
            1 => n + 1,
            _ => n,
        } as u64;
        if offset != expected_offset {
            return Err(corrupt(
                name,
                format!("offset {} != {}", offset, expected_offset),
            ));
        }
        if count != want {
            return Err(corrupt(name, format!("length {} != {}", count, want)));
        }
        counts.push(count as usize);
        expected_offset += 8 * count;
    }
    if bytes.len() as u64 != expected_offset {
        let section = if (bytes.len() as u64) < expected_offset {
            // Name the first section that is cut short.
            let mut end = HEADER_LEN as u64;
            let mut hit = SECTIONS[SECTIONS.len() - 1];
            for (&name, &count) in SECTIONS.iter().zip(&counts) {
                end += 8 * count as u64;
                if (bytes.len() as u64) < end {
                    hit = name;
                    break;
                }
            }
            hit
        } else {
            "c"
        };
        return Err(corrupt(
            section,
            format!(
                "file has {} bytes, expected {}",
                bytes.len(),
                expected_offset
            ),
        ));
    }

    let mut read_section =
        |k: usize| -> Result<Vec<u64>> { (0..counts[k]).map(|_| cur.u64(SECTIONS[k])).collect() };
    let alphabet_raw = read_section(0)?;
    let text_raw = read_section(1)?;
    let fwd_sa = read_section(2)?;
    let fwd_isa = read_section(3)?;
    let fwd_lcp = read_section(4)?;
    let rev_sa = read_section(5)?;
    let rev_lcp = read_section(6)?;
    let c_raw = read_section(7)?;

    let alphabet_bytes = alphabet_raw
        .iter()
        .map(|&v| u8::try_from(v).map_err(|_| corrupt("alphabet", format!("{} is not a byte", v))))
        .collect::<Result<Vec<u8>>>()?;
    let alphabet = Alphabet::from_sorted(alphabet_bytes)
        .ok_or_else(|| corrupt("alphabet", "bytes must be strictly increasing and nonzero"))?;
    let symbols = text_raw
        .iter()
        .map(|&v| u8::try_from(v).map_err(|_| corrupt("text", format!("{} is not a symbol", v))))
        .collect::<Result<Vec<u8>>>()?;
    let text = Text::from_parts(symbols, alphabet)
        .ok_or_else(|| corrupt("text", "sentinel or alphabet invariant violated"))?;

    let one_based = |raw: &[u64], section: &'static str| -> Result<Vec<usize>> {
        let mut out = Vec::with_capacity(raw.len() + 1);
        out.push(0);
        for &v in raw {
            let v = to_usize(v, section)?;
            if v > n {
                return Err(corrupt(section, format!("value {} exceeds n = {}", v, n)));
            }
            out.push(v);
        }
        Ok(out)
    };

    let fwd = SuffixEnsemble::from_parts(
        text.clone(),
        one_based(&fwd_sa, "fwd.sa")?,
        one_based(&fwd_lcp, "fwd.lcp")?,
        verify,
        ("fwd.sa", "fwd.lcp"),
    )?;
    if fwd.isa()[1..] != one_based(&fwd_isa, "fwd.isa")?[1..] {
        return Err(corrupt("fwd.isa", "not the inverse of fwd.sa"));
    }
    let rev = SuffixEnsemble::from_parts(
        text.reversed(),
        one_based(&rev_sa, "rev.sa")?,
        one_based(&rev_lcp, "rev.lcp")?,
        verify,
        ("rev.sa", "rev.lcp"),
    )?;

    let c = build_c_array(&fwd, &rev);
    if c[1..]
        .iter()
        .zip(&c_raw)
        .any(|(&mine, &stored)| encode_c(mine) != stored)
    {
        return Err(corrupt("c", "does not match SA^-1[n - SA'[i]]"));
    }
    CpmIndex::assemble(fwd, rev, c)
}
