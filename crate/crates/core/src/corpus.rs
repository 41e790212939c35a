//! Texts with sentinel conventions.
//!
//! A [`Text`] over input bytes `b_1 .. b_{n-1}` is stored as the symbol
//! string `T[0..=n]` where `T[0] = T[n] = $`. The sentinel has code 0 and
//! input bytes are remapped order-preservingly onto `1..=sigma`, so `$`
//! sorts before every real symbol whatever the input encoding.
//!
//! Byte `0x00` is reserved: it may not appear in the input. This keeps
//! every symbol code (at most 255 distinct bytes plus the sentinel) inside
//! a `u8`.

use crate::error::{Error, Result};

/// A remapped symbol code. `0` is the sentinel.
pub type Symbol = u8;

/// The sentinel code `$`.
pub const SENTINEL: Symbol = 0;

/// The input byte that cannot appear in a text.
pub const RESERVED_BYTE: u8 = 0x00;

/// Order-preserving bijection between the distinct input bytes and `1..=sigma`.
#[derive(Clone, PartialEq, Eq)]
pub struct Alphabet {
    bytes: Vec<u8>,
    codes: [Symbol; 256],
}

impl Alphabet {
    /// Builds the alphabet of the bytes present in `raw`.
    fn of(raw: &[u8]) -> Alphabet {
        let mut seen = [false; 256];
        for &b in raw {
            seen[b as usize] = true;
        }
        let bytes: Vec<u8> = (0..=255u8).filter(|&b| seen[b as usize]).collect();
        Alphabet::from_sorted(bytes).expect("distinct bytes collected in order")
    }

    /// Rebuilds an alphabet from its strictly increasing byte list, where
    /// `bytes[k]` is the byte with code `k + 1`.
    pub fn from_sorted(bytes: Vec<u8>) -> Option<Alphabet> {
        if bytes.windows(2).any(|w| w[0] >= w[1]) || bytes.contains(&RESERVED_BYTE) {
            return None;
        }
        let mut codes = [SENTINEL; 256];
        for (k, &b) in bytes.iter().enumerate() {
            codes[b as usize] = (k + 1) as Symbol;
        }
        Some(Alphabet { bytes, codes })
    }

    pub fn len(&self) -> usize {
        self.bytes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bytes.is_empty()
    }

    /// The bytes in code order.
    pub fn bytes(&self) -> &[u8] {
        &self.bytes
    }

    /// Code of `byte`, or `None` if it does not occur in the text.
    pub fn encode(&self, byte: u8) -> Option<Symbol> {
        match self.codes[byte as usize] {
            SENTINEL => None,
            c => Some(c),
        }
    }

    /// Byte of a non-sentinel code.
    pub fn decode(&self, code: Symbol) -> Option<u8> {
        (code as usize)
            .checked_sub(1)
            .and_then(|k| self.bytes.get(k).copied())
    }
}

impl std::fmt::Debug for Alphabet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Alphabet")
            .field("bytes", &String::from_utf8_lossy(&self.bytes))
            .finish()
    }
}

/// The indexed string `T[0..=n]` with `T[0] = T[n] = $`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Text {
    symbols: Vec<Symbol>,
    alphabet: Alphabet,
}

impl Text {
    /// Loads raw input bytes, remapping them around the sentinel.
    pub fn from_bytes(raw: &[u8]) -> Result<Text> {
        if raw.is_empty() {
            return Err(Error::EmptyInput);
        }
        if let Some(at) = raw.iter().position(|&b| b == RESERVED_BYTE) {
            return Err(Error::SentinelByteInInput(at));
        }
        let alphabet = Alphabet::of(raw);
        let mut symbols = Vec::with_capacity(raw.len() + 2);
        symbols.push(SENTINEL);
        symbols.extend(raw.iter().map(|&b| alphabet.codes[b as usize]));
        symbols.push(SENTINEL);
        Ok(Text { symbols, alphabet })
    }

    /// Reassembles a text from stored symbols, checking the sentinel
    /// invariants.
    pub fn from_parts(symbols: Vec<Symbol>, alphabet: Alphabet) -> Option<Text> {
        let n = symbols.len().checked_sub(1)?;
        if n < 2 || symbols[0] != SENTINEL || symbols[n] != SENTINEL {
            return None;
        }
        let sigma = alphabet.len();
        if symbols[1..n]
            .iter()
            .any(|&s| s == SENTINEL || s as usize > sigma)
        {
            return None;
        }
        Some(Text { symbols, alphabet })
    }

    /// The length index `n`; the symbol array has `n + 1` entries.
    pub fn n(&self) -> usize {
        self.symbols.len() - 1
    }

    /// Number of distinct non-sentinel symbols.
    pub fn sigma(&self) -> usize {
        self.alphabet.len()
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    /// `T[i]`, for `0 <= i <= n`.
    #[inline]
    pub fn symbol(&self, i: usize) -> Symbol {
        self.symbols[i]
    }

    /// `T[i]` with virtual sentinel padding on both sides: any position
    /// outside `0..=n` reads as `$`.
    #[inline]
    pub fn padded_symbol(&self, i: isize) -> Symbol {
        if i < 0 {
            return SENTINEL;
        }
        self.symbols.get(i as usize).copied().unwrap_or(SENTINEL)
    }

    /// The text read backwards: `u[j] = t[n - j]`.
    pub fn reversed(&self) -> Text {
        let mut symbols = self.symbols.clone();
        symbols.reverse();
        Text {
            symbols,
            alphabet: self.alphabet.clone(),
        }
    }

    /// The original input bytes, `T[1..n-1]` decoded.
    pub fn to_bytes(&self) -> Vec<u8> {
        let n = self.n();
        self.symbols[1..n]
            .iter()
            .map(|&s| self.alphabet.bytes[s as usize - 1])
            .collect()
    }

    /// Maps pattern bytes to symbol codes. Returns `None` when some byte
    /// does not occur in the text, in which case the pattern cannot occur.
    pub fn encode_pattern(&self, pattern: &[u8]) -> Option<Vec<Symbol>> {
        pattern.iter().map(|&b| self.alphabet.encode(b)).collect()
    }

    /// Renders symbols as bytes, with the sentinel shown as `None`.
    pub fn decode_symbols(&self, symbols: &[Symbol]) -> Vec<Option<u8>> {
        symbols.iter().map(|&s| self.alphabet.decode(s)).collect()
    }
}
