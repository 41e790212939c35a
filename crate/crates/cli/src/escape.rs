//! Byte-string escapes for patterns and printed contexts.
//!
//! Printable ASCII passes through except `\` and `$`; `$` is reserved for
//! the sentinel in printed contexts. Everything else is `\xNN`.

use crate::CliError;

pub fn escape_bytes(bytes: &[u8]) -> String {
    let mut s = String::with_capacity(bytes.len());
    for &b in bytes {
        match b {
            b'\\' => s.push_str("\\\\"),
            b'$' => s.push_str("\\x24"),
            0x20..=0x7e => s.push(b as char),
            _ => s.push_str(&format!("\\x{:02x}", b)),
        }
    }
    s
}

/// Parses a command-line pattern: `\xNN` is a hex byte, `\\` a backslash,
/// anything else is taken literally.
pub fn parse_pattern(src: &str) -> Result<Vec<u8>, CliError> {
    let bytes = src.as_bytes();
    let mut out = Vec::with_capacity(bytes.len());
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i] != b'\\' {
            out.push(bytes[i]);
            i += 1;
            continue;
        }
        match bytes.get(i + 1) {
            Some(b'\\') => {
                out.push(b'\\');
                i += 2;
            }
            Some(b'x') => {
                let hex = bytes
                    .get(i + 2..i + 4)
                    .and_then(|h| std::str::from_utf8(h).ok())
                    .and_then(|h| u8::from_str_radix(h, 16).ok())
                    .ok_or_else(|| {
                        CliError::Usage(format!("bad \\x escape in pattern {:?}", src))
                    })?;
                out.push(hex);
                i += 4;
            }
            _ => return Err(CliError::Usage(format!("bad escape in pattern {:?}", src))),
        }
    }
    Ok(out)
}
