//! Line-oriented text format plumbing shared by the file formats.

use num_bigint::BigUint;
use num_traits::Num;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("format error at line {line} (byte offset {offset}): {msg}")]
pub struct FormatError {
    pub line: usize,
    pub offset: usize,
    pub msg: String,
}

impl FormatError {
    pub fn new(line: usize, offset: usize, msg: impl Into<String>) -> Self {
        FormatError { line, offset, msg: msg.into() }
    }
}

/// Lowercase big-endian hex, no leading zeros ("0" for zero).
pub fn to_hex(n: &BigUint) -> String {
    n.to_str_radix(16)
}

pub fn from_hex(s: &str, line: usize, offset: usize) -> Result<BigUint, FormatError> {
    if s.is_empty() {
        return Err(FormatError::new(line, offset, "empty hex value"));
    }
    if s.chars().any(|c| c.is_ascii_uppercase()) {
        return Err(FormatError::new(line, offset, "hex must be lowercase"));
    }
    BigUint::from_str_radix(s, 16)
        .map_err(|_| FormatError::new(line, offset, format!("invalid hex digits in {s:?}")))
}

/// Walks input line by line, tracking line numbers and byte offsets, and
/// skipping comment lines that start with '#'.
pub struct LineReader<'a> {
    rest: &'a str,
    /// Number of the most recently returned line, 1-based.
    line: usize,
    /// Byte offset of the start of the most recently returned line.
    offset: usize,
    /// Total bytes consumed from the original input.
    consumed: usize,
}

impl<'a> LineReader<'a> {
    pub fn new(text: &'a str) -> Self {
        LineReader { rest: text, line: 0, offset: 0, consumed: 0 }
    }

    pub fn line(&self) -> usize {
        self.line
    }

    pub fn offset(&self) -> usize {
        self.offset
    }

    /// Error located at the most recently returned line.
    pub fn error(&self, msg: impl Into<String>) -> FormatError {
        FormatError::new(self.line, self.offset, msg)
    }

    /// Next non-comment, non-blank line, trimmed.
    pub fn next_line(&mut self) -> Option<&'a str> {
        loop {
            let trimmed = self.advance()?;
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            return Some(trimmed);
        }
    }

    /// Next non-blank line without the comment convention, for grid
    /// sections where '#' is data.
    pub fn next_line_verbatim(&mut self) -> Option<&'a str> {
        loop {
            let trimmed = self.advance()?;
            if trimmed.is_empty() {
                continue;
            }
            return Some(trimmed);
        }
    }

    fn advance(&mut self) -> Option<&'a str> {
        if self.rest.is_empty() {
            return None;
        }
        let (raw, advance) = match self.rest.find('\n') {
            Some(pos) => (&self.rest[..pos], pos + 1),
            None => (self.rest, self.rest.len()),
        };
        self.line += 1;
        self.offset = self.consumed;
        self.consumed += advance;
        self.rest = &self.rest[advance..];
        Some(raw.trim())
    }

    /// Next line, or a truncation error naming the missing section.
    pub fn expect_line(&mut self, what: &str) -> Result<&'a str, FormatError> {
        self.next_line().ok_or_else(|| {
            FormatError::new(self.line + 1, self.consumed, format!("truncated input: missing {what}"))
        })
    }

    /// Comment-insensitive companion of [`Self::expect_line`].
    pub fn expect_line_verbatim(&mut self, what: &str) -> Result<&'a str, FormatError> {
        self.next_line_verbatim().ok_or_else(|| {
            FormatError::new(self.line + 1, self.consumed, format!("truncated input: missing {what}"))
        })
    }
}

pub fn parse_usize(tok: &str, reader: &LineReader, what: &str) -> Result<usize, FormatError> {
    tok.parse::<usize>()
        .map_err(|_| reader.error(format!("invalid {what}: {tok:?}")))
}

pub fn parse_u64(tok: &str, reader: &LineReader, what: &str) -> Result<u64, FormatError> {
    tok.parse::<u64>()
        .map_err(|_| reader.error(format!("invalid {what}: {tok:?}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hex_round_trip() {
        let n = BigUint::from(0xdeadbeefu32);
        assert_eq!(to_hex(&n), "deadbeef");
        assert_eq!(from_hex("deadbeef", 1, 0).unwrap(), n);
        assert_eq!(to_hex(&BigUint::from(0u32)), "0");
    }

    #[test]
    fn hex_rejects_bad_input() {
        assert!(from_hex("", 1, 0).is_err());
        assert!(from_hex("DEAD", 1, 0).is_err());
        assert!(from_hex("xyz", 1, 0).is_err());
    }

    #[test]
    fn reader_skips_comments_and_tracks_position() {
        let text = "# header\nfirst\n\nsecond";
        let mut r = LineReader::new(text);
        assert_eq!(r.next_line(), Some("first"));
        assert_eq!(r.line(), 2);
        assert_eq!(r.offset(), 9);
        assert_eq!(r.next_line(), Some("second"));
        assert_eq!(r.line(), 4);
        assert_eq!(r.next_line(), None);
    }

    #[test]
    fn expect_line_names_missing_section() {
        let mut r = LineReader::new("only\n");
        r.next_line();
        let err = r.expect_line("the pzt line").unwrap_err();
        assert!(err.msg.contains("the pzt line"));
    }
}
