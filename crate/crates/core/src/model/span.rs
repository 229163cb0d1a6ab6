use serde::{Deserialize, Serialize};

/// A half-open character range `[start, start + length)` over a host text.
///
/// Offsets count Unicode scalar values, not bytes, so spans survive
/// re-encoding and match the dataset files.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Span {
    pub start: usize,
    pub length: usize,
}

impl Span {
    pub fn new(start: usize, length: usize) -> Self {
        Span { start, length }
    }

    pub fn end(&self) -> usize {
        self.start + self.length
    }

    pub fn overlaps(&self, other: &Span) -> bool {
        self.start < other.end() && other.start < self.end()
    }

    pub fn contains(&self, other: &Span) -> bool {
        self.start <= other.start && other.end() <= self.end()
    }

    /// Smallest span covering both.
    pub fn union(&self, other: &Span) -> Span {
        let start = self.start.min(other.start);
        let end = self.end().max(other.end());
        Span::new(start, end - start)
    }

    /// Checks `length > 0` and that the span fits in a text of `text_chars` characters.
    pub fn fits(&self, text_chars: usize) -> bool {
        self.length > 0 && self.end() <= text_chars
    }

    /// The covered substring, or `None` when the span falls outside `text`.
    pub fn slice<'a>(&self, text: &'a str) -> Option<&'a str> {
        let idx = CharIndex::new(text);
        let (b0, b1) = (idx.byte_of(self.start)?, idx.byte_of(self.end())?);
        Some(&text[b0..b1])
    }
}

/// Character ↔ byte offset table for one text.
#[derive(Debug, Clone)]
pub struct CharIndex {
    /// Byte offset of each char, plus a trailing entry for `text.len()`.
    bytes: Vec<usize>,
}

impl CharIndex {
    pub fn new(text: &str) -> Self {
        let mut bytes: Vec<usize> = text.char_indices().map(|(b, _)| b).collect();
        bytes.push(text.len());
        CharIndex { bytes }
    }

    pub fn char_len(&self) -> usize {
        self.bytes.len() - 1
    }

    pub fn byte_of(&self, char_offset: usize) -> Option<usize> {
        self.bytes.get(char_offset).copied()
    }

    /// Char offset of a byte offset that sits on a char boundary.
    pub fn char_of(&self, byte_offset: usize) -> usize {
        match self.bytes.binary_search(&byte_offset) {
            Ok(i) => i,
            Err(i) => i.saturating_sub(1),
        }
    }

    pub fn span_of_bytes(&self, start: usize, end: usize) -> Span {
        let s = self.char_of(start);
        Span::new(s, self.char_of(end) - s)
    }

    pub fn bytes_of_span(&self, span: Span) -> (usize, usize) {
        (self.bytes[span.start], self.bytes[span.end()])
    }
}
