//! Channels that live only in the raw text of ASCII files: number notation
//! and indentation whitespace.

use std::ops::Range;

use super::{check_capacity, BitSequence, ChannelCodec, ChannelId, CodecError};
use crate::stl::{parse_ascii_with_spans, StlError, StlModel};

/// ASCII STL text plus the positions of its numeric tokens and indentation runs.
#[derive(Debug, Clone, PartialEq)]
pub struct RawAsciiDocument {
    text: String,
    model: StlModel,
    numbers: Vec<Range<usize>>,
    indents: Vec<Range<usize>>,
}

fn indent_runs(text: &str) -> Vec<Range<usize>> {
    let mut out = Vec::new();
    let mut start = 0;
    for line in text.split_inclusive('\n') {
        let run = line.len() - line.trim_start_matches([' ', '\t']).len();
        let has_content = line[run..].trim().len() > 0;
        if run > 0 && has_content {
            out.push(start..start + run);
        }
        start += line.len();
    }
    out
}

impl RawAsciiDocument {
    pub fn parse(text: impl Into<String>) -> Result<Self, StlError> {
        let text = text.into();
        let (model, numbers) = parse_ascii_with_spans(&text)?;
        let indents = indent_runs(&text);
        Ok(RawAsciiDocument {
            text,
            model,
            numbers,
            indents,
        })
    }

    pub fn as_str(&self) -> &str {
        &self.text
    }

    pub fn model(&self) -> &StlModel {
        &self.model
    }

    pub fn into_model(self) -> StlModel {
        self.model
    }

    pub fn number_spans(&self) -> &[Range<usize>] {
        &self.numbers
    }

    pub fn indent_spans(&self) -> &[Range<usize>] {
        &self.indents
    }

    pub fn number_token(&self, i: usize) -> Option<&str> {
        self.numbers.get(i).map(|r| &self.text[r.clone()])
    }

    /// Rebuild the text with some spans replaced. `edits` must be sorted and disjoint.
    fn with_edits(&self, edits: &[(Range<usize>, String)]) -> Result<Self, StlError> {
        let mut out = String::with_capacity(self.text.len() + edits.len() * 4);
        let mut pos = 0;
        for (r, s) in edits {
            out.push_str(&self.text[pos..r.start]);
            out.push_str(s);
            pos = r.end;
        }
        out.push_str(&self.text[pos..]);
        RawAsciiDocument::parse(out)
    }
}

fn is_scientific(token: &str) -> bool {
    token.contains(['e', 'E'])
}

/// Scientific spelling with shortest round-trip mantissa in `[1, 10)`.
pub(crate) fn scientific(value: f32) -> String {
    format!("{value:e}")
}

/// Standard decimal spelling, shortest round-trip digits.
pub(crate) fn standard(value: f32) -> String {
    format!("{value}")
}

/// Bit 1 respells token `i` in scientific notation, bit 0 in standard
/// notation. Tokens already in the right notation are left untouched.
pub fn embed_number(doc: &RawAsciiDocument, payload: &BitSequence) -> Result<RawAsciiDocument, CodecError> {
    check_capacity(ChannelId::Number, payload.len(), doc.numbers.len())?;
    let values = doc
        .model
        .facets
        .iter()
        .flat_map(|f| [f.normal, f.vertices[0], f.vertices[1], f.vertices[2]])
        .flat_map(|v| v.to_array());
    let edits: Vec<_> = payload
        .iter()
        .zip(doc.numbers.iter().zip(values))
        .filter(|(bit, (r, _))| is_scientific(&doc.text[(*r).clone()]) != *bit)
        .map(|(bit, (r, v))| (r.clone(), if bit { scientific(v) } else { standard(v) }))
        .collect();
    Ok(doc.with_edits(&edits)?)
}

pub fn extract_number(doc: &RawAsciiDocument, bits: usize) -> Result<BitSequence, CodecError> {
    check_capacity(ChannelId::Number, bits, doc.numbers.len())?;
    Ok(doc.numbers[..bits].iter().map(|r| is_scientific(&doc.text[r.clone()])).collect())
}

/// Bit 1 makes the indentation of indented line `i` contain a tab, bit 0
/// makes it spaces only.
pub fn embed_whitespace(doc: &RawAsciiDocument, payload: &BitSequence) -> Result<RawAsciiDocument, CodecError> {
    check_capacity(ChannelId::Whitespace, payload.len(), doc.indents.len())?;
    let edits: Vec<_> = payload
        .iter()
        .zip(&doc.indents)
        .filter_map(|(bit, r)| {
            let run = &doc.text[r.clone()];
            match (bit, run.contains('\t')) {
                (true, false) => Some((r.clone(), "\t".repeat(run.len().div_ceil(2)))),
                (false, true) => Some((r.clone(), run.replace('\t', "  "))),
                _ => None,
            }
        })
        .collect();
    Ok(doc.with_edits(&edits)?)
}

pub fn extract_whitespace(doc: &RawAsciiDocument, bits: usize) -> Result<BitSequence, CodecError> {
    check_capacity(ChannelId::Whitespace, bits, doc.indents.len())?;
    Ok(doc.indents[..bits].iter().map(|r| doc.text[r.clone()].contains('\t')).collect())
}

#[derive(Debug, Clone, Copy, Default)]
pub struct NumberCodec;

impl ChannelCodec for NumberCodec {
    type Carrier = RawAsciiDocument;

    fn id(&self) -> ChannelId {
        ChannelId::Number
    }

    fn capacity(&self, carrier: &RawAsciiDocument) -> usize {
        carrier.numbers.len()
    }

    fn embed(&self, carrier: &RawAsciiDocument, payload: &BitSequence) -> Result<RawAsciiDocument, CodecError> {
        embed_number(carrier, payload)
    }

    fn extract(&self, carrier: &RawAsciiDocument, bits: usize) -> Result<BitSequence, CodecError> {
        extract_number(carrier, bits)
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct WhitespaceCodec;

impl ChannelCodec for WhitespaceCodec {
    type Carrier = RawAsciiDocument;

    fn id(&self) -> ChannelId {
        ChannelId::Whitespace
    }

    fn capacity(&self, carrier: &RawAsciiDocument) -> usize {
        carrier.indents.len()
    }

    fn embed(&self, carrier: &RawAsciiDocument, payload: &BitSequence) -> Result<RawAsciiDocument, CodecError> {
        embed_whitespace(carrier, payload)
    }

    fn extract(&self, carrier: &RawAsciiDocument, bits: usize) -> Result<BitSequence, CodecError> {
        extract_whitespace(carrier, bits)
    }
}
