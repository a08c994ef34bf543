use std::fmt::Write as _;
use std::ops::Range;

use super::{sanitize_solid_name, Facet, ParseError, ParseErrorKind, StlFormat, StlModel, Vec3};

struct Token<'a> {
    text: &'a str,
    start: usize,
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer { src, pos: 0 }
    }

    fn position(&self, offset: usize) -> (usize, usize) {
        let before = &self.src[..offset];
        let line = before.matches('\n').count() + 1;
        let column = before.rfind('\n').map_or(offset, |nl| offset - nl - 1) + 1;
        (line, column)
    }

    fn error_at(&self, offset: usize, kind: ParseErrorKind) -> ParseError {
        let (line, column) = self.position(offset);
        ParseError { line, column, kind }
    }

    fn next(&mut self) -> Option<Token<'a>> {
        let rest = &self.src[self.pos..];
        let skip = rest.len() - rest.trim_start().len();
        self.pos += skip;
        if self.pos == self.src.len() {
            return None;
        }
        let rest = &self.src[self.pos..];
        let len = rest.find(char::is_whitespace).unwrap_or(rest.len());
        let tok = Token {
            text: &rest[..len],
            start: self.pos,
        };
        self.pos += len;
        Some(tok)
    }

    /// Remainder of the current line, without the terminator.
    fn rest_of_line(&mut self) -> &'a str {
        let rest = &self.src[self.pos..];
        let len = rest.find('\n').unwrap_or(rest.len());
        self.pos += len;
        &rest[..len]
    }

    fn expect(&mut self, keyword: &'static str) -> Result<Token<'a>, ParseError> {
        match self.next() {
            Some(t) if t.text.eq_ignore_ascii_case(keyword) => Ok(t),
            Some(t) => Err(self.error_at(
                t.start,
                ParseErrorKind::Unexpected {
                    expected: keyword,
                    found: t.text.to_string(),
                },
            )),
            None => Err(self.error_at(self.src.len(), ParseErrorKind::MissingEndSolid)),
        }
    }

    fn number(&mut self, spans: &mut Vec<Range<usize>>) -> Result<f32, ParseError> {
        let Some(t) = self.next() else {
            return Err(self.error_at(self.src.len(), ParseErrorKind::MissingEndSolid));
        };
        let value = parse_number(t.text).map_err(|k| self.error_at(t.start, k))?;
        spans.push(t.start..t.start + t.text.len());
        Ok(value)
    }

    fn vec3(&mut self, spans: &mut Vec<Range<usize>>) -> Result<Vec3, ParseError> {
        Ok(Vec3::new(self.number(spans)?, self.number(spans)?, self.number(spans)?))
    }
}

fn parse_number(text: &str) -> Result<f32, ParseErrorKind> {
    // `f32::from_str` also accepts "inf"/"nan"; only digits, signs, dots and exponents are STL numbers
    let numeric = !text.is_empty()
        && text.bytes().all(|b| b.is_ascii_digit() || matches!(b, b'+' | b'-' | b'.' | b'e' | b'E'))
        && text.bytes().any(|b| b.is_ascii_digit());
    if !numeric {
        return Err(ParseErrorKind::InvalidNumber(text.to_string()));
    }
    let v: f32 = text
        .parse()
        .map_err(|_| ParseErrorKind::InvalidNumber(text.to_string()))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(ParseErrorKind::NonFinite(text.to_string()))
    }
}

/// Parse ASCII STL text into a model with facets in file order.
pub fn parse_ascii(text: &str) -> Result<StlModel, ParseError> {
    parse_ascii_with_spans(text).map(|(m, _)| m)
}

/// Like [`parse_ascii`], also returning the byte range of every numeric token
/// (normal then three vertices per facet, 12 per facet).
pub fn parse_ascii_with_spans(text: &str) -> Result<(StlModel, Vec<Range<usize>>), ParseError> {
    let mut lx = Lexer::new(text);
    let mut spans = Vec::new();
    lx.expect("solid")?;
    let solid_name = lx.rest_of_line().trim().to_string();
    let mut facets = Vec::new();

    loop {
        let Some(tok) = lx.next() else {
            return Err(lx.error_at(text.len(), ParseErrorKind::MissingEndSolid));
        };
        if tok.text.eq_ignore_ascii_case("endsolid") {
            lx.rest_of_line();
            if let Some(extra) = lx.next() {
                let kind = if extra.text.eq_ignore_ascii_case("solid") {
                    ParseErrorKind::MultipleSolids
                } else {
                    ParseErrorKind::TrailingContent(extra.text.to_string())
                };
                return Err(lx.error_at(extra.start, kind));
            }
            break;
        }
        if !tok.text.eq_ignore_ascii_case("facet") {
            return Err(lx.error_at(tok.start, ParseErrorKind::UnknownKeyword(tok.text.to_string())));
        }
        lx.expect("normal")?;
        let normal = lx.vec3(&mut spans)?;
        lx.expect("outer")?;
        lx.expect("loop")?;

        let mut vertices = [Vec3::ZERO; 3];
        let mut count = 0;
        loop {
            let Some(t) = lx.next() else {
                return Err(lx.error_at(text.len(), ParseErrorKind::MissingEndSolid));
            };
            if t.text.eq_ignore_ascii_case("vertex") {
                if count == 3 {
                    return Err(lx.error_at(t.start, ParseErrorKind::WrongVertexCount(4)));
                }
                vertices[count] = lx.vec3(&mut spans)?;
                count += 1;
            } else if t.text.eq_ignore_ascii_case("endloop") {
                if count != 3 {
                    return Err(lx.error_at(t.start, ParseErrorKind::WrongVertexCount(count)));
                }
                break;
            } else {
                return Err(lx.error_at(t.start, ParseErrorKind::UnknownKeyword(t.text.to_string())));
            }
        }
        lx.expect("endfacet")?;
        facets.push(Facet::new(vertices, normal));
    }

    Ok((StlModel::new(solid_name, facets, StlFormat::Ascii), spans))
}

fn push_vec3(out: &mut String, v: Vec3) {
    // `Display` for f32 is the shortest round-tripping digit string and never
    // switches to exponent notation
    let _ = write!(out, " {} {} {}", v.x, v.y, v.z);
}

/// Deterministic ASCII serialization: lowercase keywords, single spaces,
/// two-space indentation, LF line ends, shortest round-trip numbers in
/// standard notation. Equal models give byte-identical output.
pub fn write_canonical_ascii(model: &StlModel) -> String {
    let name = sanitize_solid_name(&model.solid_name);
    let header = if name.is_empty() { String::new() } else { format!(" {name}") };
    let mut out = String::with_capacity(64 + model.facets.len() * 200);
    let _ = writeln!(out, "solid{header}");
    for f in &model.facets {
        out.push_str("  facet normal");
        push_vec3(&mut out, f.normal);
        out.push_str("\n    outer loop\n");
        for v in &f.vertices {
            out.push_str("      vertex");
            push_vec3(&mut out, *v);
            out.push('\n');
        }
        out.push_str("    endloop\n  endfacet\n");
    }
    let _ = writeln!(out, "endsolid{header}");
    out
}
