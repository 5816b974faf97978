//! Canonical text form of SimVec documents.
//!
//! ```text
//! doc      := (element NL)* ;
//! element  := "{" kindbody "}" ;
//! kindbody := "text" SP string SP bbox SP color
//!           | "rect" SP bbox SP color
//!           | "line" SP points SP color
//!           | "polygon" SP points SP color ;
//! bbox     := "[" int ", " int ", " int ", " int "]" ;
//! points   := "[" point (", " point)* "]" ;
//! point    := "(" int ", " int ")" ;
//! color    := "hsl (" int ", " int ", " int ")" ;
//! string   := '"' (escaped chars) '"' ;
//! ```
//!
//! The parser accepts any whitespace between tokens; the serializer emits
//! exactly the spacing above, one element per line.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt::{self, Write};

use thiserror::Error;

use crate::doc::{
    Element, HslQ, LineElement, NBBox, NPoint, PolygonElement, RectElement, SimVecDoc,
    TextElement,
};
use crate::validate::{validate, Violation};

/// Line/column position in the source text (both 1-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Position {
    pub offset: usize,
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("{position}: expected {expected}, found {found}")]
    Syntax {
        position: Position,
        expected: &'static str,
        found: String,
    },
    #[error("{position}: {what} needs {needed} values, found {found}")]
    Arity {
        position: Position,
        what: &'static str,
        needed: &'static str,
        found: usize,
    },
    #[error("{position}: unknown element keyword `{keyword}`")]
    UnknownKeyword { position: Position, keyword: String },
    #[error("{position}: integer `{literal}` out of range")]
    IntegerOverflow { position: Position, literal: String },
}

impl ParseError {
    pub fn position(&self) -> Position {
        match self {
            ParseError::Syntax { position, .. }
            | ParseError::Arity { position, .. }
            | ParseError::UnknownKeyword { position, .. }
            | ParseError::IntegerOverflow { position, .. } => *position,
        }
    }
}

/// Serialization refused because the document is not canonical.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("element {}: {} = {}", .violations[0].index, .violations[0].field, .violations[0].observed)]
pub struct SerializeError {
    pub violations: Vec<Violation>,
}

/// Parse SimVec text into a document.
pub fn parse_simvec(source: &str) -> Result<SimVecDoc, ParseError> {
    let mut parser = Parser::new(source);
    let mut elements = Vec::new();
    loop {
        parser.skip_ws();
        if parser.at_end() {
            break;
        }
        elements.push(parser.element()?);
    }
    Ok(SimVecDoc::new(elements))
}

/// Serialize a validated document in canonical form.
pub fn serialize_simvec(doc: &SimVecDoc) -> Result<String, SerializeError> {
    let violations = validate(doc);
    if !violations.is_empty() {
        return Err(SerializeError { violations });
    }
    Ok(serialize_unchecked(doc))
}

/// Canonical printer without range checks.
pub fn serialize_unchecked(doc: &SimVecDoc) -> String {
    let mut out = String::new();
    for element in doc {
        write_element(&mut out, element);
        out.push('\n');
    }
    out
}

/// Canonical text for a single element, without the trailing newline.
pub fn element_to_string(element: &Element) -> String {
    let mut out = String::new();
    write_element(&mut out, element);
    out
}

fn write_element(out: &mut String, element: &Element) {
    out.push('{');
    out.push_str(element.kind().keyword());
    out.push(' ');
    match element {
        Element::Text(t) => {
            write_string(out, &t.text);
            out.push(' ');
            write_bbox(out, &t.bbox);
        }
        Element::Rect(r) => write_bbox(out, &r.bbox),
        Element::Line(l) => write_points(out, &l.points),
        Element::Polygon(p) => write_points(out, &p.points),
    }
    out.push(' ');
    let c = element.color();
    let _ = write!(out, "hsl ({}, {}, {})}}", c.h, c.s, c.l);
}

fn write_string(out: &mut String, text: &str) {
    out.push('"');
    for ch in text.chars() {
        if ch == '"' || ch == '\\' {
            out.push('\\');
        }
        out.push(ch);
    }
    out.push('"');
}

fn write_bbox(out: &mut String, b: &NBBox) {
    let _ = write!(out, "[{}, {}, {}, {}]", b.left, b.top, b.width, b.height);
}

fn write_points(out: &mut String, points: &[NPoint]) {
    out.push('[');
    for (i, p) in points.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        let _ = write!(out, "({}, {})", p.x, p.y);
    }
    out.push(']');
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Self { src, pos: 0 }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.src.len()
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    fn position_at(&self, offset: usize) -> Position {
        let before = &self.src[..offset];
        let line = before.matches('\n').count() + 1;
        let column = match before.rfind('\n') {
            Some(nl) => before[nl + 1..].chars().count() + 1,
            None => before.chars().count() + 1,
        };
        Position { offset, line, column }
    }

    fn position(&self) -> Position {
        self.position_at(self.pos)
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn found(&self) -> String {
        match self.peek() {
            Some(c) => {
                let mut s = String::from("`");
                s.push(c);
                s.push('`');
                s
            }
            None => "end of input".to_string(),
        }
    }

    fn syntax(&self, expected: &'static str) -> ParseError {
        ParseError::Syntax {
            position: self.position(),
            expected,
            found: self.found(),
        }
    }

    fn expect(&mut self, ch: char, expected: &'static str) -> Result<(), ParseError> {
        self.skip_ws();
        if self.peek() == Some(ch) {
            self.pos += ch.len_utf8();
            Ok(())
        } else {
            Err(self.syntax(expected))
        }
    }

    fn eat(&mut self, ch: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(ch) {
            self.pos += ch.len_utf8();
            true
        } else {
            false
        }
    }

    fn word(&mut self) -> (Position, &'a str) {
        self.skip_ws();
        let start = self.pos;
        let len = self
            .rest()
            .find(|c: char| !(c.is_ascii_alphanumeric() || c == '_'))
            .unwrap_or(self.rest().len());
        self.pos += len;
        (self.position_at(start), &self.src[start..start + len])
    }

    fn element(&mut self) -> Result<Element, ParseError> {
        self.expect('{', "`{`")?;
        let (kw_pos, keyword) = self.word();
        let element = match keyword {
            "text" => {
                let text = self.string()?;
                let bbox = self.bbox()?;
                let color = self.color()?;
                Element::Text(TextElement { text, bbox, color })
            }
            "rect" => {
                let bbox = self.bbox()?;
                let color = self.color()?;
                Element::Rect(RectElement { bbox, color })
            }
            "line" => {
                let points = self.points("line", 2, "at least 2")?;
                let color = self.color()?;
                Element::Line(LineElement { points, color })
            }
            "polygon" => {
                let points = self.points("polygon", 3, "at least 3")?;
                let color = self.color()?;
                Element::Polygon(PolygonElement { points, color })
            }
            "" => return Err(self.syntax("element keyword")),
            other => {
                return Err(ParseError::UnknownKeyword {
                    position: kw_pos,
                    keyword: other.to_string(),
                })
            }
        };
        self.expect('}', "`}`")?;
        Ok(element)
    }

    fn string(&mut self) -> Result<String, ParseError> {
        self.expect('"', "string literal")?;
        let mut out = String::new();
        let mut chars = self.rest().char_indices();
        loop {
            match chars.next() {
                None => {
                    self.pos = self.src.len();
                    return Err(self.syntax("closing `\"`"));
                }
                Some((i, '"')) => {
                    self.pos += i + 1;
                    return Ok(out);
                }
                Some((i, '\\')) => match chars.next() {
                    Some((_, c @ ('"' | '\\'))) => out.push(c),
                    _ => {
                        self.pos += i + 1;
                        return Err(self.syntax("`\\\"` or `\\\\` escape"));
                    }
                },
                Some((_, c)) => out.push(c),
            }
        }
    }

    fn int(&mut self) -> Result<i32, ParseError> {
        self.skip_ws();
        let start = self.pos;
        let bytes = self.rest().as_bytes();
        let mut len = 0;
        if matches!(bytes.first(), Some(b'-' | b'+')) {
            len += 1;
        }
        let digits = bytes[len..].iter().take_while(|b| b.is_ascii_digit()).count();
        if digits == 0 {
            return Err(self.syntax("integer"));
        }
        len += digits;
        let literal = &self.src[start..start + len];
        self.pos += len;
        literal.parse::<i32>().map_err(|_| ParseError::IntegerOverflow {
            position: self.position_at(start),
            literal: literal.to_string(),
        })
    }

    /// Comma separated integers up to `close`.
    fn int_list(&mut self, close: char) -> Result<Vec<i32>, ParseError> {
        let mut values = Vec::new();
        if self.eat(close) {
            return Ok(values);
        }
        loop {
            values.push(self.int()?);
            if self.eat(close) {
                return Ok(values);
            }
            self.expect(',', "`,`")?;
        }
    }

    fn bbox(&mut self) -> Result<NBBox, ParseError> {
        self.skip_ws();
        let start = self.position();
        self.expect('[', "`[` opening a bbox")?;
        let v = self.int_list(']')?;
        if v.len() != 4 {
            return Err(ParseError::Arity {
                position: start,
                what: "bbox",
                needed: "4",
                found: v.len(),
            });
        }
        Ok(NBBox::new(v[0], v[1], v[2], v[3]))
    }

    fn point(&mut self) -> Result<NPoint, ParseError> {
        self.skip_ws();
        let start = self.position();
        self.expect('(', "`(` opening a point")?;
        let v = self.int_list(')')?;
        if v.len() != 2 {
            return Err(ParseError::Arity {
                position: start,
                what: "point",
                needed: "2",
                found: v.len(),
            });
        }
        Ok(NPoint::new(v[0], v[1]))
    }

    fn points(
        &mut self,
        what: &'static str,
        min: usize,
        needed: &'static str,
    ) -> Result<Vec<NPoint>, ParseError> {
        self.skip_ws();
        let start = self.position();
        self.expect('[', "`[` opening a point list")?;
        let mut points = Vec::new();
        if !self.eat(']') {
            loop {
                points.push(self.point()?);
                if self.eat(']') {
                    break;
                }
                self.expect(',', "`,`")?;
            }
        }
        if points.len() < min {
            return Err(ParseError::Arity {
                position: start,
                what,
                needed,
                found: points.len(),
            });
        }
        Ok(points)
    }

    fn color(&mut self) -> Result<HslQ, ParseError> {
        let (pos, word) = self.word();
        if word != "hsl" {
            return Err(ParseError::Syntax {
                position: pos,
                expected: "`hsl`",
                found: if word.is_empty() { self.found() } else { word.to_string() },
            });
        }
        self.skip_ws();
        let start = self.position();
        self.expect('(', "`(` after hsl")?;
        let v = self.int_list(')')?;
        if v.len() != 3 {
            return Err(ParseError::Arity {
                position: start,
                what: "color",
                needed: "3",
                found: v.len(),
            });
        }
        Ok(HslQ::new(v[0], v[1], v[2]))
    }
}
