//! RLE and plaintext (`.cells`) pattern formats.
//!
//! Both readers produce a [`PatternDocument`] whose cells lie inside the
//! declared `width × height` box. [`emit_rle`] writes the canonical form:
//! minimal bounding box, greedy maximal runs, every non-empty row written out
//! to the full width, blank rows folded into `$` runs, rule always present,
//! body wrapped at 70 columns without splitting a run.

use std::fmt::Write as _;

use thiserror::Error;

use crate::engine::{Cell, Pattern};

/// The only rule this crate evolves.
pub const LIFE_RULE: &str = "B3/S23";

const RLE_LINE_LIMIT: usize = 70;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}, column {column}: malformed header: {reason}")]
    Header {
        line: usize,
        column: usize,
        reason: String,
    },
    #[error("line {line}, column {column}: unsupported rule `{rule}` (only B3/S23)")]
    Rule {
        line: usize,
        column: usize,
        rule: String,
    },
    #[error("line {line}, column {column}: run count of zero")]
    ZeroRun { line: usize, column: usize },
    #[error("line {line}, column {column}: number exceeds 32 bits")]
    NumberTooLarge { line: usize, column: usize },
    #[error("line {line}, column {column}: unexpected character `{found}`")]
    UnexpectedChar {
        line: usize,
        column: usize,
        found: char,
    },
    #[error("line {line}, column {column}: cell ({x},{y}) outside declared {width}x{height} box")]
    OutOfBounds {
        line: usize,
        column: usize,
        x: u64,
        y: u64,
        width: u32,
        height: u32,
    },
    #[error("line {line}, column {column}: missing `!` terminator")]
    MissingTerminator { line: usize, column: usize },
    #[error("pattern is {width}x{height}, beyond the 32-bit RLE limit")]
    TooLarge { width: u64, height: u64 },
}

impl ParseError {
    /// 1-based `(line, column)` of the failure, when it has one.
    pub fn position(&self) -> Option<(usize, usize)> {
        match *self {
            ParseError::Header { line, column, .. }
            | ParseError::Rule { line, column, .. }
            | ParseError::ZeroRun { line, column }
            | ParseError::NumberTooLarge { line, column }
            | ParseError::UnexpectedChar { line, column, .. }
            | ParseError::OutOfBounds { line, column, .. }
            | ParseError::MissingTerminator { line, column } => Some((line, column)),
            ParseError::TooLarge { .. } => None,
        }
    }
}

/// A parsed pattern file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatternDocument {
    pub name: Option<String>,
    /// Comment lines other than the name, kept verbatim including the
    /// leading `#` (RLE) or `!` (plaintext).
    pub comments: Vec<String>,
    pub rule: String,
    /// Sorted row-major, duplicate-free, inside `[0,width) × [0,height)`.
    pub cells: Vec<Cell>,
    pub width: u32,
    pub height: u32,
}

impl PatternDocument {
    /// Document for a pattern, translated so its bounding box starts at the
    /// origin.
    pub fn from_pattern(pattern: &Pattern) -> Result<Self, ParseError> {
        if pattern.is_empty() {
            return Ok(PatternDocument {
                name: None,
                comments: Vec::new(),
                rule: LIFE_RULE.to_string(),
                cells: Vec::new(),
                width: 0,
                height: 0,
            });
        }
        let bb = pattern.bounding_box().expect("non-empty");
        let (w, h) = (bb.width(), bb.height());
        let (Ok(width), Ok(height)) = (u32::try_from(w), u32::try_from(h)) else {
            return Err(ParseError::TooLarge {
                width: w,
                height: h,
            });
        };
        let (canon, _) = pattern.canonicalize().expect("non-empty");
        Ok(PatternDocument {
            name: None,
            comments: Vec::new(),
            rule: LIFE_RULE.to_string(),
            cells: canon.cells().to_vec(),
            width,
            height,
        })
    }

    /// Generation-0 pattern with the document's cells.
    pub fn to_pattern(&self) -> Pattern {
        Pattern::new(self.cells.iter().copied())
    }

    pub fn population(&self) -> usize {
        self.cells.len()
    }
}

/// Accepts `B3/S23` in either case, with or without surrounding whitespace,
/// and the legacy survival/birth form `23/3`.
fn canonical_rule(text: &str) -> Option<&'static str> {
    let compact: String = text
        .chars()
        .filter(|c| !c.is_whitespace())
        .collect::<String>()
        .to_ascii_uppercase();
    match compact.as_str() {
        "B3/S23" | "S23/B3" | "23/3" => Some(LIFE_RULE),
        _ => None,
    }
}

/// Character cursor tracking 1-based line and column.
struct Cursor<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    column: usize,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str, line: usize) -> Self {
        Cursor {
            chars: text.chars().peekable(),
            line,
            column: 1,
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.chars.peek().copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn pos(&self) -> (usize, usize) {
        (self.line, self.column)
    }
}

fn parse_header(line_text: &str, line: usize) -> Result<(u32, u32, String), ParseError> {
    let err = |column: usize, reason: &str| ParseError::Header {
        line,
        column,
        reason: reason.to_string(),
    };
    let mut width = None;
    let mut height = None;
    let mut rule = LIFE_RULE.to_string();
    let mut offset = 0usize;
    for field in line_text.split(',') {
        let column = offset + 1 + (field.len() - field.trim_start().len());
        offset += field.len() + 1;
        let Some((key, value)) = field.split_once('=') else {
            return Err(err(column, "expected `key = value`"));
        };
        let key = key.trim();
        let value = value.trim();
        match key {
            "x" | "y" => {
                if value.is_empty() || !value.bytes().all(|b| b.is_ascii_digit()) {
                    return Err(err(column, "dimension must be a non-negative integer"));
                }
                let n: u32 = value
                    .parse()
                    .map_err(|_| ParseError::NumberTooLarge { line, column })?;
                let slot = if key == "x" { &mut width } else { &mut height };
                if slot.replace(n).is_some() {
                    return Err(err(column, "duplicate dimension"));
                }
            }
            "rule" => match canonical_rule(value) {
                Some(r) => rule = r.to_string(),
                None => {
                    return Err(ParseError::Rule {
                        line,
                        column,
                        rule: value.to_string(),
                    })
                }
            },
            _ => return Err(err(column, "unknown header key")),
        }
    }
    match (width, height) {
        (Some(w), Some(h)) => Ok((w, h, rule)),
        _ => Err(err(1, "header must declare both x and y")),
    }
}

/// Parses an RLE document.
pub fn parse_rle(text: &str) -> Result<PatternDocument, ParseError> {
    let mut name = None;
    let mut comments = Vec::new();
    let mut header = None;
    let mut body_start = text.len();
    let mut line_no = 0usize;
    let mut consumed = 0usize;

    for raw in text.split_inclusive('\n') {
        line_no += 1;
        let line = raw.trim_end_matches(['\n', '\r']);
        let start = consumed;
        consumed += raw.len();
        if line.trim().is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            if let Some(n) = rest.strip_prefix('N') {
                name = Some(n.trim().to_string());
            } else {
                comments.push(line.to_string());
            }
            continue;
        }
        header = Some(parse_header(line, line_no)?);
        body_start = start + raw.len();
        break;
    }

    let Some((width, height, rule)) = header else {
        return Err(ParseError::Header {
            line: line_no.max(1),
            column: 1,
            reason: "missing `x = .., y = ..` header".to_string(),
        });
    };

    let mut cur = Cursor::new(&text[body_start..], line_no + 1);
    let mut cells = Vec::new();
    let (mut x, mut y) = (0u64, 0u64);
    loop {
        let (line, column) = cur.pos();
        let Some(c) = cur.peek() else {
            return Err(ParseError::MissingTerminator { line, column });
        };
        if c.is_whitespace() {
            cur.bump();
            continue;
        }
        let mut count: Option<u32> = None;
        if c.is_ascii_digit() {
            let mut n: u64 = 0;
            while let Some(d) = cur.peek().and_then(|d| d.to_digit(10)) {
                n = n * 10 + u64::from(d);
                if n > u64::from(u32::MAX) {
                    return Err(ParseError::NumberTooLarge { line, column });
                }
                cur.bump();
            }
            if n == 0 {
                return Err(ParseError::ZeroRun { line, column });
            }
            count = Some(n as u32);
        }
        let (tline, tcol) = cur.pos();
        let Some(tag) = cur.bump() else {
            return Err(ParseError::MissingTerminator {
                line: tline,
                column: tcol,
            });
        };
        let run = u64::from(count.unwrap_or(1));
        match tag {
            'b' => x += run,
            'o' => {
                if y >= u64::from(height) || x + run > u64::from(width) {
                    return Err(ParseError::OutOfBounds {
                        line,
                        column,
                        x: x + run - 1,
                        y,
                        width,
                        height,
                    });
                }
                for i in 0..run {
                    cells.push(Cell::new((x + i) as i64, y as i64));
                }
                x += run;
            }
            '$' => {
                y += run;
                x = 0;
            }
            '!' => break,
            other => {
                return Err(ParseError::UnexpectedChar {
                    line: tline,
                    column: tcol,
                    found: other,
                })
            }
        }
    }

    // The cursor only moves forward, so cells are already row-major and
    // unique.
    Ok(PatternDocument {
        name,
        comments,
        rule,
        cells,
        width,
        height,
    })
}

fn push_run(body: &mut String, line_len: &mut usize, count: u64, tag: char) {
    let token = if count == 1 {
        tag.to_string()
    } else {
        format!("{count}{tag}")
    };
    if *line_len + token.len() > RLE_LINE_LIMIT {
        body.push('\n');
        *line_len = 0;
    }
    *line_len += token.len();
    body.push_str(&token);
}

/// Canonical RLE text, without a trailing newline.
pub fn emit_rle(doc: &PatternDocument) -> String {
    let mut out = String::new();
    if let Some(name) = &doc.name {
        let _ = writeln!(out, "#N {name}");
    }
    for c in &doc.comments {
        let _ = writeln!(out, "{c}");
    }
    if doc.cells.is_empty() {
        let _ = write!(out, "x = 0, y = 0, rule = {LIFE_RULE}\n!");
        return out;
    }
    let min_x = doc.cells.iter().map(|c| c.x).min().expect("non-empty");
    let max_x = doc.cells.iter().map(|c| c.x).max().expect("non-empty");
    let min_y = doc.cells[0].y;
    let max_y = doc.cells[doc.cells.len() - 1].y;
    let _ = writeln!(
        out,
        "x = {}, y = {}, rule = {LIFE_RULE}",
        max_x - min_x + 1,
        max_y - min_y + 1
    );

    let mut body = String::new();
    let mut line_len = 0usize;
    let mut row = min_y;
    let mut i = 0;
    while i < doc.cells.len() {
        let y = doc.cells[i].y;
        if y > row {
            push_run(&mut body, &mut line_len, (y - row) as u64, '$');
            row = y;
        }
        let mut col = min_x;
        while i < doc.cells.len() && doc.cells[i].y == y {
            let start = doc.cells[i].x;
            let mut end = start;
            i += 1;
            while i < doc.cells.len() && doc.cells[i].y == y && doc.cells[i].x == end + 1 {
                end += 1;
                i += 1;
            }
            if start > col {
                push_run(&mut body, &mut line_len, (start - col) as u64, 'b');
            }
            push_run(&mut body, &mut line_len, (end - start + 1) as u64, 'o');
            col = end + 1;
        }
        if col <= max_x {
            push_run(&mut body, &mut line_len, (max_x - col + 1) as u64, 'b');
        }
    }
    if line_len + 1 > RLE_LINE_LIMIT {
        body.push('\n');
    }
    body.push('!');
    out.push_str(&body);
    out
}

/// Parses the plaintext format: `.` dead, `O` or `*` alive, `!` comments.
pub fn parse_plaintext(text: &str) -> Result<PatternDocument, ParseError> {
    let mut name = None;
    let mut comments = Vec::new();
    let mut cells = Vec::new();
    let mut width = 0u64;
    let mut height = 0u64;
    for (idx, line) in text.lines().enumerate() {
        if let Some(rest) = line.strip_prefix('!') {
            if let Some(n) = rest.strip_prefix("Name:") {
                name = Some(n.trim().to_string());
            } else {
                comments.push(line.to_string());
            }
            continue;
        }
        let y = height;
        for (col, ch) in line.chars().enumerate() {
            match ch {
                '.' => {}
                'O' | '*' => cells.push(Cell::new(col as i64, y as i64)),
                other => {
                    return Err(ParseError::UnexpectedChar {
                        line: idx + 1,
                        column: col + 1,
                        found: other,
                    })
                }
            }
        }
        width = width.max(line.chars().count() as u64);
        height += 1;
    }
    let (Ok(w), Ok(h)) = (u32::try_from(width), u32::try_from(height)) else {
        return Err(ParseError::TooLarge { width, height });
    };
    Ok(PatternDocument {
        name,
        comments,
        rule: LIFE_RULE.to_string(),
        cells,
        width: w,
        height: h,
    })
}

/// Plaintext rendering of the document's minimal bounding box.
pub fn emit_plaintext(doc: &PatternDocument) -> String {
    let mut out = String::new();
    if let Some(name) = &doc.name {
        let _ = writeln!(out, "!Name: {name}");
    }
    for c in &doc.comments {
        if c.starts_with('!') {
            let _ = writeln!(out, "{c}");
        } else {
            let _ = writeln!(out, "!{}", c.trim_start_matches('#'));
        }
    }
    let p = doc.to_pattern();
    out.push_str(&p.to_string());
    out
}

/// Format guess: RLE when the first non-comment line looks like a header.
pub fn parse_any(text: &str) -> Result<PatternDocument, ParseError> {
    let first = text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#') && !l.starts_with('!'));
    match first {
        Some(l) if l.starts_with('x') => parse_rle(text),
        None if text.lines().any(|l| l.trim_start().starts_with('#')) => parse_rle(text),
        _ => parse_plaintext(text),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const GLIDER: &str = "x = 3, y = 3, rule = B3/S23\nbob$2bo$3o!";
    const BLOCK: &str = "x = 2, y = 2, rule = B3/S23\n2o$2o!";
    const EMPTY: &str = "x = 0, y = 0, rule = B3/S23\n!";

    fn cells(list: &[(i64, i64)]) -> Vec<Cell> {
        let mut v: Vec<Cell> = list.iter().map(|&c| c.into()).collect();
        v.sort();
        v
    }

    #[test]
    fn glider_rle() {
        let d = parse_rle(GLIDER).unwrap();
        assert_eq!(d.cells, cells(&[(1, 0), (2, 1), (0, 2), (1, 2), (2, 2)]));
        assert_eq!((d.width, d.height), (3, 3));
        assert_eq!(d.rule, "B3/S23");
        assert_eq!(emit_rle(&d), GLIDER);
    }

    #[test]
    fn empty_and_block() {
        let e = parse_rle(EMPTY).unwrap();
        assert!(e.cells.is_empty());
        assert_eq!(emit_rle(&e), EMPTY);
        let b = parse_rle(BLOCK).unwrap();
        assert_eq!(b.cells, cells(&[(0, 0), (1, 0), (0, 1), (1, 1)]));
        assert_eq!(emit_rle(&b), BLOCK);
    }

    #[test]
    fn rule_defaults_and_variants() {
        let d = parse_rle("x = 1, y = 1\no!").unwrap();
        assert_eq!(d.rule, "B3/S23");
        let d = parse_rle("x=1,y=1,rule=b3/s23\no!").unwrap();
        assert_eq!(d.rule, "B3/S23");
        let d = parse_rle("x = 1, y = 1, rule = 23/3\no!").unwrap();
        assert_eq!(d.rule, "B3/S23");
        let e = parse_rle("x = 1, y = 1, rule = B36/S23\no!").unwrap_err();
        assert!(matches!(e, ParseError::Rule { line: 1, .. }));
    }

    #[test]
    fn comments_and_name() {
        let text = "#N Glider\n#C a comment\n#O someone\nx = 3, y = 3\nbob$2bo$3o!";
        let d = parse_rle(text).unwrap();
        assert_eq!(d.name.as_deref(), Some("Glider"));
        assert_eq!(d.comments, vec!["#C a comment", "#O someone"]);
        let out = emit_rle(&d);
        assert_eq!(
            out,
            "#N Glider\n#C a comment\n#O someone\nx = 3, y = 3, rule = B3/S23\nbob$2bo$3o!"
        );
    }

    #[test]
    fn multiline_body_and_blank_rows() {
        let d = parse_rle("x = 3, y = 4\no\n2$\n2bo!").unwrap();
        assert_eq!(d.cells, cells(&[(0, 0), (2, 2)]));
        assert_eq!(emit_rle(&d), "x = 3, y = 3, rule = B3/S23\no2b2$2bo!");
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_rle("x = 3, y = 3\nb0o!").unwrap_err();
        assert_eq!(e, ParseError::ZeroRun { line: 2, column: 2 });
        let e = parse_rle("x = 3, y = 3\nbqo!").unwrap_err();
        assert_eq!(
            e,
            ParseError::UnexpectedChar {
                line: 2,
                column: 2,
                found: 'q'
            }
        );
        let e = parse_rle("x = 3, y = 3\nbob$2bo$3o").unwrap_err();
        assert!(matches!(e, ParseError::MissingTerminator { line: 2, .. }));
        let e = parse_rle("x = 2, y = 2\n3o!").unwrap_err();
        assert!(matches!(
            e,
            ParseError::OutOfBounds {
                line: 2,
                column: 1,
                ..
            }
        ));
        let e = parse_rle("x = 2, y = 1\no$o!").unwrap_err();
        assert!(matches!(e, ParseError::OutOfBounds { y: 1, .. }));
        let e = parse_rle("x = 3\nooo!").unwrap_err();
        assert!(matches!(e, ParseError::Header { line: 1, .. }));
        let e = parse_rle("x = -3, y = 1\nooo!").unwrap_err();
        assert!(matches!(e, ParseError::Header { .. }));
        let e = parse_rle("x = 1, y = 1\n4294967296o!").unwrap_err();
        assert!(matches!(e, ParseError::NumberTooLarge { .. }));
        let e = parse_rle("x = 99999999999, y = 1\no!").unwrap_err();
        assert!(matches!(e, ParseError::NumberTooLarge { .. }));
        let e = parse_rle("#C only comments\n").unwrap_err();
        assert!(matches!(e, ParseError::Header { .. }));
        assert!(e.position().is_some());
    }

    #[test]
    fn plaintext() {
        let d = parse_plaintext(".O.\n..O\nOOO").unwrap();
        assert_eq!(d.cells, parse_rle(GLIDER).unwrap().cells);
        let d = parse_plaintext("").unwrap();
        assert!(d.cells.is_empty());
        assert_eq!((d.width, d.height), (0, 0));
        let d = parse_plaintext("O").unwrap();
        assert_eq!(d.cells, cells(&[(0, 0)]));
        let d = parse_plaintext("!Name: glider\n!by hand\n.*.\n..*\n***\n").unwrap();
        assert_eq!(d.name.as_deref(), Some("glider"));
        assert_eq!(d.comments, vec!["!by hand"]);
        assert_eq!(d.population(), 5);
        let e = parse_plaintext("..\n.x").unwrap_err();
        assert_eq!(
            e,
            ParseError::UnexpectedChar {
                line: 2,
                column: 2,
                found: 'x'
            }
        );
    }

    #[test]
    fn plaintext_emit() {
        let d = parse_rle(GLIDER).unwrap();
        assert_eq!(emit_plaintext(&d), ".O.\n..O\nOOO\n");
    }

    #[test]
    fn long_rows_wrap_without_splitting_runs() {
        let p = Pattern::new((0..200).map(|i| (i * 2, 0)));
        let d = PatternDocument::from_pattern(&p).unwrap();
        let text = emit_rle(&d);
        assert!(text.lines().all(|l| l.len() <= RLE_LINE_LIMIT));
        assert_eq!(parse_rle(&text).unwrap().cells, d.cells);
    }

    #[test]
    fn from_pattern_translates_to_origin() {
        let p = Pattern::new([(10, -4), (11, -4)]);
        let d = PatternDocument::from_pattern(&p).unwrap();
        assert_eq!(d.cells, cells(&[(0, 0), (1, 0)]));
        assert_eq!((d.width, d.height), (2, 1));
    }

    #[test]
    fn format_detection() {
        assert_eq!(parse_any(GLIDER).unwrap().population(), 5);
        assert_eq!(parse_any(".O.\n..O\nOOO").unwrap().population(), 5);
        assert_eq!(parse_any("!c\nOO\nOO").unwrap().population(), 4);
    }
}
