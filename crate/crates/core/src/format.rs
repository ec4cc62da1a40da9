//! Text formats for matrices.
//!
//! A matrix file has header lines `field Q` or `field Q(sqrt d)`, `rows N`
//! and `cols L`, followed by the entries in row-major order. Entries are
//! separated by whitespace and follow the grammar
//!
//! ```text
//! rat  := ['-'] digits ['/' digits]
//! qnum := rat | rat ('+'|'-') rat '*w' | rat '*w'
//! ```
//!
//! where `w` is `sqrt(d)`. Spaces around a binary `+`, `-` or `*` inside an
//! entry are allowed, so `1 - 3*w` is one entry while `1 -3*w` is two.
//! Everything after `#` on a line is ignored.
//!
//! Integer matrices (sensing matrices) use the same layout with plain
//! integers; the header is optional there and the shape then follows the
//! lines.

use std::fmt::Write as _;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, ParseErrorKind, Result};
use crate::field::{is_squarefree, FieldCtx, QNum};
use crate::linalg::QMatrix;
use crate::sensing::IntMatrix;

fn perr(kind: ParseErrorKind, line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        kind,
        line,
        column,
        message: message.into(),
    }
}

/// A whitespace-separated token with its 1-based position.
#[derive(Debug, Clone)]
struct Token {
    text: String,
    line: usize,
    column: usize,
}

fn strip_comment(line: &str) -> &str {
    line.split('#').next().unwrap_or("")
}

fn tokens_of(line: &str, line_no: usize) -> Vec<Token> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices().chain(std::iter::once((line.len(), ' '))) {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push(Token {
                    text: line[s..i].to_string(),
                    line: line_no,
                    column: line[..s].chars().count() + 1,
                });
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    out
}

/// Joins tokens that belong to one entry: around binary operators and `w`.
fn merge_entries(tokens: Vec<Token>) -> Vec<Token> {
    let mut out: Vec<Token> = Vec::new();
    for t in tokens {
        let join = match out.last() {
            Some(prev) => {
                prev.text.ends_with(['+', '-', '*', '/'])
                    || t.text.starts_with(['+', '*', '/'])
                    || t.text == "-"
                    || t.text == "w"
            }
            None => false,
        };
        if join {
            out.last_mut().expect("checked").text.push_str(&t.text);
        } else {
            out.push(t);
        }
    }
    out
}

/// Parses `['-'] digits ['/' digits]`.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let digits = |t: &str| !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit());
    let value = match body.split_once('/') {
        Some((p, q)) => {
            if !digits(p) || !digits(q) {
                return None;
            }
            let q = BigInt::from_str(q).ok()?;
            if q.is_zero() {
                return None;
            }
            BigRational::new(BigInt::from_str(p).ok()?, q)
        }
        None => {
            if !digits(body) {
                return None;
            }
            BigRational::from_integer(BigInt::from_str(body).ok()?)
        }
    };
    Some(if neg { -value } else { value })
}

/// Parses one entry under the grammar; whitespace inside is ignored.
pub fn parse_qnum(ctx: FieldCtx, text: &str) -> std::result::Result<QNum, String> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || format!("'{}' is not an entry", text.trim());
    let Some(prefix) = s.strip_suffix("*w") else {
        let a = parse_rational(&s).ok_or_else(bad)?;
        return Ok(QNum::from_rational(ctx, a));
    };
    if ctx.is_rational() {
        return Err(format!("'{}' uses w but the field is Q", text.trim()));
    }
    let split = prefix
        .char_indices()
        .skip(1)
        .find(|&(_, c)| c == '+' || c == '-')
        .map(|(i, _)| i);
    let (a, b) = match split {
        Some(i) => {
            let a = parse_rational(&prefix[..i]).ok_or_else(bad)?;
            let b = parse_rational(&prefix[i + 1..]).ok_or_else(bad)?;
            (a, if &prefix[i..i + 1] == "-" { -b } else { b })
        }
        None => (BigRational::zero(), parse_rational(prefix).ok_or_else(bad)?),
    };
    QNum::new(ctx, a, b).map_err(|e| e.to_string())
}

/// Parses `Q` or `Q(sqrt d)`.
pub fn parse_field(text: &str) -> std::result::Result<FieldCtx, (ParseErrorKind, String)> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if s == "Q" {
        return Ok(FieldCtx::rational());
    }
    let header = || (ParseErrorKind::MalformedHeader, format!("unknown field '{}'", text.trim()));
    let d = s
        .strip_prefix("Q(sqrt")
        .and_then(|r| r.strip_suffix(')'))
        .and_then(|d| d.parse::<i64>().ok())
        .ok_or_else(header)?;
    if d == 0 || d == 1 {
        return Err(header());
    }
    if !is_squarefree(d) {
        return Err((ParseErrorKind::NotSquarefree, format!("{} is not squarefree", d)));
    }
    FieldCtx::quadratic(d).map_err(|e| (ParseErrorKind::MalformedHeader, e.to_string()))
}

#[derive(Debug, Default)]
struct Header {
    field: Option<(FieldCtx, usize)>,
    rows: Option<usize>,
    cols: Option<usize>,
}

/// Splits a file into header settings and entry tokens.
fn scan(text: &str, allow_field: bool) -> Result<(Header, Vec<Vec<Token>>)> {
    let mut header = Header::default();
    let mut lines: Vec<Vec<Token>> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = strip_comment(raw);
        let trimmed = line.trim_start();
        if trimmed.is_empty() {
            continue;
        }
        let column = line.len() - trimmed.len() + 1;
        if !trimmed.starts_with(|c: char| c.is_ascii_alphabetic()) {
            lines.push(tokens_of(line, line_no));
            continue;
        }
        let (key, value) = trimmed.split_once(char::is_whitespace).unwrap_or((trimmed, ""));
        if !lines.is_empty() {
            return Err(perr(ParseErrorKind::MalformedHeader, line_no, column, "header line after entries"));
        }
        let value_col = column + key.len() + (value.len() - value.trim_start().len()) + 1;
        let dup = || perr(ParseErrorKind::MalformedHeader, line_no, column, format!("duplicate '{}'", key));
        match key {
            "field" if allow_field => {
                if header.field.is_some() {
                    return Err(dup());
                }
                let ctx = parse_field(value).map_err(|(k, m)| perr(k, line_no, value_col, m))?;
                header.field = Some((ctx, line_no));
            }
            "rows" | "cols" => {
                let n: usize = value.trim().parse().map_err(|_| {
                    perr(
                        ParseErrorKind::MalformedHeader,
                        line_no,
                        value_col,
                        format!("'{}' is not a dimension", value.trim()),
                    )
                })?;
                let slot = if key == "rows" { &mut header.rows } else { &mut header.cols };
                if slot.replace(n).is_some() {
                    return Err(dup());
                }
            }
            _ => {
                return Err(perr(
                    ParseErrorKind::MalformedHeader,
                    line_no,
                    column,
                    format!("unknown header '{}'", key),
                ))
            }
        }
    }
    Ok((header, lines))
}

fn last_position(text: &str) -> (usize, usize) {
    (text.lines().count().max(1), 1)
}

fn check_count(text: &str, entries: &[Token], expected: usize) -> Result<()> {
    if entries.len() == expected {
        return Ok(());
    }
    let (line, column) = match entries.get(expected) {
        Some(t) => (t.line, t.column),
        None => last_position(text),
    };
    Err(perr(
        ParseErrorKind::EntryCount,
        line,
        column,
        format!("expected {} entries, found {}", expected, entries.len()),
    ))
}

/// Parses a matrix file. `field` defaults to `Q` when absent; `rows` and
/// `cols` are required.
pub fn parse_matrix(text: &str) -> Result<QMatrix> {
    let (header, lines) = scan(text, true)?;
    let ctx = header.field.map(|f| f.0).unwrap_or_else(FieldCtx::rational);
    let (rows, cols) = match (header.rows, header.cols) {
        (Some(r), Some(c)) => (r, c),
        _ => {
            return Err(perr(ParseErrorKind::MalformedHeader, 1, 1, "missing 'rows' or 'cols' header"));
        }
    };
    let entries = merge_entries(lines.into_iter().flatten().collect());
    check_count(text, &entries, rows * cols)?;
    let data = entries
        .iter()
        .map(|t| parse_qnum(ctx, &t.text).map_err(|m| perr(ParseErrorKind::BadEntry, t.line, t.column, m)))
        .collect::<Result<Vec<_>>>()?;
    QMatrix::new(ctx, rows, cols, data)
}

pub fn write_matrix(m: &QMatrix) -> String {
    let mut out = String::new();
    writeln!(out, "field {}", m.ctx()).unwrap();
    writeln!(out, "rows {}", m.rows()).unwrap();
    writeln!(out, "cols {}", m.cols()).unwrap();
    for r in 0..m.rows() {
        let row: Vec<String> = m.row(r).iter().map(|x| x.to_string()).collect();
        writeln!(out, "{}", row.join(" ")).unwrap();
    }
    out
}

/// Parses an integer matrix. With `rows`/`cols` headers the entries may be
/// laid out freely; otherwise each line is one row.
pub fn parse_int_matrix(text: &str) -> Result<IntMatrix> {
    let (header, lines) = scan(text, true)?;
    if let Some((ctx, line)) = header.field {
        if !ctx.is_rational() {
            return Err(perr(ParseErrorKind::MalformedHeader, line, 1, "integer matrices live over Q"));
        }
    }
    let int_of = |t: &Token| {
        t.text
            .parse::<i64>()
            .map_err(|_| perr(ParseErrorKind::BadEntry, t.line, t.column, format!("'{}' is not an integer", t.text)))
    };
    let (rows, cols, entries) = match (header.rows, header.cols) {
        (Some(r), Some(c)) => {
            let entries: Vec<Token> = lines.into_iter().flatten().collect();
            check_count(text, &entries, r * c)?;
            (r, c, entries)
        }
        (None, None) => {
            let cols = lines.first().map_or(0, Vec::len);
            if let Some(bad) = lines.iter().find(|l| l.len() != cols) {
                let t = bad.get(cols).or(bad.last()).expect("nonempty line");
                return Err(perr(
                    ParseErrorKind::EntryCount,
                    t.line,
                    t.column,
                    format!("expected {} entries per row, found {}", cols, bad.len()),
                ));
            }
            (lines.len(), cols, lines.into_iter().flatten().collect())
        }
        _ => {
            return Err(perr(ParseErrorKind::MalformedHeader, 1, 1, "give both 'rows' and 'cols' or neither"));
        }
    };
    let data = entries.iter().map(int_of).collect::<Result<Vec<_>>>()?;
    IntMatrix::new(rows, cols, data)
}

pub fn write_int_matrix(m: &IntMatrix) -> String {
    let mut out = String::new();
    writeln!(out, "rows {}", m.rows()).unwrap();
    writeln!(out, "cols {}", m.cols()).unwrap();
    for r in 0..m.rows() {
        let row: Vec<String> = (0..m.cols()).map(|c| m.get(r, c).to_string()).collect();
        writeln!(out, "{}", row.join(" ")).unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn kind(r: Result<QMatrix>) -> (ParseErrorKind, usize, usize) {
        match r {
            Err(Error::Parse { kind, line, column, .. }) => (kind, line, column),
            other => panic!("expected a parse error, got {:?}", other),
        }
    }

    #[test]
    fn worked_example_file() {
        let text = "# worked example\nfield Q\nrows 4\ncols 3\n1 2 3\n4 3 1\n5 2 1\n2 1 3\n";
        let m = parse_matrix(text).unwrap();
        let q = FieldCtx::rational();
        assert_eq!(m, QMatrix::from_ints(q, 4, 3, &[1, 2, 3, 4, 3, 1, 5, 2, 1, 2, 1, 3]).unwrap());
        assert_eq!(parse_matrix(&write_matrix(&m)).unwrap(), m);
    }

    #[test]
    fn entry_grammar() {
        let k = FieldCtx::quadratic(5).unwrap();
        let half = BigRational::new(1.into(), 2.into());
        assert_eq!(parse_qnum(k, "1/2+3*w").unwrap(), QNum::new(k, half.clone(), BigRational::from_integer(3.into())).unwrap());
        assert_eq!(parse_qnum(k, "-3/4*w").unwrap(), QNum::new(k, BigRational::zero(), BigRational::new((-3).into(), 4.into())).unwrap());
        assert_eq!(parse_qnum(k, "-1/2-3/4*w").unwrap().to_string(), "-1/2-3/4*w");
        assert_eq!(parse_qnum(k, " 1 - 2 * w ").unwrap(), QNum::quad(k, 1, -2).unwrap());
        assert_eq!(parse_qnum(k, "2/4").unwrap(), QNum::from_rational(k, half));
        for bad in ["", "w", "1/0", "1+", "--1", "1.5", "3*v", "1/2/3", "+1"] {
            assert!(parse_qnum(k, bad).is_err(), "{}", bad);
        }
        assert!(parse_qnum(FieldCtx::rational(), "2*w").is_err());
    }

    #[test]
    fn spaced_entries() {
        let text = "field Q(sqrt -1)\nrows 1\ncols 3\n1 - 3*w  -2 +w*0  4 * w\n";
        // `+w*0` is not grammatical; fix it and check the merge.
        assert!(parse_matrix(text).is_err());
        let text = "field Q(sqrt -1)\nrows 1\ncols 3\n1 - 3*w  -2 + 0*w  4 * w\n";
        let g = FieldCtx::quadratic(-1).unwrap();
        let m = parse_matrix(text).unwrap();
        assert_eq!(m.row(0), vec![QNum::quad(g, 1, -3).unwrap(), QNum::from_int(g, -2), QNum::quad(g, 0, 4).unwrap()]);
        let two = "field Q(sqrt -1)\nrows 1\ncols 2\n1 -3*w\n";
        assert_eq!(parse_matrix(two).unwrap().row(0), vec![QNum::one(g), QNum::quad(g, 0, -3).unwrap()]);
    }

    #[test]
    fn error_kinds_and_positions() {
        assert_eq!(kind(parse_matrix("field Q(sqrt 4)\nrows 1\ncols 1\n1\n")), (ParseErrorKind::NotSquarefree, 1, 7));
        assert_eq!(kind(parse_matrix("field R\nrows 1\ncols 1\n1\n")).0, ParseErrorKind::MalformedHeader);
        assert_eq!(kind(parse_matrix("rows 1\n1\n")).0, ParseErrorKind::MalformedHeader);
        assert_eq!(kind(parse_matrix("rows 2\ncols 2\n1 2\n3\n")), (ParseErrorKind::EntryCount, 4, 1));
        assert_eq!(kind(parse_matrix("rows 1\ncols 2\n1 2 3\n")), (ParseErrorKind::EntryCount, 3, 5));
        assert_eq!(kind(parse_matrix("rows 1\ncols 2\n1  x/2\n")), (ParseErrorKind::BadEntry, 3, 4));
        assert_eq!(kind(parse_matrix("rows 1\ncols 1\n1\nrows 2\n")).0, ParseErrorKind::MalformedHeader);
        assert_eq!(kind(parse_matrix("rows 1\nrows 1\ncols 1\n1\n")).0, ParseErrorKind::MalformedHeader);
    }

    #[test]
    fn comments_and_layout() {
        let m = parse_matrix("rows 2 # two\ncols 2\n1 2 3 # trailing\n4\n").unwrap();
        assert_eq!(m, QMatrix::from_ints(FieldCtx::rational(), 2, 2, &[1, 2, 3, 4]).unwrap());
    }

    #[test]
    fn integer_files() {
        let m = parse_int_matrix("1 1 1\n1 2 3\n").unwrap();
        assert_eq!((m.rows(), m.cols()), (2, 3));
        assert_eq!(parse_int_matrix(&write_int_matrix(&m)).unwrap(), m);
        assert!(matches!(parse_int_matrix("1 2\n3\n"), Err(Error::Parse { kind: ParseErrorKind::EntryCount, line: 2, .. })));
        assert!(matches!(parse_int_matrix("1 2/3\n"), Err(Error::Parse { kind: ParseErrorKind::BadEntry, .. })));
        assert!(parse_int_matrix("field Q(sqrt 2)\n1 2\n").is_err());
        let h = parse_int_matrix("field Q\nrows 2\ncols 2\n1 2 3 4\n").unwrap();
        assert_eq!(h.entries(), &[1, 2, 3, 4]);
    }

    fn arb_rational() -> impl Strategy<Value = BigRational> {
        (-50i64..50, 1i64..20).prop_map(|(p, q)| BigRational::new(p.into(), q.into()))
    }

    proptest! {
        #[test]
        fn round_trip(d in prop::sample::select(vec![0i64, -1, 2, 3, -5, 5, 13]), rows in 1usize..4, cols in 1usize..4,
                      raw in prop::collection::vec((arb_rational(), arb_rational()), 9)) {
            let ctx = if d == 0 { FieldCtx::rational() } else { FieldCtx::quadratic(d).unwrap() };
            let data: Vec<QNum> = raw.into_iter().take(rows * cols).map(|(a, b)| {
                let b = if ctx.is_rational() { BigRational::zero() } else { b };
                QNum::new(ctx, a, b).unwrap()
            }).collect();
            let m = QMatrix::new(ctx, rows, cols, data).unwrap();
            prop_assert_eq!(parse_matrix(&write_matrix(&m)).unwrap(), m);
        }
    }
}
