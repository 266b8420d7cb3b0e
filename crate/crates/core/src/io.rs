//! Line-oriented text formats for codes, matrices and Hamming instances.
//!
//! ```text
//! covermetric v1
//! field 2 3 1 0 1 1      # p e, then the modulus high to low when e > 1
//! dims 2 2 1             # m n k
//! 1 0                    # k blocks of m rows
//! 0 1
//! received               # optional, m rows
//! 1 1
//! 0 1
//! radius 1               # optional
//! ```
//!
//! `#` starts a comment and blank lines are ignored. The writers emit one
//! canonical form, so reading and re-writing a file is byte stable.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};
use crate::matspace::{Mat, MatrixCode};
use crate::reduction::{HammingInstance, ReducedInstance};

pub const CODE_HEADER: &str = "covermetric v1";
pub const MATRIX_HEADER: &str = "matrix v1";
pub const HAMMING_HEADER: &str = "hamming v1";

struct Lines<'a> {
    items: Vec<(usize, Vec<&'a str>)>,
    pos: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Lines<'a> {
        let items = text
            .lines()
            .enumerate()
            .filter_map(|(i, l)| {
                let body = l.split('#').next().unwrap_or("");
                let toks: Vec<&str> = body.split_whitespace().collect();
                (!toks.is_empty()).then_some((i + 1, toks))
            })
            .collect();
        Lines { items, pos: 0 }
    }

    fn last_line(&self) -> usize {
        self.items.last().map_or(0, |x| x.0)
    }

    fn next(&mut self, what: &str) -> Result<(usize, Vec<&'a str>)> {
        let item = self.items.get(self.pos).cloned().ok_or_else(|| Error::Parse {
            line: self.last_line() + 1,
            msg: format!("unexpected end of input, expected {what}"),
        })?;
        self.pos += 1;
        Ok(item)
    }

    fn peek_keyword(&self) -> Option<&'a str> {
        self.items.get(self.pos).map(|x| x.1[0])
    }

    fn finish(&self) -> Result<()> {
        match self.items.get(self.pos) {
            None => Ok(()),
            Some((line, _)) => Err(Error::Parse {
                line: *line,
                msg: "trailing content".into(),
            }),
        }
    }
}

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn parse_num<T: std::str::FromStr>(line: usize, tok: &str) -> Result<T> {
    tok.parse().map_err(|_| perr(line, format!("expected a number, got '{tok}'")))
}

fn expect_keyword<'a>(lines: &mut Lines<'a>, key: &str, args: usize) -> Result<(usize, Vec<&'a str>)> {
    let (line, toks) = lines.next(key)?;
    if toks[0] != key {
        return Err(perr(line, format!("expected '{key}', got '{}'", toks[0])));
    }
    if toks.len() != args + 1 {
        return Err(perr(line, format!("'{key}' takes {args} values")));
    }
    Ok((line, toks))
}

fn expect_header(lines: &mut Lines, header: &str) -> Result<()> {
    let (line, toks) = lines.next("header")?;
    if toks.join(" ") != header {
        return Err(perr(line, format!("expected header '{header}'")));
    }
    Ok(())
}

fn parse_field(lines: &mut Lines) -> Result<Field> {
    let (line, toks) = lines.next("field")?;
    if toks[0] != "field" || toks.len() < 3 {
        return Err(perr(line, "expected 'field p e [modulus]'"));
    }
    let p: u32 = parse_num(line, toks[1])?;
    let e: u32 = parse_num(line, toks[2])?;
    let field = Field::new(p, e).map_err(|err| perr(line, err.to_string()))?;
    let coeffs = &toks[3..];
    if e == 1 {
        if !coeffs.is_empty() {
            return Err(perr(line, "prime fields take no modulus"));
        }
    } else {
        let given: Vec<u32> = coeffs.iter().map(|t| parse_num(line, t)).collect::<Result<_>>()?;
        if given != field.modulus() {
            return Err(perr(
                line,
                format!("modulus {given:?} differs from the canonical {:?}", field.modulus()),
            ));
        }
    }
    Ok(field)
}

fn parse_row(lines: &mut Lines, field: &Field, len: usize) -> Result<Vec<FieldElement>> {
    let (line, toks) = lines.next("matrix row")?;
    if toks.len() != len {
        return Err(perr(line, format!("expected {len} entries, got {}", toks.len())));
    }
    toks.iter()
        .map(|t| {
            let v: u64 = parse_num(line, t)?;
            field.element(v).map_err(|e| perr(line, e.to_string()))
        })
        .collect()
}

fn parse_matrix(lines: &mut Lines, field: &Field, m: usize, n: usize) -> Result<Mat> {
    let mut entries = Vec::with_capacity(m * n);
    for _ in 0..m {
        entries.extend(parse_row(lines, field, n)?);
    }
    Mat::from_entries(field, m, n, entries)
}

fn write_field(out: &mut String, field: &Field) {
    write!(out, "field {} {}", field.characteristic(), field.degree()).unwrap();
    if field.degree() > 1 {
        for c in field.modulus() {
            write!(out, " {c}").unwrap();
        }
    }
    out.push('\n');
}

fn write_row(out: &mut String, row: &[FieldElement]) {
    let line: Vec<String> = row.iter().map(|x| x.0.to_string()).collect();
    out.push_str(&line.join(" "));
    out.push('\n');
}

fn write_matrix(out: &mut String, a: &Mat) {
    for i in 0..a.rows() {
        write_row(out, a.row(i));
    }
}

/// Generators with an optional received matrix and radius. Generators are
/// kept as read, so dependent lists (as produced by reductions) round-trip;
/// [`InstanceFile::code`] checks independence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InstanceFile {
    pub field: Field,
    pub m: usize,
    pub n: usize,
    pub generators: Vec<Mat>,
    pub received: Option<Mat>,
    pub radius: Option<usize>,
}

impl InstanceFile {
    pub fn from_code(code: &MatrixCode, received: Option<Mat>, radius: Option<usize>) -> InstanceFile {
        InstanceFile {
            field: code.field().clone(),
            m: code.m(),
            n: code.n(),
            generators: code.generators().to_vec(),
            received,
            radius,
        }
    }

    pub fn from_reduced(r: &ReducedInstance) -> InstanceFile {
        InstanceFile {
            field: r.field.clone(),
            m: r.m(),
            n: r.n(),
            generators: r.generators.clone(),
            received: r.received.clone(),
            radius: Some(r.t),
        }
    }

    pub fn code(&self) -> Result<MatrixCode> {
        MatrixCode::new(&self.field, self.m, self.n, self.generators.clone())
    }
}

pub fn parse_instance_file(text: &str) -> Result<InstanceFile> {
    let mut lines = Lines::new(text);
    expect_header(&mut lines, CODE_HEADER)?;
    let field = parse_field(&mut lines)?;
    let (line, toks) = expect_keyword(&mut lines, "dims", 3)?;
    let m: usize = parse_num(line, toks[1])?;
    let n: usize = parse_num(line, toks[2])?;
    let k: usize = parse_num(line, toks[3])?;
    if m == 0 || n == 0 {
        return Err(perr(line, "dimensions must be positive"));
    }
    let generators = (0..k)
        .map(|_| parse_matrix(&mut lines, &field, m, n))
        .collect::<Result<Vec<_>>>()?;
    let mut received = None;
    if lines.peek_keyword() == Some("received") {
        expect_keyword(&mut lines, "received", 0)?;
        received = Some(parse_matrix(&mut lines, &field, m, n)?);
    }
    let mut radius = None;
    if lines.peek_keyword() == Some("radius") {
        let (line, toks) = expect_keyword(&mut lines, "radius", 1)?;
        let t: usize = parse_num(line, toks[1])?;
        if t > m.min(n) {
            return Err(perr(line, format!("radius {t} exceeds min(m, n)")));
        }
        radius = Some(t);
    }
    lines.finish()?;
    Ok(InstanceFile {
        field,
        m,
        n,
        generators,
        received,
        radius,
    })
}

pub fn write_instance_file(file: &InstanceFile) -> String {
    let mut out = format!("{CODE_HEADER}\n");
    write_field(&mut out, &file.field);
    writeln!(out, "dims {} {} {}", file.m, file.n, file.generators.len()).unwrap();
    for g in &file.generators {
        write_matrix(&mut out, g);
    }
    if let Some(r) = &file.received {
        out.push_str("received\n");
        write_matrix(&mut out, r);
    }
    if let Some(t) = file.radius {
        writeln!(out, "radius {t}").unwrap();
    }
    out
}

pub fn parse_matrix_file(text: &str) -> Result<Mat> {
    let mut lines = Lines::new(text);
    expect_header(&mut lines, MATRIX_HEADER)?;
    let field = parse_field(&mut lines)?;
    let (line, toks) = expect_keyword(&mut lines, "dims", 2)?;
    let m: usize = parse_num(line, toks[1])?;
    let n: usize = parse_num(line, toks[2])?;
    if m == 0 || n == 0 {
        return Err(perr(line, "dimensions must be positive"));
    }
    let a = parse_matrix(&mut lines, &field, m, n)?;
    lines.finish()?;
    Ok(a)
}

pub fn write_matrix_file(a: &Mat) -> String {
    let mut out = format!("{MATRIX_HEADER}\n");
    write_field(&mut out, a.field());
    writeln!(out, "dims {} {}", a.rows(), a.cols()).unwrap();
    write_matrix(&mut out, a);
    out
}

pub fn parse_hamming_file(text: &str) -> Result<HammingInstance> {
    let mut lines = Lines::new(text);
    expect_header(&mut lines, HAMMING_HEADER)?;
    let field = parse_field(&mut lines)?;
    let (line, toks) = expect_keyword(&mut lines, "dims", 3)?;
    let k: usize = parse_num(line, toks[1])?;
    let n: usize = parse_num(line, toks[2])?;
    let t: usize = parse_num(line, toks[3])?;
    if n == 0 {
        return Err(perr(line, "length must be positive"));
    }
    let generators = (0..k)
        .map(|_| parse_row(&mut lines, &field, n))
        .collect::<Result<Vec<_>>>()?;
    let mut received = None;
    if lines.peek_keyword() == Some("received") {
        expect_keyword(&mut lines, "received", 0)?;
        received = Some(parse_row(&mut lines, &field, n)?);
    }
    lines.finish()?;
    HammingInstance::new(&field, n, generators, received, t).map_err(|e| perr(line, e.to_string()))
}

pub fn write_hamming_file(h: &HammingInstance) -> String {
    let mut out = format!("{HAMMING_HEADER}\n");
    write_field(&mut out, &h.field);
    writeln!(out, "dims {} {} {}", h.k(), h.n, h.t).unwrap();
    for g in &h.generators {
        write_row(&mut out, g);
    }
    if let Some(r) = &h.received {
        out.push_str("received\n");
        write_row(&mut out, r);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::Seed;

    #[test]
    fn code_file_round_trip() {
        let f = Field::new(2, 3).unwrap();
        let mut rng = Seed(3).rng();
        let code = MatrixCode::random(&f, 2, 3, 2, &mut rng).unwrap();
        let r = Mat::random(&f, 2, 3, &mut rng);
        let file = InstanceFile::from_code(&code, Some(r), Some(1));
        let text = write_instance_file(&file);
        assert!(text.contains("field 2 3 1 0 1 1\n"));
        let back = parse_instance_file(&text).unwrap();
        assert_eq!(back, file);
        assert_eq!(write_instance_file(&back), text);
        assert_eq!(back.code().unwrap().generators(), code.generators());
    }

    #[test]
    fn comments_and_blank_lines() {
        let text = "# a code\ncovermetric v1\n\nfield 3 1\ndims 1 2 1  # one generator\n1 2\n";
        let file = parse_instance_file(text).unwrap();
        assert_eq!(file.code().unwrap().k(), 1);
        assert!(file.received.is_none() && file.radius.is_none());
    }

    #[test]
    fn parse_errors_report_lines() {
        let bad_entry = "covermetric v1\nfield 2 1\ndims 1 2 1\n1 2\n";
        assert!(matches!(parse_instance_file(bad_entry), Err(Error::Parse { line: 4, .. })));
        let bad_modulus = "matrix v1\nfield 2 2 1 0 1\ndims 1 1\n1\n";
        assert!(matches!(parse_matrix_file(bad_modulus), Err(Error::Parse { line: 2, .. })));
        let short = "matrix v1\nfield 2 1\ndims 2 2\n1 0\n";
        assert!(matches!(parse_matrix_file(short), Err(Error::Parse { .. })));
        let trailing = "matrix v1\nfield 2 1\ndims 1 1\n1\n0\n";
        assert!(matches!(parse_matrix_file(trailing), Err(Error::Parse { line: 5, .. })));
        let dependent = "covermetric v1\nfield 2 1\ndims 1 1 2\n1\n1\n";
        let file = parse_instance_file(dependent).unwrap();
        assert!(matches!(file.code(), Err(Error::DependentGenerators)));
        assert!(matches!(parse_matrix_file("matrix v2\n"), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn hamming_round_trip() {
        let f = Field::new(3, 1).unwrap();
        let h = HammingInstance::random(&f, 3, 5, 2, true, &mut Seed(1).rng()).unwrap();
        let text = write_hamming_file(&h);
        let back = parse_hamming_file(&text).unwrap();
        assert_eq!(back, h);
        assert_eq!(write_hamming_file(&back), text);
    }

    #[test]
    fn matrix_round_trip() {
        let f = Field::new(5, 1).unwrap();
        let a = Mat::random(&f, 3, 4, &mut Seed(2).rng());
        assert_eq!(parse_matrix_file(&write_matrix_file(&a)).unwrap(), a);
    }
}
