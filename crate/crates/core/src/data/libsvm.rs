//! libsvm / svmlight text format.
//!
//! ```text
//! <label> <idx>:<value> <idx>:<value> ... [# comment]
//! ```
//!
//! Labels `+1`/`1` map to the positive class, `-1` and `0` to the negative
//! class. Indices are 1-based on disk, strictly ascending, and become 0-based
//! in memory. Zero values are dropped. Files ending in `.gz` are read and
//! written through gzip.

use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use flate2::read::MultiGzDecoder;
use flate2::write::GzEncoder;
use flate2::Compression;

use crate::error::{Error, Result};
use crate::sparse::{Label, SparseExample};

fn parse_error(line: u64, token: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        token,
        message: message.into(),
    }
}

fn parse_label(token: &str, line: u64) -> Result<Label> {
    match token.parse::<f64>() {
        Ok(1.0) => Ok(Label::Positive),
        Ok(v) if v == -1.0 || v == 0.0 => Ok(Label::Negative),
        _ => Err(parse_error(line, 1, format!("unknown label {token:?}"))),
    }
}

/// Parses one data line. `line_no` is only used for error reporting.
pub fn parse_libsvm_line(line: &str, line_no: u64) -> Result<SparseExample> {
    let data = line.split('#').next().unwrap_or("");
    let mut tokens = data.split_ascii_whitespace();
    let label = match tokens.next() {
        Some(t) => parse_label(t, line_no)?,
        None => return Err(parse_error(line_no, 1, "missing label")),
    };

    let mut indices = Vec::new();
    let mut values = Vec::new();
    let mut prev: u64 = 0;
    for (k, token) in tokens.enumerate() {
        let pos = k + 2;
        let (idx, value) = token
            .split_once(':')
            .ok_or_else(|| parse_error(line_no, pos, format!("expected idx:value, got {token:?}")))?;
        let idx: u64 = idx
            .parse()
            .map_err(|_| parse_error(line_no, pos, format!("bad feature index {idx:?}")))?;
        if idx == 0 {
            return Err(parse_error(line_no, pos, "feature indices are 1-based"));
        }
        if idx <= prev {
            return Err(parse_error(
                line_no,
                pos,
                format!("feature index {idx} not above {prev}"),
            ));
        }
        if idx > u32::MAX as u64 + 1 {
            return Err(parse_error(
                line_no,
                pos,
                format!("feature index {idx} too large"),
            ));
        }
        prev = idx;
        let value: f64 = value
            .parse()
            .map_err(|_| parse_error(line_no, pos, format!("bad feature value {value:?}")))?;
        if !value.is_finite() {
            return Err(parse_error(
                line_no,
                pos,
                format!("non-finite feature value {value}"),
            ));
        }
        if value != 0.0 {
            indices.push((idx - 1) as u32);
            values.push(value);
        }
    }
    Ok(SparseExample::from_parts_unchecked(label, indices, values))
}

/// Streams examples from a reader, skipping blank and comment-only lines.
pub struct LibsvmReader<R> {
    lines: io::Lines<R>,
    line_no: u64,
    failed: bool,
}

impl<R: BufRead> LibsvmReader<R> {
    pub fn new(reader: R) -> Self {
        LibsvmReader {
            lines: reader.lines(),
            line_no: 0,
            failed: false,
        }
    }
}

impl<R: BufRead> Iterator for LibsvmReader<R> {
    type Item = Result<SparseExample>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.failed {
            return None;
        }
        loop {
            let line = match self.lines.next()? {
                Ok(line) => line,
                Err(e) => {
                    self.failed = true;
                    return Some(Err(e.into()));
                }
            };
            self.line_no += 1;
            let trimmed = line.trim_start();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let parsed = parse_libsvm_line(&line, self.line_no);
            self.failed = parsed.is_err();
            return Some(parsed);
        }
    }
}

fn is_gzip(path: &Path) -> bool {
    path.extension().is_some_and(|e| e.eq_ignore_ascii_case("gz"))
}

/// Opens a libsvm file, decompressing `.gz` files on the fly.
pub fn open_libsvm(path: impl AsRef<Path>) -> Result<LibsvmReader<Box<dyn BufRead + Send>>> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::file(path, e))?;
    let reader: Box<dyn BufRead + Send> = if is_gzip(path) {
        Box::new(BufReader::with_capacity(1 << 16, MultiGzDecoder::new(file)))
    } else {
        Box::new(BufReader::with_capacity(1 << 16, file))
    };
    Ok(LibsvmReader::new(reader))
}

pub fn write_libsvm_line<W: Write>(out: &mut W, ex: &SparseExample) -> io::Result<()> {
    write!(out, "{}", ex.label())?;
    for (j, v) in ex.iter() {
        write!(out, " {}:{v:?}", j + 1)?;
    }
    writeln!(out)
}

/// Writes examples to `path`, gzip-compressed if it ends in `.gz`. Returns the
/// number of examples written.
pub fn write_libsvm<I>(path: impl AsRef<Path>, examples: I) -> Result<usize>
where
    I: IntoIterator<Item = SparseExample>,
{
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::file(path, e))?;
    let mut out: Box<dyn Write> = if is_gzip(path) {
        Box::new(BufWriter::new(GzEncoder::new(file, Compression::default())))
    } else {
        Box::new(BufWriter::new(file))
    };
    let mut n = 0;
    for ex in examples {
        write_libsvm_line(&mut out, &ex)?;
        n += 1;
    }
    out.flush()?;
    drop(out);
    Ok(n)
}
