//! Plain-text model format.
//!
//! ```text
//! OFSMODEL v1 <algo> <d> <B|-> <key=value>...
//! <idx> <weight> [<sigma>]
//! ```
//!
//! Second-order models write a line, with the covariance, for every
//! coordinate whose mean is nonzero or whose covariance is below 1.
//! First-order models write one line per nonzero weight. Floats are written
//! in shortest round-trip form, so a reloaded model predicts identically.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::sparse::DenseVector;

use super::{Algorithm, ArowModel, FirstOrderModel, Model, OnlineLearner, SofsModel};

const MAGIC: &str = "OFSMODEL";
const VERSION: &str = "v1";

impl Model {
    pub fn save<W: Write>(&self, mut out: W) -> Result<()> {
        let algo = self.algorithm();
        let dim = self.weights().len();
        let budget = self.budget().map_or_else(|| "-".to_string(), |b| b.to_string());
        write!(out, "{MAGIC} {VERSION} {algo} {dim} {budget}")?;
        match self {
            Model::Sofs(m) => write!(out, " gamma={:?}", m.gamma())?,
            Model::Arow(m) => write!(out, " gamma={:?}", m.gamma())?,
            Model::FirstOrder(m) => {
                write!(out, " eta={:?}", m.eta())?;
                if algo.uses_lambda() {
                    write!(out, " lambda={:?}", m.lambda())?;
                }
                if algo == Algorithm::Ogd {
                    write!(out, " t={}", m.steps())?;
                }
            }
        }
        writeln!(out)?;

        match self {
            Model::Sofs(m) => write_second_order(&mut out, m.mean(), m.covariance())?,
            Model::Arow(m) => write_second_order(&mut out, m.mean(), m.covariance())?,
            Model::FirstOrder(m) => {
                for (j, &w) in m.weights().as_slice().iter().enumerate() {
                    if w != 0.0 {
                        writeln!(out, "{j} {w:?}")?;
                    }
                }
            }
        }
        out.flush()?;
        Ok(())
    }

    pub fn save_to_path(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let file = File::create(path).map_err(|e| Error::file(path, e))?;
        self.save(BufWriter::new(file))
    }

    pub fn load<R: BufRead>(input: R) -> Result<Model> {
        let mut lines = input.lines();
        let header = match lines.next() {
            Some(line) => line?,
            None => return Err(format_error(1, "empty model file")),
        };
        let header = Header::parse(&header)?;

        let second_order = matches!(header.algo, Algorithm::Sofs | Algorithm::Arow);
        let mut mu = DenseVector::zeros();
        let mut sigma = DenseVector::filled(1.0);
        mu.grow_to(header.dim);
        if second_order {
            sigma.grow_to(header.dim);
        }

        let mut last: Option<usize> = None;
        for (n, line) in lines.enumerate() {
            let line_no = n as u64 + 2;
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let mut fields = line.split_whitespace();
            let idx: usize = parse_field(fields.next(), line_no, "index")?;
            if idx >= header.dim {
                return Err(format_error(
                    line_no,
                    format!("index {idx} outside dimension {}", header.dim),
                ));
            }
            if last.is_some_and(|l| idx <= l) {
                return Err(format_error(line_no, "indices must be strictly increasing"));
            }
            last = Some(idx);
            let weight: f64 = parse_field(fields.next(), line_no, "weight")?;
            mu.set(idx, weight);
            if second_order {
                let s: f64 = parse_field(fields.next(), line_no, "sigma")?;
                if !(s > 0.0 && s <= 1.0) {
                    return Err(format_error(line_no, format!("sigma {s} outside (0, 1]")));
                }
                sigma.set(idx, s);
            }
            if fields.next().is_some() {
                return Err(format_error(line_no, "trailing fields"));
            }
        }

        let hp = header.params;
        let budget = header.budget;
        let model = match header.algo {
            Algorithm::Sofs => Model::Sofs(
                SofsModel::from_parts(mu, sigma, hp.gamma, budget.unwrap_or(0)).map_err(|e| match e {
                    Error::Config(m) => format_error(1, m),
                    other => other,
                })?,
            ),
            Algorithm::Arow => Model::Arow(ArowModel::from_parts(mu, sigma, hp.gamma)),
            Algorithm::Pet => {
                Model::FirstOrder(FirstOrderModel::pet(hp.eta, budget.unwrap_or(0)).restore(mu, 0))
            }
            Algorithm::Fofs => Model::FirstOrder(
                FirstOrderModel::fofs(hp.eta, hp.lambda, budget.unwrap_or(0)).restore(mu, 0),
            ),
            Algorithm::Ogd => Model::FirstOrder(FirstOrderModel::ogd(hp.eta).restore(mu, header.steps)),
        };
        if let Some(b) = budget {
            if model.nnz() > b {
                return Err(format_error(
                    1,
                    format!("{} nonzero weights exceed budget {b}", model.nnz()),
                ));
            }
        }
        Ok(model)
    }

    pub fn load_from_path(path: impl AsRef<Path>) -> Result<Model> {
        let path = path.as_ref();
        let file = File::open(path).map_err(|e| Error::file(path, e))?;
        Model::load(BufReader::new(file))
    }
}

fn write_second_order<W: Write>(out: &mut W, mu: &DenseVector, sigma: &DenseVector) -> Result<()> {
    let len = mu.len().max(sigma.len());
    for j in 0..len {
        let (m, s) = (mu.get(j), sigma.get(j));
        if m != 0.0 || s != 1.0 {
            writeln!(out, "{j} {m:?} {s:?}")?;
        }
    }
    Ok(())
}

struct Header {
    algo: Algorithm,
    dim: usize,
    budget: Option<usize>,
    params: super::Hyperparams,
    steps: u64,
}

impl Header {
    fn parse(line: &str) -> Result<Header> {
        let mut fields = line.split_whitespace();
        if fields.next() != Some(MAGIC) {
            return Err(format_error(1, "missing OFSMODEL header"));
        }
        match fields.next() {
            Some(VERSION) => {}
            other => return Err(format_error(1, format!("unsupported version {other:?}"))),
        }
        let algo: Algorithm = fields
            .next()
            .ok_or_else(|| format_error(1, "missing algorithm"))?
            .parse()
            .map_err(|e: Error| format_error(1, e.to_string()))?;
        let dim: usize = parse_field(fields.next(), 1, "dimension")?;
        let budget = match fields.next() {
            Some("-") => None,
            Some(b) => Some(
                b.parse()
                    .map_err(|_| format_error(1, format!("bad budget {b:?}")))?,
            ),
            None => return Err(format_error(1, "missing budget")),
        };

        let mut params = super::Hyperparams {
            budget,
            ..Default::default()
        };
        let mut steps = 0;
        for kv in fields {
            let (key, value) = kv
                .split_once('=')
                .ok_or_else(|| format_error(1, format!("expected key=value, got {kv:?}")))?;
            let bad = || format_error(1, format!("bad value for {key}: {value:?}"));
            match key {
                "gamma" => params.gamma = value.parse().map_err(|_| bad())?,
                "eta" => params.eta = value.parse().map_err(|_| bad())?,
                "lambda" => params.lambda = value.parse().map_err(|_| bad())?,
                "t" => steps = value.parse().map_err(|_| bad())?,
                _ => return Err(format_error(1, format!("unknown hyperparameter {key:?}"))),
            }
        }
        params
            .validate(algo)
            .map_err(|e| format_error(1, e.to_string()))?;
        Ok(Header {
            algo,
            dim,
            budget,
            params,
            steps,
        })
    }
}

fn parse_field<T: std::str::FromStr>(field: Option<&str>, line: u64, what: &str) -> Result<T> {
    let field = field.ok_or_else(|| format_error(line, format!("missing {what}")))?;
    field
        .parse()
        .map_err(|_| format_error(line, format!("bad {what} {field:?}")))
}

fn format_error(line: u64, message: impl Into<String>) -> Error {
    Error::ModelFormat {
        line,
        message: message.into(),
    }
}
