//! JSON operator files.
//!
//! ```json
//! {
//!   "ground": {"kind": "exact_line"},
//!   "terms": [
//!     {"matrix": [[0, 1], [0, 1]],
//!      "function": {"kind": "poly", "terms": [{"exponents": [0, 0, 0, 0], "coeff": "1"}]}}
//!   ]
//! }
//! ```
//!
//! Exponent vectors run over the variables of `X^(A)` block by block,
//! row-major in `A`; an entry stands for its coefficient times the monomial
//! symmetric function of that exponent vector, so block-wise reorderings of
//! one vector name the same term. A finite ground lists its points as rational strings;
//! table configurations refer to them by 1-based index. Only nonzero
//! coefficients and table values are written, in key order, so equal
//! operators give identical files.

use std::collections::BTreeMap;
use std::fmt;

use curvalg_core::combinatorics::IntMatrix;
use curvalg_core::convolution::ConvOperator;
use curvalg_core::funcspace::{configurations, BlockShape, BlockSymFunction, FinitePoints, Ground, Payload, Poly, Table};
use curvalg_core::Rational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatorFile {
    pub ground: GroundSpec,
    pub terms: Vec<TermSpec>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GroundSpec {
    ExactLine,
    FiniteSet { points: Vec<String> },
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermSpec {
    pub matrix: Vec<Vec<u32>>,
    pub function: FunctionSpec,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FunctionSpec {
    Poly { terms: Vec<Monomial> },
    Table { values: Vec<TableEntry> },
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Monomial {
    pub exponents: Vec<u32>,
    pub coeff: String,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableEntry {
    pub config: Vec<usize>,
    pub value: String,
}

/// Why a file could not be turned into an operator.
#[derive(Debug)]
pub enum FormatError {
    /// Not JSON, or not the operator schema.
    Syntax(String),
    /// Well-formed JSON describing no valid operator.
    Content(String),
}

impl fmt::Display for FormatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FormatError::Syntax(m) => write!(f, "malformed operator file: {m}"),
            FormatError::Content(m) => write!(f, "invalid operator: {m}"),
        }
    }
}

impl std::error::Error for FormatError {}

fn content(m: impl Into<String>) -> FormatError {
    FormatError::Content(m.into())
}

fn rational(s: &str) -> Result<Rational, FormatError> {
    s.trim().parse::<Rational>().map_err(|_| content(format!("not a rational number: {s:?}")))
}

pub fn parse_operator(text: &str) -> Result<ConvOperator, FormatError> {
    let file: OperatorFile = serde_json::from_str(text).map_err(|e| FormatError::Syntax(e.to_string()))?;
    operator_from_file(&file)
}

pub fn operator_from_file(file: &OperatorFile) -> Result<ConvOperator, FormatError> {
    let ground = match &file.ground {
        GroundSpec::ExactLine => Ground::ExactLine,
        GroundSpec::FiniteSet { points } => {
            let pts = points.iter().map(|p| rational(p)).collect::<Result<Vec<_>, _>>()?;
            Ground::FiniteSet(FinitePoints::new(pts).map_err(|e| content(e.to_string()))?)
        }
    };
    let mut op = ConvOperator::zero(ground.clone());
    for (k, term) in file.terms.iter().enumerate() {
        let a = IntMatrix::from_rows(&term.matrix).map_err(|e| content(format!("term {}: {e}", k + 1)))?;
        let shape = BlockShape::of_matrix(&a);
        let f = function_from_spec(&term.function, &shape, &ground).map_err(|e| match e {
            FormatError::Content(m) => content(format!("term {}: {m}", k + 1)),
            other => other,
        })?;
        op.add_term(a, f).map_err(|e| content(format!("term {}: {e}", k + 1)))?;
    }
    Ok(op)
}

fn function_from_spec(spec: &FunctionSpec, shape: &BlockShape, ground: &Ground) -> Result<BlockSymFunction, FormatError> {
    match (spec, ground) {
        (FunctionSpec::Poly { terms }, Ground::ExactLine) => {
            let mut p = Poly::zero();
            for m in terms {
                if m.exponents.len() != shape.d() {
                    return Err(content(format!("{} exponents for {} variables", m.exponents.len(), shape.d())));
                }
                let mono = Poly::monomial(shape, m.exponents.clone(), rational(&m.coeff)?).map_err(|e| content(e.to_string()))?;
                p = p.add(&mono);
            }
            Ok(BlockSymFunction::from_poly(shape.clone(), p))
        }
        (FunctionSpec::Table { values }, Ground::FiniteSet(points)) => {
            let allowed = configurations(shape, points.len());
            let mut given = BTreeMap::new();
            for e in values {
                if e.config.len() != shape.d() || e.config.iter().any(|&i| i == 0 || i > points.len()) {
                    return Err(content(format!("configuration {:?} does not fit {} points", e.config, points.len())));
                }
                let c: Vec<u16> = e.config.iter().map(|&i| (i - 1) as u16).collect();
                if allowed.binary_search(&c).is_err() {
                    return Err(content(format!("configuration {:?} is not sorted inside its blocks", e.config)));
                }
                if given.insert(c, rational(&e.value)?).is_some() {
                    return Err(content(format!("configuration {:?} listed twice", e.config)));
                }
            }
            let table = Table::from_fn(shape, points, |c| given.get(c).cloned().unwrap_or_else(Rational::zero));
            Ok(BlockSymFunction::from_table(shape.clone(), points.clone(), table))
        }
        (FunctionSpec::Poly { .. }, _) => Err(content("polynomial function on a finite ground")),
        (FunctionSpec::Table { .. }, _) => Err(content("value table on the exact line")),
    }
}

pub fn operator_to_file(op: &ConvOperator) -> Result<OperatorFile, FormatError> {
    let ground = match op.ground() {
        Ground::ExactLine => GroundSpec::ExactLine,
        Ground::FiniteSet(points) => GroundSpec::FiniteSet { points: points.points().iter().map(|p| p.to_string()).collect() },
        Ground::TorusSampled { .. } => return Err(content("operators on the torus have no file form")),
    };
    let mut terms = Vec::new();
    for (a, f) in op.terms() {
        let function = match f.payload() {
            Payload::Poly(p) => FunctionSpec::Poly {
                terms: p
                    .terms()
                    .iter()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(k, c)| Monomial { exponents: k.clone(), coeff: c.to_string() })
                    .collect(),
            },
            Payload::Table(t) => FunctionSpec::Table {
                values: t
                    .values()
                    .iter()
                    .filter(|(_, v)| !v.is_zero())
                    .map(|(c, v)| TableEntry { config: c.iter().map(|&i| i as usize + 1).collect(), value: v.to_string() })
                    .collect(),
            },
            Payload::Sampled(_) => return Err(content("sampled functions have no file form")),
        };
        terms.push(TermSpec { matrix: a.rows().map(<[u32]>::to_vec).collect(), function });
    }
    Ok(OperatorFile { ground, terms })
}

/// Canonical text of an operator: pretty JSON with a trailing newline.
pub fn write_operator(op: &ConvOperator) -> Result<String, FormatError> {
    let mut s = serde_json::to_string_pretty(&operator_to_file(op)?).expect("plain data serializes");
    s.push('\n');
    Ok(s)
}
