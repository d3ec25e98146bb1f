//! JSON file formats for solutions, general algebras, and solution lists.
//!
//! A solution file holds `n`, optional display `labels`, and the two tables
//! with `sigma[x][y] = σ_x(y)` and `tau[x][y] = τ_y(x)` — rows indexed by the
//! first argument of the binary map, exactly as tables are printed. An
//! algebra file holds a list of named ops, each tagged with the side it is
//! curried on. Solution lists are plain JSON arrays of solution objects.

use serde::{Deserialize, Serialize};

use crate::algebra::{BinaryAlgebra, CurrySide, OpTable};
use crate::error::{Error, Result};
use crate::solution::Solution;

/// On-disk form of a solution `(X, σ, τ)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolutionFile {
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    pub sigma: Vec<Vec<usize>>,
    pub tau: Vec<Vec<usize>>,
}

impl SolutionFile {
    pub fn from_solution(s: &Solution) -> Self {
        SolutionFile {
            n: s.n(),
            labels: s.labels().map(|l| l.to_vec()),
            sigma: s.sigma_rows(),
            tau: s.tau_rows(),
        }
    }

    pub fn to_solution(&self) -> Result<Solution> {
        for (name, rows) in [("sigma", &self.sigma), ("tau", &self.tau)] {
            if rows.len() != self.n {
                return Err(Error::InvalidTable(format!(
                    "{name}: {} rows, expected {}",
                    rows.len(),
                    self.n
                )));
            }
        }
        let s = Solution::from_rows(&self.sigma, &self.tau)?;
        match &self.labels {
            Some(labels) => s.with_labels(labels.clone()),
            None => Ok(s),
        }
    }
}

/// On-disk form of one operation of an algebra file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpFile {
    pub name: String,
    pub curry: CurrySide,
    pub table: Vec<Vec<usize>>,
}

/// On-disk form of a general algebra `(X, Γ)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraFile {
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    pub ops: Vec<OpFile>,
}

impl AlgebraFile {
    pub fn from_algebra(a: &BinaryAlgebra) -> Self {
        AlgebraFile {
            n: a.n(),
            labels: None,
            ops: a
                .ops()
                .iter()
                .map(|op| OpFile {
                    name: op.name().to_string(),
                    curry: op.curry(),
                    table: op.rows(),
                })
                .collect(),
        }
    }

    pub fn to_algebra(&self) -> Result<BinaryAlgebra> {
        let ops = self
            .ops
            .iter()
            .map(|op| {
                if op.table.len() != self.n {
                    return Err(Error::InvalidTable(format!(
                        "op `{}`: {} rows, expected {}",
                        op.name,
                        op.table.len(),
                        self.n
                    )));
                }
                OpTable::from_rows(op.name.clone(), op.curry, &op.table)
            })
            .collect::<Result<Vec<_>>>()?;
        BinaryAlgebra::new(self.n, ops)
    }
}

/// Either input shape, detected by its fields.
#[derive(Debug, Clone)]
pub enum InputFile {
    Solution(SolutionFile),
    Algebra(AlgebraFile),
}

impl InputFile {
    /// Parses JSON text, deciding the shape by the presence of `sigma`/`tau`
    /// versus `ops`.
    pub fn parse(text: &str) -> Result<InputFile> {
        let value: serde_json::Value = serde_json::from_str(text)
            .map_err(|e| Error::InvalidTable(format!("not valid JSON: {e}")))?;
        let obj = value
            .as_object()
            .ok_or_else(|| Error::InvalidTable("expected a JSON object".into()))?;
        if obj.contains_key("sigma") || obj.contains_key("tau") {
            let f: SolutionFile = serde_json::from_value(value.clone())
                .map_err(|e| Error::InvalidTable(format!("bad solution file: {e}")))?;
            f.to_solution()?;
            Ok(InputFile::Solution(f))
        } else if obj.contains_key("ops") {
            let f: AlgebraFile = serde_json::from_value(value.clone())
                .map_err(|e| Error::InvalidTable(format!("bad algebra file: {e}")))?;
            f.to_algebra()?;
            Ok(InputFile::Algebra(f))
        } else {
            Err(Error::InvalidTable(
                "expected either `sigma`/`tau` or `ops` fields".into(),
            ))
        }
    }

    /// The underlying algebra: a solution file converts via its two ops.
    pub fn to_algebra(&self) -> Result<BinaryAlgebra> {
        match self {
            InputFile::Solution(f) => Ok(f.to_solution()?.as_algebra()),
            InputFile::Algebra(f) => f.to_algebra(),
        }
    }

    pub fn as_solution(&self) -> Option<Result<Solution>> {
        match self {
            InputFile::Solution(f) => Some(f.to_solution()),
            InputFile::Algebra(_) => None,
        }
    }

    pub fn labels(&self) -> Option<&[String]> {
        match self {
            InputFile::Solution(f) => f.labels.as_deref(),
            InputFile::Algebra(f) => f.labels.as_deref(),
        }
    }
}

/// Pretty JSON with leaf arrays (table rows, label lists) collapsed onto one
/// line, plus a trailing newline; the single serialization used for all
/// files so round-trips are byte-exact.
pub fn to_json_string<T: Serialize>(value: &T) -> String {
    let pretty = serde_json::to_string_pretty(value).expect("serializable");
    let mut out = compact_leaf_arrays(&pretty);
    out.push('\n');
    out
}

/// Rewrites arrays that contain no nested arrays or objects onto a single
/// line. String contents are left untouched.
fn compact_leaf_arrays(text: &str) -> String {
    let bytes = text.as_bytes();
    let mut out = String::with_capacity(text.len());
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            '"' => {
                let end = skip_string(bytes, i);
                out.push_str(&text[i..end]);
                i = end;
            }
            '[' => {
                if let Some(end) = leaf_array_end(bytes, i) {
                    out.push('[');
                    let mut last_was_space = true;
                    let mut j = i + 1;
                    while j < end - 1 {
                        let cj = bytes[j] as char;
                        if cj == '"' {
                            let send = skip_string(bytes, j);
                            out.push_str(&text[j..send]);
                            j = send;
                            last_was_space = false;
                            continue;
                        }
                        if cj.is_whitespace() {
                            if !last_was_space {
                                out.push(' ');
                                last_was_space = true;
                            }
                        } else {
                            out.push(cj);
                            last_was_space = false;
                        }
                        j += 1;
                    }
                    if out.ends_with(' ') {
                        out.pop();
                    }
                    out.push(']');
                    i = end;
                } else {
                    out.push('[');
                    i += 1;
                }
            }
            _ => {
                out.push(c);
                i += 1;
            }
        }
    }
    out
}

/// Index just past the closing quote of the string starting at `start`.
fn skip_string(bytes: &[u8], start: usize) -> usize {
    let mut i = start + 1;
    while i < bytes.len() {
        match bytes[i] {
            b'\\' => i += 2,
            b'"' => return i + 1,
            _ => i += 1,
        }
    }
    bytes.len()
}

/// If the array starting at `start` contains no nested `[` or `{` (outside
/// strings), returns the index just past its `]`.
fn leaf_array_end(bytes: &[u8], start: usize) -> Option<usize> {
    let mut i = start + 1;
    while i < bytes.len() {
        match bytes[i] {
            b'"' => i = skip_string(bytes, i),
            b'[' | b'{' => return None,
            b']' => return Some(i + 1),
            _ => i += 1,
        }
    }
    None
}

pub fn write_solution_list(solutions: &[Solution]) -> String {
    let files: Vec<SolutionFile> = solutions.iter().map(SolutionFile::from_solution).collect();
    to_json_string(&files)
}

pub fn read_solution_list(text: &str) -> Result<Vec<Solution>> {
    let files: Vec<SolutionFile> = serde_json::from_str(text)
        .map_err(|e| Error::InvalidTable(format!("bad solution list: {e}")))?;
    files.iter().map(SolutionFile::to_solution).collect()
}
