//! JSON form of a [`Problem`]:
//!
//! ```json
//! {"n": 2,
//!  "functions": [{"kind": "affine", "a": [1.0, 0.0], "b": -1.0},
//!                {"kind": "quadratic", "U": [[1.0, 0.0], [0.0, 1.0]], "a": [0.0, 0.0], "b": -4.0}],
//!  "box": {"lower": [-1.0, -1.0], "upper": [1.0, 1.0]}}
//! ```
//!
//! When `box` is present its `2n` affine functions must also appear in
//! `functions`. Numbers are written in shortest round-trip decimal form.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{CfpError, Result};
use crate::function::{ConstraintFunction, Matrix, Vector};
use crate::problem::{BoxBounds, Problem};

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum FunctionJson {
    Affine {
        a: Vec<f64>,
        b: f64,
    },
    Quadratic {
        #[serde(rename = "U")]
        u: Vec<Vec<f64>>,
        a: Vec<f64>,
        b: f64,
    },
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BoxJson {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProblemJson {
    n: usize,
    functions: Vec<FunctionJson>,
    #[serde(rename = "box", default, skip_serializing_if = "Option::is_none")]
    bounds: Option<BoxJson>,
}

fn schema(field: impl Into<String>, err: impl std::fmt::Display) -> CfpError {
    CfpError::Schema {
        field: field.into(),
        message: err.to_string(),
    }
}

fn vector(field: &str, n: usize, xs: Vec<f64>) -> Result<Vector> {
    if xs.len() != n {
        return Err(schema(field, format!("expected {n} entries, found {}", xs.len())));
    }
    Ok(Vector::from_vec(xs))
}

pub fn problem_to_json(problem: &Problem) -> Result<String> {
    let functions = problem
        .functions()
        .iter()
        .enumerate()
        .map(|(i, f)| match f {
            ConstraintFunction::Affine { a, b } => Ok(FunctionJson::Affine {
                a: a.iter().copied().collect(),
                b: *b,
            }),
            ConstraintFunction::Quadratic { u, a, b } => Ok(FunctionJson::Quadratic {
                u: u.row_iter().map(|r| r.iter().copied().collect()).collect(),
                a: a.iter().copied().collect(),
                b: *b,
            }),
            ConstraintFunction::Custom(_) => Err(CfpError::Unsupported(format!(
                "function {i} is a custom oracle and cannot be serialized"
            ))),
        })
        .collect::<Result<Vec<_>>>()?;
    let doc = ProblemJson {
        n: problem.dimension(),
        functions,
        bounds: problem.bounds().map(|b| BoxJson {
            lower: b.lower().iter().copied().collect(),
            upper: b.upper().iter().copied().collect(),
        }),
    };
    serde_json::to_string_pretty(&doc).map_err(|e| CfpError::Io(e.to_string()))
}

pub fn problem_from_json(text: &str) -> Result<Problem> {
    let doc: ProblemJson = serde_json::from_str(text).map_err(|e| schema("document", e))?;
    let n = doc.n;
    if n == 0 {
        return Err(schema("n", "dimension must be at least 1"));
    }
    if doc.functions.is_empty() {
        return Err(schema("functions", "at least one function is required"));
    }
    let functions = doc
        .functions
        .into_iter()
        .enumerate()
        .map(|(i, f)| {
            let at = |name: &str| format!("functions[{i}].{name}");
            match f {
                FunctionJson::Affine { a, b } => {
                    ConstraintFunction::affine(vector(&at("a"), n, a)?, b).map_err(|e| schema(format!("functions[{i}]"), e))
                }
                FunctionJson::Quadratic { u, a, b } => {
                    if u.len() != n || u.iter().any(|row| row.len() != n) {
                        return Err(schema(at("U"), format!("expected a {n}x{n} matrix")));
                    }
                    let flat: Vec<f64> = u.into_iter().flatten().collect();
                    let u = Matrix::from_row_slice(n, n, &flat);
                    ConstraintFunction::quadratic(u, vector(&at("a"), n, a)?, b)
                        .map_err(|e| schema(format!("functions[{i}]"), e))
                }
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let bounds = doc
        .bounds
        .map(|b| {
            let lower = vector("box.lower", n, b.lower)?;
            let upper = vector("box.upper", n, b.upper)?;
            BoxBounds::new(lower, upper).map_err(|e| schema("box", e))
        })
        .transpose()?;
    Problem::from_parts(functions, bounds)
}

pub fn save_problem(problem: &Problem, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, problem_to_json(problem)?)?;
    Ok(())
}

pub fn load_problem(path: impl AsRef<Path>) -> Result<Problem> {
    problem_from_json(&fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::probgen::{generate_problem, RandomProblemSpec};

    #[test]
    fn generated_problem_round_trips() {
        let p = generate_problem(&RandomProblemSpec::new(3, 5, 5, [-10.0, 10.0], 7)).unwrap();
        let back = problem_from_json(&problem_to_json(&p).unwrap()).unwrap();
        assert_eq!(back.functions(), p.functions());
        assert_eq!(back.bounds(), p.bounds());
        assert_eq!(back.dimension(), 3);
    }

    #[test]
    fn file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("p.json");
        let p = generate_problem(&RandomProblemSpec::new(4, 2, 3, [-1.0, 1.0], 1)).unwrap();
        save_problem(&p, &path).unwrap();
        assert_eq!(load_problem(&path).unwrap().functions(), p.functions());
    }

    #[test]
    fn rejects_non_symmetric_matrix() {
        let text = r#"{"n":2,"functions":[{"kind":"quadratic","U":[[1,0.5],[0,1]],"a":[0,0],"b":-1}]}"#;
        match problem_from_json(text) {
            Err(CfpError::Schema { field, message }) => {
                assert_eq!(field, "functions[0]");
                assert!(message.contains("not symmetric"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_missing_dimension() {
        let text = r#"{"functions":[{"kind":"affine","a":[1],"b":0}]}"#;
        match problem_from_json(text) {
            Err(CfpError::Schema { message, .. }) => assert!(message.contains("`n`")),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_inconsistent_dimensions() {
        let text = r#"{"n":2,"functions":[{"kind":"affine","a":[1,0,0],"b":0}]}"#;
        match problem_from_json(text) {
            Err(CfpError::Schema { field, .. }) => assert_eq!(field, "functions[0].a"),
            other => panic!("unexpected {other:?}"),
        }
        let missing_box_fn = r#"{"n":1,"functions":[{"kind":"affine","a":[1],"b":-1}],
            "box":{"lower":[-1],"upper":[1]}}"#;
        assert!(matches!(problem_from_json(missing_box_fn), Err(CfpError::Schema { .. })));
    }
}
