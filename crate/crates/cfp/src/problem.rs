//! Feasibility problems `find x with f_i(x) <= 0 for all i`, the envelope
//! `f = max_i f_i` and the regularizing transform `f_i + alpha ||x||^2`.

use crate::error::{CfpError, Result};
use crate::function::{check_dim, check_finite, ConstraintFunction, Matrix, Vector};

/// Axis-aligned bounds `lower <= x <= upper`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxBounds {
    lower: Vector,
    upper: Vector,
}

impl BoxBounds {
    pub fn new(lower: Vector, upper: Vector) -> Result<Self> {
        check_dim(lower.len(), &upper)?;
        check_finite(&lower, "box lower bound")?;
        check_finite(&upper, "box upper bound")?;
        if let Some(index) = (0..lower.len()).find(|&j| lower[j] > upper[j]) {
            return Err(CfpError::EmptyBox { index });
        }
        Ok(Self { lower, upper })
    }

    pub fn lower(&self) -> &Vector {
        &self.lower
    }

    pub fn upper(&self) -> &Vector {
        &self.upper
    }

    pub fn dimension(&self) -> usize {
        self.lower.len()
    }

    /// The `2n` affine functions `x_j - u_j` and `l_j - x_j`, interleaved by
    /// coordinate.
    pub fn functions(&self) -> Vec<ConstraintFunction> {
        let n = self.dimension();
        let mut out = Vec::with_capacity(2 * n);
        for j in 0..n {
            let unit = |s: f64| Vector::from_fn(n, |i, _| if i == j { s } else { 0.0 });
            out.push(ConstraintFunction::Affine {
                a: unit(1.0),
                b: -self.upper[j],
            });
            // built directly so the off-diagonal entries are +0.0
            out.push(ConstraintFunction::Affine {
                a: unit(-1.0),
                b: self.lower[j],
            });
        }
        out
    }
}

#[derive(Debug, Clone)]
pub struct Problem {
    dim: usize,
    functions: Vec<ConstraintFunction>,
    bounds: Option<BoxBounds>,
}

/// Result of evaluating the envelope at a point.
#[derive(Debug, Clone, PartialEq)]
pub struct EnvelopeEvaluation {
    pub value: f64,
    /// Indices `i` with `f_i(x) >= f(x) - eps_active`, ascending.
    pub active: Vec<usize>,
    pub per_function: Vec<f64>,
}

/// Tolerance used to decide ties in the active set.
pub fn active_tolerance(value: f64) -> f64 {
    1e-12 * value.abs().max(1.0)
}

impl Problem {
    pub fn new(functions: Vec<ConstraintFunction>) -> Result<Self> {
        let first = functions.first().ok_or(CfpError::EmptyProblem)?;
        let dim = first.dimension();
        for f in &functions {
            if f.dimension() != dim {
                return Err(CfpError::DimensionMismatch {
                    expected: dim,
                    found: f.dimension(),
                });
            }
        }
        Ok(Self {
            dim,
            functions,
            bounds: None,
        })
    }

    /// Box functions first, followed by `others`.
    pub fn with_box(bounds: BoxBounds, others: Vec<ConstraintFunction>) -> Result<Self> {
        let mut functions = bounds.functions();
        functions.extend(others);
        let mut problem = Self::new(functions)?;
        problem.bounds = Some(bounds);
        Ok(problem)
    }

    /// Assembles a problem from an explicit function list; when `bounds` is
    /// given, all of its `2n` box functions must already appear in the list.
    pub fn from_parts(functions: Vec<ConstraintFunction>, bounds: Option<BoxBounds>) -> Result<Self> {
        let mut problem = Self::new(functions)?;
        if let Some(b) = &bounds {
            if b.dimension() != problem.dim {
                return Err(CfpError::DimensionMismatch {
                    expected: problem.dim,
                    found: b.dimension(),
                });
            }
            for (k, bf) in b.functions().iter().enumerate() {
                if !problem.functions.contains(bf) {
                    let side = if k % 2 == 0 { "upper" } else { "lower" };
                    return Err(CfpError::Schema {
                        field: format!("box.{side}[{}]", k / 2),
                        message: "box constraint missing from function list".into(),
                    });
                }
            }
        }
        problem.bounds = bounds;
        Ok(problem)
    }

    pub fn dimension(&self) -> usize {
        self.dim
    }

    pub fn functions(&self) -> &[ConstraintFunction] {
        &self.functions
    }

    pub fn len(&self) -> usize {
        self.functions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.functions.is_empty()
    }

    pub fn bounds(&self) -> Option<&BoxBounds> {
        self.bounds.as_ref()
    }

    pub fn has_custom(&self) -> bool {
        self.functions.iter().any(ConstraintFunction::is_custom)
    }

    /// Constraint count with the box counted as `n` constraints rather than
    /// the `2n` functions it expands into.
    pub fn reported_constraint_count(&self) -> usize {
        match &self.bounds {
            Some(b) => self.functions.len() - b.dimension(),
            None => self.functions.len(),
        }
    }

    pub fn envelope(&self, x: &Vector) -> Result<EnvelopeEvaluation> {
        check_dim(self.dim, x)?;
        check_finite(x, "evaluation point")?;
        let per_function: Vec<f64> = self
            .functions
            .iter()
            .map(|f| f.value_unchecked(x))
            .collect();
        if per_function.iter().any(|v| !v.is_finite()) {
            return Err(CfpError::NonFinite("function value".into()));
        }
        Ok(envelope_from_values(per_function))
    }

    /// `f(x) = max_i f_i(x)` without building the active set.
    pub fn envelope_value(&self, x: &Vector) -> Result<f64> {
        check_dim(self.dim, x)?;
        Ok(self.envelope_value_unchecked(x))
    }

    pub(crate) fn envelope_value_unchecked(&self, x: &Vector) -> f64 {
        self.functions
            .iter()
            .map(|f| f.value_unchecked(x))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn is_feasible(&self, x: &Vector) -> Result<bool> {
        Ok(self.envelope_value(x)? <= 0.0)
    }

    /// Replaces every `f_i` with `f_i + alpha ||x||^2`.
    ///
    /// Box metadata is dropped since the box functions become quadratics.
    pub fn regularize(&self, alpha: f64) -> Result<Problem> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(CfpError::InvalidParameter(format!(
                "regularization weight must be positive, got {alpha}"
            )));
        }
        let shift = Matrix::identity(self.dim, self.dim) * alpha;
        let functions = self
            .functions
            .iter()
            .enumerate()
            .map(|(i, f)| match f {
                ConstraintFunction::Affine { a, b } => ConstraintFunction::quadratic(shift.clone(), a.clone(), *b),
                ConstraintFunction::Quadratic { u, a, b } => {
                    ConstraintFunction::quadratic(u + &shift, a.clone(), *b)
                }
                ConstraintFunction::Custom(_) => Err(CfpError::Unsupported(format!(
                    "function {i} is a custom oracle and cannot be regularized"
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        Problem::new(functions)
    }
}

pub(crate) fn envelope_from_values(per_function: Vec<f64>) -> EnvelopeEvaluation {
    let value = per_function.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let cut = value - active_tolerance(value);
    let active = per_function
        .iter()
        .enumerate()
        .filter(|(_, v)| **v >= cut)
        .map(|(i, _)| i)
        .collect();
    EnvelopeEvaluation {
        value,
        active,
        per_function,
    }
}
