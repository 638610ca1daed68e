//! Convex constraint functions `f_i` whose zero-sublevel sets are the
//! feasibility sets `Q_i = {x : f_i(x) <= 0}`.

use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{CfpError, Result};

pub type Vector = DVector<f64>;
pub type Matrix = DMatrix<f64>;

/// Relative tolerance on `U - U^T` after symmetrization.
pub const SYMMETRY_TOL: f64 = 1e-12;
/// Relative tolerance on the smallest eigenvalue of `U`.
pub const PSD_TOL: f64 = 1e-10;

/// Value-and-subgradient oracle for a convex function with no closed form.
///
/// Implementations must be re-entrant and return a finite value and a finite
/// subgradient for every finite input.
pub trait SubgradientOracle: Send + Sync {
    fn dimension(&self) -> usize;
    fn value(&self, x: &Vector) -> f64;
    fn subgradient(&self, x: &Vector) -> Vector;
}

/// Closure-backed oracle.
pub struct FnOracle<V, G> {
    dim: usize,
    value: V,
    grad: G,
}

impl<V, G> FnOracle<V, G>
where
    V: Fn(&Vector) -> f64 + Send + Sync,
    G: Fn(&Vector) -> Vector + Send + Sync,
{
    pub fn new(dim: usize, value: V, grad: G) -> Self {
        Self { dim, value, grad }
    }
}

impl<V, G> SubgradientOracle for FnOracle<V, G>
where
    V: Fn(&Vector) -> f64 + Send + Sync,
    G: Fn(&Vector) -> Vector + Send + Sync,
{
    fn dimension(&self) -> usize {
        self.dim
    }
    fn value(&self, x: &Vector) -> f64 {
        (self.value)(x)
    }
    fn subgradient(&self, x: &Vector) -> Vector {
        (self.grad)(x)
    }
}

#[derive(Clone)]
pub enum ConstraintFunction {
    /// `<a, x> + b`
    Affine { a: Vector, b: f64 },
    /// `<x, U x> + <a, x> + b` with `U` symmetric positive semidefinite.
    Quadratic { u: Matrix, a: Vector, b: f64 },
    Custom(Arc<dyn SubgradientOracle>),
}

impl fmt::Debug for ConstraintFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Affine { a, b } => f
                .debug_struct("Affine")
                .field("a", &a.as_slice())
                .field("b", b)
                .finish(),
            Self::Quadratic { u, a, b } => f
                .debug_struct("Quadratic")
                .field("n", &u.nrows())
                .field("a", &a.as_slice())
                .field("b", b)
                .finish(),
            Self::Custom(o) => f.debug_struct("Custom").field("n", &o.dimension()).finish(),
        }
    }
}

impl PartialEq for ConstraintFunction {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Self::Affine { a, b }, Self::Affine { a: a2, b: b2 }) => a == a2 && b == b2,
            (Self::Quadratic { u, a, b }, Self::Quadratic { u: u2, a: a2, b: b2 }) => {
                u == u2 && a == a2 && b == b2
            }
            (Self::Custom(x), Self::Custom(y)) => Arc::ptr_eq(x, y),
            _ => false,
        }
    }
}

pub(crate) fn check_finite(v: &Vector, what: &str) -> Result<()> {
    if v.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(CfpError::NonFinite(what.to_string()))
    }
}

pub(crate) fn check_dim(expected: usize, v: &Vector) -> Result<()> {
    if v.len() == expected {
        Ok(())
    } else {
        Err(CfpError::DimensionMismatch {
            expected,
            found: v.len(),
        })
    }
}

/// Smallest eigenvalue of a symmetric matrix.
pub fn min_eigenvalue(u: &Matrix) -> f64 {
    if u.nrows() == 0 {
        return 0.0;
    }
    SymmetricEigen::new(u.clone())
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

fn max_abs(m: &Matrix) -> f64 {
    m.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()))
}

impl ConstraintFunction {
    pub fn affine(a: Vector, b: f64) -> Result<Self> {
        check_finite(&a, "affine normal")?;
        if !b.is_finite() {
            return Err(CfpError::NonFinite("affine offset".into()));
        }
        if a.iter().all(|v| *v == 0.0) {
            return Err(CfpError::ZeroNormal);
        }
        Ok(Self::Affine { a, b })
    }

    /// Builds a quadratic after symmetrizing `U <- (U + U^T) / 2`.
    ///
    /// Rejects matrices whose asymmetry exceeds `1e-12 * max|U|` or whose
    /// smallest eigenvalue is below `-1e-10 * max|U|`.
    pub fn quadratic(u: Matrix, a: Vector, b: f64) -> Result<Self> {
        if !u.is_square() {
            return Err(CfpError::NotSquare {
                rows: u.nrows(),
                cols: u.ncols(),
            });
        }
        check_dim(u.nrows(), &a)?;
        if u.iter().any(|v| !v.is_finite()) {
            return Err(CfpError::NonFinite("quadratic matrix".into()));
        }
        check_finite(&a, "quadratic linear term")?;
        if !b.is_finite() {
            return Err(CfpError::NonFinite("quadratic offset".into()));
        }
        let scale = max_abs(&u);
        let asymmetry = max_abs(&(&u - u.transpose()));
        if asymmetry > SYMMETRY_TOL * scale {
            return Err(CfpError::NotSymmetric { asymmetry });
        }
        let u = (&u + u.transpose()) * 0.5;
        let min_eigenvalue = min_eigenvalue(&u);
        if min_eigenvalue < -PSD_TOL * scale {
            return Err(CfpError::NotPositiveSemidefinite { min_eigenvalue });
        }
        Ok(Self::Quadratic { u, a, b })
    }

    pub fn custom(oracle: Arc<dyn SubgradientOracle>) -> Self {
        Self::Custom(oracle)
    }

    pub fn dimension(&self) -> usize {
        match self {
            Self::Affine { a, .. } => a.len(),
            Self::Quadratic { a, .. } => a.len(),
            Self::Custom(o) => o.dimension(),
        }
    }

    pub fn is_custom(&self) -> bool {
        matches!(self, Self::Custom(_))
    }

    /// `true` for quadratics whose `U` is positive definite.
    pub fn is_strictly_convex(&self) -> bool {
        match self {
            Self::Quadratic { u, .. } => {
                let scale = max_abs(u).max(f64::MIN_POSITIVE);
                min_eigenvalue(u) > PSD_TOL * scale
            }
            _ => false,
        }
    }

    // Unchecked evaluation used on hot solver paths after validation.
    pub(crate) fn value_unchecked(&self, x: &Vector) -> f64 {
        match self {
            Self::Affine { a, b } => a.dot(x) + b,
            Self::Quadratic { u, a, b } => x.dot(&(u * x)) + a.dot(x) + b,
            Self::Custom(o) => o.value(x),
        }
    }

    pub(crate) fn subgradient_unchecked(&self, x: &Vector) -> Vector {
        match self {
            Self::Affine { a, .. } => a.clone(),
            Self::Quadratic { u, a, .. } => (u * x) * 2.0 + a,
            Self::Custom(o) => o.subgradient(x),
        }
    }

    pub fn evaluate(&self, x: &Vector) -> Result<f64> {
        check_dim(self.dimension(), x)?;
        check_finite(x, "evaluation point")?;
        let v = self.value_unchecked(x);
        if !v.is_finite() {
            return Err(CfpError::NonFinite("function value".into()));
        }
        Ok(v)
    }

    /// Affine: `a`; quadratic: `2 U x + a`; custom: the oracle's vector.
    pub fn subgradient(&self, x: &Vector) -> Result<Vector> {
        check_dim(self.dimension(), x)?;
        check_finite(x, "evaluation point")?;
        let g = self.subgradient_unchecked(x);
        check_dim(self.dimension(), &g)?;
        check_finite(&g, "subgradient")?;
        Ok(g)
    }
}
