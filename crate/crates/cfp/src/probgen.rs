//! Seeded random test problems: a box, `nq` convex quadratics and `nl`
//! affine constraints with coefficients drawn uniformly from `tau`.
//!
//! Each quadratic is `<x, U x> + <v, x> + beta` with `U = W diag(delta) W^T`,
//! where `W` orthonormalizes a random matrix and `0 < delta_1 <= ... <= delta_n`.
//!
//! Randomness comes from ChaCha8 seeded with `seed`; the box, every quadratic
//! and every linear constraint each draw from their own stream, so any
//! constraint can be regenerated in isolation and the output does not depend
//! on generation order.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{CfpError, Result};
use crate::function::{ConstraintFunction, Matrix, Vector};
use crate::problem::{BoxBounds, Problem};

/// Redraws allowed when a random matrix is numerically rank deficient.
pub const MAX_REDRAWS: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RandomProblemSpec {
    pub n: usize,
    pub nq: usize,
    pub nl: usize,
    pub tau: [f64; 2],
    pub seed: u64,
}

impl RandomProblemSpec {
    pub fn new(n: usize, nq: usize, nl: usize, tau: [f64; 2], seed: u64) -> Self {
        Self { n, nq, nl, tau, seed }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(CfpError::InvalidParameter("dimension must be at least 1".into()));
        }
        let [lo, hi] = self.tau;
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(CfpError::InvalidParameter(format!(
                "tau must be a finite interval with lo < hi, got [{lo}, {hi}]"
            )));
        }
        if self.nq > 0 && hi <= 0.0 {
            return Err(CfpError::InvalidParameter(
                "quadratic generation needs a positive upper end of tau".into(),
            ));
        }
        Ok(())
    }

    /// Constraint count with the box counted as `n`.
    pub fn reported_constraint_count(&self) -> usize {
        self.n + self.nq + self.nl
    }
}

/// Stream ids: 0 for the box, `1 + i` for quadratic `i`, `1 + nq + j` for
/// linear constraint `j`.
pub fn substream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn uniform<R: Rng + ?Sized>(rng: &mut R, tau: [f64; 2]) -> f64 {
    rng.random_range(tau[0]..=tau[1])
}

/// Orthonormal basis of the column space of a square matrix via Householder
/// QR, with column signs fixed so that `R` has a positive diagonal.
pub fn orthonormalize(a: &Matrix) -> Result<Matrix> {
    if !a.is_square() {
        return Err(CfpError::NotSquare {
            rows: a.nrows(),
            cols: a.ncols(),
        });
    }
    let n = a.nrows();
    let (mut q, r) = a.clone().qr().unpack();
    let scale = r.diagonal().amax();
    let tol = (n as f64) * f64::EPSILON * scale.max(f64::MIN_POSITIVE) * 1e3;
    if scale == 0.0 || r.diagonal().iter().any(|d| d.abs() <= tol) {
        return Err(CfpError::RankDeficient { attempts: 1 });
    }
    for j in 0..n {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    Ok(q)
}

/// A generated quadratic together with the spectrum and basis it was built
/// from.
#[derive(Debug, Clone)]
pub struct GeneratedQuadratic {
    pub function: ConstraintFunction,
    /// Sorted `delta`, the eigenvalues of `U`.
    pub eigenvalues: Vector,
    /// Orthonormal `W`.
    pub basis: Matrix,
    /// Raw draws for `v` and `beta`.
    pub linear: Vector,
    pub offset: f64,
}

pub fn generate_quadratic<R: Rng + ?Sized>(spec: &RandomProblemSpec, rng: &mut R) -> Result<GeneratedQuadratic> {
    let n = spec.n;
    let [lo, hi] = spec.tau;
    if !(hi > 0.0) {
        return Err(CfpError::InvalidParameter(
            "quadratic generation needs a positive upper end of tau".into(),
        ));
    }
    // delta in (max(0, lo), hi]
    let floor = lo.max(0.0);
    let mut delta: Vec<f64> = (0..n)
        .map(|_| hi - rng.random::<f64>() * (hi - floor))
        .collect();
    delta.sort_by(f64::total_cmp);
    let eigenvalues = Vector::from_vec(delta);

    let mut basis = None;
    for _ in 0..MAX_REDRAWS {
        let a = DMatrix::from_fn(n, n, |_, _| uniform(rng, spec.tau));
        if let Ok(w) = orthonormalize(&a) {
            basis = Some(w);
            break;
        }
    }
    let basis = basis.ok_or(CfpError::RankDeficient {
        attempts: MAX_REDRAWS,
    })?;

    let u = &basis * Matrix::from_diagonal(&eigenvalues) * basis.transpose();
    let linear = Vector::from_fn(n, |_, _| uniform(rng, spec.tau));
    let offset = uniform(rng, spec.tau);
    let function = ConstraintFunction::quadratic(u, linear.clone(), offset)?;
    Ok(GeneratedQuadratic {
        function,
        eigenvalues,
        basis,
        linear,
        offset,
    })
}

/// `<y, x> + gamma` with `y` redrawn while it is the zero vector.
pub fn generate_linear<R: Rng + ?Sized>(spec: &RandomProblemSpec, rng: &mut R) -> Result<ConstraintFunction> {
    for _ in 0..MAX_REDRAWS {
        let y = Vector::from_fn(spec.n, |_, _| uniform(rng, spec.tau));
        if y.iter().all(|v| *v == 0.0) {
            continue;
        }
        let gamma = uniform(rng, spec.tau);
        return ConstraintFunction::affine(y, gamma);
    }
    Err(CfpError::ZeroNormal)
}

/// Two draws per coordinate; the smaller is the lower bound.
pub fn generate_box<R: Rng + ?Sized>(spec: &RandomProblemSpec, rng: &mut R) -> (Vector, Vector) {
    let mut lower = Vector::zeros(spec.n);
    let mut upper = Vector::zeros(spec.n);
    for j in 0..spec.n {
        let p = uniform(rng, spec.tau);
        let q = uniform(rng, spec.tau);
        lower[j] = p.min(q);
        upper[j] = p.max(q);
    }
    (lower, upper)
}

/// Box functions first, then quadratics, then linear constraints.
pub fn generate_problem(spec: &RandomProblemSpec) -> Result<Problem> {
    spec.validate()?;
    let (lower, upper) = generate_box(spec, &mut substream(spec.seed, 0));
    let bounds = BoxBounds::new(lower, upper)?;
    let mut others = Vec::with_capacity(spec.nq + spec.nl);
    for i in 0..spec.nq {
        let mut rng = substream(spec.seed, 1 + i as u64);
        others.push(generate_quadratic(spec, &mut rng)?.function);
    }
    for j in 0..spec.nl {
        let mut rng = substream(spec.seed, 1 + (spec.nq + j) as u64);
        others.push(generate_linear(spec, &mut rng)?);
    }
    Problem::with_box(bounds, others)
}
