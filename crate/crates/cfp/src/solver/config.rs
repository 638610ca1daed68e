use crate::error::{CfpError, Result};
use crate::projection::validate_weights;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    /// Cyclic subgradient projections.
    Csp,
    /// Simultaneous subgradient projections with constant relaxation.
    Ssp,
    /// Simultaneous subgradient projections with steering `sigma / (k + 1)`.
    SspSteering,
    /// Strategic relaxation `lambda_k = c max(0, f(x^k)) / M^2`.
    Strategic,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Csp => "csp",
            Algorithm::Ssp => "ssp",
            Algorithm::SspSteering => "ssp-steering",
            Algorithm::Strategic => "strategic",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csp" => Some(Algorithm::Csp),
            "ssp" => Some(Algorithm::Ssp),
            "ssp-steering" | "steering" => Some(Algorithm::SspSteering),
            "strategic" => Some(Algorithm::Strategic),
            _ => None,
        }
    }
}

impl std::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// How averaging weights are chosen.
///
/// For the simultaneous methods the weights cover every function and must be
/// positive. For the strategic method they are restricted to the active set
/// `I(x^k)`: `Uniform` spreads mass evenly over it, `SingleMaxIndex` puts all
/// mass on its lowest index and `Fixed` is renormalized over it.
#[derive(Debug, Clone, PartialEq)]
pub enum WeightPolicy {
    Uniform,
    Fixed(Vec<f64>),
    SingleMaxIndex,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub algorithm: Algorithm,
    /// Constant relaxation for CSP and SSP.
    pub alpha: f64,
    /// Steering constant.
    pub sigma: f64,
    /// Strategic coefficient; the theory covers `c` in `[1, 2]`.
    pub c: f64,
    /// Lipschitz bound `M` for the strategic method.
    pub lipschitz: f64,
    pub weights: WeightPolicy,
    pub max_iter: usize,
    /// Stop once `||x^{k+1} - x^k|| <= eps_step * max(1, ||x^k||)`.
    pub eps_step: f64,
    /// Stop once `f(x^k) <= eps_feas`.
    pub eps_feas: f64,
    /// Permit `alpha >= 2` for CSP/SSP.
    pub allow_overrelax: bool,
    /// Record the proximity function in the trace (exact projections only).
    pub record_proximity: bool,
}

impl SolverConfig {
    fn base(algorithm: Algorithm) -> Self {
        Self {
            algorithm,
            alpha: 1.0,
            sigma: 1.0,
            c: 1.5,
            lipschitz: 1.0,
            weights: WeightPolicy::Uniform,
            max_iter: 1000,
            eps_step: 1e-12,
            eps_feas: 0.0,
            allow_overrelax: false,
            record_proximity: false,
        }
    }

    pub fn csp(alpha: f64) -> Self {
        Self {
            alpha,
            ..Self::base(Algorithm::Csp)
        }
    }

    pub fn ssp(alpha: f64) -> Self {
        Self {
            alpha,
            ..Self::base(Algorithm::Ssp)
        }
    }

    pub fn steering(sigma: f64) -> Self {
        Self {
            sigma,
            ..Self::base(Algorithm::SspSteering)
        }
    }

    pub fn strategic(lipschitz: f64, c: f64) -> Self {
        Self {
            lipschitz,
            c,
            ..Self::base(Algorithm::Strategic)
        }
    }

    pub fn with_max_iter(mut self, max_iter: usize) -> Self {
        self.max_iter = max_iter;
        self
    }

    pub fn with_eps_step(mut self, eps: f64) -> Self {
        self.eps_step = eps;
        self
    }

    pub fn with_eps_feas(mut self, eps: f64) -> Self {
        self.eps_feas = eps;
        self
    }

    pub fn with_weights(mut self, weights: WeightPolicy) -> Self {
        self.weights = weights;
        self
    }

    pub fn with_overrelax(mut self, allow: bool) -> Self {
        self.allow_overrelax = allow;
        self
    }

    pub fn with_proximity(mut self, record: bool) -> Self {
        self.record_proximity = record;
        self
    }

    /// Checks the parameters against a problem with `m` functions and
    /// returns non-fatal warnings.
    pub fn validate(&self, m: usize) -> Result<Vec<String>> {
        let mut warnings = Vec::new();
        if self.max_iter == 0 {
            return Err(CfpError::InvalidParameter("max_iter must be positive".into()));
        }
        if !(self.eps_step >= 0.0) || self.eps_feas.is_nan() {
            return Err(CfpError::InvalidParameter("tolerances must be non-negative numbers".into()));
        }
        match self.algorithm {
            Algorithm::Csp | Algorithm::Ssp => {
                if !(self.alpha > 0.0 && self.alpha.is_finite()) {
                    return Err(CfpError::InvalidParameter(format!(
                        "relaxation must be positive, got {}",
                        self.alpha
                    )));
                }
                if self.alpha >= 2.0 {
                    if !self.allow_overrelax {
                        return Err(CfpError::InvalidParameter(format!(
                            "relaxation {} is outside (0, 2); set allow_overrelax to permit it",
                            self.alpha
                        )));
                    }
                    warnings.push(format!("relaxation {} is outside (0, 2)", self.alpha));
                }
            }
            Algorithm::SspSteering => {
                if !(self.sigma > 0.0 && self.sigma.is_finite()) {
                    return Err(CfpError::InvalidParameter(format!(
                        "steering constant must be positive, got {}",
                        self.sigma
                    )));
                }
                if self.sigma >= 1.0 {
                    warnings.push(format!(
                        "steering constant {} makes early terms violate sigma_k < 1",
                        self.sigma
                    ));
                }
            }
            Algorithm::Strategic => {
                if !(self.lipschitz > 0.0 && self.lipschitz.is_finite()) {
                    return Err(CfpError::InvalidParameter(format!(
                        "M must be positive, got {}",
                        self.lipschitz
                    )));
                }
                if !(self.c >= 0.0 && self.c.is_finite()) {
                    return Err(CfpError::InvalidParameter(format!(
                        "strategic coefficient must be non-negative, got {}",
                        self.c
                    )));
                }
                if !(1.0..=2.0).contains(&self.c) {
                    warnings.push(format!(
                        "strategic coefficient {} is outside [1, 2]; convergence guarantees do not apply",
                        self.c
                    ));
                }
            }
        }
        match (&self.weights, self.algorithm) {
            (WeightPolicy::Fixed(w), Algorithm::Ssp | Algorithm::SspSteering) => validate_weights(w, m)?,
            (WeightPolicy::Fixed(w), Algorithm::Strategic) => {
                if w.len() != m || w.iter().any(|v| !(*v >= 0.0) || !v.is_finite()) {
                    return Err(CfpError::InvalidWeights(format!(
                        "expected {m} non-negative weights"
                    )));
                }
            }
            (WeightPolicy::SingleMaxIndex, Algorithm::Ssp | Algorithm::SspSteering) => {
                return Err(CfpError::InvalidWeights(
                    "simultaneous methods need positive weights on every function".into(),
                ))
            }
            _ => {}
        }
        Ok(warnings)
    }
}
