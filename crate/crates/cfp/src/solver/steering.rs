//! Numerical checks on the steering sequence `sigma_k = sigma / (k + 1)`.
//!
//! A steering sequence for `m` sets has terms in `[0, 1)`, tends to zero,
//! has a divergent sum, and has summable lag-`m` differences
//! `sum_k |sigma_k - sigma_{k+m}|`. For the harmonic form the lag sum
//! telescopes to `sigma * H_m`, which stays under `sigma * m * (1 + ln(m + 1))`.

use super::steps::steering_term;

#[derive(Debug, Clone, PartialEq)]
pub struct SteeringReport {
    pub sigma: f64,
    pub m: usize,
    pub horizon: usize,
    /// `sigma_horizon`
    pub last_term: f64,
    /// `sum_{k=0}^{horizon} sigma_k`
    pub partial_sum: f64,
    /// `sum_{k=0}^{horizon} |sigma_k - sigma_{k+m}|`
    pub lag_partial_sum: f64,
    /// The lag partial sums never decreased.
    pub lag_sums_monotone: bool,
    /// `sigma * m * (1 + ln(m + 1))`
    pub lag_bound: f64,
    /// Every lag partial sum stayed at or below `lag_bound`.
    pub lag_sums_bounded: bool,
    /// Number of leading terms with `sigma_k >= 1`.
    pub terms_not_below_one: usize,
    pub warnings: Vec<String>,
}

impl SteeringReport {
    /// `sigma_horizon < bound`.
    pub fn limit_below(&self, bound: f64) -> bool {
        self.last_term < bound
    }

    /// The partial sum up to the horizon exceeds `bound`.
    pub fn sum_exceeds(&self, bound: f64) -> bool {
        self.partial_sum > bound
    }

    pub fn is_steering_sequence(&self) -> bool {
        self.terms_not_below_one == 0 && self.lag_sums_monotone && self.lag_sums_bounded
    }
}

pub fn validate_steering_sequence(sigma: f64, m: usize, horizon: usize) -> SteeringReport {
    let lag_bound = sigma * m as f64 * (1.0 + ((m + 1) as f64).ln());
    let mut partial_sum = 0.0;
    let mut lag = 0.0;
    let mut monotone = true;
    let mut bounded = true;
    for k in 0..=horizon {
        let s = steering_term(sigma, k);
        partial_sum += s;
        let next = lag + (s - steering_term(sigma, k + m)).abs();
        monotone &= next >= lag;
        lag = next;
        bounded &= lag <= lag_bound;
    }
    // sigma_k >= 1 exactly for k + 1 <= sigma
    let terms_not_below_one = if sigma >= 1.0 {
        (0..).take_while(|&k| steering_term(sigma, k) >= 1.0).count()
    } else {
        0
    };
    let mut warnings = Vec::new();
    if terms_not_below_one > 0 {
        warnings.push(format!(
            "early terms violate sigma_k < 1 ({terms_not_below_one} term(s) with sigma = {sigma})"
        ));
    }
    if !bounded {
        warnings.push("lag differences exceed the summability bound".into());
    }
    SteeringReport {
        sigma,
        m,
        horizon,
        last_term: steering_term(sigma, horizon),
        partial_sum,
        lag_partial_sum: lag,
        lag_sums_monotone: monotone,
        lag_bound,
        lag_sums_bounded: bounded,
        terms_not_below_one,
        warnings,
    }
}
