// SPDX-License-Identifier: Apache-2.0

//! Closed-form bounds on the burning process and their inversion.
//!
//! Both bounds hold in the large-network limit and are used as equalities
//! when fitting a model to an observed mean degree.

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EstimationError {
    #[error("burning probability p={0} outside [0, 1/2)")]
    BurningOutOfRange(f64),
    #[error("linking probability q={0} outside (0, 1)")]
    LinkingOutOfRange(f64),
    #[error("mean degree must be positive and finite, got {0}")]
    InvalidDegree(f64),
    #[error(
        "no p in [0, 1/2) gives mean degree {target} at q={q}; feasible range is [{low}, {high})"
    )]
    NoSolution {
        target: f64,
        q: f64,
        low: f64,
        high: f64,
    },
}

/// Upper end of the bisection bracket for `p`.
const P_MAX: f64 = 0.5 - 1e-12;

fn check_p(p: f64) -> Result<(), EstimationError> {
    if (0.0..0.5).contains(&p) {
        Ok(())
    } else {
        Err(EstimationError::BurningOutOfRange(p))
    }
}

fn check_q(q: f64) -> Result<(), EstimationError> {
    if q > 0.0 && q < 1.0 {
        Ok(())
    } else {
        Err(EstimationError::LinkingOutOfRange(q))
    }
}

fn check_degree(k: f64) -> Result<(), EstimationError> {
    if k.is_finite() && k > 0.0 {
        Ok(())
    } else {
        Err(EstimationError::InvalidDegree(k))
    }
}

/// Mean number of burned nodes per episode, `(1-p)/(1-2p)`: the sum of the
/// geometric series with ratio `p/(1-p)`.
pub fn expected_burned(p: f64) -> Result<f64, EstimationError> {
    check_p(p)?;
    Ok((1.0 - p) / (1.0 - 2.0 * p))
}

/// Expected CIT mean degree, corrected for episodes that form no link:
/// `2 q v / (1 - q - (1-q)^(v+1))` with `v = expected_burned(p)`.
pub fn expected_degree(p: f64, q: f64) -> Result<f64, EstimationError> {
    let v = expected_burned(p)?;
    check_q(q)?;
    Ok(degree_bound(v, q))
}

fn degree_bound(v: f64, q: f64) -> f64 {
    2.0 * q * v / (1.0 - q - (1.0 - q).powf(v + 1.0))
}

/// FF links the newcomer to every burned node, so its mean degree is
/// `2 (1-p)/(1-2p)`.
pub fn expected_degree_ff(p: f64) -> Result<f64, EstimationError> {
    Ok(2.0 * expected_burned(p)?)
}

/// Solves `expected_degree(p, q) = k_target` for `p` by bisection.
pub fn estimate_p(k_target: f64, q: f64) -> Result<f64, EstimationError> {
    check_degree(k_target)?;
    check_q(q)?;
    let low = degree_bound(1.0, q);
    let high = degree_bound(expected_burned(P_MAX)?, q);
    if !(low..=high).contains(&k_target) {
        return Err(EstimationError::NoSolution {
            target: k_target,
            q,
            low,
            high,
        });
    }
    let (mut lo, mut hi) = (0.0_f64, P_MAX);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if expected_degree(mid, q)? < k_target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Inverts [`expected_degree_ff`]: `p = (k - 2) / (2 (k - 1))`.
pub fn estimate_p_ff(k_target: f64) -> Result<f64, EstimationError> {
    check_degree(k_target)?;
    if k_target < 2.0 {
        return Err(EstimationError::NoSolution {
            target: k_target,
            q: 1.0,
            low: 2.0,
            high: f64::INFINITY,
        });
    }
    Ok((k_target - 2.0) / (2.0 * (k_target - 1.0)))
}

/// `2 v / k`: the share of cited items that were actually explored.
pub fn read_fraction(p: f64, k_network: f64) -> Result<f64, EstimationError> {
    check_degree(k_network)?;
    Ok(2.0 * expected_burned(p)? / k_network)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FitResult {
    pub p_hat: f64,
    /// `None` for FF, which has no linking probability.
    pub q_fixed: Option<f64>,
    pub v_bar: f64,
    pub k_pred: f64,
    pub read_fraction: f64,
}

/// Fits the CIT burning probability to an observed mean degree at fixed `q`.
pub fn fit_cit(k_network: f64, q: f64) -> Result<FitResult, EstimationError> {
    let p_hat = estimate_p(k_network, q)?;
    Ok(FitResult {
        p_hat,
        q_fixed: Some(q),
        v_bar: expected_burned(p_hat)?,
        k_pred: expected_degree(p_hat, q)?,
        read_fraction: read_fraction(p_hat, k_network)?,
    })
}

/// Fits the FF burning probability to an observed mean degree.
pub fn fit_ff(k_network: f64) -> Result<FitResult, EstimationError> {
    let p_hat = estimate_p_ff(k_network)?;
    Ok(FitResult {
        p_hat,
        q_fixed: None,
        v_bar: expected_burned(p_hat)?,
        k_pred: expected_degree_ff(p_hat)?,
        read_fraction: read_fraction(p_hat, k_network)?,
    })
}
