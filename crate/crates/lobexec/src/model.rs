//! Model parameters, validation, and regime classification.
//!
//! The model: the volumes at the best bid and best ask each follow a
//! Brownian motion with downward drift, dV = -mu dt + dW (diffusion
//! constant fixed at 1). Whenever a queue empties the mid-price moves by
//! one half-tick and both volumes reset: an emptied ask (price up) leads
//! to (V^b, V^a) = (v_sml, v_lrg), an emptied bid (price down) to
//! (v_lrg, v_sml). The execution problem adds an absorbing boundary at
//! V^a = q.

use crate::error::{Error, Result};
use std::collections::BTreeMap;

/// Distance below which a state is snapped onto a boundary.
pub const BOUNDARY_SNAP: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct ModelParams {
    /// Drift magnitude; both queues drift toward zero at this rate.
    pub mu: f64,
    /// Reset volume on the side opposite the depleted queue.
    pub v_sml: f64,
    /// Reset volume on the depleted side.
    pub v_lrg: f64,
    /// Initial bid-queue volume.
    pub v0_bid: f64,
    /// Initial ask-queue volume.
    pub v0_ask: f64,
}

impl ModelParams {
    pub fn new(mu: f64, v_sml: f64, v_lrg: f64, v0_bid: f64, v0_ask: f64) -> Result<Self> {
        let mut raw = BTreeMap::new();
        raw.insert("mu".to_string(), mu);
        raw.insert("v_sml".to_string(), v_sml);
        raw.insert("v_lrg".to_string(), v_lrg);
        raw.insert("v0_bid".to_string(), v0_bid);
        raw.insert("v0_ask".to_string(), v0_ask);
        validate_params(&raw)
    }
}

/// Execution threshold: the order is filled when the ask queue reaches `q`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StripGeometry {
    pub q: f64,
}

impl StripGeometry {
    pub fn new(q: f64, params: &ModelParams) -> Result<Self> {
        if !(q > 0.0) || !q.is_finite() {
            return Err(Error::parameter("q", "must be positive and finite"));
        }
        if q < params.v0_ask {
            return Err(Error::parameter(
                "q",
                format!("must be >= v0_ask = {} for a well-posed execution", params.v0_ask),
            ));
        }
        Ok(StripGeometry { q })
    }
}

/// Distribution of the post-depletion reset volumes.
#[derive(Clone, Debug, PartialEq)]
pub enum ResetDistribution {
    /// Always reset to the fixed pair (v_sml, v_lrg).
    Deterministic,
    /// Independent uniform draws from finite supports.
    DiscreteUniform {
        sml_support: Vec<f64>,
        lrg_support: Vec<f64>,
    },
}

impl ResetDistribution {
    /// The stochastic-reset variant used in the robustness study:
    /// v_lrg uniform on {2, 2.5, 3, 3.5, 4}, v_sml uniform on {0.5, 1, 1.5}.
    pub fn stochastic_default() -> Self {
        ResetDistribution::DiscreteUniform {
            sml_support: vec![0.5, 1.0, 1.5],
            lrg_support: vec![2.0, 2.5, 3.0, 3.5, 4.0],
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let ResetDistribution::DiscreteUniform {
            sml_support,
            lrg_support,
        } = self
        {
            for (name, support) in [("sml_support", sml_support), ("lrg_support", lrg_support)] {
                if support.is_empty() {
                    return Err(Error::parameter(name, "support must be nonempty"));
                }
                if support.iter().any(|v| !(*v > 0.0)) {
                    return Err(Error::parameter(name, "support values must be positive"));
                }
            }
        }
        Ok(())
    }
}

/// Execution regime as a function of the threshold q.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Regime {
    /// q <= v0_ask: the order executes at t = 0.
    Instant,
    /// v0_ask < q <= v_lrg: after an up-reset the ask queue starts at
    /// v_lrg >= q, so execution follows immediately; the up-state kernel
    /// column is (p_ex, p_up, p_dn) = (1, 0, 0).
    BelowVlrg,
    /// q > v_lrg: all three source states see a genuine strip problem.
    General,
}

/// Validates a flat parameter map and returns the typed record.
pub fn validate_params(raw: &BTreeMap<String, f64>) -> Result<ModelParams> {
    let get = |key: &str| -> Result<f64> {
        raw.get(key)
            .copied()
            .ok_or_else(|| Error::parameter(key, "missing"))
    };
    let mu = get("mu")?;
    let v_sml = get("v_sml")?;
    let v_lrg = get("v_lrg")?;
    let v0_bid = get("v0_bid")?;
    let v0_ask = get("v0_ask")?;

    if !(mu >= 0.0) || !mu.is_finite() {
        return Err(Error::parameter("mu", "must be >= 0"));
    }
    if !(v_sml > 0.0) {
        return Err(Error::parameter("v_sml", "must be > 0"));
    }
    if !(v_lrg > v_sml) {
        return Err(Error::parameter("v_sml", "v_sml < v_lrg required"));
    }
    if !(v0_bid > 0.0) {
        return Err(Error::parameter("v0_bid", "must be > 0"));
    }
    if !(v0_ask > 0.0) {
        return Err(Error::parameter("v0_ask", "must be > 0"));
    }
    for (key, v) in raw {
        if !v.is_finite() {
            return Err(Error::parameter(key, "must be finite"));
        }
    }
    Ok(ModelParams {
        mu,
        v_sml,
        v_lrg,
        v0_bid,
        v0_ask,
    })
}

/// Classifies the execution regime; see [`Regime`].
pub fn classify_regime(params: &ModelParams, geom: &StripGeometry) -> Regime {
    if geom.q <= params.v0_ask + BOUNDARY_SNAP {
        Regime::Instant
    } else if geom.q <= params.v_lrg + BOUNDARY_SNAP {
        Regime::BelowVlrg
    } else {
        Regime::General
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base() -> ModelParams {
        ModelParams::new(0.0, 1.0, 3.0, 2.0, 2.0).unwrap()
    }

    #[test]
    fn accepts_paper_parameters() {
        let p = base();
        assert_eq!(p.v_sml, 1.0);
        assert_eq!(p.v_lrg, 3.0);
    }

    #[test]
    fn rejects_negative_mu() {
        let err = ModelParams::new(-0.1, 1.0, 3.0, 2.0, 2.0).unwrap_err();
        assert!(err.to_string().contains("mu"));
    }

    #[test]
    fn rejects_reset_ordering() {
        let err = ModelParams::new(0.0, 3.0, 1.0, 2.0, 2.0).unwrap_err();
        assert!(err.to_string().contains("v_sml < v_lrg"));
    }

    #[test]
    fn regime_classification() {
        let p = base();
        let at = |q: f64| classify_regime(&p, &StripGeometry { q });
        assert_eq!(at(2.0), Regime::Instant);
        assert_eq!(at(2.5), Regime::BelowVlrg);
        assert_eq!(at(4.0), Regime::General);
    }

    #[test]
    fn regime_monotone_in_q() {
        let p = base();
        let mut last = Regime::Instant;
        let mut q = 0.5;
        while q < 8.0 {
            let r = classify_regime(&p, &StripGeometry { q });
            assert!(r >= last, "regime went backwards at q={q}");
            last = r;
            q += 0.1;
        }
    }

    #[test]
    fn validate_idempotent() {
        let p = base();
        let again =
            ModelParams::new(p.mu, p.v_sml, p.v_lrg, p.v0_bid, p.v0_ask).unwrap();
        assert_eq!(p, again);
    }
}
