//! Weight transformations applied before the cascade: clamp light edges and
//! rescale into `[1, n/eps]`, round down to powers of `1 + eps`, and lift to
//! integers over the common denominator `1/eps`.

use crate::error::{Error, Result};
use crate::instance::WeightedHypergraph;

fn check_eps(eps: f64) -> Result<()> {
    if eps.is_finite() && eps > 0.0 && eps < 1.0 {
        Ok(())
    } else {
        Err(Error::Epsilon {
            eps,
            reason: "must lie in (0, 1)".into(),
        })
    }
}

/// Snaps `eps` down to the unit fraction `1/ceil(1/eps)`.
pub fn snap_eps(eps: f64) -> Result<f64> {
    check_eps(eps)?;
    let inv = 1.0 / eps;
    // 1/(1/3) may land a hair above 3
    let d = (inv - 1e-9 * inv).ceil().max(2.0);
    Ok(1.0 / d)
}

/// `Some(D)` when `eps == 1/D` for a positive integer `D`.
pub fn unit_denominator(eps: f64) -> Option<u64> {
    if !(eps.is_finite() && eps > 0.0 && eps <= 1.0) {
        return None;
    }
    let inv = 1.0 / eps;
    let d = inv.round();
    ((inv - d).abs() <= 1e-9 * d).then_some(d as u64)
}

/// Raises every weight below `W*eps/n` to that threshold and multiplies all
/// weights by `n/(W*eps)`. Returns the new hypergraph and the multiplier;
/// instances with `W <= n/eps` (or no edges) come back unchanged with scale 1.
pub fn clamp_rescale(h: &WeightedHypergraph, eps: f64) -> Result<(WeightedHypergraph, f64)> {
    check_eps(eps)?;
    let n = h.num_vertices() as f64;
    let max = match h.max_weight() {
        Some(w) if w > n / eps => w,
        _ => return Ok((h.clone(), 1.0)),
    };
    let threshold = max * eps / n;
    // divide instead of multiplying by the scale so the clamped edges land on exactly 1
    let weights: Vec<f64> = h.weights().iter().map(|&w| w.max(threshold) / threshold).collect();
    Ok((h.with_weights(&weights)?, 1.0 / threshold))
}

/// `(1 + eps)^e`, the single definition of a level's weight used everywhere.
pub fn level_weight(eps: f64, exponent: u32) -> f64 {
    (1.0 + eps).powi(exponent as i32)
}

/// Largest `e >= 0` with `(1 + eps)^e <= w`, for `w >= 1`.
///
/// The logarithm only seeds the search; the defining inequality is then
/// enforced with `level_weight` itself.
pub fn exponent_of(w: f64, eps: f64) -> u32 {
    debug_assert!(w >= 1.0);
    let guess = (w.ln() / (1.0 + eps).ln()).floor();
    let mut e = if guess.is_finite() && guess > 0.0 { guess as u32 } else { 0 };
    while e > 0 && level_weight(eps, e) > w {
        e -= 1;
    }
    while level_weight(eps, e + 1) <= w {
        e += 1;
    }
    e
}

/// Hypergraph whose weights have been rounded down to powers of `1 + eps`.
#[derive(Clone, Debug, PartialEq)]
pub struct RoundedInstance {
    /// Topology plus the weights that were rounded.
    pub base: WeightedHypergraph,
    pub eps: f64,
    pub exponents: Vec<u32>,
    /// Weights used for final scoring. Equal to `base`'s weights unless the
    /// caller substitutes the pre-transform originals.
    pub original_weights: Vec<f64>,
}

impl RoundedInstance {
    pub fn rounded_weight(&self, id: usize) -> f64 {
        level_weight(self.eps, self.exponents[id])
    }

    pub fn rounded_weights(&self) -> Vec<f64> {
        (0..self.exponents.len()).map(|id| self.rounded_weight(id)).collect()
    }

    /// The instance with every weight replaced by its rounded value.
    pub fn rounded_hypergraph(&self) -> WeightedHypergraph {
        self.base
            .with_weights(&self.rounded_weights())
            .expect("powers of 1+eps are >= 1")
    }
}

pub fn round_to_powers(h: &WeightedHypergraph, eps: f64) -> Result<RoundedInstance> {
    check_eps(eps)?;
    let exponents = h.edges().iter().map(|e| exponent_of(e.weight(), eps)).collect();
    Ok(RoundedInstance {
        base: h.clone(),
        eps,
        exponents,
        original_weights: h.weights(),
    })
}

/// Rounds every weight down to a multiple of `1/D` (with `eps = 1/D`) and
/// multiplies by `D`. Returns the integer-weighted hypergraph and `D`.
pub fn integerize(h: &WeightedHypergraph, eps: f64) -> Result<(WeightedHypergraph, u64)> {
    let d = unit_denominator(eps).ok_or_else(|| Error::Epsilon {
        eps,
        reason: format!(
            "integerize needs eps = 1/D for an integer D; snap it to 1/{}",
            if eps > 0.0 && eps.is_finite() { (1.0 / eps).ceil() } else { f64::NAN }
        ),
    })?;
    let weights: Vec<f64> = h.weights().iter().map(|&w| (w * d as f64).floor()).collect();
    Ok((h.with_weights(&weights)?, d))
}
