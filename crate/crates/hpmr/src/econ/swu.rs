//! Separative-work mass balance for the enrichment cost.

use super::EconError;

/// The separative value function V(x) = (2x - 1) ln(x/(1-x)).
pub fn separative_value(x: f64) -> f64 {
    (2.0 * x - 1.0) * (x / (1.0 - x)).ln()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SwuResult {
    /// Separative work per kg of product.
    pub swu_per_kg: f64,
    /// Natural-uranium feed per kg of product.
    pub feed_per_kg: f64,
}

/// SWU and feed requirement per kg of product at product assay `x_p`,
/// feed assay `x_f`, and tails assay `x_t`.
///
/// feed/product = (x_p - x_t)/(x_f - x_t);
/// SWU/product = V(x_p) + (F/P - 1) V(x_t) - (F/P) V(x_f).
pub fn swu_per_kg_product(x_p: f64, x_f: f64, x_t: f64) -> Result<SwuResult, EconError> {
    if !(x_t > 0.0 && x_f > x_t && x_p >= x_f && x_p < 1.0) {
        return Err(EconError::AssayOrdering);
    }
    let feed_per_kg = (x_p - x_t) / (x_f - x_t);
    let tails_per_kg = feed_per_kg - 1.0;
    let swu_per_kg = separative_value(x_p) + tails_per_kg * separative_value(x_t)
        - feed_per_kg * separative_value(x_f);
    Ok(SwuResult {
        swu_per_kg,
        feed_per_kg,
    })
}
