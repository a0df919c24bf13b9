use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GammaValue {
    pub s: f64,
    pub value: f64,
}

/// `γ(s) = sqrt(1 - (1-s)⁴ / (1+s²)²)` on `[0, 1]`.
///
/// With `a(s) = (1-s)²/(1+s²) = 1 - 2s/(1+s²)`, the isoperimetric lower bound,
/// this is `sqrt(1 - a²)`: the Cheeger factor for that bound.
pub fn gamma(s: f64) -> Result<GammaValue> {
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::Domain { name: "s", value: s, domain: "[0, 1]" });
    }
    let a = (1.0 - s) * (1.0 - s) / (1.0 + s * s);
    Ok(GammaValue { s, value: (1.0 - a * a).sqrt() })
}
