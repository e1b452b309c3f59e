//! Elementary sandwich bounds on `ln I_nu` and on the Bessel ratio, the
//! linear-minus-half-log envelopes they imply, and the leading-order
//! large-concentration expansion of the circular variance. This is the
//! apparatus used to verify the limiting behaviour of the divergence
//! formulas at concentrations where Monte Carlo is hopeless.
//!
//! Throughout, `c_under = nu + 1/2` and `c_over = nu + 3/2`.

use crate::bessel::{log_bessel_i, log_gamma, Order};
use crate::error::{Error, Result};

/// A lower/upper bracket, together with the two constants it was built from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundPair {
    pub lower: f64,
    pub upper: f64,
    /// `nu + 1/2`
    pub c_under: f64,
    /// `nu + 3/2`
    pub c_over: f64,
}

impl BoundPair {
    fn new(lower: f64, upper: f64, nu: f64) -> Self {
        Self {
            lower,
            upper,
            c_under: nu + 0.5,
            c_over: nu + 1.5,
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lower <= x && x <= self.upper
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }
}

/// Two-argument sandwich `L_nu(k_y, k_z) <= ln I_nu(k_y) <= U_nu(k_y, k_z)`,
/// valid as displayed for `k_y >= k_z > 0`:
///
/// `L = ln I_nu(k_z) + nu ln(k_y/k_z)`
/// `  + c_under ln[(c_under + sqrt(k_z^2 + c_over^2)) / (c_under + sqrt(k_y^2 + c_over^2))]`
/// `  + (k_y^2 - k_z^2) / (sqrt(k_y^2 + c_over^2) + sqrt(k_z^2 + c_over^2))`
///
/// and `U` the same expression with `c_over` replaced by `c_under` inside
/// the square roots. When `k_z > k_y` the inequality reverses, so the pair is
/// returned swapped and still brackets `ln I_nu(k_y)`.
pub fn amos_log_bessel_bounds(nu: Order, kappa_y: f64, kappa_z: f64) -> Result<BoundPair> {
    for k in [kappa_y, kappa_z] {
        if !k.is_finite() || k <= 0.0 {
            return Err(Error::InvalidConcentration(k));
        }
    }
    let v = nu.value();
    let c_under = v + 0.5;
    let c_over = v + 1.5;
    let log_i_z = log_bessel_i(nu, kappa_z)?.log_value;
    let base = log_i_z + v * (kappa_y / kappa_z).ln();

    let with_constant = |c: f64| -> f64 {
        let root_y = kappa_y.hypot(c);
        let root_z = kappa_z.hypot(c);
        base + c_under * ((c_under + root_z) / (c_under + root_y)).ln()
            + (kappa_y * kappa_y - kappa_z * kappa_z) / (root_y + root_z)
    };

    let l = with_constant(c_over);
    let u = with_constant(c_under);
    if kappa_z > kappa_y {
        Ok(BoundPair::new(u, l, v))
    } else {
        Ok(BoundPair::new(l, u, v))
    }
}

/// The `k_z -> 0` specialization of the two-argument sandwich, matching the
/// uniform reference distribution:
///
/// `L_nu(k, 0) = ln(2/k)/2 - ln Gamma(nu+1)`
/// `  + c_under ln[(k nu + k) / (c_under + sqrt(k^2 + c_over^2))]`
/// `  + k^2 / (c_over + sqrt(k^2 + c_over^2))`
///
/// `U_nu(k, 0) = ln(2/k)/2 - ln Gamma(nu+1)`
/// `  + c_under ln[(k nu + k/2) / (c_under + sqrt(k^2 + c_under^2))]`
/// `  + k^2 / (c_under + sqrt(k^2 + c_under^2))`
///
/// The `k nu + k` versus `k nu + k/2` numerators and the differing constants
/// in the final terms are not typos: both expressions are the exact
/// `k_z -> 0` limits of the corresponding two-argument forms.
pub fn amos_log_bessel_bounds_uniform(nu: Order, kappa: f64) -> Result<BoundPair> {
    if !kappa.is_finite() || kappa <= 0.0 {
        return Err(Error::InvalidConcentration(kappa));
    }
    let v = nu.value();
    let c_under = v + 0.5;
    let c_over = v + 1.5;
    let base = 0.5 * (2.0 / kappa).ln() - log_gamma(v + 1.0)?;

    let root_over = kappa.hypot(c_over);
    let root_under = kappa.hypot(c_under);
    let lower = base
        + c_under * ((kappa * v + kappa) / (c_under + root_over)).ln()
        + kappa * kappa / (c_over + root_over);
    let upper = base
        + c_under * ((kappa * v + kappa / 2.0) / (c_under + root_under)).ln()
        + kappa * kappa / (c_under + root_under);
    Ok(BoundPair::new(lower, upper, v))
}

/// Ratio sandwich
/// `k / (c_under + sqrt(k^2 + c_over^2)) <= r_nu(k) <= k / (c_under + sqrt(k^2 + c_under^2))`,
/// a subset of the unit interval whose width shrinks like `1/k`.
pub fn amos_ratio_bounds(nu: Order, kappa: f64) -> Result<BoundPair> {
    if !kappa.is_finite() || kappa <= 0.0 {
        return Err(Error::InvalidConcentration(kappa));
    }
    let v = nu.value();
    let c_under = v + 0.5;
    let c_over = v + 1.5;
    Ok(BoundPair::new(
        kappa / (c_under + kappa.hypot(c_over)),
        kappa / (c_under + kappa.hypot(c_under)),
        v,
    ))
}

/// Linear-minus-half-log envelopes around `ln I_nu(kappa)`:
///
/// `lower = kappa - ln(kappa)/2 - nu ln 2 - ln Gamma(nu+1) - c_over`
/// `upper = kappa - ln(kappa)/2 + ln(2)/2 - ln Gamma(nu+1) + c_under ln(c_under)`
///
/// They bound the uniform-case sandwich from outside for every positive
/// `kappa`, which is what pins `ln I_nu(kappa)` to `kappa - ln(kappa)/2`
/// growth.
pub fn lf_envelopes(nu: Order, kappa: f64) -> Result<BoundPair> {
    if !kappa.is_finite() || kappa <= 0.0 {
        return Err(Error::InvalidConcentration(kappa));
    }
    let v = nu.value();
    let c_under = v + 0.5;
    let c_over = v + 1.5;
    let shared = kappa - 0.5 * kappa.ln() - log_gamma(v + 1.0)?;
    Ok(BoundPair::new(
        shared - v * 2.0_f64.ln() - c_over,
        shared + 0.5 * 2.0_f64.ln() + c_under * c_under.ln(),
        v,
    ))
}

/// Leading-order large-concentration expansion of the circular variance,
/// `1 - r_nu(kappa) ~ (nu + 1/2) / (kappa - nu^2/2 + 1/8)`.
///
/// The expansion is only meaningful for large concentration; arguments below
/// `10 (nu+1)^2` are rejected.
pub fn hankel_circular_variance(nu: Order, kappa: f64) -> Result<f64> {
    let v = nu.value();
    let threshold = 10.0 * (v + 1.0) * (v + 1.0);
    if !kappa.is_finite() || kappa < threshold {
        return Err(Error::BelowExpansionThreshold {
            nu: v,
            kappa,
            threshold,
        });
    }
    Ok((v + 0.5) / (kappa - 0.5 * v * v + 0.125))
}
