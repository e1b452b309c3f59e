//! The von Mises-Fisher distribution on the unit sphere in `R^p`: parameter
//! validation, log-density, log-partition function, first and second moments,
//! and the uniform-on-sphere reference density.
//!
//! The density is `f(x) = exp(kappa mu'x) / C_nu(kappa)` with
//! `C_nu(kappa) = (2 pi)^{nu+1} I_nu(kappa) / kappa^nu` and `nu = p/2 - 1`.
//! Strictly positive concentration is required; the uniform distribution is
//! represented explicitly by [`ReferenceDistribution::UniformOnSphere`]
//! rather than by `kappa = 0`, which keeps the divergence formulas free of
//! silent 0/0 limits.

use crate::bessel::{bessel_ratio, log_bessel_i, log_gamma, Order};
use crate::error::{Error, Result};

use std::f64::consts::PI;

/// Inputs claiming to be unit vectors may deviate from unit norm by this much
/// and are silently renormalized; anything worse is rejected.
pub const UNIT_NORM_TOLERANCE: f64 = 1e-9;

/// A unit vector in `R^p`, `p >= 2`.
#[derive(Debug, Clone, PartialEq)]
pub struct Direction {
    coords: Vec<f64>,
}

impl Direction {
    /// Accepts a vector that is already unit-norm up to
    /// [`UNIT_NORM_TOLERANCE`] and renormalizes it exactly.
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        let norm = validated_norm(&coords)?;
        if (norm - 1.0).abs() > UNIT_NORM_TOLERANCE {
            return Err(Error::InvalidDirection(format!(
                "norm {norm} deviates from 1 by more than {UNIT_NORM_TOLERANCE}"
            )));
        }
        Ok(Self::rescaled(coords, norm))
    }

    /// Normalizes an arbitrary nonzero vector onto the sphere.
    pub fn from_raw(raw: &[f64]) -> Result<Self> {
        let norm = validated_norm(raw)?;
        Ok(Self::rescaled(raw.to_vec(), norm))
    }

    fn rescaled(mut coords: Vec<f64>, norm: f64) -> Self {
        if norm != 1.0 {
            let inv = norm.recip();
            for c in &mut coords {
                *c *= inv;
            }
        }
        Self { coords }
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn p(&self) -> usize {
        self.coords.len()
    }

    /// Inner product with another direction of the same dimension.
    pub fn dot(&self, other: &Direction) -> f64 {
        debug_assert_eq!(self.p(), other.p());
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a * b)
            .sum()
    }
}

fn validated_norm(coords: &[f64]) -> Result<f64> {
    if coords.len() < 2 {
        return Err(Error::DimensionTooSmall(coords.len()));
    }
    if coords.iter().any(|c| !c.is_finite()) {
        return Err(Error::InvalidDirection("non-finite entry".into()));
    }
    let norm = coords.iter().map(|c| c * c).sum::<f64>().sqrt();
    if norm <= 0.0 {
        return Err(Error::InvalidDirection("zero vector".into()));
    }
    Ok(norm)
}

/// A von Mises-Fisher distribution with concentration `kappa > 0` and unit
/// mean direction `mu` on the sphere in `R^p`.
#[derive(Debug, Clone, PartialEq)]
pub struct VmfDistribution {
    p: usize,
    kappa: f64,
    mu: Direction,
}

impl VmfDistribution {
    /// Builds a distribution from raw parameters; `mu_raw` is normalized to
    /// unit length.
    pub fn new(p: usize, kappa: f64, mu_raw: &[f64]) -> Result<Self> {
        if p < 2 {
            return Err(Error::DimensionTooSmall(p));
        }
        if mu_raw.len() != p {
            return Err(Error::DimensionMismatch(p, mu_raw.len()));
        }
        if !kappa.is_finite() || kappa <= 0.0 {
            return Err(Error::InvalidConcentration(kappa));
        }
        Ok(Self {
            p,
            kappa,
            mu: Direction::from_raw(mu_raw)?,
        })
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn mu(&self) -> &Direction {
        &self.mu
    }

    /// The Bessel order `nu = p/2 - 1` attached to this dimension.
    pub fn nu(&self) -> Order {
        Order::from_dimension(self.p).expect("dimension validated at construction")
    }

    /// Log-density at a point on the sphere: `kappa (mu'x) - ln C_nu(kappa)`.
    pub fn log_pdf(&self, x: &Direction) -> Result<f64> {
        if x.p() != self.p {
            return Err(Error::DimensionMismatch(self.p, x.p()));
        }
        Ok(self.kappa * self.mu.dot(x) - log_normalizer(self.p, self.kappa)?)
    }

    /// First and second moments; see [`moments`].
    pub fn moments(&self) -> Result<MomentSummary> {
        moments(self)
    }
}

/// The reference side of a divergence: either another von Mises-Fisher
/// distribution or the uniform distribution on the same sphere.
#[derive(Debug, Clone, PartialEq)]
pub enum ReferenceDistribution {
    Vmf(VmfDistribution),
    UniformOnSphere { p: usize },
}

impl ReferenceDistribution {
    pub fn uniform(p: usize) -> Result<Self> {
        if p < 2 {
            return Err(Error::DimensionTooSmall(p));
        }
        Ok(Self::UniformOnSphere { p })
    }

    pub fn p(&self) -> usize {
        match self {
            Self::Vmf(d) => d.p(),
            Self::UniformOnSphere { p } => *p,
        }
    }
}

impl From<VmfDistribution> for ReferenceDistribution {
    fn from(d: VmfDistribution) -> Self {
        Self::Vmf(d)
    }
}

/// First and second moments of a von Mises-Fisher distribution.
///
/// `mean = r_nu(kappa) mu` and
/// `covariance = (r/kappa) I + (1 - (p/kappa) r - r^2) mu mu'`
/// with `r = r_nu(kappa)` the mean resultant length; the circular variance is
/// `1 - r`. The covariance trace equals `1 - r^2`.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentSummary {
    pub mean: Vec<f64>,
    /// Row-major `p x p` symmetric matrix.
    pub covariance: Vec<f64>,
    pub mean_resultant_length: f64,
    pub circular_variance: f64,
}

impl MomentSummary {
    pub fn p(&self) -> usize {
        self.mean.len()
    }

    pub fn covariance_at(&self, i: usize, j: usize) -> f64 {
        self.covariance[i * self.p() + j]
    }

    pub fn covariance_trace(&self) -> f64 {
        (0..self.p()).map(|i| self.covariance_at(i, i)).sum()
    }
}

/// `ln C_nu(kappa) = (nu+1) ln(2 pi) + ln I_nu(kappa) - nu ln kappa` for
/// `p >= 2` and `kappa > 0`.
pub fn log_normalizer(p: usize, kappa: f64) -> Result<f64> {
    if p < 2 {
        return Err(Error::DimensionTooSmall(p));
    }
    if !kappa.is_finite() || kappa <= 0.0 {
        return Err(Error::InvalidConcentration(kappa));
    }
    let nu = Order::from_dimension(p)?;
    log_partition_nu(nu.value(), kappa)
}

/// Log partition function by order, extended continuously to `kappa = 0`
/// where it equals the log surface area. Internal building block for the
/// divergence formulas, which evaluate it at combined concentrations that
/// may vanish.
pub(crate) fn log_partition_nu(nu: f64, kappa: f64) -> Result<f64> {
    if kappa == 0.0 {
        return log_surface_area_nu(nu);
    }
    let log_i = log_bessel_i(Order::new(nu)?, kappa)?.log_value;
    Ok((nu + 1.0) * (2.0 * PI).ln() + log_i - nu * kappa.ln())
}

/// `ln A_p` with `A_p = 2 pi^{nu+1} / Gamma(nu+1)` the sphere surface area.
pub(crate) fn log_surface_area_nu(nu: f64) -> Result<f64> {
    Ok(2.0_f64.ln() + (nu + 1.0) * PI.ln() - log_gamma(nu + 1.0)?)
}

/// Log-density of the uniform distribution on the sphere, `-ln A_p`.
pub fn log_uniform_density(p: usize) -> Result<f64> {
    let nu = Order::from_dimension(p)?;
    Ok(-log_surface_area_nu(nu.value())?)
}

/// First and second moments of `dist`.
pub fn moments(dist: &VmfDistribution) -> Result<MomentSummary> {
    let p = dist.p();
    let kappa = dist.kappa();
    let r = bessel_ratio(dist.nu(), kappa)?;
    let mu = dist.mu().coords();

    let mean: Vec<f64> = mu.iter().map(|m| r * m).collect();
    let diag = r / kappa;
    let outer = 1.0 - (p as f64 / kappa) * r - r * r;
    let mut covariance = vec![0.0; p * p];
    for i in 0..p {
        for j in 0..p {
            // Grouping mu[i]*mu[j] first keeps the matrix exactly symmetric.
            let mut v = outer * (mu[i] * mu[j]);
            if i == j {
                v += diag;
            }
            covariance[i * p + j] = v;
        }
    }

    Ok(MomentSummary {
        mean,
        covariance,
        mean_resultant_length: r,
        circular_variance: 1.0 - r,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn direction_construction_rules() {
        assert!(Direction::new(vec![1.0, 0.0]).is_ok());
        // Within tolerance: silently renormalized.
        let d = Direction::new(vec![1.0 + 5e-10, 0.0]).unwrap();
        assert!((d.coords()[0] - 1.0).abs() < 1e-15);
        // Beyond tolerance: rejected.
        assert!(Direction::new(vec![1.0 + 1e-6, 0.0]).is_err());
        assert!(Direction::new(vec![1.0]).is_err());
        assert!(Direction::new(vec![f64::NAN, 0.0]).is_err());
        assert!(Direction::from_raw(&[0.0, 0.0]).is_err());
    }

    #[test]
    fn vmf_construction_rules() {
        let d = VmfDistribution::new(2, 1.0, &[-1.0, 0.0]).unwrap();
        assert_eq!(d.nu().value(), 0.0);

        let d = VmfDistribution::new(3, 2.0, &[0.0, 0.0, 2.0]).unwrap();
        assert_eq!(d.mu().coords(), &[0.0, 0.0, 1.0]);

        assert!(VmfDistribution::new(3, 0.0, &[0.0, 0.0, 1.0]).is_err());
        assert!(VmfDistribution::new(3, -1.0, &[0.0, 0.0, 1.0]).is_err());
        assert!(VmfDistribution::new(1, 1.0, &[1.0]).is_err());
        assert!(VmfDistribution::new(3, 1.0, &[1.0, 0.0]).is_err());
        assert!(VmfDistribution::new(2, f64::INFINITY, &[1.0, 0.0]).is_err());
    }

    #[test]
    fn log_normalizer_p3_closed_form() {
        // C_{1/2}(kappa) = 4 pi sinh(kappa) / kappa
        let got = log_normalizer(3, 1.0).unwrap();
        let expect = (4.0 * PI * 1.0_f64.sinh()).ln();
        assert!((got - expect).abs() < 1e-13);
    }

    #[test]
    fn log_normalizer_small_kappa_approaches_circumference() {
        let got = log_normalizer(2, 1e-10).unwrap();
        assert!((got - (2.0 * PI).ln()).abs() < 1e-9);
    }

    #[test]
    fn log_normalizer_p2_series_value() {
        let mut i0 = 0.0;
        let mut factorial = 1.0;
        for k in 0..30u32 {
            if k > 0 {
                factorial *= k as f64;
            }
            i0 += 0.25_f64.powi(k as i32) / (factorial * factorial);
        }
        let got = log_normalizer(2, 1.0).unwrap();
        assert!((got - (2.0 * PI * i0).ln()).abs() < 1e-13);
    }

    #[test]
    fn log_pdf_reference_points() {
        // Mode of the circular case at kappa = 1.
        let d = VmfDistribution::new(2, 1.0, &[1.0, 0.0]).unwrap();
        let x = Direction::new(vec![1.0, 0.0]).unwrap();
        let got = d.log_pdf(&x).unwrap();
        let mut i0 = 0.0;
        let mut factorial = 1.0;
        for k in 0..30u32 {
            if k > 0 {
                factorial *= k as f64;
            }
            i0 += 0.25_f64.powi(k as i32) / (factorial * factorial);
        }
        assert!((got - (1.0 - (2.0 * PI * i0).ln())).abs() < 1e-13);

        // Orthogonal point: density is 1/C.
        let y = Direction::new(vec![0.0, 1.0]).unwrap();
        let got = d.log_pdf(&y).unwrap();
        assert!((got + log_normalizer(2, 1.0).unwrap()).abs() < 1e-15);

        // Near-uniform limit: log-density approaches -ln(4 pi) everywhere.
        let d = VmfDistribution::new(3, 1e-9, &[0.0, 1.0, 0.0]).unwrap();
        let x = Direction::new(vec![1.0, 0.0, 0.0]).unwrap();
        assert!((d.log_pdf(&x).unwrap() + (4.0 * PI).ln()).abs() < 1e-8);

        // Dimension mismatch.
        let d2 = VmfDistribution::new(2, 1.0, &[1.0, 0.0]).unwrap();
        assert!(d2.log_pdf(&x).is_err());
    }

    #[test]
    fn uniform_density_known_areas() {
        assert!((log_uniform_density(2).unwrap() + (2.0 * PI).ln()).abs() < 1e-15);
        assert!((log_uniform_density(3).unwrap() + (4.0 * PI).ln()).abs() < 1e-15);
        assert!((log_uniform_density(4).unwrap() + (2.0 * PI * PI).ln()).abs() < 1e-14);
        assert!(log_uniform_density(1).is_err());
    }

    #[test]
    fn moments_p3_closed_form() {
        let d = VmfDistribution::new(3, 1.0, &[0.0, 0.0, 1.0]).unwrap();
        let m = d.moments().unwrap();
        let r = 1.0 / 1.0_f64.tanh() - 1.0;
        assert!((m.mean[2] - r).abs() < 1e-13);
        assert!(m.mean[0].abs() < 1e-15 && m.mean[1].abs() < 1e-15);
        assert!((m.mean_resultant_length - r).abs() < 1e-13);
        assert!((m.covariance_trace() - (1.0 - r * r)).abs() < 1e-12);
        // Covariance is symmetric by construction; spot-check anyway.
        assert_eq!(m.covariance_at(0, 2), m.covariance_at(2, 0));
    }

    #[test]
    fn circular_variance_decays_like_inverse_kappa() {
        let d = VmfDistribution::new(3, 1e6, &[1.0, 0.0, 0.0]).unwrap();
        let m = d.moments().unwrap();
        // nu + 1/2 = 1 at p = 3, so the variance is ~1e-6 here.
        assert!((m.circular_variance * 1e6 - 1.0).abs() < 0.01);
    }

    #[test]
    fn mean_stays_inside_unit_ball() {
        for &p in &[2usize, 3, 5, 10] {
            for &kappa in &[1e-6, 0.5, 5.0, 500.0, 1e6] {
                let mut mu = vec![0.0; p];
                mu[p - 1] = -1.0;
                let d = VmfDistribution::new(p, kappa, &mu).unwrap();
                let m = d.moments().unwrap();
                let r = m.mean_resultant_length;
                assert!(r > 0.0 && r < 1.0, "p = {p}, kappa = {kappa}: r = {r}");
            }
        }
    }
}
