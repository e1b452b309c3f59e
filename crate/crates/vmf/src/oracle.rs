//! Independent verification machinery: uniform-sphere Monte Carlo integration,
//! closed-form half-integer Bessel evaluation, and finite-difference derivative
//! checks.
//!
//! Everything in this module is deliberately self-contained. The density,
//! partition function, and Bessel values used here are recomputed from scratch
//! (plain ascending series for integer orders, sinh/cosh closed forms for
//! half-integer orders) so that agreement with the analytic modules is a real
//! cross-check and not a tautology.
//!
//! Monte Carlo sampling uses ChaCha8 streams: estimates are bit-reproducible
//! for a fixed `(seed, n)` pair, independent of how many worker threads run
//! the shards.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::bessel::Order;
use crate::dist::{ReferenceDistribution, VmfDistribution};
use crate::error::{Error, Result};

/// Minimum sample count accepted by the Monte Carlo estimators.
pub const MC_MIN_SAMPLES: u64 = 1000;

/// Samples per shard; the shard count is a pure function of `n`, which keeps
/// the merged estimate deterministic regardless of thread scheduling.
const SHARD_SIZE: u64 = 1 << 18;

/// A Monte Carlo estimate together with its standard error and provenance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub value: f64,
    pub std_error: f64,
    pub n_samples: u64,
    pub seed: u64,
}

/// Divergence selector for [`mc_divergence`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum McDivergenceKind {
    Kl,
    Renyi(f64),
    Chi,
    Hellinger,
}

/// Uniform sampler on the unit sphere in `R^p`.
///
/// Draws `p` independent standard normals and normalizes; the rotation
/// invariance of the isotropic Gaussian makes the result uniform on the
/// sphere. Emitted points are unit-norm to well below 1e-12.
pub struct SphereSampler {
    p: usize,
    seed: u64,
    rng: ChaCha8Rng,
}

impl SphereSampler {
    pub fn new(p: usize, seed: u64) -> Result<Self> {
        Self::with_stream(p, seed, 0)
    }

    /// Sampler reading from a dedicated ChaCha stream, used for sharding.
    pub fn with_stream(p: usize, seed: u64, stream: u64) -> Result<Self> {
        if p < 2 {
            return Err(Error::DimensionTooSmall(p));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Ok(Self { p, seed, rng })
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn sample(&mut self) -> Vec<f64> {
        let mut x = vec![0.0; self.p];
        self.sample_into(&mut x);
        x
    }

    pub fn sample_into(&mut self, x: &mut [f64]) {
        debug_assert_eq!(x.len(), self.p);
        loop {
            let mut norm_sq = 0.0;
            for xi in x.iter_mut() {
                let g: f64 = StandardNormal.sample(&mut self.rng);
                *xi = g;
                norm_sq += g * g;
            }
            // A zero draw has probability ~0; guard against it anyway.
            if norm_sq > 1e-290 {
                let inv = norm_sq.sqrt().recip();
                for xi in x.iter_mut() {
                    *xi *= inv;
                }
                return;
            }
        }
    }
}

/// Running mean/variance accumulator (Welford), mergeable across shards.
#[derive(Debug, Clone, Copy, Default)]
struct RunningMoments {
    n: u64,
    mean: f64,
    m2: f64,
}

impl RunningMoments {
    fn push(&mut self, v: f64) {
        self.n += 1;
        let delta = v - self.mean;
        self.mean += delta / self.n as f64;
        self.m2 += delta * (v - self.mean);
    }

    fn merge(self, other: RunningMoments) -> RunningMoments {
        if self.n == 0 {
            return other;
        }
        if other.n == 0 {
            return self;
        }
        let n = self.n + other.n;
        let delta = other.mean - self.mean;
        let mean = self.mean + delta * other.n as f64 / n as f64;
        let m2 =
            self.m2 + other.m2 + delta * delta * (self.n as f64) * (other.n as f64) / n as f64;
        RunningMoments { n, mean, m2 }
    }

    fn std_error(&self) -> f64 {
        if self.n < 2 {
            return 0.0;
        }
        (self.m2 / (self.n - 1) as f64).sqrt() / (self.n as f64).sqrt()
    }
}

/// Estimate the uniform-sphere average of `integrand` from `n` sampled points.
///
/// Multiplying the returned value by the surface area of the sphere yields
/// the corresponding sphere integral. Shards of 2^18 samples are processed in
/// parallel on per-shard ChaCha streams and merged in index order, so the
/// result depends only on `(p, n, seed)`.
pub fn mc_sphere_expectation<F>(p: usize, integrand: F, n: u64, seed: u64) -> Result<McEstimate>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    if p < 2 {
        return Err(Error::DimensionTooSmall(p));
    }
    if n < MC_MIN_SAMPLES {
        return Err(Error::TooFewSamples {
            min: MC_MIN_SAMPLES,
            got: n,
        });
    }

    let shards = n.div_ceil(SHARD_SIZE);
    let stats = (0..shards)
        .into_par_iter()
        .map(|shard| {
            let count = SHARD_SIZE.min(n - shard * SHARD_SIZE);
            let mut sampler =
                SphereSampler::with_stream(p, seed, shard).expect("dimension already validated");
            let mut acc = RunningMoments::default();
            let mut x = vec![0.0; p];
            for _ in 0..count {
                sampler.sample_into(&mut x);
                acc.push(integrand(&x));
            }
            acc
        })
        .collect::<Vec<_>>();

    let total = stats
        .into_iter()
        .fold(RunningMoments::default(), RunningMoments::merge);

    Ok(McEstimate {
        value: total.mean,
        std_error: total.std_error(),
        n_samples: n,
        seed,
    })
}

/// Monte Carlo estimate of a divergence from its defining integral.
///
/// Uniform-sphere samples are combined with exact log-densities recomputed
/// inside this module. KL uses the importance weight `A_p * f_y(x)`; the
/// chi-square, Hellinger, and Renyi integrands are averaged directly, and the
/// Renyi log transform is applied after estimating the inner integral with a
/// first-order delta-method standard error.
pub fn mc_divergence(
    kind: McDivergenceKind,
    y: &VmfDistribution,
    z: &ReferenceDistribution,
    n: u64,
    seed: u64,
) -> Result<McEstimate> {
    let p = y.p();
    if p != z.p() {
        return Err(Error::DimensionMismatch(p, z.p()));
    }
    if let McDivergenceKind::Renyi(alpha) = kind {
        if !alpha.is_finite() || alpha <= 0.0 || alpha == 1.0 {
            return Err(Error::InvalidRenyiOrder(alpha));
        }
    }

    let log_area = log_surface_area(p);
    let dens_y = OracleDensity::from_vmf(y)?;
    let dens_z = OracleReference::from_reference(z)?;

    let base = match kind {
        McDivergenceKind::Kl => mc_sphere_expectation(
            p,
            |x| {
                let ly = dens_y.log_density(x);
                let lz = dens_z.log_density(x);
                (log_area + ly).exp() * (ly - lz)
            },
            n,
            seed,
        )?,
        McDivergenceKind::Chi => mc_sphere_expectation(
            p,
            |x| (log_area + 2.0 * dens_y.log_density(x) - dens_z.log_density(x)).exp(),
            n,
            seed,
        )?,
        McDivergenceKind::Hellinger => mc_sphere_expectation(
            p,
            |x| (log_area + 0.5 * dens_y.log_density(x) + 0.5 * dens_z.log_density(x)).exp(),
            n,
            seed,
        )?,
        McDivergenceKind::Renyi(alpha) => mc_sphere_expectation(
            p,
            |x| {
                (log_area + alpha * dens_y.log_density(x) + (1.0 - alpha) * dens_z.log_density(x))
                    .exp()
            },
            n,
            seed,
        )?,
    };

    let est = match kind {
        McDivergenceKind::Kl => base,
        McDivergenceKind::Chi => McEstimate {
            value: base.value - 1.0,
            ..base
        },
        McDivergenceKind::Hellinger => McEstimate {
            value: 2.0 * (1.0 - base.value),
            std_error: 2.0 * base.std_error,
            ..base
        },
        McDivergenceKind::Renyi(alpha) => McEstimate {
            value: base.value.ln() / (alpha - 1.0),
            std_error: base.std_error / ((alpha - 1.0).abs() * base.value),
            ..base
        },
    };
    Ok(est)
}

/// Exact `ln I_nu(z)` for half-integer orders `nu = k + 1/2`.
///
/// Starts from `I_{-1/2}(z) = sqrt(2/(pi z)) cosh z` and
/// `I_{1/2}(z) = sqrt(2/(pi z)) sinh z`, then climbs the recurrence
/// `I_{v+1}(z) = I_{v-1}(z) - (2v/z) I_v(z)` on exp-shifted values
/// `t_v = I_v(z) e^{-z} sqrt(2 pi z)`, which stay of order one for any `z`.
pub fn half_integer_log_bessel(nu: Order, z: f64) -> Result<f64> {
    let nu = nu.value();
    let two_nu = 2.0 * nu;
    if two_nu.fract() != 0.0 || (two_nu as i64) % 2 != 1 {
        return Err(Error::NotHalfInteger(nu));
    }
    if !z.is_finite() || z <= 0.0 {
        return Err(Error::InvalidArgument(z));
    }

    let steps = ((two_nu as i64) - 1) / 2;
    let e = (-2.0 * z).exp();
    let mut below = 1.0 + e; // t_{-1/2}
    let mut at = -(-2.0 * z).exp_m1(); // t_{1/2} = 1 - e^{-2z}, accurate near z = 0
    for m in 1..=steps {
        let next = below - (2.0 * m as f64 - 1.0) / z * at;
        if next <= 0.0 {
            return Err(Error::InvariantViolation(format!(
                "half-integer recurrence lost all precision at nu = {} with z = {z}",
                m as f64 + 0.5
            )));
        }
        below = at;
        at = next;
    }
    Ok(at.ln() + z - 0.5 * (2.0 * std::f64::consts::PI * z).ln())
}

/// Central finite difference of the log-partition function in kappa,
/// `(ln C(kappa + h) - ln C(kappa - h)) / (2h)`, using this module's own
/// partition-function evaluation.
pub fn finite_diff_log_normalizer(p: usize, kappa: f64, h: f64) -> Result<f64> {
    if p < 2 {
        return Err(Error::DimensionTooSmall(p));
    }
    if !kappa.is_finite() || kappa <= 0.0 {
        return Err(Error::InvalidConcentration(kappa));
    }
    if !h.is_finite() || h <= 0.0 || kappa - h <= 0.0 {
        return Err(Error::InvalidStep(format!(
            "step {h} is not in (0, kappa) for kappa = {kappa}"
        )));
    }
    Ok((log_partition(p, kappa + h)? - log_partition(p, kappa - h)?) / (2.0 * h))
}

// ---------------------------------------------------------------------------
// Self-contained density machinery (no calls into the analytic modules).
// ---------------------------------------------------------------------------

struct OracleDensity {
    kappa: f64,
    mu: Vec<f64>,
    log_c: f64,
}

impl OracleDensity {
    fn from_vmf(d: &VmfDistribution) -> Result<Self> {
        Ok(Self {
            kappa: d.kappa(),
            mu: d.mu().coords().to_vec(),
            log_c: log_partition(d.p(), d.kappa())?,
        })
    }

    fn log_density(&self, x: &[f64]) -> f64 {
        let dot: f64 = self.mu.iter().zip(x).map(|(m, xi)| m * xi).sum();
        self.kappa * dot - self.log_c
    }
}

enum OracleReference {
    Vmf(OracleDensity),
    Uniform { neg_log_area: f64 },
}

impl OracleReference {
    fn from_reference(z: &ReferenceDistribution) -> Result<Self> {
        match z {
            ReferenceDistribution::Vmf(d) => Ok(Self::Vmf(OracleDensity::from_vmf(d)?)),
            ReferenceDistribution::UniformOnSphere { p } => Ok(Self::Uniform {
                neg_log_area: -log_surface_area(*p),
            }),
        }
    }

    fn log_density(&self, x: &[f64]) -> f64 {
        match self {
            Self::Vmf(d) => d.log_density(x),
            Self::Uniform { neg_log_area } => *neg_log_area,
        }
    }
}

/// `ln Gamma(p/2)` for integer `p >= 1`, exact up to rounding: factorials for
/// even `p`, the double-factorial form `Gamma(k + 1/2) = sqrt(pi) (2k)! / (4^k k!)`
/// for odd `p`.
fn log_gamma_half_arg(p: usize) -> f64 {
    if p.is_multiple_of(2) {
        let m = p / 2;
        (2..m).map(|k| (k as f64).ln()).sum()
    } else {
        let k = (p - 1) / 2;
        let mut acc = 0.5 * std::f64::consts::PI.ln();
        for i in 1..=(2 * k) {
            acc += (i as f64).ln();
        }
        for i in 1..=k {
            acc -= (i as f64).ln();
        }
        acc - k as f64 * 4.0_f64.ln()
    }
}

/// `ln A_p` with `A_p = 2 pi^{p/2} / Gamma(p/2)`, the surface area of the
/// unit sphere in `R^p`.
fn log_surface_area(p: usize) -> f64 {
    2.0_f64.ln() + (p as f64 / 2.0) * std::f64::consts::PI.ln() - log_gamma_half_arg(p)
}

/// `ln C_nu(kappa)` with `C_nu(kappa) = (2 pi)^{nu+1} I_nu(kappa) / kappa^nu`,
/// recomputed from this module's own Bessel evaluations.
fn log_partition(p: usize, kappa: f64) -> Result<f64> {
    let nu = p as f64 / 2.0 - 1.0;
    let log_i = if !p.is_multiple_of(2) {
        half_integer_log_bessel(Order::new(nu)?, kappa)?
    } else {
        series_log_bessel(nu, kappa)?
    };
    Ok((nu + 1.0) * (2.0 * std::f64::consts::PI).ln() + log_i - nu * kappa.ln())
}

/// Ascending-series `ln I_nu(z)` for integer `nu >= 0`, summed in the linear
/// domain. Adequate for `z` up to a few hundred, which covers every oracle
/// use (the Monte Carlo suite is restricted to small concentrations anyway).
fn series_log_bessel(nu: f64, z: f64) -> Result<f64> {
    if !z.is_finite() || z <= 0.0 || z > 600.0 {
        return Err(Error::InvalidArgument(z));
    }
    let q = z * z / 4.0;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..=800 {
        let k = k as f64;
        term *= q / (k * (nu + k));
        sum += term;
        if term < sum * 1e-18 {
            break;
        }
    }
    let m = nu as usize;
    let log_gamma_nu_plus_1: f64 = (2..=m).map(|k| (k as f64).ln()).sum();
    Ok(nu * (z / 2.0).ln() - log_gamma_nu_plus_1 + sum.ln())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn order(nu: f64) -> Order {
        Order::new(nu).unwrap()
    }

    #[test]
    fn constant_integrand_has_zero_error() {
        let est = mc_sphere_expectation(3, |_| 1.0, 10_000, 7).unwrap();
        assert_eq!(est.value, 1.0);
        assert_eq!(est.std_error, 0.0);
        assert_eq!(est.n_samples, 10_000);
    }

    #[test]
    fn estimates_are_bit_reproducible() {
        let f = |x: &[f64]| (x[0] + 0.3 * x[1]).exp();
        let a = mc_sphere_expectation(3, f, 300_000, 42).unwrap();
        let b = mc_sphere_expectation(3, f, 300_000, 42).unwrap();
        assert_eq!(a, b);
        let c = mc_sphere_expectation(3, f, 300_000, 43).unwrap();
        assert_ne!(a.value, c.value);
    }

    #[test]
    fn sampler_points_are_unit_norm() {
        let mut s = SphereSampler::new(5, 11).unwrap();
        for _ in 0..1000 {
            let x = s.sample();
            let norm: f64 = x.iter().map(|v| v * v).sum::<f64>().sqrt();
            assert!((norm - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn sampler_is_isotropic() {
        // Empirical mean of n uniform points has norm O(1/sqrt(n)).
        let n = 1_000_000u64;
        for p in [2usize, 3] {
            let mut mean = vec![0.0; p];
            let mut s = SphereSampler::new(p, 5).unwrap();
            let mut x = vec![0.0; p];
            for _ in 0..n {
                s.sample_into(&mut x);
                for (m, xi) in mean.iter_mut().zip(&x) {
                    *m += xi;
                }
            }
            let norm: f64 = mean.iter().map(|v| v * v).sum::<f64>().sqrt() / n as f64;
            assert!(norm <= 4.0 / (n as f64).sqrt(), "p = {p}: norm = {norm}");
        }
    }

    #[test]
    fn too_few_samples_rejected() {
        let err = mc_sphere_expectation(2, |_| 1.0, 999, 0).unwrap_err();
        assert!(matches!(err, Error::TooFewSamples { .. }));
    }

    #[test]
    fn half_integer_matches_sinh_closed_form() {
        // I_{1/2}(1) = sqrt(2/pi) sinh 1
        let expect = (2.0 / std::f64::consts::PI).sqrt() * 1.0_f64.sinh();
        let got = half_integer_log_bessel(order(0.5), 1.0).unwrap();
        assert!((got - expect.ln()).abs() < 1e-14);

        // I_{3/2}(2) = sqrt(2/(2 pi)) (cosh 2 - sinh 2 / 2)
        let expect = (2.0 / (2.0 * std::f64::consts::PI)).sqrt()
            * (2.0_f64.cosh() - 2.0_f64.sinh() / 2.0);
        let got = half_integer_log_bessel(order(1.5), 2.0).unwrap();
        assert!((got - expect.ln()).abs() < 1e-13);
    }

    #[test]
    fn half_integer_large_argument_stays_finite() {
        // sinh overflows near z = 710; the shifted recurrence must not.
        let got = half_integer_log_bessel(order(0.5), 700.0).unwrap();
        let expect = 700.0 - 0.5 * (2.0 * std::f64::consts::PI * 700.0).ln();
        assert!((got - expect).abs() < 1e-12);
    }

    #[test]
    fn half_integer_recurrence_is_self_consistent() {
        // |I_v - (z/(2v)) (I_{v-1} - I_{v+1})| / I_v at 1e-12
        for &nu in &[1.5, 2.5] {
            for &z in &[0.5, 1.0, 5.0, 20.0] {
                let lo = half_integer_log_bessel(order(nu - 1.0), z).unwrap();
                let mid = half_integer_log_bessel(order(nu), z).unwrap();
                let hi = half_integer_log_bessel(order(nu + 1.0), z).unwrap();
                let residual = (z / (2.0 * nu)) * ((lo - mid).exp() - (hi - mid).exp());
                assert!(
                    (residual - 1.0).abs() < 1e-12,
                    "nu = {nu}, z = {z}: residual {residual}"
                );
            }
        }
    }

    #[test]
    fn half_integer_rejects_bad_orders() {
        assert!(half_integer_log_bessel(order(1.0), 1.0).is_err());
        assert!(half_integer_log_bessel(order(0.5), 0.0).is_err());
    }

    #[test]
    fn finite_diff_matches_closed_form_ratio_at_p3() {
        // d/dkappa ln C_{1/2}(kappa) = coth(kappa) - 1/kappa
        let fd = finite_diff_log_normalizer(3, 1.0, 1e-5).unwrap();
        let exact = 1.0_f64.tanh().recip() - 1.0;
        assert!((fd - exact).abs() < 1e-6, "fd = {fd}, exact = {exact}");
    }

    #[test]
    fn series_log_bessel_small_order_values() {
        // I_0(1) from an unrelated 30-term literal sum.
        let mut expect = 0.0;
        let mut fact = 1.0;
        for k in 0..30i32 {
            if k > 0 {
                fact *= f64::from(k);
            }
            expect += 0.25_f64.powi(k) / (fact * fact);
        }
        let got = series_log_bessel(0.0, 1.0).unwrap();
        assert!((got - expect.ln()).abs() < 1e-14);
    }

    #[test]
    fn surface_areas_match_known_values() {
        let two_pi = 2.0 * std::f64::consts::PI;
        assert!((log_surface_area(2) - two_pi.ln()).abs() < 1e-15);
        assert!((log_surface_area(3) - (2.0 * two_pi).ln()).abs() < 1e-15);
        assert!((log_surface_area(4) - (two_pi * std::f64::consts::PI).ln()).abs() < 1e-15);
    }
}
