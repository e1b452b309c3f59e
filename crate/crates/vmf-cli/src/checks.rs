//! Built-in verification suites for `vmf check`: the Renyi identity grid,
//! Monte Carlo oracle agreement, the elementary bound sandwiches, and the
//! asymptotic-order checks. Each suite returns per-check results; the caller
//! renders the table and picks the exit code.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use vmf::{
    amos_log_bessel_bounds, amos_log_bessel_bounds_uniform, amos_ratio_bounds, bessel_ratio,
    chi_square, hellinger_sq, kl, lf_envelopes, log_bessel_i, mc_divergence, renyi,
    McDivergenceKind, Order, ReferenceDistribution, VmfDistribution,
};

pub struct CheckResult {
    pub suite: &'static str,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl CheckResult {
    fn new(suite: &'static str, name: &str, passed: bool, detail: String) -> Self {
        Self {
            suite,
            name: name.to_string(),
            passed,
            detail,
        }
    }
}

/// Accepts plain integers and scientific notation ("1e6").
pub fn parse_samples(text: &str) -> Option<u64> {
    let v: f64 = text.trim().parse().ok()?;
    if v.is_finite() && (1.0..=1e12).contains(&v) {
        Some(v as u64)
    } else {
        None
    }
}

fn random_unit(rng: &mut ChaCha8Rng, p: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..p).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let norm: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 0.1 {
            return v.iter().map(|x| x / norm).collect();
        }
    }
}

/// Renyi order-2, order-1/2, and order-1-limit identities on a random grid
/// of matched-concentration pairs.
pub fn identities(seed: u64) -> Vec<CheckResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dims = [2usize, 3, 4, 10];
    let mut max_chi: f64 = 0.0;
    let mut max_hell: f64 = 0.0;
    let mut max_limit: f64 = 0.0;
    let mut ok_chi = true;
    let mut ok_hell = true;
    let mut ok_limit = true;

    for i in 0..200 {
        let p = dims[i % dims.len()];
        let kappa = rng.gen_range(0.1_f64.ln()..100.0_f64.ln()).exp();
        let y = VmfDistribution::new(p, kappa, &random_unit(&mut rng, p)).unwrap();
        let z = ReferenceDistribution::Vmf(
            VmfDistribution::new(p, kappa, &random_unit(&mut rng, p)).unwrap(),
        );

        let d_chi = chi_square(&y, &z).unwrap().value;
        let d2 = renyi(&y, &z, 2.0).unwrap().value;
        let dev = (d2 - d_chi.ln_1p()).abs();
        max_chi = max_chi.max(dev);
        ok_chi &= dev <= 1e-9;

        let d_h2 = hellinger_sq(&y, &z).unwrap().value;
        let dh = renyi(&y, &z, 0.5).unwrap().value;
        if d_h2 < 2.0 - 2e-4 {
            let dev = (dh + 2.0 * (-d_h2 / 2.0).ln_1p()).abs();
            max_hell = max_hell.max(dev);
            ok_hell &= dev <= 1e-9;
        } else {
            ok_hell &= dh >= 18.0 && d_h2 <= 2.0;
        }

        let d_kl = kl(&y, &z).unwrap().value;
        for alpha in [1.0 - 1e-4, 1.0 + 1e-4] {
            let v = renyi(&y, &z, alpha).unwrap().value;
            let rel = (v - d_kl).abs() / (1.0 + d_kl);
            max_limit = max_limit.max(rel);
            ok_limit &= rel <= 1e-3;
        }
    }

    vec![
        CheckResult::new(
            "identities",
            "renyi(2) = ln(1 + chi2)",
            ok_chi,
            format!("max dev {max_chi:.2e} (tol 1e-9)"),
        ),
        CheckResult::new(
            "identities",
            "renyi(1/2) = -2 ln(1 - hellinger2/2)",
            ok_hell,
            format!("max dev {max_hell:.2e} (tol 1e-9)"),
        ),
        CheckResult::new(
            "identities",
            "renyi(1 +- 1e-4) -> kl",
            ok_limit,
            format!("max rel dev {max_limit:.2e} (tol 1e-3)"),
        ),
    ]
}

/// Analytic divergences against Monte Carlo estimates of the defining
/// integrals, three standard errors at the configured sample count.
pub fn oracle(seed: u64, samples: u64) -> Vec<CheckResult> {
    type Setting = (usize, f64, Option<(f64, f64)>, f64);
    let settings: [Setting; 6] = [
        (2, 0.5, None, 2.0),
        (2, 2.0, Some((1.0, 90.0)), 0.5),
        (3, 1.0, None, 2.0),
        (3, 2.0, Some((2.0, 170.0)), 0.5),
        (3, 3.0, Some((1.0, 45.0)), 1.5),
        (2, 5.0, Some((4.0, 30.0)), 2.0),
    ];

    let mut results = Vec::new();
    for (idx, &(p, kappa_y, reference, alpha)) in settings.iter().enumerate() {
        let mut mu_y = vec![0.0; p];
        mu_y[p - 1] = 1.0;
        let y = VmfDistribution::new(p, kappa_y, &mu_y).unwrap();
        let z = match reference {
            None => ReferenceDistribution::uniform(p).unwrap(),
            Some((kappa_z, angle_deg)) => {
                let theta = angle_deg.to_radians();
                let mut mu_z = mu_y.clone();
                mu_z[0] = theta.sin();
                mu_z[p - 1] = theta.cos();
                ReferenceDistribution::Vmf(VmfDistribution::new(p, kappa_z, &mu_z).unwrap())
            }
        };
        let reference_label = match reference {
            None => "uniform".to_string(),
            Some((kz, ang)) => format!("vmf(kz={kz}, angle={ang})"),
        };

        let mut worst: f64 = 0.0;
        let mut passed = true;
        for (value, kind) in [
            (kl(&y, &z).unwrap().value, McDivergenceKind::Kl),
            (chi_square(&y, &z).unwrap().value, McDivergenceKind::Chi),
            (
                hellinger_sq(&y, &z).unwrap().value,
                McDivergenceKind::Hellinger,
            ),
            (
                renyi(&y, &z, alpha).unwrap().value,
                McDivergenceKind::Renyi(alpha),
            ),
        ] {
            let est = mc_divergence(kind, &y, &z, samples, seed + idx as u64).unwrap();
            let zscore = (value - est.value).abs() / est.std_error;
            worst = worst.max(zscore);
            passed &= zscore <= 3.0;
        }
        results.push(CheckResult::new(
            "oracle",
            &format!("p={p} ky={kappa_y} vs {reference_label}"),
            passed,
            format!("worst |z| = {worst:.2} over 4 divergences (tol 3)"),
        ));
    }
    results
}

/// Log-Bessel sandwich, ratio sandwich, and envelope checks on the standard
/// grid; any violation fails the suite.
pub fn bounds() -> Vec<CheckResult> {
    let orders = [0.0, 0.5, 1.0, 2.0, 4.5];
    let kappas = [0.5, 1.0, 10.0, 100.0, 1e4];

    let mut sandwich = (0usize, 0usize);
    let mut uniform = (0usize, 0usize);
    let mut ratio = (0usize, 0usize);
    let mut envelope = (0usize, 0usize);

    for &nu in &orders {
        let order = Order::new(nu).unwrap();
        for &ky in &kappas {
            let target = log_bessel_i(order, ky).unwrap().log_value;
            for &kz in &[0.1, 1.0, ky] {
                let pair = amos_log_bessel_bounds(order, ky, kz).unwrap();
                sandwich.1 += 1;
                sandwich.0 += pair.contains(target) as usize;
            }
            let pair = amos_log_bessel_bounds_uniform(order, ky).unwrap();
            uniform.1 += 1;
            uniform.0 += pair.contains(target) as usize;

            let pair = amos_ratio_bounds(order, ky).unwrap();
            let r = bessel_ratio(order, ky).unwrap();
            ratio.1 += 1;
            ratio.0 += (pair.contains(r) && pair.lower > 0.0 && pair.upper < 1.0) as usize;

            let pair = lf_envelopes(order, ky).unwrap();
            envelope.1 += 1;
            envelope.0 += pair.contains(target) as usize;
        }
    }

    let entry = |name: &str, (ok, total): (usize, usize)| {
        CheckResult::new(
            "bounds",
            name,
            ok == total,
            format!("{ok}/{total} grid points inside"),
        )
    };
    vec![
        entry("two-argument log-Bessel sandwich", sandwich),
        entry("uniform-limit log-Bessel sandwich", uniform),
        entry("Bessel ratio sandwich", ratio),
        entry("linear-minus-half-log envelopes", envelope),
    ]
}

/// Growth orders at large concentration: KL and Renyi(2) scale with
/// ln(kappa), chi-square with at most kappa, and kappa times the circular
/// variance approaches nu + 1/2.
pub fn asymptotics() -> Vec<CheckResult> {
    let grid = [1e2, 1e3, 1e4, 1e5, 1e6];
    let mut ok_log = true;
    let mut worst_drift: f64 = 0.0;
    let mut ok_chi = true;
    let mut worst_chi: f64 = 0.0;

    for p in [2usize, 3] {
        let mut mu = vec![0.0; p];
        mu[p - 1] = 1.0;
        let z = ReferenceDistribution::Vmf(VmfDistribution::new(p, 1.0, &mu).unwrap());
        let mut kl_ratios = Vec::new();
        let mut renyi_ratios = Vec::new();
        for &ky in &grid {
            let y = VmfDistribution::new(p, ky, &mu).unwrap();
            kl_ratios.push(kl(&y, &z).unwrap().value / ky.ln());
            renyi_ratios.push(renyi(&y, &z, 2.0).unwrap().value / ky.ln());
            let chi_over_kappa = chi_square(&y, &z).unwrap().value / ky;
            worst_chi = worst_chi.max(chi_over_kappa);
            ok_chi &= chi_over_kappa.is_finite() && chi_over_kappa > 0.0 && chi_over_kappa <= 1.0;
        }
        for ratios in [&kl_ratios, &renyi_ratios] {
            let drift = (ratios[4] / ratios[3] - 1.0).abs();
            worst_drift = worst_drift.max(drift);
            ok_log &= drift < 0.2;
        }
    }

    let mut ok_cv = true;
    let mut worst_cv: f64 = 0.0;
    for &nu in &[0.0, 0.5, 1.0, 2.0] {
        let product = 1e5 * (1.0 - bessel_ratio(Order::new(nu).unwrap(), 1e5).unwrap());
        let rel = ((product - (nu + 0.5)) / (nu + 0.5)).abs();
        worst_cv = worst_cv.max(rel);
        ok_cv &= rel <= 0.01;
    }

    vec![
        CheckResult::new(
            "asymptotics",
            "kl, renyi(2) grow like ln(kappa)",
            ok_log,
            format!("ratio drift over last decade {worst_drift:.3} (tol 0.2)"),
        ),
        CheckResult::new(
            "asymptotics",
            "chi2/kappa stays bounded",
            ok_chi,
            format!("max chi2/kappa = {worst_chi:.3}"),
        ),
        CheckResult::new(
            "asymptotics",
            "kappa (1 - r) -> nu + 1/2",
            ok_cv,
            format!("worst rel dev {worst_cv:.2e} at kappa = 1e5 (tol 0.01)"),
        ),
    ]
}
