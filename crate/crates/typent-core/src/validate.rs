//! The acceptance suite: thirteen numbered validation criteria covering the
//! closed forms, the Monte Carlo samplers, the asymptotic expansions, the
//! Hamiltonian pipelines and the spectral statistics, each with pinned
//! tolerances. `run_criterion` powers both the `acceptance` test target and
//! the CLI `validate` subcommand.

use crate::asymptotics::{bosonic_fixed_n_exact, bosonic_sector_entropy, gaussian_weighted_thermo};
use crate::closedform::{
    fixed_n_average, gaussian_average, gaussian_fixed_n_average,
    gaussian_fixed_n_variance_asymptotic, gaussian_fixed_n_variance_summand_limit,
    gaussian_variance_summand_limit, page_average, FixedNSpec,
};
use crate::ensembles::{
    mc_estimate, sample_gaussian_fixed_n, sample_gaussian_state, sample_haar_state,
    sample_sector_state, stream_rng,
};
use crate::entropy::{rdm_spectrum_full, rdm_spectrum_sector, vn_entropy, PartitionSpec};
use crate::hamiltonians::{
    build_anderson_3d, build_free_fermion_1d, build_hcb_chain, build_syk2_dirac,
    interacting_eigenstate_average, quadratic_eigenstate_average, EigenstateSampling,
};
use crate::linalg;
use crate::spectral::{
    bulk_spacings, chi2_goodness_of_fit, direct_sum_gue_spacing, gue_matrix,
    sample_gaussian_ensemble, spacing_ks, unfold, GaussianEnsemble, SpacingReference,
};
use num_complex::Complex64 as C64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;
use std::f64::consts::{LN_2, PI};

/// How much work to spend: `Quick` shrinks sample counts (laptop-minutes),
/// `Full` runs the criteria at their stated scale.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Quick,
    Full,
}

/// One threshold check inside a criterion.
#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub check: String,
    pub measured: f64,
    pub requirement: String,
    pub passed: bool,
}

impl CheckResult {
    fn new(check: &str, measured: f64, requirement: String, passed: bool) -> Self {
        CheckResult { check: check.to_string(), measured, requirement, passed }
    }
}

/// Outcome of one acceptance criterion.
#[derive(Debug, Clone, Serialize)]
pub struct CriterionReport {
    pub id: u32,
    pub name: String,
    pub passed: bool,
    pub checks: Vec<CheckResult>,
}

impl CriterionReport {
    fn from_checks(id: u32, name: &str, checks: Vec<CheckResult>) -> Self {
        let passed = checks.iter().all(|c| c.passed);
        CriterionReport { id, name: name.to_string(), passed, checks }
    }

    /// One pass/fail line for terminal output.
    pub fn summary_line(&self) -> String {
        let status = if self.passed { "PASS" } else { "FAIL" };
        let detail = self
            .checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| c.check.as_str())
            .collect::<Vec<_>>()
            .join("; ");
        if detail.is_empty() {
            format!("criterion {:2} {status} — {}", self.id, self.name)
        } else {
            format!("criterion {:2} {status} — {}: {detail}", self.id, self.name)
        }
    }
}

/// All criterion ids, in order.
pub fn criterion_ids() -> impl Iterator<Item = u32> {
    1..=13
}

/// Runs every criterion.
pub fn run_all(suite: Suite, master_seed: u64) -> Vec<CriterionReport> {
    criterion_ids().map(|id| run_criterion(id, suite, master_seed)).collect()
}

/// Runs one criterion by id (1..=13).
pub fn run_criterion(id: u32, suite: Suite, master_seed: u64) -> CriterionReport {
    match id {
        1 => criterion1(0.0),
        2 => criterion2(suite, master_seed),
        3 => criterion3(suite, master_seed),
        4 => criterion4(suite, master_seed),
        5 => criterion5(),
        6 => criterion6(),
        7 => criterion7(suite, master_seed),
        8 => criterion8(suite, master_seed),
        9 => criterion9(suite),
        10 => criterion10(suite, master_seed),
        11 => criterion11(master_seed),
        12 => criterion12(suite, master_seed),
        13 => criterion13(suite, master_seed),
        _ => panic!("criterion id must be 1..=13, got {id}"),
    }
}

fn abs_check(name: &str, measured: f64, target: f64, tol: f64) -> CheckResult {
    CheckResult::new(
        name,
        measured,
        format!("|x - {target:.15}| <= {tol:.1e}"),
        (measured - target).abs() <= tol,
    )
}

fn sigma_check(name: &str, mean: f64, stderr: f64, target: f64, n_sigma: f64) -> CheckResult {
    let z = (mean - target) / stderr;
    CheckResult::new(
        name,
        mean,
        format!("|mean - {target:.6}| < {n_sigma} stderr (z = {z:.2})"),
        z.abs() < n_sigma,
    )
}

// 1. closed-form cross-ensemble oracle battery
pub(crate) fn criterion1(tamper: f64) -> CriterionReport {
    let checks = vec![
        abs_check("page_average(2,2)", page_average(2, 2) + tamper, 1.0 / 3.0, 1e-12),
        abs_check("page_average(2,4)", page_average(2, 4), 107.0 / 210.0, 1e-12),
        abs_check(
            "gaussian_average(2,1)",
            gaussian_average(&PartitionSpec::new(2, 1).unwrap()),
            0.5,
            1e-12,
        ),
        abs_check(
            "gaussian_fixed_n_average(2,1,1)",
            gaussian_fixed_n_average(&FixedNSpec::new(2, 1, 1).unwrap()),
            0.5,
            1e-12,
        ),
        abs_check(
            "fixed_n_average(2,1,1)",
            fixed_n_average(&FixedNSpec::new(2, 1, 1).unwrap()),
            0.5,
            1e-12,
        ),
    ];
    CriterionReport::from_checks(1, "closed-form oracle battery", checks)
}

// 2. MC vs exact closed forms, general states
fn criterion2(suite: Suite, seed: u64) -> CriterionReport {
    let (n_full, n_sector) = match suite {
        Suite::Full => (10_000, 2_000),
        Suite::Quick => (2_000, 500),
    };
    let mut checks = Vec::new();
    for v_a in [3u32, 5] {
        let part = PartitionSpec::new(10, v_a).unwrap();
        let est = mc_estimate(
            |rng| sample_haar_state(10, rng),
            |s| vn_entropy(&rdm_spectrum_full(s, &part).unwrap()),
            n_full,
            seed.wrapping_add(u64::from(v_a)),
            0,
        );
        let closed = page_average(1 << v_a, 1 << (10 - v_a));
        checks.push(sigma_check(
            &format!("Haar V=10 V_A={v_a} vs Page"),
            est.mean,
            est.stderr,
            closed,
            4.0,
        ));
    }
    let part = PartitionSpec::new(12, 4).unwrap();
    let est = mc_estimate(
        |rng| sample_sector_state(12, 6, rng),
        |s| vn_entropy(&rdm_spectrum_sector(s, &part).unwrap()),
        n_sector,
        seed.wrapping_add(100),
        0,
    );
    let closed = fixed_n_average(&FixedNSpec::new(12, 4, 6).unwrap());
    checks.push(sigma_check("sector V=12 N=6 V_A=4", est.mean, est.stderr, closed, 4.0));
    CriterionReport::from_checks(2, "MC vs exact, general states", checks)
}

// 3. MC vs exact closed forms, Gaussian states
fn criterion3(suite: Suite, seed: u64) -> CriterionReport {
    let n = match suite {
        Suite::Full => 2_000,
        Suite::Quick => 500,
    };
    let est = mc_estimate(
        |rng| sample_gaussian_state(50, rng),
        |rep| rep.entanglement_entropy(20).unwrap(),
        n,
        seed.wrapping_add(31),
        0,
    );
    let closed = gaussian_average(&PartitionSpec::new(50, 20).unwrap());
    let mut checks = vec![sigma_check("Gaussian V=50 V_A=20", est.mean, est.stderr, closed, 4.0)];

    let est = mc_estimate(
        |rng| sample_gaussian_fixed_n(100, 50, rng),
        |rep| rep.entanglement_entropy(30).unwrap(),
        n,
        seed.wrapping_add(37),
        0,
    );
    let closed = gaussian_fixed_n_average(&FixedNSpec::new(100, 30, 50).unwrap());
    checks.push(sigma_check("Gaussian V=100 N=50 V_A=30", est.mean, est.stderr, closed, 4.0));
    CriterionReport::from_checks(3, "MC vs exact, Gaussian states", checks)
}

// 4. variance closed forms
fn criterion4(suite: Suite, seed: u64) -> CriterionReport {
    let n = match suite {
        Suite::Full => 10_000,
        Suite::Quick => 2_000,
    };
    let est = mc_estimate(
        |rng| sample_gaussian_state(200, rng),
        |rep| rep.entanglement_entropy(80).unwrap(),
        n,
        seed.wrapping_add(41),
        0,
    );
    let f = 0.4;
    let target = (f + f * f + (1.0f64 - f).ln()) / 2.0;
    let mut checks = vec![CheckResult::new(
        "sample variance, arbitrary-N V=200 f=0.4",
        est.sample_variance,
        format!("within 10% of {target:.6}"),
        (est.sample_variance / target - 1.0).abs() < 0.10,
    )];

    let est = mc_estimate(
        |rng| sample_gaussian_fixed_n(200, 100, rng),
        |rep| rep.entanglement_entropy(80).unwrap(),
        n,
        seed.wrapping_add(43),
        0,
    );
    let target = gaussian_fixed_n_variance_asymptotic(0.4, 0.5).unwrap();
    checks.push(CheckResult::new(
        "sample variance, fixed-N V=200 n=0.5 f=0.4",
        est.sample_variance,
        format!("within 10% of {target:.6}"),
        (est.sample_variance / target - 1.0).abs() < 0.10,
    ));

    // truncated double sums of the limit summands against both closed forms
    let f = 0.3;
    let mut arb_sum = 0.0;
    let mut fixed_sum = 0.0;
    for k in 0..=500u32 {
        arb_sum += f64::from(k + 1) * gaussian_variance_summand_limit(f, 0, k);
        fixed_sum +=
            f64::from(k + 1) * gaussian_fixed_n_variance_summand_limit(f, 0.4, 0, k).unwrap();
    }
    checks.push(abs_check(
        "summand sum vs arbitrary-N closed form (f=0.3)",
        arb_sum,
        (f + f * f + (1.0f64 - f).ln()) / 2.0,
        1e-6,
    ));
    checks.push(abs_check(
        "summand sum vs fixed-N closed form (f,n)=(0.3,0.4)",
        fixed_sum,
        gaussian_fixed_n_variance_asymptotic(0.3, 0.4).unwrap(),
        1e-6,
    ));
    CriterionReport::from_checks(4, "variance closed forms", checks)
}

fn fit_slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}

// 5. asymptotic-order fits (pure formula evaluation)
fn criterion5() -> CriterionReport {
    let vs = [64u32, 128, 256, 512, 1024];
    // fixed-N Gaussian expansion error ~ V^{-3}
    let pts: Vec<(f64, f64)> = vs
        .iter()
        .map(|&v| {
            let exact = gaussian_fixed_n_average(&FixedNSpec::new(v, v / 4, v / 2).unwrap());
            let resid = (exact - crate::asymptotics::gaussian_fixed_n_thermo(v, 0.25, 0.5)).abs();
            (f64::from(v).ln(), resid.ln())
        })
        .collect();
    let slope_fixed = fit_slope(&pts);
    let mut checks = vec![CheckResult::new(
        "fixed-N Gaussian residual slope at (f,n)=(0.25,0.5)",
        slope_fixed,
        "-3 ± 0.3".to_string(),
        (slope_fixed + 3.0).abs() < 0.3,
    )];

    // Weighted Gaussian residual after the 1/V term. The reference is the
    // binomial average of the per-sector expansion (the construction behind
    // the stated orders): against the fully exact sector sum the residual is
    // exponentially small and sinks below the f64 floor long before a
    // five-point fit is possible. The off-critical V grid starts at 256
    // because below that an exponentially decaying kink-tail contribution
    // still dominates the V^{-3} truncation term.
    let weighted_slope = |nbar: f64, grid: &[u32]| -> f64 {
        let pts: Vec<(f64, f64)> = grid
            .iter()
            .map(|&v| {
                let resid =
                    (weighted_expansion_average(v, 0.25, nbar) - gaussian_weighted_thermo(v, 0.25, nbar)).abs();
                (f64::from(v).ln(), resid.ln())
            })
            .collect();
        fit_slope(&pts)
    };
    let slope_crit = weighted_slope(0.25, &vs);
    checks.push(CheckResult::new(
        "weighted Gaussian residual slope at f=n̄=0.25",
        slope_crit,
        "-1.5 ± 0.3".to_string(),
        (slope_crit + 1.5).abs() < 0.3,
    ));
    let slope_off = weighted_slope(0.4, &[256, 384, 512, 768, 1024]);
    checks.push(CheckResult::new(
        "weighted Gaussian residual slope at (f,n̄)=(0.25,0.4)",
        slope_off,
        "-3 ± 0.3".to_string(),
        (slope_off + 3.0).abs() < 0.3,
    ));
    CriterionReport::from_checks(5, "asymptotic-order fits", checks)
}

// Binomial average of the per-sector large-V expansion, with
// recurrence-built weights and compensated summation (ln-gamma jitter and
// naive summation would floor the residual near 1e-10).
fn weighted_expansion_average(v: u32, f: f64, nbar: f64) -> f64 {
    let lr = (nbar / (1.0 - nbar)).ln();
    let vd = v as usize;
    let mut lw = vec![0.0f64; vd + 1];
    for n in 0..vd {
        lw[n + 1] = lw[n] + ((f64::from(v) - n as f64) / (n as f64 + 1.0)).ln() + lr;
    }
    let m = lw.iter().cloned().fold(f64::MIN, f64::max);
    let weights: Vec<f64> = lw.iter().map(|x| (x - m).exp()).collect();
    let z: f64 = weights.iter().sum();
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for n in 1..vd {
        let term = weights[n] / z
            * crate::asymptotics::gaussian_fixed_n_thermo(v, f, n as f64 / f64::from(v));
        let y = term - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    sum
}

// 6. symmetry suite on a 200-point grid
fn criterion6() -> CriterionReport {
    let mut worst_general: f64 = 0.0;
    let mut worst_gaussian: f64 = 0.0;
    let mut points = 0;
    let mut idx = 0u32;
    'outer: for v in [10u32, 17, 24, 31, 38, 45, 52, 60] {
        for _ in 0..25 {
            idx += 1;
            let v_a = 1 + (idx * 13) % (v - 1);
            let n = 1 + (idx * 7) % (v - 1);
            let base = fixed_n_average(&FixedNSpec::new(v, v_a, n).unwrap());
            let hole = fixed_n_average(&FixedNSpec::new(v, v_a, v - n).unwrap());
            let swap = fixed_n_average(&FixedNSpec::new(v, v - v_a, n).unwrap());
            worst_general = worst_general.max((base - hole).abs()).max((base - swap).abs());
            let gbase = gaussian_fixed_n_average(&FixedNSpec::new(v, v_a, n).unwrap());
            let ghole = gaussian_fixed_n_average(&FixedNSpec::new(v, v_a, v - n).unwrap());
            let gswap = gaussian_fixed_n_average(&FixedNSpec::new(v, v - v_a, n).unwrap());
            let gpart = gaussian_fixed_n_average(&FixedNSpec::new(v, n, v_a).unwrap());
            worst_gaussian = worst_gaussian
                .max((gbase - ghole).abs())
                .max((gbase - gswap).abs())
                .max((gbase - gpart).abs());
            points += 1;
            if points >= 200 {
                break 'outer;
            }
        }
    }
    let checks = vec![
        CheckResult::new(
            "fixed-N average symmetry residual (200 points)",
            worst_general,
            "<= 1e-10".into(),
            worst_general <= 1e-10,
        ),
        CheckResult::new(
            "Gaussian fixed-N symmetry residual incl. N<->V_A",
            worst_gaussian,
            "<= 1e-10".into(),
            worst_gaussian <= 1e-10,
        ),
    ];
    CriterionReport::from_checks(6, "symmetry suite", checks)
}

// 7. SYK2 eigenstate average
fn criterion7(suite: Suite, seed: u64) -> CriterionReport {
    let v = 256u32;
    let (n_per_realization, realizations) = match suite {
        Suite::Full => (500u64, 4u64),
        Suite::Quick => (150, 2),
    };
    let mut checks = Vec::new();
    for (fi, f) in [0.1f64, 0.2, 0.3, 0.4, 0.5].iter().enumerate() {
        let v_a = (f * f64::from(v)).round() as u32;
        let f_eff = f64::from(v_a) / f64::from(v);
        let mut means = Vec::new();
        let mut var_sum = 0.0;
        let mut n_total = 0u64;
        for r in 0..realizations {
            let model = build_syk2_dirac(v, seed.wrapping_add(1000 * r + fi as u64));
            let est = quadratic_eigenstate_average(
                &model,
                v_a,
                EigenstateSampling::Sampled {
                    n: n_per_realization,
                    seed: seed.wrapping_add(77 + r),
                },
            )
            .unwrap();
            means.push(est.mean);
            var_sum += est.sample_variance * (est.n_samples - 1) as f64;
            n_total += est.n_samples;
        }
        let mean = means.iter().sum::<f64>() / means.len() as f64;
        let stderr =
            (var_sum / (n_total - realizations) as f64 / n_total as f64).sqrt();
        let volume_term = f64::from(v)
            * ((f_eff - 1.0) * (1.0 - f_eff).ln() + f_eff * (LN_2 - 1.0));
        let deficit = volume_term - mean;
        checks.push(CheckResult::new(
            &format!("volume-law deficit at f={f}"),
            deficit,
            format!("within 15% of f/2 = {:.5}", f_eff / 2.0),
            (deficit / (f_eff / 2.0) - 1.0).abs() < 0.15,
        ));
        if *f == 0.5 {
            let residual = deficit - f_eff / 2.0;
            let target = 1.0 / (3.0 * (2.0 * PI).sqrt()) / f64::from(v).sqrt();
            checks.push(CheckResult::new(
                "f=0.5 residual after subtracting f/2",
                residual,
                format!("negative, |x| in [{:.5}, {:.5}] (stderr {stderr:.5})", target / 2.0, target * 2.0),
                residual < 0.0 && residual.abs() >= target / 2.0 && residual.abs() <= target * 2.0,
            ));
        }
    }
    CriterionReport::from_checks(7, "SYK2 eigenstate average", checks)
}

// 8. translationally invariant free fermions
fn criterion8(suite: Suite, seed: u64) -> CriterionReport {
    let n = match suite {
        Suite::Full => 100_000u64,
        Suite::Quick => 20_000,
    };
    let model = build_free_fermion_1d(32);
    let est = quadratic_eigenstate_average(
        &model,
        16,
        EigenstateSampling::Sampled { n, seed: seed.wrapping_add(88) },
    )
    .unwrap();
    let scale = 16.0 * LN_2;
    let ratio = est.mean / scale;
    let ratio_stderr = est.stderr / scale;
    let gauss = 2.0 - 1.0 / LN_2; // s∞ of the Gaussian w=0 ensemble, 0.5573
    let checks = vec![
        CheckResult::new(
            "s̄/((V/2) ln 2) brackets 0.5378",
            ratio,
            "within [0.530, 0.545]".into(),
            (0.530..=0.545).contains(&ratio),
        ),
        CheckResult::new(
            "distance from Gaussian value 0.5573 in stderr units",
            (ratio - gauss).abs() / ratio_stderr,
            ">= 5".into(),
            (ratio - gauss).abs() >= 5.0 * ratio_stderr,
        ),
    ];
    CriterionReport::from_checks(8, "translationally invariant free fermions", checks)
}

// 9. hard-core boson chain
fn criterion9(suite: Suite) -> CriterionReport {
    let vs: &[u32] = match suite {
        Suite::Full => &[10, 12, 14],
        Suite::Quick => &[10, 12],
    };
    let mut checks = Vec::new();
    let mut prev = f64::INFINITY;
    for &v in vs {
        let model = build_hcb_chain(v, v / 2, 1.0, 1.0, 1.1, 1.1).unwrap();
        let est = interacting_eigenstate_average(&model, v / 2, 0.2).unwrap();
        let closed = fixed_n_average(&FixedNSpec::new(v, v / 2, v / 2).unwrap());
        let delta = closed - est.mean;
        checks.push(CheckResult::new(
            &format!("δ·V at V={v}"),
            delta * f64::from(v),
            format!("δ > 0, decreasing (prev δ = {prev:.4}), δ·V in [0.8, 3.3]"),
            delta > 0.0 && delta < prev && (0.8..=3.3).contains(&(delta * f64::from(v))),
        ));
        prev = delta;
    }
    CriterionReport::from_checks(9, "hard-core boson chain", checks)
}

// 10. spectral statistics
fn criterion10(suite: Suite, seed: u64) -> CriterionReport {
    let (n_gue, n_direct) = match suite {
        Suite::Full => (320usize, 4_000usize),
        Suite::Quick => (64, 1_000),
    };
    let d = 400;
    let mut rng = stream_rng(seed, 901);
    let mut pooled = Vec::with_capacity(n_gue * 320);
    for _ in 0..n_gue {
        let spec = sample_gaussian_ensemble(GaussianEnsemble::Gue, d, &mut rng);
        pooled.extend(bulk_spacings(&unfold(&spec, 7).unwrap(), 0.8));
    }
    let (d_surmise, _) = spacing_ks(&pooled, SpacingReference::WignerSurmise { beta: 2 });
    let (d_poisson, _) = spacing_ks(&pooled, SpacingReference::Poisson);
    let mut checks = vec![
        CheckResult::new(
            &format!("GUE bulk KS distance to β=2 surmise ({} spacings)", pooled.len()),
            d_surmise,
            "< 0.05".into(),
            d_surmise < 0.05,
        ),
        CheckResult::new("GUE bulk KS distance to Poisson", d_poisson, "> 0.2".into(), d_poisson > 0.2),
    ];

    let mut rng = stream_rng(seed, 902);
    let gaps = direct_sum_gue_spacing(5, 100, n_direct, &mut rng);
    let (d_gue, _) = spacing_ks(&gaps, SpacingReference::WignerSurmise { beta: 2 });
    let (d_poi, _) = spacing_ks(&gaps, SpacingReference::Poisson);
    checks.push(CheckResult::new(
        "direct sum M=5: ks_Poisson < ks_GUE",
        d_poi - d_gue,
        format!("negative (Poisson {d_poi:.3} vs GUE {d_gue:.3})"),
        d_poi < d_gue,
    ));

    // Porter-Thomas for GUE eigenvector amplitudes
    let mut rng = stream_rng(seed, 903);
    let n_pt = 256;
    let mut amps = Vec::with_capacity(2 * n_pt * n_pt);
    for _ in 0..2 {
        let (_, vecs) = linalg::eigh_c(&gue_matrix(n_pt, &mut rng));
        for k in 0..n_pt {
            for i in 0..n_pt {
                amps.push(vecs[[i, k]].norm_sqr());
            }
        }
    }
    let nn = n_pt as f64;
    let (_, _, p) = chi2_goodness_of_fit(&amps, 40, 0.0, 8.0 / nn, |a| 1.0 - (-nn * a).exp());
    checks.push(CheckResult::new("Porter-Thomas χ² p-value", p, "> 0.01".into(), p > 0.01));
    CriterionReport::from_checks(10, "spectral statistics", checks)
}

// 11. cross-representation Gaussian oracle
fn criterion11(seed: u64) -> CriterionReport {
    let mut rng = stream_rng(seed, 1100);
    let mut worst: f64 = 0.0;
    for trial in 0..100 {
        let v = 2 + (trial % 7) as u32; // 2..8
        let h = gue_matrix(v as usize, &mut rng);
        let (_, orbitals) = linalg::eigh_c(&h);
        let n_occ = rng.random_range(0..=v);
        let mut order: Vec<usize> = (0..v as usize).collect();
        for i in (1..order.len()).rev() {
            order.swap(i, rng.random_range(0..=i));
        }
        let occupied: Vec<usize> = order[..n_occ as usize].to_vec();
        let v_a = rng.random_range(1..v.max(2));
        let phi = ndarray::Array2::from_shape_fn((v as usize, n_occ as usize), |(i, k)| {
            orbitals[[i, occupied[k]]]
        });
        let state = crate::entropy::slater_state(&phi).unwrap();
        let part = PartitionSpec::new(v, v_a).unwrap();
        let s_full = vn_entropy(&rdm_spectrum_full(&state, &part).unwrap());
        let c_a = ndarray::Array2::from_shape_fn((v_a as usize, v_a as usize), |(i, j)| {
            occupied.iter().map(|&k| orbitals[[i, k]] * orbitals[[j, k]].conj()).sum()
        });
        let s_corr = crate::entropy::gaussian_entropy_from_c(&c_a).unwrap();
        worst = worst.max((s_full - s_corr).abs());
    }
    let checks = vec![CheckResult::new(
        "max |2^V-vector entropy - correlation entropy| over 100 trials",
        worst,
        "<= 1e-9".into(),
        worst <= 1e-9,
    )];
    CriterionReport::from_checks(11, "cross-representation Gaussian oracle", checks)
}

// 12. 3D Anderson qualitative check
fn criterion12(suite: Suite, seed: u64) -> CriterionReport {
    let (n_states, n_seeds) = match suite {
        Suite::Full => (1_000u64, 5u64),
        Suite::Quick => (200, 3),
    };
    let l = 6u32;
    let v = l * l * l;
    let v_a = v / 2;
    let mut means = Vec::new();
    for s in 0..n_seeds {
        let model = build_anderson_3d(l, 1.0, seed.wrapping_add(1200 + s));
        let est = quadratic_eigenstate_average(
            &model,
            v_a,
            EigenstateSampling::Sampled { n: n_states, seed: seed.wrapping_add(60 + s) },
        )
        .unwrap();
        means.push(est.mean);
    }
    let mean = means.iter().sum::<f64>() / means.len() as f64;
    let leading = f64::from(v) * (LN_2 - 0.5) * 0.5 * 2.0; // (ln2-1)f + (f-1)ln(1-f) at f=1/2 times V
    let rel = (mean / leading - 1.0).abs();
    let spread = means.iter().map(|m| (m - mean).abs()).fold(0.0f64, f64::max) / mean;
    let checks = vec![
        CheckResult::new(
            "mean eigenstate entropy vs Gaussian leading order",
            rel,
            format!("relative deviation < 3% (mean {mean:.3} vs {leading:.3})"),
            rel < 0.03,
        ),
        CheckResult::new(
            "relative spread over disorder seeds",
            spread,
            "< 2%".into(),
            spread < 0.02,
        ),
    ];
    CriterionReport::from_checks(12, "3D Anderson qualitative check", checks)
}

// 13. bosonic extension
fn criterion13(suite: Suite, seed: u64) -> CriterionReport {
    // exact multiset Vandermonde for V <= 8
    let choose = |top: u64, k: u64| -> u128 {
        let mut acc: u128 = 1;
        for i in 0..k as u128 {
            acc = acc * (top as u128 - i) / (i + 1);
        }
        acc
    };
    let bdim = |modes: u64, n: u64| -> u128 {
        if modes == 0 {
            u128::from(n == 0)
        } else {
            choose(n + modes - 1, n)
        }
    };
    let mut identity_ok = true;
    for v in 1..=8u64 {
        for n in 0..=10u64 {
            for v_a in 0..=v {
                let total: u128 =
                    (0..=n).map(|k| bdim(v_a, k) * bdim(v - v_a, n - k)).sum();
                identity_ok &= total == bdim(v, n);
            }
        }
    }
    let mut checks = vec![CheckResult::new(
        "bosonic dimension identity, V <= 8, N <= 10",
        f64::from(u8::from(identity_ok)),
        "exact".into(),
        identity_ok,
    )];

    let n_mc = match suite {
        Suite::Full => 10_000u64,
        Suite::Quick => 2_000,
    };
    let est = mc_estimate(
        |rng| {
            let dim = 20;
            let mut amps: Vec<C64> = (0..dim)
                .map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
                .collect();
            let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
            amps.iter_mut().for_each(|a| *a /= norm);
            amps
        },
        |amps| bosonic_sector_entropy(amps, 4, 2, 3).unwrap(),
        n_mc,
        seed.wrapping_add(1300),
        0,
    );
    let closed = bosonic_fixed_n_exact(4, 2, 3);
    checks.push(sigma_check("bosonic_fixed_n_exact(4,2,3) vs MC", est.mean, est.stderr, closed, 4.0));
    CriterionReport::from_checks(13, "bosonic extension", checks)
}
