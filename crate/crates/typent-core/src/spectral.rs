//! Level-spacing and eigenvector-amplitude diagnostics: reference spacing
//! distributions, GOE/GUE sampling, polynomial unfolding, KS and χ² tests,
//! and the direct-sum-of-GUEs experiment.

use crate::linalg;
use crate::specfun::{gamma_p, gamma_q, ln_gamma};
use crate::{Error, Result};
use ndarray::Array2;
use num_complex::Complex64 as C64;
use rand::Rng;
use rand_distr::StandardNormal;

/// Reference nearest-neighbor spacing distribution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpacingReference {
    /// Wigner surmise at Dyson index β ∈ {1, 2, 4}.
    WignerSurmise { beta: u8 },
    /// Uncorrelated levels, p(s) = e^{-s}.
    Poisson,
    /// Equally spaced levels, a point mass at s = 1.
    PicketFence,
}

impl SpacingReference {
    fn surmise_coeffs(beta: u8) -> (f64, f64) {
        let b = f64::from(beta);
        let g2 = (ln_gamma((b + 2.0) / 2.0)).exp();
        let g1 = (ln_gamma((b + 1.0) / 2.0)).exp();
        let a = 2.0 * g2.powi(i32::from(beta) + 1) / g1.powi(i32::from(beta) + 2);
        let bb = (g2 / g1).powi(2);
        (a, bb)
    }

    pub fn pdf(&self, s: f64) -> f64 {
        debug_assert!(s >= 0.0);
        match self {
            SpacingReference::WignerSurmise { beta } => {
                let (a, b) = Self::surmise_coeffs(*beta);
                a * s.powi(i32::from(*beta)) * (-b * s * s).exp()
            }
            SpacingReference::Poisson => (-s).exp(),
            SpacingReference::PicketFence => {
                if s == 1.0 {
                    f64::INFINITY
                } else {
                    0.0
                }
            }
        }
    }

    pub fn cdf(&self, s: f64) -> f64 {
        if s <= 0.0 {
            return 0.0;
        }
        match self {
            SpacingReference::WignerSurmise { beta } => {
                let (_, b) = Self::surmise_coeffs(*beta);
                gamma_p((f64::from(*beta) + 1.0) / 2.0, b * s * s)
            }
            SpacingReference::Poisson => 1.0 - (-s).exp(),
            SpacingReference::PicketFence => {
                if s >= 1.0 {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }
}

/// Porter-Thomas density of eigenvector amplitudes A = |u_i|², normalized to
/// first moment 1/N.
pub fn porter_thomas_pdf(a: f64, beta: u8, n: usize) -> f64 {
    debug_assert!(a >= 0.0);
    let b = f64::from(beta);
    let nn = n as f64;
    let half_bn = b * nn / 2.0;
    half_bn.powf(b / 2.0) * a.powf(b / 2.0 - 1.0) * (-half_bn * a).exp()
        / ln_gamma(b / 2.0).exp()
}

/// An ordered real spectrum with provenance metadata.
#[derive(Debug, Clone)]
pub struct SpectrumSeries {
    pub values: Vec<f64>,
    pub ensemble: String,
    pub unfolded: bool,
}

/// Which Gaussian matrix ensemble to draw from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GaussianEnsemble {
    Goe,
    Gue,
}

/// Samples a properly normalized GOE/GUE matrix and returns its sorted
/// spectrum. Off-diagonal second moment E|H_ij|² = 1 in both cases, so the
/// semicircle support is [-2√d, 2√d].
pub fn sample_gaussian_ensemble(
    kind: GaussianEnsemble,
    d: usize,
    rng: &mut impl Rng,
) -> SpectrumSeries {
    assert!(d >= 2);
    let values = match kind {
        GaussianEnsemble::Goe => {
            let mut h = Array2::zeros((d, d));
            for i in 0..d {
                h[[i, i]] = 2.0f64.sqrt() * rng.sample::<f64, _>(StandardNormal);
                for j in 0..i {
                    let x: f64 = rng.sample(StandardNormal);
                    h[[i, j]] = x;
                    h[[j, i]] = x;
                }
            }
            linalg::eigvalsh(&h)
        }
        GaussianEnsemble::Gue => linalg::eigvalsh_c(&gue_matrix(d, rng)),
    };
    SpectrumSeries {
        values,
        ensemble: format!("{kind:?}").to_lowercase(),
        unfolded: false,
    }
}

/// Dense GUE matrix with the e^{-Tr H²/2} normalization.
pub fn gue_matrix(d: usize, rng: &mut impl Rng) -> Array2<C64> {
    let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
    let mut h = Array2::zeros((d, d));
    for i in 0..d {
        h[[i, i]] = C64::new(rng.sample(StandardNormal), 0.0);
        for j in 0..i {
            let z = C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)) * inv_sqrt2;
            h[[i, j]] = z;
            h[[j, i]] = z.conj();
        }
    }
    h
}

/// Wigner semicircle CDF on [-r, r].
pub fn semicircle_cdf(x: f64, r: f64) -> f64 {
    if x <= -r {
        0.0
    } else if x >= r {
        1.0
    } else {
        0.5 + x * (r * r - x * x).sqrt() / (std::f64::consts::PI * r * r)
            + (x / r).asin() / std::f64::consts::PI
    }
}

/// Unfolds a spectrum by fitting a degree-`degree` polynomial (Chebyshev
/// basis on the scaled energy range) to the empirical staircase N(E) and
/// mapping the eigenvalues through it.
pub fn unfold(spec: &SpectrumSeries, degree: usize) -> Result<SpectrumSeries> {
    let n = spec.values.len();
    if n < degree + 2 {
        return Err(Error::Numerical(format!(
            "cannot fit degree {degree} through {n} levels"
        )));
    }
    let (lo, hi) = (spec.values[0], spec.values[n - 1]);
    if !(hi > lo) {
        return Err(Error::Numerical("degenerate spectrum range".into()));
    }
    let scale = |e: f64| 2.0 * (e - lo) / (hi - lo) - 1.0;
    let design = Array2::from_shape_fn((n, degree + 1), |(i, k)| {
        chebyshev_t(k, scale(spec.values[i]))
    });
    let staircase: Vec<f64> = (0..n).map(|i| i as f64 + 0.5).collect();
    let coeff = linalg::lstsq(&design, &staircase);
    let values: Vec<f64> = spec
        .values
        .iter()
        .map(|&e| {
            let x = scale(e);
            coeff.iter().enumerate().map(|(k, c)| c * chebyshev_t(k, x)).sum()
        })
        .collect();
    Ok(SpectrumSeries { values, ensemble: spec.ensemble.clone(), unfolded: true })
}

fn chebyshev_t(k: usize, x: f64) -> f64 {
    match k {
        0 => 1.0,
        1 => x,
        _ => {
            let mut tm1 = 1.0;
            let mut t = x;
            for _ in 2..=k {
                let next = 2.0 * x * t - tm1;
                tm1 = t;
                t = next;
            }
            t
        }
    }
}

/// Consecutive spacings restricted to the inner `bulk_fraction` of levels.
pub fn bulk_spacings(spec: &SpectrumSeries, bulk_fraction: f64) -> Vec<f64> {
    let n = spec.values.len();
    let skip = ((1.0 - bulk_fraction) / 2.0 * n as f64).round() as usize;
    spec.values[skip..n - skip]
        .windows(2)
        .map(|w| w[1] - w[0])
        .collect()
}

/// Two-sided Kolmogorov-Smirnov statistic and asymptotic p-value of the
/// spacing sample against a reference distribution.
pub fn spacing_ks(spacings: &[f64], reference: SpacingReference) -> (f64, f64) {
    assert!(spacings.len() >= 100, "need at least 100 spacings");
    let mut sorted = spacings.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let mut dist: f64 = 0.0;
    for (i, &s) in sorted.iter().enumerate() {
        let c = reference.cdf(s);
        dist = dist.max((c - i as f64 / n).abs()).max(((i as f64 + 1.0) / n - c).abs());
    }
    (dist, kolmogorov_pvalue(dist * (n.sqrt() + 0.12 + 0.11 / n.sqrt())))
}

/// Two-sample KS statistic and asymptotic p-value.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> (f64, f64) {
    let mut xs = a.to_vec();
    let mut ys = b.to_vec();
    xs.sort_by(f64::total_cmp);
    ys.sort_by(f64::total_cmp);
    let (na, nb) = (xs.len() as f64, ys.len() as f64);
    let mut i = 0;
    let mut j = 0;
    let mut dist: f64 = 0.0;
    while i < xs.len() && j < ys.len() {
        if xs[i] <= ys[j] {
            i += 1;
        } else {
            j += 1;
        }
        dist = dist.max((i as f64 / na - j as f64 / nb).abs());
    }
    let ne = (na * nb / (na + nb)).sqrt();
    (dist, kolmogorov_pvalue(dist * (ne + 0.12 + 0.11 / ne)))
}

fn kolmogorov_pvalue(lambda: f64) -> f64 {
    if lambda < 1e-3 {
        return 1.0;
    }
    let mut p = 0.0;
    let mut sign = 1.0;
    for k in 1..=100 {
        let term = (-2.0 * (k as f64 * lambda).powi(2)).exp();
        p += 2.0 * sign * term;
        if term < 1e-16 {
            break;
        }
        sign = -sign;
    }
    p.clamp(0.0, 1.0)
}

/// The direct-sum experiment: per draw, concatenate the spectra of M
/// independent GUE(d) matrices, sort, and record the central gap between
/// order statistics M·d/2 and M·d/2 + 1. The samples are normalized to unit
/// mean (the unfolding for a fixed spectral position).
pub fn direct_sum_gue_spacing(
    m: usize,
    d: usize,
    n_draws: usize,
    rng: &mut impl Rng,
) -> Vec<f64> {
    assert!(m >= 1 && d >= 2 && d % 2 == 0);
    let mid = m * d / 2;
    let mut gaps = Vec::with_capacity(n_draws);
    for _ in 0..n_draws {
        let mut all = Vec::with_capacity(m * d);
        for _ in 0..m {
            all.extend(linalg::eigvalsh_c(&gue_matrix(d, rng)));
        }
        all.sort_by(f64::total_cmp);
        gaps.push(all[mid] - all[mid - 1]);
    }
    let mean: f64 = gaps.iter().sum::<f64>() / n_draws as f64;
    gaps.iter_mut().for_each(|g| *g /= mean);
    gaps
}

/// Equal-width histogram with a density column.
#[derive(Debug, Clone)]
pub struct Histogram {
    pub edges: Vec<f64>,
    pub counts: Vec<u64>,
    pub n_samples: usize,
}

impl Histogram {
    pub fn from_samples(samples: &[f64], bins: usize, lo: f64, hi: f64) -> Self {
        assert!(bins >= 1 && hi > lo);
        let mut counts = vec![0u64; bins];
        let width = (hi - lo) / bins as f64;
        for &s in samples {
            if s >= lo && s < hi {
                counts[((s - lo) / width) as usize] += 1;
            } else if s == hi {
                counts[bins - 1] += 1;
            }
        }
        let edges = (0..=bins).map(|i| lo + width * i as f64).collect();
        Histogram { edges, counts, n_samples: samples.len() }
    }

    pub fn density(&self, bin: usize) -> f64 {
        let width = self.edges[bin + 1] - self.edges[bin];
        self.counts[bin] as f64 / (self.n_samples as f64 * width)
    }

    /// CSV rows (bin_left, bin_right, density) in full double precision.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("bin_left,bin_right,density\n");
        for i in 0..self.counts.len() {
            out.push_str(&format!(
                "{:.17e},{:.17e},{:.17e}\n",
                self.edges[i],
                self.edges[i + 1],
                self.density(i)
            ));
        }
        out
    }
}

/// Pearson χ² goodness-of-fit of samples against bin probabilities obtained
/// from a reference CDF. Bins with expected count below 5 are merged into
/// their neighbor. Returns (statistic, dof, p-value).
pub fn chi2_goodness_of_fit(
    samples: &[f64],
    bins: usize,
    lo: f64,
    hi: f64,
    cdf: impl Fn(f64) -> f64,
) -> (f64, usize, f64) {
    let hist = Histogram::from_samples(samples, bins, lo, hi);
    let n = samples.iter().filter(|&&s| (lo..=hi).contains(&s)).count() as f64;
    let total_p = cdf(hi) - cdf(lo);
    let mut observed = Vec::new();
    let mut expected = Vec::new();
    let mut acc_o = 0.0;
    let mut acc_e = 0.0;
    for i in 0..bins {
        acc_o += hist.counts[i] as f64;
        acc_e += n * (cdf(hist.edges[i + 1]) - cdf(hist.edges[i])) / total_p;
        if acc_e >= 5.0 {
            observed.push(acc_o);
            expected.push(acc_e);
            acc_o = 0.0;
            acc_e = 0.0;
        }
    }
    if acc_e > 0.0 {
        if let (Some(o), Some(e)) = (observed.last_mut(), expected.last_mut()) {
            *o += acc_o;
            *e += acc_e;
        }
    }
    let stat: f64 = observed
        .iter()
        .zip(&expected)
        .map(|(o, e)| (o - e) * (o - e) / e)
        .sum();
    let dof = observed.len().saturating_sub(1).max(1);
    (stat, dof, gamma_q(dof as f64 / 2.0, stat / 2.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensembles::stream_rng;
    use crate::quadrature::integrate;
    use approx::assert_abs_diff_eq;

    #[test]
    fn surmise_values_and_normalization() {
        let goe = SpacingReference::WignerSurmise { beta: 1 };
        // (π/2) s e^{-π s²/4} at s = 1
        let expect = std::f64::consts::FRAC_PI_2 * (-std::f64::consts::FRAC_PI_4).exp();
        assert_abs_diff_eq!(goe.pdf(1.0), expect, epsilon = 1e-13);
        assert_abs_diff_eq!(SpacingReference::Poisson.pdf(0.0), 1.0, epsilon = 1e-15);

        for reference in [
            SpacingReference::WignerSurmise { beta: 1 },
            SpacingReference::WignerSurmise { beta: 2 },
            SpacingReference::WignerSurmise { beta: 4 },
            SpacingReference::Poisson,
        ] {
            let norm = integrate(|s| reference.pdf(s), 0.0, 40.0, 1e-12);
            let mean = integrate(|s| s * reference.pdf(s), 0.0, 40.0, 1e-12);
            assert_abs_diff_eq!(norm, 1.0, epsilon = 1e-10);
            assert_abs_diff_eq!(mean, 1.0, epsilon = 1e-10);
        }
        // picket fence: point mass at s = 1, checked via its cdf step
        let pf = SpacingReference::PicketFence;
        assert_eq!(pf.cdf(0.999), 0.0);
        assert_eq!(pf.cdf(1.0), 1.0);
    }

    #[test]
    fn surmise_cdf_matches_pdf_quadrature() {
        for beta in [1u8, 2, 4] {
            let r = SpacingReference::WignerSurmise { beta };
            for s in [0.3, 0.9, 1.8] {
                let quad = integrate(|t| r.pdf(t), 0.0, s, 1e-12);
                assert_abs_diff_eq!(r.cdf(s), quad, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn gaussian_ensemble_spectra_shape() {
        let mut rng = stream_rng(2, 0);
        for kind in [GaussianEnsemble::Goe, GaussianEnsemble::Gue] {
            let spec = sample_gaussian_ensemble(kind, 60, &mut rng);
            assert_eq!(spec.values.len(), 60);
            assert!(spec.values.windows(2).all(|w| w[0] <= w[1]));
            // trace of H² concentrates around d² for both normalizations
            let tr2: f64 = spec.values.iter().map(|x| x * x).sum();
            assert!((tr2 / 3600.0 - 1.0).abs() < 0.25, "Tr H²/d² = {}", tr2 / 3600.0);
        }
    }

    #[test]
    fn gue_semicircle_chi2() {
        let mut rng = stream_rng(4, 0);
        let d = 512;
        let mut scaled = Vec::new();
        for _ in 0..50 {
            let spec = sample_gaussian_ensemble(GaussianEnsemble::Gue, d, &mut rng);
            let norm = (2.0 * d as f64).sqrt();
            scaled.extend(spec.values.iter().map(|x| x / norm));
        }
        let r = 2.0f64.sqrt();
        let (_, _, p) =
            chi2_goodness_of_fit(&scaled, 40, -r, r, |x| semicircle_cdf(x, r));
        assert!(p > 0.01, "semicircle χ² p = {p}");
    }

    #[test]
    fn unfold_uniform_spectrum() {
        let spec = SpectrumSeries {
            values: (1..=100).map(f64::from).collect(),
            ensemble: "uniform".into(),
            unfolded: false,
        };
        let unfolded = unfold(&spec, 1).unwrap();
        for w in unfolded.values.windows(2) {
            assert_abs_diff_eq!(w[1] - w[0], 1.0, epsilon = 1e-9);
        }
        // idempotence: unfolding an unfolded uniform spectrum barely moves spacings
        let twice = unfold(&unfolded, 1).unwrap();
        for (a, b) in twice.values.windows(2).zip(unfolded.values.windows(2)) {
            assert!(((a[1] - a[0]) - (b[1] - b[0])).abs() < 0.01);
        }
        assert!(unfold(&spec, 200).is_err());
    }

    #[test]
    fn unfold_gue_bulk_mean_spacing() {
        let mut rng = stream_rng(6, 0);
        let spec = sample_gaussian_ensemble(GaussianEnsemble::Gue, 400, &mut rng);
        let unfolded = unfold(&spec, 7).unwrap();
        let spacings = bulk_spacings(&unfolded, 0.8);
        let mean: f64 = spacings.iter().sum::<f64>() / spacings.len() as f64;
        assert!((mean - 1.0).abs() < 0.02, "bulk mean spacing {mean}");
    }

    #[test]
    fn ks_self_consistency_and_discrimination() {
        let mut rng = stream_rng(8, 0);
        // exponential draws against the Poisson reference
        let samples: Vec<f64> =
            (0..5000).map(|_| -rng.random::<f64>().max(1e-16).ln()).collect();
        let (d, p) = spacing_ks(&samples, SpacingReference::Poisson);
        assert!(p > 0.01, "self-consistency p = {p} (d = {d})");
        // same draws are far from the GUE surmise
        let (d, _) = spacing_ks(&samples, SpacingReference::WignerSurmise { beta: 2 });
        assert!(d > 0.2, "surmise distance {d}");
    }

    #[test]
    fn two_sample_ks_sanity() {
        let mut rng = stream_rng(10, 0);
        let a: Vec<f64> = (0..3000).map(|_| rng.random::<f64>()).collect();
        let b: Vec<f64> = (0..3000).map(|_| rng.random::<f64>()).collect();
        let (_, p) = ks_two_sample(&a, &b);
        assert!(p > 0.01);
        let c: Vec<f64> = (0..3000).map(|_| rng.random::<f64>() * 0.8).collect();
        let (d, _) = ks_two_sample(&a, &c);
        assert!(d > 0.1);
    }

    #[test]
    fn direct_sum_output_count_and_mean() {
        let mut rng = stream_rng(12, 0);
        let gaps = direct_sum_gue_spacing(2, 20, 200, &mut rng);
        assert_eq!(gaps.len(), 200);
        let mean: f64 = gaps.iter().sum::<f64>() / gaps.len() as f64;
        assert_abs_diff_eq!(mean, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn porter_thomas_normalization() {
        // β = 2 reduces to N e^{-N A}; first moment is 1/N by quadrature
        let n = 64;
        assert_abs_diff_eq!(
            porter_thomas_pdf(0.01, 2, n),
            n as f64 * (-(n as f64) * 0.01).exp(),
            epsilon = 1e-10
        );
        for beta in [1u8, 2, 4] {
            let first = integrate(|a| a * porter_thomas_pdf(a, beta, n), 0.0, 4.0, 1e-12);
            assert_abs_diff_eq!(first, 1.0 / n as f64, epsilon = 1e-10);
        }
    }

    #[test]
    fn histogram_csv_deterministic() {
        let h = Histogram::from_samples(&[0.1, 0.2, 0.7, 0.9], 2, 0.0, 1.0);
        assert_eq!(h.counts, vec![2, 2]);
        let csv = h.to_csv();
        assert!(csv.starts_with("bin_left,bin_right,density\n"));
        assert_eq!(csv, h.to_csv());
    }
}
