//! Exact finite-size closed forms for the average and variance of the
//! entanglement entropy in all six ensembles, plus Jacobi-ensemble level
//! densities.
//!
//! All dimension arithmetic runs in log space: sector dimensions overflow
//! f64 well below the V ~ 10^4 this module supports, and every formula only
//! ever needs digamma/trigamma values and dimension *ratios*.

use crate::entropy::PartitionSpec;
use crate::specfun::{
    self, digamma, jacobi_poly, ln_jacobi_norm, log_binomial, trigamma, JacobiParams,
};
use crate::{Error, Result};

/// Fixed particle-number ensemble parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FixedNSpec {
    pub part: PartitionSpec,
    pub n: u32,
}

impl FixedNSpec {
    pub fn new(v: u32, v_a: u32, n: u32) -> Result<Self> {
        let part = PartitionSpec::new(v, v_a)?;
        if n > v {
            return Err(Error::Domain(format!("need 0 <= N <= V, got N={n}, V={v}")));
        }
        Ok(Self { part, n })
    }

    /// Filling fraction n = N / V.
    pub fn filling(&self) -> f64 {
        f64::from(self.n) / f64::from(self.part.v)
    }
}

/// Weighted (binomial over sectors) ensemble parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightedSpec {
    pub part: PartitionSpec,
    pub w: f64,
}

impl WeightedSpec {
    pub fn new(v: u32, v_a: u32, w: f64) -> Result<Self> {
        if !w.is_finite() {
            return Err(Error::Domain(format!("weight parameter must be finite, got {w}")));
        }
        Ok(Self { part: PartitionSpec::new(v, v_a)?, w })
    }

    /// Mean filling fraction n̄ = 1 / (1 + e^w).
    pub fn mean_filling(&self) -> f64 {
        1.0 / (1.0 + self.w.exp())
    }
}

// ---------------------------------------------------------------------------
// log-dimension helpers
// ---------------------------------------------------------------------------

// Exact digamma below this log-dimension, two-term asymptotics above (the
// crossover error is < 1e-15 either way).
const LN_DIM_DIRECT: f64 = 33.0;

/// Ψ(d + 1) for a dimension given as ln d.
fn digamma_dim_p1(ln_d: f64) -> f64 {
    if ln_d <= LN_DIM_DIRECT {
        specfun::digamma_unchecked(ln_d.exp() + 1.0)
    } else {
        // Ψ(d+1) = ln d + 1/(2d) - 1/(12d²) + O(d⁻⁴)
        ln_d + 0.5 * (-ln_d).exp() - (-2.0 * ln_d).exp() / 12.0
    }
}

/// d · Ψ'(d + 1) for a dimension given as ln d.
fn xtrig_p1(ln_d: f64) -> f64 {
    if ln_d <= LN_DIM_DIRECT {
        let d = ln_d.exp();
        d * specfun::trigamma_unchecked(d + 1.0)
    } else {
        // d Ψ'(d+1) = 1 - 1/(2d) + 1/(6d²) + O(d⁻⁴)
        1.0 - 0.5 * (-ln_d).exp() + (-2.0 * ln_d).exp() / 6.0
    }
}

// Page average from log-dimensions (branch d_A <= d_B chosen internally).
fn page_average_ln(ln_da: f64, ln_db: f64) -> f64 {
    let (lo, hi) = if ln_da <= ln_db { (ln_da, ln_db) } else { (ln_db, ln_da) };
    let ratio = 0.5 * ((lo - hi).exp() - (-hi).exp());
    digamma_dim_p1(lo + hi) - digamma_dim_p1(hi) - ratio
}

// φ of the fixed-N sum: Ψ(d_N+1) - Ψ(max(d_A,d_B)+1) - min ratio term.
pub(crate) fn page_phi_ln(ln_dn: f64, ln_da: f64, ln_db: f64) -> f64 {
    let (lo, hi) = if ln_da <= ln_db { (ln_da, ln_db) } else { (ln_db, ln_da) };
    let ratio = 0.5 * ((lo - hi).exp() - (-hi).exp());
    digamma_dim_p1(ln_dn) - digamma_dim_p1(hi) - ratio
}

// χ of the fixed-N variance sum, written verbatim from the printed formula
// but assembled from log-dimensions.
fn chi_ln(ln_dn: f64, ln_da: f64, ln_db: f64) -> f64 {
    let (lo, hi) = if ln_da <= ln_db { (ln_da, ln_db) } else { (ln_db, ln_da) };
    let t1 = (1.0 + (lo - hi).exp()) * xtrig_p1(hi);
    let t2 = (1.0 + (-ln_dn).exp()) * xtrig_p1(ln_dn);
    let e = |x: f64| x.exp();
    let t3 = 0.25 * e(2.0 * (lo - hi)) + 0.5 * e(lo - hi) - 0.5 * e(lo - 2.0 * hi)
        - 0.5 * e(-hi)
        + 0.25 * e(-2.0 * hi);
    t1 - t2 - t3
}

// ---------------------------------------------------------------------------
// general pure states
// ---------------------------------------------------------------------------

/// Average entanglement entropy of Haar-random pure states with subsystem
/// dimensions (d_A, d_B): Ψ(d_A d_B + 1) - Ψ(max + 1) - (min-1)/(2 max).
pub fn page_average(d_a: u64, d_b: u64) -> f64 {
    assert!(d_a >= 1 && d_b >= 1);
    page_average_ln((d_a as f64).ln(), (d_b as f64).ln())
}

/// Variance of the entanglement entropy of Haar-random pure states.
pub fn page_variance(d_a: u64, d_b: u64) -> f64 {
    assert!(d_a >= 1 && d_b >= 1);
    let (lo, hi) = if d_a <= d_b { (d_a as f64, d_b as f64) } else { (d_b as f64, d_a as f64) };
    let dd = lo * hi;
    (lo + hi) / (dd + 1.0) * trigamma(hi + 1.0).expect("positive argument")
        - trigamma(dd + 1.0).expect("positive argument")
        - (lo - 1.0) * (lo + 2.0 * hi - 1.0) / (4.0 * hi * hi * (dd + 1.0))
}

// iterator over the admissible N_A with the log-dims of each block
fn sector_blocks(s: &FixedNSpec) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
    let v_a = s.part.v_a;
    let v_b = s.part.v_b();
    let n = s.n;
    let ln_dn = log_binomial(u64::from(s.part.v), i64::from(n));
    let lo = n.saturating_sub(v_b);
    let hi = n.min(v_a);
    (lo..=hi).map(move |n_a| {
        let ln_da = log_binomial(u64::from(v_a), i64::from(n_a));
        let ln_db = log_binomial(u64::from(v_b), i64::from(n) - i64::from(n_a));
        let ln_rho = ln_da + ln_db - ln_dn;
        (ln_rho, ln_da, ln_db)
    })
}

/// Average entanglement entropy of Haar-random states in the N-particle
/// sector: Σ_{N_A} ρ_{N_A} φ_{N_A}.
pub fn fixed_n_average(s: &FixedNSpec) -> f64 {
    let ln_dn = log_binomial(u64::from(s.part.v), i64::from(s.n));
    sector_blocks(s)
        .map(|(ln_rho, ln_da, ln_db)| ln_rho.exp() * page_phi_ln(ln_dn, ln_da, ln_db))
        .sum()
}

/// Variance of the entanglement entropy in the N-particle sector:
/// [Σ ρ (φ² + χ) - (Σ ρ φ)²] / (d_N + 1).
pub fn fixed_n_variance(s: &FixedNSpec) -> f64 {
    let ln_dn = log_binomial(u64::from(s.part.v), i64::from(s.n));
    let mut mean = 0.0;
    let mut second = 0.0;
    for (ln_rho, ln_da, ln_db) in sector_blocks(s) {
        let rho = ln_rho.exp();
        let phi = page_phi_ln(ln_dn, ln_da, ln_db);
        mean += rho * phi;
        second += rho * (phi * phi + chi_ln(ln_dn, ln_da, ln_db));
    }
    let bracket = second - mean * mean;
    if bracket <= 0.0 {
        debug_assert!(bracket > -1e-12);
        return 0.0;
    }
    // divide by d_N + 1 in log space; underflow to 0 is the correct limit
    (bracket.ln() - (ln_dn + (-ln_dn).exp().ln_1p())).exp()
}

// ln P_N of the binomial sector weights at weight parameter w
fn ln_sector_weight(v: u32, n: u32, w: f64) -> f64 {
    let softplus = if -w > 35.0 { -w } else { (-w).exp().ln_1p() };
    log_binomial(u64::from(v), i64::from(n)) - w * f64::from(n) - f64::from(v) * softplus
}

/// Weighted average ⟨S_A⟩_w = Σ_N P_N ⟨S_A⟩_N over all particle sectors.
/// `gaussian` selects the Gaussian fixed-N average instead of the general one.
pub fn weighted_average(s: &WeightedSpec, gaussian: bool) -> f64 {
    let v = s.part.v;
    (0..=v)
        .filter_map(|n| {
            let ln_p = ln_sector_weight(v, n, s.w);
            if ln_p < -745.0 {
                return None;
            }
            let spec = FixedNSpec { part: s.part, n };
            let avg = if gaussian { gaussian_fixed_n_average(&spec) } else { fixed_n_average(&spec) };
            Some(ln_p.exp() * avg)
        })
        .sum()
}

/// Weighted variance Σ P_N (⟨S⟩²_N + (ΔS)²_N) - (Σ P_N ⟨S⟩_N)².
///
/// For the Gaussian flag the fixed-N second moment uses the asymptotic
/// variance (no finite-V closed form exists); this only affects o(V) terms.
pub fn weighted_variance(s: &WeightedSpec, gaussian: bool) -> f64 {
    let v = s.part.v;
    let mut mean = 0.0;
    let mut second = 0.0;
    for n in 0..=v {
        let ln_p = ln_sector_weight(v, n, s.w);
        if ln_p < -745.0 {
            continue;
        }
        let p = ln_p.exp();
        let spec = FixedNSpec { part: s.part, n };
        let (avg, var) = if gaussian {
            let avg = gaussian_fixed_n_average(&spec);
            let var = if n == 0 || n == v || s.part.v_a == 0 || s.part.v_a == v {
                0.0
            } else {
                gaussian_fixed_n_variance_asymptotic(s.part.f(), spec.filling())
                    .expect("interior parameters")
            };
            (avg, var)
        } else {
            (fixed_n_average(&spec), fixed_n_variance(&spec))
        };
        mean += p * avg;
        second += p * (avg * avg + var);
    }
    (second - mean * mean).max(0.0)
}

// ---------------------------------------------------------------------------
// Gaussian states
// ---------------------------------------------------------------------------

/// Average entanglement entropy over all pure fermionic Gaussian states.
pub fn gaussian_average(part: &PartitionSpec) -> f64 {
    let v = f64::from(part.v);
    let v_a = f64::from(part.v_a.min(part.v_b())); // subsystem symmetry by hand
    if v_a == 0.0 {
        return 0.0;
    }
    let psi = |x: f64| digamma(x).expect("positive argument");
    (v - 0.5) * psi(2.0 * v) + (0.5 + v_a - v) * psi(2.0 * v - 2.0 * v_a) + (0.25 - v_a) * psi(v)
        - 0.25 * psi(v - v_a)
        - v_a
}

/// How to evaluate the variance over all Gaussian states.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GaussianVarianceMode {
    /// Truncated double sum over the exact finite-size matrix elements s²_ij.
    ExactSum,
    /// Leading order (f + f² + ln(1-f)) / 2.
    Asymptotic,
}

/// Variance of the entanglement entropy over all pure fermionic Gaussian states.
pub fn gaussian_variance(part: &PartitionSpec, mode: GaussianVarianceMode) -> f64 {
    let v_a = part.v_a.min(part.v_b());
    if v_a == 0 {
        return 0.0;
    }
    let f = f64::from(v_a) / f64::from(part.v);
    match mode {
        GaussianVarianceMode::Asymptotic => (f + f * f + (1.0 - f).ln()) / 2.0,
        GaussianVarianceMode::ExactSum => {
            let delta = f64::from(part.v - 2 * v_a);
            let mut total = 0.0;
            let mut small_cols = 0;
            for j in v_a..v_a + 5000 {
                let col: f64 = (0..v_a)
                    .map(|i| ln_sij_sq_arbitrary(delta, f64::from(i), f64::from(j)).exp())
                    .sum();
                total += col;
                if col < 1e-14 * total.max(1e-30) {
                    small_cols += 1;
                    if small_cols >= 2 {
                        break;
                    }
                } else {
                    small_cols = 0;
                }
            }
            total
        }
    }
}

// ln s²_ij of the arbitrary-N (Δ-parameter) ensemble, i < j.
fn ln_sij_sq_arbitrary(d: f64, i: f64, j: f64) -> f64 {
    let lg = |x: f64| specfun::ln_gamma(x);
    let bracket = (1.0 + d - 2.0 * d * d) * i - 2.0 * (d - 1.0) * i * i
        + (d + 1.0) * (2.0 * j + 1.0) * (d + j);
    lg(2.0 * j + 1.0)
        + (2.0 * d + 4.0 * i + 1.0).ln()
        + (d + j + 1.0).ln()
        + (2.0 * d + 2.0 * j + 1.0).ln()
        + (2.0 * d + 4.0 * j + 1.0).ln()
        + lg(2.0 * (d + i) + 1.0)
        + 2.0 * bracket.abs().ln()
        - (2.0f64.ln()
            + lg(2.0 * i + 1.0)
            + 2.0 * (2.0 * i - 2.0 * j + 1.0).abs().ln()
            + 2.0 * (i - j).abs().ln()
            + 2.0 * (2.0 * j - 2.0 * i + 1.0).abs().ln()
            + lg(2.0 * (d + j + 1.0) + 1.0)
            + 2.0 * (d + i + j).ln()
            + 2.0 * (d + i + j + 1.0).ln()
            + 2.0 * (2.0 * d + 2.0 * i + 2.0 * j + 1.0).ln())
}

/// V → ∞ limit of the arbitrary-N variance summand s̄²_lk at subsystem
/// fraction f (depends on k + l only).
pub fn gaussian_variance_summand_limit(f: f64, l: u32, k: u32) -> f64 {
    let f = f.min(1.0 - f);
    let kk = f64::from(k + l) + 1.0;
    let ratio = (f / (1.0 - f)).powf(2.0 * kk);
    let num = (2.0 * kk + 1.0 - 4.0 * f * kk).powi(2);
    let den = 4.0 * kk * kk * (2.0 * kk - 1.0).powi(2) * (2.0 * kk + 1.0).powi(2);
    ratio * num / den
}

// (V_A, N) reduced to the canonical wedge V_A <= N <= V/2 by the subsystem,
// particle-hole and particle-subsystem symmetries.
fn canonical_gaussian(v: u32, mut v_a: u32, mut n: u32) -> (u32, u32) {
    if 2 * n > v {
        n = v - n;
    }
    if 2 * v_a > v {
        v_a = v - v_a;
    }
    if v_a > n {
        std::mem::swap(&mut v_a, &mut n);
    }
    (v_a, n)
}

/// Average entanglement entropy over fixed-N pure fermionic Gaussian states.
pub fn gaussian_fixed_n_average(s: &FixedNSpec) -> f64 {
    let v = s.part.v;
    let (v_a, n) = canonical_gaussian(v, s.part.v_a, s.n);
    if v_a == 0 {
        return 0.0;
    }
    let (vf, va, nf) = (f64::from(v), f64::from(v_a), f64::from(n));
    let psi = |x: f64| digamma(x).expect("positive argument");
    1.0 - va / vf * (1.0 + vf) - nf * va / vf * psi(nf) + vf * psi(vf)
        + va * (nf - vf) / vf * psi(vf - nf)
        + (va - vf) * psi(vf - va + 1.0)
}

/// Leading-order variance of the entanglement entropy over fixed-N Gaussian
/// states, as a function of (f, n) canonicalized into 0 < f <= n <= 1/2.
pub fn gaussian_fixed_n_variance_asymptotic(f: f64, n: f64) -> Result<f64> {
    if !(f > 0.0 && f < 1.0 && n > 0.0 && n < 1.0) {
        return Err(Error::Domain(format!("need (f, n) in (0,1)², got ({f}, {n})")));
    }
    let mut f = f.min(1.0 - f);
    let mut n = n.min(1.0 - n);
    if f > n {
        std::mem::swap(&mut f, &mut n);
    }
    let l = (1.0 / n - 1.0).ln();
    Ok((1.0 - f).ln() + f + f * f + f * f * (2.0 * n - 1.0) * l
        + f * (f - 1.0) * (n - 1.0) * n * l * l)
}

/// V → ∞ limit of the fixed-N variance summand s̄²_lk = t²_{k+l+1}, where
/// t_d is the d-th Chebyshev coefficient of s(x) on the limiting support
/// [c - ρ, c + ρ] of the restricted-correlation spectrum.
pub fn gaussian_fixed_n_variance_summand_limit(f: f64, n: f64, l: u32, k: u32) -> Result<f64> {
    if !(f > 0.0 && f < 1.0 && n > 0.0 && n < 1.0) {
        return Err(Error::Domain(format!("need (f, n) in (0,1)², got ({f}, {n})")));
    }
    let mut f = f.min(1.0 - f);
    let mut n = n.min(1.0 - n);
    if f > n {
        std::mem::swap(&mut f, &mut n);
    }
    let c = (2.0 * n - 1.0) * (1.0 - 2.0 * f);
    let rho = 4.0 * (f * (1.0 - f) * n * (1.0 - n)).sqrt();
    Ok(entropy_chebyshev_coefficient(c, rho, k + l + 1).powi(2))
}

// d-th Chebyshev (cosine-Fourier) coefficient of s(c + ρ cos θ), d >= 1.
pub(crate) fn entropy_chebyshev_coefficient(c: f64, rho: f64, d: u32) -> f64 {
    debug_assert!(d >= 1);
    let zp = z_of_q((rho / (1.0 + c)).min(1.0));
    let zm = z_of_q((rho / (1.0 - c)).min(1.0));
    if d == 1 {
        let part = |z: f64, one_pc: f64| {
            z + z / (1.0 + z * z) * ((one_pc / 2.0).ln() - (1.0 + z * z).ln() - z * z / 2.0)
        };
        return (-(1.0 + c) * part(zp, 1.0 + c) + (1.0 - c) * part(zm, 1.0 - c)) / 2.0;
    }
    let df = f64::from(d);
    let denom = 2.0 * df * (df * df - 1.0);
    let sign = if d % 2 == 0 { 1.0 } else { -1.0 };
    let piece = |z: f64| z.powi(d as i32) * ((df + 1.0) - z * z * (df - 1.0)) / (1.0 + z * z);
    (-(1.0 + c) * sign * piece(zp) - (1.0 - c) * piece(zm)) / denom
}

// z with 1 + q cos θ ∝ |1 + z e^{iθ}|²: z = q / (1 + sqrt(1 - q²))
fn z_of_q(q: f64) -> f64 {
    q / (1.0 + (1.0 - q * q).max(0.0).sqrt())
}

// ---------------------------------------------------------------------------
// level densities
// ---------------------------------------------------------------------------

/// Which Jacobi-ensemble level density to evaluate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LevelDensityKind {
    /// Spectrum x = 2y - 1 of the restricted correlation matrix of fixed-N
    /// Gaussian states; requires V_A <= min(N, V-N).
    FixedN(FixedNSpec),
    /// Spectrum of i J̃_A for arbitrary-N Gaussian states (V_A <= V/2
    /// enforced by reflection).
    GaussianArbitrary { v: u32, v_a: u32 },
}

/// One-point function R₁(x) = Σ_j ψ_j²(x), normalized to ∫_{-1}^{1} R₁ = V_A.
pub fn jacobi_level_density(x: f64, kind: &LevelDensityKind) -> Result<f64> {
    if x.abs() > 1.0 {
        return Err(Error::Domain(format!("need |x| <= 1, got {x}")));
    }
    match kind {
        LevelDensityKind::FixedN(s) => {
            let v = s.part.v;
            let v_a = s.part.v_a;
            if v_a > s.n.min(v - s.n) {
                return Err(Error::Domain(format!(
                    "level density needs V_A <= min(N, V-N), got V_A={v_a}, N={}, V={v}",
                    s.n
                )));
            }
            let a = f64::from(v - s.n - v_a);
            let b = f64::from(s.n - v_a);
            let ln_w = if x >= 1.0 && a == 0.0 {
                b * (1.0 + x).ln()
            } else if x <= -1.0 && b == 0.0 {
                a * (1.0 - x).ln()
            } else {
                a * (1.0 - x).ln() + b * (1.0 + x).ln()
            };
            if !ln_w.is_finite() {
                return Ok(0.0);
            }
            let mut r1 = 0.0;
            for j in 0..v_a {
                let p = jacobi_poly(JacobiParams::new(j, a, b)?, x);
                let psi = p * (0.5 * (ln_w - ln_jacobi_norm(j, a, b))).exp();
                r1 += psi * psi;
            }
            Ok(r1)
        }
        LevelDensityKind::GaussianArbitrary { v, v_a } => {
            let v_a = (*v_a).min(v - v_a);
            let d = f64::from(v - 2 * v_a);
            let ln_w = if x.abs() >= 1.0 && d == 0.0 { 0.0 } else { d * (1.0 - x * x).ln() };
            if !ln_w.is_finite() {
                return Ok(0.0);
            }
            let mut r1 = 0.0;
            for j in 0..v_a {
                let p = jacobi_poly(JacobiParams::new(2 * j, d, d)?, x);
                let psi = p * (0.5 * (ln_w - ln_jacobi_norm(2 * j, d, d))).exp();
                r1 += psi * psi;
            }
            Ok(r1)
        }
    }
}
