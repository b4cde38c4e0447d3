//! Thermodynamic-limit expansions for all six ensembles, the double-scaling
//! resolutions of their Kronecker-delta terms at the critical subsystem
//! fractions, and the bosonic fixed-N extension.
//!
//! Kronecker deltas trigger on exact floating-point equality (f == 1/2 and
//! so on), never on proximity; the `*_resolved`, `page_b`/`page_c` and
//! `gaussian_weighted_center`/`_line` operations cover the neighborhoods.

use crate::closedform::fixed_n_average;
use crate::closedform::FixedNSpec;
use crate::quadrature::integrate;
use crate::specfun::{erfc, ln_erfc, log_binomial};
use crate::{Error, Result};
use std::f64::consts::{LN_2, PI};

/// A point of a double-scaling (zoom) family: f = 1/2 + Λ_f / V^a and/or
/// filling 1/2 + Λ_n / V^b, with the exponent pair fixed per operation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingPoint {
    pub lambda_f: f64,
    pub lambda_n: f64,
}

impl ScalingPoint {
    pub fn new(lambda_f: f64, lambda_n: f64) -> Self {
        Self { lambda_f, lambda_n }
    }

    /// (f, n) of the zoom f = 1/2 + Λ_f V^{-af}, n = 1/2 + Λ_n V^{-an}.
    pub fn at(&self, v: u32, af: f64, an: f64) -> (f64, f64) {
        let vf = f64::from(v);
        (0.5 + self.lambda_f * vf.powf(-af), 0.5 + self.lambda_n * vf.powf(-an))
    }
}

fn delta(cond: bool) -> f64 {
    if cond {
        1.0
    } else {
        0.0
    }
}

// ln[n^n (1-n)^{1-n}] (negative for 0 < n < 1)
fn ln_w(n: f64) -> f64 {
    n * n.ln() + (1.0 - n) * (1.0 - n).ln()
}

// ln erfc extended to negative arguments (where erfc is O(1))
fn ln_erfc_signed(z: f64) -> f64 {
    if z >= 0.0 {
        ln_erfc(z)
    } else {
        erfc(z).ln()
    }
}

// ---------------------------------------------------------------------------
// general pure states
// ---------------------------------------------------------------------------

/// Thermodynamic limit of the Page setting: (mean, variance).
pub fn page_thermo(v: u32, f: f64) -> (f64, f64) {
    assert!(f > 0.0 && f < 1.0);
    let vf = f64::from(v);
    let gap = (1.0 - 2.0 * f).abs();
    let mean = f.min(1.0 - f) * vf * LN_2 - (-(gap * vf + 1.0) * LN_2).exp();
    let variance = (0.5 - 0.25 * delta(f == 0.5)) * (-(1.0 + gap) * vf * LN_2).exp();
    (mean, variance)
}

/// Large-V mean of the fixed-N general-state ensemble (through O(1),
/// including the Kronecker-delta terms on exact equality).
pub fn fixed_n_thermo(v: u32, f: f64, n: f64) -> f64 {
    assert!(f > 0.0 && f < 1.0 && n > 0.0 && n < 1.0);
    let f = f.min(1.0 - f);
    let vf = f64::from(v);
    let lead = -ln_w(n) * f * vf;
    let sqrt_term = -delta(f == 0.5)
        * (n * (1.0 - n) / (2.0 * PI)).sqrt()
        * ((1.0 - n) / n).ln().abs()
        * vf.sqrt();
    lead + sqrt_term + (f + (1.0 - f).ln()) / 2.0 - 0.5 * delta(f == 0.5) * delta(n == 0.5)
}

/// Large-V variance of the fixed-N general-state ensemble:
/// α V^{3/2} e^{-βV} with the printed coefficients.
pub fn fixed_n_variance_thermo(v: u32, f: f64, n: f64) -> f64 {
    assert!(f > 0.0 && f < 1.0 && n > 0.0 && n < 1.0);
    let f = f.min(1.0 - f);
    let vf = f64::from(v);
    let alpha = (2.0 * PI).sqrt()
        * (f * (1.0 - f) - delta(f == 0.5) / (2.0 * PI))
        * (n / (1.0 - n)).ln().powi(2)
        * (n * (1.0 - n)).powf(1.5);
    let beta = -ln_w(n);
    (alpha * vf.powf(1.5) * (-beta * vf).exp()).max(0.0)
}

/// Large-V mean of the weighted general-state ensemble at mean filling n̄.
pub fn page_weighted_thermo(v: u32, f: f64, nbar: f64) -> f64 {
    assert!(f > 0.0 && f < 1.0 && nbar > 0.0 && nbar < 1.0);
    let f = f.min(1.0 - f);
    let vf = f64::from(v);
    let lead = -ln_w(nbar) * f * vf;
    let sqrt_term = -delta(f == 0.5)
        * (nbar * (1.0 - nbar) / (2.0 * PI)).sqrt()
        * ((1.0 - nbar) / nbar).ln().abs()
        * vf.sqrt();
    lead + sqrt_term + (1.0 - f).ln() / 2.0
        - 2.0 / PI * delta(f == 0.5) * delta(nbar == 0.5)
}

/// Leading (volume-law) variance of the weighted general-state ensemble.
pub fn page_weighted_variance_thermo(v: u32, f: f64, nbar: f64) -> f64 {
    let f = f.min(1.0 - f);
    nbar * (1.0 - nbar) * (nbar / (1.0 - nbar)).ln().powi(2) * f * f64::from(v)
}

/// Full erfc-resolved large-V mean of the fixed-N general-state ensemble,
/// valid uniformly in the neighborhood of f = 1/2 and n = 1/2.
pub fn page_resolved(v: u32, f: f64, n: f64) -> f64 {
    assert!(f > 0.0 && f < 1.0 && n > 0.0 && n < 1.0);
    let f = f.min(1.0 - f);
    let vf = f64::from(v);
    let base = -vf * f * ln_w(n) + (f + (1.0 - f).ln()) / 2.0;

    // erfc resolution of the sqrt(V) kink at f = 1/2
    let lnn = ((1.0 - n) / n).ln().abs();
    let kink = if lnn == 0.0 {
        0.0
    } else {
        let dnc1 = -vf * (1.0 - 2.0 * f) * ln_w(n) / (2.0 * lnn);
        let spread = (n * (1.0 - n) * vf).sqrt();
        -vf * (1.0 - 2.0 * f) / 2.0
            * ln_w(n)
            * erfc(2.0f64.sqrt() * dnc1 / spread)
            - spread / (2.0 * PI).sqrt() * lnn * (-2.0 * dnc1 * dnc1 / (n * (1.0 - n) * vf)).exp()
    };

    // erfc resolution of the constant kink at n = 1/2
    let dn = (1.0 - 2.0 * n).abs();
    let center = if dn == 0.0 {
        if f == 0.5 {
            -0.5
        } else {
            -((2.0 * f - 1.0) * vf - 1.0).exp2()
        }
    } else {
        // +ln2(1-2f) in the erfc argument pairs with the 2^{V(1-2f)} prefactor
        let mut acc = 0.0;
        for sign in [1.0, -1.0] {
            let z = vf.sqrt() * (dn * dn + sign * LN_2 * (1.0 - 2.0 * f))
                / (2.0f64.sqrt() * dn);
            let ln_term = sign * (1.0 - 2.0 * f) * vf * LN_2 - 2.0 * LN_2
                + vf * dn * dn / 2.0
                + ln_erfc_signed(z);
            acc -= ln_term.exp();
        }
        acc
    };
    base + kink + center
}

/// Resolved sqrt(V) coefficient b(Λ_f, n) of the fixed-N mean near f = 1/2,
/// with f = 1/2 + Λ_f/√V (the mean carries -b √V).
pub fn page_b(lambda_f: f64, n: f64) -> f64 {
    assert!(n > 0.0 && n < 1.0);
    let lnn = ((1.0 - n) / n).ln().abs();
    if lnn == 0.0 {
        return 0.0;
    }
    let lw = ln_w(n);
    let a = lambda_f.abs();
    a * lw * erfc(-2.0f64.sqrt() * a * lw / ((n * (1.0 - n)).sqrt() * lnn))
        + (n * (1.0 - n) / (2.0 * PI)).sqrt()
            * lnn
            * (-2.0 * a * a * lw * lw / ((1.0 - n) * n * lnn * lnn)).exp()
}

/// Resolved constant coefficient c(Λ_f, Λ_n̄) of the fixed-N mean at the
/// multicritical point, with f = 1/2 + Λ_f/V and n = 1/2 + Λ_n̄/√V
/// (the mean carries -c).
pub fn page_c(lambda_f: f64, lambda_n: f64) -> Result<f64> {
    if lambda_n == 0.0 {
        return Err(Error::Domain("page_c requires Λ_n̄ != 0".into()));
    }
    let b = lambda_n.abs();
    let mut acc = 2.0 * LN_2 - 1.0;
    for sign in [1.0, -1.0] {
        let z = (2.0 * b * b + sign * lambda_f * LN_2) / (2.0f64.sqrt() * b);
        acc += (2.0 * b * b + sign * lambda_f * 2.0 * LN_2 + ln_erfc_signed(z)).exp();
    }
    Ok(acc / 4.0)
}

// the three semi-infinite integrals of the resolved weighted average
pub(crate) fn weighted_resolved_integrals(v: u32, f: f64, w: f64) -> (f64, f64, f64) {
    let vf = f64::from(v);
    let m = vf.sqrt() * w / 4.0;
    // e^{-Vw²/8} cosh(√V w δ) as a pair of shifted exponentials
    let damped_cosh =
        |d: f64| 0.5 * ((4.0 * m * d - 2.0 * m * m).exp() + (-4.0 * m * d - 2.0 * m * m).exp());
    let c = LN_2 * vf * (1.0 - 2.0 * f);
    let hi = m.abs() + 12.0;
    let i1 = 4.0 / PI
        * integrate(
            |d| {
                if d <= 0.0 {
                    return 0.0;
                }
                d * damped_cosh(d) * (-2.0 * d * d - c * c / (8.0 * d * d)).exp()
            },
            0.0,
            hi,
            1e-10,
        );
    let erfc_piece = |d: f64, sign: f64| {
        if d <= 0.0 {
            return 0.0;
        }
        let z = (4.0 * d * d + sign * c) / (8.0f64.sqrt() * d);
        damped_cosh(d) * (-sign * c + ln_erfc_signed(z)).exp() / (2.0 * PI).sqrt()
    };
    let i2 = integrate(|d| erfc_piece(d, -1.0), 0.0, hi, 1e-10);
    let i3 = integrate(|d| erfc_piece(d, 1.0), 0.0, hi, 1e-10);
    (i1, i2, i3)
}

/// Resolved weighted average for w = O(1/√V) and 1 - 2f = O(1/V): the exact
/// half-filled sector average plus the three quadrature-resolved correction
/// integrals. Requires even V and an integer V_A = f V.
pub fn page_weighted_resolved(v: u32, f: f64, w: f64) -> Result<f64> {
    if v % 2 != 0 {
        return Err(Error::Domain("page_weighted_resolved needs even V".into()));
    }
    let va = f * f64::from(v);
    if (va - va.round()).abs() > 1e-9 {
        return Err(Error::Domain(format!("f V = {va} is not an integer")));
    }
    let base = fixed_n_average(&FixedNSpec::new(v, va.round() as u32, v / 2)?);
    let nbar = 1.0 / (1.0 + w.exp());
    let (i1, i2, i3) = weighted_resolved_integrals(v, f, w);
    Ok(base - f64::from(v) * (1.0 - 2.0 * nbar).powi(2) / 4.0 - 0.25 - i1 - i2 - i3)
}

// ---------------------------------------------------------------------------
// Gaussian states
// ---------------------------------------------------------------------------

/// Thermodynamic limit of the arbitrary-N Gaussian mean (through O(1)).
pub fn gaussian_thermo(v: u32, f: f64) -> f64 {
    assert!(f > 0.0 && f < 1.0);
    let f = f.min(1.0 - f);
    let vf = f64::from(v);
    vf * ((LN_2 - 1.0) * f + (f - 1.0) * (1.0 - f).ln()) + f / 2.0 + (1.0 - f).ln() / 4.0
}

/// Large-V expansion of the fixed-N Gaussian mean (volume term plus the
/// 1/(12V) correction; there is no 1/√V or constant term).
pub fn gaussian_fixed_n_thermo(v: u32, f: f64, n: f64) -> f64 {
    assert!(f > 0.0 && f < 1.0 && n > 0.0 && n < 1.0);
    let mut f = f.min(1.0 - f);
    let mut n = n.min(1.0 - n);
    if f > n {
        std::mem::swap(&mut f, &mut n);
    }
    let vf = f64::from(v);
    let lead = (f - 1.0) * (1.0 - f).ln() + f * ((n - 1.0) * (1.0 - n).ln() - n * n.ln() - 1.0);
    lead * vf + f * (1.0 - f + n * (1.0 - n)) / (12.0 * (1.0 - f) * (1.0 - n) * n) / vf
}

/// Large-V expansion of the weighted Gaussian mean, selecting the printed
/// case by exact comparison of f and n̄.
pub fn gaussian_weighted_thermo(v: u32, f: f64, nbar: f64) -> f64 {
    assert!(f > 0.0 && f < 1.0 && nbar > 0.0 && nbar < 1.0);
    let f = f.min(1.0 - f);
    let nb = nbar.min(1.0 - nbar);
    let vf = f64::from(v);
    if f == nb {
        if f == 0.5 {
            (LN_2 - 0.5) * vf - 0.25 + 1.0 / (3.0 * (2.0 * PI).sqrt()) / vf.sqrt()
                + 0.125 / vf
        } else {
            ((f * f - 1.0) * (1.0 - f).ln() - f * (1.0 + f * f.ln())) * vf - f / 2.0
                + ((1.0 - f) * f / (18.0 * PI)).sqrt() / vf.sqrt()
                + (1.0 + f) / (24.0 * (1.0 - f)) / vf
        }
    } else if f < nb {
        ((f - 1.0) * (1.0 - f).ln()
            + f * ((nb - 1.0) * (1.0 - nb).ln() - 1.0 - nb * nb.ln()))
            * vf
            - f / 2.0
            + (f - 2.0) * f / (12.0 * (f - 1.0)) / vf
    } else {
        ((f - 1.0) * nb * (1.0 - f).ln() - nb * (1.0 + f * f.ln())
            + (nb - 1.0) * (1.0 - nb).ln())
            * vf
            - nb / 2.0
            + nb * (1.0 - f + f * f) / (12.0 * f * (1.0 - f)) / vf
    }
}

/// Leading (volume-law) variance of the weighted Gaussian ensemble.
pub fn gaussian_weighted_variance_thermo(v: u32, f: f64, nbar: f64) -> f64 {
    assert!(f > 0.0 && f < 1.0 && nbar > 0.0 && nbar < 1.0);
    let f = f.min(1.0 - f);
    let nb = nbar.min(1.0 - nbar);
    let vf = f64::from(v);
    if f <= nb {
        nb * (1.0 - nb) * (nb / (1.0 - nb)).ln().powi(2) * f * f * vf
    } else {
        let bracket = (1.0 - f) * (1.0 - f).ln() + f * f.ln() + (1.0 - nb).ln();
        nb * (1.0 - nb) * bracket * bracket * vf
    }
}

/// Resolved 1/√V coefficient of the weighted Gaussian mean at the
/// multicritical point n̄ = f = 1/2, with n̄ = 1/2 + Λ_n̄/√V, f = 1/2 + Λ_f/√V.
pub fn gaussian_weighted_center(lambda_f: f64, lambda_n: f64) -> f64 {
    let a = lambda_f.abs();
    let b = lambda_n.abs();
    let (p, q) = (a + b, (a - b).abs());
    ((2.0 / PI).sqrt()
        * ((-2.0 * q * q).exp() * (1.0 + 2.0 * q * q)
            + (-2.0 * p * p).exp() * (1.0 + 2.0 * p * p))
        - p * (3.0 + 4.0 * p * p) * erfc(2.0f64.sqrt() * p)
        - q * (3.0 + 4.0 * q * q) * erfc(2.0f64.sqrt() * q))
        / 12.0
}

/// Resolved 1/√V coefficient of the weighted Gaussian mean along the
/// transition line n̄ = f < 1/2, with n̄ = f + Λ_n̄/√V.
pub fn gaussian_weighted_line(f: f64, lambda_n: f64) -> Result<f64> {
    if !(f > 0.0 && f <= 0.5) {
        return Err(Error::Domain(format!("need 0 < f <= 1/2, got {f}")));
    }
    let l2 = lambda_n * lambda_n;
    let gauss = (-l2 / (2.0 * f * (1.0 - f))).exp()
        * (2.0 * f.powf(1.5) - 2.0 * f.powf(2.5) + f.sqrt() * l2)
        / (6.0 * (1.0 - f).sqrt() * f * (2.0 * PI).sqrt());
    let tail = lambda_n.abs() * (3.0 * (1.0 - f) * f + l2)
        * erfc(lambda_n.abs() / (2.0 * f * (1.0 - f)).sqrt())
        / (12.0 * (1.0 - f) * f);
    Ok(gauss - tail)
}

// ---------------------------------------------------------------------------
// bosonic extension
// ---------------------------------------------------------------------------

/// ln of the bosonic sector dimension C(n + modes - 1, n); -inf when empty.
pub fn log_boson_dim(modes: u32, n: i64) -> f64 {
    if n < 0 {
        return f64::NEG_INFINITY;
    }
    if modes == 0 {
        return if n == 0 { 0.0 } else { f64::NEG_INFINITY };
    }
    log_binomial(u64::from(modes) - 1 + n as u64, n)
}

/// Exact fixed-N bosonic average: the sector sum with bosonic dimensions.
pub fn bosonic_fixed_n_exact(v: u32, v_a: u32, n: u32) -> f64 {
    assert!(v_a <= v && v >= 1);
    let ln_dn = log_boson_dim(v, i64::from(n));
    let mut total = 0.0;
    for n_a in 0..=n {
        let ln_da = log_boson_dim(v_a, i64::from(n_a));
        let ln_db = log_boson_dim(v - v_a, i64::from(n) - i64::from(n_a));
        if ln_da == f64::NEG_INFINITY || ln_db == f64::NEG_INFINITY {
            continue;
        }
        let rho = (ln_da + ln_db - ln_dn).exp();
        total += rho * crate::closedform::page_phi_ln(ln_dn, ln_da, ln_db);
    }
    total
}

/// Large-V bosonic fixed-N mean (f in (0, 1/2], filling n = N/V > 0
/// unbounded above).
pub fn bosonic_fixed_n_thermo(v: u32, f: f64, n: f64) -> f64 {
    assert!(f > 0.0 && f <= 0.5 && n > 0.0);
    let vf = f64::from(v);
    f * vf * (n * (1.0 + 1.0 / n).ln() + (1.0 + n).ln())
        + delta(f == 0.5) * vf.sqrt() * ((n + n * n) / (8.0 * PI)).sqrt() * (1.0 + 1.0 / n).ln()
        + (f + (1.0 - f).ln()) / 2.0
}

/// Occupation vectors (n_1..n_modes) with Σ n_i = n, lexicographic order.
pub fn bosonic_sector_basis(modes: u32, n: u32) -> Vec<Vec<u8>> {
    fn rec(modes: u32, n: u32, prefix: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if modes == 1 {
            let mut full = prefix.clone();
            full.push(n as u8);
            out.push(full);
            return;
        }
        for first in 0..=n {
            prefix.push(first as u8);
            rec(modes - 1, n - first, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(modes, n, &mut Vec::new(), &mut out);
    out
}

/// Entanglement entropy of a bosonic sector state, via the blocked RDM over
/// the bosonic occupation basis.
pub fn bosonic_sector_entropy(
    amplitudes: &[num_complex::Complex64],
    v: u32,
    v_a: u32,
    n: u32,
) -> Result<f64> {
    let basis = bosonic_sector_basis(v, n);
    if basis.len() != amplitudes.len() {
        return Err(Error::Dimension(format!(
            "got {} amplitudes for a {}-dimensional bosonic sector",
            amplitudes.len(),
            basis.len()
        )));
    }
    let a_basis: Vec<Vec<Vec<u8>>> = (0..=n).map(|k| bosonic_sector_basis(v_a, k)).collect();
    let b_basis: Vec<Vec<Vec<u8>>> = (0..=n).map(|k| bosonic_sector_basis(v - v_a, k)).collect();
    let mut entropy = 0.0;
    for n_a in 0..=n {
        let amap = &a_basis[n_a as usize];
        let bmap = &b_basis[(n - n_a) as usize];
        let mut w = ndarray::Array2::zeros((amap.len(), bmap.len()));
        for (idx, occ) in basis.iter().enumerate() {
            let wa: u32 = occ[..v_a as usize].iter().map(|&x| u32::from(x)).sum();
            if wa != n_a {
                continue;
            }
            let a = amap.iter().position(|x| x[..] == occ[..v_a as usize]).unwrap();
            let b = bmap.iter().position(|x| x[..] == occ[v_a as usize..]).unwrap();
            w[[a, b]] = amplitudes[idx];
        }
        for sv in crate::linalg::singular_values(&w) {
            let lam = sv * sv;
            if lam > 0.0 {
                entropy -= lam * lam.ln();
            }
        }
    }
    Ok(entropy)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closedform::{
        gaussian_fixed_n_average, page_average, weighted_average, FixedNSpec, WeightedSpec,
    };
    use approx::assert_abs_diff_eq;

    #[test]
    fn page_thermo_values() {
        let (mean, _) = page_thermo(10, 0.5);
        assert_abs_diff_eq!(mean, 5.0 * LN_2 - 0.5, epsilon = 1e-14);
        let (_, var) = page_thermo(20, 0.5);
        assert_abs_diff_eq!(var, 0.25 * (-20.0 * LN_2).exp(), epsilon = 1e-18);
        // against the exact formula at V = 40, f = 0.3
        let (mean, _) = page_thermo(40, 0.3);
        assert!((mean - page_average(1 << 12, 1 << 28)).abs() < 1e-6);
    }

    #[test]
    fn fixed_n_thermo_values() {
        assert_abs_diff_eq!(
            fixed_n_thermo(100, 0.3, 0.5),
            30.0 * LN_2 + (0.3 + 0.7f64.ln()) / 2.0,
            epsilon = 1e-12
        );
        // the sqrt(V) delta coefficient at f = 1/2, n = 1/4
        let v = 400;
        let smooth = -ln_w(0.25) * 0.5 * 400.0 + (0.5 + 0.5f64.ln()) / 2.0;
        let coeff = (fixed_n_thermo(v, 0.5, 0.25) - smooth) / 20.0;
        assert_abs_diff_eq!(
            coeff,
            -(3.0 / 16.0 / (2.0 * PI)).sqrt() * 3.0f64.ln(),
            epsilon = 1e-12
        );
    }

    #[test]
    fn fixed_n_thermo_converges_to_exact() {
        // residual decays with V at f = 0.25, n = 0.5; monotone beyond V = 30
        let mut prev = f64::INFINITY;
        for v in (20..=60).step_by(4) {
            let exact = crate::closedform::fixed_n_average(
                &FixedNSpec::new(v, v / 4, v / 2).unwrap(),
            );
            let resid = (exact - fixed_n_thermo(v, 0.25, 0.5)).abs();
            if v > 30 {
                assert!(resid < prev, "V={v}: {resid} !< {prev}");
            }
            prev = resid;
        }
    }

    #[test]
    fn page_weighted_thermo_values() {
        assert_abs_diff_eq!(
            page_weighted_thermo(100, 0.3, 0.5),
            30.0 * LN_2 + 0.7f64.ln() / 2.0,
            epsilon = 1e-12
        );
        // constant at f = n̄ = 1/2 is ln(1/2)/2 - 2/π
        let v = 64;
        let constant = page_weighted_thermo(v, 0.5, 0.5) - 0.5 * f64::from(v) * LN_2;
        assert_abs_diff_eq!(constant, 0.5f64.ln() / 2.0 - 2.0 / PI, epsilon = 1e-12);
    }

    #[test]
    fn page_weighted_thermo_converges_to_exact_sum() {
        let w = 1.0; // n̄ = 1/(1+e) ≈ 0.2689
        let nbar = 1.0 / (1.0 + 1.0f64.exp());
        let mut prev = f64::INFINITY;
        for v in (20..=60).step_by(4) {
            let exact = weighted_average(&WeightedSpec::new(v, v / 4, w).unwrap(), false);
            let resid = (exact - page_weighted_thermo(v, 0.25, nbar)).abs();
            assert!(resid < prev, "V={v}: {resid} !< {prev}");
            prev = resid;
        }
    }

    #[test]
    fn gaussian_thermo_volume_coefficient() {
        // slope in V at f = 1/2 is ln 2 - 1/2
        let slope = (gaussian_thermo(400, 0.5) - gaussian_thermo(200, 0.5)) / 200.0;
        assert_abs_diff_eq!(slope, LN_2 - 0.5, epsilon = 1e-13);
    }

    #[test]
    fn gaussian_fixed_n_thermo_cubic_convergence() {
        // |exact - expansion| ~ V^{-3} at (f, n) = (0.25, 0.5)
        let mut pts = Vec::new();
        for k in 0..5 {
            let v = 64u32 << k;
            let exact = gaussian_fixed_n_average(&FixedNSpec::new(v, v / 4, v / 2).unwrap());
            let resid = (exact - gaussian_fixed_n_thermo(v, 0.25, 0.5)).abs();
            pts.push((f64::from(v).ln(), resid.ln()));
        }
        let slope = fit_slope(&pts);
        assert!((slope + 3.0).abs() < 0.3, "slope {slope}");
    }

    pub(super) fn fit_slope(pts: &[(f64, f64)]) -> f64 {
        let n = pts.len() as f64;
        let sx: f64 = pts.iter().map(|p| p.0).sum();
        let sy: f64 = pts.iter().map(|p| p.1).sum();
        let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
        let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
        (n * sxy - sx * sy) / (n * sxx - sx * sx)
    }

    #[test]
    fn gaussian_weighted_thermo_multicritical_coefficients() {
        let v = 100u32;
        let vf = f64::from(v);
        let expected = (LN_2 - 0.5) * vf - 0.25
            + 1.0 / (3.0 * (2.0 * PI).sqrt()) / vf.sqrt()
            + 0.125 / vf;
        assert_abs_diff_eq!(gaussian_weighted_thermo(v, 0.5, 0.5), expected, epsilon = 1e-13);
    }

    #[test]
    fn gaussian_weighted_variance_thermo_values() {
        // n̄ = 1/2: leading O(V) term vanishes
        assert_eq!(gaussian_weighted_variance_thermo(1000, 0.3, 0.5), 0.0);
        let v = gaussian_weighted_variance_thermo(1000, 0.25, 0.4);
        let expect = 0.4 * 0.6 * (2.0f64 / 3.0).ln().powi(2) * 0.0625 * 1000.0;
        assert_abs_diff_eq!(v, expect, epsilon = 1e-10);
        for i in 1..10 {
            for j in 1..10 {
                assert!(
                    gaussian_weighted_variance_thermo(500, i as f64 / 20.0, j as f64 / 20.0)
                        >= 0.0
                );
            }
        }
    }

    #[test]
    fn page_resolved_reduces_off_critically() {
        let v = 500;
        let diff = (page_resolved(v, 0.3, 0.25) - fixed_n_thermo(v, 0.3, 0.25)).abs();
        assert!(diff < 1e-6, "diff {diff}");
    }

    #[test]
    fn page_resolved_sqrtv_coefficient_matches_page_b() {
        // the n-resolution erfc terms pollute the coefficient at O(1/V),
        // so the agreement tightens from ~2e-6 at V=1e4 to <1e-8 at V=1e8
        for (v, tol) in [(10_000u32, 5e-6), (100_000_000, 1e-8)] {
            let vf = f64::from(v);
            let lambda_f = -1.0;
            let n = 0.25;
            let f = 0.5 + lambda_f / vf.sqrt();
            let smooth = -vf * f * ln_w(n) + (f + (1.0 - f).ln()) / 2.0;
            let measured_b = -(page_resolved(v, f, n) - smooth) / vf.sqrt();
            assert!(
                (measured_b - page_b(lambda_f, n)).abs() < tol,
                "V={v}: {measured_b} vs {}",
                page_b(lambda_f, n)
            );
        }
    }

    #[test]
    fn page_resolved_half_filling_limit() {
        // at n = 1/2 the two erfc terms combine to -2^{V(2f-1)-1}
        let v = 100;
        let f = 0.4;
        let vf = f64::from(v);
        let expected = vf * f * LN_2 + (f + (1.0 - f).ln()) / 2.0
            - ((2.0 * f - 1.0) * vf - 1.0).exp2();
        assert_abs_diff_eq!(page_resolved(v, f, 0.5), expected, epsilon = 1e-12);
    }

    #[test]
    fn page_b_limits() {
        for n in [0.2, 0.35, 0.45] {
            assert_abs_diff_eq!(
                page_b(0.0, n),
                (n * (1.0 - n) / (2.0 * PI)).sqrt() * ((1.0 - n) / n).ln().abs(),
                epsilon = 1e-14
            );
            assert!(page_b(25.0, n).abs() < 1e-10);
            assert!(page_b(-25.0, n).abs() < 1e-10);
        }
    }

    #[test]
    fn page_c_limits() {
        assert!(page_c(1.0, 0.0).is_err());
        let target = (2.0 * LN_2 - 1.0) / 4.0;
        assert!((page_c(40.0, 1.0).unwrap() - target).abs() < 1e-10);
        // the Λ_n̄ -> ∞ direction converges only like 1/Λ_n̄
        assert!((page_c(0.5, 1e8).unwrap() - target).abs() < 1e-7);
    }

    #[test]
    fn weighted_resolved_integral_values() {
        // at f = 1/2, w = 0: the erfc integrals are each 1/(2π), the
        // Gaussian one is 1/π
        let (i1, i2, i3) = weighted_resolved_integrals(64, 0.5, 0.0);
        assert_abs_diff_eq!(i1, 1.0 / PI, epsilon = 1e-9);
        assert_abs_diff_eq!(i2, 1.0 / (2.0 * PI), epsilon = 1e-9);
        assert_abs_diff_eq!(i3, 1.0 / (2.0 * PI), epsilon = 1e-9);
    }

    #[test]
    fn page_weighted_resolved_half_filling() {
        let v = 64;
        let got = page_weighted_resolved(v, 0.5, 0.0).unwrap();
        let base = fixed_n_average(&FixedNSpec::new(v, v / 2, v / 2).unwrap());
        assert_abs_diff_eq!(got, base - 0.25 - 2.0 / PI, epsilon = 1e-8);
        assert!(page_weighted_resolved(63, 0.5, 0.0).is_err());
    }

    #[test]
    fn gaussian_weighted_center_and_line() {
        assert_abs_diff_eq!(
            gaussian_weighted_center(0.0, 0.0),
            1.0 / (3.0 * (2.0 * PI).sqrt()),
            epsilon = 1e-14
        );
        // line at Λ = 0 recovers the delta coefficient of the compact form
        for f in [0.1, 0.25, 0.4, 0.5] {
            assert_abs_diff_eq!(
                gaussian_weighted_line(f, 0.0).unwrap(),
                (f * (1.0 - f) / (18.0 * PI)).sqrt(),
                epsilon = 1e-14
            );
        }
        assert!(gaussian_weighted_line(0.3, 30.0).unwrap().abs() < 1e-12);
        assert!(gaussian_weighted_line(0.3, -30.0).unwrap().abs() < 1e-12);
        // the two resolutions connect at f = 1/2
        let shift = 30.0;
        for lambda in [-1.0, -0.3, 0.2, 1.5] {
            let center = gaussian_weighted_center(shift, shift + lambda);
            let line = gaussian_weighted_line(0.5, lambda).unwrap();
            assert!((center - line).abs() < 1e-8, "Λ={lambda}: {center} vs {line}");
        }
    }

    #[test]
    fn bosonic_dimensions_and_exact_sum() {
        // multiset Vandermonde: Σ_{N_A} d_A d_B = d_N, exactly (u128)
        let choose = |top: u64, k: u64| -> u128 {
            let mut acc: u128 = 1;
            for i in 0..k as u128 {
                acc = acc * (top as u128 - i) / (i + 1);
            }
            acc
        };
        let bdim =
            |modes: u64, n: u64| -> u128 { if modes == 0 { u128::from(n == 0) } else { choose(n + modes - 1, n) } };
        let (v, n) = (6u64, 4u64);
        for v_a in 0..=v {
            let total: u128 = (0..=n).map(|k| bdim(v_a, k) * bdim(v - v_a, n - k)).sum();
            assert_eq!(total, bdim(v, n), "V_A = {v_a}");
        }
        assert_eq!(bosonic_fixed_n_exact(4, 2, 0), 0.0);
        assert!(bosonic_fixed_n_exact(4, 2, 3) > 0.0);
        // 20-dimensional sector for (V, N) = (4, 3)
        assert_eq!(bosonic_sector_basis(4, 3).len(), 20);
    }

    #[test]
    fn bosonic_thermo_shape() {
        // delta term enters with a positive sign at f = 1/2
        let with_delta = bosonic_fixed_n_thermo(400, 0.5, 0.3);
        let smooth = 0.5 * 400.0 * (0.3 * (1.0f64 + 1.0 / 0.3).ln() + 1.3f64.ln())
            + (0.5 + 0.5f64.ln()) / 2.0;
        assert!(with_delta > smooth);
        assert_abs_diff_eq!(
            with_delta - smooth,
            20.0 * ((0.3 + 0.09) / (8.0 * PI)).sqrt() * (1.0f64 + 1.0 / 0.3).ln(),
            epsilon = 1e-12
        );
    }

    #[test]
    fn scaling_point_coordinates() {
        let sp = ScalingPoint::new(-1.0, 2.0);
        let (f, n) = sp.at(100, 0.5, 1.0);
        assert_abs_diff_eq!(f, 0.5 - 0.1, epsilon = 1e-15);
        assert_abs_diff_eq!(n, 0.5 + 0.02, epsilon = 1e-15);
    }
}
