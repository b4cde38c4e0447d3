//! Entanglement-entropy kernels: reduced-density-matrix spectra for general
//! and Gaussian pure states, and entropy functions on those spectra.
//!
//! Bit convention: mode 1 is the most significant bit of a basis index, and
//! subsystem A consists of the first `V_A` modes, so the A-label of a basis
//! state is a contiguous block of high bits and reshaping the amplitude
//! vector into the d_A x d_B matrix W is free.

use crate::linalg;
use crate::{Error, Result};
use ndarray::Array2;
use num_complex::Complex64 as C64;

/// Eigenvalues below this are clamped to zero before logs.
const EIG_CLAMP: f64 = 1e-12;

/// A bipartition of `v` fermionic modes into the first `v_a` and the rest.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PartitionSpec {
    pub v: u32,
    pub v_a: u32,
}

impl PartitionSpec {
    pub fn new(v: u32, v_a: u32) -> Result<Self> {
        if v == 0 || v_a > v {
            return Err(Error::Domain(format!(
                "need 0 <= V_A <= V with V > 0, got V={v}, V_A={v_a}"
            )));
        }
        Ok(Self { v, v_a })
    }

    pub fn v_b(&self) -> u32 {
        self.v - self.v_a
    }

    /// Subsystem fraction f = V_A / V.
    pub fn f(&self) -> f64 {
        f64::from(self.v_a) / f64::from(self.v)
    }
}

/// Which space a pure-state amplitude vector lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StateSpace {
    /// The full 2^V Fock space.
    Full { modes: u32 },
    /// The fixed-N sector, indexed by `sector_basis(modes, particles)`.
    Sector { modes: u32, particles: u32 },
}

/// A normalized pure state.
#[derive(Debug, Clone)]
pub struct PureStateVector {
    pub amplitudes: Vec<C64>,
    pub space: StateSpace,
}

impl PureStateVector {
    pub fn new(amplitudes: Vec<C64>, space: StateSpace) -> Result<Self> {
        let dim = match space {
            StateSpace::Full { modes } => {
                if modes > 30 {
                    return Err(Error::Dimension(format!("full space with V={modes} modes")));
                }
                1usize << modes
            }
            StateSpace::Sector { modes, particles } => sector_dim(modes, particles)?,
        };
        if amplitudes.len() != dim {
            return Err(Error::Dimension(format!(
                "state has {} amplitudes, space dimension is {dim}",
                amplitudes.len()
            )));
        }
        let norm2: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm2 - 1.0).abs() > 1e-12 {
            return Err(Error::Domain(format!("state norm² = {norm2}, expected 1")));
        }
        Ok(Self { amplitudes, space })
    }
}

fn sector_dim(v: u32, n: u32) -> Result<usize> {
    if n > v || v > 63 {
        return Err(Error::Dimension(format!("sector N={n} of V={v} modes")));
    }
    Ok(binomial_u64(v, n) as usize)
}

/// Exact binomial coefficient (fits u64 for v <= 63).
pub(crate) fn binomial_u64(v: u32, n: u32) -> u64 {
    if n > v {
        return 0;
    }
    let n = n.min(v - n);
    let mut acc: u128 = 1;
    for k in 0..n as u128 {
        acc = acc * (v as u128 - k) / (k + 1);
    }
    acc as u64
}

/// All V-bit strings of Hamming weight N, in ascending numeric order.
pub fn sector_basis(v: u32, n: u32) -> Vec<u64> {
    assert!(n <= v && v <= 63);
    if n == 0 {
        return vec![0];
    }
    let mut out = Vec::with_capacity(binomial_u64(v, n) as usize);
    // Gosper's hack
    let mut s: u64 = (1 << n) - 1;
    let limit: u64 = 1 << v;
    while s < limit {
        out.push(s);
        let c = s & s.wrapping_neg();
        let r = s + c;
        s = (((r ^ s) >> 2) / c) | r;
        if c == 0 {
            break;
        }
    }
    out
}

/// Rank of a weight-n bitstring within `sector_basis` order (combinadic rank).
pub(crate) fn sector_rank(bits: u64) -> usize {
    let mut rank: u64 = 0;
    let mut count = 0u32;
    let mut b = bits;
    while b != 0 {
        let p = b.trailing_zeros();
        count += 1;
        rank += binomial_u64(p, count);
        b &= b - 1;
    }
    rank as usize
}

/// Either representation of a pure fermionic Gaussian state.
#[derive(Debug, Clone)]
pub enum GaussianStateRep {
    /// One-body correlation matrix C_{ij} = <f_j† f_i> (V x V Hermitian
    /// projector for a pure fixed-N state).
    CorrelationMatrix(Array2<C64>),
    /// Majorana covariance (complex structure) J̃, a real antisymmetric
    /// 2V x 2V matrix with J̃² = -1. Majoranas are interleaved per mode, so
    /// subsystem A is the upper-left 2V_A x 2V_A block.
    ComplexStructure(Array2<f64>),
}

impl GaussianStateRep {
    /// Number of modes.
    pub fn modes(&self) -> usize {
        match self {
            GaussianStateRep::CorrelationMatrix(c) => c.nrows(),
            GaussianStateRep::ComplexStructure(j) => j.nrows() / 2,
        }
    }

    /// Checks the purity invariants (C² = C, Tr C integer; J̃ᵀ = -J̃, J̃² = -1).
    pub fn validate(&self) -> Result<()> {
        match self {
            GaussianStateRep::CorrelationMatrix(c) => {
                let v = c.nrows();
                let mut herm: f64 = 0.0;
                let mut proj: f64 = 0.0;
                for i in 0..v {
                    for j in 0..v {
                        herm = herm.max((c[[i, j]] - c[[j, i]].conj()).norm());
                        let mut cc = C64::new(0.0, 0.0);
                        for k in 0..v {
                            cc += c[[i, k]] * c[[k, j]];
                        }
                        proj = proj.max((cc - c[[i, j]]).norm());
                    }
                }
                let tr: C64 = (0..v).map(|i| c[[i, i]]).sum();
                if herm > 1e-8 {
                    return Err(Error::Numerical(format!("C not Hermitian: {herm:.2e}")));
                }
                if proj > 1e-10 {
                    return Err(Error::Numerical(format!("C not a projector: {proj:.2e}")));
                }
                if (tr.re - tr.re.round()).abs() > 1e-9 || tr.im.abs() > 1e-9 {
                    return Err(Error::Numerical(format!("Tr C = {tr} not an integer")));
                }
                Ok(())
            }
            GaussianStateRep::ComplexStructure(j) => {
                let d = j.nrows();
                let mut asym: f64 = 0.0;
                let mut sq: f64 = 0.0;
                for r in 0..d {
                    for c in 0..d {
                        asym = asym.max((j[[r, c]] + j[[c, r]]).abs());
                        let mut jj = 0.0;
                        for k in 0..d {
                            jj += j[[r, k]] * j[[k, c]];
                        }
                        let target = if r == c { -1.0 } else { 0.0 };
                        sq = sq.max((jj - target).abs());
                    }
                }
                if asym > 1e-8 {
                    return Err(Error::Numerical(format!("J not antisymmetric: {asym:.2e}")));
                }
                if sq > 1e-10 {
                    return Err(Error::Numerical(format!("J² != -1 by {sq:.2e}")));
                }
                Ok(())
            }
        }
    }

    /// Entanglement entropy of the first `v_a` modes.
    pub fn entanglement_entropy(&self, v_a: u32) -> Result<f64> {
        match self {
            GaussianStateRep::CorrelationMatrix(c) => {
                gaussian_entropy_from_c(&restrict_correlation(c, v_a))
            }
            GaussianStateRep::ComplexStructure(j) => {
                gaussian_entropy_from_j(&restrict_majorana(j, v_a))
            }
        }
    }
}

/// Upper-left V_A x V_A block of a correlation matrix.
pub fn restrict_correlation(c: &Array2<C64>, v_a: u32) -> Array2<C64> {
    let k = v_a as usize;
    Array2::from_shape_fn((k, k), |(i, j)| c[[i, j]])
}

/// Upper-left 2V_A x 2V_A block of an interleaved Majorana covariance.
pub fn restrict_majorana(j: &Array2<f64>, v_a: u32) -> Array2<f64> {
    let k = 2 * v_a as usize;
    Array2::from_shape_fn((k, k), |(r, c)| j[[r, c]])
}

/// Interleaved Majorana covariance J̃ of a fixed-N Gaussian state with
/// one-body correlation matrix C.
pub fn majorana_from_correlation(c: &Array2<C64>) -> Array2<f64> {
    let v = c.nrows();
    let mut j = Array2::zeros((2 * v, 2 * v));
    for p in 0..v {
        for q in 0..v {
            let im = c[[p, q]].im;
            let re2 = 2.0 * c[[p, q]].re - if p == q { 1.0 } else { 0.0 };
            j[[2 * p, 2 * q]] = 2.0 * im;
            j[[2 * p + 1, 2 * q + 1]] = 2.0 * im;
            j[[2 * p, 2 * q + 1]] = re2;
            let re2t = 2.0 * c[[q, p]].re - if p == q { 1.0 } else { 0.0 };
            j[[2 * p + 1, 2 * q]] = -re2t;
        }
    }
    j
}

/// Spectrum of a reduced density matrix, optionally tagged with the N_A
/// block each eigenvalue came from.
#[derive(Debug, Clone)]
pub struct RdmSpectrum {
    pub eigenvalues: Vec<f64>,
    pub block_labels: Option<Vec<u32>>,
}

impl RdmSpectrum {
    pub fn new(mut eigenvalues: Vec<f64>, block_labels: Option<Vec<u32>>) -> Result<Self> {
        for ev in &mut eigenvalues {
            if *ev < -EIG_CLAMP {
                return Err(Error::Numerical(format!("negative RDM eigenvalue {ev}")));
            }
            *ev = ev.max(0.0);
        }
        let sum: f64 = eigenvalues.iter().sum();
        if (sum - 1.0).abs() > 1e-10 {
            return Err(Error::Numerical(format!("RDM trace {sum}, expected 1")));
        }
        Ok(Self { eigenvalues, block_labels })
    }

    /// Block weight p_{N_A} = sum of eigenvalues carrying that label.
    pub fn block_weight(&self, n_a: u32) -> f64 {
        match &self.block_labels {
            None => f64::NAN,
            Some(labels) => self
                .eigenvalues
                .iter()
                .zip(labels)
                .filter(|(_, &l)| l == n_a)
                .map(|(ev, _)| ev)
                .sum(),
        }
    }
}

/// Binary entropy of a Gaussian eigenvalue:
/// s(x) = -((1+x)/2) ln((1+x)/2) - ((1-x)/2) ln((1-x)/2), s(±1) = 0.
pub fn s_binary(x: f64) -> f64 {
    debug_assert!(x.abs() <= 1.0 + 1e-12);
    let x = x.clamp(-1.0, 1.0);
    let mut s = 0.0;
    for p in [(1.0 + x) / 2.0, (1.0 - x) / 2.0] {
        if p > 0.0 {
            s -= p * p.ln();
        }
    }
    s
}

/// Von Neumann entropy -Σ λ ln λ with 0 ln 0 = 0.
pub fn vn_entropy(spec: &RdmSpectrum) -> f64 {
    spec.eigenvalues
        .iter()
        .filter(|&&l| l > 0.0)
        .map(|&l| -l * l.ln())
        .sum()
}

/// Rényi entropy of the given order: ln(Σ λ^q) / (1 - q).
pub fn renyi_entropy(spec: &RdmSpectrum, order: f64) -> Result<f64> {
    if !(order > 0.0) || order == 1.0 {
        return Err(Error::Domain(format!(
            "Rényi order must be positive and != 1, got {order}"
        )));
    }
    let sum: f64 = spec
        .eigenvalues
        .iter()
        .filter(|&&l| l > 0.0)
        .map(|&l| l.powf(order))
        .sum();
    Ok(sum.ln() / (1.0 - order))
}

fn spectrum_of_block(w: &Array2<C64>) -> Vec<f64> {
    // eigenvalues of WW† via singular values, padded to min(d_A, d_B)
    let k = w.nrows().min(w.ncols());
    let mut sv = linalg::singular_values(w);
    sv.truncate(k);
    let mut ev: Vec<f64> = sv.iter().map(|s| s * s).collect();
    ev.resize(k, 0.0);
    ev
}

/// RDM spectrum of a full-space pure state: reshape to W (d_A x d_B) and take
/// the singular values.
pub fn rdm_spectrum_full(state: &PureStateVector, part: &PartitionSpec) -> Result<RdmSpectrum> {
    let v = match state.space {
        StateSpace::Full { modes } => modes,
        _ => return Err(Error::Dimension("expected a full-space state".into())),
    };
    if v != part.v {
        return Err(Error::Dimension(format!(
            "state has V={v} modes, partition has V={}",
            part.v
        )));
    }
    let d_a = 1usize << part.v_a;
    let d_b = 1usize << part.v_b();
    let w = Array2::from_shape_fn((d_a, d_b), |(a, b)| state.amplitudes[(a << part.v_b()) | b]);
    RdmSpectrum::new(spectrum_of_block(&w), None)
}

/// RDM spectrum of a fixed-N sector state: one block per N_A, each reduced
/// independently; block weights are the squared norms per block.
pub fn rdm_spectrum_sector(state: &PureStateVector, part: &PartitionSpec) -> Result<RdmSpectrum> {
    let (v, n) = match state.space {
        StateSpace::Sector { modes, particles } => (modes, particles),
        _ => return Err(Error::Dimension("expected a sector state".into())),
    };
    if v != part.v {
        return Err(Error::Dimension(format!(
            "state has V={v} modes, partition has V={}",
            part.v
        )));
    }
    let basis = sector_basis(v, n);
    let vb = part.v_b();
    let mask_b: u64 = if vb == 0 { 0 } else { (1u64 << vb) - 1 };

    let mut eigenvalues = Vec::new();
    let mut labels = Vec::new();
    let n_a_min = n.saturating_sub(vb);
    let n_a_max = n.min(part.v_a);
    for n_a in n_a_min..=n_a_max {
        let d_a = binomial_u64(part.v_a, n_a) as usize;
        let d_b = binomial_u64(vb, n - n_a) as usize;
        let mut w = Array2::zeros((d_a, d_b));
        for (idx, &s) in basis.iter().enumerate() {
            let a_bits = s >> vb;
            if a_bits.count_ones() != n_a {
                continue;
            }
            let b_bits = s & mask_b;
            w[[sector_rank(a_bits), sector_rank(b_bits)]] = state.amplitudes[idx];
        }
        for ev in spectrum_of_block(&w) {
            eigenvalues.push(ev);
            labels.push(n_a);
        }
    }
    RdmSpectrum::new(eigenvalues, Some(labels))
}

/// Gaussian entanglement entropy from a restricted correlation matrix:
/// Σ_j s(2 y_j - 1) over the eigenvalues y_j of C_A.
pub fn gaussian_entropy_from_c(c_a: &Array2<C64>) -> Result<f64> {
    let v = c_a.nrows();
    if v != c_a.ncols() {
        return Err(Error::Dimension("C_A must be square".into()));
    }
    let mut herm: f64 = 0.0;
    for i in 0..v {
        for j in 0..=i {
            herm = herm.max((c_a[[i, j]] - c_a[[j, i]].conj()).norm());
        }
    }
    if herm > 1e-8 {
        return Err(Error::Numerical(format!("C_A asymmetry {herm:.2e} beyond 1e-8")));
    }
    let mut s = 0.0;
    for y in linalg::eigvalsh_c(c_a) {
        if !(-1e-9..=1.0 + 1e-9).contains(&y) {
            return Err(Error::Numerical(format!("C_A eigenvalue {y} outside [0, 1]")));
        }
        s += s_binary(2.0 * y.clamp(0.0, 1.0) - 1.0);
    }
    Ok(s)
}

/// Gaussian entanglement entropy from a restricted Majorana covariance:
/// the 2V_A eigenvalues of i J̃_A come in ±x pairs; the V_A nonnegative x_j
/// are kept and Σ_j s(x_j) is returned.
pub fn gaussian_entropy_from_j(j_a: &Array2<f64>) -> Result<f64> {
    let d = j_a.nrows();
    if d != j_a.ncols() || d % 2 != 0 {
        return Err(Error::Dimension("J_A must be square and even-dimensional".into()));
    }
    let mut asym: f64 = 0.0;
    for r in 0..d {
        for c in 0..=r {
            asym = asym.max((j_a[[r, c]] + j_a[[c, r]]).abs());
        }
    }
    if asym > 1e-8 {
        return Err(Error::Numerical(format!("J_A asymmetry {asym:.2e} beyond 1e-8")));
    }
    let h = Array2::from_shape_fn((d, d), |(r, c)| C64::new(0.0, j_a[[r, c]]));
    let mut ev = linalg::eigvalsh_c(&h);
    ev.sort_by(f64::total_cmp);
    // pairs are ±x; the top half are the nonnegative x_j
    let s = ev[d / 2..]
        .iter()
        .map(|&x| s_binary(x.clamp(0.0, 1.0)))
        .sum();
    Ok(s)
}

/// Full-space amplitude vector of the Slater determinant with the given
/// orthonormal orbitals (columns of a V x N matrix).
pub fn slater_state(orbitals: &Array2<C64>) -> Result<PureStateVector> {
    let (v, n) = orbitals.dim();
    if v > 20 {
        return Err(Error::Dimension(format!("V={v} too large to materialize 2^V amplitudes")));
    }
    let dim = 1usize << v;
    let mut amps = vec![C64::new(0.0, 0.0); dim];
    for bits in sector_basis(v as u32, n as u32) {
        // occupied mode indices in ascending mode order (mode 1 = MSB)
        let mut minor = Array2::zeros((n, n));
        let mut row = 0;
        for mode in 0..v {
            if (bits >> (v - 1 - mode)) & 1 == 1 {
                for k in 0..n {
                    minor[[row, k]] = orbitals[[mode, k]];
                }
                row += 1;
            }
        }
        amps[bits as usize] = det_small(&mut minor);
    }
    let norm2: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
    let scale = 1.0 / norm2.sqrt();
    for a in &mut amps {
        *a *= scale;
    }
    PureStateVector::new(amps, StateSpace::Full { modes: v as u32 })
}

// determinant by Gaussian elimination with partial pivoting (small n)
fn det_small(m: &mut Array2<C64>) -> C64 {
    let n = m.nrows();
    let mut det = C64::new(1.0, 0.0);
    for col in 0..n {
        let pivot = (col..n).max_by(|&a, &b| m[[a, col]].norm().total_cmp(&m[[b, col]].norm()));
        let p = pivot.unwrap();
        if m[[p, col]].norm() == 0.0 {
            return C64::new(0.0, 0.0);
        }
        if p != col {
            for k in 0..n {
                let tmp = m[[p, k]];
                m[[p, k]] = m[[col, k]];
                m[[col, k]] = tmp;
            }
            det = -det;
        }
        det *= m[[col, col]];
        for r in col + 1..n {
            let factor = m[[r, col]] / m[[col, col]];
            for k in col..n {
                let sub = factor * m[[col, k]];
                m[[r, k]] -= sub;
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use ndarray::array;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_state(v: u32, rng: &mut ChaCha8Rng) -> PureStateVector {
        let dim = 1usize << v;
        let mut amps: Vec<C64> = (0..dim)
            .map(|_| C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
            .collect();
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        amps.iter_mut().for_each(|a| *a /= norm);
        PureStateVector::new(amps, StateSpace::Full { modes: v }).unwrap()
    }

    fn random_sector_state(v: u32, n: u32, rng: &mut ChaCha8Rng) -> PureStateVector {
        let dim = binomial_u64(v, n) as usize;
        let mut amps: Vec<C64> = (0..dim)
            .map(|_| C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
            .collect();
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        amps.iter_mut().for_each(|a| *a /= norm);
        PureStateVector::new(amps, StateSpace::Sector { modes: v, particles: n }).unwrap()
    }

    #[test]
    fn s_binary_values() {
        assert_abs_diff_eq!(s_binary(0.0), std::f64::consts::LN_2, epsilon = 1e-15);
        assert_eq!(s_binary(1.0), 0.0);
        assert_eq!(s_binary(-1.0), 0.0);
        assert_abs_diff_eq!(s_binary(0.5), 0.5623351446188083, epsilon = 1e-15);
    }

    #[test]
    fn vn_and_renyi_values() {
        let half = RdmSpectrum::new(vec![0.5, 0.5], None).unwrap();
        let pure = RdmSpectrum::new(vec![1.0, 0.0], None).unwrap();
        let skew = RdmSpectrum::new(vec![0.9, 0.1], None).unwrap();
        assert_abs_diff_eq!(vn_entropy(&half), std::f64::consts::LN_2, epsilon = 1e-15);
        assert_eq!(vn_entropy(&pure), 0.0);
        assert_abs_diff_eq!(vn_entropy(&skew), 0.32508297339144825, epsilon = 1e-14);
        assert_abs_diff_eq!(
            renyi_entropy(&half, 2.0).unwrap(),
            std::f64::consts::LN_2,
            epsilon = 1e-15
        );
        assert_eq!(renyi_entropy(&pure, 3.0).unwrap(), 0.0);
        assert_abs_diff_eq!(
            renyi_entropy(&skew, 2.0).unwrap(),
            -0.82f64.ln(),
            epsilon = 1e-14
        );
        assert!(renyi_entropy(&half, 1.0).is_err());
    }

    #[test]
    fn renyi_converges_to_von_neumann() {
        let spec = RdmSpectrum::new(vec![0.62, 0.25, 0.13], None).unwrap();
        let s1 = vn_entropy(&spec);
        for order in [1.0 - 1e-4, 1.0 + 1e-4] {
            let s = renyi_entropy(&spec, order).unwrap();
            assert!((s - s1).abs() < 1e-3, "order {order}: {s} vs {s1}");
        }
    }

    #[test]
    fn bell_product_and_w_states() {
        let inv = 1.0 / 2.0_f64.sqrt();
        let bell = PureStateVector::new(
            vec![C64::new(inv, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(inv, 0.0)],
            StateSpace::Full { modes: 2 },
        )
        .unwrap();
        let part = PartitionSpec::new(2, 1).unwrap();
        let spec = rdm_spectrum_full(&bell, &part).unwrap();
        let mut ev = spec.eigenvalues.clone();
        ev.sort_by(f64::total_cmp);
        assert_abs_diff_eq!(ev[0], 0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(ev[1], 0.5, epsilon = 1e-14);

        let mut prod_amps = vec![C64::new(0.0, 0.0); 8];
        prod_amps[0] = C64::new(1.0, 0.0);
        let prod = PureStateVector::new(prod_amps, StateSpace::Full { modes: 3 }).unwrap();
        let spec = rdm_spectrum_full(&prod, &PartitionSpec::new(3, 1).unwrap()).unwrap();
        let mut ev = spec.eigenvalues.clone();
        ev.sort_by(f64::total_cmp);
        assert_eq!(ev, vec![0.0, 1.0]);

        // W state (|100> + |010> + |001>)/sqrt(3), V_A = 1: spectrum {2/3, 1/3}
        let w = 1.0 / 3.0_f64.sqrt();
        let mut amps = vec![C64::new(0.0, 0.0); 8];
        amps[0b100] = C64::new(w, 0.0);
        amps[0b010] = C64::new(w, 0.0);
        amps[0b001] = C64::new(w, 0.0);
        let wstate = PureStateVector::new(amps, StateSpace::Full { modes: 3 }).unwrap();
        let spec = rdm_spectrum_full(&wstate, &PartitionSpec::new(3, 1).unwrap()).unwrap();
        let mut ev = spec.eigenvalues.clone();
        ev.sort_by(f64::total_cmp);
        assert_abs_diff_eq!(ev[0], 1.0 / 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(ev[1], 2.0 / 3.0, epsilon = 1e-12);
    }

    #[test]
    fn pure_state_duality_and_bounds() {
        // S_A = S_B for the complement subsystem, checked by swapping the
        // A and B mode blocks of the amplitude index before reducing.
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for v in [4u32, 8, 12] {
            let state = random_state(v, &mut rng);
            for v_a in [1, v / 2, v - 1] {
                let v_b = v - v_a;
                let sa = vn_entropy(
                    &rdm_spectrum_full(&state, &PartitionSpec::new(v, v_a).unwrap()).unwrap(),
                );
                let mut swapped = vec![C64::new(0.0, 0.0); 1 << v];
                for s in 0..1usize << v {
                    let a = s >> v_b;
                    let b = s & ((1 << v_b) - 1);
                    swapped[(b << v_a) | a] = state.amplitudes[s];
                }
                let swapped =
                    PureStateVector::new(swapped, StateSpace::Full { modes: v }).unwrap();
                let sb = vn_entropy(
                    &rdm_spectrum_full(&swapped, &PartitionSpec::new(v, v_b).unwrap()).unwrap(),
                );
                assert!((sa - sb).abs() < 1e-9, "duality violated: {sa} vs {sb}");
                let bound = f64::from(v_a.min(v_b)) * std::f64::consts::LN_2;
                assert!(sa >= 0.0 && sa <= bound + 1e-9);
            }
        }
    }

    #[test]
    fn sector_two_mode_and_product() {
        // (|10> + |01>)/sqrt(2) at V_A = 1: blocks N_A ∈ {0, 1}, spectrum {1/2, 1/2}
        let inv = 1.0 / 2.0_f64.sqrt();
        let st = PureStateVector::new(
            vec![C64::new(inv, 0.0), C64::new(inv, 0.0)],
            StateSpace::Sector { modes: 2, particles: 1 },
        )
        .unwrap();
        let spec = rdm_spectrum_sector(&st, &PartitionSpec::new(2, 1).unwrap()).unwrap();
        assert_eq!(spec.eigenvalues.len(), 2);
        assert_abs_diff_eq!(spec.eigenvalues[0], 0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(spec.eigenvalues[1], 0.5, epsilon = 1e-14);
        let labels = spec.block_labels.as_ref().unwrap();
        assert_eq!(labels, &vec![0, 1]);

        // |1100> at V=4, N=2, V_A=2: single eigenvalue 1 in block N_A = 2
        let basis = sector_basis(4, 2);
        let target = basis.iter().position(|&b| b == 0b1100).unwrap();
        let mut amps = vec![C64::new(0.0, 0.0); basis.len()];
        amps[target] = C64::new(1.0, 0.0);
        let st = PureStateVector::new(amps, StateSpace::Sector { modes: 4, particles: 2 }).unwrap();
        let spec = rdm_spectrum_sector(&st, &PartitionSpec::new(4, 2).unwrap()).unwrap();
        let (pos, _) = spec
            .eigenvalues
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .unwrap();
        assert_abs_diff_eq!(spec.eigenvalues[pos], 1.0, epsilon = 1e-14);
        assert_eq!(spec.block_labels.as_ref().unwrap()[pos], 2);
    }

    #[test]
    fn sector_embedding_matches_full_space() {
        // randomized embedding oracle, 100 trials across V <= 8
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for trial in 0..100 {
            let v = 3 + (trial % 6) as u32; // 3..8
            let n = 1 + (trial as u32 % (v - 1));
            let v_a = 1 + (trial as u32 % v.min(v - 1));
            let st = random_sector_state(v, n, &mut rng);
            let basis = sector_basis(v, n);
            let mut full = vec![C64::new(0.0, 0.0); 1 << v];
            for (i, &b) in basis.iter().enumerate() {
                full[b as usize] = st.amplitudes[i];
            }
            let full_state =
                PureStateVector::new(full, StateSpace::Full { modes: v }).unwrap();
            let part = PartitionSpec::new(v, v_a).unwrap();
            let s_sector = vn_entropy(&rdm_spectrum_sector(&st, &part).unwrap());
            let s_full = vn_entropy(&rdm_spectrum_full(&full_state, &part).unwrap());
            assert!(
                (s_sector - s_full).abs() < 1e-10,
                "V={v} N={n} V_A={v_a}: {s_sector} vs {s_full}"
            );
        }
    }

    #[test]
    fn block_weights_sum_to_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let st = random_sector_state(6, 3, &mut rng);
        let spec = rdm_spectrum_sector(&st, &PartitionSpec::new(6, 3).unwrap()).unwrap();
        let total: f64 = (0..=3).map(|na| spec.block_weight(na)).sum();
        assert_abs_diff_eq!(total, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn gaussian_entropy_from_c_examples() {
        let c = array![[C64::new(1.0, 0.0), C64::new(0.0, 0.0)], [C64::new(0.0, 0.0), C64::new(0.0, 0.0)]];
        assert_abs_diff_eq!(gaussian_entropy_from_c(&c).unwrap(), 0.0, epsilon = 1e-12);

        let half = Array2::from_shape_fn((3, 3), |(i, j)| {
            if i == j { C64::new(0.5, 0.0) } else { C64::new(0.0, 0.0) }
        });
        assert_abs_diff_eq!(
            gaussian_entropy_from_c(&half).unwrap(),
            3.0 * std::f64::consts::LN_2,
            epsilon = 1e-12
        );

        // [[.5,.5],[.5,.5]] has eigenvalues {1, 0}: a pure mode pair
        let c = array![[C64::new(0.5, 0.0), C64::new(0.5, 0.0)], [C64::new(0.5, 0.0), C64::new(0.5, 0.0)]];
        assert_abs_diff_eq!(gaussian_entropy_from_c(&c).unwrap(), 0.0, epsilon = 1e-12);

        let bad = array![[C64::new(0.5, 0.0), C64::new(0.5, 0.0)], [C64::new(0.1, 0.0), C64::new(0.5, 0.0)]];
        assert!(gaussian_entropy_from_c(&bad).is_err());
    }

    #[test]
    fn gaussian_entropy_from_j_examples() {
        let zero = Array2::<f64>::zeros((4, 4));
        assert_abs_diff_eq!(
            gaussian_entropy_from_j(&zero).unwrap(),
            2.0 * std::f64::consts::LN_2,
            epsilon = 1e-12
        );
        // canonical block: all x_j = 1 -> pure, entropy 0
        let mut j0 = Array2::<f64>::zeros((4, 4));
        for m in 0..2 {
            j0[[2 * m, 2 * m + 1]] = 1.0;
            j0[[2 * m + 1, 2 * m]] = -1.0;
        }
        assert_abs_diff_eq!(gaussian_entropy_from_j(&j0).unwrap(), 0.0, epsilon = 1e-12);
        let mut bad = zero.clone();
        bad[[0, 1]] = 0.3; // not antisymmetric
        assert!(gaussian_entropy_from_j(&bad).is_err());
    }

    #[test]
    fn correlation_and_majorana_representations_agree() {
        // random fixed-N Gaussian states: entropy from J̃_A equals entropy from C_A
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        for _ in 0..20 {
            let v = 6usize;
            let n = 3usize;
            // random orthonormal N columns by Gram-Schmidt on a Ginibre block
            let mut g = Array2::from_shape_fn((v, n), |_| {
                C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
            });
            for col in 0..n {
                for prev in 0..col {
                    let mut ip = C64::new(0.0, 0.0);
                    for r in 0..v {
                        ip += g[[r, prev]].conj() * g[[r, col]];
                    }
                    for r in 0..v {
                        let sub = ip * g[[r, prev]];
                        g[[r, col]] -= sub;
                    }
                }
                let nrm: f64 = (0..v).map(|r| g[[r, col]].norm_sqr()).sum::<f64>().sqrt();
                for r in 0..v {
                    g[[r, col]] /= nrm;
                }
            }
            let c = Array2::from_shape_fn((v, v), |(i, j)| {
                (0..n).map(|k| g[[i, k]] * g[[j, k]].conj()).sum()
            });
            let jt = majorana_from_correlation(&c);
            GaussianStateRep::ComplexStructure(jt.clone()).validate().unwrap();
            for v_a in 1..=3u32 {
                let s_c = gaussian_entropy_from_c(&restrict_correlation(&c, v_a)).unwrap();
                let s_j = gaussian_entropy_from_j(&restrict_majorana(&jt, v_a)).unwrap();
                assert!((s_c - s_j).abs() < 1e-10, "V_A={v_a}: {s_c} vs {s_j}");
            }
        }
    }

    #[test]
    fn slater_state_matches_correlation_entropy() {
        // Gaussian exactness: the strongest cross-representation oracle
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..10 {
            let v = 6usize;
            let n = 3usize;
            let mut g = Array2::from_shape_fn((v, n), |_| {
                C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
            });
            for col in 0..n {
                for prev in 0..col {
                    let mut ip = C64::new(0.0, 0.0);
                    for r in 0..v {
                        ip += g[[r, prev]].conj() * g[[r, col]];
                    }
                    for r in 0..v {
                        let sub = ip * g[[r, prev]];
                        g[[r, col]] -= sub;
                    }
                }
                let nrm: f64 = (0..v).map(|r| g[[r, col]].norm_sqr()).sum::<f64>().sqrt();
                for r in 0..v {
                    g[[r, col]] /= nrm;
                }
            }
            let state = slater_state(&g).unwrap();
            let c = Array2::from_shape_fn((v, v), |(i, j)| {
                (0..n).map(|k| g[[i, k]] * g[[j, k]].conj()).sum()
            });
            for v_a in 1..v as u32 {
                let part = PartitionSpec::new(v as u32, v_a).unwrap();
                let s_full = vn_entropy(&rdm_spectrum_full(&state, &part).unwrap());
                let s_gauss = gaussian_entropy_from_c(&restrict_correlation(&c, v_a)).unwrap();
                assert!(
                    (s_full - s_gauss).abs() < 1e-9,
                    "V_A={v_a}: full {s_full} vs Gaussian {s_gauss}"
                );
            }
        }
    }

    #[test]
    fn sector_rank_roundtrip() {
        for (i, b) in sector_basis(8, 3).iter().enumerate() {
            assert_eq!(sector_rank(*b), i);
        }
    }
}
