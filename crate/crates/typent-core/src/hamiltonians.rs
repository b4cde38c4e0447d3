//! Desk-scale physical and random Hamiltonians, with pipelines from
//! eigenstates to entanglement entropies.

use crate::ensembles::{stream_rng, EntropyEstimate};
use crate::entropy::{
    gaussian_entropy_from_c, rdm_spectrum_full, rdm_spectrum_sector, sector_basis, vn_entropy,
    PartitionSpec, PureStateVector, StateSpace,
};
use crate::linalg;
use crate::spectral::gue_matrix;
use crate::{Error, Result};
use ndarray::Array2;
use num_complex::Complex64 as C64;
use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use std::sync::OnceLock;

/// Which single-particle model a quadratic Hamiltonian came from.
#[derive(Debug, Clone, PartialEq)]
pub enum QuadraticKind {
    /// Nearest-neighbor hopping ring; orbitals fixed to momentum plane waves.
    FreeFermion1d,
    /// Cubic-lattice hopping plus seeded box disorder of strength W.
    Anderson3d { l: u32, disorder: f64, seed: u64 },
    /// V x V GUE single-particle matrix (number-conserving SYK2).
    Syk2Dirac { seed: u64 },
}

/// A particle-number-conserving quadratic Hamiltonian h (V x V Hermitian),
/// with its orbital decomposition cached after the first use.
pub struct QuadraticModel {
    pub h: Array2<C64>,
    pub label: QuadraticKind,
    orbitals: OnceLock<(Vec<f64>, Array2<C64>)>,
}

impl QuadraticModel {
    pub fn modes(&self) -> usize {
        self.h.nrows()
    }

    /// Single-particle eigenvalues and orbital columns. The translationally
    /// invariant ring bypasses the dense solver: its spectrum is degenerate
    /// (ε_n = ε_{V-n}) and the 2^V eigenstate enumeration is only defined
    /// once a basis convention is fixed, which here is the plane waves.
    pub fn orbitals(&self) -> &(Vec<f64>, Array2<C64>) {
        self.orbitals.get_or_init(|| match self.label {
            QuadraticKind::FreeFermion1d => {
                let v = self.modes();
                let vf = v as f64;
                let energies: Vec<f64> =
                    (0..v).map(|n| -2.0 * (2.0 * std::f64::consts::PI * n as f64 / vf).cos()).collect();
                let phase = 2.0 * std::f64::consts::PI / vf;
                let vectors = Array2::from_shape_fn((v, v), |(j, n)| {
                    C64::from_polar(1.0 / vf.sqrt(), phase * (n as f64) * (j as f64))
                });
                (energies, vectors)
            }
            _ => {
                let (vals, vecs) = linalg::eigh_c(&self.h);
                (vals, vecs)
            }
        })
    }

    /// Restricted correlation matrix C_A of the Slater determinant with the
    /// given occupied orbital indices.
    pub fn correlation_restricted(&self, occupied: &[usize], v_a: u32) -> Array2<C64> {
        let (_, vecs) = self.orbitals();
        let ka = v_a as usize;
        let mut c: Array2<C64> = Array2::zeros((ka, ka));
        for &k in occupied {
            for i in 0..ka {
                for j in 0..=i {
                    let add = vecs[[i, k]] * vecs[[j, k]].conj();
                    c[[i, j]] += add;
                }
            }
        }
        for i in 0..ka {
            for j in i + 1..ka {
                c[[i, j]] = c[[j, i]].conj();
            }
        }
        c
    }
}

#[cfg(test)]
fn hermiticity_residual(h: &Array2<C64>) -> f64 {
    let n = h.nrows();
    let mut r: f64 = 0.0;
    for i in 0..n {
        for j in 0..=i {
            r = r.max((h[[i, j]] - h[[j, i]].conj()).norm());
        }
    }
    r
}

/// Periodic nearest-neighbor hopping ring of V sites.
pub fn build_free_fermion_1d(v: u32) -> QuadraticModel {
    assert!(v >= 2);
    let vd = v as usize;
    let mut h = Array2::zeros((vd, vd));
    for i in 0..vd {
        let j = (i + 1) % vd;
        h[[i, j]] = C64::new(-1.0, 0.0);
        h[[j, i]] = C64::new(-1.0, 0.0);
    }
    QuadraticModel { h, label: QuadraticKind::FreeFermion1d, orbitals: OnceLock::new() }
}

/// 3D Anderson model on an L³ cube: hopping t = 1 with periodic boundaries,
/// diagonal disorder (W/2) ε_i with ε_i iid uniform on [-1, 1].
///
/// Site ordering is z-major (index = x + L y + L² z), so "the first V_A
/// sites" are z-slabs.
pub fn build_anderson_3d(l: u32, disorder: f64, seed: u64) -> QuadraticModel {
    assert!(l >= 2);
    let ld = l as usize;
    let v = ld * ld * ld;
    let idx = |x: usize, y: usize, z: usize| x + ld * (y + ld * z);
    let mut h = Array2::zeros((v, v));
    let mut rng = stream_rng(seed, 0);
    for z in 0..ld {
        for y in 0..ld {
            for x in 0..ld {
                let i = idx(x, y, z);
                h[[i, i]] = C64::new(disorder / 2.0 * (2.0 * rng.random::<f64>() - 1.0), 0.0);
                for (nx, ny, nz) in
                    [((x + 1) % ld, y, z), (x, (y + 1) % ld, z), (x, y, (z + 1) % ld)]
                {
                    let j = idx(nx, ny, nz);
                    h[[i, j]] += C64::new(-1.0, 0.0);
                    h[[j, i]] += C64::new(-1.0, 0.0);
                }
            }
        }
    }
    QuadraticModel {
        h,
        label: QuadraticKind::Anderson3d { l, disorder, seed },
        orbitals: OnceLock::new(),
    }
}

/// Number-conserving SYK2 model: a V x V GUE single-particle matrix.
pub fn build_syk2_dirac(v: u32, seed: u64) -> QuadraticModel {
    assert!(v >= 2);
    let mut rng = stream_rng(seed, 0);
    QuadraticModel {
        h: gue_matrix(v as usize, &mut rng),
        label: QuadraticKind::Syk2Dirac { seed },
        orbitals: OnceLock::new(),
    }
}

/// Entanglement entropy of the quadratic-model eigenstate with the given
/// occupied orbitals, over the first V_A sites.
pub fn quadratic_eigenstate_entropy(
    model: &QuadraticModel,
    occupied: &[usize],
    v_a: u32,
) -> Result<f64> {
    if occupied.iter().any(|&k| k >= model.modes()) {
        return Err(Error::Dimension("occupied orbital index out of range".into()));
    }
    gaussian_entropy_from_c(&model.correlation_restricted(occupied, v_a))
}

/// Which family of eigenstates to average over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EigenstateSampling {
    /// All 2^V occupation subsets (V <= 24).
    AllStates,
    /// `n` uniformly random subsets (each orbital occupied with probability
    /// 1/2; the w = 0 weighting over particle sectors).
    Sampled { n: u64, seed: u64 },
    /// `n` uniformly random N-particle subsets.
    FixedNSampled { n_particles: u32, n: u64, seed: u64 },
}

/// Averages the eigenstate entanglement entropy of a quadratic model over
/// the requested family.
pub fn quadratic_eigenstate_average(
    model: &QuadraticModel,
    v_a: u32,
    mode: EigenstateSampling,
) -> Result<EntropyEstimate> {
    let v = model.modes();
    model.orbitals(); // diagonalize once, outside the parallel region
    let entropies: Vec<f64> = match mode {
        EigenstateSampling::AllStates => {
            if v > 24 {
                return Err(Error::Dimension(format!("all-states average at V={v}")));
            }
            (0u64..1 << v)
                .into_par_iter()
                .map(|mask| {
                    let occupied: Vec<usize> =
                        (0..v).filter(|k| (mask >> k) & 1 == 1).collect();
                    quadratic_eigenstate_entropy(model, &occupied, v_a)
                })
                .collect::<Result<_>>()?
        }
        EigenstateSampling::Sampled { n, seed } => (0..n)
            .into_par_iter()
            .map(|i| {
                let mut rng = stream_rng(seed, i);
                let occupied: Vec<usize> = (0..v).filter(|_| rng.random::<bool>()).collect();
                quadratic_eigenstate_entropy(model, &occupied, v_a)
            })
            .collect::<Result<_>>()?,
        EigenstateSampling::FixedNSampled { n_particles, n, seed } => {
            if n_particles as usize > v {
                return Err(Error::Dimension("more particles than orbitals".into()));
            }
            (0..n)
                .into_par_iter()
                .map(|i| {
                    let mut rng = stream_rng(seed, i);
                    let mut all: Vec<usize> = (0..v).collect();
                    let (occ, _) = all.partial_shuffle(&mut rng, n_particles as usize);
                    quadratic_eigenstate_entropy(model, occ, v_a)
                })
                .collect::<Result<_>>()?
        }
    };
    let seed = match mode {
        EigenstateSampling::AllStates => 0,
        EigenstateSampling::Sampled { seed, .. }
        | EigenstateSampling::FixedNSampled { seed, .. } => seed,
    };
    Ok(estimate_from_samples(&entropies, seed))
}

fn estimate_from_samples(samples: &[f64], master_seed: u64) -> EntropyEstimate {
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let sample_variance =
        samples.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    EntropyEstimate {
        mean,
        stderr: (sample_variance / n).sqrt(),
        sample_variance,
        n_samples: samples.len() as u64,
        master_seed,
    }
}

/// A dense many-body Hamiltonian with an exact particle-number block
/// structure (or the full Fock space for the unconstrained GUE).
pub enum ManyBodyModel {
    /// Hard-core bosons with hoppings t1, t2 and interactions V1, V2 on a
    /// periodic chain, restricted to the N-particle sector.
    HcbChain { v: u32, n: u32, h: Array2<f64> },
    /// GUE draw acting within one particle-number sector.
    BlockGue { v: u32, n: u32, h: Array2<C64> },
    /// GUE draw on the full 2^V space.
    FullGue { v: u32, h: Array2<C64> },
}

/// Builds the hard-core boson chain in the occupation basis of the fixed-N
/// sector: hopping moves a boson by one or two sites (no fermionic signs),
/// interactions are diagonal, both ranges wrap periodically.
pub fn build_hcb_chain(v: u32, n: u32, t1: f64, t2: f64, v1: f64, v2: f64) -> Result<ManyBodyModel> {
    if n > v || v > 24 {
        return Err(Error::Dimension(format!("HCB sector (V={v}, N={n})")));
    }
    let basis = sector_basis(v, n);
    let dim = basis.len();
    if dim > 20_000 {
        return Err(Error::Dimension(format!("HCB sector dimension {dim} too large")));
    }
    let site_bit = |l: u32| 1u64 << (v - 1 - (l % v));
    let mut h = Array2::zeros((dim, dim));
    for (col, &s) in basis.iter().enumerate() {
        let occ = |l: u32| s & site_bit(l) != 0;
        let mut diag = 0.0;
        for l in 0..v {
            if occ(l) && occ(l + 1) {
                diag += v1;
            }
            if occ(l) && occ(l + 2) {
                diag += v2;
            }
        }
        h[[col, col]] = diag;
        for l in 0..v {
            for (range, t) in [(1u32, t1), (2u32, t2)] {
                if t == 0.0 {
                    continue;
                }
                let (a, b) = (site_bit(l), site_bit(l + range));
                if a == b {
                    continue;
                }
                if s & a != 0 && s & b == 0 {
                    let target = (s & !a) | b;
                    let row = crate::entropy::sector_rank(target);
                    h[[row, col]] += -t;
                    h[[col, row]] += -t;
                }
            }
        }
    }
    Ok(ManyBodyModel::HcbChain { v, n, h })
}

/// GUE draw within the N-particle sector of V modes.
pub fn build_block_gue(v: u32, n: u32, rng: &mut impl Rng) -> ManyBodyModel {
    let dim = sector_basis(v, n).len();
    ManyBodyModel::BlockGue { v, n, h: gue_matrix(dim, rng) }
}

/// GUE draw on the full 2^V Fock space (V <= 10).
pub fn build_full_gue(v: u32, rng: &mut impl Rng) -> ManyBodyModel {
    assert!(v <= 10, "full-space GUE limited to V <= 10");
    ManyBodyModel::FullGue { v, h: gue_matrix(1 << v, rng) }
}

/// Diagonalizes the model, selects the central `central_fraction` of
/// eigenstates by energy index, and averages their entanglement entropies
/// over the first V_A modes.
pub fn interacting_eigenstate_average(
    model: &ManyBodyModel,
    v_a: u32,
    central_fraction: f64,
) -> Result<EntropyEstimate> {
    assert!(central_fraction > 0.0 && central_fraction <= 1.0);
    let entropy_of = |amps: Vec<C64>, v: u32, sector: Option<u32>| -> Result<f64> {
        let part = PartitionSpec::new(v, v_a)?;
        match sector {
            Some(n) => {
                let state = PureStateVector::new(amps, StateSpace::Sector { modes: v, particles: n })?;
                Ok(vn_entropy(&rdm_spectrum_sector(&state, &part)?))
            }
            None => {
                let state = PureStateVector::new(amps, StateSpace::Full { modes: v })?;
                Ok(vn_entropy(&rdm_spectrum_full(&state, &part)?))
            }
        }
    };
    let (dim, v, sector) = match model {
        ManyBodyModel::HcbChain { v, n, h } => (h.nrows(), *v, Some(*n)),
        ManyBodyModel::BlockGue { v, n, h } => (h.nrows(), *v, Some(*n)),
        ManyBodyModel::FullGue { v, h } => (h.nrows(), *v, None),
    };
    let count = ((dim as f64 * central_fraction).round() as usize).clamp(1, dim);
    let start = (dim - count) / 2;

    let columns: Vec<Vec<C64>> = match model {
        ManyBodyModel::HcbChain { h, .. } => {
            let (_, vecs) = linalg::eigh(h);
            (start..start + count)
                .map(|k| (0..dim).map(|i| C64::new(vecs[[i, k]], 0.0)).collect())
                .collect()
        }
        ManyBodyModel::BlockGue { h, .. } | ManyBodyModel::FullGue { h, .. } => {
            let (_, vecs) = linalg::eigh_c(h);
            (start..start + count)
                .map(|k| (0..dim).map(|i| vecs[[i, k]]).collect())
                .collect()
        }
    };
    let entropies: Vec<f64> = columns
        .into_par_iter()
        .map(|amps| entropy_of(amps, v, sector))
        .collect::<Result<_>>()?;
    Ok(estimate_from_samples(&entropies, 0))
}
