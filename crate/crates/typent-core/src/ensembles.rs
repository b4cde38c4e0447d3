//! Random samplers for the six state ensembles and a reproducible parallel
//! Monte Carlo harness.
//!
//! Reproducibility contract: every sampler draws from an explicit rng
//! handle, and `mc_estimate` splits the work into fixed-size chunks, chunk c
//! seeded by (master_seed, stream_id = c). Chunk accumulators are merged in
//! ascending chunk order, so the result is bit-identical for any worker
//! count.

use crate::entropy::{binomial_u64, GaussianStateRep, PureStateVector, StateSpace};
use crate::linalg;
use ndarray::Array2;
use num_complex::Complex64 as C64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

/// Counter-based stream: identical (master_seed, stream_id) pairs give
/// identical draws, distinct stream ids independent streams.
pub fn stream_rng(master_seed: u64, stream_id: u64) -> ChaCha8Rng {
    // spread both keys over the 32-byte ChaCha seed with splitmix64
    let mut seed = [0u8; 32];
    let mut x = master_seed ^ 0x9e37_79b9_7f4a_7c15;
    for chunk in 0..4 {
        x = splitmix(x.wrapping_add(stream_id.wrapping_mul(0xbf58_476d_1ce4_e5b9)));
        seed[chunk * 8..(chunk + 1) * 8].copy_from_slice(&x.to_le_bytes());
    }
    ChaCha8Rng::from_seed(seed)
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Monte Carlo estimate of a scalar statistic.
#[derive(Debug, Clone, Serialize)]
pub struct EntropyEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub sample_variance: f64,
    pub n_samples: u64,
    pub master_seed: u64,
}

#[derive(Clone, Copy, Default)]
struct Welford {
    count: u64,
    mean: f64,
    m2: f64,
}

impl Welford {
    fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    fn merge(self, other: Welford) -> Welford {
        if other.count == 0 {
            return self;
        }
        if self.count == 0 {
            return other;
        }
        let count = self.count + other.count;
        let delta = other.mean - self.mean;
        Welford {
            count,
            mean: self.mean + delta * other.count as f64 / count as f64,
            m2: self.m2
                + other.m2
                + delta * delta * self.count as f64 * other.count as f64 / count as f64,
        }
    }
}

const CHUNK: u64 = 64;

/// Welford-accumulated mean/variance of `statistic(sample(rng))` over
/// `n_samples` draws. Bit-identical output for any `n_workers` (0 = rayon
/// default pool).
pub fn mc_estimate<T, S, F>(
    sampler: S,
    statistic: F,
    n_samples: u64,
    master_seed: u64,
    n_workers: usize,
) -> EntropyEstimate
where
    S: Fn(&mut ChaCha8Rng) -> T + Sync,
    F: Fn(&T) -> f64 + Sync,
{
    assert!(n_samples >= 2, "need at least two samples");
    let n_chunks = n_samples.div_ceil(CHUNK);
    let run = || {
        (0..n_chunks)
            .into_par_iter()
            .map(|c| {
                let mut rng = stream_rng(master_seed, c);
                let lo = c * CHUNK;
                let hi = (lo + CHUNK).min(n_samples);
                let mut acc = Welford::default();
                for _ in lo..hi {
                    acc.push(statistic(&sampler(&mut rng)));
                }
                acc
            })
            .collect::<Vec<_>>()
    };
    let chunks = if n_workers == 0 {
        run()
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n_workers)
            .build()
            .expect("thread pool")
            .install(run)
    };
    // reduce in ascending chunk order
    let total = chunks.into_iter().fold(Welford::default(), Welford::merge);
    let sample_variance = total.m2 / (total.count - 1) as f64;
    EntropyEstimate {
        mean: total.mean,
        stderr: (sample_variance / total.count as f64).sqrt(),
        sample_variance,
        n_samples: total.count,
        master_seed,
    }
}

// column-major complex Ginibre buffer
fn ginibre_c(m: usize, n: usize, rng: &mut impl Rng) -> Vec<C64> {
    (0..m * n)
        .map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect()
}

/// Haar-distributed d x d unitary: QR of a complex Ginibre matrix with the
/// R-diagonal phases absorbed into Q.
pub fn haar_unitary(d: usize, rng: &mut impl Rng) -> Array2<C64> {
    assert!(d >= 1);
    let mut buf = ginibre_c(d, d, rng);
    let rdiag = linalg::qr_q_complex(d, d, &mut buf);
    let phases: Vec<C64> = rdiag.iter().map(|r| r / r.norm()).collect();
    Array2::from_shape_fn((d, d), |(i, j)| buf[j * d + i] * phases[j])
}

/// Haar-distributed d x d (real) orthogonal matrix.
pub fn haar_orthogonal(d: usize, rng: &mut impl Rng) -> Array2<f64> {
    assert!(d >= 1);
    let mut buf: Vec<f64> = (0..d * d).map(|_| rng.sample(StandardNormal)).collect();
    let rdiag = linalg::qr_q_real(d, d, &mut buf);
    let signs: Vec<f64> = rdiag.iter().map(|r| r.signum()).collect();
    Array2::from_shape_fn((d, d), |(i, j)| buf[j * d + i] * signs[j])
}

fn normalized_state(mut amps: Vec<C64>) -> Vec<C64> {
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    amps.iter_mut().for_each(|a| *a /= norm);
    amps
}

/// Haar-random state on the full 2^V sphere (the fixed-trace ensemble).
pub fn sample_haar_state(v: u32, rng: &mut impl Rng) -> PureStateVector {
    assert!(v <= 26, "2^V amplitudes would not fit memory");
    let dim = 1usize << v;
    let amps = normalized_state(
        (0..dim)
            .map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect(),
    );
    PureStateVector::new(amps, StateSpace::Full { modes: v }).expect("normalized by construction")
}

/// Haar-random state in the fixed-N sector.
pub fn sample_sector_state(v: u32, n: u32, rng: &mut impl Rng) -> PureStateVector {
    let dim = binomial_u64(v, n);
    assert!(dim <= 1 << 26, "sector dimension too large");
    let amps = normalized_state(
        (0..dim)
            .map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect(),
    );
    PureStateVector::new(amps, StateSpace::Sector { modes: v, particles: n })
        .expect("normalized by construction")
}

/// Haar-random pure fermionic Gaussian state (arbitrary N): J̃ = Mᵀ J₀ M with
/// M Haar-orthogonal in O(2V) and J₀ the interleaved per-mode symplectic unit.
pub fn sample_gaussian_state(v: u32, rng: &mut impl Rng) -> GaussianStateRep {
    let d = 2 * v as usize;
    let mut m = vec![0.0f64; d * d];
    for x in m.iter_mut() {
        *x = rng.sample(StandardNormal);
    }
    let rdiag = linalg::qr_q_real(d, d, &mut m);
    for (j, r) in rdiag.iter().enumerate() {
        let s = r.signum();
        for i in 0..d {
            m[j * d + i] *= s;
        }
    }
    // B = J₀ M in the same column-major layout: row 2k of B is row 2k+1 of M,
    // row 2k+1 of B is -row 2k of M.
    let mut b = vec![0.0f64; d * d];
    for col in 0..d {
        for k in 0..v as usize {
            b[col * d + 2 * k] = m[col * d + 2 * k + 1];
            b[col * d + 2 * k + 1] = -m[col * d + 2 * k];
        }
    }
    let mut j = vec![0.0f64; d * d];
    linalg::at_b_colmajor(d, d, d, &m, &b, &mut j);
    // antisymmetrize away the last bits of roundoff
    let jt = Array2::from_shape_fn((d, d), |(r, c)| 0.5 * (j[c * d + r] - j[r * d + c]));
    GaussianStateRep::ComplexStructure(jt)
}

/// Haar-random pure fermionic Gaussian state with N particles: C = Q Q† with
/// Q the first N columns of a Haar unitary.
pub fn sample_gaussian_fixed_n(v: u32, n: u32, rng: &mut impl Rng) -> GaussianStateRep {
    assert!(n <= v);
    let (vd, nd) = (v as usize, n as usize);
    if n == 0 {
        return GaussianStateRep::CorrelationMatrix(Array2::zeros((vd, vd)));
    }
    let mut q = ginibre_c(vd, nd, rng);
    let rdiag = linalg::qr_q_complex(vd, nd, &mut q);
    let phases: Vec<C64> = rdiag.iter().map(|r| r / r.norm()).collect();
    for (j, p) in phases.iter().enumerate() {
        for i in 0..vd {
            q[j * vd + i] *= p;
        }
    }
    let c = Array2::from_shape_fn((vd, vd), |(i, j)| {
        (0..nd).map(|k| q[k * vd + i] * q[k * vd + j].conj()).sum()
    });
    GaussianStateRep::CorrelationMatrix(c)
}
