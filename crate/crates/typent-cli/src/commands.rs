//! Subcommand implementations. All numeric output is written in full double
//! precision so reruns diff byte-identically.

use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};
use serde::Serialize;
use std::fmt::Write as _;
use std::path::PathBuf;
use typent_core::asymptotics as asym;
use typent_core::closedform as cf;
use typent_core::ensembles as ens;
use typent_core::entropy::{
    rdm_spectrum_full, rdm_spectrum_sector, vn_entropy, PartitionSpec,
};
use typent_core::hamiltonians as ham;
use typent_core::spectral;
use typent_core::validate::{self, Suite};

fn write_output(out: &Option<PathBuf>, content: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, content)
            .with_context(|| format!("writing {}", path.display()))?,
        None => print!("{content}"),
    }
    Ok(())
}

fn fmt(x: f64) -> String {
    format!("{x:.17e}")
}

// ---------------------------------------------------------------------------
// exact
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Ensemble {
    Page,
    FixedN,
    Weighted,
    Gaussian,
    GaussianFixedN,
    GaussianWeighted,
    BosonicFixedN,
}

impl Ensemble {
    fn name(self) -> &'static str {
        match self {
            Ensemble::Page => "page",
            Ensemble::FixedN => "fixed-n",
            Ensemble::Weighted => "weighted",
            Ensemble::Gaussian => "gaussian",
            Ensemble::GaussianFixedN => "gaussian-fixed-n",
            Ensemble::GaussianWeighted => "gaussian-weighted",
            Ensemble::BosonicFixedN => "bosonic-fixed-n",
        }
    }
}

#[derive(Args)]
pub struct ExactArgs {
    #[arg(long, value_enum)]
    ensemble: Ensemble,
    /// Subsystem dimension d_A (page ensemble only)
    #[arg(long = "dA")]
    d_a: Option<u64>,
    /// Environment dimension d_B (page ensemble only)
    #[arg(long = "dB")]
    d_b: Option<u64>,
    #[arg(long = "V")]
    v: Option<u32>,
    #[arg(long = "VA")]
    v_a: Option<u32>,
    #[arg(long = "N")]
    n: Option<u32>,
    #[arg(long)]
    w: Option<f64>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Serialize)]
struct ExactRow {
    ensemble: &'static str,
    v: Option<u64>,
    v_a: Option<u64>,
    n_or_w: Option<f64>,
    mean: f64,
    variance: f64,
}

pub fn run_exact(args: ExactArgs) -> Result<i32> {
    let row = match args.ensemble {
        Ensemble::Page => {
            let (d_a, d_b) = match (args.d_a, args.d_b) {
                (Some(a), Some(b)) if a >= 1 && b >= 1 => (a, b),
                _ => bail!("page ensemble needs --dA and --dB (both >= 1)"),
            };
            ExactRow {
                ensemble: "page",
                v: Some(d_a),
                v_a: Some(d_b),
                n_or_w: None,
                mean: cf::page_average(d_a, d_b),
                variance: cf::page_variance(d_a, d_b),
            }
        }
        other => {
            let v = args.v.context("--V is required")?;
            let v_a = args.v_a.context("--VA is required")?;
            let (mean, variance, n_or_w) = match other {
                Ensemble::FixedN => {
                    let s = cf::FixedNSpec::new(v, v_a, args.n.context("--N is required")?)?;
                    (cf::fixed_n_average(&s), cf::fixed_n_variance(&s), Some(f64::from(s.n)))
                }
                Ensemble::Weighted | Ensemble::GaussianWeighted => {
                    let gaussian = other == Ensemble::GaussianWeighted;
                    let s = cf::WeightedSpec::new(v, v_a, args.w.context("--w is required")?)?;
                    (
                        cf::weighted_average(&s, gaussian),
                        cf::weighted_variance(&s, gaussian),
                        Some(s.w),
                    )
                }
                Ensemble::Gaussian => {
                    let part = PartitionSpec::new(v, v_a)?;
                    (
                        cf::gaussian_average(&part),
                        cf::gaussian_variance(&part, cf::GaussianVarianceMode::ExactSum),
                        None,
                    )
                }
                Ensemble::GaussianFixedN => {
                    let s = cf::FixedNSpec::new(v, v_a, args.n.context("--N is required")?)?;
                    let variance = if s.n == 0 || s.n == v || v_a == 0 || v_a == v {
                        0.0
                    } else {
                        cf::gaussian_fixed_n_variance_asymptotic(s.part.f(), s.filling())?
                    };
                    (cf::gaussian_fixed_n_average(&s), variance, Some(f64::from(s.n)))
                }
                Ensemble::BosonicFixedN => {
                    let n = args.n.context("--N is required")?;
                    (asym::bosonic_fixed_n_exact(v, v_a, n), f64::NAN, Some(f64::from(n)))
                }
                Ensemble::Page => unreachable!(),
            };
            ExactRow {
                ensemble: other.name(),
                v: Some(u64::from(v)),
                v_a: Some(u64::from(v_a)),
                n_or_w,
                mean,
                variance,
            }
        }
    };
    let content = match args.format {
        Format::Json => format!("{}\n", serde_json::to_string_pretty(&row)?),
        Format::Csv => {
            let mut s = String::from("ensemble,V,VA,N_or_w,mean,variance\n");
            let _ = writeln!(
                s,
                "{},{},{},{},{},{}",
                row.ensemble,
                row.v.map_or(String::new(), |x| x.to_string()),
                row.v_a.map_or(String::new(), |x| x.to_string()),
                row.n_or_w.map_or(String::new(), fmt),
                fmt(row.mean),
                fmt(row.variance)
            );
            s
        }
    };
    write_output(&args.out, &content)?;
    Ok(0)
}

// ---------------------------------------------------------------------------
// curve
// ---------------------------------------------------------------------------

#[derive(Args)]
pub struct CurveArgs {
    #[arg(long, value_enum)]
    ensemble: Ensemble,
    #[arg(long = "V")]
    v: u32,
    #[arg(long = "N")]
    n: Option<u32>,
    #[arg(long)]
    w: Option<f64>,
    /// Number of grid points (default: every integer V_A from 1 to V-1)
    #[arg(long)]
    points: Option<u32>,
    #[arg(long)]
    out: Option<PathBuf>,
}

pub fn run_curve(args: CurveArgs) -> Result<i32> {
    let v = args.v;
    if v < 2 {
        bail!("need V >= 2 for a curve");
    }
    let grid: Vec<u32> = match args.points {
        None => (1..v).collect(),
        Some(p) => {
            if p < 1 || p > v - 1 {
                bail!("--points must be in [1, V-1]");
            }
            (1..=p).map(|i| (u64::from(i) * u64::from(v) / (u64::from(p) + 1)).max(1) as u32).collect()
        }
    };
    let mut rows = String::from("f,value,asymptotic_value\n");
    for &v_a in &grid {
        let f = f64::from(v_a) / f64::from(v);
        let (value, thermo) = match args.ensemble {
            Ensemble::Page => (
                cf::page_average(1u64 << v_a.min(62), 1u64 << (v - v_a).min(62)),
                asym::page_thermo(v, f).0,
            ),
            Ensemble::FixedN => {
                let n = args.n.context("--N is required")?;
                let s = cf::FixedNSpec::new(v, v_a, n)?;
                (cf::fixed_n_average(&s), asym::fixed_n_thermo(v, f, s.filling()))
            }
            Ensemble::Weighted => {
                let s = cf::WeightedSpec::new(v, v_a, args.w.context("--w is required")?)?;
                (
                    cf::weighted_average(&s, false),
                    asym::page_weighted_thermo(v, f, s.mean_filling()),
                )
            }
            Ensemble::Gaussian => {
                let part = PartitionSpec::new(v, v_a)?;
                (cf::gaussian_average(&part), asym::gaussian_thermo(v, f))
            }
            Ensemble::GaussianFixedN => {
                let n = args.n.context("--N is required")?;
                let s = cf::FixedNSpec::new(v, v_a, n)?;
                (cf::gaussian_fixed_n_average(&s), asym::gaussian_fixed_n_thermo(v, f, s.filling()))
            }
            Ensemble::GaussianWeighted => {
                let s = cf::WeightedSpec::new(v, v_a, args.w.context("--w is required")?)?;
                (
                    cf::weighted_average(&s, true),
                    asym::gaussian_weighted_thermo(v, f, s.mean_filling()),
                )
            }
            Ensemble::BosonicFixedN => {
                let n = args.n.context("--N is required")?;
                let nf = f64::from(n) / f64::from(v);
                let thermo = if f <= 0.5 { asym::bosonic_fixed_n_thermo(v, f, nf) } else { f64::NAN };
                (asym::bosonic_fixed_n_exact(v, v_a, n), thermo)
            }
        };
        let _ = writeln!(rows, "{},{},{}", fmt(f), fmt(value), fmt(thermo));
    }
    write_output(&args.out, &rows)?;
    Ok(0)
}

// ---------------------------------------------------------------------------
// sample
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SampleEnsemble {
    Page,
    Sector,
    Gaussian,
    GaussianFixedN,
}

#[derive(Args)]
pub struct SampleArgs {
    #[arg(long, value_enum)]
    ensemble: SampleEnsemble,
    #[arg(long = "V")]
    v: u32,
    #[arg(long = "VA")]
    v_a: u32,
    #[arg(long = "N")]
    n: Option<u32>,
    /// Number of Monte Carlo samples
    #[arg(long = "n", alias = "samples")]
    samples: u64,
    /// Master seed (mandatory for every stochastic command)
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = 0)]
    workers: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Serialize)]
struct SampleReport {
    ensemble: &'static str,
    v: u32,
    v_a: u32,
    n: Option<u32>,
    mean: f64,
    stderr: f64,
    sample_variance: f64,
    n_samples: u64,
    seed: u64,
    closed_form: f64,
    z_score: f64,
}

pub fn run_sample(args: SampleArgs) -> Result<i32> {
    let (v, v_a) = (args.v, args.v_a);
    let part = PartitionSpec::new(v, v_a)?;
    let (name, est, closed) = match args.ensemble {
        SampleEnsemble::Page => {
            if v > 26 {
                bail!("full-space sampling limited to V <= 26");
            }
            let est = ens::mc_estimate(
                |rng| ens::sample_haar_state(v, rng),
                |s| vn_entropy(&rdm_spectrum_full(s, &part).unwrap()),
                args.samples,
                args.seed,
                args.workers,
            );
            ("page", est, cf::page_average(1 << v_a, 1 << (v - v_a)))
        }
        SampleEnsemble::Sector => {
            let n = args.n.context("--N is required")?;
            let est = ens::mc_estimate(
                |rng| ens::sample_sector_state(v, n, rng),
                |s| vn_entropy(&rdm_spectrum_sector(s, &part).unwrap()),
                args.samples,
                args.seed,
                args.workers,
            );
            ("sector", est, cf::fixed_n_average(&cf::FixedNSpec::new(v, v_a, n)?))
        }
        SampleEnsemble::Gaussian => {
            let est = ens::mc_estimate(
                |rng| ens::sample_gaussian_state(v, rng),
                |rep| rep.entanglement_entropy(v_a).unwrap(),
                args.samples,
                args.seed,
                args.workers,
            );
            ("gaussian", est, cf::gaussian_average(&part))
        }
        SampleEnsemble::GaussianFixedN => {
            let n = args.n.context("--N is required")?;
            let est = ens::mc_estimate(
                |rng| ens::sample_gaussian_fixed_n(v, n, rng),
                |rep| rep.entanglement_entropy(v_a).unwrap(),
                args.samples,
                args.seed,
                args.workers,
            );
            ("gaussian-fixed-n", est, cf::gaussian_fixed_n_average(&cf::FixedNSpec::new(v, v_a, n)?))
        }
    };
    let report = SampleReport {
        ensemble: name,
        v,
        v_a,
        n: args.n,
        mean: est.mean,
        stderr: est.stderr,
        sample_variance: est.sample_variance,
        n_samples: est.n_samples,
        seed: est.master_seed,
        closed_form: closed,
        z_score: (est.mean - closed) / est.stderr,
    };
    write_output(&args.out, &format!("{}\n", serde_json::to_string_pretty(&report)?))?;
    Ok(0)
}

// ---------------------------------------------------------------------------
// spectrum
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SpectrumExperiment {
    Gue,
    Goe,
    DirectSumGue,
    PorterThomas,
}

#[derive(Args)]
pub struct SpectrumArgs {
    #[arg(long, value_enum)]
    experiment: SpectrumExperiment,
    /// Matrix dimension
    #[arg(long, default_value_t = 400)]
    d: usize,
    /// Number of matrix draws
    #[arg(long, default_value_t = 50)]
    draws: usize,
    /// Number of direct summands (direct-sum-gue only)
    #[arg(long = "M", default_value_t = 5)]
    m: usize,
    #[arg(long, default_value_t = 7)]
    unfold_degree: usize,
    #[arg(long, default_value_t = 50)]
    bins: usize,
    #[arg(long)]
    seed: u64,
    /// Output prefix; writes <prefix>_hist.csv and <prefix>_report.json
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Serialize)]
struct SpectrumReport {
    experiment: String,
    d: usize,
    draws: usize,
    m: Option<usize>,
    n_samples: usize,
    seed: u64,
    ks_surmise: Option<f64>,
    ks_surmise_p: Option<f64>,
    ks_poisson: Option<f64>,
    ks_poisson_p: Option<f64>,
    chi2_p: Option<f64>,
}

pub fn run_spectrum(args: SpectrumArgs) -> Result<i32> {
    let mut rng = ens::stream_rng(args.seed, 0);
    let (samples, range, report) = match args.experiment {
        SpectrumExperiment::Gue | SpectrumExperiment::Goe => {
            let (kind, beta) = match args.experiment {
                SpectrumExperiment::Gue => (spectral::GaussianEnsemble::Gue, 2u8),
                _ => (spectral::GaussianEnsemble::Goe, 1u8),
            };
            let mut spacings = Vec::new();
            for _ in 0..args.draws {
                let spec = spectral::sample_gaussian_ensemble(kind, args.d, &mut rng);
                let unfolded = spectral::unfold(&spec, args.unfold_degree)?;
                spacings.extend(spectral::bulk_spacings(&unfolded, 0.8));
            }
            let (ks_s, p_s) =
                spectral::spacing_ks(&spacings, spectral::SpacingReference::WignerSurmise { beta });
            let (ks_p, p_p) = spectral::spacing_ks(&spacings, spectral::SpacingReference::Poisson);
            let report = SpectrumReport {
                experiment: format!("{kind:?}").to_lowercase(),
                d: args.d,
                draws: args.draws,
                m: None,
                n_samples: spacings.len(),
                seed: args.seed,
                ks_surmise: Some(ks_s),
                ks_surmise_p: Some(p_s),
                ks_poisson: Some(ks_p),
                ks_poisson_p: Some(p_p),
                chi2_p: None,
            };
            (spacings, (0.0, 4.0), report)
        }
        SpectrumExperiment::DirectSumGue => {
            let gaps = spectral::direct_sum_gue_spacing(args.m, args.d.min(100), args.draws, &mut rng);
            let (ks_s, p_s) = spectral::spacing_ks(
                &gaps,
                spectral::SpacingReference::WignerSurmise { beta: 2 },
            );
            let (ks_p, p_p) = spectral::spacing_ks(&gaps, spectral::SpacingReference::Poisson);
            let report = SpectrumReport {
                experiment: "direct-sum-gue".into(),
                d: args.d.min(100),
                draws: args.draws,
                m: Some(args.m),
                n_samples: gaps.len(),
                seed: args.seed,
                ks_surmise: Some(ks_s),
                ks_surmise_p: Some(p_s),
                ks_poisson: Some(ks_p),
                ks_poisson_p: Some(p_p),
                chi2_p: None,
            };
            (gaps, (0.0, 4.0), report)
        }
        SpectrumExperiment::PorterThomas => {
            let mut amps = Vec::new();
            for _ in 0..args.draws {
                let h = spectral::gue_matrix(args.d, &mut rng);
                let (_, vecs) = typent_core::linalg_eigh_c(&h);
                for k in 0..args.d {
                    for i in 0..args.d {
                        amps.push(vecs[[i, k]].norm_sqr());
                    }
                }
            }
            let nn = args.d as f64;
            let hi = 8.0 / nn;
            let (_, _, p) = spectral::chi2_goodness_of_fit(&amps, args.bins, 0.0, hi, |a| {
                1.0 - (-nn * a).exp()
            });
            let report = SpectrumReport {
                experiment: "porter-thomas".into(),
                d: args.d,
                draws: args.draws,
                m: None,
                n_samples: amps.len(),
                seed: args.seed,
                ks_surmise: None,
                ks_surmise_p: None,
                ks_poisson: None,
                ks_poisson_p: None,
                chi2_p: Some(p),
            };
            (amps, (0.0, hi), report)
        }
    };
    let hist = spectral::Histogram::from_samples(&samples, args.bins, range.0, range.1);
    let json = format!("{}\n", serde_json::to_string_pretty(&report)?);
    match &args.out {
        Some(prefix) => {
            let hist_path = prefix.with_file_name(format!(
                "{}_hist.csv",
                prefix.file_name().map(|s| s.to_string_lossy()).unwrap_or_default()
            ));
            let report_path = prefix.with_file_name(format!(
                "{}_report.json",
                prefix.file_name().map(|s| s.to_string_lossy()).unwrap_or_default()
            ));
            std::fs::write(&hist_path, hist.to_csv())?;
            std::fs::write(&report_path, &json)?;
            eprintln!("wrote {} and {}", hist_path.display(), report_path.display());
        }
        None => {
            print!("{json}");
        }
    }
    Ok(0)
}

// ---------------------------------------------------------------------------
// hamiltonian
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Model {
    FreeFermion,
    Anderson,
    Syk2,
    Hcb,
    BlockGue,
    FullGue,
}

#[derive(Args)]
pub struct HamiltonianArgs {
    #[arg(long, value_enum)]
    model: Model,
    #[arg(long = "V")]
    v: Option<u32>,
    /// Cube edge length (anderson)
    #[arg(long = "L")]
    l: Option<u32>,
    /// Disorder strength W (anderson)
    #[arg(long = "W", default_value_t = 1.0)]
    disorder: f64,
    #[arg(long = "N")]
    n: Option<u32>,
    #[arg(long, default_value_t = 1.0)]
    t1: f64,
    #[arg(long, default_value_t = 1.0)]
    t2: f64,
    #[arg(long = "V1", default_value_t = 1.1)]
    v1: f64,
    #[arg(long = "V2", default_value_t = 1.1)]
    v2: f64,
    #[arg(long = "VA")]
    v_a: u32,
    /// Eigenstates to sample per realization (quadratic models; 0 = all 2^V)
    #[arg(long, default_value_t = 1000)]
    states: u64,
    /// Central energy window for interacting models
    #[arg(long, default_value_t = 0.2)]
    window: f64,
    /// Disorder realizations
    #[arg(long, default_value_t = 1)]
    seeds: u64,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

pub fn run_hamiltonian(args: HamiltonianArgs) -> Result<i32> {
    let v_a = args.v_a;
    let mut rows = String::from("model,realization,V,VA,mean,stderr,n_samples,reference\n");
    for r in 0..args.seeds {
        let seed = args.seed.wrapping_add(r);
        let (label, v, est, reference) = match args.model {
            Model::FreeFermion => {
                let v = args.v.context("--V is required")?;
                let model = ham::build_free_fermion_1d(v);
                let mode = if args.states == 0 {
                    ham::EigenstateSampling::AllStates
                } else {
                    ham::EigenstateSampling::Sampled { n: args.states, seed }
                };
                let est = ham::quadratic_eigenstate_average(&model, v_a, mode)?;
                let reference =
                    cf::weighted_average(&cf::WeightedSpec::new(v, v_a, 0.0)?, true);
                ("free-fermion", v, est, reference)
            }
            Model::Anderson => {
                let l = args.l.context("--L is required")?;
                let v = l * l * l;
                let model = ham::build_anderson_3d(l, args.disorder, seed);
                let est = ham::quadratic_eigenstate_average(
                    &model,
                    v_a,
                    ham::EigenstateSampling::Sampled { n: args.states, seed: seed ^ 0xa5a5 },
                )?;
                let reference =
                    cf::weighted_average(&cf::WeightedSpec::new(v, v_a, 0.0)?, true);
                ("anderson", v, est, reference)
            }
            Model::Syk2 => {
                let v = args.v.context("--V is required")?;
                let model = ham::build_syk2_dirac(v, seed);
                let mode = match args.n {
                    Some(n) => ham::EigenstateSampling::FixedNSampled {
                        n_particles: n,
                        n: args.states,
                        seed: seed ^ 0xa5a5,
                    },
                    None => ham::EigenstateSampling::Sampled { n: args.states, seed: seed ^ 0xa5a5 },
                };
                let est = ham::quadratic_eigenstate_average(&model, v_a, mode)?;
                let reference = match args.n {
                    Some(n) => cf::gaussian_fixed_n_average(&cf::FixedNSpec::new(v, v_a, n)?),
                    None => cf::weighted_average(&cf::WeightedSpec::new(v, v_a, 0.0)?, true),
                };
                ("syk2", v, est, reference)
            }
            Model::Hcb => {
                let v = args.v.context("--V is required")?;
                let n = args.n.context("--N is required")?;
                let model = ham::build_hcb_chain(v, n, args.t1, args.t2, args.v1, args.v2)?;
                let est = ham::interacting_eigenstate_average(&model, v_a, args.window)?;
                let reference = cf::fixed_n_average(&cf::FixedNSpec::new(v, v_a, n)?);
                ("hcb", v, est, reference)
            }
            Model::BlockGue => {
                let v = args.v.context("--V is required")?;
                let n = args.n.context("--N is required")?;
                let mut rng = ens::stream_rng(seed, 0);
                let model = ham::build_block_gue(v, n, &mut rng);
                let est = ham::interacting_eigenstate_average(&model, v_a, args.window)?;
                let reference = cf::fixed_n_average(&cf::FixedNSpec::new(v, v_a, n)?);
                ("block-gue", v, est, reference)
            }
            Model::FullGue => {
                let v = args.v.context("--V is required")?;
                let mut rng = ens::stream_rng(seed, 0);
                let model = ham::build_full_gue(v, &mut rng);
                let est = ham::interacting_eigenstate_average(&model, v_a, args.window)?;
                let reference = cf::page_average(1 << v_a, 1 << (v - v_a));
                ("full-gue", v, est, reference)
            }
        };
        let _ = writeln!(
            rows,
            "{label},{r},{v},{v_a},{},{},{},{}",
            fmt(est.mean),
            fmt(est.stderr),
            est.n_samples,
            fmt(reference)
        );
    }
    write_output(&args.out, &rows)?;
    Ok(0)
}

// ---------------------------------------------------------------------------
// validate
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SuiteArg {
    Quick,
    Full,
}

#[derive(Args)]
pub struct ValidateArgs {
    #[arg(long, value_enum, default_value = "quick")]
    suite: SuiteArg,
    #[arg(long, default_value_t = 20260810)]
    seed: u64,
    /// Run only these criterion ids (comma separated)
    #[arg(long, value_delimiter = ',')]
    criteria: Option<Vec<u32>>,
    #[arg(long)]
    out: Option<PathBuf>,
}

pub fn run_validate(args: ValidateArgs) -> Result<i32> {
    let suite = match args.suite {
        SuiteArg::Quick => Suite::Quick,
        SuiteArg::Full => Suite::Full,
    };
    let ids: Vec<u32> = match args.criteria {
        Some(ids) => {
            for &id in &ids {
                if !(1..=13).contains(&id) {
                    bail!("criterion ids must be in 1..=13, got {id}");
                }
            }
            ids
        }
        None => validate::criterion_ids().collect(),
    };
    let mut reports = Vec::new();
    for id in ids {
        let report = validate::run_criterion(id, suite, args.seed);
        println!("{}", report.summary_line());
        reports.push(report);
    }
    let all_passed = reports.iter().all(|r| r.passed);
    if let Some(path) = &args.out {
        std::fs::write(path, format!("{}\n", serde_json::to_string_pretty(&reports)?))?;
    }
    Ok(if all_passed { 0 } else { 1 })
}
