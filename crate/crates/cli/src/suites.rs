//! Case sets for each subcommand.
//!
//! Cases are generated sequentially from the seed, evaluated in parallel and
//! collected in case order, so output does not depend on the thread count.

use std::f64::consts::PI;

use bergman_core::boundary::{self, hardy_identity_check, infimum_constant, szego_bergman_ratio, theorem1_sweep};
use bergman_core::green::{log_inclusion_check, GreenEvaluator};
use bergman_core::kernel::KernelEvaluator;
use bergman_core::polynomial::Polynomial;
use bergman_core::projection::{
    self, blocki_remark_check, df_lq_check, df_lq_corpus, hardy_weight_check, kohn_reports, sharp_example_check,
    weighted_ratio_check, DiscFunction, WeightSpec,
};
use bergman_core::toeplitz::{exponent_fit, lp_norm_fit};
use bergman_core::{tolerances, DomainModel, VerificationReport, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::config::ExperimentConfig;
use crate::range::parse_geometric;
use crate::CliError;

type Reports = Result<Vec<VerificationReport>, CliError>;

/// Polynomial and reproduce point, then a pair for series agreement.
type KernelCase = (Polynomial, Vec<C64>, Vec<C64>, Vec<C64>);

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::Subcommand)]
pub enum Suite {
    /// Reproducing residuals and series/closed-form agreement.
    KernelEval,
    /// Boundary-norm ratio sweeps toward the boundary.
    VerifyTheorem1,
    /// Weighted projection bounds, Kohn split and the L^q corollary.
    VerifyProjection,
    /// The sharp-constant example and Błocki's remark.
    VerifySharpConstant,
    /// Green sublevel inclusions and kernel comparison.
    VerifyGreen,
    /// Sublevel-set lower bound on random polynomials.
    VerifyHerbort,
    /// Hardy-space identity and the δ^{−r} projection bound.
    VerifyHardy,
    /// Growth exponents of weighted kernel integrals.
    VerifyToeplitz,
    /// Minimization behind the constant 4en + 1.
    VerifyInfimum,
    /// Szegő/Bergman diagonal ratio.
    VerifySzego,
    /// Every suite above.
    All,
}

const DISC: DomainModel = DomainModel::UnitDisc;
const BALL2: DomainModel = DomainModel::Ball(2);

impl Suite {
    pub const EACH: [Suite; 10] = [
        Suite::KernelEval,
        Suite::VerifyTheorem1,
        Suite::VerifyProjection,
        Suite::VerifySharpConstant,
        Suite::VerifyGreen,
        Suite::VerifyHerbort,
        Suite::VerifyHardy,
        Suite::VerifyToeplitz,
        Suite::VerifyInfimum,
        Suite::VerifySzego,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::KernelEval => "kernel-eval",
            Suite::VerifyTheorem1 => "verify-theorem1",
            Suite::VerifyProjection => "verify-projection",
            Suite::VerifySharpConstant => "verify-sharp-constant",
            Suite::VerifyGreen => "verify-green",
            Suite::VerifyHerbort => "verify-herbort",
            Suite::VerifyHardy => "verify-hardy",
            Suite::VerifyToeplitz => "verify-toeplitz",
            Suite::VerifyInfimum => "verify-infimum",
            Suite::VerifySzego => "verify-szego",
            Suite::All => "all",
        }
    }

    /// Domains run when none is configured; empty for suites that are not
    /// domain-parametrized.
    fn default_domains(self) -> Vec<DomainModel> {
        match self {
            Suite::KernelEval
            | Suite::VerifyGreen
            | Suite::VerifyHerbort
            | Suite::VerifyToeplitz
            | Suite::VerifySzego => {
                vec![DISC, BALL2]
            }
            Suite::VerifyTheorem1 => vec![DISC, BALL2, DomainModel::Ellipsoid(2)],
            _ => vec![],
        }
    }

    fn supports(self, d: DomainModel) -> Result<(), String> {
        let d = d.canonical();
        let ok = match self {
            Suite::KernelEval => true,
            Suite::VerifyTheorem1 => !matches!(d, DomainModel::Polydisc(_)),
            Suite::VerifyGreen | Suite::VerifyHerbort | Suite::VerifyToeplitz | Suite::VerifySzego => {
                matches!(d, DomainModel::UnitDisc | DomainModel::Ball(_))
            }
            Suite::VerifyProjection | Suite::VerifySharpConstant | Suite::VerifyHardy => d == DISC,
            Suite::VerifyInfimum => !matches!(d, DomainModel::Polydisc(_)),
            Suite::All => true,
        };
        if ok {
            Ok(())
        } else {
            let why = match self {
                Suite::VerifyTheorem1 => "the polydisc boundary is not smooth",
                Suite::VerifyProjection | Suite::VerifySharpConstant | Suite::VerifyHardy => {
                    "these statements are checked on the unit disc only"
                }
                Suite::VerifyInfimum => "the constant is indexed by the dimension of a smooth model",
                _ => "closed-form Green functions and kernel powers exist only for the disc and balls",
            };
            Err(format!("{} does not support domain {d}: {why}", self.name()))
        }
    }

    /// Runs the suite. For `all`, suites that do not support a configured
    /// domain are skipped rather than rejected.
    pub fn run(self, cfg: &ExperimentConfig) -> Reports {
        Ok(self.run_unscaled(cfg)?.into_iter().map(|r| retolerance(r, cfg)).collect())
    }

    fn run_unscaled(self, cfg: &ExperimentConfig) -> Reports {
        let mut out = Vec::new();
        match self {
            Suite::All => {
                for s in Suite::EACH {
                    if cfg.domain.is_some_and(|d| s.supports(d).is_err()) {
                        continue;
                    }
                    out.extend(s.run_unscaled(cfg)?);
                }
            }
            _ => {
                if let Some(d) = cfg.domain {
                    self.supports(d).map_err(CliError::Usage)?;
                }
                let domains = match cfg.domain {
                    Some(d) => vec![d],
                    None => self.default_domains(),
                };
                if !self.domain_parametrized() {
                    out.extend(self.run_plain(cfg)?);
                } else {
                    for d in domains {
                        out.extend(self.run_on(cfg, d)?);
                    }
                }
            }
        }
        Ok(out)
    }

    fn domain_parametrized(self) -> bool {
        !self.default_domains().is_empty()
    }

    fn run_on(self, cfg: &ExperimentConfig, d: DomainModel) -> Reports {
        match self {
            Suite::KernelEval => kernel_eval(cfg, d),
            Suite::VerifyTheorem1 => theorem1(cfg, d),
            Suite::VerifyGreen => green(cfg, d),
            Suite::VerifyHerbort => herbort(cfg, d),
            Suite::VerifyToeplitz => toeplitz(cfg, d),
            Suite::VerifySzego => szego(d),
            _ => unreachable!("not domain-parametrized"),
        }
    }

    fn run_plain(self, cfg: &ExperimentConfig) -> Reports {
        match self {
            Suite::VerifyProjection => projection_suite(cfg),
            Suite::VerifySharpConstant => sharp_constant(cfg),
            Suite::VerifyHardy => hardy(cfg),
            Suite::VerifyInfimum => infimum(cfg),
            _ => unreachable!("domain-parametrized"),
        }
    }
}

fn retolerance(r: VerificationReport, cfg: &ExperimentConfig) -> VerificationReport {
    let base = cfg.tolerances.get(&r.statement_id).copied().unwrap_or(r.tolerance);
    r.tolerance(base * cfg.tolerance_scale)
}

/// Independent stream per (suite, domain) so corpora do not shift when
/// another suite changes.
fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

fn domain_stream(d: DomainModel) -> u64 {
    match d.canonical() {
        DomainModel::UnitDisc => 1,
        DomainModel::Ball(n) => 100 + n as u64,
        DomainModel::Polydisc(n) => 200 + n as u64,
        DomainModel::Ellipsoid(m) => 300 + m as u64,
    }
}

/// Uniformly random direction scaled to a radius in `[0, rmax)`; on
/// polydiscs each coordinate is drawn separately.
fn random_point(d: DomainModel, rmax: f64, rng: &mut ChaCha8Rng) -> Vec<C64> {
    let n = d.complex_dim();
    if let DomainModel::Polydisc(_) = d.canonical() {
        return (0..n).map(|_| C64::from_polar(rmax * rng.random::<f64>(), 2.0 * PI * rng.random::<f64>())).collect();
    }
    let v: Vec<C64> = loop {
        let v: Vec<C64> = (0..n).map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect();
        let s: f64 = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if s > 1e-3 && s <= 1.0 {
            break v.iter().map(|c| c / s).collect();
        }
    };
    let radius = rmax * rng.random::<f64>();
    v.iter().map(|c| c * radius).collect()
}

fn kernel_eval(cfg: &ExperimentConfig, d: DomainModel) -> Reports {
    let dim = d.complex_dim();
    let res = cfg.resolution_or(if d == DISC { 48 } else { 32 });
    let mut g = rng(cfg.seed, 1000 + domain_stream(d));
    // Reproduce at ‖z‖ ≤ 0.5, where the angular trapezoid resolves the kernel
    // to machine precision at the default resolution.
    let cases: Vec<KernelCase> = (0..cfg.corpus(24))
        .map(|_| {
            let deg = g.random_range(0..=4);
            let p = Polynomial::random(dim, deg, &mut g);
            let z = random_point(d, 0.5, &mut g);
            let a = random_point(d, 0.95, &mut g);
            let b = random_point(d, 0.95, &mut g);
            (p, z, a, b)
        })
        .collect();
    let closed = KernelEvaluator::closed_form(d);
    let series = KernelEvaluator::moment_series(d, tolerances::TAIL_TOL)?;
    let rows: Vec<Vec<VerificationReport>> = cases
        .par_iter()
        .enumerate()
        .map(|(i, (p, z, a, b))| -> Reports {
            let residual = closed.reproduce_check(p, z, res)?;
            let exact = closed.bergman_eval(a, b)?;
            let (approx, tail) = series.series_with_bound(a, b)?;
            let rel = (approx - exact).norm() / exact.norm();
            Ok(vec![
                VerificationReport::new("kernel.reproduce", d.to_string())
                    .input("case", i as f64)
                    .point("z", z)
                    .input("deg", p.degree() as f64)
                    .at_most(residual, 0.0)
                    .tolerance(tolerances::REPRODUCE),
                VerificationReport::new("kernel.series", d.to_string())
                    .input("case", i as f64)
                    .point("z", a)
                    .point("w", b)
                    .at_most(rel, 0.0)
                    .tolerance(tolerances::SERIES_AGREEMENT)
                    .error_estimate(tail / exact.norm()),
            ])
        })
        .collect::<Result<_, _>>()?;
    Ok(rows.into_iter().flatten().collect())
}

fn axis(n: usize, j: usize) -> Vec<C64> {
    let mut v = vec![C64::new(0.0, 0.0); n];
    v[j] = C64::new(1.0, 0.0);
    v
}

fn theorem1(cfg: &ExperimentConfig, d: DomainModel) -> Reports {
    let n = d.complex_dim();
    let (default_deltas, directions) = match d.canonical() {
        // Coordinate directions keep one phase invariant, which the focused
        // boundary rule needs to stay two-dimensional.
        DomainModel::Ellipsoid(_) => (parse_geometric("1e-1..1e-4")?, vec![axis(2, 1), axis(2, 0)]),
        _ => (parse_geometric("1e-1..1e-6")?, vec![axis(n, 0)]),
    };
    let deltas = cfg.deltas_or(&default_deltas);
    let res = cfg.resolution_or(boundary::DEFAULT_RESOLUTION);
    let mut out = Vec::new();
    for dir in directions {
        out.extend(theorem1_sweep(d, &dir, &deltas, res)?.verification_reports());
    }
    Ok(out)
}

fn weights(cfg: &ExperimentConfig) -> Result<Vec<WeightSpec>, CliError> {
    let mut out = Vec::new();
    for r in cfg.r_or(&[0.25, 0.5, 0.75]) {
        out.push(WeightSpec::log_log(r)?);
        out.push(WeightSpec::log_delta(r)?);
    }
    for t in cfg.t_or(&[0.5]) {
        out.push(WeightSpec::df_index(t, (1.0 + t) / 2.0)?);
    }
    Ok(out)
}

fn projection_suite(cfg: &ExperimentConfig) -> Reports {
    let res = cfg.resolution_or(projection::radial::DEFAULT_RESOLUTION);
    let mut g = rng(cfg.seed, 2000);
    let corpus: Vec<DiscFunction> = (0..cfg.corpus(200)).map(|_| DiscFunction::random(3, &mut g)).collect();
    let mut out = Vec::new();
    for w in weights(cfg)? {
        let rows: Vec<Vec<VerificationReport>> = corpus
            .par_iter()
            .enumerate()
            .map(|(i, f)| -> Reports {
                let mut v = vec![weighted_ratio_check(f, &w, res)?];
                v.extend(kohn_reports(f, &w, res)?);
                Ok(v.into_iter().map(|r| r.input("case", i as f64)).collect())
            })
            .collect::<Result<_, _>>()?;
        out.extend(rows.into_iter().flatten());
    }
    let lq_corpus = df_lq_corpus(16, cfg.seed);
    for t in cfg.t_or(&[0.5]) {
        let q_max = 4.0 / (2.0 - t);
        for q in [2.0, (2.0 + q_max) / 2.0] {
            out.push(df_lq_check(&lq_corpus, t, q, res)?);
        }
    }
    Ok(out)
}

fn sharp_constant(cfg: &ExperimentConfig) -> Reports {
    let res = cfg.resolution_or(projection::radial::DEFAULT_RESOLUTION);
    let rs = cfg.r_or(&crate::range::parse_linear("0.1..0.9:9")?);
    let rows: Vec<Vec<VerificationReport>> =
        rs.par_iter().map(|&r| sharp_example_check(r, res)).collect::<Result<_, _>>()?;
    let mut out: Vec<VerificationReport> = rows.into_iter().flatten().collect();
    out.extend(blocki_remark_check(&rs)?);
    Ok(out)
}

fn green(cfg: &ExperimentConfig, d: DomainModel) -> Reports {
    let deltas = cfg.deltas_or(&parse_geometric("0.5..1e-5:20")?);
    let ts = cfg.t_or(&crate::range::parse_linear("0.1..5:10")?);
    let mut g = rng(cfg.seed, 3000 + domain_stream(d));
    let poles: Vec<Vec<C64>> = deltas
        .iter()
        .map(|&delta| {
            let u = random_point(d, 1.0, &mut g);
            let s = u.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
            u.iter().map(|c| c * ((1.0 - delta) / s)).collect()
        })
        .collect();
    let mut cases: Vec<(Vec<C64>, f64)> = Vec::new();
    for w in &poles {
        for &t in &ts {
            cases.push((w.clone(), t));
        }
    }
    let rows: Vec<Vec<VerificationReport>> = cases
        .par_iter()
        .map(|(w, t)| -> Reports {
            let ge = GreenEvaluator::new(d, w)?;
            let mut v = vec![ge.sublevel_extremes(*t)?.to_report(d, w)];
            if d == DISC {
                v.push(ge.sublevel_kernel_check(*t)?);
            }
            Ok(v)
        })
        .collect::<Result<_, _>>()?;
    let mut out: Vec<VerificationReport> = rows.into_iter().flatten().collect();
    if d == DISC {
        // Equality case at the centre.
        let ge = GreenEvaluator::new(d, &[C64::new(0.0, 0.0)])?;
        for &t in &ts {
            out.push(ge.sublevel_kernel_check(t)?);
        }
    }
    out.extend(log_inclusion_check(d, &[1e-2, 1e-3, 1e-4, 1e-5, 1e-6], 3.0)?);
    Ok(out)
}

fn herbort(cfg: &ExperimentConfig, d: DomainModel) -> Reports {
    let dim = d.complex_dim();
    let res = cfg.resolution_or(12);
    let mut g = rng(cfg.seed, 4000 + domain_stream(d));
    let cases: Vec<(Vec<C64>, f64, Polynomial)> = (0..cfg.corpus(500))
        .map(|_| {
            let w = random_point(d, 0.95, &mut g);
            let t = g.random_range(0.05..3.0);
            let deg = g.random_range(0..=4);
            (w, t, Polynomial::random(dim, deg, &mut g))
        })
        .collect();
    cases
        .par_iter()
        .enumerate()
        .map(|(i, (w, t, p))| {
            let ge = GreenEvaluator::new(d, w)?;
            Ok(ge.herbort_check(*t, p, res)?.input("case", i as f64))
        })
        .collect()
}

fn hardy(cfg: &ExperimentConfig) -> Reports {
    let res = cfg.resolution_or(boundary::DEFAULT_RESOLUTION);
    let rs = [0.9, 0.99, 0.999, 0.9999];
    let mut out: Vec<VerificationReport> = [0.0, 0.5, 0.9]
        .par_iter()
        .map(|&x| Ok(hardy_identity_check(C64::new(x, 0.0), &rs, res)?.to_report()))
        .collect::<Reports>()?;
    // Truncated kernels Σ_{k≤20} (k+1) w̄^k z^k / π, then random functions.
    let mut corpus: Vec<DiscFunction> = [0.5, 0.9]
        .iter()
        .map(|&w: &f64| {
            let c: Vec<C64> = (0..=20).map(|k| C64::new((k + 1) as f64 * w.powi(k) / PI, 0.0)).collect();
            DiscFunction::polynomial(&c)
        })
        .collect();
    let mut g = rng(cfg.seed, 5000);
    corpus.extend((0..cfg.corpus(50)).map(|_| DiscFunction::random(3, &mut g)));
    let pres = cfg.resolution_or(projection::radial::DEFAULT_RESOLUTION);
    for r in cfg.r_or(&[0.25, 0.5, 0.75]) {
        let rows: Vec<VerificationReport> = corpus
            .par_iter()
            .enumerate()
            .map(|(i, f)| Ok(hardy_weight_check(f, r, pres)?.input("case", i as f64)))
            .collect::<Reports>()?;
        out.extend(rows);
    }
    Ok(out)
}

fn toeplitz(cfg: &ExperimentConfig, d: DomainModel) -> Reports {
    let n = d.complex_dim() as f64;
    let deltas = cfg.deltas_or(&parse_geometric("1e-1..1e-4")?);
    let alphas = cfg.alpha_or(&if d == DISC { vec![0.0, 0.5, 1.0, 3.0] } else { vec![0.0, 1.0, n + 2.0] });
    let res = cfg.resolution_or(if d == DISC { 16 } else { 12 });
    let mut out = Vec::new();
    // p = 2 is the α = 0 case.
    let ps: Vec<f64> = [4.0 / 3.0, 2.0, 4.0].into_iter().filter(|&p| p != 2.0 || !alphas.contains(&0.0)).collect();
    for &a in &alphas {
        out.push(exponent_fit(d, a, &deltas, res)?.to_report(d));
    }
    for p in ps {
        out.push(lp_norm_fit(d, p, &deltas, res)?.to_report(d));
    }
    Ok(out)
}

fn infimum(cfg: &ExperimentConfig) -> Reports {
    let ns = match (&cfg.n, cfg.domain) {
        (Some(ns), _) => ns.clone(),
        (None, Some(d)) => vec![d.complex_dim()],
        (None, None) => (1..=5).collect(),
    };
    let mut out = Vec::new();
    for n in ns {
        out.extend(infimum_constant(n)?.reports());
    }
    Ok(out)
}

fn szego(d: DomainModel) -> Reports {
    let n = d.complex_dim();
    let radii: Vec<f64> = (0..=10).map(|i| 1.0 - 10f64.powf(-6.0 * i as f64 / 10.0)).collect();
    let mut points = Vec::new();
    for &x in &radii {
        // The origin has no angular spread.
        for j in 0..if x == 0.0 { 1 } else { 10 } {
            let theta = 2.0 * PI * j as f64 / 10.0;
            let mut z = vec![C64::new(0.0, 0.0); n];
            if n == 1 {
                z[0] = C64::from_polar(x, theta);
            } else {
                let a = PI / 2.0 * j as f64 / 9.0;
                z[0] = C64::from_polar(x * a.cos(), theta);
                z[1] = C64::from_polar(x * a.sin(), -2.0 * theta);
            }
            points.push(z);
        }
    }
    points.par_iter().map(|z| Ok(szego_bergman_ratio(d, z)?)).collect()
}
