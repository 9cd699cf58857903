//! Bergman projections on the unit disc with radial weights.
//!
//! Radial weights commute with rotations, so both `P` and `P_ψ` act mode by
//! mode: only the `e^{ikθ}` component of `f` feeds the coefficient of `z^k`,
//!
//! ```text
//! c_k = ∫₀¹ g_k(ρ) ρ^{k+1} ω(ρ) dρ / ∫₀¹ ρ^{2k+1} ω(ρ) dρ,
//! ```
//!
//! with `ω = 1` for `P` and `ω = e^{−ψ}` for `P_ψ`. Every integrand is a
//! sum of `ρ^a (−log ρ)^b (1 − ρ)^c` terms and goes through
//! [`radial::radial_integral`].

pub mod function;
pub mod radial;
pub mod weight;

use std::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use function::{DiscFunction, RadialProfile, Term};
pub use weight::WeightSpec;

use crate::error::{Error, Result};
use crate::geometry::DomainModel;
use crate::quadrature::{gauss_legendre, pairwise_sum, periodic_trapezoid, TensorRule};
use crate::report::VerificationReport;
use crate::toeplitz::kernel_power_series;
use crate::tolerances;
use crate::C64;

use radial::radial_integral;

const DISC: &str = "disc";

/// `∫_𝔻 f h̄ (−log ρ)^b (1 − ρ)^c dV` with `weight = (b, c)`.
pub fn weighted_inner(f: &DiscFunction, h: &DiscFunction, weight: (f64, f64), resolution: usize) -> Result<C64> {
    let mut parts = Vec::new();
    for (k, pf) in &f.modes {
        let Some(ph) = h.modes.get(k) else { continue };
        for s in &pf.terms {
            for t in &ph.terms {
                let v = radial_integral(s.a + t.a + 1.0, s.b + t.b + weight.0, s.c + t.c + weight.1, resolution)?;
                parts.push(s.coef * t.coef.conj() * v);
            }
        }
    }
    Ok(pairwise_sum(&parts) * (2.0 * PI))
}

pub fn weighted_norm_sq(f: &DiscFunction, weight: (f64, f64), resolution: usize) -> Result<f64> {
    Ok(weighted_inner(f, f, weight, resolution)?.re)
}

/// `P_ψ(f)` in `L²(𝔻, e^{−ψ})`.
pub fn weighted_projection(f: &DiscFunction, w: &WeightSpec, resolution: usize) -> Result<DiscFunction> {
    let (bw, cw) = w.exp_neg_psi();
    let mut coeffs = Vec::new();
    for (&k, prof) in f.modes.range(0..) {
        let kf = k as f64;
        let moment = radial_integral(2.0 * kf + 1.0, bw, cw, resolution)?;
        let mut parts = Vec::with_capacity(prof.terms.len());
        for t in &prof.terms {
            parts.push(t.coef * radial_integral(t.a + kf + 1.0, t.b + bw, t.c + cw, resolution)?);
        }
        coeffs.push((k, pairwise_sum(&parts) / moment));
    }
    let mut out = DiscFunction::zero();
    for (k, c) in coeffs {
        out.push(k, Term::new(c, k as f64, 0.0, 0.0));
    }
    Ok(out)
}

/// Unweighted Bergman projection.
pub fn project(f: &DiscFunction, resolution: usize) -> Result<DiscFunction> {
    weighted_projection(f, &WeightSpec::Flat, resolution)
}

/// `∫|P(f)|² e^ψ / ∫|f|² e^ψ`.
pub fn weighted_ratio(f: &DiscFunction, w: &WeightSpec, resolution: usize) -> Result<f64> {
    let e = w.exp_psi();
    let den = weighted_norm_sq(f, e, resolution)?;
    if !(den > 0.0) {
        return Err(Error::InvalidArgument("∫|f|² e^ψ vanishes".into()));
    }
    let num = weighted_norm_sq(&project(f, resolution)?, e, resolution)?;
    Ok(num / den)
}

/// Ratio against the bound `1/(1 − r)`; the error estimate compares
/// `resolution` with `2·resolution`.
pub fn weighted_ratio_check(f: &DiscFunction, w: &WeightSpec, resolution: usize) -> Result<VerificationReport> {
    let ratio = weighted_ratio(f, w, 2 * resolution)?;
    let coarse = weighted_ratio(f, w, resolution)?;
    Ok(weight_inputs(VerificationReport::new("prop2.1", DISC), w)
        .input("max_mode", f.max_mode() as f64)
        .at_most(ratio, w.bound())
        .tolerance(tolerances::WEIGHTED_RATIO)
        .error_estimate((ratio - coarse).abs()))
}

/// `r` plus the weight kind code of [`WeightSpec::code`] and, for the
/// index weight, `t` and `t′`.
fn weight_inputs(report: VerificationReport, w: &WeightSpec) -> VerificationReport {
    let report = report.input("r", w.r()).input("weight", w.code());
    match *w {
        WeightSpec::DFIndex { t, t_prime } => report.input("t", t).input("t_prime", t_prime),
        _ => report,
    }
}

fn check_open_unit(name: &str, r: f64) -> Result<()> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::InvalidArgument(format!("{name} must lie in (0, 1), got {r}")));
    }
    Ok(())
}

/// Ratio for `f = (−log|z|)^r`, `ψ = −r log(−log|z|)`.
pub fn sharp_example_ratio(r: f64, resolution: usize) -> Result<f64> {
    check_open_unit("r", r)?;
    let f = DiscFunction::zero().with_term(0, Term::new(C64::new(1.0, 0.0), 0.0, r, 0.0));
    weighted_ratio(&f, &WeightSpec::log_log(r)?, resolution)
}

/// `πr / sin(πr)`.
pub fn sharp_closed_form(r: f64) -> f64 {
    PI * r / (PI * r).sin()
}

/// The example's ratio against the cap `1/(1 − r)` and against its closed
/// form `πr/sin(πr)`.
pub fn sharp_example_check(r: f64, resolution: usize) -> Result<Vec<VerificationReport>> {
    let ratio = sharp_example_ratio(r, resolution)?;
    let closed = sharp_closed_form(r);
    let cap = VerificationReport::new("remark.sharp-constant", DISC)
        .input("r", r)
        .at_most(ratio, 1.0 / (1.0 - r))
        .tolerance(tolerances::WEIGHTED_RATIO);
    let rel = (ratio / closed - 1.0).abs();
    let exact = VerificationReport::new("remark.sharp-constant.closed-form", DISC)
        .input("r", r)
        .sides(ratio, closed, -rel)
        .tolerance(tolerances::SHARP_CONSTANT);
    Ok(vec![cap, exact])
}

/// Scalar comparison of the constants around the sharp example.
///
/// `remark.blocki` checks `πr/sin(πr) ≤ min(1/(1−r), 1/(1 − 4r²/(1−r)²))`
/// (second term only for `r < 1/3`); `remark.blocki.sharper` checks that
/// the improved constant is below `1/(1 − r)`, as claimed for the whole
/// range `r < 1/3`. That ordering only holds for `r < 3 − 2√2`.
pub fn blocki_remark_check(rs: &[f64]) -> Result<Vec<VerificationReport>> {
    let mut out = Vec::new();
    for &r in rs {
        check_open_unit("r", r)?;
        let lower = sharp_closed_form(r);
        let basic = 1.0 / (1.0 - r);
        let improved = (r < 1.0 / 3.0).then(|| 1.0 / (1.0 - 4.0 * r * r / ((1.0 - r) * (1.0 - r))));
        let mut rep = VerificationReport::new("remark.blocki", DISC).input("r", r).input("basic", basic);
        if let Some(c) = improved {
            rep = rep.input("improved", c);
        }
        out.push(rep.at_most(lower, improved.map_or(basic, |c| c.min(basic))));
        if let Some(c) = improved {
            out.push(VerificationReport::new("remark.blocki.sharper", DISC).input("r", r).at_most(c, basic));
        }
    }
    Ok(out)
}

/// The pieces of `P(f) = g + u` with `g = e^{−ψ} P_ψ(e^ψ f)` and `u`
/// recovered as `g − P(f)` (sign as in the identity's orthogonality form).
#[derive(Debug, Clone, PartialEq)]
pub struct KohnSplit {
    pub projection: DiscFunction,
    pub g: DiscFunction,
    pub u: DiscFunction,
}

pub fn kohn_split(f: &DiscFunction, w: &WeightSpec, resolution: usize) -> Result<KohnSplit> {
    let (b, c) = w.exp_psi();
    let projection = project(f, resolution)?;
    let h = weighted_projection(&f.times_radial(b, c), w, resolution)?;
    let g = h.times_radial(-b, -c);
    let u = g.sub(&projection);
    Ok(KohnSplit { projection, g, u })
}

/// `|∫ u ḡ e^ψ| / ‖g‖²_{e^ψ}`: coefficients at `resolution`, integrals at
/// `2·resolution`.
pub fn kohn_orthogonality_residual(f: &DiscFunction, w: &WeightSpec, resolution: usize) -> Result<f64> {
    let split = kohn_split(f, w, resolution)?;
    let e = w.exp_psi();
    let cross = weighted_inner(&split.u, &split.g, e, 2 * resolution)?.norm();
    let g2 = weighted_norm_sq(&split.g, e, 2 * resolution)?;
    Ok(cross / (g2 + f64::MIN_POSITIVE))
}

/// `(∫|P f|² e^ψ, ∫|g|² e^ψ + ∫|u|² e^ψ)`.
pub fn pythagoras_sides(f: &DiscFunction, w: &WeightSpec, resolution: usize) -> Result<(f64, f64)> {
    let split = kohn_split(f, w, resolution)?;
    let e = w.exp_psi();
    let lhs = weighted_norm_sq(&split.projection, e, 2 * resolution)?;
    let rhs = weighted_norm_sq(&split.g, e, 2 * resolution)? + weighted_norm_sq(&split.u, e, 2 * resolution)?;
    Ok((lhs, rhs))
}

pub fn kohn_reports(f: &DiscFunction, w: &WeightSpec, resolution: usize) -> Result<Vec<VerificationReport>> {
    let residual = kohn_orthogonality_residual(f, w, resolution)?;
    let (lhs, rhs) = pythagoras_sides(f, w, resolution)?;
    let rel = if lhs > 0.0 { ((lhs - rhs) / lhs).abs() } else { (lhs - rhs).abs() };
    Ok(vec![
        weight_inputs(VerificationReport::new("prop2.1.kohn", DISC), w)
            .at_most(residual, 0.0)
            .tolerance(tolerances::KOHN_RESIDUAL),
        weight_inputs(VerificationReport::new("prop2.1.pythagoras", DISC), w)
            .sides(lhs, rhs, -rel)
            .tolerance(tolerances::PYTHAGORAS),
    ])
}

/// `(1 − r) ∫|P f|² δ^{−r} / ∫|f|² δ^{−r}`.
pub fn hardy_weight_ratio(f: &DiscFunction, r: f64, resolution: usize) -> Result<f64> {
    check_open_unit("r", r)?;
    Ok((1.0 - r) * weighted_ratio(f, &WeightSpec::log_delta(r)?, resolution)?)
}

pub fn hardy_weight_check(f: &DiscFunction, r: f64, resolution: usize) -> Result<VerificationReport> {
    let ratio = hardy_weight_ratio(f, r, resolution)?;
    Ok(VerificationReport::new("lemma4.1.fina3", DISC)
        .input("r", r)
        .input("max_mode", f.max_mode() as f64)
        .at_most(ratio, 1.0)
        .tolerance(tolerances::HARDY_WEIGHT_RATIO))
}

/// Test function for the `L²(δ^{−t}) → L^q` check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum CorpusEntry {
    /// `K(·, w)` itself (not truncated), which `P` fixes.
    Kernel {
        w: f64,
    },
    Function(DiscFunction),
}

/// `size` kernels at `δ_j = 2^{−j}` interleaved with `size` random
/// polynomials of degree ≤ 6. Corpora for the same seed are prefixes of
/// one another.
pub fn df_lq_corpus(size: usize, seed: u64) -> Vec<CorpusEntry> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(2 * size);
    for j in 1..=size {
        out.push(CorpusEntry::Kernel { w: 1.0 - 0.5f64.powi(j as i32) });
        out.push(CorpusEntry::Function(DiscFunction::random_polynomial(6, &mut rng)));
    }
    out
}

fn polynomial_lq(coeffs: &[C64], q: f64) -> Result<f64> {
    let m = 8 * (coeffs.len() + 8);
    let rule = TensorRule::new(vec![
        std::sync::Arc::new(gauss_legendre(m)?.on_interval(0.0, 1.0)),
        periodic_trapezoid(2 * m)?,
    ]);
    let v = rule.integrate(|u| {
        let z = C64::from_polar(u[0], u[1]);
        let mut acc = C64::new(0.0, 0.0);
        for c in coeffs.iter().rev() {
            acc = acc * z + c;
        }
        u[0] * acc.norm().powf(q)
    })?;
    Ok(v.powf(1.0 / q))
}

/// `‖P f‖_{L^q} / (∫|f|² δ^{−t})^{1/2}` for one corpus entry.
pub fn df_lq_entry_ratio(entry: &CorpusEntry, t: f64, q: f64, resolution: usize) -> Result<f64> {
    match entry {
        CorpusEntry::Kernel { w } => {
            let x = w.abs();
            let lq = kernel_power_series(DomainModel::UnitDisc, x, q, 0.0)?.0.powf(1.0 / q);
            let l2 = kernel_power_series(DomainModel::UnitDisc, x, 2.0, -t)?.0.sqrt();
            Ok(lq / l2)
        }
        CorpusEntry::Function(f) => {
            let p = project(f, resolution)?;
            let coeffs = p.holomorphic_coefficients().expect("projections are holomorphic polynomials");
            let l2 = weighted_norm_sq(f, (0.0, -t), resolution)?.sqrt();
            Ok(polynomial_lq(&coeffs, q)? / l2)
        }
    }
}

/// Sup of the corpus ratios, compared with the sup over the first half of
/// the corpus: the check passes when doubling the corpus moves the sup by
/// less than a factor [`tolerances::DF_LQ_STABILITY`].
pub fn df_lq_check(corpus: &[CorpusEntry], t: f64, q: f64, resolution: usize) -> Result<VerificationReport> {
    check_open_unit("t", t)?;
    let q_max = 4.0 / (2.0 - t);
    if !(q >= 2.0 && q < q_max) {
        return Err(Error::InvalidArgument(format!("q must lie in [2, 4/(2−t)) = [2, {q_max}), got {q}")));
    }
    if corpus.len() < 2 {
        return Err(Error::InvalidArgument("corpus needs at least two entries".into()));
    }
    let ratios: Vec<f64> = corpus.par_iter().map(|e| df_lq_entry_ratio(e, t, q, resolution)).collect::<Result<_>>()?;
    let sup = |v: &[f64]| v.iter().cloned().fold(0.0f64, |a, b| if b.is_nan() { f64::NAN } else { a.max(b) });
    let half = sup(&ratios[..corpus.len() / 2]);
    let full = sup(&ratios);
    Ok(VerificationReport::new("cor2.3", DISC)
        .input("t", t)
        .input("q", q)
        .input("q_max", q_max)
        .input("corpus_size", corpus.len() as f64)
        .input("sup_half", half)
        .input("sup_full", full)
        .at_most(full / half, tolerances::DF_LQ_STABILITY))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::gamma;

    const RES: usize = radial::DEFAULT_RESOLUTION;

    fn one() -> C64 {
        C64::new(1.0, 0.0)
    }

    #[test]
    fn projection_examples() {
        let p = project(&DiscFunction::constant(one()), RES).unwrap();
        assert!((p.holomorphic_coefficients().unwrap()[0] - one()).norm() < 1e-14);
        // ρ² → mean value 1/2.
        let f = DiscFunction::zero().with_term(0, Term::new(one(), 2.0, 0.0, 0.0));
        let c = project(&f, RES).unwrap().holomorphic_coefficients().unwrap()[0];
        assert!((c.re - 0.5).abs() < 1e-14 && c.im == 0.0);
        // (−log ρ)^{1/2} → Γ(3/2)/2^{1/2}.
        let f = DiscFunction::zero().with_term(0, Term::new(one(), 0.0, 0.5, 0.0));
        let c = project(&f, RES).unwrap().holomorphic_coefficients().unwrap()[0];
        assert!((c.re - gamma(1.5) / 2f64.sqrt()).abs() < 1e-13);
        // Anti-holomorphic modes are killed.
        let f = DiscFunction::zero().with_term(-2, Term::new(one(), 2.0, 0.0, 0.0));
        assert!(project(&f, RES).unwrap().modes.is_empty());
    }

    #[test]
    fn weighted_projection_examples() {
        let w = WeightSpec::log_log(0.5).unwrap();
        let c = weighted_projection(&DiscFunction::constant(one()), &w, RES).unwrap();
        assert!((c.holomorphic_coefficients().unwrap()[0] - one()).norm() < 1e-13);
        // z (−log ρ) under LogLog(1/2): ratio of Γ-type integrals,
        // ∫ρ³(−log ρ)^{3/2} / ∫ρ³(−log ρ)^{1/2} = Γ(5/2)/4^{5/2} · 4^{3/2}/Γ(3/2) = 3/8.
        let f = DiscFunction::zero().with_term(1, Term::new(one(), 1.0, 1.0, 0.0));
        let c = weighted_projection(&f, &w, RES).unwrap().holomorphic_coefficients().unwrap()[1];
        assert!((c.re - 0.375).abs() < 1e-13, "{c}");
    }

    #[test]
    fn sharp_example_values() {
        assert!((sharp_example_ratio(0.5, RES).unwrap() - PI / 2.0).abs() < 1e-10);
        let v = sharp_example_ratio(0.9, RES).unwrap();
        assert!((v - 9.14976).abs() < 1e-5 && v <= 10.0);
        let v = sharp_example_ratio(1e-4, RES).unwrap();
        assert!((v - 1.0).abs() < 1e-7);
        assert!(sharp_example_ratio(1.0, RES).is_err());
    }

    #[test]
    fn blocki_rows() {
        let reps = blocki_remark_check(&[0.1, 0.2, 0.5]).unwrap();
        let ids: Vec<&str> = reps.iter().map(|r| r.statement_id.as_str()).collect();
        assert_eq!(
            ids,
            ["remark.blocki", "remark.blocki.sharper", "remark.blocki", "remark.blocki.sharper", "remark.blocki"]
        );
        assert!(reps[0].pass && reps[1].pass);
        // At r = 0.2 the improved constant 4/3 exceeds 1/(1 − r) = 1.25.
        assert!((reps[3].lhs - 4.0 / 3.0).abs() < 1e-12 && !reps[3].pass);
        assert!(reps[4].pass && reps[4].rhs == 2.0);
    }

    #[test]
    fn holomorphic_inputs() {
        let f = DiscFunction::polynomial(&[one(), C64::new(0.5, -0.25), C64::new(0.0, 0.3)]);
        let w = WeightSpec::log_log(0.3).unwrap();
        assert!((weighted_ratio(&f, &w, RES).unwrap() - 1.0).abs() < 1e-12);
        assert!(kohn_orthogonality_residual(&f, &w, RES).unwrap() < 1e-12);
        let r = hardy_weight_ratio(&DiscFunction::constant(one()), 0.9, RES).unwrap();
        assert!((r - 0.1).abs() < 1e-12);
        let r = hardy_weight_ratio(&DiscFunction::monomial(2, one()), 0.99, RES).unwrap();
        assert!(r <= 1.0 && (r - 0.01).abs() < 1e-10);
    }

    #[test]
    fn df_lq_guards_and_examples() {
        let corpus = df_lq_corpus(8, 7);
        assert!(matches!(df_lq_check(&corpus, 0.5, 3.0, RES), Err(Error::InvalidArgument(_))));
        for q in [2.0, 2.2] {
            let rep = df_lq_check(&corpus, 0.5, q, RES).unwrap();
            assert!(rep.pass && rep.input_value("sup_full").unwrap().is_finite(), "{rep:?}");
        }
        assert_eq!(&df_lq_corpus(16, 7)[..16], &corpus[..]);
    }
}
