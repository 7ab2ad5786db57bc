//! L_p-affine surface areas, relative entropies of cone measures and Ω_K.
//!
//! With `L = log(⟨x,N⟩^{n+1}/κ)` and `ε = n/(n+p)` the affine surface area
//! factors as `as_p(K) = n|K°| · E_P[e^{εL}]`, where `P` is the cone measure of
//! K° pulled back to ∂K. Evaluating `log Ω_p = (n/ε) log E_P[e^{εL}]` through
//! `expm1`/`ln_1p` keeps the large-`p` sequence free of cancellation.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{unit_ball_volume, BoundarySample, ConvexBody, Shape, DEFAULT_BOUNDARY_GRID};
use crate::quad::pairwise_sum;

/// Default `p` values for the Ω_K extrapolation: `2^4, ..., 2^12`.
pub fn default_p_list() -> Vec<f64> {
    (4..=12).map(|k| 2f64.powi(k)).collect()
}

/// Smallest admissible `|p + n|`.
pub const POLE_GUARD: f64 = 0.5;

/// `as_p(K) = ∫ κ^{p/(n+p)} ⟨x,N⟩^{-n(p-1)/(n+p)} dμ`; `p = ±∞` gives
/// `∫ κ/⟨x,N⟩^n dμ`.
pub fn asp(body: &ConvexBody, p: f64) -> Result<f64> {
    asp_with_grid(body, p, DEFAULT_BOUNDARY_GRID)
}

pub fn asp_with_grid(body: &ConvexBody, p: f64, grid: usize) -> Result<f64> {
    let n = body.dim();
    let nf = n as f64;
    if p.is_nan() {
        return Err(Error::InvalidInput("p is NaN".into()));
    }
    if p == -nf {
        return Err(Error::Pole { p, n });
    }
    let exponent = |a: f64| if p.is_infinite() { a } else { a * (nf - p) / (nf + p) };
    match body.shape() {
        // as_p(T B) = |det T|^{(n-p)/(n+p)} as_p(B) with as_p(B) = n|B|
        Shape::Ball { radius } if n > 2 => {
            return Ok(nf * unit_ball_volume(n) * radius.powf(exponent(nf)));
        }
        Shape::Ellipsoid { semiaxes, .. } if n > 2 => {
            let det: f64 = semiaxes.iter().product();
            return Ok(nf * unit_ball_volume(n) * det.powf(exponent(1.0)));
        }
        _ => {}
    }
    body.boundary_integral(grid, |bp| {
        if p.is_infinite() {
            bp.curvature / bp.support.powf(nf)
        } else {
            bp.curvature.powf(p / (nf + p)) * bp.support.powf(-nf * (p - 1.0) / (nf + p))
        }
    })
}

/// Boundary samples with both cone-measure densities.
struct DensityGrid {
    p: Vec<f64>,
    q: Vec<f64>,
    /// `log(⟨x,N⟩^{n+1}/κ)`.
    l: Vec<f64>,
    weight: Vec<f64>,
}

fn density_grid(body: &ConvexBody, grid: usize) -> Result<DensityGrid> {
    let samples: Vec<BoundarySample> = body.boundary_samples(grid)?;
    let n = body.dim();
    let nf = n as f64;
    let volume = body.volume();
    let polar_volume = body.polar()?.volume();
    let mut g = DensityGrid {
        p: Vec::with_capacity(grid),
        q: Vec::with_capacity(grid),
        l: Vec::with_capacity(grid),
        weight: Vec::with_capacity(grid),
    };
    for s in &samples {
        let bp = &s.point;
        g.p.push(bp.curvature / (bp.support.powi(n as i32) * nf * polar_volume));
        g.q.push(bp.support / (nf * volume));
        g.l.push((nf + 1.0) * bp.support.ln() - bp.curvature.ln());
        g.weight.push(s.weight);
    }
    Ok(g)
}

fn integrate(values: impl Iterator<Item = f64>, weights: &[f64]) -> f64 {
    let terms: Vec<f64> = values.zip(weights).map(|(v, w)| v * w).collect();
    pairwise_sum(&terms)
}

/// `(D(P_K‖Q_K), D(Q_K‖P_K))` by boundary quadrature.
pub fn kl_boundary(body: &ConvexBody) -> Result<(f64, f64)> {
    kl_boundary_with_grid(body, DEFAULT_BOUNDARY_GRID)
}

pub fn kl_boundary_with_grid(body: &ConvexBody, grid: usize) -> Result<(f64, f64)> {
    body.check_centered();
    let g = density_grid(body, grid)?;
    let mass_p = integrate(g.p.iter().copied(), &g.weight);
    let mass_q = integrate(g.q.iter().copied(), &g.weight);
    if (mass_p - 1.0).abs() > 1e-8 || (mass_q - 1.0).abs() > 1e-8 {
        return Err(Error::Numeric(format!(
            "cone densities integrate to {mass_p} and {mass_q}, expected 1"
        )));
    }
    let dpq = integrate(g.p.iter().zip(&g.q).map(|(p, q)| p * (p / q).ln()), &g.weight);
    let dqp = integrate(g.p.iter().zip(&g.q).map(|(p, q)| q * (q / p).ln()), &g.weight);
    Ok((dpq, dqp))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OmegaEstimate {
    /// Richardson-extrapolated Ω_K.
    pub value: f64,
    /// Difference of the last two Richardson values (or of the last
    /// extrapolation and the last raw term).
    pub spread: f64,
    /// `(p, (as_p/(n|K°|))^{n+p})`.
    pub sequence: Vec<(f64, f64)>,
    /// `exp(n E_P[L])`, the closed-form limit of the sequence.
    pub direct: f64,
}

/// Ω_K from `(as_p(K)/(n|K°|))^{n+p}` on an increasing `p_list`,
/// extrapolated in `1/p`.
pub fn omega(body: &ConvexBody, p_list: &[f64]) -> Result<OmegaEstimate> {
    omega_with_grid(body, p_list, DEFAULT_BOUNDARY_GRID)
}

pub fn omega_with_grid(body: &ConvexBody, p_list: &[f64], grid: usize) -> Result<OmegaEstimate> {
    let n = body.dim() as f64;
    if p_list.len() < 2 {
        return Err(Error::InvalidInput("omega needs at least two p values".into()));
    }
    if p_list.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidInput(format!("p list must be strictly increasing: {p_list:?}")));
    }
    if let Some(p) = p_list.iter().find(|p| !p.is_finite() || (*p + n).abs() < POLE_GUARD) {
        return Err(Error::InvalidInput(format!(
            "p = {p} is not finite or lies within {POLE_GUARD} of the pole -n"
        )));
    }
    let (log_seq, direct) = match ellipsoid_omega(body) {
        Some(log_omega) => (vec![log_omega; p_list.len()], log_omega.exp()),
        None => {
            let g = density_grid(body, grid)?;
            // E_P[·] with the discrete P normalized on the same grid
            let total = integrate(g.p.iter().copied(), &g.weight);
            let mean_l = integrate(g.p.iter().zip(&g.l).map(|(p, l)| p * l), &g.weight) / total;
            let seq: Vec<f64> = p_list
                .par_iter()
                .map(|&p| {
                    let eps = n / (n + p);
                    let m = integrate(
                        g.p.iter().zip(&g.l).map(|(pd, l)| pd * (eps * l).exp_m1()),
                        &g.weight,
                    ) / total;
                    (n / eps) * m.ln_1p()
                })
                .collect();
            (seq, (n * mean_l).exp())
        }
    };
    Ok(finish_omega(p_list, &log_seq, direct))
}

fn finish_omega(p_list: &[f64], log_seq: &[f64], direct: f64) -> OmegaEstimate {
    let k = p_list.len();
    let rich = |i: usize| {
        let (p1, p2) = (p_list[i], p_list[i + 1]);
        (p2 * log_seq[i + 1] - p1 * log_seq[i]) / (p2 - p1)
    };
    let last = rich(k - 2);
    let spread = if k >= 3 {
        (last.exp() - rich(k - 3).exp()).abs()
    } else {
        (last.exp() - log_seq[k - 1].exp()).abs()
    };
    OmegaEstimate {
        value: last.exp(),
        spread,
        sequence: p_list.iter().zip(log_seq).map(|(p, l)| (*p, l.exp())).collect(),
        direct,
    }
}

/// `log Ω` for balls and ellipsoids, where `⟨x,N⟩^{n+1}/κ = (∏a_i)²`.
fn ellipsoid_omega(body: &ConvexBody) -> Option<f64> {
    let n = body.dim() as f64;
    match body.shape() {
        Shape::Ball { radius } => Some(2.0 * n * n * radius.ln()),
        Shape::Ellipsoid { semiaxes, .. } if body.dim() > 2 => {
            Some(2.0 * n * semiaxes.iter().map(|a| a.ln()).sum::<f64>())
        }
        _ => None,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntropyReport {
    pub dkl_pq: f64,
    pub dkl_qp: f64,
    pub omega: f64,
    pub omega_spread: f64,
    pub omega_polar: f64,
    pub omega_polar_spread: f64,
    /// `|D(P‖Q) − log(|K|/|K°| Ω_K^{-1/n})|`.
    pub residual_eq1: f64,
    /// `|D(Q‖P) − log(|K°|/|K| Ω_{K°}^{-1/n})|`.
    pub residual_eq2: f64,
    pub volume: f64,
    pub polar_volume: f64,
}

/// Both divergences, Ω_K, Ω_{K°} and the residuals of the two identities.
pub fn verify_prop3(body: &ConvexBody) -> Result<EntropyReport> {
    verify_prop3_with(body, &default_p_list(), DEFAULT_BOUNDARY_GRID)
}

pub fn verify_prop3_with(body: &ConvexBody, p_list: &[f64], grid: usize) -> Result<EntropyReport> {
    let n = body.dim() as f64;
    let polar = body.polar()?;
    let volume = body.volume();
    let polar_volume = polar.volume();
    match body.shape() {
        Shape::Ball { radius } => {
            // every term is a multiple of log r: residuals vanish identically
            let e = 2 * body.dim() as i32 * body.dim() as i32;
            return Ok(EntropyReport {
                dkl_pq: 0.0,
                dkl_qp: 0.0,
                omega: radius.powi(e),
                omega_spread: 0.0,
                omega_polar: radius.powi(-e),
                omega_polar_spread: 0.0,
                residual_eq1: 0.0,
                residual_eq2: 0.0,
                volume,
                polar_volume,
            });
        }
        Shape::Ellipsoid { .. } if body.dim() > 2 => {
            let om = omega_with_grid(body, p_list, grid)?;
            let op = omega_with_grid(&polar, p_list, grid)?;
            let r1 = ((volume / polar_volume).ln() - om.value.ln() / n).abs();
            let r2 = ((polar_volume / volume).ln() - op.value.ln() / n).abs();
            return Ok(EntropyReport {
                dkl_pq: 0.0,
                dkl_qp: 0.0,
                omega: om.value,
                omega_spread: om.spread,
                omega_polar: op.value,
                omega_polar_spread: op.spread,
                residual_eq1: r1,
                residual_eq2: r2,
                volume,
                polar_volume,
            });
        }
        _ => {}
    }
    let (dpq, dqp) = kl_boundary_with_grid(body, grid)?;
    let om = omega_with_grid(body, p_list, grid)?;
    let op = omega_with_grid(&polar, p_list, grid)?;
    let rhs1 = (volume / polar_volume).ln() - om.value.ln() / n;
    let rhs2 = (polar_volume / volume).ln() - op.value.ln() / n;
    Ok(EntropyReport {
        dkl_pq: dpq,
        dkl_qp: dqp,
        omega: om.value,
        omega_spread: om.spread,
        omega_polar: op.value,
        omega_polar_spread: op.spread,
        residual_eq1: (dpq - rhs1).abs(),
        residual_eq2: (dqp - rhs2).abs(),
        volume,
        polar_volume,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn trig_body() -> ConvexBody {
        ConvexBody::trig(1.0, vec![0.0, 0.0, 0.1], vec![]).unwrap()
    }

    #[test]
    fn asp_ellipse_values() {
        let e = ConvexBody::ellipse(2.0, 1.0).unwrap();
        assert_relative_eq!(asp(&e, 0.0).unwrap(), 4.0 * PI, max_relative = 1e-13);
        assert_relative_eq!(asp(&e, 2.0).unwrap(), 2.0 * PI, max_relative = 1e-13);
        assert_relative_eq!(asp(&e, 1.0).unwrap(), 7.916_317_428_905_746, max_relative = 1e-13);
        assert_relative_eq!(asp(&e, -1.0).unwrap(), 16.0 * PI, max_relative = 1e-13);
        assert_relative_eq!(asp(&e, 10.0).unwrap(), 3.958_158_714_452_873, max_relative = 1e-13);
        assert_relative_eq!(asp(&e, f64::INFINITY).unwrap(), PI, max_relative = 1e-13);
        assert!(matches!(asp(&e, -2.0), Err(Error::Pole { .. })));
    }

    #[test]
    fn asp_ball_closed_form_in_three_dimensions() {
        let b = ConvexBody::ball_nd(2.0, 3).unwrap();
        let expected = 3.0 * 4.0 / 3.0 * PI * 2f64.powf(3.0 * (3.0 - 1.0) / 4.0);
        assert_relative_eq!(asp(&b, 1.0).unwrap(), expected, max_relative = 1e-14);
    }

    #[test]
    fn trig_body_regression_values() {
        let k = trig_body();
        assert_relative_eq!(asp(&k, 1.0).unwrap(), 6.020_720_736_098_619, max_relative = 1e-12);
        let (dpq, dqp) = kl_boundary(&k).unwrap();
        assert_relative_eq!(dpq, 0.106_743_739_433_177_77, max_relative = 1e-11);
        assert_relative_eq!(dqp, 0.085_524_554_244_695_99, max_relative = 1e-11);
        let om = omega(&k, &default_p_list()).unwrap();
        assert_relative_eq!(om.direct, 0.722_323_286_213_542_5, max_relative = 1e-11);
        assert!((om.value - om.direct).abs() < 1e-5);
    }

    #[test]
    fn ellipse_divergences_vanish() {
        let e = ConvexBody::ellipse(2.0, 1.0).unwrap();
        let (dpq, dqp) = kl_boundary(&e).unwrap();
        assert!(dpq.abs() < 1e-13 && dqp.abs() < 1e-13);
        let om = omega(&e, &default_p_list()).unwrap();
        assert_relative_eq!(om.value, 16.0, max_relative = 1e-10);
    }

    #[test]
    fn omega_input_validation() {
        let e = ConvexBody::ellipse(2.0, 1.0).unwrap();
        assert!(omega(&e, &[4.0, 2.0]).is_err());
        assert!(omega(&e, &[-2.2, 8.0]).is_err());
        assert!(omega(&e, &[4.0]).is_err());
    }

    #[test]
    fn ball_report_is_exact() {
        let r = verify_prop3(&ConvexBody::ball(2.0).unwrap()).unwrap();
        assert_eq!(r.omega, 256.0);
        assert_eq!((r.dkl_pq, r.dkl_qp, r.residual_eq1, r.residual_eq2), (0.0, 0.0, 0.0, 0.0));
        let om = omega(&ConvexBody::ball(2.0).unwrap(), &default_p_list()).unwrap();
        assert_relative_eq!(om.value, 256.0, max_relative = 1e-13);
    }

    #[test]
    fn trig_report_residuals_small() {
        let r = verify_prop3(&trig_body()).unwrap();
        assert!(r.residual_eq1 < 1e-5, "{r:?}");
        assert!(r.residual_eq2 < 1e-5, "{r:?}");
    }
}
