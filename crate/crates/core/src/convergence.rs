//! The volume expansion of mean width bodies:
//! `(|K_f[t]| − |K|)/(k_n t^{2/(n+1)}) → ∫ ⟨x,N⟩² κ^{-1/(n+1)} f(y(x))^{-2/(n+1)} dμ`.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{unit_ball_volume, ConvexBody, Direction, DEFAULT_BOUNDARY_GRID};
use crate::meanwidth::{star_volume, volume_difference_radial, MeanWidth, StarBodyApprox};
use crate::quad::periodic_trapezoid;
use crate::weights::Weight;

/// Smallest threshold accepted by the harness.
pub const MIN_T: f64 = 1e-9;

/// `k_n = ½ (n(n+1)|B^n| / (2|B^{n-1}|))^{2/(n+1)}`.
pub fn k_constant(n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidInput(format!("k_n needs n >= 2, got {n}")));
    }
    let nf = n as f64;
    let inner = nf * (nf + 1.0) * unit_ball_volume(n) / (2.0 * unit_ball_volume(n - 1));
    Ok(0.5 * inner.powf(2.0 / (nf + 1.0)))
}

fn check_positive_on_polar_boundary(body: &ConvexBody, f: &Weight) -> Result<()> {
    let samples = body.boundary_samples(DEFAULT_BOUNDARY_GRID)?;
    if let Some(s) = samples.iter().find(|s| !(f.eval(s.point.polar_contact) > 0.0)) {
        return Err(Error::Domain(format!(
            "weight {f} is not positive at y = ({}, {}) on the polar boundary",
            s.point.polar_contact.x, s.point.polar_contact.y
        )));
    }
    Ok(())
}

/// `∫_{∂K} ⟨x,N⟩² κ^{-1/(n+1)} f(y(x))^{-2/(n+1)} dμ_K`.
pub fn theorem1_rhs(body: &ConvexBody, f: &Weight) -> Result<f64> {
    check_positive_on_polar_boundary(body, f)?;
    let n = body.dim() as f64;
    body.boundary_integral(DEFAULT_BOUNDARY_GRID, |bp| {
        bp.support * bp.support
            * bp.curvature.powf(-1.0 / (n + 1.0))
            * f.eval(bp.polar_contact).powf(-2.0 / (n + 1.0))
    })
}

/// The same limit as a sphere integral in the outer normal:
/// `∫_{S^{n-1}} h² f_K^{(n+2)/(n+1)} f(u/h)^{-2/(n+1)} dω`, with `f_K = 1/κ`.
pub fn theorem1_rhs_sphere(body: &ConvexBody, f: &Weight) -> Result<f64> {
    check_positive_on_polar_boundary(body, f)?;
    let n = body.dim() as f64;
    let integrand = |theta: f64| {
        let bp = body
            .boundary_point(&Direction::from_angle(theta))
            .expect("checked C2+ above");
        let fk = 1.0 / bp.curvature;
        bp.support * bp.support
            * fk.powf((n + 2.0) / (n + 1.0))
            * f.eval(bp.polar_contact).powf(-2.0 / (n + 1.0))
    };
    Ok(periodic_trapezoid(integrand, DEFAULT_BOUNDARY_GRID))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LhsOptions {
    /// Initial number of directions.
    pub grid: usize,
    /// Double the grid until the star volume changes by less than
    /// `refine_tolerance`.
    pub refine: bool,
    pub refine_tolerance: f64,
    pub max_grid: usize,
    /// Required relative agreement of the two volume-difference routes.
    pub route_tolerance: f64,
}

impl Default for LhsOptions {
    fn default() -> Self {
        Self {
            grid: 2048,
            refine: true,
            refine_tolerance: 1e-7,
            max_grid: 16384,
            route_tolerance: 1e-6,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub body: String,
    pub weight: String,
    pub k_n: f64,
    pub t_values: Vec<f64>,
    /// `|K_f[t]|` from the radial trapezoid rule.
    pub volumes: Vec<f64>,
    pub diff_star: Vec<f64>,
    pub diff_radial: Vec<f64>,
    pub routes_agree: bool,
    /// `(|K_f[t]| − |K|)/(k_n t^{2/(n+1)})`.
    pub ratios: Vec<f64>,
    pub grid_sizes: Vec<usize>,
    pub extrapolated: f64,
    pub spread: f64,
    pub target: f64,
    pub target_sphere: f64,
    pub rel_error: f64,
}

fn validate_t(t_values: &[f64]) -> Result<()> {
    if t_values.len() < 2 {
        return Err(Error::InvalidInput("at least two t values are required".into()));
    }
    for &t in t_values {
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::InvalidInput(format!("t must be positive and finite, got {t}")));
        }
        if t < MIN_T {
            return Err(Error::InvalidInput(format!(
                "t = {t} is below {MIN_T}, where cap quadrature error dominates"
            )));
        }
    }
    if t_values.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(Error::InvalidInput(format!("t values must be strictly decreasing: {t_values:?}")));
    }
    Ok(())
}

/// Geometric t sequence from `tmax` down to `tmin` with `steps` entries.
pub fn t_sequence(tmax: f64, tmin: f64, steps: usize) -> Result<Vec<f64>> {
    if steps < 2 || !(tmax > tmin && tmin > 0.0) {
        return Err(Error::InvalidInput(format!(
            "need tmax > tmin > 0 and at least two steps, got tmax = {tmax}, tmin = {tmin}, steps = {steps}"
        )));
    }
    let (hi, lo) = (tmax.log10(), tmin.log10());
    let step = (lo - hi) / (steps - 1) as f64;
    Ok((0..steps)
        .map(|k| match k {
            0 => tmax,
            k if k + 1 == steps => tmin,
            k => {
                let e = hi + step * k as f64;
                // snap decades so 1e-4..1e-7 yields exact decimal values
                if (e - e.round()).abs() < 1e-9 && e < 0.0 {
                    1.0 / 10f64.powi(-e.round() as i32)
                } else {
                    10f64.powf(e)
                }
            }
        })
        .collect())
}

fn threshold_error(mw: &MeanWidth, s: &StarBodyApprox) -> Result<()> {
    if let Some(i) = s.unbounded.iter().position(|&u| u) {
        let theta = s.thetas[i];
        return Err(Error::Threshold {
            t: s.t,
            theta,
            ray_limit: mw.ray_limit(theta)?,
        });
    }
    Ok(())
}

/// Interleaves extents on the odd directions of the doubled grid.
fn refine_grid(mw: &MeanWidth, s: &StarBodyApprox) -> Result<StarBodyApprox> {
    let n = s.len();
    let odd: Vec<f64> = (0..n).map(|j| PI * (2 * j + 1) as f64 / n as f64).collect();
    let extra = mw.extents(s.t, &odd)?;
    let mut thetas = Vec::with_capacity(2 * n);
    let mut radii = Vec::with_capacity(2 * n);
    for j in 0..n {
        thetas.push(2.0 * PI * (2 * j) as f64 / (2 * n) as f64);
        radii.push(s.radii[j]);
        thetas.push(odd[j]);
        radii.push(extra[j]);
    }
    Ok(StarBodyApprox::new(thetas, radii, s.t, s.body.clone(), s.weight.clone()))
}

/// Least-squares line `L + c τ` through the last three points, and the
/// two-point value through the last two; returns `(L, |L₃ − L₂|)`.
pub fn extrapolate(taus: &[f64], ratios: &[f64]) -> (f64, f64) {
    let k = taus.len();
    let two = |i: usize| {
        let (t1, t2) = (taus[i], taus[i + 1]);
        (t1 * ratios[i + 1] - t2 * ratios[i]) / (t1 - t2)
    };
    let l2 = two(k - 2);
    if k < 3 {
        return (l2, (l2 - ratios[k - 1]).abs());
    }
    let (xs, ys) = (&taus[k - 3..], &ratios[k - 3..]);
    let mx = xs.iter().sum::<f64>() / 3.0;
    let my = ys.iter().sum::<f64>() / 3.0;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let l3 = my - sxy / sxx * mx;
    (l3, (l3 - l2).abs())
}

/// Runs the t-sequence, extrapolates the ratio and compares with the limit.
pub fn theorem1_lhs(body: &ConvexBody, f: &Weight, t_values: &[f64], options: LhsOptions) -> Result<ConvergenceReport> {
    validate_t(t_values)?;
    if !body.is_smooth() || body.dim() != 2 {
        return Err(Error::Unsupported {
            op: "theorem1_lhs",
            variant: if body.dim() != 2 { "higher-dimensional" } else { body.variant_name() },
        });
    }
    let n = body.dim() as f64;
    let k_n = k_constant(body.dim())?;
    let target = theorem1_rhs(body, f)?;
    let target_sphere = theorem1_rhs_sphere(body, f)?;
    let mw = MeanWidth::new(body, f)?;
    let volume = body.volume();

    let per_t: Vec<Result<(f64, f64, f64, usize)>> = t_values
        .par_iter()
        .map(|&t| {
            let mut s = mw.mean_width_body(t, options.grid)?;
            threshold_error(&mw, &s)?;
            let mut v = star_volume(&s)?;
            if options.refine {
                while s.len() < options.max_grid {
                    let finer = refine_grid(&mw, &s)?;
                    let vf = star_volume(&finer)?;
                    let change = (vf - v).abs();
                    s = finer;
                    v = vf;
                    if change < options.refine_tolerance {
                        break;
                    }
                }
            }
            let radial = volume_difference_radial(body, &s)?;
            log::debug!("t = {t:e}: {} directions, volume difference {radial:e}", s.len());
            Ok((v, v - volume, radial, s.len()))
        })
        .collect();
    let mut volumes = Vec::new();
    let mut diff_star = Vec::new();
    let mut diff_radial = Vec::new();
    let mut grid_sizes = Vec::new();
    for r in per_t {
        let (v, ds, dr, g) = r?;
        volumes.push(v);
        diff_star.push(ds);
        diff_radial.push(dr);
        grid_sizes.push(g);
    }
    let routes_agree = diff_star
        .iter()
        .zip(&diff_radial)
        .all(|(a, b)| (a - b).abs() <= options.route_tolerance * b.abs());
    let taus: Vec<f64> = t_values.iter().map(|t| t.powf(2.0 / (n + 1.0))).collect();
    let ratios: Vec<f64> = diff_radial.iter().zip(&taus).map(|(d, tau)| d / (k_n * tau)).collect();
    let (extrapolated, spread) = extrapolate(&taus, &ratios);
    Ok(ConvergenceReport {
        body: body.to_string(),
        weight: f.to_string(),
        k_n,
        t_values: t_values.to_vec(),
        volumes,
        diff_star,
        diff_radial,
        routes_agree,
        ratios,
        grid_sizes,
        extrapolated,
        spread,
        target,
        target_sphere,
        rel_error: (extrapolated - target).abs() / target.abs(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeReport {
    pub x: [f64; 2],
    pub t_values: Vec<f64>,
    /// `⟨x,N⟩[(‖x_t‖/‖x‖)^n − 1]/(n k_n t^{2/(n+1)})` per t.
    pub values: Vec<f64>,
    /// `⟨x,N⟩² κ^{-1/(n+1)} f(y(x))^{-2/(n+1)}`.
    pub limit: f64,
    /// `max_t values`; finite iff the sequence is bounded on the t grid.
    pub sup: f64,
    pub bounded: bool,
}

/// Pointwise ratio at the boundary point with outer normal angle `theta`.
pub fn pointwise_ratio_probe(body: &ConvexBody, f: &Weight, theta: f64, t_values: &[f64]) -> Result<ProbeReport> {
    for &t in t_values {
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::InvalidInput(format!("t must be positive and finite, got {t}")));
        }
    }
    let bp = body.boundary_point(&Direction::from_angle(theta))?;
    let n = body.dim() as f64;
    let k_n = k_constant(body.dim())?;
    let mw = MeanWidth::new(body, f)?;
    let phi = bp.x.angle();
    let r = bp.x.norm();
    let values: Vec<f64> = t_values
        .par_iter()
        .map(|&t| {
            let rho = mw.radial_extent(t, phi)?;
            let ratio = rho / r - 1.0;
            Ok(bp.support * (n * ratio.ln_1p()).exp_m1() / (n * k_n * t.powf(2.0 / (n + 1.0))))
        })
        .collect::<Result<_>>()?;
    let limit = bp.support * bp.support
        * bp.curvature.powf(-1.0 / (n + 1.0))
        * f.eval(bp.polar_contact).powf(-2.0 / (n + 1.0));
    let sup = values.iter().copied().fold(0.0, f64::max);
    Ok(ProbeReport {
        x: [bp.x.x, bp.x.y],
        t_values: t_values.to_vec(),
        values,
        limit,
        sup,
        bounded: sup.is_finite(),
    })
}

/// Bounds on the volume of the cap of height `delta` at the end of the last
/// axis of the ellipsoid with the given semiaxes.
pub fn ellipsoid_cap_bounds(semiaxes: &[f64], delta: f64) -> Result<(f64, f64)> {
    let n = semiaxes.len();
    if n < 2 || semiaxes.iter().any(|a| !(*a > 0.0 && a.is_finite())) {
        return Err(Error::InvalidInput(format!("invalid semiaxes {semiaxes:?}")));
    }
    let an = semiaxes[n - 1];
    if !(delta > 0.0 && delta < an) {
        return Err(Error::InvalidInput(format!("cap height must lie in (0, {an}), got {delta}")));
    }
    let nf = n as f64;
    let prod: f64 = semiaxes[..n - 1].iter().map(|a| a / an.sqrt()).product();
    let upper = 2f64.powf(0.5 * (nf + 1.0)) * unit_ball_volume(n - 1) / (nf + 1.0) * prod * delta.powf(0.5 * (nf + 1.0));
    let lower = upper * (1.0 - delta / (2.0 * an)).powf(0.5 * (nf - 1.0));
    Ok((lower, upper))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::meanwidth::{cap_region_integral, CapSpec};
    use crate::vec2::Vec2;
    use crate::weights::{const_weight, designed_weight, power_weight, Target};
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn k_constants() {
        assert_relative_eq!(k_constant(2).unwrap(), 1.405_391_833_200_954_5, max_relative = 1e-14);
        assert_relative_eq!(k_constant(3).unwrap(), 2f64.sqrt(), max_relative = 1e-14);
        for n in 2..=10 {
            assert!(k_constant(n).unwrap() > 0.0);
        }
        assert!(k_constant(1).is_err());
    }

    #[test]
    fn rhs_closed_forms() {
        let b = ConvexBody::ball(1.0).unwrap();
        assert_relative_eq!(theorem1_rhs(&b, &const_weight(1.0).unwrap()).unwrap(), 2.0 * PI, max_relative = 1e-14);
        let b2 = ConvexBody::ball(2.0).unwrap();
        let expected = 2.0 * PI * 2f64.powf(10.0 / 3.0 - 2.0);
        assert_relative_eq!(theorem1_rhs(&b2, &power_weight(3.0).unwrap()).unwrap(), expected, max_relative = 1e-13);
        let e = ConvexBody::ellipse(2.0, 1.0).unwrap();
        let f = power_weight(3.0).unwrap();
        assert_relative_eq!(theorem1_rhs(&e, &f).unwrap(), 12.467_418_707_910_013, max_relative = 1e-12);
        assert_relative_eq!(theorem1_rhs_sphere(&e, &f).unwrap(), 12.467_418_707_910_013, max_relative = 1e-12);
        let k = ConvexBody::trig(1.0, vec![0.0, 0.0, 0.1], vec![]).unwrap();
        assert_relative_eq!(theorem1_rhs(&k, &f).unwrap(), 6.754_703_920_656_177, max_relative = 1e-12);
    }

    #[test]
    fn designed_weight_round_trip() {
        let e = ConvexBody::ellipse(2.0, 1.0).unwrap();
        let w = designed_weight(&e, Target::AspIntegrand { p: 2.0 }).unwrap();
        let asp2 = crate::affine::asp(&e, 2.0).unwrap();
        assert_relative_eq!(theorem1_rhs(&e, &w).unwrap(), asp2, max_relative = 1e-8);
        let w0 = designed_weight(&e, Target::AspIntegrand { p: 0.0 }).unwrap();
        assert_relative_eq!(theorem1_rhs(&e, &w0).unwrap(), 4.0 * PI, max_relative = 1e-8);
    }

    #[test]
    fn rhs_rejects_vanishing_weight() {
        let e = ConvexBody::ellipse(2.0, 1.0).unwrap();
        let w = crate::weights::piecewise_halfspace_weight(0.0, 1.0).unwrap();
        assert!(matches!(theorem1_rhs(&e, &w), Err(Error::Domain(_))));
    }

    #[test]
    fn t_validation() {
        let b = ConvexBody::ball(1.0).unwrap();
        let f = const_weight(1.0).unwrap();
        let opts = LhsOptions::default();
        assert!(theorem1_lhs(&b, &f, &[1e-4, 0.0], opts).is_err());
        assert!(theorem1_lhs(&b, &f, &[1e-5, 1e-4], opts).is_err());
        assert!(theorem1_lhs(&b, &f, &[1e-4, 1e-10], opts).is_err());
        assert!(theorem1_lhs(&ConvexBody::square(), &f, &[1e-4, 1e-5], opts).is_err());
    }

    #[test]
    fn t_sequence_is_geometric() {
        let ts = t_sequence(1e-4, 1e-7, 4).unwrap();
        assert_eq!(ts.len(), 4);
        assert_eq!(ts[3], 1e-7);
        assert_relative_eq!(ts[1], 1e-5, max_relative = 1e-12);
    }

    #[test]
    fn extrapolation_recovers_linear_model() {
        let taus = [0.1, 0.01, 0.001];
        let ratios: Vec<f64> = taus.iter().map(|t| 3.0 + 2.0 * t).collect();
        let (l, spread) = extrapolate(&taus, &ratios);
        assert_relative_eq!(l, 3.0, max_relative = 1e-13);
        assert!(spread < 1e-12);
    }

    #[test]
    fn ball_ratio_converges_with_small_grid() {
        let b = ConvexBody::ball(1.0).unwrap();
        let f = const_weight(1.0).unwrap();
        let opts = LhsOptions {
            grid: 32,
            refine: false,
            ..LhsOptions::default()
        };
        let r = theorem1_lhs(&b, &f, &[1e-4, 1e-5, 1e-6], opts).unwrap();
        assert!(r.routes_agree);
        assert!(r.rel_error < 0.01, "{r:?}");
    }

    #[test]
    fn probe_at_ellipse_vertex() {
        let e = ConvexBody::ellipse(2.0, 1.0).unwrap();
        let r = pointwise_ratio_probe(&e, &const_weight(1.0).unwrap(), 0.0, &[1e-5, 1e-6, 1e-7]).unwrap();
        assert_relative_eq!(r.limit, 4.0 * 2f64.powf(-1.0 / 3.0), max_relative = 1e-13);
        assert!((r.values[2] / r.limit - 1.0).abs() < 0.01, "{r:?}");
        assert!(r.bounded);
    }

    #[test]
    fn cap_bounds_for_unit_disk() {
        let (lo, hi) = ellipsoid_cap_bounds(&[1.0, 1.0], 0.5).unwrap();
        let exact = PI / 3.0 - 3f64.sqrt() / 4.0;
        assert_relative_eq!(lo, 0.577_350_269_189_625_8, max_relative = 1e-12);
        assert_relative_eq!(hi, 2.0 / 3.0, max_relative = 1e-12);
        assert!(lo <= exact && exact <= hi);
        assert!(ellipsoid_cap_bounds(&[1.0, 1.0], 1.0).is_err());
        let (lo, hi) = ellipsoid_cap_bounds(&[2.0, 1.0], 1e-12).unwrap();
        assert!(lo > 0.0 && hi < 1e-15);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]
        #[test]
        fn ellipse_cap_sandwich(a1 in 0.2f64..5.0, a2 in 0.2f64..5.0, frac in 0.001f64..0.999) {
            let delta = frac * a2;
            let (lo, hi) = ellipsoid_cap_bounds(&[a1, a2], delta).unwrap();
            let polar_body = ConvexBody::ellipse(a1, a2).unwrap();
            let apex = Vec2::new(0.0, 1.0 / (a2 - delta));
            let mass = cap_region_integral(&polar_body, &CapSpec::new(apex).unwrap(), &const_weight(1.0).unwrap()).unwrap();
            let area = PI * mass;
            prop_assert!(lo * (1.0 - 1e-10) <= area && area <= hi * (1.0 + 1e-10), "{lo} {area} {hi}");
        }
    }
}
