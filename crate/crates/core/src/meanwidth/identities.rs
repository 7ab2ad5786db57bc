//! Width differences of nested bodies as region integrals over polars and as
//! spherical integrals of support functions.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{ConvexBody, Shape};
use crate::quad::{adaptive, gauss_legendre_composite, pairwise_sum, Tolerance};
use crate::weights::Weight;

use super::cap::normalization;

fn sphere_tolerance() -> Tolerance {
    Tolerance {
        abs: 1e-15,
        rel: 1e-13,
        max_intervals: 2000,
    }
}

fn check_nested(k: &ConvexBody, m: &ConvexBody) -> Result<()> {
    if k.dim() != 2 || m.dim() != 2 {
        return Err(Error::Unsupported {
            op: "width difference",
            variant: "higher-dimensional",
        });
    }
    if !m.contains_body(k) {
        return Err(Error::Domain(format!("{k} is not contained in {m}")));
    }
    Ok(())
}

fn angular_breaks(k: &ConvexBody, m: &ConvexBody, f: &Weight) -> Vec<f64> {
    let mut b: Vec<f64> = k.support_kinks();
    b.extend(m.support_kinks());
    b.extend(f.angular_breaks());
    b.into_iter().map(|a| a.rem_euclid(2.0 * PI)).collect()
}

/// `W_f(M) − W_f(K)` for `K ⊆ M` and an α-homogeneous `f`, from the spherical
/// formulas: `(2/(α+n))∫ f(u)[h_K^{-(α+n)} − h_M^{-(α+n)}] dσ` and, for
/// `α = −n`, `2∫ f(u) log(h_M/h_K) dσ` (σ the normalized sphere measure).
pub fn width_f_difference_sphere(k: &ConvexBody, m: &ConvexBody, f: &Weight) -> Result<f64> {
    let alpha = f.homogeneity().ok_or(Error::Unsupported {
        op: "width_f_difference_sphere",
        variant: "weight without homogeneity",
    })?;
    check_nested(k, m)?;
    let n = 2.0;
    let e = alpha + n;
    let integrand = |phi: f64| {
        let amp = f.radial_profile(phi).0;
        let (hk, hm) = (k.support_angle(phi), m.support_angle(phi));
        if e == 0.0 {
            2.0 * amp * (hm / hk).ln()
        } else {
            2.0 / e * amp * (hk.powf(-e) - hm.powf(-e))
        }
    };
    let q = adaptive(integrand, 0.0, 2.0 * PI, &angular_breaks(k, m, f), sphere_tolerance());
    Ok(q.value / (2.0 * PI))
}

/// `(2/ω(S^{n-1}))∫_{K°∖M°} f` by direct quadrature in polar coordinates
/// (Gauss-Legendre along rays, adaptive in the angle).
pub fn region_integral_between(k: &ConvexBody, m: &ConvexBody, f: &Weight) -> Result<f64> {
    check_nested(k, m)?;
    let integrand = |phi: f64| {
        let (s0, s1) = (1.0 / m.support_angle(phi), 1.0 / k.support_angle(phi));
        if s1 <= s0 {
            return 0.0;
        }
        let v = crate::vec2::Vec2::polar(phi);
        gauss_legendre_composite(|s| f.eval(v * s) * s, s0, s1, 24, 4)
    };
    let q = adaptive(integrand, 0.0, 2.0 * PI, &angular_breaks(k, m, f), sphere_tolerance());
    Ok(normalization() * q.value)
}

/// Both sides of `∫_{K°∖M°} h_K^{-n} / |K°| = D(P_K‖P_M) + log(|K°|/|M°|)`
/// with the sphere densities `p_K = 1/(n|K°| h_K^n)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EntropyIdentity {
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
    pub dkl: f64,
}

pub fn entropy_identity_check(k: &ConvexBody, m: &ConvexBody, grid: usize) -> Result<EntropyIdentity> {
    check_nested(k, m)?;
    if grid < 8 {
        return Err(Error::InvalidInput(format!("quadrature grid too small: {grid}")));
    }
    let n = 2.0;
    if let (Shape::Ball { radius: rk }, Shape::Ball { radius: rm }) = (k.shape(), m.shape()) {
        // h constant: both sides reduce to n log(rm/rk)
        let side = n * (rm / rk).ln();
        return Ok(EntropyIdentity {
            lhs: side,
            rhs: side,
            residual: 0.0,
            dkl: 0.0,
        });
    }
    let vk = k.polar()?.volume();
    let vm = m.polar()?.volume();
    let step = 2.0 * PI / grid as f64;
    let mut lhs_terms = Vec::with_capacity(grid);
    let mut dkl_terms = Vec::with_capacity(grid);
    for j in 0..grid {
        let phi = j as f64 * step;
        let (hk, hm) = (k.support_angle(phi), m.support_angle(phi));
        let (s0, s1) = (1.0 / hm, 1.0 / hk);
        let radial = if s1 > s0 {
            gauss_legendre_composite(|s| (s * hk).powf(-n) * s, s0, s1, 24, 2)
        } else {
            0.0
        };
        lhs_terms.push(radial * step);
        let pk = 1.0 / (n * vk * hk.powf(n));
        let pm = 1.0 / (n * vm * hm.powf(n));
        dkl_terms.push(pk * (pk / pm).ln() * step);
    }
    let lhs = pairwise_sum(&lhs_terms) / vk;
    let dkl = pairwise_sum(&dkl_terms);
    let rhs = dkl + (vk / vm).ln();
    Ok(EntropyIdentity {
        lhs,
        rhs,
        residual: (lhs - rhs).abs(),
        dkl,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights::{const_weight, power_weight};
    use approx::assert_relative_eq;

    #[test]
    fn annulus_width_difference() {
        let (b1, b2) = (ConvexBody::ball(1.0).unwrap(), ConvexBody::ball(2.0).unwrap());
        let f = power_weight(0.0).unwrap();
        assert_relative_eq!(width_f_difference_sphere(&b1, &b2, &f).unwrap(), 0.75, max_relative = 1e-14);
        assert_relative_eq!(region_integral_between(&b1, &b2, &f).unwrap(), 0.75, max_relative = 1e-13);
        let log = power_weight(2.0).unwrap();
        assert_relative_eq!(width_f_difference_sphere(&b1, &b2, &log).unwrap(), 2.0 * 2f64.ln(), max_relative = 1e-14);
        assert_eq!(width_f_difference_sphere(&b1, &b1, &f).unwrap(), 0.0);
    }

    #[test]
    fn sphere_and_region_forms_agree_on_ellipse() {
        let k = ConvexBody::ball(1.0).unwrap();
        let m = ConvexBody::ellipse(2.0, 1.0).unwrap();
        for beta in [0.0, 1.0, 2.0, 3.5] {
            let f = power_weight(beta).unwrap();
            let a = width_f_difference_sphere(&k, &m, &f).unwrap();
            let b = region_integral_between(&k, &m, &f).unwrap();
            assert_relative_eq!(a, b, max_relative = 1e-10);
        }
    }

    #[test]
    fn nesting_required() {
        let k = ConvexBody::ball(1.5).unwrap();
        let m = ConvexBody::ellipse(2.0, 1.0).unwrap();
        assert!(matches!(width_f_difference_sphere(&k, &m, &const_weight(1.0).unwrap()), Err(Error::Domain(_))));
        assert!(entropy_identity_check(&k, &m, 64).is_err());
    }

    #[test]
    fn entropy_identity_on_ellipse_matches_oracle() {
        let k = ConvexBody::ball(1.0).unwrap();
        let m = ConvexBody::ellipse(2.0, 1.0).unwrap();
        let r = entropy_identity_check(&k, &m, 8192).unwrap();
        assert_relative_eq!(r.lhs, 0.810_930_216_216_328_8, max_relative = 1e-12);
        assert_relative_eq!(r.dkl, 0.117_783_035_656_383_46, max_relative = 1e-12);
        assert!(r.residual <= 1e-12);
        let balls = entropy_identity_check(&k, &ConvexBody::ball(3.0).unwrap(), 64).unwrap();
        assert_eq!(balls.residual, 0.0);
        assert_relative_eq!(balls.lhs, 2.0 * 3f64.ln(), max_relative = 1e-15);
    }
}
