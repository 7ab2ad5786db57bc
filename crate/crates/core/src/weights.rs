//! Weight functions `f` on the polar body.
//!
//! Every weight here has the radial profile `f(s·v(φ)) = A(φ)·s^α`, which lets
//! cap integrals do the radial integration in closed form and leaves only an
//! angular quadrature.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::geometry::{cone_densities_at, BoundaryPoint, ConvexBody, Direction, DEFAULT_BOUNDARY_GRID};
use crate::vec2::Vec2;

/// Boundary density `g(x)` that a designed weight reproduces as the limit
/// integrand of the volume expansion.
#[derive(Clone)]
pub enum Target {
    /// `κ^{p/(n+p)} ⟨x,N⟩^{-n(p-1)/(n+p)}`; `p = ±∞` gives `κ/⟨x,N⟩^n`.
    AspIntegrand { p: f64 },
    /// `κ/⟨x,N⟩^n · [log(p_K/q_K) + 2n log(R/r)]`.
    Ent1,
    /// `⟨x,N⟩ · [log(p_K/q_K) + 2n log(R/r)]`.
    Ent2,
    Custom(Arc<dyn Fn(&BoundaryPoint) -> f64 + Send + Sync>),
}

impl fmt::Debug for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Target::AspIntegrand { p } => write!(f, "AspIntegrand {{ p: {p} }}"),
            Target::Ent1 => f.write_str("Ent1"),
            Target::Ent2 => f.write_str("Ent2"),
            Target::Custom(_) => f.write_str("Custom"),
        }
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Target::AspIntegrand { p } => write!(f, "asp:p={}", fmt_extended(*p)),
            Target::Ent1 => f.write_str("ent1"),
            Target::Ent2 => f.write_str("ent2"),
            Target::Custom(_) => f.write_str("custom"),
        }
    }
}

fn fmt_extended(p: f64) -> String {
    if p == f64::INFINITY {
        "inf".into()
    } else if p == f64::NEG_INFINITY {
        "-inf".into()
    } else {
        p.to_string()
    }
}

/// Weight built from a target density on the boundary of a C²₊ body `K`.
/// Defined on K° and constant along rays from the origin.
pub struct DesignedWeight {
    body: ConvexBody,
    target: Target,
    volume: f64,
    polar_volume: f64,
    log_offset: f64,
    floor: f64,
}

impl fmt::Debug for DesignedWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DesignedWeight")
            .field("body", &self.body.to_string())
            .field("target", &self.target)
            .finish()
    }
}

impl DesignedWeight {
    pub fn body(&self) -> &ConvexBody {
        &self.body
    }

    pub fn target(&self) -> &Target {
        &self.target
    }

    /// `g(x)` at a boundary point of K.
    pub fn target_value(&self, bp: &BoundaryPoint) -> f64 {
        let n = self.body.dim() as f64;
        match &self.target {
            Target::AspIntegrand { p } if p.is_infinite() => bp.curvature / bp.support.powf(n),
            Target::AspIntegrand { p } => {
                bp.curvature.powf(p / (n + p)) * bp.support.powf(-n * (p - 1.0) / (n + p))
            }
            Target::Ent1 | Target::Ent2 => {
                let d = cone_densities_at(bp, self.volume, self.polar_volume, self.body.dim());
                let log_term = (d.p / d.q).ln() + self.log_offset;
                match self.target {
                    Target::Ent1 => bp.curvature / bp.support.powf(n) * log_term,
                    _ => bp.support * log_term,
                }
            }
            Target::Custom(g) => g(bp),
        }
    }

    /// Boundary value `F(θ) = [⟨x,N⟩² κ^{-1/(n+1)} / g(x)]^{(n+1)/2}` at the
    /// point of ∂K with outer normal angle `theta`.
    pub fn profile(&self, theta: f64) -> f64 {
        let bp = self
            .body
            .boundary_point(&Direction::from_angle(theta))
            .expect("designed weights are built on C2+ bodies");
        let n = self.body.dim() as f64;
        let g = self.target_value(&bp);
        (bp.support * bp.support * bp.curvature.powf(-1.0 / (n + 1.0)) / g).powf(0.5 * (n + 1.0))
    }
}

#[derive(Debug, Clone)]
pub enum Weight {
    /// `‖ξ‖^{-β}`.
    Power { beta: f64 },
    Const { value: f64 },
    /// `top` on `{ξ_n ≥ 0}`, `bottom` elsewhere.
    Piecewise { top: f64, bottom: f64 },
    Designed(Arc<DesignedWeight>),
}

pub fn power_weight(beta: f64) -> Result<Weight> {
    if !beta.is_finite() {
        return Err(Error::InvalidInput(format!("power exponent must be finite, got {beta}")));
    }
    Ok(Weight::Power { beta })
}

pub fn const_weight(value: f64) -> Result<Weight> {
    if !(value >= 0.0 && value.is_finite()) {
        return Err(Error::InvalidInput(format!("constant weight must be finite and >= 0, got {value}")));
    }
    Ok(Weight::Const { value })
}

pub fn piecewise_halfspace_weight(top: f64, bottom: f64) -> Result<Weight> {
    for v in [top, bottom] {
        if !(v >= 0.0 && v.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "piecewise weight values must be finite and >= 0, got {v}"
            )));
        }
    }
    Ok(Weight::Piecewise { top, bottom })
}

/// Weight on K° whose limit integrand in the volume expansion is `g`.
/// Entropy targets carry the offset `2n log(R/r)` of the body's extreme radii
/// of curvature.
pub fn designed_weight(body: &ConvexBody, target: Target) -> Result<Weight> {
    let offset = match target {
        Target::Ent1 | Target::Ent2 => {
            let (r, big_r) = body.principal_radii_extremes()?;
            2.0 * body.dim() as f64 * (big_r / r).ln()
        }
        _ => 0.0,
    };
    build_designed(body, target, offset)
}

fn build_designed(body: &ConvexBody, target: Target, log_offset: f64) -> Result<Weight> {
    if body.dim() != 2 || !body.is_smooth() {
        return Err(Error::Unsupported {
            op: "designed_weight",
            variant: if body.dim() != 2 { "higher-dimensional" } else { body.variant_name() },
        });
    }
    let mut w = DesignedWeight {
        body: body.clone(),
        target,
        volume: body.volume(),
        polar_volume: body.polar()?.volume(),
        log_offset,
        floor: 0.0,
    };
    let n = DEFAULT_BOUNDARY_GRID;
    let mut floor = f64::INFINITY;
    for j in 0..n {
        let theta = 2.0 * PI * j as f64 / n as f64;
        let bp = body.boundary_point(&Direction::from_angle(theta))?;
        let g = w.target_value(&bp);
        if !(g > 0.0 && g.is_finite()) {
            return Err(Error::Domain(format!(
                "target density {} at theta = {theta}; designed weights need g > 0",
                g
            )));
        }
        floor = floor.min(w.profile(theta));
    }
    w.floor = floor;
    Ok(Weight::Designed(Arc::new(w)))
}

/// The two entropy weights of a body together with their target values.
#[derive(Debug, Clone)]
pub struct EntropyWeights {
    /// `None` for balls: both identities hold as `0 = 0`.
    pub weights: Option<(Weight, Weight)>,
    pub degenerate: bool,
    /// `n|K°|[D(P‖Q) + 2n log(R/r)]` and `n|K|[2n log(R/r) − D(Q‖P)]`.
    pub targets: (f64, f64),
    pub r: f64,
    pub big_r: f64,
}

pub fn entropy_weights(body: &ConvexBody) -> Result<EntropyWeights> {
    let (r, big_r) = body.principal_radii_extremes()?;
    if body.dim() != 2 {
        return Err(Error::Unsupported {
            op: "entropy_weights",
            variant: "higher-dimensional",
        });
    }
    if big_r - r <= 1e-12 * big_r {
        return Ok(EntropyWeights {
            weights: None,
            degenerate: true,
            targets: (0.0, 0.0),
            r,
            big_r,
        });
    }
    let offset = 2.0 * body.dim() as f64 * (big_r / r).ln();
    let w1 = build_designed(body, Target::Ent1, offset)?;
    let w2 = build_designed(body, Target::Ent2, offset)?;
    let target = |w: &Weight| -> Result<f64> {
        let Weight::Designed(d) = w else { unreachable!() };
        body.boundary_integral(DEFAULT_BOUNDARY_GRID, |bp| d.target_value(bp))
    };
    let targets = (target(&w1)?, target(&w2)?);
    Ok(EntropyWeights {
        weights: Some((w1, w2)),
        degenerate: false,
        targets,
        r,
        big_r,
    })
}

impl Weight {
    pub fn eval(&self, xi: Vec2) -> f64 {
        match self {
            Weight::Power { beta } => xi.norm().powf(-beta),
            Weight::Const { value } => *value,
            Weight::Piecewise { top, bottom } => {
                if xi.y >= 0.0 {
                    *top
                } else {
                    *bottom
                }
            }
            Weight::Designed(d) => d.profile(xi.angle()),
        }
    }

    /// Declared homogeneity degree α, `f(rξ) = r^α f(ξ)`.
    pub fn homogeneity(&self) -> Option<f64> {
        match self {
            Weight::Power { beta } => Some(-beta),
            Weight::Const { .. } | Weight::Designed(_) => Some(0.0),
            Weight::Piecewise { .. } => None,
        }
    }

    /// `(A(φ), α)` with `f(s·v(φ)) = A(φ) s^α`.
    pub fn radial_profile(&self, phi: f64) -> (f64, f64) {
        match self {
            Weight::Power { beta } => (1.0, -beta),
            Weight::Const { value } => (*value, 0.0),
            Weight::Piecewise { top, bottom } => {
                (if phi.sin() >= 0.0 { *top } else { *bottom }, 0.0)
            }
            Weight::Designed(d) => (d.profile(phi), 0.0),
        }
    }

    /// `∫_a^b f(s·v(φ)) s ds` in closed form.
    pub fn ray_integral(&self, phi: f64, a: f64, b: f64) -> f64 {
        let (amp, alpha) = self.radial_profile(phi);
        if amp == 0.0 || b <= a {
            return 0.0;
        }
        let e = alpha + 2.0;
        if a == 0.0 {
            return if e > 0.0 { amp * b.powf(e) / e } else { f64::INFINITY };
        }
        // a^e (exp(e log(b/a)) - 1)/e without cancellation for b ≈ a
        let l = ((b - a) / a).ln_1p();
        if e == 0.0 {
            amp * l
        } else {
            amp * a.powf(e) * (e * l).exp_m1() / e
        }
    }

    /// Angles where the angular profile `A(φ)` jumps.
    pub fn angular_breaks(&self) -> Vec<f64> {
        match self {
            Weight::Piecewise { top, bottom } if top != bottom => vec![0.0, PI],
            _ => Vec::new(),
        }
    }

    /// A constant `c > 0` with `f ≥ c` on `polar_body`, when one exists.
    pub fn lower_bound_on(&self, polar_body: &ConvexBody) -> Option<f64> {
        let c = match self {
            Weight::Power { beta } if *beta > 0.0 => polar_body.circumradius().powf(-beta),
            Weight::Power { beta } if *beta == 0.0 => 1.0,
            Weight::Power { .. } => 0.0,
            Weight::Const { value } => *value,
            Weight::Piecewise { top, bottom } => top.min(*bottom),
            Weight::Designed(d) => d.floor,
        };
        (c > 0.0).then_some(c)
    }

    pub fn is_designed(&self) -> bool {
        matches!(self, Weight::Designed(_))
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Weight::Power { beta } => write!(f, "power:beta={beta}"),
            Weight::Const { value } => write!(f, "const:{value}"),
            Weight::Piecewise { top, bottom } => write!(f, "piecewise:top={top},bottom={bottom}"),
            Weight::Designed(d) => write!(f, "designed:{}", d.target),
        }
    }
}
