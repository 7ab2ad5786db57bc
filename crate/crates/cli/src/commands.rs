//! Subcommand implementations.

use std::f64::consts::PI;

use log::info;
use mwbody::affine::{asp_with_grid, omega_with_grid, verify_prop3_with, POLE_GUARD};
use mwbody::convergence::{pointwise_ratio_probe, t_sequence, theorem1_lhs, LhsOptions};
use mwbody::gallery::{ball_discrimination, ball_suite, square_remark_suite, GalleryRecord, Verdict};
use mwbody::meanwidth::{
    convexity_test, entropy_identity_check, region_integral_between, width_f_difference_sphere, MeanWidth,
};
use mwbody::parse::{parse_body, parse_weight};
use mwbody::{ConvexBody, Vec2};
use serde_json::{json, Value};

use crate::config::{Command, Suite};
use crate::error::CliError;
use crate::report::{to_value, Cell, Table};

/// Result of a subcommand: the JSON payload, its CSV rendering, and the
/// reason the run missed a tolerance, if it did.
pub struct Output {
    pub result: Value,
    pub table: Table,
    pub failure: Option<String>,
}

impl Output {
    fn scalars(result: Value) -> Self {
        let table = Table::from_scalars(&result);
        Self {
            result,
            table,
            failure: None,
        }
    }
}

fn body(spec: &str) -> Result<ConvexBody, CliError> {
    Ok(parse_body(spec)?)
}

fn positive_grid(grid: usize) -> Result<(), CliError> {
    if grid < 8 {
        return Err(CliError::Validation(format!("grid must be at least 8, got {grid}")));
    }
    Ok(())
}

fn p_ladder(pmin: f64, pmax: f64) -> Result<Vec<f64>, CliError> {
    if !(pmin > 0.0 && pmax >= 2.0 * pmin && pmax.is_finite()) {
        return Err(CliError::Validation(format!(
            "need 0 < pmin and pmax >= 2 pmin, got pmin = {pmin}, pmax = {pmax}"
        )));
    }
    let mut ps = vec![pmin];
    while ps[ps.len() - 1] * 2.0 <= pmax {
        ps.push(ps[ps.len() - 1] * 2.0);
    }
    Ok(ps)
}

fn gallery_table(records: &[GalleryRecord]) -> Table {
    let mut t = Table::new(vec!["case", "expected", "computed", "tolerance", "pass"]);
    for r in records {
        t.push(vec![
            Cell::Text(r.case.clone()),
            Cell::Float(r.expected),
            Cell::Float(r.computed),
            Cell::Float(r.tolerance),
            Cell::Bool(r.pass),
        ]);
    }
    t
}

fn failed_records(records: &[GalleryRecord]) -> Option<String> {
    let failed: Vec<&str> = records.iter().filter(|r| !r.pass).map(|r| r.case.as_str()).collect();
    (!failed.is_empty()).then(|| format!("gallery records failed: {}", failed.join(", ")))
}

pub fn run(command: &Command) -> Result<Output, CliError> {
    info!("running {}", command.name());
    match command {
        Command::Polar { body: spec, grid } => {
            positive_grid(*grid)?;
            let k = body(spec)?;
            let polar = k.polar()?;
            let mut table = Table::new(vec!["theta", "rho"]);
            if k.dim() == 2 {
                for j in 0..*grid {
                    let theta = 2.0 * PI * j as f64 / *grid as f64;
                    table.push(vec![Cell::Float(theta), Cell::Float(polar.radial(theta))]);
                }
            }
            Ok(Output {
                result: json!({
                    "body": k.to_string(),
                    "polar": polar.to_string(),
                    "volume": k.volume(),
                    "polar_volume": polar.volume(),
                    "volume_product": k.volume() * polar.volume(),
                }),
                table,
                failure: None,
            })
        }
        Command::Wf { body: spec, weight, point } => {
            let k = body(spec)?;
            let f = parse_weight(weight, &k)?;
            let mw = MeanWidth::new(&k, &f)?;
            let x = Vec2::new(point[0], point[1]);
            if x.norm() == 0.0 {
                return Err(CliError::Validation("point must be nonzero".into()));
            }
            let wf = mw.wf(x)?;
            let ray_limit = mw.ray_limit(x.angle())?;
            Ok(Output::scalars(json!({
                "point": point,
                "wf": wf,
                "ray_limit": ray_limit,
                "inside_body": k.contains(x),
            })))
        }
        Command::Mwbody {
            body: spec,
            weight,
            t,
            grid,
            convexity,
            witness,
        } => {
            positive_grid(*grid)?;
            if !(*t >= 0.0 && t.is_finite()) {
                return Err(CliError::Validation(format!("t must be non-negative and finite, got {t}")));
            }
            let k = body(spec)?;
            let f = parse_weight(weight, &k)?;
            let mw = MeanWidth::new(&k, &f)?;
            let s = mw.mean_width_body(*t, *grid)?;
            let mut table = Table::new(vec!["theta", "rho", "unbounded"]);
            for ((theta, rho), u) in s.thetas.iter().zip(&s.radii).zip(&s.unbounded) {
                table.push(vec![Cell::Float(*theta), Cell::Float(*rho), Cell::Bool(*u)]);
            }
            let mut result = json!({
                "star_body": to_value(&s)?,
                "unbounded_directions": s.unbounded_directions(),
                "bounded": s.is_bounded(),
            });
            if *convexity || witness.is_some() {
                let w = witness.map(|p| (&mw, Vec2::new(p[0], p[1])));
                result["convexity"] = to_value(&convexity_test(&s, w)?)?;
            }
            Ok(Output {
                result,
                table,
                failure: None,
            })
        }
        Command::Widthdiff { body: spec, outer, weight } => {
            let k = body(spec)?;
            let m = body(outer)?;
            let f = parse_weight(weight, &k)?;
            let sphere = width_f_difference_sphere(&k, &m, &f)?;
            let region = region_integral_between(&k, &m, &f)?;
            Ok(Output::scalars(json!({
                "sphere": sphere,
                "region": region,
                "difference": (sphere - region).abs(),
            })))
        }
        Command::Entcheck { body: spec, outer, grid } => {
            positive_grid(*grid)?;
            let r = entropy_identity_check(&body(spec)?, &body(outer)?, *grid)?;
            Ok(Output::scalars(to_value(&r)?))
        }
        Command::Asp { body: spec, p, grid } => {
            positive_grid(*grid)?;
            let k = body(spec)?;
            let n = k.dim() as f64;
            if let Some(bad) = p.iter().find(|p| (**p + n).abs() < POLE_GUARD) {
                return Err(CliError::Validation(format!("p = {bad} is at the pole p = -{n}")));
            }
            let values = p
                .iter()
                .map(|&p| asp_with_grid(&k, p, *grid))
                .collect::<Result<Vec<_>, _>>()?;
            let mut table = Table::new(vec!["p", "asp"]);
            for (p, v) in p.iter().zip(&values) {
                table.push(vec![Cell::Float(*p), Cell::Float(*v)]);
            }
            Ok(Output {
                result: json!({
                    "body": k.to_string(),
                    "values": p.iter().zip(&values).map(|(p, v)| json!({"p": p, "asp": v})).collect::<Vec<_>>(),
                }),
                table,
                failure: None,
            })
        }
        Command::Entropy { body: spec, pmax, grid, tol } => {
            positive_grid(*grid)?;
            let k = body(spec)?;
            let ps = p_ladder(16.0_f64.min(pmax / 2.0), *pmax)?;
            let r = verify_prop3_with(&k, &ps, *grid)?;
            let failure = (r.residual_eq1 > *tol || r.residual_eq2 > *tol).then(|| {
                format!(
                    "entropy identity residuals ({:e}, {:e}) exceed {tol:e}",
                    r.residual_eq1, r.residual_eq2
                )
            });
            let result = to_value(&r)?;
            Ok(Output {
                table: Table::from_scalars(&result),
                result,
                failure,
            })
        }
        Command::Omega { body: spec, pmin, pmax, grid } => {
            positive_grid(*grid)?;
            let k = body(spec)?;
            let est = omega_with_grid(&k, &p_ladder(*pmin, *pmax)?, *grid)?;
            let mut table = Table::new(vec!["p", "term"]);
            for (p, v) in &est.sequence {
                table.push(vec![Cell::Float(*p), Cell::Float(*v)]);
            }
            Ok(Output {
                result: to_value(&est)?,
                table,
                failure: None,
            })
        }
        Command::Converge {
            body: spec,
            weight,
            tmin,
            tmax,
            steps,
            grid,
            no_refine,
            tol,
        } => {
            positive_grid(*grid)?;
            let k = body(spec)?;
            let f = parse_weight(weight, &k)?;
            let ts = t_sequence(*tmax, *tmin, *steps)?;
            let options = LhsOptions {
                grid: *grid,
                refine: !no_refine,
                ..LhsOptions::default()
            };
            let r = theorem1_lhs(&k, &f, &ts, options)?;
            let mut table = Table::new(vec!["t", "volume", "ratio"]);
            for ((t, v), q) in r.t_values.iter().zip(&r.volumes).zip(&r.ratios) {
                table.push(vec![Cell::Float(*t), Cell::Float(*v), Cell::Float(*q)]);
            }
            let failure = if !r.routes_agree {
                Some("the two volume-difference routes disagree".to_string())
            } else if r.rel_error > *tol {
                Some(format!("extrapolated limit off by {:e} (tolerance {tol:e})", r.rel_error))
            } else {
                None
            };
            Ok(Output {
                result: to_value(&r)?,
                table,
                failure,
            })
        }
        Command::Gallery {
            suite,
            r,
            beta,
            tmin,
            tmax,
            steps,
            grid,
            tol,
        } => {
            let (records, extra) = match suite {
                Suite::Square => (square_remark_suite()?, None),
                Suite::Ball => (ball_suite()?, None),
                Suite::Discriminate => {
                    positive_grid(*grid)?;
                    let ts = t_sequence(*tmax, *tmin, *steps)?;
                    let options = LhsOptions {
                        grid: *grid,
                        ..LhsOptions::default()
                    };
                    let d = ball_discrimination(*r, *beta, &ts, options, *tol)?;
                    (d.records(), Some(d))
                }
            };
            let mut failure = failed_records(&records);
            let mut result = json!({ "records": to_value(&records)? });
            if let Some(d) = extra {
                if d.verdict != Verdict::Adopted && failure.is_none() {
                    failure = Some(format!("verdict {:?}", d.verdict));
                }
                result["verdict"] = to_value(&d.verdict)?;
                result["discrimination"] = to_value(&d)?;
            }
            Ok(Output {
                table: gallery_table(&records),
                result,
                failure,
            })
        }
        Command::Probe {
            body: spec,
            weight,
            theta,
            tmin,
            tmax,
            steps,
        } => {
            let k = body(spec)?;
            let f = parse_weight(weight, &k)?;
            let ts = t_sequence(*tmax, *tmin, *steps)?;
            let r = pointwise_ratio_probe(&k, &f, *theta, &ts)?;
            let mut table = Table::new(vec!["t", "value"]);
            for (t, v) in r.t_values.iter().zip(&r.values) {
                table.push(vec![Cell::Float(*t), Cell::Float(*v)]);
            }
            let failure = (!r.bounded).then(|| "pointwise ratio is unbounded".to_string());
            Ok(Output {
                result: to_value(&r)?,
                table,
                failure,
            })
        }
    }
}
