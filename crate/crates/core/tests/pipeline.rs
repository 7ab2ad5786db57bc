use std::f64::consts::PI;

use approx::assert_relative_eq;
use mwbody::convergence::{theorem1_lhs, theorem1_rhs, theorem1_rhs_sphere, LhsOptions};
use mwbody::gallery::{ball_discrimination, Verdict};
use mwbody::meanwidth::{mean_width_body, star_volume, volume_difference_radial};
use mwbody::parse::{parse_body, parse_weight};
use mwbody::Error;

fn quick() -> LhsOptions {
    LhsOptions {
        grid: 512,
        refine: false,
        ..LhsOptions::default()
    }
}

#[test]
fn discrimination_selects_adopted_convention() {
    let ts = [1e-4, 1e-5, 1e-6, 1e-7];
    for (r, beta) in [(2.0, 3.0), (0.5, 3.0), (2.0, 6.0)] {
        let d = ball_discrimination(r, beta, &ts, quick(), 0.02).unwrap();
        assert_eq!(d.verdict, Verdict::Adopted, "r = {r}, beta = {beta}: {d:?}");
        assert!(d.records().iter().all(|rec| rec.pass));
    }
}

#[test]
fn parsed_specs_drive_the_harness() {
    let body = parse_body("trig:c0=1,c3=0.1").unwrap();
    let f = parse_weight("power:beta=3", &body).unwrap();
    let rhs = theorem1_rhs(&body, &f).unwrap();
    assert_relative_eq!(rhs, 6.754_703_920_656_177, max_relative = 1e-12);
    assert_relative_eq!(theorem1_rhs_sphere(&body, &f).unwrap(), rhs, max_relative = 1e-10);
    let report = theorem1_lhs(&body, &f, &[1e-4, 1e-5, 1e-6], quick()).unwrap();
    assert!(report.routes_agree);
    assert!(report.rel_error < 0.02, "{report:?}");
}

#[test]
fn star_volume_routes_agree_on_polar_body() {
    let body = parse_body("polar(trig:c0=1,c3=0.1)").unwrap();
    let f = parse_weight("const:1", &body).unwrap();
    let s = mean_width_body(&body, &f, 1e-4, 1024).unwrap();
    let star = star_volume(&s).unwrap() - body.volume();
    let radial = volume_difference_radial(&body, &s).unwrap();
    assert_relative_eq!(star, radial, max_relative = 1e-6);
}

#[test]
fn threshold_error_reports_direction() {
    let body = parse_body("ellipse:a=2,b=1").unwrap();
    let f = parse_weight("piecewise:top=0.5,bottom=1", &body).unwrap();
    let err = theorem1_lhs(&body, &f, &[0.2, 0.1], quick()).unwrap_err();
    match err {
        Error::Threshold { t, ray_limit, .. } => assert!(ray_limit <= t),
        other => panic!("expected a threshold error, got {other:?}"),
    }
}

#[test]
fn designed_entropy_weight_reproduces_its_target() {
    let body = parse_body("ellipse:a=2,b=1").unwrap();
    let f = parse_weight("designed:ent2", &body).unwrap();
    let ew = mwbody::weights::entropy_weights(&body).unwrap();
    assert_relative_eq!(theorem1_rhs(&body, &f).unwrap(), ew.targets.1, max_relative = 1e-8);
    assert_relative_eq!(ew.targets.1, 2.0 * PI * 2.0 * 4.0 * 8f64.ln(), max_relative = 1e-10);
}

#[test]
fn ratio_increments_shrink() {
    let body = parse_body("ellipse:a=2,b=1").unwrap();
    let f = parse_weight("power:beta=3", &body).unwrap();
    let r = theorem1_lhs(&body, &f, &[1e-3, 1e-4, 1e-5, 1e-6, 1e-7], quick()).unwrap();
    let steps: Vec<f64> = r.ratios.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
    assert!(steps.windows(2).all(|s| s[1] < s[0]), "{steps:?}");
}

#[test]
fn unit_disk_probe_tends_to_one() {
    use mwbody::convergence::pointwise_ratio_probe;
    let body = parse_body("ball:r=1").unwrap();
    let f = parse_weight("const:1", &body).unwrap();
    let p = pointwise_ratio_probe(&body, &f, 1.1, &[1e-5, 1e-7]).unwrap();
    assert_eq!(p.limit, 1.0);
    assert!((p.values[1] - 1.0).abs() < 0.01, "{p:?}");
}

#[test]
fn ellipse_cap_inside_bounds() {
    use mwbody::convergence::ellipsoid_cap_bounds;
    use mwbody::meanwidth::{cap_region_integral, CapSpec};
    use mwbody::{ConvexBody, Vec2};
    let (lo, hi) = ellipsoid_cap_bounds(&[2.0, 1.0], 0.1).unwrap();
    let e = ConvexBody::ellipse(2.0, 1.0).unwrap();
    let cap = CapSpec::new(Vec2::new(0.0, 1.0 / 0.9)).unwrap();
    let mass = PI * cap_region_integral(&e, &cap, &parse_weight("const:1", &e).unwrap()).unwrap();
    assert!(lo <= mass && mass <= hi, "{lo} {mass} {hi}");
}
