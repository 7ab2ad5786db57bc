//! Text specifications of bodies and weights.
//!
//! Bodies:
//! `ball:r=<x>[,n=<k>]`, `ellipse:a=<x>,b=<y>[,rot=<θ>]`,
//! `ellipsoid:<a1>,<a2>,...`, `polygon:<x1>,<y1>;<x2>,<y2>;...`,
//! `trig:c0=<v>[,c<k>=<v>,s<k>=<v>...]`, `polar(<body>)`.
//!
//! Weights:
//! `power:beta=<x>`, `const:<x>`, `piecewise:top=<x>,bottom=<y>`,
//! `designed:asp:p=<x>`, `designed:ent1`, `designed:ent2`.

use crate::error::{Error, Result};
use crate::geometry::ConvexBody;
use crate::vec2::Vec2;
use crate::weights::{const_weight, designed_weight, piecewise_halfspace_weight, power_weight, Target, Weight};

fn parse_error(token: &str, position: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        token: token.to_string(),
        position,
        message: message.into(),
    }
}

/// Re-anchors a construction error at the token that produced it.
fn at(token: &str, position: usize) -> impl FnOnce(Error) -> Error + '_ {
    move |e| match e {
        e @ Error::Parse { .. } => e,
        other => parse_error(token, position, other.to_string()),
    }
}

/// Splits `s` on `sep`, returning each piece with its byte offset.
fn split_at(s: &str, offset: usize, sep: char) -> Vec<(&str, usize)> {
    let mut out = Vec::new();
    let mut start = 0;
    for (i, c) in s.char_indices() {
        if c == sep {
            out.push((&s[start..i], offset + start));
            start = i + c.len_utf8();
        }
    }
    out.push((&s[start..], offset + start));
    out
}

fn number(token: &str, position: usize) -> Result<f64> {
    let trimmed = token.trim();
    trimmed
        .parse::<f64>()
        .map_err(|_| parse_error(token, position, "expected a number"))
}

fn key_values(s: &str, offset: usize) -> Result<Vec<(&str, f64, usize)>> {
    split_at(s, offset, ',')
        .into_iter()
        .map(|(item, pos)| {
            let (key, value) = item
                .split_once('=')
                .ok_or_else(|| parse_error(item, pos, "expected key=value"))?;
            let key = key.trim();
            if key.is_empty() {
                return Err(parse_error(item, pos, "empty key"));
            }
            Ok((key, number(value, pos + key.len() + 1)?, pos))
        })
        .collect()
}

struct Keys<'a> {
    items: Vec<(&'a str, f64, usize)>,
    used: Vec<bool>,
}

impl<'a> Keys<'a> {
    fn new(s: &'a str, offset: usize) -> Result<Self> {
        let items = key_values(s, offset)?;
        for (i, (k, _, pos)) in items.iter().enumerate() {
            if items[..i].iter().any(|(k2, _, _)| k2 == k) {
                return Err(parse_error(k, *pos, "duplicate key"));
            }
        }
        let used = vec![false; items.len()];
        Ok(Self { items, used })
    }

    fn get(&mut self, key: &str) -> Option<f64> {
        let i = self.items.iter().position(|(k, _, _)| *k == key)?;
        self.used[i] = true;
        Some(self.items[i].1)
    }

    fn require(&mut self, key: &str, whole: &str, position: usize) -> Result<f64> {
        self.get(key)
            .ok_or_else(|| parse_error(whole, position, format!("missing key '{key}'")))
    }

    fn finish(self) -> Result<()> {
        match self.items.iter().zip(&self.used).find(|(_, u)| !**u) {
            Some(((k, _, pos), _)) => Err(parse_error(k, *pos, "unknown key")),
            None => Ok(()),
        }
    }
}

/// Parses a body specification.
pub fn parse_body(spec: &str) -> Result<ConvexBody> {
    body_at(spec, 0)
}

fn body_at(spec: &str, offset: usize) -> Result<ConvexBody> {
    if let Some(rest) = spec.strip_prefix("polar(") {
        let inner = rest
            .strip_suffix(')')
            .ok_or_else(|| parse_error(spec, offset, "missing closing ')'"))?;
        let body = body_at(inner, offset + 6)?;
        return body.polar().map_err(at(spec, offset));
    }
    let (variant, args) = spec
        .split_once(':')
        .ok_or_else(|| parse_error(spec, offset, "expected <variant>:<parameters>"))?;
    let args_at = offset + variant.len() + 1;
    match variant {
        "ball" => {
            let mut keys = Keys::new(args, args_at)?;
            let r = keys.require("r", args, args_at)?;
            let n = keys.get("n");
            keys.finish()?;
            let dim = match n {
                None => 2,
                Some(n) if n.fract() == 0.0 && n >= 2.0 => n as usize,
                Some(n) => return Err(parse_error(args, args_at, format!("dimension must be an integer >= 2, got {n}"))),
            };
            ConvexBody::ball_nd(r, dim).map_err(at(args, args_at))
        }
        "ellipse" => {
            let mut keys = Keys::new(args, args_at)?;
            let a = keys.require("a", args, args_at)?;
            let b = keys.require("b", args, args_at)?;
            let rot = keys.get("rot").unwrap_or(0.0);
            keys.finish()?;
            ConvexBody::ellipse_rotated(a, b, rot).map_err(at(args, args_at))
        }
        "ellipsoid" => {
            let axes = split_at(args, args_at, ',')
                .into_iter()
                .map(|(tok, pos)| number(tok, pos))
                .collect::<Result<Vec<_>>>()?;
            ConvexBody::ellipsoid(axes).map_err(at(args, args_at))
        }
        "polygon" => {
            let vertices = split_at(args, args_at, ';')
                .into_iter()
                .map(|(pair, pos)| {
                    let coords = split_at(pair, pos, ',');
                    if coords.len() != 2 {
                        return Err(parse_error(pair, pos, "expected a vertex <x>,<y>"));
                    }
                    Ok(Vec2::new(number(coords[0].0, coords[0].1)?, number(coords[1].0, coords[1].1)?))
                })
                .collect::<Result<Vec<_>>>()?;
            ConvexBody::polygon(vertices).map_err(at(args, args_at))
        }
        "trig" => trig(args, args_at),
        _ => Err(parse_error(variant, offset, "unknown body variant")),
    }
}

fn trig(args: &str, args_at: usize) -> Result<ConvexBody> {
    let mut c0 = None;
    let mut cos = Vec::new();
    let mut sin = Vec::new();
    for (key, value, pos) in key_values(args, args_at)? {
        if key == "c0" {
            if c0.replace(value).is_some() {
                return Err(parse_error(key, pos, "duplicate key"));
            }
            continue;
        }
        let (coeffs, k) = match (key.strip_prefix('c'), key.strip_prefix('s')) {
            (Some(k), _) => (&mut cos, k),
            (_, Some(k)) => (&mut sin, k),
            _ => return Err(parse_error(key, pos, "expected c<k> or s<k>")),
        };
        let k: usize = k
            .parse()
            .ok()
            .filter(|&k| k >= 1)
            .ok_or_else(|| parse_error(key, pos, "frequency must be a positive integer"))?;
        if coeffs.len() < k {
            coeffs.resize(k, 0.0);
        }
        if coeffs[k - 1] != 0.0 {
            return Err(parse_error(key, pos, "duplicate key"));
        }
        coeffs[k - 1] = value;
    }
    let c0 = c0.ok_or_else(|| parse_error(args, args_at, "missing key 'c0'"))?;
    ConvexBody::trig(c0, cos, sin).map_err(at(args, args_at))
}

/// Parses a weight specification. Designed weights are built for `body`.
pub fn parse_weight(spec: &str, body: &ConvexBody) -> Result<Weight> {
    let (variant, args) = spec
        .split_once(':')
        .ok_or_else(|| parse_error(spec, 0, "expected <variant>:<parameters>"))?;
    let args_at = variant.len() + 1;
    match variant {
        "power" => {
            let mut keys = Keys::new(args, args_at)?;
            let beta = keys.require("beta", args, args_at)?;
            keys.finish()?;
            power_weight(beta).map_err(at(args, args_at))
        }
        "const" => const_weight(number(args, args_at)?).map_err(at(args, args_at)),
        "piecewise" => {
            let mut keys = Keys::new(args, args_at)?;
            let top = keys.require("top", args, args_at)?;
            let bottom = keys.require("bottom", args, args_at)?;
            keys.finish()?;
            piecewise_halfspace_weight(top, bottom).map_err(at(args, args_at))
        }
        "designed" => {
            let target = match args {
                "ent1" => Target::Ent1,
                "ent2" => Target::Ent2,
                _ => {
                    let rest = args
                        .strip_prefix("asp:")
                        .ok_or_else(|| parse_error(args, args_at, "expected asp:p=<x>, ent1 or ent2"))?;
                    let mut keys = Keys::new(rest, args_at + 4)?;
                    let p = keys.require("p", rest, args_at + 4)?;
                    keys.finish()?;
                    Target::AspIntegrand { p }
                }
            };
            designed_weight(body, target).map_err(at(args, args_at))
        }
        _ => Err(parse_error(variant, 0, "unknown weight variant")),
    }
}
