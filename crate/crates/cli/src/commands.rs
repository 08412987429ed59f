//! The data-processing subcommands, as functions from inputs to encoded
//! output.

use std::io::Read;

use anyhow::{bail, Result};
use conformal_vacuum::correlations::{verify_em_invariance, verify_scalar_invariance, CorrectionTerms};
use conformal_vacuum::{
    abraham_vector, classify_motion, mirror_scattering_map, pushforward_worldline, Classification,
    ConformalTransform, Error, Event, MirrorVerdict, RayMap2D, Worldline,
};
use conformal_vacuum::kinematics::CLASSIFY_TOLERANCE;
use conformal_vacuum::lightcone::vacuum_verdict_with;
use serde::Serialize;

use crate::config::Format;
use crate::formats::{read_events, read_worldline, MapSpec};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TransformRow {
    pub line: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tau: Option<f64>,
    pub t: f64,
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
    pub t_bar: Option<f64>,
    pub x1_bar: Option<f64>,
    pub x2_bar: Option<f64>,
    pub x3_bar: Option<f64>,
    pub lambda: Option<f64>,
    pub singular_residual: Option<f64>,
    /// Image proper time (worldline input with no singular rows).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tau_bar: Option<f64>,
    pub status: &'static str,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TransformOutput {
    pub rows: Vec<TransformRow>,
    pub singular: usize,
}

fn transform_row(map: &MapSpec, line: u64, tau: Option<f64>, x: Event) -> Result<TransformRow> {
    let mut row = TransformRow {
        line,
        tau,
        t: x.0[0],
        x1: x.0[1],
        x2: x.0[2],
        x3: x.0[3],
        t_bar: None,
        x1_bar: None,
        x2_bar: None,
        x3_bar: None,
        lambda: None,
        singular_residual: map.singular_residual(&x),
        tau_bar: None,
        status: "ok",
    };
    match (map.apply(&x), map.factor(&x)) {
        (Ok(y), Ok(l)) => {
            row.t_bar = Some(y.0[0]);
            row.x1_bar = Some(y.0[1]);
            row.x2_bar = Some(y.0[2]);
            row.x3_bar = Some(y.0[3]);
            row.lambda = Some(l);
        }
        (Err(Error::Singular { .. }), _) | (_, Err(Error::Singular { .. })) => row.status = "singular",
        (Err(e), _) | (_, Err(e)) => bail!("line {line}: {e}"),
    }
    Ok(row)
}

/// Maps every event; rows on a singular set are flagged and skipped.
pub fn transform_events<R: Read>(map: &MapSpec, input: R) -> Result<TransformOutput> {
    let mut rows = Vec::new();
    for (line, x) in read_events(input)? {
        rows.push(transform_row(map, line, None, x)?);
    }
    let singular = rows.iter().filter(|r| r.status != "ok").count();
    Ok(TransformOutput { rows, singular })
}

/// Maps a worldline row by row and, when every row is regular, adds the
/// image proper time.
pub fn transform_worldline<R: Read>(map: &MapSpec, input: R) -> Result<TransformOutput> {
    let samples = read_worldline(input)?;
    let mut rows = Vec::with_capacity(samples.len());
    for &(line, tau, x) in &samples {
        rows.push(transform_row(map, line, Some(tau), x)?);
    }
    let singular = rows.iter().filter(|r| r.status != "ok").count();
    if singular == 0 && samples.len() >= 8 {
        let taus: Vec<f64> = samples.iter().map(|s| s.1).collect();
        let events: Vec<Event> = samples.iter().map(|s| s.2).collect();
        let w = Worldline::sampled(taus.clone(), events)?;
        if let Worldline::Sampled(img) = pushforward_worldline(map, &w, &taus)? {
            for (row, tb) in rows.iter_mut().zip(img.taus()) {
                row.tau_bar = Some(*tb);
            }
        }
    }
    Ok(TransformOutput { rows, singular })
}

pub fn encode_rows<T: Serialize>(rows: &[T], format: Format) -> Result<String> {
    match format {
        Format::Json => Ok(serde_json::to_string_pretty(rows)? + "\n"),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for r in rows {
                w.serialize(r)?;
            }
            Ok(String::from_utf8(w.into_inner()?)?)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AbrahamRow {
    pub tau: f64,
    pub w0: f64,
    pub w1: f64,
    pub w2: f64,
    pub w3: f64,
    pub norm: f64,
    /// `|v² − 1| + |v·v̇|`.
    pub constraint_residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AbrahamOutput {
    pub classification: Classification,
    pub rows: Vec<AbrahamRow>,
}

/// Abraham vector at every knot far enough from the ends for the stencil,
/// after an optional pushforward through `map`.
pub fn abraham_cmd<R: Read>(map: Option<&MapSpec>, input: R, step: f64, tol: Option<f64>) -> Result<AbrahamOutput> {
    let samples = read_worldline(input)?;
    let taus: Vec<f64> = samples.iter().map(|s| s.1).collect();
    let events: Vec<Event> = samples.iter().map(|s| s.2).collect();
    let mut w = Worldline::sampled(taus.clone(), events)?;
    if let Some(m) = map {
        w = pushforward_worldline(m, &w, &taus)?;
    }
    let (lo, hi) = w.range().expect("sampled worldlines have a range");
    let knots: Vec<f64> = match &w {
        Worldline::Sampled(s) => s.taus().to_vec(),
        Worldline::Hyperbolic(_) => taus,
    };
    let reach = 3.0 * step;
    let inner: Vec<f64> = knots.into_iter().filter(|t| *t - reach >= lo && *t + reach <= hi).collect();
    if inner.len() < 3 {
        bail!("worldline too short for step {step}");
    }
    let mut rows = Vec::with_capacity(inner.len());
    for &tau in &inner {
        let a = abraham_vector(&w, tau, step)?;
        let s = w.kinematic_state(tau, step)?;
        rows.push(AbrahamRow {
            tau,
            w0: a.w.0[0],
            w1: a.w.0[1],
            w2: a.w.0[2],
            w3: a.w.0[3],
            norm: a.residual_norm,
            constraint_residual: s.residual,
        });
    }
    let classification = classify_motion(&w, &inner, step, tol.unwrap_or(CLASSIFY_TOLERANCE))?;
    Ok(AbrahamOutput { classification, rows })
}

/// The scalar (and, for canonical maps, field-tensor) invariance at one pair.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CorrReport {
    pub suite: &'static str,
    pub map: MapSpec,
    pub points: [Event; 2],
    pub epsilon: f64,
    pub h: f64,
    /// `λλ′ c(x̄, x̄′)` as `[re, im]`.
    pub lhs: [f64; 2],
    /// `c(x, x′)` as `[re, im]`.
    pub rhs: [f64; 2],
    pub residual: f64,
    pub raw_residual: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub field_tensor_residual: Option<f64>,
}

pub fn corr_cmd(map: &MapSpec, x: Event, x_prime: Event, epsilon: f64, h: f64) -> Result<CorrReport> {
    let s = verify_scalar_invariance(map, &x, &x_prime, epsilon)?;
    let field_tensor_residual = match map.canonical_form() {
        Some(f) if h > 0.0 => Some(verify_em_invariance(&f, &x, &x_prime, epsilon, h, CorrectionTerms::ALL)?.residual),
        _ => None,
    };
    Ok(CorrReport {
        suite: "corr",
        map: map.clone(),
        points: [x, x_prime],
        epsilon,
        h,
        lhs: [s.lhs.re, s.lhs.im],
        rhs: [s.rhs.re, s.rhs.im],
        residual: s.residual,
        raw_residual: s.raw_residual,
        field_tensor_residual,
    })
}

impl CorrReport {
    pub fn encode(&self, format: Format) -> Result<String> {
        match format {
            Format::Json => Ok(serde_json::to_string_pretty(self)? + "\n"),
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(["epsilon", "h", "lhs_re", "lhs_im", "rhs_re", "rhs_im", "residual", "raw_residual", "field_tensor_residual"])?;
                let ft = self.field_tensor_residual.map(|v| format!("{v:e}")).unwrap_or_default();
                w.write_record([
                    format!("{:e}", self.epsilon),
                    format!("{:e}", self.h),
                    format!("{:e}", self.lhs[0]),
                    format!("{:e}", self.lhs[1]),
                    format!("{:e}", self.rhs[0]),
                    format!("{:e}", self.rhs[1]),
                    format!("{:e}", self.residual),
                    format!("{:e}", self.raw_residual),
                    ft,
                ])?;
                Ok(String::from_utf8(w.into_inner()?)?)
            }
        }
    }
}

/// Homography verdict for a ray map, or for the scattering map of a mirror
/// at rest in the frame `map` when `mirror` is set.
pub fn ray2d_cmd(map: &RayMap2D, mirror: bool, grid: &[f64], threshold: f64) -> Result<MirrorVerdict> {
    let m = if mirror { mirror_scattering_map(map)? } else { map.clone() };
    Ok(vacuum_verdict_with(&m, grid, grid, threshold)?)
}

pub fn encode_verdict(v: &MirrorVerdict, format: Format) -> Result<String> {
    match format {
        Format::Json => Ok(serde_json::to_string_pretty(v)? + "\n"),
        Format::Csv => {
            let label = match v.verdict {
                conformal_vacuum::Verdict::Invariant => "invariant",
                conformal_vacuum::Verdict::Modified => "modified",
            };
            Ok(format!("verdict,evidence\n{label},{:e}\n", v.evidence))
        }
    }
}
