//! JSON maps, CSV events and CSV worldlines.

use std::io::Read;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use conformal_vacuum::{
    AcceleratedFrameForm, ConformalMap, ConformalTransform, Event, FourVector, Matrix4, RayMap2D,
};
use serde::{Deserialize, Serialize};

/// A map file: either `{"chain": [...]}` or `{"alpha": [...], "beta": ...}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MapSpec {
    Chain(ConformalMap),
    Form(AcceleratedFrameForm),
}

impl MapSpec {
    pub fn identity() -> Self {
        MapSpec::Chain(ConformalMap::identity())
    }

    /// `1 − 2α·x + α²x²` when the map has a canonical form.
    pub fn singular_residual(&self, x: &Event) -> Option<f64> {
        match self {
            MapSpec::Form(f) => Some(f.singular_residual(x)),
            MapSpec::Chain(c) => c.canonical_form().map(|f| f.singular_residual(x)),
        }
    }

    pub fn to_map(&self) -> ConformalMap {
        match self {
            MapSpec::Chain(c) => c.clone(),
            MapSpec::Form(f) => f.to_map(),
        }
    }

    pub fn canonical_form(&self) -> Option<AcceleratedFrameForm> {
        match self {
            MapSpec::Form(f) => Some(*f),
            MapSpec::Chain(c) => c.canonical_form(),
        }
    }
}

impl ConformalTransform for MapSpec {
    fn apply(&self, x: &Event) -> conformal_vacuum::Result<Event> {
        match self {
            MapSpec::Chain(c) => c.apply(x),
            MapSpec::Form(f) => f.apply(x),
        }
    }

    fn jacobian(&self, x: &Event) -> conformal_vacuum::Result<(Matrix4, f64)> {
        match self {
            MapSpec::Chain(c) => c.jacobian(x),
            MapSpec::Form(f) => f.jacobian(x),
        }
    }

    fn orientation(&self) -> f64 {
        match self {
            MapSpec::Chain(c) => c.orientation(),
            MapSpec::Form(f) => f.orientation(),
        }
    }
}

pub fn parse_map(text: &str) -> Result<MapSpec> {
    serde_json::from_str(text).map_err(|e| anyhow!("map: line {}: {e}", e.line()))
}

pub fn read_map(path: &Path) -> Result<MapSpec> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_map(&text).with_context(|| path.display().to_string())
}

pub fn parse_ray_map(text: &str) -> Result<RayMap2D> {
    serde_json::from_str(text).map_err(|e| anyhow!("ray map: line {}: {e}", e.line()))
}

pub fn read_ray_map(path: &Path) -> Result<RayMap2D> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_ray_map(&text).with_context(|| path.display().to_string())
}

/// One parsed CSV row with its 1-based line number.
#[derive(Clone, Debug, PartialEq)]
pub struct Row {
    pub line: u64,
    pub values: Vec<f64>,
}

/// Reads rows of `width` comma-separated numbers. A first line that does
/// not parse as numbers is taken as a header. Blank lines and `#` comments
/// are skipped but still counted for line numbers.
pub fn read_numeric_csv<R: Read>(mut input: R, width: usize) -> Result<Vec<Row>> {
    let mut text = String::new();
    input.read_to_string(&mut text).context("reading input")?;
    let mut rows = Vec::new();
    let mut first = true;
    for (k, raw) in text.lines().enumerate() {
        let line = k as u64 + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let parsed: Result<Vec<f64>, _> = trimmed.split(',').map(|f| f.trim().parse::<f64>()).collect();
        let values = match parsed {
            Ok(v) => v,
            Err(_) if first => {
                first = false;
                continue;
            }
            Err(e) => bail!("line {line}: {e}"),
        };
        first = false;
        if values.len() != width {
            bail!("line {line}: expected {width} columns, found {}", values.len());
        }
        if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
            bail!("line {line}: non-finite value {bad}");
        }
        rows.push(Row { line, values });
    }
    Ok(rows)
}

/// `t, x1, x2, x3` per row.
pub fn read_events<R: Read>(input: R) -> Result<Vec<(u64, Event)>> {
    Ok(read_numeric_csv(input, 4)?
        .into_iter()
        .map(|r| (r.line, event(&r.values)))
        .collect())
}

/// `tau, t, x1, x2, x3` per row, strictly increasing in `tau`.
pub fn read_worldline<R: Read>(input: R) -> Result<Vec<(u64, f64, Event)>> {
    let rows = read_numeric_csv(input, 5)?;
    for pair in rows.windows(2) {
        if !(pair[0].values[0] < pair[1].values[0]) {
            bail!("line {}: tau must be strictly increasing", pair[1].line);
        }
    }
    Ok(rows
        .into_iter()
        .map(|r| (r.line, r.values[0], event(&r.values[1..])))
        .collect())
}

fn event(v: &[f64]) -> Event {
    FourVector::new(v[0], v[1], v[2], v[3])
}

pub fn open_input(path: Option<&Path>) -> Result<Box<dyn Read>> {
    match path {
        None => Ok(Box::new(std::io::stdin())),
        Some(p) if p.as_os_str() == "-" => Ok(Box::new(std::io::stdin())),
        Some(p) => Ok(Box::new(
            std::fs::File::open(p).with_context(|| format!("opening {}", p.display()))?,
        )),
    }
}

/// Parses `t,x1,x2,x3`.
pub fn parse_event(text: &str) -> Result<Event> {
    let v: Result<Vec<f64>, _> = text.split(',').map(|s| s.trim().parse::<f64>()).collect();
    let v = v.with_context(|| format!("event `{text}`"))?;
    if v.len() != 4 || v.iter().any(|c| !c.is_finite()) {
        bail!("event `{text}` needs four finite components");
    }
    Ok(event(&v))
}

/// Parses `start:end:count` into an evenly spaced grid.
pub fn parse_grid(text: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 3 {
        bail!("grid `{text}` must be start:end:count");
    }
    let a: f64 = parts[0].trim().parse().with_context(|| format!("grid `{text}`"))?;
    let b: f64 = parts[1].trim().parse().with_context(|| format!("grid `{text}`"))?;
    let n: usize = parts[2].trim().parse().with_context(|| format!("grid `{text}`"))?;
    if n < 2 || !(a < b) {
        bail!("grid `{text}` needs start < end and count ≥ 2");
    }
    Ok(linspace(a, b, n))
}

pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|k| a + (b - a) * k as f64 / (n - 1) as f64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn both_map_shapes_parse() {
        let c = parse_map(r#"{"chain": [{"kind": "inversion", "beta": 1.0}, {"kind": "dilation", "s": 2.0}]}"#).unwrap();
        assert!(matches!(c, MapSpec::Chain(_)));
        let f = parse_map(r#"{"alpha": [0.5, 0, 0, 0], "beta": 1}"#).unwrap();
        let x = f.apply(&FourVector::new(1.0, 0.0, 0.0, 0.0)).unwrap();
        assert!((x - FourVector::new(2.0, 0.0, 0.0, 0.0)).max_abs() < 1e-15);
        let back = parse_map(&serde_json::to_string(&f).unwrap()).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn map_errors_carry_lines() {
        let e = parse_map("{\n\"alpha\": [0, 0],\n\"beta\": 1}").unwrap_err();
        assert!(e.to_string().contains("line"));
        assert!(parse_map(r#"{"alpha": [0, 0, 0, 0], "beta": 0}"#).is_err());
    }

    #[test]
    fn csv_header_and_comments() {
        let text = "t,x1,x2,x3\n# note\n1,0,0,0\n\n0.5, 0.1, 0.2, 0.3\n";
        let rows = read_events(text.as_bytes()).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0].0, 3);
        assert_eq!(rows[1].0, 5);
        assert_eq!(rows[1].1, FourVector::new(0.5, 0.1, 0.2, 0.3));
    }

    #[test]
    fn csv_errors_name_the_line() {
        let e = read_events("1,0,0,0\n2,0,x,0\n".as_bytes()).unwrap_err();
        assert!(e.to_string().starts_with("line 2"), "{e}");
        let e = read_events("1,0,0,0\n2,0,0\n".as_bytes()).unwrap_err();
        assert!(e.to_string().starts_with("line 2"), "{e}");
        let e = read_worldline("0,0,0,0,0\n0,1,0,0,0\n".as_bytes()).unwrap_err();
        assert!(e.to_string().starts_with("line 2"), "{e}");
    }

    #[test]
    fn grids_and_events() {
        assert_eq!(parse_grid("-1:1:3").unwrap(), vec![-1.0, 0.0, 1.0]);
        assert!(parse_grid("1:0:3").is_err());
        assert_eq!(parse_event("1, 2,3,4").unwrap(), FourVector::new(1.0, 2.0, 3.0, 4.0));
        assert!(parse_event("1,2,3").is_err());
    }
}
