//! Point files and their mapping onto the integer grid.

use std::collections::HashMap;

use super::CliError;
use crate::hull::GridPoint;

/// Parsed points with the line each came from.
#[derive(Clone, Debug, PartialEq)]
pub struct PointFile {
    pub points: Vec<(f64, f64)>,
    pub lines: Vec<usize>,
}

/// Reads a point file: two decimals per line, `#` starts a comment.
pub fn parse_points(text: &str) -> Result<PointFile, CliError> {
    let mut out = Vec::new();
    let mut lines = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let fields: Vec<&str> = body.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(CliError::Parse { line, msg: format!("expected two numbers, found {}", fields.len()) });
        }
        let mut xy = [0.0; 2];
        for (slot, f) in xy.iter_mut().zip(&fields) {
            *slot = f
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| CliError::Parse { line, msg: format!("not a finite number: {f:?}") })?;
        }
        out.push((xy[0], xy[1]));
        lines.push(line);
    }
    if out.is_empty() {
        return Err(CliError::NoPoints);
    }
    Ok(PointFile { points: out, lines })
}

/// Grid points plus the affine map that produced them.
#[derive(Clone, Debug)]
pub struct Normalized {
    pub points: Vec<GridPoint>,
    pub origin: (f64, f64),
    /// Grid units per input unit; 0 for a single distinct location.
    pub scale: f64,
}

impl Normalized {
    /// Distance in input units between two grid points.
    pub fn to_input_units(&self, grid_dist_sq: u64) -> f64 {
        if self.scale == 0.0 {
            0.0
        } else {
            (grid_dist_sq as f64).sqrt() / self.scale
        }
    }
}

/// Maps the bounding square of `raw` onto `[0, 2^bits - 1]^2` and rounds.
/// Two inputs landing on one cell are an error.
pub fn normalize(file: &PointFile, bits: u32) -> Result<Normalized, CliError> {
    let raw = &file.points;
    if !(1..=31).contains(&bits) {
        return Err(CliError::GridBits(bits));
    }
    if raw.is_empty() {
        return Err(CliError::NoPoints);
    }
    let fold = |f: fn(f64, f64) -> f64, pick: fn(&(f64, f64)) -> f64, init: f64| raw.iter().map(pick).fold(init, f);
    let (min_x, max_x) = (fold(f64::min, |p| p.0, f64::INFINITY), fold(f64::max, |p| p.0, f64::NEG_INFINITY));
    let (min_y, max_y) = (fold(f64::min, |p| p.1, f64::INFINITY), fold(f64::max, |p| p.1, f64::NEG_INFINITY));
    let side = (max_x - min_x).max(max_y - min_y);
    let top = ((1u64 << bits) - 1) as f64;
    let scale = if side > 0.0 { top / side } else { 0.0 };
    let mut seen: HashMap<(i64, i64), usize> = HashMap::with_capacity(raw.len());
    let mut points = Vec::with_capacity(raw.len());
    for (id, &(x, y)) in raw.iter().enumerate() {
        let gx = ((x - min_x) * scale).round().clamp(0.0, top) as i64;
        let gy = ((y - min_y) * scale).round().clamp(0.0, top) as i64;
        if let Some(&first) = seen.get(&(gx, gy)) {
            return Err(CliError::Collision { first: file.lines[first], second: file.lines[id], x: gx, y: gy });
        }
        seen.insert((gx, gy), id);
        points.push(GridPoint::new(gx, gy, id));
    }
    Ok(Normalized { points, origin: (min_x, min_y), scale })
}
