//! Parameter-grid specifications of the form `name:lo:hi:n,name:lo:hi:n`.

use std::fmt;

#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    pub name: String,
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

impl Axis {
    /// `n` evenly spaced points with both endpoints included; a single point
    /// sits at `lo`.
    pub fn points(&self) -> Vec<f64> {
        if self.n == 1 {
            return vec![self.lo];
        }
        let last = (self.n - 1) as f64;
        (0..self.n)
            .map(|i| {
                if i == self.n - 1 {
                    self.hi
                } else {
                    self.lo + (self.hi - self.lo) * (i as f64 / last)
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridError(pub String);

impl fmt::Display for GridError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "malformed grid spec: {}", self.0)
    }
}

impl std::error::Error for GridError {}

/// Parses a comma-separated list of axes, rejecting duplicates and names
/// outside `allowed`.
pub fn parse_grid(spec: &str, allowed: &[&str]) -> Result<Vec<Axis>, GridError> {
    let mut axes: Vec<Axis> = Vec::new();
    for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let axis = parse_axis(part)?;
        if !allowed.contains(&axis.name.as_str()) {
            return Err(GridError(format!(
                "unknown axis {:?} (expected one of {})",
                axis.name,
                allowed.join(", ")
            )));
        }
        if axes.iter().any(|a| a.name == axis.name) {
            return Err(GridError(format!("axis {:?} given twice", axis.name)));
        }
        axes.push(axis);
    }
    if axes.is_empty() {
        return Err(GridError("no axes".into()));
    }
    Ok(axes)
}

fn parse_axis(part: &str) -> Result<Axis, GridError> {
    let fields: Vec<&str> = part.split(':').map(str::trim).collect();
    let [name, lo, hi, n] = fields[..] else {
        return Err(GridError(format!("{part:?} is not name:lo:hi:n")));
    };
    let num = |s: &str| -> Result<f64, GridError> {
        s.parse::<f64>()
            .ok()
            .filter(|x| x.is_finite())
            .ok_or_else(|| GridError(format!("{s:?} in {part:?} is not a finite number")))
    };
    let n: usize = n.parse().ok().filter(|&n| n >= 1).ok_or_else(|| {
        GridError(format!(
            "point count {n:?} in {part:?} must be a positive integer"
        ))
    })?;
    if name.is_empty() {
        return Err(GridError(format!("empty axis name in {part:?}")));
    }
    Ok(Axis {
        name: name.to_string(),
        lo: num(lo)?,
        hi: num(hi)?,
        n,
    })
}

pub fn find<'a>(axes: &'a [Axis], name: &str) -> Option<&'a Axis> {
    axes.iter().find(|a| a.name == name)
}
