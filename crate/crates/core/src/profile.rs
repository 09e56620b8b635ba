//! Sampled conformal factors and their CSV form.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::io::{BufRead, Write};

/// Which spatial variable the grid runs over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Coord {
    /// r > 0 on the plane (values are the conformal factor u).
    Radial,
    /// s = ln r (values are w = r^2 u^(1-m)).
    Cylindrical,
    /// eta = (T-t)^gamma s (values are w-hat = (T-t)^-1 w).
    Outer,
    /// xi = s - A e^(gamma tau) (values are w-bar = e^((1+gamma)tau) w).
    Inner,
}

impl Coord {
    pub fn tag(self) -> &'static str {
        match self {
            Coord::Radial => "r",
            Coord::Cylindrical => "s",
            Coord::Outer => "eta",
            Coord::Inner => "xi",
        }
    }

    pub fn from_tag(tag: &str) -> Result<Self> {
        match tag {
            "r" => Ok(Coord::Radial),
            "s" => Ok(Coord::Cylindrical),
            "eta" => Ok(Coord::Outer),
            "xi" => Ok(Coord::Inner),
            other => Err(Error::Format(format!("unknown coord tag '{other}'"))),
        }
    }
}

/// Time stamp of a snapshot: original time t or rescaled tau = -ln(T-t).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum TimeTag {
    T(f64),
    Tau(f64),
}

impl TimeTag {
    pub fn value(self) -> f64 {
        match self {
            TimeTag::T(v) | TimeTag::Tau(v) => v,
        }
    }
}

impl fmt::Display for TimeTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TimeTag::T(v) => write!(f, "t:{v:.16e}"),
            TimeTag::Tau(v) => write!(f, "tau:{v:.16e}"),
        }
    }
}

/// A positive conformal factor sampled on a strictly increasing grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Profile {
    pub coord: Coord,
    pub time: TimeTag,
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
}

impl Profile {
    pub fn new(coord: Coord, time: TimeTag, grid: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if grid.len() < 3 {
            return Err(Error::invalid(format!(
                "profile needs at least 3 nodes, got {}",
                grid.len()
            )));
        }
        if grid.len() != values.len() {
            return Err(Error::invalid(format!(
                "grid/value length mismatch: {} vs {}",
                grid.len(),
                values.len()
            )));
        }
        if !grid.windows(2).all(|w| w[1] > w[0]) {
            return Err(Error::invalid("grid must be strictly increasing"));
        }
        if let Some(i) = values.iter().position(|v| !(*v > 0.0)) {
            return Err(Error::invalid(format!(
                "profile value at node {i} (x = {}) is not positive: {}",
                grid[i], values[i]
            )));
        }
        Ok(Profile {
            coord,
            time,
            grid,
            values,
        })
    }

    /// Samples a closed-form factor on a uniform grid.
    pub fn sample(
        coord: Coord,
        time: TimeTag,
        lo: f64,
        hi: f64,
        n: usize,
        f: impl Fn(f64) -> f64,
    ) -> Result<Self> {
        let grid: Vec<f64> = (0..n)
            .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
            .collect();
        let values = grid.iter().map(|&x| f(x)).collect();
        Profile::new(coord, time, grid, values)
    }

    /// CSV form: `# coord=<tag> time=<tag>:<value>` header, then `x,value`
    /// rows at 17 significant digits.
    pub fn write_csv(&self, mut w: impl Write) -> Result<()> {
        writeln!(w, "# coord={} time={}", self.coord.tag(), self.time)?;
        writeln!(w, "x,value")?;
        for (x, v) in self.grid.iter().zip(&self.values) {
            writeln!(w, "{x:.16e},{v:.16e}")?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("write to Vec cannot fail");
        String::from_utf8(buf).expect("CSV is ASCII")
    }

    pub fn read_csv(r: impl BufRead) -> Result<Self> {
        let mut coord = None;
        let mut time = None;
        let mut grid = Vec::new();
        let mut values = Vec::new();
        for line in r.lines() {
            let line = line?;
            let line = line.trim();
            if line.is_empty() || line == "x,value" {
                continue;
            }
            if let Some(rest) = line.strip_prefix('#') {
                for field in rest.split_whitespace() {
                    if let Some(tag) = field.strip_prefix("coord=") {
                        coord = Some(Coord::from_tag(tag)?);
                    } else if let Some(spec) = field.strip_prefix("time=") {
                        let (kind, val) = spec
                            .split_once(':')
                            .ok_or_else(|| Error::Format(format!("bad time spec '{spec}'")))?;
                        let v: f64 = val
                            .parse()
                            .map_err(|_| Error::Format(format!("bad time value '{val}'")))?;
                        time = Some(match kind {
                            "t" => TimeTag::T(v),
                            "tau" => TimeTag::Tau(v),
                            other => {
                                return Err(Error::Format(format!("unknown time tag '{other}'")))
                            }
                        });
                    }
                }
                continue;
            }
            let (xs, vs) = line
                .split_once(',')
                .ok_or_else(|| Error::Format(format!("bad row '{line}'")))?;
            grid.push(
                xs.trim()
                    .parse()
                    .map_err(|_| Error::Format(format!("bad x '{xs}'")))?,
            );
            values.push(
                vs.trim()
                    .parse()
                    .map_err(|_| Error::Format(format!("bad value '{vs}'")))?,
            );
        }
        let coord = coord.ok_or_else(|| Error::Format("missing coord header".into()))?;
        let time = time.ok_or_else(|| Error::Format("missing time header".into()))?;
        Profile::new(coord, time, grid, values)
    }
}

/// Scalar curvature samples of a radial conformally flat metric.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CurvatureField {
    /// Radial grid (may start at r = 0).
    pub grid: Vec<f64>,
    /// Scalar curvature R.
    pub r: Vec<f64>,
    /// R / sqrt(n(n-1)); the paper's norm convention at the isotropic
    /// origin, applied globally (a convention, recorded as such).
    pub rm_norm: Vec<f64>,
}
