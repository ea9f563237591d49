//! Density snapshot files.
//!
//! Layout: a UTF-8 text header of `key value...` lines closed by a line
//! `end`, followed by `2 · N` little-endian `f64` values, ρ₁ at every grid
//! point and then ρ₂. Points are row-major (the last axis varies fastest),
//! matching the solver's flat index `i0 · n1 + i1`.
//!
//! ```text
//! dirac-ua-snapshot 1
//! dims 2
//! shape 64 64
//! domain -16 16 -16 16
//! time 5.0000000000000000e-1
//! eps 1.0000000000000000e-1
//! scheme sep_ts4
//! end
//! <ρ₁ as N f64 LE><ρ₂ as N f64 LE>
//! ```

use std::io::{BufRead, Write};
use std::path::Path;

use dirac_ua_core::spectral::SpinorField;

use crate::output::fmt_f64;
use crate::{Error, Result};

const MAGIC: &str = "dirac-ua-snapshot 1";

#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub shape: Vec<usize>,
    pub domain: Vec<[f64; 2]>,
    pub time: f64,
    pub eps: f64,
    pub scheme: String,
    /// `|φ1|²` and `|φ2|²` at every grid point.
    pub rho: [Vec<f64>; 2],
}

impl Snapshot {
    pub fn from_field(phi: &SpinorField, time: f64, eps: f64, scheme: &str) -> Self {
        let g = phi.grid();
        let rho = [0, 1].map(|c| phi.component(c).iter().map(|z| z.norm_sqr()).collect());
        Self {
            shape: g.axes().iter().map(|a| a.n).collect(),
            domain: g.axes().iter().map(|a| [a.a, a.b]).collect(),
            time,
            eps,
            scheme: scheme.to_string(),
            rho,
        }
    }

    pub fn len(&self) -> usize {
        self.shape.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Total density `Σ (ρ1 + ρ2) Δx^d`.
    pub fn mass(&self) -> f64 {
        let cell: f64 = self
            .domain
            .iter()
            .zip(&self.shape)
            .map(|([a, b], n)| (b - a) / *n as f64)
            .product();
        cell * self.rho[0].iter().chain(&self.rho[1]).sum::<f64>()
    }

    pub fn write_to(&self, mut w: impl Write) -> Result<()> {
        let join = |v: Vec<String>| v.join(" ");
        writeln!(w, "{MAGIC}")?;
        writeln!(w, "dims {}", self.shape.len())?;
        writeln!(w, "shape {}", join(self.shape.iter().map(|n| n.to_string()).collect()))?;
        writeln!(
            w,
            "domain {}",
            join(self.domain.iter().flat_map(|[a, b]| [fmt_f64(*a), fmt_f64(*b)]).collect())
        )?;
        writeln!(w, "time {}", fmt_f64(self.time))?;
        writeln!(w, "eps {}", fmt_f64(self.eps))?;
        writeln!(w, "scheme {}", self.scheme)?;
        writeln!(w, "end")?;
        for v in self.rho.iter().flatten() {
            w.write_all(&v.to_le_bytes())?;
        }
        Ok(())
    }

    pub fn read_from(mut r: impl BufRead) -> Result<Self> {
        let mut line = String::new();
        let mut next_line = |r: &mut dyn BufRead| -> Result<String> {
            line.clear();
            if r.read_line(&mut line)? == 0 {
                return Err(Error::Format("header ended before `end`".into()));
            }
            Ok(line.trim_end_matches('\n').to_string())
        };
        if next_line(&mut r)? != MAGIC {
            return Err(Error::Format("missing `dirac-ua-snapshot 1` magic line".into()));
        }
        let (mut dims, mut shape, mut domain, mut time, mut eps, mut scheme) = (None, None, None, None, None, None);
        loop {
            let l = next_line(&mut r)?;
            let (key, rest) = l.split_once(' ').unwrap_or((l.as_str(), ""));
            let nums = |field: &str| -> Result<Vec<f64>> {
                rest.split_whitespace()
                    .map(|t| t.parse::<f64>().map_err(|_| Error::Format(format!("field `{field}`: bad number `{t}`"))))
                    .collect()
            };
            match key {
                "end" => break,
                "dims" => {
                    dims = Some(rest.trim().parse::<usize>().map_err(|_| Error::Format("field `dims`".into()))?)
                }
                "shape" => {
                    shape = Some(
                        rest.split_whitespace()
                            .map(|t| t.parse::<usize>())
                            .collect::<std::result::Result<Vec<_>, _>>()
                            .map_err(|_| Error::Format("field `shape`".into()))?,
                    )
                }
                "domain" => domain = Some(nums("domain")?),
                "time" => time = nums("time")?.first().copied(),
                "eps" => eps = nums("eps")?.first().copied(),
                "scheme" => scheme = Some(rest.trim().to_string()),
                other => return Err(Error::Format(format!("unknown header field `{other}`"))),
            }
        }
        let missing = |f: &str| Error::Format(format!("field `{f}` missing"));
        let dims = dims.ok_or_else(|| missing("dims"))?;
        let shape = shape.ok_or_else(|| missing("shape"))?;
        let domain = domain.ok_or_else(|| missing("domain"))?;
        if !(1..=2).contains(&dims) || shape.len() != dims || shape.contains(&0) {
            return Err(Error::Format(format!("field `shape`: {shape:?} does not match dims {dims}")));
        }
        if domain.len() != 2 * dims {
            return Err(Error::Format(format!("field `domain`: expected {} numbers", 2 * dims)));
        }
        let n: usize = shape.iter().product();
        let mut bytes = Vec::new();
        r.read_to_end(&mut bytes)?;
        if bytes.len() != 16 * n {
            return Err(Error::Format(format!(
                "payload has {} bytes, shape needs {}",
                bytes.len(),
                16 * n
            )));
        }
        let vals: Vec<f64> = bytes
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().expect("chunk of 8")))
            .collect();
        Ok(Self {
            shape,
            domain: domain.chunks(2).map(|c| [c[0], c[1]]).collect(),
            time: time.ok_or_else(|| missing("time"))?,
            eps: eps.ok_or_else(|| missing("eps"))?,
            scheme: scheme.ok_or_else(|| missing("scheme"))?,
            rho: [vals[..n].to_vec(), vals[n..].to_vec()],
        })
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        if let Some(dir) = path.parent() {
            std::fs::create_dir_all(dir)?;
        }
        let mut w = std::io::BufWriter::new(std::fs::File::create(path)?);
        self.write_to(&mut w)?;
        w.flush()?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::read_from(std::io::BufReader::new(std::fs::File::open(path)?))
    }
}

/// Number of strict local maxima of a 1D periodic profile above `floor · max`.
pub fn count_local_maxima(v: &[f64], floor: f64) -> usize {
    let n = v.len();
    let top = v.iter().cloned().fold(0.0, f64::max);
    (0..n)
        .filter(|&i| {
            let (l, r) = (v[(i + n - 1) % n], v[(i + 1) % n]);
            v[i] > l && v[i] >= r && v[i] > floor * top
        })
        .count()
}

/// Position of the maximum of a sampled 1D profile, refined by a parabola through its neighbours.
pub fn peak_position(v: &[f64], a: f64, dx: f64) -> f64 {
    let n = v.len();
    let i = (0..n).max_by(|&p, &q| v[p].total_cmp(&v[q])).unwrap_or(0);
    let (l, c, r) = (v[(i + n - 1) % n], v[i], v[(i + 1) % n]);
    let den = l - 2.0 * c + r;
    let shift = if den != 0.0 { 0.5 * (l - r) / den } else { 0.0 };
    a + (i as f64 + shift) * dx
}
