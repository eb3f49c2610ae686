//! Raster images of a real 2-parameter slice of P^2, rendered row-parallel.

use std::io::Write;
use std::path::Path;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::classification::{classify_point, Classification};
use crate::dihedral::{limit_f, tau, tchebyshev_t};
use crate::error::{Error, Result};
use crate::geometry::{normalize, ExtendedComplex, Point2};

pub const MIN_RESOLUTION: usize = 8;
pub const MAX_RESOLUTION: usize = 8192;

/// Escape radius for the Tchebyshev orbit of τ.
const ESCAPE_RADIUS: f64 = 1e6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RenderMode {
    Classification,
    EscapeTime,
    ArgF,
}

impl std::str::FromStr for RenderMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "classification" => Ok(RenderMode::Classification),
            "escape_time" | "escape-time" => Ok(RenderMode::EscapeTime),
            "arg_f" | "arg-f" => Ok(RenderMode::ArgF),
            _ => Err(Error::InvalidConfig(format!("unknown render mode '{s}'"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RenderConfig {
    /// Index of the coordinate pinned to 1; the other two (in order) are x, y.
    pub chart: usize,
    pub x_range: (f64, f64),
    pub y_range: (f64, f64),
    pub resolution: usize,
    pub mode: RenderMode,
    pub max_iter: usize,
    pub tol: f64,
}

impl Default for RenderConfig {
    fn default() -> Self {
        RenderConfig {
            chart: 0,
            x_range: (-2.0, 2.0),
            y_range: (-2.0, 2.0),
            resolution: 512,
            mode: RenderMode::Classification,
            max_iter: 100,
            tol: 1e-10,
        }
    }
}

impl RenderConfig {
    pub fn validate(&self) -> Result<()> {
        if self.chart > 2 {
            return Err(Error::InvalidConfig("chart must be 0, 1 or 2".into()));
        }
        if !(MIN_RESOLUTION..=MAX_RESOLUTION).contains(&self.resolution) {
            return Err(Error::InvalidConfig(format!(
                "resolution must be in [{MIN_RESOLUTION}, {MAX_RESOLUTION}]"
            )));
        }
        for (lo, hi) in [self.x_range, self.y_range] {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(Error::InvalidConfig("ranges must be finite with lo < hi".into()));
            }
        }
        Ok(())
    }

    /// Slice coordinates of the center of pixel (col, row); row 0 is the top.
    pub fn pixel_center(&self, col: usize, row: usize) -> (f64, f64) {
        let r = self.resolution as f64;
        let x = self.x_range.0 + (col as f64 + 0.5) * (self.x_range.1 - self.x_range.0) / r;
        let y = self.y_range.1 - (row as f64 + 0.5) * (self.y_range.1 - self.y_range.0) / r;
        (x, y)
    }

    pub fn slice_point(&self, x: f64, y: f64) -> Point2 {
        let mut v = [Complex64::new(x, 0.0), Complex64::new(y, 0.0)].into_iter();
        let mut c = [Complex64::new(1.0, 0.0); 3];
        for (k, ck) in c.iter_mut().enumerate() {
            if k != self.chart {
                *ck = v.next().expect("two free coordinates");
            }
        }
        normalize(&c).expect("pinned coordinate is 1")
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ImageBuffer {
    pub width: usize,
    pub height: usize,
    /// RGB triples, row-major.
    pub pixels: Vec<u8>,
}

impl ImageBuffer {
    pub fn pixel(&self, col: usize, row: usize) -> [u8; 3] {
        let i = 3 * (row * self.width + col);
        [self.pixels[i], self.pixels[i + 1], self.pixels[i + 2]]
    }

    pub fn write_ppm<W: Write>(&self, mut w: W) -> Result<()> {
        write!(w, "P6\n{} {}\n255\n", self.width, self.height)?;
        w.write_all(&self.pixels)?;
        Ok(())
    }

    pub fn save_ppm(&self, path: &Path) -> Result<()> {
        let f = std::fs::File::create(path)?;
        self.write_ppm(std::io::BufWriter::new(f))
    }
}

pub const BLACK: [u8; 3] = [0, 0, 0];
pub const RED: [u8; 3] = [255, 0, 0];
pub const WHITE: [u8; 3] = [255, 255, 255];
pub const LIGHT_GRAY: [u8; 3] = [200, 200, 200];
pub const BLUE: [u8; 3] = [0, 0, 255];

pub fn classification_color(c: &Classification) -> [u8; 3] {
    match c {
        Classification::JuliaSpectrum { .. } => BLACK,
        Classification::JuliaIndeterminacy { .. } => RED,
        Classification::FatouCertified => WHITE,
        Classification::FatouNumerical { .. } => LIGHT_GRAY,
        Classification::Unknown => BLUE,
    }
}

/// Steps until |T^n(τ)| exceeds the escape radius; `max_iter` if it never does.
pub fn escape_time(p: &Point2, max_iter: usize) -> usize {
    let mut x = tau(p);
    for n in 0..max_iter {
        if x.norm() > ESCAPE_RADIUS {
            return n;
        }
        x = tchebyshev_t(x);
        if let ExtendedComplex::Infinity = x {
            return n + 1;
        }
    }
    max_iter
}

fn hsv_to_rgb(h: f64, s: f64, v: f64) -> [u8; 3] {
    let h = h.rem_euclid(1.0) * 6.0;
    let i = h.floor();
    let f = h - i;
    let (p, q, t) = (v * (1.0 - s), v * (1.0 - s * f), v * (1.0 - s * (1.0 - f)));
    let (r, g, b) = match i as u32 {
        0 => (v, t, p),
        1 => (q, v, p),
        2 => (p, v, t),
        3 => (p, q, v),
        4 => (t, p, v),
        _ => (v, p, q),
    };
    [(r * 255.0) as u8, (g * 255.0) as u8, (b * 255.0) as u8]
}

fn pixel_color(cfg: &RenderConfig, p: &Point2) -> [u8; 3] {
    match cfg.mode {
        RenderMode::Classification => match classify_point(p, cfg.max_iter, cfg.tol) {
            Ok(c) => classification_color(&c),
            Err(_) => BLUE,
        },
        RenderMode::EscapeTime => {
            let n = escape_time(p, cfg.max_iter);
            if n >= cfg.max_iter {
                BLACK
            } else {
                let v = 255 - ((n * 255) / cfg.max_iter.max(1)).min(255) as u8;
                [v, v, 255]
            }
        }
        RenderMode::ArgF => {
            let f = limit_f(p);
            if f.norm() == 0.0 {
                WHITE
            } else {
                let h = (f.arg() + std::f64::consts::PI) / (2.0 * std::f64::consts::PI);
                hsv_to_rgb(h, 1.0, 0.5 + 0.5 * f.norm().min(1.0))
            }
        }
    }
}

/// Renders the slice; rows are computed in parallel on the current rayon pool
/// and assembled in order, so output is independent of the thread count.
pub fn render_slice(cfg: &RenderConfig) -> Result<ImageBuffer> {
    cfg.validate()?;
    let n = cfg.resolution;
    let rows: Vec<Vec<u8>> = (0..n)
        .into_par_iter()
        .map(|row| {
            let mut out = Vec::with_capacity(3 * n);
            for col in 0..n {
                let (x, y) = cfg.pixel_center(col, row);
                out.extend_from_slice(&pixel_color(cfg, &cfg.slice_point(x, y)));
            }
            out
        })
        .collect();
    Ok(ImageBuffer { width: n, height: n, pixels: rows.concat() })
}

/// Thread pool sized by the SPECDYN_THREADS environment variable, if set.
pub fn thread_pool_from_env() -> Result<rayon::ThreadPool> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var("SPECDYN_THREADS") {
        let n: usize = v
            .parse()
            .map_err(|_| Error::InvalidConfig(format!("SPECDYN_THREADS='{v}' is not a count")))?;
        b = b.num_threads(n.max(1));
    }
    b.build().map_err(|e| Error::InvalidConfig(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::real_slice_spectrum;

    fn small(mode: RenderMode) -> RenderConfig {
        RenderConfig { resolution: 8, mode, ..Default::default() }
    }

    #[test]
    fn pixel_near_spectrum_point_is_black() {
        let cfg = small(RenderMode::Classification);
        let img = render_slice(&cfg).unwrap();
        let (col, row) = (0..8)
            .flat_map(|r| (0..8).map(move |c| (c, r)))
            .min_by(|&(c1, r1), &(c2, r2)| {
                let d = |c, r| {
                    let (x, y) = cfg.pixel_center(c, r);
                    (x - 1.0).powi(2) + (y - 1.875).powi(2)
                };
                d(c1, r1).total_cmp(&d(c2, r2))
            })
            .unwrap();
        let (x, y) = cfg.pixel_center(col, row);
        assert!(real_slice_spectrum(x, y));
        assert_eq!(img.pixel(col, row), BLACK);
    }

    #[test]
    fn ppm_header_and_size() {
        let img = render_slice(&small(RenderMode::EscapeTime)).unwrap();
        let mut buf = Vec::new();
        img.write_ppm(&mut buf).unwrap();
        assert!(buf.starts_with(b"P6\n8 8\n255\n"));
        assert_eq!(buf.len(), 11 + 8 * 8 * 3);
        assert!(render_slice(&small(RenderMode::ArgF)).is_ok());
    }

    #[test]
    fn invalid_configs() {
        let mut cfg = small(RenderMode::Classification);
        cfg.resolution = 4;
        assert!(cfg.validate().is_err());
        cfg.resolution = 8;
        cfg.x_range = (1.0, 1.0);
        assert!(cfg.validate().is_err());
        assert!("bogus".parse::<RenderMode>().is_err());
    }

    #[test]
    fn output_independent_of_thread_count() {
        let cfg = RenderConfig { resolution: 32, ..Default::default() };
        let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let three = rayon::ThreadPoolBuilder::new().num_threads(3).build().unwrap();
        let a = one.install(|| render_slice(&cfg)).unwrap();
        let b = three.install(|| render_slice(&cfg)).unwrap();
        assert_eq!(a, b);
    }
}
