//! Deterministic rasterization of period images and torus scatter plots,
//! plus PNG/PPM output.
//!
//! Everything here is single-threaded; the output depends only on the input
//! data and the [`RenderConfig`].

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::asymptotic::LambdaSet;
use crate::supercharacter::PeriodImage;
use crate::{Error, Result};

pub type Rgb = [u8; 3];

pub const WHITE: Rgb = [255, 255, 255];
pub const MIN_SIZE: usize = 64;

#[derive(Clone, Debug, PartialEq)]
pub enum Palette {
    /// layer `j` of `c` gets hue `j/c` at full saturation and value
    Auto,
    /// layer `j` gets entry `j mod len`
    Fixed(Vec<Rgb>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct RenderConfig {
    pub size_px: usize,
    /// `None` means `1.05 * |X|`
    pub viewport_radius: Option<f64>,
    pub palette: Palette,
    pub background: Rgb,
    pub point_radius_px: u32,
}

impl Default for RenderConfig {
    fn default() -> Self {
        Self {
            size_px: 512,
            viewport_radius: None,
            palette: Palette::Auto,
            background: WHITE,
            point_radius_px: 1,
        }
    }
}

impl RenderConfig {
    fn validate(&self) -> Result<()> {
        if self.size_px < MIN_SIZE {
            return Err(Error::InvalidArgument(format!(
                "canvas size must be at least {MIN_SIZE}px, got {}",
                self.size_px
            )));
        }
        if let Some(r) = self.viewport_radius {
            if !(r > 0.0 && r.is_finite()) {
                return Err(Error::InvalidArgument(format!("viewport radius must be positive, got {r}")));
            }
        }
        if let Palette::Fixed(colors) = &self.palette {
            if colors.is_empty() {
                return Err(Error::InvalidArgument("fixed palette is empty".into()));
            }
        }
        Ok(())
    }

    fn color(&self, layer: u64, layers: u64) -> Rgb {
        match &self.palette {
            Palette::Auto => hsv_to_rgb(layer as f64 / layers.max(1) as f64, 1.0, 1.0),
            Palette::Fixed(colors) => colors[(layer % colors.len() as u64) as usize],
        }
    }
}

/// Sextant HSV conversion, channels floored to `0..=255`.
pub fn hsv_to_rgb(h: f64, s: f64, v: f64) -> Rgb {
    let h6 = (h.rem_euclid(1.0)) * 6.0;
    let sector = h6.floor();
    let f = h6 - sector;
    let p = v * (1.0 - s);
    let q = v * (1.0 - s * f);
    let t = v * (1.0 - s * (1.0 - f));
    let (r, g, b) = match sector as u8 % 6 {
        0 => (v, t, p),
        1 => (q, v, p),
        2 => (p, v, t),
        3 => (p, q, v),
        4 => (t, p, v),
        _ => (v, p, q),
    };
    let ch = |x: f64| (x * 255.0).floor().clamp(0.0, 255.0) as u8;
    [ch(r), ch(g), ch(b)]
}

/// Row-major RGB canvas.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Raster {
    width: usize,
    height: usize,
    pixels: Vec<Rgb>,
}

impl Raster {
    pub fn new(width: usize, height: usize, fill: Rgb) -> Self {
        Self {
            width,
            height,
            pixels: vec![fill; width * height],
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[Rgb] {
        &self.pixels
    }

    pub fn get(&self, x: usize, y: usize) -> Rgb {
        self.pixels[y * self.width + x]
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        self.pixels.iter().flatten().copied().collect()
    }

    /// Filled disc without anti-aliasing, clipped to the canvas.
    fn disc(&mut self, cx: i64, cy: i64, radius: u32, color: Rgb) {
        let r = radius as i64;
        for dy in -r..=r {
            for dx in -r..=r {
                if dx * dx + dy * dy > r * r {
                    continue;
                }
                let (x, y) = (cx + dx, cy + dy);
                if x >= 0 && y >= 0 && (x as usize) < self.width && (y as usize) < self.height {
                    self.pixels[y as usize * self.width + x as usize] = color;
                }
            }
        }
    }
}

/// Pixel of `z` for a square canvas of `size` covering `[-R, R]^2`.
pub fn pixel_of(re: f64, im: f64, radius: f64, size: usize) -> (i64, i64) {
    let half = size as f64 / 2.0;
    let x = ((re / radius + 1.0) * half).floor() as i64;
    let y = ((1.0 - im / radius) * half).floor() as i64;
    (x, y)
}

/// Draws every `(value, layer)` pair of the image, ascending by layer and
/// then by representative, so higher layers overdraw lower ones.
pub fn rasterize(img: &PeriodImage, cfg: &RenderConfig) -> Result<Raster> {
    cfg.validate()?;
    if img.points.is_empty() {
        return Err(Error::EmptyImage);
    }
    let radius = cfg
        .viewport_radius
        .unwrap_or(1.05 * img.spec.order() as f64);
    let mut strokes: Vec<(u64, u64, (i64, i64))> = img
        .points
        .iter()
        .flat_map(|p| {
            let px = pixel_of(p.value.re, p.value.im, radius, cfg.size_px);
            p.layers.iter().map(move |&layer| (layer, p.y, px))
        })
        .collect();
    strokes.sort_unstable_by_key(|&(layer, y, _)| (layer, y));

    let mut raster = Raster::new(cfg.size_px, cfg.size_px, cfg.background);
    for (layer, _, (x, y)) in strokes {
        raster.disc(x, y, cfg.point_radius_px, cfg.color(layer, img.layer_mod));
    }
    Ok(raster)
}

/// Plots a two-dimensional `Lambda_q` over the unit square, `(0,0)` at the
/// bottom-left corner.
pub fn scatter_torus(set: &LambdaSet, cfg: &RenderConfig) -> Result<Raster> {
    cfg.validate()?;
    let pts = &set.points;
    if pts.dim() != 2 {
        return Err(Error::DimensionNot2(pts.dim()));
    }
    let size = cfg.size_px as u128;
    let den = pts.denominator() as u128;
    let color = cfg.color(0, 1);
    let mut raster = Raster::new(cfg.size_px, cfg.size_px, cfg.background);
    for i in 0..pts.len() {
        let u = pts.numerators(i);
        let x = (u[0] as u128 * size / den) as i64;
        let y = cfg.size_px as i64 - 1 - (u[1] as u128 * size / den) as i64;
        raster.disc(x, y, cfg.point_radius_px, color);
    }
    Ok(raster)
}

/// `P6` header then raw RGB triples.
pub fn encode_ppm(r: &Raster) -> Vec<u8> {
    let mut out = format!("P6\n{} {}\n255\n", r.width, r.height).into_bytes();
    out.extend(r.to_bytes());
    out
}

pub fn encode_png(r: &Raster, out: impl Write) -> Result<()> {
    let mut enc = png::Encoder::new(out, r.width as u32, r.height as u32);
    enc.set_color(png::ColorType::Rgb);
    enc.set_depth(png::BitDepth::Eight);
    let mut writer = enc.write_header()?;
    writer.write_image_data(&r.to_bytes())?;
    writer.finish()?;
    Ok(())
}

/// Writes PNG for `.png` paths and binary PPM for `.ppm` paths.
pub fn write_image(r: &Raster, path: &Path) -> Result<()> {
    let ext = path
        .extension()
        .and_then(|e| e.to_str())
        .map(str::to_ascii_lowercase);
    match ext.as_deref() {
        Some("ppm") => {
            let mut f = BufWriter::new(File::create(path)?);
            f.write_all(&encode_ppm(r))?;
            f.flush()?;
        }
        Some("png") => {
            let mut f = BufWriter::new(File::create(path)?);
            encode_png(r, &mut f)?;
            f.flush()?;
        }
        _ => return Err(Error::UnsupportedFormat(path.display().to_string())),
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::OrbitSpec;
    use crate::asymptotic::lambda_set;
    use crate::supercharacter::image;

    fn golden() -> PeriodImage {
        image(&OrbitSpec::new(5, 4).unwrap(), 1).unwrap()
    }

    fn colored(r: &Raster, bg: Rgb) -> usize {
        r.pixels().iter().filter(|&&p| p != bg).count()
    }

    #[test]
    fn golden_ratio_clusters() {
        let cfg = RenderConfig {
            size_px: 256,
            point_radius_px: 0,
            ..Default::default()
        };
        let r = rasterize(&golden(), &cfg).unwrap();
        assert_eq!(colored(&r, WHITE), 3);
        let radius: f64 = 1.05 * 2.0;
        let col = ((2.0 / radius + 1.0) * 128.0).floor() as usize;
        assert_eq!(r.get(col, 128), [255, 0, 0]);
        // disc radius 1 draws a plus shape
        let r = rasterize(&golden(), &RenderConfig { size_px: 256, ..Default::default() }).unwrap();
        assert_eq!(colored(&r, WHITE), 15);
    }

    #[test]
    fn all_zero_values_hit_center() {
        let mut img = golden();
        for p in &mut img.points {
            p.value = num_complex::Complex64::new(0.0, 0.0);
        }
        let cfg = RenderConfig {
            size_px: 64,
            point_radius_px: 0,
            ..Default::default()
        };
        let r = rasterize(&img, &cfg).unwrap();
        assert_eq!(colored(&r, WHITE), 1);
        assert_ne!(r.get(32, 32), WHITE);
    }

    #[test]
    fn empty_image_rejected() {
        let mut img = golden();
        img.points.clear();
        assert!(matches!(rasterize(&img, &RenderConfig::default()), Err(Error::EmptyImage)));
    }

    #[test]
    fn small_canvas_rejected() {
        let cfg = RenderConfig {
            size_px: 32,
            ..Default::default()
        };
        assert!(rasterize(&golden(), &cfg).is_err());
    }

    #[test]
    fn colors_come_from_palette() {
        let spec = OrbitSpec::new(1001, 2).unwrap();
        let img = image(&spec, 7).unwrap();
        let cfg = RenderConfig::default();
        let r = rasterize(&img, &cfg).unwrap();
        let palette: Vec<Rgb> = (0..7).map(|j| cfg.color(j, 7)).collect();
        assert!(r.pixels().iter().all(|p| *p == WHITE || palette.contains(p)));
        assert_eq!(r, rasterize(&img, &cfg).unwrap());
    }

    #[test]
    fn viewport_keeps_points_on_canvas() {
        // |z| <= d maps inside [0, size) with the default 1.05 d radius
        for size in [64usize, 100, 257] {
            for k in 0..360 {
                let z = crate::asymptotic::e(k as f64 / 360.0) * 4.0;
                let (x, y) = pixel_of(z.re, z.im, 4.2, size);
                assert!(x >= 0 && y >= 0 && (x as usize) < size && (y as usize) < size);
            }
        }
    }

    #[test]
    fn hsv_sextants() {
        assert_eq!(hsv_to_rgb(0.0, 1.0, 1.0), [255, 0, 0]);
        assert_eq!(hsv_to_rgb(1.0 / 3.0, 1.0, 1.0), [0, 255, 0]);
        assert_eq!(hsv_to_rgb(2.0 / 3.0, 1.0, 1.0), [0, 0, 255]);
        assert_eq!(hsv_to_rgb(0.5, 1.0, 1.0), [0, 255, 255]);
    }

    #[test]
    fn torus_scatter() {
        let set = lambda_set(7, 3).unwrap();
        let cfg = RenderConfig {
            size_px: 70,
            point_radius_px: 0,
            ..Default::default()
        };
        let r = scatter_torus(&set, &cfg).unwrap();
        assert_eq!(colored(&r, WHITE), 7);
        assert_eq!(r.get(0, 69), [255, 0, 0]);
        let set = lambda_set(73, 3).unwrap();
        let r = scatter_torus(&set, &RenderConfig { point_radius_px: 0, ..Default::default() }).unwrap();
        assert_eq!(colored(&r, WHITE), 73);
        assert_eq!(r, scatter_torus(&set, &RenderConfig { point_radius_px: 0, ..Default::default() }).unwrap());

        let set5 = lambda_set(11, 5).unwrap();
        assert!(matches!(scatter_torus(&set5, &cfg), Err(Error::DimensionNot2(4))));
    }

    #[test]
    fn ppm_bytes() {
        let r = Raster::new(1, 1, WHITE);
        let mut want = b"P6\n1 1\n255\n".to_vec();
        want.extend([255, 255, 255]);
        assert_eq!(encode_ppm(&r), want);
    }

    #[test]
    fn unknown_extension() {
        let dir = tempfile::tempdir().unwrap();
        let r = Raster::new(2, 2, WHITE);
        assert!(matches!(write_image(&r, &dir.path().join("x.bmp")), Err(Error::UnsupportedFormat(_))));
        assert!(matches!(write_image(&r, &dir.path().join("noext")), Err(Error::UnsupportedFormat(_))));
    }
}
