//! Binary PPM (P6) raster output for basin images.
//!
//! Fixed palette: basin labels cycle through red, green, blue; label 0 is
//! the non-convergence sentinel (black); cells outside the plotted region
//! are white.

pub const SENTINEL_COLOR: [u8; 3] = [0, 0, 0];
pub const BACKGROUND_COLOR: [u8; 3] = [255, 255, 255];
pub const LABEL_COLORS: [[u8; 3]; 3] = [[255, 0, 0], [0, 255, 0], [0, 0, 255]];

/// Color for a basin label: None = outside the region, Some(0) = sentinel,
/// Some(k >= 1) = k-th eigenpair.
pub fn label_color(label: Option<usize>) -> [u8; 3] {
    match label {
        None => BACKGROUND_COLOR,
        Some(0) => SENTINEL_COLOR,
        Some(k) => LABEL_COLORS[(k - 1) % LABEL_COLORS.len()],
    }
}

/// Row-major RGB image, (0, 0) at the top left.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PpmImage {
    width: usize,
    height: usize,
    pixels: Vec<[u8; 3]>,
}

impl PpmImage {
    pub fn new(width: usize, height: usize, fill: [u8; 3]) -> Self {
        assert!(width > 0 && height > 0, "image must be nonempty");
        PpmImage { width, height, pixels: vec![fill; width * height] }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn set(&mut self, x: usize, y: usize, color: [u8; 3]) {
        assert!(x < self.width && y < self.height, "pixel ({x}, {y}) out of bounds");
        self.pixels[y * self.width + x] = color;
    }

    pub fn get(&self, x: usize, y: usize) -> [u8; 3] {
        self.pixels[y * self.width + x]
    }

    /// Binary P6 encoding: header then raw RGB triples.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = format!("P6\n{} {}\n255\n", self.width, self.height).into_bytes();
        out.reserve(self.pixels.len() * 3);
        for p in &self.pixels {
            out.extend_from_slice(p);
        }
        out
    }

    pub fn write(&self, path: &std::path::Path) -> std::io::Result<()> {
        std::fs::write(path, self.to_bytes())
    }
}
