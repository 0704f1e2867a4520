//! Pixel-to-centered coordinate conversion.
//!
//! Centered coordinates put the origin at the image center (the assumed
//! principal point) with y up; the vertical half-extent is 1 and the
//! horizontal half-extent is the aspect ratio `width/height`.

use quadpose::Vec2;

/// Pixel dimensions of the source image.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ImageFrame {
    pub width_px: u32,
    pub height_px: u32,
}

impl ImageFrame {
    /// Parses `WxH`, e.g. `1920x1080`.
    pub fn parse(text: &str) -> Result<Self, String> {
        let (w, h) = text
            .split_once(['x', 'X'])
            .ok_or_else(|| format!("expected WxH, got {text:?}"))?;
        let width_px: u32 = w.parse().map_err(|_| format!("bad width {w:?}"))?;
        let height_px: u32 = h.parse().map_err(|_| format!("bad height {h:?}"))?;
        if width_px == 0 || height_px == 0 {
            return Err(format!("image dimensions must be at least 1x1, got {text}"));
        }
        Ok(ImageFrame {
            width_px,
            height_px,
        })
    }

    pub fn aspect(&self) -> f64 {
        self.width_px as f64 / self.height_px as f64
    }

    /// Pixel position (origin top-left, y down) to centered coordinates.
    pub fn center_coords(&self, p_px: Vec2) -> Vec2 {
        let w = self.width_px as f64;
        let h = self.height_px as f64;
        Vec2::new(
            self.aspect() * (2.0 * p_px.x / w - 1.0),
            -(2.0 * p_px.y / h - 1.0),
        )
    }

    /// Inverse of [`ImageFrame::center_coords`].
    #[allow(dead_code)]
    pub fn uncenter_coords(&self, p: Vec2) -> Vec2 {
        let w = self.width_px as f64;
        let h = self.height_px as f64;
        Vec2::new((p.x / self.aspect() + 1.0) * w / 2.0, (1.0 - p.y) * h / 2.0)
    }
}
