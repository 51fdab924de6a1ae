//! Field geometry shared by the simulator and the log abstraction.
//!
//! Coordinates are metres with the origin at the centre spot. The attacking
//! team plays towards `+x`; the attacked goal and penalty box sit at
//! `x = length / 2`.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldModel {
    pub length: f64,
    pub width: f64,
    /// Half the distance between the goal posts.
    pub goal_half_width: f64,
    pub box_depth: f64,
    pub box_half_width: f64,
    /// Region grid columns along `x`.
    pub cols: usize,
    /// Region grid rows along `y`.
    pub rows: usize,
}

impl Default for FieldModel {
    fn default() -> Self {
        FieldModel {
            length: 6.0,
            width: 4.0,
            goal_half_width: 0.4,
            box_depth: 1.0,
            box_half_width: 1.0,
            cols: 6,
            rows: 4,
        }
    }
}

/// Axis-aligned rectangle `[x0, x1] × [y0, y1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub x0: f64,
    pub y0: f64,
    pub x1: f64,
    pub y1: f64,
}

impl Rect {
    pub fn contains(&self, x: f64, y: f64) -> bool {
        x >= self.x0 && x <= self.x1 && y >= self.y0 && y <= self.y1
    }

    pub fn center(&self) -> (f64, f64) {
        ((self.x0 + self.x1) / 2.0, (self.y0 + self.y1) / 2.0)
    }

    /// Closest point of the rectangle to `(x, y)`.
    pub fn clamp(&self, x: f64, y: f64) -> (f64, f64) {
        (x.clamp(self.x0, self.x1), y.clamp(self.y0, self.y1))
    }
}

impl FieldModel {
    pub fn half_length(&self) -> f64 {
        self.length / 2.0
    }

    pub fn half_width(&self) -> f64 {
        self.width / 2.0
    }

    pub fn bounds(&self) -> Rect {
        Rect {
            x0: -self.half_length(),
            y0: -self.half_width(),
            x1: self.half_length(),
            y1: self.half_width(),
        }
    }

    pub fn contains(&self, x: f64, y: f64) -> bool {
        self.bounds().contains(x, y)
    }

    /// Penalty box in front of the attacked goal.
    pub fn attack_box(&self) -> Rect {
        Rect {
            x0: self.half_length() - self.box_depth,
            y0: -self.box_half_width,
            x1: self.half_length(),
            y1: self.box_half_width,
        }
    }

    /// Penalty box in front of the attacking team's own goal.
    pub fn defend_box(&self) -> Rect {
        Rect {
            x0: -self.half_length(),
            y0: -self.box_half_width,
            x1: -self.half_length() + self.box_depth,
            y1: self.box_half_width,
        }
    }

    pub fn attack_goal_center(&self) -> (f64, f64) {
        (self.half_length(), 0.0)
    }

    pub fn region_count(&self) -> usize {
        self.cols * self.rows
    }

    /// Region index (`row * cols + col`) containing the point, or `None`
    /// outside the field.
    pub fn region_of(&self, x: f64, y: f64) -> Option<usize> {
        if !self.contains(x, y) {
            return None;
        }
        let cw = self.length / self.cols as f64;
        let rh = self.width / self.rows as f64;
        let col = (((x + self.half_length()) / cw) as usize).min(self.cols - 1);
        let row = (((y + self.half_width()) / rh) as usize).min(self.rows - 1);
        Some(row * self.cols + col)
    }

    pub fn region_rect(&self, index: usize) -> Rect {
        let cw = self.length / self.cols as f64;
        let rh = self.width / self.rows as f64;
        let (row, col) = (index / self.cols, index % self.cols);
        let x0 = -self.half_length() + col as f64 * cw;
        let y0 = -self.half_width() + row as f64 * rh;
        Rect {
            x0,
            y0,
            x1: x0 + cw,
            y1: y0 + rh,
        }
    }

    /// Region index after reflecting across the long axis (`y → −y`).
    pub fn mirror_region_y(&self, index: usize) -> usize {
        let (row, col) = (index / self.cols, index % self.cols);
        (self.rows - 1 - row) * self.cols + col
    }

    /// Region index after reflecting across the halfway line (`x → −x`).
    pub fn mirror_region_x(&self, index: usize) -> usize {
        let (row, col) = (index / self.cols, index % self.cols);
        row * self.cols + (self.cols - 1 - col)
    }
}
