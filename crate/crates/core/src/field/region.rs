use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::Grid2D;

/// Integration/evaluation regions in grid coordinates.
///
/// A node belongs to a region iff its coordinates satisfy the strict
/// inequalities; there is no partial-cell weighting.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum Region {
    Ball {
        center: (f64, f64),
        radius: f64,
    },
    Rectangle {
        x0: f64,
        x1: f64,
        y0: f64,
        y1: f64,
    },
    Annulus {
        center: (f64, f64),
        r_in: f64,
        r_out: f64,
    },
    /// `d_in < |x - x_center| < d_out`, `y0 < y < y1`: an annulus in the
    /// first coordinate only, used for profiles that depend on `x` alone.
    Slab {
        x_center: f64,
        d_in: f64,
        d_out: f64,
        y0: f64,
        y1: f64,
    },
}

impl Region {
    pub fn ball(center: (f64, f64), radius: f64) -> Self {
        Region::Ball { center, radius }
    }

    pub fn rectangle(x0: f64, x1: f64, y0: f64, y1: f64) -> Self {
        Region::Rectangle { x0, x1, y0, y1 }
    }

    /// Same shape with every length multiplied by `factor` about its center
    /// (`2B` for a ball `B`).
    pub fn scaled(&self, factor: f64) -> Self {
        match *self {
            Region::Ball { center, radius } => Region::Ball {
                center,
                radius: radius * factor,
            },
            Region::Rectangle { x0, x1, y0, y1 } => {
                let (cx, cy) = ((x0 + x1) / 2.0, (y0 + y1) / 2.0);
                let (hw, hh) = ((x1 - x0) / 2.0 * factor, (y1 - y0) / 2.0 * factor);
                Region::Rectangle {
                    x0: cx - hw,
                    x1: cx + hw,
                    y0: cy - hh,
                    y1: cy + hh,
                }
            }
            Region::Annulus { center, r_in, r_out } => Region::Annulus {
                center,
                r_in: r_in * factor,
                r_out: r_out * factor,
            },
            Region::Slab {
                x_center,
                d_in,
                d_out,
                y0,
                y1,
            } => {
                let cy = (y0 + y1) / 2.0;
                let hh = (y1 - y0) / 2.0 * factor;
                Region::Slab {
                    x_center,
                    d_in: d_in * factor,
                    d_out: d_out * factor,
                    y0: cy - hh,
                    y1: cy + hh,
                }
            }
        }
    }

    /// Radius of a ball region.
    pub fn radius(&self) -> Option<f64> {
        match *self {
            Region::Ball { radius, .. } => Some(radius),
            _ => None,
        }
    }

    /// Open membership test.
    pub fn contains(&self, x: f64, y: f64) -> bool {
        match *self {
            Region::Ball { center, radius } => {
                let (dx, dy) = (x - center.0, y - center.1);
                dx * dx + dy * dy < radius * radius
            }
            Region::Rectangle { x0, x1, y0, y1 } => x0 < x && x < x1 && y0 < y && y < y1,
            Region::Annulus { center, r_in, r_out } => {
                let r2 = (x - center.0).powi(2) + (y - center.1).powi(2);
                r_in * r_in < r2 && r2 < r_out * r_out
            }
            Region::Slab {
                x_center,
                d_in,
                d_out,
                y0,
                y1,
            } => {
                let d = (x - x_center).abs();
                d_in < d && d < d_out && y0 < y && y < y1
            }
        }
    }

    /// Closed membership test (used for `C^0` norms over closed balls).
    pub fn contains_closed(&self, x: f64, y: f64) -> bool {
        match *self {
            Region::Ball { center, radius } => {
                let (dx, dy) = (x - center.0, y - center.1);
                dx * dx + dy * dy <= radius * radius
            }
            Region::Rectangle { x0, x1, y0, y1 } => x0 <= x && x <= x1 && y0 <= y && y <= y1,
            Region::Annulus { center, r_in, r_out } => {
                let r2 = (x - center.0).powi(2) + (y - center.1).powi(2);
                r_in * r_in <= r2 && r2 <= r_out * r_out
            }
            Region::Slab {
                x_center,
                d_in,
                d_out,
                y0,
                y1,
            } => {
                let d = (x - x_center).abs();
                d_in <= d && d <= d_out && y0 <= y && y <= y1
            }
        }
    }

    /// Axis-aligned bounding box `(x0, x1, y0, y1)` of the closure.
    pub fn bounding_box(&self) -> (f64, f64, f64, f64) {
        match *self {
            Region::Ball { center, radius } => (
                center.0 - radius,
                center.0 + radius,
                center.1 - radius,
                center.1 + radius,
            ),
            Region::Rectangle { x0, x1, y0, y1 } => (x0, x1, y0, y1),
            Region::Annulus { center, r_out, .. } => (
                center.0 - r_out,
                center.0 + r_out,
                center.1 - r_out,
                center.1 + r_out,
            ),
            Region::Slab {
                x_center,
                d_out,
                y0,
                y1,
                ..
            } => (x_center - d_out, x_center + d_out, y0, y1),
        }
    }

    fn check_shape(&self) -> Result<()> {
        let ok = match *self {
            Region::Ball { radius, .. } => radius > 0.0,
            Region::Rectangle { x0, x1, y0, y1 } => x1 > x0 && y1 > y0,
            Region::Annulus { r_in, r_out, .. } => r_in >= 0.0 && r_out > r_in,
            Region::Slab {
                d_in, d_out, y0, y1, ..
            } => d_in >= 0.0 && d_out > d_in && y1 > y0,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Region(format!("degenerate region {self:?}")))
        }
    }

    /// The closure must lie inside the box spanned by the interior nodes.
    pub fn check_inside(&self, grid: &Grid2D) -> Result<()> {
        self.check_shape()?;
        let (x0, x1, y0, y1) = self.bounding_box();
        let slack = 1e-9 * grid.h();
        let lo_x = grid.x_min() + grid.hx() - slack;
        let hi_x = grid.x_max() - grid.hx() + slack;
        let lo_y = grid.y_min() + grid.hy() - slack;
        let hi_y = grid.y_max() - grid.hy() + slack;
        if x0 >= lo_x && x1 <= hi_x && y0 >= lo_y && y1 <= hi_y {
            Ok(())
        } else {
            Err(Error::Region(format!(
                "{self:?} not inside interior box [{lo_x}, {hi_x}] x [{lo_y}, {hi_y}]"
            )))
        }
    }

    /// Flat indices of the nodes inside the (open) region, storage order.
    pub fn node_indices(&self, grid: &Grid2D) -> Result<Vec<usize>> {
        self.check_inside(grid)?;
        Ok(grid
            .interior_nodes()
            .filter(|&(i, j)| self.contains(grid.x(i), grid.y(j)))
            .map(|(i, j)| grid.idx(i, j))
            .collect())
    }

    /// Flat indices of the nodes in the closed region.
    pub fn closed_node_indices(&self, grid: &Grid2D) -> Result<Vec<usize>> {
        self.check_inside(grid)?;
        Ok(grid
            .interior_nodes()
            .filter(|&(i, j)| self.contains_closed(grid.x(i), grid.y(j)))
            .map(|(i, j)| grid.idx(i, j))
            .collect())
    }

    /// Rasterized area: node count times cell area.
    pub fn discrete_area(&self, grid: &Grid2D) -> Result<f64> {
        Ok(self.node_indices(grid)?.len() as f64 * grid.cell_area())
    }
}
