//! Uniform periodic grids in one and two dimensions.
//!
//! Cell `i` of a 1D grid covers `[i*dx, (i+1)*dx)` with center `(i + 1/2)*dx`;
//! interface `k` sits at `k*dx` and separates cells `k-1` and `k` (mod `N`).
//! All index arithmetic wraps.

use crate::error::{FfslError, Result};

/// Uniform periodic partition of `[0, L)` into `N` cells.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D {
    pub length: f64,
    pub cells: usize,
    pub dx: f64,
}

impl Grid1D {
    pub fn new(length: f64, cells: usize) -> Result<Self> {
        if !(length > 0.0) || !length.is_finite() {
            return Err(FfslError::NonPositiveLength(length));
        }
        if cells == 0 {
            return Err(FfslError::ZeroCells);
        }
        Ok(Self {
            length,
            cells,
            dx: length / cells as f64,
        })
    }

    /// Map a coordinate into `[0, L)`. Idempotent.
    pub fn wrap(&self, x: f64) -> f64 {
        let y = x.rem_euclid(self.length);
        // rem_euclid can round up to L for tiny negative inputs
        if y >= self.length {
            y - self.length
        } else {
            y
        }
    }

    /// Center of cell `i`, at `(i + 1/2) dx`.
    pub fn cell_center(&self, i: usize) -> f64 {
        (i as f64 + 0.5) * self.dx
    }

    /// Interface `k`, at `k dx`; the left edge of cell `k`.
    pub fn interface(&self, k: usize) -> f64 {
        k as f64 * self.dx
    }

    /// Cell containing the (wrapped) coordinate `x`.
    pub fn cell_of(&self, x: f64) -> usize {
        let i = (self.wrap(x) / self.dx).floor() as usize;
        i.min(self.cells - 1)
    }

    /// Wrap a signed cell index onto `0..N`.
    pub fn wrap_index(&self, i: isize) -> usize {
        let n = self.cells as isize;
        i.rem_euclid(n) as usize
    }
}

/// Uniform periodic grid on `[0, Lx) x [0, Ly)` with square cells.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid2D {
    pub length_x: f64,
    pub length_y: f64,
    pub cells_x: usize,
    pub cells_y: usize,
    pub dx: f64,
}

impl Grid2D {
    pub fn new(length_x: f64, length_y: f64, cells_x: usize, cells_y: usize) -> Result<Self> {
        if !(length_x > 0.0) || !length_x.is_finite() {
            return Err(FfslError::NonPositiveLength(length_x));
        }
        if !(length_y > 0.0) || !length_y.is_finite() {
            return Err(FfslError::NonPositiveLength(length_y));
        }
        if cells_x == 0 || cells_y == 0 {
            return Err(FfslError::ZeroCells);
        }
        let dx = length_x / cells_x as f64;
        let dy = length_y / cells_y as f64;
        if (dx - dy).abs() > 2.0 * f64::EPSILON * dx.max(dy) {
            return Err(FfslError::NonSquareCells { dx, dy });
        }
        Ok(Self {
            length_x,
            length_y,
            cells_x,
            cells_y,
            dx,
        })
    }

    /// The x-direction seen as a 1D grid (used for row sweeps).
    pub fn x_axis(&self) -> Grid1D {
        Grid1D {
            length: self.length_x,
            cells: self.cells_x,
            dx: self.dx,
        }
    }

    /// The y-direction seen as a 1D grid (used for column sweeps).
    pub fn y_axis(&self) -> Grid1D {
        Grid1D {
            length: self.length_y,
            cells: self.cells_y,
            dx: self.dx,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spacing_matches_length_over_cells() {
        let g = Grid1D::new(10.0, 200).unwrap();
        assert_eq!(g.dx, 0.05);
        let g = Grid1D::new(1.0, 1).unwrap();
        assert_eq!(g.dx, 1.0);
        let g = Grid1D::new(10.0, 400).unwrap();
        assert_eq!(g.dx, 0.025);
    }

    #[test]
    fn invalid_grids_are_rejected() {
        assert!(Grid1D::new(0.0, 10).is_err());
        assert!(Grid1D::new(-1.0, 10).is_err());
        assert!(Grid1D::new(10.0, 0).is_err());
        assert!(Grid2D::new(2.0, 1.0, 10, 10).is_err());
    }

    #[test]
    fn wrap_examples() {
        let g = Grid1D::new(10.0, 100).unwrap();
        assert!((g.wrap(10.5) - 0.5).abs() < 1e-12);
        assert!((g.wrap(-0.2) - 9.8).abs() < 1e-12);
        assert_eq!(g.wrap(3.0), 3.0);
        // idempotent, and always inside [0, L)
        for &x in &[-1e3, -0.2, 0.0, 3.0, 10.0, 10.5, 1e4, -1e-300] {
            let w = g.wrap(x);
            assert!((0.0..g.length).contains(&w), "wrap({x}) = {w}");
            assert_eq!(g.wrap(w), w);
        }
    }

    #[test]
    fn cell_widths_sum_to_length() {
        for n in [1usize, 7, 50, 400] {
            let g = Grid1D::new(10.0, n).unwrap();
            let sum = g.dx * n as f64;
            assert!((sum - g.length).abs() <= n as f64 * f64::EPSILON * g.length);
        }
    }

    #[test]
    fn centers_and_interfaces() {
        let g = Grid1D::new(10.0, 200).unwrap();
        assert!((g.cell_center(0) - 0.025).abs() < 1e-15);
        assert!((g.interface(3) - 0.15).abs() < 1e-15);
        assert_eq!(g.cell_of(0.151), 3);
        assert_eq!(g.cell_of(9.999999), 199);
        assert_eq!(g.wrap_index(-1), 199);
        assert_eq!(g.wrap_index(200), 0);
    }

    #[test]
    fn square_cells_in_2d() {
        let g = Grid2D::new(6.0, 6.0, 50, 50).unwrap();
        assert!((g.dx - 0.12).abs() < 1e-15);
        let g = Grid2D::new(4.0, 2.0, 40, 20).unwrap();
        assert_eq!(g.dx, 0.1);
    }
}
