//! Discrete state vectors: per-cell values on a periodic grid.
//!
//! The same vector is read as cell averages by the conservative schemes and
//! as point values at cell centers by the nonconservative ones.

use crate::error::{FfslError, Result};
use crate::grid::{Grid1D, Grid2D};

/// A vector of per-cell values bound to a 1D grid. All entries are finite.
#[derive(Debug, Clone, PartialEq)]
pub struct CellField {
    pub grid: Grid1D,
    values: Vec<f64>,
}

impl CellField {
    pub fn new(grid: Grid1D, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.cells {
            return Err(FfslError::FieldSizeMismatch {
                len: values.len(),
                cells: grid.cells,
            });
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(FfslError::NonFiniteValue(i));
        }
        Ok(Self { grid, values })
    }

    /// Internal constructor for values produced by the schemes themselves.
    pub(crate) fn from_computed(grid: Grid1D, values: Vec<f64>) -> Result<Self> {
        Self::new(grid, values)
    }

    pub fn constant(grid: Grid1D, value: f64) -> Result<Self> {
        Self::new(grid, vec![value; grid.cells])
    }

    /// Sample `f` at cell centers (the point-value reading of the state).
    pub fn from_fn(grid: Grid1D, f: impl Fn(f64) -> f64) -> Result<Self> {
        let values = (0..grid.cells).map(|i| f(grid.cell_center(i))).collect();
        Self::new(grid, values)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Value of cell `i` with periodic index wrapping.
    pub fn at_wrapped(&self, i: isize) -> f64 {
        self.values[self.grid.wrap_index(i)]
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().fold(f64::NEG_INFINITY, |m, &v| m.max(v))
    }
}

/// Matrix of per-cell values on a 2D grid, stored row-major in x:
/// the entry for cell `(ix, iy)` sits at `ix * cells_y + iy`.
#[derive(Debug, Clone, PartialEq)]
pub struct CellField2D {
    pub grid: Grid2D,
    values: Vec<f64>,
}

impl CellField2D {
    pub fn new(grid: Grid2D, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.cells_x * grid.cells_y {
            return Err(FfslError::FieldSizeMismatch {
                len: values.len(),
                cells: grid.cells_x * grid.cells_y,
            });
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(FfslError::NonFiniteValue(i));
        }
        Ok(Self { grid, values })
    }

    /// Per-cell values from a function of the two cell-center coordinates.
    pub fn from_fn(grid: Grid2D, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        let mut values = Vec::with_capacity(grid.cells_x * grid.cells_y);
        for ix in 0..grid.cells_x {
            let x = (ix as f64 + 0.5) * grid.dx;
            for iy in 0..grid.cells_y {
                let y = (iy as f64 + 0.5) * grid.dx;
                values.push(f(x, y));
            }
        }
        Self::new(grid, values)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn at(&self, ix: usize, iy: usize) -> f64 {
        self.values[ix * self.grid.cells_y + iy]
    }

    pub fn row(&self, iy: usize) -> Vec<f64> {
        (0..self.grid.cells_x).map(|ix| self.at(ix, iy)).collect()
    }

    pub fn column(&self, ix: usize) -> Vec<f64> {
        self.values[ix * self.grid.cells_y..(ix + 1) * self.grid.cells_y].to_vec()
    }

    /// Swap the two axes (and the grid sides with them).
    pub fn transposed(&self) -> Self {
        let grid = Grid2D {
            length_x: self.grid.length_y,
            length_y: self.grid.length_x,
            cells_x: self.grid.cells_y,
            cells_y: self.grid.cells_x,
            dx: self.grid.dx,
        };
        let mut values = vec![0.0; self.values.len()];
        for ix in 0..self.grid.cells_x {
            for iy in 0..self.grid.cells_y {
                values[iy * grid.cells_y + ix] = self.at(ix, iy);
            }
        }
        Self { grid, values }
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_wrong_length_and_non_finite() {
        let g = Grid1D::new(1.0, 4).unwrap();
        assert!(CellField::new(g, vec![0.0; 3]).is_err());
        assert!(CellField::new(g, vec![0.0, f64::NAN, 0.0, 0.0]).is_err());
        assert!(CellField::new(g, vec![0.0; 4]).is_ok());
    }

    #[test]
    fn wrapped_access() {
        let g = Grid1D::new(1.0, 4).unwrap();
        let f = CellField::new(g, vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!(f.at_wrapped(-1), 4.0);
        assert_eq!(f.at_wrapped(4), 1.0);
    }

    #[test]
    fn transpose_roundtrip() {
        let g = Grid2D::new(2.0, 3.0, 4, 6).unwrap();
        let f = CellField2D::from_fn(g, |x, y| x + 10.0 * y).unwrap();
        let t = f.transposed();
        assert_eq!(t.grid.cells_x, 6);
        assert_eq!(t.at(2, 3), f.at(3, 2));
        assert_eq!(t.transposed(), f);
    }
}
