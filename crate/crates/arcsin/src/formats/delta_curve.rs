//! Deviation-curve export: the permissible upward and downward adjustment
//! for every component value on a uniform grid over [-1, 1], at one fixed
//! rotation budget. The table feeds external plotting tools.

use crate::error::Result;
use crate::injector::{delta_minus, delta_plus};
use std::path::Path;

use super::atomic_write;

/// Write a CSV table with header `y0,delta_plus,delta_minus` and
/// `grid_points` rows spanning [-1, 1] inclusive.
pub fn export_delta_curve(alpha: f64, grid_points: usize, path: &Path) -> Result<()> {
    let table = render_delta_curve(alpha, grid_points)?;
    atomic_write(path, table.as_bytes())
}

pub(crate) fn render_delta_curve(alpha: f64, grid_points: usize) -> Result<String> {
    if grid_points < 2 {
        return Err(crate::error::Error::OutOfRange {
            name: "grid_points",
            value: grid_points as f64,
            min: 2.0,
            max: f64::INFINITY,
        });
    }
    // validates alpha up front so no partial table is ever produced
    delta_plus(0.0, alpha)?;

    let mut out = String::from("y0,delta_plus,delta_minus\n");
    let steps = (grid_points - 1) as f64;
    for i in 0..grid_points {
        let y = -1.0 + 2.0 * i as f64 / steps;
        let dp = delta_plus(y, alpha)?;
        let dm = delta_minus(y, alpha)?;
        out.push_str(&format!("{y},{dp},{dm}\n"));
    }
    Ok(out)
}
