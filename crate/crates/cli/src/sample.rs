//! Grid sampling: evaluate a family on a structured grid and write the
//! rows in deterministic order (last axis major, first axis fastest).

use rayon::prelude::*;

use crate::config::{GridConfig, RunConfig};
use crate::families::Family;
use crate::output::SampleRow;
use crate::CliError;

/// Flattened grid coordinates in output order. For 3D grids the order is
/// z-major, then y, then x; for axisymmetric grids the axial coordinate is
/// major and the radius fastest.
pub fn grid_points(grid: &GridConfig) -> Vec<Vec<f64>> {
    let dims = grid.shape.len();
    let mut out = Vec::with_capacity(grid.total_points());
    match dims {
        2 => {
            for iz in 0..grid.shape[0] {
                for ir in 0..grid.shape[1] {
                    out.push(vec![grid.coordinate(0, iz), grid.coordinate(1, ir)]);
                }
            }
        }
        _ => {
            for iz in 0..grid.shape[2] {
                for iy in 0..grid.shape[1] {
                    for ix in 0..grid.shape[0] {
                        out.push(vec![
                            grid.coordinate(0, ix),
                            grid.coordinate(1, iy),
                            grid.coordinate(2, iz),
                        ]);
                    }
                }
            }
        }
    }
    out
}

pub fn sample_rows(config: &RunConfig, family: &Family) -> Result<Vec<SampleRow>, CliError> {
    let points = grid_points(&config.grid);
    let rows: Result<Vec<SampleRow>, String> = points
        .par_iter()
        .map(|coords| {
            let state = family
                .state_at(coords)
                .map_err(|e| format!("sampling at {coords:?}: {e}"))?;
            let (x, y, z) = match coords.len() {
                2 => (coords[0], coords[1], 0.0),
                _ => (coords[0], coords[1], coords[2]),
            };
            Ok([x, y, z, state.u, state.v, state.w, state.rho, state.p])
        })
        .collect();
    rows.map_err(CliError::config)
}
