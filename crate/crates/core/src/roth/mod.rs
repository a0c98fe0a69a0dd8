//! Progression-free sets and their counters: Behrend's sphere construction,
//! the random-deletion baseline, cap sets in `F₃^n`, brute-force AP and
//! 5-term-equation searches, and density diagnostics.

mod ap;
mod behrend;
mod capset;
mod deletion;
mod density;
mod five_term;
mod set;

pub use ap::{count_k_aps, is_ap3_free};
pub use behrend::{
    behrend_dimension_window, behrend_optimize, behrend_set, embed_digits, sphere_points, BehrendParams,
    MAX_GRID_POINTS,
};
pub use capset::{capset_power, has_affine_line, has_affine_line_capped, pack, unpack, CapSet};
pub use deletion::{deletion_probability, predicted_deletion_size, random_deletion_ap3_free};
pub use density::{density_report, geometric_grid, DensityReport};
pub use five_term::{find_5term_solution, FIVE_TERM_CAP};
pub use set::{format_integer_set, parse_integer_set, read_integer_set, write_integer_set, IntegerSet};

use serde::Serialize;

/// Least-squares line through `(ln x, ln y)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LogLogFit {
    pub slope: f64,
    pub intercept: f64,
    /// Standard error of the slope; zero with two points.
    pub slope_stderr: f64,
}

/// Fits `ln y = a + b ln x`. Needs at least two points with distinct `x`,
/// all coordinates positive.
pub fn fit_loglog(points: &[(f64, f64)]) -> crate::Result<LogLogFit> {
    if points.len() < 2 || points.iter().any(|&(x, y)| x <= 0.0 || y <= 0.0) {
        return Err(crate::Error::arg("log-log fit needs two or more positive points"));
    }
    let k = points.len() as f64;
    let lx: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ly: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let mx = lx.iter().sum::<f64>() / k;
    let my = ly.iter().sum::<f64>() / k;
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(crate::Error::arg("log-log fit needs distinct x values"));
    }
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let slope_stderr = if points.len() > 2 {
        let rss: f64 = lx.iter().zip(&ly).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum();
        (rss / (k - 2.0) / sxx).sqrt()
    } else {
        0.0
    };
    Ok(LogLogFit { slope, intercept, slope_stderr })
}
