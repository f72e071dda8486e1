use levy_core::area::{asymptotic_constant, mse_exact};
use levy_core::mc::MseKernel;
use levy_core::stats::fit_rate;

use super::{area_dims, cell_layout, harness, joined, levels, methods, Flags, Output};
use crate::args::Common;
use crate::output::{Cell, Table};
use crate::Failure;

const DEFAULT_LEVELS: [u64; 6] = [1, 2, 4, 8, 16, 32];
const DEFAULT_SAMPLES: u64 = 100_000;

pub const COLUMNS: [&str; 16] = [
    "record",
    "method",
    "n",
    "N",
    "truncation",
    "n_ref",
    "n_samples",
    "mse_analytic",
    "mse_mc",
    "stderr",
    "coupled_analytic",
    "coupled_mc",
    "slope_running",
    "fit_slope",
    "fit_constant",
    "asymptotic_constant",
];

/// Reference truncation whose own error is negligible against the level
/// being measured.
pub fn default_n_ref(index: usize) -> usize {
    (16 * index).max(64)
}

/// For every method and level `n`: the coupled estimate of
/// `E[(approx_{n_ref} - approx_index)²]`, and `mse_mc` = that estimate plus
/// the exact `mse(n_ref)`. A final row per method fits `mse_mc ≈ C N^slope`
/// over the upper half of the levels (at least three).
pub fn convergence(c: &Common, n_ref: Option<usize>) -> Result<Output, Failure> {
    let levels = levels(c, &DEFAULT_LEVELS);
    if levels.0.first() == Some(&0) {
        return Err(Failure::Usage("convergence levels must be at least 1".into()));
    }
    let methods = methods(c);
    let d = area_dims(c)?;
    let samples = c.samples.unwrap_or(DEFAULT_SAMPLES);
    let harness = harness(c)?;
    let mut table = Table::new(&COLUMNS);
    let mut cell = 0u64;
    for &m in &methods {
        let mut points = Vec::new();
        let mut prev: Option<(f64, f64)> = None;
        for &n in &levels.0 {
            let n = n as usize;
            let index = m.index_for_level(n);
            let big_n = 2 * n;
            let reference = n_ref.unwrap_or_else(|| default_n_ref(index));
            let kernel = MseKernel::new(m, index, reference, d)?;
            let est = harness.run(&kernel, &cell_layout(c, cell, samples))[0];
            cell += 1;
            let mse_mc = est.mean() + mse_exact(m, reference)?;
            let slope = prev
                .filter(|&(_, v)| v > 0.0 && mse_mc > 0.0)
                .map(|(pn, pv)| (mse_mc / pv).ln() / (big_n as f64 / pn).ln());
            prev = Some((big_n as f64, mse_mc));
            points.push((big_n as f64, mse_mc));
            table.push(vec![
                "level".into(),
                m.name().into(),
                n.into(),
                big_n.into(),
                index.into(),
                reference.into(),
                samples.into(),
                mse_exact(m, index)?.into(),
                mse_mc.into(),
                est.stderr().into(),
                kernel.analytic()?.into(),
                est.mean().into(),
                slope.into(),
                Cell::Empty,
                Cell::Empty,
                Cell::Empty,
            ]);
        }
        if points.len() >= 3 {
            let start = (points.len() / 2).min(points.len() - 3);
            let fit = fit_rate(&points[start..])?;
            let mut row = vec![Cell::Empty; COLUMNS.len()];
            row[0] = "fit".into();
            row[1] = m.name().into();
            row[6] = samples.into();
            row[13] = fit.slope.into();
            row[14] = fit.constant.into();
            row[15] = asymptotic_constant(m).into();
            table.push(row);
        }
    }
    let mut flags = Flags::default();
    flags
        .set("samples", samples)
        .set("dims", d)
        .set("n-list", &levels)
        .set("method", joined(&methods, |m| m.name()))
        .set("n-ref", n_ref.map_or("auto".to_owned(), |r| r.to_string()));
    Ok((table, flags))
}
