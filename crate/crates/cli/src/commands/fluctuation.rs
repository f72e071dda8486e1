use levy_core::bridge::{limit_fluct_cov, CovGrid, CovKind};
use levy_core::mc::{fluct_grid, FluctKernel};
use levy_core::ExpansionKind;

use super::{cell_layout, grid, harness, joined, levels, Flags, Output};
use crate::args::{Common, KindArg};
use crate::output::{Cell, Table};
use crate::Failure;

const DEFAULT_LEVELS: [u64; 4] = [16, 64, 256, 1024];

/// Scaled fluctuation covariances `N C₁ᴺ`, `2N C₂ᴺ`, `N C₃ᴺ` on every grid
/// pair, with their pointwise limits and, when `--samples` is positive,
/// Monte Carlo estimates.
pub fn fluctuation(c: &Common, kinds: &[KindArg], n_ref: Option<usize>) -> Result<Output, Failure> {
    let kinds: Vec<ExpansionKind> = if kinds.is_empty() {
        ExpansionKind::ALL.to_vec()
    } else {
        kinds.iter().map(|&k| k.into()).collect()
    };
    let levels = levels(c, &DEFAULT_LEVELS);
    if levels.0.first() == Some(&0) {
        return Err(Failure::Usage("fluctuation levels must be at least 1".into()));
    }
    let grid_spec = grid(c, 101);
    let points = grid_spec.points();
    let samples = c.samples.unwrap_or(0);
    let harness = if samples > 0 { Some(harness(c)?) } else { None };
    let mut table =
        Table::new(&["kind", "N", "s", "t", "analytic_scaled", "empirical", "stderr", "limit"]);
    let mut cell = 0u64;
    for &kind in &kinds {
        for &n in &levels.0 {
            let n = n as usize;
            let analytic = CovGrid::analytic(CovKind::fluctuation(kind), n, &points, &points)?;
            let empirical = match &harness {
                Some(h) => {
                    let kernel = FluctKernel::new(kind, n, &points, n_ref.unwrap_or(4 * n))?;
                    let est = h.run(&kernel, &cell_layout(c, cell, samples));
                    cell += 1;
                    Some(fluct_grid(&kernel, &est))
                }
                None => None,
            };
            for (i, &s) in points.iter().enumerate() {
                for (j, &t) in points.iter().enumerate() {
                    let (e, se) = match &empirical {
                        Some(g) => (Cell::from(g.get(i, j)), Cell::from(g.stderr_at(i, j))),
                        None => (Cell::Empty, Cell::Empty),
                    };
                    table.push(vec![
                        kind.name().into(),
                        n.into(),
                        s.into(),
                        t.into(),
                        analytic.get(i, j).into(),
                        e,
                        se,
                        limit_fluct_cov(kind, s, t)?.into(),
                    ]);
                }
            }
        }
    }
    let mut flags = Flags::default();
    flags
        .set("kind", joined(&kinds, |k| k.name()))
        .set("n-list", &levels)
        .set("grid", &grid_spec)
        .set("samples", samples)
        .set("n-ref", n_ref.map_or("auto".to_owned(), |r| r.to_string()));
    Ok((table, flags))
}
