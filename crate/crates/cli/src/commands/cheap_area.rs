use levy_core::area::{cheap_area as draw_cheap, stitch_subintervals};
use levy_core::mc::FnKernel;

use super::{area_dims, cell_layout, harness, joined, levels, variants, Flags, Output};
use crate::args::Common;
use crate::output::{Cell, Table};
use crate::Failure;

const DEFAULT_LEVELS: [u64; 4] = [1, 2, 4, 16];
const DEFAULT_SAMPLES: u64 = 100_000;

pub const COLUMNS: [&str; 11] = [
    "variant",
    "n_sub",
    "n_samples",
    "area_sq",
    "area_sq_stderr",
    "area_sq_exact",
    "area_w1",
    "area_w1_stderr",
    "lambda_sq",
    "lambda_sq_stderr",
    "lambda_sq_exact",
];

/// Moments of the `(1, 2)` entry of the one-term approximation stitched over
/// `n_sub` subintervals (the levels of `--n-list`): `E[A²]` (exactly 1/4),
/// `E[A W₁⁽¹⁾]` (exactly 0) and, for `n_sub = 1`, `E[λ²]` (exactly 1/12).
pub fn cheap_area(c: &Common) -> Result<Output, Failure> {
    let levels = levels(c, &DEFAULT_LEVELS);
    if levels.0.first() == Some(&0) {
        return Err(Failure::Usage("subinterval counts must be at least 1".into()));
    }
    let variants = variants(c);
    let d = area_dims(c)?;
    let samples = c.samples.unwrap_or(DEFAULT_SAMPLES);
    let harness = harness(c)?;
    let mut table = Table::new(&COLUMNS);
    let mut cell = 0u64;
    for &v in &variants {
        for &n_sub in &levels.0 {
            let n_sub = n_sub as usize;
            let kernel = FnKernel::new(3, |s, out| {
                if n_sub == 1 {
                    let a = draw_cheap(s, d, v).expect("dimension validated");
                    let x = a.area.get(0, 1);
                    out[0] = x * x;
                    out[1] = x * a.w1[0];
                    out[2] = a.lambda.get(0, 1) * a.lambda.get(0, 1);
                } else {
                    let a = stitch_subintervals(s, d, n_sub, v).expect("dimension validated");
                    let x = a.area.get(0, 1);
                    out[0] = x * x;
                    out[1] = x * a.increment[0];
                    out[2] = 0.0;
                }
            });
            let est = harness.run(&kernel, &cell_layout(c, cell, samples));
            cell += 1;
            let (lam, lam_se, lam_exact) = if n_sub == 1 {
                (Cell::from(est[2].mean()), Cell::from(est[2].stderr()), Cell::from(1.0 / 12.0))
            } else {
                (Cell::Empty, Cell::Empty, Cell::Empty)
            };
            table.push(vec![
                v.name().into(),
                n_sub.into(),
                samples.into(),
                est[0].mean().into(),
                est[0].stderr().into(),
                0.25.into(),
                est[1].mean().into(),
                est[1].stderr().into(),
                lam,
                lam_se,
                lam_exact,
            ]);
        }
    }
    let mut flags = Flags::default();
    flags
        .set("samples", samples)
        .set("dims", d)
        .set("n-list", &levels)
        .set("variant", joined(&variants, |v| v.name()));
    Ok((table, flags))
}
