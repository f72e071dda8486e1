use levy_core::bridge::eval_truncated_bridge;
use levy_core::coeffs::CoefficientSampler;
use levy_core::{ExpansionKind, RngStream};

use super::{grid, Flags, Output};
use crate::args::{Common, KindArg};
use crate::output::Table;
use crate::Failure;

/// Truncated bridge paths in long format; path `p` draws its coefficients
/// from stream `stream_offset + p`.
pub fn sample_path(c: &Common, kind: KindArg, order: u64) -> Result<Output, Failure> {
    let kind: ExpansionKind = kind.into();
    let d = c.dims.unwrap_or(1);
    if d == 0 {
        return Err(Failure::Usage("--dims must be at least 1".into()));
    }
    let paths = c.samples.unwrap_or(1);
    let grid_spec = grid(c, 101);
    let points = grid_spec.points();
    let sampler = CoefficientSampler::new(kind, order as usize, d)?;
    let mut table = Table::new(&["path", "t", "coordinate", "value"]);
    for p in 0..paths {
        let coeffs = sampler.sample(&mut RngStream::new(c.seed, c.stream_offset + p));
        for &t in &points {
            for (i, v) in eval_truncated_bridge(&coeffs, t)?.into_iter().enumerate() {
                table.push(vec![p.into(), t.into(), (i + 1).into(), v.into()]);
            }
        }
    }
    let mut flags = Flags::default();
    flags
        .set("kind", kind.name())
        .set("order", order)
        .set("dims", d)
        .set("samples", paths)
        .set("grid", &grid_spec);
    Ok((table, flags))
}
