use levy_core::area::{asymptotic_constant, mse_exact};
use levy_core::Method;

use super::{joined, levels, methods, Flags, Output};
use crate::output::{Cell, Table};
use crate::Failure;

const DEFAULT_LEVELS: [u64; 12] = [0, 1, 2, 4, 8, 16, 32, 64, 128, 256, 512, 1024];

/// Exact MSEs at level `n`, i.e. `N = 2n` Gaussian vectors: `Â_n`, `Ã_n` and
/// `Ā_{2n}`. Level 0 only exists for the polynomial method.
pub fn mse_table(c: &crate::args::Common) -> Result<Output, Failure> {
    let levels = levels(c, &DEFAULT_LEVELS);
    let methods = methods(c);
    let mut table = Table::new(&[
        "method",
        "n",
        "N",
        "truncation",
        "mse_exact",
        "N_mse",
        "asymptotic_constant",
        "ratio_to_fourier",
    ]);
    for &n in &levels.0 {
        let n = n as usize;
        for &m in &methods {
            if n < m.min_index() {
                continue;
            }
            let index = m.index_for_level(n);
            let mse = mse_exact(m, index)?;
            let big_n = 2 * n;
            let ratio = if n >= 1 { Cell::from(mse / mse_exact(Method::Fourier, n)?) } else { Cell::Empty };
            table.push(vec![
                m.name().into(),
                n.into(),
                big_n.into(),
                index.into(),
                mse.into(),
                (big_n as f64 * mse).into(),
                asymptotic_constant(m).into(),
                ratio,
            ]);
        }
    }
    let mut flags = Flags::default();
    flags.set("n-list", &levels).set("method", joined(&methods, |m| m.name()));
    Ok((table, flags))
}
