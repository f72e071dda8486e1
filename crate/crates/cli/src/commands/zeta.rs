use levy_core::zeta::{bernoulli, zeta_even_from};

use super::{Flags, Output};
use crate::output::Table;
use crate::Failure;

/// Rows `n, ζ(2n), B_{2n}` with the Bernoulli number as an exact fraction.
pub fn zeta(max_n: u32) -> Result<Output, Failure> {
    let table_b = bernoulli(2 * max_n as usize)?;
    let mut table = Table::new(&["n", "zeta_2n", "bernoulli_2n"]);
    for n in 1..=max_n {
        let b = table_b.get(2 * n as usize);
        table.push(vec![
            (n as u64).into(),
            zeta_even_from(&table_b, n)?.into(),
            format!("{}/{}", b.numer(), b.denom()).into(),
        ]);
    }
    let mut flags = Flags::default();
    flags.set("max-n", max_n);
    Ok((table, flags))
}
