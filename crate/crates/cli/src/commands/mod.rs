//! One module per subcommand. Each builds a [`Table`] and the effective
//! flag set; [`execute`] renders and writes it.

mod cheap_area;
mod convergence;
mod fluctuation;
mod mse_table;
mod sample_path;
mod zeta;

use levy_core::mc::SampleLayout;
use levy_core::{CheapVariant, Method};

use crate::args::{Cli, Command, Common, Grid, NList};
use crate::harness::Harness;
use crate::output::{emit, render, Meta, Table};
use crate::Failure;

pub use cheap_area::cheap_area;
pub use convergence::convergence;
pub use fluctuation::fluctuation;
pub use mse_table::mse_table;
pub use sample_path::sample_path;
pub use zeta::zeta;

pub fn execute(cli: &Cli) -> Result<(), Failure> {
    let c = &cli.common;
    let (table, flags) = match &cli.command {
        Command::Zeta { max_n } => zeta(*max_n)?,
        Command::MseTable => mse_table(c)?,
        Command::Convergence { n_ref } => convergence(c, *n_ref)?,
        Command::Fluctuation { kind, n_ref } => fluctuation(c, kind, *n_ref)?,
        Command::SamplePath { kind, order } => sample_path(c, *kind, *order)?,
        Command::CheapArea => cheap_area(c)?,
    };
    let meta = Meta { command: cli.command.name().to_owned(), seed: c.seed, flags: flags.finish(c) };
    let bytes = render(&table, &meta, c.format)?;
    emit(&bytes, c.out.as_deref())?;
    Ok(())
}

/// Effective flag values for the metadata header. The thread count and the
/// output path are left out on purpose: they do not change the results, and
/// files from runs that differ only in those must be identical.
#[derive(Debug, Default)]
pub struct Flags(Vec<(String, String)>);

impl Flags {
    pub fn set(&mut self, name: &str, value: impl ToString) -> &mut Self {
        self.0.push((name.to_owned(), value.to_string()));
        self
    }

    fn finish(mut self, c: &Common) -> Vec<(String, String)> {
        self.set("stream-offset", c.stream_offset);
        self.set("format", format!("{:?}", c.format).to_lowercase());
        self.0
    }
}

pub type Output = (Table, Flags);

fn levels(c: &Common, default: &[u64]) -> NList {
    c.n_list.clone().unwrap_or_else(|| NList(default.to_vec()))
}

fn grid(c: &Common, default: usize) -> Grid {
    c.grid.clone().unwrap_or(Grid::Uniform(default))
}

fn methods(c: &Common) -> Vec<Method> {
    if c.method.is_empty() {
        Method::ALL.to_vec()
    } else {
        c.method.iter().map(|&m| m.into()).collect()
    }
}

fn variants(c: &Common) -> Vec<CheapVariant> {
    if c.variant.is_empty() {
        vec![CheapVariant::DavieFlint, CheapVariant::Foster]
    } else {
        c.variant.iter().map(|&v| v.into()).collect()
    }
}

fn joined<T, F: Fn(&T) -> &'static str>(items: &[T], name: F) -> String {
    items.iter().map(name).collect::<Vec<_>>().join(",")
}

fn area_dims(c: &Common) -> Result<usize, Failure> {
    let d = c.dims.unwrap_or(2);
    if d < 2 {
        return Err(Failure::Usage("--dims must be at least 2 for Lévy areas".into()));
    }
    Ok(d)
}

fn harness(c: &Common) -> Result<Harness, Failure> {
    Ok(Harness::new(c.threads.map(|t| t as usize))?)
}

/// Layout of the `cell`-th Monte Carlo run of a command: cells use disjoint
/// stream ranges.
fn cell_layout(c: &Common, cell: u64, samples: u64) -> SampleLayout {
    SampleLayout::new(c.seed, samples).with_offset(c.stream_offset + cell * samples)
}
