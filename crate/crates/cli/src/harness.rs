//! Parallel driver for the block-structured kernels of `levy_core::mc`.
//!
//! Blocks are computed on a rayon pool and merged in block order with the
//! same tree as the serial driver, so every thread count gives the same bits.

use anyhow::{Context, Result};
use levy_core::mc::{merge_blocks, run_block, SampleKernel, SampleLayout};
use levy_core::MCEstimate;
use rayon::prelude::*;
use rayon::{ThreadPool, ThreadPoolBuilder};

pub struct Harness {
    pool: ThreadPool,
}

impl Harness {
    /// `threads = None` uses the hardware parallelism.
    pub fn new(threads: Option<usize>) -> Result<Self> {
        let pool = ThreadPoolBuilder::new()
            .num_threads(threads.unwrap_or(0))
            .build()
            .context("building the worker pool")?;
        Ok(Harness { pool })
    }

    pub fn threads(&self) -> usize {
        self.pool.current_num_threads()
    }

    pub fn run<K: SampleKernel>(&self, kernel: &K, layout: &SampleLayout) -> Vec<MCEstimate> {
        let blocks: Vec<Vec<MCEstimate>> = self.pool.install(|| {
            (0..layout.n_blocks()).into_par_iter().map(|b| run_block(kernel, layout, b)).collect()
        });
        merge_blocks(&blocks, kernel.width())
    }
}
