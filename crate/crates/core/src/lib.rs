//! Augments a connected outerplanar graph of pathwidth `p` to a 2-connected
//! outerplanar supergraph with a path decomposition of width at most `16p + 15`.

pub mod blocks;
pub mod decomposition;
pub mod embed;
pub mod error;
pub mod gen;
pub mod graph;
pub mod oracle;
pub mod pipeline;
pub mod stage1;
pub mod stage2;
pub mod stage3;
pub mod treepw;
pub mod verify;

pub use blocks::{biconnected_blocks, Block, BlockId, BlockKind, RootedBlockTree};
pub use decomposition::{Gap, PathDecomposition, Ranges, TreeDecomposition, Violation};
pub use embed::{
    check_outerplanar, embedded_block_tree, fix_clockwise_order, Orientation, OuterplanarCertificate, Witness,
};
pub use error::{Error, Result};
pub use gen::{generate, Attach, GenSpec};
pub use graph::Graph;
pub use pipeline::{augment, augment_with, Augmentation, PipelineOptions};
pub use stage2::TieBreak;
pub use verify::{verify_pipeline, verify_trace_text, PipelineReport, Trace};

#[cfg(doctest)]
#[doc = include_str!("../../../README.md")]
pub struct ReadmeDoctests;
