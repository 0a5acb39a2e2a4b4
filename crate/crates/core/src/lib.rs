#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod numctx;
pub mod hyperseries;
pub mod quad;
pub mod multint;
pub mod barnes;
pub mod zetaforms;
pub mod identity;
pub mod cli;
