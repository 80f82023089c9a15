//! Complaint mining for star-rated consumer reviews.
//!
//! Reviews are loaded and filtered by rating ([`corpus`]), profiled with n-gram
//! counts and competitor mentions ([`ngram`]), modeled with LDA fit by collapsed
//! Gibbs sampling ([`lda`]), and rendered as labeled topic reports with category
//! rollups ([`report`]). [`cli`] wires the stages into one command-line tool.

pub mod cli;
pub mod corpus;
pub mod lda;
pub mod ngram;
pub mod report;
