//! Certifying decomposition toolkit for graphs excluding a long claw: given a
//! vertex-weighted graph and an arm length t, produce either a verified
//! induced spider S_{t,t,t} or a set of at most 3t+11 vertices together with
//! a rigid extended strip decomposition of the rest in which every particle
//! carries at most half of the total weight.
//!
//! The pieces are exposed individually: graphs and their text format
//! ([`graph`]), the decomposition model with validator and rigidification
//! ([`esd`]), the balanced-separator path ([`gyarfas`]), spider search and
//! verification ([`sttt`]), three-in-a-tree backends ([`tiat`]), the driver
//! ([`decomposer`]), and reproducible instance generators ([`gen`]).

#![forbid(unsafe_code)]

pub mod decomposer;
pub mod esd;
pub mod gen;
pub mod graph;
pub mod gyarfas;
pub mod selftest;
pub mod sttt;
pub mod tiat;

pub use decomposer::{decompose, BackendConfig, Outcome};
pub use graph::{Graph, PathSeq, VertexSet};
