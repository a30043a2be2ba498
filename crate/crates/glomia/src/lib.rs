//! Label-only membership inference against graph-classification GNNs.
//!
//! The library is an attack laboratory built around one question: given a
//! trained graph classifier that answers nothing but predicted labels, can an
//! adversary tell whether a particular graph was in its training set?
//!
//! The attack works by perturbing the node features of a target graph many
//! times, querying the classifier on every copy, and measuring how stable the
//! predicted label is. Training-set members sit further from the decision
//! boundary, so their predictions survive more noise. A shadow model trained
//! on disjoint data of the same distribution calibrates both the perturbation
//! magnitude and the decision threshold.
//!
//! Module map:
//!
//! - [`tensor`] — dense 64-bit matrices, a seeded PRNG with derived child
//!   streams, Adam, and a finite-difference gradient checker.
//! - [`tud`] — parser for the flat-file graph benchmark layout
//!   (`<name>_A.txt`, `<name>_graph_indicator.txt`, ...).
//! - [`gnn`] — four 2-layer graph classifiers (GCN, GAT, GraphSAGE-mean,
//!   GIN) with hand-derived backpropagation and full-batch Adam training.
//! - [`perturb`] — signed uniform noise applied to non-zero feature entries.
//! - [`attack`] — robustness scoring, shadow calibration, membership
//!   decisions, ROC/AUC metrics, and the gap / cross-entropy / modified
//!   prediction entropy baselines.
//! - [`harness`] — experiment orchestration: splits, repetitions, reports,
//!   and the config format consumed by the `glomia` binary.
//! - [`synth`] — synthetic corpora for smoke tests and the runnable
//!   examples, so nothing here needs a dataset download to try out.
//!
//! See the crate examples (`cargo run --example ...`) for one runnable
//! walkthrough per capability.

pub mod attack;
pub mod error;
pub mod gnn;
pub mod harness;
pub mod perturb;
pub mod synth;
pub mod tensor;
pub mod tud;

pub use error::{Error, Result};
