//! Few-shot action recognition with frozen dual encoders and parameter-efficient
//! task adapters.
//!
//! The crate implements the full episodic pipeline on synthetic
//! temporally-discriminative video data: a visual branch (patch-embedded ViT
//! blocks with temporal/spatial/task attention adapters), a semantic branch
//! (sub-action prompts through a text transformer with order adapters), a
//! fine-grained cross-modal alignment module, metric-based scoring with product
//! fusion, and the training/evaluation tooling around them.

pub mod autodiff;
pub mod error;

pub use error::{Error, Result};
