//! Salp swarm optimization of classifier-ensemble weights, with the image
//! preprocessing and evaluation metrics around it.
//!
//! - [`ssa`]: the optimizer.
//! - [`ensemble`]: weighted soft voting and weight search.
//! - [`metrics`]: confusion matrices, per-class reports, ROC/PR, McNemar.
//! - [`imaging`]: CLAHE, gamma, Haar wavelet fusion, resizing, augmentation.
//! - [`dataio`]: CSV and text formats, stratified splits.

pub mod dataio;
pub mod ensemble;
pub mod error;
pub mod imaging;
pub mod metrics;
pub mod ssa;
pub mod types;

pub use error::{Error, Result};

// The guide's listings run as doctests; one module per chapter keeps
// failures traceable to their page.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/swarm.md")]
    mod swarm {}
    #[doc = include_str!("../../../book/src/ensemble.md")]
    mod ensemble {}
    #[doc = include_str!("../../../book/src/metrics.md")]
    mod metrics {}
    #[doc = include_str!("../../../book/src/imaging.md")]
    mod imaging {}
    #[doc = include_str!("../../../book/src/dataio.md")]
    mod dataio {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
