//! Front end for the `kron` binary.

pub mod app;
pub mod report;
pub mod spec_text;

pub use app::run;
pub use spec_text::{parse_set_spec, SpecError};
