//! Exact algebra kernel for the alternating central extension of the
//! q-Onsager algebra: rational-function scalars, PBW normal forms, overlap
//! checks, generating functions, central elements and graded dimensions.

pub mod central;
pub mod dims;
pub mod qfield;
pub mod relations;
pub mod report;
pub mod rewrite;
pub mod series;
pub mod words;

pub use qfield::{ArithError, QRat};
pub use report::{CaseResult, CheckReport};
pub use rewrite::{apply_rule, normal_form, RuleApplication, RuleId};
pub use words::{Family, Generator, NCPoly, Weight, Word};
