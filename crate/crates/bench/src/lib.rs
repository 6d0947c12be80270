//! Shared inputs for the criterion benches.

use onsager_core::words::{Generator, NCPoly};

/// The commutator `[a, b]` as a free-algebra polynomial.
pub fn commutator_input(a: Generator, b: Generator) -> NCPoly {
    NCPoly::letter(a).commutator(&NCPoly::letter(b))
}
