//! Shared inputs for the criterion benchmarks.

use nilgamma::{AddChar, FqField, MultChar};

/// `F_25` with the trace-composed additive character and the exponent-8
/// multiplicative character.
pub fn f25_pair() -> (MultChar, AddChar) {
    let f25 = FqField::new(5, 2).expect("F_25 exists");
    let psi = AddChar::through_trace(&f25, 1).expect("F_5 is a subfield");
    (MultChar::new(&f25, 8), psi)
}
