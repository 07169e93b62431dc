//! Functional-equation data for the four families and the closed forms of
//! `L'/L(s0) + L'/L(k - s0)` and its higher-derivative analogues.

mod closed;
mod datum;

pub use closed::{
    closed_form_higher, closed_form_higher_exact, closed_form_sum, closed_form_sum_exact, quotient_derivative_convert,
    ConvertDirection,
};
pub use datum::{is_fundamental_discriminant, minkowski_consistent, CriticalPoint, ExactComplex, FamilyDatum, FamilyKind};
