//! Operational calculus for constant-coefficient operators: exact
//! polynomial symbols, the Koszul complex with its contracting homotopy,
//! characteristic directions at infinity, and division by the symbol.

mod charvar;
mod koszul;
mod poly;
mod rat;
mod solve;

pub use charvar::{
    char_infinity, check_solvable, projective_distance, CharReport, CharSample, SolvabilityReport, SolvableOptions,
};
pub use koszul::{
    koszul_d, koszul_homotopy, koszul_homotopy_check, monomials_upto, regular_sequence_check_bounded, HomotopyReport,
    KoszulElement, RegularityReport,
};
pub use poly::{principal_symbol, DiffOp, MultiPoly};
pub use rat::CRat;
pub use solve::{residual_pairing, solve, transform_quotient, Residual, Solution, SolveOptions};
