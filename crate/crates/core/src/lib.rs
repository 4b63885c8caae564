//! Exact structure of the graded pieces `H^i_I(R)_u` of local cohomology
//! of `R = Z[X_1..X_n]` supported on a C-monomial ideal
//! `I = (a_1 U_1, ..., a_c U_c)`.
//!
//! For each degree `u` the Čech complex on the generators is sliced to a
//! finite complex of localizations `Z[1/m]`. Its rational homology gives
//! `α(u)`; at each prime `p` it becomes a complex of sums of `Z_(p)` and
//! `Q`, whose homology is reported as `Z_(p)^a ⊕ Q^b ⊕ E(p)^ℓ ⊕ ⊕ Z/p^β`.
//! An independent check reduces the slice mod `p^K` and compares integer
//! Smith-form homology with the universal-coefficient prediction.

pub mod arith;
pub mod assembly;
pub mod cech;
pub mod error;
pub mod linalg;
pub mod matrix;
pub mod monomial;
pub mod plocal;
pub mod rational;
pub mod snf;

pub use assembly::{
    analyze_degree, bass, structure_report, tame_scan, tame_scan_seeded, torsion_primes,
    verify_report, BassNumbers, BlockScan, DegreeAnalysis, OracleKs, ReportJson, StructureReport,
    TorsionPrimeSet, Transcript,
};
pub use cech::{
    build_slice, CechSlice, CechSummand, ModularComplex, PLocalComplex, RationalComplex,
    SummandKind,
};
pub use error::{Error, Result};
pub use matrix::Mat;
pub use monomial::{blocks, Block, CMonomialIdeal, ExponentVector, Generator, MonomialPrime};
pub use plocal::{
    finite_approx, homology_at, kernel_basis, local_snf, uct_predict, FiniteGroup, PElem, ValMatrix,
};
pub use rational::{alpha, alpha_table, AlphaTable};
