//! Exact-arithmetic workbench for quadratic number fields.
//!
//! Every object lives in a field `K = Q(√d)` and is represented exactly:
//! elements by rational coordinates in the integral basis `(1, ω)`,
//! fractional ideals by Hermite-normal-form lattices with a denominator.
//! On top of that the crate computes class groups, splitting of rational
//! primes, capitulation orders `O_K ⊕ M⁻¹x ⊕ … ⊕ M^{1-n}x^{n-1}`, Gauss sums
//! in cyclotomic rings, and a claim harness that checks statements about
//! these objects on concrete fields.

pub mod abelian;
pub mod capitulation;
pub mod claims;
pub mod classgroup;
pub mod cli;
pub mod cyclotomic;
pub mod error;
pub mod forms;
pub mod ideals;
pub mod lattice;
pub mod quadfield;
pub mod splitting;
mod util;

pub use capitulation::{CapitulationCertificate, CapitulationStatus, RelativeOrder};
pub use claims::{ClaimId, ClaimOutcome, ClaimReport, ClaimStatus};
pub use classgroup::ClassGroup;
pub use cyclotomic::CyclotomicElement;
pub use error::{Error, Result};
pub use ideals::FractionalIdeal;
pub use quadfield::{FieldElement, QuadraticField};
pub use splitting::{SplitKind, SplittingReport, Witness};
