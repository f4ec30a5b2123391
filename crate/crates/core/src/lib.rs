//! Feasibility engine and enumerator for intersection arrays of
//! distance-regular graphs.
//!
//! The crate is organised by concern:
//!
//! * [`array`]: intersection arrays and their exact combinatorial parameters
//! * [`spectral`]: certified eigenvalues, multiplicities, Krein parameters
//! * [`feasibility`]: named necessary conditions and the checking pipeline
//! * [`bounds`]: closed-form valency, clique and independence bounds
//! * [`enumerate`]: exhaustive generation with pruning, plus named presets
//! * [`catalog`]: curated existence and nonexistence data

pub mod array;
pub mod bounds;
pub mod catalog;
pub mod decimal;
pub mod enumerate;
pub mod error;
pub mod feasibility;
pub mod interval;
pub mod poly;
pub mod spectral;

pub use array::{derive_parameters, format_array, parse_array, ArrayParameters, IntersectionArray};
pub use bounds::ValencyBound;
pub use catalog::{Catalog, CatalogEntry, CatalogRecord, Status};
pub use enumerate::preset::{preset, Golden, PresetOptions, PresetResult, PRESETS};
pub use enumerate::{
    enumerate, enumerate_with, Constraints, Counts, EnumerateOptions, EnumerationResult, Rule,
    Structural,
};
pub use error::{ArrayError, BoundError, CatalogError, EnumerateError, SpectralError};
pub use feasibility::{
    certified_integer, run_pipeline, run_pipeline_with, CheckId, CheckResult, CheckStatus, FeasibilityReport, Profile, Verdict,
};
pub use interval::CertifiedReal;
pub use spectral::{SpectralOptions, Eigenvalue, KreinTensor, Spectrum, StandardSequence};
