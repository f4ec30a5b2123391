//! Shared inputs for the criterion benchmarks.

use drg_core::{parse_array, IntersectionArray};

/// A spread of arrays with exact and irrational spectra, diameters 2 to 4.
pub const SAMPLE_ARRAYS: &[&str] = &[
    "3,2;1,1",
    "2,1;1,1",
    "6,4,2;1,2,3",
    "7,6,6;1,1,2",
    "15,14,12;1,1,9",
    "10,8,8,2;1,1,4,5",
    "170,168,160,128;1,5,21,85",
];

pub fn sample_arrays() -> Vec<IntersectionArray> {
    SAMPLE_ARRAYS
        .iter()
        .map(|s| parse_array(s).expect("sample arrays are valid"))
        .collect()
}
