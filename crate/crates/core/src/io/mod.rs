//! JSON file formats and report rendering.
//!
//! Complex numbers are `[re, im]`, matrices are arrays of rows. Reports are
//! written canonically: keys sorted, floats with 17 significant digits, so
//! that re-rendering a parsed report reproduces it byte for byte.

mod canonical;
mod read;
mod report;

pub use canonical::{to_canonical_json, to_text};
pub use read::{
    load_json, parse_element, parse_generators, parse_group, parse_rep, parse_state, parse_verdict, GroupSpec,
    LoadedRep, SavedVerdict, SavedWitness,
};
pub use report::{
    asymptotic_report, charfn_report, complex_json, decompose_report, element_json, matrix_json, sym_report,
    verdict_report, verify_report,
};
