pub mod assumption1;
pub mod classc;

pub use assumption1::{
    check_assumption1, validate_matching, Assumption1, MatchedPair, MatchingCertificate,
    SymmetryGraph,
};
pub use classc::{
    check_radical_family, detect_shifted_even, recognize_classc, ClassC, ClassCWitness,
    RadicalFamily,
};
