//! Exact arithmetic for the orbit of zero under Newman's rational-counting
//! map, read through backward continued fractions, the dyadic odometer and
//! Minkowski's question-mark function.
//!
//! Everything is computed on exact rationals; no floating point is involved
//! in any operation of this crate.
//!
//! ```
//! use ratcount::{bcf_expand, newman_return_map, odometric_substitution, bcf_eval, Rational};
//!
//! let x: Rational = "2/5".parse().unwrap();
//! let e = bcf_expand(&x).unwrap();
//! assert_eq!(e.to_string(), "[2,4;2...]");
//! assert_eq!(bcf_eval(&odometric_substitution(&e)), newman_return_map(&x).unwrap());
//! ```

pub mod enumeration;
pub mod error;
pub mod exact;
pub mod expansions;
pub mod maps;
pub mod odometer;
pub mod qmark;
pub mod registry;
pub mod verify;

pub use enumeration::{
    calkin_wilf_oracle, dyadic_at, enum_dyadic, enum_positive, enum_unit, index_of_positive,
    index_of_unit, positive_at, unit_at, CalkinWilfBfs, EnumIndex, Enumerator,
};
pub use error::{Error, Result};
pub use exact::{int_floor, pow2_floor_exp, reduced_fractions, Dyadic, Rational};
pub use expansions::{
    bcf_eval, bcf_expand, bcf_to_blocks, bcf_to_cf, binary_expand, binary_prefix, blocks_decode,
    blocks_encode, blocks_to_bcf, cf_eval, cf_expand, cf_to_bcf, BcfExpansion, BinaryWord,
    BlockSequence, CfExpansion, Notation,
};
pub use maps::{
    backward_farey_map, doubling_hitting_time, doubling_map, dyadic_odometer_map, gauss_map,
    linear_renyi_map, newman_map, newman_return_map, orbit, renyi_branch, renyi_hitting_time,
    renyi_map, Domain, IntervalMap, MapId, MapRegistry, OrbitIter,
};
pub use odometer::{block_odometer, odometer, odometric_substitution, BitSequence};
pub use qmark::{
    qmark_bcf, qmark_bcf_series, qmark_denjoy, qmark_inverse, qmark_mediant, qmark_word,
    question_mark, QmarkRegistry, QuestionMarkAlgorithm,
};
pub use registry::Registry;
pub use verify::{run_suites, SuiteRegistry, SuiteReport, VerifySuite};
