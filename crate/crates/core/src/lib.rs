//! Bordered Heegaard Floer computations over the torus algebra.
//!
//! The pieces, bottom up: [`algebra`] for the torus algebra,
//! [`structure`] for modules and bimodules over labelled copies of it,
//! [`tensor`] for the box tensor product, [`reduction`] for edge
//! cancellation, [`knot`] for type D structures of framed knot complements,
//! [`fixtures`] for the embedded Borromean bimodules and [`pipeline`] for τ
//! of the satellites D_{J,s}(K,t).

pub mod algebra;
pub mod error;
pub mod f2;
pub mod fixtures;
pub mod io;
pub mod knot;
pub mod pipeline;
pub mod random;
pub mod reduction;
pub mod structure;
pub mod tensor;
pub mod validate;

pub use algebra::{chord_idempotents, mul, parse_element, AlgebraElement, Basis, Chord, Idempotent};
pub use error::{Error, Result};
pub use fixtures::{alexander_triple, bucket_counts, check_fixtures, derive_cfaa_y_b3, fixtures, prune_reference, FixtureSet};
pub use io::{load_structure, save_structure};
pub use knot::{build_cfd, builtin_model, load_model, validate_model, CfkModel, FramedComplement, BUILTIN_MODELS};
pub use pipeline::{
    alexander_polynomial, sweep, tau_satellite, tau_whitehead, theorem_prediction, whitehead_prediction, PipelineOptions,
    SatelliteReport, SatelliteRequest, SweepRow, WhiteheadSign,
};
pub use reduction::{
    associated_graded_homology, brute_homology, cancel_pair, reduce, CancellationOrder, CancellationPolicy, ReductionResult,
};
pub use structure::{BorderedStructure, Generator, OperationTerm, Payload, SideKind, SideSpec};
pub use tensor::{box_tensor, glue_filtered_complex, TensorPlan};
pub use validate::{validate_a_infinity, validate_generic, validate_type_d, Report, SequencePool};
