//! Normal forms of subalgebras with a CR orbit, the slice through `o`, and the
//! CR classification of all orbits.

mod classify;
mod normalize;
mod slice;
mod spec;

pub use classify::{
    classify_subalgebra, theorem_a_classify, theorem_a_predicate, OrbitQuery, OrbitReport,
};
pub use normalize::{prop31_normalize, Normalization, UnitaryFrame};
pub use slice::{slice_reduce, SliceDecomposition};
pub use spec::{build_subalgebra, AlphaSplit, Kind, StructuredCoords, SubalgebraSpec, TypeTag};
