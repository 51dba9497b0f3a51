//! Truncated cohomology rings, characteristic classes and the Witten class.

mod genus;
mod parse;
mod ring;

pub use genus::{
    genus_class, pontryagin_genus_class, pontryagin_root_power_sums, power_sums_from_elementary,
    power_sums_from_pontryagin, real_witten_class, real_witten_class_symbolic,
    real_witten_class_with, witten_class, witten_class_symbolic, witten_class_with, ManifoldSpec,
    TangentData,
};
pub use parse::{parse_class, parse_rational};
pub use ring::{CohomClass, Generator, Monomial, RingSpec};
