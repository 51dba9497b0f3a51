//! The antiholomorphic-sector equivariant calculus: Laurent classes in `ξ̄_Λ`,
//! isotypic bundles, Chern and Euler classes, localization and the Witten genus.

mod bundle;
mod class;
mod classes;
mod localization;
mod loopspace;
mod two_variable;

pub use bundle::{IsotypicBundle, IsotypicComponent, RealEquivariantBundle};
pub use class::{EquivariantClass, LaurentData};
pub use classes::{
    equivariant_euler_antiholo, euler_prefactor, first_chern_antiholo,
    normalized_top_chern_antiholo, sign_power, top_chern_antiholo, weight_polynomial_antiholo,
};
pub use localization::{
    halton_points, localization_rhs, s2_example, s2_example_with_signs, s2_fixed_components,
    s2_orientation_signs, sphere_area_quadrature, verify_closedness_s2, FixedComponent, S2Report,
    CLOSEDNESS_STEP, S2_QUADRATURE_ORDER,
};
pub use loopspace::{
    graded_witten_class_with, loopspace_regularized_top_chern,
    loopspace_regularized_top_chern_with, witten_genus, witten_genus_symbolic, witten_genus_with,
    WittenGenus,
};
pub use two_variable::{
    euler_two_variable, top_chern_two_variable, TwoVariableClass, TWO_VARIABLE_MAX_RANK,
};
