//! The j-function, modular polynomials, and special subvarieties of `Y(1)^n`.

pub mod jfunc;
pub mod phi;
pub mod special;
pub mod upper_half;

pub use jfunc::{j_coefficients, j_eval, j_value, JValue};
pub use phi::{
    detect_modular_relation, modular_polynomial, phi_residual, psi, ModularPolynomial, ModularRelation,
};
pub use special::{
    complexity, discriminant, mobius_fiber, special_point_parameter_height, MobiusFiber, ParameterHeight,
    QuadraticPoint, RationalScalingMatrix, RealMat2, SpecialSubvarietyModular,
};
pub use upper_half::{reduce_to_fundamental_domain, Mat2, UpperHalfPoint};
