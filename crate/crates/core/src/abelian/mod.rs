//! Polarized abelian varieties over `C`, subtori and their degrees, small homomorphisms,
//! and elliptic curves over `Q` with canonical heights.

pub mod torus;

pub use torus::{
    complexity_bound, degree, degree_comparability, degree_comparability_batch, lambda_value,
    minimal_torsion_order, nearby_period, small_period_basis, torsion_coset_complexity, Comparability,
    ComplexityBounds, NearbyPeriod, PolarizedTorus, SmallPeriodBasis, Subtorus, TorsionCosetComplexity, TorusJson,
};

pub mod hom;

pub use hom::{annihilates_exactly, is_homomorphism, product_projections, small_annihilating_hom, AnnihilatingHom};

pub mod elliptic;

pub use elliptic::{canonical_height, naive_height, parse_point, CanonicalHeight, CurveJson, EllipticCurveQ, Point};
