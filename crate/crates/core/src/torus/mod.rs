pub mod coord;
pub mod subvariety;
pub mod torsion;
pub mod unlikely;

pub use coord::ScaledRoot;
pub use subvariety::{
    constant_monomial_lattices, defect_condition_check, defect_report, smallest_special, subgroup_dim,
    DefectReport, MonomialSubvariety, SubgroupSpec,
};
pub use torsion::{torsion_points_on_curve, LaurentPoly, RootOfUnityPoint, TorsionSearch};
pub use unlikely::{unlikely_search, UnlikelyHit};
