//! Bounded-height counting: k-heights, enumeration of algebraic numbers of bounded
//! degree and height, point counts on explicit sets and growth fits.

pub mod count;
pub mod enumerate;
pub mod expr;
pub mod fit;
pub mod height;

pub use count::{
    count_points, count_points_with, count_with_mode, isolated_count, semi_rational_count, semi_rational_count_with, CountMode, CountOptions, CountResult,
    DefinableSample, SetSpec,
};
pub use enumerate::{enumerate_bounded, enumerate_bounded_with, farey_count, BoundedNumber, EnumerationLimits, Interval};
pub use expr::{Exact, Expr};
pub use fit::{growth_fit, read_csv, write_csv, GrowthFit};
pub use height::{k_height, k_height_of_min_poly, k_height_rational, KHeightValue};
