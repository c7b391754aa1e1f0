//! Certified Kronecker constants of finite sets of characters.

pub mod angle;
pub mod engine;
pub mod error;
pub mod gallery;
pub mod group;
pub mod sidon;

pub use angle::{angle_of_chord, angular_distance, chordal_of_angle, Angle, Turns, ANGLE_TOL};
pub use engine::{
    alpha, alpha_n, approx_error, best_point, kappa_variants, Approximation, ChordalBracket,
    EngineConfig, ErrorBracket, InnerMode, KroneckerResult, LadderRung, TargetMap, WorkStats,
};
pub use error::{Error, Result};
pub use gallery::{
    make_example, verify_example, ExampleSpec, GalleryConfig, VerificationReport,
};
pub use group::{evaluate_arg, Character, CharacterSet, DualPoint, GroupSpec};
pub use sidon::{
    b2_coincidences, classify, maximal_separated_set, pisier_report, quasi_independent, roots_count_bound,
    volume_bound, ClassificationReport, PisierReport, SeparatedSet,
};
