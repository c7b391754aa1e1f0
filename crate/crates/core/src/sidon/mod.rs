//! Finite checks behind the sufficient conditions for Sidonicity: separated
//! sets and their counting bounds, quasi-independence, pair-sum coincidences
//! and a threshold classifier over certified brackets.

mod b2;
mod classify;
mod net;
mod quasi;

pub use b2::{b2_coincidences, B2Report};
pub use classify::{classify, classify_brackets, kappa_n_threshold, ClassificationReport, RungFlag};
pub use net::{
    default_net_epsilon, maximal_separated_set, pisier_report, roots_count_bound, sup_chordal_distance,
    volume_bound, PisierReport, SeparatedSet,
};
pub use quasi::{quasi_independent, quasi_independent_direct, QuasiReport};
