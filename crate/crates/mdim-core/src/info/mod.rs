//! Entropy, mutual information and the standard inequalities, in nats.
//!
//! Supports are index ranges `0..k`. Conditional quantities come from joint
//! pmfs only, so rows of zero source mass never contribute.

mod inequalities;
mod measures;
mod types;

pub use inequalities::{
    additivity_checks, concavity_in_source, convexity_in_channel, fano_gap, quantize_y,
    separated_mi_lower_bounds, AdditivityReport, FanoReport, MixtureRow, SeparatedBounds,
};
pub use measures::{
    binary_entropy, conditional_entropy, entropy, entropy_of, joint_entropy, mutual_information,
    mutual_information_of, partition_mutual_information,
};
pub use types::{Channel, Distribution, Joint, Joint3, PartitionMap};
