//! The reductions and their schedule maps.

pub mod commdelay;
pub mod jobshop;
pub mod kpartite;
pub mod related;

pub use commdelay::{backward_map_commdelay, forward_map_commdelay, umps_to_commdelay, CommDelayReductionArtifact};
pub use jobshop::jobshop_to_umps;
pub use kpartite::{kpartite_to_umps, kpartite_yes_schedule, validate_certificate, yes_offsets, KPartiteYesCertificate};
pub use related::{
    default_kappa, forward_map_related, materialize, materialize_schedule, umps_to_related, validate_grouped,
    GroupPlacement, GroupedSchedule, Materialized, RelatedReductionArtifact,
};
