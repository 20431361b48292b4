//! Equidistribution measures: t-values of projections, aggregate profiles,
//! Property A / A' rank deficiencies and the search criteria.

mod criteria;
mod family;
mod profile;
mod property;
mod rank;
mod tvalue;

pub use criteria::{crit_dq, crit_jk, crit_pi, DqParams, PiParams};
pub(crate) use criteria::{crit_dq_bounded, crit_dq_cached, crit_pi_cached};
pub use family::ProjectionFamily;
pub use profile::{t_profile, AlphaZeroPolicy, ProfileOptions, ProfileRow, TProfileReport, TauScale};
pub use property::{property_report, rank_deficiency_a, rank_deficiency_aprime, PropertyReport};
pub use rank::{rank_digits, rank_packed, DigitBasis, PackedBasis};
pub use tvalue::{
    t_value, t_value_cached, t_value_oracle, t_value_oracle_cells, RowCache, ORACLE_MAX_M,
};
