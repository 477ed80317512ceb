//! Finite groups on indexed elements, subgroups, quotients and words.

pub mod corpus;
mod finite;
pub mod law;
mod parse;
mod subgroup;
mod traits;
mod word;

pub use finite::{Caps, FiniteGroup};
pub use parse::{parse_cycles, parse_group_file};
pub use subgroup::{CentralSeries, QuotientData, Subgroup};
pub use traits::{Group, PowerGroup};
pub use word::{parse_word, GroupWord, Letter};
