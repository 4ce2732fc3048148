//! Which cycle types occur as derangements of a graph.

mod classify;
mod families;
mod longest;
mod scan;
mod search;

pub use classify::{
    classify_all, is_even_universal, is_universal, ClassificationTable, Family, Row, RowStatus, Universality,
};
pub use families::{verify_exclusion_family, ExclusionFamily, FamilyReport, FAMILY_IDS};
pub use longest::longest_realizable_cycle;
pub use scan::{conjecture_scan, scan_sizes, CellReport, ResultRecord, ResultsStore, ScanConfig, ScanReport};
pub use search::{realize, Budget, CapReason, Mode, RealizationResult, Status, DEFAULT_NODE_BUDGET};
