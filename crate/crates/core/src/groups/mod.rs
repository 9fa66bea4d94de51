//! Abstract finite groups on element ids, built from presentations.

mod finite;
mod iso;
mod presentations;
mod structure;

use serde::Serialize;

pub use finite::{prime_power, FiniteGroup, Presentation, Subgroup, DEFAULT_GROUP_CAP};
pub use iso::{are_isomorphic_groups, find_isomorphism, InvariantVector};
pub use presentations::{
    admissible_lambdas, check_mp_cayley_params, multiplicative_order, mp_cayley_group, split_metacyclic_group,
    xu_zhang_group, XuZhangParams,
};
pub(crate) use presentations::pow_mod;
pub use structure::{
    MetacyclicWitness, Overgroup, SplitWitness, StructureReport, PK_ABELIAN_EXHAUSTIVE_MAX, PK_ABELIAN_SAMPLES,
};

/// Largest order whose multiplication table is included in exports.
pub const EXPORT_TABLE_MAX: usize = 512;

#[derive(Serialize)]
struct GroupExport<'a> {
    order: usize,
    presentation: &'a Presentation,
    #[serde(skip_serializing_if = "Option::is_none")]
    table: Option<Vec<Vec<u32>>>,
}

impl FiniteGroup {
    /// `{order, presentation: {kind, params}, table?}`; the table is left out
    /// above [`EXPORT_TABLE_MAX`] elements.
    pub fn to_json(&self) -> String {
        let export = GroupExport {
            order: self.order(),
            presentation: self.presentation(),
            table: (self.order() <= EXPORT_TABLE_MAX).then(|| self.table()),
        };
        serde_json::to_string(&export).expect("group export serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_export() {
        let g = split_metacyclic_group(9, 3, 4, DEFAULT_GROUP_CAP).unwrap();
        let v: serde_json::Value = serde_json::from_str(&g.to_json()).unwrap();
        assert_eq!(v["order"], 27);
        assert_eq!(v["presentation"]["kind"], "split-metacyclic");
        assert_eq!(v["table"].as_array().unwrap().len(), 27);
        let big = split_metacyclic_group(27, 27, 1, DEFAULT_GROUP_CAP).unwrap();
        let v: serde_json::Value = serde_json::from_str(&big.to_json()).unwrap();
        assert!(v.get("table").is_none());
    }
}
