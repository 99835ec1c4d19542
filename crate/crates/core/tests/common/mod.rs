#![allow(dead_code)]

use cproj_core::{AttributeSet, BooleanDatabase};
use proptest::prelude::*;

/// Databases of up to 8 attributes by 6 objects.
pub fn small_db() -> impl Strategy<Value = BooleanDatabase> {
    (1usize..=8, 1usize..=6).prop_flat_map(|(na, no)| {
        prop::collection::vec(prop::collection::vec(any::<bool>(), na), no).prop_map(move |rows| {
            let rows = rows
                .into_iter()
                .map(|r| AttributeSet::from_indices(na, r.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i)))
                .collect();
            BooleanDatabase::from_rows(
                (1..=na).map(|i| format!("a{i}")).collect(),
                (1..=no).map(|i| format!("o{i}")).collect(),
                rows,
            )
            .unwrap()
        })
    })
}

pub fn mask_set<S: cproj_core::Space>(n: usize, mask: u64) -> cproj_core::BitSet<S> {
    cproj_core::BitSet::from_indices(n, (0..n).filter(|i| mask >> i & 1 == 1))
}
