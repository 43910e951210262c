use proptest::prelude::*;

use crate::structures::{BasePair, SecondaryStructure};

/// Random pk-free structure built by inserting admissible pairs in drawn order.
pub(crate) fn arb_structure(n: usize) -> impl Strategy<Value = SecondaryStructure> {
    proptest::collection::vec(0usize..n * n, 0..n).prop_map(move |cands| {
        let mut s = SecondaryStructure::empty(n);
        for c in cands {
            let (a, b) = (c / n + 1, c % n + 1);
            if a == b {
                continue;
            }
            let p = BasePair::new(a, b);
            if s.can_insert(&p, false).is_ok() {
                s.insert(p, false).unwrap();
            }
        }
        s
    })
}
