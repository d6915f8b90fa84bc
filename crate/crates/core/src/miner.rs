//! Concept enumeration over a transaction database.
//!
//! A concept is a pair `(A, B)` with `A' = B` and `B' = A`, where `A'` is the
//! set of items shared by every transaction in `A` and `B'` the set of
//! transactions containing all of `B`. Intents are exactly the closed itemsets
//! of the database and the support of an intent is the size of its extent, so
//! the concepts are enumerated with prefix-preserving closure extension
//! (the LCM scheme): each closed itemset is generated exactly once from a
//! unique parent, without storing previously seen sets.

use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::binarize::TransactionDatabase;
use crate::bitset::BitSet;
use crate::error::{Error, Result};

/// An (extent, intent) pair. The extent ranges over transactions, the intent
/// over items.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Concept {
    pub extent: BitSet,
    pub intent: BitSet,
}

impl Concept {
    /// Size of the extent.
    #[inline]
    pub fn support(&self) -> usize {
        self.extent.count()
    }
}

/// Descending support, then lexicographic intent.
fn canonical_order(a: &Concept, b: &Concept) -> Ordering {
    b.support()
        .cmp(&a.support())
        .then_with(|| a.intent.cmp(&b.intent))
}

/// The concepts of a database with extent size at least `min_support`.
///
/// When `min_support` is 0 the set is the full concept lattice, bottom
/// concept included.
#[derive(Debug, Clone, PartialEq)]
pub struct ConceptSet {
    num_objects: usize,
    num_items: usize,
    min_support: usize,
    concepts: Vec<Concept>,
    context: Option<Vec<BitSet>>,
}

impl ConceptSet {
    /// Wraps externally produced concepts. Checks universes and extent
    /// uniqueness and puts the concepts in canonical order; it does not
    /// re-derive them.
    pub fn new(
        num_objects: usize,
        num_items: usize,
        min_support: usize,
        mut concepts: Vec<Concept>,
    ) -> Result<Self> {
        for c in &concepts {
            if c.extent.universe() != num_objects {
                return Err(Error::UniverseMismatch {
                    expected: num_objects,
                    found: c.extent.universe(),
                });
            }
            if c.intent.universe() != num_items {
                return Err(Error::UniverseMismatch {
                    expected: num_items,
                    found: c.intent.universe(),
                });
            }
        }
        concepts.sort_by(canonical_order);
        let mut extents: Vec<&BitSet> = concepts.iter().map(|c| &c.extent).collect();
        extents.sort_unstable();
        if let Some(w) = extents.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateCluster(w[0].to_vec()));
        }
        Ok(ConceptSet {
            num_objects,
            num_items,
            min_support,
            concepts,
            context: None,
        })
    }

    /// Attaches the database the concepts were mined from. Lattice
    /// construction uses it to find covering pairs by closure.
    pub fn with_context(mut self, db: &TransactionDatabase) -> Result<Self> {
        if db.len() != self.num_objects {
            return Err(Error::UniverseMismatch {
                expected: self.num_objects,
                found: db.len(),
            });
        }
        if db.num_items() != self.num_items {
            return Err(Error::UniverseMismatch {
                expected: self.num_items,
                found: db.num_items(),
            });
        }
        self.context = Some(db.rows().to_vec());
        Ok(self)
    }

    pub fn num_objects(&self) -> usize {
        self.num_objects
    }

    pub fn num_items(&self) -> usize {
        self.num_items
    }

    pub fn min_support(&self) -> usize {
        self.min_support
    }

    pub fn concepts(&self) -> &[Concept] {
        &self.concepts
    }

    pub fn len(&self) -> usize {
        self.concepts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.concepts.is_empty()
    }

    pub fn iter(&self) -> core::slice::Iter<'_, Concept> {
        self.concepts.iter()
    }

    pub fn context(&self) -> Option<&[BitSet]> {
        self.context.as_deref()
    }

    pub fn into_concepts(self) -> Vec<Concept> {
        self.concepts
    }
}

fn check_universe(expected: usize, set: &BitSet) -> Result<()> {
    if set.universe() == expected {
        Ok(())
    } else {
        Err(Error::UniverseMismatch {
            expected,
            found: set.universe(),
        })
    }
}

/// `A'`: items common to every transaction in `extent`. The empty extent maps
/// to the whole item universe.
pub fn derive_intent(extent: &BitSet, db: &TransactionDatabase) -> Result<BitSet> {
    check_universe(db.len(), extent)?;
    let mut out = BitSet::full(db.num_items());
    for t in extent.iter() {
        out.intersect_with(db.row(t));
    }
    Ok(out)
}

/// `B'`: transactions containing every item of `intent`.
pub fn derive_extent(intent: &BitSet, db: &TransactionDatabase) -> Result<BitSet> {
    check_universe(db.num_items(), intent)?;
    let mut out = BitSet::new(db.len());
    for (t, row) in db.rows().iter().enumerate() {
        if intent.is_subset(row) {
            out.insert(t);
        }
    }
    Ok(out)
}

/// `B''`, the smallest closed itemset containing `itemset`.
pub fn closure(itemset: &BitSet, db: &TransactionDatabase) -> Result<BitSet> {
    derive_intent(&derive_extent(itemset, db)?, db)
}

/// Enumerates every concept with `|extent| >= min_support`.
///
/// The top concept (all transactions) is always present. The bottom concept
/// with empty extent, whose intent is the whole item universe, is included
/// only when `min_support == 0`. Output is sorted by descending support, then
/// lexicographic intent.
pub fn mine_concepts(db: &TransactionDatabase, min_support: usize) -> Result<ConceptSet> {
    let n = db.len();
    if min_support > n {
        return Err(Error::MinSupportTooLarge { min_support, n });
    }
    let mut lcm = Lcm {
        rows: db.rows(),
        cols: db.columns(),
        floor: min_support.max(1),
        out: Vec::new(),
    };

    let top_extent = BitSet::full(n);
    let top_intent = derive_intent(&top_extent, db)?;
    lcm.expand(&top_intent, &top_extent, 0);
    lcm.out.push(Concept {
        extent: top_extent,
        intent: top_intent,
    });

    if min_support == 0 {
        let universe = BitSet::full(db.num_items());
        if derive_extent(&universe, db)?.is_empty() {
            lcm.out.push(Concept {
                extent: BitSet::new(n),
                intent: universe,
            });
        }
    }

    let mut concepts = lcm.out;
    concepts.sort_by(canonical_order);
    Ok(ConceptSet {
        num_objects: n,
        num_items: db.num_items(),
        min_support,
        concepts,
        context: Some(db.rows().to_vec()),
    })
}

struct Lcm<'a> {
    rows: &'a [BitSet],
    cols: Vec<BitSet>,
    /// effective support threshold, at least 1
    floor: usize,
    out: Vec<Concept>,
}

impl Lcm<'_> {
    /// Emits every closed child of `intent` reachable by adding an item
    /// `>= start`, recursively. `start` is one past the core index of
    /// `intent`.
    fn expand(&mut self, intent: &BitSet, extent: &BitSet, start: usize) {
        let num_items = intent.universe();
        let mut child_extent = extent.clone();
        let mut child_intent = intent.clone();
        for e in start..num_items {
            if intent.contains(e) {
                continue;
            }
            child_extent.copy_from(extent);
            child_extent.intersect_with(&self.cols[e]);
            if child_extent.count() < self.floor {
                continue;
            }
            let mut members = child_extent.iter();
            let first = members.next().expect("support >= 1");
            child_intent.copy_from(&self.rows[first]);
            for t in members {
                child_intent.intersect_with(&self.rows[t]);
            }
            // prefix-preserving: closing must not add any item below e
            if !child_intent.eq_below(intent, e) {
                continue;
            }
            self.expand(&child_intent, &child_extent, e + 1);
            self.out.push(Concept {
                extent: child_extent.clone(),
                intent: child_intent.clone(),
            });
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use proptest::prelude::*;

    fn set(len: usize, items: &[usize]) -> BitSet {
        BitSet::from_indices(len, items.iter().copied()).unwrap()
    }

    /// Three transactions {0,1}, {0,2}, {0,1,2}.
    fn small_db() -> TransactionDatabase {
        TransactionDatabase::from_transactions(3, &[vec![0usize, 1], vec![0, 2], vec![0, 1, 2]])
            .unwrap()
    }

    #[test]
    fn derive_intent_examples() {
        let db = small_db();
        assert_eq!(
            derive_intent(&set(3, &[0, 1, 2]), &db).unwrap().to_vec(),
            vec![0]
        );
        assert_eq!(
            derive_intent(&set(3, &[]), &db).unwrap().to_vec(),
            vec![0, 1, 2]
        );
        assert_eq!(
            derive_intent(&set(3, &[2]), &db).unwrap().to_vec(),
            vec![0, 1, 2]
        );
    }

    #[test]
    fn derive_extent_examples() {
        let db = small_db();
        assert_eq!(
            derive_extent(&set(3, &[0]), &db).unwrap().to_vec(),
            vec![0, 1, 2]
        );
        assert_eq!(
            derive_extent(&set(3, &[0, 1]), &db).unwrap().to_vec(),
            vec![0, 2]
        );
        assert_eq!(
            derive_extent(&set(3, &[]), &db).unwrap().to_vec(),
            vec![0, 1, 2]
        );
    }

    #[test]
    fn closure_examples() {
        let db = small_db();
        assert_eq!(closure(&set(3, &[1]), &db).unwrap().to_vec(), vec![0, 1]);
        assert_eq!(closure(&set(3, &[0]), &db).unwrap().to_vec(), vec![0]);
        assert_eq!(closure(&set(3, &[]), &db).unwrap().to_vec(), vec![0]);
    }

    #[test]
    fn derivations_check_universe() {
        let db = small_db();
        assert_eq!(
            derive_intent(&set(4, &[0]), &db),
            Err(Error::UniverseMismatch {
                expected: 3,
                found: 4
            })
        );
        assert!(derive_extent(&set(2, &[0]), &db).is_err());
    }

    fn pairs(cs: &ConceptSet) -> Vec<(Vec<usize>, Vec<usize>)> {
        cs.iter()
            .map(|c| (c.extent.to_vec(), c.intent.to_vec()))
            .collect()
    }

    #[test]
    fn mine_small_db() {
        let cs = mine_concepts(&small_db(), 0).unwrap();
        assert_eq!(
            pairs(&cs),
            vec![
                (vec![0, 1, 2], vec![0]),
                (vec![0, 2], vec![0, 1]),
                (vec![1, 2], vec![0, 2]),
                (vec![2], vec![0, 1, 2]),
            ]
        );
        let cs = mine_concepts(&small_db(), 2).unwrap();
        assert_eq!(cs.len(), 3);
        assert!(cs.iter().all(|c| c.support() >= 2));
        assert_eq!(
            mine_concepts(&small_db(), 4).unwrap_err(),
            Error::MinSupportTooLarge {
                min_support: 4,
                n: 3
            }
        );
    }

    #[test]
    fn bottom_concept_only_without_pruning() {
        let db =
            TransactionDatabase::from_transactions(3, &[vec![1usize], vec![2], vec![0]]).unwrap();
        let cs = mine_concepts(&db, 0).unwrap();
        let last = cs.concepts().last().unwrap();
        assert!(last.extent.is_empty());
        assert_eq!(last.intent.count(), 3);
        assert_eq!(cs.len(), 5);
        let cs = mine_concepts(&db, 1).unwrap();
        assert!(cs.iter().all(|c| !c.extent.is_empty()));
        assert_eq!(cs.len(), 4);
    }

    #[test]
    fn top_concept_survives_full_pruning() {
        let db = small_db();
        let cs = mine_concepts(&db, 3).unwrap();
        assert_eq!(pairs(&cs), vec![(vec![0, 1, 2], vec![0])]);
    }

    #[test]
    fn concept_set_rejects_duplicate_extents() {
        let c = Concept {
            extent: set(2, &[0]),
            intent: set(2, &[1]),
        };
        let d = Concept {
            extent: set(2, &[0]),
            intent: set(2, &[0, 1]),
        };
        assert!(matches!(
            ConceptSet::new(2, 2, 0, vec![c, d]),
            Err(Error::DuplicateCluster(_))
        ));
    }

    /// Every concept via closing all 2^items itemsets.
    fn brute_force(db: &TransactionDatabase) -> Vec<(Vec<usize>, Vec<usize>)> {
        let m = db.num_items();
        let mut out: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
        for mask in 0u32..(1 << m) {
            let b = BitSet::from_indices(m, (0..m).filter(|j| mask >> j & 1 == 1)).unwrap();
            let ext = derive_extent(&b, db).unwrap();
            let int = derive_intent(&ext, db).unwrap();
            out.push((ext.to_vec(), int.to_vec()));
        }
        out.sort();
        out.dedup();
        out
    }

    fn db_strategy() -> impl Strategy<Value = TransactionDatabase> {
        (1usize..9, 1usize..9).prop_flat_map(|(n, m)| {
            proptest::collection::vec(proptest::collection::btree_set(0..m, 0..=m), n).prop_map(
                move |rows| {
                    let rows: Vec<Vec<usize>> =
                        rows.into_iter().map(|r| r.into_iter().collect()).collect();
                    TransactionDatabase::from_transactions(m, &rows).unwrap()
                },
            )
        })
    }

    proptest! {
        #[test]
        fn matches_brute_force(db in db_strategy(), s in 0usize..4) {
            let s = s.min(db.len());
            let mut got = pairs(&mine_concepts(&db, s).unwrap());
            got.sort();
            let n = db.len();
            let want: Vec<_> = brute_force(&db)
                .into_iter()
                .filter(|(e, _)| e.len() >= s || e.len() == n)
                .filter(|(e, _)| s == 0 || !e.is_empty())
                .collect();
            prop_assert_eq!(got, want);
        }

        #[test]
        fn closure_axioms(
            db in db_strategy(),
            a in proptest::collection::btree_set(0usize..8, 0..8),
            extra in proptest::collection::btree_set(0usize..8, 0..8),
        ) {
            let m = db.num_items();
            let a = BitSet::from_indices(m, a.into_iter().filter(|&j| j < m)).unwrap();
            let c = a.union(&BitSet::from_indices(m, extra.into_iter().filter(|&j| j < m)).unwrap());
            let ca = closure(&a, &db).unwrap();
            prop_assert!(a.is_subset(&ca));
            prop_assert!(ca.is_subset(&closure(&c, &db).unwrap()));
            prop_assert_eq!(closure(&ca, &db).unwrap(), ca);
        }

        #[test]
        fn extents_closed_under_intersection(db in db_strategy()) {
            let cs = mine_concepts(&db, 0).unwrap();
            let extents: Vec<&BitSet> = cs.iter().map(|c| &c.extent).collect();
            for a in &extents {
                for b in &extents {
                    let meet = a.intersection(b);
                    prop_assert!(extents.iter().any(|e| **e == meet));
                }
            }
            for c in cs.iter() {
                prop_assert_eq!(&derive_intent(&c.extent, &db).unwrap(), &c.intent);
                prop_assert_eq!(&derive_extent(&c.intent, &db).unwrap(), &c.extent);
            }
        }

        #[test]
        fn transaction_order_is_irrelevant(db in db_strategy(), rot in 0usize..8) {
            let n = db.len();
            let rot = rot % n;
            // transaction t moves to position (t + rot) % n
            let mut rows = vec![BitSet::new(0); n];
            for t in 0..n {
                rows[(t + rot) % n] = db.row(t).clone();
            }
            let permuted = TransactionDatabase::from_rows(db.num_items(), rows).unwrap();
            let mut base = pairs(&mine_concepts(&db, 0).unwrap());
            let mut moved: Vec<_> = mine_concepts(&permuted, 0)
                .unwrap()
                .iter()
                .map(|c| {
                    let mut ext: Vec<usize> = c.extent.iter().map(|t| (t + n - rot) % n).collect();
                    ext.sort_unstable();
                    (ext, c.intent.to_vec())
                })
                .collect();
            base.sort();
            moved.sort();
            prop_assert_eq!(base, moved);
        }
    }
}
