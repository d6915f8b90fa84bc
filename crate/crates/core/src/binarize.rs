//! k-nearest-neighbor binarization of a dataset into a transaction database.
//!
//! Point `i` becomes transaction `X_i`, the set of indices of its `k` nearest
//! points. Items and transactions therefore share the universe `{0..n}`.

use alloc::string::ToString;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::str::FromStr;

use crate::bitset::BitSet;
use crate::dataset::Dataset;
use crate::error::{Error, Result};

/// Distance used to rank neighbors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Metric {
    #[default]
    Euclidean,
}

impl Metric {
    pub fn name(self) -> &'static str {
        match self {
            Metric::Euclidean => "euclidean",
        }
    }

    /// A value that orders pairs the same way the metric does. For Euclidean
    /// this is the squared distance.
    #[inline]
    fn rank_key(self, a: &[f64], b: &[f64]) -> f64 {
        match self {
            Metric::Euclidean => a
                .iter()
                .zip(b)
                .map(|(x, y)| {
                    let d = x - y;
                    d * d
                })
                .sum(),
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "euclidean" => Ok(Metric::Euclidean),
            _ => Err(Error::UnknownName {
                kind: "metric",
                name: s.to_string(),
            }),
        }
    }
}

/// Whether a point counts as one of its own neighbors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SelfPolicy {
    /// Neighbors are the `k` nearest *other* points; `1 <= k <= n - 1`.
    Exclude,
    /// The point itself is always its first neighbor, followed by the `k - 1`
    /// nearest others; `1 <= k <= n`.
    Include,
}

/// `n` transactions over an item universe `{0..num_items}`.
#[derive(Clone, PartialEq, Eq)]
pub struct TransactionDatabase {
    num_items: usize,
    rows: Vec<BitSet>,
}

impl TransactionDatabase {
    /// Builds a database from explicit item lists.
    pub fn from_transactions<T>(num_items: usize, transactions: &[T]) -> Result<Self>
    where
        T: AsRef<[usize]>,
    {
        let mut rows = Vec::with_capacity(transactions.len());
        for (t, items) in transactions.iter().enumerate() {
            let mut row = BitSet::new(num_items);
            for &item in items.as_ref() {
                if item >= num_items {
                    return Err(Error::ItemOutOfRange {
                        item,
                        universe: num_items,
                    });
                }
                if row.contains(item) {
                    return Err(Error::DuplicateItem {
                        transaction: t,
                        item,
                    });
                }
                row.insert(item);
            }
            rows.push(row);
        }
        Self::from_rows(num_items, rows)
    }

    pub fn from_rows(num_items: usize, rows: Vec<BitSet>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::EmptyDatabase);
        }
        if let Some(bad) = rows.iter().find(|r| r.universe() != num_items) {
            return Err(Error::UniverseMismatch {
                expected: num_items,
                found: bad.universe(),
            });
        }
        Ok(TransactionDatabase { num_items, rows })
    }

    /// Number of transactions.
    #[inline]
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    #[inline]
    pub fn num_items(&self) -> usize {
        self.num_items
    }

    #[inline]
    pub fn row(&self, t: usize) -> &BitSet {
        &self.rows[t]
    }

    pub fn rows(&self) -> &[BitSet] {
        &self.rows
    }

    /// The common transaction length, if all transactions have the same size.
    pub fn k(&self) -> Option<usize> {
        let first = self.rows[0].count();
        self.rows
            .iter()
            .all(|r| r.count() == first)
            .then_some(first)
    }

    /// Per-item occurrence sets: `columns()[j] = { t : j ∈ X_t }`.
    pub fn columns(&self) -> Vec<BitSet> {
        let mut cols = alloc::vec![BitSet::new(self.len()); self.num_items];
        for (t, row) in self.rows.iter().enumerate() {
            for j in row.iter() {
                cols[j].insert(t);
            }
        }
        cols
    }

    /// Transactions as ascending item lists.
    pub fn to_lists(&self) -> Vec<Vec<usize>> {
        self.rows.iter().map(BitSet::to_vec).collect()
    }
}

impl fmt::Debug for TransactionDatabase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TransactionDatabase")
            .field("num_items", &self.num_items)
            .field("rows", &self.rows)
            .finish()
    }
}

/// Binarizes with each point's `k` nearest *other* points.
pub fn knn_binarize(data: &Dataset, k: usize, metric: Metric) -> Result<TransactionDatabase> {
    knn_binarize_with(data, k, metric, SelfPolicy::Exclude)
}

/// Builds `X_i = { j : d_j is among the k nearest points to d_i }`.
///
/// Distance ties are broken by the smaller point index. Neighbor search is
/// brute force, `O(n² m)`.
pub fn knn_binarize_with(
    data: &Dataset,
    k: usize,
    metric: Metric,
    policy: SelfPolicy,
) -> Result<TransactionDatabase> {
    let n = data.len();
    let max_k = match policy {
        SelfPolicy::Exclude => n - 1,
        SelfPolicy::Include => n,
    };
    if k == 0 || k > max_k {
        return Err(Error::KOutOfRange { k, max: max_k });
    }
    // number of neighbors taken from the other points
    let take = match policy {
        SelfPolicy::Exclude => k,
        SelfPolicy::Include => k - 1,
    };

    let mut rows = Vec::with_capacity(n);
    let mut cand: Vec<(f64, usize)> = Vec::with_capacity(n);
    for i in 0..n {
        let pi = data.point(i);
        cand.clear();
        for j in (0..n).filter(|&j| j != i) {
            let d = metric.rank_key(pi, data.point(j));
            if !d.is_finite() {
                return Err(Error::NonFiniteDistance { i, j });
            }
            cand.push((d, j));
        }
        let by_dist = |a: &(f64, usize), b: &(f64, usize)| -> Ordering {
            a.0.total_cmp(&b.0).then(a.1.cmp(&b.1))
        };
        if take > 0 && take < cand.len() {
            cand.select_nth_unstable_by(take - 1, by_dist);
        }
        let mut row = BitSet::new(n);
        for &(_, j) in &cand[..take] {
            row.insert(j);
        }
        if policy == SelfPolicy::Include {
            row.insert(i);
        }
        rows.push(row);
    }
    TransactionDatabase::from_rows(n, rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use proptest::prelude::*;

    fn line(xs: &[f64]) -> Dataset {
        Dataset::new(xs.iter().map(|&x| vec![x]).collect(), None).unwrap()
    }

    #[test]
    fn nearest_neighbor_on_a_line() {
        let db = knn_binarize(&line(&[0.0, 1.0, 3.0]), 1, Metric::Euclidean).unwrap();
        assert_eq!(db.to_lists(), vec![vec![1], vec![0], vec![1]]);
        assert_eq!(db.k(), Some(1));
    }

    #[test]
    fn k_equal_n_minus_one_takes_everyone_else() {
        let db = knn_binarize(&line(&[0.0, 1.0, 3.0]), 2, Metric::Euclidean).unwrap();
        assert_eq!(db.to_lists(), vec![vec![1, 2], vec![0, 2], vec![0, 1]]);
    }

    #[test]
    fn ties_prefer_lower_index() {
        let db = knn_binarize(&line(&[0.0, 1.0, 2.0]), 1, Metric::Euclidean).unwrap();
        assert_eq!(db.row(1).to_vec(), vec![0]);
    }

    #[test]
    fn k_range_checked() {
        let ds = line(&[0.0, 1.0, 3.0]);
        assert_eq!(
            knn_binarize(&ds, 0, Metric::Euclidean),
            Err(Error::KOutOfRange { k: 0, max: 2 })
        );
        assert_eq!(
            knn_binarize(&ds, 3, Metric::Euclidean),
            Err(Error::KOutOfRange { k: 3, max: 2 })
        );
        assert!(knn_binarize_with(&ds, 3, Metric::Euclidean, SelfPolicy::Include).is_ok());
    }

    #[test]
    fn include_self_puts_point_first() {
        let db = knn_binarize_with(
            &line(&[0.0, 1.0, 3.0]),
            2,
            Metric::Euclidean,
            SelfPolicy::Include,
        )
        .unwrap();
        assert_eq!(db.to_lists(), vec![vec![0, 1], vec![0, 1], vec![1, 2]]);
        let db = knn_binarize_with(
            &line(&[0.0, 1.0, 3.0]),
            1,
            Metric::Euclidean,
            SelfPolicy::Include,
        )
        .unwrap();
        assert_eq!(db.to_lists(), vec![vec![0], vec![1], vec![2]]);
    }

    #[test]
    fn overflowing_distance_is_an_error() {
        let ds = line(&[-1e200, 1e200, 0.0]);
        assert!(matches!(
            knn_binarize(&ds, 1, Metric::Euclidean),
            Err(Error::NonFiniteDistance { .. })
        ));
    }

    #[test]
    fn database_validation() {
        assert_eq!(
            TransactionDatabase::from_transactions(3, &[vec![3usize]]),
            Err(Error::ItemOutOfRange {
                item: 3,
                universe: 3
            })
        );
        assert_eq!(
            TransactionDatabase::from_transactions(4, &[vec![1usize], vec![3, 3]]),
            Err(Error::DuplicateItem {
                transaction: 1,
                item: 3
            })
        );
        let empty: [Vec<usize>; 0] = [];
        assert_eq!(
            TransactionDatabase::from_transactions(4, &empty),
            Err(Error::EmptyDatabase)
        );
    }

    #[test]
    fn columns_invert_rows() {
        let db = TransactionDatabase::from_transactions(3, &[vec![0usize, 1], vec![1], vec![1, 2]])
            .unwrap();
        let cols: Vec<Vec<usize>> = db.columns().iter().map(BitSet::to_vec).collect();
        assert_eq!(cols, vec![vec![0], vec![0, 1, 2], vec![2]]);
        assert_eq!(db.k(), None);
    }

    fn dataset_strategy() -> impl Strategy<Value = (Vec<Vec<f64>>, usize)> {
        (3usize..25, 1usize..4).prop_flat_map(|(n, m)| {
            (
                proptest::collection::vec(proptest::collection::vec(-4i32..4, m), n).prop_map(
                    |rows| {
                        rows.into_iter()
                            .map(|r| r.into_iter().map(f64::from).collect())
                            .collect()
                    },
                ),
                1..n,
            )
        })
    }

    proptest! {
        #[test]
        fn rows_have_k_items_and_are_true_neighbors((points, k) in dataset_strategy()) {
            let ds = Dataset::new(points, None).unwrap();
            let db = knn_binarize(&ds, k, Metric::Euclidean).unwrap();
            for i in 0..ds.len() {
                let row = db.row(i);
                prop_assert_eq!(row.count(), k);
                prop_assert!(!row.contains(i));
                for j in row.iter() {
                    let dj = Metric::Euclidean.rank_key(ds.point(i), ds.point(j));
                    let closer = (0..ds.len())
                        .filter(|&q| q != i)
                        .filter(|&q| Metric::Euclidean.rank_key(ds.point(i), ds.point(q)) < dj)
                        .count();
                    prop_assert!(closer < k);
                }
            }
        }

        #[test]
        fn invariant_under_feature_permutation_and_translation(
            (points, k) in dataset_strategy(),
            shift in -3i32..3,
        ) {
            let ds = Dataset::new(points.clone(), None).unwrap();
            let base = knn_binarize(&ds, k, Metric::Euclidean).unwrap();

            let order: Vec<usize> = (0..ds.dim()).rev().collect();
            let permuted = ds.permute_features(&order);
            prop_assert_eq!(&knn_binarize(&permuted, k, Metric::Euclidean).unwrap(), &base);

            // integer-valued coordinates keep the shifted distances exact
            let shifted: Vec<Vec<f64>> = points
                .iter()
                .map(|p| p.iter().map(|v| v + f64::from(shift)).collect())
                .collect();
            let shifted = Dataset::new(shifted, None).unwrap();
            prop_assert_eq!(&knn_binarize(&shifted, k, Metric::Euclidean).unwrap(), &base);
        }
    }
}
