//! Dendrogram purity of a cluster hierarchy against a ground-truth partition.
//!
//! For every unordered pair of points that share a class, take the smallest
//! cluster containing both (the LCA) and score the fraction of that cluster
//! belonging to the pair's class. Dendrogram purity is the mean score over
//! all such pairs, in `[0, 1]`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use crate::bitset::{cmp_size_then_members, BitSet};
use crate::error::{Error, Result};

/// A collection of clusters over `{0..n}` that contains the full point set.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterHierarchy {
    n: usize,
    clusters: Vec<BitSet>,
}

impl ClusterHierarchy {
    pub fn new(n: usize, clusters: Vec<BitSet>) -> Result<Self> {
        if let Some(bad) = clusters.iter().find(|c| c.universe() != n) {
            return Err(Error::UniverseMismatch {
                expected: n,
                found: bad.universe(),
            });
        }
        if !clusters.iter().any(|c| c.count() == n) {
            return Err(Error::MissingRoot);
        }
        Ok(ClusterHierarchy { n, clusters })
    }

    pub fn from_lists<T: AsRef<[usize]>>(n: usize, lists: &[T]) -> Result<Self> {
        let clusters = lists
            .iter()
            .map(|l| {
                let l = l.as_ref();
                BitSet::from_indices(n, l.iter().copied()).ok_or_else(|| Error::IndexOutOfRange {
                    index: l.iter().copied().max().unwrap_or(0),
                    len: n,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(n, clusters)
    }

    pub fn num_points(&self) -> usize {
        self.n
    }

    pub fn clusters(&self) -> &[BitSet] {
        &self.clusters
    }

    pub fn len(&self) -> usize {
        self.clusters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clusters.is_empty()
    }
}

/// Disjoint, non-empty classes covering `{0..n}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    n: usize,
    classes: Vec<BitSet>,
}

impl Partition {
    pub fn new(n: usize, classes: Vec<BitSet>) -> Result<Self> {
        if classes.is_empty() {
            return Err(Error::InvalidPartition("no classes".into()));
        }
        let mut seen = BitSet::new(n);
        for (l, class) in classes.iter().enumerate() {
            if class.universe() != n {
                return Err(Error::UniverseMismatch {
                    expected: n,
                    found: class.universe(),
                });
            }
            if class.is_empty() {
                return Err(Error::InvalidPartition(format!("class {l} is empty")));
            }
            if !class.is_disjoint(&seen) {
                return Err(Error::InvalidPartition(format!(
                    "class {l} overlaps an earlier class"
                )));
            }
            seen.union_with(class);
        }
        if seen.count() != n {
            return Err(Error::InvalidPartition(format!(
                "classes cover {} of {n} points",
                seen.count()
            )));
        }
        Ok(Partition { n, classes })
    }

    /// One class per distinct label, in ascending label order.
    pub fn from_labels(labels: &[i64]) -> Self {
        let n = labels.len();
        let mut by_label: BTreeMap<i64, BitSet> = BTreeMap::new();
        for (i, &l) in labels.iter().enumerate() {
            by_label
                .entry(l)
                .or_insert_with(|| BitSet::new(n))
                .insert(i);
        }
        Partition {
            n,
            classes: by_label.into_values().collect(),
        }
    }

    pub fn num_points(&self) -> usize {
        self.n
    }

    pub fn classes(&self) -> &[BitSet] {
        &self.classes
    }

    /// `|Q|`, the number of unordered same-class pairs.
    pub fn num_pairs(&self) -> usize {
        self.classes
            .iter()
            .map(|c| {
                let s = c.count();
                s * s.saturating_sub(1) / 2
            })
            .sum()
    }
}

/// `|F ∩ G| / |F|`.
pub fn purity(f: &BitSet, g: &BitSet) -> Result<f64> {
    let size = f.count();
    if size == 0 {
        return Err(Error::EmptyCluster);
    }
    Ok(f.intersection_count(g) as f64 / size as f64)
}

/// Smallest cluster containing both `i` and `j`; among equally small ones the
/// lexicographically smallest member list wins.
pub fn lca(i: usize, j: usize, hierarchy: &ClusterHierarchy) -> Result<&BitSet> {
    let n = hierarchy.n;
    for idx in [i, j] {
        if idx >= n {
            return Err(Error::IndexOutOfRange { index: idx, len: n });
        }
    }
    if i == j {
        return Err(Error::SamePoint(i));
    }
    hierarchy
        .clusters
        .iter()
        .filter(|c| c.contains(i) && c.contains(j))
        .min_by(|a, b| cmp_size_then_members(a, b))
        .ok_or(Error::MissingRoot)
}

/// Dendrogram purity with its normalizing counts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PurityReport {
    pub dp: f64,
    /// Number of clusters in the hierarchy, empty cluster included.
    pub num_clusters: usize,
    /// `|Q|`.
    pub num_pairs: usize,
}

pub fn dendrogram_purity(hierarchy: &ClusterHierarchy, truth: &Partition) -> Result<f64> {
    evaluate(hierarchy, truth).map(|r| r.dp)
}

/// Computes dendrogram purity.
///
/// Clusters are visited in (size, members) order through a point-to-cluster
/// index, so each point only scans clusters that contain it and stops once
/// every later same-class partner has found its LCA. Per-cluster pair counts
/// are integers and the final sum runs in a fixed order, so the result does
/// not depend on how the work is scheduled.
pub fn evaluate(hierarchy: &ClusterHierarchy, truth: &Partition) -> Result<PurityReport> {
    let n = hierarchy.n;
    if truth.n != n {
        return Err(Error::UniverseMismatch {
            expected: n,
            found: truth.n,
        });
    }
    let num_pairs = truth.num_pairs();
    if num_pairs == 0 {
        return Err(Error::NoSameClassPairs);
    }

    let mut order: Vec<&BitSet> = hierarchy
        .clusters
        .iter()
        .filter(|c| !c.is_empty())
        .collect();
    order.sort_by(|a, b| cmp_size_then_members(a, b));
    let mut containing: Vec<Vec<u32>> = alloc::vec![Vec::new(); n];
    for (rank, c) in order.iter().enumerate() {
        for p in c.iter() {
            containing[p].push(rank as u32);
        }
    }

    let mut pair_counts = alloc::vec![0u64; order.len()];
    let mut touched: Vec<u32> = Vec::new();
    let mut unresolved = BitSet::new(n);
    let mut total = 0.0f64;
    for class in &truth.classes {
        touched.clear();
        for i in class.iter() {
            unresolved.copy_from(class);
            for p in 0..=i {
                unresolved.remove(p);
            }
            if unresolved.is_empty() {
                continue;
            }
            for &rank in &containing[i] {
                let cluster = order[rank as usize];
                let hits = unresolved.intersection_count(cluster);
                if hits > 0 {
                    if pair_counts[rank as usize] == 0 {
                        touched.push(rank);
                    }
                    pair_counts[rank as usize] += hits as u64;
                    unresolved.difference_with(cluster);
                    if unresolved.is_empty() {
                        break;
                    }
                }
            }
            debug_assert!(
                unresolved.is_empty(),
                "root cluster must resolve every pair"
            );
        }
        touched.sort_unstable();
        let mut class_sum = 0.0f64;
        for &rank in &touched {
            let cluster = order[rank as usize];
            let pur = cluster.intersection_count(class) as f64 / cluster.count() as f64;
            class_sum += pair_counts[rank as usize] as f64 * pur;
            pair_counts[rank as usize] = 0;
        }
        total += class_sum;
    }

    Ok(PurityReport {
        dp: total / num_pairs as f64,
        num_clusters: hierarchy.clusters.len(),
        num_pairs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use proptest::prelude::*;

    fn set(n: usize, items: &[usize]) -> BitSet {
        BitSet::from_indices(n, items.iter().copied()).unwrap()
    }

    fn hier(n: usize, lists: &[&[usize]]) -> ClusterHierarchy {
        ClusterHierarchy::from_lists(n, lists).unwrap()
    }

    #[test]
    fn lca_examples() {
        let h = hier(4, &[&[0, 1], &[2, 3], &[0, 1, 2, 3]]);
        assert_eq!(lca(0, 1, &h).unwrap().to_vec(), vec![0, 1]);
        assert_eq!(lca(0, 2, &h).unwrap().to_vec(), vec![0, 1, 2, 3]);
        let h = hier(4, &[&[0, 1, 3], &[0, 1, 2], &[0, 1, 2, 3]]);
        assert_eq!(lca(0, 1, &h).unwrap().to_vec(), vec![0, 1, 2]);
        assert_eq!(lca(1, 1, &h), Err(Error::SamePoint(1)));
        assert!(matches!(lca(0, 4, &h), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn purity_examples() {
        assert_eq!(
            purity(&set(4, &[0, 1, 2, 3]), &set(4, &[0, 1])).unwrap(),
            0.5
        );
        assert_eq!(purity(&set(4, &[0, 1]), &set(4, &[0, 1])).unwrap(), 1.0);
        assert_eq!(purity(&set(4, &[0, 1]), &set(4, &[2, 3])).unwrap(), 0.0);
        assert_eq!(
            purity(&set(4, &[]), &set(4, &[2, 3])),
            Err(Error::EmptyCluster)
        );
    }

    #[test]
    fn dendrogram_purity_examples() {
        let truth = Partition::from_labels(&[0, 0, 1, 1]);
        let h = hier(4, &[&[0, 1], &[2, 3], &[0, 1, 2, 3]]);
        assert_eq!(dendrogram_purity(&h, &truth).unwrap(), 1.0);
        let h = hier(4, &[&[0, 1, 2, 3]]);
        assert_eq!(dendrogram_purity(&h, &truth).unwrap(), 0.5);
        let h = hier(4, &[&[0, 1, 2], &[0, 1, 2, 3]]);
        let dp = dendrogram_purity(&h, &truth).unwrap();
        assert!((dp - 7.0 / 12.0).abs() < 1e-15, "{dp}");
    }

    #[test]
    fn report_counts() {
        let truth = Partition::from_labels(&[0, 0, 1, 1, 1]);
        let h = hier(5, &[&[], &[0, 1], &[0, 1, 2, 3, 4]]);
        let r = evaluate(&h, &truth).unwrap();
        assert_eq!(r.num_pairs, 4);
        assert_eq!(r.num_clusters, 3);
    }

    #[test]
    fn error_cases() {
        let truth = Partition::from_labels(&[0, 1, 2]);
        let h = hier(3, &[&[0, 1, 2]]);
        assert_eq!(dendrogram_purity(&h, &truth), Err(Error::NoSameClassPairs));
        assert_eq!(
            ClusterHierarchy::from_lists(3, &[vec![0usize, 1]]),
            Err(Error::MissingRoot)
        );
        assert!(Partition::new(3, vec![set(3, &[0, 1]), set(3, &[1, 2])]).is_err());
        assert!(Partition::new(3, vec![set(3, &[0, 1])]).is_err());
        assert!(Partition::new(3, vec![set(3, &[0, 1, 2]), set(3, &[])]).is_err());
        assert!(Partition::new(3, vec![set(3, &[0, 2]), set(3, &[1])]).is_ok());
    }

    /// Pairs of the same class, scanning every cluster for the minimal
    /// container.
    fn brute_force(h: &ClusterHierarchy, truth: &Partition) -> f64 {
        let mut sum = 0.0;
        let mut pairs = 0usize;
        for class in truth.classes() {
            let members = class.to_vec();
            for (a, &i) in members.iter().enumerate() {
                for &j in &members[a + 1..] {
                    let mut best: Option<&BitSet> = None;
                    for c in h.clusters() {
                        if c.contains(i) && c.contains(j) {
                            best = match best {
                                Some(b) if cmp_size_then_members(b, c).is_le() => Some(b),
                                _ => Some(c),
                            };
                        }
                    }
                    sum += purity(best.unwrap(), class).unwrap();
                    pairs += 1;
                }
            }
        }
        sum / pairs as f64
    }

    fn instance() -> impl Strategy<Value = (ClusterHierarchy, Partition)> {
        (2usize..16).prop_flat_map(|n| {
            (
                proptest::collection::vec(proptest::collection::btree_set(0..n, 0..=n), 0..30),
                proptest::collection::vec(0i64..3, n),
            )
                .prop_map(move |(clusters, labels)| {
                    let mut lists: Vec<Vec<usize>> = clusters
                        .into_iter()
                        .map(|c| c.into_iter().collect())
                        .collect();
                    lists.push((0..n).collect());
                    (
                        ClusterHierarchy::from_lists(n, &lists).unwrap(),
                        Partition::from_labels(&labels),
                    )
                })
        })
    }

    proptest! {
        #[test]
        fn matches_definition((h, truth) in instance()) {
            prop_assume!(truth.num_pairs() > 0);
            let dp = dendrogram_purity(&h, &truth).unwrap();
            prop_assert!((0.0..=1.0).contains(&dp));
            prop_assert!((dp - brute_force(&h, &truth)).abs() <= 1e-12);
        }

        #[test]
        fn root_only_closed_form(labels in proptest::collection::vec(0i64..4, 2..30)) {
            let n = labels.len();
            let truth = Partition::from_labels(&labels);
            prop_assume!(truth.num_pairs() > 0);
            let h = ClusterHierarchy::new(n, vec![BitSet::full(n)]).unwrap();
            let mut num = 0.0;
            let mut den = 0.0;
            for c in truth.classes() {
                let s = c.count() as f64;
                num += (s / n as f64) * s * (s - 1.0) / 2.0;
                den += s * (s - 1.0) / 2.0;
            }
            prop_assert!((dendrogram_purity(&h, &truth).unwrap() - num / den).abs() < 1e-12);
        }

        #[test]
        fn pure_hierarchy_scores_one(labels in proptest::collection::vec(0i64..4, 2..30)) {
            let n = labels.len();
            let truth = Partition::from_labels(&labels);
            prop_assume!(truth.num_pairs() > 0);
            let mut clusters: Vec<BitSet> = truth.classes().to_vec();
            // a union of whole classes and singletons are also fine
            clusters.push(truth.classes()[0].clone());
            clusters.push(BitSet::from_indices(n, [0]).unwrap());
            clusters.push(BitSet::full(n));
            let h = ClusterHierarchy::new(n, clusters).unwrap();
            prop_assert_eq!(dendrogram_purity(&h, &truth).unwrap(), 1.0);
        }

        #[test]
        fn relabeling_points_preserves_dp((h, truth) in instance(), rot in 0usize..16) {
            prop_assume!(truth.num_pairs() > 0);
            let n = h.num_points();
            // close under intersection so the minimal container is unique and
            // the lexicographic tie-break never fires
            let mut family: Vec<BitSet> = h.clusters().to_vec();
            loop {
                let mut added = false;
                for a in 0..family.len() {
                    for b in a + 1..family.len() {
                        let meet = family[a].intersection(&family[b]);
                        if !family.contains(&meet) {
                            family.push(meet);
                            added = true;
                        }
                    }
                }
                if !added {
                    break;
                }
            }
            let h = ClusterHierarchy::new(n, family).unwrap();
            let map = |s: &BitSet| BitSet::from_indices(n, s.iter().map(|p| (p + rot) % n)).unwrap();
            let h2 = ClusterHierarchy::new(n, h.clusters().iter().map(map).collect()).unwrap();
            let t2 = Partition::new(n, truth.classes().iter().map(map).collect()).unwrap();
            let a = dendrogram_purity(&h, &truth).unwrap();
            let b = dendrogram_purity(&h2, &t2).unwrap();
            prop_assert!((a - b).abs() < 1e-12);
        }
    }
}
