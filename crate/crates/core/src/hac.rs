//! Ward-linkage agglomerative clustering, the tree-shaped baseline.
//!
//! Linkages are maintained with the Lance–Williams recurrence using Ward
//! coefficients. The stored linkage between clusters `a` and `b` is the
//! increase in within-cluster sum of squares caused by merging them,
//! `n_a n_b / (n_a + n_b) * |c_a - c_b|²`; for two single points that is half
//! their squared distance.

use alloc::vec::Vec;

use crate::bitset::BitSet;
use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::eval::ClusterHierarchy;

/// One agglomeration step. Node ids `0..n` are the points; merge `t` creates
/// node `n + t`. `left < right`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Merge {
    pub left: usize,
    pub right: usize,
    pub height: f64,
    pub size: usize,
}

/// The `n - 1` merges of a complete agglomerative clustering.
#[derive(Debug, Clone, PartialEq)]
pub struct Dendrogram {
    n: usize,
    merges: Vec<Merge>,
}

impl Dendrogram {
    pub fn num_points(&self) -> usize {
        self.n
    }

    pub fn merges(&self) -> &[Merge] {
        &self.merges
    }

    /// Member sets of all `2n - 1` nodes, indexed by node id.
    pub fn node_sets(&self) -> Vec<BitSet> {
        let mut sets: Vec<BitSet> = (0..self.n)
            .map(|i| BitSet::from_indices(self.n, [i]).expect("leaf in range"))
            .collect();
        for m in &self.merges {
            let merged = sets[m.left].union(&sets[m.right]);
            sets.push(merged);
        }
        sets
    }
}

/// Runs Ward clustering to completion.
pub fn hac_ward(data: &Dataset) -> Result<Dendrogram> {
    let mut ward = WardClustering::new(data)?;
    while ward.step().is_some() {}
    Ok(ward.into_dendrogram())
}

/// All `2n - 1` dendrogram clusters, root included.
pub fn dendrogram_clusters(d: &Dendrogram) -> ClusterHierarchy {
    ClusterHierarchy::new(d.n, d.node_sets()).expect("dendrogram root covers every point")
}

/// Stepwise Ward clustering. Each [`step`](Self::step) merges the active
/// pair with the smallest linkage; ties go to the smallest `(left, right)`
/// node ids.
#[derive(Debug, Clone)]
pub struct WardClustering {
    n: usize,
    /// full symmetric linkage matrix over slots
    dist: Vec<f64>,
    slot_node: Vec<usize>,
    slot_members: Vec<BitSet>,
    active: Vec<usize>,
    merges: Vec<Merge>,
}

impl WardClustering {
    pub fn new(data: &Dataset) -> Result<Self> {
        let n = data.len();
        if n < 2 {
            return Err(Error::TooFewPoints(n));
        }
        let mut dist = alloc::vec![0.0; n * n];
        for i in 0..n {
            for j in i + 1..n {
                let sq: f64 = data
                    .point(i)
                    .iter()
                    .zip(data.point(j))
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum();
                if !sq.is_finite() {
                    return Err(Error::NonFiniteDistance { i, j });
                }
                dist[i * n + j] = 0.5 * sq;
                dist[j * n + i] = 0.5 * sq;
            }
        }
        Ok(WardClustering {
            n,
            dist,
            slot_node: (0..n).collect(),
            slot_members: (0..n)
                .map(|i| BitSet::from_indices(n, [i]).expect("leaf in range"))
                .collect(),
            active: (0..n).collect(),
            merges: Vec::with_capacity(n - 1),
        })
    }

    /// Active clusters as `(node id, members)`.
    pub fn active_clusters(&self) -> impl Iterator<Item = (usize, &BitSet)> + '_ {
        self.active
            .iter()
            .map(move |&s| (self.slot_node[s], &self.slot_members[s]))
    }

    /// Current linkage between two active nodes.
    pub fn linkage(&self, a: usize, b: usize) -> Option<f64> {
        let sa = self
            .active
            .iter()
            .copied()
            .find(|&s| self.slot_node[s] == a)?;
        let sb = self
            .active
            .iter()
            .copied()
            .find(|&s| self.slot_node[s] == b)?;
        Some(self.dist[sa * self.n + sb])
    }

    pub fn merges(&self) -> &[Merge] {
        &self.merges
    }

    pub fn step(&mut self) -> Option<Merge> {
        if self.active.len() < 2 {
            return None;
        }
        let n = self.n;
        let mut best: Option<(f64, usize, usize, usize, usize)> = None;
        for (ai, &sa) in self.active.iter().enumerate() {
            let row = &self.dist[sa * n..(sa + 1) * n];
            for &sb in &self.active[ai + 1..] {
                let d = row[sb];
                let (na, nb) = (self.slot_node[sa], self.slot_node[sb]);
                let key = (d, na.min(nb), na.max(nb));
                let better = match best {
                    None => true,
                    Some((bd, bl, br, _, _)) => d < bd || (d == bd && (key.1, key.2) < (bl, br)),
                };
                if better {
                    best = Some((d, key.1, key.2, sa, sb));
                }
            }
        }
        let (height, left, right, sa, sb) = best.expect("two active clusters");

        let size_a = self.slot_members[sa].count() as f64;
        let size_b = self.slot_members[sb].count() as f64;
        for &sk in &self.active {
            if sk == sa || sk == sb {
                continue;
            }
            let size_k = self.slot_members[sk].count() as f64;
            let total = size_a + size_b + size_k;
            let updated = ((size_a + size_k) * self.dist[sa * n + sk]
                + (size_b + size_k) * self.dist[sb * n + sk]
                - size_k * height)
                / total;
            self.dist[sa * n + sk] = updated;
            self.dist[sk * n + sa] = updated;
        }

        let absorbed = self.slot_members[sb].clone();
        self.slot_members[sa].union_with(&absorbed);
        self.slot_node[sa] = n + self.merges.len();
        self.active.retain(|&s| s != sb);

        let merge = Merge {
            left,
            right,
            height,
            size: self.slot_members[sa].count(),
        };
        self.merges.push(merge);
        Some(merge)
    }

    pub fn into_dendrogram(self) -> Dendrogram {
        Dendrogram {
            n: self.n,
            merges: self.merges,
        }
    }
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
    fn three_points_on_a_line() {
        let d = hac_ward(&line(&[0.0, 1.0, 5.0])).unwrap();
        let m = d.merges();
        assert_eq!((m[0].left, m[0].right, m[0].size), (0, 1, 2));
        assert_eq!((m[1].left, m[1].right, m[1].size), (2, 3, 3));
        assert_eq!(m[0].height, 0.5);
        // 2*1/3 * (5 - 0.5)^2
        assert!((m[1].height - 13.5).abs() < 1e-12);
        let clusters: Vec<Vec<usize>> = dendrogram_clusters(&d)
            .clusters()
            .iter()
            .map(BitSet::to_vec)
            .collect();
        assert_eq!(
            clusters,
            vec![vec![0], vec![1], vec![2], vec![0, 1], vec![0, 1, 2]]
        );
    }

    #[test]
    fn two_points() {
        let d = hac_ward(&line(&[3.0, -1.0])).unwrap();
        assert_eq!(d.merges().len(), 1);
        assert_eq!(dendrogram_clusters(&d).len(), 3);
    }

    #[test]
    fn duplicates_merge_first_at_zero() {
        let d = hac_ward(&line(&[0.0, 0.0, 9.0])).unwrap();
        assert_eq!((d.merges()[0].left, d.merges()[0].right), (0, 1));
        assert_eq!(d.merges()[0].height, 0.0);
    }

    #[test]
    fn ties_take_smallest_ids() {
        // 0-1 and 2-3 are equally close
        let d = hac_ward(&line(&[0.0, 1.0, 10.0, 11.0])).unwrap();
        assert_eq!((d.merges()[0].left, d.merges()[0].right), (0, 1));
        assert_eq!((d.merges()[1].left, d.merges()[1].right), (2, 3));
        assert_eq!((d.merges()[2].left, d.merges()[2].right), (4, 5));
    }

    fn points() -> impl Strategy<Value = Dataset> {
        (2usize..20, 1usize..4).prop_flat_map(|(n, m)| {
            proptest::collection::vec(proptest::collection::vec(-10.0f64..10.0, m), n)
                .prop_map(|p| Dataset::new(p, None).unwrap())
        })
    }

    fn centroid(ds: &Dataset, members: &BitSet) -> Vec<f64> {
        let mut c = vec![0.0; ds.dim()];
        for i in members.iter() {
            for (acc, v) in c.iter_mut().zip(ds.point(i)) {
                *acc += v;
            }
        }
        let k = members.count() as f64;
        c.iter().map(|v| v / k).collect()
    }

    fn direct_ward(ds: &Dataset, a: &BitSet, b: &BitSet) -> f64 {
        let (na, nb) = (a.count() as f64, b.count() as f64);
        let (ca, cb) = (centroid(ds, a), centroid(ds, b));
        let sq: f64 = ca.iter().zip(&cb).map(|(x, y)| (x - y) * (x - y)).sum();
        na * nb / (na + nb) * sq
    }

    proptest! {
        #[test]
        fn recurrence_matches_direct_formula(ds in points()) {
            let mut ward = WardClustering::new(&ds).unwrap();
            loop {
                let active: Vec<(usize, BitSet)> =
                    ward.active_clusters().map(|(id, m)| (id, m.clone())).collect();
                for (x, (ia, ma)) in active.iter().enumerate() {
                    for (ib, mb) in &active[x + 1..] {
                        let got = ward.linkage(*ia, *ib).unwrap();
                        let want = direct_ward(&ds, ma, mb);
                        prop_assert!((got - want).abs() <= 1e-9 * want.abs().max(1e-12));
                    }
                }
                if ward.step().is_none() {
                    break;
                }
            }
        }

        #[test]
        fn structure_invariants(ds in points()) {
            let d = hac_ward(&ds).unwrap();
            let n = ds.len();
            prop_assert_eq!(d.merges().len(), n - 1);
            let sets = d.node_sets();
            prop_assert_eq!(dendrogram_clusters(&d).len(), 2 * n - 1);
            let mut height = vec![0.0f64; 2 * n - 1];
            for (t, m) in d.merges().iter().enumerate() {
                prop_assert!(m.left < m.right && m.right < n + t);
                prop_assert_eq!(m.size, sets[m.left].count() + sets[m.right].count());
                prop_assert!(m.height >= height[m.left] && m.height >= height[m.right]);
                height[n + t] = m.height;
            }
            prop_assert_eq!(sets.last().unwrap().count(), n);
        }
    }
}
