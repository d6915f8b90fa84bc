//! Numerical datasets and the synthetic generators used in the experiments.

use alloc::format;
use alloc::string::ToString;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, Uniform};

use crate::error::{Error, Result};
use crate::eval::Partition;

/// `n` points with `m` finite features each, stored row-major, plus optional
/// integer class labels.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    values: Vec<f64>,
    n: usize,
    m: usize,
    labels: Option<Vec<i64>>,
}

impl Dataset {
    pub fn new(points: Vec<Vec<f64>>, labels: Option<Vec<i64>>) -> Result<Self> {
        let m = points.first().map_or(0, Vec::len);
        let mut values = Vec::with_capacity(points.len() * m);
        for (i, p) in points.iter().enumerate() {
            if p.len() != m {
                return Err(Error::RaggedPoint {
                    point: i,
                    found: p.len(),
                    expected: m,
                });
            }
            values.extend_from_slice(p);
        }
        Self::from_flat(values, points.len(), m, labels)
    }

    /// Builds a dataset from row-major `values` of length `n * m`.
    pub fn from_flat(
        values: Vec<f64>,
        n: usize,
        m: usize,
        labels: Option<Vec<i64>>,
    ) -> Result<Self> {
        if n < 2 {
            return Err(Error::TooFewPoints(n));
        }
        if m == 0 {
            return Err(Error::NoFeatures);
        }
        assert_eq!(values.len(), n * m, "flat buffer does not match n * m");
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteValue {
                point: pos / m,
                feature: pos % m,
            });
        }
        if let Some(l) = &labels {
            if l.len() != n {
                return Err(Error::LabelCount {
                    labels: l.len(),
                    points: n,
                });
            }
        }
        Ok(Dataset {
            values,
            n,
            m,
            labels,
        })
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.n
    }

    /// Always false; a dataset holds at least two points.
    #[inline]
    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn point(&self, i: usize) -> &[f64] {
        &self.values[i * self.m..(i + 1) * self.m]
    }

    pub fn points(&self) -> impl ExactSizeIterator<Item = &[f64]> {
        self.values.chunks_exact(self.m)
    }

    pub fn labels(&self) -> Option<&[i64]> {
        self.labels.as_deref()
    }

    pub fn with_labels(mut self, labels: Option<Vec<i64>>) -> Result<Self> {
        if let Some(l) = &labels {
            if l.len() != self.n {
                return Err(Error::LabelCount {
                    labels: l.len(),
                    points: self.n,
                });
            }
        }
        self.labels = labels;
        Ok(self)
    }

    /// Ground-truth partition induced by the labels.
    pub fn partition(&self) -> Result<Partition> {
        let labels = self.labels.as_deref().ok_or(Error::MissingLabels)?;
        Ok(Partition::from_labels(labels))
    }

    /// Returns a copy with feature columns reordered: new column `c` is old
    /// column `order[c]`.
    pub fn permute_features(&self, order: &[usize]) -> Self {
        assert_eq!(order.len(), self.m);
        let values = self
            .points()
            .flat_map(|p| order.iter().map(move |&c| p[c]))
            .collect();
        Dataset {
            values,
            n: self.n,
            m: self.m,
            labels: self.labels.clone(),
        }
    }
}

/// Which synthetic generator to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SynthKind {
    /// Two equal clusters, features from N(0, 1) and N(2, 1).
    Synth1,
    /// Two equal clusters, features from N(0, 1) and N(2, 4) (variance 4).
    Synth2,
    /// Three 2-D clusters sized 2:1:1 with uniform random means in [-25, 25]
    /// and unit variance.
    Synth3,
}

impl SynthKind {
    pub fn name(self) -> &'static str {
        match self {
            SynthKind::Synth1 => "synth1",
            SynthKind::Synth2 => "synth2",
            SynthKind::Synth3 => "synth3",
        }
    }
}

impl fmt::Display for SynthKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SynthKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "synth1" => Ok(SynthKind::Synth1),
            "synth2" => Ok(SynthKind::Synth2),
            "synth3" => Ok(SynthKind::Synth3),
            _ => Err(Error::UnknownName {
                kind: "synthetic dataset",
                name: s.to_string(),
            }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SynthSpec {
    pub kind: SynthKind,
    pub n: usize,
    pub m: usize,
    pub seed: u64,
}

impl SynthSpec {
    pub fn new(kind: SynthKind, n: usize, m: usize, seed: u64) -> Self {
        SynthSpec { kind, n, m, seed }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::InvalidSynthSpec(format!("n = {} < 2", self.n)));
        }
        if self.m == 0 {
            return Err(Error::InvalidSynthSpec("m = 0".to_string()));
        }
        if self.kind == SynthKind::Synth3 && self.m != 2 {
            return Err(Error::InvalidSynthSpec(format!(
                "synth3 is 2-D, got m = {}",
                self.m
            )));
        }
        Ok(())
    }

    /// Cluster sizes in label order.
    ///
    /// Two-cluster kinds put `⌊n/2⌋` points in cluster 0. `synth3` uses
    /// `(⌊n/2⌋, ⌈n/4⌉, rest)`.
    pub fn cluster_sizes(&self) -> Vec<usize> {
        match self.kind {
            SynthKind::Synth1 | SynthKind::Synth2 => {
                alloc::vec![self.n / 2, self.n - self.n / 2]
            }
            SynthKind::Synth3 => {
                let a = self.n / 2;
                let b = self.n.div_ceil(4);
                alloc::vec![a, b, self.n - a - b]
            }
        }
    }
}

/// Generates a labeled synthetic dataset. Points are grouped by cluster in
/// label order.
///
/// Randomness comes from ChaCha8 seeded with `spec.seed`; normals use the
/// ziggurat sampler from `rand_distr`. For `synth3` the cluster means are drawn
/// first (cluster by cluster, feature by feature), then the points.
pub fn generate_synth(spec: &SynthSpec) -> Result<Dataset> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let sizes = spec.cluster_sizes();

    // (mean, std dev) per cluster per feature
    let params: Vec<Vec<(f64, f64)>> = match spec.kind {
        SynthKind::Synth1 => alloc::vec![
            alloc::vec![(0.0, 1.0); spec.m],
            alloc::vec![(2.0, 1.0); spec.m]
        ],
        SynthKind::Synth2 => alloc::vec![
            alloc::vec![(0.0, 1.0); spec.m],
            alloc::vec![(2.0, 2.0); spec.m]
        ],
        SynthKind::Synth3 => {
            let means = Uniform::new_inclusive(-25.0, 25.0).expect("valid uniform range");
            (0..3)
                .map(|_| (0..spec.m).map(|_| (means.sample(&mut rng), 1.0)).collect())
                .collect()
        }
    };

    let mut values = Vec::with_capacity(spec.n * spec.m);
    let mut labels = Vec::with_capacity(spec.n);
    for (label, (&size, feats)) in sizes.iter().zip(&params).enumerate() {
        let dists: Vec<Normal<f64>> = feats
            .iter()
            .map(|&(mean, sd)| Normal::new(mean, sd).expect("finite normal parameters"))
            .collect();
        for _ in 0..size {
            values.extend(dists.iter().map(|d| d.sample(&mut rng)));
            labels.push(label as i64);
        }
    }
    Dataset::from_flat(values, spec.n, spec.m, Some(labels))
}
