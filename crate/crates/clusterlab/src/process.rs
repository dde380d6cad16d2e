//! The growing Gaussian cluster process.
//!
//! Starting from `k >= 1` seed points (by default a single point at the
//! origin), step `i` attaches a new point to a uniformly chosen existing
//! point plus an isotropic Gaussian displacement whose per-coordinate
//! standard deviation is `sigma_i = i^(-alpha)` (1-based step index). The choice
//! edges form a random recursive forest over the points.
//!
//! Generation is deterministic: a [`GrowthConfig`] fully determines the
//! output bit for bit. Per step the stream is consumed in a fixed order:
//! one uniform for the parent index, then `d` Gaussian coordinates in axis
//! order (two uniforms each, see [`crate::rng`]).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::points::{PointSet, dist2, norm, pairwise_sum};
use crate::rng::SeedStream;

/// Sentinel used in serialized form for root vertices; in-memory roots are
/// `None`.
pub const NO_PARENT: i64 = -1;

/// Full parameter set of a growth run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthConfig {
    /// Ambient dimension `d >= 1` (`d = 1` is allowed for cheap tests).
    pub dimension: usize,
    /// Displacement decay exponent `alpha >= 0`; `alpha = 0` means unit-variance
    /// displacements forever.
    pub alpha: f64,
    /// Total number of points `n`, counting the initial ones.
    pub n_points: usize,
    /// Seed of the uniform stream.
    pub seed: u64,
    /// The `k >= 1` starting points. Defaults to a single origin point.
    pub initial_points: Vec<Vec<f64>>,
}

impl GrowthConfig {
    /// Config with the default single seed point at the origin.
    pub fn new(dimension: usize, alpha: f64, n_points: usize, seed: u64) -> Self {
        Self {
            dimension,
            alpha,
            n_points,
            seed,
            initial_points: vec![vec![0.0; dimension]],
        }
    }

    pub fn with_initial_points(mut self, initial_points: Vec<Vec<f64>>) -> Self {
        self.initial_points = initial_points;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.dimension == 0 {
            return Err(Error::InvalidConfig("dimension must be >= 1".into()));
        }
        if !(self.alpha >= 0.0 && self.alpha.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "alpha must be finite and >= 0, got {}",
                self.alpha
            )));
        }
        let k = self.initial_points.len();
        if k == 0 {
            return Err(Error::InvalidConfig("at least one initial point required".into()));
        }
        if self.n_points < k {
            return Err(Error::InvalidConfig(format!(
                "n_points ({}) must be >= number of initial points ({k})",
                self.n_points
            )));
        }
        for (i, p) in self.initial_points.iter().enumerate() {
            if p.len() != self.dimension {
                return Err(Error::InvalidConfig(format!(
                    "initial point {i} has {} coordinates, expected {}",
                    p.len(),
                    self.dimension
                )));
            }
            if !p.iter().all(|c| c.is_finite()) {
                return Err(Error::InvalidConfig(format!(
                    "initial point {i} has a non-finite coordinate"
                )));
            }
        }
        Ok(())
    }
}

/// A generated point set together with its attachment forest.
///
/// Vertex indices are 0-based; index `i` here is point `X_{i+1}` in 1-based
/// notation. The first `k` vertices are the roots.
#[derive(Debug, Clone, PartialEq)]
pub struct Cluster {
    points: PointSet,
    parents: Vec<Option<usize>>,
    config: GrowthConfig,
}

impl Cluster {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.points.dim()
    }

    pub fn points(&self) -> &PointSet {
        &self.points
    }

    pub fn point(&self, i: usize) -> &[f64] {
        self.points.point(i)
    }

    /// Attachment target of vertex `i`; `None` for the roots.
    pub fn parent(&self, i: usize) -> Option<usize> {
        self.parents[i]
    }

    pub fn parents(&self) -> &[Option<usize>] {
        &self.parents
    }

    pub fn config(&self) -> &GrowthConfig {
        &self.config
    }

    /// Number of roots (initial points).
    pub fn root_count(&self) -> usize {
        self.config.initial_points.len()
    }

    /// Rebuilds a cluster from parsed parts (deserialization path).
    pub fn from_parts(
        points: PointSet,
        parents: Vec<Option<usize>>,
        config: GrowthConfig,
    ) -> Result<Self> {
        if points.len() != parents.len() {
            return Err(Error::InvalidArgument(format!(
                "{} points but {} parent entries",
                points.len(),
                parents.len()
            )));
        }
        for (i, p) in parents.iter().enumerate() {
            if let Some(j) = p
                && *j >= i
            {
                return Err(Error::InvalidArgument(format!(
                    "parent of vertex {i} is {j}; attachment must point to an earlier vertex"
                )));
            }
        }
        Ok(Self { points, parents, config })
    }

    /// Max Euclidean norm over the points: the distance of the farthest
    /// point from the origin.
    pub fn radius(&self) -> f64 {
        self.points.iter().map(norm).fold(0.0, f64::max)
    }

    /// Number of tree edges from vertex `i` to its root.
    pub fn level(&self, i: usize) -> Result<usize> {
        if i >= self.len() {
            return Err(Error::IndexOutOfBounds { index: i, len: self.len() });
        }
        let mut depth = 0;
        let mut v = i;
        while let Some(p) = self.parents[v] {
            depth += 1;
            v = p;
        }
        Ok(depth)
    }

    /// Total length of the attachment forest: `sum of |X_i - X_parent(i)|` over
    /// non-root vertices. The recursive tree is a spanning structure, so
    /// this upper-bounds the minimum spanning tree length on the same
    /// points (when `k = 1`).
    pub fn attachment_tree_length(&self) -> f64 {
        let lengths: Vec<f64> = self
            .parents
            .iter()
            .enumerate()
            .filter_map(|(i, p)| {
                p.map(|j| dist2(self.points.point(i), self.points.point(j)).sqrt())
            })
            .collect();
        pairwise_sum(&lengths)
    }
}

/// Per-coordinate displacement standard deviation at 1-based step `i`.
pub fn sigma(i: usize, alpha: f64) -> Result<f64> {
    if i == 0 {
        return Err(Error::InvalidArgument("sigma index must be >= 1".into()));
    }
    if !(alpha >= 0.0 && alpha.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "alpha must be finite and >= 0, got {alpha}"
        )));
    }
    Ok((i as f64).powf(-alpha))
}

/// Runs the process and returns the generated cluster.
///
/// Deterministic in the config: the stream is seeded from `config.seed` and
/// consumed in the fixed per-step order documented in [`crate::rng`]. With
/// `k > 1` initial points the parent draw is uniform over *all* existing
/// points regardless of which tree they belong to.
pub fn grow(config: &GrowthConfig) -> Result<Cluster> {
    config.validate()?;
    let d = config.dimension;
    let n = config.n_points;
    let k = config.initial_points.len();

    let mut points = PointSet::with_capacity(d, n);
    for p in &config.initial_points {
        points.push(p);
    }
    let mut parents: Vec<Option<usize>> = vec![None; k];
    parents.reserve(n - k);

    let mut stream = SeedStream::new(config.seed);
    let mut coord = vec![0.0; d];
    for s in k..n {
        let parent = stream.next_index(s);
        let sd = (s as f64 + 1.0).powf(-config.alpha);
        let base = points.point(parent);
        for (axis, c) in coord.iter_mut().enumerate() {
            *c = base[axis] + sd * stream.next_standard_gaussian();
        }
        points.push(&coord);
        parents.push(Some(parent));
    }

    Ok(Cluster { points, parents, config: config.clone() })
}

/// Analytic upper bound on `P(N(0, sigma) >= x)` for `x > 0`:
/// `sigma * exp(-x^2 / (2 sigma^2)) / (x * sqrt(2 pi))`.
pub fn gaussian_tail_upper(x: f64, sigma: f64) -> Result<f64> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::InvalidArgument(format!("x must be positive, got {x}")));
    }
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::InvalidArgument(format!("sigma must be positive, got {sigma}")));
    }
    let z = x / sigma;
    Ok((-0.5 * z * z).exp() / (z * (std::f64::consts::TAU).sqrt()))
}
