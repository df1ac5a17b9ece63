//! Spatial point patterns: Poisson sampling on a disk, decomposition into
//! mutually-nearest-neighbour pairs and singles, and the approximating
//! superposition process of independent singles and parent/daughter pairs.

use crate::config::DerivedConstants;
use crate::error::{Error, Result};
use rand::Rng;
use rand_distr::{Distribution, Normal, Poisson};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn dist2(&self, other: &Point) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        dx * dx + dy * dy
    }

    pub fn dist(&self, other: &Point) -> f64 {
        self.dist2(other).sqrt()
    }

    pub fn norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y).sqrt()
    }
}

/// A realization of a planar point process on a disk centred at the origin.
#[derive(Debug, Clone)]
pub struct PointPattern {
    pub points: Vec<Point>,
    pub radius: f64,
}

/// Homogeneous PPP of intensity `lambda` on the disk of radius `radius`.
pub fn sample_ppp<R: Rng>(lambda: f64, radius: f64, rng: &mut R) -> PointPattern {
    assert!(lambda > 0.0 && radius > 0.0);
    let mean = lambda * std::f64::consts::PI * radius * radius;
    let n = Poisson::new(mean).unwrap().sample(rng) as usize;
    let points = (0..n).map(|_| uniform_in_disk(radius, rng)).collect();
    PointPattern { points, radius }
}

fn uniform_in_disk<R: Rng>(radius: f64, rng: &mut R) -> Point {
    let r = radius * rng.gen::<f64>().sqrt();
    let th = 2.0 * std::f64::consts::PI * rng.gen::<f64>();
    Point {
        x: r * th.cos(),
        y: r * th.sin(),
    }
}

/// Decomposition of a pattern into mutually-nearest-neighbour pairs and
/// leftover singles. Indices refer into the originating pattern.
#[derive(Debug, Clone)]
pub struct ClusterSet {
    /// index pairs with the lower index first
    pub pairs: Vec<(usize, usize)>,
    pub singles: Vec<usize>,
}

impl ClusterSet {
    pub fn pair_fraction(&self) -> f64 {
        let total = 2 * self.pairs.len() + self.singles.len();
        if total == 0 {
            0.0
        } else {
            2.0 * self.pairs.len() as f64 / total as f64
        }
    }
}

/// Nearest-neighbour index of every point, by brute force. Ties break
/// toward the lower index, which keeps the pairing deterministic (ties have
/// probability zero under a PPP anyway).
fn nearest_neighbours_brute(points: &[Point]) -> Vec<usize> {
    let n = points.len();
    let mut nn = vec![usize::MAX; n];
    for i in 0..n {
        let mut best = f64::INFINITY;
        for j in 0..n {
            if j == i {
                continue;
            }
            let d = points[i].dist2(&points[j]);
            if d < best {
                best = d;
                nn[i] = j;
            }
        }
    }
    nn
}

/// Nearest-neighbour index of every point, via a uniform grid of buckets
/// sized to the expected nearest-neighbour distance. Falls back to widening
/// ring searches, so it is exact.
fn nearest_neighbours(points: &[Point], radius: f64) -> Vec<usize> {
    let n = points.len();
    if n < 64 {
        return nearest_neighbours_brute(points);
    }
    // cell side ~ mean NN distance: 0.5 / sqrt(intensity)
    let intensity = n as f64 / (std::f64::consts::PI * radius * radius);
    let cell = (0.75 / intensity.sqrt()).max(radius * 1e-6);
    let m = ((2.0 * radius / cell).ceil() as usize).max(1);
    let cell = 2.0 * radius / m as f64;
    let index = |p: &Point| -> (usize, usize) {
        let ix = (((p.x + radius) / cell) as usize).min(m - 1);
        let iy = (((p.y + radius) / cell) as usize).min(m - 1);
        (ix, iy)
    };
    let mut buckets: Vec<Vec<usize>> = vec![Vec::new(); m * m];
    for (i, p) in points.iter().enumerate() {
        let (ix, iy) = index(p);
        buckets[iy * m + ix].push(i);
    }
    let mut nn = vec![usize::MAX; n];
    for i in 0..n {
        let p = &points[i];
        let (ix, iy) = index(p);
        let mut best = f64::INFINITY;
        let mut best_j = usize::MAX;
        let mut ring = 0usize;
        loop {
            // scan the square ring of cells at Chebyshev distance `ring`
            let x0 = ix.saturating_sub(ring);
            let x1 = (ix + ring).min(m - 1);
            let y0 = iy.saturating_sub(ring);
            let y1 = (iy + ring).min(m - 1);
            for cy in y0..=y1 {
                for cx in x0..=x1 {
                    let on_ring = cx == x0 || cx == x1 || cy == y0 || cy == y1;
                    if ring > 0 && !on_ring {
                        continue;
                    }
                    for &j in &buckets[cy * m + cx] {
                        if j == i {
                            continue;
                        }
                        let d = p.dist2(&points[j]);
                        if d < best || (d == best && j < best_j) {
                            best = d;
                            best_j = j;
                        }
                    }
                }
            }
            // a candidate at distance d is only final once every cell that
            // could hold a closer point has been scanned
            if best_j != usize::MAX && best.sqrt() <= ring as f64 * cell {
                break;
            }
            if x0 == 0 && y0 == 0 && x1 == m - 1 && y1 == m - 1 {
                break;
            }
            ring += 1;
        }
        nn[i] = best_j;
    }
    nn
}

/// Split a pattern into mutually-nearest-neighbour pairs and singles.
pub fn cluster_mutual_nn(pattern: &PointPattern) -> ClusterSet {
    let nn = nearest_neighbours(&pattern.points, pattern.radius);
    let mut pairs = Vec::new();
    let mut singles = Vec::new();
    for i in 0..pattern.points.len() {
        let j = nn[i];
        if j == usize::MAX {
            singles.push(i);
            continue;
        }
        if nn[j] == i {
            if i < j {
                pairs.push((i, j));
            }
        } else {
            singles.push(i);
        }
    }
    ClusterSet { pairs, singles }
}

/// Distances between the members of each pair whose midpoint lies within
/// `interior_radius` of the origin (guards against boundary bias).
pub fn pair_distance_samples(
    pattern: &PointPattern,
    clusters: &ClusterSet,
    interior_radius: f64,
) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for &(i, j) in &clusters.pairs {
        let a = pattern.points[i];
        let b = pattern.points[j];
        let mid = Point {
            x: 0.5 * (a.x + b.x),
            y: 0.5 * (a.y + b.y),
        };
        if mid.norm() <= interior_radius {
            out.push(a.dist(&b));
        }
    }
    if out.is_empty() {
        return Err(Error::EmptyPairs);
    }
    Ok(out)
}

/// A realization of the superposition model: an independent PPP of singles
/// plus a PPP of pair parents, each carrying a Gaussian-displaced daughter.
#[derive(Debug, Clone)]
pub struct SuperpositionPattern {
    pub singles: Vec<Point>,
    /// (parent, daughter) locations
    pub pairs: Vec<(Point, Point)>,
    pub radius: f64,
}

/// Sample the superposition model on a disk: singles at intensity
/// `(1 - delta) lambda`, parents at `delta lambda / 2`, daughter = parent +
/// isotropic Gaussian displacement of per-axis deviation `alpha`.
pub fn sample_superposition<R: Rng>(
    lambda: f64,
    consts: &DerivedConstants,
    radius: f64,
    rng: &mut R,
) -> SuperpositionPattern {
    let area = std::f64::consts::PI * radius * radius;
    let n_singles = Poisson::new((1.0 - consts.delta) * lambda * area)
        .unwrap()
        .sample(rng) as usize;
    let singles = (0..n_singles).map(|_| uniform_in_disk(radius, rng)).collect();

    let n_pairs = Poisson::new(consts.delta * lambda / 2.0 * area)
        .unwrap()
        .sample(rng) as usize;
    let normal = Normal::new(0.0, consts.alpha).unwrap();
    let pairs = (0..n_pairs)
        .map(|_| {
            let parent = uniform_in_disk(radius, rng);
            let daughter = Point {
                x: parent.x + normal.sample(rng),
                y: parent.y + normal.sample(rng),
            };
            (parent, daughter)
        })
        .collect();
    SuperpositionPattern {
        singles,
        pairs,
        radius,
    }
}

/// CSV rows `x,y,role,pair_id` for a clustered pattern. Pair members share a
/// `pair_id`; singles carry an empty one.
pub fn pattern_to_csv(pattern: &PointPattern, clusters: &ClusterSet) -> String {
    let mut out = String::from("x,y,role,pair_id\n");
    for (pid, &(i, j)) in clusters.pairs.iter().enumerate() {
        for &k in &[i, j] {
            let p = pattern.points[k];
            out.push_str(&format!("{},{},pair,{}\n", p.x, p.y, pid));
        }
    }
    for &i in &clusters.singles {
        let p = pattern.points[i];
        out.push_str(&format!("{},{},single,\n", p.x, p.y));
    }
    out
}

/// CSV rows `x,y,role,pair_id` for a superposition pattern, with roles
/// `single`, `parent`, `daughter`.
pub fn superposition_to_csv(pattern: &SuperpositionPattern) -> String {
    let mut out = String::from("x,y,role,pair_id\n");
    for (pid, (parent, daughter)) in pattern.pairs.iter().enumerate() {
        out.push_str(&format!("{},{},parent,{}\n", parent.x, parent.y, pid));
        out.push_str(&format!("{},{},daughter,{}\n", daughter.x, daughter.y, pid));
    }
    for p in &pattern.singles {
        out.push_str(&format!("{},{},single,\n", p.x, p.y));
    }
    out
}
