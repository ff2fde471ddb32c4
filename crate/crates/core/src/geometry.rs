//! Convex polytopes in vertex form.
//!
//! Everything here works from vertex lists: hulls are found by discarding
//! points that project onto the hull of the others, distances come from a
//! min-norm-point solver, and half-space descriptions are only ever used as
//! constraint lists to test points against.

use std::fmt::Debug;

use num_traits::Float;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Floating point type usable by the geometry routines.
pub trait Real: Float + Debug + Send + Sync + 'static {}

impl<T: Float + Debug + Send + Sync + 'static> Real for T {}

fn c<T: Real>(v: f64) -> T {
    T::from(v).expect("constant representable")
}

/// A point closer than this to a hull counts as inside it.
pub const HULL_TOLERANCE: f64 = 1e-9;
/// Duality-gap stopping threshold of the min-norm-point solver.
pub const PROJECTION_GAP: f64 = 1e-10;
/// Relative tolerance for ties in support queries.
pub const UNIQUENESS_TOLERANCE: f64 = 1e-9;
/// Slack below which a half-space constraint counts as violated.
pub const CONSTRAINT_SLACK: f64 = 1e-9;

pub fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (&x, &y)| acc + x * y)
}

pub fn norm<T: Real>(a: &[T]) -> T {
    dot(a, a).sqrt()
}

pub fn distance<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (&x, &y)| acc + (x - y) * (x - y)).sqrt()
}

/// Largest pairwise distance in a point set (zero for fewer than 2 points).
pub fn diameter<T: Real>(points: &[Vec<T>]) -> T {
    let mut best = T::zero();
    for (i, p) in points.iter().enumerate() {
        for q in &points[i + 1..] {
            best = best.max(distance(p, q));
        }
    }
    best
}

fn check_points<T: Real>(dim: usize, points: &[Vec<T>]) -> Result<()> {
    for p in points {
        if p.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: p.len() });
        }
        if p.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("non-finite coordinate".into()));
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointCloud<T> {
    dim: usize,
    points: Vec<Vec<T>>,
}

impl<T: Real> PointCloud<T> {
    pub fn new(dim: usize, points: Vec<Vec<T>>) -> Result<Self> {
        check_points(dim, &points)?;
        Ok(PointCloud { dim, points })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> &[Vec<T>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn push(&mut self, p: Vec<T>) -> Result<()> {
        check_points(self.dim, std::slice::from_ref(&p))?;
        self.points.push(p);
        Ok(())
    }
}

/// Extreme points of a convex hull.
///
/// Serializes as `{"dim": D, "vertices": [[...], ...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VPolytope<T> {
    dim: usize,
    vertices: Vec<Vec<T>>,
}

impl<T: Real> VPolytope<T> {
    /// Wraps a vertex list without checking extremality.
    pub fn from_vertices(dim: usize, vertices: Vec<Vec<T>>) -> Result<Self> {
        check_points(dim, &vertices)?;
        if vertices.is_empty() {
            return Err(Error::InvalidArgument("polytope needs at least one vertex".into()));
        }
        Ok(VPolytope { dim, vertices })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Vec<T>] {
        &self.vertices
    }

    pub fn diameter(&self) -> T {
        diameter(&self.vertices)
    }
}

/// `{x : <normal, x> <= offset}` with a unit normal.
///
/// Serializes as `{"normal": [...], "offset": b}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HalfSpace<T> {
    normal: Vec<T>,
    offset: T,
}

impl<T: Real> HalfSpace<T> {
    pub fn new(normal: Vec<T>, offset: T) -> Result<Self> {
        if (norm(&normal) - T::one()).abs() > c(1e-12) {
            return Err(Error::InvalidArgument("half-space normal must have unit length".into()));
        }
        Ok(HalfSpace { normal, offset })
    }

    /// `{x : <coeffs, x> <= bound}`, rescaled to a unit normal.
    pub fn from_functional(coeffs: &[T], bound: T) -> Result<Self> {
        let len = norm(coeffs);
        if len <= T::zero() {
            return Err(Error::InvalidArgument("zero functional".into()));
        }
        Ok(HalfSpace { normal: coeffs.iter().map(|&v| v / len).collect(), offset: bound / len })
    }

    pub fn normal(&self) -> &[T] {
        &self.normal
    }

    pub fn offset(&self) -> T {
        self.offset
    }

    /// `offset - <normal, p>`; negative outside.
    pub fn slack(&self, p: &[T]) -> T {
        self.offset - dot(&self.normal, p)
    }

    /// Euclidean projection of `p` onto the half-space.
    pub fn project(&self, p: &[T]) -> Vec<T> {
        let s = self.slack(p);
        if s >= T::zero() {
            p.to_vec()
        } else {
            p.iter().zip(&self.normal).map(|(&x, &a)| x + s * a).collect()
        }
    }
}

/// Solves `a x = b` in place by Gaussian elimination with partial pivoting.
fn solve_dense<T: Real>(mut a: Vec<Vec<T>>, mut b: Vec<T>) -> Option<Vec<T>> {
    let n = b.len();
    let scale = a.iter().flatten().fold(T::zero(), |m, v| m.max(v.abs())).max(T::one());
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap())?;
        if a[pivot][col].abs() <= scale * c(1e-14) {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            if f == T::zero() {
                continue;
            }
            for k in col..n {
                let v = a[col][k];
                a[row][k] = a[row][k] - f * v;
            }
            b[row] = b[row] - f * b[col];
        }
    }
    let mut x = vec![T::zero(); n];
    for row in (0..n).rev() {
        let tail = (row + 1..n).fold(T::zero(), |acc, k| acc + a[row][k] * x[k]);
        x[row] = (b[row] - tail) / a[row][row];
    }
    Some(x)
}

/// Minimizer of `|sum_i w_i p_i|` over affine weights (`sum w = 1`) for the
/// points indexed by `set`.
fn affine_minimizer<T: Real>(points: &[Vec<T>], set: &[usize]) -> Option<Vec<T>> {
    let m = set.len();
    let mut a = vec![vec![T::zero(); m + 1]; m + 1];
    for (r, &i) in set.iter().enumerate() {
        for (s, &j) in set.iter().enumerate() {
            a[r][s] = dot(&points[i], &points[j]);
        }
        a[r][m] = T::one();
        a[m][r] = T::one();
    }
    let mut b = vec![T::zero(); m + 1];
    b[m] = T::one();
    solve_dense(a, b).map(|mut w| {
        w.truncate(m);
        w
    })
}

fn combine<T: Real>(points: &[Vec<T>], set: &[usize], weights: &[T]) -> Vec<T> {
    let dim = points[set[0]].len();
    let mut x = vec![T::zero(); dim];
    for (&i, &w) in set.iter().zip(weights) {
        for (xk, &pk) in x.iter_mut().zip(&points[i]) {
            *xk = *xk + w * pk;
        }
    }
    x
}

/// Result of a min-norm-point solve: the point, its convex weights over
/// the input points and the number of major iterations used.
#[derive(Debug, Clone)]
pub struct MinNormPoint<T> {
    pub point: Vec<T>,
    pub weights: Vec<T>,
    pub iterations: usize,
}

/// Wolfe's active-set algorithm for the point of minimum norm in the convex
/// hull of `points`. Stops when `|x|^2 - min_j <x, p_j>` falls below
/// [`PROJECTION_GAP`] (scaled by the squared point magnitude).
pub fn min_norm_point<T: Real>(points: &[Vec<T>]) -> Result<MinNormPoint<T>> {
    if points.is_empty() {
        return Err(Error::InvalidArgument("empty point set".into()));
    }
    let dim = points[0].len();
    let scale = points.iter().map(|p| dot(p, p)).fold(T::one(), T::max);
    let gap_tol = c::<T>(PROJECTION_GAP) * scale;
    let max_iter = (10 * points.len() * dim.max(1)).max(100);

    let start = (0..points.len())
        .min_by(|&i, &j| dot(&points[i], &points[i]).partial_cmp(&dot(&points[j], &points[j])).unwrap())
        .expect("nonempty");
    let mut set = vec![start];
    let mut lambda = vec![T::one()];
    let mut x = points[start].clone();

    for iteration in 0..max_iter {
        let xx = dot(&x, &x);
        let (j, xpj) = points
            .iter()
            .enumerate()
            .map(|(i, p)| (i, dot(&x, p)))
            .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
            .expect("nonempty");
        if xx - xpj <= gap_tol || set.contains(&j) {
            return Ok(finish(points.len(), &set, &lambda, x, iteration));
        }
        set.push(j);
        lambda.push(T::zero());

        loop {
            let Some(alpha) = affine_minimizer(points, &set) else {
                // Numerically dependent corral: keep the current iterate.
                set.pop();
                lambda.pop();
                return Ok(finish(points.len(), &set, &lambda, x, iteration));
            };
            if alpha.iter().all(|&a| a > c(1e-14)) {
                lambda = alpha;
                x = combine(points, &set, &lambda);
                break;
            }
            let mut theta = T::one();
            for (&l, &a) in lambda.iter().zip(&alpha) {
                if a <= c(1e-14) && l - a > T::zero() {
                    theta = theta.min(l / (l - a));
                }
            }
            for (l, &a) in lambda.iter_mut().zip(&alpha) {
                *l = theta * a + (T::one() - theta) * *l;
            }
            let keep: Vec<bool> = lambda.iter().map(|&l| l > c(1e-14)).collect();
            if keep.iter().all(|&k| k) {
                // theta hit a weight only up to rounding; drop the smallest.
                let (drop, _) = lambda
                    .iter()
                    .enumerate()
                    .min_by(|a, b| a.1.partial_cmp(b.1).unwrap())
                    .expect("nonempty corral");
                set.remove(drop);
                lambda.remove(drop);
            } else {
                let mut k = 0;
                set.retain(|_| {
                    k += 1;
                    keep[k - 1]
                });
                let mut k = 0;
                lambda.retain(|_| {
                    k += 1;
                    keep[k - 1]
                });
            }
            let total = lambda.iter().fold(T::zero(), |a, &b| a + b);
            lambda.iter_mut().for_each(|l| *l = *l / total);
            x = combine(points, &set, &lambda);
            if set.len() == 1 {
                break;
            }
        }
    }
    Err(Error::ProjectionDidNotConverge { iterations: max_iter })
}

fn finish<T: Real>(n: usize, set: &[usize], lambda: &[T], point: Vec<T>, iterations: usize) -> MinNormPoint<T> {
    let mut weights = vec![T::zero(); n];
    for (&i, &l) in set.iter().zip(lambda) {
        weights[i] = l;
    }
    MinNormPoint { point, weights, iterations }
}

/// Nearest point of `conv(vertices)` to `q`, and its distance.
pub fn project_onto_points<T: Real>(q: &[T], vertices: &[Vec<T>]) -> Result<(Vec<T>, T)> {
    let shifted: Vec<Vec<T>> = vertices.iter().map(|v| v.iter().zip(q).map(|(&a, &b)| a - b).collect()).collect();
    let mnp = min_norm_point(&shifted)?;
    let d = norm(&mnp.point);
    let nearest = mnp.point.iter().zip(q).map(|(&a, &b)| a + b).collect();
    Ok((nearest, d))
}

/// Nearest point of the polytope to `q`, and its distance.
pub fn project_onto<T: Real>(q: &[T], polytope: &VPolytope<T>) -> Result<(Vec<T>, T)> {
    if q.len() != polytope.dim {
        return Err(Error::DimensionMismatch { expected: polytope.dim, found: q.len() });
    }
    project_onto_points(q, &polytope.vertices)
}

/// Extreme points of the cloud. Points are visited in order and dropped
/// when they lie within [`HULL_TOLERANCE`] of the hull of the points still
/// kept; exact duplicates keep their last copy.
pub fn hull_vertices<T: Real>(cloud: &PointCloud<T>) -> Result<VPolytope<T>> {
    if cloud.is_empty() {
        return Err(Error::InvalidArgument("empty point cloud".into()));
    }
    let tol = c::<T>(HULL_TOLERANCE);
    let mut kept: Vec<usize> = (0..cloud.len()).collect();
    let mut idx = 0;
    while idx < kept.len() {
        if kept.len() == 1 {
            break;
        }
        let candidate = &cloud.points[kept[idx]];
        let others: Vec<Vec<T>> = kept
            .iter()
            .enumerate()
            .filter(|&(pos, _)| pos != idx)
            .map(|(_, &i)| cloud.points[i].clone())
            .collect();
        let (_, d) = project_onto_points(candidate, &others)?;
        if d < tol {
            kept.remove(idx);
        } else {
            idx += 1;
        }
    }
    VPolytope::from_vertices(cloud.dim, kept.into_iter().map(|i| cloud.points[i].clone()).collect())
}

/// `max_{a in A} d(a, B)`; attained at a vertex of `A`.
pub fn directed_hausdorff<T: Real>(a: &VPolytope<T>, b: &VPolytope<T>) -> Result<T> {
    if a.dim != b.dim {
        return Err(Error::DimensionMismatch { expected: a.dim, found: b.dim });
    }
    a.vertices.iter().try_fold(T::zero(), |m, v| Ok(m.max(project_onto(v, b)?.1)))
}

/// Hausdorff distance between the hulls of two vertex sets.
pub fn hausdorff<T: Real>(a: &VPolytope<T>, b: &VPolytope<T>) -> Result<T> {
    Ok(directed_hausdorff(a, b)?.max(directed_hausdorff(b, a)?))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Support<T> {
    pub value: T,
    /// Indices of the vertices attaining the value up to the tolerance.
    pub witnesses: Vec<usize>,
}

impl<T> Support<T> {
    pub fn is_unique(&self) -> bool {
        self.witnesses.len() == 1
    }
}

/// Maximum of `<s, v>` over the vertices and every vertex within
/// `tol * (1 + |value|)` of it.
pub fn support_argmax<T: Real>(polytope: &VPolytope<T>, s: &[T], tol: T) -> Result<Support<T>> {
    if s.len() != polytope.dim {
        return Err(Error::DimensionMismatch { expected: polytope.dim, found: s.len() });
    }
    if (norm(s) - T::one()).abs() > c(1e-9) {
        return Err(Error::InvalidArgument("direction must be a unit vector".into()));
    }
    let values: Vec<T> = polytope.vertices.iter().map(|v| dot(s, v)).collect();
    let value = values.iter().copied().fold(T::neg_infinity(), T::max);
    let cut = tol * (T::one() + value.abs());
    let witnesses = values.iter().enumerate().filter(|(_, &v)| value - v <= cut).map(|(i, _)| i).collect();
    Ok(Support { value, witnesses })
}

/// Uniformly distributed unit vector.
pub fn random_unit_vector<T: Real, R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Vec<T>
where
    StandardNormal: Distribution<T>,
{
    loop {
        let v: Vec<T> = (0..dim).map(|_| StandardNormal.sample(rng)).collect();
        let len = norm(&v);
        if len > T::zero() {
            return v.into_iter().map(|x| x / len).collect();
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EpsilonNet<T> {
    /// Indices into the polytope's vertex list, in order of discovery.
    pub vertices: Vec<usize>,
    /// Largest distance from a polytope vertex to the hull of the net.
    pub radius: T,
    pub directions_used: usize,
}

/// Collects vertices that are unique maximizers of random directions until
/// every vertex of the polytope lies within `eps` of their hull, or until
/// `max_directions` directions have been tried.
pub fn inner_epsilon_net<T: Real, R: Rng + ?Sized>(
    polytope: &VPolytope<T>,
    eps: T,
    rng: &mut R,
    max_directions: usize,
) -> Result<EpsilonNet<T>>
where
    StandardNormal: Distribution<T>,
{
    if eps <= T::zero() {
        return Err(Error::InvalidArgument("eps must be positive".into()));
    }
    let mut net: Vec<usize> = Vec::new();
    let mut radius = T::infinity();
    let mut used = 0;
    while used < max_directions && radius > eps {
        used += 1;
        let s = random_unit_vector(polytope.dim, rng);
        let support = support_argmax(polytope, &s, c(UNIQUENESS_TOLERANCE))?;
        if !support.is_unique() || net.contains(&support.witnesses[0]) {
            continue;
        }
        net.push(support.witnesses[0]);
        let members: Vec<Vec<T>> = net.iter().map(|&i| polytope.vertices[i].clone()).collect();
        radius = polytope
            .vertices
            .iter()
            .try_fold(T::zero(), |m, v| Ok::<T, Error>(m.max(project_onto_points(v, &members)?.1)))?;
    }
    Ok(EpsilonNet { vertices: net, radius, directions_used: used })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProbeReport<T> {
    pub satisfied: bool,
    /// Constraint with the smallest slack.
    pub worst_index: usize,
    pub worst_slack: T,
}

/// Tests each probe point against every half-space; a point passes when
/// all slacks are at least `-CONSTRAINT_SLACK`.
pub fn outer_approximation<T: Real>(halfspaces: &[HalfSpace<T>], probe: &PointCloud<T>) -> Result<Vec<ProbeReport<T>>> {
    if halfspaces.is_empty() {
        return Err(Error::InvalidArgument("need at least one half-space".into()));
    }
    if let Some(h) = halfspaces.iter().find(|h| h.normal.len() != probe.dim) {
        return Err(Error::DimensionMismatch { expected: probe.dim, found: h.normal.len() });
    }
    Ok(probe
        .points
        .iter()
        .map(|p| {
            let (worst_index, worst_slack) = halfspaces
                .iter()
                .map(|h| h.slack(p))
                .enumerate()
                .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
                .expect("nonempty");
            ProbeReport { satisfied: worst_slack >= -c::<T>(CONSTRAINT_SLACK), worst_index, worst_slack }
        })
        .collect())
}

/// Projection onto an intersection of half-spaces by Dykstra's alternating
/// projections. Returns the nearest point and its distance to `q`.
pub fn project_onto_polyhedron<T: Real>(q: &[T], halfspaces: &[HalfSpace<T>], tol: T, max_sweeps: usize) -> Result<(Vec<T>, T)> {
    if halfspaces.is_empty() {
        return Ok((q.to_vec(), T::zero()));
    }
    if halfspaces.iter().all(|h| h.slack(q) >= T::zero()) {
        return Ok((q.to_vec(), T::zero()));
    }
    let dim = q.len();
    let mut x = q.to_vec();
    let mut increments = vec![vec![T::zero(); dim]; halfspaces.len()];
    for _ in 0..max_sweeps {
        let before = x.clone();
        for (h, inc) in halfspaces.iter().zip(increments.iter_mut()) {
            let y: Vec<T> = x.iter().zip(inc.iter()).map(|(&a, &b)| a + b).collect();
            let p = h.project(&y);
            for k in 0..dim {
                inc[k] = y[k] - p[k];
            }
            x = p;
        }
        let moved = distance(&before, &x);
        let worst = halfspaces.iter().map(|h| h.slack(&x)).fold(T::infinity(), T::min);
        if moved <= tol && worst >= -tol {
            let d = distance(q, &x);
            return Ok((x, d));
        }
    }
    Err(Error::ProjectionDidNotConverge { iterations: max_sweeps })
}
