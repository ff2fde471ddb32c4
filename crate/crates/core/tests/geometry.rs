use aligndist::engine::enumerate_distributions;
use aligndist::geometry::{
    directed_hausdorff, distance, dot, inner_epsilon_net, random_unit_vector, HULL_TOLERANCE,
};
use aligndist::{hausdorff, hull_vertices, project_onto, support_argmax, Alphabet, LetterString, PointCloud, VPolytope};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_points<R: Rng>(count: usize, dim: usize, rng: &mut R) -> Vec<Vec<f64>> {
    (0..count).map(|_| (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect()).collect()
}

fn polytope(points: Vec<Vec<f64>>) -> VPolytope<f64> {
    let dim = points[0].len();
    VPolytope::from_vertices(dim, points).unwrap()
}

fn combination<R: Rng>(points: &[Vec<f64>], rng: &mut R) -> Vec<f64> {
    let w: Vec<f64> = (0..points.len()).map(|_| -rng.random::<f64>().ln()).collect();
    let total: f64 = w.iter().sum();
    let mut x = vec![0.0; points[0].len()];
    for (p, wi) in points.iter().zip(&w) {
        for (xk, pk) in x.iter_mut().zip(p) {
            *xk += pk * wi / total;
        }
    }
    x
}

/// Solves a small dense system by Gaussian elimination; `None` if singular.
fn solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for c in 0..n {
        let p = (c..n).max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs()))?;
        if a[p][c].abs() < 1e-12 {
            return None;
        }
        a.swap(c, p);
        b.swap(c, p);
        for r in 0..n {
            if r != c {
                let f = a[r][c] / a[c][c];
                for k in 0..n {
                    a[r][k] -= f * a[c][k];
                }
                b[r] -= f * b[c];
            }
        }
    }
    Some((0..n).map(|i| b[i] / a[i][i]).collect())
}

/// Exact distance from `q` to the hull of `vertices` by trying every
/// affinely independent subset of at most `dim + 1` vertices.
fn face_enumeration_distance(q: &[f64], vertices: &[Vec<f64>]) -> f64 {
    let m = vertices.len();
    let dim = q.len();
    let mut best = f64::INFINITY;
    for mask in 1u32..(1 << m) {
        let idx: Vec<usize> = (0..m).filter(|i| mask & (1 << i) != 0).collect();
        if idx.len() > dim + 1 {
            continue;
        }
        let k = idx.len();
        // minimize |sum w_i v_i - q|^2 subject to sum w_i = 1
        let mut a = vec![vec![0.0; k + 1]; k + 1];
        let mut b = vec![0.0; k + 1];
        for r in 0..k {
            for c in 0..k {
                a[r][c] = dot(&vertices[idx[r]], &vertices[idx[c]]);
            }
            a[r][k] = 1.0;
            a[k][r] = 1.0;
            b[r] = dot(&vertices[idx[r]], q);
        }
        b[k] = 1.0;
        let Some(w) = solve(a, b) else { continue };
        if w[..k].iter().any(|&wi| wi < -1e-12) {
            continue;
        }
        let mut x = vec![0.0; dim];
        for (r, &i) in idx.iter().enumerate() {
            for d in 0..dim {
                x[d] += w[r] * vertices[i][d];
            }
        }
        best = best.min(distance(&x, q));
    }
    best
}

#[test]
fn projection_matches_grid_search_on_triangles_in_r5() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let steps = 1000;
    for _ in 0..10 {
        let tri = random_points(3, 5, &mut rng);
        let q: Vec<f64> = (0..5).map(|_| rng.random_range(-2.0..2.0)).collect();
        let (_, d) = project_onto(&q, &polytope(tri.clone())).unwrap();
        let mut grid = f64::INFINITY;
        for i in 0..=steps {
            for j in 0..=steps - i {
                let (u, v) = (i as f64 / steps as f64, j as f64 / steps as f64);
                let x: Vec<f64> = (0..5).map(|k| u * tri[0][k] + v * tri[1][k] + (1.0 - u - v) * tri[2][k]).collect();
                grid = grid.min(distance(&x, &q));
            }
        }
        assert!(d <= grid + 1e-12 && grid - d <= 1e-4, "solver {d}, grid {grid}");
    }
}

#[test]
fn projection_matches_face_enumeration_on_simplices_in_r5() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..50 {
        let simplex = random_points(6, 5, &mut rng);
        let q: Vec<f64> = (0..5).map(|_| rng.random_range(-2.0..2.0)).collect();
        let (p, d) = project_onto(&q, &polytope(simplex.clone())).unwrap();
        assert!((d - face_enumeration_distance(&q, &simplex)).abs() < 1e-9);
        // optimality: every vertex lies in the half-space behind the projection
        let dir: Vec<f64> = q.iter().zip(&p).map(|(a, b)| a - b).collect();
        for v in &simplex {
            let w: Vec<f64> = v.iter().zip(&p).map(|(a, b)| a - b).collect();
            assert!(dot(&dir, &w) <= 1e-9);
        }
    }
}

#[test]
fn convex_combinations_project_to_themselves() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for dim in [2, 5, 8] {
        let pts = random_points(12, dim, &mut rng);
        let poly = polytope(pts.clone());
        for _ in 0..50 {
            let x = combination(&pts, &mut rng);
            assert!(project_onto(&x, &poly).unwrap().1 < 1e-9);
        }
        for v in &pts {
            let (p, d) = project_onto(v, &poly).unwrap();
            assert!(d < 1e-12 && distance(&p, v) < 1e-12);
        }
    }
}

#[test]
fn hausdorff_matches_exact_oracle_in_r3() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..20 {
        let a = random_points(5, 3, &mut rng);
        let b: Vec<Vec<f64>> = random_points(6, 3, &mut rng).into_iter().map(|p| p.iter().map(|x| x * 0.5 + 0.3).collect()).collect();
        // sup over a dense sample of each set (vertices included), inf exact
        let mut samples_a = a.clone();
        samples_a.extend((0..2000).map(|_| combination(&a, &mut rng)));
        let mut samples_b = b.clone();
        samples_b.extend((0..2000).map(|_| combination(&b, &mut rng)));
        let ab = samples_a.iter().map(|x| face_enumeration_distance(x, &b)).fold(0.0, f64::max);
        let ba = samples_b.iter().map(|x| face_enumeration_distance(x, &a)).fold(0.0, f64::max);
        let got = hausdorff(&polytope(a.clone()), &polytope(b.clone())).unwrap();
        assert!((got - ab.max(ba)).abs() < 1e-3, "{got} vs {}", ab.max(ba));
    }
}

#[test]
fn hausdorff_axioms() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..30 {
        let (a, b, c) = (
            polytope(random_points(6, 4, &mut rng)),
            polytope(random_points(5, 4, &mut rng)),
            polytope(random_points(7, 4, &mut rng)),
        );
        assert!(hausdorff(&a, &a).unwrap() < 1e-12);
        let (ab, ba) = (hausdorff(&a, &b).unwrap(), hausdorff(&b, &a).unwrap());
        assert!((ab - ba).abs() < 1e-12);
        assert!(ab <= hausdorff(&a, &c).unwrap() + hausdorff(&c, &b).unwrap() + 1e-9);
        assert!(directed_hausdorff(&a, &b).unwrap() <= ab + 1e-12);
    }
}

#[test]
fn hull_vertices_contain_the_cloud() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for dim in [2, 3, 5] {
        let mut pts = random_points(15, dim, &mut rng);
        let inner: Vec<Vec<f64>> = (0..15).map(|_| combination(&pts, &mut rng)).collect();
        pts.extend(inner);
        let hull = hull_vertices(&PointCloud::new(dim, pts.clone()).unwrap()).unwrap();
        assert!(hull.vertices().len() <= 15);
        for p in &pts {
            assert!(project_onto(p, &hull).unwrap().1 < HULL_TOLERANCE);
        }
        for (i, v) in hull.vertices().iter().enumerate() {
            let others: Vec<Vec<f64>> = hull.vertices().iter().enumerate().filter(|&(j, _)| j != i).map(|(_, w)| w.clone()).collect();
            assert!(project_onto(v, &polytope(others)).unwrap().1 >= HULL_TOLERANCE);
        }
    }
}

#[test]
fn hull_of_all_alignments_of_the_worked_example() {
    let a = Alphabet::binary();
    let x = LetterString::parse(&a, "abab").unwrap();
    let y = LetterString::parse(&a, "aabb").unwrap();
    let (dists, _) = enumerate_distributions(&x, &y, &a, 1_000_000).unwrap();
    let pts: Vec<Vec<f64>> = dists.iter().map(|d| d.to_f64()).collect();
    let hull = hull_vertices(&PointCloud::new(8, pts.clone()).unwrap()).unwrap();
    assert!(hull.vertices().len() < pts.len());
    for p in &pts {
        assert!(project_onto(p, &hull).unwrap().1 < 1e-9);
    }
}

#[test]
fn support_is_almost_surely_unique() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let poly = hull_vertices(&PointCloud::new(4, random_points(30, 4, &mut rng)).unwrap()).unwrap();
    let ties = (0..1000)
        .filter(|_| !support_argmax(&poly, &random_unit_vector::<f64, _>(4, &mut rng), 1e-9).unwrap().is_unique())
        .count();
    assert_eq!(ties, 0);
}

#[test]
fn support_ignores_interior_points_and_reflects() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let pts = random_points(10, 3, &mut rng);
    let base = hull_vertices(&PointCloud::new(3, pts.clone()).unwrap()).unwrap();
    let mut padded = pts.clone();
    padded.extend((0..20).map(|_| combination(&pts, &mut rng)));
    let padded = hull_vertices(&PointCloud::new(3, padded).unwrap()).unwrap();
    let reflected = polytope(pts.iter().map(|p| p.iter().map(|x| -x).collect()).collect());
    for _ in 0..100 {
        let s = random_unit_vector::<f64, _>(3, &mut rng);
        let v = support_argmax(&base, &s, 1e-9).unwrap().value;
        assert!((v - support_argmax(&padded, &s, 1e-9).unwrap().value).abs() < 1e-12);
        let neg: Vec<f64> = s.iter().map(|x| -x).collect();
        assert!((v - support_argmax(&reflected, &neg, 1e-9).unwrap().value).abs() < 1e-12);
    }
}

#[test]
fn epsilon_net_approaches_the_vertex_set() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let poly = hull_vertices(&PointCloud::new(3, random_points(12, 3, &mut rng)).unwrap()).unwrap();
    let coarse = inner_epsilon_net(&poly, poly.diameter(), &mut rng, 1000).unwrap();
    assert_eq!(coarse.vertices.len(), 1);
    let mut previous = 0;
    for eps in [0.5, 0.1, 1e-6] {
        let net = inner_epsilon_net(&poly, eps, &mut rng, 200_000).unwrap();
        assert!(net.radius <= eps);
        assert!(net.vertices.len() >= previous);
        previous = net.vertices.len();
    }
    assert_eq!(previous, poly.vertices().len());
}
