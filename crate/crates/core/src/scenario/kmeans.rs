use rand::seq::index;

use super::Point;
use crate::error::{Error, Result};
use crate::rng::{self, Stream};

const MAX_ITERATIONS: usize = 100;

/// Lloyd's K-means over small-cell positions.
///
/// Centroids start at `k` distinct points drawn with `seed`. A cluster that
/// empties out is re-seeded at the point farthest from its current centroid.
/// The returned assignment maps every point to its nearest final centroid
/// (ties go to the lower cluster id). Cluster ids are zero-based.
pub fn cluster_sbs(points: &[Point], k: usize, seed: u64) -> Result<Vec<usize>> {
    lloyd(points, k, seed).map(|(assignment, _)| assignment)
}

/// Same as [`cluster_sbs`] but also returns the final centroids.
pub fn lloyd(points: &[Point], k: usize, seed: u64) -> Result<(Vec<usize>, Vec<Point>)> {
    if k == 0 {
        return Err(Error::config("number of clusters must be at least 1"));
    }
    if points.len() < k {
        return Err(Error::config(format!(
            "cannot form {k} clusters from {} small cells",
            points.len()
        )));
    }
    let mut rng = rng::stream(seed, Stream::Clustering);
    let mut centroids: Vec<Point> = index::sample(&mut rng, points.len(), k)
        .into_iter()
        .map(|i| points[i])
        .collect();
    let mut assignment = assign(points, &centroids);

    for _ in 0..MAX_ITERATIONS {
        let mut sums = vec![(0.0, 0.0, 0usize); k];
        for (p, &c) in points.iter().zip(&assignment) {
            sums[c].0 += p.x;
            sums[c].1 += p.y;
            sums[c].2 += 1;
        }
        for (c, (sx, sy, n)) in sums.into_iter().enumerate() {
            if n > 0 {
                centroids[c] = Point {
                    x: sx / n as f64,
                    y: sy / n as f64,
                };
            } else {
                let far = farthest_point(points, &assignment, &centroids);
                centroids[c] = points[far];
            }
        }
        let next = assign(points, &centroids);
        if next == assignment {
            break;
        }
        assignment = next;
    }
    Ok((assignment, centroids))
}

fn nearest(p: &Point, centroids: &[Point]) -> usize {
    let mut best = 0;
    let mut best_d = f64::INFINITY;
    for (c, centroid) in centroids.iter().enumerate() {
        let d = p.distance(centroid);
        if d < best_d {
            best_d = d;
            best = c;
        }
    }
    best
}

fn assign(points: &[Point], centroids: &[Point]) -> Vec<usize> {
    points.iter().map(|p| nearest(p, centroids)).collect()
}

fn farthest_point(points: &[Point], assignment: &[usize], centroids: &[Point]) -> usize {
    let mut best = 0;
    let mut best_d = -1.0;
    for (i, (p, &c)) in points.iter().zip(assignment).enumerate() {
        let d = p.distance(&centroids[c]);
        if d > best_d {
            best_d = d;
            best = i;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(x: f64, y: f64) -> Point {
        Point { x, y }
    }

    #[test]
    fn k_equals_n_gives_singletons() {
        let pts = vec![pt(0.0, 0.0), pt(1.0, 0.0), pt(0.0, 1.0), pt(5.0, 5.0)];
        for seed in 0..10 {
            let mut a = cluster_sbs(&pts, 4, seed).unwrap();
            a.sort_unstable();
            assert_eq!(a, vec![0, 1, 2, 3]);
        }
    }

    #[test]
    fn separated_groups_split() {
        let mut pts = Vec::new();
        for i in 0..5 {
            pts.push(pt(0.01 * i as f64, 0.0));
        }
        for i in 0..5 {
            pts.push(pt(10.0 + 0.01 * i as f64, 0.0));
        }
        for seed in 0..20 {
            let a = cluster_sbs(&pts, 2, seed).unwrap();
            assert!(a[..5].iter().all(|c| *c == a[0]));
            assert!(a[5..].iter().all(|c| *c == a[5]));
            assert_ne!(a[0], a[5]);
        }
    }

    #[test]
    fn deterministic_given_seed() {
        let pts: Vec<Point> = (0..30)
            .map(|i| pt((i as f64 * 0.37).sin(), (i as f64 * 1.3).cos()))
            .collect();
        assert_eq!(cluster_sbs(&pts, 6, 4).unwrap(), cluster_sbs(&pts, 6, 4).unwrap());
    }

    #[test]
    fn assignment_is_nearest_final_centroid() {
        let pts: Vec<Point> = (0..40)
            .map(|i| pt((i as f64 * 0.71).sin() * 3.0, (i as f64 * 0.29).cos() * 2.0))
            .collect();
        for seed in 0..5 {
            let (a, cs) = lloyd(&pts, 6, seed).unwrap();
            for (p, &c) in pts.iter().zip(&a) {
                let own = p.distance(&cs[c]);
                assert!(cs.iter().all(|o| own <= p.distance(o)));
            }
        }
    }

    #[test]
    fn too_few_points() {
        let pts = vec![pt(0.0, 0.0)];
        assert!(matches!(cluster_sbs(&pts, 2, 0), Err(Error::Config(_))));
    }
}
