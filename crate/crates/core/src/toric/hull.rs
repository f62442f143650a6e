//! Exact integer 3D convex hull for small lattice polytopes with interior
//! origin, plus the 2D lattice geometry used to classify facets.

use num::integer::gcd;

use crate::error::{Error, Result};
use crate::mat::{smith_normal_form, Mat};

pub type V3 = [i64; 3];
pub type V2 = [i64; 2];

pub fn dot(a: &V3, b: &V3) -> i64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn sub(a: &V3, b: &V3) -> V3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub fn cross(a: &V3, b: &V3) -> V3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

pub fn neg(a: &V3) -> V3 {
    [-a[0], -a[1], -a[2]]
}

fn gcd3(v: &V3) -> i64 {
    gcd(gcd(v[0].abs(), v[1].abs()), v[2].abs())
}

pub fn primitive(v: &V3) -> V3 {
    let g = gcd3(v);
    debug_assert!(g > 0);
    [v[0] / g, v[1] / g, v[2] / g]
}

pub fn det3(a: &V3, b: &V3, c: &V3) -> i64 {
    dot(a, &cross(b, c))
}

/// A supporting plane of the hull: outer primitive normal, its level
/// (<n, x> = level on the facet, <= level inside), and the indices of the
/// points lying on it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Facet {
    pub normal: V3,
    pub level: i64,
    pub point_indices: Vec<usize>,
}

/// Brute-force facet enumeration over point triples. Requires a
/// full-dimensional point set with the origin strictly interior; facets are
/// sorted by (normal, level).
pub fn hull_facets(points: &[V3]) -> Result<Vec<Facet>> {
    let k = points.len();
    let mut seen: Vec<(V3, i64)> = Vec::new();
    for i in 0..k {
        for j in i + 1..k {
            for l in j + 1..k {
                let n = cross(&sub(&points[j], &points[i]), &sub(&points[l], &points[i]));
                if n == [0, 0, 0] {
                    continue;
                }
                let c = dot(&n, &points[i]);
                let (n, c) = if points.iter().all(|p| dot(&n, p) <= c) {
                    (n, c)
                } else if points.iter().all(|p| dot(&n, p) >= c) {
                    (neg(&n), -c)
                } else {
                    continue;
                };
                if c <= 0 {
                    return Err(Error::MalformedInput(
                        "origin is not strictly interior to the polytope".into(),
                    ));
                }
                let np = primitive(&n);
                let lev = dot(&np, &points[i]);
                if !seen.contains(&(np, lev)) {
                    seen.push((np, lev));
                }
            }
        }
    }
    if seen.is_empty() {
        return Err(Error::NotFullDimensional);
    }
    seen.sort();
    let facets: Vec<Facet> = seen
        .into_iter()
        .map(|(normal, level)| {
            let point_indices = (0..k).filter(|&t| dot(&normal, &points[t]) == level).collect();
            Facet { normal, level, point_indices }
        })
        .collect();
    // normals of a full-dimensional hull span rank 3
    let nmat = Mat::from_rows(
        facets
            .iter()
            .map(|f| f.normal.iter().map(|&x| x.into()).collect())
            .collect(),
    )?;
    if nmat.rank() < 3 {
        return Err(Error::NotFullDimensional);
    }
    Ok(facets)
}

/// Indices of the points that are genuine vertices: on at least three facets
/// whose normals span rank 3.
pub fn vertex_indices(points: &[V3], facets: &[Facet]) -> Vec<usize> {
    (0..points.len())
        .filter(|&t| {
            let norms: Vec<Vec<num::BigInt>> = facets
                .iter()
                .filter(|f| f.point_indices.contains(&t))
                .map(|f| f.normal.iter().map(|&x| x.into()).collect())
                .collect();
            norms.len() >= 3
                && Mat::from_rows(norms).map(|m| m.rank() == 3).unwrap_or(false)
        })
        .collect()
}

/// All lattice points of the polytope cut out by the facet inequalities,
/// scanned over the bounding box of `points`.
pub fn lattice_points(points: &[V3], facets: &[Facet]) -> Vec<V3> {
    let lo: Vec<i64> = (0..3).map(|i| points.iter().map(|p| p[i]).min().unwrap()).collect();
    let hi: Vec<i64> = (0..3).map(|i| points.iter().map(|p| p[i]).max().unwrap()).collect();
    let mut out = Vec::new();
    for x in lo[0]..=hi[0] {
        for y in lo[1]..=hi[1] {
            for z in lo[2]..=hi[2] {
                let p = [x, y, z];
                if facets.iter().all(|f| dot(&f.normal, &p) <= f.level) {
                    out.push(p);
                }
            }
        }
    }
    out
}

/// Integral basis of the rank-2 sublattice orthogonal to a primitive normal.
pub fn plane_basis(n: &V3) -> (V3, V3) {
    let row = Mat::from_rows(vec![n.iter().map(|&x| x.into()).collect()]).unwrap();
    let s = smith_normal_form(&row);
    let col = |j: usize| -> V3 {
        let mut v = [0i64; 3];
        for (i, slot) in v.iter_mut().enumerate() {
            *slot = num::ToPrimitive::to_i64(s.v.get(i, j)).unwrap();
        }
        v
    };
    let (b1, b2) = (col(1), col(2));
    debug_assert_eq!(dot(n, &b1), 0);
    debug_assert_eq!(dot(n, &b2), 0);
    (b1, b2)
}

/// Coordinates of coplanar points in the 2D lattice of their plane, based at
/// the first point.
pub fn facet_2d(points3: &[V3], n: &V3) -> Vec<V2> {
    let (b1, b2) = plane_basis(n);
    let v0 = points3[0];
    // invert the 2x2 Gram of the basis to solve B (c1, c2) = p - v0 exactly
    let g11 = dot(&b1, &b1);
    let g12 = dot(&b1, &b2);
    let g22 = dot(&b2, &b2);
    let det = g11 * g22 - g12 * g12;
    debug_assert!(det != 0);
    points3
        .iter()
        .map(|p| {
            let d = sub(p, &v0);
            let r1 = dot(&b1, &d);
            let r2 = dot(&b2, &d);
            let c1num = g22 * r1 - g12 * r2;
            let c2num = g11 * r2 - g12 * r1;
            debug_assert_eq!(c1num % det, 0);
            debug_assert_eq!(c2num % det, 0);
            [c1num / det, c2num / det]
        })
        .collect()
}

pub fn det2(a: &V2, b: &V2) -> i64 {
    a[0] * b[1] - a[1] * b[0]
}

fn sub2(a: &V2, b: &V2) -> V2 {
    [a[0] - b[0], a[1] - b[1]]
}

/// Convex hull of 2D lattice points in counterclockwise order (monotone
/// chain); collinear boundary points are dropped.
pub fn hull_2d(points: &[V2]) -> Vec<V2> {
    let mut pts: Vec<V2> = points.to_vec();
    pts.sort();
    pts.dedup();
    if pts.len() <= 2 {
        return pts;
    }
    let turn = |o: &V2, a: &V2, b: &V2| det2(&sub2(a, o), &sub2(b, o));
    let mut lower: Vec<V2> = Vec::new();
    for p in &pts {
        while lower.len() >= 2 && turn(&lower[lower.len() - 2], &lower[lower.len() - 1], p) <= 0 {
            lower.pop();
        }
        lower.push(*p);
    }
    let mut upper: Vec<V2> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2 && turn(&upper[upper.len() - 2], &upper[upper.len() - 1], p) <= 0 {
            upper.pop();
        }
        upper.push(*p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Count the points strictly inside the convex hull of the set (not on any
/// boundary edge).
pub fn interior_2d_count(points: &[V2]) -> usize {
    let hull = hull_2d(points);
    if hull.len() <= 2 {
        return 0;
    }
    let on_boundary = |p: &V2| -> bool {
        for i in 0..hull.len() {
            let a = hull[i];
            let b = hull[(i + 1) % hull.len()];
            if det2(&sub2(&b, &a), &sub2(p, &a)) == 0 {
                let lo = [a[0].min(b[0]), a[1].min(b[1])];
                let hi = [a[0].max(b[0]), a[1].max(b[1])];
                if p[0] >= lo[0] && p[0] <= hi[0] && p[1] >= lo[1] && p[1] <= hi[1] {
                    return true;
                }
            }
        }
        false
    };
    points.iter().filter(|p| !on_boundary(p)).count()
}

/// Facet classification for terminality: unimodular triangle, unimodular
/// parallelogram with its (a, b, c, d) labeling (a + c = b + d, a the 2D
/// lexicographic minimum), or neither.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FacetKind {
    Triangle,
    Parallelogram { labels: [usize; 4] },
    Other,
}

/// Classify the full lattice point set of a facet, given in 2D coordinates.
/// Parallelogram labels index into `pts2`.
pub fn classify_facet(pts2: &[V2]) -> FacetKind {
    if pts2.len() == 3 {
        let (a, b, c) = (pts2[0], pts2[1], pts2[2]);
        if det2(&sub2(&b, &a), &sub2(&c, &a)).abs() == 1 {
            return FacetKind::Triangle;
        }
        return FacetKind::Other;
    }
    if pts2.len() == 4 {
        let ai = (0..4).min_by_key(|&i| pts2[i]).unwrap();
        let a = pts2[ai];
        let rest: Vec<usize> = (0..4).filter(|&i| i != ai).collect();
        for &ci in &rest {
            let c = pts2[ci];
            let mut others: Vec<usize> = rest.iter().copied().filter(|&i| i != ci).collect();
            others.sort_by_key(|&i| pts2[i]);
            let (bi, di) = (others[0], others[1]);
            let (b, d) = (pts2[bi], pts2[di]);
            if [a[0] + c[0], a[1] + c[1]] == [b[0] + d[0], b[1] + d[1]] {
                if det2(&sub2(&b, &a), &sub2(&d, &a)).abs() == 1 {
                    return FacetKind::Parallelogram { labels: [ai, bi, ci, di] };
                }
                return FacetKind::Other;
            }
        }
        return FacetKind::Other;
    }
    FacetKind::Other
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simplex_hull() {
        let pts = [[1, 0, 0], [0, 1, 0], [0, 0, 1], [-1, -1, -1]];
        let facets = hull_facets(&pts).unwrap();
        assert_eq!(facets.len(), 4);
        assert!(facets.iter().all(|f| f.level == 1));
        assert_eq!(vertex_indices(&pts, &facets).len(), 4);
        assert_eq!(lattice_points(&pts, &facets).len(), 5);
    }

    #[test]
    fn origin_not_interior() {
        let pts = [[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 1]];
        assert!(matches!(
            hull_facets(&pts),
            Err(Error::MalformedInput(_))
        ));
    }

    #[test]
    fn flat_input() {
        let pts = [[1, 0, 0], [0, 1, 0], [-1, -1, 0]];
        assert!(hull_facets(&pts).is_err());
    }

    #[test]
    fn classify_shapes() {
        assert_eq!(classify_facet(&[[0, 0], [1, 0], [0, 1]]), FacetKind::Triangle);
        assert_eq!(classify_facet(&[[0, 0], [2, 0], [0, 2]]), FacetKind::Other);
        let sq = [[0, 0], [1, 0], [1, 1], [0, 1]];
        match classify_facet(&sq) {
            FacetKind::Parallelogram { labels } => {
                let a = sq[labels[0]];
                let c = sq[labels[2]];
                assert_eq!(a, [0, 0]);
                assert_eq!(c, [1, 1]);
            }
            other => panic!("expected parallelogram, got {other:?}"),
        }
        assert_eq!(
            classify_facet(&[[0, 0], [1, 0], [2, 0], [0, 1]]),
            FacetKind::Other
        );
    }

    #[test]
    fn hull2d_and_interior() {
        let square9: Vec<V2> = (0..3).flat_map(|x| (0..3).map(move |y| [x, y])).collect();
        let hull = hull_2d(&square9);
        assert_eq!(hull.len(), 4);
        assert_eq!(interior_2d_count(&square9), 1);
        assert_eq!(interior_2d_count(&[[0, 0], [1, 0], [0, 1], [1, 1]]), 0);
    }

    #[test]
    fn plane_basis_integral() {
        for n in [[1, 2, 3], [0, 0, 1], [2, -1, 4]] {
            let (b1, b2) = plane_basis(&n);
            assert_eq!(dot(&n, &b1), 0);
            assert_eq!(dot(&n, &b2), 0);
            assert_ne!(cross(&b1, &b2), [0, 0, 0]);
        }
    }
}
