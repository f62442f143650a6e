//! Lattice polytopes with interior origin: parsing, duality, facet
//! classification, and the invariant profile of the associated toric
//! (semi-)Fano 3-fold.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::mat::Mat;
use crate::toric::hull::{
    classify_facet, det3, dot, facet_2d, hull_2d, hull_facets, interior_2d_count, lattice_points,
    neg, vertex_indices, Facet, FacetKind, V2, V3,
};

/// A full-dimensional lattice polytope in Z^3 with the origin strictly in its
/// interior. Vertices are sorted lexicographically; facets by (normal, level).
#[derive(Clone, Debug)]
pub struct LatticePolytope {
    pub vertices: Vec<V3>,
    pub facets: Vec<Facet>,
    pub lattice_points: Vec<V3>,
}

/// A unimodular parallelogram facet with its canonical corner labeling
/// (a, b, c, d): a + c = b + d and {a, c} is the default diagonal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Parallelogram {
    pub normal: V3,
    pub corners: [V3; 4],
}

impl LatticePolytope {
    /// Build from an arbitrary generating point set: deduplicate, take the
    /// hull, and keep only genuine vertices.
    pub fn from_points(points: &[V3]) -> Result<Self> {
        let mut pts: Vec<V3> = points.to_vec();
        pts.sort();
        pts.dedup();
        if pts.len() < 4 {
            return Err(Error::NotFullDimensional);
        }
        let facets0 = hull_facets(&pts)?;
        let keep = vertex_indices(&pts, &facets0);
        let vertices: Vec<V3> = keep.into_iter().map(|i| pts[i]).collect();
        if vertices.len() < 4 {
            return Err(Error::NotFullDimensional);
        }
        let facets = hull_facets(&vertices)?;
        let lattice_points = lattice_points(&vertices, &facets);
        Ok(LatticePolytope { vertices, facets, lattice_points })
    }

    pub fn is_reflexive(&self) -> bool {
        self.facets.iter().all(|f| f.level == 1)
    }

    /// The polar dual polytope; defined only when reflexive.
    pub fn dual(&self) -> Result<LatticePolytope> {
        if let Some(f) = self.facets.iter().find(|f| f.level != 1) {
            return Err(Error::NotReflexive(format!(
                "facet with normal {:?} has level {}",
                f.normal, f.level
            )));
        }
        let dverts: Vec<V3> = self.facets.iter().map(|f| neg(&f.normal)).collect();
        LatticePolytope::from_points(&dverts)
    }

    /// All lattice points of a facet, in 2D plane coordinates and as 3D
    /// points.
    fn facet_points(&self, f: &Facet) -> (Vec<V3>, Vec<V2>) {
        let pts3: Vec<V3> = self
            .lattice_points
            .iter()
            .copied()
            .filter(|p| dot(&f.normal, p) == f.level)
            .collect();
        let pts2 = facet_2d(&pts3, &f.normal);
        (pts3, pts2)
    }

    /// Classify every facet by its full lattice point set.
    pub fn facet_kinds(&self) -> Vec<(Facet, FacetKind, Vec<V3>)> {
        self.facets
            .iter()
            .map(|f| {
                let (pts3, pts2) = self.facet_points(f);
                (f.clone(), classify_facet(&pts2), pts3)
            })
            .collect()
    }

    /// Unimodular parallelogram facets in canonical label order, sorted by
    /// outer normal.
    pub fn parallelograms(&self) -> Vec<Parallelogram> {
        let mut out: Vec<Parallelogram> = self
            .facet_kinds()
            .into_iter()
            .filter_map(|(f, kind, pts3)| match kind {
                FacetKind::Parallelogram { labels } => Some(Parallelogram {
                    normal: f.normal,
                    corners: [pts3[labels[0]], pts3[labels[1]], pts3[labels[2]], pts3[labels[3]]],
                }),
                _ => None,
            })
            .collect();
        out.sort_by_key(|p| p.normal);
        out
    }

    /// Six times the lattice volume, by fanning each facet polygon from the
    /// origin.
    pub fn volume6(&self) -> i64 {
        let mut total = 0i64;
        for f in &self.facets {
            let pts3: Vec<V3> = f.point_indices.iter().map(|&i| self.vertices[i]).collect();
            let pts2 = facet_2d(&pts3, &f.normal);
            let hull = hull_2d(&pts2);
            // recover the 3D points in cyclic hull order
            let ordered: Vec<V3> = hull
                .iter()
                .map(|h| {
                    let at = pts2.iter().position(|q| q == h).unwrap();
                    pts3[at]
                })
                .collect();
            for s in 1..ordered.len() - 1 {
                total += det3(&ordered[0], &ordered[s], &ordered[s + 1]).abs();
            }
        }
        total
    }
}

/// Search for a unimodular lattice map sending one vertex set bijectively to
/// the other.
pub fn unimodular_map_between(vs_a: &[V3], vs_b: &[V3]) -> Option<Mat> {
    let maps = unimodular_maps(vs_a, vs_b, true);
    maps.into_iter().next()
}

/// All unimodular lattice automorphisms of a vertex set.
pub fn automorphisms(vs: &[V3]) -> Vec<Mat> {
    unimodular_maps(vs, vs, false)
}

fn unimodular_maps(vs_a: &[V3], vs_b: &[V3], first_only: bool) -> Vec<Mat> {
    let mut out = Vec::new();
    if vs_a.len() != vs_b.len() {
        return out;
    }
    // first linearly independent triple of A, in lexicographic index order
    let k = vs_a.len();
    let mut base: Option<[usize; 3]> = None;
    'outer: for i in 0..k {
        for j in i + 1..k {
            for l in j + 1..k {
                if det3(&vs_a[i], &vs_a[j], &vs_a[l]) != 0 {
                    base = Some([i, j, l]);
                    break 'outer;
                }
            }
        }
    }
    let base = match base {
        Some(b) => b,
        None => return out,
    };
    let base_cols = Mat::from_i64(&[
        &[vs_a[base[0]][0], vs_a[base[1]][0], vs_a[base[2]][0]],
        &[vs_a[base[0]][1], vs_a[base[1]][1], vs_a[base[2]][1]],
        &[vs_a[base[0]][2], vs_a[base[1]][2], vs_a[base[2]][2]],
    ]);
    let inv = match base_cols.inverse_q() {
        Some(m) => m,
        None => return out,
    };
    let mut set_b: Vec<V3> = vs_b.to_vec();
    set_b.sort();
    for t0 in 0..k {
        for t1 in 0..k {
            for t2 in 0..k {
                if t0 == t1 || t0 == t2 || t1 == t2 {
                    continue;
                }
                let w = Mat::from_i64(&[
                    &[vs_b[t0][0], vs_b[t1][0], vs_b[t2][0]],
                    &[vs_b[t0][1], vs_b[t1][1], vs_b[t2][1]],
                    &[vs_b[t0][2], vs_b[t1][2], vs_b[t2][2]],
                ]);
                let prod = mul_q_int(&w, &inv);
                let a = match prod {
                    Some(m) => m,
                    None => continue,
                };
                if *a.det().magnitude() != num::BigUint::from(1u32) {
                    continue;
                }
                let mut image: Vec<V3> = vs_a.iter().map(|v| apply(&a, v)).collect();
                image.sort();
                if image == set_b {
                    out.push(a);
                    if first_only {
                        return out;
                    }
                }
            }
        }
    }
    out
}

/// Apply an integral 3x3 matrix to a lattice point.
pub fn apply(a: &Mat, v: &V3) -> V3 {
    let get = |i: usize, j: usize| num::ToPrimitive::to_i64(a.get(i, j)).unwrap();
    let mut out = [0i64; 3];
    for (i, slot) in out.iter_mut().enumerate() {
        *slot = get(i, 0) * v[0] + get(i, 1) * v[1] + get(i, 2) * v[2];
    }
    out
}

/// w * inv, kept only if all entries are integral.
fn mul_q_int(w: &Mat, inv: &[Vec<crate::mat::Q>]) -> Option<Mat> {
    let mut rows: Vec<Vec<num::BigInt>> = Vec::new();
    for i in 0..3 {
        let mut r = Vec::new();
        for j in 0..3 {
            let mut acc = crate::mat::Q::from_integer(0.into());
            for (t, invr) in inv.iter().enumerate() {
                acc += crate::mat::Q::from_integer(w.get(i, t).clone()) * invr[j].clone();
            }
            if !acc.is_integer() {
                return None;
            }
            r.push(acc.to_integer());
        }
        rows.push(r);
    }
    Mat::from_rows(rows).ok()
}

/// Rank of the Cartier-data constraint system: the Picard rank of the
/// singular toric 3-fold defined by the face fan.
pub fn cartier_rank(poly: &LatticePolytope) -> i64 {
    let nf = poly.facets.len();
    let mut rows: Vec<Vec<num::BigInt>> = Vec::new();
    for (vi, v) in poly.vertices.iter().enumerate() {
        let containing: Vec<usize> = poly
            .facets
            .iter()
            .enumerate()
            .filter(|(_, f)| f.point_indices.contains(&vi))
            .map(|(fi, _)| fi)
            .collect();
        let f0 = containing[0];
        for &f in &containing[1..] {
            let mut row = vec![num::BigInt::from(0); 3 * nf];
            for c in 0..3 {
                row[3 * f0 + c] += v[c];
                row[3 * f + c] -= v[c];
            }
            rows.push(row);
        }
    }
    let rank = if rows.is_empty() {
        0
    } else {
        Mat::from_rows(rows).unwrap().rank()
    };
    3 * nf as i64 - rank as i64 - 3
}

/// Summary invariants of a polytope and of the toric 3-fold it defines.
/// Fields that require reflexivity are absent when the polytope is not
/// reflexive.
#[derive(Clone, Debug, Serialize)]
pub struct PolytopeProfile {
    pub vertices: usize,
    pub facets: usize,
    pub lattice_points: usize,
    pub reflexive: bool,
    pub self_dual: Option<bool>,
    pub terminal: Option<bool>,
    pub semismall: Option<bool>,
    pub e: Option<usize>,
    pub rho_resolution: Option<i64>,
    pub degree: Option<i64>,
    pub genus: Option<i64>,
    #[serde(rename = "rho_X")]
    pub rho_x: Option<i64>,
    pub sigma: Option<i64>,
}

pub fn polytope_profile(poly: &LatticePolytope) -> Result<PolytopeProfile> {
    let mut profile = PolytopeProfile {
        vertices: poly.vertices.len(),
        facets: poly.facets.len(),
        lattice_points: poly.lattice_points.len(),
        reflexive: poly.is_reflexive(),
        self_dual: None,
        terminal: None,
        semismall: None,
        e: None,
        rho_resolution: None,
        degree: None,
        genus: None,
        rho_x: None,
        sigma: None,
    };
    if !profile.reflexive {
        return Ok(profile);
    }
    let dual = poly.dual()?;
    profile.self_dual = Some(unimodular_map_between(&poly.vertices, &dual.vertices).is_some());
    let kinds = poly.facet_kinds();
    let mut e = 0usize;
    let mut terminal = true;
    let mut semismall = true;
    for (f, kind, pts3) in &kinds {
        match kind {
            FacetKind::Triangle => {}
            FacetKind::Parallelogram { .. } => e += 1,
            FacetKind::Other => terminal = false,
        }
        let pts2 = facet_2d(pts3, &f.normal);
        if interior_2d_count(&pts2) > 0 {
            semismall = false;
        }
    }
    profile.terminal = Some(terminal);
    profile.semismall = Some(semismall);
    profile.e = Some(e);
    profile.rho_resolution = Some(poly.lattice_points.len() as i64 - 4);
    let degree = dual.volume6();
    profile.degree = Some(degree);
    profile.genus = Some(degree / 2 + 1);
    let rho_x = cartier_rank(poly);
    profile.rho_x = Some(rho_x);
    profile.sigma = Some(profile.rho_resolution.unwrap() - rho_x);
    Ok(profile)
}

fn take_record(lines: &mut std::iter::Peekable<std::str::Lines>) -> Result<Option<Vec<V3>>> {
    let header = loop {
        match lines.next() {
            None => return Ok(None),
            Some(l) if l.trim().is_empty() => continue,
            Some(l) => break l,
        }
    };
    let toks: Vec<&str> = header.split_whitespace().collect();
    if toks.len() < 2 || toks[0] != "3" {
        return Err(Error::MalformedInput(format!(
            "expected a `3 k` polytope header, got {header:?}"
        )));
    }
    let k: usize = toks[1]
        .parse()
        .map_err(|_| Error::MalformedInput(format!("bad vertex count {:?}", toks[1])))?;
    if k == 0 {
        return Err(Error::MalformedInput("empty polytope record".into()));
    }
    let mut coords: Vec<Vec<i64>> = Vec::new();
    while coords.len() < 3 {
        let line = lines
            .next()
            .ok_or_else(|| Error::MalformedInput("truncated polytope record".into()))?;
        if line.trim().is_empty() {
            continue;
        }
        let row: Vec<i64> = line
            .split_whitespace()
            .map(|t| {
                t.parse::<i64>()
                    .map_err(|_| Error::MalformedInput(format!("bad integer {t:?}")))
            })
            .collect::<Result<_>>()?;
        if row.len() != k {
            return Err(Error::MalformedInput(format!(
                "coordinate row has {} entries, expected {k}",
                row.len()
            )));
        }
        coords.push(row);
    }
    Ok(Some(
        (0..k).map(|j| [coords[0][j], coords[1][j], coords[2][j]]).collect(),
    ))
}

/// Parse a single polytope record: a `3 k` header line (trailing text on the
/// header is ignored) followed by three rows of k integers, columns being
/// points.
pub fn parse_polytope(text: &str) -> Result<LatticePolytope> {
    let mut lines = text.lines().peekable();
    let pts = take_record(&mut lines)?
        .ok_or_else(|| Error::MalformedInput("no polytope record found".into()))?;
    LatticePolytope::from_points(&pts)
}

/// Parse a concatenation of polytope records. Hull construction failures are
/// returned per record rather than aborting the batch.
pub fn parse_polytope_batch(text: &str) -> Result<Vec<Result<LatticePolytope>>> {
    let mut lines = text.lines().peekable();
    let mut out = Vec::new();
    while let Some(pts) = take_record(&mut lines)? {
        out.push(LatticePolytope::from_points(&pts));
    }
    if out.is_empty() {
        return Err(Error::MalformedInput("no polytope record found".into()));
    }
    Ok(out)
}

/// |det| = 1 test for a triple of rays.
pub fn unimodular_cone(rays: &[V3], cone: &[usize; 3]) -> bool {
    det3(&rays[cone[0]], &rays[cone[1]], &rays[cone[2]]).abs() == 1
}
