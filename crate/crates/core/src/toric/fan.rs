//! Simplicial fans refining the face fan of a terminal reflexive polytope:
//! wall relations, anticanonical intersection numbers, the boundary divisor
//! Gram matrix, and infinitesimal rigidity of the toric 3-fold.

use crate::error::{Error, Result};
use crate::lattice::GramLattice;
use crate::mat::{smith_normal_form, Mat};
use crate::toric::hull::{det3, dot, FacetKind, V3};
use crate::toric::polytope::LatticePolytope;

/// A crepant simplicial refinement of the face fan, determined by a diagonal
/// choice on each parallelogram facet. Rays follow the polytope's vertex
/// order; cones are sorted index triples.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FanResolution {
    pub rays: Vec<V3>,
    pub cones: Vec<[usize; 3]>,
    pub choice: Vec<u8>,
}

/// Build the fan for one diagonal choice vector (one 0/1 entry per
/// parallelogram facet, in sorted-normal order).
pub fn build_resolution(poly: &LatticePolytope, choice: &[u8]) -> Result<FanResolution> {
    if !poly.is_reflexive() {
        return Err(Error::NotReflexive(
            "crepant resolutions require a reflexive polytope".into(),
        ));
    }
    let kinds = poly.facet_kinds();
    if let Some((f, _, _)) = kinds
        .iter()
        .find(|(_, kind, _)| matches!(kind, FacetKind::Other))
    {
        return Err(Error::NotTerminal(format!(
            "facet with normal {:?} is neither a unimodular triangle nor a unimodular parallelogram",
            f.normal
        )));
    }
    let e = kinds
        .iter()
        .filter(|(_, k, _)| matches!(k, FacetKind::Parallelogram { .. }))
        .count();
    if choice.len() != e {
        return Err(Error::MalformedInput(format!(
            "{} diagonal choices supplied for {e} parallelogram facets",
            choice.len()
        )));
    }
    if let Some(c) = choice.iter().find(|&&c| c > 1) {
        return Err(Error::MalformedInput(format!("diagonal choice {c} is not 0 or 1")));
    }
    let rays = poly.vertices.clone();
    let ray_index = |p: &V3| rays.iter().position(|r| r == p).unwrap();
    let mut cones: Vec<[usize; 3]> = Vec::new();
    let mut pidx = 0usize;
    for (_, kind, pts3) in &kinds {
        match kind {
            FacetKind::Triangle => {
                let mut c = [ray_index(&pts3[0]), ray_index(&pts3[1]), ray_index(&pts3[2])];
                c.sort();
                cones.push(c);
            }
            FacetKind::Parallelogram { labels } => {
                let [a, b, c, d] = [
                    ray_index(&pts3[labels[0]]),
                    ray_index(&pts3[labels[1]]),
                    ray_index(&pts3[labels[2]]),
                    ray_index(&pts3[labels[3]]),
                ];
                let pair = if choice[pidx] == 0 {
                    [[a, b, c], [a, c, d]]
                } else {
                    [[a, b, d], [b, c, d]]
                };
                for mut t in pair {
                    t.sort();
                    cones.push(t);
                }
                pidx += 1;
            }
            FacetKind::Other => unreachable!(),
        }
    }
    cones.sort();
    Ok(FanResolution { rays, cones, choice: choice.to_vec() })
}

/// A codimension-one intersection of two maximal cones: spanned by rays
/// (i, j), flanked by the third rays a and b of the two cones, with the
/// relation v_a + v_b + alpha v_i + beta v_j = 0.
#[derive(Clone, Debug)]
pub struct Wall {
    pub i: usize,
    pub j: usize,
    pub a: usize,
    pub b: usize,
    pub alpha: i64,
    pub beta: i64,
}

/// Inverse of a 3x3 integer matrix with det +-1, via the adjugate.
fn inverse_unimodular3(cols: &[V3; 3]) -> [V3; 3] {
    let m = |i: usize, j: usize| cols[j][i];
    let det = det3(&cols[0], &cols[1], &cols[2]);
    debug_assert!(det.abs() == 1);
    let cof = |i: usize, j: usize| {
        let (r0, r1) = match i {
            0 => (1, 2),
            1 => (0, 2),
            _ => (0, 1),
        };
        let (c0, c1) = match j {
            0 => (1, 2),
            1 => (0, 2),
            _ => (0, 1),
        };
        let minor = m(r0, c0) * m(r1, c1) - m(r0, c1) * m(r1, c0);
        if (i + j) % 2 == 0 {
            minor
        } else {
            -minor
        }
    };
    let mut inv_rows = [[0i64; 3]; 3];
    for (i, row) in inv_rows.iter_mut().enumerate() {
        for (j, slot) in row.iter_mut().enumerate() {
            *slot = cof(j, i) * det;
        }
    }
    inv_rows
}

/// Enumerate the walls of a smooth complete simplicial fan.
pub fn fan_walls(fan: &FanResolution) -> Result<Vec<Wall>> {
    for cone in &fan.cones {
        let d = det3(&fan.rays[cone[0]], &fan.rays[cone[1]], &fan.rays[cone[2]]);
        if d.abs() != 1 {
            return Err(Error::NotSmooth(format!(
                "cone on rays {cone:?} has index {}",
                d.abs()
            )));
        }
    }
    let mut edge_cones: std::collections::BTreeMap<(usize, usize), Vec<usize>> =
        std::collections::BTreeMap::new();
    for (ci, cone) in fan.cones.iter().enumerate() {
        for (s, t) in [(0, 1), (0, 2), (1, 2)] {
            edge_cones.entry((cone[s], cone[t])).or_default().push(ci);
        }
    }
    let mut walls = Vec::new();
    for ((i, j), cs) in edge_cones {
        if cs.len() != 2 {
            return Err(Error::MalformedInput(format!(
                "fan is not complete: edge ({i}, {j}) lies in {} cones",
                cs.len()
            )));
        }
        let third = |ci: usize| -> usize {
            *fan.cones[ci].iter().find(|&&r| r != i && r != j).unwrap()
        };
        let (a, b) = (third(cs[0]), third(cs[1]));
        let inv = inverse_unimodular3(&[fan.rays[i], fan.rays[j], fan.rays[a]]);
        let vb = fan.rays[b];
        let p = dot(&inv[0], &vb);
        let q = dot(&inv[1], &vb);
        let r = dot(&inv[2], &vb);
        assert_eq!(r, -1, "flanking ray is not on the opposite side of the wall");
        let (alpha, beta) = (-p, -q);
        debug_assert_eq!(
            [
                fan.rays[a][0] + vb[0] + alpha * fan.rays[i][0] + beta * fan.rays[j][0],
                fan.rays[a][1] + vb[1] + alpha * fan.rays[i][1] + beta * fan.rays[j][1],
                fan.rays[a][2] + vb[2] + alpha * fan.rays[i][2] + beta * fan.rays[j][2],
            ],
            [0, 0, 0]
        );
        walls.push(Wall { i, j, a, b, alpha, beta });
    }
    Ok(walls)
}

/// A dual vector pairing to 1 with the given primitive ray.
fn unit_pairing_vector(v: &V3) -> V3 {
    let row = Mat::from_rows(vec![v.iter().map(|&x| x.into()).collect()]).unwrap();
    let s = smith_normal_form(&row);
    let mut m0 = [0i64; 3];
    for (i, slot) in m0.iter_mut().enumerate() {
        *slot = num::ToPrimitive::to_i64(s.v.get(i, 0)).unwrap();
    }
    let sign = dot(&m0, v);
    assert!(sign.abs() == 1, "ray {v:?} is not primitive");
    [sign * m0[0], sign * m0[1], sign * m0[2]]
}

/// Intersection data of a smooth crepant resolution: the Gram matrix of the
/// boundary divisors against the anticanonical polarisation, second Chern
/// class pairings, and the rigidity count.
#[derive(Clone, Debug)]
pub struct FanInvariants {
    pub smooth: bool,
    pub anti_k_cubed: i64,
    pub boundary_gram: GramLattice,
    pub row_sums: Vec<i64>,
    pub c2_d: Vec<i64>,
    pub c2_c1sq_d: Vec<i64>,
    pub demazure_roots: usize,
    pub h1_tangent: i64,
    pub rigid: bool,
}

pub fn fan_invariants(poly: &LatticePolytope, fan: &FanResolution) -> Result<FanInvariants> {
    let n = fan.rays.len();
    let walls = fan_walls(fan)?;
    let mut dsq: std::collections::BTreeMap<(usize, usize), i64> = std::collections::BTreeMap::new();
    let mut gram = vec![vec![0i64; n]; n];
    let mut c2 = vec![0i64; n];
    for w in &walls {
        dsq.insert((w.i, w.j), w.alpha);
        dsq.insert((w.j, w.i), w.beta);
        gram[w.i][w.j] = 2 + w.alpha + w.beta;
        gram[w.j][w.i] = gram[w.i][w.j];
        c2[w.i] += w.alpha;
        c2[w.j] += w.beta;
        c2[w.a] += 1;
        c2[w.b] += 1;
    }
    for i in 0..n {
        let m = unit_pairing_vector(&fan.rays[i]);
        let mut d3 = 0i64;
        let mut sum = 0i64;
        for k in 0..n {
            if k == i {
                continue;
            }
            if let Some(&s) = dsq.get(&(i, k)) {
                d3 -= dot(&m, &fan.rays[k]) * s;
                sum += s;
            }
        }
        gram[i][i] = d3 + sum;
    }
    let anti_k_cubed: i64 = gram.iter().map(|r| r.iter().sum::<i64>()).sum();
    let row_sums: Vec<i64> = gram.iter().map(|r| r.iter().sum()).collect();
    let c2_c1sq_d: Vec<i64> = (0..n).map(|i| c2[i] + row_sums[i]).collect();
    let dual = poly.dual()?;
    let roots = demazure_roots(&fan.rays, &dual.lattice_points);
    let rho_y = poly.lattice_points.len() as i64 - 4;
    let genus = anti_k_cubed / 2 + 1;
    let h1_tangent = 3 + roots as i64 + 19 - rho_y - genus;
    let rows: Vec<Vec<num::BigInt>> = gram
        .iter()
        .map(|r| r.iter().map(|&x| x.into()).collect())
        .collect();
    Ok(FanInvariants {
        smooth: true,
        anti_k_cubed,
        boundary_gram: GramLattice::new(Mat::from_rows(rows)?)?,
        row_sums,
        c2_d: c2,
        c2_c1sq_d,
        demazure_roots: roots,
        h1_tangent,
        rigid: h1_tangent == 0,
    })
}

/// Count the dual lattice points pairing to -1 with exactly one ray and
/// nonnegatively with all others.
pub fn demazure_roots(rays: &[V3], dual_points: &[V3]) -> usize {
    dual_points
        .iter()
        .filter(|m| {
            let vals: Vec<i64> = rays.iter().map(|v| dot(m, v)).collect();
            vals.iter().filter(|&&x| x == -1).count() == 1 && vals.iter().all(|&x| x >= -1)
                && vals.iter().filter(|&&x| x < 0).count() == 1
        })
        .count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::toric::polytope::parse_polytope;

    fn load(name: &str) -> LatticePolytope {
        let path = format!("{}/../../data/{}", env!("CARGO_MANIFEST_DIR"), name);
        parse_polytope(&std::fs::read_to_string(path).unwrap()).unwrap()
    }

    #[test]
    fn projective_space_fan() {
        let p = load("simplex.txt");
        let fan = build_resolution(&p, &[]).unwrap();
        assert_eq!(fan.cones.len(), 4);
        let inv = fan_invariants(&p, &fan).unwrap();
        assert_eq!(inv.anti_k_cubed, 64);
        assert_eq!(inv.row_sums, vec![16, 16, 16, 16]);
        for i in 0..4 {
            for j in 0..4 {
                let want = if i == j { 4 } else { 4 };
                assert_eq!(
                    num::ToPrimitive::to_i64(inv.boundary_gram.gram().get(i, j)).unwrap(),
                    want
                );
            }
        }
        assert_eq!(inv.c2_d, vec![6, 6, 6, 6]);
        assert_eq!(inv.demazure_roots, 12);
        assert!(inv.rigid);
    }

    #[test]
    fn quadric_cone_fans() {
        let p = load("qcone.txt");
        let fans: Vec<_> = [[0u8], [1u8]]
            .iter()
            .map(|c| build_resolution(&p, c).unwrap())
            .collect();
        assert_ne!(fans[0].cones, fans[1].cones);
        for fan in &fans {
            let inv = fan_invariants(&p, fan).unwrap();
            assert_eq!(inv.anti_k_cubed, 54);
            assert_eq!(inv.c2_d.iter().sum::<i64>(), 24);
            assert_eq!(inv.demazure_roots, 8);
            assert!(inv.rigid);
        }
        let inv0 = fan_invariants(&p, &fans[0]).unwrap();
        let diag: Vec<i64> = (0..5)
            .map(|i| num::ToPrimitive::to_i64(inv0.boundary_gram.gram().get(i, i)).unwrap())
            .collect();
        assert_eq!(diag, vec![6, 0, 0, 0, 0]);
        assert_eq!(inv0.row_sums, vec![18, 9, 9, 9, 9]);
    }

    #[test]
    fn degree22_choice_zero() {
        let p = load("p1942.txt");
        let fan = build_resolution(&p, &[0; 9]).unwrap();
        assert_eq!(fan.rays.len(), 13);
        assert_eq!(fan.cones.len(), 22);
        let walls = fan_walls(&fan).unwrap();
        assert_eq!(walls.len(), 33);
        let inv = fan_invariants(&p, &fan).unwrap();
        assert_eq!(inv.anti_k_cubed, 22);
        for i in 0..13 {
            assert_eq!(
                num::ToPrimitive::to_i64(inv.boundary_gram.gram().get(i, i)).unwrap(),
                -2
            );
        }
        assert_eq!(inv.row_sums, vec![1, 2, 2, 2, 2, 1, 1, 2, 2, 1, 2, 2, 2]);
        assert_eq!(inv.c2_d, vec![-1, 4, 4, 4, 8, -3, -3, 0, 0, -1, 4, 4, 4]);
        assert_eq!(
            inv.c2_c1sq_d,
            vec![0, 6, 6, 6, 10, -2, -2, 2, 2, 0, 6, 6, 6]
        );
        assert_eq!(inv.c2_d.iter().sum::<i64>(), 24);
        assert_eq!(inv.c2_c1sq_d.iter().sum::<i64>(), 46);
        assert_eq!(inv.demazure_roots, 0);
        assert!(inv.rigid);
    }

    #[test]
    fn cube_not_terminal() {
        let p = load("cube.txt");
        assert!(matches!(build_resolution(&p, &[]), Err(Error::NotTerminal(_))));
    }
}
