//! Enumeration of the 2^e crepant small resolutions of a terminal reflexive
//! polytope's toric 3-fold, projectivity certificates via exact linear
//! programming, and orbit counting under lattice automorphisms.

use num::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::mat::Q;
use crate::toric::fan::{build_resolution, fan_walls, FanResolution};
use crate::toric::hull::V3;
use crate::toric::lp::{maximize, Constraint, LpOutcome};
use crate::toric::polytope::{apply, automorphisms, LatticePolytope, Parallelogram};

const MAX_CHOICE_BITS: usize = 24;

pub fn choice_from_mask(mask: u64, e: usize) -> Vec<u8> {
    (0..e).map(|p| ((mask >> p) & 1) as u8).collect()
}

/// All crepant simplicial refinements, indexed by diagonal-choice bitmask.
pub fn enumerate_resolutions(poly: &LatticePolytope) -> Result<Vec<FanResolution>> {
    let e = poly.parallelograms().len();
    if e > MAX_CHOICE_BITS {
        return Err(Error::ComputationOverflow(format!(
            "2^{e} diagonal choices exceed the enumeration limit"
        )));
    }
    (0..1u64 << e)
        .map(|mask| build_resolution(poly, &choice_from_mask(mask, e)))
        .collect()
}

/// Outcome of the strict-convexity linear program: a fan is projective
/// exactly when some piecewise linear function has positive bending across
/// every wall, and the heights of a maximally bent one are returned.
#[derive(Clone, Debug)]
pub struct ProjectivityCertificate {
    pub projective: bool,
    pub epsilon: Q,
    pub heights: Option<Vec<Q>>,
}

/// Decide projectivity of a smooth complete fan. Maximizes the minimal wall
/// slack of height vectors confined to [-1, 1]; the fan is projective iff
/// the optimum is positive.
pub fn projectivity(fan: &FanResolution) -> Result<ProjectivityCertificate> {
    let n = fan.rays.len();
    let walls = fan_walls(fan)?;
    let nvars = n + 1;
    let mut constraints: Vec<Constraint> = Vec::with_capacity(walls.len() + n);
    for w in &walls {
        let mut coef = vec![Q::zero(); nvars];
        coef[0] = -Q::one();
        coef[1 + w.a] += Q::one();
        coef[1 + w.b] += Q::one();
        coef[1 + w.i] += Q::from_integer(w.alpha.into());
        coef[1 + w.j] += Q::from_integer(w.beta.into());
        let rhs = Q::from_integer((2 + w.alpha + w.beta).into());
        constraints.push(Constraint::Ge(coef, rhs));
    }
    for r in 0..n {
        let mut coef = vec![Q::zero(); nvars];
        coef[1 + r] = Q::one();
        constraints.push(Constraint::Le(coef, Q::from_integer(2.into())));
    }
    let mut objective = vec![Q::zero(); nvars];
    objective[0] = Q::one();
    match maximize(&objective, &constraints) {
        LpOutcome::Optimal { value, point } => {
            let projective = value.is_positive();
            let heights = projective.then(|| {
                point[1..].iter().map(|x| x.clone() - Q::one()).collect()
            });
            Ok(ProjectivityCertificate { projective, epsilon: value, heights })
        }
        other => Err(Error::ComputationOverflow(format!(
            "strict-convexity program did not reach an optimum: {other:?}"
        ))),
    }
}

/// How one lattice automorphism permutes the parallelogram facets and
/// whether it exchanges the two diagonals of each.
struct ChoiceAction {
    perm: Vec<usize>,
    flip: Vec<bool>,
}

fn corner_set(q: &Parallelogram) -> Vec<V3> {
    let mut s = q.corners.to_vec();
    s.sort();
    s
}

fn choice_actions(poly: &LatticePolytope, pgrams: &[Parallelogram]) -> Vec<ChoiceAction> {
    let sets: Vec<Vec<V3>> = pgrams.iter().map(corner_set).collect();
    automorphisms(&poly.vertices)
        .iter()
        .map(|a| {
            let mut perm = vec![0usize; pgrams.len()];
            let mut flip = vec![false; pgrams.len()];
            for (p, q) in pgrams.iter().enumerate() {
                let image: Vec<V3> = q.corners.iter().map(|v| apply(a, v)).collect();
                let mut image_set = image.clone();
                image_set.sort();
                let target = sets
                    .iter()
                    .position(|s| *s == image_set)
                    .expect("automorphism must permute parallelogram facets");
                perm[p] = target;
                let mut diag = [image[0], image[2]];
                diag.sort();
                let mut target_diag = [pgrams[target].corners[0], pgrams[target].corners[2]];
                target_diag.sort();
                flip[p] = diag != target_diag;
            }
            ChoiceAction { perm, flip }
        })
        .collect()
}

fn act(mask: u64, action: &ChoiceAction) -> u64 {
    let mut out = 0u64;
    for (p, &target) in action.perm.iter().enumerate() {
        let mut bit = (mask >> p) & 1;
        if action.flip[p] {
            bit ^= 1;
        }
        out |= bit << target;
    }
    out
}

/// Projectivity census of all 2^e resolutions together with the number of
/// isomorphism classes of projective ones under the polytope's lattice
/// automorphisms.
#[derive(Clone, Debug)]
pub struct ResolutionClasses {
    pub e: usize,
    pub total: u64,
    pub projective: u64,
    pub classes: usize,
    pub projective_by_mask: Vec<bool>,
}

pub fn resolution_classes(poly: &LatticePolytope) -> Result<ResolutionClasses> {
    let pgrams = poly.parallelograms();
    let e = pgrams.len();
    if e > MAX_CHOICE_BITS {
        return Err(Error::ComputationOverflow(format!(
            "2^{e} diagonal choices exceed the enumeration limit"
        )));
    }
    let actions = choice_actions(poly, &pgrams);
    let total = 1u64 << e;
    let canon = |mask: u64| actions.iter().map(|a| act(mask, a)).min().unwrap();
    // projectivity is constant on orbits, so solve one program per orbit
    let mut rep_projective: std::collections::BTreeMap<u64, bool> = std::collections::BTreeMap::new();
    let mut projective_by_mask = vec![false; total as usize];
    let mut projective = 0u64;
    for mask in 0..total {
        let rep = canon(mask);
        let is_proj = match rep_projective.get(&rep) {
            Some(&p) => p,
            None => {
                let fan = build_resolution(poly, &choice_from_mask(rep, e))?;
                let p = projectivity(&fan)?.projective;
                rep_projective.insert(rep, p);
                p
            }
        };
        projective_by_mask[mask as usize] = is_proj;
        if is_proj {
            projective += 1;
        }
    }
    let classes = rep_projective.values().filter(|&&p| p).count();
    Ok(ResolutionClasses { e, total, projective, classes, projective_by_mask })
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
    fn projective_space_certificate() {
        let p = load("simplex.txt");
        let fan = build_resolution(&p, &[]).unwrap();
        let cert = projectivity(&fan).unwrap();
        assert!(cert.projective);
        assert_eq!(cert.epsilon, Q::from_integer(4.into()));
        assert!(cert.heights.is_some());
    }

    #[test]
    fn quadric_cone_both_projective() {
        let p = load("qcone.txt");
        let rc = resolution_classes(&p).unwrap();
        assert_eq!(rc.e, 1);
        assert_eq!(rc.total, 2);
        assert_eq!(rc.projective, 2);
        assert_eq!(rc.classes, 1);
    }

    #[test]
    fn degree22_census() {
        let p = load("p1942.txt");
        let fans = enumerate_resolutions(&p).unwrap();
        assert_eq!(fans.len(), 512);
        for pair in fans.windows(2) {
            assert_ne!(pair[0].cones, pair[1].cones);
        }
        let rc = resolution_classes(&p).unwrap();
        assert_eq!(rc.e, 9);
        assert_eq!(rc.total, 512);
        assert_eq!(rc.projective, 512);
        assert_eq!(rc.classes, 84);
    }

    #[test]
    fn heights_certify_wall_slack() {
        let p = load("p1942.txt");
        let fan = build_resolution(&p, &choice_from_mask(0b101010101, 9)).unwrap();
        let cert = projectivity(&fan).unwrap();
        assert!(cert.projective);
        let h = cert.heights.unwrap();
        for w in fan_walls(&fan).unwrap() {
            let slack = h[w.a].clone()
                + h[w.b].clone()
                + Q::from_integer(w.alpha.into()) * h[w.i].clone()
                + Q::from_integer(w.beta.into()) * h[w.j].clone();
            assert!(slack >= cert.epsilon);
        }
    }
}
