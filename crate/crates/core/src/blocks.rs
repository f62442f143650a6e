//! Numeric invariants of weak Fano 3-folds and the building blocks obtained
//! by blowing up the base locus of an anticanonical pencil: genus/degree
//! bookkeeping, blow-up numerics, smoothing defect, Betti formulas, second
//! Chern class divisibility, flop updates, and asymptotically cylindrical
//! cohomology profiles.
//!
//! Curve "degree" always means anticanonical degree -K.C, never the degree
//! of a projective embedding.

use num::bigint::BigInt;
use num::integer::gcd;
use num::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{image_lattice, GramLattice};
use crate::mat::{Mat, Q};

/// A weak Fano 3-fold given by its classical numerical data.
#[derive(Clone, Debug)]
pub struct FanoDescriptor {
    pub name: String,
    /// Picard rank.
    pub rank: usize,
    /// Fano index r >= 1.
    pub index: i64,
    /// (-K)^3.
    pub degree: i64,
    pub b3: i64,
    pub h21: i64,
    pub torsion_free_h3: bool,
}

impl FanoDescriptor {
    pub fn validate(&self) -> Result<()> {
        if self.degree <= 0 || self.degree % 2 != 0 {
            return Err(Error::OddDegree(self.degree));
        }
        if self.index < 1 {
            return Err(Error::MalformedInput("index must be >= 1".into()));
        }
        if self.b3 != 2 * self.h21 {
            return Err(Error::MalformedInput(format!(
                "b3 = {} must equal 2 h21 = {}",
                self.b3,
                2 * self.h21
            )));
        }
        if self.index > 1 && self.degree % self.index.pow(3) != 0 {
            return Err(Error::MalformedInput(format!(
                "degree {} not divisible by index^3 = {}",
                self.degree,
                self.index.pow(3)
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GenusDegree {
    pub g: i64,
    /// h^0 of the anticanonical bundle.
    pub h0_anti_k: i64,
}

/// Genus and anticanonical section count from (-K)^3 = 2g - 2.
pub fn genus_degree(degree: i64) -> Result<GenusDegree> {
    if degree <= 0 || degree % 2 != 0 {
        return Err(Error::OddDegree(degree));
    }
    let g = degree / 2 + 1;
    Ok(GenusDegree { g, h0_anti_k: g + 2 })
}

/// Exact Euler characteristic chi(L) = L^3/6 - L^2 K/4 + L(K^2+c2)/12 - Kc2/24.
pub fn riemann_roch_3fold(l3: i64, l2k: i64, l_k2_plus_c2: i64, kc2: i64) -> Q {
    let term = |num: i64, den: i64| Q::new(BigInt::from(num), BigInt::from(den));
    term(l3, 6) - term(l2k, 4) + term(l_k2_plus_c2, 12) - term(kc2, 24)
}

/// Integrality assertion for chi values coming from an actual 3-fold.
pub fn chi_integer(chi: &Q) -> Result<BigInt> {
    if chi.is_integer() {
        Ok(chi.to_integer())
    } else {
        Err(Error::NonIntegralChi(chi.to_string()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BlowupSpec {
    /// Blow up a smooth curve; `degree` is -K_W.C.
    Curve { genus: i64, degree: i64 },
    Point,
}

#[derive(Clone, Debug)]
pub struct BlowupNumbers {
    /// (-K_Y)^3 on the blow-up Y.
    pub degree_y: i64,
    /// (-K)^2.E
    pub k2e: i64,
    /// -K.E^2
    pub ke2: i64,
    pub e3: i64,
    /// Quadratic form -K.D1.D2 in the basis (E, A), when the centre has
    /// Picard rank 1.
    pub picard_gram: Option<GramLattice>,
    pub b3_y: i64,
    /// Genus of Y (from degree_y = 2g' - 2; also g + g(C) - deg C - 1).
    pub genus: i64,
    /// Set when degree_y <= 0, i.e. -K_Y is not big and Y is not weak Fano.
    pub not_weak_fano: bool,
}

/// Anticanonical numerics of the blow-up of a weak Fano 3-fold along a
/// smooth curve or a point.
pub fn blowup_numbers(w: &FanoDescriptor, spec: &BlowupSpec) -> Result<BlowupNumbers> {
    w.validate()?;
    let (degree_y, k2e, ke2, e3, b3_y) = match *spec {
        BlowupSpec::Curve { genus, degree } => {
            if genus < 0 {
                return Err(Error::MalformedInput("curve genus must be >= 0".into()));
            }
            (
                w.degree - 2 * degree - 2 + 2 * genus,
                degree + 2 - 2 * genus,
                2 * genus - 2,
                -degree + 2 - 2 * genus,
                w.b3 + 2 * genus,
            )
        }
        BlowupSpec::Point => (w.degree - 8, 4, -2, 1, w.b3),
    };
    debug_assert_eq!(degree_y % 2, 0);
    let picard_gram = (w.rank == 1).then(|| {
        GramLattice::from_i64(&[&[ke2, k2e], &[k2e, degree_y]])
    });
    Ok(BlowupNumbers {
        degree_y,
        k2e,
        ke2,
        e3,
        picard_gram,
        b3_y,
        genus: degree_y / 2 + 1,
        not_weak_fano: degree_y <= 0,
    })
}

#[derive(Clone, Debug)]
pub struct SmoothingData {
    pub b3_x: i64,
    pub b3_xt: i64,
    /// Milnor numbers of the singular points; empty means "e ordinary double
    /// points", each contributing 1.
    pub milnor_numbers: Vec<i64>,
}

/// Defect sigma = b3(X) - b3(X_t) + sum of Milnor numbers.
pub fn defect(sm: &SmoothingData, e: i64) -> Result<i64> {
    if e < 0 {
        return Err(Error::MalformedInput("node count must be >= 0".into()));
    }
    if sm.milnor_numbers.iter().any(|&m| m < 1) {
        return Err(Error::MalformedInput("Milnor numbers must be >= 1".into()));
    }
    let total: i64 = if sm.milnor_numbers.is_empty() {
        e
    } else {
        sm.milnor_numbers.iter().sum()
    };
    let sigma = sm.b3_x - sm.b3_xt + total;
    if sigma < 0 {
        return Err(Error::NegativeDefect(sigma));
    }
    Ok(sigma)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NamikawaCheck {
    pub bound: i64,
    pub ok: bool,
}

/// Node-count bound e + sum(mu) <= h21(X_t) + 20 - rho(X_t).
pub fn namikawa_check(h21_xt: i64, rho_xt: i64, e: i64, mu: &[i64]) -> NamikawaCheck {
    let bound = h21_xt + 20 - rho_xt;
    let total: i64 = e + mu.iter().sum::<i64>();
    NamikawaCheck { bound, ok: total <= bound }
}

/// b3 of a small resolution: b3(X_t) - 2e + 2 sigma.
pub fn betti3_semifano(b: i64, e: i64, sigma: i64) -> Result<i64> {
    let b3 = b - 2 * e + 2 * sigma;
    if b3 < 0 {
        return Err(Error::NegativeBetti(b3));
    }
    Ok(b3)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BlockCohomology {
    pub b2_z: i64,
    pub b3_z: i64,
    /// rank N + rank K forced by the curve-count constraint.
    pub rank_n_plus_k: i64,
    /// One anticanonical base component on a semi-Fano forces K = 0 and
    /// N = image of Pic.
    pub semifano_forces_trivial_k: bool,
}

/// Cohomology of the block Z obtained by blowing up the k-component base
/// curve of an anticanonical pencil on Y.
pub fn block_cohomology(
    b2_y: i64,
    b3_y: i64,
    rank_n0: i64,
    rank_k0: i64,
    genera: &[i64],
) -> Result<BlockCohomology> {
    let k = genera.len() as i64;
    if k < 1 {
        return Err(Error::MalformedInput(
            "anticanonical base locus needs at least one component".into(),
        ));
    }
    if genera.iter().any(|&g| g < 0) {
        return Err(Error::MalformedInput("curve genera must be >= 0".into()));
    }
    if rank_n0 + rank_k0 != b2_y {
        return Err(Error::RankNullityViolation(format!(
            "rank N0 {rank_n0} + rank K0 {rank_k0} != b2(Y) = {b2_y}"
        )));
    }
    let b2_z = b2_y + k;
    let b3_z = b3_y + 2 * genera.iter().sum::<i64>();
    if b3_z < 0 {
        return Err(Error::NegativeBetti(b3_z));
    }
    Ok(BlockCohomology {
        b2_z,
        b3_z,
        rank_n_plus_k: rank_n0 + rank_k0 + k - 1,
        semifano_forces_trivial_k: k == 1,
    })
}

/// Restriction (c2(Y) + c1(Y)^2).D computed from surface data of D and the
/// Picard Gram entries q_DD = -K.D^2, q_DA = (-K)^2.D.
pub fn c2_restriction(c2_d: i64, c1sq_d: i64, q_dd: i64, q_da: i64) -> i64 {
    (c2_d - c1sq_d) + (-q_dd + 2 * q_da)
}

/// Update a restriction value across a flop with D^3 - (D+)^3 = shift.
/// The Picard Gram itself is flop-invariant.
pub fn flop_update(c2_restr_d: i64, d3_minus_d3plus: i64) -> i64 {
    c2_restr_d + 2 * d3_minus_d3plus
}

#[derive(Clone, Debug)]
pub struct AcylProfile {
    pub b1: i64,
    pub b2: i64,
    pub b3: i64,
    pub b4: i64,
    pub b5: i64,
    pub rank_n: usize,
    pub rank_k: i64,
    pub rank_t: usize,
}

/// Betti numbers of the open 3-fold V = Z \ S, asymptotic to a cylinder on
/// the anticanonical surface S.
pub fn acyl_profile(b2_z: i64, b3_z: i64, n: &GramLattice, rank_k: i64) -> Result<AcylProfile> {
    let rank_n = n.dim();
    if rank_n > 22 {
        return Err(Error::NotEmbeddable(format!("rank N = {rank_n} exceeds 22")));
    }
    if rank_k < 0 || rank_k + rank_n as i64 != b2_z - 1 {
        return Err(Error::RankNullityViolation(format!(
            "rank K {rank_k} + rank N {rank_n} != b2(Z) - 1 = {}",
            b2_z - 1
        )));
    }
    if b3_z < 0 {
        return Err(Error::NegativeBetti(b3_z));
    }
    Ok(AcylProfile {
        b1: 0,
        b2: b2_z - 1,
        b3: b3_z + (22 - rank_n) as i64,
        b4: rank_k + 1,
        b5: 0,
        rank_n,
        rank_k,
        rank_t: 22 - rank_n,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Rank1TableRow {
    pub b3_z: i64,
    pub div_c2: i64,
}

/// Block invariants of a Picard-rank-1 Fano: b3(Z) = b3 + 2g and the exact
/// Chern divisibility gcd(|24 - degree| / r, 24).
pub fn rank1_table_row(w: &FanoDescriptor) -> Result<Rank1TableRow> {
    w.validate()?;
    if w.rank != 1 {
        return Err(Error::MalformedInput(format!(
            "rank-1 table row needs Picard rank 1, got {}",
            w.rank
        )));
    }
    if !w.torsion_free_h3 {
        return Err(Error::MalformedInput(
            "rank-1 table rows require torsion-free H3".into(),
        ));
    }
    let g = genus_degree(w.degree)?.g;
    let num = 24 - w.degree;
    if num % w.index != 0 {
        return Err(Error::MalformedInput(format!(
            "index {} does not divide 24 - degree = {num}",
            w.index
        )));
    }
    let div_c2 = gcd((num / w.index).abs(), 24);
    if div_c2 % 2 != 0 {
        return Err(Error::InconsistentC2(format!("odd divisibility {div_c2}")));
    }
    Ok(Rank1TableRow { b3_z: w.b3 + 2 * g, div_c2 })
}

/// The 17 Picard-rank-1 Fano 3-folds with torsion-free cohomology admitting
/// anticanonical K3 pencils: (index, degree, b3).
pub fn fano_rank1_rows() -> Vec<FanoDescriptor> {
    let rows: [(&str, i64, i64, i64); 17] = [
        ("P3", 4, 64, 0),
        ("Q", 3, 54, 0),
        ("B1", 2, 8, 42),
        ("B2", 2, 16, 20),
        ("B3", 2, 24, 10),
        ("B4", 2, 32, 4),
        ("B5", 2, 40, 0),
        ("V2", 1, 2, 104),
        ("V4", 1, 4, 60),
        ("V6", 1, 6, 40),
        ("V8", 1, 8, 28),
        ("V10", 1, 10, 20),
        ("V12", 1, 12, 14),
        ("V14", 1, 14, 10),
        ("V16", 1, 16, 6),
        ("V18", 1, 18, 4),
        ("V22", 1, 22, 0),
    ];
    rows.iter()
        .map(|&(name, index, degree, b3)| FanoDescriptor {
            name: name.into(),
            rank: 1,
            index,
            degree,
            b3,
            h21: b3 / 2,
            torsion_free_h3: true,
        })
        .collect()
}

/// One stratum of nodal cubic 3-folds: node count, defect, number of
/// projective small resolutions, plane count, and (when a projective small
/// resolution exists) its Picard rank and b3.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NodalCubicRow {
    pub e: i64,
    pub sigma: i64,
    pub projective_small_resolutions: i64,
    pub planes: i64,
    pub rho_y: Option<i64>,
    pub b3_y: Option<i64>,
}

/// Strata of nodal cubic 3-folds by node count and configuration.
pub fn nodal_cubic_rows() -> Vec<NodalCubicRow> {
    let rows: [(i64, i64, i64, i64, Option<i64>, Option<i64>); 15] = [
        (0, 0, 0, 0, Some(1), Some(10)),
        (1, 0, 0, 0, None, None),
        (2, 0, 0, 0, None, None),
        (3, 0, 0, 0, None, None),
        (4, 0, 0, 0, None, None),
        (4, 1, 2, 1, Some(2), Some(4)),
        (5, 1, 0, 1, None, None),
        (5, 1, 0, 1, None, None),
        (6, 1, 2, 0, Some(2), Some(0)),
        (6, 2, 6, 2, Some(3), Some(2)),
        (7, 2, 6, 2, Some(3), Some(0)),
        (7, 2, 0, 3, None, None),
        (8, 3, 24, 5, Some(4), Some(0)),
        (9, 4, 102, 9, Some(5), Some(0)),
        (10, 5, 332, 15, Some(6), Some(0)),
    ];
    rows.iter()
        .map(|&(e, sigma, s, planes, rho_y, b3_y)| NodalCubicRow {
            e,
            sigma,
            projective_small_resolutions: s,
            planes,
            rho_y,
            b3_y,
        })
        .collect()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BaseCurve {
    pub genus: i64,
    /// K^3 of the intermediate blow-up performed after this component, when
    /// known. The last component carries none.
    #[serde(rename = "step_K3", default)]
    pub step_k3: Option<i64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FlopSpec {
    /// Basis divisor whose restriction value changes.
    pub basis_index: usize,
    /// D^3 - (D+)^3 across the flop.
    pub shift: i64,
}

/// Input data of a building block: the Picard Gram of the blown-up 3-fold Y
/// in a chosen divisor basis, the anticanonical class in that basis, the
/// known pairings of c2 + c1^2 against the basis, and the anticanonical base
/// curve components.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BlockDescriptor {
    #[serde(default)]
    pub name: Option<String>,
    pub picard_gram: Vec<Vec<i64>>,
    pub anticanonical: Vec<i64>,
    pub c2c1sq: Vec<Option<i64>>,
    #[serde(rename = "b3_Y")]
    pub b3_y: i64,
    /// Count of rigid rational (-1,-1)-curves.
    pub e: i64,
    /// Fano index of the rank-1 model, 1 otherwise.
    pub index: i64,
    pub base_curves: Vec<BaseCurve>,
    pub torsion_free_h3: bool,
    /// Pairings of each base curve class against the basis divisors,
    /// required when there is more than one component.
    #[serde(default)]
    pub curve_class_pairings: Option<Vec<Vec<i64>>>,
    /// Upper triangle (row-major, i < j) of the pairwise base-curve
    /// intersection numbers on the anticanonical surface.
    #[serde(default)]
    pub curve_curve_offdiag: Option<Vec<i64>>,
    #[serde(default)]
    pub flops: Option<Vec<FlopSpec>>,
}

impl BlockDescriptor {
    pub fn from_json(text: &str) -> Result<BlockDescriptor> {
        serde_json::from_str(text).map_err(|e| Error::MalformedInput(e.to_string()))
    }

    fn gram(&self) -> Result<GramLattice> {
        let rows: Vec<Vec<BigInt>> = self
            .picard_gram
            .iter()
            .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
            .collect();
        GramLattice::new(Mat::from_rows(rows)?)
    }

    fn degree(&self) -> Result<i64> {
        let g = self.gram()?;
        let rho = g.dim();
        if self.anticanonical.len() != rho {
            return Err(Error::RankMismatch(self.anticanonical.len(), rho));
        }
        let mut sq = BigInt::zero();
        for i in 0..rho {
            for j in 0..rho {
                sq += BigInt::from(self.anticanonical[i])
                    * g.gram().get(i, j)
                    * BigInt::from(self.anticanonical[j]);
            }
        }
        let degree = sq
            .to_i64()
            .ok_or_else(|| Error::ComputationOverflow("anticanonical degree".into()))?;
        if degree <= 0 || degree % 2 != 0 {
            return Err(Error::OddDegree(degree));
        }
        Ok(degree)
    }
}

/// Pairings of c2(Z) against a basis of H^2(Z) and the divisibility they
/// force.
#[derive(Clone, Debug)]
pub struct C2Report {
    /// c2(Z).pi^*D_i = (c2(Y) + c1(Y)^2).D_i.
    pub divisor_pairings: Vec<Option<i64>>,
    /// c2(Z).S = 24 on the anticanonical K3.
    pub section_pairing: i64,
    /// c2(Z) against the exceptional fibre class over each base component.
    pub fibre_pairings: Vec<Option<i64>>,
    /// gcd of all known pairings; always even.
    pub div_c2: i64,
    /// True when div_c2 is the exact divisibility rather than an upper bound:
    /// one component with all divisor pairings known, all intermediate K^3
    /// steps known with all divisor pairings, or div_c2 == 2.
    pub exact: bool,
    /// (2, gcd(|24 - degree|/r, 24)) for rank-1 models.
    pub div_bounds: Option<(i64, i64)>,
}

fn c2_div_core(
    divisor_pairings: &[Option<i64>],
    anticanonical: &[i64],
    degree: i64,
    steps: &[Option<i64>],
    index: i64,
    rank1: bool,
    excluded: Option<&[usize]>,
) -> Result<C2Report> {
    let k = steps.len() + 1;
    // A-pairing identity (c2 + c1^2).A = 24 + degree, checkable when every
    // basis divisor met by A has a known pairing
    let checkable = anticanonical
        .iter()
        .zip(divisor_pairings)
        .all(|(&a, p)| a == 0 || p.is_some());
    if checkable {
        let total: i64 = anticanonical
            .iter()
            .zip(divisor_pairings)
            .map(|(&a, p)| a * p.unwrap_or(0))
            .sum();
        if total != 24 + degree {
            return Err(Error::InconsistentC2(format!(
                "(c2 + c1^2).A = {total}, expected 24 + {degree}"
            )));
        }
    }
    // K^3 along the chain of intermediate blow-ups: -degree, steps..., 0;
    // the fibre pairing over component j is the j-th increment
    let ext: Vec<Option<i64>> = std::iter::once(Some(-degree))
        .chain(steps.iter().copied())
        .chain(std::iter::once(Some(0)))
        .collect();
    let fibre_pairings: Vec<Option<i64>> = (0..k)
        .map(|j| match (ext[j], ext[j + 1]) {
            (Some(a), Some(b)) => Some(b - a),
            _ => None,
        })
        .collect();
    let mut div = 24i64;
    for (i, p) in divisor_pairings.iter().enumerate() {
        if excluded.is_some_and(|ex| ex.contains(&i)) {
            continue;
        }
        if let Some(v) = p {
            div = gcd(div, v.abs());
        }
    }
    for p in fibre_pairings.iter().flatten() {
        div = gcd(div, p.abs());
    }
    if div % 2 != 0 {
        return Err(Error::InconsistentC2(format!(
            "pairings force odd divisibility {div}"
        )));
    }
    let all_divisors_known = divisor_pairings.iter().all(|p| p.is_some());
    let all_steps_known = steps.iter().all(|s| s.is_some());
    let exact = excluded.is_none()
        && ((k == 1 && all_divisors_known)
            || (all_steps_known && all_divisors_known)
            || div == 2);
    let div_bounds = if rank1 {
        let num = 24 - degree;
        if num % index != 0 {
            return Err(Error::MalformedInput(format!(
                "index {index} does not divide 24 - degree = {num}"
            )));
        }
        Some((2, gcd((num / index).abs(), 24)))
    } else {
        None
    };
    if let Some((_, upper)) = div_bounds {
        if k == 1 && exact && div != upper {
            return Err(Error::InconsistentC2(format!(
                "rank-1 divisibility {div} != forced value {upper}"
            )));
        }
    }
    Ok(C2Report {
        divisor_pairings: divisor_pairings.to_vec(),
        section_pairing: 24,
        fibre_pairings,
        div_c2: div,
        exact,
        div_bounds,
    })
}

/// Second Chern class pairings and divisibility of a block. `excluded` drops
/// the listed basis divisors from the gcd, giving the divisibility of c2
/// modulo the sublattice they span.
pub fn c2_block(block: &BlockDescriptor, excluded: Option<&[usize]>) -> Result<C2Report> {
    let degree = block.degree()?;
    let rho = block.picard_gram.len();
    if block.c2c1sq.len() != rho {
        return Err(Error::RankMismatch(block.c2c1sq.len(), rho));
    }
    let k = block.base_curves.len();
    if k < 1 {
        return Err(Error::MalformedInput(
            "descriptor needs at least one base curve component".into(),
        ));
    }
    let steps: Vec<Option<i64>> =
        block.base_curves[..k - 1].iter().map(|c| c.step_k3).collect();
    c2_div_core(
        &block.c2c1sq,
        &block.anticanonical,
        degree,
        &steps,
        block.index,
        rho == 1,
        excluded,
    )
}

/// Full invariant report of a building block, as printed by the CLI.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct InvariantReport {
    pub name: String,
    pub degree: i64,
    #[serde(rename = "h2_Z")]
    pub h2_z: i64,
    #[serde(rename = "N_gram")]
    pub n_gram: Vec<Vec<i64>>,
    #[serde(rename = "rank_K")]
    pub rank_k: i64,
    #[serde(rename = "b3_Z")]
    pub b3_z: i64,
    pub div_c2: String,
    pub e: i64,
    pub checks: Vec<String>,
}

fn render_div(div: i64, exact: bool) -> String {
    if exact {
        div.to_string()
    } else {
        format!("2..{div}")
    }
}

/// Lattice of divisor and curve classes on the anticanonical K3, as a
/// nondegenerate image lattice, together with the rank of its polarising
/// part before adding curve classes.
pub fn polarising_lattice(d: &BlockDescriptor, g: &GramLattice) -> Result<(GramLattice, usize)> {
    let rho = g.dim();
    let k = d.base_curves.len();
    let rank_n0 = image_lattice(g).1.dim();
    if k == 1 {
        return Ok((image_lattice(g).1, rank_n0));
    }
    let pairings = d.curve_class_pairings.as_ref().ok_or_else(|| {
        Error::MalformedInput("curve_class_pairings required for multi-component pencils".into())
    })?;
    if pairings.len() != k || pairings.iter().any(|row| row.len() != rho) {
        return Err(Error::MalformedInput(format!(
            "curve_class_pairings must be {k} rows of {rho} entries"
        )));
    }
    let offdiag = d.curve_curve_offdiag.as_ref().ok_or_else(|| {
        Error::MalformedInput("curve_curve_offdiag required for multi-component pencils".into())
    })?;
    if offdiag.len() != k * (k - 1) / 2 {
        return Err(Error::MalformedInput(format!(
            "curve_curve_offdiag must have {} entries",
            k * (k - 1) / 2
        )));
    }
    let n = rho + k;
    let mut ext = Mat::zeros(n, n);
    for i in 0..rho {
        for j in 0..rho {
            ext.set(i, j, g.gram().get(i, j).clone());
        }
    }
    for (cj, row) in pairings.iter().enumerate() {
        for (i, &v) in row.iter().enumerate() {
            ext.set(rho + cj, i, BigInt::from(v));
            ext.set(i, rho + cj, BigInt::from(v));
        }
    }
    let mut idx = 0;
    for ci in 0..k {
        ext.set(rho + ci, rho + ci, BigInt::from(2 * d.base_curves[ci].genus - 2));
        for cj in ci + 1..k {
            ext.set(rho + ci, rho + cj, BigInt::from(offdiag[idx]));
            ext.set(rho + cj, rho + ci, BigInt::from(offdiag[idx]));
            idx += 1;
        }
    }
    Ok((image_lattice(&GramLattice::new(ext)?).1, rank_n0))
}

/// Compute every reported invariant of a block descriptor.
pub fn block_report(d: &BlockDescriptor) -> Result<InvariantReport> {
    let g = d.gram()?;
    let rho = g.dim();
    let degree = d.degree()?;
    if d.b3_y < 0 {
        return Err(Error::NegativeBetti(d.b3_y));
    }
    if d.e < 0 {
        return Err(Error::MalformedInput("curve count e must be >= 0".into()));
    }
    if d.index < 1 {
        return Err(Error::MalformedInput("index must be >= 1".into()));
    }
    let k = d.base_curves.len();
    if k < 1 {
        return Err(Error::MalformedInput(
            "descriptor needs at least one base curve component".into(),
        ));
    }
    if d.base_curves.iter().any(|c| c.genus < 0) {
        return Err(Error::MalformedInput("curve genera must be >= 0".into()));
    }

    let b2_z = (rho + k) as i64;
    let genus_sum: i64 = d.base_curves.iter().map(|c| c.genus).sum();
    let b3_z = d.b3_y + 2 * genus_sum;

    let (n_lattice, rank_n0) = polarising_lattice(d, &g)?;
    let rank_n = n_lattice.dim();
    let rank_k = b2_z - 1 - rank_n as i64;
    if rank_k < 0 {
        return Err(Error::RankNullityViolation(format!(
            "rank N = {rank_n} exceeds b2(Z) - 1 = {}",
            b2_z - 1
        )));
    }
    if (rank_n - rank_n0) as i64 + rank_k != (k - 1) as i64 {
        return Err(Error::RankNullityViolation(format!(
            "(rank N - rank N0) + rank K = {} != k - 1 = {}",
            (rank_n - rank_n0) as i64 + rank_k,
            k - 1
        )));
    }

    let base = c2_block(d, None)?;
    let mut variants = vec![(base.div_c2, base.exact)];
    for flop in d.flops.iter().flatten() {
        if flop.basis_index >= rho {
            return Err(Error::MalformedInput("flop basis_index out of range".into()));
        }
        let mut c2c1sq = d.c2c1sq.clone();
        let old = c2c1sq[flop.basis_index].ok_or_else(|| {
            Error::MalformedInput("flop needs a known restriction value to update".into())
        })?;
        c2c1sq[flop.basis_index] = Some(flop_update(old, flop.shift));
        let steps: Vec<Option<i64>> =
            d.base_curves[..k - 1].iter().map(|c| c.step_k3).collect();
        let variant = c2_div_core(
            &c2c1sq,
            &d.anticanonical,
            degree,
            &steps,
            d.index,
            rho == 1,
            None,
        )?;
        variants.push((variant.div_c2, variant.exact));
    }
    variants.sort();
    variants.dedup();
    let div_c2 = variants
        .iter()
        .map(|&(div, exact)| render_div(div, exact))
        .collect::<Vec<_>>()
        .join(", ");

    let mut checks = Vec::new();
    checks.push(format!("degree {degree} = A^T G A, even and positive"));
    let checkable = d
        .anticanonical
        .iter()
        .zip(&d.c2c1sq)
        .all(|(&a, p)| a == 0 || p.is_some());
    if checkable {
        checks.push(format!("c2 A-pairing equals 24 + {degree}"));
    } else {
        checks.push("c2 A-pairing not fully determined by known restrictions".into());
    }
    checks.push(format!(
        "rank N {rank_n} + rank K {rank_k} = b2(Z) - 1 = {}",
        b2_z - 1
    ));
    checks.push(format!(
        "component constraint (rank N - {rank_n0}) + rank K = {}",
        k - 1
    ));
    if let Some((lo, hi)) = base.div_bounds {
        checks.push(format!("divisibility bounds {lo} | div c2 | {hi}"));
    }
    if !base.exact {
        checks.push(format!("div c2 bounded above by {}", base.div_c2));
    }
    if !d.torsion_free_h3 {
        checks.push("TORSION-UNKNOWN: integral H3 not certified torsion-free".into());
    }

    Ok(InvariantReport {
        name: d.name.clone().unwrap_or_else(|| "block".into()),
        degree,
        h2_z: b2_z,
        n_gram: n_lattice.gram().to_i64_rows()?,
        rank_k,
        b3_z,
        div_c2,
        e: d.e,
        checks,
    })
}
