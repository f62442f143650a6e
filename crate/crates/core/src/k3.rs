//! Embeddings into the rank-22 even unimodular lattice of signature (3,19):
//! forced complement profiles, decomposition verification through uniqueness
//! certificates, and extraction of a unimodular E8(-1) factor from a span of
//! -2-classes.

use num::bigint::BigInt;
use num::{One, Signed};

use crate::error::{Error, Result};
use crate::lattice::{
    image_lattice, lattice_profile, orthogonal_complement, rudakov_shafarevich_certificate,
    standard_lattice, GramLattice, LatticeExpr, LatticeProfile, RsCertificate,
};
use crate::mat::Mat;

/// The even unimodular lattice 2 E8(-1) + 3 U of signature (3,19).
pub fn k3_lattice() -> GramLattice {
    standard_lattice(&LatticeExpr::K3).expect("fixed construction")
}

/// A hyperbolic lattice together with a distinguished class of positive
/// even square.
#[derive(Clone, Debug)]
pub struct PolarisingLattice {
    pub n: GramLattice,
    pub a: Vec<BigInt>,
}

impl PolarisingLattice {
    pub fn new(n: GramLattice, a: Vec<BigInt>) -> Result<PolarisingLattice> {
        if a.len() != n.dim() {
            return Err(Error::RankMismatch(a.len(), n.dim()));
        }
        let mut sq = BigInt::from(0);
        for i in 0..a.len() {
            for j in 0..a.len() {
                sq += &a[i] * n.gram().get(i, j) * &a[j];
            }
        }
        if !sq.is_positive() || sq.bit(0) {
            return Err(Error::OddDegree(
                num::ToPrimitive::to_i64(&sq).unwrap_or(i64::MAX),
            ));
        }
        Ok(PolarisingLattice { n, a })
    }

    /// A^2 = 2g - 2.
    pub fn square(&self) -> BigInt {
        let g = self.n.gram();
        let mut sq = BigInt::from(0);
        for i in 0..self.a.len() {
            for j in 0..self.a.len() {
                sq += &self.a[i] * g.get(i, j) * &self.a[j];
            }
        }
        sq
    }
}

/// The profile forced on the orthogonal complement of a primitive embedding
/// into the rank-22 lattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplementProfile {
    pub rank: usize,
    /// (n_plus, n_minus); the complement is nondegenerate.
    pub signature: (usize, usize),
    pub disc_invariant_factors: Vec<BigInt>,
}

impl ComplementProfile {
    /// Does a concrete lattice profile realise this forced profile?
    pub fn matches(&self, p: &LatticeProfile) -> bool {
        p.rank == self.rank
            && p.signature == (self.signature.0, 0, self.signature.1)
            && p.disc_invariant_factors == self.disc_invariant_factors
            && p.even
    }
}

/// Rank, signature and discriminant invariants of the orthogonal complement
/// of any primitive embedding of `n` into the rank-22 lattice. Unimodular
/// gluing makes the complement's discriminant group isomorphic to `n`'s.
pub fn complement_profile(n: &GramLattice) -> Result<ComplementProfile> {
    let p = n.profile();
    if !p.even {
        return Err(Error::NotEmbeddable("lattice is not even".into()));
    }
    if p.signature.1 > 0 {
        return Err(Error::NotEmbeddable("lattice is degenerate".into()));
    }
    if p.rank > 22 {
        return Err(Error::NotEmbeddable(format!("rank {} exceeds 22", p.rank)));
    }
    if p.signature.0 > 3 || p.signature.2 > 19 {
        return Err(Error::NotEmbeddable(format!(
            "signature ({},{}) does not fit in (3,19)",
            p.signature.0, p.signature.2
        )));
    }
    Ok(ComplementProfile {
        rank: 22 - p.rank,
        signature: (3 - p.signature.0, 19 - p.signature.2),
        disc_invariant_factors: p.disc_invariant_factors,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DecompositionVerdict {
    /// Profiles match and both lattices carry equal uniqueness certificates.
    Isometric,
    /// Profiles match but no certificate applies; isometry is not claimed.
    ProfilesMatch,
    ProfilesDiffer,
}

#[derive(Clone, Debug)]
pub struct VerificationReport {
    pub verdict: DecompositionVerdict,
    pub lattice_profile: LatticeProfile,
    pub claimed_profile: LatticeProfile,
    pub certificate: Option<RsCertificate>,
}

/// Compare a lattice against a claimed standard decomposition. Isometry is
/// declared only when both sides carry equal uniqueness certificates.
pub fn verify_polarising_decomposition(
    n: &GramLattice,
    claimed: &LatticeExpr,
) -> Result<VerificationReport> {
    let claimed_lattice = standard_lattice(claimed)?;
    let lattice_profile = n.profile();
    let claimed_profile = claimed_lattice.profile();
    if lattice_profile != claimed_profile {
        return Ok(VerificationReport {
            verdict: DecompositionVerdict::ProfilesDiffer,
            lattice_profile,
            claimed_profile,
            certificate: None,
        });
    }
    let c1 = rudakov_shafarevich_certificate(n);
    let c2 = rudakov_shafarevich_certificate(&claimed_lattice);
    let (verdict, certificate) = match (c1, c2) {
        (Some(a), Some(b)) if a == b => (DecompositionVerdict::Isometric, Some(a)),
        _ => (DecompositionVerdict::ProfilesMatch, None),
    };
    Ok(VerificationReport { verdict, lattice_profile, claimed_profile, certificate })
}

#[derive(Clone, Debug)]
pub struct E8Split {
    /// Indices of the generators spanning the unimodular factor.
    pub generator_indices: Vec<usize>,
    /// Their images in the image lattice, as rows.
    pub e8_basis: Mat,
    /// Induced Gram of the orthogonal complement inside the image lattice.
    pub complement_gram: GramLattice,
}

fn advance_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    for i in (0..k).rev() {
        if c[i] < n - k + i {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

fn is_e8_neg_subset(g: &Mat, subset: &[usize]) -> bool {
    let mut sub = Mat::zeros(8, 8);
    for (a, &i) in subset.iter().enumerate() {
        for (b, &j) in subset.iter().enumerate() {
            sub.set(a, b, g.get(i, j).clone());
        }
    }
    if (0..8).any(|i| sub.get(i, i).bit(0)) {
        return false;
    }
    if !sub.det().abs().is_one() {
        return false;
    }
    let p = lattice_profile(&GramLattice::new(sub).expect("symmetric restriction"));
    p.signature == (0, 0, 8)
}

/// Search the generators of a (possibly degenerate) intersection lattice for
/// eight classes spanning an even negative-definite unimodular sublattice,
/// which is then of type E8(-1) by the classification of definite even
/// unimodular lattices of rank 8. Returns that factor and the induced Gram
/// of its orthogonal complement in the image lattice. Subsets are scanned in
/// lexicographic order unless an explicit subset is supplied.
pub fn extract_e8_and_complement(
    curves: &GramLattice,
    generators: Option<&[usize]>,
) -> Result<E8Split> {
    let n = curves.dim();
    let g = curves.gram();
    let chosen: Vec<usize> = match generators {
        Some(idx) => {
            if idx.len() != 8 {
                return Err(Error::MalformedInput(format!(
                    "generator hint must list 8 indices, got {}",
                    idx.len()
                )));
            }
            if idx.iter().any(|&i| i >= n) {
                return Err(Error::MalformedInput("generator index out of range".into()));
            }
            if !is_e8_neg_subset(g, idx) {
                return Err(Error::NoE8Found(
                    "supplied generators do not span an even negative-definite unimodular rank-8 lattice"
                        .into(),
                ));
            }
            idx.to_vec()
        }
        None => {
            if n < 8 {
                return Err(Error::NoE8Found(format!("only {n} generators available")));
            }
            let mut combo: Vec<usize> = (0..8).collect();
            loop {
                if is_e8_neg_subset(g, &combo) {
                    break combo;
                }
                if !advance_combination(&mut combo, n) {
                    return Err(Error::NoE8Found(
                        "no 8-generator subset spans an even negative-definite unimodular lattice"
                            .into(),
                    ));
                }
            }
        }
    };
    let (proj, image) = image_lattice(curves);
    let r = image.dim();
    let mut basis = Mat::zeros(8, r);
    for (row, &i) in chosen.iter().enumerate() {
        for t in 0..r {
            basis.set(row, t, proj.get(t, i).clone());
        }
    }
    let (_, complement_gram) = orthogonal_complement(&image, &basis)?;
    Ok(E8Split { generator_indices: chosen, e8_basis: basis, complement_gram })
}
