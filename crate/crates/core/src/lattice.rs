//! Integral lattices presented by Gram matrices: profiles (signature,
//! discriminant invariants), standard constructions, primitivity and
//! orthogonal complements, image lattices of degenerate forms, bounded
//! isometry search, and bounded representation enumeration.

use num::bigint::BigInt;
use num::{Integer, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::mat::{parse_ints, qint, smith_normal_form, Mat, Q};

/// A lattice with a chosen generator basis, presented by the symmetric
/// pairing matrix of the generators. Possibly degenerate.
#[derive(Clone, PartialEq, Eq)]
pub struct GramLattice {
    gram: Mat,
}

impl GramLattice {
    pub fn new(gram: Mat) -> Result<GramLattice> {
        if !gram.is_square() {
            return Err(Error::MalformedInput("gram matrix must be square".into()));
        }
        if !gram.is_symmetric() {
            return Err(Error::MalformedInput("gram matrix must be symmetric".into()));
        }
        Ok(GramLattice { gram })
    }

    /// Literal constructor for tests; panics on invalid input.
    pub fn from_i64(rows: &[&[i64]]) -> GramLattice {
        GramLattice::new(Mat::from_i64(rows)).expect("invalid gram literal")
    }

    /// Gram file: first line `n`, then n lines of n integers.
    pub fn from_text(text: &str) -> Result<GramLattice> {
        let nums = parse_ints(text)?;
        if nums.is_empty() {
            return Err(Error::MalformedInput("gram file needs a size header".into()));
        }
        let n = usize::try_from(nums[0].clone())
            .map_err(|_| Error::MalformedInput("bad gram size header".into()))?;
        if nums.len() != 1 + n * n {
            return Err(Error::MalformedInput(format!(
                "expected {} gram entries, found {}",
                n * n,
                nums.len() - 1
            )));
        }
        let rows: Vec<Vec<BigInt>> =
            (0..n).map(|i| nums[1 + i * n..1 + (i + 1) * n].to_vec()).collect();
        GramLattice::new(Mat::from_rows(rows)?)
    }

    pub fn gram(&self) -> &Mat {
        &self.gram
    }

    /// Number of generators (matrix dimension).
    pub fn dim(&self) -> usize {
        self.gram.rows()
    }

    pub fn profile(&self) -> LatticeProfile {
        lattice_profile(self)
    }
}

impl std::fmt::Debug for GramLattice {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:?}", self.gram)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeProfile {
    pub rank: usize,
    /// (n_plus, n_zero, n_minus)
    pub signature: (usize, usize, usize),
    /// 0 when the form is degenerate.
    pub det: BigInt,
    pub even: bool,
    /// Invariant factors > 1 of the discriminant group, ascending.
    pub disc_invariant_factors: Vec<BigInt>,
    /// Some((p, l)) when every invariant factor equals the prime p.
    pub p_elementary: Option<(BigInt, usize)>,
}

fn signature_of(g: &Mat) -> (usize, usize, usize) {
    let n = g.rows();
    let mut a: Vec<Vec<Q>> = (0..n).map(|i| g.row(i).iter().map(qint).collect()).collect();

    fn sym_swap(a: &mut [Vec<Q>], i: usize, j: usize) {
        a.swap(i, j);
        for row in a.iter_mut() {
            row.swap(i, j);
        }
    }

    let mut t = 0usize;
    while t < n {
        if a[t][t].is_zero() {
            if let Some(k) = (t + 1..n).find(|&k| !a[k][k].is_zero()) {
                sym_swap(&mut a, t, k);
            } else {
                // all remaining diagonal entries are zero: expose a pivot from
                // an off-diagonal entry, or stop if the block vanishes
                let mut found = None;
                'search: for i in t..n {
                    for j in i + 1..n {
                        if !a[i][j].is_zero() {
                            found = Some((i, j));
                            break 'search;
                        }
                    }
                }
                let Some((i, j)) = found else { break };
                for col in 0..n {
                    let v = &a[i][col] + &a[j][col];
                    a[i][col] = v;
                }
                for row in 0..n {
                    let v = &a[row][i] + &a[row][j];
                    a[row][i] = v;
                }
                if i != t {
                    sym_swap(&mut a, t, i);
                }
            }
        }
        let pivot = a[t][t].clone();
        for i in t + 1..n {
            if a[i][t].is_zero() {
                continue;
            }
            let f = &a[i][t] / &pivot;
            for col in 0..n {
                let v = &a[i][col] - &f * &a[t][col];
                a[i][col] = v;
            }
            for row in 0..n {
                let v = &a[row][i] - &f * &a[row][t];
                a[row][i] = v;
            }
        }
        t += 1;
    }
    let mut plus = 0;
    let mut minus = 0;
    for i in 0..t {
        if a[i][i].is_positive() {
            plus += 1;
        } else if a[i][i].is_negative() {
            minus += 1;
        }
    }
    (plus, n - plus - minus, minus)
}

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub fn lattice_profile(g: &GramLattice) -> LatticeProfile {
    let m = g.gram();
    let rank = m.rows();
    let signature = signature_of(m);
    let det = if signature.1 > 0 { BigInt::zero() } else { m.det() };
    let even = (0..rank).all(|i| m.get(i, i).is_even());
    let disc_invariant_factors: Vec<BigInt> = if signature.1 == 0 {
        smith_normal_form(m)
            .invariant_factors()
            .into_iter()
            .filter(|d| d.abs() > BigInt::one())
            .map(|d| d.abs())
            .collect()
    } else {
        Vec::new()
    };
    let p_elementary = match disc_invariant_factors.first() {
        Some(p)
            if disc_invariant_factors.iter().all(|d| d == p)
                && p.to_u64().is_some_and(is_prime_u64) =>
        {
            Some((p.clone(), disc_invariant_factors.len()))
        }
        _ => None,
    };
    LatticeProfile { rank, signature, det, even, disc_invariant_factors, p_elementary }
}

/// Expression tree for standard lattice constructions.
#[derive(Clone, Debug)]
pub enum LatticeExpr {
    /// Hyperbolic plane ((0,1),(1,0)).
    U,
    /// The even unimodular lattice of signature (3,19): 2 E8(-1) + 3 U.
    K3,
    /// Root lattice Gram = Cartan matrix, positive definite convention.
    A(usize),
    D(usize),
    /// E(6), E(7) or E(8).
    E(usize),
    Diag(Vec<i64>),
    /// Dual lattice: rational inverse Gram.
    Dual(Box<LatticeExpr>),
    /// Scale the pairing by an integer.
    Rescale(Box<LatticeExpr>, i64),
    /// Orthogonal direct sum.
    Sum(Vec<LatticeExpr>),
}

fn cartan_a(n: usize) -> Vec<Vec<Q>> {
    let mut m = vec![vec![Q::zero(); n]; n];
    for i in 0..n {
        m[i][i] = Q::from_integer(2.into());
        if i + 1 < n {
            m[i][i + 1] = Q::from_integer((-1).into());
            m[i + 1][i] = Q::from_integer((-1).into());
        }
    }
    m
}

fn cartan_e(n: usize) -> Vec<Vec<Q>> {
    // nodes 0..8 with chain 0-2-3-4-5-6-7 and branch 1-3; E6/E7 are the
    // leading principal submatrices
    let edges = [(0, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (1, 3)];
    let mut m = vec![vec![Q::zero(); n]; n];
    for i in 0..n {
        m[i][i] = Q::from_integer(2.into());
    }
    for &(a, b) in &edges {
        if a < n && b < n {
            m[a][b] = Q::from_integer((-1).into());
            m[b][a] = Q::from_integer((-1).into());
        }
    }
    m
}

fn qmat_inverse(m: &[Vec<Q>]) -> Option<Vec<Vec<Q>>> {
    let n = m.len();
    let mut a: Vec<Vec<Q>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            let mut aug = vec![Q::zero(); n];
            aug[i] = Q::one();
            r.extend(aug);
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| !a[i][c].is_zero())?;
        a.swap(c, p);
        let piv = a[c][c].clone();
        for j in 0..2 * n {
            a[c][j] = &a[c][j] / &piv;
        }
        for i in 0..n {
            if i == c || a[i][c].is_zero() {
                continue;
            }
            let f = a[i][c].clone();
            for j in 0..2 * n {
                let v = &a[i][j] - &f * &a[c][j];
                a[i][j] = v;
            }
        }
    }
    Some((0..n).map(|i| a[i][n..].to_vec()).collect())
}

fn eval_expr(expr: &LatticeExpr) -> Result<Vec<Vec<Q>>> {
    match expr {
        LatticeExpr::U => Ok(vec![
            vec![Q::zero(), Q::one()],
            vec![Q::one(), Q::zero()],
        ]),
        LatticeExpr::K3 => eval_expr(&LatticeExpr::Sum(vec![
            LatticeExpr::Rescale(Box::new(LatticeExpr::E(8)), -1),
            LatticeExpr::Rescale(Box::new(LatticeExpr::E(8)), -1),
            LatticeExpr::U,
            LatticeExpr::U,
            LatticeExpr::U,
        ])),
        LatticeExpr::A(n) => {
            if *n == 0 {
                return Err(Error::MalformedInput("A(n) needs n >= 1".into()));
            }
            Ok(cartan_a(*n))
        }
        LatticeExpr::D(n) => {
            if *n < 2 {
                return Err(Error::MalformedInput("D(n) needs n >= 2".into()));
            }
            if *n == 2 {
                return Ok(vec![
                    vec![Q::from_integer(2.into()), Q::zero()],
                    vec![Q::zero(), Q::from_integer(2.into())],
                ]);
            }
            // chain 0-1-...-(n-2) with branch (n-1)-(n-3)
            let mut m = cartan_a(*n);
            m[*n - 2][*n - 1] = Q::zero();
            m[*n - 1][*n - 2] = Q::zero();
            m[*n - 3][*n - 1] = Q::from_integer((-1).into());
            m[*n - 1][*n - 3] = Q::from_integer((-1).into());
            Ok(m)
        }
        LatticeExpr::E(n) => {
            if !(6..=8).contains(n) {
                return Err(Error::MalformedInput("E(n) needs n in 6..8".into()));
            }
            Ok(cartan_e(*n))
        }
        LatticeExpr::Diag(ds) => {
            let n = ds.len();
            let mut m = vec![vec![Q::zero(); n]; n];
            for (i, &d) in ds.iter().enumerate() {
                m[i][i] = Q::from_integer(d.into());
            }
            Ok(m)
        }
        LatticeExpr::Dual(inner) => {
            let g = eval_expr(inner)?;
            qmat_inverse(&g)
                .ok_or_else(|| Error::NonIntegralDual("dual of a degenerate lattice".into()))
        }
        LatticeExpr::Rescale(inner, s) => {
            let g = eval_expr(inner)?;
            let f = Q::from_integer((*s).into());
            Ok(g.into_iter().map(|row| row.into_iter().map(|v| v * &f).collect()).collect())
        }
        LatticeExpr::Sum(parts) => {
            let blocks: Vec<Vec<Vec<Q>>> =
                parts.iter().map(eval_expr).collect::<Result<_>>()?;
            let n: usize = blocks.iter().map(|b| b.len()).sum();
            let mut m = vec![vec![Q::zero(); n]; n];
            let mut off = 0;
            for b in blocks {
                let k = b.len();
                for i in 0..k {
                    for j in 0..k {
                        m[off + i][off + j] = b[i][j].clone();
                    }
                }
                off += k;
            }
            Ok(m)
        }
    }
}

/// Evaluate a standard-lattice expression. Rational intermediates (duals) are
/// allowed; the final Gram matrix must be integral.
pub fn standard_lattice(spec: &LatticeExpr) -> Result<GramLattice> {
    let q = eval_expr(spec)?;
    let n = q.len();
    let mut rows = Vec::with_capacity(n);
    for row in &q {
        let mut out = Vec::with_capacity(n);
        for v in row {
            if !v.is_integer() {
                return Err(Error::NonIntegralDual(format!("non-integral Gram entry {v}")));
            }
            out.push(v.to_integer());
        }
        rows.push(out);
    }
    GramLattice::new(Mat::from_rows(rows)?)
}

/// True iff the rows of `b` span a primitive (saturated) sublattice of Z^n,
/// i.e. all Smith invariant factors equal 1.
pub fn is_primitive_sublattice(b: &Mat) -> Result<bool> {
    if b.rows() == 0 {
        return Ok(true);
    }
    let s = smith_normal_form(b);
    if s.rank() < b.rows() {
        return Err(Error::DependentRows);
    }
    Ok(s.invariant_factors().iter().all(|d| d.is_one()))
}

/// Orthogonal complement of the row span of `b` inside a nondegenerate
/// ambient lattice: returns a saturated basis (rows) and the induced Gram.
pub fn orthogonal_complement(ambient: &GramLattice, b: &Mat) -> Result<(Mat, GramLattice)> {
    let n = ambient.dim();
    if b.cols() != n {
        return Err(Error::RankMismatch(b.cols(), n));
    }
    if ambient.gram().det().is_zero() {
        return Err(Error::DegenerateAmbient);
    }
    let m = b.mul(ambient.gram());
    let s = smith_normal_form(&m);
    let r = s.rank();
    // kernel of x -> m.x is spanned by the last n - r columns of V, and V
    // unimodular makes that basis saturated
    let mut basis = Mat::zeros(n - r, n);
    for (t, colidx) in (r..n).enumerate() {
        for i in 0..n {
            basis.set(t, i, s.v.get(i, colidx).clone());
        }
    }
    let induced = basis.mul(ambient.gram()).mul(&basis.transpose());
    Ok((basis, GramLattice::new(induced)?))
}

/// Quotient of the generator lattice by the radical of the form: returns the
/// projection (r x n, columns = images of the generators) and the induced
/// nondegenerate Gram.
pub fn image_lattice(g: &GramLattice) -> (Mat, GramLattice) {
    let n = g.dim();
    let s = smith_normal_form(g.gram());
    let r = s.rank();
    if r == n {
        return (Mat::identity(n), g.clone());
    }
    let mut w = Mat::zeros(n, r);
    for t in 0..r {
        for i in 0..n {
            w.set(i, t, s.v.get(i, t).clone());
        }
    }
    let q = w.transpose().mul(g.gram()).mul(&w);
    let vinv = s.v.inverse_unimodular();
    let mut proj = Mat::zeros(r, n);
    for t in 0..r {
        for i in 0..n {
            proj.set(t, i, vinv.get(t, i).clone());
        }
    }
    debug_assert_eq!(proj.transpose().mul(&q).mul(&proj), *g.gram());
    (proj, GramLattice { gram: q })
}

fn advance_box(cur: &mut [i64], bound: i64) -> bool {
    for i in (0..cur.len()).rev() {
        if cur[i] < bound {
            cur[i] += 1;
            for c in cur[i + 1..].iter_mut() {
                *c = -bound;
            }
            return true;
        }
    }
    false
}

fn pair_i64(g: &Mat, u: &[i64], v: &[i64]) -> BigInt {
    let n = u.len();
    let mut acc = BigInt::zero();
    for i in 0..n {
        if u[i] == 0 {
            continue;
        }
        let mut rowacc = BigInt::zero();
        for j in 0..n {
            if v[j] != 0 {
                rowacc += g.get(i, j) * BigInt::from(v[j]);
            }
        }
        acc += BigInt::from(u[i]) * rowacc;
    }
    acc
}

fn isometry_dfs(g1: &Mat, g2: &Mat, bound: i64) -> Option<Mat> {
    let n = g1.rows();
    if n == 0 {
        return Some(Mat::zeros(0, 0));
    }
    let mut cols: Vec<Vec<i64>> = Vec::new();
    fn rec(g1: &Mat, g2: &Mat, bound: i64, cols: &mut Vec<Vec<i64>>) -> bool {
        let n = g1.rows();
        let t = cols.len();
        if t == n {
            let mut u = Mat::zeros(n, n);
            for (j, col) in cols.iter().enumerate() {
                for i in 0..n {
                    u.set(i, j, BigInt::from(col[i]));
                }
            }
            return u.det().abs().is_one();
        }
        let mut cand = vec![-bound; n];
        loop {
            if pair_i64(g1, &cand, &cand) == *g2.get(t, t)
                && (0..t).all(|s| pair_i64(g1, &cols[s], &cand) == *g2.get(s, t))
            {
                cols.push(cand.clone());
                if rec(g1, g2, bound, cols) {
                    return true;
                }
                cols.pop();
            }
            if !advance_box(&mut cand, bound) {
                return false;
            }
        }
    }
    if rec(g1, g2, bound, &mut cols) {
        let mut u = Mat::zeros(n, n);
        for (j, col) in cols.iter().enumerate() {
            for i in 0..n {
                u.set(i, j, BigInt::from(col[i]));
            }
        }
        Some(u)
    } else {
        None
    }
}

/// Gauss reduction of a binary quadratic form: returns (R, C) with
/// C = R^T G R, R unimodular, C with small entries. Identity for rank < 2.
fn gauss_reduce2(g: &Mat) -> (Mat, Mat) {
    let n = g.rows();
    if n < 2 {
        return (Mat::identity(n), g.clone());
    }
    let mut c = g.clone();
    let mut r = Mat::identity(2);
    let apply = |c: &Mat, r: &Mat, p: &Mat| (p.transpose().mul(c).mul(p), r.mul(p));
    let swap = Mat::from_i64(&[&[0, 1], &[1, 0]]);
    for _ in 0..10_000 {
        let c00 = c.get(0, 0).clone();
        let c11 = c.get(1, 1).clone();
        let c01 = c.get(0, 1).clone();
        if !c00.is_zero() && !c11.is_zero() && c00.abs() > c11.abs() {
            let (nc, nr) = apply(&c, &r, &swap);
            c = nc;
            r = nr;
        } else if c00.is_zero() && !c11.is_zero() {
            let (nc, nr) = apply(&c, &r, &swap);
            c = nc;
            r = nr;
        } else if !c00.is_zero() {
            let q = Q::new(c01.clone(), c00.clone()).round().to_integer();
            if !q.is_zero() {
                let mut p = Mat::identity(2);
                p.set(0, 1, -q);
                let (nc, nr) = apply(&c, &r, &p);
                c = nc;
                r = nr;
            } else if c11.abs() < c00.abs() {
                let (nc, nr) = apply(&c, &r, &swap);
                c = nc;
                r = nr;
            } else {
                break;
            }
        } else {
            break;
        }
    }
    (r, c)
}

/// Search for a unimodular U with U^T G1 U = G2, coefficients bounded in the
/// column search. Rank <= 2 forms are Gauss-reduced first so the stated bound
/// applies to reduced representatives; the returned transform is verified
/// exactly. `None` proves nothing beyond the searched box.
pub fn is_isometric_bounded(
    g1: &GramLattice,
    g2: &GramLattice,
    bound: i64,
) -> Result<Option<Mat>> {
    if g1.dim() != g2.dim() {
        return Err(Error::RankMismatch(g1.dim(), g2.dim()));
    }
    if g1.profile() != g2.profile() {
        return Ok(None);
    }
    let found = if g1.dim() <= 2 {
        let (r1, c1) = gauss_reduce2(g1.gram());
        let (r2, c2) = gauss_reduce2(g2.gram());
        isometry_dfs(&c1, &c2, bound).map(|up| r1.mul(&up).mul(&r2.inverse_unimodular()))
    } else {
        isometry_dfs(g1.gram(), g2.gram(), bound)
    };
    if let Some(u) = &found {
        assert_eq!(
            u.transpose().mul(g1.gram()).mul(u),
            *g2.gram(),
            "isometry verification failed"
        );
    }
    Ok(found)
}

/// All nonzero vectors v with coordinates in [-bound, bound] and
/// v^T G v = value, in lexicographic order. Exhaustive within the box only.
pub fn represent(g: &GramLattice, value: i64, bound: i64) -> Vec<Vec<i64>> {
    let n = g.dim();
    if n == 0 || bound < 0 {
        return Vec::new();
    }
    let target = BigInt::from(value);
    let mut out = Vec::new();
    let mut cur = vec![-bound; n];
    loop {
        if cur.iter().any(|&x| x != 0) && pair_i64(g.gram(), &cur, &cur) == target {
            out.push(cur.clone());
        }
        if !advance_box(&mut cur, bound) {
            break;
        }
    }
    out
}

/// Uniqueness certificate for even hyperbolic p-elementary lattices of rank
/// at least 3 (p an odd prime): two lattices with equal certificates are
/// isometric.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RsCertificate {
    pub p: BigInt,
    pub l: usize,
    pub rank: usize,
    pub signature: (usize, usize),
}

pub fn rudakov_shafarevich_certificate(g: &GramLattice) -> Option<RsCertificate> {
    let prof = g.profile();
    let (p, l) = prof.p_elementary.clone()?;
    if !prof.even
        || prof.rank < 3
        || prof.signature != (1, 0, prof.rank - 1)
        || p == BigInt::from(2)
    {
        return None;
    }
    Some(RsCertificate { p, l, rank: prof.rank, signature: (1, prof.rank - 1) })
}
