//! Exact dense integer matrices, Smith normal form with transforms, and the
//! handful of rational routines (inverse, rank) the lattice layer needs.

use std::fmt;
use std::str::FromStr;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Integer, One, Signed, Zero};

use crate::error::{Error, Result};

pub type Q = BigRational;

pub fn qint(v: &BigInt) -> Q {
    Q::from_integer(v.clone())
}

/// Row-major arbitrary-precision integer matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Mat {
        Mat { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Mat {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Result<Mat> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        if rows.iter().any(|x| x.len() != c) {
            return Err(Error::MalformedInput("ragged matrix rows".into()));
        }
        Ok(Mat { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    /// Convenience constructor for literals and tests; panics on ragged input.
    pub fn from_i64(rows: &[&[i64]]) -> Mat {
        let r: Vec<Vec<BigInt>> =
            rows.iter().map(|x| x.iter().map(|&v| BigInt::from(v)).collect()).collect();
        Mat::from_rows(r).expect("ragged literal matrix")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> Mat {
        let mut m = Mat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(j, i, self.get(i, j).clone());
            }
        }
        m
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "matrix product dimension mismatch");
        let mut m = Mat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = m.get(i, j) + a * other.get(k, j);
                    m.set(i, j, v);
                }
            }
        }
        m
    }

    pub fn is_symmetric(&self) -> bool {
        if self.rows != self.cols {
            return false;
        }
        for i in 0..self.rows {
            for j in 0..i {
                if self.get(i, j) != self.get(j, i) {
                    return false;
                }
            }
        }
        true
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn to_i64_rows(&self) -> Result<Vec<Vec<i64>>> {
        let mut out = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let mut row = Vec::with_capacity(self.cols);
            for j in 0..self.cols {
                row.push(
                    i64::try_from(self.get(i, j).clone())
                        .map_err(|_| Error::ComputationOverflow("matrix entry exceeds i64".into()))?,
                );
            }
            out.push(row);
        }
        Ok(out)
    }

    /// Fraction-free (Bareiss) determinant.
    pub fn det(&self) -> BigInt {
        assert!(self.is_square(), "determinant of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a: Vec<Vec<BigInt>> = (0..n).map(|i| self.row(i).to_vec()).collect();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(k, i);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                    a[i][j] = v;
                }
            }
            prev = a[k][k].clone();
        }
        sign * a[n - 1][n - 1].clone()
    }

    /// Rank over the rationals.
    pub fn rank(&self) -> usize {
        let mut a: Vec<Vec<Q>> = (0..self.rows)
            .map(|i| self.row(i).iter().map(qint).collect())
            .collect();
        let mut r = 0usize;
        for c in 0..self.cols {
            let Some(p) = (r..self.rows).find(|&i| !a[i][c].is_zero()) else { continue };
            a.swap(r, p);
            for i in r + 1..self.rows {
                if a[i][c].is_zero() {
                    continue;
                }
                let f = &a[i][c] / &a[r][c];
                for j in c..self.cols {
                    let v = &a[i][j] - &f * &a[r][j];
                    a[i][j] = v;
                }
            }
            r += 1;
            if r == self.rows {
                break;
            }
        }
        r
    }

    /// Exact rational inverse; `None` when singular.
    pub fn inverse_q(&self) -> Option<Vec<Vec<Q>>> {
        assert!(self.is_square(), "inverse of non-square matrix");
        let n = self.rows;
        let mut a: Vec<Vec<Q>> = (0..n)
            .map(|i| {
                let mut row: Vec<Q> = self.row(i).iter().map(qint).collect();
                let mut aug = vec![Q::zero(); n];
                aug[i] = Q::one();
                row.extend(aug);
                row
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

    /// Inverse of a unimodular integer matrix; panics if not unimodular.
    pub fn inverse_unimodular(&self) -> Mat {
        let inv = self.inverse_q().expect("matrix is singular");
        let mut m = Mat::zeros(self.rows, self.rows);
        for (i, row) in inv.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                assert!(v.is_integer(), "matrix is not unimodular");
                m.set(i, j, v.to_integer());
            }
        }
        m
    }
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let line: Vec<String> = self.row(i).iter().map(|v| v.to_string()).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

impl fmt::Display for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Smith normal form `u * m * v = d` with unimodular transforms and
/// nonnegative diagonal in divisibility order.
pub struct Smith {
    pub d: Mat,
    pub u: Mat,
    pub v: Mat,
}

impl Smith {
    pub fn rank(&self) -> usize {
        (0..self.d.rows().min(self.d.cols())).filter(|&i| !self.d.get(i, i).is_zero()).count()
    }

    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols()))
            .map(|i| self.d.get(i, i).clone())
            .filter(|x| !x.is_zero())
            .collect()
    }
}

pub fn smith_normal_form(m: &Mat) -> Smith {
    let k = m.rows();
    let n = m.cols();
    let mut a = m.clone();
    let mut u = Mat::identity(k);
    let mut v = Mat::identity(n);

    fn swap_rows(a: &mut Mat, u: &mut Mat, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..a.cols() {
            let (x, y) = (a.get(i, c).clone(), a.get(j, c).clone());
            a.set(i, c, y);
            a.set(j, c, x);
        }
        for c in 0..u.cols() {
            let (x, y) = (u.get(i, c).clone(), u.get(j, c).clone());
            u.set(i, c, y);
            u.set(j, c, x);
        }
    }

    fn swap_cols(a: &mut Mat, v: &mut Mat, i: usize, j: usize) {
        if i == j {
            return;
        }
        for r in 0..a.rows() {
            let (x, y) = (a.get(r, i).clone(), a.get(r, j).clone());
            a.set(r, i, y);
            a.set(r, j, x);
        }
        for r in 0..v.rows() {
            let (x, y) = (v.get(r, i).clone(), v.get(r, j).clone());
            v.set(r, i, y);
            v.set(r, j, x);
        }
    }

    fn add_row(a: &mut Mat, u: &mut Mat, dst: usize, src: usize, c: &BigInt) {
        for col in 0..a.cols() {
            let val = a.get(dst, col) + c * a.get(src, col);
            a.set(dst, col, val);
        }
        for col in 0..u.cols() {
            let val = u.get(dst, col) + c * u.get(src, col);
            u.set(dst, col, val);
        }
    }

    fn add_col(a: &mut Mat, v: &mut Mat, dst: usize, src: usize, c: &BigInt) {
        for row in 0..a.rows() {
            let val = a.get(row, dst) + c * a.get(row, src);
            a.set(row, dst, val);
        }
        for row in 0..v.rows() {
            let val = v.get(row, dst) + c * v.get(row, src);
            v.set(row, dst, val);
        }
    }

    fn neg_row(a: &mut Mat, u: &mut Mat, i: usize) {
        for c in 0..a.cols() {
            let val = -a.get(i, c);
            a.set(i, c, val);
        }
        for c in 0..u.cols() {
            let val = -u.get(i, c);
            u.set(i, c, val);
        }
    }

    let mut t = 0usize;
    while t < k.min(n) {
        // pivot: entry of smallest nonzero absolute value in the trailing block
        let mut piv: Option<(usize, usize)> = None;
        for i in t..k {
            for j in t..n {
                if !a.get(i, j).is_zero()
                    && piv.map_or(true, |(pi, pj)| a.get(i, j).abs() < a.get(pi, pj).abs())
                {
                    piv = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = piv else { break };
        swap_rows(&mut a, &mut u, t, pi);
        swap_cols(&mut a, &mut v, t, pj);
        loop {
            let mut dirty = false;
            for i in t + 1..k {
                if !a.get(i, t).is_zero() {
                    let q = a.get(i, t).div_floor(a.get(t, t));
                    add_row(&mut a, &mut u, i, t, &-q);
                    if !a.get(i, t).is_zero() {
                        swap_rows(&mut a, &mut u, t, i);
                        dirty = true;
                    }
                }
            }
            for j in t + 1..n {
                if !a.get(t, j).is_zero() {
                    let q = a.get(t, j).div_floor(a.get(t, t));
                    add_col(&mut a, &mut v, j, t, &-q);
                    if !a.get(t, j).is_zero() {
                        swap_cols(&mut a, &mut v, t, j);
                        dirty = true;
                    }
                }
            }
            if dirty {
                continue;
            }
            // divisibility: the pivot must divide every later entry
            let d = a.get(t, t).clone();
            let mut bad = None;
            'scan: for i in t + 1..k {
                for j in t + 1..n {
                    if !a.get(i, j).mod_floor(&d).is_zero() {
                        bad = Some(j);
                        break 'scan;
                    }
                }
            }
            match bad {
                None => break,
                Some(j) => add_col(&mut a, &mut v, t, j, &BigInt::one()),
            }
        }
        if a.get(t, t).is_negative() {
            neg_row(&mut a, &mut u, t);
        }
        t += 1;
    }
    Smith { d: a, u, v }
}

/// Parse whitespace-separated integers, arbitrary precision.
pub fn parse_ints(text: &str) -> Result<Vec<BigInt>> {
    text.split_whitespace()
        .map(|tok| {
            BigInt::from_str(tok)
                .map_err(|_| Error::MalformedInput(format!("not an integer: {tok:?}")))
        })
        .collect()
}

/// Matrix file: header `k n`, then k*n integers in row-major order.
pub fn parse_matrix_text(text: &str) -> Result<Mat> {
    let nums = parse_ints(text)?;
    if nums.len() < 2 {
        return Err(Error::MalformedInput("matrix file needs a `rows cols` header".into()));
    }
    let k = usize::try_from(nums[0].clone())
        .map_err(|_| Error::MalformedInput("bad row count".into()))?;
    let n = usize::try_from(nums[1].clone())
        .map_err(|_| Error::MalformedInput("bad column count".into()))?;
    if nums.len() != 2 + k * n {
        return Err(Error::MalformedInput(format!(
            "expected {} entries for a {k}x{n} matrix, found {}",
            k * n,
            nums.len() - 2
        )));
    }
    let rows: Vec<Vec<BigInt>> = (0..k).map(|i| nums[2 + i * n..2 + (i + 1) * n].to_vec()).collect();
    Mat::from_rows(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_transforms(m: &Mat, s: &Smith) {
        assert_eq!(s.u.mul(m).mul(&s.v), s.d);
        assert_eq!(s.u.det().abs(), BigInt::one());
        assert_eq!(s.v.det().abs(), BigInt::one());
        let lim = s.d.rows().min(s.d.cols());
        for i in 1..lim {
            let prev = s.d.get(i - 1, i - 1);
            let cur = s.d.get(i, i);
            if prev.is_zero() {
                assert!(cur.is_zero());
            } else {
                assert!(cur.mod_floor(prev).is_zero());
            }
        }
    }

    #[test]
    fn snf_rectangular() {
        let m = Mat::from_i64(&[&[2, 4, 4], &[-6, 6, 12]]);
        let s = smith_normal_form(&m);
        check_transforms(&m, &s);
        assert_eq!(s.invariant_factors(), vec![BigInt::from(2), BigInt::from(6)]);
    }

    #[test]
    fn snf_diagonal_normalizes_sign() {
        let m = Mat::from_i64(&[&[8, 0], &[0, -16]]);
        let s = smith_normal_form(&m);
        check_transforms(&m, &s);
        assert_eq!(s.invariant_factors(), vec![BigInt::from(8), BigInt::from(16)]);
    }

    #[test]
    fn snf_zero_and_empty() {
        let z = Mat::zeros(3, 2);
        let s = smith_normal_form(&z);
        check_transforms(&z, &s);
        assert_eq!(s.rank(), 0);
        let e = Mat::zeros(0, 0);
        let s = smith_normal_form(&e);
        assert_eq!(s.rank(), 0);
    }

    #[test]
    fn bareiss_det() {
        assert_eq!(Mat::from_i64(&[&[1, 2], &[3, 4]]).det(), BigInt::from(-2));
        assert_eq!(Mat::from_i64(&[&[0, 1], &[1, 0]]).det(), BigInt::from(-1));
        assert_eq!(Mat::from_i64(&[&[16, 48], &[48, 136]]).det(), BigInt::from(-128));
        let singular = Mat::from_i64(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(singular.det(), BigInt::zero());
        assert_eq!(Mat::zeros(0, 0).det(), BigInt::one());
    }

    #[test]
    fn rank_and_inverse() {
        let m = Mat::from_i64(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(m.rank(), 2);
        let u = Mat::from_i64(&[&[2, 5], &[1, 3]]);
        let inv = u.inverse_unimodular();
        assert_eq!(u.mul(&inv), Mat::identity(2));
        assert!(Mat::from_i64(&[&[1, 1], &[1, 1]]).inverse_q().is_none());
    }

    #[test]
    fn matrix_text_roundtrip() {
        let m = parse_matrix_text("2 3\n1 2 3\n4 5 6\n").unwrap();
        assert_eq!(m, Mat::from_i64(&[&[1, 2, 3], &[4, 5, 6]]));
        assert!(parse_matrix_text("2 3\n1 2 3\n4 5\n").is_err());
        assert!(parse_matrix_text("x").is_err());
    }
}
