//! Exact integer and rational linear algebra.
//!
//! Everything here operates on dense matrices given as `Vec` of rows.  Sizes
//! in this crate are tiny (ambient dimension rarely exceeds 8), so the
//! implementations favor clarity and exactness over asymptotic speed:
//! fraction-free Bareiss elimination for determinants, Gauss-Jordan over
//! rationals for solving, and Smith normal form with tracked unimodular
//! transforms for lattice-level questions (integer kernels, integer solving,
//! saturation of spans).

use crate::{Int, Rat};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;

/// Integer vector.
pub type IVec = Vec<Int>;
/// Integer matrix as a list of rows.
pub type IMat = Vec<IVec>;
/// Rational vector.
pub type QVec = Vec<Rat>;
/// Rational matrix as a list of rows.
pub type QMat = Vec<QVec>;

/// Dot product of two integer vectors.
pub fn dot_int(a: &[Int], b: &[Int]) -> Int {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Dot product of two rational vectors.
pub fn dot_rat(a: &[Rat], b: &[Rat]) -> Rat {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Componentwise difference `a - b`.
pub fn sub_int(a: &[Int], b: &[Int]) -> IVec {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Componentwise sum `a + b`.
pub fn add_int(a: &[Int], b: &[Int]) -> IVec {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// Scale an integer vector.
pub fn scale_int(a: &[Int], c: &Int) -> IVec {
    a.iter().map(|x| x * c).collect()
}

/// Greatest common divisor of all entries (nonnegative; 0 for the zero vector).
pub fn gcd_vec(v: &[Int]) -> Int {
    v.iter().fold(Int::zero(), |g, x| g.gcd(x))
}

/// Divide a vector by the gcd of its entries.  The zero vector is returned
/// unchanged; no sign normalization is applied.
pub fn primitive(v: &[Int]) -> IVec {
    let g = gcd_vec(v);
    if g.is_zero() {
        v.to_vec()
    } else {
        v.iter().map(|x| x / &g).collect()
    }
}

/// `n x n` integer identity matrix.
pub fn identity_int(n: usize) -> IMat {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { Int::one() } else { Int::zero() })
                .collect()
        })
        .collect()
}

/// Matrix-vector product `A x` for an integer matrix.
pub fn mat_vec_int(a: &IMat, x: &[Int]) -> IVec {
    a.iter().map(|row| dot_int(row, x)).collect()
}

/// Matrix product `A B` for integer matrices.
pub fn mat_mul_int(a: &IMat, b: &IMat) -> IMat {
    let bt = transpose(b);
    a.iter()
        .map(|row| bt.iter().map(|col| dot_int(row, col)).collect())
        .collect()
}

/// Transpose of a rectangular matrix.
pub fn transpose<T: Clone>(m: &[Vec<T>]) -> Vec<Vec<T>> {
    if m.is_empty() {
        return Vec::new();
    }
    let cols = m[0].len();
    (0..cols)
        .map(|j| m.iter().map(|row| row[j].clone()).collect())
        .collect()
}

/// Convert an integer vector to rationals.
pub fn to_rat_vec(v: &[Int]) -> QVec {
    v.iter().map(|x| Rat::from_integer(x.clone())).collect()
}

/// Convert an integer matrix to rationals.
pub fn to_rat_mat(m: &IMat) -> QMat {
    m.iter().map(|r| to_rat_vec(r)).collect()
}

/// Lexicographic comparison of integer vectors.
pub fn lex_cmp(a: &[Int], b: &[Int]) -> Ordering {
    for (x, y) in a.iter().zip(b.iter()) {
        match x.cmp(y) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    a.len().cmp(&b.len())
}

/// Determinant of a square integer matrix by fraction-free Bareiss
/// elimination.  The empty matrix has determinant 1.
pub fn det_bareiss(m: &IMat) -> Int {
    let n = m.len();
    if n == 0 {
        return Int::one();
    }
    debug_assert!(m.iter().all(|r| r.len() == n));
    let mut a = m.clone();
    let mut sign = Int::one();
    let mut prev = Int::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return Int::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = num / &prev;
            }
            a[i][k] = Int::zero();
        }
        prev = a[k][k].clone();
    }
    sign * a[n - 1][n - 1].clone()
}

/// Rank of a rational matrix via Gaussian elimination.
pub fn rank_rational(m: &QMat) -> usize {
    let mut a = m.to_vec();
    let rows = a.len();
    if rows == 0 {
        return 0;
    }
    let cols = a[0].len();
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        let pivot = a[rank][col].clone();
        for j in col..cols {
            a[rank][j] = &a[rank][j] / &pivot;
        }
        for i in 0..rows {
            if i != rank && !a[i][col].is_zero() {
                let f = a[i][col].clone();
                for j in col..cols {
                    let sub = &f * &a[rank][j];
                    a[i][j] = &a[i][j] - &sub;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Rank of an integer matrix (over the rationals).
pub fn rank_int(m: &IMat) -> usize {
    rank_rational(&to_rat_mat(m))
}

/// One solution of `A x = b` over the rationals, or `None` if inconsistent.
/// Free variables are set to zero.
pub fn solve_rational(a: &QMat, b: &QVec) -> Option<QVec> {
    let rows = a.len();
    debug_assert_eq!(rows, b.len());
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut m: QMat = a
        .iter()
        .zip(b)
        .map(|(r, v)| {
            let mut row = r.clone();
            row.push(v.clone());
            row
        })
        .collect();
    let mut pivot_cols = Vec::new();
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let pivot = m[rank][col].clone();
        for j in col..=cols {
            m[rank][j] = &m[rank][j] / &pivot;
        }
        for i in 0..rows {
            if i != rank && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                for j in col..=cols {
                    let sub = &f * &m[rank][j];
                    m[i][j] = &m[i][j] - &sub;
                }
            }
        }
        pivot_cols.push(col);
        rank += 1;
    }
    for row in m.iter().skip(rank) {
        if !row[cols].is_zero() {
            return None;
        }
    }
    let mut x = vec![Rat::zero(); cols];
    for (r, &col) in pivot_cols.iter().enumerate() {
        x[col] = m[r][cols].clone();
    }
    Some(x)
}

/// Smith normal form `S = U A V` of an integer matrix, with `U`, `V`
/// unimodular and `S` diagonal with nonnegative entries satisfying
/// `S[0][0] | S[1][1] | ...`.
pub struct Snf {
    /// Diagonal matrix, same shape as the input.
    pub s: IMat,
    /// Unimodular row transform (`m x m`).
    pub u: IMat,
    /// Unimodular column transform (`n x n`).
    pub v: IMat,
}

impl Snf {
    /// Number of nonzero diagonal entries (= rank of the input).
    pub fn rank(&self) -> usize {
        let lim = self.s.len().min(if self.s.is_empty() { 0 } else { self.s[0].len() });
        (0..lim).filter(|&i| !self.s[i][i].is_zero()).count()
    }
}

/// Compute the Smith normal form with transforms.
pub fn smith_normal_form(a: &IMat) -> Snf {
    let m = a.len();
    let n = if m == 0 { 0 } else { a[0].len() };
    let mut s = a.clone();
    let mut u = identity_int(m);
    let mut v = identity_int(n);
    let lim = m.min(n);

    for t in 0..lim {
        'pivot: loop {
            // Locate a nonzero entry of minimal absolute value in s[t..][t..].
            let mut best: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    if !s[i][j].is_zero()
                        && best
                            .map(|(bi, bj)| s[i][j].abs() < s[bi][bj].abs())
                            .unwrap_or(true)
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else {
                break 'pivot; // remaining block is zero
            };
            if bi != t {
                s.swap(t, bi);
                u.swap(t, bi);
            }
            if bj != t {
                for row in s.iter_mut() {
                    row.swap(t, bj);
                }
                for row in v.iter_mut() {
                    row.swap(t, bj);
                }
            }
            // Reduce column t below the pivot and row t right of the pivot.
            let mut clean = true;
            for i in t + 1..m {
                if !s[i][t].is_zero() {
                    let q = s[i][t].div_floor(&s[t][t]);
                    for j in 0..n {
                        let sub = &q * &s[t][j];
                        s[i][j] = &s[i][j] - &sub;
                    }
                    for j in 0..m {
                        let sub = &q * &u[t][j];
                        u[i][j] = &u[i][j] - &sub;
                    }
                    if !s[i][t].is_zero() {
                        clean = false;
                    }
                }
            }
            for j in t + 1..n {
                if !s[t][j].is_zero() {
                    let q = s[t][j].div_floor(&s[t][t]);
                    for row in s.iter_mut() {
                        let sub = &q * &row[t];
                        row[j] = &row[j] - &sub;
                    }
                    for row in v.iter_mut() {
                        let sub = &q * &row[t];
                        row[j] = &row[j] - &sub;
                    }
                    if !s[t][j].is_zero() {
                        clean = false;
                    }
                }
            }
            if !clean {
                continue 'pivot;
            }
            // Pivot row/column are clear; enforce that the pivot divides the
            // remaining block so the diagonal ends up in divisibility order.
            for i in t + 1..m {
                for j in t + 1..n {
                    if !s[i][j].mod_floor(&s[t][t]).is_zero() {
                        for k in 0..n {
                            let add = s[i][k].clone();
                            s[t][k] = &s[t][k] + &add;
                        }
                        for k in 0..m {
                            let add = u[i][k].clone();
                            u[t][k] = &u[t][k] + &add;
                        }
                        continue 'pivot;
                    }
                }
            }
            break 'pivot;
        }
    }
    // Normalize diagonal signs.
    for t in 0..lim {
        if s[t][t].is_negative() {
            for j in 0..n {
                s[t][j] = -s[t][j].clone();
            }
            for j in 0..m {
                u[t][j] = -u[t][j].clone();
            }
        }
    }
    Snf { s, u, v }
}

/// Basis of the lattice `{ x in Z^n : A x = 0 }` for an integer matrix with
/// `n` columns.  The returned vectors generate the full kernel lattice (it is
/// automatically saturated).
pub fn integer_kernel(a: &IMat, n: usize) -> IMat {
    if a.is_empty() {
        return identity_int(n);
    }
    debug_assert!(a.iter().all(|r| r.len() == n));
    let snf = smith_normal_form(a);
    let r = snf.rank();
    // Columns r..n of V map to zero columns of S, hence A * (col j of V) = 0.
    (r..n)
        .map(|j| snf.v.iter().map(|row| row[j].clone()).collect())
        .collect()
}

/// Basis of the saturation `span(vs) ∩ Z^n` of the lattice spanned by the
/// given vectors: the set of all integer vectors lying in their rational
/// span.  Returns an empty list when the span is trivial.
pub fn saturate_span(vs: &IMat, n: usize) -> IMat {
    let nonzero: IMat = vs.iter().filter(|v| !v.iter().all(Int::is_zero)).cloned().collect();
    if nonzero.is_empty() {
        return Vec::new();
    }
    let orth = integer_kernel(&nonzero, n);
    integer_kernel(&orth, n)
}

/// One integer solution of `A x = b`, or `None` when no integer solution
/// exists (including rational inconsistency).
pub fn solve_integer(a: &IMat, b: &IVec) -> Option<IVec> {
    let m = a.len();
    debug_assert_eq!(m, b.len());
    let n = if m == 0 { 0 } else { a[0].len() };
    if m == 0 {
        return Some(vec![Int::zero(); n]);
    }
    let snf = smith_normal_form(a);
    let c = mat_vec_int(&snf.u, b);
    let lim = m.min(n);
    let mut y = vec![Int::zero(); n];
    for i in 0..m {
        let d = if i < lim { snf.s[i][i].clone() } else { Int::zero() };
        if d.is_zero() {
            if !c[i].is_zero() {
                return None;
            }
        } else {
            let (q, r) = c[i].div_rem(&d);
            if !r.is_zero() {
                return None;
            }
            y[i] = q;
        }
    }
    Some(mat_vec_int(&snf.v, &y))
}

/// Inverse of a unimodular integer matrix (determinant ±1), as an integer
/// matrix.  Panics if the matrix is not square and unimodular.
pub fn inverse_unimodular(a: &IMat) -> IMat {
    let n = a.len();
    assert!(a.iter().all(|r| r.len() == n), "matrix must be square");
    let det = det_bareiss(a);
    assert!(
        det.clone().abs().is_one(),
        "matrix must be unimodular, determinant was {det}"
    );
    let aq = to_rat_mat(a);
    let mut inv = IMat::with_capacity(n);
    // Solve A x = e_j column by column; entries are exact integers.
    let mut cols = Vec::with_capacity(n);
    for j in 0..n {
        let mut e = vec![Rat::zero(); n];
        e[j] = Rat::one();
        let x = solve_rational(&aq, &e).expect("unimodular matrix is invertible");
        cols.push(x);
    }
    for i in 0..n {
        let mut row = IVec::with_capacity(n);
        for col in cols.iter() {
            debug_assert!(col[i].is_integer());
            row.push(col[i].to_integer());
        }
        inv.push(row);
    }
    inv
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::int;

    fn iv(v: &[i64]) -> IVec {
        v.iter().map(|&x| int(x)).collect()
    }

    fn im(rows: &[&[i64]]) -> IMat {
        rows.iter().map(|r| iv(r)).collect()
    }

    #[test]
    fn primitive_and_gcd() {
        assert_eq!(gcd_vec(&iv(&[6, -4, 10])), int(2));
        assert_eq!(primitive(&iv(&[6, -4, 10])), iv(&[3, -2, 5]));
        assert_eq!(primitive(&iv(&[0, 0])), iv(&[0, 0]));
        assert_eq!(gcd_vec(&iv(&[])), int(0));
    }

    #[test]
    fn determinants() {
        assert_eq!(det_bareiss(&im(&[&[2, 0], &[0, 3]])), int(6));
        assert_eq!(det_bareiss(&im(&[&[0, 1], &[1, 0]])), int(-1));
        assert_eq!(
            det_bareiss(&im(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9]])),
            int(0)
        );
        assert_eq!(
            det_bareiss(&im(&[&[3, 1, 4], &[1, 5, 9], &[2, 6, 5]])),
            int(-90)
        );
        assert_eq!(det_bareiss(&Vec::new()), int(1));
    }

    #[test]
    fn ranks() {
        assert_eq!(rank_int(&im(&[&[1, 2], &[2, 4]])), 1);
        assert_eq!(rank_int(&im(&[&[1, 0], &[0, 1]])), 2);
        assert_eq!(rank_int(&im(&[&[0, 0]])), 0);
    }

    #[test]
    fn rational_solving() {
        let a = to_rat_mat(&im(&[&[1, 1], &[1, -1]]));
        let b = to_rat_vec(&iv(&[3, 1]));
        let x = solve_rational(&a, &b).unwrap();
        assert_eq!(x, to_rat_vec(&iv(&[2, 1])));
        let a2 = to_rat_mat(&im(&[&[1, 1], &[2, 2]]));
        let b2 = to_rat_vec(&iv(&[1, 3]));
        assert!(solve_rational(&a2, &b2).is_none());
    }

    #[test]
    fn snf_small() {
        let a = im(&[&[2, 4], &[6, 8]]);
        let snf = smith_normal_form(&a);
        assert_eq!(snf.s, im(&[&[2, 0], &[0, 4]]));
        assert_eq!(mat_mul_int(&mat_mul_int(&snf.u, &a), &snf.v), snf.s);
        assert!(det_bareiss(&snf.u).abs().is_one());
        assert!(det_bareiss(&snf.v).abs().is_one());
    }

    #[test]
    fn snf_rectangular_and_divisibility() {
        let a = im(&[&[2, 0, 0], &[0, 3, 0]]);
        let snf = smith_normal_form(&a);
        assert_eq!(mat_mul_int(&mat_mul_int(&snf.u, &a), &snf.v), snf.s);
        // Divisibility chain: d1 | d2 forces (1, 6) here.
        assert_eq!(snf.s[0][0], int(1));
        assert_eq!(snf.s[1][1], int(6));
        assert_eq!(snf.rank(), 2);
    }

    #[test]
    fn kernels() {
        let a = im(&[&[1, 1, 1]]);
        let k = integer_kernel(&a, 3);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(dot_int(&a[0], v).is_zero());
        }
        // (1, -1, 0) must be an integer combination of the kernel basis.
        let kt = transpose(&k);
        assert!(solve_integer(&kt, &iv(&[1, -1, 0])).is_some());
        // Kernel of an injective map is trivial.
        assert!(integer_kernel(&im(&[&[1, 0], &[0, 1]]), 2).is_empty());
    }

    #[test]
    fn saturation() {
        // span{(2,0),(0,2)} = R^2, saturation = Z^2.
        let sat = saturate_span(&im(&[&[2, 0], &[0, 2]]), 2);
        assert_eq!(sat.len(), 2);
        assert!(det_bareiss(&sat).abs().is_one());
        // span{(2,4)} saturates to the lattice generated by (1,2).
        let sat1 = saturate_span(&im(&[&[2, 4]]), 2);
        assert_eq!(sat1.len(), 1);
        assert_eq!(primitive(&sat1[0]), primitive(&iv(&[1, 2])));
        assert!(saturate_span(&im(&[&[0, 0]]), 2).is_empty());
    }

    #[test]
    fn integer_solving() {
        let a = im(&[&[2, 0], &[0, 3]]);
        let x = solve_integer(&a, &iv(&[4, 9])).unwrap();
        assert_eq!(x, iv(&[2, 3]));
        assert!(solve_integer(&im(&[&[2]]), &iv(&[3])).is_none());
        // Surjective lattice map: solution exists for every target.
        let b = im(&[&[2, 3]]);
        let x2 = solve_integer(&b, &iv(&[1])).unwrap();
        assert_eq!(dot_int(&b[0], &x2), int(1));
    }

    #[test]
    fn unimodular_inverse() {
        let a = im(&[&[1, 1], &[0, 1]]);
        assert_eq!(inverse_unimodular(&a), im(&[&[1, -1], &[0, 1]]));
        let b = im(&[&[2, 1], &[1, 1]]);
        let binv = inverse_unimodular(&b);
        assert_eq!(mat_mul_int(&b, &binv), identity_int(2));
    }
}
