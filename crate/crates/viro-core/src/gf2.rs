//! Dense linear algebra over the two-element field GF(2).
//!
//! Rows are bit-packed into `u64` words.  This is the workhorse behind mod-2
//! homology ranks and independence checks for cycle classes, where matrices
//! can reach tens of thousands of rows but operations are only XOR.

/// A dense GF(2) matrix with a fixed number of columns.
#[derive(Clone, Debug)]
pub struct Gf2Matrix {
    cols: usize,
    words: usize,
    rows: Vec<Vec<u64>>,
}

impl Gf2Matrix {
    /// Create an empty matrix with `cols` columns.
    pub fn new(cols: usize) -> Self {
        Gf2Matrix {
            cols,
            words: cols.div_ceil(64),
            rows: Vec::new(),
        }
    }

    /// Number of columns.
    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Number of rows.
    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    /// Append a row given as the set of column indices holding a 1.
    pub fn push_row_support(&mut self, support: impl IntoIterator<Item = usize>) {
        let mut row = vec![0u64; self.words];
        for c in support {
            assert!(c < self.cols, "column index out of range");
            row[c / 64] ^= 1u64 << (c % 64);
        }
        self.rows.push(row);
    }

    /// Append an all-zero row.
    pub fn push_zero_row(&mut self) {
        self.rows.push(vec![0u64; self.words]);
    }

    /// Read entry (r, c).
    pub fn get(&self, r: usize, c: usize) -> bool {
        (self.rows[r][c / 64] >> (c % 64)) & 1 == 1
    }

    /// Rank over GF(2).  Does not modify the matrix.
    pub fn rank(&self) -> usize {
        let mut m = self.rows.clone();
        rank_in_place(&mut m, self.words)
    }

    /// Append all rows of `other` (must have the same number of columns).
    pub fn extend_rows(&mut self, other: &Gf2Matrix) {
        assert_eq!(self.cols, other.cols);
        self.rows.extend(other.rows.iter().cloned());
    }
}

fn rank_in_place(m: &mut [Vec<u64>], words: usize) -> usize {
    let rows = m.len();
    let mut rank = 0;
    for w in 0..words {
        for bit in 0..64 {
            if rank == rows {
                return rank;
            }
            let mask = 1u64 << bit;
            let Some(p) = (rank..rows).find(|&i| m[i][w] & mask != 0) else {
                continue;
            };
            m.swap(rank, p);
            let pivot = m[rank].clone();
            for (i, row) in m.iter_mut().enumerate() {
                if i != rank && row[w] & mask != 0 {
                    for k in w..words {
                        row[k] ^= pivot[k];
                    }
                }
            }
            rank += 1;
        }
    }
    rank
}

/// Solve `x A = b` over GF(2), where rows of `a` are the generators: decide
/// whether `b` lies in the row space of `a`.
pub fn in_row_space(a: &Gf2Matrix, b_support: &[usize]) -> bool {
    let r0 = a.rank();
    let mut ext = a.clone();
    ext.push_row_support(b_support.iter().copied());
    ext.rank() == r0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_basics() {
        let mut m = Gf2Matrix::new(3);
        m.push_row_support([0, 1]);
        m.push_row_support([1, 2]);
        m.push_row_support([0, 2]); // sum of the first two
        assert_eq!(m.rank(), 2);
        m.push_row_support([0]);
        assert_eq!(m.rank(), 3);
        assert_eq!(m.num_rows(), 4);
    }

    #[test]
    fn rank_empty_and_zero() {
        let m = Gf2Matrix::new(5);
        assert_eq!(m.rank(), 0);
        let mut z = Gf2Matrix::new(0);
        z.push_zero_row();
        assert_eq!(z.rank(), 0);
    }

    #[test]
    fn wide_matrix() {
        // Exercise multi-word rows (>64 columns).
        let mut m = Gf2Matrix::new(130);
        m.push_row_support([0, 129]);
        m.push_row_support([64, 129]);
        m.push_row_support([0, 64]); // dependent
        assert_eq!(m.rank(), 2);
        m.push_row_support([128]);
        assert_eq!(m.rank(), 3);
    }

    #[test]
    fn membership() {
        let mut m = Gf2Matrix::new(4);
        m.push_row_support([0, 1]);
        m.push_row_support([2, 3]);
        assert!(in_row_space(&m, &[0, 1, 2, 3]));
        assert!(!in_row_space(&m, &[0, 2]));
        assert!(in_row_space(&m, &[]));
    }
}
