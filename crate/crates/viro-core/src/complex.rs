//! Finite regular cell complexes with Z2 chain structure: cells graded by
//! dimension, boundaries as odd-multiplicity facet lists, Betti numbers via
//! exact elimination over the two-element field.
//!
//! Cell identity is positional (index within its dimension), so complexes
//! coming from quotient constructions may legitimately contain distinct
//! cells with identical vertex sets.

use crate::error::{Error, Result};
use crate::gf2::Gf2Matrix;
use crate::linalg::QMat;
use std::collections::BTreeMap;

/// One cell: the (deduplicated, sorted) vertices it touches, for reference
/// and export, and its Z2 boundary as indices into the next dimension down.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    pub vertex_indices: Vec<usize>,
    pub boundary: Vec<usize>,
}

/// A cell complex: rational vertex coordinates plus cells graded by
/// dimension (`cells[p]` holds the p-cells).
#[derive(Clone, Debug, Default)]
pub struct PLComplex {
    pub vertices: QMat,
    pub cells: Vec<Vec<Cell>>,
}

impl PLComplex {
    /// Highest dimension with at least one cell, or `None` when empty.
    pub fn dim(&self) -> Option<usize> {
        self.cells.iter().rposition(|level| !level.is_empty())
    }

    /// Number of cells in each dimension (trailing empty levels trimmed).
    pub fn cell_counts(&self) -> Vec<usize> {
        match self.dim() {
            None => Vec::new(),
            Some(d) => (0..=d).map(|p| self.cells[p].len()).collect(),
        }
    }

    /// Alternating sum of cell counts.
    pub fn euler_char(&self) -> i64 {
        self.cell_counts()
            .iter()
            .enumerate()
            .map(|(p, &n)| if p % 2 == 0 { n as i64 } else { -(n as i64) })
            .sum()
    }

    /// The Z2 boundary operator of dimension `q >= 1` as a matrix whose
    /// rows are the boundaries of the q-cells (columns: (q-1)-cells).
    pub fn boundary_rows(&self, q: usize) -> Gf2Matrix {
        debug_assert!(q >= 1);
        let cols = self.cells.get(q - 1).map_or(0, Vec::len);
        let mut m = Gf2Matrix::new(cols);
        if let Some(level) = self.cells.get(q) {
            for cell in level {
                m.push_row_support(cell.boundary.iter().copied());
            }
        }
        m
    }

    /// Structural soundness: boundary indices in range, vertices have empty
    /// boundary, and the composite boundary vanishes over Z2.
    pub fn boundary_squares_to_zero(&self) -> bool {
        for (p, level) in self.cells.iter().enumerate() {
            let below = if p == 0 { 0 } else { self.cells[p - 1].len() };
            for cell in level {
                if p == 0 && !cell.boundary.is_empty() {
                    return false;
                }
                if cell.boundary.iter().any(|&f| f >= below) {
                    return false;
                }
            }
        }
        for p in 2..self.cells.len() {
            let words = self.cells[p - 2].len().div_ceil(64).max(1);
            for cell in &self.cells[p] {
                let mut acc = vec![0u64; words];
                for &f in &cell.boundary {
                    for &g in &self.cells[p - 1][f].boundary {
                        acc[g / 64] ^= 1u64 << (g % 64);
                    }
                }
                if acc.iter().any(|&w| w != 0) {
                    return false;
                }
            }
        }
        true
    }

    /// Z2 Betti numbers, one entry per dimension up to [`Self::dim`].
    /// Errors when the boundary structure is unsound.
    pub fn betti_z2(&self) -> Result<Vec<usize>> {
        if !self.boundary_squares_to_zero() {
            return Err(Error::InvalidInput(
                "cell complex boundary does not square to zero".into(),
            ));
        }
        let Some(top) = self.dim() else {
            return Ok(Vec::new());
        };
        let ranks: Vec<usize> = (1..=top + 1).map(|q| self.boundary_rows(q).rank()).collect();
        let mut betti = Vec::with_capacity(top + 1);
        for p in 0..=top {
            let n = self.cells[p].len();
            let r_down = if p == 0 { 0 } else { ranks[p - 1] };
            let r_up = if p == top { 0 } else { ranks[p] };
            betti.push(
                n.checked_sub(r_down + r_up)
                    .expect("kernel always contains the image"),
            );
        }
        Ok(betti)
    }

    /// Sum of all Z2 Betti numbers.
    pub fn total_betti_z2(&self) -> Result<usize> {
        Ok(self.betti_z2()?.iter().sum())
    }

    /// The full face closure of a simplicial complex given by its maximal
    /// (or any generating) simplices as index tuples into `points`.
    /// Isolated vertices must be listed as singleton simplices.
    pub fn from_simplices(points: &QMat, simplices: &[Vec<usize>]) -> PLComplex {
        let mut levels: Vec<BTreeMap<Vec<usize>, ()>> = Vec::new();
        for s in simplices {
            let mut sorted = s.clone();
            sorted.sort_unstable();
            sorted.dedup();
            for sub in nonempty_subsets(&sorted) {
                let p = sub.len() - 1;
                while levels.len() <= p {
                    levels.push(BTreeMap::new());
                }
                levels[p].insert(sub, ());
            }
        }
        let index: Vec<BTreeMap<Vec<usize>, usize>> = levels
            .iter()
            .map(|lvl| lvl.keys().cloned().zip(0..).collect())
            .collect();
        let mut cells: Vec<Vec<Cell>> = Vec::with_capacity(levels.len());
        for (p, lvl) in levels.iter().enumerate() {
            let mut level_cells = Vec::with_capacity(lvl.len());
            for key in lvl.keys() {
                let boundary = if p == 0 {
                    Vec::new()
                } else {
                    let mut b: Vec<usize> = (0..key.len())
                        .map(|omit| {
                            let mut f = key.clone();
                            f.remove(omit);
                            index[p - 1][&f]
                        })
                        .collect();
                    b.sort_unstable();
                    b
                };
                level_cells.push(Cell { vertex_indices: key.clone(), boundary });
            }
            cells.push(level_cells);
        }
        PLComplex { vertices: points.clone(), cells }
    }
}

/// All nonempty subsets of a sorted index tuple, each sorted.
pub(crate) fn nonempty_subsets(s: &[usize]) -> Vec<Vec<usize>> {
    let mut out = Vec::with_capacity((1usize << s.len()) - 1);
    for mask in 1u32..(1u32 << s.len()) {
        out.push(
            s.iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &v)| v)
                .collect(),
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat_int;
    use crate::linalg::QVec;

    fn dummy_points(n: usize) -> QMat {
        (0..n).map(|i| vec![rat_int(i as i64)] as QVec).collect()
    }

    #[test]
    fn two_disjoint_points() {
        let c = PLComplex::from_simplices(&dummy_points(2), &[vec![0], vec![1]]);
        assert_eq!(c.betti_z2().unwrap(), vec![2]);
    }

    #[test]
    fn interval_and_circle() {
        let seg = PLComplex::from_simplices(&dummy_points(3), &[vec![0, 1], vec![1, 2]]);
        assert_eq!(seg.betti_z2().unwrap(), vec![1, 0]);
        let circle =
            PLComplex::from_simplices(&dummy_points(3), &[vec![0, 1], vec![1, 2], vec![0, 2]]);
        assert_eq!(circle.betti_z2().unwrap(), vec![1, 1]);
        assert_eq!(circle.euler_char(), 0);
    }

    #[test]
    fn filled_triangle_is_contractible() {
        let c = PLComplex::from_simplices(&dummy_points(3), &[vec![0, 1, 2]]);
        assert_eq!(c.betti_z2().unwrap(), vec![1, 0, 0]);
        assert_eq!(c.euler_char(), 1);
    }

    #[test]
    fn sphere_from_octahedron_boundary() {
        // Octahedron boundary: vertices 0/1 on the first axis, 2/3 on the
        // second, 4/5 on the third; the eight faces avoid antipodal pairs.
        let faces: Vec<Vec<usize>> = [0, 1]
            .iter()
            .flat_map(|&a| {
                [2, 3].iter().flat_map(move |&b| {
                    [4, 5].iter().map(move |&c| vec![a, b, c])
                })
            })
            .collect();
        let c = PLComplex::from_simplices(&dummy_points(6), &faces);
        assert_eq!(c.cell_counts(), vec![6, 12, 8]);
        assert_eq!(c.betti_z2().unwrap(), vec![1, 0, 1]);
        assert_eq!(c.euler_char(), 2);
    }

    #[test]
    fn projective_plane_from_antipodal_icosahedron() {
        // The classical 6-vertex triangulation: 10 faces, all 15 edges.
        let faces = vec![
            vec![0, 1, 2],
            vec![0, 1, 3],
            vec![0, 2, 4],
            vec![0, 3, 5],
            vec![0, 4, 5],
            vec![1, 2, 5],
            vec![1, 3, 4],
            vec![1, 4, 5],
            vec![2, 3, 4],
            vec![2, 3, 5],
        ];
        let c = PLComplex::from_simplices(&dummy_points(6), &faces);
        assert_eq!(c.cell_counts(), vec![6, 15, 10]);
        assert_eq!(c.euler_char(), 1);
        assert_eq!(c.betti_z2().unwrap(), vec![1, 1, 1]);
    }

    #[test]
    fn empty_complex() {
        let c = PLComplex::default();
        assert_eq!(c.betti_z2().unwrap(), Vec::<usize>::new());
        assert_eq!(c.total_betti_z2().unwrap(), 0);
        assert_eq!(c.dim(), None);
    }

    #[test]
    fn broken_boundary_is_rejected() {
        // A 2-cell whose boundary is a single edge: the composite boundary
        // hits the edge's endpoints once each, which is nonzero over Z2.
        let c = PLComplex {
            vertices: dummy_points(2),
            cells: vec![
                vec![
                    Cell { vertex_indices: vec![0], boundary: vec![] },
                    Cell { vertex_indices: vec![1], boundary: vec![] },
                ],
                vec![Cell { vertex_indices: vec![0, 1], boundary: vec![0, 1] }],
                vec![Cell { vertex_indices: vec![0, 1], boundary: vec![0] }],
            ],
        };
        assert!(!c.boundary_squares_to_zero());
        assert!(c.betti_z2().is_err());
    }

    #[test]
    fn duplicate_vertex_sets_are_distinct_cells() {
        // A circle built from two edges joining the same two vertices.
        let c = PLComplex {
            vertices: dummy_points(2),
            cells: vec![
                vec![
                    Cell { vertex_indices: vec![0], boundary: vec![] },
                    Cell { vertex_indices: vec![1], boundary: vec![] },
                ],
                vec![
                    Cell { vertex_indices: vec![0, 1], boundary: vec![0, 1] },
                    Cell { vertex_indices: vec![0, 1], boundary: vec![0, 1] },
                ],
            ],
        };
        assert_eq!(c.betti_z2().unwrap(), vec![1, 1]);
    }
}
