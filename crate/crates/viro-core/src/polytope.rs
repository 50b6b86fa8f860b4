//! Lattice polytopes: hulls, faces, lattice points, volumes, Minkowski sums,
//! and mixed volumes, all in exact arithmetic.
//!
//! Lower-dimensional polytopes are fully supported: internally they are
//! reduced to full-dimensional ones over the induced lattice of their affine
//! span (via a saturated integer basis), and facet data is lifted back to
//! ambient coordinates.  Lattice volume is always measured with respect to
//! the induced lattice, so a primitive simplex of any dimension has volume 1.

use crate::error::{Error, Result};
use crate::hull::{convex_hull_full_dim, HullFacet};
use crate::linalg::{
    add_int, dot_int, integer_kernel, lex_cmp, rank_int, saturate_span, scale_int,
    solve_integer, solve_rational, sub_int, to_rat_mat, transpose, IMat, IVec, QMat,
};
use crate::{Int, Rat};
use num_traits::{One, Signed, Zero};
use std::collections::BTreeSet;

/// A facet inequality `normal . x + offset >= 0` with primitive integer
/// normal, together with the indices of the polytope vertices lying on it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Facet {
    pub normal: IVec,
    pub offset: Int,
    pub vertex_indices: Vec<usize>,
}

/// A face of a polytope, recorded by the indices of the polytope vertices it
/// contains and its affine dimension.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Face {
    pub vertex_indices: Vec<usize>,
    pub dim: usize,
}

/// Affine chart of a lower-dimensional polytope: ambient point =
/// `base + transpose(basis) * intrinsic`, with `basis` a saturated integer
/// basis of the span so intrinsic coordinates of lattice points are integers.
#[derive(Clone, Debug)]
pub struct Chart {
    pub base: IVec,
    pub basis: IMat,
}

/// A convex polytope with integer vertices.
#[derive(Clone, Debug)]
pub struct LatticePolytope {
    ambient_dim: usize,
    dim: usize,
    vertices: IMat,
    facets: Vec<Facet>,
    /// Primitive normals of hyperplanes containing the affine hull
    /// (empty when full-dimensional).
    hull_equations: IMat,
    /// Chart onto intrinsic coordinates; `None` when full-dimensional.
    chart: Option<Chart>,
}

impl PartialEq for LatticePolytope {
    fn eq(&self, other: &Self) -> bool {
        self.ambient_dim == other.ambient_dim && self.vertices == other.vertices
    }
}
impl Eq for LatticePolytope {}

/// Convex hull of a set of integer points.
pub fn convex_hull(points: &IMat) -> Result<LatticePolytope> {
    if points.is_empty() {
        return Err(Error::InvalidPolytope("empty point list".into()));
    }
    let dim = points[0].len();
    LatticePolytope::from_points(dim, points)
}

impl LatticePolytope {
    /// Build the polytope spanned by the given points (duplicates and
    /// non-extreme points are dropped).
    pub fn from_points(ambient_dim: usize, points: &IMat) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidPolytope("empty point list".into()));
        }
        for p in points {
            if p.len() != ambient_dim {
                return Err(Error::InvalidPolytope(format!(
                    "point has {} coordinates, expected {}",
                    p.len(),
                    ambient_dim
                )));
            }
        }
        // Deduplicate and sort for deterministic processing.
        let unique: IMat = points
            .iter()
            .cloned()
            .collect::<BTreeSet<IVec>>()
            .into_iter()
            .collect();

        let base = unique[0].clone();
        let diffs: IMat = unique[1..].iter().map(|p| sub_int(p, &base)).collect();
        let span_basis = saturate_span(&diffs, ambient_dim);
        let dim = span_basis.len();

        if dim == ambient_dim {
            let hull = convex_hull_full_dim(&unique, ambient_dim)?;
            return Ok(Self::assemble(ambient_dim, dim, &unique, hull, Vec::new(), None));
        }

        // Lower-dimensional: move to intrinsic coordinates over the induced
        // lattice, hull there, and lift facet normals back.
        let hull_equations: IMat = integer_kernel(&diffs, ambient_dim)
            .into_iter()
            .map(|v| crate::linalg::primitive(&v))
            .collect();
        if dim == 0 {
            return Ok(LatticePolytope {
                ambient_dim,
                dim: 0,
                vertices: vec![base.clone()],
                facets: Vec::new(),
                hull_equations,
                chart: Some(Chart { base, basis: Vec::new() }),
            });
        }
        let basis_t = transpose(&span_basis);
        let intrinsic: IMat = unique
            .iter()
            .map(|p| {
                solve_integer(&basis_t, &sub_int(p, &base))
                    .expect("saturated basis must express every lattice point of the span")
            })
            .collect();
        let hull = convex_hull_full_dim(&intrinsic, dim)?;
        // Lift intrinsic facet normals: find w with span_basis * w = normal.
        let lifted: Vec<HullFacet> = hull
            .facets
            .iter()
            .map(|f| {
                let w = solve_integer(&span_basis, &f.normal)
                    .expect("saturated basis maps onto the intrinsic lattice");
                let offset = &f.offset - dot_int(&w, &base);
                HullFacet { normal: w, offset, vertices: f.vertices.clone() }
            })
            .collect();
        let hull = crate::hull::HullResult { facets: lifted, vertices: hull.vertices };
        let chart = Chart { base, basis: span_basis };
        Ok(Self::assemble(ambient_dim, dim, &unique, hull, hull_equations, Some(chart)))
    }

    fn assemble(
        ambient_dim: usize,
        dim: usize,
        unique: &IMat,
        hull: crate::hull::HullResult,
        hull_equations: IMat,
        chart: Option<Chart>,
    ) -> Self {
        // Unique points are lex-sorted, so the vertex subsequence is too.
        let vertices: IMat = hull.vertices.iter().map(|&i| unique[i].clone()).collect();
        let reindex: std::collections::BTreeMap<usize, usize> =
            hull.vertices.iter().enumerate().map(|(v, &i)| (i, v)).collect();
        let mut facets: Vec<Facet> = hull
            .facets
            .into_iter()
            .map(|f| Facet {
                normal: f.normal,
                offset: f.offset,
                vertex_indices: f.vertices.iter().map(|i| reindex[i]).collect(),
            })
            .collect();
        facets.sort_by(|a, b| lex_cmp(&a.normal, &b.normal).then(a.offset.cmp(&b.offset)));
        LatticePolytope { ambient_dim, dim, vertices, facets, hull_equations, chart }
    }

    /// Ambient dimension of the coordinate space.
    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    /// Affine dimension of the polytope.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// True when the polytope spans its ambient space.
    pub fn is_full_dimensional(&self) -> bool {
        self.dim == self.ambient_dim
    }

    /// Vertices in lexicographic order.
    pub fn vertices(&self) -> &IMat {
        &self.vertices
    }

    /// Facet inequalities (with vertex incidences).  For a lower-dimensional
    /// polytope these cut out the polytope within its affine hull.
    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    /// Equations of the affine hull (`normal . x + offset = 0` written as a
    /// pair); empty for full-dimensional polytopes.
    pub fn hull_equation_pairs(&self) -> Vec<(IVec, Int)> {
        self.hull_equations
            .iter()
            .map(|n| (n.clone(), -dot_int(n, &self.vertices[0])))
            .collect()
    }

    /// Chart of the affine hull for lower-dimensional polytopes.
    pub fn chart(&self) -> Option<&Chart> {
        self.chart.as_ref()
    }

    /// Intrinsic (induced-lattice) coordinates of a point in the affine hull.
    pub fn to_intrinsic(&self, p: &[Int]) -> Option<IVec> {
        match &self.chart {
            None => Some(p.to_vec()),
            Some(chart) => {
                solve_integer(&transpose(&chart.basis), &sub_int(p, &chart.base))
            }
        }
    }

    /// Map intrinsic coordinates back to ambient coordinates.
    pub fn from_intrinsic(&self, c: &[Int]) -> IVec {
        match &self.chart {
            None => c.to_vec(),
            Some(chart) => {
                let mut x = chart.base.clone();
                for (coef, row) in c.iter().zip(chart.basis.iter()) {
                    x = add_int(&x, &scale_int(row, coef));
                }
                x
            }
        }
    }

    /// Whether an integer point lies in the polytope.
    pub fn contains(&self, p: &[Int]) -> bool {
        self.on_affine_hull(p)
            && self
                .facets
                .iter()
                .all(|f| !(dot_int(&f.normal, p) + &f.offset).is_negative())
    }

    /// Whether a rational point lies in the polytope.
    pub fn contains_rat(&self, p: &[Rat]) -> bool {
        let v0 = &self.vertices[0];
        let on_hull = self.hull_equations.iter().all(|n| {
            let lhs: Rat = n.iter().zip(p).map(|(a, x)| Rat::from_integer(a.clone()) * x).sum();
            lhs == Rat::from_integer(dot_int(n, v0))
        });
        on_hull
            && self.facets.iter().all(|f| {
                let val: Rat = f
                    .normal
                    .iter()
                    .zip(p)
                    .map(|(a, x)| Rat::from_integer(a.clone()) * x)
                    .sum::<Rat>()
                    + Rat::from_integer(f.offset.clone());
                !val.is_negative()
            })
    }

    /// Whether an integer point lies in the relative interior.
    pub fn contains_in_relative_interior(&self, p: &[Int]) -> bool {
        if !self.on_affine_hull(p) {
            return false;
        }
        if self.dim == 0 {
            return p == self.vertices[0].as_slice();
        }
        self.facets
            .iter()
            .all(|f| (dot_int(&f.normal, p) + &f.offset).is_positive())
    }

    fn on_affine_hull(&self, p: &[Int]) -> bool {
        let v0 = &self.vertices[0];
        self.hull_equations
            .iter()
            .all(|n| dot_int(n, p) == dot_int(n, v0))
    }

    /// All lattice points of the polytope, in lexicographic order.
    pub fn lattice_points(&self) -> IMat {
        if self.dim == 0 {
            return vec![self.vertices[0].clone()];
        }
        let d = self.ambient_dim;
        let lo: IVec = (0..d)
            .map(|j| self.vertices.iter().map(|v| v[j].clone()).min().unwrap())
            .collect();
        let hi: IVec = (0..d)
            .map(|j| self.vertices.iter().map(|v| v[j].clone()).max().unwrap())
            .collect();
        let mut out = Vec::new();
        let mut cur = lo.clone();
        loop {
            if self.contains(&cur) {
                out.push(cur.clone());
            }
            // Lexicographic odometer: last coordinate varies fastest.
            let mut j = d;
            let advanced = loop {
                if j == 0 {
                    break false;
                }
                j -= 1;
                if cur[j] < hi[j] {
                    cur[j] = &cur[j] + Int::one();
                    for k in j + 1..d {
                        cur[k] = lo[k].clone();
                    }
                    break true;
                }
            };
            if !advanced {
                break;
            }
        }
        out
    }

    /// Number of lattice points in the relative interior.
    pub fn interior_lattice_count(&self) -> usize {
        self.lattice_points()
            .iter()
            .filter(|p| self.contains_in_relative_interior(p))
            .count()
    }

    /// Number of lattice points on the relative boundary.
    pub fn boundary_lattice_count(&self) -> usize {
        self.lattice_points().len() - self.interior_lattice_count()
    }

    /// Normalized lattice volume with respect to the induced lattice of the
    /// affine span: `dim! *` (euclidean volume in intrinsic coordinates).
    /// A point has volume 1, a primitive simplex has volume 1.
    pub fn lattice_volume(&self) -> Int {
        if self.dim == 0 {
            return Int::one();
        }
        // Work in intrinsic coordinates (identity chart if full-dim).
        let verts: IMat = self
            .vertices
            .iter()
            .map(|v| self.to_intrinsic(v).expect("vertex lies on affine hull"))
            .collect();
        lattice_volume_recursive(&verts, self.dim)
    }

    /// All faces of the given dimension (the polytope itself for `d = dim`).
    pub fn faces(&self, d: usize) -> Result<Vec<Face>> {
        if d > self.dim {
            return Err(Error::InvalidInput(format!(
                "face dimension {} exceeds polytope dimension {}",
                d, self.dim
            )));
        }
        let all = self.all_faces();
        Ok(all.into_iter().filter(|f| f.dim == d).collect())
    }

    /// All nonempty faces, grouped ascending by dimension then vertex set.
    pub fn all_faces(&self) -> Vec<Face> {
        let full: Vec<usize> = (0..self.vertices.len()).collect();
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
        let mut queue: Vec<Vec<usize>> = vec![full.clone()];
        seen.insert(full);
        while let Some(cur) = queue.pop() {
            for f in &self.facets {
                let inter: Vec<usize> = cur
                    .iter()
                    .copied()
                    .filter(|i| f.vertex_indices.contains(i))
                    .collect();
                if !inter.is_empty() && !seen.contains(&inter) {
                    seen.insert(inter.clone());
                    queue.push(inter);
                }
            }
        }
        let mut faces: Vec<Face> = seen
            .into_iter()
            .map(|vs| {
                let dim = self.vertex_set_dim(&vs);
                Face { vertex_indices: vs, dim }
            })
            .collect();
        faces.sort_by(|a, b| a.dim.cmp(&b.dim).then_with(|| a.vertex_indices.cmp(&b.vertex_indices)));
        faces
    }

    fn vertex_set_dim(&self, vs: &[usize]) -> usize {
        let base = &self.vertices[vs[0]];
        let diffs: IMat = vs[1..]
            .iter()
            .map(|&i| sub_int(&self.vertices[i], base))
            .collect();
        rank_int(&diffs)
    }

    /// The sub-polytope spanned by a face.
    pub fn face_polytope(&self, face: &Face) -> LatticePolytope {
        let pts: IMat = face
            .vertex_indices
            .iter()
            .map(|&i| self.vertices[i].clone())
            .collect();
        LatticePolytope::from_points(self.ambient_dim, &pts)
            .expect("face of a valid polytope is a valid polytope")
    }

    /// True when every vertex lies on exactly `dim` edges.
    pub fn is_simple(&self) -> Result<bool> {
        let edges = self.faces(1)?;
        let mut count = vec![0usize; self.vertices.len()];
        for e in &edges {
            for &i in &e.vertex_indices {
                count[i] += 1;
            }
        }
        Ok(count.iter().all(|&c| c == self.dim))
    }

    /// Minkowski sum with another polytope of the same ambient dimension.
    pub fn minkowski_sum(&self, other: &LatticePolytope) -> Result<LatticePolytope> {
        if self.ambient_dim != other.ambient_dim {
            return Err(Error::InvalidInput(format!(
                "ambient dimension mismatch: {} vs {}",
                self.ambient_dim, other.ambient_dim
            )));
        }
        let sums: IMat = self
            .vertices
            .iter()
            .flat_map(|a| other.vertices.iter().map(move |b| add_int(a, b)))
            .collect();
        LatticePolytope::from_points(self.ambient_dim, &sums)
    }

    /// Dilation by a nonnegative integer factor.
    pub fn dilate(&self, k: &Int) -> LatticePolytope {
        assert!(!k.is_negative(), "dilation factor must be nonnegative");
        if k.is_zero() {
            let origin = vec![vec![Int::zero(); self.ambient_dim]];
            return LatticePolytope::from_points(self.ambient_dim, &origin).unwrap();
        }
        let scaled: IMat = self.vertices.iter().map(|v| scale_int(v, k)).collect();
        LatticePolytope::from_points(self.ambient_dim, &scaled).unwrap()
    }

    /// Translation by an integer vector.
    pub fn translate(&self, t: &[Int]) -> LatticePolytope {
        let moved: IMat = self.vertices.iter().map(|v| add_int(v, t)).collect();
        LatticePolytope::from_points(self.ambient_dim, &moved).unwrap()
    }
}

/// Normalized volume of the full-dimensional polytope on the given vertices
/// (intrinsic coordinates), by recursive coning from the first vertex over
/// the facets that do not contain it: each contributes its lattice height
/// times its own normalized volume over the induced lattice.
fn lattice_volume_recursive(verts: &IMat, dim: usize) -> Int {
    if dim == 0 {
        return Int::one();
    }
    if dim == 1 {
        let min = verts.iter().map(|v| v[0].clone()).min().unwrap();
        let max = verts.iter().map(|v| v[0].clone()).max().unwrap();
        return max - min;
    }
    let poly = LatticePolytope::from_points(dim, verts)
        .expect("volume recursion requires a valid polytope");
    debug_assert_eq!(poly.dim(), dim);
    let apex = poly.vertices()[0].clone();
    let mut total = Int::zero();
    for f in poly.facets() {
        let h = dot_int(&f.normal, &apex) + &f.offset;
        if h.is_zero() {
            continue;
        }
        debug_assert!(h.is_positive());
        let fverts: IMat = f
            .vertex_indices
            .iter()
            .map(|&i| poly.vertices()[i].clone())
            .collect();
        let sub = LatticePolytope::from_points(dim, &fverts).unwrap();
        total += h * sub.lattice_volume();
    }
    total
}

/// Normalized mixed volume of `d` polytopes in ambient dimension `d`,
/// computed by exact polynomial interpolation of
/// `(l1,...,ld) -> lattice_volume(l1 P1 + ... + ld Pd)` over the grid
/// `{1,...,d+1}^d` and extraction of the coefficient of `l1*l2*...*ld`,
/// divided by `d!`.  Lower-dimensional sums contribute volume 0.
pub fn mixed_volume(polys: &[LatticePolytope]) -> Result<Int> {
    let d = polys.len();
    if d == 0 {
        return Err(Error::InvalidInput("mixed volume of zero polytopes".into()));
    }
    for p in polys {
        if p.ambient_dim() != d {
            return Err(Error::InvalidInput(format!(
                "mixed volume needs {} polytopes of ambient dimension {}, got dimension {}",
                d,
                d,
                p.ambient_dim()
            )));
        }
    }

    // Values of the dilation-volume polynomial on the grid.
    let npts = d + 1;
    let mut values: Vec<Rat> = Vec::with_capacity(npts.pow(d as u32));
    let mut idx = vec![0usize; d];
    loop {
        let lambdas: Vec<Int> = idx.iter().map(|&i| Int::from(i as u32 + 1)).collect();
        let mut sum: Option<LatticePolytope> = None;
        for (p, l) in polys.iter().zip(&lambdas) {
            let dil = p.dilate(l);
            sum = Some(match sum {
                None => dil,
                Some(s) => s.minkowski_sum(&dil)?,
            });
        }
        let s = sum.unwrap();
        let vol = if s.dim() < d { Int::zero() } else { s.lattice_volume() };
        values.push(Rat::from_integer(vol));
        // odometer over the grid, last index fastest
        let mut j = d;
        loop {
            if j == 0 {
                break;
            }
            j -= 1;
            idx[j] += 1;
            if idx[j] < npts {
                break;
            }
            idx[j] = 0;
        }
        if idx.iter().all(|&v| v == 0) {
            break;
        }
    }

    // Inverse Vandermonde on nodes 1..=d+1 maps values to coefficients.
    let vinv = inverse_vandermonde(npts);
    // Repeatedly extract, along each variable, the coefficient of degree 1.
    // `values` is laid out with the last variable varying fastest.
    let mut cur = values;
    for _ in 0..d {
        let blocks = cur.len() / npts;
        let mut next = Vec::with_capacity(blocks);
        for b in 0..blocks {
            let vals = &cur[b * npts..(b + 1) * npts];
            // coefficient of x^1 = row 1 of V^{-1} applied to the values
            let coeff: Rat = vinv[1]
                .iter()
                .zip(vals)
                .map(|(c, v)| c * v)
                .sum();
            next.push(coeff);
        }
        cur = next;
    }
    debug_assert_eq!(cur.len(), 1);
    let mut fact = Int::one();
    for k in 2..=d {
        fact *= Int::from(k as u32);
    }
    let mv = &cur[0] / Rat::from_integer(fact);
    if !mv.is_integer() {
        return Err(Error::InvalidInput(
            "mixed volume interpolation produced a non-integer".into(),
        ));
    }
    Ok(mv.to_integer())
}

/// Inverse of the Vandermonde matrix on nodes `1..=n` (`V[i][j] = (i+1)^j`).
fn inverse_vandermonde(n: usize) -> QMat {
    let mut v: IMat = Vec::with_capacity(n);
    for i in 0..n {
        let x = Int::from(i as u32 + 1);
        let mut row = Vec::with_capacity(n);
        let mut pw = Int::one();
        for _ in 0..n {
            row.push(pw.clone());
            pw *= &x;
        }
        v.push(row);
    }
    let vq = to_rat_mat(&v);
    // Solve V * c = e_j column by column; collect as rows of the inverse.
    let mut cols: Vec<Vec<Rat>> = Vec::with_capacity(n);
    for j in 0..n {
        let mut e = vec![Rat::zero(); n];
        e[j] = Rat::one();
        cols.push(solve_rational(&vq, &e).expect("Vandermonde on distinct nodes is invertible"));
    }
    // cols[j][i] = (V^{-1})[i][j]; transpose into row-major inverse.
    (0..n)
        .map(|i| (0..n).map(|j| cols[j][i].clone()).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::int;

    fn pts(rows: &[&[i64]]) -> IMat {
        rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()
    }

    fn poly(rows: &[&[i64]]) -> LatticePolytope {
        convex_hull(&pts(rows)).unwrap()
    }

    /// Standard simplex of size m in the plane.
    fn t2(m: i64) -> LatticePolytope {
        poly(&[&[0, 0], &[m, 0], &[0, m]])
    }

    /// Skew tetrahedron with apex (1,1,k).
    fn skew_tetra(k: i64) -> LatticePolytope {
        poly(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[1, 1, k]])
    }

    #[test]
    fn hull_triangle() {
        let p = poly(&[&[0, 0], &[1, 0], &[0, 1]]);
        assert_eq!(p.vertices().len(), 3);
        assert_eq!(p.facets().len(), 3);
        assert_eq!(p.dim(), 2);
    }

    #[test]
    fn hull_drops_non_extreme() {
        let p = poly(&[&[0, 0], &[2, 0], &[0, 2], &[1, 1]]);
        assert_eq!(p.vertices(), &pts(&[&[0, 0], &[0, 2], &[2, 0]]));
    }

    #[test]
    fn hull_skew_tetrahedron() {
        let p = skew_tetra(3);
        assert_eq!(p.vertices().len(), 4);
        assert_eq!(p.facets().len(), 4);
    }

    #[test]
    fn hull_empty_and_mixed() {
        assert!(convex_hull(&Vec::new()).is_err());
        assert!(LatticePolytope::from_points(2, &pts(&[&[0, 0], &[1]])).is_err());
    }

    #[test]
    fn lattice_points_segment() {
        let p = poly(&[&[0], &[2]]);
        assert_eq!(p.lattice_points(), pts(&[&[0], &[1], &[2]]));
    }

    #[test]
    fn lattice_points_skew_tetra_only_vertices() {
        let p = skew_tetra(3);
        assert_eq!(p.lattice_points().len(), 4);
        for k in 1..7 {
            assert_eq!(skew_tetra(k).lattice_points().len(), 4, "k={k}");
        }
    }

    #[test]
    fn lattice_points_t2_2() {
        assert_eq!(t2(2).lattice_points().len(), 6);
    }

    #[test]
    fn interior_counts() {
        for k in 1..=6 {
            assert_eq!(skew_tetra(k).interior_lattice_count(), 0, "k={k}");
        }
        for k in 3..=12 {
            let doubled = skew_tetra(k).dilate(&int(2));
            assert_eq!(doubled.interior_lattice_count(), (k - 1) as usize, "k={k}");
        }
        assert_eq!(t2(3).interior_lattice_count(), 1);
    }

    #[test]
    fn volumes() {
        assert_eq!(t2(1).lattice_volume(), int(1));
        let square = poly(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]);
        assert_eq!(square.lattice_volume(), int(2));
        for k in 1..=8 {
            assert_eq!(skew_tetra(k).lattice_volume(), int(k), "k={k}");
        }
        // Lower-dimensional: lattice length w.r.t. the induced lattice.
        let seg = poly(&[&[0, 0], &[2, 2]]);
        assert_eq!(seg.dim(), 1);
        assert_eq!(seg.lattice_volume(), int(2));
        // Point.
        assert_eq!(poly(&[&[5, 7]]).lattice_volume(), int(1));
    }

    #[test]
    fn lower_dimensional_triangle_in_space() {
        let p = poly(&[&[0, 0, 0], &[1, 0, 1], &[0, 1, 1]]);
        assert_eq!(p.dim(), 2);
        assert_eq!(p.ambient_dim(), 3);
        assert_eq!(p.lattice_volume(), int(1));
        assert_eq!(p.lattice_points().len(), 3);
        assert_eq!(p.interior_lattice_count(), 0);
        assert_eq!(p.facets().len(), 3);
        for f in p.facets() {
            assert_eq!(f.vertex_indices.len(), 2);
            assert_eq!(crate::linalg::gcd_vec(&f.normal), int(1));
        }
    }

    #[test]
    fn faces_of_skew_tetra() {
        for k in [2i64, 5] {
            let p = skew_tetra(k);
            let twos = p.faces(2).unwrap();
            assert_eq!(twos.len(), 4);
            let mut total = Int::zero();
            for f in &twos {
                let fp = p.face_polytope(f);
                assert_eq!(fp.lattice_volume(), int(1));
                total += fp.lattice_volume();
            }
            assert_eq!(total, int(4));
        }
    }

    #[test]
    fn faces_square_and_tetra() {
        let square = poly(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]);
        assert_eq!(square.faces(1).unwrap().len(), 4);
        assert_eq!(square.faces(0).unwrap().len(), 4);
        assert_eq!(square.faces(2).unwrap().len(), 1);
        assert!(square.faces(3).is_err());
        let t3 = poly(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        assert_eq!(t3.faces(0).unwrap().len(), 4);
        assert_eq!(t3.faces(1).unwrap().len(), 6);
        assert_eq!(t3.faces(2).unwrap().len(), 4);
    }

    #[test]
    fn simplicity() {
        assert!(skew_tetra(4).is_simple().unwrap());
        let mut cube = Vec::new();
        for x in 0..2i64 {
            for y in 0..2i64 {
                for z in 0..2i64 {
                    cube.push(vec![int(x), int(y), int(z)]);
                }
            }
        }
        assert!(convex_hull(&cube).unwrap().is_simple().unwrap());
        let oct = poly(&[
            &[1, 1, 0],
            &[1, 1, 2],
            &[0, 1, 1],
            &[2, 1, 1],
            &[1, 0, 1],
            &[1, 2, 1],
        ]);
        assert!(!oct.is_simple().unwrap());
    }

    #[test]
    fn minkowski() {
        let square = poly(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]);
        let point = poly(&[&[3, 4]]);
        let moved = square.minkowski_sum(&point).unwrap();
        assert_eq!(moved.vertices(), &pts(&[&[3, 4], &[3, 5], &[4, 4], &[4, 5]]));

        let pent = square.minkowski_sum(&t2(1)).unwrap();
        assert_eq!(
            pent.vertices(),
            &pts(&[&[0, 0], &[0, 2], &[1, 2], &[2, 0], &[2, 1]])
        );

        // Triple sum equals dilation by 3.
        let t = t2(1);
        let sum3 = t.minkowski_sum(&t).unwrap().minkowski_sum(&t).unwrap();
        assert_eq!(sum3, t.dilate(&int(3)));
    }

    #[test]
    fn mixed_volumes() {
        let s = t2(1);
        assert_eq!(mixed_volume(&[s.clone(), s.clone()]).unwrap(), int(1));
        let t3 = poly(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        assert_eq!(
            mixed_volume(&[t3.clone(), t3.clone(), t3.clone()]).unwrap(),
            int(1)
        );
        let square = poly(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]);
        assert_eq!(mixed_volume(&[square.clone(), square.clone()]).unwrap(), int(2));
        assert_eq!(mixed_volume(&[square.clone(), s.clone()]).unwrap(), int(2));
        assert_eq!(mixed_volume(&[s, square]).unwrap(), int(2));
    }

    #[test]
    fn mixed_volume_degenerate() {
        // One factor a point: the sum never gains that direction ... actually
        // a point contributes nothing; MV with a point factor is 0.
        let square = poly(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]);
        let point = poly(&[&[2, 2]]);
        assert_eq!(mixed_volume(&[square, point]).unwrap(), int(0));
        // Two parallel segments span only a line.
        let seg = poly(&[&[0, 0], &[1, 0]]);
        assert_eq!(mixed_volume(&[seg.clone(), seg]).unwrap(), int(0));
    }

    #[test]
    fn pick_formula_spot() {
        // Normalized Pick: Vol = 2*interior + boundary - 2 for polygons.
        for p in [t2(3), t2(4), poly(&[&[0, 0], &[3, 1], &[1, 4], &[0, 2]])] {
            let vol = p.lattice_volume();
            let i = p.interior_lattice_count();
            let b = p.boundary_lattice_count();
            assert_eq!(vol, int(2 * i as i64 + b as i64 - 2));
        }
    }
}
