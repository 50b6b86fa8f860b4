//! Cayley constructions for systems of piecewise-linear hypersurfaces.
//!
//! This module builds the Cayley polytope of several lattice polytopes,
//! translates between its convex triangulations and mixed subdivisions of
//! the Minkowski sum of the factors, and uses that correspondence to model
//! real complete intersections combinatorially:
//!
//! * [`cayley_polytope`], [`cayley_to_mixed`], [`mixed_to_cayley`],
//!   [`mixed_subdivision`] — the polytope and the subdivision
//!   correspondence;
//! * [`sturmfels_ci`] — the piecewise-linear intersection model of `k`
//!   sign-decorated hypersurfaces in `(R^*)^d`, with its pieces counted by
//!   dimension;
//! * [`cayley_layered_triangulation`] — a convex primitive triangulation
//!   of the Cayley polytope of dilated standard simplices made of joins of
//!   layered pieces;
//! * [`ci_narrow_cycles`], [`ci_betti_lower_bound`],
//!   [`verify_ci_witness`] — witness cycles showing many connected
//!   components of the modeled intersection;
//! * [`ci_asymptotic_data`] — gluing transported copies of the layered
//!   Cayley model into every cell of a coarse triangulation;
//! * [`ci_dilate_pair_2d`] — a scaled pair of plane curves whose
//!   intersection points can be counted exactly.

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::layered::{
    extended_parity_sign, layered_triangulation, narrow_cycles, parity_signs, CycleWitness,
    LayeredTriangulation, NarrowCell,
};
use crate::linalg::{add_int, rank_int, solve_rational, sub_int, to_rat_vec, IMat, IVec, QMat, QVec};
use crate::polytope::{convex_hull, LatticePolytope};
use crate::triangulation::{
    check_convexity, check_valid, convexity_certificate, is_primitive, lower_hull_cells,
    primitive_convex_2d, regular_subdivision, validate_triangulation, Triangulation,
};
use crate::{int, rat_int, Int, Rat};

// ---------------------------------------------------------------------------
// Small helpers
// ---------------------------------------------------------------------------

fn factorial(n: usize) -> Int {
    let mut f = Int::one();
    for i in 2..=n {
        f *= Int::from(i as u64);
    }
    f
}

/// Negate the listed coordinates of a lattice point.
fn reflect_axes(p: &[Int], axes: &[usize]) -> IVec {
    let mut q = p.to_vec();
    for &a in axes {
        q[a] = -q[a].clone();
    }
    q
}

/// Negate the coordinates selected by a bitmask.
fn reflect_mask(p: &[Int], mask: usize) -> IVec {
    let mut q = p.to_vec();
    for (i, c) in q.iter_mut().enumerate() {
        if mask & (1 << i) != 0 {
            *c = -c.clone();
        }
    }
    q
}

/// Sign picked up by the monomial `x^p` on the orthant copy selected by
/// `mask`: `-1` exactly when an odd number of reflected coordinates of `p`
/// are odd.
fn mask_parity_sign(p: &[Int], mask: usize) -> i8 {
    let mut flips = 0usize;
    for (i, c) in p.iter().enumerate() {
        if mask & (1 << i) != 0 && c.is_odd() {
            flips += 1;
        }
    }
    if flips % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Affine dimension of a finite point set.
fn affine_dim(points: &[IVec]) -> usize {
    if points.len() <= 1 {
        return 0;
    }
    let diffs: IMat = points[1..].iter().map(|p| sub_int(p, &points[0])).collect();
    rank_int(&diffs)
}

/// All ordered ways to write `total` as a sum of `parts` integers, each at
/// least `minimum`.
pub(crate) fn compositions(total: usize, parts: usize, minimum: usize) -> Vec<Vec<usize>> {
    fn rec(
        total: usize,
        parts: usize,
        minimum: usize,
        acc: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if parts == 0 {
            if total == 0 {
                out.push(acc.clone());
            }
            return;
        }
        if total < minimum * parts {
            return;
        }
        for v in minimum..=total {
            acc.push(v);
            rec(total - v, parts - 1, minimum, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    let mut acc = Vec::new();
    rec(total, parts, minimum, &mut acc, &mut out);
    out
}

/// All sums of one point per list, sorted and deduplicated.
fn minkowski_points(dim: usize, parts: &[Vec<IVec>]) -> Vec<IVec> {
    let mut stack: Vec<IVec> = vec![vec![Int::zero(); dim]];
    for part in parts {
        let mut next = Vec::with_capacity(stack.len() * part.len());
        for base in &stack {
            for p in part {
                next.push(add_int(base, p));
            }
        }
        stack = next;
    }
    let set: BTreeSet<IVec> = stack.into_iter().collect();
    set.into_iter().collect()
}

/// The dilated standard simplex `m * conv(0, e_1, ..., e_d)` in `R^d`.
pub fn standard_simplex(d: usize, m: i64) -> Result<LatticePolytope> {
    if d == 0 {
        return Err(Error::InvalidInput(
            "the simplex dimension must be positive".into(),
        ));
    }
    if m < 0 {
        return Err(Error::InvalidInput(
            "the dilation factor must be nonnegative".into(),
        ));
    }
    let mut verts = vec![vec![Int::zero(); d]];
    for i in 0..d {
        let mut v = vec![Int::zero(); d];
        v[i] = int(m);
        verts.push(v);
    }
    convex_hull(&verts)
}

/// Evaluate the piecewise-linear function of a lifted triangulation at a
/// rational point of its support.
pub fn pl_eval(t: &Triangulation, point: &QVec) -> Result<Rat> {
    let lifting = t
        .lifting
        .as_ref()
        .ok_or_else(|| Error::InvalidInput("the triangulation carries no lifting values".into()))?;
    let dim = point.len();
    for simplex in &t.simplices {
        if simplex.len() != dim + 1 {
            continue;
        }
        let mut rows: QMat = vec![vec![Rat::zero(); simplex.len()]; dim + 1];
        for (col, &pi) in simplex.iter().enumerate() {
            for (r, c) in t.points[pi].iter().enumerate() {
                rows[r][col] = Rat::from_integer(c.clone());
            }
            rows[dim][col] = Rat::one();
        }
        let mut rhs: QVec = point.clone();
        rhs.push(Rat::one());
        if let Some(coeffs) = solve_rational(&rows, &rhs) {
            if coeffs.iter().all(|c| !c.is_negative()) {
                let mut value = Rat::zero();
                for (col, &pi) in simplex.iter().enumerate() {
                    value = value + coeffs[col].clone() * lifting[pi].clone();
                }
                return Ok(value);
            }
        }
    }
    Err(Error::InvalidInput(format!(
        "the point {point:?} lies outside the triangulated region"
    )))
}

// ---------------------------------------------------------------------------
// The Cayley polytope
// ---------------------------------------------------------------------------

/// The Cayley polytope of `k` lattice polytopes `P_1, ..., P_k` in `R^d`:
/// the convex hull of the blocks `{e_j} x P_j` in `R^k x R^d`.
///
/// Triangulations of the polytope are stored in *intrinsic* coordinates:
/// since the block coordinates always sum to one, the first one is
/// redundant and is dropped, leaving points in `R^{k-1} x R^d`.
#[derive(Clone, Debug)]
pub struct CayleyPolytope {
    /// Number of factor polytopes.
    pub k: usize,
    /// Ambient dimension of the factors.
    pub dim: usize,
    /// The hull of the embedded blocks, in full coordinates (`R^{k+d}`).
    pub polytope: LatticePolytope,
    /// The factor polytopes.
    pub factors: Vec<LatticePolytope>,
}

fn intrinsic_point(k: usize, block: usize, base: &[Int]) -> IVec {
    let mut p = vec![Int::zero(); k - 1];
    if block > 0 {
        p[block - 1] = Int::one();
    }
    p.extend(base.iter().cloned());
    p
}

fn split_intrinsic(k: usize, dim: usize, p: &[Int]) -> Result<(usize, IVec)> {
    if p.len() != k - 1 + dim {
        return Err(Error::InvalidInput(format!(
            "point of length {} where {} block and {} base coordinates were expected",
            p.len(),
            k - 1,
            dim
        )));
    }
    let mut block = 0usize;
    for (i, c) in p[..k - 1].iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        if !c.is_one() || block != 0 {
            return Err(Error::InvalidInput(format!(
                "the block coordinates of {p:?} do not select a single block"
            )));
        }
        block = i + 1;
    }
    Ok((block, p[k - 1..].to_vec()))
}

impl CayleyPolytope {
    /// Intrinsic coordinates of a point of block `block` (0-based).
    pub fn intrinsic_point(&self, block: usize, base: &[Int]) -> IVec {
        intrinsic_point(self.k, block, base)
    }

    /// Split an intrinsic point into its block index and base part.
    pub fn split_intrinsic(&self, p: &[Int]) -> Result<(usize, IVec)> {
        split_intrinsic(self.k, self.dim, p)
    }

    /// The full-dimensional model of the polytope in intrinsic coordinates
    /// (the redundant first block coordinate dropped).
    pub fn intrinsic_polytope(&self) -> Result<LatticePolytope> {
        let verts: IMat = self
            .polytope
            .vertices()
            .iter()
            .map(|v| v[1..].to_vec())
            .collect();
        convex_hull(&verts)
    }
}

/// Build the Cayley polytope of the given factor polytopes.
pub fn cayley_polytope(factors: &[LatticePolytope]) -> Result<CayleyPolytope> {
    let k = factors.len();
    if k == 0 {
        return Err(Error::InvalidInput(
            "a Cayley polytope needs at least one factor".into(),
        ));
    }
    let dim = factors[0].ambient_dim();
    for f in factors {
        if f.ambient_dim() != dim {
            return Err(Error::InvalidInput(format!(
                "factor polytopes live in different ambient dimensions: {} and {}",
                dim,
                f.ambient_dim()
            )));
        }
    }
    let mut verts: IMat = Vec::new();
    for (j, f) in factors.iter().enumerate() {
        for v in f.vertices() {
            let mut w = vec![Int::zero(); k];
            w[j] = Int::one();
            w.extend(v.iter().cloned());
            verts.push(w);
        }
    }
    let polytope = convex_hull(&verts)?;
    Ok(CayleyPolytope {
        k,
        dim,
        polytope,
        factors: factors.to_vec(),
    })
}

// ---------------------------------------------------------------------------
// Mixed subdivisions
// ---------------------------------------------------------------------------

/// One cell of a mixed subdivision: the Minkowski sum of one piece from
/// each summand.
#[derive(Clone, Debug, PartialEq)]
pub struct MixedCell {
    /// The pointwise sums of the contributing pieces, sorted.
    pub points: Vec<IVec>,
    /// For each summand, the indices (into the matching `factor_points`
    /// list) of the piece contributing to this cell, sorted.
    pub parts: Vec<Vec<usize>>,
}

/// A mixed subdivision of the Minkowski sum of `k` point configurations:
/// each cell is a direct Minkowski sum of one piece per summand, and the
/// cells tile the sum polytope.
#[derive(Clone, Debug)]
pub struct MixedSubdivision {
    /// Ambient dimension.
    pub dim: usize,
    /// Number of summands.
    pub k: usize,
    /// The point configuration of each summand.
    pub factor_points: Vec<IMat>,
    /// The mixed cells.
    pub cells: Vec<MixedCell>,
    /// The Minkowski sum being subdivided.
    pub total: LatticePolytope,
}

impl MixedSubdivision {
    /// Index-free form of the subdivision: for every cell the list of
    /// per-summand pieces as sorted point lists, with the cells sorted.
    /// Two subdivisions describe the same labeled tiling exactly when
    /// their normal forms agree.
    pub fn normal_form(&self) -> Vec<Vec<IMat>> {
        let mut cells: Vec<Vec<IMat>> = self
            .cells
            .iter()
            .map(|c| {
                c.parts
                    .iter()
                    .enumerate()
                    .map(|(j, part)| {
                        let mut pts: IMat = part
                            .iter()
                            .map(|&i| self.factor_points[j][i].clone())
                            .collect();
                        pts.sort();
                        pts
                    })
                    .collect()
            })
            .collect();
        cells.sort();
        cells
    }

    /// For as many summands as dimensions: the total normalized volume of
    /// the fully mixed cells (every summand contributes at least an edge).
    /// This equals the mixed volume of the summand hulls.
    pub fn mixed_cells_volume(&self) -> Result<Int> {
        if self.k != self.dim {
            return Err(Error::Unsupported(format!(
                "mixed-cell volume needs as many summands as dimensions, got {} in dimension {}",
                self.k, self.dim
            )));
        }
        let mut vol = Int::zero();
        for cell in &self.cells {
            if cell.parts.iter().all(|p| p.len() >= 2) {
                vol += convex_hull(&cell.points)?.lattice_volume();
            }
        }
        let f = factorial(self.dim);
        if !(vol.clone() % &f).is_zero() {
            return Err(Error::InvalidTriangulation(
                "fully mixed cell volumes do not sum to a multiple of d!".into(),
            ));
        }
        Ok(vol / f)
    }
}

/// The affine functional supporting a full-dimensional lower-hull cell:
/// returns `(a, c)` with `<a, p> + c = h(p)` for every point of the cell.
fn cell_functional(
    points: &IMat,
    heights: &[Rat],
    cell: &[usize],
    dim: usize,
) -> Result<(QVec, Rat)> {
    let mut chosen: Vec<usize> = vec![cell[0]];
    let mut diffs: IMat = Vec::new();
    for &i in &cell[1..] {
        if chosen.len() == dim + 1 {
            break;
        }
        diffs.push(sub_int(&points[i], &points[cell[0]]));
        if rank_int(&diffs) == chosen.len() {
            chosen.push(i);
        } else {
            diffs.pop();
        }
    }
    if chosen.len() != dim + 1 {
        return Err(Error::InvalidTriangulation(
            "a lower-hull cell is not full-dimensional".into(),
        ));
    }
    let mut rows: QMat = Vec::with_capacity(dim + 1);
    let mut rhs: QVec = Vec::with_capacity(dim + 1);
    for &i in &chosen {
        let mut row = to_rat_vec(&points[i]);
        row.push(Rat::one());
        rows.push(row);
        rhs.push(heights[i].clone());
    }
    let sol = solve_rational(&rows, &rhs).ok_or_else(|| {
        Error::InvalidTriangulation("could not solve for a cell support functional".into())
    })?;
    let c = sol[dim].clone();
    let a: QVec = sol[..dim].to_vec();
    for &i in cell {
        let mut v = c.clone();
        for (t, at) in a.iter().enumerate() {
            v = v + at.clone() * Rat::from_integer(points[i][t].clone());
        }
        if v != heights[i] {
            return Err(Error::InvalidTriangulation(
                "cell points are not coplanar in the lift".into(),
            ));
        }
    }
    Ok((a, c))
}

/// Build the mixed subdivision of a Minkowski sum induced by a tuple of
/// lifted convex triangulations: the summed lifting induces the
/// subdivision whose cells are sums of one lower face per summand.
///
/// Every summand must carry a lifting that strictly certifies its own
/// triangulation.  The lifting tuple must be generic: each induced cell
/// has to be the *direct* sum of its pieces, otherwise an error names the
/// offending cell.
pub fn mixed_subdivision(factors: &[Triangulation]) -> Result<MixedSubdivision> {
    let k = factors.len();
    if k == 0 {
        return Err(Error::InvalidInput(
            "a mixed subdivision needs at least one summand".into(),
        ));
    }
    let mut factor_points: Vec<IMat> = Vec::with_capacity(k);
    let mut factor_lifts: Vec<Vec<Rat>> = Vec::with_capacity(k);
    for t in factors {
        if t.lifting.is_none() {
            return Err(Error::InvalidInput(
                "every summand triangulation must carry lifting values".into(),
            ));
        }
        if !check_convexity(t)? {
            return Err(Error::NotConvex(
                "a summand lifting does not certify its triangulation".into(),
            ));
        }
        let hull = convex_hull(&t.points)?;
        validate_triangulation(t, &hull).map_err(Error::InvalidTriangulation)?;
        factor_points.push(t.points.clone());
        factor_lifts.push(t.lifting.clone().unwrap());
    }
    let dim = factor_points[0][0].len();
    for pts in &factor_points {
        if pts.iter().any(|p| p.len() != dim) {
            return Err(Error::InvalidInput(
                "summand points live in different ambient dimensions".into(),
            ));
        }
    }
    // Summed lower envelope over all decompositions of each sum point.
    let mut envelope: BTreeMap<IVec, Rat> = BTreeMap::new();
    for choice in factor_points
        .iter()
        .map(|pts| 0..pts.len())
        .multi_cartesian_product()
    {
        let mut s = vec![Int::zero(); dim];
        let mut h = Rat::zero();
        for (j, &i) in choice.iter().enumerate() {
            s = add_int(&s, &factor_points[j][i]);
            h = h + factor_lifts[j][i].clone();
        }
        match envelope.entry(s) {
            std::collections::btree_map::Entry::Occupied(mut e) => {
                if &h < e.get() {
                    e.insert(h);
                }
            }
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(h);
            }
        }
    }
    let sum_points: IMat = envelope.keys().cloned().collect();
    let heights: Vec<Rat> = envelope.values().cloned().collect();
    let total = convex_hull(&sum_points)?;
    if total.dim() != dim {
        return Err(Error::Unsupported(
            "the Minkowski sum must be full-dimensional".into(),
        ));
    }
    let cells_idx = lower_hull_cells(&sum_points, &heights)?;
    let mut cells: Vec<MixedCell> = Vec::with_capacity(cells_idx.len());
    for cell in &cells_idx {
        let (a, _c) = cell_functional(&sum_points, &heights, cell, dim)?;
        let mut parts: Vec<Vec<usize>> = Vec::with_capacity(k);
        let mut part_pts: Vec<Vec<IVec>> = Vec::with_capacity(k);
        for j in 0..k {
            // The face of summand j supported by `a`: minimizers of
            // h_j(p) - <a, p>.
            let mut best: Option<Rat> = None;
            let mut arg: Vec<usize> = Vec::new();
            for (i, p) in factor_points[j].iter().enumerate() {
                let mut v = factor_lifts[j][i].clone();
                for (t, at) in a.iter().enumerate() {
                    v = v - at.clone() * Rat::from_integer(p[t].clone());
                }
                if let Some(b) = &best {
                    if &v > b {
                        continue;
                    }
                    if &v == b {
                        arg.push(i);
                        continue;
                    }
                }
                best = Some(v);
                arg = vec![i];
            }
            let pts: Vec<IVec> = arg.iter().map(|&i| factor_points[j][i].clone()).collect();
            parts.push(arg);
            part_pts.push(pts);
        }
        let cell_pts: Vec<IVec> = cell.iter().map(|&i| sum_points[i].clone()).collect();
        let cell_dim = affine_dim(&cell_pts);
        let part_dims: Vec<usize> = part_pts.iter().map(|p| affine_dim(p)).collect();
        if part_dims.iter().sum::<usize>() != cell_dim {
            return Err(Error::InvalidInput(format!(
                "non-generic lifting tuple: a cell of dimension {cell_dim} decomposes into pieces of dimensions {part_dims:?}"
            )));
        }
        let sums = minkowski_points(dim, &part_pts);
        let mut sorted_cell = cell_pts;
        sorted_cell.sort();
        sorted_cell.dedup();
        if sums != sorted_cell {
            return Err(Error::InvalidTriangulation(
                "a mixed cell is not the pointwise sum of its pieces".into(),
            ));
        }
        cells.push(MixedCell {
            points: sorted_cell,
            parts,
        });
    }
    let mut vol = Int::zero();
    for c in &cells {
        vol += convex_hull(&c.points)?.lattice_volume();
    }
    if vol != total.lattice_volume() {
        return Err(Error::InvalidTriangulation(
            "mixed cells do not tile the Minkowski sum".into(),
        ));
    }
    Ok(MixedSubdivision {
        dim,
        k,
        factor_points,
        cells,
        total,
    })
}

/// Translate a convex triangulation of a Cayley polytope into the mixed
/// subdivision of the Minkowski sum of its factors: every top simplex
/// meets all blocks, and its block pieces sum to a mixed cell.
pub fn cayley_to_mixed(cp: &CayleyPolytope, t: &Triangulation) -> Result<MixedSubdivision> {
    if t.lifting.is_none() {
        return Err(Error::InvalidInput(
            "the Cayley triangulation must carry lifting values".into(),
        ));
    }
    if !check_convexity(t)? {
        return Err(Error::NotConvex(
            "the lifting does not certify the Cayley triangulation".into(),
        ));
    }
    let intrinsic = cp.intrinsic_polytope()?;
    validate_triangulation(t, &intrinsic).map_err(Error::InvalidTriangulation)?;
    let mut block_of: Vec<usize> = Vec::with_capacity(t.points.len());
    let mut base_of: Vec<IVec> = Vec::with_capacity(t.points.len());
    for p in &t.points {
        let (b, base) = cp.split_intrinsic(p)?;
        block_of.push(b);
        base_of.push(base);
    }
    let mut per_block: Vec<Vec<usize>> = vec![Vec::new(); cp.k];
    for (i, &b) in block_of.iter().enumerate() {
        per_block[b].push(i);
    }
    let mut factor_points: Vec<IMat> = vec![Vec::new(); cp.k];
    let mut new_index: Vec<usize> = vec![0; t.points.len()];
    for b in 0..cp.k {
        per_block[b].sort_by(|&x, &y| base_of[x].cmp(&base_of[y]));
        for (ni, &oi) in per_block[b].iter().enumerate() {
            new_index[oi] = ni;
            factor_points[b].push(base_of[oi].clone());
        }
        for w in factor_points[b].windows(2) {
            if w[0] == w[1] {
                return Err(Error::InvalidInput(
                    "a block contains a repeated base point".into(),
                ));
            }
        }
        if factor_points[b].is_empty() {
            return Err(Error::InvalidTriangulation(format!(
                "the triangulation has no points in block {b}"
            )));
        }
        let hull = convex_hull(&factor_points[b])?;
        let mut hv: IMat = hull.vertices().clone();
        hv.sort();
        let mut fv: IMat = cp.factors[b].vertices().clone();
        fv.sort();
        if hv != fv {
            return Err(Error::InvalidTriangulation(format!(
                "block {b} of the triangulation does not span its factor polytope"
            )));
        }
    }
    let mut cells: Vec<MixedCell> = Vec::with_capacity(t.simplices.len());
    for simplex in &t.simplices {
        let mut parts: Vec<Vec<usize>> = vec![Vec::new(); cp.k];
        for &i in simplex {
            parts[block_of[i]].push(new_index[i]);
        }
        for (b, part) in parts.iter_mut().enumerate() {
            if part.is_empty() {
                return Err(Error::InvalidTriangulation(format!(
                    "a top simplex misses block {b}, so the slice correspondence fails"
                )));
            }
            part.sort_unstable();
        }
        let part_pts: Vec<Vec<IVec>> = parts
            .iter()
            .enumerate()
            .map(|(b, part)| part.iter().map(|&i| factor_points[b][i].clone()).collect())
            .collect();
        let points = minkowski_points(cp.dim, &part_pts);
        cells.push(MixedCell { points, parts });
    }
    let mut total = cp.factors[0].clone();
    for f in &cp.factors[1..] {
        total = total.minkowski_sum(f)?;
    }
    if total.dim() != cp.dim {
        return Err(Error::Unsupported(
            "the Minkowski sum must be full-dimensional".into(),
        ));
    }
    let mut vol = Int::zero();
    for c in &cells {
        vol += convex_hull(&c.points)?.lattice_volume();
    }
    if vol != total.lattice_volume() {
        return Err(Error::InvalidTriangulation(
            "the mixed cells do not tile the Minkowski sum".into(),
        ));
    }
    Ok(MixedSubdivision {
        dim: cp.dim,
        k: cp.k,
        factor_points,
        cells,
        total,
    })
}

/// Translate a mixed subdivision back into a convex triangulation of the
/// Cayley polytope of the summand hulls.  Every cell's pieces must be
/// simplices whose union is affinely independent (true for images of
/// [`cayley_to_mixed`]).
pub fn mixed_to_cayley(ms: &MixedSubdivision) -> Result<(CayleyPolytope, Triangulation)> {
    let hulls: Vec<LatticePolytope> = ms
        .factor_points
        .iter()
        .map(|pts| convex_hull(pts))
        .collect::<Result<_>>()?;
    let cp = cayley_polytope(&hulls)?;
    let mut points: IMat = Vec::new();
    let mut offsets: Vec<usize> = Vec::with_capacity(ms.k);
    for (b, pts) in ms.factor_points.iter().enumerate() {
        offsets.push(points.len());
        for p in pts {
            points.push(cp.intrinsic_point(b, p));
        }
    }
    let mut simplices: Vec<Vec<usize>> = Vec::with_capacity(ms.cells.len());
    for cell in &ms.cells {
        let mut s: Vec<usize> = Vec::new();
        for (b, part) in cell.parts.iter().enumerate() {
            for &i in part {
                s.push(offsets[b] + i);
            }
        }
        if s.len() != cp.k + cp.dim {
            return Err(Error::InvalidInput(
                "a mixed cell's pieces are not simplices of complementary dimensions".into(),
            ));
        }
        s.sort_unstable();
        simplices.push(s);
    }
    let lifting = convexity_certificate(&points, &simplices)?;
    let t = Triangulation {
        points,
        simplices,
        lifting: Some(lifting),
    };
    let intrinsic = cp.intrinsic_polytope()?;
    validate_triangulation(&t, &intrinsic).map_err(Error::InvalidTriangulation)?;
    if !check_convexity(&t)? {
        return Err(Error::NotConvex(
            "certificate search produced a non-certifying lifting".into(),
        ));
    }
    Ok((cp, t))
}

// ---------------------------------------------------------------------------
// The piecewise-linear complete intersection model
// ---------------------------------------------------------------------------

/// One equation of a piecewise-linear system: a lifted convex
/// triangulation together with a sign at every point.
#[derive(Clone, Debug)]
pub struct CiFactor {
    pub triangulation: Triangulation,
    pub signs: Vec<i8>,
}

/// Combinatorial model of the real intersection of `k` sign-decorated
/// piecewise-linear hypersurfaces, built by [`sturmfels_ci`].
#[derive(Clone, Debug)]
pub struct CiModel {
    /// Ambient dimension.
    pub dim: usize,
    /// Number of equations.
    pub k: usize,
    /// The mixed subdivision the model was built on.
    pub subdivision: MixedSubdivision,
    /// The zero-dimensional pieces (isolated solution points), sorted.
    pub points: Vec<QVec>,
    /// Number of distinct pieces of each dimension `0..=dim-k`.
    pub cells_by_dim: Vec<usize>,
}

/// Build the piecewise-linear intersection model of `k` equations in
/// `R^d`, `k <= d`.  The factor triangulations induce a mixed subdivision
/// of their Minkowski sum; on each of the `2^d` orthant copies, a mixed
/// cell contributes a piece exactly when every summand piece carries both
/// signs, and the piece is spanned by the scaled sums of the per-summand
/// midpoints of sign-changing edges.
pub fn sturmfels_ci(factors: &[CiFactor]) -> Result<CiModel> {
    let k = factors.len();
    if k == 0 {
        return Err(Error::InvalidInput(
            "at least one equation is needed".into(),
        ));
    }
    let dim = factors[0]
        .triangulation
        .points
        .first()
        .map(|p| p.len())
        .unwrap_or(0);
    if k > dim {
        return Err(Error::Unsupported(format!(
            "{k} equations in dimension {dim}: a system needs at most as many equations as variables"
        )));
    }
    for f in factors {
        if f.signs.len() != f.triangulation.points.len() {
            return Err(Error::InvalidInput(
                "sign data must match the point list of its triangulation".into(),
            ));
        }
        if f.signs.iter().any(|&s| s != 1 && s != -1) {
            return Err(Error::InvalidInput("signs must be +1 or -1".into()));
        }
    }
    let ts: Vec<Triangulation> = factors.iter().map(|f| f.triangulation.clone()).collect();
    let subdivision = mixed_subdivision(&ts)?;
    let kq = rat_int(k as i64);
    let mut pieces_by_dim: BTreeMap<usize, BTreeSet<Vec<QVec>>> = BTreeMap::new();
    for mask in 0..(1usize << dim) {
        for cell in &subdivision.cells {
            let mut mid_sets: Vec<Vec<QVec>> = Vec::with_capacity(k);
            let mut alive = true;
            for (j, part) in cell.parts.iter().enumerate() {
                let mut plus: Vec<IVec> = Vec::new();
                let mut minus: Vec<IVec> = Vec::new();
                for &i in part {
                    let p = &subdivision.factor_points[j][i];
                    let s = factors[j].signs[i] * mask_parity_sign(p, mask);
                    let rp = reflect_mask(p, mask);
                    if s > 0 {
                        plus.push(rp);
                    } else {
                        minus.push(rp);
                    }
                }
                if plus.is_empty() || minus.is_empty() {
                    alive = false;
                    break;
                }
                let mut mids: BTreeSet<QVec> = BTreeSet::new();
                for a in &plus {
                    for b in &minus {
                        let m: QVec = a
                            .iter()
                            .zip(b.iter())
                            .map(|(x, y)| Rat::new(x + y, int(2)))
                            .collect();
                        mids.insert(m);
                    }
                }
                mid_sets.push(mids.into_iter().collect());
            }
            if !alive {
                continue;
            }
            let piece_dim: usize = cell.parts.iter().map(|p| p.len() - 2).sum();
            let mut verts: BTreeSet<QVec> = BTreeSet::new();
            for combo in mid_sets.iter().map(|s| s.iter()).multi_cartesian_product() {
                let mut v = vec![Rat::zero(); dim];
                for m in combo {
                    for (t, c) in m.iter().enumerate() {
                        v[t] = v[t].clone() + c.clone();
                    }
                }
                for c in v.iter_mut() {
                    *c = c.clone() / kq.clone();
                }
                verts.insert(v);
            }
            pieces_by_dim
                .entry(piece_dim)
                .or_default()
                .insert(verts.into_iter().collect());
        }
    }
    let max_dim = dim - k;
    let mut cells_by_dim = vec![0usize; max_dim + 1];
    let mut points: Vec<QVec> = Vec::new();
    for (pd, set) in &pieces_by_dim {
        debug_assert!(*pd <= max_dim);
        cells_by_dim[*pd] = set.len();
        if *pd == 0 {
            for v in set {
                points.push(v[0].clone());
            }
        }
    }
    points.sort();
    Ok(CiModel {
        dim,
        k,
        subdivision,
        points,
        cells_by_dim,
    })
}

// ---------------------------------------------------------------------------
// Layered triangulations of Cayley polytopes of dilated simplices
// ---------------------------------------------------------------------------

/// A convex primitive triangulation of the Cayley polytope of dilated
/// standard simplices, built from joins of layered triangulations of
/// diagonal faces, with alternating sign data.
#[derive(Clone, Debug)]
pub struct CayleyLayered {
    pub cayley: CayleyPolytope,
    /// Triangulation in intrinsic coordinates, with a certifying lifting.
    pub triangulation: Triangulation,
    /// Alternating signs of the base part of every point.
    pub signs: Vec<i8>,
    /// For each simplex, the face dimension contributed by each block.
    pub decompositions: Vec<Vec<usize>>,
}

/// Whether a point of `m T^d` lies on the diagonal corner face starting at
/// vertex `offset` with dimension `i`.
fn in_corner_face(p: &[Int], offset: usize, i: usize, m: i64) -> bool {
    let d = p.len();
    if offset == 0 {
        (i..d).all(|s| p[s].is_zero())
    } else {
        let lo = offset - 1;
        let hi = offset + i;
        (0..lo).all(|s| p[s].is_zero())
            && (hi..d).all(|s| p[s].is_zero())
            && p[lo..hi].iter().sum::<Int>() == int(m)
    }
}

/// Coordinates of a corner-face point in the chart of the face.
fn corner_project(p: &[Int], offset: usize, i: usize) -> IVec {
    if offset == 0 {
        p[..i].to_vec()
    } else {
        p[offset..offset + i].to_vec()
    }
}

/// Embed a (possibly reflected) point of the `i`-dimensional layered model
/// into `R^d` on the corner face at `offset`, so that the alternating sign
/// of the image differs from the sign of the original by a factor constant
/// on the whole face.
fn embed_block_point(y: &[Int], offset: usize, m: i64, d: usize) -> IVec {
    let mut x = vec![Int::zero(); d];
    if offset == 0 {
        for (s, ys) in y.iter().enumerate() {
            x[s] = ys.clone();
        }
    } else {
        let abs_sum: Int = y.iter().map(|c| c.abs()).sum();
        x[offset - 1] = int(m) - abs_sum;
        for (s, ys) in y.iter().enumerate() {
            x[offset + s] = -ys.clone();
        }
    }
    x
}

/// The cells induced on a diagonal corner face by a layered triangulation,
/// cross-checked against the lower-dimensional layered model.
fn induced_corner_cells(
    lay: &LayeredTriangulation,
    offset: usize,
    i: usize,
) -> Result<Vec<Vec<IVec>>> {
    let d = lay.dim;
    let m = lay.size;
    if i == 0 {
        let mut v = vec![Int::zero(); d];
        if offset >= 1 {
            v[offset - 1] = int(m);
        }
        return Ok(vec![vec![v]]);
    }
    let mut out: BTreeSet<Vec<IVec>> = BTreeSet::new();
    for simplex in &lay.triangulation.simplices {
        let mut face_pts: Vec<IVec> = Vec::new();
        for &pi in simplex {
            let p = &lay.triangulation.points[pi];
            if in_corner_face(p, offset, i, m) {
                face_pts.push(p.clone());
            }
        }
        if face_pts.len() == i + 1 {
            face_pts.sort();
            out.insert(face_pts);
        }
    }
    let cells: Vec<Vec<IVec>> = out.into_iter().collect();
    let model = layered_triangulation(i, m)?;
    let mut model_cells: BTreeSet<Vec<IVec>> = BTreeSet::new();
    for s in &model.triangulation.simplices {
        let mut c: Vec<IVec> = s
            .iter()
            .map(|&pi| model.triangulation.points[pi].clone())
            .collect();
        c.sort();
        model_cells.insert(c);
    }
    let mut projected: BTreeSet<Vec<IVec>> = BTreeSet::new();
    for c in &cells {
        let mut pc: Vec<IVec> = c.iter().map(|p| corner_project(p, offset, i)).collect();
        pc.sort();
        projected.insert(pc);
    }
    if projected != model_cells {
        return Err(Error::InvalidTriangulation(format!(
            "the induced face triangulation at offset {offset} in dimension {i} does not match the layered model"
        )));
    }
    Ok(cells)
}

struct RawCayley {
    points: IMat,
    cells: Vec<Vec<usize>>,
    cell_decomposition: Vec<Vec<usize>>,
}

/// The join cells of the layered Cayley triangulation, without a
/// certificate: for every composition of `d` over the blocks, one layered
/// face triangulation per block, joined.
fn cayley_layered_cells(d: usize, k: usize, sizes: &[i64]) -> Result<RawCayley> {
    let mut lays: Vec<LayeredTriangulation> = Vec::with_capacity(k);
    for &m in sizes {
        lays.push(layered_triangulation(d, m)?);
    }
    let mut points: IMat = Vec::new();
    let mut index: BTreeMap<IVec, usize> = BTreeMap::new();
    for (b, lay) in lays.iter().enumerate() {
        for p in &lay.triangulation.points {
            let q = intrinsic_point(k, b, p);
            index.insert(q.clone(), points.len());
            points.push(q);
        }
    }
    let mut cells: Vec<Vec<usize>> = Vec::new();
    let mut cell_decomposition: Vec<Vec<usize>> = Vec::new();
    let mut face_cache: BTreeMap<(usize, usize, usize), Vec<Vec<IVec>>> = BTreeMap::new();
    for decomp in compositions(d, k, 0) {
        let mut offsets = vec![0usize; k];
        let mut acc = 0usize;
        for j in 0..k {
            offsets[j] = acc;
            acc += decomp[j];
        }
        for j in 0..k {
            let key = (j, offsets[j], decomp[j]);
            if let std::collections::btree_map::Entry::Vacant(e) = face_cache.entry(key) {
                e.insert(induced_corner_cells(&lays[j], offsets[j], decomp[j])?);
            }
        }
        let block_cells: Vec<&Vec<Vec<IVec>>> = (0..k)
            .map(|j| face_cache.get(&(j, offsets[j], decomp[j])).unwrap())
            .collect();
        for combo in block_cells.iter().map(|cs| cs.iter()).multi_cartesian_product() {
            let mut cell: Vec<usize> = Vec::with_capacity(d + k);
            for (j, face) in combo.iter().enumerate() {
                for p in face.iter() {
                    let q = intrinsic_point(k, j, p);
                    cell.push(*index.get(&q).ok_or_else(|| {
                        Error::InvalidInput("a face point is missing from the block point list".into())
                    })?);
                }
            }
            cell.sort_unstable();
            cells.push(cell);
            cell_decomposition.push(decomp.clone());
        }
    }
    Ok(RawCayley {
        points,
        cells,
        cell_decomposition,
    })
}

fn check_join_preconditions(d: usize, k: usize, sizes: &[i64], min_size: i64) -> Result<()> {
    if d == 0 || k == 0 || k > d {
        return Err(Error::Unsupported(format!(
            "the join construction needs 1 <= k <= d, got k = {k}, d = {d}"
        )));
    }
    if sizes.len() != k {
        return Err(Error::InvalidInput(format!(
            "expected {k} sizes, got {}",
            sizes.len()
        )));
    }
    if let Some(&m) = sizes.iter().find(|&&m| m < min_size) {
        return Err(Error::Unsupported(format!(
            "size {m} is too small: every size must be at least {min_size}"
        )));
    }
    Ok(())
}

/// Join-of-layers triangulation of the Cayley polytope of the dilated
/// standard simplices `m_1 T^d, ..., m_k T^d` (`1 <= k <= d`), certified
/// convex, primitive, with alternating signs on the base coordinates.
pub fn cayley_layered_triangulation(d: usize, k: usize, sizes: &[i64]) -> Result<CayleyLayered> {
    check_join_preconditions(d, k, sizes, 1)?;
    let raw = cayley_layered_cells(d, k, sizes)?;
    let lifting = convexity_certificate(&raw.points, &raw.cells)?;
    let t = Triangulation {
        points: raw.points,
        simplices: raw.cells,
        lifting: Some(lifting),
    };
    let factors: Vec<LatticePolytope> = sizes
        .iter()
        .map(|&m| standard_simplex(d, m))
        .collect::<Result<_>>()?;
    let cayley = cayley_polytope(&factors)?;
    let intrinsic = cayley.intrinsic_polytope()?;
    validate_triangulation(&t, &intrinsic).map_err(Error::InvalidTriangulation)?;
    if !check_convexity(&t)? {
        return Err(Error::NotConvex(
            "the certificate does not certify the join triangulation".into(),
        ));
    }
    let signs: Vec<i8> = t
        .points
        .iter()
        .map(|p| extended_parity_sign(&p[k - 1..]))
        .collect();
    Ok(CayleyLayered {
        cayley,
        triangulation: t,
        signs,
        decompositions: raw.cell_decomposition,
    })
}

// ---------------------------------------------------------------------------
// Witness cycles for complete intersections
// ---------------------------------------------------------------------------

/// The faces of the symmetric extension of a triangulation: every subset
/// of every cell, in every orthant copy of the base coordinates.
struct FaceOracle {
    index: BTreeMap<IVec, u32>,
    faces: BTreeSet<Vec<u32>>,
}

impl FaceOracle {
    fn build(points: &IMat, cells: &[Vec<usize>], k: usize, dim: usize) -> Self {
        let mut index: BTreeMap<IVec, u32> = BTreeMap::new();
        let mut faces: BTreeSet<Vec<u32>> = BTreeSet::new();
        let head = k - 1;
        for mask in 0..(1usize << dim) {
            for cell in cells {
                let ids: Vec<u32> = cell
                    .iter()
                    .map(|&pi| {
                        let mut q = points[pi].clone();
                        for a in 0..dim {
                            if mask & (1 << a) != 0 {
                                q[head + a] = -q[head + a].clone();
                            }
                        }
                        let next = index.len() as u32;
                        *index.entry(q).or_insert(next)
                    })
                    .collect();
                let n = ids.len();
                for sub in 1u32..(1 << n) {
                    let mut f: Vec<u32> = (0..n)
                        .filter(|&t| sub & (1 << t) != 0)
                        .map(|t| ids[t])
                        .collect();
                    f.sort_unstable();
                    faces.insert(f);
                }
            }
        }
        FaceOracle { index, faces }
    }

    fn contains(&self, pts: &[IVec]) -> bool {
        let mut ids: Vec<u32> = Vec::with_capacity(pts.len());
        for p in pts {
            match self.index.get(p) {
                Some(&i) => ids.push(i),
                None => return false,
            }
        }
        ids.sort_unstable();
        ids.dedup();
        self.faces.contains(&ids)
    }
}

/// The per-block data of a witness cycle: sign-narrow cells in the base
/// coordinates and the dual simplices matched with them.
#[derive(Clone, Debug)]
pub struct CiBlockChain {
    pub narrow: Vec<NarrowCell>,
    pub dual: Vec<Vec<IVec>>,
}

/// A witness cycle for the lower bound on connected components of the
/// piecewise-linear complete intersection: one reflected block cycle per
/// equation, joined.
#[derive(Clone, Debug)]
pub struct CiWitness {
    /// Face dimensions `(i_1, ..., i_k)` contributed by the blocks,
    /// summing to the ambient dimension.
    pub decomposition: Vec<usize>,
    pub blocks: Vec<CiBlockChain>,
    /// Product of the per-block dual signs.  Within each block every
    /// dual vertex carries the same alternating sign; the signs of
    /// different blocks are independent (flipping all signs of one
    /// equation is a symmetry), and this field records their product.
    pub sign: i8,
}

/// All crossing-edge midpoints of a sign-narrow cell, as a sorted list —
/// a geometric label for the piece it carries.
fn midpoint_label(cell: &NarrowCell) -> Vec<QVec> {
    let mut mids: BTreeSet<QVec> = BTreeSet::new();
    for a in &cell.plus {
        for b in &cell.minus {
            mids.insert(
                a.iter()
                    .zip(b.iter())
                    .map(|(x, y)| Rat::new(x + y, int(2)))
                    .collect(),
            );
        }
    }
    mids.into_iter().collect()
}

/// The sign-mixed facets of a narrow cell (one carrier vertex dropped).
fn narrow_facets(cell: &NarrowCell) -> Vec<NarrowCell> {
    let mut out = Vec::new();
    if cell.plus.len() >= 2 {
        for drop in 0..cell.plus.len() {
            let plus: Vec<IVec> = cell
                .plus
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != drop)
                .map(|(_, p)| p.clone())
                .collect();
            out.push(NarrowCell {
                plus,
                minus: cell.minus.clone(),
            });
        }
    }
    if cell.minus.len() >= 2 {
        for drop in 0..cell.minus.len() {
            let minus: Vec<IVec> = cell
                .minus
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != drop)
                .map(|(_, p)| p.clone())
                .collect();
            out.push(NarrowCell {
                plus: cell.plus.clone(),
                minus,
            });
        }
    }
    out
}

/// Check that every block chain of a witness is a cycle: the boundary
/// pieces of its sign-narrow cells cancel in pairs.  A product of block
/// cycles is then itself a cycle.
pub fn verify_ci_witness(w: &CiWitness) -> bool {
    for block in &w.blocks {
        let mut boundary: BTreeSet<Vec<QVec>> = BTreeSet::new();
        for cell in &block.narrow {
            for facet in narrow_facets(cell) {
                let label = midpoint_label(&facet);
                if !boundary.remove(&label) {
                    boundary.insert(label);
                }
            }
        }
        if !boundary.is_empty() {
            return false;
        }
    }
    true
}

struct EmbeddedBlock {
    /// Carriers of the narrow cells, embedded in the base coordinates.
    narrow: Vec<Vec<IVec>>,
    /// Dual simplices, embedded in the base coordinates.
    dual: Vec<Vec<IVec>>,
}

fn embed_block(w: &CycleWitness, offset: usize, m: i64, d: usize) -> EmbeddedBlock {
    EmbeddedBlock {
        narrow: w
            .narrow
            .iter()
            .map(|c| {
                c.carrier()
                    .iter()
                    .map(|p| embed_block_point(p, offset, m, d))
                    .collect()
            })
            .collect(),
        dual: w
            .dual
            .iter()
            .map(|s| {
                s.iter()
                    .map(|p| embed_block_point(p, offset, m, d))
                    .collect()
            })
            .collect(),
    }
}

fn axis_subsets(axes: &[usize]) -> Vec<Vec<usize>> {
    let n = axes.len();
    (0..(1usize << n))
        .map(|m| {
            (0..n)
                .filter(|&t| m & (1 << t) != 0)
                .map(|t| axes[t])
                .collect()
        })
        .collect()
}

fn try_copy(
    embedded: &[EmbeddedBlock],
    masks: &[&Vec<usize>],
    oracle: &FaceOracle,
    k: usize,
    decomp: &[usize],
) -> Option<CiWitness> {
    let blocks_data: Vec<(Vec<Vec<IVec>>, Vec<Vec<IVec>>)> = embedded
        .iter()
        .zip(masks.iter())
        .map(|(b, &mask)| {
            let narrow: Vec<Vec<IVec>> = b
                .narrow
                .iter()
                .map(|c| c.iter().map(|p| reflect_axes(p, mask)).collect())
                .collect();
            let dual: Vec<Vec<IVec>> = b
                .dual
                .iter()
                .map(|s| s.iter().map(|p| reflect_axes(p, mask)).collect())
                .collect();
            (narrow, dual)
        })
        .collect();
    // Within every block, all dual vertices must share one alternating
    // sign, so each dual join simplex meets every block in a same-sign
    // face and stays away from the modeled intersection.  (Signs may
    // differ between blocks: flipping all signs of one equation is a
    // symmetry of the system.)
    let mut block_signs: Vec<i8> = Vec::with_capacity(k);
    for (_, dual) in &blocks_data {
        let mut sign: i8 = 0;
        for s in dual {
            for p in s {
                let sp = extended_parity_sign(p);
                if sign == 0 {
                    sign = sp;
                } else if sign != sp {
                    return None;
                }
            }
        }
        block_signs.push(sign);
    }
    let sign: i8 = block_signs.iter().product();
    // Every join of one dual simplex per block must be a face of the
    // symmetric extension.
    let dual_lists: Vec<&Vec<Vec<IVec>>> = blocks_data.iter().map(|(_, d)| d).collect();
    for combo in dual_lists.iter().map(|l| l.iter()).multi_cartesian_product() {
        let mut pts: Vec<IVec> = Vec::new();
        for (j, s) in combo.iter().enumerate() {
            for p in s.iter() {
                pts.push(intrinsic_point(k, j, p));
            }
        }
        if !oracle.contains(&pts) {
            return None;
        }
    }
    // Every join of one narrow carrier per block must be a face as well.
    let narrow_lists: Vec<&Vec<Vec<IVec>>> = blocks_data.iter().map(|(n, _)| n).collect();
    for combo in narrow_lists.iter().map(|l| l.iter()).multi_cartesian_product() {
        let mut pts: Vec<IVec> = Vec::new();
        for (j, c) in combo.iter().enumerate() {
            for p in c.iter() {
                pts.push(intrinsic_point(k, j, p));
            }
        }
        if !oracle.contains(&pts) {
            return None;
        }
    }
    // Every reflected carrier must still cross the sign hypersurface.
    let mut chains: Vec<CiBlockChain> = Vec::with_capacity(k);
    for (narrow, dual) in &blocks_data {
        let mut cells: Vec<NarrowCell> = Vec::with_capacity(narrow.len());
        for carrier in narrow {
            match NarrowCell::from_points(carrier.iter().cloned()) {
                Ok(c) => cells.push(c),
                Err(_) => return None,
            }
        }
        chains.push(CiBlockChain {
            narrow: cells,
            dual: dual.clone(),
        });
    }
    let candidate = CiWitness {
        decomposition: decomp.to_vec(),
        blocks: chains,
        sign,
    };
    if !verify_ci_witness(&candidate) {
        return None;
    }
    Some(candidate)
}

/// Witness cycles of the piecewise-linear complete intersection modeled on
/// the layered Cayley triangulation with alternating signs.  For every
/// composition of the dimension into `k` positive parts and every tuple of
/// per-block cycles, orthant copies of the blocks are searched until the
/// joined data is carried by the symmetric extension with a uniform dual
/// sign; the number of witnesses is the product of the per-block counts.
pub fn ci_narrow_cycles(d: usize, k: usize, sizes: &[i64]) -> Result<Vec<CiWitness>> {
    check_join_preconditions(d, k, sizes, d as i64 + 1)?;
    let raw = cayley_layered_cells(d, k, sizes)?;
    let oracle = FaceOracle::build(&raw.points, &raw.cells, k, d);
    let mut out: Vec<CiWitness> = Vec::new();
    for decomp in compositions(d, k, 1) {
        let mut offsets = vec![0usize; k];
        let mut acc = 0usize;
        for j in 0..k {
            offsets[j] = acc;
            acc += decomp[j];
        }
        let mut block_witnesses: Vec<Vec<CycleWitness>> = Vec::with_capacity(k);
        for j in 0..k {
            block_witnesses.push(narrow_cycles(decomp[j], sizes[j])?);
        }
        let support: Vec<Vec<usize>> = (0..k)
            .map(|j| {
                let a = offsets[j];
                let i = decomp[j];
                if a == 0 {
                    (0..i).collect()
                } else {
                    (a - 1..a + i).collect()
                }
            })
            .collect();
        let subsets: Vec<Vec<Vec<usize>>> =
            support.iter().map(|axes| axis_subsets(axes)).collect();
        for tuple in block_witnesses
            .iter()
            .map(|ws| ws.iter())
            .multi_cartesian_product()
        {
            let embedded: Vec<EmbeddedBlock> = tuple
                .iter()
                .enumerate()
                .map(|(j, w)| embed_block(w, offsets[j], sizes[j], d))
                .collect();
            let mut found = None;
            for combo in subsets.iter().map(|s| s.iter()).multi_cartesian_product() {
                if let Some(w) = try_copy(&embedded, &combo, &oracle, k, &decomp) {
                    found = Some(w);
                    break;
                }
            }
            match found {
                Some(w) => out.push(w),
                None => {
                    return Err(Error::SearchFailed(format!(
                        "no compatible orthant copies join the block cycles for composition {decomp:?}"
                    )))
                }
            }
        }
    }
    Ok(out)
}

/// Lower bound for the number of connected components of the modeled
/// complete intersection: over all compositions `d = i_1 + ... + i_k` with
/// positive parts, the product of `(m_j - 2)(m_j - 3) ... (m_j - i_j - 1)`.
pub fn ci_betti_lower_bound(d: usize, k: usize, sizes: &[i64]) -> Result<Int> {
    if d == 0 || k == 0 || k > d {
        return Err(Error::Unsupported(format!(
            "the bound needs 1 <= k <= d, got k = {k}, d = {d}"
        )));
    }
    if sizes.len() != k {
        return Err(Error::InvalidInput(format!(
            "expected {k} sizes, got {}",
            sizes.len()
        )));
    }
    let mut total = Int::zero();
    for decomp in compositions(d, k, 1) {
        let mut prod = Int::one();
        for (j, &i) in decomp.iter().enumerate() {
            for t in 2..=(i as i64 + 1) {
                prod *= int((sizes[j] - t).max(0));
            }
        }
        total += prod;
    }
    Ok(total)
}

// ---------------------------------------------------------------------------
// Asymptotic gluing
// ---------------------------------------------------------------------------

/// Asymptotic patchwork data for a complete intersection over a scaled
/// coarse triangulation, produced by [`ci_asymptotic_data`].
#[derive(Clone, Debug)]
pub struct CiAsymptotic {
    pub cayley: CayleyPolytope,
    /// Convex triangulation of the Cayley polytope of the scaled copies,
    /// containing a transported layered Cayley model in every coarse cell.
    pub triangulation: Triangulation,
    pub signs: Vec<i8>,
}

const PERTURB_WEIGHTS: [i64; 8] = [2, 3, 5, 7, 11, 13, 17, 19];

/// Tie-breaker for transported interior points.  The polynomial part is
/// at least one and bounded by `scale`, and the whole term is multiplied
/// by `scale^block`, so two points of different sheets always receive
/// different values: sheets at equal base positions are separated at
/// every perturbation strength, even at the patch corner where a bare
/// quadratic would vanish.
fn perturb_term(block: usize, w: &[Int], dim: usize, scale: &Int) -> Rat {
    let mut v = Int::one();
    for (i, c) in w.iter().enumerate() {
        v += c * c * int(PERTURB_WEIGHTS[i % PERTURB_WEIGHTS.len()]);
        v += c * int(PERTURB_WEIGHTS[(dim + i) % PERTURB_WEIGHTS.len()]);
    }
    for _ in 0..block {
        v = &v * scale;
    }
    Rat::from_integer(v)
}

const CORNER_WEIGHTS: [i64; 12] = [23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71];

/// Block-dependent quadratic used to break ties between corner points so
/// that shared boundary pieces are triangulated consistently.
fn corner_quad(block: usize, q: &[Int], dim: usize) -> Rat {
    let mut v = Int::zero();
    for (i, c) in q.iter().enumerate() {
        v += c * c * int(CORNER_WEIGHTS[(block * dim + i) % CORNER_WEIGHTS.len()]);
    }
    Rat::from_integer(v)
}

/// Cross-block shear added to corner heights.  When two sheets carry
/// corners at equal base positions (equal dilation factors), every
/// square wall between them has an affine dependence that the quadratic
/// weights alone may fail to break.  A bilinear term
/// `block * M * sum_i G^(i+1) q_i` with `G` larger than twice any
/// coordinate in play and `M` larger than any quadratic-weight
/// contribution makes the dependence sum nonzero for every such wall:
/// the geometric weights cannot cancel across distinct corner pairs,
/// and `M` keeps the quadratic part from cancelling the shear.
fn corner_shear(block: usize, q: &[Int], g: &Int, m: &Int) -> Rat {
    let mut v = Int::zero();
    let mut pw = Int::one();
    for c in q.iter() {
        pw = &pw * g;
        v += c * &pw;
    }
    Rat::from_integer(v * m * int(block as i64))
}

#[allow(clippy::too_many_arguments)]
fn glue_ci_attempt(
    coarse: &Triangulation,
    coarse_lift: &[Rat],
    lambdas: &[i64],
    cp: &CayleyPolytope,
    big: &LatticePolytope,
    inner_pts: &IMat,
    inner_split: &[(usize, IVec)],
    inner_lift: &[Rat],
    inner_cells: &BTreeSet<Vec<usize>>,
    inner_signs: &[i8],
    d: usize,
    k: usize,
    apex: &Rat,
) -> Result<Option<CiAsymptotic>> {
    let n_in = inner_pts.len();
    // Shear parameters: a coordinate bound for the scaled corners, the
    // geometric base, and a factor dominating the quadratic weights.
    let mut qmax = Int::one();
    for p in &coarse.points {
        for (b, c) in lambdas.iter().map(|l| int(*l)).cartesian_product(p.iter()) {
            let m = (b * c).abs();
            if m > qmax {
                qmax = m;
            }
        }
    }
    let shear_g: Int = int(2) * &qmax + int(2);
    let shear_m: Int = Int::one()
        + int(d as i64) * int(*CORNER_WEIGHTS.iter().max().expect("nonempty")) * &qmax * &qmax;
    // Strict upper bound on the polynomial part of the interior
    // tie-breaker, used to separate the sheets by scale.
    let mut wmax = Int::one();
    for (_, w) in inner_split {
        for c in w.iter() {
            let a = c.abs();
            if a > wmax {
                wmax = a;
            }
        }
    }
    let pmax = int(*PERTURB_WEIGHTS.iter().max().expect("nonempty"));
    let perturb_scale: Int = Int::one() + int(2) * int(d as i64) * &pmax * (&wmax * &wmax + &wmax);
    let mut registry: BTreeMap<IVec, usize> = BTreeMap::new();
    let mut points: IMat = Vec::new();
    let mut nu_coarse: Vec<Rat> = Vec::new();
    let mut nu_fine: Vec<Rat> = Vec::new();
    let mut signs: Vec<i8> = Vec::new();
    let mut cells: Vec<Vec<usize>> = Vec::new();
    for simplex in &coarse.simplices {
        let verts: Vec<&IVec> = simplex.iter().map(|&i| &coarse.points[i]).collect();
        // Affine coefficients of the coarse lifting on this cell.
        let mut rows: QMat = Vec::with_capacity(d + 1);
        let mut rhs: QVec = Vec::with_capacity(d + 1);
        for (t, v) in verts.iter().enumerate() {
            let mut row = to_rat_vec(v);
            row.push(Rat::one());
            rows.push(row);
            rhs.push(coarse_lift[simplex[t]].clone());
        }
        let coeffs = solve_rational(&rows, &rhs)
            .ok_or_else(|| Error::InvalidTriangulation("a coarse cell is degenerate".into()))?;
        let v0 = verts[0];
        let edges: Vec<IVec> = verts[1..].iter().map(|v| sub_int(v, v0)).collect();
        // Transported model points (one unit inset from the corner of the
        // scaled cell), then the scaled corners of every block.
        let mut cell_points: IMat = Vec::with_capacity(n_in + k * (d + 1));
        for (b, w) in inner_split.iter() {
            let mut img: IVec = v0.iter().map(|c| c * int(lambdas[*b])).collect();
            for e in &edges {
                for (s, c) in e.iter().enumerate() {
                    img[s] += c;
                }
            }
            for (i, wi) in w.iter().enumerate() {
                for (s, c) in edges[i].iter().enumerate() {
                    img[s] += wi * c;
                }
            }
            cell_points.push(intrinsic_point(k, *b, &img));
        }
        let mut corner_heights: Vec<Rat> = Vec::with_capacity(k * (d + 1));
        for b in 0..k {
            for v in &verts {
                let q: IVec = v.iter().map(|c| c * int(lambdas[b])).collect();
                corner_heights
                    .push(apex.clone() + corner_quad(b, &q, d) + corner_shear(b, &q, &shear_g, &shear_m));
                cell_points.push(intrinsic_point(k, b, &q));
            }
        }
        // Search a perturbation of the transported heights whose lower
        // hull is simplicial and reproduces the model in the interior.
        let mut accepted: Option<(Vec<Rat>, Vec<Vec<usize>>)> = None;
        let mut eta = Rat::zero();
        for round in 0..50 {
            let mut heights: Vec<Rat> = Vec::with_capacity(cell_points.len());
            for i in 0..n_in {
                let (b, w) = &inner_split[i];
                heights.push(
                    inner_lift[i].clone() + eta.clone() * perturb_term(*b, w, d, &perturb_scale),
                );
            }
            heights.extend(corner_heights.iter().cloned());
            let hull = lower_hull_cells(&cell_points, &heights)?;
            let ok_sizes = hull.iter().all(|c| c.len() == k + d);
            if ok_sizes {
                let inner_found: BTreeSet<Vec<usize>> = hull
                    .iter()
                    .filter(|c| c.iter().all(|&i| i < n_in))
                    .map(|c| {
                        let mut s = c.clone();
                        s.sort_unstable();
                        s
                    })
                    .collect();
                if &inner_found == inner_cells {
                    accepted = Some((heights, hull));
                    break;
                }
            }
            eta = if round == 0 { Rat::one() } else { eta / rat_int(2) };
        }
        let (heights, hull) = match accepted {
            Some(a) => a,
            None => return Ok(None), // retry with a larger apex
        };
        let mut local_to_global: Vec<usize> = Vec::with_capacity(cell_points.len());
        for (li, pt) in cell_points.iter().enumerate() {
            let gi = match registry.get(pt) {
                Some(&g) => g,
                None => {
                    let g = points.len();
                    registry.insert(pt.clone(), g);
                    points.push(pt.clone());
                    let (b, q) = split_intrinsic(k, d, pt)?;
                    let mut cv = rat_int(lambdas[b]) * coeffs[d].clone();
                    for (s, a) in coeffs[..d].iter().enumerate() {
                        cv = cv + a.clone() * Rat::from_integer(q[s].clone());
                    }
                    nu_coarse.push(cv);
                    nu_fine.push(heights[li].clone());
                    signs.push(if li < n_in {
                        inner_signs[li]
                    } else {
                        extended_parity_sign(&q)
                    });
                    g
                }
            };
            local_to_global.push(gi);
        }
        for c in &hull {
            let mut gc: Vec<usize> = c.iter().map(|&i| local_to_global[i]).collect();
            gc.sort_unstable();
            cells.push(gc);
        }
    }
    let mut t = Triangulation {
        points,
        simplices: cells,
        lifting: None,
    };
    if !check_valid(&t, big) {
        return Err(Error::InvalidTriangulation(
            "the glued cells do not triangulate the Cayley polytope of the scaled factors".into(),
        ));
    }
    let mut eps = Rat::one();
    for _ in 0..60 {
        let lifting: Vec<Rat> = nu_coarse
            .iter()
            .zip(nu_fine.iter())
            .map(|(c, f)| c.clone() + eps.clone() * f.clone())
            .collect();
        t.lifting = Some(lifting);
        if check_convexity(&t)? {
            return Ok(Some(CiAsymptotic {
                cayley: cp.clone(),
                triangulation: t,
                signs,
            }));
        }
        eps = eps / rat_int(2);
    }
    Err(Error::SearchFailed(
        "no combination of the coarse and fine liftings became convex".into(),
    ))
}

/// Glue a transported copy of the layered Cayley model (of sizes
/// `lambda_j - d - 1`) into every cell of a primitive convex coarse
/// triangulation, scaled by `lambda_j` per block, and certify the result
/// as one convex triangulation of the Cayley polytope of the scaled
/// copies.  Every scale must be at least `d + 2`.
pub fn ci_asymptotic_data(
    base: &LatticePolytope,
    coarse: &Triangulation,
    lambdas: &[i64],
) -> Result<CiAsymptotic> {
    let d = base.ambient_dim();
    if d == 0 || base.dim() != d {
        return Err(Error::InvalidPolytope(
            "the base polytope must be full-dimensional".into(),
        ));
    }
    let k = lambdas.len();
    if k == 0 || k > d {
        return Err(Error::Unsupported(format!(
            "the construction needs between 1 and {d} scales, got {k}"
        )));
    }
    for &l in lambdas {
        if l < d as i64 + 2 {
            return Err(Error::Unsupported(format!(
                "scale {l} is too small: every scale must be at least {}",
                d + 2
            )));
        }
    }
    if coarse.lifting.is_none() {
        return Err(Error::InvalidInput(
            "the coarse triangulation must carry lifting values".into(),
        ));
    }
    if !check_convexity(coarse)? {
        return Err(Error::NotConvex(
            "the coarse lifting does not certify its triangulation".into(),
        ));
    }
    validate_triangulation(coarse, base).map_err(Error::InvalidTriangulation)?;
    if !is_primitive(coarse) {
        return Err(Error::InvalidInput(
            "the coarse triangulation must be primitive".into(),
        ));
    }
    let coarse_lift = coarse.lifting.as_ref().unwrap();
    let mu: Vec<i64> = lambdas.iter().map(|&l| l - d as i64 - 1).collect();
    let inner = cayley_layered_triangulation(d, k, &mu)?;
    let inner_pts = &inner.triangulation.points;
    let inner_lift: Vec<Rat> = inner.triangulation.lifting.clone().unwrap();
    let inner_cells: BTreeSet<Vec<usize>> = inner
        .triangulation
        .simplices
        .iter()
        .map(|s| {
            let mut c = s.clone();
            c.sort_unstable();
            c
        })
        .collect();
    let inner_split: Vec<(usize, IVec)> = inner_pts
        .iter()
        .map(|p| split_intrinsic(k, d, p))
        .collect::<Result<_>>()?;
    let factors: Vec<LatticePolytope> = lambdas.iter().map(|&l| base.dilate(&int(l))).collect();
    let cp = cayley_polytope(&factors)?;
    let big = cp.intrinsic_polytope()?;
    let max_inner = inner_lift.iter().fold(Rat::zero(), |a, h| {
        let b = h.abs();
        if b > a {
            b
        } else {
            a
        }
    });
    let lam_max = *lambdas.iter().max().unwrap();
    let mut apex = rat_int(1) + rat_int((d as i64 + 1) * lam_max) * max_inner;
    for _attempt in 0..40 {
        if let Some(result) = glue_ci_attempt(
            coarse,
            coarse_lift,
            lambdas,
            &cp,
            &big,
            inner_pts,
            &inner_split,
            &inner_lift,
            &inner_cells,
            &inner.signs,
            d,
            k,
            &apex,
        )? {
            return Ok(result);
        }
        apex = apex * rat_int(2);
    }
    Err(Error::SearchFailed(
        "no corner height completed the transported models to a triangulation".into(),
    ))
}

// ---------------------------------------------------------------------------
// Scaled curve pairs in the plane
// ---------------------------------------------------------------------------

/// A scaled pair of plane curve data sets with a joint convex Cayley
/// triangulation, produced by [`ci_dilate_pair_2d`].
#[derive(Clone, Debug)]
pub struct CiCurveData {
    pub cayley: CayleyPolytope,
    /// Convex primitive triangulation of the Cayley polytope whose sheets
    /// reproduce the two refinements.
    pub triangulation: Triangulation,
    /// The two sheet data sets (triangulation, lifting, alternating signs).
    pub factors: Vec<CiFactor>,
}

struct SheetData {
    points: IMat,
    simplices: Vec<Vec<usize>>,
    coarse_vals: Vec<Rat>,
    lifting: Vec<Rat>,
}

/// A primitive convex refinement of the `l`-fold dilation of a coarse
/// primitive triangulation, certified by a dominated coarse part plus a
/// generic quadratic.
fn scaled_refinement(
    base: &LatticePolytope,
    coarse: &Triangulation,
    l: i64,
) -> Result<SheetData> {
    let scaled = base.dilate(&int(l));
    let points = scaled.lattice_points();
    let lq = rat_int(l);
    let mut coarse_vals: Vec<Rat> = Vec::with_capacity(points.len());
    for p in &points {
        let q: QVec = p
            .iter()
            .map(|c| Rat::from_integer(c.clone()) / lq.clone())
            .collect();
        coarse_vals.push(lq.clone() * pl_eval(coarse, &q)?);
    }
    let scaled_cells: Vec<LatticePolytope> = coarse
        .simplices
        .iter()
        .map(|s| {
            let verts: IMat = s
                .iter()
                .map(|&i| coarse.points[i].iter().map(|c| c * int(l)).collect())
                .collect();
            convex_hull(&verts)
        })
        .collect::<Result<_>>()?;
    let quad: Vec<Rat> = points
        .iter()
        .map(|p| {
            Rat::from_integer(int(2) * (&p[0] * &p[0]) + int(3) * (&p[1] * &p[1]) + &p[0] * &p[1])
        })
        .collect();
    let mut m = Int::one();
    for _ in 0..40 {
        let lifting: Vec<Rat> = coarse_vals
            .iter()
            .zip(quad.iter())
            .map(|(c, q)| Rat::from_integer(m.clone()) * c.clone() + q.clone())
            .collect();
        let sub = regular_subdivision(&points, &lifting)?;
        let simplicial = sub.cells.iter().all(|c| c.len() == 3);
        let refines = simplicial
            && sub.cells.iter().all(|cell| {
                scaled_cells
                    .iter()
                    .any(|sc| cell.iter().all(|&i| sc.contains(&points[i])))
            });
        if refines {
            let t = Triangulation {
                points: points.clone(),
                simplices: sub.cells.clone(),
                lifting: Some(lifting.clone()),
            };
            validate_triangulation(&t, &scaled).map_err(Error::InvalidTriangulation)?;
            if !check_convexity(&t)? {
                return Err(Error::NotConvex(
                    "a refinement certificate failed to certify itself".into(),
                ));
            }
            if !is_primitive(&t) {
                return Err(Error::SearchFailed(
                    "the quadratic refinement is not primitive".into(),
                ));
            }
            return Ok(SheetData {
                points,
                simplices: sub.cells,
                coarse_vals,
                lifting,
            });
        }
        m *= Int::from(2u32);
    }
    Err(Error::SearchFailed(
        "could not dominate the scaled coarse lifting".into(),
    ))
}

fn tilt_candidates() -> Vec<(Rat, Rat)> {
    vec![
        (rat_int(1), crate::rat(1, 2)),
        (rat_int(1), crate::rat(1, 3)),
        (rat_int(1), crate::rat(1, 5)),
        (rat_int(1), crate::rat(1, 7)),
        (rat_int(2), crate::rat(1, 3)),
        (rat_int(3), crate::rat(1, 2)),
    ]
}

fn try_pair_hull(
    cp: &CayleyPolytope,
    big: &LatticePolytope,
    points: &IMat,
    heights: &[Rat],
    sheets: &[SheetData],
    offsets: &[usize; 2],
) -> Option<CiCurveData> {
    let cells = lower_hull_cells(points, heights).ok()?;
    if !cells.iter().all(|c| c.len() == 4) {
        return None;
    }
    let t = Triangulation {
        points: points.clone(),
        simplices: cells,
        lifting: Some(heights.to_vec()),
    };
    if !check_valid(&t, big) {
        return None;
    }
    if !is_primitive(&t) {
        return None;
    }
    if !check_convexity(&t).ok()? {
        return None;
    }
    // Every sheet refinement must reappear among the faces of the cells.
    let mut faces: BTreeSet<Vec<usize>> = BTreeSet::new();
    for cell in &t.simplices {
        let n = cell.len();
        for sub in 1u32..(1 << n) {
            let mut f: Vec<usize> = (0..n)
                .filter(|&i| sub & (1 << i) != 0)
                .map(|i| cell[i])
                .collect();
            f.sort_unstable();
            faces.insert(f);
        }
    }
    for (b, sheet) in sheets.iter().enumerate() {
        for s in &sheet.simplices {
            let mut f: Vec<usize> = s.iter().map(|&i| offsets[b] + i).collect();
            f.sort_unstable();
            if !faces.contains(&f) {
                return None;
            }
        }
    }
    let factors: Vec<CiFactor> = sheets
        .iter()
        .enumerate()
        .map(|(b, sheet)| {
            let lifting: Vec<Rat> = (0..sheet.points.len())
                .map(|i| heights[offsets[b] + i].clone())
                .collect();
            CiFactor {
                triangulation: Triangulation {
                    points: sheet.points.clone(),
                    simplices: sheet.simplices.clone(),
                    lifting: Some(lifting),
                },
                signs: parity_signs(&sheet.points),
            }
        })
        .collect();
    for f in &factors {
        match check_convexity(&f.triangulation) {
            Ok(true) => {}
            _ => return None,
        }
    }
    Some(CiCurveData {
        cayley: cp.clone(),
        triangulation: t,
        factors,
    })
}

/// Scale a polygon's primitive convex triangulation by two factors, refine
/// both copies primitively, and lift them into one convex primitive
/// triangulation of their Cayley polytope; the second sheet is tilted so
/// that every scaled cell splits into two cones and a join of two edges.
/// The returned factors feed [`sturmfels_ci`], which then finds exactly
/// `l1 * l2 * vol(base)` intersection points for *any* sign choice.
pub fn ci_dilate_pair_2d(base: &LatticePolytope, l1: i64, l2: i64) -> Result<CiCurveData> {
    if base.ambient_dim() != 2 || base.dim() != 2 {
        return Err(Error::Unsupported(
            "the base polytope must be a full-dimensional polygon".into(),
        ));
    }
    if l1 < 1 || l2 < 1 {
        return Err(Error::InvalidInput(
            "both scale factors must be at least 1".into(),
        ));
    }
    let coarse = primitive_convex_2d(base)?;
    let lambdas = [l1, l2];
    let mut sheets: Vec<SheetData> = Vec::with_capacity(2);
    for &l in &lambdas {
        sheets.push(scaled_refinement(base, &coarse, l)?);
    }
    let factors: Vec<LatticePolytope> = lambdas.iter().map(|&l| base.dilate(&int(l))).collect();
    let cp = cayley_polytope(&factors)?;
    let big = cp.intrinsic_polytope()?;
    let mut points: IMat = Vec::new();
    for (b, sheet) in sheets.iter().enumerate() {
        for p in &sheet.points {
            points.push(intrinsic_point(2, b, p));
        }
    }
    let offsets = [0usize, sheets[0].points.len()];
    for (c1, c2) in tilt_candidates() {
        let mut e = Rat::one();
        for _ in 0..60 {
            let eps1 = e.clone();
            let eps2 = e.clone() * e.clone();
            let mut heights: Vec<Rat> = Vec::with_capacity(points.len());
            for (b, sheet) in sheets.iter().enumerate() {
                for (i, p) in sheet.points.iter().enumerate() {
                    let mut h =
                        sheet.coarse_vals[i].clone() + eps2.clone() * sheet.lifting[i].clone();
                    if b == 1 {
                        let tilt = c1.clone() * Rat::from_integer(p[1].clone())
                            + c2.clone() * Rat::from_integer(p[0].clone());
                        h = h + eps1.clone() * tilt;
                    }
                    heights.push(h);
                }
            }
            if let Some(data) = try_pair_hull(&cp, &big, &points, &heights, &sheets, &offsets) {
                return Ok(data);
            }
            e = e / rat_int(2);
        }
    }
    Err(Error::SearchFailed(
        "no tilt produced a primitive convex Cayley triangulation of the scaled pair".into(),
    ))
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::mixed_volume;
    use crate::rat;

    fn ipt(coords: &[i64]) -> IVec {
        coords.iter().map(|&c| int(c)).collect()
    }

    fn imat(rows: &[&[i64]]) -> IMat {
        rows.iter().map(|r| ipt(r)).collect()
    }

    fn segment(a: i64, b: i64) -> LatticePolytope {
        convex_hull(&imat(&[&[a], &[b]])).unwrap()
    }

    fn triangle() -> LatticePolytope {
        standard_simplex(2, 1).unwrap()
    }

    fn unit_square() -> LatticePolytope {
        convex_hull(&imat(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]])).unwrap()
    }

    fn sorted_point_cells(t: &Triangulation) -> BTreeSet<Vec<IVec>> {
        t.simplices
            .iter()
            .map(|s| {
                let mut c: Vec<IVec> = s.iter().map(|&i| t.points[i].clone()).collect();
                c.sort();
                c
            })
            .collect()
    }

    #[test]
    fn standard_simplex_basics() {
        let s = standard_simplex(3, 2).unwrap();
        assert_eq!(s.dim(), 3);
        assert_eq!(s.vertices().len(), 4);
        assert_eq!(s.lattice_volume(), int(8));
        assert!(standard_simplex(0, 1).is_err());
    }

    #[test]
    fn pl_eval_values() {
        let t = Triangulation {
            points: imat(&[&[0], &[1], &[2]]),
            simplices: vec![vec![0, 1], vec![1, 2]],
            lifting: Some(vec![rat_int(0), rat_int(0), rat_int(1)]),
        };
        assert_eq!(t.lifting.as_ref().unwrap().len(), 3);
        assert_eq!(pl_eval(&t, &vec![rat(1, 2)]).unwrap(), rat_int(0));
        assert_eq!(pl_eval(&t, &vec![rat(3, 2)]).unwrap(), rat(1, 2));
        assert!(pl_eval(&t, &vec![rat_int(3)]).is_err());
    }

    #[test]
    fn cayley_polytope_of_two_segments() {
        let cp = cayley_polytope(&[segment(0, 1), segment(0, 2)]).unwrap();
        assert_eq!(cp.k, 2);
        assert_eq!(cp.dim, 1);
        let mut verts = cp.polytope.vertices().clone();
        verts.sort();
        assert_eq!(
            verts,
            imat(&[&[0, 1, 0], &[0, 1, 2], &[1, 0, 0], &[1, 0, 1]])
        );
        assert_eq!(cp.polytope.dim(), 2);
        let intr = cp.intrinsic_polytope().unwrap();
        assert_eq!(intr.ambient_dim(), 2);
        assert_eq!(intr.dim(), 2);
        assert_eq!(intr.lattice_volume(), int(3));
    }

    #[test]
    fn cayley_polytope_rejects_bad_input() {
        assert!(cayley_polytope(&[]).is_err());
        assert!(cayley_polytope(&[segment(0, 1), triangle()]).is_err());
    }

    #[test]
    fn cayley_polytope_single_factor() {
        let cp = cayley_polytope(&[triangle()]).unwrap();
        assert_eq!(cp.k, 1);
        let intr = cp.intrinsic_polytope().unwrap();
        assert_eq!(intr.ambient_dim(), 2);
        assert_eq!(intr.lattice_volume(), triangle().lattice_volume());
    }

    #[test]
    fn cayley_polytope_of_triangles() {
        let cp = cayley_polytope(&[triangle(), triangle()]).unwrap();
        assert_eq!(cp.polytope.vertices().len(), 6);
        assert_eq!(cp.polytope.ambient_dim(), 4);
        assert_eq!(cp.polytope.dim(), 3);
        let p = cp.intrinsic_point(1, &ipt(&[1, 0]));
        assert_eq!(p, ipt(&[1, 1, 0]));
        let (b, base) = cp.split_intrinsic(&p).unwrap();
        assert_eq!(b, 1);
        assert_eq!(base, ipt(&[1, 0]));
        assert!(cp.split_intrinsic(&ipt(&[2, 0, 0])).is_err());
    }

    #[test]
    fn mixed_subdivision_of_pulled_segments() {
        let t1 = Triangulation {
            points: imat(&[&[0], &[1]]),
            simplices: vec![vec![0, 1]],
            lifting: Some(vec![rat_int(0), rat_int(0)]),
        };
        let t2 = Triangulation {
            points: imat(&[&[0], &[1], &[2]]),
            simplices: vec![vec![0, 1], vec![1, 2]],
            lifting: Some(vec![rat_int(0), rat_int(-1), rat_int(0)]),
        };
        let ms = mixed_subdivision(&[t1, t2]).unwrap();
        assert_eq!(ms.cells.len(), 3);
        let expected: Vec<Vec<IMat>> = vec![
            vec![imat(&[&[0]]), imat(&[&[0], &[1]])],
            vec![imat(&[&[0], &[1]]), imat(&[&[1]])],
            vec![imat(&[&[1]]), imat(&[&[1], &[2]])],
        ];
        let mut expected_sorted = expected;
        expected_sorted.sort();
        assert_eq!(ms.normal_form(), expected_sorted);
        assert_eq!(ms.total.lattice_volume(), int(3));
    }

    #[test]
    fn mixed_subdivision_rejects_nongeneric_tuple() {
        let flat = |_: ()| Triangulation {
            points: imat(&[&[0], &[1]]),
            simplices: vec![vec![0, 1]],
            lifting: Some(vec![rat_int(0), rat_int(0)]),
        };
        let err = mixed_subdivision(&[flat(()), flat(())]).unwrap_err();
        match err {
            Error::InvalidInput(msg) => assert!(msg.contains("non-generic"), "{msg}"),
            other => panic!("expected a non-generic rejection, got {other}"),
        }
    }

    #[test]
    fn mixed_subdivision_of_single_factor_is_the_triangulation() {
        let lay = layered_triangulation(2, 2).unwrap();
        let t = lay.triangulation.clone();
        let ms = mixed_subdivision(std::slice::from_ref(&t)).unwrap();
        assert_eq!(ms.cells.len(), t.simplices.len());
        let cells: BTreeSet<Vec<usize>> = ms
            .cells
            .iter()
            .map(|c| {
                c.parts[0]
                    .iter()
                    .map(|&i| {
                        t.points
                            .iter()
                            .position(|p| p == &ms.factor_points[0][i])
                            .unwrap()
                    })
                    .sorted()
                    .collect()
            })
            .collect();
        let expected: BTreeSet<Vec<usize>> = t
            .simplices
            .iter()
            .map(|s| s.iter().copied().sorted().collect())
            .collect();
        assert_eq!(cells, expected);
    }

    #[test]
    fn mixed_cells_volume_matches_mixed_volume() {
        let tri = triangle();
        let t1 = Triangulation {
            points: imat(&[&[0, 0], &[1, 0], &[0, 1]]),
            simplices: vec![vec![0, 1, 2]],
            lifting: Some(vec![rat_int(0), rat(1, 3), rat(1, 7)]),
        };
        let t2 = primitive_convex_2d(&unit_square()).unwrap();
        let ms = mixed_subdivision(&[t1, t2]).unwrap();
        let mv = mixed_volume(&[tri, unit_square()]).unwrap();
        assert_eq!(mv, int(2));
        assert_eq!(ms.mixed_cells_volume().unwrap(), mv);
    }

    /// Enumerate all triangulations of the Cayley polytope of two
    /// segments, compare with the mixed subdivisions reachable by lifting
    /// sweeps, and check the round trip.
    fn correspondence_case(
        len2: i64,
        expected_triangulations: usize,
    ) -> BTreeSet<Vec<Vec<IMat>>> {
        let cp = cayley_polytope(&[segment(0, 1), segment(0, len2)]).unwrap();
        let intrinsic = cp.intrinsic_polytope().unwrap();
        let mut pts: IMat = Vec::new();
        for x in 0..=1i64 {
            pts.push(ipt(&[0, x]));
        }
        for x in 0..=len2 {
            pts.push(ipt(&[1, x]));
        }
        let n = pts.len();
        let mut triangles: Vec<Vec<usize>> = Vec::new();
        let mut vols: Vec<Int> = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    let tp = vec![pts[a].clone(), pts[b].clone(), pts[c].clone()];
                    if affine_dim(&tp) == 2 {
                        triangles.push(vec![a, b, c]);
                        vols.push(crate::triangulation::simplex_volume(&tp));
                    }
                }
            }
        }
        let target = intrinsic.lattice_volume();
        let mut found: Vec<Triangulation> = Vec::new();
        for mask in 1u32..(1 << triangles.len()) {
            let mut vol = Int::zero();
            let mut simplices: Vec<Vec<usize>> = Vec::new();
            for (i, tri) in triangles.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    vol += vols[i].clone();
                    simplices.push(tri.clone());
                }
            }
            if vol != target {
                continue;
            }
            let t = Triangulation {
                points: pts.clone(),
                simplices,
                lifting: None,
            };
            if check_valid(&t, &intrinsic) {
                found.push(t);
            }
        }
        assert_eq!(found.len(), expected_triangulations);
        // Translate every triangulation and collect the normal forms.
        let mut enumerated: BTreeSet<Vec<Vec<IMat>>> = BTreeSet::new();
        for t in &found {
            let lifting = convexity_certificate(&t.points, &t.simplices).unwrap();
            let lifted = Triangulation {
                points: t.points.clone(),
                simplices: t.simplices.clone(),
                lifting: Some(lifting),
            };
            let ms = cayley_to_mixed(&cp, &lifted).unwrap();
            // Round trip: back to the Cayley side, same cells.
            let (cp2, t2) = mixed_to_cayley(&ms).unwrap();
            assert_eq!(cp2.k, cp.k);
            assert_eq!(sorted_point_cells(&t2), sorted_point_cells(&lifted));
            enumerated.insert(ms.normal_form());
        }
        assert_eq!(enumerated.len(), expected_triangulations);
        // Lifting sweeps must reach exactly the same set of subdivisions.
        let grid: Vec<Rat> = (-4..=4).map(|n| rat(n, 2)).collect();
        let mut sampled: BTreeSet<Vec<Vec<IMat>>> = BTreeSet::new();
        let pts2: IMat = (0..=len2).map(|x| ipt(&[x])).collect();
        for a in &grid {
            let t1 = Triangulation {
                points: imat(&[&[0], &[1]]),
                simplices: vec![vec![0, 1]],
                lifting: Some(vec![rat_int(0), a.clone()]),
            };
            for b in &grid {
                for c in &grid {
                    let mut nu = vec![rat_int(0)];
                    if len2 == 2 {
                        nu.push(b.clone());
                        nu.push(c.clone());
                    } else {
                        nu.push(b.clone());
                    }
                    let cells = match lower_hull_cells(&pts2, &nu) {
                        Ok(c) => c,
                        Err(_) => continue,
                    };
                    if cells.iter().any(|c| c.len() != 2) {
                        continue; // a flat piece: not a triangulation
                    }
                    let used: Vec<usize> = cells
                        .iter()
                        .flatten()
                        .copied()
                        .sorted()
                        .dedup()
                        .collect();
                    let reindex: BTreeMap<usize, usize> =
                        used.iter().enumerate().map(|(ni, &oi)| (oi, ni)).collect();
                    let t2 = Triangulation {
                        points: used.iter().map(|&i| pts2[i].clone()).collect(),
                        simplices: cells
                            .iter()
                            .map(|cell| cell.iter().map(|i| reindex[i]).collect())
                            .collect(),
                        lifting: Some(used.iter().map(|&i| nu[i].clone()).collect()),
                    };
                    match mixed_subdivision(&[t1.clone(), t2]) {
                        Ok(ms) => {
                            sampled.insert(ms.normal_form());
                        }
                        Err(Error::InvalidInput(_)) => {} // non-generic pair
                        Err(e) => panic!("unexpected error: {e}"),
                    }
                    if len2 != 2 {
                        break;
                    }
                }
            }
        }
        assert_eq!(sampled, enumerated);
        enumerated
    }

    #[test]
    fn cayley_correspondence_two_segments() {
        correspondence_case(2, 5);
    }

    #[test]
    fn cayley_correspondence_unit_segments() {
        correspondence_case(1, 2);
    }

    #[test]
    fn cayley_layered_smallest_cases() {
        let cl = cayley_layered_triangulation(2, 2, &[1, 1]).unwrap();
        assert_eq!(cl.triangulation.simplices.len(), 3);
        let decomps: BTreeSet<Vec<usize>> = cl.decompositions.iter().cloned().collect();
        let expected: BTreeSet<Vec<usize>> =
            [vec![2, 0], vec![1, 1], vec![0, 2]].into_iter().collect();
        assert_eq!(decomps, expected);
        assert!(is_primitive(&cl.triangulation));

        let single = cayley_layered_triangulation(1, 1, &[3]).unwrap();
        let lay = layered_triangulation(1, 3).unwrap();
        assert_eq!(
            sorted_point_cells(&single.triangulation),
            sorted_point_cells(&lay.triangulation)
        );
    }

    #[test]
    fn cayley_layered_cell_counts() {
        let cl = cayley_layered_triangulation(2, 2, &[3, 3]).unwrap();
        assert_eq!(cl.triangulation.simplices.len(), 27);
        assert!(is_primitive(&cl.triangulation));
        assert_eq!(cl.signs.len(), cl.triangulation.points.len());

        let cl32 = cayley_layered_triangulation(3, 2, &[2, 2]).unwrap();
        assert_eq!(cl32.triangulation.simplices.len(), 32);

        let cl33 = cayley_layered_triangulation(3, 3, &[2, 2, 2]).unwrap();
        assert_eq!(cl33.triangulation.simplices.len(), 80);
    }

    #[test]
    fn cayley_layered_rejects_bad_parameters() {
        assert!(cayley_layered_triangulation(2, 3, &[1, 1, 1]).is_err());
        assert!(cayley_layered_triangulation(2, 2, &[1]).is_err());
        assert!(cayley_layered_triangulation(2, 2, &[1, 0]).is_err());
    }

    #[test]
    fn ci_narrow_cycle_counts_in_the_plane() {
        let ws = ci_narrow_cycles(2, 2, &[5, 5]).unwrap();
        assert_eq!(ws.len(), 9);
        for w in &ws {
            assert_eq!(w.decomposition, vec![1, 1]);
            assert!(w.sign == 1 || w.sign == -1);
            assert!(verify_ci_witness(w));
        }
        assert_eq!(
            int(ws.len() as i64),
            ci_betti_lower_bound(2, 2, &[5, 5]).unwrap()
        );

        let ws47 = ci_narrow_cycles(2, 2, &[4, 7]).unwrap();
        assert_eq!(ws47.len(), 10);
        for w in &ws47 {
            assert!(verify_ci_witness(w));
        }
    }

    #[test]
    fn ci_narrow_cycles_single_equation_matches_hypersurface_count() {
        let ws = ci_narrow_cycles(2, 1, &[5]).unwrap();
        assert_eq!(ws.len(), narrow_cycles(2, 5).unwrap().len());
        assert_eq!(ws.len(), 6);
        for w in &ws {
            assert_eq!(w.decomposition, vec![2]);
            assert!(verify_ci_witness(w));
        }
    }

    #[test]
    fn ci_narrow_cycle_counts_in_space() {
        let ws = ci_narrow_cycles(3, 2, &[5, 5]).unwrap();
        assert_eq!(ws.len(), 36);
        for w in &ws {
            assert!(verify_ci_witness(w));
        }
        assert_eq!(
            int(ws.len() as i64),
            ci_betti_lower_bound(3, 2, &[5, 5]).unwrap()
        );

        let ws3 = ci_narrow_cycles(3, 3, &[4, 4, 4]).unwrap();
        assert_eq!(ws3.len(), 8);
        for w in &ws3 {
            assert_eq!(w.decomposition, vec![1, 1, 1]);
            assert!(verify_ci_witness(w));
        }
    }

    #[test]
    fn ci_bound_values() {
        assert_eq!(ci_betti_lower_bound(2, 2, &[5, 5]).unwrap(), int(9));
        assert_eq!(ci_betti_lower_bound(3, 2, &[5, 5]).unwrap(), int(36));
        assert_eq!(ci_betti_lower_bound(3, 1, &[6]).unwrap(), int(24));
        assert_eq!(ci_betti_lower_bound(2, 2, &[3, 3]).unwrap(), int(1));
        assert_eq!(ci_betti_lower_bound(2, 2, &[3, 4]).unwrap(), int(2));
        assert!(ci_betti_lower_bound(2, 3, &[3, 3, 3]).is_err());
    }

    #[test]
    fn ci_narrow_cycles_rejects_bad_parameters() {
        assert!(ci_narrow_cycles(2, 3, &[5, 5, 5]).is_err());
        assert!(ci_narrow_cycles(2, 2, &[5]).is_err());
        assert!(ci_narrow_cycles(2, 2, &[5, 2]).is_err());
    }

    #[test]
    fn ci_asymptotic_single_coarse_cell() {
        let base = triangle();
        let coarse = primitive_convex_2d(&base).unwrap();
        let res = ci_asymptotic_data(&base, &coarse, &[6, 6]).unwrap();
        assert_eq!(res.signs.len(), res.triangulation.points.len());
        // The transported layered Cayley model must appear among the cells.
        let inner = cayley_layered_triangulation(2, 2, &[3, 3]).unwrap();
        let cell_sets = sorted_point_cells(&res.triangulation);
        let s0 = &coarse.simplices[0];
        let v0 = &coarse.points[s0[0]];
        let edges: Vec<IVec> = s0[1..]
            .iter()
            .map(|&i| sub_int(&coarse.points[i], v0))
            .collect();
        for simplex in &inner.triangulation.simplices {
            let mut transported: Vec<IVec> = Vec::new();
            for &pi in simplex {
                let (b, w) = split_intrinsic(2, 2, &inner.triangulation.points[pi]).unwrap();
                let mut img: IVec = v0.iter().map(|c| c * int(6)).collect();
                for e in &edges {
                    for (s, c) in e.iter().enumerate() {
                        img[s] += c;
                    }
                }
                for (i, wi) in w.iter().enumerate() {
                    for (s, c) in edges[i].iter().enumerate() {
                        img[s] += wi * c;
                    }
                }
                transported.push(intrinsic_point(2, b, &img));
            }
            transported.sort();
            assert!(
                cell_sets.contains(&transported),
                "a transported model cell is missing from the glued triangulation"
            );
        }
        // Smallest admissible scales, and rejections below them.
        assert!(ci_asymptotic_data(&base, &coarse, &[4, 4]).is_ok());
        assert!(ci_asymptotic_data(&base, &coarse, &[4, 3]).is_err());
        assert!(ci_asymptotic_data(&base, &coarse, &[6, 6, 6]).is_err());
    }

    #[test]
    fn ci_asymptotic_glues_across_coarse_cells() {
        let base = standard_simplex(2, 2).unwrap();
        let coarse = primitive_convex_2d(&base).unwrap();
        assert_eq!(coarse.simplices.len(), 4);
        let res = ci_asymptotic_data(&base, &coarse, &[4, 5]).unwrap();
        assert!(check_convexity(&res.triangulation).unwrap());
        let inner = cayley_layered_triangulation(2, 2, &[1, 2]).unwrap();
        // One transported model per coarse cell.
        let inner_count = inner.triangulation.simplices.len() * coarse.simplices.len();
        assert!(res.triangulation.simplices.len() > inner_count);
    }

    #[test]
    fn curve_pair_intersection_counts() {
        for (base, l1, l2, expected) in [
            (triangle(), 1, 1, 1i64),
            (triangle(), 2, 2, 4),
            (triangle(), 1, 2, 2),
            (unit_square(), 1, 1, 2),
        ] {
            let data = ci_dilate_pair_2d(&base, l1, l2).unwrap();
            let model = sturmfels_ci(&data.factors).unwrap();
            assert_eq!(
                model.points.len() as i64,
                expected,
                "count for scales ({l1},{l2})"
            );
            assert_eq!(model.cells_by_dim, vec![expected as usize]);
            let mv = mixed_volume(&[base.dilate(&int(l1)), base.dilate(&int(l2))]).unwrap();
            assert_eq!(mv, int(expected));
            // The sliced Cayley triangulation and the summed liftings
            // produce the same mixed subdivision.
            let via_cayley = cayley_to_mixed(&data.cayley, &data.triangulation).unwrap();
            assert_eq!(via_cayley.normal_form(), model.subdivision.normal_form());
            assert_eq!(model.subdivision.mixed_cells_volume().unwrap(), mv);
        }
    }

    #[test]
    fn curve_pair_counts_do_not_depend_on_signs() {
        let data = ci_dilate_pair_2d(&triangle(), 2, 2).unwrap();
        let all_plus: Vec<CiFactor> = data
            .factors
            .iter()
            .map(|f| CiFactor {
                triangulation: f.triangulation.clone(),
                signs: vec![1; f.signs.len()],
            })
            .collect();
        let model = sturmfels_ci(&all_plus).unwrap();
        assert_eq!(model.points.len(), 4);
    }

    #[test]
    fn sturmfels_ci_rejects_bad_input() {
        let data = ci_dilate_pair_2d(&triangle(), 1, 1).unwrap();
        let mut bad = data.factors.clone();
        bad[0].signs.pop();
        assert!(sturmfels_ci(&bad).is_err());
        let mut bad2 = data.factors.clone();
        bad2[0].signs[0] = 0;
        assert!(sturmfels_ci(&bad2).is_err());
        assert!(sturmfels_ci(&[]).is_err());
    }
}
