//! Triangulations with lifting certificates: validity and convexity
//! checking, primitivity, regular subdivisions/triangulations from lower
//! hulls, a constructive primitive convex triangulation in 2D, and dilation.
//!
//! A triangulation stores its points in ambient coordinates.  Operations on
//! lower-dimensional polytopes reduce to intrinsic coordinates of the affine
//! span internally and map back, so indices are stable throughout.

use crate::error::{Error, Result};
use crate::hull::convex_hull_full_dim;
use crate::linalg::{
    det_bareiss, rank_int, sub_int, to_rat_vec, IMat, IVec, QMat, QVec,
};
use crate::lp::{exact_min, float_min, LpOutcome};
use crate::polytope::LatticePolytope;
use crate::{Int, Rat};
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::{BTreeMap, BTreeSet};

/// A triangulation of a polytope: points (ambient coordinates), top-level
/// simplices as index tuples, and an optional lifting certificate.
#[derive(Clone, Debug, PartialEq)]
pub struct Triangulation {
    pub points: IMat,
    pub simplices: Vec<Vec<usize>>,
    pub lifting: Option<Vec<Rat>>,
}

/// A polyhedral subdivision induced by a lifting: cells may be
/// non-simplicial; each cell lists *all* points lying on its lower face.
#[derive(Clone, Debug, PartialEq)]
pub struct Subdivision {
    pub points: IMat,
    pub cells: Vec<Vec<usize>>,
    pub lifting: Vec<Rat>,
}

/// Cells of the lower hull of the lifted point set `(p_i, h_i)`.
/// Points must be pairwise distinct and affinely span their space `R^D`.
/// Each returned cell is the sorted list of indices lying on one lower
/// facet; a completely affine lifting yields a single cell.
pub fn lower_hull_cells(points: &IMat, heights: &[Rat]) -> Result<Vec<Vec<usize>>> {
    let n = points.len();
    if n == 0 {
        return Err(Error::InvalidInput("no points".into()));
    }
    let dim = points[0].len();
    debug_assert_eq!(heights.len(), n);
    // Clear denominators: scaling all heights by a positive constant does
    // not change the lower hull.
    let mut denom = Int::one();
    for h in heights {
        denom = num_integer::lcm(denom, h.denom().clone());
    }
    let lifted: IMat = points
        .iter()
        .zip(heights)
        .map(|(p, h)| {
            let mut row = p.clone();
            let scaled = h * Rat::from_integer(denom.clone());
            debug_assert!(scaled.is_integer());
            row.push(scaled.to_integer());
            row
        })
        .collect();
    let diffs: IMat = lifted[1..].iter().map(|p| sub_int(p, &lifted[0])).collect();
    let rank = rank_int(&diffs);
    if rank < dim {
        return Err(Error::InvalidInput(
            "points do not affinely span their coordinate space".into(),
        ));
    }
    if rank == dim {
        // Affine lifting: the trivial subdivision.
        return Ok(vec![(0..n).collect()]);
    }
    let hull = convex_hull_full_dim(&lifted, dim + 1)?;
    let mut cells = BTreeSet::new();
    for f in &hull.facets {
        if f.normal[dim].is_positive() {
            let cell: Vec<usize> = (0..n)
                .filter(|&i| {
                    (crate::linalg::dot_int(&f.normal, &lifted[i]) + &f.offset).is_zero()
                })
                .collect();
            cells.insert(cell);
        }
    }
    Ok(cells.into_iter().collect())
}

/// The regular subdivision of the hull of `points` induced by `lifting`.
/// Points must affinely span their coordinate space.
pub fn regular_subdivision(points: &IMat, lifting: &[Rat]) -> Result<Subdivision> {
    if points.len() != lifting.len() {
        return Err(Error::InvalidInput(
            "lifting length differs from point count".into(),
        ));
    }
    let distinct: BTreeSet<&IVec> = points.iter().collect();
    if distinct.len() != points.len() {
        return Err(Error::InvalidInput("duplicate points".into()));
    }
    let cells = lower_hull_cells(points, lifting)?;
    Ok(Subdivision {
        points: points.clone(),
        cells,
        lifting: lifting.to_vec(),
    })
}

/// Deterministically refine a subdivision into a triangulation without
/// dropping any point: non-simplicial cells are first subdivided
/// Delaunay-style (squared-norm lifting keeps every point since all lifted
/// points are extreme), and remaining co-spherical flat cells are resolved
/// by lexicographic pulling (their points are in convex position, so pulling
/// keeps them all).
pub fn refine_subdivision(sub: &Subdivision) -> Result<Vec<Vec<usize>>> {
    let dim = if sub.points.is_empty() { 0 } else { sub.points[0].len() };
    let mut simplices: BTreeSet<Vec<usize>> = BTreeSet::new();
    for cell in &sub.cells {
        if cell.len() == dim + 1 {
            simplices.insert(cell.clone());
            continue;
        }
        let cell_pts: IMat = cell.iter().map(|&i| sub.points[i].clone()).collect();
        let parab: Vec<Rat> = cell_pts
            .iter()
            .map(|p| Rat::from_integer(p.iter().map(|c| c * c).sum()))
            .collect();
        let subcells = lower_hull_cells(&cell_pts, &parab)?;
        for sc in subcells {
            if sc.len() == dim + 1 {
                simplices.insert(sc.iter().map(|&j| cell[j]).collect());
            } else {
                let sc_pts: IMat = sc.iter().map(|&j| cell_pts[j].clone()).collect();
                for tri in pulling_triangulation(&sc_pts)? {
                    let mut global: Vec<usize> =
                        tri.iter().map(|&k| cell[sc[k]]).collect();
                    global.sort_unstable();
                    simplices.insert(global);
                }
            }
        }
    }
    Ok(simplices.into_iter().collect())
}

/// Pulling triangulation of a point set in convex position: cone the
/// lexicographically smallest point over the recursively pulled facets that
/// do not contain it.  Returns simplices as indices into `points`.
fn pulling_triangulation(points: &IMat) -> Result<Vec<Vec<usize>>> {
    let n = points.len();
    let ambient = points[0].len();
    let poly = LatticePolytope::from_points(ambient, points)?;
    if poly.vertices().len() != n {
        return Err(Error::InvalidInput(
            "pulling requires points in convex position".into(),
        ));
    }
    let dim = poly.dim();
    if n == dim + 1 {
        return Ok(vec![(0..n).collect()]);
    }
    // Map coordinates to local indices (points are distinct).
    let index: BTreeMap<&IVec, usize> = points.iter().zip(0..).collect();
    // Vertices of `poly` are lex-sorted, so vertex 0 is the lex-min point.
    let apex_coords = poly.vertices()[0].clone();
    let apex = index[&apex_coords];
    let mut out = Vec::new();
    for f in poly.facets() {
        if f.vertex_indices.iter().any(|&v| poly.vertices()[v] == apex_coords) {
            continue;
        }
        let fpts: IMat = f
            .vertex_indices
            .iter()
            .map(|&v| poly.vertices()[v].clone())
            .collect();
        for tri in pulling_triangulation(&fpts)? {
            let mut simplex: Vec<usize> = tri.iter().map(|&k| index[&fpts[k]]).collect();
            simplex.push(apex);
            simplex.sort_unstable();
            out.push(simplex);
        }
    }
    Ok(out)
}

/// Regular triangulation of `P` from a lifting on chosen lattice points
/// (which must include every vertex of `P`): the lower-hull subdivision,
/// with non-simplicial cells refined deterministically.  The returned
/// lifting certifies the *unrefined* subdivision.
pub fn regular_triangulation(
    p: &LatticePolytope,
    points: &IMat,
    lifting: &[Rat],
) -> Result<Triangulation> {
    for v in p.vertices() {
        if !points.contains(v) {
            return Err(Error::InvalidInput(format!(
                "lifting missing on vertex {v:?} of the polytope"
            )));
        }
    }
    for pt in points {
        if !p.contains(pt) {
            return Err(Error::InvalidInput(format!(
                "point {pt:?} lies outside the polytope"
            )));
        }
    }
    let work: IMat = if p.is_full_dimensional() {
        points.clone()
    } else {
        points
            .iter()
            .map(|pt| p.to_intrinsic(pt).expect("point of P lies on its affine hull"))
            .collect()
    };
    let sub = regular_subdivision(&work, lifting)?;
    let simplices = refine_subdivision(&sub)?;
    Ok(Triangulation {
        points: points.clone(),
        simplices,
        lifting: Some(lifting.to_vec()),
    })
}

/// The regular subdivision of `P` (cells, not refined), in ambient indices.
pub fn regular_subdivision_of(
    p: &LatticePolytope,
    points: &IMat,
    lifting: &[Rat],
) -> Result<Subdivision> {
    let work: IMat = if p.is_full_dimensional() {
        points.clone()
    } else {
        points
            .iter()
            .map(|pt| p.to_intrinsic(pt).expect("point of P lies on its affine hull"))
            .collect()
    };
    let mut sub = regular_subdivision(&work, lifting)?;
    sub.points = points.clone();
    Ok(sub)
}

/// Normalized volume of the simplex on the given vertices (with respect to
/// the induced lattice of its span).
pub fn simplex_volume(verts: &IMat) -> Int {
    let k = verts.len() - 1;
    let ambient = verts[0].len();
    if k == ambient {
        // Full-dimensional: |det| of the edge matrix.
        let rows: IMat = verts[1..].iter().map(|v| sub_int(v, &verts[0])).collect();
        return det_bareiss(&rows).abs();
    }
    LatticePolytope::from_points(ambient, verts)
        .map(|p| p.lattice_volume())
        .unwrap_or_else(|_| Int::zero())
}

/// Detailed triangulation validity check: simplices must be genuine
/// `dim(P)`-simplices made of points of `P`, tile `P` by volume, and
/// pairwise intersect in common faces.  Returns a diagnostic on failure.
pub fn validate_triangulation(
    t: &Triangulation,
    p: &LatticePolytope,
) -> std::result::Result<(), String> {
    let n = t.points.len();
    let distinct: BTreeSet<&IVec> = t.points.iter().collect();
    if distinct.len() != n {
        return Err("duplicate points".into());
    }
    for pt in &t.points {
        if !p.contains(pt) {
            return Err(format!("point {pt:?} lies outside the polytope"));
        }
    }
    let dim = p.dim();
    let intrinsic: Vec<IVec> = t
        .points
        .iter()
        .map(|pt| p.to_intrinsic(pt).expect("contained point lies on affine hull"))
        .collect();
    let mut total = Int::zero();
    for s in &t.simplices {
        if s.len() != dim + 1 {
            return Err(format!("cell {s:?} has {} vertices, expected {}", s.len(), dim + 1));
        }
        let set: BTreeSet<usize> = s.iter().copied().collect();
        if set.len() != s.len() || s.iter().any(|&i| i >= n) {
            return Err(format!("cell {s:?} has repeated or out-of-range indices"));
        }
        let verts: IMat = s.iter().map(|&i| intrinsic[i].clone()).collect();
        let vol = simplex_volume(&verts);
        if vol.is_zero() {
            return Err(format!("cell {s:?} is degenerate"));
        }
        total += vol;
    }
    if total != p.lattice_volume() {
        return Err(format!(
            "cell volumes sum to {total}, polytope has volume {}",
            p.lattice_volume()
        ));
    }
    // Pairwise: intersection of two cells must be their common face.
    let boxes: Vec<(IVec, IVec)> = t
        .simplices
        .iter()
        .map(|s| {
            let d = intrinsic[s[0]].len();
            let lo: IVec = (0..d)
                .map(|j| s.iter().map(|&i| intrinsic[i][j].clone()).min().unwrap())
                .collect();
            let hi: IVec = (0..d)
                .map(|j| s.iter().map(|&i| intrinsic[i][j].clone()).max().unwrap())
                .collect();
            (lo, hi)
        })
        .collect();
    for a in 0..t.simplices.len() {
        for b in a + 1..t.simplices.len() {
            let (lo_a, hi_a) = &boxes[a];
            let (lo_b, hi_b) = &boxes[b];
            let strictly_apart = lo_a
                .iter()
                .zip(hi_a.iter())
                .zip(lo_b.iter().zip(hi_b.iter()))
                .any(|((la, ha), (lb, hb))| ha < lb || hb < la);
            if strictly_apart {
                continue;
            }
            if let Some(msg) =
                simplices_overlap_badly(&intrinsic, &t.simplices[a], &t.simplices[b])
            {
                return Err(format!(
                    "cells {:?} and {:?} do not meet in a common face: {msg}",
                    t.simplices[a], t.simplices[b]
                ));
            }
        }
    }
    Ok(())
}

/// Boolean wrapper of [`validate_triangulation`].
pub fn check_valid(t: &Triangulation, p: &LatticePolytope) -> bool {
    validate_triangulation(t, p).is_ok()
}

/// Exact test whether two simplices intersect in something larger than the
/// convex hull of their shared vertices.  Returns a message if they do.
fn simplices_overlap_badly(
    points: &[IVec],
    sa: &[usize],
    sb: &[usize],
) -> Option<String> {
    let shared: BTreeSet<usize> = sa
        .iter()
        .copied()
        .collect::<BTreeSet<_>>()
        .intersection(&sb.iter().copied().collect())
        .copied()
        .collect();
    let d = points[sa[0]].len();
    let ka = sa.len();
    let kb = sb.len();
    // Variables: barycentric weights of a common point w.r.t. both cells.
    // Maximize total weight outside the shared vertex set; positive maximum
    // means the intersection sticks out of the common face.
    let nvars = ka + kb;
    let mut a_eq: QMat = Vec::new();
    let mut b_eq: QVec = Vec::new();
    for coord in 0..d {
        let mut row: QVec = Vec::with_capacity(nvars);
        for &i in sa {
            row.push(Rat::from_integer(points[i][coord].clone()));
        }
        for &i in sb {
            row.push(-Rat::from_integer(points[i][coord].clone()));
        }
        a_eq.push(row);
        b_eq.push(Rat::zero());
    }
    let mut row_a: QVec = vec![Rat::zero(); nvars];
    for v in row_a.iter_mut().take(ka) {
        *v = Rat::one();
    }
    a_eq.push(row_a);
    b_eq.push(Rat::one());
    let mut row_b: QVec = vec![Rat::zero(); nvars];
    for v in row_b.iter_mut().skip(ka) {
        *v = Rat::one();
    }
    a_eq.push(row_b);
    b_eq.push(Rat::one());
    let mut c: QVec = Vec::with_capacity(nvars);
    for &i in sa {
        c.push(if shared.contains(&i) { Rat::zero() } else { -Rat::one() });
    }
    for &i in sb {
        c.push(if shared.contains(&i) { Rat::zero() } else { -Rat::one() });
    }
    match exact_min(&c, &a_eq, &b_eq) {
        LpOutcome::Infeasible => None, // disjoint hulls
        LpOutcome::Optimal { objective, .. } => {
            if objective.is_negative() {
                Some(format!(
                    "a common point carries barycentric weight {} outside the shared vertices",
                    -objective
                ))
            } else {
                None
            }
        }
        LpOutcome::Unbounded => unreachable!("barycentric weights are bounded"),
    }
}

/// Interior ridges of a pure simplicial complex: map from sorted
/// codimension-1 vertex tuples to the (exactly two) owning simplices.
fn interior_ridges(simplices: &[Vec<usize>]) -> BTreeMap<Vec<usize>, Vec<usize>> {
    let mut owners: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
    for (si, s) in simplices.iter().enumerate() {
        for omit in 0..s.len() {
            let mut r = s.clone();
            r.remove(omit);
            r.sort_unstable();
            owners.entry(r).or_default().push(si);
        }
    }
    owners.retain(|_, v| v.len() == 2);
    owners
}

/// The lifted bend across an interior ridge: value of the lifting at the
/// opposite vertex of the second simplex minus the value of the first
/// simplex's affine lift there.  Positive for every interior ridge iff the
/// lifting is locally strictly convex.
fn ridge_bend(
    points: &IMat,
    lifting: &[Rat],
    sa: &[usize],
    sb: &[usize],
    ridge: &[usize],
) -> Rat {
    let coeffs = ridge_bend_coefficients(points, sa, sb, ridge);
    coeffs
        .iter()
        .map(|(i, c)| c * &lifting[*i])
        .sum()
}

/// Sparse coefficients of the bend functional over lifting values.
fn ridge_bend_coefficients(
    points: &IMat,
    sa: &[usize],
    sb: &[usize],
    ridge: &[usize],
) -> Vec<(usize, Rat)> {
    let opp_b = *sb
        .iter()
        .find(|i| !ridge.contains(i))
        .expect("ridge is a proper face of its owner");
    // Affine coordinates of opp_b with respect to the vertices of sa.
    let d = points[sa[0]].len();
    let mut a: QMat = Vec::with_capacity(d + 1);
    for coord in 0..d {
        a.push(
            sa.iter()
                .map(|&i| Rat::from_integer(points[i][coord].clone()))
                .collect(),
        );
    }
    a.push(vec![Rat::one(); sa.len()]);
    let mut rhs: QVec = to_rat_vec(&points[opp_b]);
    rhs.push(Rat::one());
    let lambda = crate::linalg::solve_rational(&a, &rhs)
        .expect("opposite vertex lies in the affine span of a full simplex");
    let mut coeffs: BTreeMap<usize, Rat> = BTreeMap::new();
    *coeffs.entry(opp_b).or_insert_with(Rat::zero) += Rat::one();
    for (&i, l) in sa.iter().zip(lambda) {
        *coeffs.entry(i).or_insert_with(Rat::zero) -= l;
    }
    coeffs.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

/// True iff the triangulation's lifting is strictly convex across every
/// interior ridge.  Errors when no lifting is present.
pub fn check_convexity(t: &Triangulation) -> Result<bool> {
    let Some(lifting) = &t.lifting else {
        return Err(Error::InvalidInput("triangulation carries no lifting".into()));
    };
    Ok(convexity_violation(&t.points, lifting, &t.simplices).is_none())
}

/// First interior ridge (if any) across which the lifting fails to be
/// strictly convex.
pub fn convexity_violation(
    points: &IMat,
    lifting: &[Rat],
    simplices: &[Vec<usize>],
) -> Option<Vec<usize>> {
    for (ridge, owners) in interior_ridges(simplices) {
        let bend = ridge_bend(points, lifting, &simplices[owners[0]], &simplices[owners[1]], &ridge);
        if !bend.is_positive() {
            return Some(ridge);
        }
    }
    None
}

/// Strict convexity of a (possibly non-simplicial) subdivision: the lifting
/// must be affine on every cell, and across every shared codimension-1
/// interface each neighbor's remaining points must lift strictly above the
/// other cell's affine extension.
pub fn check_convexity_subdivision(sub: &Subdivision) -> Result<bool> {
    let dim = if sub.points.is_empty() { 0 } else { sub.points[0].len() };
    // Affine lift per cell: fit on a spanning subset, then verify all.
    let mut lifts: Vec<(QVec, Rat)> = Vec::with_capacity(sub.cells.len());
    for cell in &sub.cells {
        let Some((w, beta)) = affine_fit(&sub.points, &sub.lifting, cell, dim) else {
            return Ok(false);
        };
        lifts.push((w, beta));
    }
    for a in 0..sub.cells.len() {
        for b in 0..sub.cells.len() {
            if a == b {
                continue;
            }
            let inter: Vec<usize> = sub.cells[a]
                .iter()
                .copied()
                .filter(|i| sub.cells[b].contains(i))
                .collect();
            if inter.is_empty() {
                continue;
            }
            let pts: IMat = inter.iter().map(|&i| sub.points[i].clone()).collect();
            let rank = if pts.len() == 1 {
                0
            } else {
                rank_int(&pts[1..].iter().map(|p| sub_int(p, &pts[0])).collect::<IMat>())
            };
            if rank != dim - 1 {
                continue;
            }
            let (w, beta) = &lifts[a];
            for &i in &sub.cells[b] {
                if inter.contains(&i) {
                    continue;
                }
                let val: Rat = to_rat_vec(&sub.points[i])
                    .iter()
                    .zip(w)
                    .map(|(x, wj)| x * wj)
                    .sum::<Rat>()
                    + beta;
                if sub.lifting[i] <= val {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Fit an affine function through the lifted cell and verify every cell
/// point lies exactly on it.
fn affine_fit(
    points: &IMat,
    lifting: &[Rat],
    cell: &[usize],
    dim: usize,
) -> Option<(QVec, Rat)> {
    // Solve for (w, beta) with w . p_i + beta = lifting_i using all cell
    // points as equations; any solution must satisfy all of them.
    let a: QMat = cell
        .iter()
        .map(|&i| {
            let mut row = to_rat_vec(&points[i]);
            row.push(Rat::one());
            row
        })
        .collect();
    let rhs: QVec = cell.iter().map(|&i| lifting[i].clone()).collect();
    let sol = crate::linalg::solve_rational(&a, &rhs)?;
    let (w, beta) = sol.split_at(dim);
    Some((w.to_vec(), beta[0].clone()))
}

/// True iff every top simplex has lattice volume 1.
pub fn is_primitive(t: &Triangulation) -> bool {
    t.simplices.iter().all(|s| {
        let verts: IMat = s.iter().map(|&i| t.points[i].clone()).collect();
        simplex_volume(&verts).is_one()
    })
}

/// Scale a triangulation by an integer factor `lambda >= 1`; the lifting is
/// scaled by the same factor, which preserves the lower-hull structure.
pub fn dilate_triangulation(t: &Triangulation, lambda: &Int) -> Result<Triangulation> {
    if lambda < &Int::one() {
        return Err(Error::InvalidInput(format!(
            "dilation factor must be at least 1, got {lambda}"
        )));
    }
    Ok(Triangulation {
        points: t
            .points
            .iter()
            .map(|p| p.iter().map(|c| c * lambda).collect())
            .collect(),
        simplices: t.simplices.clone(),
        lifting: t
            .lifting
            .as_ref()
            .map(|l| l.iter().map(|h| h * Rat::from_integer(lambda.clone())).collect()),
    })
}

/// Search for a rational lifting that certifies strict convexity of the
/// given triangulation: float simplex proposals rounded to dyadic rationals
/// and verified exactly, with an exact rational simplex as fallback.
pub fn convexity_certificate(points: &IMat, simplices: &[Vec<usize>]) -> Result<Vec<Rat>> {
    let n = points.len();
    let ridges = interior_ridges(simplices);
    let rows: Vec<Vec<(usize, Rat)>> = ridges
        .iter()
        .map(|(ridge, owners)| {
            ridge_bend_coefficients(points, &simplices[owners[0]], &simplices[owners[1]], ridge)
        })
        .collect();
    if rows.is_empty() {
        return Ok(vec![Rat::zero(); n]);
    }
    let m = rows.len();
    // Standard form: variables nu_1..nu_n, surplus s_1..s_m;
    // bend_r(nu) - s_r = margin, all variables >= 0; minimize sum(nu).
    let attempt_float = |margin: f64, k: u32| -> Option<Vec<Rat>> {
        let nvars = n + m;
        let mut a: Vec<Vec<f64>> = Vec::with_capacity(m);
        for (r, row) in rows.iter().enumerate() {
            let mut arow = vec![0.0; nvars];
            for (i, cf) in row {
                arow[*i] = cf.to_f64().unwrap_or(0.0);
            }
            arow[n + r] = -1.0;
            a.push(arow);
        }
        let b = vec![margin; m];
        let mut c = vec![0.0; nvars];
        for cj in c.iter_mut().take(n) {
            *cj = 1.0;
        }
        let x = float_min(&c, &a, &b)?;
        let denom = BigInt::from(2u32).pow(k);
        let lifting: Vec<Rat> = x[..n]
            .iter()
            .map(|&v| {
                let scaled = (v * 2f64.powi(k as i32)).round();
                Rat::new(BigInt::from(scaled as i64), denom.clone())
            })
            .collect();
        let ok = rows.iter().all(|row| {
            row.iter().map(|(i, cf)| cf * &lifting[*i]).sum::<Rat>().is_positive()
        });
        ok.then_some(lifting)
    };
    for (margin, k) in [(1.0, 30u32), (1.0, 48), (1024.0, 48)] {
        if let Some(l) = attempt_float(margin, k) {
            return Ok(l);
        }
    }
    // Exact fallback.
    let nvars = n + m;
    let mut a: QMat = Vec::with_capacity(m);
    for (r, row) in rows.iter().enumerate() {
        let mut arow = vec![Rat::zero(); nvars];
        for (i, cf) in row {
            arow[*i] = cf.clone();
        }
        arow[n + r] = -Rat::one();
        a.push(arow);
    }
    let b: QVec = vec![Rat::one(); m];
    let mut c: QVec = vec![Rat::zero(); nvars];
    for cj in c.iter_mut().take(n) {
        *cj = Rat::one();
    }
    match exact_min(&c, &a, &b) {
        LpOutcome::Optimal { x, .. } => Ok(x[..n].to_vec()),
        _ => Err(Error::SearchFailed(
            "no convexity certificate found for the triangulation".into(),
        )),
    }
}

/// A primitive convex triangulation of a 2-dimensional lattice polytope
/// using every one of its lattice points, together with a certifying
/// lifting.  (Full 2D triangulations are automatically primitive.)
pub fn primitive_convex_2d(p: &LatticePolytope) -> Result<Triangulation> {
    if p.dim() != 2 {
        return Err(Error::InvalidInput(format!(
            "primitive convex construction needs a 2-dimensional polytope, got dimension {}",
            p.dim()
        )));
    }
    let ambient_points = p.lattice_points();
    let work: IMat = if p.is_full_dimensional() {
        ambient_points.clone()
    } else {
        ambient_points
            .iter()
            .map(|pt| p.to_intrinsic(pt).expect("lattice point lies on affine hull"))
            .collect()
    };
    let parab: Vec<Rat> = work
        .iter()
        .map(|pt| Rat::from_integer(pt.iter().map(|c| c * c).sum()))
        .collect();
    let sub = regular_subdivision(&work, &parab)?;
    let simplices = refine_subdivision(&sub)?;
    let needs_new_certificate = sub.cells.iter().any(|c| c.len() != 3);
    let lifting = if needs_new_certificate {
        convexity_certificate(&work, &simplices)?
    } else {
        parab
    };
    let t = Triangulation {
        points: ambient_points,
        simplices,
        lifting: Some(lifting),
    };
    debug_assert!(check_valid(&t, p));
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::convex_hull;
    use crate::{int, rat_int};

    fn pts(rows: &[&[i64]]) -> IMat {
        rows.iter().map(|r| r.iter().map(|&c| int(c)).collect()).collect()
    }

    fn lift(vals: &[i64]) -> Vec<Rat> {
        vals.iter().map(|&v| rat_int(v)).collect()
    }

    fn unit_square() -> (LatticePolytope, IMat) {
        let p = pts(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]);
        (convex_hull(&p).unwrap(), p)
    }

    #[test]
    fn valid_single_simplex() {
        let p = pts(&[&[0, 0], &[1, 0], &[0, 1]]);
        let poly = convex_hull(&p).unwrap();
        let t = Triangulation { points: p, simplices: vec![vec![0, 1, 2]], lifting: None };
        assert!(check_valid(&t, &poly));
    }

    #[test]
    fn valid_two_triangles_both_diagonals() {
        let (poly, p) = unit_square();
        for simplices in [vec![vec![0, 1, 3], vec![0, 2, 3]], vec![vec![0, 1, 2], vec![1, 2, 3]]] {
            let t = Triangulation { points: p.clone(), simplices, lifting: None };
            assert!(check_valid(&t, &poly));
        }
    }

    #[test]
    fn invalid_overlapping_interiors() {
        // Two triangles of total volume 2 whose interiors overlap in the
        // right half of the square; their intersection strictly exceeds
        // the hull of the two shared vertices.
        let (poly, p) = unit_square();
        let t = Triangulation {
            points: p,
            simplices: vec![vec![0, 1, 3], vec![1, 2, 3]],
            lifting: None,
        };
        let err = validate_triangulation(&t, &poly).unwrap_err();
        assert!(err.contains("common face"), "unexpected diagnostic: {err}");
    }

    #[test]
    fn invalid_wrong_volume() {
        let (poly, p) = unit_square();
        let t = Triangulation { points: p, simplices: vec![vec![0, 1, 2]], lifting: None };
        let err = validate_triangulation(&t, &poly).unwrap_err();
        assert!(err.contains("volume"), "unexpected diagnostic: {err}");
    }

    #[test]
    fn invalid_point_outside() {
        let (poly, _) = unit_square();
        let t = Triangulation {
            points: pts(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1], &[5, 5]]),
            simplices: vec![vec![0, 1, 3], vec![0, 2, 3]],
            lifting: None,
        };
        let err = validate_triangulation(&t, &poly).unwrap_err();
        assert!(err.contains("outside"), "unexpected diagnostic: {err}");
    }

    #[test]
    fn invalid_degenerate_cell() {
        let p = pts(&[&[0, 0], &[1, 0], &[2, 0], &[0, 1]]);
        let poly = convex_hull(&p).unwrap();
        let t = Triangulation {
            points: p,
            simplices: vec![vec![0, 1, 2], vec![0, 2, 3]],
            lifting: None,
        };
        let err = validate_triangulation(&t, &poly).unwrap_err();
        assert!(err.contains("degenerate"), "unexpected diagnostic: {err}");
    }

    #[test]
    fn convexity_affine_lifting_is_not_strict() {
        // The squared-norm values on the square's corners are affine
        // (they agree with x + y), so neither diagonal split is strictly
        // convex for them.
        let (_, p) = unit_square();
        let sq = lift(&[0, 1, 1, 2]);
        for simplices in [vec![vec![0, 1, 3], vec![0, 2, 3]], vec![vec![0, 1, 2], vec![1, 2, 3]]] {
            let t = Triangulation {
                points: p.clone(),
                simplices,
                lifting: Some(sq.clone()),
            };
            assert!(!check_convexity(&t).unwrap());
        }
    }

    #[test]
    fn convexity_strict_and_violated() {
        let (_, p) = unit_square();
        let l = lift(&[0, 1, 1, 3]);
        let good = Triangulation {
            points: p.clone(),
            simplices: vec![vec![0, 1, 2], vec![1, 2, 3]],
            lifting: Some(l.clone()),
        };
        assert!(check_convexity(&good).unwrap());
        let bad = Triangulation {
            points: p,
            simplices: vec![vec![0, 1, 3], vec![0, 2, 3]],
            lifting: Some(l),
        };
        assert!(!check_convexity(&bad).unwrap());
    }

    #[test]
    fn convexity_requires_lifting() {
        let (_, p) = unit_square();
        let t = Triangulation {
            points: p,
            simplices: vec![vec![0, 1, 3], vec![0, 2, 3]],
            lifting: None,
        };
        assert!(check_convexity(&t).is_err());
    }

    #[test]
    fn flat_lifting_on_segment_refines_to_unit_pieces() {
        let p = pts(&[&[0], &[1], &[2]]);
        let poly = convex_hull(&p).unwrap();
        let t = regular_triangulation(&poly, &p, &lift(&[0, 0, 0])).unwrap();
        assert_eq!(t.simplices, vec![vec![0, 1], vec![1, 2]]);
        assert!(check_valid(&t, &poly));
        assert!(is_primitive(&t));
    }

    #[test]
    fn square_corner_paraboloid_refines_to_two_triangles() {
        let (poly, p) = unit_square();
        let t = regular_triangulation(&poly, &p, &lift(&[0, 1, 1, 2])).unwrap();
        assert_eq!(t.simplices.len(), 2);
        assert!(check_valid(&t, &poly));
        assert!(is_primitive(&t));
    }

    #[test]
    fn triangle_of_size_two_paraboloid() {
        let p = pts(&[&[0, 0], &[0, 1], &[0, 2], &[1, 0], &[1, 1], &[2, 0]]);
        let poly = convex_hull(&p).unwrap();
        let sq: Vec<Rat> = p
            .iter()
            .map(|q| Rat::from_integer(q.iter().map(|c| c * c).sum()))
            .collect();
        let t = regular_triangulation(&poly, &p, &sq).unwrap();
        assert_eq!(t.simplices.len(), 4);
        assert!(check_valid(&t, &poly));
        assert!(is_primitive(&t));
    }

    #[test]
    fn missing_vertex_is_rejected() {
        let (poly, _) = unit_square();
        let p = pts(&[&[0, 0], &[1, 0], &[0, 1]]);
        assert!(regular_triangulation(&poly, &p, &lift(&[0, 0, 0])).is_err());
    }

    #[test]
    fn point_outside_is_rejected() {
        let (poly, _) = unit_square();
        let p = pts(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1], &[7, 7]]);
        assert!(regular_triangulation(&poly, &p, &lift(&[0, 0, 0, 0, 0])).is_err());
    }

    #[test]
    fn high_point_may_go_unused() {
        let p = pts(&[&[0], &[1], &[2]]);
        let poly = convex_hull(&p).unwrap();
        let t = regular_triangulation(&poly, &p, &lift(&[0, 5, 0])).unwrap();
        assert_eq!(t.simplices, vec![vec![0, 2]]);
        assert!(check_valid(&t, &poly));
        assert!(!is_primitive(&t));
    }

    #[test]
    fn subdivision_convexity_checks() {
        // The squared-norm subdivision of the size-2 triangle has a flat
        // square cell plus two triangles and is strictly convex as a
        // subdivision.
        let p = pts(&[&[0, 0], &[0, 1], &[0, 2], &[1, 0], &[1, 1], &[2, 0]]);
        let sq: Vec<Rat> = p
            .iter()
            .map(|q| Rat::from_integer(q.iter().map(|c| c * c).sum()))
            .collect();
        let sub = regular_subdivision(&p, &sq).unwrap();
        assert_eq!(sub.cells.len(), 3);
        assert!(check_convexity_subdivision(&sub).unwrap());
        // A zero lifting does not strictly certify a two-cell split.
        let flat = Subdivision {
            points: pts(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]),
            cells: vec![vec![0, 1, 3], vec![0, 2, 3]],
            lifting: lift(&[0, 0, 0, 0]),
        };
        assert!(!check_convexity_subdivision(&flat).unwrap());
        // A lifting that is not even affine on a claimed cell fails.
        let crooked = Subdivision {
            points: pts(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]),
            cells: vec![vec![0, 1, 2, 3]],
            lifting: lift(&[0, 0, 0, 1]),
        };
        assert!(!check_convexity_subdivision(&crooked).unwrap());
    }

    #[test]
    fn primitivity_detects_large_cells() {
        let p = pts(&[&[0, 0], &[2, 0], &[0, 2]]);
        let poly = convex_hull(&p).unwrap();
        let t = Triangulation {
            points: p,
            simplices: vec![vec![0, 1, 2]],
            lifting: None,
        };
        assert!(check_valid(&t, &poly));
        assert!(!is_primitive(&t));
    }

    #[test]
    fn primitive_convex_triangle_size_three() {
        let poly = convex_hull(&pts(&[&[0, 0], &[3, 0], &[0, 3]])).unwrap();
        let t = primitive_convex_2d(&poly).unwrap();
        assert_eq!(t.simplices.len(), 9);
        assert_eq!(t.points.len(), 10);
        assert!(check_valid(&t, &poly));
        assert!(is_primitive(&t));
        assert!(check_convexity(&t).unwrap());
    }

    #[test]
    fn primitive_convex_unit_square() {
        let (poly, _) = unit_square();
        let t = primitive_convex_2d(&poly).unwrap();
        assert_eq!(t.simplices.len(), 2);
        assert!(check_valid(&t, &poly));
        assert!(is_primitive(&t));
        assert!(check_convexity(&t).unwrap());
    }

    #[test]
    fn primitive_convex_square_size_two() {
        let poly = convex_hull(&pts(&[&[0, 0], &[2, 0], &[0, 2], &[2, 2]])).unwrap();
        let t = primitive_convex_2d(&poly).unwrap();
        assert_eq!(t.points.len(), 9);
        assert_eq!(int(t.simplices.len() as i64), poly.lattice_volume());
        assert!(check_valid(&t, &poly));
        assert!(is_primitive(&t));
        assert!(check_convexity(&t).unwrap());
    }

    #[test]
    fn primitive_convex_rejects_wrong_dimension() {
        let seg = convex_hull(&pts(&[&[0], &[4]])).unwrap();
        assert!(primitive_convex_2d(&seg).is_err());
    }

    #[test]
    fn primitive_convex_lower_dimensional_embedding() {
        // A 2D triangle sitting inside 3-space on the plane z = x + y.
        let p = pts(&[&[0, 0, 0], &[1, 0, 1], &[0, 1, 1]]);
        let poly = convex_hull(&p).unwrap();
        let t = primitive_convex_2d(&poly).unwrap();
        assert_eq!(t.simplices.len(), 1);
        assert_eq!(t.points.len(), 3);
        assert!(t.points.iter().all(|q| q.len() == 3));
        assert!(check_valid(&t, &poly));
    }

    #[test]
    fn dilation_scales_points_and_lifting() {
        let p = pts(&[&[0], &[1], &[2]]);
        let poly = convex_hull(&p).unwrap();
        let t = regular_triangulation(&poly, &p, &lift(&[0, 0, 0])).unwrap();
        let one = dilate_triangulation(&t, &int(1)).unwrap();
        assert_eq!(one, t);
        let big = dilate_triangulation(&t, &int(3)).unwrap();
        assert_eq!(big.points, pts(&[&[0], &[3], &[6]]));
        assert_eq!(big.simplices, t.simplices);
        let big_poly = convex_hull(&pts(&[&[0], &[6]])).unwrap();
        assert!(check_valid(&big, &big_poly));
        assert!(!is_primitive(&big));
        assert!(dilate_triangulation(&t, &int(0)).is_err());
    }

    #[test]
    fn certificate_search_direct() {
        // Ask for a certificate of a hand-picked triangulation of the
        // 2 x 1 rectangle on its six lattice points.
        let p = pts(&[&[0, 0], &[1, 0], &[2, 0], &[0, 1], &[1, 1], &[2, 1]]);
        let simplices = vec![
            vec![0, 1, 3],
            vec![1, 3, 4],
            vec![1, 2, 4],
            vec![2, 4, 5],
        ];
        let l = convexity_certificate(&p, &simplices).unwrap();
        let t = Triangulation { points: p, simplices, lifting: Some(l) };
        assert!(check_convexity(&t).unwrap());
    }
}
