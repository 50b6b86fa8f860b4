//! Exact incremental convex hull for full-dimensional integer point sets.
//!
//! Beneath-beyond construction over arbitrary-precision integers.  The hull
//! is maintained as a set of simplicial facets; a new point is coned onto the
//! horizon of its visible region.  Points lying *on* a facet hyperplane are
//! treated as visible, which keeps every horizon cone non-degenerate: if a
//! candidate point lies in the affine span of a ridge, both facets adjacent
//! to that ridge contain the point in their hyperplanes, so the ridge is
//! never part of the horizon.  Coplanar simplicial facets are merged into
//! geometric facets at the end.

use crate::error::{Error, Result};
use crate::linalg::{
    add_int, dot_int, integer_kernel, primitive, rank_int, sub_int, IMat, IVec,
};
use crate::Int;
use num_traits::{Signed, Zero};
use std::collections::{BTreeMap, BTreeSet};

/// A facet of the hull: primitive inner normal, offset, and the indices of
/// input points that are vertices of the facet.  Every input point `x`
/// satisfies `normal . x + offset >= 0`, with equality exactly on the facet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HullFacet {
    pub normal: IVec,
    pub offset: Int,
    pub vertices: Vec<usize>,
}

/// Result of a hull computation: merged facets and the indices of the input
/// points that are vertices of the hull, both in deterministic order.
#[derive(Clone, Debug)]
pub struct HullResult {
    pub facets: Vec<HullFacet>,
    pub vertices: Vec<usize>,
}

#[derive(Clone)]
struct SimpFacet {
    verts: Vec<usize>, // dim indices, sorted
    normal: IVec,
    offset: Int,
}

fn facet_value(normal: &[Int], offset: &Int, p: &[Int]) -> Int {
    dot_int(normal, p) + offset
}

/// Normal (primitive, unoriented) of the hyperplane through the given
/// affinely independent points; `None` if they do not span a hyperplane.
fn hyperplane_normal(points: &IMat, verts: &[usize], dim: usize) -> Option<IVec> {
    let base = &points[verts[0]];
    let rows: IMat = verts[1..]
        .iter()
        .map(|&i| sub_int(&points[i], base))
        .collect();
    let kernel = integer_kernel(&rows, dim);
    if kernel.len() != 1 {
        return None;
    }
    Some(primitive(&kernel[0]))
}

fn oriented_facet(points: &IMat, verts: &[usize], refsum: &IVec, refcount: &Int, dim: usize) -> SimpFacet {
    let mut normal =
        hyperplane_normal(points, verts, dim).expect("horizon cone produced a degenerate facet");
    let mut offset = -dot_int(&normal, &points[verts[0]]);
    // Orient so the interior reference point (sum of `refcount` hull points,
    // compared without division) is strictly on the positive side.
    let val = dot_int(&normal, refsum) + refcount * &offset;
    assert!(
        !val.is_zero(),
        "reference point lies on a facet hyperplane; hull is degenerate"
    );
    if val.is_negative() {
        normal = normal.iter().map(|x| -x).collect();
        offset = -offset;
    }
    let mut verts = verts.to_vec();
    verts.sort_unstable();
    SimpFacet { verts, normal, offset }
}

/// Compute the convex hull of a full-dimensional set of distinct integer
/// points in `Z^dim`.  Points must be pairwise distinct; the span condition
/// is checked and reported as an error.
pub fn convex_hull_full_dim(points: &IMat, dim: usize) -> Result<HullResult> {
    let n = points.len();
    if n == 0 {
        return Err(Error::InvalidPolytope("no points given".into()));
    }
    if dim == 0 {
        return Ok(HullResult { facets: Vec::new(), vertices: vec![0] });
    }

    // Greedily pick dim+1 affinely independent points.
    let mut independent = vec![0usize];
    let mut diffs: IMat = Vec::new();
    for i in 1..n {
        if independent.len() == dim + 1 {
            break;
        }
        let d = sub_int(&points[i], &points[0]);
        let mut trial = diffs.clone();
        trial.push(d);
        if rank_int(&trial) > diffs.len() {
            diffs = trial;
            independent.push(i);
        }
    }
    if independent.len() != dim + 1 {
        return Err(Error::InvalidPolytope(format!(
            "points span affine dimension {} < {}",
            independent.len() - 1,
            dim
        )));
    }

    // Interior reference point: the (unscaled) sum of the initial simplex
    // vertices, paired with the count to avoid rational arithmetic.
    let refsum = independent
        .iter()
        .map(|&i| points[i].clone())
        .reduce(|a, b| add_int(&a, &b))
        .unwrap();
    let refcount = Int::from(dim as u32 + 1);

    // Initial simplex facets: all dim-subsets of the independent points.
    let mut facets: Vec<SimpFacet> = (0..=dim)
        .map(|omit| {
            let verts: Vec<usize> = independent
                .iter()
                .enumerate()
                .filter(|&(k, _)| k != omit)
                .map(|(_, &i)| i)
                .collect();
            oriented_facet(points, &verts, &refsum, &refcount, dim)
        })
        .collect();

    // Insert the remaining points.
    let in_simplex: BTreeSet<usize> = independent.iter().copied().collect();
    for p in 0..n {
        if in_simplex.contains(&p) {
            continue;
        }
        let point = &points[p];
        let visible: Vec<usize> = (0..facets.len())
            .filter(|&f| !facet_value(&facets[f].normal, &facets[f].offset, point).is_positive())
            .collect();
        if visible.is_empty() {
            continue; // strictly inside the current hull
        }
        // Horizon ridges: ridges of visible facets that occur exactly once.
        let mut ridge_count: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        for &f in &visible {
            let verts = &facets[f].verts;
            for omit in 0..verts.len() {
                let mut ridge: Vec<usize> = verts.clone();
                ridge.remove(omit);
                *ridge_count.entry(ridge).or_insert(0) += 1;
            }
        }
        let visible_set: BTreeSet<usize> = visible.iter().copied().collect();
        let mut new_facets: Vec<SimpFacet> = (0..facets.len())
            .filter(|f| !visible_set.contains(f))
            .map(|f| facets[f].clone())
            .collect();
        for (ridge, count) in ridge_count {
            debug_assert!(count <= 2, "ridge shared by more than two facets");
            if count == 1 {
                let mut verts = ridge;
                verts.push(p);
                new_facets.push(oriented_facet(points, &verts, &refsum, &refcount, dim));
            }
        }
        facets = new_facets;
    }

    // Merge coplanar simplicial facets into geometric facets.
    let mut merged: BTreeMap<(IVec, Int), ()> = BTreeMap::new();
    for f in &facets {
        merged.insert((f.normal.clone(), f.offset.clone()), ());
    }
    let keys: Vec<(IVec, Int)> = merged.into_keys().collect();

    // All points on each facet hyperplane, plus the validity check.
    let mut on_facet: Vec<Vec<usize>> = Vec::with_capacity(keys.len());
    for (normal, offset) in &keys {
        let mut on = Vec::new();
        for (i, pt) in points.iter().enumerate() {
            let v = facet_value(normal, offset, pt);
            assert!(
                !v.is_negative(),
                "hull construction produced a violated facet inequality"
            );
            if v.is_zero() {
                on.push(i);
            }
        }
        on_facet.push(on);
    }

    // True vertices: points whose active facet normals span the full space.
    let mut active: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (fi, on) in on_facet.iter().enumerate() {
        for &i in on {
            active[i].push(fi);
        }
    }
    let vertices: Vec<usize> = (0..n)
        .filter(|&i| {
            active[i].len() >= dim
                && rank_int(&active[i].iter().map(|&fi| keys[fi].0.clone()).collect::<IMat>())
                    == dim
        })
        .collect();
    let vertex_set: BTreeSet<usize> = vertices.iter().copied().collect();

    let result_facets: Vec<HullFacet> = keys
        .into_iter()
        .zip(on_facet)
        .map(|((normal, offset), on)| HullFacet {
            normal,
            offset,
            vertices: on.into_iter().filter(|i| vertex_set.contains(i)).collect(),
        })
        .collect();

    Ok(HullResult { facets: result_facets, vertices })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::int;

    fn pts(rows: &[&[i64]]) -> IMat {
        rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()
    }

    #[test]
    fn segment() {
        let p = pts(&[&[0], &[2], &[1]]);
        let h = convex_hull_full_dim(&p, 1).unwrap();
        assert_eq!(h.vertices, vec![0, 1]);
        assert_eq!(h.facets.len(), 2);
        for f in &h.facets {
            assert_eq!(f.vertices.len(), 1);
        }
    }

    #[test]
    fn triangle_with_edge_midpoint() {
        // (1,1) is the midpoint of the edge (2,0)-(0,2): not a vertex.
        let p = pts(&[&[0, 0], &[2, 0], &[0, 2], &[1, 1]]);
        let h = convex_hull_full_dim(&p, 2).unwrap();
        assert_eq!(h.vertices, vec![0, 1, 2]);
        assert_eq!(h.facets.len(), 3);
        let slanted = h
            .facets
            .iter()
            .find(|f| f.normal == vec![int(-1), int(-1)])
            .expect("facet x+y<=2 present");
        assert_eq!(slanted.offset, int(2));
        assert_eq!(slanted.vertices, vec![1, 2]);
    }

    #[test]
    fn square() {
        let p = pts(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]);
        let h = convex_hull_full_dim(&p, 2).unwrap();
        assert_eq!(h.vertices, vec![0, 1, 2, 3]);
        assert_eq!(h.facets.len(), 4);
    }

    #[test]
    fn tetrahedron_skew() {
        // {(0,0,0),(1,0,0),(0,1,0),(1,1,3)}: a simplex, 4 facets.
        let p = pts(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[1, 1, 3]]);
        let h = convex_hull_full_dim(&p, 3).unwrap();
        assert_eq!(h.vertices, vec![0, 1, 2, 3]);
        assert_eq!(h.facets.len(), 4);
        for f in &h.facets {
            assert_eq!(f.vertices.len(), 3);
        }
    }

    #[test]
    fn octahedron() {
        let p = pts(&[
            &[1, 1, 0],
            &[1, 1, 2],
            &[0, 1, 1],
            &[2, 1, 1],
            &[1, 0, 1],
            &[1, 2, 1],
        ]);
        let h = convex_hull_full_dim(&p, 3).unwrap();
        assert_eq!(h.vertices.len(), 6);
        assert_eq!(h.facets.len(), 8);
        for f in &h.facets {
            assert_eq!(f.vertices.len(), 3);
        }
    }

    #[test]
    fn cube_merges_coplanar() {
        let mut p = Vec::new();
        for x in 0..2 {
            for y in 0..2 {
                for z in 0..2 {
                    p.push(vec![int(x), int(y), int(z)]);
                }
            }
        }
        let h = convex_hull_full_dim(&p, 3).unwrap();
        assert_eq!(h.vertices.len(), 8);
        assert_eq!(h.facets.len(), 6);
        for f in &h.facets {
            assert_eq!(f.vertices.len(), 4);
        }
    }

    #[test]
    fn collinear_insertion_degenerate_extension() {
        // Points on a line through an edge test the "on means visible" rule.
        let p = pts(&[&[0, 0], &[1, 0], &[0, 1], &[2, 0], &[3, 0]]);
        let h = convex_hull_full_dim(&p, 2).unwrap();
        assert_eq!(h.vertices, vec![0, 2, 4]);
        assert_eq!(h.facets.len(), 3);
    }

    #[test]
    fn not_full_dimensional() {
        let p = pts(&[&[0, 0], &[1, 1], &[2, 2]]);
        assert!(convex_hull_full_dim(&p, 2).is_err());
    }
}
