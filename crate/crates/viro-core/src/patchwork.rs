//! Combinatorial patchworking: symmetric extension of a signed
//! triangulation to all orthants, the piecewise-linear separating
//! hypersurface, and the boundary identifications that close the ambient
//! space up into a compact one (with the induced identifications on the
//! hypersurface).
//!
//! Throughout, `d` is the ambient dimension boundary reflections act on;
//! orthants are encoded as bitmasks with bit `i` meaning "coordinate `i`
//! negated".

use crate::complex::{nonempty_subsets, Cell, PLComplex};
use crate::error::{Error, Result};
use crate::linalg::{saturate_span, IMat, IVec, QVec};
use crate::polytope::LatticePolytope;
use crate::triangulation::{check_convexity, validate_triangulation, Triangulation};
use crate::{Int, Rat};
use num_integer::Integer;
use num_traits::{Signed, Zero};
use std::collections::{BTreeMap, BTreeSet};

/// The symmetric extension of a signed triangulation: all reflected copies
/// in the `2^d` orthants, with signs extended by the parity rule.
#[derive(Clone, Debug)]
pub struct SignedComplex {
    /// Ambient dimension (number of coordinates reflections act on).
    pub dim: usize,
    /// The base polytope in the nonnegative orthant.
    pub base: LatticePolytope,
    /// All distinct points of all reflected copies, lex-sorted.
    pub vertices: IMat,
    /// Extended sign (+1 or -1) of every point.
    pub signs: Vec<i8>,
    /// All distinct top simplices (sorted index tuples, sorted list).
    pub simplices: Vec<Vec<usize>>,
    /// For each orthant mask, the indices of its simplices.
    pub per_orthant: Vec<Vec<usize>>,
}

/// How cells of the symmetric complex are identified: vertex classes and,
/// per dimension, the class of every simplicial cell (keyed by its sorted
/// vertex-index tuple).
#[derive(Clone, Debug)]
pub struct QuotientMap {
    /// Identification classes as lists of vertex indices of the
    /// symmetric complex; class order matches the quotient complex's
    /// vertex order.
    pub vertex_classes: Vec<Vec<usize>>,
    /// Class index of each vertex of the symmetric complex.
    pub vertex_class_of: Vec<usize>,
    /// Per dimension: sorted vertex tuple of a cell -> index of its class
    /// in the quotient complex.
    pub cell_class_of: Vec<BTreeMap<Vec<usize>, usize>>,
}

/// Reflect an integer point into the orthant given by `mask`.
pub fn reflect_point(p: &[Int], mask: usize) -> IVec {
    p.iter()
        .enumerate()
        .map(|(i, c)| if mask >> i & 1 == 1 { -c } else { c.clone() })
        .collect()
}

fn reflect_rat(p: &[Rat], mask: usize) -> QVec {
    p.iter()
        .enumerate()
        .map(|(i, c)| if mask >> i & 1 == 1 { -c } else { c.clone() })
        .collect()
}

/// Extended sign of the reflected image of a point: the sign flips once
/// for every negated coordinate of odd value.
pub fn extended_sign(sign: i8, p: &[Int], mask: usize) -> i8 {
    let mut flips = 0usize;
    for (i, c) in p.iter().enumerate() {
        if mask >> i & 1 == 1 && c.is_odd() {
            flips += 1;
        }
    }
    if flips % 2 == 0 {
        sign
    } else {
        -sign
    }
}

/// Build the symmetric extension of a valid signed triangulation of a
/// full-dimensional polytope in the nonnegative orthant.
pub fn extend_symmetric(
    base: &LatticePolytope,
    t: &Triangulation,
    signs: &[i8],
) -> Result<SignedComplex> {
    let d = base.ambient_dim();
    if d == 0 || !base.is_full_dimensional() {
        return Err(Error::InvalidInput(
            "symmetric extension needs a full-dimensional polytope in dimension >= 1".into(),
        ));
    }
    if signs.len() != t.points.len() {
        return Err(Error::InvalidInput(format!(
            "got {} signs for {} points",
            signs.len(),
            t.points.len()
        )));
    }
    if signs.iter().any(|&s| s != 1 && s != -1) {
        return Err(Error::InvalidInput("signs must be +1 or -1".into()));
    }
    if t.points.iter().any(|p| p.iter().any(|c| c.is_negative())) {
        return Err(Error::InvalidInput(
            "points must lie in the nonnegative orthant".into(),
        ));
    }
    validate_triangulation(t, base).map_err(Error::InvalidTriangulation)?;

    let mut sign_of: BTreeMap<IVec, i8> = BTreeMap::new();
    for mask in 0..1usize << d {
        for (p, &s) in t.points.iter().zip(signs) {
            let q = reflect_point(p, mask);
            let es = extended_sign(s, p, mask);
            match sign_of.get(&q) {
                None => {
                    sign_of.insert(q, es);
                }
                Some(&prev) => assert_eq!(
                    prev, es,
                    "parity rule must agree on points shared between orthants"
                ),
            }
        }
    }
    let vertices: IMat = sign_of.keys().cloned().collect();
    let vsigns: Vec<i8> = sign_of.values().copied().collect();
    let index: BTreeMap<&IVec, usize> = vertices.iter().zip(0..).collect();

    let mut simplex_set: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut per_orthant_keys: Vec<Vec<Vec<usize>>> = Vec::with_capacity(1 << d);
    for mask in 0..1usize << d {
        let mut keys = Vec::with_capacity(t.simplices.len());
        for s in &t.simplices {
            let mut key: Vec<usize> = s
                .iter()
                .map(|&i| index[&reflect_point(&t.points[i], mask)])
                .collect();
            key.sort_unstable();
            simplex_set.insert(key.clone());
            keys.push(key);
        }
        per_orthant_keys.push(keys);
    }
    let simplices: Vec<Vec<usize>> = simplex_set.into_iter().collect();
    let simplex_index: BTreeMap<&Vec<usize>, usize> = simplices.iter().zip(0..).collect();
    let per_orthant: Vec<Vec<usize>> = per_orthant_keys
        .iter()
        .map(|keys| keys.iter().map(|k| simplex_index[k]).collect())
        .collect();

    Ok(SignedComplex {
        dim: d,
        base: base.clone(),
        vertices,
        signs: vsigns,
        simplices,
        per_orthant,
    })
}

/// For each orthant, whether its copy of the triangulation carries both
/// signs somewhere (equivalently: whether the separating hypersurface
/// meets that orthant's copy).
pub fn orthant_mixed(s: &SignedComplex) -> Vec<bool> {
    s.per_orthant
        .iter()
        .map(|idxs| {
            idxs.iter().any(|&si| {
                let signs: BTreeSet<i8> =
                    s.simplices[si].iter().map(|&v| s.signs[v]).collect();
                signs.len() == 2
            })
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Cell complexes keyed by geometric vertex coordinates.
// ---------------------------------------------------------------------------

/// Canonical cell identifier inside the symmetric complex: the sorted list
/// of its (rational) vertex coordinates.  Faithful before any quotient.
pub type Key = Vec<QVec>;

/// Cells per dimension, each mapping to the keys of its Z2 boundary faces.
struct KeyComplex {
    levels: Vec<BTreeMap<Key, Vec<Key>>>,
}

fn sorted_key(mut coords: Vec<QVec>) -> Key {
    coords.sort();
    coords
}

fn int_to_rat(p: &[Int]) -> QVec {
    p.iter().map(|c| Rat::from_integer(c.clone())).collect()
}

/// The simplicial face closure of all top simplices of the symmetric
/// complex, keyed by vertex coordinates.
fn star_key_complex(s: &SignedComplex) -> KeyComplex {
    let mut levels: Vec<BTreeMap<Key, Vec<Key>>> = (0..=s.dim).map(|_| BTreeMap::new()).collect();
    for simplex in &s.simplices {
        for sub in nonempty_subsets(simplex) {
            let p = sub.len() - 1;
            let key = sorted_key(sub.iter().map(|&i| int_to_rat(&s.vertices[i])).collect());
            if levels[p].contains_key(&key) {
                continue;
            }
            let mut boundary = Vec::new();
            if p > 0 {
                for omit in 0..sub.len() {
                    let mut f = sub.clone();
                    f.remove(omit);
                    boundary.push(sorted_key(
                        f.iter().map(|&i| int_to_rat(&s.vertices[i])).collect(),
                    ));
                }
            }
            levels[p].insert(key, boundary);
        }
    }
    KeyComplex { levels }
}

/// The separating hypersurface of the symmetric complex, keyed by vertex
/// coordinates: one product cell per mixed-sign top simplex (vertices at
/// midpoints of opposite-sign edges), together with all its faces.
fn hypersurface_key_complex(s: &SignedComplex) -> KeyComplex {
    let d = s.dim;
    let mut levels: Vec<BTreeMap<Key, Vec<Key>>> =
        (0..d.max(1)).map(|_| BTreeMap::new()).collect();
    let midpoint = |a: usize, b: usize| -> QVec {
        s.vertices[a]
            .iter()
            .zip(&s.vertices[b])
            .map(|(x, y)| Rat::new(x + y, Int::from(2)))
            .collect()
    };
    for simplex in &s.simplices {
        let plus: Vec<usize> = simplex.iter().copied().filter(|&v| s.signs[v] == 1).collect();
        let minus: Vec<usize> = simplex.iter().copied().filter(|&v| s.signs[v] == -1).collect();
        if plus.is_empty() || minus.is_empty() {
            continue;
        }
        let face_key = |a_set: &[usize], b_set: &[usize]| -> Key {
            let mut coords = Vec::with_capacity(a_set.len() * b_set.len());
            for &a in a_set {
                for &b in b_set {
                    coords.push(midpoint(a, b));
                }
            }
            sorted_key(coords)
        };
        for a_sub in nonempty_subsets(&plus) {
            for b_sub in nonempty_subsets(&minus) {
                let p = a_sub.len() + b_sub.len() - 2;
                let key = face_key(&a_sub, &b_sub);
                if levels[p].contains_key(&key) {
                    continue;
                }
                let mut boundary = Vec::new();
                if a_sub.len() > 1 {
                    for omit in 0..a_sub.len() {
                        let mut f = a_sub.clone();
                        f.remove(omit);
                        boundary.push(face_key(&f, &b_sub));
                    }
                }
                if b_sub.len() > 1 {
                    for omit in 0..b_sub.len() {
                        let mut f = b_sub.clone();
                        f.remove(omit);
                        boundary.push(face_key(&a_sub, &f));
                    }
                }
                levels[p].insert(key, boundary);
            }
        }
    }
    KeyComplex { levels }
}

// ---------------------------------------------------------------------------
// Boundary identifications.
// ---------------------------------------------------------------------------

/// One boundary wall of the symmetric complex: the reflected image of a
/// base-polytope facet not lying in a coordinate hyperplane.
struct BoundaryPiece {
    mask: usize,
    facet_idx: usize,
    /// Normal in ambient (reflected) coordinates.
    normal: IVec,
}

/// All boundary walls, deduplicated geometrically.
fn boundary_pieces(base: &LatticePolytope, d: usize) -> Vec<BoundaryPiece> {
    let mut seen: BTreeSet<Vec<IVec>> = BTreeSet::new();
    let mut out = Vec::new();
    for (fi, f) in base.facets().iter().enumerate() {
        // A facet inside a coordinate hyperplane is an interior wall
        // between two orthant copies, not part of the boundary.
        let in_coord_plane = f.offset.is_zero()
            && f.normal.iter().filter(|c| !c.is_zero()).count() == 1;
        if in_coord_plane {
            continue;
        }
        for mask in 0..1usize << d {
            let verts: Vec<IVec> = {
                let mut v: Vec<IVec> = f
                    .vertex_indices
                    .iter()
                    .map(|&vi| reflect_point(&base.vertices()[vi], mask))
                    .collect();
                v.sort();
                v
            };
            if seen.insert(verts) {
                out.push(BoundaryPiece {
                    mask,
                    facet_idx: fi,
                    normal: reflect_point(&f.normal, mask),
                });
            }
        }
    }
    out
}

/// Whether a rational point lies on a boundary piece (on its hyperplane
/// and inside the reflected facet).
fn on_piece(base: &LatticePolytope, piece: &BoundaryPiece, x: &QVec) -> bool {
    let back = reflect_rat(x, piece.mask);
    let f = &base.facets()[piece.facet_idx];
    let val: Rat = f
        .normal
        .iter()
        .zip(&back)
        .map(|(a, c)| Rat::from_integer(a.clone()) * c)
        .sum::<Rat>()
        + Rat::from_integer(f.offset.clone());
    val.is_zero() && base.contains_rat(&back)
}

/// Indices of the boundary pieces containing every vertex of the cell
/// (equivalently, containing the cell: pieces are convex).
fn active_pieces(base: &LatticePolytope, pieces: &[BoundaryPiece], cell: &Key) -> Vec<usize> {
    pieces
        .iter()
        .enumerate()
        .filter(|(_, piece)| cell.iter().all(|x| on_piece(base, piece, x)))
        .map(|(i, _)| i)
        .collect()
}

/// The identification subgroup for a set of active boundary pieces, as
/// orthant masks: parity classes of the saturated integer span of the
/// pieces' normals.
fn parity_subgroup(pieces: &[BoundaryPiece], active: &[usize]) -> Vec<usize> {
    let normals: IMat = active.iter().map(|&i| pieces[i].normal.clone()).collect();
    let mut group: BTreeSet<usize> = BTreeSet::new();
    group.insert(0);
    if !normals.is_empty() {
        let n = normals[0].len();
        for basis_vec in saturate_span(&normals, n) {
            let gen_mask: usize = basis_vec
                .iter()
                .enumerate()
                .filter(|(_, c)| c.is_odd())
                .map(|(i, _)| 1usize << i)
                .sum();
            let existing: Vec<usize> = group.iter().copied().collect();
            for g in existing {
                group.insert(g ^ gen_mask);
            }
        }
    }
    debug_assert!(group.len().is_power_of_two());
    group.into_iter().collect()
}

/// Quotient a keyed complex by the boundary identifications: cells become
/// orbits, boundaries become facet classes with odd multiplicity.
/// Returns the quotient complex plus, per dimension, the class index of
/// every original cell key.
fn quotient_key_complex(
    kc: &KeyComplex,
    base: &LatticePolytope,
    d: usize,
) -> Result<(PLComplex, Vec<BTreeMap<Key, usize>>)> {
    let pieces = boundary_pieces(base, d);
    let mut group_cache: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
    // Pass 1: canonical (lex-min) orbit representative of every cell.
    let mut canon_of: Vec<BTreeMap<Key, Key>> = Vec::with_capacity(kc.levels.len());
    for level in &kc.levels {
        let mut m = BTreeMap::new();
        for key in level.keys() {
            let active = active_pieces(base, &pieces, key);
            if active.is_empty() {
                m.insert(key.clone(), key.clone());
                continue;
            }
            let group = group_cache
                .entry(active)
                .or_insert_with_key(|a| parity_subgroup(&pieces, a))
                .clone();
            let mut best = key.clone();
            for &g in &group {
                if g == 0 {
                    continue;
                }
                let image = sorted_key(key.iter().map(|x| reflect_rat(x, g)).collect());
                assert!(
                    level.contains_key(&image),
                    "identification must map cells to cells"
                );
                if image == *key {
                    // A nontrivial self-map must fix the cell pointwise;
                    // otherwise the quotient would fold the cell onto
                    // itself and cell-counting homology would be invalid.
                    let pointwise = key.iter().all(|x| &reflect_rat(x, g) == x);
                    if !pointwise {
                        return Err(Error::Unsupported(
                            "boundary identification folds a cell onto itself".into(),
                        ));
                    }
                }
                if image < best {
                    best = image;
                }
            }
            m.insert(key.clone(), best);
        }
        canon_of.push(m);
    }
    // Pass 2: number the classes (in canonical-key order per dimension).
    let mut class_index: Vec<BTreeMap<Key, usize>> = Vec::with_capacity(kc.levels.len());
    for level_canon in &canon_of {
        let classes: BTreeSet<&Key> = level_canon.values().collect();
        class_index.push(classes.into_iter().cloned().zip(0..).collect());
    }
    // Pass 3: assemble cells from representatives.
    let mut vertices: Vec<QVec> = Vec::new();
    if let Some(level0) = class_index.first() {
        for (key, &idx) in level0 {
            debug_assert_eq!(idx, vertices.len());
            vertices.push(key[0].clone());
        }
    }
    let mut cells: Vec<Vec<Cell>> = Vec::with_capacity(kc.levels.len());
    for (p, level_classes) in class_index.iter().enumerate() {
        let mut level_cells = vec![
            Cell { vertex_indices: Vec::new(), boundary: Vec::new() };
            level_classes.len()
        ];
        for (canon_key, &idx) in level_classes {
            // The canonical key is itself an original cell of the complex
            // (orbits permute cells), so its boundary is recorded.
            let boundary_keys = &kc.levels[p][canon_key];
            let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
            for bk in boundary_keys {
                let cls = class_index[p - 1][&canon_of[p - 1][bk]];
                *counts.entry(cls).or_insert(0) += 1;
            }
            let boundary: Vec<usize> = counts
                .into_iter()
                .filter(|(_, c)| c % 2 == 1)
                .map(|(cls, _)| cls)
                .collect();
            let mut vset: BTreeSet<usize> = BTreeSet::new();
            for x in canon_key {
                let vkey = vec![x.clone()];
                let vcls = class_index[0][&canon_of[0][&vkey]];
                vset.insert(vcls);
            }
            level_cells[idx] = Cell {
                vertex_indices: vset.into_iter().collect(),
                boundary,
            };
        }
        cells.push(level_cells);
    }
    // Map every original key to its class.
    let key_class: Vec<BTreeMap<Key, usize>> = canon_of
        .iter()
        .zip(&class_index)
        .map(|(canon, idx)| {
            canon
                .iter()
                .map(|(key, rep)| (key.clone(), idx[rep]))
                .collect()
        })
        .collect();
    Ok((PLComplex { vertices, cells }, key_class))
}

/// Assemble a keyed complex verbatim (no identifications).
fn assemble_key_complex(kc: &KeyComplex) -> PLComplex {
    let index: Vec<BTreeMap<&Key, usize>> = kc
        .levels
        .iter()
        .map(|level| level.keys().zip(0..).collect())
        .collect();
    let mut vertices: Vec<QVec> = Vec::new();
    if let Some(level0) = kc.levels.first() {
        for key in level0.keys() {
            vertices.push(key[0].clone());
        }
    }
    let cells: Vec<Vec<Cell>> = kc
        .levels
        .iter()
        .enumerate()
        .map(|(p, level)| {
            level
                .iter()
                .map(|(key, boundary_keys)| {
                    let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
                    for bk in boundary_keys {
                        *counts.entry(index[p - 1][bk]).or_insert(0) += 1;
                    }
                    let boundary: Vec<usize> = counts
                        .into_iter()
                        .filter(|(_, c)| c % 2 == 1)
                        .map(|(f, _)| f)
                        .collect();
                    let mut vset: BTreeSet<usize> = BTreeSet::new();
                    for x in key {
                        vset.insert(index[0][&vec![x.clone()]]);
                    }
                    Cell { vertex_indices: vset.into_iter().collect(), boundary }
                })
                .collect()
        })
        .collect();
    PLComplex { vertices, cells }
}

/// The separating piecewise-linear hypersurface inside the symmetric
/// complex (no boundary identifications): for every top simplex carrying
/// both signs, the convex hull of the midpoints of its opposite-sign
/// edges, glued with its neighbors along shared faces.
pub fn build_hypersurface(s: &SignedComplex) -> PLComplex {
    assemble_key_complex(&hypersurface_key_complex(s))
}

/// The compactified ambient space: the full symmetric complex with its
/// boundary faces identified by the parity rule over the saturated normal
/// span of the walls containing each face.
pub fn quotient_complex(s: &SignedComplex) -> Result<(PLComplex, QuotientMap)> {
    let kc = star_key_complex(s);
    let (complex, key_class) = quotient_key_complex(&kc, &s.base, s.dim)?;
    // Translate coordinate keys back to vertex indices of s.
    let coord_index: BTreeMap<QVec, usize> = s
        .vertices
        .iter()
        .enumerate()
        .map(|(i, v)| (int_to_rat(v), i))
        .collect();
    let num_classes = complex.cells.first().map_or(0, Vec::len);
    let mut vertex_classes: Vec<Vec<usize>> = vec![Vec::new(); num_classes];
    let mut vertex_class_of: Vec<usize> = vec![usize::MAX; s.vertices.len()];
    if let Some(level0) = key_class.first() {
        for (key, &cls) in level0 {
            let vi = coord_index[&key[0]];
            vertex_classes[cls].push(vi);
            vertex_class_of[vi] = cls;
        }
    }
    // Unused vertices (not part of any simplex) have no cell; give them
    // fresh singleton classes so the map stays total.
    for (vi, cls) in vertex_class_of.iter_mut().enumerate() {
        if *cls == usize::MAX {
            vertex_classes.push(vec![vi]);
            *cls = vertex_classes.len() - 1;
        }
    }
    let cell_class_of: Vec<BTreeMap<Vec<usize>, usize>> = key_class
        .iter()
        .map(|level| {
            level
                .iter()
                .map(|(key, &cls)| {
                    let mut tuple: Vec<usize> =
                        key.iter().map(|x| coord_index[x]).collect();
                    tuple.sort_unstable();
                    (tuple, cls)
                })
                .collect()
        })
        .collect();
    Ok((
        complex,
        QuotientMap { vertex_classes, vertex_class_of, cell_class_of },
    ))
}

/// The separating hypersurface with the boundary identifications applied:
/// the subset of the compactified space actually realized by the signs.
pub fn hypersurface_quotient(s: &SignedComplex) -> Result<PLComplex> {
    Ok(hypersurface_quotient_indexed(s)?.0)
}

/// Like [`hypersurface_quotient`], but also returns, per dimension, the map
/// from every cell of the un-identified hypersurface (keyed by its sorted
/// vertex coordinates) to the index of its identification class.  This lets
/// callers translate explicitly constructed cells into the quotient complex.
pub fn hypersurface_quotient_indexed(
    s: &SignedComplex,
) -> Result<(PLComplex, Vec<BTreeMap<Key, usize>>)> {
    let kc = hypersurface_key_complex(s);
    quotient_key_complex(&kc, &s.base, s.dim)
}

/// Idempotence of the identification rule: re-deriving each vertex's
/// identification subgroup from the boundary walls through it and applying
/// it again never leaves the vertex's class.
pub fn quotient_idempotent(s: &SignedComplex, map: &QuotientMap) -> bool {
    let pieces = boundary_pieces(&s.base, s.dim);
    s.vertices.iter().enumerate().all(|(vi, v)| {
        let key = vec![int_to_rat(v)];
        let active = active_pieces(&s.base, &pieces, &key);
        let group = parity_subgroup(&pieces, &active);
        group.iter().all(|&g| {
            let image = reflect_point(v, g);
            match s.vertices.binary_search(&image) {
                Ok(wi) => map.vertex_class_of[wi] == map.vertex_class_of[vi],
                Err(_) => false,
            }
        })
    })
}

/// Full patchworking pipeline: extend the signed triangulation
/// symmetrically, cut out the separating hypersurface, apply the boundary
/// identifications, and return its Z2 Betti numbers (padded to length `d`)
/// plus their sum.  The triangulation must be valid and carry a lifting
/// whose strict convexity is verified.
pub fn patchwork_real_betti(
    base: &LatticePolytope,
    t: &Triangulation,
    signs: &[i8],
) -> Result<(Vec<usize>, usize)> {
    if !check_convexity(t)? {
        return Err(Error::NotConvex(
            "the triangulation's lifting is not strictly convex".into(),
        ));
    }
    let s = extend_symmetric(base, t, signs)?;
    let h = hypersurface_quotient(&s)?;
    let mut betti = h.betti_z2()?;
    let total = betti.iter().sum();
    betti.resize(s.dim.max(betti.len()), 0);
    Ok((betti, total))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::convex_hull;
    use crate::triangulation::primitive_convex_2d;
    use crate::{int, rat_int};

    fn pts(rows: &[&[i64]]) -> IMat {
        rows.iter().map(|r| r.iter().map(|&c| int(c)).collect()).collect()
    }

    /// The segment [0, m] with unit cells and a strictly convex lifting.
    fn segment(m: i64) -> (LatticePolytope, Triangulation) {
        let poly = convex_hull(&pts(&[&[0], &[m]])).unwrap();
        let points: IMat = (0..=m).map(|i| vec![int(i)]).collect();
        let t = Triangulation {
            points,
            simplices: (0..m as usize).map(|i| vec![i, i + 1]).collect(),
            lifting: Some((0..=m).map(|i| rat_int(i * i)).collect()),
        };
        (poly, t)
    }

    /// A single-simplex triangulation with the zero lifting.
    fn one_simplex(points: IMat) -> (LatticePolytope, Triangulation) {
        let poly = convex_hull(&points).unwrap();
        let n = points.len();
        let t = Triangulation {
            points,
            simplices: vec![(0..n).collect()],
            lifting: Some(vec![rat_int(0); n]),
        };
        (poly, t)
    }

    #[test]
    fn parity_rule_on_reflected_segment() {
        let (poly, t) = segment(2);
        let s = extend_symmetric(&poly, &t, &[1, 1, 1]).unwrap();
        assert_eq!(s.vertices, pts(&[&[-2], &[-1], &[0], &[1], &[2]]));
        assert_eq!(s.signs, vec![1, -1, 1, 1, 1]);
        assert_eq!(s.simplices.len(), 4);
        assert_eq!(s.per_orthant.len(), 2);
    }

    #[test]
    fn parity_rule_pointwise() {
        // All-even points keep their sign under every reflection.
        let p = vec![int(2), int(4)];
        for mask in 0..4 {
            assert_eq!(extended_sign(1, &p, mask), 1);
            assert_eq!(extended_sign(-1, &p, mask), -1);
        }
        // (1,2): flipping the first coordinate negates, the second keeps.
        let q = vec![int(1), int(2)];
        assert_eq!(extended_sign(1, &q, 0b01), -1);
        assert_eq!(extended_sign(1, &q, 0b10), 1);
        assert_eq!(extended_sign(1, &q, 0b11), -1);
    }

    #[test]
    fn extension_validates_input() {
        let (poly, t) = segment(2);
        assert!(extend_symmetric(&poly, &t, &[1, 1]).is_err());
        assert!(extend_symmetric(&poly, &t, &[1, 0, 1]).is_err());
        let bad = Triangulation {
            points: t.points.clone(),
            simplices: vec![vec![0, 1]],
            lifting: None,
        };
        assert!(extend_symmetric(&poly, &bad, &[1, 1, 1]).is_err());
    }

    #[test]
    fn hypersurface_of_signed_unit_segment() {
        let (poly, t) = segment(1);
        let s = extend_symmetric(&poly, &t, &[1, -1]).unwrap();
        let h = build_hypersurface(&s);
        assert_eq!(h.cell_counts(), vec![1]);
        assert_eq!(h.vertices, vec![vec![Rat::new(int(1), int(2))]]);
        assert_eq!(h.betti_z2().unwrap(), vec![1]);
    }

    #[test]
    fn hypersurface_of_signed_triangle() {
        // Unit triangle, signs +, +, -: inside the base copy exactly one
        // segment between the midpoints (0, 1/2) and (1/2, 1/2); the full
        // symmetric hypersurface is a 3-segment path (the other two legs
        // come from the sign-reflected copies).
        let (poly, t) = one_simplex(pts(&[&[0, 0], &[1, 0], &[0, 1]]));
        let s = extend_symmetric(&poly, &t, &[1, 1, -1]).unwrap();
        let h = build_hypersurface(&s);
        assert_eq!(h.cell_counts(), vec![4, 3]);
        assert_eq!(h.betti_z2().unwrap(), vec![1, 0]);
        let half = Rat::new(int(1), int(2));
        let zero = rat_int(0);
        let base_cell = vec![vec![zero.clone(), half.clone()], vec![half.clone(), half.clone()]];
        let found = h.cells[1].iter().any(|c| {
            let coords: Vec<QVec> =
                c.vertex_indices.iter().map(|&v| h.vertices[v].clone()).collect();
            coords == base_cell
        });
        assert!(found, "base-copy separating segment missing");
        // After boundary identification the path closes up into a circle.
        let hq = hypersurface_quotient(&s).unwrap();
        assert_eq!(hq.betti_z2().unwrap(), vec![1, 1]);
    }

    #[test]
    fn uniform_signs_on_even_points_give_empty_hypersurface() {
        // Both vertices all-even: every reflected copy keeps uniform signs.
        let poly = convex_hull(&pts(&[&[0], &[2]])).unwrap();
        let t = Triangulation {
            points: pts(&[&[0], &[2]]),
            simplices: vec![vec![0, 1]],
            lifting: Some(vec![rat_int(0); 2]),
        };
        let (betti, total) = patchwork_real_betti(&poly, &t, &[1, 1]).unwrap();
        assert_eq!(betti, vec![0]);
        assert_eq!(total, 0);
    }

    #[test]
    fn quotient_of_segment_is_circle() {
        for m in 1..=3 {
            let (poly, t) = segment(m);
            let signs = vec![1; (m + 1) as usize];
            let s = extend_symmetric(&poly, &t, &signs).unwrap();
            let (c, map) = quotient_complex(&s).unwrap();
            assert_eq!(c.betti_z2().unwrap(), vec![1, 1], "m = {m}");
            assert_eq!(c.euler_char(), 0);
            assert_eq!(c.cell_counts(), vec![2 * m as usize, 2 * m as usize]);
            assert!(quotient_idempotent(&s, &map));
        }
    }

    #[test]
    fn quotient_map_details_on_segment() {
        let (poly, t) = segment(2);
        let s = extend_symmetric(&poly, &t, &[1, 1, 1]).unwrap();
        let (_, map) = quotient_complex(&s).unwrap();
        // Vertices of s: -2, -1, 0, 1, 2 at indices 0..5.
        assert_eq!(map.vertex_class_of[0], map.vertex_class_of[4]);
        assert_ne!(map.vertex_class_of[1], map.vertex_class_of[3]);
        let classes: BTreeSet<usize> = map.vertex_class_of.iter().copied().collect();
        assert_eq!(classes.len(), 4);
        // The two extreme edges stay distinct cells (only their far
        // endpoints are identified).
        let e_left = map.cell_class_of[1][&vec![0, 1]];
        let e_right = map.cell_class_of[1][&vec![3, 4]];
        assert_ne!(e_left, e_right);
    }

    #[test]
    fn quotient_of_triangle_is_projective_plane() {
        let (poly, t) = one_simplex(pts(&[&[0, 0], &[1, 0], &[0, 1]]));
        let s = extend_symmetric(&poly, &t, &[1, 1, 1]).unwrap();
        let (c, map) = quotient_complex(&s).unwrap();
        assert_eq!(c.betti_z2().unwrap(), vec![1, 1, 1]);
        assert_eq!(c.euler_char(), 1);
        assert!(quotient_idempotent(&s, &map));
    }

    #[test]
    fn quotient_of_bigger_triangle_is_projective_plane() {
        let poly = convex_hull(&pts(&[&[0, 0], &[2, 0], &[0, 2]])).unwrap();
        let t = primitive_convex_2d(&poly).unwrap();
        let s = extend_symmetric(&poly, &t, &vec![1; t.points.len()]).unwrap();
        let (c, _) = quotient_complex(&s).unwrap();
        assert_eq!(c.betti_z2().unwrap(), vec![1, 1, 1]);
    }

    #[test]
    fn quotient_of_tetrahedron_is_projective_space() {
        let (poly, t) = one_simplex(pts(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]));
        let s = extend_symmetric(&poly, &t, &[1, 1, 1, 1]).unwrap();
        let (c, map) = quotient_complex(&s).unwrap();
        assert_eq!(c.betti_z2().unwrap(), vec![1, 1, 1, 1]);
        assert!(quotient_idempotent(&s, &map));
    }

    #[test]
    fn real_line_in_the_plane() {
        // Degree-1 curve: one circle.
        let (poly, t) = one_simplex(pts(&[&[0, 0], &[1, 0], &[0, 1]]));
        let (betti, total) = patchwork_real_betti(&poly, &t, &[1, 1, -1]).unwrap();
        assert_eq!(betti, vec![1, 1]);
        assert_eq!(total, 2);
    }

    #[test]
    fn three_points_from_an_alternating_cubic() {
        let (poly, t) = segment(3);
        let (betti, total) = patchwork_real_betti(&poly, &t, &[1, -1, 1, -1]).unwrap();
        assert_eq!(betti, vec![3]);
        assert_eq!(total, 3);
    }

    #[test]
    fn harnack_quartic_has_four_components() {
        let poly = convex_hull(&pts(&[&[0, 0], &[4, 0], &[0, 4]])).unwrap();
        let t = primitive_convex_2d(&poly).unwrap();
        let signs: Vec<i8> = t
            .points
            .iter()
            .map(|p| {
                if p[0].is_even() && p[1].is_even() {
                    -1
                } else {
                    1
                }
            })
            .collect();
        let (betti, total) = patchwork_real_betti(&poly, &t, &signs).unwrap();
        assert_eq!(betti, vec![4, 4]);
        assert_eq!(total, 8);
    }

    fn skew_tetra(k: i64) -> (LatticePolytope, Triangulation) {
        one_simplex(pts(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[1, 1, k]]))
    }

    #[test]
    fn skew_tetrahedron_odd_k_total_three() {
        for k in [1, 3] {
            let (poly, t) = skew_tetra(k);
            for choice in 0..16u32 {
                let signs: Vec<i8> =
                    (0..4).map(|i| if choice >> i & 1 == 1 { -1 } else { 1 }).collect();
                let (_, total) = patchwork_real_betti(&poly, &t, &signs).unwrap();
                assert_eq!(total, 3, "k = {k}, sign choice {choice:04b}");
            }
        }
    }

    #[test]
    fn skew_tetrahedron_even_k_reaches_eight() {
        let (poly, t) = skew_tetra(2);
        let mut best_total = 0;
        let mut full_orthant_totals: BTreeSet<usize> = BTreeSet::new();
        for choice in 0..16u32 {
            let signs: Vec<i8> =
                (0..4).map(|i| if choice >> i & 1 == 1 { -1 } else { 1 }).collect();
            let s = extend_symmetric(&poly, &t, &signs).unwrap();
            let mixed = orthant_mixed(&s);
            let (_, total) = patchwork_real_betti(&poly, &t, &signs).unwrap();
            best_total = best_total.max(total);
            if mixed.iter().all(|&b| b) {
                full_orthant_totals.insert(total);
            }
        }
        assert_eq!(best_total, 8);
        assert!(
            full_orthant_totals.contains(&8),
            "some all-orthant sign choice must reach total 8, saw {full_orthant_totals:?}"
        );
    }

    #[test]
    fn orthant_mixing_flags() {
        let (poly, t) = segment(1);
        let s = extend_symmetric(&poly, &t, &[1, -1]).unwrap();
        // Base copy mixed; the reflected copy has signs +, + (parity flip).
        assert_eq!(orthant_mixed(&s), vec![true, false]);
    }
}
