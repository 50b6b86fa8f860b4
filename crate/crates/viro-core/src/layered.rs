//! Component-maximizing constructions on dilated standard simplices.
//!
//! The module builds a convex primitive triangulation of the dilate
//! `m·T^d` (`T^d` the standard simplex) by joining faces of consecutive
//! horizontal levels, equips it with parity signs, and produces explicit
//! witnesses for many independent Z2-homology classes of the resulting
//! patchworked hypersurface: each witness pairs a cycle made of separating
//! cells ("narrow") with a complementary-dimension cycle of triangulation
//! simplices avoiding the hypersurface ("dual").  Witnesses are verified
//! exactly against the quotient complexes.  A gluing routine transports the
//! same data into the interior of every cell of an arbitrary convex
//! primitive triangulation after dilation, yielding sign distributions
//! whose hypersurfaces have large total Betti number.

use crate::error::{Error, Result};
use crate::linalg::{IMat, IVec, solve_rational, to_rat_vec};
use crate::patchwork::{
    extend_symmetric, hypersurface_quotient_indexed, quotient_complex, Key,
};
use crate::polytope::{convex_hull, LatticePolytope};
use crate::triangulation::{
    check_convexity, check_valid, convexity_certificate, is_primitive,
    lower_hull_cells, validate_triangulation, Triangulation,
};
use crate::{int, rat_int, Int, Rat};
use num_integer::Integer;
use num_traits::{Signed, Zero};
use std::collections::{BTreeMap, BTreeSet};
use std::rc::Rc;

// ---------------------------------------------------------------------------
// Layered triangulation of m·T^d
// ---------------------------------------------------------------------------

/// The layered triangulation of `m·T^d` together with its bookkeeping:
/// which slab (`j`) and face split (`l`) each top simplex came from.
#[derive(Clone, Debug)]
pub struct LayeredTriangulation {
    /// Ambient dimension `d`.
    pub dim: usize,
    /// Dilation factor `m`.
    pub size: i64,
    /// The triangulation, with a verified convexity certificate.
    pub triangulation: Triangulation,
    /// Per top simplex (parallel to `triangulation.simplices`): the slab
    /// index `j` and the face dimension `l` of the join that produced it.
    pub join_of: Vec<(i64, usize)>,
}

type CellMemo = BTreeMap<(usize, i64), Rc<Vec<Vec<IVec>>>>;

/// Top cells of the layered triangulation of `s·T^k` in local coordinates,
/// each a sorted list of lattice points.
fn layered_cells(k: usize, s: i64, memo: &mut CellMemo) -> Rc<Vec<Vec<IVec>>> {
    if let Some(c) = memo.get(&(k, s)) {
        return Rc::clone(c);
    }
    let cells: Vec<Vec<IVec>> = if k == 1 {
        (0..s).map(|i| vec![vec![int(i)], vec![int(i + 1)]]).collect()
    } else {
        layered_cells_tagged(k, s, memo).into_iter().map(|(c, _)| c).collect()
    };
    let rc = Rc::new(cells);
    memo.insert((k, s), Rc::clone(&rc));
    rc
}

/// Top cells with their `(slab, face-split)` provenance.  For `k == 1` the
/// slab index of `[i, i+1]` is `s-1-i` (the slab adjacent to level `s-i`).
fn layered_cells_tagged(
    k: usize,
    s: i64,
    memo: &mut CellMemo,
) -> Vec<(Vec<IVec>, (i64, usize))> {
    if k == 1 {
        return (0..s)
            .map(|i| {
                (vec![vec![int(i)], vec![int(i + 1)]], (s - 1 - i, 0))
            })
            .collect();
    }
    let mut out = Vec::new();
    for j in 0..s {
        for l in 0..k {
            let upper = face_cells(k, s, j + 1, l, memo);
            let lower = face_cells(k, s, j, k - 1 - l, memo);
            for a in &upper {
                for b in &lower {
                    let mut cell: Vec<IVec> =
                        a.iter().chain(b.iter()).cloned().collect();
                    cell.sort();
                    out.push((cell, (j, l)));
                }
            }
        }
    }
    out
}

/// The single vertex of the 0-dimensional distinguished face of the level
/// simplex of size `level` at height `h` inside `k` coordinates: at even
/// height the origin-side vertex, at odd height the vertex on the last
/// interior axis.
fn level_anchor_vertex(k: usize, level: i64, h: i64) -> IVec {
    let mut v = vec![Int::zero(); k];
    v[k - 1] = int(h);
    if h.rem_euclid(2) == 1 {
        v[k - 2] = int(level);
    }
    v
}

/// Cells of the `f`-dimensional distinguished face of the level simplex of
/// size `level` (height `s - level`), as point lists in `k` coordinates.
fn face_cells(
    k: usize,
    s: i64,
    level: i64,
    f: usize,
    memo: &mut CellMemo,
) -> Vec<Vec<IVec>> {
    let h = s - level;
    if f == 0 {
        return vec![vec![level_anchor_vertex(k, level, h)]];
    }
    if level == 0 {
        return Vec::new();
    }
    let local = layered_cells(f, level, memo);
    local
        .iter()
        .map(|cell| {
            let mut mapped: Vec<IVec> = cell
                .iter()
                .map(|y| face_embed_point(k, level, h, f, y))
                .collect();
            mapped.sort();
            mapped
        })
        .collect()
}

/// Embed a (nonnegative) local point of the `f`-face of the level simplex
/// of size `level` at height `h` into `k` ambient coordinates.  At even
/// heights the face spans the first `f` axes; at odd heights it is the
/// opposite face, spanned affinely from the vertex on axis `k-f-2`.
fn face_embed_point(k: usize, level: i64, h: i64, f: usize, y: &[Int]) -> IVec {
    let mut out = vec![Int::zero(); k];
    out[k - 1] = int(h);
    if f == k - 1 {
        out[..k - 1].clone_from_slice(y);
    } else if h.rem_euclid(2) == 0 {
        out[..f].clone_from_slice(y);
    } else {
        let slack = k - f - 2;
        let sum: Int = y.iter().sum();
        out[slack] = int(level) - sum;
        for (i, c) in y.iter().enumerate() {
            out[slack + 1 + i] = c.clone();
        }
    }
    out
}

fn pow_i64(m: i64, d: usize) -> i64 {
    (0..d).fold(1i64, |a, _| a.saturating_mul(m))
}

/// The layered triangulation without a certificate: polytope, triangulation
/// (lifting `None`), and join bookkeeping.
fn layered_raw(
    d: usize,
    m: i64,
) -> Result<(LatticePolytope, Triangulation, Vec<(i64, usize)>)> {
    if d == 0 || m <= 0 {
        return Err(Error::InvalidInput(
            "the layered triangulation needs dimension >= 1 and size >= 1".into(),
        ));
    }
    let mut corners: IMat = vec![vec![Int::zero(); d]];
    for i in 0..d {
        let mut v = vec![Int::zero(); d];
        v[i] = int(m);
        corners.push(v);
    }
    let poly = convex_hull(&corners)?;
    let mut memo = CellMemo::new();
    let tagged = layered_cells_tagged(d, m, &mut memo);
    let mut point_set: BTreeSet<IVec> = BTreeSet::new();
    for (cell, _) in &tagged {
        for p in cell {
            point_set.insert(p.clone());
        }
    }
    let points: IMat = point_set.into_iter().collect();
    if points.len() != poly.lattice_points().len() {
        return Err(Error::InvalidTriangulation(
            "the layered triangulation must use every lattice point".into(),
        ));
    }
    let index: BTreeMap<&IVec, usize> =
        points.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let mut simplices = Vec::with_capacity(tagged.len());
    let mut join_of = Vec::with_capacity(tagged.len());
    for (cell, tag) in &tagged {
        let mut s: Vec<usize> = cell.iter().map(|p| index[p]).collect();
        s.sort_unstable();
        simplices.push(s);
        join_of.push(*tag);
    }
    if simplices.len() as i64 != pow_i64(m, d) {
        return Err(Error::InvalidTriangulation(format!(
            "expected {} top simplices, built {}",
            pow_i64(m, d),
            simplices.len()
        )));
    }
    let t = Triangulation { points, simplices, lifting: None };
    Ok((poly, t, join_of))
}

/// Build the layered triangulation of `m·T^d` and certify its convexity
/// with an explicitly constructed lifting.
pub fn layered_triangulation(d: usize, m: i64) -> Result<LayeredTriangulation> {
    let (_poly, mut t, join_of) = layered_raw(d, m)?;
    let lifting = convexity_certificate(&t.points, &t.simplices)?;
    t.lifting = Some(lifting);
    if !check_convexity(&t)? {
        return Err(Error::NotConvex(
            "the constructed lifting failed the exact convexity check".into(),
        ));
    }
    Ok(LayeredTriangulation { dim: d, size: m, triangulation: t, join_of })
}

impl LayeredTriangulation {
    /// Vertices of the distinguished `l`-face of the level simplex of size
    /// `j` (at height `size - j`): at even height the first `l+1` vertices
    /// in the canonical numbering, at odd height the last `l+1`.
    pub fn face_vertices(&self, j: i64, l: usize) -> Result<Vec<IVec>> {
        let d = self.dim;
        if j < 0 || j > self.size || l >= d {
            return Err(Error::InvalidInput(
                "face query outside the level structure".into(),
            ));
        }
        let h = self.size - j;
        // Canonical numbering: vertex 1 is the origin-side vertex, vertex
        // i+1 sits on axis i.
        let vertex = |t: usize| -> IVec {
            let mut v = vec![Int::zero(); d];
            v[d - 1] = int(h);
            if t >= 2 {
                v[t - 2] = int(j);
            }
            v
        };
        let range: Vec<usize> = if l == d - 1 || h.rem_euclid(2) == 0 {
            (1..=l + 1).collect()
        } else {
            (d - l..=d).collect()
        };
        Ok(range.into_iter().map(vertex).collect())
    }
}

/// Extended sign of an arbitrary lattice point of the reflected union: the
/// parity of the absolute coordinate sum, twisted once for every reflected
/// odd coordinate.
pub fn extended_parity_sign(q: &[Int]) -> i8 {
    let mut flips = 0usize;
    for c in q {
        if c.abs().is_odd() {
            flips += 1;
            if c.is_negative() {
                flips += 1;
            }
        }
    }
    if flips % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Parity signs on a point set: `+` exactly when the coordinate sum is even.
pub fn parity_signs(points: &IMat) -> Vec<i8> {
    points.iter().map(|p| extended_parity_sign(p)).collect()
}

// ---------------------------------------------------------------------------
// Cycle witnesses
// ---------------------------------------------------------------------------

/// One separating product cell, written through the two sign classes of its
/// carrier simplex: the cell is the set of midpoints between the `plus` and
/// `minus` groups.  Its dimension is `plus.len() + minus.len() - 2`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct NarrowCell {
    /// Positive-sign carrier points, sorted.
    pub plus: Vec<IVec>,
    /// Negative-sign carrier points, sorted.
    pub minus: Vec<IVec>,
}

impl NarrowCell {
    /// Partition carrier points by extended sign; both classes must be
    /// nonempty for the cell to meet the separating hypersurface.
    pub(crate) fn from_points(points: impl IntoIterator<Item = IVec>) -> Result<Self> {
        let mut plus = Vec::new();
        let mut minus = Vec::new();
        for p in points {
            if extended_parity_sign(&p) == 1 {
                plus.push(p);
            } else {
                minus.push(p);
            }
        }
        if plus.is_empty() || minus.is_empty() {
            return Err(Error::SearchFailed(
                "a transported cell is no longer separated by the sign rule".into(),
            ));
        }
        plus.sort();
        minus.sort();
        Ok(NarrowCell { plus, minus })
    }

    /// All carrier points, sorted.
    pub(crate) fn carrier(&self) -> Vec<IVec> {
        let mut c: Vec<IVec> =
            self.plus.iter().chain(self.minus.iter()).cloned().collect();
        c.sort();
        c
    }

    /// Cell dimension.
    pub fn dim(&self) -> usize {
        self.plus.len() + self.minus.len() - 2
    }

    /// The cell's identity in the symmetric complex: its sorted midpoints.
    fn key(&self) -> Key {
        let mut coords = Vec::with_capacity(self.plus.len() * self.minus.len());
        for a in &self.plus {
            for b in &self.minus {
                coords.push(
                    a.iter()
                        .zip(b)
                        .map(|(x, y)| Rat::new(x + y, int(2)))
                        .collect::<Vec<Rat>>(),
                );
            }
        }
        coords.sort();
        coords
    }
}

/// Which construction produced a witness.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CycleFamily {
    /// Dimension-one base list: adjacent separating points around an
    /// interior vertex.
    Base,
    /// A lower-dimensional narrow cycle placed in one level, with the dual
    /// cycle suspended to the neighbor levels.
    Horizontal,
    /// The narrow cycle suspended to the neighbor levels, with the dual
    /// kept in the level.
    CoHorizontal,
    /// Product of two witnesses from complementary faces of consecutive
    /// levels.
    Join,
}

/// A verified-checkable certificate for one independent homology class of
/// the patchworked hypersurface: a cycle of separating cells together with
/// a complementary-dimension cycle of triangulation simplices avoiding the
/// hypersurface.
#[derive(Clone, Debug)]
pub struct CycleWitness {
    /// Z2 chain of separating cells, all of dimension `narrow_dim`.
    pub narrow: Vec<NarrowCell>,
    /// Z2 chain of simplices of the reflected triangulation (sorted vertex
    /// point lists), all of dimension `d - 1 - narrow_dim`.
    pub dual: Vec<Vec<IVec>>,
    /// Which construction produced the witness.
    pub family: CycleFamily,
    /// Dimension of the narrow cycle.
    pub narrow_dim: usize,
}

/// Face-membership oracle for the reflected layered triangulation: every
/// nonempty face of every reflected top simplex, as sorted point lists.
struct Ambient {
    faces: BTreeSet<Vec<IVec>>,
}

impl Ambient {
    fn is_face(&self, mut pts: Vec<IVec>) -> bool {
        pts.sort();
        pts.dedup();
        self.faces.contains(&pts)
    }
}

type AmbientMemo = BTreeMap<(usize, i64), Rc<Ambient>>;
type WitnessMemo = BTreeMap<(usize, i64), Rc<Vec<CycleWitness>>>;

fn ambient_for(d: usize, m: i64, memo: &mut AmbientMemo) -> Rc<Ambient> {
    if let Some(a) = memo.get(&(d, m)) {
        return Rc::clone(a);
    }
    let mut cell_memo = CellMemo::new();
    let cells = layered_cells(d, m, &mut cell_memo);
    let mut faces: BTreeSet<Vec<IVec>> = BTreeSet::new();
    for cell in cells.iter() {
        for mask in 0..1usize << d {
            let reflected: Vec<IVec> = cell
                .iter()
                .map(|p| {
                    p.iter()
                        .enumerate()
                        .map(|(i, c)| {
                            if mask >> i & 1 == 1 {
                                -c
                            } else {
                                c.clone()
                            }
                        })
                        .collect()
                })
                .collect();
            let n = reflected.len();
            for sub in 1..1usize << n {
                let mut f: Vec<IVec> = (0..n)
                    .filter(|i| sub >> i & 1 == 1)
                    .map(|i| reflected[i].clone())
                    .collect();
                f.sort();
                f.dedup();
                faces.insert(f);
            }
        }
    }
    let rc = Rc::new(Ambient { faces });
    memo.insert((d, m), Rc::clone(&rc));
    rc
}

fn reflect_one(p: &[Int], idx: usize) -> IVec {
    let mut q = p.to_vec();
    q[idx] = -&q[idx];
    q
}

/// Reflect every cell of a narrow chain in coordinate `idx` and re-derive
/// the sign partition.  The partition must survive with the same shape.
fn flip_narrow(cells: &[NarrowCell], idx: usize) -> Result<Vec<NarrowCell>> {
    cells
        .iter()
        .map(|c| {
            let shape = (c.plus.len().min(c.minus.len()), c.plus.len().max(c.minus.len()));
            let mapped = NarrowCell::from_points(
                c.carrier().iter().map(|p| reflect_one(p, idx)),
            )?;
            let new_shape = (
                mapped.plus.len().min(mapped.minus.len()),
                mapped.plus.len().max(mapped.minus.len()),
            );
            if new_shape != shape {
                return Err(Error::SearchFailed(
                    "reflection changed the separation shape of a cell".into(),
                ));
            }
            Ok(mapped)
        })
        .collect()
}

fn flip_dual(dual: &[Vec<IVec>], idx: usize) -> Vec<Vec<IVec>> {
    dual.iter()
        .map(|s| {
            let mut t: Vec<IVec> = s.iter().map(|p| reflect_one(p, idx)).collect();
            t.sort();
            t
        })
        .collect()
}

/// The common extended sign of every vertex of a dual chain.
fn uniform_dual_sign(dual: &[Vec<IVec>]) -> Result<i8> {
    let mut sign = 0i8;
    for simplex in dual {
        for p in simplex {
            let s = extended_parity_sign(p);
            if sign == 0 {
                sign = s;
            } else if sign != s {
                return Err(Error::SearchFailed(
                    "a dual chain mixes both signs".into(),
                ));
            }
        }
    }
    if sign == 0 {
        return Err(Error::SearchFailed("empty dual chain".into()));
    }
    Ok(sign)
}

/// Append a fixed height to every point of a witness (placement of
/// dimension-`d-1` data into one level of the `d`-dimensional structure).
fn embed_level(
    w: &CycleWitness,
    h: i64,
) -> Result<(Vec<NarrowCell>, Vec<Vec<IVec>>)> {
    let lift = |p: &IVec| -> IVec {
        let mut q = p.clone();
        q.push(int(h));
        q
    };
    let narrow = w
        .narrow
        .iter()
        .map(|c| NarrowCell::from_points(c.carrier().iter().map(&lift)))
        .collect::<Result<Vec<_>>>()?;
    let dual = w
        .dual
        .iter()
        .map(|s| {
            let mut t: Vec<IVec> = s.iter().map(&lift).collect();
            t.sort();
            t
        })
        .collect();
    Ok((narrow, dual))
}

/// Placement frame of the distinguished `f`-face of the level simplex of
/// size `level` inside `d` coordinates.
struct FaceFrame {
    d: usize,
    f: usize,
    level: i64,
    h: i64,
    odd: bool,
}

fn face_frame(d: usize, f: usize, level: i64, m: i64) -> FaceFrame {
    let h = m - level;
    FaceFrame { d, f, level, h, odd: h.rem_euclid(2) == 1 }
}

/// Map a (possibly reflected) local point of the face's own symmetric
/// structure into ambient coordinates.  Odd-height faces compose the
/// affine placement with the global local reflection, which matches the
/// transported sign structure of the face.
fn face_map_point(fr: &FaceFrame, y: &[Int]) -> IVec {
    let mut out = vec![Int::zero(); fr.d];
    out[fr.d - 1] = int(fr.h);
    if !fr.odd {
        out[..fr.f].clone_from_slice(y);
    } else {
        let slack = fr.d - fr.f - 2;
        let abs_sum: Int = y.iter().map(|c| c.abs()).sum();
        out[slack] = int(fr.level) - abs_sum;
        for (i, c) in y.iter().enumerate() {
            out[slack + 1 + i] = -c;
        }
    }
    out
}

/// Place a witness of the `f`-dimensional face structure into the ambient
/// coordinates through its frame, re-deriving every sign partition.
fn embed_face(
    w: &CycleWitness,
    fr: &FaceFrame,
) -> Result<(Vec<NarrowCell>, Vec<Vec<IVec>>)> {
    let narrow = w
        .narrow
        .iter()
        .map(|c| {
            let shape =
                (c.plus.len().min(c.minus.len()), c.plus.len().max(c.minus.len()));
            let mapped = NarrowCell::from_points(
                c.carrier().iter().map(|p| face_map_point(fr, p)),
            )?;
            let new_shape = (
                mapped.plus.len().min(mapped.minus.len()),
                mapped.plus.len().max(mapped.minus.len()),
            );
            if new_shape != shape {
                return Err(Error::SearchFailed(
                    "face placement changed the separation shape of a cell".into(),
                ));
            }
            Ok(mapped)
        })
        .collect::<Result<Vec<_>>>()?;
    let dual = w
        .dual
        .iter()
        .map(|s| {
            let mut t: Vec<IVec> =
                s.iter().map(|p| face_map_point(fr, p)).collect();
            t.sort();
            t
        })
        .collect();
    Ok((narrow, dual))
}

/// Reflect face data across the face's full coordinate span (the mirror
/// position of the same face inside the reflected complex).
fn mirror_face(
    narrow: &[NarrowCell],
    dual: &[Vec<IVec>],
    fr: &FaceFrame,
) -> Result<(Vec<NarrowCell>, Vec<Vec<IVec>>)> {
    let lo = fr.d - fr.f - 2;
    let hi = fr.d - 2;
    let mirror = |p: &IVec| -> IVec {
        p.iter()
            .enumerate()
            .map(|(i, c)| if i >= lo && i <= hi { -c } else { c.clone() })
            .collect()
    };
    let n = narrow
        .iter()
        .map(|c| NarrowCell::from_points(c.carrier().iter().map(&mirror)))
        .collect::<Result<Vec<_>>>()?;
    let d = dual
        .iter()
        .map(|s| {
            let mut t: Vec<IVec> = s.iter().map(&mirror).collect();
            t.sort();
            t
        })
        .collect();
    Ok((n, d))
}

/// The base list in dimension one: for each interior point `i` of `[0, m]`
/// with both neighbors, the two separating points next to `i` form the
/// narrow cycle; the dual pair is `i` together with the endpoint-side
/// vertex of matching parity.
fn base_witnesses(m: i64) -> Vec<CycleWitness> {
    let mut out = Vec::new();
    for i in 1..=m - 2 {
        let narrow = vec![
            NarrowCell::from_points([vec![int(i - 1)], vec![int(i)]])
                .expect("adjacent integers have opposite parity"),
            NarrowCell::from_points([vec![int(i)], vec![int(i + 1)]])
                .expect("adjacent integers have opposite parity"),
        ];
        let second = if (m - i).rem_euclid(2) == 0 { m } else { m - 1 };
        let dual = vec![vec![vec![int(i)]], vec![vec![int(second)]]];
        out.push(CycleWitness {
            narrow,
            dual,
            family: CycleFamily::Base,
            narrow_dim: 0,
        });
    }
    out
}

/// Select the symmetric copies of the anchor vertices of the two neighbor
/// levels that are joined to every simplex of the dual chain `b`.
fn select_anchors(
    d: usize,
    m: i64,
    j: i64,
    amb: &Ambient,
    b: &[Vec<IVec>],
) -> Result<(IVec, IVec)> {
    let u0 = level_anchor_vertex(d, j + 1, m - j - 1);
    let w0 = level_anchor_vertex(d, j - 1, m - j + 1);
    let joined_to_all = |v: &IVec| -> bool {
        b.iter().all(|s| {
            let mut f = s.clone();
            f.push(v.clone());
            amb.is_face(f)
        })
    };
    let mut chosen: Option<bool> = None; // reflected?
    for reflected in [false, true] {
        let cand = if reflected { reflect_one(&u0, d - 2) } else { u0.clone() };
        if reflected && cand == u0 {
            continue;
        }
        if joined_to_all(&cand) {
            chosen = Some(reflected);
            break;
        }
    }
    let reflected = chosen.ok_or_else(|| {
        Error::SearchFailed(
            "no symmetric copy of the upper anchor vertex is joined to the dual chain"
                .into(),
        )
    })?;
    let u = if reflected { reflect_one(&u0, d - 2) } else { u0 };
    let w = if reflected { reflect_one(&w0, d - 2) } else { w0 };
    if !joined_to_all(&w) {
        return Err(Error::SearchFailed(
            "the lower anchor vertex is not joined to the dual chain".into(),
        ));
    }
    Ok((u, w))
}

/// Suspension of a dual chain to the two anchor vertices.
fn suspend_dual(
    b: &[Vec<IVec>],
    u: &IVec,
    w: &IVec,
    amb: &Ambient,
) -> Result<Vec<Vec<IVec>>> {
    let mut out = Vec::with_capacity(2 * b.len());
    for v in [u, w] {
        for s in b {
            let mut t = s.clone();
            t.push(v.clone());
            t.sort();
            if !amb.is_face(t.clone()) {
                return Err(Error::SearchFailed(
                    "a suspended dual simplex is not a face of the triangulation".into(),
                ));
            }
            out.push(t);
        }
    }
    Ok(out)
}

/// Suspension of a narrow chain to the two anchor vertices: each cell is
/// coned into the anchor on the side of the anchor's sign.
fn suspend_narrow(
    c: &[NarrowCell],
    u: &IVec,
    w: &IVec,
    amb: &Ambient,
) -> Result<Vec<NarrowCell>> {
    let mut out = Vec::with_capacity(2 * c.len());
    for v in [u, w] {
        for cell in c {
            let mut points = cell.carrier();
            points.push(v.clone());
            let coned = NarrowCell::from_points(points)?;
            if !amb.is_face(coned.carrier()) {
                return Err(Error::SearchFailed(
                    "a suspended cell's carrier is not a face of the triangulation".into(),
                ));
            }
            out.push(coned);
        }
    }
    Ok(out)
}

/// Horizontal family: place a witness of the level structure at level `j`,
/// reflect through the last coordinate when the anchor sign disagrees with
/// the dual sign, and suspend the dual chain to the neighbor levels.
fn horizontal_witness(
    w: &CycleWitness,
    j: i64,
    d: usize,
    m: i64,
    amb: &Ambient,
) -> Result<CycleWitness> {
    let (mut c, mut b) = embed_level(w, m - j)?;
    let (mut u, mut wv) = select_anchors(d, m, j, amb, &b)?;
    let eps = uniform_dual_sign(&b)?;
    if extended_parity_sign(&u) != eps {
        c = flip_narrow(&c, d - 1)?;
        b = flip_dual(&b, d - 1);
        u = reflect_one(&u, d - 1);
        wv = reflect_one(&wv, d - 1);
        if extended_parity_sign(&u) != uniform_dual_sign(&b)? {
            return Err(Error::SearchFailed(
                "anchor sign still disagrees after reflection".into(),
            ));
        }
    }
    let dual = suspend_dual(&b, &u, &wv, amb)?;
    Ok(CycleWitness {
        narrow: c,
        dual,
        family: CycleFamily::Horizontal,
        narrow_dim: w.narrow_dim,
    })
}

/// Co-horizontal family: same placement, but the suspension goes to the
/// narrow chain and the dual chain stays in the level.  The kept position
/// is the one where the anchor sign agrees with the narrow cycle's side
/// (the opposite of the dual sign).
fn cohorizontal_witness(
    w: &CycleWitness,
    j: i64,
    d: usize,
    m: i64,
    amb: &Ambient,
) -> Result<CycleWitness> {
    let (mut c, mut b) = embed_level(w, m - j)?;
    let (mut u, mut wv) = select_anchors(d, m, j, amb, &b)?;
    let eps = uniform_dual_sign(&b)?;
    if extended_parity_sign(&u) != -eps {
        c = flip_narrow(&c, d - 1)?;
        b = flip_dual(&b, d - 1);
        u = reflect_one(&u, d - 1);
        wv = reflect_one(&wv, d - 1);
        if extended_parity_sign(&u) != -uniform_dual_sign(&b)? {
            return Err(Error::SearchFailed(
                "anchor sign still agrees with the dual after reflection".into(),
            ));
        }
    }
    let narrow = suspend_narrow(&c, &u, &wv, amb)?;
    Ok(CycleWitness {
        narrow,
        dual: b,
        family: CycleFamily::CoHorizontal,
        narrow_dim: w.narrow_dim + 1,
    })
}

/// All cross unions of the two placed data sets must be faces of the
/// reflected triangulation: dual with dual, carrier with carrier.
fn cross_legal(
    c1: &[NarrowCell],
    b1: &[Vec<IVec>],
    c2: &[NarrowCell],
    b2: &[Vec<IVec>],
    amb: &Ambient,
) -> bool {
    for s1 in b1 {
        for s2 in b2 {
            let mut f = s1.clone();
            f.extend(s2.iter().cloned());
            if !amb.is_face(f) {
                return false;
            }
        }
    }
    for f1 in c1 {
        for f2 in c2 {
            let mut f = f1.carrier();
            f.extend(f2.carrier());
            if !amb.is_face(f) {
                return false;
            }
        }
    }
    true
}

/// Z2 product of a narrow cycle with a zero-dimensional narrow cycle: each
/// cell of the first is coned into the minus point of each pair, plus the
/// matching corner cell when the minus side was a single point.
fn staircase(cf: &[NarrowCell], cy: &[NarrowCell]) -> Result<Vec<NarrowCell>> {
    let mut acc: BTreeSet<NarrowCell> = BTreeSet::new();
    let mut toggle = |cell: NarrowCell| {
        if !acc.remove(&cell) {
            acc.insert(cell);
        }
    };
    for y in cy {
        if y.dim() != 0 {
            return Err(Error::Unsupported(
                "the product step needs a zero-dimensional factor".into(),
            ));
        }
        let cpt = &y.plus[0];
        let dpt = &y.minus[0];
        for f in cf {
            let mut minus = f.minus.clone();
            minus.push(dpt.clone());
            minus.sort();
            toggle(NarrowCell { plus: f.plus.clone(), minus });
            if f.minus.len() == 1 {
                let mut plus = f.plus.clone();
                plus.push(cpt.clone());
                plus.sort();
                toggle(NarrowCell { plus, minus: vec![dpt.clone()] });
            }
        }
    }
    Ok(acc.into_iter().collect())
}

/// Join family: place two witnesses into the complementary distinguished
/// faces of consecutive levels, align the odd face by its mirror when
/// needed, make the two dual signs agree (reflecting everything through
/// the last coordinate if not), then join the dual chains simplex-wise and
/// the narrow chains through the product construction.
fn join_witness(
    w1: &CycleWitness,
    w2: &CycleWitness,
    j: i64,
    l: usize,
    d: usize,
    m: i64,
    amb: &Ambient,
) -> Result<CycleWitness> {
    let fr1 = face_frame(d, l, j + 1, m);
    let fr2 = face_frame(d, d - 1 - l, j, m);
    let (c1, b1) = embed_face(w1, &fr1)?;
    let (c2, b2) = embed_face(w2, &fr2)?;
    debug_assert!(fr1.odd != fr2.odd);
    let configs: Vec<(Vec<NarrowCell>, Vec<Vec<IVec>>, Vec<NarrowCell>, Vec<Vec<IVec>>)> =
        if fr1.odd {
            let (mc, mb) = mirror_face(&c1, &b1, &fr1)?;
            vec![(c1, b1, c2.clone(), b2.clone()), (mc, mb, c2, b2)]
        } else {
            let (mc, mb) = mirror_face(&c2, &b2, &fr2)?;
            vec![(c1.clone(), b1.clone(), c2, b2), (c1, b1, mc, mb)]
        };
    let (mut c1, mut b1, mut c2, mut b2) = configs
        .into_iter()
        .find(|(c1, b1, c2, b2)| cross_legal(c1, b1, c2, b2, amb))
        .ok_or_else(|| {
            Error::SearchFailed(
                "no aligned position joins the two face witnesses".into(),
            )
        })?;
    if uniform_dual_sign(&b1)? != uniform_dual_sign(&b2)? {
        c1 = flip_narrow(&c1, d - 1)?;
        b1 = flip_dual(&b1, d - 1);
        c2 = flip_narrow(&c2, d - 1)?;
        b2 = flip_dual(&b2, d - 1);
        if uniform_dual_sign(&b1)? != uniform_dual_sign(&b2)? {
            return Err(Error::SearchFailed(
                "dual signs still disagree after reflection".into(),
            ));
        }
    }
    let mut dual = Vec::with_capacity(b1.len() * b2.len());
    for s1 in &b1 {
        for s2 in &b2 {
            let mut t = s1.clone();
            t.extend(s2.iter().cloned());
            t.sort();
            dual.push(t);
        }
    }
    let narrow = if w2.narrow_dim == 0 {
        staircase(&c1, &c2)?
    } else if w1.narrow_dim == 0 {
        staircase(&c2, &c1)?
    } else {
        return Err(Error::Unsupported(
            "joining two positive-dimensional narrow cycles is not implemented".into(),
        ));
    };
    Ok(CycleWitness {
        narrow,
        dual,
        family: CycleFamily::Join,
        narrow_dim: w1.narrow_dim + w2.narrow_dim + 1,
    })
}

fn witnesses_rec(
    d: usize,
    m: i64,
    wits: &mut WitnessMemo,
    ambs: &mut AmbientMemo,
) -> Result<Rc<Vec<CycleWitness>>> {
    if let Some(w) = wits.get(&(d, m)) {
        return Ok(Rc::clone(w));
    }
    let out = if d == 1 {
        base_witnesses(m)
    } else {
        let amb = ambient_for(d, m, ambs);
        let mut out = Vec::new();
        for j in 1..m {
            let subs = witnesses_rec(d - 1, j, wits, ambs)?;
            for w in subs.iter() {
                out.push(horizontal_witness(w, j, d, m, &amb)?);
            }
            for w in subs.iter() {
                out.push(cohorizontal_witness(w, j, d, m, &amb)?);
            }
            for l in 1..=d.saturating_sub(2) {
                let s1 = witnesses_rec(l, j + 1, wits, ambs)?;
                let s2 = witnesses_rec(d - 1 - l, j, wits, ambs)?;
                for w1 in s1.iter() {
                    for w2 in s2.iter() {
                        out.push(join_witness(w1, w2, j, l, d, m, &amb)?);
                    }
                }
            }
        }
        out
    };
    let rc = Rc::new(out);
    wits.insert((d, m), Rc::clone(&rc));
    Ok(rc)
}

/// The full recursive collection of cycle witnesses for the parity-signed
/// layered triangulation of `m·T^d`.
pub fn narrow_cycles(d: usize, m: i64) -> Result<Vec<CycleWitness>> {
    if d == 0 || m <= 0 {
        return Err(Error::InvalidInput(
            "cycle witnesses need dimension >= 1 and size >= 1".into(),
        ));
    }
    let mut wits = WitnessMemo::new();
    let mut ambs = AmbientMemo::new();
    let rc = witnesses_rec(d, m, &mut wits, &mut ambs)?;
    Ok((*rc).clone())
}

// ---------------------------------------------------------------------------
// Verification
// ---------------------------------------------------------------------------

/// Outcome of checking a witness collection against the quotient complexes.
#[derive(Clone, Debug)]
pub struct CycleReport {
    /// Number of witnesses checked.
    pub witness_count: usize,
    /// Witness indices whose narrow chain failed (cell not in the
    /// hypersurface quotient, wrong dimension, duplicate, or nonzero
    /// boundary).
    pub narrow_failures: Vec<usize>,
    /// Witness indices whose dual chain failed (simplex not in the ambient
    /// quotient, wrong dimension, duplicate, or nonzero boundary).
    pub dual_failures: Vec<usize>,
    /// Witness indices whose dual chain touches the hypersurface (a simplex
    /// with both signs among its vertices).
    pub dual_touches_hypersurface: Vec<usize>,
    /// Total rank of the narrow chains in the homology of the hypersurface
    /// quotient, summed over dimensions.
    pub independent_rank: usize,
    /// Whether the rank equals the witness count.
    pub independence_ok: bool,
    /// All checks passed.
    pub pass: bool,
}

/// Check each witness exactly: the narrow chain is a cycle of the
/// hypersurface quotient, the dual chain is a cycle of the ambient quotient
/// avoiding the hypersurface, and the narrow homology classes are linearly
/// independent (their rank in the cycle space modulo boundaries equals the
/// witness count).
pub fn verify_cycles(
    d: usize,
    m: i64,
    witnesses: &[CycleWitness],
) -> Result<CycleReport> {
    let (poly, mut t, _) = layered_raw(d, m)?;
    t.lifting = None;
    let signs = parity_signs(&t.points);
    let s = extend_symmetric(&poly, &t, &signs)?;
    let (hq, hkeys) = hypersurface_quotient_indexed(&s)?;
    let (tq, qmap) = quotient_complex(&s)?;
    let mut narrow_failures = Vec::new();
    let mut dual_failures = Vec::new();
    let mut dual_touches = Vec::new();
    let mut chains_by_dim: BTreeMap<usize, Vec<Vec<usize>>> = BTreeMap::new();
    for (i, w) in witnesses.iter().enumerate() {
        // Narrow chain.
        let p = w.narrow_dim;
        let mut support: BTreeSet<usize> = BTreeSet::new();
        let mut ok = p < hkeys.len() && !w.narrow.is_empty();
        if ok {
            for cell in &w.narrow {
                if cell.dim() != p {
                    ok = false;
                    break;
                }
                match hkeys[p].get(&cell.key()) {
                    Some(&cls) => {
                        if !support.insert(cls) {
                            ok = false;
                            break;
                        }
                    }
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
        }
        if ok && p >= 1 {
            let mut boundary: BTreeSet<usize> = BTreeSet::new();
            for &cls in &support {
                for &b in &hq.cells[p][cls].boundary {
                    if !boundary.remove(&b) {
                        boundary.insert(b);
                    }
                }
            }
            ok = boundary.is_empty();
        }
        if ok {
            chains_by_dim
                .entry(p)
                .or_default()
                .push(support.into_iter().collect());
        } else {
            narrow_failures.push(i);
        }
        // Dual chain.
        if p + 1 > d {
            dual_failures.push(i);
            continue;
        }
        let q = d - 1 - p;
        let mut support: BTreeSet<usize> = BTreeSet::new();
        let mut ok = q < tq.cells.len() && !w.dual.is_empty();
        let mut touches = false;
        if ok {
            'dual: for simplex in &w.dual {
                if simplex.len() != q + 1 {
                    ok = false;
                    break;
                }
                let mut tuple = Vec::with_capacity(simplex.len());
                let mut sims = Vec::with_capacity(simplex.len());
                for pt in simplex {
                    match s.vertices.binary_search(pt) {
                        Ok(vi) => {
                            tuple.push(vi);
                            sims.push(s.signs[vi]);
                        }
                        Err(_) => {
                            ok = false;
                            break 'dual;
                        }
                    }
                }
                if sims.iter().any(|&x| x != sims[0]) {
                    touches = true;
                }
                tuple.sort_unstable();
                match qmap.cell_class_of.get(q).and_then(|m| m.get(&tuple)) {
                    Some(&cls) => {
                        if !support.insert(cls) {
                            ok = false;
                            break;
                        }
                    }
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
        }
        if ok && q >= 1 {
            let mut boundary: BTreeSet<usize> = BTreeSet::new();
            for &cls in &support {
                for &b in &tq.cells[q][cls].boundary {
                    if !boundary.remove(&b) {
                        boundary.insert(b);
                    }
                }
            }
            ok = boundary.is_empty();
        }
        if !ok {
            dual_failures.push(i);
        }
        if touches {
            dual_touches.push(i);
        }
    }
    let mut independent_rank = 0usize;
    for (p, chains) in &chains_by_dim {
        let base = hq.boundary_rows(p + 1);
        let boundary_rank = base.rank();
        let mut ext = hq.boundary_rows(p + 1);
        for chain in chains {
            ext.push_row_support(chain.iter().copied());
        }
        independent_rank += ext.rank() - boundary_rank;
    }
    let independence_ok =
        narrow_failures.is_empty() && independent_rank == witnesses.len();
    let pass = independence_ok
        && dual_failures.is_empty()
        && dual_touches.is_empty();
    Ok(CycleReport {
        witness_count: witnesses.len(),
        narrow_failures,
        dual_failures,
        dual_touches_hypersurface: dual_touches,
        independent_rank,
        independence_ok,
        pass,
    })
}

// ---------------------------------------------------------------------------
// Large-scale glued construction
// ---------------------------------------------------------------------------

/// Transport the layered data into the interior of every cell of a convex
/// primitive triangulation after dilating by `lambda`: inside each dilated
/// cell the interior lattice points form a translated dilate of the cell,
/// carrying a copy of the layered triangulation with its local parity
/// signs; each cell is completed to a convex triangulation using only the
/// cell's corners as extra vertices, and all cells are glued and certified
/// by a combined lifting (coarse certificate plus a small multiple of the
/// per-cell liftings).  Returns the glued triangulation (with lifting) and
/// the sign distribution (local parity inside the interiors, ambient
/// parity at the corners).
pub fn asymptotic_patchwork_data(
    base: &LatticePolytope,
    coarse: &Triangulation,
    lambda: i64,
) -> Result<(Triangulation, Vec<i8>)> {
    let d = base.ambient_dim();
    if lambda <= d as i64 + 1 {
        return Err(Error::InvalidInput(format!(
            "the dilation factor must exceed {}",
            d + 1
        )));
    }
    let lifting0 = coarse.lifting.as_ref().ok_or_else(|| {
        Error::InvalidInput("the coarse triangulation needs a lifting".into())
    })?;
    if !check_convexity(coarse)? {
        return Err(Error::NotConvex(
            "the coarse triangulation's lifting is not strictly convex".into(),
        ));
    }
    validate_triangulation(coarse, base).map_err(Error::InvalidTriangulation)?;
    if !is_primitive(coarse) {
        return Err(Error::InvalidTriangulation(
            "the coarse triangulation must be primitive".into(),
        ));
    }
    let mu = lambda - d as i64 - 1;
    let inner = layered_triangulation(d, mu)?;
    let inner_lift = inner
        .triangulation
        .lifting
        .as_ref()
        .expect("layered triangulation carries a lifting");
    let inner_cells: BTreeSet<Vec<usize>> = inner
        .triangulation
        .simplices
        .iter()
        .cloned()
        .collect();
    let max_inner = inner_lift
        .iter()
        .cloned()
        .fold(Rat::zero(), |a, b| if b > a { b } else { a });
    let big = base.dilate(&int(lambda));
    let mut apex = rat_int(1) + rat_int((d as i64 + 1) * lambda) * max_inner;
    for _attempt in 0..40 {
        match glue_with_apex(
            coarse, lifting0, lambda, &inner, inner_lift, &inner_cells, &apex,
            &big, d,
        )? {
            Some(result) => return Ok(result),
            None => apex = &apex * rat_int(2),
        }
    }
    Err(Error::SearchFailed(
        "no apex lifting value certified the glued triangulation".into(),
    ))
}

#[allow(clippy::too_many_arguments)]
fn glue_with_apex(
    coarse: &Triangulation,
    lifting0: &[Rat],
    lambda: i64,
    inner: &LayeredTriangulation,
    inner_lift: &[Rat],
    inner_cells: &BTreeSet<Vec<usize>>,
    apex: &Rat,
    big: &LatticePolytope,
    d: usize,
) -> Result<Option<(Triangulation, Vec<i8>)>> {
    let lam = int(lambda);
    let mut points: IMat = Vec::new();
    let mut index: BTreeMap<IVec, usize> = BTreeMap::new();
    let mut nu_fine: Vec<Rat> = Vec::new();
    let mut nu_coarse: Vec<Rat> = Vec::new();
    let mut signs: Vec<i8> = Vec::new();
    let mut simplices: Vec<Vec<usize>> = Vec::new();
    for cell in &coarse.simplices {
        let verts: Vec<&IVec> = cell.iter().map(|&i| &coarse.points[i]).collect();
        let v0 = verts[0];
        // Affine placement of local coordinates: w -> lambda*v0 + sum(v_i -
        // v0) + M*w with M the edge matrix (unimodular by primitivity).
        let mut t0: IVec = v0.iter().map(|c| c * &lam).collect();
        for v in verts.iter().skip(1) {
            for (k, (a, b)) in v.iter().zip(v0.iter()).enumerate() {
                t0[k] += a - b;
            }
        }
        let map_pt = |w: &IVec| -> IVec {
            let mut q = t0.clone();
            for (i, wi) in w.iter().enumerate() {
                let vi = verts[i + 1];
                for (k, (a, b)) in vi.iter().zip(v0.iter()).enumerate() {
                    q[k] += &(a - b) * wi;
                }
            }
            q
        };
        // The coarse lifting restricted to this cell, as an affine function
        // evaluated at x/lambda: solve for its coefficients.
        let mut rows = Vec::with_capacity(d + 1);
        let mut rhs = Vec::with_capacity(d + 1);
        for &vi in cell {
            let mut row = to_rat_vec(&coarse.points[vi]);
            row.push(Rat::from_integer(Int::from(1)));
            rows.push(row);
            rhs.push(lifting0[vi].clone());
        }
        let coeffs = solve_rational(&rows, &rhs).ok_or_else(|| {
            Error::InvalidTriangulation(
                "a coarse cell is affinely degenerate".into(),
            )
        })?;
        let coarse_value = |q: &IVec| -> Rat {
            let mut acc = coeffs[d].clone();
            for (k, c) in q.iter().enumerate() {
                acc += &coeffs[k] * Rat::new(c.clone(), lam.clone());
            }
            acc
        };
        // Per-cell point set: transported interior points then corners.
        let local_pts = &inner.triangulation.points;
        let n_in = local_pts.len();
        let cell_points: IMat = local_pts
            .iter()
            .map(map_pt)
            .chain(verts.iter().map(|v| v.iter().map(|c| c * &lam).collect()))
            .collect();
        // Deterministic perturbation of the interior heights until the
        // lower hull is simplicial and keeps the interior triangulation.
        // Distinct per-coordinate weights break the coordinate symmetries
        // that a uniform quadratic would preserve.
        let perturb_term = |w: &IVec| -> Int {
            const WEIGHTS: [i64; 8] = [2, 3, 5, 7, 11, 13, 17, 19];
            w.iter()
                .enumerate()
                .map(|(i, c)| c * c * int(WEIGHTS[i % WEIGHTS.len()]))
                .sum()
        };
        let mut eta = Rat::zero();
        let mut found: Option<Vec<Vec<usize>>> = None;
        for _ in 0..50 {
            let heights: Vec<Rat> = (0..cell_points.len())
                .map(|i| {
                    if i < n_in {
                        &inner_lift[i]
                            + &eta * Rat::from_integer(perturb_term(&local_pts[i]))
                    } else {
                        apex.clone()
                    }
                })
                .collect();
            let hull = lower_hull_cells(&cell_points, &heights)?;
            let simplicial = hull.iter().all(|c| c.len() == d + 1);
            let kept: BTreeSet<Vec<usize>> = hull
                .iter()
                .filter(|c| c.iter().all(|&i| i < n_in))
                .map(|c| {
                    let mut s = c.clone();
                    s.sort_unstable();
                    s
                })
                .collect();
            if simplicial && kept == *inner_cells {
                found = Some(hull);
                break;
            }
            eta = if eta.is_zero() {
                Rat::from_integer(Int::from(1))
            } else {
                eta / rat_int(2)
            };
        }
        let hull = match found {
            Some(h) => h,
            None => return Ok(None),
        };
        // Register points and the two lifting values.
        let mut global: Vec<usize> = Vec::with_capacity(cell_points.len());
        for (i, q) in cell_points.iter().enumerate() {
            let gi = match index.get(q) {
                Some(&gi) => gi,
                None => {
                    let gi = points.len();
                    index.insert(q.clone(), gi);
                    points.push(q.clone());
                    nu_fine.push(Rat::zero());
                    nu_coarse.push(Rat::zero());
                    signs.push(0);
                    gi
                }
            };
            global.push(gi);
            if i < n_in {
                nu_fine[gi] =
                    &inner_lift[i] + &eta * Rat::from_integer(perturb_term(&local_pts[i]));
                let s: Int = local_pts[i].iter().sum();
                signs[gi] = if s.is_odd() { -1 } else { 1 };
            } else {
                nu_fine[gi] = apex.clone();
                signs[gi] = extended_parity_sign(q);
            }
            nu_coarse[gi] = coarse_value(q);
        }
        for hc in &hull {
            let mut s: Vec<usize> = hc.iter().map(|&i| global[i]).collect();
            s.sort_unstable();
            simplices.push(s);
        }
    }
    let mut fine = Triangulation { points, simplices, lifting: None };
    if !check_valid(&fine, big) {
        return Err(Error::InvalidTriangulation(
            "the glued cells do not triangulate the dilated polytope".into(),
        ));
    }
    // Combined lifting: the coarse certificate dominates across coarse
    // walls; a small multiple of the per-cell liftings bends the interior.
    let mut eps = rat_int(1);
    for _ in 0..60 {
        let lift: Vec<Rat> = nu_coarse
            .iter()
            .zip(&nu_fine)
            .map(|(a, b)| a + &eps * b)
            .collect();
        fine.lifting = Some(lift);
        if check_convexity(&fine)? {
            return Ok(Some((fine, signs)));
        }
        eps = eps / rat_int(2);
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::triangulation::primitive_convex_2d;

    fn ipt(cs: &[i64]) -> IVec {
        cs.iter().map(|&c| int(c)).collect()
    }

    fn cell_point_sets(t: &Triangulation) -> BTreeSet<Vec<IVec>> {
        t.simplices
            .iter()
            .map(|s| {
                let mut pts: Vec<IVec> =
                    s.iter().map(|&i| t.points[i].clone()).collect();
                pts.sort();
                pts
            })
            .collect()
    }

    fn grid_check(d: usize, m: i64) {
        let (poly, t, join_of) = layered_raw(d, m).unwrap();
        assert_eq!(t.simplices.len() as i64, pow_i64(m, d), "count at {d},{m}");
        assert_eq!(join_of.len(), t.simplices.len());
        validate_triangulation(&t, &poly).unwrap();
        assert!(is_primitive(&t), "primitivity at {d},{m}");
    }

    #[test]
    fn interval_structure() {
        let lt = layered_triangulation(1, 3).unwrap();
        assert_eq!(lt.triangulation.points, vec![ipt(&[0]), ipt(&[1]), ipt(&[2]), ipt(&[3])]);
        let cells = cell_point_sets(&lt.triangulation);
        let expected: BTreeSet<Vec<IVec>> = [
            vec![ipt(&[0]), ipt(&[1])],
            vec![ipt(&[1]), ipt(&[2])],
            vec![ipt(&[2]), ipt(&[3])],
        ]
        .into_iter()
        .collect();
        assert_eq!(cells, expected);
        assert!(lt.triangulation.lifting.is_some());
    }

    #[test]
    fn triangle_size_two_structure() {
        let lt = layered_triangulation(2, 2).unwrap();
        let cells = cell_point_sets(&lt.triangulation);
        let expected: BTreeSet<Vec<IVec>> = [
            vec![ipt(&[0, 1]), ipt(&[0, 2]), ipt(&[1, 1])],
            vec![ipt(&[0, 0]), ipt(&[0, 1]), ipt(&[1, 1])],
            vec![ipt(&[0, 0]), ipt(&[1, 0]), ipt(&[1, 1])],
            vec![ipt(&[1, 0]), ipt(&[1, 1]), ipt(&[2, 0])],
        ]
        .into_iter()
        .collect();
        assert_eq!(cells, expected);
    }

    #[test]
    fn grid_validity_low_dims() {
        for m in 1..=8 {
            grid_check(1, m);
        }
        for m in 1..=8 {
            grid_check(2, m);
        }
        for m in 1..=5 {
            grid_check(3, m);
        }
    }

    #[test]
    fn grid_validity_3d_large() {
        for m in 6..=8 {
            grid_check(3, m);
        }
    }

    #[test]
    fn certificates_found() {
        for (d, m) in [(1, 5), (2, 2), (2, 7), (3, 2), (3, 4), (2, 8)] {
            let lt = layered_triangulation(d, m).unwrap();
            assert_eq!(lt.triangulation.simplices.len() as i64, pow_i64(m, d));
        }
    }

    #[test]
    fn certificate_3d_large() {
        let lt = layered_triangulation(3, 8).unwrap();
        assert_eq!(lt.triangulation.simplices.len(), 512);
    }

    #[test]
    fn face_vertices_examples() {
        let lt = layered_triangulation(3, 4).unwrap();
        // Level 3 sits at odd height 1: its 1-face is the far edge.
        let f = lt.face_vertices(3, 1).unwrap();
        assert_eq!(f, vec![ipt(&[3, 0, 1]), ipt(&[0, 3, 1])]);
        // Level 4 sits at even height 0: its 0-face is the origin corner.
        let f = lt.face_vertices(4, 0).unwrap();
        assert_eq!(f, vec![ipt(&[0, 0, 0])]);
        // Level 2 sits at even height 2: its 1-face starts at the anchor.
        let f = lt.face_vertices(2, 1).unwrap();
        assert_eq!(f, vec![ipt(&[0, 0, 2]), ipt(&[2, 0, 2])]);
    }

    #[test]
    fn parity_sign_values() {
        assert_eq!(extended_parity_sign(&ipt(&[0, 0])), 1);
        assert_eq!(extended_parity_sign(&ipt(&[1, 2])), -1);
        assert_eq!(extended_parity_sign(&ipt(&[2, 2])), 1);
        assert_eq!(extended_parity_sign(&ipt(&[-1, 2])), 1);
        assert_eq!(extended_parity_sign(&ipt(&[-1, -3])), 1);
        assert_eq!(extended_parity_sign(&ipt(&[-2, 1])), -1);
        let signs = parity_signs(&vec![ipt(&[0, 0]), ipt(&[1, 0]), ipt(&[1, 1])]);
        assert_eq!(signs, vec![1, -1, 1]);
    }

    #[test]
    fn base_witness_structure() {
        for (m, expect) in [(1, 0), (2, 0), (3, 1), (4, 2), (5, 3), (6, 4)] {
            assert_eq!(narrow_cycles(1, m).unwrap().len(), expect, "m={m}");
        }
        let ws = narrow_cycles(1, 5).unwrap();
        // Around interior point 1 (distance 4 from the top): partner is 5.
        assert_eq!(ws[0].dual, vec![vec![ipt(&[1])], vec![ipt(&[5])]]);
        assert_eq!(ws[0].narrow.len(), 2);
        assert_eq!(ws[0].narrow_dim, 0);
        // Around interior point 2 (distance 3): partner is 4.
        assert_eq!(ws[1].dual, vec![vec![ipt(&[2])], vec![ipt(&[4])]]);
    }

    #[test]
    fn narrow_counts_2d() {
        for m in 1..=8 {
            let expect = if m >= 4 { (m - 2) * (m - 3) } else { 0 };
            assert_eq!(
                narrow_cycles(2, m).unwrap().len() as i64,
                expect,
                "m={m}"
            );
        }
    }

    #[test]
    fn narrow_counts_3d() {
        assert_eq!(narrow_cycles(3, 4).unwrap().len(), 2);
        assert_eq!(narrow_cycles(3, 5).unwrap().len(), 12);
        assert_eq!(narrow_cycles(3, 6).unwrap().len(), 36);
    }

    #[test]
    fn narrow_counts_4d() {
        assert_eq!(narrow_cycles(4, 5).unwrap().len(), 24);
    }

    #[test]
    fn verify_interval() {
        let ws = narrow_cycles(1, 4).unwrap();
        let r = verify_cycles(1, 4, &ws).unwrap();
        assert!(r.pass, "{r:?}");
        assert_eq!(r.witness_count, 2);
        assert_eq!(r.independent_rank, 2);
    }

    #[test]
    fn verify_surface_small() {
        for m in 4..=5 {
            let ws = narrow_cycles(2, m).unwrap();
            let r = verify_cycles(2, m, &ws).unwrap();
            assert!(r.pass, "m={m}: {r:?}");
            assert_eq!(r.independent_rank as i64, (m - 2) * (m - 3));
        }
    }

    #[test]
    fn verify_surface_larger() {
        for m in 6..=7 {
            let ws = narrow_cycles(2, m).unwrap();
            let r = verify_cycles(2, m, &ws).unwrap();
            assert!(r.pass, "m={m}: {r:?}");
        }
    }

    #[test]
    fn verify_threefold_m4() {
        let ws = narrow_cycles(3, 4).unwrap();
        let r = verify_cycles(3, 4, &ws).unwrap();
        assert!(r.pass, "{r:?}");
        assert_eq!(r.independent_rank, 2);
    }

    #[test]
    fn verify_threefold_m5() {
        let ws = narrow_cycles(3, 5).unwrap();
        let r = verify_cycles(3, 5, &ws).unwrap();
        assert!(r.pass, "{r:?}");
        assert_eq!(r.independent_rank, 12);
    }

    #[test]
    fn verify_threefold_m6() {
        let ws = narrow_cycles(3, 6).unwrap();
        let r = verify_cycles(3, 6, &ws).unwrap();
        assert!(r.pass, "{r:?}");
        assert_eq!(r.independent_rank, 36);
    }

    #[test]
    fn verify_threefold_m7() {
        let ws = narrow_cycles(3, 7).unwrap();
        // Recursion count: 40 level placements plus 40 joins; in particular
        // at least (m-2)(m-3)(m-4) = 60.
        assert_eq!(ws.len(), 80);
        let r = verify_cycles(3, 7, &ws).unwrap();
        assert!(r.pass, "{r:?}");
        assert_eq!(r.independent_rank, 80);
    }

    #[test]
    fn verify_interval_grid() {
        for m in 1..=7 {
            let ws = narrow_cycles(1, m).unwrap();
            let r = verify_cycles(1, m, &ws).unwrap();
            assert!(r.pass, "m={m}: {r:?}");
        }
    }

    #[test]
    fn verify_empty_witness_lists() {
        // Sizes too small for any witness still verify (trivially).
        for (d, m) in [(2, 2), (2, 3), (3, 3)] {
            let ws = narrow_cycles(d, m).unwrap();
            assert!(ws.is_empty());
            let r = verify_cycles(d, m, &ws).unwrap();
            assert!(r.pass, "d={d} m={m}: {r:?}");
        }
    }

    fn unit_triangle_coarse() -> (LatticePolytope, Triangulation) {
        let corners = vec![ipt(&[0, 0]), ipt(&[0, 1]), ipt(&[1, 0])];
        let poly = convex_hull(&corners).unwrap();
        let t = Triangulation {
            points: corners,
            simplices: vec![vec![0, 1, 2]],
            lifting: Some(vec![Rat::zero(), Rat::zero(), Rat::zero()]),
        };
        (poly, t)
    }

    #[test]
    fn asymptotic_rejects_small_dilation() {
        let (poly, t) = unit_triangle_coarse();
        assert!(asymptotic_patchwork_data(&poly, &t, 3).is_err());
    }

    #[test]
    fn asymptotic_unit_triangle() {
        let (poly, t) = unit_triangle_coarse();
        let (fine, signs) = asymptotic_patchwork_data(&poly, &t, 7).unwrap();
        // 15 transported interior points plus the three corners.
        assert_eq!(fine.points.len(), 18);
        assert_eq!(signs.len(), 18);
        let big = poly.dilate(&int(7));
        assert!(check_valid(&fine, &big));
        assert!(check_convexity(&fine).unwrap());
        let idx = |p: &IVec| fine.points.iter().position(|q| q == p).unwrap();
        assert_eq!(signs[idx(&ipt(&[0, 0]))], 1);
        assert_eq!(signs[idx(&ipt(&[7, 0]))], -1);
        assert_eq!(signs[idx(&ipt(&[0, 7]))], -1);
        // The transported copy starts at (1,1) with positive local parity.
        assert_eq!(signs[idx(&ipt(&[1, 1]))], 1);
        // The interior copy carries the layered cycle list of its size.
        assert_eq!(narrow_cycles(2, 4).unwrap().len(), 2);
    }

    #[test]
    fn asymptotic_boundary_dilation() {
        let (poly, t) = unit_triangle_coarse();
        let (fine, _signs) = asymptotic_patchwork_data(&poly, &t, 4).unwrap();
        let big = poly.dilate(&int(4));
        assert!(check_valid(&fine, &big));
        assert!(check_convexity(&fine).unwrap());
        // Inner copy of size 1: three transported points plus corners.
        assert_eq!(fine.points.len(), 6);
    }

    #[test]
    fn asymptotic_multi_cell() {
        let corners = vec![ipt(&[0, 0]), ipt(&[2, 0]), ipt(&[0, 2])];
        let poly = convex_hull(&corners).unwrap();
        let coarse = primitive_convex_2d(&poly).unwrap();
        assert_eq!(coarse.simplices.len(), 4);
        let (fine, signs) = asymptotic_patchwork_data(&poly, &coarse, 7).unwrap();
        let big = poly.dilate(&int(7));
        assert!(check_valid(&fine, &big));
        assert!(check_convexity(&fine).unwrap());
        // Four transported copies of 15 points each, plus the six dilated
        // coarse vertices.
        assert_eq!(fine.points.len(), 4 * 15 + 6);
        assert_eq!(signs.len(), fine.points.len());
    }
}
