//! Closed-form invariants of the complex hypersurfaces and complete
//! intersections attached to lattice polytopes.
//!
//! These formulas give the complex-side reference values that the
//! piecewise-linear real constructions are measured against:
//!
//! * [`hypersurface_betti_3d`] — total mod-2 Betti number of a smooth
//!   hypersurface with a given 3-dimensional Newton polytope, from
//!   lattice-point counts;
//! * [`projective_hypersurface_betti`] — the same total for a smooth
//!   projective hypersurface of degree `m` in `d` variables;
//! * [`euler_char_ci_torus`] / [`euler_char_ci_compact`] — Euler
//!   characteristic of a generic complete intersection, inside the torus
//!   and compactified, via an alternating mixed-volume expansion;
//! * [`ci_betti_3d`] — total Betti number of a surface-degree complete
//!   intersection curve over a simple 3-polytope;
//! * [`layered_lower_bound`] — the falling-factorial lower bound on
//!   connected components realized by the layered construction;
//! * [`skew_simplex`] — the twisted simplex family whose hypersurfaces
//!   and intersections realize extreme component counts.

use num_traits::{One, Zero};

use crate::cayley::compositions;
use crate::error::{Error, Result};
use crate::linalg::IMat;
use crate::polytope::{convex_hull, mixed_volume, LatticePolytope};
use crate::{int, Int};

/// One retained term of the alternating Euler-characteristic expansion:
/// the exponent vector of the polytope monomial and its sign.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalSeriesTerm {
    /// Exponents `(a_1, ..., a_k)`, one per input polytope, each at
    /// least one, summing to the ambient dimension.
    pub multidegree: Vec<usize>,
    /// Series coefficient of the monomial: `(-1)^(sum(a_i) - k)`.
    pub coefficient: Int,
}

/// Total mod-2 Betti number of a smooth complex hypersurface whose
/// Newton polytope is the given simple 3-polytope:
/// `l*(2P) - 2 l*(P) - sum over facets G of (l*(G) - 1) - 1`,
/// where `l*` counts relative-interior lattice points.
pub fn hypersurface_betti_3d(p: &LatticePolytope) -> Result<Int> {
    if p.dim() != 3 {
        return Err(Error::InvalidPolytope(format!(
            "expected a 3-dimensional polytope, got dimension {}",
            p.dim()
        )));
    }
    if !p.is_simple()? {
        return Err(Error::InvalidPolytope(
            "the lattice-count formula requires a simple polytope".into(),
        ));
    }
    let doubled = p.dilate(&int(2));
    let mut v = int(doubled.interior_lattice_count() as i64)
        - int(2) * int(p.interior_lattice_count() as i64);
    for f in p.faces(2)? {
        let fp = p.face_polytope(&f);
        v = v - int(fp.interior_lattice_count() as i64) + Int::one();
    }
    Ok(v - Int::one())
}

/// Total mod-2 Betti number of a smooth projective hypersurface of
/// degree `m` in projective `d`-space (complex dimension `d - 1`):
/// `((m-1)^(d+1) - (-1)^(d+1)) / m + d + (-1)^(d+1)`.
pub fn projective_hypersurface_betti(d: usize, m: i64) -> Result<Int> {
    if d < 1 || m < 1 {
        return Err(Error::InvalidInput(format!(
            "projective total Betti number needs d >= 1 and m >= 1, got d={d}, m={m}"
        )));
    }
    // (-1)^(d+1): negative for even d, positive for odd d.
    let sign: Int = if d % 2 == 0 { int(-1) } else { Int::one() };
    let pow = int(m - 1).pow(d as u32 + 1);
    let num = pow - &sign;
    let (q, r) = num_integer::Integer::div_rem(&num, &int(m));
    assert!(
        num_traits::Zero::is_zero(&r),
        "degree {m} must divide (m-1)^(d+1) - (-1)^(d+1)"
    );
    Ok(q + int(d as i64) + sign)
}

/// The expansion terms behind [`euler_char_ci_torus`]: one per exponent
/// vector `(a_1, ..., a_k)` with every `a_i >= 1` and total equal to the
/// ambient dimension, paired with the mixed volume of the polytope
/// system taken with those multiplicities.
pub fn euler_char_ci_terms(polys: &[LatticePolytope]) -> Result<Vec<(FormalSeriesTerm, Int)>> {
    let k = polys.len();
    if k == 0 {
        return Err(Error::InvalidInput(
            "the Euler-characteristic expansion needs at least one polytope".into(),
        ));
    }
    let d = polys[0].ambient_dim();
    if polys.iter().any(|p| p.ambient_dim() != d) {
        return Err(Error::InvalidInput(
            "all polytopes must share one ambient dimension".into(),
        ));
    }
    if k > d {
        return Err(Error::InvalidInput(format!(
            "more polytopes ({k}) than ambient dimensions ({d})"
        )));
    }
    let sign: Int = if (d - k) % 2 == 0 { Int::one() } else { int(-1) };
    let mut out = Vec::new();
    for a in compositions(d, k, 1) {
        let mut args: Vec<LatticePolytope> = Vec::with_capacity(d);
        for (i, &ai) in a.iter().enumerate() {
            for _ in 0..ai {
                args.push(polys[i].clone());
            }
        }
        let mv = mixed_volume(&args)?;
        out.push((
            FormalSeriesTerm {
                multidegree: a,
                coefficient: sign.clone(),
            },
            mv,
        ));
    }
    Ok(out)
}

/// Euler characteristic of a generic complete intersection of `k`
/// hypersurfaces inside the `d`-torus: the total-degree-`d` term of the
/// product of the alternating series `P_i - P_i^2 + P_i^3 - ...`, with
/// each monomial evaluated as a mixed volume with multiplicities.
pub fn euler_char_ci_torus(polys: &[LatticePolytope]) -> Result<Int> {
    let mut v = Int::zero();
    for (term, mv) in euler_char_ci_terms(polys)? {
        v += term.coefficient * mv;
    }
    Ok(v)
}

/// Euler characteristic of the compactified generic complete
/// intersection of the dilates `lambda_i * base`: the torus-part
/// characteristic summed over all faces of `base` of dimension at least
/// `k`, each face system evaluated in the face's own lattice.
pub fn euler_char_ci_compact(base: &LatticePolytope, lambdas: &[Int]) -> Result<Int> {
    let k = lambdas.len();
    let d = base.dim();
    if k == 0 || k > d {
        return Err(Error::InvalidInput(format!(
            "need between 1 and {d} dilation factors, got {k}"
        )));
    }
    if lambdas.iter().any(|l| !num_traits::Signed::is_positive(l)) {
        return Err(Error::InvalidInput(
            "dilation factors must be positive".into(),
        ));
    }
    let mut total = Int::zero();
    for f in base.all_faces() {
        if f.dim < k {
            continue;
        }
        let fp = base.face_polytope(&f);
        // One shared chart per face keeps the dilates' lattices aligned.
        let intrinsic: IMat = fp
            .vertices()
            .iter()
            .map(|v| fp.to_intrinsic(v).expect("vertex lies on its own hull"))
            .collect();
        let ip = convex_hull(&intrinsic)?;
        let system: Vec<LatticePolytope> = lambdas.iter().map(|l| ip.dilate(l)).collect();
        total += euler_char_ci_torus(&system)?;
    }
    Ok(total)
}

/// Total mod-2 Betti number of the compactified intersection curve of
/// two generic surfaces with Newton polytopes `l1 * base` and
/// `l2 * base`, for a simple 3-polytope `base`:
/// `(l1^2 l2 + l2^2 l1) Vol(base) - sum over facets G of l1 l2 Vol(G) + 4`
/// with normalized lattice volumes.  Equals `4` minus the compactified
/// Euler characteristic.
pub fn ci_betti_3d(base: &LatticePolytope, l1: &Int, l2: &Int) -> Result<Int> {
    if base.dim() != 3 {
        return Err(Error::InvalidPolytope(format!(
            "expected a 3-dimensional polytope, got dimension {}",
            base.dim()
        )));
    }
    if !base.is_simple()? {
        return Err(Error::InvalidPolytope(
            "the intersection-curve formula requires a simple polytope".into(),
        ));
    }
    if !num_traits::Signed::is_positive(l1) || !num_traits::Signed::is_positive(l2) {
        return Err(Error::InvalidInput(
            "dilation factors must be positive".into(),
        ));
    }
    let vol = base.lattice_volume();
    let mut v = (l1 * l1 * l2 + l2 * l2 * l1) * vol;
    for f in base.faces(2)? {
        v = v - l1 * l2 * base.face_polytope(&f).lattice_volume();
    }
    Ok(v + int(4))
}

/// Falling-factorial lower bound on the number of connected components
/// realized by the layered construction on the dilated simplex:
/// `(m-2)(m-3)...(m-d-1)`, and `0` whenever any factor is nonpositive.
pub fn layered_lower_bound(d: usize, m: i64) -> Int {
    let mut v = Int::one();
    for j in 2..=(d as i64) + 1 {
        if m - j <= 0 {
            return Int::zero();
        }
        v *= int(m - j);
    }
    v
}

/// The twisted simplex with vertices `0, e_1, ..., e_(d-1)` and
/// `(1, ..., 1, k)`: a simple simplex of normalized volume `k` whose
/// only nontrivial lattice data sits over the last coordinate.
pub fn skew_simplex(d: usize, k: i64) -> Result<LatticePolytope> {
    if d < 2 || k < 1 {
        return Err(Error::InvalidInput(format!(
            "the twisted simplex needs d >= 2 and k >= 1, got d={d}, k={k}"
        )));
    }
    let mut pts: IMat = vec![vec![int(0); d]];
    for i in 0..d - 1 {
        let mut e = vec![int(0); d];
        e[i] = int(1);
        pts.push(e);
    }
    let mut last = vec![int(1); d];
    last[d - 1] = int(k);
    pts.push(last);
    convex_hull(&pts)
}
