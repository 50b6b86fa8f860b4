//! End-to-end smoke drive of the core API: hulls, volumes, mixed volumes,
//! and certified primitive triangulations, printed with expected values.

use viro_core::int;
use viro_core::patchwork::patchwork_real_betti;
use viro_core::polytope::{convex_hull, mixed_volume, LatticePolytope};
use viro_core::triangulation::{check_convexity, check_valid, is_primitive, primitive_convex_2d};

fn ipts(rows: &[&[i64]]) -> Vec<Vec<viro_core::Int>> {
    rows.iter().map(|r| r.iter().map(|&c| int(c)).collect()).collect()
}

fn main() {
    // A size-3 right triangle: 10 lattice points, normalized area 9.
    let tri = convex_hull(&ipts(&[&[0, 0], &[3, 0], &[0, 3]])).unwrap();
    println!("triangle dim = {} (expect 2)", tri.dim());
    println!("triangle volume = {} (expect 9)", tri.lattice_volume());
    println!(
        "triangle lattice points = {} (expect 10)",
        tri.lattice_points().len()
    );

    let t = primitive_convex_2d(&tri).unwrap();
    println!("triangulation cells = {} (expect 9)", t.simplices.len());
    println!("valid = {} (expect true)", check_valid(&t, &tri));
    println!("primitive = {} (expect true)", is_primitive(&t));
    println!(
        "certified convex = {} (expect true)",
        check_convexity(&t).unwrap()
    );

    // Mixed volume of two unit squares is 2.
    let square: LatticePolytope =
        convex_hull(&ipts(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]])).unwrap();
    let mv = mixed_volume(&[square.clone(), square]).unwrap();
    println!("mixed volume (square, square) = {mv} (expect 2)");

    // Patchworked quartic curve with the classical maximal sign rule:
    // minus exactly on all-even points. The result is a maximal curve,
    // four circles: b0 = b1 = 4, total 8.
    let quartic = convex_hull(&ipts(&[&[0, 0], &[4, 0], &[0, 4]])).unwrap();
    let qt = primitive_convex_2d(&quartic).unwrap();
    let signs: Vec<i8> = qt
        .points
        .iter()
        .map(|p| {
            if p[0].clone() % 2 == int(0) && p[1].clone() % 2 == int(0) {
                -1
            } else {
                1
            }
        })
        .collect();
    let (betti, total) = patchwork_real_betti(&quartic, &qt, &signs).unwrap();
    println!("quartic curve betti = {betti:?} (expect [4, 4])");
    println!("quartic curve total = {total} (expect 8)");
}
