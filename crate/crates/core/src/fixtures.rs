//! Reference knot codes with known invariants: the trefoil and figure-eight
//! from parametrized space curves, and connected sums by splicing.

use crate::diagram::{build_code_from_points, detect_crossings_brute_force, KnotCode};
use crate::interface::Point3;

/// Trefoil from the encoding figure as `(sigma, alpha, phi, tau)` with
/// 0-based labels.
pub fn trefoil_tables() -> (Vec<u32>, Vec<u32>, Vec<u32>, Vec<i8>) {
    let one_based = |v: [u32; 12]| v.iter().map(|x| x - 1).collect::<Vec<u32>>();
    let sigma = one_based([2, 3, 4, 1, 6, 7, 8, 5, 10, 11, 12, 9]);
    let alpha = one_based([5, 8, 12, 11, 1, 10, 9, 2, 7, 6, 4, 3]);
    let phi = one_based([8, 7, 11, 10, 4, 9, 12, 1, 6, 5, 3, 2]);
    let tau = vec![1, -1, 1, -1, -1, 1, -1, 1, 1, -1, 1, -1];
    (sigma, alpha, phi, tau)
}

/// Code of the closed polyline through `samples` points of `curve` on
/// `[0, 2π)`. Panics on degenerate projections, which these fixed curves
/// avoid.
pub fn code_from_parametric(curve: impl Fn(f64) -> Point3, samples: usize) -> KnotCode {
    let ring: Vec<Point3> = (0..samples).map(|k| curve(std::f64::consts::TAU * k as f64 / samples as f64)).collect();
    let crossings = detect_crossings_brute_force(&ring).expect("generic projection");
    let mut pts = ring;
    pts.push(pts[0]);
    build_code_from_points(&pts, &crossings).expect("valid code")
}

pub fn trefoil() -> KnotCode {
    code_from_parametric(|t| [t.sin() + 2.0 * (2.0 * t).sin(), t.cos() - 2.0 * (2.0 * t).cos(), -(3.0 * t).sin()], 241)
}

pub fn figure_eight() -> KnotCode {
    code_from_parametric(
        |t| {
            let r = 2.0 + (2.0 * t).cos();
            [r * (3.0 * t).cos(), r * (3.0 * t).sin(), (4.0 * t).sin()]
        },
        241,
    )
}

/// Single-crossing diagram of the unknot.
pub fn kink() -> KnotCode {
    KnotCode::from_arcs(vec![1, 0, 3, 2], vec![1, -1, 1, -1]).expect("valid kink")
}

/// Connected sum: cuts the arc at half-edge 0 in both diagrams and rejoins
/// the four loose ends so the result stays planar.
pub fn connected_sum(a: &KnotCode, b: &KnotCode) -> KnotCode {
    if a.is_empty() {
        return b.clone();
    }
    if b.is_empty() {
        return a.clone();
    }
    let a = a.to_block_form();
    let b = b.to_block_form();
    let off = a.half_edges() as u32;
    let mut alpha: Vec<u32> = a.alpha().to_vec();
    alpha.extend(b.alpha().iter().map(|&v| v + off));
    let mut tau: Vec<i8> = a.tau().to_vec();
    tau.extend_from_slice(b.tau());
    let (p, q) = (0u32, a.alpha()[0]);
    let (r, s) = (off, b.alpha()[0] + off);
    let target_faces = a.crossings() + b.crossings() + 2;
    for (x, y) in [((p, s), (q, r)), ((p, r), (q, s))] {
        let mut al = alpha.clone();
        al[x.0 as usize] = x.1;
        al[x.1 as usize] = x.0;
        al[y.0 as usize] = y.1;
        al[y.1 as usize] = y.0;
        if let Ok(code) = KnotCode::from_arcs(al, tau.clone()) {
            if code.faces().1 == target_faces {
                return code;
            }
        }
    }
    panic!("no planar splice found")
}
