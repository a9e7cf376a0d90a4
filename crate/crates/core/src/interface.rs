//! Tricolour interface: tetrahedron colour patterns, the spanning curve from
//! face `f` to face `f'`, and its closure outside the cube.

use std::fmt::Write as _;

use thiserror::Error;

use crate::percolation::{Boundary, Colour, ColouringGrid, CubeSize, LatticePoint, Neighbour, TetrahedronId};
use crate::rng::{avalanche, mix, unit_open};

pub type Point3 = [f64; 3];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TetraPattern {
    /// One colour on all four vertices.
    Mono,
    /// Two colours, one of them on a single vertex.
    Bi31,
    /// Two colours, each on two vertices.
    Bi22,
    /// Three colours; one of them on two vertices.
    Tri,
}

pub fn classify_tetra(colours: [Colour; 4]) -> TetraPattern {
    let mut counts = [0u8; 3];
    for c in colours {
        counts[c as usize] += 1;
    }
    let distinct = counts.iter().filter(|&&c| c > 0).count();
    match distinct {
        1 => TetraPattern::Mono,
        2 if counts.contains(&3) => TetraPattern::Bi31,
        2 => TetraPattern::Bi22,
        3 => TetraPattern::Tri,
        _ => unreachable!("four vertices carry at most three colours"),
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TopologyError {
    #[error("curve tracing requires Dobrushin boundary conditions")]
    NotDobrushin,
    #[error("entered tetrahedron {tetra:?} is not tricolour")]
    NotTricolour { tetra: TetrahedronId },
    #[error("entry face {face} of {tetra:?} is not tricolour")]
    EntryNotTricolour { tetra: TetrahedronId, face: usize },
    #[error("curve left the cube through a boundary face of {tetra:?} other than f'")]
    EscapedBoundary { tetra: TetrahedronId },
    #[error("curve revisited tetrahedron {tetra:?}")]
    Revisited { tetra: TetrahedronId },
}

/// Law of the random barycentric weights placed on tricolour faces.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Perturbation {
    /// Uniform on the simplex shrunk so every weight is at least `margin`.
    Shrunk { margin: f64 },
    /// Exact centroid; degenerate, for debugging only.
    Centroid,
}

impl Default for Perturbation {
    fn default() -> Self {
        Perturbation::Shrunk { margin: 0.05 }
    }
}

/// Deterministic face-point generator for one sample.
///
/// Weights are a hash of `(seed, sorted vertex triple)`, so the two tetrahedra
/// sharing a face always agree, and a repeated query replays the same point.
#[derive(Debug, Clone, Copy)]
pub struct FacePerturber {
    seed: u64,
    law: Perturbation,
    size: CubeSize,
}

impl FacePerturber {
    pub fn new(size: CubeSize, seed: u64, law: Perturbation) -> Self {
        if let Perturbation::Shrunk { margin } = law {
            assert!(margin > 0.0 && margin < 1.0 / 3.0, "margin must lie in (0, 1/3)");
        }
        Self { seed, law, size }
    }

    /// Barycentric weights for the face, aligned with the sorted vertex order.
    pub fn weights(&self, key: [usize; 3]) -> [f64; 3] {
        match self.law {
            Perturbation::Centroid => [1.0 / 3.0; 3],
            Perturbation::Shrunk { margin } => {
                let k = key[0] as u64 ^ (key[1] as u64).rotate_left(21) ^ (key[2] as u64).rotate_left(42);
                let h1 = avalanche(mix(self.seed, k));
                let h2 = avalanche(h1 ^ 0x5851_f42d_4c95_7f2d);
                let (mut a, mut b) = (unit_open(h1), unit_open(h2));
                if a > b {
                    std::mem::swap(&mut a, &mut b);
                }
                let scale = 1.0 - 3.0 * margin;
                [margin + scale * a, margin + scale * (b - a), margin + scale * (1.0 - b)]
            }
        }
    }

    /// Random positive barycentre of the three face vertices.
    pub fn point(&self, face: [LatticePoint; 3]) -> Point3 {
        let mut verts = face;
        verts.sort_unstable();
        let key = verts.map(|v| self.size.index(v));
        let w = self.weights(key);
        let mut p = [0.0; 3];
        for d in 0..3 {
            // Coordinates shared by the whole face are kept exact.
            p[d] = if verts[0][d] == verts[1][d] && verts[1][d] == verts[2][d] {
                verts[0][d] as f64
            } else {
                verts.iter().zip(w).map(|(v, wi)| wi * v[d] as f64).sum()
            };
        }
        p
    }
}

/// Perturbed point on a tricolour face of a tetrahedron.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TricolourFace {
    pub tetra: TetrahedronId,
    pub face: usize,
    pub vertices: [LatticePoint; 3],
    pub point: Point3,
}

fn tetra_colours(t: &TetrahedronId, grid: &ColouringGrid) -> [Colour; 4] {
    t.vertices().map(|v| grid.colour(v))
}

/// Indices of faces whose three vertices carry distinct colours.
fn tricolour_face_indices(colours: [Colour; 4]) -> Vec<usize> {
    (0..4)
        .filter(|&omit| {
            let mut seen = [false; 3];
            for (i, &c) in colours.iter().enumerate() {
                if i != omit {
                    seen[c as usize] = true;
                }
            }
            seen.iter().all(|&s| s)
        })
        .collect()
}

/// The tricolour faces of `t`: two for a `Tri` tetrahedron, none otherwise.
pub fn tricolour_faces(t: TetrahedronId, grid: &ColouringGrid, perturber: &FacePerturber) -> Vec<TricolourFace> {
    tricolour_face_indices(tetra_colours(&t, grid))
        .into_iter()
        .map(|face| {
            let vertices = t.face_vertices(face);
            TricolourFace { tetra: t, face, vertices, point: perturber.point(vertices) }
        })
        .collect()
}

/// The open curve Γ plus its closing path.
#[derive(Debug, Clone, PartialEq)]
pub struct TricolourCurve {
    pub size: CubeSize,
    /// One point per traversed tricolour face, from `f` to `f'`.
    pub points: Vec<Point3>,
    /// `tetrahedra[i]` contains segment `points[i] -> points[i + 1]`.
    pub tetrahedra: Vec<TetrahedronId>,
    /// Path from the last point back to the first, excluding both endpoints.
    pub closure: Vec<Point3>,
}

impl TricolourCurve {
    /// Number of segments, equal to the number of tetrahedra crossed.
    pub fn length(&self) -> usize {
        self.points.len() - 1
    }

    /// CSV rows `x,y,z` of the open curve.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,y,z\n");
        for p in &self.points {
            writeln!(out, "{},{},{}", p[0], p[1], p[2]).unwrap();
        }
        out
    }
}

/// Tetrahedron and face index of the boundary face `f = {(0,0,0),(1,0,0),(1,0,1)}`.
pub fn start_face() -> (TetrahedronId, usize) {
    (TetrahedronId::new([0, 0, 0], [1, 2, 0]), 3)
}

/// Tetrahedron and face index of `f' = {(N,N,N),(N,N-1,N),(N,N-1,N-1)}`.
pub fn end_face(size: CubeSize) -> (TetrahedronId, usize) {
    let m = size.n() - 1;
    (TetrahedronId::new([m, m, m], [1, 2, 0]), 0)
}

/// Follows tricolour tetrahedra from face `f` to face `f'`.
pub fn trace_curve(grid: &ColouringGrid, perturber: &FacePerturber) -> Result<TricolourCurve, TopologyError> {
    if grid.boundary() != Boundary::Dobrushin {
        return Err(TopologyError::NotDobrushin);
    }
    let size = grid.size();
    let (mut tetra, mut entry) = start_face();
    let end = end_face(size);
    let mut visited = vec![false; size.tetrahedron_count()];
    let mut points = vec![perturber.point(tetra.face_vertices(entry))];
    let mut tetrahedra = Vec::new();

    loop {
        let slot = &mut visited[tetra.index(size)];
        if *slot {
            return Err(TopologyError::Revisited { tetra });
        }
        *slot = true;

        let colours = tetra_colours(&tetra, grid);
        if classify_tetra(colours) != TetraPattern::Tri {
            return Err(TopologyError::NotTricolour { tetra });
        }
        let faces = tricolour_face_indices(colours);
        debug_assert_eq!(faces.len(), 2);
        let exit = match (faces[0] == entry, faces[1] == entry) {
            (true, _) => faces[1],
            (_, true) => faces[0],
            _ => return Err(TopologyError::EntryNotTricolour { tetra, face: entry }),
        };
        points.push(perturber.point(tetra.face_vertices(exit)));
        tetrahedra.push(tetra);

        if (tetra, exit) == end {
            break;
        }
        match tetra.adjacent(exit, size) {
            Neighbour::Boundary => return Err(TopologyError::EscapedBoundary { tetra }),
            Neighbour::Tetrahedron { tetra: next, face } => {
                tetra = next;
                entry = face;
            }
        }
    }

    let mut curve = TricolourCurve { size, points, tetrahedra, closure: Vec::new() };
    curve.closure = closure_path(&curve);
    Ok(curve)
}

/// Crossing-free closing path from the `f'` endpoint to the `f` endpoint.
///
/// Leaves the cube through `x = N`, drops to `z = -1`, runs around the square
/// footprint along `x = N + 1` and `y = -1`, then comes up below the start
/// point. The result excludes the two curve endpoints.
pub fn closure_path(curve: &TricolourCurve) -> Vec<Point3> {
    let n = curve.size.n() as f64;
    let end = *curve.points.last().unwrap();
    let start = curve.points[0];
    vec![
        [n + 1.0, end[1], end[2]],
        [n + 1.0, end[1], -1.0],
        [n + 1.0, -1.0, -1.0],
        [start[0], -1.0, -1.0],
        [start[0], 0.0, -1.0],
    ]
}

/// Alternative closure passing over the top of the cube and straight across
/// its footprint. Its projection does cross the curve, always from above.
pub fn closure_path_over_top(curve: &TricolourCurve) -> Vec<Point3> {
    let n = curve.size.n() as f64;
    let end = *curve.points.last().unwrap();
    let start = curve.points[0];
    vec![[n + 1.0, end[1], end[2]], [n + 1.0, end[1], n + 1.0], [start[0], -1.0, n + 1.0], [start[0], -1.0, start[2]]]
}
