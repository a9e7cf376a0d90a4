//! Cube lattice, its decomposition into tetrahedra, and three-colour site
//! percolation with free or Dobrushin boundary conditions.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rng::ColourStream;

pub type Colour = u8;
pub type LatticePoint = [u32; 3];

#[derive(Debug, Error, PartialEq, Eq)]
#[error("cube size must be at least 2, got {0}")]
pub struct InvalidSize(pub u32);

/// Side length `N` of the cube; the vertex grid is `{0..N}^3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct CubeSize(u32);

impl CubeSize {
    pub fn new(n: u32) -> Result<Self, InvalidSize> {
        if n >= 2 {
            Ok(Self(n))
        } else {
            Err(InvalidSize(n))
        }
    }

    #[inline]
    pub fn n(self) -> u32 {
        self.0
    }

    /// Number of lattice points along one axis (`N + 1`).
    #[inline]
    pub fn side(self) -> usize {
        self.0 as usize + 1
    }

    #[inline]
    pub fn point_count(self) -> usize {
        self.side().pow(3)
    }

    /// Dense index of a lattice point; the first coordinate varies slowest.
    #[inline]
    pub fn index(self, p: LatticePoint) -> usize {
        let s = self.side();
        (p[0] as usize * s + p[1] as usize) * s + p[2] as usize
    }

    #[inline]
    pub fn point(self, index: usize) -> LatticePoint {
        let s = self.side();
        [(index / (s * s)) as u32, ((index / s) % s) as u32, (index % s) as u32]
    }

    pub fn tetrahedron_count(self) -> usize {
        6 * (self.0 as usize).pow(3)
    }
}

impl TryFrom<u32> for CubeSize {
    type Error = InvalidSize;
    fn try_from(n: u32) -> Result<Self, InvalidSize> {
        Self::new(n)
    }
}

impl From<CubeSize> for u32 {
    fn from(s: CubeSize) -> u32 {
        s.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    Free,
    Dobrushin,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointClass {
    Interior,
    Forced(Colour),
}

/// Forced boundary colour under the Dobrushin condition, or `Interior`.
///
/// The explicit corner lists are checked first, then the strict edges, then the
/// strict faces. These sets partition the boundary, so the order only matters
/// for readability.
pub fn classify_boundary_point(p: LatticePoint, size: CubeSize) -> PointClass {
    let n = size.n();
    let on = |c: u32| c == 0 || c == n;
    let boundary_axes = p.iter().filter(|&&c| on(c)).count();
    match boundary_axes {
        0 => PointClass::Interior,
        3 => PointClass::Forced(corner_colour(p, n)),
        2 => {
            // Exactly one free coordinate: strict edge E^{(i,j)}_{k,l}.
            let free = (0..3).find(|&a| !on(p[a])).unwrap();
            let (i, j) = match free {
                0 => (1, 2),
                1 => (0, 2),
                _ => (0, 1),
            };
            PointClass::Forced(edge_colour(i, j, p[i] == n, p[j] == n))
        }
        _ => {
            let axis = (0..3).find(|&a| on(p[a])).unwrap();
            PointClass::Forced(face_colour(axis, p[axis] == n))
        }
    }
}

fn corner_colour(p: LatticePoint, n: u32) -> Colour {
    match (p[0] == n, p[1] == n, p[2] == n) {
        (true, false, true) => 1,
        (true, false, false) => 2,
        _ => 0,
    }
}

/// Colour of the strict edge where axis `i` sits at `hi_i ? N : 0` and axis `j`
/// at `hi_j ? N : 0` (axes 0-based, `i < j`).
fn edge_colour(i: usize, j: usize, hi_i: bool, hi_j: bool) -> Colour {
    match ((i, j), hi_i, hi_j) {
        ((1, 2), true, false) | ((1, 2), true, true) => 0,
        ((0, 2), false, true) => 0,
        ((0, 1), false, false) | ((0, 1), false, true) | ((0, 1), true, true) => 0,
        ((1, 2), false, true) => 1,
        ((0, 2), true, true) => 1,
        ((1, 2), false, false) => 2,
        ((0, 2), false, false) | ((0, 2), true, false) => 2,
        ((0, 1), true, false) => 2,
        _ => unreachable!("edge axes must be ordered"),
    }
}

fn face_colour(axis: usize, hi: bool) -> Colour {
    match (axis, hi) {
        (0, false) | (1, true) => 0,
        (1, false) | (2, true) => 1,
        (0, true) | (2, false) => 2,
        _ => unreachable!(),
    }
}

/// Vertex colouring of the cube, immutable once sampled.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColouringGrid {
    size: CubeSize,
    colours: Vec<Colour>,
    boundary: Boundary,
    seed: u64,
}

impl ColouringGrid {
    /// Interior points (and every point under `Free`) are drawn i.i.d. uniform
    /// in index order from the stream seeded by `seed`.
    pub fn sample(size: CubeSize, boundary: Boundary, seed: u64) -> Self {
        let mut stream = ColourStream::new(seed);
        let colours = (0..size.point_count())
            .map(|i| match boundary {
                Boundary::Free => stream.next_colour(),
                Boundary::Dobrushin => match classify_boundary_point(size.point(i), size) {
                    PointClass::Interior => stream.next_colour(),
                    PointClass::Forced(c) => c,
                },
            })
            .collect();
        Self { size, colours, boundary, seed }
    }

    /// Builds a grid from explicit colours. Dobrushin boundary values are
    /// overwritten with their forced colours.
    pub fn from_colours(size: CubeSize, boundary: Boundary, mut colours: Vec<Colour>) -> Self {
        assert_eq!(colours.len(), size.point_count(), "colour vector has wrong length");
        assert!(colours.iter().all(|&c| c < 3), "colours must lie in {{0,1,2}}");
        if boundary == Boundary::Dobrushin {
            for (i, c) in colours.iter_mut().enumerate() {
                if let PointClass::Forced(f) = classify_boundary_point(size.point(i), size) {
                    *c = f;
                }
            }
        }
        Self { size, colours, boundary, seed: 0 }
    }

    pub fn size(&self) -> CubeSize {
        self.size
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    #[inline]
    pub fn colour(&self, p: LatticePoint) -> Colour {
        self.colours[self.size.index(p)]
    }

    pub fn colours(&self) -> &[Colour] {
        &self.colours
    }

    /// Debug dump: `N` on the first line, then `k1 k2 k3 c` per point.
    pub fn dump(&self) -> String {
        let mut out = String::with_capacity(self.colours.len() * 10);
        writeln!(out, "{}", self.size.n()).unwrap();
        for (i, c) in self.colours.iter().enumerate() {
            let p = self.size.point(i);
            writeln!(out, "{} {} {} {}", p[0], p[1], p[2], c).unwrap();
        }
        out
    }
}

/// Permutation `rho` of the three axes, stored 0-based: `rho[0] = ρ(1) - 1`.
pub type AxisOrder = [u8; 3];

pub const AXIS_ORDERS: [AxisOrder; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

/// The tetrahedron `{k + x : 0 <= x_ρ(1) <= x_ρ(2) <= x_ρ(3) <= 1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TetrahedronId {
    pub cube: [u32; 3],
    pub rho: AxisOrder,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Neighbour {
    Tetrahedron { tetra: TetrahedronId, face: usize },
    Boundary,
}

impl TetrahedronId {
    pub fn new(cube: [u32; 3], rho: AxisOrder) -> Self {
        debug_assert!(AXIS_ORDERS.contains(&rho));
        Self { cube, rho }
    }

    /// Vertices `k, k+e_ρ(3), k+e_ρ(3)+e_ρ(2), k+(1,1,1)`; face `i` omits vertex `i`.
    pub fn vertices(&self) -> [LatticePoint; 4] {
        let v0 = self.cube;
        let mut v1 = v0;
        v1[self.rho[2] as usize] += 1;
        let mut v2 = v1;
        v2[self.rho[1] as usize] += 1;
        let v3 = [v0[0] + 1, v0[1] + 1, v0[2] + 1];
        [v0, v1, v2, v3]
    }

    pub fn face_vertices(&self, face: usize) -> [LatticePoint; 3] {
        let v = self.vertices();
        let mut out = [[0; 3]; 3];
        let mut k = 0;
        for (i, p) in v.iter().enumerate() {
            if i != face {
                out[k] = *p;
                k += 1;
            }
        }
        out
    }

    /// Dense index in `0..6N^3`.
    pub fn index(&self, size: CubeSize) -> usize {
        let n = size.n() as usize;
        let c = (self.cube[0] as usize * n + self.cube[1] as usize) * n + self.cube[2] as usize;
        let r = AXIS_ORDERS.iter().position(|o| *o == self.rho).unwrap();
        c * 6 + r
    }

    /// The tetrahedron on the other side of `face`, with the index of the shared
    /// face in that tetrahedron.
    ///
    /// Face 3 lies in the plane `x_ρ(1) = k_ρ(1)` and face 0 in `x_ρ(3) = k_ρ(3) + 1`;
    /// both lead to a neighbouring cube with the axis order rotated. Faces 1 and 2
    /// are the diagonal planes inside the cube.
    pub fn adjacent(&self, face: usize, size: CubeSize) -> Neighbour {
        let [a, b, c] = self.rho;
        match face {
            0 => {
                let axis = c as usize;
                if self.cube[axis] + 1 >= size.n() {
                    return Neighbour::Boundary;
                }
                let mut cube = self.cube;
                cube[axis] += 1;
                Neighbour::Tetrahedron { tetra: TetrahedronId::new(cube, [c, a, b]), face: 3 }
            }
            3 => {
                let axis = a as usize;
                if self.cube[axis] == 0 {
                    return Neighbour::Boundary;
                }
                let mut cube = self.cube;
                cube[axis] -= 1;
                Neighbour::Tetrahedron { tetra: TetrahedronId::new(cube, [b, c, a]), face: 0 }
            }
            1 => Neighbour::Tetrahedron { tetra: TetrahedronId::new(self.cube, [a, c, b]), face: 1 },
            2 => Neighbour::Tetrahedron { tetra: TetrahedronId::new(self.cube, [b, a, c]), face: 2 },
            _ => panic!("tetrahedron face index out of range: {face}"),
        }
    }

    /// Whether the closed tetrahedron contains `x` (coordinates in lattice units).
    pub fn contains(&self, x: [f64; 3]) -> bool {
        let local: Vec<f64> = (0..3).map(|i| x[i] - self.cube[i] as f64).collect();
        let [a, b, c] = self.rho.map(|r| local[r as usize]);
        0.0 <= a && a <= b && b <= c && c <= 1.0
    }
}

/// All `6N^3` tetrahedra, cube by cube.
pub fn all_tetrahedra(size: CubeSize) -> impl Iterator<Item = TetrahedronId> {
    let n = size.n();
    (0..n).flat_map(move |i| {
        (0..n).flat_map(move |j| {
            (0..n).flat_map(move |k| AXIS_ORDERS.iter().map(move |&rho| TetrahedronId::new([i, j, k], rho)))
        })
    })
}
