//! Projection of the closed curve to the plane `z = 0` and its encoding as a
//! combinatorial map with height data.
//!
//! Half-edges are the outgoing directions at crossings. `sigma` rotates them
//! counterclockwise around their crossing, `alpha` pairs the two ends of an arc,
//! `phi = sigma^-1 . alpha` walks the faces of the projection, and `tau` is +1 on
//! the over-strand and -1 on the under-strand.

use std::collections::HashMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::interface::{Point3, TricolourCurve};

/// Below this height gap two strands are considered to touch.
pub const Z_TIE_TOLERANCE: f64 = 1e-9;
/// Orientation determinants below this value are treated as collinear.
const ORIENT_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Crossing {
    pub position: [f64; 2],
    pub over_segment: usize,
    pub under_segment: usize,
    /// Fraction along the over segment where the crossing sits.
    pub over_param: f64,
    pub under_param: f64,
    pub over_z: f64,
    pub under_z: f64,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DegeneracyError {
    #[error("segments {0} and {1} meet non-transversally in projection")]
    NonTransversal(usize, usize),
    #[error("segments {0} and {1} cross at nearly equal heights")]
    HeightTie(usize, usize),
}

#[inline]
fn orient(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> f64 {
    (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
}

/// Intersection of the projections of two 3D segments, as `(s, t)` parameters,
/// or `None` when they are disjoint.
fn project_intersection(
    p0: Point3,
    p1: Point3,
    q0: Point3,
    q1: Point3,
    ids: (usize, usize),
) -> Result<Option<(f64, f64)>, DegeneracyError> {
    let (a, b, c, d) = ([p0[0], p0[1]], [p1[0], p1[1]], [q0[0], q0[1]], [q1[0], q1[1]]);
    // Cheap bounding-box rejection.
    if a[0].max(b[0]) < c[0].min(d[0])
        || c[0].max(d[0]) < a[0].min(b[0])
        || a[1].max(b[1]) < c[1].min(d[1])
        || c[1].max(d[1]) < a[1].min(b[1])
    {
        return Ok(None);
    }
    let o1 = orient(a, b, c);
    let o2 = orient(a, b, d);
    let o3 = orient(c, d, a);
    let o4 = orient(c, d, b);
    let straddle_pq = (o1 > 0.0) != (o2 > 0.0);
    let straddle_qp = (o3 > 0.0) != (o4 > 0.0);
    let near = |o: f64| o.abs() < ORIENT_TOLERANCE;
    if straddle_pq && straddle_qp {
        if near(o1) || near(o2) || near(o3) || near(o4) {
            return Err(DegeneracyError::NonTransversal(ids.0, ids.1));
        }
        let s = o3 / (o3 - o4);
        let t = o1 / (o1 - o2);
        Ok(Some((s, t)))
    } else if (straddle_pq && (near(o3) || near(o4))) || (straddle_qp && (near(o1) || near(o2))) {
        Err(DegeneracyError::NonTransversal(ids.0, ids.1))
    } else {
        Ok(None)
    }
}

fn make_crossing(points: &[Point3], i: usize, j: usize, s: f64, t: f64) -> Result<Crossing, DegeneracyError> {
    let (p0, p1, q0, q1) = (points[i], points[i + 1], points[j], points[j + 1]);
    let zi = p0[2] + s * (p1[2] - p0[2]);
    let zj = q0[2] + t * (q1[2] - q0[2]);
    if (zi - zj).abs() < Z_TIE_TOLERANCE {
        return Err(DegeneracyError::HeightTie(i, j));
    }
    let position = [p0[0] + s * (p1[0] - p0[0]), p0[1] + s * (p1[1] - p0[1])];
    Ok(if zi > zj {
        Crossing { position, over_segment: i, under_segment: j, over_param: s, under_param: t, over_z: zi, under_z: zj }
    } else {
        Crossing { position, over_segment: j, under_segment: i, over_param: t, under_param: s, over_z: zj, under_z: zi }
    })
}

/// Self-crossings of the projected open curve.
///
/// Segments are bucketed by the unit column of their tetrahedron; only pairs
/// in the same column can cross. Adjacent segments are never compared. The
/// closure path projects outside the open square and contributes nothing.
pub fn detect_crossings(curve: &TricolourCurve) -> Result<Vec<Crossing>, DegeneracyError> {
    let mut columns: HashMap<(u32, u32), Vec<usize>> = HashMap::new();
    for (i, t) in curve.tetrahedra.iter().enumerate() {
        columns.entry((t.cube[0], t.cube[1])).or_default().push(i);
    }
    let mut keys: Vec<_> = columns.keys().copied().collect();
    keys.sort_unstable();
    let pts = &curve.points;
    let mut out = Vec::new();
    for key in keys {
        let segs = &columns[&key];
        for (a, &i) in segs.iter().enumerate() {
            for &j in &segs[a + 1..] {
                if j == i + 1 {
                    continue;
                }
                if let Some((s, t)) = project_intersection(pts[i], pts[i + 1], pts[j], pts[j + 1], (i, j))? {
                    out.push(make_crossing(pts, i, j, s, t)?);
                }
            }
        }
    }
    Ok(out)
}

/// Crossings of a closed polyline given as a vertex ring, by brute force over
/// all non-adjacent segment pairs. Segment `k` joins `ring[k]` and
/// `ring[(k + 1) % len]`.
pub fn detect_crossings_brute_force(ring: &[Point3]) -> Result<Vec<Crossing>, DegeneracyError> {
    let m = ring.len();
    let mut pts = ring.to_vec();
    pts.push(ring[0]);
    let mut out = Vec::new();
    for i in 0..m {
        for j in i + 2..m {
            if i == 0 && j == m - 1 {
                continue;
            }
            if let Some((s, t)) = project_intersection(pts[i], pts[i + 1], pts[j], pts[j + 1], (i, j))? {
                out.push(make_crossing(&pts, i, j, s, t)?);
            }
        }
    }
    Ok(out)
}

/// Identifies which encoding condition failed.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ValidationError {
    #[error("tables have inconsistent lengths or a size that is not a multiple of 4")]
    Shape,
    #[error("{0} is not a permutation of the half-edge set")]
    NotPermutation(&'static str),
    #[error("(i) phi . alpha . sigma differs from the identity at {0}")]
    Composition(u32),
    #[error("(ii) sigma, alpha, phi do not act transitively")]
    Transitivity,
    #[error("(iii) alpha is not a fixed-point-free involution at {0}")]
    AlphaInvolution(u32),
    #[error("(iv) sigma has a cycle of length {len} through {at}")]
    SigmaCycle { at: u32, len: usize },
    #[error("(v) sigma^2 . alpha has a cycle of length {len} through {at}, expected 2n")]
    StrandCycle { at: u32, len: usize },
    #[error("(vi) tau(sigma(u)) != -tau(u) at {0}")]
    TauAlternation(u32),
}

impl ValidationError {
    /// Numbered item (1 to 6) of the encoding conditions, 0 for shape errors.
    pub fn item(&self) -> u8 {
        match self {
            ValidationError::Shape | ValidationError::NotPermutation(_) => 0,
            ValidationError::Composition(_) => 1,
            ValidationError::Transitivity => 2,
            ValidationError::AlphaInvolution(_) => 3,
            ValidationError::SigmaCycle { .. } => 4,
            ValidationError::StrandCycle { .. } => 5,
            ValidationError::TauAlternation(_) => 6,
        }
    }
}

/// Knot diagram encoded on half-edges `0..4n`. `n = 0` is the empty
/// (crossingless) diagram of the unknot.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct KnotCode {
    sigma: Vec<u32>,
    alpha: Vec<u32>,
    phi: Vec<u32>,
    tau: Vec<i8>,
}

fn is_permutation(p: &[u32]) -> bool {
    let mut seen = vec![false; p.len()];
    for &v in p {
        let v = v as usize;
        if v >= p.len() || seen[v] {
            return false;
        }
        seen[v] = true;
    }
    true
}

fn cycle_lengths(perm: impl Fn(usize) -> usize, len: usize) -> Vec<(usize, usize)> {
    let mut seen = vec![false; len];
    let mut out = Vec::new();
    for start in 0..len {
        if seen[start] {
            continue;
        }
        let mut u = start;
        let mut l = 0;
        while !seen[u] {
            seen[u] = true;
            u = perm(u);
            l += 1;
        }
        out.push((start, l));
    }
    out
}

fn find(parent: &mut [u32], mut u: u32) -> u32 {
    while parent[u as usize] != u {
        parent[u as usize] = parent[parent[u as usize] as usize];
        u = parent[u as usize];
    }
    u
}

/// Checks the six encoding conditions literally, in order.
pub fn validate_tables(sigma: &[u32], alpha: &[u32], phi: &[u32], tau: &[i8]) -> Result<(), ValidationError> {
    let h = sigma.len();
    if alpha.len() != h || phi.len() != h || tau.len() != h || !h.is_multiple_of(4) {
        return Err(ValidationError::Shape);
    }
    for (name, p) in [("sigma", sigma), ("alpha", alpha), ("phi", phi)] {
        if !is_permutation(p) {
            return Err(ValidationError::NotPermutation(name));
        }
    }
    for u in 0..h {
        if phi[alpha[sigma[u] as usize] as usize] as usize != u {
            return Err(ValidationError::Composition(u as u32));
        }
    }
    let mut parent: Vec<u32> = (0..h as u32).collect();
    for u in 0..h as u32 {
        for v in [sigma[u as usize], alpha[u as usize], phi[u as usize]] {
            let (a, b) = (find(&mut parent, u), find(&mut parent, v));
            if a != b {
                parent[a as usize] = b;
            }
        }
    }
    if h > 0 {
        let root = find(&mut parent, 0);
        if (0..h as u32).any(|u| find(&mut parent, u) != root) {
            return Err(ValidationError::Transitivity);
        }
    }
    for u in 0..h {
        let a = alpha[u] as usize;
        if a == u || alpha[a] as usize != u {
            return Err(ValidationError::AlphaInvolution(u as u32));
        }
    }
    if let Some(&(at, len)) = cycle_lengths(|u| sigma[u] as usize, h).iter().find(|c| c.1 != 4) {
        return Err(ValidationError::SigmaCycle { at: at as u32, len });
    }
    let n = h / 4;
    let strand = |u: usize| sigma[sigma[alpha[u] as usize] as usize] as usize;
    if let Some(&(at, len)) = cycle_lengths(strand, h).iter().find(|c| c.1 != 2 * n) {
        return Err(ValidationError::StrandCycle { at: at as u32, len });
    }
    for u in 0..h {
        let t = tau[u];
        if !(t == 1 || t == -1) || tau[sigma[u] as usize] != -t {
            return Err(ValidationError::TauAlternation(u as u32));
        }
    }
    Ok(())
}

/// Block rotation used for every code built or rewritten by this crate:
/// crossing `c` owns `4c..4c+4` and `sigma` cycles through them in order.
#[inline]
pub fn block_sigma(u: u32) -> u32 {
    (u & !3) | ((u + 1) & 3)
}

#[inline]
pub fn block_sigma_inv(u: u32) -> u32 {
    (u & !3) | ((u + 3) & 3)
}

impl KnotCode {
    pub fn empty() -> Self {
        Self { sigma: Vec::new(), alpha: Vec::new(), phi: Vec::new(), tau: Vec::new() }
    }

    /// Builds and validates a code from explicit tables (0-based labels).
    pub fn from_tables(sigma: Vec<u32>, alpha: Vec<u32>, phi: Vec<u32>, tau: Vec<i8>) -> Result<Self, ValidationError> {
        validate_tables(&sigma, &alpha, &phi, &tau)?;
        Ok(Self { sigma, alpha, phi, tau })
    }

    /// Builds a code with block rotation from its arc pairing and heights;
    /// `phi` is derived. Validated.
    pub fn from_arcs(alpha: Vec<u32>, tau: Vec<i8>) -> Result<Self, ValidationError> {
        if alpha.len() != tau.len() || !alpha.len().is_multiple_of(4) {
            return Err(ValidationError::Shape);
        }
        let sigma: Vec<u32> = (0..alpha.len() as u32).map(block_sigma).collect();
        if alpha.iter().any(|&a| a as usize >= alpha.len()) {
            return Err(ValidationError::NotPermutation("alpha"));
        }
        let phi = alpha.iter().map(|&a| block_sigma_inv(a)).collect();
        Self::from_tables(sigma, alpha, phi, tau)
    }

    /// Number of crossings.
    pub fn crossings(&self) -> usize {
        self.sigma.len() / 4
    }

    pub fn is_empty(&self) -> bool {
        self.sigma.is_empty()
    }

    pub fn half_edges(&self) -> usize {
        self.sigma.len()
    }

    pub fn sigma(&self) -> &[u32] {
        &self.sigma
    }

    pub fn alpha(&self) -> &[u32] {
        &self.alpha
    }

    pub fn phi(&self) -> &[u32] {
        &self.phi
    }

    pub fn tau(&self) -> &[i8] {
        &self.tau
    }

    /// Whether `sigma` is the block rotation, which the Reidemeister moves need.
    pub fn has_block_rotation(&self) -> bool {
        self.sigma.iter().enumerate().all(|(u, &s)| s == block_sigma(u as u32))
    }

    pub fn validate(&self) -> Result<(), ValidationError> {
        validate_tables(&self.sigma, &self.alpha, &self.phi, &self.tau)
    }

    /// Face label of every half-edge (its `phi`-cycle), numbered by first
    /// appearance, together with the number of faces.
    pub fn faces(&self) -> (Vec<u32>, usize) {
        let h = self.half_edges();
        let mut label = vec![u32::MAX; h];
        let mut count = 0u32;
        for start in 0..h {
            if label[start] != u32::MAX {
                continue;
            }
            let mut u = start;
            while label[u] == u32::MAX {
                label[u] = count;
                u = self.phi[u] as usize;
            }
            count += 1;
        }
        (label, count as usize)
    }

    /// Lengths of all `phi`-cycles, sorted.
    pub fn face_degrees(&self) -> Vec<usize> {
        let mut d: Vec<usize> =
            cycle_lengths(|u| self.phi[u] as usize, self.half_edges()).into_iter().map(|c| c.1).collect();
        d.sort_unstable();
        d
    }

    /// Relabels crossings so that `sigma` becomes the block rotation. Crossing
    /// order follows the smallest half-edge of each `sigma`-cycle and rotation
    /// starts there.
    pub fn to_block_form(&self) -> KnotCode {
        if self.has_block_rotation() {
            return self.clone();
        }
        let h = self.half_edges();
        let mut new_label = vec![u32::MAX; h];
        let mut next = 0u32;
        for start in 0..h {
            if new_label[start] != u32::MAX {
                continue;
            }
            let mut u = start;
            for k in 0..4 {
                new_label[u] = next + k;
                u = self.sigma[u] as usize;
            }
            next += 4;
        }
        let mut alpha = vec![0u32; h];
        let mut tau = vec![0i8; h];
        for u in 0..h {
            alpha[new_label[u] as usize] = new_label[self.alpha[u] as usize];
            tau[new_label[u] as usize] = self.tau[u];
        }
        KnotCode::from_arcs(alpha, tau).expect("relabelling preserves validity")
    }

    /// One line per half-edge: `u sigma(u) alpha(u) phi(u) tau(u)` with 0-based
    /// labels (add 1 to compare with 1-based tables).
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for u in 0..self.half_edges() {
            writeln!(out, "{} {} {} {} {}", u, self.sigma[u], self.alpha[u], self.phi[u], self.tau[u]).unwrap();
        }
        out
    }

    /// Parses the format written by [`KnotCode::dump`].
    pub fn parse_dump(text: &str) -> Result<Self, ValidationError> {
        let mut rows: Vec<(u32, u32, u32, u32, i8)> = Vec::new();
        for line in text.lines().filter(|l| !l.trim().is_empty()) {
            let f: Vec<&str> = line.split_whitespace().collect();
            if f.len() != 5 {
                return Err(ValidationError::Shape);
            }
            let num = |s: &str| s.parse::<u32>().map_err(|_| ValidationError::Shape);
            let t = f[4].parse::<i8>().map_err(|_| ValidationError::Shape)?;
            rows.push((num(f[0])?, num(f[1])?, num(f[2])?, num(f[3])?, t));
        }
        if rows.iter().enumerate().any(|(i, r)| r.0 as usize != i) {
            return Err(ValidationError::Shape);
        }
        Self::from_tables(
            rows.iter().map(|r| r.1).collect(),
            rows.iter().map(|r| r.2).collect(),
            rows.iter().map(|r| r.3).collect(),
            rows.iter().map(|r| r.4).collect(),
        )
    }
}

/// One pass of the curve through a crossing.
#[derive(Debug, Clone, Copy)]
struct Passage {
    segment: usize,
    param: f64,
    crossing: usize,
    over: bool,
}

/// Arm labels of one crossing.
#[derive(Debug, Clone, Copy, Default)]
struct Arms {
    over_fwd: u32,
    over_back: u32,
    under_fwd: u32,
    under_back: u32,
}

fn direction(curve_points: &[Point3], seg: usize) -> [f64; 2] {
    let (p, q) = (curve_points[seg], curve_points[seg + 1]);
    [q[0] - p[0], q[1] - p[1]]
}

fn angle(d: [f64; 2]) -> f64 {
    let a = d[1].atan2(d[0]);
    if a < 0.0 {
        a + std::f64::consts::TAU
    } else {
        a
    }
}

/// Builds the code of the closed curve from its crossings.
///
/// Crossings are numbered by first traversal from the start of the curve;
/// crossing `c` owns half-edges `4c..4c+4` in counterclockwise order starting
/// from the arm of smallest polar angle.
pub fn build_code(curve: &TricolourCurve, crossings: &[Crossing]) -> Result<KnotCode, ValidationError> {
    build_code_from_points(&curve.points, crossings)
}

/// As [`build_code`], for any polyline whose last segment returns to the
/// start. A ring from [`detect_crossings_brute_force`] qualifies once its
/// first vertex is appended.
pub fn build_code_from_points(pts: &[Point3], crossings: &[Crossing]) -> Result<KnotCode, ValidationError> {
    if crossings.is_empty() {
        return Ok(KnotCode::empty());
    }
    let mut passages = Vec::with_capacity(2 * crossings.len());
    for (k, c) in crossings.iter().enumerate() {
        passages.push(Passage { segment: c.over_segment, param: c.over_param, crossing: k, over: true });
        passages.push(Passage { segment: c.under_segment, param: c.under_param, crossing: k, over: false });
    }
    passages.sort_by(|a, b| a.segment.cmp(&b.segment).then(a.param.total_cmp(&b.param)));

    // Renumber crossings by first traversal.
    let mut order = vec![usize::MAX; crossings.len()];
    let mut next = 0;
    for p in &passages {
        if order[p.crossing] == usize::MAX {
            order[p.crossing] = next;
            next += 1;
        }
    }

    let mut arms = vec![Arms::default(); crossings.len()];
    for (k, c) in crossings.iter().enumerate() {
        let d_o = direction(pts, c.over_segment);
        let d_u = direction(pts, c.under_segment);
        let neg = |d: [f64; 2]| [-d[0], -d[1]];
        // Counterclockwise cyclic order from the forward over arm.
        let ring: [(usize, [f64; 2]); 4] = if d_o[0] * d_u[1] - d_o[1] * d_u[0] > 0.0 {
            [(0, d_o), (2, d_u), (1, neg(d_o)), (3, neg(d_u))]
        } else {
            [(0, d_o), (3, neg(d_u)), (1, neg(d_o)), (2, d_u)]
        };
        let first = (0..4).min_by(|&a, &b| angle(ring[a].1).total_cmp(&angle(ring[b].1))).unwrap();
        let base = 4 * order[k] as u32;
        let mut labels = [0u32; 4];
        for r in 0..4 {
            labels[ring[(first + r) % 4].0] = base + r as u32;
        }
        arms[k] = Arms { over_fwd: labels[0], over_back: labels[1], under_fwd: labels[2], under_back: labels[3] };
    }

    let h = 4 * crossings.len();
    let mut alpha = vec![0u32; h];
    let mut tau = vec![0i8; h];
    for a in &arms {
        tau[a.over_fwd as usize] = 1;
        tau[a.over_back as usize] = 1;
        tau[a.under_fwd as usize] = -1;
        tau[a.under_back as usize] = -1;
    }
    let out_arm = |p: &Passage| if p.over { arms[p.crossing].over_fwd } else { arms[p.crossing].under_fwd };
    let in_arm = |p: &Passage| if p.over { arms[p.crossing].over_back } else { arms[p.crossing].under_back };
    for (i, p) in passages.iter().enumerate() {
        let q = &passages[(i + 1) % passages.len()];
        let (a, b) = (out_arm(p), in_arm(q));
        alpha[a as usize] = b;
        alpha[b as usize] = a;
    }
    KnotCode::from_arcs(alpha, tau)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::fixtures::trefoil_tables;

    #[test]
    fn trefoil_table_is_valid() {
        let (s, a, p, t) = trefoil_tables();
        let code = KnotCode::from_tables(s, a, p, t).unwrap();
        assert_eq!(code.crossings(), 3);
        assert!(code.has_block_rotation());
        assert_eq!(code.faces().1, 5);
        // sigma^2 . alpha row of the table
        let expected = [7, 6, 10, 9, 3, 12, 11, 4, 5, 8, 2, 1];
        for u in 0..12 {
            let v = code.sigma()[code.sigma()[code.alpha()[u] as usize] as usize];
            assert_eq!(v + 1, expected[u]);
        }
    }

    #[test]
    fn flipped_tau_violates_item_six() {
        let (s, a, p, mut t) = trefoil_tables();
        t[0] = -1;
        let err = validate_tables(&s, &a, &p, &t).unwrap_err();
        assert_eq!(err.item(), 6);
    }

    #[test]
    fn broken_alpha_violates_involution() {
        let (s, mut a, _, t) = trefoil_tables();
        // Swap two images so alpha stays a permutation but not an involution.
        a.swap(0, 1);
        let mut a_inv = vec![0u32; a.len()];
        for (u, &v) in a.iter().enumerate() {
            a_inv[v as usize] = u as u32;
        }
        let p: Vec<u32> = a_inv.iter().map(|&x| block_sigma_inv(x)).collect();
        let err = validate_tables(&s, &a, &p, &t).unwrap_err();
        assert_eq!(err.item(), 3);
    }

    #[test]
    fn composition_checked_first() {
        let (s, a, mut p, t) = trefoil_tables();
        p.swap(0, 1);
        assert_eq!(validate_tables(&s, &a, &p, &t).unwrap_err().item(), 1);
    }

    #[test]
    fn two_disjoint_kinks_are_not_transitive() {
        // Two separate one-crossing diagrams side by side.
        let alpha = vec![1, 0, 3, 2, 5, 4, 7, 6];
        let tau = vec![1, -1, 1, -1, 1, -1, 1, -1];
        let err = KnotCode::from_arcs(alpha, tau).unwrap_err();
        assert_eq!(err.item(), 2);
    }

    #[test]
    fn dump_round_trips() {
        let (s, a, p, t) = trefoil_tables();
        let code = KnotCode::from_tables(s, a, p, t).unwrap();
        let text = code.dump();
        assert_eq!(text.lines().next().unwrap(), "0 1 4 7 1");
        assert_eq!(KnotCode::parse_dump(&text).unwrap(), code);
    }

    #[test]
    fn skew_segments_cross_once_with_first_over() {
        let ring =
            [[0.2, 0.2, 0.9], [0.8, 0.8, 0.9], [0.8, 0.8, 5.0], [0.2, 0.8, 0.1], [0.8, 0.2, 0.1], [0.8, 0.2, 5.0]];
        // Segments 1 and 4 are vertical-ish connectors; only 0 and 3 cross.
        let pts = [ring[0], ring[1], ring[3], ring[4]];
        let c = project_intersection(pts[0], pts[1], pts[2], pts[3], (0, 1)).unwrap().unwrap();
        let cr = make_crossing(&[pts[0], pts[1], pts[2], pts[3]], 0, 2, c.0, c.1).unwrap();
        assert!((cr.position[0] - 0.5).abs() < 1e-12 && (cr.position[1] - 0.5).abs() < 1e-12);
        assert_eq!(cr.over_segment, 0);
        assert!((cr.over_z - 0.9).abs() < 1e-12 && (cr.under_z - 0.1).abs() < 1e-12);
    }

    #[test]
    fn height_ties_are_degenerate() {
        let pts = [[0.0, 0.0, 1.0], [1.0, 1.0, 1.0], [0.0, 1.0, 1.0], [1.0, 0.0, 1.0]];
        let (s, t) = project_intersection(pts[0], pts[1], pts[2], pts[3], (0, 2)).unwrap().unwrap();
        assert_eq!(make_crossing(&pts, 0, 2, s, t), Err(DegeneracyError::HeightTie(0, 2)));
    }

    #[test]
    fn touching_projection_is_degenerate() {
        let a = [[0.0, 0.0, 0.0], [1.0, 0.0, 0.0]];
        let b = [[0.5, 0.0, 1.0], [0.5, 1.0, 1.0]];
        assert!(project_intersection(a[0], a[1], b[0], b[1], (0, 1)).is_err());
    }
}
