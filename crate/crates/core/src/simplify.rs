//! Reidemeister simplification of knot codes.
//!
//! Moves act on codes with block rotation (`sigma` cycles `4c..4c+4`), so
//! `sigma^2` is `u ^ 2` and only `alpha` changes. Faces are `phi`-cycles; a
//! face is referred to by any of its half-edges.

use thiserror::Error;

use crate::diagram::{block_sigma, block_sigma_inv, KnotCode};
use crate::rng::CoinStream;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InvalidMove {
    #[error("code must use block rotation")]
    NotBlockForm,
    #[error("half-edge {0} is out of range")]
    OutOfRange(u32),
    #[error("face of {0} is not a monogon")]
    NotMonogon(u32),
    #[error("face of {0} is not a bigon between two distinct crossings")]
    NotBigon(u32),
    #[error("bigon at {0} is a clasp: each strand alternates over and under")]
    Clasp(u32),
    #[error("face of {0} is not a trigon on three distinct crossings")]
    NotTrigon(u32),
    #[error("trigon at {0} is alternating and admits no third move")]
    AlternatingTrigon(u32),
}

/// Shake rounds used unless configured otherwise. Each round shrinks large
/// diagrams substantially; at N = 40 a hundred rounds leave about 1% of the
/// raw crossings and cost less than generating the curve.
pub const DEFAULT_SHAKE_ROUNDS: u32 = 100;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimplifyConfig {
    pub shake_probability: f64,
    pub shake_rounds: u32,
    pub rng_seed: u64,
}

impl Default for SimplifyConfig {
    fn default() -> Self {
        Self { shake_probability: 0.5, shake_rounds: DEFAULT_SHAKE_ROUNDS, rng_seed: 0 }
    }
}

/// Mutable working copy: dead crossings stay in place until compaction.
struct Work {
    alpha: Vec<u32>,
    tau: Vec<i8>,
    live: Vec<bool>,
}

#[inline]
fn crossing(u: u32) -> usize {
    (u >> 2) as usize
}

impl Work {
    fn new(code: &KnotCode) -> Result<Self, InvalidMove> {
        if !code.has_block_rotation() {
            return Err(InvalidMove::NotBlockForm);
        }
        Ok(Self { alpha: code.alpha().to_vec(), tau: code.tau().to_vec(), live: vec![true; code.crossings()] })
    }

    #[inline]
    fn phi(&self, u: u32) -> u32 {
        block_sigma_inv(self.alpha[u as usize])
    }

    #[inline]
    fn is_live(&self, u: u32) -> bool {
        self.live[crossing(u)]
    }

    fn check(&self, u: u32) -> Result<(), InvalidMove> {
        if (u as usize) < self.alpha.len() && self.is_live(u) {
            Ok(())
        } else {
            Err(InvalidMove::OutOfRange(u))
        }
    }

    fn is_monogon(&self, u: u32) -> bool {
        self.alpha[u as usize] == block_sigma(u)
    }

    /// Second half-edge of the bigon through `u`, if the face is a bigon on two
    /// distinct crossings.
    fn bigon(&self, u: u32) -> Option<u32> {
        let v = self.phi(u);
        (v != u && self.phi(v) == u && crossing(u) != crossing(v)).then_some(v)
    }

    fn trigon(&self, u: u32) -> Option<[u32; 3]> {
        let v = self.phi(u);
        let w = self.phi(v);
        if self.phi(w) != u {
            return None;
        }
        let (a, b, c) = (crossing(u), crossing(v), crossing(w));
        (a != b && b != c && a != c).then_some([u, v, w])
    }

    fn trigon_admissible(&self, t: [u32; 3]) -> bool {
        t.iter().any(|&x| self.tau[x as usize] == self.tau[self.alpha[x as usize] as usize])
    }

    /// Kills the given crossings and joins each strand straight through them.
    fn remove(&mut self, dead: &[usize]) {
        for &c in dead {
            self.live[c] = false;
        }
        for &c in dead {
            for arm in (4 * c as u32)..(4 * c as u32 + 4) {
                let start = self.alpha[arm as usize];
                if !self.is_live(start) {
                    continue;
                }
                let mut x = arm;
                loop {
                    let z = self.alpha[(x ^ 2) as usize];
                    if self.is_live(z) {
                        self.alpha[start as usize] = z;
                        self.alpha[z as usize] = start;
                        break;
                    }
                    x = z;
                }
            }
        }
    }

    fn r1(&mut self, u: u32) -> Result<(), InvalidMove> {
        self.check(u)?;
        if !self.is_monogon(u) {
            return Err(InvalidMove::NotMonogon(u));
        }
        self.remove(&[crossing(u)]);
        Ok(())
    }

    fn r2(&mut self, u: u32) -> Result<(), InvalidMove> {
        self.check(u)?;
        let v = self.bigon(u).ok_or(InvalidMove::NotBigon(u))?;
        // Poke: the strand along the arc at `u` keeps the same height at both ends.
        if self.tau[u as usize] != self.tau[self.alpha[u as usize] as usize] {
            return Err(InvalidMove::Clasp(u));
        }
        self.remove(&[crossing(u), crossing(v)]);
        Ok(())
    }

    /// Slides one strand across the opposite crossing of the trigon.
    ///
    /// Every strand of the triangle swaps the roles of its internal and external
    /// arms at both corners; `alpha` is conjugated by that involution.
    fn r3(&mut self, u: u32) -> Result<(), InvalidMove> {
        self.check(u)?;
        let t = self.trigon(u).ok_or(InvalidMove::NotTrigon(u))?;
        if !self.trigon_admissible(t) {
            return Err(InvalidMove::AlternatingTrigon(u));
        }
        let mut psi = [(0u32, 0u32); 12];
        for (k, &ip) in t.iter().enumerate() {
            let iq = self.alpha[ip as usize];
            psi[4 * k] = (ip, iq ^ 2);
            psi[4 * k + 1] = (iq ^ 2, ip);
            psi[4 * k + 2] = (iq, ip ^ 2);
            psi[4 * k + 3] = (ip ^ 2, iq);
        }
        let map = |x: u32| psi.iter().find(|p| p.0 == x).map_or(x, |p| p.1);
        let mut touched = [0u32; 24];
        for (k, p) in psi.iter().enumerate() {
            touched[k] = p.0;
            touched[12 + k] = self.alpha[p.0 as usize];
        }
        let mut updates = [(0u32, 0u32); 24];
        for (slot, &x) in updates.iter_mut().zip(&touched) {
            *slot = (map(x), map(self.alpha[x as usize]));
        }
        // Duplicates in `touched` produce identical updates.
        for (x, y) in updates {
            self.alpha[x as usize] = y;
        }
        Ok(())
    }

    fn scan_r1(&mut self) -> usize {
        let mut moves = 0;
        for u in 0..self.alpha.len() as u32 {
            if self.is_live(u) && self.is_monogon(u) {
                self.remove(&[crossing(u)]);
                moves += 1;
            }
        }
        moves
    }

    fn scan_r2(&mut self) -> usize {
        let mut moves = 0;
        for u in 0..self.alpha.len() as u32 {
            if self.is_live(u) && self.r2(u).is_ok() {
                moves += 1;
            }
        }
        moves
    }

    /// One scan over half-edges flipping admissible trigons with probability
    /// `p`. A crossing moved in this scan is not moved again until the next one.
    fn shake(&mut self, p: f64, coins: &mut CoinStream) -> usize {
        let mut touched = vec![false; self.live.len()];
        let mut moves = 0;
        for u in 0..self.alpha.len() as u32 {
            if !self.is_live(u) {
                continue;
            }
            let Some(t) = self.trigon(u) else { continue };
            if t.iter().any(|&x| x < u || touched[crossing(x)]) || !self.trigon_admissible(t) {
                continue;
            }
            if coins.bernoulli(p) {
                self.r3(u).expect("admissible trigon");
                t.iter().for_each(|&x| touched[crossing(x)] = true);
                moves += 1;
            }
        }
        moves
    }

    /// Drops dead crossings in place, keeping the relative order of the live
    /// ones so later scans visit them in the same sequence.
    fn compact(&mut self) {
        let mut new_index = vec![u32::MAX; self.live.len()];
        let mut next = 0u32;
        for (c, &l) in self.live.iter().enumerate() {
            if l {
                new_index[c] = next;
                next += 1;
            }
        }
        let relabel = |u: u32| 4 * new_index[crossing(u)] + (u & 3);
        let h = 4 * next as usize;
        let mut alpha = vec![0u32; h];
        let mut tau = vec![0i8; h];
        for (c, &l) in self.live.iter().enumerate() {
            if !l {
                continue;
            }
            for u in (4 * c as u32)..(4 * c as u32 + 4) {
                alpha[relabel(u) as usize] = relabel(self.alpha[u as usize]);
                tau[relabel(u) as usize] = self.tau[u as usize];
            }
        }
        self.alpha = alpha;
        self.tau = tau;
        self.live = vec![true; next as usize];
    }

    fn compact_if_sparse(&mut self) {
        let live = self.live.iter().filter(|&&l| l).count();
        if 2 * live < self.live.len() {
            self.compact();
        }
    }

    fn into_code(mut self) -> KnotCode {
        self.compact();
        KnotCode::from_arcs(self.alpha, self.tau).expect("Reidemeister moves preserve the encoding")
    }
}

/// Half-edges whose face is a monogon (the loop of a kink).
pub fn find_monogons(code: &KnotCode) -> Vec<u32> {
    (0..code.half_edges() as u32).filter(|&u| code.phi()[u as usize] == u).collect()
}

/// One representative half-edge (the smallest) per face of the given degree.
pub fn find_faces_of_degree(code: &KnotCode, degree: usize) -> Vec<u32> {
    let phi = code.phi();
    (0..code.half_edges() as u32)
        .filter(|&u| {
            let mut x = u;
            for k in 1..=degree {
                x = phi[x as usize];
                if x < u {
                    return false;
                }
                if x == u {
                    return k == degree;
                }
            }
            false
        })
        .collect()
}

/// Removes the kink whose loop is the face of `face`.
pub fn apply_r1(code: &KnotCode, face: u32) -> Result<KnotCode, InvalidMove> {
    let mut w = Work::new(code)?;
    w.r1(face)?;
    Ok(w.into_code())
}

/// Removes both crossings of a poke bigon.
pub fn apply_r2(code: &KnotCode, face: u32) -> Result<KnotCode, InvalidMove> {
    let mut w = Work::new(code)?;
    w.r2(face)?;
    Ok(w.into_code())
}

/// Performs the third move on an admissible trigon. Crossing labels are kept;
/// the new trigon is the face of `face ^ 2`.
pub fn apply_r3(code: &KnotCode, face: u32) -> Result<KnotCode, InvalidMove> {
    let mut w = Work::new(code)?;
    w.r3(face)?;
    Ok(w.into_code())
}

/// Whether the trigon through `face` admits the third move.
pub fn is_admissible_trigon(code: &KnotCode, face: u32) -> bool {
    Work::new(code).ok().and_then(|w| w.trigon(face).map(|t| w.trigon_admissible(t))).unwrap_or(false)
}

/// Scan-and-simplify with kinks and pokes, interleaved with random shakes.
///
/// One scan of each of the first two moves, then `shake_rounds` rounds of
/// (shake, scan, scan), and finally repeated scans until neither move applies.
pub fn simplify(code: &KnotCode, config: &SimplifyConfig) -> KnotCode {
    assert!((0.0..=1.0).contains(&config.shake_probability), "shake probability out of range");
    if code.is_empty() {
        return code.clone();
    }
    let mut w = Work::new(&code.to_block_form()).expect("block form");
    let mut coins = CoinStream::new(config.rng_seed);
    w.scan_r1();
    w.scan_r2();
    for _ in 0..config.shake_rounds {
        w.compact_if_sparse();
        w.shake(config.shake_probability, &mut coins);
        w.scan_r1();
        w.scan_r2();
    }
    while w.scan_r1() + w.scan_r2() > 0 {}
    w.into_code()
}
