//! Right-looking sparse Gaussian elimination with Markowitz-style pivoting,
//! generic over the scalar field.
//!
//! The active submatrix is stored by rows, with a lazily cleaned list of row
//! ids per column. At each step the active column with fewest entries is
//! chosen; among its entries whose magnitude is at least `threshold` times the
//! column maximum, the shortest row wins.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::fmt::Debug;

use num_complex::Complex64;

pub trait Field {
    type Elem: Copy + Debug + PartialEq;
    fn zero(&self) -> Self::Elem;
    fn is_zero(&self, a: Self::Elem) -> bool;
    fn sub(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;
    fn mul(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;
    fn div(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;
    /// Size used for threshold pivoting.
    fn magnitude(&self, a: Self::Elem) -> f64;
}

pub struct Reals;

impl Field for Reals {
    type Elem = f64;
    fn zero(&self) -> f64 {
        0.0
    }
    fn is_zero(&self, a: f64) -> bool {
        a == 0.0
    }
    fn sub(&self, a: f64, b: f64) -> f64 {
        a - b
    }
    fn mul(&self, a: f64, b: f64) -> f64 {
        a * b
    }
    fn div(&self, a: f64, b: f64) -> f64 {
        a / b
    }
    fn magnitude(&self, a: f64) -> f64 {
        a.abs()
    }
}

pub struct Complexes;

impl Field for Complexes {
    type Elem = Complex64;
    fn zero(&self) -> Complex64 {
        Complex64::new(0.0, 0.0)
    }
    fn is_zero(&self, a: Complex64) -> bool {
        a.re == 0.0 && a.im == 0.0
    }
    fn sub(&self, a: Complex64, b: Complex64) -> Complex64 {
        a - b
    }
    fn mul(&self, a: Complex64, b: Complex64) -> Complex64 {
        a * b
    }
    fn div(&self, a: Complex64, b: Complex64) -> Complex64 {
        a / b
    }
    fn magnitude(&self, a: Complex64) -> f64 {
        a.norm()
    }
}

/// Integers modulo a prime below 2^63.
#[derive(Debug, Clone, Copy)]
pub struct PrimeField {
    pub p: u64,
}

impl PrimeField {
    #[inline]
    pub fn reduce_i64(&self, a: i64) -> u64 {
        a.rem_euclid(self.p as i64) as u64
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    pub fn pow(&self, mut a: u64, mut e: u64) -> u64 {
        let mut r = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        r
    }

    pub fn inv(&self, a: u64) -> u64 {
        debug_assert!(a != 0);
        self.pow(a, self.p - 2)
    }
}

impl Field for PrimeField {
    type Elem = u64;
    fn zero(&self) -> u64 {
        0
    }
    fn is_zero(&self, a: u64) -> bool {
        a == 0
    }
    #[inline]
    fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
    #[inline]
    fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.p as u128) as u64
    }
    fn div(&self, a: u64, b: u64) -> u64 {
        self.mul(a, self.inv(b))
    }
    fn magnitude(&self, a: u64) -> f64 {
        if a == 0 {
            0.0
        } else {
            1.0
        }
    }
}

/// Outcome of eliminating a square matrix.
#[derive(Debug, Clone)]
pub struct Elimination<E> {
    /// Pivots in elimination order; `det = parity * prod(pivots)`.
    pub pivots: Vec<E>,
    /// Sign of the combined row and column permutation.
    pub parity: i8,
    /// Set when some active column became empty: the determinant is zero.
    pub singular: bool,
    /// Total entries created by fill-in.
    pub fill: usize,
}

fn permutation_parity(order: &[u32]) -> i8 {
    let mut seen = vec![false; order.len()];
    let mut parity = 1i8;
    for start in 0..order.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut u = start;
        while !seen[u] {
            seen[u] = true;
            u = order[u] as usize;
            len += 1;
        }
        if len % 2 == 0 {
            parity = -parity;
        }
    }
    parity
}

/// Eliminates the `n x n` matrix given by sparse rows `(column, value)`.
/// Duplicate columns within a row are not allowed; zero values are dropped.
pub fn eliminate<F: Field>(
    field: &F,
    n: usize,
    rows: Vec<Vec<(u32, F::Elem)>>,
    threshold: f64,
) -> Elimination<F::Elem> {
    assert_eq!(rows.len(), n, "matrix must be square");
    let mut rows: Vec<Vec<(u32, F::Elem)>> =
        rows.into_iter().map(|r| r.into_iter().filter(|e| !field.is_zero(e.1)).collect()).collect();
    let mut cols: Vec<Vec<u32>> = vec![Vec::new(); n];
    for (i, r) in rows.iter().enumerate() {
        for &(j, _) in r {
            cols[j as usize].push(i as u32);
        }
    }
    let mut count: Vec<u32> = cols.iter().map(|c| c.len() as u32).collect();
    let mut heap: BinaryHeap<Reverse<(u32, u32)>> = (0..n as u32).map(|c| Reverse((count[c as usize], c))).collect();
    let mut row_active = vec![true; n];
    let mut col_active = vec![true; n];
    let mut pos = vec![u32::MAX; n];
    let mut pivots = Vec::with_capacity(n);
    let mut row_order = Vec::with_capacity(n);
    let mut col_order = Vec::with_capacity(n);
    let mut fill = 0usize;
    let mut zeros: Vec<u32> = Vec::new();

    let entry_in = |row: &[(u32, F::Elem)], c: u32| row.iter().find(|e| e.0 == c).map(|e| e.1);

    for _ in 0..n {
        let c = loop {
            let Some(Reverse((k, c))) = heap.pop() else {
                unreachable!("an active column always remains");
            };
            let cu = c as usize;
            if !col_active[cu] || k != count[cu] {
                continue;
            }
            let list = std::mem::take(&mut cols[cu]);
            let mut cleaned: Vec<u32> = list
                .into_iter()
                .filter(|&r| row_active[r as usize] && entry_in(&rows[r as usize], c).is_some())
                .collect();
            cleaned.sort_unstable();
            cleaned.dedup();
            let len = cleaned.len() as u32;
            cols[cu] = cleaned;
            if len != k {
                count[cu] = len;
                heap.push(Reverse((len, c)));
                continue;
            }
            break c;
        };
        let cu = c as usize;
        if cols[cu].is_empty() {
            return Elimination { pivots, parity: 1, singular: true, fill };
        }

        let candidates = &cols[cu];
        let max_mag =
            candidates.iter().map(|&r| field.magnitude(entry_in(&rows[r as usize], c).unwrap())).fold(0.0f64, f64::max);
        let r = *candidates
            .iter()
            .filter(|&&r| field.magnitude(entry_in(&rows[r as usize], c).unwrap()) >= threshold * max_mag)
            .min_by(|&&a, &&b| {
                rows[a as usize].len().cmp(&rows[b as usize].len()).then_with(|| {
                    let ma = field.magnitude(entry_in(&rows[a as usize], c).unwrap());
                    let mb = field.magnitude(entry_in(&rows[b as usize], c).unwrap());
                    mb.total_cmp(&ma)
                })
            })
            .unwrap();
        let ru = r as usize;
        let mut prow = std::mem::take(&mut rows[ru]);
        let pk = prow.iter().position(|e| e.0 == c).unwrap();
        let pivot = prow.swap_remove(pk).1;
        pivots.push(pivot);
        row_order.push(r);
        col_order.push(c);
        row_active[ru] = false;
        col_active[cu] = false;
        for &(j, _) in &prow {
            count[j as usize] -= 1;
        }

        let others: Vec<u32> = cols[cu].iter().copied().filter(|&i| i != r).collect();
        for i in others {
            let row = &mut rows[i as usize];
            let k = row.iter().position(|e| e.0 == c).unwrap();
            let a_ic = row.swap_remove(k).1;
            let f = field.div(a_ic, pivot);
            for (idx, e) in row.iter().enumerate() {
                pos[e.0 as usize] = idx as u32;
            }
            for &(j, v) in &prow {
                let p = pos[j as usize];
                let delta = field.mul(f, v);
                if p != u32::MAX {
                    let slot = &mut row[p as usize].1;
                    *slot = field.sub(*slot, delta);
                    if field.is_zero(*slot) {
                        zeros.push(j);
                    }
                } else {
                    row.push((j, field.sub(field.zero(), delta)));
                    cols[j as usize].push(i);
                    count[j as usize] += 1;
                    fill += 1;
                }
            }
            for e in row.iter() {
                pos[e.0 as usize] = u32::MAX;
            }
            if !zeros.is_empty() {
                row.retain(|e| !field.is_zero(e.1));
                for &j in &zeros {
                    count[j as usize] -= 1;
                }
                zeros.clear();
            }
        }
        for &(j, _) in &prow {
            heap.push(Reverse((count[j as usize], j)));
        }
        cols[cu].clear();
    }

    let parity = permutation_parity(&row_order) * permutation_parity(&col_order);
    Elimination { pivots, parity, singular: false, fill }
}
