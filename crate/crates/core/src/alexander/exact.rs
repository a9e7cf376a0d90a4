//! Exact determinants of integer and Gaussian-integer matrices.
//!
//! Small matrices use fraction-free (Bareiss) elimination on dense big
//! integers. Larger ones are reduced modulo 62-bit primes, eliminated with the
//! sparse engine, and recombined by the Chinese remainder theorem. Primes are
//! added until the reconstruction survives [`STABLE_PRIMES`] further primes
//! unchanged, or until the Hadamard bound is covered, whichever comes first.
//! Every prime is `1 mod 4`, so `i` maps to a square root of `-1` and a
//! Gaussian determinant is recovered from its two images.

use std::sync::{Mutex, OnceLock};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Zero};

use super::sparse_lu::{eliminate, Field, PrimeField};

/// Dimension up to which dense Bareiss elimination is used.
pub const BAREISS_LIMIT: usize = 48;

/// Consecutive primes that must leave the reconstruction unchanged. A wrong
/// early stop needs the error to vanish modulo each of them, which has
/// probability below `bits / 2^61` per prime.
pub const STABLE_PRIMES: usize = 2;

pub fn det_integer(n: usize, rows: &[Vec<(u32, i64)>]) -> BigInt {
    if n <= BAREISS_LIMIT {
        bareiss_integer(n, rows)
    } else {
        modular_integer(n, rows)
    }
}

pub fn det_gaussian_norm(n: usize, rows: &[Vec<(u32, (i64, i64))>]) -> BigUint {
    let (x, y) = if n <= BAREISS_LIMIT { bareiss_gaussian(n, rows) } else { modular_gaussian(n, rows) };
    (&x * &x + &y * &y).to_biguint().expect("sum of squares")
}

fn dense<T: Clone>(n: usize, rows: &[Vec<(u32, T)>], zero: T, conv: impl Fn(&T) -> T) -> Vec<Vec<T>> {
    let mut a = vec![vec![zero; n]; n];
    for (i, r) in rows.iter().enumerate() {
        for (j, v) in r {
            a[i][*j as usize] = conv(v);
        }
    }
    a
}

/// Bareiss elimination over the integers.
pub fn bareiss_integer(n: usize, rows: &[Vec<(u32, i64)>]) -> BigInt {
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Vec<Vec<BigInt>> =
        dense(n, rows, 0i64, |&x| x).into_iter().map(|r| r.into_iter().map(BigInt::from).collect()).collect();
    let mut sign = 1i32;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(s) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, s);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if sign < 0 {
        -d
    } else {
        d
    }
}

#[derive(Debug, Clone, PartialEq)]
struct Gauss {
    re: BigInt,
    im: BigInt,
}

impl Gauss {
    fn one() -> Self {
        Self { re: BigInt::one(), im: BigInt::zero() }
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    fn mul(&self, o: &Gauss) -> Gauss {
        Gauss { re: &self.re * &o.re - &self.im * &o.im, im: &self.re * &o.im + &self.im * &o.re }
    }

    fn sub(&self, o: &Gauss) -> Gauss {
        Gauss { re: &self.re - &o.re, im: &self.im - &o.im }
    }

    /// Division known to be exact.
    fn div_exact(&self, o: &Gauss) -> Gauss {
        let norm = &o.re * &o.re + &o.im * &o.im;
        let re = &self.re * &o.re + &self.im * &o.im;
        let im = &self.im * &o.re - &self.re * &o.im;
        debug_assert!(re.is_multiple_of(&norm) && im.is_multiple_of(&norm));
        Gauss { re: re / &norm, im: im / norm }
    }
}

/// Bareiss elimination over the Gaussian integers; returns `(re, im)`.
pub fn bareiss_gaussian(n: usize, rows: &[Vec<(u32, (i64, i64))>]) -> (BigInt, BigInt) {
    if n == 0 {
        return (BigInt::one(), BigInt::zero());
    }
    let mut a: Vec<Vec<Gauss>> = dense(n, rows, (0i64, 0i64), |&x| x)
        .into_iter()
        .map(|r| r.into_iter().map(|(x, y)| Gauss { re: x.into(), im: y.into() }).collect())
        .collect();
    let mut sign = 1i32;
    let mut prev = Gauss::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(s) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return (BigInt::zero(), BigInt::zero());
            };
            a.swap(k, s);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = a[i][j].mul(&a[k][k]).sub(&a[i][k].mul(&a[k][j])).div_exact(&prev);
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if sign < 0 {
        (-d.re, -d.im)
    } else {
        (d.re, d.im)
    }
}

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let f = PrimeField { p: n };
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'bases: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = f.pow(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = f.mul(x, x);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// A prime `p = 1 mod 4` and a square root of `-1` modulo `p`.
#[derive(Debug, Clone, Copy)]
struct Modulus {
    p: u64,
    root: u64,
}

fn primes(count: usize) -> Vec<Modulus> {
    static CACHE: OnceLock<Mutex<Vec<Modulus>>> = OnceLock::new();
    let mut cache = CACHE.get_or_init(|| Mutex::new(Vec::new())).lock().unwrap();
    let mut candidate = cache.last().map_or((1u64 << 62) + 1, |m| m.p - 4);
    while cache.len() < count {
        if is_prime_u64(candidate) {
            let f = PrimeField { p: candidate };
            let root = (2..).map(|c| f.pow(c, (candidate - 1) / 4)).find(|&r| f.mul(r, r) == candidate - 1).unwrap();
            cache.push(Modulus { p: candidate, root });
        }
        candidate -= 4;
    }
    cache[..count].to_vec()
}

/// `log2` of the Hadamard bound, the smaller of the row and column versions.
fn hadamard_bits(n: usize, entries: impl Iterator<Item = (u32, u32, f64)>) -> f64 {
    let mut rs = vec![0.0f64; n];
    let mut cs = vec![0.0f64; n];
    for (i, j, sq) in entries {
        rs[i as usize] += sq;
        cs[j as usize] += sq;
    }
    let sum = |v: &[f64]| v.iter().filter(|&&s| s > 0.0).map(|s| 0.5 * s.log2()).sum::<f64>();
    sum(&rs).min(sum(&cs))
}

fn prime_count(bits: f64) -> usize {
    // Symmetric range needs one extra bit; each prime carries at least 61.
    ((bits + 3.0) / 61.0).ceil().max(1.0) as usize
}

fn det_mod(f: &PrimeField, n: usize, rows: Vec<Vec<(u32, u64)>>) -> u64 {
    let e = eliminate(f, n, rows, 0.0);
    if e.singular {
        return 0;
    }
    let d = e.pivots.iter().fold(1u64, |acc, &x| f.mul(acc, x));
    if e.parity < 0 {
        f.sub(0, d)
    } else {
        d
    }
}

/// Incremental CRT: keeps `x mod m` in `[0, m)`.
struct Crt {
    x: BigUint,
    m: BigUint,
}

impl Crt {
    fn new() -> Self {
        Self { x: BigUint::zero(), m: BigUint::one() }
    }

    fn push(&mut self, r: u64, p: u64) {
        let f = PrimeField { p };
        let xm = (&self.x % p).iter_u64_digits().next().unwrap_or(0);
        let mm = (&self.m % p).iter_u64_digits().next().unwrap_or(0);
        let t = f.mul(f.sub(r, xm), f.inv(mm));
        self.x += &self.m * t;
        self.m *= p;
    }

    fn symmetric(&self) -> BigInt {
        let half = &self.m >> 1;
        if self.x > half {
            BigInt::from_biguint(Sign::Plus, self.x.clone()) - BigInt::from_biguint(Sign::Plus, self.m.clone())
        } else {
            BigInt::from_biguint(Sign::Plus, self.x.clone())
        }
    }
}

/// Multi-modular determinant over the integers.
pub fn modular_integer(n: usize, rows: &[Vec<(u32, i64)>]) -> BigInt {
    if n == 0 {
        return BigInt::one();
    }
    let bits = hadamard_bits(
        n,
        rows.iter().enumerate().flat_map(|(i, r)| r.iter().map(move |&(j, v)| (i as u32, j, (v as f64) * (v as f64)))),
    );
    let mut crt = Crt::new();
    let mut stable = 0;
    let mut value = BigInt::zero();
    for m in primes(prime_count(bits)) {
        let f = PrimeField { p: m.p };
        let reduced = rows.iter().map(|r| r.iter().map(|&(j, v)| (j, f.reduce_i64(v))).collect()).collect();
        crt.push(det_mod(&f, n, reduced), m.p);
        let next = crt.symmetric();
        stable = if next == value { stable + 1 } else { 0 };
        value = next;
        if stable >= STABLE_PRIMES {
            break;
        }
    }
    value
}

/// Multi-modular determinant over the Gaussian integers; returns `(re, im)`.
pub fn modular_gaussian(n: usize, rows: &[Vec<(u32, (i64, i64))>]) -> (BigInt, BigInt) {
    if n == 0 {
        return (BigInt::one(), BigInt::zero());
    }
    let bits = hadamard_bits(
        n,
        rows.iter().enumerate().flat_map(|(i, r)| {
            r.iter().map(move |&(j, (a, b))| (i as u32, j, (a as f64) * (a as f64) + (b as f64) * (b as f64)))
        }),
    );
    let mut re = Crt::new();
    let mut im = Crt::new();
    let mut stable = 0;
    let mut value = (BigInt::zero(), BigInt::zero());
    for m in primes(prime_count(bits)) {
        let f = PrimeField { p: m.p };
        let image = |root: u64| -> u64 {
            let reduced = rows
                .iter()
                .map(|r| {
                    r.iter().map(|&(j, (a, b))| (j, f.add(f.reduce_i64(a), f.mul(f.reduce_i64(b), root)))).collect()
                })
                .collect();
            det_mod(&f, n, reduced)
        };
        let plus = image(m.root);
        let minus = image(f.sub(0, m.root));
        let half = f.inv(2);
        re.push(f.mul(f.add(plus, minus), half), m.p);
        im.push(f.mul(f.sub(plus, minus), f.inv(f.mul(2, m.root))), m.p);
        let next = (re.symmetric(), im.symmetric());
        stable = if next == value { stable + 1 } else { 0 };
        value = next;
        if stable >= STABLE_PRIMES {
            break;
        }
    }
    value
}
