//! Word-size prime fields, used by the multi-modular inverse in `cyclo`.

use std::sync::{OnceLock, RwLock};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    r
}

fn invmod(a: u64, p: u64) -> u64 {
    powmod(a, p - 2, p)
}

/// Deterministic Miller-Rabin for 64-bit inputs.
fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &b in &BASES {
        if n.is_multiple_of(b) {
            return n == b;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'outer: for &b in &BASES {
        let mut x = powmod(b, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

fn primes() -> &'static RwLock<Vec<u64>> {
    static P: OnceLock<RwLock<Vec<u64>>> = OnceLock::new();
    P.get_or_init(|| RwLock::new(Vec::new()))
}

/// The i-th prime below 2^62, counting down.
pub(crate) fn prime(i: usize) -> u64 {
    if let Some(&p) = primes().read().unwrap().get(i) {
        return p;
    }
    let mut w = primes().write().unwrap();
    let mut c = w.last().copied().unwrap_or(1u64 << 62);
    while w.len() <= i {
        c -= 1;
        while !is_prime(c) {
            c -= 1;
        }
        w.push(c);
    }
    w[i]
}

pub(crate) fn reduce(x: &BigInt, p: u64) -> u64 {
    let m = x.mod_floor(&BigInt::from(p));
    m.to_u64().unwrap()
}

fn trim(a: &mut Vec<u64>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

/// Inverse of a modulo m over F_p, or None when they share a factor mod p.
pub(crate) fn poly_inv_mod(a: &[u64], m: &[u64], p: u64) -> Option<Vec<u64>> {
    let mut r0 = m.to_vec();
    let mut r1 = a.to_vec();
    trim(&mut r0);
    trim(&mut r1);
    let mut s0: Vec<u64> = Vec::new();
    let mut s1: Vec<u64> = vec![1];
    while r1.len() > 1 {
        // r0 = q r1 + rem
        let lead_inv = invmod(*r1.last().unwrap(), p);
        let db = r1.len() - 1;
        let mut rem = r0.clone();
        let mut q = vec![0u64; rem.len().saturating_sub(db)];
        for k in (0..q.len()).rev() {
            let c = mulmod(rem[k + db], lead_inv, p);
            if c != 0 {
                for j in 0..=db {
                    rem[k + j] = (rem[k + j] + p - mulmod(c, r1[j], p)) % p;
                }
            }
            q[k] = c;
        }
        rem.truncate(db);
        trim(&mut rem);
        // s2 = s0 - q s1
        let mut s2 = vec![0u64; (q.len() + s1.len()).max(s0.len())];
        for (i, &x) in s0.iter().enumerate() {
            s2[i] = x;
        }
        for (i, &x) in q.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in s1.iter().enumerate() {
                s2[i + j] = (s2[i + j] + p - mulmod(x, y, p)) % p;
            }
        }
        trim(&mut s2);
        r0 = std::mem::replace(&mut r1, rem);
        s0 = std::mem::replace(&mut s1, s2);
    }
    if r1.is_empty() {
        return None;
    }
    let c = invmod(r1[0], p);
    Some(s1.iter().map(|&x| mulmod(x, c, p)).collect())
}

/// Fold residue r mod p into x mod m.
pub(crate) fn crt_step(x: &mut BigInt, m: &BigInt, r: u64, p: u64) {
    let xm = reduce(x, p);
    let minv = invmod(reduce(m, p), p);
    let t = mulmod((r + p - xm) % p, minv, p);
    *x += m * BigInt::from(t);
}

/// n/d ≡ u mod m with |n|, d ≤ sqrt(m/2), if such a pair exists.
pub(crate) fn rational_reconstruct(u: &BigInt, m: &BigInt) -> Option<(BigInt, BigInt)> {
    let bound: BigInt = (m / BigInt::from(2)).sqrt();
    let (mut r0, mut r1) = (m.clone(), u.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = std::mem::replace(&mut r1, r2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || t1.abs() > bound {
        return None;
    }
    if t1.sign() == Sign::Minus {
        Some((-r1, -t1))
    } else {
        Some((r1, t1))
    }
}
