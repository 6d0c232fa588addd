//! Exact arithmetic in cyclotomic fields Q(zeta_N).
//!
//! Elements are stored in the power basis of Q[x]/(Phi_N) with a common
//! denominator. Small values live in `i64` and are computed in `i128` with
//! checked arithmetic; anything that overflows falls back to `BigInt`.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::modp;

pub type Rational = BigRational;

/// Cached data for one conductor.
pub(crate) struct FieldData {
    /// Monic Phi_N, low degree first, length deg + 1.
    phi: Vec<i64>,
    /// `tail[j]` is x^(deg + j) mod Phi_N, for deg + j < N.
    tail: Vec<Vec<i64>>,
}

impl FieldData {
    fn deg(&self) -> usize {
        self.phi.len() - 1
    }
}

fn field_cache() -> &'static RwLock<HashMap<u64, Arc<FieldData>>> {
    static CACHE: OnceLock<RwLock<HashMap<u64, Arc<FieldData>>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

fn phi_cache() -> &'static RwLock<HashMap<u64, Arc<Vec<i64>>>> {
    static CACHE: OnceLock<RwLock<HashMap<u64, Arc<Vec<i64>>>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// The n-th cyclotomic polynomial, low degree first.
pub fn cyclotomic_poly(n: u64) -> Arc<Vec<i64>> {
    assert!(n >= 1);
    if let Some(p) = phi_cache().read().unwrap().get(&n) {
        return p.clone();
    }
    // x^n - 1 divided by Phi_d for every proper divisor d
    let mut num: Vec<i128> = vec![0; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if !n.is_multiple_of(d) {
            continue;
        }
        let div = cyclotomic_poly(d);
        num = exact_div_monic(&num, &div);
    }
    let p: Vec<i64> = num.iter().map(|&c| c as i64).collect();
    let p = Arc::new(p);
    phi_cache()
        .write()
        .unwrap()
        .entry(n)
        .or_insert_with(|| p.clone())
        .clone()
}

fn exact_div_monic(num: &[i128], div: &[i64]) -> Vec<i128> {
    let dd = div.len() - 1;
    let mut rem = num.to_vec();
    let qlen = num.len() - dd;
    let mut quo = vec![0i128; qlen];
    for k in (0..qlen).rev() {
        let c = rem[k + dd];
        quo[k] = c;
        if c != 0 {
            for (j, &dj) in div.iter().enumerate() {
                rem[k + j] -= c * dj as i128;
            }
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0));
    quo
}

pub(crate) fn field(n: u64) -> Arc<FieldData> {
    if let Some(f) = field_cache().read().unwrap().get(&n) {
        return f.clone();
    }
    let phi = (*cyclotomic_poly(n)).clone();
    let deg = phi.len() - 1;
    let mut tail = Vec::new();
    // x^deg = -(phi[0..deg])
    let mut cur: Vec<i64> = phi[..deg].iter().map(|&c| -c).collect();
    let mut j = deg;
    while (j as u64) < n {
        tail.push(cur.clone());
        // multiply by x
        let top = cur[deg - 1];
        for i in (1..deg).rev() {
            cur[i] = cur[i - 1] - top * phi[i];
        }
        cur[0] = -top * phi[0];
        j += 1;
    }
    let f = Arc::new(FieldData { phi, tail });
    field_cache()
        .write()
        .unwrap()
        .entry(n)
        .or_insert_with(|| f.clone())
        .clone()
}

/// Euler totient via the degree of Phi_n.
pub fn totient(n: u64) -> usize {
    cyclotomic_poly(n).len() - 1
}

// ---------------------------------------------------------------------------
// coefficient rings used by the polynomial kernels

trait Coef: Clone {
    fn czero() -> Self;
    fn cis_zero(&self) -> bool;
    fn from_i64(v: i64) -> Self;
    fn cadd(&self, o: &Self) -> Option<Self>;
    fn csub(&self, o: &Self) -> Option<Self>;
    fn cmul(&self, o: &Self) -> Option<Self>;
}

impl Coef for i128 {
    fn czero() -> Self {
        0
    }
    fn cis_zero(&self) -> bool {
        *self == 0
    }
    fn from_i64(v: i64) -> Self {
        v as i128
    }
    fn cadd(&self, o: &Self) -> Option<Self> {
        self.checked_add(*o)
    }
    fn csub(&self, o: &Self) -> Option<Self> {
        self.checked_sub(*o)
    }
    fn cmul(&self, o: &Self) -> Option<Self> {
        self.checked_mul(*o)
    }
}

impl Coef for BigInt {
    fn czero() -> Self {
        Zero::zero()
    }
    fn cis_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }
    fn cadd(&self, o: &Self) -> Option<Self> {
        Some(self + o)
    }
    fn csub(&self, o: &Self) -> Option<Self> {
        Some(self - o)
    }
    fn cmul(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
}

fn poly_mul_mod<T: Coef>(a: &[T], b: &[T], f: &FieldData) -> Option<Vec<T>> {
    if a.is_empty() || b.is_empty() {
        return Some(Vec::new());
    }
    let mut prod = vec![T::czero(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        if ai.cis_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            if bj.cis_zero() {
                continue;
            }
            prod[i + j] = prod[i + j].cadd(&ai.cmul(bj)?)?;
        }
    }
    reduce_mod(prod, f)
}

fn reduce_mod<T: Coef>(mut prod: Vec<T>, f: &FieldData) -> Option<Vec<T>> {
    let deg = f.deg();
    if prod.len() > deg {
        for k in (deg..prod.len()).rev() {
            let c = prod[k].clone();
            if c.cis_zero() {
                continue;
            }
            for j in 0..deg {
                let pj = f.phi[j];
                if pj != 0 {
                    prod[k - deg + j] = prod[k - deg + j].csub(&c.cmul(&T::from_i64(pj))?)?;
                }
            }
            prod[k] = T::czero();
        }
        prod.truncate(deg);
    }
    Some(prod)
}

/// Re-express an element of Q(zeta_n) inside Q(zeta_m), n | m.
fn embed_poly<T: Coef>(a: &[T], n: u64, m: u64) -> Option<Vec<T>> {
    if n == m || a.len() <= 1 {
        return Some(a.to_vec());
    }
    let f = field(m);
    let deg = f.deg();
    let step = (m / n) as usize;
    let mut out = vec![T::czero(); deg];
    for (i, ai) in a.iter().enumerate() {
        if ai.cis_zero() {
            continue;
        }
        let e = (i * step) % m as usize;
        if e < deg {
            out[e] = out[e].cadd(ai)?;
        } else {
            for (j, &c) in f.tail[e - deg].iter().enumerate() {
                if c != 0 {
                    out[j] = out[j].cadd(&ai.cmul(&T::from_i64(c))?)?;
                }
            }
        }
    }
    Some(out)
}

/// Apply zeta_n -> zeta_n^k.
fn galois_poly<T: Coef>(a: &[T], n: u64, k: u64) -> Option<Vec<T>> {
    let f = field(n);
    let deg = f.deg();
    let mut out = vec![T::czero(); deg.max(1)];
    for (i, ai) in a.iter().enumerate() {
        if ai.cis_zero() {
            continue;
        }
        let e = ((i as u64 * k) % n) as usize;
        if e < deg {
            out[e] = out[e].cadd(ai)?;
        } else {
            for (j, &c) in f.tail[e - deg].iter().enumerate() {
                if c != 0 {
                    out[j] = out[j].cadd(&ai.cmul(&T::from_i64(c))?)?;
                }
            }
        }
    }
    Some(out)
}

fn lincomb<T: Coef>(a: &[T], ka: &T, b: &[T], kb: &T) -> Option<Vec<T>> {
    let len = a.len().max(b.len());
    let mut out = Vec::with_capacity(len);
    for i in 0..len {
        let x = match a.get(i) {
            Some(v) if !v.cis_zero() => v.cmul(ka)?,
            _ => T::czero(),
        };
        let y = match b.get(i) {
            Some(v) if !v.cis_zero() => v.cmul(kb)?,
            _ => T::czero(),
        };
        out.push(x.cadd(&y)?);
    }
    Some(out)
}

// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq)]
enum Repr {
    Small(Vec<i64>, i64),
    Big(Vec<BigInt>, BigInt),
}

/// An exact element of Q(zeta_N).
#[derive(Clone, Debug)]
pub struct CycNumber {
    n: u64,
    repr: Repr,
}

enum Wide {
    Small(Vec<i128>, i128),
    Big(Vec<BigInt>, BigInt),
}

impl Repr {
    fn to_i128(&self) -> Option<(Vec<i128>, i128)> {
        match self {
            Repr::Small(v, d) => Some((v.iter().map(|&x| x as i128).collect(), *d as i128)),
            Repr::Big(..) => None,
        }
    }
    fn to_big(&self) -> (Vec<BigInt>, BigInt) {
        match self {
            Repr::Small(v, d) => (v.iter().map(|&x| BigInt::from(x)).collect(), BigInt::from(*d)),
            Repr::Big(v, d) => (v.clone(), d.clone()),
        }
    }
    fn is_zero(&self) -> bool {
        match self {
            Repr::Small(v, _) => v.is_empty(),
            Repr::Big(v, _) => v.is_empty(),
        }
    }
    fn len(&self) -> usize {
        match self {
            Repr::Small(v, _) => v.len(),
            Repr::Big(v, _) => v.len(),
        }
    }
}

fn finish(n: u64, w: Wide) -> CycNumber {
    match w {
        Wide::Small(mut v, mut d) => {
            while v.last() == Some(&0) {
                v.pop();
            }
            if v.is_empty() {
                return CycNumber::zero();
            }
            if d < 0 {
                d = -d;
                for x in v.iter_mut() {
                    *x = -*x;
                }
            }
            let mut g = d;
            for x in &v {
                if g == 1 {
                    break;
                }
                g = g.gcd(x);
            }
            if g > 1 {
                d /= g;
                for x in v.iter_mut() {
                    *x /= g;
                }
            }
            let fits = d <= i64::MAX as i128
                && v.iter().all(|&x| x >= i64::MIN as i128 && x <= i64::MAX as i128);
            if fits {
                canonical_n(
                    n,
                    Repr::Small(v.into_iter().map(|x| x as i64).collect(), d as i64),
                )
            } else {
                finish(
                    n,
                    Wide::Big(
                        v.into_iter().map(BigInt::from).collect(),
                        BigInt::from(d),
                    ),
                )
            }
        }
        Wide::Big(mut v, mut d) => {
            while v.last().is_some_and(|x| x.is_zero()) {
                v.pop();
            }
            if v.is_empty() {
                return CycNumber::zero();
            }
            if d.is_negative() {
                d = -d;
                for x in v.iter_mut() {
                    *x = -&*x;
                }
            }
            let mut g = d.clone();
            for x in &v {
                if g.is_one() {
                    break;
                }
                g = g.gcd(x);
            }
            if !g.is_one() {
                d /= &g;
                for x in v.iter_mut() {
                    *x /= &g;
                }
            }
            let small: Option<Vec<i64>> = v.iter().map(|x| x.to_i64()).collect();
            match (small, d.to_i64()) {
                (Some(s), Some(dd)) => canonical_n(n, Repr::Small(s, dd)),
                _ => canonical_n(n, Repr::Big(v, d)),
            }
        }
    }
}

fn canonical_n(n: u64, repr: Repr) -> CycNumber {
    // rationals and Q(zeta_2) share the basis {1}
    let n = if repr.len() <= 1 || n == 2 { 1 } else { n };
    CycNumber { n, repr }
}

impl CycNumber {
    pub fn zero() -> Self {
        CycNumber {
            n: 1,
            repr: Repr::Small(Vec::new(), 1),
        }
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(v: i64) -> Self {
        if v == 0 {
            return Self::zero();
        }
        CycNumber {
            n: 1,
            repr: Repr::Small(vec![v], 1),
        }
    }

    pub fn from_rational(x: &Rational) -> Self {
        finish(
            1,
            Wide::Big(vec![x.numer().clone()], x.denom().clone()),
        )
    }

    pub fn from_frac(p: i64, q: i64) -> Self {
        finish(1, Wide::Small(vec![p as i128], q as i128))
    }

    /// Build from power-basis coefficients over conductor n; reduces mod Phi_n.
    pub fn from_coeffs(n: u64, coeffs: &[Rational]) -> Self {
        assert!(n >= 1);
        let mut den = BigInt::one();
        for c in coeffs {
            den = den.lcm(c.denom());
        }
        let v: Vec<BigInt> = coeffs
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        let f = field(n);
        let v = reduce_mod(v, &f).unwrap();
        finish(n, Wide::Big(v, den))
    }

    pub fn conductor(&self) -> u64 {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.repr.is_zero()
    }

    pub fn is_one(&self) -> bool {
        matches!(&self.repr, Repr::Small(v, 1) if v.len() == 1 && v[0] == 1)
    }

    /// The value as a rational, when it lies in Q.
    pub fn to_rational(&self) -> Option<Rational> {
        if self.repr.len() > 1 {
            return None;
        }
        let (v, d) = self.repr.to_big();
        Some(Rational::new(
            v.into_iter().next().unwrap_or_else(BigInt::zero),
            d,
        ))
    }

    /// Power-basis coefficients, padded to deg(Phi_N).
    pub fn coeffs(&self) -> Vec<Rational> {
        let deg = totient(self.n);
        let (v, d) = self.repr.to_big();
        (0..deg)
            .map(|i| {
                Rational::new(v.get(i).cloned().unwrap_or_else(BigInt::zero), d.clone())
            })
            .collect()
    }

    /// Number of nonzero power-basis coefficients.
    pub fn support(&self) -> usize {
        match &self.repr {
            Repr::Small(v, _) => v.iter().filter(|x| **x != 0).count(),
            Repr::Big(v, _) => v.iter().filter(|x| !x.is_zero()).count(),
        }
    }

    /// Same value expressed over conductor m (n must divide m).
    pub fn embed(&self, m: u64) -> CycNumber {
        assert!(m.is_multiple_of(self.n), "conductor {} does not divide {}", self.n, m);
        if m == self.n || self.repr.len() <= 1 {
            return self.clone();
        }
        if let Some((v, d)) = self.repr.to_i128() {
            if let Some(e) = embed_poly(&v, self.n, m) {
                return finish(m, Wide::Small(e, d));
            }
        }
        let (v, d) = self.repr.to_big();
        let e = embed_poly(&v, self.n, m).unwrap();
        finish(m, Wide::Big(e, d))
    }

    fn binop<FS, FB>(&self, o: &Self, fs: FS, fb: FB) -> CycNumber
    where
        FS: Fn(&[i128], i128, &[i128], i128, u64) -> Option<Wide>,
        FB: Fn(&[BigInt], &BigInt, &[BigInt], &BigInt, u64) -> Wide,
    {
        let m = self.n.lcm(&o.n);
        if let (Some((a, da)), Some((b, db))) = (self.repr.to_i128(), o.repr.to_i128()) {
            let a = if a.len() > 1 { embed_poly(&a, self.n, m) } else { Some(a) };
            let b = if b.len() > 1 { embed_poly(&b, o.n, m) } else { Some(b) };
            if let (Some(a), Some(b)) = (a, b) {
                if let Some(w) = fs(&a, da, &b, db, m) {
                    return finish(m, w);
                }
            }
        }
        let (a, da) = self.repr.to_big();
        let (b, db) = o.repr.to_big();
        let a = if a.len() > 1 { embed_poly(&a, self.n, m).unwrap() } else { a };
        let b = if b.len() > 1 { embed_poly(&b, o.n, m).unwrap() } else { b };
        finish(m, fb(&a, &da, &b, &db, m))
    }

    fn add_sub(&self, o: &Self, sign: i64) -> CycNumber {
        if o.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return if sign == 1 { o.clone() } else { -o };
        }
        self.binop(
            o,
            |a, da, b, db, _| {
                let den = da.lcm(&db);
                let ka = den / da;
                let kb = (den / db).checked_mul(sign as i128)?;
                Some(Wide::Small(lincomb(a, &ka, b, &kb)?, den))
            },
            |a, da, b, db, _| {
                let den = da.lcm(db);
                let ka = &den / da;
                let kb = (&den / db) * BigInt::from(sign);
                Wide::Big(lincomb(a, &ka, b, &kb).unwrap(), den)
            },
        )
    }

    fn mul_ref(&self, o: &Self) -> CycNumber {
        if self.is_zero() || o.is_zero() {
            return CycNumber::zero();
        }
        if o.is_one() {
            return self.clone();
        }
        if self.is_one() {
            return o.clone();
        }
        // scalar fast path
        if self.repr.len() == 1 && o.repr.len() > 1 {
            return o.mul_ref(self);
        }
        if o.repr.len() == 1 {
            return self.binop(
                o,
                |a, da, b, db, _| {
                    let k = b[0];
                    let v: Option<Vec<i128>> = a.iter().map(|x| x.checked_mul(k)).collect();
                    Some(Wide::Small(v?, da.checked_mul(db)?))
                },
                |a, da, b, db, _| {
                    let k = &b[0];
                    Wide::Big(a.iter().map(|x| x * k).collect(), da * db)
                },
            );
        }
        self.binop(
            o,
            |a, da, b, db, m| {
                let f = field(m);
                Some(Wide::Small(poly_mul_mod(a, b, &f)?, da.checked_mul(db)?))
            },
            |a, da, b, db, m| {
                let f = field(m);
                Wide::Big(poly_mul_mod(a, b, &f).unwrap(), da * db)
            },
        )
    }

    pub fn neg_ref(&self) -> CycNumber {
        match &self.repr {
            Repr::Small(v, d) => {
                if v.iter().all(|&x| x != i64::MIN) {
                    return CycNumber {
                        n: self.n,
                        repr: Repr::Small(v.iter().map(|&x| -x).collect(), *d),
                    };
                }
                let (v, d) = self.repr.to_big();
                finish(self.n, Wide::Big(v.into_iter().map(|x| -x).collect(), d))
            }
            Repr::Big(v, d) => finish(
                self.n,
                Wide::Big(v.iter().map(|x| -x).collect(), d.clone()),
            ),
        }
    }

    /// Multiplicative inverse.
    pub fn inv(&self) -> Result<CycNumber> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let (v, d) = self.repr.to_big();
        let nz: Vec<usize> = (0..v.len()).filter(|&i| !v[i].is_zero()).collect();
        if nz.len() == 1 {
            // c * zeta^k
            let k = nz[0] as u64;
            let c = &v[k as usize];
            let mono = root_of_unity(self.n, -(k as i64));
            let s = CycNumber::from_rational(&Rational::new(d, c.clone()));
            return Ok(&mono * &s);
        }
        Ok(self.inv_multimodular(&v, &d))
    }

    /// x = v/d; solve v z = 1 mod Phi over several primes, lift by CRT and
    /// rational reconstruction, and accept once d z times x is exactly 1.
    fn inv_multimodular(&self, v: &[BigInt], d: &BigInt) -> CycNumber {
        let f = field(self.n);
        let deg = f.deg();
        let mut acc = vec![BigInt::zero(); deg];
        let mut modulus = BigInt::one();
        let mut used = 0usize;
        let mut next = 0usize;
        let mut target = 2usize;
        loop {
            while used < target {
                let p = modp::prime(next);
                next += 1;
                let a: Vec<u64> = v.iter().map(|x| modp::reduce(x, p)).collect();
                let m: Vec<u64> = f.phi.iter().map(|&c| modp::reduce(&BigInt::from(c), p)).collect();
                let Some(z) = modp::poly_inv_mod(&a, &m, p) else { continue };
                for (i, slot) in acc.iter_mut().enumerate() {
                    modp::crt_step(slot, &modulus, z.get(i).copied().unwrap_or(0), p);
                }
                modulus *= BigInt::from(p);
                used += 1;
            }
            let rec: Option<Vec<Rational>> = acc
                .iter()
                .map(|u| modp::rational_reconstruct(u, &modulus).map(|(n, m)| Rational::new(n * d, m)))
                .collect();
            if let Some(cs) = rec {
                let y = CycNumber::from_coeffs(self.n, &cs);
                if (&y * self).is_one() {
                    return y;
                }
            }
            target *= 2;
        }
    }

    /// Inverse by the extended Euclidean algorithm over Q; slow reference.
    #[cfg(test)]
    fn inv_euclid(&self) -> CycNumber {
        let (v, d) = self.repr.to_big();
        let f = field(self.n);
        let phi: Vec<Rational> = f.phi.iter().map(|&c| Rational::from_integer(c.into())).collect();
        let a: Vec<Rational> = v
            .iter()
            .map(|x| Rational::new(x.clone(), d.clone()))
            .collect();
        let s = rat_poly_inverse(&a, &phi);
        CycNumber::from_coeffs(self.n, &s)
    }

    pub fn div(&self, o: &Self) -> Result<CycNumber> {
        Ok(self * &o.inv()?)
    }

    /// Integer power; negative exponents invert.
    pub fn pow(&self, e: i64) -> Result<CycNumber> {
        let mut base = if e < 0 { self.inv()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = CycNumber::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        Ok(acc)
    }

    /// Field automorphism zeta_N -> zeta_N^k, gcd(k, N) = 1.
    pub fn galois(&self, k: i64) -> CycNumber {
        let n = self.n;
        let k = k.rem_euclid(n as i64) as u64;
        if self.repr.len() <= 1 {
            return self.clone();
        }
        if let Some((v, d)) = self.repr.to_i128() {
            if let Some(e) = galois_poly(&v, n, k) {
                return finish(n, Wide::Small(e, d));
            }
        }
        let (v, d) = self.repr.to_big();
        finish(n, Wide::Big(galois_poly(&v, n, k).unwrap(), d))
    }

    /// Complex conjugation, zeta_N -> zeta_N^{-1}.
    pub fn conj(&self) -> CycNumber {
        self.galois(-1)
    }

    /// Numerical embedding zeta_N -> exp(2 pi i / N).
    pub fn to_float(&self) -> (f64, f64) {
        let (v, d) = self.repr.to_big();
        let d = d.to_f64().unwrap_or(f64::INFINITY);
        let mut re = 0.0;
        let mut im = 0.0;
        for (i, c) in v.iter().enumerate() {
            let c = c.to_f64().unwrap_or(f64::NAN) / d;
            let t = 2.0 * std::f64::consts::PI * i as f64 / self.n as f64;
            re += c * t.cos();
            im += c * t.sin();
        }
        (re, im)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let coeffs: Vec<serde_json::Value> = self
            .coeffs()
            .iter()
            .map(|c| serde_json::Value::String(fmt_rational(c)))
            .collect();
        serde_json::json!({"conductor": self.n, "coeffs": coeffs})
    }

    pub fn from_json(v: &serde_json::Value) -> Result<CycNumber> {
        let n = v
            .get("conductor")
            .and_then(|x| x.as_u64())
            .filter(|&n| n >= 1)
            .ok_or_else(|| Error::Parse("missing conductor".into()))?;
        let arr = v
            .get("coeffs")
            .and_then(|x| x.as_array())
            .ok_or_else(|| Error::Parse("missing coeffs".into()))?;
        let mut cs = Vec::with_capacity(arr.len());
        for c in arr {
            let s = c
                .as_str()
                .ok_or_else(|| Error::Parse("coefficient must be a string".into()))?;
            cs.push(parse_rational(s)?);
        }
        Ok(CycNumber::from_coeffs(n, &cs))
    }
}

#[cfg(test)]
fn rat_poly_trim(p: &mut Vec<Rational>) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

#[cfg(test)]
fn rat_poly_divmod(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let mut rem = a.to_vec();
    rat_poly_trim(&mut rem);
    let db = b.len() - 1;
    let lead = b[db].clone();
    if rem.len() < b.len() {
        return (Vec::new(), rem);
    }
    let mut quo = vec![Rational::zero(); rem.len() - db];
    for k in (0..quo.len()).rev() {
        let c = &rem[k + db] / &lead;
        if !c.is_zero() {
            for j in 0..=db {
                let t = &c * &b[j];
                rem[k + j] -= t;
            }
        }
        quo[k] = c;
    }
    rem.truncate(db);
    rat_poly_trim(&mut rem);
    (quo, rem)
}

#[cfg(test)]
fn rat_poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

#[cfg(test)]
fn rat_poly_sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let len = a.len().max(b.len());
    let mut out: Vec<Rational> = (0..len)
        .map(|i| {
            a.get(i).cloned().unwrap_or_else(Rational::zero)
                - b.get(i).cloned().unwrap_or_else(Rational::zero)
        })
        .collect();
    rat_poly_trim(&mut out);
    out
}

#[cfg(test)]
/// Inverse of a modulo an irreducible m, by the extended Euclidean algorithm.
fn rat_poly_inverse(a: &[Rational], m: &[Rational]) -> Vec<Rational> {
    let mut r0 = m.to_vec();
    let mut r1 = a.to_vec();
    rat_poly_trim(&mut r1);
    let mut s0: Vec<Rational> = Vec::new();
    let mut s1: Vec<Rational> = vec![Rational::one()];
    while !r1.is_empty() {
        let (q, rem) = rat_poly_divmod(&r0, &r1);
        let s2 = rat_poly_sub(&s0, &rat_poly_mul(&q, &s1));
        r0 = std::mem::replace(&mut r1, rem);
        s0 = std::mem::replace(&mut s1, s2);
    }
    // r0 is a nonzero constant
    let c = r0[0].clone();
    s0.iter().map(|x| x / &c).collect()
}

impl PartialEq for CycNumber {
    fn eq(&self, o: &Self) -> bool {
        if self.n == o.n {
            return self.repr == o.repr;
        }
        if self.repr.len() <= 1 && o.repr.len() <= 1 {
            return self.repr == o.repr;
        }
        (self - o).is_zero()
    }
}

impl Eq for CycNumber {}

macro_rules! forward_binop {
    ($tr:ident, $m:ident, $body:expr) => {
        impl<'a, 'b> $tr<&'b CycNumber> for &'a CycNumber {
            type Output = CycNumber;
            fn $m(self, o: &'b CycNumber) -> CycNumber {
                $body(self, o)
            }
        }
        impl $tr<CycNumber> for CycNumber {
            type Output = CycNumber;
            fn $m(self, o: CycNumber) -> CycNumber {
                $body(&self, &o)
            }
        }
        impl<'b> $tr<&'b CycNumber> for CycNumber {
            type Output = CycNumber;
            fn $m(self, o: &'b CycNumber) -> CycNumber {
                $body(&self, o)
            }
        }
        impl<'a> $tr<CycNumber> for &'a CycNumber {
            type Output = CycNumber;
            fn $m(self, o: CycNumber) -> CycNumber {
                $body(self, &o)
            }
        }
    };
}

forward_binop!(Add, add, |a: &CycNumber, b: &CycNumber| a.add_sub(b, 1));
forward_binop!(Sub, sub, |a: &CycNumber, b: &CycNumber| a.add_sub(b, -1));
forward_binop!(Mul, mul, |a: &CycNumber, b: &CycNumber| a.mul_ref(b));

impl Neg for CycNumber {
    type Output = CycNumber;
    fn neg(self) -> CycNumber {
        self.neg_ref()
    }
}

impl Neg for &CycNumber {
    type Output = CycNumber;
    fn neg(self) -> CycNumber {
        self.neg_ref()
    }
}

impl Default for CycNumber {
    fn default() -> Self {
        CycNumber::zero()
    }
}

pub fn fmt_rational(x: &Rational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("bad rational {s:?}"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(p, q))
        }
        None => {
            let p: BigInt = s.parse().map_err(|_| bad())?;
            Ok(Rational::from_integer(p))
        }
    }
}

pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(p.into(), q.into())
}

impl fmt::Display for CycNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cs: Vec<String> = self.coeffs().iter().map(fmt_rational).collect();
        write!(f, "cyc({})[{}]", self.n, cs.join(", "))
    }
}

impl std::str::FromStr for CycNumber {
    type Err = Error;
    fn from_str(s: &str) -> Result<CycNumber> {
        let bad = || Error::Parse(format!("bad cyclotomic literal {s:?}"));
        let s = s.trim();
        let rest = s.strip_prefix("cyc(").ok_or_else(bad)?;
        let (n, rest) = rest.split_once(')').ok_or_else(bad)?;
        let n: u64 = n.trim().parse().map_err(|_| bad())?;
        if n == 0 {
            return Err(bad());
        }
        let body = rest
            .trim()
            .strip_prefix('[')
            .and_then(|b| b.strip_suffix(']'))
            .ok_or_else(bad)?;
        let mut cs = Vec::new();
        if !body.trim().is_empty() {
            for part in body.split(',') {
                cs.push(parse_rational(part)?);
            }
        }
        Ok(CycNumber::from_coeffs(n, &cs))
    }
}

/// zeta_N^k.
pub fn root_of_unity(n: u64, k: i64) -> CycNumber {
    assert!(n >= 1);
    let e = k.rem_euclid(n as i64) as usize;
    if e == 0 {
        return CycNumber::one();
    }
    let f = field(n);
    let deg = f.deg();
    let v: Vec<i128> = if e < deg {
        let mut v = vec![0i128; e + 1];
        v[e] = 1;
        v
    } else {
        f.tail[e - deg].iter().map(|&c| c as i128).collect()
    };
    finish(n, Wide::Small(v, 1))
}

fn qpow_cache() -> &'static RwLock<HashMap<(u64, Rational), CycNumber>> {
    static CACHE: OnceLock<RwLock<HashMap<(u64, Rational), CycNumber>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// q^x = exp(2 pi i x / ell), as an element of Q(zeta_{ell * den(x)}).
pub fn q_power(ell: u64, x: &Rational) -> CycNumber {
    let key = (ell, x.clone());
    if let Some(v) = qpow_cache().read().unwrap().get(&key) {
        return v.clone();
    }
    let d = x.denom().to_u64().expect("denominator too large");
    let n = ell * d;
    let p = x.numer().mod_floor(&BigInt::from(n)).to_i64().unwrap();
    let v = root_of_unity(n, p);
    let mut cache = qpow_cache().write().unwrap();
    if cache.len() > 1 << 16 {
        cache.clear();
    }
    cache.insert(key, v.clone());
    v
}

pub fn q_power_int(ell: u64, k: i64) -> CycNumber {
    root_of_unity(ell, k)
}

/// [x] = q^x - q^{-x}.
pub fn quantum_integer(ell: u64, x: &Rational) -> CycNumber {
    &q_power(ell, x) - &q_power(ell, &-x)
}

fn normalized_qint(ell: u64, j: i64) -> Result<CycNumber> {
    let one = quantum_integer(ell, &Rational::one());
    let qj = quantum_integer(ell, &Rational::from_integer(j.into()));
    if one.is_zero() {
        return Err(Error::QuantumDenominatorZero("1".into()));
    }
    qj.div(&one)
}

/// The normalized factorial prod_{j=1..k} [j]/[1].
pub fn quantum_factorial(ell: u64, k: u64) -> Result<CycNumber> {
    let mut acc = CycNumber::one();
    for j in 1..=k {
        acc = &acc * &normalized_qint(ell, j as i64)?;
    }
    Ok(acc)
}

/// Normalized binomial from the normalized factorials.
pub fn quantum_binomial(ell: u64, k: u64, j: u64) -> Result<CycNumber> {
    if j > k {
        return Err(Error::InvalidParams(format!("binomial({k}, {j})")));
    }
    let num = quantum_factorial(ell, k)?;
    let mut den = CycNumber::one();
    for m in (1..=j).chain(1..=(k - j)) {
        let t = normalized_qint(ell, m as i64)?;
        if t.is_zero() {
            return Err(Error::QuantumDenominatorZero(m.to_string()));
        }
        den = &den * &t;
    }
    num.div(&den)
}
