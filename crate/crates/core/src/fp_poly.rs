//! Dense univariate polynomials over the prime field F_p.
//!
//! These carry the field modulus checks, the minimal polynomials of
//! eigenring elements, and the desk-scale trial-division factorizer.

use std::fmt;

pub(crate) fn add_mod(a: u32, b: u32, p: u32) -> u32 {
    let s = a as u64 + b as u64;
    (s % p as u64) as u32
}

pub(crate) fn sub_mod(a: u32, b: u32, p: u32) -> u32 {
    let s = a as u64 + p as u64 - (b % p) as u64;
    (s % p as u64) as u32
}

pub(crate) fn mul_mod(a: u32, b: u32, p: u32) -> u32 {
    ((a as u64 * b as u64) % p as u64) as u32
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = (acc as u128 * base as u128 % m as u128) as u64;
        }
        base = (base as u128 * base as u128 % m as u128) as u64;
        exp >>= 1;
    }
    acc
}

/// Inverse modulo a prime. Panics on zero.
pub(crate) fn inv_mod(a: u32, p: u32) -> u32 {
    assert!(a % p != 0, "inverse of zero mod {p}");
    pow_mod(a as u64, p as u64 - 2, p as u64) as u32
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Polynomial over F_p, coefficients constant term first, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FpPoly {
    p: u32,
    coeffs: Vec<u32>,
}

impl fmt::Debug for FpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FpPoly(p={}, {:?})", self.p, self.coeffs)
    }
}

impl fmt::Display for FpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (i, c) {
                (0, c) => write!(f, "{c}")?,
                (1, 1) => write!(f, "x")?,
                (1, c) => write!(f, "{c}x")?,
                (i, 1) => write!(f, "x^{i}")?,
                (i, c) => write!(f, "{c}x^{i}")?,
            }
        }
        Ok(())
    }
}

impl FpPoly {
    pub fn new(p: u32, coeffs: Vec<u32>) -> Self {
        let mut poly = FpPoly {
            p,
            coeffs: coeffs.into_iter().map(|c| c % p).collect(),
        };
        poly.trim();
        poly
    }

    pub fn zero(p: u32) -> Self {
        FpPoly { p, coeffs: vec![] }
    }

    pub fn one(p: u32) -> Self {
        FpPoly { p, coeffs: vec![1] }
    }

    /// The monomial `x^k`.
    pub fn x_pow(p: u32, k: usize) -> Self {
        let mut coeffs = vec![0; k + 1];
        coeffs[k] = 1;
        FpPoly { p, coeffs }
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> u32 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.lead() == 1
    }

    pub fn add(&self, other: &FpPoly) -> FpPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).copied().unwrap_or(0);
                let b = other.coeffs.get(i).copied().unwrap_or(0);
                add_mod(a, b, self.p)
            })
            .collect();
        FpPoly::new(self.p, coeffs)
    }

    pub fn sub(&self, other: &FpPoly) -> FpPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).copied().unwrap_or(0);
                let b = other.coeffs.get(i).copied().unwrap_or(0);
                sub_mod(a, b, self.p)
            })
            .collect();
        FpPoly::new(self.p, coeffs)
    }

    pub fn mul(&self, other: &FpPoly) -> FpPoly {
        if self.is_zero() || other.is_zero() {
            return FpPoly::zero(self.p);
        }
        let p = self.p as u64;
        let mut acc = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                acc[i + j] = (acc[i + j] + a as u64 * b as u64) % p;
            }
        }
        FpPoly::new(self.p, acc.into_iter().map(|c| c as u32).collect())
    }

    pub fn pow(&self, mut exp: u64) -> FpPoly {
        let mut base = self.clone();
        let mut acc = FpPoly::one(self.p);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            exp >>= 1;
        }
        acc
    }

    pub fn scale(&self, c: u32) -> FpPoly {
        FpPoly::new(
            self.p,
            self.coeffs.iter().map(|&a| mul_mod(a, c, self.p)).collect(),
        )
    }

    pub fn monic(&self) -> FpPoly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(inv_mod(self.lead(), self.p))
    }

    /// Euclidean division. Panics if `divisor` is zero.
    pub fn div_rem(&self, divisor: &FpPoly) -> (FpPoly, FpPoly) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let p = self.p;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (FpPoly::zero(p), self.clone());
        }
        let inv_lead = inv_mod(divisor.lead(), p);
        let mut quot = vec![0u32; rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = mul_mod(rem[k + dd], inv_lead, p);
            quot[k] = c;
            if c == 0 {
                continue;
            }
            for (j, &b) in divisor.coeffs.iter().enumerate() {
                rem[k + j] = sub_mod(rem[k + j], mul_mod(c, b, p), p);
            }
        }
        rem.truncate(dd);
        (FpPoly::new(p, quot), FpPoly::new(p, rem))
    }

    pub fn rem(&self, divisor: &FpPoly) -> FpPoly {
        self.div_rem(divisor).1
    }

    /// Monic gcd; gcd(0, 0) = 0.
    pub fn gcd(&self, other: &FpPoly) -> FpPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn mul_mod_poly(&self, other: &FpPoly, modulus: &FpPoly) -> FpPoly {
        self.mul(other).rem(modulus)
    }

    pub fn pow_mod_poly(&self, mut exp: u64, modulus: &FpPoly) -> FpPoly {
        let mut base = self.rem(modulus);
        let mut acc = FpPoly::one(self.p).rem(modulus);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul_mod_poly(&base, modulus);
            }
            base = base.mul_mod_poly(&base, modulus);
            exp >>= 1;
        }
        acc
    }

    /// Irreducibility over F_p for a polynomial of degree `n >= 1`:
    /// `x^{p^n} = x mod self` and `gcd(x^{p^k} - x, self) = 1` for `k <= n/2`.
    pub fn is_irreducible(&self) -> bool {
        let n = match self.degree() {
            None | Some(0) => return false,
            Some(1) => return true,
            Some(n) => n,
        };
        let f = self.monic();
        let x = FpPoly::x_pow(self.p, 1);
        let mut frob = x.clone();
        for k in 1..=n {
            frob = frob.pow_mod_poly(self.p as u64, &f);
            if k <= n / 2 && !frob.sub(&x).gcd(&f).degree().is_some_and(|d| d == 0) {
                return false;
            }
        }
        frob == x.rem(&f)
    }

    /// All monic polynomials of degree `d`, lexicographic in the digit
    /// vector with the constant term least significant.
    pub fn monic_of_degree(p: u32, d: usize) -> impl Iterator<Item = FpPoly> {
        let count = (p as u64).pow(d as u32);
        (0..count).map(move |mut idx| {
            let mut coeffs = Vec::with_capacity(d + 1);
            for _ in 0..d {
                coeffs.push((idx % p as u64) as u32);
                idx /= p as u64;
            }
            coeffs.push(1);
            FpPoly { p, coeffs }
        })
    }

    /// Complete factorization by trial division against monic candidates
    /// in increasing degree. Returns monic irreducible factors with
    /// multiplicities, ordered by degree then lexicographically. The leading
    /// coefficient is dropped; the input should be monic.
    pub fn factor(&self) -> Vec<(FpPoly, usize)> {
        let mut rest = self.monic();
        let mut out = Vec::new();
        let mut d = 1;
        while rest.degree().is_some_and(|deg| d <= deg / 2) {
            for cand in FpPoly::monic_of_degree(self.p, d) {
                let mut mult = 0;
                loop {
                    let (q, r) = rest.div_rem(&cand);
                    if !r.is_zero() {
                        break;
                    }
                    rest = q;
                    mult += 1;
                }
                if mult > 0 {
                    out.push((cand, mult));
                }
                if rest.degree().is_some_and(|deg| deg < 2 * d) {
                    break;
                }
            }
            d += 1;
        }
        if rest.degree().is_some_and(|deg| deg >= 1) {
            // the cofactor may repeat a factor already found
            if let Some(entry) = out.iter_mut().find(|(f, _)| *f == rest) {
                entry.1 += 1;
            } else {
                out.push((rest, 1));
            }
            out.sort_by(|a, b| {
                a.0.coeffs
                    .len()
                    .cmp(&b.0.coeffs.len())
                    .then_with(|| a.0.coeffs.iter().rev().cmp(b.0.coeffs.iter().rev()))
            });
        }
        out
    }
}
