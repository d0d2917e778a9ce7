//! Arithmetic in GF(p) and GF(p^e).
//!
//! An element is stored as the integer `sum d_i p^i` of its little-endian
//! digit vector `d` in the polynomial basis `1, t, ..., t^{e-1}`, where `t`
//! is a root of the field modulus. Multiplication, inversion and Frobenius
//! powers go through discrete-log tables built once per field; addition in
//! odd characteristic uses Zech logarithms and is XOR in characteristic 2.
//! The schoolbook polynomial product is kept as [`FieldCtx::mul_reference`]
//! and is what the tables are built from.

use std::fmt;
use std::hash::{DefaultHasher, Hash, Hasher};
use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};
use crate::fp_linalg::FpMatrix;
use crate::fp_poly::{is_prime, pow_mod, prime_factors, FpPoly};

/// Largest field order this crate will build tables for.
pub const MAX_FIELD_ORDER: u64 = 1 << 20;

const NO_LOG: u32 = u32::MAX;

/// An element of a finite field. Only meaningful together with the
/// [`FieldCtx`] whose identifier it carries.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FqElem {
    value: u32,
    field: u64,
}

impl FqElem {
    /// Integer encoding of the digit vector, `sum d_i p^i`.
    pub fn index(self) -> u32 {
        self.value
    }

    pub fn field_id(self) -> u64 {
        self.field
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    pub fn is_one(self) -> bool {
        self.value == 1
    }
}

impl fmt::Debug for FqElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.value)
    }
}

struct Inner {
    id: u64,
    p: u32,
    e: usize,
    q: u32,
    modulus: Vec<u32>,
    basis: Vec<u32>,
    standard_basis: bool,
    // digits -> basis coordinates, and back
    to_coords: FpMatrix,
    from_coords: FpMatrix,
    exp: Vec<u32>,
    log: Vec<u32>,
    zech: Vec<u32>,
    // p^k mod (q - 1), k < e
    frob_factor: Vec<u64>,
    pow_p: Vec<u32>,
}

/// Immutable description of GF(p^e). Cloning is cheap; two contexts compare
/// equal when they describe the same field with the same modulus and basis.
#[derive(Clone)]
pub struct FieldCtx(Arc<Inner>);

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        self.0.id == other.0.id
    }
}

impl Eq for FieldCtx {}

impl Hash for FieldCtx {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.id.hash(state);
    }
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{}) mod {}", self.0.p, self.0.e, FpPoly::new(self.0.p, self.0.modulus.clone()))
    }
}

impl fmt::Display for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{})", self.0.p, self.0.e)
    }
}

fn digits_of(mut value: u32, p: u32, e: usize) -> Vec<u32> {
    let mut d = Vec::with_capacity(e);
    for _ in 0..e {
        d.push(value % p);
        value /= p;
    }
    d
}

fn value_of(digits: &[u32], p: u32) -> u32 {
    digits.iter().rev().fold(0u32, |acc, &d| acc * p + d)
}

fn field_id(p: u32, e: usize, modulus: &[u32], basis: &[u32]) -> u64 {
    let mut h = DefaultHasher::new();
    (p, e, modulus, basis).hash(&mut h);
    h.finish()
}

/// Smallest monic irreducible of degree `e`, scanning the non-leading digit
/// vector as an integer with the constant term least significant.
fn default_modulus(p: u32, e: usize) -> Vec<u32> {
    FpPoly::monic_of_degree(p, e)
        .find(|f| f.is_irreducible())
        .expect("irreducible polynomials exist in every degree")
        .coeffs()
        .to_vec()
}

impl FieldCtx {
    /// Builds GF(p^e). With `modulus == None` the lexicographically smallest
    /// monic irreducible of degree `e` is used (for `e = 1` that is `t`).
    pub fn new(p: u32, e: usize, modulus: Option<&[u32]>) -> Result<FieldCtx> {
        if !is_prime(p as u64) {
            return Err(Error::NonPrime(p as u64));
        }
        if e == 0 {
            return Err(Error::DegreeMismatch { expected: 0 });
        }
        let order = (p as u64).checked_pow(e as u32).unwrap_or(u64::MAX);
        if order > MAX_FIELD_ORDER {
            return Err(Error::PolicyBound {
                order,
                bound: MAX_FIELD_ORDER,
            });
        }
        let modulus = match modulus {
            Some(m) => {
                if m.len() != e + 1 || m[e] != 1 || m.iter().any(|&d| d >= p) {
                    return Err(Error::DegreeMismatch { expected: e });
                }
                if !FpPoly::new(p, m.to_vec()).is_irreducible() {
                    return Err(Error::ReducibleModulus);
                }
                m.to_vec()
            }
            None => default_modulus(p, e),
        };
        let basis: Vec<u32> = (0..e).map(|k| p.pow(k as u32)).collect();
        Ok(Self::build(p, e, modulus, basis))
    }

    fn build(p: u32, e: usize, modulus: Vec<u32>, basis: Vec<u32>) -> FieldCtx {
        let q = p.pow(e as u32);
        let n = q - 1;
        let standard_basis = basis.iter().enumerate().all(|(k, &b)| b == p.pow(k as u32));
        let cols: Vec<Vec<u32>> = basis.iter().map(|&b| digits_of(b, p, e)).collect();
        let from_coords = FpMatrix::from_columns(p, e, &cols);
        let to_coords = from_coords.inverse().expect("basis checked independent");
        let mut inner = Inner {
            id: field_id(p, e, &modulus, &basis),
            p,
            e,
            q,
            modulus,
            basis,
            standard_basis,
            to_coords,
            from_coords,
            exp: Vec::new(),
            log: Vec::new(),
            zech: Vec::new(),
            frob_factor: (0..e).map(|k| pow_mod(p as u64, k as u64, n as u64)).collect(),
            pow_p: (0..e).map(|k| p.pow(k as u32)).collect(),
        };

        let g = primitive_element(&inner);
        let mut exp = Vec::with_capacity(n as usize);
        let mut log = vec![NO_LOG; q as usize];
        let mut x = 1u32;
        for k in 0..n {
            exp.push(x);
            log[x as usize] = k;
            x = mul_schoolbook(&inner, x, g);
        }
        if p != 2 {
            inner.zech = (0..n)
                .map(|k| {
                    let s = add_digitwise(p, e, 1, exp[k as usize]);
                    if s == 0 {
                        NO_LOG
                    } else {
                        log[s as usize]
                    }
                })
                .collect();
        }
        inner.exp = exp;
        inner.log = log;
        FieldCtx(Arc::new(inner))
    }

    /// Same field and modulus with a different ordered F_p-basis. Fails with
    /// `SingularSystem` if the elements are not linearly independent.
    pub fn with_basis(&self, basis: &[FqElem]) -> Result<FieldCtx> {
        if basis.len() != self.e() {
            return Err(Error::InvalidArgument(format!(
                "basis needs {} elements, got {}",
                self.e(),
                basis.len()
            )));
        }
        for &b in basis {
            self.check(b)?;
        }
        let cols: Vec<Vec<u32>> = basis.iter().map(|&b| self.digits(b)).collect();
        if !FpMatrix::from_columns(self.p(), self.e(), &cols).is_invertible() {
            return Err(Error::SingularSystem);
        }
        Ok(Self::build(
            self.p(),
            self.e(),
            self.0.modulus.clone(),
            basis.iter().map(|b| b.value).collect(),
        ))
    }

    pub fn id(&self) -> u64 {
        self.0.id
    }

    pub fn p(&self) -> u32 {
        self.0.p
    }

    pub fn e(&self) -> usize {
        self.0.e
    }

    /// The field order q = p^e.
    pub fn order(&self) -> u32 {
        self.0.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    pub fn basis(&self) -> Vec<FqElem> {
        self.0.basis.iter().map(|&v| self.wrap(v)).collect()
    }

    pub fn has_standard_basis(&self) -> bool {
        self.0.standard_basis
    }

    #[inline]
    fn wrap(&self, value: u32) -> FqElem {
        FqElem {
            value,
            field: self.0.id,
        }
    }

    #[inline]
    fn own(&self, x: FqElem) -> u32 {
        assert_eq!(x.field, self.0.id, "element used with a foreign field");
        x.value
    }

    pub fn contains(&self, x: FqElem) -> bool {
        x.field == self.0.id && x.value < self.0.q
    }

    pub fn check(&self, x: FqElem) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }

    pub fn zero(&self) -> FqElem {
        self.wrap(0)
    }

    pub fn one(&self) -> FqElem {
        self.wrap(1)
    }

    /// The class of `t` in F_p[t]/(modulus).
    pub fn root(&self) -> FqElem {
        if self.e() == 1 {
            // modulus is t - c, so t = c
            let c = self.0.modulus[0];
            self.wrap((self.p() - c) % self.p())
        } else {
            self.wrap(self.p())
        }
    }

    /// A fixed generator of the multiplicative group.
    pub fn generator(&self) -> FqElem {
        self.wrap(self.0.exp.get(1).copied().unwrap_or(1))
    }

    /// Element from its integer encoding; panics if out of range.
    pub fn elem(&self, index: u32) -> FqElem {
        assert!(index < self.0.q, "element index {index} out of range");
        self.wrap(index)
    }

    pub fn from_index(&self, index: u32) -> Result<FqElem> {
        if index < self.0.q {
            Ok(self.wrap(index))
        } else {
            Err(Error::InvalidArgument(format!("element index {index} out of range")))
        }
    }

    /// Element from little-endian digits; shorter vectors are zero-padded.
    pub fn from_digits(&self, digits: &[u32]) -> Result<FqElem> {
        if digits.len() > self.e() || digits.iter().any(|&d| d >= self.p()) {
            return Err(Error::InvalidArgument(format!(
                "{digits:?} is not a digit vector of {self}"
            )));
        }
        Ok(self.wrap(value_of(digits, self.p())))
    }

    pub fn digits(&self, x: FqElem) -> Vec<u32> {
        digits_of(self.own(x), self.p(), self.e())
    }

    /// Coordinates in the context's basis.
    pub fn coords(&self, x: FqElem) -> Vec<u32> {
        let d = self.digits(x);
        if self.0.standard_basis {
            d
        } else {
            self.0.to_coords.mul_vec(&d)
        }
    }

    pub fn from_coords(&self, c: &[u32]) -> FqElem {
        assert_eq!(c.len(), self.e());
        if self.0.standard_basis {
            self.wrap(value_of(c, self.p()))
        } else {
            self.wrap(value_of(&self.0.from_coords.mul_vec(c), self.p()))
        }
    }

    /// Embeds `c mod p` from the prime field.
    pub fn from_fp(&self, c: u32) -> FqElem {
        self.wrap(c % self.p())
    }

    /// `Some(c)` when `x` lies in the prime subfield.
    pub fn as_fp(&self, x: FqElem) -> Option<u32> {
        let v = self.own(x);
        (v < self.p()).then_some(v)
    }

    pub fn elements(&self) -> impl Iterator<Item = FqElem> + '_ {
        (0..self.0.q).map(|v| self.wrap(v))
    }

    pub fn nonzero_elements(&self) -> impl Iterator<Item = FqElem> + '_ {
        (1..self.0.q).map(|v| self.wrap(v))
    }

    #[inline]
    pub fn add(&self, x: FqElem, y: FqElem) -> FqElem {
        let (a, b) = (self.own(x), self.own(y));
        self.wrap(self.add_raw(a, b))
    }

    #[inline]
    fn add_raw(&self, a: u32, b: u32) -> u32 {
        let inner = &*self.0;
        if inner.p == 2 {
            return a ^ b;
        }
        if a == 0 {
            return b;
        }
        if b == 0 {
            return a;
        }
        let n = inner.q - 1;
        let la = inner.log[a as usize];
        let lb = inner.log[b as usize];
        let k = if lb >= la { lb - la } else { lb + n - la };
        let z = inner.zech[k as usize];
        if z == NO_LOG {
            0
        } else {
            let s = la + z;
            inner.exp[(if s >= n { s - n } else { s }) as usize]
        }
    }

    #[inline]
    pub fn neg(&self, x: FqElem) -> FqElem {
        let a = self.own(x);
        self.wrap(self.neg_raw(a))
    }

    #[inline]
    fn neg_raw(&self, a: u32) -> u32 {
        let inner = &*self.0;
        if inner.p == 2 || a == 0 {
            return a;
        }
        let n = inner.q - 1;
        let s = inner.log[a as usize] + n / 2;
        inner.exp[(if s >= n { s - n } else { s }) as usize]
    }

    #[inline]
    pub fn sub(&self, x: FqElem, y: FqElem) -> FqElem {
        let (a, b) = (self.own(x), self.own(y));
        self.wrap(self.add_raw(a, self.neg_raw(b)))
    }

    #[inline]
    pub fn mul(&self, x: FqElem, y: FqElem) -> FqElem {
        let (a, b) = (self.own(x), self.own(y));
        if a == 0 || b == 0 {
            return self.zero();
        }
        let inner = &*self.0;
        let n = inner.q - 1;
        let s = inner.log[a as usize] + inner.log[b as usize];
        self.wrap(inner.exp[(if s >= n { s - n } else { s }) as usize])
    }

    /// Multiplication that reports a context mismatch instead of panicking.
    pub fn try_mul(&self, x: FqElem, y: FqElem) -> Result<FqElem> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.mul(x, y))
    }

    pub fn try_add(&self, x: FqElem, y: FqElem) -> Result<FqElem> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.add(x, y))
    }

    pub fn inv(&self, x: FqElem) -> Result<FqElem> {
        self.check(x)?;
        if x.value == 0 {
            return Err(Error::DivisionByZero);
        }
        let inner = &*self.0;
        let n = inner.q - 1;
        let l = inner.log[x.value as usize];
        Ok(self.wrap(inner.exp[((n - l) % n) as usize]))
    }

    pub fn div(&self, x: FqElem, y: FqElem) -> Result<FqElem> {
        Ok(self.mul(x, self.inv(y)?))
    }

    pub fn pow(&self, x: FqElem, k: u64) -> FqElem {
        let a = self.own(x);
        if k == 0 {
            return self.one();
        }
        if a == 0 {
            return self.zero();
        }
        let inner = &*self.0;
        let n = (inner.q - 1) as u64;
        let l = inner.log[a as usize] as u64;
        self.wrap(inner.exp[((l as u128 * (k % n) as u128) % n as u128) as usize])
    }

    /// `x^{p^s}`.
    #[inline]
    pub fn frobenius(&self, x: FqElem, s: u64) -> FqElem {
        let a = self.own(x);
        if a == 0 {
            return x;
        }
        let inner = &*self.0;
        let n = (inner.q - 1) as u64;
        let f = inner.frob_factor[(s % inner.e as u64) as usize];
        let l = inner.log[a as usize] as u64;
        self.wrap(inner.exp[(l * f % n) as usize])
    }

    /// Inverse of `frobenius(., s)`.
    #[inline]
    pub fn frobenius_inv(&self, x: FqElem, s: u64) -> FqElem {
        let e = self.e() as u64;
        self.frobenius(x, (e - s % e) % e)
    }

    /// Uniform element of F_q, or of F_q* when `nonzero` is set.
    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R, nonzero: bool) -> FqElem {
        let lo = u32::from(nonzero);
        self.wrap(rng.gen_range(lo..self.0.q))
    }

    /// Schoolbook product in F_p[t]/(modulus), independent of the log tables.
    pub fn mul_reference(&self, x: FqElem, y: FqElem) -> FqElem {
        let (a, b) = (self.own(x), self.own(y));
        self.wrap(mul_schoolbook(&self.0, a, b))
    }

    /// Digit-wise sum, independent of the Zech tables.
    pub fn add_reference(&self, x: FqElem, y: FqElem) -> FqElem {
        let (a, b) = (self.own(x), self.own(y));
        self.wrap(add_digitwise(self.p(), self.e(), a, b))
    }

    /// `p^k` as an element index, i.e. the encoding of `t^k`.
    pub(crate) fn digit_unit(&self, k: usize) -> FqElem {
        self.wrap(self.0.pow_p[k])
    }
}

fn add_digitwise(p: u32, e: usize, a: u32, b: u32) -> u32 {
    let da = digits_of(a, p, e);
    let db = digits_of(b, p, e);
    let sum: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
    value_of(&sum, p)
}

fn mul_schoolbook(inner: &Inner, a: u32, b: u32) -> u32 {
    let (p, e) = (inner.p, inner.e);
    let da = digits_of(a, p, e);
    let db = digits_of(b, p, e);
    let mut prod = vec![0u64; 2 * e - 1];
    for (i, &x) in da.iter().enumerate() {
        for (j, &y) in db.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    // reduce by the monic modulus from the top
    for k in (e..prod.len()).rev() {
        let c = prod[k];
        if c == 0 {
            continue;
        }
        prod[k] = 0;
        for (j, &m) in inner.modulus[..e].iter().enumerate() {
            let idx = k - e + j;
            prod[idx] = (prod[idx] + p as u64 * p as u64 - c * m as u64 % p as u64) % p as u64;
        }
    }
    let red: Vec<u32> = prod[..e].iter().map(|&c| c as u32).collect();
    value_of(&red, p)
}

fn pow_schoolbook(inner: &Inner, mut x: u32, mut k: u64) -> u32 {
    let mut acc = 1u32;
    while k > 0 {
        if k & 1 == 1 {
            acc = mul_schoolbook(inner, acc, x);
        }
        x = mul_schoolbook(inner, x, x);
        k >>= 1;
    }
    acc
}

fn primitive_element(inner: &Inner) -> u32 {
    let n = (inner.q - 1) as u64;
    let primes = prime_factors(n);
    (1..inner.q)
        .find(|&g| primes.iter().all(|&r| pow_schoolbook(inner, g, n / r) != 1))
        .expect("multiplicative group of a finite field is cyclic")
}
