//! Complete factorization in `F_q[Y; σ]`, and hence complete decomposition
//! of p^s-polynomials.
//!
//! A monic `f` of degree `n` is split by working in its eigenring
//! `E(f) = {u : deg u < n, f·u ∈ R·f}`, an F_p-algebra that has zero
//! divisors exactly when `f` is reducible. A random element `u` of `E(f)`
//! has a minimal polynomial `m` over F_p; any nontrivial factorization of `m`
//! yields a zero divisor `g(u)`, and `gcrd(g(u), f)` is a proper right
//! factor of `f`.

use rand::Rng;

use crate::error::{Error, Result};
use crate::fp_linalg::FpMatrix;
use crate::fp_poly::{inv_mod, mul_mod, sub_mod, FpPoly};
use crate::linops::LinPoly;
use crate::skew::{phi_inv, phi_map, Side, SkewPoly};

/// Tries per split before falling back to certification.
pub const DEFAULT_MAX_TRIES: usize = 64;

/// Largest `deg f · e` for which exhaustive right-factor search is run.
pub const EXHAUSTIVE_LIMIT: usize = 12;

/// Lower bound on the per-try success probability of the zero-divisor step,
/// used to annotate uncertified indecomposability.
pub const SPLIT_SUCCESS_LOWER_BOUND: f64 = 1.0 / 9.0;

#[derive(Clone, Debug)]
pub struct EigenRing {
    modulus: SkewPoly,
    basis: Vec<SkewPoly>,
}

impl EigenRing {
    /// Solves the F_p-linear membership condition `f·u ≡ 0 (mod_right f)`
    /// over the `n·e` digit coordinates of a residue `u`.
    pub fn new(f: &SkewPoly) -> Result<EigenRing> {
        let n = match f.degree() {
            Some(n) if n >= 1 && f.is_monic() => n,
            _ => {
                return Err(Error::InvalidArgument(
                    "eigenring needs a monic polynomial of degree >= 1".into(),
                ))
            }
        };
        let ctx = f.ctx();
        let e = ctx.e();
        let mut ring = EigenRing {
            modulus: f.clone(),
            basis: vec![],
        };
        let mut columns = Vec::with_capacity(n * e);
        for i in 0..n {
            for k in 0..e {
                let u = SkewPoly::monomial(ctx, f.twist(), i, ctx.digit_unit(k));
                let image = f.mul_unchecked(&u).rem(f, Side::Right)?;
                columns.push(ring.to_vector(&image));
            }
        }
        let system = FpMatrix::from_columns(ctx.p(), n * e, &columns);
        ring.basis = system.nullspace().iter().map(|v| ring.from_vector(v)).collect();
        Ok(ring)
    }

    pub fn modulus(&self) -> &SkewPoly {
        &self.modulus
    }

    pub fn basis(&self) -> &[SkewPoly] {
        &self.basis
    }

    /// Dimension over F_p.
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    fn n(&self) -> usize {
        self.modulus.degree().unwrap_or(0)
    }

    /// Digit coordinates of a residue, `n·e` entries.
    pub fn to_vector(&self, u: &SkewPoly) -> Vec<u32> {
        let ctx = self.modulus.ctx();
        (0..self.n()).flat_map(|i| ctx.digits(u.coeff(i))).collect()
    }

    pub fn from_vector(&self, v: &[u32]) -> SkewPoly {
        let ctx = self.modulus.ctx();
        let e = ctx.e();
        let coeffs = v
            .chunks(e)
            .map(|d| ctx.from_digits(d).expect("digits below p"))
            .collect();
        SkewPoly::from_parts(ctx.clone(), self.modulus.twist(), coeffs)
    }

    pub fn reduce(&self, u: &SkewPoly) -> SkewPoly {
        u.rem(&self.modulus, Side::Right).expect("modulus is nonzero")
    }

    /// Product in `E(f)`: `u·v` reduced on the right by `f`.
    pub fn mul(&self, u: &SkewPoly, v: &SkewPoly) -> SkewPoly {
        self.reduce(&u.mul_unchecked(v))
    }

    pub fn one(&self) -> SkewPoly {
        self.reduce(&SkewPoly::one(self.modulus.ctx(), self.modulus.twist()))
    }

    pub fn contains(&self, u: &SkewPoly) -> bool {
        u.ctx() == self.modulus.ctx()
            && u.twist() == self.modulus.twist()
            && u.degree().map_or(true, |d| d < self.n())
            && self.reduce(&self.modulus.mul_unchecked(u)).is_zero()
    }

    /// Whether `u` is a scalar from the prime field.
    fn is_prime_scalar(&self, u: &SkewPoly) -> bool {
        u.degree().map_or(true, |d| d == 0) && self.modulus.ctx().as_fp(u.coeff(0)).is_some()
    }

    /// Uniform element of `E(f)` outside the prime-field scalars `F_p·1`.
    /// Those scalars never produce a zero divisor, so they are rejected.
    /// Requires `dim >= 2`.
    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> SkewPoly {
        assert!(self.dim() >= 2, "E(f) consists of scalars only");
        let ctx = self.modulus.ctx();
        loop {
            let mut u = SkewPoly::zero(ctx, self.modulus.twist());
            for b in &self.basis {
                let c = rng.gen_range(0..ctx.p());
                if c != 0 {
                    u = u.add_unchecked(&b.scale_left(ctx.from_fp(c)));
                }
            }
            if !self.is_prime_scalar(&u) {
                return u;
            }
        }
    }

    /// `m(u)` for `m` over F_p, by Horner's rule in `E(f)`.
    pub fn eval(&self, m: &FpPoly, u: &SkewPoly) -> SkewPoly {
        let ctx = self.modulus.ctx();
        let s = self.modulus.twist();
        m.coeffs().iter().rev().fold(SkewPoly::zero(ctx, s), |acc, &c| {
            let c = SkewPoly::constant(ctx, s, ctx.from_fp(c));
            self.mul(&acc, u).add_unchecked(&self.reduce(&c))
        })
    }

    /// Least monic `m` over F_p with `m(u) ≡ 0`, from the first linear
    /// dependence among `1, u, u^2, ...`.
    pub fn minimal_polynomial(&self, u: &SkewPoly) -> Result<FpPoly> {
        if !self.contains(u) {
            return Err(Error::NotInRing);
        }
        let p = self.modulus.ctx().p();
        // echelon rows: (vector, combination of powers, pivot)
        let mut rows: Vec<(Vec<u32>, Vec<u32>, usize)> = Vec::new();
        let mut power = self.one();
        for k in 0.. {
            let mut v = self.to_vector(&power);
            let mut combo = vec![0u32; k + 1];
            combo[k] = 1;
            for (rv, rc, piv) in &rows {
                let c = v[*piv];
                if c == 0 {
                    continue;
                }
                for (x, &y) in v.iter_mut().zip(rv) {
                    *x = sub_mod(*x, mul_mod(c, y, p), p);
                }
                for (x, &y) in combo.iter_mut().zip(rc) {
                    *x = sub_mod(*x, mul_mod(c, y, p), p);
                }
            }
            match v.iter().position(|&x| x != 0) {
                None => return Ok(FpPoly::new(p, combo)),
                Some(piv) => {
                    let inv = inv_mod(v[piv], p);
                    v.iter_mut().for_each(|x| *x = mul_mod(*x, inv, p));
                    combo.iter_mut().for_each(|x| *x = mul_mod(*x, inv, p));
                    rows.push((v, combo, piv));
                }
            }
            power = self.mul(&power, u);
        }
        unreachable!()
    }

    /// The deterministic part of one search step: a zero divisor derived
    /// from the minimal polynomial of `u`, if it factors nontrivially.
    pub fn zero_divisor_from(&self, u: &SkewPoly) -> Result<Option<ZeroDivisor>> {
        let m = self.minimal_polynomial(u)?;
        let factors = m.factor();
        let (g, h) = match factors.as_slice() {
            [] => return Ok(None),
            [(_, 1)] => return Ok(None),
            [(g, k)] => (g.clone(), g.pow(*k as u64 - 1)),
            [(g, k), ..] => {
                let g = g.pow(*k as u64);
                let h = m.div_rem(&g).0;
                (g, h)
            }
        };
        let element = self.eval(&g, u);
        let annihilator = self.eval(&h, u);
        debug_assert!(!element.is_zero() && !annihilator.is_zero());
        debug_assert!(self.mul(&element, &annihilator).is_zero());
        Ok(Some(ZeroDivisor {
            element,
            annihilator,
            minimal_polynomial: m,
        }))
    }
}

/// A nonzero residue `element` with `element · annihilator ≡ 0` and
/// `annihilator` nonzero.
#[derive(Clone, Debug)]
pub struct ZeroDivisor {
    pub element: SkewPoly,
    pub annihilator: SkewPoly,
    pub minimal_polynomial: FpPoly,
}

#[derive(Clone, Debug)]
pub struct ZeroDivisorSearch {
    pub found: Option<ZeroDivisor>,
    pub tries: usize,
}

pub fn find_zero_divisor<R: Rng + ?Sized>(ring: &EigenRing, rng: &mut R, max_tries: usize) -> ZeroDivisorSearch {
    if ring.dim() <= 1 {
        return ZeroDivisorSearch { found: None, tries: 0 };
    }
    for tries in 1..=max_tries {
        let u = ring.random_element(rng);
        let found = ring.zero_divisor_from(&u).expect("random element lies in the ring");
        if found.is_some() {
            return ZeroDivisorSearch { found, tries };
        }
    }
    ZeroDivisorSearch {
        found: None,
        tries: max_tries,
    }
}

#[derive(Clone, Debug)]
pub enum Split {
    /// `left · right = f` with both factors monic of positive degree.
    Proper { left: SkewPoly, right: SkewPoly, tries: usize },
    /// No split found. `certified` means irreducibility was confirmed
    /// (exhaustively, or because `E(f)` is the prime field); otherwise
    /// `confidence` is `1 - (8/9)^tries`.
    Indecomposable { certified: bool, confidence: f64, tries: usize },
}

fn check_monic(f: &SkewPoly, min_degree: usize) -> Result<usize> {
    match f.degree() {
        Some(n) if n >= min_degree && f.is_monic() => Ok(n),
        _ => Err(Error::InvalidArgument(format!(
            "expected a monic polynomial of degree >= {min_degree}"
        ))),
    }
}

pub fn split_once<R: Rng + ?Sized>(f: &SkewPoly, rng: &mut R, max_tries: usize) -> Result<Split> {
    let n = check_monic(f, 2)?;
    let ring = EigenRing::new(f)?;
    let search = find_zero_divisor(&ring, rng, max_tries);
    if let Some(z) = search.found {
        let right = z.element.gcd(f, Side::Right)?;
        let (left, rem) = f.div_rem(&right, Side::Right)?;
        debug_assert!(rem.is_zero());
        let d = right.degree().unwrap_or(0);
        if d >= 1 && d < n {
            return Ok(Split::Proper {
                left,
                right,
                tries: search.tries,
            });
        }
    }
    if ring.dim() <= 1 {
        return Ok(Split::Indecomposable {
            certified: true,
            confidence: 1.0,
            tries: search.tries,
        });
    }
    if n * f.ctx().e() <= EXHAUSTIVE_LIMIT {
        return Ok(match smallest_right_factor(f) {
            Some(right) => {
                let left = f.div_rem(&right, Side::Right)?.0;
                Split::Proper {
                    left,
                    right,
                    tries: search.tries,
                }
            }
            None => Split::Indecomposable {
                certified: true,
                confidence: 1.0,
                tries: search.tries,
            },
        });
    }
    Ok(Split::Indecomposable {
        certified: false,
        confidence: 1.0 - (1.0 - SPLIT_SUCCESS_LOWER_BOUND).powi(search.tries as i32),
        tries: search.tries,
    })
}

/// `unit · factors[0] · … · factors[k-1]`, factors monic and indecomposable,
/// leftmost first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub unit: crate::field::FqElem,
    pub factors: Vec<SkewPoly>,
    /// Whether every factor's indecomposability was certified.
    pub certified: bool,
}

impl Decomposition {
    pub fn product(&self) -> SkewPoly {
        let first = self.factors.first();
        let (ctx, s) = match first {
            Some(f) => (f.ctx().clone(), f.twist()),
            None => unreachable!("product of an empty decomposition needs a ring; use unit"),
        };
        self.factors
            .iter()
            .fold(SkewPoly::constant(&ctx, s, self.unit), |acc, f| acc.mul_unchecked(f))
    }

    /// Factor degrees, sorted ascending.
    pub fn degrees(&self) -> Vec<usize> {
        let mut d: Vec<usize> = self.factors.iter().filter_map(|f| f.degree()).collect();
        d.sort_unstable();
        d
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }
}

fn split_recursive<R: Rng + ?Sized>(
    g: SkewPoly,
    rng: &mut R,
    max_tries: usize,
    out: &mut Vec<SkewPoly>,
    certified: &mut bool,
) -> Result<()> {
    if g.degree().is_some_and(|d| d <= 1) {
        out.push(g);
        return Ok(());
    }
    match split_once(&g, rng, max_tries)? {
        Split::Proper { left, right, .. } => {
            split_recursive(left, rng, max_tries, out, certified)?;
            split_recursive(right, rng, max_tries, out, certified)?;
        }
        Split::Indecomposable { certified: c, .. } => {
            *certified &= c;
            out.push(g);
        }
    }
    Ok(())
}

pub fn decompose_complete<R: Rng + ?Sized>(f: &SkewPoly, rng: &mut R) -> Result<Decomposition> {
    decompose_complete_with(f, rng, DEFAULT_MAX_TRIES)
}

pub fn decompose_complete_with<R: Rng + ?Sized>(
    f: &SkewPoly,
    rng: &mut R,
    max_tries: usize,
) -> Result<Decomposition> {
    if f.is_zero() {
        return Err(Error::InvalidArgument("cannot decompose the zero polynomial".into()));
    }
    let unit = f.lead();
    let mut factors = Vec::new();
    let mut certified = true;
    if f.degree() != Some(0) {
        split_recursive(f.monic_left(), rng, max_tries, &mut factors, &mut certified)?;
    }
    Ok(Decomposition {
        unit,
        factors,
        certified,
    })
}

/// Complete decomposition of a nonzero p^s-polynomial; composing the
/// returned factors left to right gives back `l` exactly.
pub fn decompose_linpoly<R: Rng + ?Sized>(l: &LinPoly, rng: &mut R) -> Result<Vec<LinPoly>> {
    let d = decompose_complete(&phi_map(l), rng)?;
    if d.factors.is_empty() {
        return Ok(vec![l.clone()]);
    }
    let mut factors = d.factors;
    factors[0] = factors[0].scale_left(d.unit);
    Ok(factors.iter().map(phi_inv).collect())
}

/// All monic polynomials of degree `d`, lexicographic over coefficient
/// indices with the constant term least significant.
pub fn monic_skew_polys(ctx: &crate::field::FieldCtx, s: u32, d: usize) -> impl Iterator<Item = SkewPoly> + '_ {
    let q = ctx.order() as u64;
    let count = q.pow(d as u32);
    (0..count).map(move |mut idx| {
        let mut coeffs = Vec::with_capacity(d + 1);
        for _ in 0..d {
            coeffs.push(ctx.elem((idx % q) as u32));
            idx /= q;
        }
        coeffs.push(ctx.one());
        SkewPoly::from_parts(ctx.clone(), s, coeffs)
    })
}

/// Lowest-degree, lexicographically first monic proper right factor.
pub fn smallest_right_factor(f: &SkewPoly) -> Option<SkewPoly> {
    let n = f.degree()?;
    (1..n).find_map(|d| {
        monic_skew_polys(f.ctx(), f.twist(), d)
            .find(|g| f.rem(g, Side::Right).is_ok_and(|r| r.is_zero()))
    })
}

/// Brute-force complete decomposition by exhaustive right-factor search.
/// Only for `deg f · e <= 12`.
pub fn oracle_decompose(f: &SkewPoly) -> Result<Decomposition> {
    let n = f
        .degree()
        .ok_or_else(|| Error::InvalidArgument("cannot decompose the zero polynomial".into()))?;
    let size = n * f.ctx().e();
    if size > EXHAUSTIVE_LIMIT {
        return Err(Error::TooLarge(size));
    }
    let unit = f.lead();
    let mut factors = Vec::new();
    if n > 0 {
        let mut g = f.monic_left();
        let mut rights = Vec::new();
        while let Some(r) = smallest_right_factor(&g) {
            g = g.div_rem(&r, Side::Right)?.0;
            rights.push(r);
        }
        factors.push(g);
        factors.extend(rights.into_iter().rev());
    }
    Ok(Decomposition {
        unit,
        factors,
        certified: true,
    })
}
