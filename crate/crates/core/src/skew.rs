//! The skew-polynomial ring `F_q[Y; σ]` with `σ(a) = a^{p^s}` and
//! `Y a = σ(a) Y`, its one-sided Euclidean algorithms, and the
//! isomorphism with p^s-polynomials under composition.

use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};
use crate::field::{FieldCtx, FqElem};
use crate::linops::LinPoly;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    /// `f = g · q + r`: `g` divides `f` on the left.
    Left,
    /// `f = q · g + r`: `g` divides `f` on the right.
    Right,
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SkewPoly {
    ctx: FieldCtx,
    s: u32,
    coeffs: Vec<FqElem>,
}

impl fmt::Debug for SkewPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SkewPoly(s={}, {:?})", self.s, self.coeffs)
    }
}

fn trim(coeffs: &mut Vec<FqElem>) {
    while coeffs.last().is_some_and(|c| c.is_zero()) {
        coeffs.pop();
    }
}

impl SkewPoly {
    pub fn new(ctx: &FieldCtx, s: u32, coeffs: Vec<FqElem>) -> Result<SkewPoly> {
        if s == 0 {
            return Err(Error::InvalidArgument("twist step must be positive".into()));
        }
        for &c in &coeffs {
            ctx.check(c)?;
        }
        Ok(Self::from_parts(ctx.clone(), s, coeffs))
    }

    pub(crate) fn from_parts(ctx: FieldCtx, s: u32, mut coeffs: Vec<FqElem>) -> SkewPoly {
        trim(&mut coeffs);
        SkewPoly { ctx, s, coeffs }
    }

    pub fn zero(ctx: &FieldCtx, s: u32) -> SkewPoly {
        Self::from_parts(ctx.clone(), s, vec![])
    }

    pub fn one(ctx: &FieldCtx, s: u32) -> SkewPoly {
        Self::constant(ctx, s, ctx.one())
    }

    pub fn constant(ctx: &FieldCtx, s: u32, a: FqElem) -> SkewPoly {
        Self::from_parts(ctx.clone(), s, vec![a])
    }

    /// `a Y^i`.
    pub fn monomial(ctx: &FieldCtx, s: u32, i: usize, a: FqElem) -> SkewPoly {
        let mut coeffs = vec![ctx.zero(); i + 1];
        coeffs[i] = a;
        Self::from_parts(ctx.clone(), s, coeffs)
    }

    /// Uniformly random monic polynomial of degree `deg`.
    pub fn random_monic<R: Rng + ?Sized>(ctx: &FieldCtx, s: u32, deg: usize, rng: &mut R) -> SkewPoly {
        let mut coeffs: Vec<FqElem> = (0..deg).map(|_| ctx.random(rng, false)).collect();
        coeffs.push(ctx.one());
        Self::from_parts(ctx.clone(), s, coeffs)
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    pub fn twist(&self) -> u32 {
        self.s
    }

    pub fn coeffs(&self) -> &[FqElem] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> FqElem {
        self.coeffs.get(i).copied().unwrap_or_else(|| self.ctx.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> FqElem {
        self.coeffs.last().copied().unwrap_or_else(|| self.ctx.zero())
    }

    pub fn is_monic(&self) -> bool {
        self.lead().is_one()
    }

    /// `σ^k(a)`.
    #[inline]
    pub fn sigma_pow(&self, a: FqElem, k: usize) -> FqElem {
        self.ctx.frobenius(a, self.s as u64 * k as u64)
    }

    /// `σ^{-k}(a)`.
    #[inline]
    pub fn sigma_inv_pow(&self, a: FqElem, k: usize) -> FqElem {
        self.ctx.frobenius_inv(a, self.s as u64 * k as u64)
    }

    fn same_ring(&self, other: &SkewPoly) -> Result<()> {
        if self.ctx != other.ctx {
            return Err(Error::ContextMismatch);
        }
        if self.s != other.s {
            return Err(Error::TwistMismatch(self.s, other.s));
        }
        Ok(())
    }

    pub fn add(&self, other: &SkewPoly) -> Result<SkewPoly> {
        self.same_ring(other)?;
        Ok(self.add_unchecked(other))
    }

    pub fn sub(&self, other: &SkewPoly) -> Result<SkewPoly> {
        self.same_ring(other)?;
        Ok(self.sub_unchecked(other))
    }

    pub(crate) fn add_unchecked(&self, other: &SkewPoly) -> SkewPoly {
        let f = &self.ctx;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| f.add(self.coeff(i), other.coeff(i))).collect();
        Self::from_parts(f.clone(), self.s, coeffs)
    }

    pub(crate) fn sub_unchecked(&self, other: &SkewPoly) -> SkewPoly {
        let f = &self.ctx;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| f.sub(self.coeff(i), other.coeff(i))).collect();
        Self::from_parts(f.clone(), self.s, coeffs)
    }

    /// `(sum c_i Y^i)(sum d_j Y^j) = sum c_i σ^i(d_j) Y^{i+j}`.
    pub fn mul(&self, other: &SkewPoly) -> Result<SkewPoly> {
        self.same_ring(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &SkewPoly) -> SkewPoly {
        if self.is_zero() || other.is_zero() {
            return Self::zero(&self.ctx, self.s);
        }
        let f = &self.ctx;
        let mut out = vec![f.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (j, &d) in other.coeffs.iter().enumerate() {
                if d.is_zero() {
                    continue;
                }
                out[i + j] = f.add(out[i + j], f.mul(c, self.sigma_pow(d, i)));
            }
        }
        Self::from_parts(f.clone(), self.s, out)
    }

    /// `c · f`.
    pub fn scale_left(&self, c: FqElem) -> SkewPoly {
        let f = &self.ctx;
        let coeffs = self.coeffs.iter().map(|&a| f.mul(c, a)).collect();
        Self::from_parts(f.clone(), self.s, coeffs)
    }

    /// `f · c`, which twists `c` by `σ^i` at each `Y^i`.
    pub fn scale_right(&self, c: FqElem) -> SkewPoly {
        let f = &self.ctx;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, &a)| f.mul(a, self.sigma_pow(c, i)))
            .collect();
        Self::from_parts(f.clone(), self.s, coeffs)
    }

    /// Monic associate under a left unit, `lead^{-1} · f`; the form used for
    /// right divisors. Zero stays zero.
    pub fn monic_left(&self) -> SkewPoly {
        match self.ctx.inv(self.lead()) {
            Ok(u) => self.scale_left(u),
            Err(_) => self.clone(),
        }
    }

    /// Monic associate under a right unit, `f · u`; the form used for left
    /// divisors.
    pub fn monic_right(&self) -> SkewPoly {
        let Some(n) = self.degree() else {
            return self.clone();
        };
        let inv = self.ctx.inv(self.lead()).expect("nonzero lead");
        self.scale_right(self.sigma_inv_pow(inv, n))
    }

    /// Division with remainder on the given side, `deg r < deg g`.
    pub fn div_rem(&self, g: &SkewPoly, side: Side) -> Result<(SkewPoly, SkewPoly)> {
        self.same_ring(g)?;
        let n = g.degree().ok_or(Error::DivisionByZeroPoly)?;
        let (q, r) = match side {
            Side::Right => self.div_rem_right(g, n),
            Side::Left => self.div_rem_left(g, n),
        };
        #[cfg(debug_assertions)]
        {
            let back = match side {
                Side::Right => q.mul_unchecked(g),
                Side::Left => g.mul_unchecked(&q),
            };
            assert_eq!(back.add_unchecked(&r), *self, "{side:?} division multiply-back failed");
            assert!(r.degree().map_or(true, |d| d < n));
        }
        Ok((q, r))
    }

    fn div_rem_right(&self, g: &SkewPoly, n: usize) -> (SkewPoly, SkewPoly) {
        let f = &self.ctx;
        let mut r = self.coeffs.clone();
        if r.len() <= n {
            return (Self::zero(f, self.s), self.clone());
        }
        let inv_lead = f.inv(g.lead()).expect("nonzero lead");
        let mut q = vec![f.zero(); r.len() - n];
        for k in (0..q.len()).rev() {
            let c = r[k + n];
            if c.is_zero() {
                continue;
            }
            // (t Y^k)(d Y^n) = t σ^k(d) Y^{k+n}
            let t = f.mul(c, self.sigma_pow(inv_lead, k));
            q[k] = t;
            for (j, &gj) in g.coeffs.iter().enumerate() {
                if gj.is_zero() {
                    continue;
                }
                r[k + j] = f.sub(r[k + j], f.mul(t, self.sigma_pow(gj, k)));
            }
        }
        r.truncate(n);
        (Self::from_parts(f.clone(), self.s, q), Self::from_parts(f.clone(), self.s, r))
    }

    fn div_rem_left(&self, g: &SkewPoly, n: usize) -> (SkewPoly, SkewPoly) {
        let f = &self.ctx;
        let mut r = self.coeffs.clone();
        if r.len() <= n {
            return (Self::zero(f, self.s), self.clone());
        }
        let inv_lead = f.inv(g.lead()).expect("nonzero lead");
        let mut q = vec![f.zero(); r.len() - n];
        for k in (0..q.len()).rev() {
            let c = r[k + n];
            if c.is_zero() {
                continue;
            }
            // (d Y^n)(t Y^k) = d σ^n(t) Y^{n+k}
            let t = self.sigma_inv_pow(f.mul(inv_lead, c), n);
            q[k] = t;
            for (j, &gj) in g.coeffs.iter().enumerate() {
                if gj.is_zero() {
                    continue;
                }
                r[k + j] = f.sub(r[k + j], f.mul(gj, self.sigma_pow(t, j)));
            }
        }
        r.truncate(n);
        (Self::from_parts(f.clone(), self.s, q), Self::from_parts(f.clone(), self.s, r))
    }

    pub fn rem(&self, g: &SkewPoly, side: Side) -> Result<SkewPoly> {
        Ok(self.div_rem(g, side)?.1)
    }

    /// Whether `g` divides `self` on `side` with zero remainder.
    pub fn is_divisible_by(&self, g: &SkewPoly, side: Side) -> Result<bool> {
        Ok(self.rem(g, side)?.is_zero())
    }

    /// Monic greatest common divisor on `side` (GCRD for `Right`, GCLD for
    /// `Left`) by iterated one-sided division.
    pub fn gcd(&self, other: &SkewPoly, side: Side) -> Result<SkewPoly> {
        self.same_ring(other)?;
        if self.is_zero() && other.is_zero() {
            return Err(Error::BothZero);
        }
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b, side)?;
            a = b;
            b = r;
        }
        Ok(match side {
            Side::Right => a.monic_left(),
            Side::Left => a.monic_right(),
        })
    }
}

/// `a_i X^{p^{s i}} ↦ a_i Y^i`.
pub fn phi_map(l: &LinPoly) -> SkewPoly {
    SkewPoly::from_parts(l.ctx().clone(), l.twist(), l.coeffs().to_vec())
}

/// `a_i Y^i ↦ a_i X^{p^{s i}}`.
pub fn phi_inv(f: &SkewPoly) -> LinPoly {
    LinPoly::from_parts(f.ctx().clone(), f.twist(), f.coeffs().to_vec())
}

/// Greatest common left-decompositional factor with its cofactors:
/// `first = gcldf ∘ left_cofactor` and `second = gcldf ∘ right_cofactor`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gcldf {
    pub gcldf: LinPoly,
    pub first_cofactor: LinPoly,
    pub second_cofactor: LinPoly,
}

pub fn gcldf_lin(l1: &LinPoly, l2: &LinPoly) -> Result<Gcldf> {
    let (a, b) = (phi_map(l1), phi_map(l2));
    let g = a.gcd(&b, Side::Left)?;
    let (qa, ra) = a.div_rem(&g, Side::Left)?;
    let (qb, rb) = b.div_rem(&g, Side::Left)?;
    debug_assert!(ra.is_zero() && rb.is_zero());
    Ok(Gcldf {
        gcldf: phi_inv(&g),
        first_cofactor: phi_inv(&qa),
        second_cofactor: phi_inv(&qb),
    })
}
