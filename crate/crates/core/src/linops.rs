//! p^s-polynomials `sum a_i X^{p^{s i}}` as values.
//!
//! Composition is symbolic and exact; [`LinPoly::reduce`] is the only place
//! where `X^q = X` is applied, and its output is always re-based to twist
//! step 1 with indices below `e`.

use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};
use crate::field::{FieldCtx, FqElem};
use crate::fp_linalg::FpMatrix;

/// The e×e matrix over F_p of the F_p-linear map a p-polynomial induces,
/// in the context's basis. Column `j` holds the coordinates of `L(β_j)`.
pub type LinMatrix = FpMatrix;

#[derive(Clone, PartialEq, Eq)]
pub struct LinPoly {
    ctx: FieldCtx,
    s: u32,
    coeffs: Vec<FqElem>,
}

impl fmt::Debug for LinPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LinPoly(s={}, {:?})", self.s, self.coeffs)
    }
}

impl fmt::Display for LinPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let p = self.ctx.p();
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if !c.is_one() {
                write!(f, "{:?}*", c)?;
            }
            match self.s as usize * i {
                0 => write!(f, "X")?,
                k => write!(f, "X^({p}^{k})")?,
            }
        }
        Ok(())
    }
}

fn trim(coeffs: &mut Vec<FqElem>) {
    while coeffs.last().is_some_and(|c| c.is_zero()) {
        coeffs.pop();
    }
}

impl LinPoly {
    pub fn new(ctx: &FieldCtx, s: u32, coeffs: Vec<FqElem>) -> Result<LinPoly> {
        if s == 0 {
            return Err(Error::InvalidArgument("twist step must be positive".into()));
        }
        for &c in &coeffs {
            ctx.check(c)?;
        }
        Ok(Self::from_parts(ctx.clone(), s, coeffs))
    }

    pub(crate) fn from_parts(ctx: FieldCtx, s: u32, mut coeffs: Vec<FqElem>) -> LinPoly {
        trim(&mut coeffs);
        LinPoly { ctx, s, coeffs }
    }

    pub fn zero(ctx: &FieldCtx, s: u32) -> LinPoly {
        Self::from_parts(ctx.clone(), s, vec![])
    }

    /// The identity polynomial `X`.
    pub fn identity(ctx: &FieldCtx, s: u32) -> LinPoly {
        Self::from_parts(ctx.clone(), s, vec![ctx.one()])
    }

    /// `a X^{p^{s i}}`.
    pub fn monomial(ctx: &FieldCtx, s: u32, i: usize, a: FqElem) -> LinPoly {
        let mut coeffs = vec![ctx.zero(); i + 1];
        coeffs[i] = a;
        Self::from_parts(ctx.clone(), s, coeffs)
    }

    /// Random polynomial with `len` uniformly drawn coefficients.
    pub fn random<R: Rng + ?Sized>(ctx: &FieldCtx, s: u32, len: usize, rng: &mut R) -> LinPoly {
        let coeffs = (0..len).map(|_| ctx.random(rng, false)).collect();
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

    /// Index `n` of the leading term `a_n X^{p^{s n}}`; `None` for zero.
    pub fn skew_degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Ordinary degree `p^{s n}`, saturating at `u64::MAX`; `None` for zero.
    pub fn degree(&self) -> Option<u64> {
        let n = self.skew_degree()?;
        let exp = (self.s as u64).saturating_mul(n as u64);
        Some(
            u32::try_from(exp)
                .ok()
                .and_then(|x| (self.ctx.p() as u64).checked_pow(x))
                .unwrap_or(u64::MAX),
        )
    }

    fn same_ring(&self, other: &LinPoly) -> Result<()> {
        if self.ctx != other.ctx {
            return Err(Error::ContextMismatch);
        }
        if self.s != other.s {
            return Err(Error::TwistMismatch(self.s, other.s));
        }
        Ok(())
    }

    pub fn eval(&self, x: FqElem) -> FqElem {
        let f = &self.ctx;
        self.coeffs.iter().enumerate().fold(f.zero(), |acc, (i, &a)| {
            if a.is_zero() {
                acc
            } else {
                f.add(acc, f.mul(a, f.frobenius(x, self.s as u64 * i as u64)))
            }
        })
    }

    pub fn try_eval(&self, x: FqElem) -> Result<FqElem> {
        self.ctx.check(x)?;
        Ok(self.eval(x))
    }

    pub fn add(&self, other: &LinPoly) -> Result<LinPoly> {
        self.same_ring(other)?;
        let f = &self.ctx;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| f.add(self.coeff(i), other.coeff(i))).collect();
        Ok(Self::from_parts(f.clone(), self.s, coeffs))
    }

    pub fn sub(&self, other: &LinPoly) -> Result<LinPoly> {
        self.same_ring(other)?;
        let f = &self.ctx;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| f.sub(self.coeff(i), other.coeff(i))).collect();
        Ok(Self::from_parts(f.clone(), self.s, coeffs))
    }

    /// `c · L`, i.e. the composition `(cX) ∘ L`.
    pub fn scale(&self, c: FqElem) -> LinPoly {
        let f = &self.ctx;
        let coeffs = self.coeffs.iter().map(|&a| f.mul(c, a)).collect();
        Self::from_parts(f.clone(), self.s, coeffs)
    }

    /// Exact composition `self ∘ inner`: the coefficient of index `k` is
    /// `sum_{i+j=k} a_i · b_j^{p^{s i}}`.
    pub fn compose(&self, inner: &LinPoly) -> Result<LinPoly> {
        self.same_ring(inner)?;
        if self.is_zero() || inner.is_zero() {
            return Ok(Self::zero(&self.ctx, self.s));
        }
        let f = &self.ctx;
        let mut out = vec![f.zero(); self.coeffs.len() + inner.coeffs.len() - 1];
        for k in 0..out.len() {
            let lo = k.saturating_sub(inner.coeffs.len() - 1);
            let hi = k.min(self.coeffs.len() - 1);
            let mut acc = f.zero();
            for i in lo..=hi {
                let twisted = f.frobenius(inner.coeffs[k - i], self.s as u64 * i as u64);
                acc = f.add(acc, f.mul(self.coeffs[i], twisted));
            }
            out[k] = acc;
        }
        Ok(Self::from_parts(f.clone(), self.s, out))
    }

    /// The same polynomial written with twist step 1.
    pub fn to_p_poly(&self) -> LinPoly {
        if self.s == 1 {
            return self.clone();
        }
        let f = &self.ctx;
        let s = self.s as usize;
        let mut coeffs = vec![f.zero(); self.coeffs.len().saturating_sub(1) * s + 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            coeffs[i * s] = a;
        }
        Self::from_parts(f.clone(), 1, coeffs)
    }

    /// Reduction modulo `X^q - X`: `X^{p^k}` and `X^{p^{k mod e}}` agree as
    /// functions on F_q. The result has twist step 1 and at most `e` terms.
    pub fn reduce(&self) -> LinPoly {
        let f = &self.ctx;
        let e = f.e();
        let mut out = vec![f.zero(); e];
        for (i, &a) in self.coeffs.iter().enumerate() {
            let k = (self.s as usize * i) % e;
            out[k] = f.add(out[k], a);
        }
        Self::from_parts(f.clone(), 1, out)
    }

    pub fn to_matrix(&self) -> LinMatrix {
        let f = &self.ctx;
        let reduced = self.reduce();
        let cols: Vec<Vec<u32>> = f.basis().into_iter().map(|b| f.coords(reduced.eval(b))).collect();
        FpMatrix::from_columns(f.p(), f.e(), &cols)
    }

    /// The reduced p-polynomial (twist step 1) inducing `m`. Solves the Moore
    /// system `sum_i a_i β_j^{p^i} = M(β_j)` over F_q.
    pub fn from_matrix(m: &LinMatrix, ctx: &FieldCtx) -> Result<LinPoly> {
        let e = ctx.e();
        if m.rows() != e || m.cols() != e || m.p() != ctx.p() {
            return Err(Error::InvalidArgument(format!(
                "expected a {e}x{e} matrix over F_{}",
                ctx.p()
            )));
        }
        let basis = ctx.basis();
        let system: Vec<Vec<FqElem>> = basis
            .iter()
            .map(|&b| (0..e).map(|i| ctx.frobenius(b, i as u64)).collect())
            .collect();
        let rhs: Vec<FqElem> = (0..e).map(|j| ctx.from_coords(&m.column(j))).collect();
        let coeffs = solve_fq(ctx, system, rhs).ok_or(Error::SingularSystem)?;
        Ok(Self::from_parts(ctx.clone(), 1, coeffs))
    }

    /// Whether evaluation permutes F_q (the induced matrix is invertible).
    pub fn is_permutation(&self) -> bool {
        self.to_matrix().is_invertible()
    }

    /// The reduced p-polynomial inverting `self` as a map on F_q.
    pub fn inverse(&self) -> Result<LinPoly> {
        let inv = self.to_matrix().inverse().ok_or(Error::NotAPermutation)?;
        Self::from_matrix(&inv, &self.ctx)
    }
}

/// Gauss-Jordan over F_q for a square system; `None` when singular.
pub(crate) fn solve_fq(ctx: &FieldCtx, mut a: Vec<Vec<FqElem>>, mut b: Vec<FqElem>) -> Option<Vec<FqElem>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        b.swap(col, piv);
        let inv = ctx.inv(a[col][col]).ok()?;
        for c in col..n {
            a[col][c] = ctx.mul(a[col][c], inv);
        }
        b[col] = ctx.mul(b[col], inv);
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let factor = a[r][col];
            for c in col..n {
                let v = ctx.mul(factor, a[col][c]);
                a[r][c] = ctx.sub(a[r][c], v);
            }
            b[r] = ctx.sub(b[r], ctx.mul(factor, b[col]));
        }
    }
    Some(b)
}
