//! Dembowski-Ostrom polynomials `Σ a_ij X^{p^i + p^j}` plus an additive part
//! and a constant, general sparse polynomials, and the difference operator
//! `Δ_{t,a}(X) = t(X + a) - t(X) - t(a)`.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::field::{FieldCtx, FqElem};
use crate::fp_poly::{inv_mod, mul_mod};
use crate::linops::LinPoly;
use crate::skew::Side;

/// Base-p digits of `k`, least significant first.
fn base_p_digits(mut k: u64, p: u64) -> Vec<u64> {
    let mut d = Vec::new();
    while k > 0 {
        d.push(k % p);
        k /= p;
    }
    d
}

/// `p^k`, `None` on overflow.
fn p_pow(p: u32, k: usize) -> Option<u64> {
    u32::try_from(k).ok().and_then(|k| (p as u64).checked_pow(k))
}

/// Exponent `k` as `log_p k` when `k` is a power of `p`.
fn log_p_exact(k: u64, p: u64) -> Option<usize> {
    let d = base_p_digits(k, p);
    let nonzero: Vec<usize> = (0..d.len()).filter(|&i| d[i] != 0).collect();
    match nonzero.as_slice() {
        [i] if d[*i] == 1 => Some(*i),
        _ => None,
    }
}

/// `binom(n, k) mod p` for `k <= n < p`.
fn small_binom(n: u64, k: u64, p: u32) -> u32 {
    let k = k.min(n - k);
    let (mut num, mut den) = (1u32, 1u32);
    for i in 0..k {
        num = mul_mod(num, (n - i) as u32, p);
        den = mul_mod(den, (i + 1) as u32, p);
    }
    mul_mod(num, inv_mod(den, p), p)
}

/// Univariate polynomial over F_q with arbitrary exponents, stored sparsely.
#[derive(Clone, PartialEq, Eq)]
pub struct SparsePoly {
    ctx: FieldCtx,
    terms: BTreeMap<u64, FqElem>,
}

impl fmt::Debug for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter()).finish()
    }
}

/// The outcome of the difference operator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DeltaResult {
    Linear(LinPoly),
    /// Surviving monomials whose exponent is not a power of p.
    FailedLinearity { monomials: Vec<(u64, FqElem)> },
}

impl DeltaResult {
    pub fn is_linear(&self) -> bool {
        matches!(self, DeltaResult::Linear(_))
    }

    pub fn linear(self) -> Option<LinPoly> {
        match self {
            DeltaResult::Linear(l) => Some(l),
            DeltaResult::FailedLinearity { .. } => None,
        }
    }
}

impl SparsePoly {
    pub fn new(ctx: &FieldCtx, terms: impl IntoIterator<Item = (u64, FqElem)>) -> Result<SparsePoly> {
        let mut out = SparsePoly::zero(ctx);
        for (k, c) in terms {
            ctx.check(c)?;
            out.add_term(k, c);
        }
        Ok(out)
    }

    pub fn zero(ctx: &FieldCtx) -> SparsePoly {
        SparsePoly {
            ctx: ctx.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(ctx: &FieldCtx, k: u64, c: FqElem) -> SparsePoly {
        let mut out = SparsePoly::zero(ctx);
        out.add_term(k, c);
        out
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    pub fn terms(&self) -> &BTreeMap<u64, FqElem> {
        &self.terms
    }

    pub fn add_term(&mut self, k: u64, c: FqElem) {
        let sum = self.ctx.add(self.coeff(k), c);
        if sum.is_zero() {
            self.terms.remove(&k);
        } else {
            self.terms.insert(k, sum);
        }
    }

    pub fn coeff(&self, k: u64) -> FqElem {
        self.terms.get(&k).copied().unwrap_or_else(|| self.ctx.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> Option<u64> {
        self.terms.keys().next_back().copied()
    }

    pub fn eval(&self, x: FqElem) -> FqElem {
        let f = &self.ctx;
        self.terms
            .iter()
            .fold(f.zero(), |acc, (&k, &c)| f.add(acc, f.mul(c, f.pow(x, k))))
    }

    /// `t(X + a) - t(X) - t(a)`, expanded symbolically. By Lucas' theorem
    /// `binom(k, j)` survives mod p only for `j` digit-wise below `k`.
    pub fn delta_poly(&self, a: FqElem) -> SparsePoly {
        let f = &self.ctx;
        let p = f.p();
        let mut out = SparsePoly::zero(f);
        for (&k, &c) in &self.terms {
            if k == 0 {
                out.add_term(0, f.neg(c));
                continue;
            }
            if a.is_zero() {
                continue;
            }
            let digits = base_p_digits(k, p as u64);
            // odometer over digit vectors j with j_i <= k_i
            let mut j = vec![0u64; digits.len()];
            loop {
                let mut i = 0;
                while i < j.len() && j[i] == digits[i] {
                    j[i] = 0;
                    i += 1;
                }
                if i == j.len() {
                    break;
                }
                j[i] += 1;
                let jv = j.iter().rev().fold(0u64, |acc, &d| acc * p as u64 + d);
                if jv == k {
                    continue;
                }
                let binom = digits
                    .iter()
                    .zip(&j)
                    .fold(1u32, |acc, (&n, &m)| mul_mod(acc, small_binom(n, m, p), p));
                if binom == 0 {
                    continue;
                }
                let coeff = f.mul(f.mul(c, f.from_fp(binom)), f.pow(a, k - jv));
                out.add_term(jv, coeff);
            }
        }
        out
    }

    pub fn delta(&self, a: FqElem) -> DeltaResult {
        let d = self.delta_poly(a);
        let p = self.ctx.p() as u64;
        let bad: Vec<(u64, FqElem)> = d
            .terms
            .iter()
            .filter(|(&k, _)| log_p_exact(k, p).is_none())
            .map(|(&k, &c)| (k, c))
            .collect();
        if !bad.is_empty() {
            return DeltaResult::FailedLinearity { monomials: bad };
        }
        let mut coeffs = Vec::new();
        for (&k, &c) in &d.terms {
            let i = log_p_exact(k, p).expect("checked above");
            if coeffs.len() <= i {
                coeffs.resize(i + 1, self.ctx.zero());
            }
            coeffs[i] = c;
        }
        DeltaResult::Linear(LinPoly::from_parts(self.ctx.clone(), 1, coeffs))
    }
}

/// Result of [`do_check`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DoCheck {
    /// Every difference polynomial of the non-constant part is a p-polynomial.
    pub is_do: bool,
    /// Every non-constant exponent has the form `p^i` or `p^i + p^j`.
    pub structural: bool,
    /// Some `a` whose difference polynomial is not additive.
    pub witness: Option<FqElem>,
    /// The constant term, which is set aside before checking.
    pub constant: FqElem,
}

/// Decides whether `f` (with `deg f < q`) is a DO polynomial plus a
/// p-polynomial plus a constant, by running the difference operator for
/// every nonzero `a`. The exponent-shape test is reported alongside.
pub fn do_check(f: &SparsePoly) -> Result<DoCheck> {
    let ctx = f.ctx();
    let q = ctx.order() as u64;
    if let Some(deg) = f.degree().filter(|&d| d >= q) {
        return Err(Error::DegreeTooLarge { degree: deg, order: q });
    }
    let p = ctx.p() as u64;
    let structural = f
        .terms
        .keys()
        .all(|&k| k == 0 || matches!(base_p_digits(k, p).iter().sum::<u64>(), 1 | 2));
    let constant = f.coeff(0);
    let mut body = f.clone();
    body.terms.remove(&0);
    let witness = ctx.nonzero_elements().find(|&a| !body.delta(a).is_linear());
    Ok(DoCheck {
        is_do: witness.is_none(),
        structural,
        witness,
        constant,
    })
}

/// `Σ a_ij X^{p^i + p^j} + L(X) + c`.
///
/// Pairs are stored with `i <= j`. In characteristic 2 the diagonal
/// `X^{2·2^i}` is the additive monomial `X^{2^{i+1}}` and is kept in `lin`,
/// so every polynomial has one representation.
#[derive(Clone, PartialEq, Eq)]
pub struct DOPoly {
    ctx: FieldCtx,
    quad: BTreeMap<(usize, usize), FqElem>,
    lin: LinPoly,
    constant: FqElem,
}

impl fmt::Debug for DOPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DOPoly")
            .field("quad", &self.quad)
            .field("lin", &self.lin.coeffs())
            .field("constant", &self.constant)
            .finish()
    }
}

impl DOPoly {
    pub fn zero(ctx: &FieldCtx) -> DOPoly {
        DOPoly {
            ctx: ctx.clone(),
            quad: BTreeMap::new(),
            lin: LinPoly::zero(ctx, 1),
            constant: ctx.zero(),
        }
    }

    pub fn new(
        ctx: &FieldCtx,
        quad: impl IntoIterator<Item = ((usize, usize), FqElem)>,
        lin: &LinPoly,
        constant: FqElem,
    ) -> Result<DOPoly> {
        if lin.ctx() != ctx {
            return Err(Error::ContextMismatch);
        }
        ctx.check(constant)?;
        let mut out = DOPoly::zero(ctx);
        for ((i, j), c) in quad {
            ctx.check(c)?;
            out.add_quad(i, j, c);
        }
        out.lin = lin.to_p_poly();
        out.constant = constant;
        Ok(out)
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    pub fn quad(&self) -> &BTreeMap<(usize, usize), FqElem> {
        &self.quad
    }

    pub fn lin(&self) -> &LinPoly {
        &self.lin
    }

    pub fn constant(&self) -> FqElem {
        self.constant
    }

    pub fn quad_coeff(&self, i: usize, j: usize) -> FqElem {
        self.quad
            .get(&(i.min(j), i.max(j)))
            .copied()
            .unwrap_or_else(|| self.ctx.zero())
    }

    /// Adds `c X^{p^i + p^j}`.
    pub fn add_quad(&mut self, i: usize, j: usize, c: FqElem) {
        if c.is_zero() {
            return;
        }
        if self.ctx.p() == 2 && i == j {
            self.add_lin(i + 1, c);
            return;
        }
        let key = (i.min(j), i.max(j));
        let sum = self.ctx.add(self.quad_coeff(i, j), c);
        if sum.is_zero() {
            self.quad.remove(&key);
        } else {
            self.quad.insert(key, sum);
        }
    }

    /// Adds `c X^{p^i}`.
    pub fn add_lin(&mut self, i: usize, c: FqElem) {
        let m = LinPoly::monomial(&self.ctx, 1, i, c);
        self.lin = self.lin.add(&m).expect("same ring");
    }

    pub fn set_constant(&mut self, c: FqElem) {
        self.constant = c;
    }

    pub fn is_zero(&self) -> bool {
        self.quad.is_empty() && self.lin.is_zero() && self.constant.is_zero()
    }

    pub fn eval(&self, x: FqElem) -> FqElem {
        let f = &self.ctx;
        let mut acc = f.add(self.lin.eval(x), self.constant);
        for (&(i, j), &a) in &self.quad {
            let xi = f.frobenius(x, i as u64);
            let xj = f.frobenius(x, j as u64);
            acc = f.add(acc, f.mul(a, f.mul(xi, xj)));
        }
        acc
    }

    /// Ordinary degree, saturating at `u64::MAX`; zero for constants.
    pub fn degree(&self) -> u64 {
        let p = self.ctx.p();
        let quad = self.quad.keys().map(|&(i, j)| {
            p_pow(p, i)
                .zip(p_pow(p, j))
                .and_then(|(a, b)| a.checked_add(b))
                .unwrap_or(u64::MAX)
        });
        let lin = self.lin.degree();
        quad.chain(lin).max().unwrap_or(0)
    }

    /// Number of nonzero monomials, including the constant.
    pub fn term_count(&self) -> usize {
        self.quad.len()
            + self.lin.coeffs().iter().filter(|c| !c.is_zero()).count()
            + usize::from(!self.constant.is_zero())
    }

    /// Folds every index modulo `e`, using `x^{p^e} = x` on F_q. The result
    /// has the same values on all of F_q.
    pub fn reduce(&self) -> DOPoly {
        let e = self.ctx.e();
        let mut out = DOPoly::zero(&self.ctx);
        for (&(i, j), &a) in &self.quad {
            out.add_quad(i % e, j % e, a);
        }
        out.lin = out.lin.add(&self.lin).expect("same ring").reduce();
        out.constant = self.constant;
        out
    }

    pub fn is_reduced(&self) -> bool {
        *self == self.reduce()
    }

    /// `L ∘ D` (`Side::Left`) or `D ∘ L` (`Side::Right`), collected back
    /// into DO shape, optionally reduced.
    pub fn compose_lin(&self, l: &LinPoly, side: Side, reduce: bool) -> Result<DOPoly> {
        if l.ctx() != &self.ctx {
            return Err(Error::ContextMismatch);
        }
        let f = &self.ctx;
        let l = l.to_p_poly();
        let mut out = DOPoly::zero(f);
        match side {
            Side::Left => {
                for (k, &b) in l.coeffs().iter().enumerate() {
                    if b.is_zero() {
                        continue;
                    }
                    for (&(i, j), &a) in &self.quad {
                        out.add_quad(i + k, j + k, f.mul(b, f.frobenius(a, k as u64)));
                    }
                }
                out.lin = out.lin.add(&l.compose(&self.lin)?)?;
                out.constant = l.eval(self.constant);
            }
            Side::Right => {
                let b = l.coeffs();
                for (&(i, j), &a) in &self.quad {
                    for (m, &bm) in b.iter().enumerate() {
                        if bm.is_zero() {
                            continue;
                        }
                        let left = f.mul(a, f.frobenius(bm, i as u64));
                        for (n, &bn) in b.iter().enumerate() {
                            if bn.is_zero() {
                                continue;
                            }
                            out.add_quad(m + i, n + j, f.mul(left, f.frobenius(bn, j as u64)));
                        }
                    }
                }
                out.lin = out.lin.add(&self.lin.compose(&l)?)?;
                out.constant = self.constant;
            }
        }
        Ok(if reduce { out.reduce() } else { out })
    }

    /// The additive part of the difference polynomial,
    /// `Σ a_ij (a^{p^j} X^{p^i} + a^{p^i} X^{p^j})`. This is all of `Δ_{D,a}`
    /// when the constant is zero.
    pub fn delta_lin(&self, a: FqElem) -> LinPoly {
        let f = &self.ctx;
        let mut out = LinPoly::zero(f, 1);
        for (&(i, j), &c) in &self.quad {
            let ti = LinPoly::monomial(f, 1, i, f.mul(c, f.frobenius(a, j as u64)));
            let tj = LinPoly::monomial(f, 1, j, f.mul(c, f.frobenius(a, i as u64)));
            out = out.add(&ti).and_then(|o| o.add(&tj)).expect("same ring");
        }
        out
    }

    /// `Δ_{D,a}`; a nonzero constant `c` contributes `-c` and makes the
    /// result fail linearity.
    pub fn delta(&self, a: FqElem) -> DeltaResult {
        if !self.constant.is_zero() {
            return DeltaResult::FailedLinearity {
                monomials: vec![(0, self.ctx.neg(self.constant))],
            };
        }
        DeltaResult::Linear(self.delta_lin(a))
    }

    /// Expanded form. Panics if an exponent overflows `u64`.
    pub fn to_sparse(&self) -> SparsePoly {
        let p = self.ctx.p();
        let mut out = SparsePoly::zero(&self.ctx);
        for (&(i, j), &a) in &self.quad {
            let k = p_pow(p, i)
                .zip(p_pow(p, j))
                .and_then(|(x, y)| x.checked_add(y))
                .expect("exponent fits in u64");
            out.add_term(k, a);
        }
        for (i, &a) in self.lin.coeffs().iter().enumerate() {
            out.add_term(p_pow(p, i).expect("exponent fits in u64"), a);
        }
        out.add_term(0, self.constant);
        out
    }

    /// Reads a sparse polynomial in DO-plus-additive shape; `None` if some
    /// exponent is not `0`, `p^i`, or `p^i + p^j`.
    pub fn from_sparse(g: &SparsePoly) -> Option<DOPoly> {
        let ctx = g.ctx();
        let p = ctx.p() as u64;
        let mut out = DOPoly::zero(ctx);
        for (&k, &c) in g.terms() {
            if k == 0 {
                out.constant = c;
                continue;
            }
            let d = base_p_digits(k, p);
            let idx: Vec<usize> = (0..d.len()).filter(|&i| d[i] != 0).collect();
            match (idx.as_slice(), d.iter().sum::<u64>()) {
                ([i], 1) => out.add_lin(*i, c),
                ([i], 2) => out.add_quad(*i, *i, c),
                ([i, j], 2) => out.add_quad(*i, *j, c),
                _ => return None,
            }
        }
        Some(out)
    }
}
