//! A toy HFE instance: public `E = S ∘ D ∘ T mod (X^q - X)` with secret
//! additive permutations `S`, `T` and a low-degree DO polynomial `D`.

use std::collections::BTreeMap;

use rand::Rng;

use crate::error::{Error, Result};
use crate::field::{FieldCtx, FqElem};
use crate::fp_poly::{add_mod, mul_mod};
use crate::hfe::do_poly::DOPoly;
use crate::linops::LinPoly;
use crate::skew::Side;

/// Default for the degree bound `d`: `p^4`.
pub fn default_bound(p: u32) -> u64 {
    (p as u64).pow(4)
}

/// A polynomial over F_p of total degree at most 2. Monomials are sorted
/// variable-index lists: `[]` is the constant, `[k]` is `X_k`, `[k, l]` is
/// `X_k X_l`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct QuadForm {
    pub terms: BTreeMap<Vec<usize>, u32>,
}

impl QuadForm {
    fn add_term(&mut self, mut vars: Vec<usize>, c: u32, p: u32) {
        vars.sort_unstable();
        let entry = self.terms.entry(vars.clone()).or_insert(0);
        *entry = add_mod(*entry, c, p);
        if *entry == 0 {
            self.terms.remove(&vars);
        }
    }

    pub fn eval(&self, x: &[u32], p: u32) -> u32 {
        self.terms.iter().fold(0, |acc, (vars, &c)| {
            let m = vars.iter().fold(c, |m, &k| mul_mod(m, x[k], p));
            add_mod(acc, m, p)
        })
    }
}

/// The public key as `e` quadratic polynomials over F_p, one per basis
/// coordinate: `E(Σ β_k x_k) = Σ β_i n_i(x)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultivariateKey {
    pub p: u32,
    pub polys: Vec<QuadForm>,
}

impl MultivariateKey {
    /// `Σ β_i n_i(coords of x)`.
    pub fn eval(&self, ctx: &FieldCtx, x: FqElem) -> FqElem {
        let c = ctx.coords(x);
        let out: Vec<u32> = self.polys.iter().map(|n| n.eval(&c, self.p)).collect();
        ctx.from_coords(&out)
    }
}

/// Expands `E(Σ β_k X_k)` using `(Σ β_k x_k)^{p^i} = Σ β_k^{p^i} x_k` for
/// `x_k ∈ F_p`, and splits every coefficient into basis coordinates.
pub fn to_multivariate(e_poly: &DOPoly) -> MultivariateKey {
    let ctx = e_poly.ctx();
    let p = ctx.p();
    let basis = ctx.basis();
    let e = ctx.e();
    // coefficient over F_q of each monomial in the X_k
    let mut over_fq: BTreeMap<Vec<usize>, FqElem> = BTreeMap::new();
    let mut add = |mut vars: Vec<usize>, c: FqElem| {
        if p == 2 && vars.len() == 2 && vars[0] == vars[1] {
            // x^2 = x on F_2
            vars.pop();
        }
        vars.sort_unstable();
        let entry = over_fq.entry(vars).or_insert(ctx.zero());
        *entry = ctx.add(*entry, c);
    };
    for (&(i, j), &a) in e_poly.quad() {
        for k in 0..e {
            let bk = ctx.frobenius(basis[k], i as u64);
            for l in 0..e {
                let bl = ctx.frobenius(basis[l], j as u64);
                add(vec![k, l], ctx.mul(a, ctx.mul(bk, bl)));
            }
        }
    }
    for (i, &a) in e_poly.lin().coeffs().iter().enumerate() {
        for (k, &b) in basis.iter().enumerate() {
            add(vec![k], ctx.mul(a, ctx.frobenius(b, i as u64)));
        }
    }
    add(vec![], e_poly.constant());
    let mut polys = vec![QuadForm::default(); e];
    for (vars, c) in over_fq {
        for (i, d) in ctx.coords(c).into_iter().enumerate() {
            if d != 0 {
                polys[i].add_term(vars.clone(), d, p);
            }
        }
    }
    MultivariateKey { p, polys }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PublicKey {
    pub e_poly: DOPoly,
    pub multivariate: MultivariateKey,
}

impl PublicKey {
    pub fn from_poly(e_poly: DOPoly) -> PublicKey {
        let multivariate = to_multivariate(&e_poly);
        PublicKey { e_poly, multivariate }
    }

    pub fn ctx(&self) -> &FieldCtx {
        self.e_poly.ctx()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SecretKey {
    pub s: LinPoly,
    pub d: DOPoly,
    pub t: LinPoly,
    pub bound: u64,
    pub s_inv: LinPoly,
    pub t_inv: LinPoly,
}

impl SecretKey {
    /// Fills in the cached inverses; fails if `s` or `t` is not a permutation.
    pub fn new(s: LinPoly, d: DOPoly, t: LinPoly, bound: u64) -> Result<SecretKey> {
        let s_inv = s.inverse()?;
        let t_inv = t.inverse()?;
        Ok(SecretKey {
            s,
            d,
            t,
            bound,
            s_inv,
            t_inv,
        })
    }

    /// `reduce(S ∘ D ∘ T)`.
    pub fn public_poly(&self) -> Result<DOPoly> {
        self.d
            .compose_lin(&self.t, Side::Right, false)?
            .compose_lin(&self.s, Side::Left, true)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HfeKeyPair {
    pub public: PublicKey,
    pub secret: SecretKey,
}

/// A reduced additive permutation of F_q, by rejection sampling.
pub fn random_permutation<R: Rng + ?Sized>(ctx: &FieldCtx, rng: &mut R) -> LinPoly {
    loop {
        let l = LinPoly::random(ctx, 1, ctx.e(), rng);
        if l.is_permutation() {
            return l;
        }
    }
}

/// Index pairs `(i, j)` allowed in `D` under the bound `p^i + p^j <= bound`.
fn quad_slots(ctx: &FieldCtx, bound: u64) -> Vec<(usize, usize)> {
    let p = ctx.p() as u64;
    let e = ctx.e();
    let mut out = Vec::new();
    for j in 0..e {
        for i in 0..=j {
            if p == 2 && i == j {
                continue;
            }
            let deg = p.checked_pow(i as u32).zip(p.checked_pow(j as u32)).map(|(a, b)| a + b);
            if deg.is_some_and(|d| d <= bound) {
                out.push((i, j));
            }
        }
    }
    out
}

pub fn hfe_keygen<R: Rng + ?Sized>(ctx: &FieldCtx, bound: u64, rng: &mut R) -> Result<HfeKeyPair> {
    let p = ctx.p() as u64;
    if bound < p * p {
        return Err(Error::DegreeBoundTooSmall(bound));
    }
    let slots = quad_slots(ctx, bound);
    if slots.is_empty() {
        return Err(Error::InvalidArgument(format!("{ctx} has no quadratic DO monomials")));
    }
    let d = loop {
        let mut d = DOPoly::zero(ctx);
        for &(i, j) in &slots {
            d.add_quad(i, j, ctx.random(rng, false));
        }
        if !d.quad().is_empty() {
            break d;
        }
    };
    let s = random_permutation(ctx, rng);
    let t = random_permutation(ctx, rng);
    let secret = SecretKey::new(s, d, t, bound)?;
    let public = PublicKey::from_poly(secret.public_poly()?);
    Ok(HfeKeyPair { public, secret })
}

pub fn hfe_encrypt(public: &PublicKey, m: FqElem) -> FqElem {
    public.e_poly.eval(m)
}

/// All `m` with `E(m) = y`: every root of `D(m₁) = S⁻¹(y)`, found by
/// exhaustive evaluation, mapped through `T⁻¹`. Sorted by element index.
pub fn hfe_decrypt(secret: &SecretKey, y: FqElem) -> Vec<FqElem> {
    let ctx = secret.d.ctx();
    let z = secret.s_inv.eval(y);
    let mut out: Vec<FqElem> = ctx
        .elements()
        .filter(|&m1| secret.d.eval(m1) == z)
        .map(|m1| secret.t_inv.eval(m1))
        .collect();
    out.sort_by_key(|x| x.index());
    out
}
