//! Key recovery by greatest common left-decompositional factors of
//! difference polynomials.
//!
//! If `E = L₁ ∘ f` with `f` a DO polynomial then `Δ_{E,a} = L₁ ∘ Δ_{f,a}`
//! for every `a`, so `L₁` is a common left factor of all the `Δ_{E,a}`.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::field::FqElem;
use crate::hfe::do_poly::DOPoly;
use crate::linops::LinPoly;
use crate::skew::{gcldf_lin, phi_inv, phi_map, Side, SkewPoly};

/// `f` with `L ∘ f = E` (exactly, or modulo `X^q - X` when `L` is a
/// permutation) and `deg f <= bound`, if there is one.
///
/// For a permutation `L` the cofactor is `reduce(L⁻¹ ∘ E)`, which always
/// satisfies the identity; the degree bound is what makes it a real factor.
/// Otherwise the unreduced identity is solved coefficient chain by
/// coefficient chain: the terms `X^{p^i + p^{i+δ}}` for fixed `δ` compose
/// with `L` like a left product in the skew ring.
pub fn is_left_factor(l: &LinPoly, e_poly: &DOPoly, bound: u64) -> Result<Option<DOPoly>> {
    if l.ctx() != e_poly.ctx() {
        return Err(Error::ContextMismatch);
    }
    if l.is_zero() {
        return Err(Error::InvalidArgument("left factor must be nonzero".into()));
    }
    let f = if l.is_permutation() {
        e_poly.compose_lin(&l.inverse()?, Side::Left, true)?
    } else {
        match solve_exact(l, e_poly)? {
            Some(f) => f,
            None => return Ok(None),
        }
    };
    Ok((f.degree() <= bound).then_some(f))
}

fn solve_exact(l: &LinPoly, e_poly: &DOPoly) -> Result<Option<DOPoly>> {
    let ctx = e_poly.ctx();
    let lp = phi_map(&l.to_p_poly());
    let mut chains: std::collections::BTreeMap<usize, Vec<FqElem>> = Default::default();
    for (&(i, j), &a) in e_poly.quad() {
        let chain = chains.entry(j - i).or_default();
        if chain.len() <= i {
            chain.resize(i + 1, ctx.zero());
        }
        chain[i] = a;
    }
    let mut f = DOPoly::zero(ctx);
    for (delta, chain) in chains {
        let target = SkewPoly::new(ctx, 1, chain)?;
        let (q, r) = target.div_rem(&lp, Side::Left)?;
        if !r.is_zero() {
            return Ok(None);
        }
        for (i, &c) in q.coeffs().iter().enumerate() {
            f.add_quad(i, i + delta, c);
        }
    }
    let (q, r) = phi_map(e_poly.lin()).div_rem(&lp, Side::Left)?;
    if !r.is_zero() {
        return Ok(None);
    }
    for (i, &c) in phi_inv(&q).coeffs().iter().enumerate() {
        f.add_lin(i, c);
    }
    let Some(c) = l.to_matrix().solve(&ctx.coords(e_poly.constant())) else {
        return Ok(None);
    };
    f.set_constant(ctx.from_coords(&c));
    debug_assert_eq!(f.compose_lin(l, Side::Left, false)?, *e_poly);
    Ok(Some(f))
}

/// A successful key recovery.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Recovered {
    /// An additive permutation with `reduce(left ∘ cofactor) = E`.
    pub left: LinPoly,
    pub cofactor: DOPoly,
    pub rounds: usize,
    /// The points `a` whose difference polynomials were used, in order.
    pub samples: Vec<FqElem>,
}

/// Draws distinct `a₁, a₂` from F_q*, takes `L = GCLDF(Δ_{E,a₁}, Δ_{E,a₂})`,
/// and refines `L ← GCLDF(L, Δ_{E,a})` with fresh points until `L` is a
/// permutation left factor with a cofactor of degree `<= bound`, or
/// `max_rounds` GCLDF computations have been spent.
///
/// Only the additive part of each difference polynomial is used, so a
/// constant term in `E` is ignored.
pub fn attack_gcldf<R: Rng + ?Sized>(e_poly: &DOPoly, bound: u64, rng: &mut R, max_rounds: usize) -> Result<Recovered> {
    if max_rounds == 0 {
        return Err(Error::InvalidArgument("max_rounds must be at least 1".into()));
    }
    let ctx = e_poly.ctx();
    let mut points: Vec<FqElem> = ctx.nonzero_elements().collect();
    if points.len() < 2 {
        return Err(Error::InvalidArgument("need at least two nonzero field elements".into()));
    }
    points.shuffle(rng);
    let mut points = points.into_iter();
    let a1 = points.next().expect("two points");
    let a2 = points.next().expect("two points");
    let mut samples = vec![a1, a2];
    let mut l = gcldf_lin(&e_poly.delta_lin(a1), &e_poly.delta_lin(a2))?.gcldf;
    let mut rounds = 1;
    loop {
        if l.is_permutation() {
            if let Some(cofactor) = is_left_factor(&l, e_poly, bound)? {
                return Ok(Recovered {
                    left: l,
                    cofactor,
                    rounds,
                    samples,
                });
            }
        }
        let next = match points.next() {
            Some(a) if rounds < max_rounds => a,
            _ => return Err(Error::AttackFailed { rounds_used: rounds }),
        };
        samples.push(next);
        l = gcldf_lin(&l, &e_poly.delta_lin(next))?.gcldf;
        rounds += 1;
    }
}

/// Plaintext candidates for `y` from a recovered pair: the roots of
/// `f(m) = L⁻¹(y)`, sorted by element index.
pub fn decrypt_with(left: &LinPoly, cofactor: &DOPoly, y: FqElem) -> Result<Vec<FqElem>> {
    let z = left.inverse()?.eval(y);
    Ok(cofactor.ctx().elements().filter(|&m| cofactor.eval(m) == z).collect())
}
