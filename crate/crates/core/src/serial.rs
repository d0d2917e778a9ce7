//! JSON file formats. Field elements are digit arrays in the polynomial
//! basis, constant digit first; polynomials list one digit array per index.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{FieldCtx, FqElem};
use crate::hfe::{DOPoly, HfeKeyPair, MultivariateKey, PublicKey, QuadForm, SecretKey};
use crate::linops::LinPoly;
use crate::skew::SkewPoly;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldFile {
    pub p: u32,
    pub e: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<Vec<u32>>,
    /// Present only for a non-polynomial basis; each entry is a digit array.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<Vec<Vec<u32>>>,
}

impl FieldFile {
    pub fn from_ctx(ctx: &FieldCtx) -> FieldFile {
        FieldFile {
            p: ctx.p(),
            e: ctx.e(),
            modulus: Some(ctx.modulus().to_vec()),
            basis: (!ctx.has_standard_basis()).then(|| ctx.basis().into_iter().map(|b| ctx.digits(b)).collect()),
        }
    }

    pub fn to_ctx(&self) -> Result<FieldCtx> {
        let ctx = FieldCtx::new(self.p, self.e, self.modulus.as_deref())?;
        match &self.basis {
            None => Ok(ctx),
            Some(b) => {
                let elems = b.iter().map(|d| ctx.from_digits(d)).collect::<Result<Vec<_>>>()?;
                ctx.with_basis(&elems)
            }
        }
    }
}

/// A p^s-polynomial or a skew polynomial: `coeffs[i]` belongs to
/// `X^{p^{s i}}` or `Y^i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyFile {
    pub s: u32,
    pub coeffs: Vec<Vec<u32>>,
}

fn elems(ctx: &FieldCtx, digits: &[Vec<u32>]) -> Result<Vec<FqElem>> {
    digits.iter().map(|d| ctx.from_digits(d)).collect()
}

impl PolyFile {
    pub fn from_lin(l: &LinPoly) -> PolyFile {
        PolyFile {
            s: l.twist(),
            coeffs: l.coeffs().iter().map(|&c| l.ctx().digits(c)).collect(),
        }
    }

    pub fn from_skew(f: &SkewPoly) -> PolyFile {
        PolyFile {
            s: f.twist(),
            coeffs: f.coeffs().iter().map(|&c| f.ctx().digits(c)).collect(),
        }
    }

    pub fn to_lin(&self, ctx: &FieldCtx) -> Result<LinPoly> {
        LinPoly::new(ctx, self.s, elems(ctx, &self.coeffs)?)
    }

    pub fn to_skew(&self, ctx: &FieldCtx) -> Result<SkewPoly> {
        SkewPoly::new(ctx, self.s, elems(ctx, &self.coeffs)?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadTerm {
    pub i: usize,
    pub j: usize,
    pub coeff: Vec<u32>,
}

/// `Σ coeff X^{p^i + p^j} + lin + constant`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DoFile {
    pub quad: Vec<QuadTerm>,
    pub lin: Vec<Vec<u32>>,
    pub constant: Vec<u32>,
}

impl DoFile {
    pub fn from_do(d: &DOPoly) -> DoFile {
        let ctx = d.ctx();
        DoFile {
            quad: d
                .quad()
                .iter()
                .map(|(&(i, j), &c)| QuadTerm { i, j, coeff: ctx.digits(c) })
                .collect(),
            lin: d.lin().coeffs().iter().map(|&c| ctx.digits(c)).collect(),
            constant: ctx.digits(d.constant()),
        }
    }

    pub fn to_do(&self, ctx: &FieldCtx) -> Result<DOPoly> {
        let quad = self
            .quad
            .iter()
            .map(|t| Ok(((t.i, t.j), ctx.from_digits(&t.coeff)?)))
            .collect::<Result<Vec<_>>>()?;
        let lin = LinPoly::new(ctx, 1, elems(ctx, &self.lin)?)?;
        DOPoly::new(ctx, quad, &lin, ctx.from_digits(&self.constant)?)
    }
}

/// One monomial of a multivariate polynomial over F_p; `vars` are 0-based
/// variable indices (repeated for a square).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonoTerm {
    pub vars: Vec<usize>,
    pub coeff: u32,
}

fn multivariate_to_file(m: &MultivariateKey) -> Vec<Vec<MonoTerm>> {
    m.polys
        .iter()
        .map(|n| {
            n.terms
                .iter()
                .map(|(vars, &coeff)| MonoTerm { vars: vars.clone(), coeff })
                .collect()
        })
        .collect()
}

fn multivariate_from_file(ctx: &FieldCtx, polys: &[Vec<MonoTerm>]) -> Result<MultivariateKey> {
    if polys.len() != ctx.e() {
        return Err(Error::InvalidArgument(format!("expected {} multivariate polynomials", ctx.e())));
    }
    let mut out = Vec::new();
    for n in polys {
        let mut q = QuadForm::default();
        for t in n {
            if t.coeff >= ctx.p() || t.vars.len() > 2 || t.vars.iter().any(|&v| v >= ctx.e()) {
                return Err(Error::InvalidArgument(format!("bad multivariate term {t:?}")));
            }
            let mut vars = t.vars.clone();
            vars.sort_unstable();
            if t.coeff != 0 {
                q.terms.insert(vars, t.coeff);
            }
        }
        out.push(q);
    }
    Ok(MultivariateKey { p: ctx.p(), polys: out })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PublicKeyFile {
    pub field: FieldFile,
    #[serde(rename = "E")]
    pub e_poly: DoFile,
    pub multivariate: Vec<Vec<MonoTerm>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SecretKeyFile {
    #[serde(rename = "S")]
    pub s: PolyFile,
    #[serde(rename = "D")]
    pub d: DoFile,
    #[serde(rename = "T")]
    pub t: PolyFile,
    /// Degree bound on `D`.
    #[serde(rename = "d")]
    pub d_bound: u64,
}

/// Both halves; `secret` is optional so a public key alone also parses.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KeyFile {
    pub public: PublicKeyFile,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub secret: Option<SecretKeyFile>,
}

impl PublicKeyFile {
    pub fn from_key(k: &PublicKey) -> PublicKeyFile {
        PublicKeyFile {
            field: FieldFile::from_ctx(k.ctx()),
            e_poly: DoFile::from_do(&k.e_poly),
            multivariate: multivariate_to_file(&k.multivariate),
        }
    }

    pub fn to_key(&self) -> Result<PublicKey> {
        let ctx = self.field.to_ctx()?;
        Ok(PublicKey {
            e_poly: self.e_poly.to_do(&ctx)?,
            multivariate: multivariate_from_file(&ctx, &self.multivariate)?,
        })
    }
}

impl SecretKeyFile {
    pub fn from_key(k: &SecretKey) -> SecretKeyFile {
        SecretKeyFile {
            s: PolyFile::from_lin(&k.s),
            d: DoFile::from_do(&k.d),
            t: PolyFile::from_lin(&k.t),
            d_bound: k.bound,
        }
    }

    pub fn to_key(&self, ctx: &FieldCtx) -> Result<SecretKey> {
        SecretKey::new(self.s.to_lin(ctx)?, self.d.to_do(ctx)?, self.t.to_lin(ctx)?, self.d_bound)
    }
}

impl KeyFile {
    pub fn from_pair(kp: &HfeKeyPair) -> KeyFile {
        KeyFile {
            public: PublicKeyFile::from_key(&kp.public),
            secret: Some(SecretKeyFile::from_key(&kp.secret)),
        }
    }

    pub fn to_pair(&self) -> Result<HfeKeyPair> {
        let public = self.public.to_key()?;
        let secret = self
            .secret
            .as_ref()
            .ok_or_else(|| Error::InvalidArgument("key file has no secret part".into()))?
            .to_key(public.ctx())?;
        Ok(HfeKeyPair { public, secret })
    }
}

/// Parses JSON, reporting syntax and shape errors with line and column.
pub fn from_json<T: DeserializeOwned>(text: &str) -> Result<T> {
    Ok(serde_json::from_str(text)?)
}

/// Pretty-printed JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data serializes");
    s.push('\n');
    s
}

pub fn field_to_json(ctx: &FieldCtx) -> String {
    to_json(&FieldFile::from_ctx(ctx))
}

pub fn field_from_json(text: &str) -> Result<FieldCtx> {
    from_json::<FieldFile>(text)?.to_ctx()
}

pub fn lin_to_json(l: &LinPoly) -> String {
    to_json(&PolyFile::from_lin(l))
}

pub fn lin_from_json(text: &str, ctx: &FieldCtx) -> Result<LinPoly> {
    from_json::<PolyFile>(text)?.to_lin(ctx)
}

pub fn skew_to_json(f: &SkewPoly) -> String {
    to_json(&PolyFile::from_skew(f))
}

pub fn skew_from_json(text: &str, ctx: &FieldCtx) -> Result<SkewPoly> {
    from_json::<PolyFile>(text)?.to_skew(ctx)
}

pub fn do_to_json(d: &DOPoly) -> String {
    to_json(&DoFile::from_do(d))
}

pub fn do_from_json(text: &str, ctx: &FieldCtx) -> Result<DOPoly> {
    from_json::<DoFile>(text)?.to_do(ctx)
}

pub fn keypair_to_json(kp: &HfeKeyPair) -> String {
    to_json(&KeyFile::from_pair(kp))
}

pub fn keypair_from_json(text: &str) -> Result<HfeKeyPair> {
    from_json::<KeyFile>(text)?.to_pair()
}

pub fn element_from_json(text: &str, ctx: &FieldCtx) -> Result<FqElem> {
    ctx.from_digits(&from_json::<Vec<u32>>(text)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::SplitStats;
    use crate::hfe::hfe_keygen;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn field_roundtrip() {
        let f = FieldCtx::new(2, 4, None).unwrap();
        let text = field_to_json(&f);
        assert_eq!(field_from_json(&text).unwrap(), f);
        let g = f.with_basis(&[f.elem(3), f.elem(2), f.elem(4), f.elem(8)]).unwrap();
        assert_eq!(field_from_json(&field_to_json(&g)).unwrap(), g);
    }

    #[test]
    fn field_file_example() {
        let f = field_from_json(r#"{"p":2,"e":4,"modulus":[1,1,0,0,1]}"#).unwrap();
        assert_eq!(f.order(), 16);
        assert_eq!(f.digits(f.elem(3)), vec![1, 1, 0, 0]);
    }

    #[test]
    fn linpoly_roundtrip_gf16() {
        let f = FieldCtx::new(2, 4, None).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for i in 0..100usize {
            let l = LinPoly::random(&f, 1 + (i % 3) as u32, i % 7, &mut rng);
            assert_eq!(lin_from_json(&lin_to_json(&l), &f).unwrap(), l);
            let s = crate::skew::phi_map(&l);
            assert_eq!(skew_from_json(&skew_to_json(&s), &f).unwrap(), s);
        }
    }

    #[test]
    fn keypair_roundtrip() {
        let f = FieldCtx::new(3, 2, None).unwrap();
        let kp = hfe_keygen(&f, 81, &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
        let text = keypair_to_json(&kp);
        assert_eq!(keypair_from_json(&text).unwrap(), kp);
        assert_eq!(do_from_json(&do_to_json(&kp.secret.d), &f).unwrap(), kp.secret.d);
    }

    #[test]
    fn stats_roundtrip() {
        let s = SplitStats {
            trials: 10,
            first_try_successes: 7,
            mean_tries: 1.25,
            ci95: [0.39, 0.89],
            seed: 3,
        };
        assert_eq!(from_json::<SplitStats>(&to_json(&s)).unwrap(), s);
    }

    #[test]
    fn malformed_reports_position() {
        match field_from_json("{\n  \"p\": 2,\n  \"e\": }") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn reducible_modulus_is_domain_error() {
        assert_eq!(
            field_from_json(r#"{"p":2,"e":2,"modulus":[1,0,1]}"#),
            Err(Error::ReducibleModulus)
        );
    }
}
