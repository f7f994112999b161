//! Level-one framed correspondences over a point.
//!
//! A datum is a framing polynomial `f(x)` over the base together with target
//! functions `g_1..g_m` invertible on `Z = V(f)`. [`rho`] sums the transferred
//! symbols `d_i Tr{g_1(z_i), .., g_m(z_i)}` over the support points `z_i` of
//! multiplicity `d_i`; [`sigma`] embeds symbols as data with `f = x`.

mod homotopy;

use std::collections::BTreeSet;

use thiserror::Error;

use crate::field::{poly_factor, poly_resultant, Field, FieldError, FiniteField, Poly, RatFunc, RationalFunctionField};
use crate::milnor::{canonical, norm_from_quotient, transfer, CanonicalForm, Canonicalize, MilnorElement, MilnorError};

pub use homotopy::{
    homotopy_check, multilinearity_family, random_strict_family, HomotopyDatum, HomotopyMode, HomotopyReport,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FramedError {
    #[error("framing polynomial is zero")]
    ZeroFraming,
    #[error("entry {0} is zero")]
    ZeroEntry(usize),
    #[error("g_{index} is not invertible on the support: common factor {factor}")]
    NotInvertible { index: usize, factor: String },
    #[error("invalid family: {0}")]
    BadFamily(String),
    #[error("family is not strict: {0}")]
    NotStrict(String),
    #[error("specialization at t = {at} fails: {reason}")]
    Specialization { at: String, reason: String },
    #[error(transparent)]
    Milnor(#[from] MilnorError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// How the residue field at a support point is realized.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Residue<K: Field> {
    /// Degree one: the point is the root, the residue field is the base.
    Rational(K::Elem),
    /// A proper finite extension `F_q[x]/(pi)`.
    Finite(FiniteField),
    /// Factors of degree at least two over `F_q(u)`, kept together; only
    /// norms (`m <= 1`) are computed on such a cluster.
    Cluster,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupportPoint<K: Field> {
    pub pi: Poly<K>,
    pub multiplicity: usize,
    pub residue: Residue<K>,
}

impl<K: Field> SupportPoint<K> {
    pub fn residue_name(&self, base: &K) -> String {
        match &self.residue {
            Residue::Rational(_) => base.name(),
            Residue::Finite(f) => f.name(),
            Residue::Cluster => format!("{}[x]/({})", base.name(), self.pi.format("x")),
        }
    }
}

/// Bases over which support points and transferred symbols are computable.
pub trait FramedBase: Canonicalize {
    fn support_points(&self, f: &Poly<Self>) -> Result<Vec<SupportPoint<Self>>, FramedError>;

    /// `Tr{g_1 mod pi, .., g_m mod pi}` for a single point, multiplicity
    /// not applied.
    fn local_symbol(
        &self,
        point: &SupportPoint<Self>,
        targets: &[RatFunc<Self>],
    ) -> Result<MilnorElement<Self>, FramedError>;
}

fn evaluate_at_root<K: Field>(
    base: &K,
    root: &K::Elem,
    targets: &[RatFunc<K>],
) -> Result<MilnorElement<K>, FramedError> {
    let values = targets.iter().map(|g| g.eval(root).expect("invertible on the support")).collect();
    Ok(MilnorElement::symbol(base, values)?)
}

impl FramedBase for FiniteField {
    fn support_points(&self, f: &Poly<Self>) -> Result<Vec<SupportPoint<Self>>, FramedError> {
        if f.deg() == 0 {
            return Ok(Vec::new());
        }
        poly_factor(f)?
            .factors
            .into_iter()
            .map(|(pi, d)| {
                let residue = if pi.deg() == 1 {
                    Residue::Rational(self.neg(&pi.coeff(0)))
                } else {
                    Residue::Finite(FiniteField::residue_field(self, &pi, "x")?)
                };
                Ok(SupportPoint { pi, multiplicity: d, residue })
            })
            .collect()
    }

    fn local_symbol(
        &self,
        point: &SupportPoint<Self>,
        targets: &[RatFunc<Self>],
    ) -> Result<MilnorElement<Self>, FramedError> {
        match &point.residue {
            Residue::Rational(root) => evaluate_at_root(self, root, targets),
            Residue::Finite(residue) => {
                let values = targets
                    .iter()
                    .map(|g| crate::field::reduce_into(g, &point.pi, residue).expect("invertible on the support"))
                    .collect();
                Ok(transfer(&MilnorElement::symbol(residue, values)?, self)?)
            }
            Residue::Cluster => unreachable!("finite fields factor completely"),
        }
    }
}

type FunctionField = RationalFunctionField<FiniteField>;

fn lcm(a: &Poly<FiniteField>, b: &Poly<FiniteField>) -> Poly<FiniteField> {
    a.mul(b).div_exact(&a.gcd(b)).expect("gcd divides").monic()
}

fn monic_divisors(p: &Poly<FiniteField>) -> Result<Vec<Poly<FiniteField>>, FieldError> {
    let mut out = vec![Poly::one(p.field())];
    for (pi, e) in poly_factor(p)?.factors {
        let mut next = Vec::with_capacity(out.len() * (e + 1));
        for d in &out {
            let mut cur = d.clone();
            next.push(cur.clone());
            for _ in 0..e {
                cur = cur.mul(&pi);
                next.push(cur.clone());
            }
        }
        out = next;
    }
    Ok(out)
}

/// Roots in `F_q(u)` of a polynomial with `F_q(u)` coefficients, by the
/// rational root theorem over `F_q[u]`.
fn rational_root_candidates(f: &Poly<FunctionField>) -> Result<BTreeSet<RatFunc<FiniteField>>, FieldError> {
    let kt = f.field();
    let k = kt.base();
    let common = f.coeffs().iter().fold(Poly::one(k), |acc, c| lcm(&acc, c.den()));
    let cleared: Vec<Poly<FiniteField>> =
        f.coeffs().iter().map(|c| c.num().mul(&common.div_exact(c.den()).expect("den divides lcm"))).collect();
    let mut out = BTreeSet::new();
    let Some(low) = cleared.iter().position(|c| !c.is_zero()) else {
        return Ok(out);
    };
    if low > 0 {
        out.insert(kt.zero());
    }
    let (a0, an) = (&cleared[low], cleared.last().expect("nonzero"));
    let tops = monic_divisors(a0)?;
    let bottoms = monic_divisors(an)?;
    for a in &tops {
        for b in &bottoms {
            if a.gcd(b).deg() > 0 {
                continue;
            }
            for c in k.nonzero_elements() {
                out.insert(RatFunc::new(a.scale(&c), b.clone())?);
            }
        }
    }
    Ok(out)
}

impl FramedBase for FunctionField {
    fn support_points(&self, f: &Poly<Self>) -> Result<Vec<SupportPoint<Self>>, FramedError> {
        if f.deg() == 0 {
            return Ok(Vec::new());
        }
        let mut rest = f.monic();
        let mut out = Vec::new();
        for r in rational_root_candidates(&rest)? {
            let lin = Poly::linear(self, &r);
            let mut d = 0;
            while rest.deg() > 0 {
                let (q, rem) = rest.div_rem(&lin)?;
                if !rem.is_zero() {
                    break;
                }
                rest = q;
                d += 1;
            }
            if d > 0 {
                out.push(SupportPoint { pi: lin, multiplicity: d, residue: Residue::Rational(r) });
            }
        }
        out.sort_by(|a, b| a.pi.cmp(&b.pi));
        if rest.deg() > 0 {
            out.push(SupportPoint { pi: rest, multiplicity: 1, residue: Residue::Cluster });
        }
        Ok(out)
    }

    fn local_symbol(
        &self,
        point: &SupportPoint<Self>,
        targets: &[RatFunc<Self>],
    ) -> Result<MilnorElement<Self>, FramedError> {
        match &point.residue {
            Residue::Rational(root) => evaluate_at_root(self, root, targets),
            Residue::Cluster => match targets {
                [] => Ok(MilnorElement::integer(self, point.pi.deg() as i64)),
                [g] => Ok(MilnorElement::symbol(self, vec![norm_from_quotient(&point.pi, g)?])?),
                _ => Err(MilnorError::UnsupportedTransfer(format!(
                    "K_{} norm from {} of degree {} over {}",
                    targets.len(),
                    point.residue_name(self),
                    point.pi.deg(),
                    self.name()
                ))
                .into()),
            },
            Residue::Finite(_) => unreachable!("function-field points are rational or clustered"),
        }
    }
}

/// A framing polynomial with target functions invertible on its zero set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FramedDatum<K: Field> {
    base: K,
    framing: Poly<K>,
    targets: Vec<RatFunc<K>>,
}

impl<K: Field> FramedDatum<K> {
    pub fn new(framing: Poly<K>, targets: Vec<RatFunc<K>>) -> Result<Self, FramedError> {
        let base = framing.field().clone();
        if framing.is_zero() {
            return Err(FramedError::ZeroFraming);
        }
        for (i, g) in targets.iter().enumerate() {
            if g.is_zero() {
                return Err(FramedError::ZeroEntry(i + 1));
            }
            for p in [g.num(), g.den()] {
                if base.is_zero(&poly_resultant(&framing, p)?) {
                    let factor = framing.gcd(p).format("x");
                    return Err(FramedError::NotInvertible { index: i + 1, factor });
                }
            }
        }
        Ok(FramedDatum { base, framing, targets })
    }

    pub fn base(&self) -> &K {
        &self.base
    }

    pub fn framing(&self) -> &Poly<K> {
        &self.framing
    }

    pub fn targets(&self) -> &[RatFunc<K>] {
        &self.targets
    }

    pub fn degree(&self) -> usize {
        self.targets.len()
    }
}

/// `f = x` with constant targets.
pub fn sigma<K: Field>(base: &K, entries: Vec<K::Elem>) -> Result<FramedDatum<K>, FramedError> {
    if let Some(i) = entries.iter().position(|e| base.is_zero(e)) {
        return Err(FramedError::ZeroEntry(i + 1));
    }
    let targets = entries.into_iter().map(|e| RatFunc::constant(base, e)).collect();
    FramedDatum::new(Poly::x(base), targets)
}

pub fn support<K: FramedBase>(d: &FramedDatum<K>) -> Result<Vec<SupportPoint<K>>, FramedError> {
    d.base.support_points(&d.framing)
}

/// `sum_i d_i Tr{g(z_i)}` before normalization.
pub fn rho_element<K: FramedBase>(d: &FramedDatum<K>) -> Result<MilnorElement<K>, FramedError> {
    let mut acc = MilnorElement::zero(&d.base, d.degree());
    for point in support(d)? {
        let local = d.base.local_symbol(&point, &d.targets)?;
        acc = acc.add(&local.scale(point.multiplicity as i64))?;
    }
    Ok(acc)
}

pub fn rho<K: FramedBase>(d: &FramedDatum<K>) -> Result<CanonicalForm, FramedError> {
    Ok(canonical(&rho_element(d)?)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn class(k: &FiniteField, a: u64) -> CanonicalForm {
        canonical(&MilnorElement::symbol(k, vec![a]).unwrap()).unwrap()
    }

    #[test]
    fn support_examples() {
        let f7 = FiniteField::prime(7).unwrap();
        let f = Poly::linear(&f7, &2).pow(2).mul(&Poly::linear(&f7, &3));
        let d = FramedDatum::new(f, vec![]).unwrap();
        let pts = support(&d).unwrap();
        assert_eq!(pts.len(), 2);
        assert_eq!((pts[0].pi.clone(), pts[0].multiplicity), (Poly::linear(&f7, &3), 1));
        assert_eq!((pts[1].pi.clone(), pts[1].multiplicity), (Poly::linear(&f7, &2), 2));

        let f3 = FiniteField::prime(3).unwrap();
        let d = FramedDatum::new(Poly::from_ints(&f3, &[1, 0, 1]), vec![]).unwrap();
        let pts = support(&d).unwrap();
        assert_eq!(pts.len(), 1);
        assert_eq!(pts[0].residue_name(&f3), "F3[x]/(x^2+1)");

        let d = FramedDatum::new(Poly::x(&f7).scale(&5), vec![]).unwrap();
        assert_eq!(support(&d).unwrap()[0].pi, Poly::x(&f7));
    }

    #[test]
    fn rho_examples() {
        let f7 = FiniteField::prime(7).unwrap();
        let f = Poly::linear(&f7, &2).pow(2).mul(&Poly::linear(&f7, &3));
        let d = FramedDatum::new(f, vec![RatFunc::from_poly(Poly::x(&f7))]).unwrap();
        let r = rho(&d).unwrap();
        assert_eq!(r, class(&f7, 5));
        assert_eq!(r.to_string(), "K1 exp=5 mod=6 gen=3");

        let f3 = FiniteField::prime(3).unwrap();
        let d = FramedDatum::new(Poly::from_ints(&f3, &[1, 0, 1]), vec![RatFunc::from_poly(Poly::x(&f3))]).unwrap();
        assert!(rho(&d).unwrap().is_zero());
        let d0 = FramedDatum::new(Poly::from_ints(&f3, &[1, 0, 1]), vec![]).unwrap();
        assert_eq!(rho(&d0).unwrap().to_string(), "K0 rank=2");
    }

    #[test]
    fn sigma_round_trip() {
        let f7 = FiniteField::prime(7).unwrap();
        let d = sigma(&f7, vec![2, 3]).unwrap();
        assert_eq!(d.framing(), &Poly::x(&f7));
        assert_eq!(rho(&d).unwrap(), canonical(&MilnorElement::symbol(&f7, vec![2, 3]).unwrap()).unwrap());
        assert_eq!(rho(&sigma(&f7, vec![]).unwrap()).unwrap().to_string(), "K0 rank=1");
        assert!(rho(&sigma(&f7, vec![1]).unwrap()).unwrap().is_zero());
        assert_eq!(sigma(&f7, vec![2, 0]), Err(FramedError::ZeroEntry(2)));
    }

    #[test]
    fn invertibility_violation() {
        let f7 = FiniteField::prime(7).unwrap();
        let f = Poly::linear(&f7, &2).mul(&Poly::linear(&f7, &3));
        let g = RatFunc::new(Poly::one(&f7), Poly::linear(&f7, &3)).unwrap();
        let err = FramedDatum::new(f, vec![RatFunc::from_poly(Poly::x(&f7)), g]).unwrap_err();
        assert_eq!(err, FramedError::NotInvertible { index: 2, factor: "x+4".into() });
    }

    #[test]
    fn function_field_base() {
        let f5 = FiniteField::prime(5).unwrap();
        let ku = RationalFunctionField::new(f5.clone(), "u");
        let u = ku.variable();
        let one_plus_u = RatFunc::from_poly(Poly::from_ints(&f5, &[1, 1]));
        // f = (x - u)(x - (u+1)/u) (x^2 - u), g = x
        let r2 = one_plus_u.div(&u).unwrap();
        let quad = Poly::new(&ku, vec![u.neg(), ku.zero(), ku.one()]);
        let f = Poly::linear(&ku, &u).mul(&Poly::linear(&ku, &r2)).mul(&quad);
        let d = FramedDatum::new(f, vec![RatFunc::from_poly(Poly::x(&ku))]).unwrap();
        let pts = support(&d).unwrap();
        assert_eq!(pts.len(), 3);
        assert_eq!(pts[2].residue, Residue::Cluster);
        // u * (u+1)/u * N(sqrt u) = (u+1) * (-u)
        let expected = one_plus_u.mul(&u.neg());
        assert_eq!(rho(&d).unwrap(), canonical(&MilnorElement::symbol(&ku, vec![expected]).unwrap()).unwrap());
        let d2 = FramedDatum::new(d.framing().clone(), vec![RatFunc::from_poly(Poly::x(&ku)); 2]).unwrap();
        assert!(matches!(rho(&d2), Err(FramedError::Milnor(MilnorError::UnsupportedTransfer(_)))));
    }
}
