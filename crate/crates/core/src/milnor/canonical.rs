//! Complete invariants for `K_m` of finite fields and of `F_q(t)`.
//!
//! Over `F_q`: `K_0 = Z`, `K_1 = F_q^*` (recorded as a discrete log against
//! the cached generator) and `K_m = 0` for `m >= 2`.
//!
//! Over `F_q(t)` the exact sequence
//! `0 -> K_m(F_q) -> K_m(F_q(t)) -> (+)_pi K_{m-1}(F_q[t]/pi) -> 0`
//! is split by the map sending `{g_1, .., g_m}` to `{lc g_1, .., lc g_m}`
//! (it respects multiplicativity and kills Steinberg symbols, since
//! `lc(1 - g)` is `1 - lc g`, `-lc g` or `1`). An element is therefore
//! determined by that constant part together with its residues at all finite
//! places, which is what [`FunctionCanonical`] records.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::field::{poly_factor, Field, FiniteField, Poly, RatFunc, RationalFunctionField};

use super::{tame_symbol, MilnorElement, MilnorError, Place};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FiniteValue {
    /// `K_0 = Z`.
    Rank(i64),
    /// `K_1`: the class `gen^exp`, `exp` in `[0, q-2]`.
    Exponent(u64),
    /// `K_m` with `m >= 2`.
    Zero,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteCanonical {
    pub field: FiniteField,
    pub degree: usize,
    pub value: FiniteValue,
}

impl FiniteCanonical {
    pub fn is_zero(&self) -> bool {
        matches!(self.value, FiniteValue::Zero | FiniteValue::Rank(0) | FiniteValue::Exponent(0))
    }

    /// The class as a single symbol (or integer), for display and round trips.
    pub fn to_element(&self) -> Result<MilnorElement<FiniteField>, MilnorError> {
        let k = &self.field;
        Ok(match self.value {
            FiniteValue::Rank(n) => MilnorElement::integer(k, n),
            FiniteValue::Exponent(e) => MilnorElement::symbol(k, vec![k.pow(&k.generator()?, e as u128)])?,
            FiniteValue::Zero => MilnorElement::zero(k, self.degree),
        })
    }
}

impl fmt::Display for FiniteCanonical {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.value {
            FiniteValue::Rank(n) => write!(f, "K0 rank={n}"),
            FiniteValue::Exponent(e) => {
                let g = self.field.generator().map_err(|_| fmt::Error)?;
                write!(f, "K1 exp={e} mod={} gen={}", self.field.order() - 1, self.field.format_elem(&g))
            }
            FiniteValue::Zero => write!(f, "K{} zero", self.degree),
        }
    }
}

/// Canonical form over `F_q(t)`: the constant part and the nonzero residues
/// at finite places, keyed by monic irreducible polynomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionCanonical {
    pub field: RationalFunctionField<FiniteField>,
    pub degree: usize,
    pub constant: FiniteCanonical,
    pub places: BTreeMap<Poly<FiniteField>, FiniteCanonical>,
}

impl FunctionCanonical {
    pub fn is_zero(&self) -> bool {
        self.constant.is_zero() && self.places.is_empty()
    }
}

impl fmt::Display for FunctionCanonical {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "K{} over {}\nconstant={}", self.degree, self.field.name(), self.constant)?;
        for (pi, value) in &self.places {
            write!(f, "\nplace={} value={}", pi.format(self.field.var()), value)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CanonicalForm {
    Finite(FiniteCanonical),
    Function(FunctionCanonical),
}

impl CanonicalForm {
    pub fn is_zero(&self) -> bool {
        match self {
            CanonicalForm::Finite(c) => c.is_zero(),
            CanonicalForm::Function(c) => c.is_zero(),
        }
    }

    pub fn degree(&self) -> usize {
        match self {
            CanonicalForm::Finite(c) => c.degree,
            CanonicalForm::Function(c) => c.degree,
        }
    }
}

impl fmt::Display for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CanonicalForm::Finite(c) => c.fmt(f),
            CanonicalForm::Function(c) => c.fmt(f),
        }
    }
}

/// Fields with a computable canonical form for Milnor K-groups.
pub trait Canonicalize: Field {
    fn canonical_form(&self, a: &MilnorElement<Self>) -> Result<CanonicalForm, MilnorError>;
}

pub fn canonical<F: Canonicalize>(a: &MilnorElement<F>) -> Result<CanonicalForm, MilnorError> {
    a.field().canonical_form(a)
}

pub(crate) fn finite_canonical(a: &MilnorElement<FiniteField>) -> Result<FiniteCanonical, MilnorError> {
    let k = a.field().clone();
    let value = match a.degree() {
        0 => FiniteValue::Rank(a.terms().map(|(_, c)| c).sum()),
        1 => {
            let order = (k.order() - 1) as i128;
            let mut acc: i128 = 0;
            for (entries, c) in a.terms() {
                acc = (acc + c as i128 * k.log(entries[0])? as i128).rem_euclid(order);
            }
            FiniteValue::Exponent(acc as u64)
        }
        _ => FiniteValue::Zero,
    };
    Ok(FiniteCanonical { field: k, degree: a.degree(), value })
}

impl Canonicalize for FiniteField {
    fn canonical_form(&self, a: &MilnorElement<Self>) -> Result<CanonicalForm, MilnorError> {
        finite_canonical(a).map(CanonicalForm::Finite)
    }
}

fn irreducible_support(g: &RatFunc<FiniteField>, into: &mut BTreeSet<Poly<FiniteField>>) -> Result<(), MilnorError> {
    for p in [g.num(), g.den()] {
        if p.deg() > 0 {
            into.extend(poly_factor(p)?.factors.into_iter().map(|(pi, _)| pi));
        }
    }
    Ok(())
}

impl Canonicalize for RationalFunctionField<FiniteField> {
    fn canonical_form(&self, a: &MilnorElement<Self>) -> Result<CanonicalForm, MilnorError> {
        let base = self.base();
        let leading = a.map_entries(base, |g| Ok(g.lc()))?;
        let constant = finite_canonical(&leading)?;
        let mut places = BTreeMap::new();
        // residues land in K_{m-1} of a finite field, which vanishes for m >= 3
        if (1..=2).contains(&a.degree()) {
            let mut support = BTreeSet::new();
            let mut seen = BTreeSet::new();
            for (entries, _) in a.terms() {
                for g in entries {
                    if seen.insert(g.clone()) {
                        irreducible_support(g, &mut support)?;
                    }
                }
            }
            for pi in support {
                let residue = finite_canonical(&tame_symbol(a, &Place::Finite(pi.clone()))?)?;
                if !residue.is_zero() {
                    places.insert(pi, residue);
                }
            }
        }
        Ok(CanonicalForm::Function(FunctionCanonical { field: self.clone(), degree: a.degree(), constant, places }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finite_k1_example() {
        let f7 = FiniteField::prime(7).unwrap();
        let a =
            MilnorElement::symbol(&f7, vec![2]).unwrap().add(&MilnorElement::symbol(&f7, vec![3]).unwrap()).unwrap();
        let c = canonical(&a).unwrap();
        assert_eq!(c.to_string(), "K1 exp=3 mod=6 gen=3");
        // 2*3 = 6 = 3^3
        assert_eq!(c, canonical(&MilnorElement::symbol(&f7, vec![6]).unwrap()).unwrap());
    }

    #[test]
    fn finite_k0_and_k2() {
        let f5 = FiniteField::prime(5).unwrap();
        let a = MilnorElement::integer(&f5, 3).add(&MilnorElement::integer(&f5, -5)).unwrap();
        assert_eq!(canonical(&a).unwrap().to_string(), "K0 rank=-2");
        let b = MilnorElement::symbol(&f5, vec![2, 3]).unwrap();
        assert_eq!(canonical(&b).unwrap().to_string(), "K2 zero");
        assert!(canonical(&b).unwrap().is_zero());
    }

    #[test]
    fn steinberg_and_antisymmetry_over_function_field() {
        let k = FiniteField::prime(5).unwrap();
        let kt = RationalFunctionField::new(k.clone(), "t");
        let f = kt.fraction(Poly::from_ints(&k, &[2, 3, 1]), Poly::from_ints(&k, &[1, 0, 0, 2])).unwrap();
        let g = kt.from_poly(Poly::from_ints(&k, &[3, 1]));
        let steinberg = MilnorElement::symbol(&kt, vec![f.clone(), kt.one().sub(&f)]).unwrap();
        assert!(canonical(&steinberg).unwrap().is_zero());
        let sum = MilnorElement::symbol(&kt, vec![f.clone(), g.clone()])
            .unwrap()
            .add(&MilnorElement::symbol(&kt, vec![g.clone(), f.clone()]).unwrap())
            .unwrap();
        assert!(canonical(&sum).unwrap().is_zero());
        let square = MilnorElement::symbol(&kt, vec![f.clone(), f.clone()]).unwrap();
        let minus = MilnorElement::symbol(&kt, vec![f.clone(), kt.from_int(-1)]).unwrap();
        assert_eq!(canonical(&square).unwrap(), canonical(&minus).unwrap());
    }

    #[test]
    fn function_field_k1_is_divisor_and_constant() {
        let k = FiniteField::prime(7).unwrap();
        let kt = RationalFunctionField::new(k.clone(), "t");
        let g = kt.fraction(Poly::from_ints(&k, &[3, 0, 3]), Poly::linear(&k, &2).pow(2)).unwrap();
        let c = canonical(&MilnorElement::symbol(&kt, vec![g]).unwrap()).unwrap();
        let CanonicalForm::Function(c) = c else { panic!() };
        assert_eq!(c.constant, finite_canonical(&MilnorElement::symbol(&k, vec![3]).unwrap()).unwrap());
        assert_eq!(c.places.len(), 2);
        assert_eq!(c.places[&Poly::linear(&k, &2)].value, FiniteValue::Rank(-2));
    }
}
