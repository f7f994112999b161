//! Milnor K-theory elements as integer combinations of symbols.
//!
//! A [`MilnorElement`] is a formal sum `sum c_i {g_i1, ..., g_im}`. The
//! relations (multilinearity, Steinberg) are never applied by the formal
//! arithmetic; equality in `K_m` is decided by [`canonical`], which computes
//! a complete invariant over finite fields and over `F_q(t)`.

mod canonical;
mod tame;
mod transfer;

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::field::{Field, FieldError};

pub use canonical::{canonical, CanonicalForm, Canonicalize, FiniteCanonical, FiniteValue, FunctionCanonical};
pub use tame::{residue_field_of, tame_symbol, tame_symbol_two_entries, Place};
pub use transfer::{norm_from_quotient, restriction, transfer};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MilnorError {
    #[error("symbol entry {0} is zero")]
    ZeroEntry(usize),
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(String, String),
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("tame symbol needs degree at least 1")]
    DegreeZeroResidue,
    #[error("place {0} is not a place of {1}")]
    BadPlace(String, String),
    #[error("unsupported transfer: {0}")]
    UnsupportedTransfer(String),
    #[error("unsupported field for canonical forms: {0}")]
    UnsupportedField(String),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// A formal integer combination of symbols of a fixed degree.
#[derive(Clone, PartialEq)]
pub struct MilnorElement<F: Field> {
    field: F,
    degree: usize,
    terms: BTreeMap<Vec<F::Elem>, i64>,
}

impl<F: Field> MilnorElement<F> {
    pub fn zero(field: &F, degree: usize) -> Self {
        MilnorElement { field: field.clone(), degree, terms: BTreeMap::new() }
    }

    /// The class `n * {}` in `K_0 = Z`.
    pub fn integer(field: &F, n: i64) -> Self {
        Self::zero(field, 0).plus_term(Vec::new(), n)
    }

    /// The single symbol `{entries}`. Any entry equal to 1 gives the zero
    /// element of the same degree.
    pub fn symbol(field: &F, entries: Vec<F::Elem>) -> Result<Self, MilnorError> {
        if let Some(i) = entries.iter().position(|e| field.is_zero(e)) {
            return Err(MilnorError::ZeroEntry(i));
        }
        Ok(Self::zero(field, entries.len()).plus_term(entries, 1))
    }

    /// Sum of `(coefficient, entries)` terms.
    pub fn from_terms(
        field: &F,
        degree: usize,
        terms: impl IntoIterator<Item = (i64, Vec<F::Elem>)>,
    ) -> Result<Self, MilnorError> {
        let mut out = Self::zero(field, degree);
        for (c, entries) in terms {
            if entries.len() != degree {
                return Err(MilnorError::DegreeMismatch(degree, entries.len()));
            }
            if let Some(i) = entries.iter().position(|e| field.is_zero(e)) {
                return Err(MilnorError::ZeroEntry(i));
            }
            out = out.plus_term(entries, c);
        }
        Ok(out)
    }

    fn plus_term(mut self, entries: Vec<F::Elem>, c: i64) -> Self {
        if c == 0 || entries.iter().any(|e| self.field.is_one(e)) {
            return self;
        }
        let total = self.terms.get(&entries).copied().unwrap_or(0) + c;
        if total == 0 {
            self.terms.remove(&entries);
        } else {
            self.terms.insert(entries, total);
        }
        self
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<F::Elem>, i64)> {
        self.terms.iter().map(|(k, v)| (k, *v))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Formally zero (no surviving terms). Not the same as zero in `K_m`.
    pub fn is_formally_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn check_compatible(&self, o: &Self) -> Result<(), MilnorError> {
        if self.field != o.field {
            return Err(MilnorError::FieldMismatch(self.field.name(), o.field.name()));
        }
        if self.degree != o.degree {
            return Err(MilnorError::DegreeMismatch(self.degree, o.degree));
        }
        Ok(())
    }

    pub fn add(&self, o: &Self) -> Result<Self, MilnorError> {
        self.check_compatible(o)?;
        Ok(o.terms.iter().fold(self.clone(), |acc, (k, c)| acc.plus_term(k.clone(), *c)))
    }

    pub fn neg(&self) -> Self {
        self.scale(-1)
    }

    pub fn sub(&self, o: &Self) -> Result<Self, MilnorError> {
        self.add(&o.neg())
    }

    pub fn scale(&self, n: i64) -> Self {
        let mut out = Self::zero(&self.field, self.degree);
        if n != 0 {
            out.terms = self.terms.iter().map(|(k, c)| (k.clone(), c * n)).collect();
        }
        out
    }

    /// Juxtaposition `{a...} * {b...} = {a..., b...}`, extended bilinearly.
    pub fn concat_product(&self, o: &Self) -> Result<Self, MilnorError> {
        if self.field != o.field {
            return Err(MilnorError::FieldMismatch(self.field.name(), o.field.name()));
        }
        let mut out = Self::zero(&self.field, self.degree + o.degree);
        for (a, ca) in &self.terms {
            for (b, cb) in &o.terms {
                let mut e = a.clone();
                e.extend(b.iter().cloned());
                out = out.plus_term(e, ca * cb);
            }
        }
        Ok(out)
    }

    /// Entrywise image under a field map.
    pub fn map_entries<G: Field>(
        &self,
        target: &G,
        f: impl Fn(&F::Elem) -> Result<G::Elem, MilnorError>,
    ) -> Result<MilnorElement<G>, MilnorError> {
        let mut out = MilnorElement::zero(target, self.degree);
        for (entries, c) in &self.terms {
            let mapped = entries.iter().map(&f).collect::<Result<Vec<_>, _>>()?;
            if let Some(i) = mapped.iter().position(|e| target.is_zero(e)) {
                return Err(MilnorError::ZeroEntry(i));
            }
            out = out.plus_term(mapped, *c);
        }
        Ok(out)
    }
}

impl<F: Field> fmt::Display for MilnorElement<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (entries, c)) in self.terms.iter().enumerate() {
            let sign = if *c < 0 {
                "-"
            } else if i > 0 {
                "+"
            } else {
                ""
            };
            f.write_str(sign)?;
            if c.abs() != 1 {
                write!(f, "{}*", c.abs())?;
            }
            let body: Vec<String> = entries.iter().map(|e| self.field.format_elem(e)).collect();
            write!(f, "{{{}}}", body.join(", "))?;
        }
        Ok(())
    }
}

impl<F: Field> fmt::Debug for MilnorElement<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MilnorElement[{}; K{}]({})", self.field.name(), self.degree, self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FiniteField;

    #[test]
    fn symbol_constructor() {
        let f7 = FiniteField::prime(7).unwrap();
        let s = MilnorElement::symbol(&f7, vec![2, 3]).unwrap();
        assert_eq!(s.degree(), 2);
        assert_eq!(s.terms().collect::<Vec<_>>(), vec![(&vec![2, 3], 1)]);
        assert!(MilnorElement::symbol(&f7, vec![2, 1]).unwrap().is_formally_zero());
        assert_eq!(MilnorElement::symbol(&f7, vec![2, 0]), Err(MilnorError::ZeroEntry(1)));
        let unit = MilnorElement::symbol(&f7, vec![]).unwrap();
        assert_eq!(unit, MilnorElement::integer(&f7, 1));
    }

    #[test]
    fn group_and_product() {
        let f7 = FiniteField::prime(7).unwrap();
        let a = MilnorElement::symbol(&f7, vec![2]).unwrap();
        let b = MilnorElement::symbol(&f7, vec![3]).unwrap();
        let c = MilnorElement::symbol(&f7, vec![5]).unwrap();
        assert_eq!(a.concat_product(&b).unwrap(), MilnorElement::symbol(&f7, vec![2, 3]).unwrap());
        assert!(a.add(&a.neg()).unwrap().is_formally_zero());
        let lhs = a.add(&b).unwrap().concat_product(&c).unwrap();
        let rhs = MilnorElement::symbol(&f7, vec![2, 5])
            .unwrap()
            .add(&MilnorElement::symbol(&f7, vec![3, 5]).unwrap())
            .unwrap();
        assert_eq!(lhs, rhs);
        assert!(matches!(a.add(&lhs), Err(MilnorError::DegreeMismatch(1, 2))));
        let f5 = FiniteField::prime(5).unwrap();
        let d = MilnorElement::symbol(&f5, vec![2]).unwrap();
        assert!(matches!(a.add(&d), Err(MilnorError::FieldMismatch(..))));
    }
}
