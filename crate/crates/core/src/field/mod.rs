//! Exact arithmetic in prime fields, finite extension towers, univariate
//! polynomial rings and rational function fields.
//!
//! Every field is a cheap-to-clone context object implementing [`Field`];
//! elements are plain values interpreted through that context. The dynamic
//! [`FieldDescriptor`] / [`FieldElement`] pair wraps the two user-facing
//! families (finite fields and `F_q(t)`) for the CLI and the C ABI.

mod dlog;
mod factor;
mod finite;
mod poly;
mod ratfunc;
mod resultant;

use std::fmt;
use std::hash::Hash;

use thiserror::Error;

pub use dlog::{discrete_log, find_generator};
pub use factor::{is_irreducible, poly_factor, smallest_irreducible, squarefree_decomposition, Factorization};
pub use finite::{FiniteField, MAX_FIELD_ORDER};
pub use poly::Poly;
pub(crate) use ratfunc::reduce_into;
pub use ratfunc::{reduce_mod, RatFunc, RationalFunctionField};
pub use resultant::poly_resultant;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("field descriptor mismatch: {0} vs {1}")]
    DescriptorMismatch(String, String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("zero polynomial has no factorization")]
    ZeroPolynomial,
    #[error("resultant of two zero polynomials is undefined")]
    BothZero,
    #[error("{0} is not a subfield of {1}")]
    NotSubfield(String, String),
    #[error("discrete logarithm of zero")]
    LogOfZero,
    #[error("element is not in the group generated by {0}")]
    NotInGroup(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus {0} is not monic irreducible")]
    ReducibleModulus(String),
    #[error("field order {0} exceeds the supported bound")]
    TooLarge(u128),
    #[error("zero at the point {0}")]
    ZeroAtPoint(String),
    #[error("pole at the point {0}")]
    PoleAtPoint(String),
    #[error("{0}")]
    Invalid(String),
}

/// A field context. Elements are values of [`Field::Elem`] and only have
/// meaning relative to the context that produced them.
pub trait Field: Clone + fmt::Debug + PartialEq + Eq + Send + Sync {
    type Elem: Clone + fmt::Debug + PartialEq + Eq + Hash + Ord + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// `None` exactly when `a` is zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    #[allow(clippy::wrong_self_convention)]
    fn from_int(&self, n: i64) -> Self::Elem;
    fn characteristic(&self) -> u64;
    fn format_elem(&self, a: &Self::Elem) -> String;
    /// Short human-readable name, e.g. `F7` or `F5(t)`.
    fn name(&self) -> String;

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }

    fn pow(&self, a: &Self::Elem, mut e: u128) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// Integer power allowing negative exponents on units.
    fn pow_signed(&self, a: &Self::Elem, e: i64) -> Option<Self::Elem> {
        if e >= 0 {
            Some(self.pow(a, e as u128))
        } else {
            self.inv(a).map(|ai| self.pow(&ai, e.unsigned_abs() as u128))
        }
    }
}

/// The user-facing field families.
#[derive(Debug, Clone, PartialEq)]
pub enum FieldDescriptor {
    /// `F_p` or `F_p[y]/(modulus)`.
    Finite(FiniteField),
    /// `F_q(t)` over a finite field.
    Function(RationalFunctionField<FiniteField>),
}

impl FieldDescriptor {
    pub fn name(&self) -> String {
        match self {
            FieldDescriptor::Finite(f) => f.name(),
            FieldDescriptor::Function(f) => f.name(),
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, FieldDescriptor::Finite(_))
    }
}

impl fmt::Display for FieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ElementValue {
    Finite(u64),
    Function(RatFunc<FiniteField>),
}

/// An element tagged with the field it lives in.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldElement {
    field: FieldDescriptor,
    value: ElementValue,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl FieldElement {
    pub fn finite(field: &FiniteField, value: u64) -> Result<Self, FieldError> {
        if value >= field.order() {
            return Err(FieldError::Invalid(format!("{value} is not an element index of {}", field.name())));
        }
        Ok(FieldElement { field: FieldDescriptor::Finite(field.clone()), value: ElementValue::Finite(value) })
    }

    pub fn function(field: &RationalFunctionField<FiniteField>, value: RatFunc<FiniteField>) -> Self {
        FieldElement { field: FieldDescriptor::Function(field.clone()), value: ElementValue::Function(value) }
    }

    pub fn field(&self) -> &FieldDescriptor {
        &self.field
    }

    pub fn value(&self) -> &ElementValue {
        &self.value
    }

    pub fn is_zero(&self) -> bool {
        match &self.value {
            ElementValue::Finite(v) => *v == 0,
            ElementValue::Function(r) => r.is_zero(),
        }
    }

    /// Multiplicative inverse.
    pub fn inverse(&self) -> Result<Self, FieldError> {
        let value = match (&self.field, &self.value) {
            (FieldDescriptor::Finite(f), ElementValue::Finite(a)) => {
                ElementValue::Finite(f.inv(a).ok_or(FieldError::DivisionByZero)?)
            }
            (FieldDescriptor::Function(f), ElementValue::Function(a)) => {
                ElementValue::Function(f.inv(a).ok_or(FieldError::DivisionByZero)?)
            }
            _ => unreachable!("element payload always matches its descriptor"),
        };
        Ok(FieldElement { field: self.field.clone(), value })
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.field, &self.value) {
            (FieldDescriptor::Finite(k), ElementValue::Finite(a)) => f.write_str(&k.format_elem(a)),
            (FieldDescriptor::Function(k), ElementValue::Function(a)) => f.write_str(&k.format_elem(a)),
            _ => unreachable!("element payload always matches its descriptor"),
        }
    }
}

/// Binary field arithmetic on tagged elements.
pub fn arith(op: ArithOp, a: &FieldElement, b: &FieldElement) -> Result<FieldElement, FieldError> {
    if a.field != b.field {
        return Err(FieldError::DescriptorMismatch(a.field.name(), b.field.name()));
    }
    fn apply<F: Field>(k: &F, op: ArithOp, a: &F::Elem, b: &F::Elem) -> Result<F::Elem, FieldError> {
        Ok(match op {
            ArithOp::Add => k.add(a, b),
            ArithOp::Sub => k.sub(a, b),
            ArithOp::Mul => k.mul(a, b),
            ArithOp::Div => k.div(a, b).ok_or(FieldError::DivisionByZero)?,
        })
    }
    let value = match (&a.field, &a.value, &b.value) {
        (FieldDescriptor::Finite(k), ElementValue::Finite(x), ElementValue::Finite(y)) => {
            ElementValue::Finite(apply(k, op, x, y)?)
        }
        (FieldDescriptor::Function(k), ElementValue::Function(x), ElementValue::Function(y)) => {
            ElementValue::Function(apply(k, op, x, y)?)
        }
        _ => unreachable!("element payload always matches its descriptor"),
    };
    Ok(FieldElement { field: a.field.clone(), value })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arith_examples() {
        let f7 = FiniteField::prime(7).unwrap();
        let a = FieldElement::finite(&f7, 3).unwrap();
        let b = FieldElement::finite(&f7, 5).unwrap();
        assert_eq!(arith(ArithOp::Mul, &a, &b).unwrap().value(), &ElementValue::Finite(1));

        let f9 = FiniteField::prime_extension(3, &[1, 0, 1], "y").unwrap();
        let y = FieldElement::finite(&f9, 3).unwrap();
        assert_eq!(arith(ArithOp::Mul, &y, &y).unwrap().value(), &ElementValue::Finite(2));

        let f5 = FiniteField::prime(5).unwrap();
        let kt = RationalFunctionField::new(f5.clone(), "t");
        let t = kt.variable();
        let t1 = kt.add(&t, &kt.one());
        let lhs = kt.div(&t, &t1).unwrap();
        let rhs = kt.div(&kt.one(), &t1).unwrap();
        let sum = arith(ArithOp::Add, &FieldElement::function(&kt, lhs), &FieldElement::function(&kt, rhs)).unwrap();
        assert_eq!(sum.value(), &ElementValue::Function(kt.one()));
    }

    #[test]
    fn arith_errors() {
        let f7 = FiniteField::prime(7).unwrap();
        let f5 = FiniteField::prime(5).unwrap();
        let a = FieldElement::finite(&f7, 3).unwrap();
        let z = FieldElement::finite(&f7, 0).unwrap();
        let b = FieldElement::finite(&f5, 3).unwrap();
        assert!(matches!(arith(ArithOp::Add, &a, &b), Err(FieldError::DescriptorMismatch(..))));
        assert_eq!(arith(ArithOp::Div, &a, &z), Err(FieldError::DivisionByZero));
        assert_eq!(z.inverse(), Err(FieldError::DivisionByZero));
    }
}
