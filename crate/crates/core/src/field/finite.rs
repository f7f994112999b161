use std::fmt;
use std::sync::{Arc, OnceLock};

use super::dlog::GroupData;
use super::factor::{is_irreducible, smallest_irreducible};
use super::{Field, FieldError, Poly};

/// Largest field order accepted from user input.
pub const MAX_FIELD_ORDER: u64 = 1 << 20;

/// Largest order of internally built residue fields.
const MAX_INTERNAL_ORDER: u128 = 1 << 62;

/// Largest order for which generators and discrete logs are computed.
pub(crate) const MAX_LOG_ORDER: u64 = 1 << 40;

/// A finite field: `F_p`, or a simple extension `B[v]/(modulus)` of another
/// finite field `B`.
///
/// Elements are `u64` indices. For an extension of degree `d` over a base of
/// order `b`, the element `c_0 + c_1 v + ... + c_{d-1} v^{d-1}` has index
/// `c_0 + c_1 b + ... + c_{d-1} b^{d-1}`, so base elements keep their index
/// when embedded and the canonical element order is the index order.
#[derive(Clone)]
pub struct FiniteField(Arc<Inner>);

struct Inner {
    p: u64,
    order: u64,
    kind: Kind,
    group: OnceLock<GroupData>,
}

enum Kind {
    Prime,
    Extension { base: FiniteField, modulus: Vec<u64>, var: String },
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl FiniteField {
    pub fn prime(p: u64) -> Result<Self, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if p > MAX_FIELD_ORDER {
            return Err(FieldError::TooLarge(p as u128));
        }
        Ok(Self::prime_unchecked(p))
    }

    fn prime_unchecked(p: u64) -> Self {
        FiniteField(Arc::new(Inner { p, order: p, kind: Kind::Prime, group: OnceLock::new() }))
    }

    /// `base[var]/(modulus)`; the modulus must be monic irreducible over `base`
    /// and the resulting order at most [`MAX_FIELD_ORDER`].
    pub fn extension(base: &FiniteField, modulus: &Poly<FiniteField>, var: &str) -> Result<Self, FieldError> {
        let order = (base.order() as u128).checked_pow(modulus.deg() as u32).unwrap_or(u128::MAX);
        if order > MAX_FIELD_ORDER as u128 {
            return Err(FieldError::TooLarge(order));
        }
        if modulus.field() != base || !modulus.is_monic() || modulus.deg() == 0 || !is_irreducible(modulus) {
            return Err(FieldError::ReducibleModulus(modulus.format(var)));
        }
        Self::residue_field(base, modulus, var)
    }

    /// Residue field `base[var]/(pi)` for a monic irreducible `pi` that the
    /// caller has already certified. Only the internal size bound applies.
    pub fn residue_field(base: &FiniteField, pi: &Poly<FiniteField>, var: &str) -> Result<Self, FieldError> {
        debug_assert!(pi.is_monic() && pi.deg() >= 1);
        let order = (base.order() as u128).checked_pow(pi.deg() as u32).unwrap_or(u128::MAX);
        if order > MAX_INTERNAL_ORDER {
            return Err(FieldError::TooLarge(order));
        }
        Ok(FiniteField(Arc::new(Inner {
            p: base.characteristic(),
            order: order as u64,
            kind: Kind::Extension { base: base.clone(), modulus: pi.coeffs().to_vec(), var: var.to_string() },
            group: OnceLock::new(),
        })))
    }

    /// `F_p[var]/(m)` with `m` given by integer coefficients, lowest degree first.
    pub fn prime_extension(p: u64, modulus: &[i64], var: &str) -> Result<Self, FieldError> {
        let base = Self::prime(p)?;
        let m = Poly::from_ints(&base, modulus);
        Self::extension(&base, &m, var)
    }

    /// `F_{p^e}` with the smallest monic irreducible modulus of degree `e`.
    pub fn with_degree(p: u64, e: u32, var: &str) -> Result<Self, FieldError> {
        let base = Self::prime(p)?;
        if e == 1 {
            return Ok(base);
        }
        base.extend(e, var)
    }

    /// Degree-`d` extension of `self` by the smallest monic irreducible.
    pub fn extend(&self, d: u32, var: &str) -> Result<Self, FieldError> {
        let order = (self.order() as u128).checked_pow(d).unwrap_or(u128::MAX);
        if order > MAX_FIELD_ORDER as u128 {
            return Err(FieldError::TooLarge(order));
        }
        let m = smallest_irreducible(self, d as usize);
        Self::residue_field(self, &m, var)
    }

    pub fn order(&self) -> u64 {
        self.0.order
    }

    pub fn base(&self) -> Option<&FiniteField> {
        match &self.0.kind {
            Kind::Prime => None,
            Kind::Extension { base, .. } => Some(base),
        }
    }

    pub fn modulus(&self) -> Option<Poly<FiniteField>> {
        match &self.0.kind {
            Kind::Prime => None,
            Kind::Extension { base, modulus, .. } => Some(Poly::new(base, modulus.clone())),
        }
    }

    pub fn var(&self) -> Option<&str> {
        match &self.0.kind {
            Kind::Prime => None,
            Kind::Extension { var, .. } => Some(var),
        }
    }

    pub fn is_prime_field(&self) -> bool {
        matches!(self.0.kind, Kind::Prime)
    }

    /// Degree over the immediate base (1 for prime fields).
    pub fn relative_degree(&self) -> usize {
        match &self.0.kind {
            Kind::Prime => 1,
            Kind::Extension { modulus, .. } => modulus.len() - 1,
        }
    }

    /// `[self : sub]` when `sub` is `self` or one of its bases.
    pub fn degree_over(&self, sub: &FiniteField) -> Option<u32> {
        let mut cur = self;
        let mut d = 1u32;
        loop {
            if cur == sub {
                return Some(d);
            }
            d *= cur.relative_degree() as u32;
            cur = cur.base()?;
        }
    }

    pub fn is_subfield_of(&self, ext: &FiniteField) -> bool {
        ext.degree_over(self).is_some()
    }

    pub fn elements(&self) -> impl Iterator<Item = u64> {
        0..self.order()
    }

    pub fn nonzero_elements(&self) -> impl Iterator<Item = u64> {
        1..self.order()
    }

    /// Coefficients over the immediate base, lowest first.
    pub fn to_base_coeffs(&self, a: u64) -> Vec<u64> {
        match &self.0.kind {
            Kind::Prime => vec![a],
            Kind::Extension { base, modulus, .. } => {
                let b = base.order();
                let mut a = a;
                (0..modulus.len() - 1)
                    .map(|_| {
                        let c = a % b;
                        a /= b;
                        c
                    })
                    .collect()
            }
        }
    }

    pub fn from_base_coeffs(&self, coeffs: &[u64]) -> u64 {
        match &self.0.kind {
            Kind::Prime => coeffs.first().copied().unwrap_or(0) % self.0.p,
            Kind::Extension { base, modulus, .. } => {
                let poly = Poly::new(base, coeffs.to_vec());
                let r = if poly.deg() >= modulus.len() - 1 {
                    poly.rem(&Poly::new(base, modulus.clone())).expect("modulus is nonzero")
                } else {
                    poly
                };
                let b = base.order();
                r.coeffs().iter().rev().fold(0u64, |acc, c| acc * b + c)
            }
        }
    }

    /// The class of the adjoined variable.
    pub fn generator_of_extension(&self) -> Option<u64> {
        self.base().map(|b| if self.relative_degree() == 1 { self.from_base_coeffs(&[0, 1]) } else { b.order() })
    }

    /// Norm and trace from `self` down to `sub`.
    pub fn norm_trace(&self, a: u64, sub: &FiniteField) -> Result<(u64, u64), FieldError> {
        if self.degree_over(sub).is_none() {
            return Err(FieldError::NotSubfield(sub.name(), self.name()));
        }
        let mut cur = self.clone();
        let (mut n, mut t) = (a, a);
        while &cur != sub {
            let base = cur.base().expect("sub is an ancestor").clone();
            let q = base.order() as u128;
            let d = cur.relative_degree() as u32;
            // N(a) = a^{(q^d - 1)/(q - 1)}, Tr(a) = sum of conjugates a^{q^i}
            let e = (q.pow(d) - 1) / (q - 1);
            n = cur.pow(&n, e);
            let mut conj = t;
            let mut acc = 0;
            for _ in 0..d {
                acc = cur.add(&acc, &conj);
                conj = cur.pow(&conj, q);
            }
            t = acc;
            debug_assert!(n < base.order() && t < base.order());
            cur = base;
        }
        Ok((n, t))
    }

    /// Inclusion of `a` from a subfield. Index-preserving by construction.
    pub fn embed_from(&self, sub: &FiniteField, a: u64) -> Result<u64, FieldError> {
        if !sub.is_subfield_of(self) {
            return Err(FieldError::NotSubfield(sub.name(), self.name()));
        }
        Ok(a)
    }

    pub(crate) fn group(&self) -> Result<&GroupData, FieldError> {
        if self.order() > MAX_LOG_ORDER {
            return Err(FieldError::TooLarge(self.order() as u128));
        }
        Ok(self.0.group.get_or_init(|| GroupData::build(self)))
    }

    /// The canonical multiplicative generator: the smallest element index of
    /// full multiplicative order. Cached per field.
    pub fn generator(&self) -> Result<u64, FieldError> {
        Ok(self.group()?.generator)
    }

    /// Discrete log with respect to [`FiniteField::generator`], in `[0, q-2]`.
    pub fn log(&self, a: u64) -> Result<u64, FieldError> {
        if a == 0 {
            return Err(FieldError::LogOfZero);
        }
        let group = self.group()?;
        group.log(self, a).ok_or_else(|| FieldError::NotInGroup(self.format_elem(&group.generator)))
    }
}

impl PartialEq for FiniteField {
    fn eq(&self, other: &Self) -> bool {
        if Arc::ptr_eq(&self.0, &other.0) {
            return true;
        }
        if self.0.order != other.0.order || self.0.p != other.0.p {
            return false;
        }
        match (&self.0.kind, &other.0.kind) {
            (Kind::Prime, Kind::Prime) => true,
            (
                Kind::Extension { base: b1, modulus: m1, var: v1 },
                Kind::Extension { base: b2, modulus: m2, var: v2 },
            ) => m1 == m2 && v1 == v2 && b1 == b2,
            _ => false,
        }
    }
}

impl Eq for FiniteField {}

impl fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl Field for FiniteField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }

    fn one(&self) -> u64 {
        1
    }

    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }

    fn add(&self, a: &u64, b: &u64) -> u64 {
        match &self.0.kind {
            Kind::Prime => {
                let s = a + b;
                if s >= self.0.p {
                    s - self.0.p
                } else {
                    s
                }
            }
            Kind::Extension { base, .. } => {
                let (x, y) = (self.to_base_coeffs(*a), self.to_base_coeffs(*b));
                let s: Vec<u64> = x.iter().zip(&y).map(|(u, v)| base.add(u, v)).collect();
                self.from_base_coeffs(&s)
            }
        }
    }

    fn neg(&self, a: &u64) -> u64 {
        match &self.0.kind {
            Kind::Prime => {
                if *a == 0 {
                    0
                } else {
                    self.0.p - a
                }
            }
            Kind::Extension { base, .. } => {
                let x: Vec<u64> = self.to_base_coeffs(*a).iter().map(|u| base.neg(u)).collect();
                self.from_base_coeffs(&x)
            }
        }
    }

    fn mul(&self, a: &u64, b: &u64) -> u64 {
        match &self.0.kind {
            Kind::Prime => ((*a as u128 * *b as u128) % self.0.p as u128) as u64,
            Kind::Extension { base, modulus, .. } => {
                if *a == 0 || *b == 0 {
                    return 0;
                }
                let (x, y) = (self.to_base_coeffs(*a), self.to_base_coeffs(*b));
                let d = modulus.len() - 1;
                let mut prod = vec![0u64; 2 * d - 1];
                for (i, u) in x.iter().enumerate() {
                    if *u == 0 {
                        continue;
                    }
                    for (j, v) in y.iter().enumerate() {
                        prod[i + j] = base.add(&prod[i + j], &base.mul(u, v));
                    }
                }
                // reduce by the monic modulus from the top
                for k in (d..prod.len()).rev() {
                    let c = prod[k];
                    if c == 0 {
                        continue;
                    }
                    prod[k] = 0;
                    for (j, m) in modulus[..d].iter().enumerate() {
                        prod[k - d + j] = base.sub(&prod[k - d + j], &base.mul(&c, m));
                    }
                }
                let b = base.order();
                prod[..d].iter().rev().fold(0u64, |acc, c| acc * b + c)
            }
        }
    }

    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            return None;
        }
        match &self.0.kind {
            Kind::Prime => {
                let p = self.0.p as i128;
                let (mut r0, mut r1) = (p, *a as i128);
                let (mut s0, mut s1) = (0i128, 1i128);
                while r1 != 0 {
                    let q = r0 / r1;
                    (r0, r1) = (r1, r0 - q * r1);
                    (s0, s1) = (s1, s0 - q * s1);
                }
                Some(s0.rem_euclid(p) as u64)
            }
            Kind::Extension { .. } => Some(self.pow(a, self.0.order as u128 - 2)),
        }
    }

    fn from_int(&self, n: i64) -> u64 {
        n.rem_euclid(self.0.p as i64) as u64
    }

    fn characteristic(&self) -> u64 {
        self.0.p
    }

    fn format_elem(&self, a: &u64) -> String {
        match &self.0.kind {
            Kind::Prime => a.to_string(),
            Kind::Extension { base, var, .. } => Poly::new(base, self.to_base_coeffs(*a)).format(var),
        }
    }

    fn name(&self) -> String {
        match &self.0.kind {
            Kind::Prime => format!("F{}", self.0.p),
            Kind::Extension { base, modulus, var } => {
                format!("{}[{}]/({})", base.name(), var, Poly::new(base, modulus.clone()).format(var))
            }
        }
    }
}
