use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

use super::{Field, FieldError};

/// Dense univariate polynomial, lowest degree first, no trailing zeros.
#[derive(Clone)]
pub struct Poly<F: Field> {
    field: F,
    coeffs: Vec<F::Elem>,
}

impl<F: Field> Poly<F> {
    pub fn new(field: &F, mut coeffs: Vec<F::Elem>) -> Self {
        while coeffs.last().is_some_and(|c| field.is_zero(c)) {
            coeffs.pop();
        }
        Poly { field: field.clone(), coeffs }
    }

    pub fn zero(field: &F) -> Self {
        Poly { field: field.clone(), coeffs: Vec::new() }
    }

    pub fn one(field: &F) -> Self {
        Self::constant(field, field.one())
    }

    pub fn constant(field: &F, c: F::Elem) -> Self {
        Self::new(field, vec![c])
    }

    /// The monomial `c * x^n`.
    pub fn monomial(field: &F, c: F::Elem, n: usize) -> Self {
        let mut coeffs = vec![field.zero(); n];
        coeffs.push(c);
        Self::new(field, coeffs)
    }

    pub fn x(field: &F) -> Self {
        Self::monomial(field, field.one(), 1)
    }

    /// `x - a`.
    pub fn linear(field: &F, a: &F::Elem) -> Self {
        Self::new(field, vec![field.neg(a), field.one()])
    }

    /// Integer coefficients reduced into the field, lowest degree first.
    pub fn from_ints(field: &F, coeffs: &[i64]) -> Self {
        Self::new(field, coeffs.iter().map(|&c| field.from_int(c)).collect())
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn coeffs(&self) -> &[F::Elem] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<F::Elem> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to 0.
    pub fn deg(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn coeff(&self, i: usize) -> F::Elem {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn lc(&self) -> F::Elem {
        self.coeffs.last().cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(|c| self.field.is_one(c))
    }

    pub fn monic(&self) -> Self {
        match self.coeffs.last() {
            None => self.clone(),
            Some(lc) => {
                let inv = self.field.inv(lc).expect("leading coefficient is nonzero");
                self.scale(&inv)
            }
        }
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        Self::new(&self.field, self.coeffs.iter().map(|a| self.field.mul(a, c)).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let k = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| match (self.coeffs.get(i), other.coeffs.get(i)) {
                (Some(a), Some(b)) => k.add(a, b),
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            })
            .collect();
        Self::new(k, coeffs)
    }

    pub fn neg(&self) -> Self {
        Self::new(&self.field, self.coeffs.iter().map(|a| self.field.neg(a)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(&self.field);
        }
        let k = &self.field;
        let mut out = vec![k.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if k.is_zero(a) {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = k.add(&out[i + j], &k.mul(a, b));
            }
        }
        Self::new(k, out)
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(&self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Multiply by `x^n`.
    pub fn shift(&self, n: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![self.field.zero(); n];
        coeffs.extend(self.coeffs.iter().cloned());
        Self::new(&self.field, coeffs)
    }

    /// Euclidean division: `self = q * d + r` with `deg r < deg d`.
    pub fn div_rem(&self, d: &Self) -> Result<(Self, Self), FieldError> {
        let k = &self.field;
        let dl = d.coeffs.last().ok_or(FieldError::DivisionByZero)?;
        let dl_inv = k.inv(dl).expect("leading coefficient is nonzero");
        let dn = d.coeffs.len() - 1;
        if self.coeffs.len() <= dn {
            return Ok((Self::zero(k), self.clone()));
        }
        let mut r = self.coeffs.clone();
        let mut q = vec![k.zero(); r.len() - dn];
        for i in (0..q.len()).rev() {
            let c = k.mul(&r[i + dn], &dl_inv);
            if k.is_zero(&c) {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                r[i + j] = k.sub(&r[i + j], &k.mul(&c, dc));
            }
            q[i] = c;
        }
        r.truncate(dn);
        Ok((Self::new(k, q), Self::new(k, r)))
    }

    pub fn rem(&self, d: &Self) -> Result<Self, FieldError> {
        self.div_rem(d).map(|(_, r)| r)
    }

    /// Quotient when `d` is known to divide `self`.
    pub fn div_exact(&self, d: &Self) -> Result<Self, FieldError> {
        let (q, r) = self.div_rem(d)?;
        if !r.is_zero() {
            return Err(FieldError::Invalid(format!("{} does not divide {}", d, self)));
        }
        Ok(q)
    }

    /// Monic greatest common divisor (zero only if both inputs are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b).expect("b is nonzero");
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Extended Euclid: returns `(g, s, t)` with `s*self + t*other = g`, `g` monic.
    pub fn ext_gcd(&self, other: &Self) -> (Self, Self, Self) {
        let k = &self.field;
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Self::one(k), Self::zero(k));
        let (mut t0, mut t1) = (Self::zero(k), Self::one(k));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1).expect("r1 is nonzero");
            r0 = std::mem::replace(&mut r1, r);
            let s = s0.sub(&q.mul(&s1));
            s0 = std::mem::replace(&mut s1, s);
            let t = t0.sub(&q.mul(&t1));
            t0 = std::mem::replace(&mut t1, t);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = k.inv(&r0.lc()).expect("nonzero");
        (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
    }

    pub fn derivative(&self) -> Self {
        let k = &self.field;
        Self::new(k, self.coeffs.iter().enumerate().skip(1).map(|(i, c)| k.mul(c, &k.from_int(i as i64))).collect())
    }

    /// Horner evaluation.
    pub fn eval(&self, a: &F::Elem) -> F::Elem {
        let k = &self.field;
        self.coeffs.iter().rev().fold(k.zero(), |acc, c| k.add(&k.mul(&acc, a), c))
    }

    /// `self^e mod m` for possibly huge `e`.
    pub fn pow_mod(&self, e: u128, m: &Self) -> Result<Self, FieldError> {
        let mut base = self.rem(m)?;
        let mut acc = Self::one(&self.field).rem(m)?;
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(m)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base).rem(m)?;
            }
        }
        Ok(acc)
    }

    pub fn mul_mod(&self, other: &Self, m: &Self) -> Result<Self, FieldError> {
        self.mul(other).rem(m)
    }

    /// Coefficient reversal relative to degree `n`: `x^n * p(1/x)`.
    pub fn reverse(&self, n: usize) -> Self {
        assert!(self.coeffs.len() <= n + 1, "reverse degree below polynomial degree");
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(n + 1, self.field.zero());
        coeffs.reverse();
        Self::new(&self.field, coeffs)
    }

    /// Apply a coefficient map into another field.
    pub fn map<G: Field>(&self, target: &G, f: impl Fn(&F::Elem) -> G::Elem) -> Poly<G> {
        Poly::new(target, self.coeffs.iter().map(f).collect())
    }

    /// Exponent of `pi` in `self` (`self` nonzero).
    pub fn valuation(&self, pi: &Self) -> usize {
        let mut v = 0;
        let mut cur = self.clone();
        loop {
            let (q, r) = cur.div_rem(pi).expect("pi is nonzero");
            if !r.is_zero() || cur.is_zero() {
                return v;
            }
            v += 1;
            cur = q;
        }
    }

    /// Canonical text form in the given variable, highest degree first.
    pub fn format(&self, var: &str) -> String {
        let k = &self.field;
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if k.is_zero(c) {
                continue;
            }
            let mut cs = k.format_elem(c);
            let negative = cs.starts_with('-') && !cs[1..].contains(['+', '-']);
            if negative {
                cs.remove(0);
            }
            if !out.is_empty() {
                out.push_str(if negative { "-" } else { "+" });
            } else if negative {
                out.push('-');
            }
            let compound = cs.contains(['+', '-', '/']) || (cs.contains('*') && i > 0);
            let body = match i {
                0 => cs,
                _ => {
                    let mono = if i == 1 { var.to_string() } else { format!("{var}^{i}") };
                    if cs == "1" {
                        mono
                    } else if compound {
                        format!("({cs})*{mono}")
                    } else {
                        format!("{cs}*{mono}")
                    }
                }
            };
            out.push_str(&body);
        }
        out
    }
}

impl<F: Field> PartialEq for Poly<F> {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs
    }
}

impl<F: Field> Eq for Poly<F> {}

impl<F: Field> Hash for Poly<F> {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.coeffs.hash(state);
    }
}

/// Canonical polynomial order: by degree, then coefficient-lexicographic
/// starting from the constant term.
impl<F: Field> Ord for Poly<F> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs.len().cmp(&other.coeffs.len()).then_with(|| self.coeffs.cmp(&other.coeffs))
    }
}

impl<F: Field> PartialOrd for Poly<F> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<F: Field> fmt::Debug for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({})", self.format("x"))
    }
}

impl<F: Field> fmt::Display for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format("x"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FiniteField;

    #[test]
    fn division_identity() {
        let k = FiniteField::prime(7).unwrap();
        let a = Poly::from_ints(&k, &[1, 2, 3, 4, 5]);
        let d = Poly::from_ints(&k, &[3, 0, 2]);
        let (q, r) = a.div_rem(&d).unwrap();
        assert_eq!(q.mul(&d).add(&r), a);
        assert!(r.deg() < 2);
        assert!(a.div_rem(&Poly::zero(&k)).is_err());
    }

    #[test]
    fn gcd_and_bezout() {
        let k = FiniteField::prime(5).unwrap();
        let x1 = Poly::linear(&k, &1);
        let x2 = Poly::linear(&k, &2);
        let x3 = Poly::linear(&k, &3);
        let a = x1.mul(&x2);
        let b = x1.mul(&x3).scale(&3);
        assert_eq!(a.gcd(&b), x1);
        let (g, s, t) = a.ext_gcd(&b);
        assert_eq!(s.mul(&a).add(&t.mul(&b)), g);
    }

    #[test]
    fn formatting() {
        let k = FiniteField::prime(7).unwrap();
        assert_eq!(Poly::from_ints(&k, &[1, 3, 1]).format("x"), "x^2+3*x+1");
        assert_eq!(Poly::from_ints(&k, &[0, 1]).format("t"), "t");
        assert_eq!(Poly::<FiniteField>::zero(&k).format("x"), "0");
    }

    #[test]
    fn valuation_counts_exponent() {
        let k = FiniteField::prime(7).unwrap();
        let x2 = Poly::linear(&k, &2);
        let f = x2.pow(3).mul(&Poly::linear(&k, &5));
        assert_eq!(f.valuation(&x2), 3);
        assert_eq!(f.valuation(&Poly::linear(&k, &1)), 0);
    }
}
