use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use super::{Field, FieldError, FiniteField, Poly};

/// A reduced fraction `num / den` with `den` monic and `gcd(num, den) = 1`.
#[derive(Clone)]
pub struct RatFunc<F: Field> {
    num: Poly<F>,
    den: Poly<F>,
}

impl<F: Field> RatFunc<F> {
    pub fn new(num: Poly<F>, den: Poly<F>) -> Result<Self, FieldError> {
        if den.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        let k = den.field().clone();
        if num.is_zero() {
            return Ok(Self::from_poly(num));
        }
        let g = num.gcd(&den);
        let (mut n, mut d) = if g.deg() > 0 { (num.div_exact(&g)?, den.div_exact(&g)?) } else { (num, den) };
        if !d.is_monic() {
            let inv = k.inv(&d.lc()).expect("nonzero");
            n = n.scale(&inv);
            d = d.scale(&inv);
        }
        Ok(RatFunc { num: n, den: d })
    }

    pub fn from_poly(p: Poly<F>) -> Self {
        let den = Poly::one(p.field());
        RatFunc { num: p, den }
    }

    pub fn constant(field: &F, c: F::Elem) -> Self {
        Self::from_poly(Poly::constant(field, c))
    }

    pub fn num(&self) -> &Poly<F> {
        &self.num
    }

    pub fn den(&self) -> &Poly<F> {
        &self.den
    }

    pub fn field(&self) -> &F {
        self.den.field()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_poly(&self) -> bool {
        self.den.deg() == 0
    }

    pub fn is_constant(&self) -> bool {
        self.is_poly() && self.num.deg() == 0
    }

    /// `deg num - deg den`, i.e. `-v_inf`.
    pub fn degree(&self) -> i64 {
        self.num.deg() as i64 - self.den.deg() as i64
    }

    /// `lc(num) / lc(den)`: the leading coefficient at infinity.
    pub fn lc(&self) -> F::Elem {
        self.num.lc()
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.den == o.den {
            return Self::new(self.num.add(&o.num), self.den.clone()).expect("den nonzero");
        }
        Self::new(self.num.mul(&o.den).add(&o.num.mul(&self.den)), self.den.mul(&o.den)).expect("den nonzero")
    }

    pub fn neg(&self) -> Self {
        RatFunc { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::new(self.num.mul(&o.num), self.den.mul(&o.den)).expect("den nonzero")
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        Some(Self::new(self.den.clone(), self.num.clone()).expect("num nonzero"))
    }

    pub fn div(&self, o: &Self) -> Option<Self> {
        o.inv().map(|i| self.mul(&i))
    }

    pub fn pow(&self, e: i64) -> Option<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let e = e.unsigned_abs();
        Some(RatFunc { num: base.num.pow(e), den: base.den.pow(e) })
    }

    /// Value at a point of the coefficient field; `None` at a pole.
    pub fn eval(&self, a: &F::Elem) -> Option<F::Elem> {
        let k = self.field();
        let d = self.den.eval(a);
        k.div(&self.num.eval(a), &d)
    }

    /// Order of vanishing at the monic irreducible `pi`.
    pub fn valuation(&self, pi: &Poly<F>) -> i64 {
        if self.is_zero() {
            return i64::MAX;
        }
        self.num.valuation(pi) as i64 - self.den.valuation(pi) as i64
    }

    /// Split `self = pi^v * u` with `u` a unit at `pi`.
    pub fn split_at(&self, pi: &Poly<F>) -> (i64, Self) {
        let v = self.valuation(pi);
        let pv = Self::from_poly(pi.clone()).pow(-v).expect("pi nonzero");
        (v, self.mul(&pv))
    }

    /// Substitution of the reciprocal variable: `g(t) -> g(1/s)`.
    pub fn invert_variable(&self) -> Self {
        let (dn, dd) = (self.num.deg(), self.den.deg());
        let n = self.num.reverse(dn);
        let d = self.den.reverse(dd);
        // g(1/s) = s^{dd - dn} rev(num) / rev(den)
        if dd >= dn {
            Self::new(n.shift(dd - dn), d).expect("den nonzero")
        } else {
            Self::new(n, d.shift(dn - dd)).expect("den nonzero")
        }
    }

    pub fn format(&self, var: &str) -> String {
        if self.is_poly() {
            return self.num.format(var);
        }
        let wrap = |p: &Poly<F>| {
            let s = p.format(var);
            if p.coeffs().iter().filter(|c| !p.field().is_zero(c)).count() > 1 || s.contains(['*', '^', '/']) {
                format!("({s})")
            } else {
                s
            }
        };
        format!("{}/{}", wrap(&self.num), wrap(&self.den))
    }
}

impl<F: Field> PartialEq for RatFunc<F> {
    fn eq(&self, other: &Self) -> bool {
        self.num == other.num && self.den == other.den
    }
}

impl<F: Field> Eq for RatFunc<F> {}

impl<F: Field> Hash for RatFunc<F> {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.num.hash(state);
        self.den.hash(state);
    }
}

impl<F: Field> Ord for RatFunc<F> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.num.cmp(&other.num).then_with(|| self.den.cmp(&other.den))
    }
}

impl<F: Field> PartialOrd for RatFunc<F> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<F: Field> fmt::Debug for RatFunc<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFunc({})", self.format("x"))
    }
}

/// The rational function field `base(var)`.
#[derive(Clone)]
pub struct RationalFunctionField<F: Field> {
    base: F,
    var: Arc<str>,
}

impl<F: Field> RationalFunctionField<F> {
    pub fn new(base: F, var: &str) -> Self {
        RationalFunctionField { base, var: Arc::from(var) }
    }

    pub fn base(&self) -> &F {
        &self.base
    }

    pub fn var(&self) -> &str {
        &self.var
    }

    /// The transcendental generator.
    pub fn variable(&self) -> RatFunc<F> {
        RatFunc::from_poly(Poly::x(&self.base))
    }

    pub fn from_poly(&self, p: Poly<F>) -> RatFunc<F> {
        RatFunc::from_poly(p)
    }

    pub fn constant(&self, c: F::Elem) -> RatFunc<F> {
        RatFunc::constant(&self.base, c)
    }

    pub fn fraction(&self, num: Poly<F>, den: Poly<F>) -> Result<RatFunc<F>, FieldError> {
        RatFunc::new(num, den)
    }
}

impl<F: Field> PartialEq for RationalFunctionField<F> {
    fn eq(&self, other: &Self) -> bool {
        self.var == other.var && self.base == other.base
    }
}

impl<F: Field> Eq for RationalFunctionField<F> {}

impl<F: Field> fmt::Debug for RationalFunctionField<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl<F: Field> Field for RationalFunctionField<F> {
    type Elem = RatFunc<F>;

    fn zero(&self) -> RatFunc<F> {
        RatFunc::from_poly(Poly::zero(&self.base))
    }

    fn one(&self) -> RatFunc<F> {
        RatFunc::from_poly(Poly::one(&self.base))
    }

    fn is_zero(&self, a: &RatFunc<F>) -> bool {
        a.is_zero()
    }

    fn add(&self, a: &RatFunc<F>, b: &RatFunc<F>) -> RatFunc<F> {
        a.add(b)
    }

    fn neg(&self, a: &RatFunc<F>) -> RatFunc<F> {
        a.neg()
    }

    fn mul(&self, a: &RatFunc<F>, b: &RatFunc<F>) -> RatFunc<F> {
        a.mul(b)
    }

    fn inv(&self, a: &RatFunc<F>) -> Option<RatFunc<F>> {
        a.inv()
    }

    fn from_int(&self, n: i64) -> RatFunc<F> {
        self.constant(self.base.from_int(n))
    }

    fn characteristic(&self) -> u64 {
        self.base.characteristic()
    }

    fn format_elem(&self, a: &RatFunc<F>) -> String {
        a.format(&self.var)
    }

    fn name(&self) -> String {
        format!("{}({})", self.base.name(), self.var)
    }
}

/// Class of `g` in the residue field `F_q[x]/(pi)` of the monic irreducible
/// `pi`. Linear `pi = x - a` yields the base field itself and the value
/// `g(a)`; higher degree yields the extension with modulus `pi`.
pub fn reduce_mod(
    g: &RatFunc<FiniteField>,
    pi: &Poly<FiniteField>,
    var: &str,
) -> Result<(FiniteField, u64), FieldError> {
    let k = pi.field();
    if g.num().rem(pi)?.is_zero() {
        return Err(FieldError::ZeroAtPoint(pi.format(var)));
    }
    if g.den().rem(pi)?.is_zero() {
        return Err(FieldError::PoleAtPoint(pi.format(var)));
    }
    if pi.deg() == 1 {
        let root = k.neg(&pi.coeff(0));
        return Ok((k.clone(), g.eval(&root).expect("not a pole")));
    }
    let residue = FiniteField::residue_field(k, pi, var)?;
    let class = |p: &Poly<FiniteField>| residue.from_base_coeffs(p.rem(pi).expect("pi nonzero").coeffs());
    let value = residue.div(&class(g.num()), &class(g.den())).expect("unit at pi");
    Ok((residue, value))
}

/// Class of `g` at a zero-free, pole-free point when the caller only needs
/// the residue value and already holds the residue field.
pub(crate) fn reduce_into(g: &RatFunc<FiniteField>, pi: &Poly<FiniteField>, residue: &FiniteField) -> Option<u64> {
    if pi.deg() == 1 {
        let root = pi.field().neg(&pi.coeff(0));
        return g.eval(&root).filter(|v| *v != 0);
    }
    let class = |p: &Poly<FiniteField>| residue.from_base_coeffs(p.rem(pi).expect("pi nonzero").coeffs());
    let n = class(g.num());
    let d = class(g.den());
    if n == 0 || d == 0 {
        return None;
    }
    residue.div(&n, &d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normal_form() {
        let k = FiniteField::prime(5).unwrap();
        let x = Poly::x(&k);
        let x1 = Poly::linear(&k, &4); // x + 1
        let r = RatFunc::new(x.mul(&x1).scale(&2), x1.scale(&3)).unwrap();
        // 2x(x+1) / 3(x+1) = (2/3) x = 4x
        assert_eq!(r.num(), &x.scale(&4));
        assert!(r.den().is_monic() && r.den().deg() == 0);
        assert!(RatFunc::new(x.clone(), Poly::zero(&k)).is_err());
    }

    #[test]
    fn reciprocal_substitution() {
        let k = FiniteField::prime(7).unwrap();
        let kt = RationalFunctionField::new(k.clone(), "t");
        // (t - 1)/t^3 at t = 1/s is s^2 (1 - s)
        let g = RatFunc::new(Poly::linear(&k, &1), Poly::x(&k).pow(3)).unwrap();
        let inv = g.invert_variable();
        assert_eq!(kt.format_elem(&inv), "6*t^3+t^2");
        assert_eq!(inv.invert_variable(), g);
    }

    #[test]
    fn reduce_mod_examples() {
        let f7 = FiniteField::prime(7).unwrap();
        let x = RatFunc::from_poly(Poly::x(&f7));
        let (k, v) = reduce_mod(&x, &Poly::linear(&f7, &2), "x").unwrap();
        assert_eq!((k, v), (f7.clone(), 2));

        let f3 = FiniteField::prime(3).unwrap();
        let pi = Poly::from_ints(&f3, &[1, 0, 1]);
        let (f9, v) = reduce_mod(&RatFunc::from_poly(Poly::x(&f3)), &pi, "x").unwrap();
        assert_eq!(f9.order(), 9);
        assert_eq!(f9.mul(&v, &v), f9.neg(&1));

        let inv_x = RatFunc::new(Poly::one(&f7), Poly::x(&f7)).unwrap();
        assert!(matches!(reduce_mod(&inv_x, &Poly::x(&f7), "x"), Err(FieldError::PoleAtPoint(_))));
        assert!(matches!(reduce_mod(&x, &Poly::x(&f7), "x"), Err(FieldError::ZeroAtPoint(_))));
    }
}
