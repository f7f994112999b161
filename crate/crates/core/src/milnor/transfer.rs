use crate::field::{poly_resultant, Field, FiniteField, Poly, RatFunc};

use super::{MilnorElement, MilnorError};

/// Transfer `K_m(E) -> K_m(K)` for finite `K ⊆ E`: multiplication by `[E:K]`
/// on `K_0`, the field norm on `K_1`, and zero from `m = 2` on (both groups
/// vanish).
pub fn transfer(
    a: &MilnorElement<FiniteField>,
    down_to: &FiniteField,
) -> Result<MilnorElement<FiniteField>, MilnorError> {
    let e = a.field();
    let d = e.degree_over(down_to).ok_or_else(|| {
        MilnorError::UnsupportedTransfer(format!("{} is not a subfield of {}", down_to.name(), e.name()))
    })?;
    match a.degree() {
        0 => Ok(MilnorElement::integer(down_to, d as i64 * a.terms().map(|(_, c)| c).sum::<i64>())),
        1 => a.map_entries(down_to, |x| Ok(e.norm_trace(*x, down_to)?.0)),
        m => Ok(MilnorElement::zero(down_to, m)),
    }
}

/// Restriction `K_m(K) -> K_m(E)` along the inclusion.
pub fn restriction(
    a: &MilnorElement<FiniteField>,
    up_to: &FiniteField,
) -> Result<MilnorElement<FiniteField>, MilnorError> {
    let k = a.field();
    a.map_entries(up_to, |x| Ok(up_to.embed_from(k, *x)?))
}

/// Norm of `g mod pi` from `K[x]/(pi)` down to `K`, as
/// `Res(pi, num g) / Res(pi, den g)` for monic `pi`. Valid for any monic `pi`
/// (the quotient need not be a field) as long as `g` is a unit mod `pi`.
pub fn norm_from_quotient<K: Field>(pi: &Poly<K>, g: &RatFunc<K>) -> Result<K::Elem, MilnorError> {
    let k = pi.field();
    let n = poly_resultant(pi, g.num())?;
    let d = poly_resultant(pi, g.den())?;
    if k.is_zero(&n) || k.is_zero(&d) {
        return Err(MilnorError::UnsupportedTransfer(format!("{} is not a unit modulo {}", g.format("x"), pi)));
    }
    Ok(k.div(&n, &d).expect("nonzero"))
}
