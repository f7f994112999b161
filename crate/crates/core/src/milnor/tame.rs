use std::collections::HashMap;

use crate::field::{is_irreducible, Field, FiniteField, Poly, RatFunc, RationalFunctionField};

use super::{MilnorElement, MilnorError};

type FunctionField = RationalFunctionField<FiniteField>;

/// A place of `F_q(t)`: a monic irreducible polynomial or the point at
/// infinity (valuation `-deg`, uniformizer `1/t`).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Place {
    Finite(Poly<FiniteField>),
    Infinity,
}

impl Place {
    /// Degree of the residue field over `F_q`.
    pub fn degree(&self) -> usize {
        match self {
            Place::Finite(pi) => pi.deg(),
            Place::Infinity => 1,
        }
    }

    pub fn format(&self, var: &str) -> String {
        match self {
            Place::Finite(pi) => pi.format(var),
            Place::Infinity => "inf".to_string(),
        }
    }

    /// Valuation of a nonzero rational function at this place.
    pub fn valuation(&self, g: &RatFunc<FiniteField>) -> i64 {
        match self {
            Place::Finite(pi) => g.valuation(pi),
            Place::Infinity => -g.degree(),
        }
    }
}

fn check_place(kt: &FunctionField, place: &Place) -> Result<(), MilnorError> {
    if let Place::Finite(pi) = place {
        if pi.field() != kt.base() || !pi.is_monic() || !is_irreducible(pi) {
            return Err(MilnorError::BadPlace(pi.format(kt.var()), kt.name()));
        }
    }
    Ok(())
}

/// Residue field of a place: `F_q` for `inf` and linear places, otherwise
/// `F_q[t]/(pi)` with `pi` itself as modulus.
pub fn residue_field_of(kt: &FunctionField, place: &Place) -> Result<FiniteField, MilnorError> {
    check_place(kt, place)?;
    Ok(match place {
        Place::Finite(pi) if pi.deg() > 1 => FiniteField::residue_field(kt.base(), pi, kt.var())?,
        _ => kt.base().clone(),
    })
}

/// `(v, u mod pi)` for `g = pi^v u`.
fn split_and_reduce(g: &RatFunc<FiniteField>, pi: &Poly<FiniteField>, residue: &FiniteField) -> (i64, u64) {
    let (v, u) = g.split_at(pi);
    let value = crate::field::reduce_into(&u, pi, residue).expect("u is a unit at pi");
    (v, value)
}

/// The residue map `d_v : K_m(F_q(t)) -> K_{m-1}(k(v))`.
///
/// Each entry is split as `pi^{v_i} u_i`. Expanding multilinearly and using
/// `{pi, pi} = {pi, -1}`, a subset `S` of uniformizer slots with first slot
/// `j` contributes `prod_{i in S} v_i * (-1)^j {w_1, .., w_m}` with slot `j`
/// removed, `w_i = -1` on `S \ {j}` and `w_i = u_i mod pi` elsewhere, using
/// `d{pi, u_1, .., u_{m-1}} = {u_1, .., u_{m-1}}`. At infinity the entries
/// are first rewritten in `s = 1/t` and the place `(s)` is used.
pub fn tame_symbol(a: &MilnorElement<FunctionField>, place: &Place) -> Result<MilnorElement<FiniteField>, MilnorError> {
    let kt = a.field();
    let m = a.degree();
    if m == 0 {
        return Err(MilnorError::DegreeZeroResidue);
    }
    let residue = residue_field_of(kt, place)?;
    let base = kt.base();
    let (pi, flip) = match place {
        Place::Finite(pi) => (pi.clone(), false),
        Place::Infinity => (Poly::x(base), true),
    };
    let minus_one = residue.neg(&residue.one());
    let mut cache: HashMap<&RatFunc<FiniteField>, (i64, u64)> = HashMap::new();
    let mut out = MilnorElement::zero(&residue, m - 1);
    for (entries, c) in a.terms() {
        let split: Vec<(i64, u64)> = entries
            .iter()
            .map(|g| {
                *cache.entry(g).or_insert_with(|| {
                    let g = if flip { g.invert_variable() } else { g.clone() };
                    split_and_reduce(&g, &pi, &residue)
                })
            })
            .collect();
        if split.iter().all(|(v, _)| *v == 0) {
            continue;
        }
        for subset in 1u32..(1u32 << m) {
            let coeff: i64 = (0..m).filter(|i| subset >> i & 1 == 1).map(|i| split[i].0).product();
            if coeff == 0 {
                continue;
            }
            let first = subset.trailing_zeros() as usize;
            let sign = if first.is_multiple_of(2) { 1 } else { -1 };
            let reduced: Vec<u64> = (0..m)
                .filter(|&i| i != first)
                .map(|i| if subset >> i & 1 == 1 { minus_one } else { split[i].1 })
                .collect();
            let term = MilnorElement::from_terms(&residue, m - 1, [(c * coeff * sign, reduced)])?;
            out = out.add(&term)?;
        }
    }
    Ok(out)
}

/// Closed two-entry residue in the same convention as [`tame_symbol`]:
/// `d{f, g} = (-1)^{v(f) v(g)} g^{v(f)} / f^{v(g)}` evaluated at the place.
pub fn tame_symbol_two_entries(
    kt: &FunctionField,
    f: &RatFunc<FiniteField>,
    g: &RatFunc<FiniteField>,
    place: &Place,
) -> Result<u64, MilnorError> {
    let residue = residue_field_of(kt, place)?;
    let (f, g, pi) = match place {
        Place::Finite(pi) => (f.clone(), g.clone(), pi.clone()),
        Place::Infinity => (f.invert_variable(), g.invert_variable(), Poly::x(kt.base())),
    };
    let (vf, vg) = (f.valuation(&pi), g.valuation(&pi));
    let sign = if (vf * vg) % 2 == 0 { kt.one() } else { kt.from_int(-1) };
    let h = sign.mul(&g.pow(vf).expect("nonzero")).mul(&f.pow(-vg).expect("nonzero"));
    Ok(crate::field::reduce_into(&h, &pi, &residue).expect("closed form is a unit"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::milnor::canonical;

    fn setup(p: u64) -> (FiniteField, FunctionField) {
        let k = FiniteField::prime(p).unwrap();
        let kt = RationalFunctionField::new(k.clone(), "t");
        (k, kt)
    }

    fn poly(k: &FiniteField, c: &[i64]) -> RatFunc<FiniteField> {
        RatFunc::from_poly(Poly::from_ints(k, c))
    }

    #[test]
    fn uniformizer_leading_symbol() {
        let (k, kt) = setup(7);
        let t = kt.variable();
        for a in 1..7 {
            let s = MilnorElement::symbol(&kt, vec![t.clone(), kt.constant(a)]).unwrap();
            let r = tame_symbol(&s, &Place::Finite(Poly::x(&k))).unwrap();
            assert_eq!(r, MilnorElement::symbol(&k, vec![a]).unwrap());
        }
    }

    #[test]
    fn minus_one_t_over_f5() {
        let (k, kt) = setup(5);
        let s = MilnorElement::symbol(&kt, vec![kt.from_int(-1), kt.variable()]).unwrap();
        let at_zero = tame_symbol(&s, &Place::Finite(Poly::x(&k))).unwrap();
        assert_eq!(canonical(&at_zero).unwrap(), canonical(&MilnorElement::symbol(&k, vec![4]).unwrap()).unwrap());
        let at_inf = tame_symbol(&s, &Place::Infinity).unwrap();
        let expected = MilnorElement::symbol(&k, vec![4]).unwrap().neg();
        assert_eq!(canonical(&at_inf).unwrap(), canonical(&expected).unwrap());
    }

    #[test]
    fn residues_of_t_minus_one_t() {
        let (k, kt) = setup(5);
        let s = MilnorElement::symbol(&kt, vec![poly(&k, &[-1, 1]), kt.variable()]).unwrap();
        let r0 = tame_symbol(&s, &Place::Finite(Poly::x(&k))).unwrap();
        assert_eq!(canonical(&r0).unwrap(), canonical(&MilnorElement::symbol(&k, vec![4]).unwrap()).unwrap());
        let r1 = tame_symbol(&s, &Place::Finite(Poly::linear(&k, &1))).unwrap();
        assert!(canonical(&r1).unwrap().is_zero());
        let r2 = tame_symbol(&s, &Place::Finite(Poly::from_ints(&k, &[2, 0, 1]))).unwrap();
        assert!(r2.is_formally_zero());
    }

    #[test]
    fn degree_one_residue_is_valuation() {
        let (k, kt) = setup(7);
        let g = RatFunc::new(Poly::linear(&k, &2).pow(3), Poly::from_ints(&k, &[1, 0, 1])).unwrap();
        let s = MilnorElement::symbol(&kt, vec![g]).unwrap();
        assert_eq!(tame_symbol(&s, &Place::Finite(Poly::linear(&k, &2))).unwrap(), MilnorElement::integer(&k, 3));
        let pi = Place::Finite(Poly::from_ints(&k, &[1, 0, 1]));
        let r = tame_symbol(&s, &pi).unwrap();
        assert_eq!(r.degree(), 0);
        assert_eq!(r.terms().map(|(_, c)| c).collect::<Vec<_>>(), vec![-1]);
        assert_eq!(tame_symbol(&s, &Place::Infinity).unwrap(), MilnorElement::integer(&k, -1));
    }

    #[test]
    fn matches_two_entry_closed_form() {
        let (k, kt) = setup(7);
        let f = RatFunc::new(Poly::linear(&k, &2).pow(2).mul(&Poly::linear(&k, &5)), Poly::x(&k)).unwrap();
        let g = RatFunc::new(Poly::linear(&k, &2), Poly::linear(&k, &5).pow(3)).unwrap();
        let s = MilnorElement::symbol(&kt, vec![f.clone(), g.clone()]).unwrap();
        for place in [
            Place::Finite(Poly::linear(&k, &2)),
            Place::Finite(Poly::linear(&k, &5)),
            Place::Finite(Poly::x(&k)),
            Place::Infinity,
        ] {
            let expected = tame_symbol_two_entries(&kt, &f, &g, &place).unwrap();
            let got = tame_symbol(&s, &place).unwrap();
            assert_eq!(
                canonical(&got).unwrap(),
                canonical(&MilnorElement::symbol(&k, vec![expected]).unwrap()).unwrap(),
                "place {place:?}"
            );
        }
    }

    #[test]
    fn rejects_bad_places() {
        let (k, kt) = setup(5);
        let s = MilnorElement::symbol(&kt, vec![kt.variable()]).unwrap();
        let reducible = Place::Finite(Poly::from_ints(&k, &[-1, 0, 1]));
        assert!(matches!(tame_symbol(&s, &reducible), Err(MilnorError::BadPlace(..))));
        let other = Place::Finite(Poly::x(&FiniteField::prime(7).unwrap()));
        assert!(matches!(tame_symbol(&s, &other), Err(MilnorError::BadPlace(..))));
        let zero_degree = MilnorElement::integer(&kt, 2);
        assert_eq!(tame_symbol(&zero_degree, &Place::Infinity), Err(MilnorError::DegreeZeroResidue));
    }
}
