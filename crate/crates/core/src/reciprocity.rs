//! Residues on the projective line over a finite field and the Weil
//! reciprocity law `sum_v Tr_{k(v)/k} d_v(a) = 0`.

use std::collections::BTreeSet;

use rand::Rng;
use thiserror::Error;

use crate::field::{poly_factor, Field, FiniteField, Poly, RatFunc, RationalFunctionField};
use crate::milnor::{
    canonical, residue_field_of, tame_symbol, transfer, CanonicalForm, FiniteCanonical, MilnorElement, MilnorError,
    Place,
};

type FunctionField = RationalFunctionField<FiniteField>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReciprocityError {
    #[error("function {0} is zero")]
    ZeroFunction(usize),
    #[error("framing function must not be the constant {0}")]
    DegenerateFraming(u64),
    #[error("g_{index} is not a unit at {place}")]
    NotUnit { index: usize, place: String },
    #[error(transparent)]
    Milnor(#[from] MilnorError),
}

/// Places where some input has a zero or a pole, sorted (finite places by
/// polynomial order, then infinity).
pub fn support_places(gs: &[RatFunc<FiniteField>]) -> Result<Vec<Place>, ReciprocityError> {
    let mut finite = BTreeSet::new();
    let mut infinite = false;
    for (i, g) in gs.iter().enumerate() {
        if g.is_zero() {
            return Err(ReciprocityError::ZeroFunction(i));
        }
        for p in [g.num(), g.den()] {
            if p.deg() > 0 {
                finite.extend(poly_factor(p).map_err(MilnorError::from)?.factors.into_iter().map(|(pi, _)| pi));
            }
        }
        infinite |= g.degree() != 0;
    }
    let mut out: Vec<Place> = finite.into_iter().map(Place::Finite).collect();
    if infinite {
        out.push(Place::Infinity);
    }
    Ok(out)
}

/// Residue of `a` at a place; `inf` is handled through `s = 1/t`.
pub fn residue_at(a: &MilnorElement<FunctionField>, place: &Place) -> Result<MilnorElement<FiniteField>, MilnorError> {
    tame_symbol(a, place)
}

#[derive(Debug, Clone)]
pub struct ResidueEntry {
    pub place: Place,
    pub residue: MilnorElement<FiniteField>,
    pub transferred: MilnorElement<FiniteField>,
}

#[derive(Debug, Clone)]
pub struct ResidueReport {
    pub field: FunctionField,
    pub entries: Vec<ResidueEntry>,
    pub total: FiniteCanonical,
}

impl ResidueReport {
    pub fn holds(&self) -> bool {
        self.total.is_zero()
    }
}

fn finite_form(a: &MilnorElement<FiniteField>) -> Result<FiniteCanonical, MilnorError> {
    match canonical(a)? {
        CanonicalForm::Finite(c) => Ok(c),
        CanonicalForm::Function(_) => unreachable!("finite field input"),
    }
}

fn entries_of(a: &MilnorElement<FunctionField>) -> Vec<RatFunc<FiniteField>> {
    let mut seen = BTreeSet::new();
    for (entries, _) in a.terms() {
        seen.extend(entries.iter().cloned());
    }
    seen.into_iter().collect()
}

/// Sum of transferred residues over every place in the support of `a`.
/// The report is returned whether or not the total vanishes.
pub fn verify_weil(a: &MilnorElement<FunctionField>) -> Result<ResidueReport, ReciprocityError> {
    let kt = a.field();
    let base = kt.base();
    let mut entries = Vec::new();
    let mut total = MilnorElement::zero(base, a.degree().saturating_sub(1));
    if a.degree() > 0 {
        for place in support_places(&entries_of(a))? {
            let residue = residue_at(a, &place)?;
            let transferred = transfer(&residue, base)?;
            total = total.add(&transferred)?;
            entries.push(ResidueEntry { place, residue, transferred });
        }
    }
    Ok(ResidueReport { field: kt.clone(), entries, total: finite_form(&total)? })
}

#[derive(Debug, Clone)]
pub struct SmoothCurveReport {
    pub zero_side: FiniteCanonical,
    pub pole_side: FiniteCanonical,
    pub equal: bool,
    /// Whether `f = 1` at every zero and pole of every `g_i`, the hypothesis
    /// under which the two sides are guaranteed to agree.
    pub hypothesis: bool,
}

/// Compares `sum_{f(v)=0} mult_v Tr{g(v)}` against the same sum over the
/// poles of `f`. Each `g_i` must be a unit on the support of `f`.
pub fn smooth_curve_check(
    kt: &FunctionField,
    gs: &[RatFunc<FiniteField>],
    f: &RatFunc<FiniteField>,
) -> Result<SmoothCurveReport, ReciprocityError> {
    let base = kt.base();
    if f.is_zero() || (f.is_constant() && base.is_one(&f.lc())) {
        return Err(ReciprocityError::DegenerateFraming(if f.is_zero() { 0 } else { 1 }));
    }
    if let Some(i) = gs.iter().position(|g| g.is_zero()) {
        return Err(ReciprocityError::ZeroFunction(i));
    }
    let m = gs.len();
    let mut zeros = MilnorElement::zero(base, m);
    let mut poles = MilnorElement::zero(base, m);
    for place in support_places(std::slice::from_ref(f))? {
        let mult = place.valuation(f);
        let residue = residue_field_of(kt, &place)?;
        let mut values = Vec::with_capacity(m);
        for (i, g) in gs.iter().enumerate() {
            if place.valuation(g) != 0 {
                return Err(ReciprocityError::NotUnit { index: i + 1, place: place.format(kt.var()) });
            }
            values.push(value_at(g, &place, &residue));
        }
        let symbol = transfer(&MilnorElement::symbol(&residue, values)?, base)?.scale(mult.abs());
        if mult > 0 {
            zeros = zeros.add(&symbol)?;
        } else {
            poles = poles.add(&symbol)?;
        }
    }
    let zero_side = finite_form(&zeros)?;
    let pole_side = finite_form(&poles)?;
    let hypothesis = f_is_one_on(gs, f)?;
    Ok(SmoothCurveReport { equal: zero_side == pole_side, zero_side, pole_side, hypothesis })
}

/// Value of a unit `g` at a place, in the residue field of that place.
fn value_at(g: &RatFunc<FiniteField>, place: &Place, residue: &FiniteField) -> u64 {
    match place {
        Place::Finite(pi) => crate::field::reduce_into(g, pi, residue).expect("unit at place"),
        Place::Infinity => g.lc(),
    }
}

fn f_is_one_on(gs: &[RatFunc<FiniteField>], f: &RatFunc<FiniteField>) -> Result<bool, ReciprocityError> {
    let kt = RationalFunctionField::new(f.field().clone(), "t");
    for place in support_places(gs)? {
        if place.valuation(f) != 0 {
            return Ok(false);
        }
        let residue = residue_field_of(&kt, &place)?;
        if !residue.is_one(&value_at(f, &place, &residue)) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn random_nonzero_poly<R: Rng>(k: &FiniteField, max_deg: usize, rng: &mut R) -> Poly<FiniteField> {
    loop {
        let deg = rng.gen_range(0..=max_deg);
        let p = Poly::new(k, (0..=deg).map(|_| rng.gen_range(0..k.order())).collect());
        if !p.is_zero() {
            return p;
        }
    }
}

/// A random nonzero rational function with numerator and denominator of
/// degree at most `max_deg`.
pub fn random_ratfunc<R: Rng>(kt: &FunctionField, max_deg: usize, rng: &mut R) -> RatFunc<FiniteField> {
    let k = kt.base();
    let num = random_nonzero_poly(k, max_deg, rng);
    let den = random_nonzero_poly(k, max_deg, rng);
    kt.fraction(num, den).expect("nonzero denominator")
}

/// Random `(g_1..g_m, f)` satisfying the reciprocity hypothesis:
/// `f = (D + h P) / D` with `P` the product of all numerators and
/// denominators, `gcd(D, P) = 1` and `deg(hP) < deg D`, so `f = 1` at every
/// zero and pole of the `g_i` including infinity.
pub fn random_hypothesis_instance<R: Rng>(
    kt: &FunctionField,
    m: usize,
    max_deg: usize,
    rng: &mut R,
) -> (Vec<RatFunc<FiniteField>>, RatFunc<FiniteField>) {
    let k = kt.base();
    let gs: Vec<_> = (0..m).map(|_| random_ratfunc(kt, max_deg, rng)).collect();
    let p = gs.iter().fold(Poly::one(k), |acc, g| acc.mul(g.num()).mul(g.den())).monic();
    loop {
        let h = random_nonzero_poly(k, 2, rng);
        let hp = h.mul(&p);
        let deg_d = hp.deg() + 1 + rng.gen_range(0..2);
        let mut coeffs: Vec<u64> = (0..deg_d).map(|_| rng.gen_range(0..k.order())).collect();
        coeffs.push(1);
        let d = Poly::new(k, coeffs);
        if d.gcd(&p).deg() > 0 {
            continue;
        }
        let f = kt.fraction(d.add(&hp), d).expect("monic denominator");
        return (gs, f);
    }
}
