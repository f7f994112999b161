use rand::Rng;

use crate::field::{poly_resultant, Field, FiniteField, Poly, RatFunc, RationalFunctionField};
use crate::milnor::CanonicalForm;

use super::{rho, FramedBase, FramedDatum, FramedError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HomotopyMode {
    /// Targets invertible on the whole family: resultants are nonzero
    /// constants in `t`.
    Strict,
    /// Only the fibres over `t = 0` and `t = 1` are checked.
    Endpoint,
}

impl HomotopyMode {
    pub fn name(&self) -> &'static str {
        match self {
            HomotopyMode::Strict => "strict",
            HomotopyMode::Endpoint => "endpoint",
        }
    }
}

type TPoly<K> = Poly<RationalFunctionField<K>>;

/// A family `F(t, x)` in `k[t][x]` with targets `num_i / den_i` in
/// `k[t][x]`, stored as polynomials in `x` over `k(t)` whose coefficients
/// are polynomials in `t`.
#[derive(Debug, Clone)]
pub struct HomotopyDatum<K: Field> {
    kt: RationalFunctionField<K>,
    family: TPoly<K>,
    targets: Vec<(TPoly<K>, TPoly<K>)>,
    mode: HomotopyMode,
}

fn is_t_polynomial<K: Field>(p: &TPoly<K>) -> bool {
    p.coeffs().iter().all(|c| c.is_poly())
}

impl<K: Field> HomotopyDatum<K> {
    pub fn new(
        kt: RationalFunctionField<K>,
        family: TPoly<K>,
        targets: Vec<(TPoly<K>, TPoly<K>)>,
        mode: HomotopyMode,
    ) -> Result<Self, FramedError> {
        if family.is_zero() {
            return Err(FramedError::ZeroFraming);
        }
        if !is_t_polynomial(&family) || targets.iter().any(|(n, d)| !is_t_polynomial(n) || !is_t_polynomial(d)) {
            return Err(FramedError::BadFamily("coefficients must be polynomials in t".into()));
        }
        if !family.lc().is_constant() {
            return Err(FramedError::BadFamily(format!(
                "leading x-coefficient {} is not constant",
                kt.format_elem(&family.lc())
            )));
        }
        for (i, (n, d)) in targets.iter().enumerate() {
            if n.is_zero() || d.is_zero() {
                return Err(FramedError::ZeroEntry(i + 1));
            }
        }
        let h = HomotopyDatum { kt, family, targets, mode };
        match mode {
            HomotopyMode::Strict => h.check_strict()?,
            HomotopyMode::Endpoint => {
                let base = h.base().clone();
                h.specialize(&base.zero())?;
                h.specialize(&base.one())?;
            }
        }
        Ok(h)
    }

    fn check_strict(&self) -> Result<(), FramedError> {
        for (i, (n, d)) in self.targets.iter().enumerate() {
            for (which, p) in [("numerator", n), ("denominator", d)] {
                let r = poly_resultant(&self.family, p)?;
                if r.is_zero() || !r.is_constant() {
                    return Err(FramedError::NotStrict(format!(
                        "Res_x(F, {which} of g_{}) = {}",
                        i + 1,
                        self.kt.format_elem(&r)
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn base(&self) -> &K {
        self.kt.base()
    }

    pub fn time_field(&self) -> &RationalFunctionField<K> {
        &self.kt
    }

    pub fn family(&self) -> &TPoly<K> {
        &self.family
    }

    pub fn targets(&self) -> &[(TPoly<K>, TPoly<K>)] {
        &self.targets
    }

    pub fn mode(&self) -> HomotopyMode {
        self.mode
    }

    /// The fibre over `t = t0`.
    pub fn specialize(&self, t0: &K::Elem) -> Result<FramedDatum<K>, FramedError> {
        let base = self.base();
        let at = base.format_elem(t0);
        let fail = |reason: String| FramedError::Specialization { at: at.clone(), reason };
        let eval =
            |p: &TPoly<K>| Poly::new(base, p.coeffs().iter().map(|c| c.eval(t0).expect("polynomial in t")).collect());
        let framing = eval(&self.family);
        let mut targets = Vec::with_capacity(self.targets.len());
        for (i, (n, d)) in self.targets.iter().enumerate() {
            let (n, d) = (eval(n), eval(d));
            if n.is_zero() || d.is_zero() {
                return Err(fail(format!("g_{} degenerates", i + 1)));
            }
            targets.push(RatFunc::new(n, d)?);
        }
        FramedDatum::new(framing, targets).map_err(|e| fail(e.to_string()))
    }
}

#[derive(Debug, Clone)]
pub struct HomotopyReport {
    pub rho0: CanonicalForm,
    pub rho1: CanonicalForm,
    pub equal: bool,
    /// Strict families are guaranteed to have equal ends.
    pub guaranteed: bool,
}

pub fn homotopy_check<K: FramedBase>(h: &HomotopyDatum<K>) -> Result<HomotopyReport, FramedError> {
    let base = h.base();
    let rho0 = rho(&h.specialize(&base.zero())?)?;
    let rho1 = rho(&h.specialize(&base.one())?)?;
    Ok(HomotopyReport { equal: rho0 == rho1, rho0, rho1, guaranteed: h.mode == HomotopyMode::Strict })
}

fn lift<K: Field>(kt: &RationalFunctionField<K>, p: &Poly<K>) -> TPoly<K> {
    p.map(kt, |c| kt.constant(c.clone()))
}

/// `F = x^2 + (-g' - g'' + t (g' + g'' - g' g'' - 1)) x + g' g''`, whose fibres
/// are `(x - g')(x - g'')` at `t = 0` and `(x - g' g'')(x - 1)` at `t = 1`.
/// Slot `slot` carries `x`, the other slots the constants `others`.
pub fn multilinearity_family<K: Field>(
    base: &K,
    gp: &K::Elem,
    gpp: &K::Elem,
    slot: usize,
    others: &[K::Elem],
) -> Result<HomotopyDatum<K>, FramedError> {
    if base.is_zero(gp) || base.is_zero(gpp) {
        return Err(FramedError::ZeroEntry(slot + 1));
    }
    if slot > others.len() {
        return Err(FramedError::BadFamily(format!("slot {} out of range", slot + 1)));
    }
    let kt = RationalFunctionField::new(base.clone(), "t");
    let sum = base.add(gp, gpp);
    let prod = base.mul(gp, gpp);
    let drift = base.sub(&base.sub(&sum, &prod), &base.one());
    let middle = RatFunc::from_poly(Poly::new(base, vec![base.neg(&sum), drift]));
    let family = Poly::new(&kt, vec![kt.constant(prod), middle, kt.one()]);
    let one = Poly::one(&kt);
    let mut targets: Vec<(TPoly<K>, TPoly<K>)> =
        others.iter().map(|c| (Poly::constant(&kt, kt.constant(c.clone())), one.clone())).collect();
    targets.insert(slot, (Poly::x(&kt), one));
    HomotopyDatum::new(kt, family, targets, HomotopyMode::Strict)
}

fn random_poly<R: Rng>(k: &FiniteField, deg: usize, monic: bool, rng: &mut R) -> Poly<FiniteField> {
    let mut c: Vec<u64> = (0..=deg).map(|_| rng.gen_range(0..k.order())).collect();
    if monic {
        c[deg] = 1;
    }
    Poly::new(k, c)
}

/// A random strict family over a finite field.
///
/// Built as `F = f0 + sum_k t^k L r_k` with `f0` monic, `L` a product of
/// polynomials coprime to `f0` and `deg(L r_k) < deg f0`. Then `F` is monic
/// in `x` and `F = f0` modulo each factor of `L`, so targets built from those
/// factors (plus multiples `t s F` on numerators) have constant resultants.
/// The result is checked by [`HomotopyDatum::new`] and redrawn on failure.
pub fn random_strict_family<R: Rng>(
    k: &FiniteField,
    m: usize,
    max_x_degree: usize,
    max_t_degree: usize,
    rng: &mut R,
) -> HomotopyDatum<FiniteField> {
    let kt = RationalFunctionField::new(k.clone(), "t");
    let nonzero = |rng: &mut R| rng.gen_range(1..k.order());
    loop {
        let d0 = rng.gen_range(1..=max_x_degree.max(1));
        let f0 = random_poly(k, d0, true, rng);
        let mut pool: Vec<Poly<FiniteField>> = Vec::new();
        let mut pool_degree = 0;
        for _ in 0..rng.gen_range(0..=2) {
            let p = random_poly(k, rng.gen_range(1..=2), true, rng);
            if pool_degree + p.deg() < d0 && f0.gcd(&p).deg() == 0 {
                pool_degree += p.deg();
                pool.push(p);
            }
        }
        let l = pool.iter().fold(Poly::one(k), |acc, p| acc.mul(p));
        let room = d0 - l.deg();
        let mut coeffs: Vec<RatFunc<FiniteField>> = f0.coeffs().iter().map(|c| kt.constant(*c)).collect();
        for power in 1..=rng.gen_range(1..=max_t_degree.max(1)) {
            let h = l.mul(&random_poly(k, rng.gen_range(0..room), false, rng));
            let tk = RatFunc::from_poly(Poly::monomial(k, 1, power));
            for (j, c) in h.coeffs().iter().enumerate() {
                coeffs[j] = coeffs[j].add(&tk.mul(&kt.constant(*c)));
            }
        }
        let family = Poly::new(&kt, coeffs);
        let t_poly = Poly::constant(&kt, kt.variable());
        let mut targets = Vec::with_capacity(m);
        for _ in 0..m {
            let mut num = Poly::constant(k, nonzero(rng));
            let mut den = Poly::one(k);
            for p in &pool {
                let e: i32 = rng.gen_range(-2..=2);
                if e > 0 {
                    num = num.mul(&p.pow(e as u64));
                } else if e < 0 {
                    den = den.mul(&p.pow((-e) as u64));
                }
            }
            let mut num = lift(&kt, &num);
            if rng.gen_bool(0.5) {
                let s = Poly::constant(&kt, kt.constant(nonzero(rng)));
                num = num.add(&t_poly.mul(&s).mul(&family));
            }
            targets.push((num, lift(&kt, &den)));
        }
        if let Ok(h) = HomotopyDatum::new(kt.clone(), family, targets, HomotopyMode::Strict) {
            return h;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::milnor::{canonical, MilnorElement};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn multilinearity_fibres_over_f7() {
        let f7 = FiniteField::prime(7).unwrap();
        let h = multilinearity_family(&f7, &2, &3, 0, &[]).unwrap();
        let d0 = h.specialize(&0).unwrap();
        let d1 = h.specialize(&1).unwrap();
        assert_eq!(d0.framing(), &Poly::linear(&f7, &2).mul(&Poly::linear(&f7, &3)));
        assert_eq!(d1.framing(), &Poly::linear(&f7, &1).mul(&Poly::linear(&f7, &6)));
        let report = homotopy_check(&h).unwrap();
        assert!(report.equal && report.guaranteed);
        assert_eq!(report.rho0, canonical(&MilnorElement::symbol(&f7, vec![6]).unwrap()).unwrap());
        let trivial = homotopy_check(&multilinearity_family(&f7, &1, &1, 0, &[]).unwrap()).unwrap();
        assert!(trivial.rho0.is_zero() && trivial.rho1.is_zero());
    }

    #[test]
    fn multilinearity_with_other_slots_over_function_field() {
        let f5 = FiniteField::prime(5).unwrap();
        let ku = RationalFunctionField::new(f5.clone(), "u");
        let gp = ku.variable();
        let gpp = ku.fraction(Poly::from_ints(&f5, &[1, 1]), Poly::from_ints(&f5, &[2, 0, 1])).unwrap();
        let other = ku.constant(3);
        let h = multilinearity_family(&ku, &gp, &gpp, 1, std::slice::from_ref(&other)).unwrap();
        let report = homotopy_check(&h).unwrap();
        assert!(report.equal);
        let expected = MilnorElement::symbol(&ku, vec![other.clone(), gp.clone()])
            .unwrap()
            .add(&MilnorElement::symbol(&ku, vec![other, gpp]).unwrap())
            .unwrap();
        assert_eq!(report.rho0, canonical(&expected).unwrap());
    }

    #[test]
    fn endpoint_mode_can_differ() {
        let f7 = FiniteField::prime(7).unwrap();
        let kt = RationalFunctionField::new(f7.clone(), "t");
        // F = x - t, g = 1/(2x - 1): the pole of g crosses Z at t = 1/2
        let family = Poly::new(&kt, vec![kt.variable().neg(), kt.one()]);
        let den = lift(&kt, &Poly::from_ints(&f7, &[-1, 2]));
        let targets = vec![(Poly::one(&kt), den)];
        assert!(matches!(
            HomotopyDatum::new(kt.clone(), family.clone(), targets.clone(), HomotopyMode::Strict),
            Err(FramedError::NotStrict(_))
        ));
        let h = HomotopyDatum::new(kt, family, targets, HomotopyMode::Endpoint).unwrap();
        let report = homotopy_check(&h).unwrap();
        assert!(!report.equal && !report.guaranteed);
    }

    #[test]
    fn rejects_non_finite_families() {
        let f7 = FiniteField::prime(7).unwrap();
        let kt = RationalFunctionField::new(f7, "t");
        let family = Poly::new(&kt, vec![kt.one(), kt.variable()]);
        assert!(matches!(HomotopyDatum::new(kt, family, vec![], HomotopyMode::Strict), Err(FramedError::BadFamily(_))));
    }

    #[test]
    fn random_strict_families_have_equal_ends() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for q in [5u64, 7, 11] {
            let k = FiniteField::prime(q).unwrap();
            for i in 0..40 {
                let h = random_strict_family(&k, i % 4, 5, 3, &mut rng);
                let report = homotopy_check(&h).unwrap();
                assert!(report.equal, "{:?}", h.family());
            }
        }
    }
}
