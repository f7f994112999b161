//! Randomized property suites with independent oracles, one per acceptance
//! criterion. Reports carry no timings so equal seeds give equal bytes.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::field::{
    poly_resultant, squarefree_decomposition, Field, FiniteField, Poly, RatFunc, RationalFunctionField,
};
use crate::framed::{homotopy_check, multilinearity_family, random_strict_family, rho, sigma, FramedDatum};
use crate::framing::{
    apply_transvections, external_product, reduce_to_projection, shuffle_coherence, stabilize_big_n, stabilize_n,
    Matrix,
};
use crate::milnor::{canonical, restriction, transfer, Canonicalize, MilnorElement};
use crate::reciprocity::{random_ratfunc, verify_weil};

pub const CRITERIA: [(u8, &str); 8] = [
    (1, "rho-sigma-identity"),
    (2, "multilinearity-homotopy"),
    (3, "steinberg-relations"),
    (4, "weil-reciprocity"),
    (5, "resultant-oracle"),
    (6, "homotopy-invariance"),
    (7, "projection-formula"),
    (8, "framing-reduction"),
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CriterionOutcome {
    pub id: u8,
    pub name: &'static str,
    pub cases: usize,
    pub failures: usize,
    /// First failing instance, if any.
    pub first_failure: Option<String>,
}

impl CriterionOutcome {
    pub fn passed(&self) -> bool {
        self.failures == 0 && self.cases > 0
    }

    pub fn render(&self) -> String {
        let mut line = format!(
            "criterion={} name={} cases={} failures={} status={}",
            self.id,
            self.name,
            self.cases,
            self.failures,
            if self.passed() { "pass" } else { "fail" }
        );
        if let Some(f) = &self.first_failure {
            line.push_str(&format!(" first_failure=\"{f}\""));
        }
        line
    }
}

#[derive(Default)]
struct Tally {
    cases: usize,
    failures: usize,
    first_failure: Option<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(describe());
            }
        }
    }

    fn finish(self, id: u8) -> CriterionOutcome {
        let name = CRITERIA.iter().find(|(i, _)| *i == id).expect("known criterion").1;
        CriterionOutcome { id, name, cases: self.cases, failures: self.failures, first_failure: self.first_failure }
    }
}

fn rng_for(seed: u64, id: u8) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ (id as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

fn field(q: u64) -> FiniteField {
    match q {
        4 => FiniteField::with_degree(2, 2, "y"),
        8 => FiniteField::with_degree(2, 3, "y"),
        9 => FiniteField::with_degree(3, 2, "y"),
        _ => FiniteField::prime(q),
    }
    .expect("small field")
}

fn nonzero(k: &FiniteField, rng: &mut ChaCha8Rng) -> u64 {
    rng.gen_range(1..k.order())
}

fn same<K: Canonicalize>(a: &MilnorElement<K>, b: &MilnorElement<K>) -> bool {
    matches!((canonical(a), canonical(b)), (Ok(x), Ok(y)) if x == y)
}

fn is_zero<K: Canonicalize>(a: &MilnorElement<K>) -> bool {
    canonical(a).is_ok_and(|c| c.is_zero())
}

fn rho_sigma_identity(seed: u64) -> CriterionOutcome {
    let mut rng = rng_for(seed, 1);
    let mut tally = Tally::default();
    for q in [5, 7, 9, 11] {
        let k = field(q);
        for m in 0..=3 {
            for _ in 0..1000 {
                let entries: Vec<u64> = (0..m).map(|_| nonzero(&k, &mut rng)).collect();
                let ok = match (sigma(&k, entries.clone()), MilnorElement::symbol(&k, entries.clone())) {
                    (Ok(d), Ok(s)) => rho(&d).ok() == canonical(&s).ok(),
                    _ => false,
                };
                tally.check(ok, || format!("F{q} {entries:?}"));
            }
        }
    }
    let ku = RationalFunctionField::new(field(5), "u");
    for m in 0..=3 {
        for _ in 0..1000 {
            let entries: Vec<_> = (0..m).map(|_| random_ratfunc(&ku, 2, &mut rng)).collect();
            let ok = match (sigma(&ku, entries.clone()), MilnorElement::symbol(&ku, entries.clone())) {
                (Ok(d), Ok(s)) => rho(&d).ok() == canonical(&s).ok(),
                _ => false,
            };
            tally.check(ok, || format!("F5(u) {entries:?}"));
        }
    }
    tally.finish(1)
}

fn multilinearity(seed: u64) -> CriterionOutcome {
    let mut rng = rng_for(seed, 2);
    let mut tally = Tally::default();
    for q in [5, 7, 9, 11] {
        let k = field(q);
        for _ in 0..500 {
            let (gp, gpp) = (nonzero(&k, &mut rng), nonzero(&k, &mut rng));
            let prod = k.mul(&gp, &gpp);
            let expected0 = Poly::linear(&k, &gp).mul(&Poly::linear(&k, &gpp));
            let expected1 = Poly::linear(&k, &prod).mul(&Poly::linear(&k, &1));
            let ok = multilinearity_family(&k, &gp, &gpp, 0, &[]).is_ok_and(|h| {
                let fibres = h.specialize(&0).is_ok_and(|d| d.framing() == &expected0)
                    && h.specialize(&1).is_ok_and(|d| d.framing() == &expected1);
                fibres && homotopy_check(&h).is_ok_and(|r| r.equal)
            });
            let sum = MilnorElement::from_terms(&k, 1, [(1, vec![gp]), (1, vec![gpp])]).expect("nonzero");
            let single = MilnorElement::from_terms(&k, 1, [(1, vec![prod])]).expect("nonzero");
            tally.check(ok && same(&sum, &single), || format!("F{q} g'={gp} g''={gpp}"));
        }
    }
    tally.finish(2)
}

fn steinberg(seed: u64) -> CriterionOutcome {
    let mut rng = rng_for(seed, 3);
    let mut tally = Tally::default();
    for q in [2, 3, 4, 5, 7, 8, 9, 11] {
        let k = field(q);
        for a in k.nonzero_elements() {
            let one_minus = k.sub(&1, &a);
            if !k.is_zero(&one_minus) {
                let s = MilnorElement::symbol(&k, vec![a, one_minus]).expect("nonzero");
                tally.check(is_zero(&s), || format!("F{q} {{{a}, 1-{a}}}"));
            }
            let s = MilnorElement::symbol(&k, vec![a, k.neg(&a)]).expect("nonzero");
            tally.check(is_zero(&s), || format!("F{q} {{{a}, -{a}}}"));
            for b in k.nonzero_elements() {
                let s = MilnorElement::from_terms(&k, 2, [(1, vec![a, b]), (1, vec![b, a])]).expect("nonzero");
                tally.check(is_zero(&s), || format!("F{q} {{{a},{b}}}+{{{b},{a}}}"));
            }
        }
    }
    let fields: Vec<_> = [5, 7, 9, 11].into_iter().map(|q| RationalFunctionField::new(field(q), "t")).collect();
    for i in 0..10_000 {
        let kt = &fields[i % fields.len()];
        let a = random_ratfunc(kt, 3, &mut rng);
        let b = random_ratfunc(kt, 3, &mut rng);
        let one_minus = kt.one().sub(&a);
        let mut ok = true;
        if !one_minus.is_zero() {
            ok &= MilnorElement::symbol(kt, vec![a.clone(), one_minus]).is_ok_and(|s| is_zero(&s));
        }
        ok &= MilnorElement::symbol(kt, vec![a.clone(), a.neg()]).is_ok_and(|s| is_zero(&s));
        ok &= MilnorElement::from_terms(kt, 2, [(1, vec![a.clone(), b.clone()]), (1, vec![b.clone(), a.clone()])])
            .is_ok_and(|s| is_zero(&s));
        tally.check(ok, || format!("{} a={} b={}", kt.name(), a.format("t"), b.format("t")));
    }
    tally.finish(3)
}

fn weil(seed: u64) -> CriterionOutcome {
    let mut rng = rng_for(seed, 4);
    let mut tally = Tally::default();
    let fields: Vec<_> = [5, 7, 9, 11].into_iter().map(|q| RationalFunctionField::new(field(q), "t")).collect();
    for i in 0..1000 {
        let kt = &fields[i % fields.len()];
        let m = 1 + (i / fields.len()) % 3;
        let entries: Vec<_> = (0..m).map(|_| random_ratfunc(kt, 6, &mut rng)).collect();
        let ok = MilnorElement::symbol(kt, entries.clone())
            .map_err(|e| e.to_string())
            .and_then(|s| verify_weil(&s).map_err(|e| e.to_string()))
            .is_ok_and(|r| r.holds());
        tally.check(ok, || {
            let shown: Vec<_> = entries.iter().map(|g| g.format("t")).collect();
            format!("{} {{{}}}", kt.name(), shown.join(", "))
        });
    }
    tally.finish(4)
}

/// `prod_s (Res(s, num g) / Res(s, den g))^e` over the squarefree
/// decomposition `f^ = prod s^e`.
fn resultant_class(f: &Poly<FiniteField>, g: &RatFunc<FiniteField>) -> Option<u64> {
    let k = f.field();
    let mut acc = 1;
    for (s, e) in squarefree_decomposition(f) {
        let n = poly_resultant(&s, g.num()).ok()?;
        let d = poly_resultant(&s, g.den()).ok()?;
        acc = k.mul(&acc, &k.pow(&k.div(&n, &d)?, e as u128));
    }
    Some(acc)
}

fn resultant_oracle(seed: u64) -> CriterionOutcome {
    let mut rng = rng_for(seed, 5);
    let mut tally = Tally::default();
    let fields: Vec<_> = [2, 3, 4, 5, 7, 8, 9, 11].into_iter().map(field).collect();
    let mut i = 0;
    while tally.cases < 10_000 {
        let k = &fields[i % fields.len()];
        i += 1;
        let kt = RationalFunctionField::new(k.clone(), "x");
        let deg = rng.gen_range(1..=6);
        let mut coeffs: Vec<u64> = (0..deg).map(|_| rng.gen_range(0..k.order())).collect();
        coeffs.push(nonzero(k, &mut rng));
        let f = Poly::new(k, coeffs);
        let g = random_ratfunc(&kt, 4, &mut rng);
        let Ok(d) = FramedDatum::new(f.clone(), vec![g.clone()]) else {
            continue;
        };
        let ok = match (rho(&d), resultant_class(&f, &g)) {
            (Ok(r), Some(v)) => MilnorElement::symbol(k, vec![v]).is_ok_and(|s| canonical(&s).ok() == Some(r)),
            _ => false,
        };
        tally.check(ok, || format!("{} f={} g={}", k.name(), f.format("x"), g.format("x")));
    }
    tally.finish(5)
}

fn homotopy_invariance(seed: u64) -> CriterionOutcome {
    let mut rng = rng_for(seed, 6);
    let mut tally = Tally::default();
    for q in [5, 7, 9, 11] {
        let k = field(q);
        for i in 0..1000 {
            let h = random_strict_family(&k, i % 4, 5, 3, &mut rng);
            let ok = homotopy_check(&h).is_ok_and(|r| r.equal);
            tally.check(ok, || format!("F{q} F={}", h.family().format("x")));
        }
    }
    tally.finish(6)
}

fn random_element(k: &FiniteField, m: usize, rng: &mut ChaCha8Rng) -> MilnorElement<FiniteField> {
    let terms: Vec<(i64, Vec<u64>)> =
        (0..rng.gen_range(1..=3)).map(|_| (rng.gen_range(-3..=3), (0..m).map(|_| nonzero(k, rng)).collect())).collect();
    MilnorElement::from_terms(k, m, terms).expect("nonzero entries")
}

fn projection_formula(seed: u64) -> CriterionOutcome {
    let mut rng = rng_for(seed, 7);
    let mut tally = Tally::default();
    for q in [2, 3, 4, 5, 7, 8, 9] {
        let k = field(q);
        for d in 1..=3u32 {
            let e = if d == 1 { k.clone() } else { k.extend(d, "z").expect("within size limits") };
            for i in 0..1000 {
                let m = i % 3;
                let a = random_element(&k, m, &mut rng);
                let ok = restriction(&a, &e)
                    .and_then(|r| transfer(&r, &k))
                    .is_ok_and(|back| same(&back, &a.scale(d as i64)));
                tally.check(ok, || format!("F{q} d={d} a={a}"));
            }
        }
    }
    tally.finish(7)
}

fn random_full_rank(k: &FiniteField, n: usize, cols: usize, rng: &mut ChaCha8Rng) -> Matrix<FiniteField> {
    loop {
        let rows = (0..n).map(|_| (0..cols).map(|_| rng.gen_range(0..k.order())).collect()).collect();
        let a = Matrix::from_rows(k, rows).expect("rectangular");
        if a.rank() == n {
            return a;
        }
    }
}

fn framing_reduction(seed: u64) -> CriterionOutcome {
    let mut rng = rng_for(seed, 8);
    let mut tally = Tally::default();
    let fields: Vec<_> = [2, 3, 4, 5, 7].into_iter().map(field).collect();
    for i in 0..10_000 {
        let k = &fields[i % fields.len()];
        let n = rng.gen_range(1..=4);
        let cols = rng.gen_range(n + 1..=7);
        let a = random_full_rank(k, n, cols, &mut rng);
        let ok = reduce_to_projection(&a).is_ok_and(|ops| {
            let product =
                ops.iter().fold(Matrix::identity(k, cols), |acc, t| acc.mul(&t.matrix(k, cols)).expect("square"));
            ops.len() <= n * (cols + 2)
                && ops.iter().all(|t| t.matrix(k, cols).determinant().is_ok_and(|d| d == 1))
                && a.mul(&product).is_ok_and(|p| p.is_projection())
                && apply_transvections(&a, &ops).is_projection()
        });
        let v: Vec<u64> = (0..n).map(|_| rng.gen_range(0..k.order())).collect();
        let (sn, vn) = stabilize_n(&a, &v);
        let (ns, vs) = stabilize_n(&stabilize_big_n(&a), &v);
        let commute = stabilize_big_n(&sn) == ns && vn == vs;
        let (n2, m2) = (rng.gen_range(0..=2), rng.gen_range(0..=2));
        let dims = [(n, cols - n), (n2, m2), (rng.gen_range(0..=2), rng.gen_range(0..=2))];
        let proj = external_product(&Matrix::projection(k, n, cols), &Matrix::projection(k, n2, n2 + m2))
            .is_ok_and(|p| p.is_projection());
        tally.check(ok && commute && proj && shuffle_coherence(k, dims), || format!("{} A={}", k.name(), a.format()));
    }
    tally.finish(8)
}

/// Runs one criterion (1 to 8).
pub fn run_criterion(id: u8, seed: u64) -> Option<CriterionOutcome> {
    Some(match id {
        1 => rho_sigma_identity(seed),
        2 => multilinearity(seed),
        3 => steinberg(seed),
        4 => weil(seed),
        5 => resultant_oracle(seed),
        6 => homotopy_invariance(seed),
        7 => projection_formula(seed),
        8 => framing_reduction(seed),
        _ => return None,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SelftestReport {
    pub seed: u64,
    pub outcomes: Vec<CriterionOutcome>,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.outcomes.iter().all(CriterionOutcome::passed)
    }

    pub fn render(&self) -> String {
        let mut out = format!("selftest seed={}\n", self.seed);
        for o in &self.outcomes {
            out.push_str(&o.render());
            out.push('\n');
        }
        let passed = self.outcomes.iter().filter(|o| o.passed()).count();
        out.push_str(&format!("summary passed={} failed={}\n", passed, self.outcomes.len() - passed));
        out
    }
}

pub fn run_all(seed: u64) -> SelftestReport {
    SelftestReport { seed, outcomes: CRITERIA.iter().filter_map(|(id, _)| run_criterion(*id, seed)).collect() }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn resultant_class_matches_hand_value() {
        let f7 = field(7);
        let f = Poly::linear(&f7, &2).pow(2).mul(&Poly::linear(&f7, &3));
        assert_eq!(resultant_class(&f, &RatFunc::from_poly(Poly::x(&f7))), Some(5));
    }

    #[test]
    fn unknown_criterion() {
        assert!(run_criterion(9, 0).is_none());
    }
}
