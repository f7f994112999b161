//! Factorization over finite fields: squarefree decomposition, distinct-degree
//! splitting and Cantor–Zassenhaus equal-degree splitting with a PRNG seeded
//! from the input, so results are bit-reproducible.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Field, FieldError, FiniteField, Poly};

/// `f = leading * prod factor^multiplicity`, factors monic irreducible and
/// sorted by (degree, coefficient order).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub leading: u64,
    pub factors: Vec<(Poly<FiniteField>, usize)>,
}

impl Factorization {
    pub fn expand(&self, k: &FiniteField) -> Poly<FiniteField> {
        self.factors.iter().fold(Poly::constant(k, self.leading), |acc, (p, m)| acc.mul(&p.pow(*m as u64)))
    }
}

fn seed_of(f: &Poly<FiniteField>) -> u64 {
    // splitmix64 over the coefficient indices
    let mut h = 0x9E37_79B9_7F4A_7C15u64 ^ f.coeffs().len() as u64;
    for &c in f.coeffs() {
        h = h.wrapping_add(c).wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = h;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        h = z ^ (z >> 31);
    }
    h
}

/// `c^(1/p)` in `F_q` is `c^(q/p)`.
fn pth_root_poly(f: &Poly<FiniteField>) -> Poly<FiniteField> {
    let k = f.field();
    let p = k.characteristic() as usize;
    let e = (k.order() / k.characteristic()) as u128;
    let coeffs = f.coeffs().iter().step_by(p).map(|c| k.pow(c, e)).collect();
    Poly::new(k, coeffs)
}

/// Squarefree decomposition of a nonzero polynomial: pairwise coprime monic
/// squarefree pieces `(g, m)` with `monic(f) = prod g^m`.
pub fn squarefree_decomposition(f: &Poly<FiniteField>) -> Vec<(Poly<FiniteField>, usize)> {
    let mut out = Vec::new();
    sqf_into(&f.monic(), 1, &mut out);
    out
}

fn sqf_into(f: &Poly<FiniteField>, scale: usize, out: &mut Vec<(Poly<FiniteField>, usize)>) {
    if f.deg() == 0 {
        return;
    }
    let p = f.field().characteristic() as usize;
    let df = f.derivative();
    if df.is_zero() {
        sqf_into(&pth_root_poly(f), scale * p, out);
        return;
    }
    let mut c = f.gcd(&df);
    let mut w = f.div_exact(&c).expect("gcd divides f");
    let mut i = 1;
    while w.deg() > 0 {
        let y = w.gcd(&c);
        let z = w.div_exact(&y).expect("gcd divides w");
        if z.deg() > 0 {
            out.push((z, i * scale));
        }
        i += 1;
        c = c.div_exact(&y).expect("gcd divides c");
        w = y;
    }
    if c.deg() > 0 {
        sqf_into(&pth_root_poly(&c), scale * p, out);
    }
}

/// `x^(q^n) mod f` by repeated Frobenius.
fn frobenius_power(h: &Poly<FiniteField>, n: usize, f: &Poly<FiniteField>) -> Poly<FiniteField> {
    let q = f.field().order() as u128;
    (0..n).fold(h.clone(), |acc, _| acc.pow_mod(q, f).expect("f nonzero"))
}

/// Distinct-degree splitting of a monic squarefree `f`: pairs `(g, d)` with
/// `g` the product of all irreducible factors of degree `d`.
fn distinct_degree(f: &Poly<FiniteField>) -> Vec<(Poly<FiniteField>, usize)> {
    let k = f.field();
    let x = Poly::x(k);
    let mut rest = f.clone();
    let mut h = x.rem(&rest).expect("f nonzero");
    let mut out = Vec::new();
    let mut d = 1;
    while rest.deg() >= 2 * d {
        h = frobenius_power(&h, 1, &rest);
        let g = h.sub(&x).gcd(&rest);
        if g.deg() > 0 {
            rest = rest.div_exact(&g).expect("gcd divides");
            h = h.rem(&rest).expect("rest nonzero");
            out.push((g, d));
        }
        d += 1;
    }
    if rest.deg() > 0 {
        let d = rest.deg();
        out.push((rest, d));
    }
    out
}

fn random_poly(k: &FiniteField, below: usize, rng: &mut ChaCha8Rng) -> Poly<FiniteField> {
    Poly::new(k, (0..below).map(|_| rng.gen_range(0..k.order())).collect())
}

/// Cantor–Zassenhaus splitting of a monic squarefree `f` whose irreducible
/// factors all have degree `d`.
fn equal_degree(f: &Poly<FiniteField>, d: usize, rng: &mut ChaCha8Rng, out: &mut Vec<Poly<FiniteField>>) {
    let n = f.deg();
    if n == d {
        out.push(f.clone());
        return;
    }
    let k = f.field();
    let q = k.order();
    loop {
        let a = random_poly(k, n, rng);
        if a.deg() == 0 {
            continue;
        }
        let mut g = a.gcd(f);
        if g.deg() == 0 {
            let b = if q % 2 == 1 {
                // a^((q^d - 1)/2) = (a^(1 + q + ... + q^(d-1)))^((q-1)/2)
                let mut conj = a.rem(f).expect("f nonzero");
                let mut norm = Poly::one(k);
                for _ in 0..d {
                    norm = norm.mul_mod(&conj, f).expect("f nonzero");
                    conj = conj.pow_mod(q as u128, f).expect("f nonzero");
                }
                norm.pow_mod(((q - 1) / 2) as u128, f).expect("f nonzero").sub(&Poly::one(k))
            } else {
                // absolute trace to F_2: a + a^2 + ... + a^(2^(e d - 1))
                let e = q.trailing_zeros() as usize;
                let mut term = a.rem(f).expect("f nonzero");
                let mut acc = term.clone();
                for _ in 1..e * d {
                    term = term.mul_mod(&term, f).expect("f nonzero");
                    acc = acc.add(&term);
                }
                acc
            };
            g = b.gcd(f);
        }
        if g.deg() > 0 && g.deg() < n {
            let h = f.div_exact(&g).expect("gcd divides");
            equal_degree(&g, d, rng, out);
            equal_degree(&h, d, rng, out);
            return;
        }
    }
}

/// Complete factorization over a finite field.
pub fn poly_factor(f: &Poly<FiniteField>) -> Result<Factorization, FieldError> {
    if f.is_zero() {
        return Err(FieldError::ZeroPolynomial);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed_of(f));
    let mut factors = Vec::new();
    for (piece, mult) in squarefree_decomposition(f) {
        for (block, d) in distinct_degree(&piece) {
            let mut irr = Vec::new();
            equal_degree(&block, d, &mut rng, &mut irr);
            factors.extend(irr.into_iter().map(|g| (g, mult)));
        }
    }
    factors.sort();
    debug_assert!(factors.windows(2).all(|w| w[0].0 != w[1].0));
    Ok(Factorization { leading: f.lc(), factors })
}

/// Irreducibility over a finite field (constants are not irreducible).
pub fn is_irreducible(f: &Poly<FiniteField>) -> bool {
    let n = match f.degree() {
        None | Some(0) => return false,
        Some(n) => n,
    };
    let f = f.monic();
    let x = Poly::x(f.field());
    let mut h = x.rem(&f).expect("f nonzero");
    for _ in 1..=n / 2 {
        h = frobenius_power(&h, 1, &f);
        if h.sub(&x).gcd(&f).deg() > 0 {
            return false;
        }
    }
    true
}

/// The smallest monic irreducible polynomial of degree `d` in the canonical
/// polynomial order (constant term compared first).
pub fn smallest_irreducible(k: &FiniteField, d: usize) -> Poly<FiniteField> {
    assert!(d >= 1);
    let q = k.order();
    let total = q.checked_pow(d as u32).expect("degree within range");
    for n in 0..total {
        // c_0 is the most significant digit so that n follows the order
        let mut coeffs = vec![0u64; d + 1];
        let mut m = n;
        for i in (0..d).rev() {
            coeffs[i] = m % q;
            m /= q;
        }
        coeffs[d] = 1;
        let cand = Poly::new(k, coeffs);
        if is_irreducible(&cand) {
            return cand;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn roots_brute(f: &Poly<FiniteField>) -> Vec<u64> {
        f.field().elements().filter(|a| f.eval(a) == 0).collect()
    }

    #[test]
    fn factor_examples() {
        let f5 = FiniteField::prime(5).unwrap();
        let f = Poly::from_ints(&f5, &[-1, 0, 1]);
        assert_eq!(roots_brute(&f), vec![1, 4]);
        let fac = poly_factor(&f).unwrap();
        assert_eq!(fac.leading, 1);
        assert_eq!(fac.factors, vec![(Poly::linear(&f5, &4), 1), (Poly::linear(&f5, &1), 1)]);

        let f3 = FiniteField::prime(3).unwrap();
        let g = Poly::from_ints(&f3, &[1, 0, 1]);
        assert!(roots_brute(&g).is_empty());
        assert_eq!(poly_factor(&g).unwrap().factors, vec![(g.clone(), 1)]);

        let f7 = FiniteField::prime(7).unwrap();
        let h = Poly::linear(&f7, &2).pow(2).mul(&Poly::linear(&f7, &3));
        let fac = poly_factor(&h).unwrap();
        assert_eq!(fac.factors, vec![(Poly::linear(&f7, &3), 1), (Poly::linear(&f7, &2), 2)]);
        assert_eq!(poly_factor(&Poly::zero(&f7)), Err(FieldError::ZeroPolynomial));
    }

    #[test]
    fn inseparable_pieces() {
        // (x^2 + 1)^3 * x^6 over F_3 and x^4 + x^2 + 1 = (x^2+x+1)^2 over F_2
        let f3 = FiniteField::prime(3).unwrap();
        let f = Poly::from_ints(&f3, &[1, 0, 1]).pow(3).mul(&Poly::x(&f3).pow(6)).scale(&2);
        let fac = poly_factor(&f).unwrap();
        assert_eq!(fac.leading, 2);
        assert_eq!(fac.factors, vec![(Poly::x(&f3), 6), (Poly::from_ints(&f3, &[1, 0, 1]), 3)]);
        let f2 = FiniteField::prime(2).unwrap();
        let g = Poly::from_ints(&f2, &[1, 0, 1, 0, 1]);
        assert_eq!(poly_factor(&g).unwrap().factors, vec![(Poly::from_ints(&f2, &[1, 1, 1]), 2)]);
    }

    #[test]
    fn smallest_irreducibles() {
        let f3 = FiniteField::prime(3).unwrap();
        assert_eq!(smallest_irreducible(&f3, 2), Poly::from_ints(&f3, &[1, 0, 1]));
        let f2 = FiniteField::prime(2).unwrap();
        assert_eq!(smallest_irreducible(&f2, 3), Poly::from_ints(&f2, &[1, 0, 1, 1]));
    }

    #[test]
    fn deterministic_output() {
        let f9 = FiniteField::with_degree(3, 2, "y").unwrap();
        let f = Poly::new(&f9, vec![4, 7, 0, 2, 5, 1, 3, 8, 1]);
        assert_eq!(poly_factor(&f).unwrap(), poly_factor(&f).unwrap());
    }
}
