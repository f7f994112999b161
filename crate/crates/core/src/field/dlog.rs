//! Multiplicative generators and baby-step giant-step discrete logarithms.

use std::collections::HashMap;

use super::finite::MAX_LOG_ORDER;
use super::{Field, FieldError, FiniteField};

/// Distinct prime factors by trial division.
pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn has_full_order(k: &FiniteField, g: u64, cofactors: &[u64]) -> bool {
    g != 0 && cofactors.iter().all(|e| k.pow(&g, *e as u128) != 1)
}

fn smallest_generator(k: &FiniteField) -> u64 {
    let n = k.order() - 1;
    let cofactors: Vec<u64> = prime_factors(n).into_iter().map(|r| n / r).collect();
    k.nonzero_elements().find(|&g| has_full_order(k, g, &cofactors)).expect("F_q^* is cyclic")
}

/// Baby-step table for one generator.
struct Bsgs {
    step: u64,
    baby: HashMap<u64, u64>,
    giant: u64,
}

impl Bsgs {
    fn new(k: &FiniteField, g: u64) -> Self {
        let n = k.order() - 1;
        let step = ((n as f64).sqrt().ceil() as u64).max(1);
        let mut baby = HashMap::with_capacity(step as usize);
        let mut cur = 1u64;
        for j in 0..step {
            baby.entry(cur).or_insert(j);
            cur = k.mul(&cur, &g);
        }
        // g^{-step}
        let giant = k.inv(&k.pow(&g, step as u128)).expect("generator is a unit");
        Bsgs { step, baby, giant }
    }

    fn solve(&self, k: &FiniteField, a: u64) -> Option<u64> {
        let n = k.order() - 1;
        let mut gamma = a;
        for i in 0..=self.step {
            if let Some(j) = self.baby.get(&gamma) {
                return Some((i * self.step + j) % n);
            }
            gamma = k.mul(&gamma, &self.giant);
        }
        None
    }
}

/// Cached generator data of a finite field.
pub(crate) struct GroupData {
    pub(crate) generator: u64,
    table: Bsgs,
}

impl GroupData {
    pub(crate) fn build(k: &FiniteField) -> Self {
        let generator = smallest_generator(k);
        GroupData { generator, table: Bsgs::new(k, generator) }
    }

    pub(crate) fn log(&self, k: &FiniteField, a: u64) -> Option<u64> {
        self.table.solve(k, a)
    }
}

/// The smallest element (in index order) generating `F_q^*`.
pub fn find_generator(k: &FiniteField) -> Result<u64, FieldError> {
    k.generator()
}

/// `x` in `[0, q-2]` with `g^x = a`, by baby-step giant-step.
pub fn discrete_log(k: &FiniteField, a: u64, g: u64) -> Result<u64, FieldError> {
    if a == 0 {
        return Err(FieldError::LogOfZero);
    }
    if a >= k.order() || g == 0 || g >= k.order() {
        return Err(FieldError::Invalid("element index out of range".into()));
    }
    if k.order() > MAX_LOG_ORDER {
        return Err(FieldError::TooLarge(k.order() as u128));
    }
    if g == k.generator()? {
        return k.log(a);
    }
    let n = k.order() - 1;
    let cofactors: Vec<u64> = prime_factors(n).into_iter().map(|r| n / r).collect();
    if !has_full_order(k, g, &cofactors) {
        return Err(FieldError::NotInGroup(k.format_elem(&g)));
    }
    Bsgs::new(k, g).solve(k, a).ok_or_else(|| FieldError::NotInGroup(k.format_elem(&g)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_order(k: &FiniteField, g: u64) -> u64 {
        let mut cur = g;
        let mut n = 1;
        while cur != 1 {
            cur = k.mul(&cur, &g);
            n += 1;
        }
        n
    }

    #[test]
    fn generator_examples() {
        let f7 = FiniteField::prime(7).unwrap();
        assert_eq!(brute_order(&f7, 2), 3);
        assert_eq!(find_generator(&f7).unwrap(), 3);
        assert_eq!(find_generator(&FiniteField::prime(2).unwrap()).unwrap(), 1);

        let f9 = FiniteField::prime_extension(3, &[1, 0, 1], "y").unwrap();
        let expected = f9.nonzero_elements().find(|&g| brute_order(&f9, g) == 8).unwrap();
        assert_eq!(find_generator(&f9).unwrap(), expected);
    }

    #[test]
    fn dlog_examples() {
        let f7 = FiniteField::prime(7).unwrap();
        assert_eq!(discrete_log(&f7, 3, 3).unwrap(), 1);
        assert_eq!(discrete_log(&f7, 2, 3).unwrap(), 2);
        assert_eq!(discrete_log(&f7, 1, 3).unwrap(), 0);
        assert_eq!(discrete_log(&f7, 0, 3), Err(FieldError::LogOfZero));
        // 5 is the other generator of F_7^*
        assert_eq!(discrete_log(&f7, 4, 5).unwrap(), 2);
        assert!(matches!(discrete_log(&f7, 3, 2), Err(FieldError::NotInGroup(_))));
    }

    #[test]
    fn dlog_inverts_exp() {
        for k in [
            FiniteField::prime(11).unwrap(),
            FiniteField::with_degree(2, 5, "y").unwrap(),
            FiniteField::with_degree(3, 4, "y").unwrap(),
            FiniteField::with_degree(101, 2, "y").unwrap(),
        ] {
            let g = k.generator().unwrap();
            let mut cur = 1u64;
            for e in 0..k.order() - 1 {
                assert_eq!(k.log(cur).unwrap(), e);
                cur = k.mul(&cur, &g);
            }
        }
    }
}
