use super::{Field, FieldError, Poly};

/// `Res_x(f, g)` by the Euclidean recursion
/// `Res(f, g) = (-1)^{deg f deg g} lc(g)^{deg f - deg r} Res(g, r)`, `r = f mod g`.
///
/// Conventions: `Res(f, c) = c^{deg f}` for a nonzero constant `c`
/// (so `Res(f, 1) = 1`), and `Res(f, 0) = 0` for nonconstant `f`.
pub fn poly_resultant<F: Field>(f: &Poly<F>, g: &Poly<F>) -> Result<F::Elem, FieldError> {
    let k = f.field();
    if f.is_zero() && g.is_zero() {
        return Err(FieldError::BothZero);
    }
    if f.is_zero() || g.is_zero() {
        let other = if f.is_zero() { g } else { f };
        return Ok(if other.deg() == 0 { k.one() } else { k.zero() });
    }
    let mut a = f.clone();
    let mut b = g.clone();
    let mut acc = k.one();
    loop {
        let (m, n) = (a.deg(), b.deg());
        if n == 0 {
            return Ok(k.mul(&acc, &k.pow(&b.lc(), m as u128)));
        }
        if m == 0 {
            return Ok(k.mul(&acc, &k.pow(&a.lc(), n as u128)));
        }
        let r = a.rem(&b)?;
        if r.is_zero() {
            return Ok(k.zero());
        }
        if (m * n) % 2 == 1 {
            acc = k.neg(&acc);
        }
        acc = k.mul(&acc, &k.pow(&b.lc(), (m - r.deg()) as u128));
        a = b;
        b = r;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FiniteField;

    /// Determinant of the Sylvester matrix by Gaussian elimination.
    #[allow(clippy::needless_range_loop)]
    fn sylvester<F: Field>(f: &Poly<F>, g: &Poly<F>) -> F::Elem {
        let k = f.field();
        let (m, n) = (f.deg(), g.deg());
        let size = m + n;
        if size == 0 {
            return k.one();
        }
        let mut rows: Vec<Vec<F::Elem>> = Vec::new();
        for i in 0..n {
            let mut row = vec![k.zero(); size];
            for (j, c) in f.coeffs().iter().rev().enumerate() {
                row[i + j] = c.clone();
            }
            rows.push(row);
        }
        for i in 0..m {
            let mut row = vec![k.zero(); size];
            for (j, c) in g.coeffs().iter().rev().enumerate() {
                row[i + j] = c.clone();
            }
            rows.push(row);
        }
        let mut det = k.one();
        for col in 0..size {
            let Some(piv) = (col..size).find(|&r| !k.is_zero(&rows[r][col])) else {
                return k.zero();
            };
            if piv != col {
                rows.swap(piv, col);
                det = k.neg(&det);
            }
            let inv = k.inv(&rows[col][col]).unwrap();
            det = k.mul(&det, &rows[col][col]);
            for r in col + 1..size {
                let factor = k.mul(&rows[r][col], &inv);
                for c in col..size {
                    let t = k.mul(&factor, &rows[col][c]);
                    rows[r][c] = k.sub(&rows[r][c], &t);
                }
            }
        }
        det
    }

    #[test]
    fn examples() {
        let f3 = FiniteField::prime(3).unwrap();
        assert_eq!(poly_resultant(&Poly::from_ints(&f3, &[1, 0, 1]), &Poly::x(&f3)).unwrap(), 1);
        let f7 = FiniteField::prime(7).unwrap();
        let f = Poly::linear(&f7, &2).mul(&Poly::linear(&f7, &3));
        assert_eq!(poly_resultant(&f, &Poly::x(&f7)).unwrap(), 6);
        assert_eq!(poly_resultant(&f, &Poly::one(&f7)).unwrap(), 1);
        assert_eq!(poly_resultant(&Poly::zero(&f7), &Poly::zero(&f7)), Err(FieldError::BothZero));
    }

    #[test]
    fn matches_sylvester_determinant() {
        let k = FiniteField::prime(11).unwrap();
        let mut seed = 7u64;
        let mut next = || {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (seed >> 33) as i64
        };
        for _ in 0..300 {
            let df = (next() % 6 + 1) as usize;
            let dg = (next() % 5 + 1) as usize;
            let f = Poly::from_ints(&k, &(0..=df).map(|_| next()).collect::<Vec<_>>());
            let g = Poly::from_ints(&k, &(0..=dg).map(|_| next()).collect::<Vec<_>>());
            if f.is_zero() || g.is_zero() || f.deg() == 0 || g.deg() == 0 {
                continue;
            }
            assert_eq!(poly_resultant(&f, &g).unwrap(), sylvester(&f, &g), "f={f} g={g}");
        }
    }
}
