//! Framing matrices: reduction to the standard projection `[I_n | 0]` by
//! column transvections, the `GL_n` action, stabilizations and the external
//! product shuffle.
//!
//! A framing is an `n x N` matrix of rank `n` (the matrix of a surjection
//! onto `n` coordinates). Stabilization and external products read the
//! columns as `n + N` with `N` the number of extra coordinates.

use std::fmt;

use thiserror::Error;

use crate::field::Field;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FramingError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("rank {rank} is less than {rows}")]
    RankDeficient { rank: usize, rows: usize },
    #[error("no spare column: a square framing with determinant {0} cannot be reduced by transvections")]
    InsufficientRoom(String),
    #[error("matrix is singular")]
    Singular,
    #[error("transvection indices must differ and lie below {0}")]
    BadTransvection(usize),
}

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix<F: Field> {
    field: F,
    rows: usize,
    cols: usize,
    data: Vec<F::Elem>,
}

impl<F: Field> Matrix<F> {
    pub fn zeros(field: &F, rows: usize, cols: usize) -> Self {
        Matrix { field: field.clone(), rows, cols, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: &F, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    /// `[I_n | 0]` with `cols` columns.
    pub fn projection(field: &F, n: usize, cols: usize) -> Self {
        let mut m = Self::zeros(field, n, cols);
        for i in 0..n.min(cols) {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_rows(field: &F, rows: Vec<Vec<F::Elem>>) -> Result<Self, FramingError> {
        let cols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != cols) {
            return Err(FramingError::Dimension("rows of unequal length".into()));
        }
        let n = rows.len();
        Ok(Matrix { field: field.clone(), rows: n, cols, data: rows.into_iter().flatten().collect() })
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &F::Elem {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: F::Elem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[F::Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<F::Elem>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn mul(&self, o: &Self) -> Result<Self, FramingError> {
        if self.cols != o.rows {
            return Err(FramingError::Dimension(format!("{}x{} times {}x{}", self.rows, self.cols, o.rows, o.cols)));
        }
        let k = &self.field;
        let mut out = Self::zeros(k, self.rows, o.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if k.is_zero(a) {
                    continue;
                }
                for j in 0..o.cols {
                    let v = k.add(out.get(i, j), &k.mul(a, o.get(l, j)));
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[F::Elem]) -> Result<Vec<F::Elem>, FramingError> {
        if v.len() != self.cols {
            return Err(FramingError::Dimension(format!(
                "{} columns against a vector of height {}",
                self.cols,
                v.len()
            )));
        }
        let k = &self.field;
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(v).fold(k.zero(), |acc, (a, b)| k.add(&acc, &k.mul(a, b))))
            .collect())
    }

    /// Row echelon form; returns the rank and the determinant when square.
    fn eliminate(&self) -> (usize, F::Elem) {
        let k = &self.field;
        let mut m = self.clone();
        let mut det = k.one();
        let mut rank = 0;
        for c in 0..m.cols {
            let Some(p) = (rank..m.rows).find(|&r| !k.is_zero(m.get(r, c))) else {
                det = k.zero();
                continue;
            };
            if p != rank {
                for j in 0..m.cols {
                    m.data.swap(p * m.cols + j, rank * m.cols + j);
                }
                det = k.neg(&det);
            }
            let pivot = m.get(rank, c).clone();
            det = k.mul(&det, &pivot);
            let inv = k.inv(&pivot).expect("nonzero pivot");
            for r in rank + 1..m.rows {
                let factor = k.mul(m.get(r, c), &inv);
                if k.is_zero(&factor) {
                    continue;
                }
                for j in c..m.cols {
                    let v = k.sub(m.get(r, j), &k.mul(&factor, m.get(rank, j)));
                    m.set(r, j, v);
                }
            }
            rank += 1;
        }
        (rank, det)
    }

    pub fn rank(&self) -> usize {
        self.eliminate().0
    }

    pub fn determinant(&self) -> Result<F::Elem, FramingError> {
        if self.rows != self.cols {
            return Err(FramingError::Dimension(format!("determinant of a {}x{} matrix", self.rows, self.cols)));
        }
        Ok(if self.rows == 0 { self.field.one() } else { self.eliminate().1 })
    }

    pub fn is_projection(&self) -> bool {
        *self == Self::projection(&self.field, self.rows, self.cols)
    }

    /// Block sum `diag(self, o)`.
    pub fn direct_sum(&self, o: &Self) -> Self {
        let mut out = Self::zeros(&self.field, self.rows + o.rows, self.cols + o.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
        }
        for i in 0..o.rows {
            for j in 0..o.cols {
                out.set(self.rows + i, self.cols + j, o.get(i, j).clone());
            }
        }
        out
    }

    pub fn format(&self) -> String {
        let rows: Vec<String> = (0..self.rows)
            .map(|i| {
                format!("[{}]", self.row(i).iter().map(|e| self.field.format_elem(e)).collect::<Vec<_>>().join(","))
            })
            .collect();
        format!("[{}]", rows.join(","))
    }
}

impl<F: Field> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix[{}]{}", self.field.name(), self.format())
    }
}

/// `c_j <- c_j + lambda c_i`, i.e. right multiplication by
/// `I + lambda e_i e_j^T`. Indices are zero-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transvection<F: Field> {
    pub i: usize,
    pub j: usize,
    pub lambda: F::Elem,
}

impl<F: Field> Transvection<F> {
    pub fn new(i: usize, j: usize, lambda: F::Elem, size: usize) -> Result<Self, FramingError> {
        if i == j || i >= size || j >= size {
            return Err(FramingError::BadTransvection(size));
        }
        Ok(Transvection { i, j, lambda })
    }

    pub fn matrix(&self, field: &F, size: usize) -> Matrix<F> {
        let mut m = Matrix::identity(field, size);
        m.set(self.i, self.j, self.lambda.clone());
        m
    }

    pub fn apply(&self, a: &mut Matrix<F>) {
        let k = a.field.clone();
        for r in 0..a.rows {
            let v = k.add(a.get(r, self.j), &k.mul(&self.lambda, a.get(r, self.i)));
            a.set(r, self.j, v);
        }
    }

    /// The point `s` of the path `s -> t_{i,j}(s lambda)` joining the
    /// identity (`s = 0`) to this transvection (`s = 1`).
    pub fn along_path(&self, field: &F, s: &F::Elem) -> Self {
        Transvection { i: self.i, j: self.j, lambda: field.mul(s, &self.lambda) }
    }

    /// One-based rendering, e.g. `c2 += 3*c1`.
    pub fn format(&self, field: &F) -> String {
        format!("c{} += {}*c{}", self.j + 1, field.format_elem(&self.lambda), self.i + 1)
    }
}

/// Transvections `E_1..E_k` with `A E_1 .. E_k = [I_n | 0]`.
///
/// Row by row: make the diagonal entry 1 using a later nonzero column, or a
/// spare later column when the row has no other nonzero entry, then clear the
/// rest of the row. At most `N + 1` operations per row.
pub fn reduce_to_projection<F: Field>(a: &Matrix<F>) -> Result<Vec<Transvection<F>>, FramingError> {
    let (n, cols) = (a.rows, a.cols);
    if cols < n {
        return Err(FramingError::Dimension(format!("framing with {n} rows needs at least {n} columns, got {cols}")));
    }
    let (rank, _) = a.eliminate();
    if rank < n {
        return Err(FramingError::RankDeficient { rank, rows: n });
    }
    let k = a.field.clone();
    let mut m = a.clone();
    let mut ops = Vec::new();
    let mut push = |m: &mut Matrix<F>, i: usize, j: usize, lambda: F::Elem| {
        let t = Transvection { i, j, lambda };
        t.apply(m);
        ops.push(t);
    };
    for r in 0..n {
        let arr = m.get(r, r).clone();
        if !k.is_one(&arr) {
            if let Some(s) = (r + 1..cols).find(|&s| !k.is_zero(m.get(r, s))) {
                let lambda = k.div(&k.sub(&k.one(), &arr), m.get(r, s)).expect("nonzero pivot");
                push(&mut m, s, r, lambda);
            } else if k.is_zero(&arr) {
                return Err(FramingError::RankDeficient { rank: r, rows: n });
            } else if r + 1 < cols {
                let spare = r + 1;
                push(&mut m, r, spare, k.inv(&arr).expect("nonzero"));
                push(&mut m, spare, r, k.sub(&k.one(), &arr));
            } else {
                return Err(FramingError::InsufficientRoom(k.format_elem(&a.determinant()?)));
            }
        }
        for j in 0..cols {
            if j != r && !k.is_zero(m.get(r, j)) {
                let lambda = k.neg(m.get(r, j));
                push(&mut m, r, j, lambda);
            }
        }
    }
    debug_assert!(m.is_projection());
    Ok(ops)
}

/// `A` multiplied on the right by the transvections in order.
pub fn apply_transvections<F: Field>(a: &Matrix<F>, ops: &[Transvection<F>]) -> Matrix<F> {
    let mut m = a.clone();
    for t in ops {
        t.apply(&mut m);
    }
    m
}

/// `(M A, M v)` for invertible `M`.
pub fn apply_gl<F: Field>(
    m: &Matrix<F>,
    a: &Matrix<F>,
    v: &[F::Elem],
) -> Result<(Matrix<F>, Vec<F::Elem>), FramingError> {
    if m.rows != m.cols || m.rows != a.rows {
        return Err(FramingError::Dimension(format!("{}x{} acting on {} rows", m.rows, m.cols, a.rows)));
    }
    if m.field.is_zero(&m.determinant()?) {
        return Err(FramingError::Singular);
    }
    Ok((m.mul(a)?, m.mul_vec(v)?))
}

/// New leading coordinate: `diag(1, A)` and `v` with a zero prepended.
pub fn stabilize_n<F: Field>(a: &Matrix<F>, v: &[F::Elem]) -> (Matrix<F>, Vec<F::Elem>) {
    let k = &a.field;
    let one = Matrix::identity(k, 1);
    let mut w = vec![k.zero()];
    w.extend(v.iter().cloned());
    (one.direct_sum(a), w)
}

/// New trailing coordinate: `[A | 0]`.
pub fn stabilize_big_n<F: Field>(a: &Matrix<F>) -> Matrix<F> {
    let mut out = Matrix::zeros(&a.field, a.rows, a.cols + 1);
    for i in 0..a.rows {
        for j in 0..a.cols {
            out.set(i, j, a.get(i, j).clone());
        }
    }
    out
}

/// Permutation matrix taking coordinates ordered `[n | N | n' | N']` to
/// `[n | n' | N | N']`.
pub fn external_shuffle<F: Field>(field: &F, n: usize, big_n: usize, n2: usize, big_n2: usize) -> Matrix<F> {
    let size = n + big_n + n2 + big_n2;
    let mut t = Matrix::zeros(field, size, size);
    let source_blocks = [(0, n), (n, big_n), (n + big_n, n2), (n + big_n + n2, big_n2)];
    // target order: n, n', N, N'
    let order = [0usize, 2, 1, 3];
    let mut target = 0;
    for &b in &order {
        let (start, len) = source_blocks[b];
        for o in 0..len {
            t.set(start + o, target + o, field.one());
        }
        target += len;
    }
    t
}

/// `(A (+) A') T` for `A` of size `n x (n + N)` and `A'` of size
/// `n' x (n' + N')`.
pub fn external_product<F: Field>(a: &Matrix<F>, b: &Matrix<F>) -> Result<Matrix<F>, FramingError> {
    if a.cols < a.rows || b.cols < b.rows {
        return Err(FramingError::Dimension("framings need at least as many columns as rows".into()));
    }
    let t = external_shuffle(&a.field, a.rows, a.cols - a.rows, b.rows, b.cols - b.rows);
    a.direct_sum(b).mul(&t)
}

/// `(T_12 (+) I) T_(12),3 = (I (+) T_23) T_1,(23)` for three framings of
/// shapes `n_i x (n_i + N_i)`.
pub fn shuffle_coherence<F: Field>(field: &F, dims: [(usize, usize); 3]) -> bool {
    let [(n1, m1), (n2, m2), (n3, m3)] = dims;
    let lhs = external_shuffle(field, n1, m1, n2, m2)
        .direct_sum(&Matrix::identity(field, n3 + m3))
        .mul(&external_shuffle(field, n1 + n2, m1 + m2, n3, m3))
        .expect("square of equal size");
    let rhs = Matrix::identity(field, n1 + m1)
        .direct_sum(&external_shuffle(field, n2, m2, n3, m3))
        .mul(&external_shuffle(field, n1, m1, n2 + n3, m2 + m3))
        .expect("square of equal size");
    lhs == rhs
}
