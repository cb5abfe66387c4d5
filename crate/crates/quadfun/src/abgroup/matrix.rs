//! Dense matrices over the integers with exact arithmetic.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::fmt;

/// Row-major dense integer matrix. All arithmetic is exact.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<i64>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        let entries = rows
            .into_iter()
            .flatten()
            .map(BigInt::from)
            .collect::<Vec<_>>();
        IntMatrix {
            rows: r,
            cols: c,
            entries,
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    if i == j {
                        self[(i, j)].is_one()
                    } else {
                        self[(i, j)].is_zero()
                    }
                })
            })
    }

    pub fn transpose(&self) -> IntMatrix {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in matrix product");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self::from_fn(self.rows, self.cols, |i, j| &self[(i, j)] + &other[(i, j)])
    }

    pub fn sub(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self::from_fn(self.rows, self.cols, |i, j| &self[(i, j)] - &other[(i, j)])
    }

    pub fn neg(&self) -> IntMatrix {
        Self::from_fn(self.rows, self.cols, |i, j| -&self[(i, j)])
    }

    pub fn scale(&self, c: &BigInt) -> IntMatrix {
        Self::from_fn(self.rows, self.cols, |i, j| &self[(i, j)] * c)
    }

    pub fn apply(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len(), "dimension mismatch in matrix-vector product");
        (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| &self[(i, j)] * &v[j])
                    .fold(BigInt::zero(), |acc, x| acc + x)
            })
            .collect()
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn set_column(&mut self, j: usize, v: &[BigInt]) {
        assert_eq!(v.len(), self.rows);
        for i in 0..self.rows {
            self[(i, j)] = v[i].clone();
        }
    }

    pub fn from_columns(rows: usize, cols: &[Vec<BigInt>]) -> IntMatrix {
        let mut m = Self::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            m.set_column(j, c);
        }
        m
    }

    /// Horizontal concatenation [self | other].
    pub fn hstack(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.rows, other.rows);
        Self::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self[(i, j)].clone()
            } else {
                other[(i, j - self.cols)].clone()
            }
        })
    }

    /// Vertical concatenation [self; other].
    pub fn vstack(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.cols);
        Self::from_fn(self.rows + other.rows, self.cols, |i, j| {
            if i < self.rows {
                self[(i, j)].clone()
            } else {
                other[(i - self.rows, j)].clone()
            }
        })
    }

    pub fn block_diag(blocks: &[&IntMatrix]) -> IntMatrix {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut m = Self::zeros(rows, cols);
        let (mut ro, mut co) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    m[(ro + i, co + j)] = b[(i, j)].clone();
                }
            }
            ro += b.rows;
            co += b.cols;
        }
        m
    }

    /// Drops columns that are entirely zero.
    pub fn prune_zero_columns(&self) -> IntMatrix {
        let keep: Vec<usize> = (0..self.cols)
            .filter(|&j| (0..self.rows).any(|i| !self[(i, j)].is_zero()))
            .collect();
        Self::from_fn(self.rows, keep.len(), |i, j| self[(i, keep[j])].clone())
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.entries.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            let e = &self[(r, j)] * BigInt::from(-1);
            self[(r, j)] = e;
        }
    }

    fn negate_col(&mut self, c: usize) {
        for i in 0..self.rows {
            let e = &self[(i, c)] * BigInt::from(-1);
            self[(i, c)] = e;
        }
    }

    /// row[dst] += c * row[src]
    fn add_row_multiple(&mut self, dst: usize, src: usize, c: &BigInt) {
        for j in 0..self.cols {
            let v = &self[(dst, j)] + &self[(src, j)] * c;
            self[(dst, j)] = v;
        }
    }

    /// col[dst] += c * col[src]
    fn add_col_multiple(&mut self, dst: usize, src: usize, c: &BigInt) {
        for i in 0..self.rows {
            let v = &self[(i, dst)] + &self[(i, src)] * c;
            self[(i, dst)] = v;
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        debug_assert!(i < self.rows && j < self.cols);
        &self.entries[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.entries[i * self.cols + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self[(i, j)].to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Smith normal form `left * m * right = diagonal` with unimodular
/// `left`, `right` and diagonal entries d1 | d2 | ... >= 0.
#[derive(Clone, Debug)]
pub struct Smith {
    pub diagonal: IntMatrix,
    pub left: IntMatrix,
    pub left_inv: IntMatrix,
    pub right: IntMatrix,
    pub right_inv: IntMatrix,
}

impl Smith {
    /// Diagonal entry i, with zero padding past min(rows, cols).
    pub fn diag(&self, i: usize) -> BigInt {
        if i < self.diagonal.rows().min(self.diagonal.cols()) {
            self.diagonal[(i, i)].clone()
        } else {
            BigInt::zero()
        }
    }

    pub fn rank(&self) -> usize {
        let n = self.diagonal.rows().min(self.diagonal.cols());
        (0..n).filter(|&i| !self.diagonal[(i, i)].is_zero()).count()
    }
}

/// Deterministic Smith normal form. Pivoting picks the smallest
/// nonzero |entry| (first in row-major order on ties).
pub fn smith_normal_form(m: &IntMatrix) -> Smith {
    let rows = m.rows();
    let cols = m.cols();
    let mut a = m.clone();
    let mut left = IntMatrix::identity(rows);
    let mut left_inv = IntMatrix::identity(rows);
    let mut right = IntMatrix::identity(cols);
    let mut right_inv = IntMatrix::identity(cols);

    // Elementary operations keep the invariant left * m * right = a.
    macro_rules! row_swap {
        ($i:expr, $j:expr) => {
            a.swap_rows($i, $j);
            left.swap_rows($i, $j);
            left_inv.swap_cols($i, $j);
        };
    }
    macro_rules! col_swap {
        ($i:expr, $j:expr) => {
            a.swap_cols($i, $j);
            right.swap_cols($i, $j);
            right_inv.swap_rows($i, $j);
        };
    }
    macro_rules! row_add {
        ($dst:expr, $src:expr, $c:expr) => {
            let c: BigInt = $c;
            a.add_row_multiple($dst, $src, &c);
            left.add_row_multiple($dst, $src, &c);
            let neg = -c;
            left_inv.add_col_multiple($src, $dst, &neg);
        };
    }
    macro_rules! col_add {
        ($dst:expr, $src:expr, $c:expr) => {
            let c: BigInt = $c;
            a.add_col_multiple($dst, $src, &c);
            right.add_col_multiple($dst, $src, &c);
            let neg = -c;
            right_inv.add_row_multiple($src, $dst, &neg);
        };
    }

    let n = rows.min(cols);
    for k in 0..n {
        'restart: loop {
            // Locate the smallest nonzero entry in a[k.., k..].
            let mut pivot: Option<(usize, usize)> = None;
            for i in k..rows {
                for j in k..cols {
                    if !a[(i, j)].is_zero()
                        && pivot
                            .map(|(pi, pj)| a[(i, j)].abs() < a[(pi, pj)].abs())
                            .unwrap_or(true)
                    {
                        pivot = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = pivot else {
                break 'restart;
            };
            row_swap!(k, pi);
            col_swap!(k, pj);
            if a[(k, k)].is_negative() {
                a.negate_row(k);
                left.negate_row(k);
                left_inv.negate_col(k);
            }

            // Reduce column k below the pivot.
            let mut dirty = false;
            for i in k + 1..rows {
                if !a[(i, k)].is_zero() {
                    let q = div_round(&a[(i, k)], &a[(k, k)]);
                    row_add!(i, k, -q);
                    if !a[(i, k)].is_zero() {
                        dirty = true;
                    }
                }
            }
            // Reduce row k right of the pivot.
            for j in k + 1..cols {
                if !a[(k, j)].is_zero() {
                    let q = div_round(&a[(k, j)], &a[(k, k)]);
                    col_add!(j, k, -q);
                    if !a[(k, j)].is_zero() {
                        dirty = true;
                    }
                }
            }
            if dirty {
                continue 'restart;
            }

            // Pivot must divide every entry of the trailing block.
            for i in k + 1..rows {
                for j in k + 1..cols {
                    if (&a[(i, j)] % &a[(k, k)]) != BigInt::zero() {
                        row_add!(k, i, BigInt::one());
                        continue 'restart;
                    }
                }
            }
            break 'restart;
        }
    }

    Smith {
        diagonal: a,
        left,
        left_inv,
        right,
        right_inv,
    }
}

/// Rounded division: quotient q minimizing |a - q*b|.
fn div_round(a: &BigInt, b: &BigInt) -> BigInt {
    let (q, r) = num_integer::Integer::div_mod_floor(a, b);
    if BigInt::from(2) * r.abs() > b.abs() {
        q + BigInt::one()
    } else {
        q
    }
}

/// Basis (as columns) of the integer kernel {x : m * x = 0}.
pub fn integer_kernel(m: &IntMatrix) -> IntMatrix {
    let s = smith_normal_form(m);
    let mut cols: Vec<Vec<BigInt>> = Vec::new();
    for j in 0..m.cols() {
        if s.diag(j).is_zero() {
            cols.push(s.right.column(j));
        }
    }
    IntMatrix::from_columns(m.cols(), &cols)
}

/// Solves m * x = b over the integers, if a solution exists.
pub fn solve(m: &IntMatrix, b: &[BigInt]) -> Option<Vec<BigInt>> {
    let s = smith_normal_form(m);
    let lb = s.left.apply(b);
    let mut y = vec![BigInt::zero(); m.cols()];
    for i in 0..m.rows() {
        let d = if i < m.cols() { s.diag(i) } else { BigInt::zero() };
        if d.is_zero() {
            if !lb[i].is_zero() {
                return None;
            }
        } else {
            let (q, r) = num_integer::Integer::div_rem(&lb[i], &d);
            if !r.is_zero() {
                return None;
            }
            y[i] = q;
        }
    }
    Some(s.right.apply(&y))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_postconditions(m: &IntMatrix) {
        let s = smith_normal_form(m);
        assert_eq!(s.left.mul(m).mul(&s.right), s.diagonal);
        assert!(s.left.mul(&s.left_inv).is_identity());
        assert!(s.right.mul(&s.right_inv).is_identity());
        let n = m.rows().min(m.cols());
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                if i != j {
                    assert!(s.diagonal[(i, j)].is_zero());
                }
            }
        }
        for i in 0..n.saturating_sub(1) {
            let d = s.diag(i);
            let e = s.diag(i + 1);
            if d.is_zero() {
                assert!(e.is_zero());
            } else {
                assert!((&e % &d).is_zero());
            }
        }
    }

    #[test]
    fn snf_example_2x2() {
        // [[2,4],[6,8]] has invariant factors 2, 4.
        let m = IntMatrix::from_rows(vec![vec![2, 4], vec![6, 8]]);
        let s = smith_normal_form(&m);
        check_postconditions(&m);
        assert_eq!(s.diag(0), BigInt::from(2));
        assert_eq!(s.diag(1), BigInt::from(4));
    }

    #[test]
    fn snf_identity_and_zero() {
        let id = IntMatrix::identity(4);
        let s = smith_normal_form(&id);
        assert_eq!(s.diagonal, id);
        let z = IntMatrix::zeros(3, 5);
        let s = smith_normal_form(&z);
        assert!(s.diagonal.is_zero());
        assert!(s.left.is_identity());
        assert!(s.right.is_identity());
        check_postconditions(&z);
    }

    #[test]
    fn snf_empty_matrices() {
        for (r, c) in [(0, 0), (0, 3), (3, 0)] {
            let m = IntMatrix::zeros(r, c);
            check_postconditions(&m);
        }
    }

    #[test]
    fn snf_known_4x4() {
        let m = IntMatrix::from_rows(vec![
            vec![-6, 111, -36, 6],
            vec![5, -672, 210, 74],
            vec![0, -255, 81, 24],
            vec![-7, 255, -81, -10],
        ]);
        let s = smith_normal_form(&m);
        check_postconditions(&m);
        let diag: Vec<BigInt> = (0..4).map(|i| s.diag(i)).collect();
        assert_eq!(
            diag,
            vec![
                BigInt::from(1),
                BigInt::from(3),
                BigInt::from(21),
                BigInt::from(0)
            ]
        );
    }

    #[test]
    fn snf_determinism() {
        let m = IntMatrix::from_rows(vec![vec![4, 6, 10], vec![6, 4, 8]]);
        let a = smith_normal_form(&m);
        let b = smith_normal_form(&m);
        assert_eq!(a.left, b.left);
        assert_eq!(a.right, b.right);
        assert_eq!(a.diagonal, b.diagonal);
    }

    #[test]
    fn kernel_and_solve() {
        let m = IntMatrix::from_rows(vec![vec![1, 1, 0], vec![0, 2, 2]]);
        let k = integer_kernel(&m);
        assert!(m.mul(&k).is_zero());
        assert_eq!(k.cols(), 1);
        let b = vec![BigInt::from(3), BigInt::from(4)];
        let x = solve(&m, &b).unwrap();
        assert_eq!(m.apply(&x), b);
        // 2x = 1 has no integer solution
        let m2 = IntMatrix::from_rows(vec![vec![2]]);
        assert!(solve(&m2, &[BigInt::one()]).is_none());
    }

    #[test]
    fn snf_random_small() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..60 {
            let r = rng.gen_range(0..5);
            let c = rng.gen_range(0..5);
            let m = IntMatrix::from_fn(r, c, |_, _| BigInt::from(rng.gen_range(-9i64..=9)));
            check_postconditions(&m);
        }
    }
}
