//! Exact integer and rational linear algebra.
//!
//! * [`smith_normal_form`] with unimodular transforms on both sides.
//! * [`LinearSystem`], reduced row echelon form over the rationals.
//! * [`nonnegative_solution`], an exact phase-one simplex deciding whether
//!   `A x = b, x >= 0` is feasible (Bland's rule, so it always terminates).

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type IntMatrix = Vec<Vec<i64>>;

/// `U * A * V = D` with `D` diagonal, `d_0 | d_1 | ...`, all `d_i > 0` for `i < rank`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Smith {
    pub rows: usize,
    pub cols: usize,
    pub diagonal: Vec<i64>,
    pub rank: usize,
    pub u: IntMatrix,
    pub u_inv: IntMatrix,
    pub v: IntMatrix,
}

fn identity(n: usize) -> Vec<Vec<i128>> {
    (0..n)
        .map(|i| (0..n).map(|j| i128::from(i == j)).collect())
        .collect()
}

fn narrow(m: Vec<Vec<i128>>) -> IntMatrix {
    m.into_iter()
        .map(|r| {
            r.into_iter()
                .map(|x| i64::try_from(x).expect("Smith normal form entry exceeds i64"))
                .collect()
        })
        .collect()
}

struct SnfState {
    a: Vec<Vec<i128>>,
    u: Vec<Vec<i128>>,
    u_inv: Vec<Vec<i128>>,
    v: Vec<Vec<i128>>,
}

impl SnfState {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap(i, j);
        self.u.swap(i, j);
        for row in &mut self.u_inv {
            row.swap(i, j);
        }
    }
    fn swap_cols(&mut self, i: usize, j: usize) {
        for row in &mut self.a {
            row.swap(i, j);
        }
        for row in &mut self.v {
            row.swap(i, j);
        }
    }
    /// row_i += q * row_t
    fn add_row(&mut self, i: usize, t: usize, q: i128) {
        if q == 0 {
            return;
        }
        for c in 0..self.a[0].len() {
            let x = self.a[t][c];
            self.a[i][c] += q * x;
        }
        for c in 0..self.u.len() {
            let x = self.u[t][c];
            self.u[i][c] += q * x;
        }
        for r in 0..self.u_inv.len() {
            let x = self.u_inv[r][i];
            self.u_inv[r][t] -= q * x;
        }
    }
    /// col_j += q * col_t
    fn add_col(&mut self, j: usize, t: usize, q: i128) {
        if q == 0 {
            return;
        }
        for r in 0..self.a.len() {
            let x = self.a[r][t];
            self.a[r][j] += q * x;
        }
        for r in 0..self.v.len() {
            let x = self.v[r][t];
            self.v[r][j] += q * x;
        }
    }
    fn negate_row(&mut self, i: usize) {
        for x in &mut self.a[i] {
            *x = -*x;
        }
        for x in &mut self.u[i] {
            *x = -*x;
        }
        for row in &mut self.u_inv {
            row[i] = -row[i];
        }
    }
}

/// Smith normal form of an integer matrix together with its transforms.
pub fn smith_normal_form(a: &[Vec<i64>], rows: usize, cols: usize) -> Smith {
    let mut st = SnfState {
        a: (0..rows)
            .map(|i| (0..cols).map(|j| i128::from(a[i][j])).collect())
            .collect(),
        u: identity(rows),
        u_inv: identity(rows),
        v: identity(cols),
    };
    let mut rank = 0;
    for t in 0..rows.min(cols) {
        // Smallest nonzero entry of the remaining block as pivot.
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                let x = st.a[i][j];
                if x != 0 && best.is_none_or(|(bi, bj)| x.abs() < st.a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        st.swap_rows(t, pi);
        st.swap_cols(t, pj);
        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                let q = Integer::div_floor(&st.a[i][t], &st.a[t][t]);
                st.add_row(i, t, -q);
                if st.a[i][t] != 0 {
                    dirty = true;
                }
            }
            for j in t + 1..cols {
                let q = Integer::div_floor(&st.a[t][j], &st.a[t][t]);
                st.add_col(j, t, -q);
                if st.a[t][j] != 0 {
                    dirty = true;
                }
            }
            if dirty {
                let mut best = (t, t);
                for i in t..rows {
                    if st.a[i][t] != 0 && st.a[i][t].abs() < st.a[best.0][best.1].abs() {
                        best = (i, t);
                    }
                }
                for j in t..cols {
                    if st.a[t][j] != 0 && st.a[t][j].abs() < st.a[best.0][best.1].abs() {
                        best = (t, j);
                    }
                }
                st.swap_rows(t, best.0);
                st.swap_cols(t, best.1);
                continue;
            }
            // Divisibility of the remaining block by the pivot.
            let p = st.a[t][t];
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| st.a[i][j] % p != 0));
            match bad {
                Some(i) => st.add_row(t, i, 1),
                None => break,
            }
        }
        if st.a[t][t] < 0 {
            st.negate_row(t);
        }
        rank += 1;
    }
    let diagonal = (0..rows.min(cols))
        .map(|i| i64::try_from(st.a[i][i]).expect("invariant factor exceeds i64"))
        .collect();
    Smith {
        rows,
        cols,
        diagonal,
        rank,
        u: narrow(st.u),
        u_inv: narrow(st.u_inv),
        v: narrow(st.v),
    }
}

/// A Z-basis of the integer kernel `{x in Z^cols : A x = 0}`.
pub fn integer_kernel(a: &[Vec<i64>], rows: usize, cols: usize) -> Vec<Vec<i64>> {
    let s = smith_normal_form(a, rows, cols);
    (s.rank..cols)
        .map(|j| (0..cols).map(|i| s.v[i][j]).collect())
        .collect()
}

pub fn mat_vec(m: &[Vec<i64>], x: &[i64]) -> Vec<i64> {
    m.iter()
        .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
        .collect()
}

pub fn q(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

/// Reduced row echelon form of an integer system `A x = b`, computed once with
/// its row transform so that many right-hand sides can be solved cheaply.
#[derive(Clone, Debug)]
pub struct LinearSystem {
    cols: usize,
    /// Reduced coefficient rows, one per pivot.
    rows: Vec<Vec<BigRational>>,
    /// Row transform `E` (all rows, pivot rows first) with `E A` reduced.
    transform: Vec<Vec<BigRational>>,
    pivots: Vec<usize>,
    free: Vec<usize>,
}

/// Solution set of one right-hand side, parametrized by the free variables.
#[derive(Clone, Debug)]
pub struct AffineSolutions<'a> {
    system: &'a LinearSystem,
    base: Vec<BigRational>,
}

impl LinearSystem {
    pub fn new(a: &[Vec<i64>], cols: usize) -> LinearSystem {
        let r = a.len();
        let mut m: Vec<Vec<BigRational>> = a
            .iter()
            .enumerate()
            .map(|(i, row)| {
                row.iter()
                    .map(|&x| q(x))
                    .chain((0..r).map(|j| q(i64::from(i == j))))
                    .collect()
            })
            .collect();
        let mut pivots = Vec::new();
        let mut rank = 0;
        for c in 0..cols {
            let Some(p) = (rank..r).find(|&i| !m[i][c].is_zero()) else {
                continue;
            };
            m.swap(rank, p);
            let inv = m[rank][c].recip();
            for x in &mut m[rank] {
                *x *= &inv;
            }
            for i in 0..r {
                if i != rank && !m[i][c].is_zero() {
                    let f = m[i][c].clone();
                    for j in 0..cols + r {
                        let d = &f * &m[rank][j];
                        m[i][j] -= d;
                    }
                }
            }
            pivots.push(c);
            rank += 1;
        }
        let transform = m.iter().map(|row| row[cols..].to_vec()).collect();
        let rows = m[..rank].iter().map(|row| row[..cols].to_vec()).collect();
        let free = (0..cols).filter(|c| !pivots.contains(c)).collect();
        LinearSystem {
            cols,
            rows,
            transform,
            pivots,
            free,
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
    /// Columns without pivot, increasing.
    pub fn free(&self) -> &[usize] {
        &self.free
    }

    /// Solutions of `A x = b`, or `None` when the system is inconsistent.
    pub fn solve(&self, b: &[i64]) -> Option<AffineSolutions<'_>> {
        let t: Vec<BigRational> = self
            .transform
            .iter()
            .map(|row| {
                row.iter()
                    .zip(b)
                    .filter(|(_, &y)| y != 0)
                    .map(|(e, &y)| e * q(y))
                    .sum()
            })
            .collect();
        if t[self.rank()..].iter().any(|x| !x.is_zero()) {
            return None;
        }
        Some(AffineSolutions {
            system: self,
            base: t[..self.rank()].to_vec(),
        })
    }
}

impl AffineSolutions<'_> {
    /// The solution with the given free-variable values, if it is integral.
    pub fn point(&self, free_values: &[i64]) -> Option<Vec<i64>> {
        let s = self.system;
        let mut x = vec![0i64; s.cols];
        for (&c, &v) in s.free.iter().zip(free_values) {
            x[c] = v;
        }
        for ((row, &pc), base) in s.rows.iter().zip(&s.pivots).zip(&self.base) {
            let mut val = base.clone();
            for (&c, &v) in s.free.iter().zip(free_values) {
                if v != 0 && !row[c].is_zero() {
                    val -= &row[c] * q(v);
                }
            }
            if !val.is_integer() {
                return None;
            }
            x[pc] = val.to_integer().try_into().ok()?;
        }
        Some(x)
    }
}

/// Exact feasibility of `A x = b, x >= 0`; returns a solution if one exists.
pub fn nonnegative_solution(
    a: &[Vec<BigRational>],
    b: &[BigRational],
    cols: usize,
) -> Option<Vec<BigRational>> {
    let rows = a.len();
    // Tableau columns: x (cols), artificials (rows), rhs.
    let width = cols + rows + 1;
    let mut t: Vec<Vec<BigRational>> = Vec::with_capacity(rows + 1);
    for i in 0..rows {
        let neg = b[i].is_negative();
        let mut row = vec![BigRational::zero(); width];
        for j in 0..cols {
            row[j] = if neg {
                -a[i][j].clone()
            } else {
                a[i][j].clone()
            };
        }
        row[cols + i] = BigRational::one();
        row[width - 1] = if neg { -b[i].clone() } else { b[i].clone() };
        t.push(row);
    }
    // Objective row: minimize the sum of artificials, written as reduced costs.
    let mut obj = vec![BigRational::zero(); width];
    for row in &t {
        for j in 0..cols {
            obj[j] -= &row[j];
        }
        obj[width - 1] -= &row[width - 1];
    }
    let mut basis: Vec<usize> = (cols..cols + rows).collect();
    // Bland: entering column = lowest index with negative reduced cost.
    while let Some(enter) = (0..cols + rows).find(|&j| obj[j].is_negative()) {
        let mut leave: Option<usize> = None;
        let mut best: Option<BigRational> = None;
        for i in 0..rows {
            if t[i][enter].is_positive() {
                let ratio = &t[i][width - 1] / &t[i][enter];
                let better = match &best {
                    None => true,
                    Some(b) => ratio < *b || (ratio == *b && basis[i] < basis[leave.unwrap()]),
                };
                if better {
                    best = Some(ratio);
                    leave = Some(i);
                }
            }
        }
        let Some(l) = leave else {
            // Unbounded direction cannot occur for a phase-one objective bounded below by 0.
            break;
        };
        let inv = t[l][enter].recip();
        for x in &mut t[l] {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != l && !t[i][enter].is_zero() {
                let f = t[i][enter].clone();
                for j in 0..width {
                    let d = &f * &t[l][j];
                    t[i][j] -= d;
                }
            }
        }
        if !obj[enter].is_zero() {
            let f = obj[enter].clone();
            for j in 0..width {
                let d = &f * &t[l][j];
                obj[j] -= d;
            }
        }
        basis[l] = enter;
    }
    if !obj[width - 1].is_zero() {
        return None;
    }
    let mut x = vec![BigRational::zero(); cols];
    for (i, &bv) in basis.iter().enumerate() {
        if bv < cols {
            x[bv] = t[i][width - 1].clone();
        }
    }
    Some(x)
}

/// Least common multiple of the denominators, used to clear a rational vector.
pub fn clear_denominators(x: &[BigRational]) -> Vec<BigInt> {
    let l = x.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    x.iter()
        .map(|v| (v * BigRational::from_integer(l.clone())).to_integer())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
        let n = a.len();
        let m = b[0].len();
        let k = b.len();
        (0..n)
            .map(|i| {
                (0..m)
                    .map(|j| (0..k).map(|l| a[i][l] * b[l][j]).sum())
                    .collect()
            })
            .collect()
    }

    proptest! {
        #[test]
        fn smith_reconstructs(rows in 1usize..5, cols in 1usize..5, seed in proptest::collection::vec(-4i64..5, 25)) {
            let a: Vec<Vec<i64>> = (0..rows).map(|i| (0..cols).map(|j| seed[i * 5 + j]).collect()).collect();
            let s = smith_normal_form(&a, rows, cols);
            let d = mul(&mul(&s.u, &a), &s.v);
            for i in 0..rows {
                for j in 0..cols {
                    let expected = if i == j && i < s.rank { s.diagonal[i] } else { 0 };
                    prop_assert_eq!(d[i][j], expected);
                }
            }
            for i in 1..s.rank {
                prop_assert_eq!(s.diagonal[i] % s.diagonal[i - 1], 0);
            }
            let id = mul(&s.u, &s.u_inv);
            for i in 0..rows {
                for j in 0..rows {
                    prop_assert_eq!(id[i][j], i64::from(i == j));
                }
            }
            for k in integer_kernel(&a, rows, cols) {
                prop_assert!(mat_vec(&a, &k).iter().all(|&x| x == 0));
            }
        }
    }

    #[test]
    fn torsion_of_z_mod_six() {
        let s = smith_normal_form(&[vec![2, 0], vec![0, 3]], 2, 2);
        assert_eq!(s.diagonal, vec![1, 6]);
    }

    #[test]
    fn simplex_feasible_and_infeasible() {
        let a = vec![vec![q(1), q(1)], vec![q(1), q(-1)]];
        let x = nonnegative_solution(&a, &[q(2), q(0)], 2).unwrap();
        assert_eq!(x, vec![q(1), q(1)]);
        assert!(nonnegative_solution(&a, &[q(-1), q(0)], 2).is_none());
    }

    #[test]
    fn linear_system_solves_with_free_values() {
        let s = LinearSystem::new(&[vec![1, 1, 0], vec![0, 1, 1], vec![1, 2, 1]], 3);
        assert_eq!(s.free(), &[2]);
        let sol = s.solve(&[1, 1, 2]).unwrap();
        assert_eq!(sol.point(&[1]), Some(vec![1, 0, 1]));
        assert!(s.solve(&[1, 1, 0]).is_none());
    }
}
