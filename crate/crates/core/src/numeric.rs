//! Small dense linear algebra: exact integer routines for the combinatorial
//! layer and complex double-precision solvers for path tracking.
//!
//! All matrices here are tiny (dimension bounded by the node count), so the
//! implementations favor exactness and clarity over asymptotics.

use num_complex::Complex64;

pub type C64 = Complex64;

/// Fraction-free (Bareiss) determinant of a square integer matrix.
///
/// Entries of the incidence-derived matrices stay far below the i128 range,
/// so intermediate growth is not a concern at this scale.
pub fn int_det(m: &[Vec<i64>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut a: Vec<Vec<i128>> = m
        .iter()
        .map(|row| row.iter().map(|&x| x as i128).collect())
        .collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            let swap = (k + 1..n).find(|&r| a[r][k] != 0);
            match swap {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
            a[i][k] = 0;
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

/// Exact rational Gauss-Jordan solve of `A x = b` over i128 rationals.
/// Returns `None` when `A` is singular.
pub fn rational_solve(a: &[Vec<i128>], b: &[i128]) -> Option<Vec<(i128, i128)>> {
    let n = a.len();
    // augmented matrix of rationals (num, den), den > 0
    let mut m: Vec<Vec<(i128, i128)>> = Vec::with_capacity(n);
    for (row, &rhs) in a.iter().zip(b) {
        let mut r: Vec<(i128, i128)> = row.iter().map(|&x| (x, 1)).collect();
        r.push((rhs, 1));
        m.push(r);
    }
    let gcd = |mut x: i128, mut y: i128| -> i128 {
        x = x.abs();
        y = y.abs();
        while y != 0 {
            let t = x % y;
            x = y;
            y = t;
        }
        if x == 0 {
            1
        } else {
            x
        }
    };
    let norm = |(p, q): (i128, i128)| -> (i128, i128) {
        if p == 0 {
            return (0, 1);
        }
        let g = gcd(p, q);
        let s = if q < 0 { -1 } else { 1 };
        (s * p / g, s * q / g)
    };
    let sub = |x: (i128, i128), y: (i128, i128)| norm((x.0 * y.1 - y.0 * x.1, x.1 * y.1));
    let mul = |x: (i128, i128), y: (i128, i128)| norm((x.0 * y.0, x.1 * y.1));

    for col in 0..n {
        let pivot = (col..n).find(|&r| m[r][col].0 != 0)?;
        m.swap(col, pivot);
        let p = m[col][col];
        let inv_p = (p.1, p.0);
        for c in col..=n {
            m[col][c] = mul(m[col][c], inv_p);
        }
        for r in 0..n {
            if r == col || m[r][col].0 == 0 {
                continue;
            }
            let f = m[r][col];
            for c in col..=n {
                let t = mul(f, m[col][c]);
                m[r][c] = sub(m[r][c], t);
            }
        }
    }
    Some((0..n).map(|r| m[r][n]).collect())
}

/// Solve `A x = b` for integer `A` with `det A = ±1`; the result is integral.
pub fn unimodular_int_solve(a: &[Vec<i64>], b: &[i128]) -> Option<Vec<i128>> {
    let a128: Vec<Vec<i128>> = a
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let sol = rational_solve(&a128, b)?;
    let mut out = Vec::with_capacity(sol.len());
    for (p, q) in sol {
        if q != 1 {
            return None;
        }
        out.push(p);
    }
    Some(out)
}

/// Exact inverse of an integer matrix with determinant ±1.
pub fn unimodular_inverse(a: &[Vec<i64>]) -> Option<Vec<Vec<i64>>> {
    let n = a.len();
    let mut cols: Vec<Vec<i64>> = Vec::with_capacity(n);
    for j in 0..n {
        let mut e = vec![0i128; n];
        e[j] = 1;
        let col = unimodular_int_solve(a, &e)?;
        cols.push(col.into_iter().map(|x| x as i64).collect());
    }
    // cols[j] is the j-th column of the inverse
    let mut inv = vec![vec![0i64; n]; n];
    for (j, col) in cols.iter().enumerate() {
        for (i, &x) in col.iter().enumerate() {
            inv[i][j] = x;
        }
    }
    Some(inv)
}

/// Rank of a rectangular integer matrix (rows × cols), by fraction-free elimination.
pub fn int_rank(m: &[Vec<i64>]) -> usize {
    if m.is_empty() {
        return 0;
    }
    let rows = m.len();
    let cols = m[0].len();
    let mut a: Vec<Vec<i128>> = m
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let mut rank = 0;
    let mut row = 0;
    for col in 0..cols {
        if row >= rows {
            break;
        }
        let pivot = (row..rows).find(|&r| a[r][col] != 0);
        let Some(p) = pivot else { continue };
        a.swap(row, p);
        for r in row + 1..rows {
            if a[r][col] == 0 {
                continue;
            }
            let (x, y) = (a[row][col], a[r][col]);
            for c in col..cols {
                a[r][c] = a[r][c] * x - a[row][c] * y;
            }
        }
        rank += 1;
        row += 1;
    }
    rank
}

// ---------------------------------------------------------------------------
// Complex dense solvers
// ---------------------------------------------------------------------------

/// LU factorization with partial pivoting for small complex matrices.
pub struct ComplexLu {
    n: usize,
    lu: Vec<C64>,
    perm: Vec<usize>,
    singular: bool,
}

impl ComplexLu {
    pub fn new(a: &[Vec<C64>]) -> Self {
        let n = a.len();
        let mut lu: Vec<C64> = a.iter().flat_map(|r| r.iter().copied()).collect();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut singular = false;
        for k in 0..n {
            let mut best = k;
            let mut best_mag = lu[k * n + k].norm_sqr();
            for r in k + 1..n {
                let mag = lu[r * n + k].norm_sqr();
                if mag > best_mag {
                    best = r;
                    best_mag = mag;
                }
            }
            if best_mag == 0.0 {
                singular = true;
                continue;
            }
            if best != k {
                for c in 0..n {
                    lu.swap(k * n + c, best * n + c);
                }
                perm.swap(k, best);
            }
            let pivot = lu[k * n + k];
            for r in k + 1..n {
                let f = lu[r * n + k] / pivot;
                lu[r * n + k] = f;
                for c in k + 1..n {
                    let sub = f * lu[k * n + c];
                    lu[r * n + c] -= sub;
                }
            }
        }
        ComplexLu {
            n,
            lu,
            perm,
            singular,
        }
    }

    pub fn is_singular(&self) -> bool {
        self.singular
    }

    pub fn solve(&self, b: &[C64]) -> Option<Vec<C64>> {
        if self.singular {
            return None;
        }
        let n = self.n;
        let mut y = vec![C64::new(0.0, 0.0); n];
        for i in 0..n {
            let mut s = b[self.perm[i]];
            for j in 0..i {
                s -= self.lu[i * n + j] * y[j];
            }
            y[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = y[i];
            for j in i + 1..n {
                s -= self.lu[i * n + j] * y[j];
            }
            let d = self.lu[i * n + i];
            if d.norm_sqr() == 0.0 {
                return None;
            }
            y[i] = s / d;
        }
        Some(y)
    }
}

/// Infinity-norm condition estimate via the explicit inverse.
pub fn condition_inf(a: &[Vec<C64>]) -> f64 {
    let n = a.len();
    if n == 0 {
        return 1.0;
    }
    let lu = ComplexLu::new(a);
    if lu.is_singular() {
        return f64::INFINITY;
    }
    let norm_a = a
        .iter()
        .map(|r| r.iter().map(|c| c.norm()).sum::<f64>())
        .fold(0.0, f64::max);
    let mut norm_inv: f64 = 0.0;
    let mut inv_rows = vec![vec![C64::new(0.0, 0.0); n]; n];
    for j in 0..n {
        let mut e = vec![C64::new(0.0, 0.0); n];
        e[j] = C64::new(1.0, 0.0);
        match lu.solve(&e) {
            Some(col) => {
                for i in 0..n {
                    inv_rows[i][j] = col[i];
                }
            }
            None => return f64::INFINITY,
        }
    }
    for r in &inv_rows {
        norm_inv = norm_inv.max(r.iter().map(|c| c.norm()).sum::<f64>());
    }
    norm_a * norm_inv
}

/// Integer power of a complex number (negative exponents allowed; `z != 0`).
pub fn powi(z: C64, e: i64) -> C64 {
    if e == 0 {
        return C64::new(1.0, 0.0);
    }
    let mut base = if e < 0 { C64::new(1.0, 0.0) / z } else { z };
    let mut k = e.unsigned_abs();
    let mut acc = C64::new(1.0, 0.0);
    while k > 0 {
        if k & 1 == 1 {
            acc *= base;
        }
        base *= base;
        k >>= 1;
    }
    acc
}

/// Evaluate the monomial `x^a` for an integer exponent vector.
pub fn monomial(x: &[C64], a: &[i64]) -> C64 {
    let mut acc = C64::new(1.0, 0.0);
    for (&xi, &ai) in x.iter().zip(a) {
        if ai != 0 {
            acc *= powi(xi, ai);
        }
    }
    acc
}

pub fn inf_norm(v: &[C64]) -> f64 {
    v.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn det_and_inverse_of_unimodular() {
        let m = vec![vec![1, 1, 0], vec![0, -1, 0], vec![0, 0, 1]];
        assert_eq!(int_det(&m), -1);
        let inv = unimodular_inverse(&m).unwrap();
        assert_eq!(inv, vec![vec![1, 1, 0], vec![0, -1, 0], vec![0, 0, 1]]);
    }

    #[test]
    fn rational_solve_small() {
        let a = vec![vec![2, 1], vec![1, 3]];
        let b = vec![5, 10];
        let x = rational_solve(&a, &b).unwrap();
        assert_eq!(x, vec![(1, 1), (3, 1)]);
    }

    #[test]
    fn int_rank_rectangular() {
        let m = vec![vec![1, 0, 1], vec![0, 1, 1], vec![1, 1, 2]];
        assert_eq!(int_rank(&m), 2);
    }

    #[test]
    fn complex_lu_roundtrip() {
        let a = vec![
            vec![C64::new(2.0, 1.0), C64::new(0.0, -1.0)],
            vec![C64::new(1.0, 0.0), C64::new(3.0, 0.5)],
        ];
        let b = vec![C64::new(1.0, 1.0), C64::new(-2.0, 0.0)];
        let x = ComplexLu::new(&a).solve(&b).unwrap();
        let r0 = a[0][0] * x[0] + a[0][1] * x[1] - b[0];
        let r1 = a[1][0] * x[0] + a[1][1] * x[1] - b[1];
        assert!(r0.norm() < 1e-12 && r1.norm() < 1e-12);
    }

    #[test]
    fn powi_negative() {
        let z = C64::new(0.0, 2.0);
        let w = powi(z, -2);
        assert!((w - C64::new(-0.25, 0.0)).norm() < 1e-15);
    }
}
