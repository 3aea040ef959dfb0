//! Exact linear algebra over ℚ and ℤ: reduced row echelon form, kernels,
//! Hermite and Smith normal forms.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn zero_vec(n: usize) -> Vec<Q> {
    vec![Q::zero(); n]
}

pub fn unit_vec(n: usize, i: usize) -> Vec<Q> {
    let mut v = zero_vec(n);
    v[i] = Q::one();
    v
}

pub fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).fold(Q::zero(), |acc, (x, y)| acc + x * y)
}

/// `a += c * b`
pub fn axpy(a: &mut [Q], c: &Q, b: &[Q]) {
    if c.is_zero() {
        return;
    }
    for (x, y) in a.iter_mut().zip(b) {
        *x += c * y;
    }
}

pub fn scaled(v: &[Q], c: &Q) -> Vec<Q> {
    v.iter().map(|x| x * c).collect()
}

pub fn sub(a: &[Q], b: &[Q]) -> Vec<Q> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn norm_sq(v: &[Q]) -> Q {
    dot(v, v)
}

/// Reduced row echelon form with zero rows dropped, and the pivot columns.
pub fn rref(rows: &[Vec<Q>]) -> (Vec<Vec<Q>>, Vec<usize>) {
    let mut m: Vec<Vec<Q>> = rows.to_vec();
    let ncols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = -row[c].clone();
                axpy(row, &f, &pivot_row);
            }
        }
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    m.truncate(r);
    (m, pivots)
}

/// Basis of `{x : rows · x = 0}` in ℚ^ncols.
pub fn kernel(rows: &[Vec<Q>], ncols: usize) -> Vec<Vec<Q>> {
    let (r, pivots) = rref(rows);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = unit_vec(ncols, f);
            for (row, &p) in r.iter().zip(&pivots) {
                v[p] = -row[f].clone();
            }
            v
        })
        .collect()
}

/// Least common multiple of all denominators.
pub fn common_denominator<'a>(rows: impl IntoIterator<Item = &'a Vec<Q>>) -> BigInt {
    rows.into_iter()
        .flatten()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

pub fn to_integer(rows: &[Vec<Q>], d: &BigInt) -> Vec<Vec<BigInt>> {
    let dq = Q::from_integer(d.clone());
    rows.iter()
        .map(|r| r.iter().map(|x| (x * &dq).to_integer()).collect())
        .collect()
}

pub fn to_rational(rows: &[Vec<BigInt>], d: &BigInt) -> Vec<Vec<Q>> {
    rows.iter()
        .map(|r| r.iter().map(|x| Q::new(x.clone(), d.clone())).collect())
        .collect()
}

/// Row-style Hermite normal form of the lattice spanned by the rows: upper
/// echelon, positive pivots, entries above a pivot in `[0, pivot)`, zero rows
/// dropped. Unique for the lattice.
pub fn hnf(rows: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let mut m: Vec<Vec<BigInt>> = rows.to_vec();
    let ncols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        loop {
            let best = (r..m.len())
                .filter(|&i| !m[i][c].is_zero())
                .min_by(|&a, &b| m[a][c].abs().cmp(&m[b][c].abs()));
            let Some(best) = best else { break };
            m.swap(r, best);
            let mut done = true;
            for i in r + 1..m.len() {
                if m[i][c].is_zero() {
                    continue;
                }
                let f = m[i][c].div_floor(&m[r][c]);
                let (head, tail) = m.split_at_mut(i);
                for (x, y) in tail[0].iter_mut().zip(&head[r]) {
                    *x -= &f * y;
                }
                if !m[i][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if r < m.len() && !m[r][c].is_zero() {
            if m[r][c].is_negative() {
                for x in m[r].iter_mut() {
                    *x = -x.clone();
                }
            }
            let (head, tail) = m.split_at_mut(r);
            let pivot_row = &tail[0];
            for row in head.iter_mut() {
                let f = row[c].div_floor(&pivot_row[c]);
                if !f.is_zero() {
                    for (x, y) in row.iter_mut().zip(pivot_row) {
                        *x -= &f * y;
                    }
                }
            }
            r += 1;
        }
    }
    m.truncate(r);
    m.retain(|row| row.iter().any(|x| !x.is_zero()));
    m
}

/// `u · a · w = diag` with `u`, `w` unimodular and the diagonal entries
/// nonnegative, each dividing the next.
#[derive(Clone, Debug)]
pub struct Snf {
    pub u: Vec<Vec<BigInt>>,
    pub w: Vec<Vec<BigInt>>,
    pub diag: Vec<BigInt>,
}

impl Snf {
    pub fn rank(&self) -> usize {
        self.diag.iter().filter(|d| !d.is_zero()).count()
    }
}

fn identity(n: usize) -> Vec<Vec<BigInt>> {
    (0..n)
        .map(|i| (0..n).map(|j| BigInt::from((i == j) as i32)).collect())
        .collect()
}

fn row_op(m: &mut [Vec<BigInt>], target: usize, f: &BigInt, src: usize) {
    // row[target] -= f * row[src]
    if f.is_zero() {
        return;
    }
    let s = m[src].clone();
    for (x, y) in m[target].iter_mut().zip(&s) {
        *x -= f * y;
    }
}

fn col_op(m: &mut [Vec<BigInt>], target: usize, f: &BigInt, src: usize) {
    if f.is_zero() {
        return;
    }
    for row in m.iter_mut() {
        let y = row[src].clone();
        row[target] -= f * y;
    }
}

fn swap_cols(m: &mut [Vec<BigInt>], a: usize, b: usize) {
    for row in m.iter_mut() {
        row.swap(a, b);
    }
}

pub fn snf(a: &[Vec<BigInt>], ncols: usize) -> Snf {
    let nrows = a.len();
    let mut m: Vec<Vec<BigInt>> = a.to_vec();
    let mut u = identity(nrows);
    let mut w = identity(ncols);
    let mut t = 0;
    while t < nrows.min(ncols) {
        // smallest nonzero entry of the remaining block
        let pick = (t..nrows)
            .flat_map(|i| (t..ncols).map(move |j| (i, j)))
            .filter(|&(i, j)| !m[i][j].is_zero())
            .min_by(|&(a, b), &(c, d)| m[a][b].abs().cmp(&m[c][d].abs()));
        let Some((pi, pj)) = pick else { break };
        m.swap(t, pi);
        u.swap(t, pi);
        swap_cols(&mut m, t, pj);
        swap_cols(&mut w, t, pj);
        loop {
            let mut clean = true;
            for i in t + 1..nrows {
                let f = m[i][t].div_floor(&m[t][t]);
                row_op(&mut m, i, &f, t);
                row_op(&mut u, i, &f, t);
                if !m[i][t].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..ncols {
                let f = m[t][j].div_floor(&m[t][t]);
                col_op(&mut m, j, &f, t);
                col_op(&mut w, j, &f, t);
                if !m[t][j].is_zero() {
                    clean = false;
                }
            }
            if clean {
                // divisibility: fold any offending row into row t
                let offending = (t + 1..nrows).find(|&i| {
                    (t + 1..ncols).any(|j| !m[i][j].is_multiple_of(&m[t][t]))
                });
                match offending {
                    None => break,
                    Some(i) => {
                        let minus_one = BigInt::from(-1);
                        row_op(&mut m, t, &minus_one, i);
                        row_op(&mut u, t, &minus_one, i);
                        continue;
                    }
                }
            }
            // move the smallest entry of row/column t to the pivot
            let mut best = (t, t);
            for i in t + 1..nrows {
                if !m[i][t].is_zero() && m[i][t].abs() < m[best.0][best.1].abs() {
                    best = (i, t);
                }
            }
            for j in t + 1..ncols {
                if !m[t][j].is_zero() && m[t][j].abs() < m[best.0][best.1].abs() {
                    best = (t, j);
                }
            }
            if best.0 != t {
                m.swap(t, best.0);
                u.swap(t, best.0);
            } else if best.1 != t {
                swap_cols(&mut m, t, best.1);
                swap_cols(&mut w, t, best.1);
            }
        }
        if m[t][t].is_negative() {
            for x in m[t].iter_mut() {
                *x = -x.clone();
            }
            for x in u[t].iter_mut() {
                *x = -x.clone();
            }
        }
        t += 1;
    }
    let diag = (0..nrows.min(ncols)).map(|i| m[i][i].clone()).collect();
    Snf { u, w, diag }
}

pub fn mat_mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>], inner: usize, ncols: usize) -> Vec<Vec<BigInt>> {
    a.iter()
        .map(|row| {
            (0..ncols)
                .map(|j| (0..inner).fold(BigInt::zero(), |acc, k| acc + &row[k] * &b[k][j]))
                .collect()
        })
        .collect()
}

/// Orthogonal basis (unnormalized Gram–Schmidt) of the span of the rows,
/// dropping dependent rows.
pub fn orthogonal_basis(rows: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let mut out: Vec<Vec<Q>> = Vec::new();
    for r in rows {
        let mut v = r.clone();
        for u in &out {
            let c = -(dot(&v, u) / norm_sq(u));
            axpy(&mut v, &c, u);
        }
        if v.iter().any(|x| !x.is_zero()) {
            out.push(v);
        }
    }
    out
}

/// Projection onto the orthogonal complement of the span of `ortho`, an
/// orthogonal basis.
pub fn project_out(x: &[Q], ortho: &[Vec<Q>]) -> Vec<Q> {
    let mut v = x.to_vec();
    for u in ortho {
        let c = -(dot(x, u) / norm_sq(u));
        axpy(&mut v, &c, u);
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zi(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect()
    }

    /// Naive oracle: rank-1 lattice generator is the gcd.
    #[test]
    fn hnf_rank_one_is_gcd() {
        for (a, b) in [(4, 6), (-9, 12), (0, 5), (7, 0), (15, 25)] {
            let h = hnf(&zi(&[&[a], &[b]]));
            assert_eq!(h, zi(&[&[a.gcd(&b)]]));
        }
    }

    #[test]
    fn hnf_examples() {
        assert_eq!(hnf(&zi(&[&[1, 0], &[0, 1]])), zi(&[&[1, 0], &[0, 1]]));
        assert_eq!(hnf(&zi(&[&[2, 3], &[4, 5]])), zi(&[&[2, 0], &[0, 1]]));
        assert_eq!(hnf(&zi(&[&[1, 5], &[0, 15]])), zi(&[&[1, 5], &[0, 15]]));
    }

    #[test]
    fn snf_reconstructs() {
        let a = zi(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]);
        let s = snf(&a, 3);
        let uaw = mat_mul(&mat_mul(&s.u, &a, 3, 3), &s.w, 3, 3);
        for i in 0..3 {
            for j in 0..3 {
                let expected = if i == j { s.diag[i].clone() } else { BigInt::zero() };
                assert_eq!(uaw[i][j], expected);
            }
        }
        assert_eq!(s.diag, vec![BigInt::from(2), BigInt::from(6), BigInt::from(12)]);
    }

    #[test]
    fn kernel_examples() {
        let k = kernel(&[vec![q(1), q(1)]], 2);
        assert_eq!(k, vec![vec![q(-1), q(1)]]);
        assert_eq!(kernel(&[], 2).len(), 2);
    }

    #[test]
    fn rref_examples() {
        let (r, p) = rref(&[vec![q(2), q(4)], vec![q(1), q(2)]]);
        assert_eq!(r, vec![vec![q(1), q(2)]]);
        assert_eq!(p, vec![0]);
    }
}
