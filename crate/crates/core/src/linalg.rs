//! Exact rational and integer linear algebra used by the geometry layers:
//! Gaussian elimination over the rationals, Smith normal form over the
//! integers, and a phase-1 simplex for exact convex-hull membership.

use num::{BigInt, BigRational, Integer, One, Signed, Zero};

pub type Int = BigInt;
pub type Rat = BigRational;

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(Int::from(n))
}

pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(Int::from(num), Int::from(den))
}

// ---------------------------------------------------------------------------
// Rational matrices (row-major Vec<Vec<Rat>>)
// ---------------------------------------------------------------------------

/// Reduced row echelon form; returns the reduced matrix and the pivot columns.
pub fn rref(rows: &[Vec<Rat>]) -> (Vec<Vec<Rat>>, Vec<usize>) {
    let mut a: Vec<Vec<Rat>> = rows.to_vec();
    let m = a.len();
    let n = if m == 0 { 0 } else { a[0].len() };
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        if r == m {
            break;
        }
        let Some(p) = (r..m).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].clone();
        for x in a[r].iter_mut() {
            *x = &*x / &inv;
        }
        for i in 0..m {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..n {
                    let d = &a[r][j] * &f;
                    a[i][j] = &a[i][j] - d;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

pub fn rank(rows: &[Vec<Rat>]) -> usize {
    rref(rows).1.len()
}

/// Any solution of `A x = b`, or `None` when the system is inconsistent.
pub fn solve(a: &[Vec<Rat>], b: &[Rat]) -> Option<Vec<Rat>> {
    let m = a.len();
    assert_eq!(m, b.len());
    let n = if m == 0 { 0 } else { a[0].len() };
    let aug: Vec<Vec<Rat>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let (red, pivots) = rref(&aug);
    // inconsistent iff a pivot lands in the augmented column
    if pivots.contains(&n) {
        return None;
    }
    let mut x = vec![Rat::zero(); n];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = red[i][n].clone();
    }
    Some(x)
}

/// Basis of the kernel of `A` (solutions of `A x = 0`).
pub fn nullspace(a: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    let m = a.len();
    let n = if m == 0 { 0 } else { a[0].len() };
    if n == 0 {
        return Vec::new();
    }
    let (red, pivots) = rref(a);
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let mut basis = Vec::new();
    for &f in &free {
        let mut v = vec![Rat::zero(); n];
        v[f] = Rat::one();
        for (i, &p) in pivots.iter().enumerate() {
            v[p] = -red[i][f].clone();
        }
        basis.push(v);
    }
    basis
}

pub fn determinant(rows: &[Vec<Rat>]) -> Rat {
    let n = rows.len();
    if n == 0 {
        return Rat::one();
    }
    assert_eq!(n, rows[0].len());
    let mut a = rows.to_vec();
    let mut det = Rat::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return Rat::zero();
        };
        if p != c {
            a.swap(c, p);
            det = -det;
        }
        det *= a[c][c].clone();
        let piv = a[c][c].clone();
        for i in c + 1..n {
            if !a[i][c].is_zero() {
                let f = &a[i][c] / &piv;
                for j in c..n {
                    let d = &a[c][j] * &f;
                    a[i][j] = &a[i][j] - d;
                }
            }
        }
    }
    det
}

/// Coefficients (ascending) of the unique polynomial of degree < points.len()
/// through the given points; Lagrange interpolation over the rationals.
pub fn interpolate_polynomial(points: &[(Rat, Rat)]) -> Vec<Rat> {
    let n = points.len();
    let mut coeffs = vec![Rat::zero(); n];
    for (i, (xi, yi)) in points.iter().enumerate() {
        // basis polynomial prod_{j != i} (x - x_j)/(x_i - x_j)
        let mut basis = vec![Rat::zero(); n];
        basis[0] = Rat::one();
        let mut deg = 0;
        let mut denom = Rat::one();
        for (j, (xj, _)) in points.iter().enumerate() {
            if j == i {
                continue;
            }
            denom *= xi - xj;
            // multiply basis by (x - x_j)
            for k in (0..=deg).rev() {
                let c = basis[k].clone();
                basis[k + 1] = &basis[k + 1] + &c;
                basis[k] = -(&c * xj);
            }
            deg += 1;
        }
        let f = yi / denom;
        for k in 0..n {
            let add = &basis[k] * &f;
            coeffs[k] = &coeffs[k] + add;
        }
    }
    coeffs
}

pub fn mat_vec(a: &[Vec<Rat>], x: &[Rat]) -> Vec<Rat> {
    a.iter()
        .map(|row| row.iter().zip(x).map(|(r, xi)| r * xi).sum())
        .collect()
}

pub fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

// ---------------------------------------------------------------------------
// Integer lattice algebra
// ---------------------------------------------------------------------------

/// Smith normal form `U A V = S` with unimodular `U`, `V` and `S` diagonal
/// with the divisibility chain `s_1 | s_2 | ...`.
pub struct Snf {
    pub u: Vec<Vec<Int>>,
    pub s: Vec<Vec<Int>>,
    pub v: Vec<Vec<Int>>,
    pub rank: usize,
}

pub fn smith_normal_form(a: &[Vec<Int>]) -> Snf {
    let m = a.len();
    let n = if m == 0 { 0 } else { a[0].len() };
    let mut s: Vec<Vec<Int>> = a.to_vec();
    let mut u = identity_int(m);
    let mut v = identity_int(n);

    let mut t = 0;
    while t < m.min(n) {
        // locate a nonzero entry of minimal absolute value in the submatrix
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                if !s[i][j].is_zero()
                    && pivot
                        .map(|(pi, pj)| s[i][j].abs() < s[pi][pj].abs())
                        .unwrap_or(true)
                {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        s.swap(t, pi);
        u.swap(t, pi);
        swap_cols(&mut s, t, pj);
        swap_cols(&mut v, t, pj);

        // clear row and column t
        let mut again = true;
        while again {
            again = false;
            for i in t + 1..m {
                if !s[i][t].is_zero() {
                    let q = div_round(&s[i][t], &s[t][t]);
                    row_sub(&mut s, i, t, &q);
                    row_sub(&mut u, i, t, &q);
                    if !s[i][t].is_zero() {
                        s.swap(t, i);
                        u.swap(t, i);
                        again = true;
                    }
                }
            }
            for j in t + 1..n {
                if !s[t][j].is_zero() {
                    let q = div_round(&s[t][j], &s[t][t]);
                    col_sub(&mut s, j, t, &q);
                    col_sub(&mut v, j, t, &q);
                    if !s[t][j].is_zero() {
                        swap_cols(&mut s, t, j);
                        swap_cols(&mut v, t, j);
                        again = true;
                    }
                }
            }
        }

        // enforce divisibility of the remaining block by the pivot
        let mut fixed = false;
        'outer: for i in t + 1..m {
            for j in t + 1..n {
                if !(&s[i][j] % &s[t][t]).is_zero() {
                    // add row i to row t and restart this pivot
                    for k in 0..n {
                        let add = s[i][k].clone();
                        s[t][k] += add;
                    }
                    for k in 0..m {
                        let add = u[i][k].clone();
                        u[t][k] += add;
                    }
                    fixed = true;
                    break 'outer;
                }
            }
        }
        if fixed {
            continue;
        }
        if s[t][t].is_negative() {
            for k in 0..n {
                s[t][k] = -s[t][k].clone();
            }
            for k in 0..m {
                u[t][k] = -u[t][k].clone();
            }
        }
        t += 1;
    }
    Snf { u, s, v, rank: t }
}

fn identity_int(n: usize) -> Vec<Vec<Int>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { Int::one() } else { Int::zero() })
                .collect()
        })
        .collect()
}

fn swap_cols(a: &mut [Vec<Int>], i: usize, j: usize) {
    for row in a.iter_mut() {
        row.swap(i, j);
    }
}

fn row_sub(a: &mut [Vec<Int>], i: usize, t: usize, q: &Int) {
    if q.is_zero() {
        return;
    }
    let n = a[0].len();
    for k in 0..n {
        let d = q * &a[t][k];
        a[i][k] -= d;
    }
}

fn col_sub(a: &mut [Vec<Int>], j: usize, t: usize, q: &Int) {
    if q.is_zero() {
        return;
    }
    for row in a.iter_mut() {
        let d = q * &row[t];
        row[j] -= d;
    }
}

/// Rounded integer quotient, so the remainder has at most half the divisor.
fn div_round(a: &Int, b: &Int) -> Int {
    let two = Int::from(2);
    let (q, r) = a.div_rem(b);
    if &r.abs() * &two > b.abs() {
        if (r.is_negative()) == (b.is_negative()) {
            q + Int::one()
        } else {
            q - Int::one()
        }
    } else {
        q
    }
}

/// Any integer solution of `A x = b`, or `None`.
pub fn solve_integer(a: &[Vec<Int>], b: &[Int]) -> Option<Vec<Int>> {
    let m = a.len();
    assert_eq!(m, b.len());
    let n = if m == 0 { 0 } else { a[0].len() };
    if m == 0 {
        return Some(vec![Int::zero(); n]);
    }
    let snf = smith_normal_form(a);
    let ub: Vec<Int> = snf
        .u
        .iter()
        .map(|row| row.iter().zip(b).map(|(x, y)| x * y).sum())
        .collect();
    let mut y = vec![Int::zero(); n];
    for i in 0..m {
        if i < snf.rank {
            let (q, r) = ub[i].div_rem(&snf.s[i][i]);
            if !r.is_zero() {
                return None;
            }
            y[i] = q;
        } else if !ub[i].is_zero() {
            return None;
        }
    }
    let x: Vec<Int> = (0..n)
        .map(|i| (0..n).map(|j| &snf.v[i][j] * &y[j]).sum())
        .collect();
    Some(x)
}

/// Basis of the integer kernel lattice of `A` (all integer `x` with `A x = 0`).
pub fn integer_kernel(a: &[Vec<Int>]) -> Vec<Vec<Int>> {
    let m = a.len();
    let n = if m == 0 { 0 } else { a[0].len() };
    if m == 0 {
        return (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { Int::one() } else { Int::zero() })
                    .collect()
            })
            .collect();
    }
    let snf = smith_normal_form(a);
    (snf.rank..n)
        .map(|k| (0..n).map(|i| snf.v[i][k].clone()).collect())
        .collect()
}

// ---------------------------------------------------------------------------
// Exact convex-hull membership (phase-1 simplex with Bland's rule)
// ---------------------------------------------------------------------------

/// Decides whether `target` is a convex combination of `points`, exactly.
pub fn in_convex_hull(points: &[Vec<Rat>], target: &[Rat]) -> bool {
    if points.is_empty() {
        return false;
    }
    let d = target.len();
    let n = points.len();
    // constraints: sum_i lambda_i p_i = target ; sum_i lambda_i = 1
    let m = d + 1;
    let mut rows: Vec<Vec<Rat>> = Vec::with_capacity(m);
    for k in 0..d {
        let mut row: Vec<Rat> = points.iter().map(|p| p[k].clone()).collect();
        row.push(target[k].clone());
        rows.push(row);
    }
    let mut last: Vec<Rat> = vec![Rat::one(); n];
    last.push(Rat::one());
    rows.push(last);

    // normalize rhs >= 0
    for row in rows.iter_mut() {
        if row[n].is_negative() {
            for x in row.iter_mut() {
                *x = -x.clone();
            }
        }
    }

    // tableau columns: n structural + m artificial + rhs
    let cols = n + m + 1;
    let mut t: Vec<Vec<Rat>> = rows
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut tr = vec![Rat::zero(); cols];
            tr[..n].clone_from_slice(&row[..n]);
            tr[n + i] = Rat::one();
            tr[cols - 1] = row[n].clone();
            tr
        })
        .collect();
    let mut basis: Vec<usize> = (n..n + m).collect();

    loop {
        // reduced costs for phase-1 objective (sum of artificials)
        let reduced = |t: &Vec<Vec<Rat>>, basis: &Vec<usize>, j: usize| -> Rat {
            let mut z = Rat::zero();
            for i in 0..m {
                if basis[i] >= n {
                    z += t[i][j].clone();
                }
            }
            if j >= n {
                z -= Rat::one();
            }
            z
        };
        let entering = (0..n + m).find(|&j| reduced(&t, &basis, j).is_positive());
        let Some(e) = entering else { break };
        // ratio test, Bland tie-break by basis variable index
        let mut leave: Option<usize> = None;
        for i in 0..m {
            if t[i][e].is_positive() {
                let better = match leave {
                    None => true,
                    Some(l) => {
                        let ri = &t[i][cols - 1] / &t[i][e];
                        let rl = &t[l][cols - 1] / &t[l][e];
                        ri < rl || (ri == rl && basis[i] < basis[l])
                    }
                };
                if better {
                    leave = Some(i);
                }
            }
        }
        let Some(l) = leave else {
            // unbounded phase-1 cannot happen; treat as infeasible
            return false;
        };
        // pivot on (l, e)
        let piv = t[l][e].clone();
        for x in t[l].iter_mut() {
            *x = &*x / &piv;
        }
        for i in 0..m {
            if i != l && !t[i][e].is_zero() {
                let f = t[i][e].clone();
                for j in 0..cols {
                    let d = &t[l][j] * &f;
                    t[i][j] = &t[i][j] - d;
                }
            }
        }
        basis[l] = e;
    }

    let objective: Rat = (0..m)
        .filter(|&i| basis[i] >= n)
        .map(|i| t[i][cols - 1].clone())
        .sum();
    objective.is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ri(vals: &[i64]) -> Vec<Int> {
        vals.iter().map(|&v| Int::from(v)).collect()
    }

    #[test]
    fn snf_diagonalizes() {
        let a = vec![ri(&[2, 4, 4]), ri(&[-6, 6, 12]), ri(&[10, 4, 16])];
        let snf = smith_normal_form(&a);
        // S = U A V
        let mul = |x: &Vec<Vec<Int>>, y: &Vec<Vec<Int>>| -> Vec<Vec<Int>> {
            let (m, k, n) = (x.len(), y.len(), y[0].len());
            (0..m)
                .map(|i| {
                    (0..n)
                        .map(|j| (0..k).map(|l| &x[i][l] * &y[l][j]).sum())
                        .collect()
                })
                .collect()
        };
        let s2 = mul(&mul(&snf.u, &a), &snf.v);
        assert_eq!(s2, snf.s);
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    assert!(snf.s[i][j].is_zero());
                }
            }
        }
        assert!((&snf.s[1][1] % &snf.s[0][0]).is_zero());
        assert!((&snf.s[2][2] % &snf.s[1][1]).is_zero());
        // |det A| = 624 = product of the diagonal entries
        let prod: Int = (0..3).map(|i| snf.s[i][i].clone()).product();
        assert_eq!(prod, Int::from(624));
        assert_eq!(snf.s[0][0], Int::from(2));
    }

    #[test]
    fn integer_solve_and_kernel() {
        // x + 2y + 3z = 6 has integer solutions; kernel has rank 2
        let a = vec![ri(&[1, 2, 3])];
        let x = solve_integer(&a, &ri(&[6])).unwrap();
        let lhs: Int = x
            .iter()
            .zip(&[1i64, 2, 3])
            .map(|(xi, &c)| xi * Int::from(c))
            .sum();
        assert_eq!(lhs, Int::from(6));
        let ker = integer_kernel(&a);
        assert_eq!(ker.len(), 2);
        for v in &ker {
            let s: Int = v
                .iter()
                .zip(&[1i64, 2, 3])
                .map(|(xi, &c)| xi * Int::from(c))
                .sum();
            assert!(s.is_zero());
        }
        // 2x = 1 has none
        assert!(solve_integer(&[ri(&[2])], &ri(&[1])).is_none());
    }

    #[test]
    fn hull_membership() {
        let square = vec![
            vec![rat_int(0), rat_int(0)],
            vec![rat_int(1), rat_int(0)],
            vec![rat_int(0), rat_int(1)],
            vec![rat_int(1), rat_int(1)],
        ];
        assert!(in_convex_hull(&square, &[rat(1, 2), rat(1, 2)]));
        assert!(in_convex_hull(&square, &[rat_int(1), rat_int(1)]));
        assert!(!in_convex_hull(&square, &[rat(3, 2), rat(1, 2)]));
    }

    #[test]
    fn rational_solve_and_nullspace() {
        let a = vec![
            vec![rat_int(1), rat_int(1)],
            vec![rat_int(1), rat_int(-1)],
        ];
        let x = solve(&a, &[rat_int(3), rat_int(1)]).unwrap();
        assert_eq!(x, vec![rat_int(2), rat_int(1)]);
        let ns = nullspace(&[vec![rat_int(1), rat_int(2), rat_int(3)]]);
        assert_eq!(ns.len(), 2);
    }
}
