//! Smith and Hermite normal forms over a Euclidean domain.

use super::Matrix;
use crate::scalar::EuclideanScalar;

/// `u * source * v == d` with `u`, `v` unimodular and `d` diagonal.
#[derive(Clone, Debug, PartialEq)]
pub struct SmithDecomposition<T> {
    pub u: Matrix<T>,
    pub u_inv: Matrix<T>,
    pub v: Matrix<T>,
    pub d: Matrix<T>,
    pub source: Matrix<T>,
}

impl<T: EuclideanScalar> SmithDecomposition<T> {
    pub fn diagonal(&self) -> Vec<T> {
        let n = self.d.rows().min(self.d.cols());
        (0..n).map(|i| self.d[(i, i)].clone()).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().take_while(|d| !d.is_zero()).count()
    }

    /// Nonzero invariant factors `d1 | d2 | ...`.
    pub fn invariant_factors(&self) -> Vec<T> {
        self.diagonal()
            .into_iter()
            .filter(|d| !d.is_zero())
            .collect()
    }
}

struct SnfState<T> {
    a: Matrix<T>,
    u: Matrix<T>,
    u_inv: Matrix<T>,
    v: Matrix<T>,
}

impl<T: EuclideanScalar> SnfState<T> {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        self.u.swap_rows(i, j);
        self.u_inv.swap_cols(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        self.v.swap_cols(i, j);
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.a.cols() {
            self.a[(i, j)] = -self.a[(i, j)].clone();
        }
        for j in 0..self.u.cols() {
            self.u[(i, j)] = -self.u[(i, j)].clone();
        }
        for r in 0..self.u_inv.rows() {
            self.u_inv[(r, i)] = -self.u_inv[(r, i)].clone();
        }
    }

    /// row_i += c * row_j
    fn add_row(&mut self, i: usize, j: usize, c: &T) {
        if c.is_zero() {
            return;
        }
        add_row_multiple(&mut self.a, i, j, c);
        add_row_multiple(&mut self.u, i, j, c);
        // inverse update: col_j -= c * col_i
        for r in 0..self.u_inv.rows() {
            let delta = c.clone() * self.u_inv[(r, i)].clone();
            self.u_inv[(r, j)] = self.u_inv[(r, j)].clone() - delta;
        }
    }

    /// col_i += c * col_j
    fn add_col(&mut self, i: usize, j: usize, c: &T) {
        if c.is_zero() {
            return;
        }
        add_col_multiple(&mut self.a, i, j, c);
        add_col_multiple(&mut self.v, i, j, c);
    }

    fn find_pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.a.rows() {
            for j in t..self.a.cols() {
                let x = &self.a[(i, j)];
                if x.is_zero() {
                    continue;
                }
                match best {
                    Some((bi, bj)) if self.a[(bi, bj)].abs() <= x.abs() => {}
                    _ => best = Some((i, j)),
                }
            }
        }
        best
    }

    /// Clears row t and column t outside the pivot; returns false if the
    /// pivot has to be re-chosen because a smaller remainder appeared.
    fn clear_pivot_cross(&mut self, t: usize) -> bool {
        let p = self.a[(t, t)].clone();
        for i in t + 1..self.a.rows() {
            if self.a[(i, t)].is_zero() {
                continue;
            }
            let q = self.a[(i, t)].div_floor(&p);
            self.add_row(i, t, &-q);
            if !self.a[(i, t)].is_zero() {
                return false;
            }
        }
        for j in t + 1..self.a.cols() {
            if self.a[(t, j)].is_zero() {
                continue;
            }
            let q = self.a[(t, j)].div_floor(&p);
            self.add_col(j, t, &-q);
            if !self.a[(t, j)].is_zero() {
                return false;
            }
        }
        true
    }

    fn run(&mut self) {
        let (m, n) = self.a.shape();
        let mut t = 0;
        while t < m.min(n) {
            let Some((pi, pj)) = self.find_pivot(t) else {
                break;
            };
            self.swap_rows(t, pi);
            self.swap_cols(t, pj);
            if !self.clear_pivot_cross(t) {
                continue;
            }
            // divisibility: fold an offending row into row t and retry
            let p = self.a[(t, t)].clone();
            let offending =
                (t + 1..m).find(|&i| (t + 1..n).any(|j| !self.a[(i, j)].is_multiple_of(&p)));
            if let Some(i) = offending {
                self.add_row(t, i, &T::one());
                continue;
            }
            if self.a[(t, t)].is_negative() {
                self.negate_row(t);
            }
            t += 1;
        }
    }
}

fn add_row_multiple<T: EuclideanScalar>(m: &mut Matrix<T>, i: usize, j: usize, c: &T) {
    for k in 0..m.cols() {
        let delta = c.clone() * m[(j, k)].clone();
        if !delta.is_zero() {
            m[(i, k)] = m[(i, k)].clone() + delta;
        }
    }
}

fn add_col_multiple<T: EuclideanScalar>(m: &mut Matrix<T>, i: usize, j: usize, c: &T) {
    for k in 0..m.rows() {
        let delta = c.clone() * m[(k, j)].clone();
        if !delta.is_zero() {
            m[(k, i)] = m[(k, i)].clone() + delta;
        }
    }
}

pub fn smith_normal_form<T: EuclideanScalar>(a: &Matrix<T>) -> SmithDecomposition<T> {
    let (m, n) = a.shape();
    let mut st = SnfState {
        a: a.clone(),
        u: Matrix::identity(m),
        u_inv: Matrix::identity(m),
        v: Matrix::identity(n),
    };
    st.run();
    SmithDecomposition {
        u: st.u,
        u_inv: st.u_inv,
        v: st.v,
        d: st.a,
        source: a.clone(),
    }
}

/// Canonical basis of the lattice spanned by the columns of `a`.
///
/// Column-style Hermite form: pivot rows strictly increase from column to
/// column, pivots are positive, entries left of a pivot in its row lie in
/// `[0, pivot)`. Zero columns are dropped, so the result has full column rank.
pub fn hermite_normal_form<T: EuclideanScalar>(a: &Matrix<T>) -> Matrix<T> {
    let (m, n) = a.shape();
    let mut h = a.clone();
    let mut k = 0;
    for i in 0..m {
        if k >= n {
            break;
        }
        // gcd-combine row i across columns k..n into column k
        loop {
            let mut best: Option<usize> = None;
            for j in k..n {
                if h[(i, j)].is_zero() {
                    continue;
                }
                match best {
                    Some(b) if h[(i, b)].abs() <= h[(i, j)].abs() => {}
                    _ => best = Some(j),
                }
            }
            let Some(b) = best else { break };
            h.swap_cols(k, b);
            let mut done = true;
            for j in k + 1..n {
                if h[(i, j)].is_zero() {
                    continue;
                }
                let q = h[(i, j)].div_floor(&h[(i, k)]);
                add_col_multiple(&mut h, j, k, &-q);
                if !h[(i, j)].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h[(i, k)].is_zero() {
            continue;
        }
        if h[(i, k)].is_negative() {
            for r in 0..m {
                h[(r, k)] = -h[(r, k)].clone();
            }
        }
        let p = h[(i, k)].clone();
        for j in 0..k {
            let q = h[(i, j)].div_floor(&p);
            add_col_multiple(&mut h, j, k, &-q);
        }
        k += 1;
    }
    h.select_columns(&(0..k).collect::<Vec<_>>())
}

/// Saturated basis of `{x : a x = 0}` over the integers, in Hermite form.
pub fn integer_kernel_basis<T: EuclideanScalar>(a: &Matrix<T>) -> Matrix<T> {
    let snf = smith_normal_form(a);
    let r = snf.rank();
    let idx: Vec<usize> = (r..a.cols()).collect();
    hermite_normal_form(&snf.v.select_columns(&idx))
}

/// Finitely generated Abelian group `Z^free_rank ⊕ Z/t1 ⊕ ... ⊕ Z/tk`.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct FgAbelianGroup {
    pub free_rank: usize,
    pub torsion_invariants: Vec<num_bigint::BigInt>,
}

impl FgAbelianGroup {
    pub fn free(rank: usize) -> Self {
        FgAbelianGroup {
            free_rank: rank,
            torsion_invariants: Vec::new(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion_invariants.is_empty()
    }
}

impl std::fmt::Display for FgAbelianGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        if self.free_rank > 0 {
            parts.push(if self.free_rank == 1 {
                "Z".into()
            } else {
                format!("Z^{}", self.free_rank)
            });
        }
        parts.extend(self.torsion_invariants.iter().map(|t| format!("Z/{t}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Cokernel of `a : Z^cols -> Z^rows`.
pub fn cokernel_invariants(a: &Matrix<num_bigint::BigInt>) -> FgAbelianGroup {
    use num_traits::One;
    let snf = smith_normal_form(a);
    let factors = snf.invariant_factors();
    FgAbelianGroup {
        free_rank: a.rows() - factors.len(),
        torsion_invariants: factors.into_iter().filter(|d| !d.is_one()).collect(),
    }
}
