//! Row reduction over an exact field.

use super::{LinalgError, Matrix};
use crate::scalar::FieldScalar;

/// Reduced row echelon form and pivot columns.
pub fn rref<T: FieldScalar>(a: &Matrix<T>) -> (Matrix<T>, Vec<usize>) {
    let (m, n) = a.shape();
    let mut r = a.clone();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..n {
        if row == m {
            break;
        }
        let Some(p) = (row..m).find(|&i| !r[(i, col)].is_zero()) else {
            continue;
        };
        r.swap_rows(row, p);
        let inv = T::one() / r[(row, col)].clone();
        for j in col..n {
            r[(row, j)] = r[(row, j)].clone() * inv.clone();
        }
        for i in 0..m {
            if i == row || r[(i, col)].is_zero() {
                continue;
            }
            let f = r[(i, col)].clone();
            for j in col..n {
                let delta = f.clone() * r[(row, j)].clone();
                r[(i, j)] = r[(i, j)].clone() - delta;
            }
        }
        pivots.push(col);
        row += 1;
    }
    (r, pivots)
}

pub fn rank<T: FieldScalar>(a: &Matrix<T>) -> usize {
    rref(a).1.len()
}

/// Kernel basis read off the reduced echelon form, one vector per free
/// column, each scaled so its first nonzero entry is positive.
pub fn kernel_basis<T: FieldScalar + PartialOrd>(a: &Matrix<T>) -> Matrix<T> {
    let n = a.cols();
    let (r, pivots) = rref(a);
    let mut basis = Vec::new();
    for free in (0..n).filter(|c| !pivots.contains(c)) {
        let mut v = vec![T::zero(); n];
        v[free] = T::one();
        for (i, &p) in pivots.iter().enumerate() {
            v[p] = -r[(i, free)].clone();
        }
        if let Some(first) = v.iter().find(|x| !x.is_zero()) {
            if *first < T::zero() {
                v = v.into_iter().map(|x| -x).collect();
            }
        }
        basis.push(v);
    }
    Matrix::from_columns(n, &basis).expect("kernel vectors have ambient length")
}

/// Pivot columns of `a`, a basis of its column space.
pub fn image_basis<T: FieldScalar>(a: &Matrix<T>) -> Matrix<T> {
    let (_, pivots) = rref(a);
    a.select_columns(&pivots)
}

#[derive(Clone, Debug, PartialEq)]
pub struct RankKernelImage<T> {
    pub rank: usize,
    pub kernel: Matrix<T>,
    pub image: Matrix<T>,
}

pub fn rational_rank_kernel_image<T: FieldScalar + PartialOrd>(
    a: &Matrix<T>,
) -> RankKernelImage<T> {
    let (_, pivots) = rref(a);
    RankKernelImage {
        rank: pivots.len(),
        kernel: kernel_basis(a),
        image: a.select_columns(&pivots),
    }
}

/// Some `x` with `a x = b`, or `None` if the system is inconsistent.
/// Free variables are set to zero.
pub fn solve<T: FieldScalar>(a: &Matrix<T>, b: &[T]) -> Option<Vec<T>> {
    assert_eq!(
        a.rows(),
        b.len(),
        "right-hand side length must match row count"
    );
    let col = Matrix::from_columns(b.len(), &[b.to_vec()]).expect("column length checked");
    let aug = a.hstack(&col).expect("row counts agree");
    let (r, pivots) = rref(&aug);
    let n = a.cols();
    if pivots.last() == Some(&n) {
        return None;
    }
    let mut x = vec![T::zero(); n];
    for (i, &p) in pivots.iter().enumerate() {
        x[p] = r[(i, n)].clone();
    }
    Some(x)
}

/// Solves `a X = b` column by column.
pub fn solve_matrix<T: FieldScalar>(a: &Matrix<T>, b: &Matrix<T>) -> Option<Matrix<T>> {
    let cols: Option<Vec<Vec<T>>> = b.columns().iter().map(|c| solve(a, c)).collect();
    Matrix::from_columns(a.cols(), &cols?).ok()
}

/// Rows spanning the left annihilator of the column space of `a`: a matrix
/// `p` with `p a = 0` and full row rank `a.rows() - rank(a)`.
pub fn left_annihilator<T: FieldScalar + PartialOrd>(a: &Matrix<T>) -> Matrix<T> {
    kernel_basis(&a.transpose()).transpose()
}

pub fn inverse<T: FieldScalar>(a: &Matrix<T>) -> Result<Matrix<T>, LinalgError> {
    let n = a.rows();
    if a.cols() != n {
        return Err(LinalgError::Shape(format!(
            "inverse of {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    let aug = a.hstack(&Matrix::identity(n))?;
    let (r, pivots) = rref(&aug);
    if pivots.len() < n || (n > 0 && pivots[n - 1] != n - 1) {
        return Err(LinalgError::Singular);
    }
    Ok(r.block(0, n, n, n))
}

/// True when the columns of `a` are linearly independent.
pub fn has_independent_columns<T: FieldScalar>(a: &Matrix<T>) -> bool {
    rank(a) == a.cols()
}
