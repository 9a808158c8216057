//! Lattices inside `Q^n`: canonical bases, integral preimages, membership.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::rational::{has_independent_columns, solve};
use super::smith::{hermite_normal_form, integer_kernel_basis};
use super::LinalgError;
use crate::{IntMatrix, RatMatrix};

/// Basis of `{a in Z^r : n a in Z^k}` in Hermite form. Always of full rank `r`.
pub fn integral_solutions(n: &RatMatrix) -> IntMatrix {
    let (k, r) = n.shape();
    let (scaled, den) = n.clear_denominators();
    if den.is_one() {
        return IntMatrix::identity(r);
    }
    // scaled a - den z = 0 with z in Z^k
    let mut big = IntMatrix::zeros(k, r + k);
    big.set_block(0, 0, &scaled);
    big.set_block(0, r, &IntMatrix::identity(k).scale(&-den));
    let kernel = integer_kernel_basis(&big);
    let projected = kernel.block(0, 0, r, kernel.cols());
    hermite_normal_form(&projected)
}

/// Basis of `{x in span_Z(l) : m x in Z^k}`, expressed in ambient coordinates.
pub fn integral_preimage_lattice(m: &RatMatrix, l: &IntMatrix) -> Result<IntMatrix, LinalgError> {
    let lq = l.to_rational();
    if !has_independent_columns(&lq) {
        return Err(LinalgError::DependentLattice);
    }
    if m.cols() != l.rows() {
        return Err(LinalgError::Shape(format!(
            "map with {} columns on a lattice in Z^{}",
            m.cols(),
            l.rows()
        )));
    }
    let coeffs = integral_solutions(&(m * &lq));
    Ok(l * &coeffs)
}

/// Canonical basis of the subgroup of `Q^n` generated by the columns of `gens`.
///
/// The generators are scaled to integers, put into Hermite form, and scaled
/// back, so two generating sets of the same group give identical output.
pub fn rational_lattice_basis(gens: &RatMatrix) -> RatMatrix {
    let (scaled, den) = gens.clear_denominators();
    let h = hermite_normal_form(&scaled);
    let inv = BigRational::new(BigInt::one(), den);
    h.to_rational().scale(&inv)
}

/// Integer coordinates of `x` in the lattice with independent basis `basis`,
/// or `None` if `x` is not a lattice point.
pub fn lattice_coordinates(basis: &RatMatrix, x: &[BigRational]) -> Option<Vec<BigInt>> {
    if basis.cols() == 0 {
        return x.iter().all(Zero::is_zero).then(Vec::new);
    }
    let c = solve(basis, x)?;
    if (*basis).mul_vec(&c) != x {
        return None;
    }
    c.into_iter()
        .map(|q| q.is_integer().then(|| q.to_integer()))
        .collect()
}
