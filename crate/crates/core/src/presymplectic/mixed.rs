use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::PresymplecticError;
use crate::linalg::{
    integer_kernel_basis, kernel_basis, lattice_coordinates, left_annihilator,
    rational_lattice_basis, rref, solve,
};
use crate::scalar::int_to_rat;
use crate::RatMatrix;

/// Subgroup `span_Z(free) + span_Q(divisible)` of `Q^n`.
///
/// Normal form: the divisible part is kept as the rows of its reduced
/// echelon form (stored as columns), lattice generators have zero entries in
/// the divisible pivot coordinates and are in Hermite form. Two presentations
/// of the same group therefore compare equal.
#[derive(Clone, PartialEq, Eq)]
pub struct MixedGroup {
    ambient_dim: usize,
    free: RatMatrix,
    divisible: RatMatrix,
    pivots: Vec<usize>,
}

impl MixedGroup {
    pub fn new(
        ambient_dim: usize,
        free_gens: &RatMatrix,
        divisible_gens: &RatMatrix,
    ) -> Result<Self, PresymplecticError> {
        if free_gens.rows() != ambient_dim || divisible_gens.rows() != ambient_dim {
            return Err(PresymplecticError::Shape(format!(
                "generators of lengths {} and {} in Q^{ambient_dim}",
                free_gens.rows(),
                divisible_gens.rows()
            )));
        }
        let (r, pivots) = rref(&divisible_gens.transpose());
        let rows: Vec<Vec<BigRational>> = (0..pivots.len()).map(|i| r.row(i)).collect();
        let divisible = RatMatrix::from_columns(ambient_dim, &rows).expect("row length");
        let mut g = MixedGroup {
            ambient_dim,
            free: RatMatrix::zeros(ambient_dim, 0),
            divisible,
            pivots,
        };
        let reduced: Vec<Vec<BigRational>> =
            free_gens.columns().iter().map(|v| g.reduce(v)).collect();
        let reduced = RatMatrix::from_columns(ambient_dim, &reduced).expect("length");
        g.free = rational_lattice_basis(&reduced);
        Ok(g)
    }

    pub fn trivial(n: usize) -> Self {
        MixedGroup {
            ambient_dim: n,
            free: RatMatrix::zeros(n, 0),
            divisible: RatMatrix::zeros(n, 0),
            pivots: Vec::new(),
        }
    }

    /// `Z^n`.
    pub fn integer_lattice(n: usize) -> Self {
        Self::new(n, &RatMatrix::identity(n), &RatMatrix::zeros(n, 0)).expect("shape")
    }

    /// `Q^n`.
    pub fn rational_space(n: usize) -> Self {
        Self::new(n, &RatMatrix::zeros(n, 0), &RatMatrix::identity(n)).expect("shape")
    }

    pub fn lattice(gens: &RatMatrix) -> Self {
        Self::new(gens.rows(), gens, &RatMatrix::zeros(gens.rows(), 0)).expect("shape")
    }

    pub fn subspace(gens: &RatMatrix) -> Self {
        Self::new(gens.rows(), &RatMatrix::zeros(gens.rows(), 0), gens).expect("shape")
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn free_gens(&self) -> &RatMatrix {
        &self.free
    }

    pub fn divisible_gens(&self) -> &RatMatrix {
        &self.divisible
    }

    pub fn free_rank(&self) -> usize {
        self.free.cols()
    }

    pub fn divisible_rank(&self) -> usize {
        self.divisible.cols()
    }

    pub fn is_trivial(&self) -> bool {
        self.free.cols() == 0 && self.divisible.cols() == 0
    }

    /// All generators, lattice ones first.
    pub fn generators(&self) -> RatMatrix {
        self.free.hstack(&self.divisible).expect("rows")
    }

    /// Representative of `x` modulo the divisible part, zero at its pivots.
    pub fn reduce(&self, x: &[BigRational]) -> Vec<BigRational> {
        let mut y = x.to_vec();
        for (i, &p) in self.pivots.iter().enumerate() {
            if y[p].is_zero() {
                continue;
            }
            let c = y[p].clone();
            for (k, yk) in y.iter_mut().enumerate() {
                let d = &self.divisible[(k, i)];
                if !d.is_zero() {
                    *yk -= &c * d;
                }
            }
        }
        y
    }

    pub fn contains(&self, x: &[BigRational]) -> bool {
        self.lattice_coordinates(x).is_some()
    }

    /// Integer coordinates of `x` modulo the divisible part, if `x` is a member.
    pub fn lattice_coordinates(&self, x: &[BigRational]) -> Option<Vec<BigInt>> {
        if x.len() != self.ambient_dim {
            return None;
        }
        lattice_coordinates(&self.free, &self.reduce(x))
    }

    /// True when `x` lies in the divisible part, i.e. `Q·x` is inside the group.
    pub fn contains_line(&self, x: &[BigRational]) -> bool {
        x.len() == self.ambient_dim && self.reduce(x).iter().all(Zero::is_zero)
    }

    pub fn contains_group(&self, other: &MixedGroup) -> bool {
        other.ambient_dim == self.ambient_dim
            && other.free.columns().iter().all(|v| self.contains(v))
            && other
                .divisible
                .columns()
                .iter()
                .all(|v| self.contains_line(v))
    }

    pub fn sum(&self, other: &MixedGroup) -> Result<MixedGroup, PresymplecticError> {
        if other.ambient_dim != self.ambient_dim {
            return Err(PresymplecticError::GroupMismatch);
        }
        MixedGroup::new(
            self.ambient_dim,
            &self.free.hstack(&other.free).expect("rows"),
            &self.divisible.hstack(&other.divisible).expect("rows"),
        )
    }

    /// Image under the linear map `t`.
    pub fn image(&self, t: &RatMatrix) -> Result<MixedGroup, PresymplecticError> {
        self.check_map(t)?;
        MixedGroup::new(t.rows(), &(t * &self.free), &(t * &self.divisible))
    }

    /// `{x in B : t x = 0}`.
    pub fn kernel(&self, t: &RatMatrix) -> Result<MixedGroup, PresymplecticError> {
        self.check_map(t)?;
        let zeros = RatMatrix::zeros(t.rows(), 0);
        self.level_set(t, &zeros)
    }

    /// `{x in B : m x in Z^k}`.
    pub fn integral_level_set(&self, m: &RatMatrix) -> Result<MixedGroup, PresymplecticError> {
        self.check_map(m)?;
        self.level_set(m, &RatMatrix::identity(m.rows()))
    }

    /// `{x in B : m x in span_Z(l)}`. With `x = F a + D r` and `m x = l z` this
    /// is an integer kernel in `(a, z)` after eliminating `r`.
    fn level_set(&self, m: &RatMatrix, l: &RatMatrix) -> Result<MixedGroup, PresymplecticError> {
        let n = self.ambient_dim;
        let md = m * &self.divisible;
        let mf = m * &self.free;
        let pi = left_annihilator(&md);
        let (f, z) = (self.free.cols(), l.cols());
        let mut sys = RatMatrix::zeros(pi.rows(), f + z);
        sys.set_block(0, 0, &(&pi * &mf));
        sys.set_block(0, f, &(&pi * l).neg());
        let (scaled, _) = sys.clear_denominators();
        let sols = integer_kernel_basis(&scaled).to_rational();
        let mut free_out = Vec::with_capacity(sols.cols());
        for s in sols.columns() {
            let a = &s[..f];
            let rhs: Vec<BigRational> = l
                .mul_vec(&s[f..])
                .iter()
                .zip(mf.mul_vec(a))
                .map(|(lz, fa)| lz - fa)
                .collect();
            let r = solve(&md, &rhs).expect("consistent by construction");
            let x: Vec<BigRational> = self
                .free
                .mul_vec(a)
                .iter()
                .zip(self.divisible.mul_vec(&r))
                .map(|(u, v)| u + v)
                .collect();
            free_out.push(x);
        }
        let free_out = RatMatrix::from_columns(n, &free_out).expect("length");
        let div_out = &self.divisible * &kernel_basis(&md);
        MixedGroup::new(n, &free_out, &div_out)
    }

    fn check_map(&self, t: &RatMatrix) -> Result<(), PresymplecticError> {
        if t.cols() != self.ambient_dim {
            return Err(PresymplecticError::Shape(format!(
                "map with {} columns on Q^{}",
                t.cols(),
                self.ambient_dim
            )));
        }
        Ok(())
    }

    /// An element from integer lattice coordinates and rational divisible ones.
    pub fn element(&self, a: &[BigInt], r: &[BigRational]) -> Vec<BigRational> {
        let a: Vec<BigRational> = a.iter().map(int_to_rat).collect();
        self.free
            .mul_vec(&a)
            .iter()
            .zip(self.divisible.mul_vec(r))
            .map(|(u, v)| u + v)
            .collect()
    }
}

impl std::fmt::Debug for MixedGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("MixedGroup")
            .field("ambient_dim", &self.ambient_dim)
            .field("free", &self.free.transpose().to_strings())
            .field("divisible", &self.divisible.transpose().to_strings())
            .finish()
    }
}

impl Serialize for MixedGroup {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("MixedGroup", 3)?;
        st.serialize_field("ambient_dim", &self.ambient_dim)?;
        st.serialize_field("free_gens", &self.free.transpose().to_strings())?;
        st.serialize_field("divisible_gens", &self.divisible.transpose().to_strings())?;
        st.end()
    }
}
