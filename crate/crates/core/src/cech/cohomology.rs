use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::complex::{SimplicialComplex, SimplicialMap};
use crate::linalg::{
    integer_kernel_basis, kernel_basis, rank, smith_normal_form, solve, solve_matrix,
    FgAbelianGroup,
};
use crate::scalar::common_denominator;
use crate::{IntMatrix, RatMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Ring {
    #[serde(rename = "Z")]
    Integer,
    #[serde(rename = "Q")]
    Rational,
}

/// `H^k` of a simplicial complex with chosen representative cocycles.
///
/// For `Z` coefficients the representatives list the free generators first,
/// then one generator per torsion invariant. For `Q` they are a basis.
#[derive(Clone, Debug, PartialEq)]
pub struct CohomologyGroup {
    pub degree: usize,
    pub ring: Ring,
    pub presentation: FgAbelianGroup,
    pub representatives: IntMatrix,
    coboundaries: RatMatrix,
}

impl CohomologyGroup {
    pub fn dimension(&self) -> usize {
        self.presentation.free_rank
    }

    pub fn free_representatives(&self) -> IntMatrix {
        let idx: Vec<usize> = (0..self.dimension()).collect();
        self.representatives.select_columns(&idx)
    }

    /// Coordinates of the class of `cocycle` in the free representatives,
    /// over `Q`. Torsion classes have zero coordinates. `None` if `cocycle`
    /// is not a cocycle of the right degree.
    pub fn coordinates(&self, cocycle: &[BigRational]) -> Option<Vec<BigRational>> {
        let free = self.free_representatives().to_rational();
        let basis = free.hstack(&self.coboundaries).ok()?;
        let x = solve(&basis, cocycle)?;
        Some(x[..self.dimension()].to_vec())
    }
}

/// Cohomology of `k` in degree `degree`.
pub fn cohomology(k: &SimplicialComplex, degree: usize, ring: Ring) -> CohomologyGroup {
    let delta = k.coboundary(degree);
    let incoming = k.incoming_coboundary(degree);
    debug_assert!((&delta * &incoming).is_zero());
    let coboundaries = crate::linalg::image_basis(&incoming.to_rational());
    match ring {
        Ring::Integer => integer_cohomology(degree, &delta, &incoming, coboundaries),
        Ring::Rational => rational_cohomology(degree, &delta, coboundaries),
    }
}

fn integer_cohomology(
    degree: usize,
    delta: &IntMatrix,
    incoming: &IntMatrix,
    coboundaries: RatMatrix,
) -> CohomologyGroup {
    let cocycles = integer_kernel_basis(delta);
    let z = cocycles.cols();
    // coordinates of the coboundaries in the saturated cocycle basis
    let coords = solve_matrix(&cocycles.to_rational(), &incoming.to_rational())
        .and_then(|m| m.to_integer())
        .expect("coboundaries are integral combinations of a saturated cocycle basis");
    let snf = smith_normal_form(&coords);
    let diag = snf.diagonal();
    let r = snf.rank();
    let mut free = Vec::new();
    let mut torsion = Vec::new();
    let mut invariants = Vec::new();
    for i in 0..z {
        let generator = cocycles.mul_vec(&snf.u_inv.column(i));
        match diag.get(i) {
            Some(d) if i < r => {
                if !d.is_one() {
                    invariants.push(d.clone());
                    torsion.push(generator);
                }
            }
            _ => free.push(generator),
        }
    }
    let free_rank = free.len();
    free.extend(torsion);
    CohomologyGroup {
        degree,
        ring: Ring::Integer,
        presentation: FgAbelianGroup {
            free_rank,
            torsion_invariants: invariants,
        },
        representatives: IntMatrix::from_columns(delta.cols(), &free).expect("cochain length"),
        coboundaries,
    }
}

fn rational_cohomology(
    degree: usize,
    delta: &IntMatrix,
    coboundaries: RatMatrix,
) -> CohomologyGroup {
    let n = delta.cols();
    let kernel = kernel_basis(&delta.to_rational());
    let mut span = coboundaries.clone();
    let mut current = rank(&span);
    let mut chosen = Vec::new();
    for v in kernel.columns() {
        let col = RatMatrix::from_columns(n, std::slice::from_ref(&v)).expect("length");
        let extended = span.hstack(&col).expect("rows");
        let r = rank(&extended);
        if r > current {
            span = extended;
            current = r;
            chosen.push(primitive(&v));
        }
    }
    CohomologyGroup {
        degree,
        ring: Ring::Rational,
        presentation: FgAbelianGroup::free(chosen.len()),
        representatives: IntMatrix::from_columns(n, &chosen).expect("cochain length"),
        coboundaries,
    }
}

/// Integer vector with coprime entries on the same ray.
fn primitive(v: &[BigRational]) -> Vec<num_bigint::BigInt> {
    use num_integer::Integer;
    let den = common_denominator(v);
    let ints: Vec<num_bigint::BigInt> = v
        .iter()
        .map(|x| (x * BigRational::from_integer(den.clone())).to_integer())
        .collect();
    let g = ints
        .iter()
        .fold(num_bigint::BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        ints
    } else {
        ints.into_iter().map(|x| x / &g).collect()
    }
}

/// Image of `H^k(K; Z)` in `H^k(K; Q)`.
#[derive(Clone, Debug, PartialEq)]
pub struct LatticeInReal {
    /// Representatives of the rational basis.
    pub rational_basis: IntMatrix,
    /// Integral generators (free part).
    pub generators: IntMatrix,
    /// Column `j`: coordinates of generator `j` in the rational basis.
    pub coordinates: RatMatrix,
}

pub fn lattice_in_real(k: &SimplicialComplex, degree: usize) -> LatticeInReal {
    let q = cohomology(k, degree, Ring::Rational);
    let z = cohomology(k, degree, Ring::Integer);
    let generators = z.free_representatives();
    let cols: Vec<Vec<BigRational>> = generators
        .to_rational()
        .columns()
        .iter()
        .map(|g| q.coordinates(g).expect("integral generators are cocycles"))
        .collect();
    LatticeInReal {
        rational_basis: q.representatives.clone(),
        generators,
        coordinates: RatMatrix::from_columns(q.dimension(), &cols).expect("dimension"),
    }
}

/// Matrix of `f^*: H^k(target) -> H^k(source)` with respect to the free
/// representatives on both sides: column `j` holds the source coordinates
/// of the pullback of target generator `j`.
pub fn induced_pullback_matrix(f: &SimplicialMap, degree: usize, ring: Ring) -> RatMatrix {
    let src = cohomology(f.source(), degree, ring);
    let dst = cohomology(f.target(), degree, ring);
    pullback_between(f, degree, &src, &dst)
}

pub(crate) fn pullback_between(
    f: &SimplicialMap,
    degree: usize,
    src: &CohomologyGroup,
    dst: &CohomologyGroup,
) -> RatMatrix {
    let cochain = f.cochain_pullback(degree).to_rational();
    let cols: Vec<Vec<BigRational>> = dst
        .free_representatives()
        .to_rational()
        .columns()
        .iter()
        .map(|g| {
            let pulled = cochain.mul_vec(g);
            src.coordinates(&pulled)
                .expect("pullbacks of cocycles are cocycles")
        })
        .collect();
    RatMatrix::from_columns(src.dimension(), &cols).expect("dimension")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::inverse;

    fn betti(k: &SimplicialComplex, d: usize) -> usize {
        cohomology(k, d, Ring::Rational).dimension()
    }

    #[test]
    fn circle_and_spheres() {
        let c = SimplicialComplex::circle();
        assert_eq!(
            cohomology(&c, 1, Ring::Integer).presentation,
            FgAbelianGroup::free(1)
        );
        assert_eq!(betti(&c, 0), 1);
        let s2 = SimplicialComplex::sphere(2);
        assert_eq!(
            cohomology(&s2, 2, Ring::Integer).presentation,
            FgAbelianGroup::free(1)
        );
        assert_eq!(betti(&s2, 1), 0);
        assert_eq!(betti(&SimplicialComplex::sphere(0), 0), 2);
    }

    #[test]
    fn representatives_are_cocycles() {
        let k = SimplicialComplex::disjoint_union(&[
            SimplicialComplex::circle(),
            SimplicialComplex::sphere(2),
        ]);
        for d in 0..3 {
            for ring in [Ring::Integer, Ring::Rational] {
                let g = cohomology(&k, d, ring);
                assert!((&k.coboundary(d) * &g.representatives).is_zero());
            }
        }
    }

    #[test]
    fn lattice_of_circle() {
        let l = lattice_in_real(&SimplicialComplex::polygon(4).unwrap(), 1);
        assert_eq!(l.coordinates.shape(), (1, 1));
        // a Z-basis whose Q-span is everything
        assert!(inverse(&l.coordinates).is_ok());
        let contractible = lattice_in_real(&SimplicialComplex::sphere(2), 1);
        assert_eq!(contractible.generators.cols(), 0);
    }

    #[test]
    fn arc_into_circle_pulls_back_to_zero() {
        let f = SimplicialMap::new(
            SimplicialComplex::interval(),
            SimplicialComplex::circle(),
            vec![0, 1],
        )
        .unwrap();
        let m = induced_pullback_matrix(&f, 1, Ring::Rational);
        assert_eq!(m.shape(), (0, 1));
    }

    #[test]
    fn degree_one_self_map() {
        let c = SimplicialComplex::circle();
        let rot = SimplicialMap::new(c.clone(), c.clone(), vec![1, 2, 0]).unwrap();
        let m = induced_pullback_matrix(&rot, 1, Ring::Integer);
        assert!(m.is_identity());
        let flip = SimplicialMap::new(c.clone(), c, vec![0, 2, 1]).unwrap();
        let m = induced_pullback_matrix(&flip, 1, Ring::Integer);
        assert_eq!(m, RatMatrix::from_i64(1, 1, &[-1]));
    }
}
