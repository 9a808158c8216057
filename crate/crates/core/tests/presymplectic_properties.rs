use num_traits::Zero;
use pag_core::presymplectic::{MixedGroup, PresymplecticGroup};
use pag_core::scalar::rat;
use pag_core::RatMatrix;
use proptest::prelude::*;

/// Diagonal group: per coordinate `0` absent, `1` divisible, `2..` lattice
/// with the listed scale; pairing from the upper triangle.
fn group(kinds: &[(u8, (i64, i64))], upper: &[(i64, i64)]) -> PresymplecticGroup {
    let n = kinds.len();
    let mut s = RatMatrix::zeros(n, n);
    let mut it = upper.iter();
    for i in 0..n {
        for j in i + 1..n {
            let &(p, q) = it.next().unwrap();
            s[(i, j)] = rat(p, q);
            s[(j, i)] = rat(-p, q);
        }
    }
    let e = |i: usize, c: pag_core::Rational| {
        (0..n)
            .map(|j| if i == j { c.clone() } else { rat(0, 1) })
            .collect::<Vec<_>>()
    };
    let mut free = Vec::new();
    let mut div = Vec::new();
    for (i, &(k, (p, q))) in kinds.iter().enumerate() {
        match k {
            0 => {}
            1 => div.push(e(i, rat(1, 1))),
            _ => free.push(e(i, rat(p, q))),
        }
    }
    let g = MixedGroup::new(
        n,
        &RatMatrix::from_columns(n, &free).unwrap(),
        &RatMatrix::from_columns(n, &div).unwrap(),
    )
    .unwrap();
    PresymplecticGroup::new(g, s).unwrap()
}

type Spec = (Vec<(u8, (i64, i64))>, Vec<(i64, i64)>);

fn spec() -> impl Strategy<Value = Spec> {
    (1usize..=4).prop_flat_map(|n| {
        (
            prop::collection::vec((0u8..4, (1i64..=3, 1i64..=4)), n),
            prop::collection::vec((-4i64..=4, 1i64..=4), n * (n - 1) / 2),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn radical_center_group_nest((kinds, upper) in spec()) {
        let b = group(&kinds, &upper);
        let (rad, center) = (b.radical(), b.center());
        prop_assert!(center.contains_group(&rad));
        prop_assert!(b.group().contains_group(&center));
        let gens = b.group().generators().columns();
        for r in rad.generators().columns() {
            prop_assert!(gens.iter().all(|g| b.pairing(&r, g).is_zero()));
        }
        let lattice = b.group().free_gens().columns();
        let divisible = b.group().divisible_gens().columns();
        for c in center.generators().columns() {
            prop_assert!(lattice.iter().all(|g| b.pairing(&c, g).is_integer()));
            prop_assert!(divisible.iter().all(|g| b.pairing(&c, g).is_zero()));
        }
    }

    #[test]
    fn quotient_by_radical_is_nondegenerate((kinds, upper) in spec()) {
        let b = group(&kinds, &upper);
        let (q, proj) = b.quotient(&b.radical()).unwrap();
        prop_assert!(q.radical().is_trivial());
        prop_assert!(proj.kernel() == b.radical());
    }
}
