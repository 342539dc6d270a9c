use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use qschur::indexsets::{enumerate, SetTag};
use qschur::oracle::{convolution_table, FlagKind, FlagVariety};
use qschur::{Algebra, AlgebraContext, AlgebraElement};

fn compare(kind: FlagKind, ctx: AlgebraContext, n: usize, d: usize, q: u32) {
    let var = FlagVariety::enumerate(q, kind, n, d).unwrap();
    let table = convolution_table(&var, true).unwrap();
    let alg = Algebra::new(ctx);
    let labels = enumerate(ctx.tag()).unwrap();
    let mut checked = 0;
    for a in &labels {
        for b in &labels {
            if a.co() != b.ro() {
                continue;
            }
            let prod = alg
                .mul(&AlgebraElement::e_basis(ctx, a).unwrap(), &AlgebraElement::e_basis(ctx, b).unwrap())
                .unwrap();
            let sym: BTreeMap<_, _> = prod.e_coefficients();
            for c in &labels {
                if c.ro() != a.ro() || c.co() != b.co() {
                    continue;
                }
                let want = sym
                    .get(c)
                    .map(|p| p.eval_q(q as u64).unwrap())
                    .unwrap_or_else(BigRational::zero);
                let got = table.get(&(a.clone(), b.clone(), c.clone())).copied().unwrap_or(0);
                assert_eq!(want, BigRational::from_integer(BigInt::from(got)), "{a} * {b} at {c}, q = {q}");
                checked += 1;
            }
        }
    }
    assert!(checked > 0);
}

#[test]
fn type_b_structure_constants_match_point_counts() {
    for q in [3, 5] {
        compare(FlagKind::X, AlgebraContext::schur_j(1, 1), 1, 1, q);
        compare(FlagKind::X, AlgebraContext::schur_j(1, 2), 1, 2, q);
    }
    compare(FlagKind::X, AlgebraContext::schur_j(2, 1), 2, 1, 3);
}

#[test]
fn iota_structure_constants_match_point_counts() {
    for q in [3, 5] {
        compare(FlagKind::IX, AlgebraContext::schur_i(1, 2), 1, 2, q);
    }
}

#[test]
fn no_orbits_outside_label_set() {
    let var = FlagVariety::enumerate(3, FlagKind::X, 1, 2).unwrap();
    let table = convolution_table(&var, false).unwrap();
    let xi = enumerate(SetTag::XiD { n: 1, d: 2 }).unwrap();
    for (a, b, c) in table.keys() {
        assert!(xi.contains(a) && xi.contains(b) && xi.contains(c));
    }
}
