use num_bigint::BigInt;
use num_rational::BigRational;
use qschur::indexsets::{d_lower, enumerate, enumerate_words};
use qschur::oracle::{hecke_table, schur_action_table, FlagKind, FlagVariety};
use qschur::tensor::{hecke_act, Flavor, TensorAction, TensorElement};
use qschur::{AlgebraContext, LaurentPoly};

fn int(k: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(k))
}

fn words(letters: usize, d: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..d {
        out = out
            .into_iter()
            .flat_map(|w| (1..=letters).map(move |r| [w.clone(), vec![r]].concat()))
            .collect();
    }
    out
}

fn check_hecke(x: FlagKind, y: FlagKind, n: usize, d: usize, letters: usize, q: u32) {
    let xv = FlagVariety::enumerate(q, x, n, d).unwrap();
    let yv = FlagVariety::enumerate(q, y, n, d).unwrap();
    for j in 1..=d {
        let table = hecke_table(&xv, &yv, j);
        for w in words(letters, d) {
            let img = hecke_act(&TensorElement::basis(letters, Flavor::Standard, &w).unwrap(), j).unwrap();
            for w2 in words(letters, d) {
                let want = img.coeff(&w2).eval_q(q as u64).unwrap();
                let got = table.get(&(w.clone(), w2.clone())).copied().unwrap_or(0);
                assert_eq!(want, int(got), "{x:?} q={q} T_{j}: {w:?} -> {w2:?}");
            }
        }
    }
}

#[test]
fn type_b_hecke_action_matches_counts() {
    for q in [3, 5] {
        check_hecke(FlagKind::X, FlagKind::Y, 1, 1, 3, q);
        check_hecke(FlagKind::X, FlagKind::Y, 1, 2, 3, q);
    }
}

#[test]
fn type_c_hecke_action_matches_counts() {
    for q in [3, 5] {
        check_hecke(FlagKind::XCPrime, FlagKind::YC, 1, 2, 3, q);
        check_hecke(FlagKind::XC, FlagKind::YC, 1, 2, 2, q);
    }
    check_hecke(FlagKind::XC, FlagKind::YC, 2, 1, 4, 3);
}

#[test]
fn center_letter_gives_q() {
    let xv = FlagVariety::enumerate(3, FlagKind::X, 1, 1).unwrap();
    let yv = FlagVariety::enumerate(3, FlagKind::Y, 1, 1).unwrap();
    let t = hecke_table(&xv, &yv, 1);
    assert_eq!(t.get(&(vec![2], vec![2])), Some(&3));
}

fn check_schur(kind: FlagKind, ctx: AlgebraContext, iota: bool, q: u32) {
    let n = ctx.n;
    let d = ctx.d.unwrap();
    let xv = FlagVariety::enumerate(q, kind, n, d).unwrap();
    let yv = FlagVariety::enumerate(q, FlagKind::Y, n, d).unwrap();
    let table = schur_action_table(&xv, &yv);
    let act = TensorAction::new(n, d);
    let letters = 2 * n + 1;
    let ws = enumerate_words(n, d, iota);
    for a in enumerate(ctx.tag()).unwrap() {
        for w in &ws {
            let x = TensorElement::basis(letters, Flavor::Standard, w).unwrap();
            // e_A = v^{d_A} [A]
            let img = act.act_std(&a, &x).unwrap().scale(&LaurentPoly::v_pow(d_lower(&a) as i32));
            for w2 in &ws {
                let want = img.coeff(w2).eval_q(q as u64).unwrap();
                let got = table.get(&(a.clone(), w.clone(), w2.clone())).copied().unwrap_or(0);
                assert_eq!(want, int(got), "q={q}: {a} on {w:?} -> {w2:?}");
            }
        }
    }
}

#[test]
fn schur_action_matches_counts() {
    for q in [3, 5] {
        check_schur(FlagKind::X, AlgebraContext::schur_j(1, 1), false, q);
        check_schur(FlagKind::X, AlgebraContext::schur_j(1, 2), false, q);
        check_schur(FlagKind::IX, AlgebraContext::schur_i(1, 2), true, q);
    }
}
