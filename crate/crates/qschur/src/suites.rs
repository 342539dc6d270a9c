//! Named verification suites: each gathers checks from the other modules
//! into a serializable pass/fail report.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::rngs::StdRng;
use rand::SeedableRng;
use serde::Serialize;
use thiserror::Error;

use crate::indexsets::{binomial, d_lower, enumerate, enumerate_words, IndexError, SetTag, ThetaMatrix};
use crate::laurent::{qfactorial_balanced, LaurentPoly};
use crate::oracle::{
    convolution_table, hecke_table, schur_action_table, type_c_relabel_check, FlagKind, FlagVariety,
    InnerProduct, OracleError,
};
use crate::relations::{self, RelationReport};
use crate::schur::{Algebra, AlgebraContext, AlgebraElement, AlgebraError};
use crate::stable::{self, ShiftKind, StableError};
use crate::tensor::{self, hecke_act, Flavor, TensorAction, TensorElement, TensorError};

#[derive(Debug, Error)]
pub enum SuiteError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Stable(#[from] StableError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Tensor(#[from] TensorError),
    #[error(transparent)]
    Index(#[from] IndexError),
    #[error("parameters out of range: {0}")]
    Params(String),
}

/// One named check: how many cases were compared and the first few failures.
#[derive(Clone, Debug, Default, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub checked: usize,
    pub failures: Vec<String>,
    pub pass: bool,
}

impl CheckReport {
    pub fn new(name: impl Into<String>) -> Self {
        CheckReport { name: name.into(), pass: true, ..Default::default() }
    }

    pub fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.pass = false;
            if self.failures.len() < 5 {
                self.failures.push(what());
            }
        }
    }

    /// A check that must have compared something.
    fn nonvacuous(mut self) -> Self {
        if self.checked == 0 {
            self.pass = false;
            self.failures.push("nothing was checked".into());
        }
        self
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub params: BTreeMap<String, String>,
    pub notes: Vec<String>,
    pub checks: Vec<CheckReport>,
    pub pass: bool,
}

impl SuiteReport {
    fn new(suite: &str, params: &[(&str, String)]) -> Self {
        SuiteReport {
            suite: suite.to_string(),
            params: params.iter().map(|(k, v)| (k.to_string(), v.clone())).collect(),
            notes: Vec::new(),
            checks: Vec::new(),
            pass: true,
        }
    }

    fn push(&mut self, c: CheckReport) {
        self.pass &= c.pass;
        self.checks.push(c);
    }

    fn push_relations(&mut self, r: RelationReport) {
        if let Some(note) = &r.note {
            self.notes.push(format!("{}: {note}", r.suite));
        }
        if r.outcomes.is_empty() {
            self.push(CheckReport::new(format!("{} ({})", r.suite, r.context)).nonvacuous());
        }
        for o in r.outcomes {
            self.push(CheckReport {
                name: format!("{} ({}): {}", r.suite, r.context, o.name),
                checked: o.weights_checked,
                failures: o.failures,
                pass: o.pass,
            });
        }
    }

    /// The checks that failed.
    pub fn failed(&self) -> Vec<&CheckReport> {
        self.checks.iter().filter(|c| !c.pass).collect()
    }
}

fn p(x: impl ToString) -> String {
    x.to_string()
}

/// Sizes of the four label sets against their closed counts.
pub fn counting(ns: &[usize], ds: &[usize]) -> Result<SuiteReport, SuiteError> {
    let mut rep = SuiteReport::new("counting", &[("n", format!("{ns:?}")), ("d", format!("{ds:?}"))]);
    for &n in ns {
        for &d in ds {
            let (nn, dd) = (n as u64, d as u64);
            let cases = [
                ("Xi", enumerate(SetTag::XiD { n, d })?.len(), binomial(2 * nn * nn + 2 * nn + dd, dd)),
                ("iXi", enumerate(SetTag::IXiD { n, d })?.len(), binomial(2 * nn * nn + dd - 1, dd)),
                ("Pi", enumerate_words(n, d, false).len(), (2 * nn + 1).pow(d as u32)),
                ("iPi", enumerate_words(n, d, true).len(), (2 * nn).pow(d as u32)),
            ];
            for (name, got, want) in cases {
                let got = got as u64;
                let mut c = CheckReport::new(format!("|{name}| at n={n}, d={d}"));
                c.record(got == want, || format!("{got} vs {want}"));
                rep.push(c);
            }
        }
    }
    Ok(rep)
}

/// Every presentation check: the finite Schur algebras at `(n, d)`, the
/// stabilized algebras on the weight window, divided powers, and the
/// `t`-Serre expansions.
pub fn relations(n: usize, d: usize, window: (i64, i64)) -> Result<SuiteReport, SuiteError> {
    let mut rep = SuiteReport::new(
        "relations",
        &[("n", p(n)), ("d", p(d)), ("window", format!("[{}, {}]", window.0, window.1))],
    );
    rep.push_relations(relations::finite_case_one(n, d)?);
    rep.push_relations(relations::finite_expected(n, d)?);
    rep.push_relations(relations::doublestar_suite(n, window)?);
    let centers = [-1, 1, 3];
    let ws = relations::window_weights(n, window, &centers);
    rep.push_relations(relations::powergen_suite(AlgebraContext::kj(n), &ws, 3)?);
    if n >= 2 {
        rep.push_relations(relations::finite_case_two(n, d)?);
        rep.push_relations(relations::i_doublestar_suite(n, window)?);
    } else {
        rep.notes.push("iota presentation needs n >= 2; skipped".into());
    }
    if n == 2 {
        rep.push(stable::t_serre_displays(window)?.nonvacuous());
    }
    Ok(rep)
}

fn int(k: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(k))
}

/// Every structure constant `g_{A,B,C}` of the e-basis against convolution
/// counts over `F_q`. With `generators_only`, only products whose left
/// factor is diagonal or of generator type are compared.
pub fn oracle_structure_constants(ctx: AlgebraContext, q: u32, generators_only: bool) -> Result<CheckReport, SuiteError> {
    let d = ctx.d.ok_or(AlgebraError::NeedsFinite(ctx))?;
    let kind = if ctx.family.is_iota() { FlagKind::IX } else { FlagKind::X };
    let var = FlagVariety::enumerate(q, kind, ctx.n, d)?;
    let table = convolution_table(&var, true)?;
    let alg = Algebra::new(ctx);
    let labels = enumerate(ctx.tag())?;
    let scope = if generators_only { "generator products" } else { "all products" };
    let mut rep = CheckReport::new(format!("structure constants of {ctx}, {scope}, q = {q}"));
    for a in &labels {
        if generators_only && matches!(crate::schur::shape_of(a), crate::schur::Shape::Other) {
            continue;
        }
        for b in labels.iter().filter(|b| a.co() == b.ro()) {
            let prod = alg.mul(&AlgebraElement::e_basis(ctx, a)?, &AlgebraElement::e_basis(ctx, b)?)?;
            let sym = prod.e_coefficients();
            for c in labels.iter().filter(|c| c.ro() == a.ro() && c.co() == b.co()) {
                let want = match sym.get(c) {
                    Some(p) => p.eval_q(q as u64).map_err(|e| SuiteError::Params(e.to_string()))?,
                    None => BigRational::zero(),
                };
                let got = table.get(&(a.clone(), b.clone(), c.clone())).copied().unwrap_or(0);
                rep.record(want == int(got), || format!("{a} * {b} at {c}: {want} vs {got}"));
            }
        }
    }
    // no orbit outside the label set
    for (a, b, c) in table.keys() {
        rep.record(labels.contains(a) && labels.contains(b) && labels.contains(c), || {
            format!("orbit triple {a} {b} {c} outside the labels")
        });
    }
    Ok(rep.nonvacuous())
}

fn all_words(letters: usize, d: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..d {
        out = out.into_iter().flat_map(|w| (1..=letters).map(move |r| [w.clone(), vec![r]].concat())).collect();
    }
    out
}

/// Right Hecke action on words of length `d` over `letters` letters against
/// counts on `X x Y`.
pub fn oracle_hecke(x: FlagKind, y: FlagKind, n: usize, d: usize, letters: usize, q: u32) -> Result<CheckReport, SuiteError> {
    let xv = FlagVariety::enumerate(q, x, n, d)?;
    let yv = FlagVariety::enumerate(q, y, n, d)?;
    let words = all_words(letters, d);
    let mut rep = CheckReport::new(format!("Hecke action on {x:?} x {y:?}, n = {n}, d = {d}, q = {q}"));
    for j in 1..=d {
        let table = hecke_table(&xv, &yv, j);
        for w in &words {
            let img = hecke_act(&TensorElement::basis(letters, Flavor::Standard, w)?, j)?;
            for w2 in &words {
                let want = img.coeff(w2).eval_q(q as u64).map_err(|e| SuiteError::Params(e.to_string()))?;
                let got = table.get(&(w.clone(), w2.clone())).copied().unwrap_or(0);
                rep.record(want == int(got), || format!("T_{j}: {w:?} -> {w2:?}: {want} vs {got}"));
            }
        }
    }
    Ok(rep.nonvacuous())
}

/// Left Schur action on the tensor module against counts on `X x Y`.
pub fn oracle_schur_action(ctx: AlgebraContext, q: u32) -> Result<CheckReport, SuiteError> {
    let d = ctx.d.ok_or(AlgebraError::NeedsFinite(ctx))?;
    let n = ctx.n;
    let iota = ctx.family.is_iota();
    let kind = if iota { FlagKind::IX } else { FlagKind::X };
    let xv = FlagVariety::enumerate(q, kind, n, d)?;
    let yv = FlagVariety::enumerate(q, FlagKind::Y, n, d)?;
    let table = schur_action_table(&xv, &yv);
    let act = TensorAction::new(n, d);
    let letters = 2 * n + 1;
    let ws = enumerate_words(n, d, iota);
    let mut rep = CheckReport::new(format!("action of {ctx} on the tensor module, q = {q}"));
    for a in enumerate(ctx.tag())? {
        for w in &ws {
            let x = TensorElement::basis(letters, Flavor::Standard, w)?;
            let img = act.act_std(&a, &x)?.scale(&LaurentPoly::v_pow(d_lower(&a) as i32));
            for w2 in &ws {
                let want = img.coeff(w2).eval_q(q as u64).map_err(|e| SuiteError::Params(e.to_string()))?;
                let got = table.get(&(a.clone(), w.clone(), w2.clone())).copied().unwrap_or(0);
                rep.record(want == int(got), || format!("{a} on {w:?} -> {w2:?}: {want} vs {got}"));
            }
        }
    }
    Ok(rep.nonvacuous())
}

/// Symbolic formulas against finite-field counts at each `q`: structure
/// constants of both finite algebras, the Hecke actions of types B and C,
/// and the Schur actions.
pub fn oracle(n: usize, d: usize, qs: &[u32]) -> Result<SuiteReport, SuiteError> {
    let mut rep = SuiteReport::new("oracle", &[("n", p(n)), ("d", p(d)), ("q", format!("{qs:?}"))]);
    for &q in qs {
        rep.push(oracle_structure_constants(AlgebraContext::schur_j(n, d), q, false)?);
        rep.push(oracle_structure_constants(AlgebraContext::schur_i(n, d), q, false)?);
        rep.push(oracle_hecke(FlagKind::X, FlagKind::Y, n, d, 2 * n + 1, q)?);
        rep.push(oracle_hecke(FlagKind::XCPrime, FlagKind::YC, n, d, 2 * n + 1, q)?);
        rep.push(oracle_hecke(FlagKind::XC, FlagKind::YC, n, d, 2 * n, q)?);
        rep.push(oracle_schur_action(AlgebraContext::schur_j(n, d), q)?);
        rep.push(oracle_schur_action(AlgebraContext::schur_i(n, d), q)?);
    }
    Ok(rep)
}

fn nonnegative(p: &LaurentPoly) -> bool {
    p.terms().iter().all(|&(_, c)| c >= 0)
}

fn canonical_check(alg: &Algebra, labels: &[ThetaMatrix], positive: bool) -> Result<(CheckReport, usize), SuiteError> {
    let sign = if positive { "N" } else { "Z" };
    let mut rep = CheckReport::new(format!("{{A}} in {} is bar-invariant, [A] + v^-1 {sign}[v^-1] lower terms", alg.context()));
    let mut negative = 0;
    for a in labels {
        let c = alg.canonical(a)?;
        let bar = alg.bar(&c)?;
        let lead = c.coeff(a) == LaurentPoly::one();
        let lower = c.terms().iter().filter(|(b, _)| *b != a).all(|(_, p)| p.in_negative_part());
        negative += c.terms().iter().filter(|(b, p)| *b != a && !nonnegative(p)).count();
        let pos = !positive || c.terms().values().all(nonnegative);
        rep.record(bar == c && lead && lower && pos, || format!("{a}: {c}"));
    }
    Ok((rep.nonvacuous(), negative))
}

/// Canonical bases of the finite algebras at `(n, d)` and of the stabilized
/// algebras on the window of labels whose blocks are weights of degree `d`
/// and whose upper mass is at most `mass`.
pub fn canonical(n: usize, d: usize, mass: i64) -> Result<SuiteReport, SuiteError> {
    let mut rep = SuiteReport::new("canonical", &[("n", p(n)), ("d", p(d)), ("mass", p(mass))]);
    for ctx in [AlgebraContext::schur_j(n, d), AlgebraContext::schur_i(n, d)] {
        let labels = enumerate(ctx.tag())?;
        rep.push(canonical_check(&Algebra::new(ctx), &labels, true)?.0);
    }
    let kj = stable::compat_window(n, d, mass, false)?;
    let (c, neg) = canonical_check(&Algebra::new(AlgebraContext::kj(n)), &kj, false)?;
    rep.push(c);
    rep.notes.push(format!("K^j window: {neg} lower coefficients with a negative term"));
    let ki = stable::compat_window(n, d, mass, true)?;
    let (c, neg) = canonical_check(&Algebra::new(AlgebraContext::ki(n)), &ki, false)?;
    rep.push(c);
    rep.notes.push(format!("K^i window: {neg} lower coefficients with a negative term"));
    Ok(rep)
}

/// Canonical bases and bar maps through `phi_d`, and the two routes to `K^i`.
pub fn compat(n: usize, d: usize, mass: i64) -> Result<SuiteReport, SuiteError> {
    let mut rep = SuiteReport::new("compat", &[("n", p(n)), ("d", p(d)), ("mass", p(mass))]);
    let r = stable::cb_compat_check(n, d, mass)?;
    rep.notes.push(format!(
        "{} K^j labels ({} inside the finite set), {} K^i labels",
        r.labels, r.finite_labels, r.iota_labels
    ));
    for c in r.checks {
        rep.push(c.nonvacuous());
    }
    Ok(rep)
}

fn in_one_plus_negative(p: &LaurentPoly) -> bool {
    (p - &LaurentPoly::one()).in_negative_part()
}

/// The bilinear form from fiber counts: standard norms in `1 + v^-1 Z[[v^-1]]`,
/// orthogonality of distinct standard elements, adjunction of `[A]` and
/// `[tA]`, and almost orthonormality of the canonical basis.
pub fn inner_product(n: usize, d: usize) -> Result<SuiteReport, SuiteError> {
    let mut rep = SuiteReport::new("inner-product", &[("n", p(n)), ("d", p(d))]);
    let ip = InnerProduct::compute(n, d, false)?;
    rep.notes.push(format!("f_A interpolated from q in {:?}", ip.primes));
    let ctx = AlgebraContext::schur_j(n, d);
    let alg = Algebra::new(ctx);
    let labels: Vec<ThetaMatrix> = ip.labels().cloned().collect();
    let std: Vec<AlgebraElement> = labels.iter().map(|a| alg.std(a)).collect::<Result<_, _>>()?;

    let mut norms = CheckReport::new("([A], [A]) in 1 + v^-1 Z[[v^-1]]");
    let mut orth = CheckReport::new("([A], [B]) = 0 for A != B");
    for (i, x) in std.iter().enumerate() {
        for (j, y) in std.iter().enumerate() {
            let pr = ip.pairing(x, y);
            if i == j {
                norms.record(in_one_plus_negative(&pr), || format!("{}: {pr}", labels[i]));
            } else {
                orth.record(pr.is_zero(), || format!("{} {}: {pr}", labels[i], labels[j]));
            }
        }
    }
    rep.push(norms.nonvacuous());
    rep.push(orth.nonvacuous());

    let mut adj = CheckReport::new("([A] e_B, e_C) = v^{d_A - d_tA} (e_B, [tA] e_C)");
    let e: Vec<AlgebraElement> = labels.iter().map(|a| AlgebraElement::e_basis(ctx, a)).collect::<Result<_, _>>()?;
    for a in &labels {
        let shift = (d_lower(a) - d_lower(&a.transpose())) as i32;
        let left: Vec<AlgebraElement> = e.iter().map(|x| alg.mul_std(a, x)).collect::<Result<_, _>>()?;
        let right: Vec<AlgebraElement> = e.iter().map(|x| alg.mul_std(&a.transpose(), x)).collect::<Result<_, _>>()?;
        for (i, l) in left.iter().enumerate() {
            for (j, r) in right.iter().enumerate() {
                let lhs = ip.pairing(l, &e[j]);
                let rhs = ip.pairing(&e[i], r).shift(shift);
                adj.record(lhs == rhs, || format!("{a} {} {}", labels[i], labels[j]));
            }
        }
    }
    rep.push(adj.nonvacuous());

    let mut cbo = CheckReport::new("({A}, {B}) in delta_AB + v^-1 Z[[v^-1]]");
    let cb: Vec<AlgebraElement> = labels.iter().map(|a| alg.canonical(a)).collect::<Result<_, _>>()?;
    for (i, x) in cb.iter().enumerate() {
        for (j, y) in cb.iter().enumerate() {
            let pr = ip.pairing(x, y);
            let ok = if i == j { in_one_plus_negative(&pr) } else { pr.in_negative_part() };
            cbo.record(ok, || format!("{} {}: {pr}", labels[i], labels[j]));
        }
    }
    rep.push(cbo.nonvacuous());
    Ok(rep)
}

/// Commuting actions and double centralizer dimensions at rational `v`.
/// The commutant of the Schur generators equals the Hecke image only when
/// `n >= d`; below that it is reported, not required.
pub fn duality(n: usize, d: usize, points: &[BigRational]) -> Result<SuiteReport, SuiteError> {
    let mut rep = SuiteReport::new("duality", &[("n", p(n)), ("d", p(d))]);
    for iota in [false, true] {
        let r = tensor::double_centralizer(n, d, iota, points)?;
        let side = if iota { "iota" } else { "j" };
        let mut c = CheckReport::new(format!("{side}: Schur and Hecke actions commute"));
        c.record(r.commute, || "some generator pair does not commute".into());
        rep.push(c);
        let mut img = CheckReport::new(format!("{side}: dim image of Schur algebra = #labels = dim Hecke commutant"));
        let mut mutual = CheckReport::new(format!("{side}: commutant of Schur generators = Hecke image"));
        for s in &r.samples {
            img.record(s.schur_image_dim == r.label_count && s.hecke_commutant_dim == r.label_count, || {
                format!("v = {}: {} / {} vs {}", s.v, s.schur_image_dim, s.hecke_commutant_dim, r.label_count)
            });
            let eq = s.schur_commutant_dim == s.hecke_image_dim;
            if n >= d {
                mutual.record(eq, || format!("v = {}: {} vs {}", s.v, s.schur_commutant_dim, s.hecke_image_dim));
            } else {
                rep.notes.push(format!(
                    "{side}, v = {}: Schur commutant {} vs Hecke image {} (n < d)",
                    s.v, s.schur_commutant_dim, s.hecke_image_dim
                ));
            }
        }
        rep.push(img.nonvacuous());
        if n >= d {
            rep.push(mutual.nonvacuous());
        }
    }
    Ok(rep)
}

/// Two generic rational points for the duality dimensions.
pub fn default_points() -> Vec<BigRational> {
    vec![
        BigRational::new(BigInt::from(7), BigInt::from(5)),
        BigRational::new(BigInt::from(11), BigInt::from(3)),
    ]
}

/// Weights `(a, c, a)` of `K^j` at `n = 1` with `a` in `window` and odd `c`
/// in `centers`.
pub fn n1_weights(window: (i64, i64), centers: &[i64]) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    for a in window.0..=window.1 {
        for &c in centers {
            out.push(vec![a, c, a]);
        }
    }
    out
}

/// Generator pairs at `n = 1` under both shifts, and the worked product.
pub fn stabilization(window: (i64, i64), rmax: i64) -> Result<SuiteReport, SuiteError> {
    let mut rep = SuiteReport::new(
        "stabilization",
        &[("n", p(1)), ("window", format!("[{}, {}]", window.0, window.1)), ("rmax", p(rmax))],
    );
    for (kind, centers) in [(ShiftKind::Full, vec![-3, -1, 1, 3]), (ShiftKind::OffCenter, vec![1, 3])] {
        let ws = n1_weights(window, &centers);
        let r = stable::stabilize_generator_pairs(1, kind, &ws, rmax)?;
        rep.notes.push(format!(
            "{kind:?}: {} pairs, {} constants, max w-degree {}",
            r.pairs, r.constants, r.max_w_degree
        ));
        rep.push(CheckReport {
            name: format!("{kind:?}: generator pairs fit stably and match the limit at w = 1"),
            checked: r.pairs,
            failures: r.failures,
            pass: r.pass,
        }
        .nonvacuous());
    }
    let mut c = CheckReport::new("worked product fits and matches the limit");
    for (a, b) in [(-2, 1), (0, 2), (3, 1)] {
        let (left, right) = worked_factors(a, b);
        match stable::stabilization_fit(&[left, right], ShiftKind::Full, 0) {
            Ok(f) => c.record(f.matches_limit, || format!("a={a}, b={b}: limit mismatch")),
            Err(e) => c.record(false, || format!("a={a}, b={b}: {e}")),
        }
    }
    rep.push(c);
    Ok(rep)
}

fn worked_factors(a: i64, b: i64) -> (ThetaMatrix, ThetaMatrix) {
    let m = |r: [[i64; 3]; 3]| ThetaMatrix::from_rows(1, &r.iter().map(|x| x.to_vec()).collect::<Vec<_>>()).expect("3x3");
    (
        m([[a + b - 1, 0, 1], [0, 1, 0], [1, 0, a + b - 1]]),
        m([[a, 0, b], [0, 1, 0], [b, 0, a]]),
    )
}

/// The worked `K^j` product at `n = 1` against its four-term expansion.
pub fn worked_product(pairs: &[(i64, i64)]) -> Result<SuiteReport, SuiteError> {
    let mut rep = SuiteReport::new("worked-product", &[("pairs", format!("{pairs:?}"))]);
    for &(a, b) in pairs {
        let (got, want) = stable::worked_product(a, b)?;
        let mut c = CheckReport::new(format!("a = {a}, b = {b}"));
        c.record(got == want, || format!("{got} vs {want}"));
        rep.push(c);
    }
    Ok(rep)
}

/// `t` on random labels by the closed formula, by composing generators and
/// by multiplying with `t [D]`; leading coefficients of `t^k`.
pub fn t_calculus(ns: &[usize], samples: usize, seed: u64) -> Result<SuiteReport, SuiteError> {
    let mut rep = SuiteReport::new("t-calculus", &[("n", format!("{ns:?}")), ("samples", p(samples)), ("seed", p(seed))]);
    let mut rng = StdRng::seed_from_u64(seed);
    for &n in ns {
        let alg = Algebra::new(AlgebraContext::ki(n));
        let mut closed = CheckReport::new(format!("n = {n}: closed t-product = composed generators"));
        let mut direct = CheckReport::new(format!("n = {n}: closed t-product = t [D] * [A]"));
        for _ in 0..samples {
            let a = stable::random_iota_tilde(n, 2, (-2, 3), &mut rng);
            let x = alg.std(&a)?;
            let c = stable::t_mul(&x)?;
            let comp = stable::t_composed(&x)?;
            closed.record(c == comp, || format!("{a}: {c} vs {comp}"));
            let t = alg.t_weight(&a.ro())?;
            let m = alg.mul(&t, &x)?;
            direct.record(c == m, || format!("{a}: {c} vs {m}"));
        }
        rep.push(closed.nonvacuous());
        rep.push(direct.nonvacuous());
        let mut lead = CheckReport::new(format!("n = {n}: t^k [D] leads with [[k]]! for k <= 3"));
        for k in 1..=3u32 {
            for top in -1..=3i64 {
                let mut w = vec![top; n];
                w.push(1);
                w.extend(vec![top; n]);
                let x = stable::t_power(n, k, &w)?;
                let l = stable::t_power_leading(n, k, &w)?;
                if !alg.context().contains(&l) {
                    continue;
                }
                let got = x.coeff(&l);
                lead.record(got == qfactorial_balanced(k), || format!("k = {k}, lambda = {w:?}: {got}"));
            }
        }
        rep.push(lead.nonvacuous());
    }
    Ok(rep)
}

/// Symplectic against orthogonal constants under the center relabelling.
pub fn typec(n: usize, d: usize, q: u32) -> Result<SuiteReport, SuiteError> {
    let mut rep = SuiteReport::new("typec", &[("n", p(n)), ("d", p(d)), ("q", p(q))]);
    let r = type_c_relabel_check(n, d, q)?;
    let mut c = CheckReport::new("constants agree after A -> A - E_{n+1,n+1}");
    c.checked = r.constants_compared;
    c.failures = r.mismatches.iter().take(5).cloned().collect();
    c.pass = r.mismatches.is_empty() && r.constants_compared > 0;
    rep.push(c);
    let mut o = CheckReport::new("orbit counts");
    o.record(r.type_b_orbits == r.type_c_orbits && r.type_c_orbits as u64 == r.expected_type_c_orbits, || {
        format!("{} / {} vs {}", r.type_b_orbits, r.type_c_orbits, r.expected_type_c_orbits)
    });
    rep.push(o);
    Ok(rep)
}
