//! Brute-force finite-field geometry: isotropic flags over a prime field,
//! relative-position invariants, convolution counts and point-count
//! interpolation. Everything here is independent of the symbolic formulas.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::indexsets::{binomial, d_lower, enumerate, SetTag, ThetaMatrix, Word};
use crate::laurent::LaurentPoly;
use crate::par;
use crate::schur::AlgebraElement;

/// Refuse enumerations that would exceed this many flags.
pub const SCALE_GUARD: usize = 10_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("q = {0} is not an odd prime")]
    BadField(u32),
    #[error("enumeration of {0} objects exceeds the scale guard")]
    TooLarge(usize),
    #[error("no pair of flags realizes {0}")]
    EmptyOrbit(String),
    #[error("interpolated values are inconsistent: {0}")]
    InterpolationInconsistent(String),
    #[error("representatives disagree for {0}")]
    NotWellDefined(String),
    #[error("incompatible flag kinds: {0}")]
    Kind(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FormKind {
    /// `Q(x, y) = sum_i x_i y_{D+1-i}`.
    SymmetricAntidiagonal,
    /// `Q(x, y) = sum_{i <= D/2} x_i y_{D+1-i} - x_{D+1-i} y_i`.
    SkewStandard,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldConfig {
    pub q: u32,
    pub dim: usize,
    pub form: FormKind,
}

fn is_odd_prime(q: u32) -> bool {
    q >= 3 && q % 2 == 1 && (3..).step_by(2).take_while(|k: &u32| k * k <= q).all(|k| q % k != 0)
}

impl FieldConfig {
    pub fn new(q: u32, dim: usize, form: FormKind) -> Result<Self, OracleError> {
        if !is_odd_prime(q) {
            return Err(OracleError::BadField(q));
        }
        Ok(FieldConfig { q, dim, form })
    }

    #[inline]
    fn add(&self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.q {
            s - self.q
        } else {
            s
        }
    }

    #[inline]
    fn sub(&self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.q - b
        }
    }

    #[inline]
    fn mul(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.q as u64) as u32
    }

    fn inv(&self, a: u32) -> u32 {
        // Fermat
        let mut base = a as u64;
        let mut e = self.q as u64 - 2;
        let m = self.q as u64;
        let mut r = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                r = r * base % m;
            }
            base = base * base % m;
            e >>= 1;
        }
        r as u32
    }

    /// The bilinear form.
    pub fn form(&self, x: &[u32], y: &[u32]) -> u32 {
        let dd = self.dim;
        let mut s = 0u32;
        match self.form {
            FormKind::SymmetricAntidiagonal => {
                for i in 0..dd {
                    s = self.add(s, self.mul(x[i], y[dd - 1 - i]));
                }
            }
            FormKind::SkewStandard => {
                for i in 0..dd / 2 {
                    s = self.add(s, self.mul(x[i], y[dd - 1 - i]));
                    s = self.sub(s, self.mul(x[dd - 1 - i], y[i]));
                }
            }
        }
        s
    }

    /// Row reduce in place; returns the rank and leaves the nonzero rows in
    /// reduced echelon form at the top.
    fn rref_rows(&self, rows: &mut Vec<Vec<u32>>) -> usize {
        let dd = self.dim;
        let mut rank = 0;
        for col in 0..dd {
            let Some(p) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else {
                continue;
            };
            rows.swap(rank, p);
            let iv = self.inv(rows[rank][col]);
            for x in rows[rank].iter_mut() {
                *x = self.mul(*x, iv);
            }
            let pivot = rows[rank].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r != rank && row[col] != 0 {
                    let f = row[col];
                    for c in 0..dd {
                        row[c] = self.sub(row[c], self.mul(f, pivot[c]));
                    }
                }
            }
            rank += 1;
            if rank == rows.len() {
                break;
            }
        }
        rows.truncate(rank);
        rank
    }

    pub fn span(&self, vecs: &[Vec<u32>]) -> Subspace {
        let mut rows: Vec<Vec<u32>> = vecs.to_vec();
        self.rref_rows(&mut rows);
        Subspace { rows }
    }

    pub fn zero_space(&self) -> Subspace {
        Subspace { rows: Vec::new() }
    }

    pub fn whole_space(&self) -> Subspace {
        let rows = (0..self.dim)
            .map(|i| (0..self.dim).map(|j| u32::from(i == j)).collect())
            .collect();
        Subspace { rows }
    }

    pub fn sum(&self, a: &Subspace, b: &Subspace) -> Subspace {
        let mut rows = a.rows.clone();
        rows.extend(b.rows.iter().cloned());
        self.rref_rows(&mut rows);
        Subspace { rows }
    }

    pub fn dim_sum(&self, a: &Subspace, b: &Subspace) -> usize {
        if a.rows.is_empty() {
            return b.dim();
        }
        if b.rows.is_empty() {
            return a.dim();
        }
        let mut rows = a.rows.clone();
        rows.extend(b.rows.iter().cloned());
        self.rref_rows(&mut rows)
    }

    pub fn dim_intersection(&self, a: &Subspace, b: &Subspace) -> usize {
        a.dim() + b.dim() - self.dim_sum(a, b)
    }

    /// `{x : y . x = 0 for all rows y}` for the standard dot product.
    fn annihilator_rows(&self, rows: &[Vec<u32>]) -> Subspace {
        let dd = self.dim;
        let mut r = rows.to_vec();
        self.rref_rows(&mut r);
        let pivots: Vec<usize> = r
            .iter()
            .map(|row| row.iter().position(|&x| x != 0).expect("nonzero row"))
            .collect();
        let mut basis = Vec::new();
        for free in 0..dd {
            if pivots.contains(&free) {
                continue;
            }
            let mut x = vec![0u32; dd];
            x[free] = 1;
            for (k, &p) in pivots.iter().enumerate() {
                x[p] = self.sub(0, r[k][free]);
            }
            basis.push(x);
        }
        self.span(&basis)
    }

    pub fn intersect(&self, a: &Subspace, b: &Subspace) -> Subspace {
        let aa = self.annihilator_rows(&a.rows);
        let bb = self.annihilator_rows(&b.rows);
        let s = self.sum(&aa, &bb);
        self.annihilator_rows(&s.rows)
    }

    /// Orthogonal complement for the configured form.
    pub fn perp(&self, a: &Subspace) -> Subspace {
        let dd = self.dim;
        let rows: Vec<Vec<u32>> = a
            .rows
            .iter()
            .map(|u| {
                (0..dd)
                    .map(|j| {
                        let mut e = vec![0u32; dd];
                        e[j] = 1;
                        self.form(u, &e)
                    })
                    .collect()
            })
            .collect();
        if rows.is_empty() {
            return self.whole_space();
        }
        self.annihilator_rows(&rows)
    }

    pub fn contains(&self, big: &Subspace, small: &Subspace) -> bool {
        self.dim_sum(big, small) == big.dim()
    }

    pub fn is_isotropic(&self, a: &Subspace) -> bool {
        a.rows
            .iter()
            .all(|x| a.rows.iter().all(|y| self.form(x, y) == 0))
    }

    pub fn apply(&self, g: &[Vec<u32>], a: &Subspace) -> Subspace {
        let dd = self.dim;
        let imgs: Vec<Vec<u32>> = a
            .rows
            .iter()
            .map(|x| {
                (0..dd)
                    .map(|i| (0..dd).fold(0u32, |s, j| self.add(s, self.mul(g[i][j], x[j]))))
                    .collect()
            })
            .collect();
        self.span(&imgs)
    }

    /// All `k`-dimensional subspaces of the ambient space, via echelon forms.
    pub fn all_subspaces(&self, k: usize) -> Result<Vec<Subspace>, OracleError> {
        let dd = self.dim;
        let mut out = Vec::new();
        let mut pivots = Vec::new();
        fn choose(start: usize, k: usize, dd: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if cur.len() == k {
                out.push(cur.clone());
                return;
            }
            for p in start..dd {
                cur.push(p);
                choose(p + 1, k, dd, cur, out);
                cur.pop();
            }
        }
        choose(0, k, dd, &mut Vec::new(), &mut pivots);
        for piv in pivots {
            // free slots: row r, column c > piv[r], c not a pivot
            let mut slots = Vec::new();
            for (r, &p) in piv.iter().enumerate() {
                for c in p + 1..dd {
                    if !piv.contains(&c) {
                        slots.push((r, c));
                    }
                }
            }
            let total = (self.q as usize).checked_pow(slots.len() as u32).unwrap_or(usize::MAX);
            if total.saturating_add(out.len()) > SCALE_GUARD {
                return Err(OracleError::TooLarge(total));
            }
            for code in 0..total {
                let mut rows = vec![vec![0u32; dd]; k];
                for (r, &p) in piv.iter().enumerate() {
                    rows[r][p] = 1;
                }
                let mut c = code;
                for &(r, col) in &slots {
                    rows[r][col] = (c % self.q as usize) as u32;
                    c /= self.q as usize;
                }
                out.push(Subspace { rows });
            }
        }
        Ok(out)
    }

    /// Isotropic subspaces grouped by dimension, built by adjoining
    /// orthogonal isotropic lines.
    pub fn isotropic_subspaces(&self) -> Result<Vec<Vec<Subspace>>, OracleError> {
        let lines: Vec<Subspace> = self
            .all_subspaces(1)?
            .into_iter()
            .filter(|l| self.is_isotropic(l))
            .collect();
        let mut by_dim = vec![vec![self.zero_space()], lines.clone()];
        loop {
            let prev = by_dim.last().expect("nonempty");
            if prev.is_empty() {
                by_dim.pop();
                break;
            }
            let mut seen: HashSet<Subspace> = HashSet::new();
            for u in prev {
                for l in &lines {
                    let x = &l.rows[0];
                    if u.rows.iter().all(|y| self.form(x, y) == 0) && !self.contains(u, l) {
                        seen.insert(self.sum(u, l));
                    }
                }
                if seen.len() > SCALE_GUARD {
                    return Err(OracleError::TooLarge(seen.len()));
                }
            }
            let mut next: Vec<Subspace> = seen.into_iter().collect();
            next.sort();
            by_dim.push(next);
        }
        Ok(by_dim)
    }

    /// A random element of the isometry group of the form, as a product of
    /// reflections (symmetric case) or transvections (skew case).
    pub fn random_isometry<R: Rng>(&self, rng: &mut R, factors: usize) -> Vec<Vec<u32>> {
        let dd = self.dim;
        let mut g: Vec<Vec<u32>> = (0..dd)
            .map(|i| (0..dd).map(|j| u32::from(i == j)).collect())
            .collect();
        let mut done = 0;
        while done < factors {
            let u: Vec<u32> = (0..dd).map(|_| rng.gen_range(0..self.q)).collect();
            let quu = self.form(&u, &u);
            // columns of the factor: images of basis vectors
            let mut h = vec![vec![0u32; dd]; dd];
            match self.form {
                FormKind::SymmetricAntidiagonal => {
                    if quu == 0 {
                        continue;
                    }
                    let c = self.mul(2, self.inv(quu));
                    for j in 0..dd {
                        let mut e = vec![0u32; dd];
                        e[j] = 1;
                        let s = self.mul(c, self.form(&e, &u));
                        for i in 0..dd {
                            h[i][j] = self.sub(e[i], self.mul(s, u[i]));
                        }
                    }
                }
                FormKind::SkewStandard => {
                    if u.iter().all(|&x| x == 0) {
                        continue;
                    }
                    let a = rng.gen_range(1..self.q);
                    for j in 0..dd {
                        let mut e = vec![0u32; dd];
                        e[j] = 1;
                        let s = self.mul(a, self.form(&e, &u));
                        for i in 0..dd {
                            h[i][j] = self.add(e[i], self.mul(s, u[i]));
                        }
                    }
                }
            }
            let mut ng = vec![vec![0u32; dd]; dd];
            for i in 0..dd {
                for j in 0..dd {
                    ng[i][j] = (0..dd).fold(0, |s, k| self.add(s, self.mul(h[i][k], g[k][j])));
                }
            }
            g = ng;
            done += 1;
        }
        g
    }
}

/// A subspace stored by its reduced row echelon basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace {
    rows: Vec<Vec<u32>>,
}

impl Subspace {
    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FlagKind {
    /// `N = 2n+1` step flags in `F^{2d+1}` with `V_i = V_{N-i}^perp`.
    X,
    /// Flags in `X` whose `V_n` is maximal isotropic.
    IX,
    /// Complete isotropic flags in `F^{2d+1}`.
    Y,
    /// `N = 2n` step flags in a symplectic `F^{2d}`; `V_n` Lagrangian.
    XC,
    /// `N = 2n+1` step flags in a symplectic `F^{2d}`.
    XCPrime,
    /// Complete isotropic flags in a symplectic `F^{2d}`.
    YC,
}

impl FlagKind {
    fn form(&self) -> FormKind {
        match self {
            FlagKind::X | FlagKind::IX | FlagKind::Y => FormKind::SymmetricAntidiagonal,
            _ => FormKind::SkewStandard,
        }
    }

    fn ambient_dim(&self, d: usize) -> usize {
        match self.form() {
            FormKind::SymmetricAntidiagonal => 2 * d + 1,
            FormKind::SkewStandard => 2 * d,
        }
    }

    fn is_complete(&self) -> bool {
        matches!(self, FlagKind::Y | FlagKind::YC)
    }
}

/// A chain `V_0 = 0 <= V_1 <= ... <= V_M = F^D`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Flag {
    pub spaces: Vec<Subspace>,
}

impl Flag {
    /// Step sizes `dim V_i - dim V_{i-1}`.
    pub fn steps(&self) -> Vec<i64> {
        self.spaces.windows(2).map(|w| (w[1].dim() - w[0].dim()) as i64).collect()
    }
}

/// The full list of flags of one kind.
pub struct FlagVariety {
    pub cfg: FieldConfig,
    pub kind: FlagKind,
    pub n: usize,
    pub d: usize,
    pub flags: Vec<Flag>,
}

impl FlagVariety {
    /// Enumerate every flag of the given kind. `n` is ignored for complete flags.
    pub fn enumerate(q: u32, kind: FlagKind, n: usize, d: usize) -> Result<Self, OracleError> {
        let cfg = FieldConfig::new(q, kind.ambient_dim(d), kind.form())?;
        let iso = cfg.isotropic_subspaces()?;
        let max_iso = iso.len() - 1;
        // number of isotropic steps and the last-step constraint
        let (steps, last_dim): (usize, Option<usize>) = match kind {
            FlagKind::X | FlagKind::XCPrime => (n, None),
            FlagKind::IX | FlagKind::XC => (n, Some(d)),
            FlagKind::Y | FlagKind::YC => (d, Some(d)),
        };
        let mut chains: Vec<Vec<Subspace>> = Vec::new();
        fn grow(
            cfg: &FieldConfig,
            iso: &[Vec<Subspace>],
            steps: usize,
            complete: bool,
            last_dim: Option<usize>,
            cur: &mut Vec<Subspace>,
            out: &mut Vec<Vec<Subspace>>,
        ) -> Result<(), OracleError> {
            if cur.len() == steps {
                if last_dim.map_or(true, |ld| cur.last().map_or(0, |s| s.dim()) == ld) {
                    out.push(cur.clone());
                }
                if out.len() > SCALE_GUARD {
                    return Err(OracleError::TooLarge(out.len()));
                }
                return Ok(());
            }
            let prev_dim = cur.last().map_or(0, |s| s.dim());
            let dims: Vec<usize> = if complete {
                vec![prev_dim + 1]
            } else {
                (prev_dim..iso.len()).collect()
            };
            for k in dims {
                if k >= iso.len() {
                    continue;
                }
                for s in &iso[k] {
                    if let Some(p) = cur.last() {
                        if !cfg.contains(s, p) {
                            continue;
                        }
                    }
                    cur.push(s.clone());
                    grow(cfg, iso, steps, complete, last_dim, cur, out)?;
                    cur.pop();
                }
            }
            Ok(())
        }
        if let Some(ld) = last_dim {
            if ld > max_iso {
                return Ok(FlagVariety { cfg, kind, n, d, flags: Vec::new() });
            }
        }
        grow(&cfg, &iso, steps, kind.is_complete(), last_dim, &mut Vec::new(), &mut chains)?;
        let flags = chains
            .into_iter()
            .map(|ch| {
                let mut spaces = vec![cfg.zero_space()];
                spaces.extend(ch.iter().cloned());
                // middle and mirrored half
                let len = match kind {
                    FlagKind::X | FlagKind::IX | FlagKind::XCPrime => 2 * n + 1,
                    FlagKind::XC => 2 * n,
                    FlagKind::Y | FlagKind::YC => cfg.dim,
                };
                let have = spaces.len() - 1;
                for i in have + 1..=len {
                    spaces.push(cfg.perp(&spaces[len - i]));
                }
                Flag { spaces }
            })
            .collect();
        Ok(FlagVariety { cfg, kind, n, d, flags })
    }

    pub fn len(&self) -> usize {
        self.flags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flags.is_empty()
    }
}

/// `a_ij = |V_i cap W_j| - |V_{i-1} cap W_j| - |V_i cap W_{j-1}| + |V_{i-1} cap W_{j-1}|`.
pub fn relative_position(cfg: &FieldConfig, a: &Flag, b: &Flag) -> Vec<Vec<i64>> {
    let m = a.spaces.len();
    let k = b.spaces.len();
    let mut inter = vec![vec![0i64; k]; m];
    for i in 0..m {
        for j in 0..k {
            inter[i][j] = if i == 0 || j == 0 {
                0
            } else if i == m - 1 {
                b.spaces[j].dim() as i64
            } else if j == k - 1 {
                a.spaces[i].dim() as i64
            } else {
                cfg.dim_intersection(&a.spaces[i], &b.spaces[j]) as i64
            };
        }
    }
    (1..m)
        .map(|i| {
            (1..k)
                .map(|j| inter[i][j] - inter[i - 1][j] - inter[i][j - 1] + inter[i - 1][j - 1])
                .collect()
        })
        .collect()
}

/// Orbit invariant of a pair of partial flags as a theta-symmetric matrix.
pub fn orbit_invariant(cfg: &FieldConfig, n: usize, a: &Flag, b: &Flag) -> ThetaMatrix {
    let rows = relative_position(cfg, a, b);
    if rows.len() == 2 * n + 1 {
        ThetaMatrix::from_rows(n, &rows).expect("relative position is theta-symmetric")
    } else {
        // N = 2n: embed by doubling the middle step so the center entry is 0
        let big = 2 * n;
        let mut full = vec![vec![0i64; big + 1]; big + 1];
        for i in 0..=big {
            for j in 0..=big {
                let si = if i < n { Some(i) } else if i > n { Some(i - 1) } else { None };
                let sj = if j < n { Some(j) } else if j > n { Some(j - 1) } else { None };
                if let (Some(x), Some(y)) = (si, sj) {
                    full[i][j] = rows[x][y];
                }
            }
        }
        ThetaMatrix::from_rows(n, &full).expect("relative position is theta-symmetric")
    }
}

/// Word `r_1 ... r_d` of a pair (partial flag, complete flag).
pub fn word_invariant(cfg: &FieldConfig, a: &Flag, f: &Flag, d: usize) -> Word {
    let b = relative_position(cfg, a, f);
    (0..d)
        .map(|c| (0..b.len()).find(|&i| b[i][c] == 1).expect("column-monomial") + 1)
        .collect()
}

/// `g_{A, A', A''}` for all triples: `(A, A', A'') -> count`.
pub type ConvTable = BTreeMap<(ThetaMatrix, ThetaMatrix, ThetaMatrix), u64>;

fn representatives(
    var: &FlagVariety,
    starts: &[usize],
) -> BTreeMap<ThetaMatrix, (usize, usize)> {
    let cfg = &var.cfg;
    let per_start: Vec<Vec<(ThetaMatrix, (usize, usize))>> = par::map(starts, |&s| {
        let mut seen = BTreeMap::new();
        for (j, g) in var.flags.iter().enumerate() {
            let a = orbit_invariant(cfg, var.n, &var.flags[s], g);
            seen.entry(a).or_insert((s, j));
        }
        seen.into_iter().collect()
    });
    let mut reps = BTreeMap::new();
    for v in per_start {
        for (a, p) in v {
            reps.entry(a).or_insert(p);
        }
    }
    reps
}

/// One flag per step-size vector, and optionally a second one.
fn weight_starts(var: &FlagVariety, skip: usize) -> Vec<usize> {
    let mut seen: HashMap<Vec<i64>, usize> = HashMap::new();
    let mut out = Vec::new();
    for (i, f) in var.flags.iter().enumerate() {
        let c = seen.entry(f.steps()).or_insert(0);
        if *c == skip {
            out.push(i);
        }
        *c += 1;
    }
    out
}

/// Convolution structure constants: fix `(f1, f2)` in each orbit and count
/// intermediate flags. With `check`, a second representative is used for
/// each orbit and the two counts must agree.
pub fn convolution_table(var: &FlagVariety, check: bool) -> Result<ConvTable, OracleError> {
    let cfg = &var.cfg;
    let reps = representatives(var, &weight_starts(var, 0));
    let items: Vec<(ThetaMatrix, (usize, usize))> = reps.into_iter().collect();
    let count_for = |(s, t): (usize, usize)| {
        let mut local: BTreeMap<(ThetaMatrix, ThetaMatrix), u64> = BTreeMap::new();
        for f in &var.flags {
            let a = orbit_invariant(cfg, var.n, &var.flags[s], f);
            let b = orbit_invariant(cfg, var.n, f, &var.flags[t]);
            *local.entry((a, b)).or_insert(0) += 1;
        }
        local
    };
    let tables = par::map(&items, |(_, p)| count_for(*p));
    let mut out = ConvTable::new();
    for ((c, _), t) in items.iter().zip(tables) {
        for ((a, b), k) in t {
            out.insert((a, b, c.clone()), k);
        }
    }
    if check {
        let second = representatives(var, &weight_starts(var, 1));
        let items2: Vec<(ThetaMatrix, (usize, usize))> = second.into_iter().collect();
        let tables2 = par::map(&items2, |(_, p)| count_for(*p));
        for ((c, _), t) in items2.iter().zip(tables2) {
            for ((a, b), k) in t {
                let key = (a, b, c.clone());
                if out.get(&key) != Some(&k) {
                    return Err(OracleError::NotWellDefined(format!("{:?}", key)));
                }
            }
        }
    }
    Ok(out)
}

/// Structure constants `g_{A, A', A''}` for the listed left factors only.
pub fn convolution_table_left(
    var: &FlagVariety,
    left: &[ThetaMatrix],
) -> Result<ConvTable, OracleError> {
    let all = convolution_table(var, false)?;
    Ok(all.into_iter().filter(|((a, _, _), _)| left.contains(a)).collect())
}

/// `e_r T_j = sum_{r''} count(r, r'') e_{r''}`; keys `(r, r'')`.
pub type HeckeTable = BTreeMap<(Word, Word), u64>;

/// Right Hecke action counts for generator `T_j`.
pub fn hecke_table(x: &FlagVariety, y: &FlagVariety, j: usize) -> HeckeTable {
    let cfg = &x.cfg;
    let d = y.d;
    // representatives (V, F) per word
    let mut reps: BTreeMap<Word, (usize, usize)> = BTreeMap::new();
    for (vi, v) in x.flags.iter().enumerate() {
        for (fi, f) in y.flags.iter().enumerate() {
            let w = word_invariant(cfg, v, f, d);
            reps.entry(w).or_insert((vi, fi));
        }
    }
    let items: Vec<(Word, (usize, usize))> = reps.into_iter().collect();
    let parts = par::map(&items, |(w2, (vi, fi))| {
        let f = &y.flags[*fi];
        let mut local = BTreeMap::new();
        for g in &y.flags {
            let same = (1..=d).all(|i| i == j || g.spaces[i] == f.spaces[i]);
            if same && g.spaces[j] != f.spaces[j] {
                let w = word_invariant(cfg, &x.flags[*vi], g, d);
                *local.entry((w, w2.clone())).or_insert(0u64) += 1;
            }
        }
        local
    });
    parts.into_iter().flatten().collect()
}

/// `e_A * e_r = sum count(A, r, r'') e_{r''}`; keys `(A, r, r'')`.
pub type ActionTable = BTreeMap<(ThetaMatrix, Word, Word), u64>;

/// Left convolution action counts of the flag-pair algebra on the tensor module.
pub fn schur_action_table(x: &FlagVariety, y: &FlagVariety) -> ActionTable {
    let cfg = &x.cfg;
    let d = y.d;
    let mut reps: BTreeMap<Word, (usize, usize)> = BTreeMap::new();
    for (vi, v) in x.flags.iter().enumerate() {
        for (fi, f) in y.flags.iter().enumerate() {
            reps.entry(word_invariant(cfg, v, f, d)).or_insert((vi, fi));
        }
    }
    let items: Vec<(Word, (usize, usize))> = reps.into_iter().collect();
    let parts = par::map(&items, |(w2, (vi, fi))| {
        let mut local = BTreeMap::new();
        for v2 in &x.flags {
            let a = orbit_invariant(cfg, x.n, &x.flags[*vi], v2);
            let w = word_invariant(cfg, v2, &y.flags[*fi], d);
            *local.entry((a, w, w2.clone())).or_insert(0u64) += 1;
        }
        local
    });
    parts.into_iter().flatten().collect()
}

/// `#{L : (L', L) in O_{transpose A}}` for a fixed `L'` of weight `co(A)`.
pub fn fiber_count(var: &FlagVariety, a: &ThetaMatrix) -> Result<u64, OracleError> {
    let ta = a.transpose();
    let weight = a.co();
    let start = var
        .flags
        .iter()
        .position(|f| orbit_invariant(&var.cfg, var.n, f, f).diagonal() == weight)
        .ok_or_else(|| OracleError::EmptyOrbit(format!("{a}")))?;
    let lp = &var.flags[start];
    let counts = par::map(&var.flags, |f| u64::from(orbit_invariant(&var.cfg, var.n, lp, f) == ta));
    Ok(counts.into_iter().sum())
}

/// Fit a polynomial in `q` through `(q_k, value_k)` using all but the last
/// point, check the last one, and return it as a polynomial in `v^2`.
pub fn interpolate_in_q(points: &[(u32, u64)]) -> Result<LaurentPoly, OracleError> {
    if points.len() < 2 {
        return Err(OracleError::InterpolationInconsistent("need two points".into()));
    }
    let fit = &points[..points.len() - 1];
    // Newton divided differences over Q
    let xs: Vec<BigRational> = fit.iter().map(|p| BigRational::from_integer(BigInt::from(p.0))).collect();
    let mut coef: Vec<BigRational> = fit.iter().map(|p| BigRational::from_integer(BigInt::from(p.1))).collect();
    let m = xs.len();
    for lvl in 1..m {
        for i in (lvl..m).rev() {
            coef[i] = (&coef[i] - &coef[i - 1]) / (&xs[i] - &xs[i - lvl]);
        }
    }
    // expand to monomial basis
    let mut poly = vec![BigRational::zero(); m];
    for i in (0..m).rev() {
        // poly = poly * (x - xs[i]) + coef[i]
        let mut next = vec![BigRational::zero(); m];
        for k in 0..m {
            if k + 1 < m {
                next[k + 1] = &next[k + 1] + &poly[k];
            }
            next[k] = &next[k] - &(&poly[k] * &xs[i]);
        }
        next[0] = &next[0] + &coef[i];
        poly = next;
    }
    let eval = |x: u32| {
        let xr = BigRational::from_integer(BigInt::from(x));
        let mut s = BigRational::zero();
        let mut p = BigRational::one();
        for c in &poly {
            s += c * &p;
            p *= &xr;
        }
        s
    };
    let (qc, vc) = points[points.len() - 1];
    if eval(qc) != BigRational::from_integer(BigInt::from(vc)) {
        return Err(OracleError::InterpolationInconsistent(format!("check point q={qc}")));
    }
    let mut terms = Vec::new();
    for (k, c) in poly.iter().enumerate() {
        if !c.is_integer() {
            return Err(OracleError::InterpolationInconsistent(format!("coefficient {c}")));
        }
        let ci: i64 = c.to_integer().try_into().map_err(|_| {
            OracleError::InterpolationInconsistent("coefficient overflow".into())
        })?;
        terms.push((2 * k as i32, ci));
    }
    Ok(LaurentPoly::from_terms(terms))
}

/// Orbit sizes: `(A) -> #{(f1, f2) in O_A}`.
pub fn orbit_sizes(var: &FlagVariety) -> BTreeMap<ThetaMatrix, u64> {
    let rows = par::map(&var.flags, |f| {
        let mut local: BTreeMap<ThetaMatrix, u64> = BTreeMap::new();
        for g in &var.flags {
            *local.entry(orbit_invariant(&var.cfg, var.n, f, g)).or_insert(0) += 1;
        }
        local
    });
    let mut out = BTreeMap::new();
    for r in rows {
        for (a, k) in r {
            *out.entry(a).or_insert(0) += k;
        }
    }
    out
}

/// `#{L : inv(L', L) = C}` for every invariant `C`, with one base flag `L'`
/// per step-size vector.
pub fn fiber_counts(var: &FlagVariety) -> BTreeMap<ThetaMatrix, u64> {
    let starts = weight_starts(var, 0);
    let parts = par::map(&starts, |&s| {
        let mut local: BTreeMap<ThetaMatrix, u64> = BTreeMap::new();
        for f in &var.flags {
            *local.entry(orbit_invariant(&var.cfg, var.n, &var.flags[s], f)).or_insert(0) += 1;
        }
        local
    });
    parts.into_iter().flatten().collect()
}

/// Odd primes used as sample points for interpolation in `q`.
pub const SAMPLE_PRIMES: [u32; 8] = [3, 5, 7, 11, 13, 17, 19, 23];

/// The diagonal bilinear form on the e-basis, with
/// `(e_A, e_A) = v^{2(d_A - d_{tA})} f_A(v)` and `f_A` interpolated from
/// fiber counts over several prime fields.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct InnerProduct {
    pub n: usize,
    pub d: usize,
    pub iota: bool,
    pub primes: Vec<u32>,
    /// `f_A` as a polynomial in `v^2`.
    pub fibers: BTreeMap<String, LaurentPoly>,
    #[serde(skip)]
    norms: BTreeMap<ThetaMatrix, LaurentPoly>,
}

impl InnerProduct {
    pub fn compute(n: usize, d: usize, iota: bool) -> Result<Self, OracleError> {
        let tag = if iota { SetTag::IXiD { n, d } } else { SetTag::XiD { n, d } };
        let labels = enumerate(tag).map_err(|e| OracleError::Kind(e.to_string()))?;
        let max_deg = labels.iter().map(|a| d_lower(&a.transpose())).max().unwrap_or(0) as usize;
        let k = max_deg + 2;
        if k > SAMPLE_PRIMES.len() {
            return Err(OracleError::TooLarge(k));
        }
        let primes = SAMPLE_PRIMES[..k].to_vec();
        let kind = if iota { FlagKind::IX } else { FlagKind::X };
        let mut tallies = Vec::new();
        for &q in &primes {
            let var = FlagVariety::enumerate(q, kind, n, d)?;
            tallies.push(fiber_counts(&var));
        }
        let mut fibers = BTreeMap::new();
        let mut norms = BTreeMap::new();
        for a in &labels {
            let ta = a.transpose();
            let pts: Vec<(u32, u64)> = primes
                .iter()
                .zip(&tallies)
                .map(|(&q, t)| (q, t.get(&ta).copied().unwrap_or(0)))
                .collect();
            let f = interpolate_in_q(&pts)?;
            if f.max_exp().unwrap_or(0) > 2 * d_lower(&ta) as i32 {
                return Err(OracleError::InterpolationInconsistent(format!("degree of f for {a}")));
            }
            let shift = 2 * (d_lower(a) - d_lower(&ta)) as i32;
            norms.insert(a.clone(), f.shift(shift));
            fibers.insert(a.to_string(), f);
        }
        Ok(InnerProduct { n, d, iota, primes, fibers, norms })
    }

    /// `(e_A, e_A)`.
    pub fn e_norm(&self, a: &ThetaMatrix) -> LaurentPoly {
        self.norms.get(a).cloned().unwrap_or_default()
    }

    /// `([A], [A]) = v^{-2 d_A} (e_A, e_A)`.
    pub fn std_norm(&self, a: &ThetaMatrix) -> LaurentPoly {
        self.e_norm(a).shift(-2 * d_lower(a) as i32)
    }

    pub fn labels(&self) -> impl Iterator<Item = &ThetaMatrix> {
        self.norms.keys()
    }

    /// `(x, y)` for elements written in the standard basis.
    pub fn pairing(&self, x: &AlgebraElement, y: &AlgebraElement) -> LaurentPoly {
        let ex = x.e_coefficients();
        let ey = y.e_coefficients();
        let mut s = LaurentPoly::zero();
        for (a, c) in &ex {
            if let Some(c2) = ey.get(a) {
                s = &s + &(&(c * c2) * &self.e_norm(a));
            }
        }
        s
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TypeCReport {
    pub n: usize,
    pub d: usize,
    pub q: u32,
    pub type_b_orbits: usize,
    pub type_c_orbits: usize,
    pub expected_type_c_orbits: u64,
    pub constants_compared: usize,
    pub mismatches: Vec<String>,
    pub pass: bool,
}

/// Compare the symplectic convolution constants on `N = 2n+1` step flags in
/// `F^{2d}` with the orthogonal ones under `A -> A - E_{n+1,n+1}`.
pub fn type_c_relabel_check(n: usize, d: usize, q: u32) -> Result<TypeCReport, OracleError> {
    let xb = FlagVariety::enumerate(q, FlagKind::X, n, d)?;
    let xc = FlagVariety::enumerate(q, FlagKind::XCPrime, n, d)?;
    let tb = convolution_table(&xb, false)?;
    let tc = convolution_table(&xc, false)?;
    let ob = orbit_sizes(&xb).len();
    let oc = orbit_sizes(&xc).len();
    let mut mismatches = Vec::new();
    for ((a, b, c), k) in &tb {
        let key = (a.type_c_relabel(), b.type_c_relabel(), c.type_c_relabel());
        let got = tc.get(&key).copied().unwrap_or(0);
        if got != *k {
            mismatches.push(format!("{a} * {b} at {c}: {k} vs {got}"));
        }
    }
    for (a, b, c) in tc.keys() {
        let back = (a.shift_center(1), b.shift_center(1), c.shift_center(1));
        if !tb.contains_key(&back) {
            mismatches.push(format!("symplectic triple {a} {b} {c} has no orthogonal partner"));
        }
    }
    let expected = binomial((2 * n * n + 2 * n + d) as u64, d as u64);
    let pass = mismatches.is_empty() && ob == oc && oc as u64 == expected;
    Ok(TypeCReport {
        n,
        d,
        q,
        type_b_orbits: ob,
        type_c_orbits: oc,
        expected_type_c_orbits: expected,
        constants_compared: tb.len(),
        mismatches,
        pass,
    })
}

/// CSV export of a convolution table.
pub fn conv_table_csv(t: &ConvTable) -> String {
    let mut s = String::from("left,right,target,count\n");
    for ((a, b, c), k) in t {
        let _ = writeln!(s, "\"{a}\",\"{b}\",\"{c}\",{k}");
    }
    s
}

/// CSV export of an orbit-size table.
pub fn orbit_table_csv(t: &BTreeMap<ThetaMatrix, u64>) -> String {
    let mut s = String::from("matrix,size\n");
    for (a, k) in t {
        let _ = writeln!(s, "\"{a}\",{k}");
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::gauss_binom;
    use rand::SeedableRng;

    #[test]
    fn field_rejects_even_or_composite() {
        assert!(FieldConfig::new(4, 3, FormKind::SymmetricAntidiagonal).is_err());
        assert!(FieldConfig::new(9, 3, FormKind::SymmetricAntidiagonal).is_err());
        assert!(FieldConfig::new(2, 3, FormKind::SymmetricAntidiagonal).is_err());
        assert!(FieldConfig::new(13, 3, FormKind::SymmetricAntidiagonal).is_ok());
    }

    #[test]
    fn subspace_counts_are_gaussian_binomials() {
        for q in [3u32, 5] {
            for a in 1..=4usize {
                let cfg = FieldConfig::new(q, a, FormKind::SymmetricAntidiagonal).unwrap();
                for b in 0..=a {
                    let count = cfg.all_subspaces(b).unwrap().len() as u64;
                    let sym = gauss_binom(a as i64, b as u32).eval_q(q as u64).unwrap();
                    assert_eq!(BigRational::from_integer(BigInt::from(count)), sym);
                }
            }
        }
    }

    #[test]
    fn perp_is_inclusion_reversing_involution() {
        for form in [FormKind::SymmetricAntidiagonal, FormKind::SkewStandard] {
            let dim = if form == FormKind::SkewStandard { 4 } else { 3 };
            let cfg = FieldConfig::new(3, dim, form).unwrap();
            let mut all = Vec::new();
            for k in 0..=dim {
                all.extend(cfg.all_subspaces(k).unwrap());
            }
            for u in &all {
                assert_eq!(cfg.perp(&cfg.perp(u)), *u);
                assert_eq!(cfg.perp(u).dim(), dim - u.dim());
            }
            for u in all.iter().take(20) {
                for w in all.iter().take(40) {
                    if cfg.contains(w, u) {
                        assert!(cfg.contains(&cfg.perp(u), &cfg.perp(w)));
                    }
                    let i = cfg.intersect(u, w);
                    assert_eq!(i.dim(), cfg.dim_intersection(u, w));
                }
            }
        }
    }

    #[test]
    fn small_flag_counts() {
        let y = FlagVariety::enumerate(3, FlagKind::Y, 1, 1).unwrap();
        assert_eq!(y.len(), 4);
        let x = FlagVariety::enumerate(3, FlagKind::X, 1, 1).unwrap();
        assert_eq!(x.len(), 5);
        let ix = FlagVariety::enumerate(3, FlagKind::IX, 2, 2).unwrap();
        assert_eq!(ix.len(), 240);
        let xc = FlagVariety::enumerate(3, FlagKind::XCPrime, 1, 1).unwrap();
        assert_eq!(xc.len(), 5);
    }

    #[test]
    fn orbits_match_index_sets() {
        for (n, d) in [(1usize, 1usize), (1, 2)] {
            let x = FlagVariety::enumerate(3, FlagKind::X, n, d).unwrap();
            let sizes = orbit_sizes(&x);
            let xi = enumerate(SetTag::XiD { n, d }).unwrap();
            assert_eq!(sizes.keys().cloned().collect::<Vec<_>>(), xi);
        }
        let ix = FlagVariety::enumerate(3, FlagKind::IX, 1, 2).unwrap();
        let sizes = orbit_sizes(&ix);
        assert_eq!(
            sizes.keys().cloned().collect::<Vec<_>>(),
            enumerate(SetTag::IXiD { n: 1, d: 2 }).unwrap()
        );
    }

    #[test]
    fn invariant_of_flag_with_itself_is_diagonal() {
        let x = FlagVariety::enumerate(3, FlagKind::X, 1, 2).unwrap();
        for f in &x.flags {
            let a = orbit_invariant(&x.cfg, 1, f, f);
            assert!(a.is_diagonal());
            assert_eq!(a.diagonal(), f.steps());
        }
    }

    #[test]
    fn invariant_is_constant_on_orbits() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for kind in [FlagKind::X, FlagKind::XCPrime] {
            let x = FlagVariety::enumerate(3, kind, 1, 2).unwrap();
            for s in 0..30 {
                let g = x.cfg.random_isometry(&mut rng, 6);
                let f1 = &x.flags[(s * 13) % x.len()];
                let f2 = &x.flags[(s * 29 + 5) % x.len()];
                let img = |f: &Flag| Flag { spaces: f.spaces.iter().map(|u| x.cfg.apply(&g, u)).collect() };
                let (g1, g2) = (img(f1), img(f2));
                assert!(x.flags.contains(&g1));
                assert_eq!(
                    orbit_invariant(&x.cfg, 1, f1, f2),
                    orbit_invariant(&x.cfg, 1, &g1, &g2)
                );
            }
        }
    }

    #[test]
    fn trivial_structure_constant() {
        let x = FlagVariety::enumerate(3, FlagKind::X, 1, 1).unwrap();
        let t = convolution_table(&x, true).unwrap();
        let dg = ThetaMatrix::diag(1, &[1, 1, 1]).unwrap();
        assert_eq!(t.get(&(dg.clone(), dg.clone(), dg)), Some(&1));
    }

    #[test]
    fn interpolation_recovers_polynomials() {
        let pts: Vec<(u32, u64)> = [3u32, 5, 7, 11].iter().map(|&q| (q, (q * q + q + 1) as u64)).collect();
        let p = interpolate_in_q(&pts).unwrap();
        assert_eq!(p, LaurentPoly::from_terms([(0, 1), (2, 1), (4, 1)]));
        let bad = vec![(3, 13), (5, 31), (7, 58)];
        assert!(interpolate_in_q(&bad).is_err());
    }

    #[test]
    fn csv_has_header() {
        let x = FlagVariety::enumerate(3, FlagKind::X, 1, 1).unwrap();
        let s = orbit_table_csv(&orbit_sizes(&x));
        assert!(s.starts_with("matrix,size\n"));
        assert_eq!(s.lines().count(), 6);
    }

    fn in_one_plus_negative(p: &LaurentPoly) -> bool {
        (p - &LaurentPoly::one()).in_negative_part()
    }

    #[test]
    fn degree_gap_identity() {
        for a in enumerate(SetTag::XiD { n: 2, d: 2 }).unwrap() {
            let (ro, co) = (a.ro(), a.co());
            let n = (ro.len() - 1) / 2;
            let mut rhs2 = 0i64;
            for i in 0..=n {
                let w = if i == n { 1 } else { 2 };
                rhs2 += w * (ro[i] * ro[i] - co[i] * co[i]);
            }
            rhs2 -= ro[n] - co[n];
            assert_eq!(4 * (d_lower(&a) - d_lower(&a.transpose())), rhs2, "{a}");
        }
    }

    #[test]
    fn standard_norms_are_near_one() {
        for (n, d) in [(1, 1), (1, 2)] {
            let ip = InnerProduct::compute(n, d, false).unwrap();
            for a in ip.labels() {
                assert!(in_one_plus_negative(&ip.std_norm(a)), "{a}: {}", ip.std_norm(a));
            }
        }
    }

    #[test]
    fn multiplication_is_adjoint_to_transpose() {
        let ip = InnerProduct::compute(1, 2, false).unwrap();
        let alg = crate::schur::Algebra::new(crate::schur::AlgebraContext::schur_j(1, 2));
        let labels: Vec<_> = ip.labels().cloned().collect();
        let ctx = alg.context();
        for a in &labels {
            for a1 in &labels {
                let e1 = AlgebraElement::e_basis(ctx.clone(), a1).unwrap();
                let left = alg.mul_std(a, &e1).unwrap();
                for a2 in &labels {
                    let e2 = AlgebraElement::e_basis(ctx.clone(), a2).unwrap();
                    let right = alg.mul_std(&a.transpose(), &e2).unwrap();
                    let lhs = ip.pairing(&left, &e2);
                    let rhs = ip.pairing(&e1, &right).shift((d_lower(a) - d_lower(&a.transpose())) as i32);
                    assert_eq!(lhs, rhs, "{a} {a1} {a2}");
                }
            }
        }
    }

    #[test]
    fn canonical_basis_is_almost_orthonormal() {
        for (n, d) in [(1, 1), (1, 2)] {
            let ip = InnerProduct::compute(n, d, false).unwrap();
            let alg = crate::schur::Algebra::new(crate::schur::AlgebraContext::schur_j(n, d));
            let labels: Vec<_> = ip.labels().cloned().collect();
            let cb: Vec<_> = labels.iter().map(|a| alg.canonical(a).unwrap()).collect();
            for (i, x) in cb.iter().enumerate() {
                for (j, y) in cb.iter().enumerate() {
                    let p = ip.pairing(x, y);
                    let ok = if i == j { in_one_plus_negative(&p) } else { p.in_negative_part() };
                    assert!(ok, "{} {}: {p}", labels[i], labels[j]);
                }
            }
        }
    }

    #[test]
    fn symplectic_constants_match_after_relabel() {
        let r = type_c_relabel_check(1, 1, 3).unwrap();
        assert!(r.pass, "{r:?}");
        assert_eq!(r.type_c_orbits, 5);
        let r = type_c_relabel_check(1, 2, 3).unwrap();
        assert!(r.pass, "{:?}", r.mismatches.iter().take(3).collect::<Vec<_>>());
        assert_eq!(r.expected_type_c_orbits, 15);
    }
}
