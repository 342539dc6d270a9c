//! Theta-symmetric matrices, the index sets built from them, orbit-dimension
//! statistics, the partial orders, and enumerators.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IndexError {
    #[error("index ({0}, {1}) out of range for N = {2}")]
    OutOfRange(usize, usize, usize),
    #[error("matrix is not theta-symmetric")]
    NotSymmetric,
    #[error("expected {expected} rows/columns, found {found}")]
    Shape { expected: usize, found: usize },
    #[error("set {0:?} is infinite and cannot be enumerated")]
    InfiniteSet(SetTag),
    #[error("malformed column-monomial matrix: {0}")]
    MalformedPi(String),
    #[error("word entry {0} outside [1, {1}]")]
    BadWord(usize, usize),
}

/// An `N x N` integer matrix (`N = 2n+1`) with `a_ij = a_{N+1-i, N+1-j}`.
///
/// Accessors are 1-indexed to match the usual matrix notation.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ThetaMatrix {
    n: usize,
    entries: Vec<i64>,
}

impl ThetaMatrix {
    pub fn zero(n: usize) -> Self {
        let big = 2 * n + 1;
        ThetaMatrix {
            n,
            entries: vec![0; big * big],
        }
    }

    pub fn from_rows(n: usize, rows: &[Vec<i64>]) -> Result<Self, IndexError> {
        let big = 2 * n + 1;
        if rows.len() != big {
            return Err(IndexError::Shape {
                expected: big,
                found: rows.len(),
            });
        }
        let mut entries = Vec::with_capacity(big * big);
        for r in rows {
            if r.len() != big {
                return Err(IndexError::Shape {
                    expected: big,
                    found: r.len(),
                });
            }
            entries.extend_from_slice(r);
        }
        let m = ThetaMatrix { n, entries };
        if !m.is_theta_symmetric() {
            return Err(IndexError::NotSymmetric);
        }
        Ok(m)
    }

    /// Diagonal matrix from a full weight vector (must be symmetric).
    pub fn diag(n: usize, weight: &[i64]) -> Result<Self, IndexError> {
        let big = 2 * n + 1;
        if weight.len() != big {
            return Err(IndexError::Shape {
                expected: big,
                found: weight.len(),
            });
        }
        let mut m = ThetaMatrix::zero(n);
        for (i, &w) in weight.iter().enumerate() {
            m.entries[i * big + i] = w;
        }
        if !m.is_theta_symmetric() {
            return Err(IndexError::NotSymmetric);
        }
        Ok(m)
    }

    /// `E^theta_ij = E_ij + E_{N+1-i, N+1-j}`.
    pub fn e_theta(n: usize, i: usize, j: usize) -> Result<Self, IndexError> {
        let big = 2 * n + 1;
        if i == 0 || j == 0 || i > big || j > big {
            return Err(IndexError::OutOfRange(i, j, big));
        }
        let mut m = ThetaMatrix::zero(n);
        m.add_e_theta(i, j, 1);
        Ok(m)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `N = 2n + 1`.
    pub fn size(&self) -> usize {
        2 * self.n + 1
    }

    pub fn center(&self) -> usize {
        self.n + 1
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> i64 {
        let big = self.size();
        self.entries[(i - 1) * big + (j - 1)]
    }

    /// Add `k * E^theta_ij`, keeping the symmetry.
    pub fn add_e_theta(&mut self, i: usize, j: usize, k: i64) {
        let big = self.size();
        let (mi, mj) = (big + 1 - i, big + 1 - j);
        self.entries[(i - 1) * big + (j - 1)] += k;
        self.entries[(mi - 1) * big + (mj - 1)] += k;
    }

    /// Set `a_ij` and its mirror to `val`.
    pub fn set_sym(&mut self, i: usize, j: usize, val: i64) {
        let big = self.size();
        let (mi, mj) = (big + 1 - i, big + 1 - j);
        self.entries[(i - 1) * big + (j - 1)] = val;
        self.entries[(mi - 1) * big + (mj - 1)] = val;
    }

    pub fn plus_e_theta(&self, i: usize, j: usize, k: i64) -> Self {
        let mut m = self.clone();
        m.add_e_theta(i, j, k);
        m
    }

    pub fn add(&self, other: &ThetaMatrix) -> Self {
        ThetaMatrix {
            n: self.n,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn is_theta_symmetric(&self) -> bool {
        let big = self.size();
        (1..=big).all(|i| (1..=big).all(|j| self.get(i, j) == self.get(big + 1 - i, big + 1 - j)))
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.entries.chunks(self.size()).map(|r| r.to_vec()).collect()
    }

    pub fn entries(&self) -> &[i64] {
        &self.entries
    }

    pub fn ro(&self) -> Vec<i64> {
        self.entries.chunks(self.size()).map(|r| r.iter().sum()).collect()
    }

    pub fn co(&self) -> Vec<i64> {
        let big = self.size();
        (1..=big)
            .map(|j| (1..=big).map(|i| self.get(i, j)).sum())
            .collect()
    }

    pub fn transpose(&self) -> Self {
        let big = self.size();
        let mut m = ThetaMatrix::zero(self.n);
        for i in 0..big {
            for j in 0..big {
                m.entries[j * big + i] = self.entries[i * big + j];
            }
        }
        m
    }

    pub fn is_diagonal(&self) -> bool {
        let big = self.size();
        (1..=big).all(|i| (1..=big).all(|j| i == j || self.get(i, j) == 0))
    }

    pub fn diagonal(&self) -> Vec<i64> {
        (1..=self.size()).map(|i| self.get(i, i)).collect()
    }

    pub fn total(&self) -> i64 {
        self.entries.iter().sum()
    }

    /// Strictly upper triangle, row-major.
    pub fn upper(&self) -> Vec<i64> {
        let big = self.size();
        let mut v = Vec::with_capacity(big * (big - 1) / 2);
        for i in 1..=big {
            for j in i + 1..=big {
                v.push(self.get(i, j));
            }
        }
        v
    }

    /// Sum of the strictly upper triangle.
    pub fn upper_mass(&self) -> i64 {
        self.upper().iter().sum()
    }

    pub fn off_diagonal_nonnegative(&self) -> bool {
        let big = self.size();
        (1..=big).all(|i| (1..=big).all(|j| i == j || self.get(i, j) >= 0))
    }

    pub fn all_nonnegative(&self) -> bool {
        self.entries.iter().all(|&a| a >= 0)
    }

    /// Row and column `n+1` vanish except for a `1` at the center.
    pub fn is_iota_shaped(&self) -> bool {
        let c = self.center();
        let big = self.size();
        self.get(c, c) == 1 && (1..=big).all(|k| k == c || (self.get(c, k) == 0 && self.get(k, c) == 0))
    }

    /// `sum_{r <= i, s >= j} a_rs`.
    pub fn upper_partial_sum(&self, i: usize, j: usize) -> i64 {
        let mut s = 0;
        for r in 1..=i {
            for c in j..=self.size() {
                s += self.get(r, c);
            }
        }
        s
    }

    /// `sum_{r >= i, s <= j} a_rs`.
    pub fn lower_partial_sum(&self, i: usize, j: usize) -> i64 {
        let mut s = 0;
        for r in i..=self.size() {
            for c in 1..=j {
                s += self.get(r, c);
            }
        }
        s
    }

    /// Shift the diagonal by `p` times the identity.
    pub fn shift_identity(&self, p: i64) -> Self {
        let mut m = self.clone();
        for i in 1..=self.size() {
            m.entries[(i - 1) * self.size() + (i - 1)] += p;
        }
        m
    }

    /// Shift by `p` times the identity with the center entry left alone.
    pub fn shift_identity_off_center(&self, p: i64) -> Self {
        let mut m = self.shift_identity(p);
        let c = self.center();
        m.entries[(c - 1) * self.size() + (c - 1)] -= p;
        m
    }

    /// `A - E_{n+1,n+1}`, the type C relabeling.
    pub fn type_c_relabel(&self) -> Self {
        self.shift_center(-1)
    }

    /// Add `k` to the center entry only.
    pub fn shift_center(&self, k: i64) -> Self {
        let mut m = self.clone();
        let c = self.center();
        m.entries[(c - 1) * self.size() + (c - 1)] += k;
        m
    }
}

impl Ord for ThetaMatrix {
    fn cmp(&self, other: &Self) -> Ordering {
        self.n
            .cmp(&other.n)
            .then_with(|| self.upper().cmp(&other.upper()))
            .then_with(|| self.entries.cmp(&other.entries))
    }
}

impl PartialOrd for ThetaMatrix {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ThetaMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (k, row) in self.rows().iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "[")?;
            for (l, a) in row.iter().enumerate() {
                if l > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", a)?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for ThetaMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    n: usize,
    rows: Vec<Vec<i64>>,
}

impl Serialize for ThetaMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        MatrixJson {
            n: self.n,
            rows: self.rows(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ThetaMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = MatrixJson::deserialize(d)?;
        ThetaMatrix::from_rows(raw.n, &raw.rows).map_err(serde::de::Error::custom)
    }
}

/// Which index set a matrix (or word) is drawn from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SetTag {
    XiD { n: usize, d: usize },
    IXiD { n: usize, d: usize },
    TildeXi { n: usize },
    TildeXiGt { n: usize },
    TildeXiLt { n: usize },
    ITildeXi { n: usize },
    Pi { n: usize, d: usize },
    IPi { n: usize, d: usize },
}

impl SetTag {
    pub fn n(&self) -> usize {
        match *self {
            SetTag::XiD { n, .. }
            | SetTag::IXiD { n, .. }
            | SetTag::TildeXi { n }
            | SetTag::TildeXiGt { n }
            | SetTag::TildeXiLt { n }
            | SetTag::ITildeXi { n }
            | SetTag::Pi { n, .. }
            | SetTag::IPi { n, .. } => n,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(
            self,
            SetTag::XiD { .. } | SetTag::IXiD { .. } | SetTag::Pi { .. } | SetTag::IPi { .. }
        )
    }
}

/// Membership of a theta-symmetric matrix in one of the matrix-labelled sets.
pub fn member(a: &ThetaMatrix, tag: SetTag) -> bool {
    if a.n() != tag.n() || !a.is_theta_symmetric() {
        return false;
    }
    let c = a.center();
    let tilde = a.off_diagonal_nonnegative() && a.get(c, c).rem_euclid(2) == 1;
    match tag {
        SetTag::XiD { d, .. } => a.all_nonnegative() && a.total() == 2 * d as i64 + 1,
        SetTag::IXiD { d, .. } => {
            a.all_nonnegative() && a.total() == 2 * d as i64 + 1 && a.is_iota_shaped()
        }
        SetTag::TildeXi { .. } => tilde,
        SetTag::TildeXiGt { .. } => tilde && a.get(c, c) > 0,
        SetTag::TildeXiLt { .. } => tilde && a.get(c, c) < 0,
        SetTag::ITildeXi { .. } => tilde && a.is_iota_shaped(),
        SetTag::Pi { .. } | SetTag::IPi { .. } => false,
    }
}

/// Every composition of `total` into `slots` nonnegative parts, in
/// lexicographic order.
fn compositions(total: i64, slots: usize) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut cur = vec![0i64; slots];
    fn rec(pos: usize, left: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if pos + 1 == cur.len() {
            cur[pos] = left;
            out.push(cur.clone());
            return;
        }
        for x in 0..=left {
            cur[pos] = x;
            rec(pos + 1, left - x, cur, out);
        }
    }
    if slots == 0 {
        if total == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(0, total, &mut cur, &mut out);
    out
}

/// Enumerate a finite matrix-labelled set in the canonical order.
pub fn enumerate(tag: SetTag) -> Result<Vec<ThetaMatrix>, IndexError> {
    let (n, d, iota) = match tag {
        SetTag::XiD { n, d } => (n, d, false),
        SetTag::IXiD { n, d } => (n, d, true),
        _ => return Err(IndexError::InfiniteSet(tag)),
    };
    let big = 2 * n + 1;
    let c = n + 1;
    // free slots: strictly upper entries, the first n diagonal entries, and
    // (center - 1)/2.
    let mut upper_slots = Vec::new();
    for i in 1..=big {
        for j in i + 1..=big {
            if iota && (i == c || j == c) {
                continue;
            }
            upper_slots.push((i, j));
        }
    }
    let slots = upper_slots.len() + n + usize::from(!iota);
    let mut out = Vec::new();
    for comp in compositions(d as i64, slots) {
        let mut m = ThetaMatrix::zero(n);
        for (k, &(i, j)) in upper_slots.iter().enumerate() {
            m.set_sym(i, j, comp[k]);
        }
        for i in 1..=n {
            m.set_sym(i, i, comp[upper_slots.len() + i - 1]);
        }
        let half = if iota { 0 } else { comp[slots - 1] };
        m.set_sym(c, c, 2 * half + 1);
        out.push(m);
    }
    out.sort();
    Ok(out)
}

/// A word `r_1 ... r_d` with entries in `[1, N]`.
pub type Word = Vec<usize>;

/// Extend a word to length `D = 2d+1` via `r_c + r_{D+1-c} = N+1`.
pub fn extend_word(n: usize, w: &[usize]) -> Vec<usize> {
    let big = 2 * n + 1;
    let d = w.len();
    let mut out = Vec::with_capacity(2 * d + 1);
    out.extend_from_slice(w);
    out.push(n + 1);
    for c in (0..d).rev() {
        out.push(big + 1 - w[c]);
    }
    out
}

/// All words of length `d`; with `iota`, the center letter `n+1` is excluded.
pub fn enumerate_words(n: usize, d: usize, iota: bool) -> Vec<Word> {
    let big = 2 * n + 1;
    let letters: Vec<usize> = (1..=big).filter(|&r| !(iota && r == n + 1)).collect();
    let mut out: Vec<Word> = vec![Vec::new()];
    for _ in 0..d {
        let mut next = Vec::with_capacity(out.len() * letters.len());
        for w in &out {
            for &r in &letters {
                let mut x = w.clone();
                x.push(r);
                next.push(x);
            }
        }
        out = next;
    }
    out
}

/// `N x D` column-monomial matrix labelling an orbit on flag-times-complete-flag.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PiMatrix {
    pub n: usize,
    pub d: usize,
    /// Row-major `N x D` entries.
    pub entries: Vec<i64>,
}

impl PiMatrix {
    pub fn get(&self, i: usize, c: usize) -> i64 {
        self.entries[(i - 1) * (2 * self.d + 1) + (c - 1)]
    }
}

pub fn pi_of_word(n: usize, w: &[usize]) -> Result<PiMatrix, IndexError> {
    let big = 2 * n + 1;
    for &r in w {
        if r == 0 || r > big {
            return Err(IndexError::BadWord(r, big));
        }
    }
    let d = w.len();
    let cols = 2 * d + 1;
    let ext = extend_word(n, w);
    let mut entries = vec![0i64; big * cols];
    for (c, &r) in ext.iter().enumerate() {
        entries[(r - 1) * cols + c] = 1;
    }
    Ok(PiMatrix { n, d, entries })
}

pub fn word_of_pi(b: &PiMatrix) -> Result<Word, IndexError> {
    let big = 2 * b.n + 1;
    let cols = 2 * b.d + 1;
    if b.entries.len() != big * cols {
        return Err(IndexError::MalformedPi("wrong shape".into()));
    }
    let mut ext = Vec::with_capacity(cols);
    for c in 1..=cols {
        let ones: Vec<usize> = (1..=big).filter(|&i| b.get(i, c) == 1).collect();
        let col_sum: i64 = (1..=big).map(|i| b.get(i, c)).sum();
        if ones.len() != 1 || col_sum != 1 {
            return Err(IndexError::MalformedPi(format!("column {c} is not a unit vector")));
        }
        ext.push(ones[0]);
    }
    for c in 0..cols {
        if ext[c] + ext[cols - 1 - c] != big + 1 {
            return Err(IndexError::MalformedPi("not theta-symmetric".into()));
        }
    }
    Ok(ext[..b.d].to_vec())
}

/// Orbit dimension `d(A)`.
pub fn dim_orbit(a: &ThetaMatrix) -> i64 {
    let big = a.size();
    let c = a.center();
    let mut s = 0i64;
    let nz: Vec<(usize, usize, i64)> = (1..=big)
        .flat_map(|i| (1..=big).map(move |j| (i, j)))
        .map(|(i, j)| (i, j, a.get(i, j)))
        .filter(|t| t.2 != 0)
        .collect();
    for &(i, j, aij) in &nz {
        for &(k, l, akl) in &nz {
            if !(i < k || j < l) {
                continue;
            }
            if i + k < big + 1 || (i + k == big + 1 && j + l < big + 1) {
                s += aij * akl;
            }
        }
        if i < c || j < c {
            s += aij * (aij - 1) / 2;
        }
    }
    s
}

/// `r(A)`: the orbit dimension of the diagonal matrix with the row sums of `A`.
pub fn dim_image(a: &ThetaMatrix) -> i64 {
    let d = ThetaMatrix::diag(a.n(), &a.ro()).expect("row sums are symmetric");
    dim_orbit(&d)
}

/// `d_A = d(A) - r(A)`.
pub fn d_lower(a: &ThetaMatrix) -> i64 {
    dim_orbit(a) - dim_image(a)
}

/// The displayed closed formula for `r(A)` read with the indices as printed:
/// first sum over entries in rows `i < k` with `i + k < N+1`, the second over
/// pairs in the same row `i < n+1`.
pub fn dim_image_displayed(a: &ThetaMatrix) -> i64 {
    let big = a.size();
    let c = a.center();
    let ro = a.ro();
    let mut s2 = 0i64;
    for i in 1..=big {
        for k in i + 1..=big {
            if i + k < big + 1 {
                s2 += 2 * ro[i - 1] * ro[k - 1];
            }
        }
    }
    for i in 1..c {
        s2 += ro[i - 1] * ro[i - 1] - ro[i - 1];
    }
    s2 / 2
}

/// `A <= B` in the order given by the upper partial sums.
pub fn preceq(a: &ThetaMatrix, b: &ThetaMatrix) -> bool {
    let big = a.size();
    for i in 1..big {
        for j in i + 1..=big {
            if a.upper_partial_sum(i, j) > b.upper_partial_sum(i, j) {
                return false;
            }
        }
    }
    true
}

/// Both families of partial-sum inequalities.
pub fn preceq_full(a: &ThetaMatrix, b: &ThetaMatrix) -> bool {
    let big = a.size();
    if !preceq(a, b) {
        return false;
    }
    for i in 2..=big {
        for j in 1..i {
            if a.lower_partial_sum(i, j) > b.lower_partial_sum(i, j) {
                return false;
            }
        }
    }
    true
}

/// `A' [= A`: the partial-sum order together with equal row and column sums.
pub fn sqsubseteq(a: &ThetaMatrix, b: &ThetaMatrix) -> bool {
    a.n() == b.n() && a.ro() == b.ro() && a.co() == b.co() && preceq(a, b)
}

/// Strict version of [`sqsubseteq`].
pub fn sqsubset(a: &ThetaMatrix, b: &ThetaMatrix) -> bool {
    a != b && sqsubseteq(a, b)
}

/// Sum of all upper partial sums; strictly increases along the strict order.
pub fn order_height(a: &ThetaMatrix) -> i64 {
    let big = a.size();
    let mut h = 0;
    for i in 1..big {
        for j in i + 1..=big {
            h += a.upper_partial_sum(i, j);
        }
    }
    h
}

/// Extra condition imposed on members of a down-set beyond the row/column sums.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BlockFilter {
    /// All entries nonnegative.
    Nonnegative,
    /// Nonnegative and iota-shaped.
    NonnegativeIota,
    /// Off-diagonal entries nonnegative only.
    Tilde,
    /// Off-diagonal nonnegative with positive center.
    TildePositive,
    /// Off-diagonal nonnegative and iota-shaped.
    TildeIota,
}

impl BlockFilter {
    pub fn for_tag(tag: SetTag) -> Self {
        match tag {
            SetTag::XiD { .. } => BlockFilter::Nonnegative,
            SetTag::IXiD { .. } => BlockFilter::NonnegativeIota,
            SetTag::TildeXi { .. } | SetTag::TildeXiLt { .. } => BlockFilter::Tilde,
            SetTag::TildeXiGt { .. } => BlockFilter::TildePositive,
            SetTag::ITildeXi { .. } => BlockFilter::TildeIota,
            SetTag::Pi { .. } | SetTag::IPi { .. } => BlockFilter::Nonnegative,
        }
    }

    pub fn accepts(&self, a: &ThetaMatrix) -> bool {
        let c = a.center();
        match self {
            BlockFilter::Nonnegative => a.all_nonnegative(),
            BlockFilter::NonnegativeIota => a.all_nonnegative() && a.is_iota_shaped(),
            BlockFilter::Tilde => a.off_diagonal_nonnegative(),
            BlockFilter::TildePositive => a.off_diagonal_nonnegative() && a.get(c, c) > 0,
            BlockFilter::TildeIota => a.off_diagonal_nonnegative() && a.is_iota_shaped(),
        }
    }
}

/// Fill order for the strictly upper entries: rows ascending, columns
/// descending, so that each upper partial sum is complete once its corner is set.
fn upper_fill_order(big: usize) -> Vec<(usize, usize)> {
    let mut v = Vec::new();
    for i in 1..big {
        for j in (i + 1..=big).rev() {
            v.push((i, j));
        }
    }
    v
}

/// Every matrix with the given row sums whose upper entries satisfy
/// `S'(i,j) <= bound(i,j)` for the upper partial sums, with the diagonal
/// derived from the row sums.
fn enumerate_bounded<F>(n: usize, ro: &[i64], bound: F) -> Vec<ThetaMatrix>
where
    F: Fn(usize, usize) -> i64,
{
    let big = 2 * n + 1;
    let order = upper_fill_order(big);
    let bounds: Vec<i64> = order.iter().map(|&(i, j)| bound(i, j)).collect();
    let mut out = Vec::new();
    let mut cur = ThetaMatrix::zero(n);
    // partial[(i, j)] = upper partial sum at (i, j) for the current fill
    let mut partial = vec![0i64; big * big];
    fn rec(
        k: usize,
        order: &[(usize, usize)],
        bounds: &[i64],
        cur: &mut ThetaMatrix,
        partial: &mut Vec<i64>,
        ro: &[i64],
        out: &mut Vec<ThetaMatrix>,
    ) {
        let big = cur.size();
        if k == order.len() {
            let mut m = cur.clone();
            // diagonal from row sums; lower entries are mirrors of upper ones
            for i in 1..=big {
                let off: i64 = (1..=big).filter(|&j| j != i).map(|j| m.get(i, j)).sum();
                let v = ro[i - 1] - off;
                let idx = (i - 1) * big + (i - 1);
                m.entries[idx] = v;
            }
            out.push(m);
            return;
        }
        let (i, j) = order[k];
        // partial(i, j) = partial(i-1, j) + sum_{s >= j} a_is
        let above = if i > 1 { partial[(i - 2) * big + (j - 1)] } else { 0 };
        let row_tail: i64 = (j + 1..=big).map(|s| cur.get(i, s)).sum();
        let base = above + row_tail;
        let slack = bounds[k] - base;
        if slack < 0 {
            return;
        }
        for x in 0..=slack {
            cur.set_sym(i, j, x);
            partial[(i - 1) * big + (j - 1)] = base + x;
            rec(k + 1, order, bounds, cur, partial, ro, out);
        }
        cur.set_sym(i, j, 0);
    }
    rec(0, &order, &bounds, &mut cur, &mut partial, ro, &mut out);
    // mirrors of upper entries were written by set_sym; but the upper partial
    // sums of rows i >= j-1 include diagonal-adjacent entries only, so the
    // recursion is exact.
    out
}

/// All `A'` in the filtered block with `A' [= A`, in canonical order.
pub fn down_set_filtered(a: &ThetaMatrix, filter: BlockFilter) -> Vec<ThetaMatrix> {
    let ro = a.ro();
    let co = a.co();
    let mut out: Vec<ThetaMatrix> = enumerate_bounded(a.n(), &ro, |i, j| a.upper_partial_sum(i, j))
        .into_iter()
        .filter(|m| m.co() == co && filter.accepts(m) && m.is_theta_symmetric())
        .collect();
    out.sort();
    out
}

/// All `A'` in the set `tag` with `A' [= A`.
pub fn down_set(a: &ThetaMatrix, tag: SetTag) -> Vec<ThetaMatrix> {
    let filter = BlockFilter::for_tag(tag);
    down_set_filtered(a, filter)
        .into_iter()
        .filter(|m| member(m, tag) || matches!(tag, SetTag::Pi { .. } | SetTag::IPi { .. }))
        .collect()
}

/// Every matrix in the filtered block with the given row and column sums
/// and upper mass at most `mass`.
pub fn block_window(
    n: usize,
    ro: &[i64],
    co: &[i64],
    mass: i64,
    filter: BlockFilter,
) -> Vec<ThetaMatrix> {
    let mut out: Vec<ThetaMatrix> = enumerate_bounded(n, ro, |_, _| mass)
        .into_iter()
        .filter(|m| m.upper_mass() <= mass && m.co() == co && filter.accepts(m))
        .collect();
    out.sort();
    out.dedup();
    out
}

/// `C(a, b)` as an exact integer.
pub fn binomial(a: u64, b: u64) -> u64 {
    if b > a {
        return 0;
    }
    let b = b.min(a - b);
    let mut r: u64 = 1;
    for i in 0..b {
        r = r * (a - i) / (i + 1);
    }
    r
}
