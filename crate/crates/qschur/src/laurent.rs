//! Sparse Laurent polynomials in `v` with integer coefficients.

use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LaurentError {
    #[error("inexact division: nonzero remainder")]
    InexactDivision,
    #[error("division by zero polynomial")]
    DivisionByZero,
    #[error("odd exponent {0} cannot be evaluated at v = sqrt(q) in strict mode")]
    OddExponent(i32),
    #[error("malformed polynomial: {0}")]
    Malformed(String),
}

/// Element of `Z[v, v^-1]`, stored as `(exponent, coefficient)` pairs with
/// strictly increasing exponents and no zero coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct LaurentPoly {
    terms: Vec<(i32, i64)>,
}

fn checked_add(a: i64, b: i64) -> i64 {
    a.checked_add(b).expect("Laurent coefficient overflow")
}

fn checked_mul(a: i64, b: i64) -> i64 {
    a.checked_mul(b).expect("Laurent coefficient overflow")
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::monomial(0, 1)
    }

    pub fn constant(c: i64) -> Self {
        Self::monomial(0, c)
    }

    pub fn monomial(exp: i32, coeff: i64) -> Self {
        if coeff == 0 {
            Self::zero()
        } else {
            LaurentPoly {
                terms: vec![(exp, coeff)],
            }
        }
    }

    /// `v^k`.
    pub fn v_pow(k: i32) -> Self {
        Self::monomial(k, 1)
    }

    /// Build from arbitrary pairs; duplicates are summed and zeros dropped.
    pub fn from_terms<I: IntoIterator<Item = (i32, i64)>>(it: I) -> Self {
        let mut v: Vec<(i32, i64)> = it.into_iter().collect();
        v.sort_by_key(|t| t.0);
        let mut out: Vec<(i32, i64)> = Vec::with_capacity(v.len());
        for (e, c) in v {
            match out.last_mut() {
                Some(last) if last.0 == e => last.1 = checked_add(last.1, c),
                _ => out.push((e, c)),
            }
        }
        out.retain(|t| t.1 != 0);
        LaurentPoly { terms: out }
    }

    pub fn terms(&self) -> &[(i32, i64)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms == [(0, 1)]
    }

    pub fn coeff(&self, exp: i32) -> i64 {
        match self.terms.binary_search_by_key(&exp, |t| t.0) {
            Ok(i) => self.terms[i].1,
            Err(_) => 0,
        }
    }

    pub fn min_exp(&self) -> Option<i32> {
        self.terms.first().map(|t| t.0)
    }

    pub fn max_exp(&self) -> Option<i32> {
        self.terms.last().map(|t| t.0)
    }

    /// `v -> v^-1`.
    pub fn bar(&self) -> Self {
        LaurentPoly {
            terms: self.terms.iter().rev().map(|&(e, c)| (-e, c)).collect(),
        }
    }

    /// Multiply by `v^k`.
    pub fn shift(&self, k: i32) -> Self {
        LaurentPoly {
            terms: self.terms.iter().map(|&(e, c)| (e + k, c)).collect(),
        }
    }

    pub fn scale(&self, s: i64) -> Self {
        if s == 0 {
            return Self::zero();
        }
        LaurentPoly {
            terms: self
                .terms
                .iter()
                .map(|&(e, c)| (e, checked_mul(c, s)))
                .collect(),
        }
    }

    /// Substitute `v -> v^k` (k may be negative).
    pub fn substitute_power(&self, k: i32) -> Self {
        Self::from_terms(self.terms.iter().map(|&(e, c)| (e * k, c)))
    }

    /// Terms with exponent strictly below `bound`.
    pub fn truncate_below(&self, bound: i32) -> Self {
        LaurentPoly {
            terms: self.terms.iter().copied().filter(|t| t.0 < bound).collect(),
        }
    }

    /// True if every exponent is negative (zero counts as in `v^-1 Z[v^-1]`).
    pub fn in_negative_part(&self) -> bool {
        self.terms.iter().all(|t| t.0 < 0)
    }

    pub fn all_coeffs_nonnegative(&self) -> bool {
        self.terms.iter().all(|t| t.1 >= 0)
    }

    pub fn is_bar_invariant(&self) -> bool {
        *self == self.bar()
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Exact division in `Z[v, v^-1]`; errors when a remainder would be left.
    pub fn div_exact(&self, divisor: &LaurentPoly) -> Result<LaurentPoly, LaurentError> {
        if divisor.is_zero() {
            return Err(LaurentError::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(Self::zero());
        }
        if divisor.terms.len() == 1 {
            let (de, dc) = divisor.terms[0];
            let mut out = Vec::with_capacity(self.terms.len());
            for &(e, c) in &self.terms {
                if c % dc != 0 {
                    return Err(LaurentError::InexactDivision);
                }
                out.push((e - de, c / dc));
            }
            return Ok(LaurentPoly { terms: out });
        }
        let ds = divisor.min_exp().unwrap();
        let ps = self.min_exp().unwrap();
        let d: Vec<i64> = dense(divisor, ds);
        let mut rem: Vec<i64> = dense(self, ps);
        if rem.len() < d.len() {
            return Err(LaurentError::InexactDivision);
        }
        let lead = *d.last().unwrap();
        let qlen = rem.len() - d.len() + 1;
        let mut q = vec![0i64; qlen];
        for k in (0..qlen).rev() {
            let top = rem[k + d.len() - 1];
            if top == 0 {
                continue;
            }
            if top % lead != 0 {
                return Err(LaurentError::InexactDivision);
            }
            let f = top / lead;
            q[k] = f;
            for (j, &dj) in d.iter().enumerate() {
                rem[k + j] = rem[k + j]
                    .checked_sub(checked_mul(f, dj))
                    .expect("Laurent coefficient overflow");
            }
        }
        if rem.iter().any(|&c| c != 0) {
            return Err(LaurentError::InexactDivision);
        }
        let shift = ps - ds;
        Ok(Self::from_terms(
            q.into_iter()
                .enumerate()
                .map(|(i, c)| (i as i32 + shift, c)),
        ))
    }

    /// Evaluate at `v = sqrt(q)`; odd exponents are rejected.
    pub fn eval_q(&self, q: u64) -> Result<BigRational, LaurentError> {
        let mut acc = BigRational::zero();
        for &(e, c) in &self.terms {
            if e % 2 != 0 {
                return Err(LaurentError::OddExponent(e));
            }
            acc += BigRational::from_integer(BigInt::from(c)) * rat_pow(q, e / 2);
        }
        Ok(acc)
    }

    /// Evaluate at `v = sqrt(q)` returning `(a, b)` with value `a + b*sqrt(q)`.
    pub fn eval_q_lenient(&self, q: u64) -> (BigRational, BigRational) {
        let mut a = BigRational::zero();
        let mut b = BigRational::zero();
        for &(e, c) in &self.terms {
            let cc = BigRational::from_integer(BigInt::from(c));
            if e.rem_euclid(2) == 0 {
                a += cc * rat_pow(q, e / 2);
            } else {
                b += cc * rat_pow(q, (e - 1).div_euclid(2));
            }
        }
        (a, b)
    }

    /// Evaluate at a rational value of `v`.
    pub fn eval_at(&self, v: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for &(e, c) in &self.terms {
            let p = if e >= 0 {
                num_traits::pow(v.clone(), e as usize)
            } else {
                num_traits::pow(v.recip(), (-e) as usize)
            };
            acc += BigRational::from_integer(BigInt::from(c)) * p;
        }
        acc
    }
}

fn dense(p: &LaurentPoly, shift: i32) -> Vec<i64> {
    let top = p.max_exp().unwrap() - shift;
    let mut v = vec![0i64; top as usize + 1];
    for &(e, c) in &p.terms {
        v[(e - shift) as usize] = c;
    }
    v
}

fn rat_pow(q: u64, k: i32) -> BigRational {
    let base = BigRational::from_integer(BigInt::from(q));
    if k >= 0 {
        num_traits::pow(base, k as usize)
    } else {
        num_traits::pow(base.recip(), (-k) as usize)
    }
}

fn merge(a: &[(i32, i64)], b: &[(i32, i64)], sign: i64) -> LaurentPoly {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j >= b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i]);
            i += 1;
        } else if i >= a.len() || b[j].0 < a[i].0 {
            out.push((b[j].0, checked_mul(sign, b[j].1)));
            j += 1;
        } else {
            let c = checked_add(a[i].1, checked_mul(sign, b[j].1));
            if c != 0 {
                out.push((a[i].0, c));
            }
            i += 1;
            j += 1;
        }
    }
    LaurentPoly { terms: out }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        merge(&self.terms, &rhs.terms, 1)
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        merge(&self.terms, &rhs.terms, -1)
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() || rhs.is_zero() {
            return LaurentPoly::zero();
        }
        if rhs.terms.len() == 1 {
            let (e, c) = rhs.terms[0];
            return self.shift(e).scale(c);
        }
        if self.terms.len() == 1 {
            let (e, c) = self.terms[0];
            return rhs.shift(e).scale(c);
        }
        let lo = self.min_exp().unwrap() + rhs.min_exp().unwrap();
        let hi = self.max_exp().unwrap() + rhs.max_exp().unwrap();
        let mut acc = vec![0i64; (hi - lo) as usize + 1];
        for &(e1, c1) in &self.terms {
            for &(e2, c2) in &rhs.terms {
                let k = (e1 + e2 - lo) as usize;
                acc[k] = checked_add(acc[k], checked_mul(c1, c2));
            }
        }
        LaurentPoly {
            terms: acc
                .into_iter()
                .enumerate()
                .filter(|t| t.1 != 0)
                .map(|(i, c)| (i as i32 + lo, c))
                .collect(),
        }
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        self.scale(-1)
    }
}

macro_rules! owned_binop {
    ($tr:ident, $m:ident) => {
        impl $tr for LaurentPoly {
            type Output = LaurentPoly;
            fn $m(self, rhs: LaurentPoly) -> LaurentPoly {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $m(self, rhs: &LaurentPoly) -> LaurentPoly {
                (&self).$m(rhs)
            }
        }
        impl $tr<LaurentPoly> for &LaurentPoly {
            type Output = LaurentPoly;
            fn $m(self, rhs: LaurentPoly) -> LaurentPoly {
                self.$m(&rhs)
            }
        }
    };
}
owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        self.scale(-1)
    }
}

impl AddAssign<&LaurentPoly> for LaurentPoly {
    fn add_assign(&mut self, rhs: &LaurentPoly) {
        *self = &*self + rhs;
    }
}

impl AddAssign for LaurentPoly {
    fn add_assign(&mut self, rhs: LaurentPoly) {
        *self = &*self + &rhs;
    }
}

impl SubAssign<&LaurentPoly> for LaurentPoly {
    fn sub_assign(&mut self, rhs: &LaurentPoly) {
        *self = &*self - rhs;
    }
}

impl Zero for LaurentPoly {
    fn zero() -> Self {
        LaurentPoly::zero()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl One for LaurentPoly {
    fn one() -> Self {
        LaurentPoly::one()
    }
}

impl From<i64> for LaurentPoly {
    fn from(c: i64) -> Self {
        LaurentPoly::constant(c)
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, &(e, c)) in self.terms.iter().rev().enumerate() {
            let (sign, mag) = if c < 0 { ("-", -c) } else { ("+", c) };
            if k == 0 {
                if c < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", sign)?;
            }
            match e {
                0 => write!(f, "{}", mag)?,
                _ => {
                    if mag != 1 {
                        write!(f, "{}*", mag)?;
                    }
                    if e == 1 {
                        write!(f, "v")?;
                    } else {
                        write!(f, "v^{}", e)?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl Serialize for LaurentPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.terms.serialize(s)
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw: Vec<(i32, i64)> = Vec::deserialize(d)?;
        for w in raw.windows(2) {
            if w[0].0 >= w[1].0 {
                return Err(serde::de::Error::custom(
                    "exponents must be strictly increasing",
                ));
            }
        }
        if raw.iter().any(|t| t.1 == 0) {
            return Err(serde::de::Error::custom("zero coefficient stored"));
        }
        Ok(LaurentPoly { terms: raw })
    }
}

/// Balanced quantum integer `(v^r - v^-r)/(v - v^-1)`.
pub fn qint_balanced(r: i64) -> LaurentPoly {
    if r == 0 {
        return LaurentPoly::zero();
    }
    let m = r.unsigned_abs() as i32;
    let sign = if r < 0 { -1 } else { 1 };
    LaurentPoly::from_terms((0..m).map(|k| (m - 1 - 2 * k, sign)))
}

/// `[[r]]! = [[r]] [[r-1]] ... [[1]]`.
pub fn qfactorial_balanced(r: u32) -> LaurentPoly {
    let mut acc = LaurentPoly::one();
    for k in 1..=r {
        acc = &acc * &qint_balanced(k as i64);
    }
    acc
}

thread_local! {
    static BINOM_CACHE: RefCell<HashMap<(i64, u32), LaurentPoly>> = RefCell::new(HashMap::new());
}

/// Gaussian binomial `[a; b] = prod_{i=1}^b (v^{2(a-i+1)} - 1)/(v^{2i} - 1)`.
pub fn gauss_binom(a: i64, b: u32) -> LaurentPoly {
    if b == 0 {
        return LaurentPoly::one();
    }
    if let Some(hit) = BINOM_CACHE.with(|c| c.borrow().get(&(a, b)).cloned()) {
        return hit;
    }
    let value = if a >= 0 && (a as u64) < b as u64 {
        LaurentPoly::zero()
    } else {
        // [a; b] = [a; b-1] * (v^{2(a-b+1)} - 1)/(v^{2b} - 1)
        let prev = gauss_binom(a, b - 1);
        let exp = 2 * (a - b as i64 + 1);
        let num = &prev * &(LaurentPoly::v_pow(exp as i32) - LaurentPoly::one());
        let den = LaurentPoly::v_pow(2 * b as i32) - LaurentPoly::one();
        num.div_exact(&den).expect("Gaussian binomial is a Laurent polynomial")
    };
    BINOM_CACHE.with(|c| c.borrow_mut().insert((a, b), value.clone()));
    value
}

/// `[a] = [a; 1] = (v^{2a} - 1)/(v^2 - 1)`.
pub fn gauss_bracket(a: i64) -> LaurentPoly {
    gauss_binom(a, 1)
}

/// The overlined binomial `bar([a; b])`.
pub fn bar_gauss_binom(a: i64, b: u32) -> LaurentPoly {
    gauss_binom(a, b).bar()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn v(k: i32) -> LaurentPoly {
        LaurentPoly::v_pow(k)
    }

    fn random_poly(rng: &mut StdRng) -> LaurentPoly {
        let n = rng.gen_range(0..5);
        LaurentPoly::from_terms((0..n).map(|_| (rng.gen_range(-6..7), rng.gen_range(-4..5))))
    }

    #[test]
    fn addition_examples() {
        assert_eq!(v(1) + v(-1), LaurentPoly::from_terms([(1, 1), (-1, 1)]));
        let p = v(3) + LaurentPoly::constant(2);
        assert_eq!(&p + &LaurentPoly::zero(), p);
        assert_eq!((v(2) + LaurentPoly::one()) + LaurentPoly::constant(-1), v(2));
    }

    #[test]
    fn multiplication_examples() {
        let two = qint_balanced(2);
        assert_eq!((v(1) - v(-1)) * &two, v(2) - v(-2));
        assert_eq!(&two * &LaurentPoly::one(), two);
        assert_eq!(&two * &two, v(2) + LaurentPoly::constant(2) + v(-2));
    }

    #[test]
    fn bar_examples() {
        assert_eq!((v(2) + LaurentPoly::one()).bar(), v(-2) + LaurentPoly::one());
        for r in -5..=5 {
            assert!(qint_balanced(r).is_bar_invariant());
        }
        let p = v(3) - v(-1).scale(4);
        assert_eq!(p.bar().bar(), p);
    }

    #[test]
    fn balanced_integers() {
        assert_eq!(qint_balanced(1), LaurentPoly::one());
        assert_eq!(qint_balanced(2), v(1) + v(-1));
        assert_eq!(qint_balanced(-3), -(v(2) + LaurentPoly::one() + v(-2)));
        assert!(qint_balanced(0).is_zero());
    }

    #[test]
    fn gaussian_examples() {
        assert_eq!(gauss_bracket(3), v(4) + v(2) + LaurentPoly::one());
        for a in -4..6 {
            assert!(gauss_binom(a, 0).is_one());
        }
        assert_eq!(gauss_binom(2, 1), v(2) + LaurentPoly::one());
        assert!(gauss_binom(2, 3).is_zero());
    }

    #[test]
    fn negative_top_binomial() {
        // [-1; 1] = (v^-2 - 1)/(v^2 - 1) = -v^-2
        assert_eq!(gauss_binom(-1, 1), -v(-2));
        // [-a; b] = (-1)^b v^{-2ab - b(b-1)} [a+b-1; b]
        for a in 1..4i64 {
            for b in 0..4u32 {
                let bb = b as i64;
                let sign = if b % 2 == 0 { 1 } else { -1 };
                let expect = gauss_binom(a + bb - 1, b)
                    .shift((-2 * a * bb - bb * (bb - 1)) as i32)
                    .scale(sign);
                assert_eq!(gauss_binom(-a, b), expect, "a={a} b={b}");
            }
        }
    }

    #[test]
    fn bracket_vs_balanced() {
        for r in 0..=8i64 {
            let br = gauss_bracket(r);
            assert_eq!(br, qint_balanced(r).shift((r - 1) as i32));
            assert_eq!(br.bar(), br.shift((-2 * (r - 1)) as i32));
        }
    }

    #[test]
    fn binomials_have_nonnegative_coefficients() {
        for a in 0..=10i64 {
            for b in 0..=a as u32 {
                assert!(gauss_binom(a, b).all_coeffs_nonnegative());
            }
        }
    }

    #[test]
    fn bar_is_ring_involution() {
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..200 {
            let p = random_poly(&mut rng);
            let q = random_poly(&mut rng);
            assert_eq!((&p * &q).bar(), &p.bar() * &q.bar());
            assert_eq!((&p + &q).bar(), &p.bar() + &q.bar());
            assert_eq!(p.bar().bar(), p);
        }
    }

    #[test]
    fn ring_axioms_sampled() {
        let mut rng = StdRng::seed_from_u64(11);
        for _ in 0..200 {
            let p = random_poly(&mut rng);
            let q = random_poly(&mut rng);
            let r = random_poly(&mut rng);
            assert_eq!(&p * &q, &q * &p);
            assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
            assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
            assert_eq!(&(&p + &q) + &r, &p + &(&q + &r));
        }
    }

    #[test]
    fn exact_division_roundtrip_and_failure() {
        let mut rng = StdRng::seed_from_u64(3);
        for _ in 0..200 {
            let p = random_poly(&mut rng);
            let q = random_poly(&mut rng);
            if q.is_zero() {
                continue;
            }
            assert_eq!((&p * &q).div_exact(&q).unwrap(), p);
        }
        let err = (v(2) + LaurentPoly::one()).div_exact(&(v(1) + LaurentPoly::one()));
        assert_eq!(err, Err(LaurentError::InexactDivision));
        assert_eq!(
            LaurentPoly::one().div_exact(&LaurentPoly::zero()),
            Err(LaurentError::DivisionByZero)
        );
    }

    #[test]
    fn eval_examples() {
        let r = |x: i64| BigRational::from_integer(BigInt::from(x));
        assert_eq!(gauss_bracket(2).eval_q(3).unwrap(), r(4));
        assert_eq!(LaurentPoly::one().eval_q(5).unwrap(), r(1));
        assert_eq!((gauss_binom(1, 1) * gauss_bracket(3)).eval_q(3).unwrap(), r(13));
        assert_eq!(v(1).eval_q(3), Err(LaurentError::OddExponent(1)));
        let (a, b) = (v(3) + v(-2)).eval_q_lenient(3);
        assert_eq!(a, BigRational::new(BigInt::from(1), BigInt::from(3)));
        assert_eq!(b, r(3));
    }

    #[test]
    fn json_roundtrip() {
        let p = v(-2).scale(3) + v(5);
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, "[[-2,3],[5,1]]");
        let back: LaurentPoly = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
        assert!(serde_json::from_str::<LaurentPoly>("[[1,1],[0,2]]").is_err());
        assert!(serde_json::from_str::<LaurentPoly>("[[1,0]]").is_err());
    }

    #[test]
    fn display_is_readable() {
        assert_eq!((v(2) - v(-1).scale(3) + LaurentPoly::one()).to_string(), "v^2 + 1 - 3*v^-1");
        assert_eq!(LaurentPoly::zero().to_string(), "0");
    }
}
