//! Fibonacci and Horadam sequences, Fibonacci quaternions in `H(alpha1, alpha2)`
//! and the sign criterion for their norms.
//!
//! `H(alpha1, alpha2)` is realized as the depth-2 doubling algebra with
//! parameters `(-alpha2, -alpha1)` and the `Eq11` product. With the crate's
//! index layout that puts the norm in the diagonal form
//! `x0² + alpha1 x1² + alpha2 x2² + alpha1 alpha2 x3²`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::algebra::{make_algebra, AlgebraSignature, Convention, Element};
use crate::error::{Error, Result};
use crate::rational::{int, ratio, sign_of, Rational};

/// Default search horizon for [`invertibility_threshold`].
pub const DEFAULT_THRESHOLD_NMAX: u64 = 200;

/// Memoized Fibonacci numbers. Not shared between threads; each owner keeps
/// its own memo.
#[derive(Debug, Clone)]
pub struct FibCache {
    memo: Vec<BigInt>,
}

impl Default for FibCache {
    fn default() -> Self {
        FibCache {
            memo: vec![BigInt::zero(), BigInt::one()],
        }
    }
}

impl FibCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&mut self, n: u64) -> &BigInt {
        let n = n as usize;
        while self.memo.len() <= n {
            let k = self.memo.len();
            let next = &self.memo[k - 1] + &self.memo[k - 2];
            self.memo.push(next);
        }
        &self.memo[n]
    }
}

/// `f_0 = 0, f_1 = 1, f_n = f_{n-1} + f_{n-2}`.
pub fn fib(n: u64) -> BigInt {
    let (mut a, mut b) = (BigInt::zero(), BigInt::one());
    for _ in 0..n {
        let next = &a + &b;
        a = std::mem::replace(&mut b, next);
    }
    a
}

/// Initial values of a Horadam sequence: `h_0 = p`, `h_1 = q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HoradamParams {
    pub p: Rational,
    pub q: Rational,
}

impl HoradamParams {
    pub fn new(p: Rational, q: Rational) -> Self {
        HoradamParams { p, q }
    }
}

/// `h_n` with `h_0 = p`, `h_1 = q`, `h_n = h_{n-1} + h_{n-2}`.
pub fn horadam(n: u64, params: &HoradamParams) -> Rational {
    let (mut a, mut b) = (params.p.clone(), params.q.clone());
    for _ in 0..n {
        let next = &a + &b;
        a = std::mem::replace(&mut b, next);
    }
    a
}

/// `u + v·a` in `Q(a)`, `a = (1 + √5) / 2`, so `a² = a + 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GoldenNumber {
    pub u: Rational,
    pub v: Rational,
}

impl GoldenNumber {
    pub fn new(u: Rational, v: Rational) -> Self {
        GoldenNumber { u, v }
    }

    pub fn rational(u: Rational) -> Self {
        GoldenNumber::new(u, Rational::zero())
    }

    /// The golden ratio `a` itself.
    pub fn golden() -> Self {
        GoldenNumber::new(Rational::zero(), Rational::one())
    }

    pub fn one() -> Self {
        GoldenNumber::rational(Rational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.u.is_zero() && self.v.is_zero()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        GoldenNumber::new(&self.u * c, &self.v * c)
    }

    /// Image under `√5 -> -√5`, i.e. `a -> b = 1 - a`.
    pub fn galois_conjugate(&self) -> Self {
        GoldenNumber::new(&self.u + &self.v, -&self.v)
    }

    pub fn pow(&self, mut n: u64) -> Self {
        let mut base = self.clone();
        let mut acc = GoldenNumber::one();
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            n >>= 1;
        }
        acc
    }

    /// Exact sign. Since `a` is irrational, `u + v a = 0` only when both
    /// parts vanish. For `v > 0` the value is negative iff `u < 0` and
    /// `u² + uv - v² > 0` (i.e. `-u/v` exceeds the positive root of
    /// `x² - x - 1`).
    pub fn sign(&self) -> i8 {
        if self.v.is_zero() {
            return sign_of(&self.u);
        }
        let flip = self.v.is_negative();
        let (u, v) = if flip {
            (-&self.u, -&self.v)
        } else {
            (self.u.clone(), self.v.clone())
        };
        let s = if u.is_negative() && (&u * &u + &u * &v - &v * &v).is_positive() {
            -1
        } else {
            1
        };
        if flip {
            -s
        } else {
            s
        }
    }
}

impl Add for &GoldenNumber {
    type Output = GoldenNumber;

    fn add(self, rhs: &GoldenNumber) -> GoldenNumber {
        GoldenNumber::new(&self.u + &rhs.u, &self.v + &rhs.v)
    }
}

impl Sub for &GoldenNumber {
    type Output = GoldenNumber;

    fn sub(self, rhs: &GoldenNumber) -> GoldenNumber {
        GoldenNumber::new(&self.u - &rhs.u, &self.v - &rhs.v)
    }
}

impl Mul for &GoldenNumber {
    type Output = GoldenNumber;

    fn mul(self, rhs: &GoldenNumber) -> GoldenNumber {
        let vv = &self.v * &rhs.v;
        GoldenNumber::new(
            &self.u * &rhs.u + &vv,
            &self.u * &rhs.v + &rhs.u * &self.v + vv,
        )
    }
}

impl Neg for &GoldenNumber {
    type Output = GoldenNumber;

    fn neg(self) -> GoldenNumber {
        GoldenNumber::new(-&self.u, -&self.v)
    }
}

impl fmt::Display for GoldenNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + ({})a", self.u, self.v)
    }
}

/// `alpha1, alpha2` of `H(alpha1, alpha2)`. Both must be nonzero to build
/// the algebra; [`energy`] accepts any values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuaternionParams {
    pub alpha1: Rational,
    pub alpha2: Rational,
}

impl QuaternionParams {
    pub fn new(alpha1: Rational, alpha2: Rational) -> Self {
        QuaternionParams { alpha1, alpha2 }
    }

    pub fn from_ints(alpha1: i64, alpha2: i64) -> Self {
        Self::new(int(alpha1), int(alpha2))
    }

    /// The doubling signature realizing `H(alpha1, alpha2)`.
    pub fn signature(&self) -> Result<AlgebraSignature> {
        if self.alpha1.is_zero() || self.alpha2.is_zero() {
            return Err(Error::InvalidParameter(
                "quaternion parameters must be nonzero".into(),
            ));
        }
        make_algebra(2, vec![-&self.alpha2, -&self.alpha1], Convention::Eq11)
    }
}

/// `F_n = f_n + f_{n+1} e_1 + f_{n+2} e_2 + f_{n+3} e_3`.
pub fn fibonacci_quaternion(n: u64, params: &QuaternionParams) -> Result<Element> {
    let sig = params.signature()?;
    let coeffs = (0..4).map(|k| Rational::from_integer(fib(n + k))).collect();
    Element::new(&sig, coeffs)
}

/// `n(F_n)` computed by the algebra's norm.
pub fn fib_norm_direct(n: u64, params: &QuaternionParams) -> Result<Rational> {
    Ok(fibonacci_quaternion(n, params)?.norm())
}

/// `h_{2n+2}^{1+2α2, 3α2} + (α1 - 1) h_{2n+3}^{1+2α2, α2} - 2(α1 - 1)(1 + α2) f_n f_{n+1}`.
pub fn fib_norm_formula(n: u64, params: &QuaternionParams) -> Rational {
    let QuaternionParams { alpha1, alpha2 } = params;
    let one = Rational::one();
    let two = int(2);
    let base = &one + &two * alpha2;
    let h1 = horadam(
        2 * n + 2,
        &HoradamParams::new(base.clone(), int(3) * alpha2),
    );
    let h2 = horadam(2 * n + 3, &HoradamParams::new(base, alpha2.clone()));
    let a1m = alpha1 - &one;
    let ff = Rational::from_integer(fib(n) * fib(n + 1));
    h1 + &a1m * h2 - two * &a1m * (&one + alpha2) * ff
}

/// `E(α1, α2) = (1/5)[1 + α1 + 2α2 + 5α1α2 + a(α1 + 3α2 + 8α1α2)]`; its sign
/// is the eventual sign of `n(F_n)`.
pub fn energy(params: &QuaternionParams) -> GoldenNumber {
    let QuaternionParams { alpha1, alpha2 } = params;
    let a12 = alpha1 * alpha2;
    let u = Rational::one() + alpha1 + int(2) * alpha2 + int(5) * &a12;
    let v = alpha1 + int(3) * alpha2 + int(8) * &a12;
    GoldenNumber::new(u, v).scale(&ratio(1, 5))
}

/// Least `n0 <= n_max` such that `n(F_n)` is nonzero with the sign of
/// `E(α1, α2)` for every `n` in `n0..=n_max`, or `None` if `n(F_{n_max})`
/// itself disagrees.
pub fn invertibility_threshold(params: &QuaternionParams, n_max: u64) -> Result<Option<u64>> {
    let e = energy(params).sign();
    let signs = (0..=n_max)
        .map(|n| fib_norm_direct(n, params).map(|v| sign_of(&v)))
        .collect::<Result<Vec<_>>>()?;
    stabilization_point(e, &signs)
}

/// Start of the longest suffix of `signs` equal to `target`.
fn stabilization_point(target: i8, signs: &[i8]) -> Result<Option<u64>> {
    if target == 0 {
        return Err(Error::CriterionInapplicable);
    }
    let tail = signs.iter().rev().take_while(|&&s| s == target).count();
    Ok((tail > 0).then(|| (signs.len() - tail) as u64))
}

/// Exact check of `f_n = (aⁿ - bⁿ)/√5` in `Q(a)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinetReport {
    pub n: u64,
    pub fib: BigInt,
    /// `aⁿ = u + v a`, computed by repeated squaring in `Q(a)`.
    pub power: GoldenNumber,
    /// `(aⁿ - bⁿ)/√5`.
    pub binet_value: Rational,
    pub holds: bool,
}

/// Computes `aⁿ = u + v a` in `Q(a)`. Since `bⁿ = u + v b` and `a - b = √5`,
/// `(aⁿ - bⁿ)/√5 = v`, which must equal `f_n`; also `u = f_{n-1}`.
pub fn binet_residual(n: u64) -> BinetReport {
    let power = GoldenNumber::golden().pow(n);
    let f = fib(n);
    // f_{-1} = 1
    let prev = if n == 0 { BigInt::one() } else { fib(n - 1) };
    // aⁿ - bⁿ must be a rational multiple of √5 = 2a - 1
    let diff = &power - &power.galois_conjugate();
    let binet_value = &diff.v / int(2);
    let holds = diff.u == -&binet_value
        && binet_value == Rational::from_integer(f.clone())
        && power.u == Rational::from_integer(prev);
    BinetReport {
        n,
        fib: f,
        power,
        binet_value,
        holds,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fib_values() {
        assert_eq!(fib(0), BigInt::zero());
        assert_eq!(fib(1), BigInt::one());
        assert_eq!(fib(10), BigInt::from(55));
        let mut cache = FibCache::new();
        assert_eq!(cache.get(10), &BigInt::from(55));
        assert_eq!(cache.get(90), &fib(90));
        assert_eq!(cache.get(3), &BigInt::from(2));
    }

    #[test]
    fn horadam_values() {
        for n in 0..20 {
            let f = Rational::from_integer(fib(n));
            assert_eq!(horadam(n, &HoradamParams::new(int(0), int(1))), f);
            assert_eq!(
                horadam(n, &HoradamParams::new(int(1), int(1))),
                Rational::from_integer(fib(n + 1))
            );
        }
        // 2, 3, 5, 8, 13
        assert_eq!(horadam(4, &HoradamParams::new(int(2), int(3))), int(13));
    }

    #[test]
    fn quaternion_coefficients_and_conjugate() {
        let p = QuaternionParams::from_ints(1, 1);
        let f0 = fibonacci_quaternion(0, &p).unwrap();
        assert_eq!(f0.coeffs(), &[int(0), int(1), int(1), int(2)]);
        let f1 = fibonacci_quaternion(1, &p).unwrap();
        assert_eq!(f1.coeffs(), &[int(1), int(1), int(2), int(3)]);
        let f5 = fibonacci_quaternion(5, &p).unwrap();
        assert_eq!(
            f5.conjugate().coeffs(),
            &[int(5), int(-8), int(-13), int(-21)]
        );
        assert!(fibonacci_quaternion(0, &QuaternionParams::from_ints(0, 1)).is_err());
    }

    #[test]
    fn direct_norm_matches_quadratic_form() {
        let p = QuaternionParams::from_ints(1, 1);
        assert_eq!(fib_norm_direct(0, &p).unwrap(), int(6));
        assert_eq!(fib_norm_direct(1, &p).unwrap(), int(15));
        // f2² + 2 f3² + 3 f4² + 6 f5² = 1 + 8 + 27 + 150
        let q = QuaternionParams::from_ints(2, 3);
        assert_eq!(fib_norm_direct(2, &q).unwrap(), int(186));
        // and F F̄ is that scalar
        let f = fibonacci_quaternion(2, &q).unwrap();
        assert_eq!(
            &f * &f.conjugate(),
            Element::scalar(f.signature(), int(186))
        );
    }

    #[test]
    fn formula_at_unit_parameters() {
        let p = QuaternionParams::from_ints(1, 1);
        assert_eq!(fib_norm_formula(0, &p), int(6));
        for n in 0..=20 {
            assert_eq!(
                fib_norm_formula(n, &p),
                Rational::from_integer(3 * fib(2 * n + 3))
            );
        }
    }

    #[test]
    fn energy_values() {
        let e = energy(&QuaternionParams::from_ints(1, 1));
        assert_eq!(e, GoldenNumber::new(ratio(9, 5), ratio(12, 5)));
        assert_eq!(e.sign(), 1);
        let e = energy(&QuaternionParams::from_ints(0, 0));
        assert_eq!(e, GoldenNumber::rational(ratio(1, 5)));
        assert_eq!(e.sign(), 1);
        let e = energy(&QuaternionParams::from_ints(-1, 0));
        assert_eq!(e, GoldenNumber::new(int(0), ratio(-1, 5)));
        assert_eq!(e.sign(), -1);
    }

    #[test]
    fn energy_matches_power_expansion() {
        // (1 + α1 a² + α2 a⁴ + α1α2 a⁶) / 5
        let a = GoldenNumber::golden();
        for (x, y) in [(1, 1), (2, -3), (-1, -1), (5, 7), (-4, 2)] {
            let p = QuaternionParams::from_ints(x, y);
            let expect = [
                GoldenNumber::one(),
                a.pow(2).scale(&int(x)),
                a.pow(4).scale(&int(y)),
                a.pow(6).scale(&int(x * y)),
            ]
            .iter()
            .fold(GoldenNumber::rational(int(0)), |acc, t| &acc + t)
            .scale(&ratio(1, 5));
            assert_eq!(energy(&p), expect);
        }
    }

    #[test]
    fn golden_sign() {
        let g = |u: i64, v: i64| GoldenNumber::new(int(u), int(v)).sign();
        assert_eq!(g(0, 0), 0);
        assert_eq!(g(-1, 1), 1); // a - 1 = 0.618
        assert_eq!(g(-2, 1), -1); // a - 2
        assert_eq!(g(1, -1), -1); // 1 - a
        assert_eq!(g(2, -1), 1);
        assert_eq!(g(3, 0), 1);
        assert_eq!(g(-13, 8), -1); // 8a - 13 = -0.055
        assert_eq!(g(-21, 13), 1); // 13a - 21 = 0.034
    }

    #[test]
    fn thresholds() {
        assert_eq!(
            invertibility_threshold(&QuaternionParams::from_ints(1, 1), 50).unwrap(),
            Some(0)
        );
        let split = QuaternionParams::from_ints(-1, -1);
        assert_eq!(energy(&split).sign(), 1);
        let n0 = invertibility_threshold(&split, 200).unwrap().unwrap();
        assert!(n0 <= 200);
    }

    #[test]
    fn energy_never_vanishes_on_rationals() {
        // u = v = 0 forces alpha2² + 7 alpha2 + 1 = 0, which has no rational root
        for a in -12..=12 {
            for b in -12..=12 {
                for d in 1..=4 {
                    let p = QuaternionParams::new(ratio(a, d), ratio(b, 5 - d));
                    assert!(!energy(&p).is_zero());
                }
            }
        }
    }

    #[test]
    fn zero_energy_is_inapplicable() {
        assert_eq!(
            stabilization_point(0, &[1, 1]),
            Err(Error::CriterionInapplicable)
        );
        assert_eq!(stabilization_point(1, &[-1, 1, -1, 1, 1]), Ok(Some(3)));
        assert_eq!(stabilization_point(1, &[1, 1]), Ok(Some(0)));
        assert_eq!(stabilization_point(-1, &[1, 1]), Ok(None));
    }

    #[test]
    fn binet() {
        for n in [0, 1, 2, 10, 40, 150] {
            let rep = binet_residual(n);
            assert!(rep.holds, "n = {n}");
        }
    }
}
