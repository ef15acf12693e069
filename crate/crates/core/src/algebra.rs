//! Algebras `A_t` built by repeated Cayley-Dickson doubling over the rationals.
//!
//! An element of depth `t` is a vector of `2^t` rational coefficients. Basis
//! indices are bit vectors: the doubling stage `i` (parameter `gamma_i`, for
//! `i = 1..t`) owns bit `t - i`, so the newest stage is bit 0. Splitting an
//! element `x = (a1, a2)` at the top stage therefore takes `a1` from the even
//! coordinates and `a2` from the odd ones. With this layout the product of
//! two basis vectors `e_p e_q` is a multiple of `e_{p ^ q}` and the sign table
//! tiles into the aligned 2x2 blocks described in [`crate::twist`].

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{format_rational, int, Rational};

/// Which doubling formula defines the product.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Convention {
    /// `(a1, a2)(b1, b2) = (a1 b1 + g conj(b2) a2, a2 conj(b1) + b2 a1)`.
    #[default]
    Eq11,
    /// `(a1, a2)(b1, b2) = (a1 b1 + g b2 conj(a2), conj(a1) b2 + b1 a2)`.
    Eq31,
}

impl Convention {
    pub fn name(self) -> &'static str {
        match self {
            Convention::Eq11 => "eq11",
            Convention::Eq31 => "eq31",
        }
    }

    /// The other convention. `x *_{eq31} y == y *_{eq11} x` for every pair.
    pub fn opposite(self) -> Convention {
        match self {
            Convention::Eq11 => Convention::Eq31,
            Convention::Eq31 => Convention::Eq11,
        }
    }
}

impl std::str::FromStr for Convention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "eq11" | "1.1" => Ok(Convention::Eq11),
            "eq31" | "3.1" => Ok(Convention::Eq31),
            other => Err(Error::InvalidParameter(format!(
                "unknown convention {other:?}"
            ))),
        }
    }
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, PartialEq, Eq, Hash)]
struct SignatureInner {
    gammas: Vec<Rational>,
    convention: Convention,
}

/// Doubling depth, the parameters `gamma_1..gamma_t` and the product convention.
///
/// Cheap to clone; equality is structural.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AlgebraSignature(Arc<SignatureInner>);

/// Validates the parameters of `A_t = (gamma_1, ..., gamma_t / Q)`.
pub fn make_algebra(
    t: usize,
    gammas: Vec<Rational>,
    convention: Convention,
) -> Result<AlgebraSignature> {
    if gammas.len() != t {
        return Err(Error::InvalidParameter(format!(
            "expected {t} doubling parameters, got {}",
            gammas.len()
        )));
    }
    if let Some(i) = gammas.iter().position(Zero::is_zero) {
        return Err(Error::InvalidParameter(format!("gamma_{} is zero", i + 1)));
    }
    if t >= usize::BITS as usize - 1 {
        return Err(Error::InvalidParameter(format!("depth {t} is too large")));
    }
    Ok(AlgebraSignature(Arc::new(SignatureInner {
        gammas,
        convention,
    })))
}

impl AlgebraSignature {
    pub fn new(gammas: Vec<Rational>, convention: Convention) -> Result<Self> {
        make_algebra(gammas.len(), gammas, convention)
    }

    /// All parameters equal to -1: R, C, H, O, S, ... over the rationals.
    pub fn classical(t: usize, convention: Convention) -> Self {
        Self::new(vec![int(-1); t], convention).expect("-1 is a valid parameter")
    }

    pub fn depth(&self) -> usize {
        self.0.gammas.len()
    }

    pub fn dimension(&self) -> usize {
        1 << self.depth()
    }

    pub fn gammas(&self) -> &[Rational] {
        &self.0.gammas
    }

    /// `gamma_i` for `i` in `1..=t`.
    pub fn gamma(&self, stage: usize) -> &Rational {
        &self.0.gammas[stage - 1]
    }

    pub fn convention(&self) -> Convention {
        self.0.convention
    }

    pub fn all_minus_one(&self) -> bool {
        let m1 = int(-1);
        self.0.gammas.iter().all(|g| *g == m1)
    }

    pub fn all_integral(&self) -> bool {
        self.0.gammas.iter().all(|g| g.is_integer())
    }

    /// Bit of a basis index that belongs to doubling stage `stage` (1-based).
    pub fn stage_bit(&self, stage: usize) -> usize {
        1 << (self.depth() - stage)
    }
}

/// An element of `A_t`: `2^t` exact coefficients, index 0 is the unit.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Element {
    signature: AlgebraSignature,
    coeffs: Vec<Rational>,
}

impl Element {
    pub fn new(signature: &AlgebraSignature, coeffs: Vec<Rational>) -> Result<Self> {
        if coeffs.len() != signature.dimension() {
            return Err(Error::InvalidParameter(format!(
                "expected {} coefficients, got {}",
                signature.dimension(),
                coeffs.len()
            )));
        }
        Ok(Element {
            signature: signature.clone(),
            coeffs,
        })
    }

    pub fn from_ints(signature: &AlgebraSignature, coeffs: &[i64]) -> Result<Self> {
        Self::new(signature, coeffs.iter().map(|&c| int(c)).collect())
    }

    pub fn zero(signature: &AlgebraSignature) -> Self {
        Element {
            signature: signature.clone(),
            coeffs: vec![Rational::zero(); signature.dimension()],
        }
    }

    pub fn scalar(signature: &AlgebraSignature, c: Rational) -> Self {
        let mut x = Self::zero(signature);
        x.coeffs[0] = c;
        x
    }

    pub fn one(signature: &AlgebraSignature) -> Self {
        Self::scalar(signature, Rational::one())
    }

    /// The basis vector `e_p`.
    pub fn basis(signature: &AlgebraSignature, p: usize) -> Result<Self> {
        if p >= signature.dimension() {
            return Err(Error::IndexOutOfRange {
                index: p as u64,
                dimension: signature.dimension() as u64,
            });
        }
        let mut x = Self::zero(signature);
        x.coeffs[p] = Rational::one();
        Ok(x)
    }

    pub fn signature(&self) -> &AlgebraSignature {
        &self.signature
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Rational> {
        self.coeffs
    }

    pub fn coeff(&self, p: usize) -> &Rational {
        &self.coeffs[p]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// `c·1` if every non-unit coordinate vanishes.
    pub fn as_scalar(&self) -> Option<&Rational> {
        self.coeffs[1..]
            .iter()
            .all(Zero::is_zero)
            .then(|| &self.coeffs[0])
    }

    fn check(&self, other: &Element) -> Result<()> {
        if self.signature == other.signature {
            Ok(())
        } else {
            Err(Error::SignatureMismatch)
        }
    }

    pub fn try_add(&self, other: &Element) -> Result<Element> {
        self.check(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Ok(self.with_coeffs(coeffs))
    }

    pub fn try_sub(&self, other: &Element) -> Result<Element> {
        self.check(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        Ok(self.with_coeffs(coeffs))
    }

    pub fn scalar_mul(&self, c: &Rational) -> Element {
        self.with_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// The doubling product, by recursion on the depth.
    pub fn try_mul(&self, other: &Element) -> Result<Element> {
        self.check(other)?;
        let coeffs = mul_rec(
            &self.coeffs,
            &other.coeffs,
            self.signature.gammas(),
            self.signature.convention(),
        );
        Ok(self.with_coeffs(coeffs))
    }

    /// `(a1, a2) -> (conj(a1), -a2)`, which negates every non-unit coordinate.
    pub fn conjugate(&self) -> Element {
        let mut coeffs = self.coeffs.clone();
        for c in coeffs.iter_mut().skip(1) {
            *c = -&*c;
        }
        self.with_coeffs(coeffs)
    }

    /// `t(x)` with `x + conj(x) = t(x)·1`.
    pub fn trace(&self) -> Rational {
        &self.coeffs[0] + &self.coeffs[0]
    }

    /// `n(x) = n(a1) - gamma_t n(a2)`, evaluated recursively.
    pub fn norm(&self) -> Rational {
        norm_rec(&self.coeffs, self.signature.gammas())
    }

    pub fn inverse(&self) -> Result<Element> {
        let n = self.norm();
        if n.is_zero() {
            return Err(Error::NotInvertible);
        }
        Ok(self.conjugate().scalar_mul(&n.recip()))
    }

    /// Whether `x² - t(x) x + n(x)·1 = 0`.
    pub fn quadratic_check(&self) -> bool {
        let sq = self.try_mul(self).expect("same signature");
        let rhs = self
            .scalar_mul(&self.trace())
            .try_sub(&Element::scalar(&self.signature, self.norm()))
            .expect("same signature");
        sq == rhs
    }

    /// Left-nested power `x^k = x^{k-1} x`, with `x^0 = 1`.
    pub fn pow(&self, k: u32) -> Element {
        let mut acc = Element::one(&self.signature);
        for _ in 0..k {
            acc = acc.try_mul(self).expect("same signature");
        }
        acc
    }

    fn with_coeffs(&self, coeffs: Vec<Rational>) -> Element {
        Element {
            signature: self.signature.clone(),
            coeffs,
        }
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (p, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            if p == 0 {
                write!(f, "{c}")?;
            } else {
                write!(f, "{c}*e{p}")?;
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

macro_rules! panicking_op {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&Element> for &Element {
            type Output = Element;

            /// Panics if the operands have different signatures.
            fn $method(self, rhs: &Element) -> Element {
                self.$checked(rhs).expect("operands must share a signature")
            }
        }
    };
}

panicking_op!(Add, add, try_add);
panicking_op!(Sub, sub, try_sub);
panicking_op!(Mul, mul, try_mul);

impl Neg for &Element {
    type Output = Element;

    fn neg(self) -> Element {
        self.scalar_mul(&int(-1))
    }
}

/// Coefficients as `num/den` strings.
pub fn format_coeffs(x: &Element) -> Vec<String> {
    x.coeffs().iter().map(format_rational).collect()
}

fn split(x: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let lo = x.iter().step_by(2).cloned().collect();
    let hi = x.iter().skip(1).step_by(2).cloned().collect();
    (lo, hi)
}

fn join(lo: Vec<Rational>, hi: Vec<Rational>) -> Vec<Rational> {
    lo.into_iter().zip(hi).flat_map(|(a, b)| [a, b]).collect()
}

fn conj(x: &[Rational]) -> Vec<Rational> {
    x.iter()
        .enumerate()
        .map(|(i, c)| if i == 0 { c.clone() } else { -c })
        .collect()
}

fn add_vec(x: Vec<Rational>, y: Vec<Rational>) -> Vec<Rational> {
    x.into_iter().zip(y).map(|(a, b)| a + b).collect()
}

fn mul_rec(x: &[Rational], y: &[Rational], gammas: &[Rational], conv: Convention) -> Vec<Rational> {
    if x.len() == 1 {
        return vec![&x[0] * &y[0]];
    }
    // Products of sparse operands (basis vectors) collapse quickly.
    if x.iter().all(Zero::is_zero) || y.iter().all(Zero::is_zero) {
        return vec![Rational::zero(); x.len()];
    }
    let (gamma, rest) = gammas.split_last().expect("depth matches length");
    let (a1, a2) = split(x);
    let (b1, b2) = split(y);
    let m = |u: &[Rational], v: &[Rational]| mul_rec(u, v, rest, conv);
    let (c1, c2) = match conv {
        Convention::Eq11 => (
            add_vec(m(&a1, &b1), scale(m(&conj(&b2), &a2), gamma)),
            add_vec(m(&a2, &conj(&b1)), m(&b2, &a1)),
        ),
        Convention::Eq31 => (
            add_vec(m(&a1, &b1), scale(m(&b2, &conj(&a2)), gamma)),
            add_vec(m(&conj(&a1), &b2), m(&b1, &a2)),
        ),
    };
    join(c1, c2)
}

fn scale(x: Vec<Rational>, c: &Rational) -> Vec<Rational> {
    x.into_iter().map(|a| a * c).collect()
}

fn norm_rec(x: &[Rational], gammas: &[Rational]) -> Rational {
    match gammas.split_last() {
        None => &x[0] * &x[0],
        Some((gamma, rest)) => {
            let (a1, a2) = split(x);
            norm_rec(&a1, rest) - gamma * norm_rec(&a2, rest)
        }
    }
}

/// Searches elements with coefficients in `{-1, 0, 1}` and at most
/// `max_weight` nonzero coordinates for a pair `x, y != 0` with `xy = 0`.
///
/// Candidates are visited by increasing support size, then index order.
pub fn find_zero_divisor(
    signature: &AlgebraSignature,
    max_weight: usize,
) -> Option<(Element, Element)> {
    let dim = signature.dimension();
    let mut candidates = Vec::new();
    for w in 1..=max_weight.min(dim) {
        for support in combinations(dim, w) {
            for signs in 0..(1u32 << (w - 1)) {
                // first coordinate fixed to +1; negation does not change xy = 0
                let mut coeffs = vec![Rational::zero(); dim];
                for (k, &p) in support.iter().enumerate() {
                    let neg = k > 0 && signs >> (k - 1) & 1 == 1;
                    coeffs[p] = int(if neg { -1 } else { 1 });
                }
                candidates.push(Element::new(signature, coeffs).expect("dimension"));
            }
        }
    }
    for x in &candidates {
        for y in &candidates {
            if x.try_mul(y).expect("same signature").is_zero() {
                return Some((x.clone(), y.clone()));
            }
        }
    }
    None
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    go(0, n, k, &mut cur, &mut out);
    out
}
