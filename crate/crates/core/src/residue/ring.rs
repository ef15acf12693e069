use std::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::integers::IntegerElement;
use crate::algebra::{AlgebraSignature, Convention};
use crate::error::{Error, Result};

/// An integer element `w` of `A_t[Z]` with its quadratic data
/// `w² - q w + m = 0`, `q = t(w)`, `m = n(w)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WGenerator {
    pub w: IntegerElement,
    pub q: i64,
    pub m: i64,
}

impl WGenerator {
    /// Reads `q` and `m` off `w` and checks the quadratic relation by
    /// multiplying in the algebra.
    pub fn from_element(w: IntegerElement) -> Result<Self> {
        let to_i64 = |v: BigInt| v.to_i64().ok_or(Error::Overflow("generator data"));
        let q = to_i64(w.trace())?;
        let m = to_i64(w.norm())?;
        if m == 0 {
            return Err(Error::DegenerateGenerator("n(w) = 0".into()));
        }
        if !w.satisfies_quadratic(&BigInt::from(q), &BigInt::from(m)) {
            return Err(Error::DegenerateGenerator(format!(
                "w does not satisfy x^2 - {q}x + {m} = 0"
            )));
        }
        Ok(WGenerator { w, q, m })
    }

    pub fn ring(&self) -> QuadraticRing {
        QuadraticRing::new(self.q, self.m)
    }

    /// `a + b w` as an element of the ambient algebra.
    pub fn embed(&self, x: UElement) -> IntegerElement {
        let sig = self.w.signature();
        let one = IntegerElement::new(
            sig,
            (0..sig.dimension())
                .map(|p| BigInt::from((p == 0) as i64))
                .collect(),
        )
        .expect("integral signature");
        one.scalar_mul(&x.a.into())
            .try_add(&self.w.scalar_mul(&x.b.into()))
            .expect("same signature")
    }
}

/// `w = c0 + c1 e_i + c2 e_j + c3 e_k` in the depth-`t` algebra with all
/// parameters -1.
pub fn make_w(t: usize, basis_choice: [usize; 3], coeffs: [i64; 4]) -> Result<WGenerator> {
    let sig = AlgebraSignature::classical(t, Convention::Eq11);
    let dim = sig.dimension();
    let [i, j, k] = basis_choice;
    if i == j || j == k || i == k || basis_choice.iter().any(|&p| p == 0 || p >= dim) {
        return Err(Error::InvalidParameter(format!(
            "need three distinct indices in 1..{dim}, got {basis_choice:?}"
        )));
    }
    let mut c = vec![0i64; dim];
    c[0] = coeffs[0];
    c[i] = coeffs[1];
    c[j] = coeffs[2];
    c[k] = coeffs[3];
    WGenerator::from_element(IntegerElement::from_ints(&sig, &c)?)
}

/// `a + b w`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UElement {
    pub a: i64,
    pub b: i64,
}

impl UElement {
    pub const ZERO: UElement = UElement { a: 0, b: 0 };
    pub const ONE: UElement = UElement { a: 1, b: 0 };
    pub const W: UElement = UElement { a: 0, b: 1 };

    pub const fn new(a: i64, b: i64) -> Self {
        UElement { a, b }
    }

    pub fn is_zero(self) -> bool {
        self.a == 0 && self.b == 0
    }
}

impl From<i64> for UElement {
    fn from(a: i64) -> Self {
        UElement { a, b: 0 }
    }
}

/// Written like `-3+w`, `1-w`, `2w`, `0`.
impl fmt::Display for UElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w = match self.b {
            0 => String::new(),
            1 => "w".to_string(),
            -1 => "-w".to_string(),
            b => format!("{b}w"),
        };
        match (self.a, self.b) {
            (a, 0) => write!(f, "{a}"),
            (0, _) => f.write_str(&w),
            (a, b) if b > 0 => write!(f, "{a}+{w}"),
            (a, _) => write!(f, "{a}{w}"),
        }
    }
}

impl std::str::FromStr for UElement {
    type Err = Error;

    /// Parses `a,b`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParameter(format!("expected a,b but got {s:?}"));
        let (a, b) = s.split_once(',').ok_or_else(bad)?;
        Ok(UElement::new(
            a.trim().parse().map_err(|_| bad())?,
            b.trim().parse().map_err(|_| bad())?,
        ))
    }
}

fn narrow(v: i128, what: &'static str) -> Result<i64> {
    i64::try_from(v).map_err(|_| Error::Overflow(what))
}

/// Rational `num/den` rounded to the nearest integer, halves away from zero.
fn round_div(num: i128, den: i128) -> i128 {
    let (num, den) = if den < 0 { (-num, -den) } else { (num, den) };
    let twice = 2 * num.abs() + den;
    let r = twice / (2 * den);
    if num < 0 {
        -r
    } else {
        r
    }
}

/// `Z[w]` with `w² = q w - m`: commutative and associative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QuadraticRing {
    pub q: i64,
    pub m: i64,
}

impl QuadraticRing {
    pub fn new(q: i64, m: i64) -> Self {
        QuadraticRing { q, m }
    }

    /// `q² - 4m`; negative exactly when the norm form is positive definite.
    pub fn discriminant(&self) -> i128 {
        let q = self.q as i128;
        q * q - 4 * self.m as i128
    }

    pub fn is_positive_definite(&self) -> bool {
        self.discriminant() < 0
    }

    pub fn add(&self, x: UElement, y: UElement) -> Result<UElement> {
        Ok(UElement::new(
            x.a.checked_add(y.a).ok_or(Error::Overflow("add"))?,
            x.b.checked_add(y.b).ok_or(Error::Overflow("add"))?,
        ))
    }

    pub fn sub(&self, x: UElement, y: UElement) -> Result<UElement> {
        Ok(UElement::new(
            x.a.checked_sub(y.a).ok_or(Error::Overflow("sub"))?,
            x.b.checked_sub(y.b).ok_or(Error::Overflow("sub"))?,
        ))
    }

    /// `(a + bw)(c + dw) = (ac - bd m) + (ad + bc + bd q) w`.
    pub fn mul(&self, x: UElement, y: UElement) -> Result<UElement> {
        let (a, b, c, d) = (x.a as i128, x.b as i128, y.a as i128, y.b as i128);
        let (q, m) = (self.q as i128, self.m as i128);
        let ovf = Error::Overflow("mul");
        let bd = b.checked_mul(d).ok_or(ovf.clone())?;
        let re = a
            .checked_mul(c)
            .and_then(|ac| bd.checked_mul(m).and_then(|t| ac.checked_sub(t)))
            .ok_or(ovf.clone())?;
        let im = a
            .checked_mul(d)
            .and_then(|ad| b.checked_mul(c).and_then(|bc| ad.checked_add(bc)))
            .and_then(|s| bd.checked_mul(q).and_then(|t| s.checked_add(t)))
            .ok_or(ovf)?;
        Ok(UElement::new(narrow(re, "mul")?, narrow(im, "mul")?))
    }

    /// `conj(a + bw) = (a + bq) - bw`, since `conj(w) = q - w`.
    pub fn conj(&self, x: UElement) -> Result<UElement> {
        let a = x.a as i128 + x.b as i128 * self.q as i128;
        Ok(UElement::new(
            narrow(a, "conj")?,
            x.b.checked_neg().ok_or(Error::Overflow("conj"))?,
        ))
    }

    /// `n(a + bw) = a² + q ab + m b²`.
    pub fn norm(&self, x: UElement) -> Result<i128> {
        let (a, b) = (x.a as i128, x.b as i128);
        let ovf = || Error::Overflow("norm");
        let qab = (self.q as i128).checked_mul(a * b).ok_or_else(ovf)?;
        let mbb = (self.m as i128).checked_mul(b * b).ok_or_else(ovf)?;
        (a * a)
            .checked_add(qab)
            .and_then(|s| s.checked_add(mbb))
            .ok_or_else(ovf)
    }

    /// `n(x)` is a rational prime.
    pub fn is_prime(&self, x: UElement) -> bool {
        matches!(self.norm(x), Ok(n) if n > 0 && is_prime(n as u128))
    }

    /// Remainder `v = x - [x conj(y) / n(y)] y`, each coordinate of the
    /// quotient in the basis `(1, w)` rounded to the nearest integer (halves
    /// away from zero). When that leaves `n(v) >= n(y)` the eight neighbouring
    /// quotients are tried as well and the remainder of least norm is kept.
    ///
    /// `x - v` is always a multiple of `y`. The bound `n(v) < n(y)` is reached
    /// whenever the lattice `Z[w]` permits it; in `Z[w]` with
    /// `(q, m) = (2, 4)` (`w = 1 + √-3`) the quotient `w / 2` is a deep hole
    /// and the best remainder has `n(v) = n(y)`.
    pub fn modulo(&self, x: UElement, y: UElement) -> Result<UElement> {
        let n = self.norm(y)?;
        if n == 0 {
            return Err(Error::DivisionByZero);
        }
        let num = self.mul(x, self.conj(y)?)?;
        let za = round_div(num.a as i128, n);
        let zb = round_div(num.b as i128, n);
        let remainder = |da: i128, db: i128| -> Result<(UElement, i128)> {
            let z = UElement::new(narrow(za + da, "modulo")?, narrow(zb + db, "modulo")?);
            let v = self.sub(x, self.mul(z, y)?)?;
            Ok((v, self.norm(v)?.abs()))
        };
        let (v, nv) = remainder(0, 0)?;
        if nv < n.abs() {
            return Ok(v);
        }
        let mut best = (v, nv);
        for da in -1..=1 {
            for db in -1..=1 {
                if (da, db) == (0, 0) {
                    continue;
                }
                let cand = remainder(da, db)?;
                if cand.1 < best.1 {
                    best = cand;
                }
            }
        }
        log::debug!(
            "nearest-quotient remainder {v} had norm {nv} >= {n}; neighbour search gave {} (norm {})",
            best.0,
            best.1
        );
        Ok(best.0)
    }
}

/// Trial division.
pub fn is_prime(n: u128) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u128;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}
