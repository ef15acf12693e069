use std::fmt;

use num_bigint::BigInt;
use num_integer::Roots;
use num_traits::Zero;

use crate::algebra::{AlgebraSignature, Convention, Element};
use crate::error::{Error, Result};
use crate::rational::Rational;

/// An element of `A_t[Z]`: integer coefficients in an algebra with integer
/// parameters, so products stay integral.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntegerElement {
    signature: AlgebraSignature,
    coeffs: Vec<BigInt>,
}

impl IntegerElement {
    pub fn new(signature: &AlgebraSignature, coeffs: Vec<BigInt>) -> Result<Self> {
        if !signature.all_integral() {
            return Err(Error::InvalidParameter(
                "integer elements need integer doubling parameters".into(),
            ));
        }
        if coeffs.len() != signature.dimension() {
            return Err(Error::InvalidParameter(format!(
                "expected {} coefficients, got {}",
                signature.dimension(),
                coeffs.len()
            )));
        }
        Ok(IntegerElement {
            signature: signature.clone(),
            coeffs,
        })
    }

    pub fn from_ints(signature: &AlgebraSignature, coeffs: &[i64]) -> Result<Self> {
        Self::new(signature, coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// Fails unless every coefficient is an integer.
    pub fn from_element(x: &Element) -> Result<Self> {
        let coeffs = x
            .coeffs()
            .iter()
            .map(|c| {
                c.is_integer().then(|| c.to_integer()).ok_or_else(|| {
                    Error::InvalidParameter(format!("coefficient {c} is not an integer"))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(x.signature(), coeffs)
    }

    pub fn to_element(&self) -> Element {
        Element::new(
            &self.signature,
            self.coeffs
                .iter()
                .cloned()
                .map(Rational::from_integer)
                .collect(),
        )
        .expect("dimension checked on construction")
    }

    pub fn signature(&self) -> &AlgebraSignature {
        &self.signature
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn try_add(&self, other: &IntegerElement) -> Result<IntegerElement> {
        IntegerElement::from_element(&self.to_element().try_add(&other.to_element())?)
    }

    pub fn try_sub(&self, other: &IntegerElement) -> Result<IntegerElement> {
        IntegerElement::from_element(&self.to_element().try_sub(&other.to_element())?)
    }

    pub fn try_mul(&self, other: &IntegerElement) -> Result<IntegerElement> {
        IntegerElement::from_element(&self.to_element().try_mul(&other.to_element())?)
    }

    pub fn scalar_mul(&self, c: &BigInt) -> IntegerElement {
        IntegerElement {
            signature: self.signature.clone(),
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn conjugate(&self) -> IntegerElement {
        IntegerElement::from_element(&self.to_element().conjugate()).expect("integral")
    }

    pub fn trace(&self) -> BigInt {
        &self.coeffs[0] * 2
    }

    pub fn norm(&self) -> BigInt {
        self.to_element().norm().to_integer()
    }

    /// Whether `x² - q x + m = 0`.
    pub fn satisfies_quadratic(&self, q: &BigInt, m: &BigInt) -> bool {
        let x = self.to_element();
        let lhs = &(&x * &x) - &x.scalar_mul(&Rational::from_integer(q.clone()));
        let lhs = &lhs + &Element::scalar(&self.signature, Rational::from_integer(m.clone()));
        lhs.is_zero()
    }
}

impl fmt::Display for IntegerElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.to_element().fmt(f)
    }
}

/// Rounds every coefficient to the nearest integer, halves away from zero.
pub fn round_to_lattice(x: &Element) -> IntegerElement {
    let coeffs = x.coeffs().iter().map(|c| c.round().to_integer()).collect();
    IntegerElement::new(x.signature(), coeffs).expect("signature of an element")
}

/// `v = x - [x conj(y) / n(y)] y` with coefficient-wise rounding.
///
/// Not guaranteed to satisfy `n(v) < n(y)` outside the commutative subrings
/// this crate works in.
pub fn lattice_remainder(x: &IntegerElement, y: &IntegerElement) -> Result<IntegerElement> {
    let n = y.norm();
    if n.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let xe = x.to_element();
    let ye = y.to_element();
    let quotient = xe
        .try_mul(&ye.conjugate())?
        .scalar_mul(&Rational::from_integer(n).recip());
    let z = round_to_lattice(&quotient);
    x.try_sub(&z.try_mul(y)?)
}

/// `m = a1² + a2² + a3² + a4²` and the root `z = a1 + a2 e_i + a3 e_j + a4 e_k`
/// of `x² - 2 a1 x + m = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FourSquareRoot {
    pub parts: [u64; 4],
    pub z: IntegerElement,
}

impl FourSquareRoot {
    /// `q = 2 a1`.
    pub fn trace(&self) -> u64 {
        2 * self.parts[0]
    }
}

/// Lexicographically smallest non-negative `(a1, a2, a3, a4)` with
/// `a1² + a2² + a3² + a4² = m`, placed on `1, e_i, e_j, e_k` of the depth-`t`
/// algebra with all parameters -1.
pub fn four_square_root(m: u64, indices: [usize; 3], t: usize) -> Result<FourSquareRoot> {
    if m == 0 {
        return Err(Error::InvalidParameter("m must be positive".into()));
    }
    let sig = AlgebraSignature::classical(t, Convention::Eq11);
    let dim = sig.dimension();
    let [i, j, k] = indices;
    if i == j || j == k || i == k || [i, j, k].iter().any(|&p| p == 0 || p >= dim) {
        return Err(Error::InvalidParameter(format!(
            "need three distinct indices in 1..{dim}, got {indices:?}"
        )));
    }
    let parts = decompose(m);
    let mut coeffs = vec![BigInt::zero(); dim];
    coeffs[0] = parts[0].into();
    coeffs[i] = parts[1].into();
    coeffs[j] = parts[2].into();
    coeffs[k] = parts[3].into();
    Ok(FourSquareRoot {
        parts,
        z: IntegerElement::new(&sig, coeffs)?,
    })
}

fn decompose(m: u64) -> [u64; 4] {
    let r = m.sqrt();
    for a1 in 0..=r {
        let m1 = m - a1 * a1;
        for a2 in 0..=m1.sqrt() {
            let m2 = m1 - a2 * a2;
            for a3 in 0..=m2.sqrt() {
                let m3 = m2 - a3 * a3;
                let a4 = m3.sqrt();
                if a4 * a4 == m3 {
                    return [a1, a2, a3, a4];
                }
            }
        }
    }
    unreachable!("every natural number is a sum of four squares")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    #[test]
    fn four_squares_examples() {
        let r = four_square_root(4, [1, 2, 3], 2).unwrap();
        assert_eq!(r.parts, [0, 0, 0, 2]);
        assert!(r.z.satisfies_quadratic(&BigInt::from(0), &BigInt::from(4)));
        let r = four_square_root(1, [1, 2, 3], 2).unwrap();
        assert_eq!(r.parts, [0, 0, 0, 1]);
        assert_eq!(r.z.coeffs()[3], BigInt::from(1));
        assert!(r.z.satisfies_quadratic(&BigInt::from(0), &BigInt::from(1)));
        let r = four_square_root(7, [1, 2, 4], 3).unwrap();
        assert_eq!(r.parts, [1, 1, 1, 2]);
        assert_eq!(r.trace(), 2);
        assert!(r.z.satisfies_quadratic(&BigInt::from(2), &BigInt::from(7)));
        assert_eq!(r.z.norm(), BigInt::from(7));
    }

    #[test]
    fn four_squares_rejects_bad_indices() {
        assert!(four_square_root(5, [1, 1, 2], 2).is_err());
        assert!(four_square_root(5, [0, 1, 2], 2).is_err());
        assert!(four_square_root(5, [1, 2, 4], 2).is_err());
        assert!(four_square_root(0, [1, 2, 3], 2).is_err());
    }

    #[test]
    fn integer_elements_need_integer_parameters() {
        let half = crate::algebra::make_algebra(1, vec![ratio(1, 2)], Convention::Eq11).unwrap();
        assert!(IntegerElement::from_ints(&half, &[1, 1]).is_err());
        let s = AlgebraSignature::classical(2, Convention::Eq11);
        let x = Element::new(&s, vec![ratio(1, 2), int(0), int(0), int(0)]).unwrap();
        assert!(IntegerElement::from_element(&x).is_err());
    }

    #[test]
    fn rounding_and_octonion_remainder() {
        let s = AlgebraSignature::classical(3, Convention::Eq11);
        let x = Element::new(
            &s,
            vec![
                ratio(1, 2),
                ratio(-1, 2),
                ratio(7, 3),
                ratio(-5, 3),
                int(0),
                int(1),
                ratio(3, 4),
                ratio(-3, 4),
            ],
        )
        .unwrap();
        let r = round_to_lattice(&x);
        let expect: Vec<BigInt> = [1, -1, 2, -2, 0, 1, 1, -1]
            .iter()
            .map(|&c| BigInt::from(c))
            .collect();
        assert_eq!(r.coeffs(), &expect[..]);

        let a = IntegerElement::from_ints(&s, &[7, 3, -2, 5, 1, 0, 4, -3]).unwrap();
        let b = IntegerElement::from_ints(&s, &[2, 1, 0, -1, 1, 1, 0, 0]).unwrap();
        let v = lattice_remainder(&a, &b).unwrap();
        assert!(v.norm() < b.norm());
        let zero = IntegerElement::from_ints(&s, &[0; 8]).unwrap();
        assert_eq!(lattice_remainder(&a, &zero), Err(Error::DivisionByZero));
    }
}
