use super::ring::{is_prime, QuadraticRing, UElement};
use crate::error::{Error, Result};

/// `U / (pi)` for a prime `pi` of `U = Z[w]`, with `p = n(pi)`.
///
/// Every residue class is represented by its element of least norm and
/// labelled by the integer it is congruent to in `Z_p`: `w` maps to `s`, the
/// root of `x² - q x + m` with `pi -> 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueField {
    ring: QuadraticRing,
    pi: UElement,
    p: i64,
    s: i64,
    reps: Vec<UElement>,
}

/// Tie-break among representatives of equal norm: non-negative `b` first,
/// then smaller `|b|`, then smaller `a`.
fn tie_key(x: UElement) -> (bool, i64, i64) {
    (x.b < 0, x.b.abs(), x.a)
}

fn mod_inverse(a: i64, p: i64) -> Option<i64> {
    let (mut r0, mut r1) = (a.rem_euclid(p) as i128, p as i128);
    let (mut s0, mut s1) = (1i128, 0i128);
    while r1 != 0 {
        let k = r0 / r1;
        (r0, r1) = (r1, r0 - k * r1);
        (s0, s1) = (s1, s0 - k * s1);
    }
    (r0 == 1).then(|| s0.rem_euclid(p as i128) as i64)
}

/// Builds `U / (pi)`. Needs a positive definite norm form and `n(pi)` prime.
///
/// Finding representatives costs `O(p² / sqrt(4m - q²))` ring operations.
pub fn residue_field(ring: QuadraticRing, pi: UElement) -> Result<ResidueField> {
    if !ring.is_positive_definite() {
        return Err(Error::InvalidModulus(format!(
            "norm form with q = {}, m = {} is not positive definite",
            ring.q, ring.m
        )));
    }
    let n = ring.norm(pi)?;
    if !(n > 0 && is_prime(n as u128)) {
        return Err(Error::DegeneratePrime(format!(
            "n({pi}) = {n} is not prime"
        )));
    }
    let p = i64::try_from(n).map_err(|_| Error::Overflow("residue field modulus"))?;
    let inv_b = mod_inverse(pi.b, p).ok_or_else(|| {
        Error::DegeneratePrime(format!("{pi} is congruent to an integer mod {p}"))
    })?;
    let s = ((-(pi.a as i128)).rem_euclid(p as i128) * inv_b as i128 % p as i128) as i64;

    let q = ring.q as i128;
    let m = ring.m as i128;
    let p128 = p as i128;
    debug_assert_eq!(
        (s as i128 * s as i128 - q * s as i128 + m).rem_euclid(p128),
        0
    );

    // Some integer in (-p/2, p/2] lies in every class, so the least norm is
    // at most p²/4 and (4m - q²) b² / 4 <= p²/4 bounds b.
    let disc = -ring.discriminant();
    let mut b_max = 0i128;
    while (b_max + 1) * (b_max + 1) * disc <= p128 * p128 {
        b_max += 1;
    }
    let mut best: Vec<Option<(i128, UElement)>> = vec![None; p as usize];
    for b in -b_max..=b_max {
        // a + qb/2 within p/2 of zero
        let centre = -(q * b).div_euclid(2);
        for a in (centre - p128 / 2 - 1)..=(centre + p128 / 2 + 1) {
            let x = UElement::new(
                i64::try_from(a).map_err(|_| Error::Overflow("representative"))?,
                i64::try_from(b).map_err(|_| Error::Overflow("representative"))?,
            );
            let norm = ring.norm(x)?;
            let label = (a + b * s as i128).rem_euclid(p128) as usize;
            let better = match best[label] {
                None => true,
                Some((bn, bx)) => norm < bn || (norm == bn && tie_key(x) < tie_key(bx)),
            };
            if better {
                best[label] = Some((norm, x));
            }
        }
    }
    let reps = best
        .into_iter()
        .map(|r| {
            r.map(|(_, x)| x)
                .expect("every class meets the search window")
        })
        .collect();
    Ok(ResidueField {
        ring,
        pi,
        p,
        s,
        reps,
    })
}

impl ResidueField {
    pub fn ring(&self) -> QuadraticRing {
        self.ring
    }

    pub fn pi(&self) -> UElement {
        self.pi
    }

    /// `p = n(pi)`.
    pub fn modulus(&self) -> i64 {
        self.p
    }

    /// Image of `w` in `Z_p`.
    pub fn w_image(&self) -> i64 {
        self.s
    }

    /// Representatives indexed by label.
    pub fn representatives(&self) -> &[UElement] {
        &self.reps
    }

    /// `a + b s mod p`.
    pub fn label(&self, x: UElement) -> i64 {
        (x.a as i128 + x.b as i128 * self.s as i128).rem_euclid(self.p as i128) as i64
    }

    /// Least-norm representative of the class labelled `k`.
    pub fn unlabel(&self, k: i64) -> Result<UElement> {
        if !(0..self.p).contains(&k) {
            return Err(Error::SymbolOutOfRange {
                symbol: k,
                modulus: self.p,
            });
        }
        Ok(self.reps[k as usize])
    }

    pub fn reduce(&self, x: UElement) -> UElement {
        self.reps[self.label(x) as usize]
    }

    /// `(label, representative)` for every class.
    pub fn label_table(&self) -> Vec<(i64, UElement)> {
        (0..self.p).zip(self.reps.iter().copied()).collect()
    }

    /// Remainder of `m + pi` on division by `pi`; lies in the class of `m`.
    pub fn alpha(&self, m: i64) -> Result<UElement> {
        let shifted = self.ring.add(UElement::from(m), self.pi)?;
        self.ring.modulo(shifted, self.pi)
    }

    /// Exhaustive check that the representatives form a field isomorphic to
    /// `Z_p` under the labelling.
    pub fn check_field_axioms(&self) -> Result<()> {
        let p = self.p;
        let fail = |msg: String| Err(Error::ConstraintViolation(msg));
        for (k, &x) in self.reps.iter().enumerate() {
            if self.label(x) != k as i64 {
                return fail(format!(
                    "representative {x} of class {k} has label {}",
                    self.label(x)
                ));
            }
            let r = self.ring.modulo(x, self.pi)?;
            if self.label(r) != k as i64 {
                return fail(format!("{x} mod {} left its class", self.pi));
            }
        }
        for i in 0..p {
            let x = self.reps[i as usize];
            let mut has_inverse = i == 0;
            for j in 0..p {
                let y = self.reps[j as usize];
                let sum = self.label(self.ring.add(x, y)?);
                let prod = self.label(self.ring.mul(x, y)?);
                if sum != (i + j) % p || prod as i128 != (i as i128 * j as i128) % p as i128 {
                    return fail(format!("labels do not respect {x} and {y}"));
                }
                has_inverse |= prod == 1;
            }
            if !has_inverse {
                return fail(format!("{x} has no inverse"));
            }
        }
        Ok(())
    }
}

/// Symbols in `0..p` to their representatives.
pub fn encode_symbols(field: &ResidueField, symbols: &[i64]) -> Result<Vec<UElement>> {
    symbols.iter().map(|&k| field.unlabel(k)).collect()
}

/// Reduces each element mod `pi` and reads off its label.
pub fn decode_symbols(field: &ResidueField, elements: &[UElement]) -> Result<Vec<i64>> {
    elements
        .iter()
        .map(|&u| Ok(field.label(field.ring.modulo(u, field.pi)?)))
        .collect()
}
