//! Seeded randomized invariant suites over the whole library.
//!
//! Samples are drawn sequentially from a ChaCha stream, checked in parallel,
//! and tallied in sample order, so a report depends only on its config.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::algebra::{find_zero_divisor, make_algebra, AlgebraSignature, Convention, Element};
use crate::error::{Error, Result};
use crate::fibonacci::{
    binet_residual, energy, fib, fib_norm_direct, fib_norm_formula, invertibility_threshold,
    QuaternionParams,
};
use crate::rational::{int, ratio, Rational};
use crate::residue::{four_square_root, make_w, residue_field, QuadraticRing, UElement};
use crate::twist::{basis_product, build_table, partition_blocks, twist_sign, BasisIndex};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Core,
    Twist,
    Fib,
    Residue,
    All,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Core => "core",
            Suite::Twist => "twist",
            Suite::Fib => "fib",
            Suite::Residue => "residue",
            Suite::All => "all",
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "core" => Ok(Suite::Core),
            "twist" => Ok(Suite::Twist),
            "fib" => Ok(Suite::Fib),
            "residue" => Ok(Suite::Residue),
            "all" => Ok(Suite::All),
            _ => Err(Error::InvalidParameter(format!("unknown suite {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Random elements (or pairs) per depth.
    pub samples: usize,
    /// Largest depth exercised by the core and twist suites.
    pub max_depth: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 0x5eed,
            samples: 1000,
            max_depth: 4,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckResult {
    pub name: String,
    pub cases: u64,
    pub failures: u64,
    pub first_failure: Option<String>,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Tally {
    pub checks: Vec<CheckResult>,
}

impl Tally {
    pub fn record(&mut self, name: &str, ok: bool, detail: impl FnOnce() -> String) {
        let idx = match self.checks.iter().position(|c| c.name == name) {
            Some(i) => i,
            None => {
                self.checks.push(CheckResult {
                    name: name.to_string(),
                    cases: 0,
                    failures: 0,
                    first_failure: None,
                });
                self.checks.len() - 1
            }
        };
        let c = &mut self.checks[idx];
        c.cases += 1;
        if !ok {
            c.failures += 1;
            if c.first_failure.is_none() {
                c.first_failure = Some(detail());
            }
        }
    }

    pub fn merge(&mut self, other: Tally) {
        for o in other.checks {
            match self.checks.iter_mut().find(|c| c.name == o.name) {
                Some(c) => {
                    c.cases += o.cases;
                    c.failures += o.failures;
                    if c.first_failure.is_none() {
                        c.first_failure = o.first_failure;
                    }
                }
                None => self.checks.push(o),
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckResult::passed)
    }

    pub fn failures(&self) -> u64 {
        self.checks.iter().map(|c| c.failures).sum()
    }
}

impl fmt::Display for Tally {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            write!(
                f,
                "{:<34} {:>8} cases {:>4} failures",
                c.name, c.cases, c.failures
            )?;
            if let Some(d) = &c.first_failure {
                write!(f, "  first: {d}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteReport {
    pub suite: Suite,
    pub config: SuiteConfig,
    pub tally: Tally,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.tally.passed()
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "suite {} (seed {}, {} samples, t <= {})",
            self.suite.name(),
            self.config.seed,
            self.config.samples,
            self.config.max_depth
        )?;
        write!(f, "{}", self.tally)?;
        let total: u64 = self.tally.checks.iter().map(|c| c.cases).sum();
        writeln!(
            f,
            "{} checks, {} cases, {} failures: {}",
            self.tally.checks.len(),
            total,
            self.tally.failures(),
            if self.passed() { "PASS" } else { "FAIL" }
        )
    }
}

pub fn run_suite(suite: Suite, config: &SuiteConfig) -> Result<SuiteReport> {
    if config.max_depth == 0 {
        return Err(Error::InvalidParameter(
            "max depth must be at least 1".into(),
        ));
    }
    let mut tally = Tally::default();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let all = suite == Suite::All;
    if all || suite == Suite::Core {
        for t in 1..=config.max_depth.min(6) {
            tally.merge(core_invariants(t, config.samples, &mut rng));
        }
        tally.merge(division_boundary(
            config.max_depth.min(4),
            config.samples,
            &mut rng,
        ));
    }
    if all || suite == Suite::Twist {
        tally.merge(twist_checks(
            config.max_depth.min(8),
            config.samples,
            &mut rng,
        )?);
    }
    if all || suite == Suite::Fib {
        tally.merge(fib_checks(config.samples, &mut rng)?);
    }
    if all || suite == Suite::Residue {
        tally.merge(residue_checks(config.samples, &mut rng)?);
    }
    Ok(SuiteReport {
        suite,
        config: config.clone(),
        tally,
    })
}

fn random_signature(t: usize, rng: &mut ChaCha8Rng) -> AlgebraSignature {
    let gammas = (0..t)
        .map(|_| {
            let mut g = 0;
            while g == 0 {
                g = rng.gen_range(-3..=3);
            }
            int(g)
        })
        .collect();
    let conv = if rng.gen() {
        Convention::Eq11
    } else {
        Convention::Eq31
    };
    make_algebra(t, gammas, conv).expect("nonzero parameters")
}

/// Integers in `[-9, 9]`, with an occasional half.
pub fn random_element(sig: &AlgebraSignature, rng: &mut ChaCha8Rng) -> Element {
    let coeffs = (0..sig.dimension())
        .map(|_| {
            let n = rng.gen_range(-9..=9);
            if rng.gen_ratio(1, 8) {
                ratio(n, 2)
            } else {
                int(n)
            }
        })
        .collect();
    Element::new(sig, coeffs).expect("dimension")
}

/// Nonzero rational with numerator and denominator in `[-9, 9]`.
pub fn random_parameter(rng: &mut ChaCha8Rng) -> Rational {
    let mut nonzero = || loop {
        let v = rng.gen_range(-9..=9);
        if v != 0 {
            break v;
        }
    };
    ratio(nonzero(), nonzero())
}

struct CoreSample {
    x: Element,
    y: Element,
    p: usize,
    q: usize,
}

/// Structural laws on random elements of depth `t`, random parameters and
/// both conventions.
pub fn core_invariants(t: usize, samples: usize, rng: &mut ChaCha8Rng) -> Tally {
    let dim = 1usize << t;
    let batch: Vec<CoreSample> = (0..samples)
        .map(|_| {
            let sig = random_signature(t, rng);
            CoreSample {
                x: random_element(&sig, rng),
                y: random_element(&sig, rng),
                p: rng.gen_range(0..dim),
                q: rng.gen_range(1..dim),
            }
        })
        .collect();
    let tallies: Vec<Tally> = batch.par_iter().map(|s| core_sample(t, s)).collect();
    let mut tally = Tally::default();
    for part in tallies {
        tally.merge(part);
    }
    tally
}

fn core_sample(t: usize, s: &CoreSample) -> Tally {
    let mut out = Tally::default();
    let (x, y) = (&s.x, &s.y);
    let sig = x.signature();
    let show = || format!("t={t} {} x={x} y={y}", sig.convention().name());
    let xc = x.conjugate();

    out.record("involution", xc.conjugate() == *x, show);
    out.record(
        "conjugate reverses products",
        (x * y).conjugate() == &y.conjugate() * &xc,
        show,
    );
    out.record("trace is scalar", (x + &xc).as_scalar().is_some(), show);
    let xxc = x * &xc;
    let n = x.norm();
    out.record(
        "norm recurrence equals x conj(x)",
        xxc.as_scalar() == Some(&n) && (&xc * x).as_scalar() == Some(&n),
        show,
    );
    out.record("quadratic identity", x.quadratic_check(), show);
    out.record("flexible", &(x * y) * x == x * &(y * x), show);

    let powers: Vec<Element> = (0..=6).map(|k| x.pow(k)).collect();
    let mut pa = true;
    for i in 1..6 {
        for j in 1..=6 - i {
            pa &= &powers[i as usize] * &powers[j as usize] == powers[(i + j) as usize];
        }
    }
    out.record("power associative", pa, show);

    let ep = Element::basis(sig, s.p).expect("index in range");
    let ep2 = &ep * &ep;
    out.record("basis square is scalar", ep2.as_scalar().is_some(), || {
        format!("t={t} p={}", s.p)
    });
    let eq = Element::basis(sig, s.q).expect("index in range");
    if s.p != 0 && s.p != s.q {
        out.record(
            "basis units anticommute",
            &ep * &eq == -&(&eq * &ep),
            || format!("t={t} p={} q={}", s.p, s.q),
        );
    }
    let left = &ep * &(&ep * x);
    let middle = &ep2 * x;
    let right = &(x * &ep) * &ep;
    out.record(
        "e_p(e_p x) = e_p² x = (x e_p)e_p",
        left == middle && middle == right,
        || format!("{} p={}", show(), s.p),
    );

    if let Ok(inv) = x.inverse() {
        out.record("inverse", (x * &inv) == Element::one(sig), show);
    }

    let other = make_algebra(t, sig.gammas().to_vec(), sig.convention().opposite())
        .expect("same parameters");
    let xo = Element::new(&other, x.coeffs().to_vec()).expect("dimension");
    let yo = Element::new(&other, y.coeffs().to_vec()).expect("dimension");
    out.record(
        "conventions are opposite algebras",
        (&xo * &yo).coeffs() == (y * x).coeffs(),
        show,
    );
    out
}

/// `n(xy) = n(x)n(y)` for `t <= 3` with all parameters -1, and a zero
/// divisor at `t = 4`.
pub fn division_boundary(max_t: usize, samples: usize, rng: &mut ChaCha8Rng) -> Tally {
    let mut tally = Tally::default();
    for t in 1..=max_t.min(3) {
        for conv in [Convention::Eq11, Convention::Eq31] {
            let sig = AlgebraSignature::classical(t, conv);
            let pairs: Vec<(Element, Element)> = (0..samples)
                .map(|_| (random_element(&sig, rng), random_element(&sig, rng)))
                .collect();
            let results: Vec<(bool, String)> = pairs
                .par_iter()
                .map(|(x, y)| {
                    let ok = (x * y).norm() == x.norm() * y.norm();
                    (ok, format!("t={t} x={x} y={y}"))
                })
                .collect();
            for (ok, detail) in results {
                tally.record("norm multiplicative (t <= 3)", ok, || detail);
            }
        }
    }
    if max_t >= 4 {
        let sig = AlgebraSignature::classical(4, Convention::Eq11);
        let found = find_zero_divisor(&sig, 2);
        let ok =
            matches!(&found, Some((x, y)) if !x.is_zero() && !y.is_zero() && (x * y).is_zero());
        tally.record("zero divisor at t = 4", ok, || {
            "none with weight <= 2".into()
        });
    }
    tally
}

/// Structure coefficients against element multiplication, table entries
/// against the direct sign computation, block partition and opposite tables.
pub fn twist_checks(max_t: usize, samples: usize, rng: &mut ChaCha8Rng) -> Result<Tally> {
    let mut tally = Tally::default();
    for t in 1..=max_t {
        let dim = 1u64 << t;
        for conv in [Convention::Eq11, Convention::Eq31] {
            let mut sig = random_signature(t, rng);
            sig = make_algebra(t, sig.gammas().to_vec(), conv)?;
            let pairs: Vec<(u64, u64)> = if t <= 5 {
                (0..dim)
                    .flat_map(|p| (0..dim).map(move |q| (p, q)))
                    .collect()
            } else {
                (0..samples.max(1) * 10)
                    .map(|_| (rng.gen_range(0..dim), rng.gen_range(0..dim)))
                    .collect()
            };
            for (ok, detail) in basis_oracle(&sig, &pairs) {
                tally.record("basis product matches multiplication", ok, || detail);
            }
        }
    }
    for t in 1..=max_t.min(5) {
        let dim = 1u64 << t;
        for conv in [Convention::Eq11, Convention::Eq31] {
            for p in 1..dim {
                for q in 1..dim {
                    if p == q {
                        continue;
                    }
                    let a = twist_sign(BasisIndex(p), BasisIndex(q), t, conv)?;
                    let b = twist_sign(BasisIndex(q), BasisIndex(p), t, conv)?;
                    tally.record("twist sign antisymmetric", a * b == -1, || {
                        format!("t={t} p={p} q={q}")
                    });
                }
            }
        }
    }
    for t in 1..=max_t {
        let t11 = build_table(t, Convention::Eq11)?;
        let t31 = build_table(t, Convention::Eq31)?;
        let size = t11.size();
        for _ in 0..samples.min(size * size) {
            let p = rng.gen_range(0..size);
            let q = rng.gen_range(0..size);
            let direct = twist_sign(
                BasisIndex(p as u64),
                BasisIndex(q as u64),
                t,
                Convention::Eq11,
            )?;
            tally.record(
                "table matches direct sign",
                t11.sign(p, q) == direct,
                || format!("t={t} p={p} q={q}"),
            );
            tally.record(
                "eq31 table is eq11 transposed",
                t31.entry(p, q) == t11.entry(q, p),
                || format!("t={t} p={p} q={q}"),
            );
        }
        for table in [&t11, &t31] {
            let ok = partition_blocks(table).is_ok();
            tally.record("aligned blocks classify", ok, || {
                format!("t={t} {}", table.convention().name())
            });
        }
    }
    Ok(tally)
}

/// `(ok, detail)` per pair: `e_p e_q` computed by full multiplication versus
/// the structure coefficient.
pub fn basis_oracle(sig: &AlgebraSignature, pairs: &[(u64, u64)]) -> Vec<(bool, String)> {
    let t = sig.depth();
    let basis: Vec<Element> = (0..sig.dimension())
        .map(|p| Element::basis(sig, p).expect("in range"))
        .collect();
    pairs
        .par_iter()
        .map(|&(p, q)| {
            let product = &basis[p as usize] * &basis[q as usize];
            let (c, r) = basis_product(BasisIndex(p), BasisIndex(q), sig).expect("in range");
            let expect = basis[r.0 as usize].scalar_mul(&c.value(sig));
            (
                product == expect,
                format!("t={t} {} p={p} q={q}", sig.convention().name()),
            )
        })
        .collect()
}

/// Fibonacci quaternion identities.
pub fn fib_checks(samples: usize, rng: &mut ChaCha8Rng) -> Result<Tally> {
    let mut tally = Tally::default();
    let unit = QuaternionParams::from_ints(1, 1);
    for n in 0..=40 {
        let ok =
            fib_norm_direct(n, &unit)? == Rational::from_integer(BigInt::from(3) * fib(2 * n + 3));
        tally.record("unit parameters: n(F_n) = 3 f_{2n+3}", ok, || {
            format!("n={n}")
        });
    }
    let cases: Vec<(u64, QuaternionParams)> = (0..samples)
        .map(|_| {
            let n = rng.gen_range(0..=30);
            (
                n,
                QuaternionParams::new(random_parameter(rng), random_parameter(rng)),
            )
        })
        .collect();
    let results: Vec<Result<bool>> = cases
        .par_iter()
        .map(|(n, params)| Ok(fib_norm_direct(*n, params)? == fib_norm_formula(*n, params)))
        .collect();
    for ((n, params), ok) in cases.iter().zip(results) {
        tally.record("closed-form norm", ok?, || {
            format!("n={n} alpha1={} alpha2={}", params.alpha1, params.alpha2)
        });
    }
    for n in 0..=200 {
        tally.record("binet formula", binet_residual(n).holds, || {
            format!("n={n}")
        });
    }
    for params in (0..samples.min(50))
        .map(|_| QuaternionParams::new(random_parameter(rng), random_parameter(rng)))
    {
        let e = energy(&params);
        let ok = !e.is_zero() && invertibility_threshold(&params, 200)?.is_some();
        tally.record("norm sign settles to sign of E", ok, || {
            format!("alpha1={} alpha2={}", params.alpha1, params.alpha2)
        });
    }
    Ok(tally)
}

/// Residue-field construction, remainders and four-square roots.
pub fn residue_checks(samples: usize, rng: &mut ChaCha8Rng) -> Result<Tally> {
    let mut tally = Tally::default();
    let g = make_w(2, [1, 2, 3], [1, 1, 1, 1])?;
    let ring = g.ring();
    tally.record("generator quadratic", (g.q, g.m) == (2, 4), || {
        format!("q={} m={}", g.q, g.m)
    });

    let pis = [
        UElement::new(-1, 2),
        UElement::new(1, 1),
        UElement::new(1, 3),
        UElement::new(11, 6),
    ];
    for pi in pis {
        let field = residue_field(ring, pi)?;
        let ok = field.check_field_axioms();
        tally.record("labels form a field", ok.is_ok(), || {
            format!("pi={pi}: {ok:?}")
        });
        for _ in 0..samples.min(200) {
            let x = UElement::new(rng.gen_range(-100..=100), rng.gen_range(-100..=100));
            let k = UElement::new(rng.gen_range(-10..=10), rng.gen_range(-10..=10));
            let shifted = ring.add(x, ring.mul(k, pi)?)?;
            let v = ring.modulo(shifted, pi)?;
            tally.record(
                "reduction respects congruence",
                field.label(v) == field.label(x),
                || format!("pi={pi} x={x} k={k}"),
            );
        }
    }

    // norm-Euclidean rings first; the example ring Z[√-3] only admits n(v) <= n(y)
    let rings = [
        (QuadraticRing::new(0, 1), true),
        (QuadraticRing::new(1, 1), true),
        (QuadraticRing::new(1, 2), true),
        (ring, false),
    ];
    for (r, euclidean) in rings {
        for _ in 0..samples {
            let x = UElement::new(rng.gen_range(-1000..=1000), rng.gen_range(-1000..=1000));
            let y = loop {
                let y = UElement::new(rng.gen_range(-30..=30), rng.gen_range(-30..=30));
                if !y.is_zero() {
                    break y;
                }
            };
            let v = r.modulo(x, y)?;
            let (nv, ny) = (r.norm(v)?, r.norm(y)?);
            let detail = || format!("q={} m={} x={x} y={y} v={v}", r.q, r.m);
            if euclidean {
                tally.record("remainder norm below divisor norm", nv < ny, detail);
            } else {
                tally.record("remainder norm at most divisor norm", nv <= ny, detail);
            }
            tally.record(
                "remainder differs by a multiple",
                divides(r, y, r.sub(x, v)?)?,
                detail,
            );
        }
    }

    let mut imaginary: Vec<usize> = (1..8).collect();
    imaginary.shuffle(rng);
    let drawn = [imaginary[0], imaginary[1], imaginary[2]];
    for (t, indices) in [(2, [1, 2, 3]), (3, [1, 2, 4]), (3, drawn)] {
        for m in 1..=50u64 {
            let root = four_square_root(m, indices, t)?;
            let sum: u64 = root.parts.iter().map(|a| a * a).sum();
            let ok = sum == m
                && root
                    .z
                    .satisfies_quadratic(&BigInt::from(root.trace()), &BigInt::from(m));
            tally.record("four-square roots", ok, || format!("t={t} m={m}"));
        }
    }

    let g3 = make_w(3, [1, 2, 4], [1, 1, 1, 1])?;
    for _ in 0..samples.min(200) {
        let x = UElement::new(rng.gen_range(-20..=20), rng.gen_range(-20..=20));
        let y = UElement::new(rng.gen_range(-20..=20), rng.gen_range(-20..=20));
        let ok = g3.embed(ring.mul(x, y)?) == g3.embed(x).try_mul(&g3.embed(y))?;
        tally.record("Z[w] embeds multiplicatively", ok, || {
            format!("x={x} y={y}")
        });
    }
    Ok(tally)
}

/// Whether `y` divides `d` in `r`.
fn divides(r: QuadraticRing, y: UElement, d: UElement) -> Result<bool> {
    let n = r.norm(y)?;
    let num = r.mul(d, r.conj(y)?)?;
    Ok(num.a as i128 % n == 0 && num.b as i128 % n == 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(seed: u64) -> SuiteConfig {
        SuiteConfig {
            seed,
            samples: 40,
            max_depth: 4,
        }
    }

    #[test]
    fn suites_pass() {
        for suite in [Suite::Core, Suite::Twist, Suite::Fib, Suite::Residue] {
            let report = run_suite(suite, &small(7)).unwrap();
            assert!(report.passed(), "{report}");
        }
    }

    #[test]
    fn reports_are_deterministic() {
        let a = run_suite(Suite::Residue, &small(3)).unwrap();
        let b = run_suite(Suite::Residue, &small(3)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_string(), b.to_string());
    }

    #[test]
    fn tally_keeps_first_failure() {
        let mut t = Tally::default();
        t.record("x", true, || unreachable!());
        t.record("x", false, || "first".into());
        t.record("x", false, || "second".into());
        assert_eq!(t.checks[0].cases, 3);
        assert_eq!(t.checks[0].failures, 2);
        assert_eq!(t.checks[0].first_failure.as_deref(), Some("first"));
        assert!(!t.passed());
    }

    #[test]
    fn suite_names_parse() {
        for s in ["core", "twist", "fib", "residue", "all"] {
            assert_eq!(s.parse::<Suite>().unwrap().name(), s);
        }
        assert!("bogus".parse::<Suite>().is_err());
    }
}
