//! The modular j-function at arbitrary precision, and everything built on it:
//! Hilbert class polynomials with certified integer rounding, conjugate root
//! systems, the dominance estimate for the a = 1 root, and identification of
//! two-torsion CM fields by their quadratic subfields.
//!
//! j is evaluated through Eisenstein series, j = 1728·E₄³/(E₄³ − E₆²), after
//! reducing the argument to the standard fundamental domain so that
//! |q| ≤ e^(−π√3) ≈ 0.0043 and a few hundred q-terms suffice at any
//! precision used here. The working precision is padded by 2π·Im τ/ln 2 bits
//! to absorb the cancellation in E₄³ − E₆² (that difference has magnitude
//! ≈ |q|, while both cubes are ≈ 1).

mod bigcomplex;

pub use bigcomplex::BigComplex;

use crate::arith::factorize;
use crate::qforms::{self, Form};
use crate::{Error, Result};
use rug::float::Constant;
use rug::ops::Pow;
use rug::{Float, Integer};
use std::collections::BTreeSet;
use std::f64::consts::{LN_2, PI};

/// Requests below this precision are rejected.
pub const MIN_PRECISION: u32 = 64;
/// Policy ceiling; MPFR could go far higher, but nothing at desk scale needs to.
pub const MAX_PRECISION: u32 = 1 << 22;
/// Guard bits added on top of the coefficient-size estimate.
pub const DEFAULT_GUARD_BITS: u32 = 64;
/// A rounded value is accepted only if it is this close to an integer.
pub const ROUNDING_TOLERANCE: f64 = 1.0 / (1u64 << 20) as f64;

fn check_prec(prec: u32) -> Result<()> {
    if !(MIN_PRECISION..=MAX_PRECISION).contains(&prec) {
        return Err(Error::PrecisionOutOfRange(prec, MIN_PRECISION, MAX_PRECISION));
    }
    Ok(())
}

/// Moves τ to the standard fundamental domain |Re τ| ≤ 1/2, |τ| ≥ 1 by
/// translations and inversions.
pub fn reduce_to_fundamental_domain(tau: &BigComplex) -> Result<BigComplex> {
    if !tau.is_finite() || tau.im.is_sign_negative() || tau.im.is_zero() {
        return Err(Error::NotUpperHalfPlane);
    }
    let prec = tau.prec();
    let mut t = tau.clone();
    for _ in 0..100_000 {
        let shift = t.re.clone().round();
        if !shift.is_zero() {
            t.re = Float::with_val(prec, &t.re - &shift);
        }
        if t.norm_sqr() < 1 {
            // S: τ ↦ −1/τ strictly increases the norm here.
            t = t.recip().neg();
        } else {
            return Ok(t);
        }
    }
    unreachable!("fundamental-domain reduction did not terminate");
}

/// The modular j-invariant, within relative error 2^(1−prec).
pub fn eval_j(tau: &BigComplex, prec: u32) -> Result<BigComplex> {
    check_prec(prec)?;
    // One rough pass to learn Im of the reduced point, then the real pass at
    // padded precision.
    let rough = reduce_to_fundamental_domain(&tau.rounded_to(prec.max(tau.prec())))?;
    let cancellation = (2.0 * PI * rough.im.to_f64() / LN_2).ceil() as u32;
    let wp = prec
        .saturating_add(cancellation)
        .saturating_add(DEFAULT_GUARD_BITS)
        .min(MAX_PRECISION * 2);
    let t = reduce_to_fundamental_domain(&tau.rounded_to(wp))?;

    let two_pi = Float::with_val(wp, Constant::Pi) * 2;
    let q = BigComplex::new(
        Float::with_val(wp, &t.im * &two_pi) * -1,
        Float::with_val(wp, &t.re * &two_pi),
    )
    .exp();

    let mut e4 = BigComplex::one(wp);
    let mut e6 = BigComplex::one(wp);
    let threshold = Float::with_val(64, Float::i_exp(1, -((wp as i32) + 16)));
    let mut qn = q.clone();
    let mut n = 1u64;
    loop {
        let one_minus = BigComplex::one(wp).sub(&qn);
        let base = qn.div(&one_minus);
        let n3 = Float::with_val(wp, Integer::from(n).pow(3));
        let n5 = Float::with_val(wp, Integer::from(n).pow(5));
        e4 = e4.add(&base.mul_float(&(n3 * 240)));
        e6 = e6.sub(&base.mul_float(&(n5 * 504)));
        let mag = Float::with_val(64, &qn.re).hypot(&Float::with_val(64, &qn.im));
        if mag * Float::with_val(64, Integer::from(n).pow(5)) < threshold {
            break;
        }
        qn = qn.mul(&q);
        n += 1;
        assert!(n < 10_000_000, "q-series failed to converge");
    }

    let e4_cubed = e4.mul(&e4).mul(&e4);
    let e6_sq = e6.mul(&e6);
    let denom = e4_cubed.sub(&e6_sq);
    let j = e4_cubed
        .mul_float(&Float::with_val(wp, 1728))
        .div(&denom);
    Ok(j.rounded_to(prec))
}

/// The CM point of a form: τ = (−b + √Δ)/(2a), which for a reduced form
/// already lies in the fundamental domain.
pub fn form_tau(form: &Form, prec: u32) -> BigComplex {
    let two_a = Float::with_val(prec, form.a()) * 2;
    let abs_disc = -form.disc();
    let re = Float::with_val(prec, form.b()) / &two_a * -1;
    let im = Float::with_val(prec, &abs_disc).sqrt() / &two_a;
    BigComplex::new(re, im)
}

/// Bit budget for rounding H_Δ: the root-magnitude sum π√|Δ|·Σ 1/a bounds
/// log₂ of the coefficients, plus per-degree slack and guard bits.
pub fn hcp_precision(disc: i64, forms: &[Form], guard: u32) -> u32 {
    let sum_inv_a: f64 = forms.iter().map(|f| 1.0 / f.a().to_f64()).sum();
    let size = (PI * (disc.unsigned_abs() as f64).sqrt() * sum_inv_a / LN_2).ceil() as u32;
    (size + 16 * forms.len() as u32 + guard).max(MIN_PRECISION)
}

/// Monic integer polynomial with its rounding certificate.
#[derive(Debug, Clone, PartialEq)]
pub struct HilbertPolynomial {
    pub disc: i64,
    /// Coefficients c₀, c₁, …, c_h with c_h = 1 (lowest degree first).
    pub coefficients: Vec<Integer>,
    /// Largest distance of a floating coefficient from its rounded integer
    /// (imaginary residues included). Always < 2⁻²⁰ on success.
    pub max_residual: f64,
}

impl HilbertPolynomial {
    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    /// Exact evaluation at an integer.
    pub fn eval_integer(&self, x: &Integer) -> Integer {
        let mut acc = Integer::new();
        for c in self.coefficients.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// disc(H) for degree 2: b² − 4c of x² + bx + c. Panics on other degrees.
    pub fn quadratic_discriminant(&self) -> Integer {
        assert_eq!(self.degree(), 2);
        let b = &self.coefficients[1];
        let c = &self.coefficients[0];
        b.clone() * b - Integer::from(4) * c
    }
}

impl std::fmt::Display for HilbertPolynomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let deg = self.degree();
        let mut first = true;
        for k in (0..=deg).rev() {
            let c = &self.coefficients[k];
            if *c == 0 && deg > 0 {
                continue;
            }
            let abs = c.clone().abs();
            if first {
                if *c < 0 {
                    write!(f, "-")?;
                }
                first = false;
            } else if *c < 0 {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let unit_coeff = abs == 1;
            match k {
                0 => write!(f, "{abs}")?,
                1 => {
                    if unit_coeff {
                        write!(f, "x")?;
                    } else {
                        write!(f, "{abs}*x")?;
                    }
                }
                _ => {
                    if unit_coeff {
                        write!(f, "x^{k}")?;
                    } else {
                        write!(f, "{abs}*x^{k}")?;
                    }
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

fn round_certified(x: &Float) -> (Integer, f64) {
    let rounded = x.clone().round();
    let residual = Float::with_val(64, x - &rounded).abs().to_f64();
    (
        rounded.to_integer().expect("rounded float is integral"),
        residual,
    )
}

fn build_hcp_at(disc: i64, forms: &[Form], prec: u32) -> Result<HilbertPolynomial> {
    use rayon::prelude::*;
    // Roots are independent; the product accumulation stays sequential.
    let roots: Vec<BigComplex> = forms
        .par_iter()
        .map(|form| eval_j(&form_tau(form, prec), prec))
        .collect::<Result<_>>()?;
    let mut coeffs = vec![BigComplex::one(prec)];
    for root in &roots {
        let mut next = vec![BigComplex::zero(prec); coeffs.len() + 1];
        for (i, c) in coeffs.iter().enumerate() {
            next[i + 1] = next[i + 1].add(c);
            next[i] = next[i].sub(&c.mul(root));
        }
        coeffs = next;
    }
    let mut integers = Vec::with_capacity(coeffs.len());
    let mut max_residual = 0f64;
    for c in &coeffs {
        let (int, res) = round_certified(&c.re);
        let imag = Float::with_val(64, &c.im).abs().to_f64();
        max_residual = max_residual.max(res).max(imag);
        integers.push(int);
    }
    if max_residual >= ROUNDING_TOLERANCE {
        return Err(Error::RoundingFailure(disc, max_residual, 0));
    }
    assert_eq!(
        *integers.last().expect("nonempty coefficients"),
        1,
        "H_{disc} is monic by construction"
    );
    Ok(HilbertPolynomial {
        disc,
        coefficients: integers,
        max_residual,
    })
}

/// The Hilbert class polynomial H_Δ: monic of degree h(Δ) with the j-values
/// of T_Δ as roots, rounded to exact integers with residual < 2⁻²⁰.
///
/// A failed rounding doubles the working precision; three retries without
/// success is a hard error.
pub fn hilbert_class_polynomial(disc: i64) -> Result<HilbertPolynomial> {
    hilbert_class_polynomial_with_guard(disc, DEFAULT_GUARD_BITS)
}

pub fn hilbert_class_polynomial_with_guard(disc: i64, guard: u32) -> Result<HilbertPolynomial> {
    let forms = qforms::enumerate_reduced(disc)?;
    let mut prec = hcp_precision(disc, &forms, guard);
    let mut last_residual = f64::INFINITY;
    for retry in 0..=3u32 {
        match build_hcp_at(disc, &forms, prec) {
            Ok(h) => return Ok(h),
            Err(Error::RoundingFailure(_, residual, _)) => {
                last_residual = residual;
                prec = prec.saturating_mul(2).min(MAX_PRECISION);
                if retry == 3 {
                    return Err(Error::RoundingFailure(disc, last_residual, retry));
                }
            }
            Err(e) => return Err(e),
        }
    }
    Err(Error::RoundingFailure(disc, last_residual, 3))
}

/// One j-value per reduced form, keyed by the form. The a = 1 entry is the
/// dominant value.
pub fn conjugate_roots(disc: i64, prec: u32) -> Result<Vec<(Form, BigComplex)>> {
    check_prec(prec)?;
    qforms::enumerate_reduced(disc)?
        .into_iter()
        .map(|f| {
            let root = eval_j(&form_tau(&f, prec), prec)?;
            Ok((f, root))
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct DominanceReport {
    pub disc: i64,
    pub dominant: BigComplex,
    /// max over non-dominant conjugates of |j(τ')| / |j(τ)|.
    pub max_ratio: f64,
}

/// Verifies that the a = 1 conjugate dwarfs the others: the returned ratio is
/// ≤ 0.1 whenever |Δ| ≥ 11.
pub fn dominance_check(disc: i64) -> Result<DominanceReport> {
    let roots = conjugate_roots(disc, 192)?;
    if roots.len() < 2 {
        return Err(Error::NoNonDominantConjugate(disc));
    }
    let dominant = roots
        .iter()
        .find(|(f, _)| *f.a() == 1)
        .expect("exactly one a = 1 form")
        .1
        .clone();
    let dom_abs = dominant.abs();
    let max_ratio = roots
        .iter()
        .filter(|(f, _)| *f.a() != 1)
        .map(|(_, r)| (Float::with_val(64, r.abs() / &dom_abs)).to_f64())
        .fold(0f64, f64::max)
        .abs();
    Ok(DominanceReport {
        disc,
        dominant,
        max_ratio,
    })
}

/// The set of squarefree d > 1 with ℚ(√d) ⊂ ℚ(j), for two-torsion Δ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubfieldSet {
    pub disc: i64,
    /// h(Δ) = [ℚ(j) : ℚ].
    pub degree: u64,
    pub subfields: BTreeSet<u64>,
}

/// Squarefree kernel of t under the constraint that its prime support
/// divides Δ: returns the unique squarefree d (possibly 1) with t = m²·d.
pub fn squarefree_kernel_in_support(t: &Integer, disc: i64) -> Result<u64> {
    let primes: Vec<u64> = factorize(disc)?.factors.iter().map(|&(p, _)| p).collect();
    for mask in 0u32..(1 << primes.len()) {
        let mut d = Integer::from(1);
        for (i, &p) in primes.iter().enumerate() {
            if mask & (1 << i) != 0 {
                d *= p;
            }
        }
        if t.is_divisible(&d) {
            let quotient = t.clone() / &d;
            if quotient.is_perfect_square() {
                return Ok(d.to_u64().expect("divisor of |Δ| fits in u64"));
            }
        }
    }
    Err(Error::FieldMismatch(disc, t.to_string()))
}

/// F₂ coordinates of every element of a two-torsion group given by its
/// composition table.
fn two_torsion_coordinates(table: &[Vec<usize>], identity: usize) -> Vec<u32> {
    let n = table.len();
    let mut coords = vec![u32::MAX; n];
    coords[identity] = 0;
    let mut labeled = vec![identity];
    let mut bits = 0u32;
    for x in 0..n {
        if coords[x] != u32::MAX {
            continue;
        }
        let bit = 1u32 << bits;
        bits += 1;
        for i in 0..labeled.len() {
            let y = labeled[i];
            let z = table[y][x];
            debug_assert_eq!(coords[z], u32::MAX);
            coords[z] = coords[y] | bit;
            labeled.push(z);
        }
    }
    debug_assert_eq!(labeled.len(), n);
    debug_assert_eq!(1usize << bits, n);
    coords
}

fn subfield_precision(disc: i64, h: usize, guard: u32) -> u32 {
    let size = (2.0 * PI * (disc.unsigned_abs() as f64).sqrt() / LN_2).ceil() as u32;
    (size + 16 * h as u32 + guard + 32).max(MIN_PRECISION)
}

/// Quadratic subfields of ℚ(j(τ)) for a two-torsion discriminant.
///
/// For each index-2 subgroup H of Cl(Δ), the signed root sum
/// Σ_{c∈H} j_c − Σ_{c∉H} j_c squares to a positive integer t_H, and ℚ(√t_H)
/// is the subfield fixed by H. The output collects the squarefree kernels.
pub fn quadratic_subfields(disc: i64) -> Result<SubfieldSet> {
    let group = qforms::class_group(disc)?;
    if !group.is_two_torsion() {
        return Err(Error::NotTwoTorsion(disc));
    }
    let h = group.forms.len();
    if h == 1 {
        return Ok(SubfieldSet {
            disc,
            degree: 1,
            subfields: BTreeSet::new(),
        });
    }
    let coords = two_torsion_coordinates(&group.table, group.identity);
    let mu = h.trailing_zeros();

    let mut prec = subfield_precision(disc, h, DEFAULT_GUARD_BITS);
    let mut last_residual = f64::INFINITY;
    'retry: for retry in 0..=3u32 {
        // All roots are real here: two-torsion classes are ambiguous, hence
        // fixed by complex conjugation.
        let mut roots = Vec::with_capacity(h);
        let mut imag_residual = 0f64;
        for form in &group.forms {
            let root = eval_j(&form_tau(form, prec), prec)?;
            imag_residual = imag_residual.max(Float::with_val(64, &root.im).abs().to_f64());
            roots.push(root.re);
        }
        let mut subfields = BTreeSet::new();
        let mut worst = imag_residual;
        for chi in 1u32..(1 << mu) {
            let mut diff = Float::new(prec);
            for (i, root) in roots.iter().enumerate() {
                if (chi & coords[i]).count_ones() % 2 == 0 {
                    diff += root;
                } else {
                    diff -= root;
                }
            }
            let square = diff.clone() * &diff;
            let (t, residual) = round_certified(&square);
            worst = worst.max(residual);
            if worst >= ROUNDING_TOLERANCE {
                last_residual = worst;
                prec = prec.saturating_mul(2).min(MAX_PRECISION);
                continue 'retry;
            }
            if t <= 0 || t.is_perfect_square() {
                return Err(Error::DegenerateSubfield(disc, t.to_string()));
            }
            let d = squarefree_kernel_in_support(&t, disc)?;
            if d <= 1 {
                return Err(Error::DegenerateSubfield(disc, t.to_string()));
            }
            subfields.insert(d);
        }
        assert_eq!(
            subfields.len(),
            h - 1,
            "index-2 subgroups of Cl({disc}) must fix distinct quadratic subfields"
        );
        let _ = retry;
        return Ok(SubfieldSet {
            disc,
            degree: h as u64,
            subfields,
        });
    }
    Err(Error::RoundingFailure(disc, last_residual, 3))
}

/// Field equality test for two-torsion discriminants: same degree and same
/// quadratic subfields characterize equal multiquadratic fields.
pub fn same_field_two_torsion(disc1: i64, disc2: i64) -> Result<bool> {
    let s1 = quadratic_subfields(disc1)?;
    let s2 = quadratic_subfields(disc2)?;
    Ok(s1.degree == s2.degree && s1.subfields == s2.subfields)
}

/// The modular polynomial of level 2, evaluated exactly.
pub fn phi2_integer(x: &Integer, y: &Integer) -> Integer {
    let x2 = x.clone() * x;
    let y2 = y.clone() * y;
    let x3 = x2.clone() * x;
    let y3 = y2.clone() * y;
    let xy = x.clone() * y;

    let mut acc = -(x2.clone() * &y2);
    acc += &x3;
    acc += &y3;
    acc += Integer::from(1488) * (&x2 * y.clone() + &y2 * x.clone());
    acc += Integer::from(40_773_375) * &xy;
    acc -= Integer::from(162_000) * Integer::from(&x2 + &y2);
    acc += Integer::from(8_748_000_000i64) * (x.clone() + y);
    acc -= Integer::from(157_464_000_000_000i64);
    acc
}

/// Φ₂ on complex values, for floating residual checks.
pub fn phi2_complex(x: &BigComplex, y: &BigComplex) -> BigComplex {
    let prec = x.prec().max(y.prec());
    let f = |v: i64| Float::with_val(prec, v);
    let x2 = x.mul(x);
    let y2 = y.mul(y);
    let x3 = x2.mul(x);
    let y3 = y2.mul(y);
    let xy = x.mul(y);
    x3.add(&y3)
        .sub(&x2.mul(&y2))
        .add(&x2.mul(y).add(&y2.mul(x)).mul_float(&f(1488)))
        .add(&xy.mul_float(&f(40_773_375)))
        .sub(&x2.add(&y2).mul_float(&f(162_000)))
        .add(&x.add(y).mul_float(&f(8_748_000_000)))
        .sub(&BigComplex::with_prec(prec, 157_464_000_000_000f64, 0.0))
}

/// | |j(z)| − |q_z⁻¹| | for z in the fundamental domain; bounded by 2079.
pub fn fourier_deviation(z: &BigComplex, prec: u32) -> Result<Float> {
    let j = eval_j(z, prec)?;
    let two_pi = Float::with_val(prec, Constant::Pi) * 2;
    let inv_q_abs = Float::with_val(prec, &z.im * &two_pi).exp();
    Ok(Float::with_val(prec, j.abs() - inv_q_abs).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn c(prec: u32, re: f64, im: f64) -> BigComplex {
        BigComplex::with_prec(prec, re, im)
    }

    #[test]
    fn j_at_classical_points() {
        let prec = 256;
        let j_i = eval_j(&c(prec, 0.0, 1.0), prec).unwrap();
        assert!(Float::with_val(64, &j_i.re - 1728i32).abs() < 1e-60);
        assert!(Float::with_val(64, &j_i.im).abs() < 1e-60);

        let rho = BigComplex::new(
            Float::with_val(prec, -0.5),
            Float::with_val(prec, 3f64).sqrt() / 2,
        );
        let j_rho = eval_j(&rho, prec).unwrap();
        assert!(j_rho.abs() < 1e-60);

        let j_2i = eval_j(&c(prec, 0.0, 2.0), prec).unwrap();
        assert!(Float::with_val(64, &j_2i.re - 287496i32).abs() < 1e-55);
    }

    #[test]
    fn j_precision_bounds_enforced() {
        assert!(matches!(
            eval_j(&c(128, 0.0, 1.0), 32),
            Err(Error::PrecisionOutOfRange(32, _, _))
        ));
        assert!(matches!(
            eval_j(&c(128, 0.0, 1.0), MAX_PRECISION + 1),
            Err(Error::PrecisionOutOfRange(..))
        ));
        assert!(matches!(
            eval_j(&c(128, 0.0, -1.0), 128),
            Err(Error::NotUpperHalfPlane)
        ));
    }

    #[test]
    fn j_is_sl2_invariant() {
        let prec = 192u32;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let tau = c(
                prec,
                rng.gen_range(-0.5..0.5),
                rng.gen_range(0.8..1.5),
            );
            // random word in T, T⁻¹, S as an explicit matrix
            let (mut a, mut b, mut cc, mut d) = (1i64, 0i64, 0i64, 1i64);
            for _ in 0..rng.gen_range(1..8) {
                match rng.gen_range(0..3) {
                    0 => {
                        // T: (a b; c d) ↦ (a a+b; c c+d)
                        b += a;
                        d += cc;
                    }
                    1 => {
                        b -= a;
                        d -= cc;
                    }
                    _ => {
                        // S: columns (−b, a), (−d, c)
                        (a, b, cc, d) = (-b, a, -d, cc);
                    }
                }
            }
            let num = tau.mul_float(&Float::with_val(prec, a)).add(&c(prec, b as f64, 0.0));
            let den = tau.mul_float(&Float::with_val(prec, cc)).add(&c(prec, d as f64, 0.0));
            let moved = num.div(&den);
            let j1 = eval_j(&tau, prec).unwrap();
            let j2 = eval_j(&moved, prec).unwrap();
            let diff = j1.sub(&j2).abs();
            let scale = j1.abs().max(&Float::with_val(prec, 1));
            let rel = Float::with_val(64, diff / scale).to_f64();
            assert!(
                rel < (8.0 - prec as f64).exp2(),
                "invariance violated: rel = {rel:e} for γ = ({a}, {b}; {cc}, {d})"
            );
        }
    }

    #[test]
    fn fourier_gap_examples_and_samples() {
        let prec = 192u32;
        // z = i: |1728 − e^{2π}| ≈ 1192.51
        let gap = fourier_deviation(&c(prec, 0.0, 1.0), prec).unwrap();
        assert!((gap.to_f64() - 1192.5128).abs() < 0.01, "gap = {gap}");
        assert!(gap <= 2079);

        // z = (1 + i√3)/2: |0 − e^{π√3}| ≈ 230.76
        let corner = BigComplex::new(
            Float::with_val(prec, 0.5),
            Float::with_val(prec, 3f64).sqrt() / 2,
        );
        let gap = fourier_deviation(&corner, prec).unwrap();
        assert!((gap.to_f64() - 230.7649).abs() < 0.01, "gap = {gap}");

        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(99);
        for _ in 0..100 {
            let re: f64 = rng.gen_range(-0.5..0.5);
            let min_im = (1.0 - re * re).sqrt();
            let im = rng.gen_range(min_im..3.0);
            let gap = fourier_deviation(&c(prec, re, im), prec).unwrap();
            assert!(gap <= 2079, "z = {re} + {im}i has gap {gap}");
        }
    }

    fn coeffs(h: &HilbertPolynomial) -> Vec<i128> {
        h.coefficients
            .iter()
            .map(|c| c.to_i128().unwrap())
            .collect()
    }

    #[test]
    fn hcp_golden_values() {
        let h = hilbert_class_polynomial(-3).unwrap();
        assert_eq!(coeffs(&h), vec![0, 1]);
        assert_eq!(h.to_string(), "x");

        let h = hilbert_class_polynomial(-4).unwrap();
        assert_eq!(coeffs(&h), vec![-1728, 1]);
        assert_eq!(h.to_string(), "x - 1728");

        let h = hilbert_class_polynomial(-16).unwrap();
        assert_eq!(coeffs(&h), vec![-287496, 1]);

        let h = hilbert_class_polynomial(-43).unwrap();
        assert_eq!(coeffs(&h), vec![884736000, 1]);

        let h = hilbert_class_polynomial(-67).unwrap();
        assert_eq!(coeffs(&h), vec![147197952000, 1]);

        let h = hilbert_class_polynomial(-15).unwrap();
        assert_eq!(coeffs(&h), vec![-121287375, 191025, 1]);
        assert_eq!(h.to_string(), "x^2 + 191025*x - 121287375");
        assert!(h.max_residual < ROUNDING_TOLERANCE);
    }

    #[test]
    fn hcp_degree_matches_class_number() {
        for disc in (-250..0).filter(|&d: &i64| d % 4 == 0 || d.rem_euclid(4) == 1) {
            let h = hilbert_class_polynomial(disc).unwrap();
            assert_eq!(
                h.degree() as u64,
                qforms::class_number(disc).unwrap(),
                "Δ = {disc}"
            );
            assert!(h.max_residual < ROUNDING_TOLERANCE);
            if disc != -3 {
                assert!(h.coefficients[0] != 0, "constant term of H_{disc}");
            }
        }
    }

    #[test]
    fn conjugate_root_examples() {
        let roots = conjugate_roots(-4, 128).unwrap();
        assert_eq!(roots.len(), 1);
        assert!(Float::with_val(64, &roots[0].1.re - 1728i32).abs() < 1e-25);

        let roots = conjugate_roots(-15, 128).unwrap();
        assert_eq!(roots.len(), 2);
        let sum = roots[0].1.add(&roots[1].1);
        assert!(Float::with_val(64, &sum.re + 191025i32).abs() < 1e-20);
        for (_, r) in &roots {
            assert!(Float::with_val(64, &r.im).abs().to_f64() < 1e-20, "real roots");
        }

        // Δ = −23: the identity class gives a real root, the two order-3
        // classes a conjugate pair.
        let roots = conjugate_roots(-23, 128).unwrap();
        let real: Vec<_> = roots
            .iter()
            .filter(|(_, r)| Float::with_val(64, &r.im).abs().to_f64() < 1e-15)
            .collect();
        assert_eq!(real.len(), 1);
        assert_eq!(*real[0].0.a(), 1);
        let complex: Vec<_> = roots
            .iter()
            .filter(|(_, r)| Float::with_val(64, &r.im).abs().to_f64() >= 1e-15)
            .collect();
        assert_eq!(complex.len(), 2);
        let conj_sum = complex[0].1.im.clone() + &complex[1].1.im;
        assert!(Float::with_val(64, conj_sum).abs().to_f64() < 1e-15);
    }

    #[test]
    fn dominance_examples() {
        for disc in [-15i64, -23, -7392] {
            let report = dominance_check(disc).unwrap();
            assert!(
                report.max_ratio <= 0.1,
                "Δ = {disc}: ratio {}",
                report.max_ratio
            );
        }
        assert!(matches!(
            dominance_check(-4),
            Err(Error::NoNonDominantConjugate(-4))
        ));
    }

    #[test]
    fn subfield_examples() {
        let s = quadratic_subfields(-15).unwrap();
        assert_eq!(s.degree, 2);
        assert_eq!(s.subfields, BTreeSet::from([5]));

        let s = quadratic_subfields(-24).unwrap();
        assert_eq!(s.subfields, BTreeSet::from([2]));

        let s = quadratic_subfields(-96).unwrap();
        assert_eq!(s.degree, 4);
        assert_eq!(s.subfields, BTreeSet::from([2, 3, 6]));

        assert!(matches!(
            quadratic_subfields(-23),
            Err(Error::NotTwoTorsion(-23))
        ));

        // h = 1: no proper quadratic subfield
        let s = quadratic_subfields(-4).unwrap();
        assert!(s.subfields.is_empty());
    }

    #[test]
    fn subfields_match_hcp_discriminant_for_h2() {
        // For h = 2 the subgroup sum squared is (j − j')² = disc(H_Δ), so the
        // subfield must be the squarefree kernel of that discriminant.
        for disc in crate::orders::list_by_class_number(500, 2) {
            let s = quadratic_subfields(disc).unwrap();
            assert_eq!(s.degree, 2);
            let h = hilbert_class_polynomial(disc).unwrap();
            let kernel = squarefree_kernel_in_support(&h.quadratic_discriminant(), disc).unwrap();
            assert_eq!(s.subfields, BTreeSet::from([kernel]), "Δ = {disc}");
        }
    }

    #[test]
    fn field_equality_examples() {
        assert!(same_field_two_torsion(-15, -20).unwrap());
        assert!(!same_field_two_torsion(-15, -24).unwrap());
        assert!(same_field_two_torsion(-96, -96).unwrap());
        assert!(!same_field_two_torsion(-15, -96).unwrap());
    }

    #[test]
    fn phi2_values() {
        let z = phi2_integer(&Integer::from(1728), &Integer::from(287496));
        assert_eq!(z, 0);

        // the second zero pairs the rational j-values of conductors 1 and 2
        // over the field of discriminant −7
        let h7 = hilbert_class_polynomial(-7).unwrap();
        assert_eq!(h7.coefficients, vec![Integer::from(3375), Integer::from(1)]);
        let h28 = hilbert_class_polynomial(-28).unwrap();
        assert_eq!(
            h28.coefficients,
            vec![Integer::from(-16581375), Integer::from(1)]
        );
        let z = phi2_integer(&Integer::from(-3375), &Integer::from(16581375));
        assert_eq!(z, 0);

        let nz = phi2_integer(&Integer::from(5), &Integer::from(7));
        assert_ne!(nz, 0);
    }

    #[test]
    fn phi2_is_symmetric() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let a = Integer::from(rng.gen_range(-1_000_000i64..1_000_000));
            let b = Integer::from(rng.gen_range(-1_000_000i64..1_000_000));
            assert_eq!(phi2_integer(&a, &b), phi2_integer(&b, &a));
        }
        let x = c(128, 2.5, 0.0);
        let y = c(128, -7.25, 0.0);
        let d = phi2_complex(&x, &y).sub(&phi2_complex(&y, &x));
        assert!(d.abs().to_f64() < 1e-20);
    }

    #[test]
    fn scan_discriminants_have_real_roots() {
        // Two-torsion classes are ambiguous, hence fixed by conjugation, so
        // every root of H_Δ is real; the computed imaginary parts must be
        // rounding noise relative to the root magnitude.
        for disc in crate::orders::two_torsion_scan(10_000) {
            for (form, root) in conjugate_roots(disc, 192).unwrap() {
                let scale = root.abs().max(&Float::with_val(192, 1));
                let rel = Float::with_val(64, &root.im / &scale).abs().to_f64();
                assert!(rel < 1e-40, "Δ = {disc}, form {form}: relative Im {rel:e}");
            }
        }
    }

    #[test]
    fn hcp_has_squarefree_factorization_over_q() {
        // gcd(H, H') constant ⟺ distinct roots ⟺ disc(H) ≠ 0.
        fn poly_gcd_is_constant(h: &HilbertPolynomial) -> bool {
            use rug::Rational;
            let mut a: Vec<Rational> = h.coefficients.iter().map(Rational::from).collect();
            let mut b: Vec<Rational> = h
                .coefficients
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| Rational::from(c) * Rational::from(k as u64))
                .collect();
            let trim = |v: &mut Vec<Rational>| {
                while v.last().map(|c| *c == 0) == Some(true) {
                    v.pop();
                }
            };
            trim(&mut a);
            trim(&mut b);
            while !b.is_empty() {
                // a mod b
                while a.len() >= b.len() && !a.is_empty() {
                    let q = a.last().unwrap().clone() / b.last().unwrap().clone();
                    let shift = a.len() - b.len();
                    for (i, c) in b.iter().enumerate() {
                        let t = (c * &q).complete();
                        a[shift + i] -= t;
                    }
                    trim(&mut a);
                }
                std::mem::swap(&mut a, &mut b);
            }
            a.len() == 1
        }
        use rug::Complete;
        for disc in crate::orders::two_torsion_scan(2_000)
            .into_iter()
            .chain([-23, -31, -39, -55, -63, -92, -124, -156, -220, -252])
        {
            let h = hilbert_class_polynomial(disc).unwrap();
            if h.degree() >= 2 {
                assert!(poly_gcd_is_constant(&h), "H_{disc} has a repeated root");
            }
        }
    }
}
