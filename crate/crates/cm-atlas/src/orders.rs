//! Arithmetic of imaginary quadratic orders.
//!
//! An order of discriminant Δ < 0 decomposes uniquely as Δ = D·f² with D the
//! discriminant of the surrounding field and f the conductor. The exact
//! class-number formula
//!
//! ```text
//! h(Δ) = f·h(D) / [O_K^× : O^×] · ∏_{p | f} (1 − (D/p)·p⁻¹)
//! ```
//!
//! is evaluated over exact integers (the Euler product clears denominators
//! termwise), and a bounded exhaustive scan produces all discriminants whose
//! class group is annihilated by 2.

use crate::arith::{factorize, gcd_i64, kronecker, square_divisor, squarefree_part};
use crate::qforms;
use crate::{Error, Result};
use rayon::prelude::*;

/// A discriminant split as Δ = D·f².
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct OrderDesc {
    pub disc: i64,
    /// Fundamental discriminant of the field.
    pub fundamental: i64,
    /// Conductor f ≥ 1.
    pub conductor: i64,
}

fn valid_disc(disc: i64) -> Result<i64> {
    if disc < 0 && (disc.rem_euclid(4) == 0 || disc.rem_euclid(4) == 1) {
        Ok(disc)
    } else {
        Err(Error::InvalidDiscriminant(disc))
    }
}

/// True for discriminants of maximal orders: D ≡ 1 (mod 4) squarefree, or
/// D = 4m with m ≡ 2, 3 (mod 4) squarefree.
pub fn is_fundamental(d: i64) -> bool {
    if d >= 0 || (d.rem_euclid(4) != 0 && d.rem_euclid(4) != 1) {
        return false;
    }
    if d.rem_euclid(4) == 1 {
        squarefree_part(d) == Ok(d)
    } else {
        let m = d / 4;
        (m.rem_euclid(4) == 2 || m.rem_euclid(4) == 3) && squarefree_part(m) == Ok(m)
    }
}

/// Splits Δ into fundamental discriminant and conductor.
pub fn split_discriminant(disc: i64) -> Result<OrderDesc> {
    let disc = valid_disc(disc)?;
    let m = squarefree_part(disc)?;
    let s = square_divisor(disc)?;
    let (fundamental, conductor) = if m.rem_euclid(4) == 1 {
        (m, s)
    } else {
        // Δ ≡ 0 (mod 4) here, which forces s even.
        debug_assert_eq!(s % 2, 0);
        (4 * m, s / 2)
    };
    debug_assert_eq!(fundamental * conductor * conductor, disc);
    debug_assert!(is_fundamental(fundamental));
    Ok(OrderDesc {
        disc,
        fundamental,
        conductor,
    })
}

fn valid_order_params(d: i64, f: i64) -> Result<()> {
    if !is_fundamental(d) {
        return Err(Error::NotFundamental(d));
    }
    if f < 1 {
        return Err(Error::InvalidConductor(f));
    }
    Ok(())
}

/// The unit index [O_K^× : O^×] for the order of conductor f in the field of
/// discriminant D: 2 for D = −4 with f > 1, 3 for D = −3 with f > 1, else 1.
pub fn unit_index(d: i64, f: i64) -> Result<u64> {
    valid_order_params(d, f)?;
    Ok(match (d, f) {
        (-4, f) if f > 1 => 2,
        (-3, f) if f > 1 => 3,
        _ => 1,
    })
}

/// Exact class number h(D·f²) from a known h(D).
///
/// The Euler product is cleared prime by prime: f·∏(1 − (D/p)/p) equals
/// ∏ p^(e−1)·(p − (D/p)) over p^e ∥ f, an integer.
pub fn class_number_from_parts(h_d: u64, d: i64, f: i64) -> Result<u64> {
    valid_order_params(d, f)?;
    let mut numerator = h_d as i64;
    for (p, e) in factorize(f)?.factors {
        let p = p as i64;
        numerator *= p.pow(e - 1) * (p - kronecker(d, p) as i64);
    }
    let u = unit_index(d, f)? as i64;
    if numerator % u != 0 {
        return Err(Error::NonIntegralClassNumber(d, f));
    }
    Ok((numerator / u) as u64)
}

/// h(D·f²) by the class-number formula, with h(D) counted from the reduced
/// forms of the fundamental discriminant.
pub fn class_number_formula(d: i64, f: i64) -> Result<u64> {
    valid_order_params(d, f)?;
    let h_d = qforms::class_number(d)?;
    class_number_from_parts(h_d, d, f)
}

/// Degree data of the compositum of the ring class fields of conductors f₁, f₂.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CompositumReport {
    /// lcm(f₁, f₂): the compositum sits inside the ring class field of this
    /// conductor.
    pub conductor: i64,
    /// Index of the compositum in that ring class field: 1 except in the
    /// exceptional cases (2 for D = −4, 3 for D = −3, both needing
    /// f₁, f₂ > 1 coprime).
    pub excess: u64,
}

/// Compositum degree per the case analysis on D, f₁, f₂.
pub fn compositum_degree(d: i64, f1: i64, f2: i64) -> Result<CompositumReport> {
    valid_order_params(d, f1)?;
    valid_order_params(d, f2)?;
    let conductor = f1 / gcd_i64(f1, f2) * f2;
    let exceptional = (d == -3 || d == -4) && f1 > 1 && f2 > 1 && gcd_i64(f1, f2) == 1;
    let excess = if exceptional {
        if d == -3 {
            3
        } else {
            2
        }
    } else {
        1
    };
    Ok(CompositumReport { conductor, excess })
}

/// Checks the class-number equalities that ℚ(j(τ₁)) = ℚ(j(τ₂)) forces on two
/// orders of the same field: h(f₁²D) = h(f₂²D) = h(f²D)/excess with
/// f = lcm(f₁, f₂).
pub fn pff2_consistent(d: i64, f1: i64, f2: i64) -> Result<bool> {
    valid_order_params(d, f1)?;
    let h_d = qforms::class_number(d)?;
    pff2_consistent_from_parts(h_d, d, f1, f2)
}

/// Same as [`pff2_consistent`] with h(D) supplied by the caller, for bulk
/// scans that memoize the fundamental class numbers.
pub fn pff2_consistent_from_parts(h_d: u64, d: i64, f1: i64, f2: i64) -> Result<bool> {
    let report = compositum_degree(d, f1, f2)?;
    let h1 = class_number_from_parts(h_d, d, f1)?;
    let h2 = class_number_from_parts(h_d, d, f2)?;
    let hf = class_number_from_parts(h_d, d, report.conductor)?;
    Ok(h1 == h2 && h1 * report.excess == hf)
}

/// All valid Δ with |Δ| ≤ bound whose class group is annihilated by 2,
/// sorted by |Δ|.
///
/// Candidates are located by the all-ambiguous enumeration (with early
/// abort), then each survivor is re-confirmed by squaring every class in the
/// composition table.
pub fn two_torsion_scan(bound: u64) -> Vec<i64> {
    let bound = bound as i64;
    let mut out: Vec<i64> = (3..=bound)
        .into_par_iter()
        .filter(|m| m % 4 == 0 || m % 4 == 3)
        .map(|m| -m)
        .filter(|&disc| {
            qforms::ambiguous_only_class_number(disc)
                .expect("scan discriminants are valid")
                .is_some()
        })
        .collect();
    out.sort_by_key(|&d| -d);
    for &disc in &out {
        assert!(
            qforms::is_two_torsion(disc).expect("scan discriminants are valid"),
            "ambiguity filter accepted Δ = {disc} but a class does not square to the identity"
        );
    }
    out
}

/// All valid Δ with |Δ| ≤ bound and h(Δ) = h, sorted by |Δ|.
pub fn list_by_class_number(bound: u64, h: u64) -> Vec<i64> {
    let counts = qforms::class_number_counts(bound);
    let mut out = Vec::new();
    for (m, &count) in counts.iter().enumerate().skip(3) {
        if (m % 4 == 0 || m % 4 == 3) && count as u64 == h {
            out.push(-(m as i64));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn split_examples() {
        assert_eq!(
            split_discriminant(-4).unwrap(),
            OrderDesc {
                disc: -4,
                fundamental: -4,
                conductor: 1
            }
        );
        assert_eq!(
            split_discriminant(-288).unwrap(),
            OrderDesc {
                disc: -288,
                fundamental: -8,
                conductor: 6
            }
        );
        assert_eq!(
            split_discriminant(-960).unwrap(),
            OrderDesc {
                disc: -960,
                fundamental: -15,
                conductor: 8
            }
        );
        assert_eq!(split_discriminant(-5), Err(Error::InvalidDiscriminant(-5)));
    }

    #[test]
    fn split_round_trips_to_bound() {
        for disc in (-100_000..0).filter(|&d: &i64| d % 4 == 0 || d.rem_euclid(4) == 1) {
            let o = split_discriminant(disc).unwrap();
            assert_eq!(o.fundamental * o.conductor * o.conductor, disc);
            assert!(is_fundamental(o.fundamental), "Δ = {disc}");
        }
    }

    #[test]
    fn fundamental_examples() {
        for d in [-3, -4, -7, -8, -11, -15, -20, -24, -163, -5460] {
            assert!(is_fundamental(d), "{d}");
        }
        for d in [-12, -16, -27, -28, -32, -36, -48, -60, -75, -100, -9] {
            assert!(!is_fundamental(d), "{d}");
        }
    }

    #[test]
    fn unit_index_cases() {
        assert_eq!(unit_index(-4, 2).unwrap(), 2);
        assert_eq!(unit_index(-3, 3).unwrap(), 3);
        assert_eq!(unit_index(-7, 5).unwrap(), 1);
        assert_eq!(unit_index(-3, 1).unwrap(), 1);
        assert_eq!(unit_index(-4, 1).unwrap(), 1);
        assert!(matches!(unit_index(-12, 2), Err(Error::NotFundamental(-12))));
        assert!(matches!(unit_index(-4, 0), Err(Error::InvalidConductor(0))));
    }

    #[test]
    fn class_number_formula_examples() {
        assert_eq!(class_number_formula(-3, 2).unwrap(), 1);
        assert_eq!(class_number_formula(-7, 2).unwrap(), 1);
        assert_eq!(class_number_formula(-15, 2).unwrap(), 2);
        // a couple of larger sanity points
        assert_eq!(class_number_formula(-4, 6).unwrap(), 4);
        assert_eq!(class_number_formula(-15, 8).unwrap(), 8);
    }

    #[test]
    fn formula_matches_enumeration_on_sample() {
        for disc in (-20_000..0).step_by(37).filter(|&d: &i64| d % 4 == 0 || d.rem_euclid(4) == 1) {
            let o = split_discriminant(disc).unwrap();
            assert_eq!(
                class_number_formula(o.fundamental, o.conductor).unwrap(),
                qforms::class_number(disc).unwrap(),
                "Δ = {disc}"
            );
        }
    }

    #[test]
    fn compositum_examples() {
        assert_eq!(
            compositum_degree(-7, 2, 3).unwrap(),
            CompositumReport {
                conductor: 6,
                excess: 1
            }
        );
        assert_eq!(
            compositum_degree(-4, 2, 3).unwrap(),
            CompositumReport {
                conductor: 6,
                excess: 2
            }
        );
        assert_eq!(
            compositum_degree(-4, 2, 6).unwrap(),
            CompositumReport {
                conductor: 6,
                excess: 1
            }
        );
        assert_eq!(compositum_degree(-3, 2, 3).unwrap().excess, 3);
    }

    #[test]
    fn compositum_excess_only_in_exceptional_cases() {
        for d in (-50..0).filter(|&d| is_fundamental(d)) {
            for f1 in 1..=12 {
                for f2 in 1..=12 {
                    let r = compositum_degree(d, f1, f2).unwrap();
                    let exceptional =
                        (d == -3 || d == -4) && f1 > 1 && f2 > 1 && gcd_i64(f1, f2) == 1;
                    if exceptional {
                        assert_eq!(r.excess, if d == -3 { 3 } else { 2 });
                    } else {
                        assert_eq!(r.excess, 1, "D = {d}, f1 = {f1}, f2 = {f2}");
                    }
                    assert_eq!(r.conductor, f1 / gcd_i64(f1, f2) * f2);
                }
            }
        }
    }

    #[test]
    fn pff2_examples() {
        assert!(pff2_consistent(-7, 1, 2).unwrap());
        assert!(pff2_consistent(-3, 2, 3).unwrap());
        assert!(!pff2_consistent(-7, 1, 3).unwrap());
    }

    #[test]
    fn pff2_conductor_ratio_property() {
        // Consistency forces f1/f2 ∈ {1, 2, 1/2}, except for D = −3 where
        // conductors 1, 2, 3 all give the rational j-value.
        for d in (-10_000..0).filter(|&d| is_fundamental(d)) {
            let h_d = qforms::class_number(d).unwrap();
            for f1 in 1i64..=30 {
                for f2 in f1..=30 {
                    if pff2_consistent_from_parts(h_d, d, f1, f2).unwrap() {
                        let ratio_ok = f2 == f1 || f2 == 2 * f1 || f1 == 2 * f2;
                        let minus3_ok = d == -3 && f1 <= 3 && f2 <= 3;
                        assert!(
                            ratio_ok || minus3_ok,
                            "D = {d}, f1 = {f1}, f2 = {f2} consistent but ratio not allowed"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn scan_smallest_bound() {
        assert_eq!(two_torsion_scan(4), vec![-3, -4]);
    }

    #[test]
    fn scan_bound_7500_shape() {
        let scan = two_torsion_scan(7500);
        assert_eq!(scan.len(), 101);
        let counts = qforms::class_number_counts(7500);
        let h1: Vec<i64> = scan
            .iter()
            .copied()
            .filter(|&d| counts[(-d) as usize] == 1)
            .collect();
        let h2: Vec<i64> = scan
            .iter()
            .copied()
            .filter(|&d| counts[(-d) as usize] == 2)
            .collect();
        assert_eq!(h1.len(), 13);
        assert_eq!(h2.len(), 29);
        assert_eq!(scan.first(), Some(&-3));
        assert_eq!(scan.last(), Some(&-7392));
        assert!(scan.contains(&-5460));
    }

    #[test]
    fn scan_closed_under_conductor_quotient() {
        let scan = two_torsion_scan(10_000);
        for &disc in &scan {
            let d = split_discriminant(disc).unwrap().fundamental;
            assert!(scan.contains(&d), "Δ = {disc} in scan but D = {d} missing");
        }
    }

    #[test]
    fn stretch_scan_adds_nothing_beyond_7392() {
        let scan = two_torsion_scan(100_000);
        assert_eq!(scan.len(), 101);
        assert_eq!(scan.last(), Some(&-7392));
    }

    #[test]
    fn list_by_class_number_examples() {
        let h1 = list_by_class_number(200, 1);
        assert_eq!(h1.len(), 13);
        assert_eq!(h1.last(), Some(&-163));

        let h2 = list_by_class_number(500, 2);
        assert_eq!(h2.len(), 29);
        assert_eq!(h2.last(), Some(&-427));

        let h3 = list_by_class_number(2000, 3);
        assert!(h3.contains(&-23) && h3.contains(&-31));
    }
}
