//! Reduced primitive binary quadratic forms and Gauss composition.
//!
//! A form (a, b, c) stands for ax² + bxy + cy² with negative discriminant
//! Δ = b² − 4ac. The reduced representatives of discriminant Δ are exactly
//! the triples with
//!
//! ```text
//! gcd(a, b, c) = 1   and   (−a < b ≤ a < c  or  0 ≤ b ≤ a = c),
//! ```
//!
//! one per class of Cl(Δ). Composition of classes is realized by Dirichlet
//! composition after moving one factor to a representative whose leading
//! coefficient is coprime to the other's.

use crate::arith::gcd_i64;
use crate::{Error, Result};
use rug::ops::{NegAssign, RemRounding};
use rug::{Complete, Integer};
use std::collections::BTreeMap;

/// A primitive, positive definite integral binary quadratic form.
///
/// The derived ordering is lexicographic in (a, b, c), which for fixed
/// discriminant is the (a, b) ordering used everywhere in this crate.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Form {
    a: Integer,
    b: Integer,
    c: Integer,
}

impl std::fmt::Display for Form {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

impl Form {
    /// Validates primitivity, a > 0 and Δ < 0.
    pub fn new(a: Integer, b: Integer, c: Integer) -> Result<Form> {
        let disc = b.clone() * &b - Integer::from(4) * &a * &c;
        if a <= 0 || disc >= 0 {
            return Err(Error::NotPositiveDefinite(
                a.to_string(),
                b.to_string(),
                c.to_string(),
            ));
        }
        let g = a.clone().gcd(&b).gcd(&c);
        if g != 1 {
            return Err(Error::NonPrimitiveForm(
                a.to_string(),
                b.to_string(),
                c.to_string(),
            ));
        }
        Ok(Form { a, b, c })
    }

    pub fn from_i64(a: i64, b: i64, c: i64) -> Result<Form> {
        Form::new(Integer::from(a), Integer::from(b), Integer::from(c))
    }

    pub fn a(&self) -> &Integer {
        &self.a
    }

    pub fn b(&self) -> &Integer {
        &self.b
    }

    pub fn c(&self) -> &Integer {
        &self.c
    }

    pub fn disc(&self) -> Integer {
        self.b.clone() * &self.b - Integer::from(4) * &self.a * &self.c
    }

    /// Value ax² + bxy + cy².
    pub fn eval(&self, x: i64, y: i64) -> Integer {
        let x = Integer::from(x);
        let y = Integer::from(y);
        (&self.a * &x).complete() * &x
            + (&self.b * &x).complete() * &y
            + (&self.c * &y).complete() * &y
    }

    /// −a < b ≤ a < c or 0 ≤ b ≤ a = c.
    pub fn is_reduced(&self) -> bool {
        if self.a < self.c {
            let neg_a = -self.a.clone();
            self.b > neg_a && self.b <= self.a
        } else if self.a == self.c {
            self.b >= 0 && self.b <= self.a
        } else {
            false
        }
    }

    /// b = 0, b = a or a = c: the form equals its own inverse class.
    pub fn is_ambiguous(&self) -> bool {
        self.b == 0 || self.b == self.a || self.a == self.c
    }
}

/// Returns the unique reduced form equivalent to `f`.
pub fn reduce(f: &Form) -> Form {
    let disc = f.disc();
    let mut a = f.a.clone();
    let mut b = f.b.clone();
    let mut c;
    loop {
        // Normalize b into (−a, a].
        let two_a = Integer::from(2) * &a;
        let mut r = b.rem_euc(&two_a);
        if r > a {
            r -= &two_a;
        }
        b = r;
        c = (b.clone() * &b - &disc) / (Integer::from(4) * &a);
        if a > c {
            std::mem::swap(&mut a, &mut c);
            b.neg_assign();
            continue;
        }
        if a == c && b < 0 {
            b.neg_assign();
        }
        break;
    }
    let out = Form { a, b, c };
    debug_assert!(out.is_reduced());
    debug_assert_eq!(out.disc(), disc);
    out
}

fn valid_disc(disc: i64) -> Result<i64> {
    if disc < 0 && (disc.rem_euclid(4) == 0 || disc.rem_euclid(4) == 1) {
        Ok(disc)
    } else {
        Err(Error::InvalidDiscriminant(disc))
    }
}

/// The reduced form with a = 1: the identity of Cl(Δ).
pub fn identity_form(disc: i64) -> Result<Form> {
    let disc = valid_disc(disc)?;
    let r = disc.rem_euclid(4);
    Form::from_i64(1, r, (r - disc) / 4)
}

/// Inverse class: reduce (a, −b, c).
pub fn inverse(f: &Form) -> Form {
    reduce(&Form {
        a: f.a.clone(),
        b: -f.b.clone(),
        c: f.c.clone(),
    })
}

/// All reduced forms of discriminant Δ, sorted by (a, b).
///
/// The length of the result is the class number h(Δ), and exactly one entry
/// has a = 1.
pub fn enumerate_reduced(disc: i64) -> Result<Vec<Form>> {
    let disc = valid_disc(disc)?;
    let abs = -(disc as i128);
    let parity = disc.rem_euclid(2);
    let mut out = Vec::new();
    let mut a = 1i64;
    while 3 * (a as i128) * (a as i128) <= abs {
        let mut b = -a + 1;
        if b.rem_euclid(2) != parity {
            b += 1;
        }
        while b <= a {
            let num = (b as i128) * (b as i128) + abs;
            let den = 4 * (a as i128);
            if num % den == 0 {
                let c = num / den;
                let keep = if c > a as i128 {
                    true
                } else {
                    c == a as i128 && b >= 0
                };
                if keep {
                    let c = c as i64;
                    if gcd_i64(a, gcd_i64(b, c)) == 1 {
                        out.push(Form::from_i64(a, b, c).expect("enumerated form is valid"));
                    }
                }
            }
            b += 2;
        }
        a += 1;
    }
    out.sort();
    Ok(out)
}

/// h(Δ) = |T_Δ|.
pub fn class_number(disc: i64) -> Result<u64> {
    Ok(enumerate_reduced(disc)?.len() as u64)
}

/// Class numbers for all valid Δ with |Δ| ≤ bound, in one sweep.
///
/// Returns counts indexed by |Δ|; entries at invalid indices stay 0. This
/// enumerates every reduced triple exactly once and is the bulk counter used
/// by the discriminant scans and by the formula cross-check.
pub fn class_number_counts(bound: u64) -> Vec<u32> {
    let n = bound as i64;
    let mut counts = vec![0u32; bound as usize + 1];
    let mut a = 1i64;
    while 3 * a * a <= n {
        for b in 0..=a {
            let c_hi = (n + b * b) / (4 * a);
            for c in a..=c_hi {
                let d = 4 * a * c - b * b;
                if d > 0 && gcd_i64(a, gcd_i64(b, c)) == 1 {
                    // 0 < b < a < c also occurs with b negated.
                    let mult = if b == 0 || b == a || a == c { 1 } else { 2 };
                    counts[d as usize] += mult;
                }
            }
        }
        a += 1;
    }
    counts
}

/// Class number of Δ if every reduced form of Δ is ambiguous, `None` otherwise.
///
/// Aborts the enumeration at the first non-ambiguous form, which rejects
/// almost every discriminant after a handful of triples; this is what makes
/// the two-torsion scan cheap. Equivalence with the definitional test (every
/// class squares to the identity) is classical genus theory; the scan in
/// `orders` still re-confirms every survivor through composition.
pub fn ambiguous_only_class_number(disc: i64) -> Result<Option<u64>> {
    let disc = valid_disc(disc)?;
    let abs = -(disc as i128);
    let parity = disc.rem_euclid(2);
    let mut count = 0u64;
    let mut a = 1i64;
    while 3 * (a as i128) * (a as i128) <= abs {
        let mut b = -a + 1;
        if b.rem_euclid(2) != parity {
            b += 1;
        }
        while b <= a {
            let num = (b as i128) * (b as i128) + abs;
            let den = 4 * (a as i128);
            if num % den == 0 {
                let c = num / den;
                let keep = if c > a as i128 {
                    true
                } else {
                    c == a as i128 && b >= 0
                };
                if keep && gcd_i64(a, gcd_i64(b, c as i64)) == 1 {
                    if !(b == 0 || b == a || c == a as i128) {
                        return Ok(None);
                    }
                    count += 1;
                }
            }
            b += 2;
        }
        a += 1;
    }
    Ok(Some(count))
}

/// Replaces `f` by an equivalent form whose leading coefficient is coprime
/// to `n`, searching primitively represented values over a widening box.
fn equivalent_with_coprime_leading(f: &Form, n: &Integer) -> Result<Form> {
    for radius in [32i64, 128, 1024, 4096] {
        for x in -radius..=radius {
            for y in -radius..=radius {
                if gcd_i64(x, y) != 1 {
                    continue;
                }
                let val = f.eval(x, y);
                if val.clone().gcd(n) == 1 {
                    // Extend (x, y) to an SL₂(ℤ) matrix [[x, u], [y, v]].
                    let (g, s, t) =
                        Integer::from(x).gcd_cofactors(Integer::from(y), Integer::new());
                    debug_assert_eq!(g, 1);
                    let v = s;
                    let u = -t;
                    let xi = Integer::from(x);
                    let yi = Integer::from(y);
                    let b2 = Integer::from(2)
                        * ((&f.a * &xi).complete() * &u + (&f.c * &yi).complete() * &v)
                        + &f.b * ((&xi * &v).complete() + (&u * &yi).complete());
                    let c2 = (&f.a * &u).complete() * &u
                        + (&f.b * &u).complete() * &v
                        + (&f.c * &v).complete() * &v;
                    let out = Form {
                        a: val,
                        b: b2,
                        c: c2,
                    };
                    debug_assert_eq!(out.disc(), f.disc());
                    return Ok(out);
                }
            }
        }
    }
    Err(Error::CoprimeSearchExhausted(
        f.a.to_string(),
        f.b.to_string(),
        f.c.to_string(),
        n.to_string(),
    ))
}

/// Gauss composition: the reduced representative of the product class.
pub fn compose(f: &Form, g: &Form) -> Result<Form> {
    let disc = f.disc();
    if disc != g.disc() {
        return Err(Error::DiscriminantMismatch(
            disc.to_string(),
            g.disc().to_string(),
        ));
    }
    let g = if f.a.gcd_ref(&g.a).complete() == 1 {
        g.clone()
    } else {
        equivalent_with_coprime_leading(g, &f.a)?
    };
    let (a1, b1) = (&f.a, &f.b);
    let (a2, b2) = (&g.a, &g.b);
    // B ≡ b1 (mod 2a1) and B ≡ b2 (mod 2a2). With gcd(a1, a2) = 1 and
    // b1 ≡ b2 (mod 2) this system is solvable: B = b1 + 2·a1·t with
    // t ≡ a1⁻¹·(b2 − b1)/2 (mod a2), and then B² ≡ Δ (mod 4a1a2) holds
    // automatically.
    let half_diff = (b2 - b1).complete() / 2;
    let inv = a1
        .clone()
        .invert(a2)
        .expect("leading coefficients are coprime");
    let product: Integer = inv * half_diff;
    let t = product.rem_euc(a2);
    let a3 = (a1 * a2).complete();
    let bb = Integer::from(2) * a1 * &t + b1;
    let c3_num = bb.clone() * &bb - &disc;
    let c3_den = Integer::from(4) * &a3;
    debug_assert_eq!(c3_num.clone().rem_euc(&c3_den), 0);
    let c3 = c3_num / c3_den;
    let composed = Form {
        a: a3,
        b: bb,
        c: c3,
    };
    debug_assert_eq!(composed.disc(), disc);
    let out = reduce(&composed);
    debug_assert_eq!(out.a.clone().gcd(&out.b).gcd(&out.c), 1);
    Ok(out)
}

/// The class group Cl(Δ) as a composition table over the reduced forms.
#[derive(Debug, Clone)]
pub struct FormClassGroup {
    pub disc: i64,
    /// The set T_Δ, sorted by (a, b).
    pub forms: Vec<Form>,
    /// `table[i][j]` is the index of the reduced composite of forms i and j.
    pub table: Vec<Vec<usize>>,
    /// Invariant factors d₁ | d₂ | … with ∏ dᵢ = h(Δ); empty for the
    /// trivial group.
    pub elementary_divisors: Vec<u64>,
    /// Index of the a = 1 form.
    pub identity: usize,
}

impl FormClassGroup {
    pub fn order(&self) -> u64 {
        self.forms.len() as u64
    }

    /// Order of the element at `index`.
    pub fn element_order(&self, index: usize) -> u64 {
        let mut k = 1u64;
        let mut x = index;
        while x != self.identity {
            x = self.table[x][index];
            k += 1;
        }
        k
    }

    /// True when every class squares to the identity.
    pub fn is_two_torsion(&self) -> bool {
        (0..self.forms.len()).all(|i| self.table[i][i] == self.identity)
    }
}

fn invariant_factors(table: &[Vec<usize>], identity: usize) -> Vec<u64> {
    let n = table.len();
    if n == 1 {
        return vec![];
    }
    let order_of = |g: usize| -> u64 {
        let mut k = 1u64;
        let mut x = g;
        while x != identity {
            x = table[x][g];
            k += 1;
        }
        k
    };
    let (g, m) = (0..n)
        .map(|i| (i, order_of(i)))
        .max_by_key(|&(i, o)| (o, std::cmp::Reverse(i)))
        .expect("nonempty group");
    // Any element of maximal order generates a direct summand, so the
    // cosets of <g> carry the remaining factors.
    let mut coset = vec![usize::MAX; n];
    let mut reps = Vec::new();
    for x in 0..n {
        if coset[x] != usize::MAX {
            continue;
        }
        let id = reps.len();
        reps.push(x);
        let mut y = x;
        loop {
            coset[y] = id;
            y = table[y][g];
            if y == x {
                break;
            }
        }
    }
    let q = reps.len();
    let mut qt = vec![vec![0usize; q]; q];
    for (i, &ri) in reps.iter().enumerate() {
        for (j, &rj) in reps.iter().enumerate() {
            qt[i][j] = coset[table[ri][rj]];
        }
    }
    let mut out = invariant_factors(&qt, coset[identity]);
    out.push(m);
    out
}

/// Builds Cl(Δ): reduced forms, composition table and invariant factors.
pub fn class_group(disc: i64) -> Result<FormClassGroup> {
    let forms = enumerate_reduced(disc)?;
    let index: BTreeMap<&Form, usize> = forms.iter().zip(0..).collect();
    let n = forms.len();
    let mut table = vec![vec![0usize; n]; n];
    for i in 0..n {
        for j in i..n {
            let composite = compose(&forms[i], &forms[j])?;
            let k = *index
                .get(&composite)
                .expect("composite reduces into the enumerated set");
            table[i][j] = k;
            table[j][i] = k;
        }
    }
    let identity = *index
        .get(&identity_form(disc)?)
        .expect("a = 1 form exists");
    let elementary_divisors = invariant_factors(&table, identity);
    debug_assert_eq!(elementary_divisors.iter().product::<u64>(), n as u64);
    Ok(FormClassGroup {
        disc,
        forms,
        table,
        elementary_divisors,
        identity,
    })
}

/// True iff Cl(Δ) is annihilated by 2, i.e. |Cl(Δ)²| = 1.
pub fn is_two_torsion(disc: i64) -> Result<bool> {
    let forms = enumerate_reduced(disc)?;
    let id = identity_form(disc)?;
    let mut by_squares = true;
    for f in &forms {
        if compose(f, f)? != id {
            by_squares = false;
            break;
        }
    }
    debug_assert_eq!(
        by_squares,
        forms.iter().all(Form::is_ambiguous),
        "square test and ambiguity test disagree at Δ = {disc}"
    );
    Ok(by_squares)
}
