//! CM-point enumeration and exact line geometry.
//!
//! A CM-point is a pair (j(τ₁), j(τ₂)) of singular moduli. The rational ones
//! form the 13×13 grid of class-number-one j-values; the quadratic ones (up
//! to conjugacy) are assembled from the 29 class-number-two discriminants.
//! Everything downstream — collinearity scans, conjugate-pair lines, the
//! field-coincidence table and the two verification legs — runs in exact
//! arithmetic over ℚ or ℚ(√d).

mod poly;
mod quadnum;

pub use poly::{compose_affine, similar, SimilarityWitness};
pub use quadnum::{eval_int_poly, QuadNum};

use crate::modular::{self, HilbertPolynomial, SubfieldSet};
use crate::orders;
use crate::qforms;
use crate::{Error, Result};
use rayon::prelude::*;
use rug::{Complete, Integer, Rational};
use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::sync::Mutex;

/// A₁x₁ + A₂x₂ + B = 0 with the first nonzero coefficient scaled to 1.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RationalLine {
    a1: Rational,
    a2: Rational,
    b: Rational,
}

impl RationalLine {
    pub fn new(a1: Rational, a2: Rational, b: Rational) -> Result<RationalLine> {
        let scale = if a1.cmp0() != Ordering::Equal {
            a1.clone()
        } else if a2.cmp0() != Ordering::Equal {
            a2.clone()
        } else {
            return Err(Error::DegenerateLine);
        };
        Ok(RationalLine {
            a1: a1 / &scale,
            a2: a2 / &scale,
            b: b / &scale,
        })
    }

    pub fn a1(&self) -> &Rational {
        &self.a1
    }

    pub fn a2(&self) -> &Rational {
        &self.a2
    }

    pub fn b(&self) -> &Rational {
        &self.b
    }

    /// Vertical, horizontal, or the diagonal x₁ = x₂.
    pub fn is_special(&self) -> bool {
        self.a1.cmp0() == Ordering::Equal
            || self.a2.cmp0() == Ordering::Equal
            || (self.a1 == 1 && self.a2 == -1 && self.b.cmp0() == Ordering::Equal)
    }

    /// A₁x + A₂y + B, exactly.
    pub fn eval(&self, x: &QuadNum, y: &QuadNum) -> Result<QuadNum> {
        x.mul_rational(&self.a1)
            .add(&y.mul_rational(&self.a2))?
            .add(&QuadNum::rational(self.b.clone()))
    }

    pub fn contains(&self, p: &CmPoint) -> Result<bool> {
        Ok(self.eval(&p.x, &p.y)?.is_zero())
    }

    /// The image of the line under swapping the two coordinates.
    pub fn swapped(&self) -> RationalLine {
        RationalLine::new(self.a2.clone(), self.a1.clone(), self.b.clone())
            .expect("swap preserves non-degeneracy")
    }

    /// Line through two distinct points with rational coordinates.
    pub fn through_rational(p: &CmPoint, q: &CmPoint) -> Result<RationalLine> {
        let (px, py) = p.rational_coords()?;
        let (qx, qy) = q.rational_coords()?;
        let a1 = (py - qy).complete();
        let a2 = (qx - px).complete();
        let b = (px * qy).complete() - (qx * py).complete();
        RationalLine::new(a1, a2, b)
    }
}

impl std::fmt::Display for RationalLine {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}*x1 + {}*x2 + {} = 0", self.a1, self.a2, self.b)
    }
}

/// A CM-point with exact coordinates and the CM discriminants of both
/// coordinates.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CmPoint {
    pub x: QuadNum,
    pub y: QuadNum,
    pub disc1: i64,
    pub disc2: i64,
}

impl CmPoint {
    pub fn is_rational(&self) -> bool {
        self.x.is_rational() && self.y.is_rational()
    }

    fn rational_coords(&self) -> Result<(&Rational, &Rational)> {
        if !self.is_rational() {
            return Err(Error::MixedFields(self.x.radicand(), self.y.radicand()));
        }
        Ok((self.x.rational_part(), self.y.rational_part()))
    }

    /// Galois conjugate: both coordinates conjugated simultaneously.
    pub fn conjugate(&self) -> CmPoint {
        CmPoint {
            x: self.x.conj(),
            y: self.y.conj(),
            disc1: self.disc1,
            disc2: self.disc2,
        }
    }

    /// The point with coordinates interchanged.
    pub fn swapped(&self) -> CmPoint {
        CmPoint {
            x: self.y.clone(),
            y: self.x.clone(),
            disc1: self.disc2,
            disc2: self.disc1,
        }
    }
}

impl std::fmt::Display for CmPoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Exact 3-point collinearity test via the 2×2 difference determinant.
pub fn collinear(p1: &CmPoint, p2: &CmPoint, p3: &CmPoint) -> Result<bool> {
    let ax = p2.x.sub(&p1.x)?;
    let ay = p2.y.sub(&p1.y)?;
    let bx = p3.x.sub(&p1.x)?;
    let by = p3.y.sub(&p1.y)?;
    Ok(ax.mul(&by)?.sub(&bx.mul(&ay)?)?.is_zero())
}

/// The rational line through a quadratic point and its conjugate.
///
/// For P = (x, y) the line through P and P̄ has coefficient vector
/// (y − ȳ, x̄ − x, xȳ − x̄y); every entry is 2√d times a rational, so
/// dividing it out leaves a line over ℚ.
pub fn line_through_conjugates(p: &CmPoint) -> Result<RationalLine> {
    if p.is_rational() {
        return Err(Error::ConjugateOfRational);
    }
    if !p.x.is_rational() && !p.y.is_rational() && p.x.radicand() != p.y.radicand() {
        return Err(Error::MixedFields(p.x.radicand(), p.y.radicand()));
    }
    let a1 = p.y.surd_part().clone();
    let a2 = -p.x.surd_part().clone();
    let b = (p.x.surd_part() * p.y.rational_part()).complete()
        - (p.x.rational_part() * p.y.surd_part()).complete();
    let line = RationalLine::new(a1, a2, b)?;
    debug_assert!(line.contains(p)? && line.contains(&p.conjugate())?);
    Ok(line)
}

/// Configuration shared by the enumeration and verification pipelines.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AtlasConfig {
    /// Bound for the two-torsion scan (largest table entry is 7392).
    pub scan_bound: u64,
    /// Bound for the h(Δ) = h(4Δ) ∈ {3, 4} sweep.
    pub leg_b_bound: u64,
    /// Extra precision bits on top of the coefficient-size estimates.
    pub guard_bits: u32,
}

impl Default for AtlasConfig {
    fn default() -> AtlasConfig {
        AtlasConfig {
            scan_bound: 10_000,
            leg_b_bound: 2_000,
            guard_bits: 64,
        }
    }
}

/// Context for the survey computations: configuration plus a memo of every
/// Hilbert class polynomial computed so far.
#[derive(Debug)]
pub struct Atlas {
    config: AtlasConfig,
    hcps: Mutex<BTreeMap<i64, HilbertPolynomial>>,
}

impl Default for Atlas {
    fn default() -> Atlas {
        Atlas::new()
    }
}

impl Atlas {
    pub fn new() -> Atlas {
        Atlas::with_config(AtlasConfig::default())
    }

    pub fn with_config(config: AtlasConfig) -> Atlas {
        Atlas {
            config,
            hcps: Mutex::new(BTreeMap::new()),
        }
    }

    pub fn config(&self) -> AtlasConfig {
        self.config
    }

    /// H_Δ, memoized.
    pub fn hcp(&self, disc: i64) -> Result<HilbertPolynomial> {
        if let Some(h) = self.hcps.lock().unwrap().get(&disc) {
            return Ok(h.clone());
        }
        let h = modular::hilbert_class_polynomial_with_guard(disc, self.config.guard_bits)?;
        self.hcps
            .lock()
            .unwrap()
            .entry(disc)
            .or_insert_with(|| h.clone());
        Ok(h)
    }

    /// Seeds the memo with an externally stored polynomial after shape checks
    /// (degree h(Δ), monic).
    pub fn preload_hcp(&self, h: HilbertPolynomial) -> Result<()> {
        // Cache files are untrusted; cap the discriminant before enumerating
        // its forms.
        if h.disc < -10_000_000 {
            return Err(Error::InvalidDiscriminant(h.disc));
        }
        let expected = qforms::class_number(h.disc)?;
        if h.coefficients.len() as u64 != expected + 1
            || h.coefficients.last().map(|c| *c == 1) != Some(true)
        {
            return Err(Error::InvalidDiscriminant(h.disc));
        }
        self.hcps.lock().unwrap().insert(h.disc, h);
        Ok(())
    }

    /// Snapshot of the memo, sorted by |Δ|.
    pub fn cached_hcps(&self) -> Vec<HilbertPolynomial> {
        let mut out: Vec<HilbertPolynomial> =
            self.hcps.lock().unwrap().values().cloned().collect();
        out.sort_by_key(|h| -h.disc);
        out
    }

    pub fn cached_count(&self) -> usize {
        self.hcps.lock().unwrap().len()
    }

    /// The class-number-one discriminants in scan range with their rational
    /// j-invariants, sorted by |Δ|.
    pub fn rational_j_values(&self) -> Result<Vec<(i64, Integer)>> {
        orders::list_by_class_number(self.config.scan_bound, 1)
            .into_iter()
            .map(|disc| {
                let h = self.hcp(disc)?;
                debug_assert_eq!(h.degree(), 1);
                Ok((disc, -h.coefficients[0].clone()))
            })
            .collect()
    }

    /// All rational CM-points: the full grid of pairs of rational j-values,
    /// ordered by (|Δ₁|, |Δ₂|).
    pub fn rational_cm_points(&self) -> Result<Vec<CmPoint>> {
        let js = self.rational_j_values()?;
        let mut out = Vec::with_capacity(js.len() * js.len());
        for (d1, j1) in &js {
            for (d2, j2) in &js {
                out.push(CmPoint {
                    x: QuadNum::from_integer(j1),
                    y: QuadNum::from_integer(j2),
                    disc1: *d1,
                    disc2: *d2,
                });
            }
        }
        Ok(out)
    }

    /// Exact roots of the degree-2 polynomial H_Δ as elements of ℚ(√d):
    /// (dominant root, its conjugate).
    pub fn quadratic_roots(&self, disc: i64) -> Result<(QuadNum, QuadNum)> {
        let h = self.hcp(disc)?;
        assert_eq!(h.degree(), 2, "quadratic_roots needs h(Δ) = 2");
        let n = h.quadratic_discriminant();
        debug_assert!(n > 0);
        let d = modular::squarefree_kernel_in_support(&n, disc)?;
        if d <= 1 {
            return Err(Error::FieldMismatch(disc, n.to_string()));
        }
        let m_squared = n / Integer::from(d);
        let m = m_squared.sqrt();
        let u = Rational::from((-h.coefficients[1].clone(), Integer::from(2)));
        let v = Rational::from((m, Integer::from(2)));
        // The dominant root is u + |v|√d for u > 0 and u − |v|√d for u < 0.
        debug_assert!(u.cmp0() != Ordering::Equal);
        let signed_v = if u.cmp0() == Ordering::Greater {
            v
        } else {
            -v
        };
        let dominant = QuadNum::quadratic(u, signed_v, d)?;
        let other = dominant.conj();
        debug_assert!(eval_int_poly(&h.coefficients, &dominant)?.is_zero());
        debug_assert!(dominant.abs_cmp(&other)? == Ordering::Greater);
        Ok((dominant, other))
    }

    /// All quadratic CM-points up to conjugacy.
    pub fn quadratic_cm_points(&self) -> Result<QuadraticPoints> {
        let h2 = orders::list_by_class_number(self.config.scan_bound, 2);
        let mut roots = BTreeMap::new();
        for &disc in &h2 {
            roots.insert(disc, self.quadratic_roots(disc)?);
        }

        let mut conjugate_points = Vec::with_capacity(h2.len());
        for &disc in &h2 {
            let (dom, other) = &roots[&disc];
            let p = CmPoint {
                x: dom.clone(),
                y: other.clone(),
                disc1: disc,
                disc2: disc,
            };
            self.check_point_exact(&p)?;
            conjugate_points.push(p);
        }

        // Group the 29 discriminants by their real quadratic field ℚ(√d).
        let mut by_field: BTreeMap<u64, Vec<i64>> = BTreeMap::new();
        for &disc in &h2 {
            by_field
                .entry(roots[&disc].0.radicand())
                .or_default()
                .push(disc);
        }

        let mut ordered_pairs = Vec::new();
        let mut same_fundamental_pairs = Vec::new();
        for group in by_field.values() {
            for &d1 in group {
                for &d2 in group {
                    if d1 != d2 {
                        ordered_pairs.push((d1, d2));
                    }
                }
            }
            for (i, &d1) in group.iter().enumerate() {
                for &d2 in &group[i + 1..] {
                    let f1 = orders::split_discriminant(d1)?.fundamental;
                    let f2 = orders::split_discriminant(d2)?.fundamental;
                    if f1 == f2 {
                        same_fundamental_pairs.push((d1.max(d2), d1.min(d2)));
                    }
                }
            }
        }
        ordered_pairs.sort();
        same_fundamental_pairs.sort();

        let mut nonconjugate_points = Vec::with_capacity(2 * ordered_pairs.len());
        for &(d1, d2) in &ordered_pairs {
            let x = roots[&d1].0.clone();
            for y in [roots[&d2].0.clone(), roots[&d2].1.clone()] {
                let p = CmPoint {
                    x: x.clone(),
                    y,
                    disc1: d1,
                    disc2: d2,
                };
                self.check_point_exact(&p)?;
                nonconjugate_points.push(p);
            }
        }

        Ok(QuadraticPoints {
            conjugate_points,
            ordered_pairs,
            nonconjugate_points,
            same_fundamental_pairs,
        })
    }

    /// Asserts that both coordinates are exact roots of their Hilbert
    /// polynomials.
    fn check_point_exact(&self, p: &CmPoint) -> Result<()> {
        let h1 = self.hcp(p.disc1)?;
        let h2 = self.hcp(p.disc2)?;
        assert!(
            eval_int_poly(&h1.coefficients, &p.x)?.is_zero(),
            "x-coordinate of {p} is not a root of H_{}",
            p.disc1
        );
        assert!(
            eval_int_poly(&h2.coefficients, &p.y)?.is_zero(),
            "y-coordinate of {p} is not a root of H_{}",
            p.disc2
        );
        Ok(())
    }

    /// Groups the two-torsion discriminants by the field ℚ(j), keeping the
    /// fields hit by at least two distinct fundamental discriminants.
    pub fn field_table(&self) -> Result<Vec<FieldRow>> {
        let scan = orders::two_torsion_scan(self.config.scan_bound);
        let subfields: Vec<(i64, SubfieldSet)> = scan
            .par_iter()
            .map(|&disc| Ok((disc, modular::quadratic_subfields(disc)?)))
            .collect::<Result<_>>()?;
        let mut groups: BTreeMap<(u64, Vec<u64>), Vec<i64>> = BTreeMap::new();
        for (disc, set) in subfields {
            let key = (set.degree, set.subfields.iter().copied().collect());
            groups.entry(key).or_default().push(disc);
        }
        let mut rows = Vec::new();
        for ((degree, subfields), mut discs) in groups {
            discs.sort_by_key(|&d| -d);
            let fundamentals: BTreeSet<i64> = discs
                .iter()
                .map(|&d| orders::split_discriminant(d).map(|o| o.fundamental))
                .collect::<Result<_>>()?;
            if fundamentals.len() < 2 {
                continue;
            }
            let class_divisors = qforms::class_group(discs[0])?.elementary_divisors;
            for &d in &discs[1..] {
                debug_assert_eq!(
                    qforms::class_group(d)?.elementary_divisors,
                    class_divisors,
                    "class-group shape differs inside the row of Δ = {d}"
                );
            }
            rows.push(FieldRow {
                subfields,
                degree,
                discriminants: discs,
                class_divisors,
            });
        }
        // BTreeMap iteration already orders rows by (degree, subfields).
        Ok(rows)
    }

    /// Lines through ≥ 3 rational CM-points, excluding (by default) the
    /// special lines.
    ///
    /// The raw scan sees each qualifying line together with its mirror image
    /// under coordinate swap; the `lines` output keeps one representative per
    /// swap class, preferring the orientation with |A₂| < |A₁| (steep slope).
    pub fn scan_collinear(&self) -> Result<CollinearScan> {
        self.scan_collinear_with(false)
    }

    pub fn scan_collinear_with(&self, include_special: bool) -> Result<CollinearScan> {
        let points = self.rational_cm_points()?;
        let mut incidence: BTreeMap<RationalLine, BTreeSet<usize>> = BTreeMap::new();
        for i in 0..points.len() {
            for j in (i + 1)..points.len() {
                let line = RationalLine::through_rational(&points[i], &points[j])?;
                if !include_special && line.is_special() {
                    continue;
                }
                incidence.entry(line).or_default().extend([i, j]);
            }
        }

        let mut special_line_count = 0usize;
        let mut raw_lines = Vec::new();
        for (line, idx) in incidence.into_iter().filter(|(_, v)| v.len() >= 3) {
            if line.is_special() {
                special_line_count += 1;
                continue;
            }
            let pts: Vec<CmPoint> = idx.iter().map(|&i| points[i].clone()).collect();
            raw_lines.push(CollinearLine { line, points: pts });
        }

        // Collapse mirror pairs: scanning a coordinate-swapped copy of the
        // grid yields exactly the swapped lines, so each class has a stable
        // canonical representative.
        let mut classes: BTreeMap<RationalLine, Vec<CollinearLine>> = BTreeMap::new();
        for entry in &raw_lines {
            let key = entry.line.clone().min(entry.line.swapped());
            classes.entry(key).or_default().push(entry.clone());
        }
        let mut lines = Vec::new();
        for (_, members) in classes {
            let mut representatives: Vec<CollinearLine> = members
                .iter()
                .map(|m| {
                    let this_mag = m.line.a2.clone().abs();
                    let swap_mag = m.line.swapped().a2.clone().abs();
                    if this_mag <= swap_mag {
                        m.clone()
                    } else {
                        m.swapped()
                    }
                })
                .collect();
            representatives.sort_by(|a, b| a.line.cmp(&b.line).then_with(|| a.points.cmp(&b.points)));
            lines.push(representatives.swap_remove(0));
        }
        lines.sort_by(|a, b| a.line.cmp(&b.line));

        Ok(CollinearScan {
            lines,
            raw_lines,
            special_line_count,
        })
    }

    /// Builds the conjugate-pair line of every quadratic CM-point and checks
    /// distinctness, non-specialness and avoidance of rational CM-points.
    ///
    /// The incidence check is reported for all 217 lines and, separately, for
    /// the 29 lines coming from equal-discriminant points, so both scopes of
    /// the avoidance claim are checkable. (The full scope genuinely fails:
    /// two cross-discriminant lines and their coordinate swaps each contain
    /// one rational CM-point, exactly.)
    pub fn quadratic_line_audit(&self) -> Result<LineAuditReport> {
        let quadratic = self.quadratic_cm_points()?;
        let rational = self.rational_cm_points()?;

        let conjugate_line_count = quadratic.conjugate_points.len();
        let nonconjugate_line_count = quadratic.nonconjugate_points.len();
        let mut lines = Vec::with_capacity(quadratic.total());
        for p in &quadratic.conjugate_points {
            lines.push((line_through_conjugates(p)?, p.clone(), true));
        }
        for p in &quadratic.nonconjugate_points {
            lines.push((line_through_conjugates(p)?, p.clone(), false));
        }
        let distinct: BTreeSet<&RationalLine> = lines.iter().map(|(l, _, _)| l).collect();
        let all_distinct = distinct.len() == lines.len();

        let special_lines: Vec<RationalLine> = lines
            .iter()
            .filter(|(l, _, _)| l.is_special())
            .map(|(l, _, _)| l.clone())
            .collect();

        let mut rational_incidences = Vec::new();
        for (line, owner, from_conjugate_pair) in &lines {
            for p in &rational {
                if line.contains(p)? {
                    rational_incidences.push(RationalIncidence {
                        line: line.clone(),
                        rational_point: p.clone(),
                        owner_point: owner.clone(),
                        owner_is_equal_discriminant: *from_conjugate_pair,
                    });
                }
            }
        }
        let equal_disc_incidences = rational_incidences
            .iter()
            .filter(|i| i.owner_is_equal_discriminant)
            .count();
        let cross_disc_incidences = rational_incidences.len() - equal_disc_incidences;

        let pass = all_distinct && special_lines.is_empty() && rational_incidences.is_empty();
        Ok(LineAuditReport {
            line_count: lines.len(),
            conjugate_line_count,
            nonconjugate_line_count,
            all_distinct,
            special_lines,
            equal_disc_incidences,
            cross_disc_incidences,
            rational_incidences,
            pass,
        })
    }

    /// Runs both verification legs and the exception inventory.
    pub fn verify_theorem(&self) -> Result<TheoremReport> {
        // Leg A: couples of discriminants with distinct fundamental
        // discriminants sharing a field of degree ≥ 3.
        let table = self.field_table()?;
        let mut couples = Vec::new();
        let mut contributing_fields = 0usize;
        for row in table.iter().filter(|r| r.degree >= 3) {
            let mut in_row = 0usize;
            for (i, &d1) in row.discriminants.iter().enumerate() {
                for &d2 in &row.discriminants[i + 1..] {
                    let f1 = orders::split_discriminant(d1)?.fundamental;
                    let f2 = orders::split_discriminant(d2)?.fundamental;
                    if f1 != f2 {
                        couples.push(FieldCouple {
                            subfields: row.subfields.clone(),
                            disc1: d1,
                            disc2: d2,
                        });
                        in_row += 1;
                    }
                }
            }
            if in_row > 0 {
                contributing_fields += 1;
            }
        }
        let mut leg_a_similar = Vec::new();
        for couple in &couples {
            let h1 = self.hcp(couple.disc1)?;
            let h2 = self.hcp(couple.disc2)?;
            if similar(&h1.coefficients, &h2.coefficients).is_some() {
                leg_a_similar.push((couple.disc1, couple.disc2));
            }
        }
        let leg_a = LegAReport {
            couple_count: couples.len(),
            field_count: contributing_fields,
            pass: couples.len() == 15 && contributing_fields == 6 && leg_a_similar.is_empty(),
            couples,
            similar_pairs: leg_a_similar,
        };

        // Leg B: h(Δ) = h(4Δ) ∈ {3, 4} within the configured bound.
        let counts = qforms::class_number_counts(4 * self.config.leg_b_bound);
        let mut leg_b_discs = Vec::new();
        for m in 3..=self.config.leg_b_bound as usize {
            if m % 4 == 0 || m % 4 == 3 {
                let h = counts[m];
                if (h == 3 || h == 4) && counts[4 * m] == h {
                    leg_b_discs.push(-(m as i64));
                }
            }
        }
        let mut leg_b_similar = Vec::new();
        for &disc in &leg_b_discs {
            let h1 = self.hcp(disc)?;
            let h2 = self.hcp(4 * disc)?;
            if similar(&h1.coefficients, &h2.coefficients).is_some() {
                leg_b_similar.push(disc);
            }
        }
        let leg_b = LegBReport {
            pass: leg_b_discs == LEG_B_EXPECTED && leg_b_similar.is_empty(),
            discriminants: leg_b_discs,
            similar_discs: leg_b_similar,
        };

        // Exception inventory.
        let rational = self.rational_cm_points()?;
        let quadratic = self.quadratic_cm_points()?;
        let exceptions = ExceptionReport {
            rational_points: rational.len(),
            quadratic_points: quadratic.total(),
            conjugate_points: quadratic.conjugate_points.len(),
            nonconjugate_points: quadratic.nonconjugate_points.len(),
            ordered_pairs: quadratic.ordered_pairs.len(),
            same_fundamental_pairs: quadratic.same_fundamental_pairs.clone(),
            pass: rational.len() == 169
                && quadratic.total() == 217
                && quadratic.conjugate_points.len() == 29
                && quadratic.nonconjugate_points.len() == 188
                && quadratic.ordered_pairs.len() == 94
                && quadratic.same_fundamental_pairs == vec![(-15, -60)],
        };

        let pass = leg_a.pass && leg_b.pass && exceptions.pass;
        Ok(TheoremReport {
            leg_a,
            leg_b,
            exceptions,
            pass,
        })
    }
}

/// Expected outcome of the h(Δ) = h(4Δ) ∈ {3, 4} sweep.
pub const LEG_B_EXPECTED: [i64; 5] = [-23, -31, -39, -55, -63];

/// Quadratic CM-points up to conjugacy, split by kind.
#[derive(Debug, Clone)]
pub struct QuadraticPoints {
    /// (j, j̄) for each h = 2 discriminant, dominant coordinate first.
    pub conjugate_points: Vec<CmPoint>,
    /// Ordered pairs (Δ₁, Δ₂), Δ₁ ≠ Δ₂, of h = 2 discriminants with equal
    /// fields ℚ(j).
    pub ordered_pairs: Vec<(i64, i64)>,
    /// Two points per ordered pair (second coordinate runs over both roots).
    pub nonconjugate_points: Vec<CmPoint>,
    /// The unordered pairs among `ordered_pairs` sharing one fundamental
    /// discriminant, smallest |Δ| first.
    pub same_fundamental_pairs: Vec<(i64, i64)>,
}

impl QuadraticPoints {
    pub fn total(&self) -> usize {
        self.conjugate_points.len() + self.nonconjugate_points.len()
    }

    pub fn iter_all(&self) -> impl Iterator<Item = &CmPoint> {
        self.conjugate_points
            .iter()
            .chain(self.nonconjugate_points.iter())
    }
}

/// One row of the field-coincidence table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldRow {
    /// Squarefree d > 1 with ℚ(√d) inside the field; empty for ℚ itself.
    pub subfields: Vec<u64>,
    /// [L : ℚ] = h(Δ) for every member.
    pub degree: u64,
    /// All discriminants presenting the field, sorted by |Δ|.
    pub discriminants: Vec<i64>,
    /// Invariant factors of the (common) class group.
    pub class_divisors: Vec<u64>,
}

/// A line with at least three incident rational CM-points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CollinearLine {
    pub line: RationalLine,
    pub points: Vec<CmPoint>,
}

impl CollinearLine {
    fn swapped(&self) -> CollinearLine {
        let mut points: Vec<CmPoint> = self.points.iter().map(CmPoint::swapped).collect();
        points.sort();
        CollinearLine {
            line: self.line.swapped(),
            points,
        }
    }
}

#[derive(Debug, Clone)]
pub struct CollinearScan {
    /// One representative per swap class.
    pub lines: Vec<CollinearLine>,
    /// Every qualifying non-special line, before collapsing mirror images.
    pub raw_lines: Vec<CollinearLine>,
    /// Special lines with ≥ 3 points that were considered (only when the
    /// scan is asked to include them).
    pub special_line_count: usize,
}

/// A rational CM-point lying exactly on a conjugate-pair line.
#[derive(Debug, Clone)]
pub struct RationalIncidence {
    pub line: RationalLine,
    pub rational_point: CmPoint,
    /// The quadratic point whose conjugate-pair line is hit.
    pub owner_point: CmPoint,
    /// Whether the owner has Δ₁ = Δ₂ (one of the 29 self-conjugate points).
    pub owner_is_equal_discriminant: bool,
}

#[derive(Debug, Clone)]
pub struct LineAuditReport {
    pub line_count: usize,
    pub conjugate_line_count: usize,
    pub nonconjugate_line_count: usize,
    pub all_distinct: bool,
    pub special_lines: Vec<RationalLine>,
    /// Incidences whose owning point has Δ₁ = Δ₂ (always 0).
    pub equal_disc_incidences: usize,
    /// Incidences on cross-discriminant lines (4, in two swap pairs).
    pub cross_disc_incidences: usize,
    pub rational_incidences: Vec<RationalIncidence>,
    /// True only if *no* line at all carries a rational CM-point (the
    /// strict all-217 expectation; the cross-discriminant incidences make
    /// this false).
    pub pass: bool,
}

#[derive(Debug, Clone)]
pub struct FieldCouple {
    pub subfields: Vec<u64>,
    pub disc1: i64,
    pub disc2: i64,
}

#[derive(Debug, Clone)]
pub struct LegAReport {
    pub couples: Vec<FieldCouple>,
    pub couple_count: usize,
    pub field_count: usize,
    pub similar_pairs: Vec<(i64, i64)>,
    pub pass: bool,
}

#[derive(Debug, Clone)]
pub struct LegBReport {
    pub discriminants: Vec<i64>,
    pub similar_discs: Vec<i64>,
    pub pass: bool,
}

#[derive(Debug, Clone)]
pub struct ExceptionReport {
    pub rational_points: usize,
    pub quadratic_points: usize,
    pub conjugate_points: usize,
    pub nonconjugate_points: usize,
    pub ordered_pairs: usize,
    pub same_fundamental_pairs: Vec<(i64, i64)>,
    pub pass: bool,
}

#[derive(Debug, Clone)]
pub struct TheoremReport {
    pub leg_a: LegAReport,
    pub leg_b: LegBReport,
    pub exceptions: ExceptionReport,
    pub pass: bool,
}
