//! Command-line surface for the cm-atlas library.
//!
//! Exit codes: 0 on success (and on passing verifications), 1 when a
//! verification command finds a violation, 2 on usage or input errors.
//! All stdout output is byte-deterministic for a fixed configuration;
//! timing goes to stderr.

mod cache;

use clap::{Parser, Subcommand, ValueEnum};
use cm_atlas::arith::gcd_i64;
use cm_atlas::survey::{Atlas, AtlasConfig, CmPoint, RationalLine};
use cm_atlas::{modular, orders, qforms};
use serde_json::{json, Value};
use std::path::PathBuf;
use std::time::Instant;

#[derive(Debug, Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(
    name = "cm-atlas",
    version,
    about = "Class groups of imaginary quadratic orders, Hilbert class polynomials, and CM-points on rational lines"
)]
struct Cli {
    /// Output format (csv only for tabular commands).
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Hilbert-polynomial cache file; the CM_ATLAS_CACHE environment
    /// variable overrides this flag.
    #[arg(long, global = true)]
    cache: Option<PathBuf>,

    /// Discriminant bound for the two-torsion scan.
    #[arg(long, global = true, default_value_t = 10_000)]
    scan_bound: u64,

    /// Largest bound accepted for `table1 --bound`.
    #[arg(long, global = true, default_value_t = 100_000)]
    stretch_bound: u64,

    /// Guard bits added to every precision estimate (minimum 32).
    #[arg(long, global = true, default_value_t = 64)]
    guard_bits: u32,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List the reduced forms of a discriminant.
    Forms {
        #[arg(long, allow_hyphen_values = true)]
        disc: i64,
    },
    /// Class group structure (forms, composition table, invariant factors).
    Classgroup {
        #[arg(long, allow_hyphen_values = true)]
        disc: i64,
    },
    /// Hilbert class polynomial with certified integer coefficients.
    Hcp {
        #[arg(long, allow_hyphen_values = true)]
        disc: i64,
    },
    /// Discriminants whose class group is annihilated by 2, with order data.
    Table1 {
        /// Scan bound override (capped by --stretch-bound).
        #[arg(long)]
        bound: Option<u64>,
    },
    /// Fields presented by at least two distinct fundamental discriminants.
    Table2,
    /// Enumerate CM-points.
    Points {
        /// The 169 rational CM-points.
        #[arg(long)]
        rational: bool,
        /// The 217 quadratic CM-points up to conjugacy.
        #[arg(long, conflicts_with = "rational")]
        quadratic: bool,
    },
    /// Non-special rational lines through three or more rational CM-points.
    ScanCollinear,
    /// Distinctness and avoidance audit of the 217 conjugate-pair lines.
    AuditQuadraticLines,
    /// Run the field-couple and conductor-doubling verification legs plus
    /// the exception inventory.
    VerifyTheorem,
    /// Quadratic subfields of Q(j) for a two-torsion discriminant.
    Subfields {
        #[arg(long, allow_hyphen_values = true)]
        disc: i64,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Forms { .. } => "forms",
            Command::Classgroup { .. } => "classgroup",
            Command::Hcp { .. } => "hcp",
            Command::Table1 { .. } => "table1",
            Command::Table2 => "table2",
            Command::Points { .. } => "points",
            Command::ScanCollinear => "scan-collinear",
            Command::AuditQuadraticLines => "audit-quadratic-lines",
            Command::VerifyTheorem => "verify-theorem",
            Command::Subfields { .. } => "subfields",
        }
    }

    fn inputs(&self) -> Value {
        match self {
            Command::Forms { disc }
            | Command::Classgroup { disc }
            | Command::Hcp { disc }
            | Command::Subfields { disc } => json!({ "disc": disc }),
            Command::Table1 { bound } => json!({ "bound": bound }),
            Command::Points {
                rational,
                quadratic,
            } => json!({ "rational": rational, "quadratic": quadratic }),
            _ => json!({}),
        }
    }

    fn supports_csv(&self) -> bool {
        matches!(
            self,
            Command::Forms { .. }
                | Command::Table1 { .. }
                | Command::Table2
                | Command::Points { .. }
        )
    }
}

/// Everything a command produces: a machine-readable value, the rendered
/// text, an optional csv body, and the verdict (None for enumerations).
struct Output {
    value: Value,
    text: String,
    csv: Option<String>,
    pass: Option<bool>,
}

fn main() {
    std::process::exit(run());
}

fn run() -> i32 {
    let cli = Cli::parse();
    if cli.guard_bits < 32 {
        eprintln!("error: --guard-bits must be at least 32");
        return 2;
    }
    if cli.scan_bound < 4 || cli.stretch_bound < cli.scan_bound {
        eprintln!("error: need 4 <= --scan-bound <= --stretch-bound");
        return 2;
    }
    if cli.format == Format::Csv && !cli.command.supports_csv() {
        eprintln!("error: csv output is only available for tabular commands (forms, table1, table2, points)");
        return 2;
    }
    if let Command::Points {
        rational,
        quadratic,
    } = &cli.command
    {
        if !rational && !quadratic {
            eprintln!("error: points needs --rational or --quadratic");
            return 2;
        }
    }
    if let Command::Table1 { bound: Some(b) } = &cli.command {
        if *b > cli.stretch_bound {
            eprintln!(
                "error: --bound {} exceeds --stretch-bound {}",
                b, cli.stretch_bound
            );
            return 2;
        }
    }

    let cache_path = std::env::var_os("CM_ATLAS_CACHE")
        .map(PathBuf::from)
        .or_else(|| cli.cache.clone());

    let atlas = Atlas::with_config(AtlasConfig {
        scan_bound: cli.scan_bound,
        leg_b_bound: 2_000,
        guard_bits: cli.guard_bits,
    });
    if let Some(path) = &cache_path {
        if let Err(e) = cache::load(path, &atlas) {
            eprintln!("error: cannot read cache {}: {e}", path.display());
            return 2;
        }
    }

    let started = Instant::now();
    let result = dispatch(&cli, &atlas);
    let elapsed = started.elapsed();

    if let Some(path) = &cache_path {
        if let Err(e) = cache::save(path, &atlas) {
            eprintln!("warning: cannot write cache {}: {e}", path.display());
        }
    }

    match result {
        Ok(output) => {
            let report = json!({
                "command": cli.command.name(),
                "config": config_value(&cli, &cache_path),
                "inputs": cli.command.inputs(),
                "outputs": output.value,
                "pass": output.pass,
            });
            match cli.format {
                Format::Json => println!(
                    "{}",
                    serde_json::to_string_pretty(&report).expect("report serializes")
                ),
                Format::Text => print!("{}", output.text),
                Format::Csv => print!("{}", output.csv.expect("csv support checked upfront")),
            }
            eprintln!(
                "# {} finished in {} ms",
                cli.command.name(),
                elapsed.as_millis()
            );
            match output.pass {
                Some(false) => 1,
                _ => 0,
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn config_value(cli: &Cli, cache_path: &Option<PathBuf>) -> Value {
    json!({
        "scan_bound": cli.scan_bound,
        "stretch_bound": cli.stretch_bound,
        "guard_bits": cli.guard_bits,
        "cache_path": cache_path.as_ref().map(|p| p.display().to_string()),
        "format": match cli.format {
            Format::Text => "text",
            Format::Json => "json",
            Format::Csv => "csv",
        },
    })
}

fn dispatch(cli: &Cli, atlas: &Atlas) -> cm_atlas::Result<Output> {
    match &cli.command {
        Command::Forms { disc } => cmd_forms(*disc),
        Command::Classgroup { disc } => cmd_classgroup(*disc),
        Command::Hcp { disc } => cmd_hcp(atlas, *disc),
        Command::Table1 { bound } => cmd_table1(bound.unwrap_or(cli.scan_bound)),
        Command::Table2 => cmd_table2(atlas),
        Command::Points { rational, .. } => cmd_points(atlas, *rational),
        Command::ScanCollinear => cmd_scan_collinear(atlas),
        Command::AuditQuadraticLines => cmd_audit(atlas),
        Command::VerifyTheorem => cmd_verify(atlas),
        Command::Subfields { disc } => cmd_subfields(*disc),
    }
}

fn divisors_string(divisors: &[u64]) -> String {
    if divisors.is_empty() {
        "trivial".to_string()
    } else {
        divisors
            .iter()
            .map(|d| d.to_string())
            .collect::<Vec<_>>()
            .join("*")
    }
}

/// ℚ(√a)·ℚ(√b) has third subfield ℚ(√(ab/gcd²)).
fn radicand_product(a: u64, b: u64) -> u64 {
    let g = gcd_i64(a as i64, b as i64) as u64;
    (a / g) * (b / g)
}

/// Human label of a multiquadratic field from its full set of quadratic
/// subfields, via a minimal generating set.
fn field_label(subfields: &[u64]) -> String {
    if subfields.is_empty() {
        return "Q".to_string();
    }
    let mut generators: Vec<u64> = Vec::new();
    let mut span: Vec<u64> = vec![1];
    for &d in subfields {
        if span.contains(&d) {
            continue;
        }
        generators.push(d);
        let mut next = span.clone();
        for &s in &span {
            next.push(radicand_product(s, d));
        }
        next.sort_unstable();
        next.dedup();
        span = next;
    }
    let parts: Vec<String> = generators.iter().map(|d| format!("sqrt({d})")).collect();
    format!("Q({})", parts.join(", "))
}

fn form_value(f: &qforms::Form) -> Value {
    json!([
        f.a().to_i64().expect("form entry fits i64"),
        f.b().to_i64().expect("form entry fits i64"),
        f.c().to_i64().expect("form entry fits i64"),
    ])
}

fn point_value(p: &CmPoint) -> Value {
    json!({
        "disc1": p.disc1,
        "disc2": p.disc2,
        "x": p.x.to_string(),
        "y": p.y.to_string(),
    })
}

fn line_value(l: &RationalLine) -> Value {
    json!({
        "a1": l.a1().to_string(),
        "a2": l.a2().to_string(),
        "b": l.b().to_string(),
    })
}

fn cmd_forms(disc: i64) -> cm_atlas::Result<Output> {
    let forms = qforms::enumerate_reduced(disc)?;
    let mut text = format!("{} reduced forms of discriminant {}\n", forms.len(), disc);
    let mut csv = String::from("a,b,c\n");
    for f in &forms {
        text.push_str(&format!("{f}\n"));
        csv.push_str(&format!("{},{},{}\n", f.a(), f.b(), f.c()));
    }
    Ok(Output {
        value: json!({
            "disc": disc,
            "class_number": forms.len(),
            "forms": forms.iter().map(form_value).collect::<Vec<_>>(),
        }),
        text,
        csv: Some(csv),
        pass: None,
    })
}

fn cmd_classgroup(disc: i64) -> cm_atlas::Result<Output> {
    let group = qforms::class_group(disc)?;
    let mut text = format!(
        "Cl({}) has order {} with invariant factors {}\n",
        disc,
        group.order(),
        divisors_string(&group.elementary_divisors)
    );
    for (i, f) in group.forms.iter().enumerate() {
        let marker = if i == group.identity {
            "  (identity)"
        } else {
            ""
        };
        text.push_str(&format!("[{i}] {f}{marker}\n"));
    }
    Ok(Output {
        value: json!({
            "disc": disc,
            "order": group.order(),
            "elementary_divisors": group.elementary_divisors,
            "identity": group.identity,
            "forms": group.forms.iter().map(form_value).collect::<Vec<_>>(),
            "table": group.table,
            "two_torsion": group.is_two_torsion(),
        }),
        text,
        csv: None,
        pass: None,
    })
}

fn cmd_hcp(atlas: &Atlas, disc: i64) -> cm_atlas::Result<Output> {
    let h = atlas.hcp(disc)?;
    Ok(Output {
        value: json!({
            "disc": disc,
            "degree": h.degree(),
            "coefficients": h
                .coefficients
                .iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>(),
            "record": cache::record(&h),
        }),
        text: format!("{h}\n"),
        csv: None,
        pass: None,
    })
}

fn cmd_table1(bound: u64) -> cm_atlas::Result<Output> {
    let scan = orders::two_torsion_scan(bound);
    let mut rows = Vec::new();
    let mut text = format!(
        "{} discriminants with two-torsion class group, |D| <= {}\n",
        scan.len(),
        bound
    );
    text.push_str("delta\tD\tf\th\tdivisors\n");
    let mut csv = String::from("delta,D,f,h,divisors\n");
    for disc in scan {
        let order = orders::split_discriminant(disc)?;
        let group = qforms::class_group(disc)?;
        text.push_str(&format!(
            "{}\t{}\t{}\t{}\t{}\n",
            disc,
            order.fundamental,
            order.conductor,
            group.order(),
            divisors_string(&group.elementary_divisors)
        ));
        let csv_div = group
            .elementary_divisors
            .iter()
            .map(|d| d.to_string())
            .collect::<Vec<_>>()
            .join("*");
        csv.push_str(&format!(
            "{},{},{},{},{}\n",
            disc,
            order.fundamental,
            order.conductor,
            group.order(),
            csv_div
        ));
        rows.push(json!({
            "disc": disc,
            "fundamental": order.fundamental,
            "conductor": order.conductor,
            "class_number": group.order(),
            "divisors": group.elementary_divisors,
        }));
    }
    Ok(Output {
        value: json!({ "bound": bound, "count": rows.len(), "rows": rows }),
        text,
        csv: Some(csv),
        pass: None,
    })
}

fn cmd_table2(atlas: &Atlas) -> cm_atlas::Result<Output> {
    let rows = atlas.field_table()?;
    let mut text = format!(
        "{} fields presented by >= 2 fundamental discriminants\n",
        rows.len()
    );
    let mut csv = String::from("field,degree,divisors,discriminants\n");
    let mut values = Vec::new();
    for row in &rows {
        let label = field_label(&row.subfields);
        let discs: Vec<String> = row.discriminants.iter().map(|d| d.to_string()).collect();
        text.push_str(&format!(
            "{label}\tdegree {}\tCl = {}\t{}\n",
            row.degree,
            divisors_string(&row.class_divisors),
            discs.join(" ")
        ));
        let csv_div = row
            .class_divisors
            .iter()
            .map(|d| d.to_string())
            .collect::<Vec<_>>()
            .join("*");
        csv.push_str(&format!(
            "{label},{},{},{}\n",
            row.degree,
            csv_div,
            discs.join(" ")
        ));
        values.push(json!({
            "field": label,
            "subfields": row.subfields,
            "degree": row.degree,
            "divisors": row.class_divisors,
            "discriminants": row.discriminants,
        }));
    }
    Ok(Output {
        value: json!({ "count": rows.len(), "rows": values }),
        text,
        csv: Some(csv),
        pass: None,
    })
}

fn cmd_points(atlas: &Atlas, rational: bool) -> cm_atlas::Result<Output> {
    if rational {
        let points = atlas.rational_cm_points()?;
        let mut text = format!("{} rational CM-points\n", points.len());
        let mut csv = String::from("disc1,disc2,x,y\n");
        for p in &points {
            text.push_str(&format!("({}, {})\t{p}\n", p.disc1, p.disc2));
            csv.push_str(&format!("{},{},{},{}\n", p.disc1, p.disc2, p.x, p.y));
        }
        Ok(Output {
            value: json!({
                "kind": "rational",
                "count": points.len(),
                "points": points.iter().map(point_value).collect::<Vec<_>>(),
            }),
            text,
            csv: Some(csv),
            pass: None,
        })
    } else {
        let q = atlas.quadratic_cm_points()?;
        let mut text = format!(
            "{} quadratic CM-points up to conjugacy ({} self-conjugate + {} from {} ordered pairs)\n",
            q.total(),
            q.conjugate_points.len(),
            q.nonconjugate_points.len(),
            q.ordered_pairs.len()
        );
        let mut csv = String::from("disc1,disc2,x,y\n");
        for p in q.iter_all() {
            text.push_str(&format!("({}, {})\t{p}\n", p.disc1, p.disc2));
            csv.push_str(&format!("{},{},{},{}\n", p.disc1, p.disc2, p.x, p.y));
        }
        Ok(Output {
            value: json!({
                "kind": "quadratic",
                "count": q.total(),
                "conjugate_count": q.conjugate_points.len(),
                "nonconjugate_count": q.nonconjugate_points.len(),
                "ordered_pair_count": q.ordered_pairs.len(),
                "same_fundamental_pairs": q.same_fundamental_pairs,
                "points": q.iter_all().map(point_value).collect::<Vec<_>>(),
            }),
            text,
            csv: Some(csv),
            pass: None,
        })
    }
}

fn cmd_scan_collinear(atlas: &Atlas) -> cm_atlas::Result<Output> {
    let scan = atlas.scan_collinear()?;
    let mut text = format!(
        "{} non-special lines through >= 3 rational CM-points (up to coordinate swap)\n",
        scan.lines.len()
    );
    let mut values = Vec::new();
    for entry in &scan.lines {
        let points: Vec<String> = entry.points.iter().map(|p| p.to_string()).collect();
        text.push_str(&format!("{}\n  points: {}\n", entry.line, points.join(" ")));
        values.push(json!({
            "line": line_value(&entry.line),
            "points": entry.points.iter().map(point_value).collect::<Vec<_>>(),
        }));
    }
    Ok(Output {
        value: json!({
            "count": scan.lines.len(),
            "raw_line_count": scan.raw_lines.len(),
            "lines": values,
        }),
        text,
        csv: None,
        pass: None,
    })
}

fn cmd_audit(atlas: &Atlas) -> cm_atlas::Result<Output> {
    let report = atlas.quadratic_line_audit()?;
    let mut text = format!(
        "audited {} conjugate-pair lines ({} self-conjugate, {} cross-discriminant)\n",
        report.line_count, report.conjugate_line_count, report.nonconjugate_line_count
    );
    text.push_str(&format!("pairwise distinct: {}\n", report.all_distinct));
    text.push_str(&format!("special lines: {}\n", report.special_lines.len()));
    text.push_str(&format!(
        "rational CM-points on self-conjugate lines: {}\n",
        report.equal_disc_incidences
    ));
    text.push_str(&format!(
        "rational CM-points on cross-discriminant lines: {}\n",
        report.cross_disc_incidences
    ));
    for inc in &report.rational_incidences {
        text.push_str(&format!(
            "  {} lies on the conjugate-pair line of the ({}, {})-point {}\n",
            inc.rational_point, inc.owner_point.disc1, inc.owner_point.disc2, inc.owner_point
        ));
    }
    text.push_str(&format!("pass: {}\n", report.pass));
    Ok(Output {
        value: json!({
            "line_count": report.line_count,
            "conjugate_line_count": report.conjugate_line_count,
            "nonconjugate_line_count": report.nonconjugate_line_count,
            "all_distinct": report.all_distinct,
            "special_lines": report.special_lines.iter().map(line_value).collect::<Vec<_>>(),
            "equal_disc_incidences": report.equal_disc_incidences,
            "cross_disc_incidences": report.cross_disc_incidences,
            "rational_incidences": report
                .rational_incidences
                .iter()
                .map(|inc| json!({
                    "line": line_value(&inc.line),
                    "rational_point": point_value(&inc.rational_point),
                    "owner_point": point_value(&inc.owner_point),
                    "owner_is_equal_discriminant": inc.owner_is_equal_discriminant,
                }))
                .collect::<Vec<_>>(),
        }),
        text,
        csv: None,
        pass: Some(report.pass),
    })
}

fn cmd_verify(atlas: &Atlas) -> cm_atlas::Result<Output> {
    let report = atlas.verify_theorem()?;
    let mut text = String::new();
    text.push_str(&format!(
        "legA: {} couples over {} fields, {} unexpected similarities -> {}\n",
        report.leg_a.couple_count,
        report.leg_a.field_count,
        report.leg_a.similar_pairs.len(),
        if report.leg_a.pass { "PASS" } else { "FAIL" }
    ));
    for c in &report.leg_a.couples {
        text.push_str(&format!(
            "  {} : {{{}, {}}}\n",
            field_label(&c.subfields),
            c.disc1,
            c.disc2
        ));
    }
    let legb: Vec<String> = report
        .leg_b
        .discriminants
        .iter()
        .map(|d| d.to_string())
        .collect();
    text.push_str(&format!(
        "legB: h(delta) = h(4*delta) in {{3, 4}} for delta in {{{}}}, {} unexpected similarities -> {}\n",
        legb.join(", "),
        report.leg_b.similar_discs.len(),
        if report.leg_b.pass { "PASS" } else { "FAIL" }
    ));
    text.push_str(&format!(
        "exceptions: {} rational, {} quadratic ({} + {}, {} ordered pairs), same-field pair {:?} -> {}\n",
        report.exceptions.rational_points,
        report.exceptions.quadratic_points,
        report.exceptions.conjugate_points,
        report.exceptions.nonconjugate_points,
        report.exceptions.ordered_pairs,
        report.exceptions.same_fundamental_pairs,
        if report.exceptions.pass { "PASS" } else { "FAIL" }
    ));
    text.push_str(&format!(
        "verdict: {}\n",
        if report.pass { "PASS" } else { "FAIL" }
    ));

    let value = json!({
        "legA": {
            "couple_count": report.leg_a.couple_count,
            "field_count": report.leg_a.field_count,
            "couples": report
                .leg_a
                .couples
                .iter()
                .map(|c| json!({
                    "field": field_label(&c.subfields),
                    "disc1": c.disc1,
                    "disc2": c.disc2,
                }))
                .collect::<Vec<_>>(),
            "similar_pairs": report.leg_a.similar_pairs,
            "pass": report.leg_a.pass,
        },
        "legB": {
            "discriminants": report.leg_b.discriminants,
            "similar_discs": report.leg_b.similar_discs,
            "pass": report.leg_b.pass,
        },
        "exceptions": {
            "rational_points": report.exceptions.rational_points,
            "quadratic_points": report.exceptions.quadratic_points,
            "conjugate_points": report.exceptions.conjugate_points,
            "nonconjugate_points": report.exceptions.nonconjugate_points,
            "ordered_pairs": report.exceptions.ordered_pairs,
            "same_fundamental_pairs": report.exceptions.same_fundamental_pairs,
            "pass": report.exceptions.pass,
        },
    });
    Ok(Output {
        value,
        text,
        csv: None,
        pass: Some(report.pass),
    })
}

fn cmd_subfields(disc: i64) -> cm_atlas::Result<Output> {
    let s = modular::quadratic_subfields(disc)?;
    let subfields: Vec<u64> = s.subfields.iter().copied().collect();
    let label = field_label(&subfields);
    let text = format!(
        "Q(j) for disc {} is {} of degree {} (quadratic subfields: {})\n",
        disc,
        label,
        s.degree,
        if subfields.is_empty() {
            "none".to_string()
        } else {
            subfields
                .iter()
                .map(|d| format!("sqrt({d})"))
                .collect::<Vec<_>>()
                .join(" ")
        }
    );
    Ok(Output {
        value: json!({
            "disc": disc,
            "degree": s.degree,
            "field": label,
            "subfields": subfields,
        }),
        text,
        csv: None,
        pass: None,
    })
}
