//! Hilbert-class-polynomial cache file.
//!
//! One record per line, `Δ;c₀,c₁,…,c_h` in decimal with the coefficients in
//! increasing degree, sorted by |Δ|. Stored coefficients are byte-identical
//! across runs; corrupt lines are skipped with a warning and recomputed on
//! demand.

use cm_atlas::modular::HilbertPolynomial;
use cm_atlas::Atlas;
use rug::Integer;
use std::path::Path;
use std::str::FromStr;

fn parse_line(line: &str) -> Option<HilbertPolynomial> {
    let (disc_str, coeff_str) = line.split_once(';')?;
    let disc: i64 = disc_str.trim().parse().ok()?;
    let coefficients: Option<Vec<Integer>> = coeff_str
        .split(',')
        .map(|c| Integer::from_str(c.trim()).ok())
        .collect();
    let coefficients = coefficients?;
    if coefficients.is_empty() {
        return None;
    }
    Some(HilbertPolynomial {
        disc,
        coefficients,
        max_residual: 0.0,
    })
}

/// Loads every parseable record into the atlas. Returns the number of
/// records accepted.
pub fn load(path: &Path, atlas: &Atlas) -> std::io::Result<usize> {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(0),
        Err(e) => return Err(e),
    };
    let mut accepted = 0usize;
    for (idx, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        match parse_line(line) {
            Some(h) => match atlas.preload_hcp(h) {
                Ok(()) => accepted += 1,
                Err(e) => eprintln!(
                    "warning: cache line {} rejected ({e}); it will be recomputed",
                    idx + 1
                ),
            },
            None => eprintln!(
                "warning: cache line {} is corrupt and was ignored",
                idx + 1
            ),
        }
    }
    Ok(accepted)
}

pub fn record(h: &HilbertPolynomial) -> String {
    let coeffs: Vec<String> = h.coefficients.iter().map(|c| c.to_string()).collect();
    format!("{};{}", h.disc, coeffs.join(","))
}

/// Rewrites the cache with every polynomial currently memoized, sorted by |Δ|.
pub fn save(path: &Path, atlas: &Atlas) -> std::io::Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    let mut out = String::new();
    for h in atlas.cached_hcps() {
        out.push_str(&record(&h));
        out.push('\n');
    }
    std::fs::write(path, out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn record_format() {
        let atlas = Atlas::new();
        let h = atlas.hcp(-4).unwrap();
        assert_eq!(record(&h), "-4;-1728,1");
        let h = atlas.hcp(-15).unwrap();
        assert_eq!(record(&h), "-15;-121287375,191025,1");
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(parse_line("not a record").is_none());
        assert!(parse_line("-4;-1728,xyz").is_none());
        assert!(parse_line("-4;").is_none());
        assert!(parse_line("-4;-1728,1").is_some());
    }
}
