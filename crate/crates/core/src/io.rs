//! Plain-text import and export of representations and measurements.
//!
//! Both formats are line oriented; `#` starts a comment and blank lines are
//! ignored. Complex entries are written as `re im` pairs with 17 significant
//! digits.
//!
//! Irreps:
//!
//! ```text
//! irreps order 6 count 3
//! irrep 0 dim 1
//! 1.0000000000000000e0 0.0000000000000000e0      <- one line per group element,
//! ...                                             <- d² pairs, row-major
//! ```
//!
//! POVMs:
//!
//! ```text
//! povm dim 2 count 2
//! element 0
//! 5.0000000000000000e-1 0.0000000000000000e0 5.0000000000000000e-1 0.0000000000000000e0
//! ...                                             <- one line per row
//! ```

use std::fmt::Write;

use num_complex::Complex64;

use crate::discrimination::Povm;
use crate::error::{HspError, Result};
use crate::group::GroupTable;
use crate::linalg::CMat;
use crate::rep::{verify_irrep_set, Irrep, IrrepSet};

/// Tolerance applied to imported irreps.
pub const IMPORT_TOLERANCE: f64 = 1e-8;

fn push_entries(out: &mut String, entries: impl Iterator<Item = Complex64>) {
    let line: Vec<String> = entries
        .map(|z| format!("{:.16e} {:.16e}", z.re, z.im))
        .collect();
    out.push_str(&line.join(" "));
    out.push('\n');
}

fn row_major(m: &CMat) -> impl Iterator<Item = Complex64> + '_ {
    (0..m.nrows()).flat_map(move |i| (0..m.ncols()).map(move |j| m[(i, j)]))
}

pub fn export_irreps(set: &IrrepSet) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# {}", set.group().label());
    let _ = writeln!(out, "irreps order {} count {}", set.group().order(), set.len());
    for irrep in set.irreps() {
        let _ = writeln!(out, "irrep {} dim {}", irrep.label, irrep.dim);
        for m in &irrep.mats {
            push_entries(&mut out, row_major(m));
        }
    }
    out
}

pub fn export_povm(povm: &Povm) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "povm dim {} count {}", povm.dim(), povm.len());
    for (k, e) in povm.elements().iter().enumerate() {
        let _ = writeln!(out, "element {k}");
        for i in 0..e.nrows() {
            push_entries(&mut out, (0..e.ncols()).map(|j| e[(i, j)]));
        }
    }
    out
}

struct Lines<'a> {
    inner: std::iter::Peekable<Box<dyn Iterator<Item = (usize, &'a str)> + 'a>>,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        let it: Box<dyn Iterator<Item = (usize, &'a str)> + 'a> = Box::new(
            text.lines()
                .enumerate()
                .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
                .filter(|(_, l)| !l.is_empty()),
        );
        Lines { inner: it.peekable() }
    }

    fn next(&mut self) -> Result<(usize, &'a str)> {
        self.inner
            .next()
            .ok_or_else(|| HspError::Parse("unexpected end of input".into()))
    }

    fn finish(&mut self) -> Result<()> {
        match self.inner.next() {
            None => Ok(()),
            Some((n, l)) => Err(HspError::Parse(format!("line {n}: unexpected `{l}`"))),
        }
    }
}

/// Parses `tag key1 v1 key2 v2 …` into the values.
fn header(line: (usize, &str), tag: &str, keys: &[&str]) -> Result<Vec<usize>> {
    let (n, text) = line;
    let words: Vec<&str> = text.split_whitespace().collect();
    let bad = || HspError::Parse(format!("line {n}: expected `{tag} {}`", keys.join(" _ ")));
    if words.len() != 1 + 2 * keys.len() || words[0] != tag {
        return Err(bad());
    }
    keys.iter()
        .zip(words[1..].chunks(2))
        .map(|(key, pair)| {
            if pair[0] != *key {
                return Err(bad());
            }
            pair[1].parse().map_err(|_| bad())
        })
        .collect()
}

fn complex_row(line: (usize, &str), expected: usize) -> Result<Vec<Complex64>> {
    let (n, text) = line;
    let nums: Vec<f64> = text
        .split_whitespace()
        .map(|t| t.parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| HspError::Parse(format!("line {n}: {e}")))?;
    if nums.len() != 2 * expected || nums.iter().any(|x| !x.is_finite()) {
        return Err(HspError::Parse(format!(
            "line {n}: expected {expected} finite complex entries, found {} numbers",
            nums.len()
        )));
    }
    Ok(nums.chunks(2).map(|p| Complex64::new(p[0], p[1])).collect())
}

/// Reads irreps for `group`; the result must pass the irrep checks.
pub fn import_irreps(group: &GroupTable, text: &str) -> Result<IrrepSet> {
    let mut lines = Lines::new(text);
    let h = header(lines.next()?, "irreps", &["order", "count"])?;
    let (order, count) = (h[0], h[1]);
    if order != group.order() {
        return Err(HspError::DimensionMismatch {
            expected: group.order(),
            found: order,
        });
    }
    let mut irreps = Vec::with_capacity(count);
    for _ in 0..count {
        let (n, text) = lines.next()?;
        let words: Vec<&str> = text.split_whitespace().collect();
        let parsed = match words.as_slice() {
            ["irrep", label, "dim", dim] => label.parse().ok().zip(dim.parse().ok()),
            _ => None,
        };
        let (label, dim): (usize, usize) =
            parsed.ok_or_else(|| HspError::Parse(format!("line {n}: expected `irrep _ dim _`")))?;
        if dim == 0 {
            return Err(HspError::Parse(format!("irrep {label} has dimension 0")));
        }
        let mats = (0..order)
            .map(|_| {
                let row = complex_row(lines.next()?, dim * dim)?;
                Ok(CMat::from_row_slice(dim, dim, &row))
            })
            .collect::<Result<Vec<_>>>()?;
        irreps.push(Irrep { label, dim, mats });
    }
    lines.finish()?;
    let set = IrrepSet::from_parts(group.clone(), irreps);
    let report = verify_irrep_set(&set);
    if !report.passes(IMPORT_TOLERANCE) {
        return Err(HspError::DecompositionFailure(format!(
            "imported irreps fail validation: {report:?}"
        )));
    }
    Ok(set)
}

/// Reads a POVM and validates it.
pub fn import_povm(text: &str) -> Result<Povm> {
    let mut lines = Lines::new(text);
    let h = header(lines.next()?, "povm", &["dim", "count"])?;
    let (dim, count) = (h[0], h[1]);
    let mut elements = Vec::with_capacity(count);
    for k in 0..count {
        let (n, text) = lines.next()?;
        if text.split_whitespace().collect::<Vec<_>>() != ["element", &k.to_string()] {
            return Err(HspError::Parse(format!("line {n}: expected `element {k}`")));
        }
        let mut m = CMat::zeros(dim, dim);
        for i in 0..dim {
            for (j, z) in complex_row(lines.next()?, dim)?.into_iter().enumerate() {
                m[(i, j)] = z;
            }
        }
        elements.push(m);
    }
    lines.finish()?;
    Povm::new(elements)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::discrimination::random_povm;
    use crate::group::build_group;
    use crate::linalg::max_abs_diff;
    use crate::rep::irrep_set;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn irreps_round_trip_exactly() {
        for spec in ["cyclic:5", "symmetric:3", "dihedral:4"] {
            let g = build_group(&spec.parse().unwrap()).unwrap();
            let set = irrep_set(&g).unwrap();
            let text = export_irreps(&set);
            let back = import_irreps(&g, &text).unwrap();
            assert_eq!(back.dims(), set.dims());
            for (a, b) in set.irreps().iter().zip(back.irreps()) {
                for (x, y) in a.mats.iter().zip(&b.mats) {
                    assert_eq!(x, y);
                }
            }
        }
    }

    #[test]
    fn bad_irreps_rejected() {
        let g = build_group(&"cyclic:3".parse().unwrap()).unwrap();
        let set = irrep_set(&g).unwrap();
        let text = export_irreps(&set);
        let other = build_group(&"cyclic:4".parse().unwrap()).unwrap();
        assert!(import_irreps(&other, &text).is_err());
        // drop the last irrep: dimension sum no longer matches
        let truncated = text.replacen("count 3", "count 2", 1);
        let cut: Vec<&str> = truncated.lines().collect();
        assert!(import_irreps(&g, &cut[..cut.len() - 4].join("\n")).is_err());
        let scaled = text.replace("1.0000000000000000e0 0.0000000000000000e0", "2.0000000000000000e0 0.0000000000000000e0");
        assert!(import_irreps(&g, &scaled).is_err());
        assert!(import_irreps(&g, "irreps order 3").is_err());
    }

    #[test]
    fn povm_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let p = random_povm(6, 3, &mut rng).unwrap();
        let back = import_povm(&export_povm(&p)).unwrap();
        for (a, b) in p.elements().iter().zip(back.elements()) {
            assert!(max_abs_diff(a, b) < 1e-15);
        }
    }

    #[test]
    fn povm_import_validates() {
        let text = "povm dim 2 count 2\nelement 0\n1 0 0 0\n0 0 0 0\nelement 1\n0 0 0 0\n0 0 0 0\n";
        assert!(matches!(import_povm(text), Err(HspError::InvalidPovm(_))));
        let ok = "# comment\npovm dim 1 count 2\nelement 0\n0.25 0\n\nelement 1\n0.75 0 # tail\n";
        assert_eq!(import_povm(ok).unwrap().len(), 2);
        assert!(import_povm("povm dim 1 count 1\nelement 0\n1 0 2\n").is_err());
        assert!(import_povm("povm dim 1 count 1\nelement 0\n1 0\nextra\n").is_err());
    }
}
