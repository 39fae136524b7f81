//! Finite groups as explicit multiplication tables.
//!
//! Elements are dense indices `0..order`. Every constructor fixes a canonical
//! element ordering so that coset and conjugate orderings downstream are
//! reproducible:
//!
//! * `cyclic:n` – residues `0..n` ascending.
//! * `dihedral:n` – rotations `r^i` (indices `0..n`) then reflections `r^i s`
//!   (indices `n..2n`).
//! * `symmetric:n` – permutations of `{1..n}` in lexicographic one-line order.
//! * `product:a,b` – pairs `(x, y)` lexicographically, index `x * |b| + y`.

mod subgroup;

pub use subgroup::{
    conjugacy_family, left_cosets, normalizer, subgroup_closure, CosetList, Subgroup,
    SubgroupFamily,
};

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{HspError, Result};

/// Largest group order the laboratory accepts.
pub const MAX_ORDER: usize = 120;

/// Recipe for one of the supported group families.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupSpec {
    Cyclic(usize),
    Dihedral(usize),
    Symmetric(usize),
    Product(Box<GroupSpec>, Box<GroupSpec>),
}

impl GroupSpec {
    pub fn order(&self) -> Option<usize> {
        match self {
            GroupSpec::Cyclic(n) => Some(*n),
            GroupSpec::Dihedral(n) => n.checked_mul(2),
            GroupSpec::Symmetric(n) => (1..=*n).try_fold(1usize, |acc, k| acc.checked_mul(k)),
            GroupSpec::Product(a, b) => a.order()?.checked_mul(b.order()?),
        }
    }

    pub fn is_abelian(&self) -> bool {
        match self {
            GroupSpec::Cyclic(_) => true,
            GroupSpec::Dihedral(n) => *n <= 2,
            GroupSpec::Symmetric(n) => *n <= 2,
            GroupSpec::Product(a, b) => a.is_abelian() && b.is_abelian(),
        }
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Cyclic(n) => write!(f, "cyclic:{n}"),
            GroupSpec::Dihedral(n) => write!(f, "dihedral:{n}"),
            GroupSpec::Symmetric(n) => write!(f, "symmetric:{n}"),
            GroupSpec::Product(a, b) => write!(f, "product:{a},{b}"),
        }
    }
}

impl FromStr for GroupSpec {
    type Err = HspError;

    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let (spec, rest) = parse_spec(&compact)?;
        if !rest.is_empty() {
            return Err(HspError::UnsupportedSpec(format!("{s} (trailing `{rest}`)")));
        }
        Ok(spec)
    }
}

// Recursive descent: `product:` consumes two specs separated by a comma.
fn parse_spec(s: &str) -> Result<(GroupSpec, &str)> {
    let (name, rest) = s
        .split_once(':')
        .ok_or_else(|| HspError::UnsupportedSpec(s.to_string()))?;
    if name == "product" {
        let (a, rest) = parse_spec(rest)?;
        let rest = rest
            .strip_prefix(',')
            .ok_or_else(|| HspError::UnsupportedSpec(format!("product needs two factors: {s}")))?;
        let (b, rest) = parse_spec(rest)?;
        return Ok((GroupSpec::Product(Box::new(a), Box::new(b)), rest));
    }
    let digits = rest.chars().take_while(|c| c.is_ascii_digit()).count();
    let n: usize = rest[..digits]
        .parse()
        .map_err(|_| HspError::UnsupportedSpec(s.to_string()))?;
    let rest = &rest[digits..];
    let spec = match name {
        "cyclic" => GroupSpec::Cyclic(n),
        "dihedral" => GroupSpec::Dihedral(n),
        "symmetric" => GroupSpec::Symmetric(n),
        _ => return Err(HspError::UnsupportedSpec(s.to_string())),
    };
    Ok((spec, rest))
}

/// A finite group given by its Cayley table.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupTable {
    order: usize,
    mul: Vec<usize>,
    identity: usize,
    inv: Vec<usize>,
    label: String,
    spec: Option<GroupSpec>,
    /// One-line notation of each element for symmetric groups (0-based images).
    perms: Option<Vec<Vec<usize>>>,
}

impl GroupTable {
    /// Builds a table from a row-major multiplication table, deriving the
    /// identity and inverses and checking every group axiom.
    pub fn from_table(order: usize, mul: Vec<usize>, label: impl Into<String>) -> Result<Self> {
        if order == 0 {
            return Err(HspError::InvalidTable("empty group".into()));
        }
        if mul.len() != order * order {
            return Err(HspError::InvalidTable(format!(
                "table has {} entries, expected {}",
                mul.len(),
                order * order
            )));
        }
        if let Some(&bad) = mul.iter().find(|&&x| x >= order) {
            return Err(HspError::IndexOutOfRange { index: bad, order });
        }
        let identity = (0..order)
            .find(|&e| (0..order).all(|g| mul[e * order + g] == g && mul[g * order + e] == g))
            .ok_or_else(|| HspError::InvalidTable("no identity element".into()))?;
        let mut inv = vec![0; order];
        for g in 0..order {
            inv[g] = (0..order)
                .find(|&h| mul[g * order + h] == identity && mul[h * order + g] == identity)
                .ok_or_else(|| HspError::InvalidTable(format!("element {g} has no inverse")))?;
        }
        let table = GroupTable {
            order,
            mul,
            identity,
            inv,
            label: label.into(),
            spec: None,
            perms: None,
        };
        if let Some((a, b, c)) = table.associativity_violation() {
            return Err(HspError::InvalidTable(format!(
                "associativity fails at ({a}, {b}, {c})"
            )));
        }
        Ok(table)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn spec(&self) -> Option<&GroupSpec> {
        self.spec.as_ref()
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    pub fn conjugate(&self, g: usize, h: usize) -> usize {
        self.mul(self.mul(g, h), self.inv(g))
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn check_index(&self, g: usize) -> Result<()> {
        if g < self.order {
            Ok(())
        } else {
            Err(HspError::IndexOutOfRange {
                index: g,
                order: self.order,
            })
        }
    }

    /// First triple violating associativity, if any. Exhaustive.
    pub fn associativity_violation(&self) -> Option<(usize, usize, usize)> {
        for a in 0..self.order {
            for b in 0..self.order {
                let ab = self.mul(a, b);
                for c in 0..self.order {
                    if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                        return Some((a, b, c));
                    }
                }
            }
        }
        None
    }

    /// Exhaustive check of associativity, identity and inverse axioms.
    pub fn satisfies_axioms(&self) -> bool {
        let e = self.identity;
        self.associativity_violation().is_none()
            && (0..self.order).all(|g| {
                self.mul(e, g) == g
                    && self.mul(g, e) == g
                    && self.mul(g, self.inv(g)) == e
                    && self.mul(self.inv(g), g) == e
            })
    }

    /// Index of the permutation with 0-based one-line notation `images`
    /// (symmetric groups only).
    pub fn permutation_index(&self, images: &[usize]) -> Option<usize> {
        self.perms.as_ref()?.iter().position(|p| p == images)
    }

    /// One-line notation of element `g` (symmetric groups only).
    pub fn permutation(&self, g: usize) -> Option<&[usize]> {
        self.perms.as_ref().map(|p| p[g].as_slice())
    }

    /// Parses a subgroup generator list: comma/space separated element
    /// indices, or cycle notation such as `(12)(34)` / `(1 2 3)` on symmetric
    /// groups (points are 1-based). An empty string yields no generators.
    pub fn parse_generators(&self, text: &str) -> Result<Vec<usize>> {
        let text = text.trim();
        if text.is_empty() || text == "e" || text == "()" {
            return Ok(Vec::new());
        }
        if text.contains('(') {
            let degree = match &self.spec {
                Some(GroupSpec::Symmetric(n)) => *n,
                _ => {
                    return Err(HspError::Parse(format!(
                        "cycle notation `{text}` needs a symmetric group"
                    )))
                }
            };
            return text
                .split([';', '|'])
                .map(|perm| {
                    let images = parse_cycles(perm, degree)?;
                    self.permutation_index(&images)
                        .ok_or_else(|| HspError::Parse(format!("`{perm}` is not an element")))
                })
                .collect();
        }
        text.split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| {
                let g: usize = t
                    .parse()
                    .map_err(|_| HspError::Parse(format!("bad element index `{t}`")))?;
                self.check_index(g)?;
                Ok(g)
            })
            .collect()
    }
}

/// Parses a product of disjoint or overlapping cycles into 0-based one-line
/// notation. Cycles compose right to left.
fn parse_cycles(text: &str, degree: usize) -> Result<Vec<usize>> {
    let mut perm: Vec<usize> = (0..degree).collect();
    let mut cycles = Vec::new();
    let mut rest = text.trim();
    while !rest.is_empty() {
        let body = rest
            .strip_prefix('(')
            .and_then(|r| r.split_once(')'))
            .ok_or_else(|| HspError::Parse(format!("malformed cycle notation `{text}`")))?;
        let points: Vec<usize> = if body.0.contains(|c: char| c == ',' || c.is_whitespace()) {
            body.0
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|t| !t.is_empty())
                .map(|t| t.parse::<usize>().map_err(|_| HspError::Parse(t.into())))
                .collect::<Result<_>>()?
        } else {
            body.0
                .chars()
                .map(|ch| {
                    ch.to_digit(10)
                        .map(|d| d as usize)
                        .ok_or_else(|| HspError::Parse(format!("bad point `{ch}`")))
                })
                .collect::<Result<_>>()?
        };
        if points.iter().any(|&p| p == 0 || p > degree) {
            return Err(HspError::Parse(format!("cycle `{}` leaves 1..={degree}", body.0)));
        }
        cycles.push(points.into_iter().map(|p| p - 1).collect::<Vec<_>>());
        rest = body.1.trim();
    }
    for cycle in cycles.iter().rev() {
        let mut step: Vec<usize> = (0..degree).collect();
        for (i, &p) in cycle.iter().enumerate() {
            step[p] = cycle[(i + 1) % cycle.len()];
        }
        // apply `perm` first, then this cycle
        perm = perm.iter().map(|&x| step[x]).collect();
    }
    Ok(perm)
}

/// Builds the Cayley table of a supported group.
pub fn build_group(spec: &GroupSpec) -> Result<GroupTable> {
    validate_spec(spec)?;
    let order = spec
        .order()
        .ok_or_else(|| HspError::OutOfRange(format!("order of {spec} overflows")))?;
    if order > MAX_ORDER {
        return Err(HspError::OutOfRange(format!(
            "{spec} has order {order} > {MAX_ORDER}"
        )));
    }
    let (mul, perms) = match spec {
        GroupSpec::Cyclic(n) => (
            (0..n * n).map(|i| (i / n + i % n) % n).collect(),
            None,
        ),
        GroupSpec::Dihedral(n) => (dihedral_table(*n), None),
        GroupSpec::Symmetric(n) => {
            let (mul, perms) = symmetric_table(*n);
            (mul, Some(perms))
        }
        GroupSpec::Product(a, b) => {
            let ga = build_group(a)?;
            let gb = build_group(b)?;
            let (na, nb) = (ga.order(), gb.order());
            let n = na * nb;
            let mut mul = vec![0; n * n];
            for x in 0..n {
                for y in 0..n {
                    mul[x * n + y] = ga.mul(x / nb, y / nb) * nb + gb.mul(x % nb, y % nb);
                }
            }
            (mul, None)
        }
    };
    let mut table = GroupTable::from_table(order, mul, spec.to_string())?;
    table.spec = Some(spec.clone());
    table.perms = perms;
    Ok(table)
}

fn validate_spec(spec: &GroupSpec) -> Result<()> {
    match spec {
        GroupSpec::Cyclic(n) | GroupSpec::Dihedral(n) if *n == 0 => {
            Err(HspError::OutOfRange(format!("{spec}: n must be at least 1")))
        }
        GroupSpec::Symmetric(n) if *n == 0 || *n > 5 => {
            Err(HspError::OutOfRange(format!("{spec}: n must be in 1..=5")))
        }
        GroupSpec::Product(a, b) => {
            validate_spec(a)?;
            validate_spec(b)
        }
        _ => Ok(()),
    }
}

// r^a s^x with x ∈ {0,1}; index a + x n. s r s = r^{-1}.
fn dihedral_table(n: usize) -> Vec<usize> {
    let size = 2 * n;
    let mut mul = vec![0; size * size];
    for x in 0..size {
        for y in 0..size {
            let (a, sa) = (x % n, x / n);
            let (b, sb) = (y % n, y / n);
            // r^a s^sa r^b s^sb = r^(a ± b) s^(sa + sb)
            let rot = if sa == 0 { (a + b) % n } else { (a + n - b) % n };
            let refl = (sa + sb) % 2;
            mul[x * size + y] = rot + refl * n;
        }
    }
    mul
}

fn symmetric_table(n: usize) -> (Vec<usize>, Vec<Vec<usize>>) {
    let mut perms = Vec::new();
    let mut current: Vec<usize> = (0..n).collect();
    loop {
        perms.push(current.clone());
        if !next_permutation(&mut current) {
            break;
        }
    }
    let index: HashMap<&[usize], usize> = perms
        .iter()
        .enumerate()
        .map(|(i, p)| (p.as_slice(), i))
        .collect();
    let order = perms.len();
    let mut mul = vec![0; order * order];
    for (i, p) in perms.iter().enumerate() {
        for (j, q) in perms.iter().enumerate() {
            // (p q)(x) = p(q(x))
            let pq: Vec<usize> = q.iter().map(|&x| p[x]).collect();
            mul[i * order + j] = index[pq.as_slice()];
        }
    }
    (mul, perms)
}

fn next_permutation(p: &mut [usize]) -> bool {
    if p.len() < 2 {
        return false;
    }
    let mut i = p.len() - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = p.len() - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}
