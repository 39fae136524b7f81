use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{HspError, Result};

/// The response space `X = Z/(m_1) × … × Z/(m_r)` with prime-power moduli.
///
/// Elements are enumerated in mixed radix with the first modulus least
/// significant: `(x_1, …, x_r) ↦ x_1 + m_1 x_2 + m_1 m_2 x_3 + …`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResponseSpace {
    moduli: Vec<usize>,
    size: usize,
}

fn prime_power_base(m: usize) -> Option<usize> {
    if m < 2 {
        return None;
    }
    let p = (2..=m).find(|p| m.is_multiple_of(*p))?;
    let mut rest = m;
    while rest.is_multiple_of(p) {
        rest /= p;
    }
    (rest == 1).then_some(p)
}

impl ResponseSpace {
    pub fn new(moduli: Vec<usize>) -> Result<Self> {
        if moduli.is_empty() {
            return Err(HspError::InvalidResponseSpace("no moduli".into()));
        }
        if let Some(&bad) = moduli.iter().find(|&&m| prime_power_base(m).is_none()) {
            return Err(HspError::InvalidResponseSpace(format!(
                "modulus {bad} is not a prime power ≥ 2"
            )));
        }
        let size = moduli
            .iter()
            .try_fold(1usize, |acc, &m| acc.checked_mul(m))
            .ok_or_else(|| HspError::InvalidResponseSpace("size overflows".into()))?;
        Ok(ResponseSpace { moduli, size })
    }

    /// Canonical space of size `d`: one cyclic factor per prime, ascending.
    pub fn with_size(d: usize) -> Result<Self> {
        if d < 2 {
            return Err(HspError::InvalidResponseSpace(format!("D = {d} < 2")));
        }
        let mut moduli = Vec::new();
        let mut rest = d;
        let mut p = 2;
        while rest > 1 {
            if rest.is_multiple_of(p) {
                let mut q = 1;
                while rest.is_multiple_of(p) {
                    rest /= p;
                    q *= p;
                }
                moduli.push(q);
            }
            p += 1;
        }
        Self::new(moduli)
    }

    pub fn moduli(&self) -> &[usize] {
        &self.moduli
    }

    /// `D = |X|`.
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn coords(&self, mut index: usize) -> Vec<usize> {
        self.moduli
            .iter()
            .map(|&m| {
                let x = index % m;
                index /= m;
                x
            })
            .collect()
    }

    pub fn index(&self, coords: &[usize]) -> usize {
        coords
            .iter()
            .zip(&self.moduli)
            .rev()
            .fold(0, |acc, (&x, &m)| acc * m + x % m)
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        let (x, y) = (self.coords(a), self.coords(b));
        let sum: Vec<usize> = x
            .iter()
            .zip(&y)
            .zip(&self.moduli)
            .map(|((p, q), m)| (p + q) % m)
            .collect();
        self.index(&sum)
    }

    pub fn sub(&self, a: usize, b: usize) -> usize {
        let (x, y) = (self.coords(a), self.coords(b));
        let diff: Vec<usize> = x
            .iter()
            .zip(&y)
            .zip(&self.moduli)
            .map(|((p, q), m)| (p + m - q) % m)
            .collect();
        self.index(&diff)
    }

    /// `ω^{y·x} = Π_j exp(2πi y_j x_j / m_j)`.
    pub fn pairing(&self, y: usize, x: usize) -> Complex64 {
        let (yc, xc) = (self.coords(y), self.coords(x));
        let phase: f64 = yc
            .iter()
            .zip(&xc)
            .zip(&self.moduli)
            .map(|((a, b), &m)| ((a * b) % m) as f64 / m as f64)
            .sum();
        Complex64::from_polar(1.0, 2.0 * PI * phase)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mixed_radix_enumeration() {
        let x = ResponseSpace::new(vec![2, 3]).unwrap();
        assert_eq!(x.size(), 6);
        assert_eq!(x.coords(0), vec![0, 0]);
        assert_eq!(x.coords(1), vec![1, 0]);
        assert_eq!(x.coords(2), vec![0, 1]);
        assert_eq!(x.coords(5), vec![1, 2]);
        for i in 0..6 {
            assert_eq!(x.index(&x.coords(i)), i);
        }
        assert_eq!(x.add(5, 1), x.index(&[0, 2]));
        for a in 0..6 {
            for b in 0..6 {
                assert_eq!(x.sub(x.add(a, b), b), a);
            }
        }
    }

    #[test]
    fn rejects_non_prime_powers() {
        assert!(ResponseSpace::new(vec![6]).is_err());
        assert!(ResponseSpace::new(vec![1]).is_err());
        assert!(ResponseSpace::new(vec![]).is_err());
        assert!(ResponseSpace::new(vec![4, 9, 5]).is_ok());
        assert!(ResponseSpace::with_size(1).is_err());
    }

    #[test]
    fn canonical_factorization() {
        assert_eq!(ResponseSpace::with_size(12).unwrap().moduli(), &[4, 3]);
        assert_eq!(ResponseSpace::with_size(8).unwrap().moduli(), &[8]);
        assert_eq!(ResponseSpace::with_size(7).unwrap().moduli(), &[7]);
        assert_eq!(ResponseSpace::with_size(30).unwrap().moduli(), &[2, 3, 5]);
    }

    #[test]
    fn characters_are_orthogonal() {
        let x = ResponseSpace::new(vec![4, 3]).unwrap();
        let d = x.size();
        for y in 0..d {
            for z in 0..d {
                let s: Complex64 = (0..d).map(|t| x.pairing(y, t) * x.pairing(z, t).conj()).sum();
                let expected = if y == z { d as f64 } else { 0.0 };
                assert!((s - Complex64::new(expected, 0.0)).norm() < 1e-12);
            }
        }
    }
}
