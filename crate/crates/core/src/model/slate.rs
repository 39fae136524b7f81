use std::fmt;

use num_complex::Complex64;
use rand::Rng;

use super::ResponseSpace;
use crate::error::{HspError, Result};
use crate::linalg::{c, random_complex_gaussian, ZERO};

/// Norm deviation accepted without comment.
const NORM_EXACT: f64 = 1e-9;
/// Norm deviation that is silently repaired (flagged on the slate).
const NORM_REPAIRABLE: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub enum SlateKind {
    /// `|0…0⟩`.
    Standard,
    /// `|ω^{(-1,0,…,0)}⟩`.
    Character,
    /// `|ω^{(0,…,0)}⟩`, the uniform superposition.
    Constant,
    Custom(Vec<Complex64>),
}

impl fmt::Display for SlateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SlateKind::Standard => write!(f, "standard"),
            SlateKind::Character => write!(f, "character"),
            SlateKind::Constant => write!(f, "constant"),
            SlateKind::Custom(_) => write!(f, "custom"),
        }
    }
}

/// Response-register factor of an equal-superposition query.
#[derive(Debug, Clone, PartialEq)]
pub struct Slate {
    space: ResponseSpace,
    amplitudes: Vec<Complex64>,
    renormalized: bool,
}

impl Slate {
    pub fn space(&self) -> &ResponseSpace {
        &self.space
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// Set when a custom vector was within 1e-6 (but not 1e-9) of unit norm
    /// and got rescaled.
    pub fn was_renormalized(&self) -> bool {
        self.renormalized
    }
}

pub fn make_slate(space: &ResponseSpace, kind: SlateKind) -> Result<Slate> {
    let d = space.size();
    let amp = 1.0 / (d as f64).sqrt();
    let (amplitudes, renormalized) = match kind {
        SlateKind::Standard => {
            let mut v = vec![ZERO; d];
            v[0] = c(1.0, 0.0);
            (v, false)
        }
        SlateKind::Character => {
            // (1/√D) Σ_x ω^{y·x} |x⟩ with y = (1, 0, …, 0)
            let y = space.index(&unit_first(space));
            ((0..d).map(|x| space.pairing(y, x) * amp).collect(), false)
        }
        SlateKind::Constant => (vec![c(amp, 0.0); d], false),
        SlateKind::Custom(v) => {
            if v.len() != d {
                return Err(HspError::InvalidSlate(format!(
                    "custom slate has length {}, response space has D = {d}",
                    v.len()
                )));
            }
            let norm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
            if norm == 0.0 || !norm.is_finite() {
                return Err(HspError::InvalidSlate("zero custom vector".into()));
            }
            let dev = (norm - 1.0).abs();
            if dev <= NORM_EXACT {
                (v, false)
            } else if dev <= NORM_REPAIRABLE {
                (v.into_iter().map(|x| x / norm).collect(), true)
            } else {
                return Err(HspError::InvalidSlate(format!(
                    "custom slate has norm {norm}, expected 1"
                )));
            }
        }
    };
    Ok(Slate {
        space: space.clone(),
        amplitudes,
        renormalized,
    })
}

/// Normalizes an arbitrary nonzero vector into a slate.
pub fn normalized_slate(space: &ResponseSpace, v: Vec<Complex64>) -> Result<Slate> {
    let norm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    if norm == 0.0 {
        return Err(HspError::InvalidSlate("zero custom vector".into()));
    }
    make_slate(space, SlateKind::Custom(v.into_iter().map(|x| x / norm).collect()))
}

/// Haar-random slate: a normalized complex Gaussian vector.
pub fn random_slate<R: Rng + ?Sized>(space: &ResponseSpace, rng: &mut R) -> Slate {
    let v = (0..space.size()).map(|_| random_complex_gaussian(rng)).collect();
    normalized_slate(space, v).expect("Gaussian vector is nonzero")
}

fn unit_first(space: &ResponseSpace) -> Vec<usize> {
    let mut y = vec![0; space.moduli().len()];
    y[0] = 1;
    y
}

/// Coefficients of a slate in the character basis of `X`.
#[derive(Debug, Clone, PartialEq)]
pub struct Betas {
    /// `β_{v,y} = ⟨ω^{-y}|v⟩`, indexed by `ι_X(y)`.
    pub coefficients: Vec<Complex64>,
    pub beta0_sq: f64,
}

pub fn slate_betas(slate: &Slate) -> Betas {
    let space = &slate.space;
    let d = space.size();
    let scale = 1.0 / (d as f64).sqrt();
    let coefficients: Vec<Complex64> = (0..d)
        .map(|y| {
            // ⟨ω^{-y}| = (1/√D) Σ_x conj(ω^{y·x}) ⟨x|
            slate
                .amplitudes
                .iter()
                .enumerate()
                .map(|(x, &a)| space.pairing(y, x).conj() * a)
                .sum::<Complex64>()
                * scale
        })
        .collect();
    let beta0_sq = coefficients[0].norm_sqr();
    Betas {
        coefficients,
        beta0_sq,
    }
}
