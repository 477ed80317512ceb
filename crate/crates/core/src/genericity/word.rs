use std::fmt;

use crate::error::{Error, Result};
use crate::group::Group;

/// A freely reduced word in `F_r`. Letter `i` is the generator `x_i`, `-i`
/// its inverse (`1 ≤ i ≤ r`).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FreeWord {
    letters: Vec<i32>,
}

fn push_reduced(out: &mut Vec<i32>, l: i32) {
    if out.last() == Some(&-l) {
        out.pop();
    } else {
        out.push(l);
    }
}

impl FreeWord {
    pub fn identity() -> Self {
        FreeWord::default()
    }

    pub fn generator(i: i32) -> Self {
        FreeWord { letters: vec![i] }
    }

    /// Freely reduces `letters`; every letter must be a nonzero index of
    /// absolute value at most `rank`.
    pub fn new(rank: usize, letters: &[i32]) -> Result<Self> {
        let mut out = Vec::with_capacity(letters.len());
        for &l in letters {
            if l == 0 || l.unsigned_abs() as usize > rank {
                return Err(Error::InvalidElement(format!("letter {l} outside rank {rank}")));
            }
            push_reduced(&mut out, l);
        }
        Ok(FreeWord { letters: out })
    }

    /// Wraps letters that are already reduced.
    pub(crate) fn from_reduced(letters: Vec<i32>) -> Self {
        debug_assert!(letters.windows(2).all(|w| w[0] != -w[1]));
        FreeWord { letters }
    }

    pub fn letters(&self) -> &[i32] {
        &self.letters
    }

    /// Word length `|g|_X`.
    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn mul(&self, other: &FreeWord) -> FreeWord {
        let mut out = self.letters.clone();
        for &l in &other.letters {
            push_reduced(&mut out, l);
        }
        FreeWord { letters: out }
    }

    pub fn inv(&self) -> FreeWord {
        FreeWord { letters: self.letters.iter().rev().map(|&l| -l).collect() }
    }

    /// `d(self, other) = |self⁻¹ other|`.
    pub fn dist(&self, other: &FreeWord) -> usize {
        let common = self.letters.iter().zip(&other.letters).take_while(|(a, b)| a == b).count();
        self.len() + other.len() - 2 * common
    }

    /// Parses `a b^-1 ...` style input: lowercase letters `a..` are generators,
    /// uppercase letters their inverses; `1` or an empty string is the identity.
    pub fn parse(rank: usize, text: &str) -> Result<Self> {
        let mut letters = Vec::new();
        for c in text.chars().filter(|c| !c.is_whitespace() && *c != '1') {
            let l = if c.is_ascii_lowercase() {
                (c as u8 - b'a' + 1) as i32
            } else if c.is_ascii_uppercase() {
                -((c as u8 - b'A' + 1) as i32)
            } else {
                return Err(Error::parse(1, format!("unexpected character `{c}` in word")));
            };
            letters.push(l);
        }
        FreeWord::new(rank, &letters)
    }
}

impl fmt::Display for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        for &l in &self.letters {
            let base = if l > 0 { b'a' } else { b'A' };
            let c = if l.unsigned_abs() <= 26 { (base + (l.unsigned_abs() - 1) as u8) as char } else { '?' };
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// `|B(n)|` in `F_r`: `1 + 2r((2r-1)^n - 1)/(2r-2)`, or `2n + 1` for `r = 1`.
/// `None` on overflow.
pub fn ball_size(rank: usize, radius: usize) -> Option<u128> {
    if rank == 0 {
        return Some(1);
    }
    (0..=radius).try_fold(0u128, |acc, l| acc.checked_add(sphere_size(rank, l)?))
}

/// `|S(ℓ)| = 2r(2r-1)^{ℓ-1}` for `ℓ ≥ 1`.
pub fn sphere_size(rank: usize, len: usize) -> Option<u128> {
    if len == 0 {
        return Some(1);
    }
    let r = rank as u128;
    (2 * r - 1).checked_pow(len as u32 - 1)?.checked_mul(2 * r)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FreeGroup {
    pub rank: usize,
}

impl Group for FreeGroup {
    type Elem = FreeWord;

    fn identity(&self) -> FreeWord {
        FreeWord::identity()
    }

    fn mul(&self, a: &FreeWord, b: &FreeWord) -> FreeWord {
        a.mul(b)
    }

    fn inv(&self, a: &FreeWord) -> FreeWord {
        a.inv()
    }
}
