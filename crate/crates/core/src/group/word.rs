//! Words in `F_k * G`: sequences of variable letters and group constants.

use super::traits::Group;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Letter<C> {
    /// `x_index` (1-based), inverted when `inverse` is set.
    Var { index: usize, inverse: bool },
    Const(C),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupWord<C> {
    arity: usize,
    letters: Vec<Letter<C>>,
}

impl<C: Clone> GroupWord<C> {
    pub fn new(arity: usize, letters: Vec<Letter<C>>) -> Result<Self> {
        for l in &letters {
            if let Letter::Var { index, .. } = l {
                if *index == 0 || *index > arity {
                    return Err(Error::InvalidElement(format!(
                        "variable x{index} outside arity {arity}"
                    )));
                }
            }
        }
        Ok(GroupWord { arity, letters })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn letters(&self) -> &[Letter<C>] {
        &self.letters
    }

    pub fn var(arity: usize, index: usize) -> Result<Self> {
        GroupWord::new(arity, vec![Letter::Var { index, inverse: false }])
    }

    pub fn concat(&self, other: &Self) -> Self {
        let mut letters = self.letters.clone();
        letters.extend(other.letters.iter().cloned());
        GroupWord { arity: self.arity.max(other.arity), letters }
    }

    pub fn map_consts<D>(&self, mut f: impl FnMut(&C) -> D) -> GroupWord<D> {
        let letters = self
            .letters
            .iter()
            .map(|l| match l {
                Letter::Var { index, inverse } => Letter::Var { index: *index, inverse: *inverse },
                Letter::Const(c) => Letter::Const(f(c)),
            })
            .collect();
        GroupWord { arity: self.arity, letters }
    }

    /// Evaluates the word, substituting `assignment[i-1]` for `x_i`.
    pub fn evaluate<G>(&self, g: &G, assignment: &[G::Elem]) -> Result<G::Elem>
    where
        G: Group<Elem = C>,
    {
        if assignment.len() != self.arity {
            return Err(Error::ArityMismatch { expected: self.arity, got: assignment.len() });
        }
        let mut acc = g.identity();
        for l in &self.letters {
            let v = match l {
                Letter::Var { index, inverse: false } => assignment[index - 1].clone(),
                Letter::Var { index, inverse: true } => g.inv(&assignment[index - 1]),
                Letter::Const(c) => c.clone(),
            };
            acc = g.mul(&acc, &v);
        }
        Ok(acc)
    }
}

impl<C: Clone> GroupWord<C> {
    /// The free inverse of a word, with constants inverted in `g`.
    pub fn inverse_in<G: Group<Elem = C>>(&self, g: &G) -> Self {
        let letters = self
            .letters
            .iter()
            .rev()
            .map(|l| match l {
                Letter::Var { index, inverse } => Letter::Var { index: *index, inverse: !inverse },
                Letter::Const(c) => Letter::Const(g.inv(c)),
            })
            .collect();
        GroupWord { arity: self.arity, letters }
    }

    /// `[u, v] = u⁻¹v⁻¹uv` as a word, constants inverted in `g`.
    pub fn commutator_in<G: Group<Elem = C>>(g: &G, u: &Self, v: &Self) -> Self {
        u.inverse_in(g).concat(&v.inverse_in(g)).concat(u).concat(v)
    }

    /// The left-nested simple commutator word `[x_1, ..., x_{k+1}]` of arity `k + 1`.
    pub fn simple_commutator_word<G: Group<Elem = C>>(g: &G, k: usize) -> Self {
        let arity = k + 1;
        let mut w = GroupWord { arity, letters: vec![Letter::Var { index: 1, inverse: false }] };
        for i in 2..=arity {
            let x = GroupWord { arity, letters: vec![Letter::Var { index: i, inverse: false }] };
            w = GroupWord::commutator_in(g, &w, &x);
        }
        w
    }
}

/// Parses the word-file grammar: whitespace separated tokens `x1`, `x2^-1`,
/// `c:<label>` (optionally `c:<label>^-1`). Lines starting with `#` are comments.
/// `resolve` maps a constant label to a group element.
pub fn parse_word<C: Clone>(
    text: &str,
    mut resolve: impl FnMut(&str) -> Option<C>,
    mut invert: impl FnMut(&C) -> C,
) -> Result<GroupWord<C>> {
    let mut letters = Vec::new();
    let mut arity = 0;
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("");
        for tok in line.split_whitespace() {
            let (body, inverse) = match tok.strip_suffix("^-1") {
                Some(b) => (b, true),
                None => (tok, false),
            };
            if let Some(label) = body.strip_prefix("c:") {
                let c = resolve(label).ok_or_else(|| {
                    Error::parse(lineno + 1, format!("unknown element label `{label}`"))
                })?;
                letters.push(Letter::Const(if inverse { invert(&c) } else { c }));
            } else if let Some(num) = body.strip_prefix('x') {
                let index: usize = num
                    .parse()
                    .ok()
                    .filter(|&i| i >= 1)
                    .ok_or_else(|| Error::parse(lineno + 1, format!("bad variable `{tok}`")))?;
                arity = arity.max(index);
                letters.push(Letter::Var { index, inverse });
            } else {
                return Err(Error::parse(lineno + 1, format!("unexpected token `{tok}`")));
            }
        }
    }
    GroupWord::new(arity.max(1), letters)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::corpus;

    #[test]
    fn var_evaluates_to_assignment() {
        let g = corpus::symmetric(3);
        let w: GroupWord<usize> = GroupWord::var(1, 1).unwrap();
        for x in 0..6 {
            assert_eq!(w.evaluate(&g, &[x]).unwrap(), x);
        }
        assert!(matches!(w.evaluate(&g, &[1, 2]), Err(Error::ArityMismatch { .. })));
    }

    #[test]
    fn commutator_word_matches_simple_commutator() {
        let g = corpus::dihedral(8);
        for k in 1..=3 {
            let w = GroupWord::simple_commutator_word(&g, k);
            let mut t = vec![0usize; k + 1];
            for code in 0..8usize.pow(k as u32 + 1) {
                let mut c = code;
                for slot in t.iter_mut() {
                    *slot = c % 8;
                    c /= 8;
                }
                assert_eq!(w.evaluate(&g, &t).unwrap(), g.simple_commutator(&t));
            }
        }
    }

    #[test]
    fn conjugation_equation_in_sym3() {
        let g = corpus::symmetric(3);
        let c = g.find_label("(1,2,3)").unwrap();
        let t = g.find_label("(1,2)").unwrap();
        let w = parse_word("x1 c:(1,2,3) x1^-1 c:(1,2,3)^-1", |s| g.find_label(s), |&x| g.inv(x))
            .unwrap();
        assert_eq!(w.letters().len(), 4);
        let v = w.evaluate(&g, &[t]).unwrap();
        // Direct: t c t⁻¹ c⁻¹.
        let direct = g.mul(g.mul(g.mul(t, c), g.inv(t)), g.inv(c));
        assert_eq!(v, direct);
        assert_ne!(v, 0);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let g = corpus::symmetric(3);
        let err = parse_word("x1\nx2 y3", |s| g.find_label(s), |&x| g.inv(x)).unwrap_err();
        assert_eq!(err, Error::parse(2, "unexpected token `y3`"));
    }
}
