use std::fmt::Debug;

/// Minimal group interface shared by finite groups, Mal'cev coordinate
/// groups and free groups.
///
/// Conventions: `[x, y] = x⁻¹y⁻¹xy` and `x^y = y⁻¹xy`.
pub trait Group {
    type Elem: Clone + PartialEq + Debug;

    fn identity(&self) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Self::Elem;

    fn is_identity(&self, a: &Self::Elem) -> bool {
        *a == self.identity()
    }

    fn commutator(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let ab = self.mul(a, b);
        let ba = self.mul(b, a);
        self.mul(&self.inv(&ba), &ab)
    }

    /// `a^by = by⁻¹ a by`.
    fn conjugate(&self, a: &Self::Elem, by: &Self::Elem) -> Self::Elem {
        self.mul(&self.mul(&self.inv(by), a), by)
    }

    /// Left-nested simple commutator `[x1, ..., xk] = [[x1, ..., x(k-1)], xk]`.
    /// A single element is returned unchanged; the empty list gives the identity.
    fn simple_commutator(&self, xs: &[Self::Elem]) -> Self::Elem {
        let mut it = xs.iter();
        let Some(first) = it.next() else {
            return self.identity();
        };
        it.fold(first.clone(), |acc, x| self.commutator(&acc, x))
    }

    fn pow(&self, a: &Self::Elem, n: i64) -> Self::Elem {
        let base = if n < 0 { self.inv(a) } else { a.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = self.identity();
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &sq);
            }
            e >>= 1;
            if e > 0 {
                sq = self.mul(&sq, &sq);
            }
        }
        acc
    }
}

/// The direct power `G^k`, with componentwise operations.
#[derive(Debug, Clone, Copy)]
pub struct PowerGroup<'a, G> {
    pub base: &'a G,
    pub k: usize,
}

impl<'a, G: Group> PowerGroup<'a, G> {
    pub fn new(base: &'a G, k: usize) -> Self {
        PowerGroup { base, k }
    }
}

impl<G: Group> Group for PowerGroup<'_, G> {
    type Elem = Vec<G::Elem>;

    fn identity(&self) -> Self::Elem {
        vec![self.base.identity(); self.k]
    }

    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        a.iter().zip(b).map(|(x, y)| self.base.mul(x, y)).collect()
    }

    fn inv(&self, a: &Self::Elem) -> Self::Elem {
        a.iter().map(|x| self.base.inv(x)).collect()
    }
}
