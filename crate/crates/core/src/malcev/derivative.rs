use std::rc::Rc;

use crate::group::{Group, GroupWord};

/// A map `φ: D → C` between groups, evaluated pointwise.
pub struct EvalMap<'a, D: Group, C: Group> {
    domain: &'a D,
    codomain: &'a C,
    f: Rc<dyn Fn(&D::Elem) -> C::Elem + 'a>,
}

impl<D: Group, C: Group> Clone for EvalMap<'_, D, C> {
    fn clone(&self) -> Self {
        EvalMap { domain: self.domain, codomain: self.codomain, f: Rc::clone(&self.f) }
    }
}

impl<'a, D: Group, C: Group> EvalMap<'a, D, C> {
    pub fn new(domain: &'a D, codomain: &'a C, f: impl Fn(&D::Elem) -> C::Elem + 'a) -> Self {
        EvalMap { domain, codomain, f: Rc::new(f) }
    }

    pub fn constant(domain: &'a D, codomain: &'a C, c: C::Elem) -> Self
    where
        C::Elem: 'a,
    {
        EvalMap::new(domain, codomain, move |_| c.clone())
    }

    pub fn eval(&self, x: &D::Elem) -> C::Elem {
        (self.f)(x)
    }

    pub fn domain(&self) -> &'a D {
        self.domain
    }

    pub fn codomain(&self) -> &'a C {
        self.codomain
    }

    /// `∂_u φ(x) = φ(x)⁻¹ φ(xu)`.
    pub fn derivative(&self, u: D::Elem) -> Self
    where
        D::Elem: 'a,
    {
        let inner = self.clone();
        let (d, c) = (self.domain, self.codomain);
        EvalMap::new(d, c, move |x| {
            let xu = d.mul(x, &u);
            c.mul(&c.inv(&inner.eval(x)), &inner.eval(&xu))
        })
    }

    /// `∂_{u_1} ⋯ ∂_{u_k} φ`, innermost derivative taken along the last `u`.
    pub fn derivatives(&self, us: &[D::Elem]) -> Self
    where
        D::Elem: 'a,
    {
        us.iter().rev().fold(self.clone(), |m, u| m.derivative(u.clone()))
    }
}

impl<'a, G: Group> EvalMap<'a, crate::group::PowerGroup<'a, G>, G>
where
    G::Elem: 'a,
{
    /// The word map `(x_1, ..., x_k) ↦ w(x_1, ..., x_k)`.
    pub fn word(domain: &'a crate::group::PowerGroup<'a, G>, w: GroupWord<G::Elem>) -> Self {
        let g = domain.base;
        EvalMap::new(domain, g, move |x| w.evaluate(g, x).expect("word arity matches domain"))
    }
}

/// `∂_u ∂_v φ(x)` expanded: `φ(xv)⁻¹ φ(x) φ(xu)⁻¹ φ(xuv)`.
pub fn second_derivative_direct<D: Group, C: Group>(
    phi: &EvalMap<'_, D, C>,
    u: &D::Elem,
    v: &D::Elem,
    x: &D::Elem,
) -> C::Elem {
    let (d, c) = (phi.domain(), phi.codomain());
    let xu = d.mul(x, u);
    let xv = d.mul(x, v);
    let xuv = d.mul(&xu, v);
    let a = c.mul(&c.inv(&phi.eval(&xv)), &phi.eval(x));
    let b = c.mul(&c.inv(&phi.eval(&xu)), &phi.eval(&xuv));
    c.mul(&a, &b)
}

#[derive(Debug, Clone, PartialEq)]
pub enum DegreeVerdict<E> {
    /// Every sampled `(d+1)`-fold derivative was trivial.
    Consistent { samples: usize },
    Refuted { x: E, us: Vec<E> },
}

impl<E> DegreeVerdict<E> {
    pub fn is_consistent(&self) -> bool {
        matches!(self, DegreeVerdict::Consistent { .. })
    }
}

/// Samples `(d+1)`-fold derivatives of `φ` at points from `sample`.
/// A refutation is a proof; consistency is only evidence.
pub fn degree_at_most<'a, D: Group, C: Group>(
    phi: &EvalMap<'a, D, C>,
    d: usize,
    samples: usize,
    mut sample: impl FnMut() -> D::Elem,
) -> DegreeVerdict<D::Elem>
where
    D::Elem: 'a,
{
    let samples = samples.max(1);
    for _ in 0..samples {
        let us: Vec<D::Elem> = (0..=d).map(|_| sample()).collect();
        let x = sample();
        let value = phi.derivatives(&us).eval(&x);
        if !phi.codomain().is_identity(&value) {
            return DegreeVerdict::Refuted { x, us };
        }
    }
    DegreeVerdict::Consistent { samples }
}
