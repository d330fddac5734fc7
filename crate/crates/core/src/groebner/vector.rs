//! Sparse, order-sorted representation of free-module elements used inside
//! the Buchberger loop.

use std::cmp::Ordering;
use std::sync::Arc;

use num_traits::{One, Zero};

use super::FreeModuleElement;
use crate::order::MonomialOrder;
use crate::poly::{Monomial, Polynomial, Rational, Ring};

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Term {
    pub comp: usize,
    pub mono: Monomial,
    pub coeff: Rational,
}

/// Terms strictly decreasing in the module order; never holds zero coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct SVec {
    pub terms: Vec<Term>,
}

pub(crate) fn cmp_terms(order: MonomialOrder, a: &Term, b: &Term) -> Ordering {
    order.cmp_tagged(a.comp, &a.mono.0, b.comp, &b.mono.0)
}

impl SVec {
    pub fn zero() -> Self {
        SVec { terms: Vec::new() }
    }

    pub fn from_element(e: &FreeModuleElement, order: MonomialOrder) -> Self {
        let mut terms: Vec<Term> = e
            .components()
            .iter()
            .enumerate()
            .flat_map(|(comp, p)| {
                p.terms().map(move |(m, c)| Term {
                    comp,
                    mono: m.clone(),
                    coeff: c.clone(),
                })
            })
            .collect();
        terms.sort_by(|a, b| cmp_terms(order, b, a));
        SVec { terms }
    }

    pub fn to_element(&self, ring: &Arc<Ring>, rank: usize) -> FreeModuleElement {
        let mut comps = vec![Polynomial::zero(ring); rank];
        for t in &self.terms {
            comps[t.comp] = &comps[t.comp] + &Polynomial::term(ring, t.mono.clone(), t.coeff.clone());
        }
        FreeModuleElement::new(comps)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lead(&self) -> &Term {
        &self.terms[0]
    }

    pub fn max_degree(&self) -> u32 {
        self.terms.iter().map(|t| t.mono.degree()).max().unwrap_or(0)
    }

    pub fn make_monic(&mut self) {
        if self.terms.is_empty() {
            return;
        }
        let inv = Rational::one() / &self.terms[0].coeff;
        if inv.is_one() {
            return;
        }
        for t in &mut self.terms {
            t.coeff *= &inv;
        }
    }

    /// `self - c · m · other`, merging in order.
    pub fn sub_mul(&self, c: &Rational, m: &Monomial, other: &SVec, order: MonomialOrder) -> SVec {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let mut a = self.terms.iter().peekable();
        let mut b = other.terms.iter().map(|t| Term {
            comp: t.comp,
            mono: t.mono.mul(m),
            coeff: -(&t.coeff * c),
        });
        let mut nb = b.next();
        loop {
            match (a.peek(), nb.as_ref()) {
                (None, None) => break,
                (Some(_), None) => out.push(a.next().unwrap().clone()),
                (None, Some(_)) => {
                    out.push(nb.take().unwrap());
                    nb = b.next();
                }
                (Some(x), Some(y)) => match cmp_terms(order, x, y) {
                    Ordering::Greater => out.push(a.next().unwrap().clone()),
                    Ordering::Less => {
                        out.push(nb.take().unwrap());
                        nb = b.next();
                    }
                    Ordering::Equal => {
                        let x = a.next().unwrap();
                        let y = nb.take().unwrap();
                        let s = &x.coeff + &y.coeff;
                        if !s.is_zero() {
                            out.push(Term {
                                comp: x.comp,
                                mono: x.mono.clone(),
                                coeff: s,
                            });
                        }
                        nb = b.next();
                    }
                },
            }
        }
        SVec { terms: out }
    }
}

/// Reduces `p` modulo monic `basis`. With `full == false` only the leading
/// term is reduced (top reduction).
pub(crate) fn reduce(mut p: SVec, basis: &[&SVec], order: MonomialOrder, full: bool) -> SVec {
    let mut idx = 0;
    while idx < p.terms.len() {
        let t = &p.terms[idx];
        let divisor = basis.iter().find_map(|g| {
            let l = g.lead();
            if l.comp == t.comp {
                l.mono.quotient_of(&t.mono).map(|q| (q, *g))
            } else {
                None
            }
        });
        match divisor {
            Some((q, g)) => {
                let c = t.coeff.clone();
                p = p.sub_mul(&c, &q, g, order);
            }
            None => {
                if !full {
                    break;
                }
                idx += 1;
            }
        }
    }
    p
}
