//! Gröbner bases for ideals and submodules of free modules over ℚ[x].
//!
//! Module orders are position-over-term: lower component indices dominate.
//! Syzygies and lifts are read off a Gröbner basis of the augmented module
//! generated by `(g_i | e_i)`, where the tag block sits in the trailing
//! (lowest-priority) components.

mod buchberger;
mod vector;

use std::sync::Arc;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::QMatrix;
pub use crate::order::MonomialOrder;
use crate::poly::{Monomial, PolyMatrix, Polynomial, Rational, Ring};
use vector::SVec;

/// An element of `Q^r`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FreeModuleElement {
    components: Vec<Polynomial>,
}

impl FreeModuleElement {
    pub fn new(components: Vec<Polynomial>) -> Self {
        FreeModuleElement { components }
    }

    pub fn zero(ring: &Arc<Ring>, rank: usize) -> Self {
        Self::new(vec![Polynomial::zero(ring); rank])
    }

    pub fn unit(ring: &Arc<Ring>, rank: usize, i: usize) -> Self {
        let mut v = Self::zero(ring, rank);
        v.components[i] = Polynomial::one(ring);
        v
    }

    pub fn scalar(p: Polynomial) -> Self {
        Self::new(vec![p])
    }

    pub fn rank(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[Polynomial] {
        &self.components
    }

    pub fn into_components(self) -> Vec<Polynomial> {
        self.components
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Polynomial::is_zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(self.components.iter().zip(&other.components).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::new(self.components.iter().zip(&other.components).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, p: &Polynomial) -> Self {
        Self::new(self.components.iter().map(|a| a * p).collect())
    }

    /// Concatenation `(self | other)` in `Q^{r+s}`.
    pub fn concat(&self, other: &Self) -> Self {
        Self::new(self.components.iter().chain(&other.components).cloned().collect())
    }

    /// Coordinates `range` of this element.
    pub fn project(&self, range: std::ops::Range<usize>) -> Self {
        Self::new(self.components[range].to_vec())
    }
}

/// `Σ c_i g_i` for polynomial coefficients `c`.
pub fn combine(ring: &Arc<Ring>, rank: usize, coeffs: &[Polynomial], gens: &[FreeModuleElement]) -> FreeModuleElement {
    coeffs
        .iter()
        .zip(gens)
        .fold(FreeModuleElement::zero(ring, rank), |acc, (c, g)| acc.add(&g.scale(c)))
}

/// Columns of a polynomial matrix as free-module elements.
pub fn columns_of(m: &PolyMatrix) -> Vec<FreeModuleElement> {
    m.columns().into_iter().map(FreeModuleElement::new).collect()
}

/// Reduced Gröbner basis of a submodule of `Q^rank`.
#[derive(Debug, Clone)]
pub struct GroebnerBasis {
    ring: Arc<Ring>,
    rank: usize,
    order: MonomialOrder,
    elements: Vec<SVec>,
}

/// Standard monomials of a finite-length quotient `Q^r / M`, as
/// `(component, monomial)` pairs, sorted by component then ascending order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteQuotientBasis {
    pub standard_monomials: Vec<(usize, Monomial)>,
    pub dimension: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QuotientDimension {
    Finite(FiniteQuotientBasis),
    Infinite,
}

impl QuotientDimension {
    pub fn dimension(&self) -> Option<usize> {
        match self {
            QuotientDimension::Finite(b) => Some(b.dimension),
            QuotientDimension::Infinite => None,
        }
    }
}

impl GroebnerBasis {
    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn ambient_rank(&self) -> usize {
        self.rank
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn generators(&self) -> Vec<FreeModuleElement> {
        self.elements.iter().map(|e| e.to_element(&self.ring, self.rank)).collect()
    }

    /// Leading terms `(component, monomial)` of the basis elements.
    pub fn leading_terms(&self) -> Vec<(usize, Monomial)> {
        self.elements.iter().map(|e| (e.lead().comp, e.lead().mono.clone())).collect()
    }

    /// Re-verifies the Buchberger criterion from scratch.
    pub fn is_groebner(&self) -> bool {
        buchberger::satisfies_buchberger_criterion(&self.elements, self.order)
    }

    fn refs(&self) -> Vec<&SVec> {
        self.elements.iter().collect()
    }

    pub fn contains(&self, v: &FreeModuleElement) -> Result<bool> {
        Ok(normal_form(v, self)?.is_zero())
    }
}

fn check_ranks(ring: &Arc<Ring>, rank: usize, gens: &[FreeModuleElement]) -> Result<()> {
    for g in gens {
        if g.rank() != rank {
            return Err(Error::RankMismatch {
                expected: rank,
                found: g.rank(),
            });
        }
        if g.components.iter().any(|c| c.ring() != ring) {
            return Err(Error::RingMismatch);
        }
    }
    Ok(())
}

/// Reduced Gröbner basis of the submodule of `Q^rank` generated by `gens`.
pub fn groebner_basis(
    ring: &Arc<Ring>,
    rank: usize,
    gens: &[FreeModuleElement],
    order: MonomialOrder,
) -> Result<GroebnerBasis> {
    check_ranks(ring, rank, gens)?;
    let svecs = gens.iter().map(|g| SVec::from_element(g, order)).collect();
    Ok(GroebnerBasis {
        ring: ring.clone(),
        rank,
        order,
        elements: buchberger::buchberger(svecs, rank, order),
    })
}

/// Gröbner basis of an ideal of `Q`.
pub fn ideal_basis(ring: &Arc<Ring>, gens: &[Polynomial], order: MonomialOrder) -> Result<GroebnerBasis> {
    let gens: Vec<_> = gens.iter().cloned().map(FreeModuleElement::scalar).collect();
    groebner_basis(ring, 1, &gens, order)
}

/// Remainder of `v` on division by `gb`; zero iff `v` lies in the submodule.
pub fn normal_form(v: &FreeModuleElement, gb: &GroebnerBasis) -> Result<FreeModuleElement> {
    check_ranks(&gb.ring, gb.rank, std::slice::from_ref(v))?;
    let r = vector::reduce(SVec::from_element(v, gb.order), &gb.refs(), gb.order, true);
    Ok(r.to_element(&gb.ring, gb.rank))
}

/// Normal form of a polynomial modulo an ideal basis.
pub fn normal_form_poly(p: &Polynomial, gb: &GroebnerBasis) -> Result<Polynomial> {
    let nf = normal_form(&FreeModuleElement::scalar(p.clone()), gb)?;
    Ok(nf.into_components().remove(0))
}

fn augmented_basis(
    ring: &Arc<Ring>,
    rank: usize,
    gens: &[FreeModuleElement],
    order: MonomialOrder,
) -> Result<GroebnerBasis> {
    check_ranks(ring, rank, gens)?;
    let k = gens.len();
    let aug: Vec<_> = gens
        .iter()
        .enumerate()
        .map(|(i, g)| g.concat(&FreeModuleElement::unit(ring, k, i)))
        .collect();
    groebner_basis(ring, rank + k, &aug, order)
}

/// Generators of the kernel of `Q^k → Q^rank`, `e_i ↦ gens[i]`.
pub fn syzygy_basis(
    ring: &Arc<Ring>,
    rank: usize,
    gens: &[FreeModuleElement],
    order: MonomialOrder,
) -> Result<Vec<FreeModuleElement>> {
    if gens.is_empty() {
        return Ok(Vec::new());
    }
    let k = gens.len();
    let gb = augmented_basis(ring, rank, gens, order)?;
    Ok(gb
        .elements
        .iter()
        .filter(|e| e.lead().comp >= rank)
        .map(|e| e.to_element(ring, rank + k).project(rank..rank + k))
        .collect())
}

/// Coefficients `c` with `v = Σ c_i gens[i]`, or `None` if `v` is not in the span.
pub fn lift(
    v: &FreeModuleElement,
    gens: &[FreeModuleElement],
    order: MonomialOrder,
) -> Result<Option<Vec<Polynomial>>> {
    let ring = match v.components.first() {
        Some(c) => c.ring().clone(),
        None => return Ok(Some(Vec::new())),
    };
    let rank = v.rank();
    let k = gens.len();
    if k == 0 {
        return Ok(if v.is_zero() { Some(Vec::new()) } else { None });
    }
    let gb = augmented_basis(&ring, rank, gens, order)?;
    let target = v.concat(&FreeModuleElement::zero(&ring, k));
    let r = normal_form(&target, &gb)?;
    if !r.project(0..rank).is_zero() {
        return Ok(None);
    }
    Ok(Some(r.project(rank..rank + k).components.iter().map(|c| -c).collect()))
}

/// Standard monomials of `Q^r / M`, or `Infinite`.
pub fn quotient_dimension(gb: &GroebnerBasis) -> QuotientDimension {
    let n = gb.ring.nvars();
    let leads = gb.leading_terms();
    let mut standard = Vec::new();
    for comp in 0..gb.rank {
        let in_comp: Vec<&Monomial> = leads.iter().filter(|(c, _)| *c == comp).map(|(_, m)| m).collect();
        // Bound each variable by the smallest pure power among the leads.
        let mut bounds = Vec::with_capacity(n);
        for i in 0..n {
            let b = in_comp
                .iter()
                .filter(|m| m.0.iter().enumerate().all(|(j, &e)| j == i || e == 0))
                .map(|m| m.0[i])
                .min();
            match b {
                Some(b) => bounds.push(b),
                None => return QuotientDimension::Infinite,
            }
        }
        if n == 0 {
            if in_comp.is_empty() {
                standard.push((comp, Monomial::one(0)));
            }
            continue;
        }
        let mut local = Vec::new();
        let mut e = vec![0u32; n];
        'outer: loop {
            if e.iter().zip(&bounds).all(|(a, b)| a < b) {
                let m = Monomial(e.clone());
                if !in_comp.iter().any(|l| l.divides(&m)) {
                    local.push(m);
                }
            }
            // odometer over the box
            for i in 0..n {
                e[i] += 1;
                if e[i] < bounds[i] {
                    continue 'outer;
                }
                e[i] = 0;
            }
            break;
        }
        local.sort_by(|a, b| gb.order.cmp(&a.0, &b.0));
        standard.extend(local.into_iter().map(|m| (comp, m)));
    }
    let dimension = standard.len();
    QuotientDimension::Finite(FiniteQuotientBasis {
        standard_monomials: standard,
        dimension,
    })
}

/// Coordinates of a normal form in the standard-monomial basis.
pub fn standard_coordinates(nf: &FreeModuleElement, basis: &FiniteQuotientBasis) -> Vec<Rational> {
    basis
        .standard_monomials
        .iter()
        .map(|(c, m)| nf.components[*c].coeff(m))
        .collect()
}

/// `dim_ℚ (Q^rank / ⟨gens⟩)`, if finite.
pub fn module_quotient_dimension(
    ring: &Arc<Ring>,
    rank: usize,
    gens: &[FreeModuleElement],
    order: MonomialOrder,
) -> Result<usize> {
    let gb = groebner_basis(ring, rank, gens, order)?;
    quotient_dimension(&gb).dimension().ok_or(Error::InfiniteDimensional)
}

/// `dim_ℚ (K / I)` for submodules `I ⊆ K ⊆ Q^rank`.
///
/// `K/I` is presented as `Q^a / L` where `a = #kernel_gens` and `L` is the
/// projection onto the first `a` coordinates of the syzygies of
/// `(kernel_gens | image_gens)`.
pub fn subquotient_dimension(
    ring: &Arc<Ring>,
    rank: usize,
    kernel_gens: &[FreeModuleElement],
    image_gens: &[FreeModuleElement],
    order: MonomialOrder,
) -> Result<usize> {
    check_ranks(ring, rank, kernel_gens)?;
    check_ranks(ring, rank, image_gens)?;
    let kgb = groebner_basis(ring, rank, kernel_gens, order)?;
    for (index, g) in image_gens.iter().enumerate() {
        if !kgb.contains(g)? {
            return Err(Error::Containment { index });
        }
    }
    let a = kernel_gens.len();
    if a == 0 {
        return Ok(0);
    }
    let all: Vec<_> = kernel_gens.iter().chain(image_gens).cloned().collect();
    let relations: Vec<_> = syzygy_basis(ring, rank, &all, order)?
        .into_iter()
        .map(|s| s.project(0..a))
        .collect();
    module_quotient_dimension(ring, a, &relations, order)
}

/// True iff every variable acts nilpotently on `Q / I`, i.e. the ideal is
/// supported only at the origin.
pub fn origin_support_check(gb: &GroebnerBasis) -> Result<bool> {
    if gb.rank != 1 {
        return Err(Error::RankMismatch {
            expected: 1,
            found: gb.rank,
        });
    }
    let basis = match quotient_dimension(gb) {
        QuotientDimension::Finite(b) => b,
        QuotientDimension::Infinite => return Err(Error::InfiniteDimensional),
    };
    let mu = basis.dimension;
    if mu == 0 {
        return Ok(true);
    }
    for i in 0..gb.ring.nvars() {
        let m = multiplication_matrix(gb, &basis, &Polynomial::var(&gb.ring, i))?;
        if !m.pow(mu).is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Matrix of multiplication by `p` on `Q / I` in the standard basis
/// (column `j` holds the coordinates of `p · m_j`).
pub fn multiplication_matrix(gb: &GroebnerBasis, basis: &FiniteQuotientBasis, p: &Polynomial) -> Result<QMatrix> {
    let mu = basis.dimension;
    let mut m = QMatrix::zeros(mu, mu);
    for (j, (_, mono)) in basis.standard_monomials.iter().enumerate() {
        let prod = &Polynomial::term(&gb.ring, mono.clone(), crate::poly::int(1)) * p;
        let nf = normal_form(&FreeModuleElement::scalar(prod), gb)?;
        for (i, c) in standard_coordinates(&nf, basis).into_iter().enumerate() {
            if !c.is_zero() {
                m.set(i, j, c);
            }
        }
    }
    Ok(m)
}
