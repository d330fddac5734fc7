//! Milnor algebra, Grothendieck residue, and the pairings on matrix
//! factorizations: Euler pairing, Hochster theta, Herbrand difference, the
//! Hirzebruch–Riemann–Roch comparison, Gram matrices and PSD certificates.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::forms::{chern_character_form, DifferentialForm};
use crate::groebner::{
    ideal_basis, lift, normal_form_poly, origin_support_check, quotient_dimension, standard_coordinates,
    FiniteQuotientBasis, FreeModuleElement, GroebnerBasis, QuotientDimension,
};
use crate::linalg::QMatrix;
use crate::mf::{
    check_same_potential, cokernel_presentation, homology_dimensions, hom_complex, tor_lengths,
    tor_lengths_of_presentation, MatrixFactorization, ModulePresentation, Over,
};
use crate::order::MonomialOrder;
use crate::poly::{Monomial, Polynomial, Rational, Ring};

/// `Q / (∂f/∂x₀, …, ∂f/∂x_n)` with its standard-monomial basis.
#[derive(Clone, Debug)]
pub struct MilnorAlgebra {
    pub potential: Polynomial,
    pub jacobian_gb: GroebnerBasis,
    pub basis: FiniteQuotientBasis,
    pub milnor_number: usize,
}

pub fn milnor_algebra(f: &Polynomial, order: MonomialOrder) -> Result<MilnorAlgebra> {
    if !f.constant_term().is_zero() {
        return Err(Error::NonzeroAtOrigin);
    }
    let gb = ideal_basis(f.ring(), &f.jacobian_generators(), order)?;
    let basis = match quotient_dimension(&gb) {
        QuotientDimension::Finite(b) => b,
        QuotientDimension::Infinite => return Err(Error::NotIsolated),
    };
    if !origin_support_check(&gb)? {
        return Err(Error::SingularAwayFromOrigin);
    }
    Ok(MilnorAlgebra {
        potential: f.clone(),
        jacobian_gb: gb,
        milnor_number: basis.dimension,
        basis,
    })
}

impl MilnorAlgebra {
    pub fn ring(&self) -> &Arc<Ring> {
        self.potential.ring()
    }

    /// Coordinates of the class of `p` in the standard-monomial basis.
    pub fn coordinates(&self, p: &Polynomial) -> Result<Vec<Rational>> {
        let nf = normal_form_poly(p, &self.jacobian_gb)?;
        Ok(standard_coordinates(&FreeModuleElement::scalar(nf), &self.basis))
    }

    /// Standard monomials as polynomials.
    pub fn basis_polynomials(&self) -> Vec<Polynomial> {
        self.basis
            .standard_monomials
            .iter()
            .map(|(_, m)| Polynomial::term(self.ring(), m.clone(), Rational::one()))
            .collect()
    }
}

/// The Grothendieck residue `g ↦ Res[g dx / (∂₀f, …, ∂_nf)]` on the Milnor
/// algebra, tabulated on the standard monomials.
#[derive(Clone, Debug)]
pub struct ResidueFunctional {
    pub algebra: MilnorAlgebra,
    pub values: Vec<Rational>,
}

/// Computes the residue by the transformation law: with `x_i^{N_i} = Σ_j a_ij ∂_j f`,
/// `Res(g) = coefficient of ∏ x_i^{N_i − 1} in g · det(a)`. The result is
/// checked against `Res(hess f) = μ`.
pub fn residue_functional(alg: &MilnorAlgebra) -> Result<ResidueFunctional> {
    let ring = alg.ring().clone();
    let n = ring.nvars();
    let order = alg.jacobian_gb.order();
    let partials: Vec<FreeModuleElement> = alg
        .potential
        .jacobian_generators()
        .into_iter()
        .map(FreeModuleElement::scalar)
        .collect();

    let hess = alg.potential.hessian_determinant();
    if normal_form_poly(&hess, &alg.jacobian_gb)?.is_zero() {
        return Err(Error::DegenerateHessian);
    }

    let mut exponents = Vec::with_capacity(n);
    let mut rows = Vec::with_capacity(n);
    for i in 0..n {
        let xi = Polynomial::var(&ring, i);
        let mut power = xi.clone();
        let mut e = 1u32;
        while !normal_form_poly(&power, &alg.jacobian_gb)?.is_zero() {
            power = &power * &xi;
            e += 1;
            if e as usize > alg.milnor_number + 1 {
                return Err(Error::Internal(format!("variable {i} is not nilpotent in the Milnor algebra")));
            }
        }
        let coeffs = lift(&FreeModuleElement::scalar(power), &partials, order)?
            .ok_or_else(|| Error::Internal("pure power not in the Jacobian ideal".into()))?;
        exponents.push(e - 1);
        rows.push(coeffs);
    }
    let a = crate::poly::PolyMatrix::from_rows(&ring, rows)?;
    let det = a.determinant()?;
    let socle = Monomial(exponents);
    let res = |g: &Polynomial| (g * &det).coeff(&socle);

    let values: Vec<Rational> = alg.basis_polynomials().iter().map(res).collect();
    let rf = ResidueFunctional {
        algebra: alg.clone(),
        values,
    };
    let mu = Rational::from_integer(BigInt::from(alg.milnor_number));
    let at_hess = rf.evaluate(&hess)?;
    if at_hess != mu {
        return Err(Error::Internal(format!(
            "residue of the Hessian is {at_hess}, expected the Milnor number {mu}"
        )));
    }
    Ok(rf)
}

impl ResidueFunctional {
    pub fn evaluate(&self, p: &Polynomial) -> Result<Rational> {
        let coords = self.algebra.coordinates(p)?;
        Ok(coords.iter().zip(&self.values).map(|(c, v)| c * v).sum())
    }

    /// `res(m_i m_j)` on the standard basis; invertible iff the residue
    /// pairing is perfect.
    pub fn pairing_matrix(&self) -> Result<QMatrix> {
        let basis = self.algebra.basis_polynomials();
        let mu = basis.len();
        let mut g = QMatrix::zeros(mu, mu);
        for i in 0..mu {
            for j in i..mu {
                let v = self.evaluate(&(&basis[i] * &basis[j]))?;
                g.set(i, j, v.clone());
                g.set(j, i, v);
            }
        }
        Ok(g)
    }
}

/// `res(coef(a) · coef(b))` for top-degree forms `a`, `b`.
pub fn residue_pairing(rf: &ResidueFunctional, a: &DifferentialForm, b: &DifferentialForm) -> Result<Rational> {
    let ca = a.top_coefficient()?;
    let cb = b.top_coefficient()?;
    rf.evaluate(&(&ca * &cb))
}

fn signed(h: (usize, usize)) -> i64 {
    h.0 as i64 - h.1 as i64
}

/// `dim H_even − dim H_odd` of `Hom(left, right)`.
pub fn euler_pairing(left: &MatrixFactorization, right: &MatrixFactorization, order: MonomialOrder) -> Result<i64> {
    Ok(signed(homology_dimensions(&hom_complex(left, right)?, order)?))
}

/// Stable `dim Ext² − dim Ext¹` of `(coker A, coker A')`; on maximal
/// Cohen–Macaulay modules this is the Euler pairing.
pub fn herbrand_difference(m: &MatrixFactorization, m2: &MatrixFactorization, order: MonomialOrder) -> Result<i64> {
    euler_pairing(m, m2, order)
}

/// `ch_PV` reduced into the Milnor algebra, as coordinates.
pub fn chern_milnor_class(mf: &MatrixFactorization, alg: &MilnorAlgebra) -> Result<Vec<Rational>> {
    if mf.potential() != &alg.potential {
        return Err(Error::PotentialMismatch {
            left: mf.potential().to_string(),
            right: alg.potential.to_string(),
        });
    }
    let ch = chern_character_form(mf)?;
    alg.coordinates(&ch.top_coefficient()?)
}

/// `(−1)^{binom(n+1, 2)}` for a ring with `n+1` variables.
pub fn hrr_sign(nvars: usize) -> i64 {
    if (nvars * nvars.saturating_sub(1) / 2).is_multiple_of(2) {
        1
    } else {
        -1
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HrrReport {
    pub chi: i64,
    pub residue_side: Rational,
    pub sign: i64,
    pub equal: bool,
}

/// Compares `χ(left, right)` with `(−1)^{binom(n+1,2)} Res_f(ch_PV(left), ch_PV(right))`.
pub fn hrr_check(
    left: &MatrixFactorization,
    right: &MatrixFactorization,
    rf: &ResidueFunctional,
    order: MonomialOrder,
) -> Result<HrrReport> {
    check_same_potential(left, right)?;
    if left.potential() != &rf.algebra.potential {
        return Err(Error::PotentialMismatch {
            left: left.potential().to_string(),
            right: rf.algebra.potential.to_string(),
        });
    }
    let chi = euler_pairing(left, right, order)?;
    let residue_side = residue_pairing(rf, &chern_character_form(left)?, &chern_character_form(right)?)?;
    let sign = hrr_sign(left.ring().nvars());
    let equal = Rational::from_integer(BigInt::from(chi)) == residue_side.clone() * Rational::from_integer(BigInt::from(sign));
    Ok(HrrReport {
        chi,
        residue_side,
        sign,
        equal,
    })
}

/// A module over `R`, given either as the cokernel of a factorization or by
/// a presentation.
#[derive(Clone, Debug)]
pub enum ModuleSource {
    Factorization(MatrixFactorization),
    Presentation(ModulePresentation),
}

impl ModuleSource {
    pub fn label(&self) -> Option<&str> {
        match self {
            ModuleSource::Factorization(mf) => Some(mf.label()),
            ModuleSource::Presentation(_) => None,
        }
    }

    pub fn ring(&self) -> &Arc<Ring> {
        match self {
            ModuleSource::Factorization(mf) => mf.ring(),
            ModuleSource::Presentation(p) => p.ring(),
        }
    }

    fn potential(&self) -> Option<&Polynomial> {
        match self {
            ModuleSource::Factorization(mf) => Some(mf.potential()),
            ModuleSource::Presentation(p) => match p.over() {
                Over::R(f) => Some(f),
                Over::Q => None,
            },
        }
    }

    pub fn presentation(&self) -> ModulePresentation {
        match self {
            ModuleSource::Factorization(mf) => cokernel_presentation(mf),
            ModuleSource::Presentation(p) => p.clone(),
        }
    }
}

/// `length Tor_even − length Tor_odd` in the stable range.
pub fn hochster_theta(m: &ModuleSource, n_module: &ModulePresentation, order: MonomialOrder) -> Result<i64> {
    Ok(signed(stable_tor_lengths(m, n_module, order)?))
}

/// Stable `(length Tor_even, length Tor_odd)` of `(M, N)`.
pub fn stable_tor_lengths(m: &ModuleSource, n_module: &ModulePresentation, order: MonomialOrder) -> Result<(usize, usize)> {
    let n_src = ModuleSource::Presentation(n_module.clone());
    let f = match (m.potential(), n_src.potential()) {
        (Some(f), Some(g)) if f != g => {
            return Err(Error::PotentialMismatch {
                left: f.to_string(),
                right: g.to_string(),
            })
        }
        (Some(f), _) | (None, Some(f)) => f.clone(),
        (None, None) => return Err(Error::Shape("neither module is presented over the hypersurface ring".into())),
    };
    match m {
        ModuleSource::Factorization(mf) => tor_lengths(mf, n_module, order),
        ModuleSource::Presentation(p) => tor_lengths_of_presentation(p, n_module, &f, order),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairingKind {
    Euler,
    Theta,
    SignedTheta,
}

impl std::str::FromStr for PairingKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "euler" => Ok(PairingKind::Euler),
            "theta" => Ok(PairingKind::Theta),
            "signed_theta" => Ok(PairingKind::SignedTheta),
            other => Err(format!("unknown pairing `{other}` (expected euler, theta or signed_theta)")),
        }
    }
}

impl std::fmt::Display for PairingKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            PairingKind::Euler => "euler",
            PairingKind::Theta => "theta",
            PairingKind::SignedTheta => "signed_theta",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GramMatrix {
    pub labels: Vec<String>,
    pub entries: QMatrix,
}

/// Full matrix of pairings between `items`. Entries are computed in
/// parallel; the result does not depend on scheduling.
pub fn gram_matrix(items: &[(String, ModuleSource)], pairing: PairingKind, order: MonomialOrder) -> Result<GramMatrix> {
    let k = items.len();
    let sign = match (pairing, items.first()) {
        (PairingKind::SignedTheta, Some((_, it))) => {
            let d = it.ring().nvars();
            if d % 2 != 0 {
                return Err(Error::Parity(format!(
                    "signed theta needs an even-dimensional ambient ring, found dimension {d}"
                )));
            }
            if (d / 2) % 2 == 0 {
                1
            } else {
                -1
            }
        }
        _ => 1,
    };
    let cells: Vec<(usize, usize)> = (0..k).flat_map(|i| (0..k).map(move |j| (i, j))).collect();
    let values: Vec<i64> = cells
        .par_iter()
        .map(|&(i, j)| {
            let (a, b) = (&items[i].1, &items[j].1);
            match pairing {
                PairingKind::Euler => match (a, b) {
                    (ModuleSource::Factorization(x), ModuleSource::Factorization(y)) => euler_pairing(x, y, order),
                    _ => Err(Error::Shape("the Euler pairing needs matrix factorizations".into())),
                },
                PairingKind::Theta | PairingKind::SignedTheta => {
                    hochster_theta(a, &b.presentation(), order).map(|t| sign * t)
                }
            }
        })
        .collect::<Result<_>>()?;
    let mut entries = QMatrix::zeros(k, k);
    for (&(i, j), v) in cells.iter().zip(values) {
        entries.set(i, j, Rational::from_integer(BigInt::from(v)));
    }
    if let Some((row, col)) = entries.first_asymmetry() {
        return Err(Error::Asymmetric { row, col });
    }
    Ok(GramMatrix {
        labels: items.iter().map(|(l, _)| l.clone()).collect(),
        entries,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PsdReport {
    pub psd: bool,
    pub kernel_basis: Vec<Vec<Rational>>,
}

/// Exact PSD test by symmetric-pivot LDLᵀ; the kernel is returned when PSD.
pub fn is_positive_semidefinite(g: &QMatrix) -> Result<PsdReport> {
    if let Some((row, col)) = g.first_asymmetry() {
        return Err(Error::Asymmetric { row, col });
    }
    let not_psd = PsdReport {
        psd: false,
        kernel_basis: Vec::new(),
    };
    let mut m = g.clone();
    let mut remaining: Vec<usize> = (0..g.rows()).collect();
    while !remaining.is_empty() {
        if remaining.iter().any(|&i| m.get(i, i).is_negative()) {
            return Ok(not_psd);
        }
        let (pos, &p) = remaining
            .iter()
            .enumerate()
            .max_by(|(ia, a), (ib, b)| m.get(**a, **a).cmp(m.get(**b, **b)).then(ib.cmp(ia)))
            .expect("non-empty");
        let d = m.get(p, p).clone();
        if d.is_zero() {
            // All remaining diagonals vanish: PSD forces the block to be zero.
            let nonzero = remaining.iter().any(|&i| remaining.iter().any(|&j| !m.get(i, j).is_zero()));
            if nonzero {
                return Ok(not_psd);
            }
            break;
        }
        remaining.remove(pos);
        for &i in &remaining {
            let li = m.get(i, p) / &d;
            if li.is_zero() {
                continue;
            }
            for &j in &remaining {
                let v = m.get(i, j) - &li * m.get(p, j);
                m.set(i, j, v);
            }
        }
    }
    Ok(PsdReport {
        psd: true,
        kernel_basis: g.kernel(),
    })
}

/// `Σ a_i b_j G_ij` for integer coefficient vectors.
pub fn bilinear(g: &QMatrix, a: &[i64], b: &[i64]) -> Rational {
    let a: Vec<Rational> = a.iter().map(|&v| Rational::from_integer(BigInt::from(v))).collect();
    let b: Vec<Rational> = b.iter().map(|&v| Rational::from_integer(BigInt::from(v))).collect();
    let mut acc = Rational::zero();
    for (i, ai) in a.iter().enumerate() {
        for (j, bj) in b.iter().enumerate() {
            acc += ai * bj * g.get(i, j);
        }
    }
    acc
}

/// `Σ c_i v_i` for integer coefficients and rational vectors.
pub fn linear_combination(coeffs: &[i64], vectors: &[Vec<Rational>]) -> Vec<Rational> {
    let len = vectors.first().map_or(0, Vec::len);
    let mut out = vec![Rational::zero(); len];
    for (c, v) in coeffs.iter().zip(vectors) {
        let c = Rational::from_integer(BigInt::from(*c));
        for (o, x) in out.iter_mut().zip(v) {
            *o += &c * x;
        }
    }
    out
}

/// Integer value of an exact rational, if it is one.
pub fn as_integer(r: &Rational) -> Option<i64> {
    if r.is_integer() {
        r.to_integer().to_i64()
    } else {
        None
    }
}
