//! Polynomial differential forms on affine space and matrices of forms.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::mf::MatrixFactorization;
use crate::poly::{PolyMatrix, Polynomial, Rational, Ring};

/// Index set `{i₁ < … < i_p}` stored as a bitmask.
type Basis = u64;

/// A homogeneous `p`-form `Σ g_I dx_I`.
#[derive(Clone, PartialEq, Eq)]
pub struct DifferentialForm {
    ring: Arc<Ring>,
    degree: usize,
    terms: BTreeMap<Basis, Polynomial>,
}

fn indices(mask: Basis) -> impl Iterator<Item = usize> {
    (0..64).filter(move |i| mask & (1 << i) != 0)
}

/// Sign of `dx_a ∧ dx_b` relative to the sorted basis element `dx_{a∪b}`.
fn wedge_sign(a: Basis, b: Basis) -> bool {
    let mut swaps = 0u32;
    for j in indices(b) {
        swaps += (a >> (j + 1)).count_ones();
    }
    swaps % 2 == 1
}

impl DifferentialForm {
    pub fn zero(ring: &Arc<Ring>, degree: usize) -> Self {
        assert!(ring.nvars() <= 64, "forms support at most 64 variables");
        DifferentialForm {
            ring: ring.clone(),
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn function(p: &Polynomial) -> Self {
        let mut f = Self::zero(p.ring(), 0);
        f.add_term(0, p.clone());
        f
    }

    pub fn dx(ring: &Arc<Ring>, i: usize) -> Self {
        let mut f = Self::zero(ring, 1);
        f.add_term(1 << i, Polynomial::one(ring));
        f
    }

    /// `g · dx_{i₁} ∧ … ∧ dx_{i_p}` for strictly increasing indices.
    pub fn monomial_form(g: &Polynomial, idx: &[usize]) -> Self {
        let mask = idx.iter().fold(0, |m, &i| m | (1 << i));
        assert_eq!((mask as Basis).count_ones() as usize, idx.len(), "repeated index");
        let mut f = Self::zero(g.ring(), idx.len());
        f.add_term(mask, g.clone());
        f
    }

    /// The top form `g · dx₀ ∧ … ∧ dx_n`.
    pub fn top(g: &Polynomial) -> Self {
        let n = g.nvars();
        Self::monomial_form(g, &(0..n).collect::<Vec<_>>())
    }

    fn add_term(&mut self, mask: Basis, g: Polynomial) {
        if g.is_zero() {
            return;
        }
        let sum = match self.terms.remove(&mask) {
            Some(old) => &old + &g,
            None => g,
        };
        if !sum.is_zero() {
            self.terms.insert(mask, sum);
        }
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `(indices, coefficient)` pairs in increasing index order.
    pub fn terms(&self) -> Vec<(Vec<usize>, &Polynomial)> {
        self.terms.iter().map(|(m, g)| (indices(*m).collect(), g)).collect()
    }

    /// Coefficient of `dx₀ ∧ … ∧ dx_n`.
    pub fn top_coefficient(&self) -> Result<Polynomial> {
        let n = self.ring.nvars();
        if self.degree != n {
            return Err(Error::FormDegree {
                expected: n,
                found: self.degree,
            });
        }
        let mask = if n == 0 { 0 } else { Basis::MAX >> (64 - n) };
        Ok(self.terms.get(&mask).cloned().unwrap_or_else(|| Polynomial::zero(&self.ring)))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch);
        }
        if self.degree != other.degree && !(self.is_zero() || other.is_zero()) {
            return Err(Error::FormDegree {
                expected: self.degree,
                found: other.degree,
            });
        }
        let mut out = if self.is_zero() { Self::zero(&self.ring, other.degree) } else { self.clone() };
        for (m, g) in &other.terms {
            out.add_term(*m, g.clone());
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        self.scale_poly(&Polynomial::from_int(&self.ring, -1))
    }

    pub fn scale_poly(&self, p: &Polynomial) -> Self {
        let mut out = Self::zero(&self.ring, self.degree);
        for (m, g) in &self.terms {
            out.add_term(*m, g * p);
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero(&self.ring, self.degree);
        for (m, g) in &self.terms {
            out.add_term(*m, g.scale(c));
        }
        out
    }

    /// Graded-commutative product.
    pub fn wedge(&self, other: &Self) -> Result<Self> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch);
        }
        let mut out = Self::zero(&self.ring, self.degree + other.degree);
        for (ma, ga) in &self.terms {
            for (mb, gb) in &other.terms {
                if ma & mb != 0 {
                    continue;
                }
                let g = ga * gb;
                out.add_term(ma | mb, if wedge_sign(*ma, *mb) { -g } else { g });
            }
        }
        Ok(out)
    }

    /// Exterior derivative over ℚ.
    pub fn exterior_derivative(&self) -> Self {
        let n = self.ring.nvars();
        let mut out = Self::zero(&self.ring, self.degree + 1);
        for (m, g) in &self.terms {
            for i in 0..n {
                if m & (1 << i) != 0 {
                    continue;
                }
                let dg = g.differentiate(i).expect("index in range");
                if dg.is_zero() {
                    continue;
                }
                let mi: Basis = 1 << i;
                out.add_term(m | mi, if wedge_sign(mi, *m) { -dg } else { dg });
            }
        }
        out
    }
}

impl fmt::Display for DifferentialForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let names = self.ring.names();
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, g)| {
                let dx: Vec<String> = indices(*m).map(|i| format!("d{}", names[i])).collect();
                if dx.is_empty() {
                    format!("({g})")
                } else {
                    format!("({g})*{}", dx.join("^"))
                }
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

impl fmt::Debug for DifferentialForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DifferentialForm[{}]({self})", self.degree)
    }
}

/// Matrix whose entries are forms of one common degree.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FormMatrix {
    rows: usize,
    cols: usize,
    degree: usize,
    entries: Vec<DifferentialForm>,
}

impl FormMatrix {
    pub fn new(rows: usize, cols: usize, degree: usize, entries: Vec<DifferentialForm>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::Shape(format!("{} entries for a {rows}x{cols} form matrix", entries.len())));
        }
        if let Some(e) = entries.iter().find(|e| e.degree != degree && !e.is_zero()) {
            return Err(Error::FormDegree {
                expected: degree,
                found: e.degree,
            });
        }
        Ok(FormMatrix {
            rows,
            cols,
            degree,
            entries,
        })
    }

    /// Entries viewed as 0-forms.
    pub fn functions(m: &PolyMatrix) -> Self {
        FormMatrix {
            rows: m.rows(),
            cols: m.cols(),
            degree: 0,
            entries: m.entries().iter().map(DifferentialForm::function).collect(),
        }
    }

    /// Entrywise exterior derivative `dM`.
    pub fn differential(m: &PolyMatrix) -> Self {
        FormMatrix {
            rows: m.rows(),
            cols: m.cols(),
            degree: 1,
            entries: m
                .entries()
                .iter()
                .map(|p| DifferentialForm::function(p).exterior_derivative())
                .collect(),
        }
    }

    pub fn identity(ring: &Arc<Ring>, n: usize) -> Self {
        Self::functions(&PolyMatrix::identity(ring, n))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn get(&self, i: usize, j: usize) -> &DifferentialForm {
        &self.entries[i * self.cols + j]
    }

    /// Row-by-column product with entrywise wedge.
    pub fn product(&self, other: &FormMatrix) -> Result<FormMatrix> {
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let ring = self.entries.first().or(other.entries.first()).map(|e| e.ring.clone());
        let degree = self.degree + other.degree;
        let mut entries = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for k in 0..other.cols {
                let mut acc = DifferentialForm::zero(ring.as_ref().expect("non-empty"), degree);
                for j in 0..self.cols {
                    acc = acc.add(&self.get(i, j).wedge(other.get(j, k))?)?;
                }
                entries.push(acc);
            }
        }
        Ok(FormMatrix {
            rows: self.rows,
            cols: other.cols,
            degree,
            entries,
        })
    }

    pub fn trace(&self) -> Result<DifferentialForm> {
        if self.rows != self.cols {
            return Err(Error::Shape("trace of a non-square matrix".into()));
        }
        let ring = self.entries[0].ring.clone();
        let mut acc = DifferentialForm::zero(&ring, self.degree);
        for i in 0..self.rows {
            acc = acc.add(self.get(i, i))?;
        }
        Ok(acc)
    }

    pub fn power(&self, e: usize) -> Result<FormMatrix> {
        let ring = self.entries[0].ring.clone();
        let mut acc = Self::identity(&ring, self.rows);
        for _ in 0..e {
            acc = acc.product(self)?;
        }
        Ok(acc)
    }
}

/// Trace of the ordered product `ms[0] · ms[1] ⋯`; the empty product is the
/// identity of size `size`.
pub fn matrix_form_product_trace(ring: &Arc<Ring>, size: usize, ms: &[FormMatrix]) -> Result<DifferentialForm> {
    let mut acc = FormMatrix::identity(ring, size);
    for m in ms {
        acc = acc.product(m)?;
    }
    acc.trace()
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// `(2 / (n+1)!) · tr((dA ∧ dB)^p)` with `p = (n+1)/2`.
pub fn chern_character_form(mf: &MatrixFactorization) -> Result<DifferentialForm> {
    let ring = mf.ring();
    let dim = ring.nvars();
    if !dim.is_multiple_of(2) {
        return Err(Error::Parity(format!(
            "the Chern character form needs an even number of variables, found {dim}"
        )));
    }
    let p = dim / 2;
    let da = FormMatrix::differential(mf.a());
    let db = FormMatrix::differential(mf.b());
    let tr = da.product(&db)?.power(p)?.trace()?;
    let c = Rational::new(BigInt::from(2), factorial(dim));
    Ok(tr.scale(&c))
}

/// Both sides of `f · tr((dA dB)^j) = j df ∧ tr(A dB (dA dB)^{j−1})`.
pub fn euler_lemma_sides(mf: &MatrixFactorization, j: usize) -> Result<(DifferentialForm, DifferentialForm)> {
    let ring = mf.ring();
    if j == 0 || 2 * j > ring.nvars() {
        return Err(Error::OutOfRange {
            what: "lemma exponent j",
            value: j as i64,
        });
    }
    let da = FormMatrix::differential(mf.a());
    let db = FormMatrix::differential(mf.b());
    let dadb = da.product(&db)?;
    let f = mf.potential();
    let lhs = dadb.power(j)?.trace()?.scale_poly(f);
    let a = FormMatrix::functions(mf.a());
    let inner = a.product(&db)?.product(&dadb.power(j - 1)?)?.trace()?;
    let df = DifferentialForm::function(f).exterior_derivative();
    let rhs = df.wedge(&inner)?.scale(&Rational::from_integer(BigInt::from(j)));
    Ok((lhs, rhs))
}

/// True iff the identity above holds exactly for `(mf, j)`.
pub fn euler_lemma_check(mf: &MatrixFactorization, j: usize) -> Result<bool> {
    let (lhs, rhs) = euler_lemma_sides(mf, j)?;
    Ok(lhs == rhs)
}
