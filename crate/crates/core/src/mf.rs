//! Matrix factorizations, their Hom complexes, and stable Tor against
//! presented modules over the hypersurface ring `R = Q/(f)`.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::groebner::{columns_of, subquotient_dimension, syzygy_basis, FreeModuleElement};
use crate::order::MonomialOrder;
use crate::poly::{PolyMatrix, Polynomial, Ring};

/// A pair `(A, B)` of square matrices with `AB = BA = f·I`.
///
/// `A` is the odd differential `P₁ → P₀` and `B` the even one `P₀ → P₁`;
/// the associated module is `coker A`. Equality ignores the label.
#[derive(Clone)]
pub struct MatrixFactorization {
    label: String,
    potential: Polynomial,
    a: PolyMatrix,
    b: PolyMatrix,
}

impl PartialEq for MatrixFactorization {
    fn eq(&self, other: &Self) -> bool {
        self.potential == other.potential && self.a == other.a && self.b == other.b
    }
}

impl Eq for MatrixFactorization {}

impl fmt::Debug for MatrixFactorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MatrixFactorization")
            .field("label", &self.label)
            .field("potential", &format_args!("{}", self.potential))
            .field("a", &self.a)
            .field("b", &self.b)
            .finish()
    }
}

fn strip_suffix_or_add(label: &str, suffix: &str) -> String {
    match label.strip_suffix(suffix) {
        Some(base) => base.to_string(),
        None => format!("{label}{suffix}"),
    }
}

impl MatrixFactorization {
    /// Builds a candidate without checking the factorization identity.
    pub fn new_unchecked(label: impl Into<String>, potential: Polynomial, a: PolyMatrix, b: PolyMatrix) -> Self {
        MatrixFactorization {
            label: label.into(),
            potential,
            a,
            b,
        }
    }

    /// Builds and validates.
    pub fn new(label: impl Into<String>, potential: Polynomial, a: PolyMatrix, b: PolyMatrix) -> Result<Self> {
        validate_mf(Self::new_unchecked(label, potential, a, b))
    }

    /// The rank-one factorization `(1, f)`, zero in the stable category.
    pub fn trivial(potential: &Polynomial) -> Self {
        let ring = potential.ring();
        MatrixFactorization {
            label: "trivial".into(),
            potential: potential.clone(),
            a: PolyMatrix::identity(ring, 1),
            b: PolyMatrix::scalar(ring, 1, potential),
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn potential(&self) -> &Polynomial {
        &self.potential
    }

    pub fn a(&self) -> &PolyMatrix {
        &self.a
    }

    pub fn b(&self) -> &PolyMatrix {
        &self.b
    }

    pub fn ring(&self) -> &Arc<Ring> {
        self.potential.ring()
    }

    pub fn rank(&self) -> usize {
        self.a.rows()
    }
}

fn invalid(label: &str, message: String) -> Error {
    Error::InvalidFactorization {
        label: label.to_string(),
        message,
    }
}

/// Returns the candidate iff `AB = BA = f·I` holds exactly. The first
/// offending entry is reported with 1-based indices.
pub fn validate_mf(candidate: MatrixFactorization) -> Result<MatrixFactorization> {
    let (a, b, f) = (&candidate.a, &candidate.b, &candidate.potential);
    let label = candidate.label.as_str();
    if !a.is_square() || !b.is_square() || a.rows() != b.rows() {
        return Err(invalid(
            label,
            format!(
                "dimension mismatch: A is {}x{}, B is {}x{}",
                a.rows(),
                a.cols(),
                b.rows(),
                b.cols()
            ),
        ));
    }
    if a.ring() != f.ring() || b.ring() != f.ring() {
        return Err(Error::RingMismatch);
    }
    let r = a.rows();
    let zero = Polynomial::zero(f.ring());
    for (name, prod) in [("A*B", a.product(b)?), ("B*A", b.product(a)?)] {
        for i in 0..r {
            for j in 0..r {
                let expected = if i == j { f } else { &zero };
                let got = prod.get(i, j);
                if got != expected {
                    return Err(invalid(
                        label,
                        format!("{name} entry ({}, {}) is {got}, expected {expected}", i + 1, j + 1),
                    ));
                }
            }
        }
    }
    Ok(candidate)
}

/// `(A, B) ↦ (B, A)`.
pub fn shift(mf: &MatrixFactorization) -> MatrixFactorization {
    MatrixFactorization {
        label: strip_suffix_or_add(&mf.label, "[1]"),
        potential: mf.potential.clone(),
        a: mf.b.clone(),
        b: mf.a.clone(),
    }
}

/// `(A, B) ↦ (Aᵀ, Bᵀ)`; for maximal Cohen–Macaulay `M = coker A`,
/// `coker Aᵀ ≅ M*`.
pub fn dual(mf: &MatrixFactorization) -> MatrixFactorization {
    MatrixFactorization {
        label: strip_suffix_or_add(&mf.label, "*"),
        potential: mf.potential.clone(),
        a: mf.a.transpose(),
        b: mf.b.transpose(),
    }
}

pub fn direct_sum(x: &MatrixFactorization, y: &MatrixFactorization) -> Result<MatrixFactorization> {
    check_same_potential(x, y)?;
    Ok(MatrixFactorization {
        label: format!("{}+{}", x.label, y.label),
        potential: x.potential.clone(),
        a: x.a.direct_sum(&y.a),
        b: x.b.direct_sum(&y.b),
    })
}

pub(crate) fn check_same_potential(x: &MatrixFactorization, y: &MatrixFactorization) -> Result<()> {
    if x.potential != y.potential {
        return Err(Error::PotentialMismatch {
            left: x.potential.to_string(),
            right: y.potential.to_string(),
        });
    }
    Ok(())
}

/// A ℤ/2-graded complex of free `Q`-modules.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoPeriodicComplex {
    pub rank_even: usize,
    pub rank_odd: usize,
    pub d_even_to_odd: PolyMatrix,
    pub d_odd_to_even: PolyMatrix,
}

impl TwoPeriodicComplex {
    /// True iff both composites vanish.
    pub fn is_complex(&self) -> Result<bool> {
        Ok(self.d_odd_to_even.product(&self.d_even_to_odd)?.is_zero()
            && self.d_even_to_odd.product(&self.d_odd_to_even)?.is_zero())
    }
}

/// `I_p ⊗ M` with the row-major block convention used for vectorized
/// `p × q` matrices.
fn identity_kron(ring: &Arc<Ring>, p: usize, m: &PolyMatrix) -> PolyMatrix {
    let (r, c) = (m.rows(), m.cols());
    PolyMatrix::from_fn(ring, p * r, p * c, |i, j| {
        if i / r == j / c {
            m.get(i % r, j % c).clone()
        } else {
            Polynomial::zero(ring)
        }
    })
}

/// The complex `Hom(P, P')` with `∂α = d'α − (−1)^{|α|} α d`.
///
/// Even part: `(α₀: P₀→P₀', α₁: P₁→P₁')`; odd part: `(β: P₁→P₀', γ: P₀→P₁')`.
/// Each map is an `r' × r` matrix, vectorized row by row.
pub fn hom_complex(left: &MatrixFactorization, right: &MatrixFactorization) -> Result<TwoPeriodicComplex> {
    check_same_potential(left, right)?;
    let ring = left.ring();
    let (r, rp) = (left.rank(), right.rank());
    // X ↦ M X for M of size r'×r', and X ↦ X N for N of size r×r.
    let lmul = |m: &PolyMatrix| m.kron_identity(r);
    let rmul = |n: &PolyMatrix| identity_kron(ring, rp, &n.transpose());
    let (a, b, ap, bp) = (&left.a, &left.b, &right.a, &right.b);

    let d_even_to_odd = PolyMatrix::from_blocks(ring, &[vec![rmul(a).neg(), lmul(ap)], vec![lmul(bp), rmul(b).neg()]])?;
    let d_odd_to_even = PolyMatrix::from_blocks(ring, &[vec![rmul(b), lmul(ap)], vec![lmul(bp), rmul(a)]])?;
    Ok(TwoPeriodicComplex {
        rank_even: 2 * r * rp,
        rank_odd: 2 * r * rp,
        d_even_to_odd,
        d_odd_to_even,
    })
}

/// `dim ker / im` of the free-module complex `F_in --din--> F --dout--> F_out`.
fn free_homology(din: &PolyMatrix, dout: &PolyMatrix, order: MonomialOrder) -> Result<usize> {
    let ring = dout.ring();
    let n = dout.cols();
    let kernel = syzygy_basis(ring, dout.rows(), &columns_of(dout), order)?;
    subquotient_dimension(ring, n, &kernel, &columns_of(din), order)
}

/// `(dim H_even, dim H_odd)` over ℚ.
pub fn homology_dimensions(c: &TwoPeriodicComplex, order: MonomialOrder) -> Result<(usize, usize)> {
    let even = free_homology(&c.d_odd_to_even, &c.d_even_to_odd, order)?;
    let odd = free_homology(&c.d_even_to_odd, &c.d_odd_to_even, order)?;
    Ok((even, odd))
}

/// Ring over which a presentation is read.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Over {
    /// Polynomial ring `Q`; the module must be annihilated by `f` to be
    /// used as an `R`-module.
    Q,
    /// Hypersurface ring `R = Q/(f)`: the relations `f·eᵢ` are implicit.
    R(Polynomial),
}

/// `Q^r / ⟨relations⟩` (plus `f·Q^r` when over `R`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModulePresentation {
    ring: Arc<Ring>,
    ambient_rank: usize,
    relations: Vec<FreeModuleElement>,
    over: Over,
}

impl ModulePresentation {
    pub fn new(ring: &Arc<Ring>, ambient_rank: usize, relations: Vec<FreeModuleElement>, over: Over) -> Result<Self> {
        for rel in &relations {
            if rel.rank() != ambient_rank {
                return Err(Error::RankMismatch {
                    expected: ambient_rank,
                    found: rel.rank(),
                });
            }
            if rel.components().iter().any(|c| c.ring() != ring) {
                return Err(Error::RingMismatch);
            }
        }
        if let Over::R(f) = &over {
            if f.ring() != ring {
                return Err(Error::RingMismatch);
            }
        }
        Ok(ModulePresentation {
            ring: ring.clone(),
            ambient_rank,
            relations,
            over,
        })
    }

    /// Presentation whose relations are the columns of `m`.
    pub fn from_matrix(m: &PolyMatrix, over: Over) -> Result<Self> {
        Self::new(m.ring(), m.rows(), columns_of(m), over)
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    pub fn relations(&self) -> &[FreeModuleElement] {
        &self.relations
    }

    pub fn over(&self) -> &Over {
        &self.over
    }

    /// Relation matrix (one column per relation).
    pub fn relation_matrix(&self) -> PolyMatrix {
        PolyMatrix::from_fn(&self.ring, self.ambient_rank, self.relations.len(), |i, j| {
            self.relations[j].components()[i].clone()
        })
    }

    /// Relations over `Q` including `f·eᵢ`, after checking that `f`
    /// annihilates the module when it was presented over `Q`.
    fn relations_with(&self, f: &Polynomial, order: MonomialOrder) -> Result<Vec<FreeModuleElement>> {
        match &self.over {
            Over::R(g) if g != f => {
                return Err(Error::PotentialMismatch {
                    left: g.to_string(),
                    right: f.to_string(),
                })
            }
            Over::R(_) => {}
            Over::Q => {
                let gb = crate::groebner::groebner_basis(&self.ring, self.ambient_rank, &self.relations, order)?;
                for i in 0..self.ambient_rank {
                    let v = FreeModuleElement::unit(&self.ring, self.ambient_rank, i).scale(f);
                    if !gb.contains(&v)? {
                        return Err(Error::Shape(format!(
                            "module presented over Q is not annihilated by the potential (generator {})",
                            i + 1
                        )));
                    }
                }
            }
        }
        let mut rels = self.relations.clone();
        for i in 0..self.ambient_rank {
            rels.push(FreeModuleElement::unit(&self.ring, self.ambient_rank, i).scale(f));
        }
        Ok(rels)
    }
}

/// `coker A` as an `R`-module.
pub fn cokernel_presentation(mf: &MatrixFactorization) -> ModulePresentation {
    ModulePresentation {
        ring: mf.ring().clone(),
        ambient_rank: mf.rank(),
        relations: columns_of(&mf.a),
        over: Over::R(mf.potential.clone()),
    }
}

/// Relations of `N^k = N ⊗ R^k`, block `b` occupying coordinates `b·s .. (b+1)·s`.
fn block_relations(rels: &[FreeModuleElement], ring: &Arc<Ring>, s: usize, k: usize) -> Vec<FreeModuleElement> {
    let mut out = Vec::with_capacity(rels.len() * k);
    for b in 0..k {
        for rel in rels {
            let mut comps = vec![Polynomial::zero(ring); s * k];
            for (i, c) in rel.components().iter().enumerate() {
                comps[b * s + i] = c.clone();
            }
            out.push(FreeModuleElement::new(comps));
        }
    }
    out
}

/// `dim_ℚ` of the homology of `N^a --din⊗1--> N^b --dout⊗1--> N^c`.
fn tensor_homology(
    din: &PolyMatrix,
    dout: &PolyMatrix,
    n_rels: &[FreeModuleElement],
    s: usize,
    order: MonomialOrder,
) -> Result<usize> {
    let ring = dout.ring();
    let (b, c) = (dout.cols(), dout.rows());
    let kb = block_relations(n_rels, ring, s, b);
    let kc = block_relations(n_rels, ring, s, c);
    let mut gens = columns_of(&dout.kron_identity(s));
    let m = gens.len();
    gens.extend(kc);
    let mut kernel: Vec<FreeModuleElement> = syzygy_basis(ring, c * s, &gens, order)?
        .into_iter()
        .map(|z| z.project(0..m))
        .collect();
    kernel.extend(kb.iter().cloned());
    let mut image = columns_of(&din.kron_identity(s));
    image.extend(kb);
    subquotient_dimension(ring, b * s, &kernel, &image, order)
}

/// Stable `(length Tor_even, length Tor_odd)` of `(coker A, N)` over `R`,
/// read from `N^r ←A⊗1− N^r ←B⊗1− N^r`.
pub fn tor_lengths(mf: &MatrixFactorization, n_module: &ModulePresentation, order: MonomialOrder) -> Result<(usize, usize)> {
    if n_module.ring() != mf.ring() {
        return Err(Error::RingMismatch);
    }
    let rels = n_module.relations_with(mf.potential(), order)?;
    let s = n_module.ambient_rank();
    let even = tensor_homology(&mf.a, &mf.b, &rels, s, order)?;
    let odd = tensor_homology(&mf.b, &mf.a, &rels, s, order)?;
    Ok((even, odd))
}

/// If `φ` is square with `f·φ⁻¹` polynomial, the factorization `(φ, f·φ⁻¹)`.
pub fn factorization_from_matrix(phi: &PolyMatrix, f: &Polynomial, label: &str) -> Result<Option<MatrixFactorization>> {
    if !phi.is_square() || phi.rows() == 0 {
        return Ok(None);
    }
    let det = phi.determinant()?;
    if det.is_zero() {
        return Ok(None);
    }
    let adj = phi.adjugate()?;
    let mut entries = Vec::with_capacity(adj.entries().len());
    for e in adj.entries() {
        match (e * f).div_exact(&det) {
            Some(q) => entries.push(q),
            None => return Ok(None),
        }
    }
    let b = PolyMatrix::new(phi.ring(), phi.rows(), phi.cols(), entries)?;
    MatrixFactorization::new(label, f.clone(), phi.clone(), b).map(Some)
}

/// Drops generators lying in the span of the others together with `f·Q^r`.
fn prune(gens: Vec<FreeModuleElement>, ring: &Arc<Ring>, rank: usize, f: &Polynomial, order: MonomialOrder) -> Result<Vec<FreeModuleElement>> {
    let fs: Vec<_> = (0..rank)
        .map(|i| FreeModuleElement::unit(ring, rank, i).scale(f))
        .collect();
    let mut kept: Vec<FreeModuleElement> = gens.into_iter().filter(|g| !g.is_zero()).collect();
    let mut i = kept.len();
    while i > 0 {
        i -= 1;
        let mut others: Vec<_> = kept.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, g)| g.clone()).collect();
        others.extend(fs.iter().cloned());
        let gb = crate::groebner::groebner_basis(ring, rank, &others, order)?;
        if gb.contains(&kept[i])? {
            kept.remove(i);
        }
    }
    Ok(kept)
}

/// Relation matrix of the first syzygy over `R` of `coker(φ)` (columns of `φ`
/// are the relations; `f·Q^r` is implicit).
fn next_syzygy(phi: &PolyMatrix, f: &Polynomial, order: MonomialOrder) -> Result<PolyMatrix> {
    let ring = phi.ring();
    let (r, k) = (phi.rows(), phi.cols());
    let mut gens = columns_of(phi);
    gens.extend((0..r).map(|i| FreeModuleElement::unit(ring, r, i).scale(f)));
    let syz: Vec<_> = syzygy_basis(ring, r, &gens, order)?
        .into_iter()
        .map(|z| z.project(0..k))
        .collect();
    let syz = prune(syz, ring, k, f, order)?;
    Ok(PolyMatrix::from_fn(ring, k, syz.len(), |i, j| syz[j].components()[i].clone()))
}

/// How the stable Tor of a presented module was obtained.
#[derive(Clone, Debug)]
pub enum StableForm {
    /// `Syz_steps(M) = coker A` for the returned factorization.
    Factorization { mf: MatrixFactorization, steps: usize },
    /// Resolution matrices `d₁, d₂, …` over `R`, used through a periodic window.
    Resolution(Vec<PolyMatrix>),
}

/// Resolves `M` over `R` until a syzygy module is the cokernel of a matrix
/// factorization, or returns the resolution computed so far.
pub fn stabilize(m: &ModulePresentation, f: &Polynomial, order: MonomialOrder) -> Result<StableForm> {
    m.relations_with(f, order)?;
    let ring = m.ring();
    let r = m.ambient_rank();
    let mut phi = {
        let reduced = prune(m.relations.clone(), ring, r, f, order)?;
        PolyMatrix::from_fn(ring, r, reduced.len(), |i, j| reduced[j].components()[i].clone())
    };
    let max_steps = ring.nvars() + 4;
    let mut ds = Vec::new();
    for steps in 0..=max_steps {
        if phi.cols() == 0 {
            // M is free over R: every stable Tor vanishes.
            let mf = MatrixFactorization::trivial(f);
            return Ok(StableForm::Factorization { mf, steps: 0 });
        }
        if let Some(mf) = factorization_from_matrix(&phi, f, "syzygy")? {
            return Ok(StableForm::Factorization { mf, steps });
        }
        let next = next_syzygy(&phi, f, order)?;
        ds.push(phi);
        phi = next;
    }
    ds.push(phi);
    Ok(StableForm::Resolution(ds))
}

/// Stable Tor lengths of two presented modules; `M` need not be maximal
/// Cohen–Macaulay.
pub fn tor_lengths_of_presentation(
    m: &ModulePresentation,
    n_module: &ModulePresentation,
    f: &Polynomial,
    order: MonomialOrder,
) -> Result<(usize, usize)> {
    if m.ring() != n_module.ring() || f.ring() != m.ring() {
        return Err(Error::RingMismatch);
    }
    match stabilize(m, f, order)? {
        StableForm::Factorization { mf, steps } => {
            let (e, o) = tor_lengths(&mf, n_module, order)?;
            // Tor_i(M, N) = Tor_{i−steps}(Syz_steps M, N) for i ≫ 0.
            Ok(if steps % 2 == 0 { (e, o) } else { (o, e) })
        }
        StableForm::Resolution(ds) => {
            let rels = n_module.relations_with(f, order)?;
            let s = n_module.ambient_rank();
            // ds[i] is d_{i+1}; Tor_i = ker(d_i ⊗ N) / im(d_{i+1} ⊗ N).
            let tor = |i: usize| tensor_homology(&ds[i], &ds[i - 1], &rels, s, order);
            let last = ds.len() - 1;
            let start = (last - 3) & !1;
            let window = (tor(start)?, tor(start + 1)?);
            let next = (tor(start + 2)?, tor(start + 3)?);
            if window != next {
                return Err(Error::Internal(format!(
                    "stable Tor did not stabilize: {window:?} then {next:?}"
                )));
            }
            Ok(window)
        }
    }
}
