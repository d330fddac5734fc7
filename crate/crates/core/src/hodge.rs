//! Weight filtrations of nilpotent operators, over ℚ.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::QMatrix;
use crate::poly::Rational;

/// A linear subspace of `ℚ^d`, stored as a reduced row-echelon basis
/// (so equal subspaces have equal representations).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient: usize,
    /// Rows are basis vectors.
    echelon: QMatrix,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            echelon: QMatrix::zeros(0, ambient),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace {
            ambient,
            echelon: QMatrix::identity(ambient),
        }
    }

    pub fn span(ambient: usize, vectors: &[Vec<Rational>]) -> Self {
        if vectors.is_empty() {
            return Self::zero(ambient);
        }
        let (r, pivots) = QMatrix::from_rows(vectors.to_vec()).rref();
        let rows = (0..pivots.len()).map(|i| r.row(i)).collect::<Vec<_>>();
        Subspace {
            ambient,
            echelon: if rows.is_empty() { QMatrix::zeros(0, ambient) } else { QMatrix::from_rows(rows) },
        }
    }

    /// Column space of `m`.
    pub fn column_space(m: &QMatrix) -> Self {
        Self::span(m.rows(), &m.columns())
    }

    pub fn kernel_of(m: &QMatrix) -> Self {
        Self::span(m.cols(), &m.kernel())
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.echelon.rows()
    }

    pub fn basis(&self) -> Vec<Vec<Rational>> {
        (0..self.dim()).map(|i| self.echelon.row(i)).collect()
    }

    /// Basis vectors as the columns of a `d × dim` matrix.
    pub fn basis_matrix(&self) -> QMatrix {
        QMatrix::from_columns(self.ambient, &self.basis())
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut v = self.basis();
        v.extend(other.basis());
        Self::span(self.ambient, &v)
    }

    pub fn intersection(&self, other: &Subspace) -> Subspace {
        let (a, b) = (self.basis(), other.basis());
        if a.is_empty() || b.is_empty() {
            return Self::zero(self.ambient);
        }
        // Solve Σ s_i a_i − Σ t_j b_j = 0.
        let mut cols = a.clone();
        cols.extend(b.iter().map(|v| v.iter().map(|x| -x.clone()).collect()));
        let m = QMatrix::from_columns(self.ambient, &cols);
        let vectors: Vec<Vec<Rational>> = m
            .kernel()
            .iter()
            .map(|k| {
                let mut v = vec![Rational::zero(); self.ambient];
                for (s, ai) in k.iter().zip(&a) {
                    for (x, y) in v.iter_mut().zip(ai) {
                        *x += s * y;
                    }
                }
                v
            })
            .collect();
        Self::span(self.ambient, &vectors)
    }

    pub fn contains_vector(&self, v: &[Rational]) -> bool {
        let mut rows = self.basis();
        rows.push(v.to_vec());
        QMatrix::from_rows(rows).rank() == self.dim()
    }

    pub fn contains(&self, other: &Subspace) -> bool {
        if other.dim() > self.dim() {
            return false;
        }
        if other.dim() == 0 {
            return true;
        }
        let mut rows = self.basis();
        rows.extend(other.basis());
        QMatrix::from_rows(rows).rank() == self.dim()
    }

    /// `m(self)` for a matrix acting on column vectors.
    pub fn image(&self, m: &QMatrix) -> Subspace {
        let vs: Vec<_> = self.basis().iter().map(|v| m.mul_vec(v)).collect();
        Self::span(m.rows(), &vs)
    }

    /// `{v ∈ self : m v ∈ target}`.
    pub fn preimage_within(&self, m: &QMatrix, target: &Subspace) -> Subspace {
        let basis = self.basis();
        if basis.is_empty() {
            return self.clone();
        }
        // Solve m·(Σ c_i b_i) = Σ t_j w_j and keep the c part.
        let images: Vec<Vec<Rational>> = basis.iter().map(|b| m.mul_vec(b)).collect();
        let mut cols = images;
        cols.extend(target.basis().iter().map(|v| v.iter().map(|x| -x.clone()).collect()));
        let sys = QMatrix::from_columns(m.rows(), &cols);
        let k = basis.len();
        let vectors: Vec<Vec<Rational>> = sys
            .kernel()
            .iter()
            .map(|c| {
                let mut v = vec![Rational::zero(); self.ambient];
                for (s, bi) in c[..k].iter().zip(&basis) {
                    for (x, y) in v.iter_mut().zip(bi) {
                        *x += s * y;
                    }
                }
                v
            })
            .collect();
        Self::span(self.ambient, &vectors)
    }
}

/// A nilpotent endomorphism `N` of `ℚ^d` together with a center `m`
/// satisfying `N^{m+1} = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NilpotentOperator {
    matrix: QMatrix,
    center: usize,
}

impl NilpotentOperator {
    pub fn new(matrix: QMatrix, center: usize) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::Shape(format!("operator is {}x{}", matrix.rows(), matrix.cols())));
        }
        if !matrix.pow(center + 1).is_zero() {
            return Err(Error::NotNilpotent { power: center + 1 });
        }
        Ok(NilpotentOperator { matrix, center })
    }

    pub fn matrix(&self) -> &QMatrix {
        &self.matrix
    }

    pub fn center(&self) -> usize {
        self.center
    }

    pub fn dimension(&self) -> usize {
        self.matrix.rows()
    }

    pub fn kernel_power(&self, k: i64) -> Subspace {
        let d = self.dimension();
        if k <= 0 {
            Subspace::zero(d)
        } else {
            Subspace::kernel_of(&self.matrix.pow(k as usize))
        }
    }

    pub fn image_power(&self, k: usize) -> Subspace {
        Subspace::column_space(&self.matrix.pow(k))
    }
}

/// `W_{-1} ⊆ W_0 ⊆ … ⊆ W_{2m}`; indices below `-1` read as `0`, above `2m`
/// as the whole space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightFiltration {
    center: usize,
    ambient: usize,
    subspaces: Vec<Subspace>,
}

impl WeightFiltration {
    /// Builds a filtration from `W_{-1}, …, W_{2m}` without checking it.
    pub fn from_subspaces(center: usize, subspaces: Vec<Subspace>) -> Result<Self> {
        if subspaces.len() != 2 * center + 2 {
            return Err(Error::Shape(format!(
                "expected {} subspaces for center {center}, found {}",
                2 * center + 2,
                subspaces.len()
            )));
        }
        let ambient = subspaces[0].ambient();
        if subspaces.iter().any(|s| s.ambient() != ambient) {
            return Err(Error::Shape("subspaces live in different ambient spaces".into()));
        }
        Ok(WeightFiltration {
            center,
            ambient,
            subspaces,
        })
    }

    pub fn center(&self) -> usize {
        self.center
    }

    pub fn get(&self, j: i64) -> Subspace {
        if j < -1 {
            return Subspace::zero(self.ambient);
        }
        match self.subspaces.get((j + 1) as usize) {
            Some(s) => s.clone(),
            None => Subspace::full(self.ambient),
        }
    }

    /// `W_{-1}, …, W_{2m}`.
    pub fn subspaces(&self) -> &[Subspace] {
        &self.subspaces
    }
}

/// The weight filtration centered at `m`:
/// `W_{m+l} = Σ_{j ≥ 0} ker N^{l+j+1} ∩ im N^j`. The defining properties are
/// checked before returning.
pub fn weight_filtration(op: &NilpotentOperator) -> Result<WeightFiltration> {
    let m = op.center as i64;
    let d = op.dimension();
    // Nilpotency index e: N^e = 0, so im N^j = 0 for j ≥ e and ker N^k = V for k ≥ e.
    let e = (0..=op.center + 1).find(|&k| op.matrix.pow(k).is_zero()).unwrap_or(op.center + 1);
    let images: Vec<Subspace> = (0..e).map(|j| op.image_power(j)).collect();
    // meet[k][j] = ker N^k ∩ im N^j for 1 ≤ k < e.
    let meet: Vec<Vec<Subspace>> = (1..e)
        .map(|k| {
            let ker = op.kernel_power(k as i64);
            images.iter().map(|im| ker.intersection(im)).collect()
        })
        .collect();
    let mut subspaces = Vec::with_capacity(2 * op.center + 2);
    for w in -1..=2 * m {
        let l = w - m;
        let mut gens = Vec::new();
        for (j, im) in images.iter().enumerate() {
            let k = l + j as i64 + 1;
            if k <= 0 {
                continue;
            }
            let piece = if k as usize >= e { im } else { &meet[k as usize - 1][j] };
            gens.extend(piece.basis());
        }
        subspaces.push(Subspace::span(d, &gens));
    }
    let wf = WeightFiltration::from_subspaces(op.center, subspaces)?;
    let report = verify_weight_axioms(op, &wf);
    if !(report.shift_ok && report.iso_ok && report.chain_ok) {
        return Err(Error::Internal(format!("weight filtration failed its axioms: {report:?}")));
    }
    Ok(wf)
}

/// `dim W_j − dim W_{j−1}` for `j = 0, …, 2m`.
pub fn graded_dimensions(wf: &WeightFiltration) -> Vec<usize> {
    (0..=2 * wf.center as i64)
        .map(|j| wf.get(j).dim() - wf.get(j - 1).dim())
        .collect()
}

/// Representatives in `W_{m+l}` of a basis of
/// `P Gr_{m+l} = ker(N^{l+1}: Gr_{m+l} → Gr_{m−l−2})`, as matrix columns.
pub fn primitive_subspace(op: &NilpotentOperator, wf: &WeightFiltration, l: i64) -> Result<QMatrix> {
    let m = op.center as i64;
    if l < 0 || l > m {
        return Err(Error::OutOfRange {
            what: "primitive index l",
            value: l,
        });
    }
    let np = op.matrix.pow((l + 1) as usize);
    let k = wf.get(m + l).preimage_within(&np, &wf.get(m - l - 3));
    let lower = wf.get(m + l - 1);
    let mut acc = lower.clone();
    let mut reps = Vec::new();
    for v in k.basis() {
        if !acc.contains_vector(&v) {
            acc = acc.sum(&Subspace::span(op.dimension(), std::slice::from_ref(&v)));
            reps.push(v);
        }
    }
    Ok(QMatrix::from_columns(op.dimension(), &reps))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WeightAxiomReport {
    /// `W_{-1} = 0`, the chain increases, and the top piece is everything.
    pub chain_ok: bool,
    /// `N W_l ⊆ W_{l−2}` for every `l`.
    pub shift_ok: bool,
    /// `N^l : Gr_{m+l} → Gr_{m−l}` is an isomorphism for every `l ≥ 1`.
    pub iso_ok: bool,
}

/// Checks the defining properties of a weight filtration centered at the
/// operator's center.
pub fn verify_weight_axioms(op: &NilpotentOperator, wf: &WeightFiltration) -> WeightAxiomReport {
    let m = op.center as i64;
    let top = 2 * m.max(wf.center as i64) + 2;
    let n = &op.matrix;

    let chain_ok = wf.subspaces[0].dim() == 0
        && wf.subspaces.windows(2).all(|w| w[1].contains(&w[0]))
        && wf.subspaces.last().is_some_and(|s| s.dim() == op.dimension());

    let shift_ok = (-1..=top).all(|l| wf.get(l - 2).contains(&wf.get(l).image(n)));

    let gr_dim = |j: i64| wf.get(j).dim().saturating_sub(wf.get(j - 1).dim());
    let iso_ok = (1..=m + 1).all(|l| {
        let nl = n.pow(l as usize);
        let below = wf.get(m - l - 1);
        let rank = wf.get(m + l).image(&nl).sum(&below).dim() as i64
            - wf.get(m + l - 1).image(&nl).sum(&below).dim() as i64;
        let (up, down) = (gr_dim(m + l) as i64, gr_dim(m - l) as i64);
        rank == up && up == down
    });
    WeightAxiomReport {
        chain_ok,
        shift_ok,
        iso_ok,
    }
}
