//! Reference computations that avoid the Gröbner pipeline entirely. They only
//! use polynomial arithmetic and dense rational linear algebra.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use mfres::linalg::QMatrix;
use mfres::poly::int;
use mfres::{MatrixFactorization, Monomial, PolyMatrix, Polynomial, Rational, Ring};
use num_traits::{One, Zero};

pub fn wdeg(m: &Monomial, w: &[i64]) -> i64 {
    m.exponents().iter().zip(w).map(|(&e, &wi)| e as i64 * wi).sum()
}

/// Weighted degree of a nonzero weighted-homogeneous polynomial.
pub fn homogeneous_degree(p: &Polynomial, w: &[i64]) -> Option<i64> {
    let mut degs = p.terms().map(|(m, _)| wdeg(m, w));
    let d = degs.next()?;
    assert!(degs.all(|e| e == d), "{p} is not weighted homogeneous for {w:?}");
    Some(d)
}

/// Exponent vectors of weighted degree exactly `d` (all weights positive).
pub fn monomials_of_degree(nvars: usize, w: &[i64], d: i64) -> Vec<Monomial> {
    fn rec(i: usize, left: i64, w: &[i64], cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if i == w.len() {
            if left == 0 {
                out.push(Monomial(cur.clone()));
            }
            return;
        }
        let mut e = 0;
        while e as i64 * w[i] <= left {
            cur.push(e);
            rec(i + 1, left - e as i64 * w[i], w, cur, out);
            cur.pop();
            e += 1;
        }
    }
    let mut out = Vec::new();
    if d >= 0 {
        rec(0, d, &w[..nvars], &mut Vec::new(), &mut out);
    }
    out
}

// ---------------------------------------------------------------------------
// Milnor numbers

/// μ by ranks of Macaulay matrices in each weighted degree.
pub fn milnor_number_macaulay(f: &Polynomial, w: &[i64]) -> usize {
    let n = f.nvars();
    let d = homogeneous_degree(f, w).expect("nonzero potential");
    let partials: Vec<Polynomial> = (0..n).map(|i| f.differentiate(i).unwrap()).collect();
    let socle: i64 = w.iter().map(|wi| d - 2 * wi).sum();
    let mut mu = 0;
    for deg in 0..=socle + 2 * d {
        let target = monomials_of_degree(n, w, deg);
        let index: HashMap<&Monomial, usize> = target.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let mut cols = Vec::new();
        for (i, p) in partials.iter().enumerate() {
            for m in monomials_of_degree(n, w, deg - (d - w[i])) {
                let prod = p.mul_term(&m, &Rational::one());
                let mut v = vec![Rational::zero(); target.len()];
                for (mm, c) in prod.terms() {
                    v[index[mm]] = c.clone();
                }
                cols.push(v);
            }
        }
        let rank = if cols.is_empty() { 0 } else { QMatrix::from_columns(target.len(), &cols).rank() };
        let piece = target.len() - rank;
        if deg > socle {
            assert_eq!(piece, 0, "Milnor algebra nonzero above the socle degree");
        }
        mu += piece;
    }
    mu
}

/// `∏ (d / w_i − 1)` for a quasi-homogeneous isolated singularity.
pub fn milnor_number_weights(d: i64, w: &[i64]) -> Rational {
    w.iter()
        .map(|&wi| Rational::new(d.into(), wi.into()) - Rational::one())
        .fold(Rational::one(), |a, b| a * b)
}

// ---------------------------------------------------------------------------
// Residues for diagonal potentials

/// `res(g)` for `f = Σ c_i x_i^{a_i}`: the coefficient of `∏ x_i^{a_i−2}` in
/// `g` divided by `∏ c_i a_i`.
pub fn diagonal_residue(g: &Polynomial, coeffs: &[i64], exps: &[u32]) -> Rational {
    let socle = Monomial(exps.iter().map(|a| a - 2).collect());
    let scale: i64 = coeffs.iter().zip(exps).map(|(&c, &a)| c * a as i64).product();
    g.coeff(&socle) / int(scale)
}

/// Coefficient of `dx∧dy` in `tr(dA dB)` for two variables, from partials.
pub fn chern_coefficient_2var(mf: &MatrixFactorization) -> Polynomial {
    let (a, b) = (mf.a(), mf.b());
    let r = mf.rank();
    let mut out = Polynomial::zero(mf.ring());
    for i in 0..r {
        for k in 0..r {
            let (ax, ay) = (a.get(i, k).differentiate(0).unwrap(), a.get(i, k).differentiate(1).unwrap());
            let (bx, by) = (b.get(k, i).differentiate(0).unwrap(), b.get(k, i).differentiate(1).unwrap());
            out = out + &(&ax * &by) - &(&ay * &bx);
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Univariate periodic Ext / Tor for rank-one factorizations

/// Substitutes the linear form `l` to zero, leaving a polynomial in the
/// remaining variable of a two-variable ring. Returns the degree map.
fn restrict_to_line(l: &Polynomial, g: &Polynomial) -> Option<u32> {
    let ring = l.ring();
    assert_eq!(ring.nvars(), 2);
    let cx = l.coeff(&Monomial(vec![1, 0]));
    let cy = l.coeff(&Monomial(vec![0, 1]));
    assert!(l.total_degree() == Some(1) && l.constant_term().is_zero(), "{l} is not a linear form");
    // Parametrize the line l = 0 as (x, y) = (-cy t, cx t), t = x.
    let t = Polynomial::var(ring, 0);
    let vals = [t.scale(&-cy.clone()), t.scale(&cx)];
    let r = g.substitute(&vals).unwrap();
    if r.is_zero() {
        None
    } else {
        r.total_degree()
    }
}

/// `dim ker(g) / im(h)` for multiplication maps on `k[t]` with `g h = 0`.
fn univariate_homology(g: Option<u32>, h: Option<u32>) -> usize {
    match (g, h) {
        (Some(_), _) => 0,
        (None, Some(dh)) => dh as usize,
        (None, None) => panic!("infinite-dimensional homology"),
    }
}

/// `(dim Ext_even, dim Ext_odd)` of `(a, b)` into `(a', b')` for rank-one
/// factorizations of a two-variable potential where `a'` is linear.
pub fn univariate_ext(x: &MatrixFactorization, y: &MatrixFactorization) -> (usize, usize) {
    assert!(x.rank() == 1 && y.rank() == 1);
    let line = y.a().get(0, 0);
    let a = restrict_to_line(line, x.a().get(0, 0));
    let b = restrict_to_line(line, x.b().get(0, 0));
    (univariate_homology(a, b), univariate_homology(b, a))
}

/// Stable `(Tor_even, Tor_odd)` of `R/(a)` (resolved by `(a, b)`) against
/// `R/(l)` with `l` linear.
pub fn univariate_tor(a: &Polynomial, b: &Polynomial, l: &Polynomial) -> (usize, usize) {
    let (ra, rb) = (restrict_to_line(l, a), restrict_to_line(l, b));
    (univariate_homology(rb, ra), univariate_homology(ra, rb))
}

// ---------------------------------------------------------------------------
// Graded Hom complex

/// Degrees `(p, q)` of the bases of `P0, P1` making `A: P1 → P0` and
/// `B: P0 → P1(d)` homogeneous.
fn basis_degrees(mf: &MatrixFactorization, w: &[i64], d: i64) -> (Vec<i64>, Vec<i64>) {
    let r = mf.rank();
    // Nodes 0..r are P0 indices, r..2r are P1 indices; edge (u, v, c): deg v = deg u + c.
    let mut edges: Vec<Vec<(usize, i64)>> = vec![Vec::new(); 2 * r];
    for i in 0..r {
        for j in 0..r {
            if let Some(e) = homogeneous_degree(mf.a().get(i, j), w) {
                // p_i − q_j = e
                edges[r + j].push((i, e));
                edges[i].push((r + j, -e));
            }
            if let Some(e) = homogeneous_degree(mf.b().get(j, i), w) {
                // q_j + d − p_i = e
                edges[i].push((r + j, e - d));
                edges[r + j].push((i, d - e));
            }
        }
    }
    let mut deg: Vec<Option<i64>> = vec![None; 2 * r];
    for s in 0..2 * r {
        if deg[s].is_some() {
            continue;
        }
        deg[s] = Some(0);
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            for &(v, c) in &edges[u] {
                let want = deg[u].unwrap() + c;
                match deg[v] {
                    None => {
                        deg[v] = Some(want);
                        stack.push(v);
                    }
                    Some(have) => assert_eq!(have, want, "factorization {} is not graded", mf.label()),
                }
            }
        }
    }
    let deg: Vec<i64> = deg.into_iter().map(Option::unwrap).collect();
    (deg[..r].to_vec(), deg[r..].to_vec())
}

/// One matrix-valued slot of the complex: rows × cols with entry degree
/// `k + offset(row, col)`.
struct Slot {
    rows: usize,
    cols: usize,
    offset: Vec<i64>,
}

impl Slot {
    fn new(row_deg: &[i64], col_deg: &[i64], shift: i64) -> Self {
        let mut offset = Vec::new();
        for &a in row_deg {
            for &b in col_deg {
                offset.push(a - b + shift);
            }
        }
        Slot {
            rows: row_deg.len(),
            cols: col_deg.len(),
            offset,
        }
    }
}

/// Homogeneous piece of a direct sum of slots in internal degree `k`.
struct Piece {
    basis: Vec<(usize, usize, Monomial)>,
    index: HashMap<(usize, usize, Monomial), usize>,
}

impl Piece {
    fn new(slots: &[&Slot], k: i64, nvars: usize, w: &[i64]) -> Self {
        let mut basis = Vec::new();
        for (s, slot) in slots.iter().enumerate() {
            for e in 0..slot.rows * slot.cols {
                for m in monomials_of_degree(nvars, w, k + slot.offset[e]) {
                    basis.push((s, e, m));
                }
            }
        }
        let index = basis.iter().cloned().enumerate().map(|(i, b)| (b, i)).collect();
        Piece { basis, index }
    }

    fn coordinates(&self, mats: &[PolyMatrix]) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); self.basis.len()];
        for (s, m) in mats.iter().enumerate() {
            for (e, p) in m.entries().iter().enumerate() {
                for (mono, c) in p.terms() {
                    let i = self.index.get(&(s, e, mono.clone())).expect("image lies in the expected degree");
                    v[*i] = c.clone();
                }
            }
        }
        v
    }
}

fn unit(ring: &Arc<Ring>, rows: usize, cols: usize, e: usize, m: &Monomial) -> PolyMatrix {
    PolyMatrix::from_fn(ring, rows, cols, |i, j| {
        if i * cols + j == e {
            Polynomial::term(ring, m.clone(), Rational::one())
        } else {
            Polynomial::zero(ring)
        }
    })
}

fn rank_of(source: &Piece, target: &Piece, image: impl Fn(usize) -> Vec<PolyMatrix>) -> usize {
    if source.basis.is_empty() || target.basis.is_empty() {
        return 0;
    }
    let cols: Vec<Vec<Rational>> = (0..source.basis.len()).map(|i| target.coordinates(&image(i))).collect();
    QMatrix::from_columns(target.basis.len(), &cols).rank()
}

/// `(dim H_even, dim H_odd)` of `Hom(X, Y)` computed degree by degree for
/// weighted-homogeneous factorizations.
///
/// Convention: even = `(α0: P0→P0', α1: P1→P1')`, odd = `(β: P1→P0', γ: P0→P1')`,
/// `d(α0, α1) = (A'α1 − α0A, B'α0 − α1B)` and `d(β, γ) = (A'γ + βB, B'β + γA)`.
pub fn graded_hom_dimensions(x: &MatrixFactorization, y: &MatrixFactorization, w: &[i64]) -> (usize, usize) {
    let ring = x.ring().clone();
    let n = ring.nvars();
    let d = homogeneous_degree(x.potential(), w).expect("nonzero potential");
    let (p, q) = basis_degrees(x, w, d);
    let (p2, q2) = basis_degrees(y, w, d);
    let (r, r2) = (x.rank(), y.rank());

    let s_a0 = Slot::new(&p2, &p, 0);
    let s_a1 = Slot::new(&q2, &q, 0);
    let s_b = Slot::new(&p2, &q, 0);
    let s_g = Slot::new(&q2, &p, d);

    let (a, b, a2, b2) = (x.a(), x.b(), y.a(), y.b());
    let even_piece = |k| Piece::new(&[&s_a0, &s_a1], k, n, w);
    let odd_piece = |k| Piece::new(&[&s_b, &s_g], k, n, w);
    let mats = |piece: &Piece, i: usize, shapes: [(usize, usize); 2]| {
        let (s, e, m) = &piece.basis[i];
        let zero0 = PolyMatrix::zeros(&ring, shapes[0].0, shapes[0].1);
        let zero1 = PolyMatrix::zeros(&ring, shapes[1].0, shapes[1].1);
        if *s == 0 {
            (unit(&ring, shapes[0].0, shapes[0].1, *e, m), zero1)
        } else {
            (zero0, unit(&ring, shapes[1].0, shapes[1].1, *e, m))
        }
    };
    let d_even = |src: &Piece, i: usize| {
        let (a0, a1) = mats(src, i, [(r2, r), (r2, r)]);
        vec![
            a2.product(&a1).unwrap().add(&a0.product(a).unwrap().neg()).unwrap(),
            b2.product(&a0).unwrap().add(&a1.product(b).unwrap().neg()).unwrap(),
        ]
    };
    let d_odd = |src: &Piece, i: usize| {
        let (be, ga) = mats(src, i, [(r2, r), (r2, r)]);
        vec![
            a2.product(&ga).unwrap().add(&be.product(b).unwrap()).unwrap(),
            b2.product(&be).unwrap().add(&ga.product(a).unwrap()).unwrap(),
        ]
    };

    // Entry degrees are bounded below by −max offset; homology vanishes
    // beyond the socle degree of the Milnor algebra plus the shifts.
    let all_offsets = s_a0.offset.iter().chain(&s_a1.offset).chain(&s_b.offset).chain(&s_g.offset);
    let max_off = all_offsets.clone().copied().max().unwrap_or(0);
    let min_off = all_offsets.copied().min().unwrap_or(0);
    let socle: i64 = w.iter().map(|wi| d - 2 * wi).sum();
    let lo = -max_off - d;
    let hi = -min_off + socle + 3 * d;

    let mut per_degree = BTreeMap::new();
    let (mut even, mut odd) = (0usize, 0usize);
    for k in lo..=hi {
        let (e_k, o_k) = (even_piece(k), odd_piece(k));
        let (o_prev, e_next) = (odd_piece(k - d), even_piece(k + d));
        let rank_e = rank_of(&e_k, &o_k, |i| d_even(&e_k, i));
        let rank_in = rank_of(&o_prev, &e_k, |i| d_odd(&o_prev, i));
        let rank_out = rank_of(&o_k, &e_next, |i| d_odd(&o_k, i));
        let h_even = e_k.basis.len() - rank_e - rank_in;
        let h_odd = o_k.basis.len() - rank_out - rank_e;
        per_degree.insert(k, (h_even, h_odd));
        even += h_even;
        odd += h_odd;
    }
    for k in hi - d..=hi {
        assert_eq!(per_degree[&k], (0, 0), "homology window too small at degree {k}");
    }
    (even, odd)
}
