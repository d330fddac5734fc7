//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

mod oracles;

use std::collections::BTreeSet;
use std::fmt::Debug;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use mfres::forms::{chern_character_form, euler_lemma_check};
use mfres::groebner::{ideal_basis, quotient_dimension};
use mfres::hodge::{
    graded_dimensions, primitive_subspace, verify_weight_axioms, weight_filtration, NilpotentOperator, Subspace,
    WeightFiltration,
};
use mfres::linalg::QMatrix;
use mfres::mf::{direct_sum, dual, hom_complex, homology_dimensions, shift};
use mfres::pairings::{
    bilinear, chern_milnor_class, euler_pairing, herbrand_difference, hochster_theta,
    linear_combination, milnor_algebra, ModuleSource,
};
use mfres::poly::{int, parse_rational};
use mfres::{MatrixFactorization, MonomialOrder, PolyMatrix, Polynomial, Rational, Ring};
use mfres_cli::corpus::Corpus;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use oracles::*;

const ORDER: MonomialOrder = MonomialOrder::DegRevLex;

fn corpus_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus").join(name)
}

fn load(name: &str) -> Corpus {
    Corpus::load(&corpus_path(&format!("{name}.json"))).unwrap_or_else(|e| panic!("{name}: {}", e.message()))
}

/// Runs the command-line tool in process and returns `(exit code, results)`.
fn cli(args: &[&str]) -> (i32, Value) {
    let out = mfres_cli::run(std::iter::once("mfres").chain(args.iter().copied()));
    let v: Value = serde_json::from_str(&out.stdout).expect("JSON report");
    (out.code, v.get("results").cloned().unwrap_or(Value::Null))
}

fn cli_ok(args: &[&str]) -> Value {
    let (code, v) = cli(args);
    assert_eq!(code, 0, "mfres {args:?} exited with {code}");
    v
}

/// Weights making each two-variable potential quasi-homogeneous.
fn weights(name: &str) -> Vec<i64> {
    match name {
        "cusp" => vec![2, 3],
        "e8" => vec![5, 3],
        _ => vec![1, 1],
    }
}

const ODD_CORPORA: [&str; 4] = ["node", "cusp", "cubic", "plane"];

#[derive(Default)]
struct Checker {
    checks: usize,
    failures: Vec<String>,
}

impl Checker {
    fn ok(&mut self, what: impl FnOnce() -> String, cond: bool) {
        self.checks += 1;
        if !cond {
            self.failures.push(what());
        }
    }

    fn eq<T: PartialEq + Debug>(&mut self, what: impl FnOnce() -> String, got: T, want: T) {
        self.checks += 1;
        if got != want {
            self.failures.push(format!("{}: got {got:?}, expected {want:?}", what()));
        }
    }

    fn budget(&mut self, what: &str, elapsed: Duration, limit: Duration) {
        self.ok(|| format!("{what} took {elapsed:.2?}, budget {limit:.0?}"), elapsed <= limit);
    }

    fn finish(self, summary: String) -> Result<String, String> {
        if self.failures.is_empty() {
            Ok(format!("{} checks; {summary}", self.checks))
        } else {
            let shown: Vec<_> = self.failures.iter().take(5).cloned().collect();
            Err(format!("{} of {} checks failed: {}", self.failures.len(), self.checks, shown.join("; ")))
        }
    }
}

fn names(c: &Corpus) -> Vec<String> {
    c.factorizations.keys().cloned().collect()
}

fn chi_of(x: &MatrixFactorization, y: &MatrixFactorization) -> (usize, usize) {
    homology_dimensions(&hom_complex(x, y).unwrap(), ORDER).unwrap()
}

// ---------------------------------------------------------------------------

fn criterion_hrr() -> Result<String, String> {
    let mut ck = Checker::default();
    let mut pairs = 0;
    for name in ODD_CORPORA {
        let start = Instant::now();
        let c = load(name);
        let path = corpus_path(&format!("{name}.json"));
        let path = path.to_str().unwrap();
        let w = weights(name);
        for l in names(&c) {
            for r in names(&c) {
                pairs += 1;
                let v = cli_ok(&["hrr", path, "--left", &l, "--right", &r]);
                let chi = v["chi"].as_i64().unwrap();
                let res = parse_rational(v["residue_side"].as_str().unwrap()).unwrap();
                let sign = v["sign"].as_i64().unwrap();
                ck.eq(|| format!("{name} hrr({l},{r}).equal"), v["equal"].as_bool(), Some(true));
                ck.eq(|| format!("{name} sign"), sign, -1);
                ck.eq(|| format!("{name} chi({l},{r}) vs residue side"), int(chi), int(sign) * res);
                let (e, o) = graded_hom_dimensions(&c.factorizations[&l], &c.factorizations[&r], &w);
                ck.eq(|| format!("{name} chi({l},{r}) vs graded oracle"), chi, e as i64 - o as i64);
            }
        }
        ck.budget(name, start.elapsed(), Duration::from_secs(10));
    }
    ck.finish(format!("{pairs} ordered pairs over {} potentials", ODD_CORPORA.len()))
}

fn criterion_anchors() -> Result<String, String> {
    let mut ck = Checker::default();

    // Milnor numbers.
    for (name, d, mu) in [("node", 2, 1usize), ("cusp", 6, 2), ("cubic", 3, 4), ("e8", 15, 8)] {
        let c = load(name);
        let w = weights(name);
        let by_weights = milnor_number_weights(d, &w);
        let by_macaulay = milnor_number_macaulay(&c.potential, &w);
        ck.eq(|| format!("{name} weight formula"), by_weights, int(mu as i64));
        ck.eq(|| format!("{name} Macaulay ranks"), by_macaulay, mu);
        let path = corpus_path(&format!("{name}.json"));
        let v = cli_ok(&["milnor", path.to_str().unwrap()]);
        ck.eq(|| format!("{name} mu"), v["mu"].as_u64(), Some(by_macaulay as u64));
    }

    // Node: χ(N1, N1) = 1, Res = −1.
    let node = load("node");
    let n1 = &node.factorizations["N1"];
    let uni = univariate_ext(n1, n1);
    ck.eq(|| "node univariate Ext".into(), uni, (1, 0));
    ck.eq(|| "node graded Hom".into(), graded_hom_dimensions(n1, n1, &[1, 1]), uni);
    ck.eq(|| "node engine Hom".into(), chi_of(n1, n1), uni);
    for (l, r) in [("N1", "N2"), ("N2", "N1"), ("N2", "N2")] {
        let (x, y) = (&node.factorizations[l], &node.factorizations[r]);
        let want = univariate_ext(x, y);
        ck.eq(|| format!("node ({l},{r}) univariate vs engine"), chi_of(x, y), want);
    }
    let hess = node.potential.hessian_determinant();
    ck.ok(|| "node Hessian is constant".into(), hess.is_constant());
    let res_one = Rational::one() / hess.constant_term();
    let ch = chern_coefficient_2var(n1);
    ck.ok(|| "node ch coefficient constant".into(), ch.is_constant());
    let res_oracle = ch.constant_term() * ch.constant_term() * res_one;
    ck.eq(|| "node residue oracle".into(), res_oracle.clone(), int(-1));
    let p = corpus_path("node.json");
    let v = cli_ok(&["residue", p.to_str().unwrap(), "--left", "N1", "--right", "N1"]);
    ck.eq(|| "node residue".into(), parse_rational(v["value"].as_str().unwrap()), Some(res_oracle));

    // Fermat cubic: χ(C1, C1) = 2, Res = −2.
    let cubic = load("cubic");
    let c1 = &cubic.factorizations["C1"];
    let uni = univariate_ext(c1, c1);
    ck.eq(|| "cubic univariate Ext".into(), uni, (2, 0));
    ck.eq(|| "cubic graded Hom".into(), graded_hom_dimensions(c1, c1, &[1, 1]), uni);
    ck.eq(|| "cubic engine Hom".into(), chi_of(c1, c1), uni);
    let ch = chern_coefficient_2var(c1);
    ck.eq(|| "cubic ch coefficient vs forms".into(), chern_character_form(c1).unwrap().top_coefficient().unwrap(), ch.clone());
    let res_oracle = diagonal_residue(&(&ch * &ch), &[1, 1], &[3, 3]);
    ck.eq(|| "cubic residue oracle".into(), res_oracle.clone(), int(-2));
    let p = corpus_path("cubic.json");
    let v = cli_ok(&["residue", p.to_str().unwrap(), "--left", "C1", "--right", "C1"]);
    ck.eq(|| "cubic residue".into(), parse_rational(v["value"].as_str().unwrap()), Some(res_oracle));

    // Plane and cusp 2×2 pairs: χ = 0, ch_PV = 0.
    for (name, pair) in [("plane", ["P", "P2"]), ("cusp", ["F1", "F2"])] {
        let c = load(name);
        let w = weights(name);
        for l in pair {
            let x = &c.factorizations[l];
            ck.ok(|| format!("{name} {l}: ch coefficient vanishes"), chern_coefficient_2var(x).is_zero());
            ck.ok(|| format!("{name} {l}: ch_PV vanishes"), chern_character_form(x).unwrap().is_zero());
            for r in pair {
                let y = &c.factorizations[r];
                let (e, o) = graded_hom_dimensions(x, y, &w);
                ck.eq(|| format!("{name} graded chi({l},{r})"), e as i64 - o as i64, 0);
                ck.eq(|| format!("{name} engine Hom({l},{r})"), chi_of(x, y), (e, o));
            }
        }
    }
    ck.finish("mu {1,2,4,8}; node chi 1, Res -1; cubic chi 2, Res -2; 2x2 pairs chi 0, ch 0".into())
}

fn criterion_psd() -> Result<String, String> {
    let start = Instant::now();
    let mut ck = Checker::default();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0003);
    let (mut zeros, mut samples) = (0, 0);
    let dir = std::env::temp_dir().join(format!("mfres-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    for name in ODD_CORPORA {
        let c = load(name);
        let items = names(&c);
        let path = corpus_path(&format!("{name}.json"));
        let (code, gram) = cli(&["gram", path.to_str().unwrap(), "--pairing", "euler", "--items", &items.join(",")]);
        ck.eq(|| format!("{name} gram exit"), code, 0);
        let report = dir.join(format!("{name}-gram.json"));
        std::fs::write(&report, serde_json::to_string(&serde_json::json!({ "results": gram })).unwrap()).unwrap();
        let psd = cli_ok(&["psd", report.to_str().unwrap()]);
        ck.eq(|| format!("{name} gram is PSD"), psd["psd"].as_bool(), Some(true));

        let g = QMatrix::from_rows(
            gram["matrix"]
                .as_array()
                .unwrap()
                .iter()
                .map(|row| row.as_array().unwrap().iter().map(|v| int(v.as_i64().unwrap())).collect())
                .collect(),
        );
        let alg = milnor_algebra(&c.potential, ORDER).unwrap();
        let classes: Vec<Vec<Rational>> =
            items.iter().map(|n| chern_milnor_class(&c.factorizations[n], &alg).unwrap()).collect();

        for s in 0..100 {
            let alpha: Vec<i64> = items.iter().map(|_| rng.gen_range(-2..=2)).collect();
            let chi = bilinear(&g, &alpha, &alpha);
            let class = linear_combination(&alpha, &classes);
            let class_zero = class.iter().all(Zero::is_zero);
            samples += 1;
            if chi.is_zero() {
                zeros += 1;
            }
            ck.ok(|| format!("{name} alpha {alpha:?}: chi = {chi} < 0"), !chi.is_negative());
            ck.eq(|| format!("{name} alpha {alpha:?}: chi = 0 iff class = 0"), chi.is_zero(), class_zero);

            // Realize a few samples as honest factorizations to confirm bilinearity.
            if s < 3 {
                let mut parts: Vec<MatrixFactorization> = Vec::new();
                for (n, &k) in items.iter().zip(&alpha).take(2) {
                    let x = &c.factorizations[n];
                    for _ in 0..k.abs() {
                        parts.push(if k > 0 { x.clone() } else { shift(x) });
                    }
                }
                if let Some(first) = parts.first() {
                    let sum = parts[1..].iter().fold(first.clone(), |acc, p| direct_sum(&acc, p).unwrap());
                    let mut truncated = alpha.clone();
                    truncated.iter_mut().skip(2).for_each(|k| *k = 0);
                    let want = bilinear(&g, &truncated, &truncated);
                    let got = euler_pairing(&sum, &sum, ORDER).unwrap();
                    ck.eq(|| format!("{name} realized {truncated:?}"), int(got), want);
                }
            }
        }
    }
    let _ = std::fs::remove_dir_all(&dir);
    ck.budget("psd criterion", start.elapsed(), Duration::from_secs(30));
    ck.finish(format!("{samples} random classes, {zeros} with chi = 0"))
}

fn criterion_theta() -> Result<String, String> {
    let start = Instant::now();
    let mut ck = Checker::default();

    // Signed theta Gram on the node modules.
    let node = load("node");
    let node_path = corpus_path("node.json");
    let node_path = node_path.to_str().unwrap();
    let (code, gram) = cli(&["gram", node_path, "--pairing", "signed_theta", "--items", "Rx,Ry"]);
    ck.eq(|| "signed theta gram exit".into(), code, 0);
    ck.eq(|| "signed theta gram".into(), gram["matrix"].clone(), serde_json::json!([[1, -1], [-1, 1]]));
    let dir = std::env::temp_dir().join(format!("mfres-theta-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let report = dir.join("gram.json");
    std::fs::write(&report, serde_json::to_string(&serde_json::json!({ "results": gram })).unwrap()).unwrap();
    let psd = cli_ok(&["psd", report.to_str().unwrap()]);
    let _ = std::fs::remove_dir_all(&dir);
    ck.eq(|| "signed theta psd".into(), psd["psd"].as_bool(), Some(true));
    let kernel: Vec<Vec<Rational>> = psd["kernel_basis"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_array().unwrap().iter().map(|e| parse_rational(e.as_str().unwrap()).unwrap()).collect())
        .collect();
    ck.ok(
        || format!("kernel {kernel:?} is not spanned by (1, 1)"),
        kernel.len() == 1 && !kernel[0][0].is_zero() && kernel[0][0] == kernel[0][1],
    );

    // Theta values against the univariate Tor oracle.
    let (x, y) = (Polynomial::var(&node.ring, 0), Polynomial::var(&node.ring, 1));
    for (l, r, a, b, line) in [("Rx", "Rx", &x, &y, &x), ("Rx", "Ry", &x, &y, &y), ("Ry", "Ry", &y, &x, &y)] {
        let want = univariate_tor(a, b, line);
        let v = cli_ok(&["theta", node_path, "--left", l, "--right", r]);
        let got = (v["tor_even"].as_u64().unwrap() as usize, v["tor_odd"].as_u64().unwrap() as usize);
        ck.eq(|| format!("node Tor({l},{r})"), got, want);
    }

    // Theta vanishes when dim Q is odd.
    let cliff = load("clifford");
    let cliff_items = ["K", "Kt", "Rxy"];
    for l in cliff_items {
        for r in cliff_items {
            let t = hochster_theta(&cliff.module(l).unwrap(), &cliff.presentation(r).unwrap(), ORDER).unwrap();
            ck.eq(|| format!("clifford theta({l},{r})"), t, 0);
        }
    }

    // Duality and the bridge to χ on node and cubic factorizations.
    let mut pairs = 0;
    for name in ["node", "cubic"] {
        let c = load(name);
        let s = if (c.ring.nvars() / 2).is_multiple_of(2) { 1 } else { -1 };
        for l in names(&c) {
            for r in names(&c) {
                pairs += 1;
                let (xm, ym) = (&c.factorizations[&l], &c.factorizations[&r]);
                let n = c.presentation(&r).unwrap();
                let theta = hochster_theta(&ModuleSource::Factorization(xm.clone()), &n, ORDER).unwrap();
                let theta_dual = hochster_theta(&ModuleSource::Factorization(dual(xm)), &n, ORDER).unwrap();
                ck.eq(|| format!("{name} duality ({l},{r})"), theta_dual, -s * theta);
                let chi = euler_pairing(xm, ym, ORDER).unwrap();
                ck.eq(|| format!("{name} bridge ({l},{r})"), chi, s * theta);
                let h = herbrand_difference(&dual(xm), ym, ORDER).unwrap();
                ck.eq(|| format!("{name} theta = -h(M*, M') ({l},{r})"), theta, -h);
            }
        }
    }
    // Raw presentations agree with the cokernels they present.
    for (name, raw, mf) in [("node", "Rx", "N1"), ("node", "Ry", "N2"), ("cubic", "M1", "C1"), ("cubic", "M2", "C1s")] {
        let c = load(name);
        for r in names(&c) {
            let n = c.presentation(&r).unwrap();
            let a = hochster_theta(&c.module(raw).unwrap(), &n, ORDER).unwrap();
            let b = hochster_theta(&c.module(mf).unwrap(), &n, ORDER).unwrap();
            ck.eq(|| format!("{name} theta({raw},{r}) vs theta({mf},{r})"), a, b);
        }
    }
    ck.budget("theta criterion", start.elapsed(), Duration::from_secs(10));
    ck.finish(format!("{pairs} duality/bridge pairs"))
}

fn random_poly(ring: &std::sync::Arc<Ring>, rng: &mut ChaCha8Rng) -> Polynomial {
    let n = ring.nvars();
    let mut p = Polynomial::zero(ring);
    for i in 0..n {
        let c = rng.gen_range(-2..=2);
        p = p + &Polynomial::var(ring, i).scale(&int(c));
    }
    if rng.gen_bool(0.4) {
        let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
        p = p + &(&Polynomial::var(ring, i) * &Polynomial::var(ring, j)).scale(&int(rng.gen_range(-2..=2)));
    }
    if rng.gen_bool(0.2) {
        p = p + &Polynomial::from_int(ring, rng.gen_range(-1..=1));
    }
    p
}

fn criterion_lemma() -> Result<String, String> {
    let start = Instant::now();
    let mut ck = Checker::default();
    let mut count = 0;
    for name in ["node", "cusp", "cubic", "plane", "clifford"] {
        let c = load(name);
        for mf in c.factorizations.values() {
            for j in 1..=c.ring.nvars() / 2 {
                count += 1;
                ck.eq(|| format!("{name} {} j={j}", mf.label()), euler_lemma_check(mf, j).ok(), Some(true));
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0005);
    let mut random = 0;
    for (vars, size) in [(2usize, 2usize), (2, 3), (4, 2), (4, 3)] {
        let names: Vec<String> = (0..vars).map(|i| format!("x{i}")).collect();
        let ring = Ring::new(&names);
        let mut made = 0;
        while made < if size == 2 { 15 } else { 10 } {
            let a = PolyMatrix::from_fn(&ring, size, size, |_, _| random_poly(&ring, &mut rng));
            let f = a.determinant().unwrap();
            if f.is_zero() {
                continue;
            }
            let b = a.adjugate().unwrap();
            let mf = MatrixFactorization::new(format!("R{made}"), f, a, b).unwrap();
            for j in 1..=vars / 2 {
                ck.eq(|| format!("random {vars} vars {size}x{size} #{made} j={j}"), euler_lemma_check(&mf, j).ok(), Some(true));
            }
            made += 1;
            random += 1;
        }
    }
    ck.budget("lemma criterion", start.elapsed(), Duration::from_secs(30));
    ck.finish(format!("{count} corpus cases, {random} random (A, adj A)"))
}

// ---------------------------------------------------------------------------
// Weight filtrations

struct JordanCase {
    blocks: Vec<usize>,
    center: usize,
    p: QMatrix,
    n: QMatrix,
}

impl JordanCase {
    fn random(rng: &mut ChaCha8Rng, max_dim: usize, extra: usize) -> Self {
        let d = rng.gen_range(1..=max_dim);
        let mut blocks = Vec::new();
        let mut left = d;
        while left > 0 {
            let s = rng.gen_range(1..=left);
            blocks.push(s);
            left -= s;
        }
        let center = blocks.iter().max().unwrap() - 1 + rng.gen_range(0..=extra);
        Self::with_blocks(rng, blocks, center)
    }

    fn with_blocks(rng: &mut ChaCha8Rng, blocks: Vec<usize>, center: usize) -> Self {
        let d: usize = blocks.iter().sum();
        let mut j = QMatrix::zeros(d, d);
        let mut at = 0;
        for &s in &blocks {
            for k in 1..s {
                j.set(at + k - 1, at + k, Rational::one());
            }
            at += s;
        }
        // Random unimodular P: a product of elementary integer row operations
        // and a permutation, so N = P J P⁻¹ stays integral.
        let mut p = QMatrix::identity(d);
        for _ in 0..3 * d {
            let (a, b) = (rng.gen_range(0..d), rng.gen_range(0..d));
            if a == b {
                continue;
            }
            let k = int(rng.gen_range(-2..=2));
            for c in 0..d {
                let v = p.get(a, c) + &k * p.get(b, c);
                p.set(a, c, v);
            }
        }
        for i in (1..d).rev() {
            let t = rng.gen_range(0..=i);
            for c in 0..d {
                let (x, y) = (p.get(i, c).clone(), p.get(t, c).clone());
                p.set(i, c, y);
                p.set(t, c, x);
            }
        }
        let pinv = p.inverse().expect("unimodular");
        let n = p.mul(&j).mul(&pinv);
        JordanCase { blocks, center, p, n }
    }

    fn dim(&self) -> usize {
        self.blocks.iter().sum()
    }

    /// Weight of each Jordan basis vector: in a block of size s the k-th
    /// vector (k = 1 is the kernel) has weight m − s + 1 + 2(k − 1).
    fn basis_weights(&self) -> Vec<i64> {
        let m = self.center as i64;
        let mut out = Vec::new();
        for &s in &self.blocks {
            for k in 1..=s as i64 {
                out.push(m - s as i64 + 1 + 2 * (k - 1));
            }
        }
        out
    }

    fn oracle_subspace(&self, j: i64) -> Subspace {
        let vecs: Vec<Vec<Rational>> = self
            .basis_weights()
            .iter()
            .enumerate()
            .filter(|(_, &w)| w <= j)
            .map(|(i, _)| self.p.column(i))
            .collect();
        Subspace::span(self.dim(), &vecs)
    }

    fn oracle_graded(&self) -> Vec<usize> {
        let mut g = vec![0; 2 * self.center + 1];
        for w in self.basis_weights() {
            g[w as usize] += 1;
        }
        g
    }
}

fn same_subspace(a: &Subspace, b: &Subspace) -> bool {
    a.dim() == b.dim() && a.contains(b)
}

/// Every filtration built from spans of a finite vector pool that satisfies
/// the axioms.
fn brute_force_filtrations(case: &JordanCase, op: &NilpotentOperator) -> Vec<WeightFiltration> {
    let d = case.dim();
    let mut pool: Vec<Vec<Rational>> = (0..d).map(|i| case.p.column(i)).collect();
    for i in 0..d {
        for j in i + 1..d {
            let (a, b) = (case.p.column(i), case.p.column(j));
            pool.push(a.iter().zip(&b).map(|(x, y)| x + y).collect());
            pool.push(a.iter().zip(&b).map(|(x, y)| x - y).collect());
        }
    }
    let mut by_dim: Vec<Vec<Subspace>> = vec![Vec::new(); d + 1];
    let mut seen = BTreeSet::new();
    for mask in 0u32..(1 << pool.len()) {
        if mask.count_ones() as usize > d {
            continue;
        }
        let vecs: Vec<Vec<Rational>> = (0..pool.len()).filter(|i| mask >> i & 1 == 1).map(|i| pool[i].clone()).collect();
        let s = Subspace::span(d, &vecs);
        if seen.insert(s.basis()) {
            by_dim[s.dim()].push(s);
        }
    }
    let graded = case.oracle_graded();
    let m = case.center;
    let cumulative: Vec<usize> = graded.iter().scan(0, |acc, g| {
        *acc += g;
        Some(*acc)
    }).collect();

    let nmat = &case.n;
    let mut out = Vec::new();
    let mut chain = vec![Subspace::zero(d)];
    fn dfs(
        chain: &mut Vec<Subspace>,
        cumulative: &[usize],
        by_dim: &[Vec<Subspace>],
        nmat: &QMatrix,
        m: usize,
        op: &NilpotentOperator,
        out: &mut Vec<WeightFiltration>,
    ) {
        // chain[i] is W_{i−1}.
        let j = chain.len() - 1;
        let get = |chain: &Vec<Subspace>, w: i64| -> Subspace {
            if w < -1 {
                Subspace::zero(nmat.rows())
            } else {
                chain[(w + 1) as usize].clone()
            }
        };
        if j == 2 * m + 1 {
            let wf = WeightFiltration::from_subspaces(m, chain.clone()).unwrap();
            let r = verify_weight_axioms(op, &wf);
            if r.chain_ok && r.shift_ok && r.iso_ok {
                out.push(wf);
            }
            return;
        }
        let prev = chain.last().unwrap().clone();
        for cand in &by_dim[cumulative[j]] {
            if !cand.contains(&prev) {
                continue;
            }
            if !get(chain, j as i64 - 2).contains(&cand.image(nmat)) {
                continue;
            }
            chain.push(cand.clone());
            dfs(chain, cumulative, by_dim, nmat, m, op, out);
            chain.pop();
        }
    }
    dfs(&mut chain, &cumulative, &by_dim, nmat, m, op, &mut out);
    out
}

fn criterion_weight() -> Result<String, String> {
    let start = Instant::now();
    let mut ck = Checker::default();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0006);

    for t in 0..200 {
        let case = JordanCase::random(&mut rng, 8, 2);
        let op = NilpotentOperator::new(case.n.clone(), case.center).unwrap();
        let wf = weight_filtration(&op).unwrap();
        let r = verify_weight_axioms(&op, &wf);
        ck.ok(|| format!("case {t} {:?}: axioms {:?}", case.blocks, (r.chain_ok, r.shift_ok, r.iso_ok)), r.chain_ok && r.shift_ok && r.iso_ok);
        for j in -1..=2 * case.center as i64 {
            ck.ok(|| format!("case {t} {:?}: W_{j} differs from Jordan oracle", case.blocks), same_subspace(&wf.get(j), &case.oracle_subspace(j)));
        }
        ck.eq(|| format!("case {t} graded dims"), graded_dimensions(&wf), case.oracle_graded());
        for l in 0..=case.center as i64 {
            let want = case.blocks.iter().filter(|&&s| s as i64 == l + 1).count();
            let got = primitive_subspace(&op, &wf, l).unwrap().cols();
            ck.eq(|| format!("case {t} {:?} primitive l={l}", case.blocks), got, want);
        }
    }

    let mut brute = 0;
    for t in 0..20 {
        let case = JordanCase::random(&mut rng, 4, 1);
        let op = NilpotentOperator::new(case.n.clone(), case.center).unwrap();
        let wf = weight_filtration(&op).unwrap();
        let found = brute_force_filtrations(&case, &op);
        ck.eq(|| format!("uniqueness case {t} {:?} center {}", case.blocks, case.center), found.len(), 1);
        if let Some(only) = found.first() {
            let same = (-1..=2 * case.center as i64).all(|j| same_subspace(&only.get(j), &wf.get(j)));
            ck.ok(|| format!("uniqueness case {t}: brute-force filtration differs"), same);
        }
        brute += 1;
    }

    let mut nontrivial = 0;
    for t in 0..100 {
        let a = JordanCase::random(&mut rng, 6, 0);
        let b = JordanCase::random(&mut rng, 6, 0);
        let m = a.center.max(b.center) + rng.gen_range(0..=1);
        let (d1, d2) = (a.dim(), b.dim());
        // g: V → V' with g N = N' g, vectorized row-major.
        let mut map = QMatrix::zeros(d1 * d2, d1 * d2);
        for r in 0..d2 {
            for col in 0..d1 {
                for k in 0..d1 {
                    // (gN)_{r,col} += g_{r,k} N_{k,col}
                    let v = map.get(r * d1 + col, r * d1 + k) + a.n.get(k, col);
                    map.set(r * d1 + col, r * d1 + k, v);
                }
                for k in 0..d2 {
                    // −(N'g)_{r,col} = −N'_{r,k} g_{k,col}
                    let v = map.get(r * d1 + col, k * d1 + col) - b.n.get(r, k);
                    map.set(r * d1 + col, k * d1 + col, v);
                }
            }
        }
        let kernel = map.kernel();
        let coeffs: Vec<i64> = kernel.iter().map(|_| rng.gen_range(-2..=2)).collect();
        let flat = if kernel.is_empty() { vec![Rational::zero(); d1 * d2] } else { linear_combination(&coeffs, &kernel) };
        let g = QMatrix::from_rows((0..d2).map(|r| flat[r * d1..(r + 1) * d1].to_vec()).collect());
        ck.ok(|| format!("intertwiner {t} fails gN = N'g"), g.mul(&a.n) == b.n.mul(&g));
        if !g.is_zero() {
            nontrivial += 1;
        }
        let wa = weight_filtration(&NilpotentOperator::new(a.n.clone(), m).unwrap()).unwrap();
        let wb = weight_filtration(&NilpotentOperator::new(b.n.clone(), m).unwrap()).unwrap();
        for j in -1..=2 * m as i64 {
            ck.ok(|| format!("intertwiner {t}: g(W_{j}) not in W'_{j}"), wb.get(j).contains(&wa.get(j).image(&g)));
        }
    }
    ck.budget("weight criterion", start.elapsed(), Duration::from_secs(20));
    ck.finish(format!("200 random operators, {brute} brute-force uniqueness cases, {nontrivial}/100 nonzero intertwiners"))
}

fn criterion_engine() -> Result<String, String> {
    let mut ck = Checker::default();
    let mut ideals = 0;
    for name in ["node", "cusp", "cubic", "plane", "e8", "clifford"] {
        let c = load(name);
        let f = &c.potential;
        let ring = &c.ring;
        let jac = f.jacobian_generators();
        let mut gens_list = vec![jac.clone(), [jac.clone(), vec![f.clone()]].concat()];
        for m in c.file.modules.keys() {
            let p = c.presentation(m).unwrap();
            if p.ambient_rank() == 1 {
                let mut g: Vec<Polynomial> = p.relations().iter().map(|r| r.components()[0].clone()).collect();
                g.push(f.clone());
                gens_list.push(g);
            }
        }
        for gens in gens_list {
            ideals += 1;
            let a = quotient_dimension(&ideal_basis(ring, &gens, MonomialOrder::DegRevLex).unwrap()).dimension();
            let b = quotient_dimension(&ideal_basis(ring, &gens, MonomialOrder::Lex).unwrap()).dimension();
            ck.eq(|| format!("{name} ideal {gens:?} degrevlex vs lex"), a, b);
        }
        let p = corpus_path(&format!("{name}.json"));
        let lex = cli_ok(&["--order", "lex", "milnor", p.to_str().unwrap()]);
        let grevlex = cli_ok(&["milnor", p.to_str().unwrap()]);
        ck.eq(|| format!("{name} mu under both orders"), lex["mu"].clone(), grevlex["mu"].clone());
    }

    let mut pairs = 0;
    for name in ["node", "cusp", "cubic", "plane", "clifford"] {
        let c = load(name);
        let ring = &c.ring;
        let n = ring.nvars();
        let perms: Vec<Vec<usize>> = if n == 3 { vec![vec![2, 1, 0], vec![1, 2, 0]] } else { vec![vec![1, 0]] };
        for perm in perms {
            let mut new_names = vec![String::new(); n];
            for (i, &p) in perm.iter().enumerate() {
                new_names[p] = ring.names()[i].clone();
            }
            let target = Ring::new(&new_names);
            let f2 = c.potential.permute_variables(&perm, &target);
            let moved = |x: &MatrixFactorization| {
                MatrixFactorization::new(
                    x.label(),
                    f2.clone(),
                    x.a().permute_variables(&perm, &target),
                    x.b().permute_variables(&perm, &target),
                )
                .unwrap()
            };
            for x in c.factorizations.values() {
                for y in c.factorizations.values() {
                    pairs += 1;
                    let base = chi_of(x, y);
                    ck.eq(|| format!("{name} relabel {perm:?} ({}, {})", x.label(), y.label()), chi_of(&moved(x), &moved(y)), base);
                    let swapped = (base.1, base.0);
                    ck.eq(|| format!("{name} ({}, {}[1])", x.label(), y.label()), chi_of(x, &shift(y)), swapped);
                    ck.eq(|| format!("{name} ({}[1], {})", x.label(), y.label()), chi_of(&shift(x), y), swapped);
                }
            }
        }
    }
    ck.finish(format!("{ideals} ideals under two orders, {pairs} relabeled pairs"))
}

type CriterionFn = fn() -> Result<String, String>;

fn main() {
    let criteria: [(&str, CriterionFn); 7] = [
        ("1 HRR identity on every ordered pair", criterion_hrr),
        ("2 anchor values against independent oracles", criterion_anchors),
        ("3 Euler pairing positive semi-definite", criterion_psd),
        ("4 theta pairing: sign, vanishing, duality, bridge", criterion_theta),
        ("5 trace identity for f tr((dA dB)^j)", criterion_lemma),
        ("6 weight filtration: axioms, uniqueness, naturality", criterion_weight),
        ("7 engine cross-validation", criterion_engine),
    ];
    let mut failed = 0;
    for (title, run) in criteria {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let elapsed = start.elapsed();
        match outcome {
            Ok(summary) => println!("PASS criterion {title} ({summary}) [{elapsed:.2?}]"),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {title}: {why} [{elapsed:.2?}]");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
