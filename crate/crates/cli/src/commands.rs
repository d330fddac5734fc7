use std::path::Path;

use mfres::forms::{chern_character_form, euler_lemma_check};
use mfres::hodge::{graded_dimensions, primitive_subspace, verify_weight_axioms, weight_filtration, NilpotentOperator};
use mfres::linalg::QMatrix;
use mfres::mf::{hom_complex, homology_dimensions};
use mfres::pairings::{
    chern_milnor_class, gram_matrix, hrr_check, is_positive_semidefinite, milnor_algebra, residue_functional,
    as_integer, residue_pairing, stable_tor_lengths,
};
use mfres::poly::parse_rational;
use mfres::{MonomialOrder, Rational};
use serde_json::{json, Map, Value};

use crate::corpus::Corpus;
use crate::report::{rational, rational_rows, rational_vec, Report};
use crate::{selftest, CliError, Command};

fn obj(v: Value) -> Map<String, Value> {
    match v {
        Value::Object(m) => m,
        _ => unreachable!("results are objects"),
    }
}

/// Runs a parsed command; returns the exit code together with the report.
pub fn execute(cmd: &Command, order: MonomialOrder) -> Result<(i32, Report), CliError> {
    let command = cmd.name();
    let ok = |v: Value| Ok((0, Report::ok(command, obj(v))));
    match cmd {
        Command::Validate { corpus } => {
            let c = Corpus::load(corpus)?;
            let names: Map<String, Value> = c
                .factorizations
                .iter()
                .map(|(n, mf)| (n.clone(), json!({"rank": mf.rank(), "valid": true})))
                .collect();
            ok(json!({"corpus": c.file.name, "potential": c.potential.to_string(), "factorizations": names}))
        }
        Command::Milnor { corpus } => {
            let c = Corpus::load(corpus)?;
            let alg = milnor_algebra(&c.potential, order)?;
            let basis: Vec<String> = alg.basis_polynomials().iter().map(ToString::to_string).collect();
            ok(json!({"mu": alg.milnor_number, "basis": basis}))
        }
        Command::Chern { corpus, name } => {
            let c = Corpus::load(corpus)?;
            let mf = c.factorization(name)?;
            let ch = chern_character_form(mf)?;
            let alg = milnor_algebra(&c.potential, order)?;
            let class = chern_milnor_class(mf, &alg)?;
            ok(json!({
                "name": name,
                "ch_pv": ch.to_string(),
                "coefficient": ch.top_coefficient()?.to_string(),
                "milnor_class": rational_vec(&class),
                "vanishes": class.iter().all(|x| as_integer(x) == Some(0)),
            }))
        }
        Command::Residue { corpus, left, right } => {
            let c = Corpus::load(corpus)?;
            let (x, y) = (c.factorization(left)?, c.factorization(right)?);
            let rf = residue_functional(&milnor_algebra(&c.potential, order)?)?;
            let v = residue_pairing(&rf, &chern_character_form(x)?, &chern_character_form(y)?)?;
            ok(json!({"value": rational(&v)}))
        }
        Command::Euler { corpus, left, right } | Command::Herbrand { corpus, left, right } => {
            let c = Corpus::load(corpus)?;
            let (x, y) = (c.factorization(left)?, c.factorization(right)?);
            let (e, o) = homology_dimensions(&hom_complex(x, y)?, order)?;
            let key = if matches!(cmd, Command::Euler { .. }) { "chi" } else { "h" };
            let mut m = Map::new();
            m.insert(key.into(), json!(e as i64 - o as i64));
            m.insert("even".into(), json!(e));
            m.insert("odd".into(), json!(o));
            ok(Value::Object(m))
        }
        Command::Theta { corpus, left, right } => {
            let c = Corpus::load(corpus)?;
            let m = c.module(left)?;
            let n = c.presentation(right)?;
            let (e, o) = stable_tor_lengths(&m, &n, order)?;
            ok(json!({"theta": e as i64 - o as i64, "tor_even": e, "tor_odd": o}))
        }
        Command::Hrr { corpus, left, right } => {
            let c = Corpus::load(corpus)?;
            let (x, y) = (c.factorization(left)?, c.factorization(right)?);
            let rf = residue_functional(&milnor_algebra(&c.potential, order)?)?;
            let r = hrr_check(x, y, &rf, order)?;
            ok(json!({"chi": r.chi, "residue_side": rational(&r.residue_side), "sign": r.sign, "equal": r.equal}))
        }
        Command::Gram { corpus, pairing, items } => {
            let c = Corpus::load(corpus)?;
            let sources = items
                .iter()
                .map(|n| Ok((n.clone(), c.module(n)?)))
                .collect::<Result<Vec<_>, CliError>>()?;
            let g = gram_matrix(&sources, *pairing, order)?;
            ok(json!({"pairing": pairing.to_string(), "labels": g.labels, "matrix": integer_rows(&g.entries)?}))
        }
        Command::Psd { report } => {
            let g = read_gram(report)?;
            let r = is_positive_semidefinite(&g)?;
            ok(json!({"psd": r.psd, "kernel_basis": rational_rows(&r.kernel_basis)}))
        }
        Command::WeightFiltration { matrix, center } => {
            let m = read_matrix(matrix)?;
            let op = NilpotentOperator::new(m, *center)?;
            let wf = weight_filtration(&op)?;
            let axioms = verify_weight_axioms(&op, &wf);
            let pieces: Vec<Value> = wf
                .subspaces()
                .iter()
                .enumerate()
                .map(|(i, s)| json!({"weight": i as i64 - 1, "dimension": s.dim(), "basis": rational_rows(&s.basis())}))
                .collect();
            let primitive = (0..=*center as i64)
                .map(|l| primitive_subspace(&op, &wf, l).map(|p| p.cols()))
                .collect::<mfres::Result<Vec<_>>>()?;
            ok(json!({
                "center": center,
                "filtration": pieces,
                "graded_dimensions": graded_dimensions(&wf),
                "primitive_dimensions": primitive,
                "axioms": {"chain_ok": axioms.chain_ok, "shift_ok": axioms.shift_ok, "iso_ok": axioms.iso_ok},
            }))
        }
        Command::LemmaCheck { corpus, j, name } => {
            let c = Corpus::load(corpus)?;
            let targets: Vec<_> = match name {
                Some(n) => vec![c.factorization(n)?.clone()],
                None => c.factorizations.values().cloned().collect(),
            };
            let mut results = Map::new();
            let mut all = true;
            for mf in &targets {
                let holds = euler_lemma_check(mf, *j)?;
                all &= holds;
                results.insert(mf.label().to_string(), json!(holds));
            }
            let report = Report::ok(command, obj(json!({"j": j, "factorizations": results, "all_hold": all})));
            Ok((if all { 0 } else { 1 }, report))
        }
        Command::Selftest { dir } => selftest::run(dir, order),
    }
}

fn integer_rows(m: &QMatrix) -> Result<Value, CliError> {
    let mut rows = Vec::with_capacity(m.rows());
    for i in 0..m.rows() {
        let row: Vec<Value> = (0..m.cols())
            .map(|j| match as_integer(m.get(i, j)) {
                Some(v) => json!(v),
                None => rational(m.get(i, j)),
            })
            .collect();
        rows.push(Value::Array(row));
    }
    Ok(Value::Array(rows))
}

fn parse_entry(v: &Value) -> Option<Rational> {
    match v {
        Value::Number(n) => n.as_i64().map(|i| Rational::from_integer(i.into())),
        Value::String(s) => parse_rational(s.trim()),
        _ => None,
    }
}

fn matrix_from_value(v: &Value, what: &str) -> Result<QMatrix, CliError> {
    let rows = v
        .as_array()
        .ok_or_else(|| CliError::Usage(format!("{what}: expected an array of rows")))?;
    let mut out = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        let row = row
            .as_array()
            .ok_or_else(|| CliError::Usage(format!("{what}: row {} is not an array", i + 1)))?;
        let mut parsed = Vec::with_capacity(row.len());
        for (j, e) in row.iter().enumerate() {
            parsed.push(parse_entry(e).ok_or_else(|| {
                CliError::Usage(format!("{what}: entry ({}, {}) is not an exact rational", i + 1, j + 1))
            })?);
        }
        out.push(parsed);
    }
    if out.iter().any(|r| r.len() != out.first().map_or(0, Vec::len)) {
        return Err(CliError::Usage(format!("{what}: rows have different lengths")));
    }
    Ok(QMatrix::from_rows(out))
}

fn read_json(path: &Path) -> Result<Value, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read `{}`: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

/// Accepts a bare matrix, a `{"matrix": …}` object, or a full gram report.
fn read_gram(path: &Path) -> Result<QMatrix, CliError> {
    let v = read_json(path)?;
    let m = v
        .pointer("/results/matrix")
        .or_else(|| v.get("matrix"))
        .unwrap_or(&v);
    matrix_from_value(m, &path.display().to_string())
}

fn read_matrix(path: &Path) -> Result<QMatrix, CliError> {
    let v = read_json(path)?;
    let m = v.get("matrix").unwrap_or(&v);
    matrix_from_value(m, &path.display().to_string())
}
