//! Runs the expectations recorded in corpus files.

use std::path::Path;

use mfres::forms::euler_lemma_check;
use mfres::mf::{hom_complex, homology_dimensions};
use mfres::pairings::{
    as_integer, chern_milnor_class, gram_matrix, hochster_theta, hrr_check, is_positive_semidefinite, milnor_algebra,
    residue_functional, residue_pairing, PairingKind,
};
use mfres::poly::format_rational;
use mfres::MonomialOrder;
use serde_json::{json, Map, Value};

use crate::corpus::{Corpus, CorpusFile};
use crate::report::Report;
use crate::CliError;

struct Check {
    name: String,
    expected: Value,
    result: Result<Value, CliError>,
}

impl Check {
    fn new(name: String, expected: Value, result: Result<Value, CliError>) -> Self {
        Check { name, expected, result }
    }

    fn passed(&self) -> bool {
        matches!(&self.result, Ok(v) if v == &self.expected)
    }
}

fn chi(c: &Corpus, l: &str, r: &str, order: MonomialOrder) -> Result<i64, CliError> {
    let (e, o) = homology_dimensions(&hom_complex(c.factorization(l)?, c.factorization(r)?)?, order)?;
    Ok(e as i64 - o as i64)
}

fn checks_for(c: &Corpus, order: MonomialOrder) -> (Vec<Check>, Vec<Value>) {
    let ex = c.file.expectations.clone().unwrap_or_default();
    let mut out = Vec::new();
    let mut info = Vec::new();

    if let Some(mu) = ex.milnor_number {
        let r = milnor_algebra(&c.potential, order).map(|a| json!(a.milnor_number)).map_err(CliError::from);
        out.push(Check::new("milnor_number".into(), json!(mu), r));
    }
    for e in &ex.euler {
        let r = chi(c, &e.left, &e.right, order).map(|v| json!(v));
        out.push(Check::new(format!("euler({}, {})", e.left, e.right), json!(e.value), r));
    }
    for e in &ex.herbrand {
        let r = chi(c, &e.left, &e.right, order).map(|v| json!(v));
        out.push(Check::new(format!("herbrand({}, {})", e.left, e.right), json!(e.value), r));
    }
    for e in &ex.theta {
        let r = (|| -> Result<Value, CliError> {
            let m = c.module(&e.left)?;
            let n = c.presentation(&e.right)?;
            Ok(json!(hochster_theta(&m, &n, order)?))
        })();
        out.push(Check::new(format!("theta({}, {})", e.left, e.right), json!(e.value), r));
    }

    let residue = || -> Result<_, CliError> { Ok(residue_functional(&milnor_algebra(&c.potential, order)?)?) };
    for e in &ex.residue {
        let r = (|| -> Result<Value, CliError> {
            let rf = residue()?;
            let (x, y) = (c.factorization(&e.left)?, c.factorization(&e.right)?);
            let v = residue_pairing(
                &rf,
                &mfres::forms::chern_character_form(x)?,
                &mfres::forms::chern_character_form(y)?,
            )?;
            Ok(json!(format_rational(&v)))
        })();
        out.push(Check::new(format!("residue({}, {})", e.left, e.right), json!(e.value), r));
    }
    if ex.hrr_all_pairs {
        match residue() {
            Ok(rf) => {
                for x in c.factorizations.values() {
                    for y in c.factorizations.values() {
                        let r = hrr_check(x, y, &rf, order).map(|h| json!(h.equal)).map_err(CliError::from);
                        out.push(Check::new(format!("hrr({}, {})", x.label(), y.label()), json!(true), r));
                    }
                }
            }
            Err(e) => out.push(Check::new("hrr".into(), json!(true), Err(e))),
        }
    }
    for e in &ex.psd {
        let r = (|| -> Result<Value, CliError> {
            let kind: PairingKind = e.pairing.parse().map_err(CliError::Usage)?;
            let items = e
                .items
                .iter()
                .map(|n| Ok((n.clone(), c.module(n)?)))
                .collect::<Result<Vec<_>, CliError>>()?;
            let g = gram_matrix(&items, kind, order)?;
            Ok(json!(is_positive_semidefinite(&g.entries)?.psd))
        })();
        out.push(Check::new(format!("psd({}: {})", e.pairing, e.items.join(",")), json!(e.psd), r));
    }
    if !ex.chern_zero.is_empty() {
        let alg = milnor_algebra(&c.potential, order);
        for n in &ex.chern_zero {
            let r = (|| -> Result<Value, CliError> {
                let alg = alg.as_ref().map_err(|e| CliError::from(e.clone()))?;
                let class = chern_milnor_class(c.factorization(n)?, alg)?;
                Ok(json!(class.iter().all(|x| as_integer(x) == Some(0))))
            })();
            out.push(Check::new(format!("chern_zero({n})"), json!(true), r));
        }
    }
    for &j in &ex.lemma_j {
        for mf in c.factorizations.values() {
            let r = euler_lemma_check(mf, j).map(|b| json!(b)).map_err(CliError::from);
            out.push(Check::new(format!("lemma({}, j={j})", mf.label()), json!(true), r));
        }
    }
    if c.ring.nvars() % 2 == 1 {
        // χ(α, α) in this parity is recorded, not asserted.
        for mf in c.factorizations.values() {
            let v = chi(c, mf.label(), mf.label(), order).map_err(|e| e.message().to_string());
            info.push(json!({"file": c.file.name, "quantity": format!("chi({0}, {0})", mf.label()), "value": match v {
                Ok(v) => json!(v),
                Err(m) => json!(m),
            }}));
        }
    }
    (out, info)
}

pub fn run(dir: &Path, order: MonomialOrder) -> Result<(i32, Report), CliError> {
    if !dir.is_dir() {
        return Err(CliError::Usage(format!("`{}` is not a directory", dir.display())));
    }
    let mut paths: Vec<_> = std::fs::read_dir(dir)
        .map_err(|e| CliError::Usage(format!("cannot list `{}`: {e}", dir.display())))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json") && p.is_file())
        .collect();
    paths.sort();

    let mut items = Vec::new();
    let mut informational = Vec::new();
    let mut skipped = Vec::new();
    let (mut passed, mut failed) = (0usize, 0usize);
    for path in &paths {
        let file_name = path.file_name().map(|f| f.to_string_lossy().into_owned()).unwrap_or_default();
        let file = match CorpusFile::read(path) {
            Ok(f) => f,
            Err(e) => {
                failed += 1;
                items.push(json!({"file": file_name, "check": "load", "pass": false, "error": e.message()}));
                continue;
            }
        };
        if file.expectations.is_none() {
            skipped.push(json!(file_name));
            continue;
        }
        let corpus = match Corpus::from_file(file) {
            Ok(c) => c,
            Err(e) => {
                failed += 1;
                items.push(json!({"file": file_name, "check": "load", "pass": false, "error": e.message()}));
                continue;
            }
        };
        let (checks, info) = checks_for(&corpus, order);
        informational.extend(info);
        for ch in checks {
            let pass = ch.passed();
            if pass {
                passed += 1;
            } else {
                failed += 1;
            }
            let mut m = Map::new();
            m.insert("file".into(), json!(file_name));
            m.insert("check".into(), json!(ch.name));
            m.insert("pass".into(), json!(pass));
            m.insert("expected".into(), ch.expected.clone());
            match &ch.result {
                Ok(v) => m.insert("actual".into(), v.clone()),
                Err(e) => m.insert("error".into(), json!(e.message())),
            };
            items.push(Value::Object(m));
        }
    }
    let checks = passed + failed;
    let mut results = Map::new();
    results.insert("files".into(), json!(paths.len()));
    results.insert("checks".into(), json!(checks));
    results.insert("passed".into(), json!(passed));
    results.insert("failed".into(), json!(failed));
    if checks == 0 {
        results.insert("warning".into(), json!("0 checks"));
    }
    if !skipped.is_empty() {
        results.insert("skipped".into(), Value::Array(skipped));
    }
    results.insert("items".into(), Value::Array(items));
    if !informational.is_empty() {
        results.insert("informational".into(), Value::Array(informational));
    }
    Ok((if failed == 0 { 0 } else { 1 }, Report::ok("selftest", results)))
}
