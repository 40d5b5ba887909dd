//! Checked-in worked examples: an instance, a point and the expected
//! outcome, replayed by `reproduce-all` and the acceptance suite.
//!
//! ```json
//! {
//!   "name": "mccormick",
//!   "instance": {"family": "mccormick"},
//!   "point": ["1/2", "7/10", "1/5"],
//!   "mode": "repaired",            // lot-sizing layout, optional
//!   "scalar": "exact",             // or "decimal" (f64 construction)
//!   "expect": {
//!     "verifies": true,
//!     "support": [{"point": ["1", "0", "0"], "weight": "3/10"}],
//!     "rays": [{"point": [...], "weight": "..."}],
//!     "metadata": {"blow-up": "4/5,1/5,4/5,1/10,1/10"},
//!     "tolerance": "0.01",          // compare weights/points approximately
//!     "failing_cell": ["0", "1/2"]
//!   }
//! }
//! ```
//!
//! Support points are compared as a multiset; a missing `weight` only
//! checks the point.

use std::collections::BTreeMap;
use std::path::Path;

use serde_json::Value;

use crate::certificate::{Certificate, ConvexCombination};
use crate::error::{Error, Result};
use crate::extended::LotSizingMode;
use crate::family::{ConstructOptions, Instance};
use crate::io::{num, nums, parse_json};
use crate::scalar::{convert, Scalar, Q};

#[derive(Clone, Debug, PartialEq)]
pub struct ExpectedTerm {
    pub point: Vec<Q>,
    pub weight: Option<Q>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Expectation {
    pub verifies: bool,
    pub support: Option<Vec<ExpectedTerm>>,
    pub rays: Option<Vec<ExpectedTerm>>,
    pub metadata: BTreeMap<String, String>,
    pub tolerance: Option<Q>,
    pub failing_cell: Option<(Q, Q)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CorpusCase {
    pub name: String,
    pub instance: Instance,
    pub point: Vec<Q>,
    pub options: ConstructOptions,
    pub decimal: bool,
    pub expect: Expectation,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CaseOutcome {
    pub name: String,
    /// Mismatches against the expectation; empty when the case reproduces.
    pub problems: Vec<String>,
}

impl CaseOutcome {
    pub fn passed(&self) -> bool {
        self.problems.is_empty()
    }
}

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn terms(v: Option<&Value>) -> Result<Option<Vec<ExpectedTerm>>> {
    let Some(v) = v else { return Ok(None) };
    let arr = v
        .as_array()
        .ok_or_else(|| parse_err("expected terms must be an array"))?;
    arr.iter()
        .map(|t| {
            Ok(ExpectedTerm {
                point: nums(t.get("point").ok_or_else(|| parse_err("term without \"point\""))?)?,
                weight: t.get("weight").map(num).transpose()?,
            })
        })
        .collect::<Result<Vec<_>>>()
        .map(Some)
}

impl CorpusCase {
    pub fn from_json(v: &Value) -> Result<Self> {
        let name = v
            .get("name")
            .and_then(Value::as_str)
            .ok_or_else(|| parse_err("case without \"name\""))?;
        let instance = Instance::from_json(
            v.get("instance")
                .ok_or_else(|| parse_err("case without \"instance\""))?,
        )?;
        let point = nums(v.get("point").ok_or_else(|| parse_err("case without \"point\""))?)?;
        let mut options = ConstructOptions::default();
        if let Some(m) = v.get("mode") {
            let m = m.as_str().unwrap_or_default();
            options.lot_sizing = LotSizingMode::from_name(m).ok_or_else(|| parse_err(format!("unknown mode {m:?}")))?;
        }
        let decimal = match v.get("scalar").and_then(Value::as_str).unwrap_or("exact") {
            "exact" => false,
            "decimal" => true,
            other => return Err(parse_err(format!("unknown scalar {other:?}"))),
        };
        let e = v.get("expect").ok_or_else(|| parse_err("case without \"expect\""))?;
        let metadata = match e.get("metadata") {
            None => BTreeMap::new(),
            Some(m) => m
                .as_object()
                .ok_or_else(|| parse_err("\"metadata\" must be an object"))?
                .iter()
                .map(|(k, v)| {
                    Ok((
                        k.clone(),
                        v.as_str()
                            .ok_or_else(|| parse_err("metadata values are strings"))?
                            .to_string(),
                    ))
                })
                .collect::<Result<_>>()?,
        };
        let failing_cell = match e.get("failing_cell") {
            None => None,
            Some(c) => match nums::<Q>(c)?.as_slice() {
                [a, b] => Some((a.clone(), b.clone())),
                _ => return Err(parse_err("\"failing_cell\" is [start, end]")),
            },
        };
        let expect = Expectation {
            verifies: e.get("verifies").and_then(Value::as_bool).unwrap_or(true),
            support: terms(e.get("support"))?,
            rays: terms(e.get("rays"))?,
            metadata,
            tolerance: e.get("tolerance").map(num).transpose()?,
            failing_cell,
        };
        Ok(Self {
            name: name.to_string(),
            instance,
            point,
            options,
            decimal,
            expect,
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| parse_err(format!("{}: {e}", path.display())))?;
        Self::from_json(&parse_json(&text)?).map_err(|e| parse_err(format!("{}: {e}", path.display())))
    }

    pub fn run(&self) -> CaseOutcome {
        let problems = if self.decimal {
            let h: Vec<f64> = self.point.iter().map(convert).collect();
            self.check(&h)
        } else {
            self.check(&self.point)
        };
        CaseOutcome {
            name: self.name.clone(),
            problems,
        }
    }

    fn check<T: Scalar>(&self, h: &[T]) -> Vec<String> {
        let cert: Certificate<T> = match self.instance.construct(h, &self.options) {
            Ok(c) => c,
            Err(e) => return vec![format!("construction failed: {e}")],
        };
        let mut problems = Vec::new();
        for (k, want) in &self.expect.metadata {
            match cert.metadata.get(k) {
                Some(got) if got == want => {}
                got => problems.push(format!("metadata {k}: expected {want}, got {got:?}")),
            }
        }
        let report = cert.verify();
        if let Some((a, b)) = &self.expect.failing_cell {
            let (a, b): (T, T) = (convert(a), convert(b));
            if !report.cell_failures.iter().any(|c| c.start.near(&a) && c.end.near(&b)) {
                problems.push(format!("no failing cell [{}, {})", a.to_text(), b.to_text()));
            }
        }
        if report.passed() != self.expect.verifies {
            let mut msg = format!(
                "verification {} but expected to {}",
                pass_word(report.passed()),
                verb(self.expect.verifies)
            );
            if let Some(first) = report.describe(&cert.system).first() {
                msg.push_str(&format!(" ({first})"));
            }
            problems.push(msg);
        }
        if !report.passed() {
            return problems;
        }
        let comb = match cert.extract() {
            Ok(c) => c,
            Err(e) => {
                problems.push(format!("extraction failed: {e}"));
                return problems;
            }
        };
        let got = comb.reconstruct();
        if !got.iter().zip(h).all(|(a, b)| a.near(b)) || got.len() != h.len() {
            problems.push("extracted combination does not reconstruct the point".into());
        }
        let tol = self.expect.tolerance.clone();
        if let Some(want) = &self.expect.support {
            compare_terms("support", want, &comb.support, tol.as_ref(), &mut problems);
        }
        if let Some(want) = &self.expect.rays {
            compare_terms("rays", want, &comb.rays, tol.as_ref(), &mut problems);
        }
        problems
    }
}

fn pass_word(p: bool) -> &'static str {
    if p {
        "passed"
    } else {
        "failed"
    }
}

fn verb(p: bool) -> &'static str {
    if p {
        "pass"
    } else {
        "fail"
    }
}

fn close<T: Scalar>(got: &T, want: &Q, tol: Option<&Q>) -> bool {
    match tol {
        None => got.near(&convert(want)),
        Some(t) => (got.to_f64() - want.to_f64()).abs() <= t.to_f64(),
    }
}

/// Multiset comparison: every expected term is matched to a distinct
/// extracted term.
fn compare_terms<T: Scalar>(
    what: &str,
    want: &[ExpectedTerm],
    got: &[(Vec<T>, T)],
    tol: Option<&Q>,
    problems: &mut Vec<String>,
) {
    if want.len() != got.len() {
        problems.push(format!("{what}: expected {} terms, got {}", want.len(), got.len()));
        return;
    }
    let mut used = vec![false; got.len()];
    for w in want {
        let hit = got.iter().enumerate().position(|(i, (p, weight))| {
            !used[i]
                && p.len() == w.point.len()
                && p.iter().zip(&w.point).all(|(a, b)| close(a, b, tol))
                && w.weight.as_ref().is_none_or(|x| close(weight, x, tol))
        });
        match hit {
            Some(i) => used[i] = true,
            None => {
                let pt: Vec<String> = w.point.iter().map(Scalar::to_text).collect();
                let wt = w
                    .weight
                    .as_ref()
                    .map_or_else(String::new, |x| format!(" with weight {}", x.to_text()));
                problems.push(format!("{what}: no term ({}){wt}", pt.join(", ")));
            }
        }
    }
}

/// Loads every `*.json` case in `dir`, sorted by file name.
pub fn load_dir(dir: &Path) -> Result<Vec<CorpusCase>> {
    let mut paths: Vec<_> = std::fs::read_dir(dir)
        .map_err(|e| parse_err(format!("{}: {e}", dir.display())))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    paths.iter().map(|p| CorpusCase::load(p)).collect()
}

/// The combination extracted for a passing case, for display.
pub fn extract_exact(case: &CorpusCase) -> Result<ConvexCombination<Q>> {
    case.instance.construct(&case.point, &case.options)?.extract()
}
