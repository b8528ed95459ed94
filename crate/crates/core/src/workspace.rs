//! Persistent session state: generators, named polynomials, settings.
//!
//! Stored as one JSON document with a `version` field. Rationals are written
//! as `p` or `p/q` strings so nothing is rounded on the way to disk.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::corona::{SearchSettings, SAMPLE_COUNT, SAMPLE_SPAN};
use crate::error::{Error, Result};
use crate::freqmod::{Generator, GeneratorTable, MembershipOptions, EPS_SIGN, NSPAN_BOUND};
use crate::rational::{parse_rational, render_rational};
use crate::trigpoly::TrigPoly;
use num_complex::Complex;

pub const WORKSPACE_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Settings {
    /// Torus grid density; `None` picks one by dimension.
    pub grid: Option<usize>,
    pub refinements: usize,
    /// Coefficient bound for nonnegative lattice membership.
    pub nspan_bound: i64,
    pub eps_sign: f64,
    pub tol: f64,
    pub sample_count: usize,
    pub sample_span: f64,
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            grid: None,
            refinements: 40,
            nspan_bound: NSPAN_BOUND,
            eps_sign: EPS_SIGN,
            tol: 1e-6,
            sample_count: SAMPLE_COUNT,
            sample_span: SAMPLE_SPAN,
        }
    }
}

impl Settings {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Workspace(m));
        if let Some(g) = self.grid {
            if g < 8 {
                return bad(format!("grid {g} below 8"));
            }
        }
        if self.refinements > 10_000 {
            return bad(format!("refinements {} above 10000", self.refinements));
        }
        if !(1..=1_000).contains(&self.nspan_bound) {
            return bad(format!("nspan bound {} outside 1..=1000", self.nspan_bound));
        }
        if !(self.eps_sign > 0.0 && self.eps_sign <= 1e-3) {
            return bad(format!("eps_sign {} outside (0, 1e-3]", self.eps_sign));
        }
        if !(self.tol > 0.0 && self.tol < 1.0) {
            return bad(format!("tol {} outside (0, 1)", self.tol));
        }
        if self.sample_count < 2 || !(self.sample_span > 0.0 && self.sample_span.is_finite()) {
            return bad("sample grid needs at least 2 points over a positive span".into());
        }
        Ok(())
    }

    pub fn search(&self) -> SearchSettings {
        SearchSettings { grid: self.grid, refinements: self.refinements }
    }

    pub fn membership(&self) -> MembershipOptions {
        MembershipOptions { eps_sign: self.eps_sign, nspan_bound: self.nspan_bound }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Workspace {
    table: Arc<GeneratorTable>,
    polys: BTreeMap<String, TrigPoly>,
    pub settings: Settings,
}

impl Default for Workspace {
    fn default() -> Self {
        Self::new()
    }
}

impl Workspace {
    pub fn new() -> Self {
        Workspace { table: Arc::new(GeneratorTable::empty()), polys: BTreeMap::new(), settings: Settings::default() }
    }

    pub fn table(&self) -> &Arc<GeneratorTable> {
        &self.table
    }

    pub fn polys(&self) -> &BTreeMap<String, TrigPoly> {
        &self.polys
    }

    pub fn get(&self, name: &str) -> Option<&TrigPoly> {
        self.polys.get(name)
    }

    /// Appends generators and widens every stored polynomial to the new table.
    pub fn declare(&mut self, generators: Vec<Generator>) -> Result<()> {
        let table = Arc::new(self.table.extended(generators)?);
        self.polys = self.polys.iter().map(|(k, p)| (k.clone(), p.widened(&table))).collect();
        self.table = table;
        Ok(())
    }

    pub fn define(&mut self, name: &str, p: TrigPoly) -> Result<()> {
        let ok = name.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
            && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
            && name != "e"
            && name != "i";
        if !ok {
            return Err(Error::Workspace(format!("`{name}` is not a valid polynomial name")));
        }
        self.polys.insert(name.to_string(), p.widened(&self.table));
        Ok(())
    }

    /// Parses an expression against this workspace.
    pub fn parse(&self, text: &str) -> Result<TrigPoly> {
        crate::expr::parse_trig(text, &self.table, &|n| self.polys.get(n).cloned())
    }

    pub fn to_json(&self) -> Result<String> {
        let doc = Document {
            version: WORKSPACE_VERSION,
            generators: self.table.entries().to_vec(),
            polys: self.polys.iter().map(|(k, p)| (k.clone(), encode(p))).collect(),
            settings: self.settings.clone(),
        };
        serde_json::to_string_pretty(&doc).map_err(|e| Error::Workspace(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let probe: serde_json::Value =
            serde_json::from_str(text).map_err(|e| Error::Workspace(format!("corrupt workspace: {e}")))?;
        match probe.get("version").and_then(|v| v.as_u64()) {
            Some(v) if v == WORKSPACE_VERSION as u64 => {}
            Some(v) => return Err(Error::Workspace(format!("unsupported workspace version {v}"))),
            None => return Err(Error::Workspace("workspace has no version".into())),
        }
        let doc: Document =
            serde_json::from_value(probe).map_err(|e| Error::Workspace(format!("corrupt workspace: {e}")))?;
        doc.settings.validate()?;
        let table = Arc::new(if doc.generators.is_empty() {
            GeneratorTable::empty()
        } else {
            GeneratorTable::new(doc.generators)?
        });
        let mut ws = Workspace { table, polys: BTreeMap::new(), settings: doc.settings };
        for (name, terms) in doc.polys {
            let p = decode(&ws.table, &terms)?;
            ws.define(&name, p)?;
        }
        Ok(ws)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()?).map_err(|e| Error::Workspace(format!("{}: {e}", path.display())))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).map_err(|e| Error::Workspace(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    version: u32,
    generators: Vec<Generator>,
    polys: BTreeMap<String, Vec<Term>>,
    settings: Settings,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Term {
    freq: Vec<String>,
    re: String,
    im: String,
}

fn encode(p: &TrigPoly) -> Vec<Term> {
    p.terms()
        .map(|(f, c)| Term {
            freq: f.coords().iter().map(render_rational).collect(),
            re: render_rational(&c.re),
            im: render_rational(&c.im),
        })
        .collect()
}

fn decode(table: &Arc<GeneratorTable>, terms: &[Term]) -> Result<TrigPoly> {
    let mut out = Vec::with_capacity(terms.len());
    for t in terms {
        let coords = t.freq.iter().map(|s| parse_rational(s)).collect::<Result<Vec<BigRational>>>()?;
        let f = table.frequency(coords)?;
        out.push((f, Complex::new(parse_rational(&t.re)?, parse_rational(&t.im)?)));
    }
    Ok(TrigPoly::from_terms(table, out))
}
