//! Published reference rows, bundled with the crate.

use serde::Deserialize;

use crate::central::{CentralValueReport, Pipeline};
use crate::error::{Error, Result};
use crate::quadfield::{reduce_form, QuadForm};

#[derive(Clone, Debug, Deserialize)]
pub struct GoldenRow {
    pub n: i64,
    pub d: i64,
    pub form: QuadForm,
    pub value: i64,
    #[serde(default)]
    pub class: Option<String>,
    /// Listed together with its adjoint form `[a,-b,c]` under a single class label.
    #[serde(default)]
    pub paired: bool,
}

#[derive(Clone, Debug, Deserialize)]
pub struct GoldenTables {
    pub rows: Vec<GoldenRow>,
    /// `(n, H(n))` with `H` as a fraction string.
    pub hurwitz: Vec<(i64, String)>,
    /// `(N, class number, type number)` of the quaternion algebra.
    pub class_numbers: Vec<(i64, usize, usize)>,
    pub brandt_eigenvector_163: Vec<i64>,
}

const TABLES: &str = include_str!("../fixtures/tables.json");

pub fn golden() -> GoldenTables {
    serde_json::from_str(TABLES).expect("bundled tables parse")
}

impl GoldenTables {
    pub fn rows_for(&self, n: i64) -> Vec<&GoldenRow> {
        self.rows.iter().filter(|r| r.n == n).collect()
    }

    pub fn ds_for(&self, n: i64) -> Vec<i64> {
        let mut ds: Vec<i64> = self.rows_for(n).iter().map(|r| r.d).collect();
        ds.dedup();
        ds
    }
}

/// One published row next to the computed row of the same form class.
#[derive(Clone, Debug, serde::Serialize)]
pub struct RowMatch {
    pub d: i64,
    pub form: QuadForm,
    pub reduced_form: QuadForm,
    pub expected: i64,
    pub got: i64,
    pub expected_class: Option<String>,
    pub class: String,
    pub type_index: usize,
    /// Number of classes in that type (1 or 2).
    pub type_size: usize,
    pub paired: bool,
}

/// Pairs every published row for `n` with the computed row of its reduced form.
pub fn match_rows(tables: &GoldenTables, pipeline: &Pipeline, reports: &[CentralValueReport]) -> Result<Vec<RowMatch>> {
    let mut out = Vec::new();
    for g in tables.rows_for(pipeline.n) {
        let (reduced, _) = reduce_form(&g.form)?;
        let report = reports
            .iter()
            .find(|r| r.d == g.d)
            .ok_or_else(|| Error::identity("published row", format!("no report for |D| = {}", g.d)))?;
        let row = report
            .rows
            .iter()
            .find(|r| r.reduced_form == reduced)
            .ok_or_else(|| Error::identity("published row", format!("{} has no computed row at |D| = {}", g.form, g.d)))?;
        let idx = pipeline.classes.index_of(&row.class).expect("label from this class set");
        out.push(RowMatch {
            d: g.d,
            form: g.form,
            reduced_form: reduced,
            expected: g.value,
            got: row.n,
            expected_class: g.class.clone(),
            class: row.class.clone(),
            type_index: pipeline.type_of(idx),
            type_size: pipeline.types[pipeline.type_of(idx)].len(),
            paired: g.paired,
        });
    }
    Ok(out)
}

/// The sign `s` per `|D|` with `got = s * expected` on every row, or the first offending row.
pub fn global_signs(matches: &[RowMatch]) -> std::result::Result<Vec<(i64, i64)>, String> {
    let mut signs: Vec<(i64, i64)> = Vec::new();
    for m in matches {
        if m.got.abs() != m.expected.abs() {
            return Err(format!("|D| = {}, {}: got {}, expected {}", m.d, m.form, m.got, m.expected));
        }
        if m.expected == 0 {
            continue;
        }
        let s = m.got / m.expected;
        match signs.iter().find(|(d, _)| *d == m.d) {
            Some(&(_, t)) if t != s => {
                return Err(format!("|D| = {}, {}: sign {s} differs from the sign {t} of other rows", m.d, m.form));
            }
            Some(_) => {}
            None => signs.push((m.d, s)),
        }
    }
    Ok(signs)
}

/// Correspondence between published class labels and computed classes.
#[derive(Clone, Debug, serde::Serialize)]
pub struct LabelMap {
    /// Published labels and the computed classes of one type (classes sharing a right order).
    pub groups: Vec<(Vec<String>, Vec<String>)>,
    /// Published labels whose position inside a two-class type differs between rows.
    pub within_pair_swaps: Vec<String>,
}

impl LabelMap {
    /// Computed classes of the type holding the published `label`.
    pub fn classes_of(&self, label: &str) -> Option<&[String]> {
        self.groups.iter().find(|(p, _)| p.iter().any(|l| l == label)).map(|(_, c)| c.as_slice())
    }
}

/// Relabelling from published class labels to computed ones, up to the
/// right-order pairing: every published label lands in a single computed
/// type, and no type receives more labels than it has classes. Classes of
/// one type share a right order and give equivalent Siegel points, so the
/// order of labels inside a pair is only recorded, not required.
pub fn label_correspondence(matches: &[RowMatch], pipeline: &Pipeline) -> std::result::Result<LabelMap, String> {
    let mut typed: Vec<(String, usize)> = Vec::new();
    for m in matches {
        let Some(label) = &m.expected_class else { continue };
        match typed.iter().find(|(l, _)| l == label) {
            Some((_, t)) if *t != m.type_index => {
                return Err(format!("{label} lands in two types (|D| = {}, {})", m.d, m.form));
            }
            Some(_) => {}
            None => typed.push((label.clone(), m.type_index)),
        }
    }
    let mut groups = Vec::new();
    for (t, members) in pipeline.types.iter().enumerate() {
        let mut published: Vec<String> = typed.iter().filter(|(_, u)| *u == t).map(|(l, _)| l.clone()).collect();
        if published.len() > members.len() {
            return Err(format!("labels {published:?} share a type of {} classes", members.len()));
        }
        published.sort();
        let ours = members.iter().map(|&i| pipeline.classes.label(i).to_string()).collect();
        groups.push((published, ours));
    }
    let mut seen: Vec<(String, String, i64)> = Vec::new();
    let mut within_pair_swaps = Vec::new();
    for m in matches.iter().filter(|m| !m.paired && m.type_size == 2) {
        let Some(label) = &m.expected_class else { continue };
        if let Some((_, c, d)) = seen.iter().find(|(l, c, _)| l == label && *c != m.class) {
            within_pair_swaps.push(format!("{label}: {c} at |D| = {d}, {} at |D| = {}", m.class, m.d));
        } else if !seen.iter().any(|(l, _, _)| l == label) {
            seen.push((label.clone(), m.class.clone(), m.d));
        }
    }
    Ok(LabelMap { groups, within_pair_swaps })
}
