//! File formats for monoids, actions, subfunctors and homomorphisms.
//!
//! Tables are nested objects keyed by element labels, so a fixture reads
//! like a Cayley table: `"table": {"a": {"b": "ab"}}`.

use std::fs;
use std::path::{Path, PathBuf};

use galmon::finset::Elem;
use galmon::{FinMap, FinSet, MAction, Monoid, MonoidHom, Site, Subfunctor};
use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::CliError;

pub type Table = IndexMap<String, IndexMap<String, String>>;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonoidFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schema: Option<String>,
    pub elements: Vec<String>,
    pub unit: String,
    pub table: Table,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schema: Option<String>,
    pub set: Vec<String>,
    pub act: Table,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubfunctorFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schema: Option<String>,
    pub subsets: IndexMap<String, Vec<String>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MonoidRef {
    Inline(MonoidFile),
    Path(String),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HomFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schema: Option<String>,
    pub source: MonoidRef,
    pub map: IndexMap<String, String>,
}

fn schema_err(path: &Path, msg: impl Into<String>) -> CliError {
    CliError::Schema { path: path.display().to_string(), msg: msg.into() }
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
    serde_json::from_str(&text).map_err(|source| CliError::Json { path: path.display().to_string(), source })
}

fn position(set: &FinSet, label: &str) -> Option<usize> {
    set.index_of(&Elem::sym(label))
}

/// Reads a full `rows × cols` table, naming the first missing or bad cell.
fn read_table(
    path: &Path,
    field: &str,
    table: &Table,
    rows: &FinSet,
    cols: &FinSet,
    values: &FinSet,
) -> Result<Vec<usize>, CliError> {
    if let Some(extra) = table.keys().find(|k| position(rows, k).is_none()) {
        return Err(schema_err(path, format!("{field}[{extra}]: `{extra}` is not an element")));
    }
    let mut out = Vec::with_capacity(rows.len() * cols.len());
    for r in rows.iter() {
        let r = r.to_string();
        let row = table.get(&r).ok_or_else(|| schema_err(path, format!("{field}[{r}] is missing")))?;
        if let Some(extra) = row.keys().find(|k| position(cols, k).is_none()) {
            return Err(schema_err(path, format!("{field}[{r}][{extra}]: `{extra}` is not an element")));
        }
        for c in cols.iter() {
            let c = c.to_string();
            let v = row.get(&c).ok_or_else(|| schema_err(path, format!("{field}[{r}][{c}] is missing")))?;
            out.push(
                position(values, v)
                    .ok_or_else(|| schema_err(path, format!("{field}[{r}][{c}] = `{v}` is not an element")))?,
            );
        }
    }
    Ok(out)
}

pub fn monoid_from_file(path: &Path, f: &MonoidFile) -> Result<Monoid, CliError> {
    let carrier = FinSet::from_symbols(&f.elements)?;
    let unit = position(&carrier, &f.unit)
        .ok_or_else(|| schema_err(path, format!("unit `{}` is not an element", f.unit)))?;
    let table = read_table(path, "table", &f.table, &carrier, &carrier, &carrier)?;
    Ok(Monoid::new(carrier, table, unit)?)
}

pub fn parse_monoid(path: &Path) -> Result<Monoid, CliError> {
    monoid_from_file(path, &read_json(path)?)
}

pub fn action_from_file(path: &Path, m: &Monoid, f: &ActionFile) -> Result<MAction, CliError> {
    let carrier = FinSet::from_symbols(&f.set)?;
    let table = read_table(path, "act", &f.act, m.carrier(), &carrier, &carrier)?;
    Ok(MAction::new(m.clone(), carrier, table)?)
}

pub fn parse_action(path: &Path, m: &Monoid) -> Result<MAction, CliError> {
    action_from_file(path, m, &read_json(path)?)
}

/// Site object name for an action file: its file stem.
pub fn action_name(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| path.display().to_string())
}

/// Every `*.json` file in `dir`, in file-name order, as named actions.
pub fn load_action_dir(dir: &Path, m: &Monoid) -> Result<Vec<(String, MAction)>, CliError> {
    let entries = fs::read_dir(dir).map_err(|source| CliError::Io { path: dir.display().to_string(), source })?;
    let mut paths: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    paths.iter().map(|p| Ok((action_name(p), parse_action(p, m)?))).collect()
}

pub fn parse_subfunctor(path: &Path, site: &Site) -> Result<Subfunctor, CliError> {
    let f: SubfunctorFile = read_json(path)?;
    if let Some(name) = f.subsets.keys().find(|n| site.find(n).is_none()) {
        return Err(schema_err(path, format!("subsets[{name}]: no such site object")));
    }
    Ok(Subfunctor::from_labels(
        site,
        f.subsets.iter().map(|(name, labels)| (name.as_str(), labels.iter().map(String::as_str))),
    )?)
}

/// Reads `h: B → A`; the source monoid is inline or a path relative to the file.
pub fn parse_hom(path: &Path, target: &Monoid) -> Result<MonoidHom, CliError> {
    let f: HomFile = read_json(path)?;
    let src = match &f.source {
        MonoidRef::Inline(m) => monoid_from_file(path, m)?,
        MonoidRef::Path(p) => parse_monoid(&path.parent().unwrap_or(Path::new(".")).join(p))?,
    };
    let table = src
        .carrier()
        .iter()
        .map(|b| {
            let b = b.to_string();
            let a = f.map.get(&b).ok_or_else(|| schema_err(path, format!("map[{b}] is missing")))?;
            position(target.carrier(), a).ok_or_else(|| schema_err(path, format!("map[{b}] = `{a}` is not an element")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let map = FinMap::new(src.carrier().clone(), target.carrier().clone(), table)?;
    Ok(MonoidHom::new(src, target.clone(), map)?)
}

pub fn monoid_to_file(m: &Monoid) -> MonoidFile {
    let labels = m.carrier().labels();
    let table = (0..m.len())
        .map(|a| (labels[a].clone(), (0..m.len()).map(|b| (labels[b].clone(), labels[m.mul(a, b)].clone())).collect()))
        .collect();
    MonoidFile { schema: None, elements: labels.clone(), unit: labels[m.unit()].clone(), table }
}

pub fn action_to_file(action: &MAction) -> ActionFile {
    let a = action.monoid().carrier().labels();
    let x = action.carrier().labels();
    let act = (0..a.len())
        .map(|g| (a[g].clone(), (0..x.len()).map(|p| (x[p].clone(), x[action.act(g, p)].clone())).collect()))
        .collect();
    ActionFile { schema: None, set: x, act }
}
