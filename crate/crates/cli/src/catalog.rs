//! Built-in reproduction scenarios.

use serde::Serialize;

use crate::config::ScenarioConfig;
use crate::error::CliError;

const ENTRIES: &[(&str, &str)] = &[
    ("example1", include_str!("../scenarios/example1.json")),
    (
        "example2-good",
        include_str!("../scenarios/example2-good.json"),
    ),
    (
        "example2-bad",
        include_str!("../scenarios/example2-bad.json"),
    ),
    (
        "old-age-table1",
        include_str!("../scenarios/old-age-table1.json"),
    ),
    (
        "mixture-table2",
        include_str!("../scenarios/mixture-table2.json"),
    ),
    (
        "confirm-counts",
        include_str!("../scenarios/confirm-counts.json"),
    ),
];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CatalogEntry {
    pub id: String,
    pub kind: String,
    pub description: String,
}

pub fn ids() -> Vec<&'static str> {
    ENTRIES.iter().map(|(id, _)| *id).collect()
}

pub fn raw(id: &str) -> Option<&'static str> {
    ENTRIES
        .iter()
        .find(|(i, _)| *i == id)
        .map(|(_, text)| *text)
}

pub fn load(id: &str) -> Result<ScenarioConfig, CliError> {
    let text = raw(id).ok_or_else(|| CliError::UnknownScenario(id.to_string()))?;
    ScenarioConfig::from_json(text)
}

pub fn load_all() -> Result<Vec<ScenarioConfig>, CliError> {
    ids().into_iter().map(load).collect()
}

pub fn list_reproductions() -> Vec<CatalogEntry> {
    load_all()
        .expect("built-in scenarios parse")
        .into_iter()
        .map(|c| CatalogEntry {
            id: c.id.clone(),
            kind: c.kind.name().to_string(),
            description: c.description.clone(),
        })
        .collect()
}
