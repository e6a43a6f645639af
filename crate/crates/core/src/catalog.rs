//! Catalog records and loading of the data bundle directory.

use std::collections::BTreeSet;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::egc::{normalize_term, FvDatabase, EMOTION_COUNT};
use crate::emotion_state::MstnConfig;
use crate::parser::{Lexicon, NounCategory};
use crate::rules::{MembershipConfig, RuleCfConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ItemKind {
    Spot,
    Food,
    Gift,
}

impl ItemKind {
    pub fn category(self) -> NounCategory {
        match self {
            ItemKind::Spot => NounCategory::Spot,
            ItemKind::Food => NounCategory::Food,
            ItemKind::Gift => NounCategory::Gift,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpotRecord {
    pub id: String,
    pub name: String,
    /// Twenty emotion strengths people associate with the spot.
    pub impression: Vec<f64>,
    #[serde(default)]
    pub area: String,
    #[serde(default)]
    pub nearby: Vec<String>,
}

/// A local food or gift.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ItemRecord {
    pub id: String,
    pub name: String,
    /// Key into the favorite value database.
    pub fv_term: String,
    #[serde(default)]
    pub nearby: Vec<String>,
}

pub type FoodRecord = ItemRecord;
pub type GiftRecord = ItemRecord;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Catalog {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    pub spots: Vec<SpotRecord>,
    #[serde(default)]
    pub foods: Vec<FoodRecord>,
    #[serde(default)]
    pub gifts: Vec<GiftRecord>,
}

impl Catalog {
    pub fn spot(&self, id: &str) -> Option<&SpotRecord> {
        self.spots.iter().find(|s| s.id == id)
    }

    pub fn items(&self, kind: ItemKind) -> &[ItemRecord] {
        match kind {
            ItemKind::Food => &self.foods,
            ItemKind::Gift => &self.gifts,
            ItemKind::Spot => &[],
        }
    }

    /// Normalizes terms and reports every structural problem.
    fn check(&mut self, fv: &FvDatabase, issues: &mut Vec<BundleIssue>, warnings: &mut Vec<String>) {
        let file = "catalog.json";
        let mut issue = |path: String, message: String| issues.push(BundleIssue::new(file, path, message));
        if self.spots.is_empty() {
            issue("spots".into(), "catalog needs at least one spot".into());
        }
        let spot_ids: BTreeSet<String> = self.spots.iter().map(|s| s.id.clone()).collect();
        let mut seen = BTreeSet::new();
        for (i, s) in self.spots.iter().enumerate() {
            if s.id.is_empty() || !seen.insert(s.id.clone()) {
                issue(format!("spots[{i}].id"), format!("empty or duplicate id `{}`", s.id));
            }
            if s.impression.len() != EMOTION_COUNT {
                issue(
                    format!("spots[{i}].impression"),
                    format!("spot `{}` has {} impression values, expected {EMOTION_COUNT}", s.id, s.impression.len()),
                );
            }
            if let Some((j, v)) = s.impression.iter().enumerate().find(|(_, v)| !(0.0..=1.0).contains(*v)) {
                issue(
                    format!("spots[{i}].impression[{j}]"),
                    format!("spot `{}` impression {v} outside [0,1]", s.id),
                );
            }
            for (j, n) in s.nearby.iter().enumerate() {
                if !spot_ids.contains(n) {
                    issue(format!("spots[{i}].nearby[{j}]"), format!("unknown spot `{n}`"));
                }
            }
        }
        for (kind, list) in [("foods", &mut self.foods), ("gifts", &mut self.gifts)] {
            for (i, item) in list.iter_mut().enumerate() {
                if item.id.is_empty() || !seen.insert(item.id.clone()) {
                    issue(format!("{kind}[{i}].id"), format!("empty or duplicate id `{}`", item.id));
                }
                item.fv_term = normalize_term(&item.fv_term);
                if item.fv_term.is_empty() {
                    issue(format!("{kind}[{i}].fv_term"), "empty fv_term".into());
                } else if !fv.contains(&item.fv_term) {
                    warnings.push(format!(
                        "{file}: {kind}[{i}].fv_term `{}` has no initial favorite value",
                        item.fv_term
                    ));
                }
                for (j, n) in item.nearby.iter().enumerate() {
                    if !spot_ids.contains(n) {
                        issue(format!("{kind}[{i}].nearby[{j}]"), format!("unknown spot `{n}`"));
                    }
                }
            }
        }
    }
}

/// Short listing of the catalog for clients.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CatalogSummary {
    pub spots: Vec<SummaryEntry>,
    pub foods: Vec<SummaryEntry>,
    pub gifts: Vec<SummaryEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryEntry {
    pub id: String,
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub area: Option<String>,
    pub nearby: Vec<String>,
}

impl CatalogSummary {
    pub fn of(catalog: &Catalog) -> Self {
        let items = |list: &[ItemRecord]| {
            list.iter()
                .map(|i| SummaryEntry {
                    id: i.id.clone(),
                    name: i.name.clone(),
                    area: None,
                    nearby: i.nearby.clone(),
                })
                .collect()
        };
        Self {
            spots: catalog
                .spots
                .iter()
                .map(|s| SummaryEntry {
                    id: s.id.clone(),
                    name: s.name.clone(),
                    area: Some(s.area.clone()),
                    nearby: s.nearby.clone(),
                })
                .collect(),
            foods: items(&catalog.foods),
            gifts: items(&catalog.gifts),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BundleIssue {
    pub file: String,
    pub path: String,
    pub message: String,
}

impl BundleIssue {
    fn new(file: &str, path: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            file: file.to_string(),
            path: path.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for BundleIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.path.is_empty() || self.path == "." {
            write!(f, "{}: {}", self.file, self.message)
        } else {
            write!(f, "{} at {}: {}", self.file, self.path, self.message)
        }
    }
}

/// Every problem found while loading a bundle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BundleError {
    pub issues: Vec<BundleIssue>,
}

impl fmt::Display for BundleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid data bundle ({} problem(s))", self.issues.len())?;
        for i in &self.issues {
            write!(f, "\n  {i}")?;
        }
        Ok(())
    }
}

impl std::error::Error for BundleError {}

/// Everything the concierge needs, validated and cross-checked.
#[derive(Debug, Clone)]
pub struct CatalogBundle {
    pub catalog: Catalog,
    pub lexicon: Lexicon,
    pub fv: FvDatabase,
    pub membership: MembershipConfig,
    pub mstn: MstnConfig,
    pub rules_cf: RuleCfConfig,
    /// Non-fatal findings, such as items without a favorite value.
    pub warnings: Vec<String>,
}

/// File names of a bundle directory.
pub const BUNDLE_FILES: [&str; 6] = [
    "catalog.json",
    "lexicon.json",
    "fv.json",
    "membership.json",
    "mstn.json",
    "rules_cf.json",
];

fn read_json<T: DeserializeOwned>(dir: &Path, file: &str, issues: &mut Vec<BundleIssue>) -> Option<T> {
    let path: PathBuf = dir.join(file);
    let text = match fs::read_to_string(&path) {
        Ok(t) => t,
        Err(e) => {
            issues.push(BundleIssue::new(file, "", format!("cannot read {}: {e}", path.display())));
            return None;
        }
    };
    let de = &mut serde_json::Deserializer::from_str(&text);
    match serde_path_to_error::deserialize(de) {
        Ok(v) => Some(v),
        Err(e) => {
            let path = e.path().to_string();
            issues.push(BundleIssue::new(file, path, e.into_inner().to_string()));
            None
        }
    }
}

impl CatalogBundle {
    /// Assembles a bundle from parts, running the same checks as loading.
    pub fn from_parts(
        mut catalog: Catalog,
        mut lexicon: Lexicon,
        fv: FvDatabase,
        membership: MembershipConfig,
        mstn: MstnConfig,
        rules_cf: RuleCfConfig,
    ) -> Result<Self, BundleError> {
        let mut issues = Vec::new();
        let mut warnings = Vec::new();
        catalog.check(&fv, &mut issues, &mut warnings);
        if let Err(e) = membership.validate() {
            issues.push(BundleIssue::new("membership.json", "", e.to_string()));
        }
        if !issues.is_empty() {
            return Err(BundleError { issues });
        }
        register_catalog_nouns(&catalog, &mut lexicon);
        Ok(Self {
            catalog,
            lexicon,
            fv,
            membership,
            mstn,
            rules_cf,
            warnings,
        })
    }
}

/// Makes every catalog id, name and favorite-value term a recognized noun,
/// keeping categories the lexicon already assigns.
fn register_catalog_nouns(catalog: &Catalog, lexicon: &mut Lexicon) {
    let mut add = |term: &str, category: NounCategory| {
        let term = normalize_term(term);
        if lexicon.noun_category(&term).is_none() {
            lexicon.add_noun(&term, category);
        }
    };
    for s in &catalog.spots {
        add(&s.id, NounCategory::Spot);
        add(&s.name, NounCategory::Spot);
    }
    for (kind, list) in [(ItemKind::Food, &catalog.foods), (ItemKind::Gift, &catalog.gifts)] {
        for item in list {
            add(&item.id, kind.category());
            add(&item.name, kind.category());
            add(&item.fv_term, kind.category());
        }
    }
}

/// Loads and validates the six bundle files under `dir`, reporting all
/// problems at once.
pub fn load_bundle(dir: &Path) -> Result<CatalogBundle, BundleError> {
    let mut issues = Vec::new();
    let catalog: Option<Catalog> = read_json(dir, "catalog.json", &mut issues);
    let lexicon: Option<Lexicon> = read_json(dir, "lexicon.json", &mut issues);
    let fv: Option<FvDatabase> = read_json(dir, "fv.json", &mut issues);
    let membership: Option<MembershipConfig> = read_json(dir, "membership.json", &mut issues);
    let mstn: Option<MstnConfig> = read_json(dir, "mstn.json", &mut issues);
    let rules_cf: Option<RuleCfConfig> = read_json(dir, "rules_cf.json", &mut issues);

    let mut warnings = Vec::new();
    if let (Some(mut catalog), Some(fv)) = (catalog.clone(), fv.as_ref()) {
        catalog.check(fv, &mut issues, &mut warnings);
    }
    if let Some(m) = &membership {
        if let Err(e) = m.validate() {
            issues.push(BundleIssue::new("membership.json", "", e.to_string()));
        }
    }
    match (catalog, lexicon, fv, membership, mstn, rules_cf) {
        (Some(c), Some(l), Some(f), Some(m), Some(s), Some(r)) if issues.is_empty() => {
            let mut bundle = CatalogBundle::from_parts(c, l, f, m, s, r)?;
            bundle.warnings = warnings;
            Ok(bundle)
        }
        _ => Err(BundleError { issues }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spot(id: &str, n: usize) -> SpotRecord {
        SpotRecord {
            id: id.into(),
            name: id.replace('_', " "),
            impression: vec![0.5; n],
            area: "central".into(),
            nearby: vec![],
        }
    }

    #[test]
    fn catalog_checks_collect_everything() {
        let mut catalog = Catalog {
            note: None,
            spots: vec![spot("castle", 19), spot("castle", 20)],
            foods: vec![ItemRecord {
                id: "okonomiyaki".into(),
                name: "Okonomiyaki".into(),
                fv_term: " Okonomiyaki ".into(),
                nearby: vec!["nowhere".into()],
            }],
            gifts: vec![],
        };
        let (mut issues, mut warnings) = (Vec::new(), Vec::new());
        catalog.check(&FvDatabase::new(), &mut issues, &mut warnings);
        let paths: Vec<&str> = issues.iter().map(|i| i.path.as_str()).collect();
        assert_eq!(paths, ["spots[0].impression", "spots[1].id", "foods[0].nearby[0]"]);
        assert!(issues[0].message.contains("castle"));
        assert_eq!(catalog.foods[0].fv_term, "okonomiyaki");
        assert_eq!(warnings.len(), 1);
    }

    #[test]
    fn empty_catalog_rejected() {
        let mut catalog = Catalog::default();
        let (mut issues, mut warnings) = (Vec::new(), Vec::new());
        catalog.check(&FvDatabase::new(), &mut issues, &mut warnings);
        assert_eq!(issues.len(), 1);
    }

    #[test]
    fn missing_directory_reports_each_file() {
        let err = load_bundle(Path::new("/nonexistent/bundle")).unwrap_err();
        assert_eq!(err.issues.len(), BUNDLE_FILES.len());
    }
}
