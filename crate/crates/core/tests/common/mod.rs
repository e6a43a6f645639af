#![allow(dead_code)]

use std::path::PathBuf;

use concierge_core::{load_bundle, CatalogBundle, Concierge};

pub fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

pub fn bundle() -> CatalogBundle {
    load_bundle(&data_dir()).expect("sample bundle loads")
}

pub fn concierge() -> Concierge {
    Concierge::new(bundle()).unwrap()
}
