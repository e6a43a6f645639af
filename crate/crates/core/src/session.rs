//! Per-session dialog state and its on-disk store.
//!
//! Each session is a JSON snapshot `<id>.json` next to an append-only turn
//! log `<id>.log.jsonl`.

use std::fs::{self, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::egc::EmotionResult;
use crate::emotion_state::{EmotionProfile, MentalState};
use crate::parser::CaseRoute;
use crate::rules::{Recommendation, TabooList};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TurnRecord {
    pub utterance: String,
    pub case_route: CaseRoute,
    pub emotion: EmotionResult,
    pub recommendations: Vec<Recommendation>,
    pub fired_rules: Vec<String>,
    pub reply: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SessionState {
    pub session_id: String,
    #[serde(default)]
    pub person_id: Option<String>,
    pub profile: EmotionProfile,
    pub mood: MentalState,
    pub taboo: TabooList,
    pub history: Vec<TurnRecord>,
    pub last_recommendations: Vec<Recommendation>,
}

impl SessionState {
    pub fn new(session_id: impl Into<String>, person_id: Option<String>, mood: MentalState) -> Self {
        Self {
            session_id: session_id.into(),
            person_id,
            profile: EmotionProfile::default(),
            mood,
            taboo: TabooList::new(),
            history: Vec::new(),
            last_recommendations: Vec::new(),
        }
    }
}

pub fn new_session_id() -> String {
    uuid::Uuid::new_v4().simple().to_string()
}

#[derive(Debug, Error)]
pub enum StoreError {
    #[error("session `{0}` not found")]
    NotFound(String),
    #[error("invalid session id `{0}`")]
    InvalidId(String),
    #[error("session `{id}` is corrupted: {message}")]
    Integrity { id: String, message: String },
    #[error("session store i/o on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> StoreError + '_ {
    move |source| StoreError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Directory of session snapshots and turn logs.
#[derive(Debug, Clone)]
pub struct SessionStore {
    dir: PathBuf,
}

const SNAPSHOT_EXT: &str = ".json";
const LOG_EXT: &str = ".log.jsonl";

impl SessionStore {
    pub fn open(dir: impl Into<PathBuf>) -> Result<Self, StoreError> {
        let dir = dir.into();
        fs::create_dir_all(&dir).map_err(io_err(&dir))?;
        Ok(Self { dir })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn check_id(id: &str) -> Result<(), StoreError> {
        let ok = !id.is_empty() && id.chars().all(|c| c.is_ascii_alphanumeric() || c == '-' || c == '_');
        if ok {
            Ok(())
        } else {
            Err(StoreError::InvalidId(id.to_string()))
        }
    }

    fn snapshot_path(&self, id: &str) -> PathBuf {
        self.dir.join(format!("{id}{SNAPSHOT_EXT}"))
    }

    fn log_path(&self, id: &str) -> PathBuf {
        self.dir.join(format!("{id}{LOG_EXT}"))
    }

    /// Writes the snapshot and appends any turns the log does not have yet.
    pub fn save(&self, state: &SessionState) -> Result<(), StoreError> {
        let id = &state.session_id;
        Self::check_id(id)?;
        let logged = self.log_len(id)?;
        if logged < state.history.len() {
            let path = self.log_path(id);
            let mut log = OpenOptions::new()
                .create(true)
                .append(true)
                .open(&path)
                .map_err(io_err(&path))?;
            for turn in &state.history[logged..] {
                let line = serde_json::to_string(turn).expect("turn records serialize");
                writeln!(log, "{line}").map_err(io_err(&path))?;
            }
        }
        let path = self.snapshot_path(id);
        let tmp = self.dir.join(format!(".{id}{SNAPSHOT_EXT}.tmp"));
        let text = serde_json::to_string_pretty(state).expect("session state serializes");
        fs::write(&tmp, text).map_err(io_err(&tmp))?;
        fs::rename(&tmp, &path).map_err(io_err(&path))
    }

    pub fn load(&self, id: &str) -> Result<SessionState, StoreError> {
        Self::check_id(id)?;
        let path = self.snapshot_path(id);
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Err(StoreError::NotFound(id.into())),
            Err(e) => return Err(io_err(&path)(e)),
        };
        let state: SessionState = serde_json::from_str(&text).map_err(|e| StoreError::Integrity {
            id: id.into(),
            message: e.to_string(),
        })?;
        if state.session_id != id {
            return Err(StoreError::Integrity {
                id: id.into(),
                message: format!("snapshot belongs to `{}`", state.session_id),
            });
        }
        Ok(state)
    }

    fn log_len(&self, id: &str) -> Result<usize, StoreError> {
        let path = self.log_path(id);
        match fs::File::open(&path) {
            Ok(f) => Ok(BufReader::new(f).lines().map_while(Result::ok).filter(|l| !l.trim().is_empty()).count()),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(0),
            Err(e) => Err(io_err(&path)(e)),
        }
    }

    /// Turns recorded in the append-only log.
    pub fn read_log(&self, id: &str) -> Result<Vec<TurnRecord>, StoreError> {
        Self::check_id(id)?;
        let path = self.log_path(id);
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => {
                return if self.snapshot_path(id).exists() {
                    Ok(Vec::new())
                } else {
                    Err(StoreError::NotFound(id.into()))
                };
            }
            Err(e) => return Err(io_err(&path)(e)),
        };
        text.lines()
            .filter(|l| !l.trim().is_empty())
            .enumerate()
            .map(|(i, l)| {
                serde_json::from_str(l).map_err(|e| StoreError::Integrity {
                    id: id.into(),
                    message: format!("log line {}: {e}", i + 1),
                })
            })
            .collect()
    }

    /// Session ids with a snapshot, sorted.
    pub fn list(&self) -> Result<Vec<String>, StoreError> {
        let mut ids = Vec::new();
        for entry in fs::read_dir(&self.dir).map_err(io_err(&self.dir))? {
            let entry = entry.map_err(io_err(&self.dir))?;
            let name = entry.file_name().to_string_lossy().into_owned();
            if name.starts_with('.') || name.ends_with(LOG_EXT) {
                continue;
            }
            if let Some(id) = name.strip_suffix(SNAPSHOT_EXT) {
                ids.push(id.to_string());
            }
        }
        ids.sort();
        Ok(ids)
    }

    pub fn delete(&self, id: &str) -> Result<(), StoreError> {
        Self::check_id(id)?;
        let snapshot = self.snapshot_path(id);
        match fs::remove_file(&snapshot) {
            Ok(()) => {}
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Err(StoreError::NotFound(id.into())),
            Err(e) => return Err(io_err(&snapshot)(e)),
        }
        let log = self.log_path(id);
        match fs::remove_file(&log) {
            Err(e) if e.kind() != std::io::ErrorKind::NotFound => Err(io_err(&log)(e)),
            _ => Ok(()),
        }
    }
}
