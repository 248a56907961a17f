use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const PLACEHOLDER: &str = "{{TEXT}}";

const ADD_TEMPLATE: &str = include_str!("../../templates/add.txt");
const LIX_TEMPLATE: &str = include_str!("../../templates/lix.txt");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Task {
    Lix,
    Add,
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Task::Lix => "lix",
            Task::Add => "add",
        })
    }
}

impl FromStr for Task {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "lix" => Ok(Task::Lix),
            "add" => Ok(Task::Add),
            other => Err(format!("unknown task `{other}`")),
        }
    }
}

#[derive(Debug, Error)]
pub enum TemplateError {
    #[error("template must contain {PLACEHOLDER} exactly once, found {0}")]
    Placeholder(usize),
    #[error("stimulus text is empty")]
    EmptyStimulus,
    #[error("reading template {path}: {source}")]
    Io { path: String, source: std::io::Error },
}

/// A prompt with a single `{{TEXT}}` slot for the stimulus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PromptTemplate {
    task: Task,
    body: String,
}

impl PromptTemplate {
    pub fn new(task: Task, body: impl Into<String>) -> Result<Self, TemplateError> {
        let body = body.into();
        match body.matches(PLACEHOLDER).count() {
            1 => Ok(Self { task, body }),
            n => Err(TemplateError::Placeholder(n)),
        }
    }

    /// The shipped prompt for `task`.
    pub fn default_for(task: Task) -> Self {
        let body = match task {
            Task::Lix => LIX_TEMPLATE,
            Task::Add => ADD_TEMPLATE,
        };
        Self::new(task, body.trim_end_matches(['\n', '\r'])).expect("shipped template is valid")
    }

    /// Loads a template file; one trailing newline is dropped.
    pub fn load(task: Task, path: &Path) -> Result<Self, TemplateError> {
        let body = std::fs::read_to_string(path)
            .map_err(|source| TemplateError::Io { path: path.display().to_string(), source })?;
        Self::new(task, body.trim_end_matches(['\n', '\r']))
    }

    pub fn task(&self) -> Task {
        self.task
    }

    pub fn body(&self) -> &str {
        &self.body
    }

    pub fn render(&self, stimulus: &str) -> Result<String, TemplateError> {
        if stimulus.trim().is_empty() {
            return Err(TemplateError::EmptyStimulus);
        }
        let (before, after) = self.body.split_once(PLACEHOLDER).expect("validated at construction");
        let mut out = String::with_capacity(before.len() + stimulus.len() + after.len());
        out.push_str(before);
        out.push_str(stimulus);
        out.push_str(after);
        Ok(out)
    }
}
