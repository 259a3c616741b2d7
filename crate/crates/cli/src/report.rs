//! Input hashing and the JSON/text report envelope.

use std::io::Read;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

#[derive(Clone, Debug, Serialize)]
pub struct InputRecord {
    pub path: String,
    pub sha256: String,
}

/// A file read from disk (or `-` for stdin), with the directory used to resolve relative references.
pub struct Loaded {
    pub text: String,
    pub base_dir: Option<PathBuf>,
}

#[derive(Default)]
pub struct Inputs {
    records: Vec<InputRecord>,
}

impl Inputs {
    pub fn read(&mut self, path: &str) -> Result<Loaded> {
        let (text, base_dir) = if path == "-" {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).context("reading stdin")?;
            (s, None)
        } else {
            let p = Path::new(path);
            let s = std::fs::read_to_string(p).with_context(|| format!("reading {path}"))?;
            (s, p.parent().map(Path::to_path_buf))
        };
        self.records.push(InputRecord {
            path: path.to_string(),
            sha256: hex::encode(Sha256::digest(text.as_bytes())),
        });
        Ok(Loaded { text, base_dir })
    }

    pub fn records(&self) -> &[InputRecord] {
        &self.records
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Verdict {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Pass => 0,
            Verdict::Fail => 1,
        }
    }
}

pub struct Report {
    pub verdict: Verdict,
    pub result: Value,
    pub text: Vec<String>,
}

impl Report {
    pub fn new(verdict: Verdict, result: impl Serialize, text: Vec<String>) -> Result<Report> {
        Ok(Report {
            verdict,
            result: serde_json::to_value(result)?,
            text,
        })
    }
}

/// What a command produces: a verdict report, or a bare document meant for piping.
pub enum Output {
    Report(Report),
    Document(String),
}

#[derive(Serialize)]
struct Envelope<'a> {
    command: &'a str,
    version: &'a str,
    inputs: &'a [InputRecord],
    verdict: Verdict,
    result: &'a Value,
}

pub fn render_json(command: &str, inputs: &Inputs, report: &Report) -> String {
    let env = Envelope {
        command,
        version: lyat_core::VERSION,
        inputs: inputs.records(),
        verdict: report.verdict,
        result: &report.result,
    };
    lyat_core::io::to_pretty(&env)
}

pub fn render_text(report: &Report) -> String {
    let mut s = report.text.join("\n");
    s.push('\n');
    s
}
