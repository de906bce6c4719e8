#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::{json, Value};

pub struct Workspace {
    dir: tempfile::TempDir,
}

impl Workspace {
    pub fn new() -> Self {
        Workspace {
            dir: tempfile::tempdir().unwrap(),
        }
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    pub fn write(&self, name: &str, value: &Value) -> PathBuf {
        let p = self.path(name);
        std::fs::write(&p, serde_json::to_string_pretty(value).unwrap()).unwrap();
        p
    }

    pub fn write_text(&self, name: &str, text: &str) -> PathBuf {
        let p = self.path(name);
        std::fs::write(&p, text).unwrap();
        p
    }
}

pub fn cut_language() -> Value {
    json!({"domain": 2, "functions": [{"name": "cut", "arity": 2, "table": ["0", "1", "1", "0"]}]})
}

pub fn eq_language() -> Value {
    json!({"domain": 2, "functions": [{"name": "eq", "arity": 2, "table": ["1", "0", "0", "1"]}]})
}

/// `½ χ_min + ½ χ_max` on two labels.
pub fn min_max_seed() -> Value {
    json!({"arity_in": 2, "arity_out": 1, "support": [
        {"weight": "1/2", "maps": [[0, 0, 0, 1]]},
        {"weight": "1/2", "maps": [[0, 1, 1, 1]]}
    ]})
}

pub fn eq_triangle() -> Value {
    json!({"nodes": 3, "terms": [
        {"function": "eq", "scope": [0, 1]},
        {"function": "eq", "scope": [1, 2]},
        {"function": "eq", "scope": [0, 2]}
    ]})
}

pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn vcsp(args: &[&dyn AsRef<std::ffi::OsStr>]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_vcsp"))
        .args(args.iter().map(|a| a.as_ref()))
        .output()
        .unwrap();
    Run {
        code: out.status.code().unwrap(),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

pub fn read(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}
