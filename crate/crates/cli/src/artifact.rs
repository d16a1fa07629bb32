//! Certificate envelope, content hashing and the artifact store that gates
//! downstream commands on upstream results.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};
use thinlat::rep;
use thinlat::tracecert::Verdict;

use crate::CliError;

pub const SCHEMA: &str = "thinlat.certificate/1";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub verdict: Verdict,
    pub detail: String,
}

impl Check {
    pub fn new(name: &str, ok: bool, detail: impl Into<String>) -> Self {
        Check { name: name.into(), verdict: Verdict::from_bool(ok), detail: detail.into() }
    }
}

/// What produced a certificate. Artifacts from another engine are stale.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Engine {
    pub version: String,
    pub toolchain: String,
    /// Hash of the generator images of both families.
    pub fingerprint: String,
}

impl Engine {
    pub fn current() -> Self {
        let mut h = Sha256::new();
        let (rho, phi) = (rep::rho(), rep::phi());
        let (rx, ry) = rho.generators();
        let (px, py) = phi.generators();
        for m in [rx, ry] {
            h.update(format!("{:?}", m.display_var("v")));
        }
        for m in [px, py] {
            h.update(format!("{:?}", m.display_var("t")));
        }
        Engine {
            version: env!("CARGO_PKG_VERSION").into(),
            toolchain: env!("THINLAT_RUSTC_VERSION").into(),
            fingerprint: hex::encode(h.finalize()),
        }
    }
}

/// Everything that must be reproducible; hashed as compact JSON.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Body {
    pub schema: String,
    pub command: String,
    pub inputs: Value,
    pub engine: Engine,
    /// Content hashes of the upstream certificates this run relied on.
    pub upstream: BTreeMap<String, String>,
    pub checks: Vec<Check>,
    pub witnesses: Value,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Timing {
    pub wall_clock_ms: u128,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Certificate {
    #[serde(flatten)]
    pub body: Body,
    pub body_sha256: String,
    pub timing: Timing,
}

pub fn body_hash(body: &Body) -> String {
    let bytes = serde_json::to_vec(body).expect("serializable body");
    hex::encode(Sha256::digest(bytes))
}

impl Certificate {
    pub fn seal(
        command: &str,
        inputs: Value,
        upstream: BTreeMap<String, String>,
        checks: Vec<Check>,
        witnesses: Value,
        wall_clock_ms: u128,
    ) -> Self {
        let verdict = Verdict::from_bool(checks.iter().all(|c| c.verdict.passed()));
        let body = Body {
            schema: SCHEMA.into(),
            command: command.into(),
            inputs,
            engine: Engine::current(),
            upstream,
            checks,
            witnesses,
            verdict,
        };
        let body_sha256 = body_hash(&body);
        Certificate { body, body_sha256, timing: Timing { wall_clock_ms } }
    }

    pub fn passed(&self) -> bool {
        self.body.verdict.passed()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable certificate") + "\n"
    }
}

/// Directory of certificates named after the command and its inputs.
pub struct Store {
    dir: PathBuf,
}

impl Store {
    pub fn new(dir: &Path) -> Self {
        Store { dir: dir.to_path_buf() }
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.dir.join(format!("{name}.json"))
    }

    pub fn write(&self, name: &str, cert: &Certificate) -> Result<(), CliError> {
        std::fs::create_dir_all(&self.dir).map_err(|e| CliError::io(&self.dir, e))?;
        let path = self.path(name);
        std::fs::write(&path, cert.to_json()).map_err(|e| CliError::io(&path, e))
    }

    /// Reads a certificate and checks its hash and engine, without looking
    /// at the verdict.
    pub fn read(&self, name: &str) -> Result<Certificate, CliError> {
        let path = self.path(name);
        let text = std::fs::read_to_string(&path).map_err(|_| {
            CliError::Gate(format!("missing upstream artifact {}; run `{name}` first", path.display()))
        })?;
        let cert: Certificate = serde_json::from_str(&text)
            .map_err(|e| CliError::Gate(format!("unreadable artifact {}: {e}", path.display())))?;
        if cert.body.schema != SCHEMA {
            return Err(CliError::Gate(format!("{} has schema {}", path.display(), cert.body.schema)));
        }
        if body_hash(&cert.body) != cert.body_sha256 {
            return Err(CliError::Gate(format!("{} was modified after sealing", path.display())));
        }
        if cert.body.engine != Engine::current() {
            return Err(CliError::Gate(format!(
                "{} is stale: produced by another engine; rerun `{name}`",
                path.display()
            )));
        }
        Ok(cert)
    }

    /// A valid, passing upstream certificate; returns its content hash.
    pub fn require(&self, name: &str) -> Result<(Certificate, String), CliError> {
        let cert = self.read(name)?;
        if !cert.passed() {
            return Err(CliError::Gate(format!("upstream `{name}` did not pass")));
        }
        let hash = cert.body_sha256.clone();
        Ok((cert, hash))
    }

    /// All certificates in the directory, by file stem, sorted.
    pub fn list(&self) -> Vec<String> {
        let Ok(entries) = std::fs::read_dir(&self.dir) else {
            return Vec::new();
        };
        let mut names: Vec<String> = entries
            .filter_map(|e| e.ok())
            .filter_map(|e| {
                let p = e.path();
                (p.extension()? == "json").then(|| p.file_stem()?.to_str().map(String::from))?
            })
            .collect();
        names.sort();
        names
    }
}
