//! Run manifests: every CLI output embeds the subcommand, its resolved
//! parameters, the seed and the artifact version, so any output can be
//! replayed byte-for-byte. Timestamps are carried for provenance but stay
//! outside the reproducibility hash (and outside CSV files entirely).

use std::collections::BTreeMap;

use serde::Serialize;
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub subcommand: String,
    /// Resolved parameters, sorted by key for canonical output.
    pub parameters: BTreeMap<String, String>,
    pub seed: u64,
    pub artifact_version: String,
    /// ISO-8601; excluded from `repro_hash` and from CSV headers.
    pub timestamp: String,
    /// SHA-256 over (subcommand, parameters, seed, artifact_version).
    pub repro_hash: String,
}

impl RunManifest {
    pub fn new(subcommand: &str, parameters: BTreeMap<String, String>, seed: u64) -> Self {
        let artifact_version = env!("CARGO_PKG_VERSION").to_string();
        let repro_hash = hash_of(subcommand, &parameters, seed, &artifact_version);
        RunManifest {
            subcommand: subcommand.to_string(),
            parameters,
            seed,
            artifact_version,
            timestamp: chrono::Utc::now().to_rfc3339(),
            repro_hash,
        }
    }

    /// Canonical JSON without the timestamp, as embedded in CSV headers.
    pub fn csv_header_json(&self) -> String {
        #[derive(Serialize)]
        struct SansTimestamp<'a> {
            subcommand: &'a str,
            parameters: &'a BTreeMap<String, String>,
            seed: u64,
            artifact_version: &'a str,
            repro_hash: &'a str,
        }
        serde_json::to_string(&SansTimestamp {
            subcommand: &self.subcommand,
            parameters: &self.parameters,
            seed: self.seed,
            artifact_version: &self.artifact_version,
            repro_hash: &self.repro_hash,
        })
        .expect("manifest serialises")
    }
}

fn hash_of(
    subcommand: &str,
    parameters: &BTreeMap<String, String>,
    seed: u64,
    version: &str,
) -> String {
    let mut hasher = Sha256::new();
    hasher.update(subcommand.as_bytes());
    hasher.update([0u8]);
    for (k, v) in parameters {
        hasher.update(k.as_bytes());
        hasher.update([1u8]);
        hasher.update(v.as_bytes());
        hasher.update([2u8]);
    }
    hasher.update(seed.to_le_bytes());
    hasher.update(version.as_bytes());
    let digest = hasher.finalize();
    digest.iter().map(|b| format!("{b:02x}")).collect()
}
