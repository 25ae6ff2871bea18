//! Append-only JSONL catalog of certificates.
//!
//! One record per line; records are certificates plus a unix timestamp. The
//! certificate part is byte-deterministic, the timestamp is bookkeeping.

use std::fs::OpenOptions;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::group::{AbelianGroup, GroupElement};
use crate::lattice::Lattice;
use crate::search::{verify_certificate, CertKind, Certificate};
use crate::shapes::ShapeSpec;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogRecord {
    pub kind: CertKind,
    pub h: u32,
    pub n: usize,
    pub value: i128,
    pub shape: ShapeSpec,
    pub lattice: Lattice,
    pub group: AbelianGroup,
    pub set: Vec<GroupElement>,
    pub verified: bool,
    pub timestamp: u64,
}

impl CatalogRecord {
    pub fn new(cert: &Certificate, timestamp: u64) -> Self {
        CatalogRecord {
            kind: cert.kind,
            h: cert.h,
            n: cert.n,
            value: cert.value,
            shape: cert.shape,
            lattice: cert.lattice.clone(),
            group: cert.group.clone(),
            set: cert.set.clone(),
            verified: cert.verified,
            timestamp,
        }
    }

    pub fn certificate(&self) -> Certificate {
        Certificate {
            kind: self.kind,
            h: self.h,
            n: self.n,
            value: self.value,
            shape: self.shape,
            lattice: self.lattice.clone(),
            group: self.group.clone(),
            set: self.set.clone(),
            verified: self.verified,
        }
    }
}

fn now() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
}

/// Append one certificate to a JSONL catalog, creating the file if needed.
pub fn append(path: &Path, cert: &Certificate) -> Result<()> {
    let record = CatalogRecord::new(cert, now());
    let mut file = OpenOptions::new().create(true).append(true).open(path)?;
    writeln!(file, "{}", serde_json::to_string(&record)?)?;
    Ok(())
}

/// All records of a JSONL catalog; empty when the file does not exist.
pub fn read(path: &Path) -> Result<Vec<CatalogRecord>> {
    if !path.exists() {
        return Ok(Vec::new());
    }
    let reader = BufReader::new(std::fs::File::open(path)?);
    let mut out = Vec::new();
    for line in reader.lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(serde_json::from_str(&line)?);
    }
    Ok(out)
}

/// Re-verify every certificate in a catalog; returns (index, ok) pairs.
pub fn verify_all(path: &Path) -> Result<Vec<(usize, bool)>> {
    read(path)?
        .iter()
        .enumerate()
        .map(|(i, r)| Ok((i, verify_certificate(&r.certificate())?)))
        .collect()
}
