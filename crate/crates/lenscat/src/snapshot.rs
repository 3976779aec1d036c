//! `LENS1` snapshot files: magic bytes, a version byte, a length-prefixed
//! JSON metadata block, then the coefficient array as little-endian 8-byte
//! float pairs (real, imaginary) in basis order. Round trips are bit-exact.

use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evolution::Formulation;

const MAGIC: &[u8; 5] = b"LENS1";
const VERSION: u8 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SnapshotMeta {
    pub n: usize,
    pub p: f64,
    #[serde(rename = "J")]
    pub clusters: usize,
    #[serde(rename = "M")]
    pub quad: usize,
    pub dt: f64,
    pub tau: f64,
    pub formulation: Formulation,
    pub seed: u64,
}

pub fn write_snapshot(path: &Path, meta: &SnapshotMeta, coeffs: &[Complex64]) -> Result<()> {
    let mut buf = Vec::new();
    buf.extend_from_slice(MAGIC);
    buf.push(VERSION);
    let meta_json = serde_json::to_vec(meta)?;
    buf.extend_from_slice(&(meta_json.len() as u32).to_le_bytes());
    buf.extend_from_slice(&meta_json);
    buf.extend_from_slice(&(coeffs.len() as u64).to_le_bytes());
    for c in coeffs {
        buf.extend_from_slice(&c.re.to_le_bytes());
        buf.extend_from_slice(&c.im.to_le_bytes());
    }
    let mut file = fs::File::create(path)?;
    file.write_all(&buf)?;
    Ok(())
}

pub fn read_snapshot(path: &Path) -> Result<(SnapshotMeta, Vec<Complex64>)> {
    let mut bytes = Vec::new();
    fs::File::open(path)?.read_to_end(&mut bytes)?;
    parse_snapshot(&bytes)
}

pub fn parse_snapshot(bytes: &[u8]) -> Result<(SnapshotMeta, Vec<Complex64>)> {
    let need = |n: usize| -> Result<()> {
        if bytes.len() < n {
            Err(Error::SnapshotFormat(format!(
                "truncated: need {n} bytes, have {}",
                bytes.len()
            )))
        } else {
            Ok(())
        }
    };
    need(6)?;
    if &bytes[..5] != MAGIC {
        return Err(Error::SnapshotFormat("bad magic".into()));
    }
    if bytes[5] != VERSION {
        return Err(Error::SnapshotFormat(format!(
            "unsupported version {}",
            bytes[5]
        )));
    }
    need(10)?;
    let meta_len = u32::from_le_bytes(bytes[6..10].try_into().unwrap()) as usize;
    need(10 + meta_len + 8)?;
    let meta: SnapshotMeta = serde_json::from_slice(&bytes[10..10 + meta_len])?;
    let mut off = 10 + meta_len;
    let count = u64::from_le_bytes(bytes[off..off + 8].try_into().unwrap()) as usize;
    off += 8;
    need(off + 16 * count)?;
    let mut coeffs = Vec::with_capacity(count);
    for k in 0..count {
        let base = off + 16 * k;
        let re = f64::from_le_bytes(bytes[base..base + 8].try_into().unwrap());
        let im = f64::from_le_bytes(bytes[base + 8..base + 16].try_into().unwrap());
        coeffs.push(Complex64::new(re, im));
    }
    Ok((meta, coeffs))
}
