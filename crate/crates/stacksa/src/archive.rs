//! Model archives.
//!
//! Layout: a `STACKSA-ARCHIVE <version>` line, one line of JSON metadata,
//! then the bincode payload (fixed-width little-endian numbers). The
//! metadata carries the payload length and its SHA-256.

use std::path::Path;

use serde::{de::DeserializeOwned, Deserialize, Serialize};
use sha2::{Digest, Sha256};
use stacksa_core::models::FirstStageModel;
use stacksa_core::stacker::StackedModel;

use crate::error::{Error, Result};
use crate::io;
use crate::spec::PipelineSpec;

pub const MAGIC: &str = "STACKSA-ARCHIVE";
pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Content {
    StackedModel,
    FirstStageModel,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArchiveMeta {
    pub format_version: u32,
    pub writer: String,
    pub content: Content,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spec: Option<PipelineSpec>,
    /// Member kinds in order.
    pub members: Vec<String>,
    pub classes: Vec<String>,
    /// Width of the second-stage input (members × classes).
    pub feature_width: usize,
    pub payload_bytes: usize,
    /// Hex SHA-256 of the payload.
    pub checksum: String,
}

fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

fn encode<T: Serialize>(value: &T, mut meta: ArchiveMeta) -> Vec<u8> {
    let payload = bincode::serialize(value).expect("models serialize");
    meta.payload_bytes = payload.len();
    meta.checksum = sha256_hex(&payload);
    let mut out = format!("{MAGIC} {FORMAT_VERSION}\n").into_bytes();
    out.extend(serde_json::to_vec(&meta).expect("metadata serializes"));
    out.push(b'\n');
    out.extend(payload);
    out
}

fn split_line(bytes: &[u8]) -> Result<(&[u8], &[u8])> {
    let nl = bytes.iter().position(|&b| b == b'\n').ok_or_else(|| Error::Archive("truncated archive".into()))?;
    Ok((&bytes[..nl], &bytes[nl + 1..]))
}

/// Parses and checks header and metadata; returns the verified payload.
pub fn read_meta(bytes: &[u8]) -> Result<(ArchiveMeta, &[u8])> {
    let (header, rest) = split_line(bytes)?;
    let header = std::str::from_utf8(header).map_err(|_| Error::Archive("not a stacksa archive".into()))?;
    let version = header
        .strip_prefix(MAGIC)
        .and_then(|v| v.trim().parse::<u32>().ok())
        .ok_or_else(|| Error::Archive("not a stacksa archive".into()))?;
    if version != FORMAT_VERSION {
        return Err(Error::Archive(format!("unsupported archive version {version} (this build reads {FORMAT_VERSION})")));
    }
    let (meta, payload) = split_line(rest)?;
    let meta: ArchiveMeta = serde_json::from_slice(meta).map_err(|e| Error::Archive(format!("bad metadata: {e}")))?;
    if meta.format_version != FORMAT_VERSION {
        return Err(Error::Archive(format!("unsupported archive version {}", meta.format_version)));
    }
    if payload.len() != meta.payload_bytes {
        return Err(Error::Archive(format!("payload is {} bytes, expected {}", payload.len(), meta.payload_bytes)));
    }
    if sha256_hex(payload) != meta.checksum {
        return Err(Error::Archive("checksum mismatch".into()));
    }
    Ok((meta, payload))
}

fn decode<T: DeserializeOwned>(bytes: &[u8], content: Content) -> Result<(ArchiveMeta, T)> {
    let (meta, payload) = read_meta(bytes)?;
    if meta.content != content {
        return Err(Error::Archive(format!("archive holds {:?}, expected {content:?}", meta.content)));
    }
    let value = bincode::deserialize(payload).map_err(|e| Error::Archive(format!("bad payload: {e}")))?;
    Ok((meta, value))
}

fn blank_meta(content: Content) -> ArchiveMeta {
    ArchiveMeta {
        format_version: FORMAT_VERSION,
        writer: format!("stacksa {}", env!("CARGO_PKG_VERSION")),
        content,
        spec: None,
        members: Vec::new(),
        classes: Vec::new(),
        feature_width: 0,
        payload_bytes: 0,
        checksum: String::new(),
    }
}

pub fn encode_stacked(model: &StackedModel, spec: Option<&PipelineSpec>) -> Vec<u8> {
    let meta = ArchiveMeta {
        spec: spec.cloned(),
        members: model.member_kinds().iter().map(|k| k.name().to_string()).collect(),
        classes: model.classes().to_vec(),
        feature_width: model.feature_width(),
        ..blank_meta(Content::StackedModel)
    };
    encode(model, meta)
}

pub fn decode_stacked(bytes: &[u8]) -> Result<(ArchiveMeta, StackedModel)> {
    decode(bytes, Content::StackedModel)
}

pub fn encode_first_stage(model: &FirstStageModel) -> Vec<u8> {
    let meta = ArchiveMeta {
        members: vec![model.kind().name().to_string()],
        classes: model.output_classes().map(<[String]>::to_vec).unwrap_or_default(),
        feature_width: model.output_dim(),
        ..blank_meta(Content::FirstStageModel)
    };
    encode(model, meta)
}

pub fn decode_first_stage(bytes: &[u8]) -> Result<(ArchiveMeta, FirstStageModel)> {
    decode(bytes, Content::FirstStageModel)
}

fn read(path: &Path) -> Result<Vec<u8>> {
    std::fs::read(path).map_err(|e| Error::io(path, e))
}

pub fn save_stacked(path: &Path, model: &StackedModel, spec: Option<&PipelineSpec>) -> Result<ArchiveMeta> {
    let bytes = encode_stacked(model, spec);
    io::write_atomic(path, &bytes)?;
    Ok(read_meta(&bytes)?.0)
}

pub fn load_stacked(path: &Path) -> Result<(ArchiveMeta, StackedModel)> {
    decode_stacked(&read(path)?).map_err(|e| match e {
        Error::Archive(m) => Error::Archive(format!("{}: {m}", path.display())),
        other => other,
    })
}

pub fn save_first_stage(path: &Path, model: &FirstStageModel) -> Result<ArchiveMeta> {
    let bytes = encode_first_stage(model);
    io::write_atomic(path, &bytes)?;
    Ok(read_meta(&bytes)?.0)
}

pub fn load_first_stage(path: &Path) -> Result<(ArchiveMeta, FirstStageModel)> {
    decode_first_stage(&read(path)?)
}
