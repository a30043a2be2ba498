//! Model checkpoints: a versioned binary weight blob plus a JSON sidecar
//! of hyperparameters.
//!
//! Binary layout, all integers little-endian:
//!
//! ```text
//! offset  size  field
//! 0       8     magic, b"GMCHKPT1"
//! 8       4     format version (u32, currently 1)
//! 12      1     arch tag (u8: 0 gcn, 1 gat, 2 sage, 3 gin)
//! 13      4     feature_dim (u32)
//! 17      4     hidden_dim (u32)
//! 21      4     class_count (u32)
//! 25      4     block count (u32)
//! then per block:
//!         4     name length (u32), followed by that many UTF-8 bytes
//!         4     rows (u32)
//!         4     cols (u32)
//!         8*r*c row-major f64 values (little-endian bits)
//! ```
//!
//! The sidecar is written next to the blob with the extension swapped to
//! `.json` and mirrors the header fields plus any training configuration.

use super::{Arch, GnnModel, TrainConfig};
use crate::error::{Error, Result};
use crate::tensor::Matrix;
use serde::{Deserialize, Serialize};
use std::io::{Read, Write};
use std::path::Path;

const MAGIC: &[u8; 8] = b"GMCHKPT1";
const VERSION: u32 = 1;

/// Sidecar contents.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckpointMeta {
    pub format_version: u32,
    pub arch: String,
    pub feature_dim: usize,
    pub hidden_dim: usize,
    pub class_count: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub train: Option<TrainConfig>,
}

fn arch_tag(arch: Arch) -> u8 {
    match arch {
        Arch::Gcn => 0,
        Arch::Gat => 1,
        Arch::Sage => 2,
        Arch::Gin => 3,
    }
}

fn arch_from_tag(tag: u8) -> Result<Arch> {
    match tag {
        0 => Ok(Arch::Gcn),
        1 => Ok(Arch::Gat),
        2 => Ok(Arch::Sage),
        3 => Ok(Arch::Gin),
        other => Err(Error::Checkpoint(format!("unknown arch tag {other}"))),
    }
}

/// Write `<path>` (binary weights) and `<path with .json>` (sidecar).
pub fn save_checkpoint(model: &GnnModel, path: &Path, train: Option<&TrainConfig>) -> Result<()> {
    let mut buf: Vec<u8> = Vec::new();
    buf.extend_from_slice(MAGIC);
    buf.extend_from_slice(&VERSION.to_le_bytes());
    buf.push(arch_tag(model.arch()));
    for v in [
        model.feature_dim() as u32,
        model.hidden_dim() as u32,
        model.class_count() as u32,
        model.param_blocks().len() as u32,
    ] {
        buf.extend_from_slice(&v.to_le_bytes());
    }
    for (name, block) in model.param_blocks() {
        buf.extend_from_slice(&(name.len() as u32).to_le_bytes());
        buf.extend_from_slice(name.as_bytes());
        buf.extend_from_slice(&(block.rows() as u32).to_le_bytes());
        buf.extend_from_slice(&(block.cols() as u32).to_le_bytes());
        for v in block.data() {
            buf.extend_from_slice(&v.to_le_bytes());
        }
    }
    let mut f = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    f.write_all(&buf).map_err(|e| Error::io(path, e))?;

    let meta = CheckpointMeta {
        format_version: VERSION,
        arch: model.arch().to_string(),
        feature_dim: model.feature_dim(),
        hidden_dim: model.hidden_dim(),
        class_count: model.class_count(),
        train: train.cloned(),
    };
    let sidecar = path.with_extension("json");
    std::fs::write(&sidecar, serde_json::to_vec_pretty(&meta)?)
        .map_err(|e| Error::io(&sidecar, e))
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        if self.pos + n > self.bytes.len() {
            return Err(Error::Checkpoint("truncated checkpoint".to_string()));
        }
        let s = &self.bytes[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn u8(&mut self) -> Result<u8> {
        Ok(self.take(1)?[0])
    }
}

/// Read a checkpoint written by [`save_checkpoint`].
pub fn load_checkpoint(path: &Path) -> Result<GnnModel> {
    let mut bytes = Vec::new();
    std::fs::File::open(path)
        .and_then(|mut f| f.read_to_end(&mut bytes))
        .map_err(|e| {
            if e.kind() == std::io::ErrorKind::NotFound {
                Error::FileMissing { path: path.into() }
            } else {
                Error::io(path, e)
            }
        })?;
    let mut r = Reader {
        bytes: &bytes,
        pos: 0,
    };
    if r.take(8)? != MAGIC {
        return Err(Error::Checkpoint("bad magic".to_string()));
    }
    let version = r.u32()?;
    if version != VERSION {
        return Err(Error::Checkpoint(format!(
            "unsupported version {version}, expected {VERSION}"
        )));
    }
    let arch = arch_from_tag(r.u8()?)?;
    let feature_dim = r.u32()? as usize;
    let hidden_dim = r.u32()? as usize;
    let class_count = r.u32()? as usize;
    let block_count = r.u32()? as usize;

    let mut blocks = Vec::with_capacity(block_count);
    for _ in 0..block_count {
        let name_len = r.u32()? as usize;
        let _name = std::str::from_utf8(r.take(name_len)?)
            .map_err(|_| Error::Checkpoint("block name is not UTF-8".to_string()))?;
        let rows = r.u32()? as usize;
        let cols = r.u32()? as usize;
        let raw = r.take(8 * rows * cols)?;
        let data: Vec<f64> = raw
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
            .collect();
        blocks.push(Matrix::from_vec(rows, cols, data)?);
    }
    if r.pos != bytes.len() {
        return Err(Error::Checkpoint("trailing bytes".to_string()));
    }
    GnnModel::from_parts(arch, feature_dim, hidden_dim, class_count, blocks)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn save_load_round_trip_every_arch() {
        let dir = tempfile::tempdir().unwrap();
        for (i, arch) in Arch::ALL.iter().enumerate() {
            let model = GnnModel::init(*arch, 7, 3, 6, 99 + i as u64);
            let path = dir.path().join(format!("{arch}.bin"));
            save_checkpoint(&model, &path, Some(&TrainConfig::default())).unwrap();
            let loaded = load_checkpoint(&path).unwrap();
            assert_eq!(model, loaded);
            let sidecar: CheckpointMeta =
                serde_json::from_slice(&std::fs::read(path.with_extension("json")).unwrap())
                    .unwrap();
            assert_eq!(sidecar.arch, arch.to_string());
            assert_eq!(sidecar.feature_dim, 7);
        }
    }

    #[test]
    fn corrupt_magic_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.bin");
        std::fs::write(&path, b"NOTAMODEL").unwrap();
        assert!(matches!(
            load_checkpoint(&path),
            Err(Error::Checkpoint(_))
        ));
    }

    #[test]
    fn missing_checkpoint_is_file_missing() {
        assert!(matches!(
            load_checkpoint(Path::new("/nonexistent/model.bin")),
            Err(Error::FileMissing { .. })
        ));
    }
}
