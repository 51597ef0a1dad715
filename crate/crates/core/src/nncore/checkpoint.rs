//! Versioned binary checkpoints. Little-endian layout:
//! magic "MSPMCKPT", format version, topology digest, training metadata,
//! then per-parameter shape + raw float64 payload, with optional optimizer
//! state. Loading verifies the topology digest before accepting parameters,
//! so a checkpoint can only be restored into a structurally identical graph.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use sha2::{Digest, Sha256};

use super::adam::AdamState;
use super::graph::NetworkGraph;
use super::tensor::Tensor;
use crate::error::{Error, Result};

const MAGIC: &[u8; 8] = b"MSPMCKPT";
const VERSION: u32 = 1;

/// Training metadata carried alongside the parameters.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CheckpointMeta {
    pub seed: u64,
    pub epoch: u64,
}

/// A loaded checkpoint: parameters plus optional optimizer state.
#[derive(Debug, Clone)]
pub struct Checkpoint {
    pub version: u32,
    pub digest: [u8; 32],
    pub meta: CheckpointMeta,
    pub params: Vec<Tensor>,
    pub optimizer: Option<AdamState>,
}

pub fn topology_digest(graph: &NetworkGraph) -> [u8; 32] {
    let mut hasher = Sha256::new();
    hasher.update(graph.topology().as_bytes());
    hasher.finalize().into()
}

fn write_tensor(w: &mut impl Write, t: &Tensor) -> std::io::Result<()> {
    w.write_all(&(t.shape().len() as u32).to_le_bytes())?;
    for d in t.shape() {
        w.write_all(&(*d as u32).to_le_bytes())?;
    }
    for v in t.data() {
        w.write_all(&v.to_le_bytes())?;
    }
    Ok(())
}

fn read_exact<const N: usize>(r: &mut impl Read) -> std::io::Result<[u8; N]> {
    let mut buf = [0u8; N];
    r.read_exact(&mut buf)?;
    Ok(buf)
}

fn read_u32(r: &mut impl Read) -> std::io::Result<u32> {
    Ok(u32::from_le_bytes(read_exact::<4>(r)?))
}

fn read_u64(r: &mut impl Read) -> std::io::Result<u64> {
    Ok(u64::from_le_bytes(read_exact::<8>(r)?))
}

fn read_f64(r: &mut impl Read) -> std::io::Result<f64> {
    Ok(f64::from_le_bytes(read_exact::<8>(r)?))
}

fn read_tensor(r: &mut impl Read) -> Result<Tensor> {
    let ndim = read_u32(r).map_err(wrap_io)? as usize;
    let mut shape = Vec::with_capacity(ndim);
    for _ in 0..ndim {
        shape.push(read_u32(r).map_err(wrap_io)? as usize);
    }
    let numel: usize = shape.iter().product();
    let mut data = Vec::with_capacity(numel);
    for _ in 0..numel {
        data.push(read_f64(r).map_err(wrap_io)?);
    }
    Tensor::new(shape, data)
}

fn wrap_io(e: std::io::Error) -> Error {
    Error::Checkpoint(format!("truncated or unreadable checkpoint: {e}"))
}

/// Saves graph parameters (and optionally optimizer state) to `path`.
pub fn save(
    graph: &NetworkGraph,
    optimizer: Option<&AdamState>,
    meta: CheckpointMeta,
    path: &Path,
) -> Result<()> {
    let params = graph.params();
    if params.iter().any(|p| !p.all_finite()) {
        return Err(Error::NonFinite("parameters being checkpointed".into()));
    }
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    let io = |e: std::io::Error| Error::io(path, e);
    w.write_all(MAGIC).map_err(io)?;
    w.write_all(&VERSION.to_le_bytes()).map_err(io)?;
    w.write_all(&topology_digest(graph)).map_err(io)?;
    w.write_all(&meta.seed.to_le_bytes()).map_err(io)?;
    w.write_all(&meta.epoch.to_le_bytes()).map_err(io)?;
    w.write_all(&[optimizer.is_some() as u8]).map_err(io)?;
    w.write_all(&(params.len() as u32).to_le_bytes()).map_err(io)?;
    for p in &params {
        write_tensor(&mut w, p).map_err(io)?;
    }
    if let Some(opt) = optimizer {
        w.write_all(&opt.step.to_le_bytes()).map_err(io)?;
        for v in [opt.learning_rate, opt.beta1, opt.beta2, opt.epsilon] {
            w.write_all(&v.to_le_bytes()).map_err(io)?;
        }
        for t in opt.first_moment.iter().chain(opt.second_moment.iter()) {
            write_tensor(&mut w, t).map_err(io)?;
        }
    }
    w.flush().map_err(io)
}

/// Loads a checkpoint from `path` without applying it to any graph.
pub fn load(path: &Path) -> Result<Checkpoint> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut r = BufReader::new(file);
    let magic = read_exact::<8>(&mut r).map_err(wrap_io)?;
    if &magic != MAGIC {
        return Err(Error::Checkpoint("bad magic header".into()));
    }
    let version = read_u32(&mut r).map_err(wrap_io)?;
    if version != VERSION {
        return Err(Error::Checkpoint(format!(
            "unsupported checkpoint version {version} (expected {VERSION})"
        )));
    }
    let digest = read_exact::<32>(&mut r).map_err(wrap_io)?;
    let seed = read_u64(&mut r).map_err(wrap_io)?;
    let epoch = read_u64(&mut r).map_err(wrap_io)?;
    let flags = read_exact::<1>(&mut r).map_err(wrap_io)?[0];
    let count = read_u32(&mut r).map_err(wrap_io)? as usize;
    let mut params = Vec::with_capacity(count);
    for _ in 0..count {
        params.push(read_tensor(&mut r)?);
    }
    let optimizer = if flags & 1 != 0 {
        let step = read_u64(&mut r).map_err(wrap_io)?;
        let learning_rate = read_f64(&mut r).map_err(wrap_io)?;
        let beta1 = read_f64(&mut r).map_err(wrap_io)?;
        let beta2 = read_f64(&mut r).map_err(wrap_io)?;
        let epsilon = read_f64(&mut r).map_err(wrap_io)?;
        let mut first_moment = Vec::with_capacity(count);
        for _ in 0..count {
            first_moment.push(read_tensor(&mut r)?);
        }
        let mut second_moment = Vec::with_capacity(count);
        for _ in 0..count {
            second_moment.push(read_tensor(&mut r)?);
        }
        Some(AdamState {
            step,
            learning_rate,
            beta1,
            beta2,
            epsilon,
            first_moment,
            second_moment,
        })
    } else {
        None
    };
    Ok(Checkpoint {
        version,
        digest,
        meta: CheckpointMeta { seed, epoch },
        params,
        optimizer,
    })
}

/// Applies a loaded checkpoint's parameters to `graph`, verifying the
/// topology digest first. Returns the restored optimizer state, if any.
pub fn apply(checkpoint: &Checkpoint, graph: &mut NetworkGraph) -> Result<Option<AdamState>> {
    if checkpoint.digest != topology_digest(graph) {
        return Err(Error::Checkpoint(
            "topology digest mismatch: checkpoint was saved from a different architecture".into(),
        ));
    }
    let mut params = graph.params_mut();
    if params.len() != checkpoint.params.len() {
        return Err(Error::Checkpoint("parameter count mismatch".into()));
    }
    for (dst, src) in params.iter_mut().zip(checkpoint.params.iter()) {
        if dst.shape() != src.shape() {
            return Err(Error::Checkpoint("parameter shape mismatch".into()));
        }
        **dst = src.clone();
    }
    Ok(checkpoint.optimizer.clone())
}

/// Convenience: load from `path` straight into `graph`.
pub fn load_into(path: &Path, graph: &mut NetworkGraph) -> Result<(CheckpointMeta, Option<AdamState>)> {
    let ck = load(path)?;
    let opt = apply(&ck, graph)?;
    Ok((ck.meta, opt))
}
