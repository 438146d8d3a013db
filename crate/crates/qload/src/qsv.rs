//! QSV1 state files.
//!
//! Layout: `"QSV1"`, version byte `1`, little-endian `u32` qubit count, then
//! `2^N` records of `(re: f64 LE, im: f64 LE)`. Qubit 0 is the least
//! significant bit of the record index.

use std::fs;
use std::path::Path;

use qload_core::{StateVector, C64};

pub const MAGIC: &[u8; 4] = b"QSV1";
pub const VERSION: u8 = 1;
const HEADER_LEN: usize = 9;
/// Largest register a QSV1 file may declare.
pub const MAX_QUBITS: u32 = qload_core::state::MAX_QUBITS as u32;

#[derive(Debug, thiserror::Error)]
pub enum QsvError {
    #[error("bad magic {0:?}, expected \"QSV1\"")]
    BadMagic([u8; 4]),
    #[error("unsupported QSV version {0}")]
    UnsupportedVersion(u8),
    #[error("file holds {got} bytes, expected {expected}")]
    Truncated { got: usize, expected: usize },
    #[error("{got} bytes of trailing data after the payload")]
    TrailingData { got: usize },
    #[error("{0} qubits is above the supported maximum")]
    TooManyQubits(u32),
    #[error("payload is not normalized (norm {norm})")]
    NotNormalized { norm: f64 },
    #[error("payload contains a non-finite amplitude at index {0}")]
    NonFinite(usize),
    #[error(transparent)]
    Core(qload_core::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub fn encode(state: &StateVector) -> Vec<u8> {
    let amps = state.amplitudes();
    let mut out = Vec::with_capacity(HEADER_LEN + 16 * amps.len());
    out.extend_from_slice(MAGIC);
    out.push(VERSION);
    out.extend_from_slice(&(state.num_qubits() as u32).to_le_bytes());
    for a in amps {
        out.extend_from_slice(&a.re.to_le_bytes());
        out.extend_from_slice(&a.im.to_le_bytes());
    }
    out
}

pub fn decode(bytes: &[u8]) -> Result<StateVector, QsvError> {
    if bytes.len() < HEADER_LEN {
        if bytes.len() >= 4 && &bytes[..4] != MAGIC {
            return Err(QsvError::BadMagic(bytes[..4].try_into().unwrap()));
        }
        return Err(QsvError::Truncated { got: bytes.len(), expected: HEADER_LEN });
    }
    let magic: [u8; 4] = bytes[..4].try_into().unwrap();
    if &magic != MAGIC {
        return Err(QsvError::BadMagic(magic));
    }
    if bytes[4] != VERSION {
        return Err(QsvError::UnsupportedVersion(bytes[4]));
    }
    let n = u32::from_le_bytes(bytes[5..9].try_into().unwrap());
    if n > MAX_QUBITS {
        return Err(QsvError::TooManyQubits(n));
    }
    let expected = HEADER_LEN + 16 * (1usize << n);
    if bytes.len() < expected {
        return Err(QsvError::Truncated { got: bytes.len(), expected });
    }
    if bytes.len() > expected {
        return Err(QsvError::TrailingData { got: bytes.len() - expected });
    }
    let mut amps = Vec::with_capacity(1 << n);
    for (i, rec) in bytes[HEADER_LEN..].chunks_exact(16).enumerate() {
        let re = f64::from_le_bytes(rec[..8].try_into().unwrap());
        let im = f64::from_le_bytes(rec[8..].try_into().unwrap());
        if !re.is_finite() || !im.is_finite() {
            return Err(QsvError::NonFinite(i));
        }
        amps.push(C64::new(re, im));
    }
    // Amplitudes are kept bit for bit; nothing is rescaled.
    StateVector::from_amplitudes(amps).map_err(|e| match e {
        qload_core::Error::NotNormalized { norm } => QsvError::NotNormalized { norm },
        other => QsvError::Core(other),
    })
}

pub fn read_state(path: impl AsRef<Path>) -> Result<StateVector, QsvError> {
    decode(&fs::read(path)?)
}

pub fn write_state(path: impl AsRef<Path>, state: &StateVector) -> Result<(), QsvError> {
    fs::write(path, encode(state))?;
    Ok(())
}
