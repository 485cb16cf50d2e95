//! Hypervector serialization.
//!
//! Binary container layout (all integers little-endian):
//!
//! ```text
//! offset  size  field
//! 0       4     magic "HVC1"
//! 4       1     format version (1)
//! 5       1     repr tag: 0 = Binary, 1 = Bipolar, 2 = IntAccum
//! 6       1     accumulator width in bits (1 for bit reprs)
//! 7       1     reserved, 0
//! 8       8     dim (u64)
//! 16      8     seed metadata (u64)
//! 24      8     vector count (u64)
//! 32      ...   payload
//! ```
//!
//! Bit vectors are packed LSB-first into `ceil(dim / 8)` bytes each.
//! Accumulators store each element as a two's-complement integer of 1, 2, 4
//! or 8 bytes, the smallest that holds the declared width.

use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{HyperVector, Repr};
use crate::error::{Error, Result};

pub const MAGIC: &[u8; 4] = b"HVC1";
pub const FORMAT_VERSION: u8 = 1;
const HEADER_LEN: usize = 32;

/// A decoded container: shared seed metadata and the vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct Container {
    pub seed: u64,
    pub vectors: Vec<HyperVector>,
}

fn int_bytes(width: u8) -> usize {
    match width {
        0..=8 => 1,
        9..=16 => 2,
        17..=32 => 4,
        _ => 8,
    }
}

pub fn encode_container(vectors: &[HyperVector], seed: u64) -> Result<Vec<u8>> {
    let first = vectors
        .first()
        .ok_or_else(|| Error::Format("container needs at least one vector".into()))?;
    let (dim, repr) = (first.dim(), first.repr());
    if let Some(v) = vectors.iter().find(|v| v.dim() != dim || v.repr() != repr) {
        return Err(Error::Shape(format!(
            "container vectors must share dim/repr: {dim}/{repr} vs {}/{}",
            v.dim(),
            v.repr()
        )));
    }
    let (tag, width) = match repr {
        Repr::Binary => (0u8, 1u8),
        Repr::Bipolar => (1, 1),
        Repr::IntAccum(w) => (2, w),
    };
    let mut out = Vec::with_capacity(HEADER_LEN + vectors.len() * dim.div_ceil(8));
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&[FORMAT_VERSION, tag, width, 0]);
    out.extend_from_slice(&(dim as u64).to_le_bytes());
    out.extend_from_slice(&seed.to_le_bytes());
    out.extend_from_slice(&(vectors.len() as u64).to_le_bytes());
    for v in vectors {
        match v.words() {
            Some(words) => {
                let bytes: Vec<u8> = words.iter().flat_map(|w| w.to_le_bytes()).collect();
                out.extend_from_slice(&bytes[..dim.div_ceil(8)]);
            }
            None => {
                let n = int_bytes(width);
                for x in v.ints().expect("int storage") {
                    out.extend_from_slice(&x.to_le_bytes()[..n]);
                }
            }
        }
    }
    Ok(out)
}

pub fn decode_container(bytes: &[u8]) -> Result<Container> {
    if bytes.len() < HEADER_LEN || &bytes[..4] != MAGIC {
        return Err(Error::Format("not a hypervector container".into()));
    }
    if bytes[4] != FORMAT_VERSION {
        return Err(Error::Format(format!("unsupported container version {}", bytes[4])));
    }
    let (tag, width) = (bytes[5], bytes[6]);
    let u64_at = |o: usize| u64::from_le_bytes(bytes[o..o + 8].try_into().expect("8 bytes"));
    let dim = usize::try_from(u64_at(8)).map_err(|_| Error::Format("dim overflow".into()))?;
    let seed = u64_at(16);
    let count = usize::try_from(u64_at(24)).map_err(|_| Error::Format("count overflow".into()))?;
    if dim == 0 {
        return Err(Error::InvalidDimension(0));
    }
    let repr = match tag {
        0 => Repr::Binary,
        1 => Repr::Bipolar,
        2 => Repr::IntAccum(width),
        t => return Err(Error::Format(format!("unknown repr tag {t}"))),
    };
    let per_vec = match repr {
        Repr::IntAccum(w) => dim * int_bytes(w),
        _ => dim.div_ceil(8),
    };
    let payload = &bytes[HEADER_LEN..];
    if payload.len() != per_vec.checked_mul(count).ok_or_else(|| Error::Format("size overflow".into()))? {
        return Err(Error::Format(format!(
            "payload is {} bytes, expected {}",
            payload.len(),
            per_vec * count
        )));
    }
    let vectors = payload
        .chunks(per_vec.max(1))
        .take(count)
        .map(|chunk| match repr {
            Repr::IntAccum(w) => {
                let n = int_bytes(w);
                let values = chunk
                    .chunks(n)
                    .map(|b| {
                        // Sign-extend from n bytes.
                        let mut buf = if b[n - 1] & 0x80 != 0 { [0xffu8; 8] } else { [0u8; 8] };
                        buf[..n].copy_from_slice(b);
                        i64::from_le_bytes(buf)
                    })
                    .collect();
                HyperVector::from_ints(values, w)
            }
            _ => {
                let mut words = vec![0u64; dim.div_ceil(64)];
                for (i, byte) in chunk.iter().enumerate() {
                    words[i / 8] |= (*byte as u64) << (8 * (i % 8));
                }
                Ok(HyperVector::from_words(dim, repr, words))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Container { seed, vectors })
}

pub fn write_container(mut w: impl Write, vectors: &[HyperVector], seed: u64) -> Result<()> {
    let bytes = encode_container(vectors, seed)?;
    w.write_all(&bytes)
        .map_err(|e| Error::io("<writer>", e))
}

pub fn read_container(mut r: impl Read) -> Result<Container> {
    let mut bytes = Vec::new();
    r.read_to_end(&mut bytes).map_err(|e| Error::io("<reader>", e))?;
    decode_container(&bytes)
}

pub fn save_container(path: &Path, vectors: &[HyperVector], seed: u64) -> Result<()> {
    crate::io::write_atomic(path, &encode_container(vectors, seed)?)
}

pub fn load_container(path: &Path) -> Result<Container> {
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    decode_container(&bytes)
}

/// JSON form for small debug cases: `{"dim": D, "repr": ..., "data": [...]}`
/// with `data` holding element values in the vector's own representation.
#[derive(Serialize, Deserialize)]
struct HvJson {
    dim: usize,
    repr: Repr,
    data: Vec<i64>,
}

impl Serialize for HyperVector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        HvJson {
            dim: self.dim(),
            repr: self.repr(),
            data: self.values(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for HyperVector {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = HvJson::deserialize(d)?;
        if raw.data.len() != raw.dim {
            return Err(serde::de::Error::custom(format!(
                "data length {} != dim {}",
                raw.data.len(),
                raw.dim
            )));
        }
        let hv = match raw.repr {
            Repr::Binary => HyperVector::from_binary(&raw.data),
            Repr::Bipolar => HyperVector::from_bipolar(&raw.data),
            Repr::IntAccum(w) => HyperVector::from_ints(raw.data, w),
        };
        hv.map_err(serde::de::Error::custom)
    }
}
