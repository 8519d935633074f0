//! Versioned binary model container ("ONNM").
//!
//! Layout, all integers and floats little-endian after the magic:
//!
//! ```text
//! magic        4 bytes  "ONNM"
//! version      u32      currently 1
//! field tag    u8       0 = real, 1 = complex
//! layer count  u32
//! per layer:   fan_in u32, fan_out u32, activation tag u8, bias flag u8
//! per layer:   weight data row-major as f64; complex entries interleaved
//!              (re, im); bias vector after the weights when flagged
//! ```
//!
//! Save-then-load round-trips parameters bit-exactly.

use std::path::Path;

use byteorder::{ByteOrder, LittleEndian};
use sha2::{Digest, Sha256};

use crate::error::Error;
use crate::network::{
    ActivationKind, LayerParams, LayerSpec, NetworkParams, NetworkSpec, NumericField,
};
use crate::tensor::{Complex, ComplexTensor, RealTensor};
use crate::Result;

pub const MAGIC: [u8; 4] = *b"ONNM";
pub const VERSION: u32 = 1;

/// Serializes a network to the container format.
pub fn to_bytes(spec: &NetworkSpec, params: &NetworkParams) -> Result<Vec<u8>> {
    spec.validate()?;
    params.validate_against(spec)?;

    let mut out = Vec::new();
    out.extend_from_slice(&MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    out.push(match spec.numeric_field {
        NumericField::Real => 0,
        NumericField::Complex => 1,
    });
    out.extend_from_slice(&(spec.layers.len() as u32).to_le_bytes());
    for layer in &spec.layers {
        out.extend_from_slice(&(layer.fan_in as u32).to_le_bytes());
        out.extend_from_slice(&(layer.fan_out as u32).to_le_bytes());
        out.push(layer.activation.tag());
        out.push(layer.has_bias as u8);
    }
    for lp in &params.layers {
        match lp {
            LayerParams::Real { weights, bias } => {
                for &v in weights.data() {
                    out.extend_from_slice(&v.to_le_bytes());
                }
                if let Some(b) = bias {
                    for &v in b {
                        out.extend_from_slice(&v.to_le_bytes());
                    }
                }
            }
            LayerParams::Complex { weights, bias } => {
                for z in weights.entries() {
                    out.extend_from_slice(&z.re.to_le_bytes());
                    out.extend_from_slice(&z.im.to_le_bytes());
                }
                if let Some(b) = bias {
                    for z in b {
                        out.extend_from_slice(&z.re.to_le_bytes());
                        out.extend_from_slice(&z.im.to_le_bytes());
                    }
                }
            }
        }
    }
    Ok(out)
}

struct Reader<'a> {
    buf: &'a [u8],
    offset: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, len: usize) -> Result<&'a [u8]> {
        if self.buf.len() < self.offset + len {
            return Err(Error::ModelEof {
                offset: self.buf.len() as u64,
            });
        }
        let slice = &self.buf[self.offset..self.offset + len];
        self.offset += len;
        Ok(slice)
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(LittleEndian::read_u32(self.take(4)?))
    }

    fn u8(&mut self) -> Result<u8> {
        Ok(self.take(1)?[0])
    }

    fn f64(&mut self) -> Result<f64> {
        Ok(LittleEndian::read_f64(self.take(8)?))
    }
}

/// Parses a container produced by [`to_bytes`].
pub fn from_bytes(buf: &[u8]) -> Result<(NetworkSpec, NetworkParams)> {
    let mut r = Reader { buf, offset: 0 };

    let magic = r.take(4)?;
    if magic != MAGIC {
        let mut got = [0u8; 4];
        got.copy_from_slice(magic);
        return Err(Error::ModelMagic { got });
    }
    let version = r.u32()?;
    if version != VERSION {
        return Err(Error::ModelVersion {
            found: version,
            supported: VERSION,
        });
    }
    let field = match r.u8()? {
        0 => NumericField::Real,
        1 => NumericField::Complex,
        other => {
            return Err(Error::ModelFormat(format!(
                "unknown numeric field tag {other}"
            )))
        }
    };
    let layer_count = r.u32()? as usize;
    if layer_count == 0 {
        return Err(Error::ModelFormat("zero layers".into()));
    }

    let mut layer_specs = Vec::with_capacity(layer_count);
    for _ in 0..layer_count {
        let fan_in = r.u32()? as usize;
        let fan_out = r.u32()? as usize;
        let activation = ActivationKind::from_tag(r.u8()?)?;
        let has_bias = match r.u8()? {
            0 => false,
            1 => true,
            other => {
                return Err(Error::ModelFormat(format!("bad bias flag {other}")));
            }
        };
        layer_specs.push(LayerSpec {
            fan_in,
            fan_out,
            activation,
            has_bias,
        });
    }

    let spec = NetworkSpec {
        input_dim: layer_specs[0].fan_in,
        layers: layer_specs,
        numeric_field: field,
    };
    spec.validate()
        .map_err(|e| Error::ModelFormat(format!("inconsistent header: {e}")))?;

    let mut layers = Vec::with_capacity(layer_count);
    for ls in &spec.layers {
        let n = ls.fan_in * ls.fan_out;
        match field {
            NumericField::Real => {
                let mut data = Vec::with_capacity(n);
                for _ in 0..n {
                    data.push(r.f64()?);
                }
                let weights = RealTensor::from_data(ls.fan_out, ls.fan_in, data)?;
                let bias = if ls.has_bias {
                    let mut b = Vec::with_capacity(ls.fan_out);
                    for _ in 0..ls.fan_out {
                        b.push(r.f64()?);
                    }
                    Some(b)
                } else {
                    None
                };
                layers.push(LayerParams::Real { weights, bias });
            }
            NumericField::Complex => {
                let mut entries = Vec::with_capacity(n);
                for _ in 0..n {
                    let re = r.f64()?;
                    let im = r.f64()?;
                    entries.push(Complex::new(re, im));
                }
                let weights = ComplexTensor::from_entries(ls.fan_out, ls.fan_in, &entries)?;
                let bias = if ls.has_bias {
                    let mut b = Vec::with_capacity(ls.fan_out);
                    for _ in 0..ls.fan_out {
                        let re = r.f64()?;
                        let im = r.f64()?;
                        b.push(Complex::new(re, im));
                    }
                    Some(b)
                } else {
                    None
                };
                layers.push(LayerParams::Complex { weights, bias });
            }
        }
    }

    if r.offset != buf.len() {
        return Err(Error::ModelFormat(format!(
            "{} trailing bytes after weight data",
            buf.len() - r.offset
        )));
    }

    Ok((spec, NetworkParams { layers }))
}

/// Writes a model file.
pub fn save(spec: &NetworkSpec, params: &NetworkParams, path: &Path) -> Result<()> {
    let bytes = to_bytes(spec, params)?;
    std::fs::write(path, bytes).map_err(|e| Error::io(path.display().to_string(), e))
}

/// Reads a model file.
pub fn load(path: &Path) -> Result<(NetworkSpec, NetworkParams)> {
    let buf = std::fs::read(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    from_bytes(&buf)
}

/// SHA-256 over the serialized container, as a hex string. Used as the
/// parameter checksum in reports and manifests.
pub fn checksum(spec: &NetworkSpec, params: &NetworkParams) -> Result<String> {
    let bytes = to_bytes(spec, params)?;
    let digest = Sha256::digest(&bytes);
    Ok(digest.iter().map(|b| format!("{b:02x}")).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RngStream;

    fn sample_network() -> (NetworkSpec, NetworkParams) {
        let spec = NetworkSpec::mlp(
            NumericField::Complex,
            6,
            &[4],
            3,
            ActivationKind::ComplexSigmoid,
        )
        .unwrap();
        let params = NetworkParams::init(&spec, &mut RngStream::new(99, 0));
        (spec, params)
    }

    #[test]
    fn roundtrip_is_bit_exact() {
        let (spec, params) = sample_network();
        let bytes = to_bytes(&spec, &params).unwrap();
        let (spec2, params2) = from_bytes(&bytes).unwrap();
        assert_eq!(spec, spec2);
        assert_eq!(params, params2);

        let real_spec =
            NetworkSpec::mlp(NumericField::Real, 5, &[7], 2, ActivationKind::SigmoidReal).unwrap();
        let real_params = NetworkParams::init(&real_spec, &mut RngStream::new(3, 1));
        let bytes = to_bytes(&real_spec, &real_params).unwrap();
        let (s2, p2) = from_bytes(&bytes).unwrap();
        assert_eq!(real_spec, s2);
        assert_eq!(real_params, p2);
    }

    #[test]
    fn wrong_magic_is_rejected() {
        let (spec, params) = sample_network();
        let mut bytes = to_bytes(&spec, &params).unwrap();
        bytes[0] = b'X';
        assert!(matches!(
            from_bytes(&bytes).unwrap_err(),
            Error::ModelMagic { .. }
        ));
    }

    #[test]
    fn future_version_is_rejected() {
        let (spec, params) = sample_network();
        let mut bytes = to_bytes(&spec, &params).unwrap();
        bytes[4..8].copy_from_slice(&(VERSION + 1).to_le_bytes());
        match from_bytes(&bytes).unwrap_err() {
            Error::ModelVersion { found, supported } => {
                assert_eq!(found, VERSION + 1);
                assert_eq!(supported, VERSION);
            }
            other => panic!("expected ModelVersion, got {other:?}"),
        }
    }

    #[test]
    fn truncation_reports_offset() {
        let (spec, params) = sample_network();
        let bytes = to_bytes(&spec, &params).unwrap();
        let cut = bytes.len() - 5;
        match from_bytes(&bytes[..cut]).unwrap_err() {
            Error::ModelEof { offset } => assert_eq!(offset, cut as u64),
            other => panic!("expected ModelEof, got {other:?}"),
        }
        let msg = format!("{}", from_bytes(&bytes[..cut]).unwrap_err());
        assert!(msg.contains("unexpected end of file at offset"), "{msg}");
    }

    #[test]
    fn trailing_bytes_are_rejected() {
        let (spec, params) = sample_network();
        let mut bytes = to_bytes(&spec, &params).unwrap();
        bytes.push(0);
        assert!(matches!(
            from_bytes(&bytes).unwrap_err(),
            Error::ModelFormat(_)
        ));
    }

    #[test]
    fn checksum_tracks_parameter_changes() {
        let (spec, params) = sample_network();
        let c1 = checksum(&spec, &params).unwrap();
        let c2 = checksum(&spec, &params).unwrap();
        assert_eq!(c1, c2);
        assert_eq!(c1.len(), 64);

        let mut other = params.clone();
        if let LayerParams::Complex { weights, .. } = &mut other.layers[0] {
            let z = weights.get(0, 0);
            weights.set(0, 0, z + Complex::new(1e-9, 0.0));
        }
        assert_ne!(c1, checksum(&spec, &other).unwrap());
    }
}
