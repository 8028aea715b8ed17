//! RIFF/WAVE 16-bit PCM mono reading and writing.
//!
//! Samples are decoded at raw int16 scale (no normalization to [-1, 1]).
//! The writer always emits the canonical 44-byte header.

use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use crate::{Error, Result, Signal};

const FORMAT_PCM: u16 = 1;
const HEADER_LEN: usize = 44;

fn malformed(msg: impl Into<String>) -> Error {
    Error::MalformedWav(msg.into())
}

fn u16_at(b: &[u8], at: usize) -> u16 {
    u16::from_le_bytes([b[at], b[at + 1]])
}

fn u32_at(b: &[u8], at: usize) -> u32 {
    u32::from_le_bytes([b[at], b[at + 1], b[at + 2], b[at + 3]])
}

#[derive(Debug, Clone, Copy)]
struct FmtChunk {
    format: u16,
    channels: u16,
    sample_rate: u32,
    bits: u16,
}

/// Decodes a complete WAVE file held in memory.
pub fn decode_wav(bytes: &[u8]) -> Result<Signal> {
    if bytes.len() < 12 {
        return Err(malformed("file shorter than RIFF header"));
    }
    if &bytes[0..4] != b"RIFF" {
        return Err(malformed("missing RIFF tag"));
    }
    if &bytes[8..12] != b"WAVE" {
        return Err(malformed("missing WAVE tag"));
    }

    let mut fmt: Option<FmtChunk> = None;
    let mut pos = 12;
    while pos + 8 <= bytes.len() {
        let id = &bytes[pos..pos + 4];
        let size = u32_at(bytes, pos + 4) as usize;
        let body = pos + 8;
        let end = body
            .checked_add(size)
            .ok_or_else(|| malformed("chunk size overflow"))?;

        match id {
            b"fmt " => {
                if size < 16 || end > bytes.len() {
                    return Err(malformed("truncated fmt chunk"));
                }
                fmt = Some(FmtChunk {
                    format: u16_at(bytes, body),
                    channels: u16_at(bytes, body + 2),
                    sample_rate: u32_at(bytes, body + 4),
                    bits: u16_at(bytes, body + 14),
                });
            }
            b"data" => {
                let fmt = fmt.ok_or_else(|| malformed("data chunk before fmt chunk"))?;
                check_encoding(&fmt)?;
                if end > bytes.len() {
                    return Err(malformed("truncated data chunk"));
                }
                if !size.is_multiple_of(2) {
                    return Err(malformed("data chunk length is not a whole number of samples"));
                }
                let samples = bytes[body..end]
                    .chunks_exact(2)
                    .map(|c| i16::from_le_bytes([c[0], c[1]]) as f64)
                    .collect();
                return Signal::new(samples, fmt.sample_rate as f64);
            }
            _ => {}
        }
        // Chunks are word aligned.
        pos = end + (size & 1);
    }
    Err(malformed(if fmt.is_none() {
        "no fmt chunk"
    } else {
        "no data chunk"
    }))
}

fn check_encoding(fmt: &FmtChunk) -> Result<()> {
    if fmt.format != FORMAT_PCM {
        return Err(Error::UnsupportedEncoding(format!(
            "audio format {} (only PCM = 1 is supported)",
            fmt.format
        )));
    }
    if fmt.bits != 16 {
        return Err(Error::UnsupportedEncoding(format!(
            "{} bits per sample (only 16 is supported)",
            fmt.bits
        )));
    }
    if fmt.channels != 1 {
        return Err(Error::UnsupportedEncoding(format!(
            "{} channels (only mono is supported)",
            fmt.channels
        )));
    }
    if fmt.sample_rate == 0 {
        return Err(malformed("sample rate is zero"));
    }
    Ok(())
}

pub fn read_wav(path: impl AsRef<Path>) -> Result<Signal> {
    let mut bytes = Vec::new();
    fs::File::open(path)?.read_to_end(&mut bytes)?;
    decode_wav(&bytes)
}

/// Encodes the signal as a canonical 44-byte-header PCM16 mono file.
///
/// Samples are rounded to the nearest integer; anything outside
/// `[-32768, 32767]` after rounding is rejected. The sample rate is rounded
/// to whole hertz.
pub fn encode_wav(signal: &Signal) -> Result<Vec<u8>> {
    let pcm: Vec<i16> = signal
        .samples()
        .iter()
        .enumerate()
        .map(|(index, &value)| {
            let r = value.round();
            if r.is_finite() && (i16::MIN as f64..=i16::MAX as f64).contains(&r) {
                Ok(r as i16)
            } else {
                Err(Error::SampleOutOfRange { index, value })
            }
        })
        .collect::<Result<_>>()?;

    let rate = signal.sample_rate_hz().round();
    if !(rate >= 1.0 && rate <= u32::MAX as f64) {
        return Err(Error::InvalidSampleRate(signal.sample_rate_hz()));
    }
    let rate = rate as u32;
    let data_len = u32::try_from(pcm.len() * 2)
        .map_err(|_| Error::InvalidParameter("signal too long for a WAVE file".into()))?;

    let mut out = Vec::with_capacity(HEADER_LEN + pcm.len() * 2);
    out.extend_from_slice(b"RIFF");
    out.extend_from_slice(&(36 + data_len).to_le_bytes());
    out.extend_from_slice(b"WAVE");
    out.extend_from_slice(b"fmt ");
    out.extend_from_slice(&16u32.to_le_bytes());
    out.extend_from_slice(&FORMAT_PCM.to_le_bytes());
    out.extend_from_slice(&1u16.to_le_bytes()); // channels
    out.extend_from_slice(&rate.to_le_bytes());
    out.extend_from_slice(&(rate * 2).to_le_bytes()); // byte rate
    out.extend_from_slice(&2u16.to_le_bytes()); // block align
    out.extend_from_slice(&16u16.to_le_bytes());
    out.extend_from_slice(b"data");
    out.extend_from_slice(&data_len.to_le_bytes());
    for s in pcm {
        out.extend_from_slice(&s.to_le_bytes());
    }
    Ok(out)
}

pub fn write_wav(signal: &Signal, path: impl AsRef<Path>) -> Result<()> {
    let bytes = encode_wav(signal)?;
    let mut f = fs::File::create(path)?;
    f.write_all(&bytes)?;
    f.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn header(format: u16, channels: u16, bits: u16, data: &[u8]) -> Vec<u8> {
        let mut out = Vec::new();
        out.extend_from_slice(b"RIFF");
        out.extend_from_slice(&(36 + data.len() as u32).to_le_bytes());
        out.extend_from_slice(b"WAVE");
        out.extend_from_slice(b"fmt ");
        out.extend_from_slice(&16u32.to_le_bytes());
        out.extend_from_slice(&format.to_le_bytes());
        out.extend_from_slice(&channels.to_le_bytes());
        out.extend_from_slice(&8000u32.to_le_bytes());
        out.extend_from_slice(&16000u32.to_le_bytes());
        out.extend_from_slice(&(channels * bits / 8).to_le_bytes());
        out.extend_from_slice(&bits.to_le_bytes());
        out.extend_from_slice(b"data");
        out.extend_from_slice(&(data.len() as u32).to_le_bytes());
        out.extend_from_slice(data);
        out
    }

    #[test]
    fn zero_payload() {
        let s = decode_wav(&header(1, 1, 16, &[0u8; 16])).unwrap();
        assert_eq!(s.samples(), &[0.0; 8]);
        assert_eq!(s.sample_rate_hz(), 8000.0);
    }

    #[test]
    fn raw_int16_scale() {
        let data: Vec<u8> = [1i16, -1, 32767, -32768]
            .iter()
            .flat_map(|v| v.to_le_bytes())
            .collect();
        let s = decode_wav(&header(1, 1, 16, &data)).unwrap();
        assert_eq!(s.samples(), &[1.0, -1.0, 32767.0, -32768.0]);
    }

    #[test]
    fn minimal_file_layout() {
        let bytes = encode_wav(&Signal::new(vec![0.0, 0.0], 8000.0).unwrap()).unwrap();
        assert_eq!(bytes.len(), 48);
        assert_eq!(bytes, header(1, 1, 16, &[0u8; 4]));
    }

    #[test]
    fn out_of_range_sample() {
        let s = Signal::new(vec![0.0, 40000.0], 8000.0).unwrap();
        assert!(matches!(
            encode_wav(&s),
            Err(Error::SampleOutOfRange { index: 1, .. })
        ));
        // 32767.4 rounds into range.
        assert!(encode_wav(&Signal::new(vec![32767.4], 8000.0).unwrap()).is_ok());
    }

    #[test]
    fn errors_are_distinct() {
        let mut bad = header(1, 1, 16, &[0u8; 4]);
        bad[0] = b'X';
        assert!(matches!(decode_wav(&bad), Err(Error::MalformedWav(_))));
        assert!(matches!(decode_wav(b"RIFF"), Err(Error::MalformedWav(_))));
        assert!(matches!(
            decode_wav(&header(3, 1, 16, &[0u8; 4])),
            Err(Error::UnsupportedEncoding(_))
        ));
        assert!(matches!(
            decode_wav(&header(1, 1, 8, &[0u8; 4])),
            Err(Error::UnsupportedEncoding(_))
        ));
        assert!(matches!(
            decode_wav(&header(1, 2, 16, &[0u8; 4])),
            Err(Error::UnsupportedEncoding(_))
        ));
        let mut truncated = header(1, 1, 16, &[0u8; 8]);
        truncated.truncate(truncated.len() - 2);
        assert!(matches!(decode_wav(&truncated), Err(Error::MalformedWav(_))));
    }

    #[test]
    fn skips_unknown_chunks() {
        let plain = header(1, 1, 16, &[1, 0, 2, 0]);
        let mut with_list = plain[..36].to_vec();
        with_list.extend_from_slice(b"LIST");
        with_list.extend_from_slice(&3u32.to_le_bytes());
        with_list.extend_from_slice(&[9, 9, 9, 0]); // odd chunk + pad byte
        with_list.extend_from_slice(&plain[36..]);
        let s = decode_wav(&with_list).unwrap();
        assert_eq!(s.samples(), &[1.0, 2.0]);
    }

    #[test]
    fn file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("x.wav");
        let s = Signal::new(vec![3.0, -7.0, 12000.0], 16000.0).unwrap();
        write_wav(&s, &path).unwrap();
        assert_eq!(read_wav(&path).unwrap(), s);
    }

    proptest! {
        #[test]
        fn round_trip_is_bit_exact(v in prop::collection::vec(any::<i16>(), 0..500)) {
            let s = Signal::new(v.iter().map(|&x| x as f64).collect(), 8000.0).unwrap();
            let bytes = encode_wav(&s).unwrap();
            let back = decode_wav(&bytes).unwrap();
            prop_assert_eq!(back.samples(), s.samples());
            prop_assert_eq!(encode_wav(&back).unwrap(), bytes);
        }
    }
}
