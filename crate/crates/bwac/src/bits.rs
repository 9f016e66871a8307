use std::fmt;

use crate::error::{Error, Result};

/// A packed sequence of bits. Bit 0 is the first bit written; within each byte
/// bits are stored most-significant first.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitString {
    data: Vec<u8>,
    len: usize,
}

impl BitString {
    pub fn new() -> Self {
        Self::default()
    }

    /// Parses a string of `0`/`1` characters.
    pub fn from_bits(s: &str) -> Self {
        let mut out = Self::new();
        for ch in s.chars() {
            match ch {
                '0' => out.push(false),
                '1' => out.push(true),
                _ => panic!("not a bit: {ch:?}"),
            }
        }
        out
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn push(&mut self, bit: bool) {
        if self.len % 8 == 0 {
            self.data.push(0);
        }
        if bit {
            self.data[self.len / 8] |= 0x80 >> (self.len % 8);
        }
        self.len += 1;
    }

    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        self.data[i / 8] & (0x80 >> (i % 8)) != 0
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(|i| self.get(i))
    }

    pub fn extend(&mut self, other: &BitString) {
        // pad bits past `len` are zero in both strings, so shifted bytes can
        // be merged wholesale
        let shift = (self.len % 8) as u32;
        if shift == 0 {
            self.data.extend_from_slice(&other.data);
        } else {
            for &b in &other.data {
                *self.data.last_mut().unwrap() |= b >> shift;
                self.data.push(b << (8 - shift));
            }
        }
        self.len += other.len;
        self.data.truncate(self.len.div_ceil(8));
    }

    /// The packed bytes, most-significant bit first; trailing pad bits are 0.
    pub fn as_bytes(&self) -> &[u8] {
        &self.data
    }

    /// Rebuilds from packed bytes; the pad bits past `len` must be zero.
    pub fn from_bytes(data: Vec<u8>, len: usize) -> Option<Self> {
        if data.len() != len.div_ceil(8) {
            return None;
        }
        if len % 8 != 0 {
            let mask = 0xffu8 >> (len % 8);
            if data.last().copied().unwrap_or(0) & mask != 0 {
                return None;
            }
        }
        Some(Self { data, len })
    }

    /// True when `self` is a prefix of `other` (not necessarily proper).
    pub fn is_prefix_of(&self, other: &BitString) -> bool {
        if self.len > other.len {
            return false;
        }
        let full = self.len / 8;
        if self.data[..full] != other.data[..full] {
            return false;
        }
        let rem = self.len % 8;
        rem == 0 || (self.data[full] ^ other.data[full]) & (0xff << (8 - rem)) == 0
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for bit in self.iter() {
            f.write_str(if bit { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitString({self})")
    }
}

/// Appends bits and little-endian integers to a byte buffer. Integer writes
/// require byte alignment; `align` pads the current byte with zeros.
#[derive(Default)]
pub struct BitWriter {
    buf: Vec<u8>,
    bit_len: usize,
}

impl BitWriter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn write_bit(&mut self, bit: bool) {
        if self.bit_len % 8 == 0 {
            self.buf.push(0);
        }
        if bit {
            self.buf[self.bit_len / 8] |= 0x80 >> (self.bit_len % 8);
        }
        self.bit_len += 1;
    }

    pub fn write_bits(&mut self, bits: &BitString) {
        let shift = (self.bit_len % 8) as u32;
        if shift == 0 {
            self.buf.extend_from_slice(bits.as_bytes());
        } else {
            for &b in bits.as_bytes() {
                *self.buf.last_mut().unwrap() |= b >> shift;
                self.buf.push(b << (8 - shift));
            }
        }
        self.bit_len += bits.len();
        self.buf.truncate(self.bit_len.div_ceil(8));
    }

    pub fn align(&mut self) {
        self.bit_len = self.buf.len() * 8;
    }

    fn assert_aligned(&self) {
        debug_assert_eq!(self.bit_len % 8, 0, "integer write requires alignment");
    }

    pub fn write_bytes(&mut self, bytes: &[u8]) {
        self.assert_aligned();
        self.buf.extend_from_slice(bytes);
        self.bit_len += bytes.len() * 8;
    }

    pub fn write_u8(&mut self, v: u8) {
        self.write_bytes(&[v]);
    }

    pub fn write_u16(&mut self, v: u16) {
        self.write_bytes(&v.to_le_bytes());
    }

    pub fn write_u32(&mut self, v: u32) {
        self.write_bytes(&v.to_le_bytes());
    }

    pub fn write_u64(&mut self, v: u64) {
        self.write_bytes(&v.to_le_bytes());
    }

    /// Writes a bit string starting at a byte boundary and zero-pads the last
    /// byte, without per-bit shuffling.
    pub fn write_bitstring_padded(&mut self, bits: &BitString) {
        self.assert_aligned();
        self.buf.extend_from_slice(bits.as_bytes());
        self.bit_len = self.buf.len() * 8;
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.buf
    }
}

/// Reads bits and little-endian integers back out of a byte buffer, with
/// truncation checks.
pub struct BitReader<'a> {
    buf: &'a [u8],
    bit_pos: usize,
}

impl<'a> BitReader<'a> {
    pub fn new(buf: &'a [u8]) -> Self {
        Self { buf, bit_pos: 0 }
    }

    pub fn bits_remaining(&self) -> usize {
        self.buf.len() * 8 - self.bit_pos
    }

    pub fn read_bit(&mut self, what: &'static str) -> Result<bool> {
        if self.bit_pos >= self.buf.len() * 8 {
            return Err(Error::Truncated { what });
        }
        let bit = self.buf[self.bit_pos / 8] & (0x80 >> (self.bit_pos % 8)) != 0;
        self.bit_pos += 1;
        Ok(bit)
    }

    pub fn read_bits(&mut self, n: usize, what: &'static str) -> Result<BitString> {
        if n > self.bits_remaining() {
            return Err(Error::Truncated { what });
        }
        let r = (self.bit_pos % 8) as u32;
        let start = self.bit_pos / 8;
        let nbytes = n.div_ceil(8);
        let mut data = Vec::with_capacity(nbytes);
        if r == 0 {
            data.extend_from_slice(&self.buf[start..start + nbytes]);
        } else {
            for k in 0..nbytes {
                let hi = self.buf[start + k] << r;
                let lo = self.buf.get(start + k + 1).copied().unwrap_or(0) >> (8 - r);
                data.push(hi | lo);
            }
        }
        if n % 8 != 0 {
            *data.last_mut().unwrap() &= 0xff << (8 - n % 8);
        }
        self.bit_pos += n;
        Ok(BitString::from_bytes(data, n).expect("padding was masked"))
    }

    /// Skips to the next byte boundary; the padding bits must be zero.
    pub fn align(&mut self, what: &'static str) -> Result<()> {
        while self.bit_pos % 8 != 0 {
            if self.read_bit(what)? {
                return Err(Error::Inconsistent { what });
            }
        }
        Ok(())
    }

    pub fn read_bytes(&mut self, n: usize, what: &'static str) -> Result<&'a [u8]> {
        debug_assert_eq!(self.bit_pos % 8, 0);
        let start = self.bit_pos / 8;
        if start + n > self.buf.len() {
            return Err(Error::Truncated { what });
        }
        self.bit_pos += n * 8;
        Ok(&self.buf[start..start + n])
    }

    pub fn read_u8(&mut self, what: &'static str) -> Result<u8> {
        Ok(self.read_bytes(1, what)?[0])
    }

    pub fn read_u16(&mut self, what: &'static str) -> Result<u16> {
        Ok(u16::from_le_bytes(self.read_bytes(2, what)?.try_into().unwrap()))
    }

    pub fn read_u32(&mut self, what: &'static str) -> Result<u32> {
        Ok(u32::from_le_bytes(self.read_bytes(4, what)?.try_into().unwrap()))
    }

    pub fn read_u64(&mut self, what: &'static str) -> Result<u64> {
        Ok(u64::from_le_bytes(self.read_bytes(8, what)?.try_into().unwrap()))
    }

    /// Reads `len` bits written with `write_bitstring_padded`: starts at a
    /// byte boundary and consumes the zero padding of the last byte.
    pub fn read_bitstring_padded(&mut self, len: usize, what: &'static str) -> Result<BitString> {
        let bytes = self.read_bytes(len.div_ceil(8), what)?;
        BitString::from_bytes(bytes.to_vec(), len).ok_or(Error::Inconsistent { what })
    }

    pub fn at_end(&self) -> bool {
        self.bit_pos == self.buf.len() * 8
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bitstring_roundtrip_display() {
        let b = BitString::from_bits("0101111110");
        assert_eq!(b.len(), 10);
        assert_eq!(b.to_string(), "0101111110");
    }

    #[test]
    fn prefix_relation() {
        let a = BitString::from_bits("01");
        let b = BitString::from_bits("011");
        assert!(a.is_prefix_of(&b));
        assert!(!b.is_prefix_of(&a));
        assert!(a.is_prefix_of(&a));
        assert!(BitString::new().is_prefix_of(&a));
    }

    #[test]
    fn writer_reader_mixed() {
        let mut w = BitWriter::new();
        w.write_u32(0xdead_beef);
        w.write_bit(true);
        w.write_bit(false);
        w.write_bit(true);
        w.align();
        w.write_u16(513);
        let bytes = w.into_bytes();

        let mut r = BitReader::new(&bytes);
        assert_eq!(r.read_u32("x").unwrap(), 0xdead_beef);
        assert!(r.read_bit("x").unwrap());
        assert!(!r.read_bit("x").unwrap());
        assert!(r.read_bit("x").unwrap());
        r.align("pad").unwrap();
        assert_eq!(r.read_u16("x").unwrap(), 513);
        assert!(r.at_end());
    }

    #[test]
    fn reader_truncation() {
        let mut r = BitReader::new(&[0u8]);
        assert!(r.read_u16("field").is_err());
    }
}
