//! Bit-packed GF(2) vectors and matrices.
//!
//! A vector holds at most 64 bits in one machine word. In textual form bit
//! index 0 is the leftmost character. The packing stores string index `i` at
//! word bit `len - 1 - i`, so ascending numeric order of the packed word is
//! exactly lexicographic order of the bit strings; the coset-leader search
//! leans on that for its tie-break.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// A GF(2) vector of 1..=64 bits.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct BitVector {
    len: usize,
    bits: u64,
}

fn low_mask(len: usize) -> u64 {
    if len == 64 {
        u64::MAX
    } else {
        (1u64 << len) - 1
    }
}

impl BitVector {
    /// All-zero vector of the given length.
    pub fn zeros(len: usize) -> Result<Self> {
        if len == 0 || len > 64 {
            return Err(Error::InvalidLength(len));
        }
        Ok(BitVector { len, bits: 0 })
    }

    /// Builds a vector from a packed word; bits above `len` must be clear.
    pub fn from_word(bits: u64, len: usize) -> Result<Self> {
        if len == 0 || len > 64 {
            return Err(Error::InvalidLength(len));
        }
        if bits & !low_mask(len) != 0 {
            return Err(Error::Config(format!(
                "word {bits:#x} has bits set beyond length {len}"
            )));
        }
        Ok(BitVector { len, bits })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// The packed word; string index 0 sits at word bit `len - 1`.
    pub fn word(&self) -> u64 {
        self.bits
    }

    pub fn get(&self, index: usize) -> bool {
        assert!(index < self.len, "bit index {index} out of range");
        self.bits >> (self.len - 1 - index) & 1 == 1
    }

    pub fn set(&mut self, index: usize, value: bool) {
        assert!(index < self.len, "bit index {index} out of range");
        let mask = 1u64 << (self.len - 1 - index);
        if value {
            self.bits |= mask;
        } else {
            self.bits &= !mask;
        }
    }

    /// Hamming weight.
    pub fn weight(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn xor(&self, other: &BitVector) -> Result<BitVector> {
        if self.len != other.len {
            return Err(Error::DimensionMismatch {
                context: "BitVector::xor",
                expected: self.len,
                actual: other.len,
            });
        }
        Ok(BitVector {
            len: self.len,
            bits: self.bits ^ other.bits,
        })
    }

    /// Concatenates `self` followed by `other`.
    pub fn concat(&self, other: &BitVector) -> Result<BitVector> {
        let len = self.len + other.len;
        if len > 64 {
            return Err(Error::InvalidLength(len));
        }
        Ok(BitVector {
            len,
            bits: self.bits << other.len | other.bits,
        })
    }

    /// Extracts `len` bits starting at string index `start`.
    pub fn slice(&self, start: usize, len: usize) -> Result<BitVector> {
        if len == 0 || start + len > self.len {
            return Err(Error::InvalidLength(len));
        }
        let shifted = self.bits >> (self.len - start - len);
        Ok(BitVector {
            len,
            bits: shifted & low_mask(len),
        })
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector(\"{self}\")")
    }
}

impl FromStr for BitVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.is_empty() || s.len() > 64 {
            return Err(Error::InvalidLength(s.len()));
        }
        let mut bits = 0u64;
        for c in s.chars() {
            bits <<= 1;
            match c {
                '0' => {}
                '1' => bits |= 1,
                _ => return Err(Error::Parse(format!("invalid bit character {c:?}"))),
            }
        }
        Ok(BitVector { len: s.len(), bits })
    }
}

impl Serialize for BitVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// A dense GF(2) matrix with at most 64 columns, stored one word per row.
#[derive(Clone, PartialEq, Eq)]
pub struct Gf2Matrix {
    rows: usize,
    cols: usize,
    row_bits: Vec<u64>,
}

impl Gf2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Result<Self> {
        if rows == 0 {
            return Err(Error::InvalidLength(rows));
        }
        if cols == 0 || cols > 64 {
            return Err(Error::InvalidLength(cols));
        }
        Ok(Gf2Matrix {
            rows,
            cols,
            row_bits: vec![0; rows],
        })
    }

    pub fn from_rows(rows: &[BitVector]) -> Result<Self> {
        let first = rows.first().ok_or(Error::InvalidLength(0))?;
        let cols = first.len();
        let mut row_bits = Vec::with_capacity(rows.len());
        for row in rows {
            if row.len() != cols {
                return Err(Error::DimensionMismatch {
                    context: "Gf2Matrix::from_rows",
                    expected: cols,
                    actual: row.len(),
                });
            }
            row_bits.push(row.word());
        }
        Ok(Gf2Matrix {
            rows: rows.len(),
            cols,
            row_bits,
        })
    }

    /// Parses one string per row, e.g. `["011", "101"]`.
    pub fn parse_rows(rows: &[&str]) -> Result<Self> {
        let parsed: Vec<BitVector> = rows
            .iter()
            .map(|r| r.parse())
            .collect::<Result<Vec<_>>>()?;
        Gf2Matrix::from_rows(&parsed)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> BitVector {
        assert!(r < self.rows, "row index {r} out of range");
        BitVector {
            len: self.cols,
            bits: self.row_bits[r],
        }
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.row(r).get(c)
    }

    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        assert!(r < self.rows, "row index {r} out of range");
        let mut row = self.row(r);
        row.set(c, value);
        self.row_bits[r] = row.word();
    }

    /// Matrix-vector product over GF(2): result bit `r` is the parity of the
    /// overlap between row `r` and `x`.
    pub fn mul_vector(&self, x: &BitVector) -> Result<BitVector> {
        if x.len() != self.cols {
            return Err(Error::DimensionMismatch {
                context: "Gf2Matrix::mul_vector",
                expected: self.cols,
                actual: x.len(),
            });
        }
        let mut out = BitVector::zeros(self.rows)?;
        for r in 0..self.rows {
            let parity = (self.row_bits[r] & x.word()).count_ones() & 1;
            if parity == 1 {
                out.set(r, true);
            }
        }
        Ok(out)
    }

    /// Rank over GF(2), computed on a scratch copy by row reduction.
    pub fn rank(&self) -> usize {
        let mut rows = self.row_bits.clone();
        let mut rank = 0;
        for bit in (0..self.cols).rev() {
            let mask = 1u64 << bit;
            let Some(pivot) = (rank..rows.len()).find(|&i| rows[i] & mask != 0) else {
                continue;
            };
            rows.swap(rank, pivot);
            let pivot_row = rows[rank];
            for (i, row) in rows.iter_mut().enumerate() {
                if i != rank && *row & mask != 0 {
                    *row ^= pivot_row;
                }
            }
            rank += 1;
        }
        rank
    }
}

impl fmt::Display for Gf2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            if r > 0 {
                f.write_str("\n")?;
            }
            write!(f, "{}", self.row(r))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Gf2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Gf2Matrix({}x{})", self.rows, self.cols)
    }
}
