use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{BitVec, F2Error};

/// Dense matrix over GF(2) stored as word-packed rows.
///
/// Shapes with zero rows or zero columns are valid and behave as the empty
/// linear maps they represent.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: Vec<BitVec>,
    cols: usize,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows: vec![BitVec::zeros(cols); rows],
            cols,
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            rows: (0..n).map(|i| BitVec::unit(n, i)).collect(),
            cols: n,
        }
    }

    /// Builds a matrix from rows that must all have length `cols`.
    pub fn from_rows(rows: Vec<BitVec>, cols: usize) -> Result<Self, F2Error> {
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(F2Error::LengthMismatch {
                expected: cols,
                found: bad.len(),
            });
        }
        Ok(Self { rows, cols })
    }

    /// Builds a matrix from a nested `0`/`1` array.
    ///
    /// # Panics
    ///
    /// Panics if the rows are ragged or contain values other than 0 and 1.
    pub fn from_u8_rows(cols: usize, data: &[&[u8]]) -> Self {
        let rows = data
            .iter()
            .map(|row| {
                assert_eq!(row.len(), cols, "ragged matrix literal");
                BitVec::from_bools(row.iter().map(|&b| {
                    assert!(b <= 1, "matrix entries must be 0 or 1");
                    b == 1
                }))
            })
            .collect();
        Self { rows, cols }
    }

    /// The `|indices| x n` matrix whose rows are the identity rows picked by `indices`.
    pub fn selection(n: usize, indices: &[usize]) -> Result<Self, F2Error> {
        let rows = indices
            .iter()
            .map(|&i| {
                if i >= n {
                    Err(F2Error::IndexOutOfRange { index: i, bound: n })
                } else {
                    Ok(BitVec::unit(n, i))
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self { rows, cols: n })
    }

    #[inline]
    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    #[inline]
    pub fn ncols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn shape(&self) -> (usize, usize) {
        (self.rows.len(), self.cols)
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r].get(c)
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        self.rows[r].set(c, value);
    }

    #[inline]
    pub fn row(&self, r: usize) -> &BitVec {
        &self.rows[r]
    }

    pub fn rows(&self) -> &[BitVec] {
        &self.rows
    }

    pub fn into_rows(self) -> Vec<BitVec> {
        self.rows
    }

    pub(crate) fn rows_mut(&mut self) -> &mut [BitVec] {
        &mut self.rows
    }

    pub fn column(&self, c: usize) -> BitVec {
        BitVec::from_bools(self.rows.iter().map(|r| r.get(c)))
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(BitVec::is_zero)
    }

    pub fn push_row(&mut self, row: BitVec) -> Result<(), F2Error> {
        if row.len() != self.cols {
            return Err(F2Error::LengthMismatch {
                expected: self.cols,
                found: row.len(),
            });
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows.len());
        for (r, row) in self.rows.iter().enumerate() {
            for c in row.ones_iter() {
                out.rows[c].set(r, true);
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Result<Self, F2Error> {
        if self.shape() != other.shape() {
            return Err(F2Error::DimensionMismatch {
                op: "add",
                left: self.shape(),
                right: other.shape(),
            });
        }
        Ok(Self {
            rows: self
                .rows
                .iter()
                .zip(&other.rows)
                .map(|(a, b)| a.xor(b))
                .collect(),
            cols: self.cols,
        })
    }

    /// Matrix product `self * other`.
    pub fn mul(&self, other: &Self) -> Result<Self, F2Error> {
        if self.cols != other.nrows() {
            return Err(F2Error::DimensionMismatch {
                op: "multiply",
                left: self.shape(),
                right: other.shape(),
            });
        }
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let mut acc = BitVec::zeros(other.cols);
                for k in row.ones_iter() {
                    acc.xor_assign(&other.rows[k]);
                }
                acc
            })
            .collect();
        Ok(Self {
            rows,
            cols: other.cols,
        })
    }

    /// `self * v` for a column vector `v`.
    pub fn mul_vec(&self, v: &BitVec) -> Result<BitVec, F2Error> {
        if v.len() != self.cols {
            return Err(F2Error::LengthMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok(BitVec::from_bools(self.rows.iter().map(|r| r.dot(v))))
    }

    /// `vᵀ * self`: the sum of the rows selected by `coeffs`.
    pub fn combine_rows(&self, coeffs: &BitVec) -> Result<BitVec, F2Error> {
        if coeffs.len() != self.nrows() {
            return Err(F2Error::LengthMismatch {
                expected: self.nrows(),
                found: coeffs.len(),
            });
        }
        let mut acc = BitVec::zeros(self.cols);
        for r in coeffs.ones_iter() {
            acc.xor_assign(&self.rows[r]);
        }
        Ok(acc)
    }

    pub fn hstack(&self, other: &Self) -> Result<Self, F2Error> {
        if self.nrows() != other.nrows() {
            return Err(F2Error::DimensionMismatch {
                op: "hstack",
                left: self.shape(),
                right: other.shape(),
            });
        }
        Ok(Self {
            rows: self
                .rows
                .iter()
                .zip(&other.rows)
                .map(|(a, b)| a.concat(b))
                .collect(),
            cols: self.cols + other.cols,
        })
    }

    pub fn vstack(&self, other: &Self) -> Result<Self, F2Error> {
        if self.cols != other.cols {
            return Err(F2Error::DimensionMismatch {
                op: "vstack",
                left: self.shape(),
                right: other.shape(),
            });
        }
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        Ok(Self {
            rows,
            cols: self.cols,
        })
    }

    /// Columns at `indices`, in the given order (repeats allowed).
    pub fn select_columns(&self, indices: &[usize]) -> Result<Self, F2Error> {
        if let Some(&bad) = indices.iter().find(|&&i| i >= self.cols) {
            return Err(F2Error::IndexOutOfRange {
                index: bad,
                bound: self.cols,
            });
        }
        Ok(Self {
            rows: self.rows.iter().map(|r| r.select(indices)).collect(),
            cols: indices.len(),
        })
    }

    pub fn select_rows(&self, indices: &[usize]) -> Result<Self, F2Error> {
        let rows = indices
            .iter()
            .map(|&i| {
                self.rows.get(i).cloned().ok_or(F2Error::IndexOutOfRange {
                    index: i,
                    bound: self.nrows(),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self {
            rows,
            cols: self.cols,
        })
    }

    /// The matrix with the columns in `indices` removed, remaining columns in order.
    pub fn delete_columns(&self, indices: &[usize]) -> Result<Self, F2Error> {
        let mut drop = vec![false; self.cols];
        for &i in indices {
            if i >= self.cols {
                return Err(F2Error::IndexOutOfRange {
                    index: i,
                    bound: self.cols,
                });
            }
            drop[i] = true;
        }
        let keep: Vec<usize> = (0..self.cols).filter(|&c| !drop[c]).collect();
        self.select_columns(&keep)
    }

    /// Kronecker product. Row `(i, k)` maps to `i * b.nrows() + k`, column
    /// `(j, l)` to `j * b.ncols() + l`.
    pub fn kron(&self, other: &Self) -> Self {
        let (bm, bn) = other.shape();
        let mut out = Self::zeros(self.nrows() * bm, self.cols * bn);
        for (i, arow) in self.rows.iter().enumerate() {
            for j in arow.ones_iter() {
                for (k, brow) in other.rows.iter().enumerate() {
                    brow.xor_into_at(&mut out.rows[i * bm + k], j * bn);
                }
            }
        }
        out
    }

    pub fn to_literal(&self) -> String {
        let mut s = String::new();
        for row in &self.rows {
            s.push_str(&row.to_bitstring());
            s.push('\n');
        }
        s
    }
}

impl fmt::Display for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.rows.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{row}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{} [", self.nrows(), self.cols)?;
        for row in &self.rows {
            writeln!(f, "  {row}")?;
        }
        write!(f, "]")
    }
}

/// Parses the textual literal format: one row per line, `0`/`1`/`.` per entry
/// (`.` reads as zero). Blank lines and spaces are ignored.
impl FromStr for BitMatrix {
    type Err = F2Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let rows = s
            .lines()
            .map(|line| {
                line.chars()
                    .filter(|c| !c.is_whitespace())
                    .collect::<String>()
            })
            .filter(|line| !line.is_empty())
            .map(|line| line.parse::<BitVec>())
            .collect::<Result<Vec<_>, _>>()?;
        let cols = rows.first().map_or(0, BitVec::len);
        Self::from_rows(rows, cols).map_err(|_| F2Error::Parse("ragged matrix literal".into()))
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    rows: usize,
    cols: usize,
    bits: Vec<BitVec>,
}

impl Serialize for BitMatrix {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        MatrixRepr {
            rows: self.nrows(),
            cols: self.cols,
            bits: self.rows.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for BitMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = MatrixRepr::deserialize(deserializer)?;
        if repr.bits.len() != repr.rows {
            return Err(serde::de::Error::custom(format!(
                "matrix declares {} rows but carries {}",
                repr.rows,
                repr.bits.len()
            )));
        }
        Self::from_rows(repr.bits, repr.cols).map_err(serde::de::Error::custom)
    }
}
