//! Finite communication matrices, input distributions and combinatorial
//! rectangles, together with their text file formats.
//!
//! Matrix files look like
//!
//! ```text
//! sign 2 2
//! +-
//! -+
//! ```
//!
//! with kind `bool` (symbols `0`/`1`) or `sign` (symbols `+`/`-`).
//! Distribution files use the header `dist <rows> <cols>` followed by rows of
//! whitespace-separated rationals (`p/q` or integers).

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest number of rows or columns any exhaustive routine accepts.
pub const MAX_SIDE: usize = 12;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BooleanMatrix {
    rows: usize,
    cols: usize,
    bits: Vec<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SignMatrix {
    rows: usize,
    cols: usize,
    signs: Vec<i8>,
}

/// Either kind of matrix, as read from a matrix file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Matrix {
    Boolean(BooleanMatrix),
    Sign(SignMatrix),
}

fn check_shape(rows: usize, cols: usize) -> Result<()> {
    if rows == 0 || cols == 0 {
        return Err(Error::InvalidArgument(format!(
            "matrix must have at least one row and column, got {rows}x{cols}"
        )));
    }
    Ok(())
}

impl BooleanMatrix {
    pub fn new(rows: usize, cols: usize, bits: Vec<bool>) -> Result<Self> {
        check_shape(rows, cols)?;
        if bits.len() != rows * cols {
            return Err(Error::InvalidArgument(format!(
                "expected {} entries, got {}",
                rows * cols,
                bits.len()
            )));
        }
        Ok(BooleanMatrix { rows, cols, bits })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> bool) -> Result<Self> {
        check_shape(rows, cols)?;
        let mut bits = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                bits.push(f(i, j));
            }
        }
        Ok(BooleanMatrix { rows, cols, bits })
    }

    /// Builds a matrix from rows of 0/1 values. Panics on ragged or empty input;
    /// meant for literals in tests and fixtures.
    pub fn from_rows(rows: &[&[u8]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix literal");
        let bits = rows
            .iter()
            .flat_map(|r| r.iter().map(|&b| {
                assert!(b <= 1, "boolean entries must be 0 or 1");
                b == 1
            }))
            .collect();
        BooleanMatrix::new(rows.len(), cols, bits).expect("valid literal")
    }

    pub fn zeros(rows: usize, cols: usize) -> Result<Self> {
        Self::from_fn(rows, cols, |_, _| false)
    }

    /// Row-major decoding of the low `rows * cols` bits of `code`; bit 0 is entry (0,0).
    pub fn from_code(rows: usize, cols: usize, code: u64) -> Result<Self> {
        Self::from_fn(rows, cols, |i, j| (code >> (i * cols + j)) & 1 == 1)
    }

    pub fn code(&self) -> u64 {
        self.bits
            .iter()
            .enumerate()
            .fold(0u64, |acc, (k, &b)| acc | ((b as u64) << k))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.cols + j]
    }

    pub fn entries(&self) -> &[bool] {
        &self.bits
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn transpose(&self) -> Self {
        BooleanMatrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i)).expect("nonempty")
    }

    /// `J - 2B`: 0 becomes +1 and 1 becomes -1.
    pub fn to_sign(&self) -> SignMatrix {
        SignMatrix {
            rows: self.rows,
            cols: self.cols,
            signs: self.bits.iter().map(|&b| if b { -1 } else { 1 }).collect(),
        }
    }
}

impl SignMatrix {
    pub fn new(rows: usize, cols: usize, signs: Vec<i8>) -> Result<Self> {
        check_shape(rows, cols)?;
        if signs.len() != rows * cols {
            return Err(Error::InvalidArgument(format!(
                "expected {} entries, got {}",
                rows * cols,
                signs.len()
            )));
        }
        if let Some(bad) = signs.iter().find(|&&s| s != 1 && s != -1) {
            return Err(Error::InvalidArgument(format!("sign entry {bad} is not +1 or -1")));
        }
        Ok(SignMatrix { rows, cols, signs })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> i8) -> Result<Self> {
        let mut signs = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                signs.push(f(i, j));
            }
        }
        Self::new(rows, cols, signs)
    }

    /// Panics on malformed input; meant for literals.
    pub fn from_rows(rows: &[&[i8]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix literal");
        let signs = rows.iter().flat_map(|r| r.iter().copied()).collect();
        SignMatrix::new(rows.len(), cols, signs).expect("valid literal")
    }

    /// The all-ones matrix `J`.
    pub fn ones(rows: usize, cols: usize) -> Result<Self> {
        Self::from_fn(rows, cols, |_, _| 1)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, i: usize, j: usize) -> i8 {
        self.signs[i * self.cols + j]
    }

    pub fn entries(&self) -> &[i8] {
        &self.signs
    }

    pub fn transpose(&self) -> Self {
        SignMatrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i)).expect("nonempty")
    }

    pub fn negate(&self) -> Self {
        SignMatrix {
            rows: self.rows,
            cols: self.cols,
            signs: self.signs.iter().map(|s| -s).collect(),
        }
    }

    pub fn permute(&self, row_perm: &[usize], col_perm: &[usize]) -> Self {
        SignMatrix::from_fn(self.rows, self.cols, |i, j| self.get(row_perm[i], col_perm[j]))
            .expect("nonempty")
    }

    /// Inverse of [`BooleanMatrix::to_sign`]: `b = (1 - a) / 2`.
    pub fn to_boolean(&self) -> BooleanMatrix {
        BooleanMatrix {
            rows: self.rows,
            cols: self.cols,
            bits: self.signs.iter().map(|&s| s == -1).collect(),
        }
    }
}

impl Matrix {
    pub fn shape(&self) -> (usize, usize) {
        match self {
            Matrix::Boolean(b) => b.shape(),
            Matrix::Sign(s) => s.shape(),
        }
    }

    /// The sign view; Boolean matrices go through `J - 2B`.
    pub fn as_sign(&self) -> SignMatrix {
        match self {
            Matrix::Boolean(b) => b.to_sign(),
            Matrix::Sign(s) => s.clone(),
        }
    }

    /// The Boolean view; sign matrices go through `(1 - A) / 2`.
    pub fn as_boolean(&self) -> BooleanMatrix {
        match self {
            Matrix::Boolean(b) => b.clone(),
            Matrix::Sign(s) => s.to_boolean(),
        }
    }
}

fn parse_header<'a>(line: &'a str, line_no: usize, kinds: &[&str]) -> Result<(&'a str, usize, usize)> {
    let fields: Vec<&str> = line.split_whitespace().collect();
    if fields.len() != 3 {
        return Err(Error::parse(
            line_no,
            format!("malformed header {line:?}: expected `<kind> <rows> <cols>`"),
        ));
    }
    let kind = fields[0];
    if !kinds.contains(&kind) {
        return Err(Error::parse(
            line_no,
            format!("malformed header: unknown kind {kind:?} (expected one of {kinds:?})"),
        ));
    }
    let dim = |s: &str, what: &str| -> Result<usize> {
        let v: usize = s
            .parse()
            .map_err(|_| Error::parse(line_no, format!("malformed header: {what} {s:?} is not a count")))?;
        if v == 0 {
            return Err(Error::parse(line_no, format!("malformed header: {what} must be at least 1")));
        }
        Ok(v)
    };
    Ok((kind, dim(fields[1], "rows")?, dim(fields[2], "cols")?))
}

fn body_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l.strip_suffix('\r').unwrap_or(l)))
}

/// Parses a matrix file. Errors carry the 1-based line number.
pub fn parse_matrix(text: &str) -> Result<Matrix> {
    let mut lines = body_lines(text);
    let (line_no, header) = lines.next().ok_or_else(|| Error::parse(1, "empty input: missing header"))?;
    let (kind, rows, cols) = parse_header(header, line_no, &["bool", "sign"])?;
    let mut entries: Vec<i8> = Vec::with_capacity(rows * cols);
    let mut seen = 0;
    for (line_no, line) in lines {
        if seen == rows {
            if line.trim().is_empty() {
                continue;
            }
            return Err(Error::parse(line_no, format!("unexpected extra row (header declares {rows})")));
        }
        let symbols: Vec<char> = line.chars().collect();
        if symbols.len() != cols {
            return Err(Error::parse(
                line_no,
                format!("ragged row: expected {cols} symbols, found {}", symbols.len()),
            ));
        }
        for (col, ch) in symbols.into_iter().enumerate() {
            let v = match (kind, ch) {
                ("bool", '0') => 0,
                ("bool", '1') => 1,
                ("sign", '+') => 1,
                ("sign", '-') => -1,
                _ => {
                    return Err(Error::parse(
                        line_no,
                        format!("illegal symbol {ch:?} in column {} of a {kind} matrix", col + 1),
                    ))
                }
            };
            entries.push(v);
        }
        seen += 1;
    }
    if seen < rows {
        return Err(Error::parse(
            seen + 2,
            format!("missing rows: header declares {rows}, found {seen}"),
        ));
    }
    Ok(match kind {
        "bool" => Matrix::Boolean(BooleanMatrix::new(rows, cols, entries.into_iter().map(|v| v == 1).collect())?),
        _ => Matrix::Sign(SignMatrix::new(rows, cols, entries)?),
    })
}

/// Canonical matrix file text (trailing newline included).
pub fn serialize_matrix(m: &Matrix) -> String {
    let mut out = String::new();
    match m {
        Matrix::Boolean(b) => {
            out.push_str(&format!("bool {} {}\n", b.rows, b.cols));
            for i in 0..b.rows {
                out.extend((0..b.cols).map(|j| if b.get(i, j) { '1' } else { '0' }));
                out.push('\n');
            }
        }
        Matrix::Sign(s) => {
            out.push_str(&format!("sign {} {}\n", s.rows, s.cols));
            for i in 0..s.rows {
                out.extend((0..s.cols).map(|j| if s.get(i, j) == 1 { '+' } else { '-' }));
                out.push('\n');
            }
        }
    }
    out
}

impl fmt::Display for BooleanMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&serialize_matrix(&Matrix::Boolean(self.clone())))
    }
}

impl fmt::Display for SignMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&serialize_matrix(&Matrix::Sign(self.clone())))
    }
}

/// A probability distribution on the entries of a matrix, with exact weights.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InputDistribution {
    rows: usize,
    cols: usize,
    weights: Vec<BigRational>,
}

impl InputDistribution {
    pub fn new(rows: usize, cols: usize, weights: Vec<BigRational>) -> Result<Self> {
        check_shape(rows, cols)?;
        if weights.len() != rows * cols {
            return Err(Error::InvalidArgument(format!(
                "expected {} weights, got {}",
                rows * cols,
                weights.len()
            )));
        }
        if let Some(w) = weights.iter().find(|w| w.is_negative()) {
            return Err(Error::InvalidArgument(format!("negative weight {w}")));
        }
        let total: BigRational = weights.iter().sum();
        if !total.is_one() {
            return Err(Error::InvalidArgument(format!("weights sum to {total}, not 1")));
        }
        Ok(InputDistribution { rows, cols, weights })
    }

    pub fn uniform(rows: usize, cols: usize) -> Result<Self> {
        check_shape(rows, cols)?;
        let w = BigRational::new(BigInt::one(), BigInt::from(rows * cols));
        Ok(InputDistribution {
            rows,
            cols,
            weights: vec![w; rows * cols],
        })
    }

    pub fn point_mass(rows: usize, cols: usize, i: usize, j: usize) -> Result<Self> {
        check_shape(rows, cols)?;
        if i >= rows || j >= cols {
            return Err(Error::OutOfDomain { x: i, y: j, rows, cols });
        }
        let mut weights = vec![BigRational::zero(); rows * cols];
        weights[i * cols + j] = BigRational::one();
        Ok(InputDistribution { rows, cols, weights })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.weights[i * self.cols + j]
    }

    pub fn weights(&self) -> &[BigRational] {
        &self.weights
    }

    /// Mass of the cells where the two matrices disagree.
    pub fn disagreement(&self, a: &BooleanMatrix, b: &BooleanMatrix) -> BigRational {
        a.entries()
            .iter()
            .zip(b.entries())
            .zip(&self.weights)
            .filter(|((x, y), _)| x != y)
            .map(|(_, w)| w.clone())
            .sum()
    }
}

impl serde::Serialize for InputDistribution {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("InputDistribution", 3)?;
        st.serialize_field("rows", &self.rows())?;
        st.serialize_field("cols", &self.cols())?;
        let w: Vec<String> = self.weights().iter().map(|w| w.to_string()).collect();
        st.serialize_field("weights", &w)?;
        st.end()
    }
}

/// Parses `p/q`, `-p/q` or an integer.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(BigRational::new(n, d))
        }
        None => s.parse::<BigInt>().ok().map(BigRational::from_integer),
    }
}

pub fn parse_distribution(text: &str) -> Result<InputDistribution> {
    let mut lines = body_lines(text).filter(|(_, l)| !l.trim().is_empty());
    let (line_no, header) = lines.next().ok_or_else(|| Error::parse(1, "empty input: missing header"))?;
    let (_, rows, cols) = parse_header(header, line_no, &["dist"])?;
    let mut weights = Vec::with_capacity(rows * cols);
    let mut seen = 0;
    for (line_no, line) in lines {
        if seen == rows {
            return Err(Error::parse(line_no, format!("unexpected extra row (header declares {rows})")));
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != cols {
            return Err(Error::parse(
                line_no,
                format!("ragged row: expected {cols} weights, found {}", fields.len()),
            ));
        }
        for f in fields {
            let w = parse_rational(f).ok_or_else(|| Error::parse(line_no, format!("illegal weight {f:?}")))?;
            if w.is_negative() {
                return Err(Error::parse(line_no, format!("negative weight {f}")));
            }
            weights.push(w);
        }
        seen += 1;
    }
    if seen < rows {
        return Err(Error::parse(line_no + seen + 1, format!("missing rows: header declares {rows}, found {seen}")));
    }
    InputDistribution::new(rows, cols, weights).map_err(|e| Error::parse(line_no, e.to_string()))
}

pub fn serialize_distribution(d: &InputDistribution) -> String {
    let mut out = format!("dist {} {}\n", d.rows, d.cols);
    for i in 0..d.rows {
        let row: Vec<String> = (0..d.cols).map(|j| d.get(i, j).to_string()).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

/// A combinatorial rectangle `rowSet x colSet`, stored as bit masks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Rectangle {
    pub row_mask: u64,
    pub col_mask: u64,
}

impl Rectangle {
    pub fn contains(&self, i: usize, j: usize) -> bool {
        (self.row_mask >> i) & 1 == 1 && (self.col_mask >> j) & 1 == 1
    }

    pub fn is_empty(&self) -> bool {
        self.row_mask == 0 || self.col_mask == 0
    }

    pub fn row_set(&self) -> Vec<usize> {
        (0..64).filter(|&i| (self.row_mask >> i) & 1 == 1).collect()
    }

    pub fn col_set(&self) -> Vec<usize> {
        (0..64).filter(|&j| (self.col_mask >> j) & 1 == 1).collect()
    }
}

/// All `2^rows * 2^cols` rectangles, row masks outermost, in increasing mask order.
pub fn enumerate_rectangles(rows: usize, cols: usize) -> Result<impl Iterator<Item = Rectangle>> {
    if rows > MAX_SIDE || cols > MAX_SIDE {
        return Err(Error::Guard(format!(
            "rectangle enumeration over {rows}x{cols} exceeds {MAX_SIDE} per side"
        )));
    }
    let col_count = 1u64 << cols;
    Ok((0..(1u64 << rows)).flat_map(move |row_mask| {
        (0..col_count).map(move |col_mask| Rectangle { row_mask, col_mask })
    }))
}
