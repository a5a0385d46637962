//! Dense, word-packed linear algebra over GF(2).
//!
//! Rows are stored as [`BitVec`]s of `u64` words, so every row operation is a
//! word-parallel XOR. Matrices are dense: the largest systems built here have a
//! few thousand columns, where packed rows beat any sparse representation.

use std::fmt;

use crate::error::{Error, Result};

/// A fixed-length vector over GF(2), packed into 64-bit words.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitVec {
    words: Vec<u64>,
    len: usize,
}

#[inline]
fn word_count(len: usize) -> usize {
    len.div_ceil(64)
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        Self {
            words: vec![0; word_count(len)],
            len,
        }
    }

    pub fn unit(len: usize, index: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(index, true);
        v
    }

    pub fn from_bools<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let mut words = Vec::new();
        let mut len = 0;
        for b in bits {
            if len % 64 == 0 {
                words.push(0);
            }
            if b {
                words[len / 64] |= 1 << (len % 64);
            }
            len += 1;
        }
        Self { words, len }
    }

    /// Builds a vector of length `len` with ones at `positions`.
    pub fn from_positions(len: usize, positions: &[usize]) -> Self {
        let mut v = Self::zeros(len);
        for &p in positions {
            v.set(p, true);
        }
        v
    }

    /// Parses a string of `0`/`1` characters (whitespace ignored).
    pub fn parse_binary(s: &str) -> Result<Self> {
        s.chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::Parse(format!("invalid binary digit '{other}'"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(Self::from_bools)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        debug_assert!(i < self.len);
        let mask = 1u64 << (i % 64);
        if value {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / 64] ^= 1 << (i % 64);
    }

    #[inline]
    pub fn xor_assign(&mut self, other: &BitVec) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= *b;
        }
    }

    #[inline]
    pub fn or_assign(&mut self, other: &BitVec) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= *b;
        }
    }

    pub fn xor(&self, other: &BitVec) -> BitVec {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    #[inline]
    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Inner product mod 2.
    #[inline]
    pub fn dot(&self, other: &BitVec) -> bool {
        debug_assert_eq!(self.len, other.len);
        let mut acc = 0u64;
        for (a, b) in self.words.iter().zip(&other.words) {
            acc ^= a & b;
        }
        acc.count_ones() & 1 == 1
    }

    /// Number of positions set in both vectors.
    pub fn and_count(&self, other: &BitVec) -> usize {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    /// Number of positions set in `self` but not in `other`.
    pub fn and_not_count(&self, other: &BitVec) -> usize {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & !b).count_ones() as usize)
            .sum()
    }

    pub fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let t = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(wi * 64 + t)
                }
            })
        })
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    /// Concatenation `self | other`.
    pub fn concat(&self, other: &BitVec) -> BitVec {
        BitVec::from_bools(self.iter().chain(other.iter()))
    }

    /// Copy of bits `[start, start + len)`.
    pub fn slice(&self, start: usize, len: usize) -> BitVec {
        BitVec::from_bools((start..start + len).map(|i| self.get(i)))
    }

    /// Bits at the given positions, in order.
    pub fn select(&self, positions: &[usize]) -> BitVec {
        BitVec::from_bools(positions.iter().map(|&p| self.get(p)))
    }

    pub fn to_binary_string(&self) -> String {
        self.iter().map(|b| if b { '1' } else { '0' }).collect()
    }

    /// Lexicographic comparison by index order (bit 0 most significant).
    pub fn lex_cmp(&self, other: &BitVec) -> std::cmp::Ordering {
        for (a, b) in self.words.iter().zip(&other.words) {
            if a != b {
                let diff = a ^ b;
                let lowest = diff.trailing_zeros();
                // the vector holding a zero at the first differing index sorts first
                return if (a >> lowest) & 1 == 0 {
                    std::cmp::Ordering::Less
                } else {
                    std::cmp::Ordering::Greater
                };
            }
        }
        self.len.cmp(&other.len)
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVec({})", self.to_binary_string())
    }
}

impl fmt::Display for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_binary_string())
    }
}

/// Reduced row echelon form together with its pivot structure.
#[derive(Clone, Debug)]
pub struct Rref {
    pub matrix: Gf2Matrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

/// A dense row-major matrix over GF(2).
#[derive(Clone, PartialEq, Eq)]
pub struct Gf2Matrix {
    rows: Vec<BitVec>,
    cols: usize,
}

impl fmt::Debug for Gf2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Gf2Matrix {}x{}", self.rows.len(), self.cols)?;
        for r in &self.rows {
            writeln!(f, "  {r}")?;
        }
        Ok(())
    }
}

impl Gf2Matrix {
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

    /// Builds a matrix from rows; all rows must have length `cols`.
    pub fn from_rows(rows: Vec<BitVec>, cols: usize) -> Result<Self> {
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::Dimension(format!(
                "row of length {} in matrix with {cols} columns",
                bad.len()
            )));
        }
        Ok(Self { rows, cols })
    }

    /// Parses rows of `0`/`1` strings.
    pub fn from_strs(rows: &[&str]) -> Result<Self> {
        let parsed = rows
            .iter()
            .map(|r| BitVec::parse_binary(r))
            .collect::<Result<Vec<_>>>()?;
        let cols = parsed.first().map_or(0, BitVec::len);
        Self::from_rows(parsed, cols)
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows.len()
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn row(&self, i: usize) -> &BitVec {
        &self.rows[i]
    }

    pub fn row_vecs(&self) -> &[BitVec] {
        &self.rows
    }

    pub fn into_rows(self) -> Vec<BitVec> {
        self.rows
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r].get(c)
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: bool) {
        self.rows[r].set(c, v)
    }

    pub fn push_row(&mut self, row: BitVec) -> Result<()> {
        if row.len() != self.cols {
            return Err(Error::Dimension(format!(
                "row of length {} pushed to matrix with {} columns",
                row.len(),
                self.cols
            )));
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn transpose(&self) -> Gf2Matrix {
        let mut t = Gf2Matrix::zeros(self.cols, self.rows());
        for (r, row) in self.rows.iter().enumerate() {
            for c in row.iter_ones() {
                t.rows[c].set(r, true);
            }
        }
        t
    }

    /// Matrix-vector product `M·v`.
    pub fn mul_vec(&self, v: &BitVec) -> Result<BitVec> {
        if v.len() != self.cols {
            return Err(Error::Dimension(format!(
                "vector of length {} times matrix with {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok(BitVec::from_bools(self.rows.iter().map(|r| r.dot(v))))
    }

    /// Linear combination of rows selected by `coeffs` (i.e. `coeffsᵀ·M`).
    pub fn combine_rows(&self, coeffs: &BitVec) -> BitVec {
        let mut out = BitVec::zeros(self.cols);
        for i in coeffs.iter_ones() {
            out.xor_assign(&self.rows[i]);
        }
        out
    }

    /// Matrix product `self·other`.
    pub fn mul(&self, other: &Gf2Matrix) -> Result<Gf2Matrix> {
        if self.cols != other.rows() {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows(),
                self.cols,
                other.rows(),
                other.cols
            )));
        }
        let rows = self.rows.iter().map(|r| other.combine_rows(r)).collect();
        Ok(Gf2Matrix {
            rows,
            cols: other.cols,
        })
    }

    /// Reduced row echelon form over GF(2).
    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let pivots = m.reduce_in_place(None);
        let rank = pivots.len();
        Rref {
            matrix: m,
            rank,
            pivots,
        }
    }

    /// Row-reduces in place, returning pivot columns. When `track` is given,
    /// every row operation is mirrored on it (used to record the transform).
    fn reduce_in_place(&mut self, mut track: Option<&mut Gf2Matrix>) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows.len() {
                break;
            }
            let Some(p) = (r..self.rows.len()).find(|&i| self.rows[i].get(c)) else {
                continue;
            };
            self.rows.swap(r, p);
            if let Some(t) = track.as_deref_mut() {
                t.rows.swap(r, p);
            }
            let pivot_row = self.rows[r].clone();
            let pivot_track = track.as_deref().map(|t| t.rows[r].clone());
            for i in 0..self.rows.len() {
                if i != r && self.rows[i].get(c) {
                    self.rows[i].xor_assign(&pivot_row);
                    if let (Some(t), Some(pt)) = (track.as_deref_mut(), pivot_track.as_ref()) {
                        t.rows[i].xor_assign(pt);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// Basis of the null space `{x : M·x = 0}`; has `cols - rank` vectors.
    pub fn kernel(&self) -> Vec<BitVec> {
        let Rref { matrix, pivots, .. } = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = BitVec::unit(self.cols, free);
                for (row, &p) in pivots.iter().enumerate() {
                    if matrix.rows[row].get(free) {
                        v.set(p, true);
                    }
                }
                v
            })
            .collect()
    }

    /// Some `x` with `M·x = y`, or [`Error::Inconsistent`].
    pub fn solve(&self, y: &BitVec) -> Result<BitVec> {
        LinearSolver::new(self).solve(y)
    }

    /// A matrix `F` with `S·F = I`, where `S = self` has full row rank.
    ///
    /// Column `j` of `F` is a vector with syndrome equal to the `j`-th unit
    /// vector under `S`.
    pub fn right_inverse(&self) -> Result<Gf2Matrix> {
        let solver = LinearSolver::new(self);
        if solver.rank != self.rows() {
            return Err(Error::NoRightInverse {
                rows: self.rows(),
                rank: solver.rank,
            });
        }
        let mut f = Gf2Matrix::zeros(self.cols, self.rows());
        for j in 0..self.rows() {
            let col = solver.solve(&BitVec::unit(self.rows(), j))?;
            for i in col.iter_ones() {
                f.rows[i].set(j, true);
            }
        }
        Ok(f)
    }

    /// Columns `cols` of the matrix, in order.
    pub fn select_columns(&self, cols: &[usize]) -> Gf2Matrix {
        Gf2Matrix {
            rows: self.rows.iter().map(|r| r.select(cols)).collect(),
            cols: cols.len(),
        }
    }

    /// Stacks rows of `other` beneath `self`.
    pub fn vstack(&self, other: &Gf2Matrix) -> Result<Gf2Matrix> {
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        Gf2Matrix::from_rows(rows, self.cols)
    }
}

/// Precomputed elimination of `M` for solving `M·x = y` for many right-hand sides.
///
/// Stores the transform `T` with `T·M` in reduced row echelon form; then
/// `M·x = y` is solvable iff `T·y` vanishes below the rank.
#[derive(Clone, Debug)]
pub struct LinearSolver {
    transform: Gf2Matrix,
    pivots: Vec<usize>,
    rank: usize,
    cols: usize,
}

impl LinearSolver {
    pub fn new(m: &Gf2Matrix) -> Self {
        let mut reduced = m.clone();
        let mut transform = Gf2Matrix::identity(m.rows());
        let pivots = reduced.reduce_in_place(Some(&mut transform));
        Self {
            rank: pivots.len(),
            transform,
            pivots,
            cols: m.cols(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn solve(&self, y: &BitVec) -> Result<BitVec> {
        if y.len() != self.transform.cols() {
            return Err(Error::Dimension(format!(
                "right-hand side of length {} for system with {} equations",
                y.len(),
                self.transform.cols()
            )));
        }
        let ty = self.transform.mul_vec(y)?;
        if (self.rank..ty.len()).any(|i| ty.get(i)) {
            return Err(Error::Inconsistent);
        }
        let mut x = BitVec::zeros(self.cols);
        for (row, &p) in self.pivots.iter().enumerate() {
            if ty.get(row) {
                x.set(p, true);
            }
        }
        Ok(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn steane_x_checks() -> Gf2Matrix {
        // legs 1..7 of the Steane tile with the bulk column removed
        Gf2Matrix::from_strs(&["1100011", "0111001", "0001111"]).unwrap()
    }

    #[test]
    fn rref_identity_and_zero() {
        let id = Gf2Matrix::identity(3);
        let r = id.rref();
        assert_eq!(r.rank, 3);
        assert_eq!(r.matrix, id);
        let z = Gf2Matrix::zeros(2, 4);
        let r = z.rref();
        assert_eq!(r.rank, 0);
        assert_eq!(r.matrix, z);
    }

    #[test]
    fn rref_steane_rank_three() {
        let r = steane_x_checks().rref();
        assert_eq!(r.rank, 3);
        // idempotent
        assert_eq!(r.matrix.rref().matrix, r.matrix);
    }

    #[test]
    fn solve_examples() {
        let id = Gf2Matrix::identity(4);
        let y = BitVec::parse_binary("1011").unwrap();
        assert_eq!(id.solve(&y).unwrap(), y);

        let m = Gf2Matrix::from_strs(&["11"]).unwrap();
        let x = m.solve(&BitVec::parse_binary("1").unwrap()).unwrap();
        assert_eq!(m.mul_vec(&x).unwrap(), BitVec::parse_binary("1").unwrap());

        let z = Gf2Matrix::zeros(1, 1);
        assert!(matches!(
            z.solve(&BitVec::parse_binary("1").unwrap()),
            Err(Error::Inconsistent)
        ));
    }

    #[test]
    fn right_inverse_examples() {
        let id = Gf2Matrix::identity(3);
        assert_eq!(id.right_inverse().unwrap(), id);

        let s = Gf2Matrix::from_strs(&["110", "011"]).unwrap();
        let f = s.right_inverse().unwrap();
        assert_eq!((f.rows(), f.cols()), (3, 2));
        assert_eq!(s.mul(&f).unwrap(), Gf2Matrix::identity(2));

        let s = steane_x_checks();
        let f = s.right_inverse().unwrap();
        assert_eq!(s.mul(&f).unwrap(), Gf2Matrix::identity(3));
    }

    #[test]
    fn right_inverse_rejects_dependent_rows() {
        let s = Gf2Matrix::from_strs(&["110", "011", "101"]).unwrap();
        assert!(matches!(
            s.right_inverse(),
            Err(Error::NoRightInverse { rows: 3, rank: 2 })
        ));
    }

    #[test]
    fn kernel_examples() {
        assert!(Gf2Matrix::identity(5).kernel().is_empty());
        let k = Gf2Matrix::from_strs(&["11"]).unwrap().kernel();
        assert_eq!(k, vec![BitVec::parse_binary("11").unwrap()]);
        assert_eq!(Gf2Matrix::zeros(1, 3).kernel().len(), 3);
    }

    #[test]
    fn lex_cmp_orders_by_first_index() {
        let a = BitVec::parse_binary("0110").unwrap();
        let b = BitVec::parse_binary("1000").unwrap();
        assert_eq!(a.lex_cmp(&b), std::cmp::Ordering::Less);
        assert_eq!(b.lex_cmp(&a), std::cmp::Ordering::Greater);
        assert_eq!(a.lex_cmp(&a), std::cmp::Ordering::Equal);
    }

    #[test]
    fn iter_ones_crosses_word_boundary() {
        let v = BitVec::from_positions(130, &[0, 63, 64, 129]);
        assert_eq!(v.iter_ones().collect::<Vec<_>>(), vec![0, 63, 64, 129]);
        assert_eq!(v.count_ones(), 4);
        assert_eq!(v.first_one(), Some(0));
    }
}
