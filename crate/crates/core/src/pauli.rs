//! Pauli operators in the binary symplectic representation, up to phase.
//!
//! An `n`-qubit Pauli `X^a Z^b` is stored as the pair of bit-vectors `(a, b)`.
//! Phases are never tracked: every group considered is fixed by convention to
//! its +1 eigenspace, and syndromes depend only on commutation.

use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::gf2::{BitVec, Gf2Matrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    pub fn bits(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }

    pub fn to_char(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    pub fn from_char(c: char) -> Result<Self> {
        match c {
            'I' | '_' | '.' => Ok(Pauli::I),
            'X' => Ok(Pauli::X),
            'Y' => Ok(Pauli::Y),
            'Z' => Ok(Pauli::Z),
            other => Err(Error::Parse(format!("invalid Pauli character '{other}'"))),
        }
    }
}

impl fmt::Display for Pauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_char())
    }
}

/// An `n`-qubit Pauli operator as an (x-part, z-part) pair.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliVector {
    x: BitVec,
    z: BitVec,
}

impl PauliVector {
    pub fn identity(n: usize) -> Self {
        Self {
            x: BitVec::zeros(n),
            z: BitVec::zeros(n),
        }
    }

    pub fn new(x: BitVec, z: BitVec) -> Result<Self> {
        if x.len() != z.len() {
            return Err(Error::Dimension(format!(
                "x-part has length {} but z-part {}",
                x.len(),
                z.len()
            )));
        }
        Ok(Self { x, z })
    }

    /// A single-qubit Pauli `p` acting on qubit `q` of `n`.
    pub fn single(n: usize, q: usize, p: Pauli) -> Self {
        let mut v = Self::identity(n);
        v.set(q, p);
        v
    }

    /// Splits a length-`2n` vector laid out as `(x | z)`.
    pub fn from_symplectic(v: &BitVec) -> Result<Self> {
        if v.len() % 2 != 0 {
            return Err(Error::Dimension(format!(
                "symplectic vector of odd length {}",
                v.len()
            )));
        }
        let n = v.len() / 2;
        Ok(Self {
            x: v.slice(0, n),
            z: v.slice(n, n),
        })
    }

    pub fn to_symplectic(&self) -> BitVec {
        self.x.concat(&self.z)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.x.len()
    }

    #[inline]
    pub fn x(&self) -> &BitVec {
        &self.x
    }

    #[inline]
    pub fn z(&self) -> &BitVec {
        &self.z
    }

    pub fn x_mut(&mut self) -> &mut BitVec {
        &mut self.x
    }

    pub fn z_mut(&mut self) -> &mut BitVec {
        &mut self.z
    }

    pub fn get(&self, q: usize) -> Pauli {
        Pauli::from_bits(self.x.get(q), self.z.get(q))
    }

    pub fn set(&mut self, q: usize, p: Pauli) {
        let (x, z) = p.bits();
        self.x.set(q, x);
        self.z.set(q, z);
    }

    /// Number of qubits acted on non-trivially.
    pub fn weight(&self) -> usize {
        self.x
            .words()
            .iter()
            .zip(self.z.words())
            .map(|(a, b)| (a | b).count_ones() as usize)
            .sum()
    }

    /// `popcount(x) + popcount(z)`: Y counts twice.
    pub fn sector_weight(&self) -> usize {
        self.x.count_ones() + self.z.count_ones()
    }

    pub fn is_identity(&self) -> bool {
        self.x.is_zero() && self.z.is_zero()
    }

    pub fn is_x_type(&self) -> bool {
        self.z.is_zero()
    }

    pub fn is_z_type(&self) -> bool {
        self.x.is_zero()
    }

    /// Product up to phase.
    pub fn mul_assign(&mut self, other: &PauliVector) {
        self.x.xor_assign(&other.x);
        self.z.xor_assign(&other.z);
    }

    pub fn mul(&self, other: &PauliVector) -> PauliVector {
        let mut out = self.clone();
        out.mul_assign(other);
        out
    }

    /// `x·z' + z·x' mod 2`; `false` iff the operators commute.
    pub fn symplectic_product(&self, other: &PauliVector) -> Result<bool> {
        if self.n() != other.n() {
            return Err(Error::Dimension(format!(
                "symplectic product of {}- and {}-qubit operators",
                self.n(),
                other.n()
            )));
        }
        Ok(self.anticommutes(other))
    }

    /// Unchecked symplectic product; lengths must agree.
    #[inline]
    pub fn anticommutes(&self, other: &PauliVector) -> bool {
        self.x.dot(&other.z) ^ self.z.dot(&other.x)
    }

    /// Restriction to the given qubits, in order.
    pub fn restrict(&self, qubits: &[usize]) -> PauliVector {
        PauliVector {
            x: self.x.select(qubits),
            z: self.z.select(qubits),
        }
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.n())
            .filter(|&q| self.x.get(q) || self.z.get(q))
            .collect()
    }
}

impl fmt::Display for PauliVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for q in 0..self.n() {
            write!(f, "{}", self.get(q))?;
        }
        Ok(())
    }
}

impl fmt::Debug for PauliVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PauliVector({self})")
    }
}

impl FromStr for PauliVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let paulis = s
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(Pauli::from_char)
            .collect::<Result<Vec<_>>>()?;
        let mut v = PauliVector::identity(paulis.len());
        for (q, p) in paulis.into_iter().enumerate() {
            v.set(q, p);
        }
        Ok(v)
    }
}

/// Stacks Pauli rows into the `m × 2n` symplectic matrix `[x | z]`.
pub fn symplectic_matrix(rows: &[PauliVector], n: usize) -> Gf2Matrix {
    let mut m = Gf2Matrix::zeros(0, 2 * n);
    for r in rows {
        m.push_row(r.to_symplectic())
            .expect("rows share the qubit count");
    }
    m
}

/// Rank of a set of Pauli operators in the symplectic representation.
pub fn symplectic_rank(rows: &[PauliVector]) -> usize {
    match rows.first() {
        None => 0,
        Some(r) => symplectic_matrix(rows, r.n()).rank(),
    }
}

/// The `m × 2n` matrix `[z | x]` mapping an error `(x | z)` to its syndrome.
pub fn check_matrix(stabilizers: &[PauliVector], n: usize) -> Gf2Matrix {
    let mut m = Gf2Matrix::zeros(0, 2 * n);
    for s in stabilizers {
        m.push_row(s.z().concat(s.x()))
            .expect("rows share the qubit count");
    }
    m
}

/// Reads the tableau text format: one generator per line over `{I,X,Y,Z}`,
/// `#` comment lines and blank lines ignored.
pub fn read_tableau<R: BufRead>(reader: R) -> Result<Vec<PauliVector>> {
    let mut rows = Vec::new();
    for line in reader.lines() {
        let line = line?;
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        rows.push(t.parse::<PauliVector>()?);
    }
    if let Some(first) = rows.first() {
        let n = first.n();
        if rows.iter().any(|r| r.n() != n) {
            return Err(Error::Parse("tableau rows have different lengths".into()));
        }
    }
    Ok(rows)
}

pub fn write_tableau<W: Write>(mut w: W, rows: &[PauliVector]) -> Result<()> {
    for r in rows {
        writeln!(w, "{r}")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pv(s: &str) -> PauliVector {
        s.parse().unwrap()
    }

    #[test]
    fn symplectic_product_examples() {
        assert!(pv("X").symplectic_product(&pv("Z")).unwrap());
        assert!(!pv("XI").symplectic_product(&pv("IZ")).unwrap());
        assert!(!pv("XZZXI").symplectic_product(&pv("XZZXI")).unwrap());
        assert!(pv("X").symplectic_product(&pv("XI")).is_err());
    }

    #[test]
    fn weights() {
        let p = pv("XYZI");
        assert_eq!(p.weight(), 3);
        assert_eq!(p.sector_weight(), 4);
    }

    #[test]
    fn tableau_round_trip() {
        let text = "# comment\nXXI\n\nIZZ\n";
        let rows = read_tableau(text.as_bytes()).unwrap();
        assert_eq!(rows, vec![pv("XXI"), pv("IZZ")]);
        let mut out = Vec::new();
        write_tableau(&mut out, &rows).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "XXI\nIZZ\n");
    }

    fn arb_pauli(n: usize) -> impl Strategy<Value = PauliVector> {
        proptest::collection::vec(0u8..4, n).prop_map(|v| {
            let mut p = PauliVector::identity(v.len());
            for (q, c) in v.into_iter().enumerate() {
                p.set(q, [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z][c as usize]);
            }
            p
        })
    }

    proptest! {
        #[test]
        fn symplectic_product_is_bilinear(a in arb_pauli(70), b in arb_pauli(70), c in arb_pauli(70)) {
            let lhs = a.mul(&b).anticommutes(&c);
            let rhs = a.anticommutes(&c) ^ b.anticommutes(&c);
            prop_assert_eq!(lhs, rhs);
            prop_assert!(!a.anticommutes(&a));
        }

        #[test]
        fn text_format_round_trips(a in arb_pauli(40)) {
            let back: PauliVector = a.to_string().parse().unwrap();
            prop_assert_eq!(back, a);
        }
    }
}
