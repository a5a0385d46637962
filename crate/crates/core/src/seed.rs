//! Seed-code tensors: extended stabilizer tableaus on `n + k` legs.
//!
//! A seed tensor is the stabilizer state fixed by the code's stabilizers and
//! its logical operators extended onto the bulk legs. Legs are kept in the
//! cyclic order used when the tensor is drawn as a polygon, with bulk legs at
//! their printed slot.

use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::pauli::{self, PauliVector};

/// An ordered extended stabilizer tableau on `n + k` legs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeedCode {
    pub name: String,
    /// Leg labels in cyclic order.
    pub leg_labels: Vec<String>,
    /// `true` for bulk (logical) legs.
    pub bulk: Vec<bool>,
    pub generators: Vec<PauliVector>,
}

impl SeedCode {
    pub fn new(
        name: &str,
        leg_labels: &[&str],
        bulk: Vec<bool>,
        generators: &[&str],
    ) -> Result<Self> {
        let generators = generators
            .iter()
            .map(|g| g.parse::<PauliVector>())
            .collect::<Result<Vec<_>>>()?;
        let seed = Self {
            name: name.to_string(),
            leg_labels: leg_labels.iter().map(|s| s.to_string()).collect(),
            bulk,
            generators,
        };
        seed.validate()?;
        Ok(seed)
    }

    /// Total leg count `n + k`.
    pub fn legs(&self) -> usize {
        self.leg_labels.len()
    }

    /// Number of planar (physical) legs.
    pub fn n(&self) -> usize {
        self.bulk.iter().filter(|b| !**b).count()
    }

    /// Number of bulk (logical) legs.
    pub fn k(&self) -> usize {
        self.bulk.iter().filter(|b| **b).count()
    }

    /// Indices of planar legs, in cyclic order.
    pub fn planar_legs(&self) -> Vec<usize> {
        (0..self.legs()).filter(|&i| !self.bulk[i]).collect()
    }

    pub fn bulk_legs(&self) -> Vec<usize> {
        (0..self.legs()).filter(|&i| self.bulk[i]).collect()
    }

    /// Checks generator count, lengths, commutation and independence.
    pub fn validate(&self) -> Result<()> {
        let m = self.legs();
        if self.bulk.len() != m {
            return Err(Error::Invariant(format!(
                "{}: {} bulk flags for {m} legs",
                self.name,
                self.bulk.len()
            )));
        }
        if self.generators.len() != m {
            return Err(Error::Invariant(format!(
                "{}: {} generators for {m} legs",
                self.name,
                self.generators.len()
            )));
        }
        if let Some(g) = self.generators.iter().find(|g| g.n() != m) {
            return Err(Error::Invariant(format!(
                "{}: generator {g} has wrong length",
                self.name
            )));
        }
        for (i, a) in self.generators.iter().enumerate() {
            for b in &self.generators[i + 1..] {
                if a.anticommutes(b) {
                    return Err(Error::Invariant(format!(
                        "{}: generators {a} and {b} anticommute",
                        self.name
                    )));
                }
            }
        }
        let rank = pauli::symplectic_rank(&self.generators);
        if rank != m {
            return Err(Error::Invariant(format!(
                "{}: generators have rank {rank}, expected {m}",
                self.name
            )));
        }
        Ok(())
    }

    /// Whether the tensor is an isometry from the legs in `inputs` to the rest.
    ///
    /// Holds iff no non-trivial element of the stabilizer group is supported
    /// inside `inputs`, i.e. the generators restricted to the complement keep
    /// full rank.
    pub fn is_isometry(&self, inputs: &[usize]) -> Result<bool> {
        let m = self.legs();
        if inputs.len() * 2 > m {
            return Err(Error::InvalidArgument(format!(
                "input block of size {} exceeds half of {m} legs",
                inputs.len()
            )));
        }
        if let Some(&bad) = inputs.iter().find(|&&i| i >= m) {
            return Err(Error::InvalidArgument(format!("leg {bad} out of range")));
        }
        let outside: Vec<usize> = (0..m).filter(|i| !inputs.contains(i)).collect();
        let restricted: Vec<PauliVector> = self
            .generators
            .iter()
            .map(|g| g.restrict(&outside))
            .collect();
        let rank = pauli::symplectic_matrix(&restricted, outside.len()).rank();
        Ok(rank == self.generators.len())
    }

    /// Isometry for every cyclically contiguous block of at most half the legs.
    pub fn is_block_perfect(&self) -> bool {
        let m = self.legs();
        (0..=m / 2).all(|size| {
            (0..m).all(|start| {
                let block: Vec<usize> = (0..size).map(|j| (start + j) % m).collect();
                self.is_isometry(&block).unwrap_or(false)
            })
        })
    }

    /// Isometry for every subset of at most half the legs.
    pub fn is_perfect(&self) -> bool {
        let m = self.legs();
        (0u32..1 << m)
            .filter(|mask| mask.count_ones() as usize * 2 <= m)
            .all(|mask| {
                let subset: Vec<usize> = (0..m).filter(|i| mask >> i & 1 == 1).collect();
                self.is_isometry(&subset).unwrap_or(false)
            })
    }

    /// The same tensor with every leg cyclically relabelled by `shift`.
    pub fn rotated(&self, shift: usize) -> SeedCode {
        let m = self.legs();
        let order: Vec<usize> = (0..m).map(|i| (i + shift) % m).collect();
        SeedCode {
            name: self.name.clone(),
            leg_labels: order.iter().map(|&i| self.leg_labels[i].clone()).collect(),
            bulk: order.iter().map(|&i| self.bulk[i]).collect(),
            generators: self.generators.iter().map(|g| g.restrict(&order)).collect(),
        }
    }

    /// Writes the header `name n k leg_order bulk_flags` followed by the tableau.
    pub fn write_to<W: Write>(&self, mut w: W) -> Result<()> {
        let flags: String = self
            .bulk
            .iter()
            .map(|&b| if b { '1' } else { '0' })
            .collect();
        writeln!(
            w,
            "{} {} {} {} {}",
            self.name,
            self.n(),
            self.k(),
            self.leg_labels.join(","),
            flags
        )?;
        pauli::write_tableau(w, &self.generators)
    }

    pub fn read_from<R: BufRead>(reader: R) -> Result<SeedCode> {
        let mut lines = reader.lines();
        let header = loop {
            match lines.next() {
                None => return Err(Error::Parse("missing seed header line".into())),
                Some(line) => {
                    let line = line?;
                    let t = line.trim();
                    if !t.is_empty() && !t.starts_with('#') {
                        break t.to_string();
                    }
                }
            }
        };
        let fields: Vec<&str> = header.split_whitespace().collect();
        let [name, n, k, order, flags] = fields[..] else {
            return Err(Error::Parse(format!("bad seed header '{header}'")));
        };
        let parse = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| Error::Parse(format!("bad count '{s}'")))
        };
        let (n, k) = (parse(n)?, parse(k)?);
        let leg_labels: Vec<String> = order.split(',').map(str::to_string).collect();
        let bulk = flags
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                o => Err(Error::Parse(format!("bad bulk flag '{o}'"))),
            })
            .collect::<Result<Vec<_>>>()?;
        let rest: String = lines
            .map(|l| l.map(|s| s + "\n"))
            .collect::<std::io::Result<String>>()?;
        let generators = pauli::read_tableau(rest.as_bytes())?;
        let seed = SeedCode {
            name: name.to_string(),
            leg_labels,
            bulk,
            generators,
        };
        seed.validate()?;
        if seed.n() != n || seed.k() != k {
            return Err(Error::Parse(format!(
                "header says n={n} k={k} but flags give n={} k={}",
                seed.n(),
                seed.k()
            )));
        }
        Ok(seed)
    }
}

/// Steane code tensor, legs `(1,2,3,4,5,6,L,7)`.
pub fn steane_tensor() -> SeedCode {
    SeedCode::new(
        "steane",
        &["1", "2", "3", "4", "5", "6", "L", "7"],
        vec![false, false, false, false, false, false, true, false],
        &[
            "XXIIIXIX", "IXXXIIIX", "IIIXXXIX", "ZZIIIZIZ", "IZZZIIIZ", "IIIZZZIZ", "XXXXXXXX",
            "ZZZZZZZZ",
        ],
    )
    .expect("catalog tableau is valid")
}

/// `[[5,1,2]]` surface code fragment tensor, legs `(1,2,3,4,L,5)`.
pub fn scf_tensor() -> SeedCode {
    SeedCode::new(
        "scf",
        &["1", "2", "3", "4", "L", "5"],
        vec![false, false, false, false, true, false],
        &["XXIXII", "IIXXIX", "ZIZZII", "IZIZIZ", "XIXIXI", "IIZIZZ"],
    )
    .expect("catalog tableau is valid")
}

/// `[[5,1,3]]` code tensor, legs `(1,2,3,4,5,L)`: cyclic shifts of `XZZXI`
/// plus the extended logicals `X_L·X⊗5` and `Z_L·Z⊗5`.
pub fn five_qubit_tensor() -> SeedCode {
    SeedCode::new(
        "five-qubit",
        &["1", "2", "3", "4", "5", "L"],
        vec![false, false, false, false, false, true],
        &["XZZXII", "IXZZXI", "XIXZZI", "ZXIXZI", "XXXXXX", "ZZZZZZ"],
    )
    .expect("catalog tableau is valid")
}

/// Catalog lookup by name.
pub fn by_name(name: &str) -> Result<SeedCode> {
    match name {
        "steane" => Ok(steane_tensor()),
        "scf" => Ok(scf_tensor()),
        "five-qubit" | "five_qubit" | "happy" => Ok(five_qubit_tensor()),
        other => Err(Error::InvalidArgument(format!("unknown seed code '{other}'"))),
    }
}

/// The `[[n+k, 0]]` state obtained by treating every bulk leg as planar.
pub fn blank_tile(seed: &SeedCode) -> Result<SeedCode> {
    if seed.k() == 0 {
        return Err(Error::InvalidArgument(format!(
            "{} has no bulk leg to blank",
            seed.name
        )));
    }
    Ok(SeedCode {
        name: format!("{}-blank", seed.name),
        leg_labels: seed.leg_labels.clone(),
        bulk: vec![false; seed.legs()],
        generators: seed.generators.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn product_state() -> SeedCode {
        SeedCode::new("product", &["1", "2"], vec![false, false], &["ZI", "IZ"]).unwrap()
    }

    #[test]
    fn steane_rows_match_catalog() {
        let s = steane_tensor();
        assert_eq!((s.n(), s.k()), (7, 1));
        assert_eq!(s.generators[0].to_string(), "XXIIIXIX");
        assert_eq!(s.generators[6].to_string(), "XXXXXXXX");
        assert_eq!(s.bulk_legs(), vec![6]);
    }

    #[test]
    fn scf_rows_match_catalog() {
        let s = scf_tensor();
        assert_eq!((s.n(), s.k()), (5, 1));
        assert_eq!(s.generators[0].to_string(), "XXIXII");
        assert_eq!(s.generators[5].to_string(), "IIZIZZ");
        assert_eq!(pauli::symplectic_rank(&s.generators), 6);
    }

    #[test]
    fn catalog_properties() {
        assert!(steane_tensor().is_block_perfect());
        assert!(scf_tensor().is_block_perfect());
        assert!(five_qubit_tensor().is_perfect());
        assert!(five_qubit_tensor().is_block_perfect());
        assert!(!steane_tensor().is_perfect());
        assert!(!scf_tensor().is_perfect());
    }

    #[test]
    fn isometry_examples() {
        assert!(steane_tensor().is_isometry(&[6, 7]).unwrap());
        assert!(scf_tensor().is_isometry(&[]).unwrap());
        assert!(!product_state().is_isometry(&[1]).unwrap());
        assert!(!product_state().is_block_perfect());
        assert!(steane_tensor().is_isometry(&[0, 1, 2, 3, 4]).is_err());
    }

    #[test]
    fn blank_tile_keeps_generators() {
        let b = blank_tile(&scf_tensor()).unwrap();
        assert_eq!((b.n(), b.k()), (6, 0));
        assert_eq!(b.generators, scf_tensor().generators);
        let b = blank_tile(&five_qubit_tensor()).unwrap();
        assert_eq!((b.n(), b.k()), (6, 0));
        assert!(blank_tile(&b).is_err());
    }

    #[test]
    fn block_perfect_is_rotation_invariant() {
        for seed in [steane_tensor(), scf_tensor(), five_qubit_tensor()] {
            for shift in 0..seed.legs() {
                assert!(seed.rotated(shift).is_block_perfect(), "{} {shift}", seed.name);
            }
        }
    }

    #[test]
    fn seed_text_round_trip() {
        for seed in [steane_tensor(), scf_tensor(), five_qubit_tensor()] {
            let mut buf = Vec::new();
            seed.write_to(&mut buf).unwrap();
            let back = SeedCode::read_from(buf.as_slice()).unwrap();
            assert_eq!(back, seed);
        }
    }
}
