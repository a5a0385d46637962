//! Bit and word distances of individual logical qubits.
//!
//! The bit distance of qubit `i` is the lowest weight of a logical operator
//! acting on `i` and trivially on every other logical qubit. The word
//! distance drops the second condition: any action on the other logical
//! qubits is allowed.

use std::time::Duration;

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::builder::HolographicCode;
use crate::decoder::{min_weight_coset, Backend, DecodeProblem, WeightFn, DEFAULT_MAX_TABLE_ENTRIES};
use crate::error::{Error, Result};
use crate::gf2::BitVec;
use crate::network::{Bulk, Cost, Domain, TensorNetwork};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sector {
    /// X-type logical operators.
    X,
    /// Z-type logical operators.
    Z,
    /// Any Pauli logical, counted by Pauli weight.
    Pauli,
}

impl std::str::FromStr for Sector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "x" => Ok(Sector::X),
            "z" => Ok(Sector::Z),
            "pauli" => Ok(Sector::Pauli),
            o => Err(Error::InvalidArgument(format!("unknown sector '{o}'"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct DistanceOptions {
    pub backend: Backend,
    pub timeout: Option<Duration>,
    pub max_table_entries: usize,
}

impl Default for DistanceOptions {
    fn default() -> Self {
        Self {
            backend: Backend::Auto,
            timeout: Some(Duration::from_secs(3600)),
            max_table_entries: DEFAULT_MAX_TABLE_ENTRIES,
        }
    }
}

/// A distance, or an upper bound when `certified` is false.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Bounded {
    pub value: usize,
    pub certified: bool,
}

impl Bounded {
    fn min(self, other: Bounded) -> Bounded {
        Bounded {
            value: self.value.min(other.value),
            certified: self.certified && other.certified,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DistanceResult {
    pub qubit: usize,
    pub layer: usize,
    pub sector: Sector,
    pub bit_distance: Bounded,
    pub word_distance: Bounded,
}

fn check_qubit(code: &HolographicCode, qubit: usize) -> Result<()> {
    if qubit >= code.k() {
        return Err(Error::InvalidArgument(format!(
            "logical qubit {qubit} out of range (k = {})",
            code.k()
        )));
    }
    Ok(())
}

fn use_network(code: &HolographicCode, backend: Backend) -> Result<bool> {
    match backend {
        Backend::BranchAndBound => Ok(false),
        Backend::Auto => Ok(code.construction.is_some()),
        Backend::Network if code.construction.is_some() => Ok(true),
        Backend::Network => Err(Error::Unsupported(
            "network backend needs a code built from a tiling".into(),
        )),
    }
}

fn sector_check(code: &HolographicCode, sector: Sector) -> Result<()> {
    if sector != Sector::Pauli && !code.css {
        return Err(Error::NotCss);
    }
    Ok(())
}

fn via_network(
    code: &HolographicCode,
    qubit: usize,
    sector: Sector,
    word: bool,
    options: &DistanceOptions,
) -> Result<Bounded> {
    let construction = code.construction.as_ref().expect("checked by caller");
    let domain = match sector {
        Sector::X => Domain::XType,
        Sector::Z => Domain::ZType,
        Sector::Pauli => Domain::Pauli,
    };
    let net = TensorNetwork::new(construction, domain)?;
    let values: &[u8] = match sector {
        Sector::Pauli => &[1, 2, 3],
        _ => &[1],
    };
    let cost = match sector {
        Sector::Pauli => Cost::Support,
        _ => Cost::Bits,
    };
    let target = vec![0u8; code.n];
    let mut best = usize::MAX;
    for &v in values {
        let bulk: Vec<Bulk> = (0..code.k())
            .map(|j| match (j == qubit, word) {
                (true, _) => Bulk::Fixed(v),
                (false, true) => Bulk::Free,
                (false, false) => Bulk::Fixed(0),
            })
            .collect();
        let sol = net.solve(&target, &bulk, cost, options.max_table_entries)?;
        best = best.min(sol.weight as usize);
    }
    Ok(Bounded {
        value: best,
        certified: true,
    })
}

fn via_branch_and_bound(
    code: &HolographicCode,
    qubit: usize,
    sector: Sector,
    word: bool,
    options: &DistanceOptions,
) -> Result<Bounded> {
    let others = (0..code.k()).filter(|&j| j != qubit);
    let (targets, generators, weight): (Vec<BitVec>, Vec<BitVec>, WeightFn) = match sector {
        Sector::Z | Sector::X => {
            let split = code.css_split()?;
            let (stabilizers, logicals) = if sector == Sector::Z {
                (&split.sz, &split.z_logicals)
            } else {
                (&split.sx, &split.x_logicals)
            };
            let mut gens = stabilizers.row_vecs().to_vec();
            if word {
                gens.extend(others.map(|j| logicals[j].clone()));
            }
            (vec![logicals[qubit].clone()], gens, WeightFn::Hamming)
        }
        Sector::Pauli => {
            let l = &code.logicals[qubit];
            let x = l.x_rep.to_symplectic();
            let z = l.z_rep.to_symplectic();
            let y = x.xor(&z);
            let mut gens: Vec<BitVec> = code.stabilizers.iter().map(|s| s.to_symplectic()).collect();
            if word {
                for j in others {
                    gens.push(code.logicals[j].x_rep.to_symplectic());
                    gens.push(code.logicals[j].z_rep.to_symplectic());
                }
            }
            (vec![x, z, y], gens, WeightFn::Pauli { n: code.n })
        }
    };
    let m = generators.len();
    let mut best: Option<Bounded> = None;
    for t in targets {
        let problem = DecodeProblem::new(t, generators.clone(), m, weight)?;
        let c = min_weight_coset(&problem, options.timeout);
        let b = Bounded {
            value: c.weight,
            certified: c.certified,
        };
        best = Some(best.map_or(b, |a| a.min(b)));
    }
    Ok(best.expect("at least one target"))
}

fn distance(
    code: &HolographicCode,
    qubit: usize,
    sector: Sector,
    word: bool,
    options: &DistanceOptions,
) -> Result<Bounded> {
    check_qubit(code, qubit)?;
    sector_check(code, sector)?;
    if use_network(code, options.backend)? {
        via_network(code, qubit, sector, word, options)
    } else {
        via_branch_and_bound(code, qubit, sector, word, options)
    }
}

pub fn bit_distance(
    code: &HolographicCode,
    qubit: usize,
    sector: Sector,
    options: &DistanceOptions,
) -> Result<Bounded> {
    distance(code, qubit, sector, false, options)
}

pub fn word_distance(
    code: &HolographicCode,
    qubit: usize,
    sector: Sector,
    options: &DistanceOptions,
) -> Result<Bounded> {
    distance(code, qubit, sector, true, options)
}

/// Distances of one qubit in one sector.
pub fn sector_distances(
    code: &HolographicCode,
    qubit: usize,
    sector: Sector,
    options: &DistanceOptions,
) -> Result<DistanceResult> {
    check_qubit(code, qubit)?;
    let bit = bit_distance(code, qubit, sector, options)?;
    let word = if code.k() == 1 {
        bit
    } else {
        word_distance(code, qubit, sector, options)?
    };
    Ok(DistanceResult {
        qubit,
        layer: code.logicals[qubit].layer,
        sector,
        bit_distance: bit,
        word_distance: word,
    })
}

/// Reported distances: the smaller of the X and Z sectors for CSS codes, the
/// Pauli-weight distance otherwise.
pub fn qubit_distances(
    code: &HolographicCode,
    qubit: usize,
    options: &DistanceOptions,
) -> Result<DistanceResult> {
    if !code.css {
        return sector_distances(code, qubit, Sector::Pauli, options);
    }
    let z = sector_distances(code, qubit, Sector::Z, options)?;
    let x = sector_distances(code, qubit, Sector::X, options)?;
    let sector = if x.bit_distance.value < z.bit_distance.value {
        Sector::X
    } else {
        Sector::Z
    };
    Ok(DistanceResult {
        qubit,
        layer: z.layer,
        sector,
        bit_distance: z.bit_distance.min(x.bit_distance),
        word_distance: z.word_distance.min(x.word_distance),
    })
}

/// Least-squares fit of `log d = a + b log n`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PowerLawFit {
    pub exponent: f64,
    /// Half-width of the 95% confidence interval on the exponent.
    pub ci95: f64,
    pub prefactor: f64,
    pub points: usize,
}

pub fn fit_distance_scaling(points: &[(f64, f64)]) -> Result<PowerLawFit> {
    if points.len() < 3 {
        return Err(Error::InvalidArgument(format!(
            "need at least 3 points, got {}",
            points.len()
        )));
    }
    if points.iter().any(|&(n, d)| n <= 0.0 || d <= 0.0) {
        return Err(Error::InvalidArgument("points must be positive".into()));
    }
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let m = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / m;
    let my = ys.iter().sum::<f64>() / m;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx <= f64::EPSILON {
        return Err(Error::InvalidArgument("all points share the same n".into()));
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum();
    let dof = m - 2.0;
    let se = (rss / dof / sxx).sqrt();
    let t = StudentsT::new(0.0, 1.0, dof)
        .map_err(|e| Error::InvalidArgument(e.to_string()))?
        .inverse_cdf(0.975);
    Ok(PowerLawFit {
        exponent: slope,
        ci95: t * se,
        prefactor: intercept.exp(),
        points: points.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builder::{build_code, single_tile_code};
    use crate::seed;
    use crate::tiling::{Family, RateVariant};

    #[test]
    fn single_tile_distances() {
        let opts = DistanceOptions::default();
        let steane = single_tile_code(&seed::steane_tensor()).unwrap();
        assert_eq!(bit_distance(&steane, 0, Sector::Z, &opts).unwrap().value, 3);
        assert_eq!(bit_distance(&steane, 0, Sector::X, &opts).unwrap().value, 3);
        let scf = single_tile_code(&seed::scf_tensor()).unwrap();
        assert_eq!(qubit_distances(&scf, 0, &opts).unwrap().bit_distance.value, 2);
        let five = single_tile_code(&seed::five_qubit_tensor()).unwrap();
        let d = qubit_distances(&five, 0, &opts).unwrap();
        assert_eq!(d.bit_distance.value, 3);
        assert_eq!(d.word_distance, d.bit_distance);
    }

    #[test]
    fn backends_agree_on_heptagon_radius_two() {
        let code = build_code(Family::Heptagon, 2, RateVariant::Max, &seed::steane_tensor()).unwrap();
        let net = DistanceOptions::default();
        let bb = DistanceOptions {
            backend: Backend::BranchAndBound,
            ..DistanceOptions::default()
        };
        for q in [0, 1, 5] {
            for sector in [Sector::X, Sector::Z] {
                let a = sector_distances(&code, q, sector, &net).unwrap();
                let b = sector_distances(&code, q, sector, &bb).unwrap();
                assert_eq!(a, b);
            }
        }
        let d = qubit_distances(&code, 0, &net).unwrap();
        assert_eq!((d.bit_distance.value, d.word_distance.value), (9, 6));
    }

    #[test]
    fn word_never_exceeds_bit() {
        let code = build_code(Family::Pentagon, 3, RateVariant::Reduced, &seed::scf_tensor()).unwrap();
        let opts = DistanceOptions::default();
        for q in 0..code.k() {
            let d = qubit_distances(&code, q, &opts).unwrap();
            assert!(d.word_distance.value <= d.bit_distance.value);
            assert!(d.word_distance.value >= 1);
        }
    }

    #[test]
    fn fit_exact_power_law() {
        let pts: Vec<(f64, f64)> = [4.0, 16.0, 64.0, 256.0].iter().map(|&n: &f64| (n, n.sqrt())).collect();
        let fit = fit_distance_scaling(&pts).unwrap();
        assert!((fit.exponent - 0.5).abs() < 1e-12);
        assert!(fit.ci95.abs() < 1e-9);
        assert!(fit_distance_scaling(&pts[..2]).is_err());
        assert!(fit_distance_scaling(&[(2.0, 1.0), (2.0, 2.0), (2.0, 3.0)]).is_err());
    }
}
