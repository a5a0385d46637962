//! Most-likely-error decoding.
//!
//! A syndrome is mapped to a pure error with the inverse syndrome former,
//! then the lowest-weight member of the pure error's coset under the
//! stabilizers (and, for most-likely-error decoding, the logical operators) is
//! chosen as the correction. Two exact minimizers are available: a generic
//! branch and bound over generator coefficients, and the tensor-network
//! contraction of [`crate::network`] for codes that carry their tiling.

use std::str::FromStr;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::builder::HolographicCode;
use crate::error::{Error, Result};
use crate::gf2::{BitVec, Gf2Matrix, LinearSolver};
use crate::network::{Bulk, Cost, Domain, TensorNetwork};
use crate::pauli::{self, Pauli, PauliVector};

/// Default cap on the table size of a network contraction.
pub const DEFAULT_MAX_TABLE_ENTRIES: usize = 1 << 24;

/// Weight being minimized in symplectic mode.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Objective {
    /// `popcount(x) + popcount(z)`.
    #[default]
    Hamming,
    /// Number of qubits acted on.
    Pauli,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DecodeMode {
    /// X and Z errors decoded independently.
    Css,
    /// One joint problem over the full symplectic vector.
    Symplectic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Backend {
    /// Network contraction when the code carries its tiling, else branch and bound.
    #[default]
    Auto,
    Network,
    BranchAndBound,
}

impl FromStr for Objective {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hamming" => Ok(Objective::Hamming),
            "pauli" => Ok(Objective::Pauli),
            _ => Err(Error::InvalidArgument(format!("unknown objective '{s}'"))),
        }
    }
}

impl FromStr for DecodeMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "css" => Ok(DecodeMode::Css),
            "symplectic" => Ok(DecodeMode::Symplectic),
            _ => Err(Error::InvalidArgument(format!("unknown decode mode '{s}'"))),
        }
    }
}

impl FromStr for Backend {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(Backend::Auto),
            "network" => Ok(Backend::Network),
            "branch-and-bound" | "bnb" => Ok(Backend::BranchAndBound),
            _ => Err(Error::InvalidArgument(format!("unknown backend '{s}'"))),
        }
    }
}

/// Weight of a vector in a decode problem.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WeightFn {
    Hamming,
    /// The vector is `(x | z)` on `n` qubits; counts qubits with `x ∨ z`.
    Pauli { n: usize },
}

impl WeightFn {
    pub fn weight(self, v: &BitVec) -> usize {
        match self {
            WeightFn::Hamming => v.count_ones(),
            WeightFn::Pauli { n } => (0..n).filter(|&q| v.get(q) || v.get(n + q)).count(),
        }
    }

    fn from_objective(objective: Objective, n: usize) -> Self {
        match objective {
            Objective::Hamming => WeightFn::Hamming,
            Objective::Pauli => WeightFn::Pauli { n },
        }
    }
}

/// Minimize `weight(target + Σ c_i g_i)` over coefficient vectors `c`.
#[derive(Clone, Debug)]
pub struct DecodeProblem {
    pub target: BitVec,
    /// Stabilizer rows first, then logical rows.
    pub generators: Vec<BitVec>,
    pub num_stabilizers: usize,
    pub weight: WeightFn,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Correction {
    pub vector: BitVec,
    pub weight: usize,
    /// Coefficients of the stabilizer rows.
    pub lambda: BitVec,
    /// Coefficients of the logical rows.
    pub mu: BitVec,
    /// Whether the search finished and proved optimality.
    pub certified: bool,
}

impl DecodeProblem {
    pub fn new(target: BitVec, generators: Vec<BitVec>, num_stabilizers: usize, weight: WeightFn) -> Result<Self> {
        if let Some(g) = generators.iter().find(|g| g.len() != target.len()) {
            return Err(Error::Dimension(format!(
                "generator of length {} for target of length {}",
                g.len(),
                target.len()
            )));
        }
        if num_stabilizers > generators.len() {
            return Err(Error::InvalidArgument("more stabilizers than generators".into()));
        }
        Ok(Self {
            target,
            generators,
            num_stabilizers,
            weight,
        })
    }

    fn correction(&self, coeffs: &BitVec, certified: bool) -> Correction {
        let mut vector = self.target.clone();
        for i in coeffs.iter_ones() {
            vector.xor_assign(&self.generators[i]);
        }
        let m = self.num_stabilizers;
        Correction {
            weight: self.weight.weight(&vector),
            vector,
            lambda: coeffs.slice(0, m),
            mu: coeffs.slice(m, self.generators.len() - m),
            certified,
        }
    }

    /// Positions of qubits (for the Pauli weight) or bits that `g` touches.
    fn footprint(&self, g: &BitVec) -> BitVec {
        match self.weight {
            WeightFn::Hamming => g.clone(),
            WeightFn::Pauli { n } => {
                let mut f = BitVec::zeros(n);
                for i in g.iter_ones() {
                    f.set(i % n, true);
                }
                f
            }
        }
    }
}

struct Search<'a> {
    problem: &'a DecodeProblem,
    footprints: Vec<BitVec>,
    deadline: Option<Instant>,
    nodes: u64,
    timed_out: bool,
}

impl Search<'_> {
    fn out_of_time(&mut self) -> bool {
        self.nodes += 1;
        if self.nodes % 1024 == 0 {
            if let Some(d) = self.deadline {
                if Instant::now() >= d {
                    self.timed_out = true;
                }
            }
        }
        self.timed_out
    }

    /// Residual weight on positions no remaining generator can change.
    fn bound(&self, residual: &BitVec, remaining: &[usize]) -> usize {
        let mut reach = BitVec::zeros(self.footprints[0].len());
        for &i in remaining {
            reach.or_assign(&self.footprints[i]);
        }
        self.problem
            .footprint(residual)
            .and_not_count(&reach)
    }

    /// Finds the optimal weight, branching on the generator that overlaps the
    /// residual most.
    fn best_weight(
        &mut self,
        residual: &BitVec,
        remaining: &mut Vec<usize>,
        best: &mut (usize, BitVec),
        coeffs: &mut BitVec,
    ) {
        if self.out_of_time() {
            return;
        }
        let w = self.problem.weight.weight(residual);
        if w < best.0 {
            *best = (w, coeffs.clone());
        }
        if remaining.is_empty() || self.bound(residual, remaining) >= best.0 {
            return;
        }
        let fp = self.problem.footprint(residual);
        let (pos, &g) = remaining
            .iter()
            .enumerate()
            .max_by_key(|(_, &i)| (fp.and_count(&self.footprints[i]), std::cmp::Reverse(i)))
            .expect("remaining is non-empty");
        remaining.swap_remove(pos);
        let flipped = residual.xor(&self.problem.generators[g]);
        let take_first = self.problem.weight.weight(&flipped) < w;
        for take in [take_first, !take_first] {
            coeffs.set(g, take);
            let next = if take { &flipped } else { residual };
            self.best_weight(next, remaining, best, coeffs);
        }
        coeffs.set(g, false);
        remaining.push(g);
        let last = remaining.len() - 1;
        remaining.swap(pos, last);
    }

    /// Depth-first in index order, zero before one: the first vector reaching
    /// `target_weight` is the lexicographically smallest one.
    fn lex_first(
        &mut self,
        residual: &BitVec,
        index: usize,
        target_weight: usize,
        suffix_reach: &[BitVec],
        coeffs: &mut BitVec,
    ) -> bool {
        if self.out_of_time() {
            return false;
        }
        let fp = self.problem.footprint(residual);
        if fp.and_not_count(&suffix_reach[index]) > target_weight {
            return false;
        }
        if index == self.problem.generators.len() {
            return self.problem.weight.weight(residual) == target_weight;
        }
        if self.lex_first(residual, index + 1, target_weight, suffix_reach, coeffs) {
            return true;
        }
        coeffs.set(index, true);
        let flipped = residual.xor(&self.problem.generators[index]);
        if self.lex_first(&flipped, index + 1, target_weight, suffix_reach, coeffs) {
            return true;
        }
        coeffs.set(index, false);
        false
    }
}

/// Exact minimum-weight coset element by branch and bound.
///
/// Ties are broken towards the lexicographically smallest coefficient vector
/// (stabilizer coefficients first, in row order). With a timeout, the best
/// incumbent is returned uncertified.
pub fn min_weight_coset(problem: &DecodeProblem, timeout: Option<Duration>) -> Correction {
    let g = problem.generators.len();
    let footprints: Vec<BitVec> = problem
        .generators
        .iter()
        .map(|v| problem.footprint(v))
        .collect();
    if g == 0 {
        return problem.correction(&BitVec::zeros(0), true);
    }
    let mut search = Search {
        problem,
        footprints,
        deadline: timeout.map(|t| Instant::now() + t),
        nodes: 0,
        timed_out: false,
    };
    let mut best = (problem.weight.weight(&problem.target), BitVec::zeros(g));
    let mut remaining: Vec<usize> = (0..g).collect();
    let mut coeffs = BitVec::zeros(g);
    search.best_weight(&problem.target, &mut remaining, &mut best, &mut coeffs);
    if search.timed_out {
        return problem.correction(&best.1, false);
    }

    let width = search.footprints[0].len();
    let mut suffix_reach = vec![BitVec::zeros(width); g + 1];
    for i in (0..g).rev() {
        suffix_reach[i] = suffix_reach[i + 1].clone();
        suffix_reach[i].or_assign(&search.footprints[i]);
    }
    let mut coeffs = BitVec::zeros(g);
    if search.lex_first(&problem.target, 0, best.0, &suffix_reach, &mut coeffs) {
        problem.correction(&coeffs, true)
    } else {
        debug_assert!(search.timed_out);
        problem.correction(&best.1, false)
    }
}

/// `e = F·y`, checked against the syndrome equation `S·e = y`.
pub fn pure_error(checks: &Gf2Matrix, inverse: &Gf2Matrix, y: &BitVec) -> Result<BitVec> {
    let e = inverse.mul_vec(y)?;
    if checks.mul_vec(&e)? != *y {
        return Err(Error::Invariant("pure error does not reproduce the syndrome".into()));
    }
    Ok(e)
}

/// Syndrome of an error, in the layout a decoder expects.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Syndrome {
    /// `x_checks` from X-type stabilizers (flags Z errors), `z_checks` from
    /// Z-type stabilizers (flags X errors).
    Css { x_checks: BitVec, z_checks: BitVec },
    Symplectic(BitVec),
}

impl Syndrome {
    pub fn is_zero(&self) -> bool {
        match self {
            Syndrome::Css { x_checks, z_checks } => x_checks.is_zero() && z_checks.is_zero(),
            Syndrome::Symplectic(s) => s.is_zero(),
        }
    }

    /// All syndrome bits, X-check bits first in CSS mode.
    pub fn bits(&self) -> BitVec {
        match self {
            Syndrome::Css { x_checks, z_checks } => x_checks.concat(z_checks),
            Syndrome::Symplectic(s) => s.clone(),
        }
    }
}

/// Effect of an operator on the logical qubits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LogicalEffect {
    Detectable,
    Logical(Vec<Pauli>),
}

impl LogicalEffect {
    pub fn on(&self, qubit: usize) -> Option<Pauli> {
        match self {
            LogicalEffect::Detectable => None,
            LogicalEffect::Logical(v) => v.get(qubit).copied(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct DecoderOptions {
    /// `None` picks CSS mode for CSS codes and symplectic otherwise.
    pub mode: Option<DecodeMode>,
    pub objective: Objective,
    pub backend: Backend,
    pub timeout: Option<Duration>,
    pub max_table_entries: usize,
}

impl Default for DecoderOptions {
    fn default() -> Self {
        Self {
            mode: None,
            objective: Objective::Hamming,
            backend: Backend::Auto,
            timeout: Some(Duration::from_secs(60)),
            max_table_entries: DEFAULT_MAX_TABLE_ENTRIES,
        }
    }
}

/// One syndrome-to-coset problem family sharing checks and generators.
#[derive(Clone, Debug)]
struct Sector {
    checks: Gf2Matrix,
    inverse: Gf2Matrix,
    generators: Vec<BitVec>,
    num_stabilizers: usize,
    weight: WeightFn,
    network: Option<(TensorNetwork, Cost)>,
}

impl Sector {
    fn new(
        checks: Gf2Matrix,
        stabilizers: Vec<BitVec>,
        logicals: Vec<BitVec>,
        weight: WeightFn,
        network: Option<(TensorNetwork, Cost)>,
    ) -> Result<Self> {
        let inverse = checks.right_inverse()?;
        let num_stabilizers = stabilizers.len();
        let mut generators = stabilizers;
        generators.extend(logicals);
        Ok(Self {
            checks,
            inverse,
            generators,
            num_stabilizers,
            weight,
            network,
        })
    }

    fn problem(&self, target: BitVec) -> Result<DecodeProblem> {
        DecodeProblem::new(target, self.generators.clone(), self.num_stabilizers, self.weight)
    }

    /// Returns the minimum-weight coset element and its certificate.
    fn solve(&self, syndrome: &BitVec, options: &DecoderOptions) -> Result<(BitVec, bool)> {
        let e = pure_error(&self.checks, &self.inverse, syndrome)?;
        if let Some((net, cost)) = &self.network {
            let n = net.n();
            let target: Vec<u8> = match net.domain() {
                Domain::Pauli => (0..n)
                    .map(|q| u8::from(e.get(q)) | u8::from(e.get(n + q)) << 1)
                    .collect(),
                _ => e.iter().map(u8::from).collect(),
            };
            let sol = net.solve(&target, &vec![Bulk::Free; net.k()], *cost, options.max_table_entries)?;
            let mut out = e.clone();
            for (q, &v) in sol.element.iter().enumerate() {
                match net.domain() {
                    Domain::Pauli => {
                        if v & 1 == 1 {
                            out.flip(q);
                        }
                        if v & 2 == 2 {
                            out.flip(n + q);
                        }
                    }
                    _ => {
                        if v == 1 {
                            out.flip(q);
                        }
                    }
                }
            }
            return Ok((out, true));
        }
        let c = min_weight_coset(&self.problem(e)?, options.timeout);
        Ok((c.vector, c.certified))
    }
}

/// Result of decoding one syndrome.
#[derive(Clone, Debug)]
pub struct Decoded {
    pub correction: PauliVector,
    pub certified: bool,
}

/// Decoder for one code, reusable across threads.
#[derive(Clone, Debug)]
pub struct Decoder {
    n: usize,
    k: usize,
    mode: DecodeMode,
    options: DecoderOptions,
    /// CSS: `[z_errors, x_errors]`; symplectic: one sector.
    sectors: Vec<Sector>,
    stabilizers: Vec<PauliVector>,
    decomposition: LinearSolver,
    /// Symplectic vectors of stabilizers, X-reps and Z-reps, in that order.
    basis: Vec<BitVec>,
}

impl Decoder {
    pub fn new(code: &HolographicCode, options: DecoderOptions) -> Result<Self> {
        let n = code.n;
        let mode = options
            .mode
            .unwrap_or(if code.css { DecodeMode::Css } else { DecodeMode::Symplectic });
        let use_network = match options.backend {
            Backend::BranchAndBound => false,
            Backend::Auto => code.construction.is_some(),
            Backend::Network => {
                if code.construction.is_none() {
                    return Err(Error::Unsupported(
                        "network backend needs a code built from a tiling".into(),
                    ));
                }
                true
            }
        };
        let network = |domain: Domain, cost: Cost| -> Result<Option<(TensorNetwork, Cost)>> {
            match (&code.construction, use_network) {
                (Some(c), true) => Ok(Some((TensorNetwork::new(c, domain)?, cost))),
                _ => Ok(None),
            }
        };
        let sectors = match mode {
            DecodeMode::Css => {
                let split = code.css_split()?;
                let z_errors = Sector::new(
                    split.sx.clone(),
                    split.sz.row_vecs().to_vec(),
                    split.z_logicals.clone(),
                    WeightFn::Hamming,
                    network(Domain::ZType, Cost::Bits)?,
                )?;
                let x_errors = Sector::new(
                    split.sz.clone(),
                    split.sx.row_vecs().to_vec(),
                    split.x_logicals.clone(),
                    WeightFn::Hamming,
                    network(Domain::XType, Cost::Bits)?,
                )?;
                vec![z_errors, x_errors]
            }
            DecodeMode::Symplectic => {
                let checks = pauli::check_matrix(&code.stabilizers, n);
                let stabilizers = code.stabilizers.iter().map(|s| s.to_symplectic()).collect();
                let logicals = code
                    .logicals
                    .iter()
                    .flat_map(|l| [l.x_rep.to_symplectic(), l.z_rep.to_symplectic()])
                    .collect();
                let cost = match options.objective {
                    Objective::Hamming => Cost::Bits,
                    Objective::Pauli => Cost::Support,
                };
                vec![Sector::new(
                    checks,
                    stabilizers,
                    logicals,
                    WeightFn::from_objective(options.objective, n),
                    network(Domain::Pauli, cost)?,
                )?]
            }
        };
        let basis: Vec<BitVec> = code
            .stabilizers
            .iter()
            .map(|s| s.to_symplectic())
            .chain(code.logicals.iter().map(|l| l.x_rep.to_symplectic()))
            .chain(code.logicals.iter().map(|l| l.z_rep.to_symplectic()))
            .collect();
        let decomposition = LinearSolver::new(&Gf2Matrix::from_rows(basis.clone(), 2 * n)?.transpose());
        Ok(Self {
            n,
            k: code.k(),
            mode,
            options,
            sectors,
            stabilizers: code.stabilizers.clone(),
            decomposition,
            basis,
        })
    }

    pub fn mode(&self) -> DecodeMode {
        self.mode
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn uses_network(&self) -> bool {
        self.sectors.iter().all(|s| s.network.is_some())
    }

    pub fn syndrome(&self, error: &PauliVector) -> Result<Syndrome> {
        if error.n() != self.n {
            return Err(Error::Dimension(format!(
                "{}-qubit error for {}-qubit code",
                error.n(),
                self.n
            )));
        }
        Ok(match self.mode {
            DecodeMode::Css => Syndrome::Css {
                x_checks: self.sectors[0].checks.mul_vec(error.z())?,
                z_checks: self.sectors[1].checks.mul_vec(error.x())?,
            },
            DecodeMode::Symplectic => {
                Syndrome::Symplectic(self.sectors[0].checks.mul_vec(&error.to_symplectic())?)
            }
        })
    }

    /// Parses raw syndrome bits: in CSS mode the X-check bits come first.
    pub fn syndrome_from_bits(&self, bits: &BitVec) -> Result<Syndrome> {
        match self.mode {
            DecodeMode::Css => {
                let a = self.sectors[0].checks.rows();
                let b = self.sectors[1].checks.rows();
                if bits.len() != a + b {
                    return Err(Error::Dimension(format!(
                        "syndrome has {} bits, expected {}",
                        bits.len(),
                        a + b
                    )));
                }
                Ok(Syndrome::Css {
                    x_checks: bits.slice(0, a),
                    z_checks: bits.slice(a, b),
                })
            }
            DecodeMode::Symplectic => {
                let m = self.sectors[0].checks.rows();
                if bits.len() != m {
                    return Err(Error::Dimension(format!(
                        "syndrome has {} bits, expected {m}",
                        bits.len()
                    )));
                }
                Ok(Syndrome::Symplectic(bits.clone()))
            }
        }
    }

    pub fn decode(&self, syndrome: &Syndrome) -> Result<Decoded> {
        let decoded = match (self.mode, syndrome) {
            (DecodeMode::Css, Syndrome::Css { x_checks, z_checks }) => {
                let (z, cz) = self.sectors[0].solve(x_checks, &self.options)?;
                let (x, cx) = self.sectors[1].solve(z_checks, &self.options)?;
                Decoded {
                    correction: PauliVector::new(x, z)?,
                    certified: cz && cx,
                }
            }
            (DecodeMode::Symplectic, Syndrome::Symplectic(s)) => {
                let (v, c) = self.sectors[0].solve(s, &self.options)?;
                Decoded {
                    correction: PauliVector::from_symplectic(&v)?,
                    certified: c,
                }
            }
            _ => {
                return Err(Error::InvalidArgument(
                    "syndrome layout does not match decoder mode".into(),
                ))
            }
        };
        if self.syndrome(&decoded.correction)? != *syndrome {
            return Err(Error::Invariant("correction does not match the syndrome".into()));
        }
        Ok(decoded)
    }

    /// The operator the inverse syndrome former assigns to `syndrome`.
    pub fn pure_error(&self, syndrome: &Syndrome) -> Result<PauliVector> {
        match (self.mode, syndrome) {
            (DecodeMode::Css, Syndrome::Css { x_checks, z_checks }) => {
                let z = pure_error(&self.sectors[0].checks, &self.sectors[0].inverse, x_checks)?;
                let x = pure_error(&self.sectors[1].checks, &self.sectors[1].inverse, z_checks)?;
                PauliVector::new(x, z)
            }
            (DecodeMode::Symplectic, Syndrome::Symplectic(s)) => PauliVector::from_symplectic(&pure_error(
                &self.sectors[0].checks,
                &self.sectors[0].inverse,
                s,
            )?),
            _ => Err(Error::InvalidArgument(
                "syndrome layout does not match decoder mode".into(),
            )),
        }
    }

    /// Coefficients `(λ, μ)` with `v = Σ λ_i s_i + Σ μ_j l_j`, where the
    /// logical rows are all X-reps followed by all Z-reps.
    pub fn decompose(&self, v: &PauliVector) -> Result<(BitVec, BitVec)> {
        let coeffs = self.decomposition.solve(&v.to_symplectic()).map_err(|_| {
            Error::Invariant("operator is outside the span of stabilizers and logicals".into())
        })?;
        let m = self.stabilizers.len();
        Ok((coeffs.slice(0, m), coeffs.slice(m, 2 * self.k)))
    }

    pub fn net_logical_effect(&self, v: &PauliVector) -> Result<LogicalEffect> {
        if self.stabilizers.iter().any(|s| s.anticommutes(v)) {
            return Ok(LogicalEffect::Detectable);
        }
        let (_, mu) = self.decompose(v)?;
        Ok(LogicalEffect::Logical(
            (0..self.k)
                .map(|i| Pauli::from_bits(mu.get(i), mu.get(self.k + i)))
                .collect(),
        ))
    }

    /// Number of generators in each decode problem.
    pub fn problem_sizes(&self) -> Vec<usize> {
        self.sectors.iter().map(|s| s.generators.len()).collect()
    }

    /// The branch-and-bound problem a syndrome induces, per sector.
    pub fn problems(&self, syndrome: &Syndrome) -> Result<Vec<DecodeProblem>> {
        let parts: Vec<&BitVec> = match syndrome {
            Syndrome::Css { x_checks, z_checks } => vec![x_checks, z_checks],
            Syndrome::Symplectic(s) => vec![s],
        };
        if parts.len() != self.sectors.len() {
            return Err(Error::InvalidArgument(
                "syndrome layout does not match decoder mode".into(),
            ));
        }
        self.sectors
            .iter()
            .zip(parts)
            .map(|(sector, y)| sector.problem(pure_error(&sector.checks, &sector.inverse, y)?))
            .collect()
    }

    /// Symplectic rows the decomposition is taken over.
    pub fn basis(&self) -> &[BitVec] {
        &self.basis
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builder::single_tile_code;
    use crate::seed;

    fn bv(s: &str) -> BitVec {
        BitVec::parse_binary(s).unwrap()
    }

    fn brute_force(p: &DecodeProblem) -> usize {
        let g = p.generators.len();
        (0u64..1 << g)
            .map(|mask| {
                let mut v = p.target.clone();
                for i in 0..g {
                    if mask >> i & 1 == 1 {
                        v.xor_assign(&p.generators[i]);
                    }
                }
                p.weight.weight(&v)
            })
            .min()
            .unwrap()
    }

    #[test]
    fn zero_target_gives_zero() {
        let p = DecodeProblem::new(bv("0000"), vec![bv("1100"), bv("0110")], 2, WeightFn::Hamming)
            .unwrap();
        let c = min_weight_coset(&p, None);
        assert_eq!(c.weight, 0);
        assert!(c.vector.is_zero());
        assert!(c.certified);
    }

    #[test]
    fn lexicographic_tie_break() {
        // Adding the generator gives 0100, also of weight 1, so the all-zero
        // coefficient vector wins.
        let p = DecodeProblem::new(bv("1000"), vec![bv("1100")], 1, WeightFn::Hamming).unwrap();
        let c = min_weight_coset(&p, None);
        assert_eq!(c.weight, 1);
        assert!(c.lambda.is_zero());
    }

    #[test]
    fn steane_single_z_error() {
        let code = single_tile_code(&seed::steane_tensor()).unwrap();
        let dec = Decoder::new(&code, DecoderOptions::default()).unwrap();
        let e = PauliVector::single(7, 0, Pauli::Z);
        let s = dec.syndrome(&e).unwrap();
        let problems = dec.problems(&s).unwrap();
        assert_eq!(problems[0].generators.len(), 4);
        let c = min_weight_coset(&problems[0], None);
        assert_eq!(c.weight, 1);
        assert_eq!(brute_force(&problems[0]), 1);
        let d = dec.decode(&s).unwrap();
        assert_eq!(d.correction, e);
    }

    #[test]
    fn pure_error_examples() {
        let code = single_tile_code(&seed::steane_tensor()).unwrap();
        let split = code.css_split().unwrap();
        let f = split.sx.right_inverse().unwrap();
        assert!(pure_error(&split.sx, &f, &bv("000")).unwrap().is_zero());
        let e1 = pure_error(&split.sx, &f, &bv("100")).unwrap();
        let e2 = pure_error(&split.sx, &f, &bv("010")).unwrap();
        assert_eq!(pure_error(&split.sx, &f, &bv("110")).unwrap(), e1.xor(&e2));
    }

    #[test]
    fn random_problems_match_enumeration() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let len = rng.gen_range(1..40);
            let g = rng.gen_range(0..12);
            let rand_vec = |rng: &mut rand_chacha::ChaCha8Rng| {
                BitVec::from_bools((0..len).map(|_| rng.gen_bool(0.3)))
            };
            let target = rand_vec(&mut rng);
            let gens = (0..g).map(|_| rand_vec(&mut rng)).collect();
            let p = DecodeProblem::new(target, gens, g / 2, WeightFn::Hamming).unwrap();
            let c = min_weight_coset(&p, None);
            assert_eq!(c.weight, brute_force(&p));
            assert_eq!(c.weight, c.vector.count_ones());
        }
    }

    #[test]
    fn effects_of_logical_reps() {
        let code = single_tile_code(&seed::five_qubit_tensor()).unwrap();
        let dec = Decoder::new(&code, DecoderOptions::default()).unwrap();
        assert_eq!(dec.mode(), DecodeMode::Symplectic);
        let l = &code.logicals[0];
        assert_eq!(
            dec.net_logical_effect(&PauliVector::identity(5)).unwrap(),
            LogicalEffect::Logical(vec![Pauli::I])
        );
        assert_eq!(dec.net_logical_effect(&l.x_rep).unwrap().on(0), Some(Pauli::X));
        assert_eq!(dec.net_logical_effect(&l.z_rep).unwrap().on(0), Some(Pauli::Z));
        assert_eq!(
            dec.net_logical_effect(&l.x_rep.mul(&l.z_rep)).unwrap().on(0),
            Some(Pauli::Y)
        );
        assert_eq!(
            dec.net_logical_effect(&code.stabilizers[0]).unwrap().on(0),
            Some(Pauli::I)
        );
        assert_eq!(
            dec.net_logical_effect(&PauliVector::single(5, 2, Pauli::X)).unwrap(),
            LogicalEffect::Detectable
        );
    }
}
