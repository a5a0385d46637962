//! Monte Carlo failure rates at fixed error weight, mixing into depolarizing
//! failure curves, and threshold crossings between radii.
//!
//! Every trial draws its randomness from a ChaCha8 stream keyed by
//! `(seed, code id, weight, trial index)`, so tallies are identical no matter
//! how trials are scheduled across threads.

use std::collections::BTreeMap;
use std::io::{Read, Write};
use std::str::FromStr;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::builder::HolographicCode;
use crate::decoder::{Decoder, LogicalEffect};
use crate::error::{Error, Result};
use crate::pauli::{write_tableau, Pauli, PauliVector};
use crate::tiling::{Family, RateVariant};

const PILOT_FLAG: u64 = 1 << 63;

/// Uniform support of size `a`, each site X, Y or Z with equal odds.
pub fn sample_fixed_weight_error<R: Rng + ?Sized>(n: usize, a: usize, rng: &mut R) -> Result<PauliVector> {
    if a > n {
        return Err(Error::InvalidArgument(format!("weight {a} exceeds {n} qubits")));
    }
    let mut e = PauliVector::identity(n);
    for q in index::sample(rng, n, a).into_iter() {
        let p = match rng.gen_range(0..3) {
            0 => Pauli::X,
            1 => Pauli::Y,
            _ => Pauli::Z,
        };
        e.set(q, p);
    }
    Ok(e)
}

/// Stream for one trial. The key is the tuple itself, so distinct tuples
/// give unrelated streams.
pub fn trial_rng(seed: u64, code_id: u64, a: usize, trial: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    for (chunk, word) in key.chunks_mut(8).zip([seed, code_id, a as u64, trial]) {
        chunk.copy_from_slice(&word.to_le_bytes());
    }
    ChaCha8Rng::from_seed(key)
}

/// FNV-1a hash of the code's tableau, used to key trial streams.
pub fn code_fingerprint(code: &HolographicCode) -> u64 {
    let mut rows = code.stabilizers.clone();
    for l in &code.logicals {
        rows.push(l.x_rep.clone());
        rows.push(l.z_rep.clone());
    }
    let mut text = Vec::new();
    write_tableau(&mut text, &rows).expect("writing to memory");
    text.iter().fold(0xcbf2_9ce4_8422_2325u64, |h, &b| {
        (h ^ u64::from(b)).wrapping_mul(0x0000_0100_0000_01b3)
    })
}

pub fn sigma(p: f64, m: u64) -> f64 {
    (p * (1.0 - p) / m as f64).sqrt()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TrialOutcome {
    Success,
    Failure,
    /// The decoder gave up before certifying optimality.
    Timeout,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightRecord {
    pub a: usize,
    pub m: u64,
    pub f: u64,
    pub p: f64,
    pub sigma: f64,
    /// Timed-out decodes, already included in `f`.
    pub timeouts: u64,
}

impl WeightRecord {
    pub fn new(a: usize, m: u64, f: u64, timeouts: u64) -> Self {
        let p = f as f64 / m as f64;
        Self {
            a,
            m,
            f,
            p,
            sigma: sigma(p, m),
            timeouts,
        }
    }
}

/// Which logical qubit's failures are counted.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Target {
    Central,
    Id(usize),
}

impl Target {
    pub fn resolve(self, code: &HolographicCode) -> Result<usize> {
        match self {
            Target::Central => code
                .central_qubit()
                .ok_or_else(|| Error::InvalidArgument("code has no central logical qubit".into())),
            Target::Id(i) if i < code.k() => Ok(i),
            Target::Id(i) => Err(Error::InvalidArgument(format!(
                "logical qubit {i} out of range (k = {})",
                code.k()
            ))),
        }
    }
}

impl FromStr for Target {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "central" {
            return Ok(Target::Central);
        }
        s.parse()
            .map(Target::Id)
            .map_err(|_| Error::InvalidArgument(format!("target must be 'central' or an index, got '{s}'")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Weights {
    All,
    /// Every weight for small codes, an adaptive grid otherwise.
    Auto,
    List(Vec<usize>),
}

impl FromStr for Weights {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all" => Ok(Weights::All),
            "auto" => Ok(Weights::Auto),
            _ => s
                .split(',')
                .map(|t| {
                    t.trim()
                        .parse()
                        .map_err(|_| Error::InvalidArgument(format!("bad weight '{t}'")))
                })
                .collect::<Result<Vec<_>>>()
                .map(Weights::List),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SimConfig {
    pub weights: Weights,
    pub trials: u64,
    pub seed: u64,
    /// Codes up to this size sample every weight under `Weights::Auto`.
    pub full_coverage_limit: usize,
    pub pilot_trials: u64,
    pub grid_points: usize,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            weights: Weights::Auto,
            trials: 1000,
            seed: 0,
            full_coverage_limit: 50,
            pilot_trials: 200,
            grid_points: 24,
        }
    }
}

/// Trial runner for one code and target qubit.
pub struct Simulator<'a> {
    decoder: &'a Decoder,
    target: usize,
    code_id: u64,
}

impl<'a> Simulator<'a> {
    pub fn new(code: &HolographicCode, decoder: &'a Decoder, target: usize) -> Result<Self> {
        if target >= code.k() {
            return Err(Error::InvalidArgument(format!("target {target} out of range")));
        }
        Ok(Self {
            decoder,
            target,
            code_id: code_fingerprint(code),
        })
    }

    pub fn code_id(&self) -> u64 {
        self.code_id
    }

    pub fn trial(&self, a: usize, index: u64, seed: u64) -> Result<TrialOutcome> {
        let mut rng = trial_rng(seed, self.code_id, a, index);
        let error = sample_fixed_weight_error(self.decoder.n(), a, &mut rng)?;
        let syndrome = self.decoder.syndrome(&error)?;
        let decoded = self.decoder.decode(&syndrome)?;
        if !decoded.certified {
            return Ok(TrialOutcome::Timeout);
        }
        match self.decoder.net_logical_effect(&error.mul(&decoded.correction))? {
            LogicalEffect::Detectable => Err(Error::Invariant(
                "corrected error still has a syndrome".into(),
            )),
            LogicalEffect::Logical(effect) if effect[self.target] == Pauli::I => Ok(TrialOutcome::Success),
            LogicalEffect::Logical(_) => Ok(TrialOutcome::Failure),
        }
    }

    fn tally(&self, a: usize, m: u64, seed: u64, flag: u64) -> Result<WeightRecord> {
        if m == 0 {
            return Err(Error::InvalidArgument("trial count must be at least 1".into()));
        }
        let (f, timeouts) = (0..m)
            .into_par_iter()
            .map(|t| {
                self.trial(a, t | flag, seed).map(|o| match o {
                    TrialOutcome::Success => (0u64, 0u64),
                    TrialOutcome::Failure => (1, 0),
                    TrialOutcome::Timeout => (1, 1),
                })
            })
            .try_reduce(|| (0, 0), |x, y| Ok((x.0 + y.0, x.1 + y.1)))?;
        Ok(WeightRecord::new(a, m, f, timeouts))
    }

    pub fn run_trials(&self, a: usize, m: u64, seed: u64) -> Result<WeightRecord> {
        self.tally(a, m, seed, 0)
    }

    /// Weights to sample under `config`.
    pub fn schedule(&self, config: &SimConfig) -> Result<Vec<usize>> {
        let n = self.decoder.n();
        let weights = match &config.weights {
            Weights::All => (0..=n).collect(),
            Weights::Auto if n <= config.full_coverage_limit => (0..=n).collect(),
            Weights::Auto => {
                let step = n.div_ceil(32).max(1);
                let mut coarse: Vec<usize> = (0..=n).step_by(step).collect();
                if coarse.last() != Some(&n) {
                    coarse.push(n);
                }
                let pilot = coarse
                    .iter()
                    .map(|&a| self.tally(a, config.pilot_trials.max(1), config.seed, PILOT_FLAG).map(|r| r.p))
                    .collect::<Result<Vec<_>>>()?;
                let (lo, hi) = transition_window(&coarse, &pilot);
                let mut w = coarse;
                let points = config.grid_points.max(2);
                for i in 0..points {
                    w.push(lo + (hi - lo) * i / (points - 1));
                }
                w
            }
            Weights::List(list) => {
                if let Some(&a) = list.iter().find(|&&a| a > n) {
                    return Err(Error::InvalidArgument(format!("weight {a} exceeds {n} qubits")));
                }
                list.clone()
            }
        };
        let mut weights = weights;
        weights.sort_unstable();
        weights.dedup();
        Ok(weights)
    }
}

/// Weight range where pilot failure rates climb from 2% to 98% of their
/// plateau.
fn transition_window(weights: &[usize], rates: &[f64]) -> (usize, usize) {
    let plateau = rates.iter().cloned().fold(0.0, f64::max);
    if plateau == 0.0 {
        return (weights[0], *weights.last().unwrap());
    }
    let lo_idx = rates.iter().rposition(|&p| p < 0.02).unwrap_or(0);
    let hi_idx = (lo_idx..rates.len())
        .find(|&i| rates[i] >= 0.98 * plateau)
        .unwrap_or(rates.len() - 1);
    let lo_idx = lo_idx.min(hi_idx);
    (weights[lo_idx], weights[hi_idx])
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FailureCurve {
    pub family: Family,
    pub variant: RateVariant,
    pub radius: usize,
    pub n: usize,
    pub k: usize,
    pub target: usize,
    /// Sorted by weight.
    pub records: Vec<WeightRecord>,
}

/// One CSV row of a simulation result file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
struct ResultRow {
    family: Family,
    variant: RateVariant,
    #[serde(rename = "R")]
    radius: usize,
    n: usize,
    k: usize,
    target: usize,
    a: usize,
    m: u64,
    f: u64,
    #[serde(rename = "P")]
    p: f64,
    sigma: f64,
    timeouts: u64,
}

impl FailureCurve {
    /// Runs the weight schedule of `config` on a built code.
    pub fn simulate(code: &HolographicCode, decoder: &Decoder, target: usize, config: &SimConfig) -> Result<Self> {
        let meta = code
            .meta
            .as_ref()
            .ok_or_else(|| Error::InvalidArgument("simulation needs a code built from a tiling".into()))?;
        let sim = Simulator::new(code, decoder, target)?;
        let records = sim
            .schedule(config)?
            .into_iter()
            .map(|a| sim.run_trials(a, config.trials, config.seed))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            family: meta.family,
            variant: meta.variant,
            radius: meta.radius,
            n: code.n,
            k: code.k(),
            target,
            records,
        })
    }

    /// Failure rate and σ at every weight `0..=n`. Unsampled weights are
    /// interpolated linearly between neighbouring samples, which keeps the
    /// table monotone wherever the samples are. Zero errors never fail and
    /// rates are held flat past the last sample.
    pub fn full_table(&self) -> Vec<(f64, f64)> {
        let mut knots: Vec<(usize, f64, f64)> = Vec::with_capacity(self.records.len() + 1);
        if self.records.first().map(|r| r.a) != Some(0) {
            knots.push((0, 0.0, 0.0));
        }
        knots.extend(self.records.iter().map(|r| (r.a, r.p, r.sigma)));
        let mut table = Vec::with_capacity(self.n + 1);
        let mut j = 0;
        for a in 0..=self.n {
            while j + 1 < knots.len() && knots[j + 1].0 <= a {
                j += 1;
            }
            let (a0, p0, s0) = knots[j];
            if a == a0 || j + 1 == knots.len() {
                table.push((p0, s0));
                continue;
            }
            let (a1, p1, s1) = knots[j + 1];
            let t = (a - a0) as f64 / (a1 - a0) as f64;
            table.push((p0 + t * (p1 - p0), s0 + t * (s1 - s0)));
        }
        table
    }

    /// Depolarizing failure probability at physical error rate `p`.
    pub fn mixed(&self, p: f64) -> Result<(f64, f64)> {
        binomial_mix(&self.full_table(), p)
    }

    /// Consecutive sampled weights up to `n / 2` whose rates drop by more
    /// than three combined standard deviations.
    pub fn monotonicity_flags(&self) -> Vec<(usize, usize)> {
        self.records
            .windows(2)
            .filter(|w| w[1].a <= self.n / 2)
            .filter(|w| w[0].p - w[1].p > 3.0 * w[0].sigma.hypot(w[1].sigma))
            .map(|w| (w[0].a, w[1].a))
            .collect()
    }

    pub fn write_csv<W: Write>(curves: &[FailureCurve], w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        for c in curves {
            for r in &c.records {
                out.serialize(ResultRow {
                    family: c.family,
                    variant: c.variant,
                    radius: c.radius,
                    n: c.n,
                    k: c.k,
                    target: c.target,
                    a: r.a,
                    m: r.m,
                    f: r.f,
                    p: r.p,
                    sigma: r.sigma,
                    timeouts: r.timeouts,
                })?;
            }
        }
        out.flush()?;
        Ok(())
    }

    /// Groups rows by code and target.
    pub fn read_csv<R: Read>(r: R) -> Result<Vec<FailureCurve>> {
        let mut curves: BTreeMap<(String, String, usize, usize), FailureCurve> = BTreeMap::new();
        for row in csv::Reader::from_reader(r).deserialize() {
            let row: ResultRow = row?;
            if row.f > row.m || row.m == 0 || row.a > row.n {
                return Err(Error::Parse(format!("inconsistent record at weight {}", row.a)));
            }
            let key = (
                row.family.name().to_string(),
                row.variant.name().to_string(),
                row.radius,
                row.target,
            );
            let curve = curves.entry(key).or_insert_with(|| FailureCurve {
                family: row.family,
                variant: row.variant,
                radius: row.radius,
                n: row.n,
                k: row.k,
                target: row.target,
                records: Vec::new(),
            });
            curve.records.push(WeightRecord::new(row.a, row.m, row.f, row.timeouts));
        }
        let mut out: Vec<FailureCurve> = curves.into_values().collect();
        for c in &mut out {
            c.records.sort_by_key(|r| r.a);
        }
        Ok(out)
    }
}

/// Binomial probabilities `C(n,a) p^a (1-p)^(n-a)` for `a = 0..=n`, grown
/// outward from the mode by term ratios and normalised.
pub fn binomial_weights(n: usize, p: f64) -> Vec<f64> {
    let mut w = vec![0.0; n + 1];
    if p == 0.0 {
        w[0] = 1.0;
        return w;
    }
    if p == 1.0 {
        w[n] = 1.0;
        return w;
    }
    let mode = (((n + 1) as f64) * p).floor().min(n as f64) as usize;
    let odds = p / (1.0 - p);
    w[mode] = 1.0;
    for a in mode..n {
        w[a + 1] = w[a] * (n - a) as f64 / (a + 1) as f64 * odds;
    }
    for a in (0..mode).rev() {
        w[a] = w[a + 1] * (a + 1) as f64 / (n - a) as f64 / odds;
    }
    let total: f64 = w.iter().sum();
    w.iter_mut().for_each(|x| *x /= total);
    w
}

/// Mixes per-weight `(P, σ)` over a binomial error count; σ is combined in
/// quadrature with the same weights.
pub fn binomial_mix(table: &[(f64, f64)], p: f64) -> Result<(f64, f64)> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidArgument(format!("error rate {p} outside [0, 1]")));
    }
    if table.is_empty() {
        return Err(Error::InvalidArgument("empty failure table".into()));
    }
    let w = binomial_weights(table.len() - 1, p);
    let mean = w.iter().zip(table).map(|(w, (pf, _))| w * pf).sum::<f64>();
    let var = w.iter().zip(table).map(|(w, (_, s))| (w * s).powi(2)).sum::<f64>();
    Ok((mean.clamp(0.0, 1.0), var.sqrt()))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PairCrossing {
    pub radii: (usize, usize),
    pub p: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Threshold {
    pub p_th: f64,
    pub bracket: (f64, f64),
    pub pairs: Vec<PairCrossing>,
}

/// First rate in `(0, 0.5)` where the larger code stops beating the
/// smaller one.
pub fn crossing<F, G>(small: F, large: G) -> Option<f64>
where
    F: Fn(f64) -> f64,
    G: Fn(f64) -> f64,
{
    let diff = |p: f64| large(p) - small(p);
    const STEPS: usize = 2000;
    let grid = |i: usize| 0.5 * i as f64 / STEPS as f64;
    let mut prev = diff(grid(1));
    for i in 2..STEPS {
        let (lo, hi) = (grid(i - 1), grid(i));
        let d = diff(hi);
        if prev < 0.0 && d >= 0.0 {
            let (mut lo, mut hi) = (lo, hi);
            for _ in 0..100 {
                let mid = 0.5 * (lo + hi);
                if diff(mid) < 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
                if hi - lo < 1e-15 {
                    break;
                }
            }
            return Some(0.5 * (lo + hi));
        }
        prev = d;
    }
    None
}

/// Crossings of adjacent radii and their mean.
pub fn estimate_threshold(curves: &[FailureCurve]) -> Result<Threshold> {
    let mut sorted: Vec<&FailureCurve> = curves.iter().collect();
    sorted.sort_by_key(|c| c.radius);
    sorted.dedup_by_key(|c| c.radius);
    if sorted.len() < 2 {
        return Err(Error::InvalidArgument("need curves at two or more radii".into()));
    }
    let tables: Vec<Vec<(f64, f64)>> = sorted.iter().map(|c| c.full_table()).collect();
    let eval = |t: &Vec<(f64, f64)>, p: f64| binomial_mix(t, p).map(|x| x.0).unwrap_or(f64::NAN);
    let mut pairs = Vec::new();
    for i in 0..sorted.len() - 1 {
        let p = crossing(|p| eval(&tables[i], p), |p| eval(&tables[i + 1], p)).ok_or_else(|| {
            Error::InvalidArgument(format!(
                "no crossing in (0, 0.5) between radius {} and {}",
                sorted[i].radius,
                sorted[i + 1].radius
            ))
        })?;
        pairs.push(PairCrossing {
            radii: (sorted[i].radius, sorted[i + 1].radius),
            p,
        });
    }
    let ps: Vec<f64> = pairs.iter().map(|c| c.p).collect();
    Ok(Threshold {
        p_th: ps.iter().sum::<f64>() / ps.len() as f64,
        bracket: (
            ps.iter().cloned().fold(f64::INFINITY, f64::min),
            ps.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
        ),
        pairs,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PlotPoint {
    pub p: f64,
    pub p_failure: f64,
    pub sigma: f64,
}

pub fn plot_points(curve: &FailureCurve, rates: &[f64]) -> Result<Vec<PlotPoint>> {
    let table = curve.full_table();
    rates
        .iter()
        .map(|&p| {
            binomial_mix(&table, p).map(|(p_failure, sigma)| PlotPoint { p, p_failure, sigma })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builder::single_tile_code;
    use crate::decoder::DecoderOptions;
    use crate::seed;

    fn curve(n: usize, records: Vec<WeightRecord>) -> FailureCurve {
        FailureCurve {
            family: Family::Heptagon,
            variant: RateVariant::Max,
            radius: 1,
            n,
            k: 1,
            target: 0,
            records,
        }
    }

    #[test]
    fn fixed_weight_errors_have_exact_weight() {
        let mut rng = trial_rng(1, 2, 3, 4);
        for a in 0..=9 {
            let e = sample_fixed_weight_error(9, a, &mut rng).unwrap();
            assert_eq!(e.weight(), a);
        }
        assert!(sample_fixed_weight_error(3, 4, &mut rng).is_err());
    }

    #[test]
    fn sigma_formula() {
        assert!((sigma(0.5, 100) - 0.05).abs() < 1e-15);
        assert_eq!(WeightRecord::new(0, 10, 0, 0).sigma, 0.0);
    }

    #[test]
    fn steane_tile_corrects_single_errors() {
        let code = single_tile_code(&seed::steane_tensor()).unwrap();
        let dec = Decoder::new(&code, DecoderOptions::default()).unwrap();
        let sim = Simulator::new(&code, &dec, 0).unwrap();
        assert_eq!(sim.run_trials(0, 50, 7).unwrap().f, 0);
        assert_eq!(sim.run_trials(1, 200, 7).unwrap().f, 0);
        assert!(sim.run_trials(3, 200, 7).unwrap().f > 0);
    }

    #[test]
    fn binomial_edge_cases() {
        let zeros = vec![(0.0, 0.0); 8];
        for p in [0.0, 0.1, 0.7, 1.0] {
            assert_eq!(binomial_mix(&zeros, p).unwrap().0, 0.0);
        }
        let n = 20;
        let mut ones = vec![(1.0, 0.0); n + 1];
        ones[0] = (0.0, 0.0);
        for p in [0.01, 0.2, 0.5, 0.93] {
            let got = binomial_mix(&ones, p).unwrap().0;
            let want = 1.0 - (1.0 - p).powi(n as i32);
            assert!((got - want).abs() < 1e-14, "{got} {want}");
        }
        assert!(binomial_mix(&ones, 1.5).is_err());
        assert!(binomial_mix(&ones, -0.1).is_err());
    }

    #[test]
    fn weights_sum_to_one() {
        for n in [0, 1, 5, 203, 4000] {
            for p in [1e-6, 0.07, 0.5, 0.999] {
                let s: f64 = binomial_weights(n, p).iter().sum();
                assert!((s - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn interpolation_fills_gaps() {
        let c = curve(
            10,
            vec![WeightRecord::new(2, 10, 2, 0), WeightRecord::new(6, 10, 6, 0)],
        );
        let t = c.full_table();
        assert_eq!(t.len(), 11);
        assert_eq!(t[0].0, 0.0);
        assert!((t[1].0 - 0.1).abs() < 1e-12);
        assert!((t[4].0 - 0.4).abs() < 1e-12);
        assert_eq!(t[10].0, 0.6);
    }

    #[test]
    fn synthetic_crossing() {
        let f = |r: i32| move |p: f64| (p / 0.07).powi(r).min(1.0);
        let p = crossing(f(2), f(3)).unwrap();
        assert!((p - 0.07).abs() < 1e-12);
        assert!(crossing(f(2), f(2)).is_none());
    }

    #[test]
    fn csv_round_trip() {
        let c = curve(
            7,
            vec![WeightRecord::new(0, 5, 0, 0), WeightRecord::new(3, 5, 2, 1)],
        );
        let mut buf = Vec::new();
        FailureCurve::write_csv(std::slice::from_ref(&c), &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("family,variant,R,n,k,target,a,m,f,P,sigma,timeouts"));
        assert_eq!(FailureCurve::read_csv(&buf[..]).unwrap(), vec![c]);
    }

    #[test]
    fn target_parsing() {
        assert_eq!("central".parse::<Target>().unwrap(), Target::Central);
        assert_eq!("3".parse::<Target>().unwrap(), Target::Id(3));
        assert!("x".parse::<Target>().is_err());
        assert_eq!("1,4".parse::<Weights>().unwrap(), Weights::List(vec![1, 4]));
    }
}
