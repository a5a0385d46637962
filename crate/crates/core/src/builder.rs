//! Contraction of a tile network into a boundary stabilizer code.

use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2::{BitVec, Gf2Matrix};
use crate::pauli::{self, PauliVector};
use crate::seed::{self, SeedCode};
use crate::tiling::{self, Family, Leg, RateVariant, TileGraph, TileKind};

/// Seed tensors placed on logical and blank tiles.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TileSeeds {
    pub logical: SeedCode,
    pub blank: SeedCode,
}

impl TileSeeds {
    pub fn new(logical: SeedCode) -> Result<Self> {
        if logical.k() != 1 {
            return Err(Error::InvalidArgument(format!(
                "seed {} has k = {}, tiles need exactly one bulk leg",
                logical.name,
                logical.k()
            )));
        }
        let blank = seed::blank_tile(&logical)?;
        Ok(Self { logical, blank })
    }

    pub fn for_kind(&self, kind: TileKind) -> &SeedCode {
        match kind {
            TileKind::Logical => &self.logical,
            TileKind::Blank => &self.blank,
        }
    }

    /// Tableau column of a tile slot.
    pub fn column(&self, kind: TileKind, slot: usize) -> usize {
        match kind {
            TileKind::Logical => {
                let planar = self.logical.planar_legs();
                if slot < planar.len() {
                    planar[slot]
                } else {
                    self.logical.bulk_legs()[0]
                }
            }
            TileKind::Blank => slot,
        }
    }

    fn check_against(&self, graph: &TileGraph) -> Result<()> {
        for tile in &graph.tiles {
            let seed = self.for_kind(tile.kind);
            let expected = tile.sides + usize::from(tile.kind == TileKind::Logical);
            if seed.legs() != expected {
                return Err(Error::Dimension(format!(
                    "tile {} needs {expected} legs but seed {} has {}",
                    tile.id,
                    seed.name,
                    seed.legs()
                )));
            }
        }
        Ok(())
    }
}

/// Seed placed on tiles when none is requested.
pub fn default_seed(family: Family, variant: RateVariant) -> SeedCode {
    match (family, variant) {
        (Family::Heptagon, _) => seed::steane_tensor(),
        (Family::Pentagon, RateVariant::Reduced) => seed::scf_tensor(),
        (Family::Pentagon, _) => seed::five_qubit_tensor(),
    }
}

/// A stabilizer state on a set of legs, some of which may have been closed by
/// contraction. Closed legs carry identity in every generator.
#[derive(Clone, Debug)]
pub struct StabilizerState {
    generators: Vec<PauliVector>,
    open: Vec<bool>,
}

impl StabilizerState {
    pub fn new(generators: Vec<PauliVector>, legs: usize) -> Result<Self> {
        if generators.iter().any(|g| g.n() != legs) {
            return Err(Error::Dimension("generator length differs from leg count".into()));
        }
        Ok(Self {
            generators,
            open: vec![true; legs],
        })
    }

    /// Direct sum of independent states on disjoint legs.
    pub fn direct_sum(parts: &[&[PauliVector]]) -> Self {
        let total: usize = parts.iter().map(|p| p.first().map_or(0, |g| g.n())).sum();
        let mut generators = Vec::new();
        let mut offset = 0;
        for part in parts {
            let width = part.first().map_or(0, |g| g.n());
            for g in *part {
                let mut v = PauliVector::identity(total);
                for q in g.support() {
                    v.set(offset + q, g.get(q));
                }
                generators.push(v);
            }
            offset += width;
        }
        Self {
            generators,
            open: vec![true; total],
        }
    }

    pub fn generators(&self) -> &[PauliVector] {
        &self.generators
    }

    pub fn open_legs(&self) -> Vec<usize> {
        (0..self.open.len()).filter(|&i| self.open[i]).collect()
    }

    /// Adds a state on the currently unused legs `offset..offset + width`.
    fn absorb(&mut self, offset: usize, generators: &[PauliVector]) {
        let total = self.open.len();
        for g in generators {
            let mut v = PauliVector::identity(total);
            for q in g.support() {
                v.set(offset + q, g.get(q));
            }
            self.generators.push(v);
        }
        let width = generators.first().map_or(0, |g| g.n());
        self.open[offset..offset + width].fill(true);
    }

    /// Replaces the generators anticommuting with `m` by a set that commutes
    /// with it and includes `m` itself.
    fn measure(&mut self, m: &PauliVector, anticommutes: impl Fn(&PauliVector) -> bool) {
        let hits: Vec<usize> = (0..self.generators.len())
            .filter(|&i| anticommutes(&self.generators[i]))
            .collect();
        let Some((&first, rest)) = hits.split_first() else {
            return;
        };
        let pivot = self.generators[first].clone();
        for &i in rest {
            self.generators[i].mul_assign(&pivot);
        }
        self.generators[first] = m.clone();
    }

    /// Projects legs `a` and `b` onto the Bell pair stabilized by `X_aX_b`
    /// and `Z_aZ_b`, then removes both legs.
    pub fn contract_pair(&mut self, a: usize, b: usize) -> Result<()> {
        for leg in [a, b] {
            if leg >= self.open.len() || !self.open[leg] {
                return Err(Error::ClosedLeg(leg));
            }
        }
        if a == b {
            return Err(Error::InvalidArgument(format!("cannot contract leg {a} with itself")));
        }
        let n = self.open.len();
        let mut xx = PauliVector::identity(n);
        xx.x_mut().set(a, true);
        xx.x_mut().set(b, true);
        let mut zz = PauliVector::identity(n);
        zz.z_mut().set(a, true);
        zz.z_mut().set(b, true);
        self.measure(&xx, |g| g.z().get(a) ^ g.z().get(b));
        self.measure(&zz, |g| g.x().get(a) ^ g.x().get(b));

        let mut removed = Vec::with_capacity(2);
        for bit in [0usize, 1] {
            let has = |g: &PauliVector| if bit == 0 { g.x().get(a) } else { g.z().get(a) };
            let Some(pivot) = (0..self.generators.len())
                .find(|i| !removed.contains(i) && has(&self.generators[*i]))
            else {
                return Err(Error::Invariant(format!(
                    "no generator acts on leg {a} after projection"
                )));
            };
            let row = self.generators[pivot].clone();
            for i in 0..self.generators.len() {
                if i != pivot && has(&self.generators[i]) {
                    self.generators[i].mul_assign(&row);
                }
            }
            removed.push(pivot);
        }
        removed.sort_unstable();
        for &i in removed.iter().rev() {
            self.generators.swap_remove(i);
        }
        for g in &self.generators {
            if g.x().get(a) || g.z().get(a) || g.x().get(b) || g.z().get(b) {
                return Err(Error::Invariant(format!(
                    "generator {g} still acts on contracted legs {a}, {b}"
                )));
            }
        }
        self.open[a] = false;
        self.open[b] = false;
        Ok(())
    }

    /// Generators restricted to the given open legs, in that order.
    pub fn restricted(&self, legs: &[usize]) -> Vec<PauliVector> {
        self.generators.iter().map(|g| g.restrict(legs)).collect()
    }

    /// Checks count, commutation and independence on the open legs.
    pub fn check(&self) -> Result<()> {
        let open = self.open_legs();
        if self.generators.len() != open.len() {
            return Err(Error::Invariant(format!(
                "{} generators on {} open legs",
                self.generators.len(),
                open.len()
            )));
        }
        check_commuting(&self.generators)?;
        let rank = pauli::symplectic_rank(&self.generators);
        if rank != self.generators.len() {
            return Err(Error::Invariant(format!(
                "generators have rank {rank} of {}",
                self.generators.len()
            )));
        }
        Ok(())
    }
}

fn check_commuting(rows: &[PauliVector]) -> Result<()> {
    for (i, a) in rows.iter().enumerate() {
        for b in &rows[i + 1..] {
            if a.anticommutes(b) {
                return Err(Error::Invariant(format!("{a} and {b} anticommute")));
            }
        }
    }
    Ok(())
}

/// Contracts every edge of the graph. The result is a state on
/// `boundary_legs` followed by `bulk_legs`.
pub fn network_state(graph: &TileGraph, seeds: &TileSeeds) -> Result<StabilizerState> {
    seeds.check_against(graph)?;
    let mut base = Vec::with_capacity(graph.tiles.len());
    let mut total = 0;
    for tile in &graph.tiles {
        base.push(total);
        total += seeds.for_kind(tile.kind).legs();
    }
    let mut state = StabilizerState {
        generators: Vec::new(),
        open: vec![false; total],
    };
    let column = |leg: &Leg, base: &[usize]| {
        base[leg.tile] + seeds.column(graph.tiles[leg.tile].kind, leg.slot)
    };
    let mut next_edge = 0;
    for tile in &graph.tiles {
        state.absorb(base[tile.id], &seeds.for_kind(tile.kind).generators);
        while next_edge < graph.edges.len() {
            let (a, b) = &graph.edges[next_edge];
            if a.tile.max(b.tile) > tile.id {
                break;
            }
            state.contract_pair(column(a, &base), column(b, &base))?;
            next_edge += 1;
        }
    }
    let order: Vec<usize> = graph
        .boundary_legs
        .iter()
        .chain(&graph.bulk_legs)
        .map(|leg| column(leg, &base))
        .collect();
    let generators = state.restricted(&order);
    StabilizerState::new(generators, order.len())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Logical {
    pub id: usize,
    pub layer: usize,
    pub tile: usize,
    pub x_rep: PauliVector,
    pub z_rep: PauliVector,
}

/// How a code was produced, when it came from a tiling.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeMeta {
    pub family: Family,
    pub variant: RateVariant,
    pub radius: usize,
    pub seed: String,
}

#[derive(Clone, Debug)]
pub struct Construction {
    pub graph: TileGraph,
    pub seeds: TileSeeds,
}

#[derive(Clone, Debug)]
pub struct HolographicCode {
    pub n: usize,
    pub stabilizers: Vec<PauliVector>,
    pub logicals: Vec<Logical>,
    pub css: bool,
    pub meta: Option<CodeMeta>,
    pub construction: Option<Construction>,
}

/// Per-sector check matrices and logical representatives of a CSS code.
#[derive(Clone, Debug)]
pub struct CssSplit {
    /// X-part of X-type stabilizers; detects Z errors.
    pub sx: Gf2Matrix,
    /// Z-part of Z-type stabilizers; detects X errors.
    pub sz: Gf2Matrix,
    pub x_logicals: Vec<BitVec>,
    pub z_logicals: Vec<BitVec>,
}

/// JSON sidecar describing a code file.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CodeFileMeta {
    #[serde(flatten)]
    pub meta: Option<CodeMeta>,
    pub n: usize,
    pub k: usize,
    pub css: bool,
    pub logical_layers: Vec<usize>,
    pub logical_tiles: Vec<usize>,
}

impl HolographicCode {
    pub fn k(&self) -> usize {
        self.logicals.len()
    }

    pub fn rate(&self) -> f64 {
        self.k() as f64 / self.n as f64
    }

    /// Index of the logical qubit at layer 0, if any.
    pub fn central_qubit(&self) -> Option<usize> {
        self.logicals.iter().position(|l| l.layer == 0)
    }

    /// All structural invariants of a stabilizer code with logical pairs.
    pub fn check_invariants(&self) -> Result<()> {
        let k = self.k();
        if self.stabilizers.len() + k != self.n {
            return Err(Error::Invariant(format!(
                "{} stabilizers and {k} logicals on {} qubits",
                self.stabilizers.len(),
                self.n
            )));
        }
        check_commuting(&self.stabilizers)?;
        if pauli::symplectic_rank(&self.stabilizers) != self.stabilizers.len() {
            return Err(Error::Invariant("stabilizers are dependent".into()));
        }
        for l in &self.logicals {
            for s in &self.stabilizers {
                if l.x_rep.anticommutes(s) || l.z_rep.anticommutes(s) {
                    return Err(Error::Invariant(format!(
                        "logical {} anticommutes with stabilizer {s}",
                        l.id
                    )));
                }
            }
            for m in &self.logicals {
                let same = l.id == m.id;
                if l.x_rep.anticommutes(&m.z_rep) != same
                    || l.x_rep.anticommutes(&m.x_rep)
                    || l.z_rep.anticommutes(&m.z_rep)
                {
                    return Err(Error::Invariant(format!(
                        "logicals {} and {} have wrong commutation",
                        l.id, m.id
                    )));
                }
            }
        }
        let css = self
            .stabilizers
            .iter()
            .all(|s| s.is_x_type() || s.is_z_type());
        if css != self.css {
            return Err(Error::Invariant("css flag disagrees with stabilizers".into()));
        }
        Ok(())
    }

    pub fn css_split(&self) -> Result<CssSplit> {
        if !self.css {
            return Err(Error::NotCss);
        }
        let mut sx = Gf2Matrix::zeros(0, self.n);
        let mut sz = Gf2Matrix::zeros(0, self.n);
        for s in &self.stabilizers {
            if s.is_z_type() {
                sz.push_row(s.z().clone())?;
            } else {
                sx.push_row(s.x().clone())?;
            }
        }
        let mut x_logicals = Vec::with_capacity(self.k());
        let mut z_logicals = Vec::with_capacity(self.k());
        for l in &self.logicals {
            if !l.x_rep.is_x_type() || !l.z_rep.is_z_type() {
                return Err(Error::NotCss);
            }
            x_logicals.push(l.x_rep.x().clone());
            z_logicals.push(l.z_rep.z().clone());
        }
        Ok(CssSplit {
            sx,
            sz,
            x_logicals,
            z_logicals,
        })
    }

    /// Writes `<stem>.tableau` and `<stem>.json`.
    pub fn save(&self, stem: &Path) -> Result<()> {
        let mut tableau = std::fs::File::create(stem.with_extension("tableau"))?;
        writeln!(tableau, "# stabilizers {}", self.stabilizers.len())?;
        pauli::write_tableau(&mut tableau, &self.stabilizers)?;
        for l in &self.logicals {
            writeln!(tableau, "# logical {} layer {} (X then Z)", l.id, l.layer)?;
            pauli::write_tableau(&mut tableau, &[l.x_rep.clone(), l.z_rep.clone()])?;
        }
        let meta = CodeFileMeta {
            meta: self.meta.clone(),
            n: self.n,
            k: self.k(),
            css: self.css,
            logical_layers: self.logicals.iter().map(|l| l.layer).collect(),
            logical_tiles: self.logicals.iter().map(|l| l.tile).collect(),
        };
        std::fs::write(
            stem.with_extension("json"),
            serde_json::to_string_pretty(&meta)? + "\n",
        )?;
        Ok(())
    }

    /// Reads a code written by [`HolographicCode::save`]. When the metadata
    /// names a tiling, the construction is rebuilt and kept only if it yields
    /// the same tableau.
    pub fn load(stem: &Path) -> Result<Self> {
        let meta: CodeFileMeta =
            serde_json::from_str(&std::fs::read_to_string(stem.with_extension("json"))?)?;
        let file = std::fs::File::open(stem.with_extension("tableau"))?;
        let rows = pauli::read_tableau(BufReader::new(file))?;
        Self::from_rows(meta, rows)
    }

    pub fn from_reader<R: BufRead>(meta: CodeFileMeta, reader: R) -> Result<Self> {
        Self::from_rows(meta, pauli::read_tableau(reader)?)
    }

    fn from_rows(meta: CodeFileMeta, rows: Vec<PauliVector>) -> Result<Self> {
        let (n, k) = (meta.n, meta.k);
        if n < k || rows.len() != n + k || rows.iter().any(|r| r.n() != n) {
            return Err(Error::Parse(format!(
                "expected {} rows on {n} qubits, found {}",
                n + k,
                rows.len()
            )));
        }
        if meta.logical_layers.len() != k || meta.logical_tiles.len() != k {
            return Err(Error::Parse("logical metadata length differs from k".into()));
        }
        let stabilizers = rows[..n - k].to_vec();
        let logicals = (0..k)
            .map(|i| Logical {
                id: i,
                layer: meta.logical_layers[i],
                tile: meta.logical_tiles[i],
                x_rep: rows[n - k + 2 * i].clone(),
                z_rep: rows[n - k + 2 * i + 1].clone(),
            })
            .collect();
        let mut code = HolographicCode {
            n,
            stabilizers,
            logicals,
            css: meta.css,
            meta: meta.meta.clone(),
            construction: None,
        };
        code.check_invariants()?;
        if let Some(m) = &meta.meta {
            let rebuilt = build_code(m.family, m.radius, m.variant, &seed::by_name(&m.seed)?)?;
            if rebuilt.stabilizers == code.stabilizers {
                code.construction = rebuilt.construction;
            }
        }
        Ok(code)
    }
}

/// Splits a state on `n` boundary legs followed by `k` bulk legs into a code.
pub fn extract_code(state: &StabilizerState, n: usize) -> Result<HolographicCode> {
    let total = state.open_legs().len();
    if state.generators().len() != total || total < n {
        return Err(Error::Invariant(format!(
            "{} generators on {total} open legs",
            state.generators().len()
        )));
    }
    let k = total - n;
    let mut rows: Vec<PauliVector> = state.restricted(&state.open_legs());
    let mut pivots = Vec::with_capacity(2 * k);
    for j in 0..k {
        for z_part in [false, true] {
            let has = |g: &PauliVector| {
                if z_part {
                    g.z().get(n + j)
                } else {
                    g.x().get(n + j)
                }
            };
            let Some(p) = (0..rows.len()).find(|i| !pivots.contains(i) && has(&rows[*i])) else {
                return Err(Error::NotIsometry(format!(
                    "no representative for logical {} on bulk leg {j}",
                    if z_part { 'Z' } else { 'X' }
                )));
            };
            let row = rows[p].clone();
            for (i, r) in rows.iter_mut().enumerate() {
                if i != p && has(r) {
                    r.mul_assign(&row);
                }
            }
            pivots.push(p);
        }
    }
    let boundary: Vec<usize> = (0..n).collect();
    let stabilizers: Vec<PauliVector> = (0..rows.len())
        .filter(|i| !pivots.contains(i))
        .map(|i| rows[i].restrict(&boundary))
        .collect();
    let css = stabilizers.iter().all(|s| s.is_x_type() || s.is_z_type());
    let logicals = (0..k)
        .map(|j| Logical {
            id: j,
            layer: 0,
            tile: 0,
            x_rep: rows[pivots[2 * j]].restrict(&boundary),
            z_rep: rows[pivots[2 * j + 1]].restrict(&boundary),
        })
        .collect();
    Ok(HolographicCode {
        n,
        stabilizers,
        logicals,
        css,
        meta: None,
        construction: None,
    })
}

/// Lowers logical representative weights by multiplying in stabilizers while
/// that strictly helps.
pub fn reduce_representatives(code: &mut HolographicCode) {
    let stabilizers = &code.stabilizers;
    let reduce = |rep: &mut PauliVector| loop {
        let mut improved = false;
        for s in stabilizers {
            let candidate = rep.mul(s);
            if candidate.weight() < rep.weight() {
                *rep = candidate;
                improved = true;
            }
        }
        if !improved {
            break;
        }
    };
    for l in &mut code.logicals {
        reduce(&mut l.x_rep);
        reduce(&mut l.z_rep);
    }
}

/// Tiles, contracts and extracts a code, then checks every invariant.
pub fn build_code(
    family: Family,
    radius: usize,
    variant: RateVariant,
    logical_seed: &SeedCode,
) -> Result<HolographicCode> {
    let graph = tiling::build_tiling(family, radius, variant)?;
    let seeds = TileSeeds::new(logical_seed.clone())?;
    let state = network_state(&graph, &seeds)?;
    let n = graph.boundary_legs.len();
    let mut code = extract_code(&state, n)?;
    for (l, leg) in code.logicals.iter_mut().zip(&graph.bulk_legs) {
        l.tile = leg.tile;
        l.layer = graph.tiles[leg.tile].layer;
    }
    reduce_representatives(&mut code);
    code.meta = Some(CodeMeta {
        family,
        variant,
        radius,
        seed: logical_seed.name.clone(),
    });
    code.construction = Some(Construction { graph, seeds });
    code.check_invariants()?;
    Ok(code)
}

/// The code of a single seed tile.
pub fn single_tile_code(seed: &SeedCode) -> Result<HolographicCode> {
    let order: Vec<usize> = seed.planar_legs().into_iter().chain(seed.bulk_legs()).collect();
    let rows: Vec<PauliVector> = seed.generators.iter().map(|g| g.restrict(&order)).collect();
    let state = StabilizerState::new(rows, order.len())?;
    let mut code = extract_code(&state, seed.n())?;
    reduce_representatives(&mut code);
    code.check_invariants()?;
    Ok(code)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pv(s: &str) -> PauliVector {
        s.parse().unwrap()
    }

    #[test]
    fn contracting_two_plus_states_leaves_nothing() {
        let mut st = StabilizerState::new(vec![pv("XI"), pv("IX")], 2).unwrap();
        st.contract_pair(0, 1).unwrap();
        assert!(st.generators().is_empty());
        assert!(st.open_legs().is_empty());
    }

    #[test]
    fn entanglement_swapping() {
        let bell = [pv("XX"), pv("ZZ")];
        let mut st = StabilizerState::direct_sum(&[&bell, &bell]);
        st.contract_pair(1, 2).unwrap();
        let out = st.restricted(&st.open_legs());
        let m = pauli::symplectic_matrix(&out, 2);
        let expected = pauli::symplectic_matrix(&bell, 2);
        assert_eq!(m.rref().matrix, expected.rref().matrix);
    }

    #[test]
    fn closed_leg_rejected() {
        let mut st = StabilizerState::new(vec![pv("XI"), pv("IX")], 2).unwrap();
        st.contract_pair(0, 1).unwrap();
        assert!(matches!(st.contract_pair(0, 1), Err(Error::ClosedLeg(0))));
    }

    #[test]
    fn steane_pair_contraction() {
        let s = seed::steane_tensor();
        let mut st = StabilizerState::direct_sum(&[&s.generators, &s.generators]);
        st.contract_pair(0, 8).unwrap();
        assert_eq!(st.generators().len(), 14);
        st.check().unwrap();
    }

    #[test]
    fn single_steane_code() {
        let code = single_tile_code(&seed::steane_tensor()).unwrap();
        assert_eq!((code.n, code.k(), code.stabilizers.len()), (7, 1, 6));
        assert!(code.css);
        assert_eq!(code.logicals[0].x_rep.weight(), 3);
        let split = code.css_split().unwrap();
        assert_eq!(split.sx.rows(), 3);
        assert_eq!(split.sx.rref().matrix, split.sz.rref().matrix);
    }

    #[test]
    fn single_scf_code() {
        let code = single_tile_code(&seed::scf_tensor()).unwrap();
        let split = code.css_split().unwrap();
        assert_eq!((split.sx.rows(), split.sx.cols()), (2, 5));
        assert_eq!((split.sz.rows(), split.sz.cols()), (2, 5));
        assert!(single_tile_code(&seed::five_qubit_tensor())
            .unwrap()
            .css_split()
            .is_err());
    }

    #[test]
    fn single_tile_via_graph_matches_seed() {
        let code = build_code(Family::Heptagon, 1, RateVariant::Max, &seed::steane_tensor()).unwrap();
        let direct = single_tile_code(&seed::steane_tensor()).unwrap();
        let a = pauli::symplectic_matrix(&code.stabilizers, 7).rref().matrix;
        let b = pauli::symplectic_matrix(&direct.stabilizers, 7).rref().matrix;
        assert_eq!(a, b);
    }

    #[test]
    fn heptagon_radius_two() {
        let code = build_code(Family::Heptagon, 2, RateVariant::Max, &seed::steane_tensor()).unwrap();
        assert_eq!((code.n, code.k()), (42, 8));
        assert!(code.css);
        assert_eq!(code.central_qubit(), Some(0));
    }

    #[test]
    fn five_qubit_builds_are_not_css() {
        let code =
            build_code(Family::Pentagon, 2, RateVariant::Zero, &seed::five_qubit_tensor()).unwrap();
        assert_eq!((code.n, code.k()), (25, 1));
        assert!(!code.css);
    }

    #[test]
    fn save_and_load() {
        let dir = tempfile::tempdir().unwrap();
        let code = build_code(Family::Pentagon, 2, RateVariant::Reduced, &seed::scf_tensor()).unwrap();
        let stem = dir.path().join("scf");
        code.save(&stem).unwrap();
        let back = HolographicCode::load(&stem).unwrap();
        assert_eq!(back.stabilizers, code.stabilizers);
        assert_eq!(back.logicals, code.logicals);
        assert!(back.construction.is_some());
    }
}
