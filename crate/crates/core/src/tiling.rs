//! Combinatorial hyperbolic tilings truncated at a radius.
//!
//! Tiles are grown vertex layer by vertex layer with four tiles meeting at
//! every vertex. Tile sizes may depend on the distance from the center, which
//! is how the pentagon/hexagon reduced-rate pattern is produced. The region of
//! radius `R` is the set of tiles at edge-adjacency distance `< R` from the
//! central tile, so `R = 1` is the single central tile.
//!
//! Legs of a tile are addressed by *slot*: slots `0..sides` are the planar
//! legs in the seed's cyclic order, and slot `sides` is the bulk leg of a
//! logical tile.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tiles meeting at each vertex.
const VERTEX_DEGREE: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Heptagon,
    Pentagon,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RateVariant {
    Max,
    Reduced,
    Zero,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TileKind {
    Logical,
    Blank,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Heptagon => "heptagon",
            Family::Pentagon => "pentagon",
        }
    }

    /// Number of planar legs for a tile of the given kind.
    pub fn tile_sides(self, kind: TileKind) -> usize {
        match (self, kind) {
            (Family::Heptagon, TileKind::Logical) => 7,
            (Family::Heptagon, TileKind::Blank) => 8,
            (Family::Pentagon, TileKind::Logical) => 5,
            (Family::Pentagon, TileKind::Blank) => 6,
        }
    }

    /// Slot that receives the first of the contiguous legs facing the center.
    ///
    /// Logical tiles start the block on a planar leg beside the bulk leg of
    /// the seed's printed order: the one before it for heptagons, the one
    /// after it for pentagons. Blank heptagon-family tiles start on slot 6 and
    /// blank pentagon-family tiles on slot 5.
    fn inward_start(self, kind: TileKind) -> usize {
        match (self, kind) {
            (Family::Heptagon, TileKind::Logical) => 5,
            (Family::Heptagon, TileKind::Blank) => 6,
            (Family::Pentagon, TileKind::Logical) => 4,
            (Family::Pentagon, TileKind::Blank) => 5,
        }
    }
}

impl RateVariant {
    pub fn name(self) -> &'static str {
        match self {
            RateVariant::Max => "max",
            RateVariant::Reduced => "reduced",
            RateVariant::Zero => "zero",
        }
    }

    /// Kind of a tile at dual-graph distance `depth` from the center.
    pub fn kind_at(self, depth: usize) -> TileKind {
        match self {
            RateVariant::Max => TileKind::Logical,
            RateVariant::Zero if depth == 0 => TileKind::Logical,
            RateVariant::Zero => TileKind::Blank,
            RateVariant::Reduced if depth % 2 == 0 => TileKind::Logical,
            RateVariant::Reduced => TileKind::Blank,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl fmt::Display for RateVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "heptagon" => Ok(Family::Heptagon),
            "pentagon" => Ok(Family::Pentagon),
            o => Err(Error::InvalidArgument(format!("unknown family '{o}'"))),
        }
    }
}

impl FromStr for RateVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "max" => Ok(RateVariant::Max),
            "reduced" => Ok(RateVariant::Reduced),
            "zero" => Ok(RateVariant::Zero),
            o => Err(Error::InvalidArgument(format!("unknown rate variant '{o}'"))),
        }
    }
}

/// One leg of one tile.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Leg {
    pub tile: usize,
    pub slot: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tile {
    pub id: usize,
    pub kind: TileKind,
    /// Dual-graph distance from the central tile.
    pub layer: usize,
    /// Planar leg count.
    pub sides: usize,
    /// Neighboring tile inside the region for every planar slot.
    pub neighbors: Vec<Option<usize>>,
}

impl Tile {
    pub fn bulk_slot(&self) -> Option<usize> {
        (self.kind == TileKind::Logical).then_some(self.sides)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TileGraph {
    pub family: Family,
    pub variant: RateVariant,
    pub radius: usize,
    pub tiles: Vec<Tile>,
    /// Contracted leg pairs, innermost first.
    pub edges: Vec<(Leg, Leg)>,
    /// Physical qubits, in qubit-index order.
    pub boundary_legs: Vec<Leg>,
    /// Logical qubits, in qubit-index order.
    pub bulk_legs: Vec<Leg>,
}

/// Boundary and bulk counts of a tiling.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Counts {
    pub n: usize,
    pub k: usize,
    pub rate: f64,
}

impl TileGraph {
    pub fn counts(&self) -> Counts {
        let n = self.boundary_legs.len();
        let k = self.bulk_legs.len();
        Counts {
            n,
            k,
            rate: k as f64 / n as f64,
        }
    }

    /// Checks that every planar leg is consumed exactly once and edges join
    /// tiles in the same or adjacent layers.
    pub fn check_structure(&self) -> Result<()> {
        let mut uses: HashMap<Leg, usize> = HashMap::new();
        for (a, b) in &self.edges {
            *uses.entry(*a).or_default() += 1;
            *uses.entry(*b).or_default() += 1;
            let (la, lb) = (self.tiles[a.tile].layer, self.tiles[b.tile].layer);
            if la.abs_diff(lb) > 1 {
                return Err(Error::Invariant(format!(
                    "edge {a:?}-{b:?} joins layers {la} and {lb}"
                )));
            }
        }
        for leg in &self.boundary_legs {
            *uses.entry(*leg).or_default() += 1;
        }
        for tile in &self.tiles {
            for slot in 0..tile.sides {
                let leg = Leg {
                    tile: tile.id,
                    slot,
                };
                let count = uses.get(&leg).copied().unwrap_or(0);
                if count != 1 {
                    return Err(Error::Invariant(format!(
                        "planar leg {leg:?} used {count} times"
                    )));
                }
            }
        }
        for leg in &self.bulk_legs {
            if uses.contains_key(leg) {
                return Err(Error::Invariant(format!("bulk leg {leg:?} is contracted")));
            }
        }
        if self.tiles.first().map(|t| t.layer) != Some(0) {
            return Err(Error::Invariant("central tile is not at layer 0".into()));
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

struct DisjointSets {
    parent: Vec<usize>,
}

impl DisjointSets {
    fn add(&mut self) -> usize {
        self.parent.push(self.parent.len());
        self.parent.len() - 1
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            self.parent[b] = a;
        }
    }
}

struct RawTile {
    sides: usize,
    neighbors: Vec<Option<(usize, usize)>>,
    vertices: Vec<usize>,
    depth: usize,
}

/// Grows a tiling with `layers` vertex layers. Tile `i`'s side `s` runs from
/// vertex `s` to vertex `s + 1`; `sides_at(depth)` chooses the polygon size
/// from the predicted dual-graph distance.
struct Growth<F: Fn(usize) -> usize> {
    sides_at: F,
    tiles: Vec<RawTile>,
    vertices: DisjointSets,
}

impl<F: Fn(usize) -> usize> Growth<F> {
    fn new_tile(&mut self, depth: usize) -> usize {
        let sides = (self.sides_at)(depth);
        let vertices = (0..sides).map(|_| self.vertices.add()).collect();
        self.tiles.push(RawTile {
            sides,
            neighbors: vec![None; sides],
            vertices,
            depth,
        });
        self.tiles.len() - 1
    }

    fn glue(&mut self, a: usize, sa: usize, b: usize, sb: usize) {
        debug_assert!(self.tiles[a].neighbors[sa].is_none());
        debug_assert!(self.tiles[b].neighbors[sb].is_none());
        self.tiles[a].neighbors[sa] = Some((b, sb));
        self.tiles[b].neighbors[sb] = Some((a, sa));
        let (pa, pb) = (self.tiles[a].sides, self.tiles[b].sides);
        let (va0, va1) = (self.tiles[a].vertices[sa], self.tiles[a].vertices[(sa + 1) % pa]);
        let (vb0, vb1) = (self.tiles[b].vertices[sb], self.tiles[b].vertices[(sb + 1) % pb]);
        self.vertices.union(va0, vb1);
        self.vertices.union(va1, vb0);
    }

    fn grow(sides_at: F, layers: usize) -> Result<Vec<RawTile>> {
        let mut g = Growth {
            sides_at,
            tiles: Vec::new(),
            vertices: DisjointSets { parent: Vec::new() },
        };
        let center = g.new_tile(0);
        let mut boundary: Vec<(usize, usize)> =
            (0..g.tiles[center].sides).map(|s| (center, s)).collect();
        for _ in 1..layers {
            boundary = g.add_layer(&boundary)?;
        }
        Ok(g.tiles)
    }

    fn add_layer(&mut self, boundary: &[(usize, usize)]) -> Result<Vec<(usize, usize)>> {
        let mut incident: HashMap<usize, usize> = HashMap::new();
        for t in 0..self.tiles.len() {
            for j in 0..self.tiles[t].sides {
                let root = self.vertices.find(self.tiles[t].vertices[j]);
                *incident.entry(root).or_default() += 1;
            }
        }
        let nb = boundary.len();
        let mut gaps = Vec::with_capacity(nb);
        for &(t, s) in boundary {
            let end = self.tiles[t].vertices[(s + 1) % self.tiles[t].sides];
            let used = incident[&self.vertices.find(end)];
            if used >= VERTEX_DEGREE {
                return Err(Error::Invariant(format!(
                    "boundary vertex already has {used} tiles"
                )));
            }
            gaps.push(VERTEX_DEGREE - used);
        }
        let start = (0..nb)
            .find(|&i| gaps[(i + nb - 1) % nb] >= 2)
            .ok_or_else(|| Error::Invariant("boundary has no open vertex".into()))?;

        let mut runs: Vec<(Vec<(usize, usize)>, usize)> = Vec::new();
        let mut current = Vec::new();
        for i in 0..nb {
            let j = (start + i) % nb;
            current.push(boundary[j]);
            if gaps[j] >= 2 {
                runs.push((std::mem::take(&mut current), gaps[j]));
            }
        }

        let mut run_tiles = Vec::with_capacity(runs.len());
        for (run, gap) in &runs {
            let depth = 1 + run.iter().map(|&(t, _)| self.tiles[t].depth).min().unwrap_or(0);
            let a = self.new_tile(depth);
            let p = self.tiles[a].sides;
            for (j, &(t, s)) in run.iter().enumerate() {
                self.glue(a, (p - j) % p, t, s);
            }
            run_tiles.push((a, run.len(), *gap));
        }

        let mut next = Vec::new();
        for idx in 0..run_tiles.len() {
            let (a, r, gap) = run_tiles[idx];
            let b = run_tiles[(idx + 1) % run_tiles.len()].0;
            let pa = self.tiles[a].sides;
            let corners = gap - 2;
            let (da, db) = (self.tiles[a].depth, self.tiles[b].depth);
            let (mut prev, mut prev_side) = (a, pa - r);
            let mut chain = Vec::with_capacity(corners);
            for i in 0..corners {
                let c = self.new_tile((da + i + 1).min(db + corners - i));
                self.glue(prev, prev_side, c, 0);
                prev = c;
                prev_side = self.tiles[c].sides - 1;
                chain.push(c);
            }
            self.glue(prev, prev_side, b, 1);
            next.extend((2..pa - r).map(|s| (a, s)));
            for c in chain {
                next.extend((1..self.tiles[c].sides - 1).map(|s| (c, s)));
            }
        }
        Ok(next)
    }
}

/// Builds the tile graph for a family, radius and rate variant.
pub fn build_tiling(family: Family, radius: usize, variant: RateVariant) -> Result<TileGraph> {
    if radius == 0 {
        return Err(Error::InvalidArgument("radius must be at least 1".into()));
    }
    let raw = Growth::grow(|d| family.tile_sides(variant.kind_at(d)), radius)?;

    let mut depth = vec![usize::MAX; raw.len()];
    depth[0] = 0;
    let mut queue = VecDeque::from([0usize]);
    while let Some(t) = queue.pop_front() {
        for &(u, _) in raw[t].neighbors.iter().flatten() {
            if depth[u] == usize::MAX {
                depth[u] = depth[t] + 1;
                queue.push_back(u);
            }
        }
    }

    let mut kept: Vec<usize> = (0..raw.len()).filter(|&t| depth[t] < radius).collect();
    kept.sort_by_key(|&t| (depth[t], t));
    let mut new_id = vec![usize::MAX; raw.len()];
    for (i, &t) in kept.iter().enumerate() {
        if raw[t].depth != depth[t] {
            return Err(Error::Invariant(format!(
                "tile {t} predicted at depth {} but found at {}",
                raw[t].depth, depth[t]
            )));
        }
        new_id[t] = i;
    }

    let slot_maps: Vec<Vec<usize>> = kept
        .iter()
        .map(|&t| {
            let tile = &raw[t];
            let p = tile.sides;
            let inward: Vec<bool> = tile
                .neighbors
                .iter()
                .map(|nb| nb.is_some_and(|(u, _)| depth[u] < depth[t]))
                .collect();
            if !inward.contains(&true) {
                return (0..p).collect();
            }
            let first = (0..p)
                .find(|&s| inward[s] && !inward[(s + p - 1) % p])
                .unwrap_or(0);
            let start = family.inward_start(variant.kind_at(depth[t]));
            (0..p).map(|s| (start + s + p - first) % p).collect()
        })
        .collect();

    let mut tiles = Vec::with_capacity(kept.len());
    let mut edges = Vec::new();
    let mut boundary_legs = Vec::new();
    let mut bulk_legs = Vec::new();
    for (id, &t) in kept.iter().enumerate() {
        let p = raw[t].sides;
        let kind = variant.kind_at(depth[t]);
        let mut neighbors = vec![None; p];
        for s in 0..p {
            let leg = Leg {
                tile: id,
                slot: slot_maps[id][s],
            };
            match raw[t].neighbors[s] {
                Some((u, su)) if new_id[u] != usize::MAX => {
                    let other = Leg {
                        tile: new_id[u],
                        slot: slot_maps[new_id[u]][su],
                    };
                    neighbors[leg.slot] = Some(other.tile);
                    if (id, s) < (other.tile, su) {
                        edges.push((leg, other));
                    }
                }
                _ => boundary_legs.push(leg),
            }
        }
        if kind == TileKind::Logical {
            bulk_legs.push(Leg { tile: id, slot: p });
        }
        tiles.push(Tile {
            id,
            kind,
            layer: depth[t],
            sides: p,
            neighbors,
        });
    }
    boundary_legs.sort();
    edges.sort_by_key(|(a, b)| (a.tile.max(b.tile), *a, *b));

    let graph = TileGraph {
        family,
        variant,
        radius,
        tiles,
        edges,
        boundary_legs,
        bulk_legs,
    };
    graph.check_structure()?;
    Ok(graph)
}
