//! Exact minimum-weight search over a contracted tile network.
//!
//! Every element of a built code's group `span(stabilizers, logicals)`
//! restricted to the boundary is obtained by choosing one element of each
//! tile's seed group so that both sides of every contracted edge carry the
//! same Pauli. Minimizing `weight(target + element)` is therefore a min-plus
//! contraction over edge variables: each tile contributes a table indexed by
//! the values on its contracted legs, and variables are eliminated one at a
//! time. The result is exact, and the minimizing element is recovered by
//! backtracking through the stored argmins.

use crate::builder::Construction;
use crate::error::{Error, Result};
use crate::tiling::TileKind;

const INF: u32 = u32::MAX / 4;

/// Which Pauli operators the search ranges over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Domain {
    /// Operators built only from X (values 0/1 per qubit).
    XType,
    /// Operators built only from Z (values 0/1 per qubit).
    ZType,
    /// Arbitrary Paulis, values `x | z << 1`.
    Pauli,
}

/// Per-qubit cost of a residual value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Cost {
    /// Number of set bits (sector weight).
    Bits,
    /// 1 for any non-identity value (Pauli weight).
    Support,
}

impl Domain {
    fn values(self) -> usize {
        match self {
            Domain::XType | Domain::ZType => 2,
            Domain::Pauli => 4,
        }
    }

    fn bits(self) -> usize {
        match self {
            Domain::XType | Domain::ZType => 1,
            Domain::Pauli => 2,
        }
    }
}

/// Constraint on the value of a bulk leg.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Bulk {
    Free,
    Fixed(u8),
}

#[derive(Clone, Copy, Debug)]
enum Role {
    Edge(usize),
    Boundary(usize),
    Bulk(usize),
}

#[derive(Clone, Debug)]
struct TileFactor {
    /// Group elements as values per slot.
    elements: Vec<Vec<u8>>,
    roles: Vec<Role>,
    /// Edge variables in ascending order, with the slot carrying each.
    scope: Vec<usize>,
    scope_slots: Vec<usize>,
}

#[derive(Clone, Debug)]
struct Step {
    var: usize,
    inputs: Vec<usize>,
    scope: Vec<usize>,
}

/// A network prepared for repeated minimum-weight queries.
#[derive(Clone, Debug)]
pub struct TensorNetwork {
    domain: Domain,
    n: usize,
    k: usize,
    tiles: Vec<TileFactor>,
    steps: Vec<Step>,
    /// Factors that survive elimination with empty scope.
    scalars: Vec<usize>,
    peak_entries: usize,
}

/// Optimum of one query.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NetworkSolution {
    pub weight: u32,
    /// Chosen group element on the boundary, one value per qubit.
    pub element: Vec<u8>,
    /// Its value on every bulk leg.
    pub bulk: Vec<u8>,
}

fn value_of(domain: Domain, x: bool, z: bool) -> Option<u8> {
    match domain {
        Domain::XType if !z => Some(u8::from(x)),
        Domain::ZType if !x => Some(u8::from(z)),
        Domain::Pauli => Some(u8::from(x) | u8::from(z) << 1),
        _ => None,
    }
}

fn cost_of(cost: Cost, v: u8) -> u32 {
    match cost {
        Cost::Bits => v.count_ones(),
        Cost::Support => u32::from(v != 0),
    }
}

impl TensorNetwork {
    pub fn new(construction: &Construction, domain: Domain) -> Result<Self> {
        let graph = &construction.graph;
        let seeds = &construction.seeds;
        let mut roles: Vec<Vec<Option<Role>>> = graph
            .tiles
            .iter()
            .map(|t| vec![None; t.sides + usize::from(t.kind == TileKind::Logical)])
            .collect();
        for (var, (a, b)) in graph.edges.iter().enumerate() {
            roles[a.tile][a.slot] = Some(Role::Edge(var));
            roles[b.tile][b.slot] = Some(Role::Edge(var));
        }
        for (q, leg) in graph.boundary_legs.iter().enumerate() {
            roles[leg.tile][leg.slot] = Some(Role::Boundary(q));
        }
        for (j, leg) in graph.bulk_legs.iter().enumerate() {
            roles[leg.tile][leg.slot] = Some(Role::Bulk(j));
        }

        let mut tiles = Vec::with_capacity(graph.tiles.len());
        for (tile, tile_roles) in graph.tiles.iter().zip(roles) {
            let seed = seeds.for_kind(tile.kind);
            let columns: Vec<usize> = (0..tile_roles.len())
                .map(|s| seeds.column(tile.kind, s))
                .collect();
            let roles = tile_roles
                .into_iter()
                .enumerate()
                .map(|(s, r)| {
                    r.ok_or_else(|| {
                        Error::Invariant(format!("slot {s} of tile {} has no role", tile.id))
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            let gens = &seed.generators;
            let mut elements = Vec::new();
            for mask in 0u32..1 << gens.len() {
                let mut x = vec![false; seed.legs()];
                let mut z = vec![false; seed.legs()];
                for (i, g) in gens.iter().enumerate() {
                    if mask >> i & 1 == 1 {
                        for c in 0..seed.legs() {
                            x[c] ^= g.x().get(c);
                            z[c] ^= g.z().get(c);
                        }
                    }
                }
                let values: Option<Vec<u8>> = columns
                    .iter()
                    .map(|&c| value_of(domain, x[c], z[c]))
                    .collect();
                if let Some(values) = values {
                    elements.push(values);
                }
            }
            let mut scope: Vec<(usize, usize)> = roles
                .iter()
                .enumerate()
                .filter_map(|(s, r)| match r {
                    Role::Edge(v) => Some((*v, s)),
                    _ => None,
                })
                .collect();
            scope.sort_unstable();
            tiles.push(TileFactor {
                elements,
                roles,
                scope: scope.iter().map(|p| p.0).collect(),
                scope_slots: scope.iter().map(|p| p.1).collect(),
            });
        }

        let mut net = TensorNetwork {
            domain,
            n: graph.boundary_legs.len(),
            k: graph.bulk_legs.len(),
            tiles,
            steps: Vec::new(),
            scalars: Vec::new(),
            peak_entries: 0,
        };
        net.plan(graph.edges.len());
        Ok(net)
    }

    /// Greedy elimination order: always remove the variable whose combined
    /// table is smallest.
    fn plan(&mut self, vars: usize) {
        let mut scopes: Vec<Option<Vec<usize>>> =
            self.tiles.iter().map(|t| Some(t.scope.clone())).collect();
        let mut holders: Vec<Vec<usize>> = vec![Vec::new(); vars];
        for (f, t) in self.tiles.iter().enumerate() {
            for &v in &t.scope {
                holders[v].push(f);
            }
        }
        let mut alive = vec![true; vars];
        let mut peak = self
            .tiles
            .iter()
            .map(|t| 1usize << (self.domain.bits() * t.scope.len()))
            .max()
            .unwrap_or(1);
        for _ in 0..vars {
            let mut best: Option<(usize, usize, Vec<usize>)> = None;
            for v in (0..vars).filter(|&v| alive[v]) {
                let mut union: Vec<usize> = holders[v]
                    .iter()
                    .flat_map(|&f| scopes[f].as_ref().unwrap().iter().copied())
                    .filter(|&u| u != v)
                    .collect();
                union.sort_unstable();
                union.dedup();
                if best.as_ref().is_none_or(|b| union.len() < b.1) {
                    best = Some((v, union.len(), union));
                }
            }
            let (v, _, union) = best.expect("a live variable remains");
            alive[v] = false;
            let inputs = std::mem::take(&mut holders[v]);
            let id = scopes.len();
            for &f in &inputs {
                for &u in scopes[f].as_ref().unwrap() {
                    if u != v {
                        holders[u].retain(|&g| g != f);
                    }
                }
                scopes[f] = None;
            }
            for &u in &union {
                holders[u].push(id);
            }
            peak = peak.max(1usize << (self.domain.bits() * (union.len() + 1)));
            scopes.push(Some(union.clone()));
            self.steps.push(Step {
                var: v,
                inputs,
                scope: union,
            });
        }
        self.scalars = (0..scopes.len()).filter(|&f| scopes[f].is_some()).collect();
        self.peak_entries = peak;
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Largest table the elimination will allocate.
    pub fn peak_entries(&self) -> usize {
        self.peak_entries
    }

    fn tile_cost(&self, t: &TileFactor, e: &[u8], target: &[u8], bulk: &[Bulk], cost: Cost) -> u32 {
        let mut total = 0;
        for (s, role) in t.roles.iter().enumerate() {
            match *role {
                Role::Boundary(q) => total += cost_of(cost, e[s] ^ target[q]),
                Role::Bulk(j) => {
                    if let Bulk::Fixed(v) = bulk[j] {
                        if e[s] != v {
                            return INF;
                        }
                    }
                }
                Role::Edge(_) => {}
            }
        }
        total
    }

    fn tile_index(&self, t: &TileFactor, e: &[u8]) -> usize {
        let b = self.domain.bits();
        t.scope_slots
            .iter()
            .enumerate()
            .map(|(i, &s)| (e[s] as usize) << (b * i))
            .sum()
    }

    /// Minimizes `weight(target + element)` over group elements whose bulk
    /// values satisfy `bulk`. Fails when the peak table exceeds `max_entries`
    /// or no element satisfies the constraints.
    pub fn solve(
        &self,
        target: &[u8],
        bulk: &[Bulk],
        cost: Cost,
        max_entries: usize,
    ) -> Result<NetworkSolution> {
        if target.len() != self.n || bulk.len() != self.k {
            return Err(Error::Dimension(format!(
                "network has {} boundary and {} bulk legs, got {} and {}",
                self.n,
                self.k,
                target.len(),
                bulk.len()
            )));
        }
        if self.peak_entries > max_entries {
            return Err(Error::SolverLimit(format!(
                "contraction needs tables of {} entries (limit {max_entries})",
                self.peak_entries
            )));
        }
        let b = self.domain.bits();
        let d = self.domain.values();
        let mut tables: Vec<Vec<u32>> = Vec::with_capacity(self.tiles.len() + self.steps.len());
        for t in &self.tiles {
            let mut table = vec![INF; 1 << (b * t.scope.len())];
            for e in &t.elements {
                let c = self.tile_cost(t, e, target, bulk, cost);
                let idx = self.tile_index(t, e);
                table[idx] = table[idx].min(c);
            }
            tables.push(table);
        }
        let mut scopes: Vec<Vec<usize>> = self.tiles.iter().map(|t| t.scope.clone()).collect();
        let mut argmins: Vec<Vec<u8>> = Vec::with_capacity(self.steps.len());

        for step in &self.steps {
            let out_len = 1usize << (b * step.scope.len());
            let mut out = vec![INF; out_len];
            let mut arg = vec![0u8; out_len];
            // Strides of each input table along the eliminated variable and
            // along each output variable.
            let strides: Vec<(usize, Vec<usize>)> = step
                .inputs
                .iter()
                .map(|&f| {
                    let pos = |u: usize| scopes[f].iter().position(|&w| w == u);
                    let sv = pos(step.var).map_or(0, |p| 1 << (b * p));
                    let so = step
                        .scope
                        .iter()
                        .map(|&u| pos(u).map_or(0, |p| 1 << (b * p)))
                        .collect();
                    (sv, so)
                })
                .collect();
            let mut digits = vec![0usize; step.scope.len()];
            let mut bases = vec![0usize; step.inputs.len()];
            for (o, (out_cell, arg_cell)) in out.iter_mut().zip(arg.iter_mut()).enumerate() {
                if o > 0 {
                    let mut i = 0;
                    loop {
                        digits[i] += 1;
                        if digits[i] < d {
                            for (base, (_, so)) in bases.iter_mut().zip(&strides) {
                                *base += so[i];
                            }
                            break;
                        }
                        digits[i] = 0;
                        for (base, (_, so)) in bases.iter_mut().zip(&strides) {
                            *base -= (d - 1) * so[i];
                        }
                        i += 1;
                    }
                }
                for value in 0..d {
                    let mut total = 0u32;
                    for ((&f, base), (sv, _)) in step.inputs.iter().zip(&bases).zip(&strides) {
                        total = total.saturating_add(tables[f][base + value * sv]);
                    }
                    if total < *out_cell {
                        *out_cell = total;
                        *arg_cell = value as u8;
                    }
                }
            }
            for &f in &step.inputs {
                tables[f] = Vec::new();
            }
            tables.push(out);
            scopes.push(step.scope.clone());
            argmins.push(arg);
        }

        let weight = self
            .scalars
            .iter()
            .fold(0u32, |acc, &f| acc.saturating_add(tables[f][0]));
        if weight >= INF {
            return Err(Error::Inconsistent);
        }

        let mut assignment = vec![0u8; self.steps.len()];
        for (step, arg) in self.steps.iter().zip(&argmins).rev() {
            let idx: usize = step
                .scope
                .iter()
                .enumerate()
                .map(|(i, &u)| (assignment[u] as usize) << (b * i))
                .sum();
            assignment[step.var] = arg[idx];
        }

        let mut element = vec![0u8; self.n];
        let mut bulk_values = vec![0u8; self.k];
        let mut check = 0u32;
        for t in &self.tiles {
            let best = t
                .elements
                .iter()
                .filter(|e| {
                    t.scope
                        .iter()
                        .zip(&t.scope_slots)
                        .all(|(&v, &s)| e[s] == assignment[v])
                })
                .map(|e| (self.tile_cost(t, e, target, bulk, cost), e))
                .min_by_key(|(c, _)| *c)
                .ok_or_else(|| Error::Invariant("backtracking found no tile element".into()))?;
            check += best.0;
            for (s, role) in t.roles.iter().enumerate() {
                match *role {
                    Role::Boundary(q) => element[q] = best.1[s],
                    Role::Bulk(j) => bulk_values[j] = best.1[s],
                    Role::Edge(_) => {}
                }
            }
        }
        if check != weight {
            return Err(Error::Invariant(format!(
                "backtracked weight {check} differs from optimum {weight}"
            )));
        }
        Ok(NetworkSolution {
            weight,
            element,
            bulk: bulk_values,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builder::build_code;
    use crate::seed;
    use crate::tiling::{Family, RateVariant};

    fn network(family: Family, radius: usize, variant: RateVariant, domain: Domain) -> TensorNetwork {
        let code = build_code(family, radius, variant, &crate::builder::default_seed(family, variant))
            .unwrap();
        TensorNetwork::new(code.construction.as_ref().unwrap(), domain).unwrap()
    }

    #[test]
    fn steane_single_tile_distance() {
        let net = network(Family::Heptagon, 1, RateVariant::Max, Domain::ZType);
        let sol = net
            .solve(&[0; 7], &[Bulk::Fixed(1)], Cost::Bits, 1 << 20)
            .unwrap();
        assert_eq!(sol.weight, 3);
        assert_eq!(sol.bulk, vec![1]);
        assert_eq!(sol.element.iter().filter(|&&v| v == 1).count(), 3);
    }

    #[test]
    fn zero_target_free_bulk_is_zero() {
        let net = network(Family::Heptagon, 2, RateVariant::Max, Domain::XType);
        let sol = net
            .solve(&vec![0; 42], &vec![Bulk::Free; 8], Cost::Bits, 1 << 20)
            .unwrap();
        assert_eq!(sol.weight, 0);
        assert!(sol.element.iter().all(|&v| v == 0));
    }

    #[test]
    fn five_qubit_pauli_distance() {
        let net = network(Family::Pentagon, 1, RateVariant::Zero, Domain::Pauli);
        for logical in 1..4u8 {
            let sol = net
                .solve(&[0; 5], &[Bulk::Fixed(logical)], Cost::Support, 1 << 20)
                .unwrap();
            assert_eq!(sol.weight, 3);
        }
    }

    #[test]
    fn element_is_in_code_group() {
        let code = build_code(Family::Heptagon, 2, RateVariant::Max, &seed::steane_tensor()).unwrap();
        let net = TensorNetwork::new(code.construction.as_ref().unwrap(), Domain::ZType).unwrap();
        let sol = net
            .solve(&vec![0; 42], &[vec![Bulk::Fixed(1)], vec![Bulk::Fixed(0); 7]].concat(), Cost::Bits, 1 << 20)
            .unwrap();
        assert_eq!(sol.weight, 9);
        let mut v = crate::pauli::PauliVector::identity(42);
        for (q, &e) in sol.element.iter().enumerate() {
            v.z_mut().set(q, e == 1);
        }
        for s in &code.stabilizers {
            assert!(!v.anticommutes(s));
        }
        assert!(v.anticommutes(&code.logicals[0].x_rep));
        for l in &code.logicals[1..] {
            assert!(!v.anticommutes(&l.x_rep));
        }
    }

    #[test]
    fn table_limit_is_enforced() {
        let net = network(Family::Heptagon, 2, RateVariant::Max, Domain::ZType);
        assert!(matches!(
            net.solve(&vec![0; 42], &vec![Bulk::Free; 8], Cost::Bits, 1),
            Err(Error::SolverLimit(_))
        ));
    }
}
