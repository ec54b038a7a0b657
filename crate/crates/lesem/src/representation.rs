//! Finite lattices, reflexive graphs, and the translations between them and polarities.

use std::collections::HashMap;

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::lattice::{ConceptLattice, Polarity};

/// Largest lattice whose filters and ideals are enumerated exhaustively.
pub const FILTER_CAP: usize = 14;

/// A finite lattice given by its order; meets and joins are tabulated at construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteLattice {
    elements: Vec<String>,
    /// `up[i] = {j | i ≤ j}`
    up: Vec<BitSet>,
    /// `down[i] = {j | j ≤ i}`
    down: Vec<BitSet>,
    meet: Vec<usize>,
    join: Vec<usize>,
    top: usize,
    bottom: usize,
}

impl FiniteLattice {
    /// Builds a lattice from the full order relation, which must be a lattice order.
    pub fn new<S, T, I>(elements: Vec<String>, order: I) -> Result<Self>
    where
        S: AsRef<str>,
        T: AsRef<str>,
        I: IntoIterator<Item = (S, T)>,
    {
        let index: HashMap<&str, usize> = elements.iter().enumerate().map(|(i, e)| (e.as_str(), i)).collect();
        if index.len() != elements.len() {
            return Err(Error::Invalid("duplicate lattice element".into()));
        }
        let n = elements.len();
        let mut rel = vec![BitSet::empty(n); n];
        for (a, b) in order {
            let lookup = |s: &str| {
                index.get(s).copied().ok_or_else(|| Error::UnknownIdentifier {
                    kind: "lattice element",
                    name: s.to_string(),
                })
            };
            let (i, j) = (lookup(a.as_ref())?, lookup(b.as_ref())?);
            rel[i].insert(j);
        }
        Self::from_up_sets(elements, rel)
    }

    /// Builds from a predicate on indices with names `0..n`.
    pub fn from_fn(n: usize, leq: impl Fn(usize, usize) -> bool) -> Result<Self> {
        let elements = (0..n).map(|i| i.to_string()).collect();
        let rel = (0..n)
            .map(|i| BitSet::from_indices(n, (0..n).filter(|&j| leq(i, j))))
            .collect();
        Self::from_up_sets(elements, rel)
    }

    /// Reflexive-transitive closure of a covering relation.
    pub fn from_covers(elements: Vec<String>, covers: &[(usize, usize)]) -> Result<Self> {
        let n = elements.len();
        let mut rel: Vec<BitSet> = (0..n).map(|i| BitSet::singleton(n, i)).collect();
        for &(a, b) in covers {
            if a >= n || b >= n {
                return Err(Error::InvalidIndex(a.max(b)));
            }
            rel[a].insert(b);
        }
        loop {
            let mut changed = false;
            for i in 0..n {
                let mut acc = rel[i].clone();
                for j in rel[i].iter() {
                    acc.union_with(&rel[j]);
                }
                if acc != rel[i] {
                    rel[i] = acc;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        Self::from_up_sets(elements, rel)
    }

    fn from_up_sets(elements: Vec<String>, up: Vec<BitSet>) -> Result<Self> {
        let n = elements.len();
        if n == 0 {
            return Err(Error::Invalid("a lattice needs at least one element".into()));
        }
        let mut down = vec![BitSet::empty(n); n];
        for i in 0..n {
            if !up[i].contains(i) {
                return Err(Error::Invalid(format!("order is not reflexive at `{}`", elements[i])));
            }
            for j in up[i].iter() {
                down[j].insert(i);
                if i != j && up[j].contains(i) {
                    return Err(Error::Invalid(format!(
                        "order is not antisymmetric: `{}` and `{}`",
                        elements[i], elements[j]
                    )));
                }
                if !up[j].is_subset(&up[i]) {
                    return Err(Error::Invalid("order is not transitive".into()));
                }
            }
        }
        let bound = |sets: &Vec<BitSet>, other: &Vec<BitSet>, i: usize, j: usize| -> Option<usize> {
            // greatest element (w.r.t. `other`) of sets[i] ∩ sets[j]
            let common = sets[i].intersection(&sets[j]);
            common.iter().find(|&g| common.is_subset(&other[g]))
        };
        let mut meet = vec![0; n * n];
        let mut join = vec![0; n * n];
        for i in 0..n {
            for j in 0..n {
                meet[i * n + j] = bound(&down, &down, i, j).ok_or_else(|| {
                    Error::Invalid(format!("`{}` and `{}` have no meet", elements[i], elements[j]))
                })?;
                join[i * n + j] = bound(&up, &up, i, j).ok_or_else(|| {
                    Error::Invalid(format!("`{}` and `{}` have no join", elements[i], elements[j]))
                })?;
            }
        }
        let top = (0..n).find(|&i| down[i].is_full()).expect("finite lattice has a top");
        let bottom = (0..n).find(|&i| up[i].is_full()).expect("finite lattice has a bottom");
        Ok(Self {
            elements,
            up,
            down,
            meet,
            join,
            top,
            bottom,
        })
    }

    pub fn chain(n: usize) -> Self {
        Self::from_fn(n, |i, j| i <= j).expect("chains are lattices")
    }

    /// Powerset of a `k`-element set, elements indexed by bitmask.
    pub fn boolean(k: usize) -> Self {
        let n = 1usize << k;
        let elements = (0..n).map(|m| format!("{m:0k$b}", k = k.max(1))).collect();
        let up = (0..n)
            .map(|i| BitSet::from_indices(n, (0..n).filter(|&j| i & !j == 0)))
            .collect();
        Self::from_up_sets(elements, up).expect("powersets are lattices")
    }

    /// The pentagon `0 < a < c < 1`, `0 < b < 1`.
    pub fn n5() -> Self {
        let el = ["0", "a", "b", "c", "1"].map(String::from).to_vec();
        Self::from_covers(el, &[(0, 1), (1, 3), (3, 4), (0, 2), (2, 4)]).expect("N5")
    }

    /// The diamond with three atoms.
    pub fn m3() -> Self {
        let el = ["0", "a", "b", "c", "1"].map(String::from).to_vec();
        Self::from_covers(el, &[(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)]).expect("M3")
    }

    pub fn from_concept_lattice(l: &ConceptLattice) -> Self {
        let elements = (0..l.len()).map(|c| l.label(c)).collect();
        let up = (0..l.len())
            .map(|c| BitSet::from_indices(l.len(), (0..l.len()).filter(|&d| l.leq_unchecked(c, d))))
            .collect();
        Self::from_up_sets(elements, up).expect("concept lattices are lattices")
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.elements
            .iter()
            .position(|e| e == name)
            .ok_or_else(|| Error::UnknownIdentifier {
                kind: "lattice element",
                name: name.to_string(),
            })
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.up[i].contains(j)
    }

    pub fn up_set(&self, i: usize) -> &BitSet {
        &self.up[i]
    }

    pub fn down_set(&self, i: usize) -> &BitSet {
        &self.down[i]
    }

    pub fn meet(&self, i: usize, j: usize) -> usize {
        self.meet[i * self.len() + j]
    }

    pub fn join(&self, i: usize, j: usize) -> usize {
        self.join[i * self.len() + j]
    }

    pub fn meet_all(&self, it: impl IntoIterator<Item = usize>) -> usize {
        it.into_iter().fold(self.top, |a, b| self.meet(a, b))
    }

    pub fn join_all(&self, it: impl IntoIterator<Item = usize>) -> usize {
        it.into_iter().fold(self.bottom, |a, b| self.join(a, b))
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn is_distributive(&self) -> bool {
        let n = self.len();
        (0..n).all(|a| {
            (0..n).all(|b| {
                (b..n).all(|c| self.meet(a, self.join(b, c)) == self.join(self.meet(a, b), self.meet(a, c)))
            })
        })
    }
}

/// `(L, L, ≤)`.
pub fn birkhoff_polarity(l: &FiniteLattice) -> Polarity {
    Polarity::from_rows(l.elements.clone(), l.elements.clone(), l.up.clone())
        .expect("lattice element names are unique")
}

/// For each element `a`, the index of the concept `(↓a, ↑a)` in the given lattice,
/// or `None` if some such pair is not a concept of it.
pub fn birkhoff_map(l: &FiniteLattice, cl: &ConceptLattice) -> Option<Vec<usize>> {
    (0..l.len())
        .map(|a| {
            let c = cl.index_of_extent(l.down_set(a))?;
            (cl.intent(c) == l.up_set(a)).then_some(c)
        })
        .collect()
}

/// Verifies that `a ↦ (↓a, ↑a)` is an order isomorphism onto the concept lattice
/// of the Birkhoff polarity.
pub fn birkhoff_iso_check(l: &FiniteLattice) -> Result<bool> {
    let cl = ConceptLattice::new(&birkhoff_polarity(l))?;
    let Some(map) = birkhoff_map(l, &cl) else {
        return Ok(false);
    };
    if cl.len() != l.len() {
        return Ok(false);
    }
    let mut hit = BitSet::empty(cl.len());
    for &c in &map {
        if !hit.insert(c) {
            return Ok(false);
        }
    }
    for a in 0..l.len() {
        for b in 0..l.len() {
            if l.leq(a, b) != cl.leq_unchecked(map[a], map[b]) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// A finite graph whose edge relation contains the diagonal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReflexiveGraph {
    nodes: Vec<String>,
    out: Vec<BitSet>,
    inn: Vec<BitSet>,
}

impl ReflexiveGraph {
    /// Rejects edge sets that miss a self-loop.
    pub fn new<S, T, I>(nodes: Vec<String>, edges: I) -> Result<Self>
    where
        S: AsRef<str>,
        T: AsRef<str>,
        I: IntoIterator<Item = (S, T)>,
    {
        let (g, added) = Self::with_self_loops(nodes, edges)?;
        if let Some(z) = added.first() {
            return Err(Error::Invalid(format!("edge relation is not reflexive at `{z}`")));
        }
        Ok(g)
    }

    /// Adds any missing self-loops and reports the nodes that needed one.
    pub fn with_self_loops<S, T, I>(nodes: Vec<String>, edges: I) -> Result<(Self, Vec<String>)>
    where
        S: AsRef<str>,
        T: AsRef<str>,
        I: IntoIterator<Item = (S, T)>,
    {
        let index: HashMap<&str, usize> = nodes.iter().enumerate().map(|(i, e)| (e.as_str(), i)).collect();
        if index.len() != nodes.len() {
            return Err(Error::Invalid("duplicate node".into()));
        }
        let n = nodes.len();
        let mut out = vec![BitSet::empty(n); n];
        for (a, b) in edges {
            let lookup = |s: &str| {
                index.get(s).copied().ok_or_else(|| Error::UnknownIdentifier {
                    kind: "node",
                    name: s.to_string(),
                })
            };
            out[lookup(a.as_ref())?].insert(lookup(b.as_ref())?);
        }
        let added = (0..n).filter(|&z| out[z].insert(z)).map(|z| nodes[z].clone()).collect();
        Ok((Self::assemble(nodes, out), added))
    }

    /// Index-built graph with names `z0..`; self-loops are always added.
    pub fn from_fn(n: usize, edge: impl Fn(usize, usize) -> bool) -> Self {
        let nodes = (0..n).map(|i| format!("z{i}")).collect();
        let out = (0..n)
            .map(|i| BitSet::from_indices(n, (0..n).filter(|&j| i == j || edge(i, j))))
            .collect();
        Self::assemble(nodes, out)
    }

    pub fn with_names(mut self, nodes: Vec<String>) -> Result<Self> {
        if nodes.len() != self.nodes.len() {
            return Err(Error::Invalid("node name count mismatch".into()));
        }
        self.nodes = nodes;
        Ok(self)
    }

    fn assemble(nodes: Vec<String>, out: Vec<BitSet>) -> Self {
        let n = nodes.len();
        let mut inn = vec![BitSet::empty(n); n];
        for (i, o) in out.iter().enumerate() {
            for j in o.iter() {
                inn[j].insert(i);
            }
        }
        Self { nodes, out, inn }
    }

    pub fn discrete(n: usize) -> Self {
        Self::from_fn(n, |_, _| false)
    }

    pub fn nodes(&self) -> &[String] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node_index(&self, name: &str) -> Result<usize> {
        self.nodes
            .iter()
            .position(|e| e == name)
            .ok_or_else(|| Error::UnknownIdentifier {
                kind: "node",
                name: name.to_string(),
            })
    }

    pub fn edge(&self, a: usize, b: usize) -> bool {
        self.out[a].contains(b)
    }

    /// `{b | aEb}`
    pub fn successors(&self, a: usize) -> &BitSet {
        &self.out[a]
    }

    /// `{a | aEb}`
    pub fn predecessors(&self, b: usize) -> &BitSet {
        &self.inn[b]
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.len())
            .flat_map(|a| self.out[a].iter().map(move |b| (a, b)))
            .collect()
    }

    pub fn is_transitive(&self) -> bool {
        (0..self.len()).all(|a| self.out[a].iter().all(|b| self.out[b].is_subset(&self.out[a])))
    }

    pub fn is_antisymmetric(&self) -> bool {
        (0..self.len()).all(|a| self.out[a].iter().all(|b| a == b || !self.edge(b, a)))
    }

    pub fn is_discrete(&self) -> bool {
        self.out.iter().all(|o| o.count() == 1)
    }

    pub fn transitive_closure(&self) -> Self {
        let n = self.len();
        let mut out = self.out.clone();
        for k in 0..n {
            for i in 0..n {
                if out[i].contains(k) {
                    let row = out[k].clone();
                    out[i].union_with(&row);
                }
            }
        }
        Self::assemble(self.nodes.clone(), out)
    }
}

/// `(Z, Z, I_{E^c})` with `a I x` iff `(a, x) ∉ E`.
pub fn graph_polarity(g: &ReflexiveGraph) -> Polarity {
    let rows = g.out.iter().map(|o| o.complement()).collect();
    Polarity::from_rows(g.nodes.clone(), g.nodes.clone(), rows).expect("node names are unique")
}

/// The lattice `X⁺`.
pub fn graph_lattice(g: &ReflexiveGraph) -> Result<ConceptLattice> {
    ConceptLattice::new(&graph_polarity(g))
}

/// `(𝐳_s, 𝐳_r)` as indices into `graph_lattice(g)`.
pub fn node_concepts(x_plus: &ConceptLattice, z: usize) -> Result<(usize, usize)> {
    if z >= x_plus.polarity().num_objects() {
        return Err(Error::InvalidIndex(z));
    }
    Ok((x_plus.object_concept(z), x_plus.attribute_concept(z)))
}

/// A node of the graph of a lattice: a filter and an ideal that do not meet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FilterIdealState {
    pub filter: BitSet,
    pub ideal: BitSet,
    /// least element of the filter
    pub filter_base: usize,
    /// greatest element of the ideal
    pub ideal_base: usize,
}

#[derive(Clone, Debug)]
pub struct LatticeGraph {
    pub graph: ReflexiveGraph,
    pub states: Vec<FilterIdealState>,
}

fn check_filter_cap(l: &FiniteLattice) -> Result<()> {
    if l.len() > FILTER_CAP {
        return Err(Error::limit("lattice size for filter enumeration", FILTER_CAP as u128, l.len() as u128));
    }
    Ok(())
}

/// Nonempty proper up-closed meet-closed subsets, by exhaustive enumeration.
pub fn filters(l: &FiniteLattice) -> Result<Vec<BitSet>> {
    check_filter_cap(l)?;
    let n = l.len();
    let mut out = Vec::new();
    for mask in 1u64..(1u64 << n) {
        let s = BitSet::from_mask(n, mask);
        if s.is_full() {
            continue;
        }
        let up_closed = s.iter().all(|a| l.up_set(a).is_subset(&s));
        let meet_closed = s.iter().all(|a| s.iter().all(|b| s.contains(l.meet(a, b))));
        if up_closed && meet_closed {
            out.push(s);
        }
    }
    Ok(out)
}

/// Nonempty proper down-closed join-closed subsets, by exhaustive enumeration.
pub fn ideals(l: &FiniteLattice) -> Result<Vec<BitSet>> {
    check_filter_cap(l)?;
    let n = l.len();
    let mut out = Vec::new();
    for mask in 1u64..(1u64 << n) {
        let s = BitSet::from_mask(n, mask);
        if s.is_full() {
            continue;
        }
        let down_closed = s.iter().all(|a| l.down_set(a).is_subset(&s));
        let join_closed = s.iter().all(|a| s.iter().all(|b| s.contains(l.join(a, b))));
        if down_closed && join_closed {
            out.push(s);
        }
    }
    Ok(out)
}

/// The graph `X_L` of disjoint filter/ideal pairs with `z E z'` iff `F_z ∩ J_{z'} = ∅`.
pub fn lattice_graph(l: &FiniteLattice) -> Result<LatticeGraph> {
    let fs = filters(l)?;
    let is = ideals(l)?;
    let mut states = Vec::new();
    for f in &fs {
        for j in &is {
            if f.is_disjoint(j) {
                states.push(FilterIdealState {
                    filter: f.clone(),
                    ideal: j.clone(),
                    filter_base: l.meet_all(f.iter()),
                    ideal_base: l.join_all(j.iter()),
                });
            }
        }
    }
    let n = states.len();
    let names = states
        .iter()
        .map(|s| format!("{}|{}", l.elements[s.filter_base], l.elements[s.ideal_base]))
        .collect();
    let out = states
        .iter()
        .map(|s| BitSet::from_indices(n, (0..n).filter(|&t| s.filter.is_disjoint(&states[t].ideal))))
        .collect();
    Ok(LatticeGraph {
        graph: ReflexiveGraph::assemble(names, out),
        states,
    })
}

impl LatticeGraph {
    /// Index in `X⁺` of the concept `({z | a_z ≤ l}, {z | l ≤ b_z})` for each element `l`.
    pub fn embedding(&self, l: &FiniteLattice, x_plus: &ConceptLattice) -> Result<Vec<usize>> {
        let n = self.states.len();
        (0..l.len())
            .map(|e| {
                let ext = BitSet::from_indices(n, (0..n).filter(|&z| l.leq(self.states[z].filter_base, e)));
                x_plus
                    .index_of_extent(&ext)
                    .ok_or_else(|| Error::Invalid("lattice element has no stable image".into()))
            })
            .collect()
    }
}
