//! Polarities, their Galois connection, and concept lattices.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::bitset::BitSet;
use crate::error::{Error, Result};

/// Largest smaller-carrier size whose subsets are enumerated.
pub const CARRIER_CAP: usize = 22;
/// Largest number of concepts kept in memory.
pub const CONCEPT_CAP: usize = 1 << 20;
/// Largest lattice for which dense meet/join tables are built.
pub const TABLE_CAP: usize = 2048;

/// A formal context `(A, X, I)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polarity {
    objects: Vec<String>,
    attributes: Vec<String>,
    /// `rows[a]` is the set of attributes incident to `a`.
    rows: Vec<BitSet>,
    /// `cols[x]` is the set of objects incident to `x`.
    cols: Vec<BitSet>,
}

fn check_unique<'a>(names: &'a [String], kind: &'static str) -> Result<HashMap<&'a str, usize>> {
    let mut seen = HashMap::with_capacity(names.len());
    for (i, n) in names.iter().enumerate() {
        if seen.insert(n.as_str(), i).is_some() {
            return Err(Error::DuplicateIdentifier {
                kind,
                name: n.clone(),
            });
        }
    }
    Ok(seen)
}

impl Polarity {
    pub fn new<S, T, I>(objects: Vec<String>, attributes: Vec<String>, incidence: I) -> Result<Self>
    where
        S: AsRef<str>,
        T: AsRef<str>,
        I: IntoIterator<Item = (S, T)>,
    {
        let oi = check_unique(&objects, "object")?;
        let ai = check_unique(&attributes, "attribute")?;
        let mut rows = vec![BitSet::empty(attributes.len()); objects.len()];
        for (a, x) in incidence {
            let (a, x) = (a.as_ref(), x.as_ref());
            let &ia = oi.get(a).ok_or_else(|| Error::UnknownIdentifier {
                kind: "object",
                name: a.to_string(),
            })?;
            let &ix = ai.get(x).ok_or_else(|| Error::UnknownIdentifier {
                kind: "attribute",
                name: x.to_string(),
            })?;
            rows[ia].insert(ix);
        }
        Ok(Self::assemble(objects, attributes, rows))
    }

    pub fn from_rows(objects: Vec<String>, attributes: Vec<String>, rows: Vec<BitSet>) -> Result<Self> {
        check_unique(&objects, "object")?;
        check_unique(&attributes, "attribute")?;
        if rows.len() != objects.len() || rows.iter().any(|r| r.universe() != attributes.len()) {
            return Err(Error::Invalid("incidence rows do not match carriers".into()));
        }
        Ok(Self::assemble(objects, attributes, rows))
    }

    /// Index-built polarity with generated names `a0..` and `x0..`.
    pub fn from_fn(na: usize, nx: usize, mut inc: impl FnMut(usize, usize) -> bool) -> Self {
        let objects = (0..na).map(|i| format!("a{i}")).collect();
        let attributes = (0..nx).map(|i| format!("x{i}")).collect();
        let rows = (0..na)
            .map(|a| BitSet::from_indices(nx, (0..nx).filter(|&x| inc(a, x))))
            .collect();
        Self::assemble(objects, attributes, rows)
    }

    fn assemble(objects: Vec<String>, attributes: Vec<String>, rows: Vec<BitSet>) -> Self {
        let mut cols = vec![BitSet::empty(objects.len()); attributes.len()];
        for (a, r) in rows.iter().enumerate() {
            for x in r.iter() {
                cols[x].insert(a);
            }
        }
        Self {
            objects,
            attributes,
            rows,
            cols,
        }
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn attributes(&self) -> &[String] {
        &self.attributes
    }

    pub fn num_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn num_attributes(&self) -> usize {
        self.attributes.len()
    }

    pub fn incident(&self, a: usize, x: usize) -> bool {
        self.rows[a].contains(x)
    }

    /// `a↑` for a single object.
    pub fn row(&self, a: usize) -> &BitSet {
        &self.rows[a]
    }

    /// `x↓` for a single attribute.
    pub fn col(&self, x: usize) -> &BitSet {
        &self.cols[x]
    }

    pub fn incidence_pairs(&self) -> Vec<(usize, usize)> {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(a, r)| r.iter().map(move |x| (a, x)))
            .collect()
    }

    pub fn object_index(&self, name: &str) -> Result<usize> {
        self.objects
            .iter()
            .position(|o| o == name)
            .ok_or_else(|| Error::UnknownIdentifier {
                kind: "object",
                name: name.to_string(),
            })
    }

    pub fn attribute_index(&self, name: &str) -> Result<usize> {
        self.attributes
            .iter()
            .position(|o| o == name)
            .ok_or_else(|| Error::UnknownIdentifier {
                kind: "attribute",
                name: name.to_string(),
            })
    }

    pub fn object_set<S: AsRef<str>>(&self, names: &[S]) -> Result<BitSet> {
        let mut s = BitSet::empty(self.num_objects());
        for n in names {
            s.insert(self.object_index(n.as_ref())?);
        }
        Ok(s)
    }

    pub fn attribute_set<S: AsRef<str>>(&self, names: &[S]) -> Result<BitSet> {
        let mut s = BitSet::empty(self.num_attributes());
        for n in names {
            s.insert(self.attribute_index(n.as_ref())?);
        }
        Ok(s)
    }

    pub fn object_names(&self, s: &BitSet) -> Vec<String> {
        s.iter().map(|i| self.objects[i].clone()).collect()
    }

    pub fn attribute_names(&self, s: &BitSet) -> Vec<String> {
        s.iter().map(|i| self.attributes[i].clone()).collect()
    }

    /// `B↑`: attributes incident to every member of `b`.
    pub fn up(&self, b: &BitSet) -> BitSet {
        let mut out = BitSet::full(self.num_attributes());
        for a in b.iter() {
            out.intersect_with(&self.rows[a]);
        }
        out
    }

    /// `Y↓`: objects incident to every member of `y`.
    pub fn down(&self, y: &BitSet) -> BitSet {
        let mut out = BitSet::full(self.num_objects());
        for x in y.iter() {
            out.intersect_with(&self.cols[x]);
        }
        out
    }

    pub fn close_extent(&self, b: &BitSet) -> BitSet {
        self.down(&self.up(b))
    }

    pub fn close_intent(&self, y: &BitSet) -> BitSet {
        self.up(&self.down(y))
    }

    pub fn is_stable_extent(&self, b: &BitSet) -> bool {
        &self.close_extent(b) == b
    }

    pub fn is_stable_intent(&self, y: &BitSet) -> bool {
        &self.close_intent(y) == y
    }

    /// Swaps the roles of objects and attributes.
    pub fn dual(&self) -> Polarity {
        Polarity {
            objects: self.attributes.clone(),
            attributes: self.objects.clone(),
            rows: self.cols.clone(),
            cols: self.rows.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Concept {
    pub extent: BitSet,
    pub intent: BitSet,
}

/// The concept lattice `P⁺` with concepts in canonical order.
#[derive(Clone, Debug)]
pub struct ConceptLattice {
    polarity: Polarity,
    concepts: Vec<Concept>,
    by_extent: HashMap<BitSet, usize>,
    top: usize,
    bottom: usize,
    object_map: Vec<usize>,
    attribute_map: Vec<usize>,
}

impl ConceptLattice {
    pub fn new(p: &Polarity) -> Result<Self> {
        let (na, nx) = (p.num_objects(), p.num_attributes());
        let k = na.min(nx);
        if k > CARRIER_CAP {
            return Err(Error::limit("smaller carrier size", CARRIER_CAP as u128, k as u128));
        }
        let via_objects = na <= nx;
        let mut extents: HashMap<BitSet, ()> = HashMap::new();
        for mask in 0u64..(1u64 << k) {
            let sub = BitSet::from_mask(k, mask);
            let ext = if via_objects {
                p.close_extent(&sub)
            } else {
                p.down(&sub)
            };
            extents.insert(ext, ());
            if extents.len() > CONCEPT_CAP {
                return Err(Error::limit("concept count", CONCEPT_CAP as u128, extents.len() as u128));
            }
        }
        let mut extents: Vec<BitSet> = extents.into_keys().collect();
        extents.sort_by(|a, b| a.canonical_cmp(b));
        let concepts: Vec<Concept> = extents
            .into_iter()
            .map(|e| Concept {
                intent: p.up(&e),
                extent: e,
            })
            .collect();
        let by_extent: HashMap<BitSet, usize> = concepts
            .iter()
            .enumerate()
            .map(|(i, c)| (c.extent.clone(), i))
            .collect();
        let top = by_extent[&BitSet::full(na)];
        let bottom = by_extent[&p.down(&BitSet::full(nx))];
        let object_map = (0..na).map(|a| by_extent[&p.down(p.row(a))]).collect();
        let attribute_map = (0..nx).map(|x| by_extent[p.col(x)]).collect();
        Ok(Self {
            polarity: p.clone(),
            concepts,
            by_extent,
            top,
            bottom,
            object_map,
            attribute_map,
        })
    }

    pub fn polarity(&self) -> &Polarity {
        &self.polarity
    }

    pub fn len(&self) -> usize {
        self.concepts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.concepts.is_empty()
    }

    pub fn concepts(&self) -> &[Concept] {
        &self.concepts
    }

    pub fn concept(&self, i: usize) -> &Concept {
        &self.concepts[i]
    }

    pub fn extent(&self, i: usize) -> &BitSet {
        &self.concepts[i].extent
    }

    pub fn intent(&self, i: usize) -> &BitSet {
        &self.concepts[i].intent
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    /// Index of `𝐚 = (a↑↓, a↑)`.
    pub fn object_concept(&self, a: usize) -> usize {
        self.object_map[a]
    }

    /// Index of `𝐱 = (x↓, x↓↑)`.
    pub fn attribute_concept(&self, x: usize) -> usize {
        self.attribute_map[x]
    }

    pub fn object_map(&self) -> &[usize] {
        &self.object_map
    }

    pub fn attribute_map(&self) -> &[usize] {
        &self.attribute_map
    }

    /// Index of the concept with this extent, if it is stable.
    pub fn index_of_extent(&self, b: &BitSet) -> Option<usize> {
        self.by_extent.get(b).copied()
    }

    /// Index of the concept with this intent, if it is stable.
    pub fn index_of_intent(&self, y: &BitSet) -> Option<usize> {
        let i = self.by_extent.get(&self.polarity.down(y)).copied()?;
        (self.intent(i) == y).then_some(i)
    }

    /// The concept generated by an arbitrary set of objects.
    pub fn closure_of_objects(&self, b: &BitSet) -> usize {
        self.by_extent[&self.polarity.close_extent(b)]
    }

    /// The concept generated by an arbitrary set of attributes.
    pub fn closure_of_attributes(&self, y: &BitSet) -> usize {
        self.by_extent[&self.polarity.down(y)]
    }

    fn check(&self, i: usize) -> Result<usize> {
        if i < self.len() {
            Ok(i)
        } else {
            Err(Error::InvalidIndex(i))
        }
    }

    pub fn meet(&self, s: &[usize]) -> Result<usize> {
        let mut ext = BitSet::full(self.polarity.num_objects());
        for &c in s {
            ext.intersect_with(self.extent(self.check(c)?));
        }
        Ok(self.by_extent[&ext])
    }

    pub fn join(&self, s: &[usize]) -> Result<usize> {
        let mut int = BitSet::full(self.polarity.num_attributes());
        for &c in s {
            int.intersect_with(self.intent(self.check(c)?));
        }
        Ok(self.by_extent[&self.polarity.down(&int)])
    }

    pub fn meet2(&self, c: usize, d: usize) -> usize {
        self.by_extent[&self.extent(c).intersection(self.extent(d))]
    }

    pub fn join2(&self, c: usize, d: usize) -> usize {
        self.by_extent[&self.polarity.down(&self.intent(c).intersection(self.intent(d)))]
    }

    pub fn leq(&self, c: usize, d: usize) -> Result<bool> {
        Ok(self.extent(self.check(c)?).is_subset(self.extent(self.check(d)?)))
    }

    pub(crate) fn leq_unchecked(&self, c: usize, d: usize) -> bool {
        self.extent(c).is_subset(self.extent(d))
    }

    /// Dense binary meet/join tables.
    pub fn tables(&self) -> Result<Tables> {
        let n = self.len();
        if n > TABLE_CAP {
            return Err(Error::limit("lattice size for tables", TABLE_CAP as u128, n as u128));
        }
        let mut meet = vec![0u32; n * n];
        let mut join = vec![0u32; n * n];
        for c in 0..n {
            for d in c..n {
                let m = self.meet2(c, d) as u32;
                let j = self.join2(c, d) as u32;
                meet[c * n + d] = m;
                meet[d * n + c] = m;
                join[c * n + d] = j;
                join[d * n + c] = j;
            }
        }
        let mut leq = vec![BitSet::empty(n); n];
        for (c, row) in leq.iter_mut().enumerate() {
            for d in 0..n {
                if self.leq_unchecked(c, d) {
                    row.insert(d);
                }
            }
        }
        Ok(Tables { n, meet, join, leq })
    }

    pub fn is_distributive(&self) -> bool {
        let n = self.len();
        match self.tables() {
            Ok(t) => (0..n).all(|c| {
                (0..n).all(|d| {
                    (d..n).all(|e| t.meet(c, t.join(d, e)) == t.join(t.meet(c, d), t.meet(c, e)))
                })
            }),
            Err(_) => (0..n).all(|c| {
                (0..n).all(|d| {
                    (d..n).all(|e| {
                        self.meet2(c, self.join2(d, e)) == self.join2(self.meet2(c, d), self.meet2(c, e))
                    })
                })
            }),
        }
    }

    /// Covering pairs `(lower, upper)`, sorted.
    pub fn hasse_edges(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut edges = Vec::new();
        for c in 0..n {
            let above: Vec<usize> = (0..n)
                .filter(|&d| d != c && self.leq_unchecked(c, d))
                .collect();
            for &d in &above {
                if !above.iter().any(|&e| e != d && self.leq_unchecked(e, d)) {
                    edges.push((c, d));
                }
            }
        }
        edges
    }

    fn names(names: &[String], s: &BitSet) -> String {
        if s.is_empty() {
            "∅".to_string()
        } else {
            s.iter().map(|i| names[i].as_str()).collect::<Vec<_>>().join(",")
        }
    }

    /// `extent|intent` with comma-separated member names.
    pub fn label(&self, c: usize) -> String {
        format!(
            "{}|{}",
            Self::names(self.polarity.objects(), self.extent(c)),
            Self::names(self.polarity.attributes(), self.intent(c))
        )
    }

    /// `(extent, intent)` in the same notation as [`label`](Self::label).
    pub fn pair_label(&self, c: usize) -> String {
        format!(
            "({}, {})",
            Self::names(self.polarity.objects(), self.extent(c)),
            Self::names(self.polarity.attributes(), self.intent(c))
        )
    }

    /// Hasse diagram in Graphviz DOT, covers drawn bottom to top.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph lattice {\n  rankdir=BT;\n  node [shape=box];\n");
        for c in 0..self.len() {
            let label = self.label(c).replace('"', "\\\"");
            let _ = writeln!(s, "  c{c} [label=\"{label}\"];");
        }
        for (lo, hi) in self.hasse_edges() {
            let _ = writeln!(s, "  c{lo} -> c{hi};");
        }
        s.push_str("}\n");
        s
    }
}

/// Free function form of [`ConceptLattice::new`].
pub fn concept_lattice(p: &Polarity) -> Result<ConceptLattice> {
    ConceptLattice::new(p)
}

/// Precomputed meet, join and order for a concept lattice.
#[derive(Clone, Debug)]
pub struct Tables {
    n: usize,
    meet: Vec<u32>,
    join: Vec<u32>,
    leq: Vec<BitSet>,
}

impl Tables {
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn meet(&self, c: usize, d: usize) -> usize {
        self.meet[c * self.n + d] as usize
    }

    #[inline]
    pub fn join(&self, c: usize, d: usize) -> usize {
        self.join[c * self.n + d] as usize
    }

    #[inline]
    pub fn leq(&self, c: usize, d: usize) -> bool {
        self.leq[c].contains(d)
    }
}
