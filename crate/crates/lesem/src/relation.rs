//! Finite `(n+1)`-ary relations stored as output fibers, with the section operators
//! `S^{(0)}[C̄]` and `S^{(i)}[A', C̄^i]`.

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::lattice::Polarity;
use crate::syntax::{Connective, Family, Tone};

/// Which carrier of a polarity a relation coordinate ranges over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Objects,
    Attributes,
}

impl Side {
    pub fn size(self, p: &Polarity) -> usize {
        match self {
            Side::Objects => p.num_objects(),
            Side::Attributes => p.num_attributes(),
        }
    }

    pub fn is_stable(self, p: &Polarity, s: &BitSet) -> bool {
        match self {
            Side::Objects => p.is_stable_extent(s),
            Side::Attributes => p.is_stable_intent(s),
        }
    }

    pub fn close(self, p: &Polarity, s: &BitSet) -> BitSet {
        match self {
            Side::Objects => p.close_extent(s),
            Side::Attributes => p.close_intent(s),
        }
    }

    pub fn names(self, p: &Polarity) -> &[String] {
        match self {
            Side::Objects => p.objects(),
            Side::Attributes => p.attributes(),
        }
    }
}

/// Coordinate sides of `R_f ⊆ X × Ā` or `R_g ⊆ A × X̄`, output first.
pub fn sides(c: &Connective) -> Vec<Side> {
    let (out, mono, anti) = match c.family {
        Family::F => (Side::Attributes, Side::Objects, Side::Attributes),
        Family::G => (Side::Objects, Side::Attributes, Side::Objects),
    };
    std::iter::once(out)
        .chain(c.tones.iter().map(|t| match t {
            Tone::Monotone => mono,
            Tone::Antitone => anti,
        }))
        .collect()
}

/// Calls `f` on every tuple of `0..dims[0] × … × 0..dims[k-1]` in lexicographic order.
pub fn for_each_tuple(dims: &[usize], mut f: impl FnMut(&[usize])) {
    if dims.contains(&0) {
        return;
    }
    let mut t = vec![0; dims.len()];
    loop {
        f(&t);
        let mut i = dims.len();
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            t[i] += 1;
            if t[i] < dims[i] {
                break;
            }
            t[i] = 0;
        }
    }
}

/// Calls `f` on every tuple drawn coordinate-wise from the given sets.
pub fn for_each_in_product(sets: &[&BitSet], mut f: impl FnMut(&[usize])) {
    let members: Vec<Vec<usize>> = sets.iter().map(|s| s.to_vec()).collect();
    let dims: Vec<usize> = members.iter().map(|m| m.len()).collect();
    let mut t = vec![0; sets.len()];
    for_each_tuple(&dims, |ix| {
        for (k, &i) in ix.iter().enumerate() {
            t[k] = members[k][i];
        }
        f(&t);
    });
}

/// A relation `R ⊆ B₀ × B₁ × … × Bₙ`; coordinate 0 is the output coordinate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    dims: Vec<usize>,
    /// `fibers[idx(b̄)] = {b₀ | R(b₀, b̄)}`
    fibers: Vec<BitSet>,
}

impl Relation {
    pub fn empty(dims: &[usize]) -> Self {
        assert!(!dims.is_empty(), "a relation needs an output coordinate");
        let count = dims[1..].iter().product();
        Self {
            dims: dims.to_vec(),
            fibers: vec![BitSet::empty(dims[0]); count],
        }
    }

    pub fn full(dims: &[usize]) -> Self {
        let mut r = Self::empty(dims);
        for f in r.fibers.iter_mut() {
            *f = BitSet::full(dims[0]);
        }
        r
    }

    pub fn from_tuples<I: IntoIterator<Item = Vec<usize>>>(dims: &[usize], tuples: I) -> Result<Self> {
        let mut r = Self::empty(dims);
        for t in tuples {
            if t.len() != dims.len() || t.iter().zip(dims).any(|(&v, &d)| v >= d) {
                return Err(Error::Invalid(format!("tuple {t:?} does not fit dimensions {dims:?}")));
            }
            r.insert(&t);
        }
        Ok(r)
    }

    pub fn from_fn(dims: &[usize], mut f: impl FnMut(&[usize]) -> bool) -> Self {
        let mut r = Self::empty(dims);
        for_each_tuple(dims, |t| {
            if f(t) {
                r.insert(t);
            }
        });
        r
    }

    /// Binary relation from rows: `rows[a]` lists the `b` with `a R b`.
    pub fn from_rows(rows: &[BitSet], n_to: usize) -> Self {
        Self::from_fn(&[rows.len(), n_to], |t| rows[t[0]].contains(t[1]))
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn arity(&self) -> usize {
        self.dims.len() - 1
    }

    fn index(&self, args: &[usize]) -> usize {
        let mut idx = 0;
        for (k, &a) in args.iter().enumerate() {
            idx = idx * self.dims[k + 1] + a;
        }
        idx
    }

    /// `tuple` lists the output coordinate first.
    pub fn contains(&self, tuple: &[usize]) -> bool {
        self.fibers[self.index(&tuple[1..])].contains(tuple[0])
    }

    pub fn insert(&mut self, tuple: &[usize]) -> bool {
        let i = self.index(&tuple[1..]);
        self.fibers[i].insert(tuple[0])
    }

    pub fn remove(&mut self, tuple: &[usize]) -> bool {
        let i = self.index(&tuple[1..]);
        self.fibers[i].remove(tuple[0])
    }

    /// `{b₀ | R(b₀, args)}`
    pub fn fiber(&self, args: &[usize]) -> &BitSet {
        &self.fibers[self.index(args)]
    }

    pub fn count(&self) -> usize {
        self.fibers.iter().map(|f| f.count()).sum()
    }

    /// All tuples in lexicographic order, output coordinate first.
    pub fn tuples(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        for_each_tuple(&self.dims, |t| {
            if self.contains(t) {
                out.push(t.to_vec());
            }
        });
        out
    }

    pub fn complement(&self) -> Self {
        Self {
            dims: self.dims.clone(),
            fibers: self.fibers.iter().map(|f| f.complement()).collect(),
        }
    }

    pub fn intersection(&self, other: &Self) -> Self {
        assert_eq!(self.dims, other.dims);
        Self {
            dims: self.dims.clone(),
            fibers: self.fibers.iter().zip(&other.fibers).map(|(a, b)| a.intersection(b)).collect(),
        }
    }

    pub fn union(&self, other: &Self) -> Self {
        assert_eq!(self.dims, other.dims);
        Self {
            dims: self.dims.clone(),
            fibers: self.fibers.iter().zip(&other.fibers).map(|(a, b)| a.union(b)).collect(),
        }
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.dims == other.dims && self.fibers.iter().zip(&other.fibers).all(|(a, b)| a.is_subset(b))
    }

    /// Rows of a binary relation: `rows[a] = {b | a R b}`.
    pub fn rows(&self) -> Vec<BitSet> {
        assert_eq!(self.arity(), 1);
        (0..self.dims[0])
            .map(|a| BitSet::from_indices(self.dims[1], (0..self.dims[1]).filter(|&b| self.contains(&[a, b]))))
            .collect()
    }

    /// `S^{(0)}[C̄] = {b₀ | ∀b̄ ∈ C̄ . R(b₀, b̄)}`; `sets` holds `C₁ … Cₙ`.
    pub fn section0(&self, sets: &[&BitSet]) -> BitSet {
        assert_eq!(sets.len(), self.arity());
        let mut out = BitSet::full(self.dims[0]);
        for_each_in_product(sets, |args| out.intersect_with(self.fiber(args)));
        out
    }

    /// Section at coordinate `k`: `{p | ∀ choices from the other sets . R(…, p at k, …)}`.
    /// `sets` has one entry per coordinate (output first); `sets[k]` is ignored.
    pub fn section(&self, k: usize, sets: &[&BitSet]) -> BitSet {
        assert_eq!(sets.len(), self.dims.len());
        if k == 0 {
            return self.section0(&sets[1..]);
        }
        let mut out = BitSet::empty(self.dims[k]);
        let others: Vec<&BitSet> = sets[1..]
            .iter()
            .enumerate()
            .filter(|&(i, _)| i + 1 != k)
            .map(|(_, s)| *s)
            .collect();
        let mut args = vec![0; self.arity()];
        'points: for p in 0..self.dims[k] {
            let mut ok = true;
            for_each_in_product(&others, |rest| {
                if !ok {
                    return;
                }
                let mut j = 0;
                for (i, slot) in args.iter_mut().enumerate() {
                    if i + 1 == k {
                        *slot = p;
                    } else {
                        *slot = rest[j];
                        j += 1;
                    }
                }
                if !sets[0].is_subset(self.fiber(&args)) {
                    ok = false;
                }
            });
            if !ok {
                continue 'points;
            }
            out.insert(p);
        }
        out
    }

    /// Section at coordinate `k` with every other coordinate fixed to a point.
    /// `point[k]` is ignored.
    pub fn point_section(&self, k: usize, point: &[usize]) -> BitSet {
        let mut args: Vec<usize> = point[1..].to_vec();
        if k == 0 {
            return self.fiber(&args).clone();
        }
        let mut out = BitSet::empty(self.dims[k]);
        for p in 0..self.dims[k] {
            args[k - 1] = p;
            if self.fiber(&args).contains(point[0]) {
                out.insert(p);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn odometer_visits_every_tuple_once() {
        let mut seen = Vec::new();
        for_each_tuple(&[2, 3], |t| seen.push(t.to_vec()));
        assert_eq!(seen.len(), 6);
        assert_eq!(seen[1], vec![0, 1]);
        let mut n = 0;
        for_each_tuple(&[], |_| n += 1);
        assert_eq!(n, 1);
        for_each_tuple(&[2, 0], |_| n += 1);
        assert_eq!(n, 1);
    }

    #[test]
    fn unary_section0_is_a_fiber_intersection() {
        // R ⊆ 3 × 2
        let r = Relation::from_tuples(&[3, 2], [vec![0, 0], vec![1, 0], vec![1, 1]]).unwrap();
        assert_eq!(r.section0(&[&BitSet::singleton(2, 0)]).to_vec(), vec![0, 1]);
        assert_eq!(r.section0(&[&BitSet::full(2)]).to_vec(), vec![1]);
        assert_eq!(r.section0(&[&BitSet::empty(2)]).count(), 3);
    }

    #[test]
    fn binary_sections() {
        let r = Relation::from_tuples(&[2, 2, 2], [vec![0, 0, 1], vec![1, 0, 1], vec![1, 1, 1]]).unwrap();
        let s = |i: usize| BitSet::singleton(2, i);
        assert_eq!(r.section0(&[&s(0), &s(1)]).to_vec(), vec![0, 1]);
        assert_eq!(r.section(2, &[&s(1), &s(0), &BitSet::empty(2)]).to_vec(), vec![1]);
        assert_eq!(r.point_section(2, &[1, 0, 0]).to_vec(), vec![1]);
        assert_eq!(r.point_section(1, &[1, 0, 1]).to_vec(), vec![0, 1]);
        assert_eq!(r.section(1, &[&s(1), &BitSet::empty(2), &s(1)]), r.point_section(1, &[1, 0, 1]));
    }

    #[test]
    fn tuples_round_trip() {
        let t = vec![vec![0, 1, 0], vec![1, 0, 1]];
        let r = Relation::from_tuples(&[2, 2, 2], t.clone()).unwrap();
        assert_eq!(r.tuples(), t);
        assert_eq!(r.complement().count(), 6);
        assert!(Relation::from_tuples(&[2, 2], [vec![2, 0]]).is_err());
    }

    #[test]
    fn nullary_relation_is_a_subset() {
        let mut r = Relation::empty(&[3]);
        r.insert(&[2]);
        assert_eq!(r.section0(&[]).to_vec(), vec![2]);
        assert_eq!(r.tuples(), vec![vec![2]]);
    }
}
