//! Lattice expansions: operation tables, normality, isomorphism, valuations and evaluation.

use std::collections::{BTreeMap, HashMap};

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::lattice::{ConceptLattice, Tables};
use crate::representation::FiniteLattice;
use crate::syntax::{Family, Formula, Signature, Tone};

/// Largest operation table (number of argument tuples) that is materialised.
pub const OP_TABLE_CAP: u128 = 1 << 22;

/// A bounded lattice on indices `0..size`.
pub trait BoundedLattice {
    fn size(&self) -> usize;
    fn meet(&self, a: usize, b: usize) -> usize;
    fn join(&self, a: usize, b: usize) -> usize;
    fn top(&self) -> usize;
    fn bottom(&self) -> usize;
    fn leq(&self, a: usize, b: usize) -> bool {
        self.meet(a, b) == a
    }
}

impl BoundedLattice for FiniteLattice {
    fn size(&self) -> usize {
        self.len()
    }
    fn meet(&self, a: usize, b: usize) -> usize {
        FiniteLattice::meet(self, a, b)
    }
    fn join(&self, a: usize, b: usize) -> usize {
        FiniteLattice::join(self, a, b)
    }
    fn top(&self) -> usize {
        FiniteLattice::top(self)
    }
    fn bottom(&self) -> usize {
        FiniteLattice::bottom(self)
    }
    fn leq(&self, a: usize, b: usize) -> bool {
        FiniteLattice::leq(self, a, b)
    }
}

/// Total `n`-ary operation on `0..base`, stored densely.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OpTable {
    arity: usize,
    base: usize,
    values: Vec<u32>,
}

impl OpTable {
    pub fn build(base: usize, arity: usize, mut f: impl FnMut(&[usize]) -> usize) -> Result<Self> {
        let required = (base as u128).checked_pow(arity as u32).unwrap_or(u128::MAX);
        if required > OP_TABLE_CAP {
            return Err(Error::limit("operation table entries", OP_TABLE_CAP, required));
        }
        let mut values = Vec::with_capacity(required as usize);
        crate::relation::for_each_tuple(&vec![base; arity], |t| values.push(f(t) as u32));
        Ok(Self { arity, base, values })
    }

    pub fn from_values(base: usize, arity: usize, values: Vec<usize>) -> Result<Self> {
        let expected = base.pow(arity as u32);
        if values.len() != expected || values.iter().any(|&v| v >= base) {
            return Err(Error::Invalid(format!(
                "operation table needs {expected} entries in 0..{base}"
            )));
        }
        Ok(Self {
            arity,
            base,
            values: values.into_iter().map(|v| v as u32).collect(),
        })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    #[inline]
    pub fn get(&self, args: &[usize]) -> usize {
        let mut idx = 0;
        for &a in args {
            idx = idx * self.base + a;
        }
        self.values[idx] as usize
    }

    pub fn values(&self) -> impl Iterator<Item = usize> + '_ {
        self.values.iter().map(|&v| v as usize)
    }
}

/// A lattice with one operation per connective of a signature.
pub trait LeStructure: BoundedLattice {
    fn signature(&self) -> &Signature;
    fn op(&self, i: usize) -> &OpTable;
}

/// Checks the normality laws coordinate-wise: `F` connectives preserve binary and
/// empty joins in monotone coordinates and send meets to joins in antitone ones;
/// dually for `G`.
pub fn check_normal<S: LeStructure + ?Sized>(s: &S) -> Result<()> {
    let n = s.size();
    for (ci, c) in s.signature().connectives().iter().enumerate() {
        let op = s.op(ci);
        let arity = c.arity();
        for (i, tone) in c.tones.iter().enumerate() {
            // (combine args, unit arg, combine results, unit result)
            let (arg_op, unit_arg, res_join, unit_res) = match (c.family, tone) {
                (Family::F, Tone::Monotone) => (true, s.bottom(), true, s.bottom()),
                (Family::F, Tone::Antitone) => (false, s.top(), true, s.bottom()),
                (Family::G, Tone::Monotone) => (false, s.top(), false, s.top()),
                (Family::G, Tone::Antitone) => (true, s.bottom(), false, s.top()),
            };
            let mut err = None;
            crate::relation::for_each_tuple(&vec![n; arity], |t| {
                if err.is_some() || t[i] != 0 {
                    return;
                }
                let mut args = t.to_vec();
                args[i] = unit_arg;
                if op.get(&args) != unit_res {
                    err = Some(format!("`{}` fails the unit law in coordinate {}", c.name, i + 1));
                    return;
                }
                for a in 0..n {
                    for b in a..n {
                        args[i] = if arg_op { s.join(a, b) } else { s.meet(a, b) };
                        let whole = op.get(&args);
                        args[i] = a;
                        let fa = op.get(&args);
                        args[i] = b;
                        let fb = op.get(&args);
                        let combined = if res_join { s.join(fa, fb) } else { s.meet(fa, fb) };
                        if whole != combined {
                            err = Some(format!(
                                "`{}` fails the distribution law in coordinate {} at arguments {a}, {b}",
                                c.name,
                                i + 1
                            ));
                            return;
                        }
                    }
                }
            });
            if let Some(e) = err {
                return Err(Error::NotNormal(e));
            }
        }
    }
    Ok(())
}

/// Is `map` an isomorphism of lattice expansions from `a` to `b`?
pub fn is_isomorphism<A, B>(a: &A, b: &B, map: &[usize]) -> bool
where
    A: LeStructure + ?Sized,
    B: LeStructure + ?Sized,
{
    let n = a.size();
    if b.size() != n || map.len() != n || a.signature() != b.signature() {
        return false;
    }
    let mut hit = BitSet::empty(n);
    if map.iter().any(|&m| m >= n || !hit.insert(m)) {
        return false;
    }
    for x in 0..n {
        for y in 0..n {
            if a.leq(x, y) != b.leq(map[x], map[y]) {
                return false;
            }
        }
    }
    for (ci, c) in a.signature().connectives().iter().enumerate() {
        let mut ok = true;
        crate::relation::for_each_tuple(&vec![n; c.arity()], |t| {
            if ok {
                let mapped: Vec<usize> = t.iter().map(|&x| map[x]).collect();
                ok = map[a.op(ci).get(t)] == b.op(ci).get(&mapped);
            }
        });
        if !ok {
            return false;
        }
    }
    true
}

/// Backtracking search for an isomorphism; intended for small structures.
pub fn find_isomorphism<A, B>(a: &A, b: &B) -> Option<Vec<usize>>
where
    A: LeStructure + ?Sized,
    B: LeStructure + ?Sized,
{
    let n = a.size();
    if b.size() != n || a.signature() != b.signature() {
        return None;
    }
    // order-preserving candidates only; ops checked at the leaves
    let down_a: Vec<usize> = (0..n).map(|x| (0..n).filter(|&y| a.leq(y, x)).count()).collect();
    let down_b: Vec<usize> = (0..n).map(|x| (0..n).filter(|&y| b.leq(y, x)).count()).collect();
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn go<A: LeStructure + ?Sized, B: LeStructure + ?Sized>(
        a: &A,
        b: &B,
        x: usize,
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
        da: &[usize],
        db: &[usize],
    ) -> bool {
        let n = a.size();
        if x == n {
            return is_isomorphism(a, b, map);
        }
        for y in 0..n {
            if used[y] || da[x] != db[y] {
                continue;
            }
            if (0..x).any(|p| a.leq(p, x) != b.leq(map[p], y) || a.leq(x, p) != b.leq(y, map[p])) {
                continue;
            }
            map[x] = y;
            used[y] = true;
            if go(a, b, x + 1, map, used, da, db) {
                return true;
            }
            used[y] = false;
        }
        map[x] = usize::MAX;
        false
    }
    go(a, b, 0, &mut map, &mut used, &down_a, &down_b).then_some(map)
}

/// A finite lattice expansion given by a lattice and operation tables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeAlgebra {
    lattice: FiniteLattice,
    signature: Signature,
    ops: Vec<OpTable>,
}

impl LeAlgebra {
    /// Validates table shapes and normality.
    pub fn new(lattice: FiniteLattice, signature: Signature, ops: Vec<OpTable>) -> Result<Self> {
        let a = Self::new_unchecked(lattice, signature, ops)?;
        check_normal(&a)?;
        Ok(a)
    }

    /// Validates table shapes only.
    pub fn new_unchecked(lattice: FiniteLattice, signature: Signature, ops: Vec<OpTable>) -> Result<Self> {
        if ops.len() != signature.len() {
            return Err(Error::Invalid("one operation table per connective is required".into()));
        }
        for (c, op) in signature.connectives().iter().zip(&ops) {
            if op.arity != c.arity() || op.base != lattice.len() {
                return Err(Error::Invalid(format!("table for `{}` has the wrong shape", c.name)));
            }
        }
        Ok(Self {
            lattice,
            signature,
            ops,
        })
    }

    pub fn lattice(&self) -> &FiniteLattice {
        &self.lattice
    }

    pub fn ops(&self) -> &[OpTable] {
        &self.ops
    }

    pub fn op_by_name(&self, name: &str) -> Option<&OpTable> {
        self.signature.position(name).map(|i| &self.ops[i])
    }

    pub fn apply(&self, name: &str, args: &[usize]) -> Result<usize> {
        let op = self.op_by_name(name).ok_or_else(|| Error::UnknownConnective(name.to_string()))?;
        Ok(op.get(args))
    }
}

impl BoundedLattice for LeAlgebra {
    fn size(&self) -> usize {
        self.lattice.len()
    }
    fn meet(&self, a: usize, b: usize) -> usize {
        self.lattice.meet(a, b)
    }
    fn join(&self, a: usize, b: usize) -> usize {
        self.lattice.join(a, b)
    }
    fn top(&self) -> usize {
        self.lattice.top()
    }
    fn bottom(&self) -> usize {
        self.lattice.bottom()
    }
    fn leq(&self, a: usize, b: usize) -> bool {
        self.lattice.leq(a, b)
    }
}

impl LeStructure for LeAlgebra {
    fn signature(&self) -> &Signature {
        &self.signature
    }
    fn op(&self, i: usize) -> &OpTable {
        &self.ops[i]
    }
}

/// A concept lattice with one tabulated operation per connective.
#[derive(Clone, Debug)]
pub struct ConceptAlgebra {
    lattice: ConceptLattice,
    tables: Tables,
    signature: Signature,
    ops: Vec<OpTable>,
}

impl ConceptAlgebra {
    pub fn new(lattice: ConceptLattice, signature: Signature, ops: Vec<OpTable>) -> Result<Self> {
        if ops.len() != signature.len() {
            return Err(Error::Invalid("one operation table per connective is required".into()));
        }
        let tables = lattice.tables()?;
        Ok(Self {
            lattice,
            tables,
            signature,
            ops,
        })
    }

    pub fn lattice(&self) -> &ConceptLattice {
        &self.lattice
    }

    pub fn tables(&self) -> &Tables {
        &self.tables
    }

    pub fn ops(&self) -> &[OpTable] {
        &self.ops
    }

    pub fn op_by_name(&self, name: &str) -> Option<&OpTable> {
        self.signature.position(name).map(|i| &self.ops[i])
    }

    pub fn apply(&self, name: &str, args: &[usize]) -> Result<usize> {
        let op = self.op_by_name(name).ok_or_else(|| Error::UnknownConnective(name.to_string()))?;
        Ok(op.get(args))
    }

    pub fn to_le_algebra(&self) -> LeAlgebra {
        LeAlgebra {
            lattice: FiniteLattice::from_concept_lattice(&self.lattice),
            signature: self.signature.clone(),
            ops: self.ops.clone(),
        }
    }

    pub fn eval(&self, v: &Valuation, f: &Formula) -> Result<usize> {
        eval(self, v, f)
    }

    pub fn forces(&self, v: &Valuation, a: usize, f: &Formula) -> Result<bool> {
        if a >= self.lattice.polarity().num_objects() {
            return Err(Error::InvalidIndex(a));
        }
        Ok(self.lattice.extent(eval(self, v, f)?).contains(a))
    }

    pub fn refutes(&self, v: &Valuation, x: usize, f: &Formula) -> Result<bool> {
        if x >= self.lattice.polarity().num_attributes() {
            return Err(Error::InvalidIndex(x));
        }
        Ok(self.lattice.intent(eval(self, v, f)?).contains(x))
    }
}

impl BoundedLattice for ConceptAlgebra {
    fn size(&self) -> usize {
        self.lattice.len()
    }
    fn meet(&self, a: usize, b: usize) -> usize {
        self.tables.meet(a, b)
    }
    fn join(&self, a: usize, b: usize) -> usize {
        self.tables.join(a, b)
    }
    fn top(&self) -> usize {
        self.lattice.top()
    }
    fn bottom(&self) -> usize {
        self.lattice.bottom()
    }
    fn leq(&self, a: usize, b: usize) -> bool {
        self.tables.leq(a, b)
    }
}

impl LeStructure for ConceptAlgebra {
    fn signature(&self) -> &Signature {
        &self.signature
    }
    fn op(&self, i: usize) -> &OpTable {
        &self.ops[i]
    }
}

/// Assignment of concept indices to proposition letters.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Valuation {
    map: BTreeMap<String, usize>,
}

impl Valuation {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs<S: AsRef<str>>(pairs: &[(S, usize)]) -> Self {
        Self {
            map: pairs.iter().map(|(p, c)| (p.as_ref().to_string(), *c)).collect(),
        }
    }

    /// Each letter gets the concept with the named extent; the extent must be stable.
    pub fn from_extents<S: AsRef<str>>(l: &ConceptLattice, pairs: &[(&str, &[S])]) -> Result<Self> {
        let mut v = Self::new();
        for (p, names) in pairs {
            let ext = l.polarity().object_set(names)?;
            let c = l.index_of_extent(&ext).ok_or_else(|| {
                Error::Invalid(format!("extent given for `{p}` is not Galois-stable"))
            })?;
            v.insert(p, c);
        }
        Ok(v)
    }

    pub fn insert(&mut self, p: &str, c: usize) {
        self.map.insert(p.to_string(), c);
    }

    pub fn get(&self, p: &str) -> Option<usize> {
        self.map.get(p).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, usize)> {
        self.map.iter().map(|(k, &v)| (k.as_str(), v))
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn check(&self, size: usize) -> Result<()> {
        match self.map.values().find(|&&c| c >= size) {
            Some(&c) => Err(Error::InvalidIndex(c)),
            None => Ok(()),
        }
    }
}

/// Homomorphic extension of a valuation into any lattice expansion.
pub fn eval<S: LeStructure + ?Sized>(s: &S, v: &Valuation, f: &Formula) -> Result<usize> {
    Ok(match f {
        Formula::Var(p) => {
            let c = v.get(p).ok_or_else(|| Error::Unassigned(p.clone()))?;
            if c >= s.size() {
                return Err(Error::InvalidIndex(c));
            }
            c
        }
        Formula::Top => s.top(),
        Formula::Bot => s.bottom(),
        Formula::And(a, b) => s.meet(eval(s, v, a)?, eval(s, v, b)?),
        Formula::Or(a, b) => s.join(eval(s, v, a)?, eval(s, v, b)?),
        Formula::App(name, args) => {
            let i = s
                .signature()
                .position(name)
                .ok_or_else(|| Error::UnknownConnective(name.clone()))?;
            let arity = s.signature().connectives()[i].arity();
            if arity != args.len() {
                return Err(Error::Arity {
                    name: name.clone(),
                    expected: arity,
                    found: args.len(),
                });
            }
            let vals = args.iter().map(|a| eval(s, v, a)).collect::<Result<Vec<_>>>()?;
            s.op(i).get(&vals)
        }
    })
}

/// Values of every distinct subformula, in post-order.
pub fn eval_all<'f, S: LeStructure + ?Sized>(
    s: &S,
    v: &Valuation,
    f: &'f Formula,
) -> Result<Vec<(&'f Formula, usize)>> {
    let mut memo: HashMap<&Formula, usize> = HashMap::new();
    let mut out = Vec::new();
    for sub in f.subformulas() {
        let val = match sub {
            Formula::And(a, b) => s.meet(memo[a.as_ref()], memo[b.as_ref()]),
            Formula::Or(a, b) => s.join(memo[a.as_ref()], memo[b.as_ref()]),
            Formula::App(..) | Formula::Var(_) | Formula::Top | Formula::Bot => {
                if let Formula::App(name, args) = sub {
                    let i = s
                        .signature()
                        .position(name)
                        .ok_or_else(|| Error::UnknownConnective(name.clone()))?;
                    if s.signature().connectives()[i].arity() != args.len() {
                        return eval(s, v, sub).map(|_| unreachable!());
                    }
                    let vals: Vec<usize> = args.iter().map(|a| memo[a]).collect();
                    s.op(i).get(&vals)
                } else {
                    eval(s, v, sub)?
                }
            }
        };
        memo.insert(sub, val);
        out.push((sub, val));
    }
    Ok(out)
}

#[derive(Clone, Debug)]
enum Instr {
    Var(usize),
    Const(usize),
    Meet(usize, usize),
    Join(usize, usize),
    Op(usize, Vec<usize>),
}

/// A formula flattened against a fixed structure and letter order, for repeated evaluation.
#[derive(Clone, Debug)]
pub struct Compiled {
    code: Vec<Instr>,
}

impl Compiled {
    pub fn new<S: LeStructure + ?Sized>(s: &S, f: &Formula, letters: &[String]) -> Result<Self> {
        f.check(s.signature())?;
        let mut code = Vec::new();
        let mut memo: HashMap<&Formula, usize> = HashMap::new();
        for sub in f.subformulas() {
            let ins = match sub {
                Formula::Var(p) => Instr::Var(
                    letters
                        .iter()
                        .position(|l| l == p)
                        .ok_or_else(|| Error::Unassigned(p.clone()))?,
                ),
                Formula::Top => Instr::Const(s.top()),
                Formula::Bot => Instr::Const(s.bottom()),
                Formula::And(a, b) => Instr::Meet(memo[a.as_ref()], memo[b.as_ref()]),
                Formula::Or(a, b) => Instr::Join(memo[a.as_ref()], memo[b.as_ref()]),
                Formula::App(name, args) => Instr::Op(
                    s.signature().position(name).expect("checked"),
                    args.iter().map(|a| memo[a]).collect(),
                ),
            };
            memo.insert(sub, code.len());
            code.push(ins);
        }
        Ok(Self { code })
    }

    /// Value of the formula; `scratch` is reused between calls.
    pub fn run<S: LeStructure + ?Sized>(&self, s: &S, assignment: &[usize], scratch: &mut Vec<usize>) -> usize {
        scratch.clear();
        let mut args = Vec::new();
        for ins in &self.code {
            let v = match ins {
                Instr::Var(i) => assignment[*i],
                Instr::Const(c) => *c,
                Instr::Meet(a, b) => s.meet(scratch[*a], scratch[*b]),
                Instr::Join(a, b) => s.join(scratch[*a], scratch[*b]),
                Instr::Op(op, xs) => {
                    args.clear();
                    args.extend(xs.iter().map(|&x| scratch[x]));
                    s.op(*op).get(&args)
                }
            };
            scratch.push(v);
        }
        *scratch.last().expect("formulas are nonempty")
    }
}
