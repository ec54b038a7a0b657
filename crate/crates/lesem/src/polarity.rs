//! Polarity-based frames, their complex algebras, and the relational `⊩`/`≻` clauses.

use std::fmt;

use serde::Serialize;

use crate::algebra::{check_normal, eval, ConceptAlgebra, LeAlgebra, LeStructure, OpTable, Valuation};
use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::lattice::{ConceptLattice, Polarity};
use crate::relation::{for_each_tuple, sides, Relation, Side};
use crate::representation::birkhoff_polarity;
use crate::syntax::{Connective, Family, Formula, Signature};

/// A failing section found by a compatibility check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub connective: String,
    /// 0 for the output coordinate, `i` for argument `i`
    pub coordinate: usize,
    /// the fixed tuple, with `_` at the varying coordinate
    pub at: Vec<String>,
    pub section: Vec<String>,
    pub closure: Vec<String>,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: section at coordinate {} for ({}) is {{{}}}, closure {{{}}}",
            self.connective,
            self.coordinate,
            self.at.join(", "),
            self.section.join(","),
            self.closure.join(",")
        )
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CompatibilityReport {
    pub compatible: bool,
    pub sections_checked: usize,
    pub violations: Vec<Violation>,
}

/// Coordinate carrier sizes of the relation for `c` over `p`.
pub fn relation_dims(p: &Polarity, c: &Connective) -> Vec<usize> {
    sides(c).into_iter().map(|s| s.size(p)).collect()
}

/// Checks stability of every point section of `r`, whose coordinates range over `sides`.
pub(crate) fn check_sections(p: &Polarity, name: &str, sides: &[Side], r: &Relation, report: &mut CompatibilityReport) {
    let dims = r.dims().to_vec();
    for k in 0..dims.len() {
        let mut other = dims.clone();
        other[k] = 1;
        for_each_tuple(&other, |point| {
            report.sections_checked += 1;
            let s = r.point_section(k, point);
            if sides[k].is_stable(p, &s) {
                return;
            }
            let at = point
                .iter()
                .enumerate()
                .map(|(j, &i)| if j == k { "_".to_string() } else { sides[j].names(p)[i].clone() })
                .collect();
            let names = |b: &BitSet| b.iter().map(|i| sides[k].names(p)[i].clone()).collect();
            report.violations.push(Violation {
                connective: name.to_string(),
                coordinate: k,
                at,
                section: names(&s),
                closure: names(&sides[k].close(p, &s)),
            });
        });
    }
}

/// A polarity with one compatible relation per connective.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolarityFrame {
    polarity: Polarity,
    signature: Signature,
    relations: Vec<Relation>,
}

impl PolarityFrame {
    /// Builds a frame and rejects it unless every relation is compatible.
    pub fn new(polarity: Polarity, signature: Signature, relations: Vec<Relation>) -> Result<Self> {
        let fr = Self::new_unchecked(polarity, signature, relations)?;
        let report = fr.compatibility_check();
        if let Some(v) = report.violations.first() {
            return Err(Error::Incompatible(v.to_string()));
        }
        Ok(fr)
    }

    /// Builds a frame checking only that relations have the right carriers.
    pub fn new_unchecked(polarity: Polarity, signature: Signature, relations: Vec<Relation>) -> Result<Self> {
        if relations.len() != signature.len() {
            return Err(Error::Invalid(format!(
                "{} relations given for {} connectives",
                relations.len(),
                signature.len()
            )));
        }
        for (c, r) in signature.connectives().iter().zip(&relations) {
            if r.dims() != relation_dims(&polarity, c) {
                return Err(Error::Invalid(format!("relation for `{}` has the wrong carriers", c.name)));
            }
        }
        Ok(Self {
            polarity,
            signature,
            relations,
        })
    }

    pub fn polarity(&self) -> &Polarity {
        &self.polarity
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn relation(&self, name: &str) -> Option<&Relation> {
        self.signature.position(name).map(|i| &self.relations[i])
    }

    /// Stability of every point section of every relation.
    pub fn compatibility_check(&self) -> CompatibilityReport {
        let mut report = CompatibilityReport::default();
        for (c, r) in self.signature.connectives().iter().zip(&self.relations) {
            check_sections(&self.polarity, &c.name, &sides(c), r, &mut report);
        }
        report.compatible = report.violations.is_empty();
        report
    }

    pub fn is_compatible(&self) -> bool {
        self.compatibility_check().compatible
    }

    /// The concept lattice with operations `f_{R_f}` and `g_{R_g}`; fails on incompatible frames.
    pub fn complex_algebra(&self) -> Result<ConceptAlgebra> {
        if let Some(v) = self.compatibility_check().violations.first() {
            return Err(Error::Incompatible(v.to_string()));
        }
        self.complex_algebra_unchecked()
    }

    /// As [`complex_algebra`](Self::complex_algebra) without the compatibility check;
    /// operations need not be normal.
    pub fn complex_algebra_unchecked(&self) -> Result<ConceptAlgebra> {
        let l = ConceptLattice::new(&self.polarity)?;
        let ops = self
            .signature
            .connectives()
            .iter()
            .zip(&self.relations)
            .map(|(c, r)| complex_op(&l, &sides(c), r))
            .collect::<Result<Vec<_>>>()?;
        ConceptAlgebra::new(l, self.signature.clone(), ops)
    }
}

/// Operation table read off a relation: arguments contribute their extent on object
/// coordinates and intent on attribute coordinates; the output section is closed on its side.
pub(crate) fn complex_op(l: &ConceptLattice, sides: &[Side], r: &Relation) -> Result<OpTable> {
    let comp = |c: usize, s: Side| match s {
        Side::Objects => l.extent(c),
        Side::Attributes => l.intent(c),
    };
    OpTable::build(l.len(), sides.len() - 1, |t| {
        let parts: Vec<&BitSet> = t.iter().zip(&sides[1..]).map(|(&c, &s)| comp(c, s)).collect();
        let s = r.section0(&parts);
        match sides[0] {
            Side::Objects => l.closure_of_objects(&s),
            Side::Attributes => l.closure_of_attributes(&s),
        }
    })
}

/// One disagreement between a relational clause and the evaluated concept.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClauseMismatch {
    pub subformula: String,
    pub point: String,
    /// `"forces"` or `"refutes"`
    pub judgement: &'static str,
    pub by_clause: bool,
    pub by_evaluation: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ClauseReport {
    pub subformulas_checked: usize,
    pub mismatches: Vec<ClauseMismatch>,
}

impl ClauseReport {
    pub fn is_clean(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Re-derives satisfaction and refutation of every subformula from the relational
/// clauses and compares them with the complex-algebra evaluation.
pub fn clause_audit(fr: &PolarityFrame, v: &Valuation, phi: &Formula) -> Result<ClauseReport> {
    let alg = fr.complex_algebra_unchecked()?;
    clause_audit_with(fr, alg.lattice(), v, phi, |sub| {
        let c = eval(&alg, v, sub)?;
        Ok((alg.lattice().extent(c).clone(), alg.lattice().intent(c).clone()))
    })
}

/// As [`clause_audit`] with the claimed `(⟦ψ⟧, ⦇ψ⦈)` of each subformula supplied by `claimed`.
pub fn clause_audit_with(
    fr: &PolarityFrame,
    l: &ConceptLattice,
    v: &Valuation,
    phi: &Formula,
    mut claimed: impl FnMut(&Formula) -> Result<(BitSet, BitSet)>,
) -> Result<ClauseReport> {
    phi.check(&fr.signature)?;
    let p = &fr.polarity;
    let subs = phi.subformulas();
    let mut got: Vec<(BitSet, BitSet)> = Vec::with_capacity(subs.len());
    let mut report = ClauseReport::default();
    let lookup = |subs: &[&Formula], got: &[(BitSet, BitSet)], f: &Formula| -> (BitSet, BitSet) {
        let i = subs.iter().position(|s| *s == f).expect("children precede parents");
        got[i].clone()
    };
    for (idx, sub) in subs.iter().enumerate() {
        let (sat, refu) = match sub {
            Formula::Var(name) => {
                let c = v.get(name).ok_or_else(|| Error::Unassigned(name.clone()))?;
                if c >= l.len() {
                    return Err(Error::InvalidIndex(c));
                }
                (l.extent(c).clone(), l.intent(c).clone())
            }
            Formula::Top => {
                let sat = BitSet::full(p.num_objects());
                (sat.clone(), sat_to_ref(p, &sat))
            }
            Formula::Bot => {
                let refu = BitSet::full(p.num_attributes());
                (ref_to_sat(p, &refu), refu)
            }
            Formula::And(a, b) => {
                let sat = lookup(&subs[..idx], &got, a).0.intersection(&lookup(&subs[..idx], &got, b).0);
                (sat.clone(), sat_to_ref(p, &sat))
            }
            Formula::Or(a, b) => {
                let refu = lookup(&subs[..idx], &got, a).1.intersection(&lookup(&subs[..idx], &got, b).1);
                (ref_to_sat(p, &refu), refu)
            }
            Formula::App(name, args) => {
                let ci = fr.signature.position(name).expect("checked");
                let c = &fr.signature.connectives()[ci];
                let r = &fr.relations[ci];
                let sd = sides(c);
                // argument coordinates read satisfaction on object sides, refutation on attribute sides
                let arg_sets: Vec<BitSet> = args
                    .iter()
                    .zip(&sd[1..])
                    .map(|(a, s)| {
                        let (sa, re) = lookup(&subs[..idx], &got, a);
                        match s {
                            Side::Objects => sa,
                            Side::Attributes => re,
                        }
                    })
                    .collect();
                let out = quantified_section(r, &arg_sets);
                match c.family {
                    Family::G => (out.clone(), sat_to_ref(p, &out)),
                    Family::F => (ref_to_sat(p, &out), out),
                }
            }
        };
        let (csat, cref) = claimed(sub)?;
        report.subformulas_checked += 1;
        let text = sub.to_string();
        for a in 0..p.num_objects() {
            if sat.contains(a) != csat.contains(a) {
                report.mismatches.push(ClauseMismatch {
                    subformula: text.clone(),
                    point: p.objects()[a].clone(),
                    judgement: "forces",
                    by_clause: sat.contains(a),
                    by_evaluation: csat.contains(a),
                });
            }
        }
        for x in 0..p.num_attributes() {
            if refu.contains(x) != cref.contains(x) {
                report.mismatches.push(ClauseMismatch {
                    subformula: text.clone(),
                    point: p.attributes()[x].clone(),
                    judgement: "refutes",
                    by_clause: refu.contains(x),
                    by_evaluation: cref.contains(x),
                });
            }
        }
        got.push((sat, refu));
    }
    Ok(report)
}

/// `x ≻ φ iff ∀a (a ⊩ φ ⇒ aIx)`
fn sat_to_ref(p: &Polarity, sat: &BitSet) -> BitSet {
    BitSet::from_indices(
        p.num_attributes(),
        (0..p.num_attributes()).filter(|&x| sat.iter().all(|a| p.incident(a, x))),
    )
}

/// `a ⊩ φ iff ∀x (x ≻ φ ⇒ aIx)`
fn ref_to_sat(p: &Polarity, refu: &BitSet) -> BitSet {
    BitSet::from_indices(
        p.num_objects(),
        (0..p.num_objects()).filter(|&a| refu.iter().all(|x| p.incident(a, x))),
    )
}

/// `{b₀ | ∀b̄ (b̄ ∈ C̄ ⇒ R(b₀, b̄))}` by scanning every tuple of the argument carriers.
fn quantified_section(r: &Relation, sets: &[BitSet]) -> BitSet {
    let dims = r.dims();
    BitSet::from_indices(
        dims[0],
        (0..dims[0]).filter(|&b0| {
            let mut ok = true;
            for_each_tuple(&dims[1..], |t| {
                if ok && t.iter().zip(sets).all(|(&b, s)| s.contains(b)) {
                    let mut full = vec![b0];
                    full.extend_from_slice(t);
                    ok = r.contains(&full);
                }
            });
            ok
        }),
    )
}

/// The frame on `(L, L, ≤)` with `R_f(x, b̄) iff f(b̄) ≤ x` and `R_g(a, b̄) iff a ≤ g(b̄)`.
/// Lattice element `i` is both object `i` and attribute `i`.
pub fn frame_from_algebra(alg: &LeAlgebra) -> Result<PolarityFrame> {
    check_normal(alg)?;
    let l = alg.lattice();
    let p = birkhoff_polarity(l);
    let relations = alg
        .signature()
        .connectives()
        .iter()
        .enumerate()
        .map(|(ci, c)| {
            let op = alg.op(ci);
            Relation::from_fn(&relation_dims(&p, c), |t| match c.family {
                Family::F => l.leq(op.get(&t[1..]), t[0]),
                Family::G => l.leq(t[0], op.get(&t[1..])),
            })
        })
        .collect();
    PolarityFrame::new(p, alg.signature().clone(), relations)
}
