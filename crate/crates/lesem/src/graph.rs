//! Graph-based frames. A reflexive graph `(Z, E)` is read through the polarity
//! `(Z, Z, I_{E^c})`, and each relation `R` through its complement, so the
//! bracket operators `S^[i]` are the round sections of `Sᶜ`.

use serde::Serialize;

use crate::algebra::{check_normal, eval, ConceptAlgebra, LeAlgebra, LeStructure, Valuation};
use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::lattice::ConceptLattice;
use crate::polarity::{ClauseMismatch, ClauseReport, CompatibilityReport, PolarityFrame};
use crate::relation::{for_each_tuple, sides, Relation, Side};
use crate::representation::{graph_polarity, lattice_graph, ReflexiveGraph};
use crate::syntax::{Family, Formula, Signature, Tone};

/// `S^[0][C̄] = {z | ∀z̄ ∈ C̄ . ¬S(z, z̄)}`
pub fn op0(r: &Relation, sets: &[&BitSet]) -> BitSet {
    r.complement().section0(sets)
}

/// `S^[i][A′, C̄^i]`: the section of `Sᶜ` at coordinate `i`; `sets[i]` plays the role of `A′`.
pub fn opi(r: &Relation, i: usize, sets: &[&BitSet]) -> BitSet {
    r.complement().section(i, sets)
}

/// `S^[1][A′]` for a binary relation.
pub fn op1(r: &Relation, a: &BitSet) -> BitSet {
    assert_eq!(r.arity(), 1);
    let dummy = BitSet::empty(r.dims()[1]);
    r.complement().section(1, &[a, &dummy])
}

/// A reflexive graph with one relation `R ⊆ Z^(n+1)` per connective.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphFrame {
    graph: ReflexiveGraph,
    relations: Vec<Relation>,
    /// `(Z, Z, I_{E^c})` with the complemented relations
    core: PolarityFrame,
}

impl GraphFrame {
    /// Builds a frame and rejects it unless every relation is compatible.
    pub fn new(graph: ReflexiveGraph, signature: Signature, relations: Vec<Relation>) -> Result<Self> {
        let fr = Self::new_unchecked(graph, signature, relations)?;
        if let Some(v) = fr.compatibility_check().violations.first() {
            return Err(Error::Incompatible(v.to_string()));
        }
        Ok(fr)
    }

    pub fn new_unchecked(graph: ReflexiveGraph, signature: Signature, relations: Vec<Relation>) -> Result<Self> {
        let n = graph.len();
        if relations.len() != signature.len() {
            return Err(Error::Invalid(format!(
                "{} relations given for {} connectives",
                relations.len(),
                signature.len()
            )));
        }
        for (c, r) in signature.connectives().iter().zip(&relations) {
            if r.dims() != vec![n; c.arity() + 1] {
                return Err(Error::Invalid(format!("relation for `{}` has the wrong carriers", c.name)));
            }
        }
        let core = PolarityFrame::new_unchecked(
            graph_polarity(&graph),
            signature,
            relations.iter().map(Relation::complement).collect(),
        )?;
        Ok(Self {
            graph,
            relations,
            core,
        })
    }

    pub fn graph(&self) -> &ReflexiveGraph {
        &self.graph
    }

    pub fn signature(&self) -> &Signature {
        self.core.signature()
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn relation(&self, name: &str) -> Option<&Relation> {
        self.signature().position(name).map(|i| &self.relations[i])
    }

    /// The polarity frame `(Z, Z, I_{E^c})` with complemented relations.
    pub fn complement_frame(&self) -> &PolarityFrame {
        &self.core
    }

    /// The output and per-coordinate containments: `(R_g^[0][z̄])^[10] ⊆ R_g^[0][z̄]` and the like.
    /// Each is stability of a point section of the complement.
    pub fn compatibility_check(&self) -> CompatibilityReport {
        self.core.compatibility_check()
    }

    pub fn is_compatible(&self) -> bool {
        self.core.is_compatible()
    }

    pub fn complex_algebra(&self) -> Result<ConceptAlgebra> {
        self.core.complex_algebra()
    }

    pub fn complex_algebra_unchecked(&self) -> Result<ConceptAlgebra> {
        self.core.complex_algebra_unchecked()
    }
}

pub fn forces(alg: &ConceptAlgebra, v: &Valuation, z: usize, phi: &Formula) -> Result<bool> {
    alg.forces(v, z, phi)
}

pub fn refutes(alg: &ConceptAlgebra, v: &Valuation, z: usize, phi: &Formula) -> Result<bool> {
    alg.refutes(v, z, phi)
}

/// Re-derives `⊩`/`≻` at every node for every subformula from the graph clauses and
/// compares with the complex-algebra evaluation.
pub fn clause_audit(gf: &GraphFrame, v: &Valuation, phi: &Formula) -> Result<ClauseReport> {
    let alg = gf.complex_algebra_unchecked()?;
    clause_audit_with(gf, alg.lattice(), v, phi, |sub| {
        let c = eval(&alg, v, sub)?;
        Ok((alg.lattice().extent(c).clone(), alg.lattice().intent(c).clone()))
    })
}

/// As [`clause_audit`] with the claimed `(⟦ψ⟧, ⦇ψ⦈)` of each subformula supplied by `claimed`.
pub fn clause_audit_with(
    gf: &GraphFrame,
    l: &ConceptLattice,
    v: &Valuation,
    phi: &Formula,
    mut claimed: impl FnMut(&Formula) -> Result<(BitSet, BitSet)>,
) -> Result<ClauseReport> {
    phi.check(gf.signature())?;
    let g = &gf.graph;
    let n = g.len();
    let subs = phi.subformulas();
    let mut got: Vec<(BitSet, BitSet)> = Vec::with_capacity(subs.len());
    let mut report = ClauseReport::default();
    let find = |got: &[(BitSet, BitSet)], f: &Formula| -> (BitSet, BitSet) {
        got[subs.iter().position(|s| *s == f).expect("children precede parents")].clone()
    };
    // z ≻ φ iff every E-predecessor fails to force φ
    let ref_of = |sat: &BitSet| BitSet::from_indices(n, (0..n).filter(|&z| g.predecessors(z).is_disjoint(sat)));
    // z ⊩ φ iff no E-successor refutes φ
    let sat_of = |refu: &BitSet| BitSet::from_indices(n, (0..n).filter(|&z| g.successors(z).is_disjoint(refu)));
    for sub in subs.iter() {
        let (sat, refu) = match sub {
            Formula::Var(name) => {
                let c = v.get(name).ok_or_else(|| Error::Unassigned(name.clone()))?;
                if c >= l.len() {
                    return Err(Error::InvalidIndex(c));
                }
                (l.extent(c).clone(), l.intent(c).clone())
            }
            Formula::Top => {
                let sat = BitSet::full(n);
                let r = ref_of(&sat);
                (sat, r)
            }
            Formula::Bot => {
                let refu = BitSet::full(n);
                (sat_of(&refu), refu)
            }
            Formula::And(a, b) => {
                let sat = find(&got, a).0.intersection(&find(&got, b).0);
                let r = ref_of(&sat);
                (sat, r)
            }
            Formula::Or(a, b) => {
                let refu = find(&got, a).1.intersection(&find(&got, b).1);
                (sat_of(&refu), refu)
            }
            Formula::App(name, args) => {
                let ci = gf.signature().position(name).expect("checked");
                let c = &gf.signature().connectives()[ci];
                let r = &gf.relations[ci];
                let children: Vec<(BitSet, BitSet)> = args.iter().map(|a| find(&got, a)).collect();
                // g: z̄ ≻^(n) φ̄ reads ≻ at monotone and ⊩ at antitone coordinates; f the reverse
                let arg_sets: Vec<&BitSet> = children
                    .iter()
                    .zip(&c.tones)
                    .map(|((s, rf), t)| match (c.family, t) {
                        (Family::G, Tone::Monotone) | (Family::F, Tone::Antitone) => rf,
                        (Family::G, Tone::Antitone) | (Family::F, Tone::Monotone) => s,
                    })
                    .collect();
                let out = BitSet::from_indices(
                    n,
                    (0..n).filter(|&z| {
                        let mut ok = true;
                        for_each_tuple(&vec![n; c.arity()], |t| {
                            if ok {
                                let mut full = vec![z];
                                full.extend_from_slice(t);
                                if r.contains(&full) && t.iter().zip(&arg_sets).all(|(&b, s)| s.contains(b)) {
                                    ok = false;
                                }
                            }
                        });
                        ok
                    }),
                );
                match c.family {
                    Family::G => {
                        let r = ref_of(&out);
                        (out, r)
                    }
                    Family::F => (sat_of(&out), out),
                }
            }
        };
        let (csat, cref) = claimed(sub)?;
        report.subformulas_checked += 1;
        let text = sub.to_string();
        for z in 0..n {
            for (judgement, by_clause, by_evaluation) in [
                ("forces", sat.contains(z), csat.contains(z)),
                ("refutes", refu.contains(z), cref.contains(z)),
            ] {
                if by_clause != by_evaluation {
                    report.mismatches.push(ClauseMismatch {
                        subformula: text.clone(),
                        point: g.nodes()[z].clone(),
                        judgement,
                        by_clause,
                        by_evaluation,
                    });
                }
            }
        }
        got.push((sat, refu));
    }
    Ok(report)
}

/// Does `zEz′` and `z ⊩ φ` imply `z′ ⊁ φ` at every edge?
pub fn weak_persistence_check(gf: &GraphFrame, v: &Valuation, phi: &Formula) -> Result<bool> {
    let alg = gf.complex_algebra_unchecked()?;
    let c = eval(&alg, v, phi)?;
    Ok(weakly_persistent(&gf.graph, alg.lattice().extent(c), alg.lattice().intent(c)))
}

/// The weak persistence condition for an arbitrary pair of node sets.
pub fn weakly_persistent(g: &ReflexiveGraph, sat: &BitSet, refu: &BitSet) -> bool {
    sat.iter().all(|z| g.successors(z).is_disjoint(refu))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PreorderProjection {
    pub compatible: bool,
    /// `R ∘ ≤ ⊆ R` (diagrammatic composition)
    pub right_absorbs: bool,
    /// `≤ ∘ R ⊆ R`
    pub left_absorbs: bool,
    pub agrees: bool,
}

/// On a preorder `E` with signature `{□}`: compatibility of `R_□` against
/// `(R_□ ∘ ≤) = R_□` and `(≤ ∘ R_□) ⊆ R_□`.
pub fn preorder_projection(gf: &GraphFrame) -> Result<PreorderProjection> {
    let g = &gf.graph;
    if !g.is_transitive() {
        return Err(Error::Precondition("edge relation is not a preorder".into()));
    }
    let sig = gf.signature();
    let is_box = sig.len() == 1 && {
        let c = &sig.connectives()[0];
        c.family == Family::G && c.tones == [Tone::Monotone]
    };
    if !is_box {
        return Err(Error::Precondition("signature must consist of one unary monotone g-connective".into()));
    }
    let r = &gf.relations[0];
    let n = g.len();
    let mut right_absorbs = true;
    let mut left_absorbs = true;
    for z in 0..n {
        for w in 0..n {
            if !r.contains(&[z, w]) {
                continue;
            }
            right_absorbs &= g.successors(w).iter().all(|u| r.contains(&[z, u]));
            left_absorbs &= g.predecessors(z).iter().all(|u| r.contains(&[u, w]));
        }
    }
    let compatible = gf.is_compatible();
    Ok(PreorderProjection {
        compatible,
        right_absorbs,
        left_absorbs,
        agrees: compatible == (right_absorbs && left_absorbs),
    })
}

pub fn preorder_projection_check(gf: &GraphFrame) -> Result<bool> {
    Ok(preorder_projection(gf)?.agrees)
}

/// Associated graph frame of a finite normal algebra, on the graph of disjoint
/// filter/ideal pairs. Returns the frame and the embedding `L → X⁺`.
pub fn frame_from_algebra(alg: &LeAlgebra) -> Result<(GraphFrame, Vec<usize>)> {
    check_normal(alg)?;
    let l = alg.lattice();
    let lg = lattice_graph(l)?;
    let a: Vec<usize> = lg.states.iter().map(|s| s.filter_base).collect();
    let b: Vec<usize> = lg.states.iter().map(|s| s.ideal_base).collect();
    let n = lg.states.len();
    let relations = alg
        .signature()
        .connectives()
        .iter()
        .enumerate()
        .map(|(ci, c)| {
            let op = alg.op(ci);
            let mut args = vec![0; c.arity()];
            Relation::from_fn(&vec![n; c.arity() + 1], |t| {
                for (i, (tone, &zi)) in c.tones.iter().zip(&t[1..]).enumerate() {
                    args[i] = match (c.family, tone) {
                        (Family::F, Tone::Monotone) | (Family::G, Tone::Antitone) => a[zi],
                        (Family::F, Tone::Antitone) | (Family::G, Tone::Monotone) => b[zi],
                    };
                }
                let val = op.get(&args);
                match c.family {
                    Family::F => !l.leq(val, b[t[0]]),
                    Family::G => !l.leq(a[t[0]], val),
                }
            })
        })
        .collect();
    let gf = GraphFrame::new(lg.graph.clone(), alg.signature().clone(), relations)?;
    let x_plus = ConceptLattice::new(gf.core.polarity())?;
    let emb = lg.embedding(l, &x_plus)?;
    Ok((gf, emb))
}

/// Coordinate sides of a graph relation's complement, for callers that build relations by hand.
pub fn coordinate_sides(gf: &GraphFrame, name: &str) -> Option<Vec<Side>> {
    gf.signature().get(name).map(sides)
}
