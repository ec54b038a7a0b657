//! Sequent validity, countermodel search, and first-order frame conditions.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{BoundedLattice, Compiled, ConceptAlgebra, LeStructure, Valuation};
use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::gen;
use crate::graph::GraphFrame;
use crate::lattice::{ConceptLattice, Polarity};
use crate::polarity::{CompatibilityReport, PolarityFrame};
use crate::relation::Relation;
use crate::representation::ReflexiveGraph;
use crate::syntax::{parse_sequent, Sequent, Signature};

/// Largest number of valuations a validity check enumerates.
pub const VALUATION_CAP: u128 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AnyFrame {
    Polarity(PolarityFrame),
    Graph(GraphFrame),
}

impl AnyFrame {
    pub fn signature(&self) -> &Signature {
        match self {
            AnyFrame::Polarity(f) => f.signature(),
            AnyFrame::Graph(f) => f.signature(),
        }
    }

    pub fn kind(&self) -> FrameKind {
        match self {
            AnyFrame::Polarity(_) => FrameKind::Polarity,
            AnyFrame::Graph(_) => FrameKind::Graph,
        }
    }

    pub fn complex_algebra(&self) -> Result<ConceptAlgebra> {
        match self {
            AnyFrame::Polarity(f) => f.complex_algebra(),
            AnyFrame::Graph(f) => f.complex_algebra(),
        }
    }

    pub fn compatibility_check(&self) -> CompatibilityReport {
        match self {
            AnyFrame::Polarity(f) => f.compatibility_check(),
            AnyFrame::Graph(f) => f.compatibility_check(),
        }
    }

    /// The polarity whose concept lattice carries the complex algebra.
    pub fn polarity(&self) -> &Polarity {
        match self {
            AnyFrame::Polarity(f) => f.polarity(),
            AnyFrame::Graph(f) => f.complement_frame().polarity(),
        }
    }

    /// Carrier size used to order search candidates.
    pub fn size(&self) -> usize {
        let p = self.polarity();
        p.num_objects().max(p.num_attributes())
    }

    /// Bit string of the incidence (or edge) relation followed by every frame relation.
    pub fn encoding(&self) -> String {
        let bit = |b: bool| if b { '1' } else { '0' };
        let mut s = String::new();
        let rels = match self {
            AnyFrame::Polarity(f) => {
                let p = f.polarity();
                for a in 0..p.num_objects() {
                    s.extend((0..p.num_attributes()).map(|x| bit(p.incident(a, x))));
                }
                f.relations()
            }
            AnyFrame::Graph(f) => {
                let g = f.graph();
                for a in 0..g.len() {
                    s.extend((0..g.len()).map(|b| bit(g.edge(a, b))));
                }
                f.relations()
            }
        };
        for r in rels {
            s.push('|');
            crate::relation::for_each_tuple(r.dims(), |t| s.push(bit(r.contains(t))));
        }
        s
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FrameKind {
    Polarity,
    Graph,
}

/// A valuation under which the left side of a sequent is not below the right side.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Countermodel {
    pub sequent: String,
    /// letter and concept label, in letter order
    pub assignment: Vec<(String, String)>,
    pub lhs: String,
    pub rhs: String,
    #[serde(skip)]
    pub valuation: Valuation,
    #[serde(skip)]
    pub lhs_concept: usize,
    #[serde(skip)]
    pub rhs_concept: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidityReport {
    pub sequent: String,
    pub valid: bool,
    pub valuations_checked: u64,
    pub countermodel: Option<Countermodel>,
}

/// Number of valuations of `k` letters into `size` concepts, if within the cap.
fn valuation_count(size: usize, k: usize) -> Result<u128> {
    let required = (size as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
    if required > VALUATION_CAP {
        return Err(Error::limit("valuations (|lattice|^letters)", VALUATION_CAP, required));
    }
    Ok(required)
}

/// Checks `v̄(lhs) ≤ v̄(rhs)` for every valuation of the sequent's letters, taken in
/// odometer order over sorted letters. The first failure is returned.
pub fn valid_in_algebra(alg: &ConceptAlgebra, s: &Sequent, var_budget: Option<usize>) -> Result<ValidityReport> {
    s.check(alg.signature())?;
    let mut letters = s.prop_vars();
    letters.sort();
    if let Some(k) = var_budget {
        if letters.len() > k {
            return Err(Error::limit("proposition letters", k as u128, letters.len() as u128));
        }
    }
    let n = alg.size();
    valuation_count(n, letters.len())?;
    let lhs = Compiled::new(alg, &s.lhs, &letters)?;
    let rhs = Compiled::new(alg, &s.rhs, &letters)?;
    let mut scratch = Vec::new();
    let mut t = vec![0usize; letters.len()];
    let mut checked = 0u64;
    loop {
        checked += 1;
        let l = lhs.run(alg, &t, &mut scratch);
        let r = rhs.run(alg, &t, &mut scratch);
        if !alg.leq(l, r) {
            let lat = alg.lattice();
            let valuation = Valuation::from_pairs(&letters.iter().cloned().zip(t.iter().copied()).collect::<Vec<_>>());
            return Ok(ValidityReport {
                sequent: s.to_string(),
                valid: false,
                valuations_checked: checked,
                countermodel: Some(Countermodel {
                    sequent: s.to_string(),
                    assignment: letters.iter().zip(&t).map(|(p, &c)| (p.clone(), lat.label(c))).collect(),
                    lhs: lat.label(l),
                    rhs: lat.label(r),
                    valuation,
                    lhs_concept: l,
                    rhs_concept: r,
                }),
            });
        }
        // odometer, last letter fastest
        let mut i = t.len();
        loop {
            if i == 0 {
                return Ok(ValidityReport {
                    sequent: s.to_string(),
                    valid: true,
                    valuations_checked: checked,
                    countermodel: None,
                });
            }
            i -= 1;
            t[i] += 1;
            if t[i] < n {
                break;
            }
            t[i] = 0;
        }
    }
}

pub fn valid_on_frame(fr: &AnyFrame, s: &Sequent, var_budget: Option<usize>) -> Result<ValidityReport> {
    valid_in_algebra(&fr.complex_algebra()?, s, var_budget)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchParams {
    pub kind: FrameKind,
    /// largest carrier (polarity side or graph node count)
    pub max_size: usize,
    pub seed: u64,
    /// number of generated frames
    pub budget: usize,
    /// keep unary relations inside `I` (polarity) or above `E` (graph)
    pub factive: bool,
}

impl Default for SearchParams {
    fn default() -> Self {
        Self {
            kind: FrameKind::Polarity,
            max_size: 3,
            seed: 0,
            budget: 1000,
            factive: false,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SearchOutcome {
    pub frames_examined: usize,
    /// candidates whose valuation space exceeded the cap
    pub frames_skipped: usize,
    pub found: Option<(AnyFrame, Countermodel)>,
}

/// Candidate `i` of the stream: generated from stream `i` of a ChaCha generator keyed by the seed.
pub fn candidate(sig: &Signature, p: &SearchParams, i: usize) -> Result<AnyFrame> {
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    rng.set_stream(i as u64);
    let density = rng.random_range(0.2..0.8);
    let rel_density = rng.random_range(0.0..0.6);
    Ok(match p.kind {
        FrameKind::Polarity => {
            let na = rng.random_range(1..=p.max_size);
            let nx = rng.random_range(1..=p.max_size);
            let pol = gen::random_polarity(&mut rng, na, nx, density);
            AnyFrame::Polarity(gen::random_polarity_frame(&mut rng, pol, sig, rel_density, p.factive)?)
        }
        FrameKind::Graph => {
            let n = rng.random_range(1..=p.max_size);
            let g = gen::random_graph(&mut rng, n, density);
            AnyFrame::Graph(gen::random_graph_frame(&mut rng, g, sig, rel_density, p.factive)?)
        }
    })
}

/// Generates `budget` frames over the connectives the sequent uses, orders them by
/// (size, encoding), and returns the first that falsifies the sequent.
pub fn countermodel_search(s: &Sequent, sig: &Signature, p: &SearchParams) -> Result<SearchOutcome> {
    s.check(sig)?;
    if p.max_size == 0 || p.max_size > crate::lattice::CARRIER_CAP {
        return Err(Error::Invalid(format!("max size must lie in 1..={}", crate::lattice::CARRIER_CAP)));
    }
    let sig = sig.restrict_to(&s.connectives_used());
    let mut cands = (0..p.budget)
        .map(|i| {
            let f = candidate(&sig, p, i)?;
            Ok((f.size(), f.encoding(), f))
        })
        .collect::<Result<Vec<_>>>()?;
    cands.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
    cands.dedup_by(|a, b| a.1 == b.1);
    let mut out = SearchOutcome {
        frames_examined: 0,
        frames_skipped: 0,
        found: None,
    };
    for (_, _, f) in cands {
        out.frames_examined += 1;
        let alg = f.complex_algebra()?;
        match valid_in_algebra(&alg, s, None) {
            Ok(rep) => {
                if let Some(cm) = rep.countermodel {
                    out.found = Some((f, cm));
                    return Ok(out);
                }
            }
            Err(e) if e.is_resource_limit() => out.frames_skipped += 1,
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

fn box_relation<'a>(sig: &Signature, rels: &'a [Relation]) -> Result<&'a Relation> {
    let i = sig
        .position("box")
        .ok_or_else(|| Error::UnknownConnective("box".into()))?;
    if sig.connectives()[i].arity() != 1 {
        return Err(Error::Precondition("`box` must be unary".into()));
    }
    Ok(&rels[i])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PolarityCondition {
    /// `R_□ ⊆ I`
    Factivity,
    /// `I ⊆ R_□`
    Omniscience,
}

pub fn polarity_condition(fr: &PolarityFrame, which: PolarityCondition) -> Result<bool> {
    let r = box_relation(fr.signature(), fr.relations())?;
    let p = fr.polarity();
    let mut ok = true;
    for a in 0..p.num_objects() {
        for x in 0..p.num_attributes() {
            ok &= match which {
                PolarityCondition::Factivity => !r.contains(&[a, x]) || p.incident(a, x),
                PolarityCondition::Omniscience => !p.incident(a, x) || r.contains(&[a, x]),
            };
        }
    }
    Ok(ok)
}

/// `a (R •_E S) x iff ∃y (aRy ∧ ∀b (bEy ⇒ bSx))`
pub fn bullet_e(r: &Relation, s: &Relation, g: &ReflexiveGraph) -> Relation {
    let n = g.len();
    // S-predecessors of x must include every E-predecessor of y
    Relation::from_fn(&[n, n], |t| {
        let (a, x) = (t[0], t[1]);
        (0..n).any(|y| r.contains(&[a, y]) && g.predecessors(y).iter().all(|b| s.contains(&[b, x])))
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GraphCondition {
    /// `E ⊆ R_□`
    EReflexivity,
    /// `R_□ ⊆ E`
    EOmniscience,
    /// `R_□ •_E R_□ ⊆ R_□`
    ETransitivity,
}

pub fn graph_condition(gf: &GraphFrame, which: GraphCondition) -> Result<bool> {
    let r = box_relation(gf.signature(), gf.relations())?;
    let g = gf.graph();
    let n = g.len();
    let e = Relation::from_fn(&[n, n], |t| g.edge(t[0], t[1]));
    Ok(match which {
        GraphCondition::EReflexivity => e.is_subset(r),
        GraphCondition::EOmniscience => r.is_subset(&e),
        GraphCondition::ETransitivity => bullet_e(r, r, g).is_subset(r),
    })
}

/// Axioms of rough-concept approximation spaces, by property.
pub const APPROXIMATION_AXIOMS: [(&str, &str); 7] = [
    ("seriality", "box p |- dia p"),
    ("reflexivity", "box p |- p"),
    ("reflexivity", "p |- dia p"),
    ("transitivity", "box p |- box box p"),
    ("transitivity", "dia dia p |- dia p"),
    ("symmetry", "p |- box dia p"),
    ("symmetry", "dia box p |- p"),
];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomVerdict {
    pub property: String,
    pub sequent: String,
    pub valid: bool,
    pub countermodel: Option<Countermodel>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OperatorLaws {
    /// `□c ≤ c` for interior, `c ≤ ◇c` for closure
    pub extensive: bool,
    pub monotone: bool,
    pub idempotent: bool,
}

impl OperatorLaws {
    pub fn all(&self) -> bool {
        self.extensive && self.monotone && self.idempotent
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ApproximationReport {
    pub axioms: Vec<AxiomVerdict>,
    pub box_interior: OperatorLaws,
    pub dia_closure: OperatorLaws,
    /// `a R_□ x iff x R_◇ a` for all `a`, `x`
    pub adjunction: bool,
}

fn operator_laws(alg: &ConceptAlgebra, op: usize, interior: bool) -> OperatorLaws {
    let n = alg.size();
    let f = |c: usize| alg.op(op).get(&[c]);
    OperatorLaws {
        extensive: (0..n).all(|c| if interior { alg.leq(f(c), c) } else { alg.leq(c, f(c)) }),
        monotone: (0..n).all(|c| (0..n).all(|d| !alg.leq(c, d) || alg.leq(f(c), f(d)))),
        idempotent: (0..n).all(|c| f(f(c)) == f(c)),
    }
}

pub fn approximation_space_check(fr: &PolarityFrame) -> Result<ApproximationReport> {
    let sig = fr.signature();
    let (bi, di) = match (sig.position("box"), sig.position("dia")) {
        (Some(b), Some(d)) => (b, d),
        (None, _) => return Err(Error::UnknownConnective("box".into())),
        (_, None) => return Err(Error::UnknownConnective("dia".into())),
    };
    let alg = fr.complex_algebra()?;
    let axioms = APPROXIMATION_AXIOMS
        .iter()
        .map(|(prop, text)| {
            let s = parse_sequent(sig, text)?;
            let rep = valid_in_algebra(&alg, &s, None)?;
            Ok(AxiomVerdict {
                property: prop.to_string(),
                sequent: s.to_string(),
                valid: rep.valid,
                countermodel: rep.countermodel,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let p = fr.polarity();
    let (rb, rd) = (&fr.relations()[bi], &fr.relations()[di]);
    let adjunction = (0..p.num_objects())
        .all(|a| (0..p.num_attributes()).all(|x| rb.contains(&[a, x]) == rd.contains(&[x, a])));
    Ok(ApproximationReport {
        axioms,
        box_interior: operator_laws(&alg, bi, true),
        dia_closure: operator_laws(&alg, di, false),
        adjunction,
    })
}

/// Does every concept of `X⁺` satisfy weak persistence along every edge?
/// Formula values are concepts, so this covers every formula and valuation.
pub fn weak_persistence_frame(g: &ReflexiveGraph) -> Result<bool> {
    let l = crate::representation::graph_lattice(g)?;
    Ok((0..l.len()).all(|c| crate::graph::weakly_persistent(g, l.extent(c), l.intent(c))))
}

/// `zEz′ ∧ z ∈ ext ⇒ z′ ∈ ext` for every concept extent.
pub fn persistent_extents(g: &ReflexiveGraph, l: &ConceptLattice) -> bool {
    (0..l.len()).all(|c| {
        let e: &BitSet = l.extent(c);
        e.iter().all(|z| g.successors(z).is_subset(e))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_sequent;

    fn plays_frame() -> AnyFrame {
        let p = Polarity::new(
            vec!["a".into(), "b".into(), "c".into()],
            vec!["x".into(), "y".into(), "z".into()],
            [("a", "z"), ("b", "x"), ("c", "x"), ("c", "y")],
        )
        .unwrap();
        AnyFrame::Polarity(PolarityFrame::new(p, Signature::empty(), vec![]).unwrap())
    }

    #[test]
    fn distributivity_fails_on_plays() {
        let f = plays_frame();
        let s = parse_sequent(&Signature::empty(), "p /\\ (q \\/ r) |- (p /\\ q) \\/ (p /\\ r)").unwrap();
        let rep = valid_on_frame(&f, &s, None).unwrap();
        assert!(!rep.valid);
        let cm = rep.countermodel.unwrap();
        // canonical order: (∅,xyz) (a,z) (c,xy) (bc,x) (abc,∅); first failure in odometer order
        assert_eq!(cm.assignment, vec![
            ("p".to_string(), "b,c|x".to_string()),
            ("q".to_string(), "a|z".to_string()),
            ("r".to_string(), "c|x,y".to_string()),
        ]);
        assert!(matches!(valid_on_frame(&f, &s, Some(2)), Err(Error::ResourceLimit { .. })));
        let pp = parse_sequent(&Signature::empty(), "p |- p").unwrap();
        assert!(valid_on_frame(&f, &pp, None).unwrap().valid);
    }

    #[test]
    fn bullet_reduces_to_composition_on_discrete() {
        let g = ReflexiveGraph::discrete(3);
        let r = Relation::from_tuples(&[3, 3], [vec![0, 1], vec![1, 2]]).unwrap();
        let comp = Relation::from_fn(&[3, 3], |t| (0..3).any(|y| r.contains(&[t[0], y]) && r.contains(&[y, t[1]])));
        assert_eq!(bullet_e(&r, &r, &g), comp);
        assert_eq!(bullet_e(&Relation::empty(&[3, 3]), &r, &g).count(), 0);
    }

    #[test]
    fn search_finds_distributivity_failure() {
        let sig = Signature::empty();
        let s = parse_sequent(&sig, "p /\\ (q \\/ r) |- (p /\\ q) \\/ (p /\\ r)").unwrap();
        let out = countermodel_search(&s, &sig, &SearchParams { seed: 42, ..Default::default() }).unwrap();
        let (f, cm) = out.found.unwrap();
        assert!(f.size() <= 3);
        assert!(!valid_on_frame(&f, &s, None).unwrap().valid);
        assert!(!cm.assignment.is_empty());
        let pp = parse_sequent(&sig, "p |- p").unwrap();
        assert!(countermodel_search(&pp, &sig, &SearchParams { budget: 50, ..Default::default() }).unwrap().found.is_none());
    }
}
