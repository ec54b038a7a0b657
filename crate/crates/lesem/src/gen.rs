//! Seeded generators for polarities, graphs, compatible frames, normal algebras and formulas.
//!
//! Compatible relations come from a closure: every point section is replaced by its
//! Galois closure until nothing changes. Point sections only grow, so this terminates,
//! and the fixpoint is the least compatible relation containing the seed relation.
//! Intersections of compatible relations are compatible, which gives frames below a
//! fixed compatible relation such as `I`.

use rand::Rng;

use crate::algebra::LeAlgebra;
use crate::error::Result;
use crate::graph::GraphFrame;
use crate::lattice::{ConceptLattice, Polarity};
use crate::polarity::{relation_dims, PolarityFrame};
use crate::relation::{for_each_tuple, sides, Relation, Side};
use crate::representation::{FiniteLattice, ReflexiveGraph};
use crate::syntax::{Connective, Formula, Signature};

pub fn random_polarity<R: Rng + ?Sized>(rng: &mut R, na: usize, nx: usize, density: f64) -> Polarity {
    Polarity::from_fn(na, nx, |_, _| rng.random_bool(density))
}

/// Reflexive graph on `n` nodes; off-diagonal edges appear with probability `density`.
pub fn random_graph<R: Rng + ?Sized>(rng: &mut R, n: usize, density: f64) -> ReflexiveGraph {
    let edges: Vec<Vec<bool>> = (0..n).map(|_| (0..n).map(|_| rng.random_bool(density)).collect()).collect();
    ReflexiveGraph::from_fn(n, |i, j| edges[i][j])
}

/// Reflexive transitive graph.
pub fn random_preorder<R: Rng + ?Sized>(rng: &mut R, n: usize, density: f64) -> ReflexiveGraph {
    random_graph(rng, n, density).transitive_closure()
}

/// Reflexive antisymmetric graph: each unordered pair gets at most one direction.
pub fn random_antisymmetric_graph<R: Rng + ?Sized>(rng: &mut R, n: usize, density: f64) -> ReflexiveGraph {
    let mut edges = std::collections::HashSet::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.random_bool(density) {
                edges.insert(if rng.random_bool(0.5) { (i, j) } else { (j, i) });
            }
        }
    }
    ReflexiveGraph::from_fn(n, |i, j| edges.contains(&(i, j)))
}

pub fn random_relation<R: Rng + ?Sized>(rng: &mut R, dims: &[usize], density: f64) -> Relation {
    Relation::from_fn(dims, |_| rng.random_bool(density))
}

/// Least relation containing `r` whose point sections are all Galois-stable.
pub fn compatible_closure(p: &Polarity, sides: &[Side], mut r: Relation) -> Relation {
    let dims = r.dims().to_vec();
    loop {
        let mut changed = false;
        for k in 0..dims.len() {
            let mut other = dims.clone();
            other[k] = 1;
            for_each_tuple(&other, |point| {
                let s = r.point_section(k, point);
                let c = sides[k].close(p, &s);
                if c != s {
                    changed = true;
                    let mut t = point.to_vec();
                    for m in c.difference(&s).iter() {
                        t[k] = m;
                        r.insert(&t);
                    }
                }
            });
        }
        if !changed {
            return r;
        }
    }
}

/// Random compatible relation for `c`; with `below`, the result is intersected with it
/// (which must itself be compatible).
pub fn random_compatible_relation<R: Rng + ?Sized>(
    rng: &mut R,
    p: &Polarity,
    c: &Connective,
    density: f64,
    below: Option<&Relation>,
) -> Relation {
    let sd = sides(c);
    let seed = random_relation(rng, &relation_dims(p, c), density);
    let r = compatible_closure(p, &sd, seed);
    match below {
        Some(b) => r.intersection(b),
        None => r,
    }
}

/// `I` itself, as a relation of the shape `R_□ ⊆ A × X` or `R_◇ ⊆ X × A`.
pub fn incidence_relation(p: &Polarity, c: &Connective) -> Option<Relation> {
    match sides(c).as_slice() {
        [Side::Objects, Side::Attributes] => Some(Relation::from_fn(&relation_dims(p, c), |t| p.incident(t[0], t[1]))),
        [Side::Attributes, Side::Objects] => Some(Relation::from_fn(&relation_dims(p, c), |t| p.incident(t[1], t[0]))),
        _ => None,
    }
}

/// Random compatible polarity frame. With `below_incidence`, every unary relation whose
/// shape matches `I` is kept inside `I`.
pub fn random_polarity_frame<R: Rng + ?Sized>(
    rng: &mut R,
    p: Polarity,
    sig: &Signature,
    density: f64,
    below_incidence: bool,
) -> Result<PolarityFrame> {
    let rels = sig
        .connectives()
        .iter()
        .map(|c| {
            let below = if below_incidence { incidence_relation(&p, c) } else { None };
            random_compatible_relation(rng, &p, c, density, below.as_ref())
        })
        .collect();
    PolarityFrame::new(p, sig.clone(), rels)
}

/// Random compatible graph frame. Compatibility is a condition on complements, so the
/// complement is generated. With `above_edges`, every unary relation contains `E`.
pub fn random_graph_frame<R: Rng + ?Sized>(
    rng: &mut R,
    g: ReflexiveGraph,
    sig: &Signature,
    density: f64,
    above_edges: bool,
) -> Result<GraphFrame> {
    let p = crate::representation::graph_polarity(&g);
    let rels = sig
        .connectives()
        .iter()
        .map(|c| {
            let below = if above_edges { incidence_relation(&p, c) } else { None };
            random_compatible_relation(rng, &p, c, 1.0 - density, below.as_ref()).complement()
        })
        .collect();
    GraphFrame::new(g, sig.clone(), rels)
}

/// Random lattice with at most `max` elements, as the concept lattice of a small random polarity.
pub fn random_lattice<R: Rng + ?Sized>(rng: &mut R, max: usize) -> FiniteLattice {
    loop {
        let na = rng.random_range(1..=4);
        let nx = rng.random_range(1..=4);
        let p = random_polarity(rng, na, nx, 0.5);
        let l = ConceptLattice::new(&p).expect("tiny carriers");
        if l.len() <= max {
            return FiniteLattice::from_concept_lattice(&l);
        }
    }
}

/// Random normal algebra with at most `max` elements: the complex algebra of a random
/// compatible frame.
pub fn random_normal_algebra<R: Rng + ?Sized>(rng: &mut R, sig: &Signature, max: usize) -> Result<LeAlgebra> {
    loop {
        let na = rng.random_range(1..=4);
        let nx = rng.random_range(1..=4);
        let p = random_polarity(rng, na, nx, 0.5);
        if ConceptLattice::new(&p)?.len() > max {
            continue;
        }
        let density = rng.random_range(0.1..0.9);
        let fr = random_polarity_frame(rng, p, sig, density, false)?;
        return Ok(fr.complex_algebra()?.to_le_algebra());
    }
}

/// Random formula of depth at most `depth` over the given letters.
pub fn random_formula<R: Rng + ?Sized>(rng: &mut R, sig: &Signature, vars: &[&str], depth: usize) -> Formula {
    let leaf = |rng: &mut R| match rng.random_range(0..10) {
        0 => Formula::Top,
        1 => Formula::Bot,
        _ => Formula::var(vars[rng.random_range(0..vars.len())]),
    };
    if depth == 0 || rng.random_bool(0.2) {
        return leaf(rng);
    }
    let choices = 2 + sig.len();
    match rng.random_range(0..choices) {
        0 => Formula::and(
            random_formula(rng, sig, vars, depth - 1),
            random_formula(rng, sig, vars, depth - 1),
        ),
        1 => Formula::or(
            random_formula(rng, sig, vars, depth - 1),
            random_formula(rng, sig, vars, depth - 1),
        ),
        i => {
            let c = &sig.connectives()[i - 2];
            let args = (0..c.arity()).map(|_| random_formula(rng, sig, vars, depth - 1)).collect();
            Formula::app(&c.name, args)
        }
    }
}
