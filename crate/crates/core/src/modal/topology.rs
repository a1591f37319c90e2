//! Alexandrov topologies on finite world sets and their correspondence with
//! S4 relations: the open sets of `R` are its up-closed sets, and the minimal
//! neighbourhood of `w` is `R(w)`.

use fixedbitset::FixedBitSet;

use super::formula::Formula;
use super::kripke::{is_reflexive, is_transitive, Relation, TopoModel};
use super::ModalError;

/// A finite Alexandrov topology, stored by the minimal open neighbourhood of
/// each point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Topology {
    minimal: Vec<FixedBitSet>,
}

impl Topology {
    /// Builds the topology from an explicit family of open sets, checking that
    /// it contains `∅` and the whole space and is closed under union and
    /// intersection.
    pub fn from_opens(points: usize, opens: &[FixedBitSet]) -> Result<Self, ModalError> {
        if opens.iter().any(|o| o.len() != points) {
            return Err(ModalError::NotAlexandrov("open set of the wrong size".into()));
        }
        if !opens.iter().any(|o| o.is_clear()) {
            return Err(ModalError::NotAlexandrov("empty set is not open".into()));
        }
        if !opens.iter().any(|o| o.count_ones(..) == points) {
            return Err(ModalError::NotAlexandrov("whole space is not open".into()));
        }
        for a in opens {
            for b in opens {
                let mut u = a.clone();
                u.union_with(b);
                let mut i = a.clone();
                i.intersect_with(b);
                if !opens.contains(&u) {
                    return Err(ModalError::NotAlexandrov("not closed under union".into()));
                }
                if !opens.contains(&i) {
                    return Err(ModalError::NotAlexandrov("not closed under intersection".into()));
                }
            }
        }
        let minimal = (0..points)
            .map(|w| {
                let mut m = FixedBitSet::with_capacity(points);
                m.insert_range(..);
                for o in opens.iter().filter(|o| o.contains(w)) {
                    m.intersect_with(o);
                }
                m
            })
            .collect();
        Ok(Topology { minimal })
    }

    pub fn discrete(points: usize) -> Self {
        Topology {
            minimal: super::kripke::identity_relation(points),
        }
    }

    pub fn indiscrete(points: usize) -> Self {
        Topology {
            minimal: super::kripke::total_relation(points),
        }
    }

    pub fn points(&self) -> usize {
        self.minimal.len()
    }

    pub fn minimal_neighbourhood(&self, w: usize) -> &FixedBitSet {
        &self.minimal[w]
    }

    pub fn is_open(&self, set: &FixedBitSet) -> bool {
        set.ones().all(|w| self.minimal[w].is_subset(set))
    }

    /// Union of the open sets contained in `set`.
    pub fn interior(&self, set: &FixedBitSet) -> FixedBitSet {
        let mut out = FixedBitSet::with_capacity(self.points());
        for w in set.ones() {
            if self.minimal[w].is_subset(set) {
                out.union_with(&self.minimal[w]);
            }
        }
        out
    }

    /// Every open set, by closing the basis under unions. Exponential; meant
    /// for small spaces.
    pub fn opens(&self) -> Vec<FixedBitSet> {
        let mut out = vec![FixedBitSet::with_capacity(self.points())];
        for m in &self.minimal {
            let extra: Vec<FixedBitSet> = out
                .iter()
                .map(|o| {
                    let mut u = o.clone();
                    u.union_with(m);
                    u
                })
                .collect();
            for e in extra {
                if !out.contains(&e) {
                    out.push(e);
                }
            }
        }
        out.sort_by_key(|o| (o.count_ones(..), o.ones().collect::<Vec<_>>()));
        out
    }

    pub fn is_discrete(&self) -> bool {
        self.minimal.iter().all(|m| m.count_ones(..) == 1)
    }

    pub fn is_indiscrete(&self) -> bool {
        self.minimal.iter().all(|m| m.count_ones(..) == self.points())
    }

    /// Coarsest topology finer than every member.
    pub fn join<'a>(points: usize, topologies: impl IntoIterator<Item = &'a Topology>) -> Self {
        let mut minimal = super::kripke::total_relation(points);
        for t in topologies {
            for (m, n) in minimal.iter_mut().zip(&t.minimal) {
                m.intersect_with(n);
            }
        }
        Topology { minimal }
    }
}

/// The Alexandrov topology of an S4 relation.
pub fn topology_of(relation: &Relation) -> Result<Topology, ModalError> {
    if !is_reflexive(relation) || !is_transitive(relation) {
        return Err(ModalError::NotS4 {
            agent: String::new(),
            reason: "relation is not a preorder".into(),
        });
    }
    Ok(Topology {
        minimal: relation.clone(),
    })
}

/// The specialization preorder: `w R v` iff `v` lies in every open set
/// containing `w`.
pub fn relation_of(topology: &Topology) -> Relation {
    topology.minimal.clone()
}

/// Per-agent topologies of a model, in agent order.
pub fn topologies(model: &TopoModel) -> Result<Vec<Topology>, ModalError> {
    model
        .agents()
        .iter()
        .enumerate()
        .map(|(i, a)| {
            topology_of(model.relation(i)).map_err(|_| ModalError::NotS4 {
                agent: a.clone(),
                reason: "relation is not a preorder".into(),
            })
        })
        .collect()
}

/// Evaluates `formula` with interior semantics: `K{i}` is the interior in
/// `τ_i`, `E{G}` the intersection of the members' interiors, and `D{G}` the
/// interior in the join of the members' topologies.
pub fn eval_topological(model: &TopoModel, formula: &Formula) -> Result<FixedBitSet, ModalError> {
    let taus = topologies(model)?;
    eval_with(model, &taus, formula)
}

fn eval_with(model: &TopoModel, taus: &[Topology], formula: &Formula) -> Result<FixedBitSet, ModalError> {
    let n = model.world_count();
    let group = |g: &std::collections::BTreeSet<String>| -> Result<Vec<&Topology>, ModalError> {
        if g.is_empty() {
            return Err(ModalError::EmptyAgentSet);
        }
        g.iter().map(|a| Ok(&taus[model.agent_index(a)?])).collect()
    };
    Ok(match formula {
        Formula::Var(_) => model.eval(formula)?,
        Formula::Not(f) => {
            let mut s = eval_with(model, taus, f)?;
            s.toggle_range(..);
            s
        }
        Formula::And(a, b) => {
            let mut s = eval_with(model, taus, a)?;
            s.intersect_with(&eval_with(model, taus, b)?);
            s
        }
        Formula::Or(a, b) => {
            let mut s = eval_with(model, taus, a)?;
            s.union_with(&eval_with(model, taus, b)?);
            s
        }
        Formula::Implies(a, b) => {
            let mut s = eval_with(model, taus, a)?;
            s.toggle_range(..);
            s.union_with(&eval_with(model, taus, b)?);
            s
        }
        Formula::Iff(a, b) => {
            let (x, y) = (eval_with(model, taus, a)?, eval_with(model, taus, b)?);
            let mut s = FixedBitSet::with_capacity(n);
            for w in 0..n {
                s.set(w, x.contains(w) == y.contains(w));
            }
            s
        }
        Formula::Know(a, f) => taus[model.agent_index(a)?].interior(&eval_with(model, taus, f)?),
        Formula::Mutual(g, f) => {
            let inner = eval_with(model, taus, f)?;
            let mut s = model.full_set();
            for t in group(g)? {
                s.intersect_with(&t.interior(&inner));
            }
            s
        }
        Formula::Distributed(g, f) => {
            let inner = eval_with(model, taus, f)?;
            Topology::join(n, group(g)?).interior(&inner)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modal::kripke::{identity_relation, total_relation};

    fn set(n: usize, ws: &[usize]) -> FixedBitSet {
        let mut s = FixedBitSet::with_capacity(n);
        for w in ws {
            s.insert(*w);
        }
        s
    }

    #[test]
    fn identity_is_discrete_total_is_indiscrete() {
        assert!(topology_of(&identity_relation(3)).unwrap().is_discrete());
        assert!(topology_of(&total_relation(3)).unwrap().is_indiscrete());
        assert_eq!(Topology::discrete(3).opens().len(), 8);
        assert_eq!(Topology::indiscrete(3).opens().len(), 2);
    }

    #[test]
    fn chain_opens_are_up_sets() {
        // 0 ≤ 1 ≤ 2
        let r = vec![set(3, &[0, 1, 2]), set(3, &[1, 2]), set(3, &[2])];
        let t = topology_of(&r).unwrap();
        let opens = t.opens();
        assert_eq!(opens, vec![set(3, &[]), set(3, &[2]), set(3, &[1, 2]), set(3, &[0, 1, 2])]);
        let back = Topology::from_opens(3, &opens).unwrap();
        assert_eq!(relation_of(&back), r);
        assert_eq!(t.interior(&set(3, &[0, 2])), set(3, &[2]));
    }

    #[test]
    fn rejects_non_topologies() {
        let opens = vec![set(2, &[]), set(2, &[0]), set(2, &[1])];
        assert!(matches!(Topology::from_opens(2, &opens), Err(ModalError::NotAlexandrov(_))));
        let opens = vec![set(2, &[0]), set(2, &[0, 1])];
        assert!(matches!(Topology::from_opens(2, &opens), Err(ModalError::NotAlexandrov(_))));
        let r = vec![set(2, &[1]), set(2, &[1])];
        assert!(matches!(topology_of(&r), Err(ModalError::NotS4 { .. })));
    }
}
