use std::collections::BTreeMap;

use fixedbitset::FixedBitSet;

use super::formula::Formula;
use super::ModalError;

/// Successor sets `R(w)` of a finite relation, one bitset per world.
pub type Relation = Vec<FixedBitSet>;

pub fn identity_relation(n: usize) -> Relation {
    (0..n)
        .map(|w| {
            let mut s = FixedBitSet::with_capacity(n);
            s.insert(w);
            s
        })
        .collect()
}

pub fn total_relation(n: usize) -> Relation {
    (0..n)
        .map(|_| {
            let mut s = FixedBitSet::with_capacity(n);
            s.insert_range(..);
            s
        })
        .collect()
}

/// Image `R(A) = ⋃_{w ∈ A} R(w)`.
pub fn image(relation: &Relation, set: &FixedBitSet) -> FixedBitSet {
    let mut out = FixedBitSet::with_capacity(relation.len());
    for w in set.ones() {
        out.union_with(&relation[w]);
    }
    out
}

/// `{w : R(w) ⊆ A}`.
pub fn necessity(relation: &Relation, set: &FixedBitSet) -> FixedBitSet {
    let mut out = FixedBitSet::with_capacity(relation.len());
    for (w, succ) in relation.iter().enumerate() {
        if succ.is_subset(set) {
            out.insert(w);
        }
    }
    out
}

pub fn is_reflexive(relation: &Relation) -> bool {
    relation.iter().enumerate().all(|(w, s)| s.contains(w))
}

pub fn is_transitive(relation: &Relation) -> bool {
    relation.iter().all(|s| image(relation, s).is_subset(s))
}

/// Pointwise union of relations; the relation of "everyone knows".
pub fn union_relation<'a>(n: usize, relations: impl IntoIterator<Item = &'a Relation>) -> Relation {
    let mut out: Relation = (0..n).map(|_| FixedBitSet::with_capacity(n)).collect();
    for r in relations {
        for (o, s) in out.iter_mut().zip(r) {
            o.union_with(s);
        }
    }
    out
}

/// Pointwise intersection; the relation of distributed knowledge.
pub fn intersection_relation<'a>(
    n: usize,
    relations: impl IntoIterator<Item = &'a Relation>,
) -> Relation {
    let mut out = total_relation(n);
    for r in relations {
        for (o, s) in out.iter_mut().zip(r) {
            o.intersect_with(s);
        }
    }
    out
}

/// Finite multi-agent Kripke structure with one S4 relation per agent.
#[derive(Debug, Clone, PartialEq)]
pub struct TopoModel {
    worlds: Vec<String>,
    agents: Vec<String>,
    relations: Vec<Relation>,
    valuation: BTreeMap<String, FixedBitSet>,
}

fn index_names(kind: &str, names: &[String]) -> Result<(), ModalError> {
    for (i, n) in names.iter().enumerate() {
        if names[..i].contains(n) {
            return Err(ModalError::Duplicate(format!("{kind} {n}")));
        }
    }
    Ok(())
}

impl TopoModel {
    /// Builds a model, requiring every relation to be reflexive and transitive.
    pub fn new(
        worlds: Vec<String>,
        agents: Vec<String>,
        relations: Vec<Relation>,
        valuation: BTreeMap<String, FixedBitSet>,
    ) -> Result<Self, ModalError> {
        let model = Self::new_unchecked(worlds, agents, relations, valuation)?;
        for (a, r) in model.agents.iter().zip(&model.relations) {
            if !is_reflexive(r) {
                return Err(ModalError::NotS4 {
                    agent: a.clone(),
                    reason: "not reflexive".into(),
                });
            }
            if !is_transitive(r) {
                return Err(ModalError::NotS4 {
                    agent: a.clone(),
                    reason: "not transitive".into(),
                });
            }
        }
        Ok(model)
    }

    /// Skips the frame conditions, for building counterexamples. Shapes and
    /// names are still validated.
    pub fn new_unchecked(
        worlds: Vec<String>,
        agents: Vec<String>,
        relations: Vec<Relation>,
        valuation: BTreeMap<String, FixedBitSet>,
    ) -> Result<Self, ModalError> {
        index_names("world", &worlds)?;
        index_names("agent", &agents)?;
        let n = worlds.len();
        if n == 0 {
            return Err(ModalError::Malformed("model has no worlds".into()));
        }
        if agents.is_empty() {
            return Err(ModalError::EmptyAgentSet);
        }
        if relations.len() != agents.len()
            || relations
                .iter()
                .any(|r| r.len() != n || r.iter().any(|s| s.len() != n))
        {
            return Err(ModalError::Malformed("relation shape does not match worlds".into()));
        }
        if valuation.values().any(|s| s.len() != n) {
            return Err(ModalError::Malformed("valuation shape does not match worlds".into()));
        }
        Ok(TopoModel {
            worlds,
            agents,
            relations,
            valuation,
        })
    }

    /// Name-based constructor: relations as `(agent, [(from, to)])` and the
    /// valuation as `(variable, [world])`.
    pub fn from_pairs<S: AsRef<str>>(
        worlds: &[S],
        agents: &[S],
        relations: &[(S, Vec<(S, S)>)],
        valuation: &[(S, Vec<S>)],
        checked: bool,
    ) -> Result<Self, ModalError> {
        let worlds: Vec<String> = worlds.iter().map(|w| w.as_ref().to_string()).collect();
        let agents: Vec<String> = agents.iter().map(|a| a.as_ref().to_string()).collect();
        let n = worlds.len();
        let world = |name: &str| {
            worlds
                .iter()
                .position(|w| w == name)
                .ok_or_else(|| ModalError::UnknownWorld(name.to_string()))
        };
        let mut rels: Vec<Option<Relation>> = vec![None; agents.len()];
        for (agent, pairs) in relations {
            let a = agents
                .iter()
                .position(|x| x == agent.as_ref())
                .ok_or_else(|| ModalError::UnknownAgent(agent.as_ref().to_string()))?;
            let mut r: Relation = (0..n).map(|_| FixedBitSet::with_capacity(n)).collect();
            for (u, v) in pairs {
                r[world(u.as_ref())?].insert(world(v.as_ref())?);
            }
            rels[a] = Some(r);
        }
        let rels = rels
            .into_iter()
            .zip(&agents)
            .map(|(r, a)| r.ok_or_else(|| ModalError::Malformed(format!("no relation for agent {a}"))))
            .collect::<Result<Vec<_>, _>>()?;
        let mut val = BTreeMap::new();
        for (var, ws) in valuation {
            let mut s = FixedBitSet::with_capacity(n);
            for w in ws {
                s.insert(world(w.as_ref())?);
            }
            val.insert(var.as_ref().to_string(), s);
        }
        if checked {
            Self::new(worlds, agents, rels, val)
        } else {
            Self::new_unchecked(worlds, agents, rels, val)
        }
    }

    pub fn worlds(&self) -> &[String] {
        &self.worlds
    }

    pub fn world_count(&self) -> usize {
        self.worlds.len()
    }

    pub fn agents(&self) -> &[String] {
        &self.agents
    }

    pub fn agent_index(&self, agent: &str) -> Result<usize, ModalError> {
        self.agents
            .iter()
            .position(|a| a == agent)
            .ok_or_else(|| ModalError::UnknownAgent(agent.to_string()))
    }

    pub fn relation(&self, agent: usize) -> &Relation {
        &self.relations[agent]
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn valuation(&self) -> &BTreeMap<String, FixedBitSet> {
        &self.valuation
    }

    /// Same frame, new valuation.
    pub fn with_valuation(&self, valuation: BTreeMap<String, FixedBitSet>) -> Self {
        TopoModel {
            valuation,
            ..self.clone()
        }
    }

    pub fn is_s4(&self) -> bool {
        self.relations.iter().all(|r| is_reflexive(r) && is_transitive(r))
    }

    pub fn world_names(&self, set: &FixedBitSet) -> Vec<&str> {
        set.ones().map(|w| self.worlds[w].as_str()).collect()
    }

    pub fn full_set(&self) -> FixedBitSet {
        let mut s = FixedBitSet::with_capacity(self.world_count());
        s.insert_range(..);
        s
    }

    fn group_indices<S: AsRef<str>>(
        &self,
        group: impl IntoIterator<Item = S>,
    ) -> Result<Vec<usize>, ModalError> {
        let idx = group
            .into_iter()
            .map(|a| self.agent_index(a.as_ref()))
            .collect::<Result<Vec<_>, _>>()?;
        if idx.is_empty() {
            return Err(ModalError::EmptyAgentSet);
        }
        Ok(idx)
    }

    /// `R_{E_G}`: union of the members' relations.
    pub fn mutual_relation<S: AsRef<str>>(
        &self,
        group: impl IntoIterator<Item = S>,
    ) -> Result<Relation, ModalError> {
        let idx = self.group_indices(group)?;
        Ok(union_relation(self.world_count(), idx.iter().map(|i| &self.relations[*i])))
    }

    /// `R_{D_G}`: intersection of the members' relations.
    pub fn distributed_relation<S: AsRef<str>>(
        &self,
        group: impl IntoIterator<Item = S>,
    ) -> Result<Relation, ModalError> {
        let idx = self.group_indices(group)?;
        Ok(intersection_relation(
            self.world_count(),
            idx.iter().map(|i| &self.relations[*i]),
        ))
    }

    /// Worlds where `formula` holds under the relational semantics.
    pub fn eval(&self, formula: &Formula) -> Result<FixedBitSet, ModalError> {
        let n = self.world_count();
        Ok(match formula {
            Formula::Var(v) => self
                .valuation
                .get(v)
                .cloned()
                .ok_or_else(|| ModalError::UnknownVariable(v.clone()))?,
            Formula::Not(f) => {
                let mut s = self.eval(f)?;
                s.toggle_range(..);
                s
            }
            Formula::And(a, b) => {
                let mut s = self.eval(a)?;
                s.intersect_with(&self.eval(b)?);
                s
            }
            Formula::Or(a, b) => {
                let mut s = self.eval(a)?;
                s.union_with(&self.eval(b)?);
                s
            }
            Formula::Implies(a, b) => {
                let mut s = self.eval(a)?;
                s.toggle_range(..);
                s.union_with(&self.eval(b)?);
                s
            }
            Formula::Iff(a, b) => {
                let (x, y) = (self.eval(a)?, self.eval(b)?);
                let mut s = FixedBitSet::with_capacity(n);
                for w in 0..n {
                    s.set(w, x.contains(w) == y.contains(w));
                }
                s
            }
            Formula::Know(a, f) => necessity(&self.relations[self.agent_index(a)?], &self.eval(f)?),
            Formula::Mutual(g, f) => necessity(&self.mutual_relation(g)?, &self.eval(f)?),
            Formula::Distributed(g, f) => necessity(&self.distributed_relation(g)?, &self.eval(f)?),
        })
    }

    /// Whether `formula` holds at every world.
    pub fn is_valid(&self, formula: &Formula) -> Result<bool, ModalError> {
        Ok(self.eval(formula)?.count_ones(..) == self.world_count())
    }
}
