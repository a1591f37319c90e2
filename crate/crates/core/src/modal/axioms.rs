//! Validity of the S4 schemata, trust and trustworthiness, decided by
//! relational criteria rather than enumeration of valuations.

use std::collections::HashSet;

use fixedbitset::FixedBitSet;

use super::formula::Formula;
use super::kripke::{identity_relation, image, necessity, Relation, TopoModel};
use super::ModalError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Schema {
    /// `□(φ → ψ) → (□φ → □ψ)`
    K,
    /// `□φ → φ`
    T,
    /// `□φ → □□φ`
    Four,
}

impl Schema {
    pub fn name(&self) -> &'static str {
        match self {
            Schema::K => "K",
            Schema::T => "T",
            Schema::Four => "4",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AxiomWitness {
    pub instance: Formula,
    pub world: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SchemaResult {
    pub schema: Schema,
    /// The modality the schema was instantiated with, e.g. `K{a}`.
    pub operator: String,
    pub instances: usize,
    pub witness: Option<AxiomWitness>,
}

impl SchemaResult {
    pub fn valid(&self) -> bool {
        self.witness.is_none()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AxiomReport {
    pub formulas: usize,
    pub results: Vec<SchemaResult>,
}

impl AxiomReport {
    /// Whether `schema` holds for every modality checked.
    pub fn valid(&self, schema: Schema) -> bool {
        self.results.iter().filter(|r| r.schema == schema).all(SchemaResult::valid)
    }

    pub fn all_valid(&self) -> bool {
        self.results.iter().all(SchemaResult::valid)
    }
}

/// Formulas built from `variables` with `¬`, `∧`, `→`, each `K{i}` and
/// `D{I}`, up to `depth` nested operators, keeping one representative per
/// truth set.
pub fn semantic_closure<S: AsRef<str>>(
    model: &TopoModel,
    variables: &[S],
    depth: usize,
) -> Result<Vec<(Formula, FixedBitSet)>, ModalError> {
    let mut seen: HashSet<FixedBitSet> = HashSet::new();
    let mut out: Vec<(Formula, FixedBitSet)> = Vec::new();
    for v in variables {
        let f = Formula::var(v.as_ref());
        let s = model.eval(&f)?;
        if seen.insert(s.clone()) {
            out.push((f, s));
        }
    }
    let ops = modalities(model);
    for _ in 0..depth {
        let current = out.clone();
        let mut fresh = Vec::new();
        let mut push = |f: Formula, s: FixedBitSet| {
            if seen.insert(s.clone()) {
                fresh.push((f, s));
            }
        };
        for (f, s) in &current {
            let mut neg = s.clone();
            neg.toggle_range(..);
            push(Formula::not(f.clone()), neg);
            for (op, rel) in &ops {
                push(op.apply(f.clone()), necessity(rel, s));
            }
        }
        for (f, s) in &current {
            for (g, t) in &current {
                let mut conj = s.clone();
                conj.intersect_with(t);
                push(Formula::and(f.clone(), g.clone()), conj);
                let mut imp = s.clone();
                imp.toggle_range(..);
                imp.union_with(t);
                push(Formula::implies(f.clone(), g.clone()), imp);
            }
        }
        if fresh.is_empty() {
            break;
        }
        out.extend(fresh);
    }
    Ok(out)
}

#[derive(Debug, Clone)]
enum Modality {
    Know(String),
    Distributed(Vec<String>),
}

impl Modality {
    fn apply(&self, f: Formula) -> Formula {
        match self {
            Modality::Know(a) => Formula::know(a.clone(), f),
            Modality::Distributed(g) => Formula::distributed(g.clone(), f),
        }
    }

    fn label(&self) -> String {
        match self {
            Modality::Know(a) => format!("K{{{a}}}"),
            Modality::Distributed(g) => format!("D{{{}}}", g.join(",")),
        }
    }
}

/// Each `K{i}`, plus `D{I}` over all agents when there are several.
fn modalities(model: &TopoModel) -> Vec<(Modality, Relation)> {
    let mut ops: Vec<(Modality, Relation)> = model
        .agents()
        .iter()
        .enumerate()
        .map(|(i, a)| (Modality::Know(a.clone()), model.relation(i).clone()))
        .collect();
    if model.agents().len() > 1 {
        let rel = model
            .distributed_relation(model.agents())
            .expect("agents are nonempty");
        ops.push((Modality::Distributed(model.agents().to_vec()), rel));
    }
    ops
}

fn first_missing(model: &TopoModel, valid: &FixedBitSet) -> Option<String> {
    (0..model.world_count())
        .find(|w| !valid.contains(*w))
        .map(|w| model.worlds()[w].clone())
}

/// Instantiates K, T and 4 for every modality over the semantic closure of
/// `variables` to `depth`, reporting the first failing instance of each.
pub fn check_axioms<S: AsRef<str>>(
    model: &TopoModel,
    variables: &[S],
    depth: usize,
) -> Result<AxiomReport, ModalError> {
    let closure = semantic_closure(model, variables, depth)?;
    let mut results = Vec::new();
    for (op, rel) in modalities(model) {
        let boxed: Vec<FixedBitSet> = closure.iter().map(|(_, s)| necessity(&rel, s)).collect();
        let mut result = |schema: Schema, instances: usize, witness: Option<AxiomWitness>| {
            results.push(SchemaResult {
                schema,
                operator: op.label(),
                instances,
                witness,
            })
        };

        let mut witness = None;
        'k: for (i, (f, s)) in closure.iter().enumerate() {
            for (j, (g, t)) in closure.iter().enumerate() {
                let mut imp = s.clone();
                imp.toggle_range(..);
                imp.union_with(t);
                // □(φ→ψ) ∧ □φ ⊆ □ψ
                let mut lhs = necessity(&rel, &imp);
                lhs.intersect_with(&boxed[i]);
                if !lhs.is_subset(&boxed[j]) {
                    let mut valid = lhs;
                    valid.toggle_range(..);
                    valid.union_with(&boxed[j]);
                    witness = Some(AxiomWitness {
                        instance: Formula::implies(
                            op.apply(Formula::implies(f.clone(), g.clone())),
                            Formula::implies(op.apply(f.clone()), op.apply(g.clone())),
                        ),
                        world: first_missing(model, &valid).expect("instance fails somewhere"),
                    });
                    break 'k;
                }
            }
        }
        result(Schema::K, closure.len() * closure.len(), witness);

        let witness = closure.iter().zip(&boxed).find_map(|((f, s), b)| {
            (!b.is_subset(s)).then(|| {
                let mut valid = b.clone();
                valid.toggle_range(..);
                valid.union_with(s);
                AxiomWitness {
                    instance: Formula::implies(op.apply(f.clone()), f.clone()),
                    world: first_missing(model, &valid).expect("instance fails somewhere"),
                }
            })
        });
        result(Schema::T, closure.len(), witness);

        let witness = closure.iter().zip(&boxed).find_map(|((f, _), b)| {
            let bb = necessity(&rel, b);
            (!b.is_subset(&bb)).then(|| {
                let mut valid = b.clone();
                valid.toggle_range(..);
                valid.union_with(&bb);
                AxiomWitness {
                    instance: Formula::implies(op.apply(f.clone()), op.apply(op.apply(f.clone()))),
                    world: first_missing(model, &valid).expect("instance fails somewhere"),
                }
            })
        });
        result(Schema::Four, closure.len(), witness);
    }
    Ok(AxiomReport {
        formulas: closure.len(),
        results,
    })
}

/// Whether the trusted group's knowledge is combined as `E` or as `D`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TrustFlavor {
    Mutual,
    Distributed,
}

impl TrustFlavor {
    pub fn name(&self) -> &'static str {
        match self {
            TrustFlavor::Mutual => "E",
            TrustFlavor::Distributed => "D",
        }
    }
}

/// The trust schema `E{G} X{H} φ → E{G} φ` with `X` the flavor's modality.
pub fn trust_instance<S: AsRef<str>>(
    truster: &[S],
    trusted: &[S],
    flavor: TrustFlavor,
    phi: Formula,
) -> Formula {
    let g: Vec<&str> = truster.iter().map(AsRef::as_ref).collect();
    let h: Vec<&str> = trusted.iter().map(AsRef::as_ref).collect();
    let inner = match flavor {
        TrustFlavor::Mutual => Formula::mutual(h, phi.clone()),
        TrustFlavor::Distributed => Formula::distributed(h, phi.clone()),
    };
    Formula::implies(Formula::mutual(g.clone(), inner), Formula::mutual(g, phi))
}

fn trust_relations<S: AsRef<str>>(
    model: &TopoModel,
    truster: &[S],
    trusted: &[S],
    flavor: TrustFlavor,
) -> Result<(Relation, Relation), ModalError> {
    if truster.is_empty() || trusted.is_empty() {
        return Err(ModalError::EmptyAgentSet);
    }
    let s = model.mutual_relation(truster)?;
    let t = match flavor {
        TrustFlavor::Mutual => model.mutual_relation(trusted)?,
        TrustFlavor::Distributed => model.distributed_relation(trusted)?,
    };
    Ok((s, t))
}

/// Whether `truster` trusts `trusted` for every proposition: with
/// `S = R_{E truster}` and `T` the trusted group's relation, `S(w) ⊆ T(S(w))`
/// at every world.
pub fn check_trust<S: AsRef<str>>(
    model: &TopoModel,
    truster: &[S],
    trusted: &[S],
    flavor: TrustFlavor,
) -> Result<bool, ModalError> {
    let (s, t) = trust_relations(model, truster, trusted, flavor)?;
    Ok(s.iter().all(|succ| succ.is_subset(&image(&t, succ))))
}

/// Whether `K{i} K{j} φ → K{j} φ` for every `φ`, i.e. `R_j(w) ⊆ R_j(R_i(w))`
/// everywhere. Requires that `j` trusts `i`.
pub fn check_trustworthy(model: &TopoModel, i: &str, j: &str) -> Result<bool, ModalError> {
    if !check_trust(model, &[j], &[i], TrustFlavor::Distributed)? {
        return Err(ModalError::TrustPreconditionFailed {
            truster: j.to_string(),
            trusted: i.to_string(),
        });
    }
    let ri = model.relation(model.agent_index(i)?);
    let rj = model.relation(model.agent_index(j)?);
    Ok(ri
        .iter()
        .zip(rj)
        .all(|(si, sj)| sj.is_subset(&image(rj, si))))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrustFailure {
    pub truster: Vec<String>,
    pub trusted: Vec<String>,
    pub flavor: TrustFlavor,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FundamentalTruthReport {
    /// Every relation is reflexive (the truth axiom holds).
    pub reflexive: bool,
    pub pairs_checked: usize,
    /// Group pairs for which trust fails; empty when trust is vacuous.
    pub trust_failures: Vec<TrustFailure>,
    pub formulas_checked: usize,
    /// A closure formula with `D{I} φ ⊄ φ`, if any.
    pub distributed_truth_witness: Option<AxiomWitness>,
    /// `R_{D_I}` is the identity relation.
    pub distributed_is_identity: bool,
    /// When `R_{D_I}` is the identity: whether `φ ↔ D{I} φ` for every
    /// closure formula.
    pub fundamental_truth: Option<bool>,
}

impl FundamentalTruthReport {
    pub fn trust_vacuous(&self) -> bool {
        self.trust_failures.is_empty()
    }

    pub fn distributed_implies_truth(&self) -> bool {
        self.distributed_truth_witness.is_none()
    }
}

fn nonempty_subsets(items: &[String]) -> Vec<Vec<String>> {
    (1u64..(1 << items.len()))
        .map(|mask| {
            items
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, a)| a.clone())
                .collect()
        })
        .collect()
}

/// Checks that trust between every pair of agent groups is vacuous and that
/// distributed knowledge over all agents implies truth, over the depth-2
/// closure of the model's variables.
pub fn fundamental_truth_check(model: &TopoModel) -> Result<FundamentalTruthReport, ModalError> {
    let groups = nonempty_subsets(model.agents());
    let mut trust_failures = Vec::new();
    let mut pairs_checked = 0;
    for g in &groups {
        for h in &groups {
            for flavor in [TrustFlavor::Mutual, TrustFlavor::Distributed] {
                pairs_checked += 1;
                if !check_trust(model, g, h, flavor)? {
                    trust_failures.push(TrustFailure {
                        truster: g.clone(),
                        trusted: h.clone(),
                        flavor,
                    });
                }
            }
        }
    }

    let variables: Vec<String> = model.valuation().keys().cloned().collect();
    let closure = semantic_closure(model, &variables, 2)?;
    let all = model.agents().to_vec();
    let d = model.distributed_relation(&all)?;
    let distributed_truth_witness = closure.iter().find_map(|(f, s)| {
        let ds = necessity(&d, s);
        (!ds.is_subset(s)).then(|| {
            let mut valid = ds.clone();
            valid.toggle_range(..);
            valid.union_with(s);
            AxiomWitness {
                instance: Formula::implies(Formula::distributed(all.clone(), f.clone()), f.clone()),
                world: first_missing(model, &valid).expect("instance fails somewhere"),
            }
        })
    });
    let distributed_is_identity = d == identity_relation(model.world_count());
    let fundamental_truth = distributed_is_identity
        .then(|| closure.iter().all(|(_, s)| &necessity(&d, s) == s));
    Ok(FundamentalTruthReport {
        reflexive: model.relations().iter().all(super::kripke::is_reflexive),
        pairs_checked,
        trust_failures,
        formulas_checked: closure.len(),
        distributed_truth_witness,
        distributed_is_identity,
        fundamental_truth,
    })
}
