//! Measurement scenarios: a hypergraph of compatible measurements together
//! with the sheaf of events over it.
//!
//! Measurements and outcomes are opaque strings at the boundary and dense
//! indices inside. A [`Context`] is a set of measurement indices kept sorted
//! by measurement order, and a [`Section`] assigns an outcome index to every
//! measurement of its context.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScenarioError {
    #[error("scenario has no measurements")]
    NoMeasurements,
    #[error("measurement `{0}` is listed twice")]
    DuplicateMeasurement(String),
    #[error("unknown measurement `{0}`")]
    UnknownMeasurement(String),
    #[error("contexts must be nonempty")]
    EmptyContext,
    #[error("contexts do not cover measurements {0:?}")]
    CoverageError(Vec<String>),
    #[error("context {inner} is contained in context {outer}")]
    DominatedContext { inner: String, outer: String },
    #[error("measurement `{0}` has no outcomes")]
    EmptyOutcomes(String),
    #[error("measurement `{measurement}` lists outcome `{outcome}` twice")]
    DuplicateOutcome { measurement: String, outcome: String },
    #[error("unknown outcome `{outcome}` for measurement `{measurement}`")]
    UnknownOutcome { measurement: String, outcome: String },
    #[error("{0} is not contained in any maximal context")]
    UnknownContext(String),
    #[error("{sub} is not a subcontext of {context}")]
    NotASubcontext { sub: String, context: String },
    #[error("sections over {first} and {second} disagree on `{measurement}`")]
    IncompatibleFamily {
        first: String,
        second: String,
        measurement: String,
    },
    #[error("family does not cover measurements {0:?}")]
    IncompleteCover(Vec<String>),
    #[error("section has {got} values for a context of size {expected}")]
    SectionArity { expected: usize, got: usize },
}

/// A set of measurement indices sorted by measurement order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Context(Vec<usize>);

impl Context {
    pub fn new(mut members: Vec<usize>) -> Self {
        members.sort_unstable();
        members.dedup();
        Context(members)
    }

    pub fn members(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, measurement: usize) -> bool {
        self.0.binary_search(&measurement).is_ok()
    }

    pub fn position(&self, measurement: usize) -> Option<usize> {
        self.0.binary_search(&measurement).ok()
    }

    pub fn is_subset(&self, other: &Context) -> bool {
        self.0.iter().all(|m| other.contains(*m))
    }

    pub fn intersection(&self, other: &Context) -> Context {
        Context(self.0.iter().copied().filter(|m| other.contains(*m)).collect())
    }

    pub fn union(&self, other: &Context) -> Context {
        Context::new(self.0.iter().chain(other.0.iter()).copied().collect())
    }
}

/// Assignment of one outcome to each measurement of a context; an element of
/// the sheaf of events over that context.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Section {
    context: Context,
    values: Vec<usize>,
}

/// A section over the full measurement set.
pub type GlobalSection = Section;

impl Section {
    pub fn new(context: Context, values: Vec<usize>) -> Result<Self, ScenarioError> {
        if context.len() != values.len() {
            return Err(ScenarioError::SectionArity {
                expected: context.len(),
                got: values.len(),
            });
        }
        Ok(Section { context, values })
    }

    pub fn context(&self) -> &Context {
        &self.context
    }

    /// Outcome indices aligned with `context().members()`.
    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn value_of(&self, measurement: usize) -> Option<usize> {
        self.context.position(measurement).map(|p| self.values[p])
    }

    pub fn restrict(&self, sub: &Context) -> Result<Section, ScenarioError> {
        let mut values = Vec::with_capacity(sub.len());
        for m in sub.members() {
            match self.value_of(*m) {
                Some(v) => values.push(v),
                None => {
                    return Err(ScenarioError::NotASubcontext {
                        sub: format!("{:?}", sub.members()),
                        context: format!("{:?}", self.context.members()),
                    })
                }
            }
        }
        Ok(Section {
            context: sub.clone(),
            values,
        })
    }

    /// First measurement of the shared domain on which the two sections
    /// disagree, if any.
    pub fn disagreement(&self, other: &Section) -> Option<usize> {
        self.context
            .members()
            .iter()
            .zip(&self.values)
            .find(|(m, v)| other.value_of(**m).is_some_and(|w| w != **v))
            .map(|(m, _)| *m)
    }

    pub fn agrees_with(&self, other: &Section) -> bool {
        self.disagreement(other).is_none()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeasurementScenario {
    measurements: Vec<String>,
    index: HashMap<String, usize>,
    outcomes: Vec<Vec<String>>,
    maximal_contexts: Vec<Context>,
}

impl MeasurementScenario {
    /// Validates and canonicalizes a scenario. Contexts are deduplicated and
    /// sorted; a context strictly inside another one is rejected.
    pub fn new<M, C, O, K, V>(
        measurements: M,
        contexts: C,
        outcomes: O,
    ) -> Result<Self, ScenarioError>
    where
        M: IntoIterator,
        M::Item: Into<String>,
        C: IntoIterator,
        C::Item: IntoIterator,
        <C::Item as IntoIterator>::Item: Into<String>,
        O: IntoIterator<Item = (K, V)>,
        K: Into<String>,
        V: IntoIterator,
        V::Item: Into<String>,
    {
        let measurements: Vec<String> = measurements.into_iter().map(Into::into).collect();
        if measurements.is_empty() {
            return Err(ScenarioError::NoMeasurements);
        }
        let mut index = HashMap::new();
        for (i, m) in measurements.iter().enumerate() {
            if index.insert(m.clone(), i).is_some() {
                return Err(ScenarioError::DuplicateMeasurement(m.clone()));
            }
        }

        let mut outcome_map: BTreeMap<String, Vec<String>> = BTreeMap::new();
        for (k, v) in outcomes {
            let k = k.into();
            if !index.contains_key(&k) {
                return Err(ScenarioError::UnknownMeasurement(k));
            }
            outcome_map.insert(k, v.into_iter().map(Into::into).collect());
        }
        let mut outcome_lists = Vec::with_capacity(measurements.len());
        for m in &measurements {
            let list = outcome_map.remove(m).unwrap_or_default();
            if list.is_empty() {
                return Err(ScenarioError::EmptyOutcomes(m.clone()));
            }
            let mut seen = BTreeSet::new();
            for o in &list {
                if !seen.insert(o) {
                    return Err(ScenarioError::DuplicateOutcome {
                        measurement: m.clone(),
                        outcome: o.clone(),
                    });
                }
            }
            outcome_lists.push(list);
        }

        let mut canonical = BTreeSet::new();
        for ctx in contexts {
            let mut members = Vec::new();
            for name in ctx {
                let name = name.into();
                match index.get(&name) {
                    Some(i) => members.push(*i),
                    None => return Err(ScenarioError::UnknownMeasurement(name)),
                }
            }
            if members.is_empty() {
                return Err(ScenarioError::EmptyContext);
            }
            canonical.insert(Context::new(members));
        }
        let maximal_contexts: Vec<Context> = canonical.into_iter().collect();

        let scenario = MeasurementScenario {
            measurements,
            index,
            outcomes: outcome_lists,
            maximal_contexts,
        };

        for a in &scenario.maximal_contexts {
            for b in &scenario.maximal_contexts {
                if a != b && a.is_subset(b) {
                    return Err(ScenarioError::DominatedContext {
                        inner: scenario.context_label(a),
                        outer: scenario.context_label(b),
                    });
                }
            }
        }
        let missing: Vec<String> = (0..scenario.measurements.len())
            .filter(|m| !scenario.maximal_contexts.iter().any(|c| c.contains(*m)))
            .map(|m| scenario.measurements[m].clone())
            .collect();
        if !missing.is_empty() {
            return Err(ScenarioError::CoverageError(missing));
        }
        Ok(scenario)
    }

    /// Scenario where every measurement has outcomes `"0"` and `"1"`.
    pub fn binary<M, C>(measurements: M, contexts: C) -> Result<Self, ScenarioError>
    where
        M: IntoIterator,
        M::Item: Into<String>,
        C: IntoIterator,
        C::Item: IntoIterator,
        <C::Item as IntoIterator>::Item: Into<String>,
    {
        let measurements: Vec<String> = measurements.into_iter().map(Into::into).collect();
        let outcomes: Vec<(String, Vec<&str>)> = measurements
            .iter()
            .map(|m| (m.clone(), vec!["0", "1"]))
            .collect();
        Self::new(measurements, contexts, outcomes)
    }

    pub fn measurements(&self) -> &[String] {
        &self.measurements
    }

    pub fn measurement_count(&self) -> usize {
        self.measurements.len()
    }

    pub fn measurement_index(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn measurement_name(&self, measurement: usize) -> &str {
        &self.measurements[measurement]
    }

    pub fn outcomes(&self, measurement: usize) -> &[String] {
        &self.outcomes[measurement]
    }

    pub fn outcome_index(&self, measurement: usize, outcome: &str) -> Option<usize> {
        self.outcomes[measurement].iter().position(|o| o == outcome)
    }

    pub fn maximal_contexts(&self) -> &[Context] {
        &self.maximal_contexts
    }

    pub fn maximal_context_index(&self, context: &Context) -> Option<usize> {
        self.maximal_contexts.iter().position(|c| c == context)
    }

    /// The context containing every measurement.
    pub fn full_context(&self) -> Context {
        Context((0..self.measurements.len()).collect())
    }

    /// Builds a context from measurement names.
    pub fn context<S: AsRef<str>>(&self, names: &[S]) -> Result<Context, ScenarioError> {
        let mut members = Vec::with_capacity(names.len());
        for n in names {
            match self.measurement_index(n.as_ref()) {
                Some(i) => members.push(i),
                None => return Err(ScenarioError::UnknownMeasurement(n.as_ref().to_string())),
            }
        }
        if members.is_empty() {
            return Err(ScenarioError::EmptyContext);
        }
        Ok(Context::new(members))
    }

    /// True iff the context lies inside some maximal context.
    pub fn is_context(&self, context: &Context) -> bool {
        !context.is_empty() && self.maximal_contexts.iter().any(|c| context.is_subset(c))
    }

    /// Every nonempty subset of a maximal context, deduplicated and sorted.
    pub fn all_contexts(&self) -> Vec<Context> {
        let mut out = BTreeSet::new();
        for ctx in &self.maximal_contexts {
            let members = ctx.members();
            for mask in 1u64..(1u64 << members.len()) {
                let subset = members
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask & (1 << i) != 0)
                    .map(|(_, m)| *m)
                    .collect();
                out.insert(Context(subset));
            }
        }
        out.into_iter().collect()
    }

    /// Connectivity of the graph whose vertices are maximal contexts and whose
    /// edges join contexts with a nonempty intersection.
    pub fn is_connected(&self) -> bool {
        let n = self.maximal_contexts.len();
        if n <= 1 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        while let Some(i) = queue.pop_front() {
            for j in 0..n {
                if !seen[j]
                    && !self.maximal_contexts[i]
                        .intersection(&self.maximal_contexts[j])
                        .is_empty()
                {
                    seen[j] = true;
                    queue.push_back(j);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub fn section_count(&self, context: &Context) -> usize {
        context
            .members()
            .iter()
            .map(|m| self.outcomes[*m].len())
            .product()
    }

    /// All sections over a context of the scenario, lexicographically ordered.
    pub fn sections(&self, context: &Context) -> Result<Vec<Section>, ScenarioError> {
        if !self.is_context(context) {
            return Err(ScenarioError::UnknownContext(self.context_label(context)));
        }
        Ok(self.assignments(context))
    }

    /// Every assignment over the whole measurement set, i.e. the events over X.
    pub fn global_assignments(&self) -> Vec<GlobalSection> {
        self.assignments(&self.full_context())
    }

    /// Cartesian product of the outcome sets of an arbitrary measurement set.
    pub fn assignments(&self, context: &Context) -> Vec<Section> {
        let radices: Vec<usize> = context
            .members()
            .iter()
            .map(|m| self.outcomes[*m].len())
            .collect();
        let total: usize = radices.iter().product();
        let mut out = Vec::with_capacity(total);
        let mut values = vec![0usize; radices.len()];
        for _ in 0..total {
            out.push(Section {
                context: context.clone(),
                values: values.clone(),
            });
            for pos in (0..values.len()).rev() {
                values[pos] += 1;
                if values[pos] < radices[pos] {
                    break;
                }
                values[pos] = 0;
            }
        }
        out
    }

    /// Position of a section in the lexicographic order of `assignments`.
    pub fn section_rank(&self, section: &Section) -> usize {
        section
            .context
            .members()
            .iter()
            .zip(&section.values)
            .fold(0, |acc, (m, v)| acc * self.outcomes[*m].len() + v)
    }

    pub fn is_compatible_family(&self, family: &[Section]) -> bool {
        self.find_incompatibility(family).is_none()
    }

    fn find_incompatibility(&self, family: &[Section]) -> Option<ScenarioError> {
        for (i, a) in family.iter().enumerate() {
            for b in &family[i + 1..] {
                if let Some(m) = a.disagreement(b) {
                    return Some(ScenarioError::IncompatibleFamily {
                        first: self.section_label_full(a),
                        second: self.section_label_full(b),
                        measurement: self.measurements[m].clone(),
                    });
                }
            }
        }
        None
    }

    /// Glues a compatible family covering every measurement into the unique
    /// global section restricting to each member.
    pub fn glue(&self, family: &[Section]) -> Result<GlobalSection, ScenarioError> {
        if let Some(err) = self.find_incompatibility(family) {
            return Err(err);
        }
        let mut values = vec![None; self.measurements.len()];
        for s in family {
            for (m, v) in s.context.members().iter().zip(&s.values) {
                values[*m] = Some(*v);
            }
        }
        let missing: Vec<String> = values
            .iter()
            .enumerate()
            .filter(|(_, v)| v.is_none())
            .map(|(m, _)| self.measurements[m].clone())
            .collect();
        if !missing.is_empty() {
            return Err(ScenarioError::IncompleteCover(missing));
        }
        Ok(Section {
            context: self.full_context(),
            values: values.into_iter().map(|v| v.unwrap_or_default()).collect(),
        })
    }

    /// Parses a comma-joined outcome list given in context order.
    pub fn parse_section(&self, context: &Context, key: &str) -> Result<Section, ScenarioError> {
        let parts: Vec<&str> = if context.is_empty() {
            Vec::new()
        } else {
            key.split(',').map(str::trim).collect()
        };
        if parts.len() != context.len() {
            return Err(ScenarioError::SectionArity {
                expected: context.len(),
                got: parts.len(),
            });
        }
        let mut values = Vec::with_capacity(parts.len());
        for (m, o) in context.members().iter().zip(parts) {
            match self.outcome_index(*m, o) {
                Some(v) => values.push(v),
                None => {
                    return Err(ScenarioError::UnknownOutcome {
                        measurement: self.measurements[*m].clone(),
                        outcome: o.to_string(),
                    })
                }
            }
        }
        Ok(Section {
            context: context.clone(),
            values,
        })
    }

    /// `"A,B"`
    pub fn context_label(&self, context: &Context) -> String {
        context
            .members()
            .iter()
            .map(|m| self.measurements[*m].as_str())
            .collect::<Vec<_>>()
            .join(",")
    }

    /// `"0,1"`
    pub fn section_label(&self, section: &Section) -> String {
        section
            .context
            .members()
            .iter()
            .zip(&section.values)
            .map(|(m, v)| self.outcomes[*m][*v].as_str())
            .collect::<Vec<_>>()
            .join(",")
    }

    /// `"A=0,B=1"`
    pub fn section_label_full(&self, section: &Section) -> String {
        section
            .context
            .members()
            .iter()
            .zip(&section.values)
            .map(|(m, v)| format!("{}={}", self.measurements[*m], self.outcomes[*m][*v]))
            .collect::<Vec<_>>()
            .join(",")
    }

    /// Measurements adjacent to `measurement` through a two-element context.
    pub fn neighbours(&self, measurement: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .maximal_contexts
            .iter()
            .filter(|c| c.len() == 2 && c.contains(measurement))
            .flat_map(|c| c.members().iter().copied())
            .filter(|m| *m != measurement)
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// True when the maximal contexts are the edges of a single cycle through
    /// every measurement (at least three of them).
    pub fn is_cycle(&self) -> bool {
        let n = self.measurements.len();
        n >= 3
            && self.maximal_contexts.len() == n
            && self.maximal_contexts.iter().all(|c| c.len() == 2)
            && (0..n).all(|m| self.neighbours(m).len() == 2)
            && self.is_connected()
    }

    /// Canonical reading order around a cycle scenario: start at the first
    /// measurement of the last maximal context and walk away from its partner,
    /// so the walk closes on that last context.
    pub fn default_cycle_order(&self) -> Option<Vec<usize>> {
        if !self.is_cycle() {
            return None;
        }
        let last = self.maximal_contexts.last()?;
        let (start, partner) = (last.members()[0], last.members()[1]);
        let mut order = vec![start];
        let mut prev = partner;
        let mut current = start;
        while order.len() < self.measurements.len() {
            let next = *self.neighbours(current).iter().find(|m| **m != prev)?;
            order.push(next);
            prev = current;
            current = next;
        }
        Some(order)
    }
}

impl fmt::Display for MeasurementScenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ctxs: Vec<String> = self
            .maximal_contexts
            .iter()
            .map(|c| format!("{{{}}}", self.context_label(c)))
            .collect();
        write!(f, "X={{{}}} U=[{}]", self.measurements.join(","), ctxs.join(" "))
    }
}
