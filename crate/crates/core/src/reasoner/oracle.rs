//! Brute-force canonical-model oracle.
//!
//! Builds one model element per individual, one probe element per named
//! class, and one anonymous witness per existential filler. Each element
//! carries a label: the set of subexpressions it satisfies. Labels are
//! recomputed by sweeping every (element, subexpression) pair until a full
//! sweep changes nothing. No indexes, no work queue, no canonicalization;
//! meant for knowledge bases of a few dozen entities.

use std::collections::{BTreeMap, BTreeSet};

use super::{check_expression, InferredAbox, Reasoner, ReasonerError, SubsumptionRelation, THING};
use crate::kb::{Assertion, Axiom, ClassExpression, KnowledgeBase, Name, TermKind, HAS_FUNCTION};

#[derive(Debug, Clone, Copy, Default)]
pub struct NaiveOracle;

impl Reasoner for NaiveOracle {
    fn name(&self) -> &'static str {
        "naive-oracle"
    }

    fn classify(&self, kb: &KnowledgeBase) -> Result<SubsumptionRelation, ReasonerError> {
        let model = Model::build(kb, &[]);
        let mut named: Vec<(Name, ClassExpression)> =
            kb.classes().map(|c| (c.clone(), ClassExpression::Atomic(c.clone()))).collect();
        named.push((Name::new(THING), ClassExpression::Top));
        let mut pairs = BTreeSet::new();
        for (sub, sub_expr) in &named {
            let probe = model.probes[sub_expr];
            for (sup, sup_expr) in &named {
                if model.satisfies(probe, sup_expr) {
                    pairs.insert((sub.clone(), sup.clone()));
                }
            }
        }
        Ok(SubsumptionRelation { pairs })
    }

    fn materialize(&self, kb: &KnowledgeBase) -> Result<InferredAbox, ReasonerError> {
        let model = Model::build(kb, &[]);
        let mut out = InferredAbox::default();
        for ind in kb.individuals() {
            let el = model.individuals[ind];
            if model.satisfies(el, &ClassExpression::Top) {
                out.class_memberships.insert((ind.clone(), Name::new(THING)));
            }
            for class in kb.classes() {
                if model.satisfies(el, &ClassExpression::Atomic(class.clone())) {
                    out.class_memberships.insert((ind.clone(), class.clone()));
                }
            }
        }
        for (from, role, to) in &model.asserted_links {
            for (r, s) in &model.role_pairs {
                if r == role {
                    out.role_links.insert((from.clone(), s.clone(), to.clone()));
                }
            }
        }
        Ok(out)
    }

    /// Evaluates the query expression directly in the model instead of
    /// naming it.
    fn entails_instance(
        &self,
        kb: &KnowledgeBase,
        individual: &str,
        class: &ClassExpression,
    ) -> Result<bool, ReasonerError> {
        kb.require(individual, TermKind::Individual)?;
        check_expression(kb, class)?;
        let model = Model::build(kb, std::slice::from_ref(class));
        Ok(model.satisfies(model.individuals[individual], class))
    }

    fn subsumes(
        &self,
        kb: &KnowledgeBase,
        sub: &ClassExpression,
        sup: &ClassExpression,
    ) -> Result<bool, ReasonerError> {
        check_expression(kb, sub)?;
        check_expression(kb, sup)?;
        let model = Model::build(kb, &[sub.clone(), sup.clone()]);
        Ok(model.satisfies(model.probes[sub], sup))
    }
}

struct Model {
    subexprs: Vec<ClassExpression>,
    position: BTreeMap<ClassExpression, usize>,
    labels: Vec<Vec<bool>>,
    edges: Vec<Vec<(Name, usize)>>,
    individuals: BTreeMap<Name, usize>,
    probes: BTreeMap<ClassExpression, usize>,
    asserted_links: Vec<(Name, Name, Name)>,
    /// Reflexive-transitive sub-role pairs.
    role_pairs: BTreeSet<(Name, Name)>,
}

fn collect(expr: &ClassExpression, into: &mut BTreeSet<ClassExpression>) {
    into.insert(expr.clone());
    match expr {
        ClassExpression::Conjunction(parts) => parts.iter().for_each(|p| collect(p, into)),
        ClassExpression::Exists(_, f) => collect(f, into),
        _ => {}
    }
}

impl Model {
    fn build(kb: &KnowledgeBase, queries: &[ClassExpression]) -> Model {
        // general inclusions, with definitions and substantive functions
        // spelled out
        let mut inclusions: Vec<(ClassExpression, ClassExpression)> = Vec::new();
        let mut role_pairs: BTreeSet<(Name, Name)> = kb.roles().map(|r| (r.clone(), r.clone())).collect();
        for ax in kb.tbox() {
            match ax {
                Axiom::SubClassOf(c, d) => inclusions.push((c.clone(), d.clone())),
                Axiom::EquivalentClass(a, d) => {
                    inclusions.push((ClassExpression::Atomic(a.clone()), d.clone()));
                    inclusions.push((d.clone(), ClassExpression::Atomic(a.clone())));
                }
                Axiom::SubstantiveFunction { object_class, function_class } => inclusions.push((
                    ClassExpression::Atomic(object_class.clone()),
                    ClassExpression::Exists(
                        Name::new(HAS_FUNCTION),
                        Box::new(ClassExpression::Atomic(function_class.clone())),
                    ),
                )),
                Axiom::SubRoleOf(r, s) => {
                    role_pairs.insert((r.clone(), s.clone()));
                }
            }
        }
        loop {
            let mut added = Vec::new();
            for (a, b) in &role_pairs {
                for (c, d) in &role_pairs {
                    if b == c && !role_pairs.contains(&(a.clone(), d.clone())) {
                        added.push((a.clone(), d.clone()));
                    }
                }
            }
            if added.is_empty() {
                break;
            }
            role_pairs.extend(added);
        }

        let mut all = BTreeSet::new();
        collect(&ClassExpression::Top, &mut all);
        for c in kb.classes() {
            all.insert(ClassExpression::Atomic(c.clone()));
        }
        for (c, d) in &inclusions {
            collect(c, &mut all);
            collect(d, &mut all);
        }
        for a in kb.abox() {
            if let Assertion::ClassAssertion(_, c) = a {
                collect(c, &mut all);
            }
        }
        for q in queries {
            collect(q, &mut all);
        }
        let subexprs: Vec<ClassExpression> = all.into_iter().collect();
        let position: BTreeMap<ClassExpression, usize> =
            subexprs.iter().enumerate().map(|(i, e)| (e.clone(), i)).collect();

        let mut model = Model {
            labels: Vec::new(),
            edges: Vec::new(),
            individuals: BTreeMap::new(),
            probes: BTreeMap::new(),
            asserted_links: Vec::new(),
            role_pairs,
            subexprs,
            position,
        };
        for ind in kb.individuals() {
            let el = model.add_element();
            model.individuals.insert(ind.clone(), el);
        }
        let mut probe_exprs: Vec<ClassExpression> = kb.classes().map(|c| ClassExpression::Atomic(c.clone())).collect();
        probe_exprs.push(ClassExpression::Top);
        probe_exprs.extend(queries.iter().cloned());
        for e in probe_exprs {
            if !model.probes.contains_key(&e) {
                let el = model.add_element();
                let i = model.position[&e];
                model.labels[el][i] = true;
                model.probes.insert(e, el);
            }
        }
        for a in kb.abox() {
            match a {
                Assertion::ClassAssertion(ind, c) => {
                    let (el, i) = (model.individuals[ind], model.position[c]);
                    model.labels[el][i] = true;
                }
                Assertion::RoleAssertion(s, r, o) => {
                    let (from, to) = (model.individuals[s], model.individuals[o]);
                    model.edges[from].push((r.clone(), to));
                    model.asserted_links.push((s.clone(), r.clone(), o.clone()));
                }
            }
        }

        let told: Vec<(usize, usize)> =
            inclusions.iter().map(|(c, d)| (model.position[c], model.position[d])).collect();
        let mut witnesses: BTreeMap<usize, usize> = BTreeMap::new();
        loop {
            let mut changed = false;
            let mut el = 0;
            while el < model.labels.len() {
                for i in 0..model.subexprs.len() {
                    let holds = model.labels[el][i] || model.derivable(el, i, &told);
                    if holds && !model.labels[el][i] {
                        model.labels[el][i] = true;
                        changed = true;
                    }
                    if !holds {
                        continue;
                    }
                    match model.subexprs[i].clone() {
                        ClassExpression::Conjunction(parts) => {
                            for p in &parts {
                                let j = model.position[p];
                                if !model.labels[el][j] {
                                    model.labels[el][j] = true;
                                    changed = true;
                                }
                            }
                        }
                        ClassExpression::Exists(r, f) => {
                            let j = model.position[&*f];
                            let w = match witnesses.get(&j) {
                                Some(&w) => w,
                                None => {
                                    let w = model.add_element();
                                    model.labels[w][j] = true;
                                    witnesses.insert(j, w);
                                    changed = true;
                                    w
                                }
                            };
                            if !model.edges[el].iter().any(|(er, et)| *er == r && *et == w) {
                                model.edges[el].push((r, w));
                                changed = true;
                            }
                        }
                        _ => {}
                    }
                }
                el += 1;
            }
            if !changed {
                break;
            }
        }
        model
    }

    fn add_element(&mut self) -> usize {
        let mut label = vec![false; self.subexprs.len()];
        label[self.position[&ClassExpression::Top]] = true;
        self.labels.push(label);
        self.edges.push(Vec::new());
        self.labels.len() - 1
    }

    /// Whether the satisfaction conditions force subexpression `i` at `el`
    /// given the current labels.
    fn derivable(&self, el: usize, i: usize, told: &[(usize, usize)]) -> bool {
        if told.iter().any(|&(c, d)| d == i && self.labels[el][c]) {
            return true;
        }
        match &self.subexprs[i] {
            ClassExpression::Top => true,
            ClassExpression::Atomic(_) => false,
            ClassExpression::Conjunction(parts) => parts.iter().all(|p| self.labels[el][self.position[p]]),
            ClassExpression::Exists(r, f) => {
                let j = self.position[&**f];
                self.edges[el]
                    .iter()
                    .any(|(er, to)| self.labels[*to][j] && self.role_pairs.contains(&(er.clone(), r.clone())))
            }
        }
    }

    fn satisfies(&self, el: usize, expr: &ClassExpression) -> bool {
        self.position.get(expr).is_some_and(|&i| self.labels[el][i])
    }
}
