//! Completion-rule saturation.
//!
//! Every named class, every existential filler and every individual gets a
//! context holding the subexpressions it is known to imply. Rules fire from
//! a work queue until nothing new is derived:
//!
//! - init: a context implies its own expression and `Thing`
//! - conjunction: `C and D` implies both; both imply `C and D` when that
//!   conjunction occurs in the knowledge base
//! - existential: `exists r . F` links the context to F's context; a link
//!   over `r` to a context implying `F` yields `exists s . F` for every
//!   super-role `s` of `r` where that expression occurs
//! - told: asserted subclass axioms, both directions of definitions, and
//!   `Class ⊑ exists hasFunction . Function` for substantive functions
//!
//! Individuals are contexts seeded with their asserted types and linked by
//! their asserted role facts.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};

use super::{InferredAbox, Reasoner, ReasonerError, SubsumptionRelation, THING};
use crate::kb::{Assertion, Axiom, ClassExpression, KnowledgeBase, Name, HAS_FUNCTION};

#[derive(Debug, Clone, Copy, Default)]
pub struct Saturation;

impl Reasoner for Saturation {
    fn name(&self) -> &'static str {
        "el-saturation"
    }

    fn classify(&self, kb: &KnowledgeBase) -> Result<SubsumptionRelation, ReasonerError> {
        let sat = Engine::run(kb)?;
        let mut pairs = std::collections::BTreeSet::new();
        let thing = Name::new(THING);
        for (class, &ctx) in sat.class_ctx.iter().chain(std::iter::once((&thing, &sat.top_ctx))) {
            for sup in sat.named_subsumers(ctx) {
                pairs.insert((class.clone(), sup));
            }
        }
        Ok(SubsumptionRelation { pairs })
    }

    fn materialize(&self, kb: &KnowledgeBase) -> Result<InferredAbox, ReasonerError> {
        let sat = Engine::run(kb)?;
        let mut out = InferredAbox::default();
        for (ind, &ctx) in &sat.ind_ctx {
            for class in sat.named_subsumers(ctx) {
                out.class_memberships.insert((ind.clone(), class));
            }
        }
        for a in kb.abox() {
            if let Assertion::RoleAssertion(s, r, o) = a {
                let r_idx = sat.index.role_ids[r];
                for (s_idx, sup) in sat.index.role_names.iter().enumerate() {
                    if sat.index.role_below[r_idx][s_idx] {
                        out.role_links.insert((s.clone(), sup.clone(), o.clone()));
                    }
                }
            }
        }
        Ok(out)
    }
}

type ExprId = usize;
type CtxId = usize;
type RoleId = usize;

#[derive(Debug)]
enum Node {
    Top,
    Atomic(Name),
    And(Vec<ExprId>),
    Some(RoleId, ExprId),
}

#[derive(Default)]
struct Index {
    nodes: Vec<Node>,
    ids: HashMap<ClassExpression, ExprId>,
    role_names: Vec<Name>,
    role_ids: HashMap<Name, RoleId>,
    /// `role_below[r][s]` iff `r ⊑* s`.
    role_below: Vec<Vec<bool>>,
    told: Vec<Vec<ExprId>>,
    conj_parents: Vec<Vec<ExprId>>,
    exists_by_filler: Vec<Vec<(RoleId, ExprId)>>,
}

impl Index {
    fn intern(&mut self, expr: &ClassExpression) -> ExprId {
        if let Some(&id) = self.ids.get(expr) {
            return id;
        }
        let node = match expr {
            ClassExpression::Top => Node::Top,
            ClassExpression::Atomic(n) => Node::Atomic(n.clone()),
            ClassExpression::Conjunction(parts) => {
                let mut ids: Vec<ExprId> = parts.iter().map(|p| self.intern(p)).collect();
                ids.sort_unstable();
                ids.dedup();
                Node::And(ids)
            }
            ClassExpression::Exists(r, f) => Node::Some(self.role_ids[r], self.intern(f)),
        };
        let id = self.nodes.len();
        match &node {
            Node::And(parts) => {
                for &p in parts {
                    self.conj_parents[p].push(id);
                }
            }
            Node::Some(r, f) => self.exists_by_filler[*f].push((*r, id)),
            _ => {}
        }
        self.nodes.push(node);
        self.told.push(Vec::new());
        self.conj_parents.push(Vec::new());
        self.exists_by_filler.push(Vec::new());
        self.ids.insert(expr.clone(), id);
        id
    }

    fn build(kb: &KnowledgeBase) -> Index {
        let mut ix = Index::default();
        for r in kb.roles() {
            ix.role_ids.insert(r.clone(), ix.role_names.len());
            ix.role_names.push(r.clone());
        }
        let n = ix.role_names.len();
        ix.role_below = (0..n).map(|i| (0..n).map(|j| i == j).collect()).collect();
        for ax in kb.tbox() {
            if let Axiom::SubRoleOf(r, s) = ax {
                let (r, s) = (ix.role_ids[r], ix.role_ids[s]);
                ix.role_below[r][s] = true;
            }
        }
        for k in 0..n {
            for i in 0..n {
                if ix.role_below[i][k] {
                    for j in 0..n {
                        if ix.role_below[k][j] {
                            ix.role_below[i][j] = true;
                        }
                    }
                }
            }
        }

        ix.intern(&ClassExpression::Top);
        for c in kb.classes() {
            ix.intern(&ClassExpression::Atomic(c.clone()));
        }
        for ax in kb.tbox() {
            match ax {
                Axiom::SubClassOf(c, d) => {
                    let (c, d) = (ix.intern(c), ix.intern(d));
                    ix.told[c].push(d);
                }
                Axiom::EquivalentClass(a, def) => {
                    let (a, d) = (ix.intern(&ClassExpression::Atomic(a.clone())), ix.intern(def));
                    ix.told[a].push(d);
                    ix.told[d].push(a);
                }
                Axiom::SubstantiveFunction { object_class, function_class } => {
                    let c = ix.intern(&ClassExpression::Atomic(object_class.clone()));
                    let d = ix.intern(&ClassExpression::Exists(
                        Name::new(HAS_FUNCTION),
                        Box::new(ClassExpression::Atomic(function_class.clone())),
                    ));
                    ix.told[c].push(d);
                }
                Axiom::SubRoleOf(..) => {}
            }
        }
        for a in kb.abox() {
            if let Assertion::ClassAssertion(_, c) = a {
                ix.intern(c);
            }
        }
        ix
    }
}

struct Context {
    has: Vec<bool>,
    list: Vec<ExprId>,
    preds: Vec<(RoleId, CtxId)>,
    succs: HashSet<(RoleId, CtxId)>,
}

enum Job {
    Implies(CtxId, ExprId),
    Link(CtxId, RoleId, CtxId),
}

struct Engine {
    index: Index,
    contexts: Vec<Context>,
    filler_ctx: HashMap<ExprId, CtxId>,
    class_ctx: BTreeMap<Name, CtxId>,
    ind_ctx: BTreeMap<Name, CtxId>,
    top_ctx: CtxId,
    queue: VecDeque<Job>,
    firings: usize,
    limit: usize,
}

impl Engine {
    fn run(kb: &KnowledgeBase) -> Result<Engine, ReasonerError> {
        let kb = kb.canonicalize();
        let index = Index::build(&kb);
        let individuals = kb.individuals().count();
        // individuals count as subexpressions: each behaves like a nominal
        let size = index.nodes.len() + individuals;
        let mut e = Engine {
            index,
            contexts: Vec::new(),
            filler_ctx: HashMap::new(),
            class_ctx: BTreeMap::new(),
            ind_ctx: BTreeMap::new(),
            top_ctx: 0,
            queue: VecDeque::new(),
            firings: 0,
            limit: 10 * size * size,
        };
        e.top_ctx = e.filler_context(0);
        for c in kb.classes() {
            let id = e.index.ids[&ClassExpression::Atomic(c.clone())];
            let ctx = e.filler_context(id);
            e.class_ctx.insert(c.clone(), ctx);
        }
        for i in kb.individuals() {
            let ctx = e.new_context();
            e.queue.push_back(Job::Implies(ctx, 0));
            e.ind_ctx.insert(i.clone(), ctx);
        }
        for a in kb.abox() {
            match a {
                Assertion::ClassAssertion(i, c) => {
                    e.queue.push_back(Job::Implies(e.ind_ctx[i], e.index.ids[c]));
                }
                Assertion::RoleAssertion(s, r, o) => {
                    e.queue.push_back(Job::Link(e.ind_ctx[s], e.index.role_ids[r], e.ind_ctx[o]));
                }
            }
        }
        e.saturate()?;
        Ok(e)
    }

    fn new_context(&mut self) -> CtxId {
        self.contexts.push(Context {
            has: vec![false; self.index.nodes.len()],
            list: Vec::new(),
            preds: Vec::new(),
            succs: HashSet::new(),
        });
        self.contexts.len() - 1
    }

    fn filler_context(&mut self, expr: ExprId) -> CtxId {
        if let Some(&c) = self.filler_ctx.get(&expr) {
            return c;
        }
        let c = self.new_context();
        self.filler_ctx.insert(expr, c);
        self.queue.push_back(Job::Implies(c, expr));
        self.queue.push_back(Job::Implies(c, 0));
        c
    }

    fn fire(&mut self) -> Result<(), ReasonerError> {
        self.firings += 1;
        if self.firings > self.limit {
            return Err(ReasonerError::IterationCeiling { limit: self.limit });
        }
        Ok(())
    }

    fn saturate(&mut self) -> Result<(), ReasonerError> {
        while let Some(job) = self.queue.pop_front() {
            match job {
                Job::Implies(x, e) => self.implies(x, e)?,
                Job::Link(x, r, y) => self.link(x, r, y)?,
            }
        }
        Ok(())
    }

    fn implies(&mut self, x: CtxId, e: ExprId) -> Result<(), ReasonerError> {
        if self.contexts[x].has[e] {
            return Ok(());
        }
        self.fire()?;
        self.contexts[x].has[e] = true;
        self.contexts[x].list.push(e);

        match &self.index.nodes[e] {
            Node::And(parts) => {
                for &p in parts {
                    self.queue.push_back(Job::Implies(x, p));
                }
            }
            &Node::Some(r, f) => {
                let y = self.filler_context(f);
                self.queue.push_back(Job::Link(x, r, y));
            }
            Node::Top | Node::Atomic(_) => {}
        }
        for &t in &self.index.told[e] {
            self.queue.push_back(Job::Implies(x, t));
        }
        for &k in &self.index.conj_parents[e] {
            if let Node::And(parts) = &self.index.nodes[k] {
                if parts.iter().all(|&p| self.contexts[x].has[p]) {
                    self.queue.push_back(Job::Implies(x, k));
                }
            }
        }
        for &(r, z) in &self.contexts[x].preds {
            for &(s, ex) in &self.index.exists_by_filler[e] {
                if self.index.role_below[r][s] {
                    self.queue.push_back(Job::Implies(z, ex));
                }
            }
        }
        Ok(())
    }

    fn link(&mut self, x: CtxId, r: RoleId, y: CtxId) -> Result<(), ReasonerError> {
        if !self.contexts[x].succs.insert((r, y)) {
            return Ok(());
        }
        self.fire()?;
        self.contexts[y].preds.push((r, x));
        for &e in &self.contexts[y].list {
            for &(s, ex) in &self.index.exists_by_filler[e] {
                if self.index.role_below[r][s] {
                    self.queue.push_back(Job::Implies(x, ex));
                }
            }
        }
        Ok(())
    }

    fn named_subsumers(&self, ctx: CtxId) -> impl Iterator<Item = Name> + '_ {
        self.contexts[ctx].list.iter().filter_map(|&e| match &self.index.nodes[e] {
            Node::Top => Some(Name::new(THING)),
            Node::Atomic(n) => Some(n.clone()),
            _ => None,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::odl::parse_document;

    #[test]
    fn empty_kb_with_one_class() {
        let kb = parse_document("class A").unwrap();
        let rel = Saturation.classify(&kb).unwrap();
        let expected: Vec<(Name, Name)> = [("A", "A"), ("A", "Thing"), ("Thing", "Thing")]
            .iter()
            .map(|(a, b)| (Name::new(a), Name::new(b)))
            .collect();
        assert_eq!(rel.pairs.into_iter().collect::<Vec<_>>(), expected);
    }

    #[test]
    fn existential_monotonicity_through_definitions() {
        let kb = parse_document(
            "class RainwaterProtector\nclass Protection\nrole hasFunction\n\
             define Umbrella == exists hasFunction . RainwaterProtector\n\
             define Protector == exists hasFunction . Protection\n\
             sub RainwaterProtector <: Protection",
        )
        .unwrap();
        let rel = Saturation.classify(&kb).unwrap();
        assert!(rel.contains("Umbrella", "Protector"));
        assert!(!rel.contains("Protector", "Umbrella"));
    }

    #[test]
    fn role_hierarchy_lifts_existentials() {
        let kb = parse_document(
            "class A\nclass B\nrole r\nrole s\nsubrole r <: s\nsub A <: exists r . Thing\ndefine B == exists s . Thing",
        )
        .unwrap();
        assert!(Saturation.classify(&kb).unwrap().contains("A", "B"));
    }

    #[test]
    fn conjunction_composition() {
        let kb =
            parse_document("class A\nclass B\nclass C\nclass D\nsub A <: B\nsub A <: C\nsub B and C <: D").unwrap();
        assert!(Saturation.classify(&kb).unwrap().contains("A", "D"));
    }

    #[test]
    fn ceiling_is_generous_for_cyclic_kbs() {
        let kb = parse_document(
            "class A\nrole r\nsub A <: exists r . A\nsub exists r . A <: A\nind a\ntype a : A\nrel a r a",
        )
        .unwrap();
        let abox = Saturation.materialize(&kb).unwrap();
        assert!(abox.is_member("a", "A"));
    }

    #[test]
    fn role_links_closed_under_hierarchy() {
        let kb = parse_document("role r\nrole s\nsubrole r <: s\nind a\nind b\nrel a r b").unwrap();
        let abox = Saturation.materialize(&kb).unwrap();
        let links: Vec<_> = abox.role_links.iter().map(|(a, r, b)| format!("{a} {r} {b}")).collect();
        assert_eq!(links, ["a r b", "a s b"]);
    }
}
