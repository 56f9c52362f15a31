//! Seeded random knowledge bases and grid worlds for property tests.
#![allow(dead_code)]

use afford_kb::grid::Cell;
use afford_kb::sim::{TagRecord, WorldObject, WorldState};
use afford_kb::{Assertion, Axiom, ClassExpression, KnowledgeBase, Name, TermKind, HAS_FUNCTION};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const MAX_CLASSES: usize = 12;
pub const MAX_ROLES: usize = 3;
pub const MAX_INDIVIDUALS: usize = 20;
pub const MAX_DEPTH: usize = 3;

pub struct Vocabulary {
    pub classes: Vec<String>,
    pub roles: Vec<String>,
    pub individuals: Vec<String>,
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// An expression with `depth()` at most `depth`. Conjunctions may come out
/// unsorted, nested or with repeated conjuncts.
pub fn random_expr(rng: &mut ChaCha8Rng, vocab: &Vocabulary, depth: usize) -> ClassExpression {
    let pick = if depth == 0 { rng.gen_range(0..10) } else { rng.gen_range(0..16) };
    match pick {
        0 => ClassExpression::Top,
        1..=9 => ClassExpression::atomic(vocab.classes.choose(rng).unwrap()),
        10..=12 => {
            let n = rng.gen_range(2..=3);
            let mut parts: Vec<ClassExpression> = (0..n).map(|_| random_expr(rng, vocab, depth - 1)).collect();
            if rng.gen_bool(0.2) {
                parts.push(parts[0].clone());
            }
            ClassExpression::Conjunction(parts)
        }
        _ => ClassExpression::exists(vocab.roles.choose(rng).unwrap(), random_expr(rng, vocab, depth - 1)),
    }
}

pub fn random_vocabulary(rng: &mut ChaCha8Rng) -> Vocabulary {
    let classes = (0..rng.gen_range(1..=MAX_CLASSES)).map(|i| format!("C{i}")).collect();
    let mut roles = vec![HAS_FUNCTION.to_string()];
    roles.extend((1..rng.gen_range(1..=MAX_ROLES)).map(|i| format!("r{i}")));
    let individuals = (0..rng.gen_range(0..=MAX_INDIVIDUALS)).map(|i| format!("i{i}")).collect();
    Vocabulary { classes, roles, individuals }
}

pub fn random_kb(seed: u64) -> KnowledgeBase {
    let mut rng = rng(seed);
    let vocab = random_vocabulary(&mut rng);
    random_kb_over(&mut rng, &vocab)
}

pub fn declare_all(vocab: &Vocabulary) -> KnowledgeBase {
    let mut kb = KnowledgeBase::new();
    for r in &vocab.roles {
        kb = kb.declare(r, TermKind::Role).unwrap();
    }
    for c in &vocab.classes {
        kb = kb.declare(c, TermKind::Class).unwrap();
    }
    for i in &vocab.individuals {
        kb = kb.declare(i, TermKind::Individual).unwrap();
    }
    kb
}

pub fn random_axiom(rng: &mut ChaCha8Rng, vocab: &Vocabulary, kb: &KnowledgeBase) -> Option<Axiom> {
    match rng.gen_range(0..10) {
        0..=4 => Some(Axiom::SubClassOf(random_expr(rng, vocab, MAX_DEPTH), random_expr(rng, vocab, MAX_DEPTH))),
        5..=6 => {
            let name = vocab.classes.choose(rng).unwrap();
            if kb.definition_of(name).is_some() {
                return None;
            }
            Some(Axiom::EquivalentClass(name.as_str().into(), random_expr(rng, vocab, MAX_DEPTH)))
        }
        7 => Some(Axiom::SubRoleOf(
            vocab.roles.choose(rng).unwrap().as_str().into(),
            vocab.roles.choose(rng).unwrap().as_str().into(),
        )),
        _ => Some(Axiom::SubstantiveFunction {
            object_class: vocab.classes.choose(rng).unwrap().as_str().into(),
            function_class: vocab.classes.choose(rng).unwrap().as_str().into(),
        }),
    }
}

pub fn random_kb_over(rng: &mut ChaCha8Rng, vocab: &Vocabulary) -> KnowledgeBase {
    let mut kb = declare_all(vocab);
    for _ in 0..rng.gen_range(0..=14) {
        if let Some(ax) = random_axiom(rng, vocab, &kb) {
            kb = kb.with_axiom(ax).unwrap();
        }
    }
    if vocab.individuals.is_empty() {
        return kb;
    }
    for _ in 0..rng.gen_range(0..=24) {
        let a = vocab.individuals.choose(rng).unwrap();
        kb = match rng.gen_range(0..6) {
            0..=2 => kb
                .with_assertion(Assertion::ClassAssertion(a.as_str().into(), random_expr(rng, vocab, MAX_DEPTH)))
                .unwrap(),
            3..=4 => {
                let b = vocab.individuals.choose(rng).unwrap();
                let r = vocab.roles.choose(rng).unwrap();
                kb.with_assertion(Assertion::RoleAssertion(a.as_str().into(), r.as_str().into(), b.as_str().into()))
                    .unwrap()
            }
            _ => kb.desugar_affords(a, vocab.classes.choose(rng).unwrap()).unwrap(),
        };
    }
    kb
}

/// A random query expression over the knowledge base's own vocabulary.
pub fn random_query(rng: &mut ChaCha8Rng, kb: &KnowledgeBase) -> ClassExpression {
    let vocab = Vocabulary {
        classes: kb.classes().filter(|c| !c.is_generated()).map(|c| c.to_string()).collect(),
        roles: kb.roles().map(|r| r.to_string()).collect(),
        individuals: Vec::new(),
    };
    random_expr(rng, &vocab, MAX_DEPTH)
}

pub fn user_individuals(kb: &KnowledgeBase) -> Vec<String> {
    kb.individuals().filter(|i| !i.is_generated()).map(|i| i.to_string()).collect()
}

pub const SIDE: u32 = 8;

pub fn random_grid(rng: &mut ChaCha8Rng) -> (WorldState, Cell, Cell) {
    let mut world = WorldState::new(SIDE, SIDE, Cell::new(0, 0)).unwrap();
    let density = rng.gen_range(0.0..0.4);
    for y in 0..SIDE {
        for x in 0..SIDE {
            if rng.gen_bool(density) {
                let tag =
                    TagRecord { tag_id: format!("t{x}{y}"), object_class: Name::new("Box"), payload: String::new() };
                let obj = WorldObject { tag, cell: Some(Cell::new(x, y)), available: true, rank: 0 };
                world = world.with_object(&format!("o{x}_{y}"), obj).unwrap();
            }
        }
    }
    let mut cell = || Cell::new(rng.gen_range(0..SIDE), rng.gen_range(0..SIDE));
    (world, cell(), cell())
}

/// Distances by repeated relaxation over the whole grid until nothing
/// changes.
pub fn oracle_distance(world: &WorldState, from: Cell, to: Cell) -> Option<usize> {
    let n = SIDE as i64;
    let passable = |x: i64, y: i64| {
        let c = Cell::new(x as u32, y as u32);
        c == from || c == to || !world.is_occupied(c)
    };
    let mut dist = vec![usize::MAX; (n * n) as usize];
    let at = |x: i64, y: i64| (y * n + x) as usize;
    dist[at(from.x as i64, from.y as i64)] = 0;
    loop {
        let mut changed = false;
        for y in 0..n {
            for x in 0..n {
                if !passable(x, y) {
                    continue;
                }
                for (nx, ny) in [(x - 1, y), (x + 1, y), (x, y - 1), (x, y + 1)] {
                    if (0..n).contains(&nx) && (0..n).contains(&ny) && dist[at(nx, ny)] != usize::MAX {
                        let d = dist[at(nx, ny)] + 1;
                        if d < dist[at(x, y)] {
                            dist[at(x, y)] = d;
                            changed = true;
                        }
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    let d = dist[at(to.x as i64, to.y as i64)];
    (d != usize::MAX).then_some(d)
}
