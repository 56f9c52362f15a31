mod common;

use afford_kb::grid::Cell;
use afford_kb::odl::parse_document;
use afford_kb::reasoner::{NaiveOracle, Saturation};
use afford_kb::selection::{provides, ProviderSelector, SelectionError, Tier};
use afford_kb::sim::{tagged_kb, TagRecord, WorldObject, WorldState};
use afford_kb::{KnowledgeBase, Name};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

const OBJECTS: &[(&str, &str)] = &[
    ("umbrella1", "Umbrella"),
    ("raincoat1", "Raincoat"),
    ("hat1", "Hat"),
    ("cap1", "Cap"),
    ("helmet1", "Helmet"),
    ("newspaper1", "Newspaper"),
    ("mug1", "Mug"),
    ("knife1", "Knife"),
    ("papercutter1", "PaperCutter"),
];

const FUNCTIONS: &[&str] = &["RainwaterProtector", "UVProtector", "WaterStorage", "CuttingInstrument", "Stick"];

fn ontology() -> KnowledgeBase {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../cli/examples/umbrella.odl");
    parse_document(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn object(class: &str, cell: Cell, rank: i64, available: bool) -> WorldObject {
    let tag = TagRecord { tag_id: format!("tag-{cell}"), object_class: Name::new(class), payload: String::new() };
    WorldObject { tag, cell: Some(cell), available, rank }
}

fn random_world(rng: &mut ChaCha8Rng) -> WorldState {
    let mut world = WorldState::new(5, 5, Cell::new(0, 0)).unwrap();
    let mut cells: Vec<Cell> = (0..25).map(|i| Cell::new(i % 5, i / 5)).collect();
    cells.shuffle(rng);
    for (i, (id, class)) in OBJECTS.iter().enumerate() {
        if rng.gen_bool(0.6) {
            let o = object(class, cells[i], rng.gen_range(-1..=2), rng.gen_bool(0.8));
            world = world.with_object(id, o).unwrap();
        }
    }
    world
}

#[test]
fn selection_invariants_on_random_worlds() {
    let base = ontology();
    for seed in 0..200 {
        let mut rng = common::rng(seed);
        let world = random_world(&mut rng);
        let kb = tagged_kb(&base, &world).unwrap();
        let function = *FUNCTIONS.choose(&mut rng).unwrap();
        let selector = ProviderSelector::new(&Saturation);
        let result = selector.select(&kb, &world, function);

        // brute-force candidate set
        let mut expected = Vec::new();
        let mut unavailable = 0;
        for (id, o) in world.objects() {
            if provides(&kb, id, function).unwrap() {
                if o.available {
                    expected.push(id.clone());
                } else {
                    unavailable += 1;
                }
            }
        }
        assert_eq!(result, ProviderSelector::new(&NaiveOracle).select(&kb, &world, function), "seed {seed}");
        assert_eq!(result, selector.select(&kb, &world, function), "seed {seed}");

        let result = match result {
            Ok(r) => r,
            Err(SelectionError::NoProvider { function: f, unavailable_affording }) => {
                assert!(expected.is_empty(), "seed {seed}");
                assert_eq!(f.as_str(), function);
                assert_eq!(unavailable_affording, unavailable, "seed {seed}");
                continue;
            }
            Err(e) => panic!("seed {seed}: {e}"),
        };
        let mut listed: Vec<Name> =
            std::iter::once(&result.chosen).chain(&result.alternatives).map(|c| c.object_id.clone()).collect();
        listed.sort();
        assert_eq!(listed, expected, "seed {seed}");
        for alt in &result.alternatives {
            assert!(result.chosen.ranking(alt).is_lt(), "seed {seed}");
            assert!(alt.available);
        }
        for pair in result.alternatives.windows(2) {
            assert!(pair[0].ranking(&pair[1]).is_lt(), "seed {seed}");
        }
        let any_substantive = std::iter::once(&result.chosen)
            .chain(&result.alternatives)
            .any(|c| selector.is_substantive_provider(&kb, &c.object_id, function).unwrap());
        assert_eq!(result.chosen.tier == Tier::Substantive, any_substantive, "seed {seed}");

        // removing the chosen object never brings it back
        let without = world.without_object(&result.chosen.object_id);
        if let Ok(again) = selector.select(&kb, &without, function) {
            assert_ne!(again.chosen.object_id, result.chosen.object_id);
            assert_eq!(again.chosen, result.alternatives[0]);
        }

        // a further non-substantive provider does not displace a substantive one
        if result.chosen.tier == Tier::Substantive {
            let free = (0..25).map(|i| Cell::new(i % 5, i / 5)).find(|c| !world.is_occupied(*c)).unwrap();
            let extra_kb = kb.desugar_affords("mug1", function).unwrap();
            let extra = world.with_object("mug1", object("Mug", free, 100, true)).unwrap();
            let extra_kb = tagged_kb(&extra_kb, &extra).unwrap();
            if !selector.is_substantive_provider(&extra_kb, "mug1", function).unwrap() {
                assert_eq!(selector.select(&extra_kb, &extra, function).unwrap().chosen, result.chosen, "seed {seed}");
            }
        }
    }
}

#[test]
fn equal_ranks_fall_back_to_lexicographic_order() {
    let base = ontology();
    let mut world = WorldState::new(4, 1, Cell::new(0, 0)).unwrap();
    for (i, (id, class)) in [("raincoat1", "Raincoat"), ("newspaper1", "Newspaper"), ("hat1", "Hat")].iter().enumerate()
    {
        world = world.with_object(id, object(class, Cell::new(i as u32 + 1, 0), 0, true)).unwrap();
    }
    let kb = tagged_kb(&base, &world).unwrap();
    let r = ProviderSelector::new(&Saturation).select(&kb, &world, "RainwaterProtector").unwrap();
    assert_eq!(r.chosen.object_id.as_str(), "hat1");
    assert_eq!(r.chosen.tier, Tier::NonSubstantive);
}
