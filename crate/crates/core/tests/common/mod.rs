//! Shared fixtures and reference implementations for the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::PathBuf;

use kisp::family::{Bond, Sex};
use kisp::tree_file::load_tree;
use kisp::{BasicKin, KinTerm, PersonIdx, PersonSet, TraditionalTree};
use rand::Rng;

pub fn fixture(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(rel)
}

pub fn read_fixture(rel: &str) -> String {
    std::fs::read_to_string(fixture(rel)).unwrap_or_else(|e| panic!("{rel}: {e}"))
}

pub fn smith() -> TraditionalTree {
    TraditionalTree::new(load_tree(fixture("smith.tree")).expect("fixture loads"))
        .expect("fixture is traditional")
}

pub fn idx(tree: &TraditionalTree, id: &str) -> PersonIdx {
    tree.lookup(id).unwrap_or_else(|| panic!("no person {id}"))
}

pub fn ids(tree: &TraditionalTree, set: &PersonSet) -> Vec<String> {
    let mut v: Vec<String> = set.iter().map(|&p| tree.id(p).to_string()).collect();
    v.sort();
    v
}

/// A relation as the set of pairs `(x, y)` with `y` reachable from `x`.
pub type Relation = BTreeSet<(usize, usize)>;

/// Builds the relation of a term straight from the bond list, without going
/// through the tree's adjacency or the evaluator.
pub struct RelationalOracle {
    bonds: Vec<(usize, usize)>,
    marriages: Vec<(usize, usize)>,
    male: Vec<bool>,
    pub persons: Vec<PersonIdx>,
}

impl RelationalOracle {
    pub fn new(tree: &TraditionalTree) -> Self {
        let pos = |id: &str| {
            tree.persons()
                .iter()
                .position(|p| p.id == id)
                .expect("bond endpoint exists")
        };
        let male: Vec<bool> = tree.persons().iter().map(|p| p.sex == Sex::Male).collect();
        let mut bonds = Vec::new();
        let mut marriages = Vec::new();
        for b in tree.bonds() {
            match b {
                Bond::Parental(pb) => bonds.push((pos(&pb.parent), pos(&pb.child))),
                Bond::Marital(mb) => marriages.push((pos(&mb.a), pos(&mb.b))),
            }
        }
        RelationalOracle {
            bonds,
            marriages,
            male,
            persons: tree.indices().collect(),
        }
    }

    fn atom(&self, k: BasicKin) -> Relation {
        let mut r = Relation::new();
        for &(p, c) in &self.bonds {
            match k {
                BasicKin::Father if self.male[p] => r.insert((c, p)),
                BasicKin::Mother if !self.male[p] => r.insert((c, p)),
                BasicKin::Son if self.male[c] => r.insert((p, c)),
                BasicKin::Daughter if !self.male[c] => r.insert((p, c)),
                _ => false,
            };
        }
        for &(a, b) in &self.marriages {
            for (x, y) in [(a, b), (b, a)] {
                let hit = match k {
                    BasicKin::Husband => self.male[y],
                    BasicKin::Wife => !self.male[y],
                    _ => false,
                };
                if hit {
                    r.insert((x, y));
                }
            }
        }
        r
    }

    pub fn relation(&self, t: &KinTerm) -> Relation {
        self.rel(t, false)
    }

    fn rel(&self, t: &KinTerm, flip: bool) -> Relation {
        match t {
            KinTerm::Basic(k) => self.atom(if flip { k.opposite() } else { *k }),
            KinTerm::Concat(a, b) => {
                let (ra, rb) = (self.rel(a, flip), self.rel(b, flip));
                let mut out = Relation::new();
                for &(x, y) in &rb {
                    for &(y2, z) in ra.range((y, 0)..=(y, usize::MAX)) {
                        debug_assert_eq!(y, y2);
                        out.insert((x, z));
                    }
                }
                out
            }
            KinTerm::Fork(a, b) => {
                let mut out = self.rel(a, flip);
                out.extend(self.rel(b, flip));
                out
            }
            KinTerm::Inverse(a) => self.rel(a, flip).into_iter().map(|(x, y)| (y, x)).collect(),
            KinTerm::Dual(a) => self.rel(a, !flip),
        }
    }

    pub fn apply(&self, r: &Relation, input: &PersonSet) -> PersonSet {
        r.iter()
            .filter(|(x, _)| input.contains(&self.persons[*x]))
            .map(|&(_, y)| self.persons[y])
            .collect()
    }
}

pub struct TermGen {
    /// Allow inverse and dual nodes.
    pub operators: bool,
    pub max_depth: usize,
}

impl TermGen {
    /// A random term with at most `concats` concatenation nodes.
    pub fn term<R: Rng>(&self, rng: &mut R, concats: usize) -> KinTerm {
        let mut budget = concats;
        self.node(rng, &mut budget, 0)
    }

    fn node<R: Rng>(&self, rng: &mut R, budget: &mut usize, depth: usize) -> KinTerm {
        let atom = |rng: &mut R| KinTerm::Basic(BasicKin::ALL[rng.random_range(0..6)]);
        if depth >= self.max_depth {
            return atom(rng);
        }
        match rng.random_range(0..10) {
            0..=2 => atom(rng),
            3..=5 if *budget > 0 => {
                *budget -= 1;
                let a = self.node(rng, budget, depth + 1);
                KinTerm::concat(a, self.node(rng, budget, depth + 1))
            }
            6 | 7 => {
                let a = self.node(rng, budget, depth + 1);
                KinTerm::fork(a, self.node(rng, budget, depth + 1))
            }
            8 if self.operators => KinTerm::inverse(self.node(rng, budget, depth + 1)),
            9 if self.operators => KinTerm::dual(self.node(rng, budget, depth + 1)),
            _ => atom(rng),
        }
    }

    /// A chain of exactly `concats + 1` blocks: atoms, the parent/child/spouse
    /// forks that dictionaries are built from, and the odd random fork.
    pub fn chain<R: Rng>(&self, rng: &mut R, concats: usize) -> KinTerm {
        use BasicKin::*;
        let blocks = (0..=concats).map(|_| {
            let atom = |rng: &mut R| KinTerm::Basic(BasicKin::ALL[rng.random_range(0..6)]);
            match rng.random_range(0..20) {
                0..=9 => atom(rng),
                10..=16 => {
                    let (a, b) = [(Father, Mother), (Son, Daughter), (Husband, Wife)]
                        [rng.random_range(0..3)];
                    KinTerm::fork(a, b)
                }
                _ => KinTerm::fork(atom(rng), atom(rng)),
            }
        });
        KinTerm::concat_all(blocks).expect("at least one block")
    }
}

pub fn random_subset<R: Rng>(rng: &mut R, persons: &[PersonIdx]) -> PersonSet {
    persons
        .iter()
        .copied()
        .filter(|_| rng.random_bool(0.5))
        .collect()
}

/// Brute-force answers to the query programs under `fixtures/queries`, worked
/// out from the bond list and birthdates with `ego = eli`. Each entry is the
/// program name and the lines it should print.
pub fn golden_expectations(tree: &TraditionalTree) -> Vec<(&'static str, Vec<String>)> {
    let mut parental = Vec::new();
    let mut married = BTreeSet::new();
    for b in tree.bonds() {
        match b {
            Bond::Parental(p) => parental.push((p.parent, p.child)),
            Bond::Marital(m) => {
                married.insert(m.a);
                married.insert(m.b);
            }
        }
    }
    let list = |pred: &dyn Fn(&kisp::Person) -> bool| {
        let ids: Vec<&str> = tree
            .persons()
            .iter()
            .filter(|p| pred(p))
            .map(|p| p.id.as_str())
            .collect();
        format!("({})", ids.join(" "))
    };
    let up = |set: &BTreeSet<String>| -> BTreeSet<String> {
        parental
            .iter()
            .filter(|(_, c)| set.contains(c))
            .map(|(p, _)| p.clone())
            .collect()
    };
    let down = |set: &BTreeSet<String>| -> BTreeSet<String> {
        parental
            .iter()
            .filter(|(p, _)| set.contains(p))
            .map(|(_, c)| c.clone())
            .collect()
    };
    let ego = BTreeSet::from(["eli".to_string()]);
    let cousins = down(&down(&up(&up(&ego)))).len() as i64 - 1;
    let ymd = |p: &kisp::Person| (p.birthdate.year(), p.birthdate.month(), p.birthdate.day());
    let husbands = list(&|p| p.sex == Sex::Male && married.contains(&p.id));
    vec![
        (
            "with_children",
            vec![list(&|p| parental.iter().any(|(q, _)| *q == p.id))],
        ),
        ("husbands", vec![husbands.clone(), husbands]),
        ("cousins", vec![cousins.to_string()]),
        (
            "wwii",
            vec![list(&|p| (1939, 9, 1) <= ymd(p) && ymd(p) <= (1945, 9, 2))],
        ),
        ("higher_order", vec!["16".into(), "2".into()]),
    ]
}

/// Runs one query program against `tree` with `ego = eli`.
pub fn run_query(tree: &std::sync::Arc<TraditionalTree>, name: &str) -> Vec<String> {
    let now = kisp::Timeline::new("15.10.2026".parse().unwrap());
    let mut interp = kisp::Interpreter::new(tree.clone(), now);
    interp.bind_person("ego", "eli").expect("ego exists");
    let mut out = Vec::new();
    interp
        .run_script(&read_fixture(&format!("queries/{name}.kisp")), &mut out)
        .expect("query runs");
    String::from_utf8(out)
        .unwrap()
        .lines()
        .map(str::to_string)
        .collect()
}
