//! The genealogy graph: persons as vertices, parental and marital bonds as
//! edges, and the six constraints that make a tree "traditional".

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::ops::Deref;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::kin_term::BasicKin;
use crate::temporal::{before, TimePoint};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Sex {
    Male,
    Female,
}

impl Sex {
    pub fn as_str(&self) -> &'static str {
        match self {
            Sex::Male => "MALE",
            Sex::Female => "FEMALE",
        }
    }
}

impl fmt::Display for Sex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Person {
    pub id: String,
    pub name: String,
    pub sex: Sex,
    pub birthdate: TimePoint,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub birthplace: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ParentalBond {
    pub parent: String,
    pub child: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MaritalBond {
    pub a: String,
    pub b: String,
    pub wedding: TimePoint,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Bond {
    Parental(ParentalBond),
    Marital(MaritalBond),
}

/// Position of a person in the tree's insertion order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PersonIdx(pub(crate) usize);

impl PersonIdx {
    pub fn index(self) -> usize {
        self.0
    }
}

/// The tree is not even a graph: something refers to nothing.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("duplicate person id `{0}`")]
    DuplicatePerson(String),
    #[error("bond refers to unknown person `{0}`")]
    DanglingPerson(String),
    #[error("person `{0}` is bonded to themself")]
    SelfBond(String),
    #[error("duplicate parental bond {0} -> {1}")]
    DuplicateParental(String, String),
    #[error("duplicate marital bond between `{0}` and `{1}`")]
    DuplicateMarital(String, String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Constraint {
    /// Any finite number of children. A finite input cannot break it.
    C1,
    /// At most two parents, of different sex.
    C2,
    /// At most one spouse, of different sex.
    C3,
    /// A spouse is not a parent, child or sibling.
    C4,
    /// The wedding is strictly after both spouses were born.
    C5,
    /// Parents are born strictly before their children.
    C6,
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstraintViolation {
    pub constraint: Constraint,
    /// Ids of the persons involved, in the order they appear in the offending bond.
    pub subjects: Vec<String>,
    pub detail: String,
}

impl fmt::Display for ConstraintViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} [{}]: {}",
            self.constraint,
            self.subjects.join(", "),
            self.detail
        )
    }
}

/// A structurally well-formed genealogy. It may still break the traditional
/// constraints; see [`TraditionalTree`] for the queryable form.
#[derive(Debug, Clone)]
pub struct FamilyTree {
    persons: Vec<Person>,
    by_id: HashMap<String, PersonIdx>,
    parental: Vec<(PersonIdx, PersonIdx)>,
    marital: Vec<(PersonIdx, PersonIdx, TimePoint)>,
    parents: Vec<Vec<PersonIdx>>,
    children: Vec<Vec<PersonIdx>>,
    spouses: Vec<Vec<PersonIdx>>,
}

impl FamilyTree {
    pub fn new(persons: Vec<Person>, bonds: Vec<Bond>) -> Result<Self, StructureError> {
        let mut by_id = HashMap::with_capacity(persons.len());
        for (i, p) in persons.iter().enumerate() {
            if by_id.insert(p.id.clone(), PersonIdx(i)).is_some() {
                return Err(StructureError::DuplicatePerson(p.id.clone()));
            }
        }
        let resolve = |id: &str| {
            by_id
                .get(id)
                .copied()
                .ok_or_else(|| StructureError::DanglingPerson(id.to_string()))
        };

        let n = persons.len();
        let mut tree = FamilyTree {
            parental: Vec::new(),
            marital: Vec::new(),
            parents: vec![Vec::new(); n],
            children: vec![Vec::new(); n],
            spouses: vec![Vec::new(); n],
            persons: Vec::new(),
            by_id: HashMap::new(),
        };
        let mut seen_parental = HashSet::new();
        let mut seen_marital = HashSet::new();
        for bond in &bonds {
            match bond {
                Bond::Parental(b) => {
                    let (parent, child) = (resolve(&b.parent)?, resolve(&b.child)?);
                    if parent == child {
                        return Err(StructureError::SelfBond(b.parent.clone()));
                    }
                    if !seen_parental.insert((parent, child)) {
                        return Err(StructureError::DuplicateParental(
                            b.parent.clone(),
                            b.child.clone(),
                        ));
                    }
                    tree.parental.push((parent, child));
                    tree.parents[child.0].push(parent);
                    tree.children[parent.0].push(child);
                }
                Bond::Marital(b) => {
                    let (x, y) = (resolve(&b.a)?, resolve(&b.b)?);
                    if x == y {
                        return Err(StructureError::SelfBond(b.a.clone()));
                    }
                    if !seen_marital.insert((x.min(y), x.max(y))) {
                        return Err(StructureError::DuplicateMarital(b.a.clone(), b.b.clone()));
                    }
                    tree.marital.push((x, y, b.wedding));
                    tree.spouses[x.0].push(y);
                    tree.spouses[y.0].push(x);
                }
            }
        }
        for list in tree
            .parents
            .iter_mut()
            .chain(&mut tree.children)
            .chain(&mut tree.spouses)
        {
            list.sort_unstable();
        }
        tree.persons = persons;
        tree.by_id = by_id;
        Ok(tree)
    }

    pub fn builder() -> TreeBuilder {
        TreeBuilder::default()
    }

    pub fn len(&self) -> usize {
        self.persons.len()
    }

    pub fn is_empty(&self) -> bool {
        self.persons.is_empty()
    }

    pub fn persons(&self) -> &[Person] {
        &self.persons
    }

    pub fn indices(&self) -> impl ExactSizeIterator<Item = PersonIdx> + Clone {
        (0..self.persons.len()).map(PersonIdx)
    }

    pub fn lookup(&self, id: &str) -> Option<PersonIdx> {
        self.by_id.get(id).copied()
    }

    pub fn person(&self, idx: PersonIdx) -> &Person {
        &self.persons[idx.0]
    }

    pub fn id(&self, idx: PersonIdx) -> &str {
        &self.persons[idx.0].id
    }

    pub fn sex(&self, idx: PersonIdx) -> Sex {
        self.persons[idx.0].sex
    }

    pub fn parents(&self, idx: PersonIdx) -> &[PersonIdx] {
        &self.parents[idx.0]
    }

    pub fn children(&self, idx: PersonIdx) -> &[PersonIdx] {
        &self.children[idx.0]
    }

    pub fn spouses(&self, idx: PersonIdx) -> &[PersonIdx] {
        &self.spouses[idx.0]
    }

    /// Reassembles the bond list, parental bonds first.
    pub fn bonds(&self) -> Vec<Bond> {
        let parental = self.parental.iter().map(|&(p, c)| {
            Bond::Parental(ParentalBond {
                parent: self.id(p).into(),
                child: self.id(c).into(),
            })
        });
        let marital = self.marital.iter().map(|&(a, b, wedding)| {
            Bond::Marital(MaritalBond {
                a: self.id(a).into(),
                b: self.id(b).into(),
                wedding,
            })
        });
        parental.chain(marital).collect()
    }

    /// The result of one basic kinship function applied to `idx`. The sex
    /// filter applies to the related person, not to `idx`.
    pub fn basic_kin(&self, kin: BasicKin, idx: PersonIdx) -> impl Iterator<Item = PersonIdx> + '_ {
        let (pool, sex) = match kin {
            BasicKin::Father => (self.parents(idx), Sex::Male),
            BasicKin::Mother => (self.parents(idx), Sex::Female),
            BasicKin::Son => (self.children(idx), Sex::Male),
            BasicKin::Daughter => (self.children(idx), Sex::Female),
            BasicKin::Husband => (self.spouses(idx), Sex::Male),
            BasicKin::Wife => (self.spouses(idx), Sex::Female),
        };
        pool.iter().copied().filter(move |&q| self.sex(q) == sex)
    }

    /// The persons `q` with `idx ∈ basic_kin(kin, q)`.
    pub fn basic_kin_converse(
        &self,
        kin: BasicKin,
        idx: PersonIdx,
    ) -> impl Iterator<Item = PersonIdx> + '_ {
        let required = if kin.is_male() {
            Sex::Male
        } else {
            Sex::Female
        };
        let pool: &[PersonIdx] = if self.sex(idx) != required {
            &[]
        } else {
            match kin {
                BasicKin::Father | BasicKin::Mother => self.children(idx),
                BasicKin::Son | BasicKin::Daughter => self.parents(idx),
                BasicKin::Husband | BasicKin::Wife => self.spouses(idx),
            }
        };
        pool.iter().copied()
    }

    fn is_sibling(&self, x: PersonIdx, y: PersonIdx) -> bool {
        self.parents(x).iter().any(|p| self.parents(y).contains(p))
    }

    /// Checks the six traditional constraints. An empty result means the tree
    /// is traditional.
    pub fn validate(&self) -> Vec<ConstraintViolation> {
        let mut out = Vec::new();
        let ids = |xs: &[PersonIdx]| {
            xs.iter()
                .map(|&x| self.id(x).to_string())
                .collect::<Vec<_>>()
        };
        let mut violation = |constraint, subjects, detail: String| {
            out.push(ConstraintViolation {
                constraint,
                subjects,
                detail,
            })
        };

        for p in self.indices() {
            let parents = self.parents(p);
            if parents.len() > 2 {
                let mut subjects = vec![self.id(p).to_string()];
                subjects.extend(ids(parents));
                violation(
                    Constraint::C2,
                    subjects,
                    format!("{} parents", parents.len()),
                );
            } else if let [x, y] = parents {
                if self.sex(*x) == self.sex(*y) {
                    violation(
                        Constraint::C2,
                        ids(&[p, *x, *y]),
                        "both parents have the same sex".into(),
                    );
                }
            }
            let spouses = self.spouses(p);
            if spouses.len() > 1 {
                let mut subjects = vec![self.id(p).to_string()];
                subjects.extend(ids(spouses));
                violation(
                    Constraint::C3,
                    subjects,
                    format!("{} spouses", spouses.len()),
                );
            }
        }

        for &(a, b, wedding) in &self.marital {
            let subjects = ids(&[a, b]);
            if self.sex(a) == self.sex(b) {
                violation(
                    Constraint::C3,
                    subjects.clone(),
                    "spouses have the same sex".into(),
                );
            }
            if self.parents(a).contains(&b) || self.parents(b).contains(&a) {
                violation(
                    Constraint::C4,
                    subjects.clone(),
                    "spouse is a parent or child".into(),
                );
            } else if self.is_sibling(a, b) {
                violation(
                    Constraint::C4,
                    subjects.clone(),
                    "spouses are siblings".into(),
                );
            }
            for s in [a, b] {
                if !before(self.person(s).birthdate, wedding) {
                    violation(
                        Constraint::C5,
                        subjects.clone(),
                        format!("wedding {wedding} is not after the birth of {}", self.id(s)),
                    );
                }
            }
        }

        for &(parent, child) in &self.parental {
            let (pb, cb) = (self.person(parent).birthdate, self.person(child).birthdate);
            if !before(pb, cb) {
                violation(
                    Constraint::C6,
                    ids(&[parent, child]),
                    format!("parent born {pb}, child born {cb}"),
                );
            }
        }
        out
    }
}

/// Convenience constructor, mostly for tests and generators.
#[derive(Debug, Default)]
pub struct TreeBuilder {
    persons: Vec<Person>,
    bonds: Vec<Bond>,
}

impl TreeBuilder {
    /// Panics on a malformed date literal.
    pub fn person(mut self, id: &str, sex: Sex, birthdate: &str) -> Self {
        self.persons.push(Person {
            id: id.into(),
            name: id.into(),
            sex,
            birthdate: birthdate.parse().expect("valid date literal"),
            birthplace: None,
        });
        self
    }

    pub fn add_person(mut self, person: Person) -> Self {
        self.persons.push(person);
        self
    }

    pub fn parent(mut self, parent: &str, child: &str) -> Self {
        self.bonds.push(Bond::Parental(ParentalBond {
            parent: parent.into(),
            child: child.into(),
        }));
        self
    }

    pub fn marry(mut self, a: &str, b: &str, wedding: &str) -> Self {
        self.bonds.push(Bond::Marital(MaritalBond {
            a: a.into(),
            b: b.into(),
            wedding: wedding.parse().expect("valid date literal"),
        }));
        self
    }

    pub fn build(self) -> Result<FamilyTree, StructureError> {
        FamilyTree::new(self.persons, self.bonds)
    }
}

/// A tree that passed validation. Only this form is queryable.
#[derive(Debug, Clone)]
pub struct TraditionalTree(FamilyTree);

#[derive(Debug, Clone, Error)]
#[error("tree violates {} traditional constraint(s)", violations.len())]
pub struct InvalidTree {
    pub tree: Box<FamilyTree>,
    pub violations: Vec<ConstraintViolation>,
}

impl TraditionalTree {
    pub fn new(tree: FamilyTree) -> Result<Self, InvalidTree> {
        let violations = tree.validate();
        if violations.is_empty() {
            Ok(TraditionalTree(tree))
        } else {
            Err(InvalidTree {
                tree: Box::new(tree),
                violations,
            })
        }
    }

    pub fn into_inner(self) -> FamilyTree {
        self.0
    }
}

impl Deref for TraditionalTree {
    type Target = FamilyTree;

    fn deref(&self) -> &FamilyTree {
        &self.0
    }
}

impl TryFrom<FamilyTree> for TraditionalTree {
    type Error = InvalidTree;

    fn try_from(tree: FamilyTree) -> Result<Self, Self::Error> {
        TraditionalTree::new(tree)
    }
}

/// Sorted, deduplicated ids for a set of persons.
pub fn sorted_ids(tree: &FamilyTree, set: impl IntoIterator<Item = PersonIdx>) -> Vec<&str> {
    let mut ids: Vec<&str> = set
        .into_iter()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .map(|i| tree.id(i))
        .collect();
    ids.sort_unstable();
    ids
}
